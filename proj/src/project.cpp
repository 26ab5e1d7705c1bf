#include "hazop/project.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace hazop {

namespace fs = std::filesystem;

std::string read_text_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ProjectError("cannot read " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw ProjectError("error while reading " + path.string());
  return buffer.str();
}

namespace {

std::string trim(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = text.find_last_not_of(" \t\r");
  return std::string(text.substr(first, last - first + 1));
}

ProjectConfig default_config(const fs::path& root) {
  return ProjectConfig{root, root / "model", root / "registry.json", root / "project.hza",
                       root / "out"};
}

}  // namespace

ProjectConfig parse_project_config(std::string_view text, const fs::path& root) {
  ProjectConfig config = default_config(root);
  std::istringstream in{std::string(text)};
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    std::string content = trim(line);
    if (content.empty() || content.front() == '#') continue;
    const auto eq = content.find('=');
    if (eq == std::string::npos) {
      throw ProjectError(std::string(kConfigFileName) + ":" + std::to_string(line_number) +
                         ": expected key = \"value\"");
    }
    const std::string key = trim(std::string_view(content).substr(0, eq));
    std::string value = trim(std::string_view(content).substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
      value = value.substr(1, value.size() - 2);
    }
    if (value.empty()) {
      throw ProjectError(std::string(kConfigFileName) + ":" + std::to_string(line_number) +
                         ": empty value for " + key);
    }
    const fs::path resolved = fs::path(value).is_absolute() ? fs::path(value) : root / value;
    if (key == "model_dir") {
      config.model_dir = resolved;
    } else if (key == "registry") {
      config.registry = resolved;
    } else if (key == "analysis") {
      config.analysis = resolved;
    } else if (key == "out_dir") {
      config.out_dir = resolved;
    } else {
      throw ProjectError(std::string(kConfigFileName) + ":" + std::to_string(line_number) +
                         ": unknown key " + key);
    }
  }
  return config;
}

ProjectConfig load_project_config(const fs::path& root) {
  const fs::path file = root / kConfigFileName;
  if (!fs::exists(file)) return default_config(root);
  return parse_project_config(read_text_file(file), root);
}

std::optional<fs::path> resolve_registry_path(const ProjectConfig& config) {
  if (fs::exists(config.registry)) return config.registry;
  if (const char* env = std::getenv(kRegistryEnvVar); env && *env) return fs::path(env);
  return std::nullopt;
}

std::vector<SourceFile> read_model_sources(const fs::path& model_dir) {
  std::vector<SourceFile> sources;
  if (!fs::is_directory(model_dir)) {
    throw ProjectError("model directory " + model_dir.string() + " does not exist");
  }
  for (const auto& entry : fs::directory_iterator(model_dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".hzm") {
      sources.push_back(SourceFile{entry.path().string(), read_text_file(entry.path())});
    }
  }
  std::sort(sources.begin(), sources.end(),
            [](const SourceFile& a, const SourceFile& b) { return a.path < b.path; });
  return sources;
}

Project load_project(const fs::path& root) {
  Project project;
  project.config = load_project_config(root);

  ParseResult parsed = parse_model(read_model_sources(project.config.model_dir));
  for (const auto& e : parsed.errors) project.diagnostics.push_back(to_diagnostic(e));
  if (parsed.model) {
    project.model = std::move(*parsed.model);
    auto validation = validate_model(*project.model);
    project.diagnostics.insert(project.diagnostics.end(), validation.begin(), validation.end());
  }

  if (auto registry_path = resolve_registry_path(project.config)) {
    if (!fs::exists(*registry_path)) {
      throw ProjectError("registry " + registry_path->string() + " does not exist");
    }
    RegistryLoadResult loaded = load_registry(*registry_path);
    project.diagnostics.insert(project.diagnostics.end(), loaded.diagnostics.begin(),
                               loaded.diagnostics.end());
    project.registry = loaded.registry ? std::move(*loaded.registry) : default_registry();
  } else {
    project.registry = default_registry();
  }

  if (fs::exists(project.config.analysis)) {
    try {
      project.store = load_store(project.config.analysis);
    } catch (const StoreError& e) {
      throw ProjectError(project.config.analysis.string() + ": " + e.what());
    }
  }
  return project;
}

std::vector<Diagnostic> project_diagnostics(const Project& project) {
  std::vector<Diagnostic> all = project.diagnostics;
  if (project.model) {
    auto consistency = check_consistency(*project.model, project.store);
    const std::string store_file = project.config.analysis.string();
    for (auto& d : consistency) {
      if (!d.span) d.span = SourceSpan{store_file, 1, 1, 0};
      all.push_back(std::move(d));
    }
  }
  sort_diagnostics(all);
  return all;
}

void init_project(const fs::path& root) {
  const ProjectConfig config = default_config(root);
  if (fs::exists(root / kConfigFileName) || fs::exists(config.analysis) ||
      fs::exists(config.registry) || fs::exists(config.model_dir)) {
    throw ProjectError(root.string() + " already contains a project");
  }
  fs::create_directories(config.model_dir);
  fs::create_directories(config.out_dir);

  std::string registry_text;
  if (const char* env = std::getenv(kRegistryEnvVar); env && *env) {
    registry_text = read_text_file(env);
    if (!load_registry_text(registry_text, env).ok()) {
      throw ProjectError(std::string(env) + " is not a valid guide-word registry");
    }
  } else {
    registry_text = std::string(default_registry_text());
  }
  write_file_atomic(config.registry, registry_text);

  write_file_atomic(root / kConfigFileName,
                    "# Project layout; paths are relative to this file.\n"
                    "model_dir = \"model\"\n"
                    "registry = \"registry.json\"\n"
                    "analysis = \"project.hza\"\n"
                    "out_dir = \"out\"\n");
  const std::string name = root.filename().empty() ? root.parent_path().filename().string()
                                                   : root.filename().string();
  ProjectModel model;
  model.name = name.empty() ? "Project" : name;
  write_file_atomic(config.model_dir / "model.hzm", serialize_model(model));
  save_store(AnalysisStore{}, config.analysis);
}

}  // namespace hazop
