#pragma once

// On-disk project layout shared by the command line and the HTTP service.
//
//   <root>/hazop.toml     optional key = "value" overrides (see README)
//   <root>/model/*.hzm    model text
//   <root>/registry.json  guide-word registry (built-in default when absent)
//   <root>/project.hza    analysis store
//   <root>/out/           report and CSV output

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hazop/diagnostic.hpp"
#include "hazop/dsl.hpp"
#include "hazop/model.hpp"
#include "hazop/registry.hpp"
#include "hazop/store.hpp"

namespace hazop {

/// Environment variable naming the registry used when the project has none.
inline constexpr const char* kRegistryEnvVar = "HAZOP_REGISTRY";
inline constexpr const char* kConfigFileName = "hazop.toml";

struct ProjectConfig {
  std::filesystem::path root;
  std::filesystem::path model_dir;
  std::filesystem::path registry;
  std::filesystem::path analysis;
  std::filesystem::path out_dir;
};

/// Unreadable or malformed project files.
class ProjectError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Default layout below `root`, overridden by `root/hazop.toml` when present.
/// Relative paths in the config file are resolved against `root`.
ProjectConfig load_project_config(const std::filesystem::path& root);

/// Parses the key = value config text. Keys: model_dir, registry, analysis,
/// out_dir. Throws ProjectError on unknown keys or malformed lines.
ProjectConfig parse_project_config(std::string_view text, const std::filesystem::path& root);

struct Project {
  ProjectConfig config;
  /// Absent when the model text has syntax errors.
  std::optional<ProjectModel> model;
  GuideWordRegistry registry;
  AnalysisStore store;
  /// Parse, model-validation and registry diagnostics (not store consistency).
  std::vector<Diagnostic> diagnostics;
};

/// Registry file actually used: the configured file when it exists, else
/// $HAZOP_REGISTRY when set, else none (built-in default).
std::optional<std::filesystem::path> resolve_registry_path(const ProjectConfig& config);

std::vector<SourceFile> read_model_sources(const std::filesystem::path& model_dir);

/// Loads everything; throws ProjectError when a file exists but cannot be
/// read or the store is malformed.
Project load_project(const std::filesystem::path& root);

/// Model, registry and consistency diagnostics, sorted.
std::vector<Diagnostic> project_diagnostics(const Project& project);

/// Scaffolds an empty project. Fails if `root` already holds one.
void init_project(const std::filesystem::path& root);

std::string read_text_file(const std::filesystem::path& path);

}  // namespace hazop
