#include "hazop/cli.hpp"

#include <CLI11.hpp>

#include <csignal>
#include <iostream>

#include "hazop/merge.hpp"
#include "hazop/metrics.hpp"
#include "hazop/project.hpp"
#include "hazop/report.hpp"
#include "hazop/service.hpp"

namespace hazop {

namespace {

namespace fs = std::filesystem;

struct Options {
  std::string project = ".";
  std::string init_dir;
  bool no_timestamp = false;
  bool force = false;
  std::string out_dir;
  bool csv = false;
  int port = 8080;
  std::string bind = "127.0.0.1";
};

void print_diagnostics(const std::vector<Diagnostic>& diagnostics, std::ostream& out) {
  std::size_t warnings = 0;
  for (const auto& d : diagnostics) {
    out << format_diagnostic(d) << '\n';
    warnings += d.severity == Severity::warning;
  }
  out << count_errors(diagnostics) << " error(s), " << warnings << " warning(s)\n";
}

/// Loads the project and insists on a model without errors; prints the
/// blocking diagnostics otherwise.
std::optional<Project> load_valid(const Options& o, std::ostream& err) {
  Project project = load_project(o.project);
  if (!project.model || has_errors(project.diagnostics)) {
    sort_diagnostics(project.diagnostics);
    print_diagnostics(project.diagnostics, err);
    return std::nullopt;
  }
  return project;
}

fs::path out_dir_of(const Options& o, const Project& project) {
  return o.out_dir.empty() ? project.config.out_dir : fs::path(o.out_dir);
}

int cmd_init(const Options& o, std::ostream& out) {
  init_project(o.init_dir);
  out << "initialized project in " << o.init_dir << '\n';
  return kExitOk;
}

int cmd_check(const Options& o, std::ostream& out) {
  Project project = load_project(o.project);
  auto diagnostics = project_diagnostics(project);
  print_diagnostics(diagnostics, out);
  return has_errors(diagnostics) ? kExitDiagnostics : kExitOk;
}

int cmd_generate(const Options& o, std::ostream& out, std::ostream& err) {
  auto project = load_valid(o, err);
  if (!project) return kExitDiagnostics;
  MergeResult merged = regenerate(*project->model, project->registry, std::move(project->store));
  save_store(merged.store, project->config.analysis);
  out << format_merge_report(merged.report);
  return kExitOk;
}

int cmd_stats(const Options& o, std::ostream& out, std::ostream& err) {
  auto project = load_valid(o, err);
  if (!project) return kExitDiagnostics;
  ProjectStats stats = compute_stats(*project->model, project->store);
  out << (o.csv ? stats_to_csv(stats) : format_stats(stats));
  return kExitOk;
}

int cmd_report(const Options& o, std::ostream& out, std::ostream& err) {
  auto project = load_valid(o, err);
  if (!project) return kExitDiagnostics;
  ReportOptions options;
  options.timestamp = !o.no_timestamp;
  options.force = o.force;
  options.usage = guideword_usage(project->store, project->registry);
  std::string html;
  try {
    html = render_report(*project->model, project->store,
                         compute_stats(*project->model, project->store), options);
  } catch (const ReportBlocked& e) {
    print_diagnostics(e.diagnostics(), err);
    err << "report not written: " << e.what() << '\n';
    return kExitDiagnostics;
  }
  const fs::path dir = out_dir_of(o, *project);
  fs::create_directories(dir);
  write_file_atomic(dir / "report.html", html);
  out << "wrote " << (dir / "report.html").string() << '\n';
  return kExitOk;
}

int cmd_export_csv(const Options& o, std::ostream& out, std::ostream& err) {
  auto project = load_valid(o, err);
  if (!project) return kExitDiagnostics;
  const fs::path dir = out_dir_of(o, *project);
  auto written = write_csv_exports(project->store, dir);
  const ProjectStats stats = compute_stats(*project->model, project->store);
  write_file_atomic(dir / "stats.csv", stats_to_csv(stats));
  write_file_atomic(dir / "guideword_usage.csv",
                    usage_to_csv(guideword_usage(project->store, project->registry)));
  written.push_back(dir / "stats.csv");
  written.push_back(dir / "guideword_usage.csv");
  for (const auto& path : written) out << "wrote " << path.string() << '\n';
  return kExitOk;
}

Service* g_running = nullptr;

int cmd_serve(const Options& o, std::ostream& out, std::ostream& err) {
  if (!load_valid(o, err)) return kExitDiagnostics;
  Service service(o.project, ServiceOptions{o.bind, o.port});
  const int port = service.bind();
  out << "serving " << fs::absolute(o.project).lexically_normal().string() << " on http://"
      << o.bind << ':' << port << '\n'
      << std::flush;
  g_running = &service;
  auto on_signal = [](int) {
    if (g_running) g_running->stop();
  };
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  service.run();
  g_running = nullptr;
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"HAZOP-UML hazard analysis workbench", "hazop"};
  app.require_subcommand(1);
  app.add_option("-C,--project", o.project, "Project directory")->capture_default_str();

  auto* init = app.add_subcommand("init", "Scaffold a project with the default registry");
  init->add_option("dir", o.init_dir, "Directory to create")->required();
  auto* check = app.add_subcommand("check", "Validate the model and the analysis");
  auto* generate = app.add_subcommand("generate", "Generate or update the HAZOP tables");
  auto* stats = app.add_subcommand("stats", "Print analysis statistics");
  stats->add_flag("--csv", o.csv, "CSV output");
  auto* report = app.add_subcommand("report", "Write the HTML report");
  report->add_flag("--no-timestamp", o.no_timestamp, "Omit the generation time");
  report->add_option("--out", o.out_dir, "Output directory");
  report->add_flag("--force", o.force, "Render despite error-level diagnostics");
  auto* export_csv = app.add_subcommand("export-csv", "Write the tables as CSV files");
  export_csv->add_option("--out", o.out_dir, "Output directory");
  auto* serve = app.add_subcommand("serve", "Run the local HTTP service");
  serve->add_option("--port", o.port, "TCP port (0 = any free port)")->capture_default_str();
  serve->add_option("--bind", o.bind, "Bind address")->capture_default_str();

  std::vector<std::string> argv_storage{"hazop"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_storage) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (init->parsed()) return cmd_init(o, out);
    if (check->parsed()) return cmd_check(o, out);
    if (generate->parsed()) return cmd_generate(o, out, err);
    if (stats->parsed()) return cmd_stats(o, out, err);
    if (report->parsed()) return cmd_report(o, out, err);
    if (export_csv->parsed()) return cmd_export_csv(o, out, err);
    if (serve->parsed()) return cmd_serve(o, out, err);
  } catch (const ProjectError& e) {
    err << "hazop: " << e.what() << '\n';
    return kExitIo;
  } catch (const StoreError& e) {
    err << "hazop: " << e.what() << '\n';
    return e.code() == code::kStoreIo ? kExitIo : kExitDiagnostics;
  } catch (const fs::filesystem_error& e) {
    err << "hazop: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::runtime_error& e) {
    err << "hazop: " << e.what() << '\n';
    return kExitIo;
  }
  return kExitUsage;
}

}  // namespace hazop
