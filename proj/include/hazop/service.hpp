#pragma once

// Local HTTP/JSON API over one project directory.
//
// Readers take an immutable snapshot of the project state; mutations are
// funnelled through a single writer, persisted atomically to the analysis
// file and only then published and acknowledged.

#include <atomic>
#include <filesystem>
#include <memory>
#include <mutex>
#include <string>

#include "hazop/project.hpp"

namespace httplib {
class Server;
}

namespace hazop {

struct ServiceOptions {
  std::string bind_address = "127.0.0.1";
  /// 0 picks a free port.
  int port = 8080;
  /// Mutations waiting for the writer beyond this count are refused with 409.
  int queue_limit = 16;
};

/// Immutable view published after every successful mutation.
struct ProjectSnapshot {
  ProjectConfig config;
  ProjectModel model;
  GuideWordRegistry registry;
  std::vector<Diagnostic> load_diagnostics;
  AnalysisStore store;
};

class Service {
 public:
  /// Loads the project; throws ProjectError when it has no usable model.
  Service(const std::filesystem::path& root, ServiceOptions options);
  ~Service();

  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  /// Binds the socket; returns the bound port. Throws std::runtime_error.
  int bind();
  /// Serves until stop(); call bind() first.
  void run();
  void stop();

  std::shared_ptr<const ProjectSnapshot> snapshot() const;

 private:
  void routes();
  void publish(std::shared_ptr<const ProjectSnapshot> next);

  std::filesystem::path root_;
  ServiceOptions options_;
  std::unique_ptr<httplib::Server> server_;

  mutable std::mutex snapshot_mutex_;
  std::shared_ptr<const ProjectSnapshot> snapshot_;

  std::mutex writer_mutex_;
  std::atomic<int> pending_{0};

  friend class MutationScope;
};

}  // namespace hazop
