#include "hazop/service.hpp"

#include <httplib.h>

#include <set>

#include "hazop/json_io.hpp"
#include "hazop/merge.hpp"
#include "hazop/metrics.hpp"
#include "hazop/report.hpp"

namespace hazop {

namespace {

using nlohmann::json;

constexpr const char* kJson = "application/json";
constexpr const char* kBadRequest = "BAD_REQUEST";
constexpr const char* kQueueFull = "QUEUE_FULL";
constexpr const char* kNotFound = "NOT_FOUND";

void send_json(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), kJson);
}

void send_error(httplib::Response& res, int status, const std::string& code,
                const std::string& message, const std::string& element = {}) {
  Diagnostic d{Severity::error, code, element, message, std::nullopt};
  send_json(res, status,
            json{{"error", {{"code", code}, {"message", message}}},
                 {"diagnostics", json::array({to_json(d)})}});
}

void send_diagnostics(httplib::Response& res, int status, const std::string& code,
                      const std::string& message, const std::vector<Diagnostic>& diagnostics) {
  send_json(res, status,
            json{{"error", {{"code", code}, {"message", message}}},
                 {"diagnostics", to_json(diagnostics)}});
}

int status_for(const std::string& code) {
  if (code == code::kUnknownRow || code == code::kUnknownItem) return 404;
  if (code == code::kSeverityNotInScale) return 422;
  if (code == code::kStoreIo) return 500;
  return 400;
}

json parse_body(const httplib::Request& req) {
  if (req.body.empty()) return json::object();
  json body = json::parse(req.body);  // throws json::parse_error
  if (!body.is_object()) throw StoreError(kBadRequest, "request body must be a JSON object");
  return body;
}

std::vector<Diagnostic> diagnostics_of(const ProjectSnapshot& s) {
  std::vector<Diagnostic> all = s.load_diagnostics;
  auto consistency = check_consistency(s.model, s.store);
  all.insert(all.end(), consistency.begin(), consistency.end());
  sort_diagnostics(all);
  return all;
}

std::set<std::string> table_ids_of(const ProjectSnapshot& s) {
  std::set<std::string> ids;
  for (const auto& uc : s.model.use_cases) ids.insert(uc.id);
  for (const auto& sd : s.model.sequence_diagrams) ids.insert(sd.id);
  for (const auto& sm : s.model.state_machines) ids.insert(sm.id);
  for (const auto& id : s.store.table_ids()) ids.insert(id);
  return ids;
}

std::string table_title(const ProjectModel& model, const std::string& id) {
  if (const auto* uc = model.find_use_case(id)) return uc->name;
  if (const auto* sd = model.find_sequence(id)) return sd->name;
  if (const auto* sm = model.find_state_machine(id)) return sm->object;
  return {};
}

json table_rows(const AnalysisStore& store, const std::string& id) {
  std::vector<const DeviationRowRecord*> rows;
  for (const auto& r : store.rows) {
    if (r.table_id == id) rows.push_back(&r);
  }
  std::stable_sort(rows.begin(), rows.end(),
                   [](const auto* a, const auto* b) { return a->line_number < b->line_number; });
  json out = json::array();
  for (const auto* r : rows) out.push_back(to_json(*r));
  return out;
}

std::vector<std::string> string_list(const json& body, const char* key) {
  if (!body.contains(key)) return {};
  const json& value = body.at(key);
  if (!value.is_array()) throw StoreError(kBadRequest, std::string(key) + " must be an array");
  std::vector<std::string> out;
  for (const auto& v : value) {
    if (!v.is_string()) throw StoreError(kBadRequest, std::string(key) + " must hold strings");
    out.push_back(v.get<std::string>());
  }
  return out;
}

std::vector<RowAnchor> anchor_list(const json& body, const char* key) {
  std::vector<RowAnchor> out;
  for (const auto& text : string_list(body, key)) {
    auto anchor = RowAnchor::parse(text);
    if (!anchor) throw StoreError(code::kDanglingRow, "malformed table line " + text);
    out.push_back(*anchor);
  }
  return out;
}

std::string required_text(const json& body) {
  if (!body.contains("text") || !body.at("text").is_string()) {
    throw StoreError(kBadRequest, "text is required");
  }
  return body.at("text").get<std::string>();
}

void reject_id(const json& body) {
  if (body.contains("id")) throw StoreError(code::kInvalidId, "ids are assigned by the service");
}

/// Applies a JSON merge patch to an item's encoding; the id is fixed.
json patched(json current, const json& patch) {
  if (patch.contains("id") && patch.at("id") != current.at("id")) {
    throw StoreError(code::kInvalidId, "the id of an item cannot change");
  }
  current.merge_patch(patch);
  return current;
}

}  // namespace

class MutationScope {
 public:
  explicit MutationScope(Service& service) : service_(service) {
    admitted_ = service_.pending_.fetch_add(1) <= service_.options_.queue_limit;
    if (admitted_) lock_ = std::unique_lock(service_.writer_mutex_);
  }
  ~MutationScope() { service_.pending_.fetch_sub(1); }

  bool admitted() const { return admitted_; }

 private:
  Service& service_;
  bool admitted_ = false;
  std::unique_lock<std::mutex> lock_;
};

Service::Service(const std::filesystem::path& root, ServiceOptions options)
    : root_(root), options_(std::move(options)), server_(std::make_unique<httplib::Server>()) {
  Project project = load_project(root_);
  if (!project.model || has_errors(project.diagnostics)) {
    std::string message = "the project has error-level diagnostics:";
    for (const auto& d : project.diagnostics) {
      if (d.severity == Severity::error) message += "\n" + format_diagnostic(d);
    }
    throw ProjectError(message);
  }
  auto snapshot = std::make_shared<ProjectSnapshot>();
  snapshot->config = project.config;
  snapshot->model = std::move(*project.model);
  snapshot->registry = std::move(project.registry);
  snapshot->load_diagnostics = std::move(project.diagnostics);
  snapshot->store = std::move(project.store);
  snapshot_ = std::move(snapshot);
  routes();
}

Service::~Service() { stop(); }

std::shared_ptr<const ProjectSnapshot> Service::snapshot() const {
  std::lock_guard lock(snapshot_mutex_);
  return snapshot_;
}

void Service::publish(std::shared_ptr<const ProjectSnapshot> next) {
  std::lock_guard lock(snapshot_mutex_);
  snapshot_ = std::move(next);
}

int Service::bind() {
  if (options_.port == 0) {
    const int port = server_->bind_to_any_port(options_.bind_address);
    if (port < 0) throw std::runtime_error("cannot bind " + options_.bind_address);
    options_.port = port;
  } else if (!server_->bind_to_port(options_.bind_address, options_.port)) {
    throw std::runtime_error("cannot bind " + options_.bind_address + ":" +
                             std::to_string(options_.port));
  }
  return options_.port;
}

void Service::run() { server_->listen_after_bind(); }

void Service::stop() {
  if (server_) server_->stop();
}

void Service::routes() {
  using Req = httplib::Request;
  using Res = httplib::Response;
  httplib::Server& s = *server_;

  // Runs `apply` on a private copy of the current snapshot, persists the
  // store and publishes the copy. `apply` returns the response body.
  auto mutate = [this](Res& res, int success_status, auto apply) {
    MutationScope scope(*this);
    if (!scope.admitted()) {
      send_error(res, 409, kQueueFull, "too many mutations in flight; retry later");
      return;
    }
    auto next = std::make_shared<ProjectSnapshot>(*snapshot());
    try {
      json body = apply(*next);
      save_store(next->store, next->config.analysis);
      publish(next);
      send_json(res, success_status, body);
    } catch (const StoreError& e) {
      send_error(res, status_for(e.code()), e.code(), e.what());
    } catch (const json::exception& e) {
      send_error(res, 400, kBadRequest, e.what());
    }
  };

  s.Get("/", [](const Req&, Res& res) {
    send_json(res, 200,
              json{{"service", "hazop-uml"},
                   {"endpoints",
                    {"/model", "/registry", "/tables", "/tables/{id}", "/diagnostics", "/stats",
                     "/outputs", "/report", "/generate", "/hazards", "/recommendations",
                     "/hypotheses"}}});
  });

  s.Get("/model", [this](const Req&, Res& res) {
    auto snap = snapshot();
    json body = to_json(snap->model);
    body["text"] = serialize_model(snap->model);
    body["fingerprint"] = model_fingerprint(snap->model);
    send_json(res, 200, body);
  });

  s.Get("/registry", [this](const Req&, Res& res) {
    auto snap = snapshot();
    json body = json::parse(registry_to_json(snap->registry));
    body["severity_scale"] = snap->store.severity_scale;
    send_json(res, 200, body);
  });

  s.Get("/tables", [this](const Req&, Res& res) {
    auto snap = snapshot();
    json tables = json::array();
    for (const auto& id : table_ids_of(*snap)) {
      int rows = 0, interpreted = 0, orphaned = 0;
      for (const auto& r : snap->store.rows) {
        if (r.table_id != id) continue;
        ++rows;
        interpreted += r.status == RowStatus::interpreted;
        orphaned += r.status == RowStatus::orphaned;
      }
      auto type = diagram_type_of(id);
      tables.push_back({{"id", id},
                        {"title", table_title(snap->model, id)},
                        {"diagram", type ? to_string(*type) : ""},
                        {"in_model", element_lookup(snap->model, id).has_value()},
                        {"rows", rows},
                        {"interpreted", interpreted},
                        {"orphaned", orphaned}});
    }
    send_json(res, 200,
              json{{"tables", std::move(tables)}, {"severity_scale", snap->store.severity_scale}});
  });

  s.Get(R"(/tables/([A-Za-z0-9]+))", [this](const Req& req, Res& res) {
    auto snap = snapshot();
    const std::string id = req.matches[1];
    if (!table_ids_of(*snap).count(id)) {
      send_error(res, 404, kNotFound, "no table " + id, id);
      return;
    }
    send_json(res, 200,
              json{{"id", id},
                   {"title", table_title(snap->model, id)},
                   {"rows", table_rows(snap->store, id)}});
  });

  s.Patch(R"(/tables/([A-Za-z0-9]+)/rows/(\d+))", [mutate](const Req& req, Res& res) {
    const std::string table = req.matches[1];
    const int line = std::stoi(req.matches[2]);
    mutate(res, 200, [&](ProjectSnapshot& next) {
      RowUpdate update = row_update_from_json(parse_body(req));
      next.store = set_row_fields(std::move(next.store), table, line, update);
      return json{{"row", to_json(*next.store.find_row(table, line))},
                  {"diagnostics", to_json(diagnostics_of(next))}};
    });
  });

  s.Post(R"(/tables/([A-Za-z0-9]+)/rows/(\d+)/duplicate)", [mutate](const Req& req, Res& res) {
    const std::string table = req.matches[1];
    const int line = std::stoi(req.matches[2]);
    mutate(res, 201, [&](ProjectSnapshot& next) {
      const int added = duplicate_row(next.store, table, line);
      return json{{"row", to_json(*next.store.find_row(table, added))}};
    });
  });

  s.Post("/generate", [this, mutate](const Req&, Res& res) {
    Project reloaded;
    try {
      reloaded = load_project(root_);
    } catch (const ProjectError& e) {
      send_error(res, 500, code::kStoreIo, e.what());
      return;
    }
    if (!reloaded.model || has_errors(reloaded.diagnostics)) {
      send_diagnostics(res, 400, "MODEL_INVALID", "the model has error-level diagnostics",
                       reloaded.diagnostics);
      return;
    }
    mutate(res, 200, [&](ProjectSnapshot& next) {
      next.model = std::move(*reloaded.model);
      next.registry = std::move(reloaded.registry);
      next.load_diagnostics = std::move(reloaded.diagnostics);
      MergeResult merged = regenerate(next.model, next.registry, std::move(next.store));
      next.store = std::move(merged.store);
      return to_json(merged.report);
    });
  });

  s.Get("/diagnostics", [this](const Req&, Res& res) {
    auto diagnostics = diagnostics_of(*snapshot());
    send_json(res, 200,
              json{{"errors", count_errors(diagnostics)}, {"diagnostics", to_json(diagnostics)}});
  });

  s.Get("/stats", [this](const Req&, Res& res) {
    auto snap = snapshot();
    send_json(res, 200,
              json{{"stats", to_json(compute_stats(snap->model, snap->store))},
                   {"guide_word_usage", to_json(guideword_usage(snap->store, snap->registry))}});
  });

  s.Get("/outputs", [this](const Req&, Res& res) {
    send_json(res, 200, to_json(concatenate_outputs(snapshot()->store)));
  });

  s.Get("/report", [this](const Req& req, Res& res) {
    auto snap = snapshot();
    ReportOptions options;
    options.timestamp = req.get_param_value("timestamp") != "0";
    options.force = req.get_param_value("force") == "1";
    options.usage = guideword_usage(snap->store, snap->registry);
    try {
      res.set_content(render_report(snap->model, snap->store,
                                    compute_stats(snap->model, snap->store), options),
                      "text/html; charset=utf-8");
    } catch (const ReportBlocked& e) {
      send_diagnostics(res, 400, "REPORT_BLOCKED", e.what(), e.diagnostics());
    }
  });

  // Hazards.
  s.Post("/hazards", [mutate](const Req& req, Res& res) {
    mutate(res, 201, [&](ProjectSnapshot& next) {
      json body = parse_body(req);
      reject_id(body);
      const std::string id = add_hazard(next.store, required_text(body));
      body["id"] = id;
      update_hazard(next.store, hazard_from_json(body));
      return to_json(*next.store.find_hazard(id));
    });
  });
  s.Patch(R"(/hazards/([A-Za-z0-9]+))", [mutate](const Req& req, Res& res) {
    const std::string id = req.matches[1];
    mutate(res, 200, [&](ProjectSnapshot& next) {
      const Hazard* current = next.store.find_hazard(id);
      if (!current) throw StoreError(code::kUnknownItem, "unknown hazard " + id);
      update_hazard(next.store, hazard_from_json(patched(to_json(*current), parse_body(req))));
      return to_json(*next.store.find_hazard(id));
    });
  });

  // Recommendations.
  s.Post("/recommendations", [mutate](const Req& req, Res& res) {
    mutate(res, 201, [&](ProjectSnapshot& next) {
      json body = parse_body(req);
      reject_id(body);
      const std::string id = add_recommendation(next.store, required_text(body),
                                                string_list(body, "covers"),
                                                anchor_list(body, "sources"));
      return to_json(*next.store.find_recommendation(id));
    });
  });
  s.Patch(R"(/recommendations/([A-Za-z0-9]+))", [mutate](const Req& req, Res& res) {
    const std::string id = req.matches[1];
    mutate(res, 200, [&](ProjectSnapshot& next) {
      const Recommendation* current = next.store.find_recommendation(id);
      if (!current) throw StoreError(code::kUnknownItem, "unknown recommendation " + id);
      update_recommendation(next.store,
                            recommendation_from_json(patched(to_json(*current), parse_body(req))));
      return to_json(*next.store.find_recommendation(id));
    });
  });

  // Hypotheses.
  s.Post("/hypotheses", [mutate](const Req& req, Res& res) {
    mutate(res, 201, [&](ProjectSnapshot& next) {
      json body = parse_body(req);
      reject_id(body);
      const std::string id =
          add_hypothesis(next.store, required_text(body), anchor_list(body, "sources"));
      body["id"] = id;
      if (!body.contains("sources")) body["sources"] = json::array();
      update_hypothesis(next.store, hypothesis_from_json(body));
      return to_json(*next.store.find_hypothesis(id));
    });
  });
  s.Patch(R"(/hypotheses/([A-Za-z0-9]+))", [mutate](const Req& req, Res& res) {
    const std::string id = req.matches[1];
    mutate(res, 200, [&](ProjectSnapshot& next) {
      const Hypothesis* current = next.store.find_hypothesis(id);
      if (!current) throw StoreError(code::kUnknownItem, "unknown hypothesis " + id);
      update_hypothesis(next.store,
                        hypothesis_from_json(patched(to_json(*current), parse_body(req))));
      return to_json(*next.store.find_hypothesis(id));
    });
  });

  for (const char* pattern : {R"(/hazards/([A-Za-z0-9]+))", R"(/recommendations/([A-Za-z0-9]+))",
                              R"(/hypotheses/([A-Za-z0-9]+))"}) {
    s.Delete(pattern, [mutate](const Req& req, Res& res) {
      const std::string id = req.matches[1];
      mutate(res, 200, [&](ProjectSnapshot& next) {
        remove_item(next.store, id);
        return json{{"deleted", id}};
      });
    });
  }

  s.set_exception_handler([](const Req&, Res& res, std::exception_ptr ep) {
    try {
      std::rethrow_exception(ep);
    } catch (const std::exception& e) {
      send_error(res, 500, "INTERNAL", e.what());
    } catch (...) {
      send_error(res, 500, "INTERNAL", "unknown error");
    }
  });
}

}  // namespace hazop
