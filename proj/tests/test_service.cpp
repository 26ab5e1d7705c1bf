#include <gtest/gtest.h>

#include <httplib.h>

#include <fstream>
#include <nlohmann/json.hpp>
#include <thread>

#include "hazop/cli.hpp"
#include "hazop/service.hpp"
#include "hazop/store.hpp"
#include "test_support.hpp"

namespace hazop {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

/// MIRAS project on disk with a running service on a free port.
class ServiceTest : public ::testing::Test {
 protected:
  void SetUp() override {
    root_ = tmp_.path() / "miras";
    std::ostringstream out, err;
    ASSERT_EQ(run_cli({"init", root_.string()}, out, err), kExitOk);
    fs::remove(root_ / "model" / "model.hzm");
    fs::copy_file(testing::fixture_path("miras.hzm"), root_ / "model" / "miras.hzm");
    const ProjectModel model = testing::miras_model();
    save_store(testing::miras_store(model, default_registry()), root_ / "project.hza");

    service_ = std::make_unique<Service>(root_, ServiceOptions{"127.0.0.1", 0});
    port_ = service_->bind();
    thread_ = std::thread([this] { service_->run(); });
    client_ = std::make_unique<httplib::Client>("127.0.0.1", port_);
  }
  void TearDown() override {
    if (service_) service_->stop();
    if (thread_.joinable()) thread_.join();
  }

  httplib::Result patch(const std::string& path, const json& body) {
    return client_->Patch(path.c_str(), body.dump(), "application/json");
  }
  httplib::Result post(const std::string& path, const json& body = json::object()) {
    return client_->Post(path.c_str(), body.dump(), "application/json");
  }
  static json body(const httplib::Result& r) { return json::parse(r->body); }

  testing::TempDir tmp_;
  fs::path root_;
  std::unique_ptr<Service> service_;
  int port_ = 0;
  std::thread thread_;
  std::unique_ptr<httplib::Client> client_;
};

TEST_F(ServiceTest, ReadEndpoints) {
  for (const char* path : {"/", "/model", "/registry", "/tables", "/tables/UC02", "/diagnostics",
                           "/stats", "/outputs"}) {
    auto r = client_->Get(path);
    ASSERT_TRUE(r) << path;
    EXPECT_EQ(r->status, 200) << path;
  }
  json diagnostics = body(client_->Get("/diagnostics"));
  EXPECT_EQ(diagnostics["errors"], 0);
  json stats = body(client_->Get("/stats"));
  EXPECT_EQ(stats["stats"]["hazards"], 16);
  EXPECT_EQ(stats["stats"]["diagrams"]["UC"]["analyzed_deviations"], 317);
  EXPECT_EQ(client_->Get("/tables/UC99")->status, 404);
  json registry = body(client_->Get("/registry"));
  EXPECT_EQ(registry["entries"].size(), 64u);
}

TEST_F(ServiceTest, PatchRowIsPersistedBeforeItIsAcknowledged) {
  auto r = patch("/tables/UC01/rows/1", {{"deviation", "Walking frame not detected"},
                                         {"severity", "Severe"},
                                         {"hazards", {"HN6"}}});
  ASSERT_TRUE(r);
  ASSERT_EQ(r->status, 200) << r->body;
  json row = body(r)["row"];
  EXPECT_EQ(row["status"], "interpreted");
  AnalysisStore on_disk = load_store(root_ / "project.hza");
  const auto* persisted = on_disk.find_row("UC01", 1);
  EXPECT_EQ(persisted->deviation, "Walking frame not detected");
  EXPECT_EQ(persisted->hazards, std::vector<std::string>{"HN6"});
  EXPECT_EQ(service_->snapshot()->store, on_disk);
}

TEST_F(ServiceTest, RejectedPatchesChangeNothing) {
  const std::string before = body(client_->Get("/tables/UC02")).dump();
  auto dangling = patch("/tables/UC02/rows/15", {{"hazards", {"HN99"}}});
  EXPECT_EQ(dangling->status, 400);
  EXPECT_EQ(body(dangling)["error"]["code"], "DANGLING_HAZARD");
  auto severity = patch("/tables/UC02/rows/15", {{"severity", "Apocalyptic"}});
  EXPECT_EQ(severity->status, 422);
  auto unknown = patch("/tables/UC02/rows/999", {{"remarks", "x"}});
  EXPECT_EQ(unknown->status, 404);
  auto junk = client_->Patch("/tables/UC02/rows/15", "{oops", "application/json");
  EXPECT_EQ(junk->status, 400);
  auto unknown_key = patch("/tables/UC02/rows/15", {{"colour", "red"}});
  EXPECT_EQ(unknown_key->status, 400);
  EXPECT_EQ(body(client_->Get("/tables/UC02")).dump(), before);
}

TEST_F(ServiceTest, ItemLifecycle) {
  auto created = post("/hazards", {{"text", "Collision with an obstacle"}});
  ASSERT_EQ(created->status, 201) << created->body;
  EXPECT_EQ(body(created)["id"], "HN17");
  EXPECT_EQ(post("/hazards", {{"id", "HN50"}, {"text", "x"}})->status, 400);
  auto edited = patch("/hazards/HN17", {{"note", "seen in trials"}});
  ASSERT_EQ(edited->status, 200);
  EXPECT_EQ(body(edited)["note"], "seen in trials");
  EXPECT_EQ(patch("/hazards/HN17", {{"id", "HN18"}})->status, 400);
  EXPECT_EQ(patch("/hazards/HN404", {{"text", "x"}})->status, 404);

  auto in_use = client_->Delete("/hazards/HN6");
  EXPECT_EQ(in_use->status, 400);
  EXPECT_EQ(body(in_use)["error"]["code"], "ITEM_IN_USE");
  EXPECT_EQ(client_->Delete("/hazards/HN17")->status, 200);
  EXPECT_EQ(body(post("/hazards", {{"text", "again"}}))["id"], "HN18");

  auto hyp = post("/hypotheses", {{"text", "Sensors never fail"}, {"sources", {"SM01.3"}}});
  ASSERT_EQ(hyp->status, 201) << hyp->body;
  EXPECT_EQ(body(hyp)["id"], "Hyp1");
  auto rec = post("/recommendations", {{"text", "Add a bumper"}, {"covers", {"HN18"}},
                                       {"sources", {"UC02.15"}}});
  ASSERT_EQ(rec->status, 201) << rec->body;
  EXPECT_EQ(body(rec)["id"], "Rec41");
  EXPECT_EQ(load_store(root_ / "project.hza").recommendations.size(), 41u);
}

TEST_F(ServiceTest, GenerateOnUnchangedModelKeepsEverything) {
  // The fixture analysis covers a subset of the skeleton; the first run
  // completes it, the second finds nothing to do.
  auto first = post("/generate");
  ASSERT_EQ(first->status, 200) << first->body;
  EXPECT_EQ(body(first)["orphaned"], 0);
  auto r = post("/generate");
  ASSERT_EQ(r->status, 200) << r->body;
  json report = body(r);
  EXPECT_EQ(report["added"], 0);
  EXPECT_EQ(report["orphaned"], 0);
  EXPECT_EQ(report["tables"]["UC02"]["kept"], 54 + 5);  // 5 duplicated lines
  EXPECT_EQ(body(client_->Get("/diagnostics"))["errors"], 0);
}

TEST_F(ServiceTest, GenerateRefusesAnInvalidModel) {
  std::ofstream(root_ / "model" / "broken.hzm") << "usecase UC99 \"x\" { pre ; }\n";
  auto r = post("/generate");
  EXPECT_EQ(r->status, 400);
  EXPECT_EQ(body(r)["error"]["code"], "MODEL_INVALID");
  EXPECT_FALSE(body(r)["diagnostics"].empty());
}

TEST_F(ServiceTest, ReportEndpoint) {
  auto r = client_->Get("/report?timestamp=0");
  ASSERT_EQ(r->status, 200);
  EXPECT_NE(r->get_header_value("Content-Type").find("text/html"), std::string::npos);
  EXPECT_EQ(r->body, client_->Get("/report?timestamp=0")->body);
}

TEST_F(ServiceTest, ConcurrentPatchesAreSerialized) {
  std::vector<std::thread> threads;
  std::atomic<int> ok{0};
  for (int t = 0; t < 8; ++t) {
    threads.emplace_back([&, t] {
      httplib::Client c("127.0.0.1", port_);
      for (int i = 0; i < 5; ++i) {
        const int line = 1 + t * 5 + i;
        json update = {{"remarks", "note " + std::to_string(line)}};
        auto r = c.Patch(("/tables/SD01/rows/" + std::to_string(line)).c_str(), update.dump(),
                         "application/json");
        if (r && (r->status == 200 || r->status == 409)) {
          ok += r->status == 200;
          if (r->status == 409) --i;  // back-pressure: retry
        }
      }
    });
  }
  for (auto& t : threads) t.join();
  EXPECT_EQ(ok.load(), 40);
  AnalysisStore on_disk = load_store(root_ / "project.hza");
  for (int line = 1; line <= 40; ++line) {
    EXPECT_EQ(on_disk.find_row("SD01", line)->remarks, "note " + std::to_string(line));
  }
}

}  // namespace
}  // namespace hazop
