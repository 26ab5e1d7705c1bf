// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <functional>
#include <iostream>
#include <regex>
#include <set>
#include <sstream>

#include "hazop/deviation.hpp"
#include "hazop/dsl.hpp"
#include "hazop/merge.hpp"
#include "hazop/metrics.hpp"
#include "hazop/report.hpp"
#include "hazop/store.hpp"
#include "test_support.hpp"

using namespace hazop;

namespace {

using Clock = std::chrono::steady_clock;

struct Failure {
  std::string why;
};

void require(bool condition, const std::string& why) {
  if (!condition) throw Failure{why};
}

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string row_key(const std::string& table, const AttributeRef& ref, const std::string& word) {
  return table + "|" + ref.str() + "|" + word;
}

std::set<std::string> capture(const std::string& html, const std::regex& re) {
  std::set<std::string> out;
  for (auto it = std::sregex_iterator(html.begin(), html.end(), re); it != std::sregex_iterator(); ++it)
    out.insert((*it)[1].str());
  return out;
}

/// Internal links that have no matching id attribute.
std::vector<std::string> broken_links(const std::string& html) {
  const auto ids = capture(html, std::regex(R"re(id="([^"]+)")re"));
  std::vector<std::string> broken;
  for (const auto& t : capture(html, std::regex(R"re(href="#([^"]+)")re")))
    if (!ids.count(t)) broken.push_back(t);
  return broken;
}

std::string criterion_uc02_rows() {
  const ProjectModel model = testing::miras_model();
  const GuideWordRegistry registry = default_registry();
  const auto start = Clock::now();
  const auto rows = generate_skeleton(model, registry);
  const double elapsed = seconds_since(start);
  std::size_t uc02 = 0;
  for (const auto& r : rows) uc02 += r.table_id == "UC02";
  require(uc02 == 54, "UC02 produced " + std::to_string(uc02) + " rows, expected 9 x 6 = 54");
  require(elapsed < 1.0, "took " + std::to_string(elapsed) + " s");
  return "UC02: 54 rows in " + std::to_string(elapsed * 1000) + " ms";
}

std::string criterion_count_law() {
  std::mt19937 rng(1701);
  const GuideWordRegistry registry = default_registry();
  const auto start = Clock::now();
  std::size_t total = 0;
  for (int i = 0; i < 100; ++i) {
    const ProjectModel m = testing::random_model(rng);
    std::multiset<std::string> generated;
    for (const auto& r : generate_skeleton(m, registry))
      generated.insert(row_key(r.table_id, r.attribute_ref, r.guide_word));
    require(generated == testing::brute_force_rows(m, registry),
            "model " + std::to_string(i) + " differs from the enumeration");
    total += generated.size();
  }
  const double elapsed = seconds_since(start);
  require(elapsed < 10.0, "took " + std::to_string(elapsed) + " s");
  return "100 random models, " + std::to_string(total) + " rows, " + std::to_string(elapsed) + " s";
}

std::string criterion_stats_echo() {
  const ProjectModel m = testing::miras_model();
  const ProjectStats s = compute_stats(m, testing::miras_store(m, default_registry()));
  require(s[DiagramType::use_case] == DiagramStats{11, 45, 0, 317, 134, 72}, "use-case figures");
  require(s[DiagramType::sequence] == DiagramStats{12, 52, 0, 676, 163, 85}, "sequence figures");
  require(s[DiagramType::state_machine] == DiagramStats{1, 19, 9, 215, 161, 161},
          "state-machine figures");
  require(s.hazard_count == 16, "hazard count " + std::to_string(s.hazard_count));
  return "317/134/72, 676/163/85, 215/161/161, 9 states, 16 hazards";
}

std::string criterion_traceability() {
  const ProjectModel m = testing::miras_model();
  AnalysisStore store = testing::miras_store(m, default_registry());
  for (const auto& d : check_consistency(m, store))
    require(d.severity != Severity::error, "clean analysis reports " + format_diagnostic(d));

  const ProjectOutputs out = concatenate_outputs(store);
  const HazardOutput* hn6 = nullptr;
  for (const auto& h : out.hazards) if (h.hazard.id == "HN6") hn6 = &h;
  require(hn6, "HN6 missing from the hazard list");
  const auto& uc_rows = hn6->rows.at(DiagramType::use_case);
  require(std::find(uc_rows.begin(), uc_rows.end(), RowAnchor{"UC02", 15}) != uc_rows.end(),
          "HN6 does not list UC02.15");
  const Recommendation* rec2 = store.find_recommendation("Rec2");
  require(rec2 && std::count(rec2->covers.begin(), rec2->covers.end(), "HN6") &&
              std::count(rec2->sources.begin(), rec2->sources.end(), RowAnchor{"UC02", 15}),
          "Rec2 does not cover HN6 from UC02.15");

  store.find_row("UC03", 2)->hazards.push_back("HN99");
  std::vector<Diagnostic> errors;
  for (const auto& d : check_consistency(m, store))
    if (d.severity == Severity::error) errors.push_back(d);
  require(errors.size() == 1 && errors[0].code == code::kDanglingHazard &&
              errors[0].element_id == "UC03.2",
          "injected dangling HN99 gave " + std::to_string(errors.size()) + " error(s)");
  return "UC02.15 -> HN6 <- Rec2; one injected dangling id -> exactly one error";
}

std::string criterion_merge_safety() {
  std::mt19937 rng(31337);
  const GuideWordRegistry registry = default_registry();
  int checked_rows = 0;
  for (int seq = 0; seq < 100; ++seq) {
    ProjectModel model = testing::random_model(rng);
    AnalysisStore store = regenerate(model, registry, {}).store;
    std::map<std::pair<std::string, int>, RowKey> issued;
    for (int step = 0; step < 5; ++step) {
      store = testing::fill_rows(std::move(store), rng);
      model = testing::edit_model(model, rng);
      const AnalysisStore before = store;
      store = regenerate(model, registry, before).store;
      std::set<RowKey> fresh;
      for (const auto& r : generate_skeleton(model, registry)) fresh.insert(key_of(r));
      for (const auto& old : before.rows) {
        const DeviationRowRecord* now = store.find_row(old.table_id, old.line_number);
        const std::string where = "sequence " + std::to_string(seq) + " " + old.anchor().str();
        require(now && now->key() == old.key(), where + " lost or rekeyed");
        require(now->deviation == old.deviation && now->use_case_effect == old.use_case_effect &&
                    now->real_world_effect == old.real_world_effect &&
                    now->severity == old.severity && now->possible_causes == old.possible_causes &&
                    now->recommendations == old.recommendations && now->remarks == old.remarks &&
                    now->hazards == old.hazards,
                where + " analyst fields changed");
        require((now->status == RowStatus::orphaned) == !fresh.count(old.key()),
                where + " orphan flag wrong");
        ++checked_rows;
      }
      for (const auto& row : store.rows) {
        auto [it, inserted] = issued.emplace(std::make_pair(row.table_id, row.line_number), row.key());
        require(inserted || it->second == row.key(), row.anchor().str() + " reused for another key");
      }
    }
  }
  return "100 edit sequences, " + std::to_string(checked_rows) + " row checks";
}

std::string criterion_round_trip() {
  std::mt19937 rng(8675309);
  for (int i = 0; i < 500; ++i) {
    const ProjectModel m = testing::random_model(rng);
    const std::string text = serialize_model(m);
    auto parsed = parse_model_text(text);
    require(parsed.ok(), "model " + std::to_string(i) + ": " +
                             (parsed.errors.empty() ? "" : format_parse_error(parsed.errors.front())));
    require(*parsed.model == m, "model " + std::to_string(i) + " differs after parsing");
    require(serialize_model(*parsed.model) == text, "model " + std::to_string(i) + " text differs");
  }
  return "500 random models";
}

std::string criterion_report() {
  const ProjectModel m = testing::miras_model();
  const GuideWordRegistry registry = default_registry();
  const AnalysisStore store = testing::miras_store(m, registry);
  ReportOptions options;
  options.timestamp = false;
  options.usage = guideword_usage(store, registry);
  const std::string a = render_report(m, store, compute_stats(m, store), options);
  const std::string b = render_report(m, store, compute_stats(m, store), options);
  require(a == b, "two renders differ");
  const auto broken = broken_links(a);
  require(broken.empty(), std::to_string(broken.size()) + " broken link(s), first #" +
                              (broken.empty() ? "" : broken.front()));
  for (const char* id : {"UC02.15", "HN6", "Rec2"})
    require(a.find(std::string("href=\"#") + id + "\"") != std::string::npos,
            std::string("no link to ") + id);
  return "byte-identical, " + std::to_string(a.size()) + " bytes, all internal links resolve";
}

std::string criterion_guard_applicability() {
  const ProjectModel m = testing::miras_model();
  const auto rows = generate_skeleton(m, default_registry());
  std::map<std::string, int> constraint_rows;
  for (const auto& r : rows)
    if (r.attribute_ref.attribute.attribute == "interaction_constraint")
      ++constraint_rows[r.attribute_ref.element_id];
  int guarded = 0, unguarded = 0;
  for (const auto& sd : m.sequence_diagrams) {
    for (const auto& msg : sd.messages) {
      const std::string id = sd.message_id(msg);
      const int n = constraint_rows.count(id) ? constraint_rows.at(id) : 0;
      if (msg.guard) {
        ++guarded;
        require(n == 5, id + " has " + std::to_string(n) + " constraint rows");
      } else {
        ++unguarded;
        require(n == 0, "unguarded " + id + " has constraint rows");
      }
    }
  }
  return std::to_string(unguarded) + " unguarded messages without constraint rows, " +
         std::to_string(guarded) + " guarded with 5 each";
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<std::string()>>> criteria = {
      {"skeleton-uc02-54-rows", criterion_uc02_rows},
      {"skeleton-count-law", criterion_count_law},
      {"statistics-echo", criterion_stats_echo},
      {"traceability-closure", criterion_traceability},
      {"merge-safety", criterion_merge_safety},
      {"dsl-round-trip", criterion_round_trip},
      {"report-determinism-and-links", criterion_report},
      {"guard-applicability", criterion_guard_applicability},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    try {
      const std::string detail = run();
      std::cout << "PASS " << name << ": " << detail << '\n';
    } catch (const Failure& f) {
      ++failed;
      std::cout << "FAIL " << name << ": " << f.why << '\n';
    } catch (const std::exception& e) {
      ++failed;
      std::cout << "FAIL " << name << ": exception: " << e.what() << '\n';
    }
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed\n";
  return failed == 0 ? 0 : 1;
}
