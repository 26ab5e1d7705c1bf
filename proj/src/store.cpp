#include "hazop/store.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <charconv>
#include <cstring>
#include <fstream>
#include <set>
#include <sstream>

#include "hazop/dsl.hpp"
#include "hazop/json_io.hpp"

namespace hazop {

using nlohmann::json;

const char* to_string(RowStatus status) {
  switch (status) {
    case RowStatus::skeleton:
      return "skeleton";
    case RowStatus::interpreted:
      return "interpreted";
    case RowStatus::not_applicable:
      return "not_applicable";
    case RowStatus::orphaned:
      return "orphaned";
  }
  return "skeleton";
}

std::optional<RowStatus> parse_row_status(std::string_view text) {
  if (text == "skeleton") return RowStatus::skeleton;
  if (text == "interpreted") return RowStatus::interpreted;
  if (text == "not_applicable") return RowStatus::not_applicable;
  if (text == "orphaned") return RowStatus::orphaned;
  return std::nullopt;
}

const char* to_string(HypothesisStatus status) {
  switch (status) {
    case HypothesisStatus::open:
      return "open";
    case HypothesisStatus::confirmed:
      return "confirmed";
    case HypothesisStatus::rejected:
      return "rejected";
  }
  return "open";
}

std::optional<HypothesisStatus> parse_hypothesis_status(std::string_view text) {
  if (text == "open") return HypothesisStatus::open;
  if (text == "confirmed") return HypothesisStatus::confirmed;
  if (text == "rejected") return HypothesisStatus::rejected;
  return std::nullopt;
}

const char* to_string(DiagramType type) {
  switch (type) {
    case DiagramType::use_case:
      return "UC";
    case DiagramType::sequence:
      return "SD";
    case DiagramType::state_machine:
      return "SM";
  }
  return "UC";
}

std::optional<DiagramType> diagram_type_of(std::string_view id) {
  if (id.starts_with("UC")) return DiagramType::use_case;
  if (id.starts_with("SD")) return DiagramType::sequence;
  if (id.starts_with("SM")) return DiagramType::state_machine;
  return std::nullopt;
}

std::string RowAnchor::str() const { return table_id + "." + std::to_string(line_number); }

std::optional<RowAnchor> RowAnchor::parse(std::string_view text) {
  auto dot = text.rfind('.');
  if (dot == std::string_view::npos || dot == 0) return std::nullopt;
  std::string_view digits = text.substr(dot + 1);
  int line = 0;
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), line);
  if (ec != std::errc{} || ptr != digits.data() + digits.size() || line <= 0) return std::nullopt;
  std::string table(text.substr(0, dot));
  if (!diagram_type_of(table) || table.find('.') != std::string::npos) return std::nullopt;
  return RowAnchor{std::move(table), line};
}

bool DeviationRowRecord::has_analyst_content() const {
  return !deviation.empty() || !use_case_effect.empty() || !real_world_effect.empty() ||
         !severity.empty() || !possible_causes.empty() || !recommendations.empty() ||
         !remarks.empty() || !hazards.empty();
}

std::vector<std::string> default_severity_scale() {
  return {"Catastrophic", "Severe", "Moderate", "Minor", "None"};
}

DeviationRowRecord* AnalysisStore::find_row(std::string_view table_id, int line_number) {
  auto it = std::find_if(rows.begin(), rows.end(), [&](const DeviationRowRecord& r) {
    return r.line_number == line_number && r.table_id == table_id;
  });
  return it == rows.end() ? nullptr : &*it;
}

const DeviationRowRecord* AnalysisStore::find_row(std::string_view table_id,
                                                  int line_number) const {
  return const_cast<AnalysisStore*>(this)->find_row(table_id, line_number);
}

namespace {

template <class Range>
auto find_item(const Range& range, std::string_view id) -> decltype(&*range.begin()) {
  auto it = std::find_if(range.begin(), range.end(), [&](const auto& e) { return e.id == id; });
  return it == range.end() ? nullptr : &*it;
}

}  // namespace

const Hazard* AnalysisStore::find_hazard(std::string_view id) const {
  return find_item(hazards, id);
}

const Recommendation* AnalysisStore::find_recommendation(std::string_view id) const {
  return find_item(recommendations, id);
}

const Hypothesis* AnalysisStore::find_hypothesis(std::string_view id) const {
  return find_item(hypotheses, id);
}

bool AnalysisStore::severity_in_scale(std::string_view severity) const {
  return severity.empty() ||
         std::find(severity_scale.begin(), severity_scale.end(), severity) != severity_scale.end();
}

std::vector<std::string> AnalysisStore::table_ids() const {
  std::vector<std::string> out;
  std::set<std::string> seen;
  for (const auto& r : rows) {
    if (seen.insert(r.table_id).second) out.push_back(r.table_id);
  }
  return out;
}

// --- consistency -------------------------------------------------------------------

namespace {

/// Whether the row's attribute still exists in the model and belongs to its table.
bool attribute_exists(const ProjectModel& model, const DeviationRowRecord& row) {
  const AttributeRef& ref = row.attribute_ref;
  if (!ref.element_id.starts_with(row.table_id + ".")) return false;
  auto element = element_lookup(model, ref.element_id);
  if (!element) return false;
  switch (ref.attribute.element_kind) {
    case ElementKind::use_case_condition: {
      const auto* c = std::get_if<ConditionRef>(&*element);
      return c != nullptr && ref.attribute.attribute == to_string(c->condition->kind);
    }
    case ElementKind::message:
      return std::holds_alternative<MessageRef>(*element);
    case ElementKind::transition:
      return std::holds_alternative<TransitionRef>(*element);
  }
  return false;
}

class ConsistencyChecker {
 public:
  ConsistencyChecker(const ProjectModel& model, const AnalysisStore& store)
      : model_(model), store_(store) {}

  std::vector<Diagnostic> run() {
    check_fingerprint();
    check_items();
    check_rows();
    check_recommendations();
    check_hypotheses();
    sort_diagnostics(out_);
    return std::move(out_);
  }

 private:
  void add(Severity severity, const char* code, std::string element, std::string message) {
    out_.push_back(Diagnostic{severity, code, std::move(element), std::move(message), std::nullopt});
  }

  void check_fingerprint() {
    if (store_.rows.empty() && store_.model_fingerprint.empty()) return;
    const std::string current = model_fingerprint(model_);
    if (store_.model_fingerprint != current) {
      add(Severity::error, code::kFingerprintMismatch, "",
          "analysis was generated from a different model version (stored " +
              (store_.model_fingerprint.empty() ? std::string("none") : store_.model_fingerprint) +
              ", current " + current + "); run generate");
    }
  }

  template <class Items>
  void check_unique(const Items& items, IdKind kind) {
    std::set<std::string> seen;
    for (const auto& item : items) {
      if (!id_number(item.id, kind)) {
        add(Severity::error, code::kInvalidId, item.id,
            std::string("id must be ") + id_prefix(kind) + " followed by a positive number");
      }
      if (!seen.insert(item.id).second) {
        add(Severity::error, code::kDuplicateItem, item.id, "id defined more than once");
      }
    }
  }

  void check_items() {
    check_unique(store_.hazards, IdKind::hazard);
    check_unique(store_.recommendations, IdKind::recommendation);
    check_unique(store_.hypotheses, IdKind::hypothesis);
  }

  void check_rows() {
    std::set<RowAnchor> anchors;
    std::set<std::string> referenced_hazards;
    for (const auto& row : store_.rows) {
      const std::string anchor = row.anchor().str();
      if (!anchors.insert(row.anchor()).second) {
        add(Severity::error, code::kDuplicateRow, anchor, "line number used by more than one row");
      }
      if (row.status != RowStatus::orphaned && !attribute_exists(model_, row)) {
        add(Severity::error, code::kUnknownAttribute, anchor,
            "attribute " + row.attribute_ref.str() + " no longer exists in the model");
      }
      for (const auto& h : row.hazards) {
        referenced_hazards.insert(h);
        if (!store_.find_hazard(h)) {
          add(Severity::error, code::kDanglingHazard, anchor, "unknown hazard " + h);
        }
      }
      for (const auto& r : row.recommendations) {
        if (!store_.find_recommendation(r)) {
          add(Severity::error, code::kDanglingRecommendation, anchor, "unknown recommendation " + r);
        }
      }
      if (!store_.severity_in_scale(row.severity)) {
        add(Severity::error, code::kSeverityNotInScale, anchor,
            "severity '" + row.severity + "' is not in the configured scale");
      }
      if (row.status == RowStatus::interpreted) {
        if (row.deviation.empty()) {
          add(Severity::error, code::kInterpretedWithoutDeviation, anchor,
              "interpreted row has no deviation text");
        }
        if (row.real_world_effect.empty()) {
          add(Severity::warning, code::kMissingRealWorldEffect, anchor,
              "interpreted row has no real world effect");
        }
      }
    }
    for (const auto& h : store_.hazards) {
      if (!referenced_hazards.count(h.id)) {
        add(Severity::warning, code::kOrphanHazard, h.id, "hazard is not referenced by any row");
      }
    }
  }

  void check_sources(const std::string& owner, const std::vector<RowAnchor>& sources) {
    for (const auto& s : sources) {
      if (!store_.find_row(s.table_id, s.line_number)) {
        add(Severity::error, code::kDanglingRow, owner, "unknown table line " + s.str());
      }
    }
  }

  void check_recommendations() {
    for (const auto& r : store_.recommendations) {
      for (const auto& h : r.covers) {
        if (!store_.find_hazard(h)) {
          add(Severity::error, code::kDanglingHazard, r.id, "unknown hazard " + h);
        }
      }
      check_sources(r.id, r.sources);
      if (r.covers.empty()) {
        add(Severity::warning, code::kRecommendationNoCoverage, r.id, "covers no hazard");
      }
      if (r.sources.empty()) {
        add(Severity::warning, code::kRecommendationNoSource, r.id, "has no source table line");
      }
    }
  }

  void check_hypotheses() {
    for (const auto& h : store_.hypotheses) check_sources(h.id, h.sources);
  }

  const ProjectModel& model_;
  const AnalysisStore& store_;
  std::vector<Diagnostic> out_;
};

}  // namespace

std::vector<Diagnostic> check_consistency(const ProjectModel& model, const AnalysisStore& store) {
  return ConsistencyChecker(model, store).run();
}

// --- ids --------------------------------------------------------------------------

const char* id_prefix(IdKind kind) {
  switch (kind) {
    case IdKind::hazard:
      return "HN";
    case IdKind::recommendation:
      return "Rec";
    case IdKind::hypothesis:
      return "Hyp";
  }
  return "HN";
}

std::optional<int> id_number(std::string_view id, IdKind kind) {
  std::string_view prefix = id_prefix(kind);
  if (!id.starts_with(prefix)) return std::nullopt;
  std::string_view digits = id.substr(prefix.size());
  if (digits.empty() || digits.front() == '0') return std::nullopt;
  int value = 0;
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
  if (ec != std::errc{} || ptr != digits.data() + digits.size() || value <= 0) return std::nullopt;
  return value;
}

namespace {

std::optional<IdKind> kind_of_id(std::string_view id) {
  for (IdKind kind : {IdKind::hazard, IdKind::recommendation, IdKind::hypothesis}) {
    if (id_number(id, kind)) return kind;
  }
  return std::nullopt;
}

bool id_taken(const AnalysisStore& store, std::string_view id) {
  return store.find_hazard(id) || store.find_recommendation(id) || store.find_hypothesis(id) ||
         std::find(store.tombstones.begin(), store.tombstones.end(), id) != store.tombstones.end();
}

}  // namespace

std::string allocate_id(const AnalysisStore& store, IdKind kind) {
  std::set<int> used;
  auto collect = [&](std::string_view id) {
    if (auto n = id_number(id, kind)) used.insert(*n);
  };
  for (const auto& h : store.hazards) collect(h.id);
  for (const auto& r : store.recommendations) collect(r.id);
  for (const auto& h : store.hypotheses) collect(h.id);
  for (const auto& t : store.tombstones) collect(t);
  int n = 1;
  while (used.count(n)) ++n;
  return id_prefix(kind) + std::to_string(n);
}

// --- mutations --------------------------------------------------------------------

namespace {

void require_fresh(const AnalysisStore& store, const std::string& id, IdKind kind) {
  if (!id_number(id, kind)) {
    throw StoreError(code::kInvalidId,
                     "'" + id + "' is not a valid " + id_prefix(kind) + " id");
  }
  if (id_taken(store, id)) throw StoreError(code::kInvalidId, id + " is already in use or retired");
}

void require_hazards(const AnalysisStore& store, const std::vector<std::string>& ids) {
  for (const auto& h : ids) {
    if (!store.find_hazard(h)) throw StoreError(code::kDanglingHazard, "unknown hazard " + h);
  }
}

void require_sources(const AnalysisStore& store, const std::vector<RowAnchor>& sources) {
  for (const auto& s : sources) {
    if (!store.find_row(s.table_id, s.line_number)) {
      throw StoreError(code::kDanglingRow, "unknown table line " + s.str());
    }
  }
}

}  // namespace

AnalysisStore set_row_fields(AnalysisStore store, std::string_view table_id, int line_number,
                             const RowUpdate& update) {
  if (!store.find_row(table_id, line_number)) {
    throw StoreError(code::kUnknownRow,
                     "no row " + std::string(table_id) + "." + std::to_string(line_number));
  }
  for (const auto& h : update.new_hazards) {
    require_fresh(store, h.id, IdKind::hazard);
    store.hazards.push_back(h);
  }
  for (const auto& r : update.new_recommendations) {
    require_fresh(store, r.id, IdKind::recommendation);
    require_hazards(store, r.covers);
    store.recommendations.push_back(r);
  }
  for (const auto& r : update.new_recommendations) require_sources(store, r.sources);

  DeviationRowRecord& row = *store.find_row(table_id, line_number);
  if (update.deviation) row.deviation = *update.deviation;
  if (update.use_case_effect) row.use_case_effect = *update.use_case_effect;
  if (update.real_world_effect) row.real_world_effect = *update.real_world_effect;
  if (update.severity) {
    if (!store.severity_in_scale(*update.severity)) {
      throw StoreError(code::kSeverityNotInScale,
                       "severity '" + *update.severity + "' is not in the configured scale");
    }
    row.severity = *update.severity;
  }
  if (update.possible_causes) row.possible_causes = *update.possible_causes;
  if (update.remarks) row.remarks = *update.remarks;
  if (update.hazards) {
    require_hazards(store, *update.hazards);
    row.hazards = *update.hazards;
  }
  if (update.recommendations) {
    for (const auto& r : *update.recommendations) {
      if (!store.find_recommendation(r)) {
        throw StoreError(code::kDanglingRecommendation, "unknown recommendation " + r);
      }
    }
    row.recommendations = *update.recommendations;
  }

  if (update.status) {
    if (*update.status == RowStatus::orphaned) {
      throw StoreError(code::kInvalidStatus, "rows are orphaned only by regeneration");
    }
    if (row.status == RowStatus::orphaned) {
      throw StoreError(code::kInvalidStatus, "the row is orphaned; regenerate to revive it");
    }
    row.status = *update.status;
    if (row.status == RowStatus::interpreted && row.deviation.empty()) {
      throw StoreError(code::kInvalidStatus, "an interpreted row needs deviation text");
    }
  } else if (row.status == RowStatus::skeleton && !row.deviation.empty()) {
    row.status = RowStatus::interpreted;
  } else if (row.status == RowStatus::interpreted && row.deviation.empty()) {
    row.status = RowStatus::skeleton;
  }
  return store;
}

int duplicate_row(AnalysisStore& store, std::string_view table_id, int line_number) {
  const DeviationRowRecord* source = store.find_row(table_id, line_number);
  if (!source) {
    throw StoreError(code::kUnknownRow,
                     "no row " + std::string(table_id) + "." + std::to_string(line_number));
  }
  DeviationRowRecord copy;
  copy.table_id = source->table_id;
  copy.attribute_ref = source->attribute_ref;
  copy.guide_word = source->guide_word;
  copy.hint = source->hint;
  copy.triggered_note = source->triggered_note;
  copy.status = source->status == RowStatus::orphaned ? RowStatus::orphaned : RowStatus::skeleton;
  if (copy.status == RowStatus::orphaned) copy.prior_status = RowStatus::skeleton;

  int& high = store.line_high_water[copy.table_id];
  for (const auto& r : store.rows) {
    if (r.table_id == copy.table_id) high = std::max(high, r.line_number);
  }
  copy.line_number = ++high;
  int line = copy.line_number;
  store.rows.push_back(std::move(copy));
  return line;
}

std::string add_hazard(AnalysisStore& store, std::string text, std::optional<std::string> note) {
  std::string id = allocate_id(store, IdKind::hazard);
  store.hazards.push_back(Hazard{id, std::move(text), std::move(note), std::nullopt});
  return id;
}

std::string add_recommendation(AnalysisStore& store, std::string text,
                               std::vector<std::string> covers, std::vector<RowAnchor> sources) {
  require_hazards(store, covers);
  require_sources(store, sources);
  std::string id = allocate_id(store, IdKind::recommendation);
  store.recommendations.push_back(
      Recommendation{id, std::move(text), std::move(covers), std::move(sources)});
  return id;
}

std::string add_hypothesis(AnalysisStore& store, std::string text, std::vector<RowAnchor> sources) {
  require_sources(store, sources);
  std::string id = allocate_id(store, IdKind::hypothesis);
  store.hypotheses.push_back(
      Hypothesis{id, std::move(text), HypothesisStatus::open, std::move(sources)});
  return id;
}

namespace {

template <class Item>
Item& existing(std::vector<Item>& items, std::string_view id) {
  auto it = std::find_if(items.begin(), items.end(), [&](const Item& i) { return i.id == id; });
  if (it == items.end()) throw StoreError(code::kUnknownItem, "unknown item " + std::string(id));
  return *it;
}

}  // namespace

void update_hazard(AnalysisStore& store, const Hazard& hazard) {
  existing(store.hazards, hazard.id) = hazard;
}

void update_recommendation(AnalysisStore& store, const Recommendation& recommendation) {
  Recommendation& target = existing(store.recommendations, recommendation.id);
  require_hazards(store, recommendation.covers);
  require_sources(store, recommendation.sources);
  target = recommendation;
}

void update_hypothesis(AnalysisStore& store, const Hypothesis& hypothesis) {
  Hypothesis& target = existing(store.hypotheses, hypothesis.id);
  require_sources(store, hypothesis.sources);
  target = hypothesis;
}

void remove_item(AnalysisStore& store, std::string_view id) {
  auto kind = kind_of_id(id);
  if (!kind) throw StoreError(code::kUnknownItem, "unknown item " + std::string(id));
  auto in_list = [&](const std::vector<std::string>& list) {
    return std::find(list.begin(), list.end(), id) != list.end();
  };
  switch (*kind) {
    case IdKind::hazard: {
      existing(store.hazards, id);
      bool used = std::any_of(store.rows.begin(), store.rows.end(),
                              [&](const auto& r) { return in_list(r.hazards); }) ||
                  std::any_of(store.recommendations.begin(), store.recommendations.end(),
                              [&](const auto& r) { return in_list(r.covers); });
      if (used) throw StoreError(code::kItemInUse, std::string(id) + " is still referenced");
      std::erase_if(store.hazards, [&](const Hazard& h) { return h.id == id; });
      break;
    }
    case IdKind::recommendation: {
      existing(store.recommendations, id);
      bool used = std::any_of(store.rows.begin(), store.rows.end(),
                              [&](const auto& r) { return in_list(r.recommendations); });
      if (used) throw StoreError(code::kItemInUse, std::string(id) + " is still referenced");
      std::erase_if(store.recommendations, [&](const Recommendation& r) { return r.id == id; });
      break;
    }
    case IdKind::hypothesis:
      existing(store.hypotheses, id);
      std::erase_if(store.hypotheses, [&](const Hypothesis& h) { return h.id == id; });
      break;
  }
  store.tombstones.emplace_back(id);
}

// --- outputs ----------------------------------------------------------------------

std::size_t HazardOutput::occurrences(DiagramType type) const {
  auto it = rows.find(type);
  return it == rows.end() ? 0 : it->second.size();
}

namespace {

template <class Item>
std::vector<Item> id_ordered(const std::vector<Item>& items, IdKind kind) {
  std::vector<Item> out;
  std::set<std::string> seen;
  for (const auto& item : items) {
    if (seen.insert(item.id).second) out.push_back(item);
  }
  std::stable_sort(out.begin(), out.end(), [kind](const Item& a, const Item& b) {
    return std::pair(id_number(a.id, kind).value_or(0), a.id) <
           std::pair(id_number(b.id, kind).value_or(0), b.id);
  });
  return out;
}

}  // namespace

ProjectOutputs concatenate_outputs(const AnalysisStore& store) {
  ProjectOutputs out;
  out.recommendations = id_ordered(store.recommendations, IdKind::recommendation);
  out.hypotheses = id_ordered(store.hypotheses, IdKind::hypothesis);
  for (auto& hazard : id_ordered(store.hazards, IdKind::hazard)) {
    HazardOutput entry;
    entry.hazard = std::move(hazard);
    for (const auto& row : store.rows) {
      if (row.status == RowStatus::orphaned) continue;
      if (std::find(row.hazards.begin(), row.hazards.end(), entry.hazard.id) == row.hazards.end()) {
        continue;
      }
      if (auto type = diagram_type_of(row.table_id)) entry.rows[*type].push_back(row.anchor());
    }
    for (auto& [type, anchors] : entry.rows) {
      std::sort(anchors.begin(), anchors.end());
      anchors.erase(std::unique(anchors.begin(), anchors.end()), anchors.end());
    }
    for (const auto& r : out.recommendations) {
      if (std::find(r.covers.begin(), r.covers.end(), entry.hazard.id) != r.covers.end()) {
        entry.recommendations.push_back(r.id);
      }
    }
    out.hazards.push_back(std::move(entry));
  }
  return out;
}

std::string outputs_to_json(const ProjectOutputs& outputs) { return to_json(outputs).dump(2); }

// --- persistence ------------------------------------------------------------------

std::string store_to_json(const AnalysisStore& store) {
  json rows = json::array();
  for (const auto& r : store.rows) rows.push_back(to_json(r));
  json hazards = json::array();
  for (const auto& h : store.hazards) hazards.push_back(to_json(h));
  json recs = json::array();
  for (const auto& r : store.recommendations) recs.push_back(to_json(r));
  json hyps = json::array();
  for (const auto& h : store.hypotheses) hyps.push_back(to_json(h));
  json doc{{"format", "hazop-analysis"},
           {"format_version", AnalysisStore::kFormatVersion},
           {"model_fingerprint", store.model_fingerprint},
           {"severity_scale", store.severity_scale},
           {"rows", std::move(rows)},
           {"hazards", std::move(hazards)},
           {"recommendations", std::move(recs)},
           {"hypotheses", std::move(hyps)},
           {"tombstones", store.tombstones},
           {"line_high_water", store.line_high_water}};
  return doc.dump(2) + "\n";
}

AnalysisStore store_from_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw StoreError(code::kStoreFormat, e.what());
  }
  if (!doc.is_object() || doc.value("format", "") != "hazop-analysis") {
    throw StoreError(code::kStoreFormat, "not a hazop analysis file");
  }
  if (doc.value("format_version", 0) != AnalysisStore::kFormatVersion) {
    throw StoreError(code::kStoreFormat, "unsupported analysis format version");
  }
  try {
    AnalysisStore store;
    store.model_fingerprint = doc.value("model_fingerprint", "");
    if (doc.contains("severity_scale")) {
      store.severity_scale = doc["severity_scale"].get<std::vector<std::string>>();
    }
    for (const auto& r : doc.value("rows", json::array())) store.rows.push_back(row_from_json(r));
    for (const auto& h : doc.value("hazards", json::array())) {
      store.hazards.push_back(hazard_from_json(h));
    }
    for (const auto& r : doc.value("recommendations", json::array())) {
      store.recommendations.push_back(recommendation_from_json(r));
    }
    for (const auto& h : doc.value("hypotheses", json::array())) {
      store.hypotheses.push_back(hypothesis_from_json(h));
    }
    if (doc.contains("tombstones")) {
      store.tombstones = doc["tombstones"].get<std::vector<std::string>>();
    }
    if (doc.contains("line_high_water")) {
      store.line_high_water = doc["line_high_water"].get<std::map<std::string, int>>();
    }
    return store;
  } catch (const json::exception& e) {
    throw StoreError(code::kStoreFormat, e.what());
  }
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  int fd = ::open(tmp.c_str(), O_WRONLY | O_CREAT | O_TRUNC | O_CLOEXEC, 0644);
  if (fd < 0) {
    throw StoreError(code::kStoreIo, "cannot write " + tmp.string() + ": " + std::strerror(errno));
  }
  const char* data = content.data();
  std::size_t left = content.size();
  while (left > 0) {
    ssize_t n = ::write(fd, data, left);
    if (n < 0) {
      if (errno == EINTR) continue;
      int err = errno;
      ::close(fd);
      throw StoreError(code::kStoreIo, "write failed for " + tmp.string() + ": " + std::strerror(err));
    }
    data += n;
    left -= static_cast<std::size_t>(n);
  }
  ::fsync(fd);
  ::close(fd);
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw StoreError(code::kStoreIo, "cannot replace " + path.string() + ": " + ec.message());
}

void save_store(const AnalysisStore& store, const std::filesystem::path& path) {
  write_file_atomic(path, store_to_json(store));
}

AnalysisStore load_store(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw StoreError(code::kStoreIo, "cannot read " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return store_from_json(buffer.str());
}

}  // namespace hazop
