#include "hazop/json_io.hpp"

#include <set>

#include "hazop/dsl.hpp"

namespace hazop {

using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& what) { throw StoreError(code::kStoreFormat, what); }

const json& field(const json& j, const char* name) {
  if (!j.is_object() || !j.contains(name)) bad(std::string("missing field '") + name + "'");
  return j.at(name);
}

std::string text(const json& j, const char* name) {
  const json& v = field(j, name);
  if (!v.is_string()) bad(std::string("field '") + name + "' must be a string");
  return v.get<std::string>();
}

std::string text_or(const json& j, const char* name, std::string fallback = {}) {
  if (!j.contains(name) || j.at(name).is_null()) return fallback;
  return text(j, name);
}

std::optional<std::string> optional_text(const json& j, const char* name) {
  if (!j.contains(name) || j.at(name).is_null()) return std::nullopt;
  return text(j, name);
}

std::vector<std::string> strings(const json& j, const char* name) {
  if (!j.contains(name)) return {};
  const json& v = j.at(name);
  if (!v.is_array()) bad(std::string("field '") + name + "' must be an array");
  std::vector<std::string> out;
  for (const auto& item : v) {
    if (!item.is_string()) bad(std::string("field '") + name + "' must hold strings");
    out.push_back(item.get<std::string>());
  }
  return out;
}

std::vector<RowAnchor> anchors(const json& j, const char* name) {
  std::vector<RowAnchor> out;
  for (const auto& s : strings(j, name)) {
    auto anchor = RowAnchor::parse(s);
    if (!anchor) bad("malformed row anchor '" + s + "'");
    out.push_back(*anchor);
  }
  return out;
}

json anchor_list(const std::vector<RowAnchor>& list) {
  json out = json::array();
  for (const auto& a : list) out.push_back(a.str());
  return out;
}

std::optional<SourceSpan> span_of(const Origin& origin) {
  if (origin.span.file.empty()) return std::nullopt;
  return origin.span;
}

json span_json(const Origin& origin) {
  auto span = span_of(origin);
  if (!span) return nullptr;
  return json{{"file", span->file}, {"line", span->line}, {"column", span->column}};
}

}  // namespace

json to_json(const Diagnostic& d) {
  json out{{"severity", to_string(d.severity)},
           {"code", d.code},
           {"element", d.element_id},
           {"message", d.message}};
  if (d.span) {
    out["span"] = {{"file", d.span->file}, {"line", d.span->line}, {"column", d.span->column}};
  }
  return out;
}

json to_json(const std::vector<Diagnostic>& diagnostics) {
  json out = json::array();
  for (const auto& d : diagnostics) out.push_back(to_json(d));
  return out;
}

json to_json(const ProjectModel& model) {
  json use_cases = json::array();
  for (const auto& uc : model.use_cases) {
    json conditions = json::array();
    for (const auto& c : uc.conditions) {
      conditions.push_back({{"id", c.id}, {"kind", to_string(c.kind)}, {"text", c.text}});
    }
    json meta = json::array();
    for (const auto& m : uc.meta) meta.push_back({{"key", m.key}, {"value", m.value}});
    use_cases.push_back({{"id", uc.id},
                         {"name", uc.name},
                         {"actors", uc.actors},
                         {"conditions", std::move(conditions)},
                         {"description", uc.description ? json(*uc.description) : json(nullptr)},
                         {"meta", std::move(meta)},
                         {"span", span_json(uc.origin)}});
  }
  json sequences = json::array();
  for (const auto& sd : model.sequence_diagrams) {
    json lifelines = json::array();
    for (const auto& l : sd.lifelines) {
      lifelines.push_back({{"name", l.name}, {"system", l.is_system}});
    }
    json messages = json::array();
    for (const auto& m : sd.messages) {
      json args = json::array();
      for (const auto& a : m.arguments) args.push_back({{"name", a.name}, {"unit", a.unit}});
      messages.push_back({{"id", sd.message_id(m)},
                          {"seq", m.seq_index},
                          {"sender", m.sender},
                          {"receiver", m.receiver},
                          {"name", m.name},
                          {"arguments", std::move(args)},
                          {"guard", m.guard ? json(*m.guard) : json(nullptr)},
                          {"timing", m.timing ? json(*m.timing) : json(nullptr)},
                          {"kind", m.kind ? json(to_string(*m.kind)) : json(nullptr)}});
    }
    sequences.push_back({{"id", sd.id},
                         {"name", sd.name},
                         {"use_case", sd.use_case_ref},
                         {"lifelines", std::move(lifelines)},
                         {"messages", std::move(messages)},
                         {"span", span_json(sd.origin)}});
  }
  json machines = json::array();
  for (const auto& sm : model.state_machines) {
    json states = json::array();
    for (const auto& s : sm.states) states.push_back({{"name", s.name}, {"initial", s.initial}});
    json transitions = json::array();
    for (const auto& t : sm.transitions) {
      json event = nullptr;
      if (t.event) event = {{"kind", to_string(t.event->kind)}, {"payload", t.event->payload}};
      transitions.push_back({{"id", t.id},
                             {"source", t.source},
                             {"destination", t.destination},
                             {"event", std::move(event)},
                             {"guard", t.guard ? json(*t.guard) : json(nullptr)},
                             {"actions", t.actions},
                             {"label", format_transition_label(t)}});
    }
    machines.push_back({{"id", sm.id},
                        {"object", sm.object},
                        {"states", std::move(states)},
                        {"transitions", std::move(transitions)},
                        {"span", span_json(sm.origin)}});
  }
  return json{{"name", model.name},
              {"use_cases", std::move(use_cases)},
              {"sequence_diagrams", std::move(sequences)},
              {"state_machines", std::move(machines)}};
}

json to_json(const DeviationRowRecord& row) {
  json out{{"table_id", row.table_id},
           {"line", row.line_number},
           {"anchor", row.anchor().str()},
           {"attribute", row.attribute_ref.str()},
           {"guide_word", row.guide_word},
           {"hint", row.hint},
           {"deviation", row.deviation},
           {"use_case_effect", row.use_case_effect},
           {"real_world_effect", row.real_world_effect},
           {"severity", row.severity},
           {"possible_causes", row.possible_causes},
           {"recommendations", row.recommendations},
           {"remarks", row.remarks},
           {"hazards", row.hazards},
           {"status", to_string(row.status)}};
  if (row.triggered_note) out["triggered_note"] = to_string(*row.triggered_note);
  if (row.prior_status) out["prior_status"] = to_string(*row.prior_status);
  return out;
}

json to_json(const Hazard& h) {
  json out{{"id", h.id}, {"text", h.text}};
  if (h.note) out["note"] = *h.note;
  if (h.pha_annotation) out["pha_annotation"] = *h.pha_annotation;
  return out;
}

json to_json(const Recommendation& r) {
  return json{{"id", r.id}, {"text", r.text}, {"covers", r.covers}, {"sources", anchor_list(r.sources)}};
}

json to_json(const Hypothesis& h) {
  return json{{"id", h.id},
              {"text", h.text},
              {"status", to_string(h.status)},
              {"sources", anchor_list(h.sources)}};
}

json to_json(const MergeReport& report) {
  auto counts = [](const MergeCounts& c) {
    return json{{"kept", c.kept}, {"added", c.added}, {"orphaned", c.orphaned}};
  };
  json tables = json::object();
  for (const auto& [table, c] : report.per_table) tables[table] = counts(c);
  json out = counts(report.total);
  out["tables"] = std::move(tables);
  return out;
}

json to_json(const ProjectOutputs& outputs) {
  json hazards = json::array();
  for (const auto& h : outputs.hazards) {
    json entry = to_json(h.hazard);
    json rows = json::object();
    json counts = json::object();
    for (const auto& [type, list] : h.rows) {
      rows[to_string(type)] = anchor_list(list);
      counts[to_string(type)] = list.size();
    }
    entry["rows"] = std::move(rows);
    entry["occurrences"] = std::move(counts);
    entry["recommendations"] = h.recommendations;
    hazards.push_back(std::move(entry));
  }
  json recs = json::array();
  for (const auto& r : outputs.recommendations) recs.push_back(to_json(r));
  json hyps = json::array();
  for (const auto& h : outputs.hypotheses) hyps.push_back(to_json(h));
  return json{{"hazards", std::move(hazards)},
              {"recommendations", std::move(recs)},
              {"hypotheses", std::move(hyps)}};
}

json to_json(const ProjectStats& stats) {
  json per_diagram = json::object();
  for (DiagramType t : {DiagramType::use_case, DiagramType::sequence, DiagramType::state_machine}) {
    const DiagramStats& s = stats[t];
    per_diagram[to_string(t)] = {{"elements", s.element_count},
                                 {"attribute_instances", s.attribute_instance_count},
                                 {"states", s.state_count},
                                 {"analyzed_deviations", s.analyzed_deviations},
                                 {"interpreted_deviations", s.interpreted_deviations},
                                 {"interpreted_with_recommendation",
                                  s.interpreted_with_recommendation}};
  }
  return json{{"diagrams", std::move(per_diagram)},
              {"hazards", stats.hazard_count},
              {"interpreted_deviations", stats.interpreted_deviations()}};
}

json to_json(const GuideWordUsage& usage) {
  json cells = json::array();
  for (const auto& c : usage.cells) {
    cells.push_back({{"element_kind", to_string(c.attribute.element_kind)},
                     {"attribute", c.attribute.attribute},
                     {"guide_word", c.guide_word},
                     {"interpreted", c.interpreted}});
  }
  return json{{"cells", std::move(cells)}, {"unregistered", usage.unregistered}};
}

DeviationRowRecord row_from_json(const json& j) {
  DeviationRowRecord row;
  row.table_id = text(j, "table_id");
  const json& line = field(j, "line");
  if (!line.is_number_integer() || line.get<int>() <= 0) bad("row line must be a positive integer");
  row.line_number = line.get<int>();
  std::string attribute = text(j, "attribute");
  auto ref = AttributeRef::parse(attribute);
  if (!ref) bad("malformed attribute reference '" + attribute + "'");
  row.attribute_ref = *ref;
  row.guide_word = text(j, "guide_word");
  row.hint = text_or(j, "hint");
  if (auto note = optional_text(j, "triggered_note")) {
    row.triggered_note = parse_triggered_note(*note);
    if (!row.triggered_note) bad("bad triggered_note '" + *note + "'");
  }
  row.deviation = text_or(j, "deviation");
  row.use_case_effect = text_or(j, "use_case_effect");
  row.real_world_effect = text_or(j, "real_world_effect");
  row.severity = text_or(j, "severity");
  row.possible_causes = text_or(j, "possible_causes");
  row.recommendations = strings(j, "recommendations");
  row.remarks = text_or(j, "remarks");
  row.hazards = strings(j, "hazards");
  std::string status = text_or(j, "status", "skeleton");
  auto parsed = parse_row_status(status);
  if (!parsed) bad("bad row status '" + status + "'");
  row.status = *parsed;
  if (auto prior = optional_text(j, "prior_status")) {
    row.prior_status = parse_row_status(*prior);
    if (!row.prior_status) bad("bad prior_status '" + *prior + "'");
  }
  return row;
}

Hazard hazard_from_json(const json& j) {
  return Hazard{text(j, "id"), text_or(j, "text"), optional_text(j, "note"),
                optional_text(j, "pha_annotation")};
}

Recommendation recommendation_from_json(const json& j) {
  return Recommendation{text(j, "id"), text_or(j, "text"), strings(j, "covers"),
                        anchors(j, "sources")};
}

Hypothesis hypothesis_from_json(const json& j) {
  Hypothesis h{text(j, "id"), text_or(j, "text"), HypothesisStatus::open, anchors(j, "sources")};
  std::string status = text_or(j, "status", "open");
  auto parsed = parse_hypothesis_status(status);
  if (!parsed) bad("bad hypothesis status '" + status + "'");
  h.status = *parsed;
  return h;
}

RowUpdate row_update_from_json(const json& j) {
  if (!j.is_object()) bad("row update must be a JSON object");
  static const std::set<std::string> known{
      "deviation", "use_case_effect", "real_world_effect", "severity",     "possible_causes",
      "recommendations", "remarks",   "hazards",           "status",       "new_hazards",
      "new_recommendations"};
  for (const auto& [key, value] : j.items()) {
    if (!known.count(key)) bad("unknown row field '" + key + "'");
  }
  RowUpdate update;
  update.deviation = optional_text(j, "deviation");
  update.use_case_effect = optional_text(j, "use_case_effect");
  update.real_world_effect = optional_text(j, "real_world_effect");
  update.severity = optional_text(j, "severity");
  update.possible_causes = optional_text(j, "possible_causes");
  update.remarks = optional_text(j, "remarks");
  if (j.contains("recommendations")) update.recommendations = strings(j, "recommendations");
  if (j.contains("hazards")) update.hazards = strings(j, "hazards");
  if (auto status = optional_text(j, "status")) {
    update.status = parse_row_status(*status);
    if (!update.status) bad("bad row status '" + *status + "'");
  }
  if (j.contains("new_hazards")) {
    if (!j["new_hazards"].is_array()) bad("new_hazards must be an array");
    for (const auto& h : j["new_hazards"]) update.new_hazards.push_back(hazard_from_json(h));
  }
  if (j.contains("new_recommendations")) {
    if (!j["new_recommendations"].is_array()) bad("new_recommendations must be an array");
    for (const auto& r : j["new_recommendations"]) {
      update.new_recommendations.push_back(recommendation_from_json(r));
    }
  }
  return update;
}

}  // namespace hazop
