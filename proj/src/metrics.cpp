#include "hazop/metrics.hpp"

#include <sstream>

#include "hazop/csv.hpp"

namespace hazop {

const DiagramStats& ProjectStats::operator[](DiagramType type) const {
  static const DiagramStats empty;
  auto it = per_diagram.find(type);
  return it == per_diagram.end() ? empty : it->second;
}

int ProjectStats::interpreted_deviations() const {
  int total = 0;
  for (const auto& [type, s] : per_diagram) total += s.interpreted_deviations;
  return total;
}

ProjectStats compute_stats(const ProjectModel& model, const AnalysisStore& store) {
  ProjectStats stats;
  DiagramStats& uc = stats.per_diagram[DiagramType::use_case];
  DiagramStats& sd = stats.per_diagram[DiagramType::sequence];
  DiagramStats& sm = stats.per_diagram[DiagramType::state_machine];

  uc.element_count = static_cast<int>(model.use_cases.size());
  for (const auto& u : model.use_cases) {
    uc.attribute_instance_count += static_cast<int>(u.conditions.size());
  }
  sd.element_count = static_cast<int>(model.sequence_diagrams.size());
  for (const auto& d : model.sequence_diagrams) {
    sd.attribute_instance_count += static_cast<int>(d.messages.size());
  }
  sm.element_count = static_cast<int>(model.state_machines.size());
  for (const auto& m : model.state_machines) {
    sm.attribute_instance_count += static_cast<int>(m.transitions.size());
    sm.state_count += static_cast<int>(m.states.size());
  }

  for (const auto& row : store.rows) {
    if (row.status == RowStatus::orphaned) continue;
    auto type = diagram_type_of(row.table_id);
    if (!type) continue;
    DiagramStats& s = stats.per_diagram[*type];
    ++s.analyzed_deviations;
    if (row.status == RowStatus::interpreted) {
      ++s.interpreted_deviations;
      if (!row.recommendations.empty()) ++s.interpreted_with_recommendation;
    }
  }
  stats.hazard_count = static_cast<int>(store.hazards.size());
  return stats;
}

int GuideWordUsage::total() const {
  int sum = unregistered;
  for (const auto& c : cells) sum += c.interpreted;
  return sum;
}

int GuideWordUsage::count(const AttributeKind& attribute, std::string_view guide_word) const {
  for (const auto& c : cells) {
    if (c.attribute == attribute && c.guide_word == guide_word) return c.interpreted;
  }
  return 0;
}

GuideWordUsage guideword_usage(const AnalysisStore& store, const GuideWordRegistry& registry) {
  GuideWordUsage usage;
  for (const auto& e : registry.entries) {
    usage.cells.push_back(GuideWordUsageCell{e.attribute, e.guide_word, 0});
  }
  for (const auto& row : store.rows) {
    if (row.status != RowStatus::interpreted) continue;
    bool found = false;
    for (auto& c : usage.cells) {
      if (c.attribute == row.attribute_ref.attribute && c.guide_word == row.guide_word) {
        ++c.interpreted;
        found = true;
        break;
      }
    }
    if (!found) ++usage.unregistered;
  }
  return usage;
}

namespace {

struct Labelled {
  DiagramType type;
  const char* element;
  const char* instance;
};

constexpr Labelled kSections[] = {
    {DiagramType::use_case, "Use cases", "Conditions"},
    {DiagramType::sequence, "Sequence diagrams", "Messages"},
    {DiagramType::state_machine, "State machines", "Transitions"},
};

}  // namespace

std::string format_stats(const ProjectStats& stats) {
  std::ostringstream out;
  for (const auto& section : kSections) {
    const DiagramStats& s = stats[section.type];
    out << section.element << ": " << s.element_count << '\n'
        << "  " << section.instance << ": " << s.attribute_instance_count << '\n';
    if (section.type == DiagramType::state_machine) out << "  States: " << s.state_count << '\n';
    out << "  Analyzed deviations: " << s.analyzed_deviations << '\n'
        << "  Interpreted deviations: " << s.interpreted_deviations << '\n'
        << "  Interpreted deviations with recommendation: " << s.interpreted_with_recommendation
        << '\n';
  }
  out << "Number of hazards: " << stats.hazard_count << '\n';
  return out.str();
}

std::string stats_to_csv(const ProjectStats& stats) {
  CsvWriter csv;
  csv.row({"Diagram", "Elements", "AttributeInstances", "States", "AnalyzedDeviations",
           "InterpretedDeviations", "InterpretedWithRecommendation"});
  for (const auto& section : kSections) {
    const DiagramStats& s = stats[section.type];
    csv.row({to_string(section.type), std::to_string(s.element_count),
             std::to_string(s.attribute_instance_count), std::to_string(s.state_count),
             std::to_string(s.analyzed_deviations), std::to_string(s.interpreted_deviations),
             std::to_string(s.interpreted_with_recommendation)});
  }
  csv.row({"Hazards", std::to_string(stats.hazard_count), "", "", "", "", ""});
  return csv.str();
}

std::string usage_to_csv(const GuideWordUsage& usage) {
  CsvWriter csv;
  csv.row({"ElementKind", "Attribute", "GuideWord", "Interpreted"});
  for (const auto& c : usage.cells) {
    csv.row({to_string(c.attribute.element_kind), c.attribute.attribute, c.guide_word,
             std::to_string(c.interpreted)});
  }
  return csv.str();
}

}  // namespace hazop
