#include "hazop/deviation.hpp"

#include <sstream>

namespace hazop {

std::string AttributeRef::str() const { return element_id + "/" + attribute.attribute; }

std::optional<AttributeRef> AttributeRef::parse(std::string_view text) {
  auto slash = text.rfind('/');
  if (slash == std::string_view::npos || slash == 0 || slash + 1 == text.size()) {
    return std::nullopt;
  }
  std::string_view element = text.substr(0, slash);
  std::string attribute(text.substr(slash + 1));
  if (element.find('.') == std::string_view::npos) return std::nullopt;
  ElementKind kind;
  if (element.starts_with("UC")) {
    kind = ElementKind::use_case_condition;
  } else if (element.starts_with("SD")) {
    kind = ElementKind::message;
  } else if (element.starts_with("SM")) {
    kind = ElementKind::transition;
  } else {
    return std::nullopt;
  }
  if (!is_known_attribute(kind, attribute)) return std::nullopt;
  return AttributeRef{std::string(element), AttributeKind{kind, std::move(attribute)}};
}

RowKey key_of(const SkeletonRow& row) {
  return RowKey{row.table_id, row.attribute_ref.str(), row.guide_word};
}

namespace {

class TableBuilder {
 public:
  TableBuilder(std::string table_id, const GuideWordRegistry& registry,
               std::vector<SkeletonRow>& out)
      : table_id_(std::move(table_id)), registry_(registry), out_(out) {}

  void add(const AttributeElement& element, const std::string& element_id,
           const AttributeKind& attribute) {
    for (const auto& entry : applicable_entries(registry_, element, attribute)) {
      out_.push_back(SkeletonRow{table_id_, ++line_, AttributeRef{element_id, attribute},
                                 entry.guide_word, instantiate_interpretation(entry, element),
                                 entry.triggered_note});
    }
  }

 private:
  std::string table_id_;
  const GuideWordRegistry& registry_;
  std::vector<SkeletonRow>& out_;
  int line_ = 0;
};

}  // namespace

std::vector<SkeletonRow> generate_skeleton(const ProjectModel& model,
                                           const GuideWordRegistry& registry) {
  std::vector<SkeletonRow> rows;
  for (const auto& uc : model.use_cases) {
    TableBuilder table(uc.id, registry, rows);
    for (const auto& c : uc.conditions) {
      table.add(ConditionRef{&uc, &c}, c.id,
                AttributeKind{ElementKind::use_case_condition, to_string(c.kind)});
    }
  }
  for (const auto& sd : model.sequence_diagrams) {
    TableBuilder table(sd.id, registry, rows);
    for (const auto& m : sd.messages) {
      for (const auto& attribute : attributes_of(ElementKind::message)) {
        table.add(MessageRef{&sd, &m}, sd.message_id(m),
                  AttributeKind{ElementKind::message, attribute});
      }
    }
  }
  for (const auto& sm : model.state_machines) {
    TableBuilder table(sm.id, registry, rows);
    for (const auto& t : sm.transitions) {
      for (const auto& attribute : attributes_of(ElementKind::transition)) {
        table.add(TransitionRef{&sm, &t}, t.id, AttributeKind{ElementKind::transition, attribute});
      }
    }
  }
  return rows;
}

std::string format_merge_report(const MergeReport& report) {
  std::ostringstream out;
  for (const auto& [table, counts] : report.per_table) {
    out << "table " << table << ": kept " << counts.kept << ", added " << counts.added
        << ", orphaned " << counts.orphaned << '\n';
  }
  out << "total: kept " << report.total.kept << ", added " << report.total.added << ", orphaned "
      << report.total.orphaned << '\n';
  return out.str();
}

}  // namespace hazop
