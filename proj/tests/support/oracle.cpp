#include "test_support.hpp"

namespace hazop::testing {

namespace {

const char* condition_attribute(ConditionKind kind) {
  switch (kind) {
    case ConditionKind::precondition:
      return "precondition";
    case ConditionKind::postcondition:
      return "postcondition";
    case ConditionKind::invariant:
      return "invariant";
  }
  return "";
}

std::string line(const std::string& table, const std::string& element, const std::string& attribute,
                 const std::string& guide_word) {
  return table + "|" + element + "/" + attribute + "|" + guide_word;
}

}  // namespace

std::multiset<std::string> brute_force_rows(const ProjectModel& model,
                                            const GuideWordRegistry& registry) {
  std::multiset<std::string> out;
  for (const GuideWordEntry& entry : registry.entries) {
    const std::string& attribute = entry.attribute.attribute;
    switch (entry.attribute.element_kind) {
      case ElementKind::use_case_condition:
        // Conditions have no guard, timing or lifelines: only "always" applies.
        if (entry.applicability != Applicability::always) break;
        for (const auto& uc : model.use_cases) {
          for (const auto& c : uc.conditions) {
            if (attribute == condition_attribute(c.kind)) {
              out.insert(line(uc.id, c.id, attribute, entry.guide_word));
            }
          }
        }
        break;
      case ElementKind::message:
        for (const auto& sd : model.sequence_diagrams) {
          for (const auto& m : sd.messages) {
            bool applies = entry.applicability == Applicability::always ||
                           (entry.applicability == Applicability::requires_guard && m.guard) ||
                           (entry.applicability == Applicability::requires_timing && m.timing) ||
                           (entry.applicability == Applicability::requires_multi_lifeline &&
                            sd.lifelines.size() >= 3);
            if (applies) {
              out.insert(line(sd.id, sd.id + ".M" + std::to_string(m.seq_index), attribute,
                              entry.guide_word));
            }
          }
        }
        break;
      case ElementKind::transition:
        for (const auto& sm : model.state_machines) {
          for (const auto& t : sm.transitions) {
            bool applies = entry.applicability == Applicability::always ||
                           (entry.applicability == Applicability::requires_guard && t.guard);
            if (applies) out.insert(line(sm.id, t.id, attribute, entry.guide_word));
          }
        }
        break;
    }
  }
  return out;
}

}  // namespace hazop::testing
