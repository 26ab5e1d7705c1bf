#include <gtest/gtest.h>

#include <nlohmann/json.hpp>

#include "hazop/dsl.hpp"
#include "hazop/registry.hpp"
#include "test_support.hpp"

namespace hazop {
namespace {

std::string entry(const std::string& kind, const std::string& attribute, const std::string& word,
                  const std::string& applicability = "always") {
  return R"({"element_kind":")" + kind + R"(","attribute":")" + attribute +
         R"(","guide_word":")" + word + R"(","interpretation":"x","applicability":")" +
         applicability + "\"}";
}

std::string registry(const std::vector<std::string>& entries) {
  std::string out = R"({"version":"t","entries":[)";
  for (std::size_t i = 0; i < entries.size(); ++i) out += (i ? "," : "") + entries[i];
  return out + "]}";
}

TEST(Registry, DefaultUseCaseWordsAreTheSixOfTheMethod) {
  GuideWordRegistry r = default_registry();
  EXPECT_EQ(r.guide_words(ElementKind::use_case_condition),
            (std::vector<std::string>{"No", "Other than", "As well as", "Part of", "Early", "Late"}));
  for (const char* attribute : {"precondition", "postcondition", "invariant"}) {
    EXPECT_EQ(r.entries_for({ElementKind::use_case_condition, attribute}).size(), 6u) << attribute;
  }
}

TEST(Registry, DefaultHasEntriesForEveryAttribute) {
  GuideWordRegistry r = default_registry();
  EXPECT_EQ(r.entries.size(), 64u);
  for (auto kind : {ElementKind::use_case_condition, ElementKind::message, ElementKind::transition}) {
    for (const auto& attribute : attributes_of(kind)) {
      EXPECT_FALSE(r.entries_for({kind, attribute}).empty()) << attribute;
    }
  }
  for (const auto* e : r.entries_for({ElementKind::message, "interaction_constraint"})) {
    EXPECT_EQ(e->applicability, Applicability::requires_guard);
  }
  for (const auto* e : r.entries_for({ElementKind::transition, "event"})) {
    EXPECT_TRUE(e->triggered_note.has_value()) << e->guide_word;
  }
}

TEST(Registry, JsonRoundTrip) {
  GuideWordRegistry r = default_registry();
  auto again = load_registry_text(registry_to_json(r));
  ASSERT_TRUE(again.ok());
  EXPECT_EQ(*again.registry, r);
}

TEST(Registry, DuplicateEntryIsRejected) {
  auto r = load_registry_text(registry({entry("message", "general_ordering", "No"),
                                        entry("message", "general_ordering", "No")}),
                              "reg.json");
  EXPECT_FALSE(r.ok());
  ASSERT_EQ(r.diagnostics.size(), 1u);
  EXPECT_EQ(r.diagnostics[0].code, rule::kRegistryDuplicate);
  EXPECT_EQ(r.diagnostics[0].element_id, "entries[1]");
  EXPECT_EQ(r.diagnostics[0].span->file, "reg.json");
}

TEST(Registry, UnknownAttributeIsRejected) {
  auto r = load_registry_text(registry({entry("message", "colour", "No")}));
  EXPECT_FALSE(r.ok());
  ASSERT_EQ(r.diagnostics.size(), 1u);
  EXPECT_EQ(r.diagnostics[0].code, rule::kRegistryUnknownAttribute);
}

TEST(Registry, PredicatesMustFitTheElementKind) {
  auto r = load_registry_text(
      registry({entry("use_case_condition", "precondition", "No", "requires_guard")}));
  EXPECT_FALSE(r.ok());
  EXPECT_EQ(r.diagnostics.at(0).code, rule::kRegistryBadField);
  auto timing = load_registry_text(registry({entry("transition", "event", "Late", "requires_timing")}));
  EXPECT_FALSE(timing.ok());
}

TEST(Registry, MalformedJsonIsASyntaxDiagnostic) {
  auto r = load_registry_text("{ not json");
  EXPECT_FALSE(r.ok());
  EXPECT_EQ(r.diagnostics.at(0).code, rule::kRegistrySyntax);
}

TEST(Registry, AddingAWordAddsRowsForThatAttributeOnly) {
  // A seventh use-case word ("Faster") for preconditions only.
  std::string text(default_registry_text());
  nlohmann::json doc = nlohmann::json::parse(text);
  doc["entries"].push_back({{"element_kind", "use_case_condition"},
                            {"attribute", "precondition"},
                            {"guide_word", "Faster"},
                            {"interpretation", "Condition \"{text}\" holds sooner than expected"},
                            {"applicability", "always"}});
  auto extended = load_registry_text(doc.dump());
  ASSERT_TRUE(extended.ok());
  ProjectModel m = testing::miras_model();
  const auto* uc02 = m.find_use_case("UC02");
  std::size_t preconditions = 0;
  for (const auto& c : uc02->conditions) preconditions += c.kind == ConditionKind::precondition;
  EXPECT_EQ(preconditions, 4u);
  auto count = [&](const GuideWordRegistry& reg) {
    std::size_t n = 0;
    for (const auto& row : generate_skeleton(m, reg)) n += row.table_id == "UC02";
    return n;
  };
  EXPECT_EQ(count(default_registry()), 54u);
  EXPECT_EQ(count(*extended.registry), 58u);
}

TEST(Registry, ApplicabilityFiltersGuardedEntries) {
  ProjectModel m = testing::miras_model();
  const auto* sd = m.find_sequence("SD02");
  const Message& unguarded = sd->messages[0];
  const Message& guarded = sd->messages[3];
  ASSERT_FALSE(unguarded.guard);
  ASSERT_TRUE(guarded.guard);
  GuideWordRegistry r = default_registry();
  const AttributeKind constraint{ElementKind::message, "interaction_constraint"};
  EXPECT_TRUE(applicable_entries(r, MessageRef{sd, &unguarded}, constraint).empty());
  EXPECT_EQ(applicable_entries(r, MessageRef{sd, &guarded}, constraint).size(), 5u);
}

TEST(Registry, KindMismatchThrows) {
  ProjectModel m = testing::miras_model();
  const auto* uc = m.find_use_case("UC02");
  const Condition& pre = uc->conditions[0];
  GuideWordRegistry r = default_registry();
  EXPECT_THROW(applicable_entries(r, ConditionRef{uc, &pre}, {ElementKind::message, "lifelines"}),
               std::invalid_argument);
  EXPECT_THROW(applicable_entries(r, ConditionRef{uc, &pre},
                                  {ElementKind::use_case_condition, "postcondition"}),
               std::invalid_argument);
}

TEST(Registry, InterpretationPlaceholdersAreFilled) {
  ProjectModel m = testing::miras_model();
  const auto* uc = m.find_use_case("UC02");
  GuideWordRegistry r = default_registry();
  const auto* no = r.entries_for({ElementKind::use_case_condition, "precondition"}).front();
  EXPECT_EQ(instantiate_interpretation(*no, ConditionRef{uc, &uc->conditions[0]}),
            "Condition \"The patient is sitting\" is not evaluated and can have any value");
  const auto* sd = m.find_sequence("SD02");
  for (const auto* e : r.entries_for({ElementKind::message, "lifelines"})) {
    const std::string text = instantiate_interpretation(*e, MessageRef{sd, &sd->messages[0]});
    EXPECT_EQ(text.find('{'), std::string::npos) << text;
  }
}

}  // namespace
}  // namespace hazop
