#pragma once

// Guide-word tables: for each (element kind, attribute) the guide words that
// apply and the generic interpretation of the resulting deviation.

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hazop/diagnostic.hpp"
#include "hazop/model.hpp"

namespace hazop {

enum class ElementKind { use_case_condition, message, transition };

const char* to_string(ElementKind kind);
std::optional<ElementKind> parse_element_kind(std::string_view text);

struct AttributeKind {
  ElementKind element_kind = ElementKind::use_case_condition;
  std::string attribute;

  friend bool operator==(const AttributeKind&, const AttributeKind&) = default;
  friend auto operator<=>(const AttributeKind&, const AttributeKind&) = default;
};

/// Attributes of an element kind in generation order.
const std::vector<std::string>& attributes_of(ElementKind kind);
bool is_known_attribute(ElementKind kind, std::string_view attribute);

enum class Applicability { always, requires_guard, requires_timing, requires_multi_lifeline };

const char* to_string(Applicability applicability);
std::optional<Applicability> parse_applicability(std::string_view text);

/// Whether the deviation fires the transition (state machine tables only).
enum class TriggeredNote { triggered, not_triggered, not_applicable };

const char* to_string(TriggeredNote note);
std::optional<TriggeredNote> parse_triggered_note(std::string_view text);

struct GuideWordEntry {
  std::string guide_word;
  AttributeKind attribute;
  /// May contain {text}, {element}, {guard}, {event}, {action}, {sender},
  /// {receiver} and {arguments} placeholders.
  std::string interpretation;
  std::optional<TriggeredNote> triggered_note;
  Applicability applicability = Applicability::always;

  friend bool operator==(const GuideWordEntry&, const GuideWordEntry&) = default;
};

struct GuideWordRegistry {
  std::string version;
  std::vector<GuideWordEntry> entries;

  /// Entries for one attribute, in registry order.
  std::vector<const GuideWordEntry*> entries_for(const AttributeKind& attribute) const;
  /// Distinct guide words used by an element kind, in first-appearance order.
  std::vector<std::string> guide_words(ElementKind kind) const;

  friend bool operator==(const GuideWordRegistry&, const GuideWordRegistry&) = default;
};

namespace rule {
inline constexpr const char* kRegistrySyntax = "REGISTRY_SYNTAX";
inline constexpr const char* kRegistryDuplicate = "REGISTRY_DUPLICATE";
inline constexpr const char* kRegistryUnknownAttribute = "REGISTRY_UNKNOWN_ATTRIBUTE";
inline constexpr const char* kRegistryBadField = "REGISTRY_BAD_FIELD";
}  // namespace rule

struct RegistryLoadResult {
  std::optional<GuideWordRegistry> registry;
  std::vector<Diagnostic> diagnostics;

  bool ok() const { return registry.has_value(); }
};

/// Parses the JSON registry format
/// `{version, entries:[{element_kind, attribute, guide_word, interpretation,
/// triggered_note?, applicability}]}`.
RegistryLoadResult load_registry_text(std::string_view json_text, std::string source = "<registry>");
RegistryLoadResult load_registry(const std::filesystem::path& path);

/// JSON text of the registry shipped with the tool.
std::string_view default_registry_text();
GuideWordRegistry default_registry();

std::string registry_to_json(const GuideWordRegistry& registry);

/// Model element an attribute instance belongs to.
using AttributeElement = std::variant<ConditionRef, MessageRef, TransitionRef>;

ElementKind kind_of(const AttributeElement& element);

/// Registry entries for `attribute` whose applicability predicate holds on
/// `element`, in registry order. Throws std::invalid_argument when the
/// element does not carry that attribute.
std::vector<GuideWordEntry> applicable_entries(const GuideWordRegistry& registry,
                                               const AttributeElement& element,
                                               const AttributeKind& attribute);

bool predicate_holds(Applicability applicability, const AttributeElement& element);

/// Interpretation with placeholders replaced by the element's text.
std::string instantiate_interpretation(const GuideWordEntry& entry, const AttributeElement& element);

}  // namespace hazop
