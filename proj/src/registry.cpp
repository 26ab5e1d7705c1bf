#include "hazop/registry.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "hazop/dsl.hpp"

namespace hazop {

using nlohmann::json;

const char* to_string(ElementKind kind) {
  switch (kind) {
    case ElementKind::use_case_condition:
      return "use_case_condition";
    case ElementKind::message:
      return "message";
    case ElementKind::transition:
      return "transition";
  }
  return "message";
}

std::optional<ElementKind> parse_element_kind(std::string_view text) {
  if (text == "use_case_condition") return ElementKind::use_case_condition;
  if (text == "message") return ElementKind::message;
  if (text == "transition") return ElementKind::transition;
  return std::nullopt;
}

const std::vector<std::string>& attributes_of(ElementKind kind) {
  static const std::vector<std::string> conditions{"precondition", "postcondition", "invariant"};
  static const std::vector<std::string> messages{"general_ordering", "send_receive_timing",
                                                 "lifelines", "interaction_constraint",
                                                 "message_argument"};
  static const std::vector<std::string> transitions{"event", "guard", "action"};
  switch (kind) {
    case ElementKind::use_case_condition:
      return conditions;
    case ElementKind::message:
      return messages;
    case ElementKind::transition:
      return transitions;
  }
  return messages;
}

bool is_known_attribute(ElementKind kind, std::string_view attribute) {
  for (const auto& a : attributes_of(kind)) {
    if (a == attribute) return true;
  }
  return false;
}

const char* to_string(Applicability applicability) {
  switch (applicability) {
    case Applicability::always:
      return "always";
    case Applicability::requires_guard:
      return "requires_guard";
    case Applicability::requires_timing:
      return "requires_timing";
    case Applicability::requires_multi_lifeline:
      return "requires_multi_lifeline";
  }
  return "always";
}

std::optional<Applicability> parse_applicability(std::string_view text) {
  if (text == "always") return Applicability::always;
  if (text == "requires_guard") return Applicability::requires_guard;
  if (text == "requires_timing") return Applicability::requires_timing;
  if (text == "requires_multi_lifeline") return Applicability::requires_multi_lifeline;
  return std::nullopt;
}

const char* to_string(TriggeredNote note) {
  switch (note) {
    case TriggeredNote::triggered:
      return "triggered";
    case TriggeredNote::not_triggered:
      return "not_triggered";
    case TriggeredNote::not_applicable:
      return "n/a";
  }
  return "n/a";
}

std::optional<TriggeredNote> parse_triggered_note(std::string_view text) {
  if (text == "triggered") return TriggeredNote::triggered;
  if (text == "not_triggered") return TriggeredNote::not_triggered;
  if (text == "n/a") return TriggeredNote::not_applicable;
  return std::nullopt;
}

std::vector<const GuideWordEntry*> GuideWordRegistry::entries_for(
    const AttributeKind& attribute) const {
  std::vector<const GuideWordEntry*> out;
  for (const auto& e : entries) {
    if (e.attribute == attribute) out.push_back(&e);
  }
  return out;
}

std::vector<std::string> GuideWordRegistry::guide_words(ElementKind kind) const {
  std::vector<std::string> out;
  std::set<std::string> seen;
  for (const auto& e : entries) {
    if (e.attribute.element_kind == kind && seen.insert(e.guide_word).second) {
      out.push_back(e.guide_word);
    }
  }
  return out;
}

namespace {

bool predicate_allowed(Applicability applicability, ElementKind kind) {
  switch (applicability) {
    case Applicability::always:
      return true;
    case Applicability::requires_guard:
      return kind != ElementKind::use_case_condition;
    case Applicability::requires_timing:
    case Applicability::requires_multi_lifeline:
      return kind == ElementKind::message;
  }
  return false;
}

}  // namespace

RegistryLoadResult load_registry_text(std::string_view json_text, std::string source) {
  RegistryLoadResult result;
  auto diag = [&](const char* code, std::string id, std::string message) {
    result.diagnostics.push_back(
        Diagnostic{Severity::error, code, std::move(id), std::move(message), SourceSpan{source}});
  };

  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    diag(rule::kRegistrySyntax, "", e.what());
    return result;
  }
  if (!doc.is_object() || !doc.contains("entries") || !doc["entries"].is_array()) {
    diag(rule::kRegistrySyntax, "", "registry must be an object with an 'entries' array");
    return result;
  }

  GuideWordRegistry registry;
  if (doc.contains("version") && doc["version"].is_string()) {
    registry.version = doc["version"].get<std::string>();
  }
  std::set<std::tuple<int, std::string, std::string>> keys;
  std::size_t index = 0;
  for (const auto& item : doc["entries"]) {
    const std::string where = "entries[" + std::to_string(index++) + "]";
    auto text_field = [&](const char* field) -> std::optional<std::string> {
      if (!item.is_object() || !item.contains(field) || !item[field].is_string()) return std::nullopt;
      return item[field].get<std::string>();
    };
    auto kind_text = text_field("element_kind");
    auto attribute = text_field("attribute");
    auto guide_word = text_field("guide_word");
    auto interpretation = text_field("interpretation");
    auto applicability_text = text_field("applicability");
    if (!kind_text || !attribute || !guide_word || !interpretation) {
      diag(rule::kRegistryBadField, where,
           "entry needs string fields element_kind, attribute, guide_word, interpretation");
      continue;
    }
    auto kind = parse_element_kind(*kind_text);
    if (!kind) {
      diag(rule::kRegistryUnknownAttribute, where, "unknown element kind '" + *kind_text + "'");
      continue;
    }
    if (!is_known_attribute(*kind, *attribute)) {
      diag(rule::kRegistryUnknownAttribute, where,
           "unknown attribute '" + *attribute + "' for " + *kind_text);
      continue;
    }
    if (guide_word->empty()) {
      diag(rule::kRegistryBadField, where, "guide word is empty");
      continue;
    }
    GuideWordEntry entry;
    entry.guide_word = *guide_word;
    entry.attribute = AttributeKind{*kind, *attribute};
    entry.interpretation = *interpretation;
    if (applicability_text) {
      auto applicability = parse_applicability(*applicability_text);
      if (!applicability || !predicate_allowed(*applicability, *kind)) {
        diag(rule::kRegistryBadField, where,
             "applicability '" + *applicability_text + "' is not valid for " + *kind_text);
        continue;
      }
      entry.applicability = *applicability;
    }
    if (item.contains("triggered_note")) {
      auto note_text = text_field("triggered_note");
      auto note = note_text ? parse_triggered_note(*note_text) : std::nullopt;
      if (!note) {
        diag(rule::kRegistryBadField, where, "triggered_note must be triggered, not_triggered or n/a");
        continue;
      }
      entry.triggered_note = note;
    }
    if (!keys.emplace(static_cast<int>(*kind), *attribute, *guide_word).second) {
      diag(rule::kRegistryDuplicate, where,
           "duplicate guide word '" + *guide_word + "' for " + *kind_text + "/" + *attribute);
      continue;
    }
    registry.entries.push_back(std::move(entry));
  }
  if (result.diagnostics.empty()) result.registry = std::move(registry);
  return result;
}

RegistryLoadResult load_registry(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    RegistryLoadResult result;
    result.diagnostics.push_back(Diagnostic{Severity::error, rule::kRegistrySyntax, "",
                                            "cannot read registry file", SourceSpan{path.string()}});
    return result;
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return load_registry_text(buffer.str(), path.string());
}

GuideWordRegistry default_registry() {
  auto loaded = load_registry_text(default_registry_text(), "default_registry.json");
  if (!loaded.registry) throw std::logic_error("built-in guide-word registry is invalid");
  return std::move(*loaded.registry);
}

std::string registry_to_json(const GuideWordRegistry& registry) {
  json entries = json::array();
  for (const auto& e : registry.entries) {
    json item = {{"element_kind", to_string(e.attribute.element_kind)},
                 {"attribute", e.attribute.attribute},
                 {"guide_word", e.guide_word},
                 {"interpretation", e.interpretation},
                 {"applicability", to_string(e.applicability)}};
    if (e.triggered_note) item["triggered_note"] = to_string(*e.triggered_note);
    entries.push_back(std::move(item));
  }
  return json{{"version", registry.version}, {"entries", std::move(entries)}}.dump(2);
}

ElementKind kind_of(const AttributeElement& element) {
  switch (element.index()) {
    case 0:
      return ElementKind::use_case_condition;
    case 1:
      return ElementKind::message;
    default:
      return ElementKind::transition;
  }
}

bool predicate_holds(Applicability applicability, const AttributeElement& element) {
  switch (applicability) {
    case Applicability::always:
      return true;
    case Applicability::requires_guard:
      if (const auto* m = std::get_if<MessageRef>(&element)) return m->message->guard.has_value();
      if (const auto* t = std::get_if<TransitionRef>(&element)) {
        return t->transition->guard.has_value();
      }
      return false;
    case Applicability::requires_timing:
      if (const auto* m = std::get_if<MessageRef>(&element)) return m->message->timing.has_value();
      return false;
    case Applicability::requires_multi_lifeline:
      if (const auto* m = std::get_if<MessageRef>(&element)) {
        return m->diagram->lifelines.size() > 2;
      }
      return false;
  }
  return false;
}

std::vector<GuideWordEntry> applicable_entries(const GuideWordRegistry& registry,
                                               const AttributeElement& element,
                                               const AttributeKind& attribute) {
  if (kind_of(element) != attribute.element_kind) {
    throw std::invalid_argument(std::string("attribute of ") + to_string(attribute.element_kind) +
                                " applied to a " + to_string(kind_of(element)));
  }
  if (const auto* c = std::get_if<ConditionRef>(&element)) {
    if (attribute.attribute != to_string(c->condition->kind)) {
      throw std::invalid_argument("condition " + c->condition->id + " is a " +
                                  to_string(c->condition->kind) + ", not a " +
                                  attribute.attribute);
    }
  }
  std::vector<GuideWordEntry> out;
  for (const auto* e : registry.entries_for(attribute)) {
    if (predicate_holds(e->applicability, element)) out.push_back(*e);
  }
  return out;
}

namespace {

void replace_all(std::string& text, std::string_view from, std::string_view to) {
  std::size_t pos = 0;
  while ((pos = text.find(from, pos)) != std::string::npos) {
    text.replace(pos, from.size(), to);
    pos += to.size();
  }
}

std::string or_none(std::string text) { return text.empty() ? "(none)" : text; }

}  // namespace

std::string instantiate_interpretation(const GuideWordEntry& entry,
                                       const AttributeElement& element) {
  std::string text, id, guard, event, action, sender, receiver, arguments;
  if (const auto* c = std::get_if<ConditionRef>(&element)) {
    text = c->condition->text;
    id = c->condition->id;
  } else if (const auto* m = std::get_if<MessageRef>(&element)) {
    const Message& msg = *m->message;
    text = std::to_string(msg.seq_index) + ":" + msg.name;
    id = m->diagram->message_id(msg);
    guard = msg.guard.value_or("");
    sender = msg.sender;
    receiver = msg.receiver;
    for (std::size_t i = 0; i < msg.arguments.size(); ++i) {
      if (i) arguments += ", ";
      arguments += msg.arguments[i].name;
    }
  } else {
    const auto& t = std::get<TransitionRef>(element);
    const Transition& tr = *t.transition;
    text = tr.source + " -> " + tr.destination + " : " + format_transition_label(tr);
    id = tr.id;
    guard = tr.guard.value_or("");
    if (tr.event) {
      Transition only_event;
      only_event.event = tr.event;
      event = format_transition_label(only_event);
    }
    for (std::size_t i = 0; i < tr.actions.size(); ++i) {
      if (i) action += ", ";
      action += tr.actions[i];
    }
  }
  std::string out = entry.interpretation;
  replace_all(out, "{text}", text);
  replace_all(out, "{element}", id);
  replace_all(out, "{guard}", or_none(guard));
  replace_all(out, "{event}", or_none(event));
  replace_all(out, "{action}", or_none(action));
  replace_all(out, "{sender}", or_none(sender));
  replace_all(out, "{receiver}", or_none(receiver));
  replace_all(out, "{arguments}", or_none(arguments));
  return out;
}

}  // namespace hazop
