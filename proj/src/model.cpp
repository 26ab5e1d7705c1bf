#include "hazop/model.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <regex>
#include <set>
#include <tuple>

namespace hazop {

const char* to_string(ConditionKind kind) {
  switch (kind) {
    case ConditionKind::precondition:
      return "precondition";
    case ConditionKind::postcondition:
      return "postcondition";
    case ConditionKind::invariant:
      return "invariant";
  }
  return "precondition";
}

std::optional<ConditionKind> parse_condition_kind(std::string_view text) {
  if (text == "precondition") return ConditionKind::precondition;
  if (text == "postcondition") return ConditionKind::postcondition;
  if (text == "invariant") return ConditionKind::invariant;
  return std::nullopt;
}

const char* to_string(MessageKind kind) {
  switch (kind) {
    case MessageKind::indirect:
      return "indirect";
    case MessageKind::cognitive:
      return "cognitive";
    case MessageKind::physical:
      return "physical";
  }
  return "physical";
}

std::optional<MessageKind> parse_message_kind(std::string_view text) {
  if (text == "indirect") return MessageKind::indirect;
  if (text == "cognitive") return MessageKind::cognitive;
  if (text == "physical") return MessageKind::physical;
  return std::nullopt;
}

const char* to_string(EventKind kind) {
  switch (kind) {
    case EventKind::signal:
      return "signal";
    case EventKind::call:
      return "call";
    case EventKind::change:
      return "change";
    case EventKind::temporal_after:
      return "temporal_after";
    case EventKind::temporal_when:
      return "temporal_when";
  }
  return "signal";
}

std::optional<EventKind> parse_event_kind(std::string_view text) {
  if (text == "signal") return EventKind::signal;
  if (text == "call") return EventKind::call;
  if (text == "change") return EventKind::change;
  if (text == "temporal_after") return EventKind::temporal_after;
  if (text == "temporal_when") return EventKind::temporal_when;
  return std::nullopt;
}

std::string SequenceDiagram::message_id(const Message& message) const {
  return id + ".M" + std::to_string(message.seq_index);
}

const Lifeline* SequenceDiagram::find_lifeline(std::string_view lifeline) const {
  auto it = std::find_if(lifelines.begin(), lifelines.end(),
                         [&](const Lifeline& l) { return l.name == lifeline; });
  return it == lifelines.end() ? nullptr : &*it;
}

const State* StateMachine::find_state(std::string_view state) const {
  auto it = std::find_if(states.begin(), states.end(),
                         [&](const State& s) { return s.name == state; });
  return it == states.end() ? nullptr : &*it;
}

namespace {

template <class Range>
auto find_by_id(const Range& range, std::string_view id) -> decltype(&*range.begin()) {
  auto it = std::find_if(range.begin(), range.end(), [&](const auto& e) { return e.id == id; });
  return it == range.end() ? nullptr : &*it;
}

std::optional<int> parse_positive(std::string_view digits) {
  if (digits.empty()) return std::nullopt;
  int value = 0;
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
  if (ec != std::errc{} || ptr != digits.data() + digits.size() || value <= 0) {
    return std::nullopt;
  }
  return value;
}

}  // namespace

const UseCase* ProjectModel::find_use_case(std::string_view id) const {
  return find_by_id(use_cases, id);
}

const SequenceDiagram* ProjectModel::find_sequence(std::string_view id) const {
  return find_by_id(sequence_diagrams, id);
}

const StateMachine* ProjectModel::find_state_machine(std::string_view id) const {
  return find_by_id(state_machines, id);
}

std::optional<ElementRef> element_lookup(const ProjectModel& model, std::string_view id) {
  auto dot = id.find('.');
  std::string_view head = id.substr(0, dot);
  std::string_view tail = dot == std::string_view::npos ? std::string_view{} : id.substr(dot + 1);
  if (dot != std::string_view::npos && tail.empty()) return std::nullopt;

  if (head.starts_with("UC")) {
    const UseCase* uc = model.find_use_case(head);
    if (uc == nullptr) return std::nullopt;
    if (dot == std::string_view::npos) return ElementRef{uc};
    const Condition* c = find_by_id(uc->conditions, id);
    if (c == nullptr) return std::nullopt;
    return ElementRef{ConditionRef{uc, c}};
  }
  if (head.starts_with("SD")) {
    const SequenceDiagram* sd = model.find_sequence(head);
    if (sd == nullptr) return std::nullopt;
    if (dot == std::string_view::npos) return ElementRef{sd};
    if (!tail.starts_with("M")) return std::nullopt;
    auto seq = parse_positive(tail.substr(1));
    if (!seq) return std::nullopt;
    auto it = std::find_if(sd->messages.begin(), sd->messages.end(),
                           [&](const Message& m) { return m.seq_index == *seq; });
    if (it == sd->messages.end()) return std::nullopt;
    return ElementRef{MessageRef{sd, &*it}};
  }
  if (head.starts_with("SM")) {
    const StateMachine* sm = model.find_state_machine(head);
    if (sm == nullptr) return std::nullopt;
    if (dot == std::string_view::npos) return ElementRef{sm};
    const Transition* t = find_by_id(sm->transitions, id);
    if (t == nullptr) return std::nullopt;
    return ElementRef{TransitionRef{sm, t}};
  }
  return std::nullopt;
}

std::string element_id(const ElementRef& ref) {
  struct Visitor {
    std::string operator()(const UseCase* uc) const { return uc->id; }
    std::string operator()(const ConditionRef& c) const { return c.condition->id; }
    std::string operator()(const SequenceDiagram* sd) const { return sd->id; }
    std::string operator()(const MessageRef& m) const { return m.diagram->message_id(*m.message); }
    std::string operator()(const StateMachine* sm) const { return sm->id; }
    std::string operator()(const TransitionRef& t) const { return t.transition->id; }
  };
  return std::visit(Visitor{}, ref);
}

bool is_duration_literal(std::string_view text) {
  static const std::regex pattern(R"(^\s*[0-9]+(\.[0-9]+)?\s*(ms|s|sec|min|h)\s*$)");
  return std::regex_match(text.begin(), text.end(), pattern);
}

namespace {

bool balanced_parens(std::string_view text) {
  int depth = 0;
  for (char c : text) {
    if (c == '(') ++depth;
    if (c == ')' && --depth < 0) return false;
  }
  return depth == 0;
}

bool is_identifier(std::string_view text) {
  static const std::regex pattern(R"(^[A-Za-z_][A-Za-z0-9_]*$)");
  return std::regex_match(text.begin(), text.end(), pattern);
}

class Validator {
 public:
  explicit Validator(const ProjectModel& model) : model_(model) {}

  std::vector<Diagnostic> run() {
    for (const auto& uc : model_.use_cases) check_use_case(uc);
    for (const auto& sd : model_.sequence_diagrams) check_sequence(sd);
    for (const auto& sm : model_.state_machines) check_state_machine(sm);
    sort_diagnostics(out_);
    return std::move(out_);
  }

 private:
  void report(Severity severity, const char* code, const std::string& id, std::string message,
              const Origin& origin) {
    std::optional<SourceSpan> span;
    if (!origin.span.file.empty()) span = origin.span;
    out_.push_back(Diagnostic{severity, code, id, std::move(message), span});
  }

  void error(const char* code, const std::string& id, std::string message, const Origin& origin) {
    report(Severity::error, code, id, std::move(message), origin);
  }

  void claim_id(const std::string& id, const Origin& origin) {
    if (!seen_.insert(id).second) error(rule::kDuplicateId, id, "duplicate element id", origin);
  }

  void check_pattern(const std::string& id, const std::string& pattern, const Origin& origin) {
    if (!std::regex_match(id, std::regex(pattern))) {
      error(rule::kBadId, id, "id does not match the expected form " + pattern, origin);
    }
  }

  void check_use_case(const UseCase& uc) {
    check_pattern(uc.id, "UC[0-9]+", uc.origin);
    claim_id(uc.id, uc.origin);
    if (uc.conditions.empty()) {
      report(Severity::warning, rule::kUseCaseNoConditions, uc.id,
             "use case has no conditions and yields no deviations", uc.origin);
    }
    for (const auto& c : uc.conditions) {
      check_pattern(c.id, uc.id + "\\.C[0-9]+", c.origin);
      claim_id(c.id, c.origin);
      if (c.text.empty()) error(rule::kConditionEmpty, c.id, "condition text is empty", c.origin);
    }
  }

  void check_sequence(const SequenceDiagram& sd) {
    check_pattern(sd.id, "SD[0-9]+", sd.origin);
    claim_id(sd.id, sd.origin);
    if (model_.find_use_case(sd.use_case_ref) == nullptr) {
      error(rule::kSequenceUnknownUseCase, sd.id,
            "sequence diagram refers to unknown use case '" + sd.use_case_ref + "'", sd.origin);
    }
    std::set<std::string> names;
    int systems = 0;
    for (const auto& l : sd.lifelines) {
      if (!names.insert(l.name).second) {
        error(rule::kSequenceDuplicateLifeline, sd.id, "lifeline '" + l.name + "' declared twice",
              l.origin);
      }
      if (l.is_system) ++systems;
    }
    if (systems == 0) {
      error(rule::kSequenceNoSystem, sd.id, "no lifeline is flagged as the system", sd.origin);
    } else if (systems > 1) {
      error(rule::kSequenceMultipleSystem, sd.id,
            std::to_string(systems) + " lifelines are flagged as the system", sd.origin);
    }
    // Numbers must increase strictly; gaps are allowed so that deleting a
    // message does not renumber (and re-key) the ones after it.
    int previous = 0;
    for (const auto& m : sd.messages) {
      const std::string mid = sd.message_id(m);
      if (m.seq_index <= previous) {
        error(rule::kSequenceOrder, mid,
              "message numbers must increase; expected a number above " + std::to_string(previous),
              m.origin);
      }
      previous = std::max(previous, m.seq_index);
      for (const auto* end : {&m.sender, &m.receiver}) {
        if (sd.find_lifeline(*end) == nullptr) {
          error(rule::kSequenceUnknownLifeline, mid, "undeclared lifeline '" + *end + "'",
                m.origin);
        }
      }
      if (m.guard && m.guard->empty()) {
        error(rule::kSequenceEmptyGuard, mid, "guard is present but empty", m.origin);
      }
    }
  }

  void check_event(const Transition& t, const Event& e) {
    bool ok = true;
    switch (e.kind) {
      case EventKind::signal:
        ok = is_identifier(e.payload);
        break;
      case EventKind::call:
        ok = !e.payload.empty() && e.payload.back() == ')' && balanced_parens(e.payload);
        break;
      case EventKind::change:
      case EventKind::temporal_when:
        ok = !e.payload.empty() && balanced_parens(e.payload);
        break;
      case EventKind::temporal_after:
        ok = is_duration_literal(e.payload);
        break;
    }
    if (!ok) {
      error(rule::kStateMachineBadEvent, t.id,
            std::string("malformed ") + to_string(e.kind) + " event payload '" + e.payload + "'",
            t.origin);
    }
  }

  void check_state_machine(const StateMachine& sm) {
    check_pattern(sm.id, "SM[0-9]+", sm.origin);
    claim_id(sm.id, sm.origin);
    std::set<std::string> names;
    int initial = 0;
    for (const auto& s : sm.states) {
      if (!names.insert(s.name).second) {
        error(rule::kStateMachineDuplicateState, sm.id, "state '" + s.name + "' declared twice",
              s.origin);
      }
      if (s.initial) ++initial;
    }
    if (initial != 1) {
      error(rule::kStateMachineInitial, sm.id,
            "expected exactly one initial state, found " + std::to_string(initial), sm.origin);
    }
    using Trigger = std::tuple<std::string, int, std::string, bool, std::string>;
    std::map<Trigger, std::string> triggers;
    for (const auto& t : sm.transitions) {
      check_pattern(t.id, sm.id + "\\.T[0-9]+", t.origin);
      claim_id(t.id, t.origin);
      for (const auto* end : {&t.source, &t.destination}) {
        if (sm.find_state(*end) == nullptr) {
          error(rule::kStateMachineUnknownState, t.id, "unknown state '" + *end + "'", t.origin);
        }
      }
      if (!t.event && !t.guard && t.actions.empty()) {
        error(rule::kStateMachineEmptyTransition, t.id,
              "transition has no event, guard or action", t.origin);
      }
      if (t.event) check_event(t, *t.event);
      Trigger key{t.source, t.event ? static_cast<int>(t.event->kind) : -1,
                  t.event ? t.event->payload : std::string{}, t.guard.has_value(),
                  t.guard.value_or("")};
      auto [it, inserted] = triggers.emplace(key, t.id);
      if (!inserted) {
        error(rule::kStateMachineNondeterministic, t.id,
              "same source, event and guard as " + it->second, t.origin);
      }
    }
  }

  const ProjectModel& model_;
  std::set<std::string> seen_;
  std::vector<Diagnostic> out_;
};

}  // namespace

std::vector<Diagnostic> validate_model(const ProjectModel& model) {
  return Validator(model).run();
}

}  // namespace hazop
