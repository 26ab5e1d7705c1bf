#pragma once

// Restricted UML project model: use cases with their conditions, system
// sequence diagrams and flat state machines.

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "hazop/diagnostic.hpp"

namespace hazop {

enum class ConditionKind { precondition, postcondition, invariant };

const char* to_string(ConditionKind kind);
std::optional<ConditionKind> parse_condition_kind(std::string_view text);

struct Condition {
  std::string id;  // UCnn.Ck
  ConditionKind kind = ConditionKind::precondition;
  std::string text;
  Origin origin;

  friend bool operator==(const Condition&, const Condition&) = default;
};

struct MetaEntry {
  std::string key;
  std::string value;

  friend bool operator==(const MetaEntry&, const MetaEntry&) = default;
};

struct UseCase {
  std::string id;  // UCnn
  std::string name;
  std::vector<std::string> actors;
  std::vector<Condition> conditions;
  std::optional<std::string> description;
  std::vector<MetaEntry> meta;
  Origin origin;

  friend bool operator==(const UseCase&, const UseCase&) = default;
};

struct Lifeline {
  std::string name;
  bool is_system = false;
  Origin origin;

  friend bool operator==(const Lifeline&, const Lifeline&) = default;
};

struct MessageArgument {
  std::string name;
  std::string unit;  // empty when unspecified

  friend bool operator==(const MessageArgument&, const MessageArgument&) = default;
};

enum class MessageKind { indirect, cognitive, physical };

const char* to_string(MessageKind kind);
std::optional<MessageKind> parse_message_kind(std::string_view text);

struct Message {
  int seq_index = 1;
  std::string sender;
  std::string receiver;
  std::string name;
  std::vector<MessageArgument> arguments;
  std::optional<std::string> guard;
  std::optional<std::string> timing;
  std::optional<MessageKind> kind;
  Origin origin;

  friend bool operator==(const Message&, const Message&) = default;
};

struct SequenceDiagram {
  std::string id;  // SDnn
  std::string name;
  std::string use_case_ref;
  std::vector<Lifeline> lifelines;
  std::vector<Message> messages;
  Origin origin;

  /// SDnn.Mk, where k is the message sequence number.
  std::string message_id(const Message& message) const;
  const Lifeline* find_lifeline(std::string_view name) const;

  friend bool operator==(const SequenceDiagram&, const SequenceDiagram&) = default;
};

enum class EventKind { signal, call, change, temporal_after, temporal_when };

const char* to_string(EventKind kind);
std::optional<EventKind> parse_event_kind(std::string_view text);

struct Event {
  EventKind kind = EventKind::signal;
  std::string payload;

  friend bool operator==(const Event&, const Event&) = default;
};

struct Transition {
  std::string id;  // SMnn.Tk
  std::string source;
  std::string destination;
  std::optional<Event> event;
  std::optional<std::string> guard;
  std::vector<std::string> actions;
  Origin origin;

  friend bool operator==(const Transition&, const Transition&) = default;
};

struct State {
  std::string name;
  bool initial = false;
  Origin origin;

  friend bool operator==(const State&, const State&) = default;
};

struct StateMachine {
  std::string id;  // SMnn
  std::string object;
  std::vector<State> states;
  std::vector<Transition> transitions;
  Origin origin;

  const State* find_state(std::string_view name) const;

  friend bool operator==(const StateMachine&, const StateMachine&) = default;
};

struct ProjectModel {
  std::string name;
  std::vector<UseCase> use_cases;
  std::vector<SequenceDiagram> sequence_diagrams;
  std::vector<StateMachine> state_machines;

  const UseCase* find_use_case(std::string_view id) const;
  const SequenceDiagram* find_sequence(std::string_view id) const;
  const StateMachine* find_state_machine(std::string_view id) const;

  friend bool operator==(const ProjectModel&, const ProjectModel&) = default;
};

// --- element references ------------------------------------------------------

struct ConditionRef {
  const UseCase* use_case;
  const Condition* condition;
};

struct MessageRef {
  const SequenceDiagram* diagram;
  const Message* message;
};

struct TransitionRef {
  const StateMachine* machine;
  const Transition* transition;
};

using ElementRef = std::variant<const UseCase*, ConditionRef, const SequenceDiagram*,
                                MessageRef, const StateMachine*, TransitionRef>;

/// Resolves UCnn, UCnn.Ck, SDnn, SDnn.Mk, SMnn and SMnn.Tk. Returns nullopt
/// for unknown or malformed ids.
std::optional<ElementRef> element_lookup(const ProjectModel& model, std::string_view id);

/// Id of the element a reference points at.
std::string element_id(const ElementRef& ref);

// --- validation ----------------------------------------------------------------

namespace rule {
inline constexpr const char* kDuplicateId = "DUPLICATE_ID";
inline constexpr const char* kBadId = "BAD_ID";
inline constexpr const char* kUseCaseNoConditions = "UC_NO_CONDITIONS";
inline constexpr const char* kConditionEmpty = "UC_EMPTY_CONDITION";
inline constexpr const char* kSequenceUnknownUseCase = "SD_UNKNOWN_USE_CASE";
inline constexpr const char* kSequenceMultipleSystem = "SD_MULTIPLE_SYSTEM";
inline constexpr const char* kSequenceNoSystem = "SD_NO_SYSTEM";
inline constexpr const char* kSequenceOrder = "SD_SEQUENCE_ORDER";
inline constexpr const char* kSequenceUnknownLifeline = "SD_UNKNOWN_LIFELINE";
inline constexpr const char* kSequenceDuplicateLifeline = "SD_DUPLICATE_LIFELINE";
inline constexpr const char* kSequenceEmptyGuard = "SD_EMPTY_GUARD";
inline constexpr const char* kStateMachineUnknownState = "SM_UNKNOWN_STATE";
inline constexpr const char* kStateMachineDuplicateState = "SM_DUPLICATE_STATE";
inline constexpr const char* kStateMachineInitial = "SM_INITIAL_STATE";
inline constexpr const char* kStateMachineNondeterministic = "SM_NONDETERMINISTIC";
inline constexpr const char* kStateMachineEmptyTransition = "SM_EMPTY_TRANSITION";
inline constexpr const char* kStateMachineBadEvent = "SM_BAD_EVENT";
}  // namespace rule

/// All violations of the restricted-UML modeling rules, sorted by element id
/// then rule code. Empty iff the model is well-formed (warnings included).
std::vector<Diagnostic> validate_model(const ProjectModel& model);

bool is_duration_literal(std::string_view text);

}  // namespace hazop
