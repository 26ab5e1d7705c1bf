#include <algorithm>
#include <stdexcept>

#include "hazop/dsl.hpp"
#include "test_support.hpp"

namespace hazop::testing {

namespace {

int uniform(std::mt19937& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

bool chance(std::mt19937& rng, double p) { return std::bernoulli_distribution(p)(rng); }

template <class T>
const T& pick(std::mt19937& rng, const std::vector<T>& items) {
  return items[static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(items.size()) - 1))];
}

const std::vector<std::string> kWords = {
    "robot",  "patient", "handle", "force",  "speed",    "brake", "sensor",
    "arm",    "stops",   "moves",  "is",     "holding",  "seated", "standing",
    "alarm",  "battery", "low",    "within", "threshold", "the",  "and"};

const std::vector<std::string> kExotic = {
    "\"quoted\"", "back\\slash", "[bracket]", "a]b",   "x > 3 && y < 2", "line\nbreak",
    "tab\there",  "caf\xC3\xA9",  "\xC2\xB5m",  "\xE2\x86\x92", "\xE6\x97\xA5\xE6\x9C\xAC",
    "#hash",      "semi;colon",   "{brace}",  "a,b",   "50 %",           "(paren)"};

std::string words(std::mt19937& rng, int lo, int hi, bool exotic) {
  std::string out;
  const int n = uniform(rng, lo, hi);
  for (int i = 0; i < n; ++i) {
    if (!out.empty()) out.push_back(' ');
    out += exotic && chance(rng, 0.2) ? pick(rng, kExotic) : pick(rng, kWords);
  }
  return out;
}

std::string identifier(std::mt19937& rng, const std::string& stem) {
  return stem + std::to_string(uniform(rng, 0, 999));
}

/// Identifier or arbitrary non-empty text (written quoted).
std::string name(std::mt19937& rng, const std::string& stem, bool exotic) {
  if (exotic && chance(rng, 0.25)) return stem + " " + words(rng, 1, 2, true);
  return identifier(rng, stem);
}

std::string two_digits(int n) { return (n < 10 ? "0" : "") + std::to_string(n); }

int suffix_number(const std::string& id) {
  const auto dot = id.rfind('.');
  return std::stoi(id.substr(dot + 2));
}

struct Counter {
  int next = 1;
  int operator()() { return next++; }
};

Condition make_condition(std::mt19937& rng, const std::string& uc_id, int number, bool exotic) {
  Condition c;
  c.id = uc_id + ".C" + std::to_string(number);
  c.kind = static_cast<ConditionKind>(uniform(rng, 0, 2));
  c.text = "The " + words(rng, 1, 6, exotic);
  return c;
}

UseCase make_use_case(std::mt19937& rng, int number, const GenParams& p) {
  UseCase uc;
  uc.id = "UC" + two_digits(number);
  uc.name = words(rng, 1, 4, p.exotic_text);
  for (int i = uniform(rng, 0, 2); i > 0; --i) uc.actors.push_back(name(rng, "Actor", p.exotic_text));
  if (chance(rng, 0.5)) uc.description = words(rng, 0, 8, p.exotic_text);
  if (chance(rng, 0.3)) {
    uc.meta.push_back(MetaEntry{"scenario", words(rng, 1, 6, p.exotic_text)});
  }
  const int conditions = uniform(rng, 0, p.max_conditions);
  for (int i = 1; i <= conditions; ++i) uc.conditions.push_back(make_condition(rng, uc.id, i, p.exotic_text));
  return uc;
}

std::string guard_text(std::mt19937& rng, Counter& unique, bool exotic) {
  return words(rng, 1, 4, exotic) + " #" + std::to_string(unique());
}

Message make_message(std::mt19937& rng, const SequenceDiagram& sd, int seq, Counter& unique,
                     bool exotic) {
  Message m;
  m.seq_index = seq;
  const int a = uniform(rng, 0, static_cast<int>(sd.lifelines.size()) - 1);
  int b = uniform(rng, 0, static_cast<int>(sd.lifelines.size()) - 2);
  if (b >= a) ++b;
  m.sender = sd.lifelines[static_cast<std::size_t>(a)].name;
  m.receiver = sd.lifelines[static_cast<std::size_t>(b)].name;
  m.name = name(rng, "msg", exotic);
  for (int i = uniform(rng, 0, 2); i > 0; --i) {
    MessageArgument arg{identifier(rng, "arg"), ""};
    const int unit = uniform(rng, 0, 3);
    if (unit == 1) arg.unit = "N";
    if (unit == 2) arg.unit = "m/s\xC2\xB2";
    if (unit == 3) arg.unit = "N m";
    m.arguments.push_back(std::move(arg));
  }
  if (chance(rng, 0.4)) m.guard = guard_text(rng, unique, exotic);
  if (chance(rng, 0.3)) m.timing = std::to_string(uniform(rng, 1, 500)) + " ms";
  if (chance(rng, 0.3)) m.kind = static_cast<MessageKind>(uniform(rng, 0, 2));
  return m;
}

SequenceDiagram make_sequence(std::mt19937& rng, int number, const std::string& use_case,
                              Counter& unique, const GenParams& p) {
  SequenceDiagram sd;
  sd.id = "SD" + two_digits(number);
  sd.name = words(rng, 1, 4, p.exotic_text);
  sd.use_case_ref = use_case;
  const int lifelines = uniform(rng, 2, std::max(2, p.max_lifelines));
  const int system = uniform(rng, 0, lifelines - 1);
  for (int i = 0; i < lifelines; ++i) {
    sd.lifelines.push_back(
        Lifeline{name(rng, "L" + std::to_string(i) + "_", p.exotic_text), i == system, {}});
  }
  int seq = 0;
  for (int i = uniform(rng, 0, p.max_messages); i > 0; --i) {
    seq += uniform(rng, 1, 2);
    sd.messages.push_back(make_message(rng, sd, seq, unique, p.exotic_text));
  }
  return sd;
}

Transition make_transition(std::mt19937& rng, const StateMachine& sm, int number, Counter& unique,
                           bool exotic) {
  Transition t;
  t.id = sm.id + ".T" + std::to_string(number);
  t.source = pick(rng, sm.states).name;
  t.destination = pick(rng, sm.states).name;
  const int k = unique();
  switch (uniform(rng, 0, 5)) {
    case 0:
      t.event = Event{EventKind::signal, "ev" + std::to_string(k)};
      break;
    case 1:
      t.event = Event{EventKind::call, "set" + std::to_string(k) + "(x, y)"};
      break;
    case 2:
      t.event = Event{EventKind::change, "speed > " + std::to_string(k)};
      break;
    case 3:
      t.event = Event{EventKind::temporal_after, std::to_string(k) + " s"};
      break;
    case 4:
      t.event = Event{EventKind::temporal_when, "t = " + std::to_string(k)};
      break;
    default:
      break;  // completion transition, made unique by its guard
  }
  if (!t.event || chance(rng, 0.4)) t.guard = guard_text(rng, unique, exotic);
  for (int i = uniform(rng, 0, 2); i > 0; --i) {
    t.actions.push_back(chance(rng, 0.5) ? identifier(rng, "act")
                                          : identifier(rng, "act") + "(" + identifier(rng, "p") + ")");
  }
  return t;
}

StateMachine make_machine(std::mt19937& rng, int number, Counter& unique, const GenParams& p) {
  StateMachine sm;
  sm.id = "SM" + two_digits(number);
  sm.object = name(rng, "Object", p.exotic_text);
  const int states = uniform(rng, 1, std::max(1, p.max_states));
  const int initial = uniform(rng, 0, states - 1);
  for (int i = 0; i < states; ++i) {
    sm.states.push_back(State{name(rng, "S" + std::to_string(i) + "_", p.exotic_text), i == initial, {}});
  }
  for (int i = 1, n = uniform(rng, 0, p.max_transitions); i <= n; ++i) {
    sm.transitions.push_back(make_transition(rng, sm, i, unique, p.exotic_text));
  }
  return sm;
}

int max_number(const std::vector<std::string>& ids) {
  int best = 0;
  for (const auto& id : ids) best = std::max(best, suffix_number(id));
  return best;
}

void require_valid(const ProjectModel& model, const char* what) {
  auto diagnostics = validate_model(model);
  if (has_errors(diagnostics)) {
    std::string message = std::string(what) + " produced an invalid model:";
    for (const auto& d : diagnostics) message += "\n" + format_diagnostic(d);
    throw std::logic_error(message);
  }
}

/// Counter past every number already embedded in guard texts and payloads.
Counter fresh_counter(const ProjectModel& model) {
  const std::string text = serialize_model(model);
  long best = 0, current = 0;
  int digits = 0;
  for (char c : text) {
    if (c >= '0' && c <= '9' && digits < 9) {
      current = current * 10 + (c - '0');
      ++digits;
    } else {
      best = std::max(best, current);
      current = 0;
      digits = 0;
    }
  }
  return Counter{static_cast<int>(std::max(best, current)) + 1};
}

}  // namespace

ProjectModel random_model(std::mt19937& rng, const GenParams& p) {
  ProjectModel model;
  Counter unique;
  if (chance(rng, 0.8)) model.name = words(rng, 1, 3, p.exotic_text);
  for (int i = 1, n = uniform(rng, 0, p.max_use_cases); i <= n; ++i) {
    model.use_cases.push_back(make_use_case(rng, i, p));
  }
  if (!model.use_cases.empty()) {
    for (int i = 1, n = uniform(rng, 0, p.max_sequences); i <= n; ++i) {
      model.sequence_diagrams.push_back(make_sequence(rng, i, pick(rng, model.use_cases).id, unique, p));
    }
  }
  for (int i = 1, n = uniform(rng, 0, p.max_machines); i <= n; ++i) {
    model.state_machines.push_back(make_machine(rng, i, unique, p));
  }
  require_valid(model, "random_model");
  return model;
}

ProjectModel edit_model(const ProjectModel& original, std::mt19937& rng) {
  ProjectModel model = original;
  Counter unique = fresh_counter(model);
  const bool exotic = true;
  for (int edits = uniform(rng, 1, 4); edits > 0; --edits) {
    switch (uniform(rng, 0, 13)) {
      case 0: {  // add a condition
        if (model.use_cases.empty()) break;
        UseCase& uc = model.use_cases[static_cast<std::size_t>(
            uniform(rng, 0, static_cast<int>(model.use_cases.size()) - 1))];
        std::vector<std::string> ids;
        for (const auto& c : uc.conditions) ids.push_back(c.id);
        uc.conditions.push_back(make_condition(rng, uc.id, max_number(ids) + 1, exotic));
        break;
      }
      case 1:  // remove a condition
      case 2: {  // change a condition's kind (new key)
        std::vector<std::pair<std::size_t, std::size_t>> slots;
        for (std::size_t u = 0; u < model.use_cases.size(); ++u) {
          for (std::size_t c = 0; c < model.use_cases[u].conditions.size(); ++c) slots.emplace_back(u, c);
        }
        if (slots.empty()) break;
        auto [u, c] = pick(rng, slots);
        auto& conditions = model.use_cases[u].conditions;
        if (chance(rng, 0.5)) {
          conditions.erase(conditions.begin() + static_cast<std::ptrdiff_t>(c));
        } else {
          conditions[c].kind = static_cast<ConditionKind>((static_cast<int>(conditions[c].kind) + 1) % 3);
        }
        break;
      }
      case 3: {  // reword a condition (same key)
        for (auto& uc : model.use_cases) {
          if (!uc.conditions.empty()) {
            uc.conditions.front().text = "Reworded " + words(rng, 1, 4, exotic);
            break;
          }
        }
        break;
      }
      case 4: {  // add a message
        if (model.sequence_diagrams.empty()) break;
        SequenceDiagram& sd = model.sequence_diagrams[static_cast<std::size_t>(
            uniform(rng, 0, static_cast<int>(model.sequence_diagrams.size()) - 1))];
        const int seq = sd.messages.empty() ? 1 : sd.messages.back().seq_index + 1;
        sd.messages.push_back(make_message(rng, sd, seq, unique, exotic));
        break;
      }
      case 5:    // remove a message
      case 6:    // toggle a guard
      case 7: {  // toggle timing
        std::vector<std::pair<std::size_t, std::size_t>> slots;
        for (std::size_t s = 0; s < model.sequence_diagrams.size(); ++s) {
          for (std::size_t m = 0; m < model.sequence_diagrams[s].messages.size(); ++m) slots.emplace_back(s, m);
        }
        if (slots.empty()) break;
        auto [s, m] = pick(rng, slots);
        auto& messages = model.sequence_diagrams[s].messages;
        Message& msg = messages[m];
        const int op = uniform(rng, 0, 2);
        if (op == 0) {
          messages.erase(messages.begin() + static_cast<std::ptrdiff_t>(m));
        } else if (op == 1) {
          if (msg.guard) msg.guard.reset(); else msg.guard = guard_text(rng, unique, exotic);
        } else {
          if (msg.timing) msg.timing.reset(); else msg.timing = "3 s";
        }
        break;
      }
      case 8: {  // add a lifeline
        if (model.sequence_diagrams.empty()) break;
        SequenceDiagram& sd = model.sequence_diagrams.front();
        sd.lifelines.push_back(Lifeline{"Extra" + std::to_string(unique()), false, {}});
        break;
      }
      case 9: {  // add a transition
        if (model.state_machines.empty()) break;
        StateMachine& sm = model.state_machines[static_cast<std::size_t>(
            uniform(rng, 0, static_cast<int>(model.state_machines.size()) - 1))];
        std::vector<std::string> ids;
        for (const auto& t : sm.transitions) ids.push_back(t.id);
        sm.transitions.push_back(make_transition(rng, sm, max_number(ids) + 1, unique, exotic));
        break;
      }
      case 10: {  // remove a transition or toggle an event-carrying transition's guard
        std::vector<std::pair<std::size_t, std::size_t>> slots;
        for (std::size_t s = 0; s < model.state_machines.size(); ++s) {
          for (std::size_t t = 0; t < model.state_machines[s].transitions.size(); ++t) slots.emplace_back(s, t);
        }
        if (slots.empty()) break;
        auto [s, t] = pick(rng, slots);
        auto& transitions = model.state_machines[s].transitions;
        Transition& tr = transitions[t];
        if (chance(rng, 0.5) || !tr.event) {
          transitions.erase(transitions.begin() + static_cast<std::ptrdiff_t>(t));
        } else if (tr.guard) {
          tr.guard.reset();
        } else {
          tr.guard = guard_text(rng, unique, exotic);
        }
        break;
      }
      case 11: {  // remove a use case with its sequence diagrams
        if (model.use_cases.empty()) break;
        const std::size_t u = static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(model.use_cases.size()) - 1));
        const std::string id = model.use_cases[u].id;
        model.use_cases.erase(model.use_cases.begin() + static_cast<std::ptrdiff_t>(u));
        std::erase_if(model.sequence_diagrams, [&](const auto& sd) { return sd.use_case_ref == id; });
        break;
      }
      case 12: {  // add a use case
        int next = 1;
        for (const auto& uc : model.use_cases) next = std::max(next, std::stoi(uc.id.substr(2)) + 1);
        GenParams p;
        model.use_cases.push_back(make_use_case(rng, next, p));
        break;
      }
      default: {  // add a sequence diagram
        if (model.use_cases.empty()) break;
        int next = 1;
        for (const auto& sd : model.sequence_diagrams) next = std::max(next, std::stoi(sd.id.substr(2)) + 1);
        GenParams p;
        model.sequence_diagrams.push_back(make_sequence(rng, next, pick(rng, model.use_cases).id, unique, p));
        break;
      }
    }
  }
  require_valid(model, "edit_model");
  return model;
}

AnalysisStore fill_rows(AnalysisStore store, std::mt19937& rng) {
  for (std::size_t i = 0; i < store.rows.size(); ++i) {
    DeviationRowRecord& row = store.rows[i];
    if (row.status == RowStatus::orphaned || !chance(rng, 0.35)) continue;
    if (chance(rng, 0.1)) {
      row.status = RowStatus::not_applicable;
      row.remarks = "Not meaningful here: " + words(rng, 1, 3, true);
      continue;
    }
    row.deviation = "Deviation " + words(rng, 1, 5, true);
    row.use_case_effect = words(rng, 0, 4, true);
    row.real_world_effect = words(rng, 1, 4, true);
    if (chance(rng, 0.7)) row.severity = pick(rng, store.severity_scale);
    row.possible_causes = words(rng, 0, 4, true);
    row.remarks = chance(rng, 0.3) ? words(rng, 1, 3, true) : "";
    row.status = RowStatus::interpreted;
    const RowAnchor anchor = row.anchor();
    if (chance(rng, 0.5)) {
      std::string hazard = store.hazards.empty() || chance(rng, 0.4)
                               ? add_hazard(store, "Hazard " + words(rng, 1, 4, true))
                               : pick(rng, store.hazards).id;
      store.rows[i].hazards.push_back(hazard);
      if (chance(rng, 0.5)) {
        std::string rec = add_recommendation(store, "Recommendation " + words(rng, 1, 4, true),
                                             {hazard}, {anchor});
        store.rows[i].recommendations.push_back(rec);
      }
    }
  }
  return store;
}

}  // namespace hazop::testing
