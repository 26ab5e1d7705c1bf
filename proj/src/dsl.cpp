#include "hazop/dsl.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <set>
#include <sstream>

namespace hazop {

std::string format_parse_error(const ParseError& error) {
  std::ostringstream out;
  out << error.span.file << ':' << error.span.line << ':' << error.span.column
      << ": error: " << error.message;
  if (error.expected) out << " (expected " << *error.expected << ')';
  return out.str();
}

Diagnostic to_diagnostic(const ParseError& error) {
  std::string message = error.message;
  if (error.expected) message += " (expected " + *error.expected + ")";
  return Diagnostic{Severity::error, "PARSE_ERROR", "", std::move(message), error.span};
}

namespace {

bool is_ident_start(char c) {
  return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_';
}

bool is_ident_char(char c) { return is_ident_start(c) || (c >= '0' && c <= '9'); }

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; }

bool is_identifier(std::string_view text) {
  if (text.empty() || !is_ident_start(text.front())) return false;
  return std::all_of(text.begin(), text.end(), is_ident_char);
}

bool is_bare_unit(std::string_view text) {
  if (text.empty()) return false;
  return std::none_of(text.begin(), text.end(), [](char c) {
    return is_space(c) || c == ',' || c == '(' || c == ')' || c == '"' || c == ':' || c == ';' ||
           c == '#';
  });
}

std::string trim(std::string_view text) {
  auto b = text.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  auto e = text.find_last_not_of(" \t\r\n");
  return std::string(text.substr(b, e - b + 1));
}

constexpr std::string_view kTopLevel[] = {"model", "usecase", "sequence", "statemachine"};

bool is_top_level_keyword(std::string_view word) {
  return std::find(std::begin(kTopLevel), std::end(kTopLevel), word) != std::end(kTopLevel);
}

struct Failure {
  ParseError error;
};

class Scanner {
 public:
  Scanner(std::string_view text, std::string file) : text_(text), file_(std::move(file)) {}

  SourceSpan here(int length = 0) const { return SourceSpan{file_, line_, column_, length}; }

  [[noreturn]] void fail(std::string message, std::optional<std::string> expected = {}) const {
    throw Failure{ParseError{here(1), std::move(message), std::move(expected)}};
  }

  [[noreturn]] void fail_at(const SourceSpan& span, std::string message) const {
    throw Failure{ParseError{span, std::move(message), std::nullopt}};
  }

  bool at_end() const { return pos_ >= text_.size(); }
  char peek(std::size_t ahead = 0) const {
    return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0';
  }
  const char& peek_ref() const { return text_[pos_]; }

  void advance() {
    if (at_end()) return;
    if (text_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else if ((static_cast<unsigned char>(text_[pos_]) & 0xC0) != 0x80) {
      ++column_;
    }
    ++pos_;
  }

  void skip_trivia() {
    while (!at_end()) {
      char c = peek();
      if (is_space(c)) {
        advance();
      } else if (c == '#') {
        while (!at_end() && peek() != '\n') advance();
      } else {
        break;
      }
    }
  }

  bool try_char(char c) {
    skip_trivia();
    if (peek() != c) return false;
    advance();
    return true;
  }

  void expect_char(char c) {
    if (!try_char(c)) fail(std::string("unexpected ") + describe_next(), std::string("'") + c + "'");
  }

  bool try_arrow() {
    skip_trivia();
    if (peek() == '-' && peek(1) == '>') {
      advance();
      advance();
      return true;
    }
    return false;
  }

  void expect_arrow() {
    if (!try_arrow()) fail("unexpected " + describe_next(), "'->'");
  }

  std::string describe_next() {
    skip_trivia();
    if (at_end()) return "end of file";
    return std::string("'") + peek() + "'";
  }

  bool next_is_ident() {
    skip_trivia();
    return is_ident_start(peek());
  }

  std::string peek_ident() {
    skip_trivia();
    std::size_t p = pos_;
    while (p < text_.size() && is_ident_char(text_[p])) ++p;
    return std::string(text_.substr(pos_, p - pos_));
  }

  std::string ident(const char* what) {
    skip_trivia();
    if (!is_ident_start(peek())) fail("unexpected " + describe_next(), what);
    std::string out;
    while (!at_end() && is_ident_char(peek())) {
      out.push_back(peek());
      advance();
    }
    return out;
  }

  bool next_is_string() {
    skip_trivia();
    return peek() == '"';
  }

  std::string quoted(const char* what = "quoted string") {
    skip_trivia();
    if (peek() != '"') fail("unexpected " + describe_next(), what);
    SourceSpan start = here(1);
    advance();
    std::string out;
    while (true) {
      if (at_end() || peek() == '\n') fail_at(start, "unterminated string");
      char c = peek();
      advance();
      if (c == '"') break;
      if (c == '\\') {
        char e = peek();
        advance();
        switch (e) {
          case 'n':
            out.push_back('\n');
            break;
          case 't':
            out.push_back('\t');
            break;
          case '"':
          case '\\':
            out.push_back(e);
            break;
          default:
            fail_at(start, std::string("unknown escape '\\") + e + "'");
        }
      } else {
        out.push_back(c);
      }
    }
    return out;
  }

  /// Identifier or quoted string.
  std::string name(const char* what) {
    if (next_is_string()) return quoted(what);
    return ident(what);
  }

  int integer() {
    skip_trivia();
    if (!(peek() >= '0' && peek() <= '9')) fail("unexpected " + describe_next(), "integer");
    long value = 0;
    while (peek() >= '0' && peek() <= '9') {
      value = value * 10 + (peek() - '0');
      if (value > 1'000'000'000) fail("integer too large");
      advance();
    }
    return static_cast<int>(value);
  }

  /// Text up to (not including) `close`, which is consumed. No nesting.
  std::string raw_until(char close, const char* what) {
    SourceSpan start = here(1);
    std::string out;
    while (true) {
      if (at_end() || peek() == '\n') fail_at(start, std::string("unterminated ") + what);
      char c = peek();
      advance();
      if (c == close) break;
      out.push_back(c);
    }
    return out;
  }

  /// Balanced parenthesised text starting at '(' (inclusive), returned without
  /// the outer parentheses.
  std::string balanced_parens() {
    SourceSpan start = here(1);
    advance();  // '('
    int depth = 1;
    std::string out;
    while (true) {
      if (at_end() || peek() == '\n') fail_at(start, "unbalanced parentheses");
      char c = peek();
      advance();
      if (c == '(') ++depth;
      if (c == ')' && --depth == 0) break;
      if (c == '"') {
        out.push_back(c);
        while (!at_end() && peek() != '"' && peek() != '\n') {
          out.push_back(peek());
          advance();
        }
        if (peek() != '"') fail_at(start, "unterminated string");
        advance();
      }
      out.push_back(c);
    }
    return out;
  }

  /// Skips to the next top-level keyword that starts a line.
  void recover() {
    while (!at_end()) {
      while (!at_end() && peek() != '\n') advance();
      advance();
      std::size_t p = pos_;
      while (p < text_.size() && (text_[p] == ' ' || text_[p] == '\t')) ++p;
      std::size_t e = p;
      while (e < text_.size() && is_ident_char(text_[e])) ++e;
      if (is_top_level_keyword(text_.substr(p, e - p))) return;
    }
  }

 private:
  std::string_view text_;
  std::string file_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int column_ = 1;
};

template <class Element>
void assign_sub_ids(std::vector<Element>& elements, std::vector<bool>& explicit_id,
                    const std::string& prefix) {
  std::set<std::string> used;
  for (std::size_t i = 0; i < elements.size(); ++i) {
    if (explicit_id[i]) used.insert(elements[i].id);
  }
  int next = 1;
  for (std::size_t i = 0; i < elements.size(); ++i) {
    if (explicit_id[i]) continue;
    while (used.count(prefix + std::to_string(next))) ++next;
    elements[i].id = prefix + std::to_string(next++);
  }
}

class Parser {
 public:
  Parser(std::string_view text, std::string file, ProjectModel& model,
         std::vector<ParseError>& errors)
      : scan_(text, std::move(file)), model_(model), errors_(errors) {}

  void run() {
    while (true) {
      scan_.skip_trivia();
      if (scan_.at_end()) break;
      try {
        item();
      } catch (const Failure& failure) {
        errors_.push_back(failure.error);
        scan_.recover();
      }
    }
  }

 private:
  Origin origin_of(const std::string& keyword) {
    scan_.skip_trivia();
    return Origin{scan_.here(static_cast<int>(keyword.size()))};
  }

  void item() {
    Origin at = origin_of("");
    std::string keyword = scan_.ident("top-level keyword");
    at.span.length = static_cast<int>(keyword.size());
    if (keyword == "model") {
      std::string name = scan_.quoted("model name");
      scan_.expect_char(';');
      if (model_.name.empty()) model_.name = name;
    } else if (keyword == "usecase") {
      use_case(at);
    } else if (keyword == "sequence") {
      sequence(at);
    } else if (keyword == "statemachine") {
      state_machine(at);
    } else if (keyword == "extend" || keyword == "include") {
      scan_.fail_at(at.span, "extend/include relations between use cases are not supported");
    } else {
      scan_.fail_at(at.span, "unknown top-level keyword '" + keyword + "'");
    }
  }

  void use_case(Origin at) {
    UseCase uc;
    uc.origin = at;
    uc.id = scan_.ident("use case id");
    uc.name = scan_.quoted("use case name");
    scan_.expect_char('{');
    std::vector<bool> explicit_id;
    while (!scan_.try_char('}')) {
      Origin item_at = origin_of("");
      std::string keyword = scan_.ident("use case item");
      item_at.span.length = static_cast<int>(keyword.size());
      if (keyword == "actor") {
        uc.actors.push_back(scan_.name("actor name"));
      } else if (keyword == "description") {
        uc.description = scan_.quoted("description text");
      } else if (keyword == "meta") {
        MetaEntry entry;
        entry.key = scan_.name("meta key");
        scan_.expect_char('=');
        entry.value = scan_.quoted("meta value");
        uc.meta.push_back(std::move(entry));
      } else if (keyword == "pre" || keyword == "post" || keyword == "invariant") {
        Condition c;
        c.origin = item_at;
        c.kind = keyword == "pre"    ? ConditionKind::precondition
                 : keyword == "post" ? ConditionKind::postcondition
                                     : ConditionKind::invariant;
        bool has_id = scan_.next_is_ident();
        if (has_id) c.id = uc.id + "." + scan_.ident("condition id");
        c.text = scan_.quoted("condition text");
        uc.conditions.push_back(std::move(c));
        explicit_id.push_back(has_id);
      } else if (keyword == "extend" || keyword == "include") {
        scan_.fail_at(item_at.span,
                      "extend/include relations between use cases are not supported");
      } else {
        scan_.fail_at(item_at.span, "unknown use case item '" + keyword + "'");
      }
      scan_.expect_char(';');
    }
    assign_sub_ids(uc.conditions, explicit_id, uc.id + ".C");
    model_.use_cases.push_back(std::move(uc));
  }

  void sequence(Origin at) {
    SequenceDiagram sd;
    sd.origin = at;
    sd.id = scan_.ident("sequence diagram id");
    sd.name = scan_.quoted("sequence diagram name");
    if (scan_.ident("'for'") != "for") scan_.fail("expected 'for'", "'for'");
    sd.use_case_ref = scan_.ident("use case id");
    scan_.expect_char('{');
    while (!scan_.try_char('}')) {
      Origin item_at = origin_of("");
      std::string keyword = scan_.ident("sequence item");
      item_at.span.length = static_cast<int>(keyword.size());
      if (keyword == "lifeline" || keyword == "actor" || keyword == "system") {
        sd.lifelines.push_back(Lifeline{scan_.name("lifeline name"), keyword == "system", item_at});
      } else if (keyword == "msg") {
        sd.messages.push_back(message(item_at));
      } else if (keyword == "loop" || keyword == "alt" || keyword == "opt" || keyword == "par" ||
                 keyword == "break" || keyword == "critical" || keyword == "fragment") {
        scan_.fail_at(item_at.span,
                      "combined fragments are not supported; model each alternative as a "
                      "separate sequence diagram");
      } else {
        scan_.fail_at(item_at.span, "unknown sequence item '" + keyword + "'");
      }
      scan_.expect_char(';');
    }
    model_.sequence_diagrams.push_back(std::move(sd));
  }

  Message message(Origin at) {
    Message m;
    m.origin = at;
    m.seq_index = scan_.integer();
    m.sender = scan_.name("sender lifeline");
    scan_.expect_arrow();
    m.receiver = scan_.name("receiver lifeline");
    scan_.expect_char(':');
    m.name = scan_.name("message name");
    if (scan_.try_char('(')) {
      if (!scan_.try_char(')')) {
        do {
          MessageArgument arg;
          arg.name = scan_.name("argument name");
          if (scan_.try_char(':')) arg.unit = unit();
          m.arguments.push_back(std::move(arg));
        } while (scan_.try_char(','));
        scan_.expect_char(')');
      }
    }
    if (scan_.try_char('[')) m.guard = guard_text();
    while (scan_.next_is_ident()) {
      std::string keyword = scan_.ident("message option");
      if (keyword == "timing") {
        m.timing = scan_.quoted("timing constraint");
      } else if (keyword == "kind") {
        std::string kind = scan_.ident("message kind");
        auto parsed = parse_message_kind(kind);
        if (!parsed) scan_.fail("unknown message kind '" + kind + "'", "indirect, cognitive or physical");
        m.kind = parsed;
      } else {
        scan_.fail("unknown message option '" + keyword + "'", "'timing' or 'kind'");
      }
    }
    return m;
  }

  std::string unit() {
    if (scan_.next_is_string()) return scan_.quoted("unit");
    scan_.skip_trivia();
    std::string out;
    while (!scan_.at_end() && is_bare_unit(std::string_view(&scan_.peek_ref(), 1))) {
      out.push_back(scan_.peek());
      scan_.advance();
    }
    if (out.empty()) scan_.fail("unexpected " + scan_.describe_next(), "unit");
    return out;
  }

  /// Called after '['. Either `"quoted" ]` or raw text up to ']'.
  std::string guard_text() {
    // Only blanks may precede a quoted guard: '#' inside a raw guard is text,
    // not a comment.
    while (!scan_.at_end() && (scan_.peek() == ' ' || scan_.peek() == '\t')) scan_.advance();
    if (!scan_.at_end() && scan_.peek() == '"') {
      std::string text = scan_.quoted("guard");
      scan_.expect_char(']');
      return text;
    }
    return trim(scan_.raw_until(']', "guard"));
  }

  void state_machine(Origin at) {
    StateMachine sm;
    sm.origin = at;
    sm.id = scan_.ident("state machine id");
    if (scan_.ident("'for'") != "for") scan_.fail("expected 'for'", "'for'");
    sm.object = scan_.name("object name");
    scan_.expect_char('{');
    std::vector<bool> explicit_id;
    while (!scan_.try_char('}')) {
      Origin item_at = origin_of("");
      std::string keyword = scan_.ident("state machine item");
      item_at.span.length = static_cast<int>(keyword.size());
      if (keyword == "state" || keyword == "initial") {
        std::string name = scan_.name("state name");
        scan_.skip_trivia();
        if (scan_.peek() == '/') {
          scan_.fail("actions on states are not supported; put actions on transitions");
        }
        if (scan_.peek() == '{') scan_.fail("hierarchical states are not supported");
        sm.states.push_back(State{std::move(name), keyword == "initial", item_at});
      } else if (keyword == "transition") {
        Transition t;
        t.origin = item_at;
        std::string first = scan_.name("state name");
        bool has_id = false;
        if (scan_.try_arrow()) {
          t.source = std::move(first);
        } else {
          t.id = sm.id + "." + first;
          has_id = true;
          t.source = scan_.name("source state");
          scan_.expect_arrow();
        }
        t.destination = scan_.name("destination state");
        scan_.expect_char(':');
        transition_label(t);
        sm.transitions.push_back(std::move(t));
        explicit_id.push_back(has_id);
      } else if (keyword == "entry" || keyword == "exit" || keyword == "do") {
        scan_.fail_at(item_at.span,
                      "actions on states are not supported; put actions on transitions");
      } else {
        scan_.fail_at(item_at.span, "unknown state machine item '" + keyword + "'");
      }
      scan_.expect_char(';');
    }
    assign_sub_ids(sm.transitions, explicit_id, sm.id + ".T");
    model_.state_machines.push_back(std::move(sm));
  }

  /// `event [guard] / a1(), a2()` with every part optional but not all absent.
  void transition_label(Transition& t) {
    SourceSpan label_at = (scan_.skip_trivia(), scan_.here(1));
    if (scan_.next_is_ident()) {
      std::string word = scan_.ident("event");
      scan_.skip_trivia();
      if (scan_.peek() == '(') {
        std::string inner = scan_.balanced_parens();
        if (word == "after") {
          t.event = Event{EventKind::temporal_after, trim(inner)};
        } else if (word == "when") {
          t.event = Event{EventKind::temporal_when, trim(inner)};
        } else if (word == "change") {
          t.event = Event{EventKind::change, trim(inner)};
        } else {
          t.event = Event{EventKind::call, word + "(" + inner + ")"};
        }
      } else {
        t.event = Event{EventKind::signal, word};
      }
    }
    if (scan_.try_char('[')) t.guard = guard_text();
    if (scan_.try_char('/')) {
      do {
        std::string action = scan_.ident("action name");
        scan_.skip_trivia();
        if (scan_.peek() == '(') {
          std::string inner = scan_.balanced_parens();
          if (!trim(inner).empty()) action += "(" + inner + ")";
        }
        t.actions.push_back(std::move(action));
      } while (scan_.try_char(','));
    }
    if (!t.event && !t.guard && t.actions.empty()) {
      scan_.fail_at(label_at, "empty transition label");
    }
  }

  Scanner scan_;
  ProjectModel& model_;
  std::vector<ParseError>& errors_;
};

// --- serialization -------------------------------------------------------------

std::string quote(std::string_view text) {
  std::string out = "\"";
  for (char c : text) {
    switch (c) {
      case '"':
        out += "\\\"";
        break;
      case '\\':
        out += "\\\\";
        break;
      case '\n':
        out += "\\n";
        break;
      case '\t':
        out += "\\t";
        break;
      default:
        out.push_back(c);
    }
  }
  out.push_back('"');
  return out;
}

std::string name_token(std::string_view text) {
  return is_identifier(text) ? std::string(text) : quote(text);
}

std::string unit_token(std::string_view text) {
  return is_bare_unit(text) ? std::string(text) : quote(text);
}

bool raw_guard_ok(std::string_view text) {
  if (text.empty() || trim(text) != text) return false;
  return std::none_of(text.begin(), text.end(), [](char c) {
    return c == ']' || c == '"' || c == '\n' || c == '\r' || c == '\t';
  });
}

std::string guard_token(std::string_view text) {
  return "[" + (raw_guard_ok(text) ? std::string(text) : quote(text)) + "]";
}

std::string suffix_after_dot(const std::string& id) {
  auto dot = id.rfind('.');
  return dot == std::string::npos ? id : id.substr(dot + 1);
}

std::string event_token(const Event& e) {
  switch (e.kind) {
    case EventKind::signal:
    case EventKind::call:
      return e.payload;
    case EventKind::change:
      return "change(" + e.payload + ")";
    case EventKind::temporal_after:
      return "after(" + e.payload + ")";
    case EventKind::temporal_when:
      return "when(" + e.payload + ")";
  }
  return e.payload;
}

}  // namespace

std::string format_transition_label(const Transition& t) {
  std::string out;
  auto sep = [&out] {
    if (!out.empty()) out.push_back(' ');
  };
  if (t.event) out += event_token(*t.event);
  if (t.guard) {
    sep();
    out += guard_token(*t.guard);
  }
  if (!t.actions.empty()) {
    sep();
    out += "/ ";
    for (std::size_t i = 0; i < t.actions.size(); ++i) {
      if (i) out += ", ";
      const std::string& a = t.actions[i];
      out += a.find('(') == std::string::npos ? a + "()" : a;
    }
  }
  return out;
}

ParseResult parse_model(std::vector<SourceFile> sources) {
  std::sort(sources.begin(), sources.end(),
            [](const SourceFile& a, const SourceFile& b) { return a.path < b.path; });
  ProjectModel model;
  std::vector<ParseError> errors;
  for (const auto& source : sources) {
    Parser(source.text, source.path, model, errors).run();
  }
  ParseResult result;
  if (errors.empty()) {
    result.model = std::move(model);
  } else {
    result.errors = std::move(errors);
  }
  return result;
}

ParseResult parse_model_text(std::string_view text, std::string path) {
  return parse_model({SourceFile{std::move(path), std::string(text)}});
}

std::string serialize_model(const ProjectModel& model) {
  std::ostringstream out;
  out << "# hazop-uml model\n";
  if (!model.name.empty()) out << "model " << quote(model.name) << ";\n";

  for (const auto& uc : model.use_cases) {
    out << "\nusecase " << uc.id << ' ' << quote(uc.name) << " {\n";
    for (const auto& actor : uc.actors) out << "  actor " << name_token(actor) << ";\n";
    if (uc.description) out << "  description " << quote(*uc.description) << ";\n";
    for (const auto& m : uc.meta) {
      out << "  meta " << name_token(m.key) << " = " << quote(m.value) << ";\n";
    }
    for (const auto& c : uc.conditions) {
      const char* keyword = c.kind == ConditionKind::precondition    ? "pre"
                            : c.kind == ConditionKind::postcondition ? "post"
                                                                     : "invariant";
      out << "  " << keyword << ' ' << suffix_after_dot(c.id) << ' ' << quote(c.text) << ";\n";
    }
    out << "}\n";
  }

  for (const auto& sd : model.sequence_diagrams) {
    out << "\nsequence " << sd.id << ' ' << quote(sd.name) << " for " << sd.use_case_ref
        << " {\n";
    for (const auto& l : sd.lifelines) {
      out << "  " << (l.is_system ? "system " : "lifeline ") << name_token(l.name) << ";\n";
    }
    for (const auto& m : sd.messages) {
      out << "  msg " << m.seq_index << ' ' << name_token(m.sender) << " -> "
          << name_token(m.receiver) << " : " << name_token(m.name);
      if (!m.arguments.empty()) {
        out << '(';
        for (std::size_t i = 0; i < m.arguments.size(); ++i) {
          if (i) out << ", ";
          out << name_token(m.arguments[i].name);
          if (!m.arguments[i].unit.empty()) out << ": " << unit_token(m.arguments[i].unit);
        }
        out << ')';
      }
      if (m.guard) out << ' ' << guard_token(*m.guard);
      if (m.timing) out << " timing " << quote(*m.timing);
      if (m.kind) out << " kind " << to_string(*m.kind);
      out << ";\n";
    }
    out << "}\n";
  }

  for (const auto& sm : model.state_machines) {
    out << "\nstatemachine " << sm.id << " for " << name_token(sm.object) << " {\n";
    for (const auto& s : sm.states) {
      out << "  " << (s.initial ? "initial " : "state ") << name_token(s.name) << ";\n";
    }
    for (const auto& t : sm.transitions) {
      out << "  transition " << suffix_after_dot(t.id) << ' ' << name_token(t.source) << " -> "
          << name_token(t.destination) << " : " << format_transition_label(t) << ";\n";
    }
    out << "}\n";
  }
  return out.str();
}

std::string model_fingerprint(const ProjectModel& model) {
  std::uint64_t hash = 14695981039346656037ull;
  for (unsigned char c : serialize_model(model)) {
    hash ^= c;
    hash *= 1099511628211ull;
  }
  char buffer[17];
  std::snprintf(buffer, sizeof buffer, "%016llx", static_cast<unsigned long long>(hash));
  return buffer;
}

}  // namespace hazop
