#pragma once

// Text format (.hzm) for project models. The grammar is documented in
// docs/grammar.md.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hazop/diagnostic.hpp"
#include "hazop/model.hpp"

namespace hazop {

struct SourceFile {
  std::string path;
  std::string text;
};

struct ParseError {
  SourceSpan span;
  std::string message;
  std::optional<std::string> expected;

  friend bool operator==(const ParseError&, const ParseError&) = default;
};

std::string format_parse_error(const ParseError& error);
Diagnostic to_diagnostic(const ParseError& error);

struct ParseResult {
  std::optional<ProjectModel> model;
  std::vector<ParseError> errors;

  bool ok() const { return model.has_value(); }
};

/// Parses and merges the given files in lexicographic path order. On any
/// syntax error no model is returned; every error found (one per damaged
/// top-level block) is reported.
ParseResult parse_model(std::vector<SourceFile> sources);

ParseResult parse_model_text(std::string_view text, std::string path = "<input>");

/// Canonical text form. parse_model_text(serialize_model(m)) is structurally
/// equal to m for every well-formed m, and serialization of the result is
/// byte-identical.
std::string serialize_model(const ProjectModel& model);

/// Transition label as written in the DSL, `event [guard] / a1(), a2()`.
std::string format_transition_label(const Transition& transition);

/// FNV-1a 64-bit hash of the canonical serialization, as 16 hex digits.
std::string model_fingerprint(const ProjectModel& model);

}  // namespace hazop
