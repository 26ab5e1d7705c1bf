#pragma once

#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace hazop {

/// Location of an element or error in a source file. Lines and columns are 1-based.
struct SourceSpan {
  std::string file;
  int line = 1;
  int column = 1;
  int length = 0;

  friend bool operator==(const SourceSpan&, const SourceSpan&) = default;
};

/// Source location attached to model elements. Two origins always compare
/// equal so that element equality is structural.
struct Origin {
  SourceSpan span;

  friend bool operator==(const Origin&, const Origin&) { return true; }
};

enum class Severity { error, warning, info };

const char* to_string(Severity severity);

struct Diagnostic {
  Severity severity = Severity::error;
  std::string code;
  std::string element_id;
  std::string message;
  std::optional<SourceSpan> span;

  friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

bool has_errors(std::span<const Diagnostic> diagnostics);
std::size_t count_errors(std::span<const Diagnostic> diagnostics);

/// Stable order: element id, then rule code, then message.
void sort_diagnostics(std::vector<Diagnostic>& diagnostics);

/// `file:line:col: error[CODE] ELEMENT: message`
std::string format_diagnostic(const Diagnostic& diagnostic);

std::ostream& operator<<(std::ostream& os, const Diagnostic& diagnostic);

}  // namespace hazop
