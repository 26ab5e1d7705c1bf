#include "hazop/diagnostic.hpp"

#include <algorithm>
#include <sstream>
#include <tuple>

namespace hazop {

const char* to_string(Severity severity) {
  switch (severity) {
    case Severity::error:
      return "error";
    case Severity::warning:
      return "warning";
    case Severity::info:
      return "info";
  }
  return "error";
}

bool has_errors(std::span<const Diagnostic> diagnostics) {
  return count_errors(diagnostics) > 0;
}

std::size_t count_errors(std::span<const Diagnostic> diagnostics) {
  return static_cast<std::size_t>(std::count_if(
      diagnostics.begin(), diagnostics.end(),
      [](const Diagnostic& d) { return d.severity == Severity::error; }));
}

void sort_diagnostics(std::vector<Diagnostic>& diagnostics) {
  std::stable_sort(diagnostics.begin(), diagnostics.end(),
                   [](const Diagnostic& a, const Diagnostic& b) {
                     return std::tie(a.element_id, a.code, a.message) <
                            std::tie(b.element_id, b.code, b.message);
                   });
}

std::string format_diagnostic(const Diagnostic& diagnostic) {
  std::ostringstream out;
  if (diagnostic.span) {
    out << diagnostic.span->file << ':' << diagnostic.span->line << ':'
        << diagnostic.span->column << ": ";
  }
  out << to_string(diagnostic.severity) << '[' << diagnostic.code << ']';
  if (!diagnostic.element_id.empty()) out << ' ' << diagnostic.element_id;
  out << ": " << diagnostic.message;
  return out.str();
}

std::ostream& operator<<(std::ostream& os, const Diagnostic& diagnostic) {
  return os << format_diagnostic(diagnostic);
}

}  // namespace hazop
