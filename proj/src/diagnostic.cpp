#include "dtf/diagnostic.hpp"

#include <algorithm>
#include <sstream>

namespace dtf {

Diagnostic error_at(Span span, std::string message) {
  return Diagnostic{Severity::Error, span, std::move(message), {}};
}

std::string format_diagnostic(const Diagnostic& d, std::string_view file) {
  std::ostringstream out;
  out << (d.file.empty() ? file : std::string_view(d.file)) << ':' << d.span.line << ':'
      << d.span.column << ": " << (d.severity == Severity::Error ? "error" : "warning")
      << ": " << d.message;
  return out.str();
}

bool has_errors(const std::vector<Diagnostic>& diags) {
  return std::any_of(diags.begin(), diags.end(),
                     [](const Diagnostic& d) { return d.severity == Severity::Error; });
}

}  // namespace dtf
