#include "dtf/stats.hpp"

#include <sstream>

namespace dtf {

ProblemStats compute_stats(const Problem& p) {
  ProblemStats s;
  auto formula = [&](const Term& t) {
    const std::size_t n = term_size(t);
    s.total_term_size += n;
    s.max_term_size = std::max(s.max_term_size, n);
  };
  for (const Declaration& d : p.theory.decls) {
    if (const auto* td = std::get_if<TypeDecl>(&d)) {
      ++s.formulae_by_role["type"];
      ++s.type_symbols;
      if (!td->telescope.empty()) ++s.dependent_type_symbols;
      s.max_type_arity = std::max(s.max_type_arity, td->telescope.size());
    } else if (std::holds_alternative<ConstDecl>(d)) {
      ++s.formulae_by_role["type"];
      ++s.constants;
    } else {
      const auto& ax = std::get<Axiom>(d);
      ++s.formulae_by_role[std::string(role_name(ax.role))];
      formula(ax.formula);
    }
  }
  if (p.conjecture) {
    ++s.formulae_by_role["conjecture"];
    formula(p.conjecture->formula);
  }
  return s;
}

std::string format_stats(const ProblemStats& s) {
  std::ostringstream out;
  std::size_t total = 0;
  for (const auto& [role, n] : s.formulae_by_role) total += n;
  out << "formulae: " << total << "\n";
  for (const auto& [role, n] : s.formulae_by_role) out << "  " << role << ": " << n << "\n";
  out << "type symbols: " << s.type_symbols << "\n"
      << "dependent type symbols: " << s.dependent_type_symbols << "\n"
      << "constants: " << s.constants << "\n"
      << "max type arity: " << s.max_type_arity << "\n"
      << "total term size: " << s.total_term_size << "\n"
      << "max term size: " << s.max_term_size << "\n";
  return out.str();
}

}  // namespace dtf
