#pragma once

// Reading and writing the DTF dialect of TPTP `thf` problems.
//
// Parsing happens in two stages: the text is first read into a surface tree
// that mirrors the concrete syntax, which is then elaborated against the
// declarations seen so far into the core representation of dtf/ast.hpp.

#include <cstddef>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dtf/ast.hpp"
#include "dtf/diagnostic.hpp"

namespace dtf {

struct SurfaceNode;
using Surface = std::shared_ptr<const SurfaceNode>;

struct SurfaceBinding {
  std::string name;
  Surface type;  // null when the variable was written without a type
  Span span;
};

struct SurfaceNode {
  enum class Kind {
    Word,        // lower word or single-quoted atom (quotes removed)
    Variable,    // upper word
    Defined,     // $word
    Binary,      // text holds the operator: @ > = != & | => <= <=> <~> ~| ~&
    Not,         // ~ F
    Quantified,  // text holds the quantifier: ! ? ^ @+ !>
    Typing,      // name : type, the body of a `type` formula
  };

  Kind kind;
  std::string text;
  std::vector<SurfaceBinding> vars;
  std::vector<Surface> kids;
  Span span;
};

struct AnnotatedFormula {
  std::string language = "thf";
  std::string name;
  Role role = Role::Axiom;
  Surface body;
  std::optional<std::string> source;
  std::optional<std::string> useful_info;
  Span span;
  std::string file;  // non-empty when the formula came from an included file
};

struct Conjecture {
  std::string label;
  Term formula;
  /// Number of theory declarations preceding the conjecture in the file.
  std::size_t position = 0;
  Span span;
};

struct Problem {
  std::vector<AnnotatedFormula> formulae;
  Theory theory;
  std::optional<Conjecture> conjecture;
};

struct ParseOptions {
  /// Directory that relative `include` paths are resolved against.
  std::filesystem::path base_dir = ".";
  /// Name used for the main text in diagnostics from included files.
  std::string file_name;
};

/// Parses and elaborates a whole problem. On failure every diagnostic found
/// is returned (the parser resynchronizes at the end of each formula).
Result<Problem> parse_problem(std::string_view source, const ParseOptions& options = {});

/// Reads `path` and parses it with includes resolved relative to its
/// directory. A missing file yields a single diagnostic at line 0.
Result<Problem> parse_file(const std::filesystem::path& path);

/// Reads annotated formulae without elaborating them.
Result<std::vector<AnnotatedFormula>> parse_formulae(std::string_view source,
                                                     const ParseOptions& options = {});

/// Canonical DTF text for an elaborated problem; re-parses to an
/// alpha-equal theory and conjecture.
std::string print_problem(const Problem& p);

/// Canonical text for a theory plus optional conjecture.
std::string print_theory(const Theory& theory, const std::optional<Conjecture>& conjecture);

/// TH0 text. Throws std::invalid_argument if anything dependent or
/// polymorphic remains, which means erasure was skipped.
std::string print_thf(const Theory& theory, const std::optional<Term>& conjecture,
                      std::string_view conjecture_label = "conjecture");

/// Single-line renderings used in messages and reports.
std::string print_term(const Term& t);
std::string print_type(const Type& t);

/// `name` if it is a TPTP lower word, otherwise a single-quoted atom.
std::string quote_atom(std::string_view name);

}  // namespace dtf
