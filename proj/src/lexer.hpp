#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "dtf/ast.hpp"
#include "dtf/diagnostic.hpp"

namespace dtf::detail {

enum class TokenKind {
  LowerWord,
  UpperWord,
  SingleQuoted,  // text holds the unescaped contents
  DollarWord,
  DistinctObject,
  Number,
  Punct,     // ( ) [ ] , . :
  Operator,  // everything else
  End,
};

struct Token {
  TokenKind kind;
  std::string text;
  Span span;
  std::size_t offset = 0;  // byte offset into the source
  std::size_t end = 0;

  bool is(TokenKind k, std::string_view t) const { return kind == k && text == t; }
  bool punct(std::string_view t) const { return is(TokenKind::Punct, t); }
  bool op(std::string_view t) const { return is(TokenKind::Operator, t); }
};

/// Splits TPTP text into tokens, skipping whitespace and comments. Lexical
/// errors are appended to `diags`; the offending character is skipped.
std::vector<Token> tokenize(std::string_view source, std::vector<Diagnostic>& diags);

}  // namespace dtf::detail
