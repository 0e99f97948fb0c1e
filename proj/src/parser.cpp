// Recursive-descent reader for TPTP `thf` annotated formulae. Produces the
// surface tree; names are resolved later by the elaborator.

#include <fstream>
#include <set>
#include <sstream>

#include "dtf/syntax.hpp"
#include "lexer.hpp"

namespace dtf {

namespace {

using detail::Token;
using detail::TokenKind;

struct ParseError {
  Diagnostic diagnostic;
};

bool is_nonassoc_connective(const Token& t) {
  return t.kind == TokenKind::Operator &&
         (t.text == "=>" || t.text == "<=" || t.text == "<=>" || t.text == "<~>" ||
          t.text == "~|" || t.text == "~&");
}

bool is_quantifier(const Token& t) {
  return t.kind == TokenKind::Operator &&
         (t.text == "!" || t.text == "?" || t.text == "^" || t.text == "@+" || t.text == "@-" ||
          t.text == "!>" || t.text == "?*");
}

Span join(Span a, Span b) {
  if (!a.valid()) return b;
  if (!b.valid()) return a;
  if (b.line == a.line) a.length = std::max(a.length, b.column + b.length - a.column);
  return a;
}

Surface make(SurfaceNode::Kind kind, std::string text, std::vector<Surface> kids, Span span) {
  return std::make_shared<const SurfaceNode>(
      SurfaceNode{kind, std::move(text), {}, std::move(kids), span});
}

class Parser {
 public:
  Parser(std::string_view source, const ParseOptions& options,
         std::set<std::filesystem::path>& include_stack, std::vector<Diagnostic>& diags)
      : source_(source), options_(options), include_stack_(include_stack), diags_(diags) {
    tokens_ = detail::tokenize(source, diags_);
  }

  std::vector<AnnotatedFormula> run() {
    std::vector<AnnotatedFormula> out;
    while (!peek().is(TokenKind::End, "")) {
      try {
        if (peek().is(TokenKind::LowerWord, "include")) {
          include(out);
        } else {
          out.push_back(annotated());
        }
      } catch (const ParseError& e) {
        diags_.push_back(e.diagnostic);
        recover();
      }
    }
    return out;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    return tokens_[std::min(pos_ + ahead, tokens_.size() - 1)];
  }

  const Token& take() {
    const Token& t = tokens_[pos_];
    if (pos_ + 1 < tokens_.size()) ++pos_;
    return t;
  }

  [[noreturn]] void fail(const Token& at, std::string message) const {
    Span s = at.span;
    if (at.kind == TokenKind::End) message += " (unexpected end of input)";
    throw ParseError{error_at(s, std::move(message))};
  }

  const Token& expect_punct(std::string_view p) {
    if (!peek().punct(p)) fail(peek(), "expected '" + std::string(p) + "'");
    return take();
  }

  // Skip to the token after the next `.` that closes a formula at depth 0.
  void recover() {
    int depth = 0;
    while (!peek().is(TokenKind::End, "")) {
      const Token& t = take();
      if (t.punct("(")) ++depth;
      if (t.punct(")")) depth = std::max(0, depth - 1);
      if (t.punct(".") && depth == 0) return;
    }
  }

  std::string formula_name() {
    const Token& t = peek();
    if (t.kind == TokenKind::LowerWord || t.kind == TokenKind::SingleQuoted ||
        t.kind == TokenKind::Number)
      return take().text;
    fail(t, "expected a formula name");
  }

  // Raw text of a balanced term, used for the optional source/useful_info.
  std::string raw_annotation() {
    const std::size_t begin = peek().offset;
    std::size_t end = begin;
    int depth = 0;
    while (true) {
      const Token& t = peek();
      if (t.kind == TokenKind::End) fail(t, "unterminated annotation");
      if (depth == 0 && (t.punct(",") || t.punct(")"))) break;
      if (t.punct("(") || t.punct("[")) ++depth;
      if (t.punct(")") || t.punct("]")) --depth;
      end = t.end;
      take();
    }
    if (end == begin) fail(peek(), "empty annotation");
    return std::string(source_.substr(begin, end - begin));
  }

  AnnotatedFormula annotated() {
    const Token& lang = peek();
    if (lang.kind != TokenKind::LowerWord) fail(lang, "expected an annotated formula");
    if (lang.text == "tff" || lang.text == "fof" || lang.text == "cnf" || lang.text == "tpi" ||
        lang.text == "tcf")
      fail(lang, "only thf formulae are supported, found " + lang.text);
    if (lang.text != "thf") fail(lang, "expected 'thf', found '" + lang.text + "'");
    AnnotatedFormula f;
    f.span = lang.span;
    f.file = current_file_;
    take();
    expect_punct("(");
    f.name = formula_name();
    expect_punct(",");
    const Token& role_tok = peek();
    if (role_tok.kind != TokenKind::LowerWord) fail(role_tok, "expected a formula role");
    auto role = role_from_name(role_tok.text);
    if (!role) fail(role_tok, "unsupported formula role '" + role_tok.text + "'");
    f.role = *role;
    take();
    expect_punct(",");
    f.body = (f.role == Role::Type) ? typing() : logic();
    if (peek().punct(",")) {
      take();
      f.source = raw_annotation();
      if (peek().punct(",")) {
        take();
        f.useful_info = raw_annotation();
      }
    }
    expect_punct(")");
    expect_punct(".");
    return f;
  }

  void include(std::vector<AnnotatedFormula>& out) {
    const Token& kw = take();
    expect_punct("(");
    const Token& path_tok = peek();
    if (path_tok.kind != TokenKind::SingleQuoted) fail(path_tok, "expected a quoted file name");
    take();
    std::optional<std::set<std::string>> selection;
    if (peek().punct(",")) {
      take();
      expect_punct("[");
      selection.emplace();
      while (!peek().punct("]")) {
        selection->insert(formula_name());
        if (peek().punct(",")) take();
        else if (!peek().punct("]")) fail(peek(), "expected ',' or ']'");
      }
      take();
    }
    expect_punct(")");
    expect_punct(".");

    std::filesystem::path path = options_.base_dir / path_tok.text;
    std::error_code ec;
    std::filesystem::path canonical = std::filesystem::weakly_canonical(path, ec);
    if (ec) canonical = path;
    if (include_stack_.count(canonical)) fail(kw, "include cycle through '" + path_tok.text + "'");
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(path_tok, "cannot open included file '" + path_tok.text + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    const std::string text = buffer.str();

    ParseOptions nested = options_;
    nested.base_dir = path.parent_path();
    include_stack_.insert(canonical);
    std::vector<Diagnostic> nested_diags;
    Parser sub(text, nested, include_stack_, nested_diags);
    sub.current_file_ = path.string();
    std::vector<AnnotatedFormula> formulae = sub.run();
    include_stack_.erase(canonical);
    for (Diagnostic& d : nested_diags) {
      if (d.file.empty()) d.file = path.string();
      diags_.push_back(std::move(d));
    }
    for (AnnotatedFormula& f : formulae) {
      if (!selection || selection->count(f.name)) out.push_back(std::move(f));
    }
  }

  Surface typing() {
    if (peek().punct("(")) {
      // Either a parenthesized typing or a parenthesized name.
      const std::size_t save = pos_;
      take();
      Surface inner = typing();
      if (peek().punct(")")) {
        take();
        return inner;
      }
      pos_ = save;
    }
    const Token& name = peek();
    if (name.kind != TokenKind::LowerWord && name.kind != TokenKind::SingleQuoted)
      fail(name, "expected a symbol to declare");
    take();
    expect_punct(":");
    Surface type = arrow();
    auto node = make(SurfaceNode::Kind::Typing, name.text, {type}, name.span);
    return node;
  }

  // Precedence levels, loosest first.
  Surface logic() {
    Surface lhs = disjunction();
    if (is_nonassoc_connective(peek())) {
      const Token& op = take();
      Surface rhs = disjunction();
      if (is_nonassoc_connective(peek()))
        fail(peek(), "'" + peek().text + "' is non-associative; add parentheses");
      return make(SurfaceNode::Kind::Binary, op.text, {lhs, rhs}, join(lhs->span, op.span));
    }
    return lhs;
  }

  Surface disjunction() {
    Surface lhs = conjunction();
    while (peek().op("|")) {
      const Token& op = take();
      Surface rhs = conjunction();
      lhs = make(SurfaceNode::Kind::Binary, "|", {lhs, rhs}, join(lhs->span, op.span));
    }
    return lhs;
  }

  Surface conjunction() {
    Surface lhs = arrow();
    while (peek().op("&")) {
      const Token& op = take();
      Surface rhs = arrow();
      lhs = make(SurfaceNode::Kind::Binary, "&", {lhs, rhs}, join(lhs->span, op.span));
    }
    return lhs;
  }

  Surface arrow() {
    Surface lhs = equality();
    if (peek().op(">")) {
      const Token& op = take();
      Surface rhs = arrow();
      return make(SurfaceNode::Kind::Binary, ">", {lhs, rhs}, join(lhs->span, op.span));
    }
    if (peek().op("*")) fail(peek(), "product types are not supported");
    return lhs;
  }

  Surface equality() {
    Surface lhs = application();
    if (peek().op("=") || peek().op("!=")) {
      const Token& op = take();
      Surface rhs = application();
      if (peek().op("=") || peek().op("!="))
        fail(peek(), "equality is non-associative; add parentheses");
      return make(SurfaceNode::Kind::Binary, op.text, {lhs, rhs}, join(lhs->span, op.span));
    }
    return lhs;
  }

  Surface application() {
    Surface lhs = unary();
    while (peek().op("@")) {
      take();
      Surface rhs = unary();
      lhs = make(SurfaceNode::Kind::Binary, "@", {lhs, rhs}, lhs->span);
    }
    return lhs;
  }

  Surface unary() {
    const Token& t = peek();
    if (t.op("~")) {
      take();
      Surface operand = unary();
      return make(SurfaceNode::Kind::Not, "~", {operand}, t.span);
    }
    if (is_quantifier(t)) return quantified();
    if (t.punct("(")) {
      take();
      Surface inner = logic();
      expect_punct(")");
      return inner;
    }
    switch (t.kind) {
      case TokenKind::LowerWord:
      case TokenKind::SingleQuoted:
        take();
        return make(SurfaceNode::Kind::Word, t.text, {}, t.span);
      case TokenKind::UpperWord:
        take();
        return make(SurfaceNode::Kind::Variable, t.text, {}, t.span);
      case TokenKind::DollarWord:
        take();
        return make(SurfaceNode::Kind::Defined, t.text, {}, t.span);
      case TokenKind::Number:
        fail(t, "numbers are not supported in DTF problems");
      case TokenKind::DistinctObject:
        fail(t, "distinct objects are not supported in DTF problems");
      default:
        break;
    }
    if (t.kind == TokenKind::Operator) {
      if (t.text == "!!" || t.text == "??" || t.text == "@@+" || t.text == "@@-" || t.text == "@=")
        fail(t, "'" + t.text + "' is not supported in DTF problems");
    }
    fail(t, t.kind == TokenKind::End ? "expected a formula" : "unexpected '" + t.text + "'");
  }

  Surface quantified() {
    const Token& q = take();
    if (q.text == "@-") fail(q, "description not supported in DTF checker");
    if (q.text == "?*") fail(q, "'?*' is not supported in DTF problems");
    expect_punct("[");
    std::vector<SurfaceBinding> vars;
    while (true) {
      const Token& v = peek();
      if (v.kind != TokenKind::UpperWord) fail(v, "expected a variable");
      take();
      SurfaceBinding b{v.text, nullptr, v.span};
      if (peek().punct(":")) {
        take();
        b.type = arrow();
      }
      vars.push_back(std::move(b));
      if (peek().punct(",")) {
        take();
        continue;
      }
      break;
    }
    expect_punct("]");
    expect_punct(":");
    Surface body = (q.text == "!>") ? arrow() : equality();
    auto node = std::make_shared<SurfaceNode>(
        SurfaceNode{SurfaceNode::Kind::Quantified, q.text, std::move(vars), {body}, q.span});
    return node;
  }

  std::string_view source_;
  const ParseOptions& options_;
  std::set<std::filesystem::path>& include_stack_;
  std::vector<Diagnostic>& diags_;
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  std::string current_file_;
};

}  // namespace

Result<std::vector<AnnotatedFormula>> parse_formulae(std::string_view source,
                                                     const ParseOptions& options) {
  std::vector<Diagnostic> diags;
  std::set<std::filesystem::path> stack;
  if (!options.file_name.empty()) {
    std::error_code ec;
    auto canonical = std::filesystem::weakly_canonical(options.file_name, ec);
    stack.insert(ec ? std::filesystem::path(options.file_name) : canonical);
  }
  Parser parser(source, options, stack, diags);
  std::vector<AnnotatedFormula> formulae = parser.run();
  if (has_errors(diags)) return diags;
  return formulae;
}

}  // namespace dtf
