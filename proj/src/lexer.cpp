#include "lexer.hpp"

#include <array>
#include <optional>
#include <cctype>

namespace dtf::detail {

namespace {

bool is_alnum(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

// Longest operators first.
constexpr std::array<std::string_view, 24> kOperators = {
    "<~>", "<=>", "-->", "@@+", "@@-", "@=", "=>", "<=", "~|", "~&", "!=", "!>",
    "?*", "@+", "@-", "!!", "??", "!", "?", "^", "@", "~", "|", "&"};

constexpr std::array<std::string_view, 5> kSingleOperators = {"=", ">", "*", "+", "<"};

class Lexer {
 public:
  Lexer(std::string_view src, std::vector<Diagnostic>& diags) : src_(src), diags_(diags) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip_trivia();
      if (pos_ >= src_.size()) {
        out.push_back(Token{TokenKind::End, "", here(0), pos_, pos_});
        return out;
      }
      if (auto t = next()) out.push_back(std::move(*t));
    }
  }

 private:
  Span here(int length) const { return Span{line_, col_, length}; }

  void advance(std::size_t n = 1) {
    for (std::size_t i = 0; i < n && pos_ < src_.size(); ++i) {
      if (src_[pos_] == '\n') {
        ++line_;
        col_ = 1;
      } else {
        ++col_;
      }
      ++pos_;
    }
  }

  void skip_trivia() {
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else if (c == '%') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else if (c == '/' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '*') {
        const Span start = here(2);
        advance(2);
        while (pos_ + 1 < src_.size() && !(src_[pos_] == '*' && src_[pos_ + 1] == '/')) advance();
        if (pos_ + 1 >= src_.size()) {
          diags_.push_back(error_at(start, "unterminated block comment"));
          pos_ = src_.size();
          return;
        }
        advance(2);
      } else {
        return;
      }
    }
  }

  std::optional<Token> next() {
    const std::size_t start = pos_;
    const Span span = here(0);
    const char c = src_[pos_];
    auto finish = [&](TokenKind kind, std::string text) {
      Span s = span;
      s.length = static_cast<int>(pos_ - start);
      return Token{kind, std::move(text), s, start, pos_};
    };

    if (std::isalpha(static_cast<unsigned char>(c))) {
      while (pos_ < src_.size() && is_alnum(src_[pos_])) advance();
      const bool upper = std::isupper(static_cast<unsigned char>(c));
      return finish(upper ? TokenKind::UpperWord : TokenKind::LowerWord,
                    std::string(src_.substr(start, pos_ - start)));
    }
    if (c == '$') {
      advance();
      if (pos_ < src_.size() && src_[pos_] == '$') advance();
      while (pos_ < src_.size() && is_alnum(src_[pos_])) advance();
      return finish(TokenKind::DollarWord, std::string(src_.substr(start, pos_ - start)));
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.' ||
              src_[pos_] == '/')) {
        // A trailing '.' ends the formula rather than continuing a decimal.
        if (src_[pos_] == '.' &&
            (pos_ + 1 >= src_.size() || !std::isdigit(static_cast<unsigned char>(src_[pos_ + 1]))))
          break;
        advance();
      }
      return finish(TokenKind::Number, std::string(src_.substr(start, pos_ - start)));
    }
    if (c == '\'' || c == '"') {
      advance();
      std::string text;
      while (pos_ < src_.size() && src_[pos_] != c) {
        if (src_[pos_] == '\\' && pos_ + 1 < src_.size()) advance();
        text.push_back(src_[pos_]);
        advance();
      }
      if (pos_ >= src_.size()) {
        diags_.push_back(error_at(span, c == '\'' ? "unterminated quoted atom"
                                                  : "unterminated distinct object"));
        return std::nullopt;
      }
      advance();
      if (c == '\'' && text.empty()) {
        diags_.push_back(error_at(span, "empty quoted atom"));
        return std::nullopt;
      }
      return finish(c == '\'' ? TokenKind::SingleQuoted : TokenKind::DistinctObject,
                    std::move(text));
    }
    if (std::string_view("()[],.:").find(c) != std::string_view::npos) {
      advance();
      return finish(TokenKind::Punct, std::string(1, c));
    }
    for (std::string_view op : kOperators) {
      if (src_.substr(pos_, op.size()) == op) {
        advance(op.size());
        return finish(TokenKind::Operator, std::string(op));
      }
    }
    for (std::string_view op : kSingleOperators) {
      if (src_.substr(pos_, 1) == op) {
        advance();
        return finish(TokenKind::Operator, std::string(op));
      }
    }
    advance();
    Span s = span;
    s.length = 1;
    diags_.push_back(error_at(s, std::string("unexpected character '") + c + "'"));
    return std::nullopt;
  }

  std::string_view src_;
  std::vector<Diagnostic>& diags_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

}  // namespace

std::vector<Token> tokenize(std::string_view source, std::vector<Diagnostic>& diags) {
  return Lexer(source, diags).run();
}

}  // namespace dtf::detail
