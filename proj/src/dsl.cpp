#include "stomoyal/dsl.hpp"

#include <cctype>

#include "stomoyal/error.hpp"

namespace stomoyal {

namespace {

enum class TokenKind { identifier, integer, plus, minus, star, caret, slash,
                       lparen, rparen, end };

struct Token {
  TokenKind kind = TokenKind::end;
  std::string text;
  int line = 1;
  int column = 1;
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  Token next() {
    skip_whitespace();
    Token token;
    token.line = line_;
    token.column = column_;
    if (pos_ >= text_.size()) {
      token.kind = TokenKind::end;
      return token;
    }
    const char c = text_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
              text_[pos_] == '_')) {
        token.text += text_[pos_];
        advance();
      }
      token.kind = TokenKind::identifier;
      return token;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      while (pos_ < text_.size() &&
             std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        token.text += text_[pos_];
        advance();
      }
      token.kind = TokenKind::integer;
      return token;
    }
    token.text = c;
    advance();
    switch (c) {
      case '+': token.kind = TokenKind::plus; return token;
      case '-': token.kind = TokenKind::minus; return token;
      case '*': token.kind = TokenKind::star; return token;
      case '^': token.kind = TokenKind::caret; return token;
      case '/': token.kind = TokenKind::slash; return token;
      case '(': token.kind = TokenKind::lparen; return token;
      case ')': token.kind = TokenKind::rparen; return token;
      default: break;
    }
    token.kind = TokenKind::end;
    token.text = std::string("unexpected character '") + c + "'";
    bad_ = true;
    return token;
  }

  bool bad() const { return bad_; }

 private:
  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

  void skip_whitespace() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      advance();
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int column_ = 1;
  bool bad_ = false;
};

class Parser {
 public:
  Parser(std::string_view text, const DslContext& context,
         const std::string& where)
      : lexer_(text), context_(context), where_(where) {
    current_ = lexer_.next();
  }

  PolynomialFunctional parse() {
    PolynomialFunctional result = expression();
    if (current_.kind != TokenKind::end || lexer_.bad()) {
      fail("unexpected trailing input");
    }
    return result;
  }

 private:
  [[noreturn]] void fail(const std::string& message) {
    throw Error(Diag::syntax, where_ + ": " + message + " at line " +
                                  std::to_string(current_.line) + ", column " +
                                  std::to_string(current_.column));
  }

  void consume() {
    if (lexer_.bad()) fail(current_.text);
    current_ = lexer_.next();
    if (lexer_.bad()) fail(current_.text);
  }

  PolynomialFunctional expression() {
    PolynomialFunctional left = term();
    while (current_.kind == TokenKind::plus ||
           current_.kind == TokenKind::minus) {
      const bool subtract = current_.kind == TokenKind::minus;
      consume();
      PolynomialFunctional right = term();
      if (subtract) {
        left -= right;
      } else {
        left += right;
      }
    }
    return left;
  }

  PolynomialFunctional term() {
    PolynomialFunctional left = unary();
    while (current_.kind == TokenKind::star) {
      consume();
      left = left * unary();
    }
    if (current_.kind == TokenKind::slash) {
      fail("division of functionals is not supported (only p/q literals)");
    }
    return left;
  }

  PolynomialFunctional unary() {
    if (current_.kind == TokenKind::minus) {
      consume();
      return -unary();
    }
    if (current_.kind == TokenKind::plus) {
      consume();
      return unary();
    }
    return power();
  }

  PolynomialFunctional power() {
    PolynomialFunctional base = atom();
    while (current_.kind == TokenKind::caret) {
      consume();
      if (current_.kind == TokenKind::integer) {
        unsigned long exponent = 0;
        try {
          exponent = std::stoul(current_.text);
        } catch (const std::exception&) {
          fail("exponent out of range");
        }
        if (exponent > 10000) fail("exponent out of range");
        base = base.pow(static_cast<unsigned>(exponent));
        consume();
      } else if (current_.kind == TokenKind::minus) {
        fail("exponents must be nonnegative integers");
      } else {
        fail("expected an integer exponent after '^'");
      }
    }
    return base;
  }

  PolynomialFunctional atom() {
    switch (current_.kind) {
      case TokenKind::integer: {
        std::string literal = current_.text;
        consume();
        if (current_.kind == TokenKind::slash) {
          consume();
          if (current_.kind != TokenKind::integer) {
            fail("expected an integer denominator after '/'");
          }
          literal += "/" + current_.text;
          consume();
        }
        return PolynomialFunctional::constant(context_.atlas,
                                              parse_rational(literal));
      }
      case TokenKind::identifier: {
        const std::string name = current_.text;
        consume();
        if (context_.functionals) {
          auto it = context_.functionals->find(name);
          if (it != context_.functionals->end()) return it->second;
        }
        if (auto index = context_.atlas->index_of(name)) {
          return PolynomialFunctional::variable(context_.atlas, *index);
        }
        throw Error(Diag::unresolved_name,
                    where_ + ": unknown name \"" + name + "\"");
      }
      case TokenKind::lparen: {
        consume();
        PolynomialFunctional inner = expression();
        if (current_.kind != TokenKind::rparen) {
          fail("expected ')'");
        }
        consume();
        return inner;
      }
      default:
        fail("expected an identifier, literal or '('");
    }
  }

  Lexer lexer_;
  const DslContext& context_;
  std::string where_;
  Token current_;
};

}  // namespace

PolynomialFunctional parse_functional_expression(std::string_view text,
                                                 const DslContext& context,
                                                 const std::string& where) {
  return Parser(text, context, where).parse();
}

}  // namespace stomoyal
