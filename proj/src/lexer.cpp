#include "crala/lexer.hpp"

#include <algorithm>
#include <cctype>
#include <fmt/format.h>

namespace crala {

std::string_view to_string(TokenKind kind) {
  switch (kind) {
    case TokenKind::identifier: return "identifier";
    case TokenKind::integer: return "integer";
    case TokenKind::string: return "string";
    case TokenKind::lbrace: return "'{'";
    case TokenKind::rbrace: return "'}'";
    case TokenKind::colon: return "':'";
    case TokenKind::equals: return "'='";
    case TokenKind::arrow: return "'->'";
    case TokenKind::tilde: return "'~'";
    case TokenKind::dot: return "'.'";
    case TokenKind::end: return "end of file";
  }
  return "token";
}

namespace {

bool ident_start(char c) {
  auto u = static_cast<unsigned char>(c);
  return std::isalpha(u) || c == '_';
}

bool ident_char(char c) {
  auto u = static_cast<unsigned char>(c);
  return std::isalnum(u) || c == '_';
}

// Length of the UTF-8 sequence starting with `lead`, so a bad code point is
// reported once rather than per byte.
std::size_t utf8_length(unsigned char lead) {
  if (lead >= 0xF0) return 4;
  if (lead >= 0xE0) return 3;
  if (lead >= 0xC0) return 2;
  return 1;
}

}  // namespace

std::vector<Token> tokenize(std::string_view text, const std::string& file,
                            std::vector<Diagnostic>& diagnostics) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  const std::size_t n = text.size();

  auto lex_error = [&](std::size_t start, std::size_t end, std::string message) {
    diagnostics.push_back(make_diagnostic("E-LEX-01", std::move(message), SourceSpan{file, start, end}));
  };
  auto push = [&](TokenKind kind, std::size_t start, std::size_t end, std::string value = {}) {
    tokens.push_back(Token{kind, std::move(value), start, end});
  };

  while (i < n) {
    char c = text[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      ++i;
      continue;
    }
    if (c == '/' && i + 1 < n && text[i + 1] == '/') {
      while (i < n && text[i] != '\n') ++i;
      continue;
    }
    const std::size_t start = i;
    if (ident_start(c)) {
      while (i < n && ident_char(text[i])) ++i;
      push(TokenKind::identifier, start, i, std::string(text.substr(start, i - start)));
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      while (i < n && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
      if (i < n && ident_char(text[i])) {
        while (i < n && ident_char(text[i])) ++i;
        lex_error(start, i, fmt::format("malformed number '{}'", text.substr(start, i - start)));
        continue;
      }
      push(TokenKind::integer, start, i, std::string(text.substr(start, i - start)));
      continue;
    }
    if (c == '"') {
      ++i;
      std::string value;
      bool closed = false;
      bool bad_escape = false;
      while (i < n && text[i] != '\n') {
        char ch = text[i];
        if (ch == '"') {
          closed = true;
          ++i;
          break;
        }
        if (ch == '\\' && i + 1 < n) {
          char esc = text[i + 1];
          switch (esc) {
            case '"': value += '"'; break;
            case '\\': value += '\\'; break;
            case 'n': value += '\n'; break;
            case 't': value += '\t'; break;
            default:
              bad_escape = true;
              value += esc;
              break;
          }
          i += 2;
          continue;
        }
        value += ch;
        ++i;
      }
      if (!closed) {
        lex_error(start, i, "unterminated string literal");
      } else if (bad_escape) {
        lex_error(start, i, "unknown escape sequence in string literal");
      }
      // The token is kept either way so parsing can go on past the literal.
      push(TokenKind::string, start, i, std::move(value));
      continue;
    }
    switch (c) {
      case '{': push(TokenKind::lbrace, start, ++i); continue;
      case '}': push(TokenKind::rbrace, start, ++i); continue;
      case ':': push(TokenKind::colon, start, ++i); continue;
      case '=': push(TokenKind::equals, start, ++i); continue;
      case '~': push(TokenKind::tilde, start, ++i); continue;
      case '.': push(TokenKind::dot, start, ++i); continue;
      case '-':
        if (i + 1 < n && text[i + 1] == '>') {
          i += 2;
          push(TokenKind::arrow, start, i);
          continue;
        }
        break;
      default: break;
    }
    std::size_t len = utf8_length(static_cast<unsigned char>(c));
    i = std::min(n, i + len);
    lex_error(start, i, fmt::format("unexpected character '{}'", text.substr(start, i - start)));
  }
  tokens.push_back(Token{TokenKind::end, {}, n, n});
  return tokens;
}

}  // namespace crala
