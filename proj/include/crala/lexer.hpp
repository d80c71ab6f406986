#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "crala/diagnostic.hpp"

namespace crala {

enum class TokenKind {
  identifier,
  integer,
  string,
  lbrace,
  rbrace,
  colon,
  equals,
  arrow,
  tilde,
  dot,
  end,
};

std::string_view to_string(TokenKind kind);

struct Token {
  TokenKind kind = TokenKind::end;
  /// Identifier/integer spelling, or the unescaped value of a string literal.
  std::string text;
  std::size_t start = 0;
  std::size_t end = 0;
};

/// Splits `text` into tokens. Bad characters are reported as E-LEX-01 and
/// skipped; a malformed string literal is reported and still yields a string
/// token. The result always ends with an `end` token.
std::vector<Token> tokenize(std::string_view text, const std::string& file,
                            std::vector<Diagnostic>& diagnostics);

}  // namespace crala
