#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "monoslice/source_pos.hpp"

namespace monoslice {

enum class TokenKind {
  Identifier,
  Keyword,
  IntLiteral,
  LongLiteral,
  DoubleLiteral,
  StringLiteral,
  LParen,
  RParen,
  LBrace,
  RBrace,
  LBracket,
  RBracket,
  Colon,
  Comma,
  Semicolon,
  Dot,
  Ellipsis,
  At,
  Hash,
  Question,
  Star,
  Plus,
  Minus,
  Slash,
  Assign,
  Equal,
  NotEqual,
  Less,
  LessEqual,
  Greater,
  GreaterEqual,
  AndAnd,
  OrOr,
  Bang,
  End,
};

std::string_view token_kind_name(TokenKind kind);

struct Token {
  TokenKind kind = TokenKind::End;
  std::string lexeme;  // source text (keyword/identifier spelling, raw literal)
  SourcePos pos;
  std::int64_t int_value = 0;  // Int/Long literals
  double double_value = 0.0;
  std::string string_value;  // decoded StringLiteral

  bool is(TokenKind k) const { return kind == k; }
  bool is_keyword(std::string_view word) const {
    return kind == TokenKind::Keyword && lexeme == word;
  }
  /// Identifier or keyword: anything usable as a path step or field name.
  bool is_word() const { return kind == TokenKind::Identifier || kind == TokenKind::Keyword; }
};

class LexError : public SyntaxError {
 public:
  using SyntaxError::SyntaxError;
};

bool is_keyword(std::string_view word);

/// Comments and whitespace are dropped. The result does not include an End
/// token; the parser synthesizes one past the last token.
std::vector<Token> tokenize(std::string_view source);

}  // namespace monoslice
