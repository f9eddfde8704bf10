#include "monoslice/lexer.hpp"

#include <array>
#include <charconv>
#include <limits>

namespace monoslice {

namespace {

constexpr std::array<std::string_view, 23> kKeywords = {
    "type",                     "interface", "service",       "inputPort", "outputPort",
    "execution",                "main",      "if",            "else",      "while",
    "throw",                    "synchronized", "true",       "false",     "RequestResponse",
    "OneWay",                   "void",      "bool",          "int",       "long",
    "double",                   "string",    "any",
};

bool ident_start(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
}
bool ident_char(char c) { return ident_start(c) || (c >= '0' && c <= '9'); }
bool digit(char c) { return c >= '0' && c <= '9'; }

void append_utf8(std::string& out, std::uint32_t cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_trivia();
      if (at_end()) break;
      out.push_back(next());
    }
    return out;
  }

 private:
  bool at_end() const { return i_ >= src_.size(); }
  char peek(std::size_t ahead = 0) const {
    return i_ + ahead < src_.size() ? src_[i_ + ahead] : '\0';
  }
  SourcePos here() const { return {line_, col_}; }

  void advance() {
    if (src_[i_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++i_;
  }

  void skip_trivia() {
    while (!at_end()) {
      char c = peek();
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
      } else if (c == '/' && peek(1) == '/') {
        while (!at_end() && peek() != '\n') advance();
      } else if (c == '/' && peek(1) == '*') {
        SourcePos start = here();
        advance();
        advance();
        while (!(peek() == '*' && peek(1) == '/')) {
          if (at_end()) throw LexError(start, "unterminated block comment");
          advance();
        }
        advance();
        advance();
      } else {
        break;
      }
    }
  }

  Token make(TokenKind kind, SourcePos pos, std::size_t begin) const {
    Token t;
    t.kind = kind;
    t.pos = pos;
    t.lexeme = std::string(src_.substr(begin, i_ - begin));
    return t;
  }

  Token next() {
    SourcePos pos = here();
    std::size_t begin = i_;
    char c = peek();
    if (ident_start(c)) {
      while (ident_char(peek())) advance();
      Token t = make(TokenKind::Identifier, pos, begin);
      if (is_keyword(t.lexeme)) t.kind = TokenKind::Keyword;
      return t;
    }
    if (digit(c)) return number(pos, begin);
    if (c == '"') return string(pos, begin);

    auto single = [&](TokenKind k) {
      advance();
      return make(k, pos, begin);
    };
    auto pair = [&](char second, TokenKind two, TokenKind one) {
      advance();
      if (peek() == second) {
        advance();
        return make(two, pos, begin);
      }
      return make(one, pos, begin);
    };
    switch (c) {
      case '(': return single(TokenKind::LParen);
      case ')': return single(TokenKind::RParen);
      case '{': return single(TokenKind::LBrace);
      case '}': return single(TokenKind::RBrace);
      case '[': return single(TokenKind::LBracket);
      case ']': return single(TokenKind::RBracket);
      case ':': return single(TokenKind::Colon);
      case ',': return single(TokenKind::Comma);
      case ';': return single(TokenKind::Semicolon);
      case '@': return single(TokenKind::At);
      case '#': return single(TokenKind::Hash);
      case '?': return single(TokenKind::Question);
      case '*': return single(TokenKind::Star);
      case '+': return single(TokenKind::Plus);
      case '-': return single(TokenKind::Minus);
      case '/': return single(TokenKind::Slash);
      case '=': return pair('=', TokenKind::Equal, TokenKind::Assign);
      case '!': return pair('=', TokenKind::NotEqual, TokenKind::Bang);
      case '<': return pair('=', TokenKind::LessEqual, TokenKind::Less);
      case '>': return pair('=', TokenKind::GreaterEqual, TokenKind::Greater);
      case '.':
        if (peek(1) == '.' && peek(2) == '.') {
          advance();
          advance();
          advance();
          return make(TokenKind::Ellipsis, pos, begin);
        }
        return single(TokenKind::Dot);
      case '&':
        if (peek(1) == '&') {
          advance();
          advance();
          return make(TokenKind::AndAnd, pos, begin);
        }
        break;
      case '|':
        if (peek(1) == '|') {
          advance();
          advance();
          return make(TokenKind::OrOr, pos, begin);
        }
        break;
      default: break;
    }
    std::string shown = (static_cast<unsigned char>(c) >= 0x20 && static_cast<unsigned char>(c) < 0x7F)
                            ? std::string(1, c)
                            : "\\x" + std::to_string(static_cast<unsigned char>(c));
    throw LexError(pos, "illegal character '" + shown + "'");
  }

  Token number(SourcePos pos, std::size_t begin) {
    while (digit(peek())) advance();
    bool is_double = false;
    if (peek() == '.' && digit(peek(1))) {
      is_double = true;
      advance();
      while (digit(peek())) advance();
    }
    if ((peek() == 'e' || peek() == 'E') &&
        (digit(peek(1)) || ((peek(1) == '+' || peek(1) == '-') && digit(peek(2))))) {
      is_double = true;
      advance();
      if (peek() == '+' || peek() == '-') advance();
      while (digit(peek())) advance();
    }
    std::string_view digits = src_.substr(begin, i_ - begin);
    if (is_double) {
      Token t = make(TokenKind::DoubleLiteral, pos, begin);
      auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), t.double_value);
      if (ec != std::errc{}) throw LexError(pos, "malformed double literal");
      return t;
    }
    bool is_long = false;
    if (peek() == 'L') {
      is_long = true;
      advance();
    }
    if (ident_char(peek())) throw LexError(pos, "malformed number literal");
    std::int64_t value = 0;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
    if (ec != std::errc{}) throw LexError(pos, "integer literal out of range");
    if (!is_long && value > std::numeric_limits<std::int32_t>::max()) {
      throw LexError(pos, "integer literal out of range for int (use an L suffix)");
    }
    Token t = make(is_long ? TokenKind::LongLiteral : TokenKind::IntLiteral, pos, begin);
    t.int_value = value;
    return t;
  }

  Token string(SourcePos pos, std::size_t begin) {
    advance();  // opening quote
    std::string value;
    for (;;) {
      if (at_end() || peek() == '\n') throw LexError(pos, "unterminated string literal");
      char c = peek();
      if (c == '"') {
        advance();
        break;
      }
      if (c != '\\') {
        value += c;
        advance();
        continue;
      }
      SourcePos esc = here();
      advance();
      if (at_end()) throw LexError(pos, "unterminated string literal");
      char e = peek();
      advance();
      switch (e) {
        case 'n': value += '\n'; break;
        case 't': value += '\t'; break;
        case 'r': value += '\r'; break;
        case '"': value += '"'; break;
        case '\'': value += '\''; break;
        case '\\': value += '\\'; break;
        case '/': value += '/'; break;
        case 'u': {
          std::uint32_t cp = 0;
          for (int k = 0; k < 4; ++k) {
            char h = peek();
            int d = (h >= '0' && h <= '9')   ? h - '0'
                    : (h >= 'a' && h <= 'f') ? h - 'a' + 10
                    : (h >= 'A' && h <= 'F') ? h - 'A' + 10
                                             : -1;
            if (d < 0) throw LexError(esc, "malformed \\u escape");
            cp = cp * 16 + static_cast<std::uint32_t>(d);
            advance();
          }
          append_utf8(value, cp);
          break;
        }
        default: throw LexError(esc, std::string("unknown escape '\\") + e + "'");
      }
    }
    Token t = make(TokenKind::StringLiteral, pos, begin);
    t.string_value = std::move(value);
    return t;
  }

  std::string_view src_;
  std::size_t i_ = 0;
  int line_ = 1;
  int col_ = 1;
};

}  // namespace

bool is_keyword(std::string_view word) {
  for (auto k : kKeywords) {
    if (k == word) return true;
  }
  return false;
}

std::string_view token_kind_name(TokenKind kind) {
  switch (kind) {
    case TokenKind::Identifier: return "identifier";
    case TokenKind::Keyword: return "keyword";
    case TokenKind::IntLiteral: return "int literal";
    case TokenKind::LongLiteral: return "long literal";
    case TokenKind::DoubleLiteral: return "double literal";
    case TokenKind::StringLiteral: return "string literal";
    case TokenKind::LParen: return "'('";
    case TokenKind::RParen: return "')'";
    case TokenKind::LBrace: return "'{'";
    case TokenKind::RBrace: return "'}'";
    case TokenKind::LBracket: return "'['";
    case TokenKind::RBracket: return "']'";
    case TokenKind::Colon: return "':'";
    case TokenKind::Comma: return "','";
    case TokenKind::Semicolon: return "';'";
    case TokenKind::Dot: return "'.'";
    case TokenKind::Ellipsis: return "'...'";
    case TokenKind::At: return "'@'";
    case TokenKind::Hash: return "'#'";
    case TokenKind::Question: return "'?'";
    case TokenKind::Star: return "'*'";
    case TokenKind::Plus: return "'+'";
    case TokenKind::Minus: return "'-'";
    case TokenKind::Slash: return "'/'";
    case TokenKind::Assign: return "'='";
    case TokenKind::Equal: return "'=='";
    case TokenKind::NotEqual: return "'!='";
    case TokenKind::Less: return "'<'";
    case TokenKind::LessEqual: return "'<='";
    case TokenKind::Greater: return "'>'";
    case TokenKind::GreaterEqual: return "'>='";
    case TokenKind::AndAnd: return "'&&'";
    case TokenKind::OrOr: return "'||'";
    case TokenKind::Bang: return "'!'";
    case TokenKind::End: return "end of input";
  }
  return "?";
}

std::vector<Token> tokenize(std::string_view source) { return Lexer(source).run(); }

}  // namespace monoslice
