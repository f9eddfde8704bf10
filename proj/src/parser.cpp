#include "monoslice/parser.hpp"

namespace monoslice {

namespace {

class Parser {
 public:
  explicit Parser(const std::vector<Token>& tokens) : toks_(tokens) {
    end_.kind = TokenKind::End;
    if (!toks_.empty()) {
      const Token& last = toks_.back();
      end_.pos = {last.pos.line, last.pos.column + static_cast<int>(last.lexeme.size())};
    } else {
      end_.pos = {1, 1};
    }
  }

  SourceProgram program(std::string source_name) {
    SourceProgram p;
    p.source_name = std::move(source_name);
    while (!peek().is(TokenKind::End)) {
      if (accept(TokenKind::Ellipsis)) continue;
      if (peek().is_keyword("type")) {
        p.declarations.emplace_back(type_decl());
      } else if (peek().is_keyword("interface")) {
        p.declarations.emplace_back(interface_decl());
      } else if (peek().is_keyword("service")) {
        p.declarations.emplace_back(service_decl());
      } else {
        fail("a declaration ('type', 'interface' or 'service')");
      }
    }
    return p;
  }

  Expr standalone_expression() {
    Expr e = expression();
    if (!peek().is(TokenKind::End)) fail("end of expression");
    return e;
  }

 private:
  // -- token plumbing ------------------------------------------------------

  const Token& peek(std::size_t ahead = 0) const {
    return pos_ + ahead < toks_.size() ? toks_[pos_ + ahead] : end_;
  }
  const Token& take() {
    const Token& t = peek();
    if (pos_ < toks_.size()) ++pos_;
    return t;
  }
  bool accept(TokenKind k) {
    if (!peek().is(k)) return false;
    take();
    return true;
  }
  bool accept_keyword(std::string_view w) {
    if (!peek().is_keyword(w)) return false;
    take();
    return true;
  }

  static std::string describe(const Token& t) {
    switch (t.kind) {
      case TokenKind::End: return "end of input";
      case TokenKind::Identifier: return "identifier '" + t.lexeme + "'";
      case TokenKind::Keyword: return "keyword '" + t.lexeme + "'";
      default: return "'" + t.lexeme + "'";
    }
  }

  [[noreturn]] void fail(const std::string& expected) const {
    throw ParseError(peek().pos, expected, describe(peek()));
  }

  const Token& expect(TokenKind k) {
    if (!peek().is(k)) fail(std::string(token_kind_name(k)));
    return take();
  }
  void expect_keyword(std::string_view w) {
    if (!peek().is_keyword(w)) fail("'" + std::string(w) + "'");
    take();
  }
  std::string identifier(const char* what = "an identifier") {
    if (!peek().is(TokenKind::Identifier)) fail(what);
    return take().lexeme;
  }
  std::string word(const char* what = "a name") {
    if (!peek().is_word()) fail(what);
    return take().lexeme;
  }
  /// Contextual keyword spelled as an identifier (e.g. `location`).
  bool at_contextual(std::string_view w) const {
    return peek().is(TokenKind::Identifier) && peek().lexeme == w;
  }

  // -- types ---------------------------------------------------------------

  std::optional<BasicType> basic_type_here() const {
    if (peek().kind != TokenKind::Keyword) return std::nullopt;
    return basic_type_from_name(peek().lexeme);
  }

  TypeDecl type_decl() {
    TypeDecl t;
    t.pos = peek().pos;
    expect_keyword("type");
    t.name = identifier("a type name");
    bool has_body = false;
    if (accept(TokenKind::Colon)) {
      auto b = basic_type_here();
      if (!b) fail("a basic type");
      take();
      t.root = *b;
      has_body = true;
    }
    if (peek().is(TokenKind::LBrace)) {
      t.fields = field_block(false);
      has_body = true;
    }
    if (!has_body) fail("':' or '{'");
    return t;
  }

  std::vector<FieldDecl> field_block(bool nested) {
    expect(TokenKind::LBrace);
    std::vector<FieldDecl> fields;
    while (!accept(TokenKind::RBrace)) {
      FieldDecl f;
      f.pos = peek().pos;
      f.name = word("a field name or '}'");
      if (accept(TokenKind::Question)) {
        f.cardinality = Cardinality::Optional;
      } else if (accept(TokenKind::Star)) {
        f.cardinality = Cardinality::Many;
      }
      expect(TokenKind::Colon);
      f.type = field_type(nested);
      fields.push_back(std::move(f));
      accept(TokenKind::Comma);
    }
    return fields;
  }

  TypeRef field_type(bool nested) {
    TypeRef r;
    r.pos = peek().pos;
    if (auto b = basic_type_here()) {
      take();
      r.basic = *b;
      if (peek().is(TokenKind::LBrace)) {
        if (nested) fail("a field type (inline types nest at most one level)");
        r.kind = TypeRef::Kind::Inline;
        r.fields = field_block(true);
      }
      return r;
    }
    if (peek().is(TokenKind::LBrace)) {
      if (nested) fail("a field type (inline types nest at most one level)");
      r.kind = TypeRef::Kind::Inline;
      r.fields = field_block(true);
      return r;
    }
    r.kind = TypeRef::Kind::Named;
    r.name = identifier("a type");
    return r;
  }

  TypeRef message_type() {
    TypeRef r;
    r.pos = peek().pos;
    if (auto b = basic_type_here()) {
      take();
      r.basic = *b;
      return r;
    }
    r.kind = TypeRef::Kind::Named;
    r.name = identifier("a type");
    return r;
  }

  // -- interfaces ----------------------------------------------------------

  InterfaceDecl interface_decl() {
    InterfaceDecl d;
    d.pos = peek().pos;
    expect_keyword("interface");
    d.name = identifier("an interface name");
    expect(TokenKind::LBrace);
    while (!accept(TokenKind::RBrace)) {
      bool rr = false;
      if (accept_keyword("RequestResponse")) {
        rr = true;
      } else if (!accept_keyword("OneWay")) {
        fail("'RequestResponse', 'OneWay' or '}'");
      }
      expect(TokenKind::Colon);
      if (!peek().is(TokenKind::Identifier)) continue;  // empty section
      do {
        OperationDecl op;
        op.pos = peek().pos;
        op.name = identifier("an operation name");
        expect(TokenKind::LParen);
        op.request = message_type();
        expect(TokenKind::RParen);
        if (rr) {
          expect(TokenKind::LParen);
          op.response = message_type();
          expect(TokenKind::RParen);
          d.request_responses.push_back(std::move(op));
        } else {
          d.one_ways.push_back(std::move(op));
        }
      } while (accept(TokenKind::Comma));
    }
    return d;
  }

  // -- services ------------------------------------------------------------

  ServiceDecl service_decl() {
    ServiceDecl s;
    s.pos = peek().pos;
    expect_keyword("service");
    s.name = identifier("a service name");
    expect(TokenKind::LParen);
    if (peek().is(TokenKind::Identifier)) {
      ConfigParam c;
      c.pos = peek().pos;
      c.name = take().lexeme;
      if (accept(TokenKind::Colon)) c.type_name = identifier("a configuration type name");
      s.config = std::move(c);
    }
    expect(TokenKind::RParen);
    expect(TokenKind::LBrace);
    bool seen_execution = false;
    bool seen_main = false;
    s.behavior = Block{};
    while (!accept(TokenKind::RBrace)) {
      if (accept(TokenKind::Ellipsis)) continue;
      if (peek().is_keyword("execution")) {
        if (seen_execution) fail("at most one 'execution' clause");
        seen_execution = true;
        take();
        expect(TokenKind::Colon);
        if (!peek().is(TokenKind::Identifier)) fail("'concurrent', 'sequential' or 'single'");
        const std::string& m = peek().lexeme;
        if (m == "concurrent") {
          s.mode = ExecutionMode::Concurrent;
        } else if (m == "sequential") {
          s.mode = ExecutionMode::Sequential;
        } else if (m == "single") {
          s.mode = ExecutionMode::Single;
        } else {
          fail("'concurrent', 'sequential' or 'single'");
        }
        take();
      } else if (peek().is_keyword("inputPort") || peek().is_keyword("outputPort")) {
        s.ports.push_back(port_decl());
      } else if (peek().is_keyword("main")) {
        if (seen_main) fail("at most one 'main' block");
        seen_main = true;
        take();
        s.behavior = behavior();
      } else {
        fail("'execution', 'inputPort', 'outputPort', 'main' or '}'");
      }
    }
    return s;
  }

  PortDecl port_decl() {
    PortDecl p;
    p.pos = peek().pos;
    p.kind = take().lexeme == "inputPort" ? PortKind::Input : PortKind::Output;
    p.name = identifier("a port name");
    expect(TokenKind::LBrace);
    bool has_location = false;
    while (!peek().is(TokenKind::RBrace)) {
      if (at_contextual("location")) {
        if (has_location) fail("a single 'location' entry");
        take();
        expect(TokenKind::Colon);
        p.location = expression();
        has_location = true;
      } else if (at_contextual("protocol")) {
        if (p.protocol) fail("a single 'protocol' entry");
        take();
        expect(TokenKind::Colon);
        Protocol proto;
        proto.name = identifier("a protocol name");
        if (accept(TokenKind::LBrace)) {
          while (!accept(TokenKind::RBrace)) {
            ProtocolParam param;
            param.name = word("a protocol parameter");
            expect(TokenKind::Assign);
            param.value = expression();
            proto.params.push_back(std::move(param));
            if (!accept(TokenKind::Comma)) accept(TokenKind::Semicolon);
          }
        }
        p.protocol = std::move(proto);
      } else if (at_contextual("interfaces")) {
        if (!p.interfaces.empty()) fail("a single 'interfaces' entry");
        p.interfaces_pos = peek().pos;
        take();
        expect(TokenKind::Colon);
        do {
          p.interfaces.push_back(identifier("an interface name"));
        } while (accept(TokenKind::Comma));
      } else {
        fail("'location', 'protocol', 'interfaces' or '}'");
      }
    }
    if (!has_location) fail("'location' (ports require a location)");
    if (p.interfaces.empty()) fail("'interfaces' (ports require at least one interface)");
    take();  // '}'
    return p;
  }

  Behavior behavior() {
    expect(TokenKind::LBrace);
    if (!peek().is(TokenKind::LBracket)) {
      Block b = statements_until_brace();
      expect(TokenKind::RBrace);
      return b;
    }
    InputChoice choice;
    while (!accept(TokenKind::RBrace)) {
      InputBranch br;
      br.pos = peek().pos;
      expect(TokenKind::LBracket);
      br.operation = identifier("an operation name");
      expect(TokenKind::LParen);
      if (!peek().is(TokenKind::RParen)) br.request = path();
      expect(TokenKind::RParen);
      if (accept(TokenKind::LParen)) {
        br.request_response = true;
        if (!peek().is(TokenKind::RParen)) br.response = path();
        expect(TokenKind::RParen);
      }
      br.body = block();
      expect(TokenKind::RBracket);
      choice.branches.push_back(std::move(br));
    }
    return choice;
  }

  // -- statements ----------------------------------------------------------

  Block block() {
    expect(TokenKind::LBrace);
    Block b = statements_until_brace();
    expect(TokenKind::RBrace);
    return b;
  }

  Block statements_until_brace() {
    Block b;
    while (!peek().is(TokenKind::RBrace)) {
      if (accept(TokenKind::Semicolon)) continue;
      b.statements.push_back(statement());
    }
    return b;
  }

  Block body() {
    if (peek().is(TokenKind::LBrace)) return block();
    Block b;
    b.statements.push_back(statement());
    return b;
  }

  Stmt statement() {
    Stmt s;
    s.pos = peek().pos;
    if (accept_keyword("if")) {
      IfStmt st;
      expect(TokenKind::LParen);
      st.condition = expression();
      expect(TokenKind::RParen);
      st.then_block = body();
      if (accept_keyword("else")) st.else_block = body();
      s.node = std::move(st);
    } else if (accept_keyword("while")) {
      WhileStmt st;
      expect(TokenKind::LParen);
      st.condition = expression();
      expect(TokenKind::RParen);
      st.body = body();
      s.node = std::move(st);
    } else if (accept_keyword("throw")) {
      ThrowStmt st;
      expect(TokenKind::LParen);
      st.fault = identifier("a fault name");
      if (accept(TokenKind::Comma)) st.data = expression();
      expect(TokenKind::RParen);
      s.node = std::move(st);
    } else if (accept_keyword("synchronized")) {
      SynchronizedStmt st;
      expect(TokenKind::LParen);
      st.token = identifier("a lock name");
      expect(TokenKind::RParen);
      st.body = block();
      s.node = std::move(st);
    } else if (peek().is(TokenKind::Identifier) && peek(1).is(TokenKind::At)) {
      std::string op = take().lexeme;
      take();  // '@'
      std::string port = identifier("a port name");
      expect(TokenKind::LParen);
      std::optional<Expr> payload;
      if (!peek().is(TokenKind::RParen)) payload = expression();
      expect(TokenKind::RParen);
      if (accept(TokenKind::LParen)) {
        SolicitStmt st{std::move(op), std::move(port), std::move(payload), std::nullopt};
        if (!peek().is(TokenKind::RParen)) st.response = path();
        expect(TokenKind::RParen);
        s.node = std::move(st);
      } else {
        s.node = NotifyStmt{std::move(op), std::move(port), std::move(payload)};
      }
    } else if (peek().is(TokenKind::Identifier) && peek(1).is(TokenKind::LParen)) {
      ReceiveStmt st;
      st.operation = take().lexeme;
      take();  // '('
      if (!peek().is(TokenKind::RParen)) st.target = path();
      expect(TokenKind::RParen);
      s.node = std::move(st);
    } else if (peek().is_word() && !peek().is_keyword("else")) {
      AssignStmt st;
      st.target = path();
      expect(TokenKind::Assign);
      st.value = expression();
      s.node = std::move(st);
    } else {
      fail("a statement");
    }
    return s;
  }

  // -- expressions ---------------------------------------------------------

  Path path() {
    Path p;
    p.pos = peek().pos;
    p.steps.push_back(path_step());
    while (accept(TokenKind::Dot)) p.steps.push_back(path_step());
    return p;
  }

  PathStep path_step() {
    PathStep step;
    step.name = word("a variable name");
    if (accept(TokenKind::LBracket)) {
      step.index = expression();
      expect(TokenKind::RBracket);
    }
    return step;
  }

  Expr expression() { return binary(0); }

  static int precedence(TokenKind k) {
    switch (k) {
      case TokenKind::OrOr: return 1;
      case TokenKind::AndAnd: return 2;
      case TokenKind::Equal:
      case TokenKind::NotEqual:
      case TokenKind::Less:
      case TokenKind::LessEqual:
      case TokenKind::Greater:
      case TokenKind::GreaterEqual: return 3;
      case TokenKind::Plus:
      case TokenKind::Minus: return 4;
      case TokenKind::Star:
      case TokenKind::Slash: return 5;
      default: return 0;
    }
  }

  static BinaryOp to_binary(TokenKind k) {
    switch (k) {
      case TokenKind::OrOr: return BinaryOp::Or;
      case TokenKind::AndAnd: return BinaryOp::And;
      case TokenKind::Equal: return BinaryOp::Equal;
      case TokenKind::NotEqual: return BinaryOp::NotEqual;
      case TokenKind::Less: return BinaryOp::Less;
      case TokenKind::LessEqual: return BinaryOp::LessEqual;
      case TokenKind::Greater: return BinaryOp::Greater;
      case TokenKind::GreaterEqual: return BinaryOp::GreaterEqual;
      case TokenKind::Plus: return BinaryOp::Add;
      case TokenKind::Minus: return BinaryOp::Sub;
      case TokenKind::Star: return BinaryOp::Mul;
      default: return BinaryOp::Div;
    }
  }

  // Precedence climbing; all binary operators are left-associative.
  Expr binary(int min_prec) {
    Expr lhs = unary();
    for (;;) {
      int prec = precedence(peek().kind);
      if (prec == 0 || prec <= min_prec) break;
      SourcePos pos = lhs.pos;
      BinaryOp op = to_binary(take().kind);
      Expr rhs = binary(prec);
      Expr e;
      e.pos = pos;
      e.node = BinaryExpr{op, std::move(lhs), std::move(rhs)};
      lhs = std::move(e);
    }
    return lhs;
  }

  Expr unary() {
    Expr e;
    e.pos = peek().pos;
    if (accept(TokenKind::Bang)) {
      e.node = UnaryExpr{UnaryOp::Not, unary()};
    } else if (accept(TokenKind::Minus)) {
      e.node = UnaryExpr{UnaryOp::Negate, unary()};
    } else {
      return primary();
    }
    return e;
  }

  Expr primary() {
    Expr e;
    e.pos = peek().pos;
    const Token& t = peek();
    switch (t.kind) {
      case TokenKind::IntLiteral:
        e.node = LiteralExpr{static_cast<std::int32_t>(take().int_value)};
        return e;
      case TokenKind::LongLiteral:
        e.node = LiteralExpr{take().int_value};
        return e;
      case TokenKind::DoubleLiteral:
        e.node = LiteralExpr{take().double_value};
        return e;
      case TokenKind::StringLiteral:
        e.node = LiteralExpr{take().string_value};
        return e;
      case TokenKind::LParen: {
        take();
        Expr inner = expression();
        expect(TokenKind::RParen);
        return inner;
      }
      case TokenKind::Hash:
        take();
        e.node = CountExpr{path()};
        return e;
      case TokenKind::LBrace: {
        take();
        TreeLiteralExpr tree;
        while (!accept(TokenKind::RBrace)) {
          Path p = path();
          expect(TokenKind::Assign);
          tree.entries.push_back(TreeEntry{std::move(p), expression()});
          accept(TokenKind::Comma);
        }
        e.node = std::move(tree);
        return e;
      }
      default: break;
    }
    if (t.is_keyword("true") || t.is_keyword("false")) {
      e.node = LiteralExpr{take().lexeme == "true"};
      return e;
    }
    if (t.is_word()) {
      e.node = PathExpr{path()};
      return e;
    }
    fail("an expression");
  }

  const std::vector<Token>& toks_;
  std::size_t pos_ = 0;
  Token end_;
};

}  // namespace

SourceProgram parse_program(const std::vector<Token>& tokens, std::string source_name) {
  return Parser(tokens).program(std::move(source_name));
}

SourceProgram parse_source(std::string_view source, std::string source_name) {
  return parse_program(tokenize(source), std::move(source_name));
}

Expr parse_expression(std::string_view source) {
  auto tokens = tokenize(source);
  return Parser(tokens).standalone_expression();
}

}  // namespace monoslice
