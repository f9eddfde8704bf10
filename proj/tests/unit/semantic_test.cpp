#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "generators.hpp"
#include "monoslice/parser.hpp"
#include "monoslice/semantic.hpp"

using namespace monoslice;

namespace {

std::string fixture_text() {
  std::ifstream in(std::string(MONOSLICE_FIXTURE_DIR) + "/smart-city.ol");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

ResolveResult resolve_text(std::string_view src) { return resolve(parse_source(src)); }

std::vector<std::string> codes(const std::vector<Diagnostic>& ds) {
  std::vector<std::string> out;
  for (const auto& d : ds) out.push_back(d.code);
  return out;
}

/// 1-based line/column of the first occurrence of `needle` at or after `from`.
SourcePos locate(const std::string& text, const std::string& needle, std::size_t from = 0) {
  std::size_t at = text.find(needle, from);
  SourcePos p{1, 1};
  for (std::size_t i = 0; i < at; ++i) {
    if (text[i] == '\n') {
      ++p.line;
      p.column = 1;
    } else {
      ++p.column;
    }
  }
  return p;
}

const char* kPortPrelude = R"(
type T:string
interface RR { RequestResponse: get( T )( T ) }
interface OW { OneWay: put( T ) }
)";

ResolveResult service(const std::string& body) { return resolve_text(std::string(kPortPrelude) + body); }

}  // namespace

TEST(Resolve, FixtureResolvesClean) {
  ResolveResult r = resolve_text(fixture_text());
  ASSERT_TRUE(r.ok()) << (r.errors.empty() ? "" : r.errors[0].message);
  EXPECT_TRUE(r.clean());
  const ServiceDecl* cs = r.checked->find_service("CommandSide");
  ASSERT_NE(cs, nullptr);
  int inputs = 0;
  int outputs = 0;
  for (const auto& p : cs->ports) {
    if (p.kind == PortKind::Input) {
      ++inputs;
      EXPECT_EQ(p.interfaces, std::vector<std::string>{"CommandSideInterface"});
    } else {
      ++outputs;
      EXPECT_EQ(p.name, "EventStore");
    }
  }
  EXPECT_EQ(inputs, 1);
  EXPECT_EQ(outputs, 1);
  auto op = r.checked->port_operation(*cs, "EventStore", "publish");
  ASSERT_TRUE(op);
  EXPECT_EQ(op->interface->name, "EventStoreInterface");
}

TEST(Resolve, SingleScalarType) {
  ResolveResult r = resolve_text("type T:string");
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(r.checked->type_count(), 1u);
  EXPECT_EQ(r.checked->interface_count(), 0u);
  EXPECT_EQ(r.checked->service_count(), 0u);
}

TEST(Resolve, MissingInterfaceReportedAtInterfacesClause) {
  std::string text = fixture_text();
  SourceProgram p = parse_source(text);
  std::erase_if(p.declarations, [](const Declaration& d) {
    return std::holds_alternative<InterfaceDecl>(d) && declaration_name(d) == "CommandSideInterface";
  });
  ResolveResult r = resolve(std::move(p));
  ASSERT_FALSE(r.ok());
  ASSERT_FALSE(r.errors.empty());
  EXPECT_EQ(r.errors[0].code, "UndefinedInterface");
  SourcePos expected = locate(text, "interfaces: CommandSideInterface", text.find("service CommandSide"));
  EXPECT_EQ(r.errors[0].pos.line, expected.line);
  EXPECT_EQ(r.errors[0].pos.column, expected.column);
}

TEST(Resolve, DuplicateDeclarationsPerKind) {
  EXPECT_EQ(codes(resolve_text("type A:int type A:long").errors), std::vector<std::string>{"DuplicateDeclaration"});
  EXPECT_EQ(codes(resolve_text("interface I {} interface I {}").errors),
            std::vector<std::string>{"DuplicateDeclaration"});
  EXPECT_TRUE(resolve_text("type X:int interface X {}").ok());
}

TEST(Resolve, DuplicateField) {
  EXPECT_EQ(codes(resolve_text("type A { x:int x:long }").errors), std::vector<std::string>{"DuplicateField"});
}

TEST(Resolve, UndefinedTypeWithPosition) {
  ResolveResult r = resolve_text("type A {\n  x : Missing\n}");
  ASSERT_EQ(codes(r.errors), std::vector<std::string>{"UndefinedType"});
  EXPECT_EQ(r.errors[0].pos.line, 2);
  EXPECT_EQ(r.errors[0].pos.column, 7);
  EXPECT_EQ(codes(resolve_text("interface I { OneWay: f( Nope ) }").errors), std::vector<std::string>{"UndefinedType"});
}

TEST(Resolve, DuplicateOperationAcrossSections) {
  EXPECT_EQ(codes(resolve_text("interface I { RequestResponse: f( int )( int ) OneWay: f( int ) }").errors),
            std::vector<std::string>{"DuplicateOperation"});
}

TEST(Resolve, RecursiveTypesAreAllowed) {
  EXPECT_TRUE(resolve_text("type Node { value:int next?:Node } type A { b:B } type B { a*:A }").clean());
}

TEST(Resolve, DuplicatePort) {
  auto r = service(R"(service S() {
  inputPort P { location: "local://a" interfaces: RR }
  outputPort P { location: "local://b" interfaces: RR }
  main {} })");
  EXPECT_EQ(codes(r.errors), std::vector<std::string>{"DuplicatePort"});
}

TEST(Resolve, InvalidLocation) {
  auto r = service(R"(service S( cfg ) {
  inputPort A { location: other.x interfaces: RR }
  inputPort B { location: 42 interfaces: RR }
  inputPort C { location: cfg.S.location interfaces: RR }
  main {} })");
  EXPECT_EQ(codes(r.errors), (std::vector<std::string>{"InvalidLocation", "InvalidLocation"}));
}

TEST(Resolve, DuplicateBranch) {
  auto r = service(R"(service S() {
  inputPort P { location: "local://a" interfaces: RR }
  main { [ get( x )( y ) { y = x } ] [ get( x )( y ) { y = x } ] } })");
  EXPECT_EQ(codes(r.errors), std::vector<std::string>{"DuplicateBranch"});
}

TEST(Resolve, UnknownOperationInBranchSolicitAndReceive) {
  auto r = service(R"(service S() {
  inputPort P { location: "local://a" interfaces: OW }
  outputPort O { location: "local://b" interfaces: RR }
  main {
    nothere( x )
    put@O( 1 )
    missing@O()()
  } })");
  EXPECT_EQ(codes(r.errors), (std::vector<std::string>{"UnknownOperation", "UnknownOperation", "UnknownOperation"}));
  auto b = service(R"(service S() {
  inputPort P { location: "local://a" interfaces: RR }
  main { [ nothere( x )( y ) { } ] } })");
  EXPECT_EQ(codes(b.errors), std::vector<std::string>{"UnknownOperation"});
}

TEST(Resolve, OperationKindMismatch) {
  auto r = service(R"(service S() {
  inputPort P { location: "local://a" interfaces: RR, OW }
  main { [ get( x ) { } ] [ put( x )( y ) { } ] } })");
  EXPECT_EQ(codes(r.errors), (std::vector<std::string>{"OperationKindMismatch", "OperationKindMismatch"}));
}

TEST(Resolve, ReceiveRequiresOneWay) {
  auto r = service(R"(service S() {
  inputPort P { location: "local://a" interfaces: RR, OW }
  main { put( m ) 
    get( m ) } })");
  EXPECT_EQ(codes(r.errors), std::vector<std::string>{"UnknownOperation"});
}

TEST(Resolve, UnknownPort) {
  auto r = service(R"(service S() {
  inputPort P { location: "local://a" interfaces: RR }
  main { get@P( 1 )( r )
    get@Nowhere( 1 )( r ) } })");
  EXPECT_EQ(codes(r.errors), (std::vector<std::string>{"UnknownPort", "UnknownPort"}));
}

TEST(Resolve, OnlyLocationOfOutputPortIsAssignable) {
  auto r = service(R"(service S() {
  outputPort O { location: "local://b" interfaces: RR }
  main {
    O.location = "local://c"
    O.other = 1
    O = 2
  } })");
  EXPECT_EQ(codes(r.errors), (std::vector<std::string>{"InvalidPortAccess", "InvalidPortAccess"}));
}

TEST(Resolve, UndeclaredOrMissingConfigTypeIsAWarning) {
  auto typed = resolve_text("service S( config:Configuration ) { main {} }");
  EXPECT_TRUE(typed.ok());
  EXPECT_FALSE(typed.clean());
  EXPECT_EQ(codes(typed.warnings), std::vector<std::string>{"UndeclaredConfigType"});
  auto untyped = resolve_text("service S( config ) { main {} }");
  EXPECT_TRUE(untyped.ok());
  EXPECT_EQ(codes(untyped.warnings), std::vector<std::string>{"UntypedConfig"});
  EXPECT_TRUE(resolve_text("type C {} service S( config:C ) { main {} }").clean());
}

TEST(Resolve, DiagnosticFormat) {
  Diagnostic d{Diagnostic::Severity::Error, "UndefinedType", "type 'X' is not defined", SourcePos{3, 9}};
  EXPECT_EQ(format_diagnostic(d, "p.ol"), "p.ol:3:9: error: UndefinedType: type 'X' is not defined");
  d.severity = Diagnostic::Severity::Warning;
  EXPECT_EQ(format_diagnostic(d, "p.ol"), "p.ol:3:9: warning: UndefinedType: type 'X' is not defined");
}

TEST(ResolveProperty, GeneratedProgramsAreClean) {
  testkit::Rng rng(3);
  for (int i = 0; i < 200; ++i) {
    ResolveResult r = resolve(testkit::random_program(rng));
    ASSERT_TRUE(r.clean()) << "case " << i << ": "
                           << (r.errors.empty() ? r.warnings.at(0).message : r.errors[0].message);
  }
}

TEST(ResolveProperty, OkXorErrors) {
  testkit::Rng rng(5);
  for (int i = 0; i < 200; ++i) {
    SourceProgram p = testkit::random_program(rng);
    if (!p.declarations.empty()) {
      std::uniform_int_distribution<std::size_t> d(0, p.declarations.size() - 1);
      p.declarations.erase(p.declarations.begin() + static_cast<std::ptrdiff_t>(d(rng)));
    }
    ResolveResult r = resolve(p);
    EXPECT_NE(r.ok(), !r.errors.empty());
  }
}

// -- check_value ------------------------------------------------------------

class CheckValue : public ::testing::Test {
 protected:
  void SetUp() override {
    auto r = resolve_text(fixture_text());
    ASSERT_TRUE(r.ok());
    checked_ = std::move(*r.checked);
  }
  std::vector<Violation> check(const ValueTree& t, const char* type) {
    return check_value(t, *checked_.find_type(type), checked_);
  }
  CheckedProgram checked_;
};

TEST_F(CheckValue, LongRootAgainstPaid) {
  EXPECT_TRUE(check(ValueTree(Scalar(std::int64_t{123})), "PAID").empty());
  EXPECT_TRUE(check(ValueTree(Scalar(std::int32_t{123})), "PAID").empty());
  auto v = check(ValueTree(Scalar(std::string("abc"))), "PAID");
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0], (Violation{"", "long", "string"}));
}

TEST_F(CheckValue, EmptyTreeAgainstVoid) {
  TypeRef v;
  v.basic = BasicType::Void;
  EXPECT_TRUE(check_value(ValueTree{}, v, checked_).empty());
  EXPECT_FALSE(check_value(ValueTree(Scalar(true)), v, checked_).empty());
}

TEST_F(CheckValue, MissingNameIsReported) {
  ValueTree info;
  info.at("chargingSpeed").set_root(std::string("fast"));
  info.at("geolocation").at("latitude").set_root(1.5);
  info.at("geolocation").at("longitude").set_root(2.5);
  auto v = check(info, "ParkingAreaInformation");
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0], (Violation{"name", "exactly-one string", "0"}));
}

TEST_F(CheckValue, NestedPathsAndUndeclaredChildren) {
  ValueTree info;
  info.at("name").set_root(std::string("n"));
  info.at("chargingSpeed").set_root(std::string("fast"));
  info.at("geolocation").at("latitude").set_root(1.5);
  info.at("geolocation").at("longitude").set_root(std::string("east"));
  info.at("availability", 1).at("from").set_root(std::string("8"));
  info.at("extra").set_root(true);
  auto v = check(info, "ParkingAreaInformation");
  std::vector<std::string> paths;
  for (const auto& x : v) paths.push_back(x.path);
  EXPECT_EQ(paths, (std::vector<std::string>{"availability.from", "availability.to", "availability[1].to",
                                             "geolocation.longitude", "extra"}));
}

TEST_F(CheckValue, WideningTable) {
  struct Case {
    BasicType type;
    Scalar value;
    bool ok;
  };
  std::vector<Case> cases = {
      {BasicType::Long, std::int32_t{1}, true},    {BasicType::Double, std::int32_t{1}, true},
      {BasicType::Int, std::int64_t{1}, true},     {BasicType::Long, 1.0, false},
      {BasicType::Int, std::int64_t{1} << 31, false}, {BasicType::Int, -(std::int64_t{1} << 31), true},
      {BasicType::Int, 1.0, false},                {BasicType::String, std::int32_t{1}, false},
      {BasicType::Bool, std::string("true"), false}, {BasicType::Any, std::string("x"), true},
      {BasicType::Double, std::int64_t{1}, false},
  };
  for (const auto& c : cases) {
    TypeRef r;
    r.basic = c.type;
    EXPECT_EQ(check_value(ValueTree(c.value), r, checked_).empty(), c.ok)
        << basic_type_name(c.type) << " vs " << to_display(c.value);
  }
}

TEST_F(CheckValue, AnyAcceptsEveryChildlessTree) {
  TypeRef any;
  any.basic = BasicType::Any;
  testkit::Rng rng(1);
  for (int i = 0; i < 200; ++i) {
    ValueTree t = testkit::random_tree(rng, 0);
    EXPECT_TRUE(check_value(t, any, checked_).empty());
  }
  EXPECT_TRUE(check_value(ValueTree{}, any, checked_).empty());
}

TEST_F(CheckValue, CardinalityExhaustive) {
  const Cardinality cards[] = {Cardinality::One, Cardinality::Optional, Cardinality::Many};
  // accepted[cardinality][count]
  const bool accepted[3][3] = {{false, true, false}, {true, true, false}, {true, true, true}};
  for (int c = 0; c < 3; ++c) {
    TypeRef r;
    r.kind = TypeRef::Kind::Inline;
    r.basic = BasicType::Void;
    FieldDecl f;
    f.name = "x";
    f.cardinality = cards[c];
    f.type.basic = BasicType::Int;
    r.fields = {f};
    for (int n = 0; n < 3; ++n) {
      ValueTree t;
      for (int k = 0; k < n; ++k) t.append("x", ValueTree(Scalar(std::int32_t{k})));
      EXPECT_EQ(check_value(t, r, checked_).empty(), accepted[c][n]) << "cardinality " << c << " count " << n;
    }
  }
}

TEST_F(CheckValue, RecursiveTypesTerminate) {
  auto r = resolve_text("type Node { value:int next?:Node }");
  ASSERT_TRUE(r.ok());
  ValueTree t;
  ValueTree* cur = &t;
  for (int i = 0; i < 20; ++i) {
    cur->at("value").set_root(std::int32_t{i});
    cur = &cur->at("next");
  }
  cur->at("value").set_root(std::string("bad"));
  auto v = check_value(t, *r.checked->find_type("Node"), *r.checked);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].path.substr(0, 10), "next.next.");
}
