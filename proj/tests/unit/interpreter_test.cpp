#include <gtest/gtest.h>

#include "monoslice/parser.hpp"
#include "runtime_internal.hpp"

using namespace monoslice;
using detail::FaultSignal;

namespace {

/// Runs a statement block as the main body of a throwaway executable service.
class Scope {
 public:
  explicit Scope(const std::string& body, const std::string& config_json = "{}")
      : config_(config_from_text(config_json)), transport_(std::chrono::seconds(2)) {
    auto r = resolve(parse_source(
        "interface I { OneWay: f( int ) RequestResponse: g( int )( int ) }\n"
        "service S( config ) {\n"
        "  outputPort Out { location: \"local://nowhere\" interfaces: I }\n"
        "  main {\n" + body + "\n  }\n}\n"));
    if (!r.ok()) throw std::runtime_error("does not resolve: " + r.errors.at(0).message);
    checked_ = std::move(*r.checked);
    options_.log = [](const std::string&) {};
    const ServiceDecl* decl = checked_.find_service("S");
    instance_ = std::make_shared<detail::ServiceInstance>(checked_, *decl, config_, transport_, options_);
    instance_->bind_config(scope_);
    detail::Interpreter(*instance_, scope_).run(std::get<Block>(decl->behavior));
  }

  const ValueTree& tree() const { return scope_; }
  const ValueTree& at(std::string_view name) const {
    const ValueTree* t = scope_.get(name);
    if (!t) throw std::runtime_error("no variable " + std::string(name));
    return *t;
  }
  Scalar root(std::string_view name) const { return at(name).root().value(); }
  detail::ServiceInstance& instance() { return *instance_; }

 private:
  CheckedProgram checked_;
  ConfigTree config_;
  RuntimeOptions options_;
  detail::Transport transport_;
  std::shared_ptr<detail::ServiceInstance> instance_;
  ValueTree scope_;
};

std::string fault_of(const std::string& body) {
  try {
    Scope s(body);
  } catch (const FaultSignal& f) {
    return f.fault.name;
  }
  return "no fault";
}

Scalar value_of(const std::string& expr) { return Scope("y = " + expr).root("y"); }

Scalar L(std::int64_t v) { return v; }
Scalar I(std::int32_t v) { return v; }

}  // namespace

TEST(Interpreter, IndexedAssignmentCreatesSequence) {
  Scope s(R"(topics[0] = "PA_DELETED")");
  ASSERT_EQ(s.tree().count("topics"), 1u);
  EXPECT_EQ(s.root("topics"), Scalar(std::string("PA_DELETED")));
}

TEST(Interpreter, IndexBeyondLengthExtendsWithEmptyNodes) {
  Scope s("x.a[2] = 1");
  const ValueTree& x = s.at("x");
  ASSERT_EQ(x.count("a"), 3u);
  EXPECT_TRUE(x.get("a", 0)->empty());
  EXPECT_TRUE(x.get("a", 1)->empty());
  EXPECT_EQ(x.get("a", 2)->root(), Scalar(std::int32_t{1}));
}

TEST(Interpreter, IfElse) {
  EXPECT_EQ(Scope("if ( true ) { y = 1 } else { y = 2 }").root("y"), I(1));
  EXPECT_EQ(Scope("if ( 1 > 2 ) { y = 1 } else { y = 2 }").root("y"), I(2));
  EXPECT_EQ(Scope("y = 0 if ( false ) { y = 1 }").root("y"), I(0));
}

TEST(Interpreter, ConditionMustBeBool) {
  EXPECT_EQ(fault_of("if ( 1 ) { y = 1 }"), "TypeMismatch");
  EXPECT_EQ(fault_of("while ( \"x\" ) { y = 1 }"), "TypeMismatch");
  EXPECT_EQ(fault_of("y = !3"), "TypeMismatch");
}

TEST(Interpreter, While) {
  Scope s("i = 0 s = 0 while ( i < 10 ) { s = s + i i = i + 1 }");
  EXPECT_EQ(s.root("s"), I(45));
}

TEST(Interpreter, NumericWidening) {
  EXPECT_EQ(value_of("1 + 2"), I(3));
  EXPECT_EQ(value_of("1 + 2L"), L(3));
  EXPECT_EQ(value_of("7 / 2"), I(3));
  EXPECT_EQ(value_of("7L / 2"), L(3));
  EXPECT_EQ(value_of("1 + 0.5"), Scalar(1.5));
  EXPECT_EQ(value_of("-7 / 2"), I(-3));
  EXPECT_EQ(value_of("2147483647 + 1"), I(-2147483647 - 1));
}

TEST(Interpreter, DivisionByZero) {
  EXPECT_EQ(fault_of("y = 1 / 0"), "DivisionByZero");
  EXPECT_EQ(fault_of("y = 1L / 0"), "DivisionByZero");
}

TEST(Interpreter, Comparisons) {
  EXPECT_EQ(value_of("123L == 123"), Scalar(true));
  EXPECT_EQ(value_of("1 == 1.0"), Scalar(true));
  EXPECT_EQ(value_of("\"a\" < \"b\""), Scalar(true));
  EXPECT_EQ(value_of("\"é\" == \"é\""), Scalar(true));
  EXPECT_EQ(value_of("\"1\" == 1"), Scalar(false));
  EXPECT_EQ(value_of("\"1\" != 1"), Scalar(true));
  EXPECT_EQ(fault_of("y = \"a\" < 1"), "TypeMismatch");
  EXPECT_EQ(value_of("missing == missing"), Scalar(true));
}

TEST(Interpreter, AssertionCondition) {
  Scope s(R"(event.type = "PA_DELETED"
event.id = 123L
bad = event.type != "PA_DELETED" || event.id != 123L
event.id = 124L
bad2 = event.type != "PA_DELETED" || event.id != 123L)");
  EXPECT_EQ(s.root("bad"), Scalar(false));
  EXPECT_EQ(s.root("bad2"), Scalar(true));
}

TEST(Interpreter, ShortCircuit) {
  EXPECT_EQ(value_of("false && 1 / 0 == 1"), Scalar(false));
  EXPECT_EQ(value_of("true || 1 / 0 == 1"), Scalar(true));
}

TEST(Interpreter, StringConcatenation) {
  EXPECT_EQ(value_of("\"id-\" + 5L"), Scalar(std::string("id-5")));
  EXPECT_EQ(value_of("\"a\" + \"b\""), Scalar(std::string("ab")));
}

TEST(Interpreter, CountOperator) {
  Scope s("a[0] = 1 a[1] = 2 a[4] = 3 n = #a m = #nothing k = #a[1]");
  EXPECT_EQ(s.root("n"), I(5));
  EXPECT_EQ(s.root("m"), I(0));
}

TEST(Interpreter, TreeLiteralAndCopySemantics) {
  Scope s(R"(x = { name = "n", tags[1] = "b" }
y = x
y.name = "changed")");
  EXPECT_EQ(s.at("x").get("name")->root(), Scalar(std::string("n")));
  EXPECT_EQ(s.at("x").count("tags"), 2u);
  EXPECT_EQ(s.at("y").get("name")->root(), Scalar(std::string("changed")));
}

TEST(Interpreter, InvalidIndex) {
  EXPECT_EQ(fault_of("a[-1] = 1"), "InvalidIndex");
  EXPECT_EQ(fault_of("a[\"x\"] = 1"), "TypeMismatch");
  EXPECT_EQ(fault_of("a[2000000000] = 1"), "InvalidIndex");
}

TEST(Interpreter, ThrowCarriesData) {
  try {
    Scope s("throw( Custom, \"detail\" )");
    FAIL();
  } catch (const FaultSignal& f) {
    EXPECT_EQ(f.fault.name, "Custom");
    EXPECT_EQ(f.fault.data.root(), Scalar(std::string("detail")));
  }
  EXPECT_EQ(fault_of("throw( AssertionFailed )"), "AssertionFailed");
}

TEST(Interpreter, ConfigIsBound) {
  Scope s("l = config.S.location", R"({"S":{"location":"local://s"}})");
  EXPECT_EQ(s.root("l"), Scalar(std::string("local://s")));
}

TEST(Interpreter, RebindOutputPort) {
  Scope s("Out.location = \"socket://example:81\"");
  EXPECT_EQ(s.instance().output_location("Out"), Location::socket("example", 81));
  EXPECT_EQ(fault_of("Out.location = \"ftp://x\""), "InvalidLocation");
}

TEST(Interpreter, SolicitToUnboundLocalIsTransportError) {
  EXPECT_EQ(fault_of("g@Out( 1 )( r )"), "TransportError");
  EXPECT_EQ(fault_of("f@Out( 1 )"), "TransportError");
}

TEST(Interpreter, GlobalsAndSynchronized) {
  Scope s("synchronized( t ) { global.n = 1 global.n = global.n + 1 } v = global.n");
  EXPECT_EQ(s.root("v"), I(2));
}
