#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "generators.hpp"
#include "monoslice/parser.hpp"
#include "monoslice/render.hpp"
#include "monoslice/slicer.hpp"
#include "process.hpp"

using namespace monoslice;

namespace {

CheckedProgram checked_from(std::string_view text) {
  auto r = resolve(parse_source(text));
  EXPECT_TRUE(r.ok()) << (r.errors.empty() ? "" : r.errors[0].message);
  return std::move(*r.checked);
}

CheckedProgram fixture() {
  return checked_from(testkit::read_text(std::string(MONOSLICE_FIXTURE_DIR) + "/smart-city.ol"));
}

std::vector<std::string> names(const SourceProgram& p) {
  std::vector<std::string> out;
  for (const auto& d : p.declarations) out.push_back(declaration_name(d));
  return out;
}

bool is_service(const Declaration& d) { return std::holds_alternative<ServiceDecl>(d); }

/// Type and interface declarations whose removal makes the program fail to resolve.
std::set<std::string> removal_breaks(const SourceProgram& p) {
  std::set<std::string> out;
  for (std::size_t i = 0; i < p.declarations.size(); ++i) {
    if (is_service(p.declarations[i])) continue;
    SourceProgram q = p;
    q.declarations.erase(q.declarations.begin() + static_cast<std::ptrdiff_t>(i));
    if (!resolve(std::move(q)).clean()) out.insert(declaration_name(p.declarations[i]));
  }
  return out;
}

std::set<std::string> non_service_names(const SourceProgram& p) {
  std::set<std::string> out;
  for (const auto& d : p.declarations) {
    if (!is_service(d)) out.insert(declaration_name(d));
  }
  return out;
}

/// Repeatedly drops any type or interface whose removal keeps the program resolvable.
std::set<std::string> greedily_removable(SourceProgram p) {
  std::set<std::string> removed;
  bool progress = true;
  while (progress) {
    progress = false;
    for (std::size_t i = 0; i < p.declarations.size(); ++i) {
      if (is_service(p.declarations[i])) continue;
      SourceProgram q = p;
      q.declarations.erase(q.declarations.begin() + static_cast<std::ptrdiff_t>(i));
      if (resolve(q).clean()) {
        removed.insert(declaration_name(p.declarations[i]));
        p = std::move(q);
        progress = true;
        break;
      }
    }
  }
  return removed;
}

}  // namespace

TEST(Dependencies, CommandSide) {
  CheckedProgram p = fixture();
  DependencySet d = compute_dependencies(p, "CommandSide");
  EXPECT_EQ(d.interfaces, (std::set<std::string>{"CommandSideInterface", "EventStoreInterface"}));
  for (const char* t : {"PAID", "ParkingArea", "ParkingAreaInformation", "TimePeriod", "ChargingSpeed", "Location"}) {
    EXPECT_TRUE(d.types.count(t)) << t;
  }
  EXPECT_FALSE(d.types.count("ParkingAreaList"));
}

TEST(Dependencies, NoPortsUntypedConfigIsEmpty) {
  CheckedProgram p = checked_from("type T:int service S( config ) { main { } }");
  DependencySet d = compute_dependencies(p, "S");
  EXPECT_TRUE(d.types.empty());
  EXPECT_TRUE(d.interfaces.empty());
}

TEST(Dependencies, DeclaredConfigTypeIsASeed) {
  CheckedProgram p = checked_from("type C { x:D } type D:string type U:int service S( config:C ) { main { } }");
  EXPECT_EQ(compute_dependencies(p, "S").types, (std::set<std::string>{"C", "D"}));
}

TEST(Dependencies, TypeCycleTerminates) {
  CheckedProgram p = checked_from(R"(
type A { b:B }
type B { a?:A c*:C }
type C { a?:A }
interface I { OneWay: f( A ) }
service S() { inputPort P { location: "local://s" interfaces: I } main { [ f( x ) { } ] } }
)");
  DependencySet d = compute_dependencies(p, "S");
  EXPECT_EQ(d.types, (std::set<std::string>{"A", "B", "C"}));
  EXPECT_EQ(d.interfaces, (std::set<std::string>{"I"}));
}

TEST(Dependencies, UnknownService) {
  CheckedProgram p = fixture();
  try {
    compute_dependencies(p, "Nope");
    FAIL();
  } catch (const SliceError& e) {
    EXPECT_EQ(e.code(), "UnknownService");
  }
  EXPECT_THROW(slice(p, "Nope"), SliceError);
}

TEST(Slice, EventStoreKeepsEventTypesOnly) {
  SourceProgram s = slice(fixture(), "EventStore");
  auto n = names(s);
  auto has = [&](const char* x) { return std::find(n.begin(), n.end(), x) != n.end(); };
  EXPECT_TRUE(has("EventStoreInterface"));
  EXPECT_TRUE(has("Event"));
  EXPECT_TRUE(has("EventList"));
  EXPECT_TRUE(has("Subscription"));
  EXPECT_FALSE(has("CommandSideInterface"));
  EXPECT_FALSE(has("QuerySideInterface"));
  EXPECT_EQ(removal_breaks(s), non_service_names(s));
}

TEST(Slice, CommandSideResolvesStandalone) {
  SourceProgram s = slice(fixture(), "CommandSide");
  EXPECT_TRUE(resolve(s).ok());
  EXPECT_TRUE(resolve(parse_source(render(s))).ok());
  EXPECT_EQ(s.services().size(), 1u);
}

TEST(Slice, SingleServiceProgramIsUnchanged) {
  const char* text = R"(
type Id:long
type Item { id:Id tags*:string }
interface Store { RequestResponse: get( Id )( Item ) OneWay: drop( Id ) }
service Shop( config:Item ) {
  inputPort In { location: "local://shop" interfaces: Store }
  main { [ get( id )( item ) { item.id = id } ] [ drop( id ) { } ] }
}
)";
  CheckedProgram p = checked_from(text);
  EXPECT_EQ(render(slice(p, "Shop")), render(p.program()));
  EXPECT_EQ(slice_all(p).size(), 1u);
}

TEST(SliceAll, FixtureHasFourSlices) {
  SliceSet set = slice_all(fixture());
  ASSERT_EQ(set.size(), 4u);
  std::vector<std::string> order;
  for (const auto& s : set.slices) order.push_back(s.service);
  EXPECT_EQ(order, (std::vector<std::string>{"CommandSide", "QuerySide", "EventStore", "TestClient"}));
  ASSERT_NE(set.find("TestClient"), nullptr);
  EXPECT_EQ(set.find("Nobody"), nullptr);
}

TEST(SliceAll, NoServices) {
  try {
    slice_all(checked_from("type T:int"));
    FAIL();
  } catch (const SliceError& e) {
    EXPECT_EQ(e.code(), "NoServices");
  }
}

TEST(SliceAll, DeterministicRendering) {
  CheckedProgram a = fixture();
  CheckedProgram b = fixture();
  SliceSet x = slice_all(a);
  SliceSet y = slice_all(b);
  ASSERT_EQ(x.size(), y.size());
  for (std::size_t i = 0; i < x.size(); ++i) EXPECT_EQ(render(x.slices[i].program), render(y.slices[i].program));
}

TEST(SliceProperty, SoundMinimalOrderedAndWithinDependencies) {
  testkit::Rng rng(29);
  for (int n = 0; n < 100; ++n) {
    SourceProgram program = testkit::random_program(rng);
    auto r = resolve(program);
    ASSERT_TRUE(r.ok());
    const CheckedProgram& checked = *r.checked;
    std::vector<std::string> monolith = names(checked.program());
    std::set<std::string> slice_union;
    for (const auto& s : slice_all(checked).slices) {
      ASSERT_TRUE(resolve(s.program).clean()) << "case " << n << " " << s.service;
      EXPECT_EQ(removal_breaks(s.program), non_service_names(s.program)) << "case " << n << " " << s.service;

      std::vector<std::size_t> positions;
      for (const auto& name : names(s.program)) {
        positions.push_back(static_cast<std::size_t>(
            std::find(monolith.begin(), monolith.end(), name) - monolith.begin()));
      }
      EXPECT_TRUE(std::is_sorted(positions.begin(), positions.end())) << "case " << n;

      DependencySet deps = compute_dependencies(checked, s.service);
      for (const auto& d : s.program.declarations) {
        const std::string& name = declaration_name(d);
        if (is_service(d)) {
          EXPECT_EQ(name, s.service);
        } else if (std::holds_alternative<TypeDecl>(d)) {
          EXPECT_TRUE(deps.types.count(name)) << name;
        } else {
          EXPECT_TRUE(deps.interfaces.count(name)) << name;
        }
      }
      auto mine = non_service_names(s.program);
      slice_union.insert(mine.begin(), mine.end());
    }
    for (const auto& unused : greedily_removable(checked.program())) {
      EXPECT_FALSE(slice_union.count(unused)) << "case " << n << ": " << unused;
    }
  }
}
