#include <doctest.h>

#include <map>
#include <random>
#include <set>

#include "mebnrm/assertions.hpp"
#include "mebnrm/error.hpp"
#include "mebnrm/ingest.hpp"
#include "mebnrm/mapper.hpp"
#include "support.hpp"

using namespace mebnrm;

namespace {

RelationalDatabaseSchema vehicle() {
  return parse_schema_dsl(support::fixture("vehicle_identification.rdbs"));
}

std::set<std::string> lines(const std::vector<Assertion>& as) {
  std::set<std::string> out;
  for (const auto& a : as) out.insert(format_assertion(a));
  return out;
}

std::vector<Assertion> only(const std::vector<Assertion>& as, const std::string& name) {
  std::vector<Assertion> out;
  for (const auto& a : as) {
    if (a.node_name == name) out.push_back(a);
  }
  return out;
}

/// Follow over vehicles v1..vN with the given edges, built in memory.
RelationalDatabase follow_db(std::size_t vehicles, const std::vector<std::pair<int, int>>& edges) {
  RelationalDatabase db;
  db.schema = parse_schema_dsl("S[Vehicle[VehicleID*], Follow[A*/Vehicle, B*/Vehicle]]");
  db.instances = {{"Vehicle", {}}, {"Follow", {}}};
  for (std::size_t i = 1; i <= vehicles; ++i) {
    db.instances[0].rows.push_back({"v" + std::to_string(i)});
  }
  for (const auto& [a, b] : edges) {
    db.instances[1].rows.push_back({"v" + std::to_string(a), "v" + std::to_string(b)});
  }
  return db;
}

}  // namespace

TEST_CASE("formatting") {
  CHECK(format_assertion({"Follow", {"v1", "v2"}, "true"}) == "Follow(v1,v2)=true");
  CHECK(format_assertion({"Note", {"a b"}, "x=y"}) == "Note(\"a b\")=\"x=y\"");
  CHECK(format_assertion({"Q", {"say \"hi\""}, ""}) == "Q(\"say \"\"hi\"\"\")=\"\"");
  CHECK(format_assertions({{"A", {"x"}, "1"}, {"B", {"y"}, "2"}}) == "A(x)=1\nB(y)=2\n");
}

TEST_CASE("Follow instance yields exactly two true assertions") {
  const auto schema = vehicle();
  const auto db = load_instances(support::fixture_path("vehicle_data"), schema);
  const auto t = map_rdbs_to_mtheory(schema);
  const auto follow = only(map_instances(db, t, {}), "Follow");
  CHECK(lines(follow) == std::set<std::string>{"Follow(v1,v2)=true", "Follow(v2,v3)=true"});
  CHECK(follow.size() == 2);
}

TEST_CASE("function cells and nulls") {
  const auto schema = vehicle();
  const auto db = load_instances(support::fixture_path("vehicle_data"), schema);
  const auto all = lines(map_instances(db, map_rdbs_to_mtheory(schema), {}));
  CHECK(all.count("Location(v1,t1)=r1") == 1);
  CHECK(all.count("VehicleClass(v1)=wheeled") == 1);
  CHECK(all.count("TerrainType(r1)=off-road") == 1);
  for (const auto& line : all) CHECK(line.rfind("ContainingRegion(r1)=", 0) != 0);
  CHECK(all.count("ContainingRegion(r1_1)=r1") == 1);
}

TEST_CASE("output order: MFrag, then row, then attribute") {
  const auto schema = vehicle();
  const auto db = load_instances(support::fixture_path("vehicle_data"), schema);
  const auto as = map_instances(db, map_rdbs_to_mtheory(schema), {});
  REQUIRE(as.size() >= 9);
  CHECK(format_assertion(as[0]) == "VehicleClass(v1)=wheeled");
  CHECK(format_assertion(as[6]) == "TerrainType(r1)=off-road");
  CHECK(format_assertion(as[7]) == "TerrainType(r1_1)=road");
  CHECK(format_assertion(as[8]) == "ContainingRegion(r1_1)=r1");
  CHECK(format_assertion(as.back()) == "Follow(v2,v3)=true");
}

TEST_CASE("prefixes carry over to assertion names") {
  const auto schema = parse_schema_dsl("S[A[AID*, Name], B[BID*, Name]]");
  RelationalDatabase db{schema, {{"A", {{"a1", "x"}}}, {"B", {{"b1", "y"}}}}};
  MappingConfig config;
  config.prefix_policy = PrefixPolicy::Auto;
  const auto t = map_rdbs_to_mtheory(schema, config);
  CHECK(lines(map_instances(db, t, config)) == std::set<std::string>{"A_Name(a1)=x", "B_Name(b1)=y"});
}

TEST_CASE("mismatched theory and database") {
  const auto schema = vehicle();
  const auto db = load_instances(support::fixture_path("vehicle_data"), schema);
  auto t = map_rdbs_to_mtheory(schema);
  t.mfrags[0].resident_nodes[0].arguments.push_back("extra");
  CHECK_THROWS_AS(map_instances(db, t, {}), Error);
  t = map_rdbs_to_mtheory(schema);
  t.mfrags[0].name = "Ghost";
  try {
    map_instances(db, t, {});
    FAIL("expected SchemaMismatch");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::SchemaMismatch);
  }
}

TEST_CASE("closed world: seven false Follow assertions over three vehicles") {
  const auto db = follow_db(3, {{1, 2}, {2, 3}});
  MappingConfig config;
  config.closed_world = true;
  const auto t = map_rdbs_to_mtheory(db.schema, config);
  const auto negatives = enumerate_false_assertions(db, t, config);
  CHECK(negatives.size() == 7);
  CHECK(lines(negatives).count("Follow(v1,v1)=false") == 1);
  CHECK(lines(negatives).count("Follow(v1,v2)=false") == 0);
}

TEST_CASE("closed world: empty universe and full relation") {
  MappingConfig config;
  config.closed_world = true;
  auto db = follow_db(0, {});
  CHECK(enumerate_false_assertions(db, map_rdbs_to_mtheory(db.schema), config).empty());
  db = follow_db(2, {{1, 1}, {1, 2}, {2, 1}, {2, 2}});
  CHECK(enumerate_false_assertions(db, map_rdbs_to_mtheory(db.schema), config).empty());
}

TEST_CASE("closed world must be requested") {
  const auto db = follow_db(3, {});
  try {
    enumerate_false_assertions(db, map_rdbs_to_mtheory(db.schema), {});
    FAIL("expected OpenWorldRequested");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::OpenWorldRequested);
  }
}

TEST_CASE("closed world needs an entity universe for every argument") {
  const auto db = follow_db(2, {});
  auto t = map_rdbs_to_mtheory(db.schema);
  t.mfrags[0].context_nodes[0].variable.entity = "DRONE";
  MappingConfig config;
  config.closed_world = true;
  try {
    enumerate_false_assertions(db, t, config);
    FAIL("expected UnboundedEntitySet");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::UnboundedEntitySet);
  }
}

TEST_CASE("property: closed-world partition against a Cartesian oracle") {
  std::mt19937_64 rng(41);
  MappingConfig config;
  config.closed_world = true;
  for (int trial = 0; trial < 200; ++trial) {
    // Two entity types and a mixed-type binary predicate plus a unary one.
    const auto people = support::pick(rng, 0, 5);
    const auto places = support::pick(rng, 0, 4);
    RelationalDatabase db;
    db.schema = parse_schema_dsl(
        "S[Person[PersonID*], Place[PlaceID*, Kind], Visits[Who*/Person, Where*/Place], "
        "Happy[Who*/Person]]");
    db.instances = {{"Person", {}}, {"Place", {}}, {"Visits", {}}, {"Happy", {}}};
    for (std::size_t i = 0; i < people; ++i) db.instances[0].rows.push_back({"p" + std::to_string(i)});
    for (std::size_t i = 0; i < places; ++i) {
      db.instances[1].rows.push_back({"l" + std::to_string(i), std::nullopt});
    }
    std::set<std::pair<std::size_t, std::size_t>> visits;
    for (std::size_t i = 0; i < people; ++i) {
      for (std::size_t j = 0; j < places; ++j) {
        if (support::pick(rng, 0, 2) == 0) {
          visits.insert({i, j});
          db.instances[2].rows.push_back({"p" + std::to_string(i), "l" + std::to_string(j)});
        }
      }
      if (support::pick(rng, 0, 1)) db.instances[3].rows.push_back({"p" + std::to_string(i)});
    }
    validate_database(db);
    const auto t = map_rdbs_to_mtheory(db.schema, config);
    const auto positives = map_instances(db, t, config);
    const auto negatives = enumerate_false_assertions(db, t, config);

    std::set<std::string> oracle_false;
    for (std::size_t i = 0; i < people; ++i) {
      for (std::size_t j = 0; j < places; ++j) {
        if (!visits.count({i, j})) {
          oracle_false.insert("Visits(p" + std::to_string(i) + ",l" + std::to_string(j) + ")=false");
        }
      }
    }
    const auto happy = db.instances[3].rows.size();
    CHECK(lines(only(negatives, "Visits")) == oracle_false);
    CHECK(only(negatives, "Happy").size() == people - happy);
    CHECK(only(positives, "Visits").size() + only(negatives, "Visits").size() == people * places);

    std::map<std::pair<std::string, std::vector<std::string>>, std::string> seen;
    for (const auto* group : {&positives, &negatives}) {
      for (const auto& a : *group) {
        auto [it, inserted] = seen.emplace(std::make_pair(a.node_name, a.arguments), a.value);
        CHECK((inserted || it->second == a.value));
        CHECK(inserted);
      }
    }
  }
}

TEST_CASE("property: function assertions read back the cell") {
  const auto schema = vehicle();
  const auto db = load_instances(support::fixture_path("vehicle_data"), schema);
  const auto t = map_rdbs_to_mtheory(schema);
  std::map<std::string, std::size_t> arity;
  for (const auto& f : t.mfrags) {
    for (const auto& r : f.resident_nodes) arity[r.name] = r.arguments.size();
  }
  for (const auto& a : map_instances(db, t, {})) {
    REQUIRE(arity.count(a.node_name) == 1);
    CHECK(arity.at(a.node_name) == a.arguments.size());
    if (a.value == "true") continue;
    bool found = false;
    for (std::size_t r = 0; r < schema.relations.size(); ++r) {
      const auto& rel = schema.relations[r];
      const auto column = rel.index_of(a.node_name);
      if (!column) continue;
      for (const auto& row : db.instances[r].rows) {
        std::vector<std::string> key;
        for (std::size_t c = 0; c < rel.attributes.size(); ++c) {
          if (rel.attributes[c].in_primary_key) key.push_back(*row[c]);
        }
        if (key == a.arguments) found = row[*column] == a.value;
      }
    }
    CHECK(found);
  }
}

TEST_CASE("values outside a declared domain are rejected") {
  RelationalDatabase db;
  db.schema = parse_schema_dsl("S[Vehicle[VehicleID*, VehicleClass:{wheeled, tracked}]]");
  db.instances = {{"Vehicle", {{"v1", "flying"}}}};
  try {
    map_instances(db, map_rdbs_to_mtheory(db.schema), {});
    FAIL("expected DomainViolation");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DomainViolation);
  }
}
