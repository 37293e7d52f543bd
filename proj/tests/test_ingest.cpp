#include <doctest.h>

#include <filesystem>
#include <random>

#include "mebnrm/error.hpp"
#include "mebnrm/ingest.hpp"
#include "support.hpp"

using namespace mebnrm;
namespace fs = std::filesystem;

namespace {

Error error_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e;
  }
  FAIL("no error thrown");
  return Error(ErrorKind::Io, "unreachable");
}

/// Scratch directory removed on scope exit.
struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) {
    path = fs::temp_directory_path() /
           ("mebnrm_" + tag + "_" + std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  void write(const std::string& name, const std::string& text) const {
    std::ofstream(path / name, std::ios::binary) << text;
  }
};

}  // namespace

TEST_CASE("DSL: the normalized Vehicle Identification schema") {
  const auto s = parse_schema_dsl(
      "VehicleIdentification[Vehicle[VehicleID*, VehicleClass:{wheeled,tracked}], "
      "Region[RegionID*, TerrainType, ContainingRegion/Region], "
      "VehicleLocation[LocatingVehicleID*/Vehicle, LocatingTimeID*/Time, Location/Region], "
      "Time[TimeID*], Follow[FollowingVehicleID*/Vehicle, LeadingVehicleID*/Vehicle]]");
  CHECK(s.name == "VehicleIdentification");
  REQUIRE(s.relations.size() == 5);
  CHECK(s.relations[0].attributes[1].domain ==
        std::vector<std::string>{"wheeled", "tracked"});
  CHECK(s.relations[1].attributes[1].domain == std::nullopt);
  CHECK(*s.relations[1].attributes[2].references == "Region");
  CHECK_FALSE(s.relations[1].attributes[2].in_primary_key);
  CHECK(s.relations[2].attributes[0].in_primary_key);
  CHECK(*s.relations[2].attributes[1].references == "Time");
  CHECK(s.relations[4].name == "Follow");
}

TEST_CASE("DSL: empty schema") {
  const auto s = parse_schema_dsl("S[]");
  CHECK(s.name == "S");
  CHECK(s.relations.empty());
}

TEST_CASE("DSL: errors carry positions") {
  auto e = error_of([] { parse_schema_dsl("S[R[A]]"); });
  CHECK(e.kind() == ErrorKind::NoPrimaryKey);
  REQUIRE(e.location());
  CHECK(e.location()->line == 1);
  CHECK(e.location()->column == 3);

  e = error_of([] { parse_schema_dsl("S[\n  R[A*,\n    ]]"); });
  CHECK(e.kind() == ErrorKind::SyntaxError);
  CHECK(e.location()->line == 3);
  CHECK(e.location()->column == 5);

  e = error_of([] { parse_schema_dsl("S[R[A*], R[B*]]"); });
  CHECK(e.kind() == ErrorKind::DuplicateName);
  e = error_of([] { parse_schema_dsl("S[R[A*, A]]"); });
  CHECK(e.kind() == ErrorKind::DuplicateName);
  e = error_of([] { parse_schema_dsl("S[R[A*, B:{x, x}]]"); });
  CHECK(e.kind() == ErrorKind::DuplicateName);
  e = error_of([] { parse_schema_dsl("S[R[A*/Nowhere]]"); });
  CHECK(e.kind() == ErrorKind::UnresolvedReference);
  CHECK(e.location()->column == 8);
  e = error_of([] { parse_schema_dsl("S[R[A*]] trailing"); });
  CHECK(e.kind() == ErrorKind::SyntaxError);
  e = error_of([] { parse_schema_dsl(""); });
  CHECK(e.kind() == ErrorKind::SyntaxError);
  e = error_of([] { parse_schema_dsl("S[R[1A*]]"); });
  CHECK(e.kind() == ErrorKind::SyntaxError);
}

TEST_CASE("DSL: quoted values and value lexicon") {
  const auto s = parse_schema_dsl(R"(S[R[A*, B:{"a, b", "say ""hi""", off-road, 1.5e+3, r1_1}]])");
  CHECK(*s.relations[0].attributes[1].domain ==
        std::vector<std::string>{"a, b", "say \"hi\"", "off-road", "1.5e+3", "r1_1"});
  CHECK(parse_schema_dsl(render_schema_dsl(s)) == s);
}

TEST_CASE("DSL: rendering is canonical") {
  const auto s = parse_schema_dsl(support::fixture("vehicle_identification.rdbs"));
  CHECK(render_schema_dsl(s) == support::fixture("vehicle_identification.rdbs"));
  CHECK(render_schema_dsl(parse_schema_dsl("S[]")) == "S[]\n");
}

TEST_CASE("property: DSL render round-trips") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 500; ++trial) {
    auto s = trial % 2 ? support::random_schema(rng, 10) : support::random_normalized_schema(rng, 10, 4);
    for (auto& rel : s.relations) {
      for (auto& a : rel.attributes) {
        if (!a.in_primary_key && support::pick(rng, 0, 2) == 0) {
          a.domain = std::vector<std::string>{"v0", "two words", "q\"uote"};
        }
      }
    }
    CHECK(parse_schema_dsl(render_schema_dsl(s)) == s);
  }
}

TEST_CASE("DDL: single entity table") {
  const auto s = parse_sql_ddl(
      "CREATE TABLE Vehicle (VehicleID VARCHAR PRIMARY KEY, VehicleClass VARCHAR);", "V");
  CHECK(s == parse_schema_dsl("V[Vehicle[VehicleID*, VehicleClass]]"));
  CHECK(s.relations[0].attributes[0].sql_type == "VARCHAR");
}

TEST_CASE("DDL: composite foreign-key key is a relationship relation") {
  const auto s = parse_sql_ddl(R"(
    CREATE TABLE Vehicle (VehicleID INT PRIMARY KEY);
    CREATE TABLE Follow (
      FollowingVehicleID INT NOT NULL,
      LeadingVehicleID INT NOT NULL,
      PRIMARY KEY (FollowingVehicleID, LeadingVehicleID),
      FOREIGN KEY (FollowingVehicleID) REFERENCES Vehicle(VehicleID),
      FOREIGN KEY (LeadingVehicleID) REFERENCES Vehicle(VehicleID)
    );)", "S");
  CHECK(s == parse_schema_dsl(
                 "S[Vehicle[VehicleID*], Follow[FollowingVehicleID*/Vehicle, LeadingVehicleID*/Vehicle]]"));
  CHECK(classify_relation(s, "Follow") == RelationKind::RelationshipRelation);
}

TEST_CASE("DDL and DSL fixtures agree") {
  const auto ddl = parse_schema(read_schema_source(support::fixture_path("VehicleIdentification.sql")));
  const auto dsl = parse_schema(read_schema_source(support::fixture_path("vehicle_identification.rdbs")));
  CHECK(ddl == dsl);
}

TEST_CASE("DDL: unsupported input is refused") {
  CHECK(error_of([] { parse_sql_ddl("CREATE VIEW v AS SELECT 1;"); }).kind() ==
        ErrorKind::UnsupportedStatement);
  CHECK(error_of([] { parse_sql_ddl("INSERT INTO t VALUES (1);"); }).kind() ==
        ErrorKind::UnsupportedStatement);
  CHECK(error_of([] { parse_sql_ddl("CREATE TABLE t (a INT PRIMARY KEY, UNIQUE (a));"); }).kind() ==
        ErrorKind::UnsupportedStatement);
  CHECK(error_of([] { parse_sql_ddl("CREATE TABLE t (a INT PRIMARY KEY CHECK (a > 0));"); }).kind() ==
        ErrorKind::UnsupportedStatement);
  CHECK(error_of([] {
          parse_sql_ddl("CREATE TABLE u (b INT PRIMARY KEY);"
                        "CREATE TABLE t (a INT PRIMARY KEY REFERENCES u ON DELETE CASCADE);");
        }).kind() == ErrorKind::UnsupportedStatement);
  CHECK(error_of([] { parse_sql_ddl("CREATE TABLE t (a INT);"); }).kind() == ErrorKind::NoPrimaryKey);
  CHECK(error_of([] { parse_sql_ddl("CREATE TABLE t (a INT PRIMARY KEY, a INT);"); }).kind() ==
        ErrorKind::DuplicateName);
  CHECK(error_of([] { parse_sql_ddl("CREATE TABLE t (a INT, PRIMARY KEY (b));"); }).kind() ==
        ErrorKind::UnknownAttribute);
  CHECK(error_of([] { parse_sql_ddl("CREATE TABLE t (a INT PRIMARY KEY REFERENCES ghost);"); }).kind() ==
        ErrorKind::DanglingReference);
  CHECK(error_of([] {
          parse_sql_ddl("CREATE TABLE u (b INT PRIMARY KEY, c INT);"
                        "CREATE TABLE t (a INT PRIMARY KEY REFERENCES u(c));");
        }).kind() == ErrorKind::DanglingReference);
  const auto e = error_of([] { parse_sql_ddl("CREATE TABLE t (\n  a INT PRIMARY KEY,\n  ;"); });
  CHECK(e.kind() == ErrorKind::SyntaxError);
  REQUIRE(e.location());
  CHECK(e.location()->line == 3);
}

TEST_CASE("DDL: comments, quoting and enums") {
  const auto s = parse_sql_ddl(R"(
    -- a comment
    CREATE TABLE IF NOT EXISTS `Region` ( /* block */
      "RegionID" CHAR(8) NOT NULL,
      TerrainType ENUM('road', 'off-road') NULL,
      CONSTRAINT pk PRIMARY KEY (RegionID)
    ))", "S");
  CHECK(s == parse_schema_dsl("S[Region[RegionID*, TerrainType:{road, off-road}]]"));
}

TEST_CASE("schema sources") {
  CHECK(format_from_extension("a/b.rdbs") == SchemaFormat::Dsl);
  CHECK(format_from_extension("b.sql") == SchemaFormat::Ddl);
  CHECK_FALSE(format_from_extension("b.txt").has_value());
  CHECK(parse_format_name("ddl") == SchemaFormat::Ddl);
  CHECK(error_of([] { read_schema_source("/nonexistent.rdbs"); }).kind() == ErrorKind::Io);
  CHECK(error_of([] { read_schema_source(support::fixture_path("herald.ini")); }).kind() ==
        ErrorKind::Io);
  const auto src = read_schema_source(support::fixture_path("VehicleIdentification.sql"));
  CHECK(src.format == SchemaFormat::Ddl);
  CHECK(parse_schema(src).name == "VehicleIdentification");
}

TEST_CASE("CSV records") {
  const auto rows = parse_csv("\xEF\xBB\xBF" "a,b\r\n\"x,1\",\"say \"\"hi\"\"\"\n\n\"multi\nline\",\n");
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].fields == std::vector<std::string>{"a", "b"});
  CHECK(rows[1].fields == std::vector<std::string>{"x,1", "say \"hi\""});
  CHECK(rows[1].quoted == std::vector<bool>{true, true});
  CHECK(rows[2].line == 4);
  CHECK(rows[2].fields == std::vector<std::string>{"multi\nline", ""});
  CHECK_THROWS_AS(parse_csv("\"open"), Error);
}

TEST_CASE("instances: vehicle data") {
  const auto schema = parse_schema_dsl(support::fixture("vehicle_identification.rdbs"));
  const auto db = load_instances(support::fixture_path("vehicle_data"), schema);
  REQUIRE(db.instance("Vehicle"));
  CHECK(db.instance("Vehicle")->rows.size() == 6);
  CHECK(db.instance("Vehicle")->rows[0] == Row{"v1", "wheeled"});
  CHECK(db.instance("Vehicle")->rows[5] == Row{"v6", "tracked"});
  const auto& region = db.instance("Region")->rows;
  CHECK(region[0] == Row{"r1", "off-road", std::nullopt});
  CHECK(region.back() == Row{"r2_1_1", "road", "r2_1"});
}

TEST_CASE("instances: missing and empty files") {
  const auto schema = parse_schema_dsl("S[Vehicle[VehicleID*, VehicleClass]]");
  TempDir dir("empty");
  std::vector<std::string> warnings;
  auto db = load_instances(dir.path, schema, &warnings);
  CHECK(db.instances.at(0).rows.empty());
  CHECK(warnings.size() == 1);
  dir.write("Vehicle.csv", "VehicleID,VehicleClass\n");
  warnings.clear();
  db = load_instances(dir.path, schema, &warnings);
  CHECK(db.instances.at(0).rows.empty());
  CHECK(warnings.empty());
}

TEST_CASE("instances: violations") {
  const auto schema = parse_schema_dsl(
      "S[Vehicle[VehicleID*, VehicleClass:{wheeled, tracked}], Follow[A*/Vehicle, B*/Vehicle]]");
  TempDir dir("bad");
  auto kind = [&] { return error_of([&] { load_instances(dir.path, schema); }).kind(); };

  dir.write("Vehicle.csv", "VehicleID,VehicleClass\nv1,wheeled\nv1,tracked\n");
  CHECK(kind() == ErrorKind::DuplicatePrimaryKey);
  dir.write("Vehicle.csv", "VehicleID,VehicleClass\nv1,flying\n");
  CHECK(kind() == ErrorKind::DomainViolation);
  dir.write("Vehicle.csv", "VehicleClass,VehicleID\nwheeled,v1\n");
  CHECK(kind() == ErrorKind::HeaderMismatch);
  dir.write("Vehicle.csv", "VehicleID,VehicleClass\nnull,wheeled\n");
  CHECK(kind() == ErrorKind::NullPrimaryKey);
  dir.write("Vehicle.csv", "VehicleID,VehicleClass\nv1,wheeled,extra\n");
  CHECK(kind() == ErrorKind::HeaderMismatch);
  dir.write("Vehicle.csv", "VehicleID,VehicleClass\nv1,wheeled\nv2,\n");
  dir.write("Follow.csv", "A,B\nv1,v9\n");
  const auto e = error_of([&] { load_instances(dir.path, schema); });
  CHECK(e.kind() == ErrorKind::ReferentialIntegrity);
  CHECK(std::string(e.what()).find("Follow.csv:2") != std::string::npos);
  dir.write("Follow.csv", "A,B\nv1,v2\n");
  const auto db = load_instances(dir.path, schema);
  CHECK(db.instance("Vehicle")->rows[1] == Row{"v2", std::nullopt});
}
