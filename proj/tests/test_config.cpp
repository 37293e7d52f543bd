#include <doctest.h>

#include "mebnrm/config.hpp"
#include "mebnrm/error.hpp"
#include "support.hpp"

using namespace mebnrm;

TEST_CASE("defaults") {
  const auto c = parse_config("");
  CHECK(c.prefix_policy == PrefixPolicy::None);
  CHECK_FALSE(c.closed_world);
  CHECK(c.prefixes.empty());
}

TEST_CASE("full config") {
  const auto c = parse_config(R"(
[mapping]
prefix = auto
closed_world = true
[ov_alias]
TargetTemporalProperty.TargetID = tr
[entity_alias]
PatrolDriver = Soldier
[entity_name]
Vehicle = CAR
)");
  CHECK(c.prefix_policy == PrefixPolicy::Auto);
  CHECK(c.closed_world);
  CHECK(c.ov_alias.at("TargetTemporalProperty.TargetID") == "tr");
  CHECK(c.entity_alias.at("PatrolDriver") == "Soldier");
  CHECK(c.entity_names.at("Vehicle") == "CAR");
}

TEST_CASE("a prefix section implies the explicit policy") {
  const auto c = load_config(support::fixture_path("herald.ini"));
  CHECK(c.prefix_policy == PrefixPolicy::Explicit);
  CHECK(c.prefixes.at("MTI_Report") == "MR");
  CHECK(c.prefixes.at("TargetTemporalProperty") == "TTP");
  CHECK(c.ov_alias.at("MTI_Report.ReportedTargetID") == "rt_mti");
}

TEST_CASE("bad configs") {
  auto kind_of = [](const std::string& text) {
    try {
      parse_config(text);
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::Io;
  };
  CHECK(kind_of("[nonsense]\na = b\n") == ErrorKind::InvalidConfig);
  CHECK(kind_of("[mapping]\nprefix = sometimes\n") == ErrorKind::InvalidConfig);
  CHECK(kind_of("[mapping]\nclosed_world = maybe\n") == ErrorKind::InvalidConfig);
  CHECK(kind_of("[ov_alias]\nNoDot = x\n") == ErrorKind::InvalidConfig);
  CHECK(kind_of("[mapping\n") == ErrorKind::InvalidConfig);
  CHECK_THROWS_AS(load_config("/nonexistent/file.ini"), Error);
}

TEST_CASE("prefix maps") {
  const auto m = parse_prefix_map("heater_item = HI\nestimator_item = ETMOI\n");
  CHECK(m.size() == 2);
  CHECK(m.at("estimator_item") == "ETMOI");
  CHECK(parse_prefix_map("[prefix]\nA = X\n").at("A") == "X");
  CHECK(parse_prefix_policy("auto") == PrefixPolicy::Auto);
  CHECK(parse_prefix_policy("none") == PrefixPolicy::None);
  CHECK_FALSE(parse_prefix_policy("file.ini").has_value());
}
