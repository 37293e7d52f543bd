#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "mebnrm/mebn.hpp"
#include "mebnrm/schema.hpp"

namespace mebnrm {

/// Per-schema counts plus the mapping wall time.
struct StatsReport {
  std::size_t relations = 0;
  std::size_t entity_relations = 0;
  std::size_t relationship_relations = 0;
  std::size_t attributes = 0;
  std::size_t primary_key_attributes = 0;
  std::size_t entities = 0;
  std::size_t mfrags = 0;
  std::size_t context_nodes = 0;
  std::size_t resident_nodes = 0;
  double mapping_seconds = 0.0;
};

StatsReport compute_stats(const RelationalDatabaseSchema& schema, const MTheory& theory,
                          double mapping_seconds);
/// `key=value` lines; the time line is last.
std::string format_stats(const StatsReport& report);

/// Shape of a synthetic normalized schema. Entity relations come first, then
/// relationship relations, so the generated list is already sorted.
struct SyntheticSpec {
  std::size_t relations = 10;
  double entity_fraction = 0.5;       // share of entity relations, at least one
  std::size_t min_attributes = 0;     // non-key attributes per relation
  std::size_t max_attributes = 3;
  std::size_t min_key_width = 1;      // relationship-relation key width
  std::size_t max_key_width = 2;
  double foreign_key_share = 0.25;    // chance a non-key attribute is an NK
  double domain_share = 0.25;         // chance an NF attribute gets a domain
  /// When set, exactly this many non-key attributes in total, spread
  /// round-robin; overrides min/max_attributes.
  std::optional<std::size_t> total_non_key_attributes;
};

RelationalDatabaseSchema generate_schema(const SyntheticSpec& spec, std::mt19937_64& rng,
                                         std::string name = "Synthetic");

/// Pearson correlation; nullopt with fewer than two points or zero variance.
std::optional<double> pearson(const std::vector<double>& xs, const std::vector<double>& ys);

struct BenchSpec {
  std::vector<std::size_t> relation_counts;   // sweep 1: #relations
  std::size_t attributes_per_relation = 4;    // held fixed in sweep 1
  std::size_t fixed_relations = 100;          // held fixed in sweep 2
  std::vector<std::size_t> attribute_counts;  // sweep 2: total #attributes
  double entity_fraction = 0.5;
  std::size_t key_width = 2;
  std::size_t repetitions = 20;
  std::uint64_t seed = 0;
  bool parallel = false;
};

struct BenchPoint {
  std::size_t relations = 0;
  std::size_t attributes = 0;  // total attributes in the schema
  double mean_seconds = 0.0;
  double stddev_seconds = 0.0;
};

struct BenchReport {
  std::vector<BenchPoint> relation_sweep;
  std::vector<BenchPoint> attribute_sweep;
  std::optional<double> relation_correlation;
  std::optional<double> attribute_correlation;
};

/// Times map_rdbs_to_mtheory (parsing excluded) over generated schemas.
BenchReport run_bench(const BenchSpec& spec);

/// Machine-readable report lines.
std::string format_bench(const BenchReport& report);

/// `a:b:step` or `a,b,c`.
std::vector<std::size_t> parse_size_list(std::string_view text);

}  // namespace mebnrm
