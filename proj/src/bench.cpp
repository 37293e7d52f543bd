#include "mebnrm/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <future>
#include <numeric>
#include <sstream>

#include "mebnrm/error.hpp"
#include "mebnrm/mapper.hpp"

namespace mebnrm {

StatsReport compute_stats(const RelationalDatabaseSchema& schema, const MTheory& theory,
                          double mapping_seconds) {
  StatsReport report;
  report.relations = schema.relations.size();
  for (const auto& rel : schema.relations) {
    report.attributes += rel.attributes.size();
    report.primary_key_attributes += rel.primary_key().size();
  }
  for (const auto& rel : schema.relations) {
    switch (classify_relation(schema, rel.name)) {
      case RelationKind::EntityRelation: ++report.entity_relations; break;
      case RelationKind::RelationshipRelation: ++report.relationship_relations; break;
      case RelationKind::NonNormal: break;
    }
  }
  report.entities = theory.entities.size();
  report.mfrags = theory.mfrags.size();
  for (const auto& frag : theory.mfrags) {
    report.context_nodes += frag.context_nodes.size();
    report.resident_nodes += frag.resident_nodes.size();
  }
  report.mapping_seconds = mapping_seconds;
  return report;
}

std::string format_stats(const StatsReport& r) {
  std::ostringstream out;
  out << "relations=" << r.relations << "\n"
      << "entity_relations=" << r.entity_relations << "\n"
      << "relationship_relations=" << r.relationship_relations << "\n"
      << "attributes=" << r.attributes << "\n"
      << "primary_key_attributes=" << r.primary_key_attributes << "\n"
      << "entities=" << r.entities << "\n"
      << "mfrags=" << r.mfrags << "\n"
      << "context_nodes=" << r.context_nodes << "\n"
      << "resident_nodes=" << r.resident_nodes << "\n"
      << "mapping_seconds=" << r.mapping_seconds << "\n";
  return out.str();
}

namespace {

std::size_t uniform(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
  if (hi <= lo) return lo;
  return lo + static_cast<std::size_t>(rng() % (hi - lo + 1));
}

bool chance(std::mt19937_64& rng, double p) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53 < p;
}

}  // namespace

RelationalDatabaseSchema generate_schema(const SyntheticSpec& spec, std::mt19937_64& rng,
                                         std::string name) {
  RelationalDatabaseSchema schema;
  schema.name = std::move(name);
  if (spec.relations == 0) return schema;
  const auto entity_count = std::clamp<std::size_t>(
      static_cast<std::size_t>(std::llround(static_cast<double>(spec.relations) * spec.entity_fraction)),
      1, spec.relations);

  std::vector<std::size_t> non_key(spec.relations);
  if (spec.total_non_key_attributes) {
    for (std::size_t i = 0; i < *spec.total_non_key_attributes; ++i) ++non_key[i % spec.relations];
  } else {
    for (auto& count : non_key) count = uniform(rng, spec.min_attributes, spec.max_attributes);
  }

  auto random_entity = [&] { return "E" + std::to_string(uniform(rng, 0, entity_count - 1)); };
  auto add_non_key = [&](RelationSchema& rel, std::size_t count) {
    for (std::size_t j = 0; j < count; ++j) {
      AttributeDef a;
      if (chance(rng, spec.foreign_key_share)) {
        a.name = rel.name + "_F" + std::to_string(j);
        a.references = random_entity();
      } else {
        a.name = rel.name + "_A" + std::to_string(j);
        if (chance(rng, spec.domain_share)) {
          a.domain.emplace();
          const auto values = uniform(rng, 1, 4);
          for (std::size_t v = 0; v < values; ++v) a.domain->push_back("v" + std::to_string(v));
        }
      }
      rel.attributes.push_back(std::move(a));
    }
  };

  for (std::size_t i = 0; i < entity_count; ++i) {
    RelationSchema rel;
    rel.name = "E" + std::to_string(i);
    rel.attributes.push_back(AttributeDef{rel.name + "ID", std::nullopt, true, std::nullopt, {}});
    add_non_key(rel, non_key[i]);
    schema.relations.push_back(std::move(rel));
  }
  for (std::size_t i = entity_count; i < spec.relations; ++i) {
    RelationSchema rel;
    rel.name = "R" + std::to_string(i - entity_count);
    const auto width = uniform(rng, std::max<std::size_t>(spec.min_key_width, 1),
                               std::max(spec.min_key_width, spec.max_key_width));
    for (std::size_t k = 0; k < width; ++k) {
      rel.attributes.push_back(AttributeDef{rel.name + "_K" + std::to_string(k), std::nullopt,
                                            true, random_entity(), {}});
    }
    add_non_key(rel, non_key[i]);
    schema.relations.push_back(std::move(rel));
  }
  return schema;
}

std::optional<double> pearson(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.size() < 2) return std::nullopt;
  const auto n = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (sxx == 0 || syy == 0) return std::nullopt;
  return sxy / std::sqrt(sxx * syy);
}

namespace {

BenchPoint time_point(const RelationalDatabaseSchema& schema, std::size_t repetitions) {
  BenchPoint point;
  point.relations = schema.relations.size();
  for (const auto& rel : schema.relations) point.attributes += rel.attributes.size();

  using clock = std::chrono::steady_clock;
  volatile std::size_t sink = map_rdbs_to_mtheory(schema).mfrags.size();  // warm-up
  std::vector<double> samples;
  samples.reserve(repetitions);
  for (std::size_t r = 0; r < repetitions; ++r) {
    const auto start = clock::now();
    const auto theory = map_rdbs_to_mtheory(schema);
    const auto stop = clock::now();
    sink = sink + theory.mfrags.size();
    samples.push_back(std::chrono::duration<double>(stop - start).count());
  }
  (void)sink;
  const auto n = static_cast<double>(samples.size());
  point.mean_seconds = std::accumulate(samples.begin(), samples.end(), 0.0) / n;
  double var = 0;
  for (double s : samples) var += (s - point.mean_seconds) * (s - point.mean_seconds);
  point.stddev_seconds = samples.size() > 1 ? std::sqrt(var / (n - 1)) : 0.0;
  return point;
}

std::vector<BenchPoint> run_sweep(const std::vector<SyntheticSpec>& shapes, const BenchSpec& spec) {
  std::vector<RelationalDatabaseSchema> schemas;
  for (std::size_t i = 0; i < shapes.size(); ++i) {
    std::mt19937_64 rng(spec.seed + 0x9E3779B97F4A7C15ULL * (i + 1));
    schemas.push_back(generate_schema(shapes[i], rng));
  }
  std::vector<BenchPoint> points;
  if (spec.parallel) {
    std::vector<std::future<BenchPoint>> futures;
    for (const auto& schema : schemas) {
      futures.push_back(std::async(std::launch::async, time_point, std::cref(schema),
                                   spec.repetitions));
    }
    for (auto& f : futures) points.push_back(f.get());
  } else {
    for (const auto& schema : schemas) points.push_back(time_point(schema, spec.repetitions));
  }
  return points;
}

SyntheticSpec bench_shape(const BenchSpec& spec, std::size_t relations) {
  SyntheticSpec shape;
  shape.relations = relations;
  shape.entity_fraction = spec.entity_fraction;
  shape.min_key_width = shape.max_key_width = spec.key_width;
  return shape;
}

}  // namespace

BenchReport run_bench(const BenchSpec& spec) {
  if (spec.repetitions == 0) throw Error(ErrorKind::InvalidSpec, "repetitions must be positive");
  if (spec.key_width == 0) throw Error(ErrorKind::InvalidSpec, "key width must be positive");
  if (!(spec.entity_fraction > 0.0 && spec.entity_fraction <= 1.0)) {
    throw Error(ErrorKind::InvalidSpec, "entity fraction must be in (0, 1]");
  }
  BenchReport report;

  std::vector<SyntheticSpec> shapes;
  for (auto n : spec.relation_counts) {
    if (n == 0) throw Error(ErrorKind::InvalidSpec, "relation counts must be positive");
    auto shape = bench_shape(spec, n);
    shape.min_attributes = shape.max_attributes = spec.attributes_per_relation;
    shapes.push_back(shape);
  }
  report.relation_sweep = run_sweep(shapes, spec);

  shapes.clear();
  if (!spec.attribute_counts.empty() && spec.fixed_relations == 0) {
    throw Error(ErrorKind::InvalidSpec, "fixed relation count must be positive");
  }
  for (auto a : spec.attribute_counts) {
    auto shape = bench_shape(spec, spec.fixed_relations);
    shape.total_non_key_attributes = a;
    shapes.push_back(shape);
  }
  report.attribute_sweep = run_sweep(shapes, spec);

  auto correlate = [](const std::vector<BenchPoint>& points, bool by_relations) {
    std::vector<double> xs, ys;
    for (const auto& p : points) {
      xs.push_back(static_cast<double>(by_relations ? p.relations : p.attributes));
      ys.push_back(p.mean_seconds);
    }
    return pearson(xs, ys);
  };
  report.relation_correlation = correlate(report.relation_sweep, true);
  report.attribute_correlation = correlate(report.attribute_sweep, false);
  return report;
}

std::string format_bench(const BenchReport& report) {
  std::ostringstream out;
  out.precision(9);
  for (const auto& p : report.relation_sweep) {
    out << "point sweep=relations relations=" << p.relations << " attributes=" << p.attributes
        << " mean_seconds=" << p.mean_seconds << " stddev_seconds=" << p.stddev_seconds << "\n";
  }
  for (const auto& p : report.attribute_sweep) {
    out << "point sweep=attributes relations=" << p.relations << " attributes=" << p.attributes
        << " mean_seconds=" << p.mean_seconds << " stddev_seconds=" << p.stddev_seconds << "\n";
  }
  auto show = [](const std::optional<double>& c) {
    if (!c) return std::string("undefined");
    std::ostringstream s;
    s.precision(6);
    s << *c;
    return s.str();
  };
  if (!report.relation_sweep.empty()) {
    out << "correlation sweep=relations value=" << show(report.relation_correlation) << "\n";
  }
  if (!report.attribute_sweep.empty()) {
    out << "correlation sweep=attributes value=" << show(report.attribute_correlation) << "\n";
  }
  return out.str();
}

std::vector<std::size_t> parse_size_list(std::string_view text) {
  auto to_size = [&](std::string_view s) {
    if (s.empty()) throw Error(ErrorKind::InvalidSpec, "empty number in '" + std::string(text) + "'");
    std::size_t value = 0;
    for (char c : s) {
      if (c < '0' || c > '9') {
        throw Error(ErrorKind::InvalidSpec, "'" + std::string(s) + "' is not a count");
      }
      value = value * 10 + static_cast<std::size_t>(c - '0');
      if (value > 100'000'000) throw Error(ErrorKind::InvalidSpec, "count too large");
    }
    return value;
  };
  std::vector<std::size_t> out;
  if (text.find(':') != std::string_view::npos) {
    const auto first = text.find(':');
    const auto second = text.find(':', first + 1);
    if (second == std::string_view::npos) {
      throw Error(ErrorKind::InvalidSpec, "range must be start:stop:step");
    }
    const auto start = to_size(text.substr(0, first));
    const auto stop = to_size(text.substr(first + 1, second - first - 1));
    const auto step = to_size(text.substr(second + 1));
    if (step == 0 || stop < start) throw Error(ErrorKind::InvalidSpec, "empty or endless range");
    for (auto v = start; v <= stop; v += step) out.push_back(v);
    return out;
  }
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto comma = text.find(',', pos);
    const auto end = comma == std::string_view::npos ? text.size() : comma;
    out.push_back(to_size(text.substr(pos, end - pos)));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

}  // namespace mebnrm
