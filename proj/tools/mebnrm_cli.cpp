// mebnrm: relational schemas to MEBN theory scripts.
//
// Exit status: 0 success, 1 the input violates a rule (parse error, not
// normalized, bad data), 2 usage or I/O error.

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "mebnrm/assertions.hpp"
#include "mebnrm/bench.hpp"
#include "mebnrm/config.hpp"
#include "mebnrm/error.hpp"
#include "mebnrm/ingest.hpp"
#include "mebnrm/mapper.hpp"
#include "mebnrm/mebn.hpp"
#include "mebnrm/schema.hpp"

namespace {

using namespace mebnrm;

constexpr int kOk = 0;
constexpr int kViolation = 1;
constexpr int kUsage = 2;

struct SchemaOptions {
  std::string path;
  std::string format;
  std::string config;
  std::string prefix;
  bool normalize = false;
};

struct Loaded {
  RelationalDatabaseSchema schema;
  MappingConfig config;
};

Loaded load(const SchemaOptions& opts, std::string& origin) {
  std::optional<SchemaFormat> format;
  if (!opts.format.empty()) format = parse_format_name(opts.format);
  origin = opts.path;
  auto source = read_schema_source(opts.path, format);
  origin = source.origin;
  Loaded out{parse_schema(source), {}};
  if (!opts.config.empty()) out.config = load_config(opts.config);
  if (!opts.prefix.empty()) {
    if (auto policy = parse_prefix_policy(opts.prefix)) {
      out.config.prefix_policy = *policy;
    } else {
      std::ifstream in(opts.prefix, std::ios::binary);
      if (!in) throw Error(ErrorKind::Io, "cannot read prefix map " + opts.prefix);
      const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
      out.config.prefixes = parse_prefix_map(text);
      out.config.prefix_policy = PrefixPolicy::Explicit;
    }
  }
  if (opts.normalize) out.schema = normalize_er(out.schema, out.config);
  return out;
}

class Output {
 public:
  explicit Output(const std::string& path) {
    if (path.empty()) return;
    file_.open(path, std::ios::binary | std::ios::trunc);
    if (!file_) throw Error(ErrorKind::Io, "cannot write " + path);
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }
  void finish() {
    stream().flush();
    if (!stream()) throw Error(ErrorKind::Io, "write failed");
  }

 private:
  std::ofstream file_;
};

int report(const Error& e, const std::string& origin) {
  std::cerr << "mebnrm: ";
  if (e.location() && !origin.empty()) {
    std::cerr << origin << ":" << e.location()->line << ":" << e.location()->column << ": ";
  }
  std::cerr << to_string(e.kind()) << ": " << e.detail() << "\n";
  switch (e.kind()) {
    case ErrorKind::Io:
    case ErrorKind::InvalidConfig:
    case ErrorKind::InvalidSpec:
      return kUsage;
    default:
      return kViolation;
  }
}

void add_schema_options(CLI::App* cmd, SchemaOptions& opts, bool mapping) {
  cmd->add_option("schema", opts.path, "Schema file (.rdbs or .sql; - for stdin)")->required();
  cmd->add_option("--format", opts.format, "Schema format")
      ->check(CLI::IsMember({"dsl", "ddl"}));
  cmd->add_option("--config", opts.config, "Mapping configuration (INI)");
  if (mapping) {
    cmd->add_option("--prefix", opts.prefix, "none, auto, or a prefix map file");
    cmd->add_flag("--normalize", opts.normalize, "Normalize before mapping");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Map relational schemas to MEBN theories"};
  app.require_subcommand(1);

  SchemaOptions opts;
  std::string out_path;
  std::string data_dir;
  bool emit_false = false;
  bool with_stats = false;

  auto* check = app.add_subcommand("check", "Report violations of entity-relationship normal form");
  add_schema_options(check, opts, false);

  auto* normalize = app.add_subcommand("normalize", "Rewrite a schema into normal form");
  add_schema_options(normalize, opts, false);
  normalize->add_option("--out", out_path, "Output file");

  auto* map = app.add_subcommand("map", "Emit the MTheory script for a schema");
  add_schema_options(map, opts, true);
  map->add_option("--out", out_path, "Output file");
  map->add_flag("--stats", with_stats, "Also print statistics to stderr");

  auto* assert_cmd = app.add_subcommand("assert", "Turn relation instances into assertions");
  add_schema_options(assert_cmd, opts, true);
  assert_cmd->add_option("data", data_dir, "Directory of <Relation>.csv files")->required();
  assert_cmd->add_flag("--emit-false", emit_false, "Add closed-world false assertions");
  assert_cmd->add_option("--out", out_path, "Output file");

  auto* stats = app.add_subcommand("stats", "Print schema and mapping counts");
  add_schema_options(stats, opts, true);

  BenchSpec bench_spec;
  bench_spec.attribute_counts = {};
  std::string relation_list = "50:500:50";
  std::string attribute_list = "10:500:70";
  auto* bench = app.add_subcommand("bench", "Time the mapping over synthetic schemas");
  bench->add_option("--relations", relation_list, "Relation counts, a:b:step or a,b,c")
      ->capture_default_str();
  bench->add_option("--attributes-per-relation", bench_spec.attributes_per_relation,
                    "Non-key attributes per relation in the relation sweep")
      ->capture_default_str();
  bench->add_option("--attributes", attribute_list,
                    "Non-key attribute totals for the attribute sweep (empty to skip)")
      ->capture_default_str();
  bench->add_option("--fixed-relations", bench_spec.fixed_relations,
                    "Relation count held fixed in the attribute sweep")
      ->capture_default_str();
  bench->add_option("--entity-fraction", bench_spec.entity_fraction,
                    "Share of entity relations")
      ->capture_default_str();
  bench->add_option("--key-width", bench_spec.key_width, "Relationship key width")
      ->capture_default_str();
  bench->add_option("--repetitions", bench_spec.repetitions, "Timed runs per point")
      ->capture_default_str();
  bench->add_option("--seed", bench_spec.seed, "Generator seed")->capture_default_str();
  bench->add_flag("--parallel", bench_spec.parallel, "Time data points concurrently");
  bench->add_option("--out", out_path, "Output file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  std::string origin;
  try {
    if (check->parsed()) {
      const auto loaded = load(opts, origin);
      auto violations = structural_violations(loaded.schema);
      if (violations.empty()) violations = check_er_normal_form(loaded.schema);
      for (const auto& v : violations) {
        std::cout << v.relation << (v.attribute.empty() ? "" : "." + v.attribute) << ": "
                  << to_string(v.kind) << ": " << v.message << "\n";
      }
      return violations.empty() ? kOk : kViolation;
    }

    if (normalize->parsed()) {
      const auto loaded = load(opts, origin);
      validate_structure(loaded.schema);
      Output out(out_path);
      out.stream() << render_schema_dsl(normalize_er(loaded.schema, loaded.config));
      out.finish();
      return kOk;
    }

    if (map->parsed() || stats->parsed()) {
      const auto loaded = load(opts, origin);
      const auto start = std::chrono::steady_clock::now();
      const auto theory = map_rdbs_to_mtheory(loaded.schema, loaded.config);
      const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
      const auto counts = compute_stats(loaded.schema, theory, elapsed.count());
      if (stats->parsed()) {
        std::cout << format_stats(counts);
        return kOk;
      }
      Output out(out_path);
      out.stream() << emit_script(theory);
      out.finish();
      if (with_stats) std::cerr << format_stats(counts);
      return kOk;
    }

    if (assert_cmd->parsed()) {
      auto loaded = load(opts, origin);
      if (emit_false) loaded.config.closed_world = true;
      const auto theory = map_rdbs_to_mtheory(loaded.schema, loaded.config);
      std::vector<std::string> warnings;
      origin.clear();  // data errors name their file and line themselves
      const auto db = load_instances(data_dir, loaded.schema, &warnings);
      for (const auto& w : warnings) std::cerr << "mebnrm: warning: " << w << "\n";
      auto assertions = map_instances(db, theory, loaded.config);
      if (loaded.config.closed_world) {
        auto negatives = enumerate_false_assertions(db, theory, loaded.config);
        assertions.insert(assertions.end(), std::make_move_iterator(negatives.begin()),
                          std::make_move_iterator(negatives.end()));
      }
      Output out(out_path);
      out.stream() << format_assertions(assertions);
      out.finish();
      return kOk;
    }

    if (bench->parsed()) {
      bench_spec.relation_counts = parse_size_list(relation_list);
      if (!attribute_list.empty()) bench_spec.attribute_counts = parse_size_list(attribute_list);
      const auto result = run_bench(bench_spec);
      Output out(out_path);
      out.stream() << format_bench(result);
      out.finish();
      return kOk;
    }
  } catch (const Error& e) {
    return report(e, origin);
  } catch (const std::exception& e) {
    std::cerr << "mebnrm: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
