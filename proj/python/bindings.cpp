#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <chrono>

#include "mebnrm/assertions.hpp"
#include "mebnrm/bench.hpp"
#include "mebnrm/config.hpp"
#include "mebnrm/error.hpp"
#include "mebnrm/ingest.hpp"
#include "mebnrm/mapper.hpp"
#include "mebnrm/mebn.hpp"
#include "mebnrm/schema.hpp"

namespace py = pybind11;
using namespace mebnrm;

namespace {

std::optional<SchemaFormat> format_arg(const std::optional<std::string>& name) {
  if (!name) return std::nullopt;
  auto format = parse_format_name(*name);
  if (!format) throw Error(ErrorKind::InvalidSpec, "unknown schema format '" + *name + "'");
  return format;
}

py::dict stats_dict(const StatsReport& r) {
  py::dict d;
  d["relations"] = r.relations;
  d["entity_relations"] = r.entity_relations;
  d["relationship_relations"] = r.relationship_relations;
  d["attributes"] = r.attributes;
  d["primary_key_attributes"] = r.primary_key_attributes;
  d["entities"] = r.entities;
  d["mfrags"] = r.mfrags;
  d["context_nodes"] = r.context_nodes;
  d["resident_nodes"] = r.resident_nodes;
  d["mapping_seconds"] = r.mapping_seconds;
  return d;
}

MappingConfig config_or_default(const std::optional<MappingConfig>& config) {
  return config.value_or(MappingConfig{});
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Relational schemas to MEBN theory scripts";

  static py::exception<Error> error(m, "MebnrmError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object exc = py::handle(error.ptr())(e.what());
      exc.attr("kind") = std::string(to_string(e.kind()));
      if (e.location()) {
        exc.attr("line") = e.location()->line;
        exc.attr("column") = e.location()->column;
      } else {
        exc.attr("line") = py::none();
        exc.attr("column") = py::none();
      }
      PyErr_SetObject(error.ptr(), exc.ptr());
    }
  });

  py::class_<MappingConfig>(m, "Config")
      .def(py::init<>())
      .def_property(
          "prefix_policy",
          [](const MappingConfig& c) {
            switch (c.prefix_policy) {
              case PrefixPolicy::None: return "none";
              case PrefixPolicy::Auto: return "auto";
              case PrefixPolicy::Explicit: return "explicit";
            }
            return "none";
          },
          [](MappingConfig& c, const std::string& word) {
            auto policy = parse_prefix_policy(word);
            if (!policy) throw Error(ErrorKind::InvalidConfig, "unknown prefix policy '" + word + "'");
            c.prefix_policy = *policy;
          })
      .def_readwrite("prefixes", &MappingConfig::prefixes)
      .def_readwrite("ov_alias", &MappingConfig::ov_alias)
      .def_readwrite("entity_alias", &MappingConfig::entity_alias)
      .def_readwrite("entity_names", &MappingConfig::entity_names)
      .def_readwrite("closed_world", &MappingConfig::closed_world);

  py::class_<RelationalDatabaseSchema>(m, "Schema")
      .def_readonly("name", &RelationalDatabaseSchema::name)
      .def_property_readonly("relation_names",
                             [](const RelationalDatabaseSchema& s) {
                               std::vector<std::string> names;
                               for (const auto& r : s.relations) names.push_back(r.name);
                               return names;
                             })
      .def("to_dsl", &render_schema_dsl)
      .def("__eq__", [](const RelationalDatabaseSchema& a, const RelationalDatabaseSchema& b) {
        return a == b;
      })
      .def("__repr__", [](const RelationalDatabaseSchema& s) {
        return "<Schema " + s.name + " with " + std::to_string(s.relations.size()) + " relations>";
      });

  py::class_<MTheory>(m, "Theory")
      .def_readonly("name", &MTheory::name)
      .def_readonly("entities", &MTheory::entities)
      .def_property_readonly("mfrag_names",
                             [](const MTheory& t) {
                               std::vector<std::string> names;
                               for (const auto& f : t.mfrags) names.push_back(f.name);
                               return names;
                             })
      .def_property_readonly("resident_nodes",
                             [](const MTheory& t) {
                               std::vector<std::pair<std::string, std::vector<std::string>>> out;
                               for (const auto& f : t.mfrags) {
                                 for (const auto& r : f.resident_nodes) {
                                   out.emplace_back(r.name, r.arguments);
                                 }
                               }
                               return out;
                             })
      .def("emit", &emit_script)
      .def("violations", [](const MTheory& t) {
        std::vector<std::string> out;
        for (const auto& v : validate_mtheory(t)) {
          out.push_back(std::string(to_string(v.kind)) + " " + v.mfrag + " " + v.node);
        }
        return out;
      });

  m.def("parse_dsl", &parse_schema_dsl, py::arg("text"));
  m.def("parse_ddl", &parse_sql_ddl, py::arg("text"), py::arg("name") = "schema");
  m.def(
      "load_schema",
      [](const std::filesystem::path& path, const std::optional<std::string>& format) {
        return parse_schema(read_schema_source(path, format_arg(format)));
      },
      py::arg("path"), py::arg("format") = py::none());
  m.def("parse_config", &parse_config, py::arg("text"));

  m.def(
      "check",
      [](const RelationalDatabaseSchema& schema) {
        auto violations = structural_violations(schema);
        if (violations.empty()) violations = check_er_normal_form(schema);
        std::vector<std::tuple<std::string, std::string, std::string, std::string>> out;
        for (const auto& v : violations) {
          out.emplace_back(v.relation, v.attribute, std::string(to_string(v.kind)), v.message);
        }
        return out;
      },
      py::arg("schema"));
  m.def(
      "classify_relation",
      [](const RelationalDatabaseSchema& schema, const std::string& relation) {
        return std::string(to_string(classify_relation(schema, relation)));
      },
      py::arg("schema"), py::arg("relation"));
  m.def(
      "normalize",
      [](const RelationalDatabaseSchema& schema, const std::optional<MappingConfig>& config) {
        return normalize_er(schema, config_or_default(config));
      },
      py::arg("schema"), py::arg("config") = py::none());
  m.def(
      "map_schema",
      [](const RelationalDatabaseSchema& schema, const std::optional<MappingConfig>& config) {
        return map_rdbs_to_mtheory(schema, config_or_default(config));
      },
      py::arg("schema"), py::arg("config") = py::none());
  m.def("emit_script", &emit_script, py::arg("theory"));
  m.def("parse_script", &parse_script, py::arg("text"), py::arg("name") = "");
  m.def("script_equivalent", &script_equivalent, py::arg("a"), py::arg("b"));

  m.def(
      "assertions",
      [](const RelationalDatabaseSchema& schema, const std::filesystem::path& data,
         const std::optional<MappingConfig>& config, bool emit_false) {
        auto cfg = config_or_default(config);
        if (emit_false) cfg.closed_world = true;
        const auto theory = map_rdbs_to_mtheory(schema, cfg);
        const auto db = load_instances(data, schema);
        auto out = map_instances(db, theory, cfg);
        if (cfg.closed_world) {
          auto negatives = enumerate_false_assertions(db, theory, cfg);
          out.insert(out.end(), negatives.begin(), negatives.end());
        }
        std::vector<std::string> lines;
        for (const auto& a : out) lines.push_back(format_assertion(a));
        return lines;
      },
      py::arg("schema"), py::arg("data_dir"), py::arg("config") = py::none(),
      py::arg("emit_false") = false);

  m.def(
      "stats",
      [](const RelationalDatabaseSchema& schema, const std::optional<MappingConfig>& config) {
        const auto start = std::chrono::steady_clock::now();
        const auto theory = map_rdbs_to_mtheory(schema, config_or_default(config));
        const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
        return stats_dict(compute_stats(schema, theory, elapsed.count()));
      },
      py::arg("schema"), py::arg("config") = py::none());

  m.def(
      "bench",
      [](std::vector<std::size_t> relations, std::vector<std::size_t> attributes,
         std::size_t repetitions, std::uint64_t seed) {
        BenchSpec spec;
        spec.relation_counts = std::move(relations);
        spec.attribute_counts = std::move(attributes);
        spec.repetitions = repetitions;
        spec.seed = seed;
        BenchReport report;
        {
          py::gil_scoped_release release;
          report = run_bench(spec);
        }
        py::dict d;
        d["relation_correlation"] = report.relation_correlation;
        d["attribute_correlation"] = report.attribute_correlation;
        d["report"] = format_bench(report);
        return d;
      },
      py::arg("relations"), py::arg("attributes") = std::vector<std::size_t>{},
      py::arg("repetitions") = 5, py::arg("seed") = 0);
}
