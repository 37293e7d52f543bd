"""Relational schemas to MEBN theory scripts."""

from ._core import (
    Config,
    MebnrmError,
    Schema,
    Theory,
    assertions,
    bench,
    check,
    classify_relation,
    emit_script,
    load_schema,
    map_schema,
    normalize,
    parse_config,
    parse_ddl,
    parse_dsl,
    parse_script,
    script_equivalent,
    stats,
)

__all__ = [
    "Config",
    "MebnrmError",
    "Schema",
    "Theory",
    "assertions",
    "bench",
    "check",
    "classify_relation",
    "emit_script",
    "load_schema",
    "map_schema",
    "normalize",
    "parse_config",
    "parse_ddl",
    "parse_dsl",
    "parse_script",
    "script_equivalent",
    "stats",
]
