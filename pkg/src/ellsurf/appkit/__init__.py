"""Application layer: parser, rank-68 pipeline, serialization, cache, LMFDB client, CLI."""

from .cache import ResultCache, request_key
from .e68 import (
    SUBSURFACES,
    E68Config,
    LiftedSection,
    Report,
    ShapeMismatch,
    SubSurface,
    e68_model,
    lift_to_e68,
    subsurface,
    verify_e68,
)
from .fixtures import FIXTURES, Fixture, example1_sextic, fixture, split_triple
from .lmfdb import LookupResult, lmfdb_lookup
from .parser import ParseError, SurfaceSpec, format_model, parse_equation, parse_polynomial
from .serialize import (
    SCHEMA,
    SchemaError,
    dumps,
    fibre_to_json,
    report_to_json,
    section_from_json,
    section_to_json,
    surface_from_json,
    surface_to_json,
)

__all__ = [
    "E68Config",
    "FIXTURES",
    "Fixture",
    "LiftedSection",
    "LookupResult",
    "ParseError",
    "Report",
    "ResultCache",
    "SCHEMA",
    "SUBSURFACES",
    "SchemaError",
    "ShapeMismatch",
    "SubSurface",
    "SurfaceSpec",
    "dumps",
    "e68_model",
    "example1_sextic",
    "fibre_to_json",
    "fixture",
    "format_model",
    "lift_to_e68",
    "lmfdb_lookup",
    "parse_equation",
    "parse_polynomial",
    "report_to_json",
    "request_key",
    "section_from_json",
    "section_to_json",
    "split_triple",
    "subsurface",
    "surface_from_json",
    "surface_to_json",
    "verify_e68",
]
