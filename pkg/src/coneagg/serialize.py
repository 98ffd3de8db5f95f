"""JSON encoding and scenario loading.

Rationals travel as strings ("3/4", "-2"); no floating point is accepted
or emitted anywhere.  Scenario files describe either a profile (domain +
representations) or a pooling setup (atoms + measures) and may carry an
``expected`` block that the regression suite replays.  Validation errors
point into the document with JSON-pointer-style paths.
"""

from __future__ import annotations

import json
from dataclasses import is_dataclass, fields
from enum import Enum
from fractions import Fraction
from typing import Any, Optional

from .linalg import AffineMap, Subspace, Vector, mat, vec
from .cones import (
    ConeDesc,
    LexCompose,
    OrthantCone,
    PieceUnionCone,
    PolyhedralH,
    PolyhedralV,
    ProductCone,
    TrivialCone,
    cone_dim,
)
from .pieces import Piece
from .profiles import Domain, Profile, Representation, cube_domain, simplex_domain
from .pooling import FiniteAlgebra, VectorMeasure
from .spaces import NotPartialOrderError, Povs, partial_order_space


class SchemaError(ValueError):
    def __init__(self, path: str, message: str):
        super().__init__(f"{path or '/'}: {message}")
        self.path = path or "/"
        self.reason = message


def parse_rational(value, path: str = "") -> Fraction:
    if isinstance(value, bool) or not isinstance(value, (str, int)):
        raise SchemaError(path, f"expected a rational string or integer, got {value!r}")
    try:
        return Fraction(value)
    except (ValueError, ZeroDivisionError) as exc:
        raise SchemaError(path, f"not a rational: {value!r} ({exc})") from None


def format_rational(x: Fraction) -> str:
    return str(x)


def parse_vector(values, path: str) -> Vector:
    if not isinstance(values, list):
        raise SchemaError(path, "expected an array of rationals")
    return vec([parse_rational(v, f"{path}/{i}") for i, v in enumerate(values)])


def parse_matrix(rows, path: str, width: Optional[int] = None):
    if not isinstance(rows, list):
        raise SchemaError(path, "expected an array of rows")
    parsed = []
    for i, row in enumerate(rows):
        v = parse_vector(row, f"{path}/{i}")
        if width is not None and len(v) != width:
            raise SchemaError(f"{path}/{i}", f"expected width {width}, got {len(v)}")
        if parsed and len(v) != len(parsed[0]):
            raise SchemaError(f"{path}/{i}", "inconsistent row width")
        parsed.append(v)
    return tuple(parsed)


# ---------------------------------------------------------------------------
# Cones and spaces.


def cone_to_json(cone: ConeDesc) -> dict:
    if isinstance(cone, OrthantCone):
        return {"kind": "orthant", "dim": cone.dim}
    if isinstance(cone, TrivialCone):
        return {"kind": "trivial", "dim": cone.dim}
    if isinstance(cone, PolyhedralH):
        return {
            "kind": "polyhedral_h",
            "dim": cone.dim,
            "rows": encode(cone.rows),
        }
    if isinstance(cone, PolyhedralV):
        return {
            "kind": "polyhedral_v",
            "dim": cone.dim,
            "generators": encode(cone.generators),
        }
    if isinstance(cone, ProductCone):
        return {"kind": "product", "factors": [cone_to_json(f) for f in cone.factors]}
    if isinstance(cone, LexCompose):
        return {"kind": "lex", "head": cone_to_json(cone.head), "tail": cone_to_json(cone.tail)}
    if isinstance(cone, PieceUnionCone):
        return {
            "kind": "pieces",
            "dim": cone.dim,
            "pieces": [
                {
                    "nonstrict": encode(p.nonstrict),
                    "strict": encode(p.strict),
                    "equalities": encode(p.equalities),
                }
                for p in cone.parts
            ],
        }
    raise TypeError(f"not a cone: {cone!r}")


def cone_from_json(data, path: str) -> ConeDesc:
    if not isinstance(data, dict) or "kind" not in data:
        raise SchemaError(path, "cone needs an object with a 'kind' field")
    kind = data["kind"]
    if kind in ("orthant", "trivial"):
        dim = data.get("dim")
        if not isinstance(dim, int) or dim < 0:
            raise SchemaError(f"{path}/dim", "expected a nonnegative integer")
        return OrthantCone(dim) if kind == "orthant" else TrivialCone(dim)
    if kind == "polyhedral_h":
        dim = data.get("dim")
        if not isinstance(dim, int) or dim < 0:
            raise SchemaError(f"{path}/dim", "expected a nonnegative integer")
        rows = parse_matrix(data.get("rows", []), f"{path}/rows", width=dim)
        return PolyhedralH(rows, dim)
    if kind == "polyhedral_v":
        dim = data.get("dim")
        if not isinstance(dim, int) or dim < 0:
            raise SchemaError(f"{path}/dim", "expected a nonnegative integer")
        gens = parse_matrix(data.get("generators", []), f"{path}/generators", width=dim)
        return PolyhedralV(tuple(gens), dim)
    if kind == "product":
        factors = data.get("factors")
        if not isinstance(factors, list):
            raise SchemaError(f"{path}/factors", "expected an array")
        return ProductCone(
            tuple(cone_from_json(f, f"{path}/factors/{i}") for i, f in enumerate(factors))
        )
    if kind == "lex":
        return LexCompose(
            cone_from_json(data.get("head"), f"{path}/head"),
            cone_from_json(data.get("tail"), f"{path}/tail"),
        )
    if kind == "pieces":
        dim = data.get("dim")
        if not isinstance(dim, int) or dim < 0:
            raise SchemaError(f"{path}/dim", "expected a nonnegative integer")
        parts = []
        for i, p in enumerate(data.get("pieces", [])):
            parts.append(
                Piece(
                    dim,
                    parse_matrix(p.get("nonstrict", []), f"{path}/pieces/{i}/nonstrict", dim),
                    parse_matrix(p.get("strict", []), f"{path}/pieces/{i}/strict", dim),
                    parse_matrix(p.get("equalities", []), f"{path}/pieces/{i}/equalities", dim),
                )
            )
        return PieceUnionCone(dim, tuple(parts))
    raise SchemaError(f"{path}/kind", f"unknown cone kind {kind!r}")


def space_to_json(space: Povs) -> dict:
    return {"dim": space.dim, "order": cone_to_json(space.order)}


def space_from_json(data, path: str) -> Povs:
    if not isinstance(data, dict):
        raise SchemaError(path, "space needs an object")
    dim = data.get("dim")
    if not isinstance(dim, int) or dim < 0:
        raise SchemaError(f"{path}/dim", "expected a nonnegative integer")
    cone = cone_from_json(data.get("order"), f"{path}/order")
    if cone_dim(cone) != dim:
        raise SchemaError(f"{path}/order", f"cone dim {cone_dim(cone)} vs space dim {dim}")
    try:
        return partial_order_space(dim, cone)
    except NotPartialOrderError as exc:
        raise SchemaError(f"{path}/order", str(exc)) from None


# ---------------------------------------------------------------------------
# Profiles and pooling scenarios.


def representation_to_json(rep: Representation) -> dict:
    return {
        "space": space_to_json(rep.space),
        "matrix": encode(rep.map.matrix),
        "offset": encode(rep.map.offset),
    }


def representation_from_json(data, path: str, input_dim: int) -> Representation:
    if not isinstance(data, dict):
        raise SchemaError(path, "representation needs an object")
    space = space_from_json(data.get("space"), f"{path}/space")
    matrix = parse_matrix(data.get("matrix", []), f"{path}/matrix", width=input_dim)
    if len(matrix) != space.dim:
        raise SchemaError(f"{path}/matrix", f"expected {space.dim} rows")
    offset = parse_vector(data.get("offset", []), f"{path}/offset")
    if len(offset) != space.dim:
        raise SchemaError(f"{path}/offset", f"expected length {space.dim}")
    return Representation(space, AffineMap(matrix, offset))


def domain_to_json(domain: Domain) -> dict:
    return {"kind": "polytope", "vertices": encode(domain.vertices)}


def domain_from_json(data, path: str) -> Domain:
    if not isinstance(data, dict) or "kind" not in data:
        raise SchemaError(path, "domain needs an object with a 'kind' field")
    kind = data["kind"]
    if kind == "polytope":
        verts = parse_matrix(data.get("vertices", []), f"{path}/vertices")
        if not verts:
            raise SchemaError(f"{path}/vertices", "at least one vertex required")
        return Domain(verts)
    if kind == "simplex":
        m = data.get("outcomes")
        if not isinstance(m, int) or m < 1:
            raise SchemaError(f"{path}/outcomes", "expected a positive integer")
        return simplex_domain(m)
    if kind == "cube":
        n = data.get("atoms")
        if not isinstance(n, int) or n < 0 or n > 16:
            raise SchemaError(f"{path}/atoms", "expected an integer in 0..16")
        return cube_domain(n)
    raise SchemaError(f"{path}/kind", f"unknown domain kind {kind!r}")


def profile_from_json(data, path: str = "") -> Profile:
    domain = domain_from_json(data.get("domain"), f"{path}/domain")
    d = domain.ambient_dim
    individuals = data.get("individuals")
    if not isinstance(individuals, list) or not individuals:
        raise SchemaError(f"{path}/individuals", "expected a nonempty array")
    reps = tuple(
        representation_from_json(r, f"{path}/individuals/{i}", d)
        for i, r in enumerate(individuals)
    )
    social = representation_from_json(data.get("social"), f"{path}/social", d)
    return Profile(domain, reps, social)


def profile_to_json(profile: Profile) -> dict:
    return {
        "kind": "profile",
        "domain": domain_to_json(profile.domain),
        "individuals": [representation_to_json(r) for r in profile.individuals],
        "social": representation_to_json(profile.social),
    }


def measure_from_json(data, path: str, algebra: FiniteAlgebra) -> VectorMeasure:
    if not isinstance(data, dict):
        raise SchemaError(path, "measure needs an object")
    space = space_from_json(data.get("space"), f"{path}/space")
    values = data.get("values")
    if not isinstance(values, dict):
        raise SchemaError(f"{path}/values", "expected an object keyed by atom")
    atom_values = []
    for atom in algebra.atoms:
        if atom not in values:
            raise SchemaError(f"{path}/values", f"missing atom {atom!r}")
        v = parse_vector(values[atom], f"{path}/values/{atom}")
        if len(v) != space.dim:
            raise SchemaError(f"{path}/values/{atom}", f"expected length {space.dim}")
        atom_values.append(v)
    extra = set(values) - set(algebra.atoms)
    if extra:
        raise SchemaError(f"{path}/values", f"unknown atoms {sorted(extra)}")
    return VectorMeasure(algebra, space, tuple(atom_values))


def pooling_from_json(data, path: str = ""):
    atoms = data.get("atoms")
    if not isinstance(atoms, list) or not atoms or not all(isinstance(a, str) for a in atoms):
        raise SchemaError(f"{path}/atoms", "expected a nonempty array of atom names")
    if len(set(atoms)) != len(atoms):
        raise SchemaError(f"{path}/atoms", "atom names must be unique")
    algebra = FiniteAlgebra(tuple(atoms))
    measures_data = data.get("measures")
    if not isinstance(measures_data, list) or not measures_data:
        raise SchemaError(f"{path}/measures", "expected a nonempty array")
    measures = [
        measure_from_json(m, f"{path}/measures/{i}", algebra)
        for i, m in enumerate(measures_data)
    ]
    social = measure_from_json(data.get("social"), f"{path}/social", algebra)
    return algebra, measures, social


# ---------------------------------------------------------------------------
# Scenarios.


class Scenario:
    """A validated scenario file: either a profile or a pooling setup."""

    def __init__(self, kind: str, name: str, payload, expected: Optional[dict]):
        self.kind = kind
        self.name = name
        self.payload = payload
        self.expected = expected


def scenario_from_json(data) -> Scenario:
    if not isinstance(data, dict):
        raise SchemaError("", "scenario must be a JSON object")
    kind = data.get("kind")
    if kind not in ("profile", "pooling"):
        raise SchemaError("/kind", "expected 'profile' or 'pooling'")
    name = data.get("name", "")
    if not isinstance(name, str):
        raise SchemaError("/name", "expected a string")
    expected = data.get("expected")
    if expected is not None and not isinstance(expected, dict):
        raise SchemaError("/expected", "expected an object")
    if kind == "profile":
        payload = profile_from_json(data)
    else:
        payload = pooling_from_json(data)
    return Scenario(kind, name, payload, expected)


def load_scenario(file_path: str) -> Scenario:
    with open(file_path, "r", encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise SchemaError("", f"invalid JSON: {exc}") from None
    return scenario_from_json(data)


# ---------------------------------------------------------------------------
# Generic result encoding.


def encode(obj: Any):
    """Recursively convert results to JSON-ready structures.

    Fractions become strings, tuples become lists, enums their values, and
    dataclasses dictionaries; library objects with dedicated layouts are
    special-cased first.
    """
    if isinstance(obj, Fraction):
        return format_rational(obj)
    if isinstance(obj, Povs):
        return space_to_json(obj)
    if isinstance(obj, Representation):
        return representation_to_json(obj)
    if isinstance(obj, Domain):
        return domain_to_json(obj)
    if isinstance(obj, Subspace):
        return {"ambient_dim": obj.ambient_dim, "basis": encode(obj.basis)}
    if isinstance(obj, AffineMap):
        return {"matrix": encode(obj.matrix), "offset": encode(obj.offset)}
    if isinstance(
        obj,
        (OrthantCone, TrivialCone, PolyhedralH, PolyhedralV, ProductCone, LexCompose, PieceUnionCone),
    ):
        return cone_to_json(obj)
    if isinstance(obj, Enum):
        return obj.value
    if isinstance(obj, frozenset):
        return sorted(obj)
    if is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: encode(getattr(obj, f.name)) for f in fields(obj)}
    if isinstance(obj, dict):
        return {str(k): encode(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [encode(v) for v in obj]
    if isinstance(obj, (str, int, bool)) or obj is None:
        return obj
    raise TypeError(f"cannot encode {type(obj).__name__}")


def dumps(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, indent=2)
