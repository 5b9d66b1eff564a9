"""JSON encoding and decoding for quivers, relations, representations and polynomials.

Floats are written with 17 significant digits so doubles round-trip exactly.
Complex numbers are ``[re, im]`` pairs and fractions are ``"p/q"`` strings.
"""
from __future__ import annotations

import json
import math
from fractions import Fraction
from pathlib import Path as FsPath
from typing import Any

import numpy as np

from .charvar import SymPoly
from .path_algebra import Relation
from .quiver import Edge, Path, Quiver, QuiverError
from .representation import Representation


class InputError(ValueError):
    """Input that does not follow the documented JSON schema."""


# -- encoding ----------------------------------------------------------------------------

def _format_float(x: float) -> str:
    if not math.isfinite(x):
        raise ValueError(f"cannot serialize non-finite float {x!r}")
    return format(x, ".17g")


def to_plain(obj: Any) -> Any:
    """Convert numpy values, fractions and complex numbers to JSON-ready values."""
    if isinstance(obj, dict):
        return {str(k): to_plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_plain(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return [float(obj.real), float(obj.imag)]
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    return obj


def dumps(obj: Any) -> str:
    """Deterministic JSON text with fixed float formatting."""
    return _encode(to_plain(obj))


def _encode(obj: Any) -> str:
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{json.dumps(k)}: {_encode(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, list):
        return "[" + ", ".join(_encode(v) for v in obj) + "]"
    if isinstance(obj, float):
        return _format_float(obj)
    return json.dumps(obj)


def complex_to_json(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


def quiver_to_json(q: Quiver) -> dict:
    return {"vertices": list(q.labels),
            "edges": [{"id": e.id, "tail": e.tail, "head": e.head} for e in q.edges]}


def matrix_to_json(m: np.ndarray) -> list:
    return [[complex_to_json(v) for v in row] for row in np.asarray(m)]


def representation_to_json(rep: Representation) -> dict:
    return {"quiver": quiver_to_json(rep.quiver), "dims": list(rep.dims),
            "matrices": {str(e): matrix_to_json(m) for e, m in enumerate(rep.maps)}}


def relation_to_json(rel: Relation) -> dict:
    return {"terms": [{"coeff": complex_to_json(complex(c)), "path": list(p.edges)} for c, p in rel.terms]}


def sympoly_to_json(p: SymPoly) -> dict:
    terms = []
    for exp in sorted(p.terms):
        c = p.terms[exp]
        terms.append({"exp": list(exp), "coeff": complex_to_json(c) if isinstance(c, complex) else str(c)})
    return {"families": [[n, k] for n, k in p.families], "terms": terms}


# -- decoding ----------------------------------------------------------------------------

def load_json(path: str | FsPath) -> Any:
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: {exc}") from exc
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from exc


def _need(obj: dict, key: str, where: str):
    if not isinstance(obj, dict) or key not in obj:
        raise InputError(f"{where}: missing key {key!r}")
    return obj[key]


def parse_complex(v, where: str = "value") -> complex:
    if isinstance(v, bool):
        raise InputError(f"{where}: expected a number or [re, im], got a boolean")
    if isinstance(v, (int, float)):
        return complex(v)
    if isinstance(v, (list, tuple)) and len(v) == 2 and all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in v):
        return complex(float(v[0]), float(v[1]))
    raise InputError(f"{where}: expected a number or [re, im], got {v!r}")


def parse_matrix(rows, where: str = "matrix") -> np.ndarray:
    if not isinstance(rows, list) or any(not isinstance(r, list) for r in rows):
        raise InputError(f"{where}: expected a list of rows")
    widths = {len(r) for r in rows}
    if len(widths) > 1:
        raise InputError(f"{where}: ragged rows")
    out = np.array([[parse_complex(v, where) for v in r] for r in rows], dtype=complex)
    return out.reshape(len(rows), widths.pop() if widths else 0)


def quiver_from_json(obj) -> Quiver:
    verts = _need(obj, "vertices", "quiver")
    edges = _need(obj, "edges", "quiver")
    if isinstance(verts, int):
        labels = [f"v{i}" for i in range(verts)]
    elif isinstance(verts, list):
        labels = [str(v) for v in verts]
    else:
        raise InputError("quiver: 'vertices' must be a list of labels or a count")
    if not isinstance(edges, list):
        raise InputError("quiver: 'edges' must be a list")
    try:
        parsed = []
        for k, e in enumerate(edges):
            if isinstance(e, dict):
                parsed.append(Edge(int(e.get("id", k)), int(_need(e, "tail", "edge")), int(_need(e, "head", "edge"))))
            elif isinstance(e, list) and len(e) == 2:
                parsed.append(Edge(k, int(e[0]), int(e[1])))
            else:
                raise InputError(f"quiver: edge {k} must be an object or a [tail, head] pair")
        return Quiver(tuple(labels), tuple(parsed))
    except (TypeError, QuiverError) as exc:
        raise InputError(f"quiver: {exc}") from exc


def _resolve_quiver(ref, base: FsPath | None) -> Quiver:
    if isinstance(ref, str):
        path = FsPath(ref)
        if base is not None and not path.is_absolute():
            path = base / path
        return quiver_from_json(load_json(path))
    return quiver_from_json(ref)


def representation_from_json(obj, base: FsPath | None = None) -> Representation:
    q = _resolve_quiver(_need(obj, "quiver", "representation"), base)
    dims = _need(obj, "dims", "representation")
    mats = obj.get("matrices", {})
    if not isinstance(dims, list) or not isinstance(mats, dict):
        raise InputError("representation: 'dims' must be a list and 'matrices' an object")
    try:
        maps = {int(k): parse_matrix(v, f"matrix {k}") for k, v in mats.items()}
    except InputError:
        raise
    except ValueError as exc:
        raise InputError(f"representation: bad edge key ({exc})") from exc
    try:
        return Representation(q, [int(d) for d in dims], maps)
    except (TypeError, QuiverError) as exc:
        raise InputError(f"representation: {exc}") from exc


def relations_from_json(obj, q: Quiver) -> list[Relation]:
    if isinstance(obj, list):
        items = obj
    elif isinstance(obj, dict) and "relations" in obj:
        items = obj["relations"]
    else:
        items = [obj]
    out = []
    for k, r in enumerate(items):
        terms = _need(r, "terms", f"relation {k}")
        try:
            out.append(Relation(tuple((parse_complex(_need(t, "coeff", "term")),
                                       Path(q, tuple(int(e) for e in _need(t, "path", "term"))))
                                      for t in terms)))
        except (TypeError, QuiverError) as exc:
            raise InputError(f"relation {k}: {exc}") from exc
    return out


def sympoly_from_json(obj) -> SymPoly:
    fams = _need(obj, "families", "polynomial")
    terms = _need(obj, "terms", "polynomial")
    try:
        families = [(str(n), int(k)) for n, k in fams]
        parsed = []
        for t in terms:
            c = _need(t, "coeff", "term")
            if isinstance(c, list) and len(c) == 1:
                c = c[0]
            if isinstance(c, str):
                c = Fraction(c)
            elif isinstance(c, list):
                z = parse_complex(c, "coeff")
                c = Fraction(z.real) if z.imag == 0 else z
            elif isinstance(c, (int, float)) and not isinstance(c, bool):
                c = Fraction(c)
            else:
                raise InputError(f"polynomial: bad coefficient {c!r}")
            parsed.append((tuple(int(e) for e in _need(t, "exp", "term")), c))
        return SymPoly(families, parsed)
    except InputError:
        raise
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise InputError(f"polynomial: {exc}") from exc


def load_representation(path: str | FsPath) -> Representation:
    path = FsPath(path)
    return representation_from_json(load_json(path), path.parent)


def load_quiver(path: str | FsPath) -> Quiver:
    return quiver_from_json(load_json(path))
