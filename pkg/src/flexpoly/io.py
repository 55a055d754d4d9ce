"""JSON encodings of specs, polytopes, frames and reports.

Indices are 0-based everywhere. Output is canonical (sorted keys, fixed
indentation), so equal inputs give byte-identical files.
"""

from __future__ import annotations

import json
import math
from dataclasses import is_dataclass
from enum import Enum

import numpy as np

from . import epbq
from .errors import ContractViolation, SpecError
from .flexbuild import Decomposition, FlexiblePolytope, FlexSpec, Frame

_SPEC_KEYS = {"space", "curve", "blocks", "lambda", "g_within"}
_SPEC_REQUIRED = {"curve", "blocks", "lambda"}


def _key(k) -> str:
    if isinstance(k, tuple):
        return ",".join(str(int(i)) for i in k)
    return str(k.value if isinstance(k, Enum) else k)


def jsonable(x):
    """Convert numpy/enum/tuple-keyed data to plain JSON values; NaN -> null, inf -> "inf"."""
    if isinstance(x, dict):
        return {_key(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return jsonable(x.tolist())
    if isinstance(x, Enum):
        return x.value
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if math.isnan(x):
            return None
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return x
    if x is None or isinstance(x, str):
        return x
    if is_dataclass(x):
        return jsonable(vars(x))
    raise TypeError(f"cannot encode {type(x).__name__}")


def dumps(obj) -> str:
    return json.dumps(jsonable(obj), indent=2, sort_keys=True, allow_nan=False) + "\n"


def loads(text: str, what: str = "input"):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecError(f"malformed JSON in {what} at line {exc.lineno} column {exc.colno}: {exc.msg}") from exc


def _where(path: str, exc: Exception) -> SpecError:
    return SpecError(f"{path}: {exc}")


def spec_from_json(obj) -> FlexSpec:
    if not isinstance(obj, dict):
        raise SpecError("$: spec must be a JSON object")
    extra = set(obj) - _SPEC_KEYS
    if extra:
        raise SpecError(f"$: unknown fields {sorted(extra)}")
    missing = _SPEC_REQUIRED - set(obj)
    if missing:
        raise SpecError(f"$: missing fields {sorted(missing)}")
    try:
        curve = epbq.curve_from_json(obj["curve"])
    except ContractViolation as exc:
        raise _where("$.curve", exc) from exc
    blocks = obj["blocks"]
    if not isinstance(blocks, list) or not all(isinstance(b, list) for b in blocks):
        raise SpecError("$.blocks: must be a list of index lists")
    try:
        n = sum(len(b) for b in blocks)
        dec = Decomposition(n, tuple(tuple(int(p) for p in b) for b in blocks))
    except (TypeError, ValueError) as exc:
        raise _where("$.blocks", exc) from exc
    lam = obj["lambda"]
    if not isinstance(lam, list) or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in lam):
        raise SpecError("$.lambda: must be a list of numbers")
    gw = {}
    raw = obj.get("g_within", {})
    if not isinstance(raw, dict):
        raise SpecError("$.g_within: must be an object keyed by \"p,q\"")
    for key, v in raw.items():
        try:
            p, q = (int(s) for s in key.split(","))
        except ValueError as exc:
            raise SpecError(f"$.g_within[{key!r}]: key must look like \"p,q\"") from exc
        if not isinstance(v, (int, float)) or isinstance(v, bool):
            raise SpecError(f"$.g_within[{key!r}]: value must be a number")
        gw[(min(p, q), max(p, q))] = float(v)
    space = obj.get("space", "auto")
    if space not in ("auto", "euclidean", "spherical", "hyperbolic"):
        raise SpecError(f"$.space: unknown space {space!r}")
    return FlexSpec(curve, dec, tuple(float(v) for v in lam), gw, space)


def spec_to_json(spec: FlexSpec) -> dict:
    return {
        "space": spec.space,
        "curve": epbq.curve_to_json(spec.curve),
        "blocks": [list(b) for b in spec.decomp.blocks],
        "lambda": list(spec.lam),
        "g_within": {f"{p},{q}": v for (p, q), v in sorted(spec.g_within.items())},
    }


def polytope_to_json(poly: FlexiblePolytope) -> dict:
    bf = poly.butterfly
    return {
        "spec": spec_to_json(poly.spec),
        "space": {"kind": bf.space.kind.value, "n": bf.space.n},
        "G": poly.pair.G,
        "H": poly.pair.H,
        "classification": poly.classification.to_json(),
        "relations": {"A": poly.biquad.A, "B": poly.biquad.B, "E": poly.biquad.E},
        "butterfly": {
            "a": bf.a,
            "b0": bf.b0,
            "normals": bf.normals,
            "duals": bf.duals,
            "m": bf.m,
            "altitude_a": bf.alt_a,
            "altitude_b": bf.alt_b,
        },
    }


def frame_to_json(fr: Frame) -> dict:
    return {"u": fr.u, "t": fr.t, "phi": fr.phi, "a": fr.a, "b": fr.b}


def frame_obj(fr: Frame) -> str:
    """Wavefront OBJ of a euclidean octahedron: vertices a_1..a_3, b_1..b_3 and 8 triangles."""
    lines = ["# flexible octahedron frame", f"# u = {fr.u!r}"]
    for v in list(fr.a) + list(fr.b):
        lines.append("v " + " ".join(f"{c:.17g}" for c in v))
    for mask in range(8):
        face = [(i + 1) if not (mask >> i) & 1 else (i + 4) for i in range(3)]
        lines.append("f " + " ".join(map(str, face)))
    return "\n".join(lines) + "\n"
