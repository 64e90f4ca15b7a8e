"""JSON encoding for every public data type.

Integers with ``|n| >= 2**53`` are written as decimal strings so that they
survive consumers that parse numbers as doubles; both forms are accepted on
input.  Rationals are written as ``"p/q"`` strings (or plain integers when
the denominator is 1).
"""
from __future__ import annotations

import json
from fractions import Fraction
from typing import Any, Mapping, Sequence

from .certificates import Certificate, Move, State
from .errors import MukaiError
from .families import FamilyInstance, Hypothesis, HypothesisReport
from .lattice import MukaiVector, NSLattice, OrthBasis
from .numerics import MuBound, OracleResult, StratumReport
from .walls import AmpleConeSpec, Chamber, Wall

SAFE = 2 ** 53


class SchemaError(MukaiError):
    pass


def enc_int(n: int) -> int | str:
    return str(n) if abs(n) >= SAFE else n


def dec_int(x: Any) -> int:
    if isinstance(x, bool):
        raise SchemaError(f"expected an integer, got {x!r}")
    if isinstance(x, int):
        return x
    if isinstance(x, str):
        try:
            return int(x.strip())
        except ValueError:
            pass
    raise SchemaError(f"expected an integer, got {x!r}")


def enc_frac(q: Fraction) -> int | str:
    q = Fraction(q)
    return enc_int(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def dec_frac(x: Any) -> Fraction:
    if isinstance(x, bool):
        raise SchemaError(f"expected a rational, got {x!r}")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except ValueError:
            pass
    raise SchemaError(f"expected a rational, got {x!r}")


def _ints(xs: Any) -> tuple[int, ...]:
    if not isinstance(xs, (list, tuple)):
        raise SchemaError(f"expected a list of integers, got {xs!r}")
    return tuple(dec_int(x) for x in xs)


def _obj(data: Any, *keys: str) -> Mapping:
    if not isinstance(data, Mapping):
        raise SchemaError(f"expected an object, got {type(data).__name__}")
    missing = [k for k in keys if k not in data]
    if missing:
        raise SchemaError(f"missing field(s): {', '.join(missing)}")
    return data


# -- lattice and vectors ------------------------------------------------------

def lattice_to_json(L: NSLattice) -> dict:
    return {"rank": L.rank, "gram": [[enc_int(g) for g in row] for row in L.gram],
            "basis": list(L.basis_names)}


def lattice_from_json(data: Any) -> NSLattice:
    data = _obj(data, "gram")
    if not isinstance(data["gram"], list):
        raise SchemaError("gram must be a list of rows")
    gram = tuple(_ints(row) for row in data["gram"])
    basis = data.get("basis") or ()
    if not isinstance(basis, (list, tuple)) or not all(isinstance(b, str) for b in basis):
        raise SchemaError("basis must be a list of strings")
    L = NSLattice(gram, tuple(basis))
    if "rank" in data and dec_int(data["rank"]) != L.rank:
        raise SchemaError(f"rank {data['rank']} does not match the Gram matrix")
    return L


def class_to_json(x: Sequence[int]) -> list:
    return [enc_int(c) for c in x]


def vector_to_json(v: MukaiVector) -> dict:
    return {"r": enc_int(v.r), "xi": class_to_json(v.xi), "a": enc_int(v.a)}


def vector_from_json(data: Any) -> MukaiVector:
    data = _obj(data, "r", "xi", "a")
    return MukaiVector(dec_int(data["r"]), _ints(data["xi"]), dec_int(data["a"]))


def parse_vector_text(text: str) -> MukaiVector:
    """Accept JSON ``{"r":..,"xi":[..],"a":..}``, a JSON list, or ``"(r, xi..., a)"``."""
    text = text.strip()
    if text.startswith("{") or text.startswith("["):
        data = json.loads(text)
        if isinstance(data, list):
            return MukaiVector.from_coords(_ints(data))
        return vector_from_json(data)
    if text.startswith("(") and text.endswith(")"):
        parts = [p for p in text[1:-1].split(",") if p.strip()]
        return MukaiVector.from_coords(tuple(dec_int(p) for p in parts))
    raise SchemaError(f"cannot read a Mukai vector from {text!r}")


def orth_to_json(ob: OrthBasis) -> dict:
    return {"vector": vector_to_json(ob.vector),
            "basis": [vector_to_json(b) for b in ob.basis],
            "gram": [[enc_int(g) for g in row] for row in ob.gram]}


# -- reports ------------------------------------------------------------------

def _plain(x: Any) -> Any:
    if isinstance(x, bool) or x is None or isinstance(x, str):
        return x
    if isinstance(x, int):
        return enc_int(x)
    if isinstance(x, Fraction):
        return enc_frac(x)
    if isinstance(x, MukaiVector):
        return vector_to_json(x)
    if isinstance(x, Mapping):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    raise TypeError(f"cannot encode {type(x).__name__}")


def report_to_json(rep: HypothesisReport) -> dict:
    return {"kind": rep.kind.value, "inputs": _plain(rep.inputs), "passed": rep.passed,
            "margin": enc_frac(rep.margin), "citation": rep.citation, "details": _plain(rep.details)}


def _details_from_json(data: Any) -> dict:
    if not isinstance(data, Mapping):
        raise SchemaError("details must be an object")
    out = {}
    for key, val in data.items():
        if key in ("bound",):
            out[key] = dec_frac(val)
        elif key == "problems":
            out[key] = list(val)
        elif isinstance(val, (bool, list)):
            out[key] = val
        else:
            out[key] = dec_int(val)
    return out


def report_from_json(data: Any) -> HypothesisReport:
    data = _obj(data, "kind", "inputs", "passed", "margin", "citation")
    try:
        kind = Hypothesis(data["kind"])
    except ValueError:
        raise SchemaError(f"unknown hypothesis kind {data['kind']!r}") from None
    inputs = {str(k): dec_int(v) for k, v in _obj(data["inputs"]).items()}
    if not isinstance(data["passed"], bool):
        raise SchemaError("passed must be a boolean")
    return HypothesisReport(kind, inputs, data["passed"], dec_frac(data["margin"]), str(data["citation"]),
                            _details_from_json(data.get("details", {})))


def family_to_json(inst: FamilyInstance, reports: Sequence[HypothesisReport] = ()) -> dict:
    return {
        "family": inst.kind,
        "params": _plain(inst.params),
        "lattice": lattice_to_json(inst.lattice),
        "v": vector_to_json(inst.v),
        "v1": vector_to_json(inst.v1),
        "w": vector_to_json(inst.w),
        "identities": _plain(inst.identities),
        "reports": [report_to_json(r) for r in reports],
    }


def stratum_to_json(rep: StratumReport) -> dict:
    return _plain({
        "i": rep.i, "m": rep.m, "v_v1": rep.v_v1, "hom_dim": rep.hom_dim, "ext1_dim": rep.ext1_dim,
        "k": rep.k, "vG": rep.vG, "codim": rep.codim, "dim_stratum": rep.dim_stratum,
        "dim_moduli": rep.dim_moduli, "in_stated_range": rep.in_stated_range,
        "fiber_grassmannians": rep.fiber_grassmannians,
    })


def mu_bound_to_json(b: MuBound) -> dict:
    return {"bound": enc_frac(b.bound), "hypothesis_holds": b.hypothesis_holds,
            "codim_at_least_two": b.codim_at_least_two, "notes": list(b.notes)}


def oracle_to_json(o: OracleResult) -> dict:
    return {
        "min_codim_bound": None if o.min_codim_bound is None else enc_frac(o.min_codim_bound),
        "identity_verified": o.identity_verified,
        "chain_verified": o.chain_verified,
        "shapes_enumerated": o.shapes_enumerated,
        "mu_bound": mu_bound_to_json(o.mu_bound),
        "assumptions": list(o.assumptions),
    }


# -- walls ----------------------------------------------------------------------

def cone_from_json(data: Any) -> AmpleConeSpec:
    data = _obj(data, "generators", "reference")
    gens = tuple(tuple(dec_frac(c) for c in g) for g in data["generators"])
    return AmpleConeSpec(gens, tuple(dec_frac(c) for c in data["reference"]))


def cone_to_json(cone: AmpleConeSpec) -> dict:
    return {"generators": [[enc_frac(c) for c in g] for g in cone.generators],
            "reference": [enc_frac(c) for c in cone.reference]}


def wall_to_json(w: Wall) -> dict:
    return {"D": class_to_json(w.D), "D_square": enc_int(w.D_square),
            "witnesses": [{"xi_F": class_to_json(x), "chi_F": enc_int(c)} for x, c in w.witnesses]}


def wall_from_json(data: Any) -> Wall:
    data = _obj(data, "D", "witnesses")
    wits = tuple((_ints(_obj(w, "xi_F")["xi_F"]), dec_int(w["chi_F"])) for w in data["witnesses"])
    return Wall(_ints(data["D"]), wits, dec_int(data.get("D_square", 0)))


def chamber_to_json(c: Chamber, cone: AmpleConeSpec) -> dict:
    return {"lower": enc_frac(c.lower), "upper": enc_frac(c.upper),
            "sample": [enc_frac(x) for x in c.sample(cone)]}


# -- certificates ----------------------------------------------------------------

def state_to_json(s: State) -> dict:
    return {"lattice": lattice_to_json(s.lattice), "vector": vector_to_json(s.vector)}


def state_from_json(data: Any) -> State:
    data = _obj(data, "lattice", "vector")
    return State(lattice_from_json(data["lattice"]), vector_from_json(data["vector"]))


def move_to_json(m: Move) -> dict:
    out: dict[str, Any] = {"kind": m.kind}
    if m.kind == "twist":
        out["N"] = class_to_json(m.N)
        out["result"] = state_to_json(m.result)
    elif m.kind == "reflect":
        out.update(direction=m.direction, v1=vector_to_json(m.v1), family=_plain(m.family),
                   result=state_to_json(m.result))
    elif m.kind == "deform":
        out.update(target_lattice=lattice_to_json(m.result.lattice),
                   target_vector=vector_to_json(m.result.vector))
    out["checks"] = [report_to_json(r) for r in m.checks]
    out["justification"] = m.justification
    return out


def move_from_json(data: Any) -> Move:
    data = _obj(data, "kind")
    kind = data["kind"]
    checks = tuple(report_from_json(r) for r in data.get("checks", []))
    just = str(data.get("justification", ""))
    if kind == "twist":
        data = _obj(data, "N", "result")
        return Move("twist", state_from_json(data["result"]), N=_ints(data["N"]), checks=checks,
                    justification=just)
    if kind == "reflect":
        data = _obj(data, "direction", "v1", "family", "result")
        fam = _obj(data["family"], "family")
        family = {k: (v if k == "family" else dec_int(v)) for k, v in fam.items()}
        return Move("reflect", state_from_json(data["result"]), v1=vector_from_json(data["v1"]),
                    family=family, direction=data["direction"], checks=checks, justification=just)
    if kind == "deform":
        data = _obj(data, "target_lattice", "target_vector")
        result = State(lattice_from_json(data["target_lattice"]), vector_from_json(data["target_vector"]))
        return Move("deform", result, checks=checks, justification=just)
    raise SchemaError(f"unknown move kind {kind!r}")


def certificate_to_json(c: Certificate) -> dict:
    return {
        "initial": state_to_json(c.initial),
        "square": enc_int(c.square),
        "moves": [move_to_json(m) for m in c.moves],
        "final": vector_to_json(c.final),
        "target_n": enc_int(c.target_n),
    }


def certificate_from_json(data: Any) -> Certificate:
    data = _obj(data, "initial", "moves", "final", "target_n", "square")
    if not isinstance(data["moves"], list):
        raise SchemaError("moves must be a list")
    return Certificate(
        state_from_json(data["initial"]),
        tuple(move_from_json(m) for m in data["moves"]),
        vector_from_json(data["final"]),
        dec_int(data["target_n"]),
        dec_int(data["square"]),
    )


def dumps(obj: Any) -> str:
    return json.dumps(obj, indent=2, sort_keys=False)
