"""Explicit Mukai-vector families on Picard-rank-one K3 lattices.

Two constructions are provided.  ``family_coprime(r, d, s)`` produces a
primitive vector ``v = (r, dH, .)`` of square ``2s`` together with a rigid
class ``v1`` of rank ``r1`` and ``<v, v1> = -1``; ``family_general`` does the
same for ``v = (l r, l d H, .)`` with ``<v^2> = 2l(ls + rp)``.  In both cases
``(H^2) = 2k(s)`` and construction fails unless ``k(s) >= 1``.

The three pairing identities are re-checked with :func:`~mukai_kit.lattice.pair`
every time an instance is built, so a transcription slip in the closed forms
below cannot go unnoticed.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from math import gcd
from typing import Any, Mapping

from .errors import MissingParam, MukaiError, NonPositiveK, NotCoprime, RangeError
from .lattice import MukaiVector, NSLattice, pair


def solve_bezout(r: int, d: int) -> tuple[int, int]:
    """The unique ``(r1, d1)`` with ``r1*d - r*d1 == 1`` and ``0 < r1 <= r``."""
    if r < 1 or d < 1:
        raise RangeError(f"r and d must be positive, got r={r}, d={d}")
    if gcd(r, d) != 1:
        raise NotCoprime(f"gcd(r={r}, d={d}) != 1")
    r1 = pow(d, -1, r) if r > 1 else 1
    if r1 == 0:
        r1 = r
    d1, rem = divmod(r1 * d - 1, r)
    assert rem == 0
    return r1, d1


def solve_pq(l: int, r1: int) -> tuple[int, int]:
    """The unique ``(p, q)`` with ``p*r1 - q*l == -1`` and ``0 <= p < l``."""
    if l < 1 or r1 < 1:
        raise RangeError(f"l and r1 must be positive, got l={l}, r1={r1}")
    if gcd(l, r1) != 1:
        raise NotCoprime(f"gcd(l={l}, r1={r1}) != 1")
    p = (-pow(r1, -1, l)) % l if l > 1 else 0
    q, rem = divmod(p * r1 + 1, l)
    assert rem == 0
    return p, q


def k_coprime(r: int, r1: int, s: int) -> int:
    return s * r1 * r1 + r * r1 - r * r


def k_general(r: int, r1: int, q: int, s: int) -> int:
    return r1 * (q * r + r1 * s) - r * r


@dataclass(frozen=True)
class FamilyInstance:
    kind: str
    params: dict[str, int] = field(hash=False)
    lattice: NSLattice
    v: MukaiVector
    v1: MukaiVector
    identities: dict[str, int] = field(hash=False)

    @property
    def w(self) -> MukaiVector:
        """Image of ``v`` under reflection in ``v1`` (``v - v1`` here)."""
        return self.v - self.v1

    @property
    def spec(self) -> dict[str, Any]:
        """The free parameters that reproduce this instance."""
        keys = ("r", "d", "s") if self.kind == "coprime" else ("l", "r", "d", "r1", "s")
        return {"family": self.kind, **{k: self.params[k] for k in keys}}


def _identities(L: NSLattice, v: MukaiVector, v1: MukaiVector) -> dict[str, int]:
    return {
        "v1_square": pair(v1, v1, L),
        "v_square": pair(v, v, L),
        "v_v1": pair(v, v1, L),
    }


def family_coprime(r: int, d: int, s: int) -> FamilyInstance:
    r1, d1 = solve_bezout(r, d)
    k = k_coprime(r, r1, s)
    if k < 1:
        raise NonPositiveK(f"k(s) = {k} for r={r}, r1={r1}, s={s}")
    L = NSLattice.rank_one(2 * k)
    v1 = MukaiVector(r1, (d1,), d1 * d1 * r + d1 * d1 * s * r1 - r1 * d * d + 2 * d)
    v = MukaiVector(r, (d,), (2 * d * d1 * r1 - r * d1 * d1) * s + d * d * (r1 - r))
    ids = _identities(L, v, v1)
    expected = {"v1_square": -2, "v_square": 2 * s, "v_v1": -1}
    if ids != expected:
        raise AssertionError(f"family identities failed for (r,d,s)=({r},{d},{s}): {ids}")
    params = {"r": r, "d": d, "s": s, "r1": r1, "d1": d1, "k": k}
    return FamilyInstance("coprime", params, L, v, v1, ids)


def family_general(l: int, r: int, d: int, r1: int, s: int) -> FamilyInstance:
    if l < 1 or r1 < 1:
        raise RangeError("l and r1 must be positive")
    if r < 1:
        # d1 is not pinned down by d*r1 - d1*r = 1 when r = 0.
        raise RangeError("r = 0 is not supported")
    if d < 0:
        raise RangeError("d must be non-negative")
    if gcd(r, d) != 1:
        raise NotCoprime(f"gcd(r={r}, d={d}) != 1")
    if gcd(l, r1) != 1:
        raise NotCoprime(f"gcd(l={l}, r1={r1}) != 1")
    if not 0 < r1 < l * r:
        raise RangeError(f"need 0 < r1 < l*r = {l * r}, got r1={r1}")
    d1, rem = divmod(d * r1 - 1, r)
    if rem:
        raise RangeError(f"d*r1 - d1*r = 1 has no solution for d={d}, r1={r1}, r={r}")
    p, q = solve_pq(l, r1)
    k = k_general(r, r1, q, s)
    if k < 1:
        raise NonPositiveK(f"k(s) = {k} for l={l}, r={r}, r1={r1}, q={q}, s={s}")
    L = NSLattice.rank_one(2 * k)
    v = MukaiVector(l * r, (l * d,), l * ((1 + d * r1) * d1 * s + d * d * q * r1 - r * d * d) - p)
    v1 = MukaiVector(r1, (d1,), r1 * (-d * d + d1 * d1 * s) + d1 * d1 * r * q + 2 * d)
    ids = _identities(L, v, v1)
    expected = {"v1_square": -2, "v_square": 2 * l * (l * s + r * p), "v_v1": -1}
    if ids != expected:
        raise AssertionError(f"family identities failed for (l,r,d,r1,s)=({l},{r},{d},{r1},{s}): {ids}")
    params = {"l": l, "r": r, "d": d, "r1": r1, "s": s, "d1": d1, "p": p, "q": q, "k": k}
    return FamilyInstance("general", params, L, v, v1, ids)


def build_family(spec: Mapping[str, Any]) -> FamilyInstance:
    """Rebuild an instance from ``{"family": ..., <params>}``."""
    kind = spec.get("family")
    try:
        if kind == "coprime":
            return family_coprime(spec["r"], spec["d"], spec["s"])
        if kind == "general":
            return family_general(spec["l"], spec["r"], spec["d"], spec["r1"], spec["s"])
    except KeyError as exc:
        raise MissingParam(f"family parameter {exc.args[0]!r} missing") from None
    raise MukaiError(f"unknown family kind {kind!r}")


class Hypothesis(str, Enum):
    # k(s) > 0 under r1 >= r/2 and one of two small-rank cases
    K_CRITERION = "k-criterion"
    # <v^2>/2 > max(rl(rl-1), l^2): the non-primitive c1 deformation bound
    DEFORMATION_BOUND = "deformation-bound"
    MU_BOUND = "mu-bound"
    MU_NONEMPTY = "mu-nonempty"
    K_POSITIVE = "k-positive"
    DEFORM_MATCH = "deform-match"


CITATIONS = {
    Hypothesis.K_CRITERION: "k(s) > 0 when r1 >= r/2 and either (r = 2, s >= 3) or (r1 >= 2r/3, s >= 1)",
    Hypothesis.DEFORMATION_BOUND: "<v^2>/2 > max(rl(rl-1), l^2)",
    Hypothesis.MU_BOUND: "codim of the mu-unstable locus >= <v^2>/2l - l + 1; it is >= 2 once <v^2>/2l > l",
    Hypothesis.MU_NONEMPTY: "mu-stable locus is nonempty iff <v^2>/2l >= l (never equality for primitive v)",
    Hypothesis.K_POSITIVE: "(H^2) = 2k(s) must be a polarization degree: k(s) >= 1",
    Hypothesis.DEFORM_MATCH: "same l, r, <v^2>, a mod l and primitive r + xi on both sides",
}

STRICT = {
    Hypothesis.K_CRITERION: False,
    Hypothesis.DEFORMATION_BOUND: True,
    Hypothesis.MU_BOUND: True,
    Hypothesis.MU_NONEMPTY: False,
    Hypothesis.K_POSITIVE: True,
    Hypothesis.DEFORM_MATCH: False,
}


@dataclass(frozen=True)
class HypothesisReport:
    """Outcome of one numerical hypothesis.

    ``margin`` is exact; ``passed`` is ``margin > 0`` for strict inequalities
    and ``margin >= 0`` otherwise.
    """

    kind: Hypothesis
    inputs: dict[str, int] = field(hash=False)
    passed: bool
    margin: Fraction
    citation: str
    details: dict[str, Any] = field(default_factory=dict, hash=False)


def _need(params: Mapping[str, Any], *names: str) -> list[int]:
    missing = [n for n in names if n not in params]
    if missing:
        raise MissingParam(f"missing parameter(s): {', '.join(missing)}")
    return [int(params[n]) for n in names]


def _report(kind: Hypothesis, inputs: dict, margin, details=None) -> HypothesisReport:
    margin = Fraction(margin)
    passed = margin > 0 if STRICT[kind] else margin >= 0
    return HypothesisReport(kind, dict(inputs), passed, margin, CITATIONS[kind], dict(details or {}))


def check_hypotheses(kind: Hypothesis | str, params: Mapping[str, Any]) -> HypothesisReport:
    """Evaluate one hypothesis on integer parameters.

    Required keys per kind: ``k-criterion`` (r, r1, s); ``deformation-bound``
    (l, r, square); ``mu-bound`` and ``mu-nonempty`` (l, square, optionally
    primitive); ``k-positive`` (r, r1, s, plus l for the general family);
    ``deform-match`` is produced by the certificate verifier only.
    """
    kind = Hypothesis(kind)
    if kind is Hypothesis.K_CRITERION:
        r, r1, s = _need(params, "r", "r1", "s")
        half = Fraction(r1) - Fraction(r, 2)
        case_rank2 = min(-abs(r - 2), s - 3)
        case_large = min(Fraction(r1) - Fraction(2 * r, 3), s - 1)
        margin = min(half, max(case_rank2, case_large))
        k = k_coprime(r, r1, s)
        report = _report(kind, {"r": r, "r1": r1, "s": s}, margin, {"k": k})
        # A passing hypothesis must force k > 0.
        report.details["consistent"] = (not report.passed) or k > 0
        return report
    if kind is Hypothesis.DEFORMATION_BOUND:
        l, r, sq = _need(params, "l", "r", "square")
        threshold = max(r * l * (r * l - 1), l * l)
        return _report(kind, {"l": l, "r": r, "square": sq}, Fraction(sq, 2) - threshold,
                       {"threshold": threshold})
    if kind in (Hypothesis.MU_BOUND, Hypothesis.MU_NONEMPTY):
        l, sq = _need(params, "l", "square")
        ratio = Fraction(sq, 2 * l)
        inputs = {"l": l, "square": sq}
        details: dict[str, Any] = {}
        if kind is Hypothesis.MU_BOUND:
            details["bound"] = ratio - l + 1
            details["hypothesis_holds"] = ratio >= l
        elif "primitive" in params:
            inputs["primitive"] = int(bool(params["primitive"]))
            details["consistent"] = not (params["primitive"] and ratio == l)
        return _report(kind, inputs, ratio - l, details)
    if kind is Hypothesis.K_POSITIVE:
        r, r1, s = _need(params, "r", "r1", "s")
        if "l" in params:
            (l,) = _need(params, "l")
            _, q = solve_pq(l, r1)
            k = k_general(r, r1, q, s)
            inputs = {"l": l, "r": r, "r1": r1, "s": s}
        else:
            k = k_coprime(r, r1, s)
            inputs = {"r": r, "r1": r1, "s": s}
        return _report(kind, inputs, k, {"k": k})
    raise MukaiError(f"{kind.value} reports are produced by the certificate verifier")


def family_reports(inst: FamilyInstance) -> list[HypothesisReport]:
    """Every hypothesis report that makes sense for a constructed instance."""
    p = inst.params
    sq = inst.identities["v_square"]
    if inst.kind == "coprime":
        reports = [
            check_hypotheses(Hypothesis.K_POSITIVE, p),
            check_hypotheses(Hypothesis.K_CRITERION, p),
        ]
    else:
        reports = [
            check_hypotheses(Hypothesis.K_POSITIVE, p),
            check_hypotheses(Hypothesis.DEFORMATION_BOUND, {"l": p["l"], "r": p["r"], "square": sq}),
            check_hypotheses(Hypothesis.MU_BOUND, {"l": p["l"], "square": sq}),
            check_hypotheses(Hypothesis.MU_NONEMPTY, {"l": p["l"], "square": sq, "primitive": True}),
        ]
    return reports
