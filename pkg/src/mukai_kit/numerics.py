"""Dimension bookkeeping for moduli of sheaves on a K3 surface.

Covers the stratification of ``M(v)`` by ``dim Hom(E1, E)`` for a rigid
bundle ``E1`` with Mukai vector ``v1``, the Grassmannian fibre dimensions of
the correspondences between strata, and the codimension bound for the
complement of the mu-stable locus together with a brute-force enumeration of
Jordan-Hoelder filtration shapes that re-derives it.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator

from .errors import BelowSpherical, BudgetExceeded, IndexOutOfRange, MukaiError, NotRankOneLattice, NotSpherical
from .lattice import MukaiVector, NSLattice, content, pair, square, twist


def grassmannian_dim(n: int, m: int) -> int:
    """Dimension of the Grassmannian of ``m``-planes in an ``n``-space."""
    if not 0 <= m <= n:
        raise IndexOutOfRange(f"Gr({n}, {m}) is empty")
    return m * (n - m)


@dataclass(frozen=True)
class ModuliDim:
    dim: int
    kind: str  # "point", "k3" or "positive"


def moduli_dim(v: MukaiVector, L: NSLattice) -> ModuliDim:
    s = square(v, L)
    if s < -2:
        raise BelowSpherical(f"<v^2> = {s} < -2: no stable sheaves")
    dim = s + 2
    kind = "point" if dim == 0 else "k3" if dim == 2 else "positive"
    return ModuliDim(dim, kind)


@dataclass(frozen=True)
class StratumReport:
    i: int
    m: int
    v_v1: int
    hom_dim: int
    ext1_dim: int
    k: int
    vG: MukaiVector
    codim: int
    dim_stratum: int
    dim_moduli: int
    in_stated_range: bool
    fiber_grassmannians: dict = field(hash=False)


def stratum_report(v: MukaiVector, v1: MukaiVector, i: int, m: int, L: NSLattice) -> StratumReport:
    """Numerics of the stratum ``M(v)_i`` where ``dim Hom(E1, E) = -<v1,v> - 1 + i``.

    The codimension formula ``(i-1)(i-1-<v,v1>)`` is only claimed for
    ``i >= 1 + <v,v1>``; outside that range the report is still produced but
    ``in_stated_range`` is False.  ``m`` is the rank of the subspace of
    ``Hom(E1, E)`` used by the correspondence to ``w = v - m v1``.
    """
    if square(v1, L) != -2:
        raise NotSpherical("v1 must be spherical")
    if i < 1:
        raise IndexOutOfRange(f"stratum index must be >= 1, got {i}")
    if m < 0:
        raise IndexOutOfRange(f"m must be non-negative, got {m}")
    p = pair(v, v1, L)
    hom_dim = i - 1 - p
    if m > 0 and m > hom_dim:
        raise IndexOutOfRange(f"m = {m} exceeds dim Hom(E1, E) = {hom_dim}")
    ext1 = i - 1
    k = 2 * i - 2 - p
    vG = v + (i - 1) * v1
    codim = (i - 1) * (i - 1 - p)
    dim_moduli = square(v, L) + 2
    dim_stratum = dim_moduli - codim

    # universal extension 0 -> E1^(i-1) -> G -> E -> 0 with G in M(vG)_1
    via_G = square(vG, L) + 2 + (i - 1) * (k - (i - 1))
    if via_G != dim_stratum:
        raise AssertionError(f"stratum bookkeeping mismatch: {via_G} != {dim_stratum}")

    fibers = {}
    if m <= hom_dim:
        w = v - m * v1
        fibers = {
            "over_v": {"n": hom_dim, "m": m, "dim": grassmannian_dim(hom_dim, m)},
            "over_w": {"n": i - 1 + m, "m": m, "dim": grassmannian_dim(i - 1 + m, m)},
            "w": w,
            "w_stratum": i + m,
        }
    return StratumReport(i, m, p, hom_dim, ext1, k, vG, codim, dim_stratum, dim_moduli,
                         i >= 1 + p, fibers)


def correspondence_dims(v: MukaiVector, v1: MukaiVector, i: int, m: int, L: NSLattice) -> tuple[int, int]:
    """``dim N(m v1, v, w)_i`` computed over ``M(v)_i`` and over ``M(w)_{i+m}``.

    The two numbers agree whenever the bookkeeping is consistent.
    """
    rep_v = stratum_report(v, v1, i, m, L)
    w = v - m * v1
    rep_w = stratum_report(w, v1, i + m, 0, L)
    over_v = rep_v.dim_stratum + rep_v.fiber_grassmannians["over_v"]["dim"]
    over_w = rep_w.dim_stratum + rep_v.fiber_grassmannians["over_w"]["dim"]
    return over_v, over_w


@dataclass(frozen=True)
class MuBound:
    bound: Fraction
    hypothesis_holds: bool
    codim_at_least_two: bool
    notes: tuple[str, ...] = ()


def mu_codim_bound(square_v: int, l: int) -> MuBound:
    """Lower bound ``<v^2>/2l - l + 1`` on the codimension of non-mu-stable sheaves."""
    if l < 1:
        raise IndexOutOfRange("l must be positive")
    if square_v % 2:
        raise MukaiError("Mukai squares are even")
    ratio = Fraction(square_v, 2 * l)
    notes = []
    holds = ratio >= l
    if not holds:
        notes.append("hypothesis <v^2>/2l >= l fails; bound not implied")
    if l == 1:
        notes.append("l = 1: every stable sheaf with primitive c1 is mu-stable, bound is informational")
    return MuBound(ratio - l + 1, holds, ratio > l, tuple(notes))


@dataclass(frozen=True)
class FiltrationShape:
    parts: tuple[tuple[int, int], ...]
    squares: tuple[int, ...]
    chi_matrix: tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class ShapeEvaluation:
    shape: FiltrationShape
    k: int
    chi_sum_direct: int
    chi_sum_formula: Fraction
    ext2_bound: int
    codim: Fraction
    chain_bound: Fraction
    special: bool


@dataclass(frozen=True)
class OracleResult:
    min_codim_bound: Fraction | None
    identity_verified: bool
    chain_verified: bool
    shapes_enumerated: int
    mu_bound: MuBound
    assumptions: tuple[str, ...]
    worst: ShapeEvaluation | None = None


ORACLE_ASSUMPTIONS = (
    "sum of Ext^2(E_j, E_i), i < j, is at most k(k+1)/2 - 1 for a general filtration",
    "when r = 1 and every l_i = 1 that sum is at most k(k+1)/2",
    "for r = 1, l = 2 the double dual is trivial of rank 2, so such sheaves form a family of dimension <= 3c2 - 3",
    "parts with <v(E_i)^2> >= -2 are treated as realizable by mu-stable sheaves",
)


def _compositions(l: int) -> Iterator[tuple[int, ...]]:
    for t in range(2, l + 1):
        for cuts in itertools.combinations(range(1, l), t - 1):
            bounds = (0, *cuts, l)
            yield tuple(bounds[j + 1] - bounds[j] for j in range(t))


def _split_a(total: int, caps: list[int]) -> Iterator[tuple[int, ...]]:
    """Integer tuples ``a_i <= caps[i]`` summing to ``total``."""
    if len(caps) == 1:
        if total <= caps[0]:
            yield (total,)
        return
    rest = sum(caps[1:])
    for a0 in range(total - rest, caps[0] + 1):
        for tail in _split_a(total - a0, caps[1:]):
            yield (a0, *tail)


def decompose(v: MukaiVector, l: int) -> tuple[int, int]:
    """``(r, d)`` with ``v = (l r, l d H, a)``."""
    if len(v.xi) != 1:
        raise NotRankOneLattice("filtration shapes are enumerated on Z H only")
    if l < 1 or v.r % l or v.xi[0] % l:
        raise MukaiError(f"v = {v} is not of the form (l r, l d H, a) with l = {l}")
    return v.r // l, v.xi[0] // l


def enumerate_shapes(v: MukaiVector, l: int, L: NSLattice, budget: int = 100_000) -> list[FiltrationShape]:
    """All filtration shapes of ``v`` with at least two parts.

    A part is ``(l_i r, l_i d H, a_i)`` with ``sum l_i = l``, ``sum a_i = a``
    and square at least -2.
    """
    if L.rank != 1:
        raise NotRankOneLattice("filtration shapes are enumerated on Z H only")
    r, d = decompose(v, l)
    if r < 1:
        raise MukaiError("positive rank required")
    h = L.gram[0][0]
    shapes = []
    for comp in _compositions(l):
        # <v_i^2> = l_i^2 d^2 h - 2 l_i r a_i >= -2
        caps = [(li * li * d * d * h + 2) // (2 * li * r) for li in comp]
        for a_parts in _split_a(v.a, caps):
            if len(shapes) >= budget:
                raise BudgetExceeded(f"more than {budget} filtration shapes")
            vecs = [MukaiVector(li * r, (li * d,), ai) for li, ai in zip(comp, a_parts)]
            sq = tuple(pair(x, x, L) for x in vecs)
            chi = tuple(tuple(-pair(x, y, L) for y in vecs) for x in vecs)
            shapes.append(FiltrationShape(tuple(zip(comp, a_parts)), sq, chi))
    return shapes


def evaluate_shape(shape: FiltrationShape, v: MukaiVector, l: int, L: NSLattice) -> ShapeEvaluation:
    r, _ = decompose(v, l)
    sq_v = square(v, L)
    ls = [li for li, _ in shape.parts]
    t = len(ls)
    k = l - max(ls)
    # sum over i > j of chi(E_j, E_i), straight from the pairings
    chi_direct = sum(shape.chi_matrix[j][i] for i in range(t) for j in range(i))
    chi_formula = -sum(Fraction((l - li) * s, 2 * li) for li, s in zip(ls, shape.squares))
    special = r == 1 and all(li == 1 for li in ls)
    ext2 = k * (k + 1) // 2 if special else k * (k + 1) // 2 - 1
    # moduli number <= <v^2> + sum_{i>j} chi(E_j,E_i) + ext2 + t + 1
    codim = Fraction(sq_v + 2) - (sq_v + chi_direct + ext2 + t + 1)
    chain = k * Fraction(sq_v, 2 * l) - l * k + Fraction(k * (k - 1), 2) + 1
    if special:
        chain -= 1
    if special and l == 2:
        # filtrations are replaced by the count of the sheaves themselves
        _, d = decompose(v, l)
        v0 = twist(v, (-d,), L)
        c2 = v0.r - v0.a
        codim = Fraction(sq_v + 2 - (3 * c2 - 3))
        chain = Fraction(sq_v, 2 * l) - l + 1
    return ShapeEvaluation(shape, k, chi_direct, chi_formula, ext2, codim, chain, special)


def filtration_oracle(v: MukaiVector, l: int, L: NSLattice, budget: int = 100_000) -> OracleResult:
    """Brute-force check of the mu-unstable codimension estimate.

    For every filtration shape the sum ``sum_{i>j} chi(E_j, E_i)`` is computed
    from the pairwise pairings and compared with the closed form
    ``-sum_i (l - l_i) <v_i^2> / 2 l_i``; the implied codimension is then
    compared with the chain of estimates ending in ``<v^2>/2l - l + 1``.
    """
    shapes = enumerate_shapes(v, l, L, budget)
    bound = mu_codim_bound(square(v, L), l)
    evals = [evaluate_shape(s, v, l, L) for s in shapes]
    identity_ok = all(Fraction(e.chi_sum_direct) == e.chi_sum_formula for e in evals)
    # the chain of estimates needs a part of non-negative square, i.e. <v^2> > 0
    chain_ok = square(v, L) <= 0 or all(e.codim >= e.chain_bound for e in evals)
    if bound.hypothesis_holds:
        chain_ok = chain_ok and all(e.chain_bound >= bound.bound for e in evals)
    worst = min(evals, key=lambda e: e.codim, default=None)
    return OracleResult(
        worst.codim if worst else None,
        identity_ok,
        chain_ok,
        len(evals),
        bound,
        ORACLE_ASSUMPTIONS,
        worst,
    )


def is_primitive(v: MukaiVector) -> bool:
    return content(v.coords) == 1
