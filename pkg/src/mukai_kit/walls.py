"""Numerical walls for sheaves of pure dimension one.

For ``v = (0, xi_E, a)`` the Euler characteristic is ``chi(E) = a``.  A
subsheaf with ``c1 = xi_F`` and ``chi = chi_F`` gives the class
``D = chi_F xi_E - chi_E xi_F``; its wall ``{x ample : (x, D) = 0}`` can only be
nonempty if ``(D^2) <= 0``.  Since ``(D^2)`` is a quadratic in ``chi_F`` with
positive leading coefficient ``(xi_E^2)``, each candidate ``xi_F`` admits
finitely many ``chi_F`` and the set of walls is finite.

Which classes ``xi_F`` actually occur as first Chern classes of subsheaves is
geometric and is not decided here: the candidate set is supplied by the
caller, so the output is the set of *numerical* walls for that set.
"""
from __future__ import annotations

import itertools
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import Iterable, Sequence

from .errors import InvalidCone, NonPositiveSquare, NotPureDimensionOne, NotRankTwo
from .lattice import MukaiVector, NSClass, NSLattice, as_class, content

RationalClass = tuple[Fraction, ...]


def thread_count() -> int:
    """Worker cap from ``MUKAI_KIT_THREADS`` (default: all cores)."""
    raw = os.environ.get("MUKAI_KIT_THREADS")
    if raw:
        try:
            n = int(raw)
        except ValueError:
            n = 0
        if n >= 1:
            return n
    return os.cpu_count() or 1


def _qdot(L: NSLattice, x: Sequence, y: Sequence) -> Fraction:
    return sum((Fraction(xi) * g * Fraction(yj) for xi, row in zip(x, L.gram) for g, yj in zip(row, y)),
               Fraction(0))


@dataclass(frozen=True)
class AmpleConeSpec:
    generators: tuple[RationalClass, ...]
    reference: RationalClass

    def __post_init__(self):
        gens = tuple(tuple(Fraction(c) for c in g) for g in self.generators)
        ref = tuple(Fraction(c) for c in self.reference)
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "reference", ref)

    def validate(self, L: NSLattice) -> None:
        if len(self.generators) < 1:
            raise InvalidCone("cone needs at least one generator")
        for g in (*self.generators, self.reference):
            if len(g) != L.rank:
                raise InvalidCone("cone classes must have one coordinate per basis vector")
        if _qdot(L, self.reference, self.reference) <= 0:
            raise InvalidCone("reference class must have positive square")
        for g in self.generators:
            if _qdot(L, self.reference, g) <= 0:
                raise InvalidCone(f"reference must pair positively with generator {g}")
        for g, h in itertools.combinations(self.generators, 2):
            if _proportional(g, h):
                raise InvalidCone(f"generators {g} and {h} are proportional")

    def crossed_by(self, L: NSLattice, D: Sequence[int]) -> bool:
        """Whether ``(x, D) = 0`` meets the open cone.

        For a polyhedral cone this happens exactly when the linear form
        ``x -> (x, D)`` takes both signs on the generators.
        """
        signs = {(_qdot(L, g, D) > 0) - (_qdot(L, g, D) < 0) for g in self.generators}
        return 1 in signs and -1 in signs


def _proportional(x: Sequence, y: Sequence) -> bool:
    return all(a * d == b * c for (a, b), (c, d) in itertools.combinations(zip(x, y), 2))


def normalize(D: Sequence[int]) -> NSClass:
    """Primitive representative with first nonzero coordinate positive."""
    g = content(D)
    if g == 0:
        return as_class(D)
    D = [c // g for c in D]
    lead = next(c for c in D if c)
    return tuple(c if lead > 0 else -c for c in D)


@dataclass(frozen=True)
class Wall:
    D: NSClass
    witnesses: tuple[tuple[NSClass, int], ...] = ()
    D_square: int = 0


def chi_interval(xi_E: Sequence[int], chi_E: int, xi_F: Sequence[int], L: NSLattice) -> tuple[int, int] | None:
    """Integer range of ``chi_F`` with ``(D^2) <= 0``, or None when empty.

    ``(D^2) = A chi_F^2 - 2 B chi_F + C`` with ``A = (xi_E^2)``,
    ``B = chi_E (xi_E . xi_F)``, ``C = chi_E^2 (xi_F^2)``.  Endpoints come from
    an integer square root and are then corrected by exact evaluation.
    """
    A = L.square(xi_E)
    B = chi_E * L.dot(xi_E, xi_F)
    C = chi_E * chi_E * L.square(xi_F)
    disc = B * B - A * C
    if disc < 0:
        return None

    def q(x: int) -> int:
        return A * x * x - 2 * B * x + C

    root = isqrt(disc)
    lo = (B - root - 1) // A
    hi = -((-(B + root + 1)) // A)
    while q(lo) > 0:
        lo += 1
        if lo > hi:
            return None
    while q(lo - 1) <= 0:
        lo -= 1
    while q(hi) > 0:
        hi -= 1
    while q(hi + 1) <= 0:
        hi += 1
    return (lo, hi) if lo <= hi else None


def _walls_for(xi_E: NSClass, chi_E: int, xi_F: NSClass, L: NSLattice, cone: AmpleConeSpec):
    found = []
    span = chi_interval(xi_E, chi_E, xi_F, L)
    if span is None:
        return found
    for chi_F in range(span[0], span[1] + 1):
        D = tuple(chi_F * e - chi_E * f for e, f in zip(xi_E, xi_F))
        if not any(D):
            continue
        if cone.crossed_by(L, D):
            found.append((normalize(D), (xi_F, chi_F)))
    return found


def box_subclasses(xi_E: Sequence[int]) -> list[NSClass]:
    """Every class coordinatewise between 0 and ``xi_E``, minus both ends."""
    ranges = [range(min(0, c), max(0, c) + 1) for c in xi_E]
    xi_E = tuple(xi_E)
    return [c for c in itertools.product(*ranges) if any(c) and c != xi_E]


def enumerate_walls(v: MukaiVector, L: NSLattice, cone: AmpleConeSpec,
                    subclasses: Iterable[Sequence[int]] | None = None,
                    threads: int | None = None) -> list[Wall]:
    if v.r != 0:
        raise NotPureDimensionOne(f"walls are computed for rank 0 vectors, got r = {v.r}")
    xi_E = v.xi
    L.check_class(xi_E)
    if L.square(xi_E) <= 0:
        raise NonPositiveSquare("(xi_E^2) must be positive")
    cone.validate(L)
    chi_E = v.a
    if subclasses is None:
        subclasses = box_subclasses(xi_E)
    cands = []
    for c in subclasses:
        c = as_class(c)
        L.check_class(c)
        if any(c) and c != xi_E:
            cands.append(c)
    cands = sorted(set(cands))

    workers = min(threads or thread_count(), max(1, len(cands) // 64))
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            chunks = list(pool.map(lambda c: _walls_for(xi_E, chi_E, c, L, cone), cands))
    else:
        chunks = [_walls_for(xi_E, chi_E, c, L, cone) for c in cands]

    merged: dict[NSClass, set] = {}
    for chunk in chunks:
        for D, wit in chunk:
            merged.setdefault(D, set()).add(wit)
    return [Wall(D, tuple(sorted(merged[D])), L.square(D)) for D in sorted(merged)]


def _generator_form(L: NSLattice, cone: AmpleConeSpec, D: Sequence[int]) -> tuple[Fraction, Fraction]:
    g1, g2 = cone.generators
    return _qdot(L, g1, D), _qdot(L, g2, D)


def wall_parameter(wall: Wall, cone: AmpleConeSpec, L: NSLattice) -> Fraction | None:
    """``t`` in (0, 1) where the wall meets the ray ``(1-t) g1 + t g2``."""
    f1, f2 = _generator_form(L, cone, wall.D)
    if f1 == f2:
        return None
    t = f1 / (f1 - f2)
    return t if 0 < t < 1 else None


@dataclass(frozen=True)
class Chamber:
    lower: Fraction
    upper: Fraction

    def sample(self, cone: AmpleConeSpec) -> RationalClass:
        """An interior rational point of the chamber."""
        t = (self.lower + self.upper) / 2
        g1, g2 = cone.generators
        return tuple((1 - t) * a + t * b for a, b in zip(g1, g2))


def chambers_rank2(walls: Sequence[Wall], cone: AmpleConeSpec, L: NSLattice) -> list[Chamber]:
    if L.rank != 2 or len(cone.generators) != 2:
        raise NotRankTwo("chambers are listed for rank-2 lattices with two-generator cones")
    cuts = sorted({t for w in walls if (t := wall_parameter(w, cone, L)) is not None})
    ends = [Fraction(0), *cuts, Fraction(1)]
    return [Chamber(a, b) for a, b in zip(ends, ends[1:])]


def is_general(polarization: Sequence, walls: Sequence[Wall], L: NSLattice) -> bool:
    return all(_qdot(L, polarization, w.D) != 0 for w in walls)
