"""Exact arithmetic on the algebraic Mukai lattice Z + NS(X) + Z.

A Mukai vector is stored as ``(r, xi, a)``: rank, first Chern class in the
coordinates of a Neron-Severi basis, and the coefficient of the point class.
The pairing is ``<(r,xi,a), (r',xi',a')> = xi.xi' - r*a' - r'*a``.

Everything here is immutable and uses Python integers, so there is no
overflow regime to worry about.
"""
from __future__ import annotations

import operator
from dataclasses import dataclass, field
from math import gcd
from typing import Iterable, Sequence

from .errors import DimensionMismatch, InvalidLattice, NotSpherical, ZeroVector
from .intlinalg import kernel_basis

NSClass = tuple[int, ...]


def _int(value) -> int:
    if isinstance(value, bool):
        raise TypeError("booleans are not lattice coordinates")
    return operator.index(value)


def as_class(values: Iterable[int]) -> NSClass:
    return tuple(_int(v) for v in values)


@dataclass(frozen=True)
class NSLattice:
    """Neron-Severi lattice given by an even symmetric integer Gram matrix."""

    gram: tuple[tuple[int, ...], ...]
    basis_names: tuple[str, ...] = ()

    def __post_init__(self):
        gram = tuple(as_class(row) for row in self.gram)
        n = len(gram)
        if n == 0:
            raise InvalidLattice("Gram matrix must have positive rank")
        if any(len(row) != n for row in gram):
            raise InvalidLattice("Gram matrix must be square")
        for i in range(n):
            if gram[i][i] % 2:
                raise InvalidLattice(f"diagonal entry G[{i}][{i}] = {gram[i][i]} is odd")
            for j in range(i):
                if gram[i][j] != gram[j][i]:
                    raise InvalidLattice(f"Gram matrix not symmetric at ({i}, {j})")
        names = tuple(self.basis_names) or tuple(f"e{i}" for i in range(n))
        if len(names) != n:
            raise InvalidLattice("basis_names must have one entry per basis vector")
        if len(set(names)) != n:
            raise InvalidLattice("basis_names must be distinct")
        object.__setattr__(self, "gram", gram)
        object.__setattr__(self, "basis_names", names)

    @classmethod
    def rank_one(cls, h_square: int, name: str = "H") -> "NSLattice":
        return cls(((h_square,),), (name,))

    @property
    def rank(self) -> int:
        return len(self.gram)

    def check_class(self, x: Sequence[int]) -> None:
        if len(x) != self.rank:
            raise DimensionMismatch(f"class has {len(x)} coordinates, lattice rank is {self.rank}")

    def dot(self, x: Sequence[int], y: Sequence[int]) -> int:
        self.check_class(x)
        self.check_class(y)
        return sum(
            xi * gij * yj
            for xi, row in zip(x, self.gram) if xi
            for gij, yj in zip(row, y) if gij and yj
        )

    def square(self, x: Sequence[int]) -> int:
        return self.dot(x, x)


@dataclass(frozen=True)
class MukaiVector:
    r: int
    xi: NSClass
    a: int

    def __post_init__(self):
        object.__setattr__(self, "r", _int(self.r))
        object.__setattr__(self, "xi", as_class(self.xi))
        object.__setattr__(self, "a", _int(self.a))

    @classmethod
    def from_coords(cls, coords: Sequence[int]) -> "MukaiVector":
        if len(coords) < 2:
            raise DimensionMismatch("a Mukai vector needs at least rank and point coordinates")
        return cls(coords[0], tuple(coords[1:-1]), coords[-1])

    @property
    def coords(self) -> tuple[int, ...]:
        return (self.r, *self.xi, self.a)

    def __add__(self, other: "MukaiVector") -> "MukaiVector":
        _same_length(self, other)
        return MukaiVector(self.r + other.r, tuple(u + w for u, w in zip(self.xi, other.xi)), self.a + other.a)

    def __sub__(self, other: "MukaiVector") -> "MukaiVector":
        return self + (-other)

    def __neg__(self) -> "MukaiVector":
        return MukaiVector(-self.r, tuple(-u for u in self.xi), -self.a)

    def __mul__(self, m: int) -> "MukaiVector":
        m = _int(m)
        return MukaiVector(m * self.r, tuple(m * u for u in self.xi), m * self.a)

    __rmul__ = __mul__

    def __str__(self) -> str:
        return "(" + ",".join(map(str, self.coords)) + ")"


def _same_length(x: MukaiVector, y: MukaiVector) -> None:
    if len(x.xi) != len(y.xi):
        raise DimensionMismatch("Mukai vectors live on lattices of different rank")


def pair(x: MukaiVector, y: MukaiVector, L: NSLattice) -> int:
    """The Mukai pairing; ``chi(E, F) = -pair(v(E), v(F))``."""
    return L.dot(x.xi, y.xi) - x.r * y.a - y.r * x.a


def square(x: MukaiVector, L: NSLattice) -> int:
    return pair(x, x, L)


def dualize(x: MukaiVector) -> MukaiVector:
    return MukaiVector(x.r, tuple(-u for u in x.xi), x.a)


def vector_from_chern(r: int, c1: Sequence[int], c2: int, L: NSLattice) -> MukaiVector:
    """Mukai vector ``(r, c1, r + ch2)`` with ``ch2 = c1^2/2 - c2``."""
    c1 = as_class(c1)
    return MukaiVector(r, c1, r + L.square(c1) // 2 - c2)


def twist(x: MukaiVector, N: Sequence[int], L: NSLattice) -> MukaiVector:
    """Multiplication by ``ch(N)`` for a line bundle class ``N``."""
    N = as_class(N)
    L.check_class(N)
    L.check_class(x.xi)
    xi = tuple(u + x.r * n for u, n in zip(x.xi, N))
    return MukaiVector(x.r, xi, x.a + L.dot(x.xi, N) + x.r * (L.square(N) // 2))


def reflect(x: MukaiVector, v1: MukaiVector, L: NSLattice) -> MukaiVector:
    """Reflection ``x -> x + <x, v1> v1`` in a spherical class ``v1``."""
    s = square(v1, L)
    if s != -2:
        raise NotSpherical(f"reflection needs <v1^2> = -2, got {s}")
    return x + pair(x, v1, L) * v1


def content(values: Iterable[int]) -> int:
    g = 0
    for u in values:
        g = gcd(g, u)
    return g


@dataclass(frozen=True)
class Classification:
    primitive: bool
    spherical: bool
    isotropic: bool
    square: int


def classify(x: MukaiVector, L: NSLattice) -> Classification:
    s = square(x, L)
    return Classification(content(x.coords) == 1, s == -2, s == 0, s)


@dataclass(frozen=True)
class OrthBasis:
    vector: MukaiVector
    basis: tuple[MukaiVector, ...]
    gram: tuple[tuple[int, ...], ...] = field(repr=False)


def pairing_row(v: MukaiVector, L: NSLattice) -> list[int]:
    """Coefficients of the linear form ``x -> <v, x>`` in coordinates ``(r, xi, a)``."""
    L.check_class(v.xi)
    g_xi = [sum(g * u for g, u in zip(row, v.xi)) for row in L.gram]
    return [-v.a, *g_xi, -v.r]


def orth_basis(v: MukaiVector, L: NSLattice) -> OrthBasis:
    """Saturated basis of ``v^perp`` in Hermite normal form.

    On a degenerate Gram matrix a nonzero ``v`` can pair trivially with
    everything, in which case the whole lattice (``rank + 2`` vectors) is
    returned.
    """
    if not any(v.coords):
        raise ZeroVector("orthogonal complement of the zero vector is not taken")
    basis = tuple(MukaiVector.from_coords(row) for row in kernel_basis(pairing_row(v, L)))
    gram = tuple(tuple(pair(x, y, L) for y in basis) for x in basis)
    return OrthBasis(v, basis, gram)


def gram_of(vectors: Sequence[MukaiVector], L: NSLattice) -> tuple[tuple[int, ...], ...]:
    return tuple(tuple(pair(x, y, L) for y in vectors) for x in vectors)
