import random

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from conftest import lattices, mukai_form, random_lattice, vectors
from mukai_kit.errors import DimensionMismatch, InvalidLattice, NotSpherical, ZeroVector
from mukai_kit.intlinalg import in_span
from mukai_kit.lattice import (
    MukaiVector,
    NSLattice,
    classify,
    dualize,
    gram_of,
    orth_basis,
    pair,
    reflect,
    square,
    twist,
    vector_from_chern,
)

V = MukaiVector


def test_pair_examples(h2):
    assert pair(V(1, (0,), 1), V(1, (0,), 1), h2) == -2
    assert pair(V(0, (1,), 0), V(0, (1,), 0), h2) == 2
    assert pair(V(2, (1,), -1), V(1, (0,), 1), h2) == -1


def test_dualize_examples():
    assert dualize(V(1, (0,), 1)) == V(1, (0,), 1)
    assert dualize(V(0, (1,), 0)) == V(0, (-1,), 0)
    assert dualize(V(3, (2,), 1)) == V(3, (-2,), 1)


def test_vector_from_chern_examples(h2):
    assert vector_from_chern(1, (0,), 0, h2) == V(1, (0,), 1)
    assert vector_from_chern(1, (0,), 5, h2) == V(1, (0,), -4)
    assert vector_from_chern(2, (1,), 1, h2) == V(2, (1,), 2)


def test_twist_examples(h2, elliptic):
    assert twist(V(1, (0,), 1), (1,), h2) == V(1, (1,), 2)
    assert twist(V(1, (0,), 1), (1,), h2) == vector_from_chern(1, (1,), 0, h2)
    assert twist(V(2, (2, 0), -1), (0, 3), elliptic) == V(2, (2, 6), 5)


def test_reflect_examples(h2):
    v1 = V(1, (0,), 1)
    assert reflect(v1, v1, h2) == -v1
    assert reflect(V(0, (1,), 0), v1, h2) == V(0, (1,), 0)
    w = reflect(V(2, (1,), -1), v1, h2)
    assert w == V(1, (1,), -2)
    assert square(w, h2) == 6


def test_reflect_rejects_non_spherical(h2):
    with pytest.raises(NotSpherical):
        reflect(V(1, (0,), 0), V(1, (0,), 0), h2)


def test_classify_examples(h2):
    assert not classify(V(2, (0,), 2), h2).primitive
    c = classify(V(1, (0,), 1), h2)
    assert c.spherical and c.square == -2
    c = classify(V(1, (0,), 0), h2)
    assert c.isotropic and c.primitive


def test_orth_basis_examples(h2):
    ob = orth_basis(V(1, (0,), 1), h2)
    assert set(ob.basis) == {V(0, (1,), 0), V(1, (0,), -1)}
    ob = orth_basis(V(0, (1,), 0), h2)
    assert set(ob.basis) == {V(1, (0,), 0), V(0, (0,), 1)}


def test_orth_basis_zero_vector(h2):
    with pytest.raises(ZeroVector):
        orth_basis(V(0, (0,), 0), h2)


def test_lattice_validation():
    with pytest.raises(InvalidLattice):
        NSLattice(((1,),))
    with pytest.raises(InvalidLattice):
        NSLattice(((2, 1), (0, 2)))
    with pytest.raises(InvalidLattice):
        NSLattice(((2, 1),))


def test_dimension_mismatch(h2):
    with pytest.raises(DimensionMismatch):
        pair(V(1, (0, 0), 1), V(1, (0,), 1), h2)


@given(st.data())
def test_pair_matches_block_gram(data):
    L = data.draw(lattices())
    x, y = data.draw(vectors(L)), data.draw(vectors(L))
    assert pair(x, y, L) == mukai_form(x, y, L) == pair(y, x, L)


@given(st.data())
def test_twist_is_isometry_and_invertible(data):
    L = data.draw(lattices())
    x, y = data.draw(vectors(L)), data.draw(vectors(L))
    N = data.draw(st.tuples(*[st.integers(-6, 6)] * L.rank))
    tx, ty = twist(x, N, L), twist(y, N, L)
    assert pair(tx, ty, L) == pair(x, y, L)
    assert twist(tx, tuple(-c for c in N), L) == x


@given(st.data())
def test_twist_is_additive(data):
    L = data.draw(lattices())
    x = data.draw(vectors(L))
    N = data.draw(st.tuples(*[st.integers(-5, 5)] * L.rank))
    M = data.draw(st.tuples(*[st.integers(-5, 5)] * L.rank))
    assert twist(twist(x, N, L), M, L) == twist(x, tuple(a + b for a, b in zip(N, M)), L)


@given(st.data())
def test_reflect_is_isometric_involution(data):
    L = data.draw(lattices())
    N = data.draw(st.tuples(*[st.integers(-5, 5)] * L.rank))
    v1 = twist(V(1, (0,) * L.rank, 1), N, L)
    x, y = data.draw(vectors(L)), data.draw(vectors(L))
    rx = reflect(x, v1, L)
    assert reflect(rx, v1, L) == x
    assert pair(rx, reflect(y, v1, L), L) == pair(x, y, L)
    assert pair(rx, v1, L) == -pair(x, v1, L)


@given(st.data())
def test_dualize_preserves_pairing(data):
    L = data.draw(lattices())
    x, y = data.draw(vectors(L)), data.draw(vectors(L))
    assert pair(dualize(x), dualize(y), L) == pair(x, y, L)
    assert dualize(dualize(x)) == x


def _span_index_ok(ob, L):
    """v-perp computed naively: every small integer vector orthogonal to v is in the span."""
    v = ob.vector
    n = L.rank + 2
    rng = random.Random(0)
    for _ in range(40):
        c = [rng.randint(-4, 4) for _ in range(n)]
        x = V.from_coords(c)
        p = pair(x, v, L)
        if p == 0:
            assert in_span([b.coords for b in ob.basis], c)


@given(st.data())
def test_orth_basis_properties(data):
    L = data.draw(lattices(max_rank=2, bound=4))
    v = data.draw(vectors(L, bound=6))
    assume(any(v.coords))
    ob = orth_basis(v, L)
    assert all(pair(b, v, L) == 0 for b in ob.basis)
    assert ob.gram == gram_of(ob.basis, L)
    _span_index_ok(ob, L)


def test_orth_basis_spans_every_orthogonal_vector():
    rng = random.Random(7)
    for _ in range(200):
        L = random_lattice(rng, 2, 4)
        v = V(rng.randint(-5, 5), tuple(rng.randint(-5, 5) for _ in range(L.rank)), rng.randint(-5, 5))
        if not any(v.coords):
            continue
        ob = orth_basis(v, L)
        row = [pair(V.from_coords(e), v, L) for e in _units(L.rank + 2)]
        if any(row):
            assert len(ob.basis) == L.rank + 1
        for c in _box(L.rank + 2, 2):
            if sum(a * b for a, b in zip(c, row)) == 0:
                assert in_span([b.coords for b in ob.basis], c)


def _units(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def _box(n, k):
    import itertools
    return itertools.product(range(-k, k + 1), repeat=n)
