"""Acceptance suite: nine end-to-end criteria, each with its time limit.

Every criterion prints one PASS/FAIL line.  Run directly with
``python3 tests/test_acceptance.py`` or through pytest.
"""
import random
import sys
import time
from fractions import Fraction
from math import gcd
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from conftest import mukai_form, random_lattice, random_vector  # noqa: E402
from oracles import box, brute_walls, int_leaves, mutated  # noqa: E402
from mukai_kit.certificates import plan_certificate, verify_certificate  # noqa: E402
from mukai_kit.errors import InvalidCone, NonPositiveK  # noqa: E402
from mukai_kit.families import family_coprime, family_general, k_coprime, solve_bezout  # noqa: E402
from mukai_kit.intlinalg import in_span  # noqa: E402
from mukai_kit.jsonio import certificate_to_json  # noqa: E402
from mukai_kit.lattice import MukaiVector as V  # noqa: E402
from mukai_kit.lattice import NSLattice, gram_of, orth_basis, reflect, twist  # noqa: E402
from mukai_kit.numerics import correspondence_dims, filtration_oracle, stratum_report  # noqa: E402
from mukai_kit.walls import AmpleConeSpec, chambers_rank2, enumerate_walls  # noqa: E402


def run_criterion(number, title, limit, body, emit=print):
    start = time.perf_counter()
    try:
        detail = body()
        elapsed = time.perf_counter() - start
        assert elapsed < limit, f"took {elapsed:.2f}s, limit {limit}s"
    except Exception as exc:
        elapsed = time.perf_counter() - start
        emit(f"[FAIL] {number}. {title} ({elapsed:.2f}s): {exc}")
        raise
    emit(f"[PASS] {number}. {title} ({elapsed:.2f}s): {detail}")


# 1 -------------------------------------------------------------------------

def coprime_sweep():
    count = 0
    for r in range(2, 13):
        for d in range(1, r):
            if gcd(r, d) != 1:
                continue
            r1, _ = solve_bezout(r, d)
            for s in range(-12, 13):
                if k_coprime(r, r1, s) < 1:
                    continue
                f = family_coprime(r, d, s)
                L = f.lattice
                assert mukai_form(f.v1, f.v1, L) == -2
                assert mukai_form(f.v, f.v, L) == 2 * s
                assert mukai_form(f.v, f.v1, L) == -1
                count += 1
    assert count > 0
    return f"{count} instances exact"


# 2 -------------------------------------------------------------------------

def general_sweep():
    count = 0
    for l in range(1, 9):
        for r in range(1, 12 // l + 1):
            for d in range(1, r + 1):
                if gcd(r, d) != 1:
                    continue
                for r1 in range(1, l * r):
                    if gcd(l, r1) != 1 or (d * r1 - 1) % r:
                        continue
                    for s in range(-12, 13):
                        try:
                            f = family_general(l, r, d, r1, s)
                        except NonPositiveK:
                            continue
                        L, p = f.lattice, f.params["p"]
                        assert (p * r1 + 1) % l == 0 and 0 <= p < l
                        assert mukai_form(f.v1, f.v1, L) == -2
                        assert mukai_form(f.v, f.v, L) == 2 * l * (l * s + r * p)
                        assert mukai_form(f.v, f.v1, L) == -1
                        count += 1
    assert count > 0
    return f"{count} instances exact"


# 3 -------------------------------------------------------------------------

def random_spherical(rng, L):
    """A spherical class g(1, 0, 1) together with g(0, 0, -1), which pairs to 1 with it."""
    v1, y = V(1, (0,) * L.rank, 1), V(0, (0,) * L.rank, -1)
    for _ in range(rng.randint(0, 2)):
        N = tuple(rng.randint(-3, 3) for _ in range(L.rank))
        v1, y = twist(v1, N, L), twist(y, N, L)
        if rng.random() < 0.5:
            other = twist(V(1, (0,) * L.rank, 1), tuple(rng.randint(-2, 2) for _ in range(L.rank)), L)
            v1, y = reflect(v1, other, L), reflect(y, other, L)
    if rng.random() < 0.5:
        v1, y = -v1, -y
    return v1, y


def isometry_suite():
    rng = random.Random(20240601)
    for _ in range(10_000):
        L = random_lattice(rng, 3, 8)
        x, y = random_vector(rng, L), random_vector(rng, L)
        N = tuple(rng.randint(-8, 8) for _ in range(L.rank))
        v1, _ = random_spherical(rng, L)
        base = mukai_form(x, y, L)
        tx, ty = twist(x, N, L), twist(y, N, L)
        assert mukai_form(tx, ty, L) == base
        assert twist(tx, tuple(-c for c in N), L) == x
        rx, ry = reflect(x, v1, L), reflect(y, v1, L)
        assert mukai_form(rx, ry, L) == base
        assert reflect(rx, v1, L) == x
    return "10000 cases: pairings preserved, reflect involutive, twist invertible"


# 4 -------------------------------------------------------------------------

def orth_shadow():
    rng = random.Random(77)
    done = 0
    while done < 1000:
        L = random_lattice(rng, 3, 6)
        v1, y = random_spherical(rng, L)
        assert mukai_form(v1, v1, L) == -2 and mukai_form(y, v1, L) == 1
        u = random_vector(rng, L, 6)
        v = u + y * (-1 - mukai_form(u, v1, L))
        assert mukai_form(v, v1, L) == -1
        w = v - v1
        basis = orth_basis(v, L).basis
        image = [reflect(b, v1, L) for b in basis]
        assert all(mukai_form(b, w, L) == 0 for b in image)
        assert gram_of(image, L) == gram_of(basis, L)
        target = [b.coords for b in orth_basis(w, L).basis]
        assert all(in_span(target, b.coords) for b in image)
        assert all(in_span([b.coords for b in image], t) for t in target)
        done += 1
    return "1000 pairs: reflected basis of v-perp is an isometric basis of w-perp"


# 5 -------------------------------------------------------------------------

def rank_two_configurations(count):
    elliptic = NSLattice(((-2, 1), (1, 0)), ("C", "f"))
    configs = [(elliptic, V(0, (1, 3), 2), AmpleConeSpec(((0, 1), (1, 2)), (1, 3)))]
    rng = random.Random(5)
    while len(configs) < count:
        b = rng.randint(-4, 4)
        L = NSLattice(((2 * rng.randint(-2, 2), b), (b, 2 * rng.randint(-2, 2))))
        h = (rng.randint(-3, 3), rng.randint(-3, 3))
        if L.square(h) <= 0:
            continue
        u = (rng.randint(-3, 3), rng.randint(-3, 3))
        M = rng.randint(1, 2)
        gens = tuple(tuple(Fraction(a) + sign * Fraction(c, M) for a, c in zip(h, u)) for sign in (-1, 1))
        cone = AmpleConeSpec(gens, h)
        try:
            cone.validate(L)
        except InvalidCone:
            continue
        xi = (rng.randint(-5, 5), rng.randint(-5, 5))
        chi = rng.choice([c for c in range(-6, 7) if c])
        if L.square(xi) <= 0:
            continue
        configs.append((L, V(0, xi, chi), cone))
    return configs


def wall_equivalence():
    total = with_walls = 0
    configs = rank_two_configurations(30)
    for L, v, cone in configs:
        subs = box(v.xi)
        walls = enumerate_walls(v, L, cone, subs)
        oracle = brute_walls(L.gram, v.xi, v.a, subs, cone.generators)
        assert {w.D: set(w.witnesses) for w in walls} == oracle
        assert all(L.square(w.D) <= 0 for w in walls)
        assert len(chambers_rank2(walls, cone, L)) == len(walls) + 1
        total += len(walls)
        with_walls += bool(walls)
    assert with_walls >= 10
    return f"{len(configs)} configurations ({with_walls} with walls), {total} walls, oracle sets equal"


# 6 -------------------------------------------------------------------------

def certificate_grid():
    cells = 0
    for r in range(1, 8):
        for s in range(1, 11):
            cert = plan_certificate(r, 1, 2 * s)
            assert verify_certificate(cert).accepted
            assert verify_certificate(certificate_to_json(cert)).accepted
            final = cert.final
            assert (final.r, any(final.xi), final.a) == (1, False, 1 - (s + 1))
            if r == 2 and s in (1, 2):
                assert k_coprime(2, 1, s) <= 0
                assert max(m.result.vector.r for m in cert.moves) > 2
            cells += 1
    return f"{cells} cells accepted; r=2, s=1,2 detour through a higher rank"


# 7 -------------------------------------------------------------------------

def tamper_suite():
    mutations = 0
    for args in ((2, 1, 6), (2, 1, 2), (1, 2, 20, 1)):
        doc = certificate_to_json(plan_certificate(*args))
        assert verify_certificate(doc).accepted
        for path in int_leaves(doc):
            for delta in (1, -1):
                assert not verify_certificate(mutated(doc, path, delta)).accepted, path
                mutations += 1
    return f"{mutations} single-field mutations all rejected"


# 8 -------------------------------------------------------------------------

def mu_oracle():
    checked = 0
    for l, r, d in ((2, 1, 1), (3, 1, 1), (2, 3, 1)):
        for r1 in range(1, l * r):
            if gcd(l, r1) != 1 or (d * r1 - 1) % r:
                continue
            for s in range(-5, 21):
                try:
                    f = family_general(l, r, d, r1, s)
                except NonPositiveK:
                    continue
                res = filtration_oracle(f.v, l, f.lattice, 10 ** 6)
                sq = f.identities["v_square"]
                assert res.shapes_enumerated > 0
                assert res.identity_verified
                if Fraction(sq, 2 * l) > l:
                    assert res.min_codim_bound >= Fraction(sq, 2 * l) - l + 1
                checked += 1
    return f"{checked} model vectors: chi-sum identity on every shape, minimum codim >= bound"


# 9 -------------------------------------------------------------------------

def stratum_bookkeeping():
    L = NSLattice.rank_one(2)
    v1 = V(1, (0,), 1)
    cases = 0
    for P in range(-5, 6):
        for xi in (-2, 0, 3):
            v = V(1, (xi,), -1 - P)
            sq = mukai_form(v, v, L)
            for i in range(1, 11):
                rep = stratum_report(v, v1, i, 0, L)
                codim = (i - 1) * (i - 1 - P)
                k = 2 * i - 2 - P
                vG_sq = sq + 2 * (i - 1) * P - 2 * (i - 1) ** 2
                assert rep.codim == codim and rep.k == k
                assert (vG_sq + 2) + (i - 1) * (k - (i - 1)) == (sq + 2) - codim
                for m in range(0, i - 1 - P + 1):
                    over_v, over_w = correspondence_dims(v, v1, i, m, L)
                    assert over_v == over_w
                    cases += 1
    return f"{cases} (pairing, i, m) cases consistent"


CRITERIA = [
    (1, "coprime family identity sweep", 1, coprime_sweep),
    (2, "general family identity sweep", 1, general_sweep),
    (3, "isometry and involution suite", 5, isometry_suite),
    (4, "reflected orthogonal complement", 5, orth_shadow),
    (5, "wall oracle equivalence", 10, wall_equivalence),
    (6, "certificate grid", 30, certificate_grid),
    (7, "tamper suite", 30, tamper_suite),
    (8, "mu-unstable filtration oracle", 60, mu_oracle),
    (9, "stratum bookkeeping", 1, stratum_bookkeeping),
]


@pytest.mark.parametrize("number,title,limit,body", CRITERIA, ids=[f"criterion_{c[0]}" for c in CRITERIA])
def test_criterion(number, title, limit, body, capsys):
    def emit(line):
        with capsys.disabled():
            print("\n" + line)
    run_criterion(number, title, limit, body, emit)


if __name__ == "__main__":
    failed = 0
    for crit in CRITERIA:
        try:
            run_criterion(*crit)
        except Exception:
            failed += 1
    sys.exit(1 if failed else 0)
