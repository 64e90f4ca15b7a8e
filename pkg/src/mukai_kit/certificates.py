"""Deformation-equivalence certificates.

A certificate is a chain of moves starting from a Mukai vector and ending at
the vector ``(1, 0, 1 - n)`` of the Hilbert scheme of ``n`` points, with
``n = <v^2>/2 + 1``.  Three kinds of move are allowed:

``twist``
    tensoring by a line bundle; an isometry, always legal.
``reflect``
    reflection in a rigid class ``v1`` with ``<v, v1> = -1`` where ``(v, v1)``
    is exactly an instance of one of the explicit families.  The moduli
    spaces on both sides are birational, hence deformation equivalent.
    ``down`` goes from the family's ``v`` to ``w = v - v1``; ``up`` goes back
    and stores ``-v1`` so the pairing condition reads the same both ways.
``deform``
    jump to another K3 lattice keeping ``l``, ``r``, ``<v^2>`` and
    ``a mod l`` (writing ``v = l(r + xi) + a w`` with ``r + xi`` primitive).

The geometric content of each move is taken as given; the verifier re-derives
every numerical condition from scratch and trusts nothing stored in the
certificate.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Any, Mapping, Sequence

from .errors import (
    HypothesisFailed,
    InvalidCone,
    MukaiError,
    NoCertificateFound,
    NonPositiveK,
    RankTooSmall,
    SearchExhausted,
)
from .families import (
    CITATIONS,
    FamilyInstance,
    Hypothesis,
    HypothesisReport,
    build_family,
    check_hypotheses,
    family_coprime,
    family_general,
    k_coprime,
    solve_bezout,
    solve_pq,
)
from .lattice import MukaiVector, NSClass, NSLattice, content, pair, reflect, square, twist
from .walls import AmpleConeSpec

JUSTIFICATIONS = {
    "twist": "tensoring by a line bundle identifies the moduli spaces",
    "reflect": (
        "reflection in a rigid bundle class with <v, v1> = -1: the moduli spaces are related by an "
        "elementary transformation in codimension 2, and birational irreducible symplectic manifolds "
        "are deformation equivalent (Huybrechts)"
    ),
    "deform": (
        "equal l, r, <v^2> and a mod l: connected through smooth families of polarized K3 surfaces "
        "and their relative moduli spaces (Goettsche-Huybrechts, O'Grady)"
    ),
}


@dataclass(frozen=True)
class State:
    lattice: NSLattice
    vector: MukaiVector


@dataclass(frozen=True)
class Move:
    kind: str
    result: State
    N: NSClass | None = None
    v1: MukaiVector | None = None
    family: dict | None = field(default=None, hash=False)
    direction: str | None = None
    checks: tuple[HypothesisReport, ...] = ()
    justification: str = ""


@dataclass(frozen=True)
class Certificate:
    initial: State
    moves: tuple[Move, ...]
    final: MukaiVector
    target_n: int
    square: int


@dataclass
class Verdict:
    accepted: bool
    failures: list[tuple[int | None, str]]


def hilbert_vector(n: int, rank: int = 1) -> MukaiVector:
    """Mukai vector ``(1, 0, 1 - n)`` of the ideal sheaf of ``n`` points."""
    if n < 1:
        raise MukaiError(f"n must be >= 1, got {n}")
    return MukaiVector(1, (0,) * rank, 1 - n)


def primitive_part(v: MukaiVector) -> tuple[int, int, NSClass]:
    """``(l, r, xi)`` with ``v = l (r + xi) + a w`` and ``r + xi`` primitive."""
    l = content((v.r, *v.xi))
    if l == 0:
        raise MukaiError("rank and first Chern class both vanish")
    return l, v.r // l, tuple(c // l for c in v.xi)


def deform_report(source: MukaiVector, source_L: NSLattice, target: MukaiVector,
                  target_L: NSLattice) -> HypothesisReport:
    inputs: dict[str, int] = {}
    problems = []
    if source.r <= 0 or target.r <= 0:
        problems.append("positive rank required on both sides")
        ls = lt = 0
    else:
        ls, rs, _ = primitive_part(source)
        lt, rt, _ = primitive_part(target)
        inputs.update(l_source=ls, l_target=lt, r_source=rs, r_target=rt)
        if ls != lt:
            problems.append("l differs")
        if rs != rt:
            problems.append("r differs")
    sq_s, sq_t = square(source, source_L), square(target, target_L)
    inputs.update(square_source=sq_s, square_target=sq_t, a_source=source.a, a_target=target.a)
    if sq_s != sq_t:
        problems.append("square differs")
    if ls and ls == lt and (source.a - target.a) % ls:
        problems.append("a differs mod l")
    margin = 0 if not problems else -1
    return HypothesisReport(Hypothesis.DEFORM_MATCH, inputs, not problems, Fraction(margin),
                            CITATIONS[Hypothesis.DEFORM_MATCH], {"problems": problems})


def reflect_checks(fam: FamilyInstance) -> tuple[HypothesisReport, ...]:
    """Reports a reflect move must carry, all of which must pass."""
    p = fam.params
    sq = fam.identities["v_square"]
    if fam.kind == "coprime":
        return (check_hypotheses(Hypothesis.K_POSITIVE, p),)
    return (
        check_hypotheses(Hypothesis.K_POSITIVE, p),
        check_hypotheses(Hypothesis.MU_BOUND, {"l": p["l"], "square": sq}),
        check_hypotheses(Hypothesis.DEFORMATION_BOUND, {"l": p["l"], "r": p["r"], "square": sq}),
    )


def _deform(current: State, target: State) -> Move:
    report = deform_report(current.vector, current.lattice, target.vector, target.lattice)
    return Move("deform", target, checks=(report,), justification=JUSTIFICATIONS["deform"])


def _reflect(current: State, fam: FamilyInstance, direction: str) -> Move:
    v1 = fam.v1 if direction == "down" else -fam.v1
    result = State(fam.lattice, reflect(current.vector, v1, fam.lattice))
    return Move("reflect", result, v1=v1, family=fam.spec, direction=direction,
                checks=reflect_checks(fam), justification=JUSTIFICATIONS["reflect"])


def _twist(current: State, N: Sequence[int]) -> Move:
    result = State(current.lattice, twist(current.vector, N, current.lattice))
    return Move("twist", result, N=tuple(N), justification=JUSTIFICATIONS["twist"])


# -- verification -----------------------------------------------------------

def verify_certificate(cert: Certificate | Mapping[str, Any]) -> Verdict:
    """Re-derive every state and every legality condition of a certificate."""
    failures: list[tuple[int | None, str]] = []
    if not isinstance(cert, Certificate):
        from .jsonio import certificate_from_json

        try:
            cert = certificate_from_json(cert)
        except (MukaiError, KeyError, TypeError, ValueError) as exc:
            return Verdict(False, [(None, f"malformed certificate: {exc}")])

    try:
        sq0 = square(cert.initial.vector, cert.initial.lattice)
    except MukaiError as exc:
        return Verdict(False, [(None, f"initial state invalid: {exc}")])
    if cert.square != sq0:
        failures.append((None, "square field does not match the initial vector"))

    current = cert.initial
    for idx, move in enumerate(cert.moves):
        try:
            failures.extend((idx, reason) for reason in _verify_move(current, move))
        except MukaiError as exc:
            failures.append((idx, f"move could not be evaluated: {exc}"))
        try:
            if square(move.result.vector, move.result.lattice) != sq0:
                failures.append((idx, "square not conserved"))
        except MukaiError as exc:
            failures.append((idx, f"result state invalid: {exc}"))
        current = move.result

    if current.vector != cert.final or current.vector.xi != cert.final.xi:
        failures.append((None, "final vector does not match the last state"))
    if cert.target_n != sq0 // 2 + 1:
        failures.append((None, "target_n does not equal <v^2>/2 + 1"))
    try:
        if cert.final != hilbert_vector(cert.target_n, len(cert.final.xi)):
            failures.append((None, "final vector mismatch"))
    except MukaiError as exc:
        failures.append((None, f"final vector mismatch: {exc}"))
    return Verdict(not failures, failures)


def _verify_move(current: State, move: Move) -> list[str]:
    out = []
    L = current.lattice
    if move.kind == "twist":
        if move.N is None:
            return ["twist without a class"]
        expected = State(L, twist(current.vector, move.N, L))
        if move.result != expected:
            out.append("intermediate state mismatch")
        if move.checks:
            out.append("twist moves carry no checks")
        return out

    if move.kind == "deform":
        report = deform_report(current.vector, L, move.result.vector, move.result.lattice)
        if not report.passed:
            out.append("deformation invariants differ: " + ", ".join(report.details["problems"]))
        if tuple(move.checks) != (report,):
            out.append("recorded checks do not match recomputation")
        return out

    if move.kind != "reflect":
        return [f"unknown move kind {move.kind!r}"]
    v1 = move.v1
    if v1 is None or move.family is None:
        return ["reflect move needs v1 and family parameters"]
    if square(v1, L) != -2:
        out.append("v1 is not spherical")
    elif pair(current.vector, v1, L) != -1:
        out.append("pairing with spherical class must be -1")
    try:
        fam = build_family(move.family)
    except MukaiError as exc:
        return out + [f"family parameters invalid: {exc}"]
    if fam.lattice != L:
        out.append("lattice does not match the family")
    if move.direction == "down":
        if current.vector != fam.v or v1 != fam.v1:
            out.append("(v, v1) not reproduced by the family")
    elif move.direction == "up":
        if current.vector != fam.w or v1 != -fam.v1:
            out.append("(w, -v1) not reproduced by the family")
    else:
        out.append(f"unknown reflect direction {move.direction!r}")
    if square(v1, L) == -2:
        expected = State(L, reflect(current.vector, v1, L))
        if move.result != expected:
            out.append("intermediate state mismatch")
        drop = current.vector.r - expected.vector.r
        if move.direction == "down" and not 0 < drop < current.vector.r:
            out.append("rank must drop and stay positive")
    checks = reflect_checks(fam)
    if not all(c.passed for c in checks):
        out.append("family hypotheses fail: " + ", ".join(c.kind.value for c in checks if not c.passed))
    if tuple(move.checks) != checks:
        out.append("recorded checks do not match recomputation")
    return out


# -- planning ---------------------------------------------------------------

def default_initial(r: int, l: int, square_v: int, a: int) -> State:
    """A representative ``l(r + xi) + a w`` on the hyperbolic plane ``U``.

    With ``xi = e + m f`` we get ``<v^2> = 2 l^2 m - 2 l r a``, so
    ``m = (<v^2>/2l + r a) / l``.
    """
    m = (square_v // (2 * l) + r * a) // l
    U = NSLattice(((0, 1), (1, 0)), ("e", "f"))
    return State(U, MukaiVector(l * r, (l, l * m), a))


def _check_request(r: int, l: int, square_v: int, a: int) -> None:
    if r < 1 or l < 1:
        raise HypothesisFailed("r and l must be positive")
    if square_v % 2:
        raise HypothesisFailed("Mukai squares are even")
    if l == 1:
        if square_v < 2:
            raise HypothesisFailed(f"<v^2> = {square_v}: a Hilbert scheme target needs <v^2> >= 2")
        return
    report = check_hypotheses(Hypothesis.DEFORMATION_BOUND, {"l": l, "r": r, "square": square_v})
    if not report.passed:
        raise HypothesisFailed(f"<v^2>/2 = {Fraction(square_v, 2)} must exceed {report.details['threshold']}")
    if gcd(a, l) != 1:
        raise HypothesisFailed(f"v is not primitive: gcd(a, l) = {gcd(a, l)}")
    if square_v % (2 * l) or (square_v // (2 * l) + r * a) % l:
        raise HypothesisFailed("no vector l(r + xi) + a w has this square and residue of a")


def _down_edges(R: int, s: int):
    for d in range(1, R):
        if gcd(R, d) == 1:
            r1, _ = solve_bezout(R, d)
            if k_coprime(R, r1, s) >= 1:
                yield R - r1, ("down", R, d)


def _up_edges(R: int, s: int, cap: int):
    for big in range(R + 1, cap + 1):
        for d in range(1, big):
            if gcd(big, d) == 1:
                r1, _ = solve_bezout(big, d)
                if big - r1 == R and k_coprime(big, r1, s) >= 1:
                    yield big, ("up", big, d)


def rank_path(R0: int, s: int, cap: int, budget: int = 10_000) -> list[tuple[str, int, int]]:
    """Shortest chain of family reflections from rank ``R0`` to rank 1.

    Breadth-first over ranks in ``[1, cap]``; neighbours are visited in
    increasing target rank, then increasing ``d``, so the result is
    deterministic.
    """
    if R0 == 1:
        return []
    prev: dict[int, tuple[int, tuple]] = {}
    seen = {R0}
    queue = deque([R0])
    expanded = 0
    while queue:
        R = queue.popleft()
        expanded += 1
        if expanded > budget:
            raise NoCertificateFound(f"search budget {budget} exhausted")
        edges = sorted([*_down_edges(R, s), *_up_edges(R, s, cap)], key=lambda e: (e[0], e[1][2]))
        for target, edge in edges:
            if target in seen:
                continue
            seen.add(target)
            prev[target] = (R, edge)
            if target == 1:
                path = []
                node = 1
                while node != R0:
                    node, e = prev[node]
                    path.append(e)
                return path[::-1]
            queue.append(target)
    raise NoCertificateFound(f"no reflection chain from rank {R0} to rank 1 with ranks <= {cap}, s = {s}")


def _hilbert_moves(start: State, s: int, cap: int, budget: int) -> list[Move]:
    moves: list[Move] = []
    current = start
    for kind, R, d in rank_path(start.vector.r, s, cap, budget):
        fam = family_coprime(R, d, s)
        entry = fam.v if kind == "down" else fam.w
        target = State(fam.lattice, entry)
        if current != target:
            moves.append(_deform(current, target))
            current = target
        moves.append(_reflect(current, fam, kind))
        current = moves[-1].result
    assert current.vector.r == 1
    if any(current.vector.xi):
        moves.append(_twist(current, tuple(-c for c in current.vector.xi)))
    return moves


def _general_reflection(r: int, l: int, square_v: int, a: int) -> FamilyInstance:
    p = (-a) % l
    half = square_v // (2 * l)
    for r1 in range(1, l * r):
        if gcd(r1, l) != 1 or gcd(r1, r) != 1 or solve_pq(l, r1)[0] != p:
            continue
        d = next(d for d in range(1, r + 1) if (d * r1 - 1) % r == 0)
        s_num = half - r * p
        if s_num % l:
            continue
        try:
            fam = family_general(l, r, d, r1, s_num // l)
        except NonPositiveK:
            continue
        if all(c.passed for c in reflect_checks(fam)):
            return fam
    raise NoCertificateFound(f"no admissible rigid class for l={l}, r={r}, <v^2>={square_v}, a={a} mod {l}")


def plan_certificate(r: int, l: int, square_v: int, a_mod_l: int = 0, *,
                     initial: State | None = None, rank_cap: int | None = None,
                     budget: int = 10_000) -> Certificate:
    """Find and verify a chain of moves from ``l(r + xi) + a w`` to a Hilbert scheme vector."""
    a = a_mod_l % l
    _check_request(r, l, square_v, a)
    if initial is None:
        initial = default_initial(r, l, square_v, a)
    else:
        li, ri, _ = primitive_part(initial.vector)
        if (li, ri, square(initial.vector, initial.lattice)) != (l, r, square_v) or (initial.vector.a - a) % l:
            raise HypothesisFailed("initial vector does not have the requested invariants")
    cap = rank_cap if rank_cap is not None else 4 * r * l + 8

    moves: list[Move] = []
    current = initial
    if l > 1:
        fam = _general_reflection(r, l, square_v, a)
        target = State(fam.lattice, fam.v)
        moves.append(_deform(current, target))
        moves.append(_reflect(target, fam, "down"))
        current = moves[-1].result
    moves.extend(_hilbert_moves(current, square_v // 2, cap, budget))

    n = square_v // 2 + 1
    final = moves[-1].result.vector if moves else initial.vector
    cert = Certificate(initial, tuple(moves), final, n, square_v)
    verdict = verify_certificate(cert)
    if not verdict.accepted:
        raise AssertionError(f"planner produced a rejected certificate: {verdict.failures}")
    return cert


def plan_for_vector(v: MukaiVector, L: NSLattice, **kwargs) -> Certificate:
    """Certificate starting from a given vector on a given lattice."""
    l, r, _ = primitive_part(v)
    return plan_certificate(r, l, square(v, L), v.a % l, initial=State(L, v), **kwargs)


# -- primitivizing twist ----------------------------------------------------

def _cone_coordinates(cone: AmpleConeSpec, x: Sequence[int]) -> list[Fraction] | None:
    """Coefficients of ``x`` in the generators of a simplicial cone."""
    gens = cone.generators
    n = len(x)
    if len(gens) != n:
        raise InvalidCone("cone membership is decided for simplicial cones only")
    M = [[Fraction(gens[j][i]) for j in range(n)] + [Fraction(x[i])] for i in range(n)]
    for col in range(n):
        piv = next((i for i in range(col, n) if M[i][col]), None)
        if piv is None:
            raise InvalidCone("cone generators are linearly dependent")
        M[col], M[piv] = M[piv], M[col]
        for i in range(n):
            if i != col and M[i][col]:
                f = M[i][col] / M[col][col]
                M[i] = [u - f * w for u, w in zip(M[i], M[col])]
    return [M[i][n] / M[i][i] for i in range(n)]


def _primitive_direction(g: Sequence[Fraction]) -> NSClass:
    den = 1
    for c in g:
        den = den * Fraction(c).denominator // gcd(den, Fraction(c).denominator)
    ints = [int(Fraction(c) * den) for c in g]
    g0 = content(ints)
    return tuple(c // g0 for c in ints)


@dataclass(frozen=True)
class PrimitivizingTwist:
    Lclass: NSClass
    xi_prime: NSClass
    n: int
    direction: NSClass
    checks: dict = field(hash=False)


def find_primitivizing_twist(v: MukaiVector, L: NSLattice, cone: AmpleConeSpec,
                             max_n: int = 1000) -> PrimitivizingTwist:
    """Line bundle ``N = n L'`` making ``xi + r N`` primitive, ample and of square >= 4.

    ``L'`` runs over the primitive integral directions of the cone
    generators; the smallest ``|n|`` wins, positive before negative, earlier
    generators before later ones.
    """
    if L.rank < 2:
        raise RankTooSmall("needs Picard rank at least 2")
    cone.validate(L)
    l, r, xi = primitive_part(v)
    dirs = []
    for g in cone.generators:
        Lp = _primitive_direction(g)
        if any(xi) and all(a * d == b * c for a, b in zip(xi, Lp) for c, d in zip(xi, Lp)):
            continue  # must be independent of xi
        dirs.append(Lp)
    for size in range(1, max_n + 1):
        for n in (size, -size):
            if gcd(n, r) != 1:
                continue
            for Lp in dirs:
                xp = tuple(c + r * n * e for c, e in zip(xi, Lp))
                coords = _cone_coordinates(cone, xp)
                if content(xp) == 1 and all(c > 0 for c in coords) and L.square(xp) >= 4:
                    checks = {"primitive": True, "in_open_cone": True, "square": L.square(xp),
                              "gcd_n_r": gcd(n, r), "l": l, "r": r}
                    return PrimitivizingTwist(tuple(n * e for e in Lp), xp, n, Lp, checks)
    raise SearchExhausted(f"no primitivizing twist with |n| <= {max_n}")
