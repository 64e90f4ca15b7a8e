"""Command-line front end.

Exit status: 0 on success (or an accepted certificate), 1 when a hypothesis
was checked and failed or a certificate was rejected, 2 when the input could
not be used.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Any, Sequence

from . import certificates, families, lattice, numerics, walls
from .errors import CheckFailed, MukaiError
from .jsonio import (
    SchemaError,
    certificate_to_json,
    chamber_to_json,
    cone_from_json,
    dec_int,
    enc_int,
    family_to_json,
    lattice_from_json,
    mu_bound_to_json,
    oracle_to_json,
    orth_to_json,
    parse_vector_text,
    report_to_json,
    stratum_to_json,
    vector_to_json,
    wall_to_json,
)

EXIT_OK, EXIT_FAILED, EXIT_INPUT = 0, 1, 2


class CheckedFailure(Exception):
    """Carries a report that should be printed before exiting with status 1."""

    def __init__(self, payload: Any):
        super().__init__("check failed")
        self.payload = payload


def _load(arg: str) -> Any:
    text = arg.strip()
    if text[:1] in "{[":
        return json.loads(text)
    return json.loads(Path(arg).read_text(encoding="utf-8"))


def _text(arg: str) -> str:
    text = arg.strip()
    if text[:1] in "{[(":
        return text
    return Path(arg).read_text(encoding="utf-8")


def _lattice(args) -> lattice.NSLattice:
    if not args.lattice:
        raise SchemaError("--lattice is required")
    return lattice_from_json(_load(args.lattice))


def _vector(text: str | None, name: str = "--vector") -> lattice.MukaiVector:
    if not text:
        raise SchemaError(f"{name} is required")
    return parse_vector_text(_text(text))


def _class(text: str) -> tuple[int, ...]:
    text = text.strip()
    if text.startswith("["):
        return tuple(dec_int(x) for x in json.loads(text))
    return tuple(dec_int(x) for x in text.strip("()").split(",") if x.strip())


def cmd_pair(args):
    L = _lattice(args)
    value = lattice.pair(_vector(args.x, "--x"), _vector(args.y, "--y"), L)
    return {"pair": enc_int(value)}


def cmd_twist(args):
    L = _lattice(args)
    return {"result": vector_to_json(lattice.twist(_vector(args.vector), _class(args.N), L))}


def cmd_reflect(args):
    L = _lattice(args)
    return {"result": vector_to_json(lattice.reflect(_vector(args.vector), _vector(args.v1, "--v1"), L))}


def cmd_classify(args):
    c = lattice.classify(_vector(args.vector), _lattice(args))
    return {"primitive": c.primitive, "spherical": c.spherical, "isotropic": c.isotropic,
            "square": enc_int(c.square)}


def cmd_orth(args):
    return orth_to_json(lattice.orth_basis(_vector(args.vector), _lattice(args)))


def _family_request(args) -> dict:
    if args.request:
        req = _load(args.request)
        if not isinstance(req, dict) or "family" not in req:
            raise SchemaError('family request needs {"family": ..., "params": {...}}')
        return {"family": req["family"], **req.get("params", {})}
    names = ("r", "d", "s") if args.kind == "coprime" else ("l", "r", "d", "r1", "s")
    missing = [n for n in names if getattr(args, n) is None]
    if missing:
        raise SchemaError("missing --" + ", --".join(missing))
    return {"family": args.kind, **{n: getattr(args, n) for n in names}}


def cmd_family(args):
    inst = families.build_family(_family_request(args))
    return family_to_json(inst, families.family_reports(inst))


def cmd_check(args):
    params = _load(args.params) if args.params else {}
    rep = families.check_hypotheses(args.kind, params)
    out = report_to_json(rep)
    if not rep.passed:
        raise CheckedFailure(out)
    return out


def cmd_strata(args):
    L = _lattice(args)
    rep = numerics.stratum_report(_vector(args.vector), _vector(args.v1, "--v1"), args.i, args.m, L)
    return stratum_to_json(rep)


def cmd_mu_bound(args):
    if args.vector:
        L = _lattice(args)
        v = _vector(args.vector)
        res = numerics.filtration_oracle(v, args.l, L, args.budget)
        out = oracle_to_json(res)
        if not (res.identity_verified and res.chain_verified):
            raise CheckedFailure(out)
        return out
    if args.square is None:
        raise SchemaError("--square (or --vector with --lattice) is required")
    b = numerics.mu_codim_bound(args.square, args.l)
    out = mu_bound_to_json(b)
    if not b.hypothesis_holds:
        raise CheckedFailure(out)
    return out


def _walls(args):
    L = _lattice(args)
    v = _vector(args.vector)
    if not args.cone:
        raise SchemaError("--cone is required")
    cone = cone_from_json(_load(args.cone))
    subs = None
    if args.subclasses and args.subclasses != "auto-box":
        subs = [tuple(dec_int(c) for c in x) for x in _load(args.subclasses)]
    return L, cone, walls.enumerate_walls(v, L, cone, subs)


def cmd_walls(args):
    _, _, ws = _walls(args)
    return {"kind": "numerical walls", "count": len(ws), "walls": [wall_to_json(w) for w in ws]}


def cmd_chambers(args):
    L, cone, ws = _walls(args)
    ch = walls.chambers_rank2(ws, cone, L)
    return {"walls": [wall_to_json(w) for w in ws], "chambers": [chamber_to_json(c, cone) for c in ch]}


def cmd_certify(args):
    kw = {"budget": args.budget}
    if args.rank_cap is not None:
        kw["rank_cap"] = args.rank_cap
    if args.vector:
        cert = certificates.plan_for_vector(_vector(args.vector), _lattice(args), **kw)
    else:
        if args.rank is None or args.square is None:
            raise SchemaError("--rank and --square (or --lattice and --vector) are required")
        cert = certificates.plan_certificate(args.rank, args.l, args.square, args.a_mod_l, **kw)
    return certificate_to_json(cert)


def cmd_verify(args):
    verdict = certificates.verify_certificate(_load(args.certificate))
    out = {"accepted": verdict.accepted,
           "failures": [{"move": i, "reason": reason} for i, reason in verdict.failures]}
    if not verdict.accepted:
        raise CheckedFailure(out)
    return out


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mukai-kit", description="Exact Mukai lattice toolkit for K3 surfaces.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "table"), default="json")
    common.add_argument("--out", help="write the JSON report to this file as well")
    common.add_argument("--lattice", help="lattice JSON file or inline JSON")
    common.add_argument("--vector", help="Mukai vector: file, JSON, or '(r, xi..., a)'")
    common.add_argument("--budget", type=int, default=100_000)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("pair", parents=[common], help="Mukai pairing of two vectors")
    p.add_argument("--x", required=True)
    p.add_argument("--y", required=True)
    p.set_defaults(func=cmd_pair)

    p = sub.add_parser("twist", parents=[common], help="tensor by a line bundle class")
    p.add_argument("--N", required=True, help="NS class, e.g. '[1,0]'")
    p.set_defaults(func=cmd_twist)

    p = sub.add_parser("reflect", parents=[common], help="reflect in a spherical class")
    p.add_argument("--v1", required=True)
    p.set_defaults(func=cmd_reflect)

    p = sub.add_parser("classify", parents=[common], help="primitive / spherical / isotropic")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("orth", parents=[common], help="saturated basis of v-perp")
    p.set_defaults(func=cmd_orth)

    p = sub.add_parser("family", parents=[common], help="build an explicit family instance")
    p.add_argument("--request", help='{"family": "coprime"|"general", "params": {...}}')
    p.add_argument("--kind", choices=("coprime", "general"), default="coprime")
    for name in ("r", "d", "s", "l", "r1"):
        p.add_argument(f"--{name}", type=int)
    p.set_defaults(func=cmd_family)

    p = sub.add_parser("check", parents=[common], help="evaluate one numerical hypothesis")
    p.add_argument("--kind", required=True, choices=[h.value for h in families.Hypothesis
                                                     if h is not families.Hypothesis.DEFORM_MATCH])
    p.add_argument("--params", help="JSON object of integer parameters")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("strata", parents=[common], help="numerics of the stratum M(v)_i")
    p.add_argument("--v1", required=True)
    p.add_argument("--i", type=int, required=True)
    p.add_argument("--m", type=int, default=0)
    p.set_defaults(func=cmd_strata)

    p = sub.add_parser("mu-bound", parents=[common], help="mu-unstable codimension bound / filtration oracle")
    p.add_argument("--square", type=int)
    p.add_argument("--l", type=int, required=True)
    p.set_defaults(func=cmd_mu_bound)

    for name, func, text in (("walls", cmd_walls, "numerical walls for r = 0"),
                             ("chambers", cmd_chambers, "chambers of a rank-2 ample cone")):
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("--cone", help="cone JSON: {generators: [...], reference: [...]}")
        p.add_argument("--subclasses", default="auto-box", help="JSON list of classes or 'auto-box'")
        p.set_defaults(func=func)

    p = sub.add_parser("certify", parents=[common], help="plan and verify a certificate")
    p.add_argument("--rank", type=int)
    p.add_argument("--l", type=int, default=1)
    p.add_argument("--square", type=int)
    p.add_argument("--a-mod-l", type=int, default=0, dest="a_mod_l")
    p.add_argument("--rank-cap", type=int, dest="rank_cap")
    p.set_defaults(func=cmd_certify, budget=10_000)

    p = sub.add_parser("verify", parents=[common], help="verify a certificate file")
    p.add_argument("certificate")
    p.set_defaults(func=cmd_verify)
    return parser


def _table(payload: Any, indent: int = 0) -> str:
    pad = " " * indent
    if isinstance(payload, dict):
        lines = []
        for k, v in payload.items():
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{pad}{k}:")
                lines.append(_table(v, indent + 2))
            else:
                lines.append(f"{pad}{k}: {v}")
        return "\n".join(lines)
    if isinstance(payload, list):
        if all(isinstance(x, str) for x in payload):
            return "\n".join(pad + x for x in payload)
        if all(not isinstance(x, (dict, list)) for x in payload):
            return pad + "  ".join(map(str, payload))
        return "\n".join(_table(x, indent) + ("\n" + pad + "-" if isinstance(x, dict) else "") for x in payload)
    return f"{pad}{payload}"


def _emit(payload: Any, args, stream) -> None:
    text = json.dumps(payload, indent=2)
    if getattr(args, "out", None):
        Path(args.out).write_text(text + "\n", encoding="utf-8")
    if getattr(args, "format", "json") == "table":
        if isinstance(payload, dict) and set(payload) == {"pair"}:
            print(payload["pair"], file=stream)
        else:
            print(_table(payload), file=stream)
    else:
        print(text, file=stream)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        payload = args.func(args)
    except CheckedFailure as exc:
        _emit(exc.payload, args, sys.stdout)
        return EXIT_FAILED
    except CheckFailed as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILED
    except json.JSONDecodeError as exc:
        print(f"error: malformed JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}", file=sys.stderr)
        return EXIT_INPUT
    except (MukaiError, OSError, ValueError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    _emit(payload, args, sys.stdout)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
