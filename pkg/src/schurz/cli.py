"""``schurz``: evaluate, convert, dualize, enumerate, verify and render from the shell.

Exit codes: 0 success, 1 a ``verify`` check failed, 2 parse or usage error,
3 admissibility or membership error, 4 a resource cap was exceeded.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, fields
from fractions import Fraction

from . import __version__
from .diagram import eval_ssyt_series, load_tableau, sequence_to_tableau, tableau_to_sequence
from .duality import DUAL, enumerate_relations, theta, verify_relation
from .errors import (
    AdmissibilityError,
    CapExceeded,
    MembershipError,
    NotProperError,
    ParseError,
    ShapeError,
)
from .integral_eval import (
    base_case_identity,
    eval_via_extensions,
    mc_integral,
    verify_lemma1,
    verify_relation2,
)
from .notation import LabeledSeq, SeqIndex, enumerate_H, format_sequence
from .poset import build_poset, to_dot
from .series_eval import FLOAT, RATIONAL, eval_schur_series

EXIT_OK, EXIT_FAILED, EXIT_PARSE, EXIT_ADMISSIBILITY, EXIT_CAP = 0, 1, 2, 3, 4
ENV_PREFIX = "SCHURZ_"


@dataclass
class RunConfig:
    N: int = 10**4
    mode: str = FLOAT
    quad_tol: float = 1e-8
    mc_samples: int = 10**6
    seed: int = 0
    poset_elements: int = 20
    enum_weight: int = 12
    loop_budget: int = 10**9
    weight_max: int = 6
    json: bool = False

    def __post_init__(self):
        if self.mode not in (FLOAT, RATIONAL):
            raise ValueError(f"mode must be {FLOAT!r} or {RATIONAL!r}")
        for f in fields(self):
            v = getattr(self, f.name)
            if f.name == "seed":
                if v < 0:
                    raise ValueError("seed must be nonnegative")
            elif isinstance(v, (int, float)) and not isinstance(v, bool) and v <= 0:
                raise ValueError(f"{f.name} must be positive")

    @classmethod
    def from_env(cls, environ=None, **overrides) -> "RunConfig":
        environ = os.environ if environ is None else environ
        kw = {}
        for f in fields(cls):
            raw = environ.get(ENV_PREFIX + f.name.upper())
            if raw is not None:
                kw[f.name] = _coerce(f.name, raw)
        kw.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**kw)


def _coerce(name, raw):
    if name == "mode":
        return raw
    if name == "json":
        return raw.lower() in ("1", "true", "yes")
    if name == "quad_tol":
        return float(raw)
    return int(float(raw)) if "e" in raw.lower() else int(raw)


def _int(text):
    """Integers, also written like ``1e5``."""
    return int(float(text)) if "e" in text.lower() else int(text)


def _num(text):
    return Fraction(text)


# ------------------------------------------------------------------ output


def _fmt(v):
    if isinstance(v, Fraction):
        return f"{v.numerator}/{v.denominator}" if v.denominator != 1 else str(v.numerator)
    if isinstance(v, float):
        return f"{v:.12g}"
    return str(v)


def _emit(cfg, doc, lines):
    if cfg.json:
        print(json.dumps(doc, default=_json_default))
    else:
        print("\n".join(lines))


def _json_default(v):
    if isinstance(v, Fraction):
        return _fmt(v)
    if hasattr(v, "item"):
        return v.item()
    raise TypeError(f"cannot serialize {type(v).__name__}")


# ---------------------------------------------------------------- commands


def cmd_eval(args, cfg):
    if args.tableau:
        t = load_tableau(args.tableau)
        if t.is_diagonal_constant():
            s = tableau_to_sequence(t.to_diagonal())
            res = eval_schur_series(s, cfg.N, cfg.mode, cfg.loop_budget)
        else:
            s = None
            res = eval_ssyt_series(t, cfg.N, cfg.mode, cfg.loop_budget)
    elif args.seq:
        s = SeqIndex.parse(args.seq)
        res = eval_schur_series(s, cfg.N, cfg.mode, cfg.loop_budget)
    else:
        raise ParseError("give a sequence or --tableau FILE", 0)
    doc = res.to_json()
    lines = [f"value          {_fmt(res.value)}", f"N              {res.N}", f"error_estimate {res.error_estimate:.3g}"]
    if args.check_integral:
        if s is None:
            raise ShapeError("--check-integral needs a diagonal-constant tableau")
        p = build_poset(theta(s))
        other = eval_via_extensions(p, cfg.N, cfg.mode, cfg.poset_elements)
        diff = abs(float(res.value - other.value))
        doc["integral"] = {**other.to_json(), "abs_diff": diff}
        lines += [f"via extensions {_fmt(other.value)}", f"discrepancy    {diff:.3g}"]
        if args.mc:
            est = mc_integral(p, samples=cfg.mc_samples, seed=cfg.seed)
            doc["monte_carlo"] = est.to_json()
            lines.append(f"monte carlo    {est.mean:.6g} +- {est.stderr:.2g}")
    _emit(cfg, doc, lines)
    return EXIT_OK


def cmd_convert(args, cfg):
    if args.direction == "seq2tab":
        t = sequence_to_tableau(SeqIndex.parse(args.input))
        doc = t.to_json()
        if cfg.json:
            print(json.dumps(doc))
        else:
            print(json.dumps(doc, indent=2))
    else:
        t = load_tableau(args.input, diagonal=True)
        text = format_sequence(tableau_to_sequence(t))
        _emit(cfg, {"sequence": text}, [text])
    return EXIT_OK


def cmd_dual(args, cfg):
    member, dual = DUAL[args.kind]
    s = SeqIndex.parse(args.seq)
    out = format_sequence(dual(s))
    _emit(cfg, {"kind": args.kind, "input": format_sequence(s), "dual": out}, [out])
    return EXIT_OK


def cmd_relations(args, cfg):
    rels = enumerate_relations(cfg.weight_max, args.kind, cfg.enum_weight)
    if args.verify:
        rels = [verify_relation(r, cfg.N) for r in rels]
    doc = {"kind": args.kind, "weight_max": cfg.weight_max, "pairs": [r.to_json() for r in rels]}
    lines = []
    for r in rels:
        line = f"{format_sequence(r.lhs)} = {format_sequence(r.rhs)}"
        if r.self_dual:
            line += "  (self-dual)"
        if r.verified:
            line += f"  diff {r.verified['abs_diff']:.3g}"
        lines.append(line)
    _emit(cfg, doc, lines)
    return EXIT_OK


def cmd_poset(args, cfg):
    text = args.word
    if any(c in text for c in "bo•∘"):
        w = LabeledSeq.parse(text)
    else:
        w = theta(SeqIndex.parse(text))
    p = build_poset(w)
    if args.dot:
        sys.stdout.write(to_dot(p))
    else:
        _emit(cfg, p.to_json(), [json.dumps(p.to_json())])
    return EXIT_OK


def cmd_verify(args, cfg):
    reports = []
    if args.target == "lemma1":
        if not args.u or not args.n:
            raise ParseError("lemma1 needs --u and --n", 0)
        r = verify_lemma1(args.case, args.u, args.n, cfg.N, cfg.quad_tol)
        reports.append(("lemma1 " + args.case, r.passed, r.to_json()))
    elif args.target == "relation2":
        u = args.u or [0, 1]
        r = verify_relation2(args.seq or "1", args.append, u, min(cfg.N, 2000), cfg.quad_tol)
        reports.append((f"relation2 {args.append}", r.passed, r.to_json()))
        if args.base:
            b = base_case_identity(0, Fraction(1, 2))
            reports.append(("base identity", b.passed, b.to_json()))
    elif args.target == "main2":
        for s in enumerate_H(cfg.weight_max):
            a = eval_schur_series(s, cfg.N, cfg.mode, cfg.loop_budget)
            b = eval_via_extensions(build_poset(theta(s)), cfg.N, cfg.mode, cfg.poset_elements)
            diff = abs(float(a.value - b.value))
            tol = a.error_estimate + b.error_estimate + 1e-9
            reports.append((format_sequence(s), diff <= tol, {"abs_diff": diff, "tolerance": tol}))
    elif args.target == "duality":
        kinds = [args.kind] if args.kind else ["lr", "tau"]
        for kind in kinds:
            for rel in enumerate_relations(cfg.weight_max, kind, cfg.enum_weight):
                v = verify_relation(rel, cfg.N).verified
                name = f"{kind} {format_sequence(rel.lhs)} = {format_sequence(rel.rhs)}"
                reports.append((name, v["pass"], v))
    ok = all(p for _, p, _ in reports)
    doc = {"target": args.target, "pass": ok, "checks": [{"name": n, "pass": p, **d} for n, p, d in reports]}
    lines = [f"{'PASS' if p else 'FAIL'}  {n}" for n, p, _ in reports]
    lines.append(f"{sum(p for _, p, _ in reports)}/{len(reports)} checks passed")
    _emit(cfg, doc, lines)
    return EXIT_OK if ok else EXIT_FAILED


# ------------------------------------------------------------------ parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--N", type=_int, help="truncation bound (default 10000)")
    common.add_argument("--mode", choices=[FLOAT, RATIONAL])
    common.add_argument("--quad-tol", type=float)
    common.add_argument("--mc-samples", type=_int)
    common.add_argument("--seed", type=int)
    common.add_argument("--weight-max", type=int)
    common.add_argument("--loop-budget", type=_int)
    common.add_argument("--json", action="store_true", default=None, help="machine-readable output")

    parser = argparse.ArgumentParser(prog="schurz", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"schurz {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", parents=[common], help="truncated series value")
    p.add_argument("seq", nargs="?")
    p.add_argument("--tableau", help="tableau JSON file")
    p.add_argument("--check-integral", action="store_true")
    p.add_argument("--mc", action="store_true", help="with --check-integral, also run Monte Carlo")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("convert", parents=[common], help="sequence <-> tableau")
    p.add_argument("direction", choices=["seq2tab", "tab2seq"])
    p.add_argument("input")
    p.set_defaults(func=cmd_convert)

    p = sub.add_parser("dual", parents=[common], help="dual index")
    p.add_argument("kind", choices=["lr", "tau"])
    p.add_argument("seq")
    p.set_defaults(func=cmd_dual)

    p = sub.add_parser("relations", parents=[common], help="enumerate duality pairs")
    p.add_argument("kind", choices=["lr", "tau"])
    p.add_argument("--verify", action="store_true")
    p.set_defaults(func=cmd_relations)

    p = sub.add_parser("poset", parents=[common], help="2-labeled poset of an index or labeled word")
    p.add_argument("word")
    p.add_argument("--dot", action="store_true")
    p.set_defaults(func=cmd_poset)

    p = sub.add_parser("verify", parents=[common], help="run a numerical check")
    p.add_argument("target", choices=["lemma1", "relation2", "main2", "duality"])
    p.add_argument("--case", choices=["I", "II", "III"], default="I")
    p.add_argument("--u", type=_num, nargs="+")
    p.add_argument("--n", type=int, nargs="+")
    p.add_argument("--seq")
    p.add_argument("--append", choices=["exp", "open", "up", "down", "close"], default="exp")
    p.add_argument("--base", action="store_true", help="relation2: also check the base identity")
    p.add_argument("--kind", choices=["lr", "tau"])
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = RunConfig.from_env(
            N=args.N,
            mode=args.mode,
            quad_tol=args.quad_tol,
            mc_samples=args.mc_samples,
            seed=args.seed,
            weight_max=args.weight_max,
            loop_budget=args.loop_budget,
            json=args.json,
        )
        return args.func(args, cfg)
    except ParseError as exc:
        _fail(f"parse error: {exc}")
        return EXIT_PARSE
    except (AdmissibilityError, NotProperError, MembershipError, ShapeError) as exc:
        _fail(f"not admissible: {exc}")
        return EXIT_ADMISSIBILITY
    except CapExceeded as exc:
        _fail(f"cap exceeded: {exc}")
        return EXIT_CAP
    except (ValueError, OSError) as exc:
        _fail(f"error: {exc}")
        return EXIT_PARSE


def _fail(msg):
    print(f"schurz: {msg}", file=sys.stderr)


if __name__ == "__main__":
    sys.exit(main())
