"""Command-line front end: ``hsalg <command> [options]``.

JSON goes to stdout (or ``--output``), a short summary to stderr.  Exit codes:
0 when every check passes, 1 when a check fails, 2 on bad input or a domain
error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .algebra import AlgebraError, Element, verify_crossed_product_relations
from .derivations import (
    DerivationError,
    DLambda,
    DPhi,
    Inner,
    decompose,
    derivation_from_json,
    is_inner_certificate,
)
from .inequalities import InequalityConfig, verify_inequalities
from .ktheory import KTheoryError, index_pairing, k0_class, winding_number
from .norms import NormError, hs_norm, mn_norm, n_norm
from .sampling import PRNG_NAME, make_rng, random_element, random_lambda, random_trig
from .symbols import SymbolError
from .trig import TrigPoly

DOMAIN_ERRORS = (AlgebraError, DerivationError, KTheoryError, NormError, SymbolError, KeyError, ValueError)


class InputError(Exception):
    pass


@dataclass
class RunConfig:
    s: int = 2
    depth_d: int = 3
    depth_e: int = 2
    support: int = 4
    m_cut: int = 64
    seed: int = 0
    count: int = 100
    tol: float = 1e-9
    scalar_mode: str = "exact"
    S: float = 4.0

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> RunConfig:
        cfg = cls(**{k: getattr(args, k) for k in cls.__dataclass_fields__})
        for name in ("s", "depth_d", "depth_e", "support", "m_cut", "count"):
            if getattr(cfg, name) < 1:
                raise InputError(f"--{name.replace('_', '-')} must be positive")
        if cfg.s < 2:
            raise InputError("--s must be at least 2")
        if cfg.tol <= 0 or cfg.S <= 0:
            raise InputError("--tol and --S must be positive")
        return cfg


def _finite(obj):
    """Replace non-finite floats so the output is strict JSON."""
    if isinstance(obj, float) and not math.isfinite(obj):
        return "inf" if obj > 0 else ("-inf" if obj < 0 else "nan")
    if isinstance(obj, dict):
        return {k: _finite(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_finite(v) for v in obj]
    if isinstance(obj, np.generic):
        return _finite(obj.item())
    return obj


def _load_json(path: str | None) -> dict:
    if path is None:
        raise InputError("--input is required for this command")
    text = sys.stdin.read() if path == "-" else Path(path).read_text()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"parse error in {path} at line {exc.lineno} column {exc.colno}: {exc.msg}") from exc


def _load_element(path: str | None, cfg: RunConfig) -> Element:
    a = Element.from_json(_load_json(path))
    return a.to_float() if cfg.scalar_mode == "float" else a


# commands -----------------------------------------------------------------------------


def cmd_verify_relations(cfg: RunConfig, args) -> tuple[dict, bool, str]:
    rep = verify_crossed_product_relations(cfg.seed, cfg.count, s_values=(cfg.s,), max_depth=cfg.depth_d)
    rep["prng"] = PRNG_NAME
    failed = [r["identity"] for r in rep["identities"] if r["status"] != "pass"]
    summary = f"{len(rep['identities']) - len(failed)}/{len(rep['identities'])} identities pass"
    return rep, rep["all_pass"], summary + (f"; failing: {', '.join(failed)}" if failed else "")


def cmd_inequalities(cfg: RunConfig, args) -> tuple[dict, bool, str]:
    icfg = InequalityConfig(
        s=cfg.s,
        count=cfg.count,
        toeplitz_count=min(cfg.count, 50),
        exp_count=min(cfg.count, 50),
        support=cfg.support,
        depth_d=cfg.depth_d,
        depth_e=cfg.depth_e,
        m_cut=cfg.m_cut,
        S=cfg.S,
        checks=args.check or None,
    )
    rep = verify_inequalities(cfg.seed, config=icfg)
    rep["prng"] = PRNG_NAME
    n_pass = sum(r["status"] == "pass" for r in rep["results"])
    return rep, rep["all_pass"], f"{n_pass}/{len(rep['results'])} inequalities certified"


def cmd_norm(cfg: RunConfig, args) -> tuple[dict, bool, str]:
    a = _load_element(args.input, cfg)
    rep = {
        "N": args.N,
        "M": args.M,
        "n_norm": n_norm(a, args.N, cfg.m_cut).to_json(),
        "mn_norm": mn_norm(a, args.M, args.N, cfg.m_cut).to_json(),
        "hs_norm": hs_norm(a, args.M, args.N, cfg.S, cfg.m_cut).to_json() if a.in_HS() else None,
        "in_HS": a.in_HS(),
        "in_Is": a.in_Is(),
    }
    nv = rep["n_norm"]
    return rep, True, f"||a||_{args.N} {nv['kind']}: {nv.get('value', [nv.get('lower'), nv.get('upper')])}"


def cmd_fourier(cfg: RunConfig, args) -> tuple[dict, bool, str]:
    a = _load_element(args.input, cfg)
    af = a.to_float()
    K = 2 * a.radius + 2
    worst = 0.0
    for n in range(-a.radius, a.radius + 1):
        avg = Element.zero(a.s)
        for k in range(K):
            avg = avg + af.rho(k / K).scale(np.exp(-2j * np.pi * n * k / K) / K)
        worst = max(worst, avg.max_diff(af.mode(n)))
    ok = worst <= 1e-12
    rep = {
        "modes": [{"n": n, "symbol": sym.to_json()} for n, sym in a.terms.items()],
        "expectation": a.expectation().to_json(),
        "average_points": K,
        "reconstruction_error": worst,
        "pass": ok,
    }
    return rep, ok, f"{len(a.terms)} modes; rho-average error {worst:.2e}"


def cmd_decompose(cfg: RunConfig, args) -> tuple[dict, bool, str]:
    delta = derivation_from_json(_load_json(args.input))
    dec = decompose(delta, cfg.tol)
    rep = dec.to_json()
    rep["is_inner"] = is_inner_certificate(dec)
    ok = dec.residual.upper <= cfg.tol
    return rep, ok, f"residual {dec.residual.upper:.3e}; inner: {rep['is_inner']}"


def cmd_k0(cfg: RunConfig, args) -> tuple[dict, bool, str]:
    data = _load_json(args.input)
    if "coeffs" in data:
        phi = TrigPoly.from_json(data)
        w = winding_number(phi, cfg.tol)
        cls = index_pairing(phi, cfg.s, cfg.tol)
        return {"winding": w, "index": cls.to_json()}, True, f"winding {w}; index {list(cls.values)}"
    p = Element.from_json(data)
    cls = k0_class(p, cfg.tol, cfg.depth_e if args.refine else None)
    return cls.to_json(), True, f"K0 class at depth {cls.e}: {list(cls.values)}"


def _roundtrip_suite(cfg: RunConfig) -> dict:
    exact = cfg.scalar_mode == "exact"
    fails = 0
    count = min(cfg.count, 10)
    for i in range(count):
        rng = make_rng([cfg.seed, 1000 + i])
        phi = random_trig(rng, 3, exact)
        lam = random_lambda(rng, cfg.s, e=1 if cfg.s > 4 else 2, exact=exact)
        w = random_element(rng, cfg.s, support=2, d_max=2, e_max=1 if cfg.s > 4 else 2, exact=exact)
        dec = decompose(DPhi(cfg.s, phi) + DLambda(lam) + Inner(w), cfg.tol)
        ok = dec.phi.close(phi, 0.0 if exact else cfg.tol) and dec.lam.max_diff(lam) <= cfg.tol
        fails += not (ok and dec.residual.upper <= cfg.tol)
    return {"check": "decomposition_roundtrip", "instances": count, "failures": fails, "status": "pass" if not fails else "fail"}


def _k0_suite(cfg: RunConfig) -> dict:
    s = cfg.s
    unit = Element.identity(s) - Element.V(s) * Element.Vstar(s)
    rows = []
    for e in range(1, min(cfg.depth_e, 3) + 1):
        cls = k0_class(unit, cfg.tol, e)
        rows.append(cls.is_constant() and cls.values[0] == 1)
    ind = index_pairing(TrigPoly.monomial(1), s, cfg.tol)
    rows.append(ind.is_constant() and ind.values[0] == -1)
    return {"check": "k0_generators", "instances": len(rows), "failures": rows.count(False), "status": "pass" if all(rows) else "fail"}


def cmd_report(cfg: RunConfig, args) -> tuple[dict, bool, str]:
    rel, rel_ok, _ = cmd_verify_relations(cfg, args)
    ineq, ineq_ok, _ = cmd_inequalities(cfg, args)
    extra = [_roundtrip_suite(cfg), _k0_suite(cfg)]
    sections = {
        "relations": rel_ok,
        "inequalities": ineq_ok,
        **{row["check"]: row["status"] == "pass" for row in extra},
    }
    rep = {
        "version": __version__,
        "prng": PRNG_NAME,
        "config": cfg.__dict__,
        "relations": rel,
        "inequalities": ineq,
        "derivations_and_k0": extra,
        "sections": sections,
        "all_pass": all(sections.values()),
    }
    bad = [k for k, v in sections.items() if not v]
    return rep, rep["all_pass"], "all sections pass" if not bad else f"failing sections: {', '.join(bad)}"


COMMANDS = {
    "verify-relations": (cmd_verify_relations, "check the seven crossed-product identities on seeded random symbols"),
    "inequalities": (cmd_inequalities, "certify the norm inequalities on seeded random instances"),
    "norm": (cmd_norm, "norms of an element read from --input"),
    "fourier": (cmd_fourier, "Fourier modes of an element and the rho-average reconstruction check"),
    "decompose": (cmd_decompose, "decompose a derivation read from --input"),
    "k0": (cmd_k0, "K0 class of a projection, or winding and index of a trigonometric polynomial"),
    "report": (cmd_report, "run every seeded suite and summarise"),
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    d = RunConfig()
    common.add_argument("--s", type=int, default=d.s, help="base s >= 2")
    common.add_argument("--seed", type=int, default=d.seed)
    common.add_argument("--count", type=int, default=d.count, help="random instances per check")
    common.add_argument("--tol", type=float, default=d.tol)
    common.add_argument("--m-cut", dest="m_cut", type=int, default=d.m_cut, help="truncation for interval norms")
    common.add_argument("--depth-d", dest="depth_d", type=int, default=d.depth_d)
    common.add_argument("--depth-e", dest="depth_e", type=int, default=d.depth_e)
    common.add_argument("--support", type=int, default=d.support, help="largest |n| of random modes")
    common.add_argument("--scalar-mode", dest="scalar_mode", choices=("exact", "float"), default=d.scalar_mode)
    common.add_argument("--S", dest="S", type=float, default=d.S, help="constant in the HS norm")
    common.add_argument("--input", help="JSON input file ('-' for stdin)")
    common.add_argument("--output", help="write JSON here instead of stdout")

    parser = argparse.ArgumentParser(prog="hsalg", description="Hensel-Steinitz algebra toolkit")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in COMMANDS.items():
        p = sub.add_parser(name, parents=[common], help=help_text, description=help_text)
        if name == "norm":
            p.add_argument("--N", dest="N", type=int, default=0)
            p.add_argument("--M", dest="M", type=int, default=0)
        if name in ("inequalities", "report"):
            p.add_argument("--check", action="append", help="restrict to the named inequality (repeatable)")
        if name == "k0":
            p.add_argument("--refine", action="store_true", help="report the class at depth --depth-e")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = RunConfig.from_args(args)
        handler = COMMANDS[args.command][0]
        report, ok, summary = handler(cfg, args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except DOMAIN_ERRORS as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    text = json.dumps(_finite(report), indent=2, sort_keys=True) + "\n"
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    print(f"{args.command}: {'PASS' if ok else 'FAIL'} ({summary})", file=sys.stderr)
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
