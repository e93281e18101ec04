"""Command-line surface: compute, verify, report.

Subcommands
-----------
characters   write chF_ell and the specialized character as exact q-series
asymptotics  a_r table plus expansion-vs-series comparison over a t-grid
dtilde       Laurent coefficients of the theta quotient, with closed forms
decompose    finite/polar decomposition residual report at one tau
verify       run named transformation suites (or all)

Every run writes a single JSON (or CSV) document; identical configuration,
including the seed, produces byte-identical output.  Exit codes: 0 success,
1 suite failure, 2 invalid parameters, 3 uncertifiable series evaluation.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from typing import Optional

SCHEMA = "maass-kit/1"
DEFAULT_SEED = 0x4B57  # "KW"
EXIT_OK = 0
EXIT_SUITE_FAILURE = 1
EXIT_BAD_PARAMS = 2
EXIT_NOT_CERTIFIED = 3


def _read_config(path: Optional[str]) -> dict:
    """key=value lines (TOML-style scalars); '#' comments allowed."""
    if not path:
        return {}
    out = {}
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"bad config line: {line!r}")
            key, val = (s.strip() for s in line.split("=", 1))
            out[key.replace("-", "_")] = val.strip("\"'")
    return out


_DEFAULTS = {
    "m": None,
    "n": None,
    "ell": 0,
    "order": 40,
    "N": 3,
    "j": 1,
    "t_grid": "0.2,0.1,0.05",
    "digits": 30,
    "tol": 1e-8,
    "seed": DEFAULT_SEED,
    "format": "json",
    "out": None,
    "points": 8,
    "tau_re": 0.3,
    "tau_im": 0.8,
    "suite": "all",
}

_CASTERS = {
    "m": int, "n": int, "ell": int, "order": int, "N": int, "j": int,
    "digits": int, "points": int,
    "tol": float, "tau_re": float, "tau_im": float,
    "seed": lambda s: int(str(s), 0),
}


def _apply_config(args: argparse.Namespace, cfg: dict):
    """Config supplies values for any option still at its parser default."""
    for key, raw in cfg.items():
        if not hasattr(args, key) or key not in _DEFAULTS:
            continue
        if getattr(args, key) != _DEFAULTS[key]:
            continue  # flag explicitly set; flags override config
        setattr(args, key, _CASTERS.get(key, str)(raw))


def _require_mn(args) -> None:
    if args.m is None or args.n is None:
        raise ValueError("m and n are required (flags or config)")
    if not args.m > args.n >= 1:
        raise ValueError("requires m > n")


def _emit(args, payload: dict, csv_rows=None, csv_header=None) -> None:
    if getattr(args, "format", "json") == "csv" and csv_rows is not None:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(csv_header)
        writer.writerows(csv_rows)
        text = buf.getvalue()
    else:
        text = json.dumps(payload, sort_keys=True, indent=1) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _provenance(args, **extra) -> dict:
    base = {
        "schema": SCHEMA,
        "command": args.command,
        "seed": args.seed,
        "digits": args.digits,
        "tolerance": args.tol,
    }
    base.update(extra)
    return base


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_characters(args) -> int:
    from .characters import chF_expansion, tr_character
    from .qseries import coeff_extract, series_to_json

    _require_mn(args)
    chf_ell = coeff_extract(chF_expansion(args.m, args.n, args.order), args.ell)
    tr = tr_character(args.m, args.n, args.ell, args.order)
    payload = _provenance(
        args,
        params={"m": args.m, "n": args.n, "ell": args.ell, "T": args.order},
        chf_ell=series_to_json(chf_ell),
        tr_character=series_to_json(tr),
    )
    rows = [[str(e), str(c.re), str(c.im), c.pi_exp] for e, c in tr.terms()]
    _emit(args, payload, rows, ["q_exponent", "re", "im", "pi_exp"])
    return EXIT_OK


def cmd_asymptotics(args) -> int:
    import mpmath as mp

    from .asymptotics import AsymptoticExpansion
    from .characters import TailBoundNotCertified, character_value

    _require_mn(args)
    ts = [float(s) for s in args.t_grid.split(",") if s]
    exp = AsymptoticExpansion.build(args.m, args.n, args.ell, args.N)
    coeff_rows = []
    for r, c in enumerate(exp.coeffs):
        with mp.workdps(args.digits):
            coeff_rows.append({"r": r, "a_r_exact": repr(c),
                               "a_r_float": float(c.to_real())})
    comparison = []
    try:
        for t in sorted(ts, reverse=True):
            truth = character_value(args.m, args.n, args.ell, t,
                                    rel_tol=min(args.tol, 1e-9))
            approx = float(exp.eval(t, args.digits))
            comparison.append({
                "t": t,
                "series_value": truth.value,
                "series_order": truth.order,
                "series_tail_bound": truth.rel_tail_bound,
                "expansion_value": approx,
                "rel_error": abs(approx / truth.value - 1.0),
            })
    except TailBoundNotCertified as err:
        sys.stderr.write(f"error: {err}\n")
        return EXIT_NOT_CERTIFIED
    for i in range(1, len(comparison)):
        a, b = comparison[i - 1], comparison[i]
        if b["rel_error"] > 0:
            b["error_ratio"] = a["rel_error"] / b["rel_error"]
            b["expected_ratio"] = (a["t"] / b["t"]) ** (args.N + 1)
    payload = _provenance(
        args,
        params={"m": args.m, "n": args.n, "ell": args.ell, "N": args.N, "t_grid": ts},
        coefficients=coeff_rows,
        comparison=comparison,
    )
    rows = [[c["r"], c["a_r_exact"], c["a_r_float"]] for c in coeff_rows]
    _emit(args, payload, rows, ["r", "a_r_exact", "a_r_float"])
    return EXIT_OK


def cmd_dtilde(args) -> int:
    from .characters import dtilde, dtilde_closed_form
    from .qseries import series_to_json

    _require_mn(args)
    series = dtilde(args.m, args.n, args.j, args.order)
    payload = _provenance(
        args,
        params={"m": args.m, "n": args.n, "j": args.j, "T": args.order},
        dtilde=series_to_json(series),
    )
    if args.n in (2, 4):
        closed = dtilde_closed_form(args.m, args.n, args.j, args.order)
        payload["closed_form_matches"] = series.first_mismatch(closed) is None
    rows = [[str(e), str(c.re), str(c.im), c.pi_exp] for e, c in series.terms()]
    _emit(args, payload, rows, ["q_exponent", "re", "im", "pi_exp"])
    return EXIT_OK


def cmd_decompose(args) -> int:
    import random

    import mpmath as mp

    from .decomposition import (DecompositionContext, depsilon_explicit, h_canonical,
                                h_ell_contour, phiF_partial, phiP_eval, rewrite_dop_rhs)

    _require_mn(args)
    with mp.workdps(args.digits + 10):
        tau = mp.mpc(args.tau_re, args.tau_im)
        ctx = DecompositionContext(args.m, args.n, tau, digits=args.digits)
        rng = random.Random(args.seed)
        worst_dec = 0.0
        for _ in range(args.points):
            z = mp.mpc(rng.uniform(0.06, 0.94), rng.uniform(-0.4, 0.4) * float(ctx.v))
            from .complexeval import lattice_distance

            if lattice_distance(z, ctx.tau) < 0.08:
                continue
            resid = abs(ctx.phi(z) - phiF_partial(ctx, z) - phiP_eval(ctx, z))
            worst_dec = max(worst_dec, float(resid))
        worst_per = 0.0
        for ell in range(args.m - args.n):
            a = h_canonical(ctx, ell)
            b = h_ell_contour(ctx, ell + (args.m - args.n))  # canonical contour, shifted index
            worst_per = max(worst_per, float(abs(a - b)))
        dep = float(abs(ctx.dop_R(0, 1) - depsilon_explicit(ctx, 0)))
        rew = float(abs(ctx.dop_R(0, 1) - rewrite_dop_rhs(ctx, 0, 1)))
    payload = _provenance(
        args,
        m=args.m,
        n=args.n,
        tau={"re": args.tau_re, "im": args.tau_im},
        residuals={
            "decomposition": worst_dec,
            "periodicity": worst_per,
            "depsilon": dep,
            "rewriteDop": rew,
        },
        truncations={"circle_points": ctx.circle_points, "rho": ctx.rho},
        points=args.points,
    )
    _emit(args, payload)
    ok = max(worst_dec, worst_per, dep, rew) <= args.tol
    return EXIT_OK if ok else EXIT_SUITE_FAILURE


def cmd_verify(args) -> int:
    from .suites import run_all_suites, suite_names, transformation_suite

    params = {}
    if args.m is not None:
        params["m"] = args.m
    if args.n is not None:
        params["n"] = args.n
    if args.suite == "all":
        reports = run_all_suites(tolerance=args.tol, digits=args.digits,
                                 seed=args.seed, params=params or None, strict=False)
    else:
        if args.suite not in suite_names():
            sys.stderr.write(f"error: unknown suite {args.suite!r}; "
                             f"known: {', '.join(suite_names())}\n")
            return EXIT_BAD_PARAMS
        reports = [transformation_suite(args.suite, params or None, args.tol,
                                        args.digits, args.seed, strict=False)]
    all_pass = all(r["pass"] for r in reports)
    payload = _provenance(args, suites=reports, all_pass=all_pass)
    _emit(args, payload)
    return EXIT_OK if all_pass else EXIT_SUITE_FAILURE


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="maasskit",
        description="Kac-Wakimoto characters: exact q-series, decompositions, asymptotics.")
    parser.add_argument("--config", help="key=value config file (flags override)")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--out", help="output path (default: stdout)")
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--digits", type=int, default=30, help="working precision")
        p.add_argument("--tol", type=float, default=1e-8, help="verification tolerance")
        p.add_argument("--seed", type=lambda s: int(s, 0), default=DEFAULT_SEED)

    p = sub.add_parser("characters", help="exact character q-expansions")
    p.add_argument("--m", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--ell", type=int, default=0)
    p.add_argument("--order", "-T", type=int, default=40)
    common(p)
    p.set_defaults(func=cmd_characters)

    p = sub.add_parser("asymptotics", help="a_r table and expansion-vs-series check")
    p.add_argument("--m", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--ell", type=int, default=0)
    p.add_argument("--N", type=int, default=3, help="expansion order")
    p.add_argument("--t-grid", default="0.2,0.1,0.05")
    common(p)
    p.set_defaults(func=cmd_asymptotics)

    p = sub.add_parser("dtilde", help="Laurent coefficients of the theta quotient")
    p.add_argument("--m", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--j", type=int, default=1)
    p.add_argument("--order", "-T", type=int, default=40)
    common(p)
    p.set_defaults(func=cmd_dtilde)

    p = sub.add_parser("decompose", help="finite/polar decomposition residual report")
    p.add_argument("--m", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--tau-re", type=float, default=0.3)
    p.add_argument("--tau-im", type=float, default=0.8)
    p.add_argument("--points", type=int, default=8)
    common(p)
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("verify", help="run transformation suites")
    p.add_argument("--suite", default="all")
    p.add_argument("--m", type=int)
    p.add_argument("--n", type=int)
    common(p)
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _read_config(args.config)
        _apply_config(args, cfg)
    except (OSError, ValueError) as err:
        sys.stderr.write(f"error: {err}\n")
        return EXIT_BAD_PARAMS
    try:
        return args.func(args)
    except ValueError as err:
        sys.stderr.write(f"error: {err}\n")
        return EXIT_BAD_PARAMS


if __name__ == "__main__":
    sys.exit(main())
