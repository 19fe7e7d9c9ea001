"""Command-line interface: predict, simulate, table, verify.

Exit codes: 0 success, 1 failed verification or runtime error, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import predictor
from .ensembles import DEFAULT_SEED, ENSEMBLE_KINDS
from .experiments import (
    PROFINITE_EVENTS,
    TABLE_PARAMS,
    ExperimentSpec,
    emit,
    run_oracle_suite,
    run_profinite_check,
    run_table,
    simulate,
)

WORKERS_ENV = "WALKDISC_WORKERS"
PREDICT_TARGETS = ("walk-p", "walk-global", "disc-p", "disc-p2", "disc-global", "rank", "event", "walk-asym")
VERIFY_SUITES = ("oracles", "profinite", "predictor-identities", "all")
PROFINITE_CASES = (
    (2, (0, 1), 16),
    (3, (0, 1), 16),
    (2, (1, 1, 1), 10),
)


class UsageError(Exception):
    pass


def _default_workers() -> int:
    try:
        return max(1, int(os.environ.get(WORKERS_ENV, "1")))
    except ValueError:
        return 1


def _beta(text: str) -> tuple:
    """Parse beta coefficients, low degree first, e.g. "1,1,1" for x^2+x+1."""
    try:
        return tuple(int(c) for c in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"cannot parse beta {text!r}; use comma-separated coefficients")


def _int_list(text: str) -> list[int]:
    try:
        return [int(c) for c in text.split(",") if c]
    except ValueError:
        raise argparse.ArgumentTypeError(f"cannot parse integer list {text!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="walkdisc",
        description="Walk-matrix and discriminant square-freeness: limits, simulations and checks.",
    )
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True

    pr = sub.add_parser("predict", help="print a limiting probability with its error bound")
    pr.add_argument("target", choices=PREDICT_TARGETS, help="which limit to evaluate")
    pr.add_argument("--p", type=int, help="prime")
    pr.add_argument("--q", type=int, help="field order (rank target)")
    pr.add_argument("--k", type=int, default=0, help="corank (rank target, default 0)")
    pr.add_argument("--m", type=int, help="extra columns; selects the rectangular rank law")
    pr.add_argument("--event", choices=predictor.EVENT_TAGS, help="event tag (event target)")
    pr.add_argument("--beta-degree", type=int, default=1, help="degree of beta (event target, default 1)")
    pr.add_argument("--digits", type=int, default=14, help="digits after the point (default 14)")

    sim = sub.add_parser("simulate", help="run one Monte Carlo experiment")
    sim.add_argument("--config", help="JSON file with ExperimentSpec fields; flags override it")
    sim.add_argument("--ensemble", choices=ENSEMBLE_KINDS, help="matrix law (default sym01_loops)")
    sim.add_argument("--statistic", choices=("walk", "disc", "rank", "event", "diagonal"),
                     help="statistic (inferred from --p/--q/--k/--event when omitted)")
    sim.add_argument("--n", type=int, help="matrix size")
    sim.add_argument("--p", type=int, help="prime (walk statistic or truncated ring)")
    sim.add_argument("--q", type=int, help="prime or prime square (disc) or field order (F_q ensembles)")
    sim.add_argument("--k", type=int, help="corank (rank statistic)")
    sim.add_argument("--m", type=int, help="extra columns (rect_Fq)")
    sim.add_argument("--event", help="event tag (event statistic)")
    sim.add_argument("--beta", type=_beta, help="beta coefficients low degree first, e.g. 1,1,1")
    sim.add_argument("--beta-power", type=int, help="exponent of beta in the truncation (default 3)")
    _common(sim)
    sim.add_argument("--vector", help="zeta law: uniform, ones or indicator:i (default uniform)")

    tb = sub.add_parser("table", help="estimate a full table grid")
    tb.add_argument("table", choices=tuple(TABLE_PARAMS), help="grid name")
    tb.add_argument("--sizes", type=_int_list, help="comma-separated sizes (default 8,10,12,15,25,50,100)")
    tb.add_argument("--params", type=_int_list, help="comma-separated primes or q values")
    _common(tb)

    vf = sub.add_parser("verify", help="run oracle sweeps, finite-n band checks or predictor identities")
    vf.add_argument("suite", choices=VERIFY_SUITES, help="what to verify")
    vf.add_argument("--samples", type=int, default=100_000, help="samples per band check (default 100000)")
    vf.add_argument("--seed", type=int, default=DEFAULT_SEED, help=f"master seed (default {DEFAULT_SEED})")
    vf.add_argument("--workers", type=int, default=None, help=f"worker processes (default ${WORKERS_ENV} or 1)")
    return parser


def _common(p: argparse.ArgumentParser):
    p.add_argument("--samples", type=int, help="number of samples (default 100000)")
    p.add_argument("--seed", type=int, help=f"master seed (default {DEFAULT_SEED})")
    p.add_argument("--workers", type=int, help=f"worker processes (default ${WORKERS_ENV} or 1)")
    p.add_argument("--chunk-size", type=int, help="samples per random stream (default 10000)")
    p.add_argument("--format", choices=("csv", "json"), default="csv", help="report format (default csv)")
    p.add_argument("--out", help="write the report here instead of stdout")


# ---------------------------------------------------------------- predict


def _need(args, *names):
    for n in names:
        if getattr(args, n) is None:
            raise UsageError(f"this target needs --{n.replace('_', '-')}")


def cmd_predict(args) -> int:
    t = args.target
    if t == "walk-p":
        _need(args, "p")
        v = predictor.walk_limit_p(args.p)
    elif t == "walk-global":
        v = predictor.walk_limit_global()
    elif t == "disc-p":
        _need(args, "p")
        v = predictor.disc_limit_p(args.p)
    elif t == "disc-p2":
        _need(args, "p")
        v = predictor.disc_limit_psquare(args.p)
    elif t == "disc-global":
        v = predictor.disc_limit_global()
    elif t == "rank":
        _need(args, "q")
        if args.m is None:
            v = predictor.rank_limit_symmetric(args.q, args.k)
        else:
            v = predictor.rank_limit_rectangular(args.q, args.k, args.m)
    elif t == "event":
        _need(args, "event", "p")
        v = predictor.event_limit(args.event, args.p, args.beta_degree)
    else:
        _need(args, "p")
        v = predictor.asymmetric_walk_limit(args.p)
    print(f"{v.value:.{args.digits}f} +/- {v.error:.2e}")
    return 0


# ---------------------------------------------------------------- simulate


def _spec_from_args(args) -> ExperimentSpec:
    base: dict = {}
    if args.config:
        with open(args.config, encoding="utf-8") as fh:
            base = json.load(fh)
    ens = dict(base.get("ensemble", {}))
    for flag, key in (("ensemble", "kind"), ("n", "n"), ("m", "m"), ("beta", "beta"), ("beta_power", "beta_power")):
        val = getattr(args, flag)
        if val is not None:
            ens[key] = val
    ens.setdefault("kind", "sym01_loops")
    kind = ens["kind"]
    if "n" not in ens:
        raise UsageError("--n is required")
    if kind in ("sym_Fq", "rect_Fq") and args.q is not None:
        ens["q"] = args.q
    if kind in ("sym_truncated", "asym_truncated", "sym_truncated_maximal_ideal") and args.p is not None:
        ens["p"] = args.p
    if kind == "sym_truncated_maximal_ideal" and args.k is not None:
        ens["k"] = args.k

    d = {k: v for k, v in base.items() if k != "ensemble"}
    zero_one = kind in ("sym01_loops", "asym01")
    if zero_one and args.p is not None:
        d["p"] = args.p
    if zero_one and args.q is not None:
        d["q"] = args.q
    for flag in ("k", "event", "vector", "samples", "seed", "workers", "chunk_size", "statistic"):
        val = getattr(args, flag)
        if val is not None:
            d[flag] = val
    if "statistic" not in d:
        if kind in ("sym_Fq", "rect_Fq"):
            d["statistic"] = "rank"
        elif not zero_one:
            d["statistic"] = "event"
        elif d.get("q") is not None and d.get("p") is None:
            d["statistic"] = "disc"
        elif d.get("p") is not None and d.get("q") is None:
            d["statistic"] = "walk"
        else:
            raise UsageError("give exactly one of --p (walk) or --q (disc), or --statistic")
    d.setdefault("seed", DEFAULT_SEED)
    d.setdefault("workers", _default_workers())
    if d["statistic"] != "walk":
        if args.vector is not None:
            raise UsageError("--vector only applies to the walk statistic")
        d.pop("vector", None)
    if d["statistic"] != "rank" and kind in ("sym_Fq", "rect_Fq"):
        raise UsageError("F_q ensembles support only the rank statistic")
    return ExperimentSpec.from_dict({"ensemble": ens, **d})


def _output(rows, args):
    text = emit(rows, args.format, args.out)
    if args.out is None:
        sys.stdout.write(text)


def cmd_simulate(args) -> int:
    try:
        spec = _spec_from_args(args)
    except (ValueError, TypeError, KeyError) as exc:
        raise UsageError(str(exc))
    row = simulate(spec)
    _output([row], args)
    return 0


# ---------------------------------------------------------------- table


def cmd_table(args) -> int:
    kw = {}
    if args.sizes:
        kw["sizes"] = args.sizes
    if args.params:
        kw["params"] = args.params
    kw["samples"] = args.samples or 100_000
    kw["seed"] = DEFAULT_SEED if args.seed is None else args.seed
    kw["workers"] = args.workers or _default_workers()
    if args.chunk_size:
        kw["chunk_size"] = args.chunk_size
    try:
        from .experiments import table_specs

        table_specs(args.table, **kw)
    except ValueError as exc:
        raise UsageError(str(exc))
    _output(run_table(args.table, **kw), args)
    return 0


# ---------------------------------------------------------------- verify


def _verify_oracles() -> bool:
    ok = True
    for rep in run_oracle_suite("all"):
        print(rep.summary())
        for c in rep.counterexamples:
            print("  counterexample:", c)
        ok &= rep.passed
    return ok


def _verify_profinite(samples: int, seed: int, workers: int) -> bool:
    ok = True
    for p, beta, n in PROFINITE_CASES:
        for r in run_profinite_check(p, beta, n, PROFINITE_EVENTS, samples=samples, seed=seed, workers=workers):
            status = "pass" if r.passed else "FAIL"
            print(f"profinite n={r.n} {r.param}: {status} mean={r.mean:.5f} limit={r.predicted:.5f} "
                  f"band={r.band:.2e} stderr={r.stderr:.2e}")
            ok &= bool(r.passed)
    return ok


def _verify_identities() -> bool:
    ok = True
    for name, lhs, rhs in predictor.predictor_identities():
        good = abs(lhs - rhs) <= 1e-12
        ok &= good
        print(f"identity {name}: {'pass' if good else 'FAIL'} |diff|={abs(lhs - rhs):.1e}")
    for fam in predictor.ASSEMBLY_FAMILIES:
        a = predictor.assemble_over_beta(2, fam, 14)
        c = predictor.assembly_closed_form(2, fam)
        diff = abs(a.value - c.value)
        good = diff <= 1e-4 and diff <= a.error + c.error
        ok &= good
        print(f"assembly p=2 D=14 {fam}: {'pass' if good else 'FAIL'} |diff|={diff:.1e} bound={a.error:.1e}")
    return ok


def cmd_verify(args) -> int:
    workers = args.workers or _default_workers()
    ok = True
    if args.suite in ("predictor-identities", "all"):
        ok &= _verify_identities()
    if args.suite in ("oracles", "all"):
        ok &= _verify_oracles()
    if args.suite in ("profinite", "all"):
        ok &= _verify_profinite(args.samples, args.seed, workers)
    print("verify:", "pass" if ok else "FAIL")
    return 0 if ok else 1


COMMANDS = {"predict": cmd_predict, "simulate": cmd_simulate, "table": cmd_table, "verify": cmd_verify}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        parser.error(str(exc))
    except ValueError as exc:
        print(f"walkdisc: error: {exc}", file=sys.stderr)
        return 2 if args.command == "predict" else 1
    except Exception as exc:  # noqa: BLE001 - report any runtime failure with exit code 1
        print(f"walkdisc: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
