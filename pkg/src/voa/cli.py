"""Command-line front end: ``voa <measure|scan|assist4|verify> [flags]``.

Exit codes: 0 ok, 1 a verified property failed, 2 usage or input error,
3 a state of unsupported arity.
"""

import argparse
import json
import math
import os
import sys

import numpy as np

from . import families, plot, quadripartite, tripartite, verify
from .bipartite import concurrence_mixed
from .qstate import DensityMatrix, Ket, StateError, load_state, parse_state_spec

EXIT_OK, EXIT_PROPERTY, EXIT_USAGE, EXIT_ARITY = 0, 1, 2, 3
DEFAULT_SEED = 42


class UsageError(Exception):
    pass


class ArityError(Exception):
    pass


def default_seed() -> int:
    env = os.environ.get("VOA_SEED")
    if env is None:
        return DEFAULT_SEED
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"VOA_SEED must be an integer, got {env!r}")


def _seed(args) -> int:
    seed = args.seed if args.seed is not None else default_seed()
    if not 0 <= seed < 2 ** 64:
        raise UsageError("seed must fit in an unsigned 64-bit integer")
    return seed


def _config(args) -> quadripartite.OptimizerConfig:
    try:
        return quadripartite.OptimizerConfig(m=args.m, restarts=args.restarts, iterations=args.iters,
                                             tol=args.tol, seed=_seed(args))
    except ValueError as e:
        raise UsageError(str(e))


def _load_input(args):
    if (args.state is None) == (args.file is None):
        raise UsageError("give exactly one of --state or --file")
    if args.state is not None:
        return parse_state_spec(args.state), args.state
    try:
        return load_state(args.file), os.path.basename(args.file)
    except OSError as e:
        raise UsageError(f"cannot read {args.file}: {e.strerror}")


def _emit(text: str, out):
    if out:
        with open(out, "w", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _json(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _text_report(report: tripartite.MeasureReport) -> str:
    lines = [f"{name} = {e.value:.12f}  [{e.method}]" for name, e in report.entries.items()]
    return "\n".join(lines) + "\n"


# -- measure ----------------------------------------------------------------

def _parse_tangle(spec: str) -> float:
    if spec == "zero":
        return 0.0
    if spec.startswith("ghz-w:"):
        return families.ghz_w_tangle(float(spec.split(":", 1)[1]))
    value = float(spec)
    if not math.isfinite(value) or value < 0:
        raise UsageError("--tangle must be a finite non-negative number")
    return value


def _measure_four(k: Ket, name: str, config) -> tripartite.MeasureReport:
    rep = tripartite.MeasureReport(name)
    res = quadripartite.voa4(k, config)
    meta = {"restarts": config.restarts, "iterations": config.iterations, "tol": config.tol, "seed": config.seed}
    upper = {"bound": "upper", "route": "hoelder over pair marginals"}
    rep.add("voa4_lower", res.lower, "optimizer-lower-bound", **meta)
    rep.add("voa4_upper", res.upper, "closed-form", **upper)
    for p, b in zip(tripartite.PARTY_NAMES, res.parties):
        rep.add(f"coa4_{p}_lower", b.lower, "optimizer-lower-bound", **meta)
        rep.add(f"coa4_{p}_upper", b.upper, "closed-form", **upper)
    rep.add("ggm", tripartite.ggm(k))
    return rep


def _measure_mixed(rho: DensityMatrix, name: str, tangle_spec: str) -> tripartite.MeasureReport:
    rep = tripartite.MeasureReport(name)
    tangle = _parse_tangle(tangle_spec)
    method = "piecewise-exact" if tangle_spec.startswith("ghz-w:") else "closed-form"
    rep.add("voa3_estimate", tripartite.voa3_mixed_estimate(rho, tangle), method, tangle_source=tangle_spec)
    rep.add("three_tangle", tangle, method, tangle_source=tangle_spec)
    for pair, label in (((0, 1), "AB"), ((0, 2), "AC"), ((1, 2), "BC")):
        rep.add(f"concurrence_{label}", concurrence_mixed(rho.reduced(pair)))
    return rep


def cmd_measure(args) -> int:
    state, name = _load_input(args)
    if isinstance(state, DensityMatrix):
        if state.dims != (2, 2, 2):
            raise ArityError(f"density matrices must be three-qubit, got dims {state.dims}")
        if args.tangle is None:
            raise UsageError("a density matrix needs --tangle value|ghz-w:p|zero")
        rep = _measure_mixed(state, name, args.tangle)
    elif state.dims == (2, 2, 2):
        rep = tripartite.measure_report(state, name)
    elif state.dims == (2, 2, 2, 2):
        rep = _measure_four(state, name, _config(args))
    else:
        raise ArityError(f"measure supports 3- or 4-qubit kets, got dims {state.dims}")
    _emit(_json(rep.to_dict()) if args.format == "json" else _text_report(rep), args.out)
    return EXIT_OK


# -- scan ----------------------------------------------------------------------

def _scan_table(args) -> families.ScanTable:
    pts = args.points
    if pts is not None and pts < 2:
        raise UsageError("--points must be at least 2")
    fam = args.family
    if fam == "heisenberg":
        lo, hi = args.alpha_min, args.alpha_max
        if not 0 <= lo < hi <= families.TWO_PI + 1e-12:
            raise UsageError("need 0 <= alpha-min < alpha-max <= 2pi")
        grid = np.linspace(lo, min(hi, families.TWO_PI), pts or families.DEFAULT_ALPHA_POINTS)
        return families.scan_heisenberg(args.J, args.B, grid, ring=not args.open_chain)
    if fam == "ghz-w":
        return families.scan_ghz_w(points=pts or 101)
    if fam == "gghz":
        return families.scan_gghz(points=pts or 201)
    if fam == "gw":
        return families.scan_gw(points=pts or 201)
    return families.scan_phi_class(points=pts or 41)


def _scan_svg(table: families.ScanTable) -> str:
    fam = table.provenance["family"]
    if fam == "phi-class":
        groups = ["voa3(phi1) > voa3(phi2)" if s > 0 else "voa3(phi1) <= voa3(phi2)"
                  for s in table.column("sign")]
        return plot.scatter_chart(table.column("lambda2"), table.column("lambda4"), groups,
                                  "sign of voa3(phi1) - voa3(phi2)", "lambda2", "lambda4")
    x_name = table.params[0]
    if fam == "heisenberg":
        series = {"voa3": table.column("voa3")}
        title = f"ground-state voa3, J={table.provenance['J']:g}, B={table.provenance['B1']:g}"
    elif fam == "ghz-w":
        series = {"tau": table.column("tau"), "estimate": table.column("estimate")}
        title = "GHZ/W mixture"
    else:
        series = {c: table.column(c) for c in ("voa3", "ggm")}
        title = f"{fam} family"
    return plot.line_chart(table.column(x_name), series, title, x_name, "value")


def cmd_scan(args) -> int:
    table = _scan_table(args)
    if args.format == "json":
        text = _json(table.to_dict())
    elif args.format == "svg":
        text = _scan_svg(table)
    else:
        text = table.to_csv()
    _emit(text, args.out)
    if table.provenance["family"] == "heisenberg":
        resid = families.mirror_residual(table)
        verdict = "pass" if resid <= 1e-8 else "FAIL"
        print(f"mirror symmetry residual (non-degenerate rows) = {resid:.3e}  {verdict}", file=sys.stderr)
    return EXIT_OK


# -- assist4 ----------------------------------------------------------------

def cmd_assist4(args) -> int:
    state, name = _load_input(args)
    if not isinstance(state, Ket) or state.dims != (2, 2, 2, 2):
        raise ArityError("assist4 needs a four-qubit ket")
    config = _config(args)
    res = quadripartite.voa4(state, config)
    lines = []
    for p, b in zip(tripartite.PARTY_NAMES, res.parties):
        lines.append(f"coa4_{p} = [{b.lower:.12f}, {b.upper:.12f}]")
    lines.append(f"voa4 = [{res.lower:.12f}, {res.upper:.12f}]")
    doc = {
        "state": name,
        "voa4": {"lower": res.lower, "upper": res.upper},
        "parties": {p: {"lower": b.lower, "upper": b.upper, "certificate": b.certificate.to_dict()}
                    for p, b in zip(tripartite.PARTY_NAMES, res.parties)},
    }
    if args.format == "json":
        _emit(_json(doc), args.out)
    else:
        sys.stdout.write("\n".join(lines) + "\n")
        if args.out:
            _emit(_json(doc), args.out)
    return EXIT_OK


# -- verify -------------------------------------------------------------------

SUITE_DEFAULT_TRIALS = {"monogamy": 1000, "locc": 500, "homogeneity": 200, "estimator": 1000,
                        "sl2": 3, "concavity": 2}


def cmd_verify(args) -> int:
    if args.suite not in SUITE_DEFAULT_TRIALS:
        raise UsageError(f"unknown suite {args.suite!r}; known: {', '.join(SUITE_DEFAULT_TRIALS)}")
    trials = args.trials or SUITE_DEFAULT_TRIALS[args.suite]
    if trials < 1:
        raise UsageError("--trials must be positive")
    model = verify.RandomModel(_seed(args))
    if args.suite == "locc":
        if args.measure not in verify.LOCC_MEASURES:
            raise UsageError(f"unknown measure {args.measure!r}; known: {', '.join(verify.LOCC_MEASURES)}")
        report = verify.check_locc_monotonicity(args.measure, trials, args.rounds, model)
    elif args.suite == "sl2":
        report = quadripartite.check_sl2_invariance(trials, _config(args), model)
    elif args.suite == "concavity":
        report = quadripartite.check_concavity(trials, config=_config(args), model=model)
    else:
        report = verify.SUITES[args.suite](trials, model)
    _emit(_json(report.to_dict()), args.out)
    return EXIT_OK if report.passed else EXIT_PROPERTY


# -- parser -------------------------------------------------------------------

def _common(p, optimizer: bool = False):
    p.add_argument("--out", help="write output to this path instead of stdout")
    p.add_argument("--seed", type=int, help="RNG seed (default 42, or $VOA_SEED)")
    if optimizer:
        d = quadripartite.OptimizerConfig()
        p.add_argument("--restarts", type=int, default=d.restarts)
        p.add_argument("--iters", type=int, default=d.iterations)
        p.add_argument("--tol", type=float, default=d.tol)
        p.add_argument("--m", type=int, default=None, help="ensemble size (default: rank + 4, capped at 16)")


def _inputs(p):
    p.add_argument("--state", help="named state, optionally with parameters: name[:p1,p2,...]")
    p.add_argument("--file", help="JSON state file")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="voa", description="Volume-of-assistance entanglement measures.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("measure", help="closed-form measure suite for a state")
    _inputs(p)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--tangle", help="three-tangle for a mixed state: a value, ghz-w:p, or zero")
    _common(p, optimizer=True)
    p.set_defaults(func=cmd_measure)

    p = sub.add_parser("scan", help="sweep a state family")
    p.add_argument("family", choices=("heisenberg", "ghz-w", "gghz", "gw", "phi-class"))
    p.add_argument("--format", choices=("csv", "json", "svg"), default="csv")
    p.add_argument("--points", type=int)
    p.add_argument("--J", type=float, default=1.0)
    p.add_argument("--B", type=float, default=1.0)
    p.add_argument("--alpha-min", type=float, default=0.0)
    p.add_argument("--alpha-max", type=float, default=families.TWO_PI)
    p.add_argument("--open-chain", action="store_true", help="drop the bond closing the ring")
    _common(p)
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("assist4", help="four-qubit assisted VoA bounds with witnessing ensembles")
    _inputs(p)
    p.add_argument("--format", choices=("text", "json"), default="text")
    _common(p, optimizer=True)
    p.set_defaults(func=cmd_assist4)

    p = sub.add_parser("verify", help="randomized property suites")
    p.add_argument("suite")
    p.add_argument("--trials", type=int)
    p.add_argument("--rounds", type=int, default=3)
    p.add_argument("--measure", default="voa3")
    _common(p, optimizer=True)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        return args.func(args)
    except ArityError as e:
        print(f"voa: {e}", file=sys.stderr)
        return EXIT_ARITY
    except (UsageError, StateError, ValueError, KeyError) as e:
        print(f"voa: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
