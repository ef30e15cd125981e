"""Command-line front end.

Every engine is exposed as a subcommand with reproducible seeding.  Each
subcommand validates its parameters before any computation, writes its
data artifact (CSV or JSON) plus a JSON run summary carrying every input
parameter, the seed, and the wall time, and exits 0 on success, 2 on a
validation failure, 1 on an internal error.  Plotting is delegated to
downstream tools; only data is emitted.
"""

import argparse
import json
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import exact, harness, mittag, percolation, walk
from .params import WalkParams
from .rng import fresh_seed
from .serialize import fmt, moment_rows, pmf_rows, write_csv, write_json

OUTDIR_ENV = "LAZYWALK_OUTDIR"

EXIT_OK, EXIT_INTERNAL, EXIT_USAGE = 0, 1, 2


class _Abort(Exception):
    """Validation failure; maps to exit code 2."""


def _outdir(args) -> Path:
    if args.outdir:
        return Path(args.outdir)
    return Path(os.environ.get(OUTDIR_ENV, "."))


def _walk_params(args) -> WalkParams:
    try:
        return WalkParams(p=args.p, q=args.q, s=args.s)
    except ValueError as e:
        raise _Abort(str(e))


def _seed_of(args) -> int:
    return args.seed if args.seed is not None else fresh_seed()


def _summary(outdir: Path, name: str, t0: float, seed, params: dict) -> None:
    payload = dict(params)
    payload["subcommand"] = name
    if seed is not None:
        payload["seed"] = int(seed)
    payload["wall_time_s"] = time.time() - t0
    write_json(outdir / f"{name}_summary.json", payload)


def _emit_table(outdir: Path, name: str, fmt_kind: str, header, rows) -> None:
    if fmt_kind == "json":
        write_json(outdir / f"{name}.json",
                   [dict(zip(header, row)) for row in rows])
    else:
        write_csv(outdir / f"{name}.csv", header, rows)


# ---------------------------------------------------------------------------
# Subcommand implementations
# ---------------------------------------------------------------------------

def _cmd_moments(args, outdir, t0):
    if args.n < 1:
        raise _Abort("n must be >= 1")
    if not 0.0 < args.p < 1.0:
        raise _Abort("p must be in (0,1)")
    if not 1 <= args.kmax <= exact.K_MAX_DEFAULT:
        raise _Abort(f"kmax must be in 1..{exact.K_MAX_DEFAULT}")
    rows = [
        (k, exact.factorial_moment(args.n, k, args.p),
         exact.raw_moment(args.n, k, args.p))
        for k in range(1, args.kmax + 1)
    ]
    _emit_table(outdir, "moments", args.format,
                ["order", "factorial_moment", "raw_moment"], rows)
    _summary(outdir, "moments", t0, None,
             {"n": args.n, "p": args.p, "kmax": args.kmax})


def _cmd_pmf(args, outdir, t0):
    params = _walk_params(args)
    if args.n < 1:
        raise _Abort("n must be >= 1")
    if args.n > exact.DP_CAP_DEFAULT:
        raise _Abort(f"n exceeds DP cap {exact.DP_CAP_DEFAULT}")
    if args.compare and not params.laziest:
        raise _Abort("--compare needs q = 0 and s = 1 (generating-function mode)")
    pmf = exact.exact_pmf(args.n, params).check()
    info = {"n": args.n, "p": args.p, "q": args.q, "s": args.s,
            "mean": pmf.mean(), "variance": pmf.variance()}
    if args.compare:
        alt = exact.pgf_pmf(args.n, args.p)
        info["max_abs_diff_vs_pgf"] = float(np.abs(alt.mass - pmf.mass).max())
        rows = [(h, float(m), float(a))
                for h, (m, a) in enumerate(zip(pmf.mass, alt.mass))]
        _emit_table(outdir, "pmf", args.format,
                    ["index", "value", "pgf_value"], rows)
    else:
        _emit_table(outdir, "pmf", args.format, ["index", "value"], pmf_rows(pmf))
    _summary(outdir, "pmf", t0, None, info)


def _cmd_mean_var(args, outdir, t0):
    params = _walk_params(args)
    if args.n < 1:
        raise _Abort("n must be >= 1")
    try:
        params.require_supercritical()
        mean = exact.mean_closed_form(args.n, params)
        var = exact.variance_from_clusters(args.n, params)
        payload = {"n": args.n, "p": args.p, "q": args.q, "s": args.s,
                   "mean": mean, "variance": var}
        if params.q > 0.0:
            branch, coef = exact.variance_asymptotic(params)
            payload["variance_growth"] = branch
            payload["variance_coefficient"] = coef
    except ValueError as e:
        raise _Abort(str(e))
    write_json(outdir / "mean_var.json", payload)
    _summary(outdir, "mean_var", t0, None, payload)


def _cmd_simulate(args, outdir, t0):
    params = _walk_params(args)
    if args.n < 1:
        raise _Abort("n must be >= 1")
    if args.trials < 1:
        raise _Abort("trials must be >= 1")
    modes = {"counting": ["counting"], "full": ["full"],
             "both": ["counting", "full"]}[args.mode]
    if "full" in modes and args.n > walk.FULL_HISTORY_CAP:
        raise _Abort(f"n exceeds full-history cap {walk.FULL_HISTORY_CAP}")
    cps = (np.array([int(c) for c in args.checkpoints.split(",")])
           if args.checkpoints else walk.dyadic_checkpoints(args.n))
    if cps.size == 0 or cps[0] < 1 or cps[-1] > args.n:
        raise _Abort(f"checkpoints must lie in [1, {args.n}]")
    seed = _seed_of(args)
    a_final = exact.gamma_ratio(int(cps[-1]), args.p)
    rows = []
    final_stats = {}
    for mode in modes:
        pos = walk.simulate_batch(params, args.n, seed, args.trials,
                                  checkpoints=cps, mode=mode)
        acc = harness.StreamMoments.from_samples(pos[:, -1])
        final_stats[mode] = {"mean_final": acc.mean,
                             "var_final": acc.variance()}
        for j in range(args.trials):
            w_hat = pos[j, -1] / a_final
            for c, h in zip(cps, pos[j]):
                rows.append((mode, j, int(c), int(h), w_hat))
    _emit_table(outdir, "simulate", args.format,
                ["mode", "trial", "checkpoint", "position", "w_hat"], rows)
    _summary(outdir, "simulate", t0, seed,
             {"p": args.p, "q": args.q, "s": args.s, "n": args.n,
              "trials": args.trials, "mode": args.mode,
              "threads": args.threads, "final_position": final_stats})


def _cmd_percolate(args, outdir, t0):
    if args.n < 1:
        raise _Abort("n must be >= 1")
    if not 0.0 <= args.alpha <= 1.0:
        raise _Abort("alpha must be in [0,1]")
    if args.trials < 1:
        raise _Abort("trials must be >= 1")
    seed = _seed_of(args)
    sizes = percolation.sample_root_cluster_sizes(args.n, args.alpha, seed,
                                                  args.trials)
    counts = np.bincount(sizes, minlength=args.n + 1)
    rows = [(k, int(c)) for k, c in enumerate(counts)]
    _emit_table(outdir, "percolate", args.format,
                ["root_cluster_size", "count"], rows)
    info = {"n": args.n, "alpha": args.alpha, "trials": args.trials,
            "threads": args.threads}
    if 0.0 < args.alpha < 1.0 and args.n <= exact.DP_CAP_DEFAULT:
        ref = exact.exact_pmf(args.n, WalkParams(p=args.alpha))
        gof = harness.chi_square_gof(counts, ref)
        info["coupling_check"] = {
            "tv_distance": float(0.5 * np.abs(counts / args.trials - ref.mass).sum()),
            "chi_square": gof.statistic, "dof": gof.dof, "p_value": gof.p_value,
        }
    _summary(outdir, "percolate", t0, seed, info)


def _cmd_enumerate(args, outdir, t0):
    if not 1 <= args.n <= percolation.ENUM_CAP:
        raise _Abort(f"n must be in 1..{percolation.ENUM_CAP}")
    if not 0.0 < args.alpha < 1.0:
        raise _Abort("alpha must be in (0,1)")
    brute = percolation.enumerate_exact(args.n, args.alpha)
    closed = exact.cluster_moments_closed_form(args.n, args.alpha)
    names = ["mean_root", "second_root", "sum_second"]
    payload = {
        "n": args.n, "alpha": args.alpha,
        "enumeration": dict(zip(names, brute)),
        "closed_form": dict(zip(names, closed)),
        "max_abs_diff": max(abs(b - c) for b, c in zip(brute, closed)),
    }
    write_json(outdir / "enumerate.json", payload)
    _summary(outdir, "enumerate", t0, None, payload)


def _cmd_ml(args, outdir, t0):
    if not 0.0 <= args.p <= 1.0:
        raise _Abort("p must be in [0,1]")
    if not 1 <= args.kmax <= 16:
        raise _Abort("kmax must be in 1..16")
    params = mittag.MLParams(p=args.p)
    rows = [(k, mittag.ml_moment(args.p, k)) for k in range(1, args.kmax + 1)]
    _emit_table(outdir, "ml", args.format, ["order", "moment"], rows)
    info = {"p": args.p, "kmax": args.kmax}
    if args.lam is not None:
        try:
            info["ml_function"] = mittag.ml_function(params, args.lam)
            info["lambda"] = args.lam
        except (ValueError, ArithmeticError) as e:
            raise _Abort(str(e))
    _summary(outdir, "ml", t0, None, info)


def _cmd_clt(args, outdir, t0):
    params = _walk_params(args)
    if args.n < 1 or args.trials < 8:
        raise _Abort("need n >= 1 and trials >= 8")
    seed = _seed_of(args)
    try:
        if args.q_positive:
            res = harness.q_positive_clt_experiment(params, args.n, args.trials, seed)
            horizon = None
        else:
            horizon = args.horizon if args.horizon else 100 * args.n
            res = harness.clt_experiment(params, args.n, horizon, args.trials, seed)
    except ValueError as e:
        raise _Abort(str(e))
    _emit_table(outdir, "clt", args.format, ["t"],
                [(float(t),) for t in res.t_samples])
    _summary(outdir, "clt", t0, seed, {
        "p": args.p, "q": args.q, "s": args.s, "n": args.n,
        "N": horizon, "M": args.trials, "threads": args.threads,
        "q_positive": bool(args.q_positive),
        "ks_statistic": res.ks.statistic, "p_value": res.ks.p_value,
        "sample_mean": float(res.t_samples.mean()),
        "sample_var": float(res.t_samples.var()),
    })


def _cmd_lil(args, outdir, t0):
    params = _walk_params(args)
    if not params.laziest:
        raise _Abort("lil tracker runs in the q = 0, s = 1 regime")
    if args.n < 16:
        raise _Abort("n too short for the tracker")
    seed = _seed_of(args)
    rows = []
    finals = []
    for j in range(args.trials):
        stat = walk.simulate_counting(params, args.n, seed, stream=j)
        try:
            tracker = harness.lil_tracker(stat, normalizer=args.normalizer)
        except ValueError as e:
            raise _Abort(str(e))
        for c, hi, lo in zip(tracker.checkpoints, tracker.running_max,
                             tracker.running_min):
            rows.append((j, int(c), float(hi), float(lo)))
        finals.append((float(tracker.running_max[-1]),
                       float(tracker.running_min[-1])))
    _emit_table(outdir, "lil", args.format,
                ["trial", "checkpoint", "running_max", "running_min"], rows)
    _summary(outdir, "lil", t0, seed, {
        "p": args.p, "n": args.n, "trials": args.trials,
        "normalizer": args.normalizer,
        "note": "diagnostic only: iterated-logarithm convergence is not "
                "observable at desk scale",
        "final_extrema": finals,
    })


def _cmd_selftest(args, outdir, t0):
    failures = []

    def check(name, ok):
        print(f"[{'PASS' if ok else 'FAIL'}] {name}")
        if not ok:
            failures.append(name)

    # Closed form vs both exact-distribution engines.
    for p in (0.25, 0.5, 0.75):
        pmf = exact.exact_pmf(60, WalkParams(p=p))
        alt = exact.pgf_pmf(60, p)
        tab = exact.moments_from_pmf(pmf, 4)
        ok = float(np.abs(pmf.mass - alt.mass).max()) < 1e-12
        check(f"pmf engines agree (p={p})", ok)
        for k in range(1, 5):
            ref = exact.factorial_moment(60, k, p)
            rel = abs(tab.factorial[k - 1] - ref) / max(abs(ref), 1e-300)
            check(f"moment closed form vs pmf (p={p}, k={k})", rel < 1e-9)
    # Cluster-moment formulas vs enumeration, and cluster variance vs DP.
    for alpha in (0.25, 0.5, 0.75):
        brute = percolation.enumerate_exact(6, alpha)
        closed = exact.cluster_moments_closed_form(6, alpha)
        diff = max(abs(b - c) for b, c in zip(brute, closed))
        check(f"cluster moments vs enumeration (alpha={alpha})", diff < 1e-12)
    for (p, q, s) in ((0.5, 0.0, 1.0), (0.6, 0.2, 1.0), (0.7, 0.1, 0.5)):
        prm = WalkParams(p=p, q=q, s=s)
        dp_var = exact.exact_pmf(120, prm).variance()
        cl_var = exact.variance_from_clusters(120, prm)
        check(f"cluster variance vs dynamic program (p={p}, q={q}, s={s})",
              abs(dp_var - cl_var) / dp_var < 1e-8)
    _summary(outdir, "selftest", t0, None,
             {"failures": failures, "passed": not failures})
    if failures:
        raise _Abort(f"selftest failed: {failures}")


# ---------------------------------------------------------------------------
# Argument plumbing
# ---------------------------------------------------------------------------

def _add_common(sp, seeded=False, threads=False):
    sp.add_argument("--outdir", default=None,
                    help=f"output directory (default ${OUTDIR_ENV} or '.')")
    sp.add_argument("--format", choices=["csv", "json"], default="csv")
    if seeded:
        sp.add_argument("--seed", type=int, default=None,
                        help="pinned seed; generated and reported if absent")
    if threads:
        sp.add_argument("--threads", type=int, default=1,
                        help="worker cap for Monte Carlo; results are "
                             "independent of this value")


def _add_pqs(sp, q_default=0.0, s_default=1.0):
    sp.add_argument("--p", type=float, required=True)
    sp.add_argument("--q", type=float, default=q_default)
    sp.add_argument("--s", type=float, default=s_default)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lazywalk",
        description="Step-reinforced random walk and recursive-tree "
                    "percolation laboratory",
    )
    parser.add_argument("--config", default=None,
                        help="JSON file of defaults; flags override")
    sub = parser.add_subparsers(dest="command")

    sp = sub.add_parser("moments", help="closed-form factorial/raw moments")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--p", type=float, required=True)
    sp.add_argument("--kmax", type=int, default=4)
    _add_common(sp)

    sp = sub.add_parser("pmf", help="exact law of the position")
    sp.add_argument("--n", type=int, required=True)
    _add_pqs(sp)
    sp.add_argument("--compare", action="store_true",
                    help="also run the generating-function engine and diff")
    _add_common(sp)

    sp = sub.add_parser("mean-var", help="closed-form mean, cluster variance, "
                                         "variance asymptote")
    sp.add_argument("--n", type=int, required=True)
    _add_pqs(sp)
    _add_common(sp)

    sp = sub.add_parser("simulate", help="Monte Carlo walk trajectories")
    _add_pqs(sp)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--trials", type=int, default=100)
    sp.add_argument("--mode", choices=["counting", "full", "both"],
                    default="counting")
    sp.add_argument("--checkpoints", default=None,
                    help="comma-separated times (default dyadic)")
    _add_common(sp, seeded=True, threads=True)

    sp = sub.add_parser("percolate", help="tree + percolation Monte Carlo "
                                          "with coupling check")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--alpha", type=float, required=True)
    sp.add_argument("--trials", type=int, default=10000)
    _add_common(sp, seeded=True, threads=True)

    sp = sub.add_parser("enumerate", help="brute-force cluster moments vs "
                                          "closed form")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--alpha", type=float, required=True)
    _add_common(sp)

    sp = sub.add_parser("ml", help="Mittag-Leffler function and moments")
    sp.add_argument("--p", type=float, required=True)
    sp.add_argument("--kmax", type=int, default=4)
    sp.add_argument("--lambda", dest="lam", type=float, default=None)
    _add_common(sp)

    sp = sub.add_parser("clt", help="central-limit experiments")
    _add_pqs(sp)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--horizon", type=int, default=None,
                    help="limit-estimate horizon N (default 100 n)")
    sp.add_argument("--trials", type=int, default=10000)
    sp.add_argument("--q-positive", action="store_true",
                    help="deterministic-centering variant for q > 0")
    _add_common(sp, seeded=True, threads=True)

    sp = sub.add_parser("lil", help="iterated-logarithm tracker (diagnostic)")
    sp.add_argument("--p", type=float, required=True)
    sp.add_argument("--q", type=float, default=0.0)
    sp.add_argument("--s", type=float, default=1.0)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--trials", type=int, default=20)
    sp.add_argument("--normalizer", choices=["phi", "phi_hat"], default="phi")
    _add_common(sp, seeded=True, threads=True)

    sp = sub.add_parser("selftest", help="oracle-equivalence suite")
    _add_common(sp)

    return parser


_COMMANDS = {
    "moments": _cmd_moments,
    "pmf": _cmd_pmf,
    "mean-var": _cmd_mean_var,
    "simulate": _cmd_simulate,
    "percolate": _cmd_percolate,
    "enumerate": _cmd_enumerate,
    "ml": _cmd_ml,
    "clt": _cmd_clt,
    "lil": _cmd_lil,
    "selftest": _cmd_selftest,
}


def _apply_config(parser, argv, args):
    if not args.config:
        return args
    try:
        with open(args.config) as f:
            defaults = json.load(f)
    except (OSError, json.JSONDecodeError) as e:
        raise _Abort(f"bad config file: {e}")
    # Flags given on the command line win over config values.
    given = {a.lstrip("-").split("=")[0].replace("-", "_")
             for a in argv if a.startswith("--")}
    for key, value in defaults.items():
        attr = key.replace("-", "_")
        if hasattr(args, attr) and attr not in given:
            setattr(args, attr, value)
    return args


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code not in (0, None) else EXIT_OK
    if not args.command:
        parser.print_usage()
        return EXIT_USAGE
    t0 = time.time()
    try:
        args = _apply_config(parser, argv, args)
        outdir = _outdir(args)
        _COMMANDS[args.command](args, outdir, t0)
        return EXIT_OK
    except _Abort as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as e:  # internal error
        print(f"internal error: {e}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
