"""Command-line front end.

Subcommands: moments | bounds | simulate | verify | morse-demo.
Exit codes: 0 success, 1 verification failure, 2 usage or parameter error.
Every report embeds the resolved run spec and the library version, so a rerun
of the same spec is byte-identical.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import __version__
from . import bounds as bd
from . import moments as mo
from . import montecarlo as mc
from . import oracle as orc
from . import verify as vf
from .graphs import Graph, GnpParams, sample_gnp
from .morse import critical_counts_direct, lex_matching

SEED_ENV = "CLIQUESTATS_SEED"


class UsageError(ValueError):
    pass


def _default_seed() -> int:
    return int(os.environ.get(SEED_ENV, "0"))


def _emit(args, payload: dict, text: str | None = None):
    payload = {"version": __version__, "spec": _spec_echo(args), **payload}
    out = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(out)
        if text:
            print(text)
    else:
        sys.stdout.write(text + "\n" if text else out)


def _spec_echo(args) -> dict:
    skip = {"func", "output"}
    return {k: v for k, v in sorted(vars(args).items())
            if k not in skip and v is not None}


def _report_dict(rep) -> dict:
    return json.loads(rep.to_json())


# ---------------------------------------------------------------------------


def _need(args, *names):
    for name in names:
        if getattr(args, name, None) is None:
            raise UsageError("--%s is required here" % name.replace("_", "-"))


def cmd_moments(args) -> int:
    _need(args, "n", "p")
    kind = args.kind
    if kind == "critical" and args.d > 1:
        if args.n <= 6:
            em = orc.exact_moments("critical", args.n, args.p, args.d)
            offdiag = (em.cov, "exact-oracle")
        else:
            raw = mc.simulate_raw(mc.MCConfig(
                "critical", args.n, args.p, args.d,
                args.replicates or 20_000, args.master_seed))
            offdiag = (mc.empirical_cov(raw).tolist(), "empirical")
        rep = mo.statistic_cov_matrix("critical", args.n, args.d, args.p,
                                      oracle_offdiag=offdiag)
    elif kind == "link":
        rep = mo.statistic_cov_matrix("link", args.n, args.d, args.p,
                                      t_size=args.t_size)
    else:
        rep = mo.statistic_cov_matrix(kind, args.n, args.d, args.p)
    _emit(args, {"report": _report_dict(rep)})
    return 0


def cmd_bounds(args) -> int:
    th = args.theorem
    if th == "convex":
        if args.smooth_b is None:
            raise UsageError("--smooth-b required for the convex transfer")
        reports = [bd.convex_bound(args.d, args.smooth_b)]
    elif th == "clique":
        _need(args, "n", "p")
        pair = bd.clique_bound(args.n, args.d, args.p)
        reports = [pair.smooth, pair.convex]
    elif th == "link":
        _need(args, "n", "p")
        pair = bd.link_bound(args.n, args.t_size, args.d, args.p)
        reports = [pair.smooth, pair.convex]
    elif th == "critical":
        _need(args, "n", "p")
        pair = bd.crit_bound(args.n, args.d, args.p)
        reports = [pair.smooth, pair.convex]
    elif th in ("ustat", "ustat-no-x"):
        if not args.k_vec or not args.alpha_vec or args.beta is None:
            raise UsageError("ustat bounds need --k-vec, --alpha-vec, --beta")
        k_vec = [int(x) for x in args.k_vec.split(",")]
        alpha = [float(x) for x in args.alpha_vec.split(",")]
        fn = bd.ustat_bound if th == "ustat" else bd.ustat_no_x_bound
        reports = [fn(k_vec, alpha, args.beta)]
    else:
        raise UsageError("unknown theorem %r" % th)
    _emit(args, {"reports": [_report_dict(r) for r in reports]})
    return 0


def cmd_simulate(args) -> int:
    _need(args, "n", "p")
    t = tuple(range(1, args.t_size + 1)) if args.kind == "link" else ()
    cfg = mc.MCConfig(args.kind, args.n, args.p, args.d, args.replicates,
                      args.master_seed, t=t, standardization=args.standardization)
    if args.check:
        _emit(args, {"run": vf.matched_normal_report(cfg, threads=args.threads)})
        return 0
    raw = mc.simulate_raw(cfg, threads=args.threads)
    if cfg.standardization == "analytic":
        mean, sd = mc.analytic_mean_sd(cfg)
    else:
        mean, sd = raw.mean(axis=0), raw.std(axis=0, ddof=1)
    std = (raw - mean) / sd
    sizes = mo.component_sizes(cfg.kind, cfg.d)
    if args.format == "csv":
        header = ",".join(["T%d" % s for s in sizes] + ["W%d" % (i + 1) for i in range(cfg.d)])
        lines = [header]
        for r in range(raw.shape[0]):
            lines.append(",".join("%.10g" % v for v in list(raw[r]) + list(std[r])))
        text = "\n".join(lines) + "\n"
        if args.output:
            with open(args.output, "w", encoding="utf-8") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
        return 0
    cov = mc.empirical_cov(std)
    _emit(args, {
        "moments": {"mean_raw": raw.mean(axis=0).tolist(),
                    "standardized_cov": cov.tolist(),
                    "standardization": cfg.standardization},
        "samples_standardized_head": std[:10].tolist(),
    })
    return 0


def cmd_verify(args) -> int:
    kwargs = {}
    if args.suite == "oracle" and args.n_max:
        kwargs["n_max"] = args.n_max
    if args.suite == "morse-equivalence":
        if args.graphs:
            kwargs["random_graphs"] = args.graphs
        if args.n:
            kwargs["random_n"] = args.n
        kwargs["seed"] = args.seed if args.seed is not None else 1
        if args.threads > 1:
            kwargs["threads"] = args.threads
    if args.suite in ("rates", "oracle-mc") and args.replicates:
        kwargs["reps"] = args.replicates
    results = vf.run_suite(args.suite, **kwargs)
    lines = [r.row() for r in results]
    ok = all(r.ok for r in results)
    payload = {"suite": args.suite,
               "gates": [{"name": r.name, "status": r.status, "detail": r.detail}
                         for r in results],
               "passed": ok}
    _emit(args, payload, text="\n".join(lines + ["", "suite %s: %s"
                                                 % (args.suite, "PASS" if ok else "FAIL")]))
    return 0 if ok else 1


def cmd_morse_demo(args) -> int:
    if args.graph_file:
        with open(args.graph_file, encoding="utf-8") as fh:
            g = Graph.from_text(fh.read())
    else:
        g = sample_gnp(GnpParams(args.n, args.p, args.master_seed))
    size_cap = args.max_size if args.max_size else min(g.n, args.d + 2)
    m = lex_matching(g, size_cap)
    crit = critical_counts_direct(g, min(args.d, g.n - 1))
    lines = [m.dump(), "",
             "critical counts (sizes 2..%d): %s" % (crit.d + 1, list(crit.counts))]
    text = "\n".join(lines)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return 0


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="cliquestats",
        description="Counting statistics on random clique complexes: moments, "
                    "normal-approximation bounds, simulation, verification.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, n=True, p_flag=True, d=True):
        if n:
            p.add_argument("--n", type=int, required=False)
        if p_flag:
            p.add_argument("--p", type=float, required=False)
        if d:
            p.add_argument("--d", type=int, default=1)
        p.add_argument("-o", "--output", default=None)

    pm = sub.add_parser("moments", help="closed-form / oracle moment report")
    pm.add_argument("--kind", choices=mc.KINDS, required=True)
    common(pm)
    pm.add_argument("--t-size", type=int, default=1)
    pm.add_argument("--replicates", type=int, default=None,
                    help="empirical off-diagonal sample size (critical, n>6, d>1)")
    pm.add_argument("--master-seed", type=int, default=_default_seed())
    pm.set_defaults(func=cmd_moments)

    pb = sub.add_parser("bounds", help="explicit error-bound reports")
    pb.add_argument("--theorem",
                    choices=["clique", "link", "critical", "convex", "ustat", "ustat-no-x"],
                    required=True)
    common(pb)
    pb.add_argument("--t-size", type=int, default=1)
    pb.add_argument("--smooth-b", type=float, default=None)
    pb.add_argument("--k-vec", default=None)
    pb.add_argument("--alpha-vec", default=None)
    pb.add_argument("--beta", type=float, default=None)
    pb.set_defaults(func=cmd_bounds)

    ps = sub.add_parser("simulate", help="seeded Monte Carlo sample dump")
    ps.add_argument("--kind", choices=mc.KINDS, required=True)
    common(ps)
    ps.add_argument("--t-size", type=int, default=1)
    ps.add_argument("--replicates", type=int, default=1000)
    ps.add_argument("--master-seed", type=int, default=_default_seed())
    ps.add_argument("--standardization", choices=["analytic", "empirical"],
                    default="analytic")
    ps.add_argument("--format", choices=["json", "csv"], default="json")
    ps.add_argument("--check", action="store_true",
                    help="emit the full matched-normal report with verdicts")
    ps.add_argument("--threads", type=int, default=1)
    ps.set_defaults(func=cmd_simulate)

    pv = sub.add_parser("verify", help="run a verification suite")
    pv.add_argument("--suite", choices=sorted(vf.SUITES) + ["all"], required=True)
    pv.add_argument("--n-max", type=int, default=None)
    pv.add_argument("--graphs", type=int, default=None)
    pv.add_argument("--n", type=int, default=None)
    pv.add_argument("--seed", type=int, default=None)
    pv.add_argument("--replicates", type=int, default=None)
    pv.add_argument("--threads", type=int, default=1)
    pv.add_argument("-o", "--output", default=None)
    pv.set_defaults(func=cmd_verify)

    pd = sub.add_parser("morse-demo", help="print a lexicographical matching")
    pd.add_argument("--graph-file", default=None)
    pd.add_argument("--n", type=int, default=8)
    pd.add_argument("--p", type=float, default=0.5)
    pd.add_argument("--d", type=int, default=2)
    pd.add_argument("--max-size", type=int, default=None)
    pd.add_argument("--master-seed", type=int, default=_default_seed())
    pd.add_argument("-o", "--output", default=None)
    pd.set_defaults(func=cmd_morse_demo)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except (UsageError, ValueError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2
    except OSError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
