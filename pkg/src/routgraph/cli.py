"""Command-line interface.

Subcommands: gen, scc, diam, stat, flags, gw, dfa, sweep.  Data goes to
stdout or the --out file; diagnostics go to stderr.  Exit codes: 0 on
success, 1 on configuration errors, 2 on I/O errors.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from . import dfa as dfa_mod
from . import graph as graph_mod
from . import harness, metrics, stationary
from .branching import gw_tail_prob, solve_constants
from .flags import FLAGS_CSV_HEADER, FlagParams, find_flags
from .harness import ConfigError
from .structure import scc_decompose


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would sys.exit(2); config errors are 1
        raise ConfigError(message)


def _write(args, text: str) -> None:
    out = getattr(args, "out", None)
    if out is None or out == "-":
        sys.stdout.write(text)
        return
    try:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"cannot write to {out!r}: {exc}") from exc


def _make_graph(args):
    if args.simple:
        return graph_mod.generate_simple(args.n, args.r, args.seed)
    return graph_mod.generate(args.n, args.r, args.seed)


def _cmd_gen(args) -> int:
    g = _make_graph(args)
    if args.format == "json":
        _write(args, graph_mod.to_json(g) + "\n")
    else:
        _write(args, graph_mod.to_text(g))
    return 0


def _cmd_scc(args) -> int:
    g = _make_graph(args)
    dec = scc_decompose(g)
    _write(args, dec.to_json() + "\n")
    return 0


def _cmd_diam(args) -> int:
    g = _make_graph(args)
    dec = scc_decompose(g)
    rep = metrics.diameter(g)
    rep_d0 = metrics.diameter_restricted(g, dec.d0_members())
    header = "n,r,seed,diam,diam_d0,norm_diam,norm_diam_d0"
    row = (
        f"{args.n},{args.r},{args.seed},{rep.value},{rep_d0.value},"
        f"{rep.normalized:.12g},{rep_d0.normalized:.12g}"
    )
    if args.format == "json":
        obj = dict(zip(header.split(","), row.split(",")))
        _write(args, json.dumps(obj) + "\n")
    else:
        _write(args, header + "\n" + row + "\n")
    return 0


def _cmd_stat(args) -> int:
    g = _make_graph(args)
    dec = scc_decompose(g)
    profile = stationary.stationary_power(g, dec, tol=args.tol, max_iter=args.max_iter)
    if args.full_pi:
        if profile.support.size > args.pi_cap:
            raise ConfigError(
                f"full pi export guarded: support {profile.support.size} exceeds "
                f"--pi-cap {args.pi_cap}"
            )
        obj = {
            "n": args.n,
            "r": args.r,
            "seed": args.seed,
            "support": (profile.support + 1).tolist(),
            "pi": profile.pi.tolist(),
            "residual": profile.residual,
        }
        _write(args, json.dumps(obj) + "\n")
        return 0
    header = "n,r,seed,pi_max,pi_min,exp_max,exp_min,residual,iters"
    row = ",".join([str(args.n), str(args.r), str(args.seed)] + profile.to_csv_fields())
    if args.format == "json":
        obj = dict(zip(header.split(","), row.split(",")))
        _write(args, json.dumps(obj) + "\n")
    else:
        _write(args, header + "\n" + row + "\n")
    return 0


def _cmd_flags(args) -> int:
    g = _make_graph(args)
    params = FlagParams.for_graph(
        args.n,
        args.r,
        epsilon=args.eps,
        threshold=args.flag_threshold,
        size_cap=args.flag_size_cap,
    )
    dec = scc_decompose(g)
    reports = find_flags(g, params, dec)
    lines = [FLAGS_CSV_HEADER]
    for rep in reports:
        lines.append(",".join(rep.to_csv_fields(args.n, args.r, args.seed)))
    _write(args, "\n".join(lines) + "\n")
    print(
        f"flags: {len(reports)} found (k_star={params.k_star}, "
        f"threshold={params.threshold}, size_cap={params.size_cap})",
        file=sys.stderr,
    )
    return 0


def _cmd_gw(args) -> int:
    if args.k is not None or args.omega is not None:
        if args.k is None or args.omega is None:
            raise ConfigError("tail estimation needs both --k and --omega")
        est = gw_tail_prob(args.r, args.k, args.omega, args.trials, args.seed)
        _write(args, "r,k,omega,trials,estimate,stderr\n" + est.to_csv_row() + "\n")
        return 0
    consts = solve_constants(args.r)
    _write(args, "r,lambda,eta\n" + consts.to_csv_row() + "\n")
    return 0


def _cmd_dfa(args) -> int:
    d = dfa_mod.random_dfa(args.n, args.r, args.seed)
    if not args.run:
        _write(args, dfa_mod.dfa_to_text(d))
        return 0
    tokens = sys.stdin.read().split()
    word = [int(tok) - 1 for tok in tokens]  # symbols are 1-based on the wire
    final, accept = dfa_mod.run_word(d, word)
    _write(args, f"{final + 1} {int(accept)}\n")
    return 0


def _cmd_sweep(args) -> int:
    values: dict = {}
    if args.config:
        try:
            with open(args.config, "r", encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise OSError(f"cannot read config {args.config!r}: {exc}") from exc
        values.update(harness.parse_config_text(text))
    overrides = {
        "n": args.n,
        "r": args.r,
        "trials": args.trials,
        "seed": args.seed,
        "measurements": args.measurements,
        "format": args.format,
        "out": args.out,
        "workers": args.workers,
        "eps": args.eps,
        "tol": args.tol,
        "max_iter": args.max_iter,
        "simple": args.simple or None,
        "flag_threshold": args.flag_threshold,
        "flag_size_cap": args.flag_size_cap,
    }
    for key, value in overrides.items():
        if value is not None:
            values[key] = value
    cfg = harness.build_config(values)
    t0 = time.perf_counter()
    records = harness.run_sweep(cfg)
    elapsed = time.perf_counter() - t0
    harness.emit(records, cfg.fmt, cfg.out)
    failures = sum(1 for rec in records if rec.error is not None)
    print(
        f"sweep: {len(records)} trials in {elapsed:.1f}s, {failures} failed",
        file=sys.stderr,
    )
    if args.summary:
        summary = harness.estimate_constants(records)
        print(json.dumps(summary, indent=1), file=sys.stderr)
    return 0


def _int_list(text: str) -> list[int]:
    return [int(tok) for tok in text.split(",") if tok.strip()]


def _str_list(text: str) -> list[str]:
    return [tok.strip() for tok in text.split(",") if tok.strip()]


def build_parser() -> _Parser:
    parser = _Parser(prog="routgraph", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_shared(p, n_default=None):
        p.add_argument("--n", type=int, default=n_default, help="vertex count")
        p.add_argument("--r", type=int, default=2, help="out-degree")
        p.add_argument("--seed", type=int, default=0, help="64-bit seed")
        p.add_argument("--trials", type=int, default=1000)
        p.add_argument("--format", choices=("text", "csv", "json"), default=None)
        p.add_argument("--out", default=None, help="output path (default stdout)")
        p.add_argument("--eps", type=float, default=0.2)
        p.add_argument("--tol", type=float, default=stationary.DEFAULT_POWER_TOL)
        p.add_argument(
            "--max-iter",
            dest="max_iter",
            type=int,
            default=stationary.DEFAULT_POWER_MAX_ITER,
        )
        p.add_argument("--simple", action="store_true", help="reject non-simple draws")

    p = sub.add_parser("gen", help="generate a graph")
    add_shared(p, n_default=16)
    p.set_defaults(func=_cmd_gen, format="text")

    p = sub.add_parser("scc", help="strongly connected components")
    add_shared(p, n_default=1024)
    p.set_defaults(func=_cmd_scc)

    p = sub.add_parser("diam", help="exact diameter of D and D0")
    add_shared(p, n_default=1024)
    p.set_defaults(func=_cmd_diam)

    p = sub.add_parser("stat", help="stationary distribution extremes")
    add_shared(p, n_default=1024)
    p.add_argument("--full-pi", action="store_true", dest="full_pi")
    p.add_argument("--pi-cap", type=int, default=10**4, dest="pi_cap")
    p.set_defaults(func=_cmd_stat)

    p = sub.add_parser("flags", help="scan for slippery towers")
    add_shared(p, n_default=65536)
    p.add_argument("--flag-threshold", type=int, default=None, dest="flag_threshold")
    p.add_argument("--flag-size-cap", type=int, default=None, dest="flag_size_cap")
    p.set_defaults(func=_cmd_flags)

    p = sub.add_parser("gw", help="branching constants and tail estimates")
    add_shared(p)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--omega", type=int, default=None)
    p.set_defaults(func=_cmd_gw)

    p = sub.add_parser("dfa", help="random DFA; --run executes a word from stdin")
    add_shared(p, n_default=16)
    p.add_argument("--run", action="store_true")
    p.set_defaults(func=_cmd_dfa)

    p = sub.add_parser("sweep", help="seeded Monte Carlo sweep over (n, r)")
    p.add_argument("--config", default=None, help="flat key = value config file")
    p.add_argument("--n", type=_int_list, default=None, help="comma-separated list")
    p.add_argument("--r", type=_int_list, default=None, help="comma-separated list")
    p.add_argument("--trials", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument(
        "--measurements",
        type=_str_list,
        default=None,
        help=f"comma-separated subset of {harness.MEASUREMENTS}",
    )
    p.add_argument("--format", choices=harness.FORMATS, default=None)
    p.add_argument("--out", default=None)
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--eps", type=float, default=None)
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--max-iter", dest="max_iter", type=int, default=None)
    p.add_argument("--simple", action="store_true")
    p.add_argument("--flag-threshold", type=int, default=None, dest="flag_threshold")
    p.add_argument("--flag-size-cap", type=int, default=None, dest="flag_size_cap")
    p.add_argument("--summary", action="store_true", help="constants summary on stderr")
    p.set_defaults(func=_cmd_sweep)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
