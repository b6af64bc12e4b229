"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 runtime failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from math import comb
from pathlib import Path

import numpy as np

from .core import Embedding, Instance, aspect_ratio, kk_stress, normalize
from .diagnostics import (check_closest_conditioning, check_deviation_reduction,
                          check_quantile_lemma, check_rounded_cost, check_translating_quantiles,
                          check_typical_distortion, verdict_to_json)
from .experiment import rows_to_csv, rows_to_json, run_experiment, solver_params
from .generators import KINDS, generate
from .oracle import EnumerationTooLargeError, brute_force_net_opt, local_search_opt
from .rounding import default_net, relax, report_to_json, solve_mds, tau_formula

EXIT_OK, EXIT_USAGE, EXIT_RUNTIME = 0, 1, 2
CHECKS = ("typical-distortion", "translating-quantiles", "closest-conditioning",
          "rounded-cost", "deviation-reduction", "quantile-lemma")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _solver_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--eps", type=float, default=0.5, help="target accuracy in (0, 1)")
    p.add_argument("--tau", type=int, default=2, help="conditioning-set size")
    p.add_argument("--family", choices=("full", "sparse"), default="full")
    p.add_argument("--net-halfwidth", type=float, default=None,
                   help="half-width of the net cube (default Delta/eps)")
    p.add_argument("--net-eps", type=float, default=None, help="net cover radius (default 1)")
    p.add_argument("--trials", type=int, default=1, help="independent roundings, best kept")
    p.add_argument("--c0", type=float, default=1.0, help="sparse family base-count constant")


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", type=Path, default=None, help="output file (default stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="kkmds", description="Kamada-Kawai MDS via Sherali-Adams rounding.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("generate", help="write a synthetic instance")
    g.add_argument("kind", choices=KINDS)
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--k", type=int, default=1)
    g.add_argument("--noise", type=float, default=None, help="euclidean-noise: relative noise")
    g.add_argument("--span", type=float, default=None, help="euclidean-noise: cube side")
    g.add_argument("--p", type=float, default=None, help="graph-shortest-path: edge probability")
    g.add_argument("--delta", type=float, default=None, help="two-cluster: cross dissimilarity")
    _common(g)

    s = sub.add_parser("solve", help="relax, round and report")
    s.add_argument("instance", type=Path)
    _solver_flags(s)
    _common(s)

    b = sub.add_parser("brute", help="exhaustive optimum over the net")
    b.add_argument("instance", type=Path)
    _solver_flags(b)
    b.add_argument("--symmetry", action="store_true", help="enumerate one start per net orbit")
    _common(b)

    d = sub.add_parser("diagnose", help="run the analysis checks, one JSON verdict each")
    d.add_argument("instance", type=Path)
    _solver_flags(d)
    d.add_argument("--checks", nargs="+", choices=CHECKS, default=list(CHECKS))
    d.add_argument("--draws", type=int, default=200, help="Monte Carlo draws per check")
    d.add_argument("--c", type=float, default=0.1, help="typical-distortion threshold")
    d.add_argument("--delta", type=float, default=0.3, help="failure rate for the quantile checks")
    _common(d)

    e = sub.add_parser("bench", help="run an experiment config")
    e.add_argument("config", type=Path)
    e.add_argument("--format", choices=("csv", "json"), default="csv")
    e.add_argument("--with-timing", action="store_true", help="add a wall_time column")
    _common(e)

    t = sub.add_parser("tau", help="print the prescribed conditioning-set size")
    t.add_argument("--k", type=int, required=True)
    t.add_argument("--delta", type=float, required=True, help="aspect ratio")
    t.add_argument("--eps", type=float, required=True)
    _common(t)
    return parser


def _emit(text: str, out: Path | None) -> None:
    if not text.endswith("\n"):
        text += "\n"
    if out is None:
        sys.stdout.write(text)
    else:
        out.write_text(text)


def _read_instance(path: Path) -> Instance:
    try:
        return Instance.from_json(path.read_text())
    except FileNotFoundError as exc:
        raise UsageError(f"no such instance file: {path}") from exc


def _solver_cfg(args) -> dict:
    return {"eps": args.eps, "tau": args.tau, "family": args.family, "trials": args.trials,
            "net_halfwidth": args.net_halfwidth, "net_eps": args.net_eps, "c0": args.c0}


def _params(args):
    try:
        return solver_params(_solver_cfg(args), args.seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def cmd_generate(args) -> str:
    extra = {"euclidean-noise": {"noise": args.noise, "span": args.span},
             "graph-shortest-path": {"p": args.p},
             "two-cluster": {"delta": args.delta}}.get(args.kind, {})
    extra = {key: v for key, v in extra.items() if v is not None}
    return generate(args.kind, args.n, args.k, args.seed, **extra).to_json()


def cmd_solve(args) -> str:
    raw = _read_instance(args.instance)
    inst = normalize(raw)
    res = solve_mds(inst, _params(args))
    scale = float(raw.d.min())
    out = dict(res.report)
    out["seed"] = args.seed
    out["embedding"] = Embedding(res.embedding.points * scale, "rounded").to_dict()
    return report_to_json(out)


def cmd_brute(args) -> str:
    raw = _read_instance(args.instance)
    inst = normalize(raw)
    net = default_net(inst, _params(args))
    emb, value, assignment = brute_force_net_opt(inst, net, use_symmetry=args.symmetry)
    return json.dumps({"value": value, "assignment": assignment, "net_meta": net.meta(),
                       "embedding": Embedding(emb.points * float(raw.d.min()), "brute-force").to_dict()},
                      indent=2, sort_keys=True)


def cmd_diagnose(args) -> str:
    inst = normalize(_read_instance(args.instance))
    params = _params(args)
    rel = relax(inst, params)
    rng = np.random.default_rng(np.random.SeedSequence([args.seed, 2]))
    try:
        opt_emb, _, _ = brute_force_net_opt(inst, rel.net)
    except EnumerationTooLargeError:
        opt_emb = local_search_opt(inst, rng=np.random.default_rng(args.seed))
    T = tuple(sorted(int(v) for v in rng.choice(inst.n, size=min(params.tau, inst.n), replace=False)))
    verdicts = []
    for name in args.checks:
        try:
            if name == "typical-distortion":
                v = check_typical_distortion(inst, opt_emb, rel.pd, args.c)
            elif name == "translating-quantiles":
                v = check_translating_quantiles(rel.pd, opt_emb, inst, args.eps)
            elif name == "closest-conditioning":
                v = check_closest_conditioning(rel.pd, T, args.draws, rng)
            elif name == "rounded-cost":
                I = rng.choice(comb(inst.n, 2), size=max(1, comb(inst.n, 2) // 4), replace=False)
                all_pairs = [(i, j) for i in range(inst.n) for j in range(i + 1, inst.n)]
                v = check_rounded_cost(rel.pd, inst, T, [all_pairs[q] for q in sorted(I)], args.draws, rng)
            elif name == "deviation-reduction":
                v = check_deviation_reduction(rel.pd, inst, args.eps, params.tau, args.draws, rng,
                                              delta=args.delta)
            else:
                v = check_quantile_lemma(opt_emb.points, args.eps, args.delta)
        except Exception as exc:  # a check that cannot run is a verdict, not a crash
            v = {"check": name.replace("-", "_"), "passed": False,
                 "error": f"{type(exc).__name__}: {exc}"}
        verdicts.append(v)
    return verdict_to_json({"schema_version": 1, "seed": args.seed, "lp_value": rel.lp_value,
                            "opt_stress": kk_stress(opt_emb, inst),
                            "aspect_ratio": aspect_ratio(inst), "verdicts": verdicts})


def cmd_bench(args) -> str:
    try:
        config = json.loads(args.config.read_text())
    except FileNotFoundError as exc:
        raise UsageError(f"no such config file: {args.config}") from exc
    if "seeds" not in config:
        config["seeds"] = [args.seed]
    rows = run_experiment(config, base_dir=args.config.parent, with_timing=args.with_timing)
    return rows_to_csv(rows, args.with_timing) if args.format == "csv" else rows_to_json(rows)


def cmd_tau(args) -> str:
    try:
        return repr(tau_formula(args.k, args.delta, args.eps))
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


COMMANDS = {"generate": cmd_generate, "solve": cmd_solve, "brute": cmd_brute,
            "diagnose": cmd_diagnose, "bench": cmd_bench, "tau": cmd_tau}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _emit(COMMANDS[args.command](args), args.out)
    except UsageError as exc:
        print(f"kkmds: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except json.JSONDecodeError as exc:
        print(f"kkmds: error: malformed JSON input: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as exc:
        print(f"kkmds: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
