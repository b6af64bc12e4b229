"""Batch experiments: instances x methods x seeds from one JSON config."""

from __future__ import annotations

import csv
import io
import json
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from .core import Instance, kk_stress, normalize
from .generators import generate
from .oracle import brute_force_net_opt, local_search_opt
from .rounding import SolverParams, default_net, solve_mds

RESULTS_SCHEMA_VERSION = 1
METHODS = ("sa-round", "brute-net", "local-search")
COLUMNS = ("instance", "method", "seed", "n", "k", "stress", "lp_value", "net_size",
           "lp_rows", "lp_vars", "error")


def solver_params(cfg: dict, seed: int) -> SolverParams:
    """SolverParams from the flat option names used by configs and the CLI."""
    override = None
    if cfg.get("net_halfwidth") is not None or cfg.get("net_eps") is not None:
        override = (float(cfg.get("net_halfwidth", 2.0)), float(cfg.get("net_eps", 1.0)))
    return SolverParams(eps=float(cfg.get("eps", 0.5)), tau=int(cfg.get("tau", 2)),
                        family=cfg.get("family", "full"), net_override=override,
                        seed=int(seed), trials=int(cfg.get("trials", 1)),
                        c0=float(cfg.get("c0", 1.0)))


def load_instance(spec: dict, base_dir: Path | None = None) -> Instance:
    if "instance" in spec:
        return Instance.from_dict(spec["instance"])
    if "file" in spec:
        path = Path(spec["file"])
        if base_dir is not None and not path.is_absolute():
            path = base_dir / path
        return Instance.from_json(path.read_text())
    return generate(spec["kind"], int(spec["n"]), int(spec.get("k", 1)),
                    int(spec.get("seed", 0)), **spec.get("params", {}))


def _run_row(job) -> dict:
    name, inst_dict, method, seed, solver_cfg, ls_cfg, timing = job
    row = {c: "" for c in COLUMNS}
    row.update(instance=name, method=method, seed=seed)
    start = time.perf_counter()
    try:
        inst = normalize(Instance.from_dict(inst_dict))
        row.update(n=inst.n, k=inst.k)
        params = solver_params(solver_cfg, seed)
        if method == "sa-round":
            res = solve_mds(inst, params)
            rep = res.report
            row.update(stress=res.stress, lp_value=rep["lp_value"], net_size=rep["net_meta"]["size"],
                       lp_rows=rep["lp_rows"], lp_vars=rep["lp_vars"])
        elif method == "brute-net":
            net = default_net(inst, params)
            _, value, _ = brute_force_net_opt(inst, net)
            row.update(stress=value, net_size=net.size)
        elif method == "local-search":
            emb = local_search_opt(inst, restarts=int(ls_cfg.get("restarts", 5)),
                                   steps=int(ls_cfg.get("steps", 300)),
                                   rng=np.random.default_rng(seed))
            row.update(stress=kk_stress(emb, inst))
        else:
            raise ValueError(f"unknown method {method!r}")
    except Exception as exc:  # recorded per row so the batch continues
        row["error"] = f"{type(exc).__name__}: {exc}"
    if timing:
        row["wall_time"] = time.perf_counter() - start
    return row


def run_experiment(config: dict, base_dir: Path | None = None, with_timing: bool = False) -> list[dict]:
    """One row per (instance, method, seed), in config order.

    Wall time is measured only when ``with_timing`` is set so that default
    output is reproducible byte for byte.
    """
    methods = config.get("methods", list(METHODS))
    seeds = config.get("seeds", [0])
    solver_cfg = config.get("solver", {})
    ls_cfg = config.get("local_search", {})
    jobs, failed = [], []
    for t, spec in enumerate(config.get("instances", [])):
        name = spec.get("name", f"instance{t}")
        try:
            inst_dict = load_instance(spec, base_dir).to_dict()
        except Exception as exc:
            inst_dict = None
            failed.append((name, f"{type(exc).__name__}: {exc}"))
        for method in methods:
            for seed in seeds:
                jobs.append((name, inst_dict, method, int(seed), solver_cfg, ls_cfg, with_timing))
    errors = dict(failed)
    runnable = [j for j in jobs if j[1] is not None]
    workers = int(config.get("workers", 1))
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            done = iter(list(pool.map(_run_row, runnable)))
    else:
        done = iter([_run_row(j) for j in runnable])
    rows = []
    for job in jobs:
        if job[1] is None:
            row = {c: "" for c in COLUMNS}
            row.update(instance=job[0], method=job[2], seed=job[3], error=errors[job[0]])
            if with_timing:
                row["wall_time"] = ""
            rows.append(row)
        else:
            rows.append(next(done))
    return rows


def columns(with_timing: bool) -> list[str]:
    return list(COLUMNS) + (["wall_time"] if with_timing else [])


def rows_to_csv(rows: list[dict], with_timing: bool = False) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=columns(with_timing), lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow(r)
    return buf.getvalue()


def rows_to_json(rows: list[dict]) -> str:
    return json.dumps({"schema_version": RESULTS_SCHEMA_VERSION, "rows": rows}, indent=2, sort_keys=True)


def rows_from_json(text: str) -> list[dict]:
    obj = json.loads(text)
    if obj.get("schema_version") != RESULTS_SCHEMA_VERSION:
        raise ValueError("unsupported results schema version")
    return obj["rows"]


def rows_from_csv(text: str) -> list[dict]:
    return list(csv.DictReader(io.StringIO(text)))
