import json

import pytest

from kkmds.experiment import (COLUMNS, load_instance, rows_from_csv, rows_from_json, rows_to_csv,
                              rows_to_json, run_experiment, solver_params)
from kkmds.generators import generate

SOLVER = {"tau": 1, "net_halfwidth": 2.0, "net_eps": 1.0, "trials": 2}


def _zero_stress_config(**extra):
    cfg = {"instances": [{"name": "line", "instance": {"n": 3, "k": 1, "d": [1.0, 2.0, 1.0]}}],
           "solver": SOLVER, "seeds": [0], "local_search": {"restarts": 2, "steps": 200}}
    cfg.update(extra)
    return cfg


def test_empty_config_gives_header_only():
    assert rows_to_csv(run_experiment({"instances": []})) == ",".join(COLUMNS) + "\n"


def test_zero_stress_instance_all_methods():
    rows = run_experiment(_zero_stress_config())
    assert [r["method"] for r in rows] == ["sa-round", "brute-net", "local-search"]
    assert all(r["error"] == "" for r in rows)
    # the net methods are limited by the net's resolution, local search is not
    eps = 0.5
    assert rows[0]["stress"] <= 3 * eps and rows[1]["stress"] <= 3 * eps
    assert rows[0]["lp_value"] <= rows[1]["stress"] + 1e-6
    assert rows[0]["net_size"] == rows[1]["net_size"] == 4 and rows[0]["lp_rows"] > 0
    assert rows[2]["stress"] <= 1e-6


def test_repeated_seed_is_byte_identical():
    cfg = _zero_stress_config(seeds=[1, 2])
    assert rows_to_csv(run_experiment(cfg)) == rows_to_csv(run_experiment(cfg))


def test_rows_follow_config_order_and_record_errors():
    cfg = _zero_stress_config(methods=["brute-net", "bogus"], seeds=[0, 1])
    cfg["instances"].append({"name": "missing", "file": "does-not-exist.json"})
    rows = run_experiment(cfg)
    assert [(r["instance"], r["method"], r["seed"]) for r in rows] == [
        ("line", "brute-net", 0), ("line", "brute-net", 1), ("line", "bogus", 0), ("line", "bogus", 1),
        ("missing", "brute-net", 0), ("missing", "brute-net", 1), ("missing", "bogus", 0),
        ("missing", "bogus", 1)]
    assert rows[0]["error"] == "" and "unknown method" in rows[2]["error"]
    assert all("FileNotFoundError" in r["error"] for r in rows[4:])


def test_worker_pool_preserves_order():
    cfg = _zero_stress_config(methods=["brute-net", "local-search"], seeds=[0, 1, 2])
    assert rows_to_csv(run_experiment(dict(cfg, workers=2))) == rows_to_csv(run_experiment(cfg))


def test_timing_column_only_on_request():
    cfg = _zero_stress_config(methods=["brute-net"])
    assert "wall_time" not in run_experiment(cfg)[0]
    rows = run_experiment(cfg, with_timing=True)
    assert rows[0]["wall_time"] >= 0
    assert rows_to_csv(rows, True).splitlines()[0].endswith(",wall_time")


def test_results_round_trip():
    rows = run_experiment(_zero_stress_config(methods=["brute-net"]))
    assert rows_from_json(rows_to_json(rows)) == rows
    back = rows_from_csv(rows_to_csv(rows))
    assert back[0]["instance"] == "line" and float(back[0]["stress"]) == rows[0]["stress"]
    with pytest.raises(ValueError):
        rows_from_json(json.dumps({"schema_version": 99, "rows": []}))


def test_load_instance_sources(tmp_path):
    inst = generate("two-cluster", 4)
    (tmp_path / "a.json").write_text(inst.to_json())
    assert load_instance({"file": "a.json"}, tmp_path).to_json() == inst.to_json()
    assert load_instance({"kind": "two-cluster", "n": 4}).to_json() == inst.to_json()
    assert load_instance({"instance": inst.to_dict()}).to_json() == inst.to_json()


def test_solver_params_from_flat_config():
    p = solver_params({"eps": 0.25, "tau": 3, "family": "sparse", "net_halfwidth": 4}, 9)
    assert (p.eps, p.tau, p.family, p.seed, p.net_override) == (0.25, 3, "sparse", 9, (4.0, 1.0))
    assert solver_params({}, 0).net_override is None
