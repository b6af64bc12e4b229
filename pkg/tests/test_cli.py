import json
import subprocess
import sys

import pytest

from kkmds.cli import EXIT_OK, EXIT_RUNTIME, EXIT_USAGE, main
from kkmds.core import Instance, normalize
from kkmds.rounding import SolverParams, solve_mds, tau_formula

SMALL = ["--tau", "1", "--net-halfwidth", "2", "--net-eps", "1"]


@pytest.fixture
def line_file(tmp_path):
    p = tmp_path / "line.json"
    p.write_text(Instance.from_points([[0.0], [2.0], [4.0]]).to_json())
    return p


def test_tau_prints_formula(capsys):
    assert main(["tau", "--k", "1", "--delta", "20", "--eps", "0.5"]) == EXIT_OK
    assert float(capsys.readouterr().out) == tau_formula(1, 20.0, 0.5)


def test_usage_errors_exit_one(capsys, tmp_path):
    assert main(["tau", "--k", "0", "--delta", "20", "--eps", "0.5"]) == EXIT_USAGE
    assert main(["solve", str(tmp_path / "nope.json")]) == EXIT_USAGE
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["solve", str(bad)]) == EXIT_USAGE
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == EXIT_USAGE
    with pytest.raises(SystemExit) as exc:
        main(["solve", str(bad), "--family", "dense"])
    assert exc.value.code == EXIT_USAGE


def test_runtime_failure_exits_two(line_file, capsys):
    assert main(["brute", str(line_file), "--net-halfwidth", "40", "--net-eps", "0.1"]) == EXIT_RUNTIME
    assert "EnumerationTooLargeError" in capsys.readouterr().err


def test_generate_writes_instance(tmp_path):
    out = tmp_path / "g.json"
    assert main(["generate", "two-cluster", "--n", "6", "--delta", "8", "--out", str(out)]) == EXIT_OK
    inst = Instance.from_json(out.read_text())
    assert inst.n == 6 and set(inst.d.tolist()) == {1.0, 8.0}


def test_solve_rescales_to_input_units(line_file, tmp_path):
    out = tmp_path / "s.json"
    assert main(["solve", str(line_file), *SMALL, "--out", str(out)]) == EXIT_OK
    rep = json.loads(out.read_text())
    inst = Instance.from_json(line_file.read_text())
    ref = solve_mds(normalize(inst), SolverParams(tau=1, net_override=(2.0, 1.0)))
    assert rep["seed"] == 0 and rep["best_stress"] == ref.stress
    # the input's smallest dissimilarity is 2, so output coordinates are doubled
    assert rep["embedding"]["points"] == (2.0 * ref.embedding.points).tolist()


def test_brute_with_and_without_symmetry(line_file, capsys):
    assert main(["brute", str(line_file), *SMALL]) == EXIT_OK
    plain = json.loads(capsys.readouterr().out)
    assert main(["brute", str(line_file), *SMALL, "--symmetry"]) == EXIT_OK
    sym = json.loads(capsys.readouterr().out)
    assert plain["value"] == sym["value"] and plain["assignment"] == sym["assignment"]


def test_diagnose_emits_one_verdict_per_check(line_file, capsys):
    checks = ["typical-distortion", "translating-quantiles", "closest-conditioning",
              "rounded-cost", "quantile-lemma"]
    argv = ["diagnose", str(line_file), *SMALL, "--draws", "20", "--checks", *checks]
    assert main(argv) == EXIT_OK
    out = json.loads(capsys.readouterr().out)
    assert [v["check"] for v in out["verdicts"]] == [c.replace("-", "_") for c in checks]
    assert all(v["passed"] for v in out["verdicts"])


def test_diagnose_deviation_reduction(line_file, capsys):
    argv = ["diagnose", str(line_file), *SMALL, "--draws", "5", "--checks", "deviation-reduction"]
    assert main(argv) == EXIT_OK
    v = json.loads(capsys.readouterr().out)["verdicts"][0]
    assert v["check"] == "deviation_reduction" and len(v["per_variable_pass"]) == 3


def test_bench_outputs_are_byte_identical(tmp_path):
    cfg = {"instances": [{"name": "g", "kind": "euclidean-noise", "n": 3, "k": 1, "seed": 4}],
           "solver": {"tau": 1, "net_halfwidth": 2.0, "net_eps": 1.0}}
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(cfg))
    outs = []
    for t in range(2):
        out = tmp_path / f"r{t}.csv"
        assert main(["bench", str(path), "--seed", "5", "--out", str(out)]) == EXIT_OK
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]
    assert outs[0].count(b"\n") == 4
    assert main(["bench", str(path), "--format", "json", "--out", str(tmp_path / "r.json")]) == EXIT_OK
    assert json.loads((tmp_path / "r.json").read_text())["schema_version"] == 1


def test_console_entry_point(line_file):
    res = subprocess.run([sys.executable, "-m", "kkmds.cli", "tau", "--k", "2", "--delta", "10",
                          "--eps", "0.5"], capture_output=True, text=True)
    assert res.returncode == 0 and float(res.stdout) == tau_formula(2, 10.0, 0.5)
