import json

import numpy as np
import pytest

from tomoml import counterexample_spec, io, w_state_spec
from tomoml.benchmark import parse_t_values, run_sweep
from tomoml.cli import EXIT_CYCLE, EXIT_INPUT, EXIT_OK, main
from tomoml.solver import solve


@pytest.fixture
def cex_files(tmp_path):
    spec = counterexample_spec()
    povm, data = tmp_path / "povm.json", tmp_path / "data.json"
    io.write_povm(povm, spec.povm)
    io.write_dataset(data, spec.dataset)
    return str(povm), str(data)


def test_povm_dataset_round_trip(tmp_path):
    spec = w_state_spec(2, shots=500, seed=3)
    io.write_povm(tmp_path / "p.json", spec.povm)
    io.write_dataset(tmp_path / "d.json", spec.dataset)
    povm = io.read_povm(tmp_path / "p.json")
    data = io.read_dataset(tmp_path / "d.json")
    assert np.array_equal(povm.stack, spec.povm.stack)
    assert np.array_equal(data.frequencies, spec.dataset.frequencies)
    assert data.total_count == 500


def test_result_round_trip(tmp_path, cex):
    rho, log = solve(cex)
    io.write_result(tmp_path / "r.json", rho, -0.5, log, {"rule": "armijo"})
    back = io.read_result(tmp_path / "r.json")
    assert np.array_equal(back["rho"].matrix, rho.matrix)
    assert back["termination"] == "converged"


def test_bad_files(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(io.FormatError):
        io.read_povm(bad)
    bad.write_text(json.dumps({"counts": [1.5, 2]}))
    with pytest.raises(io.FormatError):
        io.read_dataset(bad)


def test_sweep_csv(tmp_path, cex):
    rows = run_sweep(cex, [10.0, 0.1, 1.0], max_iterations=500)
    io.write_sweep(str(tmp_path / "s.csv"), rows)
    text = (tmp_path / "s.csv").read_text()
    assert text.splitlines()[0] == "t,rule,iterations,converged,final_loglik"
    back = io.read_sweep(tmp_path / "s.csv")
    assert len(back) == 6
    assert [(r["t"], r["rule"]) for r in back] == sorted((r["t"], r["rule"]) for r in back)
    assert "\r" not in text


def test_parse_t_values():
    assert parse_t_values("0.1, 1,10") == [0.1, 1.0, 10.0]
    vals = parse_t_values("logspace:-3:3:13")
    assert len(vals) == 13 and vals[0] == pytest.approx(1e-3) and vals[-1] == pytest.approx(1e3)
    with pytest.raises(ValueError):
        parse_t_values("0,1")


def test_cli_estimate(tmp_path, cex_files):
    out, log = tmp_path / "r.json", tmp_path / "log.csv"
    assert main(["estimate", *cex_files, "--out", str(out), "--log", str(log)]) == EXIT_OK
    res = io.read_result(out)
    assert np.allclose(np.diag(res["rho"].matrix).real, [1 / 3, 2 / 3], atol=1e-9)
    assert log.read_text().startswith("k,t,loglik")


def test_cli_estimate_cycle(tmp_path, cex_files):
    assert main(["estimate", *cex_files, "--rule", "rrhor", "--out", str(tmp_path / "r.json")]) == EXIT_CYCLE


def test_cli_bad_input(tmp_path, cex_files):
    assert main(["estimate", str(tmp_path / "missing.json"), cex_files[1]]) == EXIT_INPUT
    assert main(["estimate", *cex_files, "--rule", "fixed"]) == EXIT_INPUT
    bad = tmp_path / "neg.json"
    bad.write_text(json.dumps({"frequencies": [1.5, -0.5]}))
    assert main(["estimate", cex_files[0], str(bad)]) == EXIT_INPUT


def test_cli_simulate_deterministic(tmp_path, monkeypatch):
    monkeypatch.delenv("TOMOML_SEED", raising=False)
    outs = []
    for tag in "ab":
        p, d = tmp_path / f"p{tag}.json", tmp_path / f"d{tag}.json"
        args = ["simulate", "--experiment", "w-state", "--shots", "1000", "--seed", "7"]
        assert main([*args, "--out-povm", str(p), "--out-data", str(d)]) == EXIT_OK
        outs.append((p.read_bytes(), d.read_bytes()))
    assert outs[0] == outs[1]
    meta = json.loads(outs[0][1])["metadata"]
    assert meta["seed"] == 7 and meta["shots"] == 1000


def test_cli_seed_env(tmp_path, monkeypatch):
    monkeypatch.setenv("TOMOML_SEED", "7")
    p, d = tmp_path / "p.json", tmp_path / "d.json"
    args = ["simulate", "--experiment", "w-state", "--qubits", "2", "--shots", "100"]
    main([*args, "--out-povm", str(p), "--out-data", str(d)])
    assert json.loads(d.read_text())["metadata"]["seed"] == 7
    monkeypatch.setenv("TOMOML_SEED", "x")
    assert main([*args, "--out-povm", str(p), "--out-data", str(d)]) == EXIT_INPUT


def test_cli_sweep(tmp_path, cex_files):
    out = tmp_path / "s.csv"
    code = main(["sweep", "--povm", cex_files[0], "--data", cex_files[1], "--t-values", "0.1,1,10", "--out", str(out)])
    assert code == EXIT_OK
    assert len(io.read_sweep(out)) == 6
    assert main(["sweep", "--povm", cex_files[0], "--data", cex_files[1], "--rules", "bogus"]) == EXIT_INPUT


def test_cli_verify_deterministic(capsys):
    main(["verify", "--trials", "5", "--seed", "3"])
    first = capsys.readouterr().out
    main(["verify", "--trials", "5", "--seed", "3"])
    assert capsys.readouterr().out == first
    assert "checks passed" in first
