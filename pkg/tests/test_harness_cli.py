import csv
import io
import json

import pytest

from spacesum import cli, harness
from spacesum.harness import Flags, InstanceError, bench, fit_exponent, generate, solve, strip_wall_time, verify


def write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(json.dumps(obj))
    return str(p)


@pytest.mark.parametrize("family", harness.FAMILIES)
def test_generators_deterministic(family):
    params = {"n": 6, "k": 2} if "ksum" in family else {"n": 6}
    assert generate(family, params, 42) == generate(family, params, 42)
    assert generate(family, params, 42) != generate(family, params, 43)


def test_planted_ld_shares_one_value():
    for seed in range(20):
        inst, truth = generate("planted-ld", {"n": 8}, seed)
        shared = set(inst["x"]) & set(inst["y"])
        assert len(shared) == 1
        i, j = truth["pair"]
        assert inst["x"][i - 1] == inst["y"][j - 1]


def test_subset_sum_generator_yes_by_construction():
    inst, truth = generate("random-subset-sum", {"n": 10}, 3)
    assert sum(inst["w"][i - 1] for i in truth["witness"]) == inst["t"]


def test_generator_errors():
    with pytest.raises(InstanceError):
        generate("random-ksum", {"n": 10, "m": 25}, 1)
    with pytest.raises(InstanceError):
        generate("no-such-family", {"n": 4}, 1)
    with pytest.raises(InstanceError):
        generate("planted-ld", {"n": 8, "m": 8}, 1)


def test_solve_report_shape_and_verify():
    inst, _ = generate("random-subset-sum", {"n": 12}, 9)
    rep = solve(inst, 5, Flags(oracle=True))
    assert tuple(rep) == harness.REPORT_FIELDS
    assert rep["outcome"] == "YES" and rep["oracle"]["agrees"]
    assert verify(inst, rep) == (True, "witness verified")
    bad = dict(rep, witness=[1])
    assert not verify(inst, bad)[0] or inst["w"][0] == inst["t"]
    assert verify({**inst, "t": inst["t"] + 1}, rep)[1] == "digest mismatch"


def test_reports_deterministic_modulo_wall_time():
    for family in ("planted-ld", "random-knapsack", "bip-random", "planted-ksum"):
        inst, _ = generate(family, {"n": 8}, 11)
        a = strip_wall_time(solve(inst, 7))
        b = strip_wall_time(solve(inst, 7))
        assert harness.dumps(a) == harness.dumps(b)


def test_strip_wall_time_nested():
    obj = {"a": {"wall_time": 1.0, "b": [{"wall_time": 2, "c": 3}]}}
    assert strip_wall_time(obj) == {"a": {"b": [{"c": 3}]}}


def test_env_seed(monkeypatch):
    monkeypatch.setenv(harness.SEED_ENV, "0x99")
    assert harness.default_seed() == 0x99
    inst, _ = generate("planted-ld", {"n": 16}, 1)
    assert solve(inst)["seed"] == "0x99"


def test_cli_exit_codes(tmp_path, capsys):
    inst, _ = generate("random-subset-sum", {"n": 10}, 4)
    good = write(tmp_path, "ss.json", inst)
    assert cli.run(["subsetsum", "--in", good, "--seed", "3"]) == 0
    assert json.loads(capsys.readouterr().out)["witness"]

    disjoint = write(tmp_path, "ld.json", {"type": "ld", "x": [2, 4, 6, 8], "y": [1, 3, 5, 7]})
    assert cli.run(["ld", "--in", disjoint]) == 2

    junk = tmp_path / "junk.json"
    junk.write_text("{not json")
    assert cli.run(["solve", "--in", str(junk)]) == 1
    assert cli.run(["solve", "--in", str(tmp_path / "missing.json")]) == 1
    assert cli.run(["solve", "--in", write(tmp_path, "arr.json", [1, 2])]) == 1
    assert cli.run(["knapsack", "--in", good]) == 1
    assert "error" in capsys.readouterr().err


def test_cli_ld_from_array_files(tmp_path, capsys):
    x = write(tmp_path, "x.json", [3, 9, 4])
    y = write(tmp_path, "y.json", [8, 4, 1])
    assert cli.run(["ld", "--x", x, "--y", y]) == 0
    assert json.loads(capsys.readouterr().out)["witness"] == [3, 2]
    assert cli.run(["ld", "--x", x]) == 1


def test_cli_gen_solve_verify_roundtrip(tmp_path):
    inst_path, truth_path, rep_path = (str(tmp_path / f) for f in ("i.json", "t.json", "r.json"))
    assert cli.run(["--seed", "12", "gen", "planted-ksum", "-n", "16", "--param", "k=2", "--out", inst_path, "--truth", truth_path]) == 0
    truth = json.loads(open(truth_path).read())
    assert len(truth["indices"]) == 2
    assert cli.run(["ksum", "--in", inst_path, "--out", rep_path, "--oracle"]) == 0
    assert json.loads(open(rep_path).read())["oracle"]["agrees"]
    assert cli.run(["verify", "--in", inst_path, "--report", rep_path]) == 0


def test_cli_bip_and_knapsack(tmp_path, capsys):
    bip = write(tmp_path, "b.json", {"type": "bip", "objective": [-1, -1, 2], "constraints": [{"a": [1, 1, 0], "u": 1}]})
    assert cli.run(["bip", "--in", bip]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["value"] == -1 and rep["outcome"] == "OPTIMAL"
    infeasible = write(tmp_path, "bi.json", {"type": "bip", "objective": [1], "constraints": [{"a": [1], "u": -1}]})
    assert cli.run(["bip", "--in", infeasible]) == 2
    assert json.loads(capsys.readouterr().out)["outcome"] == "INFEASIBLE"
    ks = write(tmp_path, "k.json", {"type": "knapsack", "w": [3, 4, 5], "v": [4, 5, 6], "t": 8})
    assert cli.run(["knapsack", "--in", ks]) == 0
    assert json.loads(capsys.readouterr().out)["value"] == 10


def test_bench_empty_suite_is_header_only():
    rows, summary = bench({"runs": []}, seed=1)
    assert rows == [] and summary["rows"] == 0
    assert harness.rows_to_csv(rows) == ",".join(harness.CSV_COLUMNS) + "\n"


def test_bench_rerun_identical(tmp_path, capsys):
    suite = {"runs": [{"family": "planted-ld", "sizes": [64, 128, 256], "s": [1, 4], "trials": 3}]}
    a = bench(suite, seed=5)
    b = bench(suite, seed=5)
    assert a == b
    rows, summary = a
    assert len(rows) == 6 and all(r["errors"] == 0 for r in rows)
    assert summary["exponents"]["planted-ld/s=1"] is not None
    path = write(tmp_path, "suite.json", suite)
    assert cli.run(["bench", "--suite", path, "--seed", "5"]) == 0
    parsed = list(csv.DictReader(io.StringIO(capsys.readouterr().out)))
    assert [int(r["n"]) for r in parsed] == [r["n"] for r in rows]


def test_bench_records_errors():
    rows, _ = bench({"runs": [{"family": "random-ksum", "sizes": [10], "params": {"m": 25}, "trials": 2}]}, seed=1)
    assert rows[0]["errors"] == 2 and rows[0]["success_rate"] is None


def test_fit_exponent():
    ns = [2**k for k in range(4, 10)]
    assert fit_exponent(ns, [3 * n**1.5 for n in ns]) == pytest.approx(1.5)
    assert fit_exponent([8], [1.0]) is None
    assert fit_exponent([8, 8], [1.0, 2.0]) is None
