import csv
import io
import json
import subprocess
import sys
from fractions import Fraction

import pytest

from graphfair.cli import main
from graphfair.core import (
    Graph,
    Instance,
    WeightProfile,
    allocation_from_dict,
    allocation_to_dict,
    dumps_instance,
    instance_from_dict,
    social_welfare,
)
from graphfair.generators import gen_homog_tight
from graphfair.oracle import max_social_welfare_exact, max_social_welfare_matching


def _write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(obj if isinstance(obj, str) else json.dumps(obj))
    return str(p)


def _run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr()


def test_solve_homog_tight(tmp_path, capsys):
    path = _write(tmp_path, "h.json", dumps_instance(gen_homog_tight(3, Fraction(1, 9))))
    code, out = _run(capsys, "solve", "--alg", "ef1-hom", "--in", path)
    rep = json.loads(out.out)
    assert code == 0 and rep["ef1"] is True
    assert Fraction(rep["welfare_ratio"]) >= Fraction(3, 4)
    inst = instance_from_dict(json.loads(open(path).read()))
    alloc = allocation_from_dict(rep["allocation"])
    assert alloc.is_complete
    assert Fraction(rep["welfare"]) == social_welfare(inst, alloc)
    assert Fraction(rep["welfare_ratio"]) == social_welfare(inst, alloc) / max_social_welfare_matching(inst)


def test_solve_edgeless_mms(tmp_path, capsys):
    inst = Instance.homogeneous_instance(Graph(4), 2, [])
    path = _write(tmp_path, "e.json", dumps_instance(inst))
    code, out = _run(capsys, "solve", "--alg", "mms-n", "--in", path, "--trace", "--float")
    rep = json.loads(out.out)
    assert code == 0
    assert rep["utilities"] == ["0", "0"] and rep["mms_ratio"] == "1"
    assert rep["trace"]["exit_reason"] == "balanced"
    assert rep["float_non_authoritative"]["welfare_ratio"] == 1.0


def test_solve_precondition_and_parse_errors(tmp_path, capsys):
    inst = Instance.homogeneous_instance(Graph(2, [(0, 1)]), 2, ["2"])
    path = _write(tmp_path, "w.json", dumps_instance(inst))
    code, out = _run(capsys, "solve", "--alg", "ef1-bin", "--in", path)
    assert code == 3 and "0 or 1" in out.err
    code, _ = _run(capsys, "solve", "--alg", "maxmin-2", "--in", _write(tmp_path, "x.json", dumps_instance(
        Instance(Graph(2, [(0, 1)]), 2, (WeightProfile([1]), WeightProfile([2]))))))
    assert code == 3
    code, _ = _run(capsys, "solve", "--alg", "ef1-het", "--in", _write(tmp_path, "bad.json", "{nope"))
    assert code == 2
    code, _ = _run(capsys, "solve", "--alg", "ef1-het", "--in", str(tmp_path / "missing.json"))
    assert code == 2
    with pytest.raises(SystemExit) as exc:
        main(["solve", "--alg", "nope", "--in", path])
    assert exc.value.code == 2


def test_solve_is_deterministic(tmp_path, capsys):
    _run(capsys, "gen", "--family", "random", "--n", "3", "--vertices", "7", "--seed", "4",
         "--out", str(tmp_path / "r.json"))
    reps = []
    for _ in range(2):
        _, out = _run(capsys, "solve", "--alg", "ef1-het", "--in", str(tmp_path / "r.json"))
        rep = json.loads(out.out)
        rep.pop("wall_time")
        reps.append(rep)
    assert reps[0] == reps[1]


def test_check(tmp_path, capsys):
    tri = Instance.homogeneous_instance(Graph(3, [(0, 1), (1, 2), (0, 2)]), 2, [1, 1, 1])
    ipath = _write(tmp_path, "t.json", dumps_instance(tri))
    apath = _write(tmp_path, "a.json", {"bundles": [[0, 1], [2]], "pool": []})
    code, out = _run(capsys, "check", "--in", ipath, "--alloc", apath, "--property", "ef1")
    assert code == 0 and json.loads(out.out)["ef1"] is True

    two = Instance.homogeneous_instance(Graph(4, [(0, 1), (2, 3)]), 2, [1, 1])
    ipath = _write(tmp_path, "two.json", dumps_instance(two))
    apath = _write(tmp_path, "all.json", {"bundles": [[0, 1, 2, 3], []], "pool": []})
    code, out = _run(capsys, "check", "--in", ipath, "--alloc", apath, "--property", "mms-ratio")
    assert json.loads(out.out)["value"] == "0"

    _, best = max_social_welfare_exact(two)
    apath = _write(tmp_path, "best.json", allocation_to_dict(best))
    code, out = _run(capsys, "check", "--in", ipath, "--alloc", apath, "--property", "welfare-ratio")
    assert json.loads(out.out)["value"] == "1"

    apath = _write(tmp_path, "short.json", {"bundles": [[0, 1], [2]], "pool": []})
    code, _ = _run(capsys, "check", "--in", ipath, "--alloc", apath, "--property", "ef1")
    assert code == 2


def test_check_accepts_solve_report(tmp_path, capsys):
    ipath = _write(tmp_path, "h.json", dumps_instance(gen_homog_tight(3, Fraction(1, 9))))
    rpath = str(tmp_path / "rep.json")
    assert main(["solve", "--alg", "ef1-hom", "--in", ipath, "--out", rpath]) == 0
    code, out = _run(capsys, "check", "--in", ipath, "--alloc", rpath, "--property", "welfare-ratio")
    assert code == 0 and json.loads(out.out)["value"] == json.loads(open(rpath).read())["welfare_ratio"]


def test_gen_writes_schema(tmp_path, capsys):
    out = tmp_path / "c.json"
    assert main(["gen", "--family", "crossing", "--out", str(out)]) == 0
    data = json.loads(out.read_text())
    assert data["n"] == 2 and data["vertices"] == 4
    assert data["weights"] == [["1", "1", "0", "0"], ["0", "0", "1", "1"]]
    code, _ = _run(capsys, "gen", "--family", "binary-tight", "--k", "3")
    assert code == 2


def _bench(capsys, *argv):
    code, out = _run(capsys, "bench", *argv)
    assert code == 0
    return list(csv.DictReader(io.StringIO(out.out)))


def test_bench_binary_ratio(capsys):
    rows = _bench(capsys, "--alg", "ef1-bin", "--trials", "100", "--n", "3", "--vertices", "7", "--binary")
    trials = [r for r in rows if r["seed"] != "summary"]
    assert len(trials) == 100 and all(r["ef1"] == "true" for r in trials)
    summary = rows[-1]
    assert summary["seed"] == "summary"
    assert Fraction(summary["welfare_ratio"]) >= Fraction(1, 3)
    assert Fraction(summary["welfare_ratio"]) == min(Fraction(r["welfare_ratio"]) for r in trials)


def test_bench_unweighted_mms_is_exact(capsys):
    rows = _bench(capsys, "--alg", "mms-n", "--trials", "30", "--n", "3", "--vertices", "8",
                  "--binary", "--homogeneous")
    assert rows[-1]["mms_ratio"] == "1"


def test_bench_sorted_and_empty(capsys):
    rows = _bench(capsys, "--alg", "ef1-het", "--alg", "ef1-2", "--trials", "3", "--seed", "5", "--float")
    keys = [(int(r["seed"]), r["algorithm"]) for r in rows if r["seed"] != "summary"]
    assert keys == sorted(keys) and "welfare_ratio_float" in rows[0]
    code, out = _run(capsys, "bench", "--trials", "0")
    assert out.out.strip() == "seed,algorithm,welfare_ratio,mms_ratio,ef1,runtime_s"


def test_module_entry_point(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "graphfair", "gen", "--family", "heavy-path", "--delta", "8"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["weights"] == [["1", "8", "1"], ["1", "8", "1"]]
