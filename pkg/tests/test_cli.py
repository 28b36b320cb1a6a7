import csv
import io
import json
import subprocess
import sys
from itertools import combinations

import numpy as np
import pytest

from gtlab.certify import outcome_groups
from gtlab.cli import main
from gtlab.design import gen_matrix, identity_matrix, load_matrix, stack_columns
from oracles import brute_force_matching


def run_cli(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_gen_weight(tmp_path, capsys):
    path = tmp_path / "m.txt"
    code, _, _ = run_cli(capsys, "gen", "--n", 20, "--t", 50, "--weight", 0.29289,
                         "--seed", 7, "--out", path)
    assert code == 0
    X = load_matrix(path)
    assert X.W == 6 and set(X.column_weights()) == {6}
    assert path.read_text().splitlines()[1] == "N=20 t=50 w=0.29289 W=6 seed=7"


def test_gen_auto_weight(tmp_path, capsys):
    path = tmp_path / "m.txt"
    assert run_cli(capsys, "gen", "--n", 20, "--t", 10, "--auto-weight", "2,full",
                   "--seed", 1, "--out", path)[0] == 0
    assert "w=0.2928932188" in path.read_text().splitlines()[1]


def test_gen_missing_out(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["gen", "--n", "5", "--t", "5", "--weight", "0.3"])
    assert exc.value.code == 2


def test_gen_bad_weight(tmp_path, capsys):
    code, _, err = run_cli(capsys, "gen", "--n", 5, "--t", 5, "--weight", 1.5,
                           "--out", tmp_path / "m.txt")
    assert code == 2 and "error" in err


def test_gen_needs_a_weight(tmp_path, capsys):
    assert run_cli(capsys, "gen", "--n", 5, "--t", 5, "--out", tmp_path / "m")[0] == 2


def test_simulate_exhaustive(capsys):
    code, out, _ = run_cli(capsys, "simulate", "--t", 24, "--s", 2, "--n", 20,
                           "--exhaustive", "--mode", "full", "--deterministic")
    doc = json.loads(out)
    assert code == 0
    assert doc["successes"] == doc["trials"] == 276
    assert sum(doc["stage2_histogram"].values()) == 276
    assert list(doc) == ["config", "successes", "trials", "partial_found_histogram",
                         "stage2_histogram", "empirical_rate", "mean_total_tests", "failures"]


def test_simulate_partial(capsys):
    code, out, _ = run_cli(capsys, "simulate", "--mode", "partial", "--t", 256, "--s", 5,
                           "--n", 40, "--trials", 300, "--seed", 3, "--deterministic")
    doc = json.loads(out)
    assert code == 0
    assert min(int(k) for k in doc["partial_found_histogram"]) >= 3
    assert doc["successes"] == 300


def test_simulate_rate_sets_n(capsys):
    _, out, _ = run_cli(capsys, "simulate", "--t", 1024, "--s", 2, "--rate", 0.4,
                        "--trials", 20, "--deterministic")
    assert json.loads(out)["config"]["N"] == 25


def test_simulate_zero_trials(capsys):
    code, out, _ = run_cli(capsys, "simulate", "--t", 20, "--s", 2, "--n", 10,
                           "--trials", 0, "--deterministic")
    doc = json.loads(out)
    assert code == 0
    assert doc["partial_found_histogram"] == {} and doc["stage2_histogram"] == {}


def test_simulate_deterministic_bytes(capsys, tmp_path):
    args = ["simulate", "--t", 200, "--s", 3, "--n", 30, "--trials", 50, "--seed", 9,
            "--deterministic"]
    a = run_cli(capsys, *args)[1]
    b = run_cli(capsys, *args)[1]
    assert a == b


def test_simulate_wall_time_present_without_flag(capsys):
    _, out, _ = run_cli(capsys, "simulate", "--t", 20, "--s", 2, "--n", 10, "--trials", 3)
    assert "wall_time" in json.loads(out)


def test_simulate_capacity_errors(capsys):
    assert run_cli(capsys, "simulate", "--t", 3, "--s", 5, "--n", 10)[0] == 3
    assert run_cli(capsys, "simulate", "--t", 2000, "--s", 3, "--n", 30, "--exhaustive")[0] == 3


def test_simulate_with_matrix_file(tmp_path, capsys):
    path = tmp_path / "m.txt"
    gen_matrix(20, 24, 0.29289, 11).save(path)
    code, out, _ = run_cli(capsys, "simulate", "--t", 24, "--s", 2, "--n", 20, "--matrix", path,
                           "--exhaustive", "--deterministic")
    assert code == 0 and json.loads(out)["successes"] == 276


def test_decode(tmp_path, capsys):
    path = tmp_path / "id.txt"
    identity_matrix(3).save(path)
    code, out, _ = run_cli(capsys, "decode", "--matrix", path, "--outcome", "110", "--s", 2)
    assert code == 0
    assert json.loads(out) == {"t": 3, "s": 2, "y": "110", "edges": [[1, 2]]}


def test_decode_length_mismatch(tmp_path, capsys):
    path = tmp_path / "id.txt"
    identity_matrix(3).save(path)
    assert run_cli(capsys, "decode", "--matrix", path, "--outcome", "11", "--s", 2)[0] == 2


def test_check_identity(tmp_path, capsys):
    path = tmp_path / "id.txt"
    identity_matrix(6).save(path)
    code, out, _ = run_cli(capsys, "check", "--matrix", path, "--s", 2, "--L", 2,
                           "--k-set", "0,1")
    assert code == 0 and json.loads(out)["is_good"] is True


def test_check_duplicates(tmp_path, capsys):
    path = tmp_path / "dup.txt"
    stack_columns([[1, 0, 1, 0]] * 6).save(path)
    code, out, _ = run_cli(capsys, "check", "--matrix", path, "--s", 2, "--L", 3,
                           "--k-set", "0")
    doc = json.loads(out)
    assert code == 1
    assert doc["witness"]["k"] == 0 and len(doc["witness"]["edges"]) == 3
    assert doc["witness"]["outcome"] == "1010"


def test_check_seed42_matches_recheck(tmp_path, capsys):
    path = tmp_path / "m.txt"
    X = gen_matrix(18, 20, 0.29289, 42)
    X.save(path)
    code, _, _ = run_cli(capsys, "check", "--matrix", path, "--s", 2, "--L", 6,
                         "--k-set", "0,1")
    bad = False
    for edges in outcome_groups(X, 2).values():
        degrees = np.bincount(np.array(edges).ravel(), minlength=20)
        bad |= degrees.max() >= 6 or brute_force_matching(edges) >= 6
    assert code == (1 if bad else 0)


def test_check_parse_failure(tmp_path, capsys):
    path = tmp_path / "junk.txt"
    path.write_text("not a matrix\n")
    assert run_cli(capsys, "check", "--matrix", path, "--s", 2, "--L", 2, "--k-set", "0")[0] == 2
    assert run_cli(capsys, "check", "--matrix", tmp_path / "missing", "--s", 2, "--L", 2,
                   "--k-set", "0")[0] == 2


def _rows(text):
    body = text.split("\n\n")[0]
    return list(csv.DictReader(io.StringIO(body)))


def test_rates_table1(capsys):
    code, out, _ = run_cli(capsys, "rates", "--s-range", "3..6", "--compare-table1")
    assert code == 0
    values = {int(r["s"]): float(r["value"]) for r in _rows(out)}
    for s, ref in {3: 0.3219, 4: 0.199, 5: 0.145, 6: 0.114}.items():
        assert abs(values[s] - ref) < 5e-4
    block = out.split("\n\n")[1].splitlines()
    assert block[0] == "table1,s=3,s=4,s=5,s=6"
    assert block[1] == "old,0.199,0.145,0.114,0.094"
    assert block[3].startswith("new_computed,0.3219,")


def test_rates_partial(capsys):
    code, out, _ = run_cli(capsys, "rates", "--mode", "partial", "--s-range", "2..8")
    values = {int(r["s"]): float(r["value"]) for r in _rows(out)}
    assert code == 0 and sorted(values) == list(range(2, 9))
    assert all(v >= 1 / s - 1e-4 for s, v in values.items())


def test_rates_s2(capsys):
    _, out, _ = run_cli(capsys, "rates", "--s-range", "2..2")
    rows = _rows(out)
    assert [r["k"] for r in rows] == ["0", "1"]
    assert rows[1]["R2_k"] == "inf"
    assert abs(float(rows[0]["value"]) - 0.5) < 1e-3


def test_rates_bad_range(capsys):
    assert run_cli(capsys, "rates", "--s-range", "6..3")[0] == 2


def test_module_entry_point(tmp_path):
    path = tmp_path / "m.txt"
    proc = subprocess.run([sys.executable, "-m", "gtlab", "gen", "--n", "6", "--t", "4",
                           "--weight", "0.5", "--out", str(path)], capture_output=True)
    assert proc.returncode == 0 and load_matrix(path).W == 3
