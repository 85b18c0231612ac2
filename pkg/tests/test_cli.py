import subprocess
import sys

import pytest

from hcratio.cli import main


P4_EDGES = "0 1 1\n1 2 1\n2 3 1\n"
P5_EDGES = "0 1 1\n1 2 1\n2 3 1\n3 4 1\n"


@pytest.fixture
def p4(tmp_path):
    f = tmp_path / "p4.txt"
    f.write_text(P4_EDGES)
    return str(f)


@pytest.fixture
def p5(tmp_path):
    f = tmp_path / "p5.txt"
    f.write_text(P5_EDGES)
    return str(f)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_cost_text(capsys, p4, tmp_path):
    tree = tmp_path / "t.nwk"
    tree.write_text("((0,1),(2,3));\n")
    code, out, _ = run(capsys, "cost", p4, str(tree))
    assert code == 0
    assert out == ("dasgupta 8\n"
                   "total 2\n"
                   "base 2\n"
                   "ratio 1 (1.0)\n"
                   "consistent true\n")


def test_cost_records(capsys, p4, tmp_path):
    tree = tmp_path / "t.nwk"
    tree.write_text("((0,1),(2,3));\n")
    code, out, _ = run(capsys, "cost", p4, str(tree), "--records")
    assert code == 0
    assert out == ("dasgupta\t8\n"
                   "total\t2\n"
                   "base\t2\n"
                   "ratio\t1\n"
                   "ratio-decimal\t1.0\n"
                   "consistent\ttrue\n")


def test_cost_float_weights(capsys, tmp_path):
    g = tmp_path / "g.txt"
    g.write_text("3\n0 0.5 0\n0.5 0 0.25\n0 0.25 0\n")
    tree = tmp_path / "t.nwk"
    tree.write_text("((0,1),2);\n")
    code, out, _ = run(capsys, "cost", str(g), str(tree))
    assert code == 0
    assert "ratio 1.0\n" in out


def test_cost_wrong_tree_leaves(capsys, p4, tmp_path):
    tree = tmp_path / "t.nwk"
    tree.write_text("((0,1),(2,9));\n")
    code, _, err = run(capsys, "cost", p4, str(tree))
    assert code == 2
    assert err.startswith("error:")


def test_detect_perfect_and_emit(capsys, p4, tmp_path):
    emitted = tmp_path / "out.nwk"
    code, out, _ = run(capsys, "detect", p4, "--emit-tree", str(emitted))
    assert code == 0
    assert out == "perfect\n"
    assert emitted.read_text() == "((0,1),(2,3));\n"


def test_detect_not_perfect(capsys, p5):
    code, out, _ = run(capsys, "detect", p5)
    assert code == 1
    assert out == "not-perfect 0,1,2,3,4\n"


def test_detect_records(capsys, p4, p5):
    code, out, _ = run(capsys, "detect", p4, "--records")
    assert (code, out) == (0, "verdict\tperfect\n")
    code, out, _ = run(capsys, "detect", p5, "--records")
    assert code == 1
    assert out == "verdict\tnot-perfect\nfailing\t0,1,2,3,4\n"


def test_detect_epsilon_flag(capsys, tmp_path):
    g = tmp_path / "wobbly.txt"
    g.write_text("4\n0 1.0 0 0.99\n1.0 0 1.01 0\n0 1.01 0 1.0\n0.99 0 1.0 0\n")
    code, out, _ = run(capsys, "detect", str(g))
    assert code == 1
    code, out, _ = run(capsys, "--epsilon", "0.1", "detect", str(g))
    assert code == 0
    assert out == "perfect\n"


def test_approx_ok(capsys, p4):
    code, out, _ = run(capsys, "approx", p4, "--delta", "1.5")
    assert code == 0
    assert out == "ratio 1 (1.0)\nbound 13/4 (3.25)\n"


def test_approx_records_and_emit(capsys, p4, tmp_path):
    emitted = tmp_path / "a.nwk"
    code, out, _ = run(capsys, "approx", p4, "--delta", "1.5",
                       "--records", "--emit-tree", str(emitted))
    assert code == 0
    assert out == ("verdict\tok\n"
                   "ratio\t1\n"
                   "ratio-decimal\t1.0\n"
                   "bound\t13/4\n"
                   "bound-decimal\t3.25\n")
    assert emitted.read_text().endswith(";\n")


def test_approx_failed(capsys, p5):
    code, out, _ = run(capsys, "approx", p5, "--delta", "1.5")
    assert code == 1
    assert out == "failed\n"


def test_approx_bad_delta(capsys, p4):
    code, _, err = run(capsys, "approx", p4, "--delta", "0.5")
    assert code == 2
    assert err.startswith("error:")


def test_brute_text(capsys, p5):
    code, out, _ = run(capsys, "brute", p5)
    assert code == 0
    assert out == ("rho 4/3 (1.3333333333333333)\n"
                   "tree (((0,1),2),(3,4));\n"
                   "trees-searched 105\n")


def test_brute_records(capsys, p5):
    code, out, _ = run(capsys, "brute", p5, "--records")
    assert code == 0
    assert out.splitlines()[0] == "rho\t4/3"
    assert "trees-searched\t105" in out


def test_random_er_text(capsys):
    code, out, _ = run(capsys, "random", "--er", "12", "0.5",
                       "--trials", "2", "--seed", "3")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "model er n=12 p=0.5"
    assert lines[1] == "predicted-rho 1.6"
    assert lines[2] == "expected-base 137.5"
    assert lines[3] == "expectation-tree-total 220.0"
    assert lines[4].startswith("trial 0 seed 3 base ")
    assert lines[5].startswith("trial 1 seed 4 base ")
    assert lines[6].startswith("base-max-rel-dev ")
    assert lines[7].startswith("rho-mean ")


def test_random_records_layout(capsys):
    code, out, _ = run(capsys, "random", "--planted", "10", "0.8", "0.2",
                       "--trials", "3", "--seed", "11", "--records")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "# model\tplanted"
    assert lines[1] == "# n\t10"
    assert lines[2] == "# p\t0.8"
    assert lines[3] == "# q\t0.2"
    header = lines.index("trial\tseed\tbase\trho")
    rows = lines[header + 1:header + 4]
    assert [r.split("\t")[:2] for r in rows] == \
        [["0", "11"], ["1", "12"], ["2", "13"]]
    assert lines[-2].startswith("# base-max-rel-dev\t")
    assert lines[-1].startswith("# rho-mean\t")


def test_random_jobs_do_not_change_output(capsys):
    code1, out1, _ = run(capsys, "random", "--er", "60", "0.3",
                         "--trials", "8", "--seed", "5", "--jobs", "1")
    code2, out2, _ = run(capsys, "--jobs", "8", "random", "--er", "60", "0.3",
                         "--trials", "8", "--seed", "5")
    assert code1 == code2 == 0
    assert out1 == out2


def test_random_rejects_odd_planted(capsys):
    code, _, err = run(capsys, "random", "--planted", "9", "0.8", "0.2",
                       "--trials", "1", "--seed", "0")
    assert code == 2
    assert err.startswith("error:")


def test_random_rejects_zero_trials(capsys):
    code, _, err = run(capsys, "random", "--er", "10", "0.5",
                       "--trials", "0", "--seed", "0")
    assert code == 2


def test_missing_file_is_reported(capsys, tmp_path):
    code, _, err = run(capsys, "detect", str(tmp_path / "nope.txt"))
    assert code == 2
    assert err.startswith("error:")


def test_malformed_graph_is_reported(capsys, tmp_path):
    g = tmp_path / "bad.txt"
    g.write_text("0 0 1\n")  # self-loop
    code, _, err = run(capsys, "detect", str(g))
    assert code == 2
    assert err.startswith("error:")


def test_flags_accepted_on_either_side(capsys, p4, tmp_path):
    tree = tmp_path / "t.nwk"
    tree.write_text("((0,1),(2,3));\n")
    _, before, _ = run(capsys, "--records", "cost", p4, str(tree))
    _, after, _ = run(capsys, "cost", p4, str(tree), "--records")
    assert before == after


def test_no_command_is_usage_error():
    with pytest.raises(SystemExit):
        main([])


def test_installed_script_runs(p4):
    proc = subprocess.run(["hcratio", "detect", p4],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout == "perfect\n"
