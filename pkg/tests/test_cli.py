import csv
import io
import subprocess
import sys

import pytest

from triqmc.cli import main, read_config


def run(args, capsys):
    code = main(args)
    out, err = capsys.readouterr()
    return code, out, err


def rows_of(text):
    return list(csv.reader(io.StringIO(text)))


def test_points_csv(capsys):
    code, out, _ = run(["points", "--n-points", "4"], capsys)
    rows = rows_of(out)
    assert code == 0
    assert rows[0] == ["h", "x", "y", "nu"]
    assert [float(v) for v in rows[3][1:3]] == pytest.approx([2 / 3, 1 / 6])
    assert [r[3] for r in rows[1:]] == ["0", "1", "1", "1"]


def test_points_in_other_triangle_and_file(tmp_path, capsys):
    out = tmp_path / "p.csv"
    code, _, _ = run(["--triangle", "1,1,3,1,1,3", "points", "--n-points", "1", "--out", str(out)], capsys)
    assert code == 0
    assert rows_of(out.read_text())[1][1:3] == ["1.6666666666666667", "1.6666666666666667"]


def test_quality_csv(capsys):
    code, out, _ = run(["quality", "--gen", "basu-owen", "--m-range", "1..4"], capsys)
    rows = rows_of(out)
    assert code == 0
    assert rows[0] == ["m", "n", "mu1_min", "v_min", "t", "bound_holds"]
    assert [r[3] for r in rows[1:]] == ["1", "2", "2", "3"]


def test_walsh_decay_csv(capsys):
    code, out, err = run(["walsh-decay", "--function", "poly:x", "--n", "1"], capsys)
    rows = rows_of(out)
    assert code == 0
    assert rows[0] == ["K_encoding", "v_of_K", "coeff", "bound", "ratio"]
    assert rows[1][:2] == ["10", "1"]
    assert float(rows[1][2]) == pytest.approx(1 / 6)
    assert "violations=0" in err


def test_walsh_decay_level_cap(capsys):
    code, _, err = run(["walsh-decay", "--n", "11"], capsys)
    assert code == 2 and "--allow-large" in err


def test_walsh_decay_violation_exit_code(capsys):
    # a deliberately tiny norm bound makes the check fail
    code, _, _ = run(["walsh-decay", "--function", "exp-sum", "--n", "2", "--norm", "1e-6"], capsys)
    assert code == 1


def test_converge_csv_and_check(capsys):
    code, out, err = run(["converge", "--function", "cos-diff", "--gen", "pascal", "--check"], capsys)
    rows = rows_of(out)
    assert code == 0
    assert rows[0] == ["m", "N", "qmc", "exact", "abs_error", "bound_m2_over_2m"]
    assert [int(r[1]) for r in rows[1:]] == [2**m for m in range(6, 17)]
    assert "fitted alpha" in err


def test_converge_non_powers(capsys):
    code, out, _ = run(["converge", "--m-min", "3", "--m-max", "5", "--non-powers"], capsys)
    Ns = [int(r[1]) for r in rows_of(out)[1:]]
    assert code == 0
    assert Ns == [3, 5, 8, 11, 16, 21, 23, 32, 41]


def test_verify_subset(tmp_path, capsys):
    out = tmp_path / "v.csv"
    code, text, _ = run(["verify", "--checks", "2,4,9", "--out", str(out)], capsys)
    assert code == 0
    assert text.count("[PASS]") == 3
    assert rows_of(out.read_text())[0] == ["number", "name", "passed", "seconds", "detail"]


def test_verify_failure_gives_nonzero_exit(capsys):
    code, text, _ = run(["verify", "--checks", "11"], capsys)
    assert code == 1 and "[FAIL] 11" in text


def test_config_file_and_override(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# defaults\ngen = pascal\nm-range = 1..3\n")
    code, out, _ = run(["quality", "--config", str(cfg)], capsys)
    assert code == 0 and len(rows_of(out)) == 4
    assert rows_of(out)[1][4] == "0"
    code, out, _ = run(["quality", "--config", str(cfg), "--m-range", "1..2"], capsys)
    assert len(rows_of(out)) == 3


def test_config_errors(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("colour = blue\n")
    code, _, err = run(["quality", "--config", str(cfg)], capsys)
    assert code == 2 and "colour" in err
    cfg.write_text("no equals sign\n")
    with pytest.raises(ValueError):
        read_config(cfg)


def test_bad_generator_is_reported(capsys):
    code, _, err = run(["points", "--gen", "sobol"], capsys)
    assert code == 2 and "unknown generator" in err


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "triqmc", "points", "--n-points", "2"], capture_output=True, text=True, check=False
    )
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[0] == "h,x,y,nu"
