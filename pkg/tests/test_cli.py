import subprocess
import sys

import pytest

from pircodes import cli, fixtures
from pircodes import pircode as pc


def run(argv, capsys):
    code = cli.main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def k6_matrix(tmp_path):
    path = tmp_path / "k6.matrix.txt"
    path.write_text(pc.export_matrix(pc.code_from_configuration(fixtures.k6_matching_configuration())))
    return path


def test_construct_product(tmp_path, capsys):
    code, out, _ = run(["construct", "product", "--s", 18, "--k", 3, "--out", tmp_path], capsys)
    assert code == 0
    assert "code: [27,18]" in out and "overhead: 1.50" in out and "plan: OK" in out
    for suffix in ("structure", "matrix", "report"):
        assert (tmp_path / f"product.{suffix}.txt").exists()
    again = pc.import_matrix((tmp_path / "product.matrix.txt").read_text())
    assert (again.m, again.s, again.k) == (27, 18, 3)


def test_construct_cyclic(tmp_path, capsys):
    code, out, _ = run(["construct", "cyclic", "--v", 15, "--base", "0,1,3,7", "--out", tmp_path], capsys)
    assert code == 0
    assert "structure: 15_4 primal" in out and "code: [30,15]" in out
    assert "locality: 4" in out and "availability: 4" in out
    assert (tmp_path / "cyclic.structure.txt").read_text().startswith("15 15\n")


def test_construct_conic_even_q(tmp_path, capsys):
    code, _, err = run(["construct", "conic", "--q", 4, "--out", tmp_path], capsys)
    assert code == 2 and "QEvenOrTooSmall" in err


def test_construct_missing_parameter(tmp_path, capsys):
    code, _, err = run(["construct", "affine", "--q", 3, "--out", tmp_path], capsys)
    assert code == 2 and "--N" in err


def test_construct_search_timeout(tmp_path, capsys):
    code, _, err = run(["construct", "configuration", "--v", 40, "--t", 6, "--b", 48, "--z", 5,
                        "--max-nodes", 50, "--out", tmp_path], capsys)
    assert code == 3 and "SearchTimeout" in err and "nodes" in err


@pytest.mark.parametrize("argv", [
    ["affine", "--N", 2, "--q", 3, "--k", 5],
    ["slab", "--N", 2, "--q", 4, "--h", 2, "--k", 5],
    ["projective", "--N", 3, "--q", 2, "--k", 4],
    ["arc", "--n", 2, "--n-prime", 1, "--k", 3],
    ["unital", "--q", 2, "--k", 5],
    ["conic", "--q", 5, "--k", 3],
    ["general", "--s", 8, "--k", 3],
    ["rbibd", "--v", 16, "--z", 4],
    ["configuration", "--v", 12, "--t", 2, "--b", 6, "--z", 4, "--side", "dual"],
    ["product", "--factors", "2,3,4"],
])
def test_every_construct_output_reverifies(argv, tmp_path, capsys):
    code, _, _ = run(["construct", *argv, "--out", tmp_path, "--stem", "x"], capsys)
    assert code == 0
    code, out, _ = run(["verify", tmp_path / "x.matrix.txt", "--oracle"], capsys)
    assert code == 0 and out.strip().endswith("certified")


def test_rbibd_not_built(tmp_path, capsys):
    code, _, err = run(["construct", "rbibd", "--v", 15, "--z", 3, "--out", tmp_path], capsys)
    assert code == 2 and "NotConstructedAtDeskScale" in err
    code, _, err = run(["construct", "rbibd", "--v", 45, "--z", 5, "--out", tmp_path], capsys)
    assert code == 2


def test_verify_examples(k6_matrix, capsys):
    code, out, _ = run(["verify", k6_matrix, "--k", 3, "--oracle"], capsys)
    assert code == 0 and "certified" in out and "NOT" not in out
    code, out, _ = run(["verify", k6_matrix, "--k", 4, "--oracle"], capsys)
    assert code == 1 and "NOT certified" in out


def test_verify_mutated_matrix(k6_matrix, capsys):
    lines = k6_matrix.read_text().splitlines()
    row = lines[1]
    c = 12  # first parity column
    lines[1] = row[:c] + ("0" if row[c] == "1" else "1") + row[c + 1:]
    k6_matrix.write_text("\n".join(lines) + "\n")
    code, _, err = run(["verify", k6_matrix], capsys)
    assert code == 1 and "SumMismatch" in err


def test_verify_missing_file(tmp_path, capsys):
    code, _, err = run(["verify", tmp_path / "nope.txt"], capsys)
    assert code == 2


def test_bounds_small(capsys):
    code, out, _ = run(["bounds", "--s-max", 12, "--k-max", 3], capsys)
    assert code == 0
    assert "(12,3) m=18" in out
    assert "ledger vs reference" in out


def test_bounds_full_is_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a.txt", tmp_path / "b.txt"
    fa, fb = tmp_path / "a.png", tmp_path / "b.png"
    assert run(["bounds", "--out", a, "--figure", fa], capsys)[0] == 0
    assert run(["bounds", "--out", b, "--figure", fb], capsys)[0] == 0
    assert a.read_bytes() == b.read_bytes()
    assert fa.read_bytes() == fb.read_bytes() and fa.read_bytes()[:4] == b"\x89PNG"
    text = a.read_text()
    assert "attributed constructions: 52/53 bold cells reproduced" in text
    assert "(12,4) attributed=19 reference=20" in text


def test_bounds_csv(tmp_path, capsys):
    report = tmp_path / "report.txt"
    code, out, err = run(["bounds", "--format", "csv", "--s-max", 10, "--k-max", 4, "--report", report], capsys)
    assert code == 0 and err == ""
    assert out.splitlines()[0] == "s,k,m,overhead,provenance"
    assert "ledger vs reference" in report.read_text()
    code, out, err = run(["bounds", "--format", "csv", "--s-max", 6, "--k-max", 3], capsys)
    assert "ledger vs reference" in err


def test_bounds_guard(capsys):
    code, _, err = run(["bounds", "--s-max", 999], capsys)
    assert code == 2 and "ResourceGuard" in err


def test_module_entry_point(tmp_path):
    res = subprocess.run([sys.executable, "-m", "pircodes.cli", "construct", "product", "--s", "4",
                          "--out", str(tmp_path)], capture_output=True, text=True)
    assert res.returncode == 0 and "code: [8,4]" in res.stdout
