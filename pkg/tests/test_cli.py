import csv
import io
import json

import numpy as np
import pytest

from tietz_spectra.cli import DATA_ENV, EXIT_OK, EXIT_USAGE, EXIT_VERIFY, EXIT_WARN, main
from tietz_spectra.model import PotentialParams
from tietz_spectra.spectra import transcendental_case2_levels

NAT = ["--D", "10", "--r-e", "2", "--b-h", "1"]


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_classify_molecule(capsys):
    code, out, _ = run(capsys, "classify", "--molecule", "H2", "--c-h", "0.5",
                       "--D", "4.7", "--mu", "0.504")
    assert code == EXIT_OK
    (row,) = rows(out)
    assert row["regime"] == "Case1"
    assert float(row["c_h_min"]) == pytest.approx(0.301313237, rel=1e-6)
    assert float(row["r0"]) > 0


def test_classify_regimes(capsys):
    for c, kind in (("0", "Morse"), ("0.05", "Case2"), ("-0.3", "Case3")):
        code, out, _ = run(capsys, "classify", *NAT, "--c-h", c)
        assert code == EXIT_OK and rows(out)[0]["regime"] == kind


def test_bad_c_h(capsys):
    code, _, err = run(capsys, "classify", *NAT, "--c-h", "1.2")
    assert code == EXIT_USAGE
    assert "|c_h| must be < 1" in err


def test_missing_parameters(capsys):
    code, _, err = run(capsys, "levels", "--D", "10", "--c-h", "0.5")
    assert code == EXIT_USAGE and "--b-h" in err
    code, _, err = run(capsys, "levels", "--units", "molecular", *NAT, "--c-h", "0.5")
    assert code == EXIT_USAGE and "--mu" in err


def test_argparse_usage_exit():
    with pytest.raises(SystemExit) as info:
        main(["levels", "--format", "xml"])
    assert info.value.code == EXIT_USAGE


def test_morse_levels(capsys):
    code, out, _ = run(capsys, "levels", "--D", "25", "--r-e", "10", "--b-h", "1", "--c-h", "0")
    assert code == EXIT_OK
    table = rows(out)
    assert float(table[0]["energy"]) == 4.75
    assert [r["method"] for r in table] == ["morse"] * 5


def test_case2_levels_match_library(capsys):
    code, out, _ = run(capsys, "levels", *NAT, "--c-h", "0.05")
    assert code == EXIT_OK
    expected = transcendental_case2_levels(PotentialParams.natural(10.0, 2.0, 1.0, 0.05))
    got = [float(r["energy"]) for r in rows(out)]
    assert got == pytest.approx([x.energy for x in expected], rel=1e-11)


def test_levels_single_index_and_bound(capsys):
    code, out, _ = run(capsys, "levels", *NAT, "--c-h", "0.5", "--l", "1", "--n-r", "1")
    assert code == EXIT_OK
    (row,) = rows(out)
    assert row["n_r"] == "1" and row["l"] == "1"
    code, _, err = run(capsys, "levels", *NAT, "--c-h", "0.05", "--n-r", "9")
    assert code == EXIT_USAGE and "n_r,max" in err


def test_s_wave_notice(capsys):
    code, out, err = run(capsys, "levels", *NAT, "--c-h", "-0.3", "--l", "2")
    assert code == EXIT_OK
    assert "s-waves only" in err
    assert {r["l"] for r in rows(out)} == {"0"}


def test_potential_scan(capsys):
    code, out, _ = run(capsys, "potential", *NAT, "--c-h", "0.5", "--r-start", "2",
                       "--r-stop", "40", "--samples", "50")
    assert code == EXIT_OK
    table = rows(out)
    assert len(table) == 50
    assert float(table[0]["V"]) == pytest.approx(0.0, abs=1e-12)
    assert abs(float(table[-1]["V"]) - 10.0) <= 0.01 * 10.0


def test_potential_rejects_inside_r0(capsys):
    code, _, err = run(capsys, "potential", *NAT, "--c-h", "0.5", "--r-start", "0.5")
    assert code == EXIT_USAGE and "r0" in err
    code, _, _ = run(capsys, "potential", *NAT, "--c-h", "0.5", "--r-start", "5", "--r-stop", "3")
    assert code == EXIT_USAGE


# Morse chi does not vanish at r = 0 unless beta r_e is large
MORSE = ["--D", "25", "--r-e", "10", "--b-h", "1"]


@pytest.mark.parametrize("base, c, n", [(NAT, "0.5", 1), (NAT, "0.05", 2), (NAT, "-0.3", 0),
                                        (MORSE, "0", 3)])
def test_wavefunction(capsys, base, c, n):
    code, out, _ = run(capsys, "wavefunction", *base, "--c-h", c, "--n-r", str(n),
                       "--grid", "2000")
    assert code == EXIT_OK
    chi = np.array([float(r["chi"]) for r in rows(out)])
    peak = np.max(np.abs(chi))
    keep = chi[np.abs(chi) > 1e-6 * peak]
    assert np.count_nonzero(keep[:-1] * keep[1:] < 0) == n
    assert abs(chi[0]) <= 1e-8 * peak and abs(chi[-1]) <= 1e-8 * peak


def test_verify_pass(capsys):
    code, out, _ = run(capsys, "verify", *NAT, "--c-h", "0.5")
    assert code == EXIT_OK
    assert {r["status"] for r in rows(out)} == {"pass"}


def test_verify_exact_centrifugal_is_informational(capsys):
    code, out, _ = run(capsys, "verify", *NAT, "--c-h", "0.5", "--l", "2", "--centrifugal", "exact")
    assert code == EXIT_OK
    table = rows(out)
    assert {r["status"] for r in table} == {"info"}
    assert all(r["tol"] == "" for r in table)


def test_verify_failure_exit(capsys):
    # the oracle agrees to ~1e-11, so a tolerance of 1e-14 must fail
    code, out, _ = run(capsys, "verify", *NAT, "--c-h", "0.5", "--tol", "1e-14")
    assert code == EXIT_VERIFY
    assert "fail" in {r["status"] for r in rows(out)}


def test_verify_coarse_grid_warns(capsys):
    code, _, err = run(capsys, "verify", *NAT, "--c-h", "0.5", "--grid", "1001")
    assert code == EXIT_WARN
    assert "not converged" in err


def test_molecules_listing(capsys):
    code, out, _ = run(capsys, "molecules")
    assert code == EXIT_OK
    table = rows(out)
    assert len(table) == 11
    for r in table:
        assert float(r["c_h_min"]) == pytest.approx(float(r["c_h_min_printed"]), rel=1e-6)


def test_molecule_file_and_env(capsys, tmp_path, monkeypatch):
    path = tmp_path / "mol.txt"
    path.write_text("name = Toy(X)\nb_h = 1\nr_e = 2\nD = 10\nmu = 1\n", encoding="utf-8")
    code, out, _ = run(capsys, "molecules", "--file", str(path))
    assert code == EXIT_OK and rows(out)[-1]["name"] == "Toy(X)"
    monkeypatch.setenv(DATA_ENV, str(path))
    code, out, _ = run(capsys, "classify", "--molecule", "Toy", "--c-h", "0.5")
    assert code == EXIT_OK
    assert float(rows(out)[0]["c_h_min"]) == pytest.approx(np.exp(-2.0), rel=1e-11)


def test_bad_molecule_file(capsys, tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("name = Toy\nr_e = 2\n", encoding="utf-8")
    code, _, err = run(capsys, "molecules", "--file", str(path))
    assert code == EXIT_USAGE
    assert "line 1" in err and "b_h" in err
    code, _, err = run(capsys, "molecules", "--file", str(tmp_path / "absent.txt"))
    assert code == EXIT_USAGE and "cannot read" in err


def test_unknown_molecule(capsys):
    code, _, err = run(capsys, "classify", "--molecule", "XeF6", "--c-h", "0.5")
    assert code == EXIT_USAGE and "unknown molecule" in err


def test_csv_and_json_agree(capsys, tmp_path):
    argv = ["levels", *NAT, "--c-h", "0.5", "--l", "1"]
    _, out_csv, _ = run(capsys, *argv)
    target = tmp_path / "levels.json"
    code, out, _ = run(capsys, *argv, "--format", "json", "--out", str(target))
    assert code == EXIT_OK and out == ""
    doc = json.loads(target.read_text())
    assert doc["regime"]["kind"] == "Case1"
    assert doc["params"]["c_h"] == 0.5
    table = rows(out_csv)
    assert len(table) == len(doc["results"])
    for a, b in zip(table, doc["results"]):
        assert float(a["energy"]) == b["energy"]
        assert int(a["n_r"]) == b["n_r"]
