import pytest

from tietz_spectra.errors import MoleculeParseError
from tietz_spectra.moldb import (MoleculeRecord, builtin_molecules, find_molecule, load_molecules,
                                 parse_molecules, parse_number, printed_c_h_min)


def test_builtin_table_matches_printed_values():
    printed = printed_c_h_min()
    records = builtin_molecules()
    assert len(records) == 11
    for rec in records:
        assert rec.c_h_min == pytest.approx(printed[rec.name], rel=1e-6)


@pytest.mark.parametrize("name, value", [("HF", 0.168490115), ("H2", 0.301313237),
                                         ("I2", 0.003478812)])
def test_named_rows(name, value):
    assert find_molecule(name).c_h_min == pytest.approx(value, rel=1e-6)


@pytest.mark.parametrize("text, value", [("0,047", 0.047), ("0.168 490 115", 0.168490115),
                                         ("1 234,5", 1234.5), ("-2e-3", -0.002),
                                         (".5", 0.5)])
def test_parse_number(text, value):
    assert parse_number(text) == value


@pytest.mark.parametrize("text", ["", "abc", "1.2.3", "1,2,3", "0x10"])
def test_parse_number_rejects(text):
    with pytest.raises(ValueError):
        parse_number(text)


GOOD = """\
# a user record
name = N2(test)
b_h  = 2,785 85
r_e  : 1.097
D    = 9.9   # eV
mu   = 7.0015
"""


def test_well_formed_file(tmp_path):
    path = tmp_path / "mol.txt"
    path.write_text(GOOD, encoding="utf-8")
    (rec,) = load_molecules(path)
    assert rec == MoleculeRecord("N2(test)", 2.78585, 1.097, D=9.9, mu=7.0015)
    assert rec.short_name == "N2"


def test_blocks_are_separate_records():
    text = GOOD + "\n\nname = X\nb_h = 1\nr_e = 2\nc_h = -0.2\n"
    first, second = parse_molecules(text)
    assert second.c_h == -0.2 and second.D is None


def _error(text):
    with pytest.raises(MoleculeParseError) as info:
        parse_molecules(text)
    return info.value


def test_missing_field_names_field_and_line():
    err = _error("\n\nname = X\nr_e = 1.0\n")
    assert "b_h" in str(err)
    assert err.lineno == 3
    assert str(err).startswith("line 3:")


def test_unknown_field():
    err = _error("name = X\nb_h = 1\nr_e = 1\ncolour = red\n")
    assert "colour" in str(err) and err.lineno == 4


def test_duplicate_field():
    err = _error("name = X\nb_h = 1\nb_h = 2\nr_e = 1\n")
    assert "duplicate" in str(err) and err.lineno == 3


def test_bad_number_and_syntax():
    assert _error("name = X\nb_h = one\nr_e = 1\n").lineno == 2
    assert _error("name = X\njust text\n").lineno == 2


def test_invariants():
    err = _error("name = X\nb_h = 1\nr_e = 1\nc_h = 1.0\n")
    assert "|c_h| must be < 1" in str(err)
    assert "b_h must be > 0" in str(_error("name = X\nb_h = 0\nr_e = 1\n"))
    with pytest.raises(ValueError):
        MoleculeRecord("X", 1.0, -1.0)


def test_find_molecule():
    assert find_molecule("CO").name == "CO(X1Sigma+)"
    assert find_molecule("NO+(X1Sigma+)").short_name == "NO+"
    with pytest.raises(KeyError, match="unknown"):
        find_molecule("XeF6")
    twins = [MoleculeRecord("A(x)", 1.0, 1.0), MoleculeRecord("A(y)", 1.0, 1.0)]
    with pytest.raises(KeyError, match="ambiguous"):
        find_molecule("A", twins)
