"""Molecule records: the built-in table of (b_h, r_e) pairs and a small
key-value file format for user data.

File format, one record per blank-line separated block::

    # comment
    name = N2(X1Sigma_g+)
    b_h  = 2.785 85
    r_e  = 1,097
    D    = 9.9      # optional, eV
    mu   = 7.0015   # optional, amu
    c_h  = 0.1      # optional

``:`` works as well as ``=``.  Numbers take ``.`` or ``,`` as decimal mark
and spaces (including thin and no-break spaces) as digit grouping.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Optional

from .errors import MoleculeParseError

_REQUIRED = ("name", "b_h", "r_e")
_OPTIONAL = ("D", "mu", "c_h")
_GROUPING = re.compile(r"\s+")  # \s covers no-break and thin spaces
_NUMBER = re.compile(r"[+-]?(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?")


@dataclass(frozen=True)
class MoleculeRecord:
    name: str
    b_h: float  # 1/Angstrom
    r_e: float  # Angstrom
    D: Optional[float] = None  # eV
    mu: Optional[float] = None  # amu
    c_h: Optional[float] = None

    def __post_init__(self):
        if not self.b_h > 0:
            raise ValueError(f"{self.name}: b_h must be > 0")
        if not self.r_e > 0:
            raise ValueError(f"{self.name}: r_e must be > 0")
        if self.D is not None and not self.D > 0:
            raise ValueError(f"{self.name}: D must be > 0")
        if self.mu is not None and not self.mu > 0:
            raise ValueError(f"{self.name}: mu must be > 0")
        if self.c_h is not None and not abs(self.c_h) < 1:
            raise ValueError(f"{self.name}: |c_h| must be < 1")

    @property
    def c_h_min(self) -> float:
        """Smallest c_h for which the closed-form (Case1) spectrum applies."""
        return math.exp(-self.b_h * self.r_e)

    @property
    def short_name(self) -> str:
        return self.name.split("(")[0]


# name, b_h [1/A], r_e [A], printed minimal c_h
_TABLE = [
    ("HF(X1Sigma+)", 1.94207, 0.917, "0.168 490 115"),
    ("Cl2(X1Sigma_g+)", 2.200354, 1.987, "0.012 624 657"),
    ("I2(X(0_g+))", 2.12343, 2.666, "0.003 478 812"),
    ("H2(X1Sigma_g+)", 1.61890, 0.741, "0.301 313 237"),
    ("O2(X3Sigma_g+)", 2.59103, 1.207, "0.043 832 785"),
    ("N2(X1Sigma_g+)", 2.78585, 1.097, "0,047 071 975"),
    ("CO(X1Sigma+)", 2.20481, 1.128, "0.083 156 934"),
    ("NO(X2Pi_r)", 2.71559, 1.151, "0.043 908 643"),
    ("O2+(X2Pi_g+)", 2.86987, 1.116, "0.040 649 248"),
    ("NO+(X1Sigma+)", 2.73349, 1.063, "0.054 710 486"),
    ("N2+(X2Sigma_g+)", 2.70830, 1.116, "0.048 681 178"),
]


def parse_number(text: str) -> float:
    """Parse ``0,047 071 975`` style numbers."""
    cleaned = _GROUPING.sub("", text).replace(",", ".")
    if not _NUMBER.fullmatch(cleaned):
        raise ValueError(f"not a number: {text!r}")
    return float(cleaned)


def builtin_molecules() -> list[MoleculeRecord]:
    return [MoleculeRecord(name, b_h, r_e) for name, b_h, r_e, _ in _TABLE]


def printed_c_h_min() -> dict[str, float]:
    """The minimal c_h column as printed in the reference table."""
    return {name: parse_number(text) for name, _, _, text in _TABLE}


def find_molecule(name: str, records: Iterable[MoleculeRecord] | None = None) -> MoleculeRecord:
    """Look a molecule up by full name or by the formula before the parenthesis."""
    records = list(records) if records is not None else builtin_molecules()
    for rec in records:
        if rec.name == name:
            return rec
    matches = [rec for rec in records if rec.short_name == name]
    if len(matches) == 1:
        return matches[0]
    if matches:
        raise KeyError(f"molecule name {name!r} is ambiguous")
    raise KeyError(f"unknown molecule {name!r}")


def _blocks(lines: list[str]):
    block, start = [], None
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            if block:
                yield start, block
                block = []
            continue
        if not block:
            start = lineno
        block.append((lineno, line))
    if block:
        yield start, block


def parse_molecules(text: str) -> list[MoleculeRecord]:
    records = []
    for start, block in _blocks(text.splitlines()):
        fields: dict[str, object] = {}
        for lineno, line in block:
            m = re.match(r"([A-Za-z_]+)\s*[=:]\s*(.*)$", line)
            if not m:
                raise MoleculeParseError(f"expected 'key = value', got {line!r}", lineno)
            key, value = m.group(1), m.group(2).strip()
            if key not in _REQUIRED + _OPTIONAL:
                raise MoleculeParseError(f"unknown field {key!r}", lineno)
            if key in fields:
                raise MoleculeParseError(f"duplicate field {key!r}", lineno)
            if key == "name":
                if not value:
                    raise MoleculeParseError("empty name", lineno)
                fields[key] = value
            else:
                try:
                    fields[key] = parse_number(value)
                except ValueError as exc:
                    raise MoleculeParseError(f"field {key!r}: {exc}", lineno) from None
        for key in _REQUIRED:
            if key not in fields:
                raise MoleculeParseError(f"record is missing required field {key!r}", start)
        try:
            records.append(MoleculeRecord(**fields))
        except ValueError as exc:
            raise MoleculeParseError(str(exc), start) from None
    return records


def load_molecules(path: str | Path) -> list[MoleculeRecord]:
    return parse_molecules(Path(path).read_text(encoding="utf-8"))
