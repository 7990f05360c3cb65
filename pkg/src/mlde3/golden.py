"""Loaders for the versioned golden tables shipped with the package.

These are the published classification tables; the pipeline compares its
output against them and never regenerates them silently.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from typing import Dict, List, Tuple


def _read_text(name: str) -> str:
    return resources.files("mlde3.data").joinpath(name).read_text()


def _rows(name: str) -> List[Dict[str, str]]:
    return list(csv.DictReader(_read_text(name).splitlines()))


def full57_rows(denominator: int) -> List[Tuple[Fraction, ...]]:
    """(m, h1, h2, c, c_tilde) rows of the denominator-5/7 table."""
    out = []
    for r in _rows("full57.csv"):
        if int(r["den"]) == denominator:
            out.append(tuple(Fraction(r[k]) for k in ("m", "h1", "h2", "c", "c_tilde")))
    return out


def full2_rows() -> List[Tuple[Fraction, ...]]:
    """(m, h1, h2, c, c_tilde) rows of the imprimitive table."""
    return [tuple(Fraction(r[k]) for k in ("m", "h1", "h2", "c", "c_tilde"))
            for r in _rows("full2.csv")]


@dataclass(frozen=True)
class USeriesRow:
    m: int
    h1: Fraction
    h2: Fraction
    c: Fraction
    c_tilde: Fraction
    V1: str
    A1: int
    A2: int

    @property
    def k(self) -> int:
        # h2 = (31 - 2k)/16
        return (31 - self.h2.numerator) // 2

    @property
    def p(self) -> int:
        return 15 - self.k


def useries_rows() -> List[USeriesRow]:
    out = []
    for r in _rows("full3.csv"):
        out.append(USeriesRow(int(r["m"]), Fraction(r["h1"]), Fraction(r["h2"]),
                              Fraction(r["c"]), Fraction(r["c_tilde"]),
                              r["V1"], int(r["A1"]), int(r["A2"])))
    return out


def fourier_rows() -> List[Dict]:
    """Published coefficient prefixes per U-series row, exact integers."""
    data = json.loads(_read_text("fouriercoeffs.json"))
    for row in data["rows"]:
        row["h2"] = Fraction(row["h2"])
    return data["rows"]


def schellekens_rows() -> List[Tuple[int, str, int]]:
    return [(int(r["number"]), r["X1"], int(r["k"])) for r in _rows("tableS.csv")]


def glueing_k_values() -> List[int]:
    """k with a holomorphic-VOA pairing: the Schellekens-supported ones plus 0."""
    return sorted({0} | {k for _n, _x, k in schellekens_rows()})
