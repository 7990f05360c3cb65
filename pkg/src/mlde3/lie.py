"""Simple Lie algebra data: dimensions, highest-root decompositions, the
weight-2 graded dimension of affine VOAs at positive integer level, and the
finite Levi-decomposition searches used in the quadratic-family case split.

Root systems are explicit integer/half-integer coordinate vectors, so the
theta-decomposition count N_G can be brute forced and checked against the
centralizer half-formula N_G = (dim G - dim C_G(S) - 3)/2.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Dict, FrozenSet, List, Optional, Sequence, Set, Tuple

_FAMILIES = ("A", "B", "C", "D", "E6", "E7", "E8", "F4", "G2")
_MIN_RANK = {"A": 1, "B": 2, "C": 3, "D": 4}
_EXCEPTIONAL_RANK = {"E6": 6, "E7": 7, "E8": 8, "F4": 4, "G2": 2}
_EXCEPTIONAL_DIM = {"E6": 78, "E7": 133, "E8": 248, "F4": 52, "G2": 14}


@dataclass(frozen=True)
class SimpleType:
    family: str
    rank: int

    def __post_init__(self):
        if self.family not in _FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        if self.family in _EXCEPTIONAL_RANK:
            if self.rank != _EXCEPTIONAL_RANK[self.family]:
                raise ValueError(f"{self.family} has rank {_EXCEPTIONAL_RANK[self.family]}")
        elif self.rank < _MIN_RANK[self.family]:
            raise ValueError(
                f"{self.family}_{self.rank} inadmissible (needs rank >= {_MIN_RANK[self.family]})")

    def __str__(self):
        if self.family in _EXCEPTIONAL_RANK:
            return self.family
        return f"{self.family}{self.rank}"


def dim_rank(t: SimpleType) -> Tuple[int, int]:
    """(dimension, rank) by the closed forms of the dimension table."""
    l = t.rank
    if t.family == "A":
        return l * l + 2 * l, l
    if t.family in ("B", "C"):
        return 2 * l * l + l, l
    if t.family == "D":
        return 2 * l * l - l, l
    return _EXCEPTIONAL_DIM[t.family], l


# -- root systems ------------------------------------------------------------

Vector = Tuple[Fraction, ...]


def _v(*xs) -> Vector:
    return tuple(Fraction(x) for x in xs)


def _e(i: int, n: int) -> Vector:
    return tuple(Fraction(1 if j == i else 0) for j in range(n))


def _add(a: Vector, b: Vector) -> Vector:
    return tuple(x + y for x, y in zip(a, b))


def _neg(a: Vector) -> Vector:
    return tuple(-x for x in a)


def _all_roots(t: SimpleType) -> List[Vector]:
    l = t.rank
    fam = t.family
    roots: List[Vector] = []
    if fam == "A":
        n = l + 1
        for i in range(n):
            for j in range(n):
                if i != j:
                    roots.append(_add(_e(i, n), _neg(_e(j, n))))
    elif fam in ("B", "C", "D"):
        for i in range(l):
            for j in range(i + 1, l):
                for si in (1, -1):
                    for sj in (1, -1):
                        roots.append(tuple(
                            Fraction(si if k == i else (sj if k == j else 0))
                            for k in range(l)))
        if fam == "B":
            for i in range(l):
                roots.append(_e(i, l))
                roots.append(_neg(_e(i, l)))
        elif fam == "C":
            for i in range(l):
                roots.append(tuple(Fraction(2 if k == i else 0) for k in range(l)))
                roots.append(tuple(Fraction(-2 if k == i else 0) for k in range(l)))
    elif fam == "G2":
        base = []
        for (i, j) in ((0, 1), (1, 2), (0, 2)):
            base.append(_add(_e(i, 3), _neg(_e(j, 3))))  # short
        base.append(_v(-1, -1, 2))
        base.append(_v(-1, 2, -1))
        base.append(_v(2, -1, -1))
        roots = base + [_neg(r) for r in base]
    elif fam == "F4":
        for i in range(4):
            roots.append(_e(i, 4))
            roots.append(_neg(_e(i, 4)))
        for i in range(4):
            for j in range(i + 1, 4):
                for si in (1, -1):
                    for sj in (1, -1):
                        roots.append(tuple(
                            Fraction(si if k == i else (sj if k == j else 0))
                            for k in range(4)))
        for signs in itertools.product((1, -1), repeat=4):
            roots.append(tuple(Fraction(s, 2) for s in signs))
    elif fam == "E8":
        for i in range(8):
            for j in range(i + 1, 8):
                for si in (1, -1):
                    for sj in (1, -1):
                        roots.append(tuple(
                            Fraction(si if k == i else (sj if k == j else 0))
                            for k in range(8)))
        for signs in itertools.product((1, -1), repeat=8):
            if signs.count(-1) % 2 == 0:
                roots.append(tuple(Fraction(s, 2) for s in signs))
    elif fam == "E7":
        # E8 roots orthogonal to e7 + e8
        anchor = _add(_e(6, 8), _e(7, 8))
        roots = [r for r in _all_roots(SimpleType("E8", 8))
                 if sum(a * b for a, b in zip(r, anchor)) == 0]
    elif fam == "E6":
        # E7 roots orthogonal to e6 - e7
        anchor = _add(_e(5, 8), _neg(_e(6, 8)))
        roots = [r for r in _all_roots(SimpleType("E7", 7))
                 if sum(a * b for a, b in zip(r, anchor)) == 0]
    else:
        raise ValueError(fam)
    return roots


@dataclass(frozen=True)
class RootSystem:
    type: SimpleType
    positive_roots: Tuple[Vector, ...]
    highest_root: Vector

    def __post_init__(self):
        dim, rank = dim_rank(self.type)
        assert 2 * len(self.positive_roots) == dim - rank, \
            f"{self.type}: {len(self.positive_roots)} positive roots vs dim {dim}"


@lru_cache(maxsize=64)
def root_system(t: SimpleType) -> RootSystem:
    roots = _all_roots(t)
    rootset = set(roots)
    assert len(rootset) == len(roots)
    # generic positivity functional with ternary weights avoids zero sums
    dim = len(roots[0])
    weights = [Fraction(3 ** i) for i in range(dim)]
    def height(r: Vector) -> Fraction:
        return sum(w * x for w, x in zip(weights, r))
    positive = tuple(sorted((r for r in roots if height(r) > 0), key=height))
    assert 2 * len(positive) == len(roots)
    # highest root: the unique positive root theta with theta + beta never a root
    candidates = [r for r in positive
                  if all(_add(r, b) not in rootset for b in positive)]
    assert len(candidates) == 1, f"{t}: highest root not unique: {candidates}"
    return RootSystem(t, positive, candidates[0])


def theta_count_bruteforce(t: SimpleType) -> int:
    """Number of positive roots gamma with theta - gamma also a positive root."""
    rs = root_system(t)
    positive = set(rs.positive_roots)
    theta = rs.highest_root
    return sum(1 for g in positive
               if tuple(a - b for a, b in zip(theta, g)) in positive)


# centralizer of the highest-root sl2, from the explicit root systems
def _centralizer_dim(t: SimpleType) -> int:
    fam, l = t.family, t.rank
    def d(tt: str, r: int) -> int:
        return dim_rank(SimpleType(tt, r))[0] if r >= _MIN_RANK.get(tt, 0) else 0
    if fam == "A":
        return 0 if l == 1 else (l - 1) ** 2          # A_{l-2} + C
    if fam == "B":
        return 3 + (d("B", l - 2) if l >= 4 else (3 if l == 3 else 0))  # A1 + B_{l-2}
    if fam == "C":
        return d("C", l - 1) if l >= 4 else (10 if l == 3 else 0)       # C_{l-1}
    if fam == "D":
        base = {4: 6, 5: 15}.get(l)                    # D2 = A1+A1, D3 = A3
        return 3 + (base if base is not None else d("D", l - 2))
    return {"G2": 3, "F4": 21, "E6": 35, "E7": 66, "E8": 133}[fam]


def theta_count(t: SimpleType) -> int:
    """N_G computed by brute force and by (dim G - dim C_G(S) - 3)/2.

    The two routes are independent (explicit root pairs versus centralizer
    dimensions); disagreement raises.
    """
    brute = theta_count_bruteforce(t)
    dim, _ = dim_rank(t)
    half = Fraction(dim - _centralizer_dim(t) - 3, 2)
    if brute != half:
        raise ArithmeticError(
            f"theta decomposition count mismatch for {t}: brute {brute}, "
            f"half-formula {half}")
    return brute


def dim_weight2(t: SimpleType, level: int) -> int:
    """Graded dimension at conformal weight 2 of the simple affine VOA.

    The universal space has dim G + C(dim G + 1, 2) at weight 2; the radical,
    generated in weight level+1, removes 1 + N_G states exactly at level 1.
    """
    if level < 1:
        raise ValueError("level must be a positive integer")
    dim, _ = dim_rank(t)
    total = dim + comb(dim + 1, 2)
    if level == 1:
        total -= 1 + theta_count(t)
    return total


# -- Levi decomposition search ------------------------------------------------

def _simple_types_up_to(max_dim: int) -> List[Tuple[int, int, SimpleType]]:
    """(dim, rank, type) for every admissible simple type with dim <= max_dim."""
    out = []
    for fam in ("A", "B", "C", "D"):
        r = _MIN_RANK[fam]
        while True:
            t = SimpleType(fam, r)
            d, _ = dim_rank(t)
            if d > max_dim:
                break
            out.append((d, r, t))
            r += 1
    for fam, r in _EXCEPTIONAL_RANK.items():
        t = SimpleType(fam, r)
        d, _ = dim_rank(t)
        if d <= max_dim:
            out.append((d, r, t))
    out.sort(key=lambda x: (-x[0], x[2].family))
    return out


@dataclass(frozen=True)
class LeviDecomposition:
    abelian_dim: int
    components: Tuple[SimpleType, ...]  # sorted by nonincreasing dimension

    @property
    def total_dim(self) -> int:
        return self.abelian_dim + sum(dim_rank(t)[0] for t in self.components)

    @property
    def total_rank(self) -> int:
        return self.abelian_dim + sum(t.rank for t in self.components)

    def __str__(self):
        parts = [str(t) for t in self.components]
        if self.abelian_dim:
            parts.append(f"C^{self.abelian_dim}")
        return " + ".join(parts) if parts else "0"


def levi_search(target_dim: int, total_rank: Optional[int] = None,
                max_rank: Optional[int] = None, allow_abelian: bool = True,
                forbidden: Sequence[SimpleType] = (),
                dim_cap: int = 10 ** 4) -> List[LeviDecomposition]:
    """All reductive decompositions with the prescribed total dimension.

    Enumerates multisets of simple components by nonincreasing dimension plus
    an abelian summand, honoring optional exact/maximal rank constraints.
    """
    if target_dim > dim_cap:
        raise ValueError(f"target dimension {target_dim} exceeds cap {dim_cap}")
    forbidden_set = set(forbidden)
    types = [(d, r, t) for d, r, t in _simple_types_up_to(target_dim)
             if t not in forbidden_set]
    results: List[LeviDecomposition] = []

    def recurse(start: int, remaining: int, rank_used: int, chosen: List[SimpleType]):
        if max_rank is not None and rank_used > max_rank:
            return
        if total_rank is not None and rank_used > total_rank:
            return
        if remaining == 0:
            _emit(0, rank_used, chosen)
            return
        if allow_abelian and remaining > 0:
            # remaining dimension absorbed by an abelian summand of equal rank
            _emit(remaining, rank_used + remaining, chosen)
        for idx in range(start, len(types)):
            d, r, t = types[idx]
            if d > remaining:
                continue
            chosen.append(t)
            recurse(idx, remaining - d, rank_used + r, chosen)
            chosen.pop()

    def _emit(abelian: int, rank_total: int, chosen: List[SimpleType]):
        if total_rank is not None and rank_total != total_rank:
            return
        if max_rank is not None and rank_total > max_rank:
            return
        results.append(LeviDecomposition(abelian, tuple(chosen)))

    recurse(0, target_dim, 0, [])
    uniq = sorted(set(results), key=lambda d: (d.abelian_dim, tuple(str(c) for c in d.components)))
    return uniq


def dimension_table_markdown() -> str:
    """The rank/dimension reference table as markdown, a self-check artifact."""
    lines = ["| type | " + " | ".join(str(r) for r in range(1, 11)) + " | formula |",
             "|------|" + "----|" * 10 + "---------|"]
    forms = {"A": "l^2+2l", "B": "2l^2+l", "C": "2l^2+l", "D": "2l^2-l"}
    for fam in ("A", "B", "C", "D"):
        cells = []
        for r in range(1, 11):
            try:
                cells.append(str(dim_rank(SimpleType(fam, r))[0]))
            except ValueError:
                cells.append("")
        lines.append(f"| {fam}_l | " + " | ".join(cells) + f" | {forms[fam]} |")
    for fam in ("G2", "F4", "E6", "E7", "E8"):
        t = SimpleType(fam, _EXCEPTIONAL_RANK[fam])
        cells = ["" for _ in range(10)]
        cells[t.rank - 1] = str(dim_rank(t)[0])
        lines.append(f"| {fam} | " + " | ".join(cells) + " | |")
    return "\n".join(lines)
