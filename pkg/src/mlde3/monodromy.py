"""Admissible T-matrix exponent triples and candidate weight pairs.

Pure data generation transcribing the finite-monodromy classification: the
imprimitive triples come from induced characters indexed by even divisors
n | 24 with k coprime to n, the primitive ones are a fixed list of twelve.
Every triple satisfies the determinant condition r0 + r1 + r2 = 1/2 mod 1
and has pairwise distinct entries; both are asserted at construction.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, FrozenSet, List, Tuple


@dataclass(frozen=True)
class ExponentTriple:
    exponents: Tuple[Fraction, Fraction, Fraction]  # in [0, 1), sorted
    tag: str  # "imprimitive(n=..,k=..)" or "primitive(p=..,r=..)"

    def __post_init__(self):
        r = self.exponents
        assert all(0 <= t < 1 for t in r)
        assert len(set(r)) == 3, f"repeated exponents in {r}"
        total = sum(r)
        assert (total - Fraction(1, 2)).denominator == 1, \
            f"det rho(T) != -1 for {r}"

    def weight_pairs(self) -> List[Tuple[Fraction, Fraction]]:
        """The three (h1, h2) mod 1 pairs, one per choice of the vacuum slot."""
        out = []
        r = self.exponents
        for i in range(3):
            others = [r[j] for j in range(3) if j != i]
            pair = sorted(((t - r[i]) % 1 for t in others), reverse=True)
            out.append((pair[0], pair[1]))
        return out


def _mk(vals, tag) -> ExponentTriple:
    return ExponentTriple(tuple(sorted(Fraction(v) % 1 for v in vals)), tag)


def imprimitive_triples() -> List[ExponentTriple]:
    """Triples {k/n, -k/2n, (n-k)/2n} mod 1 for even n | 24, gcd(k, n) = 1."""
    from math import gcd
    seen = {}
    for n in (2, 4, 6, 8, 12, 24):
        for k in range(1, n + 1):
            if gcd(k, n) != 1:
                continue
            tri = _mk([Fraction(k, n), Fraction(-k, 2 * n), Fraction(n - k, 2 * n)],
                      f"imprimitive(n={n},k={k})")
            seen.setdefault(tri.exponents, tri)
    return list(seen.values())


# The twelve primitive triples, L_2(p) x Z/r with (p, r) in {5,7} x {2,6}.
_PRIMITIVE_TABLE = [
    ((5, 2), [("1/2", "3/10", "7/10"), ("1/2", "1/10", "9/10")]),
    ((5, 6), [("1/6", "11/30", "29/30"), ("1/6", "17/30", "23/30"),
              ("5/6", "1/30", "19/30"), ("5/6", "7/30", "13/30")]),
    ((7, 2), [("1/14", "9/14", "11/14"), ("3/14", "5/14", "13/14")]),
    ((7, 6), [("13/42", "19/42", "31/42"), ("25/42", "37/42", "1/42"),
              ("41/42", "5/42", "17/42"), ("11/42", "23/42", "29/42")]),
]


def primitive_triples() -> List[ExponentTriple]:
    out = []
    for (p, r), triples in _PRIMITIVE_TABLE:
        for vals in triples:
            out.append(_mk(list(vals), f"primitive(p={p},r={r})"))
    assert len(out) == 12
    return out


def candidate_pairs(denominator_class: str):
    """Admissible (h1, h2) mod 1 pairs, h1 >= h2.

    den5 returns the 6 distinct pairs {u/5, v/5}; den7 returns the multiset
    with each of its 6 admissible pairs 3 times; imprimitive returns the
    distinct pairs from the three induced families.
    """
    if denominator_class in ("den5", "den7"):
        p = 5 if denominator_class == "den5" else 7
        pairs = []
        for tri in primitive_triples():
            if any(t.denominator % p == 0 for t in tri.exponents):
                pairs.extend(tri.weight_pairs())
        if denominator_class == "den5":
            return sorted(set(pairs), reverse=True)
        return sorted(pairs, reverse=True)

    if denominator_class == "imprimitive":
        pairs = set()
        for tri in imprimitive_triples():
            pairs.update(tri.weight_pairs())
        return sorted(pairs, reverse=True)

    raise ValueError(f"unknown denominator class {denominator_class!r}")


def _reduced_den(x: Fraction) -> int:
    return x.denominator


def admissible_pair_mod1(h1: Fraction, h2: Fraction, denominator_class: str) -> bool:
    """Denominator-level admissibility of an (h1, h2) pair (not mod-1 reduced).

    den5/den7: both denominators exactly the prime, distinct residues, pair
    among candidate_pairs.  imprimitive: either one weight is a half-integer
    and the other has denominator 4, 8 or 16, or both denominators are equal
    and in {4, 8, 16}; plus pairwise distinctness of h1, h2, 0 mod 1.
    """
    d1, d2 = h1.denominator, h2.denominator
    if d1 == 1 or d2 == 1 or (h1 - h2).denominator == 1:
        return False
    if denominator_class in ("den5", "den7"):
        p = 5 if denominator_class == "den5" else 7
        if d1 != p or d2 != p:
            return False
        pair = tuple(sorted((h1 % 1, h2 % 1), reverse=True))
        return pair in set(candidate_pairs(denominator_class))
    if denominator_class == "imprimitive":
        if d1 == 2 and d2 in (4, 8, 16):
            return True
        if d2 == 2 and d1 in (4, 8, 16):
            return True
        return d1 == d2 and d1 in (4, 8, 16)
    raise ValueError(f"unknown denominator class {denominator_class!r}")


def triples_to_json() -> str:
    import json
    payload = {}
    for name, triples in (("imprimitive", imprimitive_triples()),
                          ("primitive", primitive_triples())):
        payload[name] = [{
            "exponents": [str(t) for t in tri.exponents],
            "tag": tri.tag,
        } for tri in triples]
    return json.dumps(payload, indent=1)
