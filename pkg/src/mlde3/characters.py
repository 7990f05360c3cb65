"""Candidate rank-3 character vectors and their third-order MLDE.

Two independent construction routes are provided and cross-checked in tests:

* ``character_vector`` composes generalized hypergeometric series with the
  hauptmodul K = 1728/j and multiplies by a fractional power of j (Horner
  evaluation over truncated exact series);
* ``frobenius_solve`` solves (D^3 + a E4 D + b E6) f = 0 coefficient by
  coefficient from the indicial recursion.

The Frobenius route is O(order^2) and is what the deep integrality scans
use; its inner loop runs on gmpy2 rationals.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import List, Optional, Tuple

from gmpy2 import mpq

from . import qseries
from .hypergeom import HGParams, hg_coefficients
from .qseries import QExpansion


class ResonantSpecError(ValueError):
    """Indicial roots differ by an integer; no pure power-series basis."""


def central_charge(h1: Fraction, h2: Fraction) -> Fraction:
    """c = 8(h1 + h2 - 1/2), forced by the monic third-order MLDE."""
    return 8 * (h1 + h2 - Fraction(1, 2))


def indicial_roots(h1: Fraction, h2: Fraction) -> Tuple[Fraction, Fraction, Fraction]:
    c = central_charge(h1, h2)
    return (-c / 24, h1 - c / 24, h2 - c / 24)


def mlde_coefficients(h1: Fraction, h2: Fraction) -> Tuple[Fraction, Fraction]:
    """(a, b) with indicial polynomial x^3 - x^2/2 + (a + 1/18)x + b.

    The roots are the three leading exponents; back-substitution of each
    root into the cubic is asserted.
    """
    e0, e1, e2 = indicial_roots(h1, h2)
    if len({e0, e1, e2}) < 3:
        raise ResonantSpecError(f"repeated indicial roots for (h1, h2) = ({h1}, {h2})")
    sigma2 = e0 * e1 + e0 * e2 + e1 * e2
    sigma3 = e0 * e1 * e2
    a = sigma2 - Fraction(1, 18)
    b = -sigma3
    for r in (e0, e1, e2):
        assert r ** 3 - r ** 2 / 2 + (a + Fraction(1, 18)) * r + b == 0
    return a, b


@dataclass(frozen=True)
class CharacterSpec:
    """One candidate (h1, h2) with derived MLDE data and known scalars.

    A1/A2 default to 1 (positivity of f1/f2 is scale-invariant, so the
    sieve can run before the S-matrix stage fixes the true values).
    """
    h1: Fraction
    h2: Fraction
    A1: int = 1
    A2: int = 1

    def __post_init__(self):
        if (self.h1 - self.h2).denominator == 1 or self.h1.denominator == 1 \
                or self.h2.denominator == 1:
            raise ResonantSpecError(
                f"(h1, h2) = ({self.h1}, {self.h2}): h1, h2, 0 must be "
                "pairwise distinct mod 1 (distinct rho(T) eigenvalues)")

    @property
    def c(self) -> Fraction:
        return central_charge(self.h1, self.h2)

    @property
    def c_tilde(self) -> Fraction:
        return self.c - 24 * min(Fraction(0), self.h1, self.h2)

    @property
    def mlde_a(self) -> Fraction:
        return mlde_coefficients(self.h1, self.h2)[0]

    @property
    def mlde_b(self) -> Fraction:
        return mlde_coefficients(self.h1, self.h2)[1]

    @property
    def exponents(self) -> Tuple[Fraction, Fraction, Fraction]:
        return indicial_roots(self.h1, self.h2)

    @property
    def xy(self) -> Tuple[Fraction, Fraction]:
        return (self.h1 - 1, self.h2 - 1)

    def with_scalars(self, A1: int, A2: int) -> "CharacterSpec":
        return CharacterSpec(self.h1, self.h2, A1, A2)

    def label(self) -> str:
        return f"(h1={self.h1}, h2={self.h2}, c={self.c})"


@dataclass(frozen=True)
class CharacterVector:
    spec: CharacterSpec
    f0: QExpansion
    f1: QExpansion
    f2: QExpansion

    def __post_init__(self):
        e0, e1, e2 = self.spec.exponents
        assert self.f0.leading_exponent == e0
        assert self.f1.leading_exponent == e1
        assert self.f2.leading_exponent == e2

    def coordinates(self) -> Tuple[QExpansion, QExpansion, QExpansion]:
        return (self.f0, self.f1, self.f2)

    def to_json(self) -> str:
        import json
        payload = {
            "h1": _fs(self.spec.h1), "h2": _fs(self.spec.h2),
            "c": _fs(self.spec.c), "A1": self.spec.A1, "A2": self.spec.A2,
        }
        for name, f in zip(("f0", "f1", "f2"), self.coordinates()):
            payload[name] = {
                "leading_exponent": _fs(f.leading_exponent),
                "coeffs": [_fs(x) for x in f.coeffs],
            }
        return json.dumps(payload)


def _fs(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}" if x.denominator != 1 else str(x.numerator)


def hypergeometric_params(spec: CharacterSpec) -> Tuple[HGParams, HGParams, HGParams]:
    """3F2 parameters of f0, f1, f2 and their j-power prefactors' exponents."""
    h1, h2 = spec.h1, spec.h2
    c = spec.c
    p0 = HGParams(
        upper=(-c / 24, (8 - c) / 24, (16 - c) / 24),
        lower=(1 - h1, 1 - h2))
    # Lower parameters follow the local-solution normal form 1 + e_i - e_k
    # (e_i the indicial roots): for f1 they are (1 + h1, 1 + h1 - h2).  The
    # q-coefficient identity with F1(x, y) pins this down.
    p1 = HGParams(
        upper=((4 * h1 - 2 * h2 + 1) / 6, (4 * h1 - 2 * h2 + 3) / 6,
               (4 * h1 - 2 * h2 + 5) / 6),
        lower=(1 + h1, 1 + h1 - h2))
    p2 = HGParams(
        upper=((4 * h2 - 2 * h1 + 1) / 6, (4 * h2 - 2 * h1 + 3) / 6,
               (4 * h2 - 2 * h1 + 5) / 6),
        lower=(1 + h2, 1 + h2 - h1))
    return p0, p1, p2


def _compose_with_K(coeffs: List[Fraction], order: int) -> QExpansion:
    """Horner evaluation of sum coeffs[k] K^k over the truncated K series."""
    K = qseries.hauptmodul_K(order)
    acc = qseries.one(order).scale(coeffs[-1])
    for k in range(len(coeffs) - 2, -1, -1):
        acc = acc * K + qseries.one(order).scale(coeffs[k])
    return acc


def character_vector(spec: CharacterSpec, order: int) -> CharacterVector:
    """Exact expansion of (f0, f1, f2) via j-powers times 3F2(...; 1728/j).

    Degree-``order`` Horner evaluation in K; O(order^3) coefficient work, so
    intended for moderate orders.  The Frobenius route below is the fast path
    and is tested to agree with this one.
    """
    if order < 1:
        raise ValueError("order must be at least 1")
    params = hypergeometric_params(spec)
    jexp = (spec.c / 24,
            (2 * spec.h2 - 4 * spec.h1 - 1) / 6,
            (2 * spec.h1 - 4 * spec.h2 - 1) / 6)
    scalars = (1, spec.A1, spec.A2)
    coords = []
    for p, alpha, scal in zip(params, jexp, scalars):
        series = _compose_with_K(hg_coefficients(p, order + 1), order)
        coords.append((qseries.j_power(alpha, order) * series).scale(scal))
    return CharacterVector(spec, *coords)


# -- Frobenius recursion -----------------------------------------------------

@lru_cache(maxsize=8)
def _mlde_series_tables(order: int):
    """Integer q-series of E2, E4, E6 and E2^2 as gmpy2 rationals."""
    e2 = [mpq(c) for c in qseries.eisenstein(2, order).coeffs]
    e4 = [mpq(c) for c in qseries.eisenstein(4, order).coeffs]
    e6 = [mpq(c) for c in qseries.eisenstein(6, order).coeffs]
    sq = [mpq(0)] * order
    for i in range(order):
        if e2[i]:
            for j in range(order - i):
                sq[i + j] += e2[i] * e2[j]
    return e2, e4, e6, sq


def _indicial_poly(a, b):
    half = mpq(1, 2)
    lin = a + mpq(1, 18)
    def P(r):
        return ((r - half) * r + lin) * r + b
    return P


def _frobenius_mpq(a: Fraction, b: Fraction, exponent: Fraction, order: int,
                   resonance_exc=True) -> List[mpq]:
    """Coefficients c_0=1, c_1, ... of the solution q^exponent(1 + O(q))."""
    e2, e4, e6, sq = _mlde_series_tables(order)
    am, bm, em = mpq(a), mpq(b), mpq(exponent)
    P = _indicial_poly(am, bm)
    sixth = mpq(-1, 6)
    eighteenth = mpq(1, 18)
    half = mpq(-1, 2)
    # per-shift quadratic A_j r^2 + B_j r + C_j applied to older coefficients
    A = [half * e2[j] for j in range(order)]
    B = [sixth * j * e2[j] + eighteenth * sq[j] + am * e4[j] for j in range(order)]
    C = [bm * e6[j] for j in range(order)]
    R = [em + n for n in range(order)]
    R2 = [r * r for r in R]
    coeffs = [mpq(1)]
    for n in range(1, order):
        acc = mpq(0)
        for j in range(1, n + 1):
            i = n - j
            t = coeffs[i]
            if t:
                acc += t * (A[j] * R2[i] + B[j] * R[i] + C[j])
        pn = P(R[n])
        if pn == 0:
            if resonance_exc:
                raise ResonantSpecError(
                    f"resonance: exponent {exponent} + {n} is also an indicial root")
            raise ZeroDivisionError
        coeffs.append(-acc / pn)
    return coeffs


def frobenius_solve(a: Fraction, b: Fraction, exponent: Fraction, order: int) -> QExpansion:
    """Unique solution q^exponent (1 + O(q)) of (D^3 + a E4 D + b E6) f = 0.

    The exponent must be an indicial root not exceeded by another root by a
    positive integer; resonance is reported, not patched with log terms.
    """
    e = Fraction(exponent)
    P = _indicial_poly(mpq(a), mpq(b))
    if P(mpq(e)) != 0:
        raise ValueError(f"{exponent} is not a root of the indicial polynomial")
    cs = _frobenius_mpq(Fraction(a), Fraction(b), e, order)
    return QExpansion(e, [Fraction(c.numerator, c.denominator) for c in cs])


def frobenius_mpq_coefficients(spec: CharacterSpec, coordinate: int, order: int) -> List[mpq]:
    """Fast-path coefficients of one normalized coordinate (leading term 1)."""
    a, b = mlde_coefficients(spec.h1, spec.h2)
    e = spec.exponents[coordinate]
    return _frobenius_mpq(a, b, e, order)


def frobenius_scan(a: Fraction, b: Fraction, exponent: Fraction, order: int,
                   require_integral: bool,
                   integrality_scale: int = 1) -> Tuple[Optional[int], Optional[mpq]]:
    """Run the MLDE recursion, stopping at the first offending coefficient.

    Returns (None, None) when all ``order`` coefficients are nonnegative
    (and, when required, integral after multiplication by
    ``integrality_scale``); otherwise (index, value) of the first violation.
    Early exit keeps the cost at O(index^2) and prevents the denominator
    blowup a nonintegral series would accumulate.
    """
    e2, e4, e6, sq = _mlde_series_tables(order)
    am, bm, em = mpq(a), mpq(b), mpq(exponent)
    P = _indicial_poly(am, bm)
    A = [mpq(-1, 2) * e2[j] for j in range(order)]
    B = [mpq(-j, 6) * e2[j] + mpq(1, 18) * sq[j] + am * e4[j] for j in range(order)]
    C = [bm * e6[j] for j in range(order)]
    R = [em + n for n in range(order)]
    R2 = [r * r for r in R]
    coeffs = [mpq(1)]
    for n in range(1, order):
        acc = mpq(0)
        for j in range(1, n + 1):
            i = n - j
            t = coeffs[i]
            if t:
                acc += t * (A[j] * R2[i] + B[j] * R[i] + C[j])
        c = -acc / P(R[n])
        if c < 0 or (require_integral and (integrality_scale * c).denominator != 1):
            return n, c
        coeffs.append(c)
    return None, None


def character_vector_frobenius(spec: CharacterSpec, order: int) -> CharacterVector:
    """Same contract as character_vector, via the MLDE recursion."""
    a, b = mlde_coefficients(spec.h1, spec.h2)
    coords = []
    for e, scal in zip(spec.exponents, (1, spec.A1, spec.A2)):
        cs = _frobenius_mpq(a, b, e, order)
        coords.append(QExpansion(
            e, [Fraction(c.numerator, c.denominator) * scal for c in cs]))
    return CharacterVector(spec, *coords)
