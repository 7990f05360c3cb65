"""Exact 3F2 coefficients and p-adic valuation of them by carry counting.

The k-th raw coefficient of 3F2(a1,a2,a3; b1,b2; z) is

    B_k = (a1)_k (a2)_k (a3)_k / ((b1)_k (b2)_k k!),

and for a prime p not dividing any parameter denominator its valuation is a
signed count of base-p carries (Kummer's theorem applied factor by factor):

    v_p(B_k) = sum_i c_p(a_i - 1, k) - sum_j c_p(b_j - 1, k)

where c_p(alpha, k) counts the carries produced when the nonnegative integer
k is added to the (eventually periodic) base-p expansion of alpha.  An
independent Pochhammer-by-Pochhammer oracle cross-checks the carry route.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Tuple, Union

Valuation = Union[int, float]  # math.inf marks a vanishing coefficient


class PrimeUnusableError(ValueError):
    """A parameter is not p-integral, so p cannot be used for the sieve."""


@dataclass(frozen=True)
class HGParams:
    """Parameter tuple of a 3F2: three upper, two lower."""
    upper: Tuple[Fraction, Fraction, Fraction]
    lower: Tuple[Fraction, Fraction]

    def __post_init__(self):
        for b in self.lower:
            if b.denominator == 1 and b <= 0:
                raise ValueError(f"lower parameter {b} is a nonpositive integer")


def hg_coefficient(params: HGParams, n: int) -> Fraction:
    """Exact n-th coefficient (a1)_n(a2)_n(a3)_n / ((b1)_n(b2)_n n!)."""
    if n < 0:
        raise ValueError("coefficient index must be nonnegative")
    num = Fraction(1)
    den = Fraction(1)
    for j in range(n):
        for a in params.upper:
            num *= a + j
        for b in params.lower:
            den *= b + j
        den *= j + 1
    return num / den


def hg_coefficients(params: HGParams, order: int) -> List[Fraction]:
    """B_0 .. B_{order-1} via the one-step ratio recurrence."""
    out = [Fraction(1)]
    b = Fraction(1)
    for k in range(order - 1):
        for a in params.upper:
            b *= a + k
        for c in params.lower:
            b /= c + k
        b /= k + 1
        out.append(b)
    return out


# -- p-adic digits ----------------------------------------------------------

@dataclass(frozen=True)
class PadicDigits:
    """Eventually periodic base-p expansion of a p-integral rational."""
    prime: int
    preperiod: Tuple[int, ...]
    period: Tuple[int, ...]

    def digit(self, i: int) -> int:
        if i < len(self.preperiod):
            return self.preperiod[i]
        return self.period[(i - len(self.preperiod)) % len(self.period)]

    def to_rational(self) -> Fraction:
        p = self.prime
        head = sum(d * p ** i for i, d in enumerate(self.preperiod))
        tail = sum(d * p ** i for i, d in enumerate(self.period))
        # periodic part sums to tail * p^len(pre) / (1 - p^len(per))
        return Fraction(head) + Fraction(tail * p ** len(self.preperiod),
                                         1 - p ** len(self.period))


def padic_valuation(x: Fraction, p: int) -> Valuation:
    """v_p of a rational, normalized so v_p(p) = 1; v_p(0) = +inf."""
    if x == 0:
        return math.inf
    v = 0
    n = x.numerator
    while n % p == 0:
        n //= p
        v += 1
    d = x.denominator
    while d % p == 0:
        d //= p
        v -= 1
    return v


def padic_digits(alpha: Fraction, p: int) -> PadicDigits:
    """Base-p expansion of a p-integral rational by long division.

    The state of the division is the running numerator over the fixed
    denominator; a repeated state closes the period.
    """
    if p < 2:
        raise ValueError("prime must be at least 2")
    den = alpha.denominator
    if den % p == 0:
        raise PrimeUnusableError(f"{alpha} is not {p}-integral")
    inv_den = pow(den, -1, p)
    digits: List[int] = []
    seen = {}
    n = alpha.numerator
    while n not in seen:
        seen[n] = len(digits)
        d = (n * inv_den) % p
        digits.append(d)
        n = (n - d * den) // p
    start = seen[n]
    return PadicDigits(p, tuple(digits[:start]), tuple(digits[start:]))


def carry_count(alpha: Fraction, k: int, p: int) -> Valuation:
    """Number of base-p carries when adding the integer k >= 0 to alpha.

    Requires v_p(alpha) >= 0.  Finite unless alpha is a negative integer with
    alpha + k >= 0, where the carry propagates through the all-(p-1) tail
    forever; that case returns math.inf (the matching Pochhammer vanishes).
    Carry propagation past the digits of k stabilizes within one preperiod
    plus one period, which bounds the unrolling below.
    """
    if k < 0:
        raise ValueError("k must be a nonnegative integer")
    if padic_valuation(alpha, p) < 0:
        raise PrimeUnusableError(f"{alpha} is not {p}-integral")
    if k == 0 or alpha == 0:
        return 0
    digits = padic_digits(alpha, p)
    k_digits = []
    kk = k
    while kk:
        kk, d = divmod(kk, p)
        k_digits.append(d)
    limit = len(k_digits) + len(digits.preperiod) + len(digits.period) + 1
    carries = 0
    carry = 0
    i = 0
    while i < limit:
        if i >= len(k_digits) and carry == 0:
            return carries
        s = digits.digit(i) + (k_digits[i] if i < len(k_digits) else 0) + carry
        carry = 1 if s >= p else 0
        carries += carry
        i += 1
    # carry still alive past every digit of k and a full period: the tail is
    # all p-1, i.e. alpha is a negative integer exceeded by k
    return math.inf


def digit_sum(n: int, p: int) -> int:
    s = 0
    while n:
        n, d = divmod(n, p)
        s += d
    return s


def zeroth_digit(alpha: Fraction, p: int) -> int:
    """alpha mod p in [0, p) for a p-integral rational."""
    if alpha.denominator % p == 0:
        raise PrimeUnusableError(f"{alpha} is not {p}-integral")
    return (alpha.numerator * pow(alpha.denominator, -1, p)) % p


# -- valuation of the f0 hypergeometric coefficients ------------------------

def f0_carry_arguments(h1: Fraction, h2: Fraction) -> Tuple[List[Fraction], List[Fraction]]:
    """The five carry arguments (a_i - 1 and b_j - 1) for f0, via x=h1-1, y=h2-1."""
    x = h1 - 1
    y = h2 - 1
    s = -(x + y) / 3
    plus = [s - Fraction(3, 2), s - Fraction(7, 6), s - Fraction(5, 6)]
    minus = [-x - 1, -y - 1]
    return plus, minus


def vp_coefficient(h1: Fraction, h2: Fraction, k: int, p: int) -> Valuation:
    """Exact v_p of the k-th raw hypergeometric coefficient B_k of f0.

    Signed sum of five carry counts; raises PrimeUnusableError when any of
    the five arguments fails p-integrality.
    """
    plus, minus = f0_carry_arguments(h1, h2)
    for arg in plus + minus:
        if arg.denominator % p == 0:
            raise PrimeUnusableError(f"argument {arg} is not {p}-integral")
    total: Valuation = 0
    for arg in plus:
        total += carry_count(arg, k, p)
    for arg in minus:
        c = carry_count(arg, k, p)
        if c is math.inf:
            raise PrimeUnusableError(
                f"lower-parameter argument {arg} is a negative integer; "
                "the coefficient has a pole rather than a valuation")
        total -= c
    return total


def f0_params(h1: Fraction, h2: Fraction) -> HGParams:
    """3F2 parameters of the f0 coordinate: j^(c/24) 3F2(...; 1728/j)."""
    c = 8 * (h1 + h2 - Fraction(1, 2))
    return HGParams(
        upper=(-c / 24, (8 - c) / 24, (16 - c) / 24),
        lower=(1 - h1, 1 - h2),
    )


def pochhammer_valuation(t: Fraction, k: int, p: int) -> Valuation:
    """v_p((t)_k) summed term by term; +inf when some factor vanishes."""
    if t.denominator % p == 0:
        raise PrimeUnusableError(f"{t} is not {p}-integral")
    total = 0
    for j in range(k):
        v = padic_valuation(t + j, p)
        if v is math.inf:
            return math.inf
        total += v
    return total


def factorial_valuation(k: int, p: int) -> int:
    """Legendre's formula for v_p(k!)."""
    v = 0
    q = p
    while q <= k:
        v += k // q
        q *= p
    return v


def pochhammer_valuation_oracle(params: HGParams, k: int, p: int) -> Valuation:
    """v_p(B_k) computed without carry counting, factor by factor."""
    total: Valuation = 0
    for a in params.upper:
        v = pochhammer_valuation(a, k, p)
        if v is math.inf:
            return math.inf
        total += v
    for b in params.lower:
        v = pochhammer_valuation(b, k, p)
        if v is math.inf:
            raise PrimeUnusableError(f"(b)_k vanishes for lower parameter {b}")
        total -= v
    return total - factorial_valuation(k, p)
