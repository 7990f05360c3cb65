"""Exact arithmetic on truncated q-expansions with rational leading exponent.

A QExpansion stores finitely many exact rational coefficients of a series

    q^r (c_0 + c_1 q + c_2 q^2 + ...),    r rational,

together with the number of coefficients that are reliable.  Reading past the
reliable range raises TruncationError instead of silently returning zero;
elimination arguments downstream depend on every stored coefficient being
exact.  All values are immutable; every operation is a pure function.
"""

from __future__ import annotations

import json
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence, Union

Rational = Fraction
RationalLike = Union[Fraction, int]


class AlignmentError(ValueError):
    """Sum of expansions whose leading exponents differ by a non-integer."""


class TruncationError(IndexError):
    """A coefficient beyond the reliable truncation order was requested."""


def _frac(x: RationalLike) -> Fraction:
    if isinstance(x, Fraction):
        return x
    return Fraction(x)


class QExpansion:
    """Truncated Puiseux-style series with exact rational coefficients.

    ``coeffs[i]`` is the coefficient of ``q**(leading_exponent + i)``.
    Trailing zeros are significant: they assert known-zero coefficients.
    The function is asserted to have no terms below ``leading_exponent``.
    """

    __slots__ = ("leading_exponent", "coeffs")

    def __init__(self, leading_exponent: RationalLike, coeffs: Iterable[RationalLike]):
        object.__setattr__(self, "leading_exponent", _frac(leading_exponent))
        object.__setattr__(self, "coeffs", tuple(_frac(c) for c in coeffs))
        if not self.coeffs:
            raise ValueError("QExpansion requires at least one stored coefficient")

    def __setattr__(self, name, value):
        raise AttributeError("QExpansion is immutable")

    @property
    def order(self) -> int:
        return len(self.coeffs)

    def __repr__(self) -> str:
        shown = ", ".join(str(c) for c in self.coeffs[:4])
        if self.order > 4:
            shown += ", ..."
        return f"QExpansion(q^{self.leading_exponent} * [{shown}], order={self.order})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, QExpansion):
            return NotImplemented
        return (self.leading_exponent == other.leading_exponent
                and self.coeffs == other.coeffs)

    def __hash__(self) -> int:
        return hash((self.leading_exponent, self.coeffs))

    # -- coefficient access ------------------------------------------------

    def coefficient(self, exponent: RationalLike) -> Fraction:
        """Exact coefficient of q**exponent; zero below the leading exponent."""
        offset = _frac(exponent) - self.leading_exponent
        if offset.denominator != 1:
            return Fraction(0)
        n = offset.numerator
        if n < 0:
            return Fraction(0)
        if n >= self.order:
            raise TruncationError(
                f"coefficient q^{exponent} is beyond the reliable order "
                f"({self.order} terms from q^{self.leading_exponent})")
        return self.coeffs[n]

    def __getitem__(self, i: int) -> Fraction:
        if not 0 <= i < self.order:
            raise TruncationError(f"offset {i} outside stored range 0..{self.order - 1}")
        return self.coeffs[i]

    def truncate(self, order: int) -> "QExpansion":
        if order < 1 or order > self.order:
            raise TruncationError(f"cannot truncate order-{self.order} series to {order}")
        return QExpansion(self.leading_exponent, self.coeffs[:order])

    def normalized(self) -> "QExpansion":
        """Strip known-zero leading coefficients, raising the leading exponent."""
        k = 0
        while k < self.order - 1 and self.coeffs[k] == 0:
            k += 1
        if k == 0:
            return self
        return QExpansion(self.leading_exponent + k, self.coeffs[k:])

    # -- ring operations ---------------------------------------------------

    def __neg__(self) -> "QExpansion":
        return QExpansion(self.leading_exponent, tuple(-c for c in self.coeffs))

    def __add__(self, other: "QExpansion") -> "QExpansion":
        if not isinstance(other, QExpansion):
            return NotImplemented
        shift = other.leading_exponent - self.leading_exponent
        if shift.denominator != 1:
            raise AlignmentError(
                f"cannot add expansions with leading exponents {self.leading_exponent} "
                f"and {other.leading_exponent}: they lie in distinct q-cosets")
        lead = min(self.leading_exponent, other.leading_exponent)
        end = min(self.leading_exponent + self.order, other.leading_exponent + other.order)
        n = int(end - lead)
        if n < 1:
            raise TruncationError("summands share no reliable coefficient range")
        off_a = int(self.leading_exponent - lead)
        off_b = int(other.leading_exponent - lead)
        out = []
        for i in range(n):
            c = Fraction(0)
            if i >= off_a:
                c += self.coeffs[i - off_a]
            if i >= off_b:
                c += other.coeffs[i - off_b]
            out.append(c)
        return QExpansion(lead, out)

    def __sub__(self, other: "QExpansion") -> "QExpansion":
        return self + (-other)

    def __mul__(self, other) -> "QExpansion":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, QExpansion):
            return NotImplemented
        n = min(self.order, other.order)
        a, b = self.coeffs, other.coeffs
        out = [Fraction(0)] * n
        for i in range(n):
            ai = a[i]
            if ai == 0:
                continue
            for j in range(n - i):
                bj = b[j]
                if bj:
                    out[i + j] += ai * bj
        return QExpansion(self.leading_exponent + other.leading_exponent, out)

    __rmul__ = __mul__

    def scale(self, scalar: RationalLike) -> "QExpansion":
        s = _frac(scalar)
        return QExpansion(self.leading_exponent, tuple(s * c for c in self.coeffs))

    def shift(self, exponent: RationalLike) -> "QExpansion":
        """Multiply by q**exponent."""
        return QExpansion(self.leading_exponent + _frac(exponent), self.coeffs)

    def inverse(self) -> "QExpansion":
        """Multiplicative inverse; requires an invertible leading coefficient."""
        if self.coeffs[0] == 0:
            raise ZeroDivisionError(
                "series inversion requires a unit (nonzero) leading coefficient; "
                "call normalized() first if leading zeros are present")
        a = self.coeffs
        inv0 = 1 / a[0]
        out = [inv0]
        for n in range(1, self.order):
            acc = Fraction(0)
            for k in range(1, n + 1):
                if a[k]:
                    acc += a[k] * out[n - k]
            out.append(-inv0 * acc)
        return QExpansion(-self.leading_exponent, out)

    def __truediv__(self, other: "QExpansion") -> "QExpansion":
        if not isinstance(other, QExpansion):
            return NotImplemented
        return self * other.inverse()

    def pow_int(self, n: int) -> "QExpansion":
        if n < 0:
            return self.inverse().pow_int(-n)
        result = QExpansion(0, [Fraction(1)] + [Fraction(0)] * (self.order - 1))
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def pow_fractional(self, alpha: RationalLike) -> "QExpansion":
        """u**alpha for a series u with constant leading term 1.

        Coefficients agree with the exact binomial expansion of
        (1 + v)**alpha; computed by the logarithmic-derivative recursion.
        """
        alpha = _frac(alpha)
        if self.leading_exponent != 0 or self.coeffs[0] != 1:
            raise ValueError("fractional powers require a series 1 + O(q)")
        u = self.coeffs
        n_terms = self.order
        out = [Fraction(1)]
        for n in range(1, n_terms):
            acc = Fraction(0)
            for k in range(1, n + 1):
                if u[k]:
                    acc += ((alpha + 1) * k - n) * u[k] * out[n - k]
            out.append(acc / n)
        return QExpansion(0, out)

    def q_derivative(self) -> "QExpansion":
        """The operator q d/dq: multiplies coefficient i by its exponent."""
        e = self.leading_exponent
        return QExpansion(e, tuple((e + i) * c for i, c in enumerate(self.coeffs)))

    # -- serialization -----------------------------------------------------

    def to_json(self) -> str:
        return json.dumps({
            "leading_exponent": _frac_str(self.leading_exponent),
            "coeffs": [_frac_str(c) for c in self.coeffs],
        })

    @classmethod
    def from_json(cls, text: str) -> "QExpansion":
        data = json.loads(text)
        return cls(Fraction(data["leading_exponent"]),
                   [Fraction(c) for c in data["coeffs"]])


def _frac_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}" if x.denominator != 1 else str(x.numerator)


def one(order: int) -> QExpansion:
    return QExpansion(0, [Fraction(1)] + [Fraction(0)] * (order - 1))


# -- level-one modular forms ----------------------------------------------

_BERNOULLI_FACTOR = {2: -24, 4: 240, 6: -504}  # -2k/B_k for k = 2, 4, 6


@lru_cache(maxsize=32)
def _divisor_power_sums(power: int, order: int) -> tuple:
    """sigma_power(n) for n = 1 .. order-1."""
    sums = [0] * order
    for d in range(1, order):
        dp = d ** power
        for n in range(d, order, d):
            sums[n] += dp
    return tuple(sums)


@lru_cache(maxsize=64)
def eisenstein(weight: int, order: int) -> QExpansion:
    """Level-one Eisenstein series E_k, constant term 1, from divisor sums."""
    if weight not in (2, 4, 6):
        raise ValueError(f"unsupported Eisenstein weight {weight}; need 2, 4 or 6")
    if order < 1:
        raise ValueError("order must be at least 1")
    factor = _BERNOULLI_FACTOR[weight]
    sums = _divisor_power_sums(weight - 1, order)
    coeffs = [Fraction(1)] + [Fraction(factor * sums[n]) for n in range(1, order)]
    return QExpansion(0, coeffs)


@lru_cache(maxsize=32)
def discriminant_cusp_form(order: int) -> QExpansion:
    """Delta = (E4^3 - E6^2)/1728 = q - 24q^2 + 252q^3 - ..."""
    e4 = eisenstein(4, order + 1)
    e6 = eisenstein(6, order + 1)
    diff = e4.pow_int(3) - e6.pow_int(2)
    return diff.normalized().scale(Fraction(1, 1728)).truncate(order)


@lru_cache(maxsize=32)
def j_invariant(order: int) -> QExpansion:
    """Klein j = E4^3 / Delta = q^-1 + 744 + 196884 q + ..."""
    e4 = eisenstein(4, order + 1)
    delta_unit = discriminant_cusp_form(order).shift(-1)  # 1 - 24q + ...
    return (e4.pow_int(3).truncate(order) * delta_unit.inverse()).shift(-1)


@lru_cache(maxsize=32)
def hauptmodul_K(order: int) -> QExpansion:
    """K = 1728/j = (E4^3 - E6^2)/E4^3 = 1728 q - 1285632 q^2 + ...

    Leading exponent 1, leading coefficient 1728.
    """
    if order < 1:
        raise ValueError("order must be at least 1")
    e4 = eisenstein(4, order + 1)
    e6 = eisenstein(6, order + 1)
    numerator = (e4.pow_int(3) - e6.pow_int(2)).normalized()  # 1728 q (1 - ...)
    return (numerator.truncate(order) * e4.pow_int(3).truncate(order).inverse())

def j_power(alpha: RationalLike, order: int) -> QExpansion:
    """j**alpha = q^(-alpha) (1 + 744 q + ...)**alpha, exact binomial expansion."""
    if order < 1:
        raise ValueError("order must be at least 1")
    alpha = _frac(alpha)
    if alpha == 0:
        return one(order)
    unit = j_invariant(order).shift(1)  # 1 + 744 q + 196884 q^2 + ...
    return unit.pow_fractional(alpha).shift(-alpha)


def modular_derivative(f: QExpansion, weight: RationalLike) -> QExpansion:
    """D_k f = q df/dq - (k/12) E_2 f for f of the given weight."""
    if f.order < 2:
        raise ValueError("modular derivative needs at least 2 stored coefficients")
    e2 = eisenstein(2, f.order)
    return f.q_derivative() - (e2 * f).scale(Fraction(_frac(weight), 12))


def modular_derivative_power(f: QExpansion, n: int, start_weight: RationalLike = 0) -> QExpansion:
    """D^n = D_{k+2n-2} o ... o D_{k+2} o D_k applied to f of weight k."""
    w = _frac(start_weight)
    for _ in range(n):
        f = modular_derivative(f, w)
        w += 2
    return f
