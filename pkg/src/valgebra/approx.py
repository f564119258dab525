"""Tagged approximate values and exact square roots of rationals.

Exact results are plain `Fraction`s.  Anything touched by floating point is
wrapped in :class:`Approx`, which carries an absolute error bound and a method
tag, and propagates both through arithmetic.  The two kinds are never silently
mixed: adding an Approx to a Fraction yields an Approx whose bound is honest.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt

FLOAT_GUARD = 4e-16  # one ulp-ish of slack per float operation


@dataclass(frozen=True)
class Approx:
    value: float
    error: float            # absolute error bound
    method: str             # e.g. "closed_form_2d", "girard_3d", "monte_carlo", "sqrt"
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.error < 0:
            raise ValueError("error bound must be non-negative")

    def __repr__(self):
        return f"Approx({self.value!r} ± {self.error:.3g}, {self.method})"


Value = Fraction | Approx


def is_exact(v: Value) -> bool:
    return isinstance(v, Fraction)


def to_float(v: Value) -> float:
    return float(v) if isinstance(v, Fraction) else v.value


def error_of(v: Value) -> float:
    return 0.0 if isinstance(v, Fraction) else v.error


def _join_methods(a: Value, b: Value) -> str:
    ma = a.method if isinstance(a, Approx) else None
    mb = b.method if isinstance(b, Approx) else None
    if ma and mb:
        return ma if ma == mb else "combined"
    return ma or mb or "exact"


def val_add(a: Value, b: Value) -> Value:
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return a + b
    x, y = to_float(a), to_float(b)
    err = error_of(a) + error_of(b) + FLOAT_GUARD * (abs(x) + abs(y))
    return Approx(x + y, err, _join_methods(a, b))


def val_neg(a: Value) -> Value:
    if isinstance(a, Fraction):
        return -a
    return Approx(-a.value, a.error, a.method, a.meta)


def val_sub(a: Value, b: Value) -> Value:
    return val_add(a, val_neg(b))


def val_mul(a: Value, b: Value) -> Value:
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return a * b
    x, y = to_float(a), to_float(b)
    ea, eb = error_of(a), error_of(b)
    err = abs(x) * eb + abs(y) * ea + ea * eb + FLOAT_GUARD * abs(x * y)
    return Approx(x * y, err, _join_methods(a, b))


def val_sum(values) -> Value:
    total: Value = Fraction(0)
    for v in values:
        total = val_add(total, v)
    return total


def val_close(a: Value, b: Value, slack: float = 0.0) -> bool:
    """True when a and b agree within their combined error bounds plus slack."""
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return a == b
    return abs(to_float(a) - to_float(b)) <= error_of(a) + error_of(b) + slack


def square_part(n: int) -> tuple[int, int]:
    """Decompose n > 0 as s^2 * r; r is kept small by trial division.

    A perfect square is always detected exactly (integer sqrt check); composite
    residues may stay unfactored, which only costs reduction, not correctness.
    """
    if n <= 0:
        raise ValueError("need a positive integer")
    root = isqrt(n)
    if root * root == n:
        return root, 1
    s, r = 1, 1
    p = 2
    m = n
    while p * p <= m and p < 20000:
        if m % p == 0:
            count = 0
            while m % p == 0:
                m //= p
                count += 1
            s *= p ** (count // 2)
            if count % 2:
                r *= p
        p += 1 if p == 2 else 2
    r *= m
    return s, r


def sqrt_value(q: Fraction) -> Value:
    """Square root of a non-negative rational: exact when q is a perfect square,
    otherwise a high-precision Approx tagged "sqrt"."""
    q = Fraction(q)
    if q < 0:
        raise ValueError("square root of a negative rational")
    if q == 0:
        return Fraction(0)
    sn, rn = square_part(q.numerator)
    sd, rd = square_part(q.denominator)
    if rn == 1 and rd == 1:
        return Fraction(sn, sd)
    # value = (sn/sd) * sqrt(rn/rd); approximate the residue to ~30 digits
    radicand = Fraction(rn, rd)
    scaled = radicand.numerator * 10 ** 60 // radicand.denominator
    root = isqrt(scaled)  # floor sqrt of radicand * 10^60
    approx_root = root / 10 ** 30
    val = float(Fraction(sn, sd)) * approx_root
    return Approx(val, abs(val) * 1e-14 + 1e-300, "sqrt")
