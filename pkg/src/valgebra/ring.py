"""Exact multivariate polynomial arithmetic over the rationals.

Scalars are `fractions.Fraction` (arbitrary precision, always in lowest terms
with a positive denominator), so every operation in this module is exact: no
rounding ever happens here.

A polynomial is a sparse map from exponent tuples to nonzero coefficients:

  x0^2 * x1 + 3   ->   MultiPoly(2, {(2, 1): Fraction(1), (0, 0): Fraction(3)})

The zero polynomial stores no terms and reports degree -1.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import product as iter_product
from typing import Iterable, Mapping, Sequence

from .errors import DimensionMismatch
from .linalg import matrix_inverse

# Exponent tuple: entry i is the degree of variable i in the monomial.
MultiIndex = tuple[int, ...]

RationalLike = int | Fraction


def format_rational(x: Fraction) -> str:
    """Serialize a rational as "p/q", or "p" when the denominator is 1."""
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def parse_rational(s: str) -> Fraction:
    """Inverse of :func:`format_rational`; round-trips bit-exactly."""
    return Fraction(s.strip())


class MultiPoly:
    """Immutable sparse polynomial in a fixed number of variables."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Mapping[MultiIndex, RationalLike] | None = None):
        if nvars < 0:
            raise ValueError("variable count must be non-negative")
        clean: dict[MultiIndex, Fraction] = {}
        if terms:
            for idx, coeff in terms.items():
                idx = tuple(int(e) for e in idx)
                if len(idx) != nvars:
                    raise DimensionMismatch(
                        f"exponent tuple {idx} has length {len(idx)}, expected {nvars}")
                if any(e < 0 for e in idx):
                    raise ValueError(f"negative exponent in {idx}")
                c = Fraction(coeff)
                if c != 0:
                    clean[idx] = clean.get(idx, Fraction(0)) + c
            clean = {i: c for i, c in clean.items() if c != 0}
        object.__setattr__(self, "nvars", nvars)
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, *_):
        raise AttributeError("MultiPoly is immutable")

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero(nvars: int) -> "MultiPoly":
        return MultiPoly(nvars, {})

    @staticmethod
    def constant(nvars: int, value: RationalLike) -> "MultiPoly":
        return MultiPoly(nvars, {(0,) * nvars: Fraction(value)})

    @staticmethod
    def variable(nvars: int, index: int) -> "MultiPoly":
        if not 0 <= index < nvars:
            raise ValueError(f"variable index {index} out of range for {nvars} variables")
        exp = [0] * nvars
        exp[index] = 1
        return MultiPoly(nvars, {tuple(exp): Fraction(1)})

    # -- ring structure ----------------------------------------------------

    def _check(self, other: "MultiPoly") -> None:
        if self.nvars != other.nvars:
            raise DimensionMismatch(
                f"variable counts differ: {self.nvars} vs {other.nvars}")

    def __add__(self, other: "MultiPoly") -> "MultiPoly":
        self._check(other)
        out = dict(self.terms)
        for idx, c in other.terms.items():
            out[idx] = out.get(idx, Fraction(0)) + c
        return MultiPoly(self.nvars, out)

    def __sub__(self, other: "MultiPoly") -> "MultiPoly":
        self._check(other)
        out = dict(self.terms)
        for idx, c in other.terms.items():
            out[idx] = out.get(idx, Fraction(0)) - c
        return MultiPoly(self.nvars, out)

    def __neg__(self) -> "MultiPoly":
        return MultiPoly(self.nvars, {i: -c for i, c in self.terms.items()})

    def __mul__(self, other) -> "MultiPoly":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        self._check(other)
        out: dict[MultiIndex, Fraction] = {}
        for ia, ca in self.terms.items():
            for ib, cb in other.terms.items():
                idx = tuple(x + y for x, y in zip(ia, ib))
                out[idx] = out.get(idx, Fraction(0)) + ca * cb
        return MultiPoly(self.nvars, out)

    __rmul__ = __mul__

    def scale(self, c: RationalLike) -> "MultiPoly":
        c = Fraction(c)
        return MultiPoly(self.nvars, {i: c * v for i, v in self.terms.items()})

    def __pow__(self, k: int) -> "MultiPoly":
        if k < 0:
            raise ValueError("negative power")
        result = MultiPoly.constant(self.nvars, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base if k > 1 else base
            k >>= 1
        return result

    def __eq__(self, other) -> bool:
        return (isinstance(other, MultiPoly) and self.nvars == other.nvars
                and self.terms == other.terms)

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def __repr__(self):
        if not self.terms:
            return f"MultiPoly({self.nvars}, 0)"
        parts = []
        for idx in sorted(self.terms):
            mono = "*".join(f"x{i}^{e}" if e > 1 else f"x{i}"
                            for i, e in enumerate(idx) if e)
            c = format_rational(self.terms[idx])
            parts.append(f"{c}*{mono}" if mono else c)
        return f"MultiPoly({self.nvars}, {' + '.join(parts)})"

    # -- queries -----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial (sentinel)."""
        if not self.terms:
            return -1
        return max(sum(idx) for idx in self.terms)

    def coeff(self, idx: Sequence[int]) -> Fraction:
        """Coefficient of the given monomial (0 when absent)."""
        idx = tuple(int(e) for e in idx)
        if len(idx) != self.nvars:
            raise DimensionMismatch(
                f"exponent tuple has length {len(idx)}, expected {self.nvars}")
        return self.terms.get(idx, Fraction(0))

    def eval_at(self, point: Sequence[RationalLike]) -> Fraction:
        """Exact evaluation at a rational point."""
        if len(point) != self.nvars:
            raise DimensionMismatch(
                f"point has length {len(point)}, expected {self.nvars}")
        vals = [Fraction(v) for v in point]
        total = Fraction(0)
        for idx, c in self.terms.items():
            term = c
            for e, v in zip(idx, vals):
                if e:
                    term *= v ** e
            total += term
        return total

    def compose_affine(self, shift: Sequence[RationalLike],
                       matrix: Sequence[Sequence[RationalLike]]) -> "MultiPoly":
        """Substitute x_i = shift_i + sum_j matrix[i][j] * u_j, exactly.

        The result lives in as many variables as `matrix` has columns.
        """
        if len(shift) != self.nvars or len(matrix) != self.nvars:
            raise DimensionMismatch("affine substitution has wrong shape")
        if self.nvars == 0:
            return self
        new_nvars = len(matrix[0])
        subs = []
        for i in range(self.nvars):
            row = {(0,) * new_nvars: Fraction(shift[i])}
            for j, m in enumerate(matrix[i]):
                if Fraction(m) != 0:
                    exp = [0] * new_nvars
                    exp[j] = 1
                    row[tuple(exp)] = Fraction(m)
            subs.append(MultiPoly(new_nvars, row))
        result = MultiPoly.zero(new_nvars)
        # cache powers of each substituted linear form
        powers: list[list[MultiPoly]] = [[MultiPoly.constant(new_nvars, 1)] for _ in subs]
        for idx, c in self.terms.items():
            term = MultiPoly.constant(new_nvars, c)
            for i, e in enumerate(idx):
                while len(powers[i]) <= e:
                    powers[i].append(powers[i][-1] * subs[i])
                if e:
                    term = term * powers[i][e]
            result = result + term
        return result

    def pad_variables(self, new_nvars: int, offset: int) -> "MultiPoly":
        """Reinterpret in a larger variable set, placing old variables at `offset`."""
        if offset < 0 or offset + self.nvars > new_nvars:
            raise DimensionMismatch("pad target too small")
        out = {}
        for idx, c in self.terms.items():
            new_idx = (0,) * offset + idx + (0,) * (new_nvars - offset - self.nvars)
            out[new_idx] = c
        return MultiPoly(new_nvars, out)

    # -- serialization -----------------------------------------------------

    def to_records(self) -> list[dict]:
        """Stable list of {exponents, coeff} records; round-trips bit-exactly."""
        return [{"exponents": list(idx), "coeff": format_rational(self.terms[idx])}
                for idx in sorted(self.terms)]

    @staticmethod
    def from_records(nvars: int, records: Iterable[Mapping]) -> "MultiPoly":
        terms: dict[MultiIndex, Fraction] = {}
        for rec in records:
            idx = tuple(int(e) for e in rec["exponents"])
            c = parse_rational(rec["coeff"])
            if idx in terms:
                raise ValueError(f"duplicate monomial {idx} in records")
            terms[idx] = c
        return MultiPoly(nvars, terms)


@lru_cache(maxsize=None)
def _monomial_weights(degree_bound: int) -> tuple[tuple[Fraction, ...], ...]:
    """Rows of the inverse Vandermonde matrix on the nodes 0..degree_bound.

    Row k gives the weights turning samples f(0..D) of a degree <= D polynomial
    into the coefficient of t^k.
    """
    nodes = range(degree_bound + 1)
    v = [[Fraction(t) ** j for j in nodes] for t in nodes]
    inv = matrix_inverse(v)
    return tuple(tuple(row) for row in inv)


def interpolate_from_grid(samples: Mapping[MultiIndex, RationalLike],
                          variable_count: int,
                          degree_bound: int) -> MultiPoly:
    """Exact polynomial through samples on the full grid {0..degree_bound}^variable_count.

    The result is the unique polynomial of per-variable degree <= degree_bound
    agreeing with every sample.  Raises when a grid point is missing or a
    duplicate sample is inconsistent.
    """
    if variable_count < 0 or degree_bound < 0:
        raise ValueError("variable count and degree bound must be non-negative")
    table: dict[MultiIndex, Fraction] = {}
    for pt, val in samples.items():
        key = tuple(int(c) for c in pt)
        val = Fraction(val)
        if key in table and table[key] != val:
            raise ValueError(f"inconsistent duplicate sample at {key}")
        table[key] = val
    if variable_count == 0:
        if () not in table:
            raise ValueError("missing sample at ()")
        return MultiPoly(0, {(): table[()]})
    grid = list(iter_product(range(degree_bound + 1), repeat=variable_count))
    for pt in grid:
        if pt not in table:
            raise ValueError(f"missing grid point {pt}")
    weights = _monomial_weights(degree_bound)
    # transform the value tensor one axis at a time: values -> coefficients
    tensor: dict[MultiIndex, Fraction] = {pt: table[pt] for pt in grid}
    for axis in range(variable_count):
        new_tensor: dict[MultiIndex, Fraction] = {}
        for pt in tensor:
            if pt[axis] != 0:
                continue
            line = []
            key = list(pt)
            for t in range(degree_bound + 1):
                key[axis] = t
                line.append(tensor[tuple(key)])
            for k in range(degree_bound + 1):
                coeff = sum(w * v for w, v in zip(weights[k], line))
                key[axis] = k
                new_tensor[tuple(key)] = coeff
        tensor = new_tensor
    return MultiPoly(variable_count, {idx: c for idx, c in tensor.items() if c != 0})
