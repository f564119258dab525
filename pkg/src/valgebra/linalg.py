"""Exact rational and integer linear algebra helpers.

Everything here is plumbing for the geometry kernel: small dense systems over
Fraction or int, solved by Gaussian elimination (fraction-free Bareiss where
the input is integral).  No floating point.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence

Vec = tuple[Fraction, ...]
IntVec = tuple[int, ...]


def dot(a: Sequence, b: Sequence):
    return sum(x * y for x, y in zip(a, b))


def vec_add(a: Sequence, b: Sequence) -> tuple:
    return tuple(x + y for x, y in zip(a, b))


def vec_sub(a: Sequence, b: Sequence) -> tuple:
    return tuple(x - y for x, y in zip(a, b))


def vec_scale(c, a: Sequence) -> tuple:
    return tuple(c * x for x in a)


def is_zero_vec(a: Sequence) -> bool:
    return all(x == 0 for x in a)


def primitive(v: Sequence[int]) -> IntVec:
    """Divide an integer vector by the gcd of its entries (sign preserved)."""
    g = 0
    for x in v:
        g = gcd(g, abs(x))
    if g <= 1:
        return tuple(v)
    return tuple(x // g for x in v)


def common_denominator(rows: Sequence[Sequence[Fraction]]) -> int:
    """Least common multiple of all denominators appearing in `rows`."""
    lcm = 1
    for row in rows:
        for x in row:
            d = x.denominator
            lcm = lcm // gcd(lcm, d) * d
    return lcm


def scale_to_ints(points: Sequence[Sequence[Fraction]]) -> tuple[list[IntVec], int]:
    """Clear denominators uniformly: returns (integer points, scale factor L).

    Each returned point equals L times the original, so convexity structure
    (extreme points, face incidences) is preserved exactly.
    """
    lcm = common_denominator(points)
    return [tuple(int(x * lcm) for x in p) for p in points], lcm


def independent_rows_int(rows: Sequence[Sequence[int]]) -> list[int]:
    """Indices of a maximal linearly independent subset of integer rows.

    Division-free elimination; used in the hull hot path, so inputs stay int.
    """
    if not rows:
        return []
    ncols = len(rows[0])
    work: list[list[int]] = []
    kept: list[int] = []
    pivots: list[int] = []  # pivot column of each kept row
    for ri, row in enumerate(rows):
        r = list(row)
        for w, pc in zip(work, pivots):
            if r[pc] != 0:
                a, b = w[pc], r[pc]
                r = [x * a - y * b for x, y in zip(r, w)]
        pc = next((c for c in range(ncols) if r[c] != 0), None)
        if pc is None:
            continue
        work.append(r)
        pivots.append(pc)
        kept.append(ri)
    return kept


def rank_int(rows: Sequence[Sequence[int]]) -> int:
    return len(independent_rows_int(rows))


def rank(rows: Sequence[Sequence]) -> int:
    """Rank of a matrix with Fraction or int entries, by exact elimination."""
    m = [list(map(Fraction, r)) for r in rows]
    if not m:
        return 0
    ncols = len(m[0])
    r = 0
    for c in range(ncols):
        piv = None
        for i in range(r, len(m)):
            if m[i][c] != 0:
                piv = i
                break
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        r += 1
        if r == len(m):
            break
    return r


def det(rows: Sequence[Sequence]) -> Fraction:
    """Determinant of a square matrix, exact."""
    n = len(rows)
    m = [list(map(Fraction, r)) for r in rows]
    result = Fraction(1)
    for c in range(n):
        piv = None
        for i in range(c, n):
            if m[i][c] != 0:
                piv = i
                break
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            result = -result
        result *= m[c][c]
        inv = 1 / m[c][c]
        for i in range(c + 1, n):
            if m[i][c] != 0:
                f = m[i][c] * inv
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return result


def det_int(rows: Sequence[Sequence[int]]) -> int:
    """Determinant of an integer matrix by fraction-free Bareiss elimination."""
    n = len(rows)
    if n == 0:
        return 1
    m = [list(r) for r in rows]
    sign = 1
    prev = 1
    for c in range(n - 1):
        if m[c][c] == 0:
            piv = None
            for i in range(c + 1, n):
                if m[i][c] != 0:
                    piv = i
                    break
            if piv is None:
                return 0
            m[c], m[piv] = m[piv], m[c]
            sign = -sign
        for i in range(c + 1, n):
            for j in range(c + 1, n):
                m[i][j] = (m[i][j] * m[c][c] - m[i][c] * m[c][j]) // prev
            m[i][c] = 0
        prev = m[c][c]
    return sign * m[n - 1][n - 1]


def solve(a_rows: Sequence[Sequence], b: Sequence) -> list[Fraction] | None:
    """Solve the square system A x = b exactly; None if A is singular."""
    n = len(a_rows)
    m = [list(map(Fraction, row)) + [Fraction(v)] for row, v in zip(a_rows, b)]
    for c in range(n):
        piv = None
        for i in range(c, n):
            if m[i][c] != 0:
                piv = i
                break
        if piv is None:
            return None
        m[c], m[piv] = m[piv], m[c]
        inv = 1 / m[c][c]
        m[c] = [x * inv for x in m[c]]
        for i in range(n):
            if i != c and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return [m[i][n] for i in range(n)]


def solve_general(a_rows: Sequence[Sequence], b: Sequence) -> list[Fraction] | None:
    """One exact solution of a (possibly rectangular) consistent system, else None."""
    nrows = len(a_rows)
    if nrows == 0:
        return []
    ncols = len(a_rows[0])
    m = [list(map(Fraction, row)) + [Fraction(v)] for row, v in zip(a_rows, b)]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = None
        for i in range(r, nrows):
            if m[i][c] != 0:
                piv = i
                break
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(nrows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    for i in range(r, nrows):
        if m[i][ncols] != 0:
            return None  # inconsistent
    x = [Fraction(0)] * ncols
    for row_idx, c in enumerate(pivots):
        x[c] = m[row_idx][ncols]
    return x


def hyperplane_normal_int(rows: Sequence[Sequence[int]]) -> IntVec | None:
    """Primitive integer normal of the hyperplane spanned by d-1 row vectors in Z^d.

    Returns None when the rows do not span a (d-1)-dimensional space.
    Computed from the (d-1)x(d-1) cofactor minors, so it is exact.
    """
    d = len(rows[0]) if rows else 0
    if len(rows) != d - 1:
        raise ValueError("need exactly d-1 row vectors")
    normal = []
    for j in range(d):
        minor = [[row[k] for k in range(d) if k != j] for row in rows]
        s = 1 if j % 2 == 0 else -1
        normal.append(s * det_int(minor))
    if all(x == 0 for x in normal):
        return None
    return primitive(normal)


def nullspace(rows: Sequence[Sequence]) -> list[Vec]:
    """Basis of the exact nullspace {x : A x = 0}."""
    if not rows:
        return []
    nrows, ncols = len(rows), len(rows[0])
    m = [list(map(Fraction, r)) for r in rows]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = None
        for i in range(r, nrows):
            if m[i][c] != 0:
                piv = i
                break
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(nrows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for row_idx, pc in enumerate(pivots):
            v[pc] = -m[row_idx][fc]
        basis.append(tuple(v))
    return basis


def matrix_inverse(rows: Sequence[Sequence]) -> list[list[Fraction]]:
    """Exact inverse of a square matrix; raises on singular input."""
    n = len(rows)
    m = [list(map(Fraction, row)) + [Fraction(1 if i == j else 0) for j in range(n)]
         for i, row in enumerate(rows)]
    for c in range(n):
        piv = None
        for i in range(c, n):
            if m[i][c] != 0:
                piv = i
                break
        if piv is None:
            raise ValueError("singular matrix")
        m[c], m[piv] = m[piv], m[c]
        inv = 1 / m[c][c]
        m[c] = [x * inv for x in m[c]]
        for i in range(n):
            if i != c and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return [row[n:] for row in m]


def lp_feasible(a_rows: Sequence[Sequence], b: Sequence) -> bool:
    """Exact feasibility of {x >= 0 : A x = b} by phase-1 simplex (Bland's rule).

    Sizes here are tiny (cone membership tests), so the dense Fraction tableau
    is more than fast enough and can never report a wrong answer.
    """
    nrows = len(a_rows)
    if nrows == 0:
        return True
    ncols = len(a_rows[0])
    rows = []
    rhs = []
    for row, v in zip(a_rows, b):
        v = Fraction(v)
        row = [Fraction(x) for x in row]
        if v < 0:
            row = [-x for x in row]
            v = -v
        rows.append(row)
        rhs.append(v)
    # tableau columns: x (ncols), artificials (nrows), rhs
    tab = [rows[i] + [Fraction(1 if j == i else 0) for j in range(nrows)] + [rhs[i]]
           for i in range(nrows)]
    basis = [ncols + i for i in range(nrows)]
    total = ncols + nrows
    # objective: minimize sum of artificials -> reduced cost row
    obj = [Fraction(0)] * (total + 1)
    for i in range(nrows):
        for j in range(total + 1):
            obj[j] += tab[i][j]
    while True:
        enter = None
        for j in range(ncols):  # artificials never re-enter
            if obj[j] > 0:
                enter = j
                break
        if enter is None:
            break
        leave = None
        best = None
        for i in range(nrows):
            if tab[i][enter] > 0:
                ratio = tab[i][total] / tab[i][enter]
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best = ratio
                    leave = i
        if leave is None:
            break  # unbounded improvement cannot happen in phase 1; defensive
        piv = tab[leave][enter]
        tab[leave] = [x / piv for x in tab[leave]]
        for i in range(nrows):
            if i != leave and tab[i][enter] != 0:
                f = tab[i][enter]
                tab[i] = [x - f * y for x, y in zip(tab[i], tab[leave])]
        if obj[enter] != 0:
            f = obj[enter]
            obj = [x - f * y for x, y in zip(obj, tab[leave])]
        basis[leave] = enter
    return obj[total] == 0


def in_cone(generators: Sequence[Sequence], target: Sequence) -> bool:
    """Exact test whether `target` is a non-negative combination of `generators`."""
    gens = list(generators)
    if not gens:
        return all(Fraction(t) == 0 for t in target)
    a_rows = [[Fraction(g[i]) for g in gens] for i in range(len(target))]
    return lp_feasible(a_rows, [Fraction(t) for t in target])
