"""Exact computational geometry kernel for convex polytopes.

A polytope is stored by its extreme points over exact rationals, in canonical
lexicographic order, so equality is a plain list comparison.  Lower-dimensional
polytopes (points, segments, embedded slabs, diagonals) are first class;
operations that genuinely need a full-dimensional body (face lattice, normal
cones, hyperplane splitting) raise :class:`NotFullDimensional` otherwise.

All predicates run over integers after clearing denominators.  There is no
floating point anywhere in this module.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import gcd
from typing import Iterable, Sequence

from .errors import (DegenerateInput, DimensionMismatch, EmptyInput, NotAFace,
                     NotFullDimensional)
from .linalg import (det_int, dot, hyperplane_normal_int, in_cone,
                     independent_rows_int, lp_feasible, matrix_inverse,
                     primitive, rank_int, scale_to_ints, solve, vec_add,
                     vec_scale, vec_sub)
from .ring import format_rational, parse_rational

Point = tuple[Fraction, ...]


def as_point(coords: Sequence) -> Point:
    return tuple(Fraction(c) for c in coords)


# ---------------------------------------------------------------------------
# low-level hull machinery (integer coordinates)
# ---------------------------------------------------------------------------

def _hull_1d(pts: list[tuple[int, ...]]) -> list[int]:
    lo = min(range(len(pts)), key=lambda i: pts[i])
    hi = max(range(len(pts)), key=lambda i: pts[i])
    return [lo] if lo == hi else [lo, hi]


def _cross2(o, a, b) -> int:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _hull_2d_ring(pts: list[tuple[int, ...]]) -> list[int]:
    """Monotone chain; returns vertex indices in counterclockwise ring order."""
    order = sorted(range(len(pts)), key=lambda i: pts[i])
    if len(order) <= 2:
        return order
    lower: list[int] = []
    for i in order:
        while len(lower) >= 2 and _cross2(pts[lower[-2]], pts[lower[-1]], pts[i]) <= 0:
            lower.pop()
        lower.append(i)
    upper: list[int] = []
    for i in reversed(order):
        while len(upper) >= 2 and _cross2(pts[upper[-2]], pts[upper[-1]], pts[i]) <= 0:
            upper.pop()
        upper.append(i)
    return lower[:-1] + upper[:-1]


class _Facet:
    """Supporting hyperplane a.x <= b together with the point indices on it."""

    __slots__ = ("normal", "offset", "on")

    def __init__(self, normal: tuple[int, ...], offset: int, on: set[int]):
        self.normal = normal
        self.offset = offset
        self.on = on

    def key(self) -> tuple[int, ...]:
        return primitive(self.normal + (self.offset,))


def _initial_simplex(pts: list[tuple[int, ...]], d: int) -> list[int]:
    base = 0
    chosen = [base]
    diffs: list[tuple[int, ...]] = []
    for i in range(1, len(pts)):
        cand = vec_sub(pts[i], pts[base])
        if rank_int(diffs + [cand]) > len(diffs):
            diffs.append(cand)
            chosen.append(i)
            if len(diffs) == d:
                break
    if len(diffs) < d:
        raise DegenerateInput("points do not affinely span the space")
    return chosen


def _incremental_hull(pts: list[tuple[int, ...]]) -> tuple[list[_Facet], list[int]]:
    """Facets and vertex indices of full-dimensional conv(pts), dim >= 2.

    Beneath-beyond insertion with merged (non-simplicial) facets.  A new point
    strictly beyond nothing is swallowed; a point exactly on a kept facet
    extends that facet, which is what keeps coplanar degeneracies exact.
    """
    d = len(pts[0])
    simplex = _initial_simplex(pts, d)
    centroid_sum = [0] * d
    for i in simplex:
        centroid_sum = [a + b for a, b in zip(centroid_sum, pts[i])]
    cmul = d + 1  # interior test: a . centroid_sum < b * cmul

    facets: dict[tuple[int, ...], _Facet] = {}

    def oriented(normal, offset):
        lhs = dot(normal, centroid_sum)
        if lhs > offset * cmul:
            return tuple(-x for x in normal), -offset
        return tuple(normal), offset

    for leave_out in simplex:
        members = [i for i in simplex if i != leave_out]
        rows = [vec_sub(pts[i], pts[members[0]]) for i in members[1:]]
        normal = hyperplane_normal_int(rows)
        offset = dot(normal, pts[members[0]])
        if dot(normal, pts[leave_out]) > offset:
            normal, offset = tuple(-x for x in normal), -offset
        f = _Facet(normal, offset, set(members))
        facets[f.key()] = f

    processed = list(simplex)
    rest = [i for i in range(len(pts)) if i not in set(simplex)]
    for ip in rest:
        p = pts[ip]
        visible: list[_Facet] = []
        beneath: list[_Facet] = []
        coplanar: list[_Facet] = []
        for f in facets.values():
            s = dot(f.normal, p) - f.offset
            if s > 0:
                visible.append(f)
            elif s < 0:
                beneath.append(f)
            else:
                coplanar.append(f)
        if not visible:
            for f in coplanar:
                f.on.add(ip)
            processed.append(ip)
            continue
        for f in coplanar:
            f.on.add(ip)
        new_facets: dict[tuple[int, ...], _Facet] = {}
        for fv in visible:
            for fb in beneath:
                ridge = fv.on & fb.on
                if len(ridge) < d - 1:
                    continue
                ridge_list = sorted(ridge)
                base = pts[ridge_list[0]]
                diffs = [vec_sub(pts[i], base) for i in ridge_list[1:]]
                indep = independent_rows_int(diffs)
                if len(indep) != d - 2:
                    continue
                rows = [diffs[i] for i in indep] + [vec_sub(p, base)]
                normal = hyperplane_normal_int(rows)
                if normal is None:
                    continue
                offset = dot(normal, p)
                normal, offset = oriented(normal, offset)
                nf = _Facet(normal, offset, set())
                key = nf.key()
                if key in facets or key in new_facets:
                    continue
                nf.on = {q for q in processed if dot(normal, pts[q]) == offset}
                nf.on.add(ip)
                new_facets[key] = nf
        for fv in visible:
            del facets[fv.key()]
        facets.update(new_facets)
        processed.append(ip)

    facet_list = list(facets.values())
    vertex_indices = []
    for i in processed:
        normals = [f.normal for f in facet_list if i in f.on]
        if len(normals) >= d and rank_int(normals) == d:
            vertex_indices.append(i)
    return facet_list, vertex_indices


# ---------------------------------------------------------------------------
# public types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FacetData:
    """Outer supporting halfspace normal . x <= offset of a full-dim polytope."""
    normal: tuple[int, ...]          # primitive integer outer normal
    offset: Fraction
    vertex_indices: frozenset[int]   # indices into the parent's canonical vertex list


@dataclass(frozen=True)
class Face:
    parent: "Polytope"
    vertex_indices: tuple[int, ...]
    polytope: "Polytope"
    dim: int

    @property
    def vertices(self) -> tuple[Point, ...]:
        return self.polytope.vertices


@dataclass(frozen=True)
class NormalCone:
    """Closed convex cone spanned by `generators`, apex at the origin."""
    ambient_dim: int
    generators: tuple[tuple[Fraction, ...], ...]

    def dim(self) -> int:
        if not self.generators:
            return 0
        return rank_int(_integerize(self.generators))

    def is_pointed(self) -> bool:
        """True iff the cone contains no line (exact LP certificate)."""
        gens = _integerize(self.generators)
        if not gens:
            return True
        n = self.ambient_dim
        # non-pointed <=> 0 is a nontrivial nonneg combination:
        # exists alpha >= 0 with sum alpha_i g_i = 0 and sum alpha_i = 1
        a_rows = [[Fraction(g[i]) for g in gens] for i in range(n)]
        a_rows.append([Fraction(1)] * len(gens))
        return not lp_feasible(a_rows, [Fraction(0)] * n + [Fraction(1)])

    def extreme_rays(self) -> tuple[tuple[int, ...], ...]:
        """Minimal primitive generator set (redundant generators dropped)."""
        gens = [primitive(g) for g in _integerize(self.generators)]
        gens = sorted(set(gens))
        keep = list(gens)
        i = 0
        while i < len(keep):
            others = keep[:i] + keep[i + 1:]
            if others and in_cone(others, keep[i]):
                keep.pop(i)
            else:
                i += 1
        return tuple(keep)

    def span_basis(self) -> list[tuple[int, ...]]:
        gens = _integerize(self.generators)
        idx = independent_rows_int(gens)
        return [tuple(gens[i]) for i in idx]

    def halfspaces_in_span(self) -> tuple[list[tuple[int, ...]], list[tuple[int, ...]]]:
        """(span basis B, inequality normals H) with cone = {sum u_j B_j : H u >= 0}.

        Valid for pointed cones; the normals live in span coordinates.
        """
        if not self.is_pointed():
            raise DegenerateInput("cone is not pointed")
        basis = self.span_basis()
        c = len(basis)
        rays = [_coords_in_basis(r, basis) for r in self.extreme_rays()]
        if c == 0:
            return basis, []
        if c == 1:
            return basis, [(1,)] if any(r[0] > 0 for r in rays) else [(-1,)]
        normals: dict[tuple[int, ...], tuple[int, ...]] = {}
        for subset in combinations(range(len(rays)), c - 1):
            rows = [rays[i] for i in subset]
            if rank_int(rows) != c - 1:
                continue
            nrm = hyperplane_normal_int(rows)
            if nrm is None:
                continue
            sides = [dot(nrm, r) for r in rays]
            if all(s >= 0 for s in sides):
                normals[primitive(nrm)] = primitive(nrm)
            elif all(s <= 0 for s in sides):
                neg = tuple(-x for x in nrm)
                normals[primitive(neg)] = primitive(neg)
        return basis, sorted(normals.values())


def _integerize(vectors: Sequence[Sequence[Fraction]]) -> list[tuple[int, ...]]:
    if not vectors:
        return []
    ints, _ = scale_to_ints([tuple(Fraction(x) for x in v) for v in vectors])
    return ints


def _coords_in_basis(vector: Sequence[int], basis: list[tuple[int, ...]]) -> tuple[int, ...]:
    """Integer-scaled coordinates of `vector` in the (independent) basis rows."""
    if not basis:
        return ()
    cols = independent_rows_int([tuple(b[i] for b in basis) for i in range(len(basis[0]))])
    # cols: coordinate positions making the basis square and invertible
    mat = [[Fraction(basis[j][i]) for j in range(len(basis))] for i in cols]
    rhs = [Fraction(vector[i]) for i in cols]
    u = solve(mat, rhs)
    if u is None:
        raise DegenerateInput("vector not in span of basis")
    lcm = 1
    for x in u:
        lcm = lcm // gcd(lcm, x.denominator) * x.denominator
    return tuple(int(x * lcm) for x in u)


# ---------------------------------------------------------------------------
# Polytope
# ---------------------------------------------------------------------------

class Polytope:
    """Convex polytope given by its extreme points, immutable and hashable.

    Construct through :func:`convex_hull` (arbitrary point clouds) or the
    operations below; the canonical vertex order makes equality testable.
    """

    __slots__ = ("ambient_dim", "vertices", "_lock", "_cache")

    def __init__(self, ambient_dim: int, vertices: Sequence[Point], _trusted: bool = False):
        if not _trusted:
            raise TypeError("use convex_hull() to build polytopes")
        object.__setattr__(self, "ambient_dim", ambient_dim)
        object.__setattr__(self, "vertices", tuple(vertices))
        object.__setattr__(self, "_lock", threading.RLock())
        object.__setattr__(self, "_cache", {})

    def __setattr__(self, *_):
        raise AttributeError("Polytope is immutable")

    # -- identity ----------------------------------------------------------

    def __eq__(self, other) -> bool:
        return (isinstance(other, Polytope) and self.ambient_dim == other.ambient_dim
                and self.vertices == other.vertices)

    def __hash__(self):
        return hash((self.ambient_dim, self.vertices))

    def __repr__(self):
        if len(self.vertices) <= 4:
            pts = ", ".join("(" + ", ".join(map(format_rational, v)) + ")"
                            for v in self.vertices)
        else:
            pts = f"{len(self.vertices)} vertices"
        return f"Polytope(dim={self.ambient_dim}, {pts})"

    def _cached(self, key, compute):
        cache = self._cache
        if key in cache:
            return cache[key]
        with self._lock:
            if key not in cache:
                cache[key] = compute()
            return cache[key]

    # -- basic geometry ----------------------------------------------------

    @property
    def affine_dim(self) -> int:
        return self._cached("affine_dim", self._compute_affine_dim)

    def _compute_affine_dim(self) -> int:
        if len(self.vertices) == 1:
            return 0
        ints, _ = scale_to_ints(self.vertices)
        base = ints[0]
        return rank_int([vec_sub(p, base) for p in ints[1:]])

    def is_full_dimensional(self) -> bool:
        return self.affine_dim == self.ambient_dim

    def affine_frame(self):
        """(origin p0, basis columns B, to_coords, from_coords) for aff(P).

        `to_coords` maps ambient points of aff(P) to exact coordinates in
        R^affine_dim; `from_coords` is its inverse.  For full-dimensional
        polytopes this is the identity frame.
        """
        return self._cached("frame", self._compute_frame)

    def _compute_frame(self):
        n, k = self.ambient_dim, self.affine_dim
        p0 = self.vertices[0]
        if k == n:
            ident = [tuple(Fraction(1 if i == j else 0) for j in range(n)) for i in range(n)]
            return p0, ident, None, None
        diffs = [vec_sub(v, p0) for v in self.vertices[1:]]
        ints, _ = scale_to_ints(diffs) if diffs else ([], 1)
        idx = independent_rows_int(ints)
        cols = [diffs[i] for i in idx]  # k column vectors, ambient length
        if cols:
            row_mat = [[cols[j][i] for j in range(k)] for i in range(n)]
            row_idx = independent_rows_int(_integerize(row_mat))
            square = [[cols[j][i] for j in range(k)] for i in row_idx]
            inv = matrix_inverse(square)
        else:
            row_idx, inv = [], []
        return p0, cols, row_idx, inv

    def to_affine_coords(self, point: Point) -> Point:
        p0, cols, row_idx, inv = self.affine_frame()
        if self.affine_dim == self.ambient_dim:
            return point
        diff = vec_sub(point, p0)
        rhs = [diff[i] for i in row_idx]
        return tuple(sum(inv[i][j] * rhs[j] for j in range(len(rhs)))
                     for i in range(len(rhs)))

    def from_affine_coords(self, coords: Point) -> Point:
        p0, cols, _, _ = self.affine_frame()
        if self.affine_dim == self.ambient_dim:
            return coords
        out = list(p0)
        for j, u in enumerate(coords):
            if u:
                out = [a + u * b for a, b in zip(out, cols[j])]
        return tuple(out)

    def coordinate_polytope(self) -> "Polytope":
        """This polytope mapped into R^affine_dim through its affine frame."""
        if self.affine_dim == self.ambient_dim:
            return self
        pts = [self.to_affine_coords(v) for v in self.vertices]
        return Polytope(self.affine_dim, sorted(set(pts)), _trusted=True)

    def support(self, direction: Sequence) -> Fraction:
        """Supporting value max_{x in P} <direction, x> (exact)."""
        y = as_point(direction)
        if len(y) != self.ambient_dim:
            raise DimensionMismatch("direction has wrong length")
        return max(dot(y, v) for v in self.vertices)

    def bounding_box(self) -> tuple[Point, Point]:
        lo = tuple(min(v[i] for v in self.vertices) for i in range(self.ambient_dim))
        hi = tuple(max(v[i] for v in self.vertices) for i in range(self.ambient_dim))
        return lo, hi

    def translate(self, shift: Sequence) -> "Polytope":
        s = as_point(shift)
        if len(s) != self.ambient_dim:
            raise DimensionMismatch("shift has wrong length")
        if all(x == 0 for x in s):
            return self
        return Polytope(self.ambient_dim,
                        [vec_add(v, s) for v in self.vertices], _trusted=True)

    def scale(self, factor) -> "Polytope":
        t = Fraction(factor)
        if t == 1:
            return self
        if t == 0:
            return Polytope(self.ambient_dim,
                            [(Fraction(0),) * self.ambient_dim], _trusted=True)
        pts = [vec_scale(t, v) for v in self.vertices]
        if t < 0:
            pts = sorted(pts)
        return Polytope(self.ambient_dim, pts, _trusted=True)

    # -- facets / faces ----------------------------------------------------

    def facets(self) -> tuple[FacetData, ...]:
        """Outer facet halfspaces; requires a full-dimensional polytope."""
        if not self.is_full_dimensional():
            raise NotFullDimensional(
                f"polytope has affine dim {self.affine_dim} < ambient {self.ambient_dim}")
        return self._cached("facets", self._compute_facets)

    def _compute_facets(self) -> tuple[FacetData, ...]:
        n = self.ambient_dim
        ints, lcm = scale_to_ints(self.vertices)
        out = []
        if n == 1:
            lo, hi = 0, len(ints) - 1  # vertices sorted lexicographically
            out.append(FacetData((-1,), Fraction(-ints[lo][0], lcm), frozenset([lo])))
            out.append(FacetData((1,), Fraction(ints[hi][0], lcm), frozenset([hi])))
        elif n == 2:
            ring = _hull_2d_ring(ints)
            m = len(ring)
            for a in range(m):
                i, j = ring[a], ring[(a + 1) % m]
                dx, dy = vec_sub(ints[j], ints[i])
                normal = primitive((dy, -dx))
                offset = Fraction(dot(normal, ints[i]), lcm)
                out.append(FacetData(normal, offset, frozenset([i, j])))
        else:
            facet_list, _ = _incremental_hull(ints)
            for f in facet_list:
                out.append(FacetData(tuple(f.normal), Fraction(f.offset, lcm),
                                     frozenset(f.on)))
        return tuple(sorted(out, key=lambda f: (f.normal, f.offset)))

    def ring_order(self) -> list[int]:
        """Vertex indices in counterclockwise boundary order (2-dimensional only)."""
        if self.ambient_dim != 2 or not self.is_full_dimensional():
            raise NotFullDimensional("ring order requires a full-dimensional polygon")
        ints, _ = scale_to_ints(self.vertices)
        return self._cached("ring", lambda: _hull_2d_ring(ints))

    def faces(self, k: int) -> tuple[Face, ...]:
        """All closed k-faces of a full-dimensional polytope; faces(n) = (P,)."""
        n = self.ambient_dim
        if not 0 <= k <= n:
            raise ValueError(f"face dimension {k} out of range")
        table = self._cached("faces", self._compute_faces)
        return table.get(k, ())

    def _compute_faces(self) -> dict[int, tuple[Face, ...]]:
        facets = self.facets()
        facet_sets = [f.vertex_indices for f in facets]
        known: set[frozenset[int]] = set(facet_sets)
        frontier = set(facet_sets)
        while frontier:
            fresh: set[frozenset[int]] = set()
            for s in frontier:
                for g in facet_sets:
                    h = s & g
                    if h and h not in known and h not in fresh:
                        fresh.add(h)
            known |= fresh
            frontier = fresh
        ints, _ = scale_to_ints(self.vertices)
        by_dim: dict[int, list[Face]] = {}
        for s in known:
            idx = tuple(sorted(s))
            pts = [ints[i] for i in idx]
            d = rank_int([vec_sub(p, pts[0]) for p in pts[1:]]) if len(pts) > 1 else 0
            sub = Polytope(self.ambient_dim, sorted(self.vertices[i] for i in idx),
                           _trusted=True)
            by_dim.setdefault(d, []).append(Face(self, idx, sub, d))
        whole = Face(self, tuple(range(len(self.vertices))), self, self.ambient_dim)
        by_dim[self.ambient_dim] = [whole]
        return {d: tuple(sorted(fl, key=lambda f: f.vertex_indices))
                for d, fl in by_dim.items()}

    def all_faces(self) -> tuple[Face, ...]:
        """Every face of every dimension 0..n, in dimension order."""
        table = self._cached("faces", self._compute_faces)
        out: list[Face] = []
        for d in sorted(table):
            out.extend(table[d])
        return tuple(out)

    def normal_cone(self, face: Face) -> NormalCone:
        """Outer normal cone of a face; the paper-side inner convention differs
        by the antipodal flip, which is applied nowhere else in the package."""
        if face.parent is not self and face.parent != self:
            raise NotAFace("face belongs to a different polytope")
        if face.dim == self.ambient_dim:
            return NormalCone(self.ambient_dim, ())
        idx = set(face.vertex_indices)
        gens = [tuple(Fraction(x) for x in f.normal)
                for f in self.facets() if idx <= f.vertex_indices]
        if not gens:
            raise NotAFace("vertex set is not a face of this polytope")
        return NormalCone(self.ambient_dim, tuple(sorted(gens)))

    # -- volume ------------------------------------------------------------

    def triangulate(self) -> tuple["Polytope", ...]:
        """Simplices with disjoint relative interiors whose union is P."""
        return self._cached("triangulation", self._compute_triangulation)

    def _compute_triangulation(self) -> tuple["Polytope", ...]:
        k = self.affine_dim
        verts = self.vertices
        if len(verts) == k + 1:
            return (self,)
        if k < self.ambient_dim:
            coords = self.coordinate_polytope()
            out = []
            for simplex in coords.triangulate():
                pts = sorted(self.from_affine_coords(u) for u in simplex.vertices)
                out.append(Polytope(self.ambient_dim, pts, _trusted=True))
            return tuple(out)
        n = self.ambient_dim
        if n == 2:
            ring = self.ring_order()
            apex = ring[0]
            out = []
            for a in range(1, len(ring) - 1):
                tri = sorted([verts[apex], verts[ring[a]], verts[ring[a + 1]]])
                out.append(Polytope(2, tri, _trusted=True))
            return tuple(out)
        apex_idx = 0
        apex = verts[apex_idx]
        out = []
        for f in self.facets():
            if apex_idx in f.vertex_indices:
                continue
            sub = Polytope(n, sorted(verts[i] for i in f.vertex_indices), _trusted=True)
            for piece in sub.triangulate():
                out.append(Polytope(n, sorted(piece.vertices + (apex,)), _trusted=True))
        return tuple(out)

    def volume(self) -> Fraction:
        """Lebesgue volume in the ambient space; 0 when lower-dimensional."""
        return self._cached("volume", self._compute_volume)

    def _compute_volume(self) -> Fraction:
        n = self.ambient_dim
        if self.affine_dim < n:
            return Fraction(0)
        ints, lcm = scale_to_ints(self.vertices)
        index_of = {v: i for i, v in enumerate(self.vertices)}
        total = 0
        fact = 1
        for i in range(2, n + 1):
            fact *= i
        for simplex in self.triangulate():
            rows = []
            base = ints[index_of[simplex.vertices[0]]]
            for v in simplex.vertices[1:]:
                rows.append(vec_sub(ints[index_of[v]], base))
            total += abs(det_int(rows))
        return Fraction(total, fact * lcm ** n)

    # -- sections and splits -------------------------------------------------

    def _edge_crossings(self, a: Point, c: Fraction) -> list[Point]:
        n = self.ambient_dim
        if self.affine_dim == 1:
            edges = [tuple(self.vertices)]
        else:
            edges = [f.vertices for f in self.faces(1)]
        out = []
        for u, v in edges:
            su, sv = dot(a, u) - c, dot(a, v) - c
            if (su < 0 < sv) or (sv < 0 < su):
                t = su / (su - sv)
                out.append(tuple(x + t * (y - x) for x, y in zip(u, v)))
        return out

    def _split3(self, normal: Sequence, offset) -> tuple["Polytope", "Polytope", "Polytope"]:
        a = as_point(normal)
        c = Fraction(offset)
        if len(a) != self.ambient_dim:
            raise DimensionMismatch("hyperplane normal has wrong length")
        if self.affine_dim < self.ambient_dim:
            # work in the affine hull; the halfspace restricts to one there
            frame_poly = self.coordinate_polytope()
            p0 = self.vertices[0]
            _, cols, _, _ = self.affine_frame()
            a_red = tuple(dot(a, col) for col in cols)
            c_red = c - dot(a, p0)
            if all(x == 0 for x in a_red):
                side = dot(a, p0) - c
                if side == 0:
                    return self, self, self
                raise DegenerateInput("hyperplane does not meet the polytope")
            lo, hi, sec = frame_poly._split3(a_red, c_red)
            lift = lambda poly: convex_hull(
                [self.from_affine_coords(u) for u in poly.vertices], self.ambient_dim)
            return lift(lo), lift(hi), lift(sec)
        values = [dot(a, v) - c for v in self.vertices]
        if all(v <= 0 for v in values) or all(v >= 0 for v in values):
            on = [v for v, s in zip(self.vertices, values) if s == 0]
            if not on:
                raise DegenerateInput("hyperplane does not meet the polytope")
            section = convex_hull(on, self.ambient_dim)
            if all(v <= 0 for v in values):
                return self, section, section
            return section, self, section
        crossings = self._edge_crossings(a, c)
        on = [v for v, s in zip(self.vertices, values) if s == 0] + crossings
        below = [v for v, s in zip(self.vertices, values) if s < 0]
        above = [v for v, s in zip(self.vertices, values) if s > 0]
        lo = convex_hull(below + on, self.ambient_dim)
        hi = convex_hull(above + on, self.ambient_dim)
        sec = convex_hull(on, self.ambient_dim)
        return lo, hi, sec

    def split_by_hyperplane(self, normal: Sequence, offset) -> tuple["Polytope", "Polytope"]:
        """Closed pieces (P on the <= side, P on the >= side) of a hyperplane cut."""
        lo, hi, _ = self._split3(normal, offset)
        return lo, hi

    def hyperplane_section(self, normal: Sequence, offset) -> "Polytope":
        """The slice P intersected with {x : normal . x = offset}."""
        _, _, sec = self._split3(normal, offset)
        return sec

    # -- serialization -------------------------------------------------------

    def to_record(self) -> dict:
        return {"vertices": [[format_rational(x) for x in v] for v in self.vertices]}

    @staticmethod
    def from_record(record: dict, ambient_dim: int | None = None) -> "Polytope":
        pts = [tuple(parse_rational(x) for x in row) for row in record["vertices"]]
        return convex_hull(pts, ambient_dim)


# ---------------------------------------------------------------------------
# constructors and binary operations
# ---------------------------------------------------------------------------

def convex_hull(points: Iterable[Sequence], ambient_dim: int | None = None) -> Polytope:
    """Polytope spanned by an arbitrary point cloud (redundant points dropped)."""
    pts = [as_point(p) for p in points]
    if not pts:
        raise EmptyInput("convex hull of no points")
    n = len(pts[0])
    if ambient_dim is not None and n != ambient_dim:
        raise DimensionMismatch(f"points have dim {n}, expected {ambient_dim}")
    for p in pts:
        if len(p) != n:
            raise DimensionMismatch("points have mixed dimensions")
    uniq = sorted(set(pts))
    if len(uniq) == 1:
        return Polytope(n, uniq, _trusted=True)
    ints, _ = scale_to_ints(uniq)
    base = ints[0]
    diffs = [vec_sub(p, base) for p in ints[1:]]
    basis_rows = independent_rows_int(diffs)
    k = len(basis_rows)
    if k == n:
        coords = ints
    else:
        cols = [diffs[i] for i in basis_rows]           # k spanning directions
        row_mat = [[cols[j][i] for j in range(k)] for i in range(n)]
        row_idx = independent_rows_int(row_mat)
        square = [[Fraction(cols[j][i]) for j in range(k)] for i in row_idx]
        inv = matrix_inverse(square)
        coords = []
        for p in ints:
            d = vec_sub(p, base)
            rhs = [Fraction(d[i]) for i in row_idx]
            u = tuple(sum(inv[i][j] * rhs[j] for j in range(k)) for i in range(k))
            coords.append(u)
        coords, _ = scale_to_ints(coords)
    if k == 0:
        keep = [0]
    elif k == 1:
        keep = _hull_1d(coords)
    elif k == 2:
        keep = _hull_2d_ring(coords)
    else:
        _, keep = _incremental_hull(coords)
    return Polytope(n, sorted(uniq[i] for i in keep), _trusted=True)


def minkowski_sum(p: Polytope, q: Polytope) -> Polytope:
    """Minkowski sum P + Q = {x + y}; the origin polytope is the unit."""
    if p.ambient_dim != q.ambient_dim:
        raise DimensionMismatch(
            f"ambient dims differ: {p.ambient_dim} vs {q.ambient_dim}")
    if len(q.vertices) == 1:
        return p.translate(q.vertices[0])
    if len(p.vertices) == 1:
        return q.translate(p.vertices[0])
    candidates = {vec_add(u, v) for u in p.vertices for v in q.vertices}
    return convex_hull(candidates, p.ambient_dim)


def affine_image(p: Polytope, matrix: Sequence[Sequence], shift: Sequence | None = None) -> Polytope:
    """Image {M x + s : x in P}; dimension-raising embeddings are allowed."""
    rows = [as_point(r) for r in matrix]
    m = len(rows)
    if any(len(r) != p.ambient_dim for r in rows):
        raise DimensionMismatch("matrix shape does not match the polytope")
    s = as_point(shift) if shift is not None else (Fraction(0),) * m
    if len(s) != m:
        raise DimensionMismatch("shift length does not match the matrix")
    mapped = [tuple(dot(r, v) + si for r, si in zip(rows, s)) for v in p.vertices]
    # injective maps preserve extreme points, so the hull can be skipped
    cols = [[rows[i][j] for i in range(m)] for j in range(p.ambient_dim)]
    injective = rank_int(_integerize(cols)) == p.ambient_dim if p.ambient_dim else True
    if injective:
        return Polytope(m, sorted(set(mapped)), _trusted=True)
    return convex_hull(mapped, m)


def embed_in_product(p: Polytope, total_dim: int, offset: int) -> Polytope:
    """Embed P into R^total_dim at coordinate block `offset`, zero elsewhere."""
    n = p.ambient_dim
    if offset < 0 or offset + n > total_dim:
        raise DimensionMismatch("embedding block out of range")
    zero = Fraction(0)
    pts = [(zero,) * offset + v + (zero,) * (total_dim - offset - n) for v in p.vertices]
    return Polytope(total_dim, sorted(pts), _trusted=True)


def diagonal_embedding(p: Polytope, copies: int) -> Polytope:
    """Image of P under x -> (x, x, ..., x) with the given number of copies."""
    if copies < 1:
        raise ValueError("need at least one copy")
    pts = [v * copies for v in p.vertices]
    return Polytope(p.ambient_dim * copies, sorted(pts), _trusted=True)


def box(sides: Sequence, origin: Sequence | None = None) -> Polytope:
    """Axis-aligned box prod [o_i, o_i + a_i]."""
    a = as_point(sides)
    n = len(a)
    o = as_point(origin) if origin is not None else (Fraction(0),) * n
    corners = []
    for mask in range(1 << n):
        corners.append(tuple(o[i] + (a[i] if mask >> i & 1 else 0) for i in range(n)))
    return convex_hull(corners, n)


def simplex(n: int, scale_factor=1) -> Polytope:
    """Corner simplex conv{0, t e_1, ..., t e_n}."""
    t = Fraction(scale_factor)
    pts = [(Fraction(0),) * n]
    for i in range(n):
        v = [Fraction(0)] * n
        v[i] = t
        pts.append(tuple(v))
    return convex_hull(pts, n)


def segment(start: Sequence, end: Sequence) -> Polytope:
    return convex_hull([as_point(start), as_point(end)])
