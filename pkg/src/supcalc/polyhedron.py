"""Convex polyhedra with exact dual representations.

A polyhedron is stored by constraints (H-form)

    P = { x : a_i . x <= b_i,  e_j . x == d_j }

and can produce a generator form (V-form): a finite set of points V and
rays R with  P = conv(V) + cone(R).  Unbounded lines are encoded as two
opposite rays.  When P is not pointed the points in V are not extreme
points of P (none exist); they are a minimal set of representatives
produced by the conversion, which is deterministic.

Conversion in both directions runs the double description method on the
homogenization cone  {(x, t) : a_i.x <= b_i t, e_j.x == d_j t, t >= 0}:
rays with t > 0 map to points of P, rays with t = 0 to recession
directions, and lineality basis vectors to lines.  The V->H direction is
the same computation applied to the polar cone, whose extreme rays are
the facet normals.  Generators and constraints are canonicalized
(coprime integer coefficients, fixed sort order), so equal inputs give
byte-equal outputs.

Conversions refuse to run above a dimension cap (default 6) which can be
overridden through the SUPCALC_DD_CAP environment variable.
"""
from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import gcd
from typing import Iterable, Sequence

from .errors import (
    CapacityError,
    DimensionMismatchError,
    EmptySetError,
    InvalidParameterError,
)
from .lp import LPStatus, Row, feasible_point, solve_max
from .rationals import (
    NEG_INF,
    POS_INF,
    ExtendedRational,
    Vec,
    dot,
    vadd,
    vec,
    zeros,
)

DEFAULT_DD_CAP = 6


def dd_dimension_cap() -> int:
    raw = os.environ.get("SUPCALC_DD_CAP")
    if raw is None:
        return DEFAULT_DD_CAP
    try:
        cap = int(raw)
    except ValueError as exc:
        raise InvalidParameterError(f"SUPCALC_DD_CAP not an integer: {raw!r}") from exc
    if cap < 1:
        raise InvalidParameterError("SUPCALC_DD_CAP must be positive")
    return cap


# ============================================================
# Integer vector helpers
# ============================================================

IVec = tuple[int, ...]


def _int_normalize(entries: Sequence[Fraction]) -> IVec:
    """Scale by a positive rational to coprime integers (direction kept)."""
    k = 1
    for e in entries:
        k = k // gcd(k, e.denominator) * e.denominator
    ints = [int(e * k) for e in entries]
    g = 0
    for t in ints:
        g = gcd(g, t)
    if g > 1:
        ints = [t // g for t in ints]
    return tuple(ints)


def _sign_normalize(v: IVec) -> IVec:
    for t in v:
        if t != 0:
            return v if t > 0 else tuple(-x for x in v)
    return v


def _idot(a: IVec, b: IVec) -> int:
    return sum(x * y for x, y in zip(a, b))


def _icomb(ca: int, a: IVec, cb: int, b: IVec) -> IVec:
    raw = tuple(ca * x + cb * y for x, y in zip(a, b))
    g = 0
    for t in raw:
        g = gcd(g, t)
    if g > 1:
        raw = tuple(t // g for t in raw)
    return raw


# ============================================================
# Double description on a cone {y : <m, y> <= 0}
# ============================================================

def dd_cone(norms: Sequence[IVec], dim: int) -> tuple[list[IVec], list[IVec]]:
    """Extreme rays and a lineality basis of an H-form cone.

    Incremental double description: a lineality basis L and a ray list R
    are maintained so that the cone cut out by the constraints processed
    so far equals span(L) + cone(R), with R irredundant modulo L.  A new
    constraint either consumes one lineality direction or splits R by
    sign, combining adjacent (positive, negative) pairs.  Adjacency is
    the standard combinatorial test on zero-sets of processed rows.
    """
    lines: list[IVec] = [
        tuple(1 if j == i else 0 for j in range(dim)) for i in range(dim)
    ]
    rays: list[IVec] = []
    zsets: list[int] = []  # bitmask of processed constraints tight at the ray

    seen: set[IVec] = set()
    todo: list[IVec] = []
    for m in norms:
        if all(t == 0 for t in m):
            continue
        if m not in seen:
            seen.add(m)
            todo.append(m)

    for idx, m in enumerate(todo):
        vals_l = [_idot(m, l) for l in lines]
        j0 = next((j for j, v in enumerate(vals_l) if v != 0), None)
        if j0 is not None:
            l0, v0 = lines[j0], vals_l[j0]
            new_lines = []
            for j, l in enumerate(lines):
                if j == j0:
                    continue
                if vals_l[j] == 0:
                    new_lines.append(l)
                else:
                    new_lines.append(_sign_normalize(_icomb(v0, l, -vals_l[j], l0)))
            new_rays, new_z = [], []
            for r, z in zip(rays, zsets):
                vr = _idot(m, r)
                if vr == 0:
                    new_rays.append(r)
                else:
                    comb = _icomb(v0, r, -vr, l0)
                    if v0 < 0:
                        comb = tuple(-t for t in comb)
                    new_rays.append(comb)
                new_z.append(z | (1 << idx))
            boundary = tuple(-t for t in l0) if v0 > 0 else l0
            new_rays.append(boundary)
            new_z.append((1 << idx) - 1)
            lines, rays, zsets = new_lines, new_rays, new_z
            continue

        vals_r = [_idot(m, r) for r in rays]
        if all(v <= 0 for v in vals_r):
            zsets = [
                z | (1 << idx) if v == 0 else z for z, v in zip(zsets, vals_r)
            ]
            continue

        keep_rays, keep_z = [], []
        pos, neg = [], []
        for k, v in enumerate(vals_r):
            if v > 0:
                pos.append(k)
            else:
                if v < 0:
                    neg.append(k)
                    keep_z.append(zsets[k])
                else:
                    keep_z.append(zsets[k] | (1 << idx))
                keep_rays.append(rays[k])

        for kp in pos:
            for kn in neg:
                zc = zsets[kp] & zsets[kn]
                adjacent = True
                for ko in range(len(rays)):
                    if ko in (kp, kn):
                        continue
                    if zsets[ko] & zc == zc:
                        adjacent = False
                        break
                if not adjacent:
                    continue
                w = _icomb(vals_r[kp], rays[kn], -vals_r[kn], rays[kp])
                keep_rays.append(w)
                keep_z.append(zc | (1 << idx))
        rays, zsets = keep_rays, keep_z

    return rays, lines


# ============================================================
# Polyhedron
# ============================================================

def _canonical_rows(rows: Iterable[Row], dim: int, equality: bool) -> tuple[tuple[IVec, ...], bool]:
    """Canonical integer rows; second result reports syntactic infeasibility."""
    out = set()
    infeasible = False
    for a, b in rows:
        a = vec(a)
        if len(a) != dim:
            raise DimensionMismatchError("constraint arity mismatch")
        b = Fraction(b)
        if all(t == 0 for t in a):
            if (equality and b != 0) or (not equality and b < 0):
                infeasible = True
            continue
        row = _int_normalize(tuple(a) + (b,))
        if equality:
            row = _sign_normalize(row)
        out.add(row)
    return tuple(sorted(out)), infeasible


def _rows_to_fractions(rows: Iterable[IVec]) -> tuple[Row, ...]:
    return tuple(
        (tuple(Fraction(t) for t in r[:-1]), Fraction(r[-1])) for r in rows
    )


@dataclass(frozen=True)
class Polyhedron:
    """Immutable H-form polyhedron; V-form computed on demand and cached."""

    dim: int
    ineqs: tuple[Row, ...]
    eqs: tuple[Row, ...]

    # -- construction -------------------------------------------------

    @staticmethod
    def from_hrep(dim: int, ineqs: Iterable[Row] = (), eqs: Iterable[Row] = ()) -> "Polyhedron":
        if dim < 1:
            raise InvalidParameterError("dimension must be at least 1")
        rows_i, bad_i = _canonical_rows(ineqs, dim, equality=False)
        rows_e, bad_e = _canonical_rows(eqs, dim, equality=True)
        if bad_i or bad_e:
            return Polyhedron.empty(dim)
        return Polyhedron(dim, _rows_to_fractions(rows_i), _rows_to_fractions(rows_e))

    @staticmethod
    def from_generators(dim: int, vertices: Iterable[Vec] = (), rays: Iterable[Vec] = ()) -> "Polyhedron":
        if dim < 1:
            raise InvalidParameterError("dimension must be at least 1")
        vs = [vec(v) for v in vertices]
        rs = [vec(r) for r in rays]
        for g in vs + rs:
            if len(g) != dim:
                raise DimensionMismatchError("generator arity mismatch")
        rs = [r for r in rs if any(t != 0 for t in r)]
        if not vs:
            return Polyhedron.empty(dim)
        _check_cap(dim)
        norms = [_int_normalize(tuple(v) + (Fraction(1),)) for v in vs]
        norms += [_int_normalize(tuple(r) + (Fraction(0),)) for r in rs]
        polar_rays, polar_lines = dd_cone(norms, dim + 1)
        ineqs = [
            (tuple(Fraction(t) for t in g[:-1]), Fraction(-g[-1]))
            for g in polar_rays
        ]
        eqs = [
            (tuple(Fraction(t) for t in g[:-1]), Fraction(-g[-1]))
            for g in polar_lines
        ]
        return Polyhedron.from_hrep(dim, ineqs, eqs)

    @staticmethod
    def empty(dim: int) -> "Polyhedron":
        marker = ((tuple(Fraction(0) for _ in range(dim)), Fraction(-1)),)
        return Polyhedron(dim, marker, ())

    @staticmethod
    def full_space(dim: int) -> "Polyhedron":
        return Polyhedron.from_hrep(dim)

    @staticmethod
    def box(lo: Sequence, hi: Sequence) -> "Polyhedron":
        lo, hi = vec(lo), vec(hi)
        dim = len(lo)
        rows: list[Row] = []
        for i in range(dim):
            e = tuple(Fraction(1 if j == i else 0) for j in range(dim))
            rows.append((e, hi[i]))
            rows.append((tuple(-t for t in e), -lo[i]))
        return Polyhedron.from_hrep(dim, rows)

    @staticmethod
    def single_point(x: Sequence) -> "Polyhedron":
        x = vec(x)
        eqs = [
            (tuple(Fraction(1 if j == i else 0) for j in range(len(x))), x[i])
            for i in range(len(x))
        ]
        return Polyhedron.from_hrep(len(x), (), eqs)

    # -- basic predicates ---------------------------------------------

    @cached_property
    def is_empty(self) -> bool:
        return feasible_point(self.dim, self.ineqs, self.eqs) is None

    def contains(self, x: Sequence) -> bool:
        x = vec(x)
        if len(x) != self.dim:
            raise DimensionMismatchError("point arity mismatch")
        return all(dot(a, x) <= b for a, b in self.ineqs) and all(
            dot(a, x) == b for a, b in self.eqs
        )

    def contains_in_interior(self, x: Sequence) -> bool:
        """Membership in the topological interior (not merely relative)."""
        x = vec(x)
        if self.eqs:
            return False
        return all(dot(a, x) < b for a, b in self.ineqs)

    def contains_ray(self, r: Sequence) -> bool:
        """Does the recession cone contain direction r?"""
        r = vec(r)
        return all(dot(a, r) <= 0 for a, _ in self.ineqs) and all(
            dot(a, r) == 0 for a, _ in self.eqs
        )

    # -- generator form -----------------------------------------------

    @cached_property
    def generators(self) -> tuple[tuple[Vec, ...], tuple[Vec, ...]]:
        """(points, rays) with P = conv(points) + cone(rays), canonical."""
        _check_cap(self.dim)
        norms: list[IVec] = []
        for a, b in self.ineqs:
            norms.append(_int_normalize(tuple(a) + (-b,)))
        for a, b in self.eqs:
            base = _int_normalize(tuple(a) + (-b,))
            norms.append(base)
            norms.append(tuple(-t for t in base))
        norms.append(tuple([0] * self.dim + [-1]))  # homogenizing t >= 0
        hom_rays, hom_lines = dd_cone(norms, self.dim + 1)

        verts: set[Vec] = set()
        rays: set[IVec] = set()
        for r in hom_rays:
            t = r[-1]
            if t > 0:
                verts.add(tuple(Fraction(c, t) for c in r[:-1]))
            elif any(c != 0 for c in r[:-1]):
                g = 0
                for c in r[:-1]:
                    g = gcd(g, c)
                rays.add(tuple(c // g for c in r[:-1]) if g > 1 else r[:-1])
        for l in hom_lines:
            body = l[:-1]
            if any(c != 0 for c in body):
                rays.add(body)
                rays.add(tuple(-c for c in body))
        if not verts:
            return ((), ())
        ray_vecs = tuple(
            tuple(Fraction(c) for c in r) for r in sorted(rays)
        )
        return (tuple(sorted(verts)), ray_vecs)

    @property
    def vertices(self) -> tuple[Vec, ...]:
        return self.generators[0]

    @property
    def rays(self) -> tuple[Vec, ...]:
        return self.generators[1]


def _check_cap(dim: int) -> None:
    cap = dd_dimension_cap()
    if dim > cap:
        raise CapacityError(
            f"representation conversion in dimension {dim} exceeds cap {cap}"
        )


# ============================================================
# Operations
# ============================================================

def dd_convert(p: Polyhedron, direction: str = "H->V") -> Polyhedron:
    """Materialize the other representation; both are then consistent.

    ``H->V`` ensures generators are available; ``V->H`` rebuilds a
    canonical irredundant constraint form from the generators.  The
    round trip is audited by mutual inclusion.
    """
    if direction == "H->V":
        p.generators  # computed and cached
        return p
    if direction == "V->H":
        verts, rays = p.generators
        q = Polyhedron.from_generators(p.dim, verts, rays)
        if not polyhedron_equal(p, q):
            raise InvalidParameterError("representation round trip failed audit")
        return q
    raise InvalidParameterError(f"unknown direction {direction!r}")


def recession_cone(p: Polyhedron) -> Polyhedron:
    """{d : x + t d in P for all x in P, t >= 0}; undefined on empty sets."""
    if p.is_empty:
        raise EmptySetError("recession cone of an empty polyhedron")
    rows = [(a, Fraction(0)) for a, _ in p.ineqs]
    eqs = [(a, Fraction(0)) for a, _ in p.eqs]
    return Polyhedron.from_hrep(p.dim, rows, eqs)


def lineality_space(p: Polyhedron) -> Polyhedron:
    if p.is_empty:
        raise EmptySetError("lineality space of an empty polyhedron")
    eqs = [(a, Fraction(0)) for a, _ in p.ineqs]
    eqs += [(a, Fraction(0)) for a, _ in p.eqs]
    return Polyhedron.from_hrep(p.dim, (), eqs)


def is_pointed(p: Polyhedron) -> bool:
    """True when the lineality space is trivial."""
    lin = lineality_space(p)
    return cone_is_trivial(p.dim, list(lin.ineqs), list(lin.eqs))


def cone_is_trivial(dim: int, ineqs: Sequence[Row], eqs: Sequence[Row]) -> bool:
    """Is the H-form cone {0}?  Decided by 2*dim boxed coordinate LPs.

    The cone contains a nonzero point iff it contains one in the unit
    box with some coordinate equal to +-1, so maximizing each signed
    coordinate over (cone intersect box) detects nontriviality exactly.
    """
    box = Polyhedron.box([-1] * dim, [1] * dim)
    rows = list(ineqs) + list(box.ineqs)
    for i in range(dim):
        for sign in (1, -1):
            obj = tuple(Fraction(sign if j == i else 0) for j in range(dim))
            res = solve_max(obj, rows, list(eqs))
            if res.status is LPStatus.OPTIMAL and res.optimum.finite_value() > 0:
                return False
    return True


def cco_union(parts: Sequence[Polyhedron]) -> Polyhedron:
    """Closed convex hull of a finite union (generator union)."""
    parts = list(parts)
    if not parts:
        raise InvalidParameterError("cco_union of no sets")
    dim = parts[0].dim
    verts: list[Vec] = []
    rays: list[Vec] = []
    nonempty = False
    for p in parts:
        if p.dim != dim:
            raise DimensionMismatchError("cco_union arity mismatch")
        if p.is_empty:
            continue
        nonempty = True
        vs, rs = p.generators
        verts.extend(vs)
        rays.extend(rs)
    if not nonempty:
        raise EmptySetError("cco_union of empty sets only")
    return Polyhedron.from_generators(dim, verts, rays)


def minkowski_sum(p: Polyhedron, q: Polyhedron) -> Polyhedron:
    if p.dim != q.dim:
        raise DimensionMismatchError("minkowski_sum arity mismatch")
    if p.is_empty or q.is_empty:
        raise EmptySetError("minkowski_sum of an empty polyhedron")
    pv, pr = p.generators
    qv, qr = q.generators
    verts = [vadd(a, b) for a in pv for b in qv]
    return Polyhedron.from_generators(p.dim, verts, list(pr) + list(qr))


def intersect(p: Polyhedron, q: Polyhedron) -> Polyhedron:
    if p.dim != q.dim:
        raise DimensionMismatchError("intersect arity mismatch")
    return Polyhedron.from_hrep(
        p.dim, list(p.ineqs) + list(q.ineqs), list(p.eqs) + list(q.eqs)
    )


def polyhedron_equal(p: Polyhedron, q: Polyhedron) -> bool:
    """Set equality via mutual generator containment (exact)."""
    if p.dim != q.dim:
        raise DimensionMismatchError("polyhedron_equal arity mismatch")
    if p.is_empty or q.is_empty:
        return p.is_empty and q.is_empty
    return _included(p, q) and _included(q, p)


def _included(p: Polyhedron, q: Polyhedron) -> bool:
    verts, rays = p.generators
    return all(q.contains(v) for v in verts) and all(q.contains_ray(r) for r in rays)


def included(p: Polyhedron, q: Polyhedron) -> bool:
    """Is P a subset of Q?  Empty P is included in anything."""
    if p.dim != q.dim:
        raise DimensionMismatchError("included arity mismatch")
    if p.is_empty:
        return True
    if q.is_empty:
        return False
    return _included(p, q)


def interior_point(p: Polyhedron) -> Vec | None:
    """A point with strictly positive slack on every inequality.

    Returns None when the interior is empty: explicit equalities, an
    implicit equality (maximal slack zero), or emptiness.  The point is
    the deterministic maximizer of the smallest constraint slack.
    """
    if p.eqs or p.is_empty:
        return None
    n = p.dim
    # variables (x, s): maximize s subject to a.x + s <= b, s <= 1
    rows: list[Row] = []
    for a, b in p.ineqs:
        rows.append((tuple(a) + (Fraction(1),), b))
    rows.append((zeros(n) + (Fraction(1),), Fraction(1)))
    res = solve_max(zeros(n) + (Fraction(1),), rows)
    if res.status is not LPStatus.OPTIMAL:
        return None
    s = res.optimum.finite_value()
    if s <= 0:
        return None
    return res.primal_point[:n]


def affine_preimage(p: Polyhedron, matrix: Sequence[Vec], offset: Vec) -> Polyhedron:
    """{z : M z + c in P} where matrix rows are the rows of M."""
    if len(matrix) != p.dim or len(offset) != p.dim:
        raise DimensionMismatchError("affine_preimage shape mismatch")
    src_dim = len(matrix[0]) if matrix else 0
    if src_dim < 1:
        raise InvalidParameterError("affine_preimage needs a positive source dimension")

    def pull(a: Vec, b: Fraction) -> Row:
        coeff = tuple(
            sum(a[i] * matrix[i][j] for i in range(p.dim)) for j in range(src_dim)
        )
        return (coeff, b - dot(a, offset))

    return Polyhedron.from_hrep(
        src_dim,
        [pull(a, b) for a, b in p.ineqs],
        [pull(a, b) for a, b in p.eqs],
    )


def support_value(p: Polyhedron, direction: Sequence) -> ExtendedRational:
    """sup over P of <direction, x>, from the generator form."""
    d = vec(direction)
    verts, rays = p.generators
    if not verts:
        return NEG_INF
    if any(dot(d, r) > 0 for r in rays):
        return POS_INF
    return ExtendedRational.finite(max(dot(d, v) for v in verts))
