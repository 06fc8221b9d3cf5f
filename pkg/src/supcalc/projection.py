"""Exact projection of a lifted constraint system onto few coordinates.

Computes the closed image  pi(S) = { C x : x in S }  of a polyhedron
S in R^N under a linear map C with a low-dimensional range, without ever
running a vertex enumeration in R^N.  Only the image dimension is
subject to the double description cap; N may be large.

The method maintains an inner approximation Q = conv(points) + cone(rays)
built from images of points and rays of S, so Q is a subset of pi(S) at
every step.  Each facet (and each implicit equality) of Q is tested by a
support LP over S; a violation yields a new image point or recession
direction, which strictly enlarges Q.  Since the simplex solver only
returns basic solutions, of which there are finitely many, the loop
terminates with Q = closure(pi(S)).
"""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .errors import LPInternalError
from .lp import LPStatus, Row, solve_max
from .polyhedron import Polyhedron
from .rationals import Vec, dot, vec

_MAX_ROUNDS = 10_000


def _image(matrix: Sequence[Vec], x: Vec) -> Vec:
    return tuple(dot(row, x) for row in matrix)


def _pullback(matrix: Sequence[Vec], a: Vec) -> Vec:
    src = len(matrix[0])
    return tuple(
        sum(a[i] * matrix[i][j] for i in range(len(matrix))) for j in range(src)
    )


def project(
    src_dim: int,
    ineqs: Sequence[Row],
    eqs: Sequence[Row],
    matrix: Sequence[Vec],
) -> Polyhedron:
    """Closure of {C x : x satisfies the rows}, as a Polyhedron.

    ``matrix`` holds the rows of C; every row must have src_dim entries.
    Returns the empty polyhedron when the system is infeasible.
    """
    n = len(matrix)
    rows_c = [vec(r) for r in matrix]
    for r in rows_c:
        if len(r) != src_dim:
            raise LPInternalError("projection matrix arity mismatch")

    points: set[Vec] = set()
    rays: set[Vec] = set()

    def probe(direction: Vec) -> str:
        """Support LP over S along a direction of the image space."""
        obj = _pullback(rows_c, direction)
        res = solve_max(obj, list(ineqs), list(eqs))
        if res.status is LPStatus.INFEASIBLE:
            return "infeasible"
        if res.status is LPStatus.UNBOUNDED:
            points.add(_image(rows_c, res.primal_point))
            rays.add(_image(rows_c, res.ray))
            return "unbounded"
        points.add(_image(rows_c, res.primal_point))
        return "optimal"

    for i in range(n):
        for sign in (1, -1):
            d = tuple(Fraction(sign if j == i else 0) for j in range(n))
            if probe(d) == "infeasible":
                return Polyhedron.empty(n)

    for _ in range(_MAX_ROUNDS):
        hull = Polyhedron.from_generators(n, points, rays)
        grew = False
        for a, b in hull.ineqs:
            if _exceeds(rows_c, ineqs, eqs, a, b, points, rays):
                grew = True
        for a, b in hull.eqs:
            if _exceeds(rows_c, ineqs, eqs, a, b, points, rays):
                grew = True
            neg_a = tuple(-t for t in a)
            if _exceeds(rows_c, ineqs, eqs, neg_a, -b, points, rays):
                grew = True
        if not grew:
            return hull
    raise LPInternalError("projection failed to converge")


def _exceeds(rows_c, ineqs, eqs, a: Vec, b: Fraction, points, rays) -> bool:
    """Does sup over S of <a, Cx> exceed b?  Side effect: pool grows."""
    obj = _pullback(rows_c, a)
    res = solve_max(obj, list(ineqs), list(eqs))
    if res.status is LPStatus.UNBOUNDED:
        points.add(_image(rows_c, res.primal_point))
        rays.add(_image(rows_c, res.ray))
        return True
    if res.status is not LPStatus.OPTIMAL:
        raise LPInternalError("support oracle lost feasibility")
    if res.optimum.finite_value() > b:
        points.add(_image(rows_c, res.primal_point))
        return True
    return False


def project_polyhedron(p: Polyhedron, matrix: Sequence[Vec]) -> Polyhedron:
    """Closure of the image of an existing polyhedron under x -> Cx."""
    return project(p.dim, p.ineqs, p.eqs, matrix)


def coordinate_projection(p: Polyhedron, coords: Sequence[int]) -> Polyhedron:
    """Project onto the listed coordinates, in the order given."""
    matrix = [
        tuple(Fraction(1 if j == c else 0) for j in range(p.dim)) for c in coords
    ]
    return project(p.dim, p.ineqs, p.eqs, matrix)
