"""Polyhedral convex functions and their unary convex calculus.

A function is a finite max of affine pieces on a polyhedral domain,
+infinity outside:

    f(x) = max_j ( <a_j, x> + b_j )   if x in D,   +oo otherwise.

This class is closed under conjugation, which is where most of the
machinery lives: the conjugate is read off the generator form of the
epigraph.  Every vertex (v, rho) of epi f contributes the dual piece
<., v> - rho, and every ray (d, rho_d) contributes the dual domain
constraint <., d> <= rho_d.  Approximate subdifferentials and normal
sets then come out as explicit polyhedra in dual coordinates.

Functions with empty domain (identically +oo) are representable so that
evaluation never lies, but the calculus operations reject them.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import product
from typing import Iterable, Sequence

from .errors import (
    DimensionMismatchError,
    ImproperFunctionError,
    InvalidParameterError,
    LPInternalError,
)
from .lp import LPStatus, Row, solve_max, solve_min
from .polyhedron import Polyhedron, included, polyhedron_equal
from .rationals import (
    POS_INF,
    ExtendedRational,
    Vec,
    dot,
    l1norm,
    vec,
    vsub,
    zeros,
)
from .reports import CheckReport, CheckStatus, content_digest

GAMMA_GRID = (Fraction(1), Fraction(1, 2), Fraction(1, 4), Fraction(1, 8))


@dataclass(frozen=True)
class EpiPointedCertificate:
    """Witness that f has a coercive affine-plus-norm minorant.

    Certifies  f(x) >= <minorant_slope, x> + margin * ||x||_1 + offset
    for every x, with margin > 0.  Equivalently the closed l-infinity
    ball of radius ``margin`` around ``minorant_slope`` sits inside the
    domain of the conjugate, which therefore has nonempty interior.
    """

    minorant_slope: Vec
    margin: Fraction
    offset: Fraction

    def verify(self, f: "PolyhedralFunction") -> bool:
        """Recheck the minorant by one support LP per orthant."""
        if self.margin <= 0:
            return False
        n = len(self.minorant_slope)
        for signs in product((1, -1), repeat=n):
            corner = tuple(
                s + self.margin * sg for s, sg in zip(self.minorant_slope, signs)
            )
            val = f.conjugate_eval(corner)
            if not (val <= ExtendedRational.finite(-self.offset)):
                return False
        return True


@dataclass(frozen=True)
class PolyhedralFunction:
    dim: int
    pieces: tuple[Row, ...]
    domain: Polyhedron

    @staticmethod
    def make(
        dim: int,
        pieces: Iterable[Row],
        domain: Polyhedron | None = None,
    ) -> "PolyhedralFunction":
        if domain is None:
            domain = Polyhedron.full_space(dim)
        if domain.dim != dim:
            raise DimensionMismatchError("domain dimension mismatch")
        canon = set()
        for a, b in pieces:
            a = vec(a)
            if len(a) != dim:
                raise DimensionMismatchError("piece arity mismatch")
            canon.add((a, Fraction(b)))
        if not canon:
            raise InvalidParameterError("a function needs at least one piece")
        return PolyhedralFunction(dim, tuple(sorted(canon)), domain)

    @staticmethod
    def indicator(domain: Polyhedron) -> "PolyhedralFunction":
        return PolyhedralFunction.make(domain.dim, [(zeros(domain.dim), 0)], domain)

    # -- evaluation ----------------------------------------------------

    @property
    def is_proper(self) -> bool:
        return not self.domain.is_empty

    def eval(self, x: Sequence) -> ExtendedRational:
        x = vec(x)
        if len(x) != self.dim:
            raise DimensionMismatchError("point arity mismatch")
        if not self.domain.contains(x):
            return POS_INF
        return ExtendedRational.finite(max(dot(a, x) + b for a, b in self.pieces))

    def eval_finite(self, x: Sequence) -> Fraction:
        v = self.eval(x)
        if not v.is_finite:
            raise InvalidParameterError("point outside the domain")
        return v.finite_value()

    # -- epigraph ------------------------------------------------------

    @cached_property
    def epigraph(self) -> Polyhedron:
        """epi f = {(x, s) : s >= f(x)} in dimension dim+1."""
        rows: list[Row] = []
        for a, b in self.pieces:
            rows.append((tuple(a) + (Fraction(-1),), -b))
        for a, b in self.domain.ineqs:
            rows.append((tuple(a) + (Fraction(0),), b))
        eqs = [(tuple(a) + (Fraction(0),), b) for a, b in self.domain.eqs]
        return Polyhedron.from_hrep(self.dim + 1, rows, eqs)

    # -- conjugacy -----------------------------------------------------

    def conjugate_eval(self, xstar: Sequence) -> ExtendedRational:
        """sup_x ( <x*, x> - f(x) ), one LP over the epigraph."""
        if not self.is_proper:
            raise ImproperFunctionError("conjugate of an identically +oo function")
        y = vec(xstar)
        if len(y) != self.dim:
            raise DimensionMismatchError("point arity mismatch")
        epi = self.epigraph
        obj = tuple(y) + (Fraction(-1),)
        res = solve_max(obj, list(epi.ineqs), list(epi.eqs))
        if res.status is LPStatus.UNBOUNDED:
            return POS_INF
        if res.status is not LPStatus.OPTIMAL:
            raise LPInternalError("epigraph LP infeasible for a proper function")
        return res.optimum

    @cached_property
    def _conjugate(self) -> "PolyhedralFunction":
        if not self.is_proper:
            raise ImproperFunctionError("conjugate of an identically +oo function")
        verts, rays = self.epigraph.generators
        pieces = [(v[: self.dim], -v[self.dim]) for v in verts]
        dom_rows = [(r[: self.dim], r[self.dim]) for r in rays]
        g = PolyhedralFunction.make(
            self.dim, pieces, Polyhedron.from_hrep(self.dim, dom_rows)
        )
        for y in self._audit_points():
            if self.conjugate_eval(y) != g.eval(y):
                raise LPInternalError("conjugate construction failed value audit")
        return g

    def conjugate(self) -> "PolyhedralFunction":
        return self._conjugate

    def biconjugate(self) -> "PolyhedralFunction":
        g = self.conjugate().conjugate()
        if not polyhedron_equal(g.epigraph, self.epigraph):
            raise LPInternalError("biconjugate does not reproduce the function")
        return g

    def _audit_points(self) -> list[Vec]:
        pts = {zeros(self.dim)}
        for i in range(self.dim):
            e = tuple(Fraction(1 if j == i else 0) for j in range(self.dim))
            pts.add(e)
            pts.add(tuple(-t for t in e))
        for a, _ in self.pieces:
            pts.add(a)
        return sorted(pts)

    # -- approximate subdifferentials ----------------------------------

    def eps_subdifferential(self, x: Sequence, eps) -> Polyhedron:
        """{x* : f(x) + f*(x*) - <x*, x> <= eps}; empty when f(x) = +oo."""
        eps = Fraction(eps)
        if eps < 0:
            raise InvalidParameterError("eps must be nonnegative")
        x = vec(x)
        if len(x) != self.dim:
            raise DimensionMismatchError("point arity mismatch")
        if not self.domain.contains(x):
            return Polyhedron.empty(self.dim)
        fx = self.eval_finite(x)
        g = self.conjugate()
        rows: list[Row] = []
        for v, c in g.pieces:
            rows.append((vsub(v, x), eps - fx - c))
        rows.extend(g.domain.ineqs)
        return Polyhedron.from_hrep(self.dim, rows, g.domain.eqs)

    def recession_function(self) -> "PolyhedralFunction":
        """f-at-infinity, realized as the support function of dom f*."""
        dom_star = self.conjugate().domain
        verts, rays = dom_star.generators
        pieces = [(v, Fraction(0)) for v in verts]
        rows = [(r, Fraction(0)) for r in rays]
        return PolyhedralFunction.make(
            self.dim, pieces, Polyhedron.from_hrep(self.dim, rows)
        )

    # -- epi-pointedness ------------------------------------------------

    def is_epi_pointed(self) -> EpiPointedCertificate | None:
        """Certificate iff dom f* has nonempty interior, else None."""
        dom_star = self.conjugate().domain
        if dom_star.eqs:
            return None
        n = self.dim
        # variables (y, alpha): maximize alpha subject to
        # a.y + alpha*||a||_1 <= b per row, alpha <= 1
        rows: list[Row] = []
        for a, b in dom_star.ineqs:
            rows.append((tuple(a) + (l1norm(a),), b))
        rows.append((zeros(n) + (Fraction(1),), Fraction(1)))
        res = solve_max(zeros(n) + (Fraction(1),), rows)
        if res.status is not LPStatus.OPTIMAL:
            raise LPInternalError("ball LP must be bounded by the cap row")
        alpha = res.optimum.finite_value()
        if alpha <= 0:
            return None
        center = res.primal_point[:n]
        worst = max(
            self.conjugate_eval(
                tuple(c + alpha * s for c, s in zip(center, signs))
            ).finite_value()
            for signs in product((1, -1), repeat=n)
        )
        cert = EpiPointedCertificate(center, alpha, -worst)
        if not cert.verify(self):
            raise LPInternalError("epi-pointedness certificate failed recheck")
        return cert


def eps_normal_set(c_set: Polyhedron, x: Sequence, eps) -> Polyhedron:
    """{x* : sup over the set of <x*, .> <= <x*, x> + eps}.

    The approximate normal set of a polyhedron at x, empty when x lies
    outside.  Built from the generator form: one row per vertex, one
    homogeneous row per ray.
    """
    eps = Fraction(eps)
    if eps < 0:
        raise InvalidParameterError("eps must be nonnegative")
    x = vec(x)
    if len(x) != c_set.dim:
        raise DimensionMismatchError("point arity mismatch")
    if not c_set.contains(x):
        return Polyhedron.empty(c_set.dim)
    verts, rays = c_set.generators
    rows: list[Row] = [(vsub(v, x), eps) for v in verts]
    rows += [(r, Fraction(0)) for r in rays]
    return Polyhedron.from_hrep(c_set.dim, rows)


def normal_cone(c_set: Polyhedron, x: Sequence) -> Polyhedron:
    return eps_normal_set(c_set, x, 0)


# ============================================================
# Density of interior-supported approximate subgradients
# ============================================================

def _meets_interior(p: Polyhedron, q: Polyhedron) -> bool:
    """Is P intersect int(Q) nonempty?  Max-slack LP, Q full-dimensional."""
    n = p.dim
    rows: list[Row] = [(tuple(a) + (Fraction(0),), b) for a, b in p.ineqs]
    rows += [(tuple(a) + (Fraction(1),), b) for a, b in q.ineqs]
    rows.append((zeros(n) + (Fraction(1),), Fraction(1)))
    eqs = [(tuple(a) + (Fraction(0),), b) for a, b in p.eqs]
    res = solve_max(zeros(n) + (Fraction(1),), rows, eqs)
    if res.status is LPStatus.INFEASIBLE:
        return False
    if res.status is not LPStatus.OPTIMAL:
        raise LPInternalError("slack LP must be bounded by the cap row")
    return res.optimum.finite_value() > 0


def verify_subdiff_density(g: PolyhedralFunction, x: Sequence, eta) -> CheckReport:
    """Check that eps-subgradients supported on int dom g* are dense.

    The statement: del_eta g(x) = cl( del_eta g(x) intersect int dom g* )
    for epi-pointed g, in the exact form when eta > 0 and in the
    gamma-relaxed form (budget eta+gamma over a decreasing grid) when
    eta = 0.  Both sides are polyhedra here, so the closure identity
    reduces to nonemptiness of the interior-supported part.
    """
    eta = Fraction(eta)
    if eta < 0:
        raise InvalidParameterError("eta must be nonnegative")
    digest = content_digest(g, vec(x), eta)

    def report(status: CheckStatus, **details) -> CheckReport:
        return CheckReport("subdiff-density", digest, status, details=details or None)

    if g.is_epi_pointed() is None:
        return report(CheckStatus.HYPOTHESES_NOT_MET, reason="not epi-pointed")
    if not g.domain.contains(vec(x)):
        return report(
            CheckStatus.TRIVIAL_PASS, reason="point outside the domain, both sides empty"
        )
    q = g.conjugate().domain  # full-dimensional: epi-pointed
    if eta > 0:
        p = g.eps_subdifferential(x, eta)
        if _meets_interior(p, q):
            return report(CheckStatus.PASS, form="exact")
        return CheckReport(
            "subdiff-density",
            digest,
            CheckStatus.FAIL,
            witness={"set": p, "interior_of": q},
            details={"form": "exact"},
        )
    previous: Polyhedron | None = None
    base = g.eps_subdifferential(x, 0)
    for gamma in GAMMA_GRID:
        relaxed = g.eps_subdifferential(x, eta + gamma)
        if not _meets_interior(relaxed, q):
            return CheckReport(
                "subdiff-density",
                digest,
                CheckStatus.FAIL,
                witness={"gamma": gamma, "set": relaxed, "interior_of": q},
                details={"form": "gamma"},
            )
        if not included(base, relaxed):
            raise LPInternalError("budget monotonicity violated")
        if previous is not None and not included(relaxed, previous):
            raise LPInternalError("gamma monotonicity violated")
        previous = relaxed
    # the relaxed sets share the base set's normals with budgets
    # eta+gamma, so their intersection over gamma -> 0 is the base set
    return report(CheckStatus.PASS, form="gamma", grid=[str(t) for t in GAMMA_GRID])


# ============================================================
# Sublevel-set closure identities
# ============================================================

def _sublevel(h: PolyhedralFunction, c: Fraction) -> Polyhedron:
    rows = list(h.domain.ineqs) + [(a, c - b) for a, b in h.pieces]
    return Polyhedron.from_hrep(h.dim, rows, h.domain.eqs)


def _infimum(h: PolyhedralFunction) -> ExtendedRational:
    epi = h.epigraph
    obj = zeros(h.dim) + (Fraction(1),)
    res = solve_min(obj, list(epi.ineqs), list(epi.eqs))
    if res.status is LPStatus.OPTIMAL:
        return res.optimum
    if res.status is LPStatus.UNBOUNDED:
        return ExtendedRational.neg_inf()
    raise LPInternalError("epigraph LP infeasible for a proper function")


def _point_below(h: PolyhedralFunction, r: Fraction) -> Vec | None:
    """Some x with h(x) < r, or None when inf h >= r."""
    epi = h.epigraph
    obj = zeros(h.dim) + (Fraction(1),)
    res = solve_min(obj, list(epi.ineqs), list(epi.eqs))
    if res.status is LPStatus.OPTIMAL:
        if res.optimum.finite_value() >= r:
            return None
        return res.primal_point[: h.dim]
    point, ray = res.primal_point, res.ray
    drop = -ray[h.dim]  # positive: objective decreases along the ray
    height = point[h.dim]
    steps = max(Fraction(0), (height - r) / drop + 1)
    return tuple(p + steps * d for p, d in zip(point[: h.dim], ray[: h.dim]))


def verify_sublevel_closure(h: PolyhedralFunction, r) -> CheckReport:
    """Check {h <= r} against closures of strict sublevel sets.

    First identity: {h <= r} equals the intersection over gamma > 0 of
    cl{h < r+gamma}, tested on a decreasing grid with monotonicity and
    with the gamma -> 0 limit certified structurally (the level enters
    the constraint rows affinely).  Second identity, for r > inf h:
    {h <= r} = cl{h < r}, certified by a strict witness and convexity.
    """
    if not h.is_proper:
        raise ImproperFunctionError("sublevel analysis needs a proper function")
    r = Fraction(r)
    digest = content_digest(h, r)

    def report(status: CheckStatus, **details) -> CheckReport:
        return CheckReport("sublevel-closure", digest, status, details=details or None)

    inf_h = _infimum(h)
    level = _sublevel(h, r)

    previous: Polyhedron | None = None
    for gamma in GAMMA_GRID:
        witness = _point_below(h, r + gamma)
        closure = _sublevel(h, r + gamma) if witness is not None else Polyhedron.empty(h.dim)
        if not included(level, closure):
            raise LPInternalError("level-set monotonicity violated")
        if previous is not None and not included(closure, previous):
            raise LPInternalError("gamma monotonicity violated")
        previous = closure

    if inf_h > ExtendedRational.finite(r):
        return report(CheckStatus.TRIVIAL_PASS, reason="level below the infimum")

    if inf_h == ExtendedRational.finite(r):
        return report(CheckStatus.PASS, strict_form="skipped: level equals the infimum")

    strict_witness = _point_below(h, r)
    if strict_witness is None:
        raise LPInternalError("infimum bound contradicts the witness search")
    # convexity: segments from the witness stay strictly below r, so the
    # strict set is dense in the level set and closures agree
    if h.eval(strict_witness) >= ExtendedRational.finite(r):
        raise LPInternalError("strict witness fails to be strict")
    if not polyhedron_equal(level, _sublevel(h, r)):
        raise LPInternalError("sublevel recomputation disagrees")
    return report(CheckStatus.PASS, strict_form="witnessed", witness_point=[str(t) for t in strict_witness])
