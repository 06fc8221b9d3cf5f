"""Supremum calculus: conjugates, subdifferential decompositions, sums.

Everything here reduces to linear programs over one recurring gadget,
the perspective linearization.  The bilinear condition

    x*_t  belongs to  the (e_t / lambda_t)-subdifferential of f_t at x

becomes linear in the scaled variables y_t = lambda_t x*_t: writing
g = f*_t with epigraph rows  C (y, s) <= h, the perspective constraint
is  C (y_t, u_t) <= h * lambda_t  together with

    u_t + lambda_t f_t(x) - <y_t, x> <= e_t.

At lambda_t = 0 the homogenized rows describe the recession cone of
epi g, whose lower envelope is the support function of dom f_t; such a
residual is therefore an approximate normal vector to dom f_t at x and
is folded into the normal part of any witness.

Set-valued results (the basic-formula right-hand side, sums of
approximate normal sets) are materialized through the support-oracle
projection, so only the answer space is subject to the double
description dimension cap.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Mapping, Sequence

from .errors import (
    CapacityError,
    DimensionMismatchError,
    HypothesesNotMet,
    IdentityFalsified,
    InvalidParameterError,
    LPInternalError,
)
from .family import FunctionFamily
from .functions import PolyhedralFunction, normal_cone
from .lp import LPStatus, Row, solve_min
from .polyhedron import (
    Polyhedron,
    cone_is_trivial,
    intersect,
    lineality_space,
    support_value,
)
from .projection import project
from .rationals import (
    NEG_INF,
    POS_INF,
    ExtendedRational,
    Vec,
    dot,
    vec,
    zeros,
)

SUM_MEMBER_CAP = 3
SUM_PIECE_CAP = 200


# ============================================================
# Sparse LP assembly
# ============================================================

class _System:
    """Accumulates sparse rows over an append-only variable pool."""

    def __init__(self) -> None:
        self.nvars = 0
        self.ineqs: list[tuple[dict[int, Fraction], Fraction]] = []
        self.eqs: list[tuple[dict[int, Fraction], Fraction]] = []

    def new_vars(self, count: int) -> range:
        r = range(self.nvars, self.nvars + count)
        self.nvars += count
        return r

    def add_ineq(self, coeffs: Mapping[int, Fraction], rhs) -> None:
        self.ineqs.append((dict(coeffs), Fraction(rhs)))

    def add_eq(self, coeffs: Mapping[int, Fraction], rhs) -> None:
        self.eqs.append((dict(coeffs), Fraction(rhs)))

    def _dense(self, coeffs: Mapping[int, Fraction]) -> Vec:
        return tuple(
            Fraction(coeffs.get(j, 0)) for j in range(self.nvars)
        )

    def rows(self) -> tuple[list[Row], list[Row]]:
        return (
            [(self._dense(c), b) for c, b in self.ineqs],
            [(self._dense(c), b) for c, b in self.eqs],
        )

    def solve_min(self, objective: Mapping[int, Fraction]):
        ineqs, eqs = self.rows()
        return solve_min(self._dense(objective), ineqs, eqs)


def _perspective_block(sys: _System, conj: PolyhedralFunction, y: range, u: int, lam: int) -> None:
    """Rows putting (y, u, lam) into the homogenized epigraph of conj."""
    n = conj.dim
    epi = conj.epigraph
    for coef, h in epi.ineqs:
        row = {y[j]: coef[j] for j in range(n) if coef[j]}
        if coef[n]:
            row[u] = coef[n]
        row[lam] = row.get(lam, Fraction(0)) - h
        sys.add_ineq(row, 0)
    for coef, h in epi.eqs:
        row = {y[j]: coef[j] for j in range(n) if coef[j]}
        if coef[n]:
            row[u] = coef[n]
        row[lam] = row.get(lam, Fraction(0)) - h
        sys.add_eq(row, 0)
    sys.add_ineq({lam: Fraction(-1)}, 0)


def _normal_block(sys: _System, dom: Polyhedron, x: Vec, z: range, eta: int) -> None:
    """Rows putting z into the eta-approximate normal set of dom at x."""
    verts, rays = dom.generators
    for v in verts:
        row = {z[j]: v[j] - x[j] for j in range(len(x)) if v[j] != x[j]}
        row[eta] = Fraction(-1)
        sys.add_ineq(row, 0)
    for r in rays:
        sys.add_ineq({z[j]: r[j] for j in range(len(x)) if r[j]}, 0)
    sys.add_ineq({eta: Fraction(-1)}, 0)


# ============================================================
# Weights and witnesses
# ============================================================

@dataclass(frozen=True)
class SimplexWeights:
    """Nonnegative label weights with a prescribed total mass."""

    weights: tuple[tuple[str, Fraction], ...]
    mass: Fraction

    @staticmethod
    def make(weights: Mapping[str, Fraction] | Iterable[tuple[str, Fraction]], mass) -> "SimplexWeights":
        if isinstance(weights, Mapping):
            weights = weights.items()
        items = tuple(sorted((str(t), Fraction(w)) for t, w in weights))
        mass = Fraction(mass)
        if any(w < 0 for _, w in items):
            raise InvalidParameterError("weights must be nonnegative")
        if sum(w for _, w in items) != mass:
            raise InvalidParameterError("weights must sum to the mass")
        return SimplexWeights(items, mass)

    def __getitem__(self, label: str) -> Fraction:
        for t, w in self.weights:
            if t == label:
                return w
        return Fraction(0)

    @property
    def support(self) -> tuple[str, ...]:
        return tuple(t for t, w in self.weights if w > 0)


@dataclass(frozen=True)
class CoHullValue:
    """Optimal value of the convex-hull program with its witness."""

    value: ExtendedRational
    weights: SimplexWeights | None = None
    points: tuple[tuple[str, Vec], ...] = ()
    directions: tuple[tuple[str, Vec], ...] = ()


@dataclass(frozen=True)
class DecompositionWitness:
    """An explicit membership certificate for a sum decomposition.

    Reconstructs x* = sum of scaled_points + normal_part where each
    scaled point y*_t = lambda_t x*_t carries a perspective subgradient
    certificate with error budget eps_t, active members satisfy the
    level condition, and the normal part is an eps2-approximate normal
    to dom f at x.  When per-member normal data is present (T53/R54
    modes) the aggregate is their exact sum.
    """

    split: tuple[Fraction, Fraction]
    lam: SimplexWeights
    eps_t: SimplexWeights
    points: tuple[tuple[str, Vec], ...]
    normal_part: Vec
    scaled_points: tuple[tuple[str, Vec], ...]
    gamma: Fraction = Fraction(0)
    normal_parts: tuple[tuple[str, Vec], ...] = ()
    normal_budgets: tuple[tuple[str, Fraction], ...] = ()

    def verify(self, family: FunctionFamily, x: Sequence, eps, xstar: Sequence) -> bool:
        """Exact recheck of every certificate inequality."""
        x, xstar = vec(x), vec(xstar)
        eps = Fraction(eps)
        eps1, eps2 = self.split
        if eps1 < 0 or eps2 < 0 or eps1 + eps2 > eps:
            return False
        if self.lam.mass != 1 or self.eps_t.mass != eps1:
            return False
        f = family.sup
        fx = f.eval(x)
        if not fx.is_finite:
            return False
        fx = fx.finite_value()
        scaled = dict(self.scaled_points)
        total = list(self.normal_part)
        for _, y in self.scaled_points:
            for j in range(len(total)):
                total[j] += y[j]
        if tuple(total) != xstar:
            return False
        points = dict(self.points)
        for t, _ in family.members:
            lam_t = self.lam[t]
            e_t = self.eps_t[t]
            y_t = scaled.get(t, zeros(family.dim))
            f_t = family.member(t)
            ft_x = f_t.eval(x)
            if lam_t > 0:
                if not ft_x.is_finite:
                    return False
                xs_t = points.get(t)
                if xs_t is None or tuple(lam_t * c for c in xs_t) != tuple(y_t):
                    return False
                # lambda_t f*_t(x*_t) + lambda_t f_t(x) - <y_t, x> <= e_t + lambda_t gamma
                conj_val = f_t.conjugate_eval(xs_t)
                if not conj_val.is_finite:
                    return False
                lhs = lam_t * conj_val.finite_value() + lam_t * ft_x.finite_value() - dot(y_t, x)
                if lhs > e_t + lam_t * self.gamma:
                    return False
                # activity: f_t(x) + e_t/lambda_t + gamma >= f(x)
                if ft_x.finite_value() + e_t / lam_t + self.gamma < fx:
                    return False
            elif any(c != 0 for c in y_t):
                return False
        # aggregate normal certificate: sigma_dom(z*) <= <z*, x> + eps2
        sup_val = support_value(f.domain, self.normal_part)
        if not (sup_val <= ExtendedRational.finite(dot(self.normal_part, x) + eps2)):
            return False
        if self.normal_parts:
            budget = dict(self.normal_budgets)
            agg = [Fraction(0)] * family.dim
            used = Fraction(0)
            for t, z_t in self.normal_parts:
                eta_t = budget.get(t, Fraction(0))
                if eta_t < 0:
                    return False
                used += eta_t
                dom_t = family.member(t).domain
                bound = ExtendedRational.finite(dot(z_t, x) + eta_t)
                if not (support_value(dom_t, z_t) <= bound):
                    return False
                for j in range(family.dim):
                    agg[j] += z_t[j]
            if tuple(agg) != tuple(self.normal_part) or used > eps2:
                return False
        return True


# ============================================================
# Convex hull of the conjugates
# ============================================================

def _co_hull_lp(
    family: FunctionFamily, xstar: Vec, allowed: Sequence[str]
) -> CoHullValue:
    n = family.dim
    sys = _System()
    y_of, u_of, lam_of = {}, {}, {}
    for t in allowed:
        f_t = family.member(t)
        y_of[t] = sys.new_vars(n)
        u_of[t] = sys.new_vars(1)[0]
        lam_of[t] = sys.new_vars(1)[0]
        _perspective_block(sys, f_t.conjugate(), y_of[t], u_of[t], lam_of[t])
    sys.add_eq({lam_of[t]: Fraction(1) for t in allowed}, 1)
    for j in range(n):
        sys.add_eq({y_of[t][j]: Fraction(1) for t in allowed}, xstar[j])
    res = sys.solve_min({u_of[t]: Fraction(1) for t in allowed})
    if res.status is LPStatus.INFEASIBLE:
        return CoHullValue(POS_INF)
    if res.status is LPStatus.UNBOUNDED:
        return CoHullValue(NEG_INF)
    sol = res.primal_point
    lam = {t: sol[lam_of[t]] for t in allowed}
    points, directions = [], []
    for t in allowed:
        y_t = tuple(sol[j] for j in y_of[t])
        if lam[t] > 0:
            points.append((t, tuple(c / lam[t] for c in y_t)))
        elif any(c != 0 for c in y_t):
            directions.append((t, y_t))
    weights = SimplexWeights.make(lam, 1)
    return CoHullValue(res.optimum, weights, tuple(points), tuple(directions))


def co_hull_conjugates(
    family: FunctionFamily, xstar: Sequence, support_cap: int | None = None
) -> CoHullValue:
    """Value of the convex hull of the member conjugates at x*.

    inf { sum lambda_t f*_t(x*_t) : lambda in the simplex,
          sum lambda_t x*_t = x* }, one LP over perspective variables.
    -oo is reported exactly when the program is unbounded and +oo when
    no combination reaches x*.  With ``support_cap`` the infimum is
    recomputed over label subsets of at most that size and certified to
    agree with the unrestricted value.
    """
    xstar = vec(xstar)
    if len(xstar) != family.dim:
        raise DimensionMismatchError("point arity mismatch")
    for _, f_t in family.members:
        if not f_t.is_proper:
            raise InvalidParameterError("the hull needs proper members")
    full = _co_hull_lp(family, xstar, family.labels)
    if support_cap is None:
        return full
    if support_cap < 1:
        raise InvalidParameterError("support cap must be positive")
    if full.value == NEG_INF:
        # no common affine minorant; the hull is unbounded below and the
        # support bound carries no equality claim in that regime
        return full
    best: CoHullValue | None = None
    labels = family.labels
    for size in range(1, min(support_cap, len(labels)) + 1):
        for subset in combinations(labels, size):
            cand = _co_hull_lp(family, xstar, subset)
            if best is None or cand.value < best.value:
                best = cand
    assert best is not None
    if best.value != full.value:
        raise IdentityFalsified(
            f"support-restricted hull value {best.value} differs from {full.value}",
            certificate={"capped": best, "full": full},
        )
    return best


# ============================================================
# Conjugate of an increasing supremum on the interior
# ============================================================

def conjugate_on_interior(family: FunctionFamily, xstar: Sequence) -> ExtendedRational:
    """min_t f*_t(x*) for increasing epi-pointed families, x* interior.

    Verifies the hypotheses (audited increasing order, per-member
    epi-pointedness certificates, x* interior to dom f*), then checks
    the computed minimum against the conjugate of the supremum; a
    mismatch would falsify the identity and raises IdentityFalsified.
    """
    xstar = vec(xstar)
    if not family.verify_increasing():
        raise HypothesesNotMet("family is not verifiably increasing")
    for t, f_t in family.members:
        if f_t.is_epi_pointed() is None:
            raise HypothesesNotMet(f"member {t!r} is not epi-pointed")
    f = family.sup
    if not f.is_proper:
        raise HypothesesNotMet("the supremum is improper")
    dom_star = f.conjugate().domain
    if not dom_star.contains_in_interior(xstar):
        raise HypothesesNotMet("x* is not interior to dom f*")
    value = min(f_t.conjugate_eval(xstar) for _, f_t in family.members)
    direct = f.conjugate_eval(xstar)
    if value != direct:
        raise IdentityFalsified(
            f"member minimum {value} differs from conjugate value {direct}",
            certificate={"xstar": xstar, "min": value, "conjugate": direct},
        )
    return value


# ============================================================
# The basic formula's right-hand side
# ============================================================

def _rhs_basic_system(
    family: FunctionFamily, x: Vec, budget: Fraction, margin: bool = False
) -> tuple[_System, list[Vec], int | None]:
    """Lifted system for the scaled-subgradient set at the given budget.

    Variables per member: scaled point y_t, perspective value u_t,
    weight lambda_t, scaled error e_t.  The projection matrix extracts
    sum_t y_t.  With ``margin`` an extra variable delta tightens the
    budget and activity rows uniformly; maximizing it probes whether
    the strict-inequality form of those two rows is satisfiable.
    """
    f = family.sup
    fx = f.eval(x)
    if not fx.is_finite:
        raise InvalidParameterError("the supremum must be finite at x")
    fx = fx.finite_value()
    sys = _System()
    y_of, u_of, lam_of, e_of = {}, {}, {}, {}
    labels = family.labels
    n = family.dim
    for t in labels:
        f_t = family.member(t)
        y_of[t] = sys.new_vars(n)
        u_of[t] = sys.new_vars(1)[0]
        lam_of[t] = sys.new_vars(1)[0]
        e_of[t] = sys.new_vars(1)[0]
        _perspective_block(sys, f_t.conjugate(), y_of[t], u_of[t], lam_of[t])
        ft_x = f_t.eval(x)
        if not ft_x.is_finite:
            # x outside dom f_t: the member cannot carry weight
            sys.add_eq({lam_of[t]: Fraction(1)}, 0)
            ft_val = Fraction(0)
        else:
            ft_val = ft_x.finite_value()
        # u_t + lambda_t f_t(x) - <y_t, x> <= e_t
        row = {u_of[t]: Fraction(1), lam_of[t]: ft_val, e_of[t]: Fraction(-1)}
        for j in range(n):
            if x[j]:
                row[y_of[t][j]] = row.get(y_of[t][j], Fraction(0)) - x[j]
        sys.add_ineq(row, 0)
        sys.add_ineq({e_of[t]: Fraction(-1)}, 0)
    delta = sys.new_vars(1)[0] if margin else None
    sys.add_eq({lam_of[t]: Fraction(1) for t in labels}, 1)
    row = {e_of[t]: Fraction(1) for t in labels}
    if delta is not None:
        row[delta] = Fraction(1)
    sys.add_ineq(row, budget)
    # sum lambda_t f_t(x) >= f(x) + sum e_t - budget
    act = {e_of[t]: Fraction(1) for t in labels}
    for t in labels:
        ft_x = family.member(t).eval(x)
        if ft_x.is_finite:
            act[lam_of[t]] = -ft_x.finite_value()
    if delta is not None:
        act[delta] = Fraction(1)
    sys.add_ineq(act, budget - fx)
    if delta is not None:
        sys.add_ineq({delta: Fraction(-1)}, 0)
        sys.add_ineq({delta: Fraction(1)}, 1)
    matrix = []
    for j in range(n):
        row = {y_of[t][j]: Fraction(1) for t in labels}
        matrix.append(sys._dense(row))
    return sys, matrix, delta


def eps_subdiff_rhs_basic(
    family: FunctionFamily, x: Sequence, eps, gamma
) -> Polyhedron:
    """Materialize the scaled-subgradient representation at budget eps+gamma.

    The set { sum_t y_t } over weights in the simplex, scaled errors
    e_t >= 0 with sum e_t <= eps+gamma, perspective subgradient
    certificates, and the activity constraint
    sum lambda_t f_t(x) >= f(x) + sum e_t - (eps+gamma).  Strict
    inequalities of the source formula are relaxed to non-strict, which
    matches the closure for this polyhedral class.
    """
    eps, gamma = Fraction(eps), Fraction(gamma)
    if eps < 0:
        raise InvalidParameterError("eps must be nonnegative")
    if gamma <= 0:
        raise InvalidParameterError("gamma must be positive")
    x = vec(x)
    sys, matrix, _ = _rhs_basic_system(family, x, eps + gamma)
    ineqs, eqs = sys.rows()
    return project(sys.nvars, ineqs, eqs, matrix)


def rhs_basic_strict_margin(family: FunctionFamily, x: Sequence, budget) -> Fraction:
    """Largest uniform tightening of the budget and activity rows.

    Positive exactly when the strict form of those rows is satisfiable
    at this budget, zero when only the relaxed set is nonempty.
    """
    x = vec(x)
    budget = Fraction(budget)
    if budget < 0:
        raise InvalidParameterError("budget must be nonnegative")
    sys, _, delta = _rhs_basic_system(family, x, budget, margin=True)
    res = sys.solve_min({delta: Fraction(-1)})
    if res.status is not LPStatus.OPTIMAL:
        raise LPInternalError("margin probe must be bounded and feasible")
    return -res.optimum.finite_value()


def rhs_basic_covers(family: FunctionFamily, x: Sequence, budget, target: Polyhedron) -> bool:
    """Do the target's generators lie in the lifted set's projection?

    Feasibility LPs pinning sum_t y_t to each vertex (and the recession
    version to each ray) avoid materializing the projection.
    """
    x = vec(x)
    budget = Fraction(budget)
    sys, matrix, _ = _rhs_basic_system(family, x, budget)
    ineqs, eqs = sys.rows()
    n = family.dim
    verts, rays = target.generators
    for v in verts:
        pinned = eqs + [(matrix[j], v[j]) for j in range(n)]
        res = solve_min(zeros(sys.nvars), ineqs, pinned)
        if res.status is LPStatus.INFEASIBLE:
            return False
    if rays:
        hom_ineqs = [(a, Fraction(0)) for a, _ in ineqs]
        hom_eqs = [(a, Fraction(0)) for a, _ in eqs]
        for r in rays:
            pinned = hom_eqs + [(matrix[j], r[j]) for j in range(n)]
            res = solve_min(zeros(sys.nvars), hom_ineqs, pinned)
            if res.status is LPStatus.INFEASIBLE:
                return False
    return True


def rhs_basic_within(family: FunctionFamily, x: Sequence, budget, target: Polyhedron) -> bool:
    """Is the lifted set's projection contained in the target?

    One support LP per facet of the target: the maximum of <a, sum y_t>
    over the lifted system must not exceed the facet offset.
    """
    x = vec(x)
    budget = Fraction(budget)
    sys, matrix, _ = _rhs_basic_system(family, x, budget)
    ineqs, eqs = sys.rows()
    n = family.dim

    def support(a: Vec) -> ExtendedRational:
        obj = [Fraction(0)] * sys.nvars
        for j in range(n):
            if a[j]:
                for k, c in enumerate(matrix[j]):
                    obj[k] += a[j] * c
        res = solve_min(tuple(-t for t in obj), ineqs, eqs)
        if res.status is LPStatus.UNBOUNDED:
            return POS_INF
        if res.status is LPStatus.INFEASIBLE:
            return NEG_INF
        return -res.optimum

    for a, b in target.ineqs:
        if not (support(a) <= ExtendedRational.finite(b)):
            return False
    for a, b in target.eqs:
        if not (support(a) <= ExtendedRational.finite(b)):
            return False
        neg = tuple(-t for t in a)
        if not (support(neg) <= ExtendedRational.finite(-b)):
            return False
    return True


# ============================================================
# Sums of approximate normal sets
# ============================================================

def eps_normal_intersection(
    sets: Sequence[Polyhedron], x: Sequence, eps, gamma=0
) -> Polyhedron:
    """{ sum_t z_t : z_t eta_t-normal to C_t at x, sum eta_t = eps+gamma }.

    Exact at gamma = 0 for polyhedral data: the support function of the
    intersection is an attained inf-convolution, so no closure is
    needed.  Returns the empty set when x misses some C_t.
    """
    eps, gamma = Fraction(eps), Fraction(gamma)
    if eps < 0 or gamma < 0:
        raise InvalidParameterError("budgets must be nonnegative")
    sets = list(sets)
    if not sets:
        raise InvalidParameterError("at least one set is required")
    n = sets[0].dim
    x = vec(x)
    for c in sets:
        if c.dim != n:
            raise DimensionMismatchError("set dimension mismatch")
        if not c.contains(x):
            return Polyhedron.empty(n)
    sys = _System()
    z_of, eta_of = [], []
    for c in sets:
        z = sys.new_vars(n)
        eta = sys.new_vars(1)[0]
        z_of.append(z)
        eta_of.append(eta)
        _normal_block(sys, c, x, z, eta)
    sys.add_eq({eta: Fraction(1) for eta in eta_of}, eps + gamma)
    matrix = []
    for j in range(n):
        matrix.append(sys._dense({z[j]: Fraction(1) for z in z_of}))
    ineqs, eqs = sys.rows()
    return project(sys.nvars, ineqs, eqs, matrix)


# ============================================================
# Qualification conditions
# ============================================================

def check_qc1(family: FunctionFamily, x: Sequence) -> bool:
    """Does the normal cone to dom f at x contain no line?"""
    x = vec(x)
    f = family.sup
    if not f.domain.contains(x):
        raise InvalidParameterError("x must lie in dom f")
    cone = normal_cone(f.domain, x)
    lin = lineality_space(cone)
    return cone_is_trivial(family.dim, [], list(lin.eqs))


def check_qc2(family: FunctionFamily, x: Sequence) -> bool:
    """Only the zero tuple of member-domain normals can sum to zero."""
    x = vec(x)
    n = family.dim
    for t, f_t in family.members:
        if not f_t.domain.contains(x):
            raise InvalidParameterError(f"x must lie in dom of member {t!r}")
    sys = _System()
    blocks = []
    for _, f_t in family.members:
        z = sys.new_vars(n)
        blocks.append(z)
        verts, rays = f_t.domain.generators
        for v in verts:
            row = {z[j]: v[j] - x[j] for j in range(n) if v[j] != x[j]}
            if row:
                sys.add_ineq(row, 0)
        for r in rays:
            sys.add_ineq({z[j]: r[j] for j in range(n) if r[j]}, 0)
    ineqs, _ = sys.rows()
    eqs = []
    for j in range(n):
        eqs.append((sys._dense({z[j]: Fraction(1) for z in blocks}), Fraction(0)))
    return cone_is_trivial(sys.nvars, ineqs, eqs)


# ============================================================
# Subdifferential decomposition
# ============================================================

DECOMPOSE_MODES = ("T52", "T53", "R54")


def _solve_decomposition(
    family: FunctionFamily,
    x: Vec,
    eps: Fraction,
    xstar: Vec,
    gamma: Fraction,
    s_labels: Sequence[str],
    n_labels: Sequence[str],
    aggregate_normal: bool,
) -> DecompositionWitness | None:
    """Feasibility LP for one support pattern; None when infeasible.

    ``s_labels`` may carry weight and scaled subgradients;
    ``n_labels`` may carry normal vectors (per-member when
    ``aggregate_normal`` is false, one pooled vector otherwise).
    """
    n = family.dim
    f = family.sup
    fx = f.eval_finite(x)
    sys = _System()
    y_of, u_of, lam_of, e_of = {}, {}, {}, {}
    for t in s_labels:
        f_t = family.member(t)
        ft_x = f_t.eval(x)
        y_of[t] = sys.new_vars(n)
        u_of[t] = sys.new_vars(1)[0]
        lam_of[t] = sys.new_vars(1)[0]
        e_of[t] = sys.new_vars(1)[0]
        _perspective_block(sys, f_t.conjugate(), y_of[t], u_of[t], lam_of[t])
        if not ft_x.is_finite:
            sys.add_eq({lam_of[t]: Fraction(1)}, 0)
            ft_val = Fraction(0)
        else:
            ft_val = ft_x.finite_value()
        # u_t + lambda_t f_t(x) - <y_t, x> <= e_t + lambda_t gamma
        row = {
            u_of[t]: Fraction(1),
            lam_of[t]: ft_val - gamma,
            e_of[t]: Fraction(-1),
        }
        for j in range(n):
            if x[j]:
                row[y_of[t][j]] = row.get(y_of[t][j], Fraction(0)) - x[j]
        sys.add_ineq(row, 0)
        # activity: lambda_t f(x) <= lambda_t f_t(x) + e_t + lambda_t gamma
        sys.add_ineq(
            {lam_of[t]: fx - ft_val - gamma, e_of[t]: Fraction(-1)}, 0
        )
        sys.add_ineq({e_of[t]: Fraction(-1)}, 0)
    sys.add_eq({lam_of[t]: Fraction(1) for t in s_labels}, 1)

    z_blocks: list[tuple[str | None, range, int]] = []
    if aggregate_normal:
        z = sys.new_vars(n)
        eta = sys.new_vars(1)[0]
        _normal_block(sys, f.domain, x, z, eta)
        z_blocks.append((None, z, eta))
    else:
        for t in n_labels:
            z = sys.new_vars(n)
            eta = sys.new_vars(1)[0]
            _normal_block(sys, family.member(t).domain, x, z, eta)
            z_blocks.append((t, z, eta))

    # total budget: sum e_t + sum eta <= eps
    budget_row = {e_of[t]: Fraction(1) for t in s_labels}
    for _, _, eta in z_blocks:
        budget_row[eta] = Fraction(1)
    sys.add_ineq(budget_row, eps)

    for j in range(n):
        row = {y_of[t][j]: Fraction(1) for t in s_labels}
        for _, z, _ in z_blocks:
            row[z[j]] = row.get(z[j], Fraction(0)) + 1
        sys.add_eq(row, xstar[j])

    res = sys.solve_min(budget_row)
    if res.status is LPStatus.INFEASIBLE:
        return None
    if res.status is not LPStatus.OPTIMAL:
        raise LPInternalError("budget objective must be bounded below by 0")
    sol = res.primal_point

    lam = {t: sol[lam_of[t]] for t in s_labels}
    errs = {t: sol[e_of[t]] for t in s_labels}
    points: list[tuple[str, Vec]] = []
    scaled: list[tuple[str, Vec]] = []
    fold: list[tuple[str, Vec, Fraction]] = []  # lambda=0 residuals
    for t in s_labels:
        y_t = tuple(sol[j] for j in y_of[t])
        if lam[t] > 0:
            scaled.append((t, y_t))
            points.append((t, tuple(c / lam[t] for c in y_t)))
        elif any(c != 0 for c in y_t):
            # at lambda_t = 0 the block pins (y_t, u_t) to the recession
            # cone of epi f*_t, so y_t is an errs[t]-approximate normal
            # to dom f_t at x; move the budget from eps1 to eps2
            fold.append((t, y_t, errs[t]))
            errs[t] = Fraction(0)

    normal = [Fraction(0)] * n
    member_z: dict[str, list[Fraction]] = {}
    member_eta: dict[str, Fraction] = {}
    eta_total = Fraction(0)
    for label, z, eta in z_blocks:
        z_val = [sol[j] for j in z]
        eta_val = sol[eta]
        eta_total += eta_val
        for j in range(n):
            normal[j] += z_val[j]
        if label is not None:
            member_z[label] = z_val
            member_eta[label] = eta_val
    for t, y_t, e_t in fold:
        eta_total += e_t
        for j in range(n):
            normal[j] += y_t[j]
        if not aggregate_normal:
            acc = member_z.setdefault(t, [Fraction(0)] * n)
            for j in range(n):
                acc[j] += y_t[j]
            member_eta[t] = member_eta.get(t, Fraction(0)) + e_t
    order = [t for t in family.labels if t in member_z]

    eps1 = sum(errs.values(), Fraction(0))
    witness = DecompositionWitness(
        split=(eps1, eta_total),
        lam=SimplexWeights.make(lam, 1),
        eps_t=SimplexWeights.make(errs, eps1),
        points=tuple(points),
        normal_part=tuple(normal),
        scaled_points=tuple(scaled),
        gamma=gamma,
        normal_parts=tuple((t, tuple(member_z[t])) for t in order),
        normal_budgets=tuple((t, member_eta[t]) for t in order),
    )
    if not witness.verify(family, x, eps, xstar):
        raise LPInternalError("decomposition witness failed exact recheck")
    return witness


def decompose(
    family: FunctionFamily,
    x: Sequence,
    eps,
    xstar: Sequence,
    mode: str,
    gamma=0,
) -> DecompositionWitness | None:
    """Split an eps-subgradient of the supremum into member certificates.

    T52: scaled member subgradients with gamma-relaxed activity plus one
    pooled normal vector to dom f.  T53: exact activity (gamma = 0) and
    per-member normal vectors to the dom f_t.  R54: T53 restricted to
    disjoint label sets T1 (weights) and T2 (normals) with
    #T1 + #T2 <= dim + 1, searched in deterministic order.

    Returns None only when every admissible pattern is LP-infeasible,
    which would falsify the corresponding statement on valid input.
    """
    if mode not in DECOMPOSE_MODES:
        raise InvalidParameterError(f"unknown decomposition mode {mode!r}")
    x, xstar = vec(x), vec(xstar)
    eps, gamma = Fraction(eps), Fraction(gamma)
    if eps < 0:
        raise InvalidParameterError("eps must be nonnegative")
    if gamma < 0:
        raise InvalidParameterError("gamma must be nonnegative")
    if gamma > 0 and mode != "T52":
        raise InvalidParameterError("only the T52 form admits a gamma relaxation")
    f = family.sup
    fx = f.eval(x)
    if not fx.is_finite:
        raise InvalidParameterError("x must lie in dom f")
    gap = f.conjugate_eval(xstar) + fx - ExtendedRational.finite(dot(xstar, x))
    if not (gap <= ExtendedRational.finite(eps)):
        raise InvalidParameterError("x* is not an eps-subgradient at x")
    if mode == "T52":
        if not check_qc1(family, x):
            raise HypothesesNotMet("the normal cone to dom f at x contains a line")
    elif not check_qc2(family, x):
        raise HypothesesNotMet("member domain normals admit a nonzero zero sum")

    labels = family.labels
    if mode == "T52":
        return _solve_decomposition(
            family, x, eps, xstar, gamma, labels, (), aggregate_normal=True
        )
    if mode == "T53":
        return _solve_decomposition(
            family, x, eps, xstar, Fraction(0), labels, labels, aggregate_normal=False
        )
    cap = family.dim + 1
    for total in range(1, min(cap, len(labels)) + 1):
        for k1 in range(1, total + 1):
            k2 = total - k1
            for t1 in combinations(labels, k1):
                rest = [t for t in labels if t not in t1]
                for t2 in combinations(rest, k2):
                    witness = _solve_decomposition(
                        family, x, eps, xstar, Fraction(0), t1, t2,
                        aggregate_normal=False,
                    )
                    if witness is not None:
                        return witness
    return None


# ============================================================
# Finite sums
# ============================================================

def sum_functions(funcs: Sequence[PolyhedralFunction]) -> PolyhedralFunction:
    """Exact pointwise sum via the piece product construction.

    The sum of max-affine functions is max-affine with one candidate
    piece per tuple of member pieces; candidates never attaining the
    maximum are pruned by LP.  Guarded by member and piece caps since
    the product is combinatorial.
    """
    funcs = list(funcs)
    if not funcs:
        raise InvalidParameterError("at least one summand is required")
    if len(funcs) > SUM_MEMBER_CAP:
        raise CapacityError(f"sum limited to {SUM_MEMBER_CAP} members")
    n = funcs[0].dim
    domain = funcs[0].domain
    for g in funcs[1:]:
        if g.dim != n:
            raise DimensionMismatchError("summand dimension mismatch")
        domain = intersect(domain, g.domain)
    count = 1
    for g in funcs:
        count *= len(g.pieces)
    if count > SUM_PIECE_CAP:
        raise CapacityError(f"sum would need {count} candidate pieces")

    candidates: list[Row] = [(zeros(n), Fraction(0))]
    for g in funcs:
        candidates = [
            (tuple(ca + pa for ca, pa in zip(c, p)), cb + pb)
            for c, cb in candidates
            for p, pb in g.pieces
        ]
    candidates = sorted(set(candidates))
    if domain.is_empty:
        return PolyhedralFunction.make(n, candidates, domain)

    if len(candidates) == 1:
        return PolyhedralFunction.make(n, candidates, domain)
    kept: list[Row] = []
    for i, (a_i, b_i) in enumerate(candidates):
        # piece i survives iff it attains the max somewhere on the domain:
        # maximize the margin d with (a_k - a_i) x + d <= b_i - b_k for all k
        sys = _System()
        xs = sys.new_vars(n)
        d = sys.new_vars(1)[0]
        for coef, h in domain.ineqs:
            sys.add_ineq({xs[j]: coef[j] for j in range(n) if coef[j]}, h)
        for coef, h in domain.eqs:
            sys.add_eq({xs[j]: coef[j] for j in range(n) if coef[j]}, h)
        for k, (a_k, b_k) in enumerate(candidates):
            if k == i:
                continue
            row = {xs[j]: a_k[j] - a_i[j] for j in range(n) if a_k[j] != a_i[j]}
            row[d] = Fraction(1)
            sys.add_ineq(row, b_i - b_k)
        res = sys.solve_min({d: Fraction(-1)})
        if res.status is LPStatus.UNBOUNDED:
            kept.append((a_i, b_i))
            continue
        if res.status is not LPStatus.OPTIMAL:
            raise LPInternalError("piece pruning LP lost feasibility")
        if res.primal_point[d] >= 0:
            kept.append((a_i, b_i))
    return PolyhedralFunction.make(n, kept, domain)


def inf_convolution_value(
    funcs: Sequence[PolyhedralFunction], xstar: Sequence
) -> ExtendedRational:
    """inf { sum_k g_k(y_k) : sum y_k = x* } for the given functions."""
    funcs = list(funcs)
    if not funcs:
        raise InvalidParameterError("at least one function is required")
    n = funcs[0].dim
    xstar = vec(xstar)
    sys = _System()
    y_blocks, s_vars = [], []
    for g in funcs:
        y = sys.new_vars(n)
        s = sys.new_vars(1)[0]
        y_blocks.append(y)
        s_vars.append(s)
        epi = g.epigraph
        for coef, h in epi.ineqs:
            row = {y[j]: coef[j] for j in range(n) if coef[j]}
            if coef[n]:
                row[s] = coef[n]
            sys.add_ineq(row, h)
        for coef, h in epi.eqs:
            row = {y[j]: coef[j] for j in range(n) if coef[j]}
            if coef[n]:
                row[s] = coef[n]
            sys.add_eq(row, h)
    for j in range(n):
        sys.add_eq({y[j]: Fraction(1) for y in y_blocks}, xstar[j])
    res = sys.solve_min({s: Fraction(1) for s in s_vars})
    if res.status is LPStatus.UNBOUNDED:
        return NEG_INF
    if res.status is LPStatus.INFEASIBLE:
        return POS_INF
    return res.optimum
