"""Polyhedral functions: evaluation, conjugacy, approximate subgradients.

Frozen values below were derived against the grid Legendre transform and
raw generator enumeration before being inlined here; test_oracles keeps
those cross-checks alive.
"""
from fractions import Fraction as Q

import pytest

from supcalc.errors import (
    DimensionMismatchError,
    ImproperFunctionError,
    InvalidParameterError,
)
from supcalc.functions import (
    PolyhedralFunction,
    eps_normal_set,
    normal_cone,
    verify_subdiff_density,
    verify_sublevel_closure,
)
from supcalc.polyhedron import (
    Polyhedron,
    polyhedron_equal,
    recession_cone,
)
from supcalc.rationals import POS_INF, ExtendedRational, qv

PF = PolyhedralFunction.make
FIN = ExtendedRational.finite


def make_abs():
    return PF(1, [(qv(1), Q(0)), (qv(-1), Q(0))])


class TestEvaluation:
    def test_kink_values(self, f_kink):
        assert f_kink.eval(qv(2)) == FIN(Q(3))
        assert f_kink.eval(qv("1/2")) == FIN(Q(1, 2))
        assert f_kink.eval(qv(0)) == FIN(Q(0))
        assert f_kink.eval(qv(6)) == POS_INF
        assert f_kink.eval(qv(-1)) == POS_INF

    def test_eval_finite_guard(self, f_kink):
        assert f_kink.eval_finite(qv(1)) == Q(1)
        with pytest.raises(InvalidParameterError):
            f_kink.eval_finite(qv(-1))

    def test_arity_checks(self, f_kink):
        with pytest.raises(DimensionMismatchError):
            f_kink.eval(qv(0, 0))
        with pytest.raises(DimensionMismatchError):
            PF(2, [(qv(1), Q(0))])

    def test_needs_a_piece(self):
        with pytest.raises(InvalidParameterError):
            PF(1, [])

    def test_properness(self):
        empty_dom = Polyhedron.from_hrep(1, [(qv(1), Q(0)), (qv(-1), Q(-1))])
        assert not PF(1, [(qv(1), Q(0))], empty_dom).is_proper
        assert make_abs().is_proper

    def test_indicator(self):
        ind = PolyhedralFunction.indicator(Polyhedron.box(qv(0), qv(1)))
        assert ind.eval(qv("1/2")) == FIN(Q(0))
        assert ind.eval(qv(2)) == POS_INF


class TestConjugate:
    def test_abs_conjugate_is_indicator_box(self):
        f = make_abs()
        assert f.conjugate_eval(qv("1/2")) == FIN(Q(0))
        assert f.conjugate_eval(qv(-1)) == FIN(Q(0))
        assert f.conjugate_eval(qv(2)) == POS_INF
        g = f.conjugate()
        assert polyhedron_equal(g.domain, Polyhedron.box(qv(-1), qv(1)))

    def test_kink_conjugate_values(self, f_kink):
        # slope 3/2 is held between the two kink pieces at x = 1
        assert f_kink.conjugate_eval(qv("3/2")) == FIN(Q(1, 2))
        assert f_kink.conjugate_eval(qv(0)) == FIN(Q(0))
        assert f_kink.conjugate_eval(qv(3)) == FIN(Q(6))
        assert f_kink.conjugate_eval(qv(-1)) == FIN(Q(0))

    def test_conjugate_function_matches_pointwise_sup(self, f_kink):
        g = f_kink.conjugate()
        for y in (Q(-2), Q(0), Q(1, 2), Q(3, 2), Q(2), Q(7)):
            assert g.eval(qv(y)) == f_kink.conjugate_eval(qv(y))

    def test_biconjugate_identity(self, f_kink):
        for f in (make_abs(), f_kink):
            h = f.biconjugate()
            assert polyhedron_equal(h.epigraph, f.epigraph)

    def test_improper_conjugate_rejected(self):
        empty_dom = Polyhedron.from_hrep(1, [(qv(1), Q(0)), (qv(-1), Q(-1))])
        f = PF(1, [(qv(1), Q(0))], empty_dom)
        with pytest.raises(ImproperFunctionError):
            f.conjugate()


class TestEpsSubdifferential:
    def test_abs_at_zero(self):
        f = make_abs()
        sub = f.eps_subdifferential(qv(0), Q(0))
        assert polyhedron_equal(sub, Polyhedron.box(qv(-1), qv(1)))

    def test_abs_away_from_zero(self):
        # at x = 2 with eps = 1: slopes with 2y >= 2 - 1
        f = make_abs()
        sub = f.eps_subdifferential(qv(2), Q(1))
        assert polyhedron_equal(sub, Polyhedron.box(qv("1/2"), qv(1)))

    def test_monotone_in_eps(self, f_kink):
        small = f_kink.eps_subdifferential(qv(1), Q(0))
        large = f_kink.eps_subdifferential(qv(1), Q(1, 2))
        assert all(large.contains(v) for v in small.vertices)
        assert polyhedron_equal(small, Polyhedron.box(qv(1), qv(2)))

    def test_outside_domain_empty(self, f_kink):
        assert f_kink.eps_subdifferential(qv(-3), Q(1)).is_empty

    def test_negative_eps_rejected(self, f_kink):
        with pytest.raises(InvalidParameterError):
            f_kink.eps_subdifferential(qv(1), Q(-1))


class TestEpsNormalSet:
    def test_half_line_at_origin(self):
        c = Polyhedron.from_hrep(1, [(qv(-1), Q(0))])  # [0, oo)
        n = eps_normal_set(c, qv(0), Q(0))
        assert polyhedron_equal(n, Polyhedron.from_hrep(1, [(qv(1), Q(0))]))

    def test_unit_interval_relaxed(self):
        c = Polyhedron.box(qv(0), qv(1))
        n = eps_normal_set(c, qv(0), Q(1, 2))
        assert polyhedron_equal(n, Polyhedron.from_hrep(1, [(qv(1), Q(1, 2))]))

    def test_outside_is_empty(self):
        c = Polyhedron.box(qv(0), qv(1))
        assert eps_normal_set(c, qv(2), Q(0)).is_empty

    def test_normal_cone_alias(self):
        c = Polyhedron.box(qv(0), qv(1))
        assert polyhedron_equal(
            normal_cone(c, qv(1)), eps_normal_set(c, qv(1), Q(0))
        )


class TestRecessionFunction:
    def test_abs_is_fixed_point(self):
        f = make_abs()
        h = f.recession_function()
        for x in (Q(-3), Q(0), Q(2)):
            assert h.eval(qv(x)) == f.eval(qv(x))

    def test_indicator_of_interval(self):
        f = PolyhedralFunction.indicator(Polyhedron.box(qv(0), qv(1)))
        h = f.recession_function()
        assert h.eval(qv(0)) == FIN(Q(0))
        assert h.eval(qv(1)) == POS_INF
        assert h.eval(qv(-1)) == POS_INF

    def test_kink_on_half_line(self):
        f = PF(
            1,
            [(qv(1), Q(0)), (qv(2), Q(-1))],
            Polyhedron.from_hrep(1, [(qv(-1), Q(0))]),
        )
        h = f.recession_function()
        assert h.eval(qv(1)) == FIN(Q(2))
        assert h.eval(qv(3)) == FIN(Q(6))
        assert h.eval(qv(-1)) == POS_INF

    def test_epigraph_is_recession_cone_of_epigraph(self, f_kink):
        for f in (make_abs(), f_kink):
            h = f.recession_function()
            assert polyhedron_equal(h.epigraph, recession_cone(f.epigraph))


class TestEpiPointed:
    def test_abs_certificate(self):
        cert = make_abs().is_epi_pointed()
        assert cert is not None
        assert cert.minorant_slope == qv(0) and cert.margin == Q(1)
        assert cert.verify(make_abs())

    def test_point_indicator_certificate(self):
        f = PolyhedralFunction.indicator(Polyhedron.single_point(qv(0)))
        cert = f.is_epi_pointed()
        assert cert is not None and cert.verify(f)

    def test_flat_dual_domain_has_none(self):
        f = PF(2, [(qv(1, 0), Q(0)), (qv(-1, 0), Q(0))])
        assert f.is_epi_pointed() is None


class TestSubdiffDensity:
    def test_exact_form(self):
        rep = verify_subdiff_density(make_abs(), qv(0), Q(1))
        assert rep.status == "pass" and rep.details["form"] == "exact"

    def test_gamma_form(self):
        rep = verify_subdiff_density(make_abs(), qv(0), Q(0))
        assert rep.status == "pass" and rep.details["form"] == "gamma"

    def test_not_epi_pointed(self):
        f = PF(2, [(qv(1, 0), Q(0)), (qv(-1, 0), Q(0))])
        rep = verify_subdiff_density(f, qv(0, 0), Q(1))
        assert rep.status == "hypotheses-not-met"

    def test_outside_domain_trivial(self, f_kink):
        rep = verify_subdiff_density(f_kink, qv(-1), Q(1))
        assert rep.status == "trivial-pass"


class TestSublevelClosure:
    def test_abs_at_one(self):
        rep = verify_sublevel_closure(make_abs(), Q(1))
        assert rep.status == "pass" and rep.details["strict_form"] == "witnessed"

    def test_abs_at_infimum(self):
        rep = verify_sublevel_closure(make_abs(), Q(0))
        assert rep.status == "pass"
        assert rep.details["strict_form"].startswith("skipped")

    def test_below_infimum_trivial(self):
        rep = verify_sublevel_closure(make_abs(), Q(-1))
        assert rep.status == "trivial-pass"

    def test_two_slope_level(self):
        # h = max(x, 2x - 1): the level set at 2 is (-oo, 3/2]
        h = PF(1, [(qv(1), Q(0)), (qv(2), Q(-1))])
        rep = verify_sublevel_closure(h, Q(2))
        assert rep.status == "pass" and rep.details["strict_form"] == "witnessed"

    def test_improper_rejected(self):
        empty_dom = Polyhedron.from_hrep(1, [(qv(1), Q(0)), (qv(-1), Q(-1))])
        with pytest.raises(ImproperFunctionError):
            verify_sublevel_closure(PF(1, [(qv(1), Q(0))], empty_dom), Q(0))
