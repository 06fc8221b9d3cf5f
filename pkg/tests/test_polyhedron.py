"""Polyhedron kernel: representations, set algebra, recession structure.

Derived expectations in this file come from a support-function oracle
built on raw vertex/ray enumeration, never from the operation under test.
"""
from fractions import Fraction as Q

import pytest
from hypothesis import given
from hypothesis import strategies as st

from supcalc.errors import CapacityError, EmptySetError, InvalidParameterError
from supcalc.polyhedron import (
    Polyhedron,
    affine_preimage,
    cco_union,
    cone_is_trivial,
    dd_dimension_cap,
    included,
    interior_point,
    intersect,
    is_pointed,
    lineality_space,
    minkowski_sum,
    polyhedron_equal,
    recession_cone,
    support_value,
)
from supcalc.rationals import NEG_INF, POS_INF, ExtendedRational, dot, qv

FIN = ExtendedRational.finite

DIRECTIONS_2D = [
    qv(a, b)
    for a, b in [
        (1, 0), (0, 1), (-1, 0), (0, -1), (1, 1), (1, -1), (-1, 1), (-1, -1),
        (2, 1), (1, 2), (-2, 1), (1, -2), (3, -1), (-1, 3), (-3, -2), (2, -3),
        (Q(1, 2), 1), (1, Q(1, 3)), (Q(-2, 3), Q(1, 5)), (Q(5, 7), Q(-1, 2)),
    ]
]


def oracle_support(verts, rays, d):
    """sup of <d, x> over conv(verts) + cone(rays), by direct enumeration."""
    if not verts:
        return NEG_INF
    if any(dot(d, r) > 0 for r in rays):
        return POS_INF
    return FIN(max(dot(d, v) for v in verts))


class TestRepresentations:
    def test_box_round_trip(self):
        box = Polyhedron.box(qv(-1, 0), qv(2, 3))
        verts, rays = box.generators
        assert sorted(verts) == [
            qv(-1, 0), qv(-1, 3), qv(2, 0), qv(2, 3)
        ]
        assert rays == ()
        assert polyhedron_equal(Polyhedron.from_generators(2, verts, rays), box)

    def test_triangle_from_generators(self):
        tri = Polyhedron.from_generators(2, [qv(0, 0), qv(1, 0), qv(0, 1)])
        assert tri.contains(qv("1/4", "1/4"))
        assert not tri.contains(qv(1, 1))
        assert sorted(tri.vertices) == [qv(0, 0), qv(0, 1), qv(1, 0)]

    def test_single_point_and_full_space(self):
        pt = Polyhedron.single_point(qv(2, -1))
        assert pt.vertices == (qv(2, -1),) and pt.rays == ()
        full = Polyhedron.full_space(2)
        assert full.contains(qv(100, -100)) and full.ineqs == () and full.eqs == ()

    def test_empty(self):
        e = Polyhedron.empty(2)
        assert e.is_empty and not e.contains(qv(0, 0))
        assert e.generators == ((), ())

    def test_contains_interior_and_ray(self):
        box = Polyhedron.box(qv(0), qv(1))
        assert box.contains_in_interior(qv("1/2"))
        assert not box.contains_in_interior(qv(0))
        ray = Polyhedron.from_hrep(2, [(qv(-1, 0), Q(0))])
        assert ray.contains_ray(qv(1, 0))
        assert ray.contains_ray(qv(0, 1))
        assert not ray.contains_ray(qv(-1, 0))


class TestSetAlgebra:
    def test_minkowski_sum_against_support_oracle(self):
        tri = Polyhedron.from_generators(2, [qv(0, 0), qv(1, 0), qv(0, 1)])
        beam = Polyhedron.from_generators(2, [qv(0, 0)], [qv(1, 1)])
        s = minkowski_sum(tri, beam)
        for d in DIRECTIONS_2D:
            want = oracle_support(tri.vertices, tri.rays, d) + oracle_support(
                beam.vertices, beam.rays, d
            )
            assert support_value(s, d) == want

    def test_cco_union_interval(self):
        a = Polyhedron.box(qv(0), qv(1))
        b = Polyhedron.box(qv(2), qv(3))
        u = cco_union([a, b])
        assert polyhedron_equal(u, Polyhedron.box(qv(0), qv(3)))

    def test_cco_union_support_is_max(self):
        a = Polyhedron.box(qv(-1, -1), qv(0, 0))
        b = Polyhedron.from_generators(2, [qv(1, 0)], [qv(0, 1)])
        u = cco_union([a, b])
        for d in DIRECTIONS_2D:
            want = max(
                oracle_support(a.vertices, a.rays, d),
                oracle_support(b.vertices, b.rays, d),
            )
            assert support_value(u, d) == want

    def test_intersect_included_equal(self):
        big = Polyhedron.box(qv(0, 0), qv(4, 4))
        small = Polyhedron.box(qv(1, 1), qv(2, 2))
        assert included(small, big) and not included(big, small)
        cap = intersect(big, Polyhedron.box(qv(1, 1), qv(9, 9)))
        assert polyhedron_equal(cap, Polyhedron.box(qv(1, 1), qv(4, 4)))
        assert not polyhedron_equal(big, small)

    def test_included_with_rays(self):
        quad = Polyhedron.from_hrep(2, [(qv(-1, 0), Q(0)), (qv(0, -1), Q(0))])
        half = Polyhedron.from_hrep(2, [(qv(-1, -1), Q(0))])
        assert included(quad, half)
        assert not included(half, quad)


class TestRecession:
    def test_recession_cone_of_wedge(self):
        wedge = Polyhedron.from_hrep(
            2, [(qv(-1, 0), Q(1)), (qv(1, -1), Q(2))]
        )
        rc = recession_cone(wedge)
        assert rc.contains(qv(0, 1)) and rc.contains(qv(1, 1))
        assert not rc.contains(qv(1, 0))
        assert rc.contains(qv(0, 0))

    def test_recession_cone_of_polytope_is_origin(self):
        rc = recession_cone(Polyhedron.box(qv(0, 0), qv(1, 1)))
        assert polyhedron_equal(rc, Polyhedron.single_point(qv(0, 0)))

    def test_lineality_and_pointedness(self):
        slab = Polyhedron.from_hrep(2, [(qv(1, 0), Q(1)), (qv(-1, 0), Q(1))])
        lin = lineality_space(slab)
        assert lin.contains(qv(0, 5)) and lin.contains(qv(0, -5))
        assert not is_pointed(slab)
        assert is_pointed(Polyhedron.box(qv(0, 0), qv(1, 1)))

    def test_cone_is_trivial(self):
        dim = 2
        origin_rows = [(qv(1, 0), Q(0)), (qv(-1, 0), Q(0)),
                       (qv(0, 1), Q(0)), (qv(0, -1), Q(0))]
        assert cone_is_trivial(dim, origin_rows, [])
        assert not cone_is_trivial(dim, [(qv(1, 0), Q(0))], [])


class TestInteriorPoint:
    def test_box_interior(self):
        box = Polyhedron.box(qv(0, 0), qv(1, 1))
        x = interior_point(box)
        assert x is not None and box.contains_in_interior(x)

    def test_flat_and_empty_have_none(self):
        seg = Polyhedron.from_hrep(
            2, [(qv(1, 0), Q(1)), (qv(-1, 0), Q(0))], [(qv(0, 1), Q(0))]
        )
        assert interior_point(seg) is None
        assert interior_point(Polyhedron.empty(2)) is None

    def test_row_free_full_space(self):
        x = interior_point(Polyhedron.full_space(3))
        assert x is not None and len(x) == 3


class TestAffinePreimage:
    def test_line_section_of_box(self):
        box = Polyhedron.box(qv(0, 0), qv(1, 1))
        # z maps to (z, 1/2); preimage is the unit interval
        pre = affine_preimage(box, [qv(1), qv(0)], qv(0, "1/2"))
        assert polyhedron_equal(pre, Polyhedron.box(qv(0), qv(1)))

    def test_shifted_scaling(self):
        box = Polyhedron.box(qv(0), qv(4))
        # z maps to 2z + 1; preimage of [0,4] is [-1/2, 3/2]
        pre = affine_preimage(box, [qv(2)], qv(1))
        assert polyhedron_equal(pre, Polyhedron.box(qv("-1/2"), qv("3/2")))


class TestSupportValue:
    def test_box_and_unbounded(self):
        box = Polyhedron.box(qv(-1, 0), qv(2, 3))
        assert support_value(box, qv(1, 1)) == FIN(Q(5))
        beam = Polyhedron.from_generators(2, [qv(0, 0)], [qv(1, 0)])
        assert support_value(beam, qv(1, 0)) == POS_INF
        assert support_value(beam, qv(-1, 0)) == FIN(Q(0))
        assert support_value(Polyhedron.empty(2), qv(1, 0)) == NEG_INF


class TestCap:
    def test_env_cap_enforced(self, monkeypatch):
        monkeypatch.setenv("SUPCALC_DD_CAP", "2")
        assert dd_dimension_cap() == 2
        with pytest.raises(CapacityError):
            Polyhedron.box(qv(0, 0, 0), qv(1, 1, 1)).generators

    def test_bad_cap_values(self, monkeypatch):
        monkeypatch.setenv("SUPCALC_DD_CAP", "zero")
        with pytest.raises(InvalidParameterError):
            dd_dimension_cap()
        monkeypatch.setenv("SUPCALC_DD_CAP", "0")
        with pytest.raises(InvalidParameterError):
            dd_dimension_cap()


interval_bounds = st.tuples(
    st.fractions(min_value=-4, max_value=4, max_denominator=6),
    st.fractions(min_value=-4, max_value=4, max_denominator=6),
)


@given(interval_bounds, interval_bounds)
def test_double_conversion_identity(bx, by):
    lo = (min(bx), min(by))
    hi = (max(bx), max(by))
    p = Polyhedron.box(lo, hi)
    rebuilt = Polyhedron.from_generators(2, *p.generators)
    assert polyhedron_equal(rebuilt, p)


@given(
    st.lists(
        st.tuples(
            st.integers(min_value=-3, max_value=3),
            st.integers(min_value=-3, max_value=3),
            st.integers(min_value=0, max_value=4),
        ),
        min_size=1,
        max_size=4,
    )
)
def test_generators_satisfy_their_own_hrep(rows):
    ineqs = [((Q(a), Q(b)), Q(c)) for a, b, c in rows if (a, b) != (0, 0)]
    if not ineqs:
        return
    p = Polyhedron.from_hrep(2, ineqs)
    verts, rays = p.generators
    for v in verts:
        assert p.contains(v)
    for r in rays:
        assert p.contains_ray(r)
