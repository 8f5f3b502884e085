import random
from fractions import Fraction
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from newtonzeta.equivariant_hodge import (
    UNDETERMINED,
    EHodgeTable,
    WeightedPolytope,
    conj,
    e_edge,
    e_high,
    e_row_sum,
    e_table,
    nonequivariant,
    primality,
    pseudo_prime_antidiagonal,
    twist,
)
from newtonzeta.errors import PreconditionError
from newtonzeta.jordan_spectrum import INFINITY, LOCAL, face_weight
from newtonzeta.lattice_geom import LatticePolytope
from newtonzeta.newton import face_geometry

from oracles import series_division, weight_from_values

CUSP_FACE = face_geometry([(2, 0), (0, 3)])
SQUARE = LatticePolytope([(0, 0), (1, 0), (0, 1), (1, 1)])


def cusp_delta(context=INFINITY) -> WeightedPolytope:
    return WeightedPolytope(CUSP_FACE.delta, face_weight(CUSP_FACE, context))


def random_weighted_simplex(rng: random.Random, dim: int) -> WeightedPolytope:
    while True:
        vs = [tuple(rng.randint(-2, 3) for _ in range(dim)) for _ in range(dim)]
        p = LatticePolytope([tuple([0] * dim)] + vs)
        if p.dim == dim:
            break
    y = weight_from_values(vs, [rng.randint(0, 3) for _ in vs])
    return WeightedPolytope(p, y)


# ---- weighted counts --------------------------------------------------------------------


def test_cusp_interior_point_class():
    w = cusp_delta()
    assert w.class_of((1, 1)) == Fraction(1, 6)
    assert w.weighted_counts(1, Fraction(1, 6)) == (1, 1)


def test_zeroth_dilation():
    w = cusp_delta()
    assert w.weighted_counts(0, 0) == (1, 0)


def test_square_second_dilation():
    assert WeightedPolytope(SQUARE).weighted_counts(2, 0) == (9, 1)


def test_negative_dilation_rejected():
    with pytest.raises(PreconditionError):
        WeightedPolytope(SQUARE).weighted_counts(-1, 0)


def test_weight_must_be_trivial_on_vertices():
    with pytest.raises(PreconditionError):
        WeightedPolytope(SQUARE, (Fraction(1, 2), 0))


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10_000), st.integers(1, 3), st.integers(0, 3))
def test_counts_do_not_depend_on_the_base_vertex(seed, dim, k):
    w = random_weighted_simplex(random.Random(seed), dim)
    shift = w.polytope.vertices[-1]
    moved = WeightedPolytope(LatticePolytope([tuple(a - b for a, b in zip(v, shift))
                                              for v in w.polytope.vertices]), w.weight)
    for a in w.classes():
        assert w.weighted_counts(k, a) == moved.weighted_counts(k, a)


# ---- φ and ψ --------------------------------------------------------------------------------


def test_unit_segment_phi_psi():
    phi, psi = WeightedPolytope(LatticePolytope([(0,), (1,)])).phi_psi(0)
    assert psi == (1, 0, 0) and phi == (0, 0, 1)


def test_empty_class_gives_zero():
    phi, psi = cusp_delta().phi_psi(Fraction(1, 7))
    assert not any(phi) and not any(psi)


def test_cusp_phi_by_series_division():
    w = cusp_delta()
    for a in w.classes():
        inner = [w.weighted_counts(k, a)[1] for k in range(4)]
        closed = [w.weighted_counts(k, a)[0] for k in range(4)]
        phi, psi = w.phi_psi(a)
        assert list(phi) == series_division(inner, 2)
        assert list(psi) == series_division(closed, 2)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000), st.integers(1, 3))
def test_reciprocity(seed, dim):
    w = random_weighted_simplex(random.Random(seed), dim)
    for a in w.classes():
        phi, _ = w.phi_psi(a)
        _, psi_bar = w.phi_psi(conj(a))
        assert all(phi[i] == psi_bar[dim + 1 - i] for i in range(dim + 2))


# ---- closed forms ------------------------------------------------------------------------------


def test_high_region():
    assert e_high(2, 0, 1, 1) == 1
    assert e_high(2, 0, 2, 0) == 0
    assert e_high(3, Fraction(1, 3), 2, 2) == 0
    with pytest.raises(PreconditionError):
        e_high(2, 0, 0, 1)


def test_row_sums_examples():
    w = cusp_delta()
    assert e_row_sum(w, Fraction(1, 6), 0) == -w.phi(Fraction(1, 6), 2)
    seg = WeightedPolytope(LatticePolytope([(0,), (5,)]))
    assert e_row_sum(seg, 0, 0) == 5


def test_cusp_edge_values():
    w = cusp_delta()
    assert w.skeleton_count(0) == 3
    assert e_edge(w, 0)[(0, 0)] == -2
    assert e_edge(w, Fraction(1, 6))[(1, 0)] == -1


def test_segment_table_counts_the_points():
    seg = WeightedPolytope(LatticePolytope([(0,), (5,)]), (Fraction(1, 5),))
    t = e_table(seg)
    assert t.sorted_items() == [((0, 0, Fraction(a, 5)), 1) for a in range(5)]


def test_cusp_table():
    t = e_table(cusp_delta())
    assert t.get(0, 0, 0) == -2 and t.get(1, 1, 0) == 1
    assert t.get(1, 0, Fraction(1, 6)) == -1 and t.get(0, 1, Fraction(5, 6)) == -1
    for a in (Fraction(1, 3), Fraction(1, 2), Fraction(2, 3)):
        assert t.get(0, 0, a) == -1


def test_mode_validation():
    with pytest.raises(PreconditionError):
        e_table(cusp_delta(), mode="guess")
    with pytest.raises(PreconditionError):
        pseudo_prime_antidiagonal(cusp_delta(), 0, 0)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 100_000), st.integers(1, 3))
def test_table_laws_on_weighted_simplices(seed, dim):
    w = random_weighted_simplex(random.Random(seed), dim)
    t = e_table(w, mode="completion")
    assert t.is_determined()
    for (p, q, a), v in t.entries.items():
        assert t.get(q, p, conj(a)) == v
        if a != 0 and p + q > dim - 1:
            pytest.fail("nonzero entry in the high region for a nontrivial class")
    for a in w.classes():
        for p in range(dim + 1):
            assert sum(t.get(p, q, a) for q in range(dim + 1)) == e_row_sum(w, a, p)
    fast = e_table(w, [a for a in w.classes() if a], mode="pseudo-prime")
    for a in w.classes():
        if a:
            for r in range(dim):
                assert fast.antidiagonal(r, a) == t.antidiagonal(r, a)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10_000), st.integers(1, 3))
def test_class_sum_is_the_nonequivariant_table(seed, dim):
    w = random_weighted_simplex(random.Random(seed), dim)
    total = nonequivariant(e_table(w))
    plain = e_table(WeightedPolytope(w.polytope))
    assert {k: v for k, v in total.items() if v} == {(p, q): v for (p, q, _), v in plain.entries.items()}


def test_completion_is_complete_up_to_dimension_four():
    p = LatticePolytope([(0, 0, 0, 0), (2, 0, 0, 0), (0, 2, 0, 0), (0, 0, 2, 0), (0, 0, 0, 2)])
    assert e_table(WeightedPolytope(p, (Fraction(1, 2),) * 4), mode="completion").is_determined()


# ---- twist -----------------------------------------------------------------------------------------


def test_twist_examples():
    t = EHodgeTable(2, {(0, 0, Fraction(0)): 1})
    assert twist(t, 0).entries == t.entries
    assert twist(t, 1).sorted_items() == [((0, 0, Fraction(0)), 1), ((1, 1, Fraction(0)), -1)]


def test_twist_propagates_undetermined():
    t = EHodgeTable(2, {(0, 0, Fraction(0)): UNDETERMINED})
    assert twist(t, 1).get(1, 1, 0) is UNDETERMINED


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000), st.integers(0, 3))
def test_twist_on_antidiagonals(seed, m):
    w = random_weighted_simplex(random.Random(seed), 2)
    t = e_table(w)
    tw = twist(t, m)
    for a in w.classes():
        for r in range(2 * m + 3):
            expected = sum((-1) ** j * comb(m, j) * t.antidiagonal(r - 2 * j, a) for j in range(m + 1))
            assert tw.antidiagonal(r, a) == expected


# ---- primality ------------------------------------------------------------------------------------


def test_primality_examples():
    cube = LatticePolytope([(a, b, c) for a in (0, 1) for b in (0, 1) for c in (0, 1)])
    assert primality(cube) == (True, True)
    assert primality(LatticePolytope([(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)])) == (True, True)
    octa = LatticePolytope([(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1), (0, 0, -1)])
    assert primality(octa) == (False, True)


def test_local_and_infinity_weights_are_conjugate():
    loc, inf = cusp_delta(LOCAL), cusp_delta(INFINITY)
    assert loc.class_of((1, 1)) == conj(inf.class_of((1, 1)))
