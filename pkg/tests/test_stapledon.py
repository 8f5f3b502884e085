from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from newtonzeta.equivariant_hodge import WeightedPolytope
from newtonzeta.errors import InconsistencyError, PreconditionError
from newtonzeta.jordan_spectrum import LOCAL, assemble_local, jordan_blocks, jordan_top_sizes, relevant_lambdas
from newtonzeta.lattice_geom import LatticePolytope
from newtonzeta.newton import Support
from newtonzeta.stapledon import (
    direct_hstar_on_base,
    equivariant_E,
    jordan_full,
    link_h,
    local_h,
    mixed_hstar,
    peval,
    reverse,
    staircase,
    subdivision_from_newton,
    toric_g,
    weighted_hstar,
    weighted_lstar,
)
from newtonzeta.zeta import charpoly_and_multiplicity, zeta_local

from corpus import small_corpus
from oracles import hull2d

CUSP = Support.of([(2, 0), (0, 3)])
SMOOTH = Support.of([(1, 0), (0, 1)])
SIXTH = Fraction(1, 6)


# ---- toric g -------------------------------------------------------------------------------------


def test_g_small_intervals():
    assert toric_g([(0, 0)], [(0, 0)]) == [1]
    assert toric_g([], [(0, 0)]) == [1]
    assert toric_g([], [(0, 0), (1, 0)]) == [1]
    assert toric_g([], [(0, 0), (1, 0), (0, 1)]) == [1]
    assert toric_g([(0, 0)], [(0, 0), (2, 0), (0, 2), (1, 3)]) == [1]


@pytest.mark.parametrize("m", [3, 4, 5, 6, 8])
def test_g_of_polygon(m):
    import math
    pts = [(round(100 * math.cos(2 * math.pi * k / m)), round(100 * math.sin(2 * math.pi * k / m)))
           for k in range(m)]
    assert len(hull2d(pts)) == m
    assert toric_g([], pts) == ([1, m - 3] if m > 3 else [1])


def test_g_of_square_pyramid_dual():
    base = [(0, 0, 0), (1, 0, 0), (1, 1, 0), (0, 1, 0)]
    pyramid = base + [(0, 0, 1)]
    assert toric_g([], pyramid) == [1, 1]
    assert toric_g([], pyramid, dual=True) == [1, 1]


@settings(max_examples=30, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 4), st.integers(0, 4), st.integers(0, 3)), min_size=4, max_size=8))
def test_g_degree_bound(pts):
    poly = LatticePolytope(pts)
    verts = list(poly.vertices)
    g = toric_g([], verts)
    assert g[0] == 1 and len(g) - 1 <= poly.dim // 2
    assert all(c >= 0 for c in g)


# ---- the subdivision ----------------------------------------------------------------------------------


def test_cusp_subdivision_is_one_triangle():
    s = subdivision_from_newton(CUSP)
    assert s.maximal_cells() == [frozenset({(0, 0), (2, 0), (0, 3)})]
    assert s.nu((1, 1)) == Fraction(1, 6)
    assert s.nu((0, 0)) == 1 and s.nu((2, 0)) == 0


def test_smooth_and_square_subdivisions():
    assert subdivision_from_newton(SMOOTH).maximal_cells() == [frozenset({(0, 0), (1, 0), (0, 1)})]
    assert len(subdivision_from_newton(Support.of([(2, 0), (1, 1), (0, 2)])).maximal_cells()) == 1


def test_reflex_vertex_adds_a_flat_cell():
    s = subdivision_from_newton(Support.of([(4, 0), (1, 1), (0, 4)]))
    cells = s.maximal_cells()
    assert len(cells) == 3
    flat = frozenset({(4, 0), (1, 1), (0, 4)})
    assert flat in cells
    assert s.nu((2, 1)) == 0


def test_subdivision_preconditions():
    with pytest.raises(PreconditionError):
        subdivision_from_newton(Support.of([(0, 0), (2, 0), (0, 2)]))
    with pytest.raises(PreconditionError):
        subdivision_from_newton(Support.of([(2, 1), (1, 2)]))


# ---- link and local h ---------------------------------------------------------------------------------


def test_link_and_local_h_of_a_simplex():
    s = subdivision_from_newton(CUSP)
    top = frozenset({(0, 0), (2, 0), (0, 3)})
    assert link_h(s, frozenset()) == [1]
    assert local_h(s, frozenset()) == []
    assert local_h(s, top) == [1]
    for c in s.cells:
        assert link_h(s, c) == [1]
    with pytest.raises(PreconditionError):
        link_h(s, frozenset({(1, 1)}))


@pytest.mark.parametrize("s", small_corpus(3, 6, seed=5))
def test_local_h_symmetric_unimodal(s):
    if tuple([0] * s.n) in s.exponents:
        pytest.skip("origin in the support")
    sub = subdivision_from_newton(s)
    for cell, d in sub.cells.items():
        l = local_h(sub, cell)
        degree = sub.dim - d
        assert reverse(l, degree) == l
        if l:
            staircase(l, degree)
        assert all(c >= 0 for c in link_h(sub, cell))


# ---- weighted h* and l* ---------------------------------------------------------------------------------


def test_weighted_hstar_examples():
    seg = WeightedPolytope(LatticePolytope([(0,), (1,)]), (Fraction(0),))
    square = WeightedPolytope(LatticePolytope([(0, 0), (1, 0), (0, 1), (1, 1)]), (Fraction(0), Fraction(0)))
    assert weighted_hstar(seg, 0) == [1]
    assert weighted_hstar(square, 0) == [1, 1]
    assert weighted_hstar(square, Fraction(1, 2)) == []
    assert weighted_hstar(None, 0) == [1] and weighted_hstar(None, Fraction(1, 3)) == []


def test_weighted_lstar_examples():
    seg = subdivision_from_newton(Support.of([(3,)]))
    whole = frozenset({(0,), (3,)})
    assert weighted_lstar(seg, whole, 0) == []
    assert weighted_lstar(seg, whole, Fraction(1, 3)) == [0, 1]
    cusp = subdivision_from_newton(CUSP)
    assert peval(weighted_lstar(cusp, frozenset({(0, 0), (2, 0), (0, 3)}), SIXTH), 1) == 1


def test_staircase():
    assert staircase([1, 2, 1], 2) == [1, 1]
    assert staircase([0, 1, 0], 2) == [0, 1]
    with pytest.raises(InconsistencyError):
        staircase([1, 0, 1], 2)
    with pytest.raises(InconsistencyError):
        staircase([1, 2], 2)


# ---- E and Jordan blocks ------------------------------------------------------------------------------


def test_cusp_equivariant_E_and_blocks():
    sub = subdivision_from_newton(CUSP)
    assert equivariant_E(CUSP, SIXTH, sub) == {(0, 1): -1}
    assert mixed_hstar(sub, SIXTH) == {(1, 2): 1}
    assert direct_hstar_on_base(sub, SIXTH) == [0, 1]
    j = jordan_full(CUSP, sub=sub)
    assert j[SIXTH] == {1: 1} and j[Fraction(5, 6)] == {1: 1}
    assert all(not v for k, v in j.items() if k not in (SIXTH, Fraction(5, 6)))


def test_smooth_point_has_no_blocks():
    assert jordan_full(SMOOTH) == {}
    assert equivariant_E(SMOOTH, Fraction(1, 2)) == {}
    with pytest.raises(PreconditionError):
        equivariant_E(SMOOTH, 0)


SUBDIVISION_CORPUS = [s for s in small_corpus(3, 8, seed=17) if tuple([0] * s.n) not in s.exponents]


@pytest.mark.parametrize("s", SUBDIVISION_CORPUS)
def test_subdivision_route_agrees_with_tables(s):
    n = s.n
    sub = subdivision_from_newton(s)
    lams = [l for l in relevant_lambdas(s, LOCAL) if l]
    table = assemble_local(s)
    blocks = jordan_blocks(table, n, LOCAL, lams)
    full = jordan_full(s, lams, sub)
    top = jordan_top_sizes(s, LOCAL, lams)
    cp = charpoly_and_multiplicity(zeta_local(s), n, "local-isolated")
    for lam in lams:
        assert full[lam] == blocks.for_lambda(lam)
        assert sum(k * c for k, c in full[lam].items()) == cp[lam]
        for size in (n, n - 1):
            if size >= 1:
                assert full[lam].get(size, 0) == top.get(size, lam)
        E = equivariant_E(s, lam, sub)
        for p in range(n):
            for q in range(n):
                assert E.get((p, q), 0) == table.get(p, q, lam)
        mixed = mixed_hstar(sub, lam)
        spec = {}
        for (i, j), c in mixed.items():
            spec[i] = spec.get(i, 0) + c
        assert [spec.get(i, 0) for i in range(n + 1)] == (
            direct_hstar_on_base(sub, lam) + [0] * (n + 1))[:n + 1]
