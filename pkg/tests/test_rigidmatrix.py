from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import hypergraphs
from oracles import cofactor_row, rref_rank
from rigidlab.fields import MERSENNE_61
from rigidlab.framework import sample_generic
from rigidlab.hypergraph import WeightedHypergraph
from rigidlab.rigidmatrix import (
    RigidityMatrix,
    assemble,
    d_equality,
    direct_jacobian,
    edge_determinants,
    fd_jacobian,
    generic_rank,
    row_multipliers,
    row_pattern_check,
)


def _nonzero_groups(m, r):
    return [j for j in range(1, m.groups + 1) if any(m.block([r], j)[0])]


def test_two_point_edge_in_d4_pattern():
    h = WeightedHypergraph.build(4, [(["a", "b"], 2)])
    m = assemble(sample_generic(h, 1, "rational"))
    assert m.shape == (4, 6)
    # rows (t, l) = (1,1), (1,2), (2,1), (2,2)
    assert [_nonzero_groups(m, r) for r in range(4)] == [[1, 2], [1, 2], [1, 3], [1, 3]]
    assert row_pattern_check(m)


def test_single_vertex_rows_are_units():
    h = WeightedHypergraph.build(3, [(["a"], 1), (["b"], 1)])
    m = assemble(sample_generic(h, 1, "rational"))
    assert m.as_lists() == [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]]
    assert direct_jacobian(sample_generic(h, 1, "rational")).as_lists() == m.as_lists()


def test_fig2_layout(fig2):
    m = assemble(sample_generic(fig2, 0, "rational"))
    assert m.shape == (8, 8)
    assert row_pattern_check(m)
    # e3 = {v1, v3} has s = 2: its row lives in group 1 and in group 2 = s - 1 + t
    assert _nonzero_groups(m, 4) == [1, 2]
    assert [v for v in range(4) if m.rows[4][v]] == [0, 2]


def test_forged_entry_fails_pattern(fig2):
    m = assemble(sample_generic(fig2, 0, "rational"))
    rows = [list(r) for r in m.rows]
    rows[0][m.col(0, 2)] = Fraction(1)  # e1 row t = 1 must vanish in group 2
    forged = RigidityMatrix(m.field, m.n, m.groups, tuple(map(tuple, rows)), m.row_info)
    assert not row_pattern_check(forged)


def test_top_rank_edges_pattern():
    h = WeightedHypergraph.build(3, [(["a", "b"], 1), (["a", "b"], 2)])
    assert row_pattern_check(assemble(sample_generic(h, 2, "rational")))


@pytest.mark.parametrize("d", [3, 4])
@pytest.mark.parametrize("seed", range(4))
def test_direct_jacobian_matches_exact_derivative(d, seed):
    from rigidlab.generate import random_tight

    h = random_tight(d, 3, seed)
    fw = sample_generic(h, seed, "rational")
    jac = direct_jacobian(fw)
    for r, info in enumerate(jac.row_info):
        pts = fw.edge_points(info.edge)
        grads = cofactor_row(pts, fw.pins[info.edge][info.l - 1], info.size, info.t)
        for i, v in enumerate(info.members):
            for c in range(d - 1):
                assert jac.rows[r][jac.col(v, c + 1)] == grads[i][c]


@given(hypergraphs(), st.integers(0, 10**6))
def test_rows_are_proportional(h, seed):
    fw = sample_generic(h, seed, "rational")
    lam = row_multipliers(assemble(fw), direct_jacobian(fw))
    assert all(x is not None and x != 0 for x in lam)


@given(hypergraphs(max_n=4), st.integers(0, 10**6))
def test_kernels_agree(h, seed):
    fw = sample_generic(h, seed, "rational")
    a, b = assemble(fw).as_lists(), direct_jacobian(fw).as_lists()
    if a:
        assert rref_rank(a) == rref_rank(b) == rref_rank(a + b)


def test_fd_matches_cofactors(fig2):
    fw = sample_generic(fig2, 9, "float")
    fd = fd_jacobian(fw)
    ex = np.array(direct_jacobian(fw).rows, dtype=float)
    assert np.allclose(fd, ex, rtol=1e-6, atol=1e-6 * np.abs(ex).max())


@given(hypergraphs(), st.integers(0, 10**6))
def test_d_equality(h, seed):
    assert d_equality(sample_generic(h, seed, "rational"))
    assert d_equality(sample_generic(h, seed, "prime"))


def test_edge_determinants_zero_outside_columns():
    h = WeightedHypergraph.build(4, [(["a", "b"], 1)])
    dk = edge_determinants(sample_generic(h, 0, "rational"), 0)
    assert dk[(1, 3)] == 0 and dk[(2, 2)] == 0
    assert dk[(1, 2)] == dk[(2, 3)] != 0


def test_generic_rank_fixtures(fig1, fig2, example2):
    r2 = generic_rank(fig2, 3, "prime")
    assert (r2.rank, r2.full_rank, r2.flex_dim, r2.rigid) == (8, True, 0, True)
    r1 = generic_rank(fig1, 3, "prime")
    assert r1.rank <= 14 and r1.flex_dim >= 4 and not r1.rigid
    re = generic_rank(example2, 3, "rational")
    assert re.rank < 12 and not re.rigid


def test_generic_rank_single_vertex():
    r = generic_rank(WeightedHypergraph.build(3, [(["v"], 1)]))
    assert (r.rank, r.rigid) == (2, True)


@given(hypergraphs(max_n=4), st.integers(0, 100))
def test_rank_against_gauss_jordan(h, seed):
    fw = sample_generic(h, seed, "prime")
    m = assemble(fw)
    if m.rows:
        assert m.rank() == rref_rank(m.as_lists(), MERSENNE_61)


@given(hypergraphs(max_n=4), st.randoms(use_true_random=False))
def test_rank_relabel_invariant(h, rnd):
    order = list(range(h.n))
    rnd.shuffle(order)
    eorder = list(range(len(h.edges)))
    rnd.shuffle(eorder)
    g = h.relabel(None, eorder, order)
    assert generic_rank(h).rank == generic_rank(g).rank


@given(hypergraphs(max_n=4), st.integers(0, 100), st.lists(st.integers(1, 9), min_size=12, max_size=12))
def test_rank_invariant_under_row_scaling(h, seed, scales):
    m = assemble(sample_generic(h, seed, "rational"))
    scaled = [[x * scales[r % 12] for x in row] for r, row in enumerate(m.rows)]
    assert m.field.rank(scaled) == m.rank()


def test_rank_is_deterministic(fig1):
    assert generic_rank(fig1, 1, "prime", 42) == generic_rank(fig1, 1, "prime", 42)
