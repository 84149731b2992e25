from math import comb

import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import leibniz_det
from rigidlab.crossval import tight_count_classes
from rigidlab.fields import RationalField
from rigidlab.framework import Framework, sample_generic
from rigidlab.hypergraph import WeightedHypergraph, expand
from rigidlab.mapdecomp import enumerate_decompositions
from rigidlab.purecond import (
    RowLimitExceeded,
    det_at,
    laplace_verify,
    map_partition_sum,
    ordered_partitions,
    partition_sign,
    vanishing_probe,
)
from rigidlab.rigidmatrix import assemble, direct_jacobian


def test_partition_count():
    assert sum(1 for _ in ordered_partitions(8, 2, 4)) == comb(8, 4)
    assert sum(1 for _ in ordered_partitions(9, 3, 3)) == comb(9, 3) * comb(6, 3)
    assert list(ordered_partitions(5, 2, 2)) == []


@given(st.permutations(range(6)))
def test_partition_sign_is_parity(perm):
    blocks = (tuple(sorted(perm[:3])), tuple(sorted(perm[3:])))
    flat = [r for b in blocks for r in b]
    ident = [[1 if c == r else 0 for c in range(6)] for r in range(6)]
    assert partition_sign(blocks) == leibniz_det([ident[r] for r in flat])


def test_fig2_laplace(fig2):
    m = assemble(sample_generic(fig2, 0, "rational"))
    res = laplace_verify(m)
    assert res.equal and res.lhs == res.rhs == res.map_rhs
    assert res.partitions == 70 and res.nonmap_terms_zero
    assert res.lhs == leibniz_det(m.as_lists())


def test_single_vertex_laplace():
    h = WeightedHypergraph.build(3, [(["v"], 1)])
    res = laplace_verify(assemble(sample_generic(h, 0, "rational")))
    assert res.equal and res.partitions == 2 and res.lhs == 1


def test_zero_row_blocks_contribute_nothing():
    # e = {a}, s = 1, d = 3: its t = 1 row is zero in group 2
    h = WeightedHypergraph.build(3, [(["a"], 1), (["a", "b"], 1), (["b"], 1)])
    m = assemble(sample_generic(h, 3, "rational"))
    f = m.field
    for blocks in ordered_partitions(4, 2, 2):
        if 0 in blocks[1]:
            assert f.det(m.block(blocks[1], 2)) == 0


def test_laplace_rejects_big_or_non_square(fig1, example2):
    with pytest.raises(ValueError):
        laplace_verify(assemble(sample_generic(fig1, 0, "rational")))
    with pytest.raises(RowLimitExceeded):
        laplace_verify(assemble(sample_generic(example2, 0, "rational")))


def test_fig2_map_sum(fig2):
    fw = sample_generic(fig2, 5, "rational")
    value, terms = map_partition_sum(fw, enumerate_decompositions(expand(fig2), 2))
    assert value == det_at(fw) != 0
    assert terms == laplace_verify(assemble(fw)).map_partitions


def test_single_vertex_map_sum_terms():
    h = WeightedHypergraph.build(3, [(["v"], 1)])
    fw = sample_generic(h, 0, "rational")
    decs = list(enumerate_decompositions(expand(h), 2))
    assert map_partition_sum(fw, decs) == (1, 2)


def _square_small():
    out = []
    for d, n in [(2, 1), (2, 2), (2, 3), (2, 4), (3, 1), (3, 2), (3, 3), (4, 1), (4, 2)]:
        out.extend(tight_count_classes(d, n))
    return out


@pytest.mark.parametrize("h", _square_small()[::7])
def test_laplace_identity_on_small_square_instances(h):
    fw = sample_generic(h, 1, "rational")
    m = assemble(fw)
    res = laplace_verify(m)
    assert res.equal and res.nonmap_terms_zero and res.map_rhs == res.lhs
    value, _ = map_partition_sum(fw, enumerate_decompositions(expand(h), h.d - 1))
    assert value == res.lhs


def test_probe_example2(example2):
    probe = vanishing_probe(example2, 5, 0)
    assert probe.always_zero and probe.witnesses == () and probe.samples == 5
    assert probe.failure_bound < 1e-70


def test_probe_fig2(fig2):
    probe = vanishing_probe(fig2, 5, 0)
    assert not probe.always_zero and probe.witnesses


def test_collapsed_point_is_zero_but_not_always(fig2):
    fw = sample_generic(fig2, 2, "rational")
    coords = list(fw.coords)
    coords[3] = coords[2]  # v3 = v4 puts both pin points of e5 on one point
    pins = list(fw.pins)
    pins[4] = (coords[2], coords[2])
    collapsed = Framework(fig2, RationalField(), tuple(coords), tuple(pins),
                          fw.pin_coeffs)
    # the simplified matrix is undefined here (D^k = 0); the direct Jacobian is not
    jac = direct_jacobian(collapsed)
    assert jac.det() == 0
    assert not vanishing_probe(fig2, 3, 2).always_zero


def test_probe_requirements(fig1, fig2):
    with pytest.raises(ValueError):
        vanishing_probe(fig1)
    with pytest.raises(ValueError):
        vanishing_probe(fig2, field="float")
