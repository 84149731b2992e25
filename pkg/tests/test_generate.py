import random

import pytest

from oracles import brute_sparse
from rigidlab.certificate import find_certificate
from rigidlab.generate import (
    GenerationError,
    edge_types,
    random_hypergraph,
    random_rigid,
    random_tight,
    rigid_suite,
)
from rigidlab.hypergraph import count_check, overpinned_screen, validate


@pytest.mark.parametrize("d, nv", [(2, 1), (2, 4), (3, 2), (3, 4), (4, 3), (4, 5)])
@pytest.mark.parametrize("seed", range(5))
def test_random_tight_is_tight(d, nv, seed):
    h = random_tight(d, nv, seed)
    assert validate(h).ok
    assert h.total_rows() == (d - 1) * nv
    assert count_check(h).tight
    assert brute_sparse(h.n, d, [(h.edge_indices(k), e.pin_dim) for k, e in enumerate(h.edges)])


def test_d3_nv4_row_count():
    h = random_tight(3, 4, seed=7)
    assert sum(e.pin_dim * (3 - e.size) for e in h.edges) == 8


def test_generation_is_seeded():
    assert random_tight(4, 4, seed=3) == random_tight(4, 4, seed=3)


def test_screened_generation_passes_screen():
    for seed in range(10):
        assert overpinned_screen(random_tight(3, 4, seed, screened=True)) == []


def test_bad_parameters():
    with pytest.raises(GenerationError):
        random_tight(1, 3)
    with pytest.raises(GenerationError):
        random_tight(3, 0)


def test_rigid_instances():
    h = random_rigid(3, 4, seed=2)
    assert find_certificate(h).rigid
    suite = rigid_suite(6, seed=1)
    assert [g.d for g in suite] == [3, 4, 3, 4, 3, 4]


def test_edge_types_and_random_hypergraph():
    types = edge_types(3, 3)
    assert len(types) == 3 + 3 * 2  # singletons with m = 1, pairs with m = 1 or 2
    assert all(rows == m * (3 - len(s)) for s, m, rows in types)
    h = random_hypergraph(random.Random(0), 4, 5, 6, max_pin=1)
    assert validate(h).ok and len(h.edges) == 6 and all(e.pin_dim == 1 for e in h.edges)
