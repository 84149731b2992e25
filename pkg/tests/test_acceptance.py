"""Acceptance criteria, one test each.

Every criterion prints a single ``[PASS]`` or ``[FAIL]`` line; the lines are
also collected and repeated in the pytest terminal summary.  Run directly with
``python3 tests/test_acceptance.py`` for just the summary lines.
"""

from __future__ import annotations

import json
import random
import sys
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).parent))

from oracles import brute_sparse  # noqa: E402
from rigidlab.certificate import Status, check_certificate, find_certificate  # noqa: E402
from rigidlab.cli import main as cli_main  # noqa: E402
from rigidlab.crossval import cross_validate, dump_disagreements  # noqa: E402
from rigidlab.framework import sample_generic  # noqa: E402
from rigidlab.generate import random_hypergraph, rigid_suite  # noqa: E402
from rigidlab.hypergraph import count_check, expand  # noqa: E402
from rigidlab.instances import fixture, fixture_path  # noqa: E402
from rigidlab.mapdecomp import enumerate_decompositions, pebble_game  # noqa: E402
from rigidlab.purecond import laplace_verify, map_partition_sum, vanishing_probe  # noqa: E402
from rigidlab.realize import SolveStatus, round_trip  # noqa: E402
from rigidlab.rigidmatrix import (  # noqa: E402
    assemble,
    d_equality,
    direct_jacobian,
    fd_jacobian,
    generic_rank,
    row_multipliers,
)

RESULTS: list[str] = []
ARTIFACTS = Path(__file__).resolve().parent.parent / "results"


def record(number: int, ok: bool, detail: str) -> None:
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {detail}"
    RESULTS.append(line)
    print(line)


def _cli(*argv) -> int:
    import contextlib
    import io

    with contextlib.redirect_stdout(io.StringIO()):
        return cli_main(list(argv))


def _seeded_frameworks(count: int = 50, seed: int = 0):
    """(hypergraph, seed) pairs with d alternating over 3 and 4."""
    rng = random.Random(seed)
    out = []
    for i in range(count):
        d = 3 + i % 2
        n = rng.randint(2, 5)
        out.append((random_hypergraph(rng, d, n, rng.randint(1, 6)), rng.getrandbits(32)))
    return out


def test_criterion_1_fig2_minimally_rigid():
    h = fixture("fig2").h
    v = find_certificate(h)
    rank = generic_rank(h, trials=3, field="prime")
    code = _cli("analyze", str(fixture_path("fig2")))
    ok = (v.status is Status.MINIMALLY_RIGID and check_certificate(h, v.certificate)
          and code == 0 and rank.rank == 8 == h.capacity() and rank.flex_dim == 0)
    record(1, ok, f"fig2 {v.status.value}, certificate valid, rank {rank.rank}/8, "
                  f"flexDim {rank.flex_dim} over Z_p ({rank.trials} trials)")
    assert ok


def test_criterion_2_fig1_not_tight():
    h = fixture("fig1").h
    counts = count_check(h)
    v = find_certificate(h)
    code = _cli("analyze", str(fixture_path("fig1")))
    rank = generic_rank(h, trials=3, field="prime")
    ok = (counts.total == 14 and counts.capacity == 18 and v.status is Status.NOT_TIGHT
          and code == 2 and rank.rank <= 14 and rank.flex_dim >= 4)
    record(2, ok, f"fig1 count {counts.total}/{counts.capacity}, {v.status.value}, "
                  f"rank {rank.rank}, flexDim {rank.flex_dim}")
    assert ok


def test_criterion_3_example2_screen():
    h = fixture("example2").h
    v = find_certificate(h)
    probe = vanishing_probe(h, samples=5, seed=0, field="prime")
    rank = generic_rank(h, trials=3, field="prime")
    ok = (v.status is Status.SCREEN_FAILED and v.certificate is not None
          and check_certificate(h, v.certificate) and probe.always_zero
          and rank.rank < h.total_rows())
    record(3, ok, f"example2 {v.status.value} with certificate, det(M) zero on "
                  f"{probe.samples}/{probe.samples} exact samples, rank {rank.rank} < {h.total_rows()}")
    assert ok


def test_criterion_4_row_forms():
    bad_rows = fd_fail = 0
    worst = 0.0
    items = _seeded_frameworks(50)
    for h, seed in items:
        fw = sample_generic(h, seed, "rational")
        lam = row_multipliers(assemble(fw), direct_jacobian(fw))
        bad_rows += sum(1 for x in lam if x is None or x == 0)
        ffw = sample_generic(h, seed, "float")
        fd = fd_jacobian(ffw, 1e-6)
        ex = np.array(direct_jacobian(ffw).rows, dtype=float)
        scale = max(np.abs(ex).max(), 1e-300)
        err = float(np.abs(fd - ex).max() / scale)
        worst = max(worst, err)
        fd_fail += err > 1e-6
    dims = sorted({h.d for h, _ in items})
    ok = bad_rows == 0 and fd_fail == 0
    record(4, ok, f"{len(items)} frameworks (d in {dims}): {bad_rows} non-proportional rows, "
                  f"worst FD relative error {worst:.2e}")
    assert ok


def _square_fixtures():
    out = [("fig2", fixture("fig2").h)]
    for i, h in enumerate(rigid_suite(20, seed=0)):
        if h.total_rows() <= 10:
            out.append((f"rigid-{i}", h))
    return out


def test_criterion_5_laplace_identity():
    failures = []
    checked = 0
    for name, h in _square_fixtures():
        fw = sample_generic(h, 1, "rational")
        res = laplace_verify(assemble(fw), limit_rows=10)
        value, _ = map_partition_sum(fw, enumerate_decompositions(expand(h), h.d - 1))
        checked += 1
        if not (res.equal and res.map_rhs == res.lhs and value == res.lhs and res.nonmap_terms_zero):
            failures.append(name)
    ok = not failures
    record(5, ok, f"{checked} square fixtures: det == full partition sum == map sum, "
                  f"non-map terms zero; failures {failures}")
    assert ok


def test_criterion_6_pebble_soundness():
    rng = random.Random(6)
    agree = total = 0
    for _ in range(600):
        d = rng.randint(2, 5)
        n = rng.randint(1, 6)
        h = random_hypergraph(rng, d, n, rng.randint(0, 10))
        edges = [(h.edge_indices(k), e.pin_dim) for k, e in enumerate(h.edges)]
        total += 1
        agree += pebble_game(expand(h), d - 1).accepted == brute_sparse(n, d, edges)
    ok = agree == total
    record(6, ok, f"pebble game vs brute-force sparsity on {total} seeded samples: "
                  f"{agree}/{total} agree")
    assert ok


def test_criterion_7_cross_validation():
    cv = cross_validate(max_v=4, d_max=4, max_rows=10, samples=1000, seed=0)
    dump = ARTIFACTS / "crossval_disagreements.json"
    if cv.disagreements:
        ARTIFACTS.mkdir(exist_ok=True)
        dump_disagreements(cv, dump)
    ok = not cv.disagreements
    detail = (f"{cv.checked} instances ({cv.exhaustive_classes} exhaustive square classes, "
              f"{cv.sampled} sampled): {len(cv.disagreements)} disagreements")
    if cv.disagreements:
        detail += f", dumped to {dump}"
    record(7, ok, detail)
    assert ok, json.dumps(cv.disagreements[0], indent=None)


def test_criterion_8_realizer_round_trip():
    suite = rigid_suite(20, seed=0)
    good = 0
    for i, h in enumerate(suite):
        rt = round_trip(h, seed=i, perturb=1e-2)
        good += (rt.result.status is SolveStatus.CONVERGED and rt.error < 1e-6
                 and rt.result.locally_unique)
    ok = good >= 0.95 * len(suite)
    record(8, ok, f"{good}/{len(suite)} rigid fixtures recovered (error < 1e-6, locally unique)")
    assert ok


def test_criterion_9_d_equality():
    checked = failures = 0
    for h, seed in _seeded_frameworks(50, seed=9):
        for field in ("rational", "prime"):
            checked += 1
            failures += not d_equality(sample_generic(h, seed, field))
    for h in rigid_suite(20, seed=0):
        checked += 1
        failures += not d_equality(sample_generic(h, 0, "rational"))
    ok = failures == 0
    record(9, ok, f"D^k_(t, s-1+t) equal across t on {checked} sampled frameworks, "
                  f"{failures} failures")
    assert ok


if __name__ == "__main__":
    tests = [v for k, v in sorted(globals().items()) if k.startswith("test_criterion_")]
    failed = 0
    for t in tests:
        try:
            t()
        except AssertionError:
            failed += 1
    sys.exit(1 if failed else 0)
