"""Print the analyses of the three shipped fixtures: verdicts, certificates, ranks, probes."""

from rigidlab.certificate import find_certificate, slot_table
from rigidlab.hypergraph import count_check, overpinned_screen
from rigidlab.instances import fixture
from rigidlab.purecond import vanishing_probe
from rigidlab.realize import round_trip
from rigidlab.rigidmatrix import generic_rank


def show(name: str) -> None:
    inst = fixture(name)
    h = inst.h
    print(f"== {name}: d={h.d}, {h.n} vertices, {len(h.edges)} edges")
    if inst.note:
        print(f"   note: {inst.note}")
    for k, e in enumerate(h.edges, start=1):
        print(f"   e{k} = {{{','.join(e.vertices)}}}  s={e.size} m={e.pin_dim} "
              f"rows={h.edge_rows(k - 1)}")
    counts = count_check(h)
    verdict = find_certificate(h)
    rank = generic_rank(h, trials=3)
    print(f"   count {counts.total}/{counts.capacity}  tight={counts.tight}")
    print(f"   overpinned sets: {overpinned_screen(h) or 'none'}")
    print(f"   verdict {verdict.status.value}")
    if verdict.certificate is not None:
        for j, row in enumerate(slot_table(h, verdict.certificate), start=1):
            print(f"     group {j}: " + "  ".join(f"{v}:{x}" for v, x in zip(h.vertices, row)))
    print(f"   generic rank {rank.rank} ({rank.rows}x{rank.cols}), flexDim {rank.flex_dim}")
    if counts.total == counts.capacity:
        probe = vanishing_probe(h, samples=5)
        print(f"   det(M) vanishes on all 5 samples: {probe.always_zero}")
        if verdict.rigid:
            rt = round_trip(h, seed=0)
            print(f"   realizer round trip: {rt.result.status.value}, error {rt.error:.2e}")
    print()


if __name__ == "__main__":
    for name in ("fig1", "fig2", "example2"):
        show(name)
