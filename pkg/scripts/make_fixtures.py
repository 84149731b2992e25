"""Regenerate the pinned fig2 fixture: small exact coordinates and pins plus the realization."""

import argparse

from rigidlab.fields import RationalField
from rigidlab.framework import sample_generic
from rigidlab.instances import Instance, fixture, fixture_path, save_instance
from rigidlab.rigidmatrix import assemble


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=3)
    ap.add_argument("--bound", type=int, default=9)
    ap.add_argument("--out", default=str(fixture_path("fig2_pins")))
    args = ap.parse_args()
    h = fixture("fig2").h
    fw = sample_generic(h, args.seed, RationalField(args.bound))
    assert assemble(fw).rank() == h.capacity(), "sample is not generic enough; try another seed"
    inst = Instance(h, [list(map(list, per)) for per in fw.pins],
                    dict(zip(h.vertices, map(list, fw.coords))),
                    "fig2 with exact pins; the realization satisfies every incidence constraint")
    save_instance(inst, args.out)
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
