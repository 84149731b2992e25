"""Run the combinatorial-vs-numeric comparison and write a JSON summary plus disagreements."""

import argparse
import json
import time
from pathlib import Path

from rigidlab.crossval import cross_validate, dump_disagreements, format_table


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--maxV", type=int, default=4)
    ap.add_argument("--d", type=int, default=4)
    ap.add_argument("--maxM", type=int, default=None)
    ap.add_argument("--max-rows", type=int, default=10)
    ap.add_argument("--samples", type=int, default=1000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--out", default="results")
    args = ap.parse_args()

    start = time.perf_counter()
    cv = cross_validate(args.maxV, args.d, args.max_rows, args.maxM, args.samples, args.seed,
                        args.workers)
    elapsed = time.perf_counter() - start
    out = Path(args.out)
    out.mkdir(exist_ok=True)
    summary = cv.to_dict()
    summary.pop("disagreements")
    summary.update(vars(args), seconds=elapsed)
    (out / "crossval_summary.json").write_text(json.dumps(summary, indent=2) + "\n")
    dump_disagreements(cv, out / "crossval_disagreements.json")
    print(format_table(cv))
    by_shape: dict = {}
    for item in cv.disagreements:
        inst = item["instance"]
        key = (inst["d"], len(inst["vertices"]))
        by_shape[key] = by_shape.get(key, 0) + 1
    for (d, n), count in sorted(by_shape.items()):
        print(f"  disagreements at d={d}, |V|={n}: {count}")
    print(f"{elapsed:.1f}s; results in {out}/")


if __name__ == "__main__":
    main()
