"""Compare the screened combinatorial verdict with the generic-rank verdict."""

from __future__ import annotations

import json
import random
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import permutations
from pathlib import Path

from .certificate import find_certificate
from .generate import edge_types, random_hypergraph, vertex_names
from .hypergraph import HyperEdge, WeightedHypergraph
from .instances import Instance, instance_to_dict
from .rigidmatrix import generic_rank


def _multisets(types, target, start=0):
    if target == 0:
        yield []
        return
    for i in range(start, len(types)):
        w = types[i][2]
        if w <= target:
            for rest in _multisets(types, target - w, i):
                yield [types[i]] + rest


def canonical_key(n: int, edges) -> tuple:
    """Lexicographically least sorted edge list over all vertex relabelings."""
    best = None
    for perm in permutations(range(n)):
        key = tuple(sorted((tuple(sorted(perm[v] for v in subset)), m) for subset, m in edges))
        if best is None or key < best:
            best = key
    return best


def hypergraph_from_key(d: int, n: int, key) -> WeightedHypergraph:
    names = vertex_names(n)
    return WeightedHypergraph(d, names, [HyperEdge([names[v] for v in s], m) for s, m in key])


def tight_count_classes(d: int, n: int, max_pin: int | None = None) -> list[WeightedHypergraph]:
    """Isomorphism classes with sum m_k (d - s_k) == (d-1) n."""
    seen = set()
    out = []
    for ms in _multisets(edge_types(d, n, max_pin), (d - 1) * n):
        key = canonical_key(n, [(s, m) for s, m, _ in ms])
        if key not in seen:
            seen.add(key)
            out.append(hypergraph_from_key(d, n, key))
    return out


def classify(h: WeightedHypergraph, seed: int = 0, trials: int = 3) -> dict:
    verdict = find_certificate(h)
    rank = generic_rank(h, trials=trials, field="prime", seed=seed)
    return {
        "status": verdict.status.value,
        "combinatorial": verdict.rigid,
        "certificate_found": verdict.diagnostics.get("certificate_found", False),
        "exhaustive": verdict.diagnostics.get("exhaustive", True),
        "rank": rank.rank,
        "rows": rank.rows,
        "cols": rank.cols,
        "numeric": rank.rigid,
    }


def _classify_job(args):
    h, seed = args
    return classify(h, seed)


@dataclass
class CrossValidation:
    checked: int = 0
    table: Counter = field(default_factory=Counter)
    disagreements: list = field(default_factory=list)
    exhaustive_classes: int = 0
    sampled: int = 0

    @property
    def agreement(self) -> float:
        return 1.0 if not self.checked else 1 - len(self.disagreements) / self.checked

    def to_dict(self) -> dict:
        return {
            "checked": self.checked,
            "exhaustive_classes": self.exhaustive_classes,
            "sampled": self.sampled,
            "agreement": self.agreement,
            "table": [{"status": s, "numeric_rigid": r, "count": c}
                      for (s, r), c in sorted(self.table.items())],
            "disagreements": self.disagreements,
        }


def instances_in_bounds(max_v: int = 4, d_max: int = 4, max_rows: int = 10,
                        max_pin: int | None = None, samples: int = 1000, seed: int = 0):
    """Exhaustive tight-count classes plus a seeded sample of arbitrary valid instances.

    Instances whose row count differs from (d-1)|V| are negative on both
    sides by construction, so exhaustive coverage targets the square case.
    """
    exhaustive = []
    for d in range(2, d_max + 1):
        for n in range(1, max_v + 1):
            if (d - 1) * n <= max_rows:
                exhaustive.extend(tight_count_classes(d, n, max_pin))
    rng = random.Random(seed)
    sampled = []
    while len(sampled) < samples:
        d = rng.randint(2, d_max)
        n = rng.randint(1, max_v)
        h = random_hypergraph(rng, d, n, rng.randint(1, 2 * n + 2), max_pin)
        if h.total_rows() <= max_rows:
            sampled.append(h)
    return exhaustive, sampled


def cross_validate(max_v: int = 4, d_max: int = 4, max_rows: int = 10, max_pin: int | None = None,
                   samples: int = 1000, seed: int = 0, workers: int = 1) -> CrossValidation:
    exhaustive, sampled = instances_in_bounds(max_v, d_max, max_rows, max_pin, samples, seed)
    jobs = [(h, seed) for h in exhaustive + sampled]
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            results = list(pool.map(_classify_job, jobs, chunksize=16))
    else:
        results = [_classify_job(j) for j in jobs]
    out = CrossValidation(exhaustive_classes=len(exhaustive), sampled=len(sampled))
    for (h, _), res in zip(jobs, results):
        out.checked += 1
        out.table[(res["status"], res["numeric"])] += 1
        if res["combinatorial"] != res["numeric"]:
            out.disagreements.append({"instance": instance_to_dict(Instance(h)), "result": res})
    return out


def dump_disagreements(cv: CrossValidation, path: str | Path) -> None:
    Path(path).write_text(json.dumps(cv.disagreements, indent=2) + "\n", encoding="utf-8")


def format_table(cv: CrossValidation) -> str:
    statuses = sorted({s for s, _ in cv.table})
    lines = [f"{'combinatorial':<16}{'numeric rigid':>15}{'numeric flexible':>18}"]
    for s in statuses:
        lines.append(f"{s:<16}{cv.table.get((s, True), 0):>15}{cv.table.get((s, False), 0):>18}")
    lines.append(f"checked {cv.checked} ({cv.exhaustive_classes} exhaustive classes, "
                 f"{cv.sampled} sampled); agreement {100 * cv.agreement:.2f}%; "
                 f"disagreements {len(cv.disagreements)}")
    return "\n".join(lines)
