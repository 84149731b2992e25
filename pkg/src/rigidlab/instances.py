"""JSON instance files, certificate serialization and the shipped fixtures.

Instance schema (UTF-8 JSON)::

    {
      "d": 3,
      "vertices": ["v1", "v2", ...],
      "edges": [{"vertices": ["v1"], "pin_dim": 1}, ...],
      "pins": [[[x, y], ...], ...],        # optional, m_k points per edge
      "realization": {"v1": [x, y], ...}   # optional
    }

Coordinates are JSON numbers or exact rational strings "a/b".
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Any

from .certificate import Certificate
from .hypergraph import HyperEdge, WeightedHypergraph, expand
from .mapdecomp import MapDecomposition

FIXTURES = ("fig1", "fig2", "example2", "fig2_pins")


class InstanceError(ValueError):
    pass


@dataclass(frozen=True)
class Instance:
    h: WeightedHypergraph
    pins: list | None = None  # raw JSON values
    realization: dict | None = None
    note: str | None = None

    def coords(self) -> list | None:
        if self.realization is None:
            return None
        return [self.realization[v] for v in self.h.vertices]


def parse_scalar(x) -> Fraction | float:
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise InstanceError(f"bad coordinate {x!r}")
    return x


def format_scalar(x) -> Any:
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    if isinstance(x, int):
        return x
    return float(x)


def instance_from_dict(obj: dict) -> Instance:
    try:
        d = int(obj["d"])
        edges = [HyperEdge(e["vertices"], int(e.get("pin_dim", 1))) for e in obj["edges"]]
        vertices = obj.get("vertices")
    except (KeyError, TypeError, ValueError) as exc:
        raise InstanceError(f"malformed instance: {exc}") from exc
    if vertices is None:
        h = WeightedHypergraph.build(d, [(e.vertices, e.pin_dim) for e in edges])
    else:
        h = WeightedHypergraph(d, vertices, edges)
    pins = obj.get("pins")
    if pins is not None:
        if len(pins) != len(edges):
            raise InstanceError(f"pins given for {len(pins)} edges, instance has {len(edges)}")
        for k, (e, pts) in enumerate(zip(edges, pins)):
            if len(pts) != e.pin_dim:
                raise InstanceError(f"edge {k}: {len(pts)} pin points for pin_dim {e.pin_dim}")
        pins = [[[parse_scalar(c) for c in x] for x in pts] for pts in pins]
    real = obj.get("realization")
    if real is not None:
        missing = [v for v in h.vertices if v not in real]
        if missing:
            raise InstanceError(f"realization misses vertices {missing}")
        real = {v: [parse_scalar(c) for c in real[v]] for v in h.vertices}
    return Instance(h, pins, real, obj.get("note"))


def instance_to_dict(inst: Instance) -> dict:
    h = inst.h
    out: dict = {
        "d": h.d,
        "vertices": list(h.vertices),
        "edges": [{"vertices": list(e.vertices), "pin_dim": e.pin_dim} for e in h.edges],
    }
    if inst.note:
        out["note"] = inst.note
    if inst.pins is not None:
        out["pins"] = [[[format_scalar(c) for c in x] for x in pts] for pts in inst.pins]
    if inst.realization is not None:
        out["realization"] = {v: [format_scalar(c) for c in inst.realization[v]] for v in h.vertices}
    return out


def load_instance(path: str | Path) -> Instance:
    p = Path(path)
    if not p.exists() and str(path) in FIXTURES:
        return fixture(str(path))
    try:
        obj = json.loads(p.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise InstanceError(f"{path}: invalid JSON ({exc})") from exc
    return instance_from_dict(obj)


def save_instance(inst: Instance, path: str | Path) -> None:
    Path(path).write_text(json.dumps(instance_to_dict(inst), indent=2) + "\n", encoding="utf-8")


def fixture(name: str) -> Instance:
    text = resources.files("rigidlab.fixtures").joinpath(f"{name}.json").read_text(encoding="utf-8")
    return instance_from_dict(json.loads(text))


def fixture_path(name: str) -> Path:
    return Path(str(resources.files("rigidlab.fixtures").joinpath(f"{name}.json")))


# -- certificates ---------------------------------------------------------------
#
# {"maps": [{"map": 1, "group": 2,
#            "copies": [{"edge": 1, "t": 1, "l": 1, "tail": "v1"}, ...]}, ...]}
# Edges are numbered from 1 in file order; t and l are 1-based labels.


def certificate_to_dict(h: WeightedHypergraph, cert: Certificate) -> dict:
    mh = expand(h)
    k = h.d - 1
    maps = []
    for j in range(1, k + 1):
        copies = []
        for c, copy in enumerate(mh.copies):
            if cert.decomposition.map_of[c] != j:
                continue
            t, l = cert.labels[c]
            copies.append({"edge": copy.edge + 1, "t": t, "l": l,
                           "tail": h.vertices[cert.decomposition.tail[c]]})
        maps.append({"map": j, "group": cert.map_group[j - 1], "copies": copies})
    return {"maps": maps}


def certificate_from_dict(h: WeightedHypergraph, obj: dict) -> Certificate:
    """Copies of one edge are matched to expansion slots by their (t, l) label."""
    mh = expand(h)
    slots: dict[int, list[int]] = {}
    for c, copy in enumerate(mh.copies):
        slots.setdefault(copy.edge, []).append(c)
    map_of = [0] * len(mh)
    tail = [0] * len(mh)
    labels: list = [None] * len(mh)
    groups = [0] * (h.d - 1)
    try:
        for entry in obj["maps"]:
            j = int(entry["map"])
            groups[j - 1] = int(entry["group"])
            for cp in entry["copies"]:
                e = int(cp["edge"]) - 1
                if not slots.get(e):
                    raise InstanceError(f"too many copies of edge {e + 1}")
                c = slots[e].pop(0)
                map_of[c] = j
                tail[c] = h.index(cp["tail"])
                labels[c] = (int(cp["t"]), int(cp["l"]))
    except (KeyError, IndexError, TypeError) as exc:
        raise InstanceError(f"malformed certificate: {exc}") from exc
    if any(lab is None for lab in labels):
        raise InstanceError("certificate does not cover every copy")
    return Certificate(MapDecomposition(tuple(map_of), tuple(tail)), tuple(labels), tuple(groups))
