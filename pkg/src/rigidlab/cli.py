"""Command line: ``rigidlab {analyze|rank|decompose|cross-validate|pure-condition|realize|gen}``.

Exit codes: 0 success or rigid, 1 usage or input error, 2 analytic negative.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from fractions import Fraction

import numpy as np

from .certificate import Status, check_certificate, find_certificate, slot_table
from .crossval import cross_validate, dump_disagreements, format_table
from .fields import RationalField, get_field
from .framework import import_pins, sample_generic
from .generate import GenerationError, random_tight
from .hypergraph import InvalidHypergraph, expand, validate
from .instances import (
    Instance,
    InstanceError,
    certificate_from_dict,
    certificate_to_dict,
    instance_to_dict,
    load_instance,
)
from .mapdecomp import pebble_game, split_into_maps
from .purecond import RowLimitExceeded, laplace_verify, vanishing_probe
from .realize import SolveConfig, SolveStatus, perturbed_start, solve
from .rigidmatrix import assemble, generic_rank, trial_seed

EXIT_OK, EXIT_INPUT, EXIT_NEGATIVE = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def resolve_seed(seed: int | None) -> int:
    if seed is not None:
        return seed
    env = os.environ.get("RIGIDLAB_SEED")
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError as exc:
        raise UsageError(f"RIGIDLAB_SEED must be an integer, got {env!r}") from exc


def _braces(vs) -> str:
    return "{" + ",".join(vs) + "}"


# -- commands: each returns (exit code, report dict, text lines) -----------------


def cmd_analyze(args) -> tuple[int, dict, list[str]]:
    inst = load_instance(args.file)
    h = inst.h
    report_v = validate(h)
    if not report_v.ok:
        raise InvalidHypergraph("; ".join(v.message for v in report_v.violations))
    verdict = find_certificate(h, args.budget)
    diag = verdict.diagnostics
    if verdict.status is Status.NOT_TIGHT:
        headline = f"NotTight {diag['total']}/{diag['capacity']}"
    elif verdict.status is Status.SCREEN_FAILED:
        headline = "ScreenFailed " + " ".join(_braces(v) for v in diag["overpinned"])
    else:
        headline = verdict.status.value
    report = {
        "command": "analyze",
        "verdict": verdict.status.value,
        "headline": headline,
        "counts": {"total": diag["total"], "capacity": diag["capacity"], "sparse": diag["sparse"],
                   "violating_subgraphs": diag["violating_subgraphs"]},
        "overpinned": diag.get("overpinned", []),
        "search": {"nodes": diag.get("nodes"), "exhaustive": diag.get("exhaustive"),
                   "certificate_found": diag.get("certificate_found", False)},
        "certificate": None if verdict.certificate is None
        else certificate_to_dict(h, verdict.certificate),
    }
    lines = [f"verdict      {headline}",
             f"count        {diag['total']}/{diag['capacity']}  sparse={diag['sparse']}"]
    for vs in diag["violating_subgraphs"][:5]:
        lines.append(f"overloaded   {_braces(vs)}")
    if verdict.certificate is not None:
        lines.append("certificate  (column group x vertex; entries e<k>_<t>,<l>)")
        grid = slot_table(h, verdict.certificate)
        width = max(len(x) for row in grid for x in row) + 2
        lines.append("    " + "".join(v.ljust(width) for v in h.vertices))
        for j, row in enumerate(grid, start=1):
            lines.append(f"  {j} " + "".join(x.ljust(width) for x in row))
    return (EXIT_OK if verdict.rigid else EXIT_NEGATIVE), report, lines


def _matrix_dump(h, seed: int, field) -> dict:
    fw = sample_generic(h, trial_seed(seed, 0), field)
    m = assemble(fw)
    return {"field": field.name, "shape": list(m.shape),
            "rows": [[field.format(x) for x in row] for row in m.rows]}


def cmd_rank(args) -> tuple[int, dict, list[str]]:
    inst = load_instance(args.file)
    seed = resolve_seed(args.seed)
    f = get_field(args.field)
    rep = generic_rank(inst.h, args.trials, f, seed)
    report = {"command": "rank", "rank": rep.rank, "rows": rep.rows, "cols": rep.cols,
              "full_rank": rep.full_rank, "square": rep.square, "flex_dim": rep.flex_dim,
              "trials": rep.trials, "field": rep.field, "seed": seed,
              "failure_bound": rep.failure_bound}
    lines = [f"rank         {rep.rank}/{rep.cols}  ({rep.rows} rows, field {rep.field}, "
             f"{rep.trials} trials, seed {seed})",
             f"flexDim      {rep.flex_dim}",
             f"fullRank     {rep.full_rank}",
             f"failure      <= {rep.failure_bound:.3g} per trial"]
    if args.dump_matrix:
        with open(args.dump_matrix, "w", encoding="utf-8") as fh:
            json.dump(_matrix_dump(inst.h, seed, f), fh)
            fh.write("\n")
        lines.append(f"matrix       written to {args.dump_matrix}")
    return (EXIT_OK if rep.rigid else EXIT_NEGATIVE), report, lines


def cmd_decompose(args) -> tuple[int, dict, list[str]]:
    inst = load_instance(args.file)
    h = inst.h
    mh = expand(h)
    k = h.d - 1
    res = pebble_game(mh, k)
    report: dict = {"command": "decompose", "accepted": res.accepted, "tight": res.tight,
                    "copies": len(mh), "maps": None}
    lines = [f"pebble game  accepted={res.accepted} tight={res.tight} copies={len(mh)}"]
    if not res.accepted:
        blocked = mh.copies[res.blocked]
        report["blocked"] = {"edge": blocked.edge + 1, "t": blocked.t, "l": blocked.l}
        report["overloaded"] = [h.vertices[i] for i in sorted(res.reach)]
        lines.append(f"blocked      e{blocked.edge + 1}_{blocked.t},{blocked.l} "
                     f"on {_braces(report['overloaded'])}")
        return EXIT_NEGATIVE, report, lines
    if not res.tight:
        return EXIT_NEGATIVE, report, lines
    dec = split_into_maps(mh, res.orientation, k)
    maps = []
    for j, copies in enumerate(dec.maps(k), start=1):
        entries = [{"edge": mh.copies[c].edge + 1, "t": mh.copies[c].t, "l": mh.copies[c].l,
                    "tail": h.vertices[dec.tail[c]]} for c in copies]
        maps.append({"map": j, "copies": entries})
        lines.append(f"map {j}        " + "  ".join(
            f"e{e['edge']}_{e['t']},{e['l']}->{e['tail']}" for e in entries))
    report["maps"] = maps
    return EXIT_OK, report, lines


def cmd_cross_validate(args) -> tuple[int, dict, list[str]]:
    seed = resolve_seed(args.seed)
    cv = cross_validate(args.maxV, args.d, args.max_rows, args.maxM, args.samples, seed, args.workers)
    report = {"command": "cross-validate", "seed": seed, **cv.to_dict()}
    lines = format_table(cv).splitlines()
    if cv.disagreements:
        dump_disagreements(cv, args.dump)
        lines.append(f"disagreements written to {args.dump}")
    return (EXIT_OK if not cv.disagreements else EXIT_NEGATIVE), report, lines


def cmd_pure_condition(args) -> tuple[int, dict, list[str]]:
    inst = load_instance(args.file)
    h = inst.h
    seed = resolve_seed(args.seed)
    if h.total_rows() != h.capacity():
        raise UsageError(f"pure-condition needs a square instance ({h.total_rows()} rows, "
                         f"{h.capacity()} columns)")
    probe = vanishing_probe(h, args.samples, seed, args.field)
    report = {"command": "pure-condition", "always_zero": probe.always_zero,
              "values": list(probe.values), "witnesses": list(probe.witnesses),
              "samples": probe.samples, "failure_bound": probe.failure_bound, "seed": seed,
              "laplace": None}
    lines = [f"alwaysZero   {probe.always_zero}  ({probe.samples} samples, "
             f"{len(probe.witnesses)} non-zero)"]
    if h.total_rows() <= args.row_limit:
        fw = sample_generic(h, trial_seed(seed, 0), RationalField())
        lap = laplace_verify(assemble(fw), args.row_limit)
        report["laplace"] = {"det": str(lap.lhs), "partition_sum": str(lap.rhs),
                             "map_sum": str(lap.map_rhs), "equal": lap.equal,
                             "partitions": lap.partitions, "map_partitions": lap.map_partitions,
                             "nonmap_terms_zero": lap.nonmap_terms_zero}
        lines.append(f"laplace      det == partition sum: {lap.equal}; "
                     f"{lap.map_partitions}/{lap.partitions} map partitions; "
                     f"non-map terms zero: {lap.nonmap_terms_zero}")
    else:
        lines.append(f"laplace      skipped ({h.total_rows()} rows exceed {args.row_limit})")
    return (EXIT_NEGATIVE if probe.always_zero else EXIT_OK), report, lines


def cmd_realize(args) -> tuple[int, dict, list[str]]:
    inst = load_instance(args.file)
    h = inst.h
    if inst.pins is None:
        raise UsageError("realize needs an instance with pins")
    seed = resolve_seed(args.seed)
    system = import_pins(h, inst.pins, "float")
    truth = None if inst.realization is None else np.array(inst.coords(), dtype=float)
    initial = None
    if truth is not None and args.perturb is not None:
        initial = perturbed_start(truth, args.perturb, np.random.default_rng(seed))
    cfg = SolveConfig(max_iters=args.max_iters, tol=args.tol, restarts=args.restarts)
    res = solve(system, cfg, seed, initial)
    report = {"command": "realize", "status": res.status.value,
              "residual_norm": res.residual_norm, "jacobian_rank": res.jacobian_rank,
              "locally_unique": res.locally_unique, "iterations": res.iterations,
              "restart": res.restart, "seed": seed, "warnings": list(system.warnings),
              "realization": {v: [float(x) for x in row] for v, row in zip(h.vertices, res.p)}}
    lines = [f"status       {res.status.value}  residual {res.residual_norm:.3e} "
             f"after {res.iterations} iterations (restart {res.restart})",
             f"jacobian     rank {res.jacobian_rank}/{h.capacity()}  "
             f"locallyUnique={res.locally_unique}"]
    if truth is not None:
        err = float(np.linalg.norm(res.p - truth))
        report["error"] = err
        lines.append(f"error        {err:.3e} from the stored realization")
    for w in system.warnings:
        lines.append(f"warning      {w}")
    for v, row in report["realization"].items():
        lines.append(f"  {v:<6} " + " ".join(f"{x: .12g}" for x in row))
    ok = res.status is SolveStatus.CONVERGED and res.locally_unique
    return (EXIT_OK if ok else EXIT_NEGATIVE), report, lines


def cmd_gen(args) -> tuple[int, dict, list[str]]:
    seed = resolve_seed(args.seed)
    h = random_tight(args.d, args.nv, seed)
    pins = real = None
    if args.pins:
        fw = sample_generic(h, seed, RationalField(args.coord_bound))
        pins = [[list(x) for x in per] for per in fw.pins]
        real = {v: list(p) for v, p in zip(h.vertices, fw.coords)}
    inst = Instance(h, pins, real)
    report = instance_to_dict(inst)
    text = json.dumps(report, indent=2)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
        lines = [f"wrote {args.out} (d={h.d}, {h.n} vertices, {len(h.edges)} edges, "
                 f"{h.total_rows()} rows)"]
    else:
        lines = [text]
    return EXIT_OK, report, lines


# -- parser ----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="rigidlab", description="Pinned subspace-incidence rigidity toolkit.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="print the report as JSON")
    common.add_argument("--seed", type=int, default=None, help="seed (default: $RIGIDLAB_SEED or 0)")
    common.add_argument("--timings", action="store_true", help="add wall-clock time to the report")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    a = sub.add_parser("analyze", parents=[common], help="combinatorial verdict and certificate")
    a.add_argument("file")
    a.add_argument("--budget", type=int, default=10**6, help="certificate search node budget")
    a.set_defaults(func=cmd_analyze)

    r = sub.add_parser("rank", parents=[common], help="generic rank of the rigidity matrix")
    r.add_argument("file")
    r.add_argument("--trials", type=int, default=3)
    r.add_argument("--field", choices=["prime", "rational"], default="prime")
    r.add_argument("--dump-matrix", metavar="PATH")
    r.set_defaults(func=cmd_rank)

    dcp = sub.add_parser("decompose", parents=[common], help="pebble game and map decomposition")
    dcp.add_argument("file")
    dcp.set_defaults(func=cmd_decompose)

    c = sub.add_parser("cross-validate", parents=[common],
                       help="combinatorial verdict against generic rank on small instances")
    c.add_argument("--maxV", type=int, default=4)
    c.add_argument("--d", type=int, default=4, help="largest ambient dimension")
    c.add_argument("--maxM", type=int, default=None, help="largest pin dimension")
    c.add_argument("--max-rows", type=int, default=10)
    c.add_argument("--samples", type=int, default=1000)
    c.add_argument("--workers", type=int, default=1)
    c.add_argument("--dump", default="disagreements.json")
    c.set_defaults(func=cmd_cross_validate)

    pc = sub.add_parser("pure-condition", parents=[common], help="vanishing probe and Laplace check")
    pc.add_argument("file")
    pc.add_argument("--samples", type=int, default=5)
    pc.add_argument("--field", choices=["prime", "rational"], default="prime")
    pc.add_argument("--row-limit", type=int, default=10)
    pc.set_defaults(func=cmd_pure_condition)

    rz = sub.add_parser("realize", parents=[common], help="solve for a realization from pins")
    rz.add_argument("file")
    rz.add_argument("--perturb", type=float, default=1e-2,
                    help="start this far from the stored realization, if any")
    rz.add_argument("--restarts", type=int, default=20)
    rz.add_argument("--max-iters", type=int, default=200)
    rz.add_argument("--tol", type=float, default=1e-10)
    rz.set_defaults(func=cmd_realize)

    g = sub.add_parser("gen", parents=[common], help="random tight instance")
    g.add_argument("--d", type=int, required=True)
    g.add_argument("--nv", type=int, required=True)
    g.add_argument("--pins", action="store_true", help="also sample exact pins and a realization")
    g.add_argument("--coord-bound", type=int, default=50)
    g.add_argument("--out")
    g.set_defaults(func=cmd_gen)
    return p


def _jsonable(x):
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, np.generic):
        return x.item()
    raise TypeError(f"not JSON serializable: {type(x).__name__}")


def render(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True, default=_jsonable)


def parse_report_certificate(h, report: dict):
    """Rebuild and re-check the certificate carried by an analyze report."""
    if report.get("certificate") is None:
        return None
    cert = certificate_from_dict(h, report["certificate"])
    if not check_certificate(h, cert):
        raise InstanceError("report certificate does not validate")
    return cert


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    start = time.perf_counter()
    try:
        code, report, lines = args.func(args)
    except (InstanceError, InvalidHypergraph, UsageError, RowLimitExceeded, GenerationError,
            FileNotFoundError, IsADirectoryError, ValueError) as exc:
        print(f"rigidlab {args.command}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if args.timings:
        report["timings"] = {"seconds": time.perf_counter() - start}
        lines.append(f"time         {report['timings']['seconds']:.3f}s")
    if args.json:
        print(render(report))
    else:
        print("\n".join(lines))
    return code


if __name__ == "__main__":
    sys.exit(main())
