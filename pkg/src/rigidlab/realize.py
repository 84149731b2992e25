"""Recover a realization from concrete pins by damped Newton iteration."""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .fields import numeric_rank
from .framework import PinnedSystem, evaluate
from .rigidmatrix import direct_jacobian


@dataclass(frozen=True)
class SolveConfig:
    max_iters: int = 200
    tol: float = 1e-10
    damping: float = 0.5
    restarts: int = 20
    step_bound: float = 10.0
    init_scale: float = 1.0
    rank_threshold: float = 1e-8
    armijo: float = 1e-4

    def __post_init__(self):
        if self.tol <= 0:
            raise ValueError("tol must be positive")
        if self.restarts < 1:
            raise ValueError("restarts must be >= 1")
        if not 0 < self.damping < 1:
            raise ValueError("damping must lie in (0, 1)")


class SolveStatus(str, enum.Enum):
    CONVERGED = "Converged"
    DIVERGED = "Diverged"
    SINGULAR = "SingularJacobian"


@dataclass(frozen=True)
class SolveResult:
    status: SolveStatus
    p: np.ndarray  # n x (d-1)
    residual_norm: float
    jacobian_rank: int
    locally_unique: bool
    iterations: int
    restart: int


def residuals(system: PinnedSystem, p: np.ndarray) -> np.ndarray:
    return np.array(evaluate(system.framework(p.tolist())), dtype=float)


def jacobian(system: PinnedSystem, p: np.ndarray) -> np.ndarray:
    return np.array(direct_jacobian(system.framework(p.tolist())).rows, dtype=float)


def _newton(system: PinnedSystem, p: np.ndarray, cfg: SolveConfig):
    r = residuals(system, p)
    norm = np.linalg.norm(r)
    singular = 0
    for it in range(cfg.max_iters):
        if norm < cfg.tol:
            return SolveStatus.CONVERGED, p, norm, it
        jac = jacobian(system, p)
        flat = p.reshape(-1)
        # jacobian columns are grouped by coordinate; p is vertex-major
        n, g = p.shape
        perm = np.array([j * n + v for v in range(n) for j in range(g)])
        try:
            step = np.linalg.lstsq(jac[:, perm], -r, rcond=None)[0]
        except np.linalg.LinAlgError:
            return SolveStatus.SINGULAR, p, norm, it
        if not np.all(np.isfinite(step)) or not np.any(step):
            singular += 1
            if singular > 2:
                return SolveStatus.SINGULAR, p, norm, it
            continue
        size = np.linalg.norm(step)
        if size > cfg.step_bound:
            step *= cfg.step_bound / size
        alpha = 1.0
        while alpha > 1e-10:
            cand = (flat + alpha * step).reshape(p.shape)
            r_new = residuals(system, cand)
            n_new = np.linalg.norm(r_new)
            if n_new <= (1 - cfg.armijo * alpha) * norm:
                break
            alpha *= cfg.damping
        else:
            return SolveStatus.DIVERGED, p, norm, it
        p, r, norm = cand, r_new, n_new
    status = SolveStatus.CONVERGED if norm < cfg.tol else SolveStatus.DIVERGED
    return status, p, norm, cfg.max_iters


def solve(system: PinnedSystem, cfg: SolveConfig | None = None, seed: int = 0,
          initial=None) -> SolveResult:
    """Multi-start damped Newton with least-squares steps.

    Restart 0 starts from ``initial`` when given; later restarts draw from a
    seeded Gaussian around it (or around the origin).  The first restart that
    converges wins.
    """
    cfg = cfg or SolveConfig()
    h = system.h
    shape = (h.n, h.d - 1)
    rng = np.random.default_rng(seed)
    centre = np.zeros(shape) if initial is None else np.array(initial, dtype=float).reshape(shape)
    best = None
    for restart in range(cfg.restarts):
        if restart == 0 and initial is not None:
            start = centre.copy()
        else:
            start = centre + cfg.init_scale * rng.standard_normal(shape)
        status, p, norm, iters = _newton(system, start, cfg)
        if best is None or norm < best[2]:
            best = (status, p, norm, iters, restart)
        if status is SolveStatus.CONVERGED:
            break
    status, p, norm, iters, restart = best
    rank = numeric_rank(jacobian(system, p), cfg.rank_threshold)
    unique = status is SolveStatus.CONVERGED and rank == h.capacity()
    return SolveResult(status, p, float(norm), rank, unique, iters, restart)


def local_uniqueness(result: SolveResult, system: PinnedSystem, threshold: float = 1e-8) -> bool:
    """Full column rank of the Jacobian at a converged solution."""
    if result.status is not SolveStatus.CONVERGED:
        raise ValueError("local uniqueness is only defined at a converged solution")
    return numeric_rank(jacobian(system, result.p), threshold) == system.h.capacity()


def perturbed_start(p: np.ndarray, norm: float, rng: np.random.Generator) -> np.ndarray:
    """``p`` plus a random displacement of Frobenius norm ``norm``."""
    noise = rng.standard_normal(p.shape)
    return p + norm * noise / np.linalg.norm(noise)


@dataclass(frozen=True)
class RoundTrip:
    result: SolveResult
    error: float  # Frobenius distance to the realization the pins came from
    truth: np.ndarray


def round_trip(h, seed: int = 0, perturb: float = 1e-2, cfg: SolveConfig | None = None) -> RoundTrip:
    """Sample a float framework, keep only its pins, and re-solve from a perturbed start."""
    from .framework import export_pins, import_pins, sample_generic

    fw = sample_generic(h, seed, "float")
    truth = np.array(fw.coords, dtype=float)
    system = import_pins(h, export_pins(fw), "float")
    start = perturbed_start(truth, perturb, np.random.default_rng(seed))
    res = solve(system, cfg, seed=seed, initial=start)
    return RoundTrip(res, float(np.linalg.norm(res.p - truth)), truth)
