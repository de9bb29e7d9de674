"""Riemannian gradient descent on the product of unit spheres.

The matrix-space descent flow is the double-bracket system

    dB/dt = eps*delta [B, [B, K M K]],    dC/dt = eps*delta [C, [C, Sigma N Sigma]],

which lifts exactly to the unit-sphere pair through B = b b^T:

    db/dt = eps*delta (I - b b^T) S_b b,      S_b = K M K,

(and the same for c with S_c = Sigma N Sigma). The iteration is explicit
Euler with Armijo backtracking and renormalization, so the orbit constraint
holds exactly at every iterate. ``OrbitGradient.g_b`` stores the *gradient*
(ascent) direction -scale*(I - b b^T) S_b b, so a step moves along
``b - step * g_b``; the scale is eps*delta for the plain flow and 1 for the
rescaled field, which is also substituted automatically when eps*delta is
numerically zero (the plain field vanishes identically there and the descent
acts on the potential phi_bar instead of phi).
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .cost import CostReport, cost_report, drive_matrices
from .errors import AllStartsFailed, CodesignError, DegenerateStep
from .plant import Placement, Plant
from .riccati import pbh_check

#: Below this value of eps*delta the natural flow field is identically zero
#: and the rescaled field is used instead.
SCALE_TINY = 1e-12

_ARMIJO_C1 = 1e-4
_STEP_GROWTH = 2.0
_STEP_MAX = 1e15
_DEGENERATE_NORM = 1e-14
_STAGNATION_WINDOW = 200

STATUS_CONVERGED = "converged"
STATUS_MAX_ITERS = "max_iters"
STATUS_SOLVER_FAILURE = "solver_failure"


@dataclass(frozen=True)
class FlowOptions:
    """Step control and termination parameters for the descent."""

    step_init: float = 1.0
    step_min: float = 1e-14
    grad_tol: float = 1e-9
    max_iters: int = 100_000
    rescaled: bool = False

    def __post_init__(self):
        if not (0.0 < self.step_min <= self.step_init):
            raise ValueError("need 0 < step_min <= step_init")
        if self.grad_tol <= 0.0:
            raise ValueError("grad_tol must be positive")
        if self.max_iters < 1:
            raise ValueError("max_iters must be at least 1")


@dataclass(frozen=True)
class OrbitGradient:
    """Gradient data at a placement.

    ``g_b`` and ``g_c`` are the sphere-lifted gradient (ascent) vectors,
    orthogonal to b_unit and c_unit; ``norm`` is the normal-metric norm of
    the gradient, which vanishes exactly when [B, K M K] = 0 and
    [C, Sigma N Sigma] = 0; ``scale`` records the field scaling in effect
    (eps*delta, or 1 for the rescaled field).
    """

    S_b: np.ndarray
    S_c: np.ndarray
    g_b: np.ndarray
    g_c: np.ndarray
    norm: float
    scale: float


@dataclass(frozen=True)
class FlowIterate:
    """One accepted iterate: placement, cost, descent diagnostics."""

    placement: Placement
    phi: float
    objective: float
    grad_norm: float
    step: float


@dataclass(frozen=True)
class FlowTrace:
    """History of a descent run."""

    iterates: tuple[FlowIterate, ...]
    status: str
    final: Placement

    @property
    def phis(self) -> np.ndarray:
        return np.array([it.phi for it in self.iterates])

    @property
    def objectives(self) -> np.ndarray:
        return np.array([it.objective for it in self.iterates])


@dataclass(frozen=True)
class MultiStartResult:
    best: FlowTrace
    all: tuple[FlowTrace, ...]


def effective_scale(plant: Plant, rescaled: bool) -> float:
    """Field scaling: eps*delta, or 1 when rescaled or eps*delta ~ 0."""
    prod = plant.epsilon * plant.delta
    if rescaled or prod < SCALE_TINY:
        return 1.0
    return prod


def gradient(
    plant: Plant,
    placement: Placement,
    *,
    rescaled: bool = False,
    report: CostReport | None = None,
) -> OrbitGradient:
    """Normal-metric gradient of the cost at a placement.

    Passing a precomputed ``report`` avoids re-solving the four equations.
    """
    if report is None:
        report = cost_report(plant, placement)
    S_b, S_c = drive_matrices(report.gains, report.adjoints)
    b, c = placement.b_unit, placement.c_unit
    proj_b = S_b @ b - (b @ S_b @ b) * b
    proj_c = S_c @ c - (c @ S_c @ c) * c
    scale = effective_scale(plant, rescaled)
    norm = scale * np.sqrt(2.0 * (proj_b @ proj_b + proj_c @ proj_c))
    return OrbitGradient(
        S_b=S_b,
        S_c=S_c,
        g_b=-scale * proj_b,
        g_c=-scale * proj_c,
        norm=float(norm),
        scale=scale,
    )


def flow_step(
    plant: Plant, placement: Placement, grad: OrbitGradient, step: float
) -> Placement:
    """One explicit Euler step with renormalization retraction.

    Returns the placement with b_unit = normalize(b_unit - step * g_b) and
    c_unit = normalize(c_unit - step * g_c).
    """
    if step <= 0.0:
        raise ValueError("step must be positive")
    if placement.n != plant.n:
        raise ValueError("placement dimension does not match plant")
    b_new = placement.b_unit - step * grad.g_b
    c_new = placement.c_unit - step * grad.g_c
    nb, nc = np.linalg.norm(b_new), np.linalg.norm(c_new)
    if nb < _DEGENERATE_NORM or nc < _DEGENERATE_NORM:
        raise DegenerateStep(
            f"pre-normalization vector norm {min(nb, nc):.3e} below 1e-14"
        )
    return Placement(b_new / nb, c_new / nc)


def _descends_phi_bar(plant: Plant) -> bool:
    # At eps*delta = 0 the cost phi does not depend on the placement, so the
    # rescaled field is the gradient flow of phi_bar and the line search must
    # measure progress on phi_bar instead.
    return plant.epsilon * plant.delta < SCALE_TINY


def run_flow(plant: Plant, init: Placement, opts: FlowOptions) -> FlowTrace:
    """Armijo-backtracked gradient descent from ``init``.

    Terminates when the normal-metric gradient norm drops below
    ``opts.grad_tol`` (status ``converged``), after ``opts.max_iters``
    accepted steps or a stalled line search (``max_iters``), or on a solver
    error, which is recorded as status ``solver_failure`` with the failing
    iterate retained rather than raised.
    """
    use_phi_bar = _descends_phi_bar(plant)

    def objective_of(report: CostReport) -> float:
        return report.phi_bar if use_phi_bar else report.phi

    placement = init
    iterates: list[FlowIterate] = []
    try:
        report = cost_report(plant, placement)
        grad = gradient(plant, placement, rescaled=opts.rescaled, report=report)
    except CodesignError:
        return FlowTrace(iterates=(), status=STATUS_SOLVER_FAILURE, final=init)

    obj = objective_of(report)
    iterates.append(FlowIterate(placement, report.phi, obj, grad.norm, 0.0))
    # Slope of the objective in the step parameter along (-g_b, -g_c); the
    # factor eps*delta/scale accounts for descending phi with a rescaled
    # field (for phi_bar at eps*delta ~ 0 the field is its own gradient).
    slope_factor = 1.0 if use_phi_bar else plant.epsilon * plant.delta / grad.scale

    step = opts.step_init
    grow = True
    best_norm = grad.norm
    stagnant = 0
    for _ in range(opts.max_iters):
        if grad.norm < opts.grad_tol:
            break
        if stagnant >= _STAGNATION_WINDOW:
            # The gradient norm has hit the resolution floor of the
            # objective; further steps only harvest rounding noise.
            break
        slope = -slope_factor * grad.norm**2
        if grow:
            step = min(step * _STEP_GROWTH, _STEP_MAX)
        accepted = False
        while step >= opts.step_min:
            try:
                candidate = flow_step(plant, placement, grad, step)
                cand_report = cost_report(plant, candidate)
            except CodesignError:
                step *= 0.5
                continue
            cand_obj = objective_of(cand_report)
            if cand_obj <= obj + _ARMIJO_C1 * step * slope:
                accepted = True
                break
            step *= 0.5
        if not accepted:
            # No decrease at any admissible step: numerically stationary.
            break
        prev_norm = grad.norm
        placement, report = candidate, cand_report
        try:
            grad = gradient(plant, placement, rescaled=opts.rescaled, report=report)
        except CodesignError:
            return FlowTrace(tuple(iterates), STATUS_SOLVER_FAILURE, placement)
        # Below the objective's float resolution the Armijo test accepts any
        # non-increase, so regulate the step with the gradient norm instead:
        # keep growing while it contracts, halve when it bounces.
        if cand_obj < obj or grad.norm < prev_norm:
            grow = True
        else:
            grow = False
            step *= 0.5
        if grad.norm < best_norm * (1.0 - 1e-2):
            best_norm = grad.norm
            stagnant = 0
        elif grad.norm > 2.0 * best_norm:
            # Clearly in transit (e.g. leaving a saddle), not stuck.
            stagnant = 0
        else:
            stagnant += 1
        obj = cand_obj
        iterates.append(FlowIterate(placement, report.phi, obj, grad.norm, step))
    status = STATUS_CONVERGED if grad.norm < opts.grad_tol else STATUS_MAX_ITERS
    return FlowTrace(tuple(iterates), status, placement)


def random_placement(n: int, rng: np.random.Generator) -> Placement:
    """Independent uniform draws of (b_unit, c_unit) on the unit sphere."""
    if n < 1:
        raise ValueError("dimension must be at least 1")
    vecs = []
    for _ in range(2):
        v = rng.standard_normal(n)
        norm = np.linalg.norm(v)
        while norm == 0.0:  # pragma: no cover - probability zero
            v = rng.standard_normal(n)
            norm = np.linalg.norm(v)
        vecs.append(v / norm)
    return Placement(vecs[0], vecs[1])


def _pbh_passing_placement(
    plant: Plant, rng: np.random.Generator, max_tries: int = 128
) -> Placement | None:
    for _ in range(max_tries):
        candidate = random_placement(plant.n, rng)
        ok_b = pbh_check(plant.A, candidate.b_unit, "stabilizability").ok
        ok_c = pbh_check(plant.A, candidate.c_unit, "detectability").ok
        if ok_b and ok_c:
            return candidate
    return None


def default_workers() -> int:
    """Worker count from CODESIGN_THREADS (0 or unset means sequential auto)."""
    raw = os.environ.get("CODESIGN_THREADS", "0")
    try:
        value = int(raw)
    except ValueError:
        return 1
    if value <= 0:
        return 1
    return value


def multi_start(
    plant: Plant,
    n_starts: int,
    seed: int,
    opts: FlowOptions,
    *,
    max_workers: int | None = None,
) -> MultiStartResult:
    """Run the descent from ``n_starts`` seeded uniform placements.

    Start points are drawn from independent per-start RNG streams (spawned
    from ``seed``), rejection-checked against the PBH tests, so the result is
    deterministic in ``seed`` and independent of execution order. The best
    trace minimizes the final cost phi (ties broken by the auxiliary
    objective, then by start index).

    Raises
    ------
    AllStartsFailed
        If every start ends with a solver failure (or no PBH-passing start
        could be drawn).
    """
    if n_starts < 1:
        raise ValueError("n_starts must be at least 1")
    streams = np.random.SeedSequence(seed).spawn(n_starts)
    placements = [
        _pbh_passing_placement(plant, np.random.default_rng(s)) for s in streams
    ]

    def run_one(start: Placement | None) -> FlowTrace:
        if start is None:
            return FlowTrace((), STATUS_SOLVER_FAILURE, _fallback_placement(plant.n))
        return run_flow(plant, start, opts)

    workers = default_workers() if max_workers is None else max_workers
    if workers > 1 and n_starts > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            traces = list(pool.map(run_one, placements))
    else:
        traces = [run_one(p) for p in placements]

    usable = [
        (i, t) for i, t in enumerate(traces) if t.status != STATUS_SOLVER_FAILURE
    ]
    if not usable:
        raise AllStartsFailed(f"all {n_starts} starts ended in solver failure")
    best = min(
        usable,
        key=lambda item: (
            item[1].iterates[-1].phi,
            item[1].iterates[-1].objective,
            item[0],
        ),
    )[1]
    return MultiStartResult(best=best, all=tuple(traces))


def _fallback_placement(n: int) -> Placement:
    e1 = np.zeros(n)
    e1[0] = 1.0
    return Placement(e1, e1.copy())
