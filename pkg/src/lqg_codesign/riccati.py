"""Dense continuous-time Riccati and Lyapunov solvers, plus PBH tests.

The two equations solved here are

    CARE:      A^T P + P A - P W P + Q = 0        (stabilizing PSD P)
    Lyapunov:  F P + P F^T + Q = 0                (F Hurwitz, PSD P)

``gain_pair`` specializes the CARE to the LQG pair (W = epsilon*B, Q = I for
the regulator K; the dual system A^T, W = delta*C for the filter covariance
Sigma), and ``adjoint_pair`` solves the closed-loop Lyapunov equations

    (A - eps*B*K) M + M (A - eps*B*K)^T + Sigma C Sigma = 0,
    (A - delta*Sigma*C)^T N + N (A - delta*Sigma*C) + K B K = 0,

whose solutions drive the placement gradient.

The CARE is solved by the Hamiltonian invariant-subspace method (ordered real
Schur form, stable eigenvalues first) followed by Newton-Kleinman refinement,
which certifies the residual. The Lyapunov solve is Bartels-Stewart (scipy);
tests cross-check it against a Kronecker-vectorization oracle and against the
integral representation P = int_0^inf e^{Ft} Q e^{F^T t} dt.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg as la

from .errors import (
    NoStabilizingSolution,
    NonConvergence,
    NotHurwitz,
    PBHViolation,
)
from .plant import Placement, Plant

#: Residual tolerances and margins (double precision, n <= 50).
CARE_RTOL = 1e-10
LYAP_RTOL = 1e-11
HURWITZ_MARGIN = 1e-12
PSD_TOL = -1e-10

_MAX_NEWTON_REFINEMENTS = 5
_PBH_RANK_TOL = 1e-9


@dataclass(frozen=True)
class GainPair:
    """Stabilizing ARE solutions: regulator gain K and filter covariance Sigma."""

    K: np.ndarray
    Sigma: np.ndarray
    residual_K: float
    residual_Sigma: float


@dataclass(frozen=True)
class AdjointPair:
    """Closed-loop Lyapunov solutions M (state covariance side) and N (dual)."""

    M: np.ndarray
    N: np.ndarray


@dataclass(frozen=True)
class PBHReport:
    """Outcome of the PBH rank test over the closed right half plane.

    ``tested`` holds one (eigenvalue, margin) pair per eigenvalue with
    nonnegative real part, where margin is the smallest singular value of the
    augmented pencil [A - lambda*I, v]. ``min_margin`` is +inf when A is
    Hurwitz and nothing needed testing.
    """

    mode: str
    ok: bool
    tested: tuple
    min_margin: float


def care_residual(A: np.ndarray, W: np.ndarray, Q: np.ndarray, P: np.ndarray) -> float:
    """Frobenius norm of A^T P + P A - P W P + Q."""
    return float(la.norm(A.T @ P + P @ A - P @ W @ P + Q, "fro"))


def lyapunov_residual(F: np.ndarray, Q: np.ndarray, P: np.ndarray) -> float:
    """Frobenius norm of F P + P F^T + Q."""
    return float(la.norm(F @ P + P @ F.T + Q, "fro"))


def is_hurwitz(F: np.ndarray, margin: float = HURWITZ_MARGIN) -> bool:
    """True when every eigenvalue of F has real part < -margin."""
    return bool(np.max(np.linalg.eigvals(F).real) < -margin)


def solve_lyapunov(F, Q) -> np.ndarray:
    """Solve F P + P F^T + Q = 0 for Hurwitz F and symmetric Q >= 0.

    Parameters
    ----------
    F : (n, n) array_like
        Hurwitz coefficient matrix.
    Q : (n, n) array_like
        Symmetric positive-semidefinite forcing.

    Returns
    -------
    P : (n, n) ndarray
        The unique symmetric solution, PSD for PSD Q.

    Raises
    ------
    NotHurwitz
        If any eigenvalue of F has real part >= -1e-12.
    NonConvergence
        If the computed residual exceeds 1e-11 * (1 + |P|_F).
    """
    F = np.atleast_2d(np.asarray(F, dtype=float))
    Q = np.atleast_2d(np.asarray(Q, dtype=float))
    max_re = float(np.max(np.linalg.eigvals(F).real))
    if max_re >= -HURWITZ_MARGIN:
        raise NotHurwitz(f"matrix is not Hurwitz: max Re(eig) = {max_re:.3e}")
    P = la.solve_continuous_lyapunov(F, -Q)
    P = 0.5 * (P + P.T)
    res = lyapunov_residual(F, Q, P)
    tol = LYAP_RTOL * (1.0 + float(la.norm(P, "fro")))
    if res > tol:
        raise NonConvergence(
            f"Lyapunov residual {res:.3e} exceeds tolerance {tol:.3e}"
        )
    return P


def solve_care(A, W, Q) -> np.ndarray:
    """Solve A^T P + P A - P W P + Q = 0 for the stabilizing PSD solution.

    Uses the ordered real Schur form of the Hamiltonian

        H = [[ A, -W ],
             [ -Q, -A^T ]],

    selecting the n stable eigenvalues, then refines with Newton-Kleinman
    steps (each one a Lyapunov solve) until the certified residual

        |A^T P + P A - P W P + Q|_F <= 1e-10 * (1 + |P|_F^2)

    is met. When W = 0 the equation degenerates to a Lyapunov equation and is
    dispatched to ``solve_lyapunov`` directly.

    Raises
    ------
    NoStabilizingSolution
        If H has eigenvalues on the imaginary axis (within 1e-12), the stable
        subspace does not have dimension n, or the subspace basis is too
        ill-conditioned to invert.
    NonConvergence
        If Newton-Kleinman refinement stalls above the residual tolerance.
    """
    A = np.atleast_2d(np.asarray(A, dtype=float))
    W = np.atleast_2d(np.asarray(W, dtype=float))
    Q = np.atleast_2d(np.asarray(Q, dtype=float))
    n = A.shape[0]

    if la.norm(W, "fro") == 0.0:
        # Degenerate CARE: A^T P + P A + Q = 0, solvable iff A is Hurwitz.
        try:
            return solve_lyapunov(A.T, Q)
        except NotHurwitz as exc:
            raise NoStabilizingSolution(
                "W = 0 and A is not Hurwitz: no stabilizing solution exists"
            ) from exc

    H = np.block([[A, -W], [-Q, -A.T]])
    ham_eigs = np.linalg.eigvals(H)
    axis_dist = float(np.min(np.abs(ham_eigs.real)))
    if axis_dist <= HURWITZ_MARGIN:
        raise NoStabilizingSolution(
            "Hamiltonian has eigenvalues on the imaginary axis "
            f"(min |Re| = {axis_dist:.3e}); configuration is not stabilizable"
        )
    _, U, sdim = la.schur(H, output="real", sort="lhp")
    if sdim != n:
        raise NoStabilizingSolution(
            f"stable Hamiltonian subspace has dimension {sdim}, expected {n}"
        )
    U1 = U[:n, :n]
    U2 = U[n:, :n]
    if np.linalg.cond(U1) > 1e13:
        raise NoStabilizingSolution(
            "stable-subspace basis is numerically singular; "
            "configuration is (nearly) non-stabilizable"
        )
    P = la.solve(U1.T, U2.T).T
    P = 0.5 * (P + P.T)

    res = care_residual(A, W, Q, P)
    for _ in range(_MAX_NEWTON_REFINEMENTS):
        tol = CARE_RTOL * (1.0 + float(la.norm(P, "fro")) ** 2)
        if res <= tol:
            return P
        F = A - W @ P
        try:
            P_next = solve_lyapunov(F.T, P @ W @ P + Q)
        except NotHurwitz as exc:
            raise NoStabilizingSolution(
                "closed loop A - W P is not Hurwitz after Schur step"
            ) from exc
        res_next = care_residual(A, W, Q, P_next)
        if res_next >= res:
            break
        P, res = P_next, res_next
    tol = CARE_RTOL * (1.0 + float(la.norm(P, "fro")) ** 2)
    if res > tol:
        raise NonConvergence(
            f"Newton-Kleinman refinement stalled at residual {res:.3e} "
            f"(tolerance {tol:.3e})"
        )
    return P


def pbh_check(A, v, mode: str) -> PBHReport:
    """PBH rank test of (A, v) for stabilizability or detectability.

    For every eigenvalue lambda of A with Re(lambda) >= 0 (numerically,
    >= -1e-9 so that marginal modes such as a Laplacian zero eigenvalue are
    included), checks rank [A - lambda*I, v] = n; detectability runs the same
    test on A^T. The reported margin per eigenvalue is the smallest singular
    value of the augmented matrix.
    """
    if mode not in ("stabilizability", "detectability"):
        raise ValueError(f"unknown PBH mode {mode!r}")
    A = np.atleast_2d(np.asarray(A, dtype=float))
    v = np.asarray(v, dtype=float).reshape(-1)
    if np.linalg.norm(v) == 0.0:
        raise ValueError("PBH test vector must be nonzero")
    M = A if mode == "stabilizability" else A.T
    n = M.shape[0]
    threshold = _PBH_RANK_TOL * (1.0 + float(la.norm(M, "fro")))

    tested = []
    ok = True
    for lam in np.linalg.eigvals(M):
        if lam.real < -1e-9:
            continue
        pencil = np.hstack([M - lam * np.eye(n), v[:, None]])
        margin = float(la.svdvals(pencil)[-1])
        tested.append((complex(lam), margin))
        if margin <= threshold:
            ok = False
    min_margin = min((m for _, m in tested), default=float("inf"))
    return PBHReport(mode=mode, ok=ok, tested=tuple(tested), min_margin=min_margin)


def _require_pbh(plant: Plant, placement: Placement) -> None:
    for v, mode, pair in (
        (placement.b_unit, "stabilizability", "(A, b)"),
        (placement.c_unit, "detectability", "(A, c)"),
    ):
        report = pbh_check(plant.A, v, mode)
        if not report.ok:
            lam = min(report.tested, key=lambda t: t[1])[0]
            raise PBHViolation(
                f"{pair} fails the PBH {mode} test at eigenvalue {lam}",
                eigenvalue=lam,
            )


def gain_pair(plant: Plant, placement: Placement) -> GainPair:
    """Solve the two LQG Riccati equations for a placement.

    K solves A^T K + K A - eps K B K + I = 0 and Sigma solves the dual
    A Sigma + Sigma A^T - delta Sigma C Sigma + I = 0, with B, C the
    normalized projectors of the placement.

    Raises
    ------
    PBHViolation
        If (A, b) is not stabilizable or (A, c) is not detectable.
    NoStabilizingSolution, NonConvergence
        Propagated from the CARE solver.
    """
    _require_pbh(plant, placement)
    eye = np.eye(plant.n)
    K = solve_care(plant.A, plant.epsilon * placement.B, eye)
    Sigma = solve_care(plant.A.T, plant.delta * placement.C, eye)
    res_K = care_residual(plant.A, plant.epsilon * placement.B, eye, K)
    res_S = care_residual(plant.A.T, plant.delta * placement.C, eye, Sigma)
    return GainPair(K=K, Sigma=Sigma, residual_K=res_K, residual_Sigma=res_S)


def closed_loop_matrices(plant: Plant, placement: Placement, gains: GainPair):
    """Return (A - eps*B*K, A - delta*Sigma*C), both Hurwitz for valid gains."""
    F_reg = plant.A - plant.epsilon * (placement.B @ gains.K)
    F_fil = plant.A - plant.delta * (gains.Sigma @ placement.C)
    return F_reg, F_fil


def adjoint_pair(plant: Plant, placement: Placement, gains: GainPair) -> AdjointPair:
    """Solve the closed-loop Lyapunov equations for the adjoint pair (M, N).

    M solves (A - eps B K) M + M (A - eps B K)^T + Sigma C Sigma = 0 and
    N solves (A - delta Sigma C)^T N + N (A - delta Sigma C) + K B K = 0.
    A ``NotHurwitz`` here signals inconsistent gains.
    """
    F_reg, F_fil = closed_loop_matrices(plant, placement, gains)
    K, Sigma = gains.K, gains.Sigma
    M = solve_lyapunov(F_reg, Sigma @ placement.C @ Sigma)
    N = solve_lyapunov(F_fil.T, K @ placement.B @ K)
    return AdjointPair(M=M, N=N)
