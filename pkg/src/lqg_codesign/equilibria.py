"""Equilibrium detection, zero-gain analytic machinery, and stability.

A placement is an equilibrium of the descent flow iff b_unit and c_unit are
eigenvectors of the drive matrices:

    K M K b = mu_B b,        Sigma N Sigma c = mu_C c.

In the zero-gain limit epsilon = delta = 0 with A symmetric negative
definite (A = Theta Lambda Theta^T, 0 > lambda_1 > ... > lambda_n), the
gains collapse to K = Sigma = -A^{-1}/2 and the equilibrium condition turns
into a finite algebraic problem in the coordinates

    beta = Lambda^{-1} Theta^T b,   gamma = Lambda^{-1} Theta^T c,
    diag(gamma) Psi diag(gamma) beta = mu_beta Lambda^2 beta,
    diag(beta) Psi diag(beta) gamma = mu_gamma Lambda^2 gamma,

with Psi the positive-definite Cauchy matrix [-1/(lambda_i + lambda_j)].
Solutions either have disjoint supports (a continuum on which the potential
phi_bar vanishes) or equal supports; the equal-support solutions come in
orbits of the entrywise sign group and are enumerated exactly: for a support
and sign pattern s, the candidate exists iff the solution xi of

    diag(s) Psi' diag(s) xi = (lambda_i^2)_support

is entrywise positive, and then beta*beta = gamma*gamma is proportional to
xi. Stability is classified by a central finite-difference Hessian of the
potential (phi, or phi_bar in the zero-gain limit) on the tangent space of
the sphere pair.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, replace

import numpy as np
import scipy.linalg as la

from .cost import cost_report, drive_matrices
from .errors import (
    DimensionTooLarge,
    NonNegativeEigenvalue,
    NotAnEquilibrium,
    SingularBlock,
)
from .flow import gradient
from .plant import Placement, Plant

ENUMERATION_CAP = 12
SUPPORT_TOL = 1e-10
EIGENGAP_TOL = 1e-10
EQ19_RESIDUAL_TOL = 1e-8
STABILITY_MARGIN = 1e-7
HESSIAN_STEP = 1e-4

KIND_COMMON = "common_support"
KIND_DISJOINT = "disjoint_support"

STABLE = "stable"
UNSTABLE = "unstable"
DEGENERATE = "degenerate"


@dataclass(frozen=True)
class Spectrum:
    """Eigendecomposition A = Theta diag(Lambda) Theta^T, Lambda descending.

    Eigenvector signs are fixed so each column's largest-magnitude entry is
    positive, making the decomposition deterministic.
    """

    Theta: np.ndarray
    Lambda: np.ndarray

    def __post_init__(self):
        Theta = np.atleast_2d(np.asarray(self.Theta, dtype=float))
        Lambda = np.asarray(self.Lambda, dtype=float).reshape(-1)
        n = Lambda.size
        if Theta.shape != (n, n):
            raise ValueError("Theta and Lambda dimensions disagree")
        if np.any(np.diff(Lambda) >= 0):
            raise ValueError("eigenvalues must be strictly descending")
        if la.norm(Theta.T @ Theta - np.eye(n), "fro") > 1e-12 * n:
            raise ValueError("Theta is not orthogonal")
        object.__setattr__(self, "Theta", Theta)
        object.__setattr__(self, "Lambda", Lambda)

    @property
    def n(self) -> int:
        return self.Lambda.size

    @property
    def A(self) -> np.ndarray:
        return self.Theta @ np.diag(self.Lambda) @ self.Theta.T

    def eigenvector(self, i: int) -> np.ndarray:
        return self.Theta[:, i]

    @classmethod
    def from_matrix(cls, A) -> "Spectrum":
        A = np.atleast_2d(np.asarray(A, dtype=float))
        if la.norm(A - A.T, "fro") > 1e-10 * (1.0 + la.norm(A, "fro")):
            raise ValueError("spectral analysis requires a symmetric matrix")
        eigvals, eigvecs = np.linalg.eigh(0.5 * (A + A.T))
        order = np.argsort(eigvals)[::-1]
        eigvals = eigvals[order]
        eigvecs = eigvecs[:, order]
        for j in range(eigvecs.shape[1]):
            col = eigvecs[:, j]
            lead = np.argmax(np.abs(col))
            if col[lead] < 0:
                eigvecs[:, j] = -col
        return cls(Theta=eigvecs, Lambda=eigvals)

    def require_negative_distinct(self) -> None:
        """Guard for the zero-gain analytic routines."""
        if self.Lambda[0] >= 0.0:
            raise NonNegativeEigenvalue(
                f"largest eigenvalue {self.Lambda[0]:.6g} is not negative"
            )
        gaps = -np.diff(self.Lambda)
        if self.n > 1 and np.min(gaps) <= EIGENGAP_TOL:
            raise ValueError(
                f"eigenvalue gap {np.min(gaps):.3e} below {EIGENGAP_TOL:g}; "
                "analytic enumeration requires distinct eigenvalues"
            )


@dataclass(frozen=True)
class BetaGamma:
    """Zero-gain coordinates of a placement with supports and multipliers."""

    beta: np.ndarray
    gamma: np.ndarray
    support_beta: tuple[int, ...]
    support_gamma: tuple[int, ...]
    mu_beta: float
    mu_gamma: float


@dataclass(frozen=True)
class EquilibriumCandidate:
    """One equilibrium candidate of the zero-gain flow.

    ``sign_s`` is the sign pattern of beta*gamma padded with zeros off the
    support; ``xi`` is the support-block solution certifying existence (for
    common-support candidates). ``hessian_eigs`` and ``stability`` are None
    until classified.
    """

    placement: Placement
    kind: str
    support: tuple[int, ...]
    sign_s: tuple[int, ...]
    xi: tuple[float, ...] | None
    hessian_eigs: tuple[float, ...] | None = None
    stability: str | None = None


def is_equilibrium(
    plant: Plant, placement: Placement, tol: float
) -> tuple[bool, np.ndarray]:
    """Test the equilibrium condition; returns (flag, [res_b, res_c]).

    The residuals are |(I - b b^T) K M K b| and |(I - c c^T) S N S c|, which
    vanish exactly when b and c are eigenvectors of the drive matrices.
    """
    report = cost_report(plant, placement)
    S_b, S_c = drive_matrices(report.gains, report.adjoints)
    b, c = placement.b_unit, placement.c_unit
    res_b = np.linalg.norm(S_b @ b - (b @ S_b @ b) * b)
    res_c = np.linalg.norm(S_c @ c - (c @ S_c @ c) * c)
    residuals = np.array([res_b, res_c])
    return bool(np.all(residuals <= tol)), residuals


def cauchy_matrix(lambdas) -> np.ndarray:
    """Cauchy matrix Psi with entries -1/(lambda_i + lambda_j).

    Positive definite whenever all eigenvalues are strictly negative.
    """
    lam = np.asarray(lambdas, dtype=float).reshape(-1)
    if np.any(lam >= 0.0):
        raise NonNegativeEigenvalue(
            f"Cauchy matrix requires negative eigenvalues, got max {lam.max():.6g}"
        )
    return -1.0 / (lam[:, None] + lam[None, :])


def beta_gamma_coords(placement: Placement, spectrum: Spectrum) -> BetaGamma:
    """Zero-gain coordinates beta = Lambda^{-1} Theta^T b (same for gamma).

    The normalization beta^T Lambda^2 beta = 1 holds automatically for unit
    b. Supports collect the entries above 1e-10 in magnitude; the
    multipliers are the Rayleigh quotients of the coupled eigen-equations.
    """
    lam = spectrum.Lambda
    if np.any(lam == 0.0):
        raise NonNegativeEigenvalue("zero eigenvalue: coordinates undefined")
    beta = (spectrum.Theta.T @ placement.b_unit) / lam
    gamma = (spectrum.Theta.T @ placement.c_unit) / lam
    psi = cauchy_matrix(lam)
    mu_beta = float(beta @ (np.diag(gamma) @ psi @ np.diag(gamma) @ beta))
    mu_gamma = float(gamma @ (np.diag(beta) @ psi @ np.diag(beta) @ gamma))
    return BetaGamma(
        beta=beta,
        gamma=gamma,
        support_beta=tuple(np.flatnonzero(np.abs(beta) > SUPPORT_TOL)),
        support_gamma=tuple(np.flatnonzero(np.abs(gamma) > SUPPORT_TOL)),
        mu_beta=mu_beta,
        mu_gamma=mu_gamma,
    )


def eq19_residual(beta: np.ndarray, gamma: np.ndarray, spectrum: Spectrum) -> float:
    """Residual of the coupled eigen-equations at (beta, gamma)."""
    lam = spectrum.Lambda
    psi = cauchy_matrix(lam)
    lam2 = lam**2
    lhs_b = np.diag(gamma) @ psi @ np.diag(gamma) @ beta
    lhs_c = np.diag(beta) @ psi @ np.diag(beta) @ gamma
    mu_b = float(beta @ lhs_b)  # beta^T Lambda^2 beta = 1
    mu_c = float(gamma @ lhs_c)
    return float(
        max(
            np.linalg.norm(lhs_b - mu_b * lam2 * beta),
            np.linalg.norm(lhs_c - mu_c * lam2 * gamma),
        )
    )


def xi_vector(lambdas, support, signs) -> tuple[np.ndarray, bool]:
    """Solve diag(s) Psi' diag(s) xi = (lambda_i^2) on a support block.

    Returns the solution restricted to the support and the existence flag
    (all entries strictly positive). The block is a +/-1 congruence of a
    positive-definite Cauchy block, hence nonsingular in exact arithmetic; a
    numerically singular block raises ``SingularBlock`` rather than guessing.
    """
    lam = np.asarray(lambdas, dtype=float).reshape(-1)
    support = tuple(int(i) for i in support)
    signs = np.asarray(signs, dtype=float).reshape(-1)
    if len(support) == 0:
        raise ValueError("support must be nonempty")
    if signs.size != len(support) or np.any(np.abs(signs) != 1.0):
        raise ValueError("signs must be a +/-1 pattern over the support")
    psi = cauchy_matrix(lam)
    idx = np.array(support)
    block = psi[np.ix_(idx, idx)] * np.outer(signs, signs)
    if np.linalg.cond(block) > 1e12:
        raise SingularBlock(
            "sign-conjugated Cauchy block is numerically singular "
            f"(cond = {np.linalg.cond(block):.3e})"
        )
    xi = la.solve(block, lam[idx] ** 2, assume_a="sym")
    return xi, bool(np.all(xi > 0.0))


def _common_support_placement(
    spectrum: Spectrum, support: tuple[int, ...], signs: np.ndarray, xi: np.ndarray
) -> tuple[Placement, np.ndarray, np.ndarray]:
    """Build (beta, gamma) = (sqrt(xi), s*sqrt(xi)) / |Lambda sqrt(xi)|."""
    n = spectrum.n
    beta = np.zeros(n)
    gamma = np.zeros(n)
    root = np.sqrt(xi)
    idx = np.array(support)
    scale = np.linalg.norm(spectrum.Lambda[idx] * root)
    beta[idx] = root / scale
    gamma[idx] = signs * root / scale
    b_unit = spectrum.Theta @ (spectrum.Lambda * beta)
    c_unit = spectrum.Theta @ (spectrum.Lambda * gamma)
    return Placement.normalized(b_unit, c_unit), beta, gamma


def enumerate_equilibria_zero(spectrum: Spectrum) -> list[EquilibriumCandidate]:
    """Enumerate zero-gain equilibrium candidates for a negative spectrum.

    Emits one common-support candidate per (support, sign pattern with
    leading +1) whose xi-certificate is positive, each verified against the
    coupled eigen-equations to residual 1e-8, plus one representative
    disjoint-support candidate (v_i, v_j) per ordered pair i != j. The sign
    patterns fix the first support entry to +1 because flipping all of gamma
    yields the same projector pair.

    Raises
    ------
    DimensionTooLarge
        For n > 12 (the sign enumeration grows as 3^n).
    """
    n = spectrum.n
    if n > ENUMERATION_CAP:
        raise DimensionTooLarge(f"enumeration supports n <= {ENUMERATION_CAP}, got {n}")
    spectrum.require_negative_distinct()

    candidates: list[EquilibriumCandidate] = []
    for size in range(1, n + 1):
        for support in itertools.combinations(range(n), size):
            for tail in itertools.product((1.0, -1.0), repeat=size - 1):
                signs = np.array((1.0,) + tail)
                xi, exists = xi_vector(spectrum.Lambda, support, signs)
                if not exists:
                    continue
                placement, beta, gamma = _common_support_placement(
                    spectrum, support, signs, xi
                )
                residual = eq19_residual(beta, gamma, spectrum)
                if residual >= EQ19_RESIDUAL_TOL:
                    raise SingularBlock(
                        f"candidate on support {support} failed verification "
                        f"(residual {residual:.3e})"
                    )
                sign_s = np.zeros(n, dtype=int)
                sign_s[np.array(support)] = signs.astype(int)
                candidates.append(
                    EquilibriumCandidate(
                        placement=placement,
                        kind=KIND_COMMON,
                        support=support,
                        sign_s=tuple(int(s) for s in sign_s),
                        xi=tuple(float(x) for x in xi),
                    )
                )
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            placement = Placement(spectrum.eigenvector(i), spectrum.eigenvector(j))
            candidates.append(
                EquilibriumCandidate(
                    placement=placement,
                    kind=KIND_DISJOINT,
                    support=(i, j),
                    sign_s=(0,) * n,
                    xi=None,
                )
            )
    return candidates


def _tangent_basis(v: np.ndarray) -> np.ndarray:
    """Orthonormal basis of the hyperplane orthogonal to the unit vector v."""
    return la.null_space(v[None, :])


def hessian_matrix(
    plant: Plant, placement: Placement, h: float = HESSIAN_STEP
) -> np.ndarray:
    """Raw finite-difference Hessian of the potential at a placement.

    Differentiates the projected gradient field centrally with step ``h``
    along renormalized curves through orthonormal tangent bases of the
    hyperplanes orthogonal to b_unit and c_unit (dimension 2(n-1) total).
    At a critical point the result is symmetric up to O(h) transport error;
    callers symmetrize before reading eigenvalues.
    """
    n = plant.n
    U = _tangent_basis(placement.b_unit)
    W = _tangent_basis(placement.c_unit)
    dim = 2 * (n - 1)

    def grad_coords(b: np.ndarray, c: np.ndarray) -> np.ndarray:
        g = gradient(plant, Placement.normalized(b, c))
        return np.concatenate([U.T @ g.g_b, W.T @ g.g_c])

    b0, c0 = placement.b_unit, placement.c_unit
    H = np.empty((dim, dim))
    for i in range(dim):
        if i < n - 1:
            d = U[:, i]
            plus = grad_coords(b0 + h * d, c0)
            minus = grad_coords(b0 - h * d, c0)
        else:
            d = W[:, i - (n - 1)]
            plus = grad_coords(b0, c0 + h * d)
            minus = grad_coords(b0, c0 - h * d)
        H[:, i] = (plus - minus) / (2.0 * h)
    return H


def classify_stability(
    plant: Plant,
    placement: Placement,
    h: float = HESSIAN_STEP,
    *,
    eq_tol: float = 1e-8,
) -> tuple[np.ndarray, str]:
    """Finite-difference Hessian classification at an equilibrium.

    Differentiates the projected gradient field with ``hessian_matrix`` and
    symmetrizes. In the zero-gain regime (eps*delta < 1e-12) the field is
    the rescaled one, so the Hessian is that of the potential phi_bar;
    otherwise it is the Hessian of phi. Classification: stable if the
    smallest eigenvalue exceeds 1e-7, unstable if it is below -1e-7,
    degenerate otherwise.

    Returns (eigenvalues descending, classification).

    Raises
    ------
    NotAnEquilibrium
        If the equilibrium residual exceeds ``eq_tol``.
    """
    flag, residuals = is_equilibrium(plant, placement, eq_tol)
    if not flag:
        raise NotAnEquilibrium(
            f"residuals {residuals} exceed tolerance {eq_tol:g}"
        )
    if plant.n == 1:
        return np.array([]), STABLE
    H = hessian_matrix(plant, placement, h)
    H = 0.5 * (H + H.T)
    eigs = np.sort(np.linalg.eigvalsh(H))[::-1]
    min_eig = eigs[-1]
    if min_eig > STABILITY_MARGIN:
        verdict = STABLE
    elif min_eig < -STABILITY_MARGIN:
        verdict = UNSTABLE
    else:
        verdict = DEGENERATE
    return eigs, verdict


def classify_candidates(
    spectrum: Spectrum,
    candidates: list[EquilibriumCandidate],
    h: float = HESSIAN_STEP,
) -> list[EquilibriumCandidate]:
    """Classify enumerated zero-gain candidates in place of their None fields."""
    plant = Plant(spectrum.A, 0.0, 0.0)
    classified = []
    for cand in candidates:
        eigs, verdict = classify_stability(plant, cand.placement, h)
        classified.append(
            replace(
                cand,
                hessian_eigs=tuple(float(e) for e in eigs),
                stability=verdict,
            )
        )
    return classified


def analytic_minimum(spectrum: Spectrum, epsilon: float, delta: float) -> float:
    """Closed-form minimum of phi, attained at the (v_1, v_1) placement:

        (sqrt(l1^2+eps) + sqrt(l1^2+delta))
        / ((sqrt(l1^2+eps) - l1)(sqrt(l1^2+delta) - l1))
        - sum_{k>=2} 1/(2 lambda_k).

    Valid for lambda_1 < 0, and for lambda_1 = 0 (negative semidefinite A,
    e.g. Laplacian dynamics) provided epsilon and delta are positive.
    """
    lam = spectrum.Lambda
    lam1 = lam[0]
    if lam1 > 0.0:
        raise NonNegativeEigenvalue(f"lambda_1 = {lam1:.6g} must be <= 0")
    if lam1 == 0.0 and (epsilon <= 0.0 or delta <= 0.0):
        raise ValueError("lambda_1 = 0 requires positive epsilon and delta")
    a = np.sqrt(lam1**2 + epsilon)
    b = np.sqrt(lam1**2 + delta)
    head = (a + b) / ((a - lam1) * (b - lam1))
    tail = float(np.sum(1.0 / (2.0 * lam[1:]))) if spectrum.n > 1 else 0.0
    return float(head - tail)


def analytic_gains_at_v1(
    spectrum: Spectrum, epsilon: float, delta: float
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Diagonals of Theta^T {K, Sigma, M, N} Theta at the (v_1, v_1) placement.

        K   = diag(1/(sqrt(l1^2+eps) - l1), -1/(2 l2), ..., -1/(2 ln))
        Sig = diag(1/(sqrt(l1^2+del) - l1), -1/(2 l2), ..., -1/(2 ln))
        M   = diag(1/(2 sqrt(l1^2+eps) (sqrt(l1^2+del) - l1)^2), 0, ..., 0)
        N   = diag(1/(2 sqrt(l1^2+del) (sqrt(l1^2+eps) - l1)^2), 0, ..., 0)
    """
    lam = spectrum.Lambda
    lam1 = lam[0]
    if lam1 > 0.0:
        raise NonNegativeEigenvalue(f"lambda_1 = {lam1:.6g} must be <= 0")
    if lam1 == 0.0 and (epsilon <= 0.0 or delta <= 0.0):
        raise ValueError("lambda_1 = 0 requires positive epsilon and delta")
    a = np.sqrt(lam1**2 + epsilon)
    b = np.sqrt(lam1**2 + delta)
    K_diag = np.concatenate([[1.0 / (a - lam1)], -1.0 / (2.0 * lam[1:])])
    S_diag = np.concatenate([[1.0 / (b - lam1)], -1.0 / (2.0 * lam[1:])])
    M_diag = np.zeros(spectrum.n)
    N_diag = np.zeros(spectrum.n)
    M_diag[0] = 1.0 / (2.0 * a * (b - lam1) ** 2)
    N_diag[0] = 1.0 / (2.0 * b * (a - lam1) ** 2)
    return K_diag, S_diag, M_diag, N_diag


def orbit_canonical_coords(
    placement: Placement, spectrum: Spectrum
) -> tuple[np.ndarray, np.ndarray]:
    """Coordinates (beta, gamma) canonicalized by the sign-group action.

    Applies the entrywise sign pattern that makes every beta entry
    nonnegative; the returned gamma is determined up to a single global sign
    (the c-vector sign), which callers should quotient when comparing.
    """
    coords = beta_gamma_coords(placement, spectrum)
    signs = np.where(coords.beta < 0.0, -1.0, 1.0)
    return signs * coords.beta, signs * coords.gamma


def candidate_match_distance(
    placement: Placement, candidate: EquilibriumCandidate, spectrum: Spectrum
) -> float:
    """Distance between a placement and a candidate modulo orbit and signs.

    For common-support candidates, compares sign-canonicalized (beta, gamma)
    coordinates, quotienting the global gamma sign. For disjoint-support
    representatives, compares the projector pairs directly modulo vector
    signs.
    """
    if candidate.kind == KIND_COMMON:
        beta, gamma = orbit_canonical_coords(placement, spectrum)
        beta_c, gamma_c = orbit_canonical_coords(candidate.placement, spectrum)
        d_beta = np.linalg.norm(beta - beta_c)
        d_gamma = min(
            np.linalg.norm(gamma - gamma_c), np.linalg.norm(gamma + gamma_c)
        )
        return float(max(d_beta, d_gamma))
    d_b = min(
        np.linalg.norm(placement.b_unit - candidate.placement.b_unit),
        np.linalg.norm(placement.b_unit + candidate.placement.b_unit),
    )
    d_c = min(
        np.linalg.norm(placement.c_unit - candidate.placement.c_unit),
        np.linalg.norm(placement.c_unit + candidate.placement.c_unit),
    )
    return float(max(d_b, d_c))
