"""The isothermal fully-symmetric Gaussian state family.

States are parametrized by (M, n_th, s, t): a collective-mode squeezing
parameter s and an orthogonal-modes squeezing parameter t, on top of a
common thermal occupation n_th.  The construction makes both symplectic
eigenvalues equal to nu = 1 + 2 n_th by design, so isothermality never has
to be solved for.  At fixed total photon number the family is a
one-parameter manifold in t.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, InfeasibleError

#: Eigenvalue slack allowed below the vacuum limit nu = 1.
_TOL_NU = 1e-9


@dataclass(frozen=True)
class FsgParams:
    """Chart coordinates (M, n_th, s, t) of an isothermal FSG state."""

    M: int
    n_th: float
    s: float
    t: float

    def __post_init__(self):
        if self.M < 2:
            raise DomainError(f"M must be >= 2, got {self.M}")
        if self.n_th < 0.0:
            raise DomainError(f"n_th must be >= 0, got {self.n_th}")

    @property
    def nu(self) -> float:
        return 1.0 + 2.0 * self.n_th


@dataclass(frozen=True)
class FsgBlocks:
    """Covariance entries (eps1, eps2, gam1, gam2) of the 2x2 block form."""

    M: int
    eps1: float
    eps2: float
    gam1: float
    gam2: float

    def __post_init__(self):
        if self.M < 2:
            raise DomainError(f"M must be >= 2, got {self.M}")
        m = self.M
        factors = (
            self.eps1 - self.gam1,
            self.eps2 - self.gam2,
            self.eps1 + (m - 1) * self.gam1,
            self.eps2 + (m - 1) * self.gam2,
        )
        if min(factors) <= 0.0:
            raise DomainError(f"block positivity violated: factors {factors}")
        nu_minus = np.sqrt(factors[0] * factors[1])
        nu_plus = np.sqrt(factors[2] * factors[3])
        if nu_minus < 1.0 - _TOL_NU or nu_plus < 1.0 - _TOL_NU:
            raise DomainError(
                f"symplectic eigenvalues below vacuum: nu-={nu_minus}, nu+={nu_plus}"
            )


@dataclass(frozen=True)
class PhotonBudget:
    """Total mean photon number above vacuum shared by the network."""

    N_tot: float

    def __post_init__(self):
        if self.N_tot < 0.0:
            raise DomainError(f"N_tot must be >= 0, got {self.N_tot}")


@dataclass(frozen=True)
class SolveSResult:
    s: float
    feasible: bool


def blocks_from_params(params: FsgParams) -> FsgBlocks:
    """Covariance blocks of the (M, n_th, s, t) chart.

    eps1 = nu (e^{2s} + (M-1) e^{2t}) / M,   gam1 = nu (e^{2s} - e^{2t}) / M,
    and eps2, gam2 with both signs of the exponents flipped.  The resulting
    blocks satisfy nu- = nu+ = 1 + 2 n_th identically.
    """
    m = params.M
    nu = params.nu
    a = np.exp(2.0 * params.s)
    b = np.exp(2.0 * params.t)
    return FsgBlocks(
        M=m,
        eps1=nu * (a + (m - 1) * b) / m,
        eps2=nu * (1.0 / a + (m - 1) / b) / m,
        gam1=nu * (a - b) / m,
        gam2=nu * (1.0 / a - 1.0 / b) / m,
    )


def params_from_blocks(blocks: FsgBlocks) -> FsgParams:
    """Invert the chart: recover (M, n_th, s, t) from isothermal blocks.

    Uses eps1 - gam1 = nu e^{2t} and eps1 + (M-1) gam1 = nu e^{2s}.
    Raises DomainError if the blocks are not isothermal.
    """
    m = blocks.M
    nu_minus = np.sqrt((blocks.eps1 - blocks.gam1) * (blocks.eps2 - blocks.gam2))
    nu_plus = np.sqrt(
        (blocks.eps1 + (m - 1) * blocks.gam1) * (blocks.eps2 + (m - 1) * blocks.gam2)
    )
    if abs(nu_plus - nu_minus) > 1e-8 * max(1.0, nu_plus):
        raise DomainError(f"blocks not isothermal: nu-={nu_minus}, nu+={nu_plus}")
    nu = max(0.5 * (nu_minus + nu_plus), 1.0)  # clamp rounding below vacuum
    t = 0.5 * np.log((blocks.eps1 - blocks.gam1) / nu)
    s = 0.5 * np.log((blocks.eps1 + (m - 1) * blocks.gam1) / nu)
    return FsgParams(M=m, n_th=0.5 * (nu - 1.0), s=float(s), t=float(t))


def total_photons(blocks: FsgBlocks) -> float:
    """Mean photon number above vacuum: N_tot = M (eps1 + eps2 - 2) / 4."""
    return blocks.M * (blocks.eps1 + blocks.eps2 - 2.0) / 4.0


def _check_budget(M: int, n_th: float, N_tot: float) -> None:
    if N_tot < 0.0:
        raise DomainError(f"N_tot must be >= 0, got {N_tot}")
    floor = M * n_th
    if N_tot < floor * (1.0 - 1e-12) - 1e-15:
        raise InfeasibleError(
            f"photon budget N_tot={N_tot} below thermal floor M*n_th={floor}"
        )


def solve_s(M: int, n_th: float, N_tot: float, t: float) -> SolveSResult:
    """Solve the photon constraint for s >= 0 at fixed t.

    Inverts nu [cosh(2s) + (M-1) cosh(2t)] = 2 N_tot + M.  Returns
    feasible=False when |t| exceeds the budget (h < 1).  Raises
    InfeasibleError when the budget is below the thermal floor M * n_th.
    """
    _check_budget(M, n_th, N_tot)
    nu = 1.0 + 2.0 * n_th
    h = (2.0 * N_tot + M) / nu - (M - 1) * np.cosh(2.0 * t)
    if h < 1.0 - 1e-12:
        return SolveSResult(s=0.0, feasible=False)
    h = max(h, 1.0)
    return SolveSResult(s=float(0.5 * np.arccosh(h)), feasible=True)


def free_parameter_range(M: int, n_th: float, N_tot: float) -> float:
    """Largest |t| compatible with the photon budget.

    cosh(2 t_max) = [(2 N_tot + M)/nu - 1] / (M - 1); the feasible set of
    solve_s on the s >= 0 branch is exactly [-t_max, t_max].
    """
    _check_budget(M, n_th, N_tot)
    nu = 1.0 + 2.0 * n_th
    h = ((2.0 * N_tot + M) / nu - 1.0) / (M - 1)
    return float(0.5 * np.arccosh(max(h, 1.0)))


def optimal_precision_blocks(M: int, N_tot: float) -> FsgBlocks:
    """Pure blocks of the precision-optimal state at budget N_tot.

    gam_i = [2 N - 2 (-1)^i sqrt(N (N+1))] / M and eps_i = 1 + gam_i;
    the state is pure and reaches the ultimate precision 8 N (N + 1).
    """
    if N_tot < 0.0:
        raise DomainError(f"N_tot must be >= 0, got {N_tot}")
    root = np.sqrt(N_tot * (N_tot + 1.0))
    gam1 = (2.0 * N_tot + 2.0 * root) / M
    gam2 = (2.0 * N_tot - 2.0 * root) / M
    return FsgBlocks(M=M, eps1=1.0 + gam1, eps2=1.0 + gam2, gam1=gam1, gam2=gam2)


def tmsv_blocks(N_tot: float) -> FsgBlocks:
    """Two-mode squeezed vacuum blocks at budget N_tot (M = 2).

    eps1 = eps2 = 1 + N_tot, gam1 = -gam2 = sqrt(N_tot (N_tot + 2)); the
    unique FSG state with perfect privacy at finite photon number.
    """
    if N_tot < 0.0:
        raise DomainError(f"N_tot must be >= 0, got {N_tot}")
    g = float(np.sqrt(N_tot * (N_tot + 2.0)))
    return FsgBlocks(M=2, eps1=1.0 + N_tot, eps2=1.0 + N_tot, gam1=g, gam2=-g)


def privacy_condition_residual(blocks: FsgBlocks) -> float:
    """Residual of the perfect-privacy condition for pure FSG states.

    residual = (gam1^2 + gam2^2) - (eps1^2 + eps2^2 - 2); zero exactly at
    the states whose pure-state Fisher matrix is proportional to the
    all-ones matrix (TMSV for any photon budget).
    """
    return float(
        (blocks.gam1**2 + blocks.gam2**2) - (blocks.eps1**2 + blocks.eps2**2 - 2.0)
    )
