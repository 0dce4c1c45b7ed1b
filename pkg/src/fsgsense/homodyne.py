"""Local homodyne measurement model and Monte-Carlo validation.

All nodes share one local-oscillator angle theta_hd; the prior value of
every encoded phase is zero.  The measurement outcome of the network is a
zero-mean M-variate normal with covariance Gamma, whose classical Fisher
matrix F_jk = Tr[Gamma^-1 (d_j Gamma) Gamma^-1 (d_k Gamma)] / 2 inherits
the a I + b J structure of the probe state.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import stats

from . import kernels
from .errors import ConvergenceError, DegenerateError, DomainError, NumericalError
from .family import FsgBlocks
from .metrology import StructuredFim, WeightVector, mean_weights, precision

ANGLE_GRID_POINTS = 1001
MLE_BRACKET = 0.3
_MLE_GRID = 121


@dataclass(frozen=True)
class McConfig:
    """Monte-Carlo run configuration; (config, seed) fixes the sample stream."""

    n_samples: int
    trials: int
    seed: int

    def __post_init__(self):
        if self.n_samples < 2:
            raise DomainError(f"n_samples must be >= 2, got {self.n_samples}")
        if self.trials < 2:
            raise DomainError(f"trials must be >= 2, got {self.trials}")
        if not 0 <= self.seed < 2**64:
            raise DomainError("seed must fit in an unsigned 64-bit integer")


@dataclass(frozen=True)
class McReport:
    empirical_var: float
    crb: float
    ratio: float
    ci95: tuple[float, float]
    xi_hd: float


@dataclass(frozen=True)
class HomodyneOpt:
    theta_star: float
    fim: StructuredFim
    xi_hd: float
    theta_direct: float
    xi_direct: float
    proxy_consistent: bool


def homodyne_cov(
    blocks: FsgBlocks, theta_hd: float, thetas: np.ndarray | None = None
) -> np.ndarray:
    """Outcome covariance Gamma of local homodyne detection.

    Gamma_jk = b1 cos(phi_j) cos(phi_k) + b2 sin(phi_j) sin(phi_k) with
    phi_j = theta_hd + theta_j, where (b1, b2) are the diagonal entries of
    the covariance block coupling nodes j and k (eps on the diagonal, gam
    off it).  thetas=None means zero prior at every node.
    """
    m = blocks.M
    if thetas is None:
        phi = np.full(m, theta_hd)
    else:
        thetas = np.asarray(thetas, dtype=float)
        if thetas.shape != (m,):
            raise DomainError(f"expected {m} node angles, got shape {thetas.shape}")
        phi = theta_hd + thetas
    c, s = np.cos(phi), np.sin(phi)
    gamma = blocks.gam1 * np.outer(c, c) + blocks.gam2 * np.outer(s, s)
    diag = (blocks.eps1 - blocks.gam1) * c**2 + (blocks.eps2 - blocks.gam2) * s**2
    gamma[np.diag_indices(m)] += diag
    min_eig = float(np.linalg.eigvalsh(gamma)[0])
    if min_eig <= 1e-10:
        raise NumericalError(
            f"homodyne covariance lost positive definiteness (min eig {min_eig:.3e})"
        )
    return gamma


def homodyne_cov_derivatives(blocks: FsgBlocks, theta_hd: float) -> list[np.ndarray]:
    """Derivatives of Gamma in each node phase, at zero prior.

    d Gamma / d theta_j has (j, j) entry (eps2 - eps1) sin(2 theta_hd),
    (j, k) entries (gam2 - gam1) sin(2 theta_hd) / 2 for k != j, zero
    elsewhere.
    """
    m = blocks.M
    s2 = np.sin(2.0 * theta_hd)
    diag = (blocks.eps2 - blocks.eps1) * s2
    off = 0.5 * (blocks.gam2 - blocks.gam1) * s2
    out = []
    for j in range(m):
        d = np.zeros((m, m))
        d[j, :] = off
        d[:, j] = off
        d[j, j] = diag
        out.append(d)
    return out


def homodyne_fim(blocks: FsgBlocks, theta_hd: float) -> StructuredFim:
    """Classical Fisher matrix of equal-angle homodyne detection.

    Dense evaluation of F_jk = Tr[G^-1 (d_j G) G^-1 (d_k G)] / 2, then
    collapsed to the a I + b J structure it provably has for FSG probes.
    """
    m = blocks.M
    gamma = homodyne_cov(blocks, theta_hd)
    derivs = homodyne_cov_derivatives(blocks, theta_hd)
    try:
        inv = np.linalg.inv(gamma)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"homodyne covariance inversion failed: {exc}") from exc
    prods = [inv @ d for d in derivs]
    fim = np.empty((m, m))
    for j in range(m):
        for k in range(j, m):
            fim[j, k] = fim[k, j] = 0.5 * np.sum(prods[j] * prods[k].T)
    diag = np.diag(fim)
    offs = fim[~np.eye(m, dtype=bool)]
    scale = max(1.0, float(np.max(np.abs(fim))))
    if np.ptp(diag) > 1e-8 * scale or np.ptp(offs) > 1e-8 * scale:
        raise NumericalError("homodyne Fisher matrix lost its a I + b J structure")
    b = float(np.mean(offs))
    a = float(np.mean(diag)) - b
    if -1e-12 * scale < a < 0.0:
        a = 0.0
    return StructuredFim(M=m, a=a, b=b)


def _angle_grid(blocks: FsgBlocks, thetas: np.ndarray):
    return kernels.homodyne_scan(
        blocks.eps1, blocks.eps2, blocks.gam1, blocks.gam2, blocks.M, thetas
    )


def _xi_from_ab(a, b, weights: WeightVector):
    """Vectorized precision 1 / Tr(W F^+) from structured coefficients."""
    m = weights.M
    if weights.is_mean:
        return m * (a + m * b)
    n2 = weights.norm2_sq
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(a > 0.0, 1.0 / (n2 / a - b / (a * (a + m * b))), 0.0)


def optimize_homodyne_angle(
    blocks: FsgBlocks, weights: WeightVector | None = None
) -> HomodyneOpt:
    """Best common homodyne angle in [0, pi).

    Primary criterion: maximize Tr(W F).  The direct criterion, maximizing
    the precision 1 / Tr(W F^+), is evaluated on the same grid as a
    cross-check; for uniform weights the two are algebraically identical.
    """
    m = blocks.M
    weights = weights if weights is not None else mean_weights(m)
    if weights.M != m:
        raise DomainError("weight vector size does not match the state")
    thetas = np.linspace(0.0, np.pi, ANGLE_GRID_POINTS, endpoint=False)
    a_arr, b_arr = _angle_grid(blocks, thetas)
    if float(np.max(np.abs(a_arr) + m * np.abs(b_arr))) <= 1e-14:
        raise DegenerateError("homodyne Fisher matrix vanishes for every angle")
    n2 = weights.norm2_sq
    proxy = n2 * a_arr + b_arr

    def proxy_at(th: float) -> float:
        a, b = _angle_grid(blocks, np.array([th]))
        return n2 * float(a[0]) + float(b[0])

    idx = int(np.argmax(proxy))
    lo = thetas[max(idx - 1, 0)]
    hi = thetas[min(idx + 1, ANGLE_GRID_POINTS - 1)]
    from .optimize import _golden_max  # late import to avoid a cycle

    theta_star, _, _ = _golden_max(proxy_at, lo, hi)
    if proxy[idx] > proxy_at(theta_star):
        theta_star = float(thetas[idx])
    fim = homodyne_fim(blocks, theta_star)
    xi_hd = precision(fim, weights)

    xi_arr = _xi_from_ab(a_arr, b_arr, weights)
    j = int(np.argmax(xi_arr))
    theta_direct = float(thetas[j])
    xi_direct = float(xi_arr[j])
    # the refined proxy angle must not lose precision against the best
    # grid point of the direct criterion (it may gain: the grid is coarse)
    consistent = xi_hd >= xi_direct - 1e-9 * max(1.0, xi_direct)
    return HomodyneOpt(
        theta_star=float(theta_star),
        fim=fim,
        xi_hd=float(xi_hd),
        theta_direct=theta_direct,
        xi_direct=xi_direct,
        proxy_consistent=bool(consistent),
    )


def homodyne_precision_ratio(M: int, n_th: float, N_tot: float) -> float:
    """Precision retained by homodyne detection on the privacy-optimal state.

    Ratio of the homodyne precision at the optimized angle to the
    collective-measurement precision of the same privacy-optimized state.
    """
    from .optimize import maximize_privacy

    result = maximize_privacy(M, n_th, N_tot)
    hd = optimize_homodyne_angle(result.blocks)
    return hd.xi_hd / result.xi


def mc_estimate(blocks: FsgBlocks, theta_hd: float, mc: McConfig) -> McReport:
    """Empirical check of the Cramér-Rao bound along the common direction.

    Each trial draws n_samples outcomes from N(0, Gamma), forms the 1-D
    maximum-likelihood estimate of the common phase on
    [-MLE_BRACKET, MLE_BRACKET], and the variance of the estimates over
    trials is compared with 1 / (n_samples * xi_hd), xi_hd = 1^T F 1.
    Trial k uses the generator seeded with (seed, k), so results are
    independent of scheduling and bitwise reproducible.
    """
    m = blocks.M
    gamma = homodyne_cov(blocks, theta_hd)
    try:
        chol = np.linalg.cholesky(gamma)
    except np.linalg.LinAlgError:
        vals, vecs = np.linalg.eigh(gamma)
        vals = np.where(vals < 1e-12, 0.0, vals)
        chol = vecs * np.sqrt(vals)

    tr_s = np.empty(mc.trials)
    sum_s = np.empty(mc.trials)
    for k in range(mc.trials):
        rng = np.random.default_rng([mc.seed, k])
        x = rng.standard_normal((mc.n_samples, m)) @ chol.T
        tr_s[k] = float(np.sum(x * x)) / mc.n_samples
        sum_s[k] = float(np.sum(x.sum(axis=1) ** 2)) / mc.n_samples

    theta_hat, boundary = kernels.mle_trials(
        tr_s, sum_s, m, mc.n_samples,
        blocks.eps1, blocks.eps2, blocks.gam1, blocks.gam2,
        theta_hd, -MLE_BRACKET, MLE_BRACKET, _MLE_GRID, 1e-10,
    )
    if np.any(boundary):
        first = int(np.flatnonzero(boundary)[0])
        raise ConvergenceError(
            f"likelihood search hit the bracket boundary in trial {first}"
        )

    empirical_var = float(np.var(theta_hat, ddof=1))
    fim = homodyne_fim(blocks, theta_hd)
    xi_hd = float(m * (fim.a + m * fim.b))
    if xi_hd <= 0.0:
        raise DegenerateError("homodyne Fisher information vanishes at this angle")
    crb = 1.0 / (mc.n_samples * xi_hd)
    dof = mc.trials - 1
    ci95 = (
        float(dof * empirical_var / stats.chi2.ppf(0.975, dof)),
        float(dof * empirical_var / stats.chi2.ppf(0.025, dof)),
    )
    return McReport(
        empirical_var=empirical_var,
        crb=crb,
        ratio=empirical_var / crb,
        ci95=ci95,
        xi_hd=xi_hd,
    )
