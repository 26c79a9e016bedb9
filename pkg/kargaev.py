"""Perturbed-integer sequences with a spectral gap.

Solves f + Rf = g on the circle by contraction iteration, where

    (Rf)(t) = sum_n e^{2 pi i n t} (e^{2 pi i f^(n) t} - 1 - 2 pi i f^(n) t) / (2 pi i t),

then reads off alpha(n) = f^(n). The signed-interval function F built from alpha
(F_n = +-indicator of the interval between n and n + alpha(n)) has F^(-t) = g(t) on the
circle, so F^ vanishes wherever g does.
"""

import logging
from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np

try:
    from .circle_space import (CircleFunction, CircleGrid, CoeffSeq, fourier_coeffs, sup_norm,
                               synthesize)
    from .errors import (AllZeroAlpha, AlphaOutOfBounds, AmplitudeTooLarge, BallEscape,
                         NoConvergence, ParamsInvalid)
except ImportError:
    from circle_space import (CircleFunction, CircleGrid, CoeffSeq, fourier_coeffs, sup_norm,
                              synthesize)
    from errors import (AllZeroAlpha, AlphaOutOfBounds, AmplitudeTooLarge, BallEscape,
                        NoConvergence, ParamsInvalid)

logger = logging.getLogger(__name__)

# Power-series truncation for R: stop once the analytic bound on the next term is below this
SERIES_TOL = 1e-18
MAX_SERIES_TERMS = 60
GAP_MARGIN = 0.05
_BLOCK = 64


@dataclass(frozen=True)
class SolverParams:
    a: float = 0.1
    eps: float = 0.01
    c: float = 0.1
    N: int = 512
    grid: CircleGrid = field(default_factory=CircleGrid)
    fp_tol: float = 1e-12
    max_iter: int = 200

    def __post_init__(self):
        self.validate()

    def validate(self):
        """Raise ParamsInvalid naming the first violated constraint."""
        constraints = [
            (0 < self.a < 0.5, f"0 < a < 1/2 (a = {self.a})"),
            (self.eps > 0, f"eps > 0 (eps = {self.eps})"),
            (2 * np.pi * self.eps < 1, f"2*pi*eps < 1 (2*pi*eps = {2 * np.pi * self.eps:.6g})"),
            (2 * self.eps < self.c, f"2*eps < c (2*eps = {2 * self.eps:.6g}, c = {self.c})"),
            (2 * np.pi * self.c < 1, f"2*pi*c < 1 (2*pi*c = {2 * np.pi * self.c:.6g})"),
            (0 <= self.N < self.grid.M / 2, f"N < M/2 (N = {self.N}, M = {self.grid.M})"),
            (self.fp_tol > 0, f"fp_tol > 0 (fp_tol = {self.fp_tol})"),
            (self.max_iter >= 1, f"max_iter >= 1 (max_iter = {self.max_iter})"),
        ]
        for ok, text in constraints:
            if not ok:
                raise ParamsInvalid(f"Violated constraint {text}")

    @property
    def rho(self) -> float:
        """Contraction constant on the c-ball."""
        return 2 * np.pi * self.c

    @property
    def rho_ball(self) -> float:
        """Lipschitz constant of H f = g - Rf on B = {||f - g|| <= eps} (||f|| <= 2 eps there)."""
        return 4 * np.pi * self.eps


@dataclass(frozen=True, eq=False)
class KargaevSolution:
    f: CircleFunction
    alpha: CoeffSeq
    g: CircleFunction
    residual: float
    iterations: int
    ratio_trace: Tuple[float, ...]
    diff_trace: Tuple[float, ...]
    params: SolverParams


def target_g_value(t, a: float, amplitude: float) -> np.ndarray:
    """Closed form of the raised-cosine target, zero on (-a, a)."""
    u = np.abs(np.asarray(t, dtype=float))
    window = np.sin(np.pi * (u - a) / (0.5 - a)) ** 2
    return np.where(u >= a, amplitude * window, 0.0)


def make_target_g(params: SolverParams, amplitude: float) -> CircleFunction:
    if amplitude >= params.eps / 2:
        raise AmplitudeTooLarge(f"amplitude {amplitude} must be < eps/2 = {params.eps / 2}")
    if amplitude <= 0:
        raise ValueError(f"amplitude must be positive, got {amplitude}")
    grid = params.grid
    return CircleFunction(grid, target_g_value(grid.points, params.a, amplitude).astype(complex))


def alpha_lookup(alpha: CoeffSeq, n) -> np.ndarray:
    """alpha(n) for integer arrays n, zero outside |n| <= N."""
    n = np.asarray(n, dtype=np.int64)
    inside = np.abs(n) <= alpha.N
    idx = np.clip(n + alpha.N, 0, len(alpha.values) - 1)
    return np.where(inside, alpha.values[idx], 0.0)


def _quadratic_remainder_over_t(theta, two_pi_t):
    # (e^{i theta} - 1 - i theta) / (2 pi i t) without cancellation for small theta
    numer = -2.0 * np.sin(theta / 2) ** 2 + 1j * (np.sin(theta) - theta)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = numer / (1j * two_pi_t)
    return np.where(two_pi_t == 0, 0.0, out)


def _linear_remainder_over_t(theta, two_pi_t, alpha_values):
    # (e^{i theta} - 1) / (2 pi i t), limit alpha at t = 0
    numer = -2.0 * np.sin(theta / 2) ** 2 + 1j * np.sin(theta)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = numer / (1j * two_pi_t)
    return np.where(two_pi_t == 0, alpha_values + 0j, out)


def apply_R_coeffs(alpha: CoeffSeq, t) -> np.ndarray:
    """Term-by-term evaluation of (Rf)(t) from alpha = f^ at arbitrary points t."""
    t = np.atleast_1d(np.asarray(t, dtype=float))
    n = alpha.indices
    out = np.zeros(len(t), dtype=complex)
    for start in range(0, len(t), _BLOCK):
        tb = t[start:start + _BLOCK][:, None]
        two_pi_t = 2 * np.pi * tb
        theta = two_pi_t * alpha.values[None, :]
        terms = np.exp(1j * two_pi_t * n[None, :]) * _quadratic_remainder_over_t(theta, two_pi_t)
        out[start:start + len(tb)] = terms.sum(axis=1)
    return out


def _apply_R_series(alpha: CoeffSeq, grid: CircleGrid) -> np.ndarray:
    """Rf on the grid as sum_{k>=2} (2 pi i t)^{k-1}/k! * sum_n alpha_n^k e^{2 pi i n t}."""
    peak = alpha.max_abs
    mass = alpha.mass
    z = 2j * np.pi * grid.points
    total = np.zeros(grid.M, dtype=complex)
    power = alpha.values ** 2
    zpow = z
    factorial = 2.0
    k = 2
    while True:
        moment = synthesize(CoeffSeq(alpha.N, power), grid).samples
        total += zpow * moment / factorial
        k += 1
        factorial *= k
        power = power * alpha.values
        zpow = zpow * z
        if np.pi ** (k - 1) * peak ** (k - 2) * mass / factorial < SERIES_TOL:
            break
        if k > MAX_SERIES_TERMS:
            logger.warning(f"R power series stopped at {MAX_SERIES_TERMS} terms (max|alpha| = {peak:.3g})")
            break
    return total


def apply_R(f: CircleFunction, N: int) -> CircleFunction:
    """The nonlinear map R, truncated to |n| <= N."""
    alpha = fourier_coeffs(f, N)
    if alpha.max_abs == 0:
        return CircleFunction.zeros(f.grid)
    if np.pi * alpha.max_abs > 1:
        # series converges too slowly, sum the terms directly
        return CircleFunction(f.grid, apply_R_coeffs(alpha, f.grid.points))
    return CircleFunction(f.grid, _apply_R_series(alpha, f.grid))


def apply_R_direct(f: CircleFunction, N: int) -> CircleFunction:
    """O(N*M) term-by-term evaluation of R on the grid, independent of the FFT path."""
    return CircleFunction(f.grid, apply_R_coeffs(fourier_coeffs(f, N), f.grid.points))


def R_tail_bound(f: CircleFunction, N: int) -> float:
    """(pi/2) * sum_{N<|n|<=2N} f^(n)^2, the mass R discards at cutoff N, measured at 2N."""
    if 2 * N >= f.grid.M / 2:
        return float("nan")
    wide = fourier_coeffs(f, 2 * N)
    outer = np.abs(wide.indices) > N
    return float(np.pi / 2 * np.sum(wide.values[outer] ** 2))


def fixed_point_residual(f: CircleFunction, g: CircleFunction, N: int, direct: bool = False) -> float:
    """Grid sup of |f + Rf - g|."""
    rf = apply_R_direct(f, N) if direct else apply_R(f, N)
    return float(np.max(np.abs(f.samples + rf.samples - g.samples)))


def solve_fixed_point(g: CircleFunction, params: SolverParams) -> KargaevSolution:
    """Iterate f_{k+1} = g - R f_k from f_0 = g inside the ball B = {||f - g|| <= eps}."""
    params.validate()
    if g.grid.M != params.grid.M:
        raise ParamsInvalid(f"Target sampled on M={g.grid.M}, solver configured for M={params.grid.M}")
    g_norm = sup_norm(g)
    if g_norm > params.eps:
        raise ParamsInvalid(f"Violated constraint ||g|| <= eps (||g|| = {g_norm:.6g}, eps = {params.eps})")

    stop = params.fp_tol * (1 - params.rho_ball)
    f = g
    diffs, ratios = [], []
    converged = False
    for iteration in range(1, params.max_iter + 1):
        f_next = g - apply_R(f, params.N)
        diff = sup_norm(f_next - f)
        distance = sup_norm(f_next - g)
        if distance > params.eps:
            raise BallEscape(f"Iterate {iteration} left the ball: ||f - g|| = {distance:.6g} > eps = {params.eps}")
        if diffs and diffs[-1] > 0:
            ratios.append(diff / diffs[-1])
        diffs.append(diff)
        logger.debug(f"iteration {iteration}: ||f_k+1 - f_k|| = {diff:.3e}, ||f - g|| = {distance:.3e}")
        f = f_next
        if diff <= stop:
            converged = True
            break

    residual = fixed_point_residual(f, g, params.N)
    if not converged:
        raise NoConvergence(
            f"No convergence after {params.max_iter} iterations (residual {residual:.3e} > fp_tol {params.fp_tol:.1e})",
            residual=residual, iterations=params.max_iter)

    alpha = fourier_coeffs(f, params.N)
    logger.info(f"Fixed point found in {len(diffs)} iterations, residual {residual:.3e}, max|alpha| = {alpha.max_abs:.6g}")
    return KargaevSolution(f=f, alpha=alpha, g=g, residual=residual, iterations=len(diffs),
                           ratio_trace=tuple(ratios), diff_trace=tuple(diffs), params=params)


def decay_check(alpha: CoeffSeq) -> bool:
    """Soft check that alpha(n) -> 0: the outer half never beats the inner half."""
    half = alpha.N // 2
    outer = np.abs(alpha.indices) > half
    if not outer.any():
        return True
    return float(np.max(np.abs(alpha.values[outer]))) <= float(np.max(np.abs(alpha.values[~outer])))


def alpha_sequence(sol: KargaevSolution) -> CoeffSeq:
    alpha = sol.alpha
    peak = alpha.max_abs
    if peak == 0:
        raise AllZeroAlpha("alpha is identically zero (was g = 0 passed to the solver?)")
    if peak >= sol.params.eps:
        raise AlphaOutOfBounds(f"max|alpha| = {peak:.6g} is not below eps = {sol.params.eps}")
    if not decay_check(alpha):
        logger.warning("alpha does not decay: outer coefficients exceed the inner block")
    return alpha


def asymmetry(alpha: CoeffSeq) -> float:
    """max_n |alpha(n) - alpha(-n)|."""
    return float(np.max(np.abs(alpha.values - alpha.values[::-1])))


def f_hat_partial(alpha: CoeffSeq, t, N: Optional[int] = None) -> np.ndarray:
    """Partial sum of F^(-t): sum_{|n|<=N} e^{2 pi i n t} (e^{2 pi i alpha(n) t} - 1)/(2 pi i t)."""
    if N is not None and N != alpha.N:
        alpha = alpha.truncate(N)
    scalar = np.ndim(t) == 0
    t = np.atleast_1d(np.asarray(t, dtype=float))
    n = alpha.indices
    out = np.zeros(len(t), dtype=complex)
    for start in range(0, len(t), _BLOCK):
        tb = t[start:start + _BLOCK][:, None]
        two_pi_t = 2 * np.pi * tb
        theta = two_pi_t * alpha.values[None, :]
        ratio = _linear_remainder_over_t(theta, two_pi_t, alpha.values[None, :])
        out[start:start + len(tb)] = (np.exp(1j * two_pi_t * n[None, :]) * ratio).sum(axis=1)
    return out[0] if scalar else out


def gap_grid(a: float, grid_pts: int, margin: float = GAP_MARGIN) -> np.ndarray:
    half = (1 - margin) * a
    return np.linspace(-half, half, grid_pts)


def gap_residual(alpha: CoeffSeq, a: float, grid_pts: int = 2001, margin: float = GAP_MARGIN) -> float:
    """Measured spectral-gap defect: sup |F^| over a uniform grid of (-a, a) minus end margins."""
    t = gap_grid(a, grid_pts, margin)
    return float(np.max(np.abs(f_hat_partial(alpha, -t))))


def interval_function(alpha: CoeffSeq, x) -> np.ndarray:
    """F(x) = sum_n F_n(x), F_n = 1 on [n, n + alpha(n)] or -1 on [n + alpha(n), n]."""
    x = np.asarray(x, dtype=float)

    def piece(n):
        a = alpha_lookup(alpha, n)
        pos = (a > 0) & (x >= n) & (x <= n + a)
        neg = (a < 0) & (x >= n + a) & (x <= n)
        return pos.astype(float) - neg.astype(float)

    lo = np.floor(x).astype(np.int64)
    hi = np.ceil(x).astype(np.int64)
    return piece(lo) + np.where(hi != lo, piece(hi), 0.0)


def interval_function_mass(alpha: CoeffSeq) -> float:
    """Integral of F, i.e. sum alpha(n) = F^(0)."""
    return float(np.sum(alpha.values))


def lemma_inequalities(theta) -> Tuple[np.ndarray, np.ndarray]:
    """Slacks of |e^{i theta} - 1| <= |theta| and |e^{i theta} - 1 - i theta| <= theta^2 / 2."""
    theta = np.asarray(theta, dtype=float)
    first = np.abs(theta) - np.abs(np.exp(1j * theta) - 1)
    second = theta ** 2 / 2 - np.abs(np.exp(1j * theta) - 1 - 1j * theta)
    return first, second


def random_operator_checks(params: SolverParams, seed: int, count: int = 20, degree: int = 16) -> dict:
    """Seeded spot checks of the operator bound and the contraction bound on the solver grid.

    Draws `count` trig polynomials of degree min(degree, N) scaled to sum |c| <= 0.15 for
    sup |Rf| <= (pi/2) sum f^(n)^2, and `count` pairs scaled into the c-ball for
    ||Rf - Rh|| <= 2 pi c ||f - h||.
    """
    rng = np.random.default_rng(seed)
    n = min(degree, params.N)

    def draw(bound):
        values = rng.uniform(-1, 1, 2 * n + 1)
        return synthesize(CoeffSeq(n, values * bound / np.sum(np.abs(values))), params.grid)

    operator_excess, contraction_ratio = -np.inf, 0.0
    for _ in range(count):
        f = draw(0.15)
        bound = np.pi / 2 * fourier_coeffs(f, n).mass
        operator_excess = max(operator_excess, sup_norm(apply_R(f, params.N)) - bound)

        f, h = draw(params.c), draw(params.c)
        d = sup_norm(f - h)
        if d > 0:
            ratio = sup_norm(apply_R(f, params.N) - apply_R(h, params.N)) / d
            contraction_ratio = max(contraction_ratio, ratio)

    passed = operator_excess <= 1e-9 and contraction_ratio <= params.rho + 1e-9
    logger.info(f"Random operator checks (seed {seed}, {count} draws): excess {operator_excess:.3e}, "
                f"ratio {contraction_ratio:.4f} vs rho {params.rho:.4f}")
    return {
        "seed": seed,
        "count": count,
        "operator_excess": float(operator_excess),
        "contraction_ratio": float(contraction_ratio),
        "rho": params.rho,
        "passed": bool(passed),
    }
