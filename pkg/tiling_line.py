"""Tilings of the real line by a bandlimited kernel along Lambda = {n + alpha(n)}.

When F^ vanishes on (-a, a), the point measure of Lambda has Fourier transform equal to
delta_0 there, so any nonnegative kernel with integral one and spectrum inside (-a, a)
sums to exactly one along Lambda. The sums here are truncated to a radius and every
residual is reported together with an analytic bound on the omitted mass.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

try:
    from .circle_space import CoeffSeq
    from .errors import BandwidthExceedsGap, PerturbationTooLarge
    from .kargaev import alpha_lookup
except ImportError:
    from circle_space import CoeffSeq
    from errors import BandwidthExceedsGap, PerturbationTooLarge
    from kargaev import alpha_lookup

logger = logging.getLogger(__name__)

FAMILIES = ("fejer", "jackson")
DEFAULT_WINDOW = 2048
DEFAULT_SPAN = 100.0
DEFAULT_XCOUNT = 4001
DEFAULT_RADIUS = {"fejer": 1e4, "jackson": 1e3}
_XBLOCK = 64


@dataclass(frozen=True)
class Kernel:
    """Nonnegative bandlimited tile: fejer b sinc^2(bx) or jackson (3b/4) sinc^4(bx/2).

    `scale` multiplies the kernel (its integral, hence the tiling level). A nonzero
    `shift` mixes in a translate, (K(x) + K(x - shift))/2, which removes the zeros.
    """
    family: str = "fejer"
    b: float = 0.08
    scale: float = 1.0
    shift: float = 0.0

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"Unknown kernel family '{self.family}', expected one of {FAMILIES}")
        if self.b <= 0:
            raise ValueError(f"Kernel bandwidth must be positive, got b={self.b}")

    def __call__(self, x):
        return kernel_eval(self, x)

    def _base(self, u):
        if self.family == "fejer":
            return self.b * np.sinc(self.b * u) ** 2
        return 0.75 * self.b * np.sinc(self.b * u / 2) ** 4

    def fourier_transform(self, t):
        """Closed-form K^(t), supported in [-b, b]."""
        t = np.asarray(t, dtype=float)
        if self.family == "fejer":
            base = np.maximum(0.0, 1 - np.abs(t) / self.b)
        else:
            y = 2 * np.abs(t) / self.b
            # (3/b) * (tent_{b/2} * tent_{b/2})(t), a cubic B-spline
            base = np.where(y <= 1, (4 - 6 * y ** 2 + 3 * y ** 3) / 4,
                            np.where(y <= 2, (2 - y) ** 3 / 4, 0.0))
        if self.shift:
            return self.scale * base * (1 + np.exp(-2j * np.pi * self.shift * t)) / 2
        return self.scale * base

    def tail_bound(self, radius: float) -> float:
        """Bound on sum_{|x - lambda| > radius} K(x - lambda) for sets with <= 2 points per unit."""
        reach = radius - abs(self.shift) - 1
        if reach <= 0:
            return float("inf")
        if self.family == "fejer":
            # K(u) <= 1/(pi^2 b u^2)
            return self.scale * 4 / (np.pi ** 2 * self.b * reach)
        # K(u) <= 12/(pi^4 b^3 u^4)
        return self.scale * 16 / (np.pi ** 4 * self.b ** 3 * reach ** 3)


def kernel_eval(K: Kernel, x):
    x = np.asarray(x, dtype=float)
    value = K._base(x)
    if K.shift:
        value = 0.5 * (value + K._base(x - K.shift))
    return K.scale * value


@dataclass(frozen=True, eq=False)
class TranslationSet:
    """lambda(n) = n + alpha(n); alpha vanishes for |n| > N, so lambda(n) = n there."""
    alpha: CoeffSeq
    W: int = DEFAULT_WINDOW
    gap: Optional[float] = None

    def __post_init__(self):
        if self.alpha.max_abs >= 0.5:
            raise PerturbationTooLarge(f"max|alpha| = {self.alpha.max_abs:.6g} must be < 1/2")
        if self.W < self.alpha.N:
            raise ValueError(f"Enumeration window W={self.W} must cover the perturbation window N={self.alpha.N}")

    @property
    def N(self) -> int:
        return self.alpha.N

    @property
    def effective_gap(self) -> Optional[float]:
        """Half-width of the known spectral gap of the point measure."""
        if self.gap is not None:
            return self.gap
        if self.alpha.max_abs == 0:
            return 1.0
        return None

    def lam(self, n) -> np.ndarray:
        n = np.asarray(n, dtype=np.int64)
        return n + alpha_lookup(self.alpha, n)

    def enumerate(self) -> Tuple[np.ndarray, np.ndarray]:
        n = np.arange(-self.W, self.W + 1)
        return n, self.lam(n)

    def points(self, lo: float, hi: float) -> np.ndarray:
        n = np.arange(int(np.floor(lo)) - 1, int(np.ceil(hi)) + 2)
        lam = self.lam(n)
        return lam[(lam >= lo) & (lam <= hi)]


@dataclass(frozen=True, eq=False)
class FinitePointSet:
    """A finite discrete set, for checks that need arbitrary points."""
    values: Tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(sorted(float(v) for v in self.values)))

    @property
    def effective_gap(self) -> Optional[float]:
        return None

    def points(self, lo: float, hi: float) -> np.ndarray:
        arr = np.asarray(self.values)
        return arr[(arr >= lo) & (arr <= hi)]


def build_lambda(alpha: CoeffSeq, W: Optional[int] = None, gap: Optional[float] = None) -> TranslationSet:
    """Lambda over the enumeration window W (default max(2048, N))."""
    return TranslationSet(alpha=alpha, W=max(DEFAULT_WINDOW, alpha.N) if W is None else W, gap=gap)


def integers(W: int = DEFAULT_WINDOW) -> TranslationSet:
    return TranslationSet(alpha=CoeffSeq.zeros(0), W=W, gap=1.0)


def is_strictly_increasing(L: TranslationSet) -> bool:
    _, lam = L.enumerate()
    return bool(np.all(np.diff(lam) > 0))


def max_points_per_unit(L: TranslationSet) -> int:
    """Largest #(Lambda cap [x, x+1)) over the enumeration window."""
    _, lam = L.enumerate()
    ends = np.searchsorted(lam, lam + 1, side="left")
    return int(np.max(ends - np.arange(len(lam))))


def tiling_sum(K: Kernel, L, x, radius: float):
    """sum_{|lambda - x| <= radius} K(x - lambda) and the bound on the omitted mass."""
    scalar = np.ndim(x) == 0
    x = np.atleast_1d(np.asarray(x, dtype=float))
    tail = K.tail_bound(radius)
    out = np.zeros(len(x))
    if isinstance(L, TranslationSet):
        reach = int(np.ceil(radius)) + 1
        k = np.arange(-reach, reach + 1)
        for start in range(0, len(x), _XBLOCK):
            xb = x[start:start + _XBLOCK]
            n = np.floor(xb).astype(np.int64)[:, None] + k[None, :]
            u = xb[:, None] - L.lam(n)
            values = np.where(np.abs(u) <= radius, kernel_eval(K, u), 0.0)
            out[start:start + len(xb)] = values.sum(axis=1)
    else:
        for i, xi in enumerate(x):
            out[i] = float(np.sum(kernel_eval(K, xi - L.points(xi - radius, xi + radius))))
    if scalar:
        return float(out[0]), tail
    return out, tail


@dataclass(frozen=True)
class TilingReport:
    sup_residual: float
    tail_bound: float
    level_estimate: float
    worst_x: float
    xcount: int
    span: float
    radius: float
    family: str
    b: float
    x: np.ndarray = field(default=None, repr=False, compare=False)
    deviation: np.ndarray = field(default=None, repr=False, compare=False)

    def to_dict(self) -> Dict:
        return {
            "sup_residual": self.sup_residual,
            "tail_bound": self.tail_bound,
            "level_estimate": self.level_estimate,
            "worst_x": self.worst_x,
            "x_grid": {"xcount": self.xcount, "span": self.span},
            "radius": self.radius,
            "kernel": {"family": self.family, "b": self.b},
        }


def tiling_residual(K: Kernel, L, xcount: int = DEFAULT_XCOUNT, span: float = DEFAULT_SPAN,
                    radius: Optional[float] = None, level: float = 1.0) -> TilingReport:
    """sup over xcount uniform points of [-span, span] of |sum_lambda K(x - lambda) - level|."""
    radius = DEFAULT_RADIUS[K.family] if radius is None else radius
    gap = getattr(L, "effective_gap", None)
    if gap is not None and K.b >= gap:
        logger.warning(f"Kernel bandwidth b={K.b} is not inside the spectral gap (-{gap}, {gap})")
    x = np.linspace(-span, span, xcount)
    values, tail = tiling_sum(K, L, x, radius)
    deviation = np.abs(values - level)
    worst = int(np.argmax(deviation))
    report = TilingReport(sup_residual=float(deviation[worst]), tail_bound=float(tail),
                          level_estimate=float(np.mean(values)), worst_x=float(x[worst]),
                          xcount=xcount, span=span, radius=radius, family=K.family, b=K.b,
                          x=x, deviation=deviation)
    logger.debug(f"tiling residual ({K.family}, b={K.b}, radius={radius}): {report.sup_residual:.3e} (tail <= {tail:.3e})")
    return report


def delta_gap_test(L, K: Kernel, xcount: int = DEFAULT_XCOUNT, span: float = DEFAULT_SPAN,
                   radius: Optional[float] = None, a: Optional[float] = None) -> float:
    """Witness that the transform of the point measure is delta_0 near 0.

    Meant to run with a different kernel family than the tiling certificate.
    """
    gap = a if a is not None else getattr(L, "effective_gap", None)
    if gap is not None and K.b >= gap:
        raise BandwidthExceedsGap(f"Kernel bandwidth b={K.b} must be < gap half-width a={gap}")
    return tiling_residual(K, L, xcount=xcount, span=span, radius=radius).sup_residual


def companion_residual(K: Kernel, xcount: int = DEFAULT_XCOUNT, span: float = DEFAULT_SPAN,
                       radius: Optional[float] = None) -> TilingReport:
    """The same kernel along the integers: the tile also admits a periodic tiling."""
    return tiling_residual(K, integers(), xcount=xcount, span=span, radius=radius)


@dataclass(frozen=True)
class NonperiodicityReport:
    verdict: str
    witness: Optional[int]
    witness_value: float
    checks: Dict[str, bool]
    claim: str

    @property
    def passed(self) -> bool:
        return self.verdict == "PASS"

    def to_dict(self) -> Dict:
        return {"verdict": self.verdict, "witness": self.witness, "witness_value": self.witness_value,
                "checks": dict(self.checks), "claim": self.claim}


def nonperiodicity_certificate(L: TranslationSet) -> NonperiodicityReport:
    alpha = L.alpha
    peak = alpha.max_abs
    checks = {
        "nonzero_perturbation": peak > 0,
        "compact_perturbation": alpha.N <= L.W and bool(np.all(np.isfinite(alpha.values))),
        "perturbation_below_half": peak < 0.5,
    }
    passed = all(checks.values())
    witness = alpha.argmax if peak > 0 else None
    witness_value = alpha[witness] if witness is not None else 0.0
    if passed:
        claim = (f"lambda({witness}) = {witness} + {witness_value!r} is not an integer, and lambda(n) = n for "
                 f"|n| > {alpha.N}. A periodic subset P of Lambda with period tau containing a non-integer "
                 f"point p would contain p + k*tau and p + (k+1)*tau in Z for large k, forcing tau in Z and "
                 f"p in Z. So every periodic subset of Lambda lies in Z, Lambda is not contained in Z, and "
                 f"Lambda is not a finite union of periodic sets.")
    elif not checks["nonzero_perturbation"]:
        claim = "alpha vanishes identically: Lambda = Z is periodic."
    else:
        failed = ", ".join(name for name, ok in checks.items() if not ok)
        claim = f"certificate preconditions failed: {failed}"
    return NonperiodicityReport(verdict="PASS" if passed else "FAIL", witness=witness,
                                witness_value=float(witness_value), checks=checks, claim=claim)


def gap_alphabet(L: TranslationSet, window: int, round_tol: float = 1e-9) -> List[float]:
    """Distinct successive differences lambda(n+1) - lambda(n), -window <= n < window."""
    if window > L.W:
        raise ValueError(f"window {window} exceeds the enumeration window W={L.W}")
    n = np.arange(-window, window)
    diffs = np.sort(L.lam(n + 1) - L.lam(n))
    alphabet: List[float] = []
    for d in diffs:
        if not alphabet or d - alphabet[-1] > round_tol:
            alphabet.append(float(d))
    return alphabet


def alphabet_growth(L: TranslationSet, windows: Sequence[int] = (64, 128, 256),
                    round_tol: float = 1e-9) -> Dict[int, int]:
    return {int(w): len(gap_alphabet(L, w, round_tol)) for w in windows}


def windowed_spectrum(L, t, radius: float) -> np.ndarray:
    """(1/R) sum_lambda (1 - |lambda|/R)_+ e^{-2 pi i lambda t}, a smoothed look at the point measure's transform."""
    scalar = np.ndim(t) == 0
    t = np.atleast_1d(np.asarray(t, dtype=float))
    lam = L.points(-radius, radius)
    weights = 1 - np.abs(lam) / radius
    out = np.empty(len(t), dtype=complex)
    for start in range(0, len(t), _XBLOCK):
        tb = t[start:start + _XBLOCK]
        out[start:start + len(tb)] = np.exp(-2j * np.pi * np.outer(tb, lam)) @ weights / radius
    return out[0] if scalar else out


def enumerate_rows(L: TranslationSet) -> Iterable[Tuple[int, float]]:
    n, lam = L.enumerate()
    return zip(n.tolist(), lam.tolist())
