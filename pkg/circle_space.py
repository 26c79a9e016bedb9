"""Sampled Hermitian functions on the circle I = [-1/2, 1/2].

Elements of the real Banach space X (continuous f with f(-t) = conj f(t), sup norm)
are represented by their values on a uniform grid. Fourier coefficients are taken
with the trapezoid rule, i.e. a scaled DFT, which is exact for trigonometric
polynomials of degree < M/2.
"""

import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Dict, Optional

import numpy as np

try:
    from .errors import NyquistViolation, SymmetryViolation
except ImportError:
    from errors import NyquistViolation, SymmetryViolation

logger = logging.getLogger(__name__)

DEFAULT_M = 8192
DEFAULT_N = 512
SYMTOL = 1e-10
NUMTOL = 1e-9

# Rows per block for the O(N*M) direct sums, keeps temporaries around 16 MB
_DIRECT_BLOCK = 128


def _readonly(array):
    array = np.array(array, copy=True)
    array.setflags(write=False)
    return array


def _alternating_sign(n):
    return np.where(n % 2 == 0, 1.0, -1.0)


@dataclass(frozen=True)
class CircleGrid:
    """Uniform grid t_j = -1/2 + j/M, j = 0..M-1."""
    M: int = DEFAULT_M

    def __post_init__(self):
        if self.M < 4 or self.M % 2:
            raise ValueError(f"Grid size must be an even integer >= 4, got M={self.M}")

    @cached_property
    def points(self) -> np.ndarray:
        # (j - M/2)/M keeps mirrored points exact negations of each other
        return _readonly((np.arange(self.M) - self.M // 2) / self.M)

    @cached_property
    def mirror(self) -> np.ndarray:
        """Index of -t_j on the grid (t_0 = -1/2 maps to itself)."""
        return _readonly((self.M - np.arange(self.M)) % self.M)

    def mirror_index(self, j: int) -> int:
        return (self.M - j) % self.M

    @property
    def step(self) -> float:
        return 1.0 / self.M

    @property
    def zero_index(self) -> int:
        return self.M // 2


@dataclass(frozen=True, eq=False)
class CoeffSeq:
    """Real coefficients indexed n = -N..N."""
    N: int
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.shape != (2 * self.N + 1,):
            raise ValueError(f"Expected {2 * self.N + 1} coefficients for N={self.N}, got shape {values.shape}")
        object.__setattr__(self, "values", _readonly(values))

    @classmethod
    def zeros(cls, N: int) -> "CoeffSeq":
        return cls(N, np.zeros(2 * N + 1))

    @classmethod
    def from_mapping(cls, mapping: Dict[int, float], N: Optional[int] = None) -> "CoeffSeq":
        if N is None:
            N = max((abs(n) for n in mapping), default=0)
        values = np.zeros(2 * N + 1)
        for n, v in mapping.items():
            if abs(n) > N:
                raise ValueError(f"Index {n} outside cutoff N={N}")
            values[n + N] = v
        return cls(N, values)

    @property
    def indices(self) -> np.ndarray:
        return np.arange(-self.N, self.N + 1)

    def __getitem__(self, n: int) -> float:
        if abs(n) > self.N:
            return 0.0
        return float(self.values[n + self.N])

    def __len__(self):
        return len(self.values)

    @property
    def mass(self) -> float:
        """Sum of squares (the l2 mass)."""
        return float(np.sum(self.values ** 2))

    @property
    def max_abs(self) -> float:
        return float(np.max(np.abs(self.values))) if len(self.values) else 0.0

    @property
    def argmax(self) -> int:
        return int(self.indices[np.argmax(np.abs(self.values))])

    def truncate(self, N: int) -> "CoeffSeq":
        if N >= self.N:
            return CoeffSeq(N, np.pad(self.values, N - self.N))
        return CoeffSeq(N, self.values[self.N - N:self.N + N + 1])

    def with_value(self, n: int, value: float) -> "CoeffSeq":
        values = np.array(self.values)
        values[n + self.N] = value
        return CoeffSeq(self.N, values)


@dataclass(frozen=True, eq=False)
class CircleFunction:
    """A continuous Hermitian-symmetric function sampled on a CircleGrid."""
    grid: CircleGrid
    samples: np.ndarray
    symtol: float = field(default=SYMTOL, compare=False)

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=complex)
        if samples.shape != (self.grid.M,):
            raise ValueError(f"Expected {self.grid.M} samples, got shape {samples.shape}")
        object.__setattr__(self, "samples", _readonly(samples))
        defect = hermitian_defect(self)
        if defect > self.symtol:
            raise SymmetryViolation(f"f(-t) != conj f(t): defect {defect:.3e} exceeds symtol {self.symtol:.1e}")

    @classmethod
    def from_callable(cls, grid: CircleGrid, fn: Callable[[np.ndarray], np.ndarray]) -> "CircleFunction":
        return cls(grid, fn(grid.points))

    @classmethod
    def zeros(cls, grid: CircleGrid) -> "CircleFunction":
        return cls(grid, np.zeros(grid.M, dtype=complex))

    def __add__(self, other: "CircleFunction") -> "CircleFunction":
        return CircleFunction(self.grid, self.samples + other.samples)

    def __sub__(self, other: "CircleFunction") -> "CircleFunction":
        return CircleFunction(self.grid, self.samples - other.samples)

    def scaled(self, factor: float) -> "CircleFunction":
        return CircleFunction(self.grid, self.samples * factor)


def hermitian_defect(f: CircleFunction) -> float:
    """max_j |f(-t_j) - conj f(t_j)| over the interior grid points.

    t_0 = -1/2 has no partner on the half-open grid and is left out; elements of X
    need not agree at the two endpoints.
    """
    s = f.samples
    mirrored = s[f.grid.mirror]
    return float(np.max(np.abs(mirrored[1:] - np.conj(s[1:]))))


def sup_norm(f: CircleFunction) -> float:
    """Grid maximum of |f|. A lower bound for the true supremum, see sup_norm_gap_bound."""
    return float(np.max(np.abs(f.samples)))


def sup_norm_gap_bound(c: CoeffSeq, M: int) -> float:
    """Bound on how far the grid sup of a degree-N polynomial can fall below its true sup.

    Bernstein: |f'| <= 2 pi N sum|c(n)|, and every t is within 1/(2M) of the grid.
    """
    return float(np.pi * c.N * np.sum(np.abs(c.values)) / M)


def _trapezoid_samples(f: CircleFunction) -> np.ndarray:
    # Closed-interval trapezoid rule: the endpoint weight goes to (f(-1/2) + f(1/2))/2,
    # which is Re f(-1/2) for Hermitian f
    samples = np.array(f.samples)
    samples[0] = samples[0].real
    return samples


def _check_nyquist(N: int, M: int):
    if N >= M / 2:
        raise NyquistViolation(f"Cutoff N={N} must be < M/2 = {M // 2}")


def fourier_coeffs(f: CircleFunction, N: int, symtol: float = SYMTOL) -> CoeffSeq:
    """Trapezoid-rule Fourier coefficients f^(n), |n| <= N."""
    M = f.grid.M
    _check_nyquist(N, M)
    n = np.arange(-N, N + 1)
    # e^{-2 pi i n t_j} = (-1)^n e^{-2 pi i n j / M}
    spectrum = np.fft.fft(_trapezoid_samples(f)) / M
    coeffs = spectrum[n % M] * _alternating_sign(n)
    residue = float(np.max(np.abs(coeffs.imag)))
    if residue > symtol:
        raise SymmetryViolation(f"Imaginary residue {residue:.3e} in Fourier coefficients exceeds symtol {symtol:.1e}")
    return CoeffSeq(N, coeffs.real)


def fourier_coeffs_direct(f: CircleFunction, N: int) -> np.ndarray:
    """O(N*M) quadrature of f^(n), returned as complex values (oracle path)."""
    _check_nyquist(N, f.grid.M)
    t = f.grid.points
    n = np.arange(-N, N + 1)
    out = np.empty(len(n), dtype=complex)
    for start in range(0, len(n), _DIRECT_BLOCK):
        block = n[start:start + _DIRECT_BLOCK]
        phases = np.exp(-2j * np.pi * np.outer(block, t))
        out[start:start + len(block)] = phases @ _trapezoid_samples(f) / f.grid.M
    return out


def synthesize(c: CoeffSeq, grid: CircleGrid) -> CircleFunction:
    """Samples of sum_{|n|<=N} c(n) e^{2 pi i n t_j}."""
    M = grid.M
    _check_nyquist(c.N, M)
    n = c.indices
    spectrum = np.zeros(M, dtype=complex)
    spectrum[n % M] = c.values * _alternating_sign(n)
    samples = np.fft.ifft(spectrum) * M
    # Exact Hermitian symmetry: average each value with the conjugate of its mirror
    samples = 0.5 * (samples + np.conj(samples[grid.mirror]))
    return CircleFunction(grid, samples)


def evaluate(c: CoeffSeq, t) -> np.ndarray:
    """Direct evaluation of sum c(n) e^{2 pi i n t} at arbitrary points."""
    t = np.atleast_1d(np.asarray(t, dtype=float))
    out = np.zeros(len(t), dtype=complex)
    n = c.indices
    for start in range(0, len(t), _DIRECT_BLOCK):
        block = t[start:start + _DIRECT_BLOCK]
        out[start:start + len(block)] = np.exp(2j * np.pi * np.outer(block, n)) @ c.values
    return out


def refine(f: CircleFunction, N: int, factor: int = 2) -> CircleFunction:
    """Resample the degree-N part of f on a grid `factor` times finer."""
    return synthesize(fourier_coeffs(f, N), CircleGrid(f.grid.M * factor))
