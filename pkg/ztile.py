"""Tilings of the integers and of finite cyclic groups by translates of a function.

f tiles Z at level w along Lambda when sum_{k in Lambda} f(n - k) = w for every n.
For finitely supported tiles and periodic candidates the check is exact; on Z_Nc the
product criterion f^ . 1_S^ = w Nc delta_0 is equivalent to the cyclic convolution.
"""

import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

try:
    from .errors import InstanceParseError, SearchSpaceTooLarge
except ImportError:
    from errors import InstanceParseError, SearchSpaceTooLarge

logger = logging.getLogger(__name__)

SEARCH_CAP = 28
EXHAUSTIVE_CAP = 20
FLOAT_TOL = 1e-12
DFT_RTOL = 1e-9
_MASK_CHUNK = 1 << 16

Subset = Tuple[int, ...]


def _is_integral(value: float) -> bool:
    return float(value).is_integer()


@dataclass(frozen=True)
class ZFunction:
    """Finitely supported f: Z -> R, stored as offset -> value (zeros dropped)."""
    support: Dict[int, float] = field(default_factory=dict)

    def __post_init__(self):
        cleaned = {int(k): float(v) for k, v in self.support.items() if v != 0}
        object.__setattr__(self, "support", dict(sorted(cleaned.items())))

    @classmethod
    def indicator(cls, offsets: Iterable[int]) -> "ZFunction":
        return cls({int(k): 1.0 for k in offsets})

    @property
    def is_zero(self) -> bool:
        return not self.support

    @property
    def is_integer_valued(self) -> bool:
        return all(_is_integral(v) for v in self.support.values())

    @property
    def diameter(self) -> int:
        if not self.support:
            return 0
        return max(self.support) - min(self.support)

    def __call__(self, n: int) -> float:
        return self.support.get(n, 0.0)


@dataclass(frozen=True)
class ZSet:
    """Periodic subset {n : n mod m in residues} of Z."""
    m: int
    residues: Tuple[int, ...] = ()

    def __post_init__(self):
        if self.m < 1:
            raise ValueError(f"Period must be positive, got m={self.m}")
        residues = tuple(int(r) for r in self.residues)
        if len(set(residues)) != len(residues):
            raise ValueError(f"Residues must be distinct: {residues}")
        if any(r < 0 or r >= self.m for r in residues):
            raise ValueError(f"Residues must lie in 0..{self.m - 1}: {residues}")
        object.__setattr__(self, "residues", tuple(sorted(residues)))

    def __contains__(self, n: int) -> bool:
        return n % self.m in self.residues

    def members(self, lo: int, hi: int) -> List[int]:
        """Elements in [lo, hi]."""
        return [n for n in range(lo, hi + 1) if n % self.m in self.residues]


@dataclass(frozen=True, eq=False)
class CyclicInstance:
    """A tile on Z_Nc together with the target level w."""
    Nc: int
    tile: np.ndarray
    w: float = 1.0
    source: Optional[ZFunction] = field(default=None, repr=False)

    def __post_init__(self):
        if self.Nc < 1:
            raise ValueError(f"Modulus must be positive, got Nc={self.Nc}")
        tile = np.asarray(self.tile, dtype=float)
        if tile.shape != (self.Nc,):
            raise ValueError(f"Tile must have {self.Nc} entries, got shape {tile.shape}")
        object.__setattr__(self, "tile", tile)

    @classmethod
    def from_zfunction(cls, f: ZFunction, Nc: int, w: float = 1.0) -> "CyclicInstance":
        """Fold f onto Z_Nc."""
        tile = np.zeros(Nc)
        for offset, value in f.support.items():
            tile[offset % Nc] += value
        return cls(Nc, tile, w, source=f)

    @property
    def exact(self) -> bool:
        return bool(np.all(self.tile == np.round(self.tile))) and _is_integral(self.w)

    @property
    def pruning_eligible(self) -> bool:
        return bool(np.all(self.tile >= 0) and np.any(self.tile > 0) and self.w > 0)

    def tolerance(self) -> float:
        return 0.0 if self.exact else FLOAT_TOL * max(1.0, abs(self.w))

    def circulant(self) -> np.ndarray:
        """Row s is the tile translated by s."""
        return np.stack([np.roll(self.tile, s) for s in range(self.Nc)])


def z_tiling_check(f: ZFunction, L: ZSet, w: float, horizon: Optional[int] = None) -> bool:
    """Check sum_{k in L} f(n - k) = w on one period of n (or `horizon` points).

    Both sides are m-periodic in n, so one period decides the identity on all of Z.
    """
    if f.is_zero:
        raise ValueError("Tile must not be identically zero")
    count = max(L.m, horizon or 0)
    exact = f.is_integer_valued and _is_integral(w)
    items = [(d, int(v) if exact else v) for d, v in f.support.items()]
    target = int(w) if exact else w
    for n in range(count):
        total = sum(v for d, v in items if (n - d) % L.m in L.residues)
        if exact:
            if total != target:
                logger.debug(f"Tiling fails at n={n}: {total} != {target}")
                return False
        elif abs(total - target) > FLOAT_TOL * max(1.0, abs(target)):
            logger.debug(f"Tiling fails at n={n}: {total!r} != {target!r}")
            return False
    return True


def subset_indicator(subset: Iterable[int], Nc: int) -> np.ndarray:
    indicator = np.zeros(Nc)
    for s in subset:
        indicator[int(s) % Nc] = 1.0
    return indicator


def cyclic_cover(inst: CyclicInstance, subset: Iterable[int]) -> np.ndarray:
    cover = np.zeros(inst.Nc)
    for s in set(int(s) % inst.Nc for s in subset):
        cover += np.roll(inst.tile, s)
    return cover


def cyclic_tiling_check(inst: CyclicInstance, subset: Iterable[int]) -> bool:
    """Direct cyclic convolution: (f * 1_S)(n) = w for every n in Z_Nc."""
    cover = cyclic_cover(inst, subset)
    return bool(np.all(np.abs(cover - inst.w) <= inst.tolerance()))


def dft_tiling_check(inst: CyclicInstance, subset: Iterable[int]) -> bool:
    """Product criterion f^(j) 1_S^(j) = w Nc [j = 0] for every frequency j."""
    product = np.fft.fft(inst.tile) * np.fft.fft(subset_indicator(subset, inst.Nc))
    expected = np.zeros(inst.Nc, dtype=complex)
    expected[0] = inst.w * inst.Nc
    scale = max(1.0, abs(inst.w) * inst.Nc, float(np.max(np.abs(product))))
    return bool(np.all(np.abs(product - expected) <= DFT_RTOL * scale))


def _canonical(subsets: Iterable[Iterable[int]]) -> List[Subset]:
    return sorted(tuple(sorted(s)) for s in subsets)


def exhaustive_complements(inst: CyclicInstance) -> List[Subset]:
    """Every S in Z_Nc with f * 1_S = w, by testing all 2^Nc subsets."""
    if inst.Nc > EXHAUSTIVE_CAP:
        raise SearchSpaceTooLarge(f"Exhaustive enumeration limited to Nc <= {EXHAUSTIVE_CAP}, got Nc={inst.Nc}")
    circulant = inst.circulant()
    bits = np.arange(inst.Nc)
    tol = inst.tolerance()
    found: List[Subset] = []
    for start in range(0, 1 << inst.Nc, _MASK_CHUNK):
        masks = np.arange(start, min(start + _MASK_CHUNK, 1 << inst.Nc))
        rows = ((masks[:, None] >> bits[None, :]) & 1).astype(float)
        covers = rows @ circulant
        hits = np.all(np.abs(covers - inst.w) <= tol, axis=1)
        for row in rows[hits]:
            found.append(tuple(int(s) for s in np.nonzero(row)[0]))
    return _canonical(found)


def _backtrack(rolls: np.ndarray, w: float, tol: float, cover: np.ndarray,
               chosen: List[int], excluded: set, out: List[Subset]):
    deficient = np.nonzero(cover < w - tol)[0]
    if len(deficient) == 0:
        out.append(tuple(sorted(chosen)))
        return
    p = int(deficient[0])
    Nc = len(cover)
    # translates that put mass on p
    candidates = sorted({(p - d) % Nc for d in np.nonzero(rolls[0] > 0)[0]})
    tried = set()
    for s in candidates:
        if s in excluded or s in chosen:
            continue
        updated = cover + rolls[s]
        if np.all(updated <= w + tol):
            chosen.append(s)
            _backtrack(rolls, w, tol, updated, chosen, excluded | tried, out)
            chosen.pop()
        # any solution below this node containing s was found in the branch above
        tried.add(s)


def _search_subtree(tile: np.ndarray, w: float, tol: float, first: int, excluded: Tuple[int, ...]) -> List[Subset]:
    Nc = len(tile)
    rolls = np.stack([np.roll(tile, s) for s in range(Nc)])
    out: List[Subset] = []
    cover = rolls[first].copy()
    if np.all(cover <= w + tol):
        _backtrack(rolls, w, tol, cover, [first], set(excluded), out)
    return out


def complement_search(inst: CyclicInstance, cap: int = SEARCH_CAP, workers: int = 1) -> List[Subset]:
    """All subsets S of Z_Nc with f * 1_S = w, sorted canonically.

    Backtracks on the leftmost position still below w, trying every translate that
    covers it; a translate is excluded from later sibling branches so each solution
    appears once, and partial covers exceeding w are pruned.
    """
    if not inst.pruning_eligible:
        if inst.Nc <= EXHAUSTIVE_CAP:
            logger.info(f"Tile not eligible for pruning, enumerating all 2^{inst.Nc} subsets")
            return exhaustive_complements(inst)
        raise SearchSpaceTooLarge(
            f"Tile has negative entries, no positive entry or w <= 0, and Nc={inst.Nc} > {EXHAUSTIVE_CAP}")
    if inst.Nc > cap:
        raise SearchSpaceTooLarge(f"Modulus Nc={inst.Nc} exceeds the search cap {cap}")

    tile = inst.tile.astype(np.int64) if inst.exact else inst.tile
    w = int(inst.w) if inst.exact else inst.w
    tol = inst.tolerance()
    # position 0 is deficient at the root
    firsts = sorted({(-d) % inst.Nc for d in np.nonzero(tile > 0)[0]})
    branches = [(s, tuple(firsts[:i])) for i, s in enumerate(firsts)]

    results: List[Subset] = []
    if workers > 1 and len(branches) > 1:
        logger.debug(f"Fanning {len(branches)} subtrees out to {workers} workers")
        with ProcessPoolExecutor(max_workers=min(workers, os.cpu_count() or 1)) as pool:
            futures = [pool.submit(_search_subtree, tile, w, tol, s, excluded) for s, excluded in branches]
            for future in futures:
                results.extend(future.result())
    else:
        for s, excluded in branches:
            results.extend(_search_subtree(tile, w, tol, s, excluded))
    logger.info(f"Found {len(results)} complement(s) in Z_{inst.Nc}")
    return _canonical(results)


def minimal_period(indicator: Sequence) -> int:
    """Smallest divisor d of len(indicator) with indicator(i) = indicator(i + d)."""
    values = np.asarray(indicator, dtype=bool)
    Nc = len(values)
    if Nc == 0:
        raise ValueError("Indicator must be nonempty")
    for d in range(1, Nc + 1):
        if Nc % d == 0 and np.array_equal(values, np.roll(values, -d)):
            return d
    return Nc


def zset_indicator(L: ZSet, Nc: int) -> np.ndarray:
    if Nc % L.m:
        raise ValueError(f"Period m={L.m} must divide the modulus Nc={Nc}")
    return np.array([i % L.m in L.residues for i in range(Nc)])


def subset_to_zset(subset: Iterable[int], Nc: int) -> ZSet:
    """Read a subset of Z_Nc as a periodic subset of Z with its minimal period."""
    indicator = subset_indicator(subset, Nc).astype(bool)
    d = minimal_period(indicator)
    return ZSet(d, tuple(int(i) for i in np.nonzero(indicator[:d])[0]))


def smoothed_spectrum(L: Union[ZSet, Iterable[int]], N: int, Nfreq: int) -> List[Tuple[float, float]]:
    """|sum_{|n|<=N} (1 - |n|/N) 1_L(n) e^{-2 pi i n t}| at Nfreq points of [-1/2, 1/2)."""
    if N < 1:
        raise ValueError(f"N must be positive, got {N}")
    if isinstance(L, ZSet):
        members = L.members(-N, N)
    else:
        members = sorted(int(n) for n in L if abs(int(n)) <= N)
    t = -0.5 + np.arange(Nfreq) / Nfreq
    if not members:
        return [(float(ti), 0.0) for ti in t]
    n = np.asarray(members)
    weights = 1 - np.abs(n) / N
    sigma = np.exp(-2j * np.pi * np.outer(t, n)) @ weights
    return list(zip(t.tolist(), np.abs(sigma).tolist()))


def parse_instance(text: str) -> CyclicInstance:
    """Parse `N=<modulus> w=<level>` followed by `offset:value` pairs."""
    lines = [line.strip() for line in text.splitlines()]
    lines = [line for line in lines if line and not line.startswith("#")]
    if not lines:
        raise InstanceParseError("Empty instance")
    header = {}
    for token in lines[0].split():
        key, sep, value = token.partition("=")
        if not sep:
            raise InstanceParseError(f"Malformed header token '{token}', expected key=value")
        header[key] = value
    if set(header) != {"N", "w"}:
        raise InstanceParseError(f"Header must define exactly N and w, got {sorted(header)}")
    try:
        Nc = int(header["N"])
        w = float(header["w"])
    except ValueError as e:
        raise InstanceParseError(f"Invalid header values: {e}") from e
    if Nc < 1:
        raise InstanceParseError(f"Modulus must be positive, got N={Nc}")

    support: Dict[int, float] = {}
    for token in " ".join(lines[1:]).split():
        offset, sep, value = token.partition(":")
        if not sep:
            raise InstanceParseError(f"Malformed tile entry '{token}', expected offset:value")
        try:
            support[int(offset)] = support.get(int(offset), 0.0) + float(value)
        except ValueError as e:
            raise InstanceParseError(f"Invalid tile entry '{token}': {e}") from e
    f = ZFunction(support)
    if f.is_zero:
        raise InstanceParseError("Tile is identically zero")
    return CyclicInstance.from_zfunction(f, Nc, w)


def load_instance(path) -> CyclicInstance:
    try:
        with open(path, "r") as fh:
            text = fh.read()
    except OSError as e:
        raise InstanceParseError(f"Cannot read instance file {path}: {e}") from e
    return parse_instance(text)


def format_subsets(subsets: Iterable[Subset]) -> str:
    return "\n".join(" ".join(str(s) for s in subset) for subset in subsets)
