"""Finite-sample correlation estimators and Monte Carlo moment checks.

Estimators: product-moment R, rank correlation S (ranks are "count of
coordinates <=", so ties shift ranks rather than crash), and pair
concordance T (merge-sort inversion counting, exactly equal to the
quadratic kernel sum on tie-free data).  The triple kernel identity
writes S as a U-statistic average; `spearman_ustat_identity` evaluates
both sides for comparison.

Sampling uses counter-based Philox streams keyed by (seed, replicate
index), so Monte Carlo results never depend on worker count or
scheduling.  Normal variates come from the inverse-CDF map applied to
53-bit uniforms; X and Z draws interleave within one stream, so a
smaller n yields a prefix of a larger n's sample at the same key.
"""

from __future__ import annotations

import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import combinations

import numpy as np
from scipy.special import ndtri

from .corrmath import Rho, moments_r, moments_s, moments_t, mu_s_finite_n
from .errors import DegenerateSample, DomainError, TiesPresent

__all__ = [
    "DEFAULT_SEED",
    "BivariateSample",
    "McReport",
    "sample_bivariate_normal",
    "pearson_r",
    "spearman_s",
    "kendall_t",
    "kendall_t_brute",
    "kernel_h_t",
    "kernel_h_s",
    "kernel_h_s_n",
    "spearman_ustat_identity",
    "mc_moments",
    "phi",
]

DEFAULT_SEED = 20260814

_STAT_NAMES = ("R", "S", "T")


@dataclass(frozen=True)
class BivariateSample:
    """Paired observations; arrays are defensively copied and frozen."""

    x: np.ndarray
    y: np.ndarray

    def __post_init__(self) -> None:
        x = np.array(self.x, dtype=np.float64, copy=True)
        y = np.array(self.y, dtype=np.float64, copy=True)
        if x.ndim != 1 or y.ndim != 1 or x.shape != y.shape:
            raise DomainError("x and y must be 1-D arrays of equal length")
        if x.size < 1:
            raise DomainError("sample must contain at least one pair")
        if not (np.isfinite(x).all() and np.isfinite(y).all()):
            raise DomainError("sample values must be finite")
        x.flags.writeable = False
        y.flags.writeable = False
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    @property
    def n(self) -> int:
        return int(self.x.size)

    @property
    def pairs(self) -> list[tuple[float, float]]:
        return [(float(a), float(b)) for a, b in zip(self.x, self.y)]

    @classmethod
    def from_pairs(cls, pairs) -> "BivariateSample":
        arr = np.asarray(list(pairs), dtype=np.float64)
        if arr.ndim != 2 or arr.shape[1] != 2:
            raise DomainError("pairs must be a sequence of (x, y)")
        return cls(x=arr[:, 0], y=arr[:, 1])


@dataclass(frozen=True)
class McReport:
    stat: str
    rho: float
    n: int
    reps: int
    mean_hat: float
    var_hat_scaled: float
    se_mean: float
    se_var: float
    cdf_sup_dist: float
    seed: int


def _rho_strict(rho: Rho | float) -> float:
    value = rho.value if isinstance(rho, Rho) else float(rho)
    if not abs(value) < 1.0:
        raise DomainError(f"sampling needs |rho| < 1, got {value!r}")
    return value


def sample_bivariate_normal(
    n: int, rho: Rho | float, seed: int, stream: int = 0
) -> BivariateSample:
    """n iid pairs with Y = rho*X + sqrt(1-rho^2)*Z, X, Z standard normal.

    The generator is Philox keyed by (seed, stream); `stream` is the
    replicate index when called from mc_moments.  Uniforms take the top
    53 bits of each 64-bit word, offset to the cell center so 0 and 1
    never occur; the inverse normal CDF then maps them to variates.
    """
    if n < 1:
        raise DomainError(f"need n >= 1, got {n!r}")
    if stream < 0:
        raise DomainError(f"need stream >= 0, got {stream!r}")
    value = _rho_strict(rho)
    key = np.array([seed % 2**64, stream % 2**64], dtype=np.uint64)
    raw = np.random.Philox(key=key).random_raw(2 * n)
    u = (raw >> np.uint64(11)).astype(np.float64) * 2.0**-53 + 2.0**-54
    xs = ndtri(u[0::2])
    zs = ndtri(u[1::2])
    ys = value * xs + math.sqrt(1.0 - value * value) * zs
    return BivariateSample(x=xs, y=ys)


def _warn_on_ties(s: BivariateSample) -> None:
    if np.unique(s.x).size < s.n or np.unique(s.y).size < s.n:
        warnings.warn("tied coordinates present; ranks use <= counts", TiesPresent)


def _ranks(v: np.ndarray) -> np.ndarray:
    """rank(v_i) = #{j : v_j <= v_i}, values in 1..n for tie-free input."""
    return np.searchsorted(np.sort(v), v, side="right").astype(np.int64)


def pearson_r(s: BivariateSample) -> float:
    if s.n < 2:
        raise DomainError(f"need n >= 2, got {s.n}")
    xc = s.x - s.x.mean()
    yc = s.y - s.y.mean()
    sxx = float(xc @ xc)
    syy = float(yc @ yc)
    if sxx == 0.0 or syy == 0.0:
        raise DegenerateSample("a coordinate is constant; R undefined")
    r = float(xc @ yc) / math.sqrt(sxx * syy)
    return min(1.0, max(-1.0, r))


def spearman_s(s: BivariateSample) -> float:
    if s.n < 2:
        raise DomainError(f"need n >= 2, got {s.n}")
    _warn_on_ties(s)
    n = s.n
    total = int(_ranks(s.x) @ _ranks(s.y))
    # One integer numerator and one division keep the value an exactly
    # rounded rational, so y -> -y negates it exactly.
    return (12 * total - 3 * n * (n + 1) ** 2) / (n**3 - n)


def _count_inversions(ranks: np.ndarray) -> int:
    """Inversions of a permutation of 0..n-1, by bottom-up merge sort.

    The array is padded to a power of two with the sentinel n.  Within
    every block the real values always precede the sentinels, and only
    one block at each level mixes the two, so sentinels never sit in a
    left half while real values sit in the matching right half: padding
    adds no spurious inversions.
    """
    n = int(ranks.size)
    if n < 2:
        return 0
    m = 1 << (n - 1).bit_length()
    pad = n
    work = np.full(m, pad, dtype=np.int64)
    work[:n] = ranks
    total = 0
    size = 1
    while size < m:
        blocks = work.reshape(-1, 2 * size)
        nblocks = blocks.shape[0]
        # Offset each block into its own value range so one global
        # searchsorted counts "left-half elements <= r" for every block.
        offset = np.arange(nblocks, dtype=np.int64)[:, None] * (pad + 1)
        lflat = (blocks[:, :size] + offset).ravel()
        rflat = (blocks[:, size:] + offset).ravel()
        below = np.searchsorted(lflat, rflat, side="right")
        below -= np.repeat(np.arange(nblocks, dtype=np.int64) * size, size)
        total += int((size - below).sum())
        work = np.sort(blocks, axis=1).ravel()
        size *= 2
    return total


def kendall_t(s: BivariateSample) -> float:
    """(concordant - discordant) / C(n,2) with exact integer counts.

    Tie-free samples go through O(n log n) inversion counting; ties
    trigger a TiesPresent warning and the quadratic kernel sum, whose
    value is the kernel average by definition.
    """
    if s.n < 2:
        raise DomainError(f"need n >= 2, got {s.n}")
    if np.unique(s.x).size < s.n or np.unique(s.y).size < s.n:
        warnings.warn("tied coordinates present; using kernel sum", TiesPresent)
        return kendall_t_brute(s)
    n = s.n
    yp = s.y[np.argsort(s.x)]
    ranks = np.empty(n, dtype=np.int64)
    ranks[np.argsort(yp)] = np.arange(n, dtype=np.int64)
    inv = _count_inversions(ranks)
    c2 = n * (n - 1) // 2
    return (c2 - 2 * inv) / c2


def kendall_t_brute(s: BivariateSample) -> float:
    """Quadratic kernel average: mean over pairs of 2*(J_ij + J_ji) - 1."""
    if s.n < 2:
        raise DomainError(f"need n >= 2, got {s.n}")
    n = s.n
    dominates = (s.x[None, :] < s.x[:, None]) & (s.y[None, :] < s.y[:, None])
    c2 = n * (n - 1) // 2
    return (2 * int(dominates.sum()) - c2) / c2


def kernel_h_t(vi: tuple[float, float], vj: tuple[float, float]) -> float:
    """2*(J_ij + J_ji) - 1 where J_ij = 1{x_j < x_i} 1{y_j < y_i}."""
    jij = (vj[0] < vi[0]) and (vj[1] < vi[1])
    jji = (vi[0] < vj[0]) and (vi[1] < vj[1])
    return 2.0 * (jij + jji) - 1.0


def _k3(va, vb, vc) -> bool:
    # 1{x_b < x_a} 1{y_c < y_a}
    return (vb[0] < va[0]) and (vc[1] < va[1])


def kernel_h_s(vi, vj, vk) -> float:
    """2 * (sum of the six index permutations of K) - 3."""
    total = (
        _k3(vi, vj, vk)
        + _k3(vi, vk, vj)
        + _k3(vj, vi, vk)
        + _k3(vj, vk, vi)
        + _k3(vk, vi, vj)
        + _k3(vk, vj, vi)
    )
    return 2.0 * total - 3.0


def kernel_h_s_n(n: int, vi, vj, vk) -> float:
    """Degree-3 kernel whose U-statistic average is exactly S."""
    pair_part = kernel_h_t(vi, vj) + kernel_h_t(vi, vk) + kernel_h_t(vj, vk)
    return ((n - 2) * kernel_h_s(vi, vj, vk) + pair_part) / (n + 1)


def spearman_ustat_identity(s: BivariateSample) -> tuple[float, float]:
    """(rank-formula S, triple-kernel U-statistic average): equal values.

    The cubic triple sum restricts n to a modest range.
    """
    n = s.n
    if not 3 <= n <= 40:
        raise DomainError(f"triple sum needs 3 <= n <= 40, got {n}")
    s_direct = spearman_s(s)
    pts = s.pairs
    total = 0.0
    for i, j, k in combinations(range(n), 3):
        total += kernel_h_s_n(n, pts[i], pts[j], pts[k])
    s_ustat = total / math.comb(n, 3)
    return s_direct, s_ustat


def phi(z: float) -> float:
    """Standard normal CDF."""
    return 0.5 * math.erfc(-z / math.sqrt(2.0))


_ESTIMATORS = {"R": pearson_r, "S": spearman_s, "T": kendall_t}


def _asymptotics(stat: str, rho: float, n: int) -> tuple[float, float]:
    """(centering mean, asymptotic variance) for sqrt(n)-standardization."""
    if stat == "R":
        ms = moments_r(rho)
        return ms.mu, ms.sigma2
    if stat == "T":
        ms = moments_t(rho)
        return ms.mu, ms.sigma2
    ms = moments_s(rho)
    return mu_s_finite_n(rho, n), ms.sigma2


def mc_moments(
    stat: str,
    rho: Rho | float,
    n: int,
    reps: int,
    seed: int = DEFAULT_SEED,
    workers: int = 1,
) -> McReport:
    """Monte Carlo check of the asymptotic mean/variance and normality.

    Replicate i draws its sample from stream i of `seed`, so the result
    is a pure function of (stat, rho, n, reps, seed): worker count only
    changes wall time.  Replicates are reduced in index order.
    `cdf_sup_dist` is the sup distance between the empirical CDF of
    sqrt(n)*(stat - mu)/sigma and the standard normal CDF, where mu is
    the exact finite-n mean for S and the asymptotic mean otherwise.
    """
    stat_u = str(stat).upper()
    if stat_u not in _STAT_NAMES:
        raise DomainError(f"stat must be one of {_STAT_NAMES}, got {stat!r}")
    if n < 10:
        raise DomainError(f"need n >= 10, got {n!r}")
    if reps < 100:
        raise DomainError(f"need reps >= 100, got {reps!r}")
    value = _rho_strict(rho)
    estimator = _ESTIMATORS[stat_u]

    def one(i: int) -> float:
        return estimator(sample_bivariate_normal(n, value, seed, stream=i))

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            vals = np.fromiter(pool.map(one, range(reps)), np.float64, count=reps)
    else:
        vals = np.fromiter(map(one, range(reps)), np.float64, count=reps)

    mean_hat = float(vals.mean())
    var_hat = float(vals.var(ddof=1))
    centered = vals - vals.mean()
    m2 = float(np.mean(centered**2))
    m4 = float(np.mean(centered**4))
    se_var = n * math.sqrt(max(m4 - m2 * m2, 0.0) / reps)

    mu, sigma2 = _asymptotics(stat_u, value, n)
    z = np.sort(math.sqrt(n) * (vals - mu) / math.sqrt(sigma2))
    cdf = np.array([phi(v) for v in z])
    steps = np.arange(1, reps + 1, dtype=np.float64) / reps
    sup_dist = float(max((steps - cdf).max(), (cdf - (steps - 1.0 / reps)).max()))

    return McReport(
        stat=stat_u,
        rho=value,
        n=n,
        reps=reps,
        mean_hat=mean_hat,
        var_hat_scaled=n * var_hat,
        se_mean=math.sqrt(var_hat / reps),
        se_var=se_var,
        cdf_sup_dist=sup_dist,
        seed=seed,
    )
