"""Estimators for the percolation observables.

Replicate-level statistics are always accumulated in replicate order and
reduced with fixed-order summation, so repeated runs are bit-stable.
The susceptibility is estimated through the sum-of-squared-cluster-sizes
identity, which uses every vertex of every replicate; its variance is
taken across replicates only, since cluster sizes within one replicate
are dependent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .clusters import ClusterLabeling, count_z_geq
from .cube import CubeDim

__all__ = [
    "Estimate",
    "RadialProfile",
    "TriangleReport",
    "ZConcentrationReport",
    "chi_sample",
    "chi_hat",
    "p_geq_k_hat",
    "n_alpha",
    "theta_alpha_hat",
    "two_point_radial_hat",
    "radial_convolution",
    "triangle_diagram_hat",
    "z_concentration_check",
]

EXACT_PAIR_CENSUS_MAX_N = 16
DEFAULT_PAIR_SAMPLES = 10**6


@dataclass(frozen=True)
class Estimate:
    """Replicate mean with its standard error."""

    mean: float
    std_error: float
    replicates: int

    @classmethod
    def from_samples(cls, samples: np.ndarray) -> "Estimate":
        samples = np.asarray(samples, dtype=np.float64)
        r = samples.shape[0]
        if r == 0:
            raise ValueError("at least one replicate required")
        mean = float(samples.mean())
        se = float(samples.std(ddof=1) / math.sqrt(r)) if r > 1 else 0.0
        return cls(mean, se, r)


@dataclass(frozen=True)
class RadialProfile:
    """A function of Hamming distance k = 0..n.

    Two-point profiles hold connection probabilities in [0, 1]; convolved
    profiles hold nonnegative vertex-weighted sums that can exceed 1.
    """

    dim: CubeDim
    values: np.ndarray

    def __post_init__(self) -> None:
        values = np.asarray(self.values, dtype=np.float64)
        if values.shape != (self.dim.n + 1,):
            raise ValueError(f"profile must have length n+1 = {self.dim.n + 1}")
        if not np.isfinite(values).all() or (values < 0).any():
            raise ValueError("profile values must be finite and nonnegative")
        object.__setattr__(self, "values", values)
        self.values.setflags(write=False)


@dataclass(frozen=True)
class TriangleReport:
    """Open and closed triangle-diagram values with the comparison bound a0."""

    p: float
    nabla_diag: float
    nabla_offdiag: float
    a0: float
    k1: float
    k2: float
    chi_used: float


@dataclass(frozen=True)
class ZConcentrationReport:
    """How often the moderately-large-component count strays from its mean."""

    n_alpha: float
    eta1: float
    mean_z: float
    theta_hat: float
    threshold: float
    exceed_frequency: float
    replicates: int


def _check_labelings(labelings: list[ClusterLabeling]) -> CubeDim:
    if not labelings:
        raise ValueError("at least one labeling required")
    dim = labelings[0].dim
    if any(lab.dim != dim for lab in labelings):
        raise ValueError("labelings must share one dimension")
    return dim


def chi_sample(labeling: ClusterLabeling) -> float:
    """Single-replicate susceptibility statistic: sum of squared sizes over 2^n."""
    sizes = labeling.sizes_desc
    return float(int((sizes * sizes).sum()) / labeling.dim.volume)


def chi_hat(labelings: list[ClusterLabeling]) -> Estimate:
    """Expected cluster size of a fixed vertex, averaged across replicates."""
    _check_labelings(labelings)
    return Estimate.from_samples(np.array([chi_sample(lab) for lab in labelings]))


def p_geq_k_hat(labelings: list[ClusterLabeling], k: int) -> Estimate:
    """Probability that a vertex's component has at least k members."""
    dim = _check_labelings(labelings)
    fractions = np.array([count_z_geq(lab, k) / dim.volume for lab in labelings])
    return Estimate.from_samples(fractions)


def n_alpha(p_c: float, p: float, n: int, alpha: float) -> float:
    """Component-size cutoff eps^(alpha-2) * 2^(n*alpha/3) with eps = n(p - p_c)."""
    if not 0.0 < alpha < 1.0:
        raise ValueError("alpha must lie in (0, 1)")
    eps = n * (p - p_c)
    if eps <= 0.0:
        raise ValueError("cutoff is defined only above the threshold (eps > 0)")
    return eps ** (alpha - 2.0) * 2.0 ** (n * alpha / 3.0)


def theta_alpha_hat(labelings: list[ClusterLabeling], n_alpha_value: float) -> Estimate:
    """Finite-graph percolation probability: P(component size >= cutoff)."""
    if n_alpha_value < 1.0:
        raise ValueError("cutoff must be at least 1")
    return p_geq_k_hat(labelings, math.ceil(n_alpha_value))


def pair_census(labeling: ClusterLabeling, block: int = 2048) -> np.ndarray:
    """Ordered same-component pair counts by distance k = 0..n, exact.

    Every vertex pairs with itself at distance 0, so entry 0 is always 2^n.
    Cost grows with the sum of squared component sizes; use the sampled
    estimator for large dimensions or dense graphs.
    """
    n = labeling.dim.n
    counts = np.zeros(n + 1, dtype=np.int64)
    order = np.argsort(labeling.root_of, kind="stable").astype(np.int64)
    roots_sorted = labeling.root_of[order]
    boundaries = np.flatnonzero(np.diff(roots_sorted)) + 1
    start = 0
    seen_in_groups = 0
    for stop in list(boundaries) + [order.shape[0]]:
        group = order[start:stop]
        start = stop
        if group.shape[0] < 2:
            continue
        seen_in_groups += group.shape[0]
        for i0 in range(0, group.shape[0], block):
            pc = np.bitwise_count(group[i0:i0 + block, None] ^ group[None, :])
            counts += np.bincount(pc.ravel(), minlength=n + 1)[:n + 1]
    counts[0] += labeling.dim.volume - seen_in_groups
    return counts


def _sampled_profile(labeling: ClusterLabeling, pair_samples: int, seed: int) -> np.ndarray:
    """Stratified pair sampling: fixed sample budget per distance class."""
    n = labeling.dim.n
    v_count = labeling.dim.volume
    rng = np.random.default_rng(seed)
    per_k = max(1, pair_samples // (n + 1))
    values = np.empty(n + 1, dtype=np.float64)
    values[0] = 1.0
    root = labeling.root_of
    for k in range(1, n + 1):
        x = rng.integers(0, v_count, per_k)
        picks = np.argsort(rng.random((per_k, n)), axis=1)[:, :k]
        masks = (np.int64(1) << picks).sum(axis=1)
        y = x ^ masks
        values[k] = float((root[x] == root[y]).mean())
    return values


def two_point_radial_hat(labelings: list[ClusterLabeling], *, method: str = "auto",
                         pair_samples: int = DEFAULT_PAIR_SAMPLES, seed: int = 0) -> RadialProfile:
    """Connection probability by distance, pooled over all pairs and replicates.

    Distances are pooled exactly through a per-component pair census up to
    n = 16 (method="exact"); beyond that, stratified sampled pairs keep the
    cost bounded (method="sampled").
    """
    dim = _check_labelings(labelings)
    if method == "auto":
        method = "exact" if dim.n <= EXACT_PAIR_CENSUS_MAX_N else "sampled"
    if method not in ("exact", "sampled"):
        raise ValueError(f"unknown method {method!r}")
    if method == "exact":
        totals = dim.volume * np.array([math.comb(dim.n, k) for k in range(dim.n + 1)], dtype=np.float64)
        per_rep = [pair_census(lab) / totals for lab in labelings]
    else:
        per_rep = [_sampled_profile(lab, pair_samples, seed + 1000003 * r)
                   for r, lab in enumerate(labelings)]
    stacked = np.vstack(per_rep)
    return RadialProfile(dim, stacked.mean(axis=0))


@lru_cache(maxsize=None)
def _intersection_table(n: int) -> np.ndarray:
    """Exact triple counts N[k, i, j] of the binary Hamming scheme.

    N[k, i, j] is the number of vertices at distance i from x and j from y
    when x and y are distance k apart.  For each admissible (k, i, j) there
    is a single split: a = (i - j + k)/2 flips among the k differing
    coordinates and b = (i + j - k)/2 among the rest.
    """
    table = np.zeros((n + 1, n + 1, n + 1), dtype=np.int64)
    for k in range(n + 1):
        for i in range(n + 1):
            for j in range(n + 1):
                two_a = i - j + k
                two_b = i + j - k
                if two_a < 0 or two_b < 0 or two_a % 2 or two_b % 2:
                    continue
                a, b = two_a // 2, two_b // 2
                if a <= k and b <= n - k:
                    table[k, i, j] = math.comb(k, a) * math.comb(n - k, b)
    table.setflags(write=False)
    return table


def radial_convolution(t1: RadialProfile, t2: RadialProfile) -> RadialProfile:
    """Vertex-sum convolution: (t1 * t2)(k) = sum over w of t1(d(x,w)) t2(d(w,y)).

    Evaluated through the intersection counts, so it costs O(n^3) instead of
    a 2^n vertex sum and is exact for radial functions.
    """
    if t1.dim != t2.dim:
        raise ValueError("dimension mismatch")
    table = _intersection_table(t1.dim.n)
    values = np.einsum("kij,i,j->k", table, t1.values, t2.values)
    return RadialProfile(t1.dim, values)


def triangle_diagram_hat(profile: RadialProfile, chi: float, k1: float = 1.0,
                         k2: float = 1.0, p: float = float("nan")) -> TriangleReport:
    """Triangle diagram from a radial two-point profile, with its bound a0.

    The diagram is the double convolution of the profile with itself; by
    vertex-transitivity its diagonal and off-diagonal maxima are read off
    the radial result.  a0 = k1/n + k2 * chi^3 / 2^n.  The plug-in profile
    is a product of correlated estimates, so the reported diagram carries a
    small bias; it is reported as computed.
    """
    tt = radial_convolution(profile, profile)
    nabla = radial_convolution(tt, profile).values
    n = profile.dim.n
    a0 = k1 / n + k2 * chi**3 / profile.dim.volume
    return TriangleReport(
        p=p,
        nabla_diag=float(nabla[0]),
        nabla_offdiag=float(nabla[1:].max()),
        a0=float(a0),
        k1=k1,
        k2=k2,
        chi_used=chi,
    )


def z_concentration_check(labelings: list[ClusterLabeling], n_alpha_value: float,
                          eta1: float) -> ZConcentrationReport:
    """Frequency of replicates whose large-component count strays from the mean.

    Counts deviations strictly exceeding 2^(n(1-eta1)) * theta_hat, so a
    degenerate ensemble (all replicates identical) reports frequency zero.
    Report-only: no pass/fail semantics attached.
    """
    dim = _check_labelings(labelings)
    k = math.ceil(n_alpha_value)
    zs = np.array([count_z_geq(lab, k) for lab in labelings], dtype=np.float64)
    mean_z = float(zs.mean())
    theta_hat = mean_z / dim.volume
    threshold = dim.volume ** (1.0 - eta1) * theta_hat
    exceed = float((np.abs(zs - mean_z) > threshold).mean())
    return ZConcentrationReport(
        n_alpha=n_alpha_value,
        eta1=eta1,
        mean_z=mean_z,
        theta_hat=theta_hat,
        threshold=threshold,
        exceed_frequency=exceed,
        replicates=len(labelings),
    )
