"""Reproducible Bernoulli bond configurations on the hypercube.

Every edge gets its uniform from a counter-based hash of
(master_seed, replicate_index, edge id), not from a sequential stream.
Samples are therefore bit-identical regardless of evaluation order, any
single edge can be re-derived in O(1), and thresholding one shared uniform
vector at several densities yields monotone-coupled graphs for free.

Edges are kept canonical: the edge along direction i at vertex v (bit i of
v clear) lives at plane index v-with-bit-i-removed, so plane i is a bit
vector of length 2^(n-1) and the flat edge id is i * 2^(n-1) + plane index.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

import numpy as np

from .cube import CubeDim

__all__ = [
    "SeedSpec",
    "EdgeId",
    "OccupiedGraph",
    "edge_uniforms",
    "sample_subgraph",
    "coupled_sample",
    "union_graphs",
    "sprinkle_split",
    "save_occupancy",
    "load_occupancy",
]

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_REPLICATE_SALT = 0xD2B74407B1CE6E93


def _mix64_scalar(x: int) -> int:
    """SplitMix64 finalizer on a 64-bit integer."""
    x &= _MASK64
    x ^= x >> 30
    x = (x * 0xBF58476D1CE4E5B9) & _MASK64
    x ^= x >> 27
    x = (x * 0x94D049BB133111EB) & _MASK64
    x ^= x >> 31
    return x


def _mix64(x: np.ndarray) -> np.ndarray:
    """SplitMix64 finalizer, elementwise on uint64 (wrapping arithmetic)."""
    x = x.copy()
    x ^= x >> np.uint64(30)
    x *= np.uint64(0xBF58476D1CE4E5B9)
    x ^= x >> np.uint64(27)
    x *= np.uint64(0x94D049BB133111EB)
    x ^= x >> np.uint64(31)
    return x


@dataclass(frozen=True)
class SeedSpec:
    """Identifies one replicate's random stream."""

    master_seed: int
    replicate_index: int = 0

    def stream_key(self) -> int:
        k = _mix64_scalar(self.master_seed ^ _GOLDEN)
        return _mix64_scalar(k ^ ((self.replicate_index * _REPLICATE_SALT) & _MASK64))


@dataclass(frozen=True)
class EdgeId:
    """Canonical undirected edge: bit `direction` of `vertex` must be clear."""

    vertex: int
    direction: int

    def __post_init__(self) -> None:
        if self.direction < 0:
            raise ValueError("direction must be nonnegative")
        if (self.vertex >> self.direction) & 1:
            raise ValueError("canonical edge requires bit `direction` of `vertex` to be 0")

    def other_endpoint(self) -> int:
        return self.vertex | (1 << self.direction)

    def flat_index(self, dim: CubeDim) -> int:
        d = self.direction
        plane_idx = ((self.vertex >> (d + 1)) << d) | (self.vertex & ((1 << d) - 1))
        return d * (1 << (dim.n - 1)) + plane_idx


def _expand_plane_index(idx: np.ndarray, direction: int) -> np.ndarray:
    """Plane index -> canonical vertex (insert a zero bit at `direction`)."""
    d = direction
    return ((idx >> d) << (d + 1)) | (idx & ((1 << d) - 1))


def edge_uniforms(dim: CubeDim, seed: SeedSpec) -> np.ndarray:
    """Per-edge uniforms in [0, 1), shape (n, 2^(n-1)), one row per direction."""
    key = seed.stream_key()
    ids = np.arange(dim.edge_count, dtype=np.uint64)
    state = ids * np.uint64(_GOLDEN) + np.uint64(key)
    vals = _mix64(state)
    u = (vals >> np.uint64(11)).astype(np.float64) * 2.0**-53
    return u.reshape(dim.n, -1)


@dataclass(frozen=True)
class OccupiedGraph:
    """One bond configuration: a boolean occupancy plane per direction.

    `p` records the density the graph was sampled at; it is metadata only
    and no operation branches on it.
    """

    dim: CubeDim
    planes: np.ndarray
    p: float
    seed: SeedSpec | None = None

    def __post_init__(self) -> None:
        expected = (self.dim.n, 1 << (self.dim.n - 1))
        if self.planes.shape != expected or self.planes.dtype != bool:
            raise ValueError(f"occupancy must be boolean with shape {expected}")
        self.planes.setflags(write=False)

    def occupied_count(self) -> int:
        return int(self.planes.sum())

    def edge_endpoints(self, direction: int) -> tuple[np.ndarray, np.ndarray]:
        """Endpoint arrays (u, v) of the occupied edges along one direction."""
        idx = np.flatnonzero(self.planes[direction])
        u = _expand_plane_index(idx, direction)
        return u, u | (1 << direction)

    def contains_edge(self, edge: EdgeId) -> bool:
        d = edge.direction
        plane_idx = ((edge.vertex >> (d + 1)) << d) | (edge.vertex & ((1 << d) - 1))
        return bool(self.planes[d, plane_idx])


def sample_subgraph(dim: CubeDim, p: float, seed: SeedSpec) -> OccupiedGraph:
    """Sample each canonical edge independently with probability p."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    return OccupiedGraph(dim, edge_uniforms(dim, seed) < p, p, seed)


def coupled_sample(dim: CubeDim, p_list: list[float], seed: SeedSpec) -> list[OccupiedGraph]:
    """Monotone-coupled samples: one uniform per edge, thresholded at each p.

    Occupancy is nested along the (ascending) p list, so any cluster at a
    smaller p is contained in the corresponding cluster at a larger p.
    """
    if any(b < a for a, b in zip(p_list, p_list[1:])):
        raise ValueError("p_list must be ascending")
    if p_list and (p_list[0] < 0.0 or p_list[-1] > 1.0):
        raise ValueError("probabilities must lie in [0, 1]")
    u = edge_uniforms(dim, seed)
    return [OccupiedGraph(dim, u < p, p, seed) for p in p_list]


def union_graphs(a: OccupiedGraph, b: OccupiedGraph) -> OccupiedGraph:
    """Edgewise union; metadata density composes as p_a + p_b - p_a*p_b."""
    if a.dim != b.dim:
        raise ValueError("dimension mismatch")
    return OccupiedGraph(a.dim, a.planes | b.planes, a.p + b.p - a.p * b.p, None)


def sprinkle_split(n: int, p: float, eps: float) -> float:
    """Base density p_minus whose union with an eps/(2n) layer has density p.

    Solves p_minus + q - q*p_minus = p for q = eps/(2n), i.e. the two-layer
    decomposition of a density-p configuration into independent base and
    sprinkling layers.
    """
    if eps <= 0.0:
        raise ValueError("eps must be positive")
    q = eps / (2.0 * n)
    if q >= 1.0:
        raise ValueError("sprinkling layer density must be below 1")
    if p < q:
        raise ValueError(f"cannot split: p={p} is below the sprinkling density {q}")
    if p > 1.0:
        raise ValueError("p must lie in [0, 1]")
    return (p - q) / (1.0 - q)


_MAGIC = b"QOCC"
_HEADER = struct.Struct("<4sIIdQQ")
_FORMAT_VERSION = 1


def save_occupancy(graph: OccupiedGraph, path) -> None:
    """Raw occupancy dump: little-endian header, then one packed plane per direction."""
    seed = graph.seed or SeedSpec(0, 0)
    header = _HEADER.pack(_MAGIC, _FORMAT_VERSION, graph.dim.n, graph.p,
                          seed.master_seed & _MASK64, seed.replicate_index & _MASK64)
    with open(path, "wb") as fh:
        fh.write(header)
        for d in range(graph.dim.n):
            fh.write(np.packbits(graph.planes[d], bitorder="little").tobytes())


def load_occupancy(path) -> OccupiedGraph:
    with open(path, "rb") as fh:
        magic, version, n, p, master_seed, replicate_index = _HEADER.unpack(fh.read(_HEADER.size))
        if magic != _MAGIC:
            raise ValueError("not an occupancy dump")
        if version != _FORMAT_VERSION:
            raise ValueError(f"unsupported format version {version}")
        dim = CubeDim(n)
        half = 1 << (n - 1)
        plane_bytes = (half + 7) // 8
        planes = np.empty((n, half), dtype=bool)
        for d in range(n):
            raw = np.frombuffer(fh.read(plane_bytes), dtype=np.uint8)
            planes[d] = np.unpackbits(raw, bitorder="little")[:half].astype(bool)
    return OccupiedGraph(dim, planes, p, SeedSpec(master_seed, replicate_index))
