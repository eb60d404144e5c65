"""Connected-component labeling of bond configurations and the component census.

Labeling is a flat-array union-find (path compression + union by size),
processed one occupancy plane at a time.  The hot loops are jitted with
numba when it is importable and degrade to plain Python otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cube import CubeDim
from .gen import OccupiedGraph

__all__ = [
    "ClusterLabeling",
    "label_components",
    "cluster_size_of",
    "count_z_geq",
    "top_two",
]

try:
    from numba import njit
except ImportError:  # pragma: no cover - numba is a declared dependency
    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]

        def deco(func):
            return func

        return deco


@njit(cache=True)
def _union_edges(parent, size, us, vs):  # pragma: no cover - exercised via label_components
    for k in range(us.shape[0]):
        u = us[k]
        while parent[u] != u:
            parent[u] = parent[parent[u]]
            u = parent[u]
        v = vs[k]
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        if u == v:
            continue
        if size[u] < size[v]:
            u, v = v, u
        parent[v] = u
        size[u] += size[v]


@njit(cache=True)
def _flatten(parent):  # pragma: no cover - exercised via label_components
    for i in range(parent.shape[0]):
        r = i
        while parent[r] != r:
            r = parent[r]
        j = i
        while parent[j] != r:
            nxt = parent[j]
            parent[j] = r
            j = nxt


@dataclass(frozen=True)
class ClusterLabeling:
    """Component partition of one graph.

    root_of maps every vertex to its fully compressed representative;
    size_by_root gives the component size at each representative index;
    sizes_desc is the multiset of component sizes, largest first.
    """

    dim: CubeDim
    root_of: np.ndarray
    size_by_root: np.ndarray
    sizes_desc: np.ndarray

    def __post_init__(self) -> None:
        self.root_of.setflags(write=False)
        self.size_by_root.setflags(write=False)
        self.sizes_desc.setflags(write=False)


def label_components(graph: OccupiedGraph) -> ClusterLabeling:
    """Union-find labeling over the occupied edges of one configuration."""
    v_count = graph.dim.volume
    parent = np.arange(v_count, dtype=np.int32)
    size = np.ones(v_count, dtype=np.int32)
    for d in range(graph.dim.n):
        u, v = graph.edge_endpoints(d)
        _union_edges(parent, size, u.astype(np.int32), v.astype(np.int32))
    _flatten(parent)
    size_by_root = np.bincount(parent, minlength=v_count).astype(np.int64)
    sizes = size_by_root[size_by_root > 0]
    sizes_desc = np.sort(sizes)[::-1].copy()
    return ClusterLabeling(graph.dim, parent, size_by_root, sizes_desc)


def cluster_size_of(labeling: ClusterLabeling, vertex: int) -> int:
    """Size of the component containing `vertex`."""
    return int(labeling.size_by_root[labeling.root_of[vertex]])


def count_z_geq(labeling: ClusterLabeling, k: int) -> int:
    """Number of vertices whose component has at least k members."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    sizes = labeling.sizes_desc
    return int(sizes[sizes >= k].sum())


def top_two(labeling: ClusterLabeling) -> tuple[int, int]:
    """Sizes of the largest and second-largest components (0 when absent)."""
    sizes = labeling.sizes_desc
    second = int(sizes[1]) if sizes.shape[0] > 1 else 0
    return int(sizes[0]), second
