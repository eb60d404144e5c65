import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cubeperc.clusters import (
    cluster_size_of,
    count_z_geq,
    label_components,
    top_two,
)
from cubeperc.cube import CubeDim
from cubeperc.gen import OccupiedGraph, SeedSpec, coupled_sample, sample_subgraph

from _reference import bfs_component_sizes


def _graph_from_planes(dim, plane_bits):
    planes = np.array(plane_bits, dtype=bool)
    return OccupiedGraph(dim, planes, 0.0, None)


def test_label_extremes():
    dim = CubeDim(6)
    empty = label_components(sample_subgraph(dim, 0.0, SeedSpec(0)))
    assert empty.sizes_desc.tolist() == [1] * 64
    full = label_components(sample_subgraph(dim, 1.0, SeedSpec(0)))
    assert full.sizes_desc.tolist() == [64]
    assert top_two(full) == (64, 0)
    assert top_two(empty) == (1, 1)


def test_hand_built_two_components():
    # n=2 with edges 00-01 and 10-11 only: direction-0 plane fully occupied
    dim = CubeDim(2)
    lab = label_components(_graph_from_planes(dim, [[True, True], [False, False]]))
    assert lab.sizes_desc.tolist() == [2, 2]
    assert top_two(lab) == (2, 2)
    assert cluster_size_of(lab, 0) == 2
    assert lab.root_of[0] == lab.root_of[1]
    assert lab.root_of[2] == lab.root_of[3]
    assert lab.root_of[0] != lab.root_of[2]


def test_sizes_partition_volume():
    dim = CubeDim(8)
    for rep in range(5):
        lab = label_components(sample_subgraph(dim, 0.2, SeedSpec(11, rep)))
        assert lab.sizes_desc.sum() == dim.volume
        assert (np.sort(lab.sizes_desc)[::-1] == lab.sizes_desc).all()


def test_adjacent_occupied_share_representative():
    dim = CubeDim(7)
    g = sample_subgraph(dim, 0.3, SeedSpec(21, 0))
    lab = label_components(g)
    for d in range(dim.n):
        us, vs = g.edge_endpoints(d)
        assert (lab.root_of[us] == lab.root_of[vs]).all()


@given(n=st.integers(2, 10), p=st.floats(0.0, 1.0), rep=st.integers(0, 1000))
@settings(deadline=None, max_examples=60)
def test_agrees_with_bfs_reference(n, p, rep):
    dim = CubeDim(n)
    g = sample_subgraph(dim, p, SeedSpec(314, rep))
    lab = label_components(g)
    ref_label, ref_sizes = bfs_component_sizes(g)
    assert lab.sizes_desc.tolist() == ref_sizes.tolist()
    # identical partition: same-root exactly when same BFS label
    order = np.argsort(ref_label, kind="stable")
    boundaries = np.flatnonzero(np.diff(ref_label[order])) + 1
    for group in np.split(order, boundaries):
        roots = lab.root_of[group]
        assert (roots == roots[0]).all()


def test_double_counting_identity():
    # sum of squared sizes equals the sum over vertices of their cluster size
    dim = CubeDim(6)
    for rep in range(4):
        lab = label_components(sample_subgraph(dim, 0.25, SeedSpec(77, rep)))
        ssq = int((lab.sizes_desc**2).sum())
        by_vertex = sum(cluster_size_of(lab, v) for v in range(dim.volume))
        assert ssq == by_vertex


def test_count_z_geq_properties():
    dim = CubeDim(5)
    lab = label_components(sample_subgraph(dim, 0.3, SeedSpec(8)))
    assert count_z_geq(lab, 0) == 32
    assert count_z_geq(lab, 1) == 32
    assert count_z_geq(lab, int(lab.sizes_desc[0]) + 1) == 0
    values = [count_z_geq(lab, k) for k in range(34)]
    assert all(a >= b for a, b in zip(values, values[1:]))
    with pytest.raises(ValueError):
        count_z_geq(lab, -1)
    singletons = label_components(sample_subgraph(dim, 0.0, SeedSpec(8)))
    assert count_z_geq(singletons, 2) == 0


@given(rep=st.integers(0, 500))
@settings(deadline=None, max_examples=40)
def test_monotone_coupling_of_observables(rep):
    dim = CubeDim(8)
    graphs = coupled_sample(dim, [0.1, 0.2, 0.4], SeedSpec(99, rep))
    labs = [label_components(g) for g in graphs]
    cmaxes = [top_two(lab)[0] for lab in labs]
    assert cmaxes == sorted(cmaxes)
    for k in (2, 4, 16, 64):
        zs = [count_z_geq(lab, k) for lab in labs]
        assert zs == sorted(zs)
    # coupled clusters are nested vertex-wise
    for small, big in zip(labs, labs[1:]):
        for v in (0, 17, 255):
            assert cluster_size_of(small, v) <= cluster_size_of(big, v)
