import pytest

from vankampen.diagram import coarse_distance_field, single_vertex_diagram
from vankampen.gallery import grid, notched_grid
from vankampen.geodesics import (
    TreeError,
    any_spanning_tree,
    bfs_geodesic_tree,
    check_tree,
    tree_path,
    verify_partial_geodesic_extension,
)


def test_s1_tree(S1):
    t = bfs_geodesic_tree(S1)
    assert t.parent_dart == (-1, 1, 3, 7)
    assert t.depth == (0, 4, 8, 4)
    # v0v1, v0v3 and the smaller of the two darts reaching v2 (from v1)
    assert sorted(t.tree_edges) == [0, 2, 6]
    check_tree(S1, t)


def test_single_vertex_tree():
    t = bfs_geodesic_tree(single_vertex_diagram())
    assert t.parent_dart == (-1,)
    assert not t.tree_edges


def test_rectangle_depths(rect):
    t = bfs_geodesic_tree(rect)
    assert list(t.depth) == list(coarse_distance_field(rect).vertex)


def test_tree_paths(S1):
    t = bfs_geodesic_tree(S1)
    assert tree_path(t, S1, 0) == []
    assert len(tree_path(t, S1, 2)) == 2


def test_extension_of_full_tree_is_identity(rect):
    t = bfs_geodesic_tree(rect)
    parents = {v: x for v, x in enumerate(t.parent_dart) if x >= 0}
    depths = dict(enumerate(t.depth))
    assert verify_partial_geodesic_extension(rect, parents, depths) == t


def test_extension_from_basepoint_is_bfs():
    d = notched_grid()
    assert verify_partial_geodesic_extension(d, {}, {d.basepoint: 0}) == bfs_geodesic_tree(d)


def test_extension_rejects_bad_depth(rect):
    with pytest.raises(TreeError):
        verify_partial_geodesic_extension(rect, {}, {rect.basepoint: 0, 5: 4})


def test_any_tree_not_geodesic():
    d = grid(2, 2)
    t = any_spanning_tree(d)
    check_tree(d, t)
    assert not t.geodesic
    with pytest.raises(TreeError):
        check_tree(d, bfs_geodesic_tree(d).__class__(0, t.parent_dart, t.depth, True, d.twin))
