import pytest

from vankampen.diagram import (
    DiagramError,
    bdiam,
    boundary_word,
    geodesically_bounded,
    idiam,
    repeated_boundary_indices,
    simply_bounded,
    validate_diagram,
    vertex_distances,
)
from vankampen.gallery import figure_eight, notched_grid, square, tall_dipole
from vankampen.geodesics import bfs_geodesic_tree
from vankampen.icicle import all_icicles, icicle_at, maximal_icicles
from vankampen.oracle import Oracle, SearchBudget, diagram_key
from vankampen.surgery import (
    PadContext,
    SurgeryError,
    boundary_path,
    excise_and_replace_icicle,
    excise_and_replace_many,
    glue_along_boundary,
    make_geodesically_bounded,
    make_simply_bounded,
    mirror,
    pad_cut_vertex,
    prop5_pipeline,
    reversed_boundary_path,
)


@pytest.fixture(scope="module")
def ctx():
    from vankampen.gallery import z2

    return PadContext(Oracle(z2(), SearchBudget(4)))


def test_glue_two_squares_along_an_edge(Z2):
    a, b = square(), square()
    r = glue_along_boundary(a, boundary_path(a, 0, 1), b, reversed_boundary_path(b, 2, 1), Z2)
    d = validate_diagram(Z2, r.diagram)
    # Euler: V - E + F = 1 with 4 + 4 - 2 vertices and 4 + 4 - 1 edges
    assert (d.vertex_count, d.edge_count, d.face_count) == (6, 7, 2)
    assert d.basepoint == r.vertex_maps[0][a.basepoint]


def test_wedge(Z2):
    d = figure_eight()
    assert (d.vertex_count, d.face_count) == (7, 2)
    assert boundary_word(d) == Z2.parse_word("aba^-1b^-1aba^-1b^-1")


def test_glue_word_mismatch(Z2):
    a, b = square(), square()
    with pytest.raises(DiagramError):
        # a b against a^-1 b read on the far side of b
        glue_along_boundary(a, boundary_path(a, 0, 2), b, reversed_boundary_path(b, 0, 2), Z2)


def test_glue_wrong_side(Z2):
    a, b = square(), square()
    with pytest.raises(DiagramError):
        glue_along_boundary(a, boundary_path(a, 0, 1), b, boundary_path(b, 0, 1), Z2)


def test_mirror_reads_inverse(Z2):
    s = square()
    assert boundary_word(mirror(s)) == boundary_word(s).inverse()
    validate_diagram(Z2, mirror(s))


def test_pad_figure_eight(ctx):
    d = figure_eight()
    assert repeated_boundary_indices(d) == [4]
    v = boundary_path(d, 3, 2).word
    r = pad_cut_vertex(d, 4, ctx.pad(v), ctx.p)
    assert repeated_boundary_indices(r.diagram) == []
    assert boundary_word(r.diagram) == boundary_word(d)


def test_pad_rejects_bad_pad(ctx):
    d = figure_eight()
    with pytest.raises(DiagramError):
        pad_cut_vertex(d, 4, square(), ctx.p)


def test_make_simply_bounded(ctx):
    d = make_simply_bounded(figure_eight(), ctx)
    assert simply_bounded(d)
    assert [x for x in ctx.log if x.startswith("pad")]
    s = square()
    assert make_simply_bounded(s, ctx) is s


def test_routing_short_words(ctx):
    with pytest.raises(DiagramError):
        make_simply_bounded(tall_dipole(1), ctx)


def test_make_geodesically_bounded(ctx):
    u = notched_grid()
    before = bdiam(u)
    d = make_geodesically_bounded(u, ctx)
    assert geodesically_bounded(d) and simply_bounded(d)
    assert bdiam(d) > before
    assert boundary_word(d) == boundary_word(u)
    s = square()
    assert make_geodesically_bounded(s, ctx) is s


def test_geodesic_pad_keeps_distances(ctx):
    u = notched_grid()
    dist = vertex_distances(u)
    d = make_geodesically_bounded(u, ctx)
    nd = vertex_distances(d)
    # kept vertices keep their ids in the host
    assert all(nd[v] == dist[v] for v in range(u.vertex_count))


@pytest.mark.parametrize(
    "text,value,bound",
    [
        ("aba^-1b^-1", 8, 20),
        ("aabb^-1a^-1a^-1", 12, 24),
        ("abba^-1b^-1b^-1", 12, 24),
        ("aba^-1b^-1aba^-1b^-1", 16, 28),
    ],
)
def test_prop5(ctx, text, value, bound):
    w = ctx.p.parse_word(text)
    d = prop5_pipeline(w, ctx)
    assert boundary_word(d) == w
    assert simply_bounded(d) and geodesically_bounded(d)
    assert idiam(d) == value
    assert ctx.bound(len(w)) == bound


def test_prop5_short_word(ctx):
    d = prop5_pipeline(ctx.p.parse_word("bb^-1"), ctx)
    assert idiam(d) <= ctx.oracle.compute_M_P().value
    assert simply_bounded(d)


def test_prop5_without_simply_bounded_filling(ctx):
    with pytest.raises(DiagramError):
        prop5_pipeline(ctx.p.parse_word("ab"), ctx)


def test_replace_with_itself(Z2):
    s = square()
    t = bfs_geodesic_tree(s)
    r = excise_and_replace_icicle(s, t, icicle_at(s, t, 4), square(), Z2)
    assert diagram_key(r.diagram, Z2) == diagram_key(s, Z2)


def test_replace_shrinks_tall_body(Z2, ctx):
    d = tall_dipole(3)
    t = bfs_geodesic_tree(d)
    (top,) = maximal_icicles(all_icicles(d, t).values())
    assert len(top.body_faces) == 6
    rep = ctx.oracle.simply_bounded_data(top.eta_word(d)).diagram
    r = excise_and_replace_icicle(d, t, top, rep, Z2)
    assert r.diagram.face_count == 2
    assert boundary_word(r.diagram) == boundary_word(d)


def test_overlapping_icicles_rejected(Z2, rect):
    t = bfs_geodesic_tree(rect)
    ics = all_icicles(rect, t)
    with pytest.raises(DiagramError):
        excise_and_replace_many(rect, t, [ics[10], ics[12]], [square(), square()], Z2)


def test_surgery_error_is_assertion():
    assert issubclass(SurgeryError, AssertionError)
