import numpy as np
import pytest

from vankampen.diagram import single_vertex_diagram
from vankampen.gallery import grid, square, tall_dipole
from vankampen.geodesics import bfs_geodesic_tree
from vankampen.icicle import icicle_at
from vankampen.render import RenderError, RenderStyle, render_svg, tutte_layout


def test_s1_tree_highlight():
    svg = render_svg(square(), RenderStyle(highlight="tree"))
    assert svg.count("<circle") == 4
    assert svg.count('stroke-width="3"') == 3


def test_rectangle_icicle_shading():
    d = grid(2, 1)
    t = bfs_geodesic_tree(d)
    body = icicle_at(d, t, 12).body_faces
    svg = render_svg(d, RenderStyle(highlight=("icicle", 12)))
    assert svg.count("<polygon") == len(body) == 2


def test_single_vertex_is_a_dot():
    svg = render_svg(single_vertex_diagram())
    assert svg.count("<circle") == 1
    assert "<path" not in svg


def test_deterministic_bytes():
    d = grid(3, 2)
    assert render_svg(d) == render_svg(d)


def test_interior_vertices_are_barycentres():
    d = grid(2, 2)
    pos = tutte_layout(d)
    centre = 4
    nb = [d.head(x) for x in d.rotation[centre]]
    assert np.allclose(pos[centre], pos[nb].mean(axis=0))


def test_iterative_layout_matches_exact():
    d = grid(2, 2)
    assert np.allclose(tutte_layout(d, iterations=500, tol=1e-10), tutte_layout(d), atol=1e-6)


def test_iterative_layout_gives_up():
    with pytest.raises(RenderError):
        tutte_layout(tall_dipole(4), iterations=1, tol=1e-12)


@pytest.mark.parametrize("kw", [{"iterations": 0}, {"highlight": "nope"}, {"highlight": ("face", 1)}])
def test_bad_style(kw):
    with pytest.raises(ValueError):
        RenderStyle(**kw)
