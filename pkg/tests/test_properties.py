"""Invariants checked on randomly drawn diagrams from the enumerated corpus."""

from collections import deque

from hypothesis import given, settings, strategies as st

from vankampen.combing import (
    TameFunction,
    backward_chains,
    build_crossing_dag,
    graph_to_full_tame,
    obstruction_level,
    tameness_profile,
    variation_profile,
)
from vankampen.diagram import boundary_word, coarse_distance_field, validate_diagram
from vankampen.gallery import a3, grid, z2
from vankampen.geodesics import bfs_geodesic_tree, check_tree, tree_path
from vankampen.icicle import all_icicles, check_decomposition, classify_pair, flow_function
from vankampen.oracle import Oracle, SearchBudget, diagram_key, key_to_diagram
from vankampen.surgery import mirror

P = {"z2": z2(), "a3": a3()}


def _corpus():
    out = []
    for name, n in (("z2", 4), ("a3", 6)):
        o = Oracle(P[name], SearchBudget(4), use_cache=False)
        for w in o.words_up_to(n):
            out += [(name, d) for d in o.fillings(w).diagrams if d.dart_count]
    return out


CORPUS = _corpus()
diagrams = st.sampled_from(CORPUS)
prop = settings(max_examples=150, deadline=None)


def naive_distances(d):
    """BFS over an adjacency built straight from the dart list."""
    adj = {v: set() for v in range(d.vertex_count)}
    for x in range(d.dart_count):
        adj[d.origin[x]].add(d.origin[d.twin[x]])
    dist = {d.basepoint: 0}
    q = deque([d.basepoint])
    while q:
        u = q.popleft()
        for v in adj[u]:
            if v not in dist:
                dist[v] = dist[u] + 1
                q.append(v)
    return dist


@prop
@given(diagrams)
def test_field_matches_naive(item):
    _, d = item
    fld = coarse_distance_field(d)
    nd = naive_distances(d)
    assert list(fld.vertex) == [4 * nd[v] for v in range(d.vertex_count)]
    for e in d.edges:
        a, b = d.edge_ends(e)
        assert fld.edge(e) == 4 * min(nd[a], nd[b]) + 2
    for f in range(d.face_count):
        assert fld.face(f) == max(fld.edge(d.edge_of(x)) for x in d.faces[f]) - 1


@prop
@given(diagrams)
def test_theta_bijection(item):
    _, d = item
    t = bfs_geodesic_tree(d)
    check_tree(d, t)
    theta = flow_function(d, t)
    assert len(set(d.edges) - t.tree_edges) == d.face_count == len(theta)
    assert sorted(theta.values()) == list(range(d.face_count))


@prop
@given(diagrams)
def test_icicles_nest_or_are_disjoint(item):
    _, d = item
    t = bfs_geodesic_tree(d)
    ics = all_icicles(d, t)
    check_decomposition(d, ics)
    keys = sorted(ics)
    for i, a in enumerate(keys):
        for b in keys[i + 1:]:
            assert classify_pair(ics[a], ics[b]) in ("a_inside_b", "b_inside_a", "disjoint_interiors")


@prop
@given(diagrams, st.integers(0, 12))
def test_obstruction_unfolds(item, shift):
    _, d = item
    t = bfs_geodesic_tree(d)
    dag = build_crossing_dag(d, t, flow_function(d, t))
    prof = tameness_profile(d, t, dag)  # raises if DAG and flood fill disagree
    f = TameFunction({q: q + shift for q in range(200)})
    n = obstruction_level(prof, f)
    ok = all(prof.prior_max[e] <= f(q) for e, q in prof.dist.items())
    assert (n is None) == ok


@prop
@given(diagrams)
def test_variation_envelope(item):
    _, d = item
    t = bfs_geodesic_tree(d)
    dag = build_crossing_dag(d, t, flow_function(d, t))
    fld = coarse_distance_field(d)
    for e in dag.order:
        for c in backward_chains(dag, e, t.tree_edges):
            assert variation_profile(d, t, dag, c, "worst") >= variation_profile(d, t, dag, c, "best")
    for v in range(d.vertex_count):
        assert variation_profile(d, t, dag, [("v", v)]) == fld.vertex[v]
        assert len(tree_path(t, d, v)) * 4 == fld.vertex[v]


@settings(max_examples=100, deadline=None)
@given(st.lists(st.integers(0, 5), min_size=4, max_size=30), st.integers(1, 6))
def test_graph_to_full_tame_shift(steps, rho):
    vals, acc = {}, 0
    for q, s in enumerate(steps):
        acc += s
        vals[q] = acc
    f = TameFunction(vals)
    g = graph_to_full_tame(f, rho)
    assert {g(q) - f(q + 3) for q in g.domain} == {2 * rho - 1}


@prop
@given(diagrams)
def test_keys_round_trip_and_mirror(item):
    name, d = item
    p = P[name]
    k = diagram_key(d, p)
    back = validate_diagram(p, key_to_diagram(k, p))
    assert diagram_key(back, p) == k
    m = mirror(d)
    validate_diagram(p, m)
    assert boundary_word(m) == boundary_word(d).inverse()
    assert diagram_key(mirror(m), p) == k


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 4), st.integers(1, 4))
def test_grid_invariants(m, n):
    d = grid(m, n)
    t = bfs_geodesic_tree(d)
    assert sorted(flow_function(d, t).values()) == list(range(m * n))
    dag = build_crossing_dag(d, t, flow_function(d, t))
    tameness_profile(d, t, dag)
