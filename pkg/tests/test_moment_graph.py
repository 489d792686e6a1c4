import itertools
import json
import random

import pydot
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from corpus import A1, A2, a1_window, a2_window, delta_condition_subsets, full_graph, single_edge, translate_pair_subsets
from momentgraphs.exactpoly import LinearForm
from momentgraphs.moment_graph import (
    MomentGraph,
    build_moment_graph,
    delta_condition_check,
    export_graph,
    gkm_check,
    import_graph,
    make_graph,
)
from momentgraphs.roots import Weight, dot_reflect


def brute_edges(rs, weights):
    """Pairs related by some affine dot reflection, with the coroot of the finite part as label."""
    out = {}
    for i, j in itertools.combinations(range(len(weights)), 2):
        for a in rs.roots:
            if any(dot_reflect(rs, weights[i], a, n) == weights[j] for n in range(-6, 7)):
                out[(i, j)] = rs.coroot(a).normalized()
                break
    return out


@pytest.mark.parametrize("W", [a1_window(2, 4), a2_window(1, 4), a2_window(1, 2, (-1, 0))])
def test_edges_match_brute_force(W):
    G = full_graph(W)
    got = {(min(e.u, e.v), max(e.u, e.v)): e.label for e in G.edges}
    assert got == brute_edges(W.root_system, G.vertices)
    for e in G.edges:
        assert G.lt(e.u, e.v)


def test_three_vertex_a1_graph():
    W = a1_window(2, 4)
    G = build_moment_graph(W, [0, 1, 2])
    assert G.vertices == (Weight([-2], 0), Weight([0], 0), Weight([-2], 1))
    assert [(e.u, e.v) for e in G.edges] == [(0, 1), (1, 2)]
    v = gkm_check(G)
    assert v is not None and v.vertex == 1
    assert not delta_condition_check(G.vertices)


def test_single_edge_examples():
    G = single_edge()
    assert gkm_check(G) is None
    assert G.minimal_vertices() == [0] and G.diameter() == 1
    assert build_moment_graph(a1_window(2, 4), [1]).edges == ()


def test_delta_condition_examples():
    assert delta_condition_check([Weight([0], 0), Weight([-2], 1)])
    assert not delta_condition_check([Weight([0], 0), Weight([0], 2)])
    assert delta_condition_check([])


def test_gkm_for_delta_condition_subsets():
    rng = random.Random(3)
    for W in (a1_window(2, 4), a2_window(1, 4), a2_window(2, 2, (-1, 0))):
        for K in delta_condition_subsets(W, rng, 40):
            G = build_moment_graph(W, K)
            assert delta_condition_check(G.vertices)
            assert gkm_check(G) is None


def test_translate_pairs_violate_gkm():
    for W in (a1_window(2, 4), a2_window(1, 4)):
        triples = translate_pair_subsets(W)
        assert triples
        for K in triples:
            assert gkm_check(build_moment_graph(W, K)) is not None


def test_make_graph_validation():
    with pytest.raises(ValueError):
        make_graph(2, [(0, 0, [1])], 1)
    with pytest.raises(ValueError):
        make_graph(2, [(0, 1, [0])], 1)
    with pytest.raises(ValueError):
        make_graph(2, [(0, 1, [1]), (1, 0, [1])], 1)
    G = make_graph(3, [(0, 1, [1, 0]), (1, 2, [0, 1])], 2)
    assert G.lt(0, 2) and G.linear_extension() == [0, 1, 2]


def test_json_round_trip_is_byte_identical():
    for W in (a1_window(2, 4), a2_window(1, 4)):
        G = full_graph(W)
        text = export_graph(G)
        H = import_graph(text)
        assert H == G
        assert export_graph(H) == text
    G = make_graph(2, [(0, 1, [1, 2])], 2)
    assert export_graph(import_graph(export_graph(G))) == export_graph(G)


def test_malformed_json():
    with pytest.raises(ValueError):
        import_graph(json.dumps({"vertices": []}))
    with pytest.raises(json.JSONDecodeError):
        import_graph("{not json")


@pytest.mark.parametrize("W", [a1_window(2, 4), a2_window(1, 4)])
def test_dot_parses(W):
    G = full_graph(W)
    (dot,) = pydot.graph_from_dot_data(export_graph(G, "dot"))
    assert len([e for e in dot.get_edges()]) == len(G.edges)
    names = {n.get_name() for n in dot.get_nodes()}
    assert {f"n{i}" for i in range(len(G))} <= names


def test_empty_graph_dot():
    G = MomentGraph((), frozenset(), (), 1)
    (dot,) = pydot.graph_from_dot_data(export_graph(G, "dot"))
    assert dot.get_edges() == []
    with pytest.raises(ValueError):
        export_graph(G, "xml")


@settings(max_examples=30)
@given(st.sets(st.integers(0, 11), min_size=1, max_size=7))
def test_subgraph_matches_rebuild(K):
    W = a2_window(1, 4)
    assert full_graph(W).subgraph(sorted(K)) == build_moment_graph(W, K)


def test_label_is_normalized():
    G = make_graph(2, [(0, 1, [-2, -4])], 2)
    assert G.edges[0].label.is_proportional(LinearForm([1, 2]))
    assert A1.coroot((1,)).normalized() == A1.coroot((-1,)).normalized()
    assert len(A2.roots) == 6
