import itertools

import pytest

from corpus import a1_window, a2_window, criterion7_graphs, edge_sections, full_graph, single_edge
from momentgraphs.bm import (
    BMSheaf,
    bm_construct,
    check_soergel_assumptions,
    endomorphism_image,
    global_sections,
    hom_dimension,
    struktursatz_report,
    subgeneric_report,
)
from momentgraphs.exactpoly import graded_dim
from momentgraphs.moment_graph import build_moment_graph, delta_condition_check, gkm_check, make_graph
from momentgraphs.sections import SectionModule, check_projective, describe, stalk
from momentgraphs.structure import structure_dims


def a2_path():
    """Three A2 weights forming a path with two different labels."""
    G = full_graph(a2_window(1, 4)).subgraph([0, 1, 2])
    assert [(e.u, e.v) for e in G.edges] == [(1, 0), (0, 2)]
    return G


def rank_two_graph():
    """Five A2 weights whose top vertex receives two boundary generators."""
    return full_graph(a2_window(1, 4)).subgraph([0, 1, 2, 4, 5])


def test_one_vertex():
    G = make_graph(1, [], 2)
    B = bm_construct(G)
    assert B.stalks == {0: (0,)}
    gamma = global_sections(B)
    assert gamma.hilbert(3) == [1, 2, 3, 4]
    assert endomorphism_image(gamma, 3).dims == (1, 2, 3, 4)


def test_single_edge_hand_run():
    B = bm_construct(single_edge(), 0, 4)
    assert B.stalks == {0: (0,), 1: (0,)}
    # the boundary S/x is one-dimensional in degree 0 only
    assert B.construction_log[1] == (1, 0, 0, 0, 0)
    gamma = global_sections(B)
    assert [e for e, _ in gamma.minimal_generators()] == [0, 1]
    Z = edge_sections(4)
    assert all(gamma.piece(d) == Z.piece(d) for d in range(5))


def test_a2_path():
    G = a2_path()
    B = bm_construct(G, None, 5)
    assert B.base == 1
    assert [B.stalk_rank(v) for v in range(3)] == [1, 1, 1]
    assert B.stalks == {0: (0,), 1: (0,), 2: (0,)}
    gamma = global_sections(B)
    for v in range(3):
        assert describe(stalk(gamma, v)).generator_degrees == B.stalks[v]
    assert check_projective(gamma).passed


def test_construct_errors():
    with pytest.raises(ValueError):
        bm_construct(make_graph(3, [(0, 1, [1]), (0, 2, [1])], 1))
    with pytest.raises(ValueError):
        bm_construct(make_graph(3, [(0, 2, [1, 0]), (1, 2, [0, 1])], 2))


def test_base_must_be_minimal():
    G = make_graph(3, [(0, 1, [1, 0]), (0, 2, [0, 1])], 2)
    with pytest.raises(ValueError):
        bm_construct(G, 1, 3)
    B = bm_construct(G, 0, 3)
    assert all(B.stalk_rank(v) == 1 for v in range(3))


@pytest.mark.parametrize("G", [G for G in criterion7_graphs() if len(G) <= 4][::7])
def test_stalks_agree_with_projections(G):
    """Stalks recorded during the construction equal the stalks of the global sections."""
    B = bm_construct(G, None, G.diameter() + 2)
    gamma = global_sections(B)
    for v in range(len(G)):
        assert describe(stalk(gamma, v)).generator_degrees == B.stalks.get(v, ())


def test_soergel_examples():
    assert check_soergel_assumptions(single_edge(), None, None, 4).passed
    W = a2_window(1, 4)
    rep = check_soergel_assumptions(full_graph(W), None, [0, 4, 6], 4)
    assert not rep.delta_condition and not rep.passed
    rep = check_soergel_assumptions(rank_two_graph(), None, None, 5)
    assert not rep.multiplicity_free and rep.stalk_ranks == (1, 1, 1, 2, 1)
    assert rep.support_equals_k and rep.delta_condition


def test_endomorphism_examples():
    gamma = global_sections(bm_construct(single_edge(), 0, 4))
    assert endomorphism_image(gamma).dims == (1, 2, 2, 2, 2)
    V = SectionModule.standard(make_graph(1, [], 2), 0, 4)
    assert endomorphism_image(V).dims == tuple(graded_dim(d, 2) for d in range(5))
    G = a2_path()
    gamma = global_sections(bm_construct(G, None, 4))
    assert endomorphism_image(gamma).dims == tuple(structure_dims(G, 4))


def test_hom_examples():
    G = single_edge()
    V1 = SectionModule.standard(G, 1, 3)
    V0 = SectionModule.standard(G, 0, 3)
    assert hom_dimension(V1, V1, 0) == 1
    assert hom_dimension(V0, V1, 0) == 0
    gamma = global_sections(bm_construct(G, 0, 3))
    assert [hom_dimension(gamma, V, 0) for V in (V0, V1)] == [1, 1]


@pytest.mark.parametrize("G", [single_edge(), a2_path()])
def test_hom_from_structure_module(G):
    """``Z`` is free of rank one over itself, so ``Hom(Z, N)_k = N_k``."""
    D = 3
    Z = SectionModule.structure_module(G, D)
    targets = [Z] + [SectionModule.standard(G, v, D) for v in range(len(G))]
    for N in targets:
        for k in range(D + 1):
            assert hom_dimension(Z, N, k) == N.hilbert()[k]


def test_subgeneric_report():
    rep = subgeneric_report(single_edge(), 5)
    assert rep.passed and rep.multiplicities == (1, 1)
    W = a1_window(2, 4)
    rep = subgeneric_report(build_moment_graph(W, [1, 2]), 4)
    assert rep.passed
    with pytest.raises(ValueError):
        subgeneric_report(a2_path())


def test_struktursatz_multiplicity_free():
    rep = struktursatz_report(a2_path(), None, 4)
    assert rep.passed and rep.stalk_ranks == (1, 1, 1)


def test_struktursatz_rank_two_counts_degrees():
    # the rank-two stalk has generators in degrees 0 and 1; degree-0 maps see dim S_0 + dim S_1
    rep = struktursatz_report(rank_two_graph(), None, 5)
    assert rep.stalk_ranks[3] == 2 and rep.hom_dims[3] == 1 + 2


def test_sheaf_json_round_trip():
    for G in (single_edge(), a2_path(), rank_two_graph()):
        B = bm_construct(G, None, 4)
        text = B.to_json()
        C = BMSheaf.from_json(text)
        assert C.to_json() == text
        assert C.stalks == B.stalks and C.edge_maps == B.edge_maps


def test_delta_condition_subsets_build():
    W = a1_window(2, 4)
    for K in itertools.combinations(range(len(W)), 2):
        G = build_moment_graph(W, K)
        if gkm_check(G) is None and len(G.minimal_vertices()) == 1 and delta_condition_check(G.vertices):
            assert check_projective(global_sections(bm_construct(G, None, 4))).passed


def test_hom_into_standard_counts_graded_stalk():
    """``Hom(Gamma, V(nu))_0`` is ``sum_i dim S_{e_i}`` over the stalk generator degrees ``e_i`` at ``nu``.

    With multiplicity one every ``e_i`` is 0 and this is the stalk rank.
    """
    for G in criterion7_graphs()[::3]:
        D = G.diameter() + 2
        B = bm_construct(G, None, D)
        gamma = global_sections(B)
        for nu in range(len(G)):
            want = sum(graded_dim(e, G.nvars) for e in B.stalks.get(nu, ()))
            assert hom_dimension(gamma, SectionModule.standard(G, nu, D), 0) == want
            if B.stalk_rank(nu) <= 1:
                assert want == B.stalk_rank(nu)
