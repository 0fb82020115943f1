"""Composition planning, mirror doubling, and geometric realization."""

import json

import numpy as np
import pytest

from conftest import triangle_strip, unit_triangle
from matchsticks import corpus
from matchsticks.construct import (
    ChainSpec,
    CompositionPlan,
    PartSpec,
    PlanError,
    RealizationFailedError,
    VertexOnAxisError,
    WrongDegreeError,
    chain_extend,
    chain_plan,
    degree2_vertices,
    mirror_double,
    plan_from_json,
    plan_to_json_dict,
    predicted_vertex_count,
    realize,
    ring_plan,
)
from matchsticks.model import EmbeddedGraph, degree_profile
from matchsticks.refine import refine
from matchsticks.verify import verify_matchstick


def certified(g: EmbeddedGraph) -> EmbeddedGraph:
    result = refine(g)
    assert result.converged
    report = verify_matchstick(result.graph)
    assert report.is_matchstick, report.classification
    return result.graph


def test_degree2_vertices_finds_ports():
    g = corpus.refined_graph("fig2a")
    ports = degree2_vertices(g)
    assert len(ports) == 2
    deg = g.degrees()
    assert all(deg[p] == 2 for p in ports)
    assert list(ports) == sorted(ports)


def test_ring_plan_arithmetic():
    part = PartSpec(corpus.refined_graph("fig2a"))
    plan = ring_plan([part] * 3)
    assert plan.subgraph_count == 3
    assert len(plan.identifications) == 3
    assert predicted_vertex_count(plan) == 22 * 3 - 3


def test_plan_validation_rejects_port_reuse():
    part = PartSpec(corpus.refined_graph("fig2a"))
    with pytest.raises(PlanError):
        CompositionPlan((part, part), ((0, 0, 1, 0), (0, 0, 1, 1)))


def test_plan_validation_rejects_bad_slot():
    part = PartSpec(corpus.refined_graph("fig2a"))
    with pytest.raises(PlanError):
        CompositionPlan((part, part), ((0, 2, 1, 0),))


def test_plan_validation_rejects_self_identification():
    part = PartSpec(corpus.refined_graph("fig2a"))
    with pytest.raises(PlanError):
        CompositionPlan((part,), ((0, 0, 0, 1),))


def test_plan_validation_rejects_disconnected_parts():
    part = PartSpec(corpus.refined_graph("fig2a"))
    with pytest.raises(PlanError):
        CompositionPlan((part, part, part, part), ((0, 0, 1, 0), (2, 0, 3, 0)))


def test_chain_spec_arithmetic():
    left = PartSpec(corpus.refined_graph("fig5a"))
    right = PartSpec(corpus.refined_graph("fig5c"))
    for n in range(6):
        assert ChainSpec(left, right, n).predicted_vertex_count() == 95 + 3 * n
    with pytest.raises(PlanError):
        ChainSpec(left, right, -1)


# -- mirror doubling ----------------------------------------------------------


def test_mirror_double_requires_degree2_join_vertices():
    g = corpus.refined_graph("fig2a")
    with pytest.raises(WrongDegreeError):
        mirror_double(g, 0, 1)  # generic interior vertices have degree 4
    ports = degree2_vertices(g)
    with pytest.raises(WrongDegreeError):
        mirror_double(g, ports[0], ports[0])


def test_mirror_double_rejects_vertex_on_axis():
    # a 4-cycle with an extra axis vertex subdividing nothing: A and B are the
    # join candidates, C sits exactly on the line through them
    coords = np.array([[0.0, 0.0], [0.0, 2.0], [0.0, 1.0], [0.9, 1.0]])
    edges = ((0, 2), (1, 2), (0, 3), (1, 3))
    g = EmbeddedGraph(coords, edges, 1.0)
    with pytest.raises(VertexOnAxisError):
        mirror_double(g, 0, 1, "line")


def test_mirror_double_mode_validated():
    g = corpus.refined_graph("fig2d")
    a, b = degree2_vertices(g)
    with pytest.raises(ValueError):
        mirror_double(g, a, b, "diagonal")


@pytest.mark.parametrize(
    "name,mode,expected",
    [("fig2d", "line", 66), ("fig2e", "line", 68), ("fig2f", "point", 70),
     ("fig2g", "line", 78), ("fig2h", "line", 80), ("fig5a", "line", 94),
     ("fig5c", "line", 96)],
)
def test_mirror_doubles_verify(name, mode, expected):
    g = corpus.refined_graph(name)
    a, b = degree2_vertices(g)
    doubled = certified(mirror_double(g, a, b, mode))
    assert doubled.vertex_count == expected
    assert doubled.edge_count == 2 * g.edge_count
    assert degree_profile(doubled).is_4_regular()


@pytest.mark.parametrize("mode", ["line", "point"])
def test_mirror_double_symmetry_permutation(mode):
    g = corpus.refined_graph("fig2d")
    a, b = degree2_vertices(g)
    doubled = mirror_double(g, a, b, mode)
    A, B = doubled.vertices[a], doubled.vertices[b]
    if mode == "line":
        u = (B - A) / np.hypot(*(B - A))
        rel = doubled.vertices - A
        along = (rel @ u)[:, None] * u
        image = A + 2 * along - rel
    else:
        image = (A + B) - doubled.vertices
    # every vertex's image is again a vertex; the pairing is an involution
    perm = []
    for p in image:
        dist = np.hypot(*(doubled.vertices - p).T)
        j = int(np.argmin(dist))
        assert dist[j] <= 1e-9
        perm.append(j)
    assert sorted(perm) == list(range(doubled.vertex_count))
    for i, j in enumerate(perm):
        assert perm[j] == i
    if mode == "line":
        assert perm[a] == a and perm[b] == b
    else:
        assert perm[a] == b and perm[b] == a


# -- realization --------------------------------------------------------------


def test_ring_of_three_identical_parts():
    part = PartSpec(corpus.refined_graph("fig2a"))
    g = certified(realize(ring_plan([part] * 3)))
    assert g.vertex_count == 63
    assert g.edge_count == 3 * 42
    assert degree_profile(g).is_4_regular()


def test_ring_of_three_mixed_parts():
    parts = [PartSpec(corpus.refined_graph(n)) for n in ("fig2a", "fig2b", "fig2c")]
    g = certified(realize(ring_plan(parts)))
    assert g.vertex_count == 22 + 30 + 31 - 3


def test_ring_of_four():
    part = PartSpec(corpus.refined_graph("fig2b"))
    g = certified(realize(ring_plan([part] * 4)))
    assert g.vertex_count == 116


def test_facing_pair_of_flexible_parts():
    pair = ring_plan(
        [PartSpec(corpus.refined_graph("fig5a")), PartSpec(corpus.refined_graph("fig5c"))]
    )
    g = certified(realize(pair))
    assert g.vertex_count == 95


def test_realize_merges_vertices_but_never_edges():
    part = PartSpec(corpus.refined_graph("fig2a"))
    plan = ring_plan([part] * 3)
    g = realize(plan)
    assert g.vertex_count == predicted_vertex_count(plan)
    assert g.edge_count == sum(p.graph.edge_count for p in plan.parts)


def test_ring_of_unit_triangles_leaves_spare_ports():
    tri = PartSpec(unit_triangle())
    g = certified(realize(ring_plan([tri] * 3)))
    assert g.vertex_count == 6
    assert degree_profile(g).counts == {2: 3, 4: 3}


def test_rigid_pair_with_mismatched_gaps_fails():
    pair = ring_plan(
        [PartSpec(corpus.refined_graph("fig2a")), PartSpec(corpus.refined_graph("fig2b"))]
    )
    with pytest.raises(RealizationFailedError):
        realize(pair)


def test_cycle_violating_triangle_inequality_fails():
    long_part = PartSpec(triangle_strip(8))  # port gap about 4.58
    tri = PartSpec(unit_triangle())
    with pytest.raises(RealizationFailedError):
        realize(ring_plan([long_part, tri, tri]))


# -- chains -------------------------------------------------------------------


def test_chain_with_one_spacer():
    g5a = corpus.refined_graph("fig5a")
    spec = ChainSpec(PartSpec(g5a), PartSpec(g5a, reflect=True), 1)
    g = certified(chain_extend(spec))
    assert g.vertex_count == 97
    assert degree_profile(g).is_4_regular()


def test_chain_with_zero_spacers_is_a_facing_pair():
    g5a = corpus.refined_graph("fig5a")
    g = certified(chain_extend(ChainSpec(PartSpec(g5a), PartSpec(g5a), 0)))
    assert g.vertex_count == 94


@pytest.mark.parametrize("n,expected", [(2, 100), (3, 103)])
def test_longer_chains(n, expected):
    g5a = corpus.refined_graph("fig5a")
    g = certified(chain_extend(ChainSpec(PartSpec(g5a), PartSpec(g5a), n)))
    assert g.vertex_count == expected


def test_chain_rejects_non_spacer_interior():
    g5a = corpus.refined_graph("fig5a")
    with pytest.raises(PlanError):
        chain_plan(ChainSpec(PartSpec(g5a), PartSpec(g5a), 1, spacer=unit_triangle()))


def test_chain_plan_structure():
    g5a = corpus.refined_graph("fig5a")
    plan = chain_plan(ChainSpec(PartSpec(g5a), PartSpec(g5a), 2))
    assert plan.subgraph_count == 4
    assert len(plan.identifications) == 2 * 3
    assert predicted_vertex_count(plan) == 100


# -- plan serialization -------------------------------------------------------


def test_plan_json_round_trip():
    plan = ring_plan(
        [PartSpec(corpus.refined_graph("fig2a"), label="fig2a")] * 3, name="r63"
    )
    payload = plan_to_json_dict(plan)
    assert payload["name"] == "r63"
    assert payload["parts"][0] == {"part": "fig2a", "reflect": False}
    restored = plan_from_json(json.dumps(payload))
    assert restored.name == "r63"
    assert restored.identifications == plan.identifications
    g = certified(realize(restored))
    assert g.vertex_count == 63


def test_plan_json_rejects_malformed_documents():
    with pytest.raises(PlanError):
        plan_from_json("{}")
    with pytest.raises(PlanError):
        plan_from_json('{"parts": ["no-such-part"], "identifications": []}')


def test_realized_graph_is_named_after_the_plan():
    part = PartSpec(corpus.refined_graph("fig2a"), label="fig2a")
    g = realize(ring_plan([part] * 3))
    assert g.name == "ring(fig2a,fig2a,fig2a)"
