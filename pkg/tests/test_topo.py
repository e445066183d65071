import json
import time

import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from taqr.errors import (
    DisconnectedGraphError,
    InvalidInputError,
    LevelIndexError,
    SpecParseError,
)
from taqr.topo import (
    TransitionGraph,
    articulation_points,
    bfs_layers,
    bipartite_graph,
    build_static_scheme,
    complete_graph,
    line_graph,
    load_graph,
    preset_graph,
    prune_for_row,
    random_connected_graph,
    removable_levels,
    star_graph,
)


def to_nx(g, active=None):
    G = nx.Graph()
    nodes = range(g.dim) if active is None else active
    G.add_nodes_from(nodes)
    G.add_edges_from((i, j) for i, j in g.edges if i in G and j in G)
    return G


def edge_set(*pairs):
    return frozenset(tuple(int(c) for c in p) for p in pairs)


@st.composite
def connected_graphs(draw, max_dim=9):
    d = draw(st.integers(2, max_dim))
    seed = draw(st.integers(0, 2**32 - 1))
    prob = draw(st.sampled_from([0.0, 0.2, 0.5, 1.0]))
    return random_connected_graph(d, seed, prob)


class TestPresets:
    @pytest.mark.parametrize(
        "spec,edges",
        [
            ("line:4", edge_set("01", "12", "23")),
            ("star:4", edge_set("01", "02", "03")),
            ("bipartite:4:2", edge_set("02", "03", "12", "13")),
            ("complete:3", edge_set("01", "02", "12")),
        ],
    )
    def test_edges(self, spec, edges):
        assert preset_graph(spec).edges == edges

    @pytest.mark.parametrize("spec", ["line", "line:x", "ring:4", "bipartite:4", "bipartite:4:4", "bipartite:4:0", "star:4:1"])
    def test_malformed(self, spec):
        with pytest.raises(SpecParseError):
            preset_graph(spec)

    def test_bipartite_edge_count(self):
        assert len(bipartite_graph(7, 3).edges) == 3 * 4

    def test_line_one_level(self):
        g = line_graph(1)
        assert g.edges == frozenset() and g.is_connected()


class TestGraphValue:
    def test_self_loop(self):
        with pytest.raises(InvalidInputError):
            TransitionGraph(3, [(1, 1)])

    def test_out_of_range(self):
        with pytest.raises(LevelIndexError):
            TransitionGraph(3, [(0, 3)])

    def test_default_weight(self):
        g = TransitionGraph(3, [(0, 1), (1, 2)], {"1-2": 0.5})
        assert g.weight(0, 1) == 1.0
        assert g.weight(2, 1) == 0.5

    def test_weight_on_non_edge(self):
        with pytest.raises(InvalidInputError):
            TransitionGraph(3, [(0, 1)], {"0-2": 1.0})

    def test_json_round_trip(self, tmp_path):
        g = TransitionGraph(4, [(0, 1), (1, 2), (1, 3)], {"1-3": 0.25})
        path = tmp_path / "g.json"
        path.write_text(json.dumps(g.to_dict()))
        assert load_graph(path) == g

    def test_disconnected(self):
        g = TransitionGraph(4, [(0, 1), (2, 3)])
        assert not g.is_connected()
        with pytest.raises(DisconnectedGraphError):
            g.require_connected()
        with pytest.raises(DisconnectedGraphError):
            build_static_scheme(g)


class TestRemovable:
    def test_line(self):
        assert removable_levels(line_graph(4)) == {0, 3}

    def test_star(self):
        assert removable_levels(star_graph(4)) == {1, 2, 3}

    def test_complete(self):
        assert removable_levels(complete_graph(4)) == {0, 1, 2, 3}

    def test_disconnected_active(self):
        with pytest.raises(DisconnectedGraphError):
            removable_levels(line_graph(4), {0, 1, 3})

    @settings(max_examples=200, deadline=None)
    @given(g=connected_graphs())
    def test_matches_networkx(self, g):
        assert articulation_points(g) == set(nx.articulation_points(to_nx(g)))
        assert len(removable_levels(g)) >= 2

    @settings(max_examples=100, deadline=None)
    @given(g=connected_graphs(), data=st.data())
    def test_induced_subgraph(self, g, data):
        active = set(data.draw(st.sets(st.integers(0, g.dim - 1), min_size=2)))
        G = to_nx(g, active)
        if not nx.is_connected(G):
            with pytest.raises(DisconnectedGraphError):
                removable_levels(g, active)
            return
        assert removable_levels(g, active) == active - set(nx.articulation_points(G))


class TestBfs:
    def test_star(self):
        assert bfs_layers(star_graph(4), range(4), 3) == [[3], [0], [1, 2]]

    def test_line(self):
        assert bfs_layers(line_graph(4), range(4), 3) == [[3], [2], [1], [0]]

    @settings(max_examples=150, deadline=None)
    @given(g=connected_graphs(), data=st.data())
    def test_matches_networkx(self, g, data):
        root = data.draw(st.integers(0, g.dim - 1))
        layers = bfs_layers(g, range(g.dim), root)
        dist = nx.single_source_shortest_path_length(to_nx(g), root)
        for l, layer in enumerate(layers):
            assert all(dist[v] == l for v in layer)
        flat = [v for layer in layers for v in layer]
        assert sorted(flat) == list(range(g.dim))


class TestScheme:
    def test_line4(self):
        s = build_static_scheme(line_graph(4))
        assert s.rows == (
            (3, ((0, 1), (1, 2), (2, 3))),
            (2, ((0, 1), (1, 2))),
            (1, ((0, 1),)),
        )
        assert s.last == 0

    def test_star4_first_row(self):
        s = build_static_scheme(star_graph(4), layer_order="ascending")
        assert s.rows[0] == (3, ((1, 0), (2, 0), (0, 3)))
        assert s.row_order == [3, 2, 1, 0]

    def test_star4_default_layer_order(self):
        s = build_static_scheme(star_graph(4))
        assert s.rows[0] == (3, ((2, 0), (1, 0), (0, 3)))

    def test_bad_layer_order(self):
        with pytest.raises(InvalidInputError):
            build_static_scheme(line_graph(3), layer_order="random")

    def test_two_levels(self):
        s = build_static_scheme(line_graph(2))
        assert s.rows == ((1, ((0, 1),)),)

    def test_single_level(self):
        s = build_static_scheme(line_graph(1))
        assert s.rows == () and s.last == 0

    def test_weights_pick_pivot(self):
        # level 3 can pivot through 1 or 2; the lighter edge wins
        edges = [(0, 1), (0, 2), (1, 3), (2, 3)]
        heavy = TransitionGraph(4, edges, {"1-3": 5.0})
        light = TransitionGraph(4, edges)
        s_heavy = build_static_scheme(heavy, [0, 1, 2])
        s_light = build_static_scheme(light, [0, 1, 2])
        assert (3, 2) in s_heavy.rows[0][1]
        assert (3, 1) in s_light.rows[0][1]

    def test_row_order_override(self):
        s = build_static_scheme(line_graph(4), [0, 1, 2, 3])
        assert s.row_order == [0, 1, 2, 3]
        s.validate(line_graph(4))

    @pytest.mark.parametrize("order", [[1, 0, 2], [3, 3, 2], [3, 2]])
    def test_row_order_rejected(self, order):
        with pytest.raises(InvalidInputError):
            build_static_scheme(line_graph(4), order)

    @settings(max_examples=200, deadline=None)
    @given(g=connected_graphs(max_dim=10), layer_order=st.sampled_from(["descending", "ascending"]))
    def test_invariants(self, g, layer_order):
        s = build_static_scheme(g, layer_order=layer_order)
        d = g.dim
        assert len(s.rows) == d - 1
        assert s.step_count == d * (d - 1) // 2
        s.validate(g)
        active = set(range(d))
        for row, _ in s.rows:
            active.remove(row)
            assert nx.is_connected(to_nx(g, active))

    def test_validate_catches_bad_pivot(self):
        g = line_graph(3)
        s = build_static_scheme(g)
        bad = type(s)(3, ((2, ((0, 1), (1, 0))),) + s.rows[1:], s.last)
        with pytest.raises(InvalidInputError):
            bad.validate(g)

    def test_flat_arrays(self):
        rows, offsets, zs, ps = build_static_scheme(line_graph(4)).flat
        assert rows.tolist() == [3, 2, 1]
        assert offsets.tolist() == [0, 3, 5, 6]
        assert zs.tolist() == [0, 1, 2, 0, 1, 0]
        assert ps.tolist() == [1, 2, 3, 1, 2, 1]

    def test_construction_speed_d32(self):
        for g in (line_graph(32), star_graph(32), bipartite_graph(32, 2)):
            t0 = time.perf_counter()
            build_static_scheme(g)
            assert time.perf_counter() - t0 < 0.1


class TestPrune:
    def test_no_zeros(self):
        assert prune_for_row(line_graph(4), range(4), 3, set()) == {0, 1, 2, 3}

    def test_cut_vertex_kept(self):
        assert prune_for_row(line_graph(4), range(4), 3, {1}) == {0, 1, 2, 3}

    def test_endpoint_dropped(self):
        assert prune_for_row(line_graph(4), range(4), 3, {0, 1}) == {2, 3}

    def test_star_leaves(self):
        assert prune_for_row(star_graph(4), range(4), 3, {1, 2}) == {0, 3}

    def test_disconnected_input(self):
        with pytest.raises(DisconnectedGraphError):
            prune_for_row(line_graph(4), {0, 2, 3}, 3, set())

    @settings(max_examples=100, deadline=None)
    @given(g=connected_graphs(), data=st.data())
    def test_result_connected_and_contains_row(self, g, data):
        row = data.draw(st.integers(0, g.dim - 1))
        zeros = data.draw(st.sets(st.integers(0, g.dim - 1)))
        kept = prune_for_row(g, range(g.dim), row, zeros)
        assert row in kept
        assert set(range(g.dim)) - set(zeros) <= kept
        assert nx.is_connected(to_nx(g, kept))


def test_random_graph_is_seeded():
    a = random_connected_graph(7, 3)
    assert a == random_connected_graph(7, 3)
    assert a.is_connected()
    assert random_connected_graph(7, np.random.default_rng(3)) == a
