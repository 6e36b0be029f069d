import pytest

from gcr.graph import (
    Graph,
    GraphError,
    complete_graph,
    cycle_graph,
    parse_graph,
    path_graph,
    read_graph,
    star_graph,
)


def test_parse_with_comments_and_blank_lines():
    g = parse_graph("# a path\n3\n\n1 2\n# middle\n2 3\n")
    assert g.vertex_count == 3
    assert g.sorted_edges() == [(1, 2), (2, 3)]


@pytest.mark.parametrize(
    "text, fragment",
    [
        ("", "empty"),
        ("x\n", "line 1"),
        ("3\n1 2 3\n", "line 2"),
        ("3\n1 a\n", "non-integer"),
        ("3\n1 4\n2 3\n", "out of range"),
        ("3\n1 1\n", "self-loop"),
        ("3\n1 2\n2 1\n2 3\n", "duplicate"),
        ("3\n1 2\n", "disconnected"),
    ],
)
def test_parse_errors(text, fragment):
    with pytest.raises(GraphError, match=fragment):
        parse_graph(text)


def test_round_trip_edge_list(tmp_path):
    g = cycle_graph(5)
    path = tmp_path / "c5.edges"
    path.write_text(g.to_edge_list())
    assert read_graph(str(path)) == g


def test_closed_neighborhood_sorted():
    g = star_graph(3)
    assert g.closed_neighborhood(1) == (1, 2, 3, 4)
    assert g.closed_neighborhood(3) == (1, 3)


def test_invalid_vertex_query():
    with pytest.raises(GraphError):
        path_graph(3).neighbors(4)


def test_distances_and_paths():
    g = cycle_graph(6)
    assert g.distance(1, 4) == 3
    assert g.shortest_path(1, 4) == [1, 2, 3, 4]
    assert g.step_toward(1, 4) == 2
    assert g.step_toward(5, 5) == 5
    assert g.interval(1, 4) == frozenset(range(1, 7))


def test_classification():
    assert path_graph(4).classify() == {"is_tree": True, "is_path": True}
    assert star_graph(3).classify() == {"is_tree": True, "is_path": False}
    assert cycle_graph(4).classify() == {"is_tree": False, "is_path": False}
    assert path_graph(1).is_path


def test_median_on_tree():
    g = star_graph(3)
    assert g.median(2, 3, 4) == 1
    assert g.median(2, 1, 4) == 1
    p = path_graph(5)
    assert p.median(1, 5, 3) == 3
    with pytest.raises(GraphError):
        cycle_graph(4).median(1, 2, 3)


def test_dot_export_lists_every_edge():
    dot = complete_graph(3).to_dot("K3")
    assert dot.startswith("graph K3 {")
    assert dot.count("--") == 3


def test_equality_and_hash():
    a = Graph(3, [(1, 2), (2, 3)])
    b = Graph(3, [(3, 2), (2, 1)])
    assert a == b and hash(a) == hash(b)
    assert a != path_graph(4)
