import random
import sys
from pathlib import Path

import networkx as nx
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from gcr.graph import Graph, cycle_graph, path_graph, star_graph  # noqa: E402

GAMMA = 0.9


def to_graph(t: nx.Graph) -> Graph:
    return Graph(t.number_of_nodes(), [(u + 1, v + 1) for u, v in t.edges()])


def random_trees(count: int = 25, max_vertices: int = 8, seed: int = 20240611) -> list[Graph]:
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        n = rng.randint(2, max_vertices)
        if n == 2:
            out.append(path_graph(2))
            continue
        seq = [rng.randrange(n) for _ in range(n - 2)]
        out.append(to_graph(nx.from_prufer_sequence(seq)))
    return out


def all_trees(max_vertices: int) -> list[Graph]:
    out = []
    for n in range(2, max_vertices + 1):
        out.extend(to_graph(t) for t in nx.nonisomorphic_trees(n))
    return out


def fixture_graphs() -> dict[str, Graph]:
    graphs = {f"P{n}": path_graph(n) for n in range(2, 7)}
    graphs.update({f"C{n}": cycle_graph(n) for n in range(3, 7)})
    graphs["K1,3"] = star_graph(3)
    graphs.update({f"tree{i}": g for i, g in enumerate(random_trees())})
    return graphs


def tree_corpus(max_vertices: int = 8) -> list[Graph]:
    """Every tree up to isomorphism plus the seeded random trees."""
    seen = set()
    out = []
    for g in all_trees(max_vertices) + [g for g in random_trees() if g.vertex_count <= max_vertices]:
        if g not in seen:
            seen.add(g)
            out.append(g)
    return out


@pytest.fixture
def gamma() -> float:
    return GAMMA


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
