"""Named example configurations."""

from __future__ import annotations

from dataclasses import dataclass

from .constructions import fig1_graph
from .game import ChainN, Generalized, GameSpec, PayoffScheme, State
from .graph import Graph, path_graph, star_graph


@dataclass(frozen=True)
class Preset:
    name: str
    graph: Graph
    tokens: int
    scheme: PayoffScheme
    s0: State
    description: str

    def spec(self, gamma: float) -> GameSpec:
        return GameSpec(self.graph, self.tokens, gamma, self.scheme)


def _presets() -> dict[str, Preset]:
    return {
        "fig1": Preset(
            "fig1", fig1_graph(), 3, ChainN(), State((1, 12, 2), 3),
            "path 1..10 with a two-edge spur at vertex 3; token 3 hides behind token 1",
        ),
        "fig2": Preset(
            "fig2", path_graph(5), 3, ChainN(), State((1, 5, 3), 1),
            "path on five vertices, tokens 1 and 2 at the ends, token 3 in the middle",
        ),
        "fig5": Preset(
            "fig5", path_graph(6), 4, ChainN(), State((1, 3, 4, 5), 4),
            "four-token chain on a six-vertex path, token 4 to move",
        ),
        "fig6-star": Preset(
            "fig6-star", star_graph(3), 3, Generalized.cyclic(), State((2, 3, 4), 1),
            "cyclic chase on the three-leaf star, one token per leaf",
        ),
    }


PRESET_NAMES = ("fig1", "fig2", "fig5", "fig6-star")


def get_preset(name: str) -> Preset:
    table = _presets()
    if name not in table:
        raise KeyError(f"unknown preset {name!r}; choose from {', '.join(PRESET_NAMES)}")
    return table[name]
