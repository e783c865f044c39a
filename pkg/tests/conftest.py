import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from fixtures import acceptance_fixtures  # noqa: E402

from padnet.decomposition import DecompositionParams  # noqa: E402
from padnet.graph import VertexSet, shortest_paths  # noqa: E402
from padnet.ordered_net import (  # noqa: E402
    build_semi_tree_order,
    construct_cores_trace,
    semi_to_tree_order,
)
from padnet.trees import td_to_tree_partition  # noqa: E402


class BuiltPipeline:
    """Everything the checks need for one fixture, built once per session."""

    def __init__(self, fixture):
        self.fixture = fixture
        self.name = fixture.name
        self.delta = fixture.delta
        self.graph = fixture.graph
        self.td = fixture.td
        self.embedding = td_to_tree_partition(fixture.graph, fixture.td)
        self.host = self.embedding.host
        self.tp = self.embedding.tree_partition
        self.construction = construct_cores_trace(self.host, self.tp, fixture.delta)
        semi, net_set = build_semi_tree_order(self.construction.cores, self.tp)
        self.semi = semi
        self.net = semi_to_tree_order(
            semi, net_set, self.host, fixture.delta, alpha=3.0,
            cores=tuple(self.construction.cores),
        )
        self.params = DecompositionParams.from_net(self.net, fixture.delta)
        self._host_dist = None

    @property
    def host_dist(self) -> np.ndarray:
        if self._host_dist is None:
            self._host_dist = np.stack(
                [
                    shortest_paths(self.host, self.host.all_vertices(), VertexSet(self.host.n, [v]))
                    for v in range(self.host.n)
                ]
            )
        return self._host_dist


_CACHE: dict[str, BuiltPipeline] = {}


def built(fixture) -> BuiltPipeline:
    if fixture.name not in _CACHE:
        _CACHE[fixture.name] = BuiltPipeline(fixture)
    return _CACHE[fixture.name]


@pytest.fixture(scope="session")
def registry():
    return acceptance_fixtures()


@pytest.fixture(scope="session")
def pipelines(registry):
    return [built(f) for f in registry]
