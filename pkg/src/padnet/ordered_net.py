"""Core carving over a tree partition and the resulting tree-ordered net.

The construction proceeds in rounds.  Each round takes the connected
components of the bags that still hold uncovered vertices and, inside each
component, repeatedly picks the unvisited bag closest to the root, carves a
radius-Delta ball around its uncovered vertices in a support graph, and
records the ball as a core.  The support graph mixes uncovered vertices of
the bag's subtree with per-bag "attachments": portions of earlier cores that
were re-exposed to their parent bag, letting a later core grow through an
earlier one.  Rounds repeat until every vertex is covered.

Ordering every vertex by the center bag of the first core that covered it
gives a tree order without injectivity (several vertices may share a bag
node).  A second step expands each bag node into a rooted path - net vertices
first, then the rest - which restores injectivity while keeping the covering
radius at Delta and only relaxing the packing radius.

Ties are broken deterministically everywhere: components by root bag id,
bag picks by (level, bag id), path expansion by vertex id.  Identical inputs
therefore produce identical cores, orders, and nets.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .graph import VertexSet, WeightedGraph, shortest_paths
from .trees import TreePartition, rooted_tree_arrays


@dataclass(frozen=True)
class Core:
    """One carved ball: members, where it was carved from, and its snapshot.

    `support_restrict` is the vertex set of the support graph at creation,
    kept so invariant checks can replay the ball computation.
    """

    id: int
    members: frozenset[int]
    center_bag: int
    centers: frozenset[int]
    rank: int
    support_restrict: frozenset[int]


@dataclass(frozen=True)
class ComponentTrace:
    """One processed component of uncovered bags: its round, bags, and cluster."""

    round_no: int
    root_bag: int
    bags: frozenset[int]
    cluster: frozenset[int]


@dataclass
class CoreConstruction:
    cores: list[Core]
    components: list[ComponentTrace]
    rounds: int


@dataclass
class SemiTreeOrder:
    """Order tree isomorphic to the tree partition; assign may collide.

    assign maps each vertex to the bag node of its first covering core.
    """

    parent: tuple[int, ...]
    root: int
    assign: np.ndarray
    tp_width: int
    children: list[list[int]] = field(init=False, repr=False)
    level: list[int] = field(init=False, repr=False)

    def __post_init__(self):
        self.children, self.level, self._tin, self._tout, _ = rooted_tree_arrays(
            self.parent, self.root
        )

    def node_is_ancestor(self, a: int, b: int) -> bool:
        return self._tin[a] <= self._tin[b] < self._tout[a]

    def vertex_leq(self, u: int, v: int) -> bool:
        """u <= v in the semi order: v's node is an ancestor of u's (or equal)."""
        return self.node_is_ancestor(int(self.assign[v]), int(self.assign[u]))

    def descendant_vertices(self, x: int) -> np.ndarray:
        """Boolean mask of vertices u with u <= x."""
        node = int(self.assign[x])
        tin = np.asarray(self._tin)[self.assign]
        return (tin >= self._tin[node]) & (tin < self._tout[node])


class TreeOrderedNet:
    """Net vertices plus an injective valid tree order of all vertices.

    Parameters carried along: the covering radius `delta`, the packing radius
    multiplier `alpha`, the measured packing value `tau_emp` at alpha*delta,
    and the structural bound `tau_bound` = tp^4 + tp^2.
    """

    def __init__(
        self,
        net: VertexSet,
        order_parent: tuple[int, ...],
        node_vertex: tuple[int | None, ...],
        assign: np.ndarray,
        alpha: float,
        delta: float,
        tp_width: int,
        cores: tuple[Core, ...],
        g: WeightedGraph,
    ):
        self.net = net
        self.order_parent = order_parent
        self.node_vertex = node_vertex
        self.assign = assign
        self.alpha = alpha
        self.delta = delta
        self.tp_width = tp_width
        self.cores = cores
        _, self.node_level, self._tin, self._tout, _ = rooted_tree_arrays(order_parent, 0)
        self._vertex_tin = np.asarray(self._tin)[assign]
        self._centers = np.asarray(
            sorted(net.indices.tolist(), key=lambda x: (self.node_level[assign[x]], x)),
            dtype=np.int64,
        )
        self._center_dist = self._compute_center_distances(g)
        self.tau_bound = tp_width**4 + tp_width**2
        self.tau_emp = int(self.packing_counts(alpha).max()) if len(self._centers) else 0

    def _compute_center_distances(self, g: WeightedGraph) -> np.ndarray:
        d = np.full((len(self._centers), g.n), np.inf)
        for i, x in enumerate(self._centers.tolist()):
            restrict = VertexSet.from_mask(self.descendant_vertices(x))
            d[i] = shortest_paths(g, restrict, VertexSet(g.n, [x]))
        return d

    @property
    def n(self) -> int:
        return self.assign.shape[0]

    def centers_in_order(self) -> np.ndarray:
        """Net vertices sorted root-to-leaf in the order tree, ties by id."""
        return self._centers

    def center_distance_matrix(self) -> np.ndarray:
        """Row i: distances from centers_in_order()[i] inside its descendant subgraph."""
        return self._center_dist

    def node_is_ancestor(self, a: int, b: int) -> bool:
        return self._tin[a] <= self._tin[b] < self._tout[a]

    def vertex_leq(self, u: int, v: int) -> bool:
        return self.node_is_ancestor(int(self.assign[v]), int(self.assign[u]))

    def descendant_vertices(self, x: int) -> np.ndarray:
        node = int(self.assign[x])
        return (self._vertex_tin >= self._tin[node]) & (self._vertex_tin < self._tout[node])

    def packing_counts(self, multiplier: float) -> np.ndarray:
        """Per-vertex count of ancestor net points within multiplier*delta."""
        return (self._center_dist <= multiplier * self.delta).sum(axis=0)

    def to_json_dict(self) -> dict:
        net_set = set(self.net.indices.tolist())
        return {
            "parameters": {
                "alpha": self.alpha,
                "delta": self.delta,
                "tp_width": self.tp_width,
                "tau_emp": self.tau_emp,
                "tau_bound": self.tau_bound,
            },
            "nodes": [
                {
                    "id": i,
                    "parent": self.order_parent[i],
                    "vertex": self.node_vertex[i],
                    "net": self.node_vertex[i] in net_set if self.node_vertex[i] is not None else False,
                }
                for i in range(len(self.order_parent))
            ],
            "assign": {str(v): int(self.assign[v]) for v in range(self.n)},
            "net": sorted(int(x) for x in self.net.indices),
            "cores": [
                {
                    "id": c.id,
                    "rank": c.rank,
                    "center_bag": c.center_bag,
                    "centers": sorted(c.centers),
                    "members": sorted(c.members),
                }
                for c in self.cores
            ],
        }


def construct_cores(g: WeightedGraph, tp: TreePartition, delta: float) -> list[Core]:
    return construct_cores_trace(g, tp, delta).cores


def construct_cores_trace(
    g: WeightedGraph, tp: TreePartition, delta: float, deep_checks: bool = False
) -> CoreConstruction:
    """Run the round-based carving; returns cores plus the component trace.

    With deep_checks, asserts after every step that each bag's attachment
    stays inside the bag's proper-descendant bags.
    """
    if delta <= 0:
        raise ValueError(f"delta must be > 0, got {delta}")
    tp.validate(g)
    n = g.n
    nb = len(tp.bags)
    bag_vertices = [sorted(b) for b in tp.bags]
    bag_of = tp.bag_of()
    level = tp.level
    parent = tp.parent

    covered = np.zeros(n, dtype=bool)
    attach: list[set[int]] = [set() for _ in range(nb)]
    cores: list[Core] = []
    comps: list[ComponentTrace] = []
    round_no = 0

    while not covered.all():
        round_no += 1
        if round_no > n + 1:
            raise AssertionError("carving failed to terminate")
        uncov_bag = [any(not covered[v] for v in bag_vertices[b]) for b in range(nb)]
        components = _uncovered_components(tp, uncov_bag)
        for comp_root, comp_bags in sorted(components, key=lambda c: c[0]):
            cluster = set()
            for b in comp_bags:
                cluster.update(v for v in bag_vertices[b] if not covered[v])
                cluster.update(attach[b])
            comps.append(
                ComponentTrace(round_no, comp_root, frozenset(comp_bags), frozenset(cluster))
            )
            unvisited = set(comp_bags)
            while unvisited:
                center_bag = min(unvisited, key=lambda b: (level[b], b))
                subtree = _component_subtree(tp, comp_bags, center_bag)
                support = np.zeros(n, dtype=bool)
                for b in subtree:
                    for v in bag_vertices[b]:
                        if not covered[v]:
                            support[v] = True
                    for v in attach[b]:
                        support[v] = True
                sources = [v for v in bag_vertices[center_bag] if not covered[v]]
                dist = shortest_paths(
                    g, VertexSet.from_mask(support), VertexSet(n, sources)
                )
                members_arr = np.flatnonzero(dist <= delta)
                members = frozenset(members_arr.tolist())
                cores.append(
                    Core(
                        id=len(cores),
                        members=members,
                        center_bag=center_bag,
                        centers=frozenset(sources),
                        rank=round_no,
                        support_restrict=frozenset(np.flatnonzero(support).tolist()),
                    )
                )
                covered[members_arr] = True
                for v in members:
                    unvisited.discard(int(bag_of[v]))
                for b in subtree:
                    if attach[b] & members:
                        attach[b] -= members
                if center_bag != comp_root:
                    attach[parent[center_bag]] |= members
                if deep_checks:
                    for b in range(nb):
                        for v in attach[b]:
                            vb = int(bag_of[v])
                            assert vb != b and tp.is_bag_ancestor(b, vb), (
                                f"attachment of bag {b} holds vertex {v} of bag {vb}, "
                                "not a proper descendant"
                            )
    return CoreConstruction(cores=cores, components=comps, rounds=round_no)


def _uncovered_components(tp: TreePartition, uncov_bag: list[bool]):
    """Connected components of uncovered bags, as (root, bag set) pairs."""
    nb = len(tp.bags)
    seen = [False] * nb
    out = []
    for b in range(nb):
        if not uncov_bag[b] or seen[b]:
            continue
        comp = {b}
        seen[b] = True
        stack = [b]
        while stack:
            x = stack.pop()
            nbs = list(tp.children[x])
            if tp.parent[x] != -1:
                nbs.append(tp.parent[x])
            for y in nbs:
                if uncov_bag[y] and not seen[y]:
                    seen[y] = True
                    comp.add(y)
                    stack.append(y)
        root = min(comp, key=lambda x: tp.level[x])
        out.append((root, comp))
    return out


def _component_subtree(tp: TreePartition, comp_bags: set[int], b: int) -> list[int]:
    """Bags of the component that are descendants of b (b included)."""
    out = [b]
    stack = [b]
    while stack:
        x = stack.pop()
        for c in tp.children[x]:
            if c in comp_bags:
                out.append(c)
                stack.append(c)
    return out


def build_semi_tree_order(
    cores: list[Core], tp: TreePartition
) -> tuple[SemiTreeOrder, VertexSet]:
    """Assign each vertex to the bag of its first covering core; collect the net.

    Cores are created in round order, so the first core (by id) containing a
    vertex is its smallest-rank core.
    """
    n = tp.n
    assign = np.full(n, -1, dtype=np.int64)
    for core in cores:
        for v in core.members:
            if assign[v] == -1:
                assign[v] = core.center_bag
    if (assign == -1).any():
        missing = int(np.flatnonzero(assign == -1)[0])
        raise AssertionError(f"vertex {missing} is covered by no core")
    net_mask = np.zeros(n, dtype=bool)
    for core in cores:
        for v in core.centers:
            net_mask[v] = True
    semi = SemiTreeOrder(parent=tp.parent, root=tp.root, assign=assign, tp_width=tp.width)
    return semi, VertexSet.from_mask(net_mask)


def semi_to_tree_order(
    semi: SemiTreeOrder,
    net: VertexSet,
    g: WeightedGraph,
    delta: float,
    alpha: float = 3.0,
    cores: tuple[Core, ...] = (),
) -> TreeOrderedNet:
    """Expand every bag node into a rooted path, net vertices first.

    Vertices sharing a bag node become a chain ordered by (non-net last,
    vertex id); an empty preimage keeps a placeholder node so the tree shape
    survives.  Child paths hang off the parent path's leaf.
    """
    if delta <= 0:
        raise ValueError(f"delta must be > 0, got {delta}")
    if alpha <= 0:
        raise ValueError(f"alpha must be > 0, got {alpha}")
    n = semi.assign.shape[0]
    nb = len(semi.parent)
    net_mask = net.mask
    preimage: list[list[int]] = [[] for _ in range(nb)]
    for v in range(n):
        preimage[semi.assign[v]].append(v)

    bag_order = sorted(range(nb), key=lambda b: (semi.level[b], b))
    order_parent: list[int] = []
    node_vertex: list[int | None] = []
    assign = np.full(n, -1, dtype=np.int64)
    path_leaf = [-1] * nb
    for b in bag_order:
        members = preimage[b]
        seq: list[int | None] = sorted(
            (v for v in members if net_mask[v])
        ) + sorted(v for v in members if not net_mask[v])
        if not seq:
            seq = [None]
        prev = path_leaf[semi.parent[b]] if semi.parent[b] != -1 else -1
        for item in seq:
            node = len(node_vertex)
            node_vertex.append(item)
            order_parent.append(prev)
            if item is not None:
                assign[item] = node
            prev = node
        path_leaf[b] = prev

    return TreeOrderedNet(
        net=net,
        order_parent=tuple(order_parent),
        node_vertex=tuple(node_vertex),
        assign=assign,
        alpha=alpha,
        delta=delta,
        tp_width=semi.tp_width,
        cores=tuple(cores),
        g=g,
    )


def build_tree_ordered_net(
    g: WeightedGraph, tp: TreePartition, delta: float, alpha: float = 3.0
) -> TreeOrderedNet:
    """Full pipeline: carve cores, order vertices, expand to a tree order."""
    cores = construct_cores(g, tp, delta)
    semi, net = build_semi_tree_order(cores, tp)
    return semi_to_tree_order(semi, net, g, delta, alpha=alpha, cores=tuple(cores))


def packing_profile(
    net: TreeOrderedNet, g: WeightedGraph, radius_multipliers: list[float]
) -> dict[float, int]:
    """Exact worst-vertex count of ancestor net points within m*delta, per m."""
    for m in radius_multipliers:
        if m < 0:
            raise ValueError(f"radius multiplier must be >= 0, got {m}")
    return {float(m): int(net.packing_counts(m).max()) for m in radius_multipliers}
