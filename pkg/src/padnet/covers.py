"""Deterministic sparse cover and padded partition cover from a tree-ordered net.

The sparse cover takes, per net vertex, the alpha*Delta ball inside the
subgraph induced by its descendants: strong diameter 2*alpha*Delta, at most
tau clusters per vertex, and every ball of radius (alpha-1)*Delta/2 lands
inside some cluster.

The partition cover shrinks the radius to alpha*Delta/2 and greedily packs
disjoint clusters into partial partitions, preferring centers closer to the
root; each partial partition is then completed with singletons.  At most tau
partial partitions arise, each 3*Delta-bounded at alpha=3, padding radius
(alpha-2)*Delta/4.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import WeightedGraph
from .ordered_net import TreeOrderedNet


@dataclass(frozen=True)
class CoverCluster:
    center: int
    members: frozenset[int]


@dataclass
class SparseCover:
    clusters: tuple[CoverCluster, ...]
    alpha: float
    delta: float
    padding_ratio: float
    diameter_bound: float
    sparsity: int  # measured max per-vertex cluster count

    def to_json_dict(self) -> dict:
        return {
            "params": {"alpha": self.alpha, "delta": self.delta},
            "guarantees": {
                "padding_ratio": self.padding_ratio,
                "diameter_bound": self.diameter_bound,
                "sparsity": self.sparsity,
            },
            "clusters": [
                {"center": c.center, "members": sorted(c.members)} for c in self.clusters
            ],
        }


@dataclass(frozen=True)
class PartitionCluster:
    kind: str  # "net" or "singleton"
    center: int
    radius: float
    members: frozenset[int]


@dataclass
class PartitionCover:
    partitions: tuple[tuple[PartitionCluster, ...], ...]
    alpha: float
    delta: float
    padding_ratio: float
    diameter_bound: float

    def to_json_dict(self) -> dict:
        return {
            "params": {"alpha": self.alpha, "delta": self.delta},
            "guarantees": {
                "padding_ratio": self.padding_ratio,
                "diameter_bound": self.diameter_bound,
                "partition_count": len(self.partitions),
            },
            "partitions": [
                [
                    {
                        "kind": c.kind,
                        "center": c.center,
                        "radius": c.radius,
                        "members": sorted(c.members),
                    }
                    for c in part
                ]
                for part in self.partitions
            ],
        }


def build_sparse_cover(g: WeightedGraph, net: TreeOrderedNet, delta: float) -> SparseCover:
    """One cluster per net vertex: its alpha*delta descendant-restricted ball."""
    alpha = net.alpha
    if alpha <= 1:
        raise ValueError(f"sparse cover needs alpha > 1, got {alpha}")
    if delta != net.delta:
        raise ValueError(f"net was built for delta={net.delta}, asked for {delta}")
    centers = net.centers_in_order()
    dist = net.center_distance_matrix()
    radius = alpha * delta
    clusters = tuple(
        CoverCluster(
            center=int(centers[i]),
            members=frozenset(np.flatnonzero(dist[i] <= radius).tolist()),
        )
        for i in range(len(centers))
    )
    membership = (dist <= radius).sum(axis=0)
    return SparseCover(
        clusters=clusters,
        alpha=alpha,
        delta=delta,
        padding_ratio=4 * alpha / (alpha - 1),
        diameter_bound=2 * alpha * delta,
        sparsity=int(membership.max()),
    )


def build_partition_cover(g: WeightedGraph, net: TreeOrderedNet, delta: float) -> PartitionCover:
    """Greedy partial partitions of alpha*delta/2 balls, singleton-completed."""
    alpha = net.alpha
    if alpha <= 2:
        raise ValueError(f"partition cover needs alpha > 2, got {alpha}")
    if delta != net.delta:
        raise ValueError(f"net was built for delta={net.delta}, asked for {delta}")
    centers = net.centers_in_order()
    dist = net.center_distance_matrix()
    radius = alpha * delta / 2
    member_mask = dist <= radius  # (k, n)

    remaining = list(range(len(centers)))
    partial_partitions: list[list[int]] = []
    while remaining:
        occupied = np.zeros(g.n, dtype=bool)
        chosen: list[int] = []
        while True:
            candidates = [i for i in remaining if not (member_mask[i] & occupied).any()]
            if not candidates:
                break
            maximal = [
                i
                for i in candidates
                if not any(
                    j != i
                    and net.node_is_ancestor(int(net.assign[centers[j]]), int(net.assign[centers[i]]))
                    for j in candidates
                )
            ]
            pick = min(maximal, key=lambda i: int(centers[i]))
            chosen.append(pick)
            remaining.remove(pick)
            occupied |= member_mask[pick]
        partial_partitions.append(chosen)

    partitions: list[tuple[PartitionCluster, ...]] = []
    for chosen in partial_partitions:
        part: list[PartitionCluster] = []
        occupied = np.zeros(g.n, dtype=bool)
        for i in chosen:
            members = np.flatnonzero(member_mask[i])
            part.append(
                PartitionCluster(
                    kind="net",
                    center=int(centers[i]),
                    radius=radius,
                    members=frozenset(members.tolist()),
                )
            )
            occupied[members] = True
        for v in np.flatnonzero(~occupied).tolist():
            part.append(
                PartitionCluster(kind="singleton", center=v, radius=0.0, members=frozenset([v]))
            )
        partitions.append(tuple(part))

    return PartitionCover(
        partitions=tuple(partitions),
        alpha=alpha,
        delta=delta,
        padding_ratio=4 * alpha / (alpha - 2),
        diameter_bound=alpha * delta,
    )
