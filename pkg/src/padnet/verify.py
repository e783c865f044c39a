"""Independent oracles and the consolidated invariant suite.

`oracle_all_pairs` is a Floyd-Warshall path sharing no code with the Dijkstra
search in `graph`; the two are cross-checked against each other, and every
structure the other modules produce is certified here: conversion isometry,
core-carving invariants, net covering/packing, decomposition and cover
guarantees.  Checks never raise on violation - they return report entries
with a witness - and each check listed in the module docstrings appears
exactly once per full report.

Distance comparisons use absolute tolerance 1e-9 where a bound is checked;
oracle-vs-search agreement is exact (fixtures use integer or dyadic weights).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .covers import PartitionCover, SparseCover
from .decomposition import (
    DecompositionParams,
    PaddedPartition,
    TruncatedExp,
    padded_trial_counts,
    replay_decomposition,
    sample_padded_decomposition,
    sample_truncated_exp,
    wilson_lower_bound,
)
from .graph import VertexSet, WeightedGraph, ball, shortest_paths, strong_diameter, weak_diameter
from .ordered_net import (
    CoreConstruction,
    TreeOrderedNet,
    build_semi_tree_order,
    construct_cores_trace,
    semi_to_tree_order,
)
from .trees import IsometricEmbedding, TreeDecomposition, TreePartition

TOL = 1e-9
KS_CRITICAL_1PCT = 1.62762  # Kolmogorov statistic quantile, large-sample


class OracleCapError(ValueError):
    """The all-pairs oracle refuses instances beyond its configured cap."""


def oracle_all_pairs(g: WeightedGraph, restrict: VertexSet, cap: int = 60) -> np.ndarray:
    """Exact all-pairs distances in G[restrict] via the O(n^3) recurrence.

    Returns an (n, n) matrix with +inf for pairs not both inside restrict.
    Refuses (never truncates) when |restrict| exceeds cap.
    """
    idx = restrict.indices
    if idx.size == 0:
        raise ValueError("restrict must be non-empty")
    if idx.size > cap:
        raise OracleCapError(f"oracle cap {cap} exceeded: |restrict| = {idx.size}")
    r = idx.size
    pos = np.full(g.n, -1, dtype=np.int64)
    pos[idx] = np.arange(r)
    d = np.full((r, r), np.inf)
    np.fill_diagonal(d, 0.0)
    for u, v, w in g.edges:
        pu, pv = pos[u], pos[v]
        if pu >= 0 and pv >= 0:
            if w < d[pu, pv]:
                d[pu, pv] = w
                d[pv, pu] = w
    for k in range(r):
        np.minimum(d, d[:, k, None] + d[None, k, :], out=d)
    out = np.full((g.n, g.n), np.inf)
    out[np.ix_(idx, idx)] = d
    return out


@dataclass
class CheckResult:
    name: str
    status: str  # "pass" | "fail" | "warn"
    measured: float | int | None = None
    bound: float | int | None = None
    witness: str | None = None

    def to_json_dict(self) -> dict:
        return {
            "name": self.name,
            "status": self.status,
            "measured": self.measured,
            "bound": self.bound,
            "witness": self.witness,
        }


@dataclass
class VerificationReport:
    checks: list[CheckResult]

    @property
    def ok(self) -> bool:
        return all(c.status != "fail" for c in self.checks)

    def names(self) -> list[str]:
        return [c.name for c in self.checks]

    def to_json_dict(self) -> dict:
        return {
            "ok": self.ok,
            "checks": [c.to_json_dict() for c in self.checks],
        }

    def format_table(self) -> str:
        width = max(len(c.name) for c in self.checks) if self.checks else 10
        lines = [f"{'check':<{width}}  {'status':<6}  measured / bound"]
        for c in self.checks:
            meas = "" if c.measured is None else f"{c.measured}"
            bnd = "" if c.bound is None else f" / {c.bound}"
            wit = f"  [{c.witness}]" if c.witness else ""
            lines.append(f"{c.name:<{width}}  {c.status:<6}  {meas}{bnd}{wit}")
        return "\n".join(lines)


def _check(name, passed, measured=None, bound=None, witness=None, warn=False) -> CheckResult:
    status = "pass" if passed else ("warn" if warn else "fail")
    return CheckResult(name, status, measured, bound, witness if not passed else None)


# ---------------------------------------------------------------------------
# conversion checks


def verify_embedding(
    g: WeightedGraph, td: TreeDecomposition, emb: IsometricEmbedding, oracle_cap: int
) -> list[CheckResult]:
    checks = []
    host, tp = emb.host, emb.tree_partition

    seen: dict[int, int] = {}
    bad = None
    for i, bag in enumerate(tp.bags):
        for v in bag:
            if v in seen:
                bad = f"host vertex {v} in bags {seen[v]} and {i}"
            seen[v] = i
    covering = len(seen) == host.n
    checks.append(_check("host-bags-partition", bad is None and covering, witness=bad))

    bag_of = tp.bag_of()
    bad = None
    for u, v, _ in host.edges:
        bu, bv = int(bag_of[u]), int(bag_of[v])
        if bu != bv and tp.parent[bu] != bv and tp.parent[bv] != bu:
            bad = f"host edge ({u},{v}) spans bags {bu},{bv}"
            break
    checks.append(_check("host-edge-validity", bad is None, witness=bad))

    dg = oracle_all_pairs(g, g.all_vertices(), cap=oracle_cap)
    dh = oracle_all_pairs(host, host.all_vertices(), cap=oracle_cap)
    fwd = emb.forward
    diff = np.abs(dh[np.ix_(fwd, fwd)] - dg)
    worst = float(diff.max())
    checks.append(
        _check(
            "isometry-exact",
            worst == 0.0,
            measured=worst,
            bound=0.0,
            witness=None
            if worst == 0.0
            else "pair " + str(np.unravel_index(int(diff.argmax()), diff.shape)),
        )
    )

    bad = None
    for v, copies in enumerate(emb.copies):
        for a in copies:
            for b in copies:
                if dh[a, b] != 0.0:
                    bad = f"copies {a},{b} of vertex {v} at distance {dh[a, b]}"
        if bad:
            break
    checks.append(_check("copy-zero-distance", bad is None, witness=bad))

    checks.append(
        _check(
            "width-preserved",
            tp.width == td.max_bag_size,
            measured=tp.width,
            bound=td.max_bag_size,
        )
    )
    return checks


# ---------------------------------------------------------------------------
# core-carving checks


def verify_cores(
    g: WeightedGraph, tp: TreePartition, delta: float, construction: CoreConstruction
) -> list[CheckResult]:
    checks = []
    cores = construction.cores
    tpw = tp.width
    bag_of = tp.bag_of()

    union = set()
    for c in cores:
        union |= c.members
    checks.append(
        _check(
            "cores-cover-all-vertices",
            union == set(range(g.n)),
            measured=len(union),
            bound=g.n,
        )
    )

    bad = None
    for c in cores:
        for v in c.members:
            if not tp.is_bag_ancestor(c.center_bag, int(bag_of[v])):
                bad = f"core {c.id}: member {v} outside subtree of bag {c.center_bag}"
                break
        if bad:
            break
    checks.append(_check("core-members-in-center-subtree", bad is None, witness=bad))

    bad = None
    for c in cores:
        if not c.members <= c.support_restrict:
            bad = f"core {c.id} leaves its support snapshot"
            break
    checks.append(_check("core-members-in-support", bad is None, witness=bad))

    bad = None
    for c in cores:
        if not c.centers <= (tp.bags[c.center_bag] & c.members):
            bad = f"core {c.id}: centers not inside its center bag and members"
            break
    checks.append(_check("core-centers-in-center-bag", bad is None, witness=bad))

    bad = None
    for c in cores:
        restrict = VertexSet(g.n, c.support_restrict)
        dist = shortest_paths(g, restrict, VertexSet(g.n, c.centers))
        replay = frozenset(np.flatnonzero(dist <= delta).tolist())
        if replay != c.members:
            bad = f"core {c.id}: recorded members differ from replayed ball"
            break
    checks.append(_check("core-ball-replay", bad is None, witness=bad))

    bad = None
    by_rank: dict[int, set[int]] = {}
    for c in cores:
        hit = by_rank.setdefault(c.rank, set()) & c.members
        if hit:
            bad = f"rank {c.rank}: vertex {min(hit)} in two cores"
            break
        by_rank[c.rank] |= c.members
    checks.append(_check("same-rank-cores-disjoint", bad is None, witness=bad))

    checks.append(
        _check("round-count-bound", construction.rounds <= tpw, measured=construction.rounds, bound=tpw)
    )

    per_vertex = np.zeros(g.n, dtype=np.int64)
    per_bag = np.zeros(len(tp.bags), dtype=np.int64)
    for c in cores:
        touched_bags = {int(bag_of[v]) for v in c.members}
        for v in c.members:
            per_vertex[v] += 1
        for b in touched_bags:
            per_bag[b] += 1
    checks.append(
        _check(
            "per-vertex-core-bound",
            int(per_vertex.max()) <= tpw,
            measured=int(per_vertex.max()),
            bound=tpw,
        )
    )
    checks.append(
        _check(
            "per-bag-core-bound",
            int(per_bag.max()) <= tpw * tpw,
            measured=int(per_bag.max()),
            bound=tpw * tpw,
        )
    )

    vrank = np.full(g.n, np.inf)
    for c in cores:
        for v in c.members:
            vrank[v] = min(vrank[v], c.rank)
    bad = None
    for c in cores:
        for v in tp.bags[c.center_bag] - c.centers:
            if not vrank[v] < c.rank:
                bad = f"core {c.id} rank {c.rank}: non-center {v} has rank {vrank[v]}"
                break
        if bad:
            break
    checks.append(_check("noncenter-rank-drop", bad is None, witness=bad))

    # attachments-descendant-only is asserted inline during a deep-check rerun
    try:
        rerun = construct_cores_trace(g, tp, delta, deep_checks=True)
        attach_ok, attach_witness = True, None
    except AssertionError as exc:
        rerun, attach_ok, attach_witness = None, False, str(exc)
    checks.append(_check("attachments-descendant-only", attach_ok, witness=attach_witness))
    checks.append(
        _check(
            "core-construction-deterministic",
            rerun is not None and rerun.cores == cores,
            witness=None if rerun is not None and rerun.cores == cores else "rerun differs",
        )
    )

    bad = None
    by_round: dict[int, list] = {}
    for comp in construction.components:
        by_round.setdefault(comp.round_no, []).append(comp)
    for rnd, comps in by_round.items():
        for i in range(len(comps)):
            for j in range(i + 1, len(comps)):
                if comps[i].cluster & comps[j].cluster:
                    bad = f"round {rnd}: clusters of components {i},{j} overlap"
    for comp in construction.components:
        if comp.round_no == 1:
            continue
        parents = [
            c
            for c in by_round.get(comp.round_no - 1, [])
            if comp.bags <= c.bags
        ]
        if len(parents) != 1:
            bad = f"round {comp.round_no} component at bag {comp.root_bag} has no unique parent"
            continue
        if not comp.cluster <= parents[0].cluster:
            bad = (
                f"round {comp.round_no} component at bag {comp.root_bag} "
                "cluster escapes its parent cluster"
            )
    checks.append(_check("component-clusters-laminar", bad is None, witness=bad))
    return checks


# ---------------------------------------------------------------------------
# net checks


def _oracle_center_distances(
    g: WeightedGraph, net: TreeOrderedNet, oracle_cap: int
) -> np.ndarray:
    centers = net.centers_in_order()
    d = np.full((len(centers), g.n), np.inf)
    for i, x in enumerate(centers.tolist()):
        restrict = VertexSet.from_mask(net.descendant_vertices(x))
        full = oracle_all_pairs(g, restrict, cap=oracle_cap)
        d[i] = full[x]
    return d


def verify_net(
    g: WeightedGraph,
    net: TreeOrderedNet,
    delta: float,
    oracle_cap: int = 60,
    seed: int = 0,
    samples: int = 100,
) -> VerificationReport:
    checks: list[CheckResult] = []

    node_of = net.assign
    bad = None
    for u, v, _ in g.edges:
        a, b = int(node_of[u]), int(node_of[v])
        if not (net.node_is_ancestor(a, b) or net.node_is_ancestor(b, a)):
            bad = f"edge ({u},{v}) order-incomparable"
            break
    checks.append(_check("order-valid-for-edges", bad is None, witness=bad))

    rng = np.random.Generator(np.random.Philox(key=np.array([seed, 0], dtype=np.uint64)))
    ecc0 = shortest_paths(g, g.all_vertices(), VertexSet(g.n, [0]))
    scale = 2 * float(ecc0[np.isfinite(ecc0)].max()) or 1.0
    bad = None
    for _ in range(samples):
        center = int(rng.integers(g.n))
        radius = float(rng.uniform(0, scale))
        members = ball(g, g.all_vertices(), VertexSet(g.n, [center]), radius).members
        idx = members.indices.tolist()
        maximal = [
            u
            for u in idx
            if not any(
                v != u and net.node_is_ancestor(int(node_of[v]), int(node_of[u])) for v in idx
            )
        ]
        if len(maximal) != 1:
            bad = f"ball({center},{radius:.3g}) has {len(maximal)} maximal elements"
            break
    checks.append(_check("connected-subset-unique-maximum", bad is None, witness=bad))

    oracle_d = _oracle_center_distances(g, net, oracle_cap)
    prod_d = net.center_distance_matrix()
    agree = bool(
        np.array_equal(np.isinf(oracle_d), np.isinf(prod_d))
        and np.array_equal(
            oracle_d[np.isfinite(oracle_d)], prod_d[np.isfinite(prod_d)]
        )
    )
    checks.append(_check("net-distance-oracle-agreement", agree))

    covered = (oracle_d <= delta).any(axis=0)
    witness = None if covered.all() else f"vertex {int(np.flatnonzero(~covered)[0])}"
    checks.append(
        _check("net-covering", bool(covered.all()), measured=int(covered.sum()), bound=g.n, witness=witness)
    )

    counts2 = (oracle_d <= 2 * delta).sum(axis=0)
    checks.append(
        _check(
            "net-packing-2delta",
            int(counts2.max()) <= net.tau_bound,
            measured=int(counts2.max()),
            bound=net.tau_bound,
            witness=f"vertex {int(counts2.argmax())}",
        )
    )
    counts3 = (oracle_d <= 3 * delta).sum(axis=0)
    checks.append(CheckResult("net-packing-3delta", "pass", int(counts3.max()), None))
    counts_a = (oracle_d <= net.alpha * delta).sum(axis=0)
    checks.append(
        _check(
            "net-packing-alpha-delta",
            int(counts_a.max()) == net.tau_emp,
            measured=int(counts_a.max()),
            bound=net.tau_emp,
        )
    )
    return VerificationReport(checks)


def deep_packing_assertions(
    g: WeightedGraph, net: TreeOrderedNet, tp: TreePartition, v: int, oracle_cap: int = 60
) -> None:
    """Opt-in deep assertions on the ancestor-core chain of one vertex.

    Splits the cores that meet v's 2*delta ancestor net points into greedy
    links anchored at minimum-rank cores; asserts each minimum rank is
    realized by a single core and that every ancestor core in a link
    intersects its anchor's center set.  These are the structural facts the
    packing bound rests on, exposed for spot checks rather than every run.
    """
    cores = net.cores
    if not cores:
        raise ValueError("net carries no core table")
    oracle_d = _oracle_center_distances(g, net, oracle_cap)
    centers = net.centers_in_order()
    near = {int(centers[i]) for i in np.flatnonzero(oracle_d[:, v] <= 2 * net.delta)}
    meeting = [c for c in cores if c.members & near]
    remaining = sorted((c for c in meeting if v not in c.members), key=lambda c: c.id)
    while remaining:
        lowest = min(c.rank for c in remaining)
        lowest_cores = [c for c in remaining if c.rank == lowest]
        assert len(lowest_cores) == 1, (
            f"vertex {v}: {len(lowest_cores)} chain cores share minimum rank {lowest}"
        )
        anchor = lowest_cores[0]
        link = [c for c in remaining if tp.is_bag_ancestor(c.center_bag, anchor.center_bag)]
        for c in link:
            assert c is anchor or c.members & anchor.centers, (
                f"vertex {v}: core {c.id} in chain link misses the center of core {anchor.id}"
            )
        remaining = [c for c in remaining if c not in link]


# ---------------------------------------------------------------------------
# decomposition checks


def verify_partition(
    g: WeightedGraph,
    p: PaddedPartition,
    alpha: float,
    delta: float,
    dist_matrix: np.ndarray | None = None,
) -> VerificationReport:
    checks: list[CheckResult] = []
    n = g.n
    beta = (alpha + 1) / 2

    total = p.assignment.shape[0] == n and (p.assignment >= 0).all()
    seen = np.zeros(n, dtype=np.int64)
    for c in p.clusters:
        for v in c.members:
            seen[v] += 1
    consistent = all(
        p.assignment[v] == i for i, c in enumerate(p.clusters) for v in c.members
    )
    ok = bool(total and (seen == 1).all() and consistent)
    witness = None
    if not ok:
        stray = np.flatnonzero(seen != 1)
        witness = f"vertex {int(stray[0])} in {int(seen[stray[0]])} clusters" if stray.size else "assignment mismatch"
    checks.append(_check("partition-total-disjoint", ok, witness=witness))

    if dist_matrix is None:
        dist_matrix = np.stack(
            [shortest_paths(g, g.all_vertices(), VertexSet(n, [v])) for v in range(n)]
        )
    bound = (alpha + 1) * delta + TOL
    worst = 0.0
    worst_c = None
    for i, c in enumerate(p.clusters):
        idx = np.fromiter(c.members, dtype=np.int64)
        d = float(dist_matrix[np.ix_(idx, idx)].max())
        if d > worst:
            worst, worst_c = d, i
    checks.append(
        _check(
            "partition-weak-diameter",
            worst <= bound,
            measured=worst,
            bound=bound,
            witness=f"cluster {worst_c}",
        )
    )

    radii = [r for _, r in p.trace]
    rad_ok = all(delta <= r <= beta * delta for r in radii)
    checks.append(
        _check(
            "partition-radius-range",
            rad_ok,
            measured=max(radii) if radii else None,
            bound=beta * delta,
        )
    )
    return VerificationReport(checks)


# ---------------------------------------------------------------------------
# cover checks


def verify_cover(
    g: WeightedGraph,
    cover: SparseCover | PartitionCover,
    alpha: float,
    delta: float,
    oracle_cap: int = 60,
    packing_counts: np.ndarray | None = None,
    padding_radius: float | None = None,
    tau: int | None = None,
) -> VerificationReport:
    if isinstance(cover, SparseCover):
        return _verify_sparse_cover(g, cover, alpha, delta, oracle_cap, packing_counts, padding_radius)
    return _verify_partition_cover(g, cover, alpha, delta, oracle_cap, padding_radius, tau)


def _cluster_matrix(n: int, clusters) -> np.ndarray:
    out = np.zeros((len(clusters), n), dtype=bool)
    for i, members in enumerate(clusters):
        out[i, list(members)] = True
    return out


def _ball_containment(
    g: WeightedGraph, cluster_mask: np.ndarray, radius: float, oracle_cap: int
) -> tuple[bool, str | None]:
    dg = oracle_all_pairs(g, g.all_vertices(), cap=oracle_cap)
    for v in range(g.n):
        ball_mask = dg[v] <= radius
        leaves = (ball_mask[None, :] & ~cluster_mask).any(axis=1)
        if leaves.all():
            return False, f"ball around vertex {v} fits in no cluster"
    return True, None


def _verify_sparse_cover(g, cover, alpha, delta, oracle_cap, packing_counts, padding_radius):
    checks: list[CheckResult] = []
    mask = _cluster_matrix(g.n, [c.members for c in cover.clusters])
    per_vertex = mask.sum(axis=0)
    checks.append(
        _check(
            "cover-every-vertex-covered",
            bool((per_vertex >= 1).all()),
            measured=int(per_vertex.min()),
            bound=1,
        )
    )
    if packing_counts is not None:
        ok = bool((per_vertex <= packing_counts).all())
        checks.append(
            _check(
                "cover-sparsity-vs-packing",
                ok,
                measured=int(per_vertex.max()),
                bound=int(packing_counts.max()),
                witness=None if ok else f"vertex {int(np.flatnonzero(per_vertex > packing_counts)[0])}",
            )
        )

    bound = 2 * alpha * delta + TOL
    worst, worst_c = 0.0, None
    for i, c in enumerate(cover.clusters):
        d = oracle_all_pairs(g, VertexSet(g.n, c.members), cap=oracle_cap)
        idx = np.fromiter(c.members, dtype=np.int64)
        m = float(d[np.ix_(idx, idx)].max())
        if m > worst:
            worst, worst_c = m, i
    checks.append(
        _check(
            "cover-strong-diameter",
            worst <= bound,
            measured=worst,
            bound=bound,
            witness=f"cluster {worst_c}",
        )
    )

    radius = padding_radius if padding_radius is not None else (alpha - 1) * delta / 2
    ok, witness = _ball_containment(g, mask, radius, oracle_cap)
    checks.append(
        _check("cover-ball-containment", ok, measured=radius, witness=witness)
    )
    return VerificationReport(checks)


def _verify_partition_cover(g, cover, alpha, delta, oracle_cap, padding_radius, tau):
    checks: list[CheckResult] = []
    bad = None
    for pi, part in enumerate(cover.partitions):
        seen = np.zeros(g.n, dtype=np.int64)
        for c in part:
            for v in c.members:
                seen[v] += 1
        if not (seen == 1).all():
            v = int(np.flatnonzero(seen != 1)[0])
            bad = f"partition {pi}: vertex {v} in {int(seen[v])} clusters"
            break
    checks.append(_check("partition-cover-partitions-valid", bad is None, witness=bad))

    if tau is not None:
        count = len(cover.partitions)
        if count <= tau:
            checks.append(_check("partition-cover-count", True, measured=count, bound=tau))
        else:
            checks.append(
                _check(
                    "partition-cover-count",
                    False,
                    measured=count,
                    bound=tau,
                    witness=f"{count} partitions",
                    warn=count <= tau + 1,
                )
            )

    bound = alpha * delta + TOL
    worst, worst_w = 0.0, None
    for pi, part in enumerate(cover.partitions):
        for c in part:
            if len(c.members) == 1:
                continue
            d = oracle_all_pairs(g, VertexSet(g.n, c.members), cap=oracle_cap)
            idx = np.fromiter(c.members, dtype=np.int64)
            m = float(d[np.ix_(idx, idx)].max())
            if c.kind == "net" and m > worst:
                worst, worst_w = m, f"partition {pi} cluster center {c.center}"
    checks.append(
        _check(
            "partition-cover-diameter",
            worst <= bound,
            measured=worst,
            bound=bound,
            witness=worst_w,
        )
    )

    all_clusters = [c.members for part in cover.partitions for c in part]
    mask = _cluster_matrix(g.n, all_clusters)
    radius = padding_radius if padding_radius is not None else (alpha - 2) * delta / 4
    ok, witness = _ball_containment(g, mask, radius, oracle_cap)
    checks.append(
        _check("partition-cover-ball-containment", ok, measured=radius, witness=witness)
    )
    return VerificationReport(checks)


# ---------------------------------------------------------------------------
# sampler distribution check


def sampler_ks_check(lam: float, theta1: float, theta2: float, draws: int = 100_000, seed: int = 0) -> CheckResult:
    """Kolmogorov-Smirnov: inverse-CDF draws against the analytic CDF at 1%."""
    texp = TruncatedExp(theta1, theta2, lam)
    rng = np.random.Generator(np.random.Philox(key=np.array([seed, 1], dtype=np.uint64)))
    ys = np.sort(sample_truncated_exp(texp, rng.random(draws)))
    cdf = texp.cdf(ys)
    i = np.arange(1, draws + 1)
    stat = float(np.maximum(np.abs(cdf - i / draws), np.abs(cdf - (i - 1) / draws)).max())
    crit = KS_CRITICAL_1PCT / math.sqrt(draws)
    return _check("sampler-ks", stat < crit, measured=stat, bound=crit)


# ---------------------------------------------------------------------------
# consolidated pipeline verification


def full_report(
    g: WeightedGraph,
    td: TreeDecomposition,
    delta: float,
    alpha: float = 3.0,
    seed: int = 0,
    trials: int = 10_000,
    sweep_seeds: int = 100,
    oracle_cap: int = 60,
    gammas: list[float] | None = None,
) -> VerificationReport:
    """Run every invariant check of the whole pipeline on one instance."""
    from .trees import td_to_tree_partition

    checks: list[CheckResult] = []
    checks.extend(_graph_property_checks(g, seed, oracle_cap))

    emb = td_to_tree_partition(g, td)
    checks.extend(verify_embedding(g, td, emb, oracle_cap))

    host, tp = emb.host, emb.tree_partition
    construction = construct_cores_trace(host, tp, delta)
    checks.extend(verify_cores(host, tp, delta, construction))

    semi, net_set = build_semi_tree_order(construction.cores, tp)
    net = semi_to_tree_order(
        semi, net_set, host, delta, alpha=alpha, cores=tuple(construction.cores)
    )
    net_report = verify_net(host, net, delta, oracle_cap=oracle_cap, seed=seed)
    checks.extend(net_report.checks)

    rebuilt = semi_to_tree_order(
        semi, net_set, host, delta, alpha=alpha, cores=tuple(construction.cores)
    )
    checks.append(
        _check(
            "net-construction-deterministic",
            rebuilt.order_parent == net.order_parent
            and rebuilt.node_vertex == net.node_vertex
            and np.array_equal(rebuilt.assign, net.assign),
        )
    )

    params = DecompositionParams.from_net(net, delta)
    dist_matrix = np.stack(
        [shortest_paths(host, host.all_vertices(), VertexSet(host.n, [v])) for v in range(host.n)]
    )
    sweep_fail = None
    replay_fail = None
    for s in range(sweep_seeds):
        part = sample_padded_decomposition(host, net, delta, seed + s)
        rep = verify_partition(host, part, alpha, delta, dist_matrix=dist_matrix)
        if not rep.ok:
            sweep_fail = f"seed {seed + s}: " + "; ".join(
                c.name for c in rep.checks if c.status == "fail"
            )
            break
        if s == 0:
            replayed = replay_decomposition(host, net, list(part.trace), seed=part.seed)
            if not (
                np.array_equal(replayed.assignment, part.assignment)
                and replayed.clusters == part.clusters
            ):
                replay_fail = "replayed partition differs"
    checks.append(_check("partition-total-disjoint", sweep_fail is None, witness=sweep_fail))
    checks.append(
        _check(
            "partition-weak-diameter",
            sweep_fail is None,
            bound=(alpha + 1) * delta + TOL,
            witness=sweep_fail,
        )
    )
    checks.append(_check("partition-radius-range", sweep_fail is None, witness=sweep_fail))
    checks.append(_check("partition-replay-identical", replay_fail is None, witness=replay_fail))

    if gammas is None:
        gammas = [params.gamma_max / 4, params.gamma_max / 2, params.gamma_max]
    counts = padded_trial_counts(host, net, delta, gammas, trials, seed, dist_matrix)
    for gm in gammas:
        worst = int(counts[float(gm)].min())
        lcb = wilson_lower_bound(worst, trials)
        target = math.exp(-params.padding_beta * gm)
        checks.append(
            _check(
                f"padding-lcb-gamma-{gm:g}",
                lcb >= target,
                measured=lcb,
                bound=target,
                witness=f"vertex {int(counts[float(gm)].argmin())}",
            )
        )
    checks.append(sampler_ks_check(params.lam, 1.0, params.beta_internal, seed=seed))

    from .covers import build_partition_cover, build_sparse_cover

    oracle_d = _oracle_center_distances(host, net, oracle_cap)
    pk_counts = (oracle_d <= alpha * delta).sum(axis=0)
    cover = build_sparse_cover(host, net, delta)
    checks.extend(
        verify_cover(
            host, cover, alpha, delta, oracle_cap=oracle_cap, packing_counts=pk_counts
        ).checks
    )
    pcover = build_partition_cover(host, net, delta)
    checks.extend(
        verify_cover(host, pcover, alpha, delta, oracle_cap=oracle_cap, tau=net.tau_emp).checks
    )
    return VerificationReport(checks)


def _graph_property_checks(g: WeightedGraph, seed: int, oracle_cap: int) -> list[CheckResult]:
    rng = np.random.Generator(np.random.Philox(key=np.array([seed, 2], dtype=np.uint64)))
    everything = g.all_vertices()
    base = shortest_paths(g, everything, VertexSet(g.n, [0]))

    bad = None
    for _ in range(10):
        size = int(rng.integers(1, g.n + 1))
        members = rng.choice(g.n, size=size, replace=False).tolist()
        if 0 not in members:
            members.append(0)
        restrict = VertexSet(g.n, members)
        d = shortest_paths(g, restrict, VertexSet(g.n, [0]))
        if (d + TOL < base).any():
            bad = "restricted distance below unrestricted"
            break
    checks = [_check("restricted-distances-dominate", bad is None, witness=bad)]

    bad = None
    for _ in range(10):
        c = int(rng.integers(g.n))
        r1, r2 = sorted(rng.uniform(0, float(base[np.isfinite(base)].max()) + 1, size=2).tolist())
        b1 = ball(g, everything, VertexSet(g.n, [c]), r1).members
        b2 = ball(g, everything, VertexSet(g.n, [c]), r2).members
        if not b1.issubset(b2):
            bad = f"ball({c},{r1:.3g}) not inside ball({c},{r2:.3g})"
            break
    checks.append(_check("ball-monotone", bad is None, witness=bad))

    bad = None
    for _ in range(10):
        size = int(rng.integers(1, g.n + 1))
        members = VertexSet(g.n, rng.choice(g.n, size=size, replace=False).tolist())
        if weak_diameter(g, members) > strong_diameter(g, members) + TOL:
            bad = "weak diameter exceeds strong diameter"
            break
    checks.append(_check("weak-le-strong-diameter", bad is None, witness=bad))

    bad = None
    for _ in range(5):
        size = int(rng.integers(1, min(g.n, oracle_cap) + 1))
        members = rng.choice(g.n, size=size, replace=False).tolist()
        restrict = VertexSet(g.n, members)
        matrix = oracle_all_pairs(g, restrict, cap=oracle_cap)
        for s in members:
            d = shortest_paths(g, restrict, VertexSet(g.n, [s]))
            row = matrix[s]
            if not (
                np.array_equal(np.isinf(d[members]), np.isinf(row[members]))
                and np.array_equal(
                    d[members][np.isfinite(d[members])],
                    row[members][np.isfinite(row[members])],
                )
            ):
                bad = f"oracle mismatch from source {s}"
                break
        if bad:
            break
    checks.append(_check("dijkstra-floyd-warshall-agreement", bad is None, witness=bad))
    return checks
