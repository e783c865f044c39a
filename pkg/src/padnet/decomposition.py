"""Randomized padded decomposition sampled from a tree-ordered net.

Centers are processed root-to-leaf; each draws a radius delta_i * Delta with
delta_i from a truncated exponential on [1, beta], beta = (alpha+1)/2, and
claims the not-yet-claimed part of its radius ball inside the subgraph
induced by its descendants.  The rate lambda = 4/(alpha-1) * ln(2 tau) uses
the measured packing value tau, which is what the padding guarantee
exp(-16 (alpha+1)/(alpha-1) ln(2 tau) * gamma) actually depends on.

Randomness: one counter-based stream per center, keyed by (seed, center id).
A single sample reads draw 0 of each stream; trial t of a batch reads draw t,
so trials are independent, reproducible, and chunkable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .graph import WeightedGraph
from .ordered_net import TreeOrderedNet


@dataclass(frozen=True)
class TruncatedExp:
    """Exponential distribution with rate lam conditioned on [theta1, theta2]."""

    theta1: float
    theta2: float
    lam: float

    def __post_init__(self):
        if self.lam <= 0:
            raise ValueError(f"lambda must be > 0, got {self.lam}")
        if self.theta1 >= self.theta2:
            raise ValueError(f"need theta1 < theta2, got [{self.theta1}, {self.theta2}]")

    def density(self, y):
        y = np.asarray(y, dtype=float)
        lo, hi = math.exp(-self.lam * self.theta1), math.exp(-self.lam * self.theta2)
        val = self.lam * np.exp(-self.lam * y) / (lo - hi)
        return np.where((y >= self.theta1) & (y <= self.theta2), val, 0.0)

    def cdf(self, y):
        y = np.asarray(y, dtype=float)
        lo, hi = math.exp(-self.lam * self.theta1), math.exp(-self.lam * self.theta2)
        out = (lo - np.exp(-self.lam * np.clip(y, self.theta1, self.theta2))) / (lo - hi)
        return np.where(y < self.theta1, 0.0, np.where(y > self.theta2, 1.0, out))


def sample_truncated_exp(dist: TruncatedExp, u) -> np.ndarray | float:
    """Inverse-CDF transform; u=0 and u=1 hit the interval endpoints exactly."""
    scalar = np.isscalar(u)
    u = np.asarray(u, dtype=float)
    if ((u < 0) | (u > 1)).any():
        raise ValueError("uniform draw outside [0, 1]")
    lo, hi = math.exp(-dist.lam * dist.theta1), math.exp(-dist.lam * dist.theta2)
    with np.errstate(divide="ignore"):
        y = -np.log(lo - u * (lo - hi)) / dist.lam
    y = np.clip(y, dist.theta1, dist.theta2)
    y = np.where(u == 0.0, dist.theta1, np.where(u == 1.0, dist.theta2, y))
    return float(y) if scalar else y


@dataclass(frozen=True)
class DecompositionParams:
    alpha: float
    delta: float
    beta_internal: float
    lam: float
    tau: int
    gamma_max: float
    padding_beta: float
    diameter_bound: float

    @classmethod
    def from_net(cls, net: TreeOrderedNet, delta: float) -> "DecompositionParams":
        alpha = net.alpha
        if net.tau_emp < 1:
            raise ValueError(f"net packing value must be >= 1, got {net.tau_emp}")
        if alpha <= 1:
            raise ValueError(f"alpha must be > 1 for the padding guarantee, got {alpha}")
        return cls(
            alpha=alpha,
            delta=delta,
            beta_internal=(alpha + 1) / 2,
            lam=4.0 / (alpha - 1) * math.log(2 * net.tau_emp),
            tau=net.tau_emp,
            gamma_max=(alpha - 1) / (8 * (alpha + 1)),
            padding_beta=16.0 * (alpha + 1) / (alpha - 1) * math.log(2 * net.tau_emp),
            diameter_bound=(alpha + 1) * delta,
        )

    def to_json_dict(self) -> dict:
        return {
            "alpha": self.alpha,
            "delta": self.delta,
            "beta_internal": self.beta_internal,
            "lambda": self.lam,
            "tau": self.tau,
            "gamma_max": self.gamma_max,
            "padding_beta": self.padding_beta,
            "diameter_bound": self.diameter_bound,
        }


@dataclass(frozen=True)
class PaddedCluster:
    center: int
    radius: float
    members: frozenset[int]


@dataclass
class PaddedPartition:
    """One sampled partition plus the trace needed to replay it exactly."""

    clusters: tuple[PaddedCluster, ...]
    assignment: np.ndarray
    seed: int
    params: DecompositionParams
    trace: tuple[tuple[int, float], ...]

    def to_json_dict(self) -> dict:
        return {
            "seed": self.seed,
            "params": self.params.to_json_dict(),
            "clusters": [
                {
                    "center": c.center,
                    "radius": c.radius,
                    "members": sorted(c.members),
                }
                for c in self.clusters
            ],
            "assignment": {str(v): int(self.assignment[v]) for v in range(len(self.assignment))},
            "trace": [{"center": c, "radius": r} for c, r in self.trace],
        }


def _center_uniforms(seed: int, center: int, count: int, offset: int = 0) -> np.ndarray:
    """Draws offset..offset+count-1 of the stream keyed by (seed, center)."""
    if seed < 0:
        raise ValueError(f"seed must be >= 0, got {seed}")
    key = np.array([seed, center], dtype=np.uint64)
    gen = np.random.Generator(np.random.Philox(key=key))
    return gen.random(offset + count)[offset:]


def _check_inputs(net: TreeOrderedNet, delta: float):
    if delta <= 0:
        raise ValueError(f"delta must be > 0, got {delta}")
    if delta != net.delta:
        raise ValueError(f"net was built for delta={net.delta}, asked to sample at {delta}")


def _assign_from_radii(net: TreeOrderedNet, radii: np.ndarray) -> np.ndarray:
    """First-claiming center per vertex, given one radius per ordered center."""
    dist = net.center_distance_matrix()
    claimed = dist <= radii[:, None]
    if not claimed.any(axis=0).all():
        v = int(np.flatnonzero(~claimed.any(axis=0))[0])
        raise AssertionError(f"vertex {v} claimed by no center; covering violated")
    return np.argmax(claimed, axis=0)


def sample_padded_decomposition(
    g: WeightedGraph, net: TreeOrderedNet, delta: float, seed: int
) -> PaddedPartition:
    _check_inputs(net, delta)
    params = DecompositionParams.from_net(net, delta)
    texp = TruncatedExp(1.0, params.beta_internal, params.lam)
    centers = net.centers_in_order()
    draws = np.array(
        [sample_truncated_exp(texp, float(_center_uniforms(seed, int(x), 1)[0])) for x in centers]
    )
    radii = draws * delta
    return _partition_from_radii(net, radii, seed, params)


def replay_decomposition(
    g: WeightedGraph, net: TreeOrderedNet, trace: list[tuple[int, float]], seed: int = -1
) -> PaddedPartition:
    """Rebuild a partition from recorded (center, radius) pairs."""
    centers = net.centers_in_order()
    by_center = dict(trace)
    radii = np.array([by_center[int(x)] for x in centers])
    params = DecompositionParams.from_net(net, net.delta)
    return _partition_from_radii(net, radii, seed, params)


def _partition_from_radii(
    net: TreeOrderedNet, radii: np.ndarray, seed: int, params: DecompositionParams
) -> PaddedPartition:
    centers = net.centers_in_order()
    raw = _assign_from_radii(net, radii)
    clusters: list[PaddedCluster] = []
    renumber = np.full(len(centers), -1, dtype=np.int64)
    for i in range(len(centers)):
        members = np.flatnonzero(raw == i)
        if members.size == 0:
            continue
        renumber[i] = len(clusters)
        clusters.append(
            PaddedCluster(
                center=int(centers[i]),
                radius=float(radii[i]),
                members=frozenset(members.tolist()),
            )
        )
    assignment = renumber[raw]
    trace = tuple((int(centers[i]), float(radii[i])) for i in range(len(centers)))
    return PaddedPartition(
        clusters=tuple(clusters),
        assignment=assignment,
        seed=seed,
        params=params,
        trace=trace,
    )


def sample_assignments(
    g: WeightedGraph,
    net: TreeOrderedNet,
    delta: float,
    seed: int,
    trials: int,
    chunk: int = 256,
) -> Iterator[np.ndarray]:
    """Yield assignment matrices (chunk x n) for trials 0..trials-1.

    Trial t uses draw t of each per-center stream, so trial 0 reproduces
    sample_padded_decomposition(seed) cluster-for-cluster.
    """
    _check_inputs(net, delta)
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    params = DecompositionParams.from_net(net, delta)
    texp = TruncatedExp(1.0, params.beta_internal, params.lam)
    centers = net.centers_in_order()
    uniforms = np.stack(
        [_center_uniforms(seed, int(x), trials) for x in centers]
    )  # (k, trials)
    radii_all = sample_truncated_exp(texp, uniforms) * delta
    dist = net.center_distance_matrix()
    for start in range(0, trials, chunk):
        stop = min(start + chunk, trials)
        block = radii_all[:, start:stop]  # (k, t)
        claimed = dist[:, :, None] <= block[:, None, :]  # (k, n, t)
        if not claimed.any(axis=0).all():
            raise AssertionError("covering violated in batch sampling")
        yield np.argmax(claimed, axis=0).T  # (t, n)


_WILSON_Z99 = 2.3263478740408408  # one-sided 99% normal quantile


def wilson_lower_bound(successes: int, trials: int, z: float = _WILSON_Z99) -> float:
    """Wilson score lower confidence bound for a binomial proportion."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    p = successes / trials
    denom = 1.0 + z * z / trials
    center = p + z * z / (2 * trials)
    rad = z * math.sqrt(p * (1 - p) / trials + z * z / (4 * trials * trials))
    return max(0.0, (center - rad) / denom)


def padding_probability_estimate(
    g: WeightedGraph,
    net: TreeOrderedNet,
    delta: float,
    gamma: float,
    trials: int,
    seed: int,
    dist_matrix: np.ndarray | None = None,
) -> tuple[float, float]:
    """Monte Carlo worst-vertex rate of B(z, gamma*(alpha+1)*delta) staying whole.

    Returns (empirical rate, Wilson 99% lower bound) for the worst vertex.
    `dist_matrix` may carry precomputed all-pairs distances of g.
    """
    params = DecompositionParams.from_net(net, delta)
    if not 0 <= gamma <= params.gamma_max:
        raise ValueError(f"gamma must lie in [0, {params.gamma_max}], got {gamma}")
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    counts = padded_trial_counts(g, net, delta, [gamma], trials, seed, dist_matrix)[gamma]
    worst = int(counts.min())
    return worst / trials, wilson_lower_bound(worst, trials)


def padded_trial_counts(
    g: WeightedGraph,
    net: TreeOrderedNet,
    delta: float,
    gammas: list[float],
    trials: int,
    seed: int,
    dist_matrix: np.ndarray | None = None,
) -> dict[float, np.ndarray]:
    """Per-vertex counts of trials whose gamma-ball stayed in one cluster."""
    from .graph import VertexSet, shortest_paths

    params = DecompositionParams.from_net(net, delta)
    if dist_matrix is None:
        dist_matrix = np.stack(
            [shortest_paths(g, g.all_vertices(), VertexSet(g.n, [v])) for v in range(g.n)]
        )
    # flatten each gamma's balls into (z_flat, u_flat) segments for reduceat
    segments = {}
    for gm in gammas:
        rows, cols = np.nonzero(dist_matrix <= gm * params.diameter_bound)
        starts = np.searchsorted(rows, np.arange(g.n))
        segments[float(gm)] = (rows, cols, starts)
    counts = {gm: np.zeros(g.n, dtype=np.int64) for gm in segments}
    for block in sample_assignments(g, net, delta, seed, trials):
        for gm, (rows, cols, starts) in segments.items():
            # z is padded in a trial when no ball member leaves z's cluster
            diff = block[:, cols] != block[:, rows]
            cut = np.logical_or.reduceat(diff, starts, axis=1)
            counts[gm] += (~cut).sum(axis=0)
    return counts
