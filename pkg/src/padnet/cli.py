"""Command-line pipeline: load graph + tree decomposition, convert, build the
net, then decompose / cover / verify / estimate, emitting JSON artifacts.

Identical invocations produce byte-identical JSON (seeded randomness only).
Exit codes: 0 ok, 1 verification failure, 2 unusable input or configuration.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

from .covers import build_partition_cover, build_sparse_cover
from .decomposition import (
    DecompositionParams,
    padded_trial_counts,
    sample_padded_decomposition,
    wilson_lower_bound,
)
from .graph import GraphFormatError, parse_edge_list
from .ordered_net import build_tree_ordered_net, packing_profile
from .trees import TdValidationError, load_tree_decomposition, td_to_tree_partition
from .verify import OracleCapError, full_report, verify_embedding


class CliError(Exception):
    def __init__(self, message: str, code: int = 2):
        super().__init__(message)
        self.code = code


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise CliError(f"{path}: {exc.strerror or exc}")


def _load_inputs(args):
    text = _read(args.graph)
    try:
        g = parse_edge_list(text)
    except GraphFormatError as exc:
        raise CliError(f"{args.graph}: {exc}")
    td_text = _read(args.td)
    try:
        td = load_tree_decomposition(td_text, g)
    except (GraphFormatError, TdValidationError) as exc:
        raise CliError(f"{args.td}: {exc}")
    return g, td


def _build_net(g, td, delta: float, alpha: float):
    emb = td_to_tree_partition(g, td)
    net = build_tree_ordered_net(emb.host, emb.tree_partition, delta, alpha=alpha)
    return emb, net


def _emit(args, payload: dict) -> None:
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _project_members(emb, members) -> list[int]:
    host_set = set(members)
    return sorted(v for v in range(emb.forward.shape[0]) if int(emb.forward[v]) in host_set)


def cmd_convert(args) -> int:
    g, td = _load_inputs(args)
    emb = td_to_tree_partition(g, td)
    try:
        checks = verify_embedding(g, td, emb, oracle_cap=args.oracle_cap)
        failed = [c.name for c in checks if c.status == "fail"]
        isometry = "pass" if not failed else "fail: " + ",".join(failed)
    except OracleCapError as exc:
        isometry = f"skipped: {exc}"
    payload = {
        "command": "convert",
        "width": {
            "td_width": td.width,
            "td_max_bag_size": td.max_bag_size,
            "tp_width": emb.tree_partition.width,
        },
        "host": {"n": emb.host.n, "m": emb.host.m},
        "tree_partition": {
            "root": emb.tree_partition.root,
            "parent": list(emb.tree_partition.parent),
            "bags": [sorted(b) for b in emb.tree_partition.bags],
        },
        "forward": {str(v): int(emb.forward[v]) for v in range(g.n)},
        "copies": {str(v): list(emb.copies[v]) for v in range(g.n)},
        "isometry": isometry,
    }
    _emit(args, payload)
    return 0 if not isometry.startswith("fail") else 1


def cmd_net(args) -> int:
    g, td = _load_inputs(args)
    emb, net = _build_net(g, td, args.delta, args.alpha)
    payload = net.to_json_dict()
    payload["command"] = "net"
    profile = packing_profile(net, emb.host, [2.0, 3.0, net.alpha])
    payload["packing_profile"] = {str(m): v for m, v in sorted(profile.items())}
    _emit(args, payload)
    return 0


def cmd_decompose(args) -> int:
    g, td = _load_inputs(args)
    emb, net = _build_net(g, td, args.delta, args.alpha)
    params = DecompositionParams.from_net(net, args.delta)
    samples = []
    for i in range(args.trials):
        part = sample_padded_decomposition(emb.host, net, args.delta, args.seed + i)
        d = part.to_json_dict()
        d["original_assignment"] = {
            str(v): int(part.assignment[emb.forward[v]]) for v in range(g.n)
        }
        samples.append(d)
    payload = {
        "command": "decompose",
        "params": params.to_json_dict(),
        "seed": args.seed,
        "samples": samples,
    }
    _emit(args, payload)
    return 0


def cmd_cover(args) -> int:
    g, td = _load_inputs(args)
    emb, net = _build_net(g, td, args.delta, args.alpha)
    cover = build_sparse_cover(emb.host, net, args.delta)
    payload = cover.to_json_dict()
    payload["command"] = "cover"
    for c, cluster in zip(payload["clusters"], cover.clusters):
        c["original_members"] = _project_members(emb, cluster.members)
    _emit(args, payload)
    return 0


def cmd_partition_cover(args) -> int:
    g, td = _load_inputs(args)
    emb, net = _build_net(g, td, args.delta, args.alpha)
    pcover = build_partition_cover(emb.host, net, args.delta)
    payload = pcover.to_json_dict()
    payload["command"] = "partition-cover"
    payload["tau_emp"] = net.tau_emp
    for part, built in zip(payload["partitions"], pcover.partitions):
        for c, cluster in zip(part, built):
            c["original_members"] = _project_members(emb, cluster.members)
    _emit(args, payload)
    return 0


def cmd_verify(args) -> int:
    g, td = _load_inputs(args)
    try:
        report = full_report(
            g,
            td,
            args.delta,
            alpha=args.alpha,
            seed=args.seed,
            trials=args.trials,
            oracle_cap=args.oracle_cap,
        )
    except OracleCapError as exc:
        raise CliError(f"{exc}; raise --oracle-cap (graph or host larger than cap)")
    payload = report.to_json_dict()
    payload["command"] = "verify"
    table_stream = sys.stdout if args.out else sys.stderr
    print(report.format_table(), file=table_stream)
    _emit(args, payload)
    return 0 if report.ok else 1


def cmd_padding_estimate(args) -> int:
    g, td = _load_inputs(args)
    emb, net = _build_net(g, td, args.delta, args.alpha)
    params = DecompositionParams.from_net(net, args.delta)
    gammas = args.gamma or [params.gamma_max / 4, params.gamma_max / 2, params.gamma_max]
    for gm in gammas:
        if not 0 <= gm <= params.gamma_max:
            raise CliError(f"gamma {gm} outside [0, {params.gamma_max}]")
    counts = padded_trial_counts(emb.host, net, args.delta, gammas, args.trials, args.seed)
    rows = []
    for gm in gammas:
        worst = int(counts[float(gm)].min())
        rows.append(
            {
                "gamma": gm,
                "ball_radius": gm * params.diameter_bound,
                "worst_rate": worst / args.trials,
                "wilson_lcb_99": wilson_lower_bound(worst, args.trials),
                "target": math.exp(-params.padding_beta * gm),
                "satisfied": wilson_lower_bound(worst, args.trials)
                >= math.exp(-params.padding_beta * gm),
            }
        )
    payload = {
        "command": "padding-estimate",
        "params": params.to_json_dict(),
        "trials": args.trials,
        "seed": args.seed,
        "estimates": rows,
    }
    _emit(args, payload)
    return 0


def _add_common(p: argparse.ArgumentParser, delta: bool = True):
    p.add_argument("--graph", required=True, help="edge-list file (p ge header)")
    p.add_argument("--td", required=True, help="PACE-2017 .td file")
    if delta:
        p.add_argument("--delta", type=float, required=True, help="covering radius")
    p.add_argument("--alpha", type=float, default=3.0, help="packing radius multiplier")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=10_000)
    p.add_argument("--gamma", type=float, action="append", help="repeatable padding gamma")
    p.add_argument("--oracle-cap", type=int, default=60, dest="oracle_cap")
    p.add_argument("--out", help="output JSON path (default stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="padnet",
        description="Padded decompositions, sparse covers, and padded partition "
        "covers for bounded-treewidth graphs via tree-ordered nets.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    handlers = {
        "convert": cmd_convert,
        "net": cmd_net,
        "decompose": cmd_decompose,
        "cover": cmd_cover,
        "partition-cover": cmd_partition_cover,
        "verify": cmd_verify,
        "padding-estimate": cmd_padding_estimate,
    }
    for name, fn in handlers.items():
        p = sub.add_parser(name)
        _add_common(p, delta=(name != "convert"))
        p.set_defaults(handler=fn)
        if name == "decompose":
            p.set_defaults(trials=1)  # samples to draw; other commands default 10^4
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "decompose" and args.trials < 1:
        print("error: --trials must be >= 1", file=sys.stderr)
        return 2
    try:
        return args.handler(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except (GraphFormatError, TdValidationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
