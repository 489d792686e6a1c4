"""Command-line front end: block -> subset -> graph -> structure algebra / BM sheaf -> checks.

Exit codes: 0 success (or every check passed), 1 a check failed, 2 invalid input.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from fractions import Fraction

from .blocks import BlockWindow, block_window
from .bm import (
    bm_construct,
    check_soergel_assumptions,
    endomorphism_image,
    global_sections,
    struktursatz_report,
    subgeneric_report,
)
from .exactpoly import as_fraction
from .moment_graph import MomentGraph, build_moment_graph, delta_condition_check, export_graph, gkm_check, import_graph
from .roots import Weight, build_root_system
from .sections import check_projective
from .structure import structure_basis

STATEMENTS = {
    "gkm": "GKM lemma for delta-condition subsets",
    "soergel": "standing assumptions: multiplicity free, support K, delta-condition",
    "endo": "Endomorphismensatz: endomorphisms of the big projective form the structure algebra",
    "projective": "projectivity criterion: free stalks and (M^E)_chi = l M^chi on every edge",
    "subgeneric": "subgeneric endomorphism ring and short exact sequence",
    "struktursatz": "Struktursatz / BGG reciprocity: Hom into standard objects counts stalk ranks",
}


class InputError(Exception):
    pass


@dataclass
class RunConfig:
    cartan_type: str
    base: Weight | None
    delta_window: int
    height_window: int
    subset: str
    max_degree: int
    graph_path: str | None
    base_vertex: int | None
    json_path: str | None
    dot_path: str | None
    plot_path: str | None


def parse_weight(text: str, rank: int) -> Weight:
    """``"a,b"`` or ``"a,b|d"`` with integer or ``p/q`` entries."""
    finite, _, delta = text.partition("|")
    try:
        parts = [as_fraction(p.strip()) for p in finite.split(",") if p.strip()]
        d = as_fraction(delta.strip()) if delta.strip() else Fraction(0)
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"cannot parse weight {text!r}: {exc}") from exc
    if len(parts) != rank:
        raise InputError(f"weight {text!r} needs {rank} finite coordinates")
    return Weight(parts, d)


def _config(args) -> RunConfig:
    try:
        rs = build_root_system(args.type)
    except (ValueError, KeyError) as exc:
        raise InputError(f"unknown root system {args.type!r}") from exc
    base = parse_weight(args.lam, rs.rank) if args.lam is not None else Weight([0] * rs.rank, 0)
    for name in ("delta_window", "height_window", "max_degree"):
        if getattr(args, name) < 0:
            raise InputError(f"--{name.replace('_', '-')} must be nonnegative")
    return RunConfig(rs.name, base, args.delta_window, args.height_window, args.subset, args.max_degree,
                     args.graph, args.base, args.json, args.dot, args.plot)


def _window(cfg: RunConfig) -> BlockWindow:
    return block_window(build_root_system(cfg.cartan_type), cfg.base, cfg.delta_window, cfg.height_window)


def _select(cfg: RunConfig, W: BlockWindow) -> list[int]:
    selector = cfg.subset.strip()
    n = len(W)
    try:
        if selector == "all":
            return list(range(n))
        if selector.startswith("interval:"):
            lo, hi = (int(x) for x in selector[len("interval:"):].split(","))
            if not (0 <= lo < n and 0 <= hi < n):
                raise InputError("interval endpoints out of range")
            idx = [k for k in range(n) if W.le(lo, k) and W.le(k, hi)]
            if not idx:
                raise InputError(f"interval {selector!r} is empty: weight {lo} is not below weight {hi}")
            return idx
        idx = sorted({int(x) for x in selector.split(",") if x.strip()})
    except ValueError as exc:
        raise InputError(f"cannot parse subset {selector!r}") from exc
    if not idx or any(not 0 <= i < n for i in idx):
        raise InputError(f"subset {selector!r} is empty or out of range (window has {n} weights)")
    return idx


def _graph(cfg: RunConfig) -> MomentGraph:
    if cfg.graph_path:
        try:
            with open(cfg.graph_path) as fh:
                return import_graph(fh.read())
        except OSError as exc:
            raise InputError(f"cannot read {cfg.graph_path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise InputError(f"malformed JSON in {cfg.graph_path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    W = _window(cfg)
    return build_moment_graph(W, _select(cfg, W))


def _emit(cfg: RunConfig, payload: str) -> None:
    if cfg.json_path:
        with open(cfg.json_path, "w") as fh:
            fh.write(payload)
    else:
        sys.stdout.write(payload)


def _dump(data) -> str:
    return json.dumps(data, indent=2, sort_keys=True) + "\n"


# ---------------------------------------------------------------------------


def cmd_block(cfg: RunConfig) -> int:
    W = _window(cfg)
    _emit(cfg, _dump(W.to_json()))
    if cfg.dot_path:
        with open(cfg.dot_path, "w") as fh:
            fh.write(W.to_dot())
    return 0


def cmd_graph(cfg: RunConfig) -> int:
    G = _graph(cfg)
    _emit(cfg, export_graph(G, "json"))
    if cfg.dot_path:
        with open(cfg.dot_path, "w") as fh:
            fh.write(export_graph(G, "dot"))
    if cfg.plot_path:
        from .plotting import plot_moment_graph

        plot_moment_graph(G, cfg.plot_path)
    v = gkm_check(G)
    status = "ok" if v is None else f"violation at vertex {v.vertex}"
    print(f"{len(G)} vertices, {len(G.edges)} edges, GKM: {status}", file=sys.stderr)
    return 0


def cmd_zbasis(cfg: RunConfig) -> int:
    G = _graph(cfg)
    table = []
    for d in range(cfg.max_degree + 1):
        sb = structure_basis(G, d)
        table.append({"degree": d, "dim": sb.dim, "basis": [[str(p) for p in t.components] for t in sb.basis]})
    _emit(cfg, _dump({"graph": json.loads(export_graph(G)), "degrees": table}))
    if cfg.plot_path:
        from .plotting import plot_dimension_table

        plot_dimension_table({"Z(K)": [row["dim"] for row in table]}, cfg.plot_path)
    return 0


def cmd_bm(cfg: RunConfig) -> int:
    G = _graph(cfg)
    B = bm_construct(G, cfg.base_vertex, cfg.max_degree)
    gamma = global_sections(B)
    _emit(cfg, _dump({"sheaf": B.to_dict(), "sections": gamma.to_dict()}))
    if cfg.plot_path:
        from .plotting import plot_moment_graph

        plot_moment_graph(G, cfg.plot_path, stalk_ranks=[B.stalk_rank(v) for v in range(len(G))])
    return 0


def _verify(cfg: RunConfig, which: str) -> tuple[bool, dict]:
    G = _graph(cfg)
    D = cfg.max_degree
    if which == "gkm":
        v = gkm_check(G)
        weights = [x for x in G.vertices if isinstance(x, Weight)]
        details = {
            "gkm": v is None,
            "delta_condition": delta_condition_check(weights) if len(weights) == len(G) else None,
        }
        if v is not None:
            details["violation"] = {"vertex": v.vertex, "edges": [[v.edge1.u, v.edge1.v], [v.edge2.u, v.edge2.v]]}
        return v is None, details
    if which == "soergel":
        rep = check_soergel_assumptions(G, cfg.base_vertex, None, D)
        return rep.passed, rep.to_dict()
    if which == "endo":
        gamma = global_sections(bm_construct(G, cfg.base_vertex, D))
        got = list(endomorphism_image(gamma).dims)
        want = [structure_basis(G, d).dim for d in range(D + 1)]
        return got == want, {"endomorphism_dims": got, "structure_dims": want}
    if which == "projective":
        rep = check_projective(global_sections(bm_construct(G, cfg.base_vertex, D)))
        return rep.passed, rep.to_dict()
    if which == "subgeneric":
        if len(G) != 2 or len(G.edges) != 1:
            raise InputError("subgeneric check needs a single-edge graph (select two linked weights)")
        rep = subgeneric_report(G, D)
        return rep.passed, rep.to_dict()
    if which == "struktursatz":
        rep = struktursatz_report(G, cfg.base_vertex, D)
        return rep.passed, rep.to_dict()
    raise InputError(f"unknown check {which!r}")


def cmd_verify(cfg: RunConfig, which: str) -> int:
    ok, details = _verify(cfg, which)
    report = {"check": which, "statement": STATEMENTS[which], "passed": ok, "certified_degree": cfg.max_degree,
              "details": details}
    _emit(cfg, _dump(report))
    return 0 if ok else 1


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--type", default="A1", help="finite root system, e.g. A1, A2, B2")
    common.add_argument("--lambda", dest="lam", default=None, help='base weight "a,b" or "a,b|delta"')
    common.add_argument("--delta-window", type=int, default=1)
    common.add_argument("--height-window", type=int, default=2)
    common.add_argument("--subset", default="all", help='"all", "i,j,k" or "interval:i,j"')
    common.add_argument("--max-degree", type=int, default=6)
    common.add_argument("--graph", default=None, help="read the moment graph from JSON instead")
    common.add_argument("--base", type=int, default=None, help="base vertex of the BM sheaf")
    common.add_argument("--json", default=None, help="write JSON output here instead of stdout")
    common.add_argument("--dot", default=None, help="also write a DOT file")
    common.add_argument("--plot", default=None, help="also render a PNG figure")

    parser = argparse.ArgumentParser(prog="momentgraphs", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("block", parents=[common], help="finite window of a block")
    sub.add_parser("graph", parents=[common], help="moment graph of a subset")
    sub.add_parser("zbasis", parents=[common], help="structure algebra degree table")
    sub.add_parser("bm", parents=[common], help="BM sheaf and its global sections")
    v = sub.add_parser("verify", parents=[common], help="run a check; exit 1 if it fails")
    v.add_argument("check", choices=sorted(STATEMENTS))
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _config(args)
        if args.command == "verify":
            return cmd_verify(cfg, args.check)
        return {"block": cmd_block, "graph": cmd_graph, "zbasis": cmd_zbasis, "bm": cmd_bm}[args.command](cfg)
    except (InputError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
