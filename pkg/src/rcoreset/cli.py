"""Command-line entry point: ``rcoreset <subcommand> ...``."""

from __future__ import annotations

import argparse
import json
import sys
import warnings
from typing import Optional, Sequence

from . import generators as gens
from .coreset_matching import exact_merge, greedy_merge, matching_coreset
from .coreset_vc import RegimeWarning, format_vc_coreset, merge_vc, parse_vc_coreset, vc_coreset
from .experiment import GENERATORS, ConfigError, emit_report, format_report, load_config, run_experiment
from .graph import (
    Graph,
    GraphError,
    Matching,
    dump_graph,
    format_graph,
    induced_degree_one_matching,
    load_graph,
    parse_graph,
)
from .partition import (
    ADVERSARIAL_STRATEGIES,
    adversarial_partition,
    format_partition,
    load_partition,
    random_k_partition,
    save_partition,
)
from .protocol import SCHEMES, ProtocolError, run_simultaneous


def _write(text: str, out: Optional[str]) -> None:
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _instance(args) -> tuple[Graph, dict]:
    """Graph from --input, or from --generator with its parameters."""
    if getattr(args, "input", None):
        return load_graph(args.input), {"input": args.input}
    name = args.generator
    n, k, alpha, seed = args.n, args.k, args.alpha, args.seed
    if name in ("hard-matching", "hard-vc", "multiscale-vc") and alpha is None:
        raise ValueError(f"--alpha is required for generator {name}")
    if name == "hard-matching":
        inst = gens.gen_hard_matching(n, alpha, k, seed)
        return inst.graph, inst.metadata()
    if name == "hard-vc":
        inst = gens.gen_hard_vc(n, alpha, k, seed)
        return inst.graph, inst.metadata()
    if name == "multiscale-vc":
        inst = gens.gen_multiscale_vc(n, alpha, k, seed)
        return inst.graph, inst.metadata()
    if name == "random-bipartite":
        p = args.p if args.p is not None else (args.avg_degree or 1.0) / n
        return gens.gen_random_bipartite(n, p, seed), {"generator": name, "n": n, "p": p, "seed": seed}
    if name == "trap":
        return gens.gen_maximal_trap(n, k), {"generator": name, "n": n, "k": k}
    raise ValueError(f"unknown generator {name!r}")


def cmd_generate(args) -> int:
    g, meta = _instance(args)
    if args.out in (None, "-"):
        sys.stdout.write(format_graph(g))
    else:
        dump_graph(g, args.out)
        gens.write_metadata(meta, args.out + ".meta.json")
    return 0


def cmd_partition(args) -> int:
    g = load_graph(args.input)
    if args.strategy == "random":
        p = random_k_partition(g, args.k, args.seed)
    else:
        p = adversarial_partition(g, args.k, args.strategy)
    if args.out in (None, "-"):
        sys.stdout.write(format_partition(p))
    else:
        save_partition(p, args.out)
    return 0


def cmd_coreset(args) -> int:
    g = load_graph(args.input)
    p = load_partition(args.partition, g)
    shard = p.shard(args.shard)
    if args.scheme == "matching":
        c = matching_coreset(shard)
        _write(format_graph(c.to_graph(), [f"matching-coreset shard={args.shard} k={p.k}"]), args.out)
    else:
        _write(format_vc_coreset(vc_coreset(shard, g.side_size, p.k)), args.out)
    return 0


def cmd_merge(args) -> int:
    texts = []
    for path in args.coresets:
        with open(path, "r", encoding="utf-8") as fh:
            texts.append(fh.read())
    if args.scheme == "matching":
        coresets = [Matching.on(cg, cg.edge_list()) for cg in map(parse_graph, texts)]
        if args.merge == "greedy":
            m, _ = greedy_merge(coresets)
        else:
            m = exact_merge(coresets)
        _write(format_graph(m.to_graph(), [f"merged matching size={len(m)}"]), args.out)
    else:
        cover = merge_vc([parse_vc_coreset(t) for t in texts])
        _write(json.dumps({"size": len(cover), "cover": sorted(cover)}) + "\n", args.out)
    return 0


def cmd_simulate(args) -> int:
    g, meta = _instance(args)
    res = run_simultaneous(
        g, args.k, args.scheme, {"alpha": args.alpha}, args.seed,
        oracle=args.oracle, n_jobs=args.workers,
        instance={key: v for key, v in meta.items() if key not in ("A", "B", "planted")},
    )
    _write(res.to_json() + "\n", args.out)
    return 0 if res.valid else 1


def cmd_experiment(args) -> int:
    overrides = {
        "scheme": args.scheme,
        "generator": args.generator,
        "input": args.input,
        "n": args.n,
        "p": args.p,
        "avg_degree": args.avg_degree,
        "k": args.k,
        "alpha": args.alpha,
        "seeds": args.seeds,
        "num_seeds": args.num_seeds,
        "oracle": args.oracle,
        "out": args.out,
        "format": args.format,
        "workers": args.workers,
    }
    if args.input and not args.generator:
        overrides["generator"] = "file"
    try:
        cfg = load_config(args.config, overrides)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    report = run_experiment(cfg)
    if cfg.out:
        emit_report(report, cfg.format, cfg.out)
    else:
        sys.stdout.write(format_report(report, cfg.format))
    return 0


def cmd_stats(args) -> int:
    g = load_graph(args.input)
    out: dict = {"num_vertices": g.num_vertices, "num_edges": g.num_edges}
    out["induced_matching"] = len(induced_degree_one_matching(g))
    if g.is_bipartite:
        st = gens.degree_one_stats(g)
        out.update(s_size=st.s_size, r1_size=len(st.r1), t_size=st.t_size)
        out["single_ball_matching"] = len(gens.single_ball_induced_matching(g))
    if args.k:
        p = random_k_partition(g, args.k, args.seed)
        out["shard_sizes"] = p.shard_sizes().tolist()
        out["shard_induced_matching"] = [len(induced_degree_one_matching(s)) for s in p.shards()]
    _write(json.dumps(out, indent=1) + "\n", args.out)
    return 0


def _csv_list(conv):
    def parse(text: str):
        return [conv(t) for t in text.split(",") if t]

    return parse


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rcoreset", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, k_default=4, list_flags=False):
        p.add_argument("--seed", type=int, default=0)
        if list_flags:
            p.add_argument("--k", type=_csv_list(int), default=None, help="comma-separated list")
            p.add_argument("--alpha", type=_csv_list(float), default=None, help="comma-separated list")
        else:
            p.add_argument("--k", type=int, default=k_default)
            p.add_argument("--alpha", type=float, default=None)
        p.add_argument("--out", default=None)
        p.add_argument("--format", choices=("csv", "json"), default=None)

    def instance_flags(p, default_generator="hard-matching"):
        p.add_argument("--input", default=None, help="edge-list file instead of a generator")
        p.add_argument("--generator", choices=[g for g in GENERATORS if g != "file"], default=default_generator)
        p.add_argument("--n", type=int, default=1024, help="vertices per side")
        p.add_argument("--p", type=float, default=None)
        p.add_argument("--avg-degree", type=float, default=None)

    p = sub.add_parser("generate", help="write an instance and its metadata sidecar")
    common(p)
    instance_flags(p)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("partition", help="partition a graph's edges into k shards")
    common(p)
    p.add_argument("--input", required=True)
    p.add_argument("--strategy", choices=("random",) + ADVERSARIAL_STRATEGIES, default="random")
    p.set_defaults(func=cmd_partition)

    p = sub.add_parser("coreset", help="build one shard's coreset")
    common(p)
    p.add_argument("--input", required=True)
    p.add_argument("--partition", required=True)
    p.add_argument("--shard", type=int, required=True)
    p.add_argument("--scheme", choices=("matching", "vc"), default="matching")
    p.set_defaults(func=cmd_coreset)

    p = sub.add_parser("merge", help="merge coreset files at the coordinator")
    common(p)
    p.add_argument("coresets", nargs="+")
    p.add_argument("--scheme", choices=("matching", "vc"), default="matching")
    p.add_argument("--merge", choices=("exact", "greedy"), default="exact")
    p.set_defaults(func=cmd_merge)

    p = sub.add_parser("simulate", help="run one scheme end to end")
    common(p)
    instance_flags(p)
    p.add_argument("--scheme", choices=SCHEMES, default="matching-coreset")
    p.add_argument("--oracle", action="store_true")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("experiment", help="sweep k, alpha and seeds; write a report")
    common(p, list_flags=True)
    p.add_argument("--config", default=None, help="key = value file; flags override it")
    p.add_argument("--input", default=None)
    p.add_argument("--generator", choices=GENERATORS, default=None)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--p", type=float, default=None)
    p.add_argument("--avg-degree", type=float, default=None)
    p.add_argument("--scheme", choices=SCHEMES, default=None)
    p.add_argument("--seeds", type=_csv_list(int), default=None)
    p.add_argument("--num-seeds", type=int, default=None)
    p.add_argument("--oracle", action=argparse.BooleanOptionalAction, default=None)
    p.add_argument("--workers", type=int, default=None)
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("stats", help="degree-one and induced-matching statistics")
    common(p, k_default=0)
    p.add_argument("--input", required=True)
    p.set_defaults(func=cmd_stats)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("default", RegimeWarning)
            return args.func(args)
    except (GraphError, ProtocolError, ConfigError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
