"""Reproducible parameter sweeps over instances, schemes, k, alpha and seeds."""

from __future__ import annotations

import csv
import io
import json
import os
import time
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, fields
from typing import Any, Mapping, Optional

from .coreset_vc import RegimeWarning
from .generators import (
    gen_hard_matching,
    gen_hard_vc,
    gen_maximal_trap,
    gen_multiscale_vc,
    gen_random_bipartite,
)
from .graph import Graph, load_graph
from .protocol import SCHEMES, run_simultaneous
from .vertex_cover import BRUTE_FORCE_MAX_VERTICES

__all__ = [
    "GENERATORS",
    "REPORT_COLUMNS",
    "ExperimentConfig",
    "ConfigError",
    "Report",
    "build_instance",
    "run_experiment",
    "emit_report",
    "format_report",
    "parse_config_text",
    "load_config",
]

GENERATORS = ("hard-matching", "hard-vc", "multiscale-vc", "random-bipartite", "trap", "file")

#: Fixed report header.  ``wall_time`` is the only column that may differ between replays.
REPORT_COLUMNS = (
    "generator",
    "n",
    "k",
    "alpha",
    "seed",
    "scheme",
    "solution_size",
    "optimum",
    "ratio",
    "total_bits",
    "max_machine_bits",
    "valid",
    "wall_time",
)


class ConfigError(ValueError):
    pass


@dataclass
class ExperimentConfig:
    scheme: str = "matching-coreset"
    generator: str = "hard-matching"
    input: Optional[str] = None
    n: int = 1024
    p: Optional[float] = None
    avg_degree: Optional[float] = None
    scales: int = 5
    k: list = field(default_factory=lambda: [4])
    alpha: list = field(default_factory=lambda: [None])
    seeds: list = field(default_factory=lambda: [0])
    oracle: bool = True
    out: Optional[str] = None
    format: str = "csv"
    workers: int = 1

    def validate(self) -> None:
        if self.scheme not in SCHEMES:
            raise ConfigError(f"unknown scheme {self.scheme!r}; expected one of {SCHEMES}")
        if self.generator not in GENERATORS:
            raise ConfigError(f"unknown generator {self.generator!r}; expected one of {GENERATORS}")
        if self.generator == "file" and not self.input:
            raise ConfigError("generator 'file' needs input=<path>")
        if not self.seeds:
            raise ConfigError("at least one seed is required")
        if not self.k or any(int(k) < 1 for k in self.k):
            raise ConfigError("k values must be positive integers")
        if self.format not in ("csv", "json"):
            raise ConfigError(f"unknown format {self.format!r}")
        needs_alpha = self.generator in ("hard-matching", "hard-vc", "multiscale-vc") or self.scheme in (
            "matching-subsampled",
            "vc-grouped",
        )
        if needs_alpha and any(a is None for a in self.alpha):
            raise ConfigError(f"generator {self.generator!r} / scheme {self.scheme!r} need alpha values")
        if self.generator == "random-bipartite" and self.p is None and self.avg_degree is None:
            raise ConfigError("random-bipartite needs p or avg_degree")


# -- config text: 'key = value' lines, lists comma separated ---------------

_LIST_KEYS = {"k": int, "alpha": float, "seeds": int}
_SCALAR_KEYS = {
    "scheme": str,
    "generator": str,
    "input": str,
    "n": int,
    "p": float,
    "avg_degree": float,
    "scales": int,
    "oracle": lambda s: s.strip().lower() in ("1", "true", "yes", "on"),
    "out": str,
    "format": str,
    "workers": int,
}


def _coerce(key: str, value: Any) -> Any:
    if key in _LIST_KEYS:
        conv = _LIST_KEYS[key]
        if isinstance(value, str):
            value = [v for v in value.replace(" ", "").split(",") if v]
        if not isinstance(value, (list, tuple)):
            value = [value]
        return [None if v in (None, "none", "None") else conv(v) for v in value]
    if key == "num_seeds":
        return list(range(int(value)))
    if key in _SCALAR_KEYS:
        return None if value is None else _SCALAR_KEYS[key](value) if isinstance(value, str) else value
    raise ConfigError(f"unknown config key {key!r}")


def parse_config_text(text: str) -> dict[str, Any]:
    out: dict[str, Any] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ConfigError(f"line {lineno}: expected 'key = value'")
        key = key.strip().replace("-", "_")
        out["seeds" if key == "num_seeds" else key] = _coerce(key, value.strip())
    return out


def load_config(path: Optional[str] = None, overrides: Optional[Mapping[str, Any]] = None) -> ExperimentConfig:
    """Config file values, then non-``None`` overrides (command-line flags) on top."""
    values: dict[str, Any] = {}
    if path:
        with open(path, "r", encoding="utf-8") as fh:
            values.update(parse_config_text(fh.read()))
    for key, value in (overrides or {}).items():
        if value is None:
            continue
        key = key.replace("-", "_")
        values["seeds" if key == "num_seeds" else key] = _coerce(key, value)
    known = {f.name for f in fields(ExperimentConfig)}
    unknown = set(values) - known
    if unknown:
        raise ConfigError(f"unknown config keys {sorted(unknown)}")
    cfg = ExperimentConfig(**values)
    cfg.validate()
    return cfg


# -- instances ----------------------------------------------------------


def build_instance(cfg: ExperimentConfig, k: int, alpha: Optional[float], seed: int) -> Graph:
    gen = cfg.generator
    if gen == "hard-matching":
        return gen_hard_matching(cfg.n, alpha, k, seed).graph
    if gen == "hard-vc":
        return gen_hard_vc(cfg.n, alpha, k, seed).graph
    if gen == "multiscale-vc":
        return gen_multiscale_vc(cfg.n, alpha, k, seed, cfg.scales).graph
    if gen == "random-bipartite":
        p = cfg.p if cfg.p is not None else cfg.avg_degree / cfg.n
        return gen_random_bipartite(cfg.n, p, seed)
    if gen == "trap":
        return gen_maximal_trap(cfg.n, k)
    return load_graph(cfg.input)


# -- reports ------------------------------------------------------------


@dataclass
class Report:
    rows: list = field(default_factory=list)

    def sorted(self) -> "Report":
        def key(r):
            a = r["alpha"]
            return (r["scheme"], r["k"], -1.0 if a is None else a, r["seed"])

        return Report(sorted(self.rows, key=key))

    def without_timing(self) -> "Report":
        return Report([{**r, "wall_time": None} for r in self.rows])


def _run_cell(cfg: ExperimentConfig, k: int, alpha: Optional[float], seed: int, file_graph: Optional[Graph]):
    start = time.perf_counter()
    g = file_graph if file_graph is not None else build_instance(cfg, k, alpha, seed)
    res = run_simultaneous(g, k, cfg.scheme, {"alpha": alpha}, seed, oracle=cfg.oracle)
    if not res.valid:
        raise AssertionError(f"invalid solution for k={k}, alpha={alpha}, seed={seed}")
    return {
        "generator": cfg.generator,
        "n": g.side_size,
        "k": k,
        "alpha": alpha,
        "seed": seed,
        "scheme": cfg.scheme,
        "solution_size": res.size,
        "optimum": res.optimum,
        "ratio": res.ratio,
        "total_bits": res.ledger.total,
        "max_machine_bits": res.ledger.max_machine,
        "valid": res.valid,
        "wall_time": time.perf_counter() - start,
    }


def run_experiment(cfg: ExperimentConfig) -> Report:
    """Run every ``(k, alpha, seed)`` cell; rows come back sorted."""
    cfg.validate()
    file_graph = None
    if cfg.generator == "file":
        file_graph = load_graph(cfg.input)
        if cfg.oracle and cfg.scheme.startswith("vc") and not file_graph.is_bipartite:
            if file_graph.num_vertices > BRUTE_FORCE_MAX_VERTICES:
                raise ConfigError("vertex cover oracle needs a bipartite graph or at most 24 vertices")
    cells = [(int(k), a, int(s)) for k in cfg.k for a in cfg.alpha for s in cfg.seeds]
    # the filter is process-wide, so set it once here rather than per worker thread
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RegimeWarning)
        if cfg.workers > 1:
            with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
                rows = list(pool.map(lambda c: _run_cell(cfg, *c, file_graph), cells))
        else:
            rows = [_run_cell(cfg, *c, file_graph) for c in cells]
    return Report(rows).sorted()


def _fmt(value: Any, column: str) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.4f}" if column == "wall_time" else repr(value)
    return str(value)


def format_report(r: Report, fmt: str = "csv") -> str:
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(REPORT_COLUMNS)
        for row in r.rows:
            writer.writerow([_fmt(row[c], c) for c in REPORT_COLUMNS])
        return buf.getvalue()
    if fmt == "json":
        objs = [{c: row[c] for c in REPORT_COLUMNS} for row in r.rows]
        for o in objs:
            if o["wall_time"] is not None:
                o["wall_time"] = round(o["wall_time"], 4)
        return json.dumps(objs, indent=1) + "\n"
    raise ValueError(f"unknown report format {fmt!r}")


def emit_report(r: Report, fmt: str, path) -> None:
    text = format_report(r, fmt)
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"cannot write report to {os.fspath(path)!r}: {exc}") from exc
