"""Command-line entry point: ``gscrank {stats,rank,sir,sweep,reproduce}``.

Exit codes: 0 success, 2 usage, 3 data, 4 numeric.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .baselines import ConvergenceError
from .datasets import DatasetError, default_beta, load_dataset
from .evaluate import ALL_METHODS, accuracy_sweep, parse_grid, rank_method, sweep_csv
from .graph import (FORMATS, DisconnectedGraphError, GraphFormatError, apsp, largest_component,
                    load_edge_list, network_stats)
from .gsc import DEFAULT_VARIANT, VARIANTS
from .reference_values import DATASETS
from .ranking import fmt_sig
from .reproduce import OutputExistsError, ReproduceConfig, reproduce
from .sir import SirParams, spreading_capability

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_NUMERIC = 0, 2, 3, 4

log = logging.getLogger("gscrank")


class UsageError(Exception):
    pass


DEFAULTS = {
    "dataset": None,
    "input": None,
    "format": "edge-list",
    "method": "gsc",
    "beta": None,
    "gamma": 1.0,
    "runs": 1000,
    "seed": 0,
    "k": 10,
    "beta_grid": None,
    "largest_component": False,
    "out": None,
    "force": False,
    "workers": 1,
    "gsc_variant": DEFAULT_VARIANT,
}
_BOOL_KEYS = {"largest_component", "force"}
_INT_KEYS = {"runs", "seed", "k", "workers"}
_FLOAT_KEYS = {"beta", "gamma"}


def read_config(path: str) -> dict:
    """Flat ``key = value`` file; keys use flag names with or without dashes."""
    out = {}
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc.strerror}") from None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.lstrip("-").replace("-", "_")
        if key not in DEFAULTS:
            raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
        try:
            if key in _BOOL_KEYS:
                if value.lower() not in ("true", "false", "1", "0", "yes", "no"):
                    raise ValueError(value)
                out[key] = value.lower() in ("true", "1", "yes")
            elif key in _INT_KEYS:
                out[key] = int(value)
            elif key in _FLOAT_KEYS:
                out[key] = float(value)
            else:
                out[key] = value
        except ValueError:
            raise UsageError(f"{path}:{lineno}: bad value for {key}: {value!r}") from None
    return out


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--dataset", help="bundled dataset name(s), comma separated")
    common.add_argument("--input", help="edge-list or GML file")
    common.add_argument("--format", choices=FORMATS)
    common.add_argument("--method", help=f"comma-separated tags from: {','.join(ALL_METHODS)}")
    common.add_argument("--beta", type=float, help="infection probability per edge and step")
    common.add_argument("--gamma", type=float, help="recovery probability per step")
    common.add_argument("--runs", type=int, help="SIR runs per seed node")
    common.add_argument("--seed", type=int)
    common.add_argument("--k", type=int, help="top-k size")
    common.add_argument("--beta-grid", help="start:stop:step")
    common.add_argument("--largest-component", action="store_const", const=True)
    common.add_argument("--out", help="output directory")
    common.add_argument("--force", action="store_const", const=True,
                        help="overwrite existing outputs")
    common.add_argument("--config", help="key=value file mirroring these flags")
    common.add_argument("--workers", type=int, help="threads for parallel stages")
    common.add_argument("--gsc-variant", choices=VARIANTS,
                        help="distance correlation used by gsc")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="gscrank", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("stats", parents=[common], help="network statistics")
    sub.add_parser("rank", parents=[common], help="rank nodes by one or more methods")
    sub.add_parser("sir", parents=[common], help="SIR spreading capability of every node")
    sub.add_parser("sweep", parents=[common], help="Kendall tau over an infection-rate grid")
    sub.add_parser("reproduce", parents=[common], help="regenerate all tables and figures")
    return parser


def resolve(ns: argparse.Namespace) -> dict:
    cfg = dict(DEFAULTS)
    if ns.config:
        cfg.update(read_config(ns.config))
    for key in DEFAULTS:
        val = getattr(ns, key, None)
        if val is not None:
            cfg[key] = val
    if cfg["runs"] < 1:
        raise UsageError("--runs must be positive")
    if cfg["workers"] < 1:
        raise UsageError("--workers must be positive")
    if cfg["k"] < 1:
        raise UsageError("--k must be positive")
    if cfg["seed"] < 0:
        raise UsageError("--seed must be non-negative")
    if cfg["beta"] is not None and not 0.0 <= cfg["beta"] <= 1.0:
        raise UsageError(f"--beta must lie in [0, 1], got {cfg['beta']}")
    if not 0.0 < cfg["gamma"] <= 1.0:
        raise UsageError(f"--gamma must lie in (0, 1], got {cfg['gamma']}")
    if cfg["format"] not in FORMATS:
        raise UsageError(f"--format must be one of {', '.join(FORMATS)}")
    if cfg["gsc_variant"] not in VARIANTS:
        raise UsageError(f"--gsc-variant must be one of {', '.join(VARIANTS)}")
    methods = [m.strip() for m in str(cfg["method"]).split(",") if m.strip()]
    bad = [m for m in methods if m not in ALL_METHODS]
    if bad or not methods:
        raise UsageError(f"unknown method {','.join(bad)!r}; valid: {', '.join(ALL_METHODS)}")
    cfg["methods"] = methods
    return cfg


def load_graphs(cfg: dict) -> list[tuple[str, object]]:
    if cfg["input"] and cfg["dataset"]:
        raise UsageError("give either --dataset or --input, not both")
    if cfg["input"]:
        path = Path(cfg["input"])
        try:
            g = load_edge_list(str(path), cfg["format"])
        except OSError as exc:
            raise DatasetError(f"cannot read {path}: {exc.strerror}") from None
        graphs = [(path.stem, g)]
    elif cfg["dataset"]:
        graphs = [(n.strip().lower(), load_dataset(n.strip()))
                  for n in cfg["dataset"].split(",") if n.strip()]
    else:
        raise UsageError("one of --dataset or --input is required")
    if cfg["largest_component"]:
        graphs = [(name, largest_component(g)) for name, g in graphs]
    return graphs


class Sink:
    """Writes named outputs to ``--out`` or, without it, to stdout."""

    def __init__(self, out: str | None, force: bool):
        self.dir = Path(out) if out else None
        self.force = force
        self.pending: list[tuple[str, str]] = []

    def add(self, name: str, text: str) -> None:
        self.pending.append((name, text))

    def flush(self, stdout_names: tuple[str, ...] = (".csv",)) -> None:
        if self.dir is None:
            shown = [(n, t) for n, t in self.pending if n.endswith(stdout_names)]
            for idx, (name, text) in enumerate(shown):
                if len(shown) > 1:
                    sys.stdout.write(("\n" if idx else "") + f"# {name}\n")
                sys.stdout.write(text)
            return
        targets = [self.dir / n for n, _ in self.pending]
        clash = [str(p) for p in targets if p.exists()]
        if clash and not self.force:
            raise OutputExistsError(f"{clash[0]} exists; pass --force to overwrite")
        self.dir.mkdir(parents=True, exist_ok=True)
        for path, (_, text) in zip(targets, self.pending):
            path.write_text(text)


def cmd_stats(cfg: dict) -> None:
    sink = Sink(cfg["out"], cfg["force"])
    rows = []
    for name, g in load_graphs(cfg):
        st = network_stats(g, apsp(g, workers=cfg["workers"]))
        rows.append({"dataset": name, **st.as_row()})
    header = ["dataset", "n", "m", "avg_degree", "max_degree", "beta_th", "assortativity"]
    lines = [",".join(header)]
    for r in rows:
        lines.append(",".join(fmt_sig(r[h]) if isinstance(r[h], float) else str(r[h])
                              for h in header))
    sink.add("stats.csv", "\n".join(lines) + "\n")
    sink.add("stats.json", json.dumps(rows, indent=2, sort_keys=True) + "\n")
    sink.flush()


def cmd_rank(cfg: dict) -> None:
    sink = Sink(cfg["out"], cfg["force"])
    for name, g in load_graphs(cfg):
        dm = apsp(g, workers=cfg["workers"])
        for m in cfg["methods"]:
            r = rank_method(m, g, dm, cfg["gsc_variant"])
            sink.add(f"{name}_{m}.csv", r.to_csv())
            sink.add(f"{name}_{m}.json", r.to_json())
    sink.flush()


def _beta_for(cfg: dict, name: str) -> float:
    beta = cfg["beta"] if cfg["beta"] is not None else default_beta(name)
    if beta is None:
        raise UsageError(f"--beta is required for {name!r} (no published default)")
    return beta


def cmd_sir(cfg: dict) -> None:
    sink = Sink(cfg["out"], cfg["force"])
    for name, g in load_graphs(cfg):
        params = SirParams(_beta_for(cfg, name), cfg["gamma"], cfg["runs"], cfg["seed"])
        apsp(g)  # rejects disconnected input
        rep = spreading_capability(g, params, workers=cfg["workers"])
        sink.add(f"{name}_sir.csv", rep.to_csv())
        sink.add(f"{name}_sir.json", rep.to_json())
    sink.flush()


def cmd_sweep(cfg: dict) -> None:
    sink = Sink(cfg["out"], cfg["force"])
    for name, g in load_graphs(cfg):
        if cfg["beta_grid"]:
            try:
                grid = parse_grid(cfg["beta_grid"])
            except ValueError as exc:
                raise UsageError(str(exc)) from None
        else:
            grid = [_beta_for(cfg, name)]
        if any(not 0.0 <= b <= 1.0 for b in grid):
            raise UsageError("beta grid values must lie in [0, 1]")
        params = SirParams(grid[0], cfg["gamma"], cfg["runs"], cfg["seed"])
        dm = apsp(g, workers=cfg["workers"])
        rows = accuracy_sweep(g, cfg["methods"], grid, params, dm, cfg["gsc_variant"],
                              workers=cfg["workers"])
        sink.add(f"{name}_sweep.csv", sweep_csv(rows))
    sink.flush()


def cmd_reproduce(cfg: dict) -> None:
    if not cfg["out"]:
        raise UsageError("reproduce needs --out DIR")
    names = DATASETS
    if cfg["dataset"]:
        names = tuple(n.strip().lower() for n in cfg["dataset"].split(",") if n.strip())
        unknown = [n for n in names if n not in DATASETS]
        if unknown:
            raise UsageError(f"reproduce covers {', '.join(DATASETS)}; got {', '.join(unknown)}")
    grid = None
    if cfg["beta_grid"]:
        try:
            grid = parse_grid(cfg["beta_grid"])
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    rc = ReproduceConfig(datasets=names, runs=cfg["runs"], seed=cfg["seed"],
                         gamma=cfg["gamma"], beta_grid=grid, k=cfg["k"],
                         gsc_variant=cfg["gsc_variant"], workers=cfg["workers"])
    res = reproduce(Path(cfg["out"]), rc, force=cfg["force"])
    print(f"wrote {len(res.files)} files to {cfg['out']}"
          + (f"; unavailable: {', '.join(res.missing)}" if res.missing else ""))


COMMANDS = {
    "stats": cmd_stats,
    "rank": cmd_rank,
    "sir": cmd_sir,
    "sweep": cmd_sweep,
    "reproduce": cmd_reproduce,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if ns.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        cfg = resolve(ns)
        COMMANDS[ns.command](cfg)
    except (UsageError, OutputExistsError) as exc:
        print(f"gscrank: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (GraphFormatError, DatasetError, DisconnectedGraphError) as exc:
        print(f"gscrank: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (ConvergenceError, FloatingPointError, ZeroDivisionError) as exc:
        print(f"gscrank: numeric error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
