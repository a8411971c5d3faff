"""Command-line front end.

Subcommands ``synth``, ``net``, ``simulate``, ``analyze`` and ``report``
share the global flags ``--config``, ``--seed``, ``--threads`` and
``--out-dir``. Exit codes: 0 success, 2 IO or parse error, 3 validation
error, 4 runtime error.
"""

from __future__ import annotations

import argparse
import concurrent.futures as cf
import glob
import hashlib
import json
import multiprocessing
import os
import sys
import tempfile
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .config import ConfigError, ScenarioConfig, config_hash, default_config, load_config, validate_config
from .engine import SCENARIOS, DailyTrace, read_traces, traces_to_csv
from .netgen import graph_stats, write_edge_list
from .pipeline import build_agents, build_networks, build_population, build_weather, run_replicate
from .popgen import Population
from .stats import BinomialOddsModel, ConvergenceError, SeparationError, aggregate_traces
from .weather import MarkovWeather, read_rainfall

EXIT_OK = 0
EXIT_IO = 2
EXIT_VALIDATION = 3
EXIT_RUNTIME = 4

MANIFEST_NAME = "manifest.json"


class CLIError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


# ---------------------------------------------------------------------------
# helpers


def atomic_write_text(path: Path, text: str) -> None:
    """Write via a temporary file in the same directory, then rename."""
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent)
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def sha256_file(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def _load_cfg(args) -> ScenarioConfig:
    if args.config is None:
        cfg = default_config()
    else:
        try:
            cfg = load_config(args.config)
        except FileNotFoundError:
            raise CLIError(EXIT_IO, f"config file not found: {args.config}") from None
        except OSError as exc:
            raise CLIError(EXIT_IO, f"cannot read config {args.config}: {exc}") from None
        except ConfigError as exc:
            raise CLIError(EXIT_IO, f"cannot parse config {args.config}: {exc}") from None
    if args.seed is not None:
        cfg = cfg.with_overrides(master_seed=args.seed)
    report = validate_config(cfg)
    if not report:
        raise CLIError(EXIT_VALIDATION, "invalid config:\n  " + "\n  ".join(report.violations))
    return cfg


def _load_population(path: Path) -> Population:
    if not path.exists():
        raise CLIError(EXIT_IO, f"population file not found: {path} (run 'synth' first)")
    try:
        return Population.from_csv(path)
    except (ValueError, KeyError, IndexError) as exc:
        raise CLIError(EXIT_IO, f"cannot parse population {path}: {exc}") from None


def _check_population(pop: Population, cfg: ScenarioConfig) -> None:
    if len(pop) != cfg.agent_count:
        raise CLIError(
            EXIT_VALIDATION, f"population has {len(pop)} agents but config agent_count is {cfg.agent_count}"
        )


def _weather(cfg: ScenarioConfig, rainfall: str | None) -> np.ndarray:
    if rainfall is None:
        return build_weather(cfg)
    try:
        rain = read_rainfall(rainfall)
    except OSError as exc:
        raise CLIError(EXIT_IO, f"cannot read rainfall {rainfall}: {exc}") from None
    model = MarkovWeather(cfg.weather.threshold_mm).fit(rain)
    return build_weather(cfg, model.transition_matrix_)


def _parse_range(text: str) -> list[int]:
    """``"3"`` -> [3]; ``"0:5"`` -> [0..4]; ``"0,2,7"`` -> [0, 2, 7]."""
    try:
        if ":" in text:
            lo, hi = text.split(":")
            out = list(range(int(lo), int(hi)))
        else:
            out = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise CLIError(EXIT_IO, f"bad replicate range {text!r}") from None
    if not out or min(out) < 0:
        raise CLIError(EXIT_VALIDATION, f"replicate range {text!r} is empty or negative")
    return out


def _expand_traces(patterns: list[str]) -> list[Path]:
    paths: list[Path] = []
    for p in patterns:
        hits = sorted(glob.glob(p))
        if not hits:
            raise CLIError(EXIT_IO, f"no trace files match {p}")
        paths.extend(Path(h) for h in hits)
    return paths


def _read_all(paths: list[Path]) -> dict[Path, list[DailyTrace]]:
    out = {}
    for p in paths:
        try:
            out[p] = read_traces(p)
        except (OSError, ValueError) as exc:
            raise CLIError(EXIT_IO, f"cannot read traces {p}: {exc}") from None
    return out


# ---------------------------------------------------------------------------
# manifest


@dataclass
class RunManifest:
    config_hash: str
    master_seed: int
    population_hash: str
    scenarios: list[str]
    replicates: list[int]
    runs: dict[str, dict]

    def to_json(self) -> str:
        return json.dumps(self.__dict__, indent=2, sort_keys=True) + "\n"

    @classmethod
    def load(cls, path: Path) -> "RunManifest":
        try:
            return cls(**json.loads(path.read_text()))
        except (OSError, ValueError, TypeError) as exc:
            raise CLIError(EXIT_IO, f"cannot parse manifest {path}: {exc}") from None

    def inputs_match(self, other: "RunManifest") -> bool:
        return (self.config_hash, self.master_seed, self.population_hash) == (
            other.config_hash,
            other.master_seed,
            other.population_hash,
        )


def trace_name(replicate: int, scenario: str) -> str:
    return f"run{replicate}_{scenario}.csv"


# ---------------------------------------------------------------------------
# workers


def _simulate_task(cfg_json: str, pop_path: str, rainfall: str | None, replicate: int, scenarios, threads: int):
    from .config import loads_config

    cfg = loads_config(cfg_json)
    agents = build_agents(Population.from_csv(pop_path), cfg)
    weather = _weather(cfg, rainfall)
    runs = run_replicate(cfg, agents, weather, replicate, scenarios, threads)
    return replicate, {s: traces_to_csv(t) for s, t in runs.items()}


# ---------------------------------------------------------------------------
# commands


def cmd_synth(args) -> int:
    cfg = _load_cfg(args)
    out = Path(args.output) if args.output else Path(args.out_dir) / "population.csv"
    pop = build_population(cfg)
    out.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=f".{out.name}.", dir=out.parent)
    os.close(fd)
    pop.to_csv(tmp)
    os.replace(tmp, out)
    summary = pop.summary()
    atomic_write_text(out.with_suffix(".summary.json"), json.dumps(summary, indent=2) + "\n")
    print(json.dumps(summary, indent=2))
    return EXIT_OK


def cmd_net(args) -> int:
    cfg = _load_cfg(args)
    pop = _load_population(Path(args.population) if args.population else Path(args.out_dir) / "population.csv")
    _check_population(pop, cfg)
    agents = build_agents(pop, cfg)
    out_dir = Path(args.out_dir) / "networks"
    report = {}
    for r in _parse_range(args.replicates):
        nets = build_networks(agents, cfg, r)
        for kind, g in (("global", nets.global_graph), ("neighbour", nets.neighbour_graph)):
            path = out_dir / f"run{r}_{kind}.edges"
            tmp = path.with_name(f".{path.name}.tmp")
            out_dir.mkdir(parents=True, exist_ok=True)
            write_edge_list(g, tmp, {"replicate": r, "seed": cfg.master_seed})
            os.replace(tmp, path)
            st = graph_stats(g, seed=cfg.master_seed)
            report[f"run{r}_{kind}"] = {
                "edges": g.n_edges,
                "mean_degree": float(g.degree().mean()) if g.n else 0.0,
                "mean_clustering": st["mean_clustering"],
                "mean_path_length": st["mean_path_length"],
            }
    print(json.dumps(report, indent=2))
    return EXIT_OK


def cmd_simulate(args) -> int:
    cfg = _load_cfg(args)
    pop_path = Path(args.population) if args.population else Path(args.out_dir) / "population.csv"
    pop = _load_population(pop_path)
    _check_population(pop, cfg)
    scenarios = [s.strip() for s in args.scenarios.split(",") if s.strip()]
    bad = [s for s in scenarios if s not in SCENARIOS]
    if bad or not scenarios:
        raise CLIError(EXIT_VALIDATION, f"unknown scenario(s) {bad}; choose from {', '.join(SCENARIOS)}")
    replicates = _parse_range(args.replicates)
    out_dir = Path(args.out_dir)
    trace_dir = out_dir / "traces"
    manifest_path = out_dir / MANIFEST_NAME
    fresh = RunManifest(config_hash(cfg), cfg.master_seed, sha256_file(pop_path), scenarios, [], {})
    manifest = fresh
    if manifest_path.exists():
        old = RunManifest.load(manifest_path)
        if old.inputs_match(fresh):
            manifest = old
            manifest.scenarios = sorted(set(old.scenarios) | set(scenarios), key=SCENARIOS.index)
        elif not args.force:
            raise CLIError(
                EXIT_VALIDATION,
                f"{manifest_path} was written for different inputs (config, seed or population); "
                "use a fresh --out-dir or --force",
            )

    todo = []
    for r in replicates:
        pending = []
        for s in scenarios:
            key = trace_name(r, s)
            path = trace_dir / key
            entry = manifest.runs.get(key)
            done = entry is not None and entry.get("status") == "complete" and path.exists()
            if done and args.resume:
                continue
            if (done or path.exists()) and not args.force:
                raise CLIError(
                    EXIT_VALIDATION, f"{path} already exists; pass --resume to skip finished runs or --force to redo them"
                )
            pending.append(s)
        if pending:
            todo.append((r, pending))
        manifest.replicates = sorted(set(manifest.replicates) | {r})
    for r, pending in todo:
        for s in pending:
            manifest.runs[trace_name(r, s)] = {"status": "pending"}
    atomic_write_text(manifest_path, manifest.to_json())

    threads = max(1, args.threads)
    workers = max(1, min(threads, len(todo)))
    per_worker = max(1, threads // workers)
    cfg_json = json.dumps(cfg.to_dict())
    rain = args.rainfall

    def record(r: int, files: dict[str, str]) -> None:
        for s, text in files.items():
            path = trace_dir / trace_name(r, s)
            atomic_write_text(path, text)
            manifest.runs[trace_name(r, s)] = {"status": "complete", "sha256": hashlib.sha256(text.encode()).hexdigest()}
        atomic_write_text(manifest_path, manifest.to_json())
        print(f"replicate {r}: {', '.join(files)} done", file=sys.stderr)

    if workers == 1:
        for r, pending in todo:
            record(*_simulate_task(cfg_json, str(pop_path), rain, r, pending, per_worker))
    else:
        ctx = multiprocessing.get_context("spawn")
        with cf.ProcessPoolExecutor(max_workers=workers, mp_context=ctx) as pool:
            futures = [pool.submit(_simulate_task, cfg_json, str(pop_path), rain, r, p, per_worker) for r, p in todo]
            for fut in cf.as_completed(futures):
                record(*fut.result())
    return EXIT_OK


def cmd_analyze(args) -> int:
    cfg = _load_cfg(args)
    traces = _read_all(_expand_traces(args.traces))
    start = cfg.intervention_day + cfg.burn_in_days
    end = cfg.total_days
    for path, rows in traces.items():
        last = max((t.day for t in rows), default=-1)
        if last < start:
            raise CLIError(
                EXIT_VALIDATION,
                f"{path} ends at day {last}; analysis needs days {start}..{end - 1} "
                f"(intervention day {cfg.intervention_day} + {cfg.burn_in_days} burn-in days)",
            )
    scenarios = {t.scenario for rows in traces.values() for t in rows}
    if scenarios != set(SCENARIOS):
        raise CLIError(EXIT_VALIDATION, f"both scenarios required (control and cfd); found {sorted(scenarios)}")
    counts = aggregate_traces((t for rows in traces.values() for t in rows), start, end, cfg.intervention.weekday)
    model = BinomialOddsModel(
        model=args.model,
        random_state=cfg.master_seed,
        per_replicate=args.per_replicate,
        draws=args.draws,
        warmup=args.warmup,
    )
    try:
        model.fit(counts)
        rows = model.summary_rows(allow_unconverged=args.allow_unconverged)
    except ValueError as exc:
        raise CLIError(EXIT_VALIDATION, str(exc)) from None
    lines = ["parameter,mean,hpdi_low,hpdi_high,rhat"]
    lines += [f"{n},{float(m)!r},{float(lo)!r},{float(hi)!r},{float(r)!r}" for n, m, lo, hi, r in rows]
    text = "\n".join(lines) + "\n"
    out = Path(args.output) if args.output else Path(args.out_dir) / f"summary_model{args.model}.csv"
    atomic_write_text(out, text)
    sys.stdout.write(text)
    if not model.converged_:
        print(f"warning: max R-hat {model.max_rhat_:.4f} >= {model.rhat_threshold}", file=sys.stderr)
    return EXIT_OK


def moving_average(values, window: int) -> np.ndarray:
    """Trailing mean over ``window`` consecutive values; length ``len(values) - window + 1``."""
    x = np.asarray(values, dtype=float)
    if window < 1:
        raise ValueError("window must be positive")
    if x.size < window:
        return np.zeros(0)
    c = np.concatenate([[0.0], np.cumsum(x)])
    return (c[window:] - c[:-window]) / window


def cmd_report(args) -> int:
    cfg = _load_cfg(args)
    window = args.window or cfg.moving_average_window
    traces = _read_all(_expand_traces(args.traces))
    lines = [
        f"# intervention_day={cfg.intervention_day}",
        f"# window={window}",
    ]
    if args.summary:
        try:
            for row in Path(args.summary).read_text().splitlines()[1:]:
                if row.strip():
                    lines.append(f"# summary={row}")
        except OSError as exc:
            raise CLIError(EXIT_IO, f"cannot read summary {args.summary}: {exc}") from None
    lines.append("run_id,scenario,day,active_share_ma")
    runs: dict[tuple[int, str], list[DailyTrace]] = {}
    for rows in traces.values():
        for t in rows:
            runs.setdefault((t.run_id, t.scenario), []).append(t)
    for (run_id, scenario), rows in sorted(runs.items(), key=lambda kv: (kv[0][0], SCENARIOS.index(kv[0][1]))):
        rows.sort(key=lambda t: t.day)
        share = [t.active / t.total for t in rows]
        ma = moving_average(share, window)
        for i, v in enumerate(ma):
            lines.append(f"{run_id},{scenario},{rows[i + window - 1].day},{float(v)!r}")
    text = "\n".join(lines) + "\n"
    out = Path(args.output) if args.output else Path(args.out_dir) / "report_moving_average.csv"
    atomic_write_text(out, text)
    print(f"wrote {out}", file=sys.stderr)
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", default=argparse.SUPPRESS, help="JSON scenario config (defaults built in)")
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="override master_seed")
    common.add_argument("--threads", type=int, default=argparse.SUPPRESS, help="worker threads (default 1)")
    common.add_argument("--out-dir", default=argparse.SUPPRESS, help="output directory (default .)")

    parser = argparse.ArgumentParser(prog="commutesim", description=__doc__.split("\n")[0], parents=[common])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", parents=[common], help="synthesise the agent population")
    p.add_argument("--output", help="population CSV (default OUT_DIR/population.csv)")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("net", parents=[common], help="write social networks for replicates")
    p.add_argument("--population")
    p.add_argument("--replicates", default="0", help="e.g. 3, 0:5 or 0,2,7")
    p.set_defaults(func=cmd_net)

    p = sub.add_parser("simulate", parents=[common], help="run replicates x scenarios")
    p.add_argument("--population")
    p.add_argument("--replicates", default="0", help="e.g. 3, 0:5 or 0,2,7")
    p.add_argument("--scenarios", default=",".join(SCENARIOS))
    p.add_argument("--rainfall", help="daily rainfall CSV to fit the weather chain")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--resume", action="store_true", help="skip runs the manifest marks complete")
    g.add_argument("--force", action="store_true", help="regenerate runs whose files exist")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("analyze", parents=[common], help="fit the binomial model to traces")
    p.add_argument("traces", nargs="+", help="trace files or glob patterns")
    p.add_argument("--model", type=int, choices=(1, 2), default=2)
    p.add_argument("--per-replicate", action="store_true")
    p.add_argument("--warmup", type=int, default=1000)
    p.add_argument("--draws", type=int, default=1000)
    p.add_argument("--allow-unconverged", action="store_true")
    p.add_argument("--output")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("report", parents=[common], help="moving-average active share series")
    p.add_argument("traces", nargs="+")
    p.add_argument("--summary")
    p.add_argument("--window", type=int)
    p.add_argument("--output")
    p.set_defaults(func=cmd_report)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_IO
    for name, default in (("config", None), ("seed", None), ("threads", 1), ("out_dir", ".")):
        if not hasattr(args, name):
            setattr(args, name, default)
    try:
        return args.func(args)
    except CLIError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except ConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    except (SeparationError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
