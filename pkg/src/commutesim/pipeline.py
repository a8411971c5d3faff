"""Wiring of the stages onto named random streams.

Stream labels: ``population`` and ``agents`` (index 0, shared by all runs),
``weather`` (index 0, shared by all runs and scenarios), ``net`` and
``net_neighbour`` (index = replicate).
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .config import ScenarioConfig
from .engine import SCENARIOS, AgentTable, DailyTrace, Networks, make_agents, run_scenario
from .netgen import barabasi_albert, build_neighbour_networks, union_graph, watts_strogatz
from .popgen import Population, synthesize_population
from .rng import derive_rng_stream
from .weather import generate_sequence

__all__ = [
    "build_population",
    "build_agents",
    "build_weather",
    "build_networks",
    "run_replicate",
]


def build_population(cfg: ScenarioConfig) -> Population:
    return synthesize_population(cfg, derive_rng_stream(cfg.master_seed, "population", 0))


def build_agents(population: Population, cfg: ScenarioConfig) -> AgentTable:
    return make_agents(population, cfg, derive_rng_stream(cfg.master_seed, "agents", 0))


def build_weather(cfg: ScenarioConfig, transition=None) -> np.ndarray:
    matrix = cfg.weather.transition if transition is None else transition
    rng = derive_rng_stream(cfg.master_seed, "weather", 0)
    return generate_sequence(matrix, cfg.weather.initial, cfg.total_days, rng)


def build_networks(agents: AgentTable, cfg: ScenarioConfig, replicate: int) -> Networks:
    """Global small-world graph plus neighbour graph for one replicate.

    With ``network.regenerate == "global"`` the neighbour graph is drawn
    once (stream index 0) and reused by every replicate.
    """
    n = len(agents)
    net = cfg.network
    global_graph = watts_strogatz(n, net.k, net.beta, derive_rng_stream(cfg.master_seed, "net", replicate))
    nb_index = replicate if net.regenerate == "both" else 0
    rng = derive_rng_stream(cfg.master_seed, "net_neighbour", nb_index)
    if net.neighbour_scope == "borough":
        if n < net.m0:
            groups = [np.arange(n)]
            neighbour = union_graph(build_neighbour_networks(groups, net.m0, net.m, rng), n)
        else:
            neighbour = barabasi_albert(n, net.m0, net.m, rng)
    else:
        groups = [g for g in agents.groups(cfg.neighbourhood_count) if g.size]
        neighbour = union_graph(build_neighbour_networks(groups, net.m0, net.m, rng), n)
    return Networks(global_graph, neighbour)


def run_replicate(
    cfg: ScenarioConfig,
    agents: AgentTable,
    weather: np.ndarray,
    replicate: int,
    scenarios: Sequence[str] = SCENARIOS,
    threads: int | None = None,
) -> dict[str, list[DailyTrace]]:
    """Both scenarios on the same networks and weather."""
    networks = build_networks(agents, cfg, replicate)
    return {s: run_scenario(cfg, agents, networks, weather, s, replicate, threads) for s in scenarios}
