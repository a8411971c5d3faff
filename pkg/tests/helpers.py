"""Shared builders and independent oracles for the test suite."""

from __future__ import annotations

import math

import numpy as np
from scipy import integrate, stats

from commutesim.config import (
    InterventionSpec,
    NeighbourhoodSpec,
    ScenarioConfig,
    Subculture,
    WeatherSpec,
)
from commutesim.core import CommuteCategory, ModeVector, TransportMode, Weather
from commutesim.engine import AgentTable, Networks
from commutesim.netgen import Graph

GRID = (0.0, 0.25, 0.5, 0.75, 1.0)


def _pick(rng, values, size=None):
    return rng.choice(np.asarray(values), size=size)


def random_engine_case(seed: int):
    """A tiny randomised configuration for the kernel-vs-reference comparison.

    Values are drawn from a coarse grid half the time so that exact score and
    cost ties (and journeys equal to capacity) actually occur.
    """
    rng = np.random.default_rng(seed)
    coarse = bool(rng.random() < 0.5)

    def unit(size=None):
        return _pick(rng, GRID, size) if coarse else rng.random(size)

    n = int(rng.integers(1, 6))
    days = int(rng.integers(2, 11))
    n_nb = int(rng.integers(1, 4))
    n_sub = int(rng.integers(1, 4))
    subcultures = tuple(Subculture(f"S{s}", ModeVector.from_iterable(unit(4))) for s in range(n_sub))
    units = "share" if rng.random() < 0.5 else "journeys"
    neighbourhoods = []
    for k in range(n_nb):
        cap = _pick(rng, (0.0, 0.2, 0.5, 1.0), 4) if units == "share" else rng.integers(0, 4, 4).astype(float)
        neighbourhoods.append(NeighbourhoodSpec(f"N{k}", ModeVector.from_iterable(unit(4)), ModeVector.from_iterable(cap)))
    wet_mod = ModeVector.from_iterable(1.0 + _pick(rng, (0.0, 0.1, 0.5, 1.0), 4))
    weather_spec = WeatherSpec(modifier={Weather.WET: wet_mod, Weather.DRY: ModeVector.full(1.0)})
    distance_cost = {c: ModeVector.from_iterable(unit(4)) for c in CommuteCategory}
    tie_break = tuple(TransportMode(int(m)) for m in rng.permutation(4))
    start = int(rng.integers(0, days))
    ban_mode = TransportMode.CAR if rng.random() < 0.7 else TransportMode.CYCLE
    intervention = InterventionSpec("car_free_days", ban_mode, int(rng.integers(0, 7)), start)
    cfg = ScenarioConfig(
        agent_count=n,
        neighbourhood_count=n_nb,
        total_days=days,
        intervention_day=start,
        burn_in_days=0,
        subcultures=subcultures,
        weather=weather_spec,
        distance_cost=distance_cost,
        neighbourhoods=tuple(neighbourhoods),
        capacity_units=units,
        intervention=intervention,
        cost_mode="literal" if rng.random() < 0.25 else "interpolated",
        tie_break=tie_break,
    )
    scenario = "cfd" if rng.random() < 0.6 else "control"

    bike = rng.random(n) < 0.6
    car = rng.random(n) < 0.6
    initial = np.array(
        [int(_pick(rng, [m for m in range(4) if (m != 1 or bike[i]) and (m != 3 or car[i])])) for i in range(n)],
        dtype=np.int8,
    )
    traits = unit((6, n)).astype(float)
    agents = AgentTable(
        subculture=rng.integers(0, n_sub, n).astype(np.int32),
        neighbourhood=rng.integers(0, n_nb, n).astype(np.int32),
        category=rng.integers(0, 3, n).astype(np.int8),
        weather_sensitivity=traits[0].copy(),
        consistency=traits[1].copy(),
        social_connectivity=traits[2].copy(),
        subculture_connectivity=traits[3].copy(),
        neighbourhood_connectivity=traits[4].copy(),
        habit_decay=traits[5].copy(),
        bicycle_owner=bike,
        car_owner=car,
        initial_mode=initial,
    )

    def random_edges():
        pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
        return [p for p in pairs if rng.random() < 0.5]

    g_edges = random_edges()
    nb_edges = [(i, j) for i, j in random_edges() if agents.neighbourhood[i] == agents.neighbourhood[j]]
    networks = Networks(
        Graph.from_edges(n, np.array(g_edges, dtype=np.int64).reshape(-1, 2)),
        Graph.from_edges(n, np.array(nb_edges, dtype=np.int64).reshape(-1, 2)),
    )
    weather = rng.integers(0, 2, days).astype(np.int8)

    ref = dict(
        n_days=days,
        weather=[int(w) for w in weather],
        initial_mode=[int(m) for m in initial],
        neighbourhood=[int(k) for k in agents.neighbourhood],
        subculture=[int(s) for s in agents.subculture],
        category=[int(c) for c in agents.category],
        bike=[bool(b) for b in bike],
        car=[bool(c) for c in car],
        traits=[tuple(float(traits[t, i]) for t in range(6)) for i in range(n)],
        global_edges=g_edges,
        neighbour_edges=nb_edges,
        desirability=[[float(x) for x in s.desirability.as_array()] for s in subcultures],
        supportiveness=[[float(x) for x in nb.supportiveness.as_array()] for nb in neighbourhoods],
        capacity=[[float(x) for x in nb.capacity.as_array()] for nb in neighbourhoods],
        capacity_units=units,
        distance_cost=[[float(x) for x in distance_cost[c].as_array()] for c in CommuteCategory],
        weather_modifier=[[float(x) for x in weather_spec.modifier[w].as_array()] for w in Weather],
        tie_break=[int(m) for m in tie_break],
        literal=cfg.cost_mode == "literal",
        ban_start=start if scenario == "cfd" else None,
        ban_weekday=intervention.weekday,
        ban_mode=int(ban_mode),
    )
    return cfg, agents, networks, weather, scenario, ref


# ---------------------------------------------------------------------------
# oracles


def truncated_mean(dist, upper: float) -> float:
    """Mean of a continuous scipy distribution restricted to (0, upper], by quadrature."""
    num = integrate.quad(lambda x: x * dist.pdf(x), 0, upper, limit=200)[0]
    return num / (dist.cdf(upper) - dist.cdf(0))


def lognormal(mu: float, sigma: float):
    return stats.lognorm(sigma, scale=math.exp(mu))


def hpdi_bruteforce(samples, mass: float):
    """Try every window of ceil(mass*N) sorted samples; keep the first narrowest."""
    x = sorted(float(v) for v in np.ravel(samples))
    n = len(x)
    k = math.ceil(round(mass * n, 9))
    best = None
    for start in range(n - k + 1):
        width = x[start + k - 1] - x[start]
        if best is None or width < best[0]:
            best = (width, x[start], x[start + k - 1])
    return best[1], best[2]


def stationary_by_linear_solve(p) -> np.ndarray:
    """Solve pi (P - I) = 0 with sum(pi) = 1 as a least-squares system."""
    p = np.asarray(p, float)
    a = np.vstack([(p - np.eye(2)).T, np.ones(2)])
    b = np.array([0.0, 0.0, 1.0])
    return np.linalg.lstsq(a, b, rcond=None)[0]


def ring_lattice_clustering(k: int) -> float:
    return 3 * (k - 2) / (4 * (k - 1))


def ipf_by_hand_2d(seed, rows, cols, sweeps: int = 500):
    """Two-dimensional IPF written out directly, for cross-checking."""
    w = np.array(seed, float)
    for _ in range(sweeps):
        w *= (np.asarray(rows, float) / w.sum(axis=1))[:, None]
        w *= (np.asarray(cols, float) / w.sum(axis=0))[None, :]
    return w
