"""Daily commute decision loop.

Each day every agent, reading only the previous day's state:

1. builds a *norm* per mode from the choices of its social and neighbour
   contacts and its subculture's desirability;
2. adds habit weighted by consistency, multiplies by the neighbourhood's
   congestion modifier and ranks the result (the travel budget, 4 = best);
3. averages a commute-distance cost with ``1 - supportiveness``, scales it
   by a weather factor and reverse-ranks it (the travel cost, 4 = cheapest);
4. takes the available mode with the highest budget + cost rank.

Choices are then committed together, habits and resolves are updated, and
congestion modifiers are recomputed for the next day.

There is no randomness inside the loop, and each agent's decision is
independent of every other decision on the same day, so results are
identical for any thread count.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numba
import numpy as np

from .config import InterventionSpec, ScenarioConfig
from .core import CommuteCategory, TransportMode, Weather
from .netgen import Graph
from .popgen import Population

__all__ = [
    "SCENARIOS",
    "Agent",
    "AgentTable",
    "Networks",
    "SimulationState",
    "DailyTrace",
    "make_agents",
    "scenario_intervention",
    "init_state",
    "compute_norm",
    "rank_scores",
    "compute_budget_ranks",
    "compute_cost_ranks",
    "choose_mode",
    "update_habit",
    "update_resolve",
    "compute_congestion_modifiers",
    "step_day",
    "initial_trace",
    "run_scenario",
    "set_threads",
    "TRACE_COLUMNS",
    "write_traces",
    "read_traces",
    "traces_to_csv",
]

SCENARIOS = ("control", "cfd")
TRACE_COLUMNS = ("run_id", "scenario", "day", "weekday", "weather", "n_walk", "n_cycle", "n_pt", "n_car")
RESOLVE_ACTIVE_WET = 0.9
RESOLVE_DRY = 1.0
RESOLVE_INACTIVE_WET = 1.1


# ---------------------------------------------------------------------------
# data


@dataclass(frozen=True)
class Agent:
    id: int
    subculture_id: int
    neighbourhood_id: int
    commute_category: CommuteCategory
    weather_sensitivity: float
    consistency: float
    social_connectivity: float
    subculture_connectivity: float
    neighbourhood_connectivity: float
    habit_decay: float
    resolve: float
    bicycle_owner: bool
    car_owner: bool
    habit: np.ndarray
    last_mode: TransportMode


@dataclass
class AgentTable:
    """Static per-agent attributes, one array entry per agent."""

    subculture: np.ndarray
    neighbourhood: np.ndarray
    category: np.ndarray
    weather_sensitivity: np.ndarray
    consistency: np.ndarray
    social_connectivity: np.ndarray
    subculture_connectivity: np.ndarray
    neighbourhood_connectivity: np.ndarray
    habit_decay: np.ndarray
    bicycle_owner: np.ndarray
    car_owner: np.ndarray
    initial_mode: np.ndarray

    def __len__(self) -> int:
        return int(self.subculture.size)

    def groups(self, n_neighbourhoods: int) -> list[np.ndarray]:
        return [np.flatnonzero(self.neighbourhood == g) for g in range(n_neighbourhoods)]


@dataclass(frozen=True)
class Networks:
    global_graph: Graph
    neighbour_graph: Graph


def make_agents(population: Population, cfg: ScenarioConfig, rng: np.random.Generator) -> AgentTable:
    """Assign neighbourhoods and subcultures uniformly and draw Uniform(0,1) traits."""
    n = len(population)
    neighbourhood = rng.integers(cfg.neighbourhood_count, size=n).astype(np.int32)
    subculture = rng.integers(len(cfg.subcultures), size=n).astype(np.int32)
    traits = rng.random((6, n))
    return AgentTable(
        subculture=subculture,
        neighbourhood=neighbourhood,
        category=np.asarray(population.commute_category, dtype=np.int8),
        weather_sensitivity=traits[0],
        consistency=traits[1],
        social_connectivity=traits[2],
        subculture_connectivity=traits[3],
        neighbourhood_connectivity=traits[4],
        habit_decay=traits[5],
        bicycle_owner=np.asarray(population.bicycle_owner, dtype=np.bool_),
        car_owner=np.asarray(population.car_owner, dtype=np.bool_),
        initial_mode=np.asarray(population.initial_mode, dtype=np.int8),
    )


@dataclass
class SimulationState:
    day: int
    agents: AgentTable
    networks: Networks
    weather: np.ndarray
    desirability: np.ndarray  # (n_subcultures, 4)
    supportiveness: np.ndarray  # (n_neighbourhoods, 4)
    capacity: np.ndarray  # (n_neighbourhoods, 4), journeys
    population: np.ndarray  # residents per neighbourhood
    distance_cost: np.ndarray  # (3, 4)
    weather_modifier: np.ndarray  # (2, 4)
    priority: np.ndarray  # priority[m] = position of m in the tie-break order
    literal_cost: bool
    habit: np.ndarray  # (n, 4)
    last_mode: np.ndarray  # (n,)
    resolve: np.ndarray  # (n,)
    journeys: np.ndarray  # (n_neighbourhoods, 4), previous day
    congestion: np.ndarray  # (n_neighbourhoods, 4)

    def agent(self, i: int) -> Agent:
        a = self.agents
        return Agent(
            id=i,
            subculture_id=int(a.subculture[i]),
            neighbourhood_id=int(a.neighbourhood[i]),
            commute_category=CommuteCategory(int(a.category[i])),
            weather_sensitivity=float(a.weather_sensitivity[i]),
            consistency=float(a.consistency[i]),
            social_connectivity=float(a.social_connectivity[i]),
            subculture_connectivity=float(a.subculture_connectivity[i]),
            neighbourhood_connectivity=float(a.neighbourhood_connectivity[i]),
            habit_decay=float(a.habit_decay[i]),
            resolve=float(self.resolve[i]),
            bicycle_owner=bool(a.bicycle_owner[i]),
            car_owner=bool(a.car_owner[i]),
            habit=self.habit[i].copy(),
            last_mode=TransportMode(int(self.last_mode[i])),
        )


@dataclass(frozen=True)
class DailyTrace:
    run_id: int
    scenario: str
    day: int
    weekday: int
    weather: Weather
    counts: tuple[int, int, int, int]

    @property
    def active(self) -> int:
        return self.counts[0] + self.counts[1]

    @property
    def total(self) -> int:
        return sum(self.counts)

    def row(self) -> list:
        return [self.run_id, self.scenario, self.day, self.weekday, self.weather.key, *self.counts]


def scenario_intervention(cfg: ScenarioConfig, scenario: str) -> InterventionSpec:
    if scenario == "control":
        return InterventionSpec(kind="none", start_day=cfg.intervention_day)
    if scenario == "cfd":
        return cfg.intervention
    raise ValueError(f"unknown scenario {scenario!r}; expected one of {SCENARIOS}")


def init_state(agents: AgentTable, networks: Networks, weather, cfg: ScenarioConfig) -> SimulationState:
    """Day-0 state: one-hot habits on the initial mode, resolve 1, no congestion."""
    n = len(agents)
    weather = np.asarray(weather, dtype=np.int8)
    if networks.global_graph.n != n or networks.neighbour_graph.n != n:
        raise ValueError(
            f"network sizes ({networks.global_graph.n}, {networks.neighbour_graph.n}) do not match {n} agents"
        )
    if weather.size != cfg.total_days:
        raise ValueError(f"weather sequence has {weather.size} days, config needs {cfg.total_days}")
    if len(cfg.neighbourhoods) != cfg.neighbourhood_count:
        raise ValueError("neighbourhood specs do not match neighbourhood_count")
    if agents.neighbourhood.size and agents.neighbourhood.max() >= cfg.neighbourhood_count:
        raise ValueError("agent neighbourhood index out of range")
    if agents.subculture.size and agents.subculture.max() >= len(cfg.subcultures):
        raise ValueError("agent subculture index out of range")
    pop = np.bincount(agents.neighbourhood, minlength=cfg.neighbourhood_count).astype(np.float64)
    cap = np.array([nb.capacity.as_array() for nb in cfg.neighbourhoods])
    if cfg.capacity_units == "share":
        cap = cap * pop[:, None]
    priority = np.empty(4, dtype=np.int64)
    for pos, m in enumerate(cfg.tie_break):
        priority[int(m)] = pos
    habit = np.zeros((n, 4))
    habit[np.arange(n), agents.initial_mode] = 1.0
    return SimulationState(
        day=0,
        agents=agents,
        networks=networks,
        weather=weather,
        desirability=np.array([s.desirability.as_array() for s in cfg.subcultures]),
        supportiveness=np.array([nb.supportiveness.as_array() for nb in cfg.neighbourhoods]),
        capacity=cap,
        population=pop,
        distance_cost=np.array([cfg.distance_cost[c].as_array() for c in CommuteCategory]),
        weather_modifier=np.array([cfg.weather.modifier[w].as_array() for w in Weather]),
        priority=priority,
        literal_cost=cfg.cost_mode == "literal",
        habit=habit,
        last_mode=agents.initial_mode.astype(np.int8).copy(),
        resolve=np.full(n, RESOLVE_DRY),
        journeys=np.zeros((cfg.neighbourhood_count, 4), dtype=np.int64),
        congestion=np.ones((cfg.neighbourhood_count, 4)),
    )


# ---------------------------------------------------------------------------
# single-agent operations (readable form of the kernel arithmetic)


def _mode_fractions(graph: Graph, i: int, prev_choices) -> np.ndarray:
    nbrs = graph.neighbours(i)
    if nbrs.size == 0:
        return np.zeros(4)
    counts = np.bincount(np.asarray(prev_choices)[nbrs], minlength=4).astype(float)
    return counts / nbrs.size


def compute_norm(agent: Agent, prev_choices, global_graph: Graph, neighbour_graph: Graph, desirability) -> np.ndarray:
    """Social, neighbour and subculture pressure per mode.

    ``desirability`` is the agent's subculture desirability (length 4).
    Contacts are looked up by agent id in both graphs.
    """
    social = _mode_fractions(global_graph, agent.id, prev_choices)
    neighbour = _mode_fractions(neighbour_graph, agent.id, prev_choices)
    des = np.asarray(list(desirability), dtype=float)
    return (
        agent.social_connectivity * social
        + agent.neighbourhood_connectivity * neighbour
        + agent.subculture_connectivity * des
    )


def rank_scores(scores, priority=None, reverse: bool = False) -> np.ndarray:
    """Ranks 1..4 with 4 for the highest score (lowest when ``reverse``).

    Equal scores are ordered by ``priority`` (position in the tie-break
    order, 0 first): the earlier mode receives the higher rank.
    """
    s = np.asarray(scores, dtype=float)
    prio = np.arange(4) if priority is None else np.asarray(priority)
    ranks = np.ones(4, dtype=np.int64)
    for m in range(4):
        for o in range(4):
            if o == m:
                continue
            worse = s[o] > s[m] if reverse else s[o] < s[m]
            if worse or (s[o] == s[m] and prio[o] > prio[m]):
                ranks[m] += 1
    return ranks


def compute_budget_ranks(norm, habit, consistency: float, congestion_modifier, priority=None) -> np.ndarray:
    score = (np.asarray(norm, float) + consistency * np.asarray(habit, float)) * np.asarray(congestion_modifier, float)
    return rank_scores(score, priority)


def mode_costs(
    agent: Agent,
    weather_today,
    distance_cost,
    supportiveness,
    weather_modifier,
    literal: bool = False,
) -> np.ndarray:
    """Per-mode travel cost for one agent.

    ``distance_cost`` is the row for the agent's commute category and
    ``weather_modifier`` the full (weather, mode) table.
    """
    base = (np.asarray(list(distance_cost), float) + (1.0 - np.asarray(list(supportiveness), float))) / 2.0
    wm = np.asarray(weather_modifier, float)[int(Weather.parse(weather_today))]
    if literal:
        return ((agent.weather_sensitivity * wm) * agent.resolve) * base
    factor = 1.0 + (agent.weather_sensitivity * agent.resolve) * (wm - 1.0)
    return base * factor


def compute_cost_ranks(
    agent: Agent,
    weather_today,
    cfg: ScenarioConfig,
    supportiveness,
    priority=None,
) -> np.ndarray:
    wm = np.array([cfg.weather.modifier[w].as_array() for w in Weather])
    dc = cfg.distance_cost[agent.commute_category]
    cost = mode_costs(agent, weather_today, dc, supportiveness, wm, cfg.cost_mode == "literal")
    return rank_scores(cost, priority, reverse=True)


def available_modes(agent: Agent, banned=None) -> np.ndarray:
    ok = np.ones(4, dtype=bool)
    if not agent.car_owner:
        ok[TransportMode.CAR] = False
    if not agent.bicycle_owner:
        ok[TransportMode.CYCLE] = False
    if banned is not None:
        ok[int(TransportMode.parse(banned))] = False
    return ok


def choose_mode(budget_ranks, cost_ranks, agent: Agent, banned=None, priority=None) -> TransportMode:
    """Available mode with the highest combined rank; ties go to the earlier tie-break mode."""
    combined = np.asarray(budget_ranks) + np.asarray(cost_ranks)
    ok = available_modes(agent, banned)
    prio = np.arange(4) if priority is None else np.asarray(priority)
    best = None
    for m in np.argsort(prio, kind="stable"):
        if ok[m] and (best is None or combined[m] > combined[best]):
            best = int(m)
    if best is None:
        raise ValueError("no mode available to agent")
    return TransportMode(best)


def update_habit(habit, chosen, habit_decay: float) -> np.ndarray:
    indicator = np.zeros(4)
    indicator[int(chosen)] = 1.0
    return habit_decay * np.asarray(habit, float) + (1.0 - habit_decay) * indicator


def update_resolve(yesterday_weather, yesterday_mode) -> float:
    if Weather.parse(yesterday_weather) == Weather.DRY:
        return RESOLVE_DRY
    return RESOLVE_ACTIVE_WET if TransportMode.parse(yesterday_mode).is_active else RESOLVE_INACTIVE_WET


def compute_congestion_modifiers(journeys, capacities, populations) -> np.ndarray:
    """``1`` where journeys fit capacity, else ``1 - (journeys - capacity) / population``.

    Accepts scalars or per-neighbourhood arrays of shape ``(K, 4)`` with
    ``populations`` of shape ``(K,)``.
    """
    j = np.asarray(journeys, dtype=float)
    c = np.asarray(capacities, dtype=float)
    p = np.asarray(populations, dtype=float)
    if j.ndim == 2 and p.ndim == 1:
        p = p[:, None]
    safe_p = np.where(p > 0, p, 1.0)
    return np.where(j <= c, 1.0, 1.0 - (j - c) / safe_p)


# ---------------------------------------------------------------------------
# kernels


@numba.njit(cache=True, inline="always")
def _rank4(s0, s1, s2, s3, prio, reverse):
    s = (s0, s1, s2, s3)
    r0 = 1
    r1 = 1
    r2 = 1
    r3 = 1
    for m in range(4):
        r = 1
        for o in range(4):
            if o == m:
                continue
            if reverse:
                worse = s[o] > s[m]
            else:
                worse = s[o] < s[m]
            if worse or (s[o] == s[m] and prio[o] > prio[m]):
                r += 1
        if m == 0:
            r0 = r
        elif m == 1:
            r1 = r
        elif m == 2:
            r2 = r
        else:
            r3 = r
    return r0, r1, r2, r3


@numba.njit(parallel=True, cache=True)
def _decide_all(
    prev,
    g_ptr,
    g_idx,
    n_ptr,
    n_idx,
    sub,
    des,
    nbh,
    cong,
    supp,
    cat,
    dcost,
    ws,
    cons,
    sc,
    subc,
    ncon,
    resolve,
    habit,
    wmod,
    bike,
    car,
    banned,
    prio,
    order,
    literal,
    out,
):
    n = prev.size
    for i in numba.prange(n):
        # social contact fractions
        a0 = 0.0
        a1 = 0.0
        a2 = 0.0
        a3 = 0.0
        lo = g_ptr[i]
        hi = g_ptr[i + 1]
        for p in range(lo, hi):
            c = prev[g_idx[p]]
            if c == 0:
                a0 += 1.0
            elif c == 1:
                a1 += 1.0
            elif c == 2:
                a2 += 1.0
            else:
                a3 += 1.0
        deg = hi - lo
        if deg > 0:
            a0 = a0 / deg
            a1 = a1 / deg
            a2 = a2 / deg
            a3 = a3 / deg
        # neighbour contact fractions
        b0 = 0.0
        b1 = 0.0
        b2 = 0.0
        b3 = 0.0
        lo = n_ptr[i]
        hi = n_ptr[i + 1]
        for p in range(lo, hi):
            c = prev[n_idx[p]]
            if c == 0:
                b0 += 1.0
            elif c == 1:
                b1 += 1.0
            elif c == 2:
                b2 += 1.0
            else:
                b3 += 1.0
        deg = hi - lo
        if deg > 0:
            b0 = b0 / deg
            b1 = b1 / deg
            b2 = b2 / deg
            b3 = b3 / deg

        s = sub[i]
        k = nbh[i]
        x_sc = sc[i]
        x_nc = ncon[i]
        x_sub = subc[i]
        x_cons = cons[i]
        f0 = ((x_sc * a0 + x_nc * b0) + x_sub * des[s, 0] + x_cons * habit[i, 0]) * cong[k, 0]
        f1 = ((x_sc * a1 + x_nc * b1) + x_sub * des[s, 1] + x_cons * habit[i, 1]) * cong[k, 1]
        f2 = ((x_sc * a2 + x_nc * b2) + x_sub * des[s, 2] + x_cons * habit[i, 2]) * cong[k, 2]
        f3 = ((x_sc * a3 + x_nc * b3) + x_sub * des[s, 3] + x_cons * habit[i, 3]) * cong[k, 3]
        u0, u1, u2, u3 = _rank4(f0, f1, f2, f3, prio, False)

        ct = cat[i]
        e0 = (dcost[ct, 0] + (1.0 - supp[k, 0])) / 2.0
        e1 = (dcost[ct, 1] + (1.0 - supp[k, 1])) / 2.0
        e2 = (dcost[ct, 2] + (1.0 - supp[k, 2])) / 2.0
        e3 = (dcost[ct, 3] + (1.0 - supp[k, 3])) / 2.0
        if literal:
            e0 = ((ws[i] * wmod[0]) * resolve[i]) * e0
            e1 = ((ws[i] * wmod[1]) * resolve[i]) * e1
            e2 = ((ws[i] * wmod[2]) * resolve[i]) * e2
            e3 = ((ws[i] * wmod[3]) * resolve[i]) * e3
        else:
            w = ws[i] * resolve[i]
            e0 = e0 * (1.0 + w * (wmod[0] - 1.0))
            e1 = e1 * (1.0 + w * (wmod[1] - 1.0))
            e2 = e2 * (1.0 + w * (wmod[2] - 1.0))
            e3 = e3 * (1.0 + w * (wmod[3] - 1.0))
        v0, v1, v2, v3 = _rank4(e0, e1, e2, e3, prio, True)

        t = (u0 + v0, u1 + v1, u2 + v2, u3 + v3)
        best = -1
        bestval = -1
        for q in range(4):
            m = order[q]
            if m == banned:
                continue
            if m == 3 and not car[i]:
                continue
            if m == 1 and not bike[i]:
                continue
            if t[m] > bestval:
                best = m
                bestval = t[m]
        out[i] = best


@numba.njit(cache=True)
def _commit(choice, habit, decay, resolve, nbh, wet_today, journeys, last_mode):
    journeys[:, :] = 0
    for i in range(choice.size):
        c = choice[i]
        d = decay[i]
        for m in range(4):
            ind = 1.0 if m == c else 0.0
            habit[i, m] = d * habit[i, m] + (1.0 - d) * ind
        if wet_today:
            resolve[i] = 0.9 if c <= 1 else 1.1
        else:
            resolve[i] = 1.0
        journeys[nbh[i], c] += 1
        last_mode[i] = c


@numba.njit(cache=True)
def _congestion(journeys, capacity, population, out):
    for k in range(journeys.shape[0]):
        for m in range(4):
            j = float(journeys[k, m])
            c = capacity[k, m]
            if j <= c:
                out[k, m] = 1.0
            else:
                out[k, m] = 1.0 - (j - c) / population[k]


def set_threads(threads: int | None) -> int:
    """Set the numba worker count, clamped to the available pool; returns the value used."""
    if threads is None:
        return numba.get_num_threads()
    n = max(1, min(int(threads), numba.config.NUMBA_NUM_THREADS))
    numba.set_num_threads(n)
    return n


def _trace(state: SimulationState, day: int, run_id: int, scenario: str) -> DailyTrace:
    counts = state.journeys.sum(axis=0)
    return DailyTrace(
        run_id=run_id,
        scenario=scenario,
        day=day,
        weekday=day % 7,
        weather=Weather(int(state.weather[day])),
        counts=tuple(int(x) for x in counts),
    )


def initial_trace(state: SimulationState, run_id: int = 0, scenario: str = "control") -> DailyTrace:
    """Record day 0 (initial modes) and set day-1 resolve and congestion from it."""
    a = state.agents
    state.journeys[:, :] = 0
    np.add.at(state.journeys, (a.neighbourhood, state.last_mode.astype(np.int64)), 1)
    wet = state.weather[0] == Weather.WET
    active = state.last_mode <= TransportMode.CYCLE
    state.resolve[:] = np.where(wet, np.where(active, RESOLVE_ACTIVE_WET, RESOLVE_INACTIVE_WET), RESOLVE_DRY)
    _congestion(state.journeys, state.capacity, state.population, state.congestion)
    state.day = 0
    return _trace(state, 0, run_id, scenario)


def step_day(
    state: SimulationState,
    day: int,
    intervention: InterventionSpec | None = None,
    run_id: int = 0,
    scenario: str = "control",
) -> DailyTrace:
    """Advance ``state`` by one day in place and return that day's trace.

    Decisions read day ``day - 1`` choices, habits, resolves and congestion.
    """
    if not 1 <= day < state.weather.size:
        raise ValueError(f"day {day} outside 1..{state.weather.size - 1}")
    a = state.agents
    g = state.networks.global_graph
    nb = state.networks.neighbour_graph
    banned = -1
    if intervention is not None and intervention.is_active(day):
        banned = int(intervention.banned_mode)
    weather_today = int(state.weather[day])
    order = np.argsort(state.priority, kind="stable").astype(np.int64)
    choice = np.empty(len(a), dtype=np.int8)
    _decide_all(
        state.last_mode,
        g.indptr,
        g.indices,
        nb.indptr,
        nb.indices,
        a.subculture,
        state.desirability,
        a.neighbourhood,
        state.congestion,
        state.supportiveness,
        a.category,
        state.distance_cost,
        a.weather_sensitivity,
        a.consistency,
        a.social_connectivity,
        a.subculture_connectivity,
        a.neighbourhood_connectivity,
        state.resolve,
        state.habit,
        state.weather_modifier[weather_today],
        a.bicycle_owner,
        a.car_owner,
        banned,
        state.priority,
        order,
        state.literal_cost,
        choice,
    )
    _commit(
        choice,
        state.habit,
        a.habit_decay,
        state.resolve,
        a.neighbourhood,
        weather_today == Weather.WET,
        state.journeys,
        state.last_mode,
    )
    _congestion(state.journeys, state.capacity, state.population, state.congestion)
    state.day = day
    return _trace(state, day, run_id, scenario)


def run_scenario(
    cfg: ScenarioConfig,
    agents: AgentTable,
    networks: Networks,
    weather,
    scenario: str = "control",
    run_id: int = 0,
    threads: int | None = None,
) -> list[DailyTrace]:
    """Simulate ``cfg.total_days`` days; day 0 records the initial modes."""
    set_threads(threads)
    intervention = scenario_intervention(cfg, scenario)
    state = init_state(agents, networks, weather, cfg)
    traces = [initial_trace(state, run_id, scenario)]
    for day in range(1, cfg.total_days):
        traces.append(step_day(state, day, intervention, run_id, scenario))
    return traces


# ---------------------------------------------------------------------------
# trace files


def traces_to_csv(traces: Sequence[DailyTrace]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(TRACE_COLUMNS)
    for t in traces:
        w.writerow(t.row())
    return buf.getvalue()


def write_traces(traces: Sequence[DailyTrace], path: str | Path) -> None:
    Path(path).write_text(traces_to_csv(traces))


def read_traces(path: str | Path) -> list[DailyTrace]:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or tuple(header) != TRACE_COLUMNS:
            raise ValueError(f"{path}: expected trace columns {','.join(TRACE_COLUMNS)}")
        out = []
        for row in reader:
            if not row:
                continue
            out.append(
                DailyTrace(
                    run_id=int(row[0]),
                    scenario=row[1],
                    day=int(row[2]),
                    weekday=int(row[3]),
                    weather=Weather.parse(row[4]),
                    counts=tuple(int(x) for x in row[5:9]),
                )
            )
    return out
