"""Synthetic commuter population.

Pipeline: iterative proportional fitting of a seed table to marginal targets,
truncate-replicate-sample integerisation, logistic imputation of bicycle
access, then per-agent commute category, initial mode and commute distance.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np
from scipy.special import expit
from sklearn.base import BaseEstimator, TransformerMixin

from .config import DistanceSpec, PopulationSpec, ScenarioConfig
from .core import MODES, CommuteCategory, TransportMode

__all__ = [
    "InfeasibleError",
    "SeedTable",
    "MarginalSet",
    "IPFResult",
    "ipf_fit",
    "IPFScaler",
    "trs_integerise",
    "TRSIntegeriser",
    "bicycle_probability",
    "impute_bicycle_ownership",
    "MODE_BOUNDS",
    "CATEGORY_BOUNDS",
    "sample_commute_distance",
    "classify_commute",
    "sample_initial_modes",
    "SynthAgentRecord",
    "Population",
    "synthesize_population",
    "load_seed_table",
    "load_marginals",
]

LOCAL_MAX_M = 4943.0
CITY_MAX_M = 20059.0

MODE_BOUNDS = {
    TransportMode.WALK: 10_000.0,
    TransportMode.CYCLE: 40_000.0,
    TransportMode.PUBLIC_TRANSPORT: 80_000.0,
    TransportMode.CAR: 80_000.0,
}

# (lower exclusive, upper inclusive) in metres
CATEGORY_BOUNDS = {
    CommuteCategory.LOCAL: (0.0, LOCAL_MAX_M),
    CommuteCategory.CITY: (LOCAL_MAX_M, CITY_MAX_M),
    CommuteCategory.BEYOND: (CITY_MAX_M, math.inf),
}


class InfeasibleError(ValueError):
    """A positive target category has no seed mass to scale."""


# ---------------------------------------------------------------------------
# seed tables and marginals


@dataclass
class SeedTable:
    dims: tuple[str, ...]
    categories: tuple[tuple[str, ...], ...]
    cells: np.ndarray

    def __post_init__(self):
        self.cells = np.asarray(self.cells, dtype=float)
        if self.cells.shape != tuple(len(c) for c in self.categories):
            raise ValueError(
                f"cells shape {self.cells.shape} does not match categories "
                f"{tuple(len(c) for c in self.categories)}"
            )
        if np.any(self.cells < 0) or not np.all(np.isfinite(self.cells)):
            raise ValueError("seed cells must be finite and non-negative")


@dataclass
class MarginalSet:
    """One-way target counts, keyed by dimension name, aligned to a seed's categories."""

    targets: dict[str, np.ndarray]

    def aligned(self, seed: SeedTable) -> list[np.ndarray]:
        missing = [d for d in seed.dims if d not in self.targets]
        if missing:
            raise ValueError(f"no marginal targets for dimension(s) {missing}")
        out = []
        for d, cats in zip(seed.dims, seed.categories):
            t = np.asarray(self.targets[d], dtype=float)
            if t.shape != (len(cats),):
                raise ValueError(f"targets for {d!r} have shape {t.shape}, expected ({len(cats)},)")
            out.append(t)
        return out

    def scaled_to(self, total: float) -> "MarginalSet":
        return MarginalSet({k: np.asarray(v, float) * (total / np.sum(v)) for k, v in self.targets.items()})


def _data_path(name: str) -> Path:
    return Path(str(resources.files("commutesim") / "data" / name))


def load_seed_table(path: str | Path | None = None) -> SeedTable:
    """Read a seed table: one column per dimension plus a ``weight`` column."""
    path = Path(path) if path is not None else _data_path("seed_table.csv")
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if header[-1] != "weight":
            raise ValueError(f"{path}: last column must be 'weight'")
        dims = tuple(header[:-1])
        rows = [r for r in reader if r]
    cats: list[list[str]] = [[] for _ in dims]
    for r in rows:
        for i, v in enumerate(r[:-1]):
            if v not in cats[i]:
                cats[i].append(v)
    cells = np.zeros(tuple(len(c) for c in cats))
    for r in rows:
        idx = tuple(cats[i].index(v) for i, v in enumerate(r[:-1]))
        cells[idx] += float(r[-1])
    return SeedTable(dims, tuple(tuple(c) for c in cats), cells)


def load_marginals(path: str | Path | None = None, seed: SeedTable | None = None) -> MarginalSet:
    """Read marginals from rows ``dimension,category,count``.

    With ``seed`` given, categories are ordered to match it and missing
    categories default to zero.
    """
    path = Path(path) if path is not None else _data_path("marginals.csv")
    raw: dict[str, dict[str, float]] = {}
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != ["dimension", "category", "count"]:
            raise ValueError(f"{path}: expected columns dimension,category,count")
        for row in reader:
            raw.setdefault(row["dimension"], {})[row["category"]] = float(row["count"])
    if seed is None:
        return MarginalSet({d: np.array(list(v.values())) for d, v in raw.items()})
    targets = {}
    for d, cats in zip(seed.dims, seed.categories):
        if d not in raw:
            raise ValueError(f"{path}: no marginals for dimension {d!r}")
        unknown = set(raw[d]) - set(cats)
        if unknown:
            raise ValueError(f"{path}: categories {sorted(unknown)} of {d!r} absent from seed table")
        targets[d] = np.array([raw[d].get(c, 0.0) for c in cats])
    return MarginalSet(targets)


# ---------------------------------------------------------------------------
# IPF


@dataclass
class IPFResult:
    weights: np.ndarray
    converged: bool
    n_iter: int
    error_history: list[float] = field(default_factory=list)
    marginal_errors: list[float] = field(default_factory=list)


def _marginal(w: np.ndarray, axis: int) -> np.ndarray:
    other = tuple(a for a in range(w.ndim) if a != axis)
    return w.sum(axis=other)


def ipf_fit(
    seed,
    targets,
    tol: float = 1e-8,
    max_iter: int = 200,
    dim_names: Sequence[str] | None = None,
) -> IPFResult:
    """Scale ``seed`` so its one-way marginals match ``targets``.

    Parameters
    ----------
    seed : SeedTable or ndarray
        Non-negative seed weights, one axis per dimension.
    targets : MarginalSet or sequence of 1-D arrays
        Target counts per category of each axis. Totals must agree.
    tol : float
        Convergence threshold on each marginal's total absolute error.
    max_iter : int
        Maximum number of full sweeps over the dimensions.

    Returns
    -------
    IPFResult
        ``error_history[i]`` is the summed total absolute error after sweep
        ``i`` (entry 0 is the unfitted seed).

    Raises
    ------
    InfeasibleError
        A positive target category has zero seed mass.
    ValueError
        Inconsistent marginal totals or malformed inputs.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    if isinstance(seed, SeedTable):
        names = seed.dims
        cats = seed.categories
        w0 = seed.cells
        tlist = targets.aligned(seed) if isinstance(targets, MarginalSet) else [np.asarray(t, float) for t in targets]
    else:
        w0 = np.asarray(seed, dtype=float)
        names = tuple(dim_names) if dim_names is not None else tuple(f"dim{i}" for i in range(w0.ndim))
        cats = tuple(tuple(str(j) for j in range(s)) for s in w0.shape)
        tlist = [np.asarray(t, float) for t in targets]
    if len(tlist) != w0.ndim:
        raise ValueError(f"{len(tlist)} marginals given for a {w0.ndim}-way table")
    if np.any(w0 < 0):
        raise ValueError("seed weights must be non-negative")
    for i, t in enumerate(tlist):
        if t.shape != (w0.shape[i],):
            raise ValueError(f"marginal {names[i]!r} has shape {t.shape}, expected ({w0.shape[i]},)")
        if np.any(t < 0):
            raise ValueError(f"marginal {names[i]!r} has negative targets")
    totals = np.array([t.sum() for t in tlist])
    if np.ptp(totals) > 1e-9 * max(1.0, float(totals.max())):
        raise ValueError(f"marginal totals disagree: {totals.tolist()}")

    for i, t in enumerate(tlist):
        mass = _marginal(w0, i)
        for j in np.flatnonzero((t > 0) & (mass <= 0)):
            raise InfeasibleError(
                f"dimension {names[i]!r} category {cats[i][j]!r} has target {t[j]:g} but zero seed mass"
            )

    w = w0.copy()

    def errors(arr):
        return [float(np.abs(_marginal(arr, i) - t).sum()) for i, t in enumerate(tlist)]

    errs = errors(w)
    history = [sum(errs)]
    n_iter = 0
    converged = all(e <= tol for e in errs)
    while not converged and n_iter < max_iter:
        for i, t in enumerate(tlist):
            current = _marginal(w, i)
            factor = np.divide(t, current, out=np.zeros_like(t), where=current > 0)
            shape = [1] * w.ndim
            shape[i] = -1
            w *= factor.reshape(shape)
        n_iter += 1
        errs = errors(w)
        history.append(sum(errs))
        converged = all(e <= tol for e in errs)
    return IPFResult(w, converged, n_iter, history, errs)


class IPFScaler(BaseEstimator):
    """Estimator wrapper around :func:`ipf_fit`.

    ``fit(seed, targets)`` stores ``weights_``, ``converged_``, ``n_iter_``
    and ``error_history_``.
    """

    def __init__(self, tol: float = 1e-8, max_iter: int = 200):
        self.tol = tol
        self.max_iter = max_iter

    def fit(self, seed, targets):
        res = ipf_fit(seed, targets, tol=self.tol, max_iter=self.max_iter)
        self.weights_ = res.weights
        self.converged_ = res.converged
        self.n_iter_ = res.n_iter
        self.error_history_ = res.error_history
        return self


# ---------------------------------------------------------------------------
# TRS


def _capped_inclusion(frac: np.ndarray, n_draw: int) -> np.ndarray:
    """Inclusion probabilities proportional to ``frac`` summing to ``n_draw``, capped at 1."""
    pi = np.zeros_like(frac)
    free = frac > 0
    remaining = n_draw
    while remaining > 0:
        scaled = frac[free] * (remaining / frac[free].sum())
        over = scaled >= 1.0
        if not over.any():
            pi[free] = scaled
            break
        idx = np.flatnonzero(free)[over]
        pi[idx] = 1.0
        free[idx] = False
        remaining -= idx.size
    return pi


def trs_integerise(weights, rng: np.random.Generator) -> np.ndarray:
    """Truncate, replicate, sample: integer counts preserving the rounded total.

    Each count is ``floor(weight)`` plus at most one extra unit. The
    ``round(sum(weights)) - sum(floor)`` extra units go to distinct cells,
    drawn without replacement with inclusion probability proportional to
    the fractional parts (exactly equal to them when the total is integral).
    """
    w = np.asarray(weights, dtype=float)
    if np.any(w < 0) or not np.all(np.isfinite(w)):
        raise ValueError("weights must be finite and non-negative")
    total = w.sum()
    if not total > 0:
        raise ValueError("total weight must be positive")
    base = np.floor(w)
    frac = w - base
    counts = base.astype(np.int64)
    n_draw = int(math.floor(total + 0.5)) - int(counts.sum())
    if n_draw <= 0:
        return counts
    pi = _capped_inclusion(frac.ravel(), n_draw)
    cand = np.flatnonzero(pi > 0)
    order = cand[rng.permutation(cand.size)]
    cum = np.cumsum(pi[order])
    cum[-1] = n_draw
    points = rng.random() + np.arange(n_draw)
    picked = order[np.searchsorted(cum, points, side="right")]
    flat = counts.ravel()
    flat[picked] += 1
    return flat.reshape(w.shape)


class TRSIntegeriser(TransformerMixin, BaseEstimator):
    """Stateless transformer applying :func:`trs_integerise` row by row."""

    def __init__(self, random_state: np.random.Generator | None = None):
        self.random_state = random_state

    def fit(self, X=None, y=None):
        return self

    def transform(self, X):
        rng = self.random_state if self.random_state is not None else np.random.default_rng()
        X = np.atleast_2d(np.asarray(X, dtype=float))
        return np.vstack([trs_integerise(row, rng) for row in X])


# ---------------------------------------------------------------------------
# bicycle access


def bicycle_probability(attributes: Mapping[str, str], coefficients: Mapping[str, float]) -> float:
    """Logistic probability of bicycle access.

    ``coefficients`` maps ``"intercept"`` and ``"<dimension>=<category>"``
    terms to log-odds contributions; absent terms contribute zero.
    """
    eta = coefficients.get("intercept", 0.0)
    for dim, cat in attributes.items():
        eta += coefficients.get(f"{dim}={cat}", 0.0)
    return float(expit(eta))


def impute_bicycle_ownership(
    attributes: Mapping[str, str], coefficients: Mapping[str, float], rng: np.random.Generator
) -> bool:
    return bool(rng.random() < bicycle_probability(attributes, coefficients))


def _cell_probabilities(seed: SeedTable, coefficients: Mapping[str, float]) -> np.ndarray:
    eta = np.full(seed.cells.shape, coefficients.get("intercept", 0.0))
    for axis, (dim, cats) in enumerate(zip(seed.dims, seed.categories)):
        contrib = np.array([coefficients.get(f"{dim}={c}", 0.0) for c in cats])
        shape = [1] * eta.ndim
        shape[axis] = -1
        eta = eta + contrib.reshape(shape)
    return expit(eta)


# ---------------------------------------------------------------------------
# commute distance and category


def _draw_raw(spec: DistanceSpec, rng: np.random.Generator, n: int) -> np.ndarray:
    if spec.kind == "lognormal":
        return rng.lognormal(spec.mu, spec.sigma, size=n)
    if spec.kind == "mixture":
        weights = np.asarray(spec.weights, float)
        comp = rng.choice(weights.size, size=n, p=weights / weights.sum())
        return rng.normal(np.asarray(spec.means)[comp], np.asarray(spec.sds)[comp])
    raise ValueError(f"unknown distance law {spec.kind!r}")


def sample_commute_distance(
    mode,
    dist_spec: DistanceSpec,
    rng: np.random.Generator,
    size: int | None = None,
    interval: tuple[float, float] | None = None,
    max_proposals: int = 10_000_000,
):
    """Draw commute distances (metres) by rejection into the mode's bounds.

    Values outside ``(0, bound(mode)]``, and outside ``interval = (lo, hi]``
    when given, are discarded and redrawn.

    Raises
    ------
    RuntimeError
        The acceptance probability is indistinguishable from zero (below
        about 1e-6) or ``max_proposals`` is exhausted.
    """
    mode = TransportMode.parse(mode)
    lo, hi = 0.0, MODE_BOUNDS[mode]
    if interval is not None:
        lo, hi = max(lo, interval[0]), min(hi, interval[1])
    if not hi > lo:
        raise RuntimeError(f"empty support for {mode.key} within ({lo}, {hi}]")
    n = 1 if size is None else int(size)
    out = np.empty(n)
    filled = 0
    proposals = 0
    accepted = 0
    while filled < n:
        rate = (accepted + 1) / (proposals + 2)
        batch = int(min(max(1024, 1.2 * (n - filled) / rate), 1_000_000))
        x = _draw_raw(dist_spec, rng, batch)
        x = x[(x > lo) & (x <= hi)]
        proposals += batch
        accepted += x.size
        take = min(x.size, n - filled)
        out[filled : filled + take] = x[:take]
        filled += take
        if filled < n and (proposals >= 1_000_000 and accepted / proposals < 1e-6 or proposals >= max_proposals):
            raise RuntimeError(
                f"commute-distance rejection for {mode.key} failed: {accepted} accepted of "
                f"{proposals} proposals in ({lo}, {hi}]"
            )
    return float(out[0]) if size is None else out


def classify_commute(distance):
    """Commute category from distance in metres.

    Local up to 4 943 m, City up to 20 059 m, Beyond above. Works on scalars
    (returns a ``CommuteCategory``) or arrays (returns int codes).
    """
    d = np.asarray(distance, dtype=float)
    if np.any(~(d > 0)):
        raise ValueError("commute distance must be positive")
    codes = np.where(d <= LOCAL_MAX_M, 0, np.where(d <= CITY_MAX_M, 1, 2)).astype(np.int8)
    if d.ndim == 0:
        return CommuteCategory(int(codes))
    return codes


def _fallback_order(split: np.ndarray, tie_break: Sequence[TransportMode]) -> list[int]:
    prio = {int(m): i for i, m in enumerate(tie_break)}
    return sorted(range(4), key=lambda m: (-split[m], prio[m]))


def sample_initial_modes(
    categories,
    modal_split: Mapping[CommuteCategory, object],
    rng: np.random.Generator,
    bicycle_owner=None,
    car_owner=None,
    tie_break: Sequence[TransportMode] = MODES,
) -> np.ndarray:
    """Initial modes from each category's modal split, repaired for ownership.

    An agent drawn to a vehicle they lack moves to the most common mode in
    their category that they can use (walk and public transport always
    qualify). Pass ``None`` for both owner arrays to skip the repair.
    """
    cats = np.asarray(categories, dtype=np.int64)
    modes = np.empty(cats.size, dtype=np.int8)
    u = rng.random(cats.size)
    splits = {}
    for c in CommuteCategory:
        split = np.asarray(list(modal_split[c]), dtype=float)
        split = split / split.sum()
        splits[int(c)] = split
        sel = cats == int(c)
        cum = np.cumsum(split)
        cum[-1] = 1.0
        modes[sel] = np.searchsorted(cum, u[sel], side="right")
    if bicycle_owner is None and car_owner is None:
        return modes
    bike = np.ones(cats.size, bool) if bicycle_owner is None else np.asarray(bicycle_owner, bool)
    car = np.ones(cats.size, bool) if car_owner is None else np.asarray(car_owner, bool)
    for c, split in splits.items():
        order = _fallback_order(split, tie_break)
        sel = cats == c
        for need, owns in ((TransportMode.CAR, car), (TransportMode.CYCLE, bike)):
            bad = sel & (modes == int(need)) & ~owns
            for i in np.flatnonzero(bad):
                for m in order:
                    if m == TransportMode.CAR and not car[i]:
                        continue
                    if m == TransportMode.CYCLE and not bike[i]:
                        continue
                    if split[m] > 0 or m in (TransportMode.WALK, TransportMode.PUBLIC_TRANSPORT):
                        modes[i] = m
                        break
    return modes


# ---------------------------------------------------------------------------
# population


@dataclass(frozen=True)
class SynthAgentRecord:
    agent_id: int
    attributes: dict
    bicycle_owner: bool
    car_owner: bool
    commute_distance: float
    commute_category: CommuteCategory
    initial_mode: TransportMode


@dataclass
class Population:
    """Columnar synthetic population; ``pop[i]`` gives a :class:`SynthAgentRecord`."""

    dims: tuple[str, ...]
    attributes: dict[str, np.ndarray]
    bicycle_owner: np.ndarray
    car_owner: np.ndarray
    commute_distance: np.ndarray
    commute_category: np.ndarray
    initial_mode: np.ndarray

    def __len__(self) -> int:
        return int(self.initial_mode.size)

    def __getitem__(self, i: int) -> SynthAgentRecord:
        return SynthAgentRecord(
            agent_id=int(i),
            attributes={d: str(self.attributes[d][i]) for d in self.dims},
            bicycle_owner=bool(self.bicycle_owner[i]),
            car_owner=bool(self.car_owner[i]),
            commute_distance=float(self.commute_distance[i]),
            commute_category=CommuteCategory(int(self.commute_category[i])),
            initial_mode=TransportMode(int(self.initial_mode[i])),
        )

    def __iter__(self):
        return (self[i] for i in range(len(self)))

    def summary(self) -> dict:
        n = len(self)
        out = {
            "agents": n,
            "bicycle_rate": float(self.bicycle_owner.mean()) if n else 0.0,
            "car_rate": float(self.car_owner.mean()) if n else 0.0,
        }
        for c in CommuteCategory:
            out[f"share_{c.key}"] = float(np.mean(self.commute_category == int(c))) if n else 0.0
        for m in MODES:
            out[f"initial_{m.key}"] = float(np.mean(self.initial_mode == int(m))) if n else 0.0
        return out

    @property
    def columns(self) -> list[str]:
        return [
            "agent_id",
            *self.dims,
            "bicycle_owner",
            "car_owner",
            "commute_distance",
            "commute_category",
            "initial_mode",
        ]

    def to_csv(self, path: str | Path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(self.columns)
            for i in range(len(self)):
                w.writerow(
                    [
                        i,
                        *(self.attributes[d][i] for d in self.dims),
                        int(self.bicycle_owner[i]),
                        int(self.car_owner[i]),
                        repr(float(self.commute_distance[i])),
                        CommuteCategory(int(self.commute_category[i])).key,
                        TransportMode(int(self.initial_mode[i])).key,
                    ]
                )

    @classmethod
    def from_csv(cls, path: str | Path) -> "Population":
        with open(path, newline="") as fh:
            reader = csv.reader(fh)
            header = next(reader)
            rows = [r for r in reader if r]
        fixed_head, fixed_tail = ["agent_id"], [
            "bicycle_owner",
            "car_owner",
            "commute_distance",
            "commute_category",
            "initial_mode",
        ]
        if header[:1] != fixed_head or header[-5:] != fixed_tail:
            raise ValueError(f"{path}: unexpected population columns {header}")
        dims = tuple(header[1:-5])
        cols = list(zip(*rows)) if rows else [()] * len(header)
        ids = np.array(cols[0], dtype=np.int64)
        if not np.array_equal(ids, np.arange(ids.size)):
            raise ValueError(f"{path}: agent_id must run 0..n-1 in order")
        attrs = {d: np.array(cols[1 + i], dtype=object) for i, d in enumerate(dims)}
        k = 1 + len(dims)
        return cls(
            dims=dims,
            attributes=attrs,
            bicycle_owner=np.array(cols[k], dtype=np.int64).astype(bool),
            car_owner=np.array(cols[k + 1], dtype=np.int64).astype(bool),
            commute_distance=np.array(cols[k + 2], dtype=float),
            commute_category=np.array([CommuteCategory.parse(c) for c in cols[k + 3]], dtype=np.int8),
            initial_mode=np.array([TransportMode.parse(m) for m in cols[k + 4]], dtype=np.int8),
        )


def _sample_categories(spec: PopulationSpec, rng: np.random.Generator, n: int) -> np.ndarray:
    p = np.array([spec.category_shares[c] for c in CommuteCategory], float)
    return rng.choice(3, size=n, p=p / p.sum()).astype(np.int8)


def synthesize_population(cfg: ScenarioConfig, rng: np.random.Generator) -> Population:
    """Build ``cfg.agent_count`` synthetic commuters.

    Seed and marginal tables come from ``cfg.population`` (packaged toy
    tables by default); marginals are rescaled to the agent count before
    fitting.
    """
    spec = cfg.population
    seed = load_seed_table(spec.seed_table)
    marg = load_marginals(spec.marginals, seed).scaled_to(cfg.agent_count)
    fit = ipf_fit(seed, marg, tol=spec.ipf_tol * cfg.agent_count, max_iter=spec.ipf_max_iter)
    counts = trs_integerise(fit.weights, rng)
    n = int(counts.sum())

    cell_idx = np.repeat(np.arange(counts.size), counts.ravel())
    cell_idx = cell_idx[rng.permutation(n)]
    multi = np.unravel_index(cell_idx, counts.shape)
    attrs = {
        d: np.asarray(cats, dtype=object)[multi[axis]]
        for axis, (d, cats) in enumerate(zip(seed.dims, seed.categories))
    }

    if spec.car_dimension in attrs:
        car = attrs[spec.car_dimension] == spec.car_category
    else:
        car = np.zeros(n, bool)
    p_bike = _cell_probabilities(seed, spec.bicycle_coefficients).ravel()[cell_idx]
    bike = rng.random(n) < p_bike

    cats = _sample_categories(spec, rng, n)
    modes = sample_initial_modes(cats, spec.modal_split, rng, bike, car, cfg.tie_break)

    dist = np.empty(n)
    for c in CommuteCategory:
        for m in MODES:
            sel = np.flatnonzero((cats == int(c)) & (modes == int(m)))
            if sel.size:
                dist[sel] = sample_commute_distance(
                    m, spec.distance[m], rng, size=sel.size, interval=CATEGORY_BOUNDS[c]
                )
    return Population(
        dims=seed.dims,
        attributes=attrs,
        bicycle_owner=bike,
        car_owner=np.asarray(car, bool),
        commute_distance=dist,
        commute_category=cats,
        initial_mode=modes,
    )
