"""Scenario configuration: schema, defaults, JSON round-trip and validation.

The configuration file is a JSON document. Keys missing from a file take
their defaults; unknown keys are rejected with :class:`ConfigError`.
Serialising a parsed configuration reproduces the same bytes.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any, Mapping

from .core import MODES, CommuteCategory, ModeVector, TransportMode, Weather

__all__ = [
    "ConfigError",
    "Subculture",
    "NeighbourhoodSpec",
    "InterventionSpec",
    "NetworkParams",
    "WeatherSpec",
    "DistanceSpec",
    "PopulationSpec",
    "ScenarioConfig",
    "ValidationReport",
    "validate_config",
    "load_config",
    "loads_config",
    "dumps_config",
    "config_hash",
    "default_config",
]

COST_MODES = ("interpolated", "literal")
CAPACITY_UNITS = ("share", "journeys")
NEIGHBOUR_SCOPES = ("neighbourhood", "borough")
REGENERATE = ("both", "global")
INTERVENTION_KINDS = ("none", "car_free_days")


class ConfigError(ValueError):
    """Raised when a configuration document cannot be parsed."""


def _check_keys(data: Mapping[str, Any], allowed, path: str) -> None:
    if not isinstance(data, Mapping):
        raise ConfigError(f"{path or '<root>'}: expected an object, got {type(data).__name__}")
    unknown = sorted(set(data) - set(allowed))
    if unknown:
        where = f"{path}." if path else ""
        raise ConfigError("unknown key(s): " + ", ".join(where + k for k in unknown))


def _mode_vector(value, path: str) -> ModeVector:
    if isinstance(value, ModeVector):
        return value
    try:
        if isinstance(value, Mapping):
            return ModeVector.from_mapping(value)
        return ModeVector.from_iterable(value)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{path}: {exc}") from None


@dataclass(frozen=True)
class Subculture:
    id: str
    desirability: ModeVector

    def to_dict(self) -> dict:
        return {"id": self.id, "desirability": self.desirability.to_dict()}

    @classmethod
    def from_dict(cls, data, path="subcultures[]") -> "Subculture":
        _check_keys(data, ("id", "desirability"), path)
        return cls(str(data["id"]), _mode_vector(data["desirability"], f"{path}.desirability"))


@dataclass(frozen=True)
class NeighbourhoodSpec:
    id: str
    supportiveness: ModeVector
    capacity: ModeVector

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "supportiveness": self.supportiveness.to_dict(),
            "capacity": self.capacity.to_dict(),
        }

    @classmethod
    def from_dict(cls, data, path="neighbourhoods[]") -> "NeighbourhoodSpec":
        _check_keys(data, ("id", "supportiveness", "capacity"), path)
        return cls(
            str(data["id"]),
            _mode_vector(data["supportiveness"], f"{path}.supportiveness"),
            _mode_vector(data["capacity"], f"{path}.capacity"),
        )


@dataclass(frozen=True)
class InterventionSpec:
    kind: str = "car_free_days"
    banned_mode: TransportMode = TransportMode.CAR
    weekday: int = 2
    start_day: int = 365

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "banned_mode": self.banned_mode.key,
            "weekday": self.weekday,
            "start_day": self.start_day,
        }

    @classmethod
    def from_dict(cls, data, path="intervention") -> "InterventionSpec":
        _check_keys(data, ("kind", "banned_mode", "weekday", "start_day"), path)
        d = cls()
        try:
            mode = TransportMode.parse(data.get("banned_mode", d.banned_mode))
        except ValueError as exc:
            raise ConfigError(f"{path}.banned_mode: {exc}") from None
        return cls(
            kind=str(data.get("kind", d.kind)),
            banned_mode=mode,
            weekday=int(data.get("weekday", d.weekday)),
            start_day=int(data.get("start_day", d.start_day)),
        )

    def is_active(self, day: int) -> bool:
        return self.kind == "car_free_days" and day >= self.start_day and day % 7 == self.weekday


@dataclass(frozen=True)
class NetworkParams:
    k: int = 10
    beta: float = 0.1
    m0: int = 3
    m: int = 3
    neighbour_scope: str = "neighbourhood"
    regenerate: str = "both"

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "beta": self.beta,
            "m0": self.m0,
            "m": self.m,
            "neighbour_scope": self.neighbour_scope,
            "regenerate": self.regenerate,
        }

    @classmethod
    def from_dict(cls, data, path="network") -> "NetworkParams":
        _check_keys(data, cls().to_dict(), path)
        d = cls()
        return cls(
            k=int(data.get("k", d.k)),
            beta=float(data.get("beta", d.beta)),
            m0=int(data.get("m0", d.m0)),
            m=int(data.get("m", d.m)),
            neighbour_scope=str(data.get("neighbour_scope", d.neighbour_scope)),
            regenerate=str(data.get("regenerate", d.regenerate)),
        )


def _default_modifier() -> dict[Weather, ModeVector]:
    return {
        Weather.WET: ModeVector(1.5, 2.0, 1.1, 1.0),
        Weather.DRY: ModeVector(1.0, 1.0, 1.0, 1.0),
    }


@dataclass(frozen=True)
class WeatherSpec:
    # rows/columns in Weather order (wet, dry)
    transition: tuple[tuple[float, float], tuple[float, float]] = ((0.5, 0.5), (0.18, 0.82))
    modifier: Mapping[Weather, ModeVector] = field(default_factory=_default_modifier)
    initial: Weather = Weather.DRY
    threshold_mm: float = 4.4

    def to_dict(self) -> dict:
        return {
            "transition": [list(row) for row in self.transition],
            "modifier": {w.key: self.modifier[w].to_dict() for w in Weather},
            "initial": self.initial.key,
            "threshold_mm": self.threshold_mm,
        }

    @classmethod
    def from_dict(cls, data, path="weather") -> "WeatherSpec":
        _check_keys(data, ("transition", "modifier", "initial", "threshold_mm"), path)
        d = cls()
        transition = d.transition
        if "transition" in data:
            rows = data["transition"]
            if len(rows) != 2 or any(len(r) != 2 for r in rows):
                raise ConfigError(f"{path}.transition: expected a 2x2 matrix")
            transition = tuple(tuple(float(x) for x in r) for r in rows)
        modifier = d.modifier
        if "modifier" in data:
            mod = data["modifier"]
            _check_keys(mod, [w.key for w in Weather], f"{path}.modifier")
            missing = [w.key for w in Weather if w.key not in mod]
            if missing:
                raise ConfigError(f"{path}.modifier: missing {missing}")
            modifier = {w: _mode_vector(mod[w.key], f"{path}.modifier.{w.key}") for w in Weather}
        try:
            initial = Weather.parse(data.get("initial", d.initial))
        except ValueError as exc:
            raise ConfigError(f"{path}.initial: {exc}") from None
        return cls(transition, modifier, initial, float(data.get("threshold_mm", d.threshold_mm)))


@dataclass(frozen=True)
class DistanceSpec:
    """Commute-distance law in metres: ``lognormal`` (mu, sigma of log-metres)
    or a Gaussian ``mixture`` (weights, means, sds)."""

    kind: str
    mu: float = 0.0
    sigma: float = 1.0
    weights: tuple[float, ...] = ()
    means: tuple[float, ...] = ()
    sds: tuple[float, ...] = ()

    @classmethod
    def lognormal(cls, mu: float, sigma: float) -> "DistanceSpec":
        return cls("lognormal", mu=mu, sigma=sigma)

    @classmethod
    def mixture(cls, weights, means, sds) -> "DistanceSpec":
        return cls("mixture", weights=tuple(weights), means=tuple(means), sds=tuple(sds))

    def to_dict(self) -> dict:
        if self.kind == "lognormal":
            return {"kind": "lognormal", "mu": self.mu, "sigma": self.sigma}
        return {
            "kind": self.kind,
            "weights": list(self.weights),
            "means": list(self.means),
            "sds": list(self.sds),
        }

    @classmethod
    def from_dict(cls, data, path="distance") -> "DistanceSpec":
        kind = data.get("kind") if isinstance(data, Mapping) else None
        if kind == "lognormal":
            _check_keys(data, ("kind", "mu", "sigma"), path)
            return cls.lognormal(float(data["mu"]), float(data["sigma"]))
        if kind == "mixture":
            _check_keys(data, ("kind", "weights", "means", "sds"), path)
            return cls.mixture(
                [float(x) for x in data["weights"]],
                [float(x) for x in data["means"]],
                [float(x) for x in data["sds"]],
            )
        raise ConfigError(f"{path}.kind: expected 'lognormal' or 'mixture', got {kind!r}")


def _default_modal_split() -> dict[CommuteCategory, ModeVector]:
    # percentages, walk / cycle / public transport / car
    return {
        CommuteCategory.LOCAL: ModeVector(21.5, 3.5, 31.5, 43.5),
        CommuteCategory.CITY: ModeVector(0.2, 2.8, 71.1, 25.9),
        CommuteCategory.BEYOND: ModeVector(0.0, 0.8, 45.2, 54.0),
    }


def _default_distances() -> dict[TransportMode, DistanceSpec]:
    return {
        TransportMode.WALK: DistanceSpec.lognormal(7.7225, 0.6),
        TransportMode.CYCLE: DistanceSpec.mixture((0.5, 0.5), (4000.0, 11440.0), (1500.0, 4000.0)),
        TransportMode.PUBLIC_TRANSPORT: DistanceSpec.lognormal(9.1000, 0.6),
        TransportMode.CAR: DistanceSpec.lognormal(8.8990, 0.7),
    }


def _default_bicycle_coefficients() -> dict[str, float]:
    return {
        "intercept": 0.1813,
        "sex=female": -0.45,
        "age=30-44": 0.1,
        "age=45-59": -0.15,
        "age=60+": -0.6,
        "ethnicity=asian": -0.4,
        "ethnicity=black": -0.3,
        "ethnicity=other": -0.2,
        "employment=part_time": -0.1,
        "car_usage=yes": 0.25,
    }


@dataclass(frozen=True)
class PopulationSpec:
    seed_table: str | None = None
    marginals: str | None = None
    category_shares: Mapping[CommuteCategory, float] = field(
        default_factory=lambda: {
            CommuteCategory.LOCAL: 0.25,
            CommuteCategory.CITY: 0.65,
            CommuteCategory.BEYOND: 0.10,
        }
    )
    modal_split: Mapping[CommuteCategory, ModeVector] = field(default_factory=_default_modal_split)
    distance: Mapping[TransportMode, DistanceSpec] = field(default_factory=_default_distances)
    bicycle_coefficients: Mapping[str, float] = field(default_factory=_default_bicycle_coefficients)
    car_dimension: str = "car_usage"
    car_category: str = "yes"
    ipf_tol: float = 1e-8
    ipf_max_iter: int = 500

    def to_dict(self) -> dict:
        return {
            "seed_table": self.seed_table,
            "marginals": self.marginals,
            "category_shares": {c.key: self.category_shares[c] for c in CommuteCategory},
            "modal_split": {c.key: self.modal_split[c].to_dict() for c in CommuteCategory},
            "distance": {m.key: self.distance[m].to_dict() for m in MODES},
            "bicycle_coefficients": dict(self.bicycle_coefficients),
            "car_dimension": self.car_dimension,
            "car_category": self.car_category,
            "ipf_tol": self.ipf_tol,
            "ipf_max_iter": self.ipf_max_iter,
        }

    @classmethod
    def from_dict(cls, data, path="population") -> "PopulationSpec":
        d = cls()
        _check_keys(data, d.to_dict(), path)
        kw: dict[str, Any] = {}
        for key in ("seed_table", "marginals"):
            if key in data:
                kw[key] = None if data[key] is None else str(data[key])
        if "category_shares" in data:
            cs = data["category_shares"]
            _check_keys(cs, [c.key for c in CommuteCategory], f"{path}.category_shares")
            kw["category_shares"] = {c: float(cs.get(c.key, 0.0)) for c in CommuteCategory}
        if "modal_split" in data:
            ms = data["modal_split"]
            _check_keys(ms, [c.key for c in CommuteCategory], f"{path}.modal_split")
            kw["modal_split"] = {
                c: _mode_vector(ms[c.key], f"{path}.modal_split.{c.key}") if c.key in ms else d.modal_split[c]
                for c in CommuteCategory
            }
        if "distance" in data:
            dist = data["distance"]
            _check_keys(dist, [m.key for m in MODES], f"{path}.distance")
            kw["distance"] = {
                m: DistanceSpec.from_dict(dist[m.key], f"{path}.distance.{m.key}") if m.key in dist else d.distance[m]
                for m in MODES
            }
        if "bicycle_coefficients" in data:
            kw["bicycle_coefficients"] = {str(k): float(v) for k, v in data["bicycle_coefficients"].items()}
        for key in ("car_dimension", "car_category"):
            if key in data:
                kw[key] = str(data[key])
        if "ipf_tol" in data:
            kw["ipf_tol"] = float(data["ipf_tol"])
        if "ipf_max_iter" in data:
            kw["ipf_max_iter"] = int(data["ipf_max_iter"])
        return replace(d, **kw)


def default_subcultures() -> tuple[Subculture, ...]:
    return (
        Subculture("A", ModeVector(0.7, 0.9, 0.6, 0.8)),
        Subculture("B", ModeVector(0.5, 0.3, 0.7, 0.9)),
        Subculture("C", ModeVector(0.9, 0.9, 0.7, 0.4)),
    )


def default_distance_cost() -> dict[CommuteCategory, ModeVector]:
    return {
        CommuteCategory.LOCAL: ModeVector(0.1, 0.1, 0.2, 0.2),
        CommuteCategory.CITY: ModeVector(0.9, 0.5, 0.2, 0.3),
        CommuteCategory.BEYOND: ModeVector(1.0, 0.9, 0.3, 0.3),
    }


def default_neighbourhoods(count: int = 20) -> tuple[NeighbourhoodSpec, ...]:
    """Deterministic spread of supportiveness across ``count`` neighbourhoods.

    Each mode walks a different permutation of the same evenly spaced grid,
    so no neighbourhood is uniformly best. Capacities are shares of the
    resident population (``capacity_units = "share"``).
    """
    out = []
    denom = max(count - 1, 1)

    def grid(i: int, mult: int) -> float:
        return ((i * mult) % count) / denom if count > 1 else 0.5

    for i in range(count):
        supp = ModeVector(
            round(0.30 + 0.40 * grid(i, 1), 3),
            round(0.20 + 0.60 * grid(i, 7), 3),
            round(0.30 + 0.40 * grid(i, 13), 3),
            round(0.75 + 0.25 * grid(i, 3), 3),
        )
        cap = ModeVector(1.0, 1.0, 0.4, 0.6)
        out.append(NeighbourhoodSpec(f"N{i:02d}", supp, cap))
    return tuple(out)


@dataclass(frozen=True)
class ScenarioConfig:
    agent_count: int = 111_166
    neighbourhood_count: int = 20
    total_days: int = 1825
    intervention_day: int = 365
    burn_in_days: int = 365
    master_seed: int = 42
    network_replicates: int = 200
    subcultures: tuple[Subculture, ...] = field(default_factory=default_subcultures)
    weather: WeatherSpec = field(default_factory=WeatherSpec)
    distance_cost: Mapping[CommuteCategory, ModeVector] = field(default_factory=default_distance_cost)
    neighbourhoods: tuple[NeighbourhoodSpec, ...] = field(default_factory=default_neighbourhoods)
    capacity_units: str = "share"
    intervention: InterventionSpec = field(default_factory=InterventionSpec)
    network: NetworkParams = field(default_factory=NetworkParams)
    cost_mode: str = "interpolated"
    tie_break: tuple[TransportMode, ...] = MODES
    moving_average_window: int = 14
    population: PopulationSpec = field(default_factory=PopulationSpec)

    def to_dict(self) -> dict:
        return {
            "agent_count": self.agent_count,
            "neighbourhood_count": self.neighbourhood_count,
            "total_days": self.total_days,
            "intervention_day": self.intervention_day,
            "burn_in_days": self.burn_in_days,
            "master_seed": self.master_seed,
            "network_replicates": self.network_replicates,
            "subcultures": [s.to_dict() for s in self.subcultures],
            "weather": self.weather.to_dict(),
            "distance_cost": {c.key: self.distance_cost[c].to_dict() for c in CommuteCategory},
            "neighbourhoods": [n.to_dict() for n in self.neighbourhoods],
            "capacity_units": self.capacity_units,
            "intervention": self.intervention.to_dict(),
            "network": self.network.to_dict(),
            "cost_mode": self.cost_mode,
            "tie_break": [m.key for m in self.tie_break],
            "moving_average_window": self.moving_average_window,
            "population": self.population.to_dict(),
        }

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "ScenarioConfig":
        base = cls()
        _check_keys(data, base.to_dict(), "")
        kw: dict[str, Any] = {}
        for key in (
            "agent_count",
            "neighbourhood_count",
            "total_days",
            "intervention_day",
            "burn_in_days",
            "master_seed",
            "network_replicates",
            "moving_average_window",
        ):
            if key in data:
                value = data[key]
                if isinstance(value, bool) or not isinstance(value, (int, float)) or value != int(value):
                    raise ConfigError(f"{key}: expected an integer, got {value!r}")
                kw[key] = int(value)
        for key in ("capacity_units", "cost_mode"):
            if key in data:
                kw[key] = str(data[key])
        if "subcultures" in data:
            kw["subcultures"] = tuple(
                Subculture.from_dict(s, f"subcultures[{i}]") for i, s in enumerate(data["subcultures"])
            )
        if "weather" in data:
            kw["weather"] = WeatherSpec.from_dict(data["weather"])
        if "distance_cost" in data:
            dc = data["distance_cost"]
            _check_keys(dc, [c.key for c in CommuteCategory], "distance_cost")
            missing = [c.key for c in CommuteCategory if c.key not in dc]
            if missing:
                raise ConfigError(f"distance_cost: missing {missing}")
            kw["distance_cost"] = {c: _mode_vector(dc[c.key], f"distance_cost.{c.key}") for c in CommuteCategory}
        if "neighbourhoods" in data:
            kw["neighbourhoods"] = tuple(
                NeighbourhoodSpec.from_dict(n, f"neighbourhoods[{i}]") for i, n in enumerate(data["neighbourhoods"])
            )
        elif "neighbourhood_count" in kw:
            kw["neighbourhoods"] = default_neighbourhoods(kw["neighbourhood_count"])
        if "intervention" in data:
            kw["intervention"] = InterventionSpec.from_dict(data["intervention"])
        elif "intervention_day" in kw:
            kw["intervention"] = replace(base.intervention, start_day=kw["intervention_day"])
        if "network" in data:
            kw["network"] = NetworkParams.from_dict(data["network"])
        if "tie_break" in data:
            try:
                kw["tie_break"] = tuple(TransportMode.parse(m) for m in data["tie_break"])
            except ValueError as exc:
                raise ConfigError(f"tie_break: {exc}") from None
        if "population" in data:
            kw["population"] = PopulationSpec.from_dict(data["population"])
        return replace(base, **kw)

    def with_overrides(self, **kwargs) -> "ScenarioConfig":
        """Copy with top-level fields replaced; keeps the intervention start in sync."""
        cfg = replace(self, **kwargs)
        if "intervention_day" in kwargs and "intervention" not in kwargs:
            cfg = replace(cfg, intervention=replace(cfg.intervention, start_day=cfg.intervention_day))
        if "neighbourhood_count" in kwargs and "neighbourhoods" not in kwargs:
            cfg = replace(cfg, neighbourhoods=default_neighbourhoods(cfg.neighbourhood_count))
        return cfg


def default_config() -> ScenarioConfig:
    return ScenarioConfig()


def dumps_config(cfg: ScenarioConfig) -> str:
    return json.dumps(cfg.to_dict(), indent=2) + "\n"


def config_hash(cfg: ScenarioConfig) -> str:
    return hashlib.sha256(dumps_config(cfg).encode()).hexdigest()


def loads_config(text: str) -> ScenarioConfig:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON: {exc}") from None
    return ScenarioConfig.from_dict(data)


def load_config(path: str | Path) -> ScenarioConfig:
    """Read a JSON config file. Raises ``FileNotFoundError`` or :class:`ConfigError`."""
    return loads_config(Path(path).read_text())


@dataclass
class ValidationReport:
    violations: list[str] = field(default_factory=list)

    @property
    def is_valid(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.is_valid

    def __iter__(self):
        return iter(self.violations)

    def __len__(self) -> int:
        return len(self.violations)


def _in_unit(v: float) -> bool:
    return 0.0 <= v <= 1.0


def validate_config(cfg: ScenarioConfig) -> ValidationReport:
    """Check every invariant of ``cfg``; never raises, never mutates.

    Returns
    -------
    ValidationReport
        Empty (truthy) when the configuration is valid.
    """
    v: list[str] = []
    if cfg.agent_count <= 0:
        v.append(f"agent_count must be positive, got {cfg.agent_count}")
    if cfg.neighbourhood_count <= 0:
        v.append(f"neighbourhood_count must be positive, got {cfg.neighbourhood_count}")
    if len(cfg.neighbourhoods) != cfg.neighbourhood_count:
        v.append(
            f"neighbourhoods lists {len(cfg.neighbourhoods)} entries but neighbourhood_count is "
            f"{cfg.neighbourhood_count}"
        )
    if cfg.total_days <= 0:
        v.append(f"total_days must be positive, got {cfg.total_days}")
    if cfg.intervention_day < 0:
        v.append(f"intervention_day must be non-negative, got {cfg.intervention_day}")
    if cfg.intervention_day >= cfg.total_days:
        v.append(
            f"intervention after end: intervention_day {cfg.intervention_day} >= total_days {cfg.total_days}"
        )
    if cfg.burn_in_days < 0:
        v.append("burn_in_days must be non-negative")
    if cfg.network_replicates <= 0:
        v.append("network_replicates must be positive")
    if not 0 <= cfg.master_seed < 2**64:
        v.append("master_seed must be a 64-bit unsigned integer")

    if not cfg.subcultures:
        v.append("at least one subculture is required")
    ids = [s.id for s in cfg.subcultures]
    if len(set(ids)) != len(ids):
        v.append("subculture ids must be unique")
    for s in cfg.subcultures:
        for m in MODES:
            if not _in_unit(s.desirability[m]):
                v.append(f"subculture {s.id}: desirability.{m.key} = {s.desirability[m]} outside [0,1]")

    for i, row in enumerate(cfg.weather.transition):
        if any(not math.isfinite(x) or x < 0 for x in row):
            v.append(f"weather.transition row {i} has negative or non-finite entries")
        if abs(sum(row) - 1.0) > 1e-12:
            v.append(f"weather.transition row not stochastic: row {i} sums to {sum(row)!r}")
    for w, vec in cfg.weather.modifier.items():
        for m in MODES:
            if not (vec[m] >= 0 and math.isfinite(vec[m])):
                v.append(f"weather.modifier.{w.key}.{m.key} must be in [0, inf)")
    if cfg.weather.threshold_mm < 0:
        v.append("weather.threshold_mm must be non-negative")

    for c, vec in cfg.distance_cost.items():
        for m in MODES:
            if not _in_unit(vec[m]):
                v.append(f"distance_cost.{c.key}.{m.key} = {vec[m]} outside [0,1]")

    nids = [n.id for n in cfg.neighbourhoods]
    if len(set(nids)) != len(nids):
        v.append("neighbourhood ids must be unique")
    for n in cfg.neighbourhoods:
        for m in MODES:
            if not _in_unit(n.supportiveness[m]):
                v.append(f"neighbourhood {n.id}: supportiveness.{m.key} = {n.supportiveness[m]} outside [0,1]")
            if not (n.capacity[m] >= 0 and math.isfinite(n.capacity[m])):
                v.append(f"neighbourhood {n.id}: capacity.{m.key} = {n.capacity[m]} must be >= 0")
    if cfg.capacity_units not in CAPACITY_UNITS:
        v.append(f"capacity_units must be one of {CAPACITY_UNITS}")

    iv = cfg.intervention
    if iv.kind not in INTERVENTION_KINDS:
        v.append(f"intervention.kind must be one of {INTERVENTION_KINDS}")
    if not 0 <= iv.weekday <= 6:
        v.append(f"intervention.weekday must be in 0..6, got {iv.weekday}")
    if iv.start_day != cfg.intervention_day:
        v.append(
            f"intervention.start_day {iv.start_day} differs from intervention_day {cfg.intervention_day}"
        )
    if iv.banned_mode in (TransportMode.WALK, TransportMode.PUBLIC_TRANSPORT):
        v.append("intervention.banned_mode must not be walk or public_transport (always-available modes)")

    net = cfg.network
    if net.k < 2 or net.k % 2:
        v.append(f"network.k must be an even integer >= 2, got {net.k}")
    if cfg.agent_count > 0 and not cfg.agent_count > net.k:
        v.append(f"agent_count must exceed network.k ({net.k})")
    if not 0.0 <= net.beta <= 1.0:
        v.append(f"network.beta must be in [0,1], got {net.beta}")
    if not 1 <= net.m <= net.m0:
        v.append(f"network requires 1 <= m <= m0, got m={net.m}, m0={net.m0}")
    if net.neighbour_scope not in NEIGHBOUR_SCOPES:
        v.append(f"network.neighbour_scope must be one of {NEIGHBOUR_SCOPES}")
    if net.regenerate not in REGENERATE:
        v.append(f"network.regenerate must be one of {REGENERATE}")

    if cfg.cost_mode not in COST_MODES:
        v.append(f"cost_mode must be one of {COST_MODES}")
    if sorted(cfg.tie_break) != list(MODES):
        v.append("tie_break must be a permutation of the four modes")
    if cfg.moving_average_window <= 0:
        v.append("moving_average_window must be positive")

    pop = cfg.population
    shares = [pop.category_shares[c] for c in CommuteCategory]
    if any(s < 0 for s in shares) or not sum(shares) > 0:
        v.append("population.category_shares must be non-negative with a positive sum")
    for c, vec in pop.modal_split.items():
        if any(x < 0 for x in vec) or not vec.sum() > 0:
            v.append(f"population.modal_split.{c.key} must be non-negative with a positive sum")
        if vec[TransportMode.WALK] <= 0 and vec[TransportMode.PUBLIC_TRANSPORT] <= 0:
            v.append(f"population.modal_split.{c.key} gives no always-available mode")
    for m, spec in pop.distance.items():
        if spec.kind == "lognormal":
            if not spec.sigma > 0:
                v.append(f"population.distance.{m.key}.sigma must be positive")
        else:
            if not (len(spec.weights) == len(spec.means) == len(spec.sds) >= 1):
                v.append(f"population.distance.{m.key}: mixture arrays must be non-empty and aligned")
            elif any(w < 0 for w in spec.weights) or not sum(spec.weights) > 0 or any(s <= 0 for s in spec.sds):
                v.append(f"population.distance.{m.key}: invalid mixture weights or sds")
    if not pop.ipf_tol > 0:
        v.append("population.ipf_tol must be positive")
    if pop.ipf_max_iter <= 0:
        v.append("population.ipf_max_iter must be positive")
    return ValidationReport(v)
