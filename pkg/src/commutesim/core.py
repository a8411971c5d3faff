"""Shared vocabulary: transport modes, weather, commute categories and per-mode vectors."""

from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum
from typing import Iterable, Iterator, Mapping

import numpy as np

__all__ = [
    "TransportMode",
    "Weather",
    "CommuteCategory",
    "ModeVector",
    "MODES",
    "ACTIVE_MODES",
]


class TransportMode(IntEnum):
    WALK = 0
    CYCLE = 1
    PUBLIC_TRANSPORT = 2
    CAR = 3

    @property
    def key(self) -> str:
        return self.name.lower()

    @property
    def is_active(self) -> bool:
        return self in (TransportMode.WALK, TransportMode.CYCLE)

    @classmethod
    def parse(cls, value) -> "TransportMode":
        if isinstance(value, cls):
            return value
        if isinstance(value, str):
            name = value.strip().upper()
            name = "PUBLIC_TRANSPORT" if name in ("PT", "PUBLICTRANSPORT") else name
            try:
                return cls[name]
            except KeyError:
                raise ValueError(f"unknown transport mode {value!r}") from None
        return cls(int(value))


class Weather(IntEnum):
    WET = 0
    DRY = 1

    @property
    def key(self) -> str:
        return self.name.lower()

    @classmethod
    def parse(cls, value) -> "Weather":
        if isinstance(value, cls):
            return value
        if isinstance(value, str):
            try:
                return cls[value.upper()]
            except KeyError:
                raise ValueError(f"unknown weather {value!r}") from None
        return cls(int(value))


class CommuteCategory(IntEnum):
    LOCAL = 0
    CITY = 1
    BEYOND = 2

    @property
    def key(self) -> str:
        return self.name.lower()

    @classmethod
    def parse(cls, value) -> "CommuteCategory":
        if isinstance(value, cls):
            return value
        if isinstance(value, str):
            try:
                return cls[value.upper()]
            except KeyError:
                raise ValueError(f"unknown commute category {value!r}") from None
        return cls(int(value))


MODES = tuple(TransportMode)
ACTIVE_MODES = (TransportMode.WALK, TransportMode.CYCLE)


@dataclass(frozen=True)
class ModeVector:
    """One value per transport mode, in ``TransportMode`` order.

    Supports elementwise addition, scalar or pointwise multiplication, and
    conversion to and from length-4 arrays.
    """

    walk: float
    cycle: float
    public_transport: float
    car: float

    @classmethod
    def from_iterable(cls, values: Iterable[float]) -> "ModeVector":
        vals = [float(v) for v in values]
        if len(vals) != 4:
            raise ValueError(f"ModeVector needs exactly 4 values, got {len(vals)}")
        return cls(*vals)

    @classmethod
    def from_mapping(cls, mapping: Mapping[str, float]) -> "ModeVector":
        keys = {m.key for m in MODES}
        extra = set(mapping) - keys
        missing = keys - set(mapping)
        if extra or missing:
            raise ValueError(
                f"mode mapping must have exactly the keys {sorted(keys)}; "
                f"missing {sorted(missing)}, unknown {sorted(extra)}"
            )
        return cls(*(float(mapping[m.key]) for m in MODES))

    @classmethod
    def full(cls, value: float) -> "ModeVector":
        return cls(value, value, value, value)

    def to_dict(self) -> dict[str, float]:
        return {m.key: self[m] for m in MODES}

    def as_array(self) -> np.ndarray:
        return np.array([self.walk, self.cycle, self.public_transport, self.car], dtype=float)

    def __getitem__(self, mode) -> float:
        return (self.walk, self.cycle, self.public_transport, self.car)[int(TransportMode.parse(mode))]

    def __iter__(self) -> Iterator[float]:
        return iter((self.walk, self.cycle, self.public_transport, self.car))

    def __len__(self) -> int:
        return 4

    def __add__(self, other: "ModeVector") -> "ModeVector":
        if not isinstance(other, ModeVector):
            return NotImplemented
        return ModeVector(*(a + b for a, b in zip(self, other)))

    def __mul__(self, other) -> "ModeVector":
        if isinstance(other, ModeVector):
            return ModeVector(*(a * b for a, b in zip(self, other)))
        if isinstance(other, (int, float, np.floating, np.integer)):
            return ModeVector(*(a * other for a in self))
        return NotImplemented

    __rmul__ = __mul__

    def sum(self) -> float:
        return self.walk + self.cycle + self.public_transport + self.car
