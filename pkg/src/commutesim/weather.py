"""Two-state (Wet/Dry) Markov weather."""

from __future__ import annotations

import csv
from pathlib import Path

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .core import Weather

__all__ = [
    "label_wet_days",
    "estimate_transitions",
    "generate_sequence",
    "stationary_distribution",
    "MarkovWeather",
    "read_rainfall",
    "write_sequence",
    "read_sequence",
]


def label_wet_days(daily_rain_mm, threshold_mm: float = 4.4) -> np.ndarray:
    """Weather codes per day: Wet iff rain strictly exceeds the threshold."""
    rain = np.asarray(daily_rain_mm, dtype=float)
    return np.where(rain > threshold_mm, Weather.WET, Weather.DRY).astype(np.int8)


def transition_counts(states) -> np.ndarray:
    s = np.asarray(states, dtype=np.int64)
    counts = np.zeros((2, 2))
    np.add.at(counts, (s[:-1], s[1:]), 1)
    return counts


def estimate_transitions(daily_rain_mm, threshold_mm: float = 4.4) -> np.ndarray:
    """Empirical Wet/Dry transition matrix from a daily rainfall series.

    Rows and columns are in ``Weather`` order (wet, dry). A row whose state
    never occurs before the last day gets add-one smoothing, i.e. becomes
    uniform; observed rows are plain frequencies.
    """
    rain = np.asarray(daily_rain_mm, dtype=float)
    if rain.size == 0:
        raise ValueError("rainfall series is empty")
    if rain.size < 2:
        raise ValueError("need at least two days of rainfall to count transitions")
    counts = transition_counts(label_wet_days(rain, threshold_mm))
    totals = counts.sum(axis=1, keepdims=True)
    unobserved = totals[:, 0] == 0
    counts[unobserved] += 1.0
    return counts / counts.sum(axis=1, keepdims=True)


def stationary_distribution(matrix) -> np.ndarray:
    """Solve ``pi P = pi`` for a 2x2 row-stochastic ``P``."""
    p = np.asarray(matrix, dtype=float)
    a, b = p[0, 1], p[1, 0]
    if a + b == 0:
        raise ValueError("chain has two absorbing states; stationary law is not unique")
    return np.array([b / (a + b), a / (a + b)])


def generate_sequence(matrix, initial, days: int, rng: np.random.Generator) -> np.ndarray:
    """Simulate ``days`` states of the chain, starting from ``initial`` on day 0."""
    p = np.asarray(matrix, dtype=float)
    if p.shape != (2, 2) or np.any(p < 0) or np.any(np.abs(p.sum(axis=1) - 1) > 1e-12):
        raise ValueError("matrix must be a 2x2 row-stochastic matrix")
    if days <= 0:
        return np.zeros(0, dtype=np.int8)
    u = rng.random(days - 1)
    out = np.empty(days, dtype=np.int8)
    state = int(Weather.parse(initial))
    out[0] = state
    p_wet = p[:, Weather.WET]
    for t in range(1, days):
        state = Weather.WET if u[t - 1] < p_wet[state] else Weather.DRY
        out[t] = state
    return out


class MarkovWeather(BaseEstimator):
    """Fit a Wet/Dry chain to rainfall and sample daily sequences.

    Parameters
    ----------
    threshold_mm : float
        Days with rain strictly above this are Wet.
    """

    def __init__(self, threshold_mm: float = 4.4):
        self.threshold_mm = threshold_mm

    def fit(self, X, y=None):
        self.transition_matrix_ = estimate_transitions(np.ravel(X), self.threshold_mm)
        self.stationary_ = stationary_distribution(self.transition_matrix_)
        return self

    def sample(self, days: int, initial=Weather.DRY, rng: np.random.Generator | None = None) -> np.ndarray:
        check_is_fitted(self, "transition_matrix_")
        if rng is None:
            raise ValueError("pass a generator from derive_rng_stream")
        return generate_sequence(self.transition_matrix_, initial, days, rng)


def read_rainfall(path: str | Path) -> np.ndarray:
    """Rainfall series from a two-column (date, mm) delimited file with a header."""
    with open(path, newline="") as fh:
        sample = fh.read(2048)
        fh.seek(0)
        dialect = csv.Sniffer().sniff(sample, delimiters=",;\t ")
        rows = list(csv.reader(fh, dialect))
    if not rows:
        raise ValueError(f"{path}: empty rainfall file")
    body = rows[1:] if not _is_number(rows[0][-1]) else rows
    return np.array([float(r[1]) for r in body if r], dtype=float)


def _is_number(text: str) -> bool:
    try:
        float(text)
    except ValueError:
        return False
    return True


def write_sequence(seq, path: str | Path) -> None:
    lines = ["day,weather"] + [f"{d},{Weather(int(w)).key}" for d, w in enumerate(seq)]
    Path(path).write_text("\n".join(lines) + "\n")


def read_sequence(path: str | Path) -> np.ndarray:
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    return np.array([Weather.parse(r["weather"]) for r in rows], dtype=np.int8)
