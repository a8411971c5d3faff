"""Bayesian binomial regression of active-journey counts and supporting tools.

Two models are fitted to aggregated counts ``y`` of active journeys out of
``n`` journeys, per scenario (control, car-free days) and replicate:

* model 1: ``logit(pi_j) = alpha_j``;
* model 2: ``logit(pi_jk) = alpha_j + beta_j * wednesday_k``;

with Student-t(3, 0, 1) priors on every coefficient. Posteriors are drawn
with an adaptive random-walk Metropolis sampler and summarised by the
posterior mean, the 89% highest posterior density interval and split R-hat.
Odds ratios are computed per draw and then summarised.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Mapping

import numpy as np
from scipy.special import expit, gammaln, log_expit
from sklearn.base import BaseEstimator, ClassifierMixin
from sklearn.utils.validation import check_array, check_is_fitted, check_X_y

from .rng import derive_rng_stream

__all__ = [
    "SeparationError",
    "ConvergenceError",
    "logistic_fit",
    "LogisticRegressionIRLS",
    "student_t_logpdf",
    "SamplerResult",
    "metropolis_sample",
    "hpdi",
    "equal_tailed_interval",
    "rhat",
    "AggregatedCounts",
    "aggregate_traces",
    "PosteriorSummary",
    "summarise",
    "ModelFit",
    "fit_model1",
    "fit_model2",
    "odds_ratios",
    "prior_predictive",
    "BinomialOddsModel",
]

SCENARIO_INDEX = {"control": 0, "cfd": 1}


class SeparationError(RuntimeError):
    """Logistic MLE does not exist: the outcomes are (quasi-)separated."""


class ConvergenceError(RuntimeError):
    """Posterior draws failed the R-hat gate."""


# ---------------------------------------------------------------------------
# logistic regression


def logistic_fit(X, y, max_iter: int = 100, tol: float = 1e-8, eta_limit: float = 30.0):
    """Maximum-likelihood logistic regression by iteratively reweighted least squares.

    Parameters
    ----------
    X : array-like, shape (n_samples, n_features)
        Design matrix, used as given (include a column of ones for an intercept).
    y : array-like of {0, 1}
    max_iter : int
    tol : float
        Stop once the score (gradient) norm falls below ``tol``.
    eta_limit : float
        A linear predictor beyond this magnitude is taken as divergence.

    Returns
    -------
    coef : ndarray, shape (n_features,)
    grad_norm : float
        Gradient norm at ``coef``.

    Raises
    ------
    SeparationError
        Coefficients diverge (complete or quasi-complete separation).
    ValueError
        Rank-deficient design or a single outcome class.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float).ravel()
    if X.ndim != 2 or X.shape[0] != y.size:
        raise ValueError("X must be 2-D with one row per outcome")
    if not np.all((y == 0) | (y == 1)):
        raise ValueError("outcomes must be 0 or 1")
    if y.min() == y.max():
        raise ValueError("need at least one outcome of each class")
    if np.linalg.matrix_rank(X) < X.shape[1]:
        raise ValueError("design matrix is not full column rank")
    beta = np.zeros(X.shape[1])
    for _ in range(max_iter):
        eta = X @ beta
        if np.max(np.abs(eta)) > eta_limit:
            raise SeparationError("coefficients diverge: outcomes are separated by the design")
        mu = expit(eta)
        grad = X.T @ (y - mu)
        gnorm = float(np.linalg.norm(grad))
        if gnorm < tol:
            return beta, gnorm
        w = mu * (1.0 - mu)
        hess = X.T @ (X * w[:, None])
        try:
            step = np.linalg.solve(hess, grad)
        except np.linalg.LinAlgError:
            raise SeparationError("information matrix became singular") from None
        beta = beta + step
    raise SeparationError(f"IRLS did not converge in {max_iter} iterations (gradient norm {gnorm:.3g})")


class LogisticRegressionIRLS(ClassifierMixin, BaseEstimator):
    """Unpenalised logistic regression fitted by IRLS."""

    def __init__(self, fit_intercept: bool = True, max_iter: int = 100, tol: float = 1e-8):
        self.fit_intercept = fit_intercept
        self.max_iter = max_iter
        self.tol = tol

    def _design(self, X):
        return np.column_stack([np.ones(X.shape[0]), X]) if self.fit_intercept else X

    def fit(self, X, y):
        X, y = check_X_y(X, y, ensure_min_features=0 if self.fit_intercept else 1)
        self.classes_, y_idx = np.unique(y, return_inverse=True)
        if self.classes_.size != 2:
            raise ValueError("LogisticRegressionIRLS needs exactly two classes")
        coef, self.grad_norm_ = logistic_fit(self._design(X), y_idx, self.max_iter, self.tol)
        if self.fit_intercept:
            self.intercept_, self.coef_ = float(coef[0]), coef[1:]
        else:
            self.intercept_, self.coef_ = 0.0, coef
        self.n_features_in_ = X.shape[1]
        return self

    def decision_function(self, X):
        check_is_fitted(self, "coef_")
        X = check_array(X, ensure_min_features=0 if self.fit_intercept else 1)
        return X @ self.coef_ + self.intercept_

    def predict_proba(self, X):
        p = expit(self.decision_function(X))
        return np.column_stack([1.0 - p, p])

    def predict(self, X):
        return self.classes_[(self.decision_function(X) > 0).astype(int)]


# ---------------------------------------------------------------------------
# sampler


_T3_CONST = gammaln(2.0) - gammaln(1.5) - 0.5 * math.log(3.0 * math.pi)


def student_t_logpdf(x, df: float = 3.0, loc: float = 0.0, scale: float = 1.0):
    z = (np.asarray(x, dtype=float) - loc) / scale
    if df == 3.0:
        const = _T3_CONST
    else:
        const = gammaln((df + 1) / 2) - gammaln(df / 2) - 0.5 * math.log(df * math.pi)
    return const - math.log(scale) - (df + 1) / 2 * np.log1p(z * z / df)


@dataclass
class SamplerResult:
    samples: np.ndarray  # (chains, draws, dims)
    acceptance: np.ndarray  # post-warmup acceptance rate per chain
    warmup_acceptance: np.ndarray
    proposal_scale: np.ndarray  # (chains, dims) in whitened coordinates


def _window_ends(warmup: int) -> list[int]:
    ends = sorted({int(round(f * warmup)) for f in (0.15, 0.3, 0.5, 0.75)})
    return [e for e in ends if 0 < e < warmup]


def _run_chain(
    log_posterior: Callable[[np.ndarray], float],
    init: np.ndarray,
    warmup: int,
    draws: int,
    rng: np.random.Generator,
    target: float,
):
    dims = init.size
    x = init.astype(float).copy()
    lp = float(log_posterior(x))
    if not np.isfinite(lp):
        raise ValueError("log posterior is not finite at the initial point")
    basis = np.eye(dims)
    log_scale = np.zeros(dims)
    ends = _window_ends(warmup)
    window_start = 0
    trace = np.empty((warmup, dims))
    accepted_warm = 0
    t_window = 0
    for it in range(warmup):
        for j in rng.permutation(dims):
            prop = x + math.exp(log_scale[j]) * rng.standard_normal() * basis[:, j]
            lp_prop = float(log_posterior(prop))
            accept = np.isfinite(lp_prop) and math.log(rng.random()) < lp_prop - lp
            if accept:
                x, lp = prop, lp_prop
                accepted_warm += 1
            gain = (t_window + 1) ** -0.6
            log_scale[j] += gain * ((1.0 if accept else 0.0) - target)
        t_window += 1
        trace[it] = x
        if it + 1 in ends:
            half = trace[(window_start + it + 1) // 2 : it + 1]
            if half.shape[0] > dims + 1:
                cov = np.atleast_2d(np.cov(half, rowvar=False))
                vals, vecs = np.linalg.eigh(cov)
                if np.all(np.isfinite(vals)) and vals.max() > 0:
                    vals = np.maximum(vals, vals.max() * 1e-10)
                    basis = vecs * np.sqrt(vals)
                    log_scale[:] = math.log(2.4)
                    t_window = 0
            window_start = it + 1
    if warmup > 0 and accepted_warm == 0:
        raise RuntimeError("every warm-up proposal was rejected; the posterior looks pathological")
    samples = np.empty((draws, dims))
    accepted = 0
    for it in range(draws):
        for j in rng.permutation(dims):
            prop = x + math.exp(log_scale[j]) * rng.standard_normal() * basis[:, j]
            lp_prop = float(log_posterior(prop))
            if np.isfinite(lp_prop) and math.log(rng.random()) < lp_prop - lp:
                x, lp = prop, lp_prop
                accepted += 1
        samples[it] = x
    return (
        samples,
        accepted / max(draws * dims, 1),
        accepted_warm / max(warmup * dims, 1),
        np.exp(log_scale),
    )


def metropolis_sample(
    log_posterior: Callable[[np.ndarray], float],
    dims: int,
    chains: int = 4,
    warmup: int = 1000,
    draws: int = 1000,
    rng: np.random.Generator | None = None,
    init=None,
    target_accept: float = 0.44,
) -> SamplerResult:
    """Adaptive random-walk Metropolis.

    Each iteration updates every coordinate once along the axes of a
    whitening basis. During warm-up the per-axis step sizes follow a
    Robbins-Monro rule towards ``target_accept``, and the basis is re-estimated
    from the posterior draws at 15%, 30%, 50% and 75% of warm-up. All
    adaptation is frozen after warm-up. Chains start from ``init`` (zeros by
    default) and use independent child streams of ``rng``.

    Returns
    -------
    SamplerResult
        ``samples`` has shape ``(chains, draws, dims)``.

    Raises
    ------
    RuntimeError
        A chain rejected every warm-up proposal.
    """
    if rng is None:
        raise ValueError("pass a generator from derive_rng_stream")
    if not 0.2 <= target_accept <= 0.5:
        raise ValueError("target_accept must lie in [0.2, 0.5]")
    x0 = np.zeros(dims) if init is None else np.asarray(init, dtype=float).reshape(dims)
    children = rng.spawn(chains)
    out = np.empty((chains, draws, dims))
    acc = np.empty(chains)
    wacc = np.empty(chains)
    scales = np.empty((chains, dims))
    for c in range(chains):
        out[c], acc[c], wacc[c], scales[c] = _run_chain(log_posterior, x0, warmup, draws, children[c], target_accept)
    return SamplerResult(out, acc, wacc, scales)


# ---------------------------------------------------------------------------
# summaries


def _window_size(n: int, mass: float) -> int:
    if not 0.0 < mass < 1.0:
        raise ValueError("mass must lie strictly between 0 and 1")
    # guard against 0.89 * 100 = 89.00000000000001
    return min(n, max(1, math.ceil(mass * n - 1e-9)))


def hpdi(samples, mass: float = 0.89) -> tuple[float, float]:
    """Highest posterior density interval from draws.

    The narrowest window over the sorted draws that holds ``ceil(mass * N)``
    of them; among equally narrow windows the one starting lowest wins.
    """
    x = np.sort(np.ravel(np.asarray(samples, dtype=float)))
    if x.size == 0:
        raise ValueError("no samples")
    k = _window_size(x.size, mass)
    widths = x[k - 1 :] - x[: x.size - k + 1]
    i = int(np.argmin(widths))
    return float(x[i]), float(x[i + k - 1])


def equal_tailed_interval(samples, mass: float = 0.89) -> tuple[float, float]:
    """Central window of ``ceil(mass * N)`` sorted draws (same draw count as :func:`hpdi`)."""
    x = np.sort(np.ravel(np.asarray(samples, dtype=float)))
    k = _window_size(x.size, mass)
    lo = (x.size - k) // 2
    return float(x[lo]), float(x[lo + k - 1])


def rhat(chains) -> float:
    """Split-chain potential scale reduction factor.

    Each chain is cut into two halves (the middle draw is dropped for odd
    lengths) and the classic between/within variance ratio is computed over
    the halves.
    """
    x = np.asarray(chains, dtype=float)
    if x.ndim != 2 or x.shape[0] < 2:
        raise ValueError("need a (chains, draws) array with at least two chains")
    half = x.shape[1] // 2
    if half < 2:
        raise ValueError("chains are too short to split")
    parts = np.concatenate([x[:, :half], x[:, -half:]])
    n = half
    within = parts.var(axis=1, ddof=1).mean()
    between = n * parts.mean(axis=1).var(ddof=1)
    if within == 0:
        return 1.0 if between == 0 else math.inf
    var_plus = (n - 1) / n * within + between / n
    return float(math.sqrt(var_plus / within))


@dataclass
class PosteriorSummary:
    name: str
    samples: np.ndarray  # (chains, draws)
    mean: float
    hpdi_low: float
    hpdi_high: float
    rhat: float

    def row(self) -> list:
        return [self.name, self.mean, self.hpdi_low, self.hpdi_high, self.rhat]


def summarise(name: str, draws, mass: float = 0.89) -> PosteriorSummary:
    d = np.asarray(draws, dtype=float)
    if d.ndim == 1:
        d = d[None, :]
    lo, hi = hpdi(d, mass)
    r = rhat(d) if d.shape[0] >= 2 and d.shape[1] >= 4 else float("nan")
    return PosteriorSummary(name, d, float(d.mean()), lo, hi, r)


# ---------------------------------------------------------------------------
# data


@dataclass
class AggregatedCounts:
    """Active (``y``) and total (``n``) journey counts per cell.

    ``scenario`` is 0 for control and 1 for car-free days; ``wednesday`` is
    1 for Wednesday cells, 0 otherwise (all zeros when unstratified).
    """

    scenario: np.ndarray
    replicate: np.ndarray
    wednesday: np.ndarray
    y: np.ndarray
    n: np.ndarray

    def __post_init__(self):
        self.scenario = np.asarray(self.scenario, dtype=np.int64)
        self.replicate = np.asarray(self.replicate, dtype=np.int64)
        self.wednesday = np.asarray(self.wednesday, dtype=np.int64)
        self.y = np.asarray(self.y, dtype=float)
        self.n = np.asarray(self.n, dtype=float)
        if not (self.scenario.shape == self.replicate.shape == self.wednesday.shape == self.y.shape == self.n.shape):
            raise ValueError("count arrays must be aligned")
        if np.any(self.n <= 0) or np.any(self.y < 0) or np.any(self.y > self.n):
            raise ValueError("need 0 <= y <= n and n > 0 in every cell")

    def subset(self, mask) -> "AggregatedCounts":
        mask = np.asarray(mask, bool)
        return AggregatedCounts(
            self.scenario[mask], self.replicate[mask], self.wednesday[mask], self.y[mask], self.n[mask]
        )

    def pooled(self, by_wednesday: bool) -> "AggregatedCounts":
        """Sum cells sharing (scenario, wednesday); replicate is set to -1."""
        keys = sorted({(int(s), int(w) if by_wednesday else 0) for s, w in zip(self.scenario, self.wednesday)})
        rows = []
        for s, w in keys:
            m = self.scenario == s
            if by_wednesday:
                m &= self.wednesday == w
            rows.append((s, -1, w, self.y[m].sum(), self.n[m].sum()))
        s, r, w, y, n = map(np.array, zip(*rows))
        return AggregatedCounts(s, r, w, y, n)


def aggregate_traces(traces, start_day: int, end_day: int | None = None, wednesday: int = 2) -> AggregatedCounts:
    """Sum daily traces over ``start_day <= day < end_day`` per (scenario, replicate, Wednesday?)."""
    cells: dict[tuple[int, int, int], list[float]] = {}
    for t in traces:
        if t.day < start_day or (end_day is not None and t.day >= end_day):
            continue
        key = (SCENARIO_INDEX[t.scenario], int(t.run_id), int(t.weekday == wednesday))
        acc = cells.setdefault(key, [0.0, 0.0])
        acc[0] += t.counts[0] + t.counts[1]
        acc[1] += sum(t.counts)
    if not cells:
        raise ValueError(f"no trace days in the analysis window starting at day {start_day}")
    keys = sorted(cells)
    s, r, w = (np.array(v) for v in zip(*keys))
    y = np.array([cells[k][0] for k in keys])
    n = np.array([cells[k][1] for k in keys])
    return AggregatedCounts(s, r, w, y, n)


# ---------------------------------------------------------------------------
# models


@dataclass
class ModelFit:
    model: int
    names: list[str]
    draws: np.ndarray  # (chains, draws, dims)
    summaries: list[PosteriorSummary]
    odds: dict[str, PosteriorSummary]
    sampler: SamplerResult
    converged: bool = True

    def param(self, name: str) -> np.ndarray:
        return self.draws[:, :, self.names.index(name)]

    def all_summaries(self) -> list[PosteriorSummary]:
        return [*self.summaries, *self.odds.values()]


def _binomial_log_posterior(design: np.ndarray, y: np.ndarray, n: np.ndarray):
    fails = n - y

    def log_post(theta):
        eta = design @ theta
        return float(np.dot(y, log_expit(eta)) + np.dot(fails, log_expit(-eta)) + student_t_logpdf(theta).sum())

    return log_post


def _fit(
    counts: AggregatedCounts,
    model: int,
    rng: np.random.Generator,
    chains: int,
    warmup: int,
    draws: int,
    mass: float,
) -> ModelFit:
    present = set(counts.scenario.tolist())
    if present != {0, 1}:
        raise ValueError("both scenarios required (control and cfd)")
    if model == 1:
        names = ["alpha_control", "alpha_cfd"]
        design = np.column_stack([counts.scenario == 0, counts.scenario == 1]).astype(float)
    elif model == 2:
        for s in (0, 1):
            strata = set(counts.wednesday[counts.scenario == s].tolist())
            if strata != {0, 1}:
                raise ValueError("model 2 needs Wednesday and non-Wednesday counts for both scenarios")
        c, w = counts.scenario, counts.wednesday
        names = ["alpha_control", "beta_control", "alpha_cfd", "beta_cfd"]
        design = np.column_stack([c == 0, (c == 0) & (w == 1), c == 1, (c == 1) & (w == 1)]).astype(float)
    else:
        raise ValueError("model must be 1 or 2")
    log_post = _binomial_log_posterior(design, counts.y, counts.n)
    res = metropolis_sample(log_post, len(names), chains, warmup, draws, rng)
    summaries = [summarise(nm, res.samples[:, :, i], mass) for i, nm in enumerate(names)]
    draws_by_name = {nm: res.samples[:, :, i] for i, nm in enumerate(names)}
    return ModelFit(model, names, res.samples, summaries, odds_ratios(draws_by_name, mass), res)


def fit_model1(
    counts: AggregatedCounts,
    rng: np.random.Generator,
    chains: int = 4,
    warmup: int = 1000,
    draws: int = 1000,
    mass: float = 0.89,
) -> ModelFit:
    """One logit intercept per scenario, pooling replicates and weekdays."""
    return _fit(counts, 1, rng, chains, warmup, draws, mass)


def fit_model2(
    counts: AggregatedCounts,
    rng: np.random.Generator,
    chains: int = 4,
    warmup: int = 1000,
    draws: int = 1000,
    mass: float = 0.89,
) -> ModelFit:
    """Per-scenario intercept plus Wednesday effect."""
    return _fit(counts, 2, rng, chains, warmup, draws, mass)


def odds_ratios(draws: Mapping[str, np.ndarray], mass: float = 0.89) -> dict[str, PosteriorSummary]:
    """Odds and odds ratios, transformed draw by draw and then summarised.

    Expects ``alpha_control`` and ``alpha_cfd``; ``beta_control`` and
    ``beta_cfd`` add the Wednesday contrasts.
    """
    a1 = np.asarray(draws["alpha_control"], dtype=float)
    a2 = np.asarray(draws["alpha_cfd"], dtype=float)
    if a1.shape != a2.shape:
        raise ValueError("draw arrays must be aligned")
    out: dict[str, np.ndarray] = {}
    if "beta_control" in draws:
        b1 = np.asarray(draws["beta_control"], dtype=float)
        b2 = np.asarray(draws["beta_cfd"], dtype=float)
        if b1.shape != a1.shape or b2.shape != a1.shape:
            raise ValueError("draw arrays must be aligned")
        out["odds_control_other"] = np.exp(a1)
        out["odds_cfd_other"] = np.exp(a2)
        out["or_wednesday_vs_other_control"] = np.exp(b1)
        out["or_wednesday_vs_other_cfd"] = np.exp(b2)
        out["or_cfd_vs_control_wednesday"] = np.exp((a2 + b2) - (a1 + b1))
        out["or_cfd_vs_control_other"] = np.exp(a2 - a1)
    else:
        out["odds_control"] = np.exp(a1)
        out["odds_cfd"] = np.exp(a2)
        out["or_cfd_vs_control"] = np.exp(a2 - a1)
    return {k: summarise(k, v, mass) for k, v in out.items()}


def prior_predictive(n_draws: int, rng: np.random.Generator, df: float = 3.0) -> np.ndarray:
    """Implied probabilities ``expit(alpha)`` under the Student-t prior."""
    return expit(rng.standard_t(df, size=n_draws))


class BinomialOddsModel(BaseEstimator):
    """Estimator front end for the two binomial models.

    Parameters
    ----------
    model : {1, 2}
    chains, warmup, draws : int
        Sampler settings.
    mass : float
        HPDI probability mass.
    random_state : int
        Seed for the ``mcmc`` stream.
    per_replicate : bool
        Fit each replicate separately instead of pooling them.
    rhat_threshold : float
        Convergence gate applied by :meth:`summary_rows`.
    """

    def __init__(
        self,
        model: int = 1,
        chains: int = 4,
        warmup: int = 1000,
        draws: int = 1000,
        mass: float = 0.89,
        random_state: int = 0,
        per_replicate: bool = False,
        rhat_threshold: float = 1.01,
    ):
        self.model = model
        self.chains = chains
        self.warmup = warmup
        self.draws = draws
        self.mass = mass
        self.random_state = random_state
        self.per_replicate = per_replicate
        self.rhat_threshold = rhat_threshold

    def fit(self, counts: AggregatedCounts, y=None):
        if self.model == 1:
            counts = AggregatedCounts(
                counts.scenario, counts.replicate, np.zeros_like(counts.wednesday), counts.y, counts.n
            )
        groups: list[tuple[str, AggregatedCounts]]
        if self.per_replicate:
            groups = [(f"[{r}]", counts.subset(counts.replicate == r)) for r in np.unique(counts.replicate)]
        else:
            groups = [("", counts)]
        self.fits_ = {}
        for idx, (suffix, sub) in enumerate(groups):
            rng = derive_rng_stream(self.random_state, "mcmc", idx)
            pooled = sub.pooled(by_wednesday=self.model == 2)
            self.fits_[suffix] = _fit(pooled, self.model, rng, self.chains, self.warmup, self.draws, self.mass)
        self.summaries_ = [
            PosteriorSummary(s.name + suffix, s.samples, s.mean, s.hpdi_low, s.hpdi_high, s.rhat)
            for suffix, f in self.fits_.items()
            for s in f.all_summaries()
        ]
        self.max_rhat_ = max(s.rhat for s in self.summaries_)
        self.converged_ = bool(self.max_rhat_ < self.rhat_threshold)
        return self

    def summary(self, name: str) -> PosteriorSummary:
        check_is_fitted(self, "summaries_")
        for s in self.summaries_:
            if s.name == name:
                return s
        raise KeyError(name)

    def summary_rows(self, allow_unconverged: bool = False) -> list[list]:
        check_is_fitted(self, "summaries_")
        if not self.converged_ and not allow_unconverged:
            worst = max(self.summaries_, key=lambda s: s.rhat)
            raise ConvergenceError(
                f"R-hat gate failed: {worst.name} has R-hat {worst.rhat:.4f} >= {self.rhat_threshold}"
            )
        return [s.row() for s in self.summaries_]
