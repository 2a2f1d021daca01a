"""Reference sampling from exact transition rows, empirical-vs-exact
statistics, and evaluation of the polynomial family driven by the
composite chain's four-band recursion."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Mapping

import numpy as np
from scipy.stats import chi2

from .coefficients import LUCoefficients, Scalar, TransitionRow, reconstruct_row
from .urns import RngStream


@dataclass(frozen=True)
class EmpiricalDistribution:
    """Observed end-state counts of a repeated experiment."""

    counts: Mapping[int, int]
    total: int

    @classmethod
    def from_counts(cls, counts: Mapping[int, int]) -> "EmpiricalDistribution":
        cleaned = {int(state): int(count) for state, count in sorted(counts.items())}
        if any(count < 0 for count in cleaned.values()):
            raise ValueError("negative count")
        total = sum(cleaned.values())
        if total == 0:
            raise ValueError("empty sample")
        return cls(cleaned, total)

    def frequencies(self) -> dict[int, float]:
        return {state: count / self.total for state, count in self.counts.items()}


def _as_probabilities(dist) -> dict[int, float]:
    if isinstance(dist, EmpiricalDistribution):
        return dist.frequencies()
    if isinstance(dist, TransitionRow):
        dist = dist.probabilities()
    return {int(state): float(p) for state, p in dist.items()}


def tv_distance(first, second) -> float:
    """Total variation distance: half the L1 distance between two
    distributions over the union of their supports.  Accepts empirical
    distributions, transition rows, or plain state -> probability maps."""
    p = _as_probabilities(first)
    q = _as_probabilities(second)
    support = set(p) | set(q)
    return 0.5 * sum(abs(p.get(state, 0.0) - q.get(state, 0.0)) for state in support)


def chi_square_statistic(
    empirical: EmpiricalDistribution, exact
) -> tuple[float, int]:
    """Pearson statistic of an observed sample against an exact law,
    with dof = support size - 1 (no parameters are estimated).

    Raises on a zero expected cell and on observed mass outside the
    exact support.
    """
    expected = _as_probabilities(exact)
    if any(p <= 0.0 for p in expected.values()):
        raise ValueError("zero expected cell")
    outside = set(empirical.counts) - set(expected)
    if any(empirical.counts[state] > 0 for state in outside):
        raise ValueError(f"observed states {sorted(outside)} outside the exact support")
    statistic = 0.0
    for state, p in expected.items():
        expected_count = empirical.total * p
        observed = empirical.counts.get(state, 0)
        statistic += (observed - expected_count) ** 2 / expected_count
    return statistic, len(expected) - 1


def chi_square_threshold(dof: int, level: float = 0.999) -> float:
    """Upper quantile of the chi-square distribution used as the
    fixed-seed acceptance cut."""
    return float(chi2.ppf(level, dof))


def _cumulative(row: TransitionRow) -> tuple[list[int], np.ndarray]:
    probs = row.probabilities()
    outcomes = sorted(probs)
    return outcomes, np.cumsum([float(probs[state]) for state in outcomes])


def sample_from_row(row: TransitionRow, gen: np.random.Generator) -> int:
    """Sample one end state from an exact transition row; the reference
    sampler the urn mechanics are compared against."""
    outcomes, cumulative = _cumulative(row)
    index = int(np.searchsorted(cumulative, gen.random(), side="right"))
    return outcomes[min(index, len(outcomes) - 1)]


def sample_row_endpoints(row: TransitionRow, trials: int, stream: RngStream) -> Counter:
    """Vectorized end-state counts of repeated draws from a row."""
    outcomes, cumulative = _cumulative(row)
    gen = stream.generator()
    indices = np.searchsorted(cumulative, gen.random(trials), side="right")
    indices = np.minimum(indices, len(outcomes) - 1)
    counts = np.bincount(indices, minlength=len(outcomes))
    return Counter({state: int(count) for state, count in zip(outcomes, counts) if count})


@dataclass(frozen=True)
class PolynomialEvaluation:
    """Values q_0(x)..q_n(x) of the polynomial family attached to the
    composite chain."""

    x: Scalar
    values: tuple[Scalar, ...]


def evaluate_polynomials(c: LUCoefficients, x: Scalar, n_max: int) -> PolynomialEvaluation:
    """Evaluate q_0..q_{n_max} at x through the four-band recursion

        x q_n = d_n q_{n-2} + c_n q_{n-1} + b_n q_n + a_n q_{n+1}

    with q_0 = 1 and q_{-1} = q_{-2} = 0, solving each step for q_{n+1}.
    Exact when the coefficients and x are exact; since interior rows sum
    to 1, q_n(1) = 1 for every n.
    """
    if n_max < 0:
        raise ValueError(f"n_max must be >= 0 (got {n_max})")
    if c.n_max < max(n_max - 1, 0):
        raise ValueError(
            f"insufficient coefficients: need indices 0..{n_max - 1}, have 0..{c.n_max}"
        )
    values: list[Scalar] = [1]
    if isinstance(x, float):
        values = [1.0]
    for n in range(n_max):
        row = reconstruct_row(c, n)
        if not row.a > 0:
            raise ValueError(f"up probability a_{n} = {row.a} is not positive")
        acc = (x - row.b) * values[n]
        if n >= 1:
            acc -= row.c * values[n - 1]
        if n >= 2:
            acc -= row.d * values[n - 2]
        values.append(acc / row.a)
    return PolynomialEvaluation(x, tuple(values))
