"""Ball-level urn realization of the factor chains.

One step of the pure-death factor (experiment 1) draws from up to three
urns and can lower the state by at most two; one step of the pure-birth
factor (experiment 2) draws from a single urn and can raise it by at
most one.  The composite chain runs experiment 1 then experiment 2.

Urn compositions as (blue, red) counts, for state m with parity split
m = 2n / m = 2n + 1 and integer parameters M, N, g:

experiment 2, urn A only; blue raises the state, red keeps it:

    m = 2n:      A = (M(2n + g + 1),  M(n + 1) + 1)
    m = 2n + 1:  A = (N(2n + g + 2),  N(n + 1) + 1)

experiment 1 for m >= 2; a blue from A sends the second draw to urn B,
a red from A sends it to urn R; blue/blue lowers the state by two,
mixed colors by one, red/red keeps it:

    m = 2n:      A = (Mn,            2Mn + Mg + M + 1)
                 B = (MNn + N - M,   M(2Nn + Ng + 1))
                 R = (Nn,            2Nn + Ng + N + 1)
    m = 2n + 1:  A = (Nn,            2Nn + Ng + 2N + 1)
                 B = (MNn + M - N,   N(2Mn + Mg + M + 1))
                 R = (M(n + 1),      2Mn + Mg + 2M + 1)

experiment 1 for m = 1 uses the single urn A = (M, Mg + 2M + 1); blue
empties the urn (state 0), red keeps state 1.  State 0 is absorbing for
experiment 1 only; the composite chain still runs experiment 2 there.
The m = 1 case is not the n = 0 instance of the odd three-urn table
(urn B would get MN*0 + M - N blue balls, possibly negative).

Every draw is an integer draw against the exact ball counts, never a
floating-point probability; the exact enumeration oracle walks the same
urn compositions with Fraction branch weights.
"""

from __future__ import annotations

from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .coefficients import IntegerParameters

BLUE = "blue"
RED = "red"
COMPOSITE = "composite"

EXPERIMENTS = (1, 2, COMPOSITE)

# fixed Monte Carlo chunk so results depend on (seed, stream offset)
# only, never on thread count
CHUNK_TRIALS = 1 << 14


@dataclass(frozen=True)
class Urn:
    """One urn's exact composition at draw time."""

    name: str
    blue: int
    red: int

    def __post_init__(self) -> None:
        if self.blue < 0 or self.red < 0:
            raise ValueError(f"urn {self.name} has negative counts ({self.blue}, {self.red})")
        if self.blue + self.red < 1:
            raise ValueError(f"urn {self.name} is empty at draw time")

    @property
    def total(self) -> int:
        return self.blue + self.red


@dataclass(frozen=True)
class RngStream:
    """Splittable stream handle: (seed, stream_id) fully determines the
    draw sequence, so trials on distinct stream ids can run in parallel
    without changing any result."""

    seed: int
    stream_id: int = 0

    def __post_init__(self) -> None:
        if self.seed < 0:
            raise ValueError(f"seed must be >= 0 (got {self.seed})")
        if self.stream_id < 0:
            raise ValueError(f"stream_id must be >= 0 (got {self.stream_id})")

    def generator(self) -> np.random.Generator:
        seq = np.random.SeedSequence(entropy=self.seed, spawn_key=(self.stream_id,))
        return np.random.default_rng(seq)


@dataclass(frozen=True)
class StepOutcome:
    """Result of one experiment: end state plus the ordered draw record
    as (urn name, color) pairs."""

    experiment: int
    start_state: int
    end_state: int
    draws: tuple[tuple[str, str], ...]


@dataclass(frozen=True)
class Trajectory:
    """Sampled composite path; ``states[k]`` holds the pair (state after
    experiment 1, state after experiment 2) of step k."""

    initial_state: int
    states: tuple[tuple[int, int], ...]
    stream: RngStream

    def final_state(self) -> int:
        return self.states[-1][1] if self.states else self.initial_state


def experiment2_urn(ip: IntegerParameters, m: int) -> Urn:
    """Urn A prepared for one pure-birth step from state m."""
    if m < 0:
        raise ValueError(f"state must be >= 0 (got {m})")
    n, odd = divmod(m, 2)
    M, N, g = ip.M, ip.N, ip.gamma
    if odd:
        return Urn("A", N * (2 * n + g + 2), N * (n + 1) + 1)
    return Urn("A", M * (2 * n + g + 1), M * (n + 1) + 1)


def experiment1_urns(ip: IntegerParameters, m: int) -> tuple[Urn, ...]:
    """Urns prepared for one pure-death step from state m: empty tuple
    at the absorbing state 0, a single urn at state 1, (A, B, R) above."""
    if m < 0:
        raise ValueError(f"state must be >= 0 (got {m})")
    M, N, g = ip.M, ip.N, ip.gamma
    if m == 0:
        return ()
    if m == 1:
        return (Urn("A", M, M * g + 2 * M + 1),)
    n, odd = divmod(m, 2)
    if odd:
        return (
            Urn("A", N * n, 2 * N * n + N * g + 2 * N + 1),
            Urn("B", M * N * n + M - N, N * (2 * M * n + M * g + M + 1)),
            Urn("R", M * (n + 1), 2 * M * n + M * g + 2 * M + 1),
        )
    return (
        Urn("A", M * n, 2 * M * n + M * g + M + 1),
        Urn("B", M * N * n + N - M, M * (2 * N * n + N * g + 1)),
        Urn("R", N * n, 2 * N * n + N * g + N + 1),
    )


def _draw(urn: Urn, gen: np.random.Generator) -> str:
    # integer draw against the exact counts
    return BLUE if int(gen.integers(urn.total)) < urn.blue else RED


def experiment2_step(ip: IntegerParameters, m: int, gen: np.random.Generator) -> StepOutcome:
    """One pure-birth step; the end state is m + 1 on blue, m on red."""
    urn = experiment2_urn(ip, m)
    color = _draw(urn, gen)
    end = m + 1 if color == BLUE else m
    return StepOutcome(2, m, end, ((urn.name, color),))


def experiment1_step(ip: IntegerParameters, m: int, gen: np.random.Generator) -> StepOutcome:
    """One pure-death step; the end state drops by the number of blue
    draws (at most two).  State 0 is absorbing and draws nothing."""
    urns = experiment1_urns(ip, m)
    if not urns:
        return StepOutcome(1, 0, 0, ())
    if len(urns) == 1:
        color = _draw(urns[0], gen)
        end = 0 if color == BLUE else 1
        return StepOutcome(1, 1, end, ((urns[0].name, color),))
    urn_a, urn_b, urn_r = urns
    first = _draw(urn_a, gen)
    second_urn = urn_b if first == BLUE else urn_r
    second = _draw(second_urn, gen)
    down = (first == BLUE) + (second == BLUE)
    return StepOutcome(1, m, m - down, ((urn_a.name, first), (second_urn.name, second)))


def composite_step(
    ip: IntegerParameters, m: int, gen: np.random.Generator
) -> tuple[StepOutcome, StepOutcome]:
    """One step of the composite chain: experiment 1, then experiment 2
    from its end state."""
    first = experiment1_step(ip, m, gen)
    second = experiment2_step(ip, first.end_state, gen)
    return first, second


def run_trajectory(
    ip: IntegerParameters, initial_state: int, steps: int, stream: RngStream
) -> Trajectory:
    """Iterate the composite step, recording both sub-states per step.
    Deterministic in (stream.seed, stream.stream_id)."""
    if steps < 0:
        raise ValueError(f"steps must be >= 0 (got {steps})")
    gen = stream.generator()
    m = initial_state
    states = []
    for _ in range(steps):
        first, second = composite_step(ip, m, gen)
        states.append((first.end_state, second.end_state))
        m = second.end_state
    return Trajectory(initial_state, tuple(states), stream)


def enumerate_step_distribution(
    ip: IntegerParameters, m: int, experiment: int
) -> dict[int, Fraction]:
    """Exact end-state law of one experiment, by walking every branch of
    the draw tree and multiplying exact rational branch weights.

    This is the brute-force oracle for the closed-form coefficients: it
    must reproduce (y_m, x_m) for experiment 2 and (t_m, r_m, s_m) for
    experiment 1, which the test suite asserts exactly.
    """
    if experiment == 2:
        urn = experiment2_urn(ip, m)
        p_blue = Fraction(urn.blue, urn.total)
        return {m + 1: p_blue, m: 1 - p_blue}
    if experiment != 1:
        raise ValueError(f"experiment must be 1 or 2 (got {experiment!r})")
    urns = experiment1_urns(ip, m)
    if not urns:
        return {0: Fraction(1)}
    if len(urns) == 1:
        p_blue = Fraction(urns[0].blue, urns[0].total)
        return {0: p_blue, 1: 1 - p_blue}
    urn_a, urn_b, urn_r = urns
    dist: dict[int, Fraction] = {}
    for first_blue, second_urn in ((True, urn_b), (False, urn_r)):
        p_first = Fraction(urn_a.blue if first_blue else urn_a.red, urn_a.total)
        for second_blue in (True, False):
            p_second = Fraction(
                second_urn.blue if second_blue else second_urn.red, second_urn.total
            )
            end = m - (first_blue + second_blue)
            dist[end] = dist.get(end, Fraction(0)) + p_first * p_second
    return dist


def composite_distribution(ip: IntegerParameters, m: int) -> dict[int, Fraction]:
    """Exact one-step law of the composite chain via the chain rule over
    the two experiment laws; equals row m of the composite matrix."""
    dist: dict[int, Fraction] = {}
    for mid, p_first in enumerate_step_distribution(ip, m, 1).items():
        for end, p_second in enumerate_step_distribution(ip, mid, 2).items():
            dist[end] = dist.get(end, Fraction(0)) + p_first * p_second
    return dist


def _birth_counts(ip: IntegerParameters, states: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized urn A compositions for experiment 2, elementwise over a
    state array.  Must agree with :func:`experiment2_urn` at every state;
    the test suite pins this."""
    M, N, g = ip.M, ip.N, ip.gamma
    n = states >> 1
    scale = np.where(states & 1, N, M)
    blue = scale * (states + g + 1)
    red = scale * (n + 1) + 1
    return blue, red


def _death_counts(
    ip: IntegerParameters, states: np.ndarray, first_blue: np.ndarray | None
) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized urn compositions for experiment 1, elementwise over a
    state array: urn A when ``first_blue`` is None, otherwise urn B on
    blue lanes and urn R on red lanes.

    States with no physical draw (state 0 always; state 0 or 1 for the
    second draw) get the dummy composition (0, 1): the draw consumed for
    them is always red and never moves the state.  Must agree with
    :func:`experiment1_urns` wherever a real urn exists.
    """
    M, N, g = ip.M, ip.N, ip.gamma
    n = states >> 1
    odd = (states & 1).astype(bool)
    if first_blue is None:
        blue = np.where(odd, N * n, M * n)
        red = np.where(odd, 2 * N * n + N * g + 2 * N + 1, 2 * M * n + M * g + M + 1)
        blue = np.where(states == 1, M, blue)
        red = np.where(states == 1, M * g + 2 * M + 1, red)
        no_draw = states == 0
    else:
        b_blue = np.where(odd, M * N * n + M - N, M * N * n + N - M)
        b_red = np.where(odd, N * (2 * M * n + M * g + M + 1), M * (2 * N * n + N * g + 1))
        r_blue = np.where(odd, M * (n + 1), N * n)
        r_red = np.where(odd, 2 * M * n + M * g + 2 * M + 1, 2 * N * n + N * g + N + 1)
        blue = np.where(first_blue, b_blue, r_blue)
        red = np.where(first_blue, b_red, r_red)
        no_draw = states < 2
    return np.where(no_draw, 0, blue), np.where(no_draw, 1, red)


def _advance(
    ip: IntegerParameters, states: np.ndarray, experiment: int, gen: np.random.Generator
) -> np.ndarray:
    """Vectorized one-experiment step of a whole state array.  Every lane
    consumes a fixed number of draws (dummy draws at drawless states), so
    the generator consumption depends only on the array length."""
    if experiment == 2:
        blue, red = _birth_counts(ip, states)
        up = gen.integers(0, blue + red) < blue
        return states + up
    blue, red = _death_counts(ip, states, None)
    first_blue = gen.integers(0, blue + red) < blue
    blue, red = _death_counts(ip, states, first_blue)
    second_blue = gen.integers(0, blue + red) < blue
    down = np.where(
        states >= 2,
        first_blue.astype(np.int64) + second_blue.astype(np.int64),
        np.where(states == 1, first_blue, 0),
    )
    return states - down


def _chunk_counts(
    ip: IntegerParameters,
    initial_state: int,
    steps: int,
    experiment,
    stream: RngStream,
    count: int,
) -> Counter:
    gen = stream.generator()
    states = np.full(count, initial_state, dtype=np.int64)
    for _ in range(steps):
        if experiment == COMPOSITE:
            states = _advance(ip, states, 1, gen)
            states = _advance(ip, states, 2, gen)
        else:
            states = _advance(ip, states, experiment, gen)
    values, counts = np.unique(states, return_counts=True)
    return Counter(dict(zip(values.tolist(), counts.tolist())))


def sample_endpoints(
    ip: IntegerParameters,
    initial_state: int,
    experiment,
    trials: int,
    seed: int,
    *,
    steps: int = 1,
    stream_offset: int = 0,
    threads: int = 1,
) -> Counter:
    """Monte Carlo end-state counts over independent trials.

    Trials are partitioned into fixed-size chunks and chunk i draws from
    ``RngStream(seed, stream_offset + i)``, so the counts depend only on
    (seed, stream_offset), never on the thread count.  Aggregation sums
    counts and is order-independent.

    Faster than looping the per-step functions: draws are vectorized per
    chunk against the same exact ball counts.  The per-trial draw
    sequence therefore differs from the scalar step functions; the
    end-state distribution is identical.
    """
    if experiment not in EXPERIMENTS:
        raise ValueError(f"experiment must be one of {EXPERIMENTS} (got {experiment!r})")
    if trials < 0:
        raise ValueError(f"trials must be >= 0 (got {trials})")
    chunks = []
    remaining = trials
    index = 0
    while remaining > 0:
        count = min(CHUNK_TRIALS, remaining)
        chunks.append((index, count))
        remaining -= count
        index += 1

    def run(chunk: tuple[int, int]) -> Counter:
        chunk_index, count = chunk
        stream = RngStream(seed, stream_offset + chunk_index)
        return _chunk_counts(ip, initial_state, steps, experiment, stream, count)

    totals: Counter = Counter()
    if threads > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            for partial in pool.map(run, chunks):
                totals.update(partial)
    else:
        for chunk in chunks:
            totals.update(run(chunk))
    return totals
