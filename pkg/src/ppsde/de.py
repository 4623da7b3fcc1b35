"""Differential-evolution engine pieces: trial generation, bound repair,
success-history parameter adaptation and strategy-selection statistics.

Three trial strategies are supported.  The first mutates a random base with
one scaled difference and applies binomial crossover.  The second moves the
target toward a random member of the current elite pool plus one scaled
difference, then applies binomial crossover.  The third blends the target
with a random member using a uniform random coefficient plus one scaled
difference and uses no crossover at all.

Each strategy keeps its own circular memories of successful control
parameters.  New parameters are sampled around a randomly chosen memory
cell: the scale factor from a Cauchy distribution (resampled while
non-positive, clamped to 1 from above) and the crossover rate from a normal
distribution truncated to [0, 1].  After a generation, memory cells are
rewritten from the recorded successes using an improvement-weighted Lehmer
mean for the scale factor and an improvement-weighted arithmetic mean for
the crossover rate.
"""

from __future__ import annotations

import enum
from collections import deque

import numpy as np

__all__ = [
    "STRATEGIES",
    "ParameterMemory",
    "Strategy",
    "StrategyStats",
    "current_to_pbest_batch",
    "current_to_rand_batch",
    "generate_current_to_pbest",
    "generate_current_to_rand",
    "generate_rand_1_bin",
    "improvement_weights",
    "pbest_pool_size",
    "rand_1_bin_batch",
    "repair_bounds",
    "select_strategies",
    "select_strategy",
]


class Strategy(enum.IntEnum):
    RAND_1_BIN = 0
    CURRENT_TO_PBEST = 1
    CURRENT_TO_RAND = 2


STRATEGIES = (Strategy.RAND_1_BIN, Strategy.CURRENT_TO_PBEST, Strategy.CURRENT_TO_RAND)


# ---------------------------------------------------------------------------
# Parameter memories

def improvement_weights(deltas):
    """Normalized weights proportional to per-success improvements.

    All-zero improvements fall back to uniform weights so ties still count.
    """
    deltas = np.asarray(deltas, dtype=float)
    if deltas.size == 0:
        raise ValueError("no improvements to weight")
    if np.any(deltas < 0):
        raise ValueError("improvements must be >= 0")
    total = deltas.sum()
    if total == 0.0:
        return np.full(deltas.size, 1.0 / deltas.size)
    return deltas / total


class ParameterMemory:
    """Per-strategy circular memories of successful F and CR values.

    Every cell starts at 0.5.  Each strategy has its own write pointer that
    advances (wrapping) whenever its cells are rewritten from a non-empty
    success set.
    """

    def __init__(self, length=5):
        if length < 1:
            raise ValueError("memory length must be >= 1")
        self.length = int(length)
        n = len(STRATEGIES)
        self.f_memory = np.full((n, self.length), 0.5)
        self.cr_memory = np.full((n, self.length), 0.5)
        self.pointer = np.zeros(n, dtype=int)
        self._success_f = [[] for _ in range(n)]
        self._success_cr = [[] for _ in range(n)]
        self._success_delta = [[] for _ in range(n)]

    def sample_parameters_many(self, strategy, size, rng):
        """Sample ``size`` (F, CR) pairs for one strategy.

        Each pair shares one randomly chosen memory cell.  F is Cauchy
        around the cell with spread 0.1, redrawn while <= 0 and clamped to 1
        from above, so F is always in (0, 1].  CR is normal around the cell
        with spread 0.1, truncated into [0, 1].
        """
        cells = rng.integers(0, self.length, size=size)
        loc_f = self.f_memory[strategy, cells]
        loc_cr = self.cr_memory[strategy, cells]

        f = loc_f + 0.1 * rng.standard_cauchy(size)
        bad = f <= 0.0
        while bad.any():
            f[bad] = loc_f[bad] + 0.1 * rng.standard_cauchy(int(bad.sum()))
            bad = f <= 0.0
        f = np.minimum(f, 1.0)

        cr = np.clip(loc_cr + 0.1 * rng.standard_normal(size), 0.0, 1.0)
        return f, cr

    def sample_parameters(self, strategy, rng):
        """Sample one (F, CR) pair for a strategy."""
        f, cr = self.sample_parameters_many(strategy, 1, rng)
        return float(f[0]), float(cr[0])

    def record_success(self, strategy, f, cr, delta):
        """Record the control parameters of a replacement that actually happened."""
        if delta < 0:
            raise ValueError("improvement must be >= 0")
        self._success_f[strategy].append(float(f))
        self._success_cr[strategy].append(float(cr))
        self._success_delta[strategy].append(float(delta))

    def update_memory(self, strategy):
        """Fold this generation's successes into the strategy's memories.

        Non-empty success sets rewrite the cell at the strategy's pointer:
        the F cell with the weighted Lehmer mean, the CR cell with the
        weighted arithmetic mean.  The pointer advances only when a cell
        changed, and the success sets are always cleared.
        """
        s_f = self._success_f[strategy]
        s_cr = self._success_cr[strategy]
        changed = False
        if s_f or s_cr:
            w = improvement_weights(self._success_delta[strategy])
            if s_f:
                sf = np.asarray(s_f)
                self.f_memory[strategy, self.pointer[strategy]] = (w * sf**2).sum() / (w * sf).sum()
                changed = True
            if s_cr:
                self.cr_memory[strategy, self.pointer[strategy]] = (w * np.asarray(s_cr)).sum()
                changed = True
        if changed:
            self.pointer[strategy] = (self.pointer[strategy] + 1) % self.length
        self._success_f[strategy] = []
        self._success_cr[strategy] = []
        self._success_delta[strategy] = []


# ---------------------------------------------------------------------------
# Strategy-selection statistics

class StrategyStats:
    """Sliding-window win counts and success rates for the three strategies."""

    def __init__(self, window=25):
        if window < 1:
            raise ValueError("window must be >= 1")
        self.window = int(window)
        self._wins = deque(maxlen=self.window)

    def record_generation(self, counts):
        """Append one generation's per-strategy win counts."""
        counts = np.asarray(counts, dtype=int)
        if counts.shape != (len(STRATEGIES),) or np.any(counts < 0):
            raise ValueError("expected one non-negative count per strategy")
        self._wins.append(counts)

    def windowed_wins(self):
        """Per-strategy win totals over the window."""
        if not self._wins:
            return np.zeros(len(STRATEGIES), dtype=int)
        return np.sum(self._wins, axis=0)

    def success_rates(self, generation):
        """Per-strategy selection probabilities at the given generation.

        Uniform while the window is still warming up (generation below the
        window length) or when no wins have been recorded; otherwise each
        strategy's share of the windowed wins.
        """
        n = len(STRATEGIES)
        if generation < self.window:
            return np.full(n, 1.0 / n)
        wins = self.windowed_wins()
        total = wins.sum()
        if total == 0:
            return np.full(n, 1.0 / n)
        return wins / total


def select_strategies(stats, generation, size, rng):
    """Roulette-wheel draw of ``size`` strategy indices from the success rates."""
    rates = stats.success_rates(generation)
    edges = np.cumsum(rates)
    picks = np.searchsorted(edges, rng.random(size), side="right")
    return np.minimum(picks, len(STRATEGIES) - 1)


def select_strategy(stats, generation, rng):
    """Draw one strategy according to the current success rates."""
    return Strategy(int(select_strategies(stats, generation, 1, rng)[0]))


# ---------------------------------------------------------------------------
# Trial generation

def pbest_pool_size(n_pop, p_fraction):
    """Size of the elite pool: round half up, never below one."""
    return max(1, int(np.floor(p_fraction * n_pop + 0.5)))


def _repair(candidate, parent, lower, upper):
    # out-of-bounds coordinates move to the midpoint of the violated bound
    # and the parent, which always lies inside the box
    out = np.where(candidate < lower, 0.5 * (lower + parent), candidate)
    return np.where(out > upper, 0.5 * (upper + parent), out)


def repair_bounds(candidate, parent, problem):
    """Midpoint repair of a candidate against the problem's box bounds."""
    return _repair(np.asarray(candidate, dtype=float), np.asarray(parent, dtype=float),
                   problem.lower, problem.upper)


def _distinct_indices(n_pop, targets, count, rng):
    """Per-target random index rows, mutually distinct and distinct from the target."""
    targets = np.asarray(targets)
    idx = rng.integers(0, n_pop, size=(len(targets), count))
    while True:
        bad = (idx == targets[:, None]).any(axis=1)
        for a in range(count):
            for b in range(a):
                bad |= idx[:, a] == idx[:, b]
        if not bad.any():
            return idx
        idx[bad] = rng.integers(0, n_pop, size=(int(bad.sum()), count))


def _binomial_crossover(target, donor, cr, rng):
    m, d = target.shape
    mask = rng.random((m, d)) < cr[:, None]
    mask[np.arange(m), rng.integers(0, d, size=m)] = True  # guaranteed donor coordinate
    return np.where(mask, donor, target)


def rand_1_bin_batch(pop, targets, f, cr, lower, upper, rng):
    """Random base plus one scaled difference, binomial crossover, repair."""
    targets = np.asarray(targets)
    r = _distinct_indices(len(pop), targets, 3, rng)
    donor = pop[r[:, 0]] + f[:, None] * (pop[r[:, 1]] - pop[r[:, 2]])
    trial = _binomial_crossover(pop[targets], donor, cr, rng)
    return _repair(trial, pop[targets], lower, upper)


def current_to_pbest_batch(pop, targets, pool_size, f, cr, lower, upper, rng):
    """Move toward a random elite member plus one scaled difference.

    ``pop`` must already be sorted best-first so the elite pool is its head.
    Binomial crossover and midpoint repair follow; no archive is used.
    """
    targets = np.asarray(targets)
    pbest = rng.integers(0, pool_size, size=len(targets))
    r = _distinct_indices(len(pop), targets, 2, rng)
    x = pop[targets]
    donor = x + f[:, None] * (pop[pbest] - x) + f[:, None] * (pop[r[:, 0]] - pop[r[:, 1]])
    trial = _binomial_crossover(x, donor, cr, rng)
    return _repair(trial, x, lower, upper)


def current_to_rand_batch(pop, targets, f, lower, upper, rng):
    """Blend toward a random member plus one scaled difference; no crossover."""
    targets = np.asarray(targets)
    r = _distinct_indices(len(pop), targets, 3, rng)
    x = pop[targets]
    blend = rng.random(len(targets))
    trial = x + blend[:, None] * (pop[r[:, 0]] - x) + f[:, None] * (pop[r[:, 1]] - pop[r[:, 2]])
    return _repair(trial, x, lower, upper)


def _stacked(population):
    return np.stack([ind.x for ind in population])


def generate_rand_1_bin(population, target_index, f, cr, problem, rng):
    """Single-target form of the random-base strategy over Individuals."""
    xs = _stacked(population)
    out = rand_1_bin_batch(xs, np.array([target_index]), np.array([float(f)]),
                           np.array([float(cr)]), problem.lower, problem.upper, rng)
    return out[0]


def generate_current_to_pbest(population, target_index, f, cr, p_fraction, problem, rng):
    """Single-target form of the elite-pool strategy over Individuals.

    The elite pool is the feasibility-first head of the population.
    """
    from .selection import sort_sf

    xs = _stacked(population)
    order = sort_sf(population)
    pool = pbest_pool_size(len(population), p_fraction)
    sorted_xs = xs[order]
    pos = int(np.nonzero(order == target_index)[0][0])
    out = current_to_pbest_batch(sorted_xs, np.array([pos]), pool, np.array([float(f)]),
                                 np.array([float(cr)]), problem.lower, problem.upper, rng)
    return out[0]


def generate_current_to_rand(population, target_index, f, problem, rng):
    """Single-target form of the blend strategy over Individuals."""
    xs = _stacked(population)
    out = current_to_rand_batch(xs, np.array([target_index]), np.array([float(f)]),
                                problem.lower, problem.upper, rng)
    return out[0]
