"""Constrained differential evolution with a push-pull phase switch.

One generation proceeds as follows.  The population is sorted
feasibility-first and split into a top and a bottom part.  Every top member
generates three trials, one per strategy with independently sampled control
parameters; the best of the three under the current phase's comparison rule
is kept and its strategy credited with a win.  Every bottom member generates
a single trial with a strategy drawn from the windowed win rates.  All
replacements are one-to-one under the phase rule: constraint-blind while
pushing, violation-relaxed while pulling.  Successful control parameters,
weighted by how much they improved the deciding criterion, are folded into
the per-strategy memories at the end of the generation.

The phase switch is one-way: once the best objective stagnates over a
learning period, the search leaves the push phase and pulls the population
back to feasibility under a relaxation level that decays to zero.

Two ablation baselines share the identical loop: ``sf-de`` applies
feasibility-first comparison everywhere for the whole run, and ``eps-de``
applies the relaxed rule from generation 0 with its schedule seeded from the
initial population.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, replace

import numpy as np

from .de import (
    STRATEGIES,
    ParameterMemory,
    Strategy,
    StrategyStats,
    current_to_pbest_batch,
    current_to_rand_batch,
    pbest_pool_size,
    rand_1_bin_batch,
    select_strategies,
)
from .phases import PULL, PUSH, EpsilonSchedule, PhaseTracker
from .problems import Evaluation, Individual, evaluate_many
from .selection import (
    pull_accept_mask,
    push_accept_mask,
    sf_accept_mask,
    sf_best_index,
    sf_better_mask,
    sf_order,
)

__all__ = [
    "ALGORITHMS",
    "RunConfig",
    "RunResult",
    "RunTrace",
    "best_so_far",
    "run",
    "run_baseline",
    "run_ppsde",
]

ALGORITHMS = ("pps-de", "sf-de", "eps-de")

_SF_MODE = "sf"


@dataclass(frozen=True)
class RunConfig:
    """Algorithm selection and every tunable of a single run.

    ``n_pop``, ``top_size`` and ``max_fes`` default to five times the
    dimension, half the population and 20000 evaluations per dimension when
    left as None.  ``sigma`` overrides the problem's equality tolerance when
    set.  ``eps_initial`` overrides the violation-quantile start level of
    the pull schedule when set.
    """

    algorithm: str = "pps-de"
    seed: int = 0
    n_pop: int | None = None
    top_size: int | None = None
    max_fes: int | None = None
    learning_period: int = 25
    p_fraction: float = 0.05
    memory_length: int = 5
    sigma: float | None = None
    switch_threshold: float = 1e-3
    switch_delta: float = 1e-6
    eps_initial: float | None = None
    eps_quantile: float = 0.95
    eps_shrink: float = 0.1
    eps_feasible_trigger: float = 0.95
    eps_decay_power: float = 2.0
    eps_cutoff_fraction: float = 0.9


@dataclass(frozen=True)
class RunTrace:
    """Per-generation record of one run.

    ``best_f``/``best_phi`` follow the retained feasibility-first best;
    ``pop_min_f`` is the population's raw objective minimum, the quantity
    the phase switch watches.  ``sr`` holds the strategy rates used for the
    bottom picks, ``wins`` the top win counts, ``bottom_strategies`` the
    bottom pick counts, each with one column per strategy.
    """

    generation: np.ndarray
    fes: np.ndarray
    best_f: np.ndarray
    best_phi: np.ndarray
    phase: np.ndarray
    eps: np.ndarray
    sr: np.ndarray
    pop_min_f: np.ndarray
    feasible_ratio: np.ndarray
    wins: np.ndarray
    bottom_strategies: np.ndarray
    rate: np.ndarray


@dataclass(frozen=True)
class RunResult:
    best: Individual
    trace: RunTrace
    final_fes: int
    generations: int
    switch_generation: int | None
    wall_time: float
    config: RunConfig
    problem_name: str


def best_so_far(population, incumbent=None):
    """Feasibility-first minimum of a population, held against an incumbent.

    Ties keep the incumbent.
    """
    if len(population) == 0:
        raise ValueError("population is empty")
    f = np.array([ind.f for ind in population])
    phi = np.array([ind.phi for ind in population])
    candidate = population[sf_best_index(f, phi)]
    if incumbent is not None and not bool(
        sf_better_mask(candidate.phi, candidate.f, incumbent.phi, incumbent.f)
    ):
        return incumbent
    return candidate


def _resolve(problem, config):
    if config.algorithm not in ALGORITHMS:
        raise ValueError(f"unknown algorithm {config.algorithm!r}; choose from {ALGORITHMS}")
    n = config.n_pop if config.n_pop is not None else 5 * problem.dim
    t = config.top_size if config.top_size is not None else n // 2
    fes = config.max_fes if config.max_fes is not None else 20000 * problem.dim
    if n < 4:
        raise ValueError("population size must be >= 4")
    if not 4 <= t <= n:
        raise ValueError("top size must satisfy 4 <= top <= population size")
    if fes < n:
        raise ValueError("evaluation budget must cover the initial population")
    if config.learning_period < 1 or config.memory_length < 1:
        raise ValueError("learning period and memory length must be >= 1")
    if not 0 < config.p_fraction <= 1:
        raise ValueError("p_fraction must lie in (0, 1]")
    return replace(config, n_pop=int(n), top_size=int(t), max_fes=int(fes))


def _accept_mask(mode, parent_phi, parent_f, trial_phi, trial_f, eps):
    if mode == PUSH:
        return push_accept_mask(parent_f, trial_f)
    if mode == PULL:
        return pull_accept_mask(parent_phi, parent_f, trial_phi, trial_f, eps)
    return sf_accept_mask(parent_phi, parent_f, trial_phi, trial_f)


def _strictly_better(mode, phi_new, f_new, phi_old, f_old, eps):
    if mode == PUSH:
        return f_new < f_old
    if mode == PULL:
        forward = pull_accept_mask(phi_old, f_old, phi_new, f_new, eps)
        backward = pull_accept_mask(phi_new, f_new, phi_old, f_old, eps)
        return forward & ~backward
    return sf_better_mask(phi_new, f_new, phi_old, f_old)


def _objective_decided(mode, parent_phi, trial_phi, eps):
    if mode == PUSH:
        return np.ones(np.shape(trial_phi), dtype=bool)
    if mode == PULL:
        return ((trial_phi <= eps) & (parent_phi <= eps)) | (trial_phi == parent_phi)
    return (parent_phi == 0.0) & (trial_phi == 0.0)


def run(problem, config, *, force_win_strategy=None):
    """Run the configured algorithm on a problem and return a RunResult.

    ``force_win_strategy`` is a diagnostics hook: when set to a strategy
    index, every top target's winning trial is taken from that strategy so
    the adaptation machinery can be observed under a known signal.
    """
    cfg = _resolve(problem, config)
    if cfg.sigma is not None:
        problem = problem.with_sigma(cfg.sigma)
    if force_win_strategy is not None and force_win_strategy not in (0, 1, 2):
        raise ValueError("force_win_strategy must be 0, 1 or 2")

    mode = cfg.algorithm
    started = time.perf_counter()
    rng = np.random.default_rng(cfg.seed)
    n, t, d = cfg.n_pop, cfg.top_size, problem.dim
    n_bottom = n - t
    gen_cost = 3 * t + n_bottom
    lower, upper = problem.lower, problem.upper
    cutoff = cfg.eps_cutoff_fraction * (cfg.max_fes / (2.0 * n))

    pop = rng.uniform(lower, upper, size=(n, d))
    f, g, h, phi = evaluate_many(problem, pop)
    fes = n

    memory = ParameterMemory(cfg.memory_length)
    stats = StrategyStats(window=cfg.learning_period)
    tracker = PhaseTracker(cfg.learning_period, cfg.switch_threshold, cfg.switch_delta)
    schedule = None
    pull_start = None
    if mode == "eps-de":
        schedule = EpsilonSchedule.from_violations(
            phi, cutoff=cutoff, quantile=cfg.eps_quantile, eps_initial=cfg.eps_initial,
            shrink=cfg.eps_shrink, feasible_trigger=cfg.eps_feasible_trigger,
            decay_power=cfg.eps_decay_power,
        )
        pull_start = 0

    idx = sf_best_index(f, phi)
    best_x = pop[idx].copy()
    best_f = float(f[idx])
    best_phi = float(phi[idx])
    best_g = g[idx].copy()
    best_h = h[idx].copy()

    rows = []
    generation = 0
    while fes + gen_cost <= cfg.max_fes:
        feasible_ratio = float(np.mean(phi == 0.0))
        if mode == "sf-de":
            comparator, eps = _SF_MODE, math.nan
        elif mode == "eps-de":
            comparator, eps = PULL, schedule.level(generation, feasible_ratio)
        elif tracker.phase == PULL:
            comparator, eps = PULL, schedule.level(generation - pull_start, feasible_ratio)
        else:
            comparator, eps = PUSH, math.inf

        order = sf_order(f, phi)
        pop, f, phi, g, h = pop[order], f[order], phi[order], g[order], h[order]
        pool = pbest_pool_size(n, cfg.p_fraction)
        top_idx = np.arange(t)

        trials = []
        params = []
        for s in STRATEGIES:
            fs, crs = memory.sample_parameters_many(s, t, rng)
            if s == Strategy.RAND_1_BIN:
                tx = rand_1_bin_batch(pop, top_idx, fs, crs, lower, upper, rng)
            elif s == Strategy.CURRENT_TO_PBEST:
                tx = current_to_pbest_batch(pop, top_idx, pool, fs, crs, lower, upper, rng)
            else:
                tx = current_to_rand_batch(pop, top_idx, fs, lower, upper, rng)
            trials.append(tx)
            params.append((fs, crs))

        tx_all = np.concatenate(trials)
        tf, tg, th, tphi = evaluate_many(problem, tx_all)
        fes += 3 * t
        tf = tf.reshape(3, t)
        tphi = tphi.reshape(3, t)
        tg = tg.reshape(3, t, g.shape[1])
        th = th.reshape(3, t, h.shape[1])

        ar = np.arange(t)
        if force_win_strategy is not None:
            winner = np.full(t, int(force_win_strategy))
        else:
            winner = np.zeros(t, dtype=int)
            for c in (1, 2):
                w_phi = tphi[winner, ar]
                w_f = tf[winner, ar]
                better = _strictly_better(comparator, tphi[c], tf[c], w_phi, w_f, eps)
                winner = np.where(better, c, winner)

        wins = np.bincount(winner, minlength=3)
        stats.record_generation(wins)
        sr = stats.success_rates(generation)

        best_trial_f = tf[winner, ar]
        best_trial_phi = tphi[winner, ar]
        top_accept = _accept_mask(comparator, phi[:t], f[:t], best_trial_phi, best_trial_f, eps)

        picks = select_strategies(stats, generation, n_bottom, rng)
        bottom_idx = np.arange(t, n)
        b_x = np.empty((n_bottom, d))
        b_f_param = np.empty(n_bottom)
        b_cr_param = np.empty(n_bottom)
        for s in STRATEGIES:
            chosen = picks == int(s)
            count = int(chosen.sum())
            if count == 0:
                continue
            fs, crs = memory.sample_parameters_many(s, count, rng)
            tgt = bottom_idx[chosen]
            if s == Strategy.RAND_1_BIN:
                bx = rand_1_bin_batch(pop, tgt, fs, crs, lower, upper, rng)
            elif s == Strategy.CURRENT_TO_PBEST:
                bx = current_to_pbest_batch(pop, tgt, pool, fs, crs, lower, upper, rng)
            else:
                bx = current_to_rand_batch(pop, tgt, fs, lower, upper, rng)
            b_x[chosen] = bx
            b_f_param[chosen] = fs
            b_cr_param[chosen] = crs

        b_f, b_g, b_h, b_phi = evaluate_many(problem, b_x)
        fes += n_bottom
        bottom_accept = _accept_mask(comparator, phi[t:], f[t:], b_phi, b_f, eps)

        # improvements are measured against the criterion that decided the
        # replacement, before any replacement is applied
        top_obj = _objective_decided(comparator, phi[:t], best_trial_phi, eps)
        top_delta = np.where(top_obj, np.abs(f[:t] - best_trial_f),
                             np.abs(phi[:t] - best_trial_phi))
        for i in np.nonzero(top_accept)[0]:
            s = int(winner[i])
            memory.record_success(STRATEGIES[s], params[s][0][i], params[s][1][i],
                                  top_delta[i])
        bottom_obj = _objective_decided(comparator, phi[t:], b_phi, eps)
        bottom_delta = np.where(bottom_obj, np.abs(f[t:] - b_f), np.abs(phi[t:] - b_phi))
        for i in np.nonzero(bottom_accept)[0]:
            memory.record_success(STRATEGIES[int(picks[i])], b_f_param[i], b_cr_param[i],
                                  bottom_delta[i])

        replaced = np.nonzero(top_accept)[0]
        if replaced.size:
            tx3 = tx_all.reshape(3, t, d)
            pop[replaced] = tx3[winner[replaced], replaced]
            f[replaced] = best_trial_f[replaced]
            phi[replaced] = best_trial_phi[replaced]
            g[replaced] = tg[winner[replaced], replaced]
            h[replaced] = th[winner[replaced], replaced]
        replaced = np.nonzero(bottom_accept)[0]
        if replaced.size:
            rows_idx = bottom_idx[replaced]
            pop[rows_idx] = b_x[replaced]
            f[rows_idx] = b_f[replaced]
            phi[rows_idx] = b_phi[replaced]
            g[rows_idx] = b_g[replaced]
            h[rows_idx] = b_h[replaced]

        for s in STRATEGIES:
            memory.update_memory(s)

        pop_min_f = float(f.min())
        idx = sf_best_index(f, phi)
        if bool(sf_better_mask(phi[idx], f[idx], best_phi, best_f)):
            best_x = pop[idx].copy()
            best_f = float(f[idx])
            best_phi = float(phi[idx])
            best_g = g[idx].copy()
            best_h = h[idx].copy()

        rate = math.nan
        if mode == "pps-de":
            rate = tracker.update_rate(generation, pop_min_f)
            if tracker.should_switch():
                pull_start = generation + 1
                schedule = EpsilonSchedule.from_violations(
                    phi, cutoff=cutoff, quantile=cfg.eps_quantile,
                    eps_initial=cfg.eps_initial, shrink=cfg.eps_shrink,
                    feasible_trigger=cfg.eps_feasible_trigger,
                    decay_power=cfg.eps_decay_power,
                )

        rows.append((generation, fes, best_f, best_phi, comparator, eps, sr,
                     pop_min_f, feasible_ratio, wins,
                     np.bincount(picks, minlength=3), rate))
        generation += 1

    trace = _pack_trace(rows)
    best = Individual(
        x=best_x,
        evaluation=Evaluation(f=best_f, g_values=best_g, h_values=best_h, phi=best_phi),
    )
    return RunResult(
        best=best,
        trace=trace,
        final_fes=int(fes),
        generations=generation,
        switch_generation=tracker.switch_generation if mode == "pps-de" else None,
        wall_time=time.perf_counter() - started,
        config=cfg,
        problem_name=problem.name or "problem",
    )


def _pack_trace(rows):
    if not rows:
        empty = np.array([])
        return RunTrace(
            generation=np.array([], dtype=int), fes=np.array([], dtype=int),
            best_f=empty, best_phi=empty.copy(), phase=np.array([], dtype=str),
            eps=empty.copy(), sr=np.empty((0, 3)), pop_min_f=empty.copy(),
            feasible_ratio=empty.copy(), wins=np.empty((0, 3), dtype=int),
            bottom_strategies=np.empty((0, 3), dtype=int), rate=empty.copy(),
        )
    cols = list(zip(*rows))
    return RunTrace(
        generation=np.array(cols[0], dtype=int),
        fes=np.array(cols[1], dtype=int),
        best_f=np.array(cols[2]),
        best_phi=np.array(cols[3]),
        phase=np.array(cols[4]),
        eps=np.array(cols[5]),
        sr=np.array(cols[6]),
        pop_min_f=np.array(cols[7]),
        feasible_ratio=np.array(cols[8]),
        wins=np.array(cols[9], dtype=int),
        bottom_strategies=np.array(cols[10], dtype=int),
        rate=np.array(cols[11]),
    )


def run_ppsde(problem, config):
    """Run the push-pull algorithm; the config must select it."""
    if config.algorithm != "pps-de":
        raise ValueError("config.algorithm must be 'pps-de'")
    return run(problem, config)


def run_baseline(problem, config):
    """Run one of the ablation baselines; the config must select one."""
    if config.algorithm not in ("sf-de", "eps-de"):
        raise ValueError("config.algorithm must be 'sf-de' or 'eps-de'")
    return run(problem, config)
