"""Watching the self-tuning machinery: strategy rates and parameter memories.

The top sub-population races three trial strategies against each other every
generation; the bottom sub-population picks strategies in proportion to
their wins over a sliding window.  Control parameters (F, CR) are sampled
around memories of recently successful values.
"""

import numpy as np

from ppsde import RunConfig, make_suite_problem, run
from ppsde.de import ParameterMemory, Strategy

prob = make_suite_problem("P5", 4)
res = run(prob, RunConfig(seed=2, max_fes=12000))
tr = res.trace

names = ("rand/1/bin", "pbest", "cur-to-rand")
print("strategy selection rates over the run (window of 25 generations)")
print(f"{'gen':>5}" + "".join(f"{n:>13}" for n in names) + f"{'wins':>16}")
for i in np.linspace(0, res.generations - 1, 10, dtype=int):
    rates = "".join(f"{tr.sr[i, j]:>13.3f}" for j in range(3))
    print(f"{tr.generation[i]:>5}{rates}       {tr.wins[i]}")

print()
print("the rates start uniform while the window warms up, then follow the")
print("windowed win shares; the bottom picks mirror them:")
late = tr.generation >= 25
shares = tr.bottom_strategies[late].sum(axis=0) / tr.bottom_strategies[late].sum()
print("  bottom pick shares after warmup:", np.round(shares, 3))
print("  mean rates after warmup:       ", np.round(tr.sr[late].mean(axis=0), 3))

print()
print("parameter memories in isolation: feed one strategy three successes")
mem = ParameterMemory(length=3)
for f, cr, delta in ((0.9, 0.1, 5.0), (0.5, 0.9, 1.0), (0.7, 0.5, 2.0)):
    mem.record_success(Strategy.RAND_1_BIN, f=f, cr=cr, delta=delta)
print("  before:", mem.f_memory[0], mem.cr_memory[0])
mem.update_memory(Strategy.RAND_1_BIN)
print("  after: ", np.round(mem.f_memory[0], 4), np.round(mem.cr_memory[0], 4))
print("  the rewritten cell leans toward the high-improvement success (F=0.9)")

rng = np.random.default_rng(0)
f, cr = mem.sample_parameters_many(Strategy.RAND_1_BIN, 5, rng)
print("  samples around the updated memories: F =", np.round(f, 3),
      " CR =", np.round(cr, 3))
