"""Anatomy of one run: phases, relaxation level and the convergence trace.

The run starts constraint-blind (push).  Once the population's best
objective stagnates over a learning period, it switches permanently to the
pull phase, where a relaxation level eps decays toward zero and drags the
population back to feasibility.
"""

import numpy as np

from ppsde import RunConfig, make_suite_problem, run

prob = make_suite_problem("P2", 3)
res = run(prob, RunConfig(seed=1, max_fes=8000))
tr = res.trace

print(f"problem {res.problem_name}, {res.generations} generations, "
      f"{res.final_fes} evaluations")
print(f"switched to pull after generation {res.switch_generation}")
print()

print(f"{'gen':>5} {'phase':>6} {'eps':>10} {'best f':>12} {'best phi':>10} "
      f"{'feas%':>6}")
shown = set(range(0, 3)) | {res.switch_generation, res.switch_generation + 1}
shown |= set(np.linspace(0, res.generations - 1, 8, dtype=int).tolist())
for i in sorted(shown):
    eps = "inf" if np.isinf(tr.eps[i]) else f"{tr.eps[i]:.4g}"
    print(f"{tr.generation[i]:>5} {tr.phase[i]:>6} {eps:>10} "
          f"{tr.best_f[i]:>12.6g} {tr.best_phi[i]:>10.3g} "
          f"{100 * tr.feasible_ratio[i]:>5.0f}%")

print()
print(f"final best: f={res.best.f:.8g} phi={res.best.phi:.3g} "
      f"(known optimum {prob.known_optimum:.8g})")
print(f"x = {np.round(res.best.x, 5)}")
