"""Tour of the benchmark suite and the violation measure.

Every problem is a box-bounded minimization with optional inequality
(satisfied when <= 0) and equality (satisfied within a tolerance)
constraints.  The total violation phi sums how far each constraint is
missed; a point is feasible exactly when phi is zero.
"""

import numpy as np

from ppsde import SUITE_IDS, evaluate, make_suite_problem, overall_violation

DIM = 5

print("suite at dimension", DIM)
print()
for pid in SUITE_IDS:
    prob = make_suite_problem(pid, DIM)
    ev = evaluate(prob, prob.known_optimizer)
    print(f"{prob.name}")
    print(f"  inequalities={len(prob.inequalities)} equalities={len(prob.equalities)}")
    print(f"  known optimum {prob.known_optimum:.6g} at {np.round(prob.known_optimizer, 3)}")
    print(f"  evaluated there: f={ev.f:.6g} phi={ev.phi:.3g} "
          f"feasible={ev.phi == 0.0}")
    print()

print("how phi is built, on the equality problem")
prob = make_suite_problem("P3", DIM)
for x in (prob.known_optimizer, np.zeros(DIM), np.full(DIM, 1.0)):
    ev = evaluate(prob, x)
    print(f"  x={np.round(x, 3)}  f={ev.f:.4g}  h={ev.h_values}  phi={ev.phi:.4g}")
print()
print("the tolerance absorbs tiny equality residuals:")
print("  |h| = 5e-5 with sigma = 1e-4 ->",
      overall_violation(np.empty(0), np.array([5e-5]), sigma=1e-4))
print("  |h| = 3e-4 with sigma = 1e-4 ->",
      overall_violation(np.empty(0), np.array([3e-4]), sigma=1e-4))

print()
print("the disconnected problem has two feasible islands:")
prob = make_suite_problem("P4", DIM)
for label, x in (("island around 0", np.zeros(DIM)),
                 ("island around 2", np.full(DIM, 2.0)),
                 ("the gap between", np.full(DIM, 1.0))):
    ev = evaluate(prob, x)
    print(f"  {label}: f={ev.f:.4g} phi={ev.phi:.4g}")
