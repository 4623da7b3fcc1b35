"""Pairwise selection rules for constrained minimization.

Three acceptance regimes are provided.  Feasibility-first comparison ranks
feasible points by objective, infeasible points by total violation, and
always prefers feasible to infeasible.  Push acceptance ignores constraints
entirely and replaces on objective ties or improvements.  Pull acceptance
relaxes violations up to a level ``eps``: within the relaxed region the
objective decides, at exactly equal violation the objective decides, and
otherwise the lower violation wins.

Scalar functions operate on Individual pairs.  The ``*_mask`` variants take
aligned arrays of objective and violation values and decide a whole batch at
once; the scalar forms delegate to them so there is a single source of truth
for each rule.
"""

from __future__ import annotations

import enum

import numpy as np

__all__ = [
    "Comparison",
    "pull_accept_mask",
    "pull_select",
    "push_accept_mask",
    "push_select",
    "sf_accept_mask",
    "sf_better_mask",
    "sf_best_index",
    "sf_compare",
    "sf_order",
    "sort_sf",
]


class Comparison(enum.Enum):
    FIRST_BETTER = "first-better"
    SECOND_BETTER = "second-better"
    TIE = "tie"


def sf_better_mask(phi_a, f_a, phi_b, f_b):
    """True where (phi_a, f_a) is strictly better than (phi_b, f_b).

    Feasible beats infeasible; two feasible points compare on objective, two
    infeasible points on violation.
    """
    a_feasible = np.asarray(phi_a) == 0.0
    b_feasible = np.asarray(phi_b) == 0.0
    both = np.asarray(f_a) < np.asarray(f_b)
    neither = np.asarray(phi_a) < np.asarray(phi_b)
    return np.where(
        a_feasible & b_feasible, both,
        np.where(a_feasible != b_feasible, a_feasible, neither),
    )


def sf_compare(a, b):
    """Three-way feasibility-first comparison of two Individuals."""
    if bool(sf_better_mask(a.phi, a.f, b.phi, b.f)):
        return Comparison.FIRST_BETTER
    if bool(sf_better_mask(b.phi, b.f, a.phi, a.f)):
        return Comparison.SECOND_BETTER
    return Comparison.TIE


def push_accept_mask(parent_f, trial_f):
    """Constraint-blind acceptance: the trial replaces on objective <=."""
    return np.asarray(trial_f) <= np.asarray(parent_f)


def push_select(parent, trial):
    """True when the trial replaces the parent under push acceptance."""
    return bool(push_accept_mask(parent.f, trial.f))


def pull_accept_mask(parent_phi, parent_f, trial_phi, trial_f, eps):
    """Relaxed-violation acceptance at level ``eps``.

    Checked in order: both violations within eps -> objective decides;
    exactly equal violations -> objective decides; otherwise the strictly
    smaller violation wins.
    """
    parent_phi = np.asarray(parent_phi)
    trial_phi = np.asarray(trial_phi)
    f_ok = np.asarray(trial_f) <= np.asarray(parent_f)
    both_within = (trial_phi <= eps) & (parent_phi <= eps)
    return np.where(
        both_within, f_ok,
        np.where(trial_phi == parent_phi, f_ok, trial_phi < parent_phi),
    )


def pull_select(parent, trial, eps):
    """True when the trial replaces the parent under pull acceptance."""
    if eps < 0:
        raise ValueError("eps must be >= 0")
    return bool(pull_accept_mask(parent.phi, parent.f, trial.phi, trial.f, eps))


def sf_accept_mask(parent_phi, parent_f, trial_phi, trial_f):
    """Feasibility-first acceptance: replace unless the parent is strictly better."""
    return ~sf_better_mask(parent_phi, parent_f, trial_phi, trial_f)


def sf_order(f, phi):
    """Stable feasibility-first sort permutation over aligned value arrays.

    Feasible entries come first ordered by objective, infeasible entries
    follow ordered by violation; original order breaks ties.
    """
    f = np.asarray(f)
    phi = np.asarray(phi)
    infeasible = (phi > 0.0).astype(int)
    key = np.where(infeasible.astype(bool), phi, f)
    # least-significant key first; lexsort is stable, keeping original order on ties
    return np.lexsort((np.arange(len(f)), key, infeasible))


def sort_sf(population):
    """Feasibility-first sort permutation for a sequence of Individuals."""
    f = np.array([ind.f for ind in population])
    phi = np.array([ind.phi for ind in population])
    return sf_order(f, phi)


def sf_best_index(f, phi):
    """Index of the feasibility-first minimum of aligned value arrays."""
    return int(sf_order(f, phi)[0])
