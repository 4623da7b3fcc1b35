import numpy as np

from ppsde import Evaluation, Individual


def make_individual(f, phi, dim=3):
    """Synthetic individual with a violation consistent with one inequality."""
    g = np.array([phi]) if phi > 0 else np.array([-1.0])
    ev = Evaluation(f=float(f), g_values=g, h_values=np.empty(0), phi=float(phi))
    return Individual(x=np.zeros(dim), evaluation=ev)


def random_pairs(rng, count, feasible_share=0.5):
    """(phi, f) samples mixing exact zeros with continuous positive violations."""
    phi = np.where(rng.random(count) < feasible_share, 0.0, rng.exponential(1.0, count))
    f = rng.normal(0.0, 10.0, count)
    return phi, f
