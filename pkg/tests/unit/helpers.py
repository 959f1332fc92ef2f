"""
Shared helpers for qfasynth unit tests
"""

import numpy as np

from qfasynth.model import QfaSpec


def random_spec(rng, p, d):
    """
    Random QfaSpec for the given modulus and size.

    Args:
        rng: numpy Generator
        p: prime modulus
        d: number of parallel automata

    Returns:
        QfaSpec with K drawn uniformly from [1, p-1]^d
    """
    return QfaSpec(p, tuple(int(k) for k in rng.integers(1, p, size=d)))


def closed_form_accept(ks, p, m):
    """(1/d sum cos(2 pi k m / p))^2, the acceptance without matrix evolution"""
    d = len(ks)
    return (sum(np.cos(2 * np.pi * k * m / p) for k in ks) / d) ** 2
