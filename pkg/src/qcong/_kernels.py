"""Compiled inner loops for residue-mode series division.

Only the triangular recurrence lives here: it is inherently sequential, so
numpy cannot vectorise it, and at orders around 2e5 a pure Python loop over
the pentagonal terms of f_1 dominates every sweep.
"""

from __future__ import annotations

import numpy as np
from numba import njit

# int64 headroom: products of two residues plus accumulation must stay below 2**63.
MAX_MODULUS = 2**31 - 1


@njit(cache=True)
def _divide_lazy(x, exps, cs, unit, modulus):
    # caller guarantees len(exps) * modulus**2 < 2**62, so no per-term reduction
    n_terms = exps.shape[0]
    out = np.empty_like(x)
    for n in range(x.shape[0]):
        acc = x[n]
        for t in range(n_terms):
            e = exps[t]
            if e > n:
                break
            acc -= cs[t] * out[n - e]
        acc %= modulus
        out[n] = (acc * unit) % modulus
    return out


@njit(cache=True)
def _divide_eager(x, exps, cs, unit, modulus):
    n_terms = exps.shape[0]
    out = np.empty_like(x)
    for n in range(x.shape[0]):
        acc = x[n]
        for t in range(n_terms):
            e = exps[t]
            if e > n:
                break
            acc = (acc - cs[t] * out[n - e]) % modulus
        out[n] = (acc * unit) % modulus
    return out


def divide_mod(x: np.ndarray, exps: np.ndarray, cs: np.ndarray, unit: int, modulus: int) -> np.ndarray:
    """Solve ``d * out = x`` where ``d = c0 + sum cs[t] q^exps[t]`` and ``unit = c0^-1 mod M``.

    ``exps`` must be strictly increasing and positive; all arrays hold residues.
    """
    if len(exps) * modulus * modulus < 2**62:
        return _divide_lazy(x, exps, cs, unit, modulus)
    return _divide_eager(x, exps, cs, unit, modulus)
