"""Log-space numeric helpers shared by the sampler and the evaluator.

Everything here operates on natural logs. Weight vectors handed to the
drawing helpers are unnormalized log weights; normalization always goes
through max-subtraction so that counts of any realistic magnitude cannot
overflow the exponentials.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.special import gammaln

# Up to this many factors the rising factorial is accumulated as a plain sum
# of logs, which is exact to rounding and cheaper than two log-Gamma calls.
EXACT_RISING_LIMIT = 64


def log_rising_exact(base, length: int):
    """Sum-of-logs path for log(base * (base+1) * ... * (base+length-1))."""
    base = np.asarray(base, dtype=np.float64)
    if length == 0:
        total = np.zeros(base.shape)
    else:
        total = np.log(base)
        for i in range(1, length):
            total = total + np.log(base + i)
    return total if base.ndim else float(total)


def log_rising_lgamma(base, length: int):
    """Log-Gamma difference path for the same quantity."""
    base = np.asarray(base, dtype=np.float64)
    out = gammaln(base + length) - gammaln(base)
    return out if base.ndim else float(out)


def log_rising(base, length: int):
    """log of the rising factorial base^(length) = Gamma(base+length)/Gamma(base).

    `base` is a positive scalar or ndarray (elementwise); `length` a
    non-negative int. Short runs use the exact sum of logs, long runs the
    log-Gamma difference.
    """
    if length < 0:
        raise ValueError("length must be >= 0")
    if length <= EXACT_RISING_LIMIT:
        return log_rising_exact(base, length)
    return log_rising_lgamma(base, length)


def normalize_log_weights(log_weights: np.ndarray) -> np.ndarray:
    """Return the probability vector proportional to exp(log_weights)."""
    w = np.exp(log_weights - log_weights.max())
    return w / w.sum()


def draw_from_log_weights(log_weights: np.ndarray, rng: np.random.Generator) -> int:
    """Draw an index proportionally to exp(log_weights).

    Consumes exactly one uniform from `rng`. The inverse-CDF walk over the
    max-subtracted weights keeps the draw reproducible for a given rng state.
    """
    w = np.exp(log_weights - log_weights.max())
    cum = np.cumsum(w)
    r = rng.random() * cum[-1]
    idx = int(np.searchsorted(cum, r, side="right"))
    return min(idx, len(cum) - 1)


def draw_from_two_log_weights(lw0: float, lw1: float, rng: np.random.Generator) -> int:
    """Two-outcome specialization of draw_from_log_weights (same scheme)."""
    m = lw0 if lw0 >= lw1 else lw1
    w0 = math.exp(lw0 - m)
    w1 = math.exp(lw1 - m)
    return 0 if rng.random() * (w0 + w1) < w0 else 1
