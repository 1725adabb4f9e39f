"""Scaled associated-Laguerre recurrence for displacement matrix elements.

For ``gamma = |gamma| e^{i phi}`` and ``x = |gamma|^2``

    <n+k| D(gamma) |n>   = e^{ i k phi} R_n^k(x)
    <n|   D(gamma) |n+k> = (-e^{-i phi})^k R_n^k(x)

with ``R_n^k(x) = sqrt(n!/(n+k)!) x^{k/2} e^{-x/2} L_n^k(x)``. The exponential and
power prefactors are folded into the starting value so nothing overflows for
``n`` up to a few hundred and ``x`` up to ~1400.
"""

import numpy as np
from scipy.special import gammaln


def radial_terms(x, k, n_max):
    """Yield ``R_n^k(x)`` for ``n = 0 .. n_max`` (arrays shaped like ``x``)."""
    x = np.asarray(x, dtype=float)
    r_prev = np.zeros_like(x)
    if k == 0:
        r_cur = np.exp(-0.5 * x)
    else:
        with np.errstate(divide="ignore"):
            r_cur = np.exp(0.5 * k * np.log(x) - 0.5 * x - 0.5 * gammaln(k + 1.0))
    yield r_cur
    for n in range(n_max):
        r_next = ((2 * n + 1 + k - x) * r_cur - np.sqrt(n * (n + k)) * r_prev) / np.sqrt(
            (n + 1) * (n + k + 1)
        )
        r_prev, r_cur = r_cur, r_next
        yield r_cur
