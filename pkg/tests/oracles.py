"""
Pointwise oracles on a grid of roots of unity.

Products and applications are computed by sampling both factors on
``N``-th roots of unity, multiplying pointwise and reading coefficients back
with an inverse FFT.  ``N`` exceeds the index span of the result, so the
aliasing-free recovery is exact up to rounding.  This route shares no code
with the convolution arithmetic under test.
"""

import numpy as np


def _grid_size(lo, hi):
    return int(2 ** np.ceil(np.log2(hi - lo + 2)))


def samples(offset, coeffs, N):
    """Values ``sum_n c_n w^n`` at ``w = exp(2 pi i k / N)``, axis 0 runs over k."""
    c = np.asarray(coeffs)
    full = np.zeros((N,) + c.shape[1:], dtype=complex)
    for j in range(c.shape[0]):
        full[(offset + j) % N] += c[j]
    # sum_n c_n w_k^n is N * ifft over the index axis
    return np.fft.ifft(full, axis=0) * N


def coefficients(values, lo, hi):
    """Invert :func:`samples` for a result known to live on ``[lo, hi]``."""
    N = values.shape[0]
    full = np.fft.fft(values, axis=0) / N
    return np.stack([full[n % N] for n in range(lo, hi + 1)])


def product(F, G):
    """Oracle coefficients (offset, array) of the symbol product ``F G``."""
    lo, hi = F.n_min + G.n_min, F.n_max + G.n_max
    N = _grid_size(lo, hi)
    vals = samples(F.offset, F.coeffs, N) @ samples(G.offset, G.coeffs, N)
    return lo, coefficients(vals, lo, hi)


def apply(F, f):
    """Oracle coefficients (offset, array) of ``F f``."""
    lo, hi = F.n_min + f.n_min, F.n_max + f.n_max
    N = _grid_size(lo, hi)
    vals = np.einsum("kij,kj->ki", samples(F.offset, F.coeffs, N), samples(f.offset, f.coeffs, N))
    return lo, coefficients(vals, lo, hi)


def relative_gap(offset, coeffs, series):
    """``||oracle - series|| / max(1, ||oracle||)`` over the oracle support."""
    hi = offset + coeffs.shape[0] - 1
    got = series.window(offset, hi)
    return float(np.linalg.norm(got - coeffs) / max(1.0, np.linalg.norm(coeffs)))
