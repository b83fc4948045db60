"""Tensor-product lift of 1D spectra to 2D and 3D.

On a tensor-product space both 1D pencil matrices share eigenvectors,
so the multi-dimensional generalized eigenvalues are exactly the d-fold
sums of the 1D ones. That makes the 3D benchmark tables computable from
a single small 1D solve instead of a dense solve of order N^3.
"""

import itertools
from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class TensorSpectrum:
    """Composed spectrum with multi-indices, sorted ascending."""

    dimension: int
    one_d: np.ndarray
    values: np.ndarray
    indices: tuple = field(repr=False)  # tuple of d-tuples, 1-based


def kron_sum_spectrum(one_d, d):
    """All d-fold sums of a sorted 1D eigenvalue list.

    Parameters
    ----------
    one_d : array
        1D eigenvalues, ascending.
    d : int
        Dimension, 1..3.

    Returns
    -------
    TensorSpectrum
        Sorted ascending; equal values are ordered by lexicographic
        multi-index, so the pairing with exact eigenvalues is stable.
    """
    one_d = np.asarray(one_d, dtype=float)
    if d not in (1, 2, 3):
        raise ValueError(f"dimension must be 1, 2, or 3, got {d}")
    if np.any(np.diff(one_d) < 0):
        raise ValueError("1D eigenvalue list must be ascending")
    n = len(one_d)
    pairs = sorted(
        (float(sum(one_d[i] for i in combo)), tuple(i + 1 for i in combo))
        for combo in itertools.product(range(n), repeat=d)
    )
    values = np.array([v for v, _ in pairs])
    indices = tuple(idx for _, idx in pairs)
    return TensorSpectrum(d, one_d, values, indices)


def exact_eigenvalue(d, indices):
    """Continuum eigenvalue pi^2 * (j^2 + k^2 + ...) on the unit cube."""
    indices = tuple(int(i) for i in np.atleast_1d(indices))
    if len(indices) != d:
        raise ValueError(f"expected {d} indices, got {len(indices)}")
    if any(i < 1 for i in indices):
        raise ValueError("mode indices must be positive")
    return np.pi ** 2 * sum(i * i for i in indices)


def exact_spectrum(d, n):
    """TensorSpectrum of continuum eigenvalues with 1D modes 1..n."""
    one_d = np.pi ** 2 * np.arange(1, n + 1, dtype=float) ** 2
    return kron_sum_spectrum(one_d, d)


def kron_pencil(A, B):
    """Explicit 2D Kronecker pencil (test oracle, small orders only).

    Returns (A2, B2) with A2 = kron(A, B) + kron(B, A) and
    B2 = kron(B, B); its generalized eigenvalues are all pairwise sums
    of the 1D ones.
    """
    A = np.asarray(A, dtype=float)
    B = np.asarray(B, dtype=float)
    return np.kron(A, B) + np.kron(B, A), np.kron(B, B)
