"""Gauss-quadrature assembly of the stiffness, mass, and softness forms.

Per-element Gauss-Legendre quadrature with p+1 points is exact through
polynomial degree 2p+1, so stiffness and mass entries are exact up to
round-off. The softness form needs no quadrature at all: in 1D a face is
a point and the form is a weighted sum of p-th-derivative jump products,

    s(w, v) = sum over interior faces of h^(2p-1) * [d^p w][d^p v]
            + (even p only) 2 * sum over the two boundary faces.

Assembled matrices keep their natural magnitudes; the ``scale`` field
only annotates the h-power class ("1/h" for stiffness and softness, "h"
for mass) so printed dimensionless stencils can be compared directly.
"""

import warnings
from dataclasses import dataclass, field

import numpy as np

from .eigensolve import DefinitenessError, cholesky_pivot
from .spaces import SplineSpace, build_of_space, build_standard_space
from .splines import eval_basis, pth_derivative_jump


class IndefinitenessWarning(UserWarning):
    """Softness weight at or beyond the sharp threshold."""


@dataclass(frozen=True)
class SymBandedMatrix:
    """Symmetric banded matrix stored by diagonal.

    Attributes
    ----------
    diagonals : tuple of ndarray
        ``diagonals[k]`` holds the k-th subdiagonal (length n - k);
        ``diagonals[0]`` is the main diagonal. Everything beyond
        ``half_bandwidth`` is exactly zero and not stored.
    scale : str
        Annotation of the entry magnitude class: "1/h", "h", or "1".
    """

    diagonals: tuple
    scale: str = "1"

    @property
    def n(self):
        return len(self.diagonals[0])

    @property
    def half_bandwidth(self):
        return len(self.diagonals) - 1

    def entry(self, i, j):
        k = abs(i - j)
        if k > self.half_bandwidth:
            return self.diagonals[0][0] * 0
        return self.diagonals[k][min(i, j)]

    def toarray(self):
        n = self.n
        out = np.zeros((n, n), dtype=self.diagonals[0].dtype)
        for k, diag in enumerate(self.diagonals):
            for i in range(n - k):
                out[i + k, i] = diag[i]
                out[i, i + k] = diag[i]
        return out

    def row(self, i):
        return self.toarray()[i]

    @classmethod
    def from_dense(cls, A, scale="1"):
        """Fold a (nearly) symmetric dense array into banded storage."""
        A = np.asarray(A)
        sym = (A + A.T) / 2  # exact for object (rational) entries too
        n = sym.shape[0]
        hbw = 0
        for k in range(1, n):
            if any(sym[i + k, i] != 0 for i in range(n - k)):
                hbw = k
        diagonals = tuple(np.array([sym[i + k, i] for i in range(n - k)],
                                   dtype=sym.dtype) for k in range(hbw + 1))
        return cls(diagonals, scale)


@dataclass(frozen=True)
class SoftSystem:
    """The softened generalized eigenvalue pencil on the OF space.

    A = stiffness - eta * softness, and the mass side carries the
    dimensionless weight of the printed pencil, B = mass +
    eta_b * h^2 * softness.
    """

    p: int
    N: int
    eta: float
    eta_b: float
    space: SplineSpace
    stiffness: SymBandedMatrix
    mass: SymBandedMatrix
    softness: SymBandedMatrix
    A: np.ndarray = field(repr=False)
    B: np.ndarray = field(repr=False)


def _gauss_points(h, nq):
    """Reference Gauss-Legendre rule mapped to an element of size h."""
    x, w = np.polynomial.legendre.leggauss(nq)
    return (x + 1.0) * (h / 2.0), w * (h / 2.0)


def _assemble_raw(kv, deriv):
    """Raw Gram matrix of the deriv-th derivatives, Gauss p+1 points."""
    p, N, h = kv.p, kv.N, kv.h
    raw = kv.num_raw
    A = np.zeros((raw, raw))
    offs, wts = _gauss_points(h, p + 1)
    for e in range(N):
        x0 = e * h
        block = np.zeros((p + 1, p + 1))
        for off, w in zip(offs, wts):
            be = eval_basis(kv, x0 + off, deriv)
            v = be.ders[deriv]
            block += w * np.outer(v, v)
        A[e:e + p + 1, e:e + p + 1] += block
    return A


def _assemble_softness_raw(kv):
    p, N, h = kv.p, kv.N, kv.h
    raw = kv.num_raw
    S = np.zeros((raw, raw))
    for f in range(1, N):
        j = pth_derivative_jump(kv, f)
        S += np.outer(j, j)
    if p % 2 == 0:
        for f in (0, N):
            j = pth_derivative_jump(kv, f)
            S += 2.0 * np.outer(j, j)
    return h ** (2 * p - 1) * S


def _extract(space, raw_matrix, scale):
    E = space.extraction
    return SymBandedMatrix.from_dense(E @ raw_matrix @ E.T, scale)


def assemble_stiffness(space):
    """Gram matrix of first derivatives, a(v, w) = (v', w')."""
    return _extract(space, _assemble_raw(space.kv, 1), "1/h")


def assemble_mass(space):
    """Gram matrix of values, b(v, w) = (v, w)."""
    return _extract(space, _assemble_raw(space.kv, 0), "h")


def assemble_softness(space):
    """Jump-penalty matrix of the softness form.

    Interior faces contribute h^(2p-1) times the product of the p-th
    derivative jumps; for even p the two boundary faces contribute twice
    the one-sided trace products on top.
    """
    return _extract(space, _assemble_softness_raw(space.kv), "1/h")


def build_soft_system(p, N, eta, eta_b=0.0, flavor="outlier_free"):
    """Assemble the softened pencil (A, B).

    Parameters
    ----------
    p, N : int
        Degree and element count.
    eta : float
        Softness weight, >= 0. A warning is issued at or beyond the
        sharp admissibility threshold, where A may turn indefinite.
    eta_b : float
        Mass-side softness weight, >= 0; accepted whenever the mass side
        stays positive definite.
    flavor : {"outlier_free", "standard"}
        Trial space; the plain Galerkin baseline uses "standard" with
        eta = 0.

    Returns
    -------
    SoftSystem
    """
    eta, eta_b = float(eta), float(eta_b)
    if eta < 0 or eta_b < 0:
        raise ValueError("softness weights must be nonnegative")
    from .analytic import eta_table  # deferred: analytic uses this module
    sharp = eta_table().sharp_max.get(p)
    if sharp is not None and eta >= float(sharp):
        warnings.warn(
            f"eta={eta} is at or beyond the sharp threshold {float(sharp)}"
            f" for p={p}; the stiffness side may be indefinite",
            IndefinitenessWarning, stacklevel=2)
    if flavor == "standard":
        space = build_standard_space(p, N)
    elif flavor == "outlier_free":
        space = build_of_space(p, N)
    else:
        raise ValueError(f"unknown space flavor {flavor!r}")
    K = assemble_stiffness(space)
    M = assemble_mass(space)
    S = assemble_softness(space)
    h = space.kv.h
    A = K.toarray() - eta * S.toarray()
    B = M.toarray() + (eta_b * h * h) * S.toarray()
    if eta_b > 0:
        pivot = cholesky_pivot(B)
        if pivot:
            raise DefinitenessError(pivot, "mass side lost definiteness")
    return SoftSystem(p, N, eta, eta_b, space, K, M, S, A, B)
