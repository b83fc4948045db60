"""Trial spaces as extraction operators over raw B-splines.

Two flavors share one representation: a (dim x raw) extraction matrix
whose rows express each space basis function in raw coordinates.

* standard: drop the two endpoint-interpolatory raw functions, which
  imposes homogeneous Dirichlet conditions; dim = N + p - 2.
* outlier_free: additionally force even boundary derivatives up to
  order 2*alpha_p to vanish, alpha_p = floor((p-1)/2); dim = N - 1 for
  odd p and N for even p. For p <= 2 no extra constraint binds and the
  extraction coincides with the standard one.

The constrained boundary basis is any orthonormal null-space basis of
the boundary constraint matrix; the pencil spectrum does not depend on
that choice. The right-end basis mirrors the left-end one, which keeps
assembled matrices exactly persymmetric on the uniform mesh.
"""

from dataclasses import dataclass

import numpy as np

from .splines import KnotVector, eval_basis, open_knot_vector


@dataclass(frozen=True)
class SplineSpace:
    """A trial space spanned by extraction rows over raw B-splines."""

    kv: KnotVector
    flavor: str  # "standard" or "outlier_free"
    extraction: np.ndarray  # (dim, raw), rows linearly independent

    @property
    def dim(self):
        return self.extraction.shape[0]

    @property
    def p(self):
        return self.kv.p

    @property
    def N(self):
        return self.kv.N

    @property
    def alpha(self):
        """Highest constrained half-order: even derivatives 0..2*alpha."""
        return (self.kv.p - 1) // 2


def build_standard_space(p, N):
    """Space of all raw functions except the two endpoint ones."""
    kv = open_knot_vector(p, N)
    raw = kv.num_raw
    if raw < 3:
        raise ValueError(f"no interior functions for p={p}, N={N}")
    extraction = np.eye(raw)[1:-1]
    return SplineSpace(kv, "standard", extraction)


def _boundary_constraints(kv, m, alpha):
    """Constraint rows: even derivatives 0..2*alpha of the first m raw
    functions at x=0, one row per order, unit-normalized."""
    rows = np.zeros((alpha + 1, m))
    be = eval_basis(kv, 0.0, 2 * alpha)
    for a in range(alpha + 1):
        rows[a, :] = be.ders[2 * a][:m]
    return rows / np.linalg.norm(rows, axis=1, keepdims=True)


def _left_null_basis(kv, m, alpha):
    """Orthonormal, sign-fixed basis of the boundary null space."""
    C = _boundary_constraints(kv, m, alpha)
    u, s, vt = np.linalg.svd(C)
    if s[-1] < 1e-8:
        raise RuntimeError("boundary constraint system is rank-deficient")
    null = vt[alpha + 1:]
    # canonical order and sign: sort by peak position, peak made positive
    peaks = [int(np.argmax(np.abs(row))) for row in null]
    null = null[np.argsort(peaks, kind="stable")]
    for row in null:
        if row[np.argmax(np.abs(row))] < 0:
            row *= -1.0
    return null


def build_of_space(p, N):
    """Outlier-free space: even boundary derivatives vanish to 2*alpha_p.

    Parameters
    ----------
    p, N : int
        Degree and element count. N must be large enough that the two
        boundary constraint blocks decouple:
        N >= max(2*alpha_p + 2, 4*alpha_p + 2 - p).

    Returns
    -------
    SplineSpace with flavor "outlier_free".
    """
    alpha = (p - 1) // 2
    if p <= 2:
        std = build_standard_space(p, N)
        return SplineSpace(std.kv, "outlier_free", std.extraction)
    n_min = max(2 * alpha + 2, 4 * alpha + 2 - p)
    if N < n_min:
        raise ValueError(
            f"p={p} needs N >= {n_min} for the boundary blocks to decouple")
    kv = open_knot_vector(p, N)
    raw = kv.num_raw
    m = 2 * alpha + 1  # raw functions with a constrained boundary trace
    left = _left_null_basis(kv, m, alpha)

    dim = raw - 2 * m + 2 * left.shape[0]
    extraction = np.zeros((dim, raw))
    extraction[:left.shape[0], :m] = left
    for i, k in enumerate(range(m, raw - m)):
        extraction[left.shape[0] + i, k] = 1.0
    # mirrored right block, reversed row order for persymmetry
    for r in range(left.shape[0]):
        extraction[dim - 1 - r, raw - m:] = left[r, ::-1]
    return SplineSpace(kv, "outlier_free", extraction)


def space_member_eval(space, i, x, r=0, side=None):
    """Derivative of order r of the i-th space basis function at x."""
    if not 0 <= i < space.dim:
        raise IndexError(f"member index {i} out of range 0..{space.dim - 1}")
    be = eval_basis(space.kv, x, r, side)
    row = space.extraction[i]
    p = space.kv.p
    return float(row[be.first:be.first + p + 1] @ be.ders[r])
