"""Open-knot B-spline bases on uniform meshes of [0, 1].

Degree-p splines of maximal continuity C^{p-1}: the knot vector repeats
each endpoint p+1 times and places single knots at the N-1 interior
breakpoints j/N. Values and derivatives come from the knot-difference
recursion (never numeric differentiation), so polynomial data is exact.

Breakpoint evaluations are one-sided. The default is the right-limit,
except at x=1 where only the left-limit exists; callers may force a side
to probe the piecewise-constant p-th derivative on a chosen element.
"""

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class KnotVector:
    """Open uniform knot vector: degree ``p``, ``N`` elements on [0, 1].

    Attributes
    ----------
    p : int
        Polynomial degree, at least 1.
    N : int
        Number of elements; breakpoints are j/N.
    knots : ndarray
        Non-decreasing knot sequence of length N + 2p + 1 with both
        endpoints repeated p+1 times.
    """

    p: int
    N: int
    knots: np.ndarray

    @property
    def h(self):
        return 1.0 / self.N

    @property
    def num_raw(self):
        """Number of raw basis functions, N + p."""
        return self.N + self.p

    @property
    def breakpoints(self):
        return np.linspace(0.0, 1.0, self.N + 1)


@dataclass(frozen=True)
class BasisEval:
    """Derivatives of the raw basis functions supported on one element.

    Attributes
    ----------
    element : int
        Anchor element index; the supported functions are
        ``element .. element + p``.
    order : int
        Highest derivative order evaluated.
    ders : ndarray, shape (order + 1, p + 1)
        ``ders[k, m]`` is the k-th derivative of raw function
        ``element + m`` at the evaluation point.
    """

    element: int
    order: int
    ders: np.ndarray

    @property
    def first(self):
        """Index of the first supported raw function (equals element)."""
        return self.element

    @property
    def values(self):
        """The requested derivative order, ``ders[order]``."""
        return self.ders[self.order]


def open_knot_vector(p, N):
    """Build the open uniform knot vector for degree p on N elements.

    Parameters
    ----------
    p : int
        Degree, p >= 1.
    N : int
        Element count, N >= 1.

    Returns
    -------
    KnotVector
    """
    p = int(p)
    N = int(N)
    if p < 1:
        raise ValueError(f"degree must be at least 1, got {p}")
    if N < 1:
        raise ValueError(f"element count must be at least 1, got {N}")
    knots = np.concatenate([
        np.zeros(p + 1),
        np.arange(1, N) / N,
        np.ones(p + 1),
    ])
    return KnotVector(p, N, knots)


def _find_element(kv, x, side):
    """Element index containing x under the requested one-sided limit."""
    if side == "left":
        span = int(np.searchsorted(kv.knots, x, side="left")) - 1
    else:
        span = int(np.searchsorted(kv.knots, x, side="right")) - 1
    # clamp: below the first element there is no left limit, above the
    # last there is no right limit
    span = min(max(span, kv.p), kv.N - 1 + kv.p)
    return span - kv.p


def eval_basis(kv, x, r=0, side=None):
    """Evaluate raw basis derivatives of orders 0..r at a point.

    Parameters
    ----------
    kv : KnotVector
    x : float
        Point in [0, 1].
    r : int
        Highest derivative order, 0 <= r <= p.
    side : {"right", "left", None}
        One-sided limit taken when x is exactly a breakpoint. None means
        right-limit (left-limit at x=1).

    Returns
    -------
    BasisEval
    """
    p = kv.p
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"evaluation point {x} outside [0, 1]")
    if not 0 <= r <= p:
        raise ValueError(f"derivative order must be in 0..{p}, got {r}")
    if side not in (None, "right", "left"):
        raise ValueError(f"unknown side {side!r}")
    element = _find_element(kv, x, side or "right")
    span = element + p
    U = kv.knots

    # Triangular table of all lower-degree values plus the knot
    # differences needed for the derivative recursion.
    ndu = np.zeros((p + 1, p + 1))
    left = np.zeros(p + 1)
    right = np.zeros(p + 1)
    ndu[0, 0] = 1.0
    for j in range(1, p + 1):
        left[j] = x - U[span + 1 - j]
        right[j] = U[span + j] - x
        saved = 0.0
        for k in range(j):
            ndu[j, k] = right[k + 1] + left[j - k]
            temp = ndu[k, j - 1] / ndu[j, k]
            ndu[k, j] = saved + right[k + 1] * temp
            saved = left[j - k] * temp
        ndu[j, j] = saved

    ders = np.zeros((r + 1, p + 1))
    ders[0] = ndu[:, p]
    a = np.zeros((2, p + 1))
    for m in range(p + 1):
        s1, s2 = 0, 1
        a[0, 0] = 1.0
        for k in range(1, r + 1):
            d = 0.0
            rk = m - k
            pk = p - k
            if m >= k:
                a[s2, 0] = a[s1, 0] / ndu[pk + 1, rk]
                d = a[s2, 0] * ndu[rk, pk]
            j1 = 1 if rk >= -1 else -rk
            j2 = k - 1 if m - 1 <= pk else p - m
            for j in range(j1, j2 + 1):
                a[s2, j] = (a[s1, j] - a[s1, j - 1]) / ndu[pk + 1, rk + j]
                d += a[s2, j] * ndu[rk + j, pk]
            if m <= pk:
                a[s2, k] = -a[s1, k - 1] / ndu[pk + 1, m]
                d += a[s2, k] * ndu[m, pk]
            ders[k, m] = d
            s1, s2 = s2, s1

    fact = p
    for k in range(1, r + 1):
        ders[k] *= fact
        fact *= p - k
    return BasisEval(element, r, ders)


def _pth_trace(kv, x, side):
    """Dense p-th-derivative values at x, as a raw-length row."""
    be = eval_basis(kv, x, kv.p, side)
    out = np.zeros(kv.num_raw)
    out[be.first:be.first + kv.p + 1] = be.ders[kv.p]
    return out


def pth_derivative_jump(kv, interface_index):
    """Jump of the p-th derivative of every raw function at a face.

    Interior faces (index 1..N-1) use the left-limit minus the
    right-limit, i.e. the trace weighted by the outward normal of the
    left element. Boundary faces (index 0 and N) carry the one-sided
    trace weighted by the outward normal: -1 at x=0, +1 at x=1.

    Parameters
    ----------
    kv : KnotVector
    interface_index : int
        Face index in 0..N; 0 and N are the boundary faces.

    Returns
    -------
    ndarray of length ``kv.num_raw``.
    """
    k = int(interface_index)
    N = kv.N
    if not 0 <= k <= N:
        raise ValueError(f"interface index must be in 0..{N}, got {k}")
    x = k / N
    if k == 0:
        return -_pth_trace(kv, x, "right")
    if k == N:
        return _pth_trace(kv, x, "left")
    return _pth_trace(kv, x, "left") - _pth_trace(kv, x, "right")
