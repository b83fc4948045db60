"""Spectrum comparison against the continuum problem: relative
eigenvalue errors, H1 eigenfunction errors, condition-number reduction
statistics, weight sweeps, convergence-rate fits, and the energy-norm
identity check."""

import math
from dataclasses import dataclass

import numpy as np

from .assembly import build_soft_system
from .eigensolve import generalized_eig
from .splines import eval_basis
from .tensor import exact_spectrum, kron_sum_spectrum


class InsufficientDataError(ValueError):
    """Raised when a fit has fewer than two usable points."""


@dataclass(frozen=True)
class SpectralReport:
    """Discrete spectrum paired with continuum targets, rank by rank."""

    dimension: int
    p: int
    N: int
    eta: float
    indices: tuple
    exact: np.ndarray
    computed: np.ndarray
    rel_errors: np.ndarray


def solve_system(system):
    """Generalized eigenpairs of an assembled pencil."""
    meta = {"p": system.p, "N": system.N, "eta": system.eta,
            "eta_b": system.eta_b}
    return generalized_eig(system.A, system.B, meta=meta)


def relative_errors(p, N, eta, d=1, eta_b=0.0, flavor="outlier_free"):
    """Per-mode relative eigenvalue errors against pi^2 * sum(j_i^2).

    Modes are paired by rank: the k-th discrete eigenvalue is compared
    with the k-th continuum one (ties in the continuum spectrum broken
    by index tuple). Returns a SpectralReport.
    """
    system = build_soft_system(p, N, eta, eta_b, flavor)
    spectrum = solve_system(system)
    if d == 1:
        values = spectrum.values
        indices = tuple((k,) for k in range(1, values.size + 1))
    else:
        tensor = kron_sum_spectrum(spectrum.values, d)
        values = tensor.values
        indices = tensor.indices
    target = exact_spectrum(d, len(values))
    exact = target.values[:len(values)]
    rel = np.abs(values - exact) / exact
    return SpectralReport(d, p, N, float(eta), indices, exact, values, rel)


def _mode_coefficients(system, j):
    """Unit-B-norm coefficient vector of the j-th discrete mode."""
    spectrum = solve_system(system)
    return spectrum.values[j - 1], spectrum.vectors[:, j - 1]


def _design_matrices(system, nq):
    """Quadrature grid plus value/derivative design matrices.

    Returns (x, w, U, DU) where U @ c and DU @ c sample the member with
    coefficients c and its derivative on the grid.
    """
    space = system.space
    kv = space.kv
    p, N, h = kv.p, kv.N, kv.h
    xg, wg = np.polynomial.legendre.leggauss(nq)
    xs, ws, Us, DUs = [], [], [], []
    for e in range(N):
        x = (e + 0.5 * (xg + 1.0)) * h
        vals = np.empty((nq, p + 1))
        ders = np.empty((nq, p + 1))
        be = None
        for q in range(nq):
            be = eval_basis(kv, float(x[q]), 1)
            vals[q] = be.ders[0]
            ders[q] = be.ders[1]
        window = space.extraction[:, be.first:be.first + p + 1]
        xs.append(x)
        ws.append(wg * (0.5 * h))
        Us.append(vals @ window.T)
        DUs.append(ders @ window.T)
    return (np.concatenate(xs), np.concatenate(ws),
            np.vstack(Us), np.vstack(DUs))


def h1_errors_for_modes(system, spectrum, js, nq=None):
    """H1-seminorm errors of several modes from one solved pencil.

    Each mode is rescaled to unit L2 norm and sign-aligned with its
    continuum counterpart sqrt(2)*sin(j*pi*x) before integrating the
    derivative mismatch.
    """
    x, w, U, DU = _design_matrices(system, nq or system.p + 4)
    mass = system.mass.toarray()
    out = []
    for j in js:
        coeffs = spectrum.vectors[:, j - 1]
        coeffs = coeffs / math.sqrt(coeffs @ mass @ coeffs)
        omega = j * math.pi
        u = math.sqrt(2.0) * np.sin(omega * x)
        du = math.sqrt(2.0) * omega * np.cos(omega * x)
        uh = U @ coeffs
        duh = DU @ coeffs
        sign = 1.0 if float(w @ (uh * u)) >= 0 else -1.0
        out.append(math.sqrt(float(w @ (sign * duh - du) ** 2)))
    return out


def h1_eigenfunction_error(p, N, eta, j, eta_b=0.0, nq=None,
                           flavor="outlier_free"):
    """H1-seminorm error |u_j - u_j^h|_{H1} against sin(j*pi*x).

    The discrete mode is rescaled to unit L2 norm and sign-aligned with
    the continuum mode before the seminorm of the difference is
    integrated with Gauss quadrature (p + 4 points per element).
    """
    system = build_soft_system(p, N, eta, eta_b, flavor)
    spectrum = solve_system(system)
    return h1_errors_for_modes(system, spectrum, [j], nq)[0]


@dataclass(frozen=True)
class ConditionStats:
    """Generalized-condition-number reduction of a target spectrum
    relative to a baseline one."""

    lambda_min: float
    lambda_max_baseline: float
    lambda_max_target: float
    gamma_baseline: float
    gamma_target: float
    rho: float
    varrho_pct: float


def condition_stats(target, baseline):
    """Reduction statistics between two positive spectra.

    Both arguments are ascending arrays of eigenvalues (any object with
    a ``values`` attribute is unwrapped). rho = gamma_baseline /
    gamma_target and varrho = 100 * (1 - 1/rho) percent.
    """
    target = np.asarray(getattr(target, "values", target), dtype=float)
    baseline = np.asarray(getattr(baseline, "values", baseline), dtype=float)
    if target.size == 0 or baseline.size == 0:
        raise ValueError("empty spectrum")
    if target[0] <= 0 or baseline[0] <= 0:
        raise ValueError("spectra must be positive to form condition"
                         " numbers")
    lam_min = float(baseline[0])
    g_base = float(baseline[-1] / baseline[0])
    g_target = float(target[-1] / target[0])
    rho = g_base / g_target
    varrho = 100.0 * (1.0 - 1.0 / rho)
    return ConditionStats(lam_min, float(baseline[-1]), float(target[-1]),
                          g_base, g_target, rho, varrho)


def spectrum_for(p, N, eta, d=1, eta_b=0.0, flavor="outlier_free"):
    """Eigenvalues of the d-dimensional pencil (ascending)."""
    system = build_soft_system(p, N, eta, eta_b, flavor)
    spectrum = solve_system(system)
    if d == 1:
        return spectrum.values
    return kron_sum_spectrum(spectrum.values, d).values


def eta_sweep(p, N, etas, d=1):
    """Condition reduction and total eigenvalue error along a weight
    grid.

    The baseline is the unsoftened pencil (eta = 0). Every weight must
    lie in [0, sharp_max); each row is (eta, rho, e_lambda) where
    e_lambda is the root of the sum of squared relative errors.
    """
    from .analytic import eta_table

    sharp = float(eta_table().resolve(p, "sharp_max"))
    etas = [float(e) for e in etas]
    for e in etas:
        if not 0.0 <= e < sharp:
            raise ValueError(f"weight {e} outside [0, {sharp})")
    baseline = spectrum_for(p, N, 0.0, d)
    rows = []
    for e in etas:
        report = relative_errors(p, N, e, d)
        stats = condition_stats(report.computed, baseline)
        e_lambda = float(np.sqrt(np.sum(report.rel_errors ** 2)))
        rows.append((e, stats.rho, e_lambda))
    return rows


def convergence_slope(ns, errors):
    """Least-squares slope of log(error) against log(1/N).

    Non-positive errors carry no rate information and are dropped; a
    fit needs at least two surviving points.
    """
    ns = np.asarray(ns, dtype=float)
    errors = np.asarray(errors, dtype=float)
    if ns.shape != errors.shape:
        raise ValueError("N list and error list must have equal length")
    keep = errors > 0
    ns, errors = ns[keep], errors[keep]
    if ns.size < 2:
        raise InsufficientDataError("need at least two positive errors"
                                    " to fit a slope")
    slope = np.polyfit(np.log(1.0 / ns), np.log(errors), 1)[0]
    return float(slope)


def eigenvalue_convergence(p, N_list, j, eta=0.0, eta_b=0.0,
                           flavor="outlier_free"):
    """Relative eigenvalue errors of mode j over a mesh family."""
    errs = []
    for N in N_list:
        report = relative_errors(p, N, eta, 1, eta_b, flavor)
        errs.append(float(report.rel_errors[j - 1]))
    return errs


def h1_convergence(p, N_list, j, eta=0.0, eta_b=0.0,
                   flavor="outlier_free"):
    """H1 eigenfunction errors of mode j over a mesh family."""
    return [h1_eigenfunction_error(p, N, eta, j, eta_b, flavor=flavor)
            for N in N_list]


def pythagorean_check(p, N, eta, j):
    """Residual of the energy-norm identity for mode j.

    With the energy seminorm induced by the softened stiffness form,
    the squared error splits as lambda_j * ||u - u_h||_L2^2 plus the
    eigenvalue error. Returns (residual, gap) where gap is the
    eigenvalue error, so residual should be far below gap.
    """
    system = build_soft_system(p, N, eta)
    lam_h, coeffs = _mode_coefficients(system, j)
    coeffs = coeffs / math.sqrt(coeffs @ system.mass.toarray() @ coeffs)

    x, w, U, DU = _design_matrices(system, p + 4)
    uh = U @ coeffs
    duh = DU @ coeffs
    omega = j * math.pi
    lam = omega ** 2
    u = math.sqrt(2.0) * np.sin(omega * x)
    du = math.sqrt(2.0) * omega * np.cos(omega * x)
    sign = 1.0 if float(w @ (uh * u)) >= 0 else -1.0
    l2 = float(w @ (sign * uh - u) ** 2)
    h1 = float(w @ (sign * duh - du) ** 2)

    soft = float(coeffs @ system.softness.toarray() @ coeffs)
    energy_sq = h1 - system.eta * soft
    residual = abs(energy_sq - (lam * l2 + (lam_h - lam)))
    gap = abs(lam_h - lam)
    return residual, gap
