"""Semiclassical machinery: turning points, phase integral, WKB energies.

The classical radial momentum squared (Langer-corrected form) is

    W(r) = E^2 - m^2 + 2 xi Z E / r - lambda^2 / r^2 - B / r^3,
    B = 4 xi Z S l' / m,

whose positive zeros r2 < r3 bound the classically allowed region; the third
root r1 of the cubic

    (E^2 - m^2) r^3 + 2 xi Z E r^2 - lambda^2 r - B = 0

is negative for S > 0 (and degenerates to r = 0 when S = 0, where the cubic
collapses to a quadratic).  Bound energies solve the quantization condition

    integral_{r2}^{r3} sqrt(W(r)) dr = pi (n' + 1/2).

Two independent solvers are provided: energy_wkb_full root-finds the exact
phase integral, energy_wkb_split solves the perturbative implicit relation

    xi Z E / sqrt(m^2 - E^2) - sigma_l E/m = n' + 1/2 + lambda,

obtained by treating the r^-3 term as a small perturbation over the
quadratic turning points.  Both are best conditioned in the variable
w = xi Z (E/m) / sqrt(1 - (E/m)^2): bound levels sit at w ~ n' + 1/2 +
lambda + sigma_l, unit-spaced, so a uniform w-grid is a geometric E/m grid
accumulating at E = m.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.optimize import brentq

from .closedform import closed_form_terms
from .errors import BracketFailure, DomainError, NoClassicalRegion, QuadratureFailure
from .model import AnyonParams, EnergyResult, QuantumNumbers, lambda_sq, spin_orbit_strength

__all__ = [
    "TurningPoints",
    "QuantizationResidual",
    "SplitIntegrals",
    "momentum_sq",
    "turning_points",
    "phase_integral",
    "quantization_residual",
    "energy_wkb_full",
    "energy_wkb_split",
    "split_integrals",
]


@dataclass(frozen=True)
class TurningPoints:
    """Sorted real roots r1 < r2 < r3 of the turning-point cubic.

    physical flags which roots satisfy r > 0; the classically allowed
    interval is (r2, r3).  For S = 0 the degenerate root r1 = 0 is kept
    with physical = False.
    """

    r1: float
    r2: float
    r3: float
    physical: tuple[bool, bool, bool]


@dataclass(frozen=True)
class QuantizationResidual:
    """Phase integral vs the quantization target pi*(n' + 1/2)."""

    phase: float
    target: float
    residual: float


@dataclass(frozen=True)
class SplitIntegrals:
    """Diagnostic decomposition of the phase over the quadratic window.

    main is the phase of the quadratic (S = 0 shaped) momentum between its
    own turning points, correction the first-order shift from the r^-3
    term.  Both carry their closed forms: main_analytic = pi (w - lambda),
    correction_analytic = -pi sigma_l E/m.
    """

    main: float
    correction: float
    main_analytic: float
    correction_analytic: float


def momentum_sq(params: AnyonParams, l: int, E: float, r):
    """Classical radial momentum squared W(r); vectorized over r.

    May be negative (classically forbidden region).
    """
    lam2 = lambda_sq(params, l)
    b = spin_orbit_strength(params, l)
    m = params.m
    c = 2.0 * params.xi * params.Z * E
    return E * E - m * m + c / r - lam2 / r**2 - b / r**3


def _cubic_coeffs(params: AnyonParams, l: int, E: float) -> tuple[float, float, float, float]:
    m = params.m
    return (
        E * E - m * m,
        2.0 * params.xi * params.Z * E,
        -lambda_sq(params, l),
        -spin_orbit_strength(params, l),
    )


def _cubic_value(coeffs, r: float) -> float:
    a3, a2, a1, a0 = coeffs
    return ((a3 * r + a2) * r + a1) * r + a0


def _cubic_scale(coeffs, r: float) -> float:
    a3, a2, a1, a0 = coeffs
    ra = abs(r)
    return abs(a3) * ra**3 + abs(a2) * ra**2 + abs(a1) * ra + abs(a0)


def _polish_root(coeffs, r: float) -> float:
    """A few Newton steps on the original cubic; backward-stable roots."""
    a3, a2, a1, a0 = coeffs
    for _ in range(3):
        p = ((a3 * r + a2) * r + a1) * r + a0
        dp = (3.0 * a3 * r + 2.0 * a2) * r + a1
        if dp == 0.0:
            break
        step = p / dp
        r -= step
        if abs(step) <= 4.0 * math.ulp(abs(r)):
            break
    return r


def _bisect_root(coeffs, lo: float, hi: float) -> float:
    """Plain bisection fallback; assumes a sign change on [lo, hi]."""
    flo = _cubic_value(coeffs, lo)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        fm = _cubic_value(coeffs, mid)
        if flo * fm <= 0.0:
            hi = mid
        else:
            lo, flo = mid, fm
    return 0.5 * (lo + hi)


def _real_roots_cubic(coeffs) -> list[float]:
    """All real roots of a3 r^3 + a2 r^2 + a1 r + a0, a3 != 0, sorted.

    Trigonometric/Cardano closed form, then Newton polish; when a polished
    root still misses the backward-error target (near-degenerate
    discriminant), it is re-derived by bisection between its neighbors.
    """
    a3, a2, a1, a0 = coeffs
    b, c, d = a2 / a3, a1 / a3, a0 / a3
    # depressed cubic t^3 + p t + q, r = t - b/3
    p = c - b * b / 3.0
    q = 2.0 * b**3 / 27.0 - b * c / 3.0 + d
    shift = -b / 3.0
    disc = (q / 2.0) ** 2 + (p / 3.0) ** 3
    if disc < 0.0:
        # three distinct real roots
        rho = math.sqrt(-p / 3.0)
        arg = 3.0 * q / (2.0 * p * rho)
        arg = min(1.0, max(-1.0, arg))
        phi = math.acos(arg)
        roots = [2.0 * rho * math.cos((phi + 2.0 * math.pi * k) / 3.0) + shift for k in range(3)]
    elif disc == 0.0:
        if p == 0.0:
            roots = [shift]
        else:
            u = 3.0 * q / p
            roots = [u + shift, -u / 2.0 + shift, -u / 2.0 + shift]
    else:
        # one real root (Cardano)
        s = math.sqrt(disc)
        u = math.copysign(abs(-q / 2.0 + s) ** (1.0 / 3.0), -q / 2.0 + s)
        v = 0.0 if u == 0.0 else -p / (3.0 * u)
        roots = [u + v + shift]
    roots = sorted(_polish_root(coeffs, r) for r in roots)
    if len(roots) == 3:
        for i, r in enumerate(roots):
            if abs(_cubic_value(coeffs, r)) > 1e-12 * max(_cubic_scale(coeffs, r), 1e-300):
                lo = roots[i - 1] if i > 0 else r - max(1.0, abs(r))
                hi = roots[i + 1] if i < 2 else r + max(1.0, abs(r))
                roots[i] = _polish_root(coeffs, _bisect_root(coeffs, lo, hi))
        roots.sort()
    return roots


def turning_points(params: AnyonParams, l: int, E: float) -> TurningPoints:
    """Turning points for a trial bound energy 0 < E < m.

    Raises NoClassicalRegion when the cubic does not supply two distinct
    positive turning points (E outside the bound window for this l).
    """
    if not (0.0 < E < params.m):
        raise DomainError(f"bound regime requires 0 < E < m, got E={E}, m={params.m}")
    lam2 = lambda_sq(params, l)
    b = spin_orbit_strength(params, l)
    k2 = E * E - params.m**2  # < 0
    cc = 2.0 * params.xi * params.Z * E
    if b == 0.0:
        # cubic degenerates: r * (k2 r^2 + cc r - lam2) = 0
        disc = cc * cc + 4.0 * k2 * lam2
        if disc <= 0.0:
            raise NoClassicalRegion(
                f"no classically allowed interval at E={E} (quadratic discriminant {disc} <= 0)"
            )
        s = math.sqrt(disc)
        # stable roots of |k2| r^2 - cc r + lam2 = 0 (no subtractive branch)
        r_small = 2.0 * lam2 / (cc + s)
        r_big = (cc + s) / (2.0 * (-k2))
        if not (r_small < r_big):
            raise NoClassicalRegion(f"degenerate turning points at E={E}")
        return TurningPoints(0.0, r_small, r_big, (False, True, True))
    coeffs = (k2, cc, -lam2, -b)
    roots = _real_roots_cubic(coeffs)
    if len(roots) != 3:
        raise NoClassicalRegion(
            f"turning-point cubic has {len(roots)} real root(s) at E={E}; need three"
        )
    r1, r2, r3 = roots
    if not (r3 - r2 > 1e-12 * max(1.0, abs(r3))):
        raise NoClassicalRegion(f"turning points coincide at E={E} (r2={r2}, r3={r3})")
    return TurningPoints(r1, r2, r3, (r1 > 0.0, r2 > 0.0, r3 > 0.0))


@lru_cache(maxsize=16)
def _gauss_theta(order: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes/weights mapped to theta in (0, pi/2)."""
    x, w = np.polynomial.legendre.leggauss(order)
    theta = (x + 1.0) * (math.pi / 4.0)
    weights = w * (math.pi / 4.0)
    theta.setflags(write=False)
    weights.setflags(write=False)
    return theta, weights


_GL_ORDERS = (48, 96, 192, 384, 768, 1536)


def _phase_with_error(params: AnyonParams, l: int, E: float, tol: float) -> tuple[float, float]:
    """Phase integral over [r2, r3] plus a convergence-based error estimate.

    The substitution r = r2 + (r3 - r2) sin^2(theta) together with the
    factorization W(r) = |k^2| (r - r1)(r - r2)(r3 - r)/r^3 removes both
    inverse-square-root endpoint singularities exactly:

        integrand(theta) = 2 d^2 sin^2 cos^2 * sqrt(|k^2| (r - r1) / r^3).

    Gauss-Legendre order is doubled until two consecutive values agree.
    """
    tp = turning_points(params, l, E)
    d = tp.r3 - tp.r2
    k2 = E * E - params.m**2
    lam2 = lambda_sq(params, l)
    b = spin_orbit_strength(params, l)
    cc = 2.0 * params.xi * params.Z * E
    value_prev = None
    for order in _GL_ORDERS:
        theta, wts = _gauss_theta(order)
        s2 = np.sin(theta) ** 2
        r = tp.r2 + d * s2
        # integrability guard: the raw momentum must not be negative inside
        # the classical region (beyond roundoff scale); no silent clamping
        w_direct = momentum_sq(params, l, E, r)
        scale = (abs(k2) * r**3 + cc * r**2 + lam2 * r + abs(b)) / r**3
        if np.any(w_direct < -1e-9 * scale):
            raise QuadratureFailure(
                f"momentum went negative inside (r2, r3) at E={E}; "
                "pathological parameter combination"
            )
        g = 2.0 * d * d * (s2 * (1.0 - s2)) * np.sqrt((-k2) * (r - tp.r1) / r**3)
        value = float(np.dot(g, wts))
        if value_prev is not None:
            err = abs(value - value_prev)
            if err <= max(tol, tol * abs(value)):
                return value, err
        value_prev = value
    raise QuadratureFailure(
        f"phase quadrature did not converge to {tol} at E={E} (last order {_GL_ORDERS[-1]})"
    )


def phase_integral(params: AnyonParams, l: int, E: float, tol: float = 1e-11) -> float:
    """The quantization phase integral_{r2}^{r3} sqrt(W) dr.

    Estimated quadrature error is held at or below tol (default 1e-11);
    QuadratureFailure is raised rather than returning an uncertain value.
    """
    value, _err = _phase_with_error(params, l, E, tol)
    return value


def quantization_residual(params: AnyonParams, qn: QuantumNumbers, E: float) -> QuantizationResidual:
    """Phase at E against the target pi*(n' + 1/2) for the given level."""
    phase = phase_integral(params, qn.l, E)
    target = math.pi * (qn.n_r + 0.5)
    return QuantizationResidual(phase=phase, target=target, residual=phase - target)


def _e_of_w(xi_z: float, w: float) -> float:
    """E/m from w = xi Z (E/m)/sqrt(1 - (E/m)^2)."""
    return w / math.hypot(w, xi_z)


def _ekin_of_w(xi_z: float, w: float) -> float:
    """(E - m)/m from w, cancellation-free: -xi^2 Z^2 / (s (w + s))."""
    s = math.hypot(w, xi_z)
    return -(xi_z * xi_z) / (s * (w + s))


def energy_wkb_full(
    params: AnyonParams,
    qn: QuantumNumbers,
    tol_quad: float = 1e-11,
    tol_root: float = 1e-14,
) -> EnergyResult:
    """Bound energy from the exact phase integral: phase(E) = pi (n' + 1/2).

    The residual is bracketed by scanning w (a geometric E/m grid refined
    toward E = m, since dw is uniform there), then refined by Brent's
    method; the returned E/m is polished over neighbouring floats so the
    re-evaluated residual stays at the conditioning floor (~1e-10 at Table
    scale, far below it elsewhere).
    """
    if params.xi == 0.0:
        raise BracketFailure("no bound spectrum at xi = 0")
    xi_z = params.xi * params.Z
    target = math.pi * (qn.n_r + 0.5)
    m = params.m

    evals = 0

    def residual_of_w(w: float) -> float | None:
        nonlocal evals
        try:
            phase, _ = _phase_with_error(params, qn.l, _e_of_w(xi_z, w) * m, tol_quad)
        except NoClassicalRegion:
            return None
        evals += 1
        return phase - target

    w_lo = w_hi = None
    prev: tuple[float, float] | None = None
    for w in np.arange(0.125, qn.n_r + qn.l + 6.0, 0.25):
        val = residual_of_w(float(w))
        if val is None:
            continue
        if val < 0.0:
            prev = (float(w), val)
        else:
            if prev is None:
                # level window narrower than the scan step: refine backwards
                for wf in np.arange(w - 0.25 + 0.03125, w, 0.03125):
                    vf = residual_of_w(float(wf))
                    if vf is not None and vf < 0.0:
                        prev = (float(wf), vf)
                if prev is None:
                    raise BracketFailure(
                        f"no sign change of the quantization residual for {qn} "
                        f"(first defined value already positive at w={w})"
                    )
            w_lo, w_hi = prev[0], float(w)
            break
    if w_lo is None:
        raise BracketFailure(f"quantization residual never went positive for {qn}")

    w_root, info = brentq(
        residual_of_w, w_lo, w_hi, xtol=tol_root, rtol=8.9e-16, full_output=True
    )

    # pick the float E/m with the smallest re-evaluated residual
    e_root = _e_of_w(xi_z, w_root)
    e_best, res_best, quad_best = e_root, math.inf, 0.0
    for e_cand in (e_root, math.nextafter(e_root, 0.0), math.nextafter(e_root, 2.0)):
        try:
            phase, quad_err = _phase_with_error(params, qn.l, e_cand * m, tol_quad)
        except (DomainError, NoClassicalRegion):
            continue
        if abs(phase - target) < abs(res_best):
            e_best, res_best, quad_best = e_cand, phase - target, quad_err
    if not math.isfinite(res_best):
        raise BracketFailure(f"could not certify the root for {qn} at E/m={e_root}")

    return EnergyResult(
        e_total=e_best,
        e_kinetic=_ekin_of_w(xi_z, w_root),
        kinetic_ev=_ekin_of_w(xi_z, w_root) * params.mass_ev,
        method="wkb-full",
        diagnostics={
            "iterations": float(info.iterations),
            "function_evals": float(evals),
            "residual": res_best,
            "error_estimate": quad_best + abs(res_best),
        },
    )


def energy_wkb_split(
    params: AnyonParams, qn: QuantumNumbers, tol_root: float = 1e-15
) -> EnergyResult:
    """Bound energy from the perturbative implicit relation.

    Solves w - sigma_l * e(w) = n' + 1/2 + lambda on the bracket
    [rhs, rhs + sigma_l]; at S = 0 the root is w = rhs exactly and the
    result coincides with the closed form by construction.
    """
    if params.xi == 0.0:
        raise BracketFailure("no bound spectrum at xi = 0")
    terms = closed_form_terms(params, qn)
    xi_z = params.xi * params.Z
    rhs = qn.n_r + 0.5 + terms.lam
    sig = terms.sigma_l

    if sig == 0.0:
        w_root, iterations = rhs, 0
    else:
        def f(w: float) -> float:
            return w - sig * _e_of_w(xi_z, w) - rhs

        w_root, info = brentq(
            f, rhs, rhs + sig, xtol=tol_root, rtol=8.9e-16, full_output=True
        )
        iterations = info.iterations

    e = _e_of_w(xi_z, w_root)
    e_kin = _ekin_of_w(xi_z, w_root)
    residual = w_root - sig * e - rhs
    return EnergyResult(
        e_total=e,
        e_kinetic=e_kin,
        kinetic_ev=e_kin * params.mass_ev,
        method="wkb-split",
        diagnostics={
            "iterations": float(iterations),
            "residual": residual,
            "error_estimate": abs(residual) + 4.0 * math.ulp(1.0),
        },
    )


def split_integrals(params: AnyonParams, l: int, E: float, order: int = 384) -> SplitIntegrals:
    """Diagnostic: the two pieces of the perturbative phase decomposition.

    The momentum is split as sqrt(W0 - B/r^3) ~ sqrt(W0) - B/(2 r^3 sqrt(W0))
    with W0 the quadratic (S = 0 shaped) part, integrated between the
    quadratic turning points a < b.  With r = a + (b - a) sin^2(theta) both
    integrands are smooth:

        main:       2 d^2 sin^2 cos^2 sqrt(|k^2|) / r
        correction: -(B / sqrt(|k^2|)) / r^2
    """
    if not (0.0 < E < params.m):
        raise DomainError(f"bound regime requires 0 < E < m, got E={E}")
    lam2 = lambda_sq(params, l)
    lam = math.sqrt(lam2)
    b_coef = spin_orbit_strength(params, l)
    k2 = E * E - params.m**2
    cc = 2.0 * params.xi * params.Z * E
    disc = cc * cc + 4.0 * k2 * lam2
    if disc <= 0.0:
        raise NoClassicalRegion(f"no quadratic turning points at E={E}")
    s = math.sqrt(disc)
    a = 2.0 * lam2 / (cc + s)
    b = (cc + s) / (2.0 * (-k2))
    d = b - a
    theta, wts = _gauss_theta(order)
    s2 = np.sin(theta) ** 2
    r = a + d * s2
    main = float(np.dot(2.0 * d * d * s2 * (1.0 - s2) * math.sqrt(-k2) / r, wts))
    correction = float(np.dot(-(b_coef / math.sqrt(-k2)) / r**2, wts))
    e_ratio = E / params.m
    w = params.xi * params.Z * e_ratio / math.sqrt((1.0 - e_ratio) * (1.0 + e_ratio))
    sigma = 2.0 * (params.xi * params.Z) ** 2 * params.S * math.sqrt(l * l + 0.25) / lam**3
    return SplitIntegrals(
        main=main,
        correction=correction,
        main_analytic=math.pi * (w - lam),
        correction_analytic=-math.pi * sigma * e_ratio,
    )
