"""Independent radial eigensolver: two-sided shooting with node counting.

The quantized equation is the physical radial problem

    U''(r) + [E^2 - m^2 + 2 xi Z E/r - (lambda^2 - 1/4)/r^2 - B/r^3] U = 0,

so effective_term = momentum_sq + 1/(4 r^2).  The 1/4 offset undoes the
Langer replacement, which belongs to the semiclassical treatment only; this
is the equation whose exact S = 0 spectrum equals the closed form
(xi Z E / kappa = n' + 1/2 + lambda), making the oracle a genuine referee
for the WKB solvers rather than a restatement of them.

Method: E enters the equation nonlinearly (E^2 and the Coulomb term), so a
linear matrix eigenproblem does not apply.  Instead each trial E is shot
from both ends of a graded mesh with a fixed-step RK4 transfer matrix per
interval, per-step renormalization in the deep forbidden regions, and the
two branches are compared through a scale-invariant Wronskian mismatch at
the radius where the classical momentum peaks.  The full outward sweep also
yields the Sturm node count N(E) = number of eigenvalues below E, which
brackets the target level before the mismatch root is polished.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.optimize import brentq

from .closedform import energy_closed_form
from .errors import (
    DomainError,
    EigenvalueNotFound,
    IntegrationOverflow,
    NoClassicalRegion,
)
from .model import AnyonParams, EnergyResult, QuantumNumbers, lambda_sq, spin_orbit_strength
from .wkb import _e_of_w, _ekin_of_w, _real_roots_cubic, momentum_sq

__all__ = [
    "RadialProblem",
    "RadialSolution",
    "effective_term",
    "build_problem",
    "shoot",
    "eigen_solve",
    "solve_level",
    "energy_oracle",
]

#: Inner barrier action securing |U(r_min)| <= e^-20 ~ 2e-9 of the peak.
_BARRIER_ACTION = 20.0
#: Outer tail margin in units of 1/kappa (e^-40 suppression).
_TAIL_MARGIN = 40.0


@dataclass(frozen=True)
class RadialProblem:
    """Discretized eigenvalue problem for one (params, l) channel."""

    params: AnyonParams
    l: int
    r_min: float
    r_max: float
    n_points: int = 4000

    def __post_init__(self) -> None:
        if not (0.0 < self.r_min < self.r_max):
            raise DomainError(f"need 0 < r_min < r_max, got [{self.r_min}, {self.r_max}]")
        if self.n_points < 1000:
            raise DomainError(f"n_points must be >= 1000, got {self.n_points}")
        if lambda_sq(self.params, self.l) <= 0.25:
            raise DomainError(
                "physical centrifugal coefficient lambda^2 - 1/4 must be positive "
                f"(got lambda^2 = {lambda_sq(self.params, self.l)})"
            )


@dataclass(frozen=True, eq=False)
class RadialSolution:
    """A converged bound state.

    E is the eigenvalue in natural units, e_kinetic the ratio (E - m)/m kept
    in a cancellation-free form, nodes the count of interior zeros of the
    assembled wavefunction, and convergence a grid-refinement error estimate
    (units of m).  u is U_l sampled on r, normalized to unit L2 norm.
    """

    E: float
    e_kinetic: float
    nodes: int
    r: np.ndarray
    u: np.ndarray
    convergence: float


def _w_phys(params: AnyonParams, l: int, E: float, r):
    """Coefficient of U in the quantized equation; vectorized over r."""
    return momentum_sq(params, l, E, r) + 0.25 / r**2


def _w_phys_prime(params: AnyonParams, l: int, E: float, r: float) -> float:
    """Analytic d/dr of the quantized coefficient (used at r_min only)."""
    lam2q = lambda_sq(params, l) - 0.25
    b = spin_orbit_strength(params, l)
    cc = 2.0 * params.xi * params.Z * E
    return -cc / r**2 + 2.0 * lam2q / r**3 + 3.0 * b / r**4


def effective_term(problem: RadialProblem, E: float, r):
    """The coefficient multiplying U at radius r (momentum_sq + 1/(4r^2))."""
    return _w_phys(problem.params, problem.l, E, r)


def _phys_turning_radii(params: AnyonParams, l: int, E: float) -> tuple[float, float]:
    """Positive zeros (r2, r3) of the quantized coefficient."""
    lam2q = lambda_sq(params, l) - 0.25
    if lam2q <= 0.0:
        raise DomainError(f"lambda^2 - 1/4 = {lam2q} not positive; outside supported regime")
    k2 = E * E - params.m**2
    cc = 2.0 * params.xi * params.Z * E
    b = spin_orbit_strength(params, l)
    if b == 0.0:
        disc = cc * cc + 4.0 * k2 * lam2q
        if disc <= 0.0:
            raise NoClassicalRegion(f"no classical region at E={E}")
        s = math.sqrt(disc)
        return 2.0 * lam2q / (cc + s), (cc + s) / (2.0 * (-k2))
    roots = _real_roots_cubic((k2, cc, -lam2q, -b))
    if len(roots) != 3 or not (roots[1] > 0.0 and roots[2] > roots[1]):
        raise NoClassicalRegion(f"no classical region at E={E}")
    return roots[1], roots[2]


@lru_cache(maxsize=1)
def _gauss_200() -> tuple[np.ndarray, np.ndarray]:
    return np.polynomial.legendre.leggauss(200)


def _barrier_action(params: AnyonParams, l: int, E: float, r_lo: float, r_hi: float) -> float:
    """Integral of sqrt(-W) across [r_lo, r_hi] (inner forbidden region).

    Taken in log-radius: the substitution r = e^t turns the near-origin
    wall growth into a bounded smooth integrand, so the estimate stays
    accurate however small r_lo gets.
    """
    x, w = _gauss_200()
    t_lo, t_hi = math.log(r_lo), math.log(r_hi)
    r = np.exp(0.5 * (t_hi - t_lo) * (x + 1.0) + t_lo)
    integrand = np.sqrt(np.maximum(-_w_phys(params, l, E, r), 0.0)) * r
    return float(np.dot(integrand, w) * 0.5 * (t_hi - t_lo))


def build_problem(
    params: AnyonParams, qn: QuantumNumbers, n_points: int = 4000
) -> RadialProblem:
    """Domain construction tied to the physics scales of one level.

    Starts from r_min = r2/50 and r_max = r3 + 40/kappa at the closed-form
    seed energy, then halves r_min until the inner barrier action reaches
    20 so the endpoint-decay requirement |U(r_min)| <= 1e-8 max|U| is
    actually achievable.
    """
    e_seed = energy_closed_form(params, qn).e_total
    E = e_seed * params.m
    r2, r3 = _phys_turning_radii(params, qn.l, E)
    kappa = math.sqrt((params.m - E) * (params.m + E))
    r_max = r3 + _TAIL_MARGIN / kappa
    r_min = r2 / 50.0
    for _ in range(400):
        if _barrier_action(params, qn.l, E, r_min, r2) >= _BARRIER_ACTION:
            break
        r_min *= 0.5
        if r_min < 1e-280:
            raise DomainError("inner barrier never reaches the required action")
    else:
        raise DomainError("inner barrier never reaches the required action")
    return RadialProblem(params=params, l=qn.l, r_min=r_min, r_max=r_max, n_points=n_points)


@lru_cache(maxsize=64)
def _mesh(problem: RadialProblem, e_seed: float, n_points: int) -> tuple[np.ndarray, np.ndarray]:
    """Graded mesh: nodes follow the local wavelength plus a log-in-r floor.

    Node positions are the inverse CDF of the density
    rho(r) = sqrt(|W(r; E_seed)|) + 0.25/r sampled on a fine log probe
    grid, so oscillatory, barrier, and near-origin regions are all resolved
    with the same point budget.
    """
    probe = np.geomspace(problem.r_min, problem.r_max, 20001)
    dens = np.sqrt(np.abs(_w_phys(problem.params, problem.l, e_seed * problem.params.m, probe)))
    dens = dens + 0.25 / probe
    mass = np.concatenate(([0.0], np.cumsum(0.5 * (dens[1:] + dens[:-1]) * np.diff(probe))))
    targets = np.linspace(0.0, mass[-1], n_points + 1)
    r = np.interp(targets, mass, probe)
    r[0], r[-1] = problem.r_min, problem.r_max
    mid = 0.5 * (r[:-1] + r[1:])
    r.setflags(write=False)
    mid.setflags(write=False)
    return r, mid


def _transfer_matrices(params: AnyonParams, l: int, E: float, r: np.ndarray, mid: np.ndarray):
    """Per-interval RK4 transfer matrices for U'' = a(r) U, a = -W.

    One classical RK4 step of the first-order system (U, V) across each
    interval, with a sampled at the left node, midpoint, and right node,
    written out as a 2x2 matrix so sweeps are cheap scalar recurrences:

        M11 = 1 + h^2(a1 + 2 a2)/6 + h^4 a1 a2 / 24
        M12 = h + h^3 a2 / 6
        M21 = h(a1 + 4 a2 + a3)/6 + h^3 a2 (a1 + a3)/12
        M22 = 1 + h^2(2 a2 + a3)/6 + h^4 a2 a3 / 24
    """
    a_nodes = -_w_phys(params, l, E, r)
    a_mid = -_w_phys(params, l, E, mid)
    a1, a3 = a_nodes[:-1], a_nodes[1:]
    a2 = a_mid
    h = np.diff(r)
    h2 = h * h
    m11 = 1.0 + h2 * (a1 + 2.0 * a2) / 6.0 + h2 * h2 * a1 * a2 / 24.0
    m12 = h + h * h2 * a2 / 6.0
    m21 = h * (a1 + 4.0 * a2 + a3) / 6.0 + h * h2 * a2 * (a1 + a3) / 12.0
    m22 = 1.0 + h2 * (2.0 * a2 + a3) / 6.0 + h2 * h2 * a2 * a3 / 24.0
    return m11, m12, m21, m22, a_nodes


_RENORM_AT = 1e100
_OVERFLOW_AT = 1e290


def _outward_sweep(mats, u: float, v: float, i_match: int) -> tuple[float, float, int]:
    """Sweep r_min -> r_max; returns (U, V) at i_match and the full node count."""
    m11, m12, m21, m22 = mats
    nodes = 0
    u_at = v_at = 0.0
    for i in range(len(m11)):
        un = m11[i] * u + m12[i] * v
        vn = m21[i] * u + m22[i] * v
        if not (abs(un) < _OVERFLOW_AT and abs(vn) < _OVERFLOW_AT):
            raise IntegrationOverflow(f"outward sweep overflowed at step {i}")
        if u * un < 0.0:
            nodes += 1
        u, v = un, vn
        sc = max(abs(u), abs(v))
        if sc > _RENORM_AT:
            u /= sc
            v /= sc
        if i + 1 == i_match:
            u_at, v_at = u, v
    return u_at, v_at, nodes


def _inward_sweep(mats, u: float, v: float, i_match: int) -> tuple[float, float]:
    """Sweep r_max -> the match index by inverting each interval's matrix."""
    m11, m12, m21, m22 = mats
    for i in range(len(m11) - 1, i_match - 1, -1):
        det = m11[i] * m22[i] - m12[i] * m21[i]
        un = (m22[i] * u - m12[i] * v) / det
        vn = (m11[i] * v - m21[i] * u) / det
        if not (abs(un) < _OVERFLOW_AT and abs(vn) < _OVERFLOW_AT):
            raise IntegrationOverflow(f"inward sweep overflowed at step {i}")
        u, v = un, vn
        sc = max(abs(u), abs(v))
        if sc > _RENORM_AT:
            u /= sc
            v /= sc
    return u, v


def _start_conditions(
    params: AnyonParams, l: int, E: float, r_min: float, a0: float
) -> tuple[float, float]:
    """Outward initial (U, V) at r_min.

    With a spin-orbit wall the decaying solution follows the local WKB
    log-derivative U'/U = sqrt(a) - a'/(4a) (whose r -> 0 limit is the
    exp(-2 sqrt(B/r)) asymptotic); without one (B = 0) the regular solution
    is a power law and the neutral start (0, epsilon) suffices.
    """
    if spin_orbit_strength(params, l) == 0.0 or a0 <= 0.0:
        return 0.0, 1.0
    a_prime = -_w_phys_prime(params, l, E, r_min)
    return 1.0, math.sqrt(a0) - a_prime / (4.0 * a0)


def _shoot_on_mesh(
    params: AnyonParams, l: int, E: float, r: np.ndarray, mid: np.ndarray
) -> tuple[float, int]:
    """Scale-invariant Wronskian mismatch and Sturm node count at E."""
    m11, m12, m21, m22, a_nodes = _transfer_matrices(params, l, E, r, mid)
    i_match = int(np.argmax(-a_nodes))
    i_match = min(max(i_match, 5), len(r) - 6)
    mats = (m11.tolist(), m12.tolist(), m21.tolist(), m22.tolist())
    u0, v0 = _start_conditions(params, l, E, float(r[0]), float(a_nodes[0]))
    uo, vo, nodes = _outward_sweep(mats, u0, v0, i_match)
    kappa = math.sqrt((params.m - E) * (params.m + E))
    ui, vi = _inward_sweep(mats, 1.0, -kappa, i_match)
    so = math.hypot(uo, vo)
    si = math.hypot(ui, vi)
    mismatch = (uo / so) * (vi / si) - (vo / so) * (ui / si)
    return mismatch, nodes


def shoot(problem: RadialProblem, E: float) -> tuple[float, int]:
    """One two-sided integration at trial energy E.

    Returns (log-derivative mismatch as a scaled Wronskian in [-1, 1],
    outward node count).  The mismatch vanishes exactly at eigenvalues; the
    node count is the number of eigenvalues below E.
    """
    if not (0.0 < E < problem.params.m):
        raise DomainError(f"bound regime requires 0 < E < m, got E={E}")
    r, mid = _mesh(problem, E / problem.params.m, problem.n_points)
    return _shoot_on_mesh(problem.params, problem.l, E, r, mid)


def _assemble_wavefunction(
    params: AnyonParams, l: int, E: float, r: np.ndarray, mid: np.ndarray
) -> tuple[np.ndarray, int]:
    """Two-sided solution stitched at the match radius, unit-normalized.

    Both sweeps track a running log scale so the deep-forbidden dynamic
    range (hundreds of orders of magnitude) never overflows; the inward
    branch is rescaled to continuity at the match index.  Returns (U on r,
    interior node count of the assembled wavefunction).
    """
    m11, m12, m21, m22, a_nodes = _transfer_matrices(params, l, E, r, mid)
    mats = [m.tolist() for m in (m11, m12, m21, m22)]
    n = len(mats[0])
    i_match = int(np.argmax(-a_nodes))
    i_match = min(max(i_match, 5), n - 5)

    u0, v0 = _start_conditions(params, l, E, float(r[0]), float(a_nodes[0]))
    out_vals = [u0]
    out_logs = [0.0]
    u, v, ls = u0, v0, 0.0
    for i in range(i_match):
        un = mats[0][i] * u + mats[1][i] * v
        vn = mats[2][i] * u + mats[3][i] * v
        u, v = un, vn
        sc = max(abs(u), abs(v))
        if sc > _RENORM_AT:
            u /= sc
            v /= sc
            ls += math.log(sc)
        out_vals.append(u)
        out_logs.append(ls)

    kappa = math.sqrt((params.m - E) * (params.m + E))
    in_vals = [1.0]
    in_logs = [0.0]
    u, v, ls = 1.0, -kappa, 0.0
    for i in range(n - 1, i_match - 1, -1):
        det = mats[0][i] * mats[3][i] - mats[1][i] * mats[2][i]
        un = (mats[3][i] * u - mats[1][i] * v) / det
        vn = (mats[0][i] * v - mats[2][i] * u) / det
        u, v = un, vn
        sc = max(abs(u), abs(v))
        if sc > _RENORM_AT:
            u /= sc
            v /= sc
            ls += math.log(sc)
        in_vals.append(u)
        in_logs.append(ls)
    in_vals.reverse()
    in_logs.reverse()

    def to_array(vals: list[float], logs: list[float]) -> np.ndarray:
        vals_arr = np.asarray(vals)
        logs_arr = np.asarray(logs)
        with np.errstate(divide="ignore"):
            logmag = np.where(vals_arr != 0.0, np.log(np.abs(vals_arr)), -np.inf) + logs_arr
        peak = np.max(logmag)
        return np.sign(vals_arr) * np.exp(logmag - peak)

    u_out = to_array(out_vals, out_logs)          # nodes 0 .. i_match
    u_in = to_array(in_vals, in_logs)             # nodes i_match .. n
    anchor_out, anchor_in = u_out[-1], u_in[0]
    if anchor_in == 0.0 or anchor_out == 0.0:
        # a node sits exactly at the match radius; anchor on the neighbor
        anchor_out, anchor_in = u_out[-2], u_in[1]
    u_full = np.concatenate((u_out, u_in[1:] * (anchor_out / anchor_in)))
    interior = u_full[1:-1]
    nodes = int(np.sum(interior[:-1] * interior[1:] < 0.0))
    norm = math.sqrt(float(np.trapezoid(u_full * u_full, r)))
    return u_full / norm, nodes


def eigen_solve(problem: RadialProblem, n_r: int, tol_ev: float | None = None) -> RadialSolution:
    """Locate the bound state with exactly n_r nodes.

    Node-count bisection in w = xi Z e / sqrt(1 - e^2) brackets the target
    level around the closed-form seed, Brent's method (a safeguarded
    secant) polishes the Wronskian mismatch, and the whole solve is
    repeated on a doubled grid: the returned convergence estimate is
    max(2 |E_fine - E_coarse|, 1e-12 m) and the finer eigenvalue is kept.
    """
    if n_r < 0:
        raise DomainError(f"n_r must be >= 0, got {n_r}")
    params = problem.params
    qn = QuantumNumbers(n_r, problem.l)
    xi_z = params.xi * params.Z
    if xi_z == 0.0:
        raise EigenvalueNotFound("no bound spectrum at xi = 0")
    e_seed = energy_closed_form(params, qn).e_total
    w_seed = xi_z * e_seed / math.sqrt((1.0 - e_seed) * (1.0 + e_seed))

    def solve_at(n_points: int, w_lo: float, w_hi: float) -> float:
        r, mid = _mesh(problem, e_seed, n_points)

        def mismatch_nodes(w: float) -> tuple[float, int]:
            return _shoot_on_mesh(params, problem.l, _e_of_w(xi_z, w) * params.m, r, mid)

        d_lo, nodes_lo = mismatch_nodes(w_lo)
        for _ in range(60):
            if nodes_lo <= n_r:
                break
            w_lo = max(w_lo - 0.5, 1e-3)
            d_lo, nodes_lo = mismatch_nodes(w_lo)
        else:
            raise EigenvalueNotFound(f"could not bracket below level n_r={n_r}")
        d_hi, nodes_hi = mismatch_nodes(w_hi)
        for _ in range(60):
            if nodes_hi >= n_r + 1:
                break
            w_hi += 0.5
            d_hi, nodes_hi = mismatch_nodes(w_hi)
        else:
            raise EigenvalueNotFound(f"no level with n_r={n_r} below E = m")

        # node-count bisection down to a sub-level-spacing window
        while w_hi - w_lo > 0.25:
            w_mid = 0.5 * (w_lo + w_hi)
            d_mid, nodes_mid = mismatch_nodes(w_mid)
            if nodes_mid >= n_r + 1:
                w_hi, d_hi = w_mid, d_mid
            else:
                w_lo, d_lo = w_mid, d_mid
        # the window [w_lo, w_hi] now contains exactly the target eigenvalue,
        # where the scaled Wronskian changes sign
        for _ in range(80):
            if d_lo * d_hi < 0.0:
                break
            w_mid = 0.5 * (w_lo + w_hi)
            d_mid, nodes_mid = mismatch_nodes(w_mid)
            if nodes_mid >= n_r + 1:
                w_hi, d_hi = w_mid, d_mid
            else:
                w_lo, d_lo = w_mid, d_mid
        else:
            raise EigenvalueNotFound(f"mismatch sign change lost for n_r={n_r}")
        return brentq(
            lambda w: mismatch_nodes(w)[0], w_lo, w_hi, xtol=1e-13, rtol=8.9e-16
        )

    w_coarse = solve_at(problem.n_points, w_seed - 0.5, w_seed + 0.5)
    # refine on a doubled grid inside a narrow reconfirmed window
    half_width = 1e-5
    for _ in range(6):
        try:
            w_fine = solve_at(
                2 * problem.n_points, w_coarse - half_width, w_coarse + half_width
            )
            break
        except EigenvalueNotFound:
            half_width *= 8.0
    else:
        raise EigenvalueNotFound(f"refinement window collapsed for n_r={n_r}")

    e_coarse = _e_of_w(xi_z, w_coarse)
    e_fine = _e_of_w(xi_z, w_fine)
    convergence = max(2.0 * abs(e_fine - e_coarse) * params.m, 1e-12 * params.m)
    n_points = 2 * problem.n_points
    if tol_ev is not None:
        for _ in range(2):
            if convergence / params.m * params.mass_ev <= tol_ev:
                break
            n_points *= 2
            w_prev = w_fine
            w_fine = solve_at(n_points, w_fine - half_width, w_fine + half_width)
            e_fine = _e_of_w(xi_z, w_fine)
            convergence = max(
                2.0 * abs(e_fine - _e_of_w(xi_z, w_prev)) * params.m, 1e-12 * params.m
            )

    r, mid = _mesh(problem, e_seed, n_points)
    u_full, nodes = _assemble_wavefunction(params, problem.l, e_fine * params.m, r, mid)
    if nodes != n_r:
        raise EigenvalueNotFound(
            f"converged state has {nodes} nodes, expected {n_r} (E/m = {e_fine})"
        )
    return RadialSolution(
        E=e_fine * params.m,
        e_kinetic=_ekin_of_w(xi_z, w_fine),
        nodes=nodes,
        r=r,
        u=u_full,
        convergence=convergence,
    )


def solve_level(
    params: AnyonParams,
    qn: QuantumNumbers,
    n_points: int = 4000,
    tol_ev: float | None = None,
) -> RadialSolution:
    """Convenience wrapper: build the level-adapted domain and solve it."""
    problem = build_problem(params, qn, n_points=n_points)
    return eigen_solve(problem, qn.n_r, tol_ev=tol_ev)


def energy_oracle(
    params: AnyonParams,
    qn: QuantumNumbers,
    n_points: int = 4000,
    tol_ev: float | None = None,
) -> EnergyResult:
    """The oracle eigenvalue packaged like the semiclassical results."""
    sol = solve_level(params, qn, n_points=n_points, tol_ev=tol_ev)
    return EnergyResult(
        e_total=sol.E / params.m,
        e_kinetic=sol.e_kinetic,
        kinetic_ev=sol.e_kinetic * params.mass_ev,
        method="oracle",
        diagnostics={
            "nodes": float(sol.nodes),
            "residual": 0.0,
            "error_estimate": sol.convergence / params.m,
            "convergence_ev": sol.convergence / params.m * params.mass_ev,
        },
    )
