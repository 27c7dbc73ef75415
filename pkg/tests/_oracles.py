"""Frozen reference values and high-precision recomputation helpers.

The constants below were produced offline: energies and expansion
coefficients with mpmath at 40 digits, turning radii from mpmath.polyroots
cross-checked by interval bisection, and the four-decimal table columns
transcribed from the reference comparison the default CLI run reproduces.
The mp_* helpers recompute a few of the same quantities live so tests can
also probe arbitrary parameter points, not just the frozen ones.
"""

import mpmath as mp

ALPHA = 7.2973525693e-3
MASS_EV = 510998.95

# closed-form kinetic energies, eV (S=1/2, xi=alpha, Z=1, m=m_e)
CLOSED_KINETIC_EV = {
    (0, 1): -6.0466020191191125,
    (1, 1): -2.176839667467063,
    (2, 1): -1.1106443152758496,
    (0, 2): -2.17689627504322,
    (1, 2): -1.1106649451059858,
    (2, 2): -0.6718846325946782,
}

# nonrelativistic limit formula at the same parameters, eV
NONREL_KINETIC_EV = {
    (0, 1): -6.046974721364394,
    (1, 1): -2.176910899691182,
    (2, 1): -1.110668826373052,
    (0, 2): -2.176910899691182,
    (1, 2): -1.110668826373052,
    (2, 2): -0.6718860801515993,
}

# four-decimal comparison columns the zero-argument CLI run reproduces
TABLE_ANALYTIC_EV = {
    (0, 1): -6.0464,
    (0, 2): -2.1769,
    (1, 1): -2.1768,
    (1, 2): -1.1107,
    (2, 1): -1.1106,
    (2, 2): -0.6719,
}
TABLE_NUMERIC_EV = {
    (0, 1): -6.0467,
    (0, 2): -2.1769,
    (1, 1): -2.1770,
    (1, 2): -1.1106,
    (2, 1): -1.1106,
    (2, 2): -0.6718,
}

SIGMA_L = {1: 5.9541580242459486e-05, 2: 1.3722833996145517e-05}
SIGMA_TILDE = {1: 5.9536824301078655e-05, 2: 1.3722559962245755e-05}

# exact principal denominator vs its order-xi^2 expansion at (n'=0, l=1)
PRINCIPAL_N_01 = (1.5000329155485093, 1.5000329111470407)

LAMBDA_SQ_ALPHA_L2 = 3.9999467486454794
L_PRIME = {1: 1.118033988749895, 2: 2.0615528128088303}

# cubic turning radii at the closed-form E(0,1), S=1/2, xi=alpha, Z=1, m=1
E_TOTAL_01 = 0.9999881670950221
TURNING_01 = (-0.01631436060292974, 78.52918775028589, 538.1834837819966)

# momentum_sq spot values at E/m = 0.99998817 (S=1/2, xi=alpha, Z=1, l=1):
# at r = lambda^2 m/(2 xi Z E) the Coulomb and centrifugal terms cancel
# exactly, leaving k^2 - B/r^3 < 0; the peak sits at twice that radius.
W_CANCEL_POINT = (68.51516139992262, -2.371059301980456e-05)
W_PEAK_POINT = (137.05479579713244, 2.9586730418135295e-05)

# phase integral at the closed-form E(0,1); pi/2 + 4.0252e-8
PHASE_01 = 1.570796367047333


def mp_closed_kinetic_ev(S, xi, Z, n_r, l, mass_ev=MASS_EV, dps=40):
    """Closed-form kinetic energy recomputed at high precision."""
    with mp.workdps(dps):
        xiZ = mp.mpf(xi) * mp.mpf(Z)
        lam = mp.sqrt(l * l - xiZ * xiZ)
        lp = mp.sqrt(l * l + mp.mpf("0.25"))
        sig = 2 * xiZ * xiZ * mp.mpf(S) * lp / lam**3
        big_n = n_r + mp.mpf("0.5") + lam + sig
        e = 1 / mp.sqrt(1 + xiZ * xiZ / (big_n * big_n))
        return float((e - 1) * mp.mpf(mass_ev))


def mp_cubic_roots(k2, cc, lam2, b, dps=40):
    """Sorted real roots of k2 r^3 + cc r^2 - lam2 r - b via mpmath."""
    with mp.workdps(dps):
        roots = mp.polyroots([mp.mpf(k2), mp.mpf(cc), -mp.mpf(lam2), -mp.mpf(b)])
        return sorted(float(mp.re(z)) for z in roots)


def mp_phase(S, xi, Z, m, l, E, dps=30):
    """Phase integral between the outer turning points by tanh-sinh
    quadrature; an algorithmically independent check of the library's
    substitution-plus-Gauss scheme."""
    with mp.workdps(dps):
        xiZ = mp.mpf(xi) * mp.mpf(Z)
        mm = mp.mpf(m)
        ee = mp.mpf(E)
        k2 = ee * ee - mm * mm
        cc = 2 * xiZ * ee
        lam2 = l * l - xiZ * xiZ
        b = 4 * xiZ * mp.mpf(S) * mp.sqrt(l * l + mp.mpf("0.25")) / mm
        if b == 0:
            disc = cc * cc + 4 * k2 * lam2
            s = mp.sqrt(disc)
            r2, r3 = 2 * lam2 / (cc + s), (cc + s) / (2 * (-k2))
        else:
            roots = sorted(
                mp.re(z) for z in mp.polyroots([k2, cc, -lam2, -b])
            )
            r2, r3 = roots[1], roots[2]

        def w_of(r):
            return k2 + cc / r - lam2 / r**2 - b / r**3

        # roundoff can push w_of fractionally negative at the endpoints,
        # giving the quadrature a vanishing imaginary part; drop it
        return float(mp.re(mp.quad(lambda r: mp.sqrt(w_of(r)), [r2, r3])))
