"""Observables of a solved configuration and their closed-form targets.

Everything here is post-processing: quadratures of tanh(u_i/2) (the
quantized fluxes), reconstruction of the gauge-invariant field maps from
u_1 = ln|q|^2 and u_2 = ln|p|^2, the topological energy bookkeeping, and
a least-squares decay-rate fit on the far-field tail.

Sign branches: the first-order system comes in an upper/lower pair
related by exchanging zeros with poles.  On the upper branch

    Fhat_12 = -2(a T1 + c T2),   Ftilde_12 = -2(b T1 + d T2),
    B_1 = -2(ad-bc) T1,          B_2 = -2(ad-bc) T2,

with T_i = tanh(u_i/2); the lower branch negates all four maps.  The
tanh bound gives |B_i| <= 2|ad-bc| pointwise, with equality approached
at zeros and poles.
"""

import warnings
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .discretization import PLANE, ScalarField, integrate
from .model import predicted_fluxes


def measure_fluxes(sol, cm=None, vc=None):
    """Quadrature of tanh(u_i/2) for i = 1, 2.

    These are the quantities whose values are forced by integrating the
    field equations; compare with predicted_fluxes.  cm and vc are
    accepted for interface symmetry with diagnose and are not needed
    for the measurement itself."""
    if not sol.converged:
        warnings.warn("measuring fluxes of a non-converged solution",
                      stacklevel=2)
    t1 = np.tanh(0.5 * sol.u1.values)
    t2 = np.tanh(0.5 * sol.u2.values)
    dom = sol.u1.domain
    return (integrate(ScalarField(dom, t1)), integrate(ScalarField(dom, t2)))


def _branch_factor(sign):
    if sign == "upper":
        return -2.0
    if sign == "lower":
        return 2.0
    raise ValueError("sign branch must be 'upper' or 'lower'")


def reconstruct_fields(sol, pc, sign="upper"):
    """Gauge-invariant field maps from u_1, u_2 and physical couplings.

    Returns a dict of ScalarFields: q2 = |q|^2, p2 = |p|^2, Fhat, Ftilde
    (the two curvatures), B1, B2 (the induced magnetic fields).  e^u
    overflow at deep pole spikes is kept as +inf sentinels; the tanh
    maps are bounded and never overflow."""
    fac = _branch_factor(sign)
    dom = sol.u1.domain
    t1 = np.tanh(0.5 * sol.u1.values)
    t2 = np.tanh(0.5 * sol.u2.values)
    with np.errstate(over="ignore"):
        q2 = np.exp(sol.u1.values)
        p2 = np.exp(sol.u2.values)
    d2 = pc.a * pc.d - pc.b * pc.c
    maps = {
        "q2": q2,
        "p2": p2,
        "Fhat": fac * (pc.a * t1 + pc.c * t2),
        "Ftilde": fac * (pc.b * t1 + pc.d * t2),
        "B1": fac * d2 * t1,
        "B2": fac * d2 * t2,
    }
    return {k: ScalarField(dom, v) for k, v in maps.items()}


def curvature_integrals(sol, pc, sign="upper"):
    """(int Fhat, int Ftilde) from the measured tanh fluxes."""
    fac = _branch_factor(sign)
    t1m, t2m = measure_fluxes(sol)
    return (fac * (pc.a * t1m + pc.c * t2m),
            fac * (pc.b * t1m + pc.d * t2m))


def topological_energy(sol, pc, vc, sign="upper"):
    """Total energy via the topological identity

        E = 2[(a+c) int Fhat + (b+d) int Ftilde] + 8 pi (P1 + P2),

    using measured curvature integrals and the configured Thom values
    P1, P2.  At a converged solution this equals 4 pi (N1+N2+P1+P2)."""
    fh, ft = curvature_integrals(sol, pc, sign)
    return (2.0 * ((pc.a + pc.c) * fh + (pc.b + pc.d) * ft)
            + 8.0 * np.pi * (vc.P1 + vc.P2))


# ----------------------------------------------------------------------
# Far-field decay fit (plane)
# ----------------------------------------------------------------------

def fit_decay_rate(sol, window):
    """Least-squares exponential rate of the squared-field quantity.

    Fits ln(u1^2 + rho u2^2), rho = a12/a21, against r = |x| over grid
    nodes in the annulus window = (r_lo, r_hi) and returns the negated
    slope.  The window must lie inside the truncation square (r_hi <= R,
    the outer corners see the artificial boundary) and start beyond all
    vortex points; after discarding values below 1e-300 at least 100
    nodes must remain."""
    dom = sol.u1.domain
    if dom.kind != PLANE:
        raise ValueError("decay fit requires a plane solution")
    r_lo, r_hi = float(window[0]), float(window[1])
    if not (0.0 < r_lo < r_hi):
        raise ValueError("decay window must satisfy 0 < r_lo < r_hi")
    if r_hi > dom.R:
        raise ValueError(
            "decay window reaches past r = %g into the truncation-"
            "polluted zone" % dom.R)
    rho = sol.problem.cm.rho if sol.problem is not None else 1.0
    if sol.problem is not None:
        rmax = 0.0
        for pts in (sol.problem.vc.zeros1, sol.problem.vc.poles1,
                    sol.problem.vc.zeros2, sol.problem.vc.poles2):
            for (x, y, _m) in pts:
                rmax = max(rmax, float(np.hypot(x, y)))
        if r_lo <= rmax:
            raise ValueError(
                "decay window must start beyond all vortex points "
                "(outermost at r = %g)" % rmax)
    X, Y = dom.meshgrid()
    r = np.hypot(X, Y)
    w = sol.u1.values ** 2 + rho * sol.u2.values ** 2
    mask = (r >= r_lo) & (r <= r_hi) & (w >= 1e-300)
    if int(mask.sum()) < 100:
        raise ValueError("decay window holds fewer than 100 usable nodes")
    rr = r[mask]
    lw = np.log(w[mask])
    slope = np.polyfit(rr, lw, 1)[0]
    return -float(slope)


# ----------------------------------------------------------------------
# Aggregate report
# ----------------------------------------------------------------------

@dataclass
class DiagnosticsReport:
    measured_T1: float
    measured_T2: float
    flux_errors: tuple
    chern_measured: Optional[tuple] = None
    charges_measured: Optional[tuple] = None
    energy_topological: Optional[float] = None
    decay_rate_measured: Optional[float] = None
    decay_window: Optional[tuple] = None
    field_maps: Optional[dict] = None


def diagnose(sol, cm, vc, pc=None, sign="upper", window=None):
    """Full report: measured fluxes against predictions, and in physical
    mode the curvature maps, Chern numbers, charges, and topological
    energy.  Plane solutions also get a decay-rate fit, by default over
    the annulus [R/2, 5R/6]."""
    t1m, t2m = measure_fluxes(sol, cm, vc)
    pred = predicted_fluxes(cm, vc, pc)
    report = DiagnosticsReport(
        measured_T1=t1m, measured_T2=t2m,
        flux_errors=(abs(t1m - pred.T1), abs(t2m - pred.T2)))
    if pc is not None:
        maps = reconstruct_fields(sol, pc, sign)
        fh = integrate(maps["Fhat"])
        ft = integrate(maps["Ftilde"])
        report.chern_measured = (fh / (2.0 * np.pi), ft / (2.0 * np.pi))
        report.charges_measured = (integrate(maps["B1"]),
                                   integrate(maps["B2"]))
        report.energy_topological = topological_energy(sol, pc, vc, sign)
        report.field_maps = maps
    dom = sol.u1.domain
    if dom.kind == PLANE:
        defaulted = window is None
        if defaulted:
            window = (0.5 * dom.R, 5.0 * dom.R / 6.0)
        report.decay_window = (float(window[0]), float(window[1]))
        try:
            report.decay_rate_measured = fit_decay_rate(sol, window)
        except ValueError:
            if not defaulted:
                raise
            report.decay_rate_measured = None  # e.g. vortex-free field
    return report
