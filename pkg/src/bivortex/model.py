"""Coupling parameters, vortex data, and the closed-form predictions.

Everything here is exact arithmetic read off the structure of the coupled
system

    lap u_1 = a11 T(u_1) + a12 T(u_2) + 4 pi (zero deltas - pole deltas),
    lap u_2 = a21 T(u_1) + a22 T(u_2) + 4 pi (zero deltas - pole deltas),

T(u) = tanh(u/2): the solvability condition on a torus of area |S|, the
quantized integrals of T(u_i), the magnetic charges and Chern numbers in
physical-couplings mode, the minimum energy, and the exponential decay
constants of the planar solutions.  No PDE is solved in this module.
"""

import numpy as np
from dataclasses import dataclass
from typing import Optional


# ----------------------------------------------------------------------
# Couplings
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class PhysicalCouplings:
    """Charge parameters (a, b, c, d); requires ad - bc != 0."""
    a: float
    b: float
    c: float
    d: float

    def __post_init__(self):
        if self.a * self.d - self.b * self.c == 0.0:
            raise ValueError("degenerate couplings: ad - bc must be nonzero")

    @property
    def det2(self):
        """ad - bc, the determinant of the charge matrix."""
        return self.a * self.d - self.b * self.c


@dataclass(frozen=True)
class CouplingMatrix:
    """Coefficient matrix a_ij of the reduced system.

    Accepted parameter range: a11 > 0, a12*a21 > 0 (or a12 = a21 = 0,
    the decoupled mode), and det = a11 a22 - a12 a21 > 0.  Symmetry is
    not assumed.
    """
    a11: float
    a12: float
    a21: float
    a22: float

    def __post_init__(self):
        if not self.a11 > 0.0:
            raise ValueError("a11 must be positive")
        if self.a12 * self.a21 <= 0.0 and not (self.a12 == self.a21 == 0.0):
            raise ValueError("need a12*a21 > 0, or a12 = a21 = 0")
        if not self.det > 0.0:
            raise ValueError("need det = a11 a22 - a12 a21 > 0")

    @property
    def det(self):
        return self.a11 * self.a22 - self.a12 * self.a21

    @property
    def decoupled(self):
        return self.a12 == 0.0 and self.a21 == 0.0

    @property
    def rho(self):
        """Symmetrizing ratio a12/a21 (1 in decoupled mode)."""
        if self.decoupled:
            return 1.0
        return self.a12 / self.a21

    def matrix(self):
        return np.array([[self.a11, self.a12], [self.a21, self.a22]])


def couplings_from_physical(pc):
    """Coefficient matrix induced by physical couplings (a, b, c, d):

    a11 = 4(a^2+b^2), a12 = a21 = 4(ac+bd), a22 = 4(c^2+d^2);
    the determinant is then 16(ad-bc)^2 > 0.
    """
    a, b, c, d = pc.a, pc.b, pc.c, pc.d
    return CouplingMatrix(a11=4.0 * (a * a + b * b),
                          a12=4.0 * (a * c + b * d),
                          a21=4.0 * (a * c + b * d),
                          a22=4.0 * (c * c + d * d))


# ----------------------------------------------------------------------
# Vortex configurations
# ----------------------------------------------------------------------

def _normalize(points):
    out = []
    for entry in points:
        if len(entry) == 2 and np.ndim(entry[0]) == 1:
            (x, y), m = entry
        else:
            x, y, m = entry
        if int(m) != m or m < 1:
            raise ValueError("multiplicity must be a positive integer, got %r"
                             % (m,))
        out.append((float(x), float(y), int(m)))
    return tuple(out)


@dataclass(frozen=True)
class VortexConfiguration:
    """Prescribed zeros and poles of the two species.

    Each entry is (x, y, multiplicity).  Totals N1, P1, N2, P2 are the
    multiplicity sums.  Geometric validity (inside the domain, off the
    grid nodes) is enforced at solve time when a grid is known.
    """
    zeros1: tuple = ()
    poles1: tuple = ()
    zeros2: tuple = ()
    poles2: tuple = ()

    def __post_init__(self):
        for name in ("zeros1", "poles1", "zeros2", "poles2"):
            object.__setattr__(self, name, _normalize(getattr(self, name)))

    @property
    def N1(self):
        return sum(m for _, _, m in self.zeros1)

    @property
    def P1(self):
        return sum(m for _, _, m in self.poles1)

    @property
    def N2(self):
        return sum(m for _, _, m in self.zeros2)

    @property
    def P2(self):
        return sum(m for _, _, m in self.poles2)

    def species(self, i):
        """(zeros, poles) lists of species i in {1, 2}."""
        if i == 1:
            return self.zeros1, self.poles1
        return self.zeros2, self.poles2

    def all_points(self):
        for group in (self.zeros1, self.poles1, self.zeros2, self.poles2):
            for x, y, _ in group:
                yield (x, y)

    @property
    def empty(self):
        return not (self.zeros1 or self.poles1 or self.zeros2 or self.poles2)

    def swapped(self):
        """Zeros and poles exchanged in both species."""
        return VortexConfiguration(zeros1=self.poles1, poles1=self.zeros1,
                                   zeros2=self.poles2, poles2=self.zeros2)

    def union(self, other):
        return VortexConfiguration(zeros1=self.zeros1 + other.zeros1,
                                   poles1=self.poles1 + other.poles1,
                                   zeros2=self.zeros2 + other.zeros2,
                                   poles2=self.poles2 + other.poles2)


# ----------------------------------------------------------------------
# Feasibility (torus solvability condition)
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class FeasibilityReport:
    lhs1: float
    lhs2: float
    rhs: float
    feasible: bool


def check_torus_feasibility(cm, vc, area):
    """Necessary and sufficient solvability condition on a torus:

        max{ |a22 (N1-P1) - a12 (N2-P2)|,
             |a11 (N2-P2) - a21 (N1-P1)| }  <  det * area / (4 pi).
    """
    if area <= 0.0:
        raise ValueError("area must be positive")
    dn1 = vc.N1 - vc.P1
    dn2 = vc.N2 - vc.P2
    lhs1 = abs(cm.a22 * dn1 - cm.a12 * dn2)
    lhs2 = abs(cm.a11 * dn2 - cm.a21 * dn1)
    rhs = cm.det * area / (4.0 * np.pi)
    return FeasibilityReport(lhs1=lhs1, lhs2=lhs2, rhs=rhs,
                             feasible=max(lhs1, lhs2) < rhs)


# ----------------------------------------------------------------------
# Decay constants
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class DecayRates:
    """Exponential constants governing the planar far field.

    lambda1: smaller eigenvalue of the symmetrized coefficient matrix
             [[a11, a12], [a12, (a12/a21) a22]].
    lambda0: lambda1 * min{1, a21/a12}, the theorem lower-bound constant.
    sigma:   physical-couplings constant, None outside physical mode.
    """
    lambda1: float
    lambda0: float
    sigma: Optional[float] = None


def symmetrized_matrix(cm):
    """The 2x2 symmetric matrix whose smaller eigenvalue is lambda1."""
    rho = cm.rho
    return np.array([[cm.a11, cm.a12], [cm.a12, rho * cm.a22]])


def decay_rates(cm, pc=None):
    """Closed-form decay constants; sigma only with physical couplings.

    Decoupled mode reduces to two scalar problems and returns
    lambda1 = lambda0 = min(a11, a22) with sigma absent.
    """
    if cm.decoupled:
        lam = min(cm.a11, cm.a22)
        return DecayRates(lambda1=lam, lambda0=lam)
    rho = cm.rho
    s = cm.a11 + rho * cm.a22
    lam1 = 0.5 * (s - np.sqrt(s * s - 4.0 * rho * cm.det))
    lam0 = lam1 * min(1.0, cm.a21 / cm.a12)
    sigma = None
    if pc is not None:
        ssq = pc.a ** 2 + pc.b ** 2 + pc.c ** 2 + pc.d ** 2
        sigma = np.sqrt(8.0 * (ssq - np.sqrt(ssq * ssq - 4.0 * pc.det2 ** 2)))
    return DecayRates(lambda1=float(lam1), lambda0=float(lam0), sigma=sigma)


# ----------------------------------------------------------------------
# Flux, charge, and energy predictions
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class FluxPrediction:
    """Quantized integrals forced by integrating the field equations.

    T1, T2 are the predicted integrals of tanh(u_i/2); chern and charge
    values require physical couplings and are None otherwise (absent,
    not zero).  energy = 4 pi (N1+N2+P1+P2) is the BPS minimum.
    """
    T1: float
    T2: float
    energy: float
    chern1: Optional[float] = None
    chern2: Optional[float] = None
    charge1: Optional[float] = None
    charge2: Optional[float] = None


def predicted_fluxes(cm, vc, pc=None):
    """Closed-form T-integrals, Chern fluxes, charges, and energy.

    Integrating each equation over the domain kills the Laplacian and
    leaves the 2x2 linear system a_ij * integral(T_j) = 4 pi (P_i - N_i),
    solved here explicitly.
    """
    dp1 = vc.P1 - vc.N1
    dp2 = vc.P2 - vc.N2
    T1 = (4.0 * np.pi / cm.det) * (cm.a22 * dp1 - cm.a12 * dp2)
    T2 = (4.0 * np.pi / cm.det) * (cm.a11 * dp2 - cm.a21 * dp1)
    energy = 4.0 * np.pi * (vc.N1 + vc.N2 + vc.P1 + vc.P2)
    if pc is None:
        return FluxPrediction(T1=T1, T2=T2, energy=energy)
    a, b, c, d = pc.a, pc.b, pc.c, pc.d
    den = pc.det2
    dn1, dn2 = -dp1, -dp2
    chern1 = (d * dn1 - b * dn2) / den
    chern2 = (a * dn2 - c * dn1) / den
    charge1 = 2.0 * np.pi * ((c * c + d * d) * dn1 - (a * c + b * d) * dn2) / den
    charge2 = 2.0 * np.pi * ((a * a + b * b) * dn2 - (a * c + b * d) * dn1) / den
    return FluxPrediction(T1=T1, T2=T2, energy=energy,
                          chern1=chern1, chern2=chern2,
                          charge1=charge1, charge2=charge2)
