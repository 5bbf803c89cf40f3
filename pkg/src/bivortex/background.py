"""Singular background fields absorbing the vortex delta sources.

For prescribed zeros z' and poles z'' of species i, the background

    u_{0,i}(x) = -1/2 sum_zeros m ln(1 + lam |x-z'|^-4)
                 +1/2 sum_poles m ln(1 + lam |x-z''|^-4)

carries exactly the delta sources of the field equation,

    lap u_{0,i} = 4 pi (zero deltas - pole deltas) - f_i,

with the smooth residual source

    f_i(x) = 8 sum_zeros m lam |x-z'|^2 / (lam + |x-z'|^4)^2
             - 8 sum_poles m lam |x-z''|^2 / (lam + |x-z''|^4)^2,

so the remaining unknown v_i = u_i - u_{0,i} is smooth.  On the torus the
same formulas are summed over translated copies z + (k1 L1, k2 L2) with
|k1|, |k2| <= copies (each copy contributes its exact delta; the truncated
tail is smooth and O(lam (copies L)^-4)).  An alternative abstract mode
replaces the lattice sum by the discrete Green's function with the mean
source spread into the constant (4 pi / |S|)(N_i - P_i).

Direct integration gives integral(f_i) = 4 pi (N_i - P_i); source_balance
reports the quadrature defect against that value.
"""

import numpy as np
from dataclasses import dataclass

from .discretization import TORUS, PLANE, ScalarField, solve_poisson_torus

PLANE_MODE = "plane"
LATTICE_MODE = "lattice"
ABSTRACT_MODE = "abstract"

_NODE_TOL = 1e-9  # fraction of a cell treated as "on a node"


@dataclass
class BackgroundData:
    """Background fields u_{0,i} and smooth sources f_i on a grid."""
    u01: ScalarField
    u02: ScalarField
    f1: ScalarField
    f2: ScalarField
    lam: float
    copies: int
    mode: str


# ----------------------------------------------------------------------
# Point validation
# ----------------------------------------------------------------------

def _wrap_torus_point(x, y, domain):
    return (x % domain.L1, y % domain.L2)

def _validate_points(vc, domain):
    """Check every vortex point is inside the domain and off the nodes."""
    hx, hy = domain.spacing
    for (x, y) in vc.all_points():
        if domain.kind == PLANE:
            if not (abs(x) < domain.R and abs(y) < domain.R):
                raise ValueError("vortex point (%g, %g) outside the square"
                                 % (x, y))
            ix = (x + domain.R) / hx
            iy = (y + domain.R) / hy
        else:
            x, y = _wrap_torus_point(x, y, domain)
            ix = x / hx
            iy = y / hy
        if (abs(ix - round(ix)) < _NODE_TOL
                and abs(iy - round(iy)) < _NODE_TOL):
            raise ValueError("vortex point (%g, %g) lies on a grid node; "
                             "shift it or enable auto_offset" % (x, y))


# ----------------------------------------------------------------------
# Analytic evaluation
# ----------------------------------------------------------------------

def _signed_sources(vc, species):
    zeros, poles = vc.species(species)
    return ([(x, y, m, +1.0) for x, y, m in zeros]
            + [(x, y, m, -1.0) for x, y, m in poles])


def _accumulate(X, Y, sources, lam, shifts):
    """Sum the u0 and f kernels of translated sources at targets (X, Y)."""
    u0 = np.zeros_like(X)
    f = np.zeros_like(X)
    for (sx, sy, m, sgn) in sources:
        for (dx, dy) in shifts:
            r2 = (X - (sx + dx)) ** 2 + (Y - (sy + dy)) ** 2
            r4 = r2 * r2
            u0 += (-0.5 * sgn * m) * np.log1p(lam / r4)
            f += (8.0 * sgn * m * lam) * r2 / (lam + r4) ** 2
    return u0, f


def background_at_points(vc, lam, x, y, shifts=((0.0, 0.0),)):
    """Analytic (u01, u02, f1, f2) at arbitrary points; plane formulas,
    optionally lattice-shifted.  Used for off-grid sampling."""
    X = np.asarray(x, dtype=float)
    Y = np.asarray(y, dtype=float)
    u01, f1 = _accumulate(X, Y, _signed_sources(vc, 1), lam, shifts)
    u02, f2 = _accumulate(X, Y, _signed_sources(vc, 2), lam, shifts)
    return u01, u02, f1, f2


def _lattice_shifts(domain, copies):
    ks = range(-copies, copies + 1)
    return [(k1 * domain.L1, k2 * domain.L2) for k1 in ks for k2 in ks]


# ----------------------------------------------------------------------
# Background constructors
# ----------------------------------------------------------------------

def plane_background(vc, lam, grid):
    """Analytic background on a truncated-plane grid."""
    if grid.kind != PLANE:
        raise ValueError("plane_background needs a plane grid")
    if lam <= 0.0:
        raise ValueError("lam must be positive")
    _validate_points(vc, grid)
    X, Y = grid.meshgrid()
    u01, u02, f1, f2 = background_at_points(vc, lam, X, Y)
    return BackgroundData(u01=ScalarField(grid, u01),
                          u02=ScalarField(grid, u02),
                          f1=ScalarField(grid, f1),
                          f2=ScalarField(grid, f2),
                          lam=lam, copies=0, mode=PLANE_MODE)


def torus_background(vc, lam, copies, grid):
    """Lattice-sum background over (2*copies+1)^2 translated copies."""
    if grid.kind != TORUS:
        raise ValueError("torus_background needs a torus grid")
    if lam <= 0.0:
        raise ValueError("lam must be positive")
    if copies < 1:
        raise ValueError("torus lattice sum needs copies >= 1")
    wrapped = VortexWrap(vc, grid)
    _validate_points(wrapped.vc, grid)
    X, Y = grid.meshgrid()
    shifts = _lattice_shifts(grid, copies)
    u01, u02, f1, f2 = background_at_points(wrapped.vc, lam, X, Y, shifts)
    return BackgroundData(u01=ScalarField(grid, u01),
                          u02=ScalarField(grid, u02),
                          f1=ScalarField(grid, f1),
                          f2=ScalarField(grid, f2),
                          lam=lam, copies=int(copies), mode=LATTICE_MODE)


def torus_background_abstract(vc, lam, grid):
    """Discrete-Green's-function background: each vortex delta sits on its
    nearest node, u_{0,i} is the zero-mean spectral solution of

        lap u_{0,i} = 4 pi (deltas) - (4 pi / |S|)(N_i - P_i),

    and f_i is the constant (4 pi / |S|)(N_i - P_i).  With this choice the
    quantized-integral identity holds exactly in the discrete system."""
    if grid.kind != TORUS:
        raise ValueError("abstract background needs a torus grid")
    hx, hy = grid.spacing
    area = grid.area
    fields = {}
    for i in (1, 2):
        spikes = np.zeros(grid.shape)
        net = 0
        for (x, y, m, sgn) in _signed_sources(vc, i):
            x, y = _wrap_torus_point(x, y, grid)
            ix = int(round(x / hx)) % grid.n1
            iy = int(round(y / hy)) % grid.n2
            spikes[ix, iy] += sgn * m * 4.0 * np.pi / (hx * hy)
            net += int(sgn * m)
        g = 4.0 * np.pi * net / area
        u0 = solve_poisson_torus(ScalarField(grid, spikes))
        fields["u0%d" % i] = u0
        fields["f%d" % i] = ScalarField(grid, np.full(grid.shape, g))
    return BackgroundData(u01=fields["u01"], u02=fields["u02"],
                          f1=fields["f1"], f2=fields["f2"],
                          lam=lam, copies=0, mode=ABSTRACT_MODE)


class VortexWrap:
    """Vortex configuration with torus points reduced to the fundamental
    cell (pure bookkeeping; multiplicities untouched)."""

    def __init__(self, vc, domain):
        from .model import VortexConfiguration
        def wrap(group):
            return tuple((x % domain.L1, y % domain.L2, m)
                         for x, y, m in group)
        self.vc = VortexConfiguration(zeros1=wrap(vc.zeros1),
                                      poles1=wrap(vc.poles1),
                                      zeros2=wrap(vc.zeros2),
                                      poles2=wrap(vc.poles2))


# ----------------------------------------------------------------------
# Consistency diagnostics
# ----------------------------------------------------------------------

def source_balance(bd, vc):
    """Quadrature defect of the source fields against the exact integrals:

        defect_i = quadrature(f_i) - 4 pi (N_i - P_i).

    Returns the pair (defect_1, defect_2)."""
    from .discretization import integrate
    d1 = integrate(bd.f1) - 4.0 * np.pi * (vc.N1 - vc.P1)
    d2 = integrate(bd.f2) - 4.0 * np.pi * (vc.N2 - vc.P2)
    return (d1, d2)


def sup_f_bound(vc, lam, species):
    """The a priori bound sup|f_i| <= 8 M_i lam^(-1/3), M_i the total
    multiplicity of species i (crude two-case bound; valid for lam >= 1)."""
    zeros, poles = vc.species(species)
    M = sum(m for _, _, m in zeros) + sum(m for _, _, m in poles)
    return 8.0 * M * lam ** (-1.0 / 3.0)
