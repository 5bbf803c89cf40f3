"""Radial ground-truth solver for coincident-origin configurations.

When all zeros and poles of both species sit at the origin with signed
net multiplicities n1, n2 (zeros positive, poles negative), uniqueness
makes the planar solution radial, and the system reduces to the ODEs

    u_i'' + u_i'/r = a_i1 tanh(u_1/2) + a_i2 tanh(u_2/2),   r > 0,

with u_i(r) = 2 n_i ln r + w_i(r) and w_i smooth at the origin.  The log
part is harmonic away from r = 0, so the smooth parts satisfy the same
operator: w_i'' + w_i'/r = rhs_i.  Boundary conditions: w_i'(0) = 0
(regularity) and a Robin outer condition u_i' = -sqrt(lambda1) u_i at
r = R, which removes the O(e^{-sqrt(lambda1) R}) Dirichlet truncation
bias from the profile.

This module is deliberately independent of the 2D machinery (different
discretization, different linear algebra) so it can serve as an oracle.
"""

import numpy as np
from dataclasses import dataclass

import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .model import decay_rates


@dataclass(frozen=True)
class RadialProblem:
    """Coincident-origin data: signed net multiplicities and the mesh.

    The default mesh keeps the roundoff floor of the stencil residual
    (about |w| eps / h^2) an order below the 1e-10 solve tolerance;
    finer meshes push that floor up, not down.
    """
    cm: object
    n1: int
    n2: int
    R: float = 14.0
    nodes: int = 2001

    def __post_init__(self):
        if self.R <= 0.0:
            raise ValueError("outer radius must be positive")
        if self.nodes < 1000:
            raise ValueError("radial mesh needs at least 1000 nodes")


@dataclass
class RadialSolution:
    r: np.ndarray
    u1: np.ndarray
    u2: np.ndarray
    w1: np.ndarray
    w2: np.ndarray
    n1: int
    n2: int
    residual_sup: float
    iterations: int
    converged: bool


def _nonlinearity(rp, r, w1, w2):
    """u_i, tanh(u_i/2), and its derivative, with exact r=0 limits."""
    n = (rp.n1, rp.n2)
    u, T, Tp = [], [], []
    for ni, wi in ((rp.n1, w1), (rp.n2, w2)):
        ui = np.empty(rp.nodes)
        ui[1:] = 2.0 * ni * np.log(r[1:]) + wi[1:]
        ui[0] = wi[0]
        ti = np.tanh(0.5 * ui)
        tpi = 0.5 / np.cosh(0.5 * np.clip(ui, -700.0, 700.0)) ** 2
        if ni != 0:
            ti[0] = -float(np.sign(ni))
            tpi[0] = 0.0
        u.append(ui)
        T.append(ti)
        Tp.append(tpi)
    return u, T, Tp


def _assemble(rp, w1, w2, kappa, want_jacobian=True):
    """Residual vector (and Jacobian) of the discrete radial system.

    Unknown layout: x[2*j + i] = w_{i+1}(r_j).  The Laplacian stencil is
    central; r=0 uses the symmetry limit (w''+w'/r -> 4(w_1-w_0)/h^2);
    r=R eliminates the ghost node through the Robin condition.
    """
    M = rp.nodes - 1
    h = rp.R / M
    r = h * np.arange(rp.nodes)
    cm = rp.cm
    a = np.array([[cm.a11, cm.a12], [cm.a21, cm.a22]])
    n = (rp.n1, rp.n2)
    w = (np.asarray(w1), np.asarray(w2))

    u, T, Tp = _nonlinearity(rp, r, w[0], w[1])

    inv_h2 = 1.0 / (h * h)
    cg = inv_h2 + 1.0 / (2.0 * h * rp.R)  # ghost-node coefficient at r=R

    F = np.zeros(2 * rp.nodes)
    blocks = []
    for i in (0, 1):
        wi = w[i]
        rhs = a[i, 0] * T[0] + a[i, 1] * T[1]
        lap = np.empty(rp.nodes)
        lap[0] = 4.0 * inv_h2 * (wi[1] - wi[0])
        lap[1:M] = (wi[2:] - 2.0 * wi[1:M] + wi[:M - 1]) * inv_h2 \
            + (wi[2:] - wi[:M - 1]) / (2.0 * h * r[1:M])
        uM = 2.0 * n[i] * np.log(rp.R) + wi[M]
        ghost = wi[M - 1] - 2.0 * h * (kappa * uM + 2.0 * n[i] / rp.R)
        lap[M] = (ghost - 2.0 * wi[M] + wi[M - 1]) * inv_h2 \
            + (ghost - wi[M - 1]) / (2.0 * h * rp.R)
        F[i::2] = lap - rhs

    if not want_jacobian:
        return F, None, r, u

    rows, cols, vals = [], [], []

    def put(rw, cl, vl):
        rows.append(rw)
        cols.append(cl)
        vals.append(vl)

    j_int = np.arange(1, M)
    for i in (0, 1):
        # diagonal Laplacian part
        diag = np.full(rp.nodes, -2.0 * inv_h2)
        diag[0] = -4.0 * inv_h2
        diag[M] = -2.0 * inv_h2 - 2.0 * h * kappa * cg
        lower = np.zeros(rp.nodes)  # coefficient of w_{j-1} in row j
        lower[j_int] = inv_h2 - 1.0 / (2.0 * h * r[j_int])
        lower[M] = 2.0 * inv_h2  # direct + ghost contribution
        upper = np.zeros(rp.nodes)  # coefficient of w_{j+1} in row j
        upper[0] = 4.0 * inv_h2
        upper[j_int] = inv_h2 + 1.0 / (2.0 * h * r[j_int])

        rws = 2 * np.arange(rp.nodes) + i
        put(rws, rws, diag)
        put(rws[1:], rws[1:] - 2, lower[1:])
        put(rws[:M], rws[:M] + 2, upper[:M])
        # nonlinear coupling to both fields at the same node
        for k in (0, 1):
            put(rws, 2 * np.arange(rp.nodes) + k, -a[i, k] * Tp[k])

    rows = np.concatenate(rows)
    cols = np.concatenate(cols)
    vals = np.concatenate(vals)
    J = sp.csr_matrix((vals, (rows, cols)),
                      shape=(2 * rp.nodes, 2 * rp.nodes))
    return F, J, r, u


def solve_radial(rp, tol=1e-10, max_iter=60):
    """Damped Newton relaxation of the radial system on the w unknowns."""
    kappa = float(np.sqrt(decay_rates(rp.cm).lambda1))
    w1 = np.zeros(rp.nodes)
    w2 = np.zeros(rp.nodes)
    F, J, r, u = _assemble(rp, w1, w2, kappa)
    res = float(np.abs(F).max())
    converged = res <= tol
    it = 0
    while not converged and it < max_iter:
        it += 1
        delta = spla.spsolve(J.tocsc(), -F)
        d1, d2 = delta[0::2], delta[1::2]
        norm0 = float(np.linalg.norm(F))
        step = 1.0
        for _ in range(25):
            Ft = _assemble(rp, w1 + step * d1, w2 + step * d2, kappa,
                           want_jacobian=False)[0]
            if float(np.linalg.norm(Ft)) <= (1.0 - 1e-4 * step) * norm0:
                break
            step *= 0.5
        w1 = w1 + step * d1
        w2 = w2 + step * d2
        F, J, r, u = _assemble(rp, w1, w2, kappa)
        res = float(np.abs(F).max())
        converged = res <= tol
    u1, u2 = u
    # the internal stand-in u(0) = w(0) becomes the true limit here
    if rp.n1 != 0:
        u1[0] = -np.inf if rp.n1 > 0 else np.inf
    if rp.n2 != 0:
        u2[0] = -np.inf if rp.n2 > 0 else np.inf
    return RadialSolution(r=r, u1=u1, u2=u2, w1=w1.copy(), w2=w2.copy(),
                          n1=rp.n1, n2=rp.n2,
                          residual_sup=res, iterations=it,
                          converged=converged)


# ----------------------------------------------------------------------
# Derived quantities used by tests and the CLI
# ----------------------------------------------------------------------

def radial_flux(sol):
    """(2 pi int T(u_1) r dr, same for u_2) by trapezoid on the mesh."""
    out = []
    for ui, ni in ((sol.u1, sol.n1), (sol.u2, sol.n2)):
        t = np.tanh(0.5 * ui)
        if ni != 0:
            t[0] = -float(np.sign(ni))  # r=0 limit (weight r=0 anyway)
        out.append(2.0 * np.pi * float(np.trapezoid(t * sol.r, sol.r)))
    return tuple(out)


def tail_slope(sol, field, r_lo, r_hi):
    """Least-squares slope of ln|u_i| on [r_lo, r_hi] (decay rate, > 0)."""
    ui = sol.u1 if field == 1 else sol.u2
    mask = (sol.r >= r_lo) & (sol.r <= r_hi) & (np.abs(ui) > 1e-300) \
        & np.isfinite(ui)
    if mask.sum() < 10:
        raise ValueError("tail window too small")
    coef = np.polyfit(sol.r[mask], np.log(np.abs(ui[mask])), 1)
    return -float(coef[0])


def interp_profile(sol, radii):
    """(u1, u2) at given radii: the smooth parts w_i are interpolated
    linearly and the 2 n_i ln r spike is added back exactly."""
    radii = np.asarray(radii, dtype=float)
    out = []
    for ni, wi in ((sol.n1, sol.w1), (sol.n2, sol.w2)):
        w = np.interp(radii, sol.r, wi)
        if ni == 0:
            out.append(w)
            continue
        with np.errstate(divide="ignore"):
            out.append(2.0 * ni * np.log(radii) + w)
    return tuple(out)
