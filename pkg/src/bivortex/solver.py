"""Convex-functional evaluation and the damped Newton minimizer.

With u_i = u_{0,i} + v_i the unknown smooth parts minimize the strictly
convex functional (rho = a12/a21, det = a11 a22 - a12 a21)

    J(v1, v2) = int  (a22/2)|grad v1|^2 - a12 grad v1 . grad v2
               + (a11 rho / 2)|grad v2|^2
               + det L(u_{0,1}+v1) + rho det L(u_{0,2}+v2)
               + ft1 v1 + rho ft2 v2,

where L(w) = 2 ln cosh(w/2) (evaluated overflow-free as |w| +
2 ln(1+e^-|w|) - 2 ln 2), ft1 = a22 f1 - a12 f2, ft2 = a11 f2 - a21 f1.
Its gradient is the weighted residual -W.R with

    R_i = lap v_i - a_i1 tanh(u_1/2) - a_i2 tanh(u_2/2) - f_i,
    W   = [[a22, -a12], [-a12, rho a11]]   (symmetric positive definite),

so Newton on J and Newton on the Euler-Lagrange system coincide.  The
Hessian L = W.(-lap) + diag(det T'(u_1), rho det T'(u_2)) is symmetric
positive definite (T' = tanh' > 0), including the torus constant mode, so
each Newton step is a single SPD solve: sparse elimination on the plane,
preconditioned conjugate gradients with an exact per-wavevector 2x2
spectral preconditioner on the torus.  Armijo backtracking on J makes
the iteration globally convergent; J is non-increasing across accepted
steps.  In decoupled mode (a12 = a21 = 0) the limit rho -> 1 is taken and
everything splits into two independent scalar problems.

On the plane the unknowns are the interior nodes; v is fixed to 0 on the
boundary ring (the discrete Dirichlet truncation of v -> 0 at infinity),
and the reported residual lives on the interior.
"""

import numpy as np
from dataclasses import dataclass, field
from typing import Optional

import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .discretization import (TORUS, PLANE, ScalarField,
                             laplacian_values, integrate_values,
                             quad_weights)
from .background import _validate_points
from .model import check_torus_feasibility

_LOG2 = float(np.log(2.0))


class InfeasibleConfigurationError(ValueError):
    """Torus data violating the solvability condition, without force."""


def lncosh_half(w):
    """2 ln cosh(w/2), overflow-free for any float w."""
    aw = np.abs(w)
    return aw + 2.0 * np.log1p(np.exp(-aw)) - 2.0 * _LOG2


def tanh_half(u):
    return np.tanh(0.5 * u)


def tanh_half_prime(u):
    return 0.5 / np.cosh(0.5 * np.clip(u, -700.0, 700.0)) ** 2


# ----------------------------------------------------------------------
# Problem / Solution containers
# ----------------------------------------------------------------------

@dataclass
class Problem:
    """A fully assembled solve: couplings, vortex data, grid, background."""
    cm: object
    vc: object
    domain: object
    bd: object
    tol_residual: float = 1e-10
    max_iter: int = 50
    force: bool = False

    def __post_init__(self):
        if self.bd.u01.domain != self.domain:
            raise ValueError("background data lives on a different domain")
        _validate_points(self.vc, self.domain)
        if self.domain.kind == TORUS and not self.force:
            rep = check_torus_feasibility(self.cm, self.vc, self.domain.area)
            if not rep.feasible:
                raise InfeasibleConfigurationError(
                    "infeasible torus configuration: max(lhs) = %.6g >= "
                    "rhs = %.6g; pass force=True to run anyway"
                    % (max(rep.lhs1, rep.lhs2), rep.rhs))
        self._cache = {}

    # weighted source fields of the functional
    def _ft(self):
        key = "ft"
        if key not in self._cache:
            cm = self.cm
            f1 = self.bd.f1.values
            f2 = self.bd.f2.values
            self._cache[key] = (cm.a22 * f1 - cm.a12 * f2,
                                cm.a11 * f2 - cm.a21 * f1)
        return self._cache[key]


@dataclass
class Solution:
    v1: ScalarField
    v2: ScalarField
    u1: ScalarField
    u2: ScalarField
    residual_sup: float
    iterations: int
    J_value: float
    converged: bool
    problem: Optional[Problem] = None
    J_path: list = field(default_factory=list)
    mean_v1_path: list = field(default_factory=list)
    mean_v2_path: list = field(default_factory=list)
    line_search_stalled: bool = False


# ----------------------------------------------------------------------
# Functional, residual, gradient
# ----------------------------------------------------------------------

def _values(v):
    return v.values if isinstance(v, ScalarField) else np.asarray(v, float)


def evaluate_functional(problem, v1, v2):
    """Discrete J(v1, v2).

    The Dirichlet terms use the summation-by-parts form -<v, lap v>,
    which is exact in both discretizations and makes the discrete
    gradient equal to -(quad weight) * W.R at every unknown node.
    """
    dom = problem.domain
    cm = problem.cm
    rho = cm.rho
    x1 = _values(v1)
    x2 = _values(v2)
    hx, hy = dom.spacing
    l1 = laplacian_values(dom, x1)
    l2 = laplacian_values(dom, x2)
    dirich = hx * hy * float(
        (-0.5 * cm.a22 * x1 * l1 + cm.a12 * x1 * l2
         - 0.5 * rho * cm.a11 * x2 * l2).sum())
    u1 = problem.bd.u01.values + x1
    u2 = problem.bd.u02.values + x2
    ft1, ft2 = problem._ft()
    dens = (cm.det * lncosh_half(u1) + rho * cm.det * lncosh_half(u2)
            + ft1 * x1 + rho * ft2 * x2)
    return dirich + integrate_values(dom, dens)


def residual(problem, v1, v2):
    """Pointwise Euler-Lagrange residual pair R_i = lap v_i - a_i1 T1
    - a_i2 T2 - f_i (zero on the plane's fixed boundary ring)."""
    r1, r2 = _residual_values(problem, _values(v1), _values(v2))
    return (ScalarField(problem.domain, r1), ScalarField(problem.domain, r2))


def _residual_values(problem, x1, x2):
    dom = problem.domain
    cm = problem.cm
    t1 = tanh_half(problem.bd.u01.values + x1)
    t2 = tanh_half(problem.bd.u02.values + x2)
    r1 = laplacian_values(dom, x1) - cm.a11 * t1 - cm.a12 * t2 \
        - problem.bd.f1.values
    r2 = laplacian_values(dom, x2) - cm.a21 * t1 - cm.a22 * t2 \
        - problem.bd.f2.values
    if dom.kind == PLANE:
        for r in (r1, r2):
            r[0, :] = r[-1, :] = 0.0
            r[:, 0] = r[:, -1] = 0.0
    return r1, r2


def gradient(problem, v1, v2):
    """Gradient fields of J per unit quadrature weight: -W.R."""
    r1, r2 = _residual_values(problem, _values(v1), _values(v2))
    cm = problem.cm
    rho = cm.rho
    g1 = -(cm.a22 * r1 - cm.a12 * r2)
    g2 = -(-cm.a12 * r1 + rho * cm.a11 * r2)
    return (ScalarField(problem.domain, g1), ScalarField(problem.domain, g2))


# ----------------------------------------------------------------------
# Newton linear algebra
# ----------------------------------------------------------------------

def _plane_interior_neg_lap(problem):
    """Sparse SPD matrix of -lap on the interior nodes (Dirichlet)."""
    key = "A_int"
    if key not in problem._cache:
        n = problem.domain.n
        m = n - 2
        h2 = problem.domain.spacing[0] ** 2
        T = sp.diags([-1.0, 2.0, -1.0], [-1, 0, 1], shape=(m, m))
        eye = sp.identity(m)
        problem._cache[key] = (sp.kron(eye, T) + sp.kron(T, eye)) / h2
    return problem._cache[key]


def _newton_step_plane(problem, t1p, t2p, rhs1, rhs2):
    cm = problem.cm
    rho = cm.rho
    A = _plane_interior_neg_lap(problem)
    sl = (slice(1, -1), slice(1, -1))
    d1 = sp.diags(cm.det * t1p[sl].ravel())
    d2 = sp.diags(rho * cm.det * t2p[sl].ravel())
    L = sp.bmat([[cm.a22 * A + d1, -cm.a12 * A],
                 [-cm.a12 * A, rho * cm.a11 * A + d2]], format="csc")
    rhs = np.concatenate([rhs1[sl].ravel(), rhs2[sl].ravel()])
    delta = spla.splu(L).solve(rhs)
    m = problem.domain.n - 2
    out1 = np.zeros(problem.domain.shape)
    out2 = np.zeros(problem.domain.shape)
    out1[sl] = delta[:m * m].reshape(m, m)
    out2[sl] = delta[m * m:].reshape(m, m)
    return out1, out2


def _torus_k2(problem):
    key = "k2"
    if key not in problem._cache:
        dom = problem.domain
        hx, hy = dom.spacing
        kx = 2.0 * np.pi * np.fft.fftfreq(dom.n1, d=hx)
        ky = 2.0 * np.pi * np.fft.rfftfreq(dom.n2, d=hy)
        problem._cache[key] = kx[:, None] ** 2 + ky[None, :] ** 2
    return problem._cache[key]


def _newton_step_torus(problem, t1p, t2p, rhs1, rhs2,
                       cg_rtol=1e-12, cg_max=600):
    """Preconditioned CG on the SPD Hessian,

        L x = [[a22, -a12], [-a12, rho a11]] . (-lap x)
              + diag(det T1', rho det T2') x,

    preconditioned by the exact inverse of the same operator with the
    T' diagonals replaced by their grid means (a 2x2 solve per
    wavevector)."""
    cm = problem.cm
    rho = cm.rho
    dom = problem.domain
    k2 = _torus_k2(problem)

    # Forced infeasible runs saturate tanh' to exactly 0 and would make
    # the constant mode singular; the floor keeps the direction solve
    # well posed (Armijo on the true J preserves correctness).
    dd1 = np.maximum(cm.det * t1p, 1e-13)
    dd2 = np.maximum(rho * cm.det * t2p, 1e-13)
    m1 = float(dd1.mean())
    m2 = float(dd2.mean())
    M11 = cm.a22 * k2 + m1
    M22 = rho * cm.a11 * k2 + m2
    M12 = -cm.a12 * k2
    detM = M11 * M22 - M12 * M12
    i11 = M22 / detM
    i12 = -M12 / detM
    i22 = M11 / detM

    def apply_L(x1, x2):
        l1 = laplacian_values(dom, x1)
        l2 = laplacian_values(dom, x2)
        y1 = -cm.a22 * l1 + cm.a12 * l2 + dd1 * x1
        y2 = cm.a12 * l1 - rho * cm.a11 * l2 + dd2 * x2
        return y1, y2

    def apply_M(r1, r2):
        R1 = np.fft.rfft2(r1)
        R2 = np.fft.rfft2(r2)
        z1 = np.fft.irfft2(i11 * R1 + i12 * R2, s=dom.shape)
        z2 = np.fft.irfft2(i12 * R1 + i22 * R2, s=dom.shape)
        return z1, z2

    def dot(a1, a2, b1, b2):
        return float((a1 * b1).sum() + (a2 * b2).sum())

    x1 = np.zeros(dom.shape)
    x2 = np.zeros(dom.shape)
    r1, r2 = rhs1.copy(), rhs2.copy()
    bnorm = np.sqrt(dot(rhs1, rhs2, rhs1, rhs2))
    if bnorm == 0.0:
        return x1, x2
    z1, z2 = apply_M(r1, r2)
    p1, p2 = z1.copy(), z2.copy()
    rz = dot(r1, r2, z1, z2)
    for _ in range(cg_max):
        q1, q2 = apply_L(p1, p2)
        pq = dot(p1, p2, q1, q2)
        if not np.isfinite(pq) or pq <= 0.0:
            break
        alpha = rz / pq
        x1 += alpha * p1
        x2 += alpha * p2
        r1 -= alpha * q1
        r2 -= alpha * q2
        if np.sqrt(dot(r1, r2, r1, r2)) <= cg_rtol * bnorm:
            break
        z1, z2 = apply_M(r1, r2)
        rz_new = dot(r1, r2, z1, z2)
        p1 = z1 + (rz_new / rz) * p1
        p2 = z2 + (rz_new / rz) * p2
        rz = rz_new
    return x1, x2


# ----------------------------------------------------------------------
# Damped Newton driver
# ----------------------------------------------------------------------

def solve(problem, initial=None):
    """Minimize J by damped Newton from v = 0 (or a given initial pair).

    Returns a Solution with the iteration history; non-convergence within
    max_iter is reported, not raised (forced infeasible runs end here)."""
    dom = problem.domain
    if initial is None:
        x1 = np.zeros(dom.shape)
        x2 = np.zeros(dom.shape)
    else:
        x1 = _values(initial[0]).copy()
        x2 = _values(initial[1]).copy()
        if dom.kind == PLANE:
            for x in (x1, x2):  # unknowns are interior; pin the ring
                x[0, :] = x[-1, :] = 0.0
                x[:, 0] = x[:, -1] = 0.0

    cm = problem.cm
    rho = cm.rho
    hx, hy = dom.spacing
    stalled = False
    J_path = []
    mean1 = []
    mean2 = []

    r1, r2 = _residual_values(problem, x1, x2)
    res = max(float(np.abs(r1).max()), float(np.abs(r2).max()))
    it = 0
    while res > problem.tol_residual and it < problem.max_iter:
        it += 1
        t1p = tanh_half_prime(problem.bd.u01.values + x1)
        t2p = tanh_half_prime(problem.bd.u02.values + x2)
        rhs1 = cm.a22 * r1 - cm.a12 * r2
        rhs2 = -cm.a12 * r1 + rho * cm.a11 * r2
        if dom.kind == PLANE:
            d1, d2 = _newton_step_plane(problem, t1p, t2p, rhs1, rhs2)
        else:
            d1, d2 = _newton_step_torus(problem, t1p, t2p, rhs1, rhs2)

        J0 = evaluate_functional(problem, x1, x2)
        slope = -hx * hy * float((rhs1 * d1).sum() + (rhs2 * d2).sum())
        # the allowance keeps Armijo meaningful once the predicted
        # decrease sinks below the roundoff floor of J itself
        floor = 1e-14 * (1.0 + abs(J0))
        alpha = 1.0
        accepted = False
        for _ in range(30):
            Jt = evaluate_functional(problem, x1 + alpha * d1,
                                     x2 + alpha * d2)
            if Jt <= J0 + 1e-4 * alpha * slope + floor:
                accepted = True
                break
            alpha *= 0.5
        if not accepted:
            stalled = True
            break
        x1 = x1 + alpha * d1
        x2 = x2 + alpha * d2
        J_path.append(Jt)
        mean1.append(float(x1.mean()))
        mean2.append(float(x2.mean()))
        r1, r2 = _residual_values(problem, x1, x2)
        res = max(float(np.abs(r1).max()), float(np.abs(r2).max()))

    u1 = problem.bd.u01.values + x1
    u2 = problem.bd.u02.values + x2
    return Solution(
        v1=ScalarField(dom, x1), v2=ScalarField(dom, x2),
        u1=ScalarField(dom, u1), u2=ScalarField(dom, u2),
        residual_sup=res, iterations=it,
        J_value=evaluate_functional(problem, x1, x2),
        converged=bool(res <= problem.tol_residual),
        problem=problem, J_path=J_path,
        mean_v1_path=mean1, mean_v2_path=mean2,
        line_search_stalled=stalled)
