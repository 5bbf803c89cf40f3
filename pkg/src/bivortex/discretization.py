"""Grids, Laplacian operators, and quadrature on the two domain kinds.

Two discretizations are supported:

  * flat torus: side lengths L1 x L2, uniform n1 x n2 grid (n1, n2 even),
    periodic in both directions.  Derivatives are spectral, so the
    Laplacian is exact on resolved Fourier modes and the trapezoidal rule
    (here just h1*h2*sum) is spectrally accurate for smooth fields.

  * truncated plane: the square [-R, R]^2 on an n x n grid including the
    boundary nodes, spacing h = 2R/(n-1).  The Laplacian is the 5-point
    stencil with homogeneous Dirichlet values outside the square, and
    quadrature is composite trapezoidal.

Fields are 2D arrays indexed [i, j], i the x index, j the y index.
"""

import numpy as np
from dataclasses import dataclass

TORUS = "torus"
PLANE = "plane"


# ----------------------------------------------------------------------
# Domains and fields
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class DomainSpec:
    """Torus (L1, L2, n1, n2) or truncated plane (R, n) grid geometry."""
    kind: str
    L1: float = 0.0
    L2: float = 0.0
    n1: int = 0
    n2: int = 0
    R: float = 0.0
    n: int = 0

    @staticmethod
    def torus(L1=2.0 * np.pi, L2=2.0 * np.pi, n1=256, n2=256):
        if L1 <= 0.0 or L2 <= 0.0:
            raise ValueError("torus side lengths must be positive")
        if n1 < 2 or n2 < 2 or n1 % 2 or n2 % 2:
            raise ValueError("torus node counts must be even and >= 2")
        return DomainSpec(kind=TORUS, L1=float(L1), L2=float(L2),
                          n1=int(n1), n2=int(n2))

    @staticmethod
    def plane(R, n=257):
        if R <= 0.0:
            raise ValueError("plane half-width must be positive")
        if n < 3:
            raise ValueError("plane needs at least 3 nodes per side")
        return DomainSpec(kind=PLANE, R=float(R), n=int(n))

    @property
    def shape(self):
        if self.kind == TORUS:
            return (self.n1, self.n2)
        return (self.n, self.n)

    @property
    def spacing(self):
        """(hx, hy) node spacing."""
        if self.kind == TORUS:
            return (self.L1 / self.n1, self.L2 / self.n2)
        h = 2.0 * self.R / (self.n - 1)
        return (h, h)

    @property
    def origin(self):
        """Coordinates of node [0, 0]."""
        if self.kind == TORUS:
            return (0.0, 0.0)
        return (-self.R, -self.R)

    @property
    def area(self):
        if self.kind == TORUS:
            return self.L1 * self.L2
        return (2.0 * self.R) ** 2

    def axes(self):
        """1D coordinate arrays (x, y) of the grid nodes."""
        hx, hy = self.spacing
        x0, y0 = self.origin
        nx, ny = self.shape
        return (x0 + hx * np.arange(nx), y0 + hy * np.arange(ny))

    def meshgrid(self):
        x, y = self.axes()
        return np.meshgrid(x, y, indexing="ij")


@dataclass
class ScalarField:
    """Real-valued field sampled at the grid nodes of a domain."""
    domain: DomainSpec
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != self.domain.shape:
            raise ValueError("field shape %s does not match domain %s"
                             % (self.values.shape, self.domain.shape))
        if not np.all(np.isfinite(self.values)):
            raise ValueError("field contains non-finite entries")

    def copy(self):
        return ScalarField(self.domain, self.values.copy())


def zero_field(domain):
    return ScalarField(domain, np.zeros(domain.shape))


# ----------------------------------------------------------------------
# Spectral machinery (torus); cached per domain geometry
# ----------------------------------------------------------------------

_torus_cache = {}


def _torus_k2(domain):
    """Array of k1^2 + k2^2 on the rfft2 layout, k_j = 2 pi m / L_j."""
    key = (domain.L1, domain.L2, domain.n1, domain.n2)
    k2 = _torus_cache.get(key)
    if k2 is None:
        hx, hy = domain.spacing
        kx = 2.0 * np.pi * np.fft.fftfreq(domain.n1, d=hx)
        ky = 2.0 * np.pi * np.fft.rfftfreq(domain.n2, d=hy)
        k2 = kx[:, None] ** 2 + ky[None, :] ** 2
        _torus_cache[key] = k2
    return k2


def _lap_torus(domain, values):
    k2 = _torus_k2(domain)
    return np.fft.irfft2(-k2 * np.fft.rfft2(values), s=values.shape)


def _lap_plane(domain, values):
    # 5-point stencil, ghost value 0 outside the square
    h2 = domain.spacing[0] ** 2
    p = np.pad(values, 1)
    return (p[:-2, 1:-1] + p[2:, 1:-1] + p[1:-1, :-2] + p[1:-1, 2:]
            - 4.0 * values) / h2


def laplacian_values(domain, values):
    """Discrete Laplacian on a raw array (solver hot path)."""
    if domain.kind == TORUS:
        return _lap_torus(domain, values)
    return _lap_plane(domain, values)


def laplacian(field):
    """Discrete Laplacian of a ScalarField.

    Torus: exact spectral Laplacian (Fourier multiplier -(k1^2+k2^2)).
    Plane: 5-point stencil with homogeneous Dirichlet values outside.
    """
    return ScalarField(field.domain,
                       laplacian_values(field.domain, field.values))


# ----------------------------------------------------------------------
# Quadrature
# ----------------------------------------------------------------------

def quad_weights(domain):
    """Node weights of the domain quadrature rule (2D array)."""
    hx, hy = domain.spacing
    if domain.kind == TORUS:
        return np.full(domain.shape, hx * hy)
    # composite trapezoidal: half weight on the boundary ring
    wx = np.ones(domain.n)
    wx[0] = wx[-1] = 0.5
    return (hx * hy) * np.outer(wx, wx)


def integrate_values(domain, values):
    hx, hy = domain.spacing
    if domain.kind == TORUS:
        return hx * hy * float(values.sum())
    return float((quad_weights(domain) * values).sum())


def integrate(field):
    """Quadrature of a field over its domain.

    Torus: h1*h2*sum (trapezoidal = spectrally exact for periodic data).
    Plane: composite trapezoidal over the square.
    """
    return integrate_values(field.domain, field.values)


def dirichlet_pairing_values(domain, x, y):
    """Discrete integral of grad(x).grad(y), via -<x, lap y>.

    Exact summation by parts in both discretizations (spectral identity
    on the torus, edge-sum identity with zero ghosts on the plane), and
    symmetric in (x, y); this is the form whose gradient matches the
    assembled residual exactly.
    """
    hx, hy = domain.spacing
    return -hx * hy * float((x * laplacian_values(domain, y)).sum())


def sample_bilinear(field, x, y):
    """Bilinear interpolation of a field at arbitrary points.

    Plane points must lie inside the truncation square; torus points are
    wrapped periodically.  x and y may be arrays (broadcast together)."""
    dom = field.domain
    hx, hy = dom.spacing
    x0, y0 = dom.origin
    sx = (np.asarray(x, dtype=float) - x0) / hx
    sy = (np.asarray(y, dtype=float) - y0) / hy
    v = field.values
    if dom.kind == TORUS:
        sx = np.mod(sx, dom.n1)
        sy = np.mod(sy, dom.n2)
        i0 = np.floor(sx).astype(int) % dom.n1
        j0 = np.floor(sy).astype(int) % dom.n2
        i1 = (i0 + 1) % dom.n1
        j1 = (j0 + 1) % dom.n2
    else:
        if np.any(sx < 0.0) or np.any(sx > dom.n - 1) \
                or np.any(sy < 0.0) or np.any(sy > dom.n - 1):
            raise ValueError("sample point outside the truncation square")
        i0 = np.clip(np.floor(sx).astype(int), 0, dom.n - 2)
        j0 = np.clip(np.floor(sy).astype(int), 0, dom.n - 2)
        i1 = i0 + 1
        j1 = j0 + 1
    tx = sx - np.floor(sx) if dom.kind == TORUS else sx - i0
    ty = sy - np.floor(sy) if dom.kind == TORUS else sy - j0
    return ((1 - tx) * (1 - ty) * v[i0, j0] + tx * (1 - ty) * v[i1, j0]
            + (1 - tx) * ty * v[i0, j1] + tx * ty * v[i1, j1])


# ----------------------------------------------------------------------
# Poisson solve (torus only; inner engine for Newton preconditioning)
# ----------------------------------------------------------------------

def solve_poisson_torus(rhs):
    """Zero-mean spectral solution w of  lap w = rhs - mean(rhs)."""
    domain = rhs.domain
    if domain.kind != TORUS:
        raise ValueError("spectral Poisson solve requires a torus domain")
    k2 = _torus_k2(domain)
    rhat = np.fft.rfft2(rhs.values)
    what = np.zeros_like(rhat)
    np.divide(rhat, -k2, out=what, where=k2 > 0.0)  # k = 0 mode dropped
    w = np.fft.irfft2(what, s=domain.shape)
    return ScalarField(domain, w)
