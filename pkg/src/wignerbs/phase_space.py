"""Phase-space grids and fields: Weyl transform, cross-Wigner, Husimi, rescaling,
convolution, marginals and Fourier transforms.

Grids are cell-centered, so the origin is never a sample and differences of
sample points land half a cell off the lattice. Convolution therefore
computes the lattice convolution and shifts it back by half a cell with an
exact trigonometric (Dirichlet-kernel) interpolation; for fields that decay
at the grid edge this is spectrally accurate.

Fourier convention::

    F[W](beta) = Int W(alpha) exp(-i(alpha^* beta + alpha beta^*)) d^2 alpha / 2 pi

so that ``Int |F[W]|^2 = PARSEVAL_CONSTANT * Int |W|^2`` with the constant 1/4.
"""

from dataclasses import dataclass, field, replace
import math

import numpy as np
import scipy.fft as sfft

from ._laguerre import radial_terms
from .constants import (
    DEFAULT_GRID_POINTS,
    INVERSE_WEYL_PREFACTOR,
    WEYL_PREFACTOR,
)
from .errors import DimensionError, DomainError, TagError
from .fock import OperatorMatrix, PureState

FIELD_KINDS = ("wigner", "cross_wigner", "husimi", "fourier", "derived")

BOUNDARY_DECAY = 1e-8


@dataclass(frozen=True)
class PhaseSpaceGrid:
    """Uniform ``N x N`` cell-centered grid on ``[-L, L]^2`` in ``alpha = x + i p``."""

    half_extent: float
    n_points: int = DEFAULT_GRID_POINTS

    def __post_init__(self):
        if not self.half_extent > 0:
            raise DomainError("half_extent must be positive")
        if self.n_points < 8 or self.n_points % 2:
            raise DomainError("n_points must be even and >= 8")

    @classmethod
    def default(cls, n_cut, n_points=DEFAULT_GRID_POINTS):
        """Covers the classical turning radius of level ``n_cut`` plus a tail margin."""
        return cls(math.sqrt(2 * n_cut + 1) + 5.0, n_points)

    @property
    def spacing(self):
        return 2.0 * self.half_extent / self.n_points

    @property
    def cell_area(self):
        return self.spacing**2

    @property
    def axis(self):
        # odd integers keep the axis exactly symmetric under negation
        return (2 * np.arange(self.n_points) - self.n_points + 1) * (0.5 * self.spacing)

    def mesh(self):
        """``(x, p)`` arrays, ``values[j, k]`` sits at ``x_j + i p_k``."""
        ax = self.axis
        return np.meshgrid(ax, ax, indexing="ij")

    @property
    def alpha(self):
        x, p = self.mesh()
        return x + 1j * p

    def scaled(self, factor):
        """Grid whose sample points are this grid's points times ``factor``."""
        return PhaseSpaceGrid(self.half_extent * factor, self.n_points)


@dataclass(frozen=True)
class PhaseField:
    """Complex samples of a phase-space distribution on a grid."""

    grid: PhaseSpaceGrid
    values: np.ndarray
    kind: str = "derived"
    warnings: tuple = field(default=())

    def __post_init__(self):
        values = np.array(self.values, dtype=complex)
        n = self.grid.n_points
        if values.shape != (n, n):
            raise DimensionError(f"values shape {values.shape} does not match grid {n}x{n}")
        if self.kind not in FIELD_KINDS:
            raise TagError(f"unknown field kind {self.kind!r}")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def real(self):
        return self.values.real

    def integral(self):
        return complex(self.values.sum() * self.grid.cell_area)

    def with_values(self, values, kind="derived"):
        return PhaseField(self.grid, values, kind, self.warnings)

    def boundary_max(self):
        v = np.abs(self.values)
        return float(max(v[0].max(), v[-1].max(), v[:, 0].max(), v[:, -1].max()))


def _decay_warnings(values, what):
    v = np.abs(values)
    edge = max(v[0].max(), v[-1].max(), v[:, 0].max(), v[:, -1].max())
    if edge > BOUNDARY_DECAY:
        return (f"truncated support: {what} reaches {edge:.2e} at the grid boundary",)
    return ()


def _same_grid(f, g):
    if f.grid != g.grid:
        raise DimensionError(f"grid mismatch: {f.grid} vs {g.grid}")


# -- Weyl transform -----------------------------------------------------------


def _trim(entries):
    mask = np.any(entries != 0, axis=0) | np.any(entries != 0, axis=1)
    nz = np.flatnonzero(mask)
    d = int(nz[-1]) + 1 if nz.size else 1
    return entries[:d, :d]


def _polar(alpha):
    """``x = 2|alpha|^2`` (the Laguerre argument) and the unit phase of ``alpha``."""
    r = np.abs(alpha)
    phase = np.where(r > 0, alpha / np.where(r > 0, r, 1.0), 1.0)
    return 2.0 * r**2, phase


def _weyl_points(entries, alpha):
    """``(1/pi) Tr[A Pi(alpha/sqrt2)]`` at an array of points."""
    a = _trim(np.asarray(entries, dtype=complex))
    d = a.shape[0]
    alpha = np.asarray(alpha, dtype=complex)
    x, phase = _polar(alpha.ravel())
    xu, inv = np.unique(x, return_inverse=True)
    out = np.zeros(x.shape, dtype=complex)
    ph_k = np.ones_like(phase)
    for k in range(d):
        upper = np.diagonal(a, k)
        lower = np.diagonal(a, -k)
        if k > 0:
            ph_k = ph_k * phase
        if not (upper.any() or lower.any()):
            continue
        rk = np.array(list(radial_terms(xu, k, d - 1 - k)))
        signs = (-1.0) ** np.arange(d - k)
        s_plus = (signs * upper) @ rk
        out += ph_k * s_plus[inv]
        if k > 0:
            s_minus = (signs * lower) @ rk
            out += np.conj(ph_k) * s_minus[inv]
    return (WEYL_PREFACTOR * out).reshape(alpha.shape)


def weyl_at(op, alpha):
    """Weyl transform of ``op`` at arbitrary points ``alpha`` (scalar or array)."""
    entries = op.entries if isinstance(op, OperatorMatrix) else np.asarray(op)
    return _weyl_points(entries, alpha)


def weyl_transform(op, grid, scale=1.0):
    """Weyl transform sampled on ``grid``; with ``scale=s`` returns ``L_s[A]`` exactly.

    ``L_s[A](alpha) = A(alpha/s)/s^2`` is evaluated directly at ``alpha/s`` instead
    of being interpolated.
    """
    if scale <= 0:
        raise DomainError("scale must be positive")
    values = _weyl_points(op.entries, grid.scaled(1.0 / scale).alpha) / scale**2
    if op.kind == "density":
        kind = "wigner" if scale == 1.0 else "derived"
    elif op.kind == "transition":
        kind = "cross_wigner" if scale == 1.0 else "derived"
    else:
        kind = "derived"
    return PhaseField(grid, values, kind, _decay_warnings(values, "Weyl transform"))


def wigner(state, grid, scale=1.0):
    """Wigner field of a PureState or density OperatorMatrix."""
    op = state.projector() if isinstance(state, PureState) else state
    return weyl_transform(op, grid, scale)


def cross_wigner(psi, phi, grid, scale=1.0):
    """``W_{psi phi}(alpha) = (1/pi) <phi| Pi(alpha/sqrt2) |psi>``."""
    if psi.n_cut != phi.n_cut:
        raise DimensionError(f"mismatched truncations: {psi.n_cut} vs {phi.n_cut}")
    return weyl_transform(psi.transition(phi), grid, scale)


def inverse_weyl(field, n_cut):
    """``A = 2 Int A(alpha) Pi(alpha/sqrt2) d^2 alpha`` by midpoint quadrature."""
    grid = field.grid
    x, phase = _polar(grid.alpha.ravel())
    xu, inv = np.unique(x, return_inverse=True)
    vals = field.values.ravel()
    d = n_cut + 1
    out = np.zeros((d, d), dtype=complex)
    weight = INVERSE_WEYL_PREFACTOR * grid.cell_area
    ph_k = np.ones_like(phase)
    for k in range(d):
        if k > 0:
            ph_k = ph_k * phase
        wp = vals * ph_k
        wm = vals * np.conj(ph_k)
        m_plus = np.bincount(inv, wp.real, xu.size) + 1j * np.bincount(inv, wp.imag, xu.size)
        m_minus = np.bincount(inv, wm.real, xu.size) + 1j * np.bincount(inv, wm.imag, xu.size)
        rk = np.array(list(radial_terms(xu, k, d - 1 - k)))
        signs = (-1.0) ** np.arange(d - k)
        n = np.arange(d - k)
        out[n + k, n] = weight * signs * (rk @ m_plus)
        if k > 0:
            out[n, n + k] = weight * signs * (rk @ m_minus)
    return OperatorMatrix(out, kind="generic", warnings=_decay_warnings(field.values, "field"))


def husimi(rho, grid):
    """``Q(alpha) = <alpha| rho |alpha> / pi`` with ``|alpha> = D(alpha)|0>``."""
    if rho.kind != "density":
        raise TagError("husimi needs a density operator")
    r = _trim(rho.entries)
    alpha = grid.alpha.ravel()
    d = r.shape[0]
    v = np.empty((d, alpha.size), dtype=complex)
    v[0] = np.exp(-0.5 * np.abs(alpha) ** 2)
    for m in range(1, d):
        v[m] = v[m - 1] * alpha / math.sqrt(m)
    q = np.einsum("mi,mi->i", v.conj(), r @ v).real / math.pi
    q = q.reshape(grid.n_points, grid.n_points)
    return PhaseField(grid, q, "husimi", _decay_warnings(q, "Husimi function"))


# -- rescaling and convolution -------------------------------------------------


def _dirichlet(z, period):
    """Periodic interpolation kernel for an odd period, ``D(0) = 1``."""
    z = np.asarray(z, dtype=float)
    num = np.sin(np.pi * z)
    den = period * np.sin(np.pi * z / period)
    small = np.abs(den) < 1e-12
    return np.where(small, 1.0, num / np.where(small, 1.0, den))


def _interp_matrix(targets, n_src, period):
    """Rows interpolate a zero-padded length-``n_src`` sequence at index ``targets``."""
    z = targets[:, None] - np.arange(n_src)[None, :]
    mat = _dirichlet(z, period)
    outside = (targets < -0.5) | (targets > n_src - 0.5)
    mat[outside] = 0.0
    return mat


def rescale(field, s):
    """``L_s[W](alpha) = W(alpha/s)/s^2`` resampled on the same grid.

    Values at ``alpha/s`` come from band-limited (Dirichlet-kernel)
    interpolation of the zero-padded samples; points mapped outside the grid
    are treated as zero.
    """
    if s <= 0:
        raise DomainError("scale must be positive")
    grid = field.grid
    n = grid.n_points
    if s == 1.0:
        return field
    targets = (grid.axis / s - grid.axis[0]) / grid.spacing
    mat = _interp_matrix(targets, n, 2 * n + 1)
    values = mat @ field.values @ mat.T / s**2
    warnings = ()
    if s > 1.0:
        ax = np.abs(grid.axis)
        outer = (ax[:, None] > grid.half_extent / s) | (ax[None, :] > grid.half_extent / s)
        lost = np.abs(field.values[outer]).max(initial=0.0)
        if lost > BOUNDARY_DECAY:
            warnings = (f"truncated support: rescaled field leaves the grid ({lost:.2e})",)
    return PhaseField(grid, values, "derived", field.warnings + warnings)


def _lattice_convolution_fft(a, b):
    n = a.shape[0]
    m = 2 * n - 1
    fa = sfft.fft2(a, (m, m))
    fb = sfft.fft2(b, (m, m))
    q = sfft.fftfreq(m) * m
    shift = np.exp(1j * np.pi * q / m)
    spec = fa * fb * shift[:, None] * shift[None, :]
    return sfft.ifft2(spec)


def _lattice_convolution_direct(a, b):
    n = a.shape[0]
    c = np.zeros((2 * n - 1, 2 * n - 1), dtype=complex)
    for j1 in range(n):
        for j2 in range(n):
            if a[j1, j2] != 0:
                c[j1 : j1 + n, j2 : j2 + n] += a[j1, j2] * b
    m = 2 * n - 1
    rows = np.arange(n) + n // 2 - 1
    mat = _dirichlet((rows + 0.5)[:, None] - np.arange(m)[None, :], m)
    return mat @ c @ mat.T


def convolve(f, g, method="spectral"):
    """``(f * g)(alpha) = Int f(beta) g(alpha - beta) d^2 beta`` on the common grid.

    ``method="direct"`` is the O(N^4) midpoint-sum reference (N <= 128).
    """
    _same_grid(f, g)
    grid = f.grid
    n = grid.n_points
    a, b = f.values, g.values
    if method == "spectral":
        shifted = _lattice_convolution_fft(a, b)
        lo = n // 2 - 1
        values = shifted[lo : lo + n, lo : lo + n]
    elif method == "direct":
        if n > 128:
            raise ValueError("direct convolution is a reference for N <= 128")
        values = _lattice_convolution_direct(a, b)
    else:
        raise ValueError(f"unknown method {method!r}")
    values = values * grid.cell_area
    return PhaseField(grid, values, "derived", f.warnings + g.warnings)


def upsample(field, factor):
    """Band-limited resampling onto the ``factor``-times finer grid of the same extent."""
    if factor == 1:
        return field
    grid = field.grid
    n = grid.n_points
    targets = (np.arange(n * factor) + 0.5) / factor - 0.5
    mat = _interp_matrix(targets, n, 2 * n + 1)
    fine = PhaseSpaceGrid(grid.half_extent, n * factor)
    return PhaseField(fine, mat @ field.values @ mat.T, field.kind, field.warnings)


def max_abs(field, refine=True, candidates=4, zooms=4):
    """``max |W|``, refined off-lattice with the band-limited interpolant.

    The cell-centered lattice never samples the origin, where many Wigner
    functions peak; plain sampling underestimates the sup by O(spacing^2).
    """
    mag = np.abs(field.values)
    best = float(mag.max())
    if not refine:
        return best
    n = field.grid.n_points
    order = np.argsort(mag, axis=None)[::-1][:candidates]
    for flat in order:
        cj, ck = divmod(int(flat), n)
        centre = np.array([cj, ck], dtype=float)
        half = 1.0
        for _ in range(zooms):
            offs = np.linspace(-half, half, 21)
            tj = np.clip(centre[0] + offs, 0.0, n - 1.0)
            tk = np.clip(centre[1] + offs, 0.0, n - 1.0)
            aj = _interp_matrix(tj, n, 2 * n + 1)
            ak = _interp_matrix(tk, n, 2 * n + 1)
            local = np.abs(aj @ field.values @ ak.T)
            ij, ik = np.unravel_index(np.argmax(local), local.shape)
            best = max(best, float(local[ij, ik]))
            centre = np.array([tj[ij], tk[ik]])
            half /= 10.0
    return best


# -- marginals and Fourier ----------------------------------------------------


def marginals(field):
    """Position and momentum marginals ``(Int W dp, Int W dx)`` on the grid axis."""
    v = field.values.real
    d = field.grid.spacing
    return v.sum(axis=1) * d, v.sum(axis=0) * d


def fourier_transform(field, out_grid=None):
    """``F[W](beta)`` sampled on ``out_grid`` (defaults to the field's grid)."""
    grid = field.grid
    out = grid if out_grid is None else out_grid
    ax_in = grid.axis
    ax_out = out.axis
    e = np.exp(-2j * np.outer(ax_out, ax_in))
    values = e @ field.values @ e.T * (grid.cell_area / (2 * math.pi))
    warnings = field.warnings + _decay_warnings(field.values, "transformed field")
    return PhaseField(out, values, "fourier", warnings)


def symplectic_fourier(field, out_grid=None):
    """``F_s[W](beta) = F[W](i beta)``; the lattice is symmetric so this is a re-indexing."""
    ft = fourier_transform(field, out_grid)
    return replace(ft, values=ft.values[::-1, :].T)


# -- wavefunctions ------------------------------------------------------------


def hermite_functions(n_max, x):
    """Rows ``psi_n(x)``, ``n = 0..n_max``, by the normalized three-term recurrence."""
    x = np.asarray(x, dtype=float)
    out = np.empty((n_max + 1,) + x.shape)
    out[0] = math.pi**-0.25 * np.exp(-0.5 * x**2)
    if n_max >= 1:
        out[1] = math.sqrt(2.0) * x * out[0]
    for n in range(1, n_max):
        out[n + 1] = math.sqrt(2.0 / (n + 1)) * x * out[n] - math.sqrt(n / (n + 1)) * out[n - 1]
    return out


def quadrature_distributions(rho, x):
    """``<x|rho|x>`` and ``<p|rho|p>`` at the points ``x`` (``<p|n> = (-i)^n psi_n(p)``)."""
    r = _trim(rho.entries)
    d = r.shape[0]
    psi = hermite_functions(d - 1, x)
    pos = np.einsum("mi,mn,ni->i", psi, r, psi).real
    ph = (-1j) ** np.arange(d)
    mom = np.einsum("mi,mn,ni->i", ph[:, None] * psi, r, np.conj(ph)[:, None] * psi).real
    return pos, mom
