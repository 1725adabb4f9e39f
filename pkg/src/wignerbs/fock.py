"""Operator algebra in the truncated Fock basis.

Single-mode objects are indexed by photon number ``n = 0 .. n_cut`` (ascending).
Two-mode objects use the row-major tensor basis ``|n1, n2> -> n1 * (n_cut + 1) + n2``.

Unitaries built from a truncated generator carry a ``tolerance`` equal to the
measured ``max|U U^dag - I|``; downstream products keep the worst one.
"""

from dataclasses import dataclass, field
from functools import lru_cache
import math

import numpy as np
from scipy.linalg import expm

from ._laguerre import radial_terms
from .constants import DEFAULT_NCUT, DEFAULT_NCUT_TWO_MODE
from .errors import DegenerateStateError, DimensionError, DomainError, TagError

KINDS = ("density", "unitary", "transition", "generic")

_NORM_TOL = 1e-12
_HERMITIAN_TOL = 1e-12
_TRACE_TOL = 1e-12
_PSD_TOL = 1e-10


def _frozen(array, dtype=complex):
    out = np.array(array, dtype=dtype)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class PureState:
    """Normalized coefficient vector ``c_n = <n|psi>``."""

    coeffs: np.ndarray

    def __post_init__(self):
        coeffs = _frozen(self.coeffs)
        if coeffs.ndim != 1 or coeffs.size == 0:
            raise DimensionError("coefficients must form a non-empty vector")
        norm = float(np.vdot(coeffs, coeffs).real)
        if abs(norm - 1.0) > _NORM_TOL:
            raise DegenerateStateError(f"state not normalized (norm^2 = {norm!r})")
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def n_cut(self):
        return self.coeffs.size - 1

    @property
    def support(self):
        """Largest photon number carrying a nonzero amplitude."""
        nz = np.flatnonzero(self.coeffs)
        return int(nz[-1]) if nz.size else 0

    def embed(self, n_cut):
        """Zero-pad to a larger truncation."""
        if n_cut < self.support:
            raise DimensionError(f"support {self.support} exceeds n_cut={n_cut}")
        out = np.zeros(n_cut + 1, dtype=complex)
        m = min(n_cut, self.n_cut) + 1
        out[:m] = self.coeffs[:m]
        return PureState(out)

    def projector(self):
        return OperatorMatrix(np.outer(self.coeffs, self.coeffs.conj()), kind="density")

    def transition(self, other):
        """The operator ``|self><other|``."""
        _check_same_cut(self, other)
        return OperatorMatrix(np.outer(self.coeffs, other.coeffs.conj()), kind="transition")


@dataclass(frozen=True)
class OperatorMatrix:
    """Square matrix on the truncated Fock space with a kind tag."""

    entries: np.ndarray
    kind: str = "generic"
    tolerance: float = 0.0
    warnings: tuple = field(default=())

    def __post_init__(self):
        entries = _frozen(self.entries)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
            raise DimensionError(f"operator must be square, got shape {entries.shape}")
        if self.kind not in KINDS:
            raise TagError(f"unknown kind {self.kind!r}")
        if self.kind == "density":
            _check_density(entries)
        object.__setattr__(self, "entries", entries)

    @property
    def n_cut(self):
        return self.entries.shape[0] - 1

    @property
    def dim(self):
        return self.entries.shape[0]

    def embed(self, n_cut):
        if n_cut < self.n_cut:
            block = self.entries[n_cut + 1 :, :]
            if np.any(block) or np.any(self.entries[:, n_cut + 1 :]):
                raise DimensionError(f"operator support exceeds n_cut={n_cut}")
            return OperatorMatrix(self.entries[: n_cut + 1, : n_cut + 1], self.kind, self.tolerance)
        out = np.zeros((n_cut + 1, n_cut + 1), dtype=complex)
        out[: self.dim, : self.dim] = self.entries
        return OperatorMatrix(out, self.kind, self.tolerance)

    def purity(self):
        return float(np.vdot(self.entries.conj().T, self.entries).real)

    def min_eigenvalue(self):
        herm = 0.5 * (self.entries + self.entries.conj().T)
        return float(np.linalg.eigvalsh(herm)[0])


@dataclass(frozen=True)
class TwoModeOperator:
    """Matrix on the two-mode basis ``|n1, n2>``, both modes cut at ``n_cut``."""

    entries: np.ndarray
    n_cut: int
    kind: str = "generic"
    tolerance: float = 0.0

    def __post_init__(self):
        entries = _frozen(self.entries)
        d = (self.n_cut + 1) ** 2
        if entries.shape != (d, d):
            raise DimensionError(f"expected shape {(d, d)}, got {entries.shape}")
        if self.kind not in KINDS:
            raise TagError(f"unknown kind {self.kind!r}")
        if self.kind == "density":
            _check_density(entries)
        object.__setattr__(self, "entries", entries)


def _check_density(entries):
    if np.max(np.abs(entries - entries.conj().T), initial=0.0) > _HERMITIAN_TOL:
        raise DomainError("density operator is not Hermitian")
    tr = np.trace(entries)
    if abs(tr - 1.0) > _TRACE_TOL:
        raise DomainError(f"density operator has trace {tr!r}")
    herm = 0.5 * (entries + entries.conj().T)
    if np.linalg.eigvalsh(herm)[0] < -_PSD_TOL:
        raise DomainError("density operator is not positive semi-definite")


def _check_same_cut(a, b):
    if a.n_cut != b.n_cut:
        raise DimensionError(f"mismatched truncations: {a.n_cut} vs {b.n_cut}")


def _unitary_tolerance(u):
    return float(np.max(np.abs(u @ u.conj().T - np.eye(u.shape[0]))))


# -- states -------------------------------------------------------------------


def fock_state(n, n_cut=DEFAULT_NCUT):
    if n_cut < 0:
        raise DomainError("n_cut must be >= 0")
    if not 0 <= n <= n_cut:
        raise DomainError(f"photon number {n} outside 0..{n_cut}")
    coeffs = np.zeros(n_cut + 1, dtype=complex)
    coeffs[n] = 1.0
    return PureState(coeffs)


def superposition(terms, n_cut=DEFAULT_NCUT):
    """Normalized ``sum_j c_j |n_j>`` from ``(amplitude, n)`` pairs.

    Amplitudes on the same ``n`` add.
    """
    coeffs = np.zeros(n_cut + 1, dtype=complex)
    for amp, n in terms:
        if not 0 <= n <= n_cut:
            raise DomainError(f"photon number {n} outside 0..{n_cut}")
        coeffs[n] += amp
    norm = np.linalg.norm(coeffs)
    if norm == 0.0:
        raise DegenerateStateError("all amplitudes vanish")
    return PureState(coeffs / norm)


def _state_pad(r, alpha):
    return 40 + int(math.ceil(6.0 * abs(alpha) ** 2 + 60.0 * abs(r)))


def gaussian_pure_state(r=0.0, alpha=0.0, n_cut=DEFAULT_NCUT):
    """``D(alpha) S(r) |0>``, computed on a padded space then truncated.

    The truncated tail is dropped and the result renormalized; the dropped
    weight is negligible while ``tanh|r|^(n_cut/2)`` and the Poisson tail of
    ``|alpha|^2`` at ``n_cut`` are.
    """
    big = n_cut + _state_pad(r, alpha)
    vac = np.zeros(big + 1, dtype=complex)
    vac[0] = 1.0
    vec = _displacement_expm(alpha, big) @ (_squeeze_expm(r, big) @ vac)
    vec = vec[: n_cut + 1]
    return PureState(vec / np.linalg.norm(vec))


def coherent_state(alpha, n_cut=DEFAULT_NCUT):
    return gaussian_pure_state(0.0, alpha, n_cut)


def thermal_state(nbar, n_cut=DEFAULT_NCUT):
    """Diagonal thermal state, populations renormalized on the truncation."""
    if nbar < 0:
        raise DomainError("mean photon number must be >= 0")
    n = np.arange(n_cut + 1)
    pops = (nbar / (1.0 + nbar)) ** n / (1.0 + nbar) if nbar > 0 else (n == 0).astype(float)
    return OperatorMatrix(np.diag(pops / pops.sum()), kind="density")


def mixture(weights, operators):
    weights = np.asarray(weights, dtype=float)
    if np.any(weights < 0) or abs(weights.sum() - 1.0) > 1e-9:
        raise DomainError("mixture weights must be nonnegative and sum to 1")
    dims = {op.dim for op in operators}
    if len(dims) != 1:
        raise DimensionError("mixture components have different truncations")
    total = sum(w * op.entries for w, op in zip(weights, operators))
    total = total / np.trace(total).real
    return OperatorMatrix(total, kind="density")


# -- single-mode operators ----------------------------------------------------


def annihilation(n_cut):
    return np.diag(np.sqrt(np.arange(1, n_cut + 1, dtype=float)), 1).astype(complex)


def _displacement_expm(alpha, n_cut):
    a = annihilation(n_cut)
    return expm(alpha * a.conj().T - np.conj(alpha) * a)


def _squeeze_expm(r, n_cut):
    a = annihilation(n_cut)
    a2 = a @ a
    return expm(0.5 * (r * a2.conj().T - np.conj(r) * a2))


def _displacement_closed(gamma, n_cut):
    x = abs(gamma) ** 2
    phase = gamma / abs(gamma) if gamma != 0 else 1.0
    out = np.zeros((n_cut + 1, n_cut + 1), dtype=complex)
    for k in range(n_cut + 1):
        up = phase**k
        down = (-np.conj(phase)) ** k
        for n, r_nk in enumerate(radial_terms(x, k, n_cut - k)):
            out[n + k, n] = up * r_nk
            out[n, n + k] = down * r_nk
    return out


def displacement_matrix(alpha, n_cut=DEFAULT_NCUT, method="expm"):
    """``D(alpha) = exp(alpha a^dag - alpha^* a)`` on ``0..n_cut``.

    ``method="expm"`` exponentiates the truncated generator (exactly unitary,
    entries near ``n_cut`` distorted once ``|alpha|^2`` is comparable to
    ``n_cut``). ``method="closed"`` gives the exact matrix elements of the
    untruncated operator via Laguerre polynomials (not unitary near the edge).
    """
    if not np.isfinite(alpha):
        raise DomainError("displacement must be finite")
    if method == "expm":
        u = _displacement_expm(alpha, n_cut)
    elif method == "closed":
        u = _displacement_closed(complex(alpha), n_cut)
    else:
        raise ValueError(f"unknown method {method!r}")
    return OperatorMatrix(u, kind="unitary", tolerance=_unitary_tolerance(u))


def squeeze_matrix(r, n_cut=DEFAULT_NCUT):
    """``S(r) = exp((r a^dag^2 - r^* a^2)/2)`` via the truncated generator.

    Accurate on the low block while ``tanh(|r|)^(n_cut/2)`` is small, e.g.
    ``|r| <= 0.6`` keeps it below 1e-5 at ``n_cut = 40``.
    """
    u = _squeeze_expm(r, n_cut)
    return OperatorMatrix(u, kind="unitary", tolerance=_unitary_tolerance(u))


def parity_matrix(n_cut=DEFAULT_NCUT):
    signs = (-1.0) ** np.arange(n_cut + 1)
    return OperatorMatrix(np.diag(signs), kind="unitary")


def displaced_parity(alpha, n_cut=DEFAULT_NCUT, method="closed"):
    """``Pi(alpha) = D(alpha) Pi D(alpha)^dag = D(2 alpha) Pi``.

    ``closed`` uses the Laguerre form of ``D(2 alpha)``; ``conjugate`` and
    ``reflect`` build the two operator products from matrix exponentials on a
    padded space and truncate afterwards. The declared tolerance is
    ``max|Pi(alpha)^2 - I|`` on the truncation.
    """
    if not np.isfinite(alpha):
        raise DomainError("displacement must be finite")
    if method == "closed":
        out = _displacement_closed(2 * complex(alpha), n_cut) * ((-1.0) ** np.arange(n_cut + 1))
    else:
        big = n_cut + 40 + int(math.ceil(24.0 * abs(alpha) ** 2))
        par = (-1.0) ** np.arange(big + 1)
        if method == "conjugate":
            d = _displacement_expm(alpha, big)
            full = (d * par) @ d.conj().T
        elif method == "reflect":
            full = _displacement_expm(2 * alpha, big) * par
        else:
            raise ValueError(f"unknown method {method!r}")
        out = full[: n_cut + 1, : n_cut + 1]
    tol = float(np.max(np.abs(out @ out - np.eye(n_cut + 1))))
    return OperatorMatrix(out, kind="unitary", tolerance=tol)


# -- two-mode -----------------------------------------------------------------


@lru_cache(maxsize=32)
def _bs_blocks(eta, n_cut):
    """Per total-photon-number blocks of the beam splitter on ``(n_cut+1)^2``.

    Blocks with ``N <= n_cut`` are complete and therefore exact.
    """
    theta = math.acos(math.sqrt(eta))
    d = n_cut + 1
    blocks = []
    for total in range(2 * n_cut + 1):
        lo, hi = max(0, total - n_cut), min(total, n_cut)
        n1 = np.arange(lo, hi + 1)
        gen = np.zeros((n1.size, n1.size))
        for i, m in enumerate(n1[:-1]):
            c = theta * math.sqrt((m + 1) * (total - m))
            gen[i + 1, i] = c
            gen[i, i + 1] = -c
        idx = n1 * d + (total - n1)
        block = expm(gen)
        block.setflags(write=False)
        idx.setflags(write=False)
        blocks.append((idx, block))
    return tuple(blocks)


def _check_eta(eta):
    if not 0.0 <= eta <= 1.0:
        raise DomainError(f"transmittance {eta} outside [0, 1]")


def beam_splitter_unitary(eta, n_cut=DEFAULT_NCUT_TWO_MODE):
    """``U_eta = exp(theta (a1^dag a2 - a1 a2^dag))`` with ``eta = cos^2 theta``.

    Built block-diagonally in ``n1 + n2``; blocks up to ``n_cut`` photons are
    exact, higher (incomplete) blocks use the restricted generator.
    """
    _check_eta(eta)
    d = n_cut + 1
    u = np.zeros((d * d, d * d))
    for idx, block in _bs_blocks(float(eta), n_cut):
        u[np.ix_(idx, idx)] = block
    return TwoModeOperator(u.astype(complex), n_cut, kind="unitary", tolerance=_unitary_tolerance(u))


def apply_beam_splitter(amplitudes, eta):
    """Apply ``U_eta`` to a two-mode pure state given as an amplitude matrix ``c[n1, n2]``."""
    _check_eta(eta)
    amplitudes = np.asarray(amplitudes, dtype=complex)
    n_cut = amplitudes.shape[0] - 1
    flat = amplitudes.reshape(-1)
    out = np.empty_like(flat)
    for idx, block in _bs_blocks(float(eta), n_cut):
        out[idx] = block @ flat[idx]
    return out.reshape(amplitudes.shape)


def product_state(psi, phi):
    """Amplitude matrix of ``|psi, phi>``."""
    return np.outer(psi.coeffs, phi.coeffs)


def reduce_pure(amplitudes, keep=0):
    """Reduced density matrix of a two-mode pure state ``c[n1, n2]``."""
    m = np.asarray(amplitudes)
    if keep == 1:
        m = m.T
    return m @ m.conj().T


def partial_trace(op, keep=0):
    """Trace out one mode of a density-tagged two-mode operator."""
    if not isinstance(op, TwoModeOperator) or op.kind != "density":
        raise TagError("partial_trace needs a density-tagged TwoModeOperator")
    d = op.n_cut + 1
    t = op.entries.reshape(d, d, d, d)
    if keep == 0:
        red = np.einsum("ijkj->ik", t)
    elif keep == 1:
        red = np.einsum("ijil->jl", t)
    else:
        raise ValueError("keep must be 0 or 1")
    return OperatorMatrix(red, kind="density", tolerance=op.tolerance)


def tensor(a, b):
    """Kronecker product of two single-mode operators as a TwoModeOperator."""
    _check_same_cut(a, b)
    kind = "density" if a.kind == b.kind == "density" else "generic"
    return TwoModeOperator(np.kron(a.entries, b.entries), a.n_cut, kind=kind,
                           tolerance=max(a.tolerance, b.tolerance))


def conjugate(u, op):
    """``U op U^dag`` for matching two-mode operators."""
    if u.n_cut != op.n_cut:
        raise DimensionError("mismatched truncations")
    out = u.entries @ op.entries @ u.entries.conj().T
    if op.kind == "density":
        out = 0.5 * (out + out.conj().T)
    return TwoModeOperator(out, op.n_cut, kind=op.kind, tolerance=max(u.tolerance, op.tolerance))


def pure_decomposition(rho, cutoff=1e-14):
    """Eigen-decomposition of a density operator into ``(weight, PureState)`` terms."""
    if rho.kind != "density":
        raise TagError("expected a density operator")
    diag = np.diag(rho.entries)
    if np.allclose(rho.entries, np.diag(diag), atol=0.0, rtol=0.0):
        terms = []
        for n, p in enumerate(diag.real):
            if p > cutoff:
                v = np.zeros(rho.dim, dtype=complex)
                v[n] = 1.0
                terms.append((float(p), PureState(v)))
        return terms
    vals, vecs = np.linalg.eigh(0.5 * (rho.entries + rho.entries.conj().T))
    terms = []
    for p, v in zip(vals, vecs.T):
        if p > cutoff:
            terms.append((float(p), PureState(v / np.linalg.norm(v))))
    return terms
