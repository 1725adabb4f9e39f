"""Residual checks for the interference-formula family and the Lieb bounds.

Every check builds its two sides by separate code paths: the left side goes
through the spectral convolution engine, the right side is a pointwise
product of independently evaluated (cross-)Wigner fields. The ``L_2``
rescaling on the right is applied exactly by sampling the factors at
``alpha / 2`` (``L_2[G](alpha) = G(alpha/2)/4``), so no interpolation enters.

Pass/fail thresholds are the caller's business; reports only carry numbers.
"""

from dataclasses import dataclass, field
import json
import math
from typing import NamedTuple

import numpy as np

from .constants import INTERFERENCE_CONSTANT
from .entropy import EntropyReport, p_norm, quadrature, renyi_bound, renyi_entropy, vacuum_norm
from .fock import OperatorMatrix, PureState, pure_decomposition
from .phase_space import (
    PhaseField,
    convolve,
    cross_wigner,
    fourier_transform,
    inverse_weyl,
    rescale,
    weyl_transform,
    wigner,
)

IDENTITIES = ("general", "outer", "cross", "inner", "fourier_dual", "hbar_scaled", "gaussian_selfconv")
LIEB_SLACK = 1e-6


@dataclass(frozen=True)
class ResidualReport:
    """``max |LHS - RHS|`` over the grid and ``Re Int (LHS - RHS)``."""

    identity: str
    max_abs_residual: float
    integrated_gap: float
    half_extent: float
    n_points: int
    n_cut: int
    states: tuple = ()
    extra: dict = field(default_factory=dict)

    def to_dict(self):
        out = {
            "identity": self.identity,
            "max_abs_residual": self.max_abs_residual,
            "integrated_gap": self.integrated_gap,
            "grid": {"L": self.half_extent, "N": self.n_points},
            "n_cut": self.n_cut,
            "states": list(self.states),
        }
        out.update(self.extra)
        return out

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2, sort_keys=True, default=_json_float)


def _json_float(v):
    return float(v)


def _report(identity, grid, lhs, rhs, n_cut, states, **extra):
    diff = lhs - rhs
    return ResidualReport(
        identity=identity,
        max_abs_residual=float(np.abs(diff).max()),
        integrated_gap=float((diff.sum() * grid.cell_area).real),
        half_extent=float(grid.half_extent),
        n_points=int(grid.n_points),
        n_cut=int(n_cut),
        states=tuple(states),
        extra=extra,
    )


def _label(state):
    if isinstance(state, PureState):
        nz = np.flatnonzero(np.abs(state.coeffs) > 1e-12)
        if nz.size == 1:
            return f"fock:{int(nz[0])}"
        return f"pure(support<={state.support})"
    return f"{state.kind}(n_cut={state.n_cut})"


def _half(grid):
    return grid.scaled(0.5)


def verify_general(a, b, c, d, grid):
    """``W_ab * W_cd`` against ``2 pi L_2[W_cb W_ad]``."""
    lhs = convolve(cross_wigner(a, b, grid), cross_wigner(c, d, grid)).values
    h = _half(grid)
    rhs = INTERFERENCE_CONSTANT * cross_wigner(c, b, h).values * cross_wigner(a, d, h).values / 4.0
    return _report("general", grid, lhs, rhs, a.n_cut, [_label(s) for s in (a, b, c, d)])


def _general_operator_residual(A, B, a, b, c, d, grid):
    """Operator-level version: ``W_A * W_B`` against the pure-state right side.

    Used as a negative control when ``A`` is mixed but ``a, b`` only
    approximate it.
    """
    lhs = convolve(weyl_transform(A, grid), weyl_transform(B, grid)).values
    h = _half(grid)
    rhs = INTERFERENCE_CONSTANT * cross_wigner(c, b, h).values * cross_wigner(a, d, h).values / 4.0
    return _report("general", grid, lhs, rhs, A.n_cut, ["operator", _label(c)])


def general_negative_control(rho, c, d, grid):
    """General formula with ``|a><b|`` replaced by a mixed ``rho``.

    The right side uses the leading eigenvector of ``rho`` for both ``a`` and
    ``b``, i.e. the single-term truncation of its purification. A large
    residual shows the identity needs genuine rank-one operators.
    """
    p, lead = max(pure_decomposition(rho), key=lambda t: t[0])
    B = c.transition(d)
    return _general_operator_residual(rho, B, lead, lead, c, d, grid)


def verify_outer(psi, phi, grid):
    """``W_psi * W_phi`` against ``2 pi L_2[|W_{psi phi}|^2]``."""
    lhs = convolve(wigner(psi, grid), wigner(phi, grid)).values
    rhs = INTERFERENCE_CONSTANT * np.abs(cross_wigner(psi, phi, _half(grid)).values) ** 2 / 4.0
    return _report("outer", grid, lhs, rhs, psi.n_cut, [_label(psi), _label(phi)])


def verify_cross(psi, phi, grid, lam=1.0):
    """``W_A * W_A`` against ``2 pi L_2[W_A^2]`` for ``A = lam |psi><phi|`` (complex)."""
    op = OperatorMatrix(lam * psi.transition(phi).entries, kind="generic")
    lhs = convolve(weyl_transform(op, grid), weyl_transform(op, grid)).values
    rhs = INTERFERENCE_CONSTANT * weyl_transform(op, _half(grid)).values ** 2 / 4.0
    return _report("cross", grid, lhs, rhs, psi.n_cut, [_label(psi), _label(phi)],
                   lam=[float(np.real(lam)), float(np.imag(lam))])


def verify_inner(state, grid):
    """``W * W`` against ``2 pi L_2[W^2]``; the integrated gap is ``1 - purity``."""
    w = wigner(state, grid)
    lhs = convolve(w, w).values
    rhs = INTERFERENCE_CONSTANT * wigner(state, _half(grid)).values ** 2 / 4.0
    return _report("inner", grid, lhs, rhs, state.n_cut, [_label(state)])


def hbar_scaled_inner_check(psi, s, grid):
    """``W_s * W_s`` against ``2 pi s^2 L_2[W_s^2]`` with ``W_s = L_s[W_psi]``."""
    w = wigner(psi, grid, scale=s)
    lhs = convolve(w, w).values
    rhs = INTERFERENCE_CONSTANT * s**2 * wigner(psi, _half(grid), scale=s).values ** 2 / 4.0
    return _report("hbar_scaled", grid, lhs, rhs, psi.n_cut, [_label(psi)], scale=float(s))


def gaussian_selfconv(psi, grid):
    """``W * W = L_sqrt2[W]``, valid for centered Gaussian states."""
    w = wigner(psi, grid)
    lhs = convolve(w, w).values
    rhs = wigner(psi, grid, scale=math.sqrt(2.0)).values
    return _report("gaussian_selfconv", grid, lhs, rhs, psi.n_cut, [_label(psi)])


def fourier_duality_check(a, b, c, d, grid, constant=INTERFERENCE_CONSTANT):
    """``F[W_cb] * F[W_ad]`` against ``constant * L_2[F[W_ab] F[W_cd]]``.

    Transforming the general formula with ``F[f g] = (2/pi) F[f] * F[g]``
    gives the constant ``2 pi``; passing another constant measures how far
    that alternative is from holding.
    """
    lhs = convolve(fourier_transform(cross_wigner(c, b, grid)),
                   fourier_transform(cross_wigner(a, d, grid))).values
    h = _half(grid)
    rhs = constant * (fourier_transform(cross_wigner(a, b, grid), h).values
                      * fourier_transform(cross_wigner(c, d, grid), h).values) / 4.0
    return _report("fourier_dual", grid, lhs, rhs, a.n_cut,
                   [_label(s) for s in (a, b, c, d)], constant=float(constant))


class LiebCheck(NamedTuple):
    lhs: float
    rhs: float
    satisfied: bool
    relation: str


def _lieb_verdict(lhs, p, slack):
    rhs = vacuum_norm(p)
    if p == 2:
        return LiebCheck(lhs, rhs, abs(lhs - rhs) <= slack, "==")
    if p > 2:
        return LiebCheck(lhs, rhs, lhs <= rhs + slack, "<=")
    return LiebCheck(lhs, rhs, lhs >= rhs - slack, ">=")


def lieb_norm_checks(psi, phi, ps, grid, slack=LIEB_SLACK):
    """:func:`lieb_norm_check` for several orders on one cross-Wigner field."""
    for p in ps:
        if not (p == math.inf or p >= 1):
            raise ValueError("the Lieb bounds are stated for p in [1, inf]")
    cw = cross_wigner(psi, phi, grid)
    q = quadrature(cw)
    return [_lieb_verdict(p_norm(cw, p, q), p, slack) for p in ps]


def lieb_norm_check(psi, phi, p, grid, slack=LIEB_SLACK):
    """``||W_{psi phi}||_p`` against ``||W_0||_p``: at most for ``p > 2``, at least for ``p < 2``."""
    return lieb_norm_checks(psi, phi, [p], grid, slack)[0]


def lemma1_bound(alpha):
    """``h_alpha(2 pi |W_0|^2)``; the field is ``L_{1/sqrt2}[W_0]``."""
    return renyi_bound(alpha) - math.log(2.0)


def lemma1_check(psi, phi, alpha, grid):
    """Renyi entropy of ``2 pi |W_{psi phi}|^2`` with margin against the vacuum value.

    Orders below 1/2 are computed but flagged ``proven_range=False``.
    """
    cw = cross_wigner(psi, phi, grid)
    f = PhaseField(grid, INTERFERENCE_CONSTANT * np.abs(cw.values) ** 2, "derived")
    rep = renyi_entropy(f, alpha)
    bound = lemma1_bound(alpha)
    return EntropyReport(alpha, rep.value, rep.p_norm, bound, rep.value - bound,
                         rep.clamped_mass, rep.diverges, alpha >= 0.5)


class ProbeReport(NamedTuple):
    inner: ResidualReport
    min_eigenvalue: float
    trace: float
    warnings: tuple

    def to_dict(self):
        out = self.inner.to_dict()
        out.update(min_eigenvalue=self.min_eigenvalue, trace=self.trace,
                   warnings=list(self.warnings))
        return out


def probe_field(field, n_cut):
    """Inner-formula residual and inverse-Weyl spectrum of an arbitrary field.

    A small residual together with a negative eigenvalue would mean the
    inner formula alone does not certify a valid Wigner function.
    """
    lhs = convolve(field, field).values
    sq = field.with_values(field.values**2)
    rhs = INTERFERENCE_CONSTANT * rescale(sq, 2.0).values
    inner = _report("inner", field.grid, lhs, rhs, n_cut, ["field"])
    op = inverse_weyl(field, n_cut)
    return ProbeReport(inner, op.min_eigenvalue(), float(np.trace(op.entries).real),
                       op.warnings + field.warnings)
