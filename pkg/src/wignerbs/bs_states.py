"""Beam-splitter states built three independent ways.

``unitary``       two-mode beam splitter on the Fock amplitudes, partial trace,
                  then the Weyl transform (no grid until the very end).
``convolution``   ``L_{1/sqrt2}[W_psi * W_phi]`` with each factor rescaled
                  exactly before the spectral convolution.
``interference``  ``L_sqrt2[2 pi |W_{psi phi}|^2]``, a pointwise square of the
                  cross-Wigner function evaluated at ``alpha / sqrt 2``.

The unitary route is treated as the reference.
"""

from dataclasses import dataclass
import math

import numpy as np

from .constants import INTERFERENCE_CONSTANT
from .errors import DimensionError, DomainError, RouteDisagreementError, TagError
from .fock import (
    OperatorMatrix,
    PureState,
    apply_beam_splitter,
    fock_state,
    pure_decomposition,
    reduce_pure,
)
from .phase_space import PhaseField, convolve, cross_wigner, husimi, wigner

ROUTES = ("unitary", "convolution", "interference")
ROUTE_TOLERANCE = 1e-5
_WEIGHT_TOL = 1e-9


@dataclass(frozen=True)
class BSStateSpec:
    """Convex combination ``sum_i p_i sigma(psi_i, phi_i)`` of elementary BS states."""

    terms: tuple

    def __post_init__(self):
        terms = tuple((float(p), psi, phi) for p, psi, phi in self.terms)
        if not terms:
            raise DomainError("a BS state needs at least one term")
        for p, psi, phi in terms:
            if p < 0:
                raise DomainError(f"negative weight {p}")
            if not (isinstance(psi, PureState) and isinstance(phi, PureState)):
                raise TagError("BS terms take pure input states")
            if psi.n_cut != phi.n_cut:
                raise DimensionError("inputs of a BS term must share n_cut")
        total = sum(p for p, _, _ in terms)
        if abs(total - 1.0) > _WEIGHT_TOL:
            raise DomainError(f"weights sum to {total!r}, not 1")
        object.__setattr__(self, "terms", terms)

    @property
    def n_cut(self):
        return self.terms[0][1].n_cut


def _as_pure(state, n_cut):
    return state.embed(n_cut) if state.n_cut < n_cut else state


def _reduced_output(psi, phi, eta, n_cut):
    """Mode-1 output of ``U_eta |psi, phi>``, exact for the truncated inputs."""
    work = max(n_cut, psi.support + phi.support)
    a = _as_pure(psi, work).coeffs[: work + 1]
    b = _as_pure(phi, work).coeffs[: work + 1]
    out = apply_beam_splitter(np.outer(a, b), eta)
    rho = reduce_pure(out, keep=0)
    kept = rho[: n_cut + 1, : n_cut + 1]
    lost = float(1.0 - np.trace(kept).real)
    return kept, lost


def elementary_bs_state_operator(psi, phi, eta=0.5):
    """``Tr_2[U |psi, phi><psi, phi| U^dag]`` as a density matrix on ``psi.n_cut``.

    Both inputs are embedded into a working space large enough that every
    photon-number block of the beam splitter is complete, so the only error
    is the final truncation, whose discarded weight becomes the tolerance.
    """
    if psi.n_cut != phi.n_cut:
        raise DimensionError(f"mismatched truncations: {psi.n_cut} vs {phi.n_cut}")
    kept, lost = _reduced_output(psi, phi, eta, psi.n_cut)
    kept = kept / np.trace(kept).real
    kept = 0.5 * (kept + kept.conj().T)
    return OperatorMatrix(kept, kind="density", tolerance=max(lost, 0.0))


def bs_output_operator(rho1, rho2, eta=0.5):
    """Mode-1 output for arbitrary (pure or mixed) inputs, via eigen-decompositions."""
    terms1 = _terms(rho1)
    terms2 = _terms(rho2)
    n_cut = terms1[0][1].n_cut
    if terms2[0][1].n_cut != n_cut:
        raise DimensionError("inputs must share n_cut")
    acc = np.zeros((n_cut + 1, n_cut + 1), dtype=complex)
    worst = 0.0
    for p, psi in terms1:
        for q, phi in terms2:
            kept, lost = _reduced_output(psi, phi, eta, n_cut)
            acc += p * q * kept
            worst = max(worst, lost)
    acc = acc / np.trace(acc).real
    acc = 0.5 * (acc + acc.conj().T)
    return OperatorMatrix(acc, kind="density", tolerance=worst)


def _terms(state):
    if isinstance(state, PureState):
        return [(1.0, state)]
    return pure_decomposition(state)


def _interference_field(psi, phi, grid):
    cw = cross_wigner(psi, phi, grid.scaled(1.0 / math.sqrt(2.0)))
    values = INTERFERENCE_CONSTANT * np.abs(cw.values) ** 2 / 2.0
    return PhaseField(grid, values, "derived", cw.warnings)


def elementary_bs_wigner(psi, phi, grid, route="unitary"):
    """Wigner field of the elementary BS state ``sigma(psi, phi)``."""
    if route == "unitary":
        field = wigner(elementary_bs_state_operator(psi, phi), grid)
    elif route == "convolution":
        if psi.n_cut != phi.n_cut:
            raise DimensionError(f"mismatched truncations: {psi.n_cut} vs {phi.n_cut}")
        s = 1.0 / math.sqrt(2.0)
        field = convolve(wigner(psi, grid, scale=s), wigner(phi, grid, scale=s))
    elif route == "interference":
        field = _interference_field(psi, phi, grid)
    else:
        raise ValueError(f"unknown route {route!r}; expected one of {ROUTES}")
    return PhaseField(grid, field.values.real, "wigner", field.warnings)


def check_routes(psi, phi, grid, tolerance=ROUTE_TOLERANCE):
    """All three routes, raising when any pair disagrees beyond ``tolerance``."""
    fields = {r: elementary_bs_wigner(psi, phi, grid, r) for r in ROUTES}
    deviations = {}
    for i, a in enumerate(ROUTES):
        for b in ROUTES[i + 1 :]:
            deviations[f"{a}/{b}"] = float(np.abs(fields[a].values - fields[b].values).max())
    if max(deviations.values()) > tolerance:
        raise RouteDisagreementError(deviations, tolerance)
    return fields, deviations


def bs_mixture_operator(spec):
    acc = sum(p * elementary_bs_state_operator(psi, phi).entries for p, psi, phi in spec.terms)
    acc = 0.5 * (acc + acc.conj().T)
    return OperatorMatrix(acc / np.trace(acc).real, kind="density")


def bs_mixture_wigner(spec, grid, route="unitary"):
    """Convex combination of elementary BS fields."""
    values = np.zeros((grid.n_points, grid.n_points))
    warnings = ()
    for p, psi, phi in spec.terms:
        f = elementary_bs_wigner(psi, phi, grid, route)
        values = values + p * f.values.real
        warnings += tuple(w for w in f.warnings if w not in warnings)
    return PhaseField(grid, values, "wigner", warnings)


def unbalanced_bs_wigner(rho1, rho2, eta, grid):
    """``L_sqrt(eta)[W_1] * L_sqrt(1-eta)[W_2]``; not necessarily nonnegative."""
    if not 0.0 <= eta <= 1.0:
        raise DomainError(f"transmittance {eta} outside [0, 1]")
    # L_0 is a delta distribution, so the endpoints pass one input through
    if eta == 1.0:
        return wigner(rho1, grid)
    if eta == 0.0:
        return wigner(rho2, grid)
    f1 = wigner(rho1, grid, scale=math.sqrt(eta))
    f2 = wigner(rho2, grid, scale=math.sqrt(1.0 - eta))
    out = convolve(f1, f2)
    return PhaseField(grid, out.values.real, "wigner", out.warnings)


def husimi_bs_wigner(rho, grid):
    """Wigner field of ``sigma(rho, |0><0|)`` through the beam splitter; equals ``Q_rho``."""
    if isinstance(rho, OperatorMatrix) and rho.kind != "density":
        raise TagError("husimi_bs_wigner needs a density operator")
    vac = fock_state(0, rho.n_cut)
    return wigner(bs_output_operator(rho, vac), grid)


def husimi_route_deviation(rho, grid):
    """Max deviation between the BS construction and the direct Husimi function."""
    a = husimi_bs_wigner(rho, grid)
    b = husimi(rho if isinstance(rho, OperatorMatrix) else rho.projector(), grid)
    return float(np.abs(a.values - b.values).max())
