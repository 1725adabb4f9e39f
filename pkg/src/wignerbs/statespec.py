"""JSON state specifications.

Documents are objects with a ``type`` key::

    {"type": "fock", "n": 2}
    {"type": "superposition", "terms": [[re, im, n], ...]}
    {"type": "gaussian", "r_re": 0.3, "r_im": 0, "d_re": 1, "d_im": 0}
    {"type": "thermal", "nbar": 1.0}
    {"type": "mixture", "terms": [{"p": 0.5, "state": {...}}, ...]}
    {"type": "bs_mixture", "terms": [{"p": 1.0, "psi": {...}, "phi": {...}}]}

On the command line ``fock:N`` is accepted as shorthand for a Fock state and
``random:K`` for a seeded random superposition of Fock levels ``0..K``.
"""

import json
import os

import numpy as np

from .bs_states import BSStateSpec
from .errors import StateSpecError
from .fock import (
    OperatorMatrix,
    PureState,
    fock_state,
    gaussian_pure_state,
    mixture,
    superposition,
    thermal_state,
)

_WEIGHT_TOL = 1e-9


def parse_json(text, source="<string>"):
    """``json.loads`` that reports the line and column of a syntax error."""
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise StateSpecError(f"{source}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc


def load_state(ref, n_cut, rng=None):
    """Resolve a path, a JSON string, a shorthand or an already-parsed dict."""
    if isinstance(ref, dict):
        return build_state(ref, n_cut)
    ref = str(ref)
    if ref.startswith("fock:"):
        return fock_state(_int(ref[5:], ref), n_cut)
    if ref.startswith("random:"):
        k = _int(ref[7:], ref)
        rng = rng if rng is not None else np.random.default_rng(0)
        return random_superposition(k, n_cut, rng)
    if os.path.exists(ref):
        with open(ref) as fh:
            return build_state(parse_json(fh.read(), ref), n_cut)
    if ref.lstrip().startswith("{"):
        return build_state(parse_json(ref), n_cut)
    raise StateSpecError(f"cannot resolve state {ref!r}: not a file, JSON object or shorthand")


def random_superposition(k, n_cut, rng):
    """Complex Gaussian amplitudes on Fock levels ``0..k``."""
    amps = rng.normal(size=k + 1) + 1j * rng.normal(size=k + 1)
    return superposition([(a, n) for n, a in enumerate(amps)], n_cut)


def _int(text, ref):
    try:
        return int(text)
    except ValueError as exc:
        raise StateSpecError(f"bad photon number in {ref!r}") from exc


def _need(doc, key, where):
    if key not in doc:
        raise StateSpecError(f"{where}: missing key {key!r}")
    return doc[key]


def _weights(terms, where):
    ps = [float(_need(t, "p", where)) for t in terms]
    if any(p < 0 for p in ps):
        raise StateSpecError(f"{where}: negative weight")
    if abs(sum(ps) - 1.0) > _WEIGHT_TOL:
        raise StateSpecError(f"{where}: weights sum to {sum(ps)!r}, not 1")
    return ps


def build_state(doc, n_cut):
    """PureState, density OperatorMatrix or BSStateSpec from a parsed document."""
    if not isinstance(doc, dict):
        raise StateSpecError("state spec must be a JSON object")
    kind = _need(doc, "type", "state")
    try:
        if kind == "fock":
            return fock_state(int(_need(doc, "n", "fock")), n_cut)
        if kind == "superposition":
            terms = [(complex(float(re), float(im)), int(n)) for re, im, n in _need(doc, "terms", kind)]
            return superposition(terms, n_cut)
        if kind == "gaussian":
            r = complex(float(doc.get("r_re", 0.0)), float(doc.get("r_im", 0.0)))
            d = complex(float(doc.get("d_re", 0.0)), float(doc.get("d_im", 0.0)))
            return gaussian_pure_state(r, d, n_cut)
        if kind == "thermal":
            return thermal_state(float(_need(doc, "nbar", kind)), n_cut)
        if kind == "mixture":
            terms = _need(doc, "terms", kind)
            ps = _weights(terms, kind)
            ops = []
            for t in terms:
                s = build_state(_need(t, "state", kind), n_cut)
                if isinstance(s, BSStateSpec):
                    raise StateSpecError("mixture terms cannot be BS mixtures")
                ops.append(s.projector() if isinstance(s, PureState) else s)
            return mixture(ps, ops)
        if kind == "bs_mixture":
            terms = _need(doc, "terms", kind)
            ps = _weights(terms, kind)
            built = []
            for p, t in zip(ps, terms):
                psi = build_state(_need(t, "psi", kind), n_cut)
                phi = build_state(_need(t, "phi", kind), n_cut)
                if not (isinstance(psi, PureState) and isinstance(phi, PureState)):
                    raise StateSpecError("bs_mixture inputs must be pure states")
                built.append((p, psi, phi))
            return BSStateSpec(tuple(built))
    except StateSpecError:
        raise
    except (TypeError, ValueError) as exc:
        raise StateSpecError(f"{kind}: {exc}") from exc
    raise StateSpecError(f"unknown state type {kind!r}")


def as_density(state):
    if isinstance(state, PureState):
        return state.projector()
    if isinstance(state, OperatorMatrix):
        return state
    raise StateSpecError("expected a single-mode state")


def describe(state):
    if isinstance(state, PureState):
        nz = np.flatnonzero(np.abs(state.coeffs) > 1e-12)
        if nz.size == 1:
            return f"fock:{int(nz[0])}"
        return "pure"
    if isinstance(state, BSStateSpec):
        return f"bs_mixture({len(state.terms)})"
    return "density"

