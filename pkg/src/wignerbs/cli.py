"""Command-line front end.

Exit codes: 0 when every enabled check passes, 1 when a check fails, 2 for
usage, parse or input errors.
"""

import argparse
from dataclasses import dataclass, field, replace
import json
import math
import os
import sys

import numpy as np

from .bs_states import BSStateSpec, bs_mixture_wigner, check_routes, elementary_bs_wigner
from .entropy import conjecture_margin_scan, write_reports_csv
from .errors import RouteDisagreementError, StateSpecError
from .fieldio import fmt, read_field_csv, write_field_csv, write_pgm
from .fock import PureState, fock_state, superposition
from .interference import (
    IDENTITIES,
    fourier_duality_check,
    gaussian_selfconv,
    hbar_scaled_inner_check,
    lemma1_check,
    lieb_norm_check,
    probe_field,
    verify_cross,
    verify_general,
    verify_inner,
    verify_outer,
)
from .phase_space import PhaseSpaceGrid, convolve, max_abs, wigner
from .statespec import load_state, parse_json

FORMATS = ("csv", "json", "pgm")
FIG6_ALPHAS = tuple(0.25 * k for k in range(1, 21)) + (math.inf,)
DEFAULT_TOLERANCES = {
    "residual": 1e-5,
    "residual_coarse": 1e-3,
    "margin": 1e-4,
    "negativity": 1e-8,
    "route": 1e-5,
}
ARITY = {"general": 4, "fourier_dual": 4, "outer": 2, "cross": 2, "lieb": 2, "lemma1": 2,
         "inner": 1, "hbar_scaled": 1, "gaussian_selfconv": 1}


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    n_cut: int = 40
    grid_l: float = None
    grid_n: int = 256
    alphas: tuple = FIG6_ALPHAS
    tolerances: dict = field(default_factory=lambda: dict(DEFAULT_TOLERANCES))
    out: str = "."
    formats: tuple = FORMATS
    seed: int = 0

    def grid(self, default_l=None):
        if self.grid_l is not None:
            return PhaseSpaceGrid(self.grid_l, self.grid_n)
        if default_l is not None:
            return PhaseSpaceGrid(default_l, self.grid_n)
        return PhaseSpaceGrid.default(self.n_cut, self.grid_n)

    def residual_threshold(self):
        key = "residual" if self.grid_n >= 256 else "residual_coarse"
        return self.tolerances[key]

    def rng(self):
        return np.random.default_rng(self.seed)


def _alpha(text):
    text = str(text).strip().lower()
    return math.inf if text in ("inf", "infinity") else float(text)


def load_config(args):
    """Config file first, then flags on top."""
    cfg = RunConfig()
    if args.config:
        try:
            with open(args.config) as fh:
                doc = parse_json(fh.read(), args.config)
        except OSError as exc:
            raise UsageError(f"cannot read config: {exc}") from exc
        if not isinstance(doc, dict):
            raise UsageError("config must be a JSON object")
        grid = doc.get("grid", {})
        tol = dict(cfg.tolerances)
        tol.update(doc.get("tolerances", {}))
        cfg = replace(
            cfg,
            n_cut=int(doc.get("n_cut", cfg.n_cut)),
            grid_l=grid.get("L", cfg.grid_l),
            grid_n=int(grid.get("N", cfg.grid_n)),
            alphas=tuple(_alpha(a) for a in doc.get("alphas", cfg.alphas)),
            tolerances=tol,
            out=doc.get("out", cfg.out),
            formats=tuple(doc.get("formats", cfg.formats)),
            seed=int(doc.get("seed", cfg.seed)),
        )
    over = {}
    if args.ncut is not None:
        over["n_cut"] = args.ncut
    if args.grid_n is not None:
        over["grid_n"] = args.grid_n
    if args.grid_l is not None:
        over["grid_l"] = args.grid_l
    if args.out is not None:
        over["out"] = args.out
    if args.format:
        over["formats"] = tuple(args.format)
    if args.seed is not None:
        over["seed"] = args.seed
    if getattr(args, "alphas", None):
        over["alphas"] = tuple(_alpha(a) for a in args.alphas.split(","))
    cfg = replace(cfg, **over)
    bad = set(cfg.formats) - set(FORMATS)
    if bad:
        raise UsageError(f"unknown formats {sorted(bad)}")
    return cfg


class Outputs:
    """Collects files and writes them together at the end of a run."""

    def __init__(self, cfg):
        self.cfg = cfg
        self.items = []

    def field(self, name, f, meta=None):
        if "csv" in self.cfg.formats:
            self.items.append((f"{name}.csv", lambda p: write_field_csv(f, p, meta)))
        if "pgm" in self.cfg.formats:
            self.items.append((f"{name}.pgm", lambda p: write_pgm(f, p)))

    def json(self, name, doc):
        if "json" in self.cfg.formats:
            text = json.dumps(_clean(doc), indent=2, sort_keys=True) + "\n"
            self.items.append((f"{name}.json", lambda p: _write_text(p, text)))

    def reports(self, name, reports, extra):
        if "csv" in self.cfg.formats:
            self.items.append((f"{name}.csv", lambda p: write_reports_csv(reports, p, extra)))

    def flush(self):
        os.makedirs(self.cfg.out, exist_ok=True)
        written = []
        for name, writer in self.items:
            path = os.path.join(self.cfg.out, name)
            writer(path)
            written.append(path)
        return written


def _write_text(path, text):
    with open(path, "w", newline="") as fh:
        fh.write(text)


def _clean(obj):
    """JSON-safe copy: floats at 17 digits, infinities as strings."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        return v if math.isfinite(v) else fmt(v)
    return obj


def _state(ref, cfg, rng=None):
    return load_state(ref, cfg.n_cut, rng)


def _field_of(state, grid):
    if isinstance(state, BSStateSpec):
        return bs_mixture_wigner(state, grid)
    return wigner(state, grid)


def fig4_state(n_cut):
    return superposition([(1, 0), (-1, 1), (1j, 2)], n_cut)


# -- subcommands ----------------------------------------------------------------


def cmd_wigner(args, cfg):
    state = _state(args.state, cfg, cfg.rng())
    grid = cfg.grid()
    f = _field_of(state, grid)
    out = Outputs(cfg)
    out.field("wigner", f, {"n_cut": cfg.n_cut})
    out.json("wigner", {
        "peak": max_abs(f),
        "integral": f.integral().real,
        "min": float(f.values.real.min()),
        "grid": {"L": grid.half_extent, "N": grid.n_points},
        "n_cut": cfg.n_cut,
        "warnings": list(f.warnings),
    })
    return 0, out


def cmd_fig4(args, cfg):
    grid = cfg.grid(default_l=9.0)
    psi = fig4_state(cfg.n_cut)
    w = wigner(psi, grid)
    w2 = w.with_values(w.values.real**2)
    wconv = convolve(w, w)
    rep = verify_inner(psi, grid)
    threshold = cfg.residual_threshold()
    neg_tol = cfg.tolerances["negativity"]
    mins = {"w2": float(w2.values.real.min()), "wconvw": float(wconv.values.real.min())}
    passed = rep.max_abs_residual <= threshold and min(mins.values()) >= -neg_tol
    out = Outputs(cfg)
    out.field("fig4_w", w)
    out.field("fig4_w2", w2)
    out.field("fig4_wconvw", wconv)
    doc = rep.to_dict()
    doc.update(threshold=threshold, minima=mins, negativity_tolerance=neg_tol, passed=passed)
    out.json("fig4_residual", doc)
    return (0 if passed else 1), out


def fig6_rows(cfg, grid):
    """``(label, reports)`` for the BS and Fock families."""
    rows = []
    for n in range(4):
        s = fock_state(n, cfg.n_cut)
        rows.append((f"bs:{n}+{n}", conjecture_margin_scan(elementary_bs_wigner(s, s, grid), cfg.alphas)))
    for n in (1, 2, 3):
        rows.append((f"fock:{n}", conjecture_margin_scan(wigner(fock_state(n, cfg.n_cut), grid), cfg.alphas)))
    return rows


def fig6_failures(rows, tol):
    """Violations of the expected margin sign structure."""
    bad = []
    for label, reps in rows:
        for r in reps:
            if label.startswith("bs:"):
                if r.margin < -tol:
                    bad.append((label, r.alpha, r.margin, ">= 0"))
            else:
                if r.alpha == 1.0 and not r.diverges:
                    bad.append((label, r.alpha, r.margin, "diverges"))
                if 1.0 < r.alpha <= 2.0 and r.margin > tol:
                    bad.append((label, r.alpha, r.margin, "<= 0"))
                if r.alpha >= 2.0 and r.margin < -tol:
                    bad.append((label, r.alpha, r.margin, ">= 0"))
    return bad


def cmd_fig6(args, cfg):
    grid = cfg.grid()
    rows = fig6_rows(cfg, grid)
    reports = [r for _, reps in rows for r in reps]
    labels = [label for label, reps in rows for _ in reps]
    flags = [str(r.diverges).lower() for r in reports]
    bad = fig6_failures(rows, cfg.tolerances["margin"])
    out = Outputs(cfg)
    out.reports("fig6", reports, [("state", labels), ("diverges", flags)])
    out.json("fig6", {"failures": [list(b) for b in bad], "passed": not bad,
                      "grid": {"L": grid.half_extent, "N": grid.n_points}, "n_cut": cfg.n_cut})
    return (0 if not bad else 1), out


def cmd_verify(args, cfg):
    need = ARITY[args.identity]
    if len(args.states) != need:
        raise UsageError(f"{args.identity} takes {need} state(s), got {len(args.states)}")
    rng = cfg.rng()
    states = [_state(s, cfg, rng) for s in args.states]
    grid = cfg.grid()
    pure_only = args.identity not in ("inner",)
    if pure_only and not all(isinstance(s, PureState) for s in states):
        raise UsageError(f"{args.identity} needs pure states")
    tag = args.identity
    if tag in ("lieb", "lemma1"):
        if tag == "lieb":
            chk = lieb_norm_check(states[0], states[1], args.p, grid)
            doc = {"identity": "lieb", "p": args.p, "lhs": chk.lhs, "rhs": chk.rhs,
                   "relation": chk.relation, "passed": bool(chk.satisfied)}
            passed = chk.satisfied
        else:
            rep = lemma1_check(states[0], states[1], args.alpha, grid)
            passed = rep.margin >= -cfg.tolerances["margin"] or not rep.proven_range
            doc = dict(rep.as_row(), identity="lemma1", proven_range=rep.proven_range, passed=passed)
    else:
        if tag == "general":
            rep = verify_general(*states, grid)
        elif tag == "fourier_dual":
            rep = fourier_duality_check(*states, grid)
        elif tag == "outer":
            rep = verify_outer(*states, grid)
        elif tag == "cross":
            rep = verify_cross(*states, grid, lam=complex(args.lam))
        elif tag == "inner":
            rep = verify_inner(states[0], grid)
        elif tag == "hbar_scaled":
            rep = hbar_scaled_inner_check(states[0], args.scale, grid)
        else:
            rep = gaussian_selfconv(states[0], grid)
        threshold = cfg.residual_threshold()
        passed = rep.max_abs_residual <= threshold
        doc = rep.to_dict()
        doc.update(threshold=threshold, passed=passed)
    out = Outputs(cfg)
    out.json("verify", doc)
    return (0 if passed else 1), out


def cmd_scan(args, cfg):
    state = _state(args.state, cfg, cfg.rng())
    grid = cfg.grid()
    f = _field_of(state, grid)
    reports = conjecture_margin_scan(f, cfg.alphas)
    tol = cfg.tolerances["margin"]
    nonneg = float(f.values.real.min()) >= -1e-9
    bad = []
    if nonneg:
        bad = [(r.alpha, r.margin) for r in reports if r.alpha >= 0.5 and r.margin < -tol]
    out = Outputs(cfg)
    out.reports("scan", reports, [("diverges", [str(r.diverges).lower() for r in reports])])
    out.json("scan", {"wigner_nonnegative": nonneg, "checked": nonneg,
                      "failures": [list(b) for b in bad], "passed": not bad})
    return (0 if not bad else 1), out


def cmd_probe(args, cfg):
    try:
        f = read_field_csv(args.field)
    except (OSError, ValueError) as exc:
        raise UsageError(f"cannot read field: {exc}") from exc
    rep = probe_field(f, cfg.n_cut)
    doc = rep.to_dict()
    doc["psd"] = rep.min_eigenvalue >= -1e-10
    out = Outputs(cfg)
    out.json("probe", doc)
    return 0, out


def cmd_bs_state(args, cfg):
    rng = cfg.rng()
    states = [_state(s, cfg, rng) for s in args.states]
    if len(states) == 1 and isinstance(states[0], BSStateSpec):
        spec = states[0]
    elif len(states) == 2 and all(isinstance(s, PureState) for s in states):
        spec = BSStateSpec(((1.0, states[0], states[1]),))
    else:
        raise UsageError("bs-state takes one bs_mixture spec or two pure states")
    grid = cfg.grid()
    tol = cfg.tolerances["route"]
    deviations = []
    passed = True
    for p, psi, phi in spec.terms:
        try:
            _, dev = check_routes(psi, phi, grid, tol)
        except RouteDisagreementError as exc:
            dev = exc.deviations
            passed = False
        deviations.append(dev)
    f = bs_mixture_wigner(spec, grid)
    out = Outputs(cfg)
    out.field("bs_state", f, {"n_cut": cfg.n_cut})
    out.json("bs_state", {"route_deviations": deviations, "route_tolerance": tol,
                          "min": float(f.values.real.min()), "integral": f.integral().real,
                          "passed": passed})
    return (0 if passed else 1), out


# -- parser -----------------------------------------------------------------------


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON run configuration")
    common.add_argument("--ncut", type=int, help="Fock truncation")
    common.add_argument("--grid-n", type=int, help="grid points per axis")
    common.add_argument("--grid-l", type=float, help="grid half extent")
    common.add_argument("--out", help="output directory")
    common.add_argument("--format", action="append", choices=FORMATS, help="output format (repeatable)")
    common.add_argument("--seed", type=int, help="seed for random states")

    parser = argparse.ArgumentParser(prog="wignerbs", description="Phase-space numerics for beam-splitter states")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("wigner", parents=[common], help="Wigner field of a state")
    p.add_argument("state", help="state spec: JSON file, JSON text, fock:N or random:K")
    p.set_defaults(func=cmd_wigner)

    p = sub.add_parser("fig4", parents=[common], help="inner interference formula on (|0>-|1>+i|2>)/sqrt3")
    p.set_defaults(func=cmd_fig4)

    p = sub.add_parser("fig6", parents=[common], help="Renyi entropy margins of BS and Fock states")
    p.add_argument("--alphas", help="comma-separated Renyi orders (inf allowed)")
    p.set_defaults(func=cmd_fig6)

    p = sub.add_parser("verify", parents=[common], help="residual of one identity")
    p.add_argument("identity", choices=sorted(set(IDENTITIES) | {"lieb", "lemma1"}))
    p.add_argument("states", nargs="+")
    p.add_argument("--scale", type=float, default=1.0, help="scale for hbar_scaled")
    p.add_argument("--lam", default="1", help="complex prefactor for cross, e.g. 2j")
    p.add_argument("--p", type=_alpha, default=3.0, help="norm order for lieb")
    p.add_argument("--alpha", type=_alpha, default=2.0, help="Renyi order for lemma1")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("scan", parents=[common], help="Renyi margins of one state")
    p.add_argument("state")
    p.add_argument("--alphas", help="comma-separated Renyi orders (inf allowed)")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("probe", parents=[common], help="inner residual and inverse-Weyl spectrum of a field CSV")
    p.add_argument("field")
    p.set_defaults(func=cmd_probe)

    p = sub.add_parser("bs-state", parents=[common], help="BS state field with route cross-check")
    p.add_argument("states", nargs="+")
    p.set_defaults(func=cmd_bs_state)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = load_config(args)
        code, out = args.func(args, cfg)
    except (UsageError, StateSpecError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    for path in out.flush():
        print(path)
    return code


if __name__ == "__main__":
    sys.exit(main())
