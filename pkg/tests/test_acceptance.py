"""Acceptance criteria 1-11, one PASS/FAIL line each.

Run with ``pytest tests/test_acceptance.py -v`` (the lines are repeated in the
terminal summary) or directly with ``python3 tests/test_acceptance.py``.
"""

import itertools
import math
import sys

import numpy as np
import pytest

from wignerbs.bs_states import check_routes, elementary_bs_state_operator
from wignerbs.cli import FIG6_ALPHAS, RunConfig, fig6_failures, fig6_rows
from wignerbs.entropy import (
    p_norm,
    power_entropy,
    power_norm,
    renyi_entropy,
    rescaled_entropy,
    rescaled_norm,
    scaled_entropy,
    shannon_entropy,
)
from wignerbs.fock import fock_state, gaussian_pure_state, mixture, superposition, thermal_state
from wignerbs.interference import (
    fourier_duality_check,
    hbar_scaled_inner_check,
    lieb_norm_checks,
    verify_inner,
)
from wignerbs.phase_space import (
    PhaseSpaceGrid,
    convolve,
    marginals,
    max_abs,
    quadrature_distributions,
    wigner,
)
from wignerbs.statespec import random_superposition

N_CUT = 40
GRID = PhaseSpaceGrid.default(N_CUT)
GRID9 = PhaseSpaceGrid(9.0, 256)
LN_PI = math.log(math.pi)


def fig4_state():
    return superposition([(1, 0), (-1, 1), (1j, 2)], N_CUT)


def vacuum_field():
    return wigner(fock_state(0, N_CUT), GRID)


def criterion_1():
    h = shannon_entropy(vacuum_field()).value
    err = abs(h - (LN_PI + 1))
    return err <= 1e-4, f"h(W_0) = {h:.10f}, |error| = {err:.2e} (tol 1e-4)"


def criterion_2():
    w0 = vacuum_field()
    errs = {}
    for a in (0.5, 2.0, 3.0, math.inf):
        expect = LN_PI if a == math.inf else LN_PI + math.log(a) / (a - 1)
        errs[a] = abs(renyi_entropy(w0, a).value - expect)
    worst = max(errs.values())
    return worst <= 1e-4, f"max |h_a(W_0) - closed form| over a in (0.5, 2, 3, inf) = {worst:.2e} (tol 1e-4)"


def criterion_3():
    psi = fig4_state()
    w = wigner(psi, GRID9)
    rep = verify_inner(psi, GRID9)
    min_sq = float((w.values.real ** 2).min())
    min_conv = float(convolve(w, w).values.real.min())
    ok = rep.max_abs_residual <= 1e-5 and min_sq >= -1e-8 and min_conv >= -1e-8
    return ok, (f"inner residual {rep.max_abs_residual:.2e} (tol 1e-5), "
                f"min W^2 {min_sq:.2e}, min W*W {min_conv:.2e} (tol -1e-8)")


def criterion_4():
    rows = fig6_rows(RunConfig(n_cut=N_CUT, alphas=FIG6_ALPHAS), GRID)
    bad = fig6_failures(rows, 1e-4)
    bs_min = min(r.margin for lbl, reps in rows if lbl.startswith("bs:") for r in reps)
    flagged = all(r.diverges for lbl, reps in rows if lbl.startswith("fock:") for r in reps if r.alpha == 1.0)
    detail = (f"{len(rows)} states x {len(FIG6_ALPHAS)} orders, min BS margin {bs_min:.2e}, "
              f"Fock divergence at 1 flagged: {flagged}, violations: {len(bad)}")
    return not bad and flagged, detail


def criterion_5():
    worst = 0.0
    for r in (0.2, 0.4, 0.6):
        rho = elementary_bs_state_operator(gaussian_pure_state(r, 0, N_CUT), gaussian_pure_state(-r, 0, N_CUT)).entries
        nbar = math.sinh(r) ** 2
        n = np.arange(N_CUT + 1)
        pops = np.diag(rho).real
        off = np.abs(rho - np.diag(np.diag(rho))).max()
        geo = np.abs(pops - nbar**n / (nbar + 1) ** (n + 1)).max()
        mean = abs(float(n @ pops) - nbar)
        worst = max(worst, off, geo, mean)
    return worst <= 1e-4, f"worst of off-diagonal, population and mean-photon errors over r in (0.2, 0.4, 0.6) = {worst:.2e} (tol 1e-4)"


def criterion_6():
    rng = np.random.default_rng(20240601)
    ps = (1.2, 1.5, 3.0, 6.0, math.inf)
    violations = 0
    tightest = math.inf
    for _ in range(50):
        psi, phi = random_superposition(4, N_CUT, rng), random_superposition(4, N_CUT, rng)
        for chk in lieb_norm_checks(psi, phi, ps, GRID, slack=1e-6):
            violations += not chk.satisfied
            tightest = min(tightest, abs(chk.lhs - chk.rhs))
    sat = 0.0
    for r, d in ((0.0, 1.0), (0.3, 1.0), (-0.4, 0.5 + 0.5j)):
        a, b = gaussian_pure_state(r, 0, N_CUT), gaussian_pure_state(r, d, N_CUT)
        for chk in lieb_norm_checks(a, b, ps, GRID):
            sat = max(sat, abs(chk.lhs - chk.rhs))
    ok = violations == 0 and sat <= 1e-5
    return ok, (f"50 random pairs x 5 orders: {violations} violations (slack 1e-6, closest gap {tightest:.2e}); "
                f"matched Gaussian max |gap| {sat:.2e} (tol 1e-5)")


def criterion_7():
    states = [fock_state(n, N_CUT) for n in range(4)] + [fig4_state()]
    worst = max(abs(renyi_entropy(wigner(s, GRID), 2.0).value - math.log(2 * math.pi)) for s in states)
    gap = verify_inner(thermal_state(1.0, N_CUT), GRID9).integrated_gap
    ok = worst <= 1e-4 and abs(gap - 2 / 3) <= 1e-3
    return ok, f"max |h_2 - ln 2pi| = {worst:.2e} (tol 1e-4); thermal gap {gap:.6f} vs 2/3 (tol 1e-3)"


def criterion_8():
    worst = 0.0
    for n, m in itertools.product(range(4), repeat=2):
        _, dev = check_routes(fock_state(n, N_CUT), fock_state(m, N_CUT), GRID, tolerance=math.inf)
        worst = max(worst, max(dev.values()))
    return worst <= 1e-5, f"max route deviation over 16 Fock pairs = {worst:.2e} (tol 1e-5)"


def criterion_9():
    errs = {"rescaling": 0.0, "power": 0.0, "constant": 0.0}
    divergence_mismatch = 0
    for n in (0, 2):
        state = fock_state(n, N_CUT)
        w = wigner(state, GRID)
        for s in (0.5, 2.0):
            ws = wigner(state, GRID, scale=s)
            for p in (1.0, 2.0, 3.0):
                errs["rescaling"] = max(errs["rescaling"], abs(p_norm(ws, p) - rescaled_norm(p_norm(w, p), s, p)))
            for a in (1.0, 2.0, 3.0):
                base, scaled = renyi_entropy(w, a), renyi_entropy(ws, a)
                if base.diverges or scaled.diverges:
                    # Shannon entropy of a sign-changing field: both sides must diverge
                    divergence_mismatch += base.diverges != scaled.diverges
                    continue
                pred = rescaled_entropy(base.value, s)
                errs["rescaling"] = max(errs["rescaling"], abs(scaled.value - pred))
    w0 = vacuum_field()
    sq = w0.with_values(w0.values**2)
    for a in (0.5, 0.75):
        errs["power"] = max(errs["power"], abs(p_norm(sq, a) - power_norm(p_norm(w0, 2 * a), 2)))
        pred = power_entropy(renyi_entropy(w0, 2 * a).value, 2, a)
        errs["power"] = max(errs["power"], abs(renyi_entropy(sq, a).value - pred))
    c = 2 * math.pi
    cw = w0.with_values(c * w0.values)
    for a in (0.5, 2.0):
        pred = scaled_entropy(renyi_entropy(w0, a).value, c, a)
        errs["constant"] = max(errs["constant"], abs(renyi_entropy(cw, a).value - pred))
    ok = errs["rescaling"] <= 1e-4 and errs["power"] <= 1e-4 and errs["constant"] <= 1e-6 and not divergence_mismatch
    return ok, (f"rescaling {errs['rescaling']:.2e} (tol 1e-4, divergence mismatches {divergence_mismatch}), "
                f"power {errs['power']:.2e} (tol 1e-4), "
                f"constant multiple {errs['constant']:.2e} (tol 1e-6)")


def _entropy_1d(density, dx):
    pos = density[density > 0]
    return float(-np.sum(pos * np.log(pos)) * dx)


def criterion_10():
    focks = [fock_state(n, N_CUT) for n in range(4)]
    states = [f.projector() for f in focks] + [fig4_state().projector(), thermal_state(1.0, N_CUT)]
    fields = [wigner(s, GRID) for s in states]

    moyal = 0.0
    for (ra, wa), (rb, wb) in itertools.combinations_with_replacement(list(zip(states, fields)), 2):
        tr = float(np.trace(ra.entries @ rb.entries).real)
        moyal = max(moyal, abs(tr - 2 * math.pi * float((wa.values * wb.values).sum().real) * GRID.cell_area))

    marg = 0.0
    for rho, w in zip(states, fields):
        mx, mp = marginals(w)
        px, pp = quadrature_distributions(rho, GRID.axis)
        marg = max(marg, np.abs(mx - px).max(), np.abs(mp - pp).max())

    peak = max(max_abs(w) for w in fields)

    candidates = [
        [1, 0, 0, 0], [0.5, 0.5, 0, 0], [0.6, 0.3, 0.1, 0], [0.5, 0.25, 0.125, 0.125],
        [0.4, 0.3, 0.2, 0.1], [0.25, 0.25, 0.25, 0.25], [0.2, 0.5, 0.3, 0],
    ]
    checked = 0
    sub_gap = math.inf
    for ps in candidates:
        rho = mixture(ps, [f.projector() for f in focks])
        w = wigner(rho, GRID)
        if w.values.real.min() < -1e-12:
            continue
        checked += 1
        px, pp = quadrature_distributions(rho, GRID.axis)
        h_marg = _entropy_1d(px, GRID.spacing) + _entropy_1d(pp, GRID.spacing)
        sub_gap = min(sub_gap, h_marg - shannon_entropy(w).value)

    ok = moyal <= 1e-8 and marg <= 1e-8 and peak <= 1 / math.pi + 1e-10 and checked >= 3 and sub_gap >= -1e-4
    return ok, (f"Moyal {moyal:.2e} (tol 1e-8), marginals {marg:.2e} (tol 1e-8), "
                f"max|W| - 1/pi {peak - 1 / math.pi:.2e} (tol 1e-10), "
                f"subadditivity min gap {sub_gap:.4f} over {checked} Wigner-positive mixtures (tol -1e-4)")


def criterion_11():
    f = [fock_state(n, N_CUT) for n in range(3)]
    quad = (f[0], f[1], f[2], f[1])
    dual = fourier_duality_check(*quad, GRID9).max_abs_residual
    literal = fourier_duality_check(*quad, GRID9, constant=8 * math.pi).max_abs_residual
    s = 1 / math.sqrt(2 * math.pi)
    hbar = max(hbar_scaled_inner_check(st, s, GRID9).max_abs_residual for st in f + [fock_state(3, N_CUT), fig4_state()])
    ok = dual <= 1e-4 and hbar <= 1e-5
    return ok, (f"Fourier-space relation (constant 2pi, W~_cb * W~_ad) residual {dual:.2e} (tol 1e-4; "
                f"with constant 8pi it would be {literal:.2e}); hbar-scaled inner residual {hbar:.2e} (tol 1e-5)")


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6,
            criterion_7, criterion_8, criterion_9, criterion_10, criterion_11]


def _line(k, ok, detail):
    return f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {detail}"


@pytest.mark.parametrize("k", range(1, len(CRITERIA) + 1))
def test_criterion(k, acceptance_log):
    ok, detail = CRITERIA[k - 1]()
    line = _line(k, ok, detail)
    print(line)
    acceptance_log.append(line)
    assert ok, line


if __name__ == "__main__":
    results = [CRITERIA[k - 1]() for k in range(1, len(CRITERIA) + 1)]
    for k, (ok, detail) in enumerate(results, start=1):
        print(_line(k, ok, detail))
    sys.exit(0 if all(ok for ok, _ in results) else 1)
