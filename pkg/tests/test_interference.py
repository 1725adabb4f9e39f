import json
import math

import numpy as np
import pytest

from wignerbs.constants import INTERFERENCE_CONSTANT
from wignerbs.entropy import vacuum_norm
from wignerbs.fock import gaussian_pure_state, thermal_state
from wignerbs.interference import (
    IDENTITIES,
    fourier_duality_check,
    gaussian_selfconv,
    general_negative_control,
    hbar_scaled_inner_check,
    lemma1_bound,
    lemma1_check,
    lieb_norm_check,
    lieb_norm_checks,
    probe_field,
    verify_cross,
    verify_general,
    verify_inner,
    verify_outer,
)
from wignerbs.phase_space import PhaseField, convolve, cross_wigner, fourier_transform, wigner
from wignerbs.statespec import random_superposition


@pytest.fixture(scope="module")
def matched():
    return gaussian_pure_state(0.3, 0, 40), gaussian_pure_state(0.3, 1.0, 40)


def test_general_vacuum(grid9, focks):
    rep = verify_general(*[focks[0]] * 4, grid9)
    assert rep.identity == "general"
    assert rep.max_abs_residual <= 1e-6


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_general_random_fock_quadruple(grid9, focks, seed):
    rng = np.random.default_rng(seed)
    quad = [focks[int(k)] for k in rng.integers(0, 4, size=4)]
    assert verify_general(*quad, grid9).max_abs_residual <= 1e-5


def test_general_superpositions(grid9, fig4, focks):
    rng = np.random.default_rng(7)
    a, b = random_superposition(3, 40, rng), random_superposition(3, 40, rng)
    assert verify_general(a, fig4, b, focks[2], grid9).max_abs_residual <= 1e-5


def test_general_negative_control(grid9, focks):
    rep = general_negative_control(thermal_state(1.0, 40), focks[1], focks[2], grid9)
    assert rep.max_abs_residual > 1e-3


def test_outer_examples(grid9, focks):
    assert verify_outer(focks[0], focks[0], grid9).max_abs_residual <= 1e-6
    assert verify_outer(focks[1], focks[0], grid9).max_abs_residual <= 1e-5


def test_outer_right_side_nonnegative(grid9, fig4, focks):
    # |W_{psi phi}|^2 >= 0 is why balanced BS outputs are Wigner-positive
    cw = cross_wigner(fig4, focks[3], grid9.scaled(0.5))
    rhs = INTERFERENCE_CONSTANT * np.abs(cw.values) ** 2 / 4
    assert rhs.min() >= 0
    assert verify_outer(fig4, focks[3], grid9).max_abs_residual <= 1e-5


def test_cross_reduces_to_inner(grid9, focks, fig4):
    for psi in (focks[2], fig4):
        cross = verify_cross(psi, psi, grid9)
        inner = verify_inner(psi.projector(), grid9)
        assert cross.max_abs_residual == pytest.approx(inner.max_abs_residual, abs=1e-12)


def test_cross_examples(grid9, focks):
    assert verify_cross(focks[0], focks[2], grid9).max_abs_residual <= 1e-5
    rep = verify_cross(focks[0], focks[2], grid9, lam=2j)
    assert rep.max_abs_residual <= 1e-5
    assert rep.extra["lam"] == [0.0, 2.0]


def test_inner_fig4(grid9, fig4):
    rep = verify_inner(fig4.projector(), grid9)
    assert rep.max_abs_residual <= 1e-5
    assert abs(rep.integrated_gap) <= 1e-8


def test_inner_vacuum_gaussian(grid9, focks):
    assert verify_inner(focks[0].projector(), grid9).max_abs_residual <= 1e-6
    assert gaussian_selfconv(focks[0], grid9).max_abs_residual <= 1e-6
    assert gaussian_selfconv(gaussian_pure_state(0.4, 0, 40), grid9).max_abs_residual <= 1e-6


@pytest.mark.parametrize("nbar", [0.5, 1.0, 2.0])
def test_inner_thermal_gap(grid9, nbar):
    rep = verify_inner(thermal_state(nbar, 40), grid9)
    assert rep.integrated_gap == pytest.approx(1 - 1 / (2 * nbar + 1), abs=1e-3)
    assert rep.max_abs_residual > 1e-3


def test_gaussian_selfconv_fails_for_displaced(grid9):
    # the fixed point L_sqrt2[W] = W * W is special to centered Gaussians
    assert gaussian_selfconv(gaussian_pure_state(0, 1.0, 40), grid9).max_abs_residual > 1e-2


def test_fourier_duality_vacuum(grid9, focks):
    assert fourier_duality_check(*[focks[0]] * 4, grid9).max_abs_residual <= 1e-5


def test_fourier_duality_fock_quadruple(grid9, focks):
    rep = fourier_duality_check(focks[0], focks[1], focks[2], focks[1], grid9)
    assert rep.max_abs_residual <= 1e-4


def test_fourier_duality_other_constant_fails(grid9, focks):
    quad = (focks[0], focks[1], focks[2], focks[1])
    rep = fourier_duality_check(*quad, grid9, constant=8 * math.pi)
    assert rep.max_abs_residual > 1e-2
    assert rep.extra["constant"] == pytest.approx(8 * math.pi)


def test_fourier_of_general_formula(grid9, focks):
    # F applied to both sides of a verified general-formula instance
    a, b, c, d = focks[0], focks[1], focks[2], focks[1]
    assert verify_general(a, b, c, d, grid9).max_abs_residual <= 1e-5
    lhs = fourier_transform(convolve(cross_wigner(a, b, grid9), cross_wigner(c, d, grid9)))
    wide = grid9.scaled(2.0)
    f_cb = fourier_transform(cross_wigner(c, b, grid9), wide)
    f_ad = fourier_transform(cross_wigner(a, d, grid9), wide)
    rhs = 4 * convolve(f_cb, f_ad).values
    assert np.abs(lhs.values - rhs).max() <= 1e-4


def test_hbar_scaled(grid9, fig4, focks):
    one = hbar_scaled_inner_check(fig4, 1.0, grid9)
    assert one.max_abs_residual == pytest.approx(verify_inner(fig4.projector(), grid9).max_abs_residual, abs=1e-12)
    s = 1 / math.sqrt(2 * math.pi)
    assert hbar_scaled_inner_check(fig4, s, grid9).max_abs_residual <= 1e-5
    assert hbar_scaled_inner_check(focks[0], 2.0, grid9).max_abs_residual <= 1e-5


def test_report_json(grid9, focks):
    rep = verify_outer(focks[1], focks[0], grid9)
    doc = json.loads(rep.to_json())
    assert set(doc) >= {"identity", "max_abs_residual", "integrated_gap", "grid", "n_cut", "states"}
    assert doc["grid"] == {"L": 9.0, "N": 256}
    assert doc["states"] == ["fock:1", "fock:0"]
    assert rep.max_abs_residual >= 0


def test_exact_identities_within_budget(grid9, focks, fig4):
    reps = [
        verify_general(fig4, focks[1], focks[3], fig4, grid9),
        verify_outer(fig4, focks[2], grid9),
        verify_cross(fig4, focks[1], grid9),
        verify_inner(fig4.projector(), grid9),
        hbar_scaled_inner_check(fig4, 0.8, grid9),
        fourier_duality_check(fig4, focks[1], focks[0], focks[2], grid9),
    ]
    assert {r.identity for r in reps} <= set(IDENTITIES)
    for rep in reps:
        assert rep.max_abs_residual <= 1e-4, rep.identity


def test_lieb_examples(grid, focks, matched):
    chk = lieb_norm_check(focks[0], focks[1], 3, grid)
    assert chk.relation == "<=" and chk.satisfied
    assert chk.rhs == pytest.approx(math.pi ** (-2 / 3) * 3 ** (-1 / 3), rel=1e-12)
    chk = lieb_norm_check(focks[0], focks[2], 1.5, grid)
    assert chk.relation == ">=" and chk.satisfied
    for p in (1.5, 3):
        chk = lieb_norm_check(*matched, p, grid)
        assert chk.lhs == pytest.approx(chk.rhs, abs=1e-5)


def test_lieb_equality_at_two(grid, fig4, focks):
    chk = lieb_norm_check(fig4, focks[3], 2, grid)
    assert chk.relation == "==" and chk.satisfied


def test_lieb_rejects_small_p(grid, focks):
    with pytest.raises(ValueError):
        lieb_norm_check(focks[0], focks[1], 0.5, grid)


def test_lieb_random_pairs(grid):
    rng = np.random.default_rng(2024)
    ps = [1.2, 1.5, 3, 6, math.inf]
    for _ in range(50):
        psi, phi = random_superposition(4, 40, rng), random_superposition(4, 40, rng)
        for p, chk in zip(ps, lieb_norm_checks(psi, phi, ps, grid)):
            assert chk.satisfied, (p, chk)


def test_lemma1(grid, focks, matched):
    rep = lemma1_check(*matched, 1.0, grid)
    assert rep.margin == pytest.approx(0.0, abs=1e-4)
    rep = lemma1_check(focks[0], focks[1], 2.0, grid)
    assert rep.margin >= 0 and rep.proven_range
    rep = lemma1_check(focks[0], focks[1], 0.3, grid)
    assert not rep.proven_range
    assert math.isfinite(rep.margin)


def test_lemma1_bound_matches_vacuum_field(grid, focks):
    for alpha in (0.5, 2.0, math.inf):
        assert lemma1_check(focks[0], focks[0], alpha, grid).value == pytest.approx(lemma1_bound(alpha), abs=1e-8)


def test_probe_physical_field(grid9, fig4):
    rep = probe_field(wigner(fig4, grid9), 40)
    assert rep.inner.max_abs_residual <= 1e-5
    assert rep.min_eigenvalue >= -1e-8
    assert rep.trace == pytest.approx(1.0, abs=1e-8)


def test_probe_too_narrow_gaussian(grid9):
    x, p = grid9.mesh()
    s = 0.7
    field = PhaseField(grid9, np.exp(-(x**2 + p**2) / s**2) / (math.pi * s**2), "derived")
    rep = probe_field(field, 40)
    assert rep.inner.max_abs_residual > 1e-3
    assert rep.min_eigenvalue < -1e-3
    assert "min_eigenvalue" in rep.to_dict()


def test_vacuum_norm_closed_form_values():
    for p in (1.2, 3.0):
        assert vacuum_norm(p) == pytest.approx(math.pi ** ((1 - p) / p) * p ** (-1 / p), rel=1e-12)
