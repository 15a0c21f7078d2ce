"""Tests for the closed-form chain matrix and its rigid-motion decomposition."""

from mpmath import mp, mpf

import pytest
from hypothesis import given, strategies as st

from tetrachain import bary
from tetrachain.geometry import invisible_t0, realize_printed
from tetrachain.metrics import gap_report, spectral_norm
from tetrachain.motion import (
    _H1_SIN_REJECTED,
    asymptotic_ratio,
    axis_point_norm_bound,
    closed_form_gap,
    corollary_angle_checks,
    decompose_motion,
    gap_bound_oh,
    gap_bound_qh,
    homogeneous_t0,
    k_formula,
    leg_axis_cosines,
    left_kernel_residuals,
    limit_matrix_norm,
    limiting_rhombus,
    motion_eigenvalues,
    motion_residuals,
    rank_of_k_minus_i,
    t0_operator_norm,
)
from tetrachain.precision import PrecisionError, reduce_angle, reduce_theta_multiple
from tetrachain.strings import octahelix_string, quadrahelix_string


def _maxdiff(A, B):
    return max(abs(A[i][j] - B[i][j]) for i in range(4) for j in range(4))


# --- closed form vs exact rational product -----------------------------------


@pytest.mark.parametrize("L", [1, 2, 3, 4, 10, 29])
def test_k_formula_matches_exact_product(L, ctx60):
    s = quadrahelix_string(L)
    exact = bary.chain_matrix(s).to_mpf(ctx60)
    K = k_formula(L, ctx60)
    with ctx60.work():
        assert _maxdiff(K, exact) < mpf(10) ** -55


@given(L=st.integers(min_value=1, max_value=60))
def test_k_formula_matches_exact_product_random(L, ctx40):
    exact = bary.chain_matrix(quadrahelix_string(L)).to_mpf(ctx40)
    K = k_formula(L, ctx40)
    with ctx40.work():
        assert _maxdiff(K, exact) < mpf(10) ** -40


def test_rejected_coefficient_variant_disagrees(ctx60):
    # the one-tenth-scaled sin block is close but measurably wrong
    exact = bary.chain_matrix(quadrahelix_string(10)).to_mpf(ctx60)
    K_bad = k_formula(10, ctx60, h1_sin=_H1_SIN_REJECTED)
    with ctx60.work():
        assert _maxdiff(K_bad, exact) > mpf(10) ** -10


def test_closed_form_gap_matches_direct_report(ctx40, c40):
    cf = closed_form_gap(10, ctx40, c40)
    direct = gap_report(quadrahelix_string(10), c40)
    assert cf.L == 10 and cf.k == 4
    with ctx40.work():
        assert abs(cf.gap - direct.gap) < mpf(10) ** -35
        assert abs(cf.delta_bar - mpf("0.173022584522146901")) < mpf(10) ** -15
        assert cf.gap <= cf.norm_gap


def test_closed_form_gap_far_beyond_exact_range(ctx40):
    # a string of length 2407778 is far past the exact-product limit
    cf = closed_form_gap(601944, ctx40)
    with ctx40.work():
        assert abs(cf.gap - mpf("1.3174462e-7")) < mpf(10) ** -13


def test_closed_form_gap_refuses_unresolvable_scale(ctx40):
    # a generic 99-digit L parks the chain end ~1e98 seed-edges away, and
    # 40 digits cannot see a unit tetrahedron at that range
    with pytest.raises(PrecisionError, match="digits"):
        closed_form_gap(2 * 10**98 // 3, ctx40)


# --- rigid-motion decomposition -----------------------------------------------


@pytest.fixture(scope="module")
def qh10_motion(ctx40, c40):
    K = k_formula(10, ctx40)
    return K, decompose_motion(K, invisible_t0(c40), ctx40)


def test_motion_residuals_tiny(qh10_motion, ctx40):
    _, m = qh10_motion
    res = motion_residuals(m, ctx40)
    assert set(res) == {
        "orthogonality",
        "det_minus_1",
        "axis_invariance",
        "w_dot_t",
        "axis_point",
    }
    with ctx40.work():
        assert all(v < mpf(10) ** -40 for v in res.values())
        assert abs(m.angle - mpf("0.029259127")) < mpf(10) ** -8


def test_motion_from_exact_matrix(ctx40, c40):
    # the decomposition accepts the exact rational product directly
    m = decompose_motion(
        bary.chain_matrix(quadrahelix_string(4)), invisible_t0(c40), ctx40
    )
    res = motion_residuals(m, ctx40)
    with ctx40.work():
        assert all(v < mpf(10) ** -40 for v in res.values())


def test_motion_eigenvalue_structure(qh10_motion, ctx40):
    K, m = qh10_motion
    eigs = motion_eigenvalues(K, ctx40)
    with ctx40.work():
        tol = mpf(10) ** -30
        assert all(abs(abs(e) - 1) < tol for e in eigs)
        complex_pair = [e for e in eigs if abs(mp.im(e)) > tol]
        ones = [e for e in eigs if abs(e - 1) < tol]
        assert len(complex_pair) == 2 and len(ones) == 2
        z1, z2 = complex_pair
        assert abs(z1 - mp.conj(z2)) < tol
        assert abs(abs(mp.arg(z1)) - m.angle) < tol


def test_rank_of_k_minus_i(qh10_motion, ctx40):
    K, _ = qh10_motion
    assert rank_of_k_minus_i(K, ctx40) == 2
    ident = [[mpf(1 if i == j else 0) for j in range(4)] for i in range(4)]
    assert rank_of_k_minus_i(ident, ctx40) == 0


def test_left_kernel_rows(qh10_motion, ctx40, c40):
    K, m = qh10_motion
    res = left_kernel_residuals(K, m.w, invisible_t0(c40), ctx40)
    with ctx40.work():
        assert res["ones_row"] < mpf(10) ** -40
        assert res["w_t0_row"] < mpf(10) ** -40


def test_identity_matrix_is_pure_translation(ctx40, c40):
    ident = [[mpf(1 if i == j else 0) for j in range(4)] for i in range(4)]
    m = decompose_motion(ident, invisible_t0(c40), ctx40)
    assert m.w is None and m.u is None
    assert m.angle == 0
    res = motion_residuals(m, ctx40)
    assert set(res) == {"orthogonality", "det_minus_1"}


def test_homogeneous_t0_shape(c40):
    T = homogeneous_t0(invisible_t0(c40))
    assert len(T) == 4 and all(len(row) == 4 for row in T)
    assert all(x == 1 for x in T[3])


# --- angle identities and bounds ----------------------------------------------


def test_corollary_angle_identity(c40):
    out = corollary_angle_checks(10, c40)
    with c40.ctx.work():
        assert out["agreement"] < mpf(10) ** -45
        assert abs(out["rho0"] - mpf("1.5634815")) < mpf(10) ** -7
        assert abs(out["sin_rho"] - mpf("0.0073147164")) < mpf(10) ** -10
        # the screw angle is the wrap of four copies of the half-turn angle
        wrapped = abs(reduce_angle(4 * out["rho0"], c40.ctx))
        assert abs(out["motion_angle"] - wrapped) < mpf(10) ** -30
        assert out["norm_bound_ok"]
        assert out["r_norm"] <= out["delta_bar"] ** 2


@pytest.mark.parametrize("L", [29, 40, 70, 182, 253])
def test_qh_gap_bound_dominates_measured_gap(L, c40, ctx40):
    b = gap_bound_qh(L, ctx40)
    report = gap_report(quadrahelix_string(L), c40)
    with ctx40.work():
        assert report.gap <= b.tight_bound <= b.bound


def test_oh_gap_bound_686(ctx40):
    b = gap_bound_oh(686, ctx40)
    assert b.target == "gamma_plus"
    with ctx40.work():
        d, _ = reduce_theta_multiple(686, ctx40, offset="gamma_plus")
        assert abs(b.delta_bar - d) < mpf(10) ** -45
        assert mpf("2.4e-4") < b.bound < mpf("2.6e-4")


def test_asymptotic_ratio_approaches_limit(ctx40):
    with ctx40.work():
        limit = 8 * mp.sqrt(3) / 25
        r = asymptotic_ratio(1960, ctx40)
        assert abs(r - limit) / limit < mpf("0.02")
        assert abs(limit_matrix_norm(ctx40) - limit) < mpf(10) ** -35


def test_t0_operator_norm_closed_form(c40):
    value, closed = t0_operator_norm(c40)
    with c40.ctx.work():
        assert abs(value - closed) < mpf(10) ** -35


def test_axis_point_within_bound(qh10_motion, c40):
    _, m = qh10_motion
    with c40.ctx.work():
        unorm = mp.sqrt(sum(x * x for x in m.u))
        assert unorm <= axis_point_norm_bound(10, c40)


# --- leg axes and the limiting rhombus ----------------------------------------


def test_leg_axis_cosines_quadrahelix(c40):
    chain = realize_printed(quadrahelix_string(4), c40)
    cos = leg_axis_cosines(chain, c40)
    assert len(cos) == 3
    with c40.ctx.work():
        signs = [-1, 1, -1]
        for got, sgn in zip(cos, signs):
            assert abs(got - mpf(sgn) / 5) < mpf(10) ** -20


def test_leg_axis_cosines_octahelix(c40):
    chain = realize_printed(octahelix_string(4), c40)
    cos = leg_axis_cosines(chain, c40)
    assert len(cos) == 7
    with c40.ctx.work():
        for got in cos:
            assert abs(got - mpf(1) / 5) < mpf(10) ** -20


def test_limiting_rhombus(ctx40):
    out = limiting_rhombus(ctx40)
    with ctx40.work():
        x = 2 * mp.sqrt(6) / 5
        tol = mpf(10) ** -30
        targets = ((0, 0), (0, 1), (x, mpf(4) / 5), (x, -mpf(1) / 5))
        for got, want in zip(out["vertices"], targets):
            assert abs(got[0] - want[0]) < tol and abs(got[1] - want[1]) < tol
        assert abs(out["short_diagonal"] - 2 * mp.sqrt(10) / 5) < tol
        for i, ang in enumerate(out["angles"]):
            want = mpf(1 if i % 2 else -1) / 5
            assert abs(mp.cos(ang) - want) < tol
