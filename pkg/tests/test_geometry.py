import pytest
from hypothesis import given
from hypothesis import strategies as st
from mpmath import mp, mpf

from conftest import valid_strings
from tetrachain.bary import chain_matrix
from tetrachain.geometry import (
    apply_bary,
    bary_coefficients,
    edge_lengths,
    helix_vertex,
    invisible_t0,
    realize_chain,
    realize_printed,
    reflect_tetra,
    tetra_array,
    tetra_volume,
    tetrahelix_bary_point,
)


def _dist(a, b):
    return mp.sqrt(sum((x - y) ** 2 for x, y in zip(a, b)))


@given(st.integers(-50, 50))
def test_helix_vertex_on_cylinder(i):
    from tetrachain.precision import RealCtx, make_constants

    c = make_constants(RealCtx(digits=40))
    with c.ctx.work():
        v = helix_vertex(i, c)
        assert abs(mp.sqrt(v[0] ** 2 + v[1] ** 2) - c.r) < mpf(10) ** -45
        assert abs(v[2] - i * c.h) < mpf(10) ** -45


def test_consecutive_vertices_unit_apart(c40):
    with c40.ctx.work():
        for i in range(-3, 12):
            d = _dist(helix_vertex(i, c40), helix_vertex(i + 1, c40))
            assert abs(d - 1) < mpf(10) ** -45


def test_seed_tetrahedron_regular(c40):
    t0 = invisible_t0(c40)
    with c40.ctx.work():
        for e in edge_lengths(t0):
            assert abs(e - 1) < mpf(10) ** -45
        assert abs(tetra_volume(t0) - mp.sqrt(2) / 12) < mpf(10) ** -45


def test_reflect_tetra_moves_one_vertex(c40):
    t0 = invisible_t0(c40)
    with c40.ctx.work():  # geometry primitives compute at ambient precision
        t1 = reflect_tetra(t0, 2)
        for p in range(4):
            d = _dist(t0.vertices[p], t1.vertices[p])
            if p == 1:  # vertex 2 is opposite face 2 and must move
                assert d > mpf("0.5")
            else:
                assert d < mpf(10) ** -45
        # volume is preserved, orientation flips do not change |det|/6
        assert abs(tetra_volume(t1) - tetra_volume(t0)) < mpf(10) ** -45
        t0_again = reflect_tetra(t1, 2)
        assert max(
            _dist(a, b) for a, b in zip(t0.vertices, t0_again.vertices)
        ) < mpf(10) ** -45


def test_realize_printed_counts(c40):
    chain = realize_printed((1, 2, 3, 4), c40)
    assert len(chain.tetrahedra) == 4
    assert chain.r0 == 1
    assert chain.string == (1, 2, 3, 4)


def test_realize_rejects_colliding_lead(c40):
    with pytest.raises(ValueError):
        realize_chain((2, 3), r0=2, c=c40)


def test_realization_matches_barycentric_product(c40):
    # reflect step by step in Cartesian space, then compare against the
    # single barycentric product applied to the seed
    s = (1, 2, 3, 4, 1, 3, 2, 1)
    chain = realize_printed(s, c40)
    t0 = invisible_t0(c40)
    K = chain_matrix(s).to_mpf(c40.ctx)
    with c40.ctx.work():
        t_alg = apply_bary(t0, K)
        t_geo = chain.tetrahedra[-1]
        err = max(_dist(a, b) for a, b in zip(t_alg.vertices, t_geo.vertices))
        assert err < mpf(10) ** -44


def test_ages_track_replacements(c40):
    chain = realize_printed((1, 3), c40)
    assert chain.ages[0] == (4, 1, 2, 3)  # slot 1 replaced by the lead step
    assert chain.ages[1] == (4, 1, 5, 3)


def test_bary_coefficients_base_case(c40):
    with c40.ctx.work():
        coeffs = bary_coefficients(-1, c40)
        assert abs(coeffs[0] - 1) < mpf(10) ** -45
        assert max(abs(x) for x in coeffs[1:]) < mpf(10) ** -45


@pytest.mark.parametrize("q", range(-1, 9))
def test_barycentric_helix_point(q, c40):
    t0 = invisible_t0(c40)
    with c40.ctx.work():
        p = tetrahelix_bary_point(q, t0, c40)
        v = helix_vertex(q, c40)
        assert _dist(p, v) < mpf(10) ** -40


@given(st.integers(-20, 60))
def test_bary_coefficients_sum_to_one(q):
    from tetrachain.precision import RealCtx, make_constants

    c = make_constants(RealCtx(digits=40))
    with c.ctx.work():
        assert abs(sum(bary_coefficients(q, c)) - 1) < mpf(10) ** -42


def test_tetra_array_shape(c40):
    a = tetra_array(invisible_t0(c40))
    assert a.shape == (4, 3) and a.dtype.kind == "f"
