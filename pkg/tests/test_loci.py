import random

import pytest

from trivector.errors import (BudgetExceeded, DegenerateConfiguration,
                              KernelDimNotOne, SingularCurve, WeilViolation)
from trivector.fields import GF
from trivector.linalg import Matrix
from trivector.loci import (batch_eval, cubic_of_Y,
                            curve_affine_points, curve_point_counts,
                            embedding_point, enumerate_rank_locus,
                            isqrt_weil_bound, jacobian_order_from_counts,
                            pencil_basis, rank_locus_codes,
                            reconstruct_from_pencil, verify_curve_embedding)
from trivector.polys import embed_map, extension_of
from trivector.trivector import (CURVE_DEGREES, CurveCoeffs, Trivector,
                                 build_gamma_c, gamma0, gl_act, phi_at)


def test_zero_trivector_all_rank_zero():
    rep, _ = enumerate_rank_locus(Trivector(GF(2)))
    assert rep.counts == {0: 511, 2: 0, 4: 0, 6: 0, 8: 0}


def test_rank_locus_respects_budget():
    with pytest.raises(BudgetExceeded):
        enumerate_rank_locus(gamma0(GF(2)), budget=100)


def test_report_counts_total_and_scan_matches_phi():
    f3 = GF(3)
    c = CurveCoeffs(f3, {30: 1})
    t = build_gamma_c(c)
    rep, pts = enumerate_rank_locus(t, max_rank=4, with_points=True)
    assert rep.total() == (3 ** 9 - 1) // 2
    # decoded points really have the reported rank
    for coords, r in pts[:10]:
        assert phi_at(t, list(coords)).rank() == r <= 4


def test_rank_counts_gl_invariant():
    rng = random.Random(0)
    f2 = GF(2)
    t = build_gamma_c(CurveCoeffs(f2, {15: 1, 30: 1}))
    rep, _ = enumerate_rank_locus(t)
    for _ in range(3):
        g = Matrix(f2, [[f2.random(rng) for _ in range(9)] for _ in range(9)])
        if not g.is_invertible():
            continue
        rep2, _ = enumerate_rank_locus(gl_act(g, t))
        assert rep2.counts == rep.counts


def test_jacobian_order_frozen_values():
    # power sums all zero: P(1) = 1 + q^2
    for q in (2, 3, 5, 7):
        assert jacobian_order_from_counts(q + 1, q * q + 1, q) == 1 + q * q
    # the four-roots oracle (i sqrt q, -i sqrt q) twice: product (1+q)^2
    for q in (2, 3, 4, 5, 7):
        assert jacobian_order_from_counts(q + 1, q * q + 1 + 4 * q, q) \
            == (1 + q) ** 2


def test_jacobian_order_weil_violations():
    with pytest.raises(WeilViolation):
        jacobian_order_from_counts(50, 5, 2)
    with pytest.raises(WeilViolation):
        jacobian_order_from_counts(3, 100, 2)
    assert isqrt_weil_bound(2) == 5 and isqrt_weil_bound(4) == 8


def test_curve_point_counts_base_example():
    f2 = GF(2)
    c = CurveCoeffs(f2, {15: 1})
    nd = curve_point_counts(c, [1, 2])
    assert nd == {1: 3, 2: 5}
    # enumeration oracle over the quadratic extension
    f4 = extension_of(f2, 2)
    emb = embed_map(f2, f4)
    c4 = c.map_coeffs(f4, emb)
    affine = 0
    F = c4.curve_poly()
    for x in f4.elements():
        for z in f4.elements():
            if F((x, z)).is_zero():
                affine += 1
    assert nd[2] == affine + 1
    with pytest.raises(SingularCurve):
        curve_point_counts(CurveCoeffs(f2), [1])


def test_point_counts_monotone_under_field_inclusion():
    rng = random.Random(1)
    f3 = GF(3)
    done = 0
    while done < 5:
        c = CurveCoeffs(f3, {d: f3.random(rng) for d in CURVE_DEGREES})
        from trivector.stability import curve_is_smooth
        if not curve_is_smooth(c):
            continue
        nd = curve_point_counts(c, [1, 2])
        assert nd[1] <= nd[2]
        done += 1


def test_lang_cross_check_f2_and_f3():
    cases = [CurveCoeffs(GF(2), {15: 1}), CurveCoeffs(GF(3), {30: 1})]
    for c in cases:
        t = build_gamma_c(c)
        rep, _ = enumerate_rank_locus(t)
        nd = curve_point_counts(c, [1, 2])
        assert rep.count_le(4) == jacobian_order_from_counts(
            nd[1], nd[2], c.field.order)


def test_embedding_certificate():
    f7 = GF(7)
    cert = verify_curve_embedding(CurveCoeffs(f7, {30: 1}))
    assert cert.points_checked == len(curve_affine_points(CurveCoeffs(f7, {30: 1})))
    assert cert.weierstrass_rank <= 4
    with pytest.raises(SingularCurve):
        verify_curve_embedding(CurveCoeffs(GF(2)))


def test_embedding_points_lie_on_curve():
    f7 = GF(7)
    c = CurveCoeffs(f7, {30: 1})
    F = c.curve_poly()
    pts = curve_affine_points(c)
    assert pts
    for (x, z) in pts:
        assert F((x, z)).is_zero()
        fp = embedding_point(f7, x, z)
        assert fp[2] == f7.el(-1) and fp[7] == x and fp[8] == z * z * z


def test_cubic_interpolation_and_failure_mode():
    f2 = GF(2)
    t = build_gamma_c(CurveCoeffs(f2, {15: 1}))
    cubic = cubic_of_Y(t)
    kern, rep, codes, ranks = rank_locus_codes(t, max_rank=6)
    vals = batch_eval(kern, cubic.as_multipoly(), codes)
    assert not vals.any()
    # the kernel gate refuses the zero trivector (everything rank <= 6)
    with pytest.raises(KernelDimNotOne):
        cubic_of_Y(Trivector(f2))


def test_reconstruct_round_trip_small():
    f16 = GF(2, 4)
    f2 = GF(2)
    emb = embed_map(f2, f16)
    t = build_gamma_c(CurveCoeffs(f2, {15: 1}).map_coeffs(f16, emb))
    rec = reconstruct_from_pencil(pencil_basis(t), seed=0)
    assert rec.proportional_to(t)


def test_reconstruct_rejects_low_rank_span():
    f16 = GF(2, 4)
    mats = []
    for i in range(8):
        m = Matrix.zero(f16, 9, 9)
        m.rows[0][i + 1] = f16.one
        m.rows[i + 1][0] = -f16.one
        mats.append(m)
    m = Matrix.zero(f16, 9, 9)
    m.rows[1][2] = f16.one
    m.rows[2][1] = -f16.one
    mats.append(m)
    with pytest.raises(DegenerateConfiguration):
        reconstruct_from_pencil(mats, seed=0, tries=300)


def test_reconstruct_rejects_dependent_input():
    f16 = GF(2, 4)
    t = build_gamma_c(CurveCoeffs(f16, {15: 1}))
    mats = pencil_basis(t)
    mats[8] = mats[0]
    with pytest.raises(DegenerateConfiguration):
        reconstruct_from_pencil(mats, seed=0)


def test_parallel_scan_deterministic():
    import numpy as np
    f2 = GF(2)
    t = build_gamma_c(CurveCoeffs(f2, {15: 1}))
    k1, r1, c1, rk1 = rank_locus_codes(t, max_rank=4)
    k2, r2, c2, rk2 = rank_locus_codes(t, max_rank=4, threads=3)
    assert r1.counts == r2.counts
    assert np.array_equal(c1, c2) and np.array_equal(rk1, rk2)
