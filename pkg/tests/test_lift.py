"""One-dimension-higher extension: block formula, certificate, branches."""

import numpy as np
import pytest

from kkforms import (
    ChartPoint,
    LiftedMetric,
    ScaledField,
    SmoothField,
    lift,
    make_cpx_space_form,
    make_kink,
    make_kink2,
    make_kk_nullity_one,
    make_real_space_form,
    reduce,
    sample_points,
    weyl_vanishing,
)


def test_lift_block_formula_exact():
    gmat = np.diag([-1.0, 1.0, 2.0])
    avec = np.array([0.5, -1.0, 2.0])
    g = SmoothField.constant(3, (2, 0), gmat)
    A = SmoothField.constant(3, (1, 0), avec)
    for eps in (1, -1):
        lifted = lift(g, A, eps)
        assert lifted.dim == 4
        got = lifted.metric.jet(ChartPoint((0.1, 0.2, 0.3, 0.4)), 0).value
        want = np.zeros((4, 4))
        want[:3, :3] = gmat + eps * np.outer(avec, avec)
        want[:3, 3] = eps * avec
        want[3, :3] = eps * avec
        want[3, 3] = eps
        assert np.array_equal(got, want)
    with pytest.raises(ValueError):
        lifted.extend_point(ChartPoint((0.0, 0.0, 0.0, 0.0)))


def test_lift_zero_potential_is_direct_sum():
    inst = make_real_space_form(3, 1, 0.4)
    lifted = lift(inst.g, inst.A, 1)
    p = ChartPoint((0.2, -0.1, 0.3))
    q = lifted.extend_point(p, 0.7)
    got = lifted.metric.jet(q, 0).value
    base = inst.g.jet(p, 0).value
    assert np.array_equal(got[:3, :3], base)
    assert np.all(got[3, :3] == 0.0) and np.all(got[:3, 3] == 0.0)
    assert got[3, 3] == 1.0


def test_lift_determinant_relation():
    inst = make_cpx_space_form(2, 0, 1, 8.0)
    lifted = lift(inst.g, inst.A, inst.eps_d)
    for p in sample_points(inst.domain, 3, seed=5, metric=inst.g):
        det_base = np.linalg.det(inst.g.jet(p, 0).value)
        det_lift = np.linalg.det(lifted.metric.jet(lifted.extend_point(p), 0).value)
        assert abs(det_lift - inst.eps_d * det_base) < 1e-10 * max(1.0, abs(det_base))


def test_reduce_roundtrip():
    inst = make_cpx_space_form(2, 0, 1, 8.0)
    lifted = lift(inst.g, inst.A, inst.eps_d)
    g, A, eps = reduce(lifted)
    assert g is inst.g and A is inst.A and eps == inst.eps_d
    stuck = LiftedMetric(inst.g, inst.A, 1, lifted.metric, independent=False)
    with pytest.raises(ValueError):
        reduce(stuck)


def test_lifted_space_form_weyl_vanishes():
    inst = make_real_space_form(3, 1, 1.0)
    lifted = lift(inst.g, inst.A, 1)
    pts = sample_points(inst.domain, 5, seed=9)
    rep = weyl_vanishing(lifted, pts)
    assert rep.points == 5
    assert rep.rel_max < 1e-8


def test_per_branch_weyl_certificate():
    insts = [make_cpx_space_form(2, 0, 1, 8.0),
             make_cpx_space_form(2, 0, 1, 40.0, eps_d=-1),
             make_kink2(8.0, 1, False),
             make_kk_nullity_one(1, 0, -1, -4.0, 0.5)]
    for inst in insts:
        lifted = lift(inst.g, inst.A, inst.eps_d)
        pts = sample_points(inst.domain, 4, seed=13, metric=inst.g)
        rep = weyl_vanishing(lifted, pts)
        assert rep.rel_max < 1e-7, inst.label


def test_wrong_branch_is_detected():
    inst = make_cpx_space_form(2, 0, 1, 8.0)
    wrong = lift(inst.g, inst.A, -inst.eps_d)
    pts = sample_points(inst.domain, 4, seed=13, metric=inst.g)
    rep = weyl_vanishing(wrong, pts)
    assert rep.rel_max > 1e-3


def test_opposite_metric_symmetry():
    # (-g, A) extends conformally flat with the opposite fiber signature
    inst = make_cpx_space_form(2, 0, 1, 8.0)
    flipped = lift(ScaledField(inst.g, -1.0), inst.A, -inst.eps_d)
    pts = sample_points(inst.domain, 4, seed=13, metric=inst.g)
    rep = weyl_vanishing(flipped, pts)
    assert rep.rel_max < 1e-7


def test_weyl_is_independent_of_the_fiber_coordinate():
    inst = make_real_space_form(3, 0, 0.6)
    lifted = lift(inst.g, inst.A, 1)
    pts = sample_points(inst.domain, 3, seed=15)
    a = weyl_vanishing(lifted, pts, fiber=0.0)
    b = weyl_vanishing(lifted, pts, fiber=1.3)
    assert a.abs_max == b.abs_max and a.rel_max == b.rel_max


def test_lift_input_validation():
    ext = make_kink(2.0)
    with pytest.raises(ValueError):
        lift(ext.g, ext.A, 1)  # 2-d base: the certificate would be vacuous
    inst = make_real_space_form(3, 0, 0.5)
    with pytest.raises(ValueError):
        lift(inst.g, inst.A, 0)
    with pytest.raises(ValueError):
        lift(inst.A, inst.A, 1)
    other = make_real_space_form(4, 0, 0.5)
    with pytest.raises(ValueError):
        lift(inst.g, other.A, 1)
