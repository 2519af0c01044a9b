"""Tensor values, metric inversion, contractions and field wrappers."""

import math

import numpy as np
import pytest

from kkforms import (
    ChartPoint,
    DegenerateMetricError,
    DerivedTwoForm,
    ScaledField,
    SignatureMatrix,
    SmoothField,
    TensorValue,
    antisym_pair,
    contract,
    make_real_space_form,
    metric_inverse,
)


def test_metric_inverse_identity_and_diagonal():
    inv = metric_inverse(np.eye(3))
    assert inv.valence == (0, 2)
    assert np.array_equal(inv.components, np.eye(3))
    # a Lorentzian diagonal is its own inverse
    eta = np.diag([-1.0, 1.0, 1.0])
    assert np.array_equal(metric_inverse(eta).components, eta)


def test_metric_inverse_conformal_closed_form():
    # for g = eta / Phi^2 the inverse is Phi^2 eta entrywise
    inst = make_real_space_form(4, 1, 0.7)
    p = ChartPoint((0.2, -0.3, 0.5, 0.1))
    eta = np.diag([-1.0, 1.0, 1.0, 1.0])
    x = p.array()
    phi = 1.0 + 0.25 * 0.7 * float(x @ (np.diag(eta) * x))
    gval = TensorValue((2, 0), 4, inst.g.jet(p, 0).value)
    inv = metric_inverse(gval)
    assert np.max(np.abs(inv.components - phi**2 * eta)) < 1e-12


def test_metric_inverse_product_and_involution():
    rng = np.random.default_rng(7)
    for _ in range(6):
        m = rng.normal(size=(4, 4))
        g = m @ m.T + 4.0 * np.eye(4)
        inv = metric_inverse(g).components
        assert np.max(np.abs(g @ inv - np.eye(4))) < 1e-12
        back = metric_inverse(inv).components
        assert np.max(np.abs(back - g)) < 1e-10 * np.max(np.abs(g))


def test_metric_inverse_rejects_bad_input():
    with pytest.raises(DegenerateMetricError):
        metric_inverse(np.diag([1.0, 1e-13]))
    with pytest.raises(DegenerateMetricError):
        metric_inverse(np.zeros((3, 3)))
    with pytest.raises(ValueError):
        metric_inverse(np.array([[1.0, 0.5], [0.0, 1.0]]))
    with pytest.raises(ValueError):
        metric_inverse(TensorValue((1, 1), 2, np.eye(2)))


def test_contract_traces():
    delta = TensorValue((1, 1), 4, np.eye(4))
    tr = contract(delta, 0, 1)
    assert tr.valence == (0, 0)
    assert tr.components == 4.0

    rng = np.random.default_rng(3)
    m = rng.normal(size=(5, 5))
    g = TensorValue((2, 0), 5, m @ m.T + 5.0 * np.eye(5))
    ginv = metric_inverse(g)
    full = contract(g, 0, 1, metric=ginv)
    assert abs(full.components - 5.0) < 1e-12
    # same-variance contraction without a metric is refused
    with pytest.raises(ValueError):
        contract(g, 0, 1)
    with pytest.raises(ValueError):
        contract(g, 1, 1)


def test_contract_two_form_norm_closed_form():
    # A = (sin x^1, 0) on a Lorentzian plane: F_01 = -cos x^1 and
    # F_ab F^ab = -2 cos^2 x^1.
    import kkforms.jets as jm

    A = SmoothField(2, (1, 0), lambda xs: [jm.sin(xs[1]), 0.0])
    F = DerivedTwoForm(A)
    p = ChartPoint((0.0, 0.7))
    fv = F.jet(p, 0).value
    assert abs(fv[0, 1] + math.cos(0.7)) < 1e-14
    eta_inv = TensorValue((0, 2), 2, np.diag([-1.0, 1.0]))
    outer = TensorValue((4, 0), 2, np.einsum("ab,cd->abcd", fv, fv))
    once = contract(outer, 0, 2, metric=eta_inv)
    fsq = contract(once, 0, 1, metric=eta_inv)
    assert fsq.valence == (0, 0)
    assert abs(fsq.components + 2.0 * math.cos(0.7) ** 2) < 1e-13


def test_antisym_pair_properties():
    rng = np.random.default_rng(11)
    t = TensorValue((2, 0), 3, rng.normal(size=(3, 3)))
    sym = TensorValue((2, 0), 3, t.components + t.components.T)
    assert np.all(antisym_pair(sym, 0, 1).components == 0.0)
    alt = TensorValue((2, 0), 3, t.components - t.components.T)
    assert np.array_equal(antisym_pair(alt, 0, 1).components, alt.components)
    # idempotent, and linear over the slot pair
    once = antisym_pair(t, 0, 1)
    assert np.array_equal(antisym_pair(once, 0, 1).components, once.components)
    u = TensorValue((2, 0), 3, rng.normal(size=(3, 3)))
    combo = TensorValue((2, 0), 3, 0.5 * t.components - 2.0 * u.components)
    lhs = antisym_pair(combo, 0, 1).components
    rhs = 0.5 * antisym_pair(t, 0, 1).components - 2.0 * antisym_pair(u, 0, 1).components
    assert np.max(np.abs(lhs - rhs)) < 1e-15
    # mixed-variance pairs are refused
    with pytest.raises(ValueError):
        antisym_pair(TensorValue((1, 1), 3, np.eye(3)), 0, 1)


def test_smooth_field_rectangular_shape_override():
    # a 2-component grid of functions on a 3-d chart (a block sub-row)
    f = SmoothField(3, (1, 0), lambda xs: [xs[1] * xs[1], xs[0] * xs[2]], shape=(2,))
    j = f.jet(ChartPoint((2.0, 3.0, 5.0)), 1)
    assert j.value.shape == (2,)
    assert j.d1.shape == (2, 3)
    assert tuple(j.value) == (9.0, 10.0)
    assert tuple(j.d1[0]) == (0.0, 6.0, 0.0)
    assert tuple(j.d1[1]) == (5.0, 0.0, 2.0)


def test_scaled_field_negates_all_orders_exactly():
    inst = make_real_space_form(3, 1, -0.8)
    neg = ScaledField(inst.g, -1.0)
    p = ChartPoint((0.4, -0.2, 0.9))
    a, b = inst.g.jet(p, 2), neg.jet(p, 2)
    assert np.array_equal(b.value, -a.value)
    assert np.array_equal(b.d1, -a.d1)
    assert np.array_equal(b.d2, -a.d2)
    # the factor must also reach consumers that compose raw builders
    via_builder = SmoothField(3, (2, 0), neg.builder)
    assert np.array_equal(via_builder.jet(p, 2).value, -a.value)
    twice = ScaledField(neg, -2.0)
    assert np.array_equal(twice.jet(p, 0).value, 2.0 * a.value)


def test_derived_two_form_antisymmetry_and_order_cap():
    A = SmoothField(3, (1, 0), lambda xs: [xs[1] * xs[2], xs[0] * xs[0], 0.0])
    F = DerivedTwoForm(A)
    p = ChartPoint((1.0, 2.0, 3.0))
    j = F.jet(p, 2)
    assert np.array_equal(j.value, -j.value.T)
    # F_01 = d_0 A_1 - d_1 A_0 = 2 x^0 - x^2
    assert j.value[0, 1] == 2.0 * 1.0 - 3.0
    assert j.value[0, 2] == -2.0
    assert np.all(j.d1 == -j.d1.transpose(1, 0, 2))
    with pytest.raises(ValueError):
        F.jet(p, 3)
    with pytest.raises(ValueError):
        DerivedTwoForm(SmoothField(3, (2, 0), lambda xs: np.eye(3).tolist()))


def test_signature_matrix_with_index():
    s = SignatureMatrix.with_index(5, 2)
    assert s.diag == (-1, -1, 1, 1, 1)
    assert s.index == 2
    assert s.dim == 5
    assert np.array_equal(s.matrix(), np.diag([-1.0, -1.0, 1.0, 1.0, 1.0]))
    with pytest.raises(ValueError):
        SignatureMatrix.with_index(3, 4)
    with pytest.raises(ValueError):
        SignatureMatrix((1, 0, -1))
