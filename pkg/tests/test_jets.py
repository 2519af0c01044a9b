"""Differentiation engine: exactness, symmetry, and finite-difference oracles."""

import math

import numpy as np
import pytest

from kkforms import ChartPoint, EvaluationError, SmoothField, default_grid, make_kink
from kkforms import jets as jm

from _oracles import fd_first_partials, richardson_d1, richardson_d2


def test_constant_field_partials_are_exactly_zero():
    g = SmoothField.constant(3, (2, 0), np.diag([1.0, 2.0, 3.0]))
    j = g.jet(ChartPoint((0.3, -1.2, 4.0)), 2)
    assert np.all(j.d1 == 0.0)
    assert np.all(j.d2 == 0.0)


def test_polynomial_jet_values():
    # f(x) = (x^1)^2 on a 2-d chart: value 9, first partial 6, second 2.
    f = SmoothField(2, (0, 0), lambda xs: xs[0] * xs[0])
    j = f.jet(ChartPoint((3.0, 0.5)), 2)
    assert j.value == 9.0
    assert tuple(j.d1) == (6.0, 0.0)
    assert j.d2[0, 0] == 2.0
    assert j.d2[0, 1] == j.d2[1, 0] == j.d2[1, 1] == 0.0


def test_negative_power_jet():
    # x^-2: derivatives -2 x^-3, 6 x^-4, -24 x^-5 at x = 2.
    f = SmoothField(2, (0, 0), lambda xs: xs[0] ** -2)
    j = f.jet(ChartPoint((2.0, 0.0)), 3)
    assert abs(j.value - 0.25) < 1e-15
    assert abs(j.d1[0] + 0.25) < 1e-15
    assert abs(j.d2[0, 0] - 0.375) < 1e-15
    assert abs(j.d3[0, 0, 0] + 0.75) < 1e-15


def test_elementary_functions_match_richardson():
    # tanh, sech, sqrt, atanh against the finite-difference oracle.
    cases = [(jm.tanh, 0.7), (jm.sech, -0.4), (jm.sqrt, 2.3), (jm.atanh, 0.35),
             (jm.exp, 0.9), (jm.log, 1.7), (jm.sin, 1.1), (jm.cosh, -0.6)]
    for fn, x0 in cases:
        f = SmoothField(2, (0, 0), lambda xs, fn=fn: fn(xs[0]))

        def scalar(t, x0=x0, f=f):
            return f.jet(ChartPoint((x0 + t, 0.0)), 0).value

        j = f.jet(ChartPoint((x0, 0.0)), 2)
        assert abs(j.d1[0] - richardson_d1(scalar, 0.0)) < 1e-9 * max(1.0, abs(j.d1[0]))
        assert abs(j.d2[0, 0] - richardson_d2(scalar, 0.0)) < 1e-7 * max(1.0, abs(j.d2[0, 0]))


def test_kink_metric_component_against_richardson():
    # g_00 = -k^2 sech^4(sqrt(k/2) xi^1) at xi^1 = 0.5, k = 2.
    ext = make_kink(2.0, 1, True)
    p = ChartPoint((0.0, 0.5))

    def g00(t):
        return ext.g.jet(ChartPoint((0.0, 0.5 + t)), 0).value[0, 0]

    j = ext.g.jet(p, 1)
    fd = richardson_d1(g00, 0.0)
    assert abs(j.d1[0, 0, 1] - fd) <= 1e-6 * max(1.0, abs(fd))


def test_catalog_metric_partials_match_richardson():
    # Spot check here; the full sweep runs in the acceptance suite.
    rng = np.random.default_rng(11)
    for inst in default_grid()[::5]:
        lo = np.array([b[0] for b in inst.domain.box])
        hi = np.array([b[1] for b in inst.domain.box])
        for _ in range(40):
            p = ChartPoint(tuple(lo + (hi - lo) * rng.random(inst.dim)))
            if inst.domain.predicate(p):
                break
        else:
            raise AssertionError("no admissible point found")
        jet_d1 = inst.g.jet(p, 1).d1
        fd_d1 = fd_first_partials(inst.g, p)
        scale = np.maximum(1.0, np.abs(jet_d1))
        assert np.max(np.abs(jet_d1 - fd_d1) / scale) <= 1e-5


def test_mixed_partials_symmetric_on_catalog_fields():
    rng = np.random.default_rng(5)
    for inst in default_grid()[::4]:
        lo = np.array([b[0] for b in inst.domain.box])
        hi = np.array([b[1] for b in inst.domain.box])
        done = 0
        while done < 5:
            p = ChartPoint(tuple(lo + (hi - lo) * rng.random(inst.dim)))
            if not inst.domain.predicate(p):
                continue
            j = inst.g.jet(p, 3)
            scale = max(1.0, float(np.max(np.abs(j.d2))))
            assert np.max(np.abs(j.d2 - np.swapaxes(j.d2, -1, -2))) <= 1e-12 * scale
            d3 = j.d3
            for perm in ((0, 1, 2, 4, 3), (0, 1, 4, 3, 2)):
                assert np.max(np.abs(d3 - np.transpose(d3, (0, 1) + perm[2:]))) \
                    <= 1e-12 * max(1.0, float(np.max(np.abs(d3))))
            done += 1


def test_order_zero_agrees_with_higher_orders():
    ext = make_kink(0.5, -1, True)
    p = ChartPoint((0.2, 1.3))
    v0 = ext.g.jet(p, 0).value
    for order in (1, 2, 3):
        assert np.array_equal(v0, ext.g.jet(p, order).value)


def test_invalid_order_rejected():
    f = SmoothField(2, (0, 0), lambda xs: xs[0])
    with pytest.raises(ValueError):
        f.jet(ChartPoint((0.0, 0.0)), 4)
    with pytest.raises(ValueError):
        f.jet(ChartPoint((0.0, 0.0)), -1)


def test_singular_evaluation_signals():
    # overflow to inf -> non-finite components are reported as such
    f = SmoothField(2, (0, 0), lambda xs: xs[0] * 1e308)
    with pytest.raises(EvaluationError):
        f.jet(ChartPoint((10.0, 1.0)), 1)
    # exactly at a pole the arithmetic itself refuses
    g = SmoothField(2, (0, 0), lambda xs: xs[0].reciprocal())
    with pytest.raises(ZeroDivisionError):
        g.jet(ChartPoint((0.0, 1.0)), 1)


def test_jet_arithmetic_chain():
    # Nested composition: d/dx tanh(sqrt(x)) at x = 1.5 against the oracle.
    f = SmoothField(2, (0, 0), lambda xs: jm.tanh(jm.sqrt(xs[0])))

    def scalar(t):
        return math.tanh(math.sqrt(1.5 + t))

    j = f.jet(ChartPoint((1.5, 0.0)), 3)
    assert abs(j.d1[0] - richardson_d1(scalar, 0.0)) < 1e-10
    assert abs(j.d2[0, 0] - richardson_d2(scalar, 0.0)) < 1e-7
