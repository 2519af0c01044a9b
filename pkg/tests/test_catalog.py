"""Solution-family constructors: frozen values, invariants and error paths."""

import math

import numpy as np
import pytest

from kkforms import (
    ChartPoint,
    DerivedTwoForm,
    ScaledField,
    SmoothField,
    assemble_block_metric,
    canonical_blocks,
    curvature_bundle,
    default_grid,
    make_ckink,
    make_cpx_space_form,
    make_kink,
    make_kink2,
    make_kink_warped,
    make_kk_nullity_one,
    make_product_solution,
    make_real_space_form,
    manifest,
    sample_points,
)


def _internal_as_standalone(inst):
    """Re-read a block's internal metric as a field on its own n-dim chart."""
    blk = inst.block
    pad = [0.0] * blk.r
    return SmoothField(blk.n, (2, 0), lambda ys: blk.internal.builder(pad + list(ys)))


def test_real_space_form_values():
    flat = make_real_space_form(3, 1, 0.0)
    p = ChartPoint((0.4, -0.7, 0.2))
    assert np.array_equal(flat.g.jet(p, 0).value, np.diag([-1.0, 1.0, 1.0]))
    assert np.all(flat.A.jet(p, 0).value == 0.0)
    assert flat.expected["rank"] == 0 and flat.expected["nullity"] == 3

    inst = make_real_space_form(4, 0, 2.0)
    for q in sample_points(inst.domain, 3, seed=2):
        assert abs(curvature_bundle(inst.g, q).scalar - 24.0) < 1e-9

    # flipping k flips the scalar curvature
    plus = make_real_space_form(3, 1, 0.8)
    minus = make_real_space_form(3, 1, -0.8)
    q = ChartPoint((0.2, 0.1, -0.3))
    r_plus = curvature_bundle(plus.g, q).scalar
    r_minus = curvature_bundle(minus.g, q).scalar
    assert abs(r_plus - 4.8) < 1e-9 and abs(r_minus + 4.8) < 1e-9

    with pytest.raises(ValueError):
        make_real_space_form(2, 0, 1.0)
    with pytest.raises(ValueError):
        make_real_space_form(4, 5, 1.0)


def test_cpx_space_form_frozen_values():
    inst = make_cpx_space_form(2, 0, 1, 8.0)
    p0 = ChartPoint((0.0, 0.0, 0.0, 0.0))
    assert np.array_equal(inst.g.jet(p0, 0).value, np.eye(4))
    assert np.all(inst.A.jet(p0, 0).value == 0.0)
    assert inst.expected["k"] == -1.5
    assert inst.expected["rank"] == 4 and inst.expected["nullity"] == 0
    for q in sample_points(inst.domain, 3, seed=4, metric=inst.g):
        assert abs(curvature_bundle(inst.g, q).scalar - 12.0) < 1e-8

    with pytest.raises(ValueError):
        make_cpx_space_form(2, 0, 1, -8.0)   # sign(F^2) != sigma
    with pytest.raises(ValueError):
        make_cpx_space_form(2, 0, -1, 0.0)
    with pytest.raises(ValueError):
        make_cpx_space_form(1, 0, 1, 4.0)    # needs r_pairs >= 2


def test_product_solution_internal_curvature():
    inst = make_product_solution(1, 0, 1, 4.0, 2, 0)
    # internal factor: curvature -F^2/(4r) = -0.5, so its 2-d scalar is -1
    internal = _internal_as_standalone(inst)
    r_int = curvature_bundle(internal, ChartPoint((0.1, -0.2))).scalar
    assert abs(r_int + 1.0) < 1e-9
    assert inst.expected["k"] == -(2 + 2) * 4.0 / (8.0 * 2)

    with pytest.raises(ValueError) as err:
        make_product_solution(1, 0, 1, 4.0, 1, 0)
    assert "make_kk_nullity_one" in str(err.value)


def test_kink_closed_forms():
    ext = make_kink(2.0)
    p0 = ChartPoint((0.0, 0.0))
    assert ext.phi.jet(p0, 0).value == 0.0
    assert ext.A.jet(p0, 0).value[0] == 2.0
    p1 = ChartPoint((0.0, 1.0))
    assert abs(ext.phi.jet(p1, 0).value - 2.0 * math.tanh(1.0)) < 1e-15

    flipped = make_kink(2.0, -1, True)
    assert flipped.A.jet(p0, 0).value[0] == -2.0
    # the core is excluded from the sampling domain
    assert not ext.domain.contains(p0)

    with pytest.raises(ValueError):
        make_kink(-1.0)
    with pytest.raises(ValueError):
        make_kink(2.0, 0)


def test_kink2_assembly_and_warp():
    inst = make_kink2(2.0)
    x1 = 0.7
    g = inst.g.jet(ChartPoint((0.0, x1, 0.3)), 0).value
    want = 4.0 * 2.0 * math.tanh(math.sqrt(1.0) * x1) ** 2
    assert abs(g[2, 2] - want) < 1e-14
    assert g[0, 2] == g[1, 2] == 0.0
    assert abs(g[1, 1] - 1.0) < 1e-15
    # the internal line collapses at the core, which the domain excludes
    assert inst.block.warp.jet(ChartPoint((0.0, 0.0, 0.0)), 0).value == 0.0
    assert not inst.domain.contains(ChartPoint((0.0, 0.0, 0.0)))
    assert inst.eps_d == 1 and make_kink2(2.0, 1, False).eps_d == -1


def test_kink_warped_internal_curvature():
    inst = make_kink_warped(1.0, 2, 0)
    assert inst.expected["kappa_int"] == 2.0
    internal = _internal_as_standalone(inst)
    r_int = curvature_bundle(internal, ChartPoint((0.15, -0.1))).scalar
    assert abs(r_int - 4.0) < 1e-9  # n(n-1) * kappa_int

    flipped = make_kink_warped(1.0, 2, 0, -1)
    assert flipped.expected["kappa_int"] == -2.0
    with pytest.raises(ValueError) as err:
        make_kink_warped(1.0, 1, 0)
    assert "make_kink2" in str(err.value)


def test_kk_nullity_one_frozen_and_limits():
    inst = make_kk_nullity_one(1, 0, 1, 4.0, 1.0)
    assert inst.expected["k"] == -0.5
    assert inst.expected["l2"] == 1.0

    # l = 0: the twist vanishes and the metric is block diagonal
    prod = make_kk_nullity_one(1, 0, 1, 4.0, 0.0)
    p = ChartPoint((0.2, -0.1, 0.4))
    assert np.all(prod.block.a.jet(p, 0).value == 0.0)
    g = prod.g.jet(p, 0).value
    assert g[0, 2] == g[1, 2] == 0.0

    # lam = -1 with |F^2| = 2 r |l| flattens the external block exactly
    flat = make_kk_nullity_one(1, 0, 1, 4.0, 1.0, lam=-1)
    assert flat.expected["c_ext"] == 0.0
    ev = flat.block.ext.jet(p, 0).value
    assert np.array_equal(ev, np.eye(2))

    # entrywise continuity of the metric as l -> 0
    tiny = make_kk_nullity_one(1, 0, 1, 4.0, 1e-6)
    gap = np.abs(tiny.g.jet(p, 0).value - prod.g.jet(p, 0).value)
    assert np.max(gap) < 1e-4


def test_ckink_frozen_values_and_gap():
    inst = make_ckink(2.0, 0.5, 1)
    p0 = ChartPoint((0.0, 0.0, 0.0))
    assert abs(inst.external.phi.jet(ChartPoint((0.0, 0.0)), 0).value
               - math.sqrt(0.5)) < 1e-15
    assert inst.expected["k"] == 2.375
    assert inst.expected["l2"] == 5.0625
    assert not inst.domain.contains(p0)

    # tau = -1: the excluded band ends at atanh(sqrt(|L|/2K))/cK plus margin
    gapped = make_ckink(2.0, -1.0, -1)
    lo, hi = 0.5, 0.7
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if gapped.domain.contains(ChartPoint((0.0, mid, 0.0))):
            hi = mid
        else:
            lo = mid
    boundary = 0.5 * (lo + hi)
    assert abs(boundary - (0.5493061443340548 + 0.05)) < 1e-10

    for bad in [(-2.0, 0.5, 1), (2.0, 0.5, 0), (2.0, 0.0, 1),
                (2.0, -0.5, 1), (2.0, -4.0, -1)]:
        with pytest.raises(ValueError):
            make_ckink(*bad)


def test_two_form_invariants_across_grid():
    for inst in default_grid():
        F = DerivedTwoForm(inst.A)
        d = inst.dim
        neg_counts = set()
        for p in sample_points(inst.domain, 2, seed=31, metric=inst.g):
            fv = F.jet(p, 0).value
            assert np.array_equal(fv, -fv.T)
            sv = np.linalg.svd(fv, compute_uv=False)
            rank = int(np.sum(sv > 1e-8 * max(1.0, sv[0])))
            assert rank == inst.expected["rank"], inst.label
            assert rank + inst.expected["nullity"] == d
            assert rank % 2 == 0
            eigs = np.linalg.eigvalsh(inst.g.jet(p, 0).value)
            assert np.all(np.abs(eigs) > 1e-10)
            neg_counts.add(int(np.sum(eigs < 0.0)))
        assert len(neg_counts) == 1, inst.label


def test_assemble_block_metric_closed_form():
    dim = 3
    E = SmoothField(dim, (2, 0), lambda xs: [[2.0, 0.5], [0.5, 1.0]], shape=(2, 2))
    C = SmoothField(dim, (2, 0), lambda xs: [[3.0]], shape=(1, 1))
    w = SmoothField(dim, (0, 0), lambda xs: 2.0)
    p = ChartPoint((0.1, 0.2, 0.3))

    plain = assemble_block_metric(E, C, w)
    g = plain.assembled.jet(p, 0).value
    assert np.array_equal(g, np.array([[2.0, 0.5, 0.0], [0.5, 1.0, 0.0], [0.0, 0.0, 6.0]]))

    a = SmoothField(dim, (1, 1), lambda xs: [[0.5], [-1.0]], shape=(2, 1))
    twisted = assemble_block_metric(E, C, w, a)
    g = twisted.assembled.jet(p, 0).value
    av = np.array([[0.5], [-1.0]])
    h = 6.0 * np.eye(1)
    top = np.array([[2.0, 0.5], [0.5, 1.0]]) + av @ h @ av.T
    assert np.max(np.abs(g[:2, :2] - top)) < 1e-15
    assert np.max(np.abs(g[:2, 2:] - av @ h)) < 1e-15
    assert g[2, 2] == 6.0

    with pytest.raises(ValueError):
        assemble_block_metric(E, C, SmoothField(2, (0, 0), lambda xs: 1.0))
    with pytest.raises(ValueError):
        assemble_block_metric(E, C, w, SmoothField(dim, (1, 1),
                              lambda xs: [[0.0, 0.0]], shape=(1, 2)))


def test_manifest_and_default_grid_cover_all_families():
    man = manifest()
    assert len(man) == 7
    names = [row["family"] for row in man]
    grid = default_grid()
    assert len(grid) >= 20
    assert set(inst.family for inst in grid) == set(names)
    for row in man:
        assert row["parameters"] and "rank" in row and "nullity" in row
    for inst in grid:
        assert inst.label
        assert inst.eps_d in (1, -1)


def test_opposite_metric_scalar_curvature_flips():
    inst = make_real_space_form(3, 1, 0.8)
    p = ChartPoint((0.2, 0.1, -0.3))
    r = curvature_bundle(inst.g, p).scalar
    r_neg = curvature_bundle(ScaledField(inst.g, -1.0), p).scalar
    assert abs(r + r_neg) < 1e-9 * max(1.0, abs(r))


def test_canonical_blocks_relations():
    for r_pairs, s, sigma in [(1, 0, 1), (2, 1, 1), (2, 0, -1), (3, 2, -1)]:
        st = canonical_blocks(r_pairs, s, sigma)
        ident = np.eye(st.dim)
        assert np.array_equal(st.eps_mix @ st.eps_mix, -sigma * ident)
        assert np.array_equal(st.eps_low, -st.eps_low.T)
        st.check()
    with pytest.raises(ValueError):
        canonical_blocks(0, 0, 1)
    with pytest.raises(ValueError):
        canonical_blocks(2, 3, 1)
    with pytest.raises(ValueError):
        canonical_blocks(2, 0, 2)
