"""Closed-form solution families of the conformal-flatness system.

Every constructor returns fields built from elementary closed forms (no ODE
integration, no series truncation), together with the constants the solution
is expected to realize: the space-form parameter ``k``, the invariant ``F^2``
where it is constant, and the pointwise rank and nullity of the two-form.

Orientation convention
----------------------
Each family comes in two branches that differ by an overall sign of the
metric (for a solution ``(g, A)``, the pair ``(-g, A)`` solves the same
system with the roles of compact/noncompact model spaces exchanged).  An
instance stores the *actual* fields of its branch together with the flag
``eps_d`` (+1 or -1); the equations of motion are always evaluated on the
effective orientation ``(eps_d * g, A)`` returned by
:meth:`SolutionInstance.gj_fields`.  The expected constants (``k``, ``F^2``)
always describe that effective orientation; the stored metric is what enters
the one-dimensional extension, whose block signature is ``eps_d``.

Block solutions (products, warped products, and the nullity-one families)
are assembled from an external r-dimensional block, an internal space form
scaled by a warp factor, and an off-diagonal potential:

    g = [[ g_ext + a h a^T ,  a h ],
         [      h a^T      ,   h  ]],        h_ij = warp * c_ij.

The same block data drives the fundamental-form checks in
:mod:`kkforms.verify`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np

from . import jets as jm
from .tensors import ChartPoint, Domain, ScaledField, SmoothField

__all__ = [
    "CanonicalStructure",
    "BlockMetric",
    "ExternalGeometry",
    "SolutionInstance",
    "canonical_blocks",
    "assemble_block_metric",
    "make_real_space_form",
    "make_cpx_space_form",
    "make_product_solution",
    "make_kink",
    "make_kink2",
    "make_kink_warped",
    "make_kk_nullity_one",
    "make_ckink",
    "manifest",
    "default_grid",
    "FAMILIES",
]

# Margins used by the sampling domains.  Conformal factors are kept away
# from their zero set, kink profiles away from the flat core where the
# external metric degenerates, and c-kink charts away from the curvature
# singularity that bounds the excluded band.
CONFORMAL_MARGIN = 0.1
KINK_CORE_MARGIN = 0.05
CKINK_GAP_MARGIN = 0.05


def _sign(v) -> int:
    return 1 if v > 0 else -1


def _require(cond: bool, message: str) -> None:
    if not cond:
        raise ValueError(message)


# ---------------------------------------------------------------------------
# canonical pairing blocks
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class CanonicalStructure:
    """Canonical flat metric and pairing two-form in d = 2*r_pairs dimensions.

    ``eta`` is ``diag(sigma * eta_d, eta_d)`` where ``eta_d`` carries
    ``sig_index`` minus signs; ``eps_mix`` is the canonical complex (or
    bicomplex) structure with ``eps_mix @ eps_mix = -sigma * I``; ``eps_low``
    is its lowered form ``eps_mix @ eta``, which is antisymmetric.
    """

    r_pairs: int
    sig_index: int
    sigma: int
    eta: np.ndarray
    eps_mix: np.ndarray
    eps_low: np.ndarray

    @property
    def dim(self) -> int:
        return 2 * self.r_pairs

    def check(self, tol: float = 1e-14) -> None:
        ident = np.eye(self.dim)
        square = self.eps_mix @ self.eps_mix + self.sigma * ident
        pairing = self.eps_mix.T @ self.eta @ self.eps_mix - self.sigma * self.eta
        if np.abs(square).max() > tol or np.abs(pairing).max() > tol:
            raise AssertionError("canonical blocks violate their defining relations")


def canonical_blocks(r_pairs: int, sig_index: int, sigma: int) -> CanonicalStructure:
    """Canonical (eta, eps) pair for the paired-signature flat model.

    For ``sigma = +1`` the metric signature index is even (2 * sig_index);
    for ``sigma = -1`` it is neutral (r_pairs, r_pairs) for any sig_index.
    """
    _require(r_pairs >= 1, f"r_pairs must be >= 1, got {r_pairs}")
    _require(sigma in (1, -1), f"sigma must be +1 or -1, got {sigma}")
    _require(0 <= sig_index <= r_pairs,
             f"sig_index must lie in 0..{r_pairs}, got {sig_index}")
    eta_half = np.diag([-1.0] * sig_index + [1.0] * (r_pairs - sig_index))
    eta = np.block([
        [sigma * eta_half, np.zeros((r_pairs, r_pairs))],
        [np.zeros((r_pairs, r_pairs)), eta_half],
    ])
    eps_mix = np.block([
        [np.zeros((r_pairs, r_pairs)), eta_half],
        [-sigma * eta_half, np.zeros((r_pairs, r_pairs))],
    ])
    structure = CanonicalStructure(r_pairs, sig_index, sigma, eta, eps_mix, eps_mix @ eta)
    structure.check()
    return structure


# ---------------------------------------------------------------------------
# shared closed-form builders (operate on lists of coordinate jets)
# ---------------------------------------------------------------------------


def _space_form_entries(eta_diag: np.ndarray, kappa: float, ys):
    """Conformally flat space-form block g = eta / (1 + kappa/4 <y,y>)^2."""
    n = len(ys)
    quad = sum(eta_diag[i] * ys[i] * ys[i] for i in range(n))
    conf = (1.0 + 0.25 * kappa * quad) ** (-2)
    return [[conf * eta_diag[i] if i == j else 0.0 for j in range(n)] for i in range(n)]


def _paired_metric_entries(structure: CanonicalStructure, hol_curv: float, xs):
    """Paired space-form block with holomorphic sectional curvature hol_curv.

    g = Phi^-1 eta - (c/4) Phi^-2 [ (eta x)(eta x)^T + sigma (eps_low x)(eps_low x)^T ],
    Phi = 1 + (c/4) <x, eta x>.
    """
    d = structure.dim
    eta, eps_low, sigma = structure.eta, structure.eps_low, structure.sigma
    c4 = 0.25 * hol_curv
    etax = [sum(eta[m, n] * xs[n] for n in range(d) if eta[m, n] != 0.0) for m in range(d)]
    epsx = [sum(eps_low[m, n] * xs[n] for n in range(d) if eps_low[m, n] != 0.0) for m in range(d)]
    quad = sum(xs[m] * etax[m] for m in range(d))
    phi_inv = (1.0 + c4 * quad).reciprocal() if hasattr(quad, "reciprocal") else 1.0 / (1.0 + c4 * quad)
    phi_inv2 = phi_inv * phi_inv
    rows = []
    for m in range(d):
        row = []
        for n in range(d):
            entry = -c4 * phi_inv2 * (etax[m] * etax[n] + sigma * (epsx[m] * epsx[n]))
            if eta[m, n] != 0.0:
                entry = entry + phi_inv * eta[m, n]
            row.append(entry)
        rows.append(row)
    return rows


def _paired_potential_entries(structure: CanonicalStructure, hol_curv: float,
                              amplitude: float, xs):
    """Potential A_m = amplitude * Phi * eps_mix^n_m (g x)_n for the paired block."""
    d = structure.dim
    gm = _paired_metric_entries(structure, hol_curv, xs)
    gx = [sum(gm[m][n] * xs[n] for n in range(d)) for m in range(d)]
    quad = sum(structure.eta[m, m] * xs[m] * xs[m] for m in range(d))
    phi = 1.0 + 0.25 * hol_curv * quad
    eps_mix = structure.eps_mix
    out = []
    for m in range(d):
        acc = 0.0
        for n in range(d):
            if eps_mix[m, n] != 0.0:
                acc = acc + eps_mix[m, n] * gx[n]
        out.append(amplitude * phi * acc)
    return out


def _zero_potential(dim: int) -> SmoothField:
    return SmoothField(dim, (1, 0), lambda xs: [0.0] * dim, name="A=0")


# ---------------------------------------------------------------------------
# block metrics
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class BlockMetric:
    """Split form of a metric adapted to an integrable distribution.

    All component fields live on the full d = r + n chart.  ``ext`` is the
    external block ``g_ext(xi)`` (r x r, depending on the first r coordinates
    only), ``warp`` the scalar warp factor, ``internal`` the internal model
    metric ``c_ij``, and ``a`` the off-diagonal potential with components
    ``a[alpha, i]`` (external index first).  ``assembled`` is the resulting
    full metric

        g = [[ g_ext + a h a^T , a h ], [ h a^T , h ]],   h = warp * c.
    """

    r: int
    n: int
    ext: SmoothField
    warp: SmoothField
    internal: SmoothField
    a: SmoothField
    assembled: SmoothField
    potential: Optional[SmoothField] = None

    @property
    def dim(self) -> int:
        return self.r + self.n


def assemble_block_metric(ext: SmoothField, int_metric: SmoothField,
                          warp: SmoothField, a: Optional[SmoothField] = None,
                          potential: Optional[SmoothField] = None) -> BlockMetric:
    """Assemble a full metric from external/internal blocks, warp and twist.

    All inputs are fields on the full chart of dimension ``r + n``; ``ext``
    has shape (r, r), ``int_metric`` shape (n, n), ``warp`` is a scalar and
    ``a`` (optional, zero by default) has shape (r, n).  ``potential`` may
    attach the external gauge potential consumed by the fundamental-form
    rules.
    """
    r = ext.shape[0]
    _require(ext.shape == (r, r), f"external block must be square, got {ext.shape}")
    n = int_metric.shape[0]
    _require(int_metric.shape == (n, n), f"internal block must be square, got {int_metric.shape}")
    dim = r + n
    for f in (ext, int_metric, warp) + (() if a is None else (a,)):
        _require(f.dim == dim, f"block component {f.name or '<anonymous>'} lives on a chart of "
                               f"dimension {f.dim}, expected {dim}")
    _require(warp.shape == (), "warp factor must be a scalar field")
    if a is None:
        a = SmoothField(dim, (1, 1), lambda xs: [[0.0] * n for _ in range(r)],
                        name="a=0", shape=(r, n))
    _require(a.shape == (r, n), f"off-diagonal potential must have shape {(r, n)}, got {a.shape}")

    def builder(xs, _e=ext.builder, _c=int_metric.builder, _w=warp.builder, _a=a.builder):
        E, C, lam, av = _e(xs), _c(xs), _w(xs), _a(xs)
        h = [[lam * C[i][j] for j in range(n)] for i in range(n)]
        ah = [[sum(av[al][k] * h[k][j] for k in range(n)) for j in range(n)] for al in range(r)]
        rows = []
        for al in range(r):
            top = [E[al][be] + sum(ah[al][j] * av[be][j] for j in range(n)) for be in range(r)]
            rows.append(top + ah[al])
        for i in range(n):
            rows.append([ah[al][i] for al in range(r)] + h[i])
        return rows

    assembled = SmoothField(dim, (2, 0), builder, name="block metric")
    return BlockMetric(r, n, ext, warp, int_metric, a, assembled, potential)


# ---------------------------------------------------------------------------
# solution instances
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class ExternalGeometry:
    """Two-dimensional external geometry of a kink-type solution.

    Holds the metric, potential and scalar profile on the canonical
    orientation (the one in which the reduced curvature/profile system is
    stated); ``warp`` is the warp factor lambda(xi) for families that extend
    the kink by internal directions, and is None for the bare kink.
    Iterating yields ``(g, A, phi)``.
    """

    g: SmoothField
    A: SmoothField
    phi: SmoothField
    domain: Domain
    params: Dict[str, float]
    warp: Optional[SmoothField] = None

    def __iter__(self):
        return iter((self.g, self.A, self.phi))


@dataclass(frozen=True, eq=False)
class SolutionInstance:
    """A single closed-form solution with its verification metadata.

    ``expected`` collects the constants the effective orientation must
    realize: ``k`` (space-form parameter), ``F2`` (None when the invariant
    is non-constant), ``rank`` and ``nullity`` of the two-form, and for the
    charged kink also ``l2``.  ``block`` carries the split form for families
    with an integrable internal distribution, ``external`` the canonical 2-d
    kink data where applicable.
    """

    family: str
    params: Dict[str, float]
    g: SmoothField
    A: SmoothField
    domain: Domain
    expected: Dict[str, Optional[float]]
    eps_d: int = 1
    label: str = ""
    block: Optional[BlockMetric] = None
    external: Optional[ExternalGeometry] = None
    structure: Optional[CanonicalStructure] = None

    @property
    def dim(self) -> int:
        return self.g.dim

    def gj_fields(self) -> Tuple[SmoothField, SmoothField]:
        """Fields in the effective orientation on which the equations hold."""
        if self.eps_d == 1:
            return self.g, self.A
        return ScaledField(self.g, -1.0, name=f"-({self.g.name})"), self.A


def _box_domain(dim: int, halves, predicate=None, margin: float = CONFORMAL_MARGIN) -> Domain:
    box = tuple((-h, h) for h in halves)
    if predicate is None:
        predicate = lambda p: True
    return Domain(predicate=predicate, margin=margin, box=box)


def _conformal_half(curv: float) -> float:
    return 0.9 / math.sqrt(1.0 + abs(curv))


# ---------------------------------------------------------------------------
# family constructors
# ---------------------------------------------------------------------------


def make_real_space_form(d: int, s: int, k: float, *, eps_d: int = 1) -> SolutionInstance:
    """Real space form of curvature k with vanishing potential.

    ``s`` is the signature index of the flat model metric.  The two-form
    vanishes identically (rank 0, nullity d).
    """
    _require(d >= 3, f"dimension must be >= 3, got {d}")
    _require(0 <= s <= d, f"signature index must lie in 0..{d}, got {s}")
    _require(eps_d in (1, -1), f"eps_d must be +1 or -1, got {eps_d}")
    eta_diag = np.array([-1.0] * s + [1.0] * (d - s))
    k = float(k)

    def gb(xs, _eta=eta_diag, _k=k, _e=float(eps_d)):
        rows = _space_form_entries(_eta, _k, xs)
        if _e != 1.0:
            rows = [[_e * v for v in row] for row in rows]
        return rows

    g = SmoothField(d, (2, 0), gb, name=f"real space form k={k}")
    half = _conformal_half(k)

    def pred(p: ChartPoint, _eta=eta_diag, _k=k) -> bool:
        x = p.array()
        return abs(1.0 + 0.25 * _k * float(x @ (_eta * x))) >= CONFORMAL_MARGIN

    inst = SolutionInstance(
        family="real_space_form",
        params={"d": d, "s": s, "k": k, "eps_d": eps_d},
        g=g,
        A=_zero_potential(d),
        domain=_box_domain(d, [half] * d, pred),
        expected={"k": k, "F2": 0.0, "rank": 0, "nullity": d},
        eps_d=eps_d,
        label=f"real space form, d={d}, index {s}, k={k:g}",
    )
    return inst


def _paired_fields(structure: CanonicalStructure, hol_curv: float, fsq: float,
                   potential_sign: int, eps_d: int, dim: Optional[int] = None,
                   name: str = "") -> Tuple[SmoothField, SmoothField]:
    """Stored (g, A) fields of a paired space-form block.

    ``dim`` allows the fields to live on a larger chart (block families);
    only the first 2*r_pairs coordinates enter.  The stored metric carries
    the branch sign eps_d; the potential does not.
    """
    d = structure.dim
    full = d if dim is None else dim
    amp = 0.5 * math.sqrt(abs(fsq) / d) * potential_sign

    def gb(xs, _s=structure, _c=hol_curv, _e=float(eps_d)):
        rows = _paired_metric_entries(_s, _c, xs[:d])
        if _e != 1.0:
            rows = [[_e * v for v in row] for row in rows]
        return rows

    def ab(xs, _s=structure, _c=hol_curv, _a=amp):
        return _paired_potential_entries(_s, _c, _a, xs[:d])

    g = SmoothField(full, (2, 0), gb, name=name or "paired block",
                    shape=(d, d) if dim is not None else None)
    A = SmoothField(full, (1, 0), ab, name=f"A({name})",
                    shape=(d,) if dim is not None else None)
    return g, A


def make_cpx_space_form(r_pairs: int, sig_index: int, sigma: int, fsq: float, *,
                        eps_d: int = 1, potential_sign: int = 1) -> SolutionInstance:
    """Maximal-rank solution on a paired space form of dimension 2*r_pairs.

    ``sigma = +1`` selects the complex-type pairing (even signature index),
    ``sigma = -1`` the split pairing (neutral signature).  The sign of the
    constant invariant ``fsq`` must equal ``sigma``; the holomorphic
    sectional curvature is fsq / r_pairs and k = -(d+2) fsq / (8 d).
    """
    _require(sigma in (1, -1), f"sigma must be +1 or -1, got {sigma}")
    _require(fsq != 0.0, "maximal-rank solutions need a nonzero invariant F^2")
    _require(_sign(fsq) == sigma,
             f"sign(F^2) must equal sigma: got F^2={fsq:g} with sigma={sigma:+d}")
    _require(eps_d in (1, -1), f"eps_d must be +1 or -1, got {eps_d}")
    _require(potential_sign in (1, -1), f"potential_sign must be +1 or -1, got {potential_sign}")
    _require(r_pairs >= 2, f"a standalone paired solution needs r_pairs >= 2 "
                           f"(dimension >= 4), got r_pairs={r_pairs}")
    structure = canonical_blocks(r_pairs, sig_index, sigma)
    d = structure.dim
    fsq = float(fsq)
    hol_curv = fsq / d
    g, A = _paired_fields(structure, hol_curv, fsq, potential_sign, eps_d,
                          name=f"paired space form F2={fsq:g}")
    half = _conformal_half(hol_curv)

    def pred(p: ChartPoint, _s=structure, _c=hol_curv) -> bool:
        x = p.array()
        return abs(1.0 + 0.25 * _c * float(x @ _s.eta @ x)) >= CONFORMAL_MARGIN

    k = -(d + 2) * fsq / (8.0 * d)
    branch = {(1, 1): "definite pairing, compact-type",
              (1, -1): "definite pairing, noncompact-type",
              (-1, 1): "split pairing, plus branch",
              (-1, -1): "split pairing, minus branch"}[(sigma, eps_d)]
    return SolutionInstance(
        family="cpx_space_form",
        params={"r_pairs": r_pairs, "sig_index": sig_index, "sigma": sigma,
                "F2": fsq, "eps_d": eps_d, "potential_sign": potential_sign},
        g=g,
        A=A,
        domain=_box_domain(d, [half] * d, pred),
        expected={"k": k, "F2": fsq, "rank": d, "nullity": 0, "sigma": sigma},
        eps_d=eps_d,
        label=f"paired space form ({branch}), d={d}, F^2={fsq:g}",
        structure=structure,
    )


def make_product_solution(r_pairs: int, s_ext: int, sigma: int, fsq: float,
                          n: int, s_int: int, *, eps_d: int = 1,
                          potential_sign: int = 1) -> SolutionInstance:
    """Product of a paired space form with a real space form (nullity n > 1).

    The internal factor has curvature -fsq / (4 r) with r = 2 * r_pairs; the
    potential lives purely on the external factor and k = -(r+2) fsq / (8 r).
    """
    _require(n > 1, "product solutions need an internal dimension n > 1; "
                    "use make_kk_nullity_one for a one-dimensional internal factor")
    _require(sigma in (1, -1), f"sigma must be +1 or -1, got {sigma}")
    _require(fsq != 0.0 and _sign(fsq) == sigma,
             f"sign(F^2) must equal sigma and be nonzero: F^2={fsq:g}, sigma={sigma:+d}")
    _require(0 <= s_int <= n, f"internal signature index must lie in 0..{n}, got {s_int}")
    _require(eps_d in (1, -1), f"eps_d must be +1 or -1, got {eps_d}")
    structure = canonical_blocks(r_pairs, s_ext, sigma)
    r = structure.dim
    d = r + n
    fsq = float(fsq)
    hol_curv = fsq / r
    kappa_int = -fsq / (4.0 * r)
    eta_int = np.array([-1.0] * s_int + [1.0] * (n - s_int))

    ext_g, ext_A = _paired_fields(structure, hol_curv, fsq, potential_sign, eps_d,
                                  dim=d, name="external paired block")

    def cb(xs, _eta=eta_int, _kap=kappa_int):
        return _space_form_entries(_eta, _kap, xs[r:])

    internal = SmoothField(d, (2, 0), cb, name="internal space form", shape=(n, n))
    warp = SmoothField(d, (0, 0), lambda xs, _e=float(eps_d): _e, name="warp")

    def ab(xs, _b=ext_A.builder, _n=n):
        return list(_b(xs)) + [0.0] * _n

    A = SmoothField(d, (1, 0), ab, name="product potential")
    blk = assemble_block_metric(ext_g, internal, warp, potential=A)
    half_ext = _conformal_half(hol_curv)
    half_int = _conformal_half(kappa_int)

    def pred(p: ChartPoint, _s=structure, _c=hol_curv, _eta=eta_int, _kap=kappa_int) -> bool:
        x = p.array()
        xe, xi = x[:r], x[r:]
        phi_e = 1.0 + 0.25 * _c * float(xe @ _s.eta @ xe)
        phi_i = 1.0 + 0.25 * _kap * float(xi @ (_eta * xi))
        return abs(phi_e) >= CONFORMAL_MARGIN and abs(phi_i) >= CONFORMAL_MARGIN

    k = -(r + 2) * fsq / (8.0 * r)
    return SolutionInstance(
        family="product",
        params={"r_pairs": r_pairs, "s_ext": s_ext, "sigma": sigma, "F2": fsq,
                "n": n, "s_int": s_int, "eps_d": eps_d, "potential_sign": potential_sign},
        g=blk.assembled,
        A=A,
        domain=_box_domain(d, [half_ext] * r + [half_int] * n, pred),
        expected={"k": k, "F2": fsq, "rank": r, "nullity": n, "sigma": sigma},
        eps_d=eps_d,
        label=f"paired block x real space form, d={d}, F^2={fsq:g}",
        block=blk,
        structure=structure,
    )


# -- kink-type families -----------------------------------------------------


def _kink_profile_builders(k: float, profile_sign: int):
    """Closed forms of the 2-d kink: metric diag(-k^2 sech^4 u, 1) with
    u = sqrt(k/2) xi^1 (the kink runs along the second coordinate),
    potential A = (profile_sign * k sech^2 u, 0), profile
    phi = profile_sign * sqrt(2k) tanh u."""
    c1 = math.sqrt(0.5 * k)

    def g00(x1, _k=k, _c=c1):
        s = jm.sech(_c * x1)
        s2 = s * s
        return -(_k * _k) * s2 * s2

    def a0(x1, _k=k, _c=c1, _p=float(profile_sign)):
        s = jm.sech(_c * x1)
        return _p * _k * s * s

    def phi(x1, _k=k, _c=c1, _p=float(profile_sign)):
        return _p * math.sqrt(2.0 * _k) * jm.tanh(_c * x1)

    return g00, a0, phi


def make_kink(k: float, profile_sign: int = 1, anti: bool = True) -> ExternalGeometry:
    """Two-dimensional gravitational kink (metric, potential, scalar profile).

    The returned fields are those of the requested branch: for
    ``anti=True`` the metric is ``diag(-k^2 sech^4 u, 1)`` and the scalar
    curvature approaches ``-4k`` away from the core; for ``anti=False`` the
    overall sign of the metric is flipped and the asymptotic curvature is
    ``+4k``.  The reduced curvature/profile system holds on the
    ``anti=True`` orientation.
    """
    _require(k > 0.0, f"kink parameter k must be positive, got {k:g}")
    _require(profile_sign in (1, -1), f"profile_sign must be +1 or -1, got {profile_sign}")
    k = float(k)
    sgn = 1.0 if anti else -1.0
    g00, a0, phib = _kink_profile_builders(k, profile_sign)

    g = SmoothField(2, (2, 0),
                    lambda xs, _s=sgn: [[_s * g00(xs[1]), 0.0], [0.0, _s * 1.0]],
                    name="kink metric")
    A = SmoothField(2, (1, 0), lambda xs: [a0(xs[1]), 0.0], name="kink potential")
    phi = SmoothField(2, (0, 0), lambda xs: phib(xs[1]), name="kink profile")
    c1 = math.sqrt(0.5 * k)
    x1_max = 3.0 / c1
    x1_min = math.atanh(KINK_CORE_MARGIN) / c1

    def pred(p: ChartPoint, _lo=x1_min) -> bool:
        return abs(p.coords[1]) >= _lo

    dom = Domain(predicate=pred, margin=KINK_CORE_MARGIN,
                 box=((-1.0, 1.0), (-x1_max, x1_max)))
    return ExternalGeometry(g, A, phi, dom,
                            params={"k": k, "profile_sign": profile_sign, "anti": anti})


def _kink_domain(k: float, d: int, internal_halves) -> Domain:
    c1 = math.sqrt(0.5 * k)
    x1_max = 3.0 / c1
    x1_min = math.atanh(KINK_CORE_MARGIN) / c1

    def pred(p: ChartPoint, _lo=x1_min) -> bool:
        return abs(p.coords[1]) >= _lo

    box = ((-1.0, 1.0), (-x1_max, x1_max)) + tuple((-h, h) for h in internal_halves)
    assert len(box) == d
    return Domain(predicate=pred, margin=KINK_CORE_MARGIN, box=box)


def make_kink2(k: float, profile_sign: int = 1, anti: bool = True, *,
               warp_sign: int = 1) -> SolutionInstance:
    """Kink extended by one flat internal direction (d = 3, nullity 1).

    The internal block is ``warp_sign * 4k tanh^2 u dy^2``; both warp signs
    close the equations.  ``anti=False`` flips the external block only (the
    flip of the internal block is equivalent to relabeling the warp sign).
    """
    _require(k > 0.0, f"kink parameter k must be positive, got {k:g}")
    _require(warp_sign in (1, -1), f"warp_sign must be +1 or -1, got {warp_sign}")
    _require(profile_sign in (1, -1), f"profile_sign must be +1 or -1, got {profile_sign}")
    k = float(k)
    d = 3
    ext_sign = 1.0 if anti else -1.0
    g00, a0, phib = _kink_profile_builders(k, profile_sign)
    c1 = math.sqrt(0.5 * k)

    ext = SmoothField(d, (2, 0),
                      lambda xs, _s=ext_sign: [[_s * g00(xs[1]), 0.0], [0.0, _s * 1.0]],
                      name="kink external block", shape=(2, 2))
    internal = SmoothField(d, (2, 0), lambda xs: [[1.0]], name="flat internal", shape=(1, 1))

    def wb(xs, _k=k, _c=c1, _w=float(warp_sign)):
        t = jm.tanh(_c * xs[1])
        return _w * 4.0 * _k * t * t

    warp = SmoothField(d, (0, 0), wb, name="kink warp")
    A = SmoothField(d, (1, 0), lambda xs: [a0(xs[1]), 0.0, 0.0], name="kink potential")
    blk = assemble_block_metric(ext, internal, warp, potential=A)

    canon = make_kink(k, profile_sign, True)
    external = ExternalGeometry(canon.g, canon.A, canon.phi, canon.domain,
                                params={"k": k, "profile_sign": profile_sign,
                                        "anti": anti, "warp_sign": warp_sign})
    return SolutionInstance(
        family="kink2",
        params={"k": k, "profile_sign": profile_sign, "anti": anti,
                "warp_sign": warp_sign, "eps_d": 1 if anti else -1},
        g=blk.assembled,
        A=A,
        domain=_kink_domain(k, d, [1.0]),
        expected={"k": k, "F2": None, "rank": 2, "nullity": 1, "sigma": -1},
        eps_d=1 if anti else -1,
        label=f"kink with flat internal line, k={k:g}",
        block=blk,
        external=external,
    )


def make_kink_warped(k: float, n: int, s_int: int, warp_sign: int = 1,
                     anti: bool = True, *,
                     profile_sign: int = 1) -> SolutionInstance:
    """Kink warped over an internal space form of dimension n > 1.

    The warp factor is ``warp_sign * 4k tanh^2 u`` and the internal model
    curvature is ``2 k^2 warp_sign`` on the ``anti=True`` branch (flipped
    with ``anti``); the potential is purely external and the nullity is n.
    """
    _require(k > 0.0, f"kink parameter k must be positive, got {k:g}")
    _require(n > 1, "warped kinks need an internal dimension n > 1; use make_kink2 for n = 1")
    _require(0 <= s_int <= n, f"internal signature index must lie in 0..{n}, got {s_int}")
    _require(warp_sign in (1, -1), f"warp_sign must be +1 or -1, got {warp_sign}")
    _require(profile_sign in (1, -1), f"profile_sign must be +1 or -1, got {profile_sign}")
    k = float(k)
    d = 2 + n
    ext_sign = 1.0 if anti else -1.0
    kappa_int = 2.0 * k * k * warp_sign * (1.0 if anti else -1.0)
    eta_int = np.array([-1.0] * s_int + [1.0] * (n - s_int))
    g00, a0, phib = _kink_profile_builders(k, profile_sign)
    c1 = math.sqrt(0.5 * k)

    ext = SmoothField(d, (2, 0),
                      lambda xs, _s=ext_sign: [[_s * g00(xs[1]), 0.0], [0.0, _s * 1.0]],
                      name="kink external block", shape=(2, 2))

    def cb(xs, _eta=eta_int, _kap=kappa_int):
        return _space_form_entries(_eta, _kap, xs[2:])

    internal = SmoothField(d, (2, 0), cb, name="internal space form", shape=(n, n))

    def wb(xs, _k=k, _c=c1, _w=float(warp_sign)):
        t = jm.tanh(_c * xs[1])
        return _w * 4.0 * _k * t * t

    warp = SmoothField(d, (0, 0), wb, name="kink warp")
    A = SmoothField(d, (1, 0), lambda xs, _n=n: [a0(xs[1]), 0.0] + [0.0] * _n,
                    name="kink potential")
    blk = assemble_block_metric(ext, internal, warp, potential=A)

    half_int = _conformal_half(kappa_int)
    base = _kink_domain(k, d, [half_int] * n)

    def pred(p: ChartPoint, _base=base.predicate, _eta=eta_int, _kap=kappa_int) -> bool:
        if not _base(p):
            return False
        y = p.array()[2:]
        return abs(1.0 + 0.25 * _kap * float(y @ (_eta * y))) >= CONFORMAL_MARGIN

    dom = Domain(predicate=pred, margin=base.margin, box=base.box)
    canon = make_kink(k, profile_sign, True)
    external = ExternalGeometry(canon.g, canon.A, canon.phi, canon.domain,
                                params={"k": k, "profile_sign": profile_sign,
                                        "anti": anti, "warp_sign": warp_sign})
    return SolutionInstance(
        family="kink_warped",
        params={"k": k, "n": n, "s_int": s_int, "warp_sign": warp_sign,
                "anti": anti, "profile_sign": profile_sign, "eps_d": 1 if anti else -1},
        g=blk.assembled,
        A=A,
        domain=dom,
        expected={"k": k, "F2": None, "rank": 2, "nullity": n, "sigma": -1,
                  "kappa_int": kappa_int},
        eps_d=1 if anti else -1,
        label=f"kink warped over a space form, d={d}, k={k:g}",
        block=blk,
        external=external,
    )


def make_kk_nullity_one(r_pairs: int, sig_index: int, sigma: int, fsq: float,
                        l: float, *, lam: int = 1, eps_d: int = 1,
                        potential_sign: int = 1) -> SolutionInstance:
    """Nullity-one extension of a paired block by a twisted line (d = 2*r_pairs + 1).

    The external block is a paired space form whose holomorphic sectional
    curvature ``fsq/r + 4 r l^2 / (lam fsq)`` differs from the product value;
    the line is glued with off-diagonal potential ``a = (2 l r / |fsq|) A``
    and constant internal metric ``h = eps_d * lam``.  ``lam`` is the sign of
    the internal direction in the effective orientation.  ``l = 0`` gives the
    untwisted product with a line; ``lam = -1`` with ``|fsq| = 2 r |l|``
    makes the external block flat.
    """
    _require(sigma in (1, -1), f"sigma must be +1 or -1, got {sigma}")
    _require(fsq != 0.0 and _sign(fsq) == sigma,
             f"sign(F^2) must equal sigma and be nonzero: F^2={fsq:g}, sigma={sigma:+d}")
    _require(lam in (1, -1), f"lam must be +1 or -1, got {lam}")
    _require(eps_d in (1, -1), f"eps_d must be +1 or -1, got {eps_d}")
    _require(potential_sign in (1, -1), f"potential_sign must be +1 or -1, got {potential_sign}")
    structure = canonical_blocks(r_pairs, sig_index, sigma)
    r = structure.dim
    d = r + 1
    fsq, l = float(fsq), float(l)
    c_ext = fsq / r + 4.0 * r * l * l / (lam * fsq)
    k = r * l * l / (lam * fsq) - (r + 2) * fsq / (8.0 * r)

    ext_g, ext_A = _paired_fields(structure, c_ext, fsq, potential_sign, eps_d,
                                  dim=d, name="twisted external block")
    internal = SmoothField(d, (2, 0), lambda xs: [[1.0]], name="internal line", shape=(1, 1))
    warp = SmoothField(d, (0, 0), lambda xs, _v=float(eps_d * lam): _v, name="line warp")
    coef = 2.0 * l * r / abs(fsq)

    def ab_block(xs, _b=ext_A.builder, _c=coef, _r=r):
        av = _b(xs)
        return [[_c * av[al]] for al in range(_r)]

    a_field = SmoothField(d, (1, 1), ab_block, name="line potential", shape=(r, 1))

    def ab(xs, _b=ext_A.builder):
        return list(_b(xs)) + [0.0]

    A = SmoothField(d, (1, 0), ab, name="potential")
    blk = assemble_block_metric(ext_g, internal, warp, a_field, potential=A)
    half = _conformal_half(c_ext)

    def pred(p: ChartPoint, _s=structure, _c=c_ext, _r=r) -> bool:
        x = p.array()[:_r]
        return abs(1.0 + 0.25 * _c * float(x @ _s.eta @ x)) >= CONFORMAL_MARGIN

    return SolutionInstance(
        family="kk_nullity_one",
        params={"r_pairs": r_pairs, "sig_index": sig_index, "sigma": sigma,
                "F2": fsq, "l": l, "lam": lam, "eps_d": eps_d,
                "potential_sign": potential_sign},
        g=blk.assembled,
        A=A,
        domain=_box_domain(d, [half] * r + [1.0], pred),
        expected={"k": k, "F2": fsq, "rank": r, "nullity": 1, "sigma": sigma,
                  "c_ext": c_ext, "l2": l * l},
        eps_d=eps_d,
        label=(f"paired block twisted over a line, d={d}, F^2={fsq:g}, l={l:g}"
               + ("" if lam == 1 else f", lam={lam:g}")),
        block=blk,
        structure=structure,
    )


def make_ckink(K: float, L: float, tau: int, profile_sign: int = 1,
               anti: bool = True) -> SolutionInstance:
    """Charged kink over a twisted line (d = 3, nullity 1).

    Closed forms with u = sqrt(K/2) xi^1, P = 2K tanh^2 u + L:
    external block diag(-2 K^3 sech^4 u tanh^2 u / P, 1), profile
    phi = profile_sign * sqrt(P), twist a = +- K sqrt(2 tau L) /
    (2(2K+L) cosh^2 u - 4K), internal metric tau-signed; requires tau*L > 0,
    and for tau = -1 also |L| < 2K (the excluded band around the core must
    not swallow the chart).  Realizes k = K + 3L/4 and l^2 = 2 tau (K+L/2)^2 L.
    """
    _require(K > 0.0, f"kink parameter K must be positive, got {K:g}")
    _require(tau in (1, -1), f"tau must be +1 or -1, got {tau}")
    _require(profile_sign in (1, -1), f"profile_sign must be +1 or -1, got {profile_sign}")
    _require(L != 0.0, "the charged kink needs L != 0; use make_kink2 for the neutral limit")
    _require(tau * L > 0.0,
             f"tau * L must be positive (internal sign tau={tau:+d} against L={L:g})")
    if tau == -1:
        _require(abs(L) < 2.0 * K,
                 f"for tau=-1 the excluded band |tanh u| <= sqrt(|L|/2K) must stay inside "
                 f"the chart: need |L| < 2K, got |L|={abs(L):g} >= 2K={2*K:g}")
    K, L = float(K), float(L)
    d = 3
    es = 1.0 if anti else -1.0
    cK = math.sqrt(0.5 * K)

    def core(x1, _K=K, _L=L, _c=cK):
        u = _c * x1
        t = jm.tanh(u)
        s = jm.sech(u)
        t2 = t * t
        P = 2.0 * _K * t2 + _L
        return t, s, t2, P

    def g00b(xs, _K=K):
        t, s, t2, P = core(xs[1])
        s2 = s * s
        return -2.0 * _K ** 3 * s2 * s2 * t2 / P

    def a0b(xs, _K=K, _L=L, _tau=tau, _p=float(profile_sign)):
        t, s, t2, P = core(xs[1])
        ch2 = (s * s).reciprocal()
        den = 2.0 * (2.0 * _K + _L) * ch2 - 4.0 * _K
        num = _p * _K * math.sqrt(2.0 * _tau * _L)
        return num * den.reciprocal()

    def phib(xs, _p=float(profile_sign)):
        t, s, t2, P = core(xs[1])
        return _p * jm.sqrt(P)

    def lamb(xs, _tau=tau, _e=es):
        t, s, t2, P = core(xs[1])
        return -_e * 2.0 * _tau * P

    def Ab(xs, _K=K, _p=float(profile_sign)):
        t, s, t2, P = core(xs[1])
        return [_p * _K * s * s, 0.0, 0.0]

    ext = SmoothField(d, (2, 0),
                      lambda xs, _e=es: [[_e * g00b(xs), 0.0], [0.0, _e * 1.0]],
                      name="charged kink external block", shape=(2, 2))
    internal = SmoothField(d, (2, 0), lambda xs: [[1.0]], name="internal line", shape=(1, 1))
    warp = SmoothField(d, (0, 0), lamb, name="charged kink warp")
    a_field = SmoothField(d, (1, 1), lambda xs: [[a0b(xs)], [0.0]],
                          name="line potential", shape=(2, 1))
    A = SmoothField(d, (1, 0), Ab, name="charged kink potential")
    blk = assemble_block_metric(ext, internal, warp, a_field, potential=A)

    if tau == 1:
        x1_min = math.atanh(KINK_CORE_MARGIN) / cK
        x1_max = 3.0 / cK
    else:
        gap_u = math.atanh(math.sqrt(abs(L) / (2.0 * K)))
        x1_min = gap_u / cK + CKINK_GAP_MARGIN
        x1_max = max(3.0, gap_u + 1.0) / cK + CKINK_GAP_MARGIN

    def pred(p: ChartPoint, _lo=x1_min) -> bool:
        return abs(p.coords[1]) >= _lo

    dom = Domain(predicate=pred,
                 margin=CKINK_GAP_MARGIN if tau == -1 else KINK_CORE_MARGIN,
                 box=((-1.0, 1.0), (-x1_max, x1_max), (-1.0, 1.0)))

    k = K + 0.75 * L
    l2 = 2.0 * tau * (K + 0.5 * L) ** 2 * L
    phi2 = SmoothField(2, (0, 0), lambda xs: phib(xs), name="charged kink profile")
    g2 = SmoothField(2, (2, 0), lambda xs: [[g00b(xs), 0.0], [0.0, 1.0]],
                     name="charged kink external metric")
    A2 = SmoothField(2, (1, 0), lambda xs: Ab(xs)[:2], name="charged kink external potential")
    lam2 = SmoothField(2, (0, 0), lambda xs, _tau=tau: -2.0 * _tau * (
        2.0 * K * jm.tanh(cK * xs[1]) ** 2 + L), name="effective warp")
    dom2 = Domain(predicate=pred, margin=dom.margin, box=dom.box[:2])
    external = ExternalGeometry(g2, A2, phi2, dom2,
                                params={"K": K, "L": L, "tau": tau,
                                        "profile_sign": profile_sign, "anti": anti,
                                        "k": k, "l2": l2},
                                warp=lam2)
    return SolutionInstance(
        family="ckink3",
        params={"K": K, "L": L, "tau": tau, "profile_sign": profile_sign,
                "anti": anti, "eps_d": 1 if anti else -1},
        g=blk.assembled,
        A=A,
        domain=dom,
        expected={"k": k, "F2": None, "rank": 2, "nullity": 1, "sigma": -1,
                  "l2": l2, "tau": tau},
        eps_d=1 if anti else -1,
        label=f"charged kink over a twisted line, K={K:g}, L={L:g}, tau={tau:+d}",
        block=blk,
        external=external,
    )


# ---------------------------------------------------------------------------
# manifest and default grid
# ---------------------------------------------------------------------------


FAMILIES = ("real_space_form", "cpx_space_form", "product", "kink2",
            "kink_warped", "kk_nullity_one", "ckink3")


def manifest() -> List[Dict[str, object]]:
    """Machine-readable listing of the solution families."""
    return [
        {
            "family": "real_space_form",
            "dimension": "d >= 3",
            "parameters": {"d": "dimension (int >= 3)",
                           "s": "signature index (0..d)",
                           "k": "space-form curvature (any real)",
                           "eps_d": "+1 or -1, orientation branch"},
            "rank": 0,
            "nullity": "d",
            "notes": "conformally flat space form, vanishing potential",
        },
        {
            "family": "cpx_space_form",
            "dimension": "d = 2*r_pairs >= 4",
            "parameters": {"r_pairs": "number of paired directions (int >= 2)",
                           "sig_index": "minus signs per half-block (0..r_pairs)",
                           "sigma": "+1 definite pairing, -1 split pairing",
                           "fsq": "constant invariant, sign(F2) = sigma",
                           "eps_d": "+1 or -1, orientation branch",
                           "potential_sign": "+1 or -1"},
            "rank": "d",
            "nullity": 0,
            "notes": "maximal-rank paired space form; k = -(d+2) F2 / (8d)",
        },
        {
            "family": "product",
            "dimension": "d = 2*r_pairs + n, n > 1",
            "parameters": {"r_pairs": "external paired directions (int >= 1)",
                           "s_ext": "external minus signs per half-block",
                           "sigma": "+1 or -1 pairing type",
                           "fsq": "constant invariant, sign(F2) = sigma",
                           "n": "internal dimension (int > 1)",
                           "s_int": "internal signature index",
                           "eps_d": "+1 or -1, orientation branch",
                           "potential_sign": "+1 or -1"},
            "rank": "2*r_pairs",
            "nullity": "n",
            "notes": "paired block times a real space form of curvature -F2/(4r)",
        },
        {
            "family": "kink2",
            "dimension": "d = 3",
            "parameters": {"k": "kink parameter (> 0)",
                           "profile_sign": "+1 or -1 scalar profile sign",
                           "anti": "True for the branch asymptotic to curvature -4k",
                           "warp_sign": "+1 or -1 internal line sign"},
            "rank": 2,
            "nullity": 1,
            "notes": "gravitational kink with one flat internal direction; "
                     "non-constant invariant F2 = -2 phi^2",
        },
        {
            "family": "kink_warped",
            "dimension": "d = 2 + n, n > 1",
            "parameters": {"k": "kink parameter (> 0)",
                           "n": "internal dimension (int > 1)",
                           "s_int": "internal signature index",
                           "warp_sign": "+1 or -1",
                           "anti": "True for the branch asymptotic to curvature -4k",
                           "profile_sign": "+1 or -1"},
            "rank": 2,
            "nullity": "n",
            "notes": "kink warped over a space form of curvature +-2k^2",
        },
        {
            "family": "kk_nullity_one",
            "dimension": "d = 2*r_pairs + 1",
            "parameters": {"r_pairs": "external paired directions (int >= 1)",
                           "sig_index": "minus signs per half-block",
                           "sigma": "+1 or -1 pairing type",
                           "fsq": "constant invariant, sign(F2) = sigma",
                           "l": "twist parameter (any real; 0 gives a product)",
                           "lam": "+1 or -1 internal line sign",
                           "eps_d": "+1 or -1, orientation branch",
                           "potential_sign": "+1 or -1"},
            "rank": "2*r_pairs",
            "nullity": 1,
            "notes": "paired block over a twisted line; "
                     "k = r l^2/(lam F2) - (r+2) F2/(8r)",
        },
        {
            "family": "ckink3",
            "dimension": "d = 3",
            "parameters": {"K": "kink parameter (> 0)",
                           "L": "charge offset (tau * L > 0; |L| < 2K when tau = -1)",
                           "tau": "+1 or -1 internal line sign",
                           "profile_sign": "+1 or -1",
                           "anti": "True for the branch asymptotic to curvature -4K-3L"},
            "rank": 2,
            "nullity": 1,
            "notes": "charged kink over a twisted line; k = K + 3L/4, "
                     "l^2 = 2 tau (K + L/2)^2 L",
        },
    ]


def default_grid() -> List[SolutionInstance]:
    """The default verification grid: a spread of instances per family."""
    out: List[SolutionInstance] = []
    out.append(make_real_space_form(3, 1, 0.1))
    out.append(make_real_space_form(4, 0, 1.0))
    out.append(make_real_space_form(6, 2, -10.0))

    out.append(make_cpx_space_form(2, 0, 1, 8.0))
    out.append(make_cpx_space_form(2, 0, -1, -4.0))
    out.append(make_cpx_space_form(3, 1, 1, 0.8))
    out.append(make_cpx_space_form(2, 0, 1, 40.0, eps_d=-1))

    out.append(make_product_solution(1, 0, 1, 4.0, 2, 0))
    out.append(make_product_solution(1, 0, -1, -2.0, 4, 1))
    out.append(make_product_solution(2, 1, 1, 0.4, 2, 0))

    out.append(make_kink2(0.5, 1, True))
    out.append(make_kink2(2.0, -1, True, warp_sign=-1))
    out.append(make_kink2(8.0, 1, False))

    out.append(make_kink_warped(1.0, 2, 0, 1, True))
    out.append(make_kink_warped(0.1, 2, 1, -1, True))
    out.append(make_kink_warped(10.0, 4, 0, 1, False))

    out.append(make_kk_nullity_one(1, 0, 1, 4.0, 1.0))
    out.append(make_kk_nullity_one(1, 0, -1, -4.0, 0.5))
    out.append(make_kk_nullity_one(2, 1, 1, 8.0, 2.0, lam=-1))
    out.append(make_kk_nullity_one(1, 0, 1, 4.0, 1.0, lam=-1))  # flat external block

    out.append(make_ckink(2.0, 0.5, 1, 1, True))
    out.append(make_ckink(2.0, -0.5, -1, 1, True))
    out.append(make_ckink(5.0, 1.0, 1, -1, False))
    return out
