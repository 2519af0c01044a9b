"""Pointwise verification of the solution system and its consequences.

Every check here evaluates closed-form fields at concrete chart points and
reports two readings of each residual: the absolute maximum component and a
relative one obtained by dividing by the largest term entering the equation.
The divisor is floored by a characteristic magnitude of the geometry at the
point (the largest Riemann or metric component, grown by the size of the
two-form for identities involving it): equations whose individual terms
vanish identically on a family (an Einstein metric in the trace-adjusted
Ricci equation, a parallel two-form in the divergence equation) would
otherwise compare rounding noise against rounding noise and read O(1).
Tolerances gate the relative reading unless a check is documented as
absolute.

The verified statements, writing F for the curl of the potential, T for its
stress tensor and brackets for antisymmetrization with weight 1/2:

* field equations:  C + (FF - F[F])/2 - 3/(2(d-2)) (g[T] - g[T]) = 0,
  the trace-adjusted Ricci equation, and the divergence equation for F;
* curvature identities: Riemann, Ricci and scalar curvature expressed through
  the space-form parameter k and F;
* the traceless and cubic differential identities satisfied by F;
* the symmetry of the canonical co-vector (a Killing check);
* an on-shell differential Bianchi identity built from the analytic Riemann
  expression (an independent route from the numerical one in
  :mod:`kkforms.curvature`);
* the almost-complex structure conditions and the holomorphic curvature
  form, for maximal-rank solutions;
* the reduced curvature/profile systems of the kink families;
* umbilicity, trace and gauge rules for the fundamental forms of block
  solutions;
* the vanishing Weyl tensor of the one-dimensional extension (the defining
  certificate), via :mod:`kkforms.lift`.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from scipy.stats import qmc

from .lift import lift as lift_extension, weyl_vanishing
from .catalog import BlockMetric, SolutionInstance
from .curvature import point_geometry
from .tensors import (ChartPoint, DegenerateMetricError, Domain, SmoothField,
                      TensorValue, metric_inverse)

__all__ = [
    "ResidualReport",
    "GJEquationSet",
    "FundamentalForms",
    "SolutionReport",
    "gj_residual",
    "curvature_identity_residual",
    "estimate_k",
    "traceless_kink_residual",
    "structure_residual",
    "kink_ode_residual",
    "ckink_ode_residual",
    "fundamental_forms",
    "bianchi_residual",
    "sample_points",
    "run_solution_checks",
]

FLOOR = 1e-30

# Checks whose tolerance gates the absolute reading instead of the relative
# one (constants-level comparisons, where "relative" has no natural scale).
ABSOLUTE_CHECKS = frozenset({"k_error", "k_spread", "fsq_error"})


def _rel(abs_value: float, scale: float) -> float:
    return abs_value / max(scale, FLOOR)


def _pair(residual: np.ndarray, *terms: np.ndarray, ref: float = 0.0) -> Tuple[float, float]:
    """(absolute max, relative max) of a residual against its largest term.

    ``ref`` floors the divisor so that an equation whose terms all vanish
    identically is judged against the size of the surrounding geometry
    instead of against its own rounding noise.
    """
    a = float(np.abs(residual).max()) if np.ndim(residual) else abs(float(residual))
    scale = ref
    for t in terms:
        scale = max(scale, float(np.abs(t).max()) if np.ndim(t) else abs(float(t)))
    return a, _rel(a, scale)


def _geo_ref(geo, with_two_form: bool = False) -> float:
    """Characteristic magnitude of a point geometry, for residual divisors."""
    ref = max(float(np.abs(geo.riemann).max()), float(np.abs(geo.g).max()))
    if with_two_form:
        ref *= 1.0 + float(np.abs(geo.F).max())
    return ref


@dataclass(frozen=True, eq=False)
class ResidualReport:
    """Aggregated residual over a point set, with its gating tolerance."""

    name: str
    abs_max: float
    rel_max: float
    points: int
    tolerance: float
    reading: str = "relative"

    @property
    def value(self) -> float:
        return self.abs_max if self.reading == "absolute" else self.rel_max

    @property
    def passed(self) -> bool:
        return self.value <= self.tolerance

    def line(self) -> str:
        status = "pass" if self.passed else "FAIL"
        return (f"{status}  {self.name:20s} abs={self.abs_max:9.3e} rel={self.rel_max:9.3e} "
                f"tol={self.tolerance:g} ({self.reading}, {self.points} pts)")


@dataclass(frozen=True, eq=False)
class GJEquationSet:
    """Residual tensors of the three field equations at one point."""

    conformal: TensorValue
    ricci: TensorValue
    gauge: TensorValue
    abs_max: Dict[str, float]
    rel_max: Dict[str, float]

    @property
    def worst_abs(self) -> float:
        return max(self.abs_max.values())

    @property
    def worst_rel(self) -> float:
        return max(self.rel_max.values())


@dataclass(frozen=True, eq=False)
class FundamentalForms:
    """Second fundamental forms of a block split at one point.

    ``internal`` is E[alpha, i, j] (shape (r, n, n)), ``external`` is
    Ehat[i, alpha, beta] (shape (n, r, r)), ``twist`` is f[i, alpha, beta]
    (shape (n, r, r)), and ``trace`` is E with internal indices traced by
    the inverse internal metric.  ``residuals`` holds (abs, rel) pairs for
    the umbilicity, trace and gauge rules.
    """

    internal: np.ndarray
    external: np.ndarray
    twist: np.ndarray
    trace: np.ndarray
    residuals: Dict[str, Tuple[float, float]]


# ---------------------------------------------------------------------------
# field equations
# ---------------------------------------------------------------------------


def gj_residual(g: SmoothField, A: SmoothField, p: ChartPoint) -> GJEquationSet:
    """Pointwise residuals of the three field equations.

    Needs d >= 3 (the conformal equation involves the Weyl tensor) and no
    knowledge of the space-form parameter.
    """
    d = g.dim
    if d < 3:
        raise ValueError(f"the field equations are stated in dimension >= 3, got d={d}")
    geo = point_geometry(g, p, 3, A)
    gm, F, M, F2 = geo.g, geo.F, geo.M, geo.Fsq
    T = M - F2 * gm / (2.0 * (d - 1))

    t_weyl = geo.weyl
    t_ff = 0.5 * (np.einsum('mn,kl->mnkl', F, F)
                  - 0.5 * (np.einsum('mk,ln->mnkl', F, F) - np.einsum('ml,kn->mnkl', F, F)))
    t_gt = -(3.0 / (4.0 * (d - 2))) * (
        np.einsum('mk,ln->mnkl', gm, T) - np.einsum('ml,kn->mnkl', gm, T)
        - np.einsum('nk,lm->mnkl', gm, T) + np.einsum('nl,km->mnkl', gm, T))
    ref = _geo_ref(geo)
    e_conf = t_weyl + t_ff + t_gt
    a_conf, r_conf = _pair(e_conf, t_weyl, t_ff, t_gt, ref=ref)

    t_ric = geo.ricci - geo.scalar * gm / d
    t_mm = (d + 1) / 4.0 * (M - F2 * gm / d)
    e_ric = t_ric - t_mm
    a_ric, r_ric = _pair(e_ric, t_ric, t_mm, ref=ref)

    t_df = geo.DF
    t_div = (1.0 / (d - 1)) * (np.einsum('km,n->kmn', gm, geo.divF)
                               - np.einsum('kn,m->kmn', gm, geo.divF))
    e_gauge = t_df + t_div
    a_gauge, r_gauge = _pair(e_gauge, t_df, t_div, ref=_geo_ref(geo, True))

    return GJEquationSet(
        conformal=TensorValue((4, 0), d, e_conf),
        ricci=TensorValue((2, 0), d, e_ric),
        gauge=TensorValue((3, 0), d, e_gauge),
        abs_max={"conformal": a_conf, "ricci": a_ric, "gauge": a_gauge},
        rel_max={"conformal": r_conf, "ricci": r_ric, "gauge": r_gauge},
    )


def _riemann_form(geo, k: float) -> Tuple[np.ndarray, ...]:
    """Analytic Riemann tensor of a solution with space-form parameter k."""
    gm, F, M, F2 = geo.g, geo.F, geo.M, geo.Fsq
    t1 = (k + F2 / 8.0) * (np.einsum('ml,kn->mnkl', gm, gm) - np.einsum('mk,ln->mnkl', gm, gm))
    t2 = -0.25 * (np.einsum('mk,ln->mnkl', gm, M) - np.einsum('ml,kn->mnkl', gm, M)
                  - np.einsum('nk,lm->mnkl', gm, M) + np.einsum('nl,km->mnkl', gm, M))
    t3 = -0.5 * np.einsum('mn,kl->mnkl', F, F) \
         + 0.25 * (np.einsum('mk,ln->mnkl', F, F) - np.einsum('ml,kn->mnkl', F, F))
    return t1, t2, t3


def curvature_identity_residual(g: SmoothField, A: SmoothField, k: float,
                                p: ChartPoint) -> Dict[str, Tuple[float, float]]:
    """Residuals of the Riemann, Ricci and scalar curvature identities.

    Each value is an (absolute, relative) pair; keys are ``riemann``,
    ``ricci`` and ``scalar``.
    """
    d = g.dim
    geo = point_geometry(g, p, 3, A)
    gm, M, F2 = geo.g, geo.M, geo.Fsq

    ref = _geo_ref(geo)
    t1, t2, t3 = _riemann_form(geo, k)
    e_riem = geo.riemann - (t1 + t2 + t3)
    riem = _pair(e_riem, geo.riemann, t1, t2, t3, ref=ref)

    s1 = (d - 1) * k * gm
    s2 = (d + 1) / 8.0 * F2 * gm
    s3 = (d + 1) / 4.0 * M
    e_ric = geo.ricci - (s1 + s2 + s3)
    ric = _pair(e_ric, geo.ricci, s1, s2, s3, ref=ref)

    c1 = d * (d - 1) * k
    c2 = (d + 1) * (d + 2) * F2 / 8.0
    e_sc = geo.scalar - c1 - c2
    sc = _pair(np.asarray(e_sc), np.asarray(geo.scalar), np.asarray(c1), np.asarray(c2))

    return {"riemann": riem, "ricci": ric, "scalar": sc}


def estimate_k(g: SmoothField, A: SmoothField,
               points: Sequence[ChartPoint]) -> Tuple[float, float]:
    """Space-form parameter inferred from the scalar identity at each point.

    Returns (mean, spread) where spread = max - min over the points; a
    genuine solution has spread at rounding level.
    """
    points = list(points)
    if not points:
        raise ValueError("estimate_k needs at least one point")
    d = g.dim
    vals = []
    for p in points:
        geo = point_geometry(g, p, 3, A)
        vals.append((geo.scalar - (d + 1) * (d + 2) * geo.Fsq / 8.0) / (d * (d - 1)))
    arr = np.array(vals)
    return float(arr.mean()), float(arr.max() - arr.min())


def traceless_kink_residual(g: SmoothField, A: SmoothField, k: float,
                            p: ChartPoint) -> Dict[str, Tuple[float, float]]:
    """Residuals of the two differential identities satisfied by F.

    ``traceless``: (1/(d-1)) D_m (div F)_n + (1/2) D^2 F_mn = 0 (the
    divergence co-vector of a solution is Killing, so the unsymmetrized
    form holds).  ``cubic``: (1/2) D^2 F + (k + F^2/8) F - (1/4) F^3 = 0.
    """
    d = g.dim
    geo = point_geometry(g, p, 3, A)
    ref = _geo_ref(geo, True)
    t1 = geo.DdivF / (d - 1)
    t2 = 0.5 * geo.lapF
    tr = _pair(t1 + t2, t1, t2, ref=ref)

    f3 = np.einsum('ma,ab,bn->mn', geo.Fmix, geo.Fmix, geo.F)
    u2 = (k + geo.Fsq / 8.0) * geo.F
    u3 = -0.25 * f3
    cu = _pair(t2 + u2 + u3, t2, u2, u3, ref=ref)
    return {"traceless": tr, "cubic": cu}


def killing_divergence_residual(g: SmoothField, A: SmoothField,
                                p: ChartPoint) -> Tuple[float, float]:
    """Symmetrized covariant derivative of the divergence co-vector of F."""
    geo = point_geometry(g, p, 3, A)
    dk = geo.DdivF
    sym = 0.5 * (dk + dk.T)
    return _pair(sym, dk, ref=_geo_ref(geo, True))


def bianchi_residual(g: SmoothField, A: SmoothField, k: float, p: ChartPoint) -> float:
    """Relative residual of the differential Bianchi identity, analytic route.

    The Riemann tensor is substituted by its algebraic expression through g
    and F; the cyclic covariant derivative then needs only first covariant
    derivatives of F (the metric is parallel), making this check independent
    of the third-order numerical Riemann derivatives used by
    :func:`kkforms.curvature.second_bianchi_residual`.  On a solution the
    cyclic sum vanishes.
    """
    geo = point_geometry(g, p, 3, A)
    gm, F, DF, G = geo.g, geo.F, geo.DF, geo.ginv
    Fmix = geo.Fmix

    dfsq = 2.0 * np.einsum('mn,amn->a', geo.Fup, DF)
    DM = (np.einsum('amc,cb,nb->amn', DF, G, F)
          + np.einsum('mc,cb,anb->amn', F, G, DF))

    gg = np.einsum('ml,kn->mnkl', gm, gm) - np.einsum('mk,ln->mnkl', gm, gm)
    dr = np.einsum('a,mnkl->amnkl', dfsq / 8.0, gg)
    dr -= 0.25 * (np.einsum('mk,aln->amnkl', gm, DM) - np.einsum('ml,akn->amnkl', gm, DM)
                  - np.einsum('nk,alm->amnkl', gm, DM) + np.einsum('nl,akm->amnkl', gm, DM))
    dr -= 0.5 * (np.einsum('amn,kl->amnkl', DF, F) + np.einsum('mn,akl->amnkl', F, DF))
    dr += 0.25 * (np.einsum('amk,ln->amnkl', DF, F) + np.einsum('mk,aln->amnkl', F, DF)
                  - np.einsum('aml,kn->amnkl', DF, F) - np.einsum('ml,akn->amnkl', F, DF))

    cyc = dr + np.einsum('mnakl->amnkl', dr) + np.einsum('namkl->amnkl', dr)
    t1, t2, t3 = _riemann_form(geo, k)
    scale = max(float(np.abs(t1 + t2 + t3).max()), _geo_ref(geo, True), FLOOR)
    return float(np.abs(cyc).max()) / scale


# ---------------------------------------------------------------------------
# structure conditions (maximal rank)
# ---------------------------------------------------------------------------


def structure_residual(g: SmoothField, A: SmoothField, sigma: int, p: ChartPoint,
                       hol_curv: Optional[float] = None) -> Dict[str, Tuple[float, float]]:
    """Residuals of the (para-)complex structure conditions at a point.

    The candidate structure is J = sqrt(d/|F^2|) F with one index raised;
    the checks are ``square`` (J^2 = -sigma id), ``hermitian`` (the metric
    is invariant), ``parallel`` (DJ = 0; fails for kink-type geometries by
    design), and ``curvature`` (the Riemann tensor has the constant
    holomorphic curvature form; the coefficient defaults to F^2/d and can
    be overridden for block checks where the external curvature differs).
    """
    if sigma not in (1, -1):
        raise ValueError(f"sigma must be +1 or -1, got {sigma}")
    d = g.dim
    geo = point_geometry(g, p, 3, A)
    gm, F2 = geo.g, geo.Fsq
    if F2 == 0.0:
        raise ValueError("the structure conditions need a nonvanishing invariant F^2")
    c = math.sqrt(d / abs(F2))
    J = c * geo.Fmix
    ident = np.eye(d)

    sq = J @ J + sigma * ident
    square = _pair(sq, J @ J, ident)

    herm = np.einsum('mk,nl,kl->mn', J, J, gm) - sigma * gm
    hermitian = _pair(herm, gm)

    DJ = c * np.einsum('amc,cn->amn', geo.DF, geo.ginv)
    parallel = _pair(DJ, J, ref=_geo_ref(geo))

    c4 = (F2 / d if hol_curv is None else hol_curv) / 4.0
    Jlow = np.einsum('mc,cl->ml', J, gm)
    form = c4 * (np.einsum('ml,kn->mnkl', gm, gm) - np.einsum('mk,ln->mnkl', gm, gm)
                 + sigma * (np.einsum('ml,nk->mnkl', Jlow, Jlow)
                            - np.einsum('mk,nl->mnkl', Jlow, Jlow)
                            - 2.0 * np.einsum('mn,kl->mnkl', Jlow, Jlow)))
    curv = _pair(geo.riemann - form, geo.riemann, form, ref=_geo_ref(geo))

    return {"square": square, "hermitian": hermitian, "parallel": parallel,
            "curvature": curv}


# ---------------------------------------------------------------------------
# reduced kink systems (2-d external geometry)
# ---------------------------------------------------------------------------


def _phi_hessian(geo, phi: SmoothField, p: ChartPoint):
    pj = phi.jet(p, 2)
    grad = pj.d1
    hess = pj.d2 - np.einsum('emn,e->mn', geo.chris, grad)
    lap = float(np.einsum('mn,mn->', geo.ginv, hess))
    return float(pj.value), grad, hess, lap


def kink_ode_residual(g2: SmoothField, phi: SmoothField, k: float, sigma: int,
                      p: ChartPoint) -> Dict[str, Tuple[float, float]]:
    """Residuals of the reduced kink system on a 2-d external geometry.

    ``curvature``: R = 2k + 3 sigma phi^2; ``profile``: the quasilinear
    profile equation; ``hessian``: the trace-free Hessian of phi vanishes.
    """
    if g2.dim != 2:
        raise ValueError(f"the reduced kink system lives on a 2-d chart, got d={g2.dim}")
    geo = point_geometry(g2, p, 2, None)
    val, _, hess, lap = _phi_hessian(geo, phi, p)

    e_curv = geo.scalar - 2.0 * k - 3.0 * sigma * val ** 2
    curvature = _pair(np.asarray(e_curv), np.asarray(geo.scalar),
                      np.asarray(2.0 * k), np.asarray(3.0 * val ** 2))

    e_prof = lap + 2.0 * k * val + sigma * val ** 3
    profile = _pair(np.asarray(e_prof), np.asarray(lap),
                    np.asarray(2.0 * k * val), np.asarray(val ** 3))

    t2 = 0.5 * geo.g * lap
    hessian = _pair(hess - t2, hess, t2)
    return {"curvature": curvature, "profile": profile, "hessian": hessian}


def ckink_ode_residual(g2: SmoothField, phi: SmoothField, k: float, l: float,
                       tau: int, warp: SmoothField,
                       p: ChartPoint) -> Dict[str, Tuple[float, float]]:
    """Residuals of the reduced charged-kink system on a 2-d external geometry.

    With sigma = -1 built in: ``curvature``: R = 2k - 3 phi^2 + 3 tau l^2 /
    phi^4; ``profile``: the profile equation with the charge term;
    ``hessian``: trace-free Hessian; ``warp``: the warp normalization
    lambda = tau F^2 = -2 tau phi^2.
    """
    if g2.dim != 2:
        raise ValueError(f"the reduced charged-kink system lives on a 2-d chart, got d={g2.dim}")
    if tau not in (1, -1):
        raise ValueError(f"tau must be +1 or -1, got {tau}")
    sigma = -1.0
    geo = point_geometry(g2, p, 2, None)
    val, _, hess, lap = _phi_hessian(geo, phi, p)
    if val == 0.0:
        raise ValueError("the charged-kink system is singular where the profile vanishes")
    l2 = l * l

    q_curv = 3.0 * tau * l2 / val ** 4
    e_curv = geo.scalar - 2.0 * k - 3.0 * sigma * val ** 2 - q_curv
    curvature = _pair(np.asarray(e_curv), np.asarray(geo.scalar),
                      np.asarray(2.0 * k), np.asarray(3.0 * val ** 2), np.asarray(q_curv))

    q_prof = -tau * l2 / val ** 3
    e_prof = lap + 2.0 * k * val + sigma * val ** 3 + q_prof
    profile = _pair(np.asarray(e_prof), np.asarray(lap),
                    np.asarray(2.0 * k * val), np.asarray(val ** 3), np.asarray(q_prof))

    t2 = 0.5 * geo.g * lap
    hessian = _pair(hess - t2, hess, t2)

    lam = float(warp.jet(p, 0).value)
    e_warp = lam + 2.0 * tau * val ** 2
    warp_res = _pair(np.asarray(e_warp), np.asarray(lam), np.asarray(2.0 * val ** 2))
    return {"curvature": curvature, "profile": profile, "hessian": hessian,
            "warp": warp_res}


# ---------------------------------------------------------------------------
# fundamental forms of block solutions
# ---------------------------------------------------------------------------


def fundamental_forms(block: BlockMetric, p: ChartPoint) -> FundamentalForms:
    """Second fundamental forms of a block split, with their solution rules.

    Computes the internal form E[alpha, i, j] (Lie derivative expanded in
    partial derivatives), the external form Ehat[i, alpha, beta] and the
    twist f[i, alpha, beta]; then the residuals

    * ``umbilicity``: E is pure trace in its internal indices;
    * ``trace``: the E-trace equals n/(r-1) (F^-1) (div F) on the external
      block;
    * ``gauge_rule``: f vanishes for n > 1, and for n = 1 is proportional
      to the inverse of the external two-form with coefficient
      -(f:F)/r.

    All three rules are invariant under an overall sign of the metric, so
    they can be checked on the stored orientation directly.
    """
    if block.potential is None:
        raise ValueError("the block carries no external potential; fundamental-form "
                         "rules involve the external two-form")
    r, n, d = block.r, block.n, block.dim
    if p.dim != d:
        raise ValueError(f"point dimension {p.dim} does not match block dimension {d}")

    ej = block.ext.jet(p, 1)
    wj = block.warp.jet(p, 1)
    cj = block.internal.jet(p, 1)
    aj = block.a.jet(p, 1)
    Aj = block.potential.jet(p, 2)

    h = wj.value * cj.value
    dh = np.einsum('a,ij->ija', wj.d1, cj.value) + wj.value * cj.d1
    hinv = np.linalg.inv(h)

    av, ad = aj.value, aj.d1  # a[alpha, i], da[alpha, i, mu]

    # twist f[i, alpha, beta]
    f = (np.einsum('bia->iab', ad[:, :, :r]) - np.einsum('aib->iab', ad[:, :, :r]))
    t_fa = np.einsum('aj,bij->iab', av, ad[:, :, r:])
    f += -t_fa + np.einsum('iab->iba', t_fa)

    # internal form E[alpha, i, j]
    e1 = np.einsum('ija->aij', dh[:, :, :r])
    lie = (np.einsum('ak,ijk->aij', av, dh[:, :, r:])
           + np.einsum('kj,aki->aij', h, ad[:, :, r:])
           + np.einsum('ik,akj->aij', h, ad[:, :, r:]))
    E = 0.5 * (e1 - lie)

    # external form Ehat[i, alpha, beta]
    Ehat = 0.5 * (np.einsum('abi->iab', ej.d1[:, :, r:]) + np.einsum('ij,jab->iab', h, f))

    trace = np.einsum('aij,ji->a', E, hinv)

    # On product-type splits both sides of a rule can vanish identically;
    # judge those against the block's own magnitude, not rounding noise.
    ref_blk = max(float(np.abs(h).max()), float(np.abs(hinv).max()),
                  float(np.abs(ej.value).max()))

    # umbilicity: E = (trace/n) h
    t_umb = np.einsum('a,ij->aij', trace / n, h)
    umbilicity = _pair(E - t_umb, E, t_umb, ref=ref_blk)

    # external divergence of F on the external block
    gext = ej.value
    dgext = ej.d1[:, :, :r]  # dgext[a, b, c] = d_c g_ab
    ginv_ext = np.linalg.inv(0.5 * (gext + gext.T))
    # lowered[c, a, b] = d_a g_cb + d_b g_ca - d_c g_ab
    lowered = (np.einsum('cba->cab', dgext) + dgext - np.einsum('abc->cab', dgext))
    chris_ext = 0.5 * np.einsum('ec,cab->eab', ginv_ext, lowered)

    Fx = Aj.d1[:r, :r].T - Aj.d1[:r, :r]  # F[a, b] = d_a A_b - d_b A_a
    Ad2 = Aj.d2[:r, :r, :r]  # Ad2[n, m1, m2] = d_m1 d_m2 A_n
    dFx = np.einsum('bac->cab', Ad2) - np.einsum('abc->cab', Ad2)  # dFx[c, a, b] = d_c F_ab
    DFx = (dFx - np.einsum('eca,eb->cab', chris_ext, Fx)
           - np.einsum('ecb,ae->cab', chris_ext, Fx))
    divFx = np.einsum('ca,cna->n', ginv_ext, DFx)

    Fmix = Fx @ ginv_ext
    Fmix_inv = np.linalg.inv(Fmix)
    rhs = (n / (r - 1.0)) * Fmix_inv @ divFx
    trace_rule = _pair(trace - rhs, trace, rhs, ref=ref_blk)

    if n > 1:
        scale_terms = (np.abs(ad[:, :, :r]).max() if ad.size else 0.0,
                       np.abs(t_fa).max() if t_fa.size else 0.0)
        a_f = float(np.abs(f).max())
        gauge_rule = (a_f, _rel(a_f, max(max(scale_terms), ref_blk)))
    else:
        Fup = ginv_ext @ Fx @ ginv_ext
        Finv_low = Fmix_inv @ gext
        coef = -float(np.einsum('ab,ab->', f[0], Fup)) / r
        gauge_rule = _pair(f[0] - coef * Finv_low, f[0], coef * Finv_low)

    return FundamentalForms(internal=E, external=Ehat, twist=f, trace=trace,
                            residuals={"umbilicity": umbilicity,
                                       "trace": trace_rule,
                                       "gauge_rule": gauge_rule})


# ---------------------------------------------------------------------------
# sampling
# ---------------------------------------------------------------------------


def sample_points(domain: Domain, n: int, seed: int = 42,
                  metric: Optional[SmoothField] = None) -> List[ChartPoint]:
    """Low-discrepancy points in the domain box passing its predicate.

    A Halton sequence (deterministic for a given seed) is scaled into the
    box and filtered by the domain predicate; when ``metric`` is given,
    points where it fails to invert cleanly are rejected as well.
    """
    dim = len(domain.box)
    engine = qmc.Halton(d=dim, scramble=True, seed=seed)
    lo = np.array([b[0] for b in domain.box])
    hi = np.array([b[1] for b in domain.box])
    out: List[ChartPoint] = []
    for _ in range(500):
        batch = qmc.scale(engine.random(max(2 * n, 16)), lo, hi)
        for row in batch:
            p = ChartPoint(tuple(float(v) for v in row))
            if not domain.predicate(p):
                continue
            if metric is not None:
                try:
                    metric_inverse(metric.jet(p, 0).value)
                except DegenerateMetricError:
                    continue
            out.append(p)
            if len(out) == n:
                return out
    raise RuntimeError(f"could not draw {n} admissible points from the domain "
                       f"(got {len(out)}); the box/predicate may be inconsistent")


# ---------------------------------------------------------------------------
# suite runner
# ---------------------------------------------------------------------------


@dataclass(eq=False)
class SolutionReport:
    """All checks for one solution instance."""

    family: str
    label: str
    params: Dict[str, object]
    eps_d: int
    n_points: int
    seed: int
    tolerance: float
    checks: Dict[str, ResidualReport] = field(default_factory=dict)
    invariants: Dict[str, bool] = field(default_factory=dict)
    wall_ms: float = 0.0

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.checks.values()) and all(self.invariants.values())

    def lines(self) -> List[str]:
        out = [f"{self.family}: {self.label} [eps_d={self.eps_d:+d}]"]
        out.extend("  " + self.checks[name].line() for name in sorted(self.checks))
        for name in sorted(self.invariants):
            out.append(f"  {'pass' if self.invariants[name] else 'FAIL'}  invariant {name}")
        return out

    def as_dict(self) -> Dict[str, object]:
        """Plain-data form of the report (for structured serialization)."""
        return {
            "family": self.family,
            "label": self.label,
            "params": dict(self.params),
            "eps_d": self.eps_d,
            "n_points": self.n_points,
            "seed": self.seed,
            "tolerance": self.tolerance,
            "passed": self.passed,
            "wall_ms": round(self.wall_ms, 3),
            "checks": {
                name: {
                    "abs_max": rep.abs_max,
                    "rel_max": rep.rel_max,
                    "tolerance": rep.tolerance,
                    "reading": rep.reading,
                    "points": rep.points,
                    "passed": rep.passed,
                }
                for name, rep in self.checks.items()
            },
            "invariants": dict(self.invariants),
        }


class _Agg:
    """Running (abs, rel) maxima for one named check."""

    __slots__ = ("a", "r", "n")

    def __init__(self):
        self.a, self.r, self.n = 0.0, 0.0, 0

    def add(self, pair: Tuple[float, float]) -> None:
        self.a = max(self.a, pair[0])
        self.r = max(self.r, pair[1])
        self.n += 1


def _numeric_rank(F: np.ndarray) -> int:
    sv = np.linalg.svd(F, compute_uv=False)
    top = sv.max() if sv.size else 0.0
    if top == 0.0:
        return 0
    return int((sv > 1e-8 * top).sum())


def run_solution_checks(instance: SolutionInstance, n_points: int = 50,
                        seed: int = 42, tolerance: float = 1e-7,
                        tolerances: Optional[Dict[str, float]] = None) -> SolutionReport:
    """Run the full pointwise verification suite on one instance.

    ``tolerances`` may override the default tolerance per check name.
    Checks named in ``ABSOLUTE_CHECKS`` gate their absolute reading;
    everything else gates the relative one.
    """
    t0 = time.perf_counter()
    tolerances = tolerances or {}
    g_eff, A_eff = instance.gj_fields()
    d = instance.dim
    pts = sample_points(instance.domain, n_points, seed=seed, metric=g_eff)

    aggs: Dict[str, _Agg] = {}

    def add(name: str, pair: Tuple[float, float]) -> None:
        aggs.setdefault(name, _Agg()).add(pair)

    exp = instance.expected
    k = exp["k"]
    ranks, nullities, sig_indices = set(), set(), set()

    for p in pts:
        geo = point_geometry(g_eff, p, 3, A_eff)
        eq = gj_residual(g_eff, A_eff, p)
        for key in ("conformal", "ricci", "gauge"):
            add(f"gj_{key}", (eq.abs_max[key], eq.rel_max[key]))
        for key, pair in curvature_identity_residual(g_eff, A_eff, k, p).items():
            add(f"curv_{key}", pair)
        for key, pair in traceless_kink_residual(g_eff, A_eff, k, p).items():
            add(f"gauge_{key}", pair)
        add("killing", killing_divergence_residual(g_eff, A_eff, p))
        b = bianchi_residual(g_eff, A_eff, k, p)
        add("bianchi", (b, b))
        if exp.get("F2") is not None:
            e = abs(geo.Fsq - exp["F2"])
            add("fsq_error", (e, e))
        if exp.get("rank") == d:
            for key, pair in structure_residual(g_eff, A_eff, exp["sigma"], p).items():
                add(f"structure_{key}", pair)
        ranks.add(_numeric_rank(geo.F))
        nullities.add(d - _numeric_rank(geo.F))
        sig_indices.add(int((np.linalg.eigvalsh(geo.g) < 0).sum()))

    k_mean, k_spread = estimate_k(g_eff, A_eff, pts)
    add("k_error", (abs(k_mean - k), abs(k_mean - k)))
    add("k_spread", (k_spread, k_spread))

    lifted = lift_extension(instance.g, instance.A, instance.eps_d)
    wrep = weyl_vanishing(lifted, pts)
    add("lift_weyl", (wrep.abs_max, wrep.rel_max))

    if instance.block is not None:
        for p in pts:
            ff = fundamental_forms(instance.block, p)
            for key, pair in ff.residuals.items():
                add(f"forms_{key}", pair)

    if instance.external is not None:
        ext = instance.external
        ext_pts = sample_points(ext.domain, n_points, seed=seed, metric=ext.g)
        if instance.family in ("kink2", "kink_warped"):
            for p in ext_pts:
                for key, pair in kink_ode_residual(ext.g, ext.phi, k, -1, p).items():
                    add(f"kink_{key}", pair)
        elif instance.family == "ckink3":
            l = math.sqrt(exp["l2"])
            tau = exp["tau"]
            for p in ext_pts:
                res = ckink_ode_residual(ext.g, ext.phi, k, l, tau, ext.warp, p)
                for key, pair in res.items():
                    add(f"ckink_{key}", pair)

    checks = {}
    for name, agg in aggs.items():
        tol = tolerances.get(name, tolerance)
        reading = "absolute" if name in ABSOLUTE_CHECKS else "relative"
        checks[name] = ResidualReport(name, agg.a, agg.r, agg.n, tol, reading)

    invariants = {
        "rank_constant": len(ranks) == 1,
        "rank_expected": ranks == {exp["rank"]},
        "nullity_expected": nullities == {exp["nullity"]},
        "signature_constant": len(sig_indices) == 1,
    }

    return SolutionReport(
        family=instance.family,
        label=instance.label,
        params=dict(instance.params),
        eps_d=instance.eps_d,
        n_points=len(pts),
        seed=seed,
        tolerance=tolerance,
        checks=checks,
        invariants=invariants,
        wall_ms=(time.perf_counter() - t0) * 1e3,
    )
