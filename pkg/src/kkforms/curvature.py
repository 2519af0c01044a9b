"""Christoffel symbols, curvature tensors and covariant derivatives.

Sign conventions, fixed once for the whole package:

    Gamma^l_{mn} = (1/2) g^{lk} (d_m g_{kn} + d_n g_{km} - d_k g_{mn})

    R_{mnk}^l = d_m Gamma^l_{nk} - d_n Gamma^l_{mk}
                + Gamma^l_{mx} Gamma^x_{nk} - Gamma^l_{nx} Gamma^x_{mk}

    R_{mnkl} = R_{mnk}^x g_{xl}        (lowered on the LAST slot)
    R_{mn}   = R_{kmn}^k               (first-vs-last contraction)
    R        = g^{mn} R_{mn}

These give positive scalar curvature on round spheres, and for a space of
constant sectional curvature k the lowered tensor is

    R_{mnkl} = k (g_{ml} g_{kn} - g_{mk} g_{ln}).

The Weyl (conformal) tensor is the totally trace-free part of Riemann.  In
this convention it reads

    C_{mnkl} = R_{mnkl} + g_{mk} S_{nl} + g_{nl} S_{mk}
                        - g_{ml} S_{nk} - g_{nk} S_{ml}

with the Schouten tensor S_{mn} = (R_{mn} - R g_{mn}/(2(d-1)))/(d-2).  All
single traces of C vanish, C = 0 identically in d = 3, and C (with one
index raised) is invariant under conformal rescaling of g.

Layout: internal derivative arrays are derivative-first, e.g.
``dg[a, m, n] = d_a g_{mn}`` and ``chris[l, m, n] = Gamma^l_{mn}``.  Axis
permutations are written as einsum strings throughout, so every index
movement is spelled out.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Optional

import numpy as np

from .tensors import (
    ChartPoint,
    SmoothField,
    TensorValue,
    metric_inverse,
)

__all__ = [
    "CurvatureBundle",
    "KillingCandidate",
    "PointGeometry",
    "point_geometry",
    "christoffel",
    "curvature_bundle",
    "covariant_derivative",
    "two_form_laplacian",
    "killing_residual",
    "second_bianchi_residual",
]


@dataclass(frozen=True)
class CurvatureBundle:
    """Curvature data of a metric at one point.

    ``christoffel`` is laid out as ``[mu, nu, lam] = Gamma^lam_{mu nu}``,
    ``riemann_mixed`` as ``[mu, nu, kap, lam] = R_{mu nu kap}^lam`` and
    ``riemann`` is the fully lowered tensor.  ``weyl`` is None in d = 2,
    where the conformal tensor is undefined.
    """

    christoffel: TensorValue
    riemann_mixed: TensorValue
    riemann: TensorValue
    ricci: TensorValue
    scalar: float
    weyl: Optional[TensorValue]


@dataclass(frozen=True)
class KillingCandidate:
    """A covector at a point together with its symmetrized derivative."""

    vector: np.ndarray            # K_mu
    sym_derivative: np.ndarray    # D_mu K_nu + D_nu K_mu

    @property
    def residual(self) -> float:
        return float(np.max(np.abs(self.sym_derivative)))


class PointGeometry:
    """Lazily computed geometry of (g [, A]) at a single point.

    ``order`` is the metric-jet order actually evaluated (2 is enough for
    curvature, 3 adds Riemann derivatives for the Bianchi identity).  When
    a potential ``A`` is supplied, its jets are taken to the same order and
    the field-strength machinery (F, DF, D^2 F, div F, ...) becomes
    available.  Everything is cached per instance; instances themselves are
    memoized by :func:`point_geometry`, so distinct checks at the same
    point share one evaluation.
    """

    def __init__(self, g: SmoothField, p: ChartPoint, order: int = 2, A: Optional[SmoothField] = None):
        if g.valence != (2, 0):
            raise ValueError("PointGeometry needs a (2,0) metric field")
        self.g_field = g
        self.A_field = A
        self.point = p
        self.order = int(order)
        self.dim = g.dim

    def _need(self, n: int, what: str):
        if self.order < n:
            raise ValueError(f"{what} needs metric jets of order {n}, geometry was built with order {self.order}")

    # ----- metric and its coordinate derivatives -------------------------

    @cached_property
    def _gj(self):
        return self.g_field.jet(self.point, self.order)

    @cached_property
    def g(self) -> np.ndarray:
        return self._gj.value

    @cached_property
    def dg(self) -> np.ndarray:
        self._need(1, "dg")
        return np.einsum("mna->amn", self._gj.d1)

    @cached_property
    def ddg(self) -> np.ndarray:
        self._need(2, "ddg")
        return np.einsum("mnab->abmn", self._gj.d2)

    @cached_property
    def dddg(self) -> np.ndarray:
        self._need(3, "dddg")
        return np.einsum("mnabc->abcmn", self._gj.d3)

    @cached_property
    def ginv(self) -> np.ndarray:
        return metric_inverse(self.g).components

    @cached_property
    def dginv(self) -> np.ndarray:
        # d_a g^{mn} = -g^{mi} (d_a g_{ij}) g^{jn}
        return -np.einsum("mi,aij,jn->amn", self.ginv, self.dg, self.ginv)

    @cached_property
    def ddginv(self) -> np.ndarray:
        G, dg, ddg = self.ginv, self.dg, self.ddg
        t = np.einsum("mi,aij,jk,bkl,ln->abmn", G, dg, G, dg, G)
        return (-np.einsum("mi,abij,jn->abmn", G, ddg, G)
                + t + np.einsum("bamn->abmn", t))

    # ----- Christoffel symbols and their derivatives ---------------------

    @cached_property
    def _tlow(self) -> np.ndarray:
        # tlow[k, m, n] = d_m g_{kn} + d_n g_{km} - d_k g_{mn}
        dg = self.dg
        return np.einsum("mkn->kmn", dg) + np.einsum("nkm->kmn", dg) - dg

    @cached_property
    def chris(self) -> np.ndarray:
        return 0.5 * np.einsum("lk,kmn->lmn", self.ginv, self._tlow)

    @cached_property
    def _dtlow(self) -> np.ndarray:
        ddg = self.ddg
        return np.einsum("amkn->akmn", ddg) + np.einsum("ankm->akmn", ddg) - ddg

    @cached_property
    def dchris(self) -> np.ndarray:
        return 0.5 * (np.einsum("alk,kmn->almn", self.dginv, self._tlow)
                      + np.einsum("lk,akmn->almn", self.ginv, self._dtlow))

    @cached_property
    def ddchris(self) -> np.ndarray:
        dddg = self.dddg
        ddtlow = (np.einsum("abmkn->abkmn", dddg)
                  + np.einsum("abnkm->abkmn", dddg) - dddg)
        return 0.5 * (np.einsum("ablk,kmn->ablmn", self.ddginv, self._tlow)
                      + np.einsum("alk,bkmn->ablmn", self.dginv, self._dtlow)
                      + np.einsum("blk,akmn->ablmn", self.dginv, self._dtlow)
                      + np.einsum("lk,abkmn->ablmn", self.ginv, ddtlow))

    # ----- curvature ------------------------------------------------------

    @cached_property
    def riemann_mixed(self) -> np.ndarray:
        # R_{mnk}^l, stored as [m, n, k, l]
        t1 = np.einsum("mlnk->mnkl", self.dchris)
        gg = np.einsum("lmx,xnk->mnkl", self.chris, self.chris)
        both = t1 + gg
        return both - np.einsum("nmkl->mnkl", both)

    @cached_property
    def riemann(self) -> np.ndarray:
        return np.einsum("mnkx,xl->mnkl", self.riemann_mixed, self.g)

    @cached_property
    def ricci(self) -> np.ndarray:
        return np.einsum("kmnk->mn", self.riemann_mixed)

    @cached_property
    def scalar(self) -> float:
        return float(np.einsum("mn,mn->", self.ginv, self.ricci))

    @cached_property
    def schouten(self) -> np.ndarray:
        d = self.dim
        if d < 3:
            raise ValueError("Schouten/Weyl tensors are undefined in d = 2")
        return (self.ricci - self.scalar * self.g / (2.0 * (d - 1))) / (d - 2)

    @cached_property
    def weyl(self) -> np.ndarray:
        g, S = self.g, self.schouten
        return (self.riemann
                + np.einsum("mk,nl->mnkl", g, S) + np.einsum("nl,mk->mnkl", g, S)
                - np.einsum("ml,nk->mnkl", g, S) - np.einsum("nk,ml->mnkl", g, S))

    @cached_property
    def driemann_mixed(self) -> np.ndarray:
        # d_a R_{mnk}^l, stored as [a, m, n, k, l]
        t1 = np.einsum("amlnk->amnkl", self.ddchris)
        dgg = (np.einsum("almx,xnk->amnkl", self.dchris, self.chris)
               + np.einsum("lmx,axnk->amnkl", self.chris, self.dchris))
        both = t1 + dgg
        return both - np.einsum("anmkl->amnkl", both)

    @cached_property
    def driemann_cov(self) -> np.ndarray:
        # D_a R_{mnkl}, stored as [a, m, n, k, l]
        dlow = (np.einsum("amnkx,xl->amnkl", self.driemann_mixed, self.g)
                + np.einsum("mnkx,axl->amnkl", self.riemann_mixed, self.dg))
        R, C = self.riemann, self.chris
        return (dlow
                - np.einsum("eam,enkl->amnkl", C, R)
                - np.einsum("ean,mekl->amnkl", C, R)
                - np.einsum("eak,mnel->amnkl", C, R)
                - np.einsum("eal,mnke->amnkl", C, R))

    # ----- field strength machinery (needs A) -----------------------------

    def _require_A(self):
        if self.A_field is None:
            raise ValueError("this geometry was built without a potential A")

    @cached_property
    def _aj(self):
        self._require_A()
        return self.A_field.jet(self.point, self.order)

    @cached_property
    def F(self) -> np.ndarray:
        # F_{mn} = d_m A_n - d_n A_m ; A-jet layout d1[n, m] = d_m A_n
        d1 = self._aj.d1
        return np.einsum("nm->mn", d1) - d1

    @cached_property
    def dF(self) -> np.ndarray:
        # dF[a, m, n] = d_a F_{mn}
        d2 = self._aj.d2
        return np.einsum("nma->amn", d2) - np.einsum("mna->amn", d2)

    @cached_property
    def ddF(self) -> np.ndarray:
        d3 = self._aj.d3
        return np.einsum("nmab->abmn", d3) - np.einsum("mnab->abmn", d3)

    @cached_property
    def Fmix(self) -> np.ndarray:
        # F_m^n = F_{mk} g^{kn}
        return np.einsum("mk,kn->mn", self.F, self.ginv)

    @cached_property
    def Fup(self) -> np.ndarray:
        return np.einsum("ma,nb,ab->mn", self.ginv, self.ginv, self.F)

    @cached_property
    def Fsq(self) -> float:
        """The invariant F^2 = F_{mn} F^{mn}."""
        return float(np.einsum("mn,mn->", self.F, self.Fup))

    @cached_property
    def M(self) -> np.ndarray:
        """M_{mn} = F_{mk} F_n^{ k} (symmetric)."""
        return np.einsum("mk,nk->mn", self.F, self.Fmix)

    def df_covariant(self, F0: np.ndarray, dF: np.ndarray) -> np.ndarray:
        """D_c F_{mn} as [c, m, n], for an arbitrary two-form's raw jets."""
        C = self.chris
        return (dF - np.einsum("ecm,en->cmn", C, F0)
                   - np.einsum("ecn,me->cmn", C, F0))

    def ddf_covariant(self, F0, dF, ddF, DF) -> np.ndarray:
        """D_l D_c F_{mn} as [l, c, m, n]."""
        C, dC = self.chris, self.dchris
        d_DF = (ddF
                - np.einsum("lecm,en->lcmn", dC, F0) - np.einsum("ecm,len->lcmn", C, dF)
                - np.einsum("lecn,me->lcmn", dC, F0) - np.einsum("ecn,lme->lcmn", C, dF))
        return (d_DF
                - np.einsum("elc,emn->lcmn", C, DF)
                - np.einsum("elm,cen->lcmn", C, DF)
                - np.einsum("eln,cme->lcmn", C, DF))

    @cached_property
    def DF(self) -> np.ndarray:
        return self.df_covariant(self.F, self.dF)

    @cached_property
    def DDF(self) -> np.ndarray:
        return self.ddf_covariant(self.F, self.dF, self.ddF, self.DF)

    @cached_property
    def lapF(self) -> np.ndarray:
        """(D^2 F)_{mn} = g^{lc} D_l D_c F_{mn}."""
        return np.einsum("lc,lcmn->mn", self.ginv, self.DDF)

    @cached_property
    def divF(self) -> np.ndarray:
        """W_n = D_c F_n^{ c}."""
        return np.einsum("ca,cna->n", self.ginv, self.DF)

    @cached_property
    def DdivF(self) -> np.ndarray:
        """D_m W_n (metric compatibility lets D pass through g^{ca})."""
        return np.einsum("ca,mcna->mn", self.ginv, self.DDF)


@lru_cache(maxsize=8192)
def point_geometry(g: SmoothField, p: ChartPoint, order: int = 2, A: Optional[SmoothField] = None) -> PointGeometry:
    """Memoized :class:`PointGeometry` so repeated checks share jet evaluations."""
    return PointGeometry(g, p, order, A)


def christoffel(g: SmoothField, p: ChartPoint) -> TensorValue:
    """Christoffel symbols at p as a (2,1) value, [mu, nu, lam] = Gamma^lam_{mu nu}."""
    geo = point_geometry(g, p, 1)
    return TensorValue((2, 1), geo.dim, np.einsum("lmn->mnl", geo.chris))


def curvature_bundle(g: SmoothField, p: ChartPoint) -> CurvatureBundle:
    """Christoffel, Riemann (mixed and lowered), Ricci, scalar and Weyl at p.

    Weyl is None for d = 2 (undefined there); all other entries are always
    present.
    """
    geo = point_geometry(g, p, 2)
    d = geo.dim
    weyl = None
    if d >= 3:
        weyl = TensorValue((4, 0), d, geo.weyl)
    return CurvatureBundle(
        christoffel=TensorValue((2, 1), d, np.einsum("lmn->mnl", geo.chris)),
        riemann_mixed=TensorValue((3, 1), d, geo.riemann_mixed),
        riemann=TensorValue((4, 0), d, geo.riemann),
        ricci=TensorValue((2, 0), d, geo.ricci),
        scalar=geo.scalar,
        weyl=weyl,
    )


def covariant_derivative(t: SmoothField, g: SmoothField, p: ChartPoint) -> TensorValue:
    """D_a t at p; the new covariant index is the FIRST slot of the result.

    Works for any valence up to total rank 6; reduces to the partial
    derivative for scalars.
    """
    geo = point_geometry(g, p, 1)
    tj = t.jet(p, 1)
    ncov, ncon = t.valence
    rank = ncov + ncon
    labels = "mnkluv"
    if rank > len(labels):
        raise ValueError(f"covariant_derivative supports rank <= {len(labels)}")
    axes = labels[:rank]
    # tj.d1 has the derivative axis last; bring it first.
    out = np.moveaxis(tj.d1, -1, 0).copy()
    C = geo.chris
    for slot in range(rank):
        sub = axes[:slot] + "e" + axes[slot + 1:]
        if slot < ncov:
            # - Gamma^e_{a mu_slot} t[... e ...]
            out -= np.einsum(f"ea{axes[slot]},{sub}->a{axes}", C, tj.value)
        else:
            # + Gamma^{mu_slot}_{a e} t[... e ...]
            out += np.einsum(f"{axes[slot]}ae,{sub}->a{axes}", C, tj.value)
    return TensorValue((ncov + 1, ncon), geo.dim, out)


def two_form_laplacian(F: SmoothField, g: SmoothField, p: ChartPoint) -> TensorValue:
    """(D^2 F)_{mn} = g^{lc} D_l D_c F_{mn} for an antisymmetric (2,0) field."""
    geo = point_geometry(g, p, 2)
    if F.valence != (2, 0):
        raise ValueError("two_form_laplacian expects a (2,0) field")
    fj = F.jet(p, 2)
    if np.max(np.abs(fj.value + fj.value.T)) > 1e-12 * max(1.0, np.max(np.abs(fj.value))):
        raise ValueError("two_form_laplacian expects an antisymmetric field")
    F0 = fj.value
    dF = np.einsum("mna->amn", fj.d1)
    ddF = np.einsum("mnab->abmn", fj.d2)
    DF = geo.df_covariant(F0, dF)
    DDF = geo.ddf_covariant(F0, dF, ddF, DF)
    lap = np.einsum("lc,lcmn->mn", geo.ginv, DDF)
    return TensorValue((2, 0), geo.dim, lap)


def killing_residual(K: SmoothField, g: SmoothField, p: ChartPoint) -> float:
    """max |D_m K_n + D_n K_m| for a covector field K at p."""
    geo = point_geometry(g, p, 1)
    if K.valence != (1, 0):
        raise ValueError("killing_residual expects a (1,0) covector field")
    kj = K.jet(p, 1)
    dK = np.einsum("na->an", kj.d1)
    DK = dK - np.einsum("ean,e->an", geo.chris, kj.value)
    return float(np.max(np.abs(DK + DK.T)))


def second_bianchi_residual(g: SmoothField, p: ChartPoint) -> float:
    """Relative residual of D_{[x} R_{mn]kl} = 0 from order-3 metric jets.

    Returns max |cyclic sum| / max |R_{mnkl}| (floored), using the fully
    numerical Riemann derivative -- an independent route from any algebraic
    curvature identity.
    """
    geo = point_geometry(g, p, 3)
    DR = geo.driemann_cov
    cyc = (DR + np.einsum("nxmkl->xmnkl", DR) + np.einsum("mnxkl->xmnkl", DR))
    scale = max(float(np.max(np.abs(geo.riemann))), 1e-30)
    return float(np.max(np.abs(cyc)) / scale)
