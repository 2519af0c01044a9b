"""One-dimensional extension of a solution and its flatness certificate.

A solution ``(g, A)`` in dimension d extends to a metric in d+1 dimensions,

    ghat = [[ g + eps * A A^T , eps * A ],
            [    eps * A^T    ,   eps   ]],

where ``eps`` (+1 or -1) is the signature of the added direction and the
extra coordinate is cyclic (nothing depends on it).  The defining property
of the solution system is that this extension is conformally flat: its Weyl
tensor vanishes identically for exactly one choice of ``eps`` per branch.
``weyl_vanishing`` measures that pointwise; ``reduce`` recovers the original
fields.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Tuple

import numpy as np

from .curvature import point_geometry
from .tensors import ChartPoint, SmoothField

__all__ = ["LiftedMetric", "WeylReport", "lift", "weyl_vanishing", "reduce"]


@dataclass(frozen=True, eq=False)
class LiftedMetric:
    """A (d+1)-dimensional extension, keeping references to its base data.

    ``independent`` records that the assembled metric does not depend on the
    extra coordinate; it is true by construction for metrics built by
    :func:`lift` (their component jets along the last axis vanish exactly).
    """

    base_metric: SmoothField
    base_potential: SmoothField
    eps_d: int
    metric: SmoothField
    independent: bool = True

    @property
    def dim(self) -> int:
        return self.metric.dim

    def extend_point(self, p: ChartPoint, fiber: float = 0.0) -> ChartPoint:
        """Attach a value of the cyclic coordinate to a base point."""
        if p.dim != self.dim - 1:
            raise ValueError(f"expected a base point of dimension {self.dim - 1}, got {p.dim}")
        return ChartPoint(p.coords + (float(fiber),))


@dataclass(frozen=True, eq=False)
class WeylReport:
    """Pointwise maxima of the extension's Weyl tensor over a point set."""

    abs_max: float
    rel_max: float
    points: int


def lift(g: SmoothField, A: SmoothField, eps_d: int = 1) -> LiftedMetric:
    """Extend ``(g, A)`` by one cyclic direction of signature ``eps_d``.

    Rejects bases of dimension < 3: a three-dimensional extension has
    identically vanishing Weyl tensor, so the flatness certificate would be
    vacuous there.
    """
    if eps_d not in (1, -1):
        raise ValueError(f"eps_d must be +1 or -1, got {eps_d}")
    if g.valence != (2, 0) or A.valence != (1, 0):
        raise ValueError("lift needs a (2,0) metric and a (1,0) potential")
    if g.dim != A.dim:
        raise ValueError(f"metric dimension {g.dim} does not match potential dimension {A.dim}")
    d = g.dim
    if d < 3:
        raise ValueError(
            f"base dimension must be >= 3 (the Weyl tensor of a {d + 1}-dimensional "
            f"extension vanishes identically, so the certificate would be empty)")
    eps = float(eps_d)

    def builder(xs, _gb=g.builder, _ab=A.builder, _e=eps, _d=d):
        base = xs[:_d]
        G = _gb(base)
        Av = _ab(base)
        rows = []
        for m in range(_d):
            rows.append([G[m][n] + _e * Av[m] * Av[n] for n in range(_d)] + [_e * Av[m]])
        rows.append([_e * Av[n] for n in range(_d)] + [_e])
        return rows

    metric = SmoothField(d + 1, (2, 0), builder, name=f"extension of {g.name or 'g'}")
    return LiftedMetric(g, A, eps_d, metric)


def weyl_vanishing(lifted: LiftedMetric, points: Iterable[ChartPoint],
                   fiber: float = 0.0) -> WeylReport:
    """Maximum of the extension's Weyl tensor over base points.

    Points of base dimension are extended by ``fiber``; points already of
    full dimension are used as given.  The relative reading divides by the
    largest Riemann component at the same point.
    """
    abs_max = 0.0
    rel_max = 0.0
    count = 0
    for p in points:
        q = lifted.extend_point(p, fiber) if p.dim == lifted.dim - 1 else p
        if q.dim != lifted.dim:
            raise ValueError(f"point dimension {q.dim} does not match extension dimension {lifted.dim}")
        geo = point_geometry(lifted.metric, q, 2, None)
        w = float(np.abs(geo.weyl).max())
        scale = max(float(np.abs(geo.riemann).max()), 1e-30)
        abs_max = max(abs_max, w)
        rel_max = max(rel_max, w / scale)
        count += 1
    return WeylReport(abs_max, rel_max, count)


def reduce(lifted: LiftedMetric) -> Tuple[SmoothField, SmoothField, int]:
    """Recover the base fields of an extension.

    The stored references are returned exactly (no re-derivation); only
    extensions whose metric is independent of the cyclic coordinate reduce.
    """
    if not lifted.independent:
        raise ValueError("cannot reduce an extension that depends on the cyclic coordinate")
    return lifted.base_metric, lifted.base_potential, lifted.eps_d
