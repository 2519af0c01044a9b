"""Charts, dense tensor values, smooth fields and index algebra.

Everything downstream works with plain ``numpy`` arrays indexed in the
textual order of the symbol they represent, covariant slots first.  A
metric value is a ``(d, d)`` array ``g[mu, nu]``; a co-vector field
evaluates to a ``(d,)`` array; and so on.  Derivative information is
carried by :class:`FieldJet` objects whose partial-derivative axes are
appended *after* the component axes::

    fj.value[mu, nu]        g_{mu nu}
    fj.d1[mu, nu, a]        d_a g_{mu nu}
    fj.d2[mu, nu, a, b]     d_a d_b g_{mu nu}

(the curvature module transposes these once into derivative-first layout,
which reads better in Christoffel/Riemann formulas).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Mapping, Optional, Sequence, Tuple

import numpy as np

from . import jets
from .jets import Jet

__all__ = [
    "ChartPoint",
    "Domain",
    "SignatureMatrix",
    "TensorValue",
    "FieldJet",
    "SmoothField",
    "DerivedTwoForm",
    "ScaledField",
    "DegenerateMetricError",
    "EvaluationError",
    "jet_eval",
    "metric_inverse",
    "contract",
    "antisym_pair",
]

#: Scale-aware degeneracy threshold for metric inversion: reject when the
#: inverse's largest entry exceeds this multiple of the input's largest entry.
INVERSE_GROWTH_LIMIT = 1e12


class EvaluationError(ValueError):
    """A field produced a non-finite component (at/near a singular locus)."""


class DegenerateMetricError(ValueError):
    """Metric too close to degenerate for a trustworthy inverse."""


@dataclass(frozen=True)
class ChartPoint:
    """A point of a coordinate chart on R^d."""

    coords: Tuple[float, ...]

    def __post_init__(self):
        coords = tuple(float(c) for c in self.coords)
        object.__setattr__(self, "coords", coords)
        if len(coords) < 2:
            raise ValueError("chart points need dimension >= 2")
        if not all(np.isfinite(coords)):
            raise ValueError(f"non-finite coordinates: {coords}")

    @property
    def dim(self) -> int:
        return len(self.coords)

    def array(self) -> np.ndarray:
        return np.asarray(self.coords)


@dataclass(frozen=True)
class Domain:
    """Validity region of a chart: a sampling box plus an exclusion predicate.

    ``predicate`` must be pure; it returns False on (a margin around)
    singular loci such as vanishing conformal denominators, warp-factor
    zeros or metric gaps.  ``box`` bounds the region from which sample
    points are drawn.
    """

    predicate: Callable[[ChartPoint], bool]
    margin: float
    box: Tuple[Tuple[float, float], ...]

    def __contains__(self, p: ChartPoint) -> bool:
        return bool(self.predicate(p))

    def contains(self, p: ChartPoint) -> bool:
        return bool(self.predicate(p))

    @property
    def dim(self) -> int:
        return len(self.box)


@dataclass(frozen=True)
class SignatureMatrix:
    """A diagonal +/-1 matrix; ``index`` counts the -1 entries."""

    diag: Tuple[int, ...]

    def __post_init__(self):
        diag = tuple(int(e) for e in self.diag)
        object.__setattr__(self, "diag", diag)
        if any(e not in (1, -1) for e in diag):
            raise ValueError(f"signature entries must be +1 or -1, got {diag}")

    @staticmethod
    def with_index(dim: int, index: int) -> "SignatureMatrix":
        """The standard form with ``index`` minus signs first."""
        if not 0 <= index <= dim:
            raise ValueError(f"signature index must lie in 0..{dim}, got {index}")
        return SignatureMatrix((-1,) * index + (1,) * (dim - index))

    @property
    def dim(self) -> int:
        return len(self.diag)

    @property
    def index(self) -> int:
        return sum(1 for e in self.diag if e == -1)

    def matrix(self) -> np.ndarray:
        return np.diag(np.asarray(self.diag, dtype=float))


@dataclass(frozen=True)
class TensorValue:
    """Dense components of a tensor at a point.

    ``valence = (p, q)`` means p covariant slots followed by q contravariant
    slots (so a metric is (2, 0), its inverse (0, 2), a Christoffel value
    (2, 1) laid out as ``[mu, nu, lam] = Gamma^lam_{mu nu}``);
    ``components`` has one axis of length ``dim`` per slot.
    """

    valence: Tuple[int, int]
    dim: int
    components: np.ndarray

    def __post_init__(self):
        comp = np.asarray(self.components, dtype=float)
        object.__setattr__(self, "components", comp)
        p, q = self.valence
        if comp.shape != (self.dim,) * (p + q):
            raise ValueError(
                f"components shape {comp.shape} does not match valence {self.valence} in dim {self.dim}"
            )

    @property
    def rank(self) -> int:
        return self.valence[0] + self.valence[1]

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.components))) if self.components.size else 0.0


class FieldJet:
    """Stacked value/derivative arrays of a tensor-valued field at a point.

    Derivative axes come after component axes, see module docstring.
    Mixed partials are exactly symmetric because they are produced by
    :class:`~kkforms.jets.Jet` arithmetic.
    """

    __slots__ = ("dim", "shape", "order", "value", "d1", "d2", "d3")

    def __init__(self, dim, shape, order, value, d1=None, d2=None, d3=None):
        self.dim = dim
        self.shape = shape
        self.order = order
        self.value = value
        self.d1 = d1
        self.d2 = d2
        self.d3 = d3

    @staticmethod
    def from_jets(dim: int, shape: Tuple[int, ...], order: int, items: np.ndarray) -> "FieldJet":
        value = np.empty(shape)
        d1 = np.empty(shape + (dim,)) if order >= 1 else None
        d2 = np.empty(shape + (dim, dim)) if order >= 2 else None
        d3 = np.empty(shape + (dim, dim, dim)) if order >= 3 else None
        for idx in np.ndindex(shape) if shape else ((),):
            j = items[idx] if shape else items[()]
            if not isinstance(j, Jet):
                j = Jet.constant(float(j), dim, order)
            value[idx] = j.f
            if order >= 1:
                d1[idx] = j.d1
            if order >= 2:
                d2[idx] = j.d2
            if order >= 3:
                d3[idx] = j.d3
        return FieldJet(dim, shape, order, value, d1, d2, d3)

    def check_finite(self, name: str = "field") -> "FieldJet":
        for arr in (self.value, self.d1, self.d2, self.d3):
            if arr is not None and not np.all(np.isfinite(arr)):
                raise EvaluationError(f"{name} evaluated to non-finite components")
        return self


class SmoothField:
    """A tensor-valued field given by closed-form component expressions.

    ``builder(xs)`` receives one :class:`~kkforms.jets.Jet` per coordinate
    and returns a nested sequence (matching ``shape``) of jets or plain
    numbers.  Because components are built from jet arithmetic, the partial
    derivatives returned by :meth:`jet` are exact up to rounding.
    """

    def __init__(self, dim, valence, builder, name="", max_order=3, shape=None):
        self.dim = int(dim)
        self.valence = tuple(valence)
        # Rectangular component arrays (block sub-matrices of a larger metric)
        # may override the square default; such fields are plain component
        # grids rather than tensors on the chart.
        self.shape = (self.dim,) * (self.valence[0] + self.valence[1]) if shape is None else tuple(shape)
        self.builder = builder
        self.name = name
        self.max_order = max_order

    def jet(self, p: ChartPoint, order: int) -> FieldJet:
        if not isinstance(order, int) or not 0 <= order <= 3:
            raise ValueError(f"jet order must be an integer in 0..3, got {order!r}")
        if order > self.max_order:
            raise ValueError(
                f"field {self.name or '<anonymous>'} provides jets up to order {self.max_order}, requested {order}"
            )
        if p.dim != self.dim:
            raise ValueError(f"point dimension {p.dim} does not match field dimension {self.dim}")
        xs = [Jet.variable(c, i, self.dim, order) for i, c in enumerate(p.coords)]
        raw = self.builder(xs)
        items = np.empty(self.shape, dtype=object)
        if self.shape:
            arr = np.asarray(raw, dtype=object)
            if arr.shape != self.shape:
                raise ValueError(
                    f"builder for {self.name or '<anonymous>'} returned shape {arr.shape}, expected {self.shape}"
                )
            items[...] = arr
        else:
            items[()] = raw
        return FieldJet.from_jets(self.dim, self.shape, order, items).check_finite(self.name or "field")

    def __call__(self, p: ChartPoint) -> np.ndarray:
        return self.jet(p, 0).value

    @staticmethod
    def constant(dim: int, valence: Tuple[int, int], components: np.ndarray, name: str = "") -> "SmoothField":
        comp = np.array(components, dtype=float)

        def builder(xs, _c=comp):
            return _c.tolist() if _c.shape else float(_c)

        return SmoothField(dim, valence, builder, name=name)


def _scale_components(raw, factor):
    if isinstance(raw, (list, tuple)):
        return [_scale_components(v, factor) for v in raw]
    if isinstance(raw, np.ndarray):
        return raw * factor
    return factor * raw


class ScaledField(SmoothField):
    """A smooth field multiplied by an exact constant (used for g -> -g).

    The factor is applied in the builder itself, so consumers that compose
    builders (block assembly, extensions) see the scaled components; the
    :meth:`jet` override is equivalent and skips the per-leaf arithmetic.
    """

    def __init__(self, base: SmoothField, factor: float, name: str = ""):
        factor = float(factor)

        def builder(xs, _b=base.builder, _f=factor):
            return _scale_components(_b(xs), _f)

        super().__init__(base.dim, base.valence, builder,
                         name=name or f"{factor}*{base.name}", max_order=base.max_order,
                         shape=base.shape)
        self.base = base
        self.factor = factor

    def jet(self, p: ChartPoint, order: int) -> FieldJet:
        fj = self.base.jet(p, order)
        c = self.factor
        return FieldJet(
            fj.dim, fj.shape, fj.order, c * fj.value,
            None if fj.d1 is None else c * fj.d1,
            None if fj.d2 is None else c * fj.d2,
            None if fj.d3 is None else c * fj.d3,
        )


class DerivedTwoForm(SmoothField):
    """The curl F_{mu nu} = d_mu A_nu - d_nu A_mu of a co-vector field.

    Component derivatives are sliced out of the potential's higher jets, so
    an order-2 jet of F costs one order-3 jet of A.  Order 3 of F would need
    order 4 of A and is rejected.
    """

    def __init__(self, potential: SmoothField, name: str = ""):
        if potential.valence != (1, 0):
            raise ValueError("potential must be a (1,0) co-vector field")
        super().__init__(potential.dim, (2, 0), builder=None,
                         name=name or f"curl({potential.name})", max_order=min(2, potential.max_order - 1))
        self.potential = potential

    def jet(self, p: ChartPoint, order: int) -> FieldJet:
        if order > self.max_order:
            raise ValueError(f"two-form jets available up to order {self.max_order}, requested {order}")
        aj = self.potential.jet(p, order + 1)
        # a.d1[nu, mu] = d_mu A_nu, so F[mu, nu] = a.d1[nu, mu] - a.d1[mu, nu]
        value = aj.d1.T - aj.d1
        d1 = d2 = None
        if order >= 1:
            # d_a F_{mu nu} = A.d2[nu, mu, a] - A.d2[mu, nu, a]
            d1 = aj.d2.transpose(1, 0, 2) - aj.d2
        if order >= 2:
            d2 = aj.d3.transpose(1, 0, 2, 3) - aj.d3
        return FieldJet(self.dim, self.shape, order, value, d1, d2, None)


def jet_eval(field: SmoothField, p: ChartPoint, order: int) -> FieldJet:
    """Evaluate ``field`` and all its partial derivatives up to ``order``."""
    return field.jet(p, order)


def metric_inverse(gval) -> TensorValue:
    """Invert a symmetric nondegenerate metric value g_{mu nu} into g^{mu nu}.

    Raises :class:`DegenerateMetricError` when the inverse's largest entry
    exceeds ``INVERSE_GROWTH_LIMIT`` times the input's largest entry -- a
    cheap, scale-aware conditioning proxy that flags sampling too close to
    a metric degeneracy.
    """
    if isinstance(gval, TensorValue):
        if gval.valence != (2, 0):
            raise ValueError(f"metric_inverse expects a (2,0) metric value, got valence {gval.valence}")
        mat = gval.components
        dim = gval.dim
    else:
        mat = np.asarray(gval, dtype=float)
        dim = mat.shape[0]
    if mat.shape != (dim, dim):
        raise ValueError(f"metric must be square, got shape {mat.shape}")
    if not np.allclose(mat, mat.T, rtol=1e-9, atol=1e-12 * max(1.0, np.max(np.abs(mat)))):
        raise ValueError("metric_inverse expects a symmetric matrix")
    scale = np.max(np.abs(mat))
    if scale == 0.0:
        raise DegenerateMetricError("zero metric")
    try:
        inv = np.linalg.inv(mat)
    except np.linalg.LinAlgError as exc:
        raise DegenerateMetricError(f"singular metric: {exc}") from exc
    if np.max(np.abs(inv)) > INVERSE_GROWTH_LIMIT * scale or not np.all(np.isfinite(inv)):
        raise DegenerateMetricError(
            "metric too close to degenerate (inverse grew beyond the conditioning threshold)"
        )
    inv = 0.5 * (inv + inv.T)
    return TensorValue((0, 2), dim, inv)


def _slot_variance(valence: Tuple[int, int], slot: int) -> str:
    p, q = valence
    if not 0 <= slot < p + q:
        raise ValueError(f"slot {slot} out of range for valence {valence}")
    return "cov" if slot < p else "con"


def contract(t: TensorValue, slot_a: int, slot_b: int, metric: Optional[TensorValue] = None) -> TensorValue:
    """Contract two slots of a tensor value.

    Opposite-variance slots are traced directly.  Same-variance slots need
    ``metric``: the inverse metric g^{mu nu} (valence (0,2)) for two
    covariant slots, the metric g_{mu nu} ((2,0)) for two contravariant
    slots.
    """
    if slot_a == slot_b:
        raise ValueError("contraction slots must be distinct")
    a, b = sorted((slot_a, slot_b))
    va, vb = _slot_variance(t.valence, a), _slot_variance(t.valence, b)
    comp = t.components
    if va != vb:
        out = np.trace(comp, axis1=a, axis2=b)
    else:
        if metric is None:
            raise ValueError("contracting same-variance slots requires a metric")
        want = (0, 2) if va == "cov" else (2, 0)
        if isinstance(metric, TensorValue):
            if metric.valence != want:
                raise ValueError(f"need metric of valence {want} for {va}/{vb} contraction")
            m = metric.components
        else:
            m = np.asarray(metric, dtype=float)
        moved = np.moveaxis(comp, (a, b), (-2, -1))
        out = np.einsum("...ab,ab->...", moved, m)
    p, q = t.valence
    removed_cov = (va == "cov") + (vb == "cov")
    removed_con = (va == "con") + (vb == "con")
    return TensorValue((p - removed_cov, q - removed_con), t.dim, out)


def antisym_pair(t: TensorValue, slot_a: int, slot_b: int) -> TensorValue:
    """Antisymmetrize a pair of same-variance slots: (t_ab - t_ba) / 2."""
    if slot_a == slot_b:
        raise ValueError("antisymmetrization slots must be distinct")
    if _slot_variance(t.valence, slot_a) != _slot_variance(t.valence, slot_b):
        raise ValueError("antisym_pair slots must have the same variance")
    comp = t.components
    return TensorValue(t.valence, t.dim, 0.5 * (comp - np.swapaxes(comp, slot_a, slot_b)))
