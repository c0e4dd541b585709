"""Policy structures and risk costing.

A :class:`Layer` holds the per-claim modifiers (deductible, cover), the
aggregate modifiers (aggregate deductible/cover), reinstatements and the
participation share.  Costing produces the pure premium two ways where both
are defined: from closed-form compound moments and from a computed
aggregate loss distribution.  Premiums of excess layers with reinstatements
divide the stop-loss expectation by the expected reinstatement premium
fraction.

The frequency is quoted at an analysis threshold; severities are ground-up.
For the distribution route the claim count is thinned to the layer
deductible and the severity becomes the capped conditional excess, which
leaves the compound law unchanged for every supported count family.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field, replace

import numpy as np

from .aggregate import AggregateDistribution, compute_fft, compute_mc, compute_recursive
from .discretize import ArithmeticSeverity, discretize
from .distributions import ContinuousDistribution, DiscreteDistribution
from .errors import ParameterError, StructureError

logger = logging.getLogger("riskkit.lossmodel")

__all__ = [
    "FrequencyModel",
    "Layer",
    "PolicyStructure",
    "EngineConfig",
    "WarningRecord",
    "LayerCosting",
    "CompoundMoments",
    "cost_layer",
    "cost_policy",
    "moments",
    "build_aggregate",
    "costing_summary",
    "layer_summary",
]


@dataclass(frozen=True)
class WarningRecord:
    module: str
    message: str

    def __str__(self):
        return f"WARNING|{self.module}|{self.message}"


@dataclass(frozen=True)
class FrequencyModel:
    """Claim-count model quoted at an analysis threshold (0 = ground up)."""

    dist: DiscreteDistribution
    threshold: float = 0.0

    def __post_init__(self):
        if self.threshold < 0:
            raise ParameterError(f"analysis threshold must be >= 0, got {self.threshold}")


@dataclass(frozen=True)
class Layer:
    """One policy layer: per-claim and aggregate modifiers plus share."""

    cover: float = math.inf
    deductible: float = 0.0
    aggr_cover: float = math.inf
    aggr_deductible: float = 0.0
    n_reinst: int | None = None
    reinst_percentage: float | tuple = 1.0
    share: float = 1.0

    def __post_init__(self):
        if self.deductible < 0:
            raise StructureError(f"deductible must be >= 0, got {self.deductible}")
        if self.cover <= 0:
            raise StructureError(f"cover must be > 0, got {self.cover}")
        if self.aggr_deductible < 0:
            raise StructureError(
                f"aggregate deductible must be >= 0, got {self.aggr_deductible}"
            )
        if self.aggr_cover <= 0:
            raise StructureError(f"aggregate cover must be > 0, got {self.aggr_cover}")
        if not 0.0 < self.share <= 1.0:
            raise StructureError(f"share must be in (0, 1], got {self.share}")
        if self.n_reinst is not None:
            if self.n_reinst < 0 or self.n_reinst != int(self.n_reinst):
                raise StructureError(
                    f"number of reinstatements must be an integer >= 0, got {self.n_reinst}"
                )
            if self.cover == math.inf:
                raise StructureError("reinstatements require a finite cover")
            if self.aggr_cover != math.inf:
                raise StructureError(
                    "aggregate cover is implied by reinstatements; do not set both"
                )
            pct = np.atleast_1d(np.asarray(self.reinst_percentage, dtype=float))
            if len(pct) == 1:
                pct = np.repeat(pct, max(int(self.n_reinst), 1))
            if self.n_reinst > 0 and len(pct) != self.n_reinst:
                raise StructureError(
                    f"got {len(pct)} reinstatement percentages for {self.n_reinst} reinstatements"
                )
            if np.any((pct < 0) | (pct > 1)):
                raise StructureError("reinstatement percentages must lie in [0, 1]")
            object.__setattr__(self, "n_reinst", int(self.n_reinst))
            object.__setattr__(self, "reinst_percentage", tuple(pct))

    @property
    def effective_aggr_cover(self) -> float:
        """Explicit aggregate cover, or (K+1)c when reinstatements are set."""
        if self.n_reinst is not None:
            return (self.n_reinst + 1) * self.cover
        return self.aggr_cover

    @property
    def has_aggregate_modifiers(self) -> bool:
        return (
            self.aggr_deductible > 0
            or self.effective_aggr_cover != math.inf
            or self.n_reinst is not None
        )


@dataclass(frozen=True)
class PolicyStructure:
    layers: tuple

    def __init__(self, layers):
        if isinstance(layers, Layer):
            layers = (layers,)
        layers = tuple(layers)
        if not layers:
            raise StructureError("a policy structure needs at least one layer")
        if not all(isinstance(l, Layer) for l in layers):
            raise StructureError("policy layers must be Layer instances")
        object.__setattr__(self, "layers", layers)

    @property
    def length(self) -> int:
        return len(self.layers)


@dataclass(frozen=True)
class EngineConfig:
    """How to compute the aggregate loss distribution."""

    aggr_loss_dist_method: str | None = None  # 'fft' | 'recursive' | 'mc'
    n_aggr_dist_nodes: int = 2**17
    sev_discr_method: str = "massdispersal"
    n_sev_discr_nodes: int = 2**14
    sev_discr_step: float | None = None
    n_sim: int = 10**5
    random_state: int | None = None

    def __post_init__(self):
        if self.aggr_loss_dist_method not in (None, "fft", "recursive", "mc"):
            raise ParameterError(
                f"unknown aggregate method '{self.aggr_loss_dist_method}'"
            )


@dataclass
class LayerCosting:
    """Costing of one layer: both premium routes plus the computed law."""

    layer: Layer
    idx: int = 0
    pure_premium_closed: float | None = None
    pure_premium_dist: float | None = None
    agg: AggregateDistribution | None = None
    warnings: list = field(default_factory=list)


@dataclass(frozen=True)
class CompoundMoments:
    mean: float
    var: float
    std: float
    coeff_variation: float
    skewness: float


def _thinning_factor(freq: FrequencyModel, sev: ContinuousDistribution, d: float) -> float:
    if d < freq.threshold:
        raise StructureError(
            f"layer deductible {d} below the analysis threshold {freq.threshold}; "
            f"the frequency carries no information there"
        )
    if d == freq.threshold:
        return 1.0
    return float(sev.sf(d)) / float(sev.sf(freq.threshold))


def _severity_layer_moment(
    freq: FrequencyModel, sev: ContinuousDistribution, layer: Layer, n: int
) -> float:
    """Raw n-th moment of the per-claim payout, conditional on being counted."""
    s0 = float(sev.sf(freq.threshold)) if freq.threshold > 0 else 1.0
    return sev.censored_moment(n, layer.deductible, layer.cover) / s0


def build_aggregate(
    freq: FrequencyModel,
    sev: ContinuousDistribution,
    layer: Layer,
    engine: EngineConfig,
) -> tuple[AggregateDistribution, list]:
    """Aggregate law of the layer's retained losses (before share and
    aggregate modifiers)."""
    warnings: list[WarningRecord] = []
    method = engine.aggr_loss_dist_method
    if method is None:
        raise StructureError("engine config has no aggr_loss_dist_method")
    thinned = freq.dist.thin(_thinning_factor(freq, sev, layer.deductible))

    if method == "mc":
        agg = compute_mc(
            thinned,
            sev,
            n_sim=engine.n_sim,
            random_state=engine.random_state,
            deductible=layer.deductible,
            cover=layer.cover,
        )
        logger.info("aggregate loss distribution approximated via Monte Carlo")
        return agg, warnings

    if layer.cover == math.inf and engine.sev_discr_step is None:
        raise StructureError(
            "sev_discr_step is required for lattice methods when the cover is infinite"
        )
    arith = discretize(
        sev,
        method=engine.sev_discr_method,
        m=engine.n_sev_discr_nodes,
        h=engine.sev_discr_step,
        deductible=layer.deductible,
        cover=layer.cover,
    )
    for msg in arith.warnings:
        warnings.append(WarningRecord("discretize", msg.split("|", 1)[-1]))
    if layer.cover == math.inf:
        arith = _restore_tail_mean(arith, freq, sev, layer)

    if method == "fft":
        agg = compute_fft(thinned, arith, engine.n_aggr_dist_nodes, anti_alias=True)
        logger.info("aggregate loss distribution approximated via FFT")
    else:
        agg = compute_recursive(thinned, arith, engine.n_aggr_dist_nodes)
        logger.info("aggregate loss distribution approximated via the recursion")
    for msg in agg.warnings:
        warnings.append(WarningRecord("aggregate", msg.split("|", 1)[-1]))
    return agg, warnings


def _restore_tail_mean(
    arith: ArithmeticSeverity,
    freq: FrequencyModel,
    sev: ContinuousDistribution,
    layer: Layer,
) -> ArithmeticSeverity:
    """Top up the last node so the severity mass beyond the lattice keeps its
    mean contribution; the plain absorption keeps its probability only."""
    span = arith.h * (arith.m - 1)
    sd = float(sev.sf(layer.deductible)) if layer.deductible > 0 else 1.0
    lost = (
        sev.censored_moment(1, layer.deductible, math.inf)
        - sev.censored_moment(1, layer.deductible, span)
    ) / sd
    if lost <= 0.0:
        return arith
    fj = arith.fj.copy()
    fj[-1] += lost / span
    return replace(arith, fj=fj)


def _aggregate_premium(agg: AggregateDistribution, layer: Layer) -> float:
    """Share-free expected layer recovery from the aggregate law."""
    u = layer.effective_aggr_cover
    v = layer.aggr_deductible
    if layer.n_reinst is not None and layer.n_reinst > 0:
        c = layer.cover
        num = agg.layer_expectation(u, v)
        den = 1.0 + sum(
            l_k * agg.layer_expectation(c, (k - 1) * c + v) for k, l_k in
            enumerate(layer.reinst_percentage, start=1)
        ) / c
        return num / den
    if layer.has_aggregate_modifiers:
        return agg.layer_expectation(u, v)
    return agg.mean()


def cost_layer(
    freq: FrequencyModel,
    sev: ContinuousDistribution,
    layer: Layer,
    engine: EngineConfig | None = None,
    idx: int = 0,
) -> LayerCosting:
    """Pure premium of a layer, closed-form and/or distribution-based.

    Aggregate modifiers require a computed distribution; without an engine
    method the costing degrades to the closed form where that exists and a
    warning record otherwise, never an exception.
    """
    out = LayerCosting(layer=layer, idx=idx)

    if not layer.has_aggregate_modifiers:
        out.pure_premium_closed = (
            layer.share
            * freq.dist.mean()
            * _severity_layer_moment(freq, sev, layer, 1)
        )

    method = engine.aggr_loss_dist_method if engine is not None else None
    if method is None:
        if layer.has_aggregate_modifiers:
            msg = f"Layer {idx + 1}: costing is omitted as aggr_loss_dist_method is missing"
            logger.warning(msg)
            out.warnings.append(WarningRecord("lossmodel", msg))
        return out

    agg, warnings = build_aggregate(freq, sev, layer, engine)
    out.agg = agg
    out.warnings.extend(warnings)
    out.pure_premium_dist = layer.share * _aggregate_premium(agg, layer)
    return out


def cost_policy(
    freq: FrequencyModel,
    sev: ContinuousDistribution,
    policy: PolicyStructure,
    engine: EngineConfig | None = None,
) -> list[LayerCosting]:
    return [
        cost_layer(freq, sev, layer, engine, idx=i)
        for i, layer in enumerate(policy.layers)
    ]


def moments(
    freq: FrequencyModel,
    sev: ContinuousDistribution,
    layer: Layer = Layer(),
    engine: EngineConfig | None = None,
    use_dist: bool = True,
) -> CompoundMoments:
    """Aggregate-loss moments, from the computed law or in closed form.

    The closed form composes frequency factorial moments with censored
    severity moments and is unavailable when aggregate modifiers are
    present.
    """
    if use_dist:
        if engine is None or engine.aggr_loss_dist_method is None:
            raise StructureError("use_dist=True needs an engine configuration")
        agg, _ = build_aggregate(freq, sev, layer, engine)
        u, v, a = layer.effective_aggr_cover, layer.aggr_deductible, layer.share
        if layer.has_aggregate_modifiers:
            e1 = agg.layer_expectation(u, v, 1)
            e2 = agg.layer_expectation(u, v, 2)
            e3 = agg.layer_expectation(u, v, 3)
            mean, var = e1, e2 - e1**2
            mu3 = e3 - 3 * e1 * e2 + 2 * e1**3
            mean, var, mu3 = a * mean, a**2 * var, a**3 * mu3
        else:
            mean, var = a * agg.mean(), a**2 * agg.var()
            mu3 = a**3 * agg.moment(3, central=True)
    else:
        if layer.has_aggregate_modifiers:
            raise StructureError(
                "closed-form moments are not available with aggregate coverage modifiers"
            )
        s1 = _severity_layer_moment(freq, sev, layer, 1)
        s2 = _severity_layer_moment(freq, sev, layer, 2)
        s3 = _severity_layer_moment(freq, sev, layer, 3)
        f = freq.dist
        n1, vn = f.mean(), f.var()
        mu3n = f.raw_moment(3) - 3 * n1 * f.raw_moment(2) + 2 * n1**3
        a = layer.share
        mean = a * n1 * s1
        var = a**2 * (n1 * (s2 - s1**2) + vn * s1**2)
        mu3 = a**3 * (
            n1 * (s3 - 3 * s1 * s2 + 2 * s1**3)
            + 3 * vn * s1 * (s2 - s1**2)
            + mu3n * s1**3
        )
    std = math.sqrt(var)
    return CompoundMoments(
        mean=mean,
        var=var,
        std=std,
        coeff_variation=std / mean,
        skewness=mu3 / var**1.5,
    )


# ---------------------------------------------------------------------------
# fixed-width reporting
# ---------------------------------------------------------------------------


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        if value == math.inf:
            return "inf"
        if value == int(value) and abs(value) < 1e15:
            return str(int(value))
        return f"{value:g}"
    return str(value)


def _table(title: str, rows: list[tuple[str, str]]) -> str:
    width = 74
    lines = [title.center(width), "=" * width]
    lines.append(f"{'Quantity':>52}{'Value':>18}")
    lines.append("=" * width)
    for name, value in rows:
        lines.append(f"{name:>52}{value:>18}")
    return "\n".join(lines)


def layer_summary(layer: Layer, idx: int = 0) -> str:
    """Fixed-width recap of one layer's structure."""
    rows = [
        ("Deductible", _fmt(layer.deductible)),
        ("Cover", _fmt(layer.cover)),
        ("Aggregate deductible", _fmt(layer.aggr_deductible)),
    ]
    if layer.n_reinst is not None:
        rows.append(("Reinstatements (no.)", _fmt(layer.n_reinst)))
        for k, l_k in enumerate(layer.reinst_percentage, start=1):
            rows.append((f"Reinst. layer percentage {k}", _fmt(l_k)))
    else:
        rows.append(("Aggregate cover", _fmt(layer.aggr_cover)))
    rows.append(("Share participation", _fmt(layer.share)))
    return _table(f"Policy Structure Summary: layer {idx + 1}", rows)


def costing_summary(costing: LayerCosting) -> str:
    """Fixed-width recap of a layer costing, premiums at two decimals."""
    layer = costing.layer
    rows = [
        ("Cover", _fmt(layer.cover)),
        ("Deductible", _fmt(layer.deductible)),
        ("Aggregate cover", _fmt(layer.effective_aggr_cover)),
        ("Aggregate deductible", _fmt(layer.aggr_deductible)),
    ]
    if layer.n_reinst is not None:
        rows.append(("Reinstatements (no.)", _fmt(layer.n_reinst)))
        for k, l_k in enumerate(layer.reinst_percentage, start=1):
            rows.append((f"Reinst. layer percentage {k}", _fmt(l_k)))
    share = layer.share
    if costing.pure_premium_dist is not None:
        rows.append(
            ("Pure premium (dist est.) before share", f"{costing.pure_premium_dist / share:.2f}")
        )
    if costing.pure_premium_closed is not None:
        rows.append(
            ("Pure premium before share", f"{costing.pure_premium_closed / share:.2f}")
        )
    rows.append(("Share participation", _fmt(share)))
    if costing.pure_premium_dist is not None:
        rows.append(("Pure premium (dist est.)", f"{costing.pure_premium_dist:.2f}"))
    if costing.pure_premium_closed is not None:
        rows.append(("Pure premium", f"{costing.pure_premium_closed:.2f}"))
    return _table(f"Costing Summary: Layer {costing.idx + 1}", rows)
