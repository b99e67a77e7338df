"""Objective functions whose minimizations define the decoding exponent.

Two primal objectives drive everything: a reference-anchored one (the
conditional divergence from the channel plus a weighted divergence
combination to a reference joint law) and a rate-anchored one (the same
conditional divergence, minus mutual information, plus the rate). The
exponent at a given rate is the iterated minimum of their pointwise
maximum. The slope form replaces the maximum by a Lagrangian tilt with
slope ``rho`` and cost multiplier ``eta``; it is what the closed-form
update families in :mod:`cdexp.updates` minimize exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp

from .core import (
    Channel,
    DivergenceWeights,
    InvalidInputError,
    InvalidParameterError,
    JointDistribution,
    _log,
    divergence_combination,
    mutual_information,
)

__all__ = [
    "RateConstraintPoint",
    "GradientPoint",
    "channel_divergence",
    "divergence_objective",
    "rate_objective",
    "exponent_objective",
    "slope_objective",
    "gallager_e0_neg",
    "min_exponent_objective",
]


@dataclass(frozen=True)
class RateConstraintPoint:
    """A target rate (nats per use) with an optional average-cost bound."""

    rate: float
    alpha: float | None = None

    def __post_init__(self):
        if not (math.isfinite(self.rate) and self.rate >= 0):
            raise InvalidParameterError(f"rate must be finite and >= 0, got {self.rate!r}")
        if self.alpha is not None and not math.isfinite(self.alpha):
            raise InvalidParameterError(f"alpha must be finite when given, got {self.alpha!r}")


@dataclass(frozen=True)
class GradientPoint:
    """A slope ``rho`` in [0, 1) paired with a cost multiplier ``eta`` >= 0."""

    rho: float
    eta: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.rho) and 0.0 <= self.rho < 1.0):
            raise InvalidParameterError(f"rho must lie in [0, 1), got {self.rho!r}")
        if not (math.isfinite(self.eta) and self.eta >= 0.0):
            raise InvalidParameterError(f"eta must be finite and >= 0, got {self.eta!r}")


def channel_divergence(qw: JointDistribution, channel: Channel) -> float:
    """Conditional divergence of the joint's channel from ``channel``.

    This is the divergence of the forward conditional from the channel's
    transition law, averaged over the joint's input marginal. Computed
    straight from the joint matrix so no conditional rounding enters.
    Returns ``inf`` when the joint puts mass where the channel cannot.
    """
    if qw.joint.shape != channel.transition.shape:
        raise InvalidInputError("joint shape must match the channel")
    mu = qw.joint
    denom = qw.input_marginal[:, None] * channel.transition
    mask = mu > 0
    if np.any(denom[mask] == 0.0):
        return math.inf
    mm = mu[mask]
    return float(np.sum(mm * (np.log(mm) - np.log(denom[mask]))))


def divergence_objective(
    qw: JointDistribution,
    ref: JointDistribution,
    weights: DivergenceWeights,
    channel: Channel,
) -> float:
    """Reference-anchored objective: channel divergence plus the weighted combination."""
    d = channel_divergence(qw, channel)
    if math.isinf(d):
        return math.inf
    comb = divergence_combination(qw, ref, weights)
    return d + comb


def rate_objective(qw: JointDistribution, channel: Channel, rate: float) -> float:
    """Rate-anchored objective: channel divergence minus mutual information plus the rate."""
    if not (math.isfinite(rate) and rate >= 0):
        raise InvalidParameterError(f"rate must be finite and >= 0, got {rate!r}")
    d = channel_divergence(qw, channel)
    if math.isinf(d):
        return math.inf
    return d - mutual_information(qw) + rate


def exponent_objective(
    qw: JointDistribution,
    ref: JointDistribution,
    weights: DivergenceWeights,
    channel: Channel,
    rate: float,
) -> float:
    """Pointwise maximum of the reference-anchored and rate-anchored objectives."""
    if not (math.isfinite(rate) and rate >= 0):
        raise InvalidParameterError(f"rate must be finite and >= 0, got {rate!r}")
    d = channel_divergence(qw, channel)
    if math.isinf(d):
        return math.inf
    f1 = d + divergence_combination(qw, ref, weights)
    f2 = d - mutual_information(qw) + rate
    return max(f1, f2)


def slope_objective(
    point: GradientPoint,
    qw: JointDistribution,
    ref: JointDistribution,
    weights: DivergenceWeights,
    channel: Channel,
) -> float:
    """Tilted objective at a fixed slope and cost multiplier.

    Equals the channel divergence, minus ``rho`` times the mutual
    information, plus ``eta`` times the expected cost, plus ``1 - rho``
    times the divergence combination to the reference. Affine in
    ``(rho, eta)`` for a fixed pair of joint laws. Requires a cost on
    the channel whenever ``eta > 0``.
    """
    if point.eta > 0 and channel.cost is None:
        raise InvalidInputError("eta > 0 requires a channel with a cost function")
    d = channel_divergence(qw, channel)
    if math.isinf(d):
        return math.inf
    value = d - point.rho * mutual_information(qw)
    if point.eta > 0:
        value += point.eta * qw.expected_cost(channel.cost)
    if point.rho < 1.0:
        comb = divergence_combination(qw, ref, weights)
        if math.isinf(comb):
            return math.inf
        value += (1.0 - point.rho) * comb
    return value


def gallager_e0_neg(rho: float, input_law, channel: Channel) -> float:
    """Gallager-style exponent function at negative argument, in nats.

    For slope ``rho`` in [0, 1) and an input law q this is
    ``-log sum_y (sum_x q(x) P(y|x)^(1/(1-rho)))^(1-rho)``,
    always <= 0, equal to 0 at ``rho = 0``. It coincides with the fully
    minimized slope objective when the divergence combination pins the
    input marginal to q and nothing else.
    """
    if not (math.isfinite(rho) and 0.0 <= rho < 1.0):
        raise InvalidParameterError(f"rho must lie in [0, 1), got {rho!r}")
    q = np.asarray(input_law, dtype=float)
    if q.ndim != 1 or q.shape[0] != channel.num_inputs:
        raise InvalidInputError("input law length must match the channel input alphabet")
    if np.any(q < 0) or abs(q.sum() - 1.0) > 1e-9:
        raise InvalidInputError("input law must be a probability vector")
    lq = _log(q)
    lp = channel.log_transition
    with np.errstate(invalid="ignore"):
        inner = logsumexp(lq[:, None] + lp / (1.0 - rho), axis=0)
    total = logsumexp((1.0 - rho) * inner)
    return float(-total)


def min_exponent_objective(
    ref: JointDistribution,
    weights: DivergenceWeights,
    channel: Channel,
    point: RateConstraintPoint,
    *,
    dual_tol: float = 1e-10,
    rho_cap: float = 1.0 - 1e-6,
    eta_max: float = 1e3,
) -> tuple[float, JointDistribution]:
    """Minimize the exponent objective over joint laws for one reference.

    Returns the minimum value and a minimizing joint law, subject to the
    optional average-cost constraint carried by ``point``. Solved through
    the concave dual over ``(rho, eta)``; weight combinations realized by
    the closed-form update families use the exact inner minimizer, any
    other combination falls back to a convergent descent inner solver.

    Raises ``InfeasibleError`` when the cost constraint is unsatisfiable
    and ``DegenerateReferenceError`` when the reference shares no support
    with the channel.
    """
    from .solvers import inner_step_fixed_rate

    step = inner_step_fixed_rate(
        ref,
        channel,
        weights=weights,
        rate=point.rate,
        alpha=point.alpha,
        dual_tol=dual_tol,
        rho_cap=rho_cap,
        eta_max=eta_max,
    )
    return step.value, step.joint
