"""Closed-form minimizers of the slope objective for two parameter families.

Minimizing the slope objective over all joint laws is a convex problem,
and for two families of divergence weightings the minimizer has an exact
closed form. Writing the objective as

    A * sum(mu log mu) + B * sum(mu log Q) + C * sum(mu log T) - sum(mu log Gamma)

with ``A = (1-rho)(1 + t2 + t4)``, ``B = (1-rho)(t1 - t2 - 1)``,
``C = rho + (1-rho)(t3 - t4)`` and ``Gamma`` collecting the cost-tilted
channel together with the reference factors, the two solvable families
are exactly the weightings that kill one of the two implicit-marginal
terms:

* family A: ``B = 0``, i.e. ``t1 = t2 + 1``. Slots ``a, b >= 0`` encode
  the reference output-marginal and reverse-conditional exponents; the
  canonical member is ``t = (1, 0, a/(1-rho), b/(1-rho))``.
* family B: ``C = 0``, i.e. ``t4 = t3 + rho/(1-rho)`` (needs ``rho > 0``).
  Slots ``a, c >= 0`` encode the reference forward-conditional and
  input-marginal exponents; the canonical member is
  ``t = (c/(1-rho), a/(1-rho), 0, rho/(1-rho))``.

All kernels work in the log domain; zero-probability reference factors
with positive exponent kill the corresponding cells, which is the
correct limit of the finite-entry formula.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.special import logsumexp

from .core import (
    Channel,
    DegenerateReferenceError,
    DivergenceWeights,
    InvalidInputError,
    InvalidParameterError,
    JointDistribution,
    _log,
)
from .objectives import GradientPoint

__all__ = [
    "TiltedChannel",
    "FamilyAParams",
    "FamilyBParams",
    "UpdateResult",
    "family_a_slots",
    "family_b_slots",
    "update_family_a",
    "update_family_b",
    "e0_family_a",
    "e0_family_b",
]

# Tolerance for recognizing a weighting as a member of a family.
_FIBER_TOL = 1e-9


@dataclass(frozen=True)
class TiltedChannel:
    """Log-domain cell weights of a channel tilted by a cost multiplier.

    ``log_weights[i, j] = log P(j|i) - eta * cost(i)``; entries are
    ``-inf`` exactly where the channel transition vanishes.
    """

    log_weights: np.ndarray

    def __post_init__(self):
        lw = np.asarray(self.log_weights, dtype=float)
        if lw.ndim != 2 or np.any(np.isnan(lw)) or np.any(lw == np.inf):
            raise InvalidInputError("log weights must be a 2-d array in [-inf, inf)")
        lw = lw.copy()
        lw.setflags(write=False)
        object.__setattr__(self, "log_weights", lw)

    @classmethod
    def build(cls, channel: Channel, eta: float = 0.0) -> "TiltedChannel":
        if not (math.isfinite(eta) and eta >= 0):
            raise InvalidParameterError(f"eta must be finite and >= 0, got {eta!r}")
        lw = channel.log_transition
        if eta > 0:
            lw = lw - eta * channel.require_cost()[:, None]
        return cls(lw)


@dataclass(frozen=True)
class FamilyAParams:
    """Slots ``(a, b)`` of the output-anchored closed-form family; any a, b >= 0."""

    a: float
    b: float

    def __post_init__(self):
        for name in ("a", "b"):
            v = getattr(self, name)
            if not (isinstance(v, (int, float)) and math.isfinite(v) and v >= 0):
                raise InvalidParameterError(f"family A slot {name} must be finite and >= 0, got {v!r}")
            object.__setattr__(self, name, float(v))

    def weights_at(self, rho: float) -> DivergenceWeights:
        """The canonical divergence weighting this family realizes at slope ``rho``."""
        if not (0.0 <= rho < 1.0):
            raise InvalidParameterError(f"rho must lie in [0, 1), got {rho!r}")
        s = 1.0 - rho
        return DivergenceWeights(1.0, 0.0, self.a / s, self.b / s)


@dataclass(frozen=True)
class FamilyBParams:
    """Slots ``(a, c)`` of the input-anchored closed-form family; any a, c >= 0."""

    a: float
    c: float

    def __post_init__(self):
        for name in ("a", "c"):
            v = getattr(self, name)
            if not (isinstance(v, (int, float)) and math.isfinite(v) and v >= 0):
                raise InvalidParameterError(f"family B slot {name} must be finite and >= 0, got {v!r}")
            object.__setattr__(self, name, float(v))

    def weights_at(self, rho: float) -> DivergenceWeights:
        """The canonical divergence weighting this family realizes at slope ``rho`` > 0."""
        if not (0.0 < rho < 1.0):
            raise InvalidParameterError(f"family B needs rho in (0, 1), got {rho!r}")
        s = 1.0 - rho
        return DivergenceWeights(self.c / s, self.a / s, 0.0, rho / s)


def family_a_slots(weights: DivergenceWeights, rho: float) -> FamilyAParams:
    """Slots realizing ``weights`` at slope ``rho`` within family A.

    Requires ``t1 = t2 + 1``; the slots are ``a = (t2 + t3)(1 - rho)``
    and ``b = (t2 + t4)(1 - rho)``.
    """
    if not (0.0 <= rho < 1.0):
        raise InvalidParameterError(f"rho must lie in [0, 1), got {rho!r}")
    if abs(weights.t1 - weights.t2 - 1.0) > _FIBER_TOL:
        raise InvalidParameterError(
            f"weights {weights.as_tuple()} are not in family A (need t1 = t2 + 1)"
        )
    s = 1.0 - rho
    return FamilyAParams((weights.t2 + weights.t3) * s, (weights.t2 + weights.t4) * s)


def family_b_slots(weights: DivergenceWeights, rho: float) -> FamilyBParams:
    """Slots realizing ``weights`` at slope ``rho`` within family B.

    Requires ``t4 = t3 + rho/(1-rho)`` and ``rho > 0``; the slots are
    ``a = (t2 + t3)(1 - rho)`` and ``c = (t1 + t3)(1 - rho)``.
    """
    if not (0.0 < rho < 1.0):
        raise InvalidParameterError(f"family B needs rho in (0, 1), got {rho!r}")
    gap = rho / (1.0 - rho)
    if abs(weights.t4 - weights.t3 - gap) > _FIBER_TOL * max(1.0, gap):
        raise InvalidParameterError(
            f"weights {weights.as_tuple()} are not in family B at rho={rho}"
            " (need t4 = t3 + rho/(1-rho))"
        )
    s = 1.0 - rho
    return FamilyBParams((weights.t2 + weights.t3) * s, (weights.t1 + weights.t3) * s)


@dataclass(frozen=True)
class UpdateResult:
    """One closed-form minimization: the minimizer and its normalization."""

    joint: JointDistribution
    normalizer: float
    log_normalizer: float


def _check_ref(ref: JointDistribution, channel: Channel) -> None:
    if ref.joint.shape != channel.transition.shape:
        raise InvalidInputError("reference joint shape must match the channel")


def _safe_scale(coef: float, logs: np.ndarray) -> np.ndarray:
    """coef * logs with the convention 0 * (-inf) = 0."""
    if coef == 0.0:
        return np.zeros_like(logs)
    return np.where(np.isneginf(logs), -np.inf if coef > 0 else np.inf, coef * logs)


def _family_a_kernel(
    ref: JointDistribution, channel: Channel, rho: float, eta: float, params: FamilyAParams
) -> tuple[np.ndarray, float]:
    """Log unnormalized minimizer and log normalizer for family A."""
    point = GradientPoint(rho, eta)  # validates ranges
    _check_ref(ref, channel)
    a, b = params.a, params.b
    lg = TiltedChannel.build(channel, point.eta).log_weights

    lq = _log(ref.input_marginal)[:, None]
    core = (1.0 - rho) * lq + lg
    if b > 0:
        core = core + _safe_scale(b, _log(ref.reverse_conditional))

    e1 = 1.0 / (b + 1.0 - rho)
    lbr = e1 * core
    with np.errstate(invalid="ignore"):
        ls = logsumexp(lbr, axis=0)  # per-output column mass, log domain

    lt_term = _safe_scale(a / (a + 1.0), _log(ref.output_marginal))
    ls_coef = (b - a - rho) / (a + 1.0)
    ls_term = np.where(np.isneginf(ls), 0.0, ls_coef * ls)
    tail = lt_term + ls_term
    # dead columns stay dead regardless of the tail's sign
    lmu = np.where(np.isneginf(lbr), -np.inf, lbr + tail[None, :])

    log_k = float(logsumexp(lmu))
    if np.isneginf(log_k):
        raise DegenerateReferenceError(
            "reference law and tilted channel share no usable support"
        )
    return lmu, log_k


def _family_b_kernel(
    ref: JointDistribution, channel: Channel, rho: float, eta: float, params: FamilyBParams
) -> tuple[np.ndarray, float]:
    """Log unnormalized minimizer and log normalizer for family B; rho > 0."""
    point = GradientPoint(rho, eta)
    if point.rho == 0.0:
        raise InvalidParameterError("family B is defined only for rho > 0")
    _check_ref(ref, channel)
    a, c = params.a, params.c
    lg = TiltedChannel.build(channel, point.eta).log_weights

    core = _safe_scale(rho, _log(ref.reverse_conditional)) + lg
    if a > 0:
        core = core + _safe_scale(a, _log(ref.forward_conditional))

    e1 = 1.0 / (a + 1.0)
    lbr = e1 * core
    with np.errstate(invalid="ignore"):
        ls = logsumexp(lbr, axis=1)  # per-input row mass, log domain

    lq_term = _safe_scale(c / (c + rho), _log(ref.input_marginal))
    ls_coef = (a + 1.0 - c - rho) / (c + rho)
    ls_term = np.where(np.isneginf(ls), 0.0, ls_coef * ls)
    tail = lq_term + ls_term
    lmu = np.where(np.isneginf(lbr), -np.inf, lbr + tail[:, None])

    log_k = float(logsumexp(lmu))
    if np.isneginf(log_k):
        raise DegenerateReferenceError(
            "reference law and tilted channel share no usable support"
        )
    return lmu, log_k


def _finish(lmu: np.ndarray, log_k: float) -> UpdateResult:
    mu = np.exp(lmu - log_k)
    return UpdateResult(JointDistribution(mu), float(np.exp(log_k)), log_k)


def update_family_a(
    ref: JointDistribution,
    channel: Channel,
    rho: float,
    eta: float,
    params: FamilyAParams,
) -> UpdateResult:
    """Exact minimizer of the slope objective for a family-A weighting."""
    lmu, log_k = _family_a_kernel(ref, channel, rho, eta, params)
    return _finish(lmu, log_k)


def update_family_b(
    ref: JointDistribution,
    channel: Channel,
    rho: float,
    eta: float,
    params: FamilyBParams,
) -> UpdateResult:
    """Exact minimizer of the slope objective for a family-B weighting."""
    lmu, log_k = _family_b_kernel(ref, channel, rho, eta, params)
    return _finish(lmu, log_k)


def e0_family_a(
    ref: JointDistribution,
    channel: Channel,
    rho: float,
    eta: float,
    params: FamilyAParams,
) -> float:
    """Minimum of the slope objective for a family-A weighting: -(a+1) log K."""
    _, log_k = _family_a_kernel(ref, channel, rho, eta, params)
    return -(params.a + 1.0) * log_k


def e0_family_b(
    ref: JointDistribution,
    channel: Channel,
    rho: float,
    eta: float,
    params: FamilyBParams,
) -> float:
    """Minimum of the slope objective for a family-B weighting: -(c+rho) log K."""
    _, log_k = _family_b_kernel(ref, channel, rho, eta, params)
    return -(params.c + rho) * log_k
