"""Probability primitives for finite channels and joint input-output laws.

Everything is in nats. Quantities that can genuinely diverge (relative
entropies under support violations) return ``math.inf``; no finite
sentinels are used anywhere. Products and powers of probabilities are
formed in the log domain by the callers in :mod:`cdexp.updates`, so the
helpers here only need plain sums of ``p * log(p/q)`` terms, which are
computed with masks so that ``0 * log 0`` contributes exactly zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

__all__ = [
    "ExponentError",
    "InvalidInputError",
    "InvalidParameterError",
    "InfeasibleError",
    "DegenerateReferenceError",
    "GridTooLargeError",
    "NumericalFailureError",
    "CapBindingError",
    "NotConvergedWarning",
    "Channel",
    "JointDistribution",
    "DivergenceWeights",
    "kl",
    "conditional_kl",
    "mutual_information",
    "divergence_combination",
]

# Constructor-level tolerances. File loaders are more forgiving and
# renormalize before constructing (see cdexp.fileio).
_SUM_TOL = 1e-12


class ExponentError(Exception):
    """Base class for all errors raised by this package."""


class InvalidInputError(ExponentError):
    """A distribution, channel, or file fails validation."""


class InvalidParameterError(ExponentError):
    """A scheme or family parameter is outside its admissible range."""


class InfeasibleError(ExponentError):
    """The feasible set of the requested minimization is empty."""


class DegenerateReferenceError(ExponentError):
    """The reference law shares no usable support with the channel."""


class GridTooLargeError(ExponentError):
    """A brute-force grid would exceed the enumeration cap."""


class NumericalFailureError(ExponentError):
    """An internal numerical routine failed to make progress."""


class CapBindingError(ExponentError):
    """A dual variable hit its search cap, so the result is unreliable."""


class NotConvergedWarning(UserWarning):
    """Issued when an iteration stops on its budget rather than its tolerance."""


def _as_float_array(values, name: str, ndim: int) -> np.ndarray:
    arr = np.asarray(values, dtype=float)
    if arr.ndim != ndim:
        raise InvalidInputError(f"{name} must be {ndim}-dimensional, got shape {arr.shape}")
    if arr.size == 0:
        raise InvalidInputError(f"{name} must be non-empty")
    if not np.all(np.isfinite(arr)):
        raise InvalidInputError(f"{name} contains non-finite entries")
    return arr


def _log(arr: np.ndarray) -> np.ndarray:
    """Elementwise log with log(0) = -inf and no warning noise."""
    with np.errstate(divide="ignore"):
        return np.log(arr)


@dataclass(frozen=True)
class Channel:
    """A discrete memoryless channel with an optional per-input cost.

    ``transition[i, j]`` is the probability of output ``j`` given input
    ``i``. Rows must sum to one within 1e-12; loaders that accept noisier
    files renormalize before calling this constructor. ``cost`` is a
    per-input-letter cost vector or ``None`` for a costless channel.
    """

    transition: np.ndarray
    input_labels: tuple[str, ...] = ()
    output_labels: tuple[str, ...] = ()
    cost: np.ndarray | None = None

    def __post_init__(self):
        p = _as_float_array(self.transition, "transition", 2)
        if np.any(p < 0):
            raise InvalidInputError("transition probabilities must be non-negative")
        row_sums = p.sum(axis=1)
        if np.any(np.abs(row_sums - 1.0) > _SUM_TOL):
            worst = float(np.max(np.abs(row_sums - 1.0)))
            raise InvalidInputError(f"transition rows must sum to 1 (off by {worst:.3g})")
        p = p.copy()
        p.setflags(write=False)
        object.__setattr__(self, "transition", p)

        nx, ny = p.shape
        in_labels = tuple(self.input_labels) if self.input_labels else tuple(f"x{i}" for i in range(nx))
        out_labels = tuple(self.output_labels) if self.output_labels else tuple(f"y{j}" for j in range(ny))
        if len(in_labels) != nx or len(out_labels) != ny:
            raise InvalidInputError("label counts must match the transition shape")
        object.__setattr__(self, "input_labels", in_labels)
        object.__setattr__(self, "output_labels", out_labels)

        if self.cost is not None:
            c = _as_float_array(self.cost, "cost", 1)
            if c.shape != (nx,):
                raise InvalidInputError(f"cost must have one entry per input, got {c.shape}")
            c = c.copy()
            c.setflags(write=False)
            object.__setattr__(self, "cost", c)

    @property
    def num_inputs(self) -> int:
        return self.transition.shape[0]

    @property
    def num_outputs(self) -> int:
        return self.transition.shape[1]

    @cached_property
    def log_transition(self) -> np.ndarray:
        out = _log(self.transition)
        out.setflags(write=False)
        return out

    def require_cost(self) -> np.ndarray:
        if self.cost is None:
            raise InvalidInputError("this operation needs a cost function but the channel has none")
        return self.cost


@dataclass(frozen=True)
class JointDistribution:
    """A joint law on input x output, stored as a matrix summing to one.

    The constructor renormalizes exactly (the pre-normalization sum must
    already be within 1e-12 of one) so downstream marginal identities
    hold to machine precision. Conditional accessors return zero rows or
    columns where the conditioning marginal vanishes; every consumer in
    this package weights those entries by that same marginal, so the
    convention is never observable.
    """

    joint: np.ndarray

    def __post_init__(self):
        m = _as_float_array(self.joint, "joint", 2)
        if np.any(m < 0):
            raise InvalidInputError("joint probabilities must be non-negative")
        total = m.sum()
        if abs(total - 1.0) > _SUM_TOL:
            raise InvalidInputError(f"joint must sum to 1 (off by {abs(total - 1.0):.3g})")
        m = m / total
        m.setflags(write=False)
        object.__setattr__(self, "joint", m)

    @classmethod
    def uniform(cls, num_inputs: int, num_outputs: int) -> "JointDistribution":
        return cls(np.full((num_inputs, num_outputs), 1.0 / (num_inputs * num_outputs)))

    @classmethod
    def from_input_and_channel(cls, input_law, channel: Channel) -> "JointDistribution":
        q = _as_float_array(input_law, "input_law", 1)
        if q.shape != (channel.num_inputs,):
            raise InvalidInputError("input law length must match the channel input alphabet")
        if np.any(q < 0) or abs(q.sum() - 1.0) > _SUM_TOL:
            raise InvalidInputError("input law must be a probability vector")
        return cls(q[:, None] * channel.transition)

    @property
    def num_inputs(self) -> int:
        return self.joint.shape[0]

    @property
    def num_outputs(self) -> int:
        return self.joint.shape[1]

    @cached_property
    def input_marginal(self) -> np.ndarray:
        out = self.joint.sum(axis=1)
        out.setflags(write=False)
        return out

    @cached_property
    def output_marginal(self) -> np.ndarray:
        out = self.joint.sum(axis=0)
        out.setflags(write=False)
        return out

    @cached_property
    def forward_conditional(self) -> np.ndarray:
        """Rows are output laws given each input; zero rows where the input has no mass."""
        q = self.input_marginal
        with np.errstate(invalid="ignore", divide="ignore"):
            w = np.where(q[:, None] > 0, self.joint / q[:, None], 0.0)
        w.setflags(write=False)
        return w

    @cached_property
    def reverse_conditional(self) -> np.ndarray:
        """Entry (i, j) is the input law given output j; zero columns where the output has no mass."""
        t = self.output_marginal
        with np.errstate(invalid="ignore", divide="ignore"):
            v = np.where(t[None, :] > 0, self.joint / t[None, :], 0.0)
        v.setflags(write=False)
        return v

    @cached_property
    def support(self) -> np.ndarray:
        out = self.joint > 0
        out.setflags(write=False)
        return out

    def expected_cost(self, cost) -> float:
        c = _as_float_array(cost, "cost", 1)
        if c.shape != (self.num_inputs,):
            raise InvalidInputError("cost length must match the input alphabet")
        return float(self.input_marginal @ c)


@dataclass(frozen=True)
class DivergenceWeights:
    """Non-negative weights for the four-way divergence combination.

    The four components weight, in order: the input-marginal divergence,
    the forward-conditional divergence, the output-marginal divergence,
    and the reverse-conditional divergence between two joint laws.
    """

    t1: float
    t2: float
    t3: float
    t4: float

    def __post_init__(self):
        for name, value in self.as_dict().items():
            if not (isinstance(value, (int, float)) and math.isfinite(value)):
                raise InvalidParameterError(f"weight {name} must be finite, got {value!r}")
            if value < 0:
                raise InvalidParameterError(f"weight {name} must be non-negative, got {value}")
            object.__setattr__(self, name, float(value))

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.t1, self.t2, self.t3, self.t4)

    def as_dict(self) -> dict[str, float]:
        return {"t1": self.t1, "t2": self.t2, "t3": self.t3, "t4": self.t4}

    @classmethod
    def zero(cls) -> "DivergenceWeights":
        return cls(0.0, 0.0, 0.0, 0.0)


def kl(p, q) -> float:
    """Relative entropy D(p || q) in nats between two probability vectors.

    Returns ``inf`` when p puts mass where q has none. Entries where
    p is zero contribute nothing regardless of q.
    """
    p = _as_float_array(p, "p", 1)
    q = _as_float_array(q, "q", 1)
    if p.shape != q.shape:
        raise InvalidInputError(f"kl needs equal-length vectors, got {p.shape} vs {q.shape}")
    if np.any(p < 0) or np.any(q < 0):
        raise InvalidInputError("kl arguments must be non-negative")
    mask = p > 0
    if np.any(q[mask] == 0.0):
        return math.inf
    pm = p[mask]
    return float(np.sum(pm * (np.log(pm) - np.log(q[mask]))))


def conditional_kl(weights, w, p) -> float:
    """Divergence between conditional laws w and p, averaged over ``weights``.

    ``w`` and ``p`` are row-conditional matrices (one distribution per
    row); rows with zero weight are skipped entirely, so their contents
    are irrelevant. Returns ``inf`` if any positively-weighted row
    violates absolute continuity.
    """
    wt = _as_float_array(weights, "weights", 1)
    wm = _as_float_array(w, "w", 2)
    pm = _as_float_array(p, "p", 2)
    if wm.shape != pm.shape or wm.shape[0] != wt.shape[0]:
        raise InvalidInputError("conditional_kl shapes do not agree")
    if np.any(wt < 0) or np.any(wm < 0) or np.any(pm < 0):
        raise InvalidInputError("conditional_kl arguments must be non-negative")
    total = 0.0
    for i in np.flatnonzero(wt > 0):
        row = kl(wm[i], pm[i])
        if math.isinf(row):
            return math.inf
        total += wt[i] * row
    return total


def mutual_information(qw: JointDistribution) -> float:
    """Mutual information of a joint law, in nats. Always finite and >= 0."""
    mu = qw.joint
    prod = qw.input_marginal[:, None] * qw.output_marginal[None, :]
    mask = mu > 0
    # mu > 0 forces both marginals > 0, so the ratio is finite on the mask.
    val = float(np.sum(mu[mask] * (np.log(mu[mask]) - np.log(prod[mask]))))
    return max(val, 0.0)


def divergence_combination(
    qw: JointDistribution, ref: JointDistribution, weights: DivergenceWeights
) -> float:
    """Weighted four-way divergence between two joint laws.

    Components with weight zero are skipped before evaluation, so a
    zero weight never multiplies an infinite component. By the chain
    rule the (1,1,0,0) and (0,0,1,1) weightings both equal the plain
    joint relative entropy.
    """
    if qw.joint.shape != ref.joint.shape:
        raise InvalidInputError("joint laws must have matching shapes")
    total = 0.0
    if weights.t1 > 0:
        total += weights.t1 * kl(qw.input_marginal, ref.input_marginal)
    if math.isfinite(total) and weights.t2 > 0:
        total += weights.t2 * conditional_kl(
            qw.input_marginal, qw.forward_conditional, ref.forward_conditional
        )
    if math.isfinite(total) and weights.t3 > 0:
        total += weights.t3 * kl(qw.output_marginal, ref.output_marginal)
    if math.isfinite(total) and weights.t4 > 0:
        total += weights.t4 * conditional_kl(
            qw.output_marginal, qw.reverse_conditional.T, ref.reverse_conditional.T
        )
    return total
