"""Independent verifiers: exhaustive grid search and certified descent.

Nothing here reuses the closed-form machinery or the solvers' objective
implementations. Values are recomputed from scratch with xlogy-based
sums so that agreement between a solver and an oracle is evidence, not
tautology. Grid oracles enumerate all integer-composition joints at a
given resolution in lexicographic order (ties in the minimum go to the
first point reached); the descent oracle runs projected gradient descent
with a duality-style certificate that upper-bounds the distance to the
true minimum of the convex slope objective.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import xlogy

from .core import (
    Channel,
    DegenerateReferenceError,
    DivergenceWeights,
    GridTooLargeError,
    InfeasibleError,
    InvalidInputError,
    InvalidParameterError,
    JointDistribution,
    NumericalFailureError,
    _log,
)

__all__ = [
    "GridSpec",
    "OracleResult",
    "grid_min_exponent",
    "grid_min_exponent_self",
    "grid_min_slope_self",
    "descent_min_slope",
]

_MAX_GRID_POINTS = 100_000_000
_COST_SLACK = 1e-12
# A stalled line search is fine once the optimality certificate is tiny;
# for this strongly convex objective the value error scales like its square.
_STALL_CERT = 1e-5


@dataclass(frozen=True)
class GridSpec:
    """Resolution of the probability grid: cell masses are multiples of 1/resolution."""

    resolution: int
    max_points: int = _MAX_GRID_POINTS

    def __post_init__(self):
        if not (isinstance(self.resolution, int) and self.resolution >= 10):
            raise InvalidParameterError(f"resolution must be an integer >= 10, got {self.resolution!r}")
        if not (isinstance(self.max_points, int) and self.max_points >= 1):
            raise InvalidParameterError(f"max_points must be a positive integer")

    def count(self, cells: int) -> int:
        return math.comb(self.resolution + cells - 1, cells - 1)

    def check(self, cells: int) -> None:
        n = self.count(cells)
        if n > self.max_points:
            raise GridTooLargeError(
                f"grid would enumerate {n} points for {cells} cells at resolution"
                f" {self.resolution}, above the cap {self.max_points}"
            )


@dataclass(frozen=True)
class OracleResult:
    """A verified minimum: the value, a minimizer, an accuracy bound, and the work done.

    For grid oracles ``accuracy_bound`` is the simplex mesh width
    (cells-1)/resolution; for the descent oracle it is the final
    optimality certificate, which upper-bounds value minus the true
    minimum. ``evaluations`` counts grid points or descent iterations.
    """

    value: float
    joint: JointDistribution
    accuracy_bound: float
    evaluations: int


def _prefix_iter(total: int, length: int):
    """All non-negative integer prefixes of given length with sum <= total, lexicographic."""
    if length == 0:
        yield ()
        return
    for head in range(total + 1):
        for rest in _prefix_iter(total - head, length - 1):
            yield (head,) + rest


def _composition_batches(total: int, cells: int, batch_rows: int = 1_000_000):
    """Integer compositions of ``total`` into ``cells`` parts, in batches."""
    if cells == 1:
        yield np.array([[total]], dtype=np.int64)
        return
    buf: list[np.ndarray] = []
    size = 0
    for prefix in _prefix_iter(total, cells - 2):
        rem = total - sum(prefix)
        first = np.arange(rem + 1, dtype=np.int64)
        block = np.empty((rem + 1, cells), dtype=np.int64)
        if cells > 2:
            block[:, : cells - 2] = np.asarray(prefix, dtype=np.int64)
        block[:, -2] = first
        block[:, -1] = rem - first
        buf.append(block)
        size += block.shape[0]
        if size >= batch_rows:
            yield np.concatenate(buf, axis=0)
            buf, size = [], 0
    if buf:
        yield np.concatenate(buf, axis=0)


def _batch_channel_terms(mu: np.ndarray, transition: np.ndarray):
    """Per-row channel divergence and mutual information for a (m, X, Y) batch."""
    q = mu.sum(axis=2)
    t = mu.sum(axis=1)
    with np.errstate(divide="ignore", invalid="ignore"):
        slog = xlogy(mu, mu).sum(axis=(1, 2))
        d_wp = slog - xlogy(mu, q[:, :, None] * transition[None, :, :]).sum(axis=(1, 2))
        i_qw = slog - xlogy(mu, q[:, :, None] * t[:, None, :]).sum(axis=(1, 2))
    return q, t, slog, d_wp, i_qw


def _batch_combination(mu, q, t, slog, ref: JointDistribution, weights: DivergenceWeights):
    """Weighted divergence combination of each batch row against ``ref``."""
    total = np.zeros(mu.shape[0])
    with np.errstate(divide="ignore", invalid="ignore"):
        if weights.t1 > 0:
            dq = xlogy(q, q).sum(axis=1) - xlogy(q, ref.input_marginal[None, :]).sum(axis=1)
            total = total + weights.t1 * dq
        if weights.t2 > 0:
            denom = q[:, :, None] * ref.forward_conditional[None, :, :]
            dw = slog - xlogy(mu, denom).sum(axis=(1, 2))
            total = total + weights.t2 * dw
        if weights.t3 > 0:
            dt = xlogy(t, t).sum(axis=1) - xlogy(t, ref.output_marginal[None, :]).sum(axis=1)
            total = total + weights.t3 * dt
        if weights.t4 > 0:
            denom = ref.reverse_conditional[None, :, :] * t[:, None, :]
            dv = slog - xlogy(mu, denom).sum(axis=(1, 2))
            total = total + weights.t4 * dv
    return total


def _grid_scan(channel: Channel, grid: GridSpec, alpha, value_fn):
    """Enumerate the joint grid, apply value_fn to batches, track the first minimum."""
    nx, ny = channel.num_inputs, channel.num_outputs
    cells = nx * ny
    grid.check(cells)
    res = grid.resolution
    if alpha is not None:
        cost = channel.require_cost()
        if float(np.min(cost)) > alpha:
            raise InfeasibleError(f"no input law meets cost <= {alpha}")

    best_val = math.inf
    best_row = None
    evaluations = 0
    for batch in _composition_batches(res, cells):
        mu = batch.astype(float).reshape(-1, nx, ny) / res
        values = value_fn(mu)
        if alpha is not None:
            qf = mu.sum(axis=2) @ cost
            values = np.where(qf <= alpha + _COST_SLACK, values, math.inf)
        evaluations += mu.shape[0]
        k = int(np.argmin(values))
        if values[k] < best_val:
            best_val = float(values[k])
            best_row = mu[k].copy()
    if best_row is None or math.isinf(best_val):
        raise InfeasibleError("every grid point was infeasible for the given constraints")
    bound = (cells - 1) / res
    return OracleResult(best_val, JointDistribution(best_row), bound, evaluations)


def grid_min_exponent(
    channel: Channel,
    ref: JointDistribution,
    weights: DivergenceWeights,
    rate: float,
    alpha: float | None,
    grid: GridSpec,
) -> OracleResult:
    """Brute-force minimum of the rate-constrained objective against a fixed reference."""
    if ref.joint.shape != channel.transition.shape:
        raise InvalidInputError("reference joint shape must match the channel")
    if not (math.isfinite(rate) and rate >= 0):
        raise InvalidParameterError(f"rate must be finite and >= 0, got {rate!r}")

    def value_fn(mu):
        q, t, slog, d_wp, i_qw = _batch_channel_terms(mu, channel.transition)
        comb = _batch_combination(mu, q, t, slog, ref, weights)
        with np.errstate(invalid="ignore"):
            f1 = d_wp + comb
            f2 = d_wp - i_qw + rate
        return np.maximum(f1, f2)

    return _grid_scan(channel, grid, alpha, value_fn)


def grid_min_exponent_self(
    channel: Channel, rate: float, alpha: float | None, grid: GridSpec
) -> OracleResult:
    """Brute-force minimum with both objective arguments set to the same law.

    This is the target of the iterated schemes: the divergence
    combination vanishes, leaving max(channel divergence, channel
    divergence - mutual information + rate) under the optional cost
    bound.
    """
    if not (math.isfinite(rate) and rate >= 0):
        raise InvalidParameterError(f"rate must be finite and >= 0, got {rate!r}")

    def value_fn(mu):
        _, _, _, d_wp, i_qw = _batch_channel_terms(mu, channel.transition)
        return np.maximum(d_wp, d_wp - i_qw + rate)

    return _grid_scan(channel, grid, alpha, value_fn)


def grid_min_slope_self(
    channel: Channel, rho: float, alpha: float | None, grid: GridSpec, eta: float = 0.0
) -> OracleResult:
    """Brute-force minimum of the self-referenced slope objective.

    The fixed-slope schemes converge to min over joints of the channel
    divergence minus rho times mutual information (plus an optional
    fixed cost tilt), under the optional cost bound; this enumerates it.
    """
    if not (0.0 <= rho < 1.0):
        raise InvalidParameterError(f"rho must lie in [0, 1), got {rho!r}")
    if eta < 0 or not math.isfinite(eta):
        raise InvalidParameterError(f"eta must be finite and >= 0, got {eta!r}")
    if eta > 0:
        cost = channel.require_cost()

    def value_fn(mu):
        _, _, _, d_wp, i_qw = _batch_channel_terms(mu, channel.transition)
        vals = d_wp - rho * i_qw
        if eta > 0:
            vals = vals + eta * (mu.sum(axis=2) @ cost)
        return vals

    return _grid_scan(channel, grid, alpha, value_fn)


def _viable_mask(channel: Channel, ref: JointDistribution, weights: DivergenceWeights):
    """Cells that can carry mass without an infinite objective."""
    mask = channel.transition > 0
    if weights.t1 > 0:
        mask = mask & (ref.input_marginal[:, None] > 0)
    if weights.t2 > 0 or weights.t4 > 0:
        mask = mask & ref.support
    if weights.t3 > 0:
        mask = mask & (ref.output_marginal[None, :] > 0)
    return mask


def _project_simplex(v: np.ndarray) -> np.ndarray:
    """Euclidean projection of a vector onto the probability simplex."""
    u = np.sort(v)[::-1]
    css = np.cumsum(u) - 1.0
    idx = np.arange(1, v.size + 1)
    cond = u - css / idx > 0
    k = int(np.max(idx[cond]))
    tau = css[k - 1] / k
    return np.maximum(v - tau, 0.0)


def descent_min_slope(
    channel: Channel,
    ref: JointDistribution,
    weights: DivergenceWeights,
    rho: float,
    eta: float,
    *,
    tol: float = 1e-9,
    max_iter: int = 200000,
) -> OracleResult:
    """Certified minimum of the slope objective by projected gradient descent.

    Works for any non-negative weighting, unlike the closed-form
    families. The objective restricted to cells that can carry mass is
    smooth and convex; backtracking (halving from step 1.0) guarantees
    descent, and the gradient-based certificate
    ``sum(mu grad) - min(grad)`` bounds the remaining gap to the true
    minimum, so termination at ``certificate <= tol`` is a proof.
    """
    if not (0.0 <= rho < 1.0):
        raise InvalidParameterError(f"rho must lie in [0, 1), got {rho!r}")
    if eta < 0 or not math.isfinite(eta):
        raise InvalidParameterError(f"eta must be finite and >= 0, got {eta!r}")
    if ref.joint.shape != channel.transition.shape:
        raise InvalidInputError("reference joint shape must match the channel")
    if tol <= 0:
        raise InvalidParameterError(f"tol must be positive, got {tol!r}")
    nx, ny = channel.num_inputs, channel.num_outputs
    mask = _viable_mask(channel, ref, weights)
    if not np.any(mask):
        raise DegenerateReferenceError("no cell can carry mass under this reference and weighting")

    # Coefficient form of the objective on the viable cells:
    #   A sum(mu log mu) + B sum(q log q) + C sum(t log t) + sum(mu clog)
    t1, t2, t3, t4 = weights.as_tuple()
    s = 1.0 - rho
    coef_mu = s * (1.0 + t2 + t4)
    coef_q = s * (t1 - t2 - 1.0)
    coef_t = rho + s * (t3 - t4)
    clog = -channel.log_transition.copy()
    if eta > 0:
        clog = clog + eta * channel.require_cost()[:, None]
    for w, logs in (
        (t1, _log(ref.input_marginal)[:, None] * np.ones((1, ny))),
        (t2, _log(ref.forward_conditional)),
        (t3, np.ones((nx, 1)) * _log(ref.output_marginal)[None, :]),
        (t4, _log(ref.reverse_conditional)),
    ):
        if w > 0:
            clog = clog - s * w * logs
    if not np.all(np.isfinite(clog[mask])):
        raise NumericalFailureError("objective constants are not finite on the viable cells")

    flat_mask = mask.ravel()
    c = clog.ravel()[flat_mask]
    rows = np.repeat(np.arange(nx), ny)[flat_mask]
    cols = np.tile(np.arange(ny), nx)[flat_mask]
    n = int(flat_mask.sum())

    def split_marginals(z):
        q = np.zeros(nx)
        t = np.zeros(ny)
        np.add.at(q, rows, z)
        np.add.at(t, cols, z)
        return q, t

    def objective(z):
        q, t = split_marginals(z)
        return float(
            coef_mu * np.sum(xlogy(z, z))
            + coef_q * np.sum(xlogy(q, q))
            + coef_t * np.sum(xlogy(t, t))
            + z @ c
        )

    def gradient(z):
        q, t = split_marginals(z)
        zl = np.log(np.maximum(z, 1e-300))
        ql = np.log(np.maximum(q, 1e-300))
        tl = np.log(np.maximum(t, 1e-300))
        return coef_mu * (1.0 + zl) + coef_q * (1.0 + ql[rows]) + coef_t * (1.0 + tl[cols]) + c

    z = np.full(n, 1.0 / n)
    val = objective(z)
    certificate = math.inf
    iterations = 0
    for iterations in range(1, max_iter + 1):
        g = gradient(z)
        certificate = float(z @ g - np.min(g))
        if certificate <= tol:
            break
        step = 1.0
        moved = False
        fallback = None
        while step >= 1e-20:
            cand = _project_simplex(z - step * g)
            diff = cand - z
            dd = float(diff @ diff)
            if dd == 0.0:
                break
            cand_val = objective(cand)
            if cand_val <= val - 1e-4 * dd / step:
                z, val = cand, cand_val
                moved = True
                break
            if fallback is None and cand_val < val:
                fallback = (cand, cand_val)
            step *= 0.5
        if not moved and fallback is not None:
            z, val = fallback
            moved = True
        if not moved:
            # no representable decrease left; the certificate says how close this is
            if certificate <= _STALL_CERT:
                break
            raise NumericalFailureError(
                f"descent stalled with certificate {certificate:.3e} above tolerance"
            )
    else:
        if certificate > _STALL_CERT:
            raise NumericalFailureError(
                f"descent hit max_iter {max_iter} with certificate {certificate:.3e}"
            )

    full = np.zeros(nx * ny)
    full[flat_mask] = z
    return OracleResult(val, JointDistribution(full.reshape(nx, ny)), certificate, iterations)
