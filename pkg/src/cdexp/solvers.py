"""Iterative minimization schemes built on the closed-form update families.

Every scheme repeats one pattern: freeze the current joint law as the
reference, minimize the chosen objective over all joint laws exactly,
and make the minimizer the next reference. The per-iteration inner
minimum of the rate-constrained objective is found through its concave
dual over the slope ``rho`` (and the cost multiplier ``eta`` when an
average-cost bound is active): for each dual point the inner minimizer
is closed-form, and each dual coordinate is maximized by bisecting its
exact envelope derivative to its root (a function-value-only search can
place an extremum no better than sqrt(eps), which is too coarse for the
monotonicity the reported histories must certify). The reported value
is always a primal objective at the returned joint law, never the dual
bound.

Family A parameters in the rho-searched schemes denote the fixed
divergence weighting ``t = (1, 0, a, b)``, whose realizing slots at
slope rho are ``(a (1-rho), b (1-rho))``. Family B has no
rho-independent weighting, so its slots are applied literally at each
visited rho; fixed-slope schemes are its natural habitat.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import (
    CapBindingError,
    Channel,
    DivergenceWeights,
    InfeasibleError,
    InvalidInputError,
    InvalidParameterError,
    JointDistribution,
    NumericalFailureError,
)
from .objectives import (
    GradientPoint,
    channel_divergence,
    exponent_objective,
    mutual_information,
    slope_objective,
)
from .core import divergence_combination, kl
from .updates import (
    FamilyAParams,
    FamilyBParams,
    e0_family_a,
    e0_family_b,
    family_a_slots,
    family_b_slots,
    update_family_a,
    update_family_b,
)

__all__ = [
    "SolverConfig",
    "RunReport",
    "InnerStep",
    "CurvePoint",
    "golden_section_max",
    "dual_value",
    "inner_step_fixed_rate",
    "solve_fixed_rate",
    "solve_fixed_gradient",
    "solve_fixed_alpha_rho",
    "solve_fixed_rate_eta",
    "sweep_curve",
]

_SCHEMES = ("fixed_rate", "fixed_gradient", "fixed_alpha_rho", "fixed_rate_eta")
_HISTORY_SLACK = 1e-12
_GAP_WARN = 1e-6


@dataclass(frozen=True)
class SolverConfig:
    """Scheme selection, family parameters, targets, and stopping controls.

    ``a``/``b`` are the family-A slots, ``a``/``c`` the family-B slots;
    the unused one is ignored. ``rate``, ``alpha``, ``rho`` and ``eta``
    are required or rejected per scheme at solver entry. ``init`` is the
    starting reference joint; None means uniform on the channel cells.
    """

    scheme: str
    family: str = "A"
    a: float = 0.0
    b: float = 0.0
    c: float = 0.0
    rate: float | None = None
    alpha: float | None = None
    rho: float | None = None
    eta: float | None = None
    tol: float = 1e-10
    max_iter: int = 100000
    dual_tol: float = 1e-10
    rho_cap: float = 1.0 - 1e-6
    eta_max: float = 1e3
    init: JointDistribution | None = None

    def __post_init__(self):
        if self.init is not None and not isinstance(self.init, JointDistribution):
            raise InvalidParameterError("init must be a JointDistribution when given")
        if self.scheme not in _SCHEMES:
            raise InvalidParameterError(f"unknown scheme {self.scheme!r}, expected one of {_SCHEMES}")
        if self.family not in ("A", "B"):
            raise InvalidParameterError(f"family must be 'A' or 'B', got {self.family!r}")
        for name in ("a", "b", "c"):
            v = getattr(self, name)
            if not (isinstance(v, (int, float)) and math.isfinite(v) and v >= 0):
                raise InvalidParameterError(f"slot {name} must be finite and >= 0, got {v!r}")
        if not (0 < self.tol < math.inf):
            raise InvalidParameterError(f"tol must be positive, got {self.tol!r}")
        if not (isinstance(self.max_iter, int) and self.max_iter >= 1):
            raise InvalidParameterError(f"max_iter must be a positive integer, got {self.max_iter!r}")
        if not (0 < self.dual_tol < 1):
            raise InvalidParameterError(f"dual_tol must lie in (0, 1), got {self.dual_tol!r}")
        if not (0 < self.rho_cap < 1):
            raise InvalidParameterError(f"rho_cap must lie in (0, 1), got {self.rho_cap!r}")
        if not (0 < self.eta_max < math.inf):
            raise InvalidParameterError(f"eta_max must be positive and finite, got {self.eta_max!r}")
        for name in ("rate", "alpha", "rho", "eta"):
            v = getattr(self, name)
            if v is not None and not (isinstance(v, (int, float)) and math.isfinite(v)):
                raise InvalidParameterError(f"{name} must be finite when given, got {v!r}")
        if self.rate is not None and self.rate < 0:
            raise InvalidParameterError(f"rate must be >= 0, got {self.rate!r}")
        if self.eta is not None and self.eta < 0:
            raise InvalidParameterError(f"eta must be >= 0, got {self.eta!r}")
        if self.rho is not None and not (0 <= self.rho < 1):
            raise InvalidParameterError(f"rho must lie in [0, 1), got {self.rho!r}")

    def family_a_params(self) -> FamilyAParams:
        return FamilyAParams(self.a, self.b)

    def family_b_params(self) -> FamilyBParams:
        return FamilyBParams(self.a, self.c)

    def require(self, name: str) -> float:
        v = getattr(self, name)
        if v is None:
            raise InvalidParameterError(f"scheme {self.scheme!r} requires {name}")
        return v


@dataclass(frozen=True)
class RunReport:
    """Outcome of one solver run.

    ``objective_history[k]`` is the primal objective certified at
    iteration k+1 (the value of that iteration's minimizer against its
    reference); it must be non-increasing within 1e-12 or construction
    fails, because every scheme here carries a descent guarantee.
    ``value`` is the last entry. ``dual`` is the final ``(rho, eta)``
    pair and ``duality_gap`` the final primal-minus-dual difference for
    schemes that run a dual search. A single-entry history with
    ``converged`` set means the very first minimizer already left the
    reference unmoved in the objective's divergence combination.
    """

    scheme: str
    value: float
    converged: bool
    iterations: int
    objective_history: tuple[float, ...]
    final_joint: JointDistribution
    dual: tuple[float, float] | None
    duality_gap: float | None
    warnings: tuple[str, ...]
    config: SolverConfig

    def __post_init__(self):
        hist = tuple(float(v) for v in self.objective_history)
        object.__setattr__(self, "objective_history", hist)
        if not hist:
            raise InvalidInputError("objective history must be non-empty")
        if self.iterations != len(hist):
            raise InvalidInputError("iterations must equal the history length")
        if self.value != hist[-1]:
            raise InvalidInputError("value must be the last history entry")
        for prev, nxt in zip(hist, hist[1:]):
            if nxt > prev + _HISTORY_SLACK:
                raise NumericalFailureError(
                    f"descent violated: objective rose from {prev!r} to {nxt!r}"
                )
        if self.converged and len(hist) >= 2 and hist[-2] - hist[-1] > self.config.tol:
            raise InvalidInputError("converged run must end with a decrement within tol")


@dataclass(frozen=True)
class InnerStep:
    """One rate-constrained inner minimization: primal value, dual point, gap."""

    joint: JointDistribution
    value: float
    dual_value: float
    rho: float
    eta: float
    duality_gap: float


@dataclass(frozen=True)
class CurvePoint:
    """One parametric point of the exponent-rate trade-off."""

    rho: float
    eta: float
    rate: float
    alpha: float | None
    e0: float
    exponent: float


_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


def golden_section_max(fn, lo: float, hi: float, tol: float) -> tuple[float, float]:
    """Deterministic golden-section maximization over [lo, hi].

    Assumes unimodality (every use here maximizes a concave function).
    Both endpoints are evaluated explicitly so a boundary maximum is
    returned exactly; the best point ever evaluated wins.
    """
    if not (math.isfinite(lo) and math.isfinite(hi) and hi >= lo):
        raise InvalidParameterError(f"bad bracket [{lo!r}, {hi!r}]")
    if tol <= 0:
        raise InvalidParameterError(f"tol must be positive, got {tol!r}")
    best_x, best_v = lo, fn(lo)
    if hi > lo:
        v_hi = fn(hi)
        if v_hi > best_v:
            best_x, best_v = hi, v_hi
    h = hi - lo
    if h <= tol:
        return best_x, best_v
    c = hi - _INVPHI * h
    d = lo + _INVPHI * h
    fc, fd = fn(c), fn(d)
    if fc > best_v:
        best_x, best_v = c, fc
    if fd > best_v:
        best_x, best_v = d, fd
    while h > tol:
        if fc >= fd:
            hi, d, fd = d, c, fc
            h = hi - lo
            c = hi - _INVPHI * h
            fc = fn(c)
            if fc > best_v:
                best_x, best_v = c, fc
        else:
            lo, c, fc = c, d, fd
            h = hi - lo
            d = lo + _INVPHI * h
            fd = fn(d)
            if fd > best_v:
                best_x, best_v = d, fd
    return best_x, best_v


class _FamilyAEngine:
    """Closed-form inner minimization for the fixed weighting t = (1, 0, a, b)."""

    rho_lo = 0.0

    def __init__(self, channel: Channel, params: FamilyAParams):
        self.channel = channel
        self.base = params
        self.weights = DivergenceWeights(1.0, 0.0, params.a, params.b)

    def slots(self, rho: float) -> FamilyAParams:
        return FamilyAParams(self.base.a * (1.0 - rho), self.base.b * (1.0 - rho))

    def e0(self, ref, rho, eta):
        return e0_family_a(ref, self.channel, rho, eta, self.slots(rho))

    def minimizer(self, ref, rho, eta) -> JointDistribution:
        return update_family_a(ref, self.channel, rho, eta, self.slots(rho)).joint

    def e0_slope(self, ref, rho, eta) -> float:
        # envelope derivative: the rho-linear terms at the frozen minimizer
        mu = self.minimizer(ref, rho, eta)
        return -mutual_information(mu) - kl(mu.input_marginal, ref.input_marginal)

    def primal_weights(self, rho: float) -> DivergenceWeights:
        return self.weights


class _FamilyBEngine:
    """Closed-form inner minimization with literal family-B slots at each rho.

    The realized divergence weighting drifts with rho (the family pins
    t4 - t3 = rho/(1-rho)), so the primal objective is evaluated with
    the weighting realized at the final rho. The kernel is undefined at
    rho = 0 exactly, so slope searches stay a hair above it.
    """

    rho_lo = 1e-9

    def __init__(self, channel: Channel, params: FamilyBParams):
        self.channel = channel
        self.params = params

    def e0(self, ref, rho, eta):
        return e0_family_b(ref, self.channel, rho, eta, self.params)

    def minimizer(self, ref, rho, eta) -> JointDistribution:
        return update_family_b(ref, self.channel, rho, eta, self.params).joint

    def e0_slope(self, ref, rho, eta) -> float:
        # realized coupling is c klq + a klw + rho klv, so the rho-linear
        # part at the frozen minimizer is -I plus the klv component
        mu = self.minimizer(ref, rho, eta)
        klv = divergence_combination(mu, ref, DivergenceWeights(0.0, 0.0, 0.0, 1.0))
        return -mutual_information(mu) + klv

    def primal_weights(self, rho: float) -> DivergenceWeights:
        return self.params.weights_at(rho)


class _GeneralEngine:
    """Descent-based inner minimization for weightings outside both families."""

    rho_lo = 0.0

    def __init__(self, channel: Channel, weights: DivergenceWeights, tol: float):
        self.channel = channel
        self.weights = weights
        self.tol = tol

    def _solve(self, ref, rho, eta):
        from .oracle import descent_min_slope

        return descent_min_slope(self.channel, ref, self.weights, rho, eta, tol=self.tol)

    def e0(self, ref, rho, eta):
        return self._solve(ref, rho, eta).value

    def minimizer(self, ref, rho, eta) -> JointDistribution:
        return self._solve(ref, rho, eta).joint

    def e0_slope(self, ref, rho, eta) -> float:
        mu = self.minimizer(ref, rho, eta)
        coupling = divergence_combination(mu, ref, self.weights)
        return -mutual_information(mu) - coupling

    def primal_weights(self, rho: float) -> DivergenceWeights:
        return self.weights


def _build_engine(channel, *, weights=None, family=None, params=None, descent_tol=1e-9):
    if weights is not None:
        if family is not None or params is not None:
            raise InvalidParameterError("pass either weights or a family with params, not both")
        try:
            slots0 = family_a_slots(weights, 0.0)
        except InvalidParameterError:
            return _GeneralEngine(channel, weights, descent_tol)
        return _FamilyAEngine(channel, slots0)
    if family == "A":
        return _FamilyAEngine(channel, params if params is not None else FamilyAParams(0.0, 0.0))
    if family == "B":
        return _FamilyBEngine(channel, params if params is not None else FamilyBParams(0.0, 0.0))
    raise InvalidParameterError(f"family must be 'A' or 'B', got {family!r}")


def _rho_argmax(engine, ref, eta: float, rate: float, rho_cap: float) -> float:
    """Slope maximizing the concave dual ``e0(rho, eta) + rho rate``.

    Found by bisecting the dual's exact envelope derivative
    ``e0_slope + rate`` (non-increasing by concavity) to its sign
    change; endpoints whose derivative already points outward are
    returned exactly. The root is located to machine precision, which
    keeps the primal evaluation at the returned slope stationary far
    below the history monotonicity slack.
    """
    lo = engine.rho_lo
    if engine.e0_slope(ref, lo, eta) + rate <= 0.0:
        return lo
    if engine.e0_slope(ref, rho_cap, eta) + rate >= 0.0:
        return rho_cap
    hi = rho_cap
    for _ in range(100):
        mid = 0.5 * (lo + hi)
        if engine.e0_slope(ref, mid, eta) + rate > 0.0:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-16:
            break
    return 0.5 * (lo + hi)


def _check_cost_feasible(ref: JointDistribution, channel: Channel, alpha: float) -> None:
    cost = channel.require_cost()
    viable = ref.input_marginal > 0
    least = float(np.min(cost[viable]))
    if least > alpha:
        raise InfeasibleError(
            f"no joint law supported by the reference meets cost <= {alpha}"
            f" (cheapest reachable input letter costs {least})"
        )


def _eta_width(dual_tol: float) -> float:
    # keep the multiplier bisection at least as tight as the default run
    return min(dual_tol, 1e-10) * 1e-5


def _binding_eta(cost_of, alpha: float, eta_max: float, width: float = 1e-15) -> float:
    """Smallest eta in [0, eta_max] whose inner minimizer meets the cost bound.

    The minimizer's expected cost is non-increasing in eta, so this is a
    plain bisection; it doubles as the eta-coordinate maximizer of the
    concave dual, whose eta-derivative is alpha minus that cost.
    """
    if cost_of(0.0) <= alpha:
        return 0.0
    if cost_of(eta_max) > alpha:
        raise CapBindingError(
            f"cost bound {alpha} still violated at the multiplier cap eta = {eta_max}"
        )
    lo, hi = 0.0, eta_max
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if cost_of(mid) > alpha:
            lo = mid
        else:
            hi = mid
        if hi - lo <= width * max(1.0, hi):
            break
    return hi


def inner_step_fixed_rate(
    ref: JointDistribution,
    channel: Channel,
    *,
    rate: float,
    alpha: float | None = None,
    weights: DivergenceWeights | None = None,
    family: str | None = None,
    params=None,
    dual_tol: float = 1e-10,
    rho_cap: float = 1.0 - 1e-6,
    eta_max: float = 1e3,
) -> InnerStep:
    """One exact inner minimization of the rate-constrained objective.

    Maximizes the concave dual ``e0(rho, eta) + rho rate - eta alpha``
    over the slope (and, when ``alpha`` is given, the cost multiplier),
    then returns the closed-form minimizer at the dual optimum together
    with its primal objective value. The returned joint always satisfies
    the cost bound when one is given.
    """
    if not (math.isfinite(rate) and rate >= 0):
        raise InvalidParameterError(f"rate must be finite and >= 0, got {rate!r}")
    engine = _build_engine(channel, weights=weights, family=family, params=params)
    if alpha is not None:
        _check_cost_feasible(ref, channel, alpha)
        cost_vec = channel.require_cost()

    def g_at(rho, eta):
        return engine.e0(ref, rho, eta) + rho * rate - (eta * alpha if alpha is not None else 0.0)

    if alpha is None:
        rho_star = _rho_argmax(engine, ref, 0.0, rate, rho_cap)
        eta_star = 0.0
    else:
        rho_star, eta_star = engine.rho_lo, 0.0
        quiet = 0
        for _ in range(200):
            rho_next = _rho_argmax(engine, ref, eta_star, rate, rho_cap)

            def cost_at(eta, _r=rho_next):
                mu = engine.minimizer(ref, _r, eta)
                return mu.expected_cost(cost_vec)

            eta_next = _binding_eta(cost_at, alpha, eta_max)
            moved = max(abs(rho_next - rho_star), abs(eta_next - eta_star))
            rho_star, eta_star = rho_next, eta_next
            quiet = quiet + 1 if moved <= 1e-12 else 0
            if quiet >= 2:
                break
    g_star = g_at(rho_star, eta_star)

    mu = engine.minimizer(ref, rho_star, eta_star)
    primal = exponent_objective(mu, ref, engine.primal_weights(rho_star), channel, rate)
    return InnerStep(
        joint=mu,
        value=primal,
        dual_value=g_star,
        rho=rho_star,
        eta=eta_star,
        duality_gap=primal - g_star,
    )


def dual_value(
    ref: JointDistribution,
    channel: Channel,
    weights: DivergenceWeights,
    rho: float,
    eta: float,
    rate: float = 0.0,
    alpha: float | None = None,
) -> float:
    """Dual lower bound at one (rho, eta) point for a fixed weighting.

    With the default ``rate`` 0 and no ``alpha`` this is the supporting
    plane's intercept itself, concave in (rho, eta). Closed-form when
    the weighting lies in family A (all rho) or family B (at this rho);
    otherwise evaluated by the convergent descent inner solver.
    ``eta > 0`` requires an ``alpha``.
    """
    GradientPoint(rho, eta)
    if not (math.isfinite(rate) and rate >= 0):
        raise InvalidParameterError(f"rate must be finite and >= 0, got {rate!r}")
    if eta > 0 and alpha is None:
        raise InvalidParameterError("eta > 0 in the dual requires a cost bound alpha")
    e0 = _e0_fixed_weights(ref, channel, weights, rho, eta)
    return e0 + rho * rate - (eta * alpha if alpha is not None else 0.0)


def _e0_fixed_weights(ref, channel, weights, rho, eta, *, descent_tol=1e-9):
    try:
        return e0_family_a(ref, channel, rho, eta, family_a_slots(weights, rho))
    except InvalidParameterError:
        pass
    if rho > 0:
        try:
            return e0_family_b(ref, channel, rho, eta, family_b_slots(weights, rho))
        except InvalidParameterError:
            pass
    from .oracle import descent_min_slope

    return descent_min_slope(channel, ref, weights, rho, eta, tol=descent_tol).value


def _initial_joint(
    channel: Channel, init: JointDistribution | None, config: SolverConfig | None = None
) -> JointDistribution:
    if init is None and config is not None:
        init = config.init
    if init is None:
        return JointDistribution.uniform(channel.num_inputs, channel.num_outputs)
    if init.joint.shape != channel.transition.shape:
        raise InvalidInputError("initial joint shape must match the channel")
    return init


def _self_anchored_value(mu: JointDistribution, channel: Channel, rate: float) -> float:
    """Exponent objective the minimizer certifies with itself as reference.

    The divergence combination of a joint law against itself vanishes,
    so this is ``D + |rate - I|+`` at ``mu``. Unlike the evaluation
    against the previous reference it is provably non-increasing along
    the slope-searched iterations (the against-reference value carries a
    ``rho * KL`` term of the moving input marginal that strong duality
    does not cover), and both converge to the same limit.
    """
    gap = rate - mutual_information(mu)
    return channel_divergence(mu, channel) + (gap if gap > 0.0 else 0.0)


def _ref_unmoved(mu: JointDistribution, ref: JointDistribution, weights, tol: float) -> bool:
    """True when the minimizer left the reference unmoved as the objective sees it.

    The update kernels read the reference only through the divergence
    combination's marginal and conditional factors, so a combination at
    or below tol means the next iteration reproduces this one; it lets a
    run that hits its fixed point on the very first step report a
    single-iteration converged history.
    """
    if weights is None:
        return False
    return divergence_combination(mu, ref, weights) <= tol


def _finish_report(scheme, history, converged, final_joint, dual, gap, warnings, config):
    warn = tuple(warnings)
    if gap is not None and gap > _GAP_WARN:
        warn = warn + (f"duality gap {gap:.3e} exceeds {_GAP_WARN:.0e}",)
    return RunReport(
        scheme=scheme,
        value=history[-1],
        converged=converged,
        iterations=len(history),
        objective_history=tuple(history),
        final_joint=final_joint,
        dual=dual,
        duality_gap=gap,
        warnings=warn,
        config=config,
    )


def solve_fixed_rate(
    channel: Channel, config: SolverConfig, init: JointDistribution | None = None
) -> RunReport:
    """Minimize the rate-constrained exponent objective iteratively.

    Each iteration solves the inner minimization via the slope dual and
    feeds the minimizer back as the next reference. Every history entry
    is the exponent objective the new reference certifies against
    itself, a non-increasing sequence of upper bounds on the exponent;
    the run converges when consecutive entries differ by at most
    ``config.tol`` (or the first minimizer already sits at the fixed
    point).
    """
    if config.scheme != "fixed_rate":
        raise InvalidParameterError(f"config scheme is {config.scheme!r}, not 'fixed_rate'")
    rate = config.require("rate")
    params = config.family_a_params() if config.family == "A" else config.family_b_params()
    ref = _initial_joint(channel, init, config)

    history: list[float] = []
    converged = False
    step = None
    for _ in range(config.max_iter):
        step = inner_step_fixed_rate(
            ref,
            channel,
            rate=rate,
            alpha=config.alpha,
            family=config.family,
            params=params,
            dual_tol=config.dual_tol,
            rho_cap=config.rho_cap,
            eta_max=config.eta_max,
        )
        history.append(_self_anchored_value(step.joint, channel, rate))
        if len(history) == 1:
            w = (
                params.weights_at(step.rho)
                if config.family == "B"
                else DivergenceWeights(1.0, 0.0, params.a, params.b)
            )
            converged = _ref_unmoved(step.joint, ref, w, config.tol)
        ref = step.joint
        if converged:
            break
        if len(history) >= 2 and history[-2] - history[-1] <= config.tol:
            converged = True
            break
    return _finish_report(
        "fixed_rate",
        history,
        converged,
        ref,
        (step.rho, step.eta),
        step.duality_gap,
        (),
        config,
    )


def solve_fixed_gradient(
    channel: Channel, config: SolverConfig, init: JointDistribution | None = None
) -> RunReport:
    """Minimize the slope objective at fixed (rho, eta) iteratively.

    The inner minimizer is closed-form, so each history entry is the
    exact minimum of the slope objective against the current reference;
    the sequence is non-increasing and converges to the doubly-minimized
    value.
    """
    if config.scheme != "fixed_gradient":
        raise InvalidParameterError(f"config scheme is {config.scheme!r}, not 'fixed_gradient'")
    rho = config.require("rho")
    eta = config.eta if config.eta is not None else 0.0
    ref = _initial_joint(channel, init, config)

    if config.family == "A":
        params = config.family_a_params()
        step = lambda r: update_family_a(r, channel, rho, eta, params)  # noqa: E731
        coef = params.a + 1.0
    else:
        params = config.family_b_params()
        step = lambda r: update_family_b(r, channel, rho, eta, params)  # noqa: E731
        coef = params.c + rho
    weights = params.weights_at(rho) if (config.family == "A" or rho > 0) else None

    history: list[float] = []
    converged = False
    for _ in range(config.max_iter):
        upd = step(ref)
        history.append(-coef * upd.log_normalizer)
        if len(history) == 1:
            converged = _ref_unmoved(upd.joint, ref, weights, config.tol)
        ref = upd.joint
        if converged:
            break
        if len(history) >= 2 and history[-2] - history[-1] <= config.tol:
            converged = True
            break
    return _finish_report(
        "fixed_gradient", history, converged, ref, (rho, eta), None, (), config
    )


def solve_fixed_alpha_rho(
    channel: Channel, config: SolverConfig, init: JointDistribution | None = None
) -> RunReport:
    """Minimize the slope objective at fixed rho under an average-cost bound.

    Each iteration finds the exact cost-binding multiplier by bisection
    (the dual's eta-coordinate maximizer), applies the closed-form
    update there, and reports the cost-free slope objective of the
    feasible minimizer.
    """
    if config.scheme != "fixed_alpha_rho":
        raise InvalidParameterError(f"config scheme is {config.scheme!r}, not 'fixed_alpha_rho'")
    rho = config.require("rho")
    alpha = config.require("alpha")
    cost_vec = channel.require_cost()
    ref = _initial_joint(channel, init, config)
    _check_cost_feasible(ref, channel, alpha)

    if config.family == "A":
        params = config.family_a_params()
        upd_at = lambda r, e: update_family_a(r, channel, rho, e, params)  # noqa: E731
        coef = params.a + 1.0
    else:
        params = config.family_b_params()
        upd_at = lambda r, e: update_family_b(r, channel, rho, e, params)  # noqa: E731
        coef = params.c + rho
    weights = params.weights_at(rho)
    point0 = GradientPoint(rho, 0.0)

    history: list[float] = []
    warnings: list[str] = []
    converged = False
    eta_star = 0.0
    gap = None
    for _ in range(config.max_iter):
        eta_star = _binding_eta(
            lambda e: upd_at(ref, e).joint.expected_cost(cost_vec), alpha, config.eta_max
        )
        upd = upd_at(ref, eta_star)
        mu = upd.joint
        value = slope_objective(point0, mu, ref, weights, channel)
        dual = -coef * upd.log_normalizer - eta_star * alpha
        gap = value - dual
        history.append(value)
        if len(history) == 1:
            converged = _ref_unmoved(mu, ref, weights, config.tol)
        ref = mu
        if converged:
            break
        if len(history) >= 2 and history[-2] - history[-1] <= config.tol:
            converged = True
            break
    return _finish_report(
        "fixed_alpha_rho", history, converged, ref, (rho, eta_star), gap, warnings, config
    )


def solve_fixed_rate_eta(
    channel: Channel, config: SolverConfig, init: JointDistribution | None = None
) -> RunReport:
    """Minimize the rate-constrained objective plus a fixed cost tilt.

    The slope is searched per iteration over the concave dual
    ``e0(rho, eta) + rho rate`` with eta held fixed; the history entry
    is the self-anchored exponent objective of the minimizer plus its
    tilted cost, non-increasing as in ``solve_fixed_rate``.
    """
    if config.scheme != "fixed_rate_eta":
        raise InvalidParameterError(f"config scheme is {config.scheme!r}, not 'fixed_rate_eta'")
    rate = config.require("rate")
    eta = config.require("eta")
    if eta > 0:
        cost_vec = channel.require_cost()
    ref = _initial_joint(channel, init, config)
    engine = _build_engine(
        channel,
        family=config.family,
        params=config.family_a_params() if config.family == "A" else config.family_b_params(),
    )

    history: list[float] = []
    converged = False
    rho_star = 0.0
    gap = None
    for _ in range(config.max_iter):
        rho_star = _rho_argmax(engine, ref, eta, rate, config.rho_cap)
        g_star = engine.e0(ref, rho_star, eta) + rho_star * rate
        mu = engine.minimizer(ref, rho_star, eta)
        value = _self_anchored_value(mu, channel, rate)
        if eta > 0:
            value += eta * mu.expected_cost(cost_vec)
        gap = value - g_star
        history.append(value)
        if len(history) == 1:
            converged = _ref_unmoved(mu, ref, engine.primal_weights(rho_star), config.tol)
        ref = mu
        if converged:
            break
        if len(history) >= 2 and history[-2] - history[-1] <= config.tol:
            converged = True
            break
    return _finish_report(
        "fixed_rate_eta", history, converged, ref, (rho_star, eta), gap, (), config
    )


def sweep_curve(
    channel: Channel,
    *,
    rho_values,
    eta_values=(0.0,),
    family: str = "A",
    a: float = 0.0,
    b: float = 0.0,
    c: float = 0.0,
    tol: float = 1e-10,
    max_iter: int = 100000,
) -> tuple[CurvePoint, ...]:
    """Parametric exponent-rate curve from converged fixed-slope runs.

    For each (eta, rho) pair the fixed-slope scheme is run to
    convergence from the uniform joint; one extra closed-form update
    then yields the minimizer whose mutual information (plus the small
    residual divergence combination) gives the rate coordinate, and the
    exponent point is assembled from the slope value, the rate, and the
    cost term.
    """
    points = []
    for eta in eta_values:
        for rho in rho_values:
            cfg = SolverConfig(
                scheme="fixed_gradient",
                family=family,
                a=a,
                b=b,
                c=c,
                rho=float(rho),
                eta=float(eta),
                tol=tol,
                max_iter=max_iter,
            )
            report = solve_fixed_gradient(channel, cfg)
            ref = report.final_joint
            if family == "A":
                params = FamilyAParams(a, b)
                upd = update_family_a(ref, channel, rho, eta, params)
                e0 = -(params.a + 1.0) * upd.log_normalizer
            else:
                params = FamilyBParams(a, c)
                upd = update_family_b(ref, channel, rho, eta, params)
                e0 = -(params.c + rho) * upd.log_normalizer
            mu = upd.joint
            weights = params.weights_at(rho) if (family == "A" or rho > 0) else None
            rate = mutual_information(mu)
            if weights is not None:
                rate += divergence_combination(mu, ref, weights)
            alpha = mu.expected_cost(channel.cost) if channel.cost is not None else None
            exponent = e0 + rho * rate - (eta * alpha if alpha is not None else 0.0)
            points.append(
                CurvePoint(
                    rho=float(rho),
                    eta=float(eta),
                    rate=rate,
                    alpha=alpha,
                    e0=e0,
                    exponent=exponent,
                )
            )
    return tuple(points)
