"""Finite-horizon backward induction and infinite-horizon fixed-point iteration.

The finite solver applies the Bellman sweep backward from the terminal
cost, recording the greedy minimizer at every stage; per-stage risk
measures are allowed, and a non-stationary problem can be expressed by
passing one model per stage over a shared state space.

The infinite solver requires a stationary model with zero terminal cost
and a verified bounding specification. It iterates v_{k+1} = T v_k from
v_0 = 0 and stops once the a-posteriori bound

    ||v_{k+1} - v_k||_b * q / (1 - q) <= tol,   q = alpha * discount < 1,

certifies the weighted distance to the unique fixed point. The returned
stationary policy is greedy with respect to the returned value.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import (
    InfeasiblePolicy,
    NotContractive,
    NotCoherent,
    RiskMdpError,
)
from .mdp_core import (
    BoundMode,
    BoundingSpec,
    MdpModel,
    Policy,
    ValueFunction,
    _stage_pairs,
    _values_of,
    bellman_T,
    verify_bounds,
    weighted_norm,
)
from .risk_measures import (
    RiskMeasure,
    _risk_value_of_pairs,
    is_coherent,
    is_comonotonic_additive,
    is_positive_homogeneous,
)

__all__ = [
    "FiniteSolveResult",
    "InfiniteSolveResult",
    "solve_finite",
    "evaluate_policy_finite",
    "solve_infinite",
    "check_contraction",
    "weak_increase_check",
    "default_max_iter",
    "MAX_ITER_CAP",
]

MAX_ITER_CAP = 10**6


def _stage_models(model, horizon: int) -> list[MdpModel]:
    if isinstance(model, MdpModel):
        return [model] * horizon
    models = list(model)
    if len(models) != horizon:
        raise RiskMdpError(f"{len(models)} stage models for horizon {horizon}")
    n = models[0].n_states
    if any(m.n_states != n for m in models):
        raise RiskMdpError("stage models must share the state space")
    return models


def _stage_risks(risks, horizon: int) -> list[RiskMeasure]:
    if isinstance(risks, (list, tuple)):
        if len(risks) != horizon:
            raise RiskMdpError(f"{len(risks)} risk measures for horizon {horizon}")
        return list(risks)
    return [risks] * horizon


@dataclass(frozen=True)
class FiniteSolveResult:
    """Backward-induction output: values[n] is the stage-n value function."""

    values: tuple[ValueFunction, ...]
    policy: Policy
    stage_seconds: tuple[float, ...]

    @property
    def horizon(self) -> int:
        return len(self.values) - 1


def solve_finite(model, risks, horizon: int) -> FiniteSolveResult:
    """Backward induction from the terminal cost with greedy minimizers.

    ``model`` may be a single stationary model or one model per stage;
    ``risks`` a single risk measure or one per stage. ``values`` has
    length horizon + 1 with the terminal cost last, and ``policy`` the
    horizon greedy rules in stage order.
    """
    if horizon < 1:
        raise RiskMdpError(f"horizon must be >= 1, got {horizon}")
    models = _stage_models(model, horizon)
    risk_list = _stage_risks(risks, horizon)
    v = ValueFunction(models[-1].terminal_cost)
    values = [v]
    rules: list[tuple[int, ...]] = []
    seconds: list[float] = []
    for n in range(horizon - 1, -1, -1):
        t0 = time.perf_counter()
        v, actions = bellman_T(models[n], risk_list[n], v)
        seconds.append(time.perf_counter() - t0)
        values.append(v)
        rules.append(actions)
    values.reverse()
    rules.reverse()
    seconds.reverse()
    return FiniteSolveResult(
        values=tuple(values),
        policy=Policy(stages=tuple(rules), stationary=False),
        stage_seconds=tuple(seconds),
    )


def _feasible_rules(models: Sequence[MdpModel], policy: Policy, horizon: int):
    rules = policy.rules(horizon)
    for n, rule in enumerate(rules):
        m = models[n]
        if len(rule) != m.n_states:
            raise InfeasiblePolicy(f"stage {n} rule covers {len(rule)} states of {m.n_states}")
        for x, a in enumerate(rule):
            if a not in m.admissible[x]:
                raise InfeasiblePolicy(f"stage {n}: action {a} not admissible in state {x}")
    return rules


def evaluate_policy_finite(model, risks, policy: Policy, horizon: int) -> list[ValueFunction]:
    """Policy values by applying the fixed-decision operator backward.

    Returns the list with entry n the stage-n value of the policy, the
    terminal cost last. Componentwise these dominate the optimal values.
    """
    models = _stage_models(model, horizon)
    risk_list = _stage_risks(risks, horizon)
    rules = _feasible_rules(models, policy, horizon)
    v = ValueFunction(models[-1].terminal_cost)
    out = [v]
    for n in range(horizon - 1, -1, -1):
        m = models[n]
        vals = _values_of(v)
        new = tuple(
            _risk_value_of_pairs(risk_list[n], _stage_pairs(m, vals, x, rules[n][x]))
            for x in range(m.n_states)
        )
        v = ValueFunction(new)
        out.append(v)
    out.reverse()
    return out


@dataclass(frozen=True)
class InfiniteSolveResult:
    """Fixed-point iteration output with the a-posteriori error bound."""

    value: ValueFunction
    policy: Policy
    iterations: int
    residual: float
    error_bound: float
    modulus: float
    converged: bool
    trace: tuple[tuple[float, float], ...]


def default_max_iter(tol: float, modulus: float) -> int:
    """Ten times the a-priori geometric iteration count, capped."""
    if modulus <= 0.0:
        return 10
    n = 10 * math.ceil(math.log(tol) / math.log(modulus))
    return max(10, min(n, MAX_ITER_CAP))


def _require_infinite_preconditions(model: MdpModel, risk, spec: BoundingSpec):
    if any(c != 0.0 for c in model.terminal_cost):
        raise RiskMdpError("infinite horizon requires zero terminal cost")
    report = verify_bounds(model, risk, spec)
    if not report.ok:
        first = report.violations[0]
        raise RiskMdpError(
            f"bounding spec fails verification ({len(report.violations)} violations, "
            f"first {first.inequality} at state {first.state}, action {first.action})"
        )
    q = spec.modulus(model.discount)
    if q >= 1.0:
        raise NotContractive(f"alpha * discount = {q:g} must be < 1")
    return q


def solve_infinite(
    model: MdpModel,
    risk: RiskMeasure,
    spec: BoundingSpec,
    tol: float,
    max_iter: int | None = None,
    start: ValueFunction | None = None,
) -> InfiniteSolveResult:
    """Iterate the Bellman update to its unique fixed point.

    Starts from the zero vector (or ``start``), stops when the weighted
    residual times q/(1-q) drops to ``tol``, and returns the greedy
    stationary policy for the final value. When the iteration budget runs
    out the partial result is returned with ``converged=False``.
    """
    if not tol > 0.0:
        raise RiskMdpError(f"tol must be > 0, got {tol!r}")
    q = _require_infinite_preconditions(model, risk, spec)
    weight = spec.b()
    rate = q / (1.0 - q)
    if max_iter is None:
        max_iter = default_max_iter(tol, q)
    v = ValueFunction(tuple(0.0 for _ in range(model.n_states))) if start is None else start
    trace: list[tuple[float, float]] = []
    converged = False
    iterations = 0
    residual = math.inf
    bound = math.inf
    while iterations < max_iter:
        nxt, _ = bellman_T(model, risk, v)
        residual = weighted_norm(nxt, v, weight)
        bound = rate * residual
        trace.append((residual, bound))
        v = nxt
        iterations += 1
        if bound <= tol:
            converged = True
            break
    _, actions = bellman_T(model, risk, v)
    return InfiniteSolveResult(
        value=v,
        policy=Policy(stages=(actions,), stationary=True),
        iterations=iterations,
        residual=residual,
        error_bound=bound,
        modulus=q,
        converged=converged,
        trace=tuple(trace),
    )


def check_contraction(
    model: MdpModel,
    risk: RiskMeasure,
    spec: BoundingSpec,
    trials: int,
    seed: int = 0,
) -> float:
    """Largest observed ||Tv1 - Tv2||_b / ||v1 - v2||_b over random pairs.

    Pairs are drawn componentwise uniform between the global envelopes;
    identical pairs are skipped. Admitted for coherent risk measures, or
    in bounded-below mode for comonotonic-additive positive-homogeneous
    ones.
    """
    if not (
        is_coherent(risk)
        or (
            spec.mode is BoundMode.BOUNDED_BELOW
            and is_comonotonic_additive(risk)
            and is_positive_homogeneous(risk)
        )
    ):
        raise NotCoherent(
            "contraction check needs a coherent risk measure, or bounded-below "
            "mode with a comonotonic-additive positive-homogeneous one"
        )
    report = verify_bounds(model, risk, spec)
    if not report.ok:
        raise RiskMdpError("bounding spec fails verification")
    if report.global_lb is None:
        raise NotContractive(f"alpha * discount = {report.modulus:g} must be < 1")
    weight = spec.b()
    rng = np.random.default_rng(seed)
    glb = np.asarray(report.global_lb)
    gub = np.asarray(report.global_ub)
    worst = 0.0
    for _ in range(trials):
        v1 = rng.uniform(glb, gub)
        v2 = rng.uniform(glb, gub)
        denom = weighted_norm(v1.tolist(), v2.tolist(), weight)
        if denom == 0.0:
            continue
        t1, _ = bellman_T(model, risk, v1.tolist())
        t2, _ = bellman_T(model, risk, v2.tolist())
        ratio = weighted_norm(t1, t2, weight) / denom
        if ratio > worst:
            worst = ratio
    return worst


def weak_increase_check(
    model: MdpModel,
    risk: RiskMeasure,
    spec: BoundingSpec,
    policy: Policy,
    horizon: int,
    tol: float = 1e-9,
) -> bool:
    """Check J_{n} >= J_{n-1} + q^{n-1} * lb componentwise along a policy.

    J_n here is the n-stage value of the policy started from the zero
    vector (forward indexing by stages-to-go), and q = alpha * discount.
    The inequality makes the policy values weakly increasing, which is
    what guarantees their convergence as the horizon grows.
    """
    if not is_coherent(risk):
        raise NotCoherent("weak-increase check requires a coherent risk measure")
    report = verify_bounds(model, risk, spec)
    if not report.ok:
        raise RiskMdpError("bounding spec fails verification")
    q = spec.modulus(model.discount)
    rules = policy.rules(horizon)
    zero = ValueFunction(tuple(0.0 for _ in range(model.n_states)))

    def policy_value(n: int) -> ValueFunction:
        # applies the first n rules: T_{d_0} ... T_{d_{n-1}} 0
        v = zero
        for k in range(n - 1, -1, -1):
            vals = _values_of(v)
            v = ValueFunction(
                tuple(
                    _risk_value_of_pairs(risk, _stage_pairs(model, vals, x, rules[k][x]))
                    for x in range(model.n_states)
                )
            )
        return v

    if policy.stationary:
        # one rule everywhere: build incrementally
        values = [zero]
        v = zero
        for _ in range(horizon):
            vals = _values_of(v)
            v = ValueFunction(
                tuple(
                    _risk_value_of_pairs(risk, _stage_pairs(model, vals, x, rules[0][x]))
                    for x in range(model.n_states)
                )
            )
            values.append(v)
    else:
        values = [policy_value(n) for n in range(horizon + 1)]

    for n in range(1, horizon + 1):
        shift = q ** (n - 1)
        for x in range(model.n_states):
            if values[n][x] < values[n - 1][x] + shift * spec.lb[x] - tol:
                return False
    return True
