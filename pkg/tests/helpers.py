"""Independent oracles and fixture generators shared across the tests.

The dynamic-programming oracles here are deliberately written as plain
triple loops over the tables, with their own accumulation order and the
same smallest-index tie-breaking, so they share no code with the solver
they check.
"""

from __future__ import annotations

import numpy as np

from riskmdp.mdp_core import MdpModel


def classic_finite_dp(model: MdpModel, horizon: int):
    """Expected-cost backward induction; returns (values by stage, rules by stage)."""
    beta = model.discount
    zs = list(model.z_indices)
    ps = list(model.disturbance.probs)
    J = list(model.terminal_cost)
    values = [list(J)]
    rules = []
    for _ in range(horizon):
        new_J = []
        rule = []
        for x in range(model.n_states):
            best = None
            best_a = -1
            for a in model.admissible[x]:
                acc = 0.0
                for z, p in zip(zs, ps):
                    acc += p * (model.cost[x][a][z] + beta * J[model.transition[x][a][z]])
                if best is None or acc < best:
                    best = acc
                    best_a = a
            new_J.append(best)
            rule.append(best_a)
        J = new_J
        values.append(list(J))
        rules.append(rule)
    values.reverse()
    rules.reverse()
    return values, rules


def classic_infinite_vi(model: MdpModel, tol: float = 1e-13, max_iter: int = 10**6):
    """Expected-cost value iteration to the fixed point; returns (values, rule)."""
    beta = model.discount
    zs = list(model.z_indices)
    ps = list(model.disturbance.probs)
    J = [0.0] * model.n_states

    def sweep(current):
        new_J = []
        rule = []
        for x in range(model.n_states):
            best = None
            best_a = -1
            for a in model.admissible[x]:
                acc = 0.0
                for z, p in zip(zs, ps):
                    acc += p * (model.cost[x][a][z] + beta * current[model.transition[x][a][z]])
                if best is None or acc < best:
                    best = acc
                    best_a = a
            new_J.append(best)
            rule.append(best_a)
        return new_J, rule

    for _ in range(max_iter):
        new_J, rule = sweep(J)
        residual = max(abs(a - b) for a, b in zip(new_J, J))
        J = new_J
        if beta < 1.0 and residual * beta / (1.0 - beta) <= tol:
            break
    _, rule = sweep(J)
    return J, rule


def brute_expected_shortfall(values, probs, level: float) -> float:
    """Tail average by explicit mass-walking over the sorted outcomes."""
    order = sorted(range(len(values)), key=lambda i: values[i])
    tail = 1.0 - level
    acc = 0.0
    seen = 0.0
    for i in reversed(order):
        take = min(probs[i], tail - seen)
        if take <= 0.0:
            break
        acc += values[i] * take
        seen += take
    return acc / tail


def brute_quantile(values, probs, level: float) -> float:
    """Smallest outcome whose running mass reaches the level."""
    pairs = sorted(zip(values, probs))
    acc = 0.0
    for v, p in pairs:
        acc += p
        if acc >= level:
            return v
    return pairs[-1][0]


def quantile_integral_mean(dist) -> float:
    """Mean via the exact piecewise integral of the quantile function."""
    total = 0.0
    prev = 0.0
    for atom, f in zip(dist.atoms, dist.cum_levels):
        total += atom * (f - prev)
        prev = f
    return total


def distortion_via_survival_integral(g, dist) -> float:
    """Distorted-survival integral oracle, exact on the step survival function.

    Computes integral_0^inf g(S(x)) dx minus integral_{-inf}^0 (1 - g(S(x))) dx
    segment by segment; S is constant between atoms so both integrals are
    finite sums. Independent of the telescoping-sum evaluation it checks.
    """
    atoms = list(dist.atoms)
    surv = list(dist.survival_levels)  # S_0 .. S_m, levels left of each atom gap
    points = sorted(set(atoms + [0.0]))
    total = 0.0
    for lo, hi in zip(points, points[1:]):
        # survival level on (lo, hi): mass strictly above lo
        k = sum(1 for a in atoms if a <= lo)
        level = surv[k]
        if lo >= 0.0:
            total += g(level) * (hi - lo)
        else:
            total -= (1.0 - g(level)) * (hi - lo)
    # outside [min(points), max(points)] both integrands vanish:
    # S = 1 below the support (1 - g(1) = 0) and S = 0 above it (g(0) = 0)
    return total


def make_random_model(
    rng: np.random.Generator,
    max_states: int = 6,
    max_actions: int = 4,
    max_outcomes: int = 5,
    beta: float = 0.9,
    cost_lo: float = -1.0,
    cost_hi: float = 1.0,
    zero_terminal: bool = False,
) -> MdpModel:
    """Seeded random tabular model with nonempty admissible sets."""
    from riskmdp.distributions import make_distribution

    S = int(rng.integers(2, max_states + 1))
    A = int(rng.integers(1, max_actions + 1))
    K = int(rng.integers(2, max_outcomes + 1)) if max_outcomes >= 2 else 1
    admissible = []
    for _ in range(S):
        size = int(rng.integers(1, A + 1))
        admissible.append(tuple(sorted(rng.choice(A, size=size, replace=False).tolist())))
    transition = tuple(
        tuple(tuple(int(v) for v in rng.integers(0, S, K)) for _ in range(A)) for _ in range(S)
    )
    cost = tuple(
        tuple(tuple(float(v) for v in rng.uniform(cost_lo, cost_hi, K)) for _ in range(A))
        for _ in range(S)
    )
    terminal = (
        tuple(0.0 for _ in range(S))
        if zero_terminal
        else tuple(float(v) for v in rng.uniform(cost_lo, cost_hi, S))
    )
    probs = rng.dirichlet(np.ones(K)).tolist()
    return MdpModel(
        n_states=S,
        n_actions=A,
        admissible=tuple(admissible),
        disturbance=make_distribution(list(range(K)), probs),
        transition=transition,
        cost=cost,
        terminal_cost=terminal,
        discount=beta,
    )


def make_enumeration_model(rng: np.random.Generator) -> MdpModel:
    """Small zero-terminal model sized for exhaustive policy enumeration."""
    return make_random_model(
        rng, max_states=3, max_actions=2, max_outcomes=3, beta=0.9, zero_terminal=True
    )
