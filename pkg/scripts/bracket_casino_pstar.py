#!/usr/bin/env python3
"""Bracket the critical win probability of the casino model per risk measure.

Betting is favorable once the risk value of the per-unit loss turns
negative; by monotonicity of that value in the win probability there is
a single switch point p*. No closed form is asserted for tail-average
measures, so this reports an empirical bracket from bisection and
cross-checks the solver's policy on both sides.
"""

import argparse

from riskmdp.examples import build_casino, negated_gain_law
from riskmdp.risk_measures import (
    Entropic,
    Expectation,
    ExpectedShortfall,
    ValueAtRisk,
    describe,
    evaluate,
)
from riskmdp.solvers import solve_finite


def unit_loss(risk, p):
    return evaluate(risk, negated_gain_law(p))


def bracket(risk, tol=1e-12):
    lo, hi = 0.0, 1.0
    if unit_loss(risk, hi) >= 0.0:
        return None  # never favorable
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if unit_loss(risk, mid) >= 0.0:
            lo = mid
        else:
            hi = mid
    return lo, hi


def solver_bets(risk, p):
    model = build_casino(p, 2, [0, 1, 2, 3])
    result = solve_finite(model, risk, 2)
    return result.policy.stages[0][3]  # bet at capital 3


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--probe", type=float, default=1e-6,
                    help="distance from the bracket at which the policy is cross-checked")
    args = ap.parse_args()

    risks = [
        Expectation(),
        ExpectedShortfall(0.5),
        ExpectedShortfall(0.9),
        ValueAtRisk(0.5),
        ValueAtRisk(0.9),
        Entropic(1.0),
    ]
    print(f"{'risk':>16} {'bracket for p*':>30} {'bet@3 below':>12} {'bet@3 above':>12}")
    for risk in risks:
        got = bracket(risk)
        if got is None:
            print(f"{describe(risk):>16} {'never favorable on [0, 1]':>30}")
            continue
        lo, hi = got
        below = solver_bets(risk, max(lo - args.probe, 0.0))
        above = solver_bets(risk, min(hi + args.probe, 1.0))
        print(f"{describe(risk):>16} [{lo:.9f}, {hi:.9f}] {below:>12} {above:>12}")


if __name__ == "__main__":
    main()
