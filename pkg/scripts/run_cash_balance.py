#!/usr/bin/env python3
"""Solve the infinite-horizon cash balance model and report the policy band.

Example:
    python scripts/run_cash_balance.py --level 0.9 --beta 0.9 --half-width 5
"""

import argparse

from riskmdp.distributions import make_distribution
from riskmdp.examples import CashBalanceParams, build_cash_balance, extract_two_thresholds
from riskmdp.mdp_core import constant_bounding_spec
from riskmdp.risk_measures import Expectation, ExpectedShortfall
from riskmdp.solvers import solve_infinite


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--level", type=float, default=0.9, help="expected-shortfall level")
    ap.add_argument("--expectation", action="store_true", help="use the mean instead")
    ap.add_argument("--beta", type=float, default=0.9)
    ap.add_argument("--half-width", type=int, default=5)
    ap.add_argument("--holding-scale", type=float, default=1.0)
    ap.add_argument("--fee", type=float, default=1.0)
    ap.add_argument("--tol", type=float, default=1e-8)
    args = ap.parse_args()

    params = CashBalanceParams(
        levels=tuple(float(v) for v in range(-args.half_width, args.half_width + 1)),
        holding_cost=lambda v: args.holding_scale * v * v,
        transfer_up=args.fee,
        transfer_down=args.fee,
        z_law=make_distribution([-1.0, 0.0, 1.0], [1 / 3, 1 / 3, 1 / 3]),
        beta=args.beta,
    )
    model = build_cash_balance(params)
    risk = Expectation() if args.expectation else ExpectedShortfall(args.level)
    spec = constant_bounding_spec(model)
    result = solve_infinite(model, risk, spec, args.tol)
    if not result.converged:
        raise SystemExit(f"did not converge in {result.iterations} iterations")

    band = extract_two_thresholds(
        result.policy.stages[0],
        model.state_labels,
        [model.state_labels[a] for a in model.admissible[0]],
    )
    print(f"converged in {result.iterations} iterations, error bound {result.error_bound:.2e}")
    print(f"policy band: {band}")
    print(f"{'level':>7} {'value':>12} {'target':>8}")
    for x in range(model.n_states):
        target = model.state_labels[result.policy.stages[0][x]]
        print(f"{model.state_labels[x]:>7.1f} {result.value[x]:>12.6f} {target:>8.1f}")
    vals = list(result.value)
    second = [vals[i + 1] - 2 * vals[i] + vals[i - 1] for i in range(1, len(vals) - 1)]
    print(f"smallest second difference (convexity check): {min(second):+.2e}")


if __name__ == "__main__":
    main()
