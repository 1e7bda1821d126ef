#!/usr/bin/env python3
"""Solve the casino betting model and compare against its closed form.

Example:
    python scripts/run_casino.py --win-prob 0.75 --horizon 3 --risk es --level 0.5
"""

import argparse

from riskmdp.examples import build_casino, casino_closed_form, negated_gain_law
from riskmdp.risk_measures import Expectation, ExpectedShortfall, ValueAtRisk, describe, evaluate
from riskmdp.solvers import solve_finite


def pick_risk(name, level):
    if name == "expectation":
        return Expectation()
    if name == "es":
        return ExpectedShortfall(level)
    if name == "var":
        return ValueAtRisk(level)
    raise SystemExit(f"unknown risk {name!r}")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--win-prob", type=float, default=0.75)
    ap.add_argument("--horizon", type=int, default=3)
    ap.add_argument("--risk", choices=("expectation", "es", "var"), default="es")
    ap.add_argument("--level", type=float, default=0.5)
    ap.add_argument("--max-capital", type=int, default=3)
    args = ap.parse_args()

    risk = pick_risk(args.risk, args.level)
    grid = list(range(args.max_capital + 1))
    model = build_casino(args.win_prob, args.horizon, grid)
    result = solve_finite(model, risk, args.horizon)
    unit_loss = evaluate(risk, negated_gain_law(args.win_prob))

    print(f"risk {describe(risk)}, win probability {args.win_prob}, horizon {args.horizon}")
    print(f"per-unit loss value {unit_loss:+.6f} -> "
          + ("bold play" if unit_loss < 0 else "do not play"))
    print(f"{'capital':>8} {'solver J0':>14} {'closed form':>14} {'bet':>5}")
    for x in grid:
        solved = result.values[0][x]
        closed = casino_closed_form(args.win_prob, risk, args.horizon, x)
        bet = result.policy.stages[0][x]
        print(f"{x:>8} {solved:>14.8f} {closed:>14.8f} {bet:>5}")


if __name__ == "__main__":
    main()
