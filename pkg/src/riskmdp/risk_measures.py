"""Law-invariant monetary risk measures evaluated exactly on finite laws.

Positive values are losses. The specification family covers the
expectation, value-at-risk (inf-form quantile), expected shortfall
(average quantile above a level), distortion measures given by a
distortion function g via the telescoping survival sum

    rho_g(X) = sum_i x_(i) * (g(S_{i-1}) - g(S_i)),

spectral measures given by a nondecreasing right-continuous step
spectrum phi via cumulative increments of gbar = integral of phi,
the entropic certainty equivalent log E exp(gamma X) / gamma, and
convex mixtures of the above.

Coherent members (concave distortion class) expose the maximizing
density of their dual representation sup_Q E_Q[X]; an axiom checker
probes the classical properties on pseudo-random laws and couplings.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence, Union

import numpy as np

from .distributions import (
    DiscreteDistribution,
    _levels,
    _merge_sorted_pairs,
    make_distribution,
    pushforward,
)
from .errors import InvalidSpec, NotCoherent

__all__ = [
    "Expectation",
    "ValueAtRisk",
    "ExpectedShortfall",
    "DistortionFunction",
    "Distortion",
    "StepSpectrum",
    "Spectral",
    "Entropic",
    "Mixture",
    "RiskMeasure",
    "evaluate",
    "dual_sup",
    "describe",
    "is_positive_homogeneous",
    "is_comonotonic_additive",
    "is_coherent",
    "check_axioms",
    "AxiomReport",
    "PropertyCheck",
    "random_distribution",
    "random_coupling",
    "AXIOM_TOL",
]

ENTROPIC_GUARD = 700.0  # gamma * max|atom| above this would overflow exp
AXIOM_TOL = 1e-9


# ---------------------------------------------------------------------------
# Specification types


@dataclass(frozen=True)
class Expectation:
    """Risk-neutral mean."""


@dataclass(frozen=True)
class ValueAtRisk:
    """Quantile of the loss at the given level, inf-form inverse."""

    level: float

    def __post_init__(self) -> None:
        if not 0.0 < self.level < 1.0:
            raise InvalidSpec(f"value-at-risk level must lie in (0, 1), got {self.level!r}")


@dataclass(frozen=True)
class ExpectedShortfall:
    """Average of the quantile function above the given level; level 0 is the mean."""

    level: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.level < 1.0:
            raise InvalidSpec(f"expected-shortfall level must lie in [0, 1), got {self.level!r}")


@dataclass(frozen=True)
class DistortionFunction:
    """Nondecreasing g on [0, 1] with g(0) = 0 and g(1) = 1.

    Closed forms: "identity", "var_indicator" (indicator of (1-level, 1]),
    "es_cap" (min(u / (1-level), 1)). Anything else is supplied as
    "piecewise_linear" with knots covering u = 0 and u = 1.
    """

    form: str
    level: float | None = None
    knots: tuple[tuple[float, float], ...] | None = None

    def __post_init__(self) -> None:
        if self.form == "identity":
            if self.level is not None or self.knots is not None:
                raise InvalidSpec("identity distortion takes no parameters")
        elif self.form == "var_indicator":
            if self.level is None or not 0.0 < self.level < 1.0:
                raise InvalidSpec(f"var_indicator needs a level in (0, 1), got {self.level!r}")
        elif self.form == "es_cap":
            if self.level is None or not 0.0 <= self.level < 1.0:
                raise InvalidSpec(f"es_cap needs a level in [0, 1), got {self.level!r}")
        elif self.form == "piecewise_linear":
            knots = self.knots
            if not knots or len(knots) < 2:
                raise InvalidSpec("piecewise_linear needs at least the two endpoint knots")
            knots = tuple((float(u), float(g)) for u, g in knots)
            object.__setattr__(self, "knots", knots)
            us = [u for u, _ in knots]
            gs = [g for _, g in knots]
            if us[0] != 0.0 or us[-1] != 1.0:
                raise InvalidSpec("knots must start at u=0 and end at u=1")
            if gs[0] != 0.0 or gs[-1] != 1.0:
                raise InvalidSpec("distortion must satisfy g(0)=0 and g(1)=1")
            if any(not lo < hi for lo, hi in zip(us, us[1:])):
                raise InvalidSpec("knot u-coordinates must be strictly increasing")
            if any(hi < lo for lo, hi in zip(gs, gs[1:])):
                raise InvalidSpec("distortion must be nondecreasing")
        else:
            raise InvalidSpec(f"unknown distortion form {self.form!r}")

    def __call__(self, u: float) -> float:
        if self.form == "identity":
            return u
        if self.form == "var_indicator":
            return 1.0 if u > 1.0 - self.level else 0.0
        if self.form == "es_cap":
            t = u / (1.0 - self.level)
            return t if t < 1.0 else 1.0
        knots = self.knots
        if u <= 0.0:
            return 0.0
        if u >= 1.0:
            return 1.0
        idx = bisect.bisect_right(knots, (u, math.inf)) - 1
        u0, g0 = knots[idx]
        u1, g1 = knots[idx + 1]
        return g0 + (g1 - g0) * (u - u0) / (u1 - u0)

    def is_concave(self, tol: float = 1e-12) -> bool:
        if self.form in ("identity", "es_cap"):
            return True
        if self.form == "var_indicator":
            return False
        slopes = [
            (g1 - g0) / (u1 - u0)
            for (u0, g0), (u1, g1) in zip(self.knots, self.knots[1:])
        ]
        return all(s1 <= s0 + tol for s0, s1 in zip(slopes, slopes[1:]))


@dataclass(frozen=True)
class Distortion:
    """Distortion risk measure for a distortion function g."""

    g: DistortionFunction


@dataclass(frozen=True)
class StepSpectrum:
    """Nondecreasing right-continuous step spectrum phi on [0, 1).

    ``breakpoints`` lists (u_j, phi_j) with u_0 = 0; phi takes the value
    phi_j on [u_j, u_{j+1}). The spectrum must be nonnegative,
    nondecreasing and integrate to 1 over [0, 1] within 1e-12, so that its
    running integral gbar is a convex dual distortion function.
    """

    breakpoints: tuple[tuple[float, float], ...]
    _prefix: tuple[float, ...] = field(init=False, compare=False, repr=False)
    _us: tuple[float, ...] = field(init=False, compare=False, repr=False)

    def __post_init__(self) -> None:
        bps = tuple((float(u), float(p)) for u, p in self.breakpoints)
        object.__setattr__(self, "breakpoints", bps)
        if not bps:
            raise InvalidSpec("spectrum needs at least one step")
        us = [u for u, _ in bps]
        phis = [p for _, p in bps]
        if us[0] != 0.0:
            raise InvalidSpec("spectrum steps must start at u=0")
        if any(not lo < hi for lo, hi in zip(us, us[1:])) or us[-1] >= 1.0:
            raise InvalidSpec("step points must be strictly increasing and below 1")
        if any(p < 0.0 for p in phis):
            raise InvalidSpec("spectrum must be nonnegative")
        if any(hi < lo for lo, hi in zip(phis, phis[1:])):
            raise InvalidSpec("spectrum must be nondecreasing")
        prefix = [0.0]
        for j in range(len(bps)):
            right = us[j + 1] if j + 1 < len(bps) else 1.0
            prefix.append(prefix[-1] + phis[j] * (right - us[j]))
        if abs(prefix[-1] - 1.0) > 1e-12:
            raise InvalidSpec(f"spectrum integrates to {prefix[-1]!r}, expected 1")
        object.__setattr__(self, "_prefix", tuple(prefix))
        object.__setattr__(self, "_us", tuple(us))

    def gbar(self, x: float) -> float:
        """Running integral of the spectrum; gbar(1) is exactly 1."""
        if x >= 1.0:
            return 1.0
        if x <= 0.0:
            return 0.0
        j = bisect.bisect_right(self._us, x) - 1
        u_j, phi_j = self.breakpoints[j]
        return self._prefix[j] + phi_j * (x - u_j)

    def as_distortion(self) -> DistortionFunction:
        """The induced concave distortion g(u) = 1 - gbar(1 - u)."""
        inner = [
            (1.0 - u_j, 1.0 - self._prefix[j])
            for j, (u_j, _) in reversed(list(enumerate(self.breakpoints)))
            if 0.0 < 1.0 - u_j < 1.0
        ]
        knots = [(0.0, 0.0)] + inner + [(1.0, 1.0)]
        return DistortionFunction(form="piecewise_linear", knots=tuple(knots))


@dataclass(frozen=True)
class Spectral:
    """Spectral risk measure, the quantile integral weighted by a step spectrum."""

    phi: StepSpectrum


@dataclass(frozen=True)
class Entropic:
    """Entropic certainty equivalent with risk aversion gamma > 0."""

    gamma: float

    def __post_init__(self) -> None:
        if not self.gamma > 0.0:
            raise InvalidSpec(f"entropic gamma must be > 0, got {self.gamma!r}")


@dataclass(frozen=True)
class Mixture:
    """Convex combination weight * first + (1 - weight) * second."""

    weight: float
    first: "RiskMeasure"
    second: "RiskMeasure"

    def __post_init__(self) -> None:
        if not 0.0 <= self.weight <= 1.0:
            raise InvalidSpec(f"mixture weight must lie in [0, 1], got {self.weight!r}")


RiskMeasure = Union[
    Expectation, ValueAtRisk, ExpectedShortfall, Distortion, Spectral, Entropic, Mixture
]


def describe(risk: RiskMeasure) -> str:
    """Short human-readable tag used in reports and CLI output."""
    if isinstance(risk, Expectation):
        return "expectation"
    if isinstance(risk, ValueAtRisk):
        return f"VaR({risk.level:g})"
    if isinstance(risk, ExpectedShortfall):
        return f"ES({risk.level:g})"
    if isinstance(risk, Distortion):
        g = risk.g
        if g.form == "piecewise_linear":
            return f"distortion(pwl,{len(g.knots)} knots)"
        return f"distortion({g.form}@{g.level:g})" if g.level is not None else f"distortion({g.form})"
    if isinstance(risk, Spectral):
        return f"spectral({len(risk.phi.breakpoints)} steps)"
    if isinstance(risk, Entropic):
        return f"entropic({risk.gamma:g})"
    if isinstance(risk, Mixture):
        return f"mix({risk.weight:g}*{describe(risk.first)} + {1.0 - risk.weight:g}*{describe(risk.second)})"
    raise InvalidSpec(f"unknown risk specification {risk!r}")


def is_positive_homogeneous(risk: RiskMeasure) -> bool:
    if isinstance(risk, (Expectation, ValueAtRisk, ExpectedShortfall, Distortion, Spectral)):
        return True
    if isinstance(risk, Mixture):
        return is_positive_homogeneous(risk.first) and is_positive_homogeneous(risk.second)
    return False


def is_comonotonic_additive(risk: RiskMeasure) -> bool:
    # the distortion class; mixtures inherit from both components
    if isinstance(risk, (Expectation, ValueAtRisk, ExpectedShortfall, Distortion, Spectral)):
        return True
    if isinstance(risk, Mixture):
        return is_comonotonic_additive(risk.first) and is_comonotonic_additive(risk.second)
    return False


def is_coherent(risk: RiskMeasure) -> bool:
    """Monotone, translation invariant, positive homogeneous and subadditive."""
    if isinstance(risk, (Expectation, ExpectedShortfall, Spectral)):
        return True
    if isinstance(risk, Distortion):
        return risk.g.is_concave()
    if isinstance(risk, Mixture):
        return is_coherent(risk.first) and is_coherent(risk.second)
    return False


# ---------------------------------------------------------------------------
# Evaluation


def evaluate(risk: RiskMeasure, dist: DiscreteDistribution) -> float:
    """Exact value of the risk measure on a finite-support law."""
    return _value(risk, dist.atoms, dist.probs, dist.survival_levels, dist.cum_levels)


def _value(
    risk: RiskMeasure,
    atoms: Sequence[float],
    probs: Sequence[float],
    surv: Sequence[float],
    cum: Sequence[float],
) -> float:
    if isinstance(risk, Expectation):
        return math.fsum(a * p for a, p in zip(atoms, probs))
    if isinstance(risk, ValueAtRisk):
        return atoms[bisect.bisect_left(cum, risk.level)]
    if isinstance(risk, ExpectedShortfall):
        alpha = risk.level
        acc = 0.0
        prev = 0.0
        for a, f in zip(atoms, cum):
            lo = prev if prev > alpha else alpha
            if f > lo:
                acc += a * (f - lo)
            prev = f
        return acc / (1.0 - alpha)
    if isinstance(risk, Distortion):
        g = risk.g
        gs = [g(s) for s in surv]
        return math.fsum(a * (gs[i] - gs[i + 1]) for i, a in enumerate(atoms))
    if isinstance(risk, Spectral):
        gbar = risk.phi.gbar
        acc = 0.0
        prev = 0.0
        for a, f in zip(atoms, cum):
            cur = gbar(f)
            acc += a * (cur - prev)
            prev = cur
        return acc
    if isinstance(risk, Entropic):
        gamma = risk.gamma
        scale = max(abs(a) for a in atoms)
        if gamma * scale > ENTROPIC_GUARD:
            raise OverflowError(
                f"entropic guard tripped: gamma*max|atom| = {gamma * scale:g} > {ENTROPIC_GUARD:g}"
            )
        mx = max(gamma * a for a in atoms)
        acc = math.fsum(p * math.exp(gamma * a - mx) for a, p in zip(atoms, probs))
        return (mx + math.log(acc)) / gamma
    if isinstance(risk, Mixture):
        w = risk.weight
        return w * _value(risk.first, atoms, probs, surv, cum) + (1.0 - w) * _value(
            risk.second, atoms, probs, surv, cum
        )
    raise InvalidSpec(f"unknown risk specification {risk!r}")


def _risk_value_of_pairs(risk: RiskMeasure, pairs: Iterable) -> float:
    """Value on the law given by raw (value, probability) pairs.

    Canonicalizes exactly like the distribution constructor, so the result
    is bit-identical to ``evaluate(risk, make-law-of(pairs))`` without
    building the object. Used by the Bellman operators.
    """
    atoms, probs = _merge_sorted_pairs(sorted(pairs))
    if type(risk) is Expectation:
        return math.fsum(a * p for a, p in zip(atoms, probs))
    surv, cum = _levels(probs)
    return _value(risk, atoms, probs, surv, cum)


# ---------------------------------------------------------------------------
# Dual representation of coherent members


def _dual_density_sorted(risk: RiskMeasure, probs: Sequence[float]) -> list[float]:
    """Maximizing dual density aligned with the value-ascending order.

    For expected shortfall this is the greedy fill from the largest values
    under the cap p_i / (1 - level); for concave distortions the survival
    increments g(S_{i-1}) - g(S_i); for spectra the cumulative increments
    of gbar. Raises NotCoherent for anything without a sup-of-expectations
    representation.
    """
    m = len(probs)
    if isinstance(risk, Expectation):
        return list(probs)
    if isinstance(risk, ExpectedShortfall):
        cap = 1.0 / (1.0 - risk.level)
        q = [0.0] * m
        remaining = 1.0
        for i in range(m - 1, -1, -1):
            if remaining <= 0.0:
                break
            take = probs[i] * cap
            if take > remaining:
                take = remaining
            q[i] = take
            remaining -= take
        return q
    if isinstance(risk, Distortion):
        if not risk.g.is_concave():
            raise NotCoherent(f"{describe(risk)} is not coherent (non-concave distortion)")
        surv, _ = _levels(probs)
        g = risk.g
        gs = [g(s) for s in surv]
        return [gs[i] - gs[i + 1] for i in range(m)]
    if isinstance(risk, Spectral):
        _, cum = _levels(probs)
        gbar = risk.phi.gbar
        q = []
        prev = 0.0
        for f in cum:
            cur = gbar(f)
            q.append(cur - prev)
            prev = cur
        return q
    if isinstance(risk, Mixture):
        w = risk.weight
        q1 = _dual_density_sorted(risk.first, probs)
        q2 = _dual_density_sorted(risk.second, probs)
        return [w * a + (1.0 - w) * b for a, b in zip(q1, q2)]
    raise NotCoherent(f"{describe(risk)} has no dual representation as a sup of expectations")


def dual_sup(risk: RiskMeasure, dist: DiscreteDistribution) -> tuple[float, tuple[float, ...]]:
    """Value and maximizer of sup_Q E_Q[X] over the dual set of a coherent measure.

    The density is returned with respect to the atoms of ``dist`` (which
    are sorted ascending). The value agrees with :func:`evaluate` up to
    floating-point noise well below 1e-12.
    """
    q = _dual_density_sorted(risk, dist.probs)
    value = math.fsum(a * qi for a, qi in zip(dist.atoms, q))
    return value, tuple(q)


# ---------------------------------------------------------------------------
# Axiom checking


@dataclass(frozen=True)
class PropertyCheck:
    """Outcome of one axiom over all trials."""

    name: str
    status: str  # "PASS" | "FAIL" | "NOT_ASSERTED"
    trials: int
    max_violation: float
    witness: dict | None = None

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "status": self.status,
            "trials": self.trials,
            "max_violation": self.max_violation,
            "witness": self.witness,
        }


@dataclass(frozen=True)
class AxiomReport:
    risk: str
    seed: int
    trials: int
    checks: tuple[PropertyCheck, ...]

    @property
    def passed(self) -> bool:
        return all(c.status != "FAIL" for c in self.checks)

    def check(self, name: str) -> PropertyCheck:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {
            "risk": self.risk,
            "seed": self.seed,
            "trials": self.trials,
            "passed": self.passed,
            "checks": [c.to_dict() for c in self.checks],
        }


def random_distribution(rng: np.random.Generator) -> DiscreteDistribution:
    """Support size uniform in {2..8}, atoms uniform in [-10, 10], simplex weights."""
    m = int(rng.integers(2, 9))
    atoms = rng.uniform(-10.0, 10.0, m)
    probs = rng.dirichlet(np.ones(m))
    return make_distribution(atoms.tolist(), probs.tolist())


def random_coupling(rng: np.random.Generator) -> tuple[list[float], list[float], list[float]]:
    """A joint finite sample space: weights w and paired outcomes (x_i, y_i)."""
    n = int(rng.integers(2, 9))
    w = rng.dirichlet(np.ones(n)).tolist()
    xs = rng.uniform(-10.0, 10.0, n).tolist()
    ys = rng.uniform(-10.0, 10.0, n).tolist()
    return w, xs, ys


def _random_monotone_map(rng: np.random.Generator) -> Callable[[float], float]:
    s0 = float(rng.uniform(0.0, 2.0))
    kinks = [(float(rng.uniform(-8.0, 8.0)), float(rng.uniform(0.0, 1.5))) for _ in range(2)]
    c = float(rng.uniform(-5.0, 5.0))

    def h(x: float) -> float:
        acc = c + s0 * x
        for t, k in kinks:
            if x > t:
                acc += k * (x - t)
        return acc

    return h


def _claims(risk: RiskMeasure) -> set[str]:
    claims = {"normalization", "translation_invariance", "monotonicity"}
    if is_positive_homogeneous(risk):
        claims.add("positive_homogeneity")
    if is_comonotonic_additive(risk):
        claims.add("comonotonic_additivity")
    if is_coherent(risk):
        claims.update({"subadditivity", "triangle_inequality", "complementary_subadditivity"})
    return claims


def _levels_of(risk: RiskMeasure) -> list[float]:
    if isinstance(risk, (ValueAtRisk, ExpectedShortfall)):
        return [risk.level]
    if isinstance(risk, Distortion) and risk.g.level is not None:
        return [risk.g.level]
    if isinstance(risk, Mixture):
        return _levels_of(risk.first) + _levels_of(risk.second)
    return []


def _subadditivity_battery(risk: RiskMeasure) -> list[tuple[list[float], list[float], list[float]]]:
    # Disjoint-tail couplings: each of X, Y carries a loss of 10 on its own
    # small event, so the sum doubles the tail mass past the quantile level.
    couplings = []
    levels = sorted(set([0.5, 0.7, 0.9, 0.95, 0.99] + _levels_of(risk)))
    for lvl in levels:
        if not 0.0 < lvl < 1.0:
            continue
        tau = 0.8 * (1.0 - lvl)
        couplings.append(([1.0 - 2.0 * tau, tau, tau], [0.0, 10.0, 0.0], [0.0, 0.0, 10.0]))
    return couplings


def check_axioms(risk: RiskMeasure, trials: int, seed: int = 0) -> AxiomReport:
    """Probe the classical risk-measure axioms on pseudo-random inputs.

    Properties that the specification class guarantees are asserted at
    tolerance ``AXIOM_TOL`` and reported PASS/FAIL; properties outside the
    guarantee are probed anyway and reported NOT_ASSERTED, with a witness
    recorded whenever a violation is observed (useful as a negative
    control, e.g. quantile-based measures and subadditivity).
    """
    if trials < 1:
        raise InvalidSpec("at least one trial is required")
    rng = np.random.default_rng(seed)
    claims = _claims(risk)
    names = [
        "normalization",
        "translation_invariance",
        "positive_homogeneity",
        "monotonicity",
        "comonotonic_additivity",
        "subadditivity",
        "triangle_inequality",
        "complementary_subadditivity",
    ]
    worst: dict[str, float] = {n: 0.0 for n in names}
    witness: dict[str, dict | None] = {n: None for n in names}
    counts: dict[str, int] = {n: 0 for n in names}

    def record(name: str, violation: float, payload: dict) -> None:
        counts[name] += 1
        if violation > worst[name]:
            worst[name] = violation
            if violation > AXIOM_TOL and witness[name] is None:
                witness[name] = payload

    def law(values: Sequence[float], weights: Sequence[float]) -> DiscreteDistribution:
        return make_distribution(list(values), list(weights))

    zero = make_distribution([0.0], [1.0])
    record("normalization", abs(evaluate(risk, zero)), {"input": "point mass at 0"})

    pos_hom_extra = [(2.0, make_distribution([0.0, 1.0], [0.5, 0.5])),
                     (0.5, make_distribution([-3.0, 5.0], [0.3, 0.7]))]
    sub_extra = _subadditivity_battery(risk)

    for t in range(trials):
        d = random_distribution(rng)
        rho_d = evaluate(risk, d)

        m = float(rng.uniform(-5.0, 5.0))
        shifted = evaluate(risk, pushforward(d, lambda x: x + m))
        record(
            "translation_invariance",
            abs(shifted - (rho_d + m)),
            {"atoms": list(d.atoms), "probs": list(d.probs), "shift": m},
        )

        lam = float(rng.uniform(0.0, 3.0))
        if lam == 0.0:
            lam = 1.0
        scaled = evaluate(risk, pushforward(d, lambda x: lam * x))
        record(
            "positive_homogeneity",
            abs(scaled - lam * rho_d),
            {"atoms": list(d.atoms), "probs": list(d.probs), "lambda": lam},
        )
        if t < len(pos_hom_extra):
            lam2, d2 = pos_hom_extra[t]
            v = abs(evaluate(risk, pushforward(d2, lambda x: lam2 * x)) - lam2 * evaluate(risk, d2))
            record("positive_homogeneity", v,
                   {"atoms": list(d2.atoms), "probs": list(d2.probs), "lambda": lam2})

        w, xs, ys = random_coupling(rng)
        dom = [x + float(rng.uniform(0.0, 4.0)) for x in xs]
        record(
            "monotonicity",
            evaluate(risk, law(xs, w)) - evaluate(risk, law(dom, w)),
            {"weights": w, "low": xs, "high": dom},
        )

        h1 = _random_monotone_map(rng)
        h2 = _random_monotone_map(rng)
        both = evaluate(risk, pushforward(d, lambda x: h1(x) + h2(x)))
        split = evaluate(risk, pushforward(d, h1)) + evaluate(risk, pushforward(d, h2))
        record(
            "comonotonic_additivity",
            abs(both - split),
            {"atoms": list(d.atoms), "probs": list(d.probs)},
        )

        pairs = [(w, xs, ys)]
        if t < len(sub_extra):
            pairs.append(sub_extra[t])
        for cw, cx, cy in pairs:
            rho_x = evaluate(risk, law(cx, cw))
            rho_y = evaluate(risk, law(cy, cw))
            rho_sum = evaluate(risk, law([a + b for a, b in zip(cx, cy)], cw))
            payload = {"weights": cw, "x": cx, "y": cy}
            record("subadditivity", rho_sum - (rho_x + rho_y), payload)
            rho_absdiff = evaluate(risk, law([abs(a - b) for a, b in zip(cx, cy)], cw))
            record("triangle_inequality", abs(rho_x - rho_y) - rho_absdiff, payload)
            rho_neg_y = evaluate(risk, law([-b for b in cy], cw))
            record("complementary_subadditivity", (rho_x - rho_neg_y) - rho_sum, payload)

    checks = []
    for name in names:
        violated = worst[name] > AXIOM_TOL
        if name in claims:
            status = "FAIL" if violated else "PASS"
        else:
            status = "NOT_ASSERTED"
        checks.append(
            PropertyCheck(
                name=name,
                status=status,
                trials=counts[name],
                max_violation=worst[name],
                witness=witness[name],
            )
        )
    return AxiomReport(risk=describe(risk), seed=seed, trials=trials, checks=tuple(checks))
