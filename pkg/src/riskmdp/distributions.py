"""Exact finite-support probability distributions.

The canonical form keeps atoms strictly increasing with strictly positive
probabilities renormalized to machine sum one. Cumulative and survival
levels are precomputed once by telescoping from 1, so quantile lookups,
survival queries and the Choquet-style sums downstream are plain table
reads that stay exactly consistent with each other (in particular
``survival(d, x) + cdf(d, x) == 1.0`` holds bit-exactly).
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from .errors import (
    DomainError,
    LengthMismatch,
    NegativeProbability,
    RiskMdpError,
    ZeroMass,
)

__all__ = [
    "DiscreteDistribution",
    "make_distribution",
    "quantile",
    "survival",
    "cdf",
    "pushforward",
    "expectation",
]

# Accepted deviation of raw input probabilities from total mass one.
RAW_SUM_TOL = 1e-9
# Canonical-form check applied to every constructed instance.
CANONICAL_SUM_TOL = 1e-12


def _merge_sorted_pairs(pairs: Iterable[tuple[float, float]]) -> tuple[list[float], list[float]]:
    """Collapse consecutive equal atoms of a value-sorted pair stream.

    Merging happens on exact float equality only; nearby atoms are never
    glued together, so value-sensitive quantities like quantiles are not
    silently perturbed.
    """
    atoms: list[float] = []
    probs: list[float] = []
    for a, p in pairs:
        if atoms and a == atoms[-1]:
            probs[-1] += p
        else:
            atoms.append(a)
            probs.append(p)
    return atoms, probs


def _levels(probs: Sequence[float]) -> tuple[list[float], list[float]]:
    """Survival levels S_0..S_m and cumulative levels F_1..F_m.

    S_0 = 1 and S_i = S_{i-1} - p_i telescoped; the final survival level is
    pinned to exactly 0 (there is no mass above the top atom), which makes
    the top cumulative level exactly 1. Cumulative levels are defined as
    F_i = 1 - S_i so the two tables are exact complements.
    """
    surv = [1.0]
    acc = 1.0
    for p in probs:
        acc -= p
        surv.append(acc)
    surv[-1] = 0.0
    cum = [1.0 - s for s in surv[1:]]
    return surv, cum


@dataclass(frozen=True)
class DiscreteDistribution:
    """Finite-support law in canonical form.

    Build instances through :func:`make_distribution`, which sorts, merges
    and renormalizes raw data. The constructor itself insists on canonical
    input: strictly increasing finite atoms, strictly positive
    probabilities whose machine sum is 1 within ``CANONICAL_SUM_TOL``.
    Instances are immutable and safe to share between threads.
    """

    atoms: tuple[float, ...]
    probs: tuple[float, ...]
    survival_levels: tuple[float, ...] = field(init=False, compare=False, repr=False)
    cum_levels: tuple[float, ...] = field(init=False, compare=False, repr=False)

    def __post_init__(self) -> None:
        atoms = tuple(float(a) for a in self.atoms)
        probs = tuple(float(p) for p in self.probs)
        object.__setattr__(self, "atoms", atoms)
        object.__setattr__(self, "probs", probs)
        if len(atoms) != len(probs):
            raise LengthMismatch(f"{len(atoms)} atoms vs {len(probs)} probabilities")
        if not atoms:
            raise ZeroMass("a distribution needs at least one atom")
        for a in atoms:
            if not math.isfinite(a):
                raise RiskMdpError(f"non-finite atom {a!r}")
        for p in probs:
            if not p > 0.0:
                raise NegativeProbability(f"canonical probabilities must be > 0, got {p!r}")
        for lo, hi in zip(atoms, atoms[1:]):
            if not lo < hi:
                raise RiskMdpError(f"atoms must be strictly increasing, got {lo!r} before {hi!r}")
        total = math.fsum(probs)
        if abs(total - 1.0) > CANONICAL_SUM_TOL:
            raise RiskMdpError(f"canonical probabilities sum to {total!r}, expected 1")
        surv, cum = _levels(probs)
        object.__setattr__(self, "survival_levels", tuple(surv))
        object.__setattr__(self, "cum_levels", tuple(cum))

    def __len__(self) -> int:
        return len(self.atoms)


def make_distribution(atoms: Sequence[float], probs: Sequence[float]) -> DiscreteDistribution:
    """Canonicalize raw atom/probability pairs into a distribution.

    Zero-probability atoms are dropped, duplicate atoms merged with their
    probabilities summed, and the result divided by the computed total so
    that the canonical mass is exactly the machine sum 1. Raw totals
    further than ``RAW_SUM_TOL`` from one are rejected rather than
    repaired.

    Raises:
        LengthMismatch: unequal or empty input sequences.
        NegativeProbability: some probability is negative.
        ZeroMass: every probability is zero.
        RiskMdpError: total mass deviates from 1 by more than the tolerance.
    """
    if len(atoms) != len(probs):
        raise LengthMismatch(f"{len(atoms)} atoms vs {len(probs)} probabilities")
    if len(atoms) == 0:
        raise LengthMismatch("at least one atom is required")
    for i, p in enumerate(probs):
        if p < 0.0:
            raise NegativeProbability(f"probs[{i}] = {p!r}")
    total = math.fsum(probs)
    if total == 0.0:
        raise ZeroMass("all probabilities are zero")
    if abs(total - 1.0) > RAW_SUM_TOL:
        raise RiskMdpError(f"probabilities sum to {total!r}, expected 1 within {RAW_SUM_TOL}")
    pairs = sorted((float(a), float(p)) for a, p in zip(atoms, probs) if p > 0.0)
    merged_atoms, merged_probs = _merge_sorted_pairs(pairs)
    return DiscreteDistribution(tuple(merged_atoms), tuple(p / total for p in merged_probs))


def quantile(dist: DiscreteDistribution, u: float) -> float:
    """Left-continuous generalized inverse, the smallest atom with F(atom) >= u.

    Defined for u in (0, 1]; this is the inf-form convention, the only
    quantile exposed by the library so that value-at-risk is unambiguous.
    """
    u = float(u)
    if not 0.0 < u <= 1.0:
        raise DomainError(f"quantile level must lie in (0, 1], got {u!r}")
    return dist.atoms[bisect.bisect_left(dist.cum_levels, u)]


def survival(dist: DiscreteDistribution, x: float) -> float:
    """P(X > x), read from the precomputed survival levels."""
    return dist.survival_levels[bisect.bisect_right(dist.atoms, float(x))]


def cdf(dist: DiscreteDistribution, x: float) -> float:
    """P(X <= x), the exact complement of :func:`survival` at every x."""
    k = bisect.bisect_right(dist.atoms, float(x))
    return 0.0 if k == 0 else dist.cum_levels[k - 1]


def pushforward(dist: DiscreteDistribution, f: Callable[[float], float]) -> DiscreteDistribution:
    """Law of f(X); images that coincide exactly are merged."""
    pairs = sorted(zip((float(f(a)) for a in dist.atoms), dist.probs))
    atoms, probs = _merge_sorted_pairs(pairs)
    return DiscreteDistribution(tuple(atoms), tuple(probs))


def expectation(dist: DiscreteDistribution) -> float:
    """Mean of the law, an exactly accumulated sum of atom * probability."""
    return math.fsum(a * p for a, p in zip(dist.atoms, dist.probs))
