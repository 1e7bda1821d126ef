"""Adversary DP, minimax game value, and the inf-sup equivalence check."""

import math

import numpy as np
import pytest

from riskmdp.errors import NotCoherent, TooLargeForEnumeration
from riskmdp.examples import build_casino
from riskmdp.mdp_core import Policy, constant_bounding_spec
from riskmdp.risk_measures import (
    Entropic,
    Expectation,
    ExpectedShortfall,
    Spectral,
    StepSpectrum,
    ValueAtRisk,
    evaluate,
    random_distribution,
)
from riskmdp.robust_check import (
    count_markov_policies,
    dual_set,
    enumerate_markov_policies,
    nature_best_response,
    robust_game_value,
    robust_value_iteration,
    verify_equivalence,
)
from riskmdp.solvers import evaluate_policy_finite, solve_finite, solve_infinite

from helpers import classic_finite_dp, make_enumeration_model, make_random_model


def random_policy(rng, model, horizon):
    stages = tuple(
        tuple(model.admissible[x][int(rng.integers(0, len(model.admissible[x])))]
              for x in range(model.n_states))
        for _ in range(horizon)
    )
    return Policy(stages=stages)


class TestDualSet:
    def test_rejects_non_coherent(self):
        for risk in (ValueAtRisk(0.5), Entropic(1.0)):
            with pytest.raises(NotCoherent):
                dual_set(risk)

    def test_one_step_duality_matches_evaluate(self):
        rng = np.random.default_rng(50)
        es = dual_set(ExpectedShortfall(0.6))
        spectral = dual_set(
            Spectral(StepSpectrum(breakpoints=((0.0, 0.25), (0.5, 1.75))))
        )
        for _ in range(300):
            d = random_distribution(rng)
            perm = rng.permutation(len(d.atoms))
            values = [d.atoms[i] for i in perm]
            probs = [d.probs[i] for i in perm]
            for ds in (es, spectral):
                got, density = ds.sup(values, probs)
                assert got == pytest.approx(evaluate(ds.risk, d), abs=1e-12)
                assert ds.feasible(density, probs)

    def test_es_density_caps(self):
        ds = dual_set(ExpectedShortfall(0.5))
        values = [3.0, 1.0, 2.0]
        probs = [0.25, 0.5, 0.25]
        value, density = ds.sup(values, probs)
        assert value == pytest.approx(2.0 * 0.5 + 3.0 * 0.5, abs=1e-14)
        assert density == (0.5, 0.0, 0.5)

    def test_expectation_singleton(self):
        ds = dual_set(Expectation())
        value, density = ds.sup([5.0, -1.0], [0.4, 0.6])
        assert density == (0.4, 0.6)
        assert value == pytest.approx(5.0 * 0.4 - 0.6, abs=1e-14)


class TestNatureBestResponse:
    def test_singleton_dual_set_is_policy_evaluation(self):
        rng = np.random.default_rng(51)
        for _ in range(10):
            m = make_enumeration_model(rng)
            policy = random_policy(rng, m, 3)
            w = nature_best_response(m, dual_set(Expectation()), policy, 3)
            vals = evaluate_policy_finite(m, Expectation(), policy, 3)
            for x in range(m.n_states):
                assert w[x] == pytest.approx(vals[0][x], abs=1e-12)

    def test_casino_single_stage_duality(self):
        m = build_casino(0.75, 1, [0, 1, 2, 3])
        bold = Policy(
            stages=(tuple(max(m.admissible[x]) for x in range(m.n_states)),), stationary=True
        )
        w = nature_best_response(m, dual_set(ExpectedShortfall(0.5)), bold, 1)
        vals = evaluate_policy_finite(m, ExpectedShortfall(0.5), bold, 1)
        for x in range(m.n_states):
            assert w[x] == pytest.approx(vals[0][x], abs=1e-12)

    def test_multi_stage_matches_primal_recursion(self):
        rng = np.random.default_rng(52)
        for _ in range(15):
            m = make_random_model(rng, max_states=4, zero_terminal=True)
            policy = random_policy(rng, m, 3)
            for level in (0.5, 0.9):
                ds = dual_set(ExpectedShortfall(level))
                w = nature_best_response(m, ds, policy, 3)
                vals = evaluate_policy_finite(m, ExpectedShortfall(level), policy, 3)
                for x in range(m.n_states):
                    assert w[x] == pytest.approx(vals[0][x], abs=1e-10)


class TestRobustGameValue:
    def test_single_stage_min_of_dual_sups(self):
        rng = np.random.default_rng(53)
        m = make_enumeration_model(rng)
        ds = dual_set(ExpectedShortfall(0.7))
        g = robust_game_value(m, ds, 1)
        primal = solve_finite(m, ExpectedShortfall(0.7), 1)
        for x in range(m.n_states):
            assert g[x] == pytest.approx(primal.values[0][x], abs=1e-12)

    def test_expectation_dual_set_is_classic_dp(self):
        rng = np.random.default_rng(54)
        for _ in range(10):
            m = make_enumeration_model(rng)
            g = robust_game_value(m, dual_set(Expectation()), 3)
            values, _ = classic_finite_dp(m, 3)
            for x in range(m.n_states):
                assert g[x] == pytest.approx(values[0][x], abs=1e-10)

    def test_es_zero_and_flat_spectrum_collapse_to_classic_dp(self):
        rng = np.random.default_rng(64)
        flat = Spectral(StepSpectrum(breakpoints=((0.0, 1.0),)))
        for _ in range(5):
            m = make_enumeration_model(rng)
            values, _ = classic_finite_dp(m, 3)
            for risk in (ExpectedShortfall(0.0), flat):
                g = robust_game_value(m, dual_set(risk), 3)
                for x in range(m.n_states):
                    assert g[x] == pytest.approx(values[0][x], abs=1e-10)

    def test_fair_casino_es_never_bets(self):
        m = build_casino(0.5, 2, [0, 1, 2, 3])
        g = robust_game_value(m, dual_set(ExpectedShortfall(0.5)), 2)
        for x in range(m.n_states):
            assert g[x] == pytest.approx(-float(x), abs=1e-12)

    def test_interchange_bound(self):
        rng = np.random.default_rng(55)
        for _ in range(10):
            m = make_enumeration_model(rng)
            ds = dual_set(ExpectedShortfall(0.8))
            g = robust_game_value(m, ds, 2)
            policy = random_policy(rng, m, 2)
            w = nature_best_response(m, ds, policy, 2)
            for x in range(m.n_states):
                assert g[x] <= w[x] + 1e-12


class TestVerifyEquivalence:
    def test_small_model_exhaustive(self):
        rng = np.random.default_rng(56)
        m = make_enumeration_model(rng)
        report = verify_equivalence(m, ExpectedShortfall(0.7), 2, 1e-10)
        assert report.passed
        assert report.n_policies == count_markov_policies(m, 2)
        assert report.max_diff_dp_robust <= 1e-10
        assert report.max_diff_enumeration <= 1e-10

    def test_spectral_and_mixture_kinds(self):
        from riskmdp.risk_measures import Mixture

        rng = np.random.default_rng(65)
        m = make_enumeration_model(rng)
        spectral = Spectral(StepSpectrum(breakpoints=((0.0, 0.25), (0.4, 1.5))))
        mixed = Mixture(0.5, Expectation(), ExpectedShortfall(0.9))
        for risk in (spectral, mixed):
            report = verify_equivalence(m, risk, 2, 1e-10)
            assert report.passed, report.to_dict()

    def test_expectation_is_classic_optimality(self):
        rng = np.random.default_rng(57)
        m = make_enumeration_model(rng)
        report = verify_equivalence(m, Expectation(), 2, 1e-10)
        assert report.passed

    def test_var_rejected(self):
        rng = np.random.default_rng(58)
        m = make_enumeration_model(rng)
        with pytest.raises(NotCoherent):
            verify_equivalence(m, ValueAtRisk(0.5), 2, 1e-10)

    def test_enumeration_cutoff(self):
        rng = np.random.default_rng(59)
        m = make_enumeration_model(rng)
        with pytest.raises(TooLargeForEnumeration):
            verify_equivalence(m, ExpectedShortfall(0.5), 2, 1e-10, cutoff=1)

    def test_dp_only_mode(self):
        rng = np.random.default_rng(60)
        m = make_enumeration_model(rng)
        report = verify_equivalence(
            m, ExpectedShortfall(0.5), 2, 1e-10, enumerate_policies=False
        )
        assert report.enumerated_values is None
        assert report.n_policies is None
        assert report.passed

    def test_policy_enumeration_counts(self):
        rng = np.random.default_rng(61)
        m = make_enumeration_model(rng)
        policies = list(enumerate_markov_policies(m, 2))
        assert len(policies) == count_markov_policies(m, 2)
        assert len({p.stages for p in policies}) == len(policies)


class TestRobustValueIteration:
    def test_matches_primal_infinite_solver(self):
        rng = np.random.default_rng(62)
        for _ in range(5):
            m = make_random_model(rng, max_states=4, zero_terminal=True)
            spec = constant_bounding_spec(m)
            tol = 1e-9
            risk = ExpectedShortfall(0.8)
            primal = solve_infinite(m, risk, spec, tol)
            robust = robust_value_iteration(m, dual_set(risk), spec, tol)
            assert primal.converged and robust.converged
            for x in range(m.n_states):
                gap = abs(primal.value[x] - robust.value[x])
                budget = tol + primal.error_bound + robust.error_bound
                assert gap <= budget * max(spec.b()) + 1e-12
