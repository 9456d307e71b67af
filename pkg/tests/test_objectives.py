"""Formulation assembly: values, gradients, penalty, certificates."""

import numpy as np
import pytest

from polysat import (
    CARD,
    NAE,
    OR,
    XOR,
    Comparator,
    EvaluationError,
    Formula,
    Formulation,
    InputError,
    build_objective,
    count_violations,
    objective_gradient,
    objective_value,
    satisfiability_certificate,
)
from polysat.oracle import brute_force_optimum

from conftest import random_formula

ALL_FORMS = list(Formulation)


class TestValues:
    def test_square_single_clause(self):
        obj = build_objective(Formula(2, (OR(1, 2),)), Formulation.SQUARE)
        ev = objective_value(obj, np.array([1.0, 1.0]))
        assert ev.value == pytest.approx(1.0)
        assert ev.per_constraint_values.tolist() == [pytest.approx(1.0)]

    def test_abs_satisfied_xor(self):
        obj = build_objective(Formula(3, (XOR(1, 2, 3),)), Formulation.ABS)
        assert objective_value(obj, np.array([-1.0, 1.0, 1.0])).value == pytest.approx(0.0)

    def test_penalty_adds_n_at_origin(self):
        f = Formula(4, (OR(1, 2), XOR(3, 4)))
        x = np.zeros(4)
        for form in ALL_FORMS:
            base = objective_value(build_objective(f, form, 0.0), x).value
            with_pen = objective_value(build_objective(f, form, 1.0), x).value
            assert with_pen == pytest.approx(base + 4.0)

    def test_linear_counts_violations_at_boolean_points(self):
        rng = np.random.default_rng(3)
        for _ in range(40):
            f = random_formula(rng, n=7, m=9)
            a = rng.choice([-1, 1], size=7)
            expected = count_violations(f, a)
            for form in ALL_FORMS:
                obj = build_objective(f, form, 0.0)
                value = objective_value(obj, a.astype(float)).value
                assert value == pytest.approx(expected, abs=1e-9)

    def test_square_abs_nonnegative(self):
        rng = np.random.default_rng(5)
        for _ in range(40):
            f = random_formula(rng, n=6, m=8)
            x = rng.uniform(-3, 3, 6)
            for form in (Formulation.SQUARE, Formulation.ABS):
                for alpha in (0.0, 0.7):
                    assert objective_value(build_objective(f, form, alpha), x).value >= 0.0

    def test_sampled_lower_bound_is_optimum(self):
        # on the box, the linear objective never dips below the true
        # minimum violation count
        rng = np.random.default_rng(7)
        for _ in range(5):
            f = random_formula(rng, n=8, m=14)
            k_min, _ = brute_force_optimum(f)
            obj = build_objective(f, Formulation.LINEAR, 0.0)
            pts = rng.uniform(-1, 1, size=(2000, 8))
            for x in pts:
                assert objective_value(obj, x).value >= k_min - 1e-9

    def test_alpha_must_be_nonnegative(self):
        with pytest.raises(InputError):
            build_objective(Formula(1, (OR(1),)), Formulation.SQUARE, -0.1)


class TestGradients:
    def test_penalty_gradient_hand_values(self):
        f = Formula(1, ())
        obj = build_objective(f, Formulation.SQUARE, 1.0)
        assert objective_gradient(obj, np.array([0.0])).gradient[0] == pytest.approx(0.0)
        # d/dx (x^2-1)^2 = 4 x (x^2 - 1) = 24 at x = 2
        assert objective_gradient(obj, np.array([2.0])).gradient[0] == pytest.approx(24.0)

    def test_square_chain_rule_hand_value(self):
        obj = build_objective(Formula(2, (OR(1, 2),)), Formulation.SQUARE)
        ev = objective_gradient(obj, np.array([1.0, 1.0]))
        # 2 * FE * dFE/dx1 = 2 * 1 * 0.5
        assert ev.gradient[0] == pytest.approx(1.0)

    def test_abs_subgradient_zero_at_kink(self):
        # satisfied XOR sits exactly on the kink; its contribution vanishes
        obj = build_objective(Formula(2, (XOR(1, 2),)), Formulation.ABS)
        ev = objective_gradient(obj, np.array([-1.0, 1.0]))
        assert ev.value == pytest.approx(0.0)
        assert np.all(ev.gradient == 0.0)

    @pytest.mark.parametrize("form", ALL_FORMS)
    def test_finite_differences(self, form):
        rng = np.random.default_rng(13)
        h = 1e-5
        checked = 0
        while checked < 60:
            f = random_formula(rng, n=6, m=7)
            alpha = float(rng.choice([0.0, 0.4]))
            obj = build_objective(f, form, alpha)
            x = rng.uniform(-2, 2, 6)
            ev = objective_gradient(obj, x)
            if form is Formulation.ABS and np.any(np.abs(ev.per_constraint_values) < 1e-6):
                continue  # stay away from kinks
            i = int(rng.integers(0, 6))
            xp = x.copy()
            xp[i] += h
            xm = x.copy()
            xm[i] -= h
            fd = (objective_value(obj, xp).value - objective_value(obj, xm).value) / (2 * h)
            assert ev.gradient[i] == pytest.approx(fd, rel=1e-5, abs=1e-6)
            checked += 1

    def test_value_and_gradient_paths_agree(self):
        rng = np.random.default_rng(17)
        for _ in range(30):
            f = random_formula(rng, n=5, m=6)
            x = rng.uniform(-2, 2, 5)
            for form in ALL_FORMS:
                obj = build_objective(f, form, 0.3)
                assert objective_gradient(obj, x).value == pytest.approx(
                    objective_value(obj, x).value, abs=1e-12
                )


class TestCertificate:
    def test_boolean_satisfying_point(self):
        f = Formula(2, (OR(1, 2),))
        for form in ALL_FORMS:
            obj = build_objective(f, form, 0.0)
            cert = satisfiability_certificate(obj, np.array([-1.0, 1.0]))
            assert cert is not None and cert.tolist() == [-1, 1]

    def test_off_cube_zero_is_rejected(self):
        # zero objective value whose rounding falsifies: never certified
        f = Formula(2, (CARD(Comparator.GE, 2, 1, 2),))
        obj = build_objective(f, Formulation.SQUARE, 0.0)
        x = np.array([3.0, 3.0])
        assert objective_value(obj, x).value == pytest.approx(0.0, abs=1e-12)
        assert satisfiability_certificate(obj, x) is None

    def test_positive_value_is_rejected(self):
        obj = build_objective(Formula(1, (OR(1),)), Formulation.SQUARE, 0.0)
        assert satisfiability_certificate(obj, np.array([0.4]), tol=1e-8) is None

    def test_certificates_always_verify(self):
        # near-satisfying points get certified, and every certificate
        # re-verifies discretely
        rng = np.random.default_rng(19)
        hits = 0
        for _ in range(60):
            f = random_formula(rng, n=5, m=5)
            k_min, witness = brute_force_optimum(f)
            if k_min > 0:
                continue
            x = witness + rng.uniform(-0.05, 0.05, 5)
            for form in ALL_FORMS:
                obj = build_objective(f, form, 0.0)
                cert = satisfiability_certificate(obj, x, tol=0.5)
                if cert is not None:
                    hits += 1
                    assert count_violations(f, cert) == 0
        assert hits > 0  # the loop actually exercised the accept path


class TestErrors:
    def test_nonfinite_point(self):
        obj = build_objective(Formula(2, (OR(1, 2),)), Formulation.SQUARE)
        with pytest.raises(EvaluationError):
            objective_value(obj, np.array([np.nan, 0.0]))

    def test_wrong_length(self):
        obj = build_objective(Formula(2, (OR(1, 2),)), Formulation.SQUARE)
        with pytest.raises(InputError):
            objective_value(obj, np.zeros(3))
