from collections import Counter
from fractions import Fraction

import pytest

from urnchain.analysis import (
    EmpiricalDistribution,
    chi_square_statistic,
    chi_square_threshold,
    evaluate_polynomials,
    sample_from_row,
    sample_row_endpoints,
    tv_distance,
)
from urnchain.coefficients import (
    IntegerParameters,
    Parameters,
    TransitionRow,
    lu_coefficients,
    lu_coefficients_integer,
    reconstruct_row,
)
from urnchain.urns import COMPOSITE, RngStream, sample_endpoints

F = Fraction
IP = IntegerParameters(2, 3, 1)


class TestTvDistance:
    def test_identical_distributions(self):
        assert tv_distance({0: 0.5, 1: 0.5}, {0: 0.5, 1: 0.5}) == 0.0

    def test_disjoint_point_masses(self):
        assert tv_distance({0: 1.0}, {1: 1.0}) == 1.0

    def test_direct_formula(self):
        assert tv_distance({0: 0.5, 1: 0.5}, {0: 0.25, 1: 0.75}) == pytest.approx(0.25)

    def test_accepts_rows_and_empiricals(self):
        row = reconstruct_row(lu_coefficients_integer(IP, 0), 0)
        empirical = EmpiricalDistribution.from_counts({0: 3, 1: 4})
        assert tv_distance(empirical, row) == pytest.approx(0.0, abs=1e-12)

    def test_symmetry(self):
        p, q = {0: 0.2, 1: 0.8}, {0: 0.7, 1: 0.3}
        assert tv_distance(p, q) == tv_distance(q, p)


class TestChiSquare:
    def test_exactly_proportional_sample(self):
        empirical = EmpiricalDistribution.from_counts({0: 300, 1: 400})
        statistic, dof = chi_square_statistic(empirical, {0: F(3, 7), 1: F(4, 7)})
        assert statistic == pytest.approx(0.0, abs=1e-20)
        assert dof == 1

    def test_seeded_large_sample_below_999_quantile(self):
        row = reconstruct_row(lu_coefficients_integer(IP, 0), 0)
        counts = sample_row_endpoints(row, 100000, RngStream(0x4A50))
        statistic, dof = chi_square_statistic(
            EmpiricalDistribution.from_counts(counts), row
        )
        assert dof == 1
        assert statistic < 10.83
        assert statistic < chi_square_threshold(dof)

    def test_zero_expected_cell_rejected(self):
        empirical = EmpiricalDistribution.from_counts({0: 1})
        with pytest.raises(ValueError, match="zero expected"):
            chi_square_statistic(empirical, {0: 1.0, 1: 0.0})

    def test_mismatched_support_rejected(self):
        empirical = EmpiricalDistribution.from_counts({0: 1, 5: 1})
        with pytest.raises(ValueError, match="support"):
            chi_square_statistic(empirical, {0: 0.5, 1: 0.5})

    def test_quantile_matches_table_value(self):
        assert chi_square_threshold(1) == pytest.approx(10.828, abs=5e-3)


class TestRowSampling:
    def test_degenerate_row_always_moves_up(self):
        row = TransitionRow(0, 1, 0, None, None)
        gen = RngStream(3).generator()
        assert all(sample_from_row(row, gen) == 1 for _ in range(200))

    def test_row_zero_frequencies_within_four_standard_errors(self):
        row = reconstruct_row(lu_coefficients_integer(IP, 0), 0)
        trials = 100000
        counts = sample_row_endpoints(row, trials, RngStream(77))
        for state, p in row.probabilities().items():
            p = float(p)
            se = (p * (1 - p) / trials) ** 0.5
            assert abs(counts.get(state, 0) / trials - p) <= 4 * se

    def test_reference_and_urn_samplers_agree_in_distribution(self):
        trials = 100000
        c = lu_coefficients_integer(IP, 5)
        for m in range(6):
            row = reconstruct_row(c, m)
            row_counts = sample_row_endpoints(row, trials, RngStream(m))
            urn_counts = sample_endpoints(IP, m, COMPOSITE, trials, 1000 + m)
            tv = tv_distance(
                EmpiricalDistribution.from_counts(row_counts),
                EmpiricalDistribution.from_counts(urn_counts),
            )
            assert tv < 0.01
            # both samplers target the same exact row and pass the same cut
            for counts in (row_counts, urn_counts):
                statistic, dof = chi_square_statistic(
                    EmpiricalDistribution.from_counts(counts), row
                )
                assert statistic < chi_square_threshold(dof), (m, statistic)


class TestEmpiricalDistribution:
    def test_frequencies_sum_to_one(self):
        empirical = EmpiricalDistribution.from_counts(Counter({2: 5, 3: 15}))
        assert empirical.total == 20
        assert sum(empirical.frequencies().values()) == pytest.approx(1.0)

    def test_rejects_empty_and_negative(self):
        with pytest.raises(ValueError):
            EmpiricalDistribution.from_counts({})
        with pytest.raises(ValueError):
            EmpiricalDistribution.from_counts({0: -1, 1: 2})


class TestPolynomials:
    def test_normalized_at_one_exactly(self):
        c = lu_coefficients_integer(IP, 100)
        values = evaluate_polynomials(c, 1, 100).values
        assert len(values) == 101
        assert all(value == 1 for value in values)

    def test_first_value_at_zero(self):
        c = lu_coefficients_integer(IP, 1)
        evaluation = evaluate_polynomials(c, F(0), 1)
        assert evaluation.values[0] == 1
        assert evaluation.values[1] == F(-3, 4)

    def test_leading_value_is_one_everywhere(self):
        c = lu_coefficients_integer(IP, 0)
        for x in (F(0), F(7, 3), F(-2)):
            assert evaluate_polynomials(c, x, 0).values == (1,)

    def test_recursion_residual_vanishes(self):
        # x q_n - (d_n q_{n-2} + c_n q_{n-1} + b_n q_n + a_n q_{n+1}) = 0
        c = lu_coefficients_integer(IP, 40)
        for x in (F(1), F(-1, 2), F(5, 7)):
            q = evaluate_polynomials(c, x, 40).values
            for n in range(40):
                row = reconstruct_row(c, n)
                acc = row.b * q[n] + row.a * q[n + 1]
                if n >= 1:
                    acc += row.c * q[n - 1]
                if n >= 2:
                    acc += row.d * q[n - 2]
                assert x * q[n] - acc == 0

    def test_float_route_matches_exact_route(self):
        ip = IntegerParameters(3, 2, 1)
        exact = evaluate_polynomials(lu_coefficients_integer(ip, 30), F(1, 2), 30)
        approx = evaluate_polynomials(
            lu_coefficients(Parameters(1 / 3, 1 / 2, 1.0), 30), 0.5, 30
        )
        for exact_value, float_value in zip(exact.values, approx.values):
            assert float_value == pytest.approx(float(exact_value), rel=1e-9)

    def test_insufficient_coefficients(self):
        c = lu_coefficients_integer(IP, 3)
        with pytest.raises(ValueError, match="insufficient"):
            evaluate_polynomials(c, 1, 10)
