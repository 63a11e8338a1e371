from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lagcubic.errors import NonUnitError, SchemaError, StructuralError
from lagcubic.series import (FormalSeries, LogSeries, exp_log_series, series_arith,
                             series_compose_reversion, series_diff, series_int, series_invert)
from oracles import compose_univariate
from strategies import series

F = Fraction


def uni(coeffs, order):
    return FormalSeries.from_coefficients(coeffs, order)


def u(order, nvars=1, i=0):
    return FormalSeries.variable(i, nvars, order)


class TestArithmetic:
    def test_difference_of_squares(self):
        assert series_arith(uni([1, 1], 2), uni([1, -1], 2), "mul") == uni([1, 0, -1], 2)

    def test_add_zero(self):
        a = uni([3, F(1, 2), 7], 2)
        assert series_arith(a, FormalSeries.zero(1, 2), "add") == a

    def test_hand_multiplication(self):
        assert uni([1, 1, 1], 2) * uni([1, 1], 2) == uni([1, 2, 2], 2)

    def test_truncation_takes_min_order(self):
        assert (uni([1, 1], 3) + uni([1], 1)).order == 1

    def test_mismatched_variables_rejected(self):
        with pytest.raises(StructuralError):
            FormalSeries.one(1, 2) + FormalSeries.one(2, 2)

    def test_unknown_op(self):
        with pytest.raises(ValueError):
            series_arith(uni([1], 1), uni([1], 1), "div")

    def test_scalar_coercion(self):
        assert 2 + u(2) == uni([2, 1], 2)
        assert 1 - u(2) == uni([1, -1], 2)


class TestInvert:
    def test_geometric(self):
        assert series_invert(uni([1, -1], 3)) == uni([1, 1, 1, 1], 3)

    def test_constant(self):
        assert series_invert(FormalSeries.constant(2, 1, 0)) == FormalSeries.constant(F(1, 2), 1, 0)

    def test_multiply_back(self):
        inv = series_invert(uni([1, 120], 2))
        assert inv == uni([1, -120, 14400], 2)
        assert inv * uni([1, 120], 2) == FormalSeries.one(1, 2)

    def test_non_unit(self):
        with pytest.raises(NonUnitError):
            series_invert(uni([0, 1], 3))


class TestReversion:
    def test_identity(self):
        assert series_compose_reversion(u(4)) == u(4)

    def test_quadratic(self):
        z = series_compose_reversion(uni([0, 1, 1], 3))
        assert z == uni([0, 1, -1, 2], 3)
        # substituting back gives t + O(t^4)
        back = compose_univariate(uni([0, 1, 1], 3).coefficient_list(), z.coefficient_list(), 3)
        assert back == [0, 1, 0, 0]

    def test_linear(self):
        assert series_compose_reversion(uni([0, 2], 2)) == uni([0, F(1, 2)], 2)

    def test_requires_zero_constant_and_unit_linear_term(self):
        with pytest.raises(Exception):
            series_compose_reversion(uni([1, 1], 2))
        with pytest.raises(Exception):
            series_compose_reversion(uni([0, 0, 1], 2))


class TestCalculus:
    def test_diff_cubic(self):
        assert series_diff(uni([0, 0, 0, F(1, 6)], 3)) == uni([0, 0, F(1, 2)], 2)

    def test_integrate(self):
        assert series_int(uni([0, 1], 1)) == uni([0, 0, F(1, 2)], 2)

    def test_partial(self):
        uv = u(2, 2, 0) * u(2, 2, 1)
        assert series_diff(uv, 0) == u(1, 2, 1)

    def test_theta(self):
        assert uni([5, 1, 1], 2).theta() == uni([0, 1, 2], 2)

    def test_bad_variable(self):
        with pytest.raises(StructuralError):
            series_diff(u(2), 3)


class TestExpLog:
    def test_exp_zero(self):
        assert exp_log_series(FormalSeries.zero(1, 3), "exp") == FormalSeries.one(1, 3)

    def test_mercator(self):
        assert exp_log_series(uni([1, 1], 3), "log") == uni([0, 1, F(-1, 2), F(1, 3)], 3)

    def test_exp(self):
        assert exp_log_series(u(2), "exp") == uni([1, 1, F(1, 2)], 2)

    def test_exp_needs_zero_constant(self):
        with pytest.raises(Exception):
            exp_log_series(uni([1, 1], 2), "exp")

    def test_log_needs_unit_constant(self):
        with pytest.raises(Exception):
            exp_log_series(uni([2, 1], 2), "log")


class TestWireFormat:
    def test_round_trip(self):
        a = uni([1, F(-3, 7), 0, 5], 3)
        assert FormalSeries.from_json(a.to_json()) == a

    @pytest.mark.parametrize("doc", [
        {"vars": 1, "order": 2, "terms": [{"exp": [3], "num": "1", "den": "1"}]},
        {"vars": 1, "order": 2, "terms": [{"exp": [1], "num": "1", "den": "0"}]},
        {"vars": 1, "terms": []},
        {"vars": 2, "order": 2, "terms": [{"exp": [1], "num": "1", "den": "1"}]},
        "not a series",
    ])
    def test_malformed(self, doc):
        with pytest.raises(SchemaError):
            FormalSeries.from_json(doc)


class TestLogSeries:
    def test_theta_of_log(self):
        L = LogSeries.log_power(1, 3)
        assert L.theta() == LogSeries([FormalSeries.one(1, 3)])

    def test_log_degree(self):
        assert LogSeries([uni([1], 2), uni([0], 2), uni([0], 2)]).log_degree == 0


# -- properties --------------------------------------------------------------

@settings(max_examples=60, deadline=None)
@given(st.data())
def test_ring_axioms(data):
    nvars = data.draw(st.integers(1, 2))
    order = data.draw(st.integers(0, 4))
    a, b, c = (data.draw(series(nvars, order)) for _ in range(3))
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert (a + b) + c == a + (b + c)
    assert a * b == b * a


@settings(max_examples=100, deadline=None)
@given(series(unit=True))
def test_invert_round_trip(a):
    assert a * a.invert() == FormalSeries.one(a.num_vars, a.order)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 6), st.data())
def test_reversion_round_trip(order, data):
    rest = data.draw(series(1, order, min_degree=2))
    lead = data.draw(st.fractions(min_value=-3, max_value=3, max_denominator=3).filter(lambda x: x != 0))
    t = rest + u(order).scale(lead)
    z = t.reversion()
    assert t.compose(z) == u(order)
    assert z.compose(t) == u(order)


@settings(max_examples=60, deadline=None)
@given(series(min_degree=1), st.data())
def test_diff_int_identity(a, data):
    var = data.draw(st.integers(0, a.num_vars - 1))
    assert a.integrate(var).diff(var) == a


@settings(max_examples=40, deadline=None)
@given(series(1, order=st.integers(1, 5)))
def test_int_diff_drops_constant(a):
    assert a.diff().integrate() == a - a.constant_term


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_theta_product_rule_on_log_series(data):
    order = data.draw(st.integers(0, 4))

    def log_series():
        k = data.draw(st.integers(0, 2))
        return LogSeries([data.draw(series(1, order)) for _ in range(k + 1)])

    a, b = log_series(), log_series()
    assert (a * b).theta() == a.theta() * b + a * b.theta()


@settings(max_examples=40, deadline=None)
@given(series(1, min_degree=1))
def test_exp_log_inverse(a):
    assert a.exp().log() == a
