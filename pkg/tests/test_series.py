import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import poly_mul
from spinorlab.errors import NonUnitDivisor, OrderMismatch
from spinorlab.series import TruncSeries, div, geom, linear, mul, product_of_geoms

unit_angle = st.floats(0, 2 * np.pi, allow_nan=False)
coef = st.complex_numbers(max_magnitude=2, allow_nan=False, allow_infinity=False)


def series_of(order):
    return st.lists(coef, min_size=order + 1, max_size=order + 1).map(lambda c: TruncSeries.from_poly(c, order))


@pytest.mark.parametrize(
    "eta, N, expected",
    [(0, 4, [1, 0, 0, 0, 0]), (1, 3, [1, 1, 1, 1]), (1j, 2, [1, 1j, -1])],
)
def test_geom_examples(eta, N, expected):
    np.testing.assert_allclose(geom(eta, N).coeffs, expected, atol=1e-15)


def test_small_products():
    x = TruncSeries.from_poly([1, 1], 1)
    y = TruncSeries.from_poly([1, -1], 1)
    np.testing.assert_allclose((x * y).coeffs, [1, 0])
    g = geom(0.3 + 0.4j, 10) * linear(0.3 + 0.4j, 10)
    np.testing.assert_allclose(g.coeffs, [1] + [0] * 10, atol=1e-15)


def test_division_examples():
    x = TruncSeries.from_poly([1, 0, 0], 2)
    y = TruncSeries.from_poly([1, -1, 0], 2)
    np.testing.assert_allclose((x / y).coeffs, [1, 1, 1])
    z = TruncSeries.from_poly([2, 3, -1, 5], 3)
    np.testing.assert_allclose((z / z).coeffs, [1, 0, 0, 0], atol=1e-14)


def test_errors():
    with pytest.raises(OrderMismatch):
        TruncSeries.one(3) + TruncSeries.one(4)
    with pytest.raises(OrderMismatch):
        mul(TruncSeries.one(3), TruncSeries.one(2))
    with pytest.raises(NonUnitDivisor):
        TruncSeries.one(3) / TruncSeries.from_poly([0, 1], 3)
    with pytest.raises(ZeroDivisionError):
        div(TruncSeries.one(3), TruncSeries.from_poly([1e-15, 1], 3))


def test_order_is_fixed():
    s = TruncSeries.from_poly([1, 2, 3, 4, 5], 2)
    assert s.order == 2 and len(s.coeffs) == 3
    assert TruncSeries.from_poly([1], 5).coeffs.shape == (6,)
    with pytest.raises(ValueError):
        s.coeffs[0] = 7


@settings(max_examples=100, deadline=None)
@given(series_of(12), series_of(12))
def test_mul_matches_convolution_and_commutes(x, y):
    np.testing.assert_allclose((x * y).coeffs, poly_mul(x.coeffs, y.coeffs, 12), atol=1e-12)
    np.testing.assert_allclose((x * y).coeffs, (y * x).coeffs, atol=1e-12)


@settings(max_examples=100, deadline=None)
@given(series_of(40), series_of(40), series_of(40))
def test_ring_axioms(x, y, z):
    # scaled to unit-size coefficients, matching the identity-check regime
    x, y, z = (s.scale(1 / max(1.0, np.abs(s.coeffs).sum())) for s in (x, y, z))
    np.testing.assert_allclose(((x * y) * z).coeffs, (x * (y * z)).coeffs, atol=1e-10)
    np.testing.assert_allclose((x * (y + z)).coeffs, (x * y + x * z).coeffs, atol=1e-10)
    np.testing.assert_allclose((x - x).coeffs, 0, atol=0)


@settings(max_examples=100, deadline=None)
@given(series_of(20), unit_angle, st.floats(-0.5, 0.5))
def test_div_then_mul_round_trip(x, theta, shrink):
    c = np.exp(1j * theta)
    y = TruncSeries.from_poly([c, 0.5 * shrink, -0.25 * shrink], 20)
    np.testing.assert_allclose(((x / y) * y).coeffs, x.coeffs, atol=1e-10)


@settings(max_examples=50, deadline=None)
@given(unit_angle)
def test_geom_unit_modulus(theta):
    assert np.allclose(np.abs(geom(np.exp(1j * theta), 50).coeffs), 1.0, atol=1e-12)


def test_product_of_geoms_is_reciprocal_of_product():
    etas = np.exp(1j * np.array([0.3, 1.1, -2.0]))
    prod = product_of_geoms(etas, 30)
    back = prod
    for e in etas:
        back = back * linear(e, 30)
    np.testing.assert_allclose(back.coeffs, TruncSeries.one(30).coeffs, atol=1e-12)
