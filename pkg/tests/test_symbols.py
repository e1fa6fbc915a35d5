import json
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings

from starlab.errors import ModeMismatch, ParseError
from starlab.symbols import PhaseSymbol, derive, pointwise_mul, random_symbol, variables

from strategies import exact_symbols


@settings(max_examples=60, deadline=None)
@given(exact_symbols(), exact_symbols(), exact_symbols())
def test_commutative_ring_axioms(f, g, h):
    assert f + g == g + f
    assert f * g == g * f
    assert (f * g) * h == f * (g * h)
    assert f * (g + h) == f * g + f * h
    assert f - f == PhaseSymbol(1)
    assert f * 1 == f


@settings(max_examples=60, deadline=None)
@given(exact_symbols(modes=2), exact_symbols(modes=2))
def test_leibniz_rule(f, g):
    for mode in range(2):
        for conj in (False, True):
            lhs = (f * g).derive(mode, conj)
            rhs = f.derive(mode, conj) * g + f * g.derive(mode, conj)
            assert lhs == rhs


@settings(max_examples=40, deadline=None)
@given(exact_symbols(modes=2))
def test_conj_is_involution_and_matches_values(f):
    assert f.conj().conj() == f
    pts = np.array([[0.3 + 0.4j, -0.2 + 0.1j], [1.1 - 0.5j, 0.7j]])
    np.testing.assert_allclose(f.conj().evaluate(pts), np.conj(f.evaluate(pts)), atol=1e-12)


def test_exactness_is_preserved():
    (z,), (zb,) = variables(1)
    f = (zb * z + Fraction(1, 3)) ** 3 / 7
    assert f.is_exact
    assert f.coeff((0,), (0,)) == Fraction(1, 27 * 7)


def test_evaluate_shapes():
    z, zb = variables(2)
    f = zb[0] * z[1] + 2
    assert f.evaluate([1j, 2.0]) == pytest.approx(-1j * 2 + 2)
    vals = f.evaluate(np.array([[1j, 2.0], [0, 0]]))
    assert vals.shape == (2,)
    with pytest.raises(ModeMismatch):
        f.evaluate([1.0, 2.0, 3.0])
    (w,), _ = variables(1)
    assert w.evaluate(np.array([1.0, 2.0, 3j])).shape == (3,)


def test_mode_mismatch_on_arithmetic():
    (z1,), _ = variables(1)
    z2, _ = variables(2)
    with pytest.raises(ModeMismatch):
        z1 + z2[0]


def test_derivatives_and_helpers():
    (z,), (zb,) = variables(1)
    f = zb**2 * z**3
    assert derive(f, 0, order=2) == zb**2 * z * 6
    assert f.derive(0, conjugated=True, order=3) == PhaseSymbol(1)
    assert pointwise_mul(z, zb) == zb * z
    assert f.degree == 5 and PhaseSymbol(1).degree == -1
    assert f.degree_in(0, conjugated=True) == 2


def test_json_roundtrip(rng):
    f = random_symbol(rng, modes=2, degree=3, nterms=6)
    back = PhaseSymbol.from_json(f.to_json())
    assert back.allclose(f, atol=0)
    ex = random_symbol(rng, modes=1, degree=3, nterms=5, exact=True)
    back = PhaseSymbol.from_json(ex.to_json(), exact=True)
    assert back.is_exact
    assert (back - ex).max_abs_coeff() < 1e-15


@pytest.mark.parametrize(
    "text",
    [
        "{not json",
        json.dumps({"terms": []}),
        json.dumps({"modes": 1, "terms": [{"m": [1, 0], "n": [0], "re": 1}]}),
        json.dumps({"modes": 1, "terms": [{"n": [0], "re": 1}]}),
    ],
)
def test_parse_errors(text):
    with pytest.raises(ParseError):
        PhaseSymbol.from_json(text)


def test_parse_error_position():
    text = json.dumps({"modes": 1, "terms": [{"m": [0], "n": [0], "re": 1}, {"m": [1, 1], "n": [0]}]})
    with pytest.raises(ParseError) as info:
        PhaseSymbol.from_json(text)
    assert info.value.position == "terms[1]"


def test_exact_mode_rejects_imaginary_parts():
    text = json.dumps({"modes": 1, "terms": [{"m": [0], "n": [1], "re": 1, "im": 2}]})
    with pytest.raises(ParseError):
        PhaseSymbol.from_json(text, exact=True)


def test_invalid_construction():
    with pytest.raises(ValueError):
        PhaseSymbol(0)
    with pytest.raises(ValueError):
        PhaseSymbol(1, {((-1,), (0,)): 1})
    with pytest.raises(ValueError):
        PhaseSymbol.constant(1) ** -1


def test_str_is_readable():
    (z,), (zb,) = variables(1)
    assert "z̄" in str(zb * z + 1)


def test_documented_values():
    (z,), (zb,) = variables(1)
    z2, _ = variables(2)
    assert str(z) == "z" and str(zb) == "z̄" and str(z2[1]) == "z₂"
    assert z * zb == PhaseSymbol.monomial((1,), (1,))
    assert z + PhaseSymbol(1) == z
    assert (z + zb) * (z - zb) == z**2 - zb**2
    assert (z**2).derive(0) == 2 * z
    assert z.derive(0, conjugated=True) == PhaseSymbol(1)
    assert (z**2 * zb).derive(0, order=2) == 2 * zb
    assert (zb * z).evaluate(1 + 1j) == pytest.approx(2)
    assert PhaseSymbol.constant(1).evaluate(0.3 - 2j) == 1
    assert (z**2).evaluate(1j) == pytest.approx(-1)


def test_evaluation_is_a_homomorphism(rng):
    pts = np.array([[0.4 + 0.2j, -0.7j], [1.2, 0.3 + 0.3j], [-0.5 - 0.5j, 0.9]])
    for _ in range(10):
        f = random_symbol(rng, modes=2, degree=3, nterms=5)
        g = random_symbol(rng, modes=2, degree=3, nterms=5)
        np.testing.assert_allclose((f * g).evaluate(pts), f.evaluate(pts) * g.evaluate(pts), rtol=1e-12)


@settings(max_examples=40, deadline=None)
@given(exact_symbols(modes=2, max_exp=3))
def test_derivatives_commute(f):
    assert f.derive(0).derive(1) == f.derive(1).derive(0)
    assert f.derive(0).derive(0, True) == f.derive(0, True).derive(0)
    assert f.derive(0, True).derive(1) == f.derive(1).derive(0, True)
