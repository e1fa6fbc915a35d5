import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings

from starlab.errors import ModeMismatch, NonConvergence
from starlab.fock import star_oracle
from starlab.heisenberg import (
    ExtendedStarContext,
    coeff_table,
    extended_star,
    icoeff,
    icoeff_printed,
    icoeff_quadrature,
    moyal_bracket,
    star_exp,
    star_power,
    voros_star,
)
from starlab.symbols import PhaseSymbol, random_symbol, variables

from strategies import exact_symbols

(Z,), (ZB,) = variables(1)


def const(c, modes=1):
    return PhaseSymbol.constant(c, modes)


def test_icoeff_documented_values():
    for p in range(11):
        assert icoeff(0, p) == Fraction(1, math.factorial(p))
    assert icoeff(1, 0) == 1
    assert icoeff(1, 1) == 3
    assert icoeff_quadrature(0, 2) == pytest.approx(0.5, abs=1e-14)
    assert icoeff_quadrature(1, 0) == pytest.approx(1.0, abs=1e-14)
    assert icoeff_quadrature(2, 1) == pytest.approx(float(icoeff(2, 1)), abs=1e-12)


@pytest.mark.parametrize("k", range(6))
def test_icoeff_matches_radial_moment(k):
    for p in range(9):
        assert abs(float(icoeff(k, p)) - icoeff_quadrature(k, p)) < 1e-10


def test_icoeff_printed_agrees_only_for_low_k():
    # the literal double sum lacks 1/(j! j'!); that only matters once j, j' >= 2 occur
    for p in range(6):
        assert icoeff_printed(0, p) == icoeff(0, p)
        assert icoeff_printed(1, p) == icoeff(1, p)
    assert icoeff_printed(2, 0) != icoeff(2, 0)


def test_icoeff_rejects_negative():
    with pytest.raises(ValueError):
        icoeff(-1, 0)


def test_coeff_table_rows():
    rows = list(coeff_table(2, 3).rows())
    assert [r["p"] for r in rows] == [0, 1, 2, 3]
    assert {"k", "p", "exact", "value", "quadrature", "printed"} <= set(rows[0])
    assert rows[1]["value"] == pytest.approx(float(icoeff(2, 1)))


def test_voros_documented_values():
    assert voros_star(Z, ZB) == ZB * Z + 1
    assert voros_star(ZB, Z) == ZB * Z
    assert voros_star(Z**2, ZB**2) == Z**2 * ZB**2 + 4 * ZB * Z + 2


def test_voros_fourth_example_against_operator_oracle(rng):
    f, g = Z**2, ZB**2
    sym = voros_star(f, g)
    for p in 1.2 * np.sqrt(rng.uniform(0, 1, 8)) * np.exp(2j * np.pi * rng.uniform(0, 1, 8)):
        assert abs(sym.evaluate(p) - star_oracle(f, g, p)) < 1e-10


def test_voros_mode_mismatch():
    z2, _ = variables(2)
    with pytest.raises(ModeMismatch):
        voros_star(Z, z2[0])


@settings(max_examples=40, deadline=None)
@given(exact_symbols(max_exp=2), exact_symbols(max_exp=2), exact_symbols(max_exp=2))
def test_voros_associative_exactly(f, g, h):
    assert voros_star(f, voros_star(g, h)) == voros_star(voros_star(f, g), h)


@settings(max_examples=25, deadline=None)
@given(exact_symbols(modes=2, max_exp=2), exact_symbols(modes=2, max_exp=2))
def test_extended_k0_is_voros(f, g):
    assert extended_star(f, g, ExtendedStarContext((0, 0))) == voros_star(f, g)


def test_voros_matches_oracle_two_modes(rng):
    for _ in range(4):
        f = random_symbol(rng, 2, degree=3, nterms=3)
        g = random_symbol(rng, 2, degree=3, nterms=3)
        sym = voros_star(f, g)
        for _ in range(3):
            p = rng.uniform(-0.8, 0.8, 2) + 1j * rng.uniform(-0.8, 0.8, 2)
            assert abs(sym.evaluate(p) - star_oracle(f, g, p, 0, 24)) < 1e-9


def test_extended_documented_values():
    ctx = ExtendedStarContext((1,))
    assert extended_star(Z, ZB, ctx) == ZB * Z + 3
    assert extended_star(ZB, Z, ctx) == ZB * Z
    assert moyal_bracket(Z, ZB) == const(1)
    assert moyal_bracket(Z, ZB, ctx) == const(3)
    assert moyal_bracket(Z, Z, ctx) == PhaseSymbol(1)


@pytest.mark.parametrize("k", range(6))
def test_extended_bracket_is_icoeff(k):
    assert moyal_bracket(Z, ZB, ExtendedStarContext((k,))) == const(icoeff(k, 1))


def test_extended_factorizes_over_modes(rng):
    z, zb = variables(2)
    ctx = ExtendedStarContext((1, 2))
    f = z[0] ** 2 * zb[1]
    g = zb[0] ** 2 * z[1] ** 2
    lhs = extended_star(f, g, ctx)
    one = extended_star(Z**2, ZB**2, ExtendedStarContext((1,)))
    two = extended_star(ZB, Z**2, ExtendedStarContext((2,)))
    # assemble the product of the two single-mode results by hand
    terms = {}
    for (m1, n1), c1 in one.terms.items():
        for (m2, n2), c2 in two.terms.items():
            terms[((m1[0], m2[0]), (n1[0], n2[0]))] = c1 * c2
    assert lhs == PhaseSymbol(2, terms)


def test_extended_context_validation():
    with pytest.raises(ValueError):
        ExtendedStarContext((-1,))
    with pytest.raises(ModeMismatch):
        extended_star(Z, ZB, ExtendedStarContext((1, 1)))


def test_star_power_and_exp():
    assert star_power(Z, 3) == Z**3
    assert star_exp(PhaseSymbol(1)).symbol == const(1)
    series = star_exp(const(0.5))
    assert series(0.3 + 0.1j) == pytest.approx(math.exp(0.5), rel=1e-12)
    lam = (ZB**2 - Z**2) * 0.15
    pts = np.array([0.2, 0.5j, -0.3 + 0.4j])
    ep = star_exp(lam, points=pts)
    em = star_exp(-lam, points=pts)
    np.testing.assert_allclose(voros_star(em.symbol, ep.symbol).evaluate(pts), 1.0, atol=1e-8)


def test_star_exp_nonconvergence():
    with pytest.raises(NonConvergence):
        star_exp(const(30.0), max_terms=5)
