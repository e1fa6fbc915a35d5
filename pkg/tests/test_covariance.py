import math
from fractions import Fraction

import numpy as np
import pytest

from starlab.covariance import (
    XiMatrix,
    block_check,
    bogoliubov_blocks,
    bogoliubov_operator_check,
    bracket_matrix,
    conjugate_flow,
    covariance_report,
    cubic_generator,
    d_lambda,
    dlambda_commutator_check,
    flowed_variables,
    identity_check,
    is_anti_hermitian,
    sandwich_check,
    squeeze_generator,
    star_power_form,
    transform_variables,
)
from starlab.errors import ModeMismatch
from starlab.fock import symbol_of
from starlab.heisenberg import default_points, voros_star
from starlab.symbols import PhaseSymbol, random_symbol, variables

(Z,), (ZB,) = variables(1)
PTS = default_points(1, 10, 1.0, seed=4)


def test_d_lambda_documented_values():
    xi = 0.3 + 0.1j
    lam = squeeze_generator([[xi]])
    assert d_lambda(lam, Z).allclose(-xi * ZB, atol=1e-15)
    assert d_lambda(PhaseSymbol.constant(2.0), Z * ZB) == PhaseSymbol(1)
    assert d_lambda(ZB * Z, Z) == -Z


def test_d_lambda_against_operator_commutator():
    lam = ZB * Z * 0.5 + ZB**2 * 0.25
    f = Z**2 + ZB
    sym = d_lambda(lam, f)
    for p in (0.3, -0.2 + 0.5j):
        op = symbol_of(voros_star(lam, f), p) - symbol_of(voros_star(f, lam), p)
        assert sym.evaluate(p) == pytest.approx(op, abs=1e-10)


def test_d_lambda_mode_mismatch():
    z2, _ = variables(2)
    with pytest.raises(ModeMismatch):
        d_lambda(Z, z2[0])


def test_conjugate_flow_documented_values():
    assert conjugate_flow(PhaseSymbol(1), Z) == Z
    lam = squeeze_generator([[0.3]])
    expected = Z * math.cosh(0.3) + ZB * math.sinh(0.3)
    assert conjugate_flow(lam, Z).allclose(expected, atol=1e-12)


def test_conjugate_flow_matches_star_sandwich():
    lam = squeeze_generator([[0.3]])
    rep = sandwich_check(lam, ZB * Z, PTS)
    assert rep.passed and rep["Eq.42"].max_abs_error < 1e-7


def test_quadratic_flow_preserves_degree(rng):
    lam = squeeze_generator([[0.25 - 0.1j]])
    for _ in range(5):
        f = random_symbol(rng, 1, degree=3, nterms=4)
        assert conjugate_flow(lam, f).degree <= f.degree


def test_bogoliubov_blocks_documented_values():
    b = bogoliubov_blocks([[0.0]])
    assert np.allclose(b.C, 1) and np.allclose(b.S, 0)
    b = bogoliubov_blocks([[0.4]])
    assert b.C[0, 0] == pytest.approx(math.cosh(0.4)) and b.S[0, 0] == pytest.approx(math.sinh(0.4))
    b = bogoliubov_blocks(np.diag([0.2, 0.5]))
    assert np.allclose(b.C, np.diag(np.cosh([0.2, 0.5])))
    assert np.allclose(b.S, np.diag(np.sinh([0.2, 0.5])))


@pytest.mark.parametrize(
    "xi",
    [[[0.3]], [[0.2j]], [[1e-6]], [[0.2 + 0.1j, 0.15], [0.15, -0.1 + 0.05j]]],
)
def test_canonicality(xi):
    assert bogoliubov_blocks(xi).canonicality_residual() < 1e-10


def test_xi_matrix_validation():
    with pytest.raises(ValueError):
        XiMatrix(np.array([[0.1, 0.2], [0.3, 0.1]]))
    with pytest.raises(ValueError):
        XiMatrix(np.ones((2, 3)))
    assert XiMatrix.scalar(0.1).modes == 1


def test_transform_variables_documented_values():
    r = 0.35
    assert transform_variables([[r]], Z).allclose(Z * math.cosh(r) + ZB * math.sinh(r), atol=1e-14)
    one = PhaseSymbol.constant(1)
    assert transform_variables([[r]], one).allclose(one)


def test_transform_matches_flow_on_linear_symbols():
    xi = [[0.2 + 0.1j, 0.15], [0.15, -0.1 + 0.05j]]
    lam = squeeze_generator(xi)
    z, zb = variables(2)
    for v in z + zb:
        assert conjugate_flow(lam, v).allclose(transform_variables(xi, v), atol=1e-12)


def test_quadratic_covariance_picks_up_a_constant():
    # pointwise substitution misses the star correction |S|^2 for zbar z
    xi = 0.3
    lam = squeeze_generator([[xi]])
    flowed = conjugate_flow(lam, ZB * Z)
    subst = transform_variables([[xi]], ZB * Z)
    gap = (flowed - subst).chop(1e-13)
    assert gap.degree == 0
    assert gap.coeff((0,), (0,)) == pytest.approx(math.sinh(xi) ** 2, abs=1e-12)


def test_star_power_form_reproduces_flow():
    lam = squeeze_generator([[0.3]])
    Zs, Zbs = flowed_variables(lam)
    for f in (ZB * Z, Z**2, ZB**2 * Z):
        assert star_power_form(f, Zs, Zbs).allclose(conjugate_flow(lam, f), atol=1e-12)


def test_covariance_report_cases():
    lam = squeeze_generator([[0.3]])
    rep = covariance_report(Z, lam, points=PTS)
    assert rep.entries[0].passed
    rep = covariance_report(ZB * Z, PhaseSymbol(1), points=PTS)
    assert rep.environment["deviation"] == 0.0
    rep = covariance_report(ZB * Z, cubic_generator(), canonical=False, points=PTS, order=4)
    assert rep.environment["deviation"] > 1e-3
    with pytest.raises(ValueError):
        covariance_report(Z, ZB * Z + Z, points=PTS)


def test_cubic_generator_is_anti_hermitian():
    assert is_anti_hermitian(cubic_generator())
    assert not is_anti_hermitian(ZB * Z)


def test_dlambda_commutator_exact(rng):
    l1 = ZB**2 * Fraction(1)
    l2 = Z**2 * Fraction(1)
    rep = dlambda_commutator_check(l1, l2, Z * Fraction(1))
    assert rep.entries[0].max_abs_error == 0
    rep = dlambda_commutator_check(l1, l1, Z * Fraction(1))
    assert rep.entries[0].max_abs_error == 0
    for _ in range(20):
        a = random_symbol(rng, 1, degree=2, nterms=3, exact=True)
        b = random_symbol(rng, 1, degree=2, nterms=3, exact=True)
        f = random_symbol(rng, 1, degree=3, nterms=3, exact=True)
        assert dlambda_commutator_check(a, b, f).entries[0].max_abs_error == 0


def test_operator_level_bogoliubov():
    for xi in (0.1, 0.4, 0.3j):
        rep = bogoliubov_operator_check(xi, PTS[:5], observables={"z": Z})
        assert rep[f"Eq.47[xi={complex(xi):g},z]:flow"].max_abs_error < 1e-7
        assert rep[f"Eq.47[xi={complex(xi):g},z]:substitution"].max_abs_error < 1e-7


def test_star_exponential_identity():
    rep = identity_check(squeeze_generator([[0.3]]), PTS)
    assert rep.passed and rep["Eq.36"].max_abs_error < 1e-8


def test_transformed_brackets_are_canonical():
    lam = squeeze_generator([[0.2 + 0.1j, 0.15], [0.15, -0.1 + 0.05j]])
    Zs, Zbs = flowed_variables(lam)
    assert np.allclose(bracket_matrix(Zs, Zbs), np.eye(2), atol=1e-12)


def test_block_check_statuses():
    rep = block_check([[0.2j]])
    assert rep.passed
    assert rep.find("Eq.51")[0].status == "paper_discrepancy"
    assert rep.find("Eq.52")[0].status == "pass"
