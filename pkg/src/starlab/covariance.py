"""Unitary conjugation in the Voros calculus and canonical (Bogoliubov) maps.

For an anti-Hermitian generator Lambda with symbol lam, the symbol of
exp(-Lambda) O exp(Lambda) is

    O' = exp(-D_lam) O,      D_lam f = lam * f - f * lam     (Voros *)

``conjugate_flow`` sums that series.  For the quadratic squeezing generator
the flow is linear on z, zbar and closes on the Bogoliubov blocks C, S
returned by ``bogoliubov_blocks``; ``transform_variables`` substitutes
Z = C z + S zbar into an observable.

The substitution O(Z, Zbar) and the flowed symbol O' agree for observables
of degree <= 1 only.  Products pick up the star corrections of the new
variables (e.g. zbar z gains the constant |S|^2), which ``covariance_report``
measures rather than assumes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import linalg

from .errors import ModeMismatch, NonConvergence
from .fock import _lower, coherent_vector
from .heisenberg import default_points, moyal_bracket, star_exp, voros_star
from .report import VerificationReport
from .symbols import PhaseSymbol, variables

__all__ = [
    "XiMatrix",
    "BogoliubovBlocks",
    "squeeze_generator",
    "cubic_generator",
    "is_anti_hermitian",
    "d_lambda",
    "conjugate_flow",
    "flow_series",
    "flowed_variables",
    "substitute",
    "star_power_form",
    "bogoliubov_blocks",
    "transform_variables",
    "covariance_report",
    "dlambda_commutator_check",
    "squeeze_operator",
    "bogoliubov_operator_check",
    "sandwich_check",
    "identity_check",
    "bracket_matrix",
    "sinh_squared_offset",
    "linear_blocks",
    "printed_blocks",
    "block_check",
]

# fixed non-canonical counterexample: 0.1 (zbar^3 - z^3)
CUBIC_STRENGTH = 0.1
NONCANONICAL_THRESHOLD = 1e-3


@dataclass(frozen=True, eq=False)
class XiMatrix:
    """Complex symmetric squeezing matrix."""

    xi: np.ndarray

    def __post_init__(self):
        xi = np.atleast_2d(np.asarray(self.xi, dtype=complex))
        if xi.shape[0] != xi.shape[1]:
            raise ValueError(f"Xi must be square, got {xi.shape}")
        if np.max(np.abs(xi - xi.T), initial=0.0) > 1e-14:
            raise ValueError("Xi must be symmetric")
        object.__setattr__(self, "xi", xi)

    @classmethod
    def scalar(cls, xi):
        return cls(np.array([[complex(xi)]]))

    @property
    def modes(self):
        return self.xi.shape[0]


def _as_xi(xi):
    return xi if isinstance(xi, XiMatrix) else XiMatrix(xi)


@dataclass(frozen=True, eq=False)
class BogoliubovBlocks:
    C: np.ndarray
    S: np.ndarray

    def canonicality_residual(self):
        """max |C C^+ - S S^+ - 1| and |C S^T - S C^T| entries."""
        n = self.C.shape[0]
        r1 = self.C @ self.C.conj().T - self.S @ self.S.conj().T - np.eye(n)
        r2 = self.C @ self.S.T - self.S @ self.C.T
        return float(max(np.max(np.abs(r1)), np.max(np.abs(r2))))


def _sinhc(r):
    r = np.asarray(r, dtype=float)
    small = np.abs(r) < 1e-4
    safe = np.where(small, 1.0, r)
    series = 1.0 + r**2 / 6.0 + r**4 / 120.0
    return np.where(small, series, np.sinh(safe) / safe)


def bogoliubov_blocks(xi):
    """C = cosh sqrt(Xi Xi^+),  S = Xi sinhc sqrt(Xi^+ Xi).

    With these blocks Z = C z + S zbar, which is what the flow generated by
    D_lam z = -Xi zbar produces.  For normal Xi (one mode, diagonal, real)
    Xi Xi^+ = Xi^+ Xi and the ordering is immaterial.
    """
    X = _as_xi(xi).xi
    H = X @ X.conj().T
    mu, U = linalg.eigh(H)
    r = np.sqrt(np.clip(mu, 0.0, None))
    C = (U * np.cosh(r)) @ U.conj().T
    # sinhc(sqrt(X X^+)) X == X sinhc(sqrt(X^+ X))
    S = (U * _sinhc(r)) @ U.conj().T @ X
    return BogoliubovBlocks(C, S)


def squeeze_generator(xi):
    """lam = 1/2 xi_ij zbar_i zbar_j - 1/2 conj(xi_ij) z_i z_j."""
    X = _as_xi(xi).xi
    N = X.shape[0]
    terms = {}
    zero = (0,) * N
    for i in range(N):
        for j in range(N):
            e = [0] * N
            e[i] += 1
            e[j] += 1
            e = tuple(e)
            terms[(e, zero)] = terms.get((e, zero), 0) + 0.5 * X[i, j]
            terms[(zero, e)] = terms.get((zero, e), 0) - 0.5 * X[i, j].conjugate()
    return PhaseSymbol(N, terms)


def cubic_generator(strength=CUBIC_STRENGTH):
    (z,), (zb,) = variables(1)
    return (zb**3 - z**3) * strength


def is_anti_hermitian(sym, atol=1e-14):
    return (sym + sym.conj()).max_abs_coeff() <= atol


def d_lambda(lam, f):
    """D_lam f = lam * f - f * lam."""
    if lam.modes != f.modes:
        raise ModeMismatch(f"{lam.modes} vs {f.modes} modes")
    return voros_star(lam, f) - voros_star(f, lam)


def flow_series(lam, f, order):
    """[(-1)^j D_lam^j f / j!  for j = 0..order]: the flow graded by powers of lam."""
    out = [f]
    term = f
    for j in range(1, order + 1):
        term = d_lambda(lam, term) * (-1.0 / j)
        out.append(term)
    return out


def conjugate_flow(lam, f, series_tol=1e-16, max_terms=200):
    """exp(-D_lam) f, summed until the added term's largest coefficient drops
    below ``series_tol`` times the largest coefficient seen so far."""
    if not lam:
        return f
    total = f
    term = f
    scale = f.max_abs_coeff()
    for j in range(1, max_terms + 1):
        term = d_lambda(lam, term) * (-1.0 / j)
        if not term:
            return total
        total = total + term
        size = term.max_abs_coeff()
        scale = max(scale, size)
        if size < series_tol * scale:
            return total.chop(series_tol * scale)
    raise NonConvergence(
        f"nested-commutator flow not converged after {max_terms} terms (last term {size:.3e})"
    )


def flowed_variables(lam, series_tol=1e-16, max_terms=200):
    """Z_i = exp(-D_lam) z_i and Zbar_i = exp(-D_lam) zbar_i."""
    z, zb = variables(lam.modes)
    Z = [conjugate_flow(lam, v, series_tol, max_terms) for v in z]
    Zb = [conjugate_flow(lam, v, series_tol, max_terms) for v in zb]
    return Z, Zb


def substitute(f, Z, Zbar):
    """f(Zbar, Z) with pointwise products: sum c_{m,n} prod Zbar_i^{m_i} Z_i^{n_i}."""
    if len(Z) != f.modes or len(Zbar) != f.modes:
        raise ModeMismatch("need one Z and one Zbar per mode")
    modes = Z[0].modes
    cache = {}

    def power(sym, idx, e):
        key = (idx, e)
        if key not in cache:
            cache[key] = sym**e
        return cache[key]

    out = PhaseSymbol(modes)
    for (m, n), c in f.terms.items():
        mono = PhaseSymbol.constant(c, modes)
        for i in range(f.modes):
            if m[i]:
                mono = mono * power(Zbar[i], ("b", i), m[i])
            if n[i]:
                mono = mono * power(Z[i], ("z", i), n[i])
        out = out + mono
    return out


def star_power_form(f, Z, Zbar):
    """sum c_{m,n} Zbar^{*m} * Z^{*n}: the symbol of the conjugated operator
    written with star powers of the new variables."""
    modes = Z[0].modes
    out = PhaseSymbol(modes)
    for (m, n), c in f.terms.items():
        mono = PhaseSymbol.constant(c, modes)
        for i in range(f.modes):
            for _ in range(m[i]):
                mono = voros_star(mono, Zbar[i])
        for i in range(f.modes):
            for _ in range(n[i]):
                mono = voros_star(mono, Z[i])
        out = out + mono
    return out


def transform_variables(xi, f):
    """f(Z, Zbar) with Z = C z + S zbar, Zbar = conj(C) zbar + conj(S) z."""
    X = _as_xi(xi)
    if X.modes != f.modes:
        raise ModeMismatch(f"Xi has {X.modes} modes, observable has {f.modes}")
    blocks = bogoliubov_blocks(X)
    z, zb = variables(f.modes)
    Z, Zb = [], []
    for k in range(f.modes):
        Zk = PhaseSymbol(f.modes)
        Zbk = PhaseSymbol(f.modes)
        for j in range(f.modes):
            Zk = Zk + z[j] * complex(blocks.C[k, j]) + zb[j] * complex(blocks.S[k, j])
            Zbk = Zbk + zb[j] * complex(blocks.C[k, j]).conjugate() + z[j] * complex(blocks.S[k, j]).conjugate()
        Z.append(Zk)
        Zb.append(Zbk)
    return substitute(f, Z, Zb)


def _graded_mul(a, b, order):
    out = [PhaseSymbol(a[0].modes) for _ in range(order + 1)]
    for i, ai in enumerate(a):
        if not ai:
            continue
        for j, bj in enumerate(b[: order + 1 - i]):
            if bj:
                out[i + j] = out[i + j] + ai * bj
    return out


def _graded_substitute(f, Zs, Zbs, order):
    modes = f.modes
    total = [PhaseSymbol(modes) for _ in range(order + 1)]
    for (m, n), c in f.terms.items():
        mono = [PhaseSymbol.constant(c, modes)] + [PhaseSymbol(modes)] * order
        for i in range(modes):
            for _ in range(m[i]):
                mono = _graded_mul(mono, Zbs[i], order)
            for _ in range(n[i]):
                mono = _graded_mul(mono, Zs[i], order)
        total = [t + u for t, u in zip(total, mono)]
    return total


def covariance_report(f, generator, canonical=True, points=None, tol=1e-7, order=None,
                      threshold=NONCANONICAL_THRESHOLD, label=None):
    """Compare exp(-D_lam) f against f(Z, Zbar) with Z = exp(-D_lam) z.

    ``order=None`` sums both sides to convergence (canonical generators).  An
    integer truncates both sides at that power of the generator; this is the
    only meaningful comparison for generators whose flow is asymptotic, such
    as the cubic counterexample.

    ``canonical`` selects the claim under test: equality within ``tol``
    (canonical maps) or a deviation above ``threshold`` (non-canonical).
    """
    if not is_anti_hermitian(generator):
        raise ValueError("generator symbol must be anti-Hermitian: conj(lam) = -lam")
    if points is None:
        points = default_points(f.modes, 12, 1.0, seed=11)
    star_form = None
    if order is None:
        flowed = conjugate_flow(generator, f)
        Z, Zb = flowed_variables(generator)
        subst = substitute(f, Z, Zb)
        star_form = star_power_form(f, Z, Zb)
    else:
        flowed = PhaseSymbol(f.modes)
        for part in flow_series(generator, f, order):
            flowed = flowed + part
        z, zb = variables(f.modes)
        Zs = [flow_series(generator, v, order) for v in z]
        Zbs = [flow_series(generator, v, order) for v in zb]
        graded = _graded_substitute(f, Zs, Zbs, order)
        subst = graded[0]
        for g in graded[1:]:
            subst = subst + g
    dev = float(np.max(np.abs(flowed.evaluate(points) - subst.evaluate(points)), initial=0.0))
    rep = VerificationReport("covariance")
    name = label or f"f={f}"
    trunc = "summed to convergence" if order is None else f"truncated at order {order} in the generator"
    rep.environment.update({"points": int(len(points)), "flow": trunc})
    if canonical:
        rep.discrepancy(
            f"Eq.57[{name}]",
            dev,
            tol,
            f"max |O'(z) - O(Z(z))| over grid, {trunc}",
        )
        star_dev = float(np.max(np.abs(flowed.evaluate(points) - star_form.evaluate(points)), initial=0.0))
        rep.check(f"Eq.57[{name}]:star-powers", star_dev, tol, "O' against O with star powers of Z, Zbar")
    else:
        shortfall = max(0.0, threshold - dev)
        rep.discrepancy(
            f"Eq.46[{name}]",
            shortfall,
            0.0,
            f"deviation {dev:.6e} must exceed {threshold:g}; error column is the shortfall; {trunc}",
        )
    rep.environment["deviation"] = dev
    return rep


def dlambda_commutator_check(lam1, lam2, f):
    """Residual of [D_1, D_2] f = D_{{lam1, lam2}} f.  Exact for Fraction inputs."""
    lhs = d_lambda(lam1, d_lambda(lam2, f)) - d_lambda(lam2, d_lambda(lam1, f))
    rhs = d_lambda(moyal_bracket(lam1, lam2), f)
    resid = lhs - rhs
    exact = lam1.is_exact and lam2.is_exact and f.is_exact
    err = float(resid.max_abs_coeff())
    rep = VerificationReport("covariance")
    rep.check(
        "Eq.38",
        err,
        0.0 if exact else 1e-12 * max(1.0, lhs.max_abs_coeff()),
        "exact rational arithmetic" if exact else "floating coefficients",
    )
    return rep


def squeeze_operator(xi, cutoff, pad=None):
    """exp(xi/2 a+^2 - conj(xi)/2 a^2) on cutoff+pad levels (single mode)."""
    xi = complex(xi)
    if pad is None:
        pad = cutoff + 40
    big = cutoff + pad
    a = _lower(big)
    gen = 0.5 * xi * (a.T @ a.T) - 0.5 * xi.conjugate() * (a @ a)
    return linalg.expm(gen)


def bogoliubov_operator_check(xi, points, cutoff=48, observables=None):
    """Operator-level check of Z: <z| T^+ O T |z> against the symbol calculus.

    For each observable the operator value is compared with the flowed symbol
    (must agree) and with the substituted symbol f(Z, Zbar) (agrees for
    linear observables; quadratic ones show the star correction).
    """
    xi = complex(xi)
    (z,), (zb,) = variables(1)
    if observables is None:
        observables = {"z": z, "zbar z": zb * z}
    T = squeeze_operator(xi, cutoff)
    big = T.shape[0]
    a = _lower(big)
    lam = squeeze_generator([[xi]])
    rep = VerificationReport("covariance")
    for name, f in observables.items():
        op = np.zeros((big, big), dtype=complex)
        for (m, n), c in f.terms.items():
            op += complex(c) * np.linalg.matrix_power(a.T, m[0]) @ np.linalg.matrix_power(a, n[0])
        flowed = conjugate_flow(lam, f)
        subst = transform_variables([[xi]], f)
        err_flow = err_sub = 0.0
        for p in np.ravel(points):
            psi = coherent_vector(complex(p), big).amplitudes
            phi = T @ psi
            val = complex(np.vdot(phi, op @ phi))
            err_flow = max(err_flow, abs(val - flowed.evaluate(complex(p))))
            err_sub = max(err_sub, abs(val - subst.evaluate(complex(p))))
        tag = f"xi={xi:g},{name}"
        rep.check(f"Eq.47[{tag}]:flow", err_flow, 1e-7, "<z|T+ O T|z> vs exp(-D_lam) O")
        rep.discrepancy(f"Eq.47[{tag}]:substitution", err_sub, 1e-7, "<z|T+ O T|z> vs O(Z,Zbar)")
    return rep


def sandwich_check(lam, f, points, tol=1e-7, series_tol=1e-12):
    """exp(-D_lam) f against e_*^{-lam} * f * e_*^{lam} on ``points``."""
    ep = star_exp(lam, points=points, tol=series_tol)
    em = star_exp(-lam, points=points, tol=series_tol)
    sandwich = voros_star(voros_star(em.symbol, f), ep.symbol)
    flowed = conjugate_flow(lam, f)
    err = float(np.max(np.abs(sandwich.evaluate(points) - flowed.evaluate(points))))
    rep = VerificationReport("covariance")
    rep.check("Eq.42", err, tol, f"star-exponential sandwich vs nested commutators, {ep.terms} series terms")
    return rep


def identity_check(lam, points, tol=1e-8, series_tol=1e-12):
    """e_*^{-lam} * e_*^{lam} = 1 = e_*^{lam} * e_*^{-lam} on ``points``."""
    ep = star_exp(lam, points=points, tol=series_tol)
    em = star_exp(-lam, points=points, tol=series_tol)
    a = voros_star(em.symbol, ep.symbol).evaluate(points)
    b = voros_star(ep.symbol, em.symbol).evaluate(points)
    err = float(max(np.max(np.abs(a - 1)), np.max(np.abs(b - 1))))
    rep = VerificationReport("covariance")
    rep.check("Eq.36", err, tol, f"{ep.terms} series terms, {len(points)} points")
    return rep


def bracket_matrix(Z, Zbar):
    """{Z_j, Zbar_i}_* for all i, j (should be the identity for canonical maps)."""
    n = len(Z)
    out = np.zeros((n, n), dtype=complex)
    for j in range(n):
        for i in range(n):
            b = moyal_bracket(Z[j], Zbar[i])
            if b.degree > 0 and b.max_abs_coeff() > 1e-13:
                raise ValueError("bracket of transformed variables is not a constant")
            out[j, i] = complex(b.coeff((0,) * b.modes, (0,) * b.modes))
    return out


def sinh_squared_offset(xi):
    """The constant by which zbar z' exceeds |Z|^2 for a one-mode squeeze."""
    return math.sinh(abs(complex(xi))) ** 2


def linear_blocks(Z, Zbar=None):
    """Read C, S off linear symbols Z_i = C_ij z_j + S_ij zbar_j."""
    n = len(Z)
    C = np.zeros((n, n), dtype=complex)
    S = np.zeros((n, n), dtype=complex)
    for i, Zi in enumerate(Z):
        if Zi.degree > 1:
            raise ValueError("transformed variable is not linear")
        for j in range(n):
            e = tuple(int(t == j) for t in range(n))
            zero = (0,) * n
            C[i, j] = complex(Zi.coeff(zero, e))
            S[i, j] = complex(Zi.coeff(e, zero))
    return BogoliubovBlocks(C, S)


def printed_blocks(xi):
    """C = cosh sqrt(Xi^+ Xi), S = Xi sinhc sqrt(Xi^+ Xi): the ordering that
    agrees with the flow only when Xi is normal."""
    X = _as_xi(xi).xi
    mu, U = linalg.eigh(X.conj().T @ X)
    r = np.sqrt(np.clip(mu, 0.0, None))
    C = (U * np.cosh(r)) @ U.conj().T
    S = X @ (U * _sinhc(r)) @ U.conj().T
    return BogoliubovBlocks(C, S)


def block_check(xi, tol=1e-12, label=None):
    """Bogoliubov blocks from the nested-commutator flow against the closed
    forms, plus the conjugate flow of zbar and the bracket of the new variables."""
    X = _as_xi(xi)
    lam = squeeze_generator(X)
    Z, Zb = flowed_variables(lam)
    flow = linear_blocks(Z)
    conj_flow = linear_blocks(Zb)
    ours = bogoliubov_blocks(X)
    printed = printed_blocks(X)
    z, zb = variables(X.modes)
    tag = label or (f"xi={complex(X.xi[0, 0]):g}" if X.modes == 1 else f"Xi {X.modes}x{X.modes}")

    def gap(a, b):
        return float(max(np.max(np.abs(a.C - b.C)), np.max(np.abs(a.S - b.S))))

    rep = VerificationReport("covariance")
    rep.check(f"Eq.53[{tag}]:flow", gap(flow, ours), tol, "C = cosh sqrt(Xi Xi^+), S = Xi sinhc sqrt(Xi^+ Xi)")
    rep.discrepancy(f"Eq.53[{tag}]:printed", gap(flow, printed), tol, "C = cosh sqrt(Xi^+ Xi) as printed")
    # Zbar is the complex conjugate of Z: blocks conj(C) on zbar, conj(S) on z
    zb_blocks = BogoliubovBlocks(conj_flow.S, conj_flow.C)
    rep.check(f"Eq.54[{tag}]:conjugate", gap(zb_blocks, BogoliubovBlocks(ours.C.conj(), ours.S.conj())), tol)
    rep.check(f"canonical[{tag}]", ours.canonicality_residual(), tol, "C C^+ - S S^+ = 1, C S^T = S C^T")
    # D_lam zbar = -conj(Xi) z; the printed component form carries Xi itself
    dz = [d_lambda(lam, v) for v in zb]
    true = [sum((z[j] * complex(-X.xi[k, j].conjugate()) for j in range(X.modes)), PhaseSymbol(X.modes)) for k in range(X.modes)]
    lit = [sum((z[j] * complex(-X.xi[k, j]) for j in range(X.modes)), PhaseSymbol(X.modes)) for k in range(X.modes)]
    rep.check(f"Eq.52[{tag}]", max((a - b).max_abs_coeff() for a, b in zip(dz, true)), tol, "D_lam zbar = -Xi^+ z")
    rep.discrepancy(f"Eq.51[{tag}]:zbar", max((a - b).max_abs_coeff() for a, b in zip(dz, lit)), tol, "D_lam zbar_k = -xi_ki z_i as printed")
    B = bracket_matrix(Z, Zb)
    eye = np.eye(X.modes)
    rep.check(f"Eq.56[{tag}]:Z*Zbar-Zbar*Z", float(np.max(np.abs(B - eye))), tol, "{Z_j, Zbar_i} = delta_ij")
    rep.discrepancy(f"Eq.56[{tag}]:printed", float(np.max(np.abs(-B - eye))), tol, "Zbar_i * Z_j - Z_j * Zbar_i = delta_ij as printed")
    return rep
