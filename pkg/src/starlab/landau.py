"""Landau-level wavefunctions as matrix elements of displaced number states.

In level k the analytic states are

    Phi_{k,l}   = exp(-|z|^2/2) z^l L_k^l(|z|^2),                 l >= 0

and the anti-analytic ones

    Phi_{k,k+l} = exp(-|z|^2/2) zbar^{-l} L_{k+l}^{-l}(|z|^2),    -k <= l < 0.

Both are proportional to <k+l| D(z) |k>.  With D(z) = exp(z a+ - zbar a) the
factor is sqrt((k+l)!/k!) for l >= 0 and (-1)^l sqrt(k!/(k+l)!) for l < 0;
``identification_check`` fits the constant phase instead of assuming it.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import DomainError
from .fock import displacement_operator
from .report import VerificationReport
from .specfun import laguerre

__all__ = [
    "LandauFunction",
    "landau_phi",
    "printed_prefactor",
    "matrix_element_form",
    "fit_phase",
    "identification_check",
    "orthogonality_check",
    "landau_report",
]


def _check(k, l):
    if k < 0:
        raise DomainError(f"level index must be nonnegative, got {k}")
    if l < -k:
        raise DomainError(f"orbital index l={l} below -k={-k}")


def landau_phi(k, l, z):
    """Phi_{k,l} for l >= 0, or Phi_{k,k+l} for -k <= l < 0."""
    _check(k, l)
    z = np.asarray(z, dtype=complex)
    s = np.abs(z) ** 2
    gauss = np.exp(-0.5 * s)
    if l >= 0:
        return gauss * z**l * laguerre(k, l, s)
    return gauss * np.conj(z) ** (-l) * laguerre(k + l, -l, s)


class LandauFunction:
    """Callable wrapper around ``landau_phi`` for fixed (k, l)."""

    def __init__(self, k, l):
        _check(k, l)
        self.k = k
        self.l = l

    @property
    def analytic(self):
        return self.l >= 0

    def __call__(self, z):
        return landau_phi(self.k, self.l, z)

    def __repr__(self):
        return f"LandauFunction(k={self.k}, l={self.l})"


def printed_prefactor(k, l):
    """(-1)^l sqrt((k+l)!/k!) for l >= 0 and sqrt(k!/(k+l)!) for l < 0."""
    _check(k, l)
    if l >= 0:
        return (-1) ** l * math.sqrt(math.factorial(k + l) / math.factorial(k))
    return math.sqrt(math.factorial(k) / math.factorial(k + l))


def matrix_element_form(k, l, points, cutoff=None):
    """printed_prefactor(k, l) * <k+l|z,k>, with the displaced state built by
    exponentiating the displacement generator."""
    _check(k, l)
    points = np.atleast_1d(np.asarray(points, dtype=complex))
    if cutoff is None:
        cutoff = k + max(l, 0) + 2
    out = np.empty(points.shape, dtype=complex)
    for i, z in enumerate(points):
        out[i] = displacement_operator(z, cutoff)[k + l, k]
    return printed_prefactor(k, l) * out


def fit_phase(lhs, rhs):
    """Unit-modulus c minimizing the 2-norm of lhs - c rhs."""
    w = np.vdot(rhs, lhs)
    if abs(w) == 0:
        return 1.0 + 0j
    return w / abs(w)


def identification_check(k, l, grid, tol=1e-10):
    """Compare landau_phi with the prefactored matrix element.

    Reports the deviation after the optimal global phase and, separately,
    the deviation with the printed prefactor taken literally.
    """
    _check(k, l)
    grid = np.atleast_1d(np.asarray(grid, dtype=complex))
    lhs = landau_phi(k, l, grid)
    rhs = matrix_element_form(k, l, grid)
    phase = fit_phase(lhs, rhs)
    dev = float(np.max(np.abs(lhs - phase * rhs)))
    literal = float(np.max(np.abs(lhs - rhs)))
    eq = "Eq.29" if l >= 0 else "Eq.30"
    out = VerificationReport("landau")
    ang = round(math.degrees(math.atan2(phase.imag, phase.real)), 6) + 0.0
    if ang <= -180.0:
        ang = 180.0
    out.check(f"{eq}[k={k},l={l}]", dev, tol, f"after global phase {ang:.1f} deg")
    out.discrepancy(f"{eq}[k={k},l={l}]:literal", literal, tol, "printed prefactor without a phase fit")
    out.environment[f"phase[k={k},l={l}]"] = ang
    return out


def _disk_quadrature(nr, nt):
    # d^2z / pi = (1/2pi) ds dtheta with s = |z|^2; Gauss-Laguerre absorbs exp(-s)
    s, w = np.polynomial.laguerre.laggauss(nr)
    t = 2 * np.pi * np.arange(nt) / nt
    z = np.sqrt(s)[:, None] * np.exp(1j * t)[None, :]
    weights = (w * np.exp(s))[:, None] * np.full(nt, 1.0 / nt)[None, :]
    return z.ravel(), weights.ravel()


def orthogonality_check(k, lmax=3, tol=1e-8):
    """Gram matrix of level-k functions under d^2z/pi: off-diagonal zero and
    diagonal equal to the squared inverse prefactor."""
    ls = list(range(-k, lmax + 1))
    z, w = _disk_quadrature(k + lmax + 8, 2 * (k + lmax) + 4)
    vals = {l: landau_phi(k, l, z) for l in ls}
    off = diag = 0.0
    for a in ls:
        for b in ls:
            g = np.sum(w * np.conj(vals[a]) * vals[b])
            if a == b:
                diag = max(diag, abs(g - printed_prefactor(k, a) ** 2))
            else:
                off = max(off, abs(g))
    out = VerificationReport("landau")
    out.check(f"orthogonality[k={k}]", off, tol, f"l, l' in [{-k}, {lmax}]")
    out.check(f"normalization[k={k}]", diag, tol, "||Phi||^2 = prefactor^2")
    return out


def landau_report(kmax=3, lmax=3, grid=None, tol=1e-10):
    if grid is None:
        rng = np.random.default_rng(3)
        grid = 1.5 * np.sqrt(rng.uniform(0, 1, 10)) * np.exp(2j * np.pi * rng.uniform(0, 1, 10))
    out = VerificationReport("landau")
    for k in range(kmax + 1):
        for l in range(-k, lmax + 1):
            out.extend(identification_check(k, l, grid, tol))
        out.extend(orthogonality_check(k, lmax))
    return out
