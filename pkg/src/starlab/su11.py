"""Barut-Girardello coherent states of su(1,1) and their star product.

The positive discrete series with Bargmann index k is realized on the number
basis |n, k> by

    K+ |n> = sqrt((n+1)(n+2k)) |n+1>
    K- |n> = sqrt(n(n+2k-1))   |n-1>
    K3 |n> = (n+k) |n>

and the Barut-Girardello state |z> (eigenstate of K-) has amplitudes
z^n / sqrt(n! Gamma(n+2k)) times |z|^{k-1/2} / sqrt(I_{2k-1}(2|z|)).

There is no closed differential kernel for this star product, so it is
evaluated only through the operator oracle <z|A B|z>.  The symbol of K- is z,
of K+ is zbar, and of 2 K3 is Theta_k(|z|^2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy import special

from .errors import DomainError, TruncationError
from .fock import max_cutoff
from .report import VerificationReport
from .specfun import DEFAULT_SERIES, bessel_i, hyp0f1

__all__ = [
    "DiscreteSeriesRep",
    "rep_matrices",
    "algebra_residual",
    "BGState",
    "bg_amplitudes",
    "bg_vector",
    "adequate_cutoff",
    "theta",
    "su11_symbol",
    "su11_star",
    "theta_oracle_check",
    "star_relations_check",
    "su11_moyal_check",
    "theta_star_relations_check",
    "commutativity_check",
    "normalization_check",
    "contraction_deviation",
    "contraction_check",
]


@dataclass(frozen=True, eq=False)
class DiscreteSeriesRep:
    k: float
    cutoff: int = 64

    def __post_init__(self):
        if not self.k > 0:
            raise DomainError(f"Bargmann index must be positive, got {self.k}")
        if self.cutoff < 2:
            raise ValueError("cutoff must be at least 2")

    @cached_property
    def kplus(self):
        n = np.arange(self.cutoff - 1, dtype=float)
        return np.diag(np.sqrt((n + 1) * (n + 2 * self.k)), -1)

    @cached_property
    def kminus(self):
        return self.kplus.T.copy()

    @cached_property
    def k3(self):
        return np.diag(np.arange(self.cutoff, dtype=float) + self.k)

    @property
    def identity(self):
        return np.eye(self.cutoff)


def rep_matrices(rep):
    """(K+, K-, K3) as dense real matrices."""
    return rep.kplus, rep.kminus, rep.k3


def algebra_residual(rep):
    """Largest violation of [K3, K+-] = +-K+- and [K-, K+] = 2 K3 on the
    first cutoff-1 states (the last row/column feels the truncation)."""
    kp, km, k3 = rep_matrices(rep)
    d = rep.cutoff - 1
    r1 = (k3 @ kp - kp @ k3 - kp)[:d, :d]
    r2 = (k3 @ km - km @ k3 + km)[:d, :d]
    r3 = (km @ kp - kp @ km - 2 * k3)[:d, :d]
    return float(max(np.abs(r1).max(), np.abs(r2).max(), np.abs(r3).max()))


def _log_norm_printed(s, k):
    # log of |z|^{2k-1} / I_{2k-1}(2|z|), the squared printed prefactor
    r = math.sqrt(s)
    return (2 * k - 1) * math.log(r) - math.log(bessel_i(2 * k - 1, 2 * r))


def bg_amplitudes(z, k, cutoff, normalization="printed"):
    """Amplitudes <n|z> for n < cutoff and the norm^2 lost to truncation.

    ``normalization='printed'`` uses |z|^{k-1/2}/sqrt(I_{2k-1}(2|z|));
    ``'numeric'`` rescales the truncated vector to unit norm instead.
    """
    z = complex(z)
    n = np.arange(cutoff)
    if z == 0:
        amp = np.zeros(cutoff, dtype=complex)
        amp[0] = 1.0
        return amp, 0.0
    s = abs(z) ** 2
    logmag = n * math.log(abs(z)) - 0.5 * (special.gammaln(n + 1) + special.gammaln(n + 2 * k))
    if normalization == "printed":
        logmag = logmag + 0.5 * _log_norm_printed(s, k)
    amp = np.exp(logmag) * np.exp(1j * n * np.angle(z))
    norm2 = float(np.vdot(amp, amp).real)
    if normalization == "numeric":
        amp = amp / math.sqrt(norm2)
        # tail estimate: first omitted term relative to the sum
        tail = math.exp(2 * (cutoff * math.log(abs(z)) - 0.5 * (math.lgamma(cutoff + 1) + math.lgamma(cutoff + 2 * k))))
        return amp, tail / norm2
    return amp, max(0.0, 1.0 - norm2)


@dataclass(frozen=True, eq=False)
class BGState:
    z: complex
    rep: DiscreteSeriesRep
    amplitudes: np.ndarray
    loss: float

    def residual(self):
        """|| (K- - z) |z> || on the truncated space."""
        v = self.rep.kminus @ self.amplitudes - self.z * self.amplitudes
        return float(np.linalg.norm(v))

    def expect(self, A):
        return complex(np.vdot(self.amplitudes, A @ self.amplitudes))


def bg_vector(z, rep, max_loss=1e-10, normalization="printed"):
    amp, loss = bg_amplitudes(z, rep.k, rep.cutoff, normalization)
    if max_loss is not None and loss > max_loss:
        raise TruncationError(
            f"Barut-Girardello state at |z|={abs(z):.3g}, k={rep.k}: loss {loss:.2e} at cutoff {rep.cutoff}"
        )
    return BGState(complex(z), rep, amp, loss)


def adequate_cutoff(k, zmax, tol=1e-14, start=32):
    """Smallest power-of-two multiple of ``start`` at which the eigenstate
    residual and the truncation loss at |z| = zmax are below ``tol``,
    capped at STARLAB_MAX_CUTOFF."""
    cap = max_cutoff()
    D = min(start, cap)
    while True:
        amp, _ = bg_amplitudes(zmax, k, D, normalization="numeric")
        tail = abs(amp[-1]) ** 2 + abs(amp[-2]) ** 2
        resid = abs(zmax) * abs(amp[-1])
        if tail < tol and resid < tol:
            return D
        if D >= cap:
            raise TruncationError(f"cutoff cap {cap} too small for |z|={zmax}, k={k}")
        D = min(2 * D, cap)


def theta(k, s, cfg=DEFAULT_SERIES):
    """Theta_k(s) = 2k + (s/k) 0F1(2k+1; s) / 0F1(2k; s),  s = |z|^2."""
    if not k > 0:
        raise DomainError(f"k must be positive, got {k}")
    if s < 0:
        raise DomainError(f"s = |z|^2 must be nonnegative, got {s}")
    if s == 0:
        return 2.0 * k
    return 2.0 * k + (s / k) * hyp0f1(2 * k + 1, s, cfg) / hyp0f1(2 * k, s, cfg)


def su11_symbol(A, z, rep):
    """<z|A|z> in the Barut-Girardello state."""
    return bg_vector(z, rep).expect(A)


def su11_star(A, B, z, rep):
    """Star product of the symbols of A and B: <z|A B|z>.

    ``None`` stands for the identity.
    """
    psi = bg_vector(z, rep).amplitudes
    left = psi if A is None else A.conj().T @ psi
    right = psi if B is None else B @ psi
    return complex(np.vdot(left, right))


def _rep_for(k, points, cutoff=None):
    """Accept either a DiscreteSeriesRep or a bare index k (cutoff chosen
    from the largest |z| in ``points``)."""
    if isinstance(k, DiscreteSeriesRep):
        return k
    if cutoff is None:
        zmax = max((abs(complex(p)) for p in points), default=0.0)
        cutoff = adequate_cutoff(k, max(zmax, 1e-3))
    return DiscreteSeriesRep(k, cutoff)


def theta_oracle_check(k, points, tol=1e-9, cutoff=None):
    """Theta_k(|z|^2) = 2 <z|K3|z>."""
    rep = _rep_for(k, points, cutoff)
    k = rep.k
    err = 0.0
    for p in points:
        err = max(err, abs(theta(k, abs(p) ** 2) - 2 * su11_symbol(rep.k3, p, rep)))
    out = VerificationReport("su11")
    out.check(f"Eq.63[k={k:g}]", err, tol, "closed form vs 2<K3>")
    out.environment[f"cutoff[k={k:g}]"] = rep.cutoff
    return out


def star_relations_check(k, points, tol=1e-8, cutoff=None):
    """Eq. 62: zbar * z and z * zbar, against both the oracle-derived form
    and the printed form."""
    rep = _rep_for(k, points, cutoff)
    k = rep.k
    kp, km, _ = rep_matrices(rep)
    e_a = e_oracle = e_printed = 0.0
    for p in points:
        p = complex(p)
        s = abs(p) ** 2
        th = theta(k, s)
        e_a = max(e_a, abs(su11_star(kp, km, p, rep) - s))
        zz = su11_star(km, kp, p, rep)
        e_oracle = max(e_oracle, abs(zz - (s + th)))
        e_printed = max(e_printed, abs(zz - (s - th)))
    out = VerificationReport("su11")
    out.check(f"Eq.62[k={k:g}]:zbar*z", e_a, tol, "<K+K-> = |z|^2")
    out.check(f"Eq.62[k={k:g}]:z*zbar=zzbar+Theta", e_oracle, tol, "<K-K+> = |z|^2 + Theta_k")
    out.discrepancy(
        f"Eq.62[k={k:g}]:z*zbar=zzbar-Theta",
        e_printed,
        tol,
        "printed sign; the oracle gives +Theta_k, consistent with {z,zbar} = +Theta_k",
    )
    return out


def su11_moyal_check(k, points, tol=1e-8, cutoff=None):
    """The three bracket relations {z,zbar} = Theta, {z,Theta} = 2z,
    {zbar,Theta} = -2 zbar, with Theta carried by the operator 2 K3."""
    rep = _rep_for(k, points, cutoff)
    k = rep.k
    kp, km, k3 = rep_matrices(rep)
    th = 2 * k3
    errs = [0.0, 0.0, 0.0]
    for p in points:
        p = complex(p)
        t = theta(k, abs(p) ** 2)
        b1 = su11_star(km, kp, p, rep) - su11_star(kp, km, p, rep)
        b2 = su11_star(km, th, p, rep) - su11_star(th, km, p, rep)
        b3 = su11_star(kp, th, p, rep) - su11_star(th, kp, p, rep)
        errs[0] = max(errs[0], abs(b1 - t))
        errs[1] = max(errs[1], abs(b2 - 2 * p))
        errs[2] = max(errs[2], abs(b3 + 2 * p.conjugate()))
    out = VerificationReport("su11")
    out.check(f"Eq.68[k={k:g}]:{{z,zbar}}=Theta", errs[0], tol)
    out.check(f"Eq.68[k={k:g}]:{{z,Theta}}=2z", errs[1], tol)
    out.check(f"Eq.68[k={k:g}]:{{zbar,Theta}}=-2zbar", errs[2], tol)
    out.environment[f"cutoff[k={k:g}]"] = rep.cutoff
    return out


def theta_star_relations_check(k, points, tol=1e-8, cutoff=None):
    """The four printed products of z, zbar with Theta (Eqs. 64-67).

    Each printed right-hand side is compared with the oracle; separately the
    oracle is compared with the forms that follow from the algebra:

        zbar * Theta = zbar Theta         Theta * zbar = zbar Theta + 2 zbar
        Theta * z    = z Theta            z * Theta    = z Theta + 2 z
    """
    rep = _rep_for(k, points, cutoff)
    k = rep.k
    kp, km, k3 = rep_matrices(rep)
    th_op = 2 * k3
    names = ("64:zbar*Theta", "65:Theta*zbar", "66:Theta*z", "67:z*Theta")
    ops = ((kp, th_op), (th_op, kp), (th_op, km), (km, th_op))
    err_printed = dict.fromkeys(names, 0.0)
    err_algebra = dict.fromkeys(names, 0.0)
    err_d1 = err_d2 = err_d2_printed = 0.0
    for p in points:
        p = complex(p)
        zb = p.conjugate()
        t = theta(k, abs(p) ** 2)
        printed = {
            names[0]: t + 2 * k * zb - 2 * k,
            names[1]: t + (2 * k + 2) * zb - 2 * k,
            names[2]: t + 2 * k * p - 2 * k,
            names[3]: t + (2 * k + 2) * zb - 2 * k,
        }
        algebra = {
            names[0]: zb * t,
            names[1]: zb * t + 2 * zb,
            names[2]: p * t,
            names[3]: p * t + 2 * p,
        }
        vals = {}
        for name, (A, B) in zip(names, ops):
            v = su11_star(A, B, p, rep)
            vals[name] = v
            err_printed[name] = max(err_printed[name], abs(v - printed[name]))
            err_algebra[name] = max(err_algebra[name], abs(v - algebra[name]))
        # differences: 64 - 65 and 66 - 67
        err_d1 = max(err_d1, abs((vals[names[0]] - vals[names[1]]) - (printed[names[0]] - printed[names[1]])))
        err_d2 = max(err_d2, abs((vals[names[3]] - vals[names[2]]) - 2 * p))
        err_d2_printed = max(err_d2_printed, abs((vals[names[2]] - vals[names[3]]) - (printed[names[2]] - printed[names[3]])))
    out = VerificationReport("su11")
    for name in names:
        eq, rel = name.split(":")
        out.discrepancy(f"Eq.{eq}[k={k:g}]:printed", err_printed[name], tol, f"{rel} as printed vs oracle")
        out.check(f"Eq.{eq}[k={k:g}]:algebra", err_algebra[name], tol, f"{rel} vs the form implied by the su(1,1) relations")
    out.discrepancy(f"Eq.64-65[k={k:g}]", err_d1, tol, "zbar*Theta - Theta*zbar: printed difference -2 zbar vs oracle")
    out.check(f"Eq.67-66[k={k:g}]:bracket", err_d2, tol, "z*Theta - Theta*z = {z,Theta} = 2z from the oracle")
    out.discrepancy(f"Eq.66-67[k={k:g}]:printed", err_d2_printed, tol, "printed difference 2k z - (2k+2) zbar vs oracle")
    return out


def commutativity_check(k, points, pmax=3, tol=1e-10, cutoff=None):
    """Star products of two analytic (or two anti-analytic) symbols reduce to
    the ordinary product: <K-^p K-^q> = z^{p+q}, <K+^p K+^q> = zbar^{p+q}."""
    rep = _rep_for(k, points, cutoff)
    k = rep.k
    kp, km, _ = rep_matrices(rep)
    err = 0.0
    for p in points:
        p = complex(p)
        for a in range(pmax + 1):
            for b in range(pmax + 1):
                A = np.linalg.matrix_power(km, a)
                B = np.linalg.matrix_power(km, b)
                err = max(err, abs(su11_star(A, B, p, rep) - p ** (a + b)))
                A = np.linalg.matrix_power(kp, a)
                B = np.linalg.matrix_power(kp, b)
                err = max(err, abs(su11_star(A, B, p, rep) - p.conjugate() ** (a + b)))
    out = VerificationReport("su11")
    out.check(f"analytic-commutative[k={k:g}]", err, tol, f"powers up to {pmax}")
    return out


def normalization_check(k, points, tol=1e-10, cutoff=None):
    """The printed prefactor |z|^{k-1/2}/sqrt(I_{2k-1}(2|z|)) normalizes the state."""
    rep = _rep_for(k, points, cutoff)
    k = rep.k
    err = res = 0.0
    for p in points:
        st = bg_vector(p, rep, max_loss=None)
        err = max(err, abs(np.linalg.norm(st.amplitudes) - 1.0))
        res = max(res, st.residual())
    out = VerificationReport("su11")
    out.check(f"Eq.58[k={k:g}]:norm", err, tol, "printed normalization exponent k-1/2")
    out.check(f"Eq.58[k={k:g}]:eigenstate", res, 1e-9, "||(K- - z)|z>||")
    return out


def contraction_deviation(k, radius, qk_product=0.5):
    """|q Theta_k(|z'|^2/q) - 2qk| at |z'| = radius with q = qk_product / k."""
    q = qk_product / k
    s = radius**2 / q
    return abs(q * theta(k, s) - 2 * qk_product)


def contraction_check(k, qk_product=0.5, radii=None, tol=2e-3):
    """max over |z'| <= 1 of |Theta' - 1| for the contraction 2qk -> 1."""
    if radii is None:
        radii = np.linspace(0.0, 1.0, 11)
    devs = [contraction_deviation(k, r, qk_product) for r in radii]
    out = VerificationReport("su11")
    out.check(f"Eq.71[k={k:g}]", max(devs), tol, f"|Theta'-1| on |z'| in [{min(radii):g}, {max(radii):g}], q={qk_product / k:.3g}")
    out.environment[f"contraction_deviation[k={k:g}]"] = max(devs)
    return out
