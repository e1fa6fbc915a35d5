"""Star calculus of the singular (isotonic) harmonic oscillator.

H = 1/2 (-d^2/dx^2 + x^2) + eta^2 / x^2 on the half line has spectrum
e_n = 2n + e0 with e0 = alpha + 1/2, alpha = 1/2 + sqrt(1/4 + 2 eta^2), and
ladder operators

    A+ |n> = sqrt((n+1)(n+e0)) |n+1>,     A- |n> = sqrt(n(n+e0-1)) |n-1>.

Comparing with the discrete series (K+ |n> = sqrt((n+1)(n+2k)) |n+1>) fixes
the Bargmann index at 2k = e0; that calibrated index is used throughout.
The alternative 2k = e0 + 1 is carried along only to be compared.

Everything runs in the number basis through the su(1,1) oracle; the
position-space wavefunctions are a diagnostic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy import integrate, optimize, special

from .errors import DomainError
from .report import VerificationReport
from .specfun import bessel_i, laguerre
from .su11 import DiscreteSeriesRep, adequate_cutoff, bg_vector, su11_star, theta

__all__ = [
    "SingularOscillator",
    "ProjectorSymbol",
    "ladder_matrices",
    "projector_matrix",
    "projector_symbol",
    "projector_closed_form",
    "default_grid",
    "star_projector_algebra_check",
    "star_vacuum_check",
    "ladder_action_check",
    "star_eigenvalue_check",
    "completeness_check",
    "calibration_check",
    "position_wavefunction",
    "corrected_wavefunction",
    "orthonormality_weight",
    "wavefunction_check",
    "calogero_report",
]

DEFAULT_ETAS = (0.0, 0.5, 1.0)


@dataclass(frozen=True, eq=False)
class SingularOscillator:
    eta: float
    cutoff: int | None = None

    def __post_init__(self):
        if not math.isfinite(self.eta):
            raise DomainError("eta must be finite")
        if self.cutoff is None:
            object.__setattr__(self, "cutoff", adequate_cutoff(self.calibrated_k, 1.5))

    @property
    def alpha(self):
        return 0.5 + math.sqrt(0.25 + 2.0 * self.eta**2)

    @property
    def e0(self):
        return self.alpha + 0.5

    @property
    def calibrated_k(self):
        """Bargmann index implied by the ladder matrix elements: 2k = e0."""
        return self.e0 / 2.0

    @property
    def prose_k(self):
        """The alternative identification 2k = e0 + 1."""
        return (self.e0 + 1.0) / 2.0

    def energy(self, n):
        return 2.0 * n + self.e0

    def energies(self, count):
        return 2.0 * np.arange(count) + self.e0

    @cached_property
    def rep(self):
        return DiscreteSeriesRep(self.calibrated_k, self.cutoff)


def ladder_matrices(osc):
    """(A+, A-, H) on the first ``osc.cutoff`` eigenstates."""
    n = np.arange(osc.cutoff - 1, dtype=float)
    ap = np.diag(np.sqrt((n + 1) * (n + osc.e0)), -1)
    am = ap.T.copy()
    h = np.diag(osc.energies(osc.cutoff))
    return ap, am, h


def projector_matrix(m, n, cutoff):
    """P_mn = |Psi_m><Psi_n|."""
    if not (0 <= m < cutoff and 0 <= n < cutoff):
        raise IndexError(f"indices ({m}, {n}) outside cutoff {cutoff}")
    P = np.zeros((cutoff, cutoff))
    P[m, n] = 1.0
    return P


def _bg_amps(osc, z):
    return bg_vector(z, osc.rep).amplitudes


def projector_symbol(osc, m, n, z):
    """<z|Psi_m><Psi_n|z> from the oracle state."""
    psi = _bg_amps(osc, z)
    return complex(np.conj(psi[m]) * psi[n])


def projector_closed_form(osc, m, n, z, k=None):
    """|z|^{2k-1}/I_{2k-1}(2|z|) F^k_m(zbar) F^k_n(z),  F^k_n(z) = z^n/sqrt(n! Gamma(n+2k)).

    ``k=None`` uses the printed index (e0+1)/2, for which the prefactor is
    |z|^{e0}/I_{e0}(2|z|); pass ``osc.calibrated_k`` for the consistent form.
    """
    if k is None:
        k = osc.prose_k
    z = complex(z)
    r = abs(z)
    if r == 0:
        return complex(1.0 if m == n == 0 else 0.0)
    log_pref = (2 * k - 1) * math.log(r) - math.log(bessel_i(2 * k - 1, 2 * r))
    log_f = -0.5 * (math.lgamma(m + 1) + math.lgamma(m + 2 * k) + math.lgamma(n + 1) + math.lgamma(n + 2 * k))
    return complex(math.exp(log_pref + log_f) * z.conjugate() ** m * z**n)


@dataclass(frozen=True)
class ProjectorSymbol:
    osc: SingularOscillator
    m: int
    n: int

    def __call__(self, z):
        return projector_symbol(self.osc, self.m, self.n, z)


def default_grid(npoints=12, radius=1.0, seed=5):
    """Points in the disk |z| <= radius, including the origin."""
    rng = np.random.default_rng(seed)
    r = radius * np.sqrt(rng.uniform(0, 1, npoints - 1))
    t = rng.uniform(0, 2 * np.pi, npoints - 1)
    return np.concatenate([[0.0], r * np.exp(1j * t)])


def _worst(errs):
    key = max(errs, key=errs.get)
    return errs[key], key


def _idx(**kw):
    return ",".join(f"{k.replace('p', chr(39))}={v}" for k, v in kw.items())


def star_projector_algebra_check(osc, grid, nmax=4, tol=1e-8):
    """P_mn * P_m'n' = delta_{m'n} P_mn' for all indices <= nmax."""
    D = osc.cutoff
    errs = {}
    P = {(a, b): projector_matrix(a, b, D) for a in range(nmax + 1) for b in range(nmax + 1)}
    for z in grid:
        psi = _bg_amps(osc, z)
        for (m, n), A in P.items():
            for (mp, np_), B in P.items():
                lhs = su11_star(A, B, z, osc.rep)
                rhs = np.conj(psi[m]) * psi[np_] if mp == n else 0.0
                key = _idx(m=m, n=n, mp=mp, np=np_)
                errs[key] = max(errs.get(key, 0.0), abs(lhs - rhs))
    err, key = _worst(errs)
    out = VerificationReport("calogero")
    out.check(f"Eq.79[eta={osc.eta:g}]", err, tol, f"indices <= {nmax}; worst at {key}")
    return out


def star_vacuum_check(osc, grid, tol=1e-8):
    ap, am, _ = ladder_matrices(osc)
    P00 = projector_matrix(0, 0, osc.cutoff)
    e1 = e2 = e3 = 0.0
    for z in grid:
        e1 = max(e1, abs(su11_star(am, P00, z, osc.rep)))
        e2 = max(e2, abs(su11_star(P00, ap, z, osc.rep)))
        # zbar * P00 is not zero: it is sqrt(e0) P10
        e3 = max(e3, abs(su11_star(ap, P00, z, osc.rep) - math.sqrt(osc.e0) * projector_symbol(osc, 1, 0, z)))
    out = VerificationReport("calogero")
    out.check(f"Eq.80[eta={osc.eta:g}]:z*P00", e1, tol)
    out.check(f"Eq.80[eta={osc.eta:g}]:P00*zbar", e2, tol)
    out.check(f"Eq.82[eta={osc.eta:g}]:zbar*P00", e3, tol, "equals sqrt(e0) P10")
    return out


def ladder_action_check(osc, grid, nmax=4, tol=1e-8):
    """The four ladder relations: z * P, zbar * P, P * z, P * zbar."""
    ap, am, _ = ladder_matrices(osc)
    e0 = osc.e0
    D = osc.cutoff
    errs = {81: {}, 82: {}, 83: {}, 84: {}}
    for z in grid:
        psi = _bg_amps(osc, z)

        def sym(a, b):
            if a < 0 or b < 0:
                return 0.0
            return np.conj(psi[a]) * psi[b]

        for m in range(nmax + 1):
            for n in range(nmax + 1):
                Pmn = projector_matrix(m, n, D)
                key = _idx(m=m, n=n)
                cases = {
                    81: (su11_star(am, Pmn, z, osc.rep), math.sqrt(m * (m + e0 - 1)) * sym(m - 1, n)),
                    82: (su11_star(ap, Pmn, z, osc.rep), math.sqrt((m + 1) * (m + e0)) * sym(m + 1, n)),
                    83: (su11_star(Pmn, am, z, osc.rep), math.sqrt((n + 1) * (n + e0)) * sym(m, n + 1)),
                    84: (su11_star(Pmn, ap, z, osc.rep), math.sqrt(n * (n + e0 - 1)) * sym(m, n - 1)),
                }
                for eq, (lhs, rhs) in cases.items():
                    errs[eq][key] = max(errs[eq].get(key, 0.0), abs(lhs - rhs))
    out = VerificationReport("calogero")
    for eq in (81, 82, 83, 84):
        err, key = _worst(errs[eq])
        out.check(f"Eq.{eq}[eta={osc.eta:g}]", err, tol, f"m,n <= {nmax}; worst at {key}")
    return out


def star_eigenvalue_check(osc, grid, nmax=4, tol=1e-8):
    """H_cla * P_mn = e_m P_mn and P_mn * H_cla = e_n P_mn, plus the closed
    form of H_cla = <z|H|z> at both candidate Bargmann indices."""
    _, _, h = ladder_matrices(osc)
    D = osc.cutoff
    e86 = e87 = ecomm = 0.0
    th_cal = th_prose = 0.0
    for z in grid:
        psi = _bg_amps(osc, z)
        for m in range(nmax + 1):
            for n in range(nmax + 1):
                Pmn = projector_matrix(m, n, D)
                p = np.conj(psi[m]) * psi[n]
                left = su11_star(h, Pmn, z, osc.rep)
                right = su11_star(Pmn, h, z, osc.rep)
                e86 = max(e86, abs(left - osc.energy(m) * p))
                e87 = max(e87, abs(right - osc.energy(n) * p))
                if m == n:
                    ecomm = max(ecomm, abs(left - right))
        hcla = su11_star(h, None, z, osc.rep)
        s = abs(complex(z)) ** 2
        th_cal = max(th_cal, abs(hcla - theta(osc.calibrated_k, s)))
        th_prose = max(th_prose, abs(hcla - theta(osc.prose_k, s)))
    out = VerificationReport("calogero")
    out.check(f"Eq.86[eta={osc.eta:g}]", e86, tol, f"m,n <= {nmax}")
    out.check(f"Eq.87[eta={osc.eta:g}]", e87, tol, f"m,n <= {nmax}")
    out.check(f"Eq.86-87[eta={osc.eta:g}]:Pnn-commute", ecomm, tol)
    out.check(f"Eq.85[eta={osc.eta:g}]:calibrated", th_cal, tol, f"<z|H|z> vs Theta_k at k = e0/2 = {osc.calibrated_k:g}")
    out.discrepancy(
        f"Eq.85[eta={osc.eta:g}]:printed",
        th_prose,
        tol,
        f"<z|H|z> vs Theta_k at the printed k = (e0+1)/2 = {osc.prose_k:g}",
    )
    return out


def completeness_check(osc, radius=0.5, margin=10, tol=1e-8, column=1):
    """sum_{m<=M} P_mm = 1 at |z| = radius with M = cutoff - margin.

    The printed column sum sum_m P_{m,n} is evaluated for ``column`` too and
    recorded as a discrepancy when it differs from 1.
    """
    M = osc.cutoff - margin
    err = col = 0.0
    for t in np.linspace(0, 2 * np.pi, 8, endpoint=False):
        z = radius * np.exp(1j * t)
        psi = _bg_amps(osc, z)
        err = max(err, abs(np.sum(np.abs(psi[: M + 1]) ** 2) - 1.0))
        col = max(col, abs(np.sum(np.conj(psi[: M + 1]) * psi[column]) - 1.0))
    out = VerificationReport("calogero")
    out.check(f"completeness[eta={osc.eta:g}]:diagonal", err, tol, f"sum_m P_mm, M={M}, |z|={radius:g}")
    out.discrepancy(f"completeness[eta={osc.eta:g}]:printed", col, tol, f"sum_m P_m,{column} as printed")
    return out


def calibration_check(osc, grid, tol=1e-10):
    """The eigenvector of A- built from its matrix elements against
    z^n/sqrt(n! Gamma(n+2k)) at both candidate indices, and the printed
    closed form of P_mn against the oracle."""
    _, am, _ = ladder_matrices(osc)
    D = osc.cutoff
    amp_cal = amp_prose = 0.0
    cf_printed = cf_cal = 0.0
    n = np.arange(D)
    for z in grid:
        z = complex(z)
        # A- psi = z psi  =>  psi_{n+1} = z psi_n / <n|A-|n+1>
        v = np.empty(D, dtype=complex)
        v[0] = 1.0
        for j in range(D - 1):
            v[j + 1] = z * v[j] / am[j, j + 1]
        v /= np.linalg.norm(v)
        for k, slot in ((osc.calibrated_k, "cal"), (osc.prose_k, "prose")):
            w = np.exp(-0.5 * (special.gammaln(n + 1) + special.gammaln(n + 2 * k) - special.gammaln(2 * k))) * z**n
            w /= np.linalg.norm(w)
            e = float(np.max(np.abs(v - w)))
            if slot == "cal":
                amp_cal = max(amp_cal, e)
            else:
                amp_prose = max(amp_prose, e)
        for m in range(4):
            for nn in range(4):
                ref = projector_symbol(osc, m, nn, z)
                cf_printed = max(cf_printed, abs(projector_closed_form(osc, m, nn, z) - ref))
                cf_cal = max(cf_cal, abs(projector_closed_form(osc, m, nn, z, osc.calibrated_k) - ref))
    out = VerificationReport("calogero")
    out.check(f"calibration[eta={osc.eta:g}]:2k=e0", amp_cal, tol, "A- eigenvector vs z^n/sqrt(n! Gamma(n+e0))")
    out.discrepancy(f"calibration[eta={osc.eta:g}]:2k=e0+1", amp_prose, tol, "A- eigenvector vs z^n/sqrt(n! Gamma(n+e0+1))")
    out.check(f"Eq.78[eta={osc.eta:g}]:calibrated", cf_cal, tol, "closed form at k = e0/2 vs oracle")
    out.discrepancy(f"Eq.78[eta={osc.eta:g}]:printed", cf_printed, tol, "closed form at k = (e0+1)/2 vs oracle")
    out.environment[f"bargmann_index[eta={osc.eta:g}]"] = {"calibrated": osc.calibrated_k, "prose": osc.prose_k}
    return out


def position_wavefunction(osc, n, x):
    """(-1)^n sqrt(2 n!/Gamma(n+e0)) L_n^{e0-1}(x^2) exp(-x^2/2), as printed."""
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0):
        raise DomainError("wavefunctions live on x > 0")
    norm = math.sqrt(2.0 * math.exp(math.lgamma(n + 1) - math.lgamma(n + osc.e0)))
    return (-1) ** n * norm * laguerre(n, osc.e0 - 1, x**2) * np.exp(-(x**2) / 2)


def corrected_wavefunction(osc, n, x):
    """x^{e0-1/2} times the printed form: an eigenfunction of H, orthonormal in dx."""
    x = np.asarray(x, dtype=float)
    return x ** (osc.e0 - 0.5) * position_wavefunction(osc, n, x)


def _weighted_overlap(osc, m, n, power):
    f = lambda x: position_wavefunction(osc, m, x) * position_wavefunction(osc, n, x) * x**power
    val, _ = integrate.quad(f, 0, np.inf, epsabs=1e-13, epsrel=1e-12, limit=200)
    return val


def orthonormality_weight(osc):
    """The power p in the measure x^p dx that makes <Psi_0|Psi_1> vanish,
    found by root bracketing."""
    return optimize.brentq(lambda p: _weighted_overlap(osc, 0, 1, p), 1.0, 2 * osc.e0 + 6, xtol=1e-13)


def _eigen_residual(osc, psi, n, xs, h=1e-3):
    # -1/2 psi'' + (x^2/2 + eta^2/x^2) psi - e_n psi, five-point stencil
    d2 = (-psi(xs + 2 * h) + 16 * psi(xs + h) - 30 * psi(xs) + 16 * psi(xs - h) - psi(xs - 2 * h)) / (12 * h * h)
    r = -0.5 * d2 + (0.5 * xs**2 + osc.eta**2 / xs**2) * psi(xs) - osc.energy(n) * psi(xs)
    return float(np.max(np.abs(r)))


def wavefunction_check(osc, nmax=3, tol=1e-6):
    """Position-space diagnostics: measure for orthonormality and the
    eigenvalue equation for the printed and corrected forms."""
    p = orthonormality_weight(osc)
    gram = np.array([[_weighted_overlap(osc, m, n, p) for n in range(nmax + 1)] for m in range(nmax + 1)])
    xs = np.linspace(0.3, 4.0, 25)
    printed = max(_eigen_residual(osc, lambda x, n=n: position_wavefunction(osc, n, x), n, xs) for n in range(nmax + 1))
    corrected = max(_eigen_residual(osc, lambda x, n=n: corrected_wavefunction(osc, n, x), n, xs) for n in range(nmax + 1))
    out = VerificationReport("calogero")
    out.check(
        f"Eq.73[eta={osc.eta:g}]:weight",
        abs(p - (2 * osc.e0 - 1)),
        1e-8,
        f"empirical measure x^p dx with p = {p:.10f}; expected 2 e0 - 1",
    )
    out.check(f"Eq.73[eta={osc.eta:g}]:orthonormal", float(np.max(np.abs(gram - np.eye(nmax + 1)))), tol, f"n <= {nmax} under x^p dx")
    out.discrepancy(f"Eq.73[eta={osc.eta:g}]:eigen-printed", printed, 1e-5, "H psi - e_n psi for the printed form")
    out.check(f"Eq.73[eta={osc.eta:g}]:eigen-corrected", corrected, 1e-5, "H psi - e_n psi with the factor x^{e0-1/2}")
    out.environment[f"orthonormality_power[eta={osc.eta:g}]"] = round(p, 10)
    return out


def calogero_report(eta, grid=None, nmax=4, tol=1e-8, cutoff=None, position=True):
    osc = SingularOscillator(eta, cutoff)
    if grid is None:
        grid = default_grid()
    out = VerificationReport("calogero")
    out.environment[f"cutoff[eta={eta:g}]"] = osc.cutoff
    out.environment[f"e0[eta={eta:g}]"] = osc.e0
    for part in (
        calibration_check(osc, grid),
        star_projector_algebra_check(osc, grid, nmax, tol),
        star_vacuum_check(osc, grid, tol),
        ladder_action_check(osc, grid, nmax, tol),
        star_eigenvalue_check(osc, grid, nmax, tol),
        completeness_check(osc, tol=tol),
    ):
        out.extend(part)
    if position:
        out.extend(wavefunction_check(osc))
    return out
