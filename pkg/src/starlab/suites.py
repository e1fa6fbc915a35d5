"""Verification suites: every relation checked against an independent oracle.

``run_suite`` builds a :class:`VerificationReport` for one suite or for all
of them.  All randomness comes from ``RunConfig.seed`` (one child generator
per suite), and reports carry no timestamps, so a fixed seed reproduces a
report byte for byte.
"""

from __future__ import annotations

import math
import traceback
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import calogero, covariance, fock, landau, su11
from .errors import ConfigError, StarlabError
from .heisenberg import (
    ExtendedStarContext,
    extended_star,
    icoeff,
    icoeff_printed,
    icoeff_quadrature,
    moyal_bracket,
    voros_star,
)
from .report import FORMATS, VerificationReport
from .symbols import PhaseSymbol, random_symbol, variables

__all__ = [
    "SUITES",
    "RunConfig",
    "run_suite",
    "heisenberg_report",
    "extended_report",
    "canonical_report",
    "su11_report",
    "calogero_suite_report",
    "landau_suite_report",
]

SUITES = ("heisenberg", "extended", "canonical", "su11", "calogero", "landau")


@dataclass(frozen=True)
class RunConfig:
    """Options shared by all suites.

    ``grid`` overrides the number of sample points, ``tol`` the tolerance of
    the floating-point comparisons (exact symbol identities keep tolerance 0),
    ``cutoff`` the Fock cutoff of the Heisenberg oracle.
    """

    seed: int = 7
    grid: int | None = None
    tol: float | None = None
    fmt: str = "json"
    cutoff: int = fock.DEFAULT_CUTOFF

    def __post_init__(self):
        if self.fmt not in FORMATS:
            raise ConfigError(f"unknown format {self.fmt!r}; choose from {', '.join(FORMATS)}")
        if self.grid is not None and self.grid < 1:
            raise ConfigError("grid must be a positive number of points")
        if self.tol is not None and not (self.tol >= 0 and math.isfinite(self.tol)):
            raise ConfigError("tol must be a finite nonnegative number")
        if self.cutoff < 8:
            raise ConfigError("cutoff must be at least 8")

    def npoints(self, default):
        return self.grid if self.grid is not None else default

    def tolerance(self, default):
        return self.tol if self.tol is not None else default

    def rng(self, suite):
        return np.random.default_rng([self.seed, SUITES.index(suite)])


def _disk(rng, npoints, radius, modes=1):
    r = radius * np.sqrt(rng.uniform(0, 1, size=(npoints, modes)))
    t = rng.uniform(0, 2 * np.pi, size=(npoints, modes))
    pts = r * np.exp(1j * t)
    return pts[:, 0] if modes == 1 else pts


def _lift(sym, mode, modes=2):
    """Embed a one-mode symbol as mode ``mode`` of a ``modes``-mode symbol."""
    def put(e):
        out = [0] * modes
        out[mode] = e[0]
        return tuple(out)
    return PhaseSymbol(modes, {(put(m), put(n)): c for (m, n), c in sym.terms.items()})


def _sym_gap(a, b):
    d = a - b
    return float(abs(d.max_abs_coeff())) if d else 0.0


# -- Heisenberg / Voros -------------------------------------------------------


def heisenberg_report(cfg=RunConfig()):
    rng = cfg.rng("heisenberg")
    rep = VerificationReport("heisenberg")
    rep.environment.update({"seed": cfg.seed, "cutoff": cfg.cutoff})

    # the minimal relations, verbatim as exact symbol identities at N = 2
    z, zb = variables(2)
    one = PhaseSymbol.constant(Fraction(1), 2)
    e5 = e6 = e7 = e8 = e9 = 0.0
    for i in range(2):
        for j in range(2):
            e5 = max(e5, _sym_gap(voros_star(zb[i], z[j]), zb[i] * z[j]))
            e6 = max(e6, _sym_gap(voros_star(zb[i], zb[j]), zb[i] * zb[j]), _sym_gap(voros_star(zb[i], zb[j]), voros_star(zb[j], zb[i])))
            e7 = max(e7, _sym_gap(voros_star(z[i], z[j]), z[i] * z[j]), _sym_gap(voros_star(z[i], z[j]), voros_star(z[j], z[i])))
            delta = one if i == j else PhaseSymbol(2)
            e8 = max(e8, _sym_gap(voros_star(z[j], zb[i]), delta + z[j] * zb[i]))
            e9 = max(e9, _sym_gap(moyal_bracket(z[j], zb[i]), delta))
    for eq, err in ((5, e5), (6, e6), (7, e7), (8, e8), (9, e9)):
        rep.check(f"Eq.{eq}", err, 0.0, "exact symbol identity, all i, j at N=2")

    # Voros product against <z|O_f O_g|z> for random rational symbols
    tol = cfg.tolerance(1e-9)
    npts = cfg.npoints(20)
    worst = 0.0
    for trial in range(25):
        modes = 1 + trial % 2
        f = random_symbol(rng, modes, degree=3, nterms=4, exact=True)
        g = random_symbol(rng, modes, degree=3, nterms=4, exact=True)
        pts = _disk(rng, npts, 1.5, modes)
        fg = voros_star(f, g)
        for p in pts:
            worst = max(worst, abs(fg.evaluate(p) - fock.star_oracle(f, g, p, 0, cfg.cutoff)))
    rep.check("Eq.4/21:oracle", worst, tol, f"25 random pairs, degree <= 3, N <= 2, {npts} points |z| <= 1.5, D={cfg.cutoff}")

    # associativity, exactly in rational arithmetic
    worst = 0.0
    for trial in range(8):
        modes = 1 + trial % 2
        f, g, h = (random_symbol(rng, modes, degree=4 if modes == 1 else 3, nterms=3, exact=True) for _ in range(3))
        worst = max(worst, _sym_gap(voros_star(f, voros_star(g, h)), voros_star(voros_star(f, g), h)))
    rep.check("Eq.4:associativity", worst, 0.0, "exact rational arithmetic, 8 random triples")

    # normal-ordered round trip through the oracle
    worst = 0.0
    for _ in range(5):
        f = random_symbol(rng, 1, degree=3, nterms=4)
        for p in _disk(rng, 10, 1.0):
            worst = max(worst, abs(fock.symbol_of(f, p, 0, cfg.cutoff) - f.evaluate(p)))
    rep.check("Eq.3:round-trip", worst, cfg.tolerance(1e-10), "<z|O_f|z> = f at random points")

    # coherent-state normalization: e^{-|z|^2/2} normalizes, e^{-|z|^2} does not
    pts = _disk(rng, 10, 1.5)
    printed = max(abs(math.exp(-abs(p) ** 2 / 2) - 1.0) for p in pts)
    ours = max(abs(fock.coherent_vector(p, cfg.cutoff).norm() - 1.0) for p in pts)
    rep.check("Eq.1:normalized", ours, cfg.tolerance(1e-10), "prefactor exp(-|z|^2/2)")
    rep.discrepancy("Eq.1:printed", printed, 1e-10, "norm with the printed prefactor exp(-|z|^2) is exp(-|z|^2/2)")
    return rep


# -- Extended products ----------------------------------------------------------


def extended_report(cfg=RunConfig()):
    rng = cfg.rng("extended")
    rep = VerificationReport("extended")
    rep.environment.update({"seed": cfg.seed})

    # coefficients
    err0 = max(abs(icoeff(0, p) - Fraction(1, math.factorial(p))) for p in range(11))
    rep.check("Eq.20[k=0]", float(err0), 0.0, "I_{0,p} = 1/p! exactly for p <= 10")
    tol_q = cfg.tolerance(1e-10)
    for k in range(6):
        quad = [icoeff_quadrature(k, p) for p in range(9)]
        ours = max(abs(float(icoeff(k, p)) - q) for p, q in enumerate(quad))
        printed = max(abs(float(icoeff_printed(k, p)) - q) for p, q in enumerate(quad))
        rep.check(f"Eq.20[k={k}]:quadrature", ours, tol_q, "radial moment (1/p!^2) int t^p e^-t L_k^2, p <= 8")
        rep.discrepancy(f"Eq.20[k={k}]:printed", printed, tol_q, "double sum as printed (no 1/(j! j'!)) vs quadrature")

    # k = 0 reproduces the Voros product
    worst = 0.0
    for trial in range(10):
        modes = 1 + trial % 2
        f, g = (random_symbol(rng, modes, degree=3, nterms=4, exact=True) for _ in range(2))
        worst = max(worst, _sym_gap(extended_star(f, g, ExtendedStarContext((0,) * modes)), voros_star(f, g)))
    rep.check("Eq.21", worst, 0.0, "kvec = 0 equals the Voros product exactly")

    # structure relations and brackets
    for kvec in ((0, 0), (1, 2), (3, 5), (4, 4)):
        ctx = ExtendedStarContext(kvec)
        z, zb = variables(2)
        ikn = icoeff(kvec[0], 0) * icoeff(kvec[1], 0)
        errs = dict.fromkeys((22, 23, 24, 25, 26), 0.0)
        for i in range(2):
            for j in range(2):
                errs[22] = max(errs[22], _sym_gap(extended_star(zb[i], z[j], ctx), zb[i] * z[j] * ikn))
                errs[23] = max(errs[23], _sym_gap(extended_star(zb[i], zb[j], ctx), zb[i] * zb[j] * ikn),
                               _sym_gap(extended_star(zb[i], zb[j], ctx), extended_star(zb[j], zb[i], ctx)))
                errs[24] = max(errs[24], _sym_gap(extended_star(z[i], z[j], ctx), z[i] * z[j] * ikn),
                               _sym_gap(extended_star(z[i], z[j], ctx), extended_star(z[j], z[i], ctx)))
                ratio = icoeff(kvec[i], 1) / icoeff(kvec[i], 0)
                delta = PhaseSymbol.constant(ratio, 2) if i == j else PhaseSymbol(2)
                errs[25] = max(errs[25], _sym_gap(extended_star(z[j], zb[i], ctx), (delta + z[j] * zb[i]) * ikn))
                errs[26] = max(errs[26], _sym_gap(moyal_bracket(z[j], zb[i], ctx), delta * ikn))
        for eq, err in errs.items():
            rep.check(f"Eq.{eq}[k={kvec[0]},{kvec[1]}]", err, 0.0, "exact symbol identity, all i, j")
    for k in range(6):
        (z1,), (zb1,) = variables(1)
        br = moyal_bracket(z1, zb1, ExtendedStarContext((k,)))
        rep.check(f"Eq.26[k={k}]", _sym_gap(br, PhaseSymbol.constant(icoeff(k, 1), 1)), 0.0, f"{{z, zbar}}_k = I_k1 = {icoeff(k, 1)}")

    # factorization over modes on separable operands
    worst = 0.0
    for kvec in ((1, 2), (2, 0), (3, 1)):
        f1, g1, f2, g2 = (random_symbol(rng, 1, degree=3, nterms=3, exact=True) for _ in range(4))
        lhs = extended_star(_lift(f1, 0) * _lift(f2, 1), _lift(g1, 0) * _lift(g2, 1), ExtendedStarContext(kvec))
        rhs = _lift(extended_star(f1, g1, ExtendedStarContext((kvec[0],))), 0) * _lift(extended_star(f2, g2, ExtendedStarContext((kvec[1],))), 1)
        worst = max(worst, _sym_gap(lhs, rhs))
    rep.check("Eq.18", worst, 0.0, "two-mode product equals the composition of single-mode products")

    # associativity of *_k is tested, not assumed
    for k in (1, 2):
        ctx = ExtendedStarContext((k,))
        worst = 0.0
        for _ in range(4):
            f, g, h = (random_symbol(rng, 1, degree=3, nterms=3, exact=True) for _ in range(3))
            worst = max(worst, _sym_gap(extended_star(f, extended_star(g, h, ctx), ctx), extended_star(extended_star(f, g, ctx), h, ctx)))
        rep.discrepancy(f"Eq.13[k={k}]:associativity", worst, 0.0, "(f *_k g) *_k h - f *_k (g *_k h), exact")

    # differential form against the operator product <z,k|O_f O_g|z,k>
    (z1,), (zb1,) = variables(1)
    pts = _disk(rng, cfg.npoints(10), 1.0)
    for k in range(4):
        ctx = ExtendedStarContext((k,))
        sym = extended_star(z1, zb1, ctx)
        err = max(abs(sym.evaluate(p) - fock.star_oracle(z1, zb1, p, k, cfg.cutoff)) for p in pts)
        rep.discrepancy(f"Eq.19-vs-13[k={k}]", err, cfg.tolerance(1e-9),
                        f"z *_k zbar = |z|^2 + {icoeff(k, 1)} vs <z,k|a a+|z,k> = |z|^2 + {k + 1}")

    # displaced number states: closed form vs matrix exponential, overlap law
    tol12 = cfg.tolerance(1e-10)
    tol17 = cfg.tolerance(1e-9)
    pts = _disk(rng, cfg.npoints(10), 1.0)
    pts2 = _disk(rng, cfg.npoints(10), 1.0)
    for k in range(5):
        e12 = max(
            float(np.max(np.abs(fock.displaced_number_vector(p, k, 40).amplitudes
                                - fock.displaced_number_vector(p, k, 40, method="expm").amplitudes)))
            for p in pts
        )
        rep.check(f"Eq.12[k={k}]", e12, tol12, "Laguerre amplitudes vs exp(z a+ - zbar a)|k>")
        e17 = 0.0
        for p, q in zip(pts, pts2):
            a = fock.displaced_number_vector(p, k, 48).amplitudes
            b = fock.displaced_number_vector(q, k, 48).amplitudes
            e17 = max(e17, abs(abs(np.vdot(a, b)) ** 2 - fock.overlap_closed_form(p, q, k)))
        rep.check(f"Eq.17[k={k}]", e17, tol17, "|<z,k|z',k>|^2 from state vectors")
        num = max(abs(fock.symbol_of(zb1 * z1, p, k, 48) - (k + abs(p) ** 2)) for p in pts)
        rep.check(f"number[k={k}]", num, tol12, "<z,k|a+ a|z,k> = k + |z|^2")
    for k in range(3):
        R = fock.resolution_of_unity(k)
        rep.check(f"Eq.11[k={k}]:unity", float(np.max(np.abs(R - np.eye(R.shape[0])))), cfg.tolerance(1e-9),
                  "(1/pi) int |z,k><z,k| d^2z on the first 6 levels")
    return rep


# -- Canonical covariance -------------------------------------------------------


def canonical_report(cfg=RunConfig()):
    rng = cfg.rng("canonical")
    rep = VerificationReport("canonical")
    rep.environment.update({"seed": cfg.seed})
    (z,), (zb,) = variables(1)
    pts = _disk(rng, cfg.npoints(12), 1.0)
    tol = cfg.tolerance(1e-7)
    observables = {"z": z, "zbar": zb, "zbar z": zb * z, "z^2": z * z, "zbar^2": zb * zb}
    for xi in (0.1, 0.3):
        lam = covariance.squeeze_generator([[xi]])
        for name, f in observables.items():
            part = covariance.covariance_report(f, lam, canonical=True, points=pts[:, None], tol=tol, label=f"xi={xi:g},{name}")
            rep.extend(part)
        rep.extend(covariance.bogoliubov_operator_check(xi, pts))
        rep.extend(covariance.block_check([[xi]]))
    rep.extend(covariance.block_check([[0.2j]]))
    rep.extend(covariance.block_check([[0.2 + 0.1j, 0.15], [0.15, -0.1 + 0.05j]], label="Xi 2x2"))

    cubic = covariance.cubic_generator()
    part = covariance.covariance_report(zb * z, cubic, canonical=False, points=pts[:, None], order=4, label="cubic,zbar z")
    rep.extend(part)

    lam = covariance.squeeze_generator([[0.3]])
    lam_pts = _disk(rng, 10, 1.0)[:, None]
    rep.extend(covariance.identity_check(lam, lam_pts, tol=cfg.tolerance(1e-8)))
    rep.extend(covariance.sandwich_check(lam, zb * z, lam_pts, tol=tol))
    l1 = PhaseSymbol(1, {((2,), (0,)): Fraction(1, 2), ((0,), (2,)): Fraction(-1, 2)})
    l2 = PhaseSymbol(1, {((3,), (0,)): Fraction(1, 3), ((0,), (3,)): Fraction(-1, 3)})
    f = random_symbol(rng, 1, degree=3, nterms=4, exact=True)
    rep.extend(covariance.dlambda_commutator_check(l1, l2, f))
    return rep


# -- su(1,1) ------------------------------------------------------------------------


SU11_INDICES = (0.5, 1.0, 1.5, 2.0)


def su11_report(cfg=RunConfig(), ks=SU11_INDICES, contraction=(1e3, 1e4)):
    rng = cfg.rng("su11")
    rep = VerificationReport("su11")
    rep.environment.update({"seed": cfg.seed})
    pts = np.concatenate([[0.0], _disk(rng, cfg.npoints(12) - 1, 1.0)])
    for k in ks:
        rep.extend(su11.normalization_check(k, pts))
        rep.extend(su11.theta_oracle_check(k, pts, tol=cfg.tolerance(1e-9)))
        rep.extend(su11.star_relations_check(k, pts, tol=cfg.tolerance(1e-8)))
        rep.extend(su11.su11_moyal_check(k, pts, tol=cfg.tolerance(1e-8)))
        rep.extend(su11.theta_star_relations_check(k, pts, tol=cfg.tolerance(1e-8)))
        rep.extend(su11.commutativity_check(k, pts))
    devs = []
    for k in contraction:
        part = su11.contraction_check(k, tol=2.0 / k)
        devs.append(part.environment[f"contraction_deviation[k={k:g}]"])
        rep.extend(part)
    if len(devs) >= 2:
        ratio = devs[0] / devs[-1] if devs[-1] > 0 else math.inf
        decades = math.log10(contraction[-1] / contraction[0])
        rep.check(
            "Eq.71:scaling",
            max(0.0, 10**decades - ratio) / 10**decades,
            0.1,
            f"deviation ratio {ratio:.4f} between k={contraction[0]:g} and k={contraction[-1]:g}",
        )
    return rep


# -- singular oscillator and Landau ---------------------------------------------------


def calogero_suite_report(cfg=RunConfig(), etas=calogero.DEFAULT_ETAS):
    rng = cfg.rng("calogero")
    grid = np.concatenate([[0.0], _disk(rng, cfg.npoints(12) - 1, 1.0)])
    rep = VerificationReport("calogero")
    rep.environment.update({"seed": cfg.seed})
    for eta in etas:
        rep.extend(calogero.calogero_report(eta, grid, tol=cfg.tolerance(1e-8)))
    return rep


def landau_suite_report(cfg=RunConfig(), kmax=3, lmax=3):
    rng = cfg.rng("landau")
    grid = _disk(rng, cfg.npoints(10), 1.5)
    rep = landau.landau_report(kmax, lmax, grid, tol=cfg.tolerance(1e-10))
    rep.environment.update({"seed": cfg.seed})
    return rep


_RUNNERS = {
    "heisenberg": heisenberg_report,
    "extended": extended_report,
    "canonical": canonical_report,
    "su11": su11_report,
    "calogero": calogero_suite_report,
    "landau": landau_suite_report,
}


def _guarded(name, cfg):
    """Run one suite; numerical failures become fail entries."""
    try:
        return _RUNNERS[name](cfg)
    except (StarlabError, ArithmeticError, ValueError) as exc:
        rep = VerificationReport(name)
        last = traceback.extract_tb(exc.__traceback__)[-1]
        rep.fail(f"{name}:error", f"{type(exc).__name__}: {exc} (at {last.name})")
        return rep


def run_suite(name, cfg=RunConfig()):
    """Run ``name`` (one of SUITES, or 'all')."""
    if name == "all":
        out = VerificationReport("all")
        out.environment["seed"] = cfg.seed
        for s in SUITES:
            out.extend(_guarded(s, cfg))
        return out
    if name not in _RUNNERS:
        raise ConfigError(f"unknown suite {name!r}; choose from {', '.join(SUITES)} or all")
    return _guarded(name, cfg)
