"""Star products for the Weyl-Heisenberg algebra h_N.

The Voros product

    f * g = sum_p  prod_i (1/p_i!)  (d^{p_i}/dz_i^{p_i} f) (d^{p_i}/dzbar_i^{p_i} g)

and its extension from displaced number states |z, k>, where 1/p! is replaced
by a coefficient I_{k,p} per mode.  Both act on :class:`PhaseSymbol` operands
and terminate because the operands are polynomials.

Two versions of I_{k,p} are exposed:

``icoeff``
    the radial moment (1/p!^2) int_0^inf t^p e^{-t} L_k(t)^2 dt, expanded in
    closed form with the Laguerre coefficients (-1)^j C(k, j) / j!.  This is
    what the overlap |<z,k|z',k>|^2 = e^{-t} L_k(t)^2 produces and what the
    Gauss-Laguerre oracle ``icoeff_quadrature`` reproduces.
``icoeff_printed``
    the same double sum with the 1/(j! j'!) factors left out.  It agrees with
    ``icoeff`` for k <= 1 only; it is kept so reports can show the difference.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np
from scipy import signal

from .errors import ModeMismatch, NonConvergence
from .specfun import laguerre
from .symbols import PhaseSymbol

__all__ = [
    "icoeff",
    "icoeff_printed",
    "icoeff_quadrature",
    "StarCoeffTable",
    "coeff_table",
    "ExtendedStarContext",
    "voros_star",
    "extended_star",
    "star",
    "moyal_bracket",
    "star_power",
    "StarSeries",
    "star_exp",
]


@lru_cache(maxsize=None)
def icoeff(k, p):
    """Exact I_{k,p} as a Fraction (see module docstring)."""
    if k < 0 or p < 0:
        raise ValueError(f"k and p must be nonnegative, got k={k}, p={p}")
    # Laguerre coefficients of L_k: (-1)^j C(k, k-j) / j!
    lag = [Fraction((-1) ** j * math.comb(k, k - j), math.factorial(j)) for j in range(k + 1)]
    total = Fraction(0)
    for j, cj in enumerate(lag):
        for jj, cjj in enumerate(lag):
            total += cj * cjj * math.factorial(p + j + jj)
    return total / math.factorial(p) ** 2


@lru_cache(maxsize=None)
def icoeff_printed(k, p):
    """The double sum without the 1/(j! j'!) factors, in exact integers."""
    if k < 0 or p < 0:
        raise ValueError(f"k and p must be nonnegative, got k={k}, p={p}")
    total = 0
    for j in range(k + 1):
        for jj in range(k + 1):
            total += (
                math.factorial(p + j + jj)
                * (-1) ** (j + jj)
                * math.comb(k, k - j)
                * math.comb(k, k - jj)
            )
    return Fraction(total, math.factorial(p) ** 2)


def icoeff_quadrature(k, p, quad_nodes=None):
    """I_{k,p} from Gauss-Laguerre quadrature of t^p L_k(t)^2 / p!^2.

    The integrand is a polynomial of degree p + 2k against e^{-t}, so any
    ``quad_nodes >= k + p + 1`` integrates it exactly up to rounding.
    """
    if quad_nodes is None:
        quad_nodes = k + p + 1
    if quad_nodes < k + p + 1:
        raise ValueError(f"need at least k+p+1 = {k + p + 1} nodes, got {quad_nodes}")
    t, w = np.polynomial.laguerre.laggauss(quad_nodes)
    vals = w * t**p * laguerre(k, 0.0, t) ** 2
    return float(math.fsum(vals)) / math.factorial(p) ** 2


@dataclass(frozen=True)
class StarCoeffTable:
    """I_{k,p} for p = 0..p_max, exact and as floats."""

    k: int
    exact: tuple
    quadrature: tuple = ()

    @property
    def p_max(self):
        return len(self.exact) - 1

    @property
    def values(self):
        return np.array([float(v) for v in self.exact])

    def rows(self):
        for p, v in enumerate(self.exact):
            row = {"k": self.k, "p": p, "exact": str(v), "value": float(v)}
            if self.quadrature:
                row["quadrature"] = self.quadrature[p]
            row["printed"] = str(icoeff_printed(self.k, p))
            yield row


def coeff_table(k, p_max, with_quadrature=True):
    exact = tuple(icoeff(k, p) for p in range(p_max + 1))
    quad = tuple(icoeff_quadrature(k, p) for p in range(p_max + 1)) if with_quadrature else ()
    return StarCoeffTable(k, exact, quad)


@dataclass(frozen=True)
class ExtendedStarContext:
    """Per-mode reference levels k_i for the extended product.

    ``p_max`` caps the derivative order; ``None`` means "as high as the
    operands need", which is exact for polynomials.
    """

    kvec: tuple
    p_max: int | None = None
    printed_coefficients: bool = field(default=False)

    def __post_init__(self):
        kv = tuple(int(k) for k in self.kvec)
        if any(k < 0 for k in kv):
            raise ValueError(f"reference levels must be nonnegative: {kv}")
        object.__setattr__(self, "kvec", kv)

    @property
    def modes(self):
        return len(self.kvec)

    def coefficient(self, mode, p):
        fn = icoeff_printed if self.printed_coefficients else icoeff
        return fn(self.kvec[mode], p)


def _voros_weight(mode, p):
    return Fraction(1, math.factorial(p))


def _weight_tables(f, g, weight, exact):
    """Per-mode lists w[i][p] for p up to the highest order that can appear."""
    tabs = []
    for i in range(f.modes):
        top = max(0, min(f.degree_in(i, False), g.degree_in(i, True)))
        row = [weight(i, p) for p in range(top + 1)]
        tabs.append(row if exact else [float(w) for w in row])
    return tabs


def _sparse_star(f, g, wtab):
    modes = f.modes
    out = {}
    unit = all(row[0] == 1 for row in wtab)
    for (m1, n1), c1 in f._terms.items():
        for (m2, n2), c2 in g._terms.items():
            base = c1 * c2
            tops = [min(n1[i], m2[i], len(wtab[i]) - 1) for i in range(modes)]
            if not any(tops) and unit:
                key = (
                    tuple(a + b for a, b in zip(m1, m2)),
                    tuple(a + b for a, b in zip(n1, n2)),
                )
                out[key] = out.get(key, 0) + base
                continue
            for ps in itertools.product(*(range(t + 1) for t in tops)):
                c = base
                for i, p in enumerate(ps):
                    w = wtab[i][p]
                    if p:
                        w = w * (math.perm(n1[i], p) * math.perm(m2[i], p))
                    if w != 1:
                        c = c * w
                key = (
                    tuple(m1[i] + m2[i] - ps[i] for i in range(modes)),
                    tuple(n1[i] + n2[i] - ps[i] for i in range(modes)),
                )
                out[key] = out.get(key, 0) + c
    return PhaseSymbol(modes, out)


def _to_dense(f, mshape, nshape):
    arr = np.zeros(tuple(mshape) + tuple(nshape), dtype=complex)
    for (m, n), c in f._terms.items():
        arr[m + n] += complex(c)
    return arr


def _falling_axis(size, p):
    j = np.arange(size - p)
    out = np.ones(size - p)
    for r in range(p):
        out *= j + p - r
    return out


def _dense_star(f, g, wtab):
    """Same bidifferential sum as ``_sparse_star`` via N-d direct convolution."""
    N = f.modes
    fm = [max(f.degree_in(i, True), 0) + 1 for i in range(N)]
    fn = [max(f.degree_in(i, False), 0) + 1 for i in range(N)]
    gm = [max(g.degree_in(i, True), 0) + 1 for i in range(N)]
    gn = [max(g.degree_in(i, False), 0) + 1 for i in range(N)]
    F = _to_dense(f, fm, fn)
    G = _to_dense(g, gm, gn)
    out = np.zeros(tuple(a + b - 1 for a, b in zip(fm, gm)) + tuple(a + b - 1 for a, b in zip(fn, gn)), dtype=complex)
    for ps in itertools.product(*(range(len(row)) for row in wtab)):
        w = 1.0
        Fp, Gp = F, G
        for i, p in enumerate(ps):
            w *= wtab[i][p]
            if p == 0:
                continue
            if p >= fn[i] or p >= gm[i]:
                w = 0.0
                break
            # d^p/dz_i^p on f: shift the n_i axis of F
            ax = N + i
            sl = [slice(None)] * (2 * N)
            sl[ax] = slice(p, None)
            shape = [1] * (2 * N)
            shape[ax] = fn[i] - p
            Fp = Fp[tuple(sl)] * _falling_axis(fn[i], p).reshape(shape)
            # d^p/dzbar_i^p on g: shift the m_i axis of G
            sl = [slice(None)] * (2 * N)
            sl[i] = slice(p, None)
            shape = [1] * (2 * N)
            shape[i] = gm[i] - p
            Gp = Gp[tuple(sl)] * _falling_axis(gm[i], p).reshape(shape)
        if w == 0.0:
            continue
        conv = signal.convolve(Fp, Gp, method="direct")
        out[tuple(slice(0, s) for s in conv.shape)] += w * conv
    terms = {}
    for idx in zip(*np.nonzero(out)):
        idx = tuple(int(v) for v in idx)
        terms[(idx[:N], idx[N:])] = complex(out[idx])
    return PhaseSymbol(N, terms)


# above this many term pairs a float product goes through the dense path
DENSE_THRESHOLD = 600


def _bidiff_star(f, g, weight, dense=None):
    if f.modes != g.modes:
        raise ModeMismatch(f"{f.modes} vs {g.modes} modes")
    if not f or not g:
        return PhaseSymbol(f.modes)
    exact = f.is_exact and g.is_exact
    wtab = _weight_tables(f, g, weight, exact)
    if dense is None:
        dense = not exact and len(f) * len(g) > DENSE_THRESHOLD
    if dense:
        return _dense_star(f, g, wtab)
    return _sparse_star(f, g, wtab)


def voros_star(f, g, dense=None):
    """Voros (normal-ordered coherent-state) product f * g."""
    return _bidiff_star(f, g, _voros_weight, dense)


def extended_star(f, g, ctx, dense=None):
    """Extended product f *_k g with per-mode coefficients I_{k_i, p}."""
    if ctx.modes != f.modes:
        raise ModeMismatch(f"context has {ctx.modes} modes, symbols have {f.modes}")
    if ctx.p_max is not None:
        need = max(
            (min(f.degree_in(i, False), g.degree_in(i, True)) for i in range(f.modes)),
            default=0,
        )
        if ctx.p_max < need:
            raise ValueError(f"p_max={ctx.p_max} is below the order {need} the operands need")
    return _bidiff_star(f, g, ctx.coefficient, dense)


def star(f, g, ctx=None):
    """Voros product if ``ctx`` is None, extended product otherwise."""
    if ctx is None:
        return voros_star(f, g)
    return extended_star(f, g, ctx)


def moyal_bracket(f, g, ctx=None):
    """Star commutator f * g - g * f."""
    return star(f, g, ctx) - star(g, f, ctx)


def star_power(f, n, ctx=None):
    out = PhaseSymbol.constant(1, f.modes)
    for _ in range(n):
        out = star(out, f, ctx)
    return out


def default_points(modes=1, npoints=10, radius=1.0, seed=0):
    rng = np.random.default_rng(seed)
    r = radius * np.sqrt(rng.uniform(0, 1, size=(npoints, modes)))
    th = rng.uniform(0, 2 * np.pi, size=(npoints, modes))
    return r * np.exp(1j * th)


@dataclass
class StarSeries:
    """Truncated star exponential.

    ``symbol`` is the partial sum, ``terms`` the number of terms summed and
    ``increment`` the largest value of the last term on the sample points.
    """

    symbol: PhaseSymbol
    terms: int
    points: np.ndarray
    increment: float

    def __call__(self, z):
        return self.symbol.evaluate(z)


def star_exp(f, ctx=None, points=None, tol=1e-12, max_terms=200):
    """Star exponential sum_k f^{*k} / k!.

    Convergence is judged on the values of the added term at ``points``: the
    sum stops once two consecutive terms are below ``tol`` there.
    """
    if points is None:
        points = default_points(f.modes)
    points = np.asarray(points, dtype=complex)
    one = PhaseSymbol.constant(1, f.modes)
    total = one
    term = one
    quiet = 0
    for k in range(1, max_terms + 1):
        term = star(term, f, ctx) / k
        total = total + term
        inc = float(np.max(np.abs(term.evaluate(points)))) if term else 0.0
        quiet = quiet + 1 if inc < tol else 0
        if quiet >= 2 or not term:
            return StarSeries(total, k + 1, points, inc)
    raise NonConvergence(f"star exponential not converged after {max_terms} terms (increment {inc:.3e})")
