"""Truncated Fock-space oracle.

Dense matrices and state vectors on the number basis |n_1, ..., n_N> with a
per-mode cutoff D.  The multi-index is row-major with mode 0 most
significant, i.e. the flat index of |n_1 ... n_N> is
``np.ravel_multi_index((n_1, ..., n_N), (D,) * N)``, which is the ordering
``np.kron`` produces.

Everything here is brute force on purpose: it is the ground truth the symbol
calculus in :mod:`starlab.heisenberg` is checked against.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import linalg, special

from .errors import ModeMismatch, TruncationError
from .specfun import laguerre
from .symbols import PhaseSymbol

DEFAULT_MAX_LOSS = 1e-10
DEFAULT_CUTOFF = 48


def max_cutoff():
    """Cap on the per-mode cutoff, from STARLAB_MAX_CUTOFF (default 512)."""
    raw = os.environ.get("STARLAB_MAX_CUTOFF")
    return int(raw) if raw else 512


def resolve_cutoff(cutoff):
    cap = max_cutoff()
    return min(int(cutoff), cap)


@dataclass(frozen=True, eq=False)
class FockOperator:
    matrix: np.ndarray
    cutoff: int
    modes: int = 1

    def __post_init__(self):
        dim = self.cutoff**self.modes
        if self.matrix.shape != (dim, dim):
            raise ValueError(f"matrix shape {self.matrix.shape} does not match {self.modes} modes at cutoff {self.cutoff}")

    def __matmul__(self, other):
        if isinstance(other, FockOperator):
            return FockOperator(self.matrix @ other.matrix, self.cutoff, self.modes)
        if isinstance(other, StateVector):
            return self.matrix @ other.amplitudes
        return self.matrix @ other

    def __add__(self, other):
        return FockOperator(self.matrix + other.matrix, self.cutoff, self.modes)

    def __sub__(self, other):
        return FockOperator(self.matrix - other.matrix, self.cutoff, self.modes)

    def scale(self, c):
        return FockOperator(c * self.matrix, self.cutoff, self.modes)

    def dag(self):
        return FockOperator(self.matrix.conj().T, self.cutoff, self.modes)

    def commutator(self, other):
        return self @ other - other @ self

    def expect(self, state):
        v = state.amplitudes if isinstance(state, StateVector) else state
        return complex(np.vdot(v, self.matrix @ v))


@dataclass(frozen=True, eq=False)
class StateVector:
    """Truncated state.  ``loss`` is the norm^2 that falls outside the cutoff."""

    amplitudes: np.ndarray
    cutoff: int
    modes: int = 1
    loss: float = 0.0

    def norm(self):
        return float(np.linalg.norm(self.amplitudes))

    def inner(self, other):
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def tensor(self, other):
        return StateVector(
            np.kron(self.amplitudes, other.amplitudes),
            self.cutoff,
            self.modes + other.modes,
            1.0 - (1.0 - self.loss) * (1.0 - other.loss),
        )


def identity(cutoff, modes=1):
    return FockOperator(np.eye(cutoff**modes, dtype=complex), cutoff, modes)


@lru_cache(maxsize=64)
def _lower(cutoff):
    return np.diag(np.sqrt(np.arange(1, cutoff, dtype=float)), 1)


def _embed(single, mode, modes, cutoff):
    out = np.ones((1, 1))
    eye = np.eye(cutoff)
    for i in range(modes):
        out = np.kron(out, single if i == mode else eye)
    return out


def ladder(mode, kind, cutoff, modes=1):
    """a_mode (``kind='lower'``) or a_mode^+ (``kind='raise'``)."""
    if cutoff < 2:
        raise ValueError("cutoff must be at least 2")
    if not 0 <= mode < modes:
        raise IndexError(f"mode {mode} out of range for {modes} modes")
    a = _lower(cutoff)
    if kind == "lower":
        single = a
    elif kind == "raise":
        single = a.T
    else:
        raise ValueError(f"kind must be 'raise' or 'lower', got {kind!r}")
    return FockOperator(_embed(single, mode, modes, cutoff).astype(complex), cutoff, modes)


def number_state(n, cutoff, modes=1):
    n = (n,) if np.isscalar(n) else tuple(n)
    v = np.zeros(cutoff**modes, dtype=complex)
    v[np.ravel_multi_index(n, (cutoff,) * modes)] = 1.0
    return StateVector(v, cutoff, modes)


def _check_loss(loss, max_loss, what):
    if max_loss is not None and loss > max_loss:
        raise TruncationError(f"{what}: truncation loss {loss:.3e} exceeds {max_loss:.1e}; raise the cutoff")


def _coherent_single(z, cutoff):
    n = np.arange(cutoff)
    s = abs(z) ** 2
    if z == 0:
        amp = np.zeros(cutoff, dtype=complex)
        amp[0] = 1.0
        return amp, 0.0
    logmag = -0.5 * s + n * math.log(abs(z)) - 0.5 * special.gammaln(n + 1)
    amp = np.exp(logmag) * np.exp(1j * n * np.angle(z))
    # Poisson tail P(n >= cutoff) with mean |z|^2
    loss = float(special.gammainc(cutoff, s))
    return amp, loss


def coherent_vector(z, cutoff=DEFAULT_CUTOFF, max_loss=DEFAULT_MAX_LOSS):
    """Standard coherent state |z>, normalized with exp(-|z|^2/2) per mode."""
    zs = np.atleast_1d(np.asarray(z, dtype=complex))
    amps, keep = np.ones(1, dtype=complex), 1.0
    for zi in zs:
        a, loss = _coherent_single(complex(zi), cutoff)
        amps = np.kron(amps, a)
        keep *= 1.0 - loss
    loss = 1.0 - keep
    _check_loss(loss, max_loss, f"coherent state at |z|={np.linalg.norm(zs):.3g}, cutoff {cutoff}")
    return StateVector(amps, cutoff, len(zs), loss)


def displaced_number_amplitudes(z, k, cutoff):
    """<l|z,k> for l < cutoff in closed form (Laguerre expansion)."""
    z = complex(z)
    s = abs(z) ** 2
    amp = np.zeros(cutoff, dtype=complex)
    gauss = math.exp(-0.5 * s)
    for l in range(cutoff):
        if l < k:
            pref = math.exp(0.5 * (special.gammaln(l + 1) - special.gammaln(k + 1)))
            amp[l] = pref * (-z.conjugate()) ** (k - l) * laguerre(l, k - l, s)
        else:
            pref = math.exp(0.5 * (special.gammaln(k + 1) - special.gammaln(l + 1)))
            amp[l] = pref * z ** (l - k) * laguerre(k, l - k, s)
    return gauss * amp


def displacement_operator(z, cutoff, pad=None):
    """D(z) = exp(z a+ - zbar a) restricted to the first ``cutoff`` levels.

    The exponential is taken on a larger space (``cutoff + pad``) and then
    cropped, so that the truncation edge does not leak into the block kept.
    """
    z = complex(z)
    if pad is None:
        pad = cutoff + 20 + int(4 * abs(z) ** 2)
    big = cutoff + pad
    a = _lower(big)
    gen = z * a.T - z.conjugate() * a
    return linalg.expm(gen)[:cutoff, :cutoff]


def displaced_number_vector(z, k, cutoff=DEFAULT_CUTOFF, method="closed", max_loss=DEFAULT_MAX_LOSS):
    """Displaced number state |z,k> = D(z)|k> for one mode, or a tensor
    product over modes when ``z`` and ``k`` are sequences.

    ``method='closed'`` uses the Laguerre expansion, ``method='expm'`` applies
    the matrix exponential of the displacement generator to |k>.
    """
    zs = np.atleast_1d(np.asarray(z, dtype=complex))
    ks = np.atleast_1d(np.asarray(k, dtype=int))
    if ks.size == 1 and zs.size > 1:
        ks = np.full(zs.size, int(ks[0]))
    if ks.size != zs.size:
        raise ModeMismatch(f"{zs.size} displacements but {ks.size} reference levels")
    amps, keep = np.ones(1, dtype=complex), 1.0
    for zi, ki in zip(zs, ks):
        ki = int(ki)
        if ki >= cutoff:
            raise TruncationError(f"reference level {ki} not below cutoff {cutoff}")
        if method == "closed":
            a = displaced_number_amplitudes(zi, ki, cutoff)
        elif method == "expm":
            a = displacement_operator(zi, cutoff)[:, ki].astype(complex)
        else:
            raise ValueError(f"unknown method {method!r}")
        keep *= min(1.0, float(np.vdot(a, a).real))
        amps = np.kron(amps, a)
    loss = max(0.0, 1.0 - keep)
    _check_loss(loss, max_loss, f"displaced number state, cutoff {cutoff}")
    return StateVector(amps, cutoff, len(zs), loss)


def reference_state(z, reference_k=0, cutoff=DEFAULT_CUTOFF, max_loss=DEFAULT_MAX_LOSS):
    """|z> when every reference level is 0, |z,k> otherwise."""
    ks = np.atleast_1d(reference_k)
    if not np.any(ks):
        return coherent_vector(z, cutoff, max_loss)
    return displaced_number_vector(z, reference_k, cutoff, max_loss=max_loss)


@lru_cache(maxsize=512)
def _mode_monomial(m, n, cutoff):
    a = _lower(cutoff)
    return np.linalg.matrix_power(a.T, m) @ np.linalg.matrix_power(a, n)


def normal_ordered_operator(f, cutoff=DEFAULT_CUTOFF):
    """sum c_{m,n} (a+)^m a^n as a dense matrix."""
    dim = cutoff**f.modes
    if dim > 4096:
        raise TruncationError(f"operator of dimension {dim} is too large to build densely; use apply_symbol")
    out = np.zeros((dim, dim), dtype=complex)
    for (m, n), c in f.terms.items():
        block = np.ones((1, 1))
        for i in range(f.modes):
            block = np.kron(block, _mode_monomial(m[i], n[i], cutoff))
        out += complex(c) * block
    return FockOperator(out, cutoff, f.modes)


def apply_symbol(f, state):
    """O_f |psi> without forming the full operator."""
    if f.modes != state.modes:
        raise ModeMismatch(f"symbol has {f.modes} modes, state has {state.modes}")
    D, N = state.cutoff, state.modes
    psi = state.amplitudes.reshape((D,) * N)
    out = np.zeros_like(psi)
    for (m, n), c in f.terms.items():
        t = psi
        for i in range(N):
            if m[i] == 0 and n[i] == 0:
                continue
            mat = _mode_monomial(m[i], n[i], D)
            t = np.moveaxis(np.tensordot(mat, t, axes=([1], [i])), 0, i)
        out = out + complex(c) * t
    return out.reshape(-1)


def symbol_of(op, at, reference_k=0, cutoff=DEFAULT_CUTOFF):
    """<z,k| O |z,k> for a FockOperator or a PhaseSymbol (via its normal-ordered operator)."""
    if isinstance(op, FockOperator):
        cutoff = op.cutoff
    state = reference_state(at, reference_k, cutoff)
    if isinstance(op, PhaseSymbol):
        return complex(np.vdot(state.amplitudes, apply_symbol(op, state)))
    return op.expect(state)


def star_oracle(f, g, at, reference_k=0, cutoff=DEFAULT_CUTOFF):
    """<z,k| O_f O_g |z,k> with O_f, O_g the normal-ordered operators of f, g."""
    if f.modes != g.modes:
        raise ModeMismatch(f"{f.modes} vs {g.modes} modes")
    state = reference_state(at, reference_k, cutoff)
    left = apply_symbol(f.conj(), state)   # O_f^+ |psi>
    right = apply_symbol(g, state)
    return complex(np.vdot(left, right))


def overlap_closed_form(z, zp, k):
    """|<z,k|z',k>|^2 = prod_i exp(-|w_i|^2) L_{k_i}(|w_i|^2), w = z' - z."""
    zs = np.atleast_1d(np.asarray(z, dtype=complex))
    zps = np.atleast_1d(np.asarray(zp, dtype=complex))
    ks = np.broadcast_to(np.atleast_1d(k), zs.shape)
    out = 1.0
    for a, b, ki in zip(zs, zps, ks):
        t = abs(b - a) ** 2
        out *= math.exp(-t) * laguerre(int(ki), 0.0, t) ** 2
    return out


def resolution_of_unity(k, nmax=6, radial_nodes=40, angular_nodes=32):
    """(1/pi) int |z,k><z,k| d^2z restricted to the first ``nmax`` levels.

    Gauss-Laguerre in t = |z|^2 (weight e^{-t}) times the trapezoid rule in
    the angle.  Matrix elements are taken from the closed-form amplitudes, so
    no cutoff is involved.
    """
    t, w = np.polynomial.laguerre.laggauss(radial_nodes)
    th = 2 * np.pi * np.arange(angular_nodes) / angular_nodes
    out = np.zeros((nmax, nmax), dtype=complex)
    for ti, wi in zip(t, w):
        for a in th:
            z = math.sqrt(ti) * np.exp(1j * a)
            v = displaced_number_amplitudes(z, k, max(nmax, k + 1))[:nmax]
            # amplitudes carry exp(-t/2) each; the quadrature weight already holds e^{-t}
            out += (wi * math.exp(ti) / angular_nodes) * np.outer(v, v.conj())
    return out
