"""Normal-ordered phase-space symbols.

A :class:`PhaseSymbol` is a finite polynomial

    f(zbar, z) = sum_{m, n} c_{m,n} zbar^m z^n

over ``modes`` complex variables, where ``m`` and ``n`` are exponent vectors.
The monomial ``zbar^m z^n`` stands for the normally ordered operator
``(a+)^m (a-)^n``, so the pointwise product here is the *commutative* product;
star products live in :mod:`starlab.heisenberg`.

Coefficients may be ``complex``/``float`` or :class:`fractions.Fraction`.
Fractions stay exact through every operation in this module, which is what
the exact identity tests rely on.
"""

from __future__ import annotations

import json
import math
import numbers
from fractions import Fraction
from types import MappingProxyType

import numpy as np

from .errors import ModeMismatch, ParseError

__all__ = [
    "PhaseSymbol",
    "generator",
    "constant",
    "add",
    "scale",
    "pointwise_mul",
    "derive",
    "evaluate",
    "variables",
    "random_symbol",
]

_SUPERSCRIPTS = str.maketrans("0123456789", "⁰¹²³⁴⁵⁶⁷⁸⁹")
_SUBSCRIPTS = str.maketrans("0123456789", "₀₁₂₃₄₅₆₇₈₉")


def _falling(n, p):
    """n (n-1) ... (n-p+1) as an int."""
    out = 1
    for j in range(p):
        out *= n - j
    return out


def _is_zero(c):
    return c == 0


class PhaseSymbol:
    """Immutable sparse polynomial in z_i and zbar_i."""

    __slots__ = ("modes", "_terms", "__weakref__")

    def __init__(self, modes, terms=None):
        if modes < 1:
            raise ValueError(f"modes must be positive, got {modes}")
        self.modes = int(modes)
        clean = {}
        for key, c in (terms or {}).items():
            m, n = key
            m, n = tuple(int(e) for e in m), tuple(int(e) for e in n)
            if len(m) != modes or len(n) != modes:
                raise ModeMismatch(f"exponent vectors {m}, {n} do not have length {modes}")
            if min(m + n) < 0:
                raise ValueError(f"negative exponent in {m}, {n}")
            if _is_zero(c):
                continue
            k = (m, n)
            if k in clean:
                c = clean[k] + c
                if _is_zero(c):
                    del clean[k]
                    continue
            clean[k] = c
        self._terms = clean

    @classmethod
    def _raw(cls, modes, terms):
        # trusted constructor: keys already validated, zeros already dropped
        obj = cls.__new__(cls)
        obj.modes = modes
        obj._terms = terms
        return obj

    # construction helpers

    @classmethod
    def constant(cls, value, modes=1):
        zero = (0,) * modes
        return cls(modes, {(zero, zero): value})

    @classmethod
    def generator(cls, mode, conjugated=False, modes=1):
        if not 0 <= mode < modes:
            raise IndexError(f"mode {mode} out of range for {modes} modes")
        unit = tuple(1 if i == mode else 0 for i in range(modes))
        zero = (0,) * modes
        key = (unit, zero) if conjugated else (zero, unit)
        return cls(modes, {key: 1})

    @classmethod
    def monomial(cls, m, n, coeff=1):
        return cls(len(m), {(tuple(m), tuple(n)): coeff})

    # basic protocol

    @property
    def terms(self):
        return MappingProxyType(self._terms)

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def __iter__(self):
        return iter(self.items())

    def items(self):
        """Terms in canonical (graded lexicographic) order."""
        return sorted(self._terms.items(), key=lambda kv: _order_key(kv[0]))

    def coeff(self, m, n):
        return self._terms.get((tuple(m), tuple(n)), 0)

    def __eq__(self, other):
        if isinstance(other, PhaseSymbol):
            return self.modes == other.modes and self._terms == other._terms
        if isinstance(other, numbers.Number):
            return self == PhaseSymbol.constant(other, self.modes)
        return NotImplemented

    def __hash__(self):
        return hash((self.modes, frozenset(self._terms.items())))

    @property
    def degree(self):
        """Total degree; -1 for the zero symbol."""
        return max((sum(m) + sum(n) for m, n in self._terms), default=-1)

    def degree_in(self, mode, conjugated=False):
        idx = 0 if conjugated else 1
        return max((key[idx][mode] for key in self._terms), default=-1)

    @property
    def is_exact(self):
        return all(isinstance(c, (int, Fraction)) for c in self._terms.values())

    def max_abs_coeff(self):
        return max((abs(c) for c in self._terms.values()), default=0.0)

    # arithmetic

    def _coerce(self, other):
        if isinstance(other, PhaseSymbol):
            if other.modes != self.modes:
                raise ModeMismatch(f"{self.modes} vs {other.modes} modes")
            return other
        if isinstance(other, numbers.Number):
            return PhaseSymbol.constant(other, self.modes)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for k, c in other._terms.items():
            v = out.get(k, 0) + c
            if _is_zero(v):
                out.pop(k, None)
            else:
                out[k] = v
        return PhaseSymbol._raw(self.modes, out)

    __radd__ = __add__

    def __neg__(self):
        return PhaseSymbol._raw(self.modes, {k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, factor):
        if _is_zero(factor):
            return PhaseSymbol._raw(self.modes, {})
        out = {}
        for k, c in self._terms.items():
            v = c * factor
            if not _is_zero(v):
                out[k] = v
        return PhaseSymbol._raw(self.modes, out)

    def __mul__(self, other):
        if isinstance(other, numbers.Number):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = {}
        for (m1, n1), c1 in self._terms.items():
            for (m2, n2), c2 in other._terms.items():
                key = (
                    tuple(a + b for a, b in zip(m1, m2)),
                    tuple(a + b for a, b in zip(n1, n2)),
                )
                out[key] = out.get(key, 0) + c1 * c2
        return PhaseSymbol._raw(self.modes, {k: c for k, c in out.items() if not _is_zero(c)})

    def __rmul__(self, other):
        if isinstance(other, numbers.Number):
            return self.scale(other)
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, int):
            other = Fraction(1, other) if self.is_exact else 1.0 / other
            return self.scale(other)
        if isinstance(other, numbers.Number):
            return self.scale(1 / other)
        return NotImplemented

    def __pow__(self, power):
        if not isinstance(power, int) or power < 0:
            raise ValueError("only nonnegative integer powers are supported")
        out = PhaseSymbol.constant(1, self.modes)
        base = self
        while power:
            if power & 1:
                out = out * base
            power >>= 1
            if power:
                base = base * base
        return out

    def conj(self):
        """Complex conjugate symbol: the symbol of the adjoint operator."""
        out = {}
        for (m, n), c in self._terms.items():
            out[(n, m)] = c.conjugate() if hasattr(c, "conjugate") else c
        return PhaseSymbol._raw(self.modes, out)

    def derive(self, mode, conjugated=False, order=1):
        """Formal ``order``-th partial derivative in z_mode (or zbar_mode)."""
        if not 0 <= mode < self.modes:
            raise IndexError(f"mode {mode} out of range for {self.modes} modes")
        if order < 0:
            raise ValueError("derivative order must be nonnegative")
        if order == 0:
            return self
        idx = 0 if conjugated else 1
        out = {}
        for key, c in self._terms.items():
            e = key[idx][mode]
            if e < order:
                continue
            vec = list(key[idx])
            vec[mode] = e - order
            new = (tuple(vec), key[1]) if idx == 0 else (key[0], tuple(vec))
            out[new] = c * _falling(e, order)
        return PhaseSymbol._raw(self.modes, out)

    def map_coeffs(self, fn):
        return PhaseSymbol(self.modes, {k: fn(c) for k, c in self._terms.items()})

    def to_complex(self):
        return self.map_coeffs(complex)

    def chop(self, atol=1e-14):
        """Drop coefficients with modulus below ``atol``."""
        return PhaseSymbol(
            self.modes, {k: c for k, c in self._terms.items() if abs(c) > atol}
        )

    def allclose(self, other, atol=1e-12):
        diff = self - other
        return diff.max_abs_coeff() <= atol

    # evaluation

    def __call__(self, z):
        return self.evaluate(z)

    def evaluate(self, z):
        """Evaluate with zbar = conj(z).

        ``z`` is a complex vector of length ``modes`` (one point) or an array
        of shape ``(npoints, modes)``.  For a single mode a 1-d array is read
        as a list of points.
        """
        pts = np.asarray(z, dtype=complex)
        single = False
        if pts.ndim == 0:
            pts = pts.reshape(1, 1)
            single = True
        elif pts.ndim == 1:
            if self.modes == 1:
                pts = pts.reshape(-1, 1)
            else:
                if pts.shape[0] != self.modes:
                    raise ModeMismatch(f"point has {pts.shape[0]} entries, symbol has {self.modes} modes")
                pts = pts.reshape(1, -1)
                single = True
        if pts.shape[1] != self.modes:
            raise ModeMismatch(f"points have {pts.shape[1]} modes, symbol has {self.modes}")
        if not self._terms:
            out = np.zeros(pts.shape[0], dtype=complex)
            return complex(out[0]) if single else out
        dmax = max(max(max(m), max(n)) for m, n in self._terms)
        zp = np.ones((self.modes, dmax + 1, pts.shape[0]), dtype=complex)
        zbp = np.ones_like(zp)
        for e in range(1, dmax + 1):
            zp[:, e] = zp[:, e - 1] * pts.T
            zbp[:, e] = zbp[:, e - 1] * pts.T.conj()
        out = np.zeros(pts.shape[0], dtype=complex)
        rng = range(self.modes)
        for (m, n), c in self._terms.items():
            mono = complex(c)
            for i in rng:
                if m[i]:
                    mono = mono * zbp[i, m[i]]
                if n[i]:
                    mono = mono * zp[i, n[i]]
            out += mono
        return complex(out[0]) if single else out

    # serialization

    def to_dict(self):
        rows = []
        for (m, n), c in self.items():
            c = complex(c)
            rows.append({"m": list(m), "n": list(n), "re": c.real, "im": c.imag})
        return {"modes": self.modes, "terms": rows}

    def to_json(self, indent=None):
        return json.dumps(self.to_dict(), indent=indent)

    @classmethod
    def from_dict(cls, data, exact=False):
        try:
            modes = int(data["modes"])
            rows = data["terms"]
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"symbol object needs 'modes' and 'terms': {exc}") from None
        terms = {}
        for i, row in enumerate(rows):
            try:
                m, n = tuple(row["m"]), tuple(row["n"])
                re, im = row.get("re", 0), row.get("im", 0)
            except (KeyError, TypeError, AttributeError) as exc:
                raise ParseError(f"bad term: {exc!r}", position=f"terms[{i}]") from None
            if len(m) != modes or len(n) != modes:
                raise ParseError(
                    f"exponent vectors must have length {modes}", position=f"terms[{i}]"
                )
            if exact:
                if im not in (0, "0"):
                    raise ParseError("exact mode needs real coefficients", position=f"terms[{i}]")
                c = Fraction(str(re))
            else:
                c = complex(float(re), float(im))
            terms[(m, n)] = terms.get((m, n), 0) + c
        return cls(modes, terms)

    @classmethod
    def from_json(cls, text, exact=False):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(exc.msg, position=f"line {exc.lineno} column {exc.colno}") from None
        return cls.from_dict(data, exact=exact)

    # display

    def _var(self, i, conjugated):
        base = "z̄" if conjugated else "z"
        return base if self.modes == 1 else base + str(i + 1).translate(_SUBSCRIPTS)

    def _mono_str(self, m, n):
        parts = []
        for i in range(self.modes):
            for e, conj in ((m[i], True), (n[i], False)):
                if e:
                    v = self._var(i, conj)
                    parts.append(v if e == 1 else v + str(e).translate(_SUPERSCRIPTS))
        return "".join(parts)

    def __str__(self):
        if not self._terms:
            return "0"
        pieces = []
        for (m, n), c in self.items():
            mono = self._mono_str(m, n)
            if mono and c == 1:
                pieces.append(mono)
            elif mono and c == -1:
                pieces.append("-" + mono)
            else:
                pieces.append(f"{_fmt_coeff(c)}{mono}")
        return " + ".join(pieces).replace("+ -", "- ")

    def __repr__(self):
        return f"PhaseSymbol({self})"


def _order_key(key):
    m, n = key
    return (sum(m) + sum(n), m, n)


def _fmt_coeff(c):
    if isinstance(c, complex):
        if c.imag == 0:
            c = c.real
        else:
            return f"({c.real:g}{c.imag:+g}i)"
    if isinstance(c, float) and c.is_integer():
        return str(int(c))
    if isinstance(c, Fraction) and c.denominator != 1:
        return f"({c})"
    return f"{c:g}" if isinstance(c, float) else str(c)


# functional aliases


def generator(mode, conjugated=False, modes=1):
    return PhaseSymbol.generator(mode, conjugated, modes)


def constant(value, modes=1):
    return PhaseSymbol.constant(value, modes)


def add(f, g):
    return f + g


def scale(f, factor):
    return f.scale(factor)


def pointwise_mul(f, g):
    return f * g


def derive(f, mode, conjugated=False, order=1):
    return f.derive(mode, conjugated, order)


def evaluate(f, z):
    return f.evaluate(z)


def variables(modes):
    """Return ``(z, zbar)``: lists of the degree-one generators."""
    z = [PhaseSymbol.generator(i, False, modes) for i in range(modes)]
    zb = [PhaseSymbol.generator(i, True, modes) for i in range(modes)]
    return z, zb


def random_symbol(rng, modes=1, degree=3, nterms=5, exact=False, denominator=8):
    """Random polynomial for property tests.

    Exact symbols get small rational coefficients; otherwise complex normal
    coefficients are drawn.
    """
    terms = {}
    for _ in range(nterms):
        tot = int(rng.integers(0, degree + 1))
        # split tot across 2*modes exponents
        cuts = np.sort(rng.integers(0, tot + 1, size=2 * modes - 1))
        parts = np.diff(np.concatenate(([0], cuts, [tot])))
        m, n = tuple(int(v) for v in parts[:modes]), tuple(int(v) for v in parts[modes:])
        if exact:
            c = Fraction(int(rng.integers(-denominator, denominator + 1)), int(rng.integers(1, denominator + 1)))
        else:
            c = complex(rng.normal(), rng.normal())
        terms[(m, n)] = terms.get((m, n), 0) + c
    return PhaseSymbol(modes, terms)

