"""Special functions used by the coherent-state constructions.

Generalized Laguerre polynomials by three-term recurrence, the confluent
hypergeometric limit function 0F1 and the modified Bessel function I_nu by
power series, and log-Gamma.  Everything here is real-argument only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import DomainError, NonConvergence

__all__ = [
    "SeriesConfig",
    "LaguerreSpec",
    "laguerre",
    "hyp0f1",
    "bessel_i",
    "log_gamma",
]


@dataclass(frozen=True)
class SeriesConfig:
    rel_tol: float = 1e-14
    max_terms: int = 500

    def __post_init__(self):
        if not self.rel_tol > 0:
            raise ValueError(f"rel_tol must be positive, got {self.rel_tol}")
        if self.max_terms < 1:
            raise ValueError(f"max_terms must be >= 1, got {self.max_terms}")


DEFAULT_SERIES = SeriesConfig()


class LaguerreSpec(NamedTuple):
    n: int
    alpha: float
    x: float


def laguerre(n, alpha, x):
    """Generalized Laguerre polynomial L_n^alpha(x).

    Uses the upward recurrence

        (m+1) L_{m+1} = (2m+1+alpha-x) L_m - (m+alpha) L_{m-1}

    starting from L_0 = 1 and L_1 = 1 + alpha - x.  ``x`` may be a scalar or
    an array; the result has the same shape.

    A :class:`LaguerreSpec` can be unpacked straight into this function:
    ``laguerre(*spec)``.
    """
    if n < 0 or int(n) != n:
        raise DomainError(f"Laguerre degree must be a nonnegative integer, got {n}")
    n = int(n)
    x = np.asarray(x, dtype=float)
    prev = np.ones_like(x)
    if n == 0:
        return prev if prev.ndim else float(prev)
    cur = 1.0 + alpha - x
    for m in range(1, n):
        prev, cur = cur, ((2 * m + 1 + alpha - x) * cur - (m + alpha) * prev) / (m + 1)
    return cur if cur.ndim else float(cur)


def _check_b(b):
    if b <= 0 and float(b).is_integer():
        raise DomainError(f"0F1 parameter b must not be a nonpositive integer, got {b}")


def hyp0f1(b, x, cfg=DEFAULT_SERIES):
    """Confluent hypergeometric limit function 0F1(; b; x) for real ``x``.

    Summed term by term, t_{m+1} = t_m * x / ((b+m)(m+1)), until a term is
    below ``cfg.rel_tol`` relative to the partial sum and the terms are
    already decreasing.
    """
    _check_b(b)
    x = float(x)
    total = 1.0
    term = 1.0
    for m in range(cfg.max_terms):
        term *= x / ((b + m) * (m + 1))
        total += term
        decreasing = abs(x) < abs((b + m + 1) * (m + 2))
        if decreasing and abs(term) <= cfg.rel_tol * abs(total):
            return total
    raise NonConvergence(
        f"0F1({b}; {x}) not converged after {cfg.max_terms} terms (last term {term:.3e})"
    )


def bessel_i(nu, y, cfg=DEFAULT_SERIES):
    """Modified Bessel function of the first kind I_nu(y), y >= 0.

    I_nu(y) = (y/2)^nu / Gamma(nu+1) * 0F1(; nu+1; y^2/4)
    """
    if y < 0:
        raise DomainError(f"bessel_i needs y >= 0, got {y}")
    if nu < 0 and float(nu).is_integer():
        nu = -nu  # I_{-n} = I_n for integer order
    if y == 0:
        return 1.0 if nu == 0 else 0.0
    series = hyp0f1(nu + 1.0, 0.25 * y * y, cfg)
    if nu + 1 > 0:
        prefactor = math.exp(nu * math.log(0.5 * y) - log_gamma(nu + 1.0))
    else:
        prefactor = (0.5 * y) ** nu / math.gamma(nu + 1.0)
    return prefactor * series


def log_gamma(x):
    """ln Gamma(x) for x > 0."""
    if not x > 0:
        raise DomainError(f"log_gamma needs x > 0, got {x}")
    return math.lgamma(x)
