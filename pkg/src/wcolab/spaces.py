"""Coefficient-form geometry of the Dirichlet, Hardy and Bergman spaces.

Norms are diagonal in the monomial basis, ``||z^n||^2 = weight(n)``:

=========  =============
Dirichlet  ``n + 1``
Hardy      ``1``
Bergman    ``1 / (n + 1)`` (area measure normalized by pi)
=========  =============
"""

from __future__ import annotations

import enum
import math

import numpy as np

from .series import TruncatedSeries

__all__ = [
    'SpaceWeight',
    'DIRICHLET',
    'HARDY',
    'BERGMAN',
    'inner_product',
    'norm_sq',
    'dirichlet_integral',
    'alt_dirichlet_norm_sq',
    'kernel_series',
    'kernel_norm_sq',
    'kernel_tail_bound',
    'weighted_bergman_quantity',
    'bergman_moment',
    'e_coordinates',
    'from_e_coordinates',
]


class SpaceWeight(enum.Enum):
    DIRICHLET = 'Dirichlet'
    HARDY = 'Hardy'
    BERGMAN = 'Bergman'

    def weights(self, order: int) -> np.ndarray:
        """``weight(n)`` for ``n = 0..order``."""
        n = np.arange(order + 1, dtype=float)
        if self is SpaceWeight.DIRICHLET:
            return n + 1
        if self is SpaceWeight.HARDY:
            return np.ones_like(n)
        return 1.0 / (n + 1)


DIRICHLET = SpaceWeight.DIRICHLET
HARDY = SpaceWeight.HARDY
BERGMAN = SpaceWeight.BERGMAN


def inner_product(f: TruncatedSeries, g: TruncatedSeries,
                  w: SpaceWeight = DIRICHLET) -> complex:
    """``sum_n weight(n) f_n conj(g_n)`` over the shared indices."""
    m = min(f.order, g.order)
    terms = w.weights(m) * f.coeffs[:m + 1] * np.conj(g.coeffs[:m + 1])
    return complex(np.sum(terms))


def norm_sq(f: TruncatedSeries, w: SpaceWeight = DIRICHLET) -> float:
    return float(np.sum(w.weights(f.order) * np.abs(f.coeffs) ** 2))


def dirichlet_integral(f: TruncatedSeries) -> float:
    """``D(f) = sum_{k>=1} k |c_k|^2``."""
    k = np.arange(f.order + 1, dtype=float)
    return float(np.sum(k * np.abs(f.coeffs) ** 2))


def alt_dirichlet_norm_sq(f: TruncatedSeries) -> float:
    """The equivalent norm ``|f(0)|^2 + D(f)``; read-only, never used for geometry."""
    return abs(f.coeffs[0]) ** 2 + dirichlet_integral(f)


def _check_in_disk(w):
    if abs(w) >= 1:
        raise ValueError('point must lie in the open unit disk, got |w| = %g' % abs(w))


def kernel_series(w: complex, N: int) -> TruncatedSeries:
    """Reproducing kernel ``k_w`` of the Dirichlet space up to ``z**N``.

    ``k_w(z) = log(1 / (1 - z conj(w))) / (z conj(w))`` has coefficients
    ``conj(w)**n / (n + 1)``, so that ``<f, k_w>_D = f(w)``.
    """
    w = complex(w)
    _check_in_disk(w)
    n = np.arange(N + 1)
    c = np.conj(w) ** n / (n + 1)
    if w == 0:
        return TruncatedSeries(c)
    return TruncatedSeries(c, kernel_tail_bound(abs(w), N))


def kernel_tail_bound(rad: float, N: int) -> float:
    """Bound on ``sum_{n>N} rad**n / (n + 1)``."""
    return rad ** (N + 1) / ((N + 2) * (1 - rad))


def kernel_norm_sq(w: complex) -> float:
    """``||k_w||_D^2 = log(1 / (1 - |w|^2)) / |w|^2``, and 1 at ``w = 0``."""
    w = complex(w)
    _check_in_disk(w)
    t = abs(w) ** 2
    if t == 0:
        return 1.0
    return -math.log1p(-t) / t


def weighted_bergman_quantity(f: TruncatedSeries) -> float:
    """``|f(0)|^2 + (1/pi) int |f'|^2 (1 - |z|^2)^2 dA`` in coefficient form.

    Equals ``|c_0|^2 + sum_{n>=1} 2 n |c_n|^2 / ((n + 1)(n + 2))``.
    """
    n = np.arange(1, f.order + 1, dtype=float)
    a = np.abs(f.coeffs) ** 2
    return float(a[0] + np.sum(2 * n * a[1:] / ((n + 1) * (n + 2))))


def bergman_moment(k: int) -> float:
    """``(1/pi) int_D |z|^{2k} (1 - |z|^2)^2 dA = 2 / ((k+1)(k+2)(k+3))``."""
    return 2.0 / ((k + 1) * (k + 2) * (k + 3))


def e_coordinates(f: TruncatedSeries, N: int | None = None) -> np.ndarray:
    """Coordinates of ``f`` in the orthonormal basis ``e_n = z^n / sqrt(n+1)``.

    ``x_n = c_n sqrt(n + 1)``; the Euclidean norm of ``x`` equals ``||f||_D``.
    """
    if N is None:
        N = f.order
    c = f.resized(N).coeffs if N != f.order else f.coeffs
    return c * np.sqrt(np.arange(N + 1) + 1.0)


def from_e_coordinates(x, tail_hint=None) -> TruncatedSeries:
    x = np.asarray(x, dtype=complex)
    return TruncatedSeries(x / np.sqrt(np.arange(x.size) + 1.0), tail_hint)

