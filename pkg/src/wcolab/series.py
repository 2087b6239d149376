"""Truncated complex power series.

Every analytic symbol handled by the package (weights, self-maps, test
functions, reproducing kernels) is carried as a :class:`TruncatedSeries`:
the Taylor coefficients ``c_0..c_N`` in double precision plus an optional
``tail_hint`` bounding the discarded coefficient mass ``sum_{n>N} |c_n|``.

``tail_hint`` conventions:

* ``None``  -- the coefficients *are* the function (an exact polynomial);
* ``0.0``   -- same, stated explicitly;
* finite    -- a rigorous or bookkeeping bound on the discarded mass;
* ``inf``   -- the discarded mass is unbounded (e.g. a series that
  diverges on the unit circle).

All operations are pure; coefficient arrays are read-only.
"""

from __future__ import annotations

import math
from typing import Sequence, Union

import numpy as np

__all__ = [
    'DEFAULT_ORDER',
    'TruncatedSeries',
    'add',
    'mul',
    'power',
    'evaluate',
    'derivative',
    'binomial_series',
    'log_weight_series',
    'geometric_series',
    'compose',
    'inflate',
]

DEFAULT_ORDER = 256

Number = Union[int, float, complex]


def _sum_tails(*tails):
    """Add tail bounds, where ``None`` counts as zero."""
    total = 0.0
    for t in tails:
        if t is not None:
            total += t
    return total


class TruncatedSeries:
    """Complex Taylor coefficients ``c_0..c_N`` of a function on the disk.

    Parameters
    ----------
    coeffs : sequence of complex
        Coefficients in ascending order, ``c_0`` first. Must be non-empty
        and finite.
    tail_hint : float or None
        Upper bound on ``sum_{n>N} |c_n|`` of the represented function.
        ``None`` means the series is exact (a polynomial).
    """

    __slots__ = ('_coeffs', '_tail_hint')

    def __init__(self, coeffs: Sequence[Number], tail_hint: float | None = None):
        arr = np.array(coeffs, dtype=complex).ravel()
        if arr.size == 0:
            raise ValueError('a truncated series needs at least one coefficient')
        if not np.all(np.isfinite(arr)):
            raise ValueError('series coefficients must be finite')
        if tail_hint is not None:
            tail_hint = float(tail_hint)
            if math.isnan(tail_hint) or tail_hint < 0:
                raise ValueError('tail_hint must be non-negative, got %r' % tail_hint)
        arr.setflags(write=False)
        self._coeffs = arr
        self._tail_hint = tail_hint

    # -- constructors -----------------------------------------------------

    @classmethod
    def zero(cls, order: int = 0) -> 'TruncatedSeries':
        return cls(np.zeros(order + 1, dtype=complex))

    @classmethod
    def constant(cls, value: Number, order: int = 0) -> 'TruncatedSeries':
        c = np.zeros(order + 1, dtype=complex)
        c[0] = value
        return cls(c)

    @classmethod
    def monomial(cls, n: int, value: Number = 1.0, order: int | None = None) -> 'TruncatedSeries':
        """``value * z**n``, padded with zeros up to ``order``."""
        if order is None:
            order = n
        c = np.zeros(max(order, n) + 1, dtype=complex)
        c[n] = value
        return cls(c)

    # -- accessors ----------------------------------------------------------

    @property
    def coeffs(self) -> np.ndarray:
        return self._coeffs

    @property
    def order(self) -> int:
        return self._coeffs.size - 1

    @property
    def tail_hint(self) -> float | None:
        return self._tail_hint

    @property
    def is_polynomial(self) -> bool:
        """True when the coefficients represent the function exactly."""
        return self._tail_hint is None or self._tail_hint == 0.0

    @property
    def degree(self) -> int:
        """Index of the last nonzero coefficient (0 for the zero series)."""
        nz = np.flatnonzero(self._coeffs)
        return int(nz[-1]) if nz.size else 0

    def coeff(self, n: int) -> complex:
        """``c_n``, or 0 beyond the stored order."""
        if n < 0:
            raise IndexError('negative coefficient index %d' % n)
        return complex(self._coeffs[n]) if n <= self.order else 0j

    def resized(self, order: int) -> 'TruncatedSeries':
        """Pad with zeros or truncate to ``order``.

        Truncation folds the dropped coefficient mass into ``tail_hint``.
        """
        if order < 0:
            raise ValueError('order must be non-negative')
        n = self.order
        if order >= n:
            c = np.zeros(order + 1, dtype=complex)
            c[:n + 1] = self._coeffs
            return TruncatedSeries(c, self._tail_hint)
        dropped = float(np.sum(np.abs(self._coeffs[order + 1:])))
        tail = self._tail_hint
        if dropped > 0 or (tail is not None and tail > 0):
            tail = _sum_tails(tail, dropped)
        return TruncatedSeries(self._coeffs[:order + 1], tail)

    def __repr__(self):
        shown = ', '.join('%.6g%+.6gj' % (c.real, c.imag) for c in self._coeffs[:6])
        more = ', ...' if self.order >= 6 else ''
        return 'TruncatedSeries([%s%s], order=%d, tail_hint=%r)' % (
            shown, more, self.order, self._tail_hint)

    # -- operator sugar -----------------------------------------------------

    def __call__(self, z):
        return evaluate(self, z)

    def __add__(self, other):
        if not isinstance(other, TruncatedSeries):
            other = TruncatedSeries.constant(other)
        return add(self, other)

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries(-self._coeffs, self._tail_hint)

    def __sub__(self, other):
        if not isinstance(other, TruncatedSeries):
            other = TruncatedSeries.constant(other)
        return add(self, -other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, TruncatedSeries):
            return mul(self, other, max(self.order, other.order))
        other = complex(other)
        tail = None if self._tail_hint is None else self._tail_hint * abs(other)
        return TruncatedSeries(self._coeffs * other, tail)

    __rmul__ = __mul__


def add(f: TruncatedSeries, g: TruncatedSeries) -> TruncatedSeries:
    """Coefficient-wise sum; the result has the larger of the two orders."""
    n = max(f.order, g.order)
    c = np.zeros(n + 1, dtype=complex)
    c[:f.order + 1] += f.coeffs
    c[:g.order + 1] += g.coeffs
    if f.tail_hint is None and g.tail_hint is None:
        tail = None
    else:
        tail = _sum_tails(f.tail_hint, g.tail_hint)
    return TruncatedSeries(c, tail)


def mul(f: TruncatedSeries, g: TruncatedSeries, N: int) -> TruncatedSeries:
    """Cauchy product truncated at order ``N``.

    ``c_n = sum_{k<=n} f_k g_{n-k}`` using direct (not FFT) convolution, so
    structural zeros stay exactly zero.
    """
    if N < 0:
        raise ValueError('truncation order must be non-negative')
    full = np.convolve(f.coeffs, g.coeffs)
    c = np.zeros(N + 1, dtype=complex)
    m = min(N + 1, full.size)
    c[:m] = full[:m]

    if f.tail_hint is None and g.tail_hint is None and full.size <= N + 1:
        return TruncatedSeries(c)
    dropped = 0.0
    if full.size > N + 1:
        abs_full = np.convolve(np.abs(f.coeffs), np.abs(g.coeffs))
        dropped = float(np.sum(abs_full[N + 1:]))
    tf = _sum_tails(f.tail_hint)
    tg = _sum_tails(g.tail_hint)
    af = float(np.sum(np.abs(f.coeffs)))
    ag = float(np.sum(np.abs(g.coeffs)))
    cross = 0.0
    if tf:
        cross += tf * (ag + tg)
    if tg:
        cross += tg * af
    return TruncatedSeries(c, dropped + cross)


def power(f: TruncatedSeries, n: int, N: int) -> TruncatedSeries:
    """``f**n`` by repeated truncated multiplication; ``f**0 = 1``."""
    if n < 0:
        raise ValueError('exponent must be non-negative, got %d' % n)
    result = TruncatedSeries.constant(1.0, N)
    for _ in range(n):
        result = mul(result, f, N)
    return result


def evaluate(f: TruncatedSeries, z):
    """Horner evaluation of the stored partial sum at ``z`` (scalar or array)."""
    z = np.asarray(z, dtype=complex)
    acc = np.zeros_like(z)
    for c in f.coeffs[::-1]:
        acc = acc * z + c
    if acc.ndim == 0:
        return complex(acc)
    return acc


def derivative(f: TruncatedSeries) -> TruncatedSeries:
    """Term-wise derivative, order ``N-1``; the zero series when ``N = 0``."""
    if f.order == 0:
        return TruncatedSeries.zero(0)
    n = np.arange(1, f.order + 1)
    tail = f.tail_hint
    if tail is not None and tail > 0:
        # sum |n c_n| over the tail is not controlled by sum |c_n|
        tail = math.inf
    return TruncatedSeries(n * f.coeffs[1:], tail)


def binomial_series(alpha: float, N: int) -> TruncatedSeries:
    """Coefficients of ``(1 - z)**alpha`` (principal branch) up to ``z**N``.

    Uses ``c_{n+1} = c_n (n - alpha) / (n + 1)``.
    """
    if N < 0:
        raise ValueError('truncation order must be non-negative')
    alpha = float(alpha)
    c = np.empty(N + 1)
    c[0] = 1.0
    for n in range(N):
        c[n + 1] = c[n] * (n - alpha) / (n + 1)

    if alpha >= 0 and alpha == int(alpha):
        tail = 0.0 if alpha <= N else float('nan')
    elif alpha > 0:
        tail = float('nan')
    else:
        tail = math.inf
    if math.isnan(tail):
        if N >= math.floor(alpha):
            # all coefficients past alpha share one sign and sum(c) = 0
            tail = abs(float(math.fsum(c)))
        else:
            tail = math.inf
    return TruncatedSeries(c, tail)


def log_weight_series(N: int) -> TruncatedSeries:
    """``sum_{k>=2} z**k / (k log k)`` truncated at ``N``.

    The function lies in the Dirichlet space but is unbounded on the disk,
    so the discarded coefficient mass is infinite.
    """
    if N < 2:
        raise ValueError('log-weight series needs N >= 2')
    k = np.arange(2, N + 1, dtype=float)
    c = np.zeros(N + 1)
    c[2:] = 1.0 / (k * np.log(k))
    return TruncatedSeries(c, math.inf)


def geometric_series(q: Number, N: int, start: int = 0) -> TruncatedSeries:
    """``sum_{k>=start} q**k z**k`` truncated at ``N`` (requires ``|q| < 1``)."""
    q = complex(q)
    if abs(q) >= 1:
        raise ValueError('geometric ratio must satisfy |q| < 1')
    c = np.zeros(N + 1, dtype=complex)
    k = np.arange(start, N + 1)
    c[start:] = q ** k
    tail = abs(q) ** (N + 1) / (1 - abs(q)) if N + 1 >= start else 0.0
    return TruncatedSeries(c, tail)


def compose(f: TruncatedSeries, phi: TruncatedSeries, rho: float, N: int) -> TruncatedSeries:
    """``f o phi`` truncated at ``N``.

    ``rho`` is the caller's bound on ``sup |phi|`` over the disk; it controls
    the contribution of coefficients of ``f`` beyond its stored order.
    """
    rho = float(rho)
    if not 0 <= rho < 1:
        raise ValueError('compose requires 0 <= rho < 1, got %r' % rho)
    deg = f.order
    acc = np.zeros(N + 1, dtype=complex)
    tail = 0.0
    exact = f.tail_hint is None and phi.tail_hint is None
    p = TruncatedSeries.constant(1.0, N)
    for k in range(deg + 1):
        if k:
            p = mul(p, phi, N)
        fk = f.coeffs[k]
        if fk != 0:
            acc += fk * p.coeffs
            if p.tail_hint:
                tail += abs(fk) * p.tail_hint
    if f.tail_hint:
        tail += f.tail_hint * rho ** (deg + 1)
    if exact and tail == 0.0:
        return TruncatedSeries(acc)
    return TruncatedSeries(acc, tail)


def inflate(g: TruncatedSeries, r: int, N: int) -> TruncatedSeries:
    """``g(z**r)`` truncated at ``N``: coefficient ``g_k`` moves to index ``k r``."""
    if r < 1:
        raise ValueError('inflation factor must be >= 1')
    c = np.zeros(N + 1, dtype=complex)
    k = np.arange(g.order + 1)
    keep = k * r <= N
    c[k[keep] * r] = g.coeffs[keep]
    dropped = float(np.sum(np.abs(g.coeffs[~keep])))
    if g.tail_hint is None and dropped == 0.0:
        return TruncatedSeries(c)
    return TruncatedSeries(c, _sum_tails(g.tail_hint, dropped))
