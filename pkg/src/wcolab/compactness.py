"""Compactness diagnostics for weighted composition operators.

Nothing here proves compactness. The module offers

* the indicator ``tilde_f(z) = ||C^* K_z||`` (normalized kernels), whose
  vanishing as ``|z| -> 1`` is necessary for compactness;
* surrogate checkers for two sets of sufficient conditions;
* singular values of truncations, whose decay mirrors compactness.

Symbols are :class:`~wcolab.series.TruncatedSeries` or, where only point
values are needed, plain callables (closed forms), which avoids the slow
convergence of truncated series near the unit circle.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable, Sequence, Union

import numpy as np
from scipy.spatial import cKDTree

from .operators import wco_matrix
from .series import TruncatedSeries, derivative, evaluate
from .spaces import norm_sq

__all__ = [
    'ZERO_CUT',
    'Status',
    'Check',
    'HypothesisReport',
    'RadialProfile',
    'SupNormEstimate',
    'DecayReport',
    'log_kernel_ratio',
    'tilde_f',
    'radial_profile',
    'geometric_radii',
    'sup_norm_estimate',
    'check_strict_self_map',
    'check_bounded_derivatives',
    'check_th1',
    'check_th3',
    'singular_value_decay',
]

ZERO_CUT = 1e-13

Symbol = Union[TruncatedSeries, Callable]


class Status(str, enum.Enum):
    PASS = 'pass'
    FAIL = 'fail'
    INCONCLUSIVE = 'inconclusive'


@dataclass(frozen=True)
class Check:
    name: str
    status: Status
    evidence: float
    note: str = ''

    def to_dict(self):
        return {'name': self.name, 'status': self.status.value,
                'evidence': _jsonable(self.evidence), 'note': self.note}


@dataclass(frozen=True)
class HypothesisReport:
    """Gating ``checks`` decide ``overall``; ``info`` checks are reported only."""
    theorem: str
    checks: tuple
    info: tuple = ()

    @property
    def overall(self) -> Status:
        return _combine(c.status for c in self.checks)

    def check(self, name: str) -> Check:
        for c in self.checks + self.info:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_dict(self):
        return {'theorem': self.theorem, 'overall': self.overall.value,
                'checks': [c.to_dict() for c in self.checks + self.info]}


def _combine(statuses) -> Status:
    statuses = list(statuses)
    if any(s is Status.FAIL for s in statuses):
        return Status.FAIL
    if any(s is Status.INCONCLUSIVE for s in statuses):
        return Status.INCONCLUSIVE
    return Status.PASS


def _jsonable(x):
    x = float(x)
    return x if math.isfinite(x) else str(x)


def _evaluator(sym: Symbol):
    if isinstance(sym, TruncatedSeries):
        return lambda z: evaluate(sym, z)
    if callable(sym):
        return sym
    raise TypeError('symbol must be a TruncatedSeries or a callable, got %r' % type(sym))


def _tail_at(sym: Symbol, radius: float) -> float:
    """Bound on the truncation error of ``sym`` on the circle ``|z| = radius``."""
    if not isinstance(sym, TruncatedSeries) or sym.is_polynomial:
        return 0.0
    return sym.tail_hint * radius ** (sym.order + 1)


def log_kernel_ratio(t: float) -> float:
    """``log(1 / (1 - t^2))``, accurate for ``t`` near 0 and near 1."""
    if t > 0.5:
        return -math.log((1 - t) * (1 + t))
    return -math.log1p(-t * t)


def _scaled_log(t: float) -> float:
    """``log(1 / (1 - t^2)) / t^2``, equal to 1 at ``t = 0``; immune to underflow of ``t^2``."""
    t2 = t * t
    if t2 == 0.0:
        return 1.0
    return log_kernel_ratio(t) / t2


# -- the indicator -------------------------------------------------------------

def tilde_f(psi: Symbol, phi: Symbol, z: complex) -> float:
    """``||C_{psi,phi}^* K_z||_D`` for the normalized kernel ``K_z``.

    All four cases reduce to ``|psi(z)| * sqrt(g(|phi(z)|) / g(|z|))`` with
    ``g(t) = log(1/(1-t^2)) / t^2`` and ``g(0) = 1``; the branches below keep
    the exact case values.
    """
    z = complex(z)
    az = abs(z)
    if az >= 1:
        raise ValueError('z must lie in the open unit disk, got |z| = %r' % az)
    pz = complex(_evaluator(psi)(z))
    fz = complex(_evaluator(phi)(z))
    af = abs(fz)
    if af >= 1:
        raise ValueError('|phi(z)| = %r >= 1: phi does not map z into the disk' % af)
    apsi = abs(pz)
    if af <= ZERO_CUT:
        if z == 0:
            return apsi
        return apsi / math.sqrt(_scaled_log(az))
    if z == 0:
        return apsi * math.sqrt(_scaled_log(af))
    return apsi * math.sqrt(_scaled_log(af) / _scaled_log(az))


@dataclass(frozen=True)
class RadialProfile:
    """``tilde_f(r * direction)`` over increasing radii.

    Samples whose evaluation failed are listed in ``invalid`` as
    ``(radius, reason)`` and left out of ``radii``/``values``.
    ``conclusive`` is False when a truncated symbol's tail was not
    negligible at the largest radius.
    """
    direction: complex
    radii: np.ndarray
    values: np.ndarray
    invalid: tuple = ()
    conclusive: bool = True

    def is_increasing(self) -> bool:
        return bool(np.all(np.diff(self.values) > 0))

    def is_decreasing(self) -> bool:
        return bool(np.all(np.diff(self.values) < 0))


def geometric_radii(j_max: int = 8, j_min: int = 1) -> np.ndarray:
    """``r_j = 1 - 10**-j`` for ``j = j_min..j_max``."""
    return 1 - 10.0 ** -np.arange(j_min, j_max + 1)


def radial_profile(psi: Symbol, phi: Symbol, direction: complex = 1.0,
                   radii: Sequence[float] | None = None,
                   tail_tol: float = 1e-9) -> RadialProfile:
    if radii is None:
        radii = geometric_radii()
    radii = np.asarray(radii, dtype=float)
    if np.any(radii >= 1) or np.any(radii < 0):
        raise ValueError('radii must lie in [0, 1)')
    if np.any(np.diff(radii) <= 0):
        raise ValueError('radii must be strictly increasing')
    direction = complex(direction)
    direction = direction / abs(direction)
    rmax = float(radii[-1]) if radii.size else 0.0
    conclusive = max(_tail_at(psi, rmax), _tail_at(phi, rmax)) <= tail_tol
    good_r, values, invalid = [], [], []
    for r in radii:
        try:
            v = tilde_f(psi, phi, r * direction)
        except ValueError as exc:
            invalid.append((float(r), str(exc)))
            continue
        good_r.append(r)
        values.append(v)
    return RadialProfile(direction, np.array(good_r), np.array(values), tuple(invalid), conclusive)


# -- sup norms -------------------------------------------------------------------

@dataclass(frozen=True)
class SupNormEstimate:
    """``max |f|`` on a ring near the unit circle; an estimate, never a certificate.

    ``tail`` is the truncation bound already added to ``value``.
    """
    value: float
    radius: float
    tail: float = 0.0
    note: str = ''

    def __float__(self):
        return self.value


def _negligible_decay(f: TruncatedSeries, tol: float) -> bool:
    c = np.abs(f.coeffs)
    top = float(np.max(c)) if c.size else 0.0
    return top == 0.0 or float(np.max(c[-8:])) <= tol * top


def sup_norm_estimate(phi: Symbol, samples: int = 4096, radius: float = 1 - 1e-6,
                      tail_tol: float = 1e-6) -> SupNormEstimate:
    """Estimate ``sup_{|z|<1} |phi(z)|`` from a ring of ``samples`` points.

    Polynomials and closed forms are sampled at ``radius``. A truncated
    series with a finite ``tail_hint`` is sampled there too and the tail
    bound is added, which keeps the estimate from under-reporting. With an
    unbounded tail the ring shrinks to the largest ``1 - 10**-j`` at which
    the last stored terms are below ``tail_tol``.
    """
    if samples < 64:
        raise ValueError('need at least 64 samples')
    z = np.exp(2j * np.pi * np.arange(samples) / samples)
    if not isinstance(phi, TruncatedSeries):
        vals = np.asarray([phi(radius * zz) for zz in z])
        return SupNormEstimate(float(np.max(np.abs(vals))), radius, 0.0, 'closed form')
    if phi.is_polynomial:
        return SupNormEstimate(float(np.max(np.abs(evaluate(phi, radius * z)))), radius)
    if math.isfinite(phi.tail_hint):
        tail = _tail_at(phi, radius)
        base = float(np.max(np.abs(evaluate(phi, radius * z))))
        return SupNormEstimate(base + tail, radius, tail, 'partial sum plus tail bound')
    c = np.abs(phi.coeffs)
    n = phi.order
    rad = 0.0
    for j in range(1, 13):
        r = 1 - 10.0 ** -j
        if r > radius:
            break
        if float(np.max(c[max(0, n - 7):]) * r ** max(0, n - 7)) < tail_tol:
            rad = r
    if rad == 0.0:
        rad = 0.9
        note = 'unbounded tail; ring radius reduced to 0.9 without tail control'
    else:
        note = 'unbounded tail; ring radius reduced'
    return SupNormEstimate(float(np.max(np.abs(evaluate(phi, rad * z)))), rad, 0.0, note)


def _bounded_check(name: str, f: TruncatedSeries, cap: float = 1e6) -> Check:
    est = sup_norm_estimate(f)
    if not math.isfinite(est.value):
        return Check(name, Status.FAIL, est.value, 'non-finite estimate')
    controlled = (f.is_polynomial or math.isfinite(f.tail_hint) and f.tail_hint <= 1e-6
                  or _negligible_decay(f, 1e-12))
    if not controlled:
        return Check(name, Status.INCONCLUSIVE, est.value,
                     'truncation tail not negligible; boundedness undecided')
    if est.value > cap:
        return Check(name, Status.FAIL, est.value, 'estimate exceeds %.0e' % cap)
    return Check(name, Status.PASS, est.value, 'sup-norm estimate on r=%.6f' % est.radius)


# -- hypothesis checkers -----------------------------------------------------------

def check_strict_self_map(psi: TruncatedSeries, phi: TruncatedSeries,
                          samples: int = 4096) -> HypothesisReport:
    """Self-map with closure inside the disk plus a Carleson surrogate.

    Overall status combines the strict-containment check and the
    Carleson surrogate; the Dirichlet norm of ``psi`` is informational.
    """
    est = sup_norm_estimate(phi, samples)
    if est.value <= 1 - 1e-3:
        c1 = Check('closure_in_disk', Status.PASS, est.value,
                   'sup-norm estimate <= 1 - 1e-3 (strict containment surrogate)')
    else:
        c1 = Check('closure_in_disk', Status.FAIL, est.value,
                   'sup-norm estimate reaches the unit circle')

    if phi.is_polynomial:
        c2 = Check('carleson_surrogate', Status.PASS, float(phi.degree),
                   'polynomial symbol is a multiplier (sufficient surrogate)')
    else:
        d = _bounded_check('carleson_surrogate', derivative(phi))
        if d.status is Status.PASS:
            c2 = Check(d.name, Status.PASS, d.evidence,
                       'bounded derivative estimate (sufficient surrogate)')
        else:
            c2 = Check(d.name, Status.INCONCLUSIVE, d.evidence,
                       'derivative bound not established; Carleson condition undecided')

    c3 = Check('psi_dirichlet_norm', Status.PASS, norm_sq(psi),
               'finite at truncation (reported only)')
    return HypothesisReport('SelfMapStrict', (c1, c2), (c3,))


def _univalence_grid(n_rad: int = 100, n_ang: int = 100, rmax: float = 1 - 1e-3) -> np.ndarray:
    r = rmax * (np.arange(1, n_rad + 1) / n_rad)
    t = 2 * np.pi * np.arange(n_ang) / n_ang
    pts = (r[:, None] * np.exp(1j * t[None, :])).ravel()
    return np.concatenate([[0j], pts])


def _trend_check(name: str, values: np.ndarray, eps: float, what: str) -> Check:
    """``values[direction, radius]``: decreasing along radii, below ``eps`` at the end."""
    final = float(np.max(values[:, -1]))
    rises = np.diff(values, axis=1) > 1e-12 * np.maximum(1.0, np.abs(values[:, :-1]))
    if final < eps and not np.any(rises):
        return Check(name, Status.PASS, final, '%s decays below %.0e' % (what, eps))
    if final < eps:
        return Check(name, Status.INCONCLUSIVE, final, '%s ends below %.0e but is not monotone' % (what, eps))
    return Check(name, Status.FAIL, final, '%s stays at %.3e' % (what, final))


def check_bounded_derivatives(psi: TruncatedSeries, phi: TruncatedSeries,
                              radii: Sequence[float] | None = None, directions: int = 16,
                              eps: float = 1e-3) -> HypothesisReport:
    """Univalent ``phi`` with bounded ``phi', phi''``, bounded ``psi, psi'``
    and the two radial vanishing conditions, checked as surrogates."""
    if radii is None:
        radii = geometric_radii(6)
    radii = np.asarray(radii, dtype=float)
    d_phi = derivative(phi)
    d2_phi = derivative(d_phi)
    d_psi = derivative(psi)
    d2_psi = derivative(d_psi)
    checks = [
        _bounded_check('bounded_phi_prime', d_phi),
        _bounded_check('bounded_phi_second', d2_phi),
        _bounded_check('bounded_psi', psi),
        _bounded_check('bounded_psi_prime', d_psi),
    ]

    grid = _univalence_grid()
    images = evaluate(phi, grid)
    tree = cKDTree(np.column_stack([images.real, images.imag]))
    dist, _ = tree.query(np.column_stack([images.real, images.imag]), k=2)
    sep = float(np.min(dist[:, 1]))
    if sep > 1e-10:
        checks.append(Check('univalence_injective', Status.PASS, sep,
                            'injective on a %d-point grid (surrogate, not a certificate)' % grid.size))
    else:
        checks.append(Check('univalence_injective', Status.FAIL, sep,
                            'two grid points share an image'))
    dmin = float(np.min(np.abs(evaluate(d_phi, grid))))
    checks.append(Check('univalence_derivative', Status.PASS if dmin > 1e-12 else Status.FAIL, dmin,
                        "phi' nonvanishing on the grid (surrogate)" if dmin > 1e-12
                        else "phi' vanishes on the grid"))

    dirs = np.exp(2j * np.pi * np.arange(directions) / directions)
    z = dirs[:, None] * radii[None, :]
    one_minus = (1 - radii) * (1 + radii)
    phi_abs = np.abs(evaluate(phi, z))
    if np.any(phi_abs >= 1):
        checks.append(Check('condition_ii', Status.FAIL, float(np.max(phi_abs)),
                            'phi leaves the disk on the radial grid'))
    else:
        ratio = np.abs(evaluate(psi, z)) * one_minus[None, :] / (1 - phi_abs ** 2)
        checks.append(_trend_check('condition_ii', ratio, eps, '|psi|(1-|z|^2)/(1-|phi|^2)'))
    second = np.abs(evaluate(d2_psi, z)) * one_minus[None, :]
    checks.append(_trend_check('condition_iii', second, eps, "|psi''|(1-|z|^2)"))
    return HypothesisReport('BoundedDerivatives', tuple(checks))


# names used by the operation table
check_th1 = check_strict_self_map
check_th3 = check_bounded_derivatives


# -- singular values -----------------------------------------------------------------

@dataclass(frozen=True)
class DecayReport:
    orders: tuple
    singular_values: tuple

    def sigma(self, k: int) -> np.ndarray:
        """``sigma_k(A_N)`` across the orders (nan where ``k > N``)."""
        return np.array([s[k] if k < s.size else np.nan for s in self.singular_values])


def singular_value_decay(psi: TruncatedSeries, phi: TruncatedSeries,
                         orders: Sequence[int]) -> DecayReport:
    orders = tuple(int(n) for n in orders)
    if any(b <= a for a, b in zip(orders, orders[1:])):
        raise ValueError('orders must be increasing')
    out = []
    for N in orders:
        A = wco_matrix(psi, phi, N).entries
        s = np.linalg.svd(A, compute_uv=False)
        fro = float(np.sum(np.abs(A) ** 2))
        if abs(float(np.sum(s ** 2)) - fro) > 1e-9 * max(fro, 1e-300):
            raise ArithmeticError('singular values inconsistent with ||A||_F at N=%d' % N)
        out.append(s)
    return DecayReport(orders, tuple(out))
