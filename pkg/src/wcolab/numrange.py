"""Numerical ranges of finite complex matrices.

The numerical range ``W(A) = {x^* A x : ||x|| = 1}`` is convex, so it is the
intersection of the half-planes ``Re(e^{i theta} z) <= s(theta)`` where the
support function ``s(theta)`` is the top eigenvalue of the Hermitian part

    H(theta) = (e^{i theta} A + e^{-i theta} A^*) / 2.

A top eigenvector ``x`` gives the boundary point ``p(theta) = x^* A x``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .series import TruncatedSeries
from .spaces import e_coordinates, kernel_norm_sq, kernel_series, norm_sq

__all__ = [
    'DEFAULT_ANGLES',
    'EigensolverError',
    'RangeBoundary',
    'RegionKind',
    'RegionSpec',
    'Containment',
    'support_function',
    'support_values',
    'numerical_range_boundary',
    'contains_point',
    'contains_region',
    'ellipse_of_2x2',
    'rank_one_range',
    'is_convex_position',
    'support_gap',
    'region_mismatch',
]

DEFAULT_ANGLES = 720
RESIDUAL_RTOL = 1e-10
# a matrix whose numerical rank is at most n / LOW_RANK_FRACTION is handled
# on the span of its singular vectors
LOW_RANK_FRACTION = 8


class EigensolverError(ArithmeticError):
    def __init__(self, msg, theta=None, residual=None):
        super().__init__(msg)
        self.theta = theta
        self.residual = residual


@dataclass(frozen=True)
class RangeBoundary:
    """Support-function samples ``(theta, s(theta), p(theta))``, ascending in theta."""
    thetas: np.ndarray
    support: np.ndarray
    points: np.ndarray
    matrix_order: int

    def __len__(self):
        return self.thetas.size


class RegionKind(enum.Enum):
    SEGMENT = 'Segment'
    DISK = 'Disk'
    ELLIPSE = 'Ellipse'


@dataclass(frozen=True)
class RegionSpec:
    """A closed segment, disk, or elliptical disk.

    Use the :meth:`segment`, :meth:`disk` and :meth:`ellipse` constructors;
    ``ellipse`` collapses equal foci to a disk and zero minor axis to a
    segment.
    """
    kind: RegionKind
    a: complex = 0j
    b: complex = 0j
    radius: float = 0.0
    major: float = 0.0
    minor: float = 0.0

    @classmethod
    def segment(cls, a, b):
        return cls(RegionKind.SEGMENT, a=complex(a), b=complex(b))

    @classmethod
    def disk(cls, center, radius):
        if radius < 0:
            raise ValueError('disk radius must be non-negative')
        return cls(RegionKind.DISK, a=complex(center), b=complex(center), radius=float(radius))

    @classmethod
    def ellipse(cls, f1, f2, major, minor, atol=1e-14):
        f1, f2 = complex(f1), complex(f2)
        major, minor = float(major), float(minor)
        if major < 0 or minor < 0:
            raise ValueError('axis lengths must be non-negative')
        dist = abs(f1 - f2)
        if dist <= atol * max(1.0, major):
            return cls.disk((f1 + f2) / 2, minor / 2)
        if minor <= atol * max(1.0, major):
            return cls.segment(f1, f2)
        return cls(RegionKind.ELLIPSE, a=f1, b=f2, major=major, minor=minor)

    # -- geometry -------------------------------------------------------------

    @property
    def center(self) -> complex:
        return (self.a + self.b) / 2

    @property
    def foci(self):
        return (self.a, self.b)

    def _frame(self):
        """Center, semi-axes and unit major-axis direction of an ellipse."""
        d = self.b - self.a
        u = d / abs(d) if d != 0 else 1.0
        return self.center, self.major / 2, self.minor / 2, u

    def support(self, thetas) -> np.ndarray:
        """``max_{p in R} Re(e^{i theta} p)``."""
        rot = np.exp(1j * np.asarray(thetas, dtype=float))
        if self.kind is RegionKind.SEGMENT:
            return np.maximum((rot * self.a).real, (rot * self.b).real)
        if self.kind is RegionKind.DISK:
            return (rot * self.a).real + self.radius
        c, sa, sb, u = self._frame()
        w = rot * u
        return (rot * c).real + np.sqrt((sa * w.real) ** 2 + (sb * w.imag) ** 2)

    def boundary_points(self, m: int = DEFAULT_ANGLES) -> np.ndarray:
        """Sample points on the boundary (segments: endpoints and midpoint)."""
        if self.kind is RegionKind.SEGMENT:
            return np.array([self.a, (self.a + self.b) / 2, self.b])
        t = 2 * np.pi * np.arange(m) / m
        if self.kind is RegionKind.DISK:
            return self.a + self.radius * np.exp(1j * t)
        c, sa, sb, u = self._frame()
        return c + u * (sa * np.cos(t) + 1j * sb * np.sin(t))

    def excess(self, p) -> np.ndarray:
        """How far ``p`` lies outside; non-positive means inside.

        Disk: distance beyond the radius. Ellipse: focal-sum excess over the
        major axis. Segment: Euclidean distance to the segment.
        """
        p = np.asarray(p, dtype=complex)
        if self.kind is RegionKind.DISK:
            return np.abs(p - self.a) - self.radius
        if self.kind is RegionKind.ELLIPSE:
            return np.abs(p - self.a) + np.abs(p - self.b) - self.major
        d = self.b - self.a
        if d == 0:
            return np.abs(p - self.a)
        t = np.clip(((p - self.a) * np.conj(d)).real / abs(d) ** 2, 0.0, 1.0)
        return np.abs(p - (self.a + t * d))

    def to_dict(self) -> dict:
        out = {'kind': self.kind.value}
        if self.kind is RegionKind.SEGMENT:
            out['endpoints'] = [_cx(self.a), _cx(self.b)]
        elif self.kind is RegionKind.DISK:
            out['center'] = _cx(self.a)
            out['radius'] = self.radius
        else:
            out['foci'] = [_cx(self.a), _cx(self.b)]
            out['major_axis_length'] = self.major
            out['minor_axis_length'] = self.minor
        return out


def _cx(z):
    return [float(z.real), float(z.imag)]


@dataclass(frozen=True)
class Containment:
    """Verdict plus the worst slack ``min (s(theta) - Re(e^{i theta} z))``."""
    contained: bool
    margin: float
    theta: float

    def __bool__(self):
        return self.contained


# -- support function ----------------------------------------------------------

def _as_square(A) -> np.ndarray:
    M = np.asarray(A, dtype=complex)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError('numerical range needs a square matrix, got shape %s' % (M.shape,))
    return M


def _top_eigpair(H):
    n = H.shape[0]
    if n <= 128:
        lam, vec = np.linalg.eigh(H)
        return lam[-1], vec[:, -1], max(abs(lam[0]), abs(lam[-1]))
    lam, vec = scipy.linalg.eigh(H, subset_by_index=[n - 1, n - 1])
    scale = max(abs(lam[0]), np.linalg.norm(H) / math.sqrt(n))
    return lam[0], vec[:, 0], scale


def _low_rank_factors(M):
    """``(P, Q)`` with ``M = P Q^*`` of small inner dimension, or None."""
    n = M.shape[0]
    if n < 4 * LOW_RANK_FRACTION:
        return None
    U, s, Vh = np.linalg.svd(M)
    if s[0] == 0:
        return U[:, :1] * 0, Vh[:1].conj().T
    k = int(np.sum(s > 1e-13 * s[0]))
    if k > n // LOW_RANK_FRACTION:
        return None
    return U[:, :k] * s[:k], Vh[:k].conj().T


def support_values(A, thetas):
    """Vectorized support function: arrays ``s`` and ``p`` over ``thetas``.

    Matrices of small numerical rank are reduced to the span of their
    singular vectors, where the top eigenpair is computed exactly; the
    residual is always checked against the full Hermitian part.
    """
    M = _as_square(A)
    thetas = np.asarray(thetas, dtype=float)
    n = M.shape[0]
    s = np.empty(thetas.size)
    p = np.empty(thetas.size, dtype=complex)
    # residuals are judged against ||A||, a bound for every ||H(theta)||
    mnorm = float(np.linalg.norm(M))
    factors = _low_rank_factors(M)
    if factors is not None:
        P, Q = factors
        basis, _ = np.linalg.qr(np.hstack([P, Q]))
        red = basis.conj().T @ M @ basis
    for k, th in enumerate(thetas):
        rot = np.exp(1j * th)
        if factors is None:
            H = (rot * M + np.conj(rot) * M.conj().T) / 2
            lam, x, scale = _top_eigpair(H)
            resid = np.linalg.norm(H @ x - lam * x)
        else:
            Hr = (rot * red + np.conj(rot) * red.conj().T) / 2
            lam_r, vec_r = np.linalg.eigh(Hr)
            lam, x = lam_r[-1], basis @ vec_r[:, -1]
            if lam < 0 and basis.shape[1] < n:
                # the orthogonal complement contributes the eigenvalue 0
                lam = 0.0
                x = _complement_vector(basis)
            Hx = (rot * (M @ x) + np.conj(rot) * (M.conj().T @ x)) / 2
            resid = np.linalg.norm(Hx - lam * x)
            scale = max(abs(lam_r[0]), abs(lam_r[-1]))
        if resid > RESIDUAL_RTOL * max(scale, mnorm) and resid > 1e-300:
            raise EigensolverError('eigensolver residual %.3e at theta=%.6f' % (resid, th),
                                   theta=th, residual=resid)
        s[k] = lam
        p[k] = np.vdot(x, M @ x)
    return s, p


def _complement_vector(basis):
    n = basis.shape[0]
    for i in range(n):
        e = np.zeros(n, dtype=complex)
        e[i] = 1.0
        v = e - basis @ (basis.conj().T @ e)
        nv = np.linalg.norm(v)
        if nv > 1e-8:
            return v / nv
    raise EigensolverError('no vector orthogonal to the reduced basis')


def support_function(A, theta: float):
    """``(s, p)``: top eigenvalue of ``H(theta)`` and the matching boundary point."""
    s, p = support_values(A, [theta])
    return float(s[0]), complex(p[0])


def numerical_range_boundary(A, m: int = DEFAULT_ANGLES) -> RangeBoundary:
    """Sample the support function at ``theta_k = 2 pi k / m``."""
    if m < 8:
        raise ValueError('need at least 8 angles, got %d' % m)
    thetas = 2 * np.pi * np.arange(m) / m
    s, p = support_values(A, thetas)
    return RangeBoundary(thetas, s, p, _as_square(A).shape[0])


def _boundary(A, m):
    if isinstance(A, RangeBoundary):
        return A
    return numerical_range_boundary(A, m)


def contains_point(A, z: complex, tol: float = 0.0, m: int = DEFAULT_ANGLES) -> Containment:
    """Test ``z`` against every sampled supporting half-plane.

    ``A`` may be a matrix or a precomputed :class:`RangeBoundary`. A positive
    margin certifies that ``z`` is interior to the truncated range (and hence
    to the range of any operator this matrix compresses).
    """
    if tol < 0:
        raise ValueError('tolerance must be non-negative')
    b = _boundary(A, m)
    slack = b.support - (np.exp(1j * b.thetas) * complex(z)).real
    k = int(np.argmin(slack))
    return Containment(bool(slack[k] >= -tol), float(slack[k]), float(b.thetas[k]))


def contains_region(A, region: RegionSpec, tol: float = 0.0,
                    m: int = DEFAULT_ANGLES, samples: int = DEFAULT_ANGLES) -> Containment:
    """Require every sampled boundary point of ``region`` to pass :func:`contains_point`."""
    if tol < 0:
        raise ValueError('tolerance must be non-negative')
    b = _boundary(A, m)
    pts = region.boundary_points(samples)
    rot = np.exp(1j * b.thetas)
    reach = np.max((rot[:, None] * pts[None, :]).real, axis=1)
    slack = b.support - reach
    k = int(np.argmin(slack))
    return Containment(bool(slack[k] >= -tol), float(slack[k]), float(b.thetas[k]))


# -- closed forms ----------------------------------------------------------------

def ellipse_of_2x2(A, atol: float = 1e-12) -> RegionSpec:
    """Numerical range of a 2x2 matrix.

    Foci are the eigenvalues; the minor axis is
    ``sqrt(tr(A^* A) - |l1|^2 - |l2|^2)``, read off a Schur form, and the
    major axis is ``sqrt(minor^2 + |l1 - l2|^2)``.
    """
    M = _as_square(A)
    if M.shape != (2, 2):
        raise ValueError('ellipse_of_2x2 needs a 2x2 matrix')
    # unitary triangularization: W(A) = W([[l1, c], [0, l2]]) and the minor
    # axis is |c|, without the cancellation of tr(A^*A) - |l1|^2 - |l2|^2
    T, _ = scipy.linalg.schur(M, output='complex')
    l1, l2 = T[0, 0], T[1, 1]
    minor = float(abs(T[0, 1]))
    major = math.sqrt(minor ** 2 + abs(l1 - l2) ** 2)
    return RegionSpec.ellipse(l1, l2, major, minor, atol=atol)


def rank_one_range(psi: TruncatedSeries, w: complex, N: int) -> RegionSpec:
    """Predicted numerical range of ``f -> f(w) psi`` (constant symbol ``w``).

    Parallel ``psi`` and ``k_w``: the segment ``[0, conj(c) ||psi||^2]`` with
    ``k_w = c psi``. ``psi(w) = 0``: the disk of radius
    ``||psi|| ||k_w|| / 2``. Otherwise the ellipse with foci ``0`` and
    ``psi(w)`` and major axis ``||psi|| ||k_w||``.
    """
    w = complex(w)
    if abs(w) >= 1:
        raise ValueError('w must lie in the open unit disk')
    u = e_coordinates(psi, N)
    if not np.any(u):
        raise ValueError('psi must not vanish identically')
    v = e_coordinates(kernel_series(w, N), N)
    nu, nv = np.linalg.norm(u), np.linalg.norm(v)
    ip = np.vdot(u, v)
    if abs(ip) >= (1 - 1e-12) * nu * nv:
        c = ip / nu ** 2
        return RegionSpec.segment(0, np.conj(c) * nu ** 2)
    psi_norm = math.sqrt(norm_sq(psi.resized(N)))
    k_norm = math.sqrt(kernel_norm_sq(w))
    value = complex(np.vdot(v, u))
    if abs(value) <= 1e-12:
        return RegionSpec.disk(0, psi_norm * k_norm / 2)
    major = psi_norm * k_norm
    minor = math.sqrt(max(major ** 2 - abs(value) ** 2, 0.0))
    return RegionSpec.ellipse(0, value, major, minor)


# -- diagnostics -------------------------------------------------------------------

def is_convex_position(boundary: RangeBoundary, slack: float = 1e-9) -> bool:
    """Consecutive boundary turns all share one orientation, up to ``slack``.

    Increasing theta traverses the boundary clockwise, so every cross product
    of successive edges is non-positive.
    """
    p = boundary.points
    scale = max(1.0, float(np.max(np.abs(p))))
    d1 = np.roll(p, -1) - p
    d2 = np.roll(p, -2) - np.roll(p, -1)
    cross = (np.conj(d1) * d2).imag
    return bool(np.all(cross <= slack * scale ** 2))


def support_gap(first, second, m: int = DEFAULT_ANGLES) -> float:
    """``max_theta |s_1(theta) - s_2(theta)|`` for regions or matrices."""
    thetas = 2 * np.pi * np.arange(m) / m

    def values(obj):
        if isinstance(obj, RegionSpec):
            return obj.support(thetas)
        if isinstance(obj, RangeBoundary):
            if obj.thetas.size != m:
                raise ValueError('boundary sampled at %d angles, expected %d' % (obj.thetas.size, m))
            return obj.support
        return support_values(obj, thetas)[0]

    return float(np.max(np.abs(values(first) - values(second))))


def region_mismatch(expected: RegionSpec, got: RegionSpec, m: int = DEFAULT_ANGLES) -> float:
    """Largest parameter difference between two regions of the same kind.

    Foci and segment endpoints are compared as unordered pairs. Regions of
    different kinds fall back to :func:`support_gap`.
    """
    if expected.kind is not got.kind:
        return support_gap(expected, got, m)
    if expected.kind is RegionKind.DISK:
        return max(abs(expected.a - got.a), abs(expected.radius - got.radius))
    pair = min(max(abs(expected.a - got.a), abs(expected.b - got.b)),
               max(abs(expected.a - got.b), abs(expected.b - got.a)))
    if expected.kind is RegionKind.SEGMENT:
        return pair
    return max(pair, abs(expected.major - got.major), abs(expected.minor - got.minor))
