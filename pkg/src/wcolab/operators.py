"""Truncated matrices of weighted composition operators.

``C_{psi,phi} f = psi * (f o phi)`` is represented in the orthonormal basis
``e_n = z^n / sqrt(n + 1)`` of the Dirichlet space. Column ``n`` holds the
``e``-coordinates of ``psi * phi**n / sqrt(n + 1)``::

    A[m, n] = sqrt((m + 1) / (n + 1)) * coeff_m(psi * phi**n)

The ``(N+1) x (N+1)`` matrix is the compression of the operator to the
span of ``e_0..e_N``; no truncation correction is attempted.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .series import TruncatedSeries
from .spaces import e_coordinates, from_e_coordinates, kernel_series

__all__ = [
    'OperatorMatrix',
    'DecompositionError',
    'wco_matrix',
    'multiplication_matrix',
    'rank_one_matrix',
    'apply',
    'compression',
    'mod_class_violation',
    'mod_class_blocks',
    'is_constant',
]


class DecompositionError(ValueError):
    """Raised when a matrix lacks the block structure a routine assumes."""


@dataclass(frozen=True)
class OperatorMatrix:
    entries: np.ndarray
    N: int
    provenance: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        e = np.array(self.entries, dtype=complex)
        if e.shape != (self.N + 1, self.N + 1):
            raise ValueError('expected a %dx%d matrix, got %s'
                             % (self.N + 1, self.N + 1, e.shape))
        if not np.all(np.isfinite(e)):
            raise ValueError('operator matrix has non-finite entries')
        e.setflags(write=False)
        object.__setattr__(self, 'entries', e)

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.entries, dtype=dtype)

    @property
    def shape(self):
        return self.entries.shape


def is_constant(phi: TruncatedSeries) -> bool:
    return phi.is_polynomial and not np.any(phi.coeffs[1:])


def _provenance(psi, phi, N, claimed_bounded):
    return {'psi': psi, 'phi': phi, 'N': N, 'claimed_bounded': claimed_bounded}


def wco_matrix(psi: TruncatedSeries, phi: TruncatedSeries, N: int,
               claimed_bounded: bool | None = None) -> OperatorMatrix:
    """Matrix of ``C_{psi,phi}`` on ``span(e_0..e_N)``.

    Constant ``phi`` is dispatched to :func:`rank_one_matrix`.
    ``claimed_bounded`` is carried in the provenance for reporting only;
    boundedness of the infinite operator is never certified.
    """
    if N < 0:
        raise ValueError('truncation order must be non-negative')
    if is_constant(phi):
        A = rank_one_matrix(psi, phi.coeffs[0], N)
        return OperatorMatrix(A.entries, N, _provenance(psi, phi, N, claimed_bounded))

    psi_c = psi.resized(N).coeffs
    phi_c = phi.resized(N).coeffs
    cols = np.zeros((N + 1, N + 1), dtype=complex)
    p = np.zeros(N + 1, dtype=complex)
    p[0] = 1.0
    for n in range(N + 1):
        if n:
            p = np.convolve(p, phi_c)[:N + 1]
        cols[:, n] = np.convolve(psi_c, p)[:N + 1]
    m = np.arange(N + 1, dtype=float)
    scale = np.sqrt((m[:, None] + 1) / (m[None, :] + 1))
    return OperatorMatrix(scale * cols, N, _provenance(psi, phi, N, claimed_bounded))


def multiplication_matrix(psi: TruncatedSeries, N: int) -> OperatorMatrix:
    """Matrix of ``M_psi``, i.e. ``wco_matrix`` with ``phi(z) = z``."""
    return wco_matrix(psi, TruncatedSeries([0.0, 1.0]), N)


def rank_one_matrix(psi: TruncatedSeries, w: complex, N: int) -> OperatorMatrix:
    """Matrix of ``f -> f(w) psi = <f, k_w> psi`` as the outer product ``u v^*``."""
    w = complex(w)
    if abs(w) >= 1:
        raise ValueError('constant symbol must lie in the open unit disk, got |w| = %g' % abs(w))
    u = e_coordinates(psi, N)
    v = e_coordinates(kernel_series(w, N), N)
    phi = TruncatedSeries([w])
    return OperatorMatrix(np.outer(u, np.conj(v)), N, _provenance(psi, phi, N, None))


def apply(A: OperatorMatrix, f: TruncatedSeries) -> TruncatedSeries:
    """Apply the truncated operator to a polynomial of degree at most ``N``."""
    if f.degree > A.N:
        raise ValueError('input degree %d exceeds truncation order %d' % (f.degree, A.N))
    x = e_coordinates(f.resized(A.N))
    return from_e_coordinates(A.entries @ x)


def compression(A, indices: Sequence[int]) -> np.ndarray:
    """Submatrix ``A[indices][:, indices]``: the compression to ``span(e_i)``."""
    M = np.asarray(A)
    idx = [int(i) for i in indices]
    if len(set(idx)) != len(idx):
        raise ValueError('compression indices must be distinct')
    n = M.shape[0]
    for i in idx:
        if not 0 <= i < n:
            raise IndexError('basis index %d outside 0..%d' % (i, n - 1))
    return M[np.ix_(idx, idx)].copy()


def mod_class_violation(A, r: int) -> float:
    """Largest ``|A[m, n]|`` with ``m != n (mod r)``."""
    M = np.asarray(A)
    k = np.arange(M.shape[0])
    off = (k[:, None] - k[None, :]) % r != 0
    return float(np.max(np.abs(M[off]), initial=0.0))


def mod_class_blocks(A, r: int, tol: float = 1e-12) -> list:
    """Compressions to the residue classes ``{j, j + r, j + 2r, ...}``, ``j < r``.

    Raises :class:`DecompositionError` when an entry linking two different
    classes exceeds ``tol``.
    """
    if r < 2:
        raise ValueError('residue modulus must be >= 2')
    bad = mod_class_violation(A, r)
    if bad > tol:
        raise DecompositionError('off-class entry of size %.3e exceeds %.1e' % (bad, tol))
    n = np.asarray(A).shape[0]
    return [compression(A, range(j, n, r)) for j in range(r)]
