"""Symbol registry: text descriptors for weights and self-maps.

Grammar: ``kind[:param{,param}]``, whitespace ignored. Complex literals are
written ``a``, ``bi`` or ``a+bi`` with decimal reals.

==========  ==============================  ==========================
kind        params                          function
==========  ==============================  ==========================
poly        c0, c1, ... (complex)           c0 + c1 z + ...
rot         integer r >= 1 | real theta     e^{2 pi i / r} z | e^{2 pi i theta} z
scale       t (complex, |t| <= 1)           t z
logweight                                   sum_{k>=2} z^k / (k log k)
sqrtmap                                     1 - sqrt(1 - z)
sqrtweight                                  (1 - sqrt(1 - z))^2
halfmob                                     z / (2 - z)
binom       alpha (real)                    (1 - z)^alpha
kernel      w (complex, |w| < 1)            Dirichlet reproducing kernel k_w
==========  ==============================  ==========================
"""

from __future__ import annotations

import cmath
import math
import re
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .series import (TruncatedSeries, binomial_series, evaluate,
                     geometric_series, log_weight_series, mul)
from .spaces import kernel_series

__all__ = [
    'SymbolParseError',
    'SymbolSpec',
    'KINDS',
    'parse_complex',
    'parse_symbol',
    'realize',
    'closed_form',
]


class SymbolParseError(ValueError):
    def __init__(self, msg, position=None):
        if position is not None:
            msg = '%s (at position %d)' % (msg, position)
        super().__init__(msg)
        self.position = position


_REAL = r'(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?'
_REAL_ONLY = re.compile(r'^[+-]?%s$' % _REAL)
_IMAG_ONLY = re.compile(r'^(?P<im>[+-]?(?:%s)?)[ij]$' % _REAL)
_FULL = re.compile(r'^(?P<re>[+-]?%s)(?P<im>[+-](?:%s)?)[ij]$' % (_REAL, _REAL))
_INT = re.compile(r'^[+-]?\d+$')

# number of parameters accepted by each kind: (min, max); None = unbounded
KINDS = {
    'poly': (1, None),
    'rot': (1, 1),
    'scale': (1, 1),
    'logweight': (0, 0),
    'sqrtmap': (0, 0),
    'sqrtweight': (0, 0),
    'halfmob': (0, 0),
    'binom': (1, 1),
    'kernel': (1, 1),
}


def _imag(text):
    if text in ('', '+'):
        return 1.0
    if text == '-':
        return -1.0
    return float(text)


def parse_complex(text: str) -> complex:
    """Parse ``a``, ``bi``, ``a+bi`` (``j`` accepted in place of ``i``)."""
    t = ''.join(str(text).split())
    if _REAL_ONLY.match(t):
        return complex(float(t), 0.0)
    m = _IMAG_ONLY.match(t)
    if m:
        return complex(0.0, _imag(m.group('im')))
    m = _FULL.match(t)
    if m:
        return complex(float(m.group('re')), _imag(m.group('im')))
    raise SymbolParseError('malformed complex literal %r' % text)


@dataclass(frozen=True)
class SymbolSpec:
    kind: str
    params: tuple = ()

    def __str__(self):
        if not self.params:
            return self.kind
        return '%s:%s' % (self.kind, ','.join(_fmt(p) for p in self.params))


def _fmt(p):
    if isinstance(p, complex):
        if p.imag == 0:
            return repr(p.real)
        im = repr(p.imag)
        return '%r%si' % (p.real, im if im.startswith('-') else '+' + im)
    return repr(p)


def parse_symbol(text: str) -> SymbolSpec:
    """Parse and validate a symbol descriptor such as ``poly:0,1`` or ``scale:-0.5``."""
    raw = str(text)
    compact = ''.join(raw.split())
    if not compact:
        raise SymbolParseError('empty symbol', 0)
    kind, sep, rest = compact.partition(':')
    if kind not in KINDS:
        raise SymbolParseError('unknown symbol kind %r' % kind, 0)
    fields = rest.split(',') if sep else []
    if sep and rest == '':
        raise SymbolParseError('missing parameters after ":"', len(kind) + 1)
    lo, hi = KINDS[kind]
    if len(fields) < lo or (hi is not None and len(fields) > hi):
        raise SymbolParseError('%s takes %s parameter(s), got %d'
                               % (kind, lo if lo == hi else '%d+' % lo, len(fields)), len(kind))
    params = []
    pos = len(kind) + 1
    for f in fields:
        try:
            if kind == 'rot':
                params.append(int(f) if _INT.match(f) else float(f))
            elif kind == 'binom':
                params.append(float(f))
            else:
                params.append(parse_complex(f))
        except ValueError:
            raise SymbolParseError('bad parameter %r for %s' % (f, kind), pos) from None
        pos += len(f) + 1

    if kind == 'rot' and isinstance(params[0], int) and params[0] < 1:
        raise SymbolParseError('rot needs an integer r >= 1', len(kind) + 1)
    if kind == 'scale' and abs(params[0]) > 1:
        raise SymbolParseError('scale needs |t| <= 1, got %r' % abs(params[0]), len(kind) + 1)
    if kind == 'kernel' and abs(params[0]) >= 1:
        raise SymbolParseError('kernel needs |w| < 1', len(kind) + 1)
    return SymbolSpec(kind, tuple(params))


def _as_spec(spec) -> SymbolSpec:
    return spec if isinstance(spec, SymbolSpec) else parse_symbol(spec)


def _rot_factor(param) -> complex:
    if isinstance(param, int):
        return cmath.exp(2j * math.pi / param)
    return cmath.exp(2j * math.pi * param)


def realize(spec, N: int) -> TruncatedSeries:
    """Expand a symbol into a :class:`TruncatedSeries` of order ``N``."""
    spec = _as_spec(spec)
    kind, params = spec.kind, spec.params
    if N < 0:
        raise ValueError('truncation order must be non-negative')
    if kind == 'poly':
        return TruncatedSeries(list(params)).resized(N)
    if kind == 'rot':
        return TruncatedSeries([0, _rot_factor(params[0])]).resized(max(N, 1))
    if kind == 'scale':
        return TruncatedSeries([0, params[0]]).resized(max(N, 1))
    if kind == 'logweight':
        return log_weight_series(max(N, 2))
    if kind == 'halfmob':
        return geometric_series(0.5, N, start=1)
    if kind == 'binom':
        return binomial_series(params[0], N)
    if kind == 'kernel':
        return kernel_series(params[0], N)
    root = binomial_series(0.5, N)
    c = (-root.coeffs.real).astype(complex)
    c[0] = 0.0
    sqrtmap = TruncatedSeries(c, root.tail_hint)
    if kind == 'sqrtmap':
        return sqrtmap
    sq = mul(sqrtmap, sqrtmap, N)
    # positive coefficients summing to (1 - sqrt(1 - 1))^2 = 1
    tail = max(0.0, 1.0 - math.fsum(sq.coeffs.real))
    return TruncatedSeries(sq.coeffs, tail)


def closed_form(spec) -> Callable | None:
    """Exact point evaluator for ``spec``, or None when only the series exists."""
    spec = _as_spec(spec)
    kind, params = spec.kind, spec.params
    if kind == 'poly':
        series = TruncatedSeries(list(params))
        return lambda z: evaluate(series, z)
    if kind in ('rot', 'scale'):
        t = _rot_factor(params[0]) if kind == 'rot' else params[0]
        return lambda z: t * np.asarray(z, dtype=complex)[()]
    if kind == 'halfmob':
        return lambda z: (lambda u: u / (2 - u))(np.asarray(z, dtype=complex)[()])
    if kind == 'sqrtmap':
        return lambda z: 1 - np.sqrt(1 - np.asarray(z, dtype=complex))[()]
    if kind == 'sqrtweight':
        return lambda z: (1 - np.sqrt(1 - np.asarray(z, dtype=complex))[()]) ** 2
    if kind == 'binom':
        a = params[0]
        return lambda z: np.power(1 - np.asarray(z, dtype=complex), a)[()]
    if kind == 'kernel':
        wc = complex(params[0]).conjugate()

        def kernel(z):
            u = wc * np.asarray(z, dtype=complex)
            safe = np.where(u == 0, 1.0, u)
            return np.where(u == 0, 1.0 + 0j, -np.log1p(-safe) / safe)[()]
        return kernel
    return None
