"""Quick invariant checks across all modules, used by ``wcolab selftest``."""

from __future__ import annotations

import math

import numpy as np

from . import compactness, numrange, operators, series, spaces, symbols, theorems


def _reproducing(rng):
    worst = 0.0
    for _ in range(50):
        f = series.TruncatedSeries(rng.uniform(-1, 1, 33) + 1j * rng.uniform(-1, 1, 33))
        w = 0.9 * math.sqrt(rng.uniform()) * np.exp(2j * np.pi * rng.uniform())
        k = spaces.kernel_series(w, 256)
        worst = max(worst, abs(spaces.inner_product(f.resized(256), k) - f(w)))
    return worst <= 1e-10, 'max |<f,k_w> - f(w)| = %.2e' % worst


def _kernel_norm(rng):
    k = spaces.kernel_series(0.5, 512)
    err = abs(spaces.norm_sq(k) - 4 * math.log(4 / 3))
    return err <= 1e-12, '|truncated - closed form| at w=1/2: %.2e' % err


def _sandwich(rng):
    for _ in range(200):
        g = series.TruncatedSeries(rng.normal(size=20) + 1j * rng.normal(size=20))
        q = spaces.weighted_bergman_quantity(g)
        b = spaces.norm_sq(g, spaces.BERGMAN)
        if not (2 / 3 * b <= q <= 2 * b):
            return False, 'violated for a random vector'
    return True, '200 random vectors'


def _compose(rng):
    f = series.TruncatedSeries(rng.normal(size=6))
    phi = series.TruncatedSeries([0, 0.3, -0.2])
    c = series.compose(f, phi, 0.5, 40)
    z = 0.4 * np.exp(1j * np.linspace(0, 2 * np.pi, 9))
    err = float(np.max(np.abs(c(z) - f(phi(z)))))
    return err <= 1e-12, 'composition vs pointwise evaluation: %.2e' % err


def _operator(rng):
    psi = series.TruncatedSeries(rng.normal(size=4))
    phi = series.TruncatedSeries([0, 0.5, 0.25])
    A = operators.wco_matrix(psi, phi, 24)
    f = series.TruncatedSeries([1, -1, 2])
    got = operators.apply(A, f)
    want = (psi * series.compose(f, phi, 0.75, 24)).resized(24)
    err = float(np.max(np.abs(got.coeffs - want.coeffs)))
    return err <= 1e-12, 'A e-coordinates vs psi * (f o phi): %.2e' % err


def _ellipse(rng):
    worst = 0.0
    for _ in range(20):
        M = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        region = numrange.ellipse_of_2x2(M)
        b = numrange.numerical_range_boundary(M, 180)
        worst = max(worst, float(np.max(np.abs(region.excess(b.points)))))
    return worst <= 1e-8, 'focal-sum residual %.2e' % worst


def _convexity(rng):
    A = rng.normal(size=(12, 12)) + 1j * rng.normal(size=(12, 12))
    b = numrange.numerical_range_boundary(A, 360)
    return numrange.is_convex_position(b), 'boundary of a random 12x12 matrix'


def _indicator(rng):
    v = compactness.tilde_f(symbols.closed_form('sqrtweight'), symbols.closed_form('sqrtmap'), 1 - 1e-8)
    return 0.67 <= v <= 0.72, 'indicator near the boundary = %.4f' % v


def _symbols(rng):
    a = symbols.realize(symbols.parse_symbol(' poly : 1 , 0 , 2 '), 4)
    b = symbols.realize('poly:1,0,2', 4)
    return bool(np.array_equal(a.coeffs, b.coeffs)), 'whitespace-independent round trip'


def _scenario(rng):
    rep = theorems.run_disk_nilpotent(2, series.TruncatedSeries([0, 1]), 1.0, N=16, m=180)
    return rep.passed, 'nilpotent disk scenario: %s' % rep.verdict


CHECKS = [
    ('series.compose', _compose),
    ('spaces.reproducing', _reproducing),
    ('spaces.kernel_norm', _kernel_norm),
    ('spaces.sandwich', _sandwich),
    ('operators.apply', _operator),
    ('numrange.ellipse_2x2', _ellipse),
    ('numrange.convexity', _convexity),
    ('compactness.indicator', _indicator),
    ('symbols.round_trip', _symbols),
    ('theorems.nilpotent', _scenario),
]


def run_selftest(seed: int = 20240601) -> list:
    """``[(name, passed, detail)]``; exceptions count as failures."""
    rng = np.random.default_rng(seed)
    out = []
    for name, fn in CHECKS:
        try:
            ok, detail = fn(rng)
        except Exception as exc:  # a crash is a failed invariant, not an abort
            ok, detail = False, '%s: %s' % (type(exc).__name__, exc)
        out.append((name, bool(ok), detail))
    return out
