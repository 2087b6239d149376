import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from wcolab.series import evaluate
from wcolab.symbols import (KINDS, SymbolParseError, SymbolSpec, closed_form, parse_complex,
                            parse_symbol, realize)


@pytest.mark.parametrize('text, want', [
    ('1', 1), ('-2.5', -2.5), ('3i', 3j), ('-i', -1j), ('1+2i', 1 + 2j),
    ('0.5-0.25j', 0.5 - 0.25j), ('1e-3', 1e-3), ('.5i', 0.5j), (' 2 - i ', 2 - 1j),
])
def test_parse_complex(text, want):
    assert parse_complex(text) == want


@pytest.mark.parametrize('text', ['', 'i1', '1+', '1++2i', 'abc', '1,2', 'nan'])
def test_parse_complex_rejects(text):
    with pytest.raises(SymbolParseError):
        parse_complex(text)


def test_parse_examples():
    assert parse_symbol('poly:0,1') == SymbolSpec('poly', (0j, 1 + 0j))
    assert parse_symbol('scale:-0.5').params == (-0.5 + 0j,)
    assert parse_symbol('rot:3').params == (3,)
    assert parse_symbol('rot:0.25').params == (0.25,)
    assert parse_symbol('halfmob') == SymbolSpec('halfmob')
    assert parse_symbol('binom:2').params == (2.0,)


@pytest.mark.parametrize('text', [
    '', 'wobble', 'poly', 'poly:', 'poly:1,,2', 'scale:2', 'scale:0.8+0.8i', 'rot:0',
    'rot:1,2', 'halfmob:1', 'binom:i', 'kernel:1', 'sqrtmap:0.5',
])
def test_parse_errors(text):
    with pytest.raises(SymbolParseError):
        parse_symbol(text)


def test_parse_error_reports_position():
    with pytest.raises(SymbolParseError) as info:
        parse_symbol('poly:1,x,2')
    assert info.value.position == 7


def test_str_round_trip():
    for text in ['poly:1,0.5-2i,3i', 'rot:5', 'rot:0.125', 'scale:0.3', 'sqrtweight', 'binom:-0.5']:
        spec = parse_symbol(text)
        assert parse_symbol(str(spec)) == spec


def test_realize_examples():
    assert np.allclose(realize('halfmob', 4).coeffs, [0, 1 / 2, 1 / 4, 1 / 8, 1 / 16], atol=0)
    assert np.allclose(realize('sqrtmap', 2).coeffs, [0, 1 / 2, 1 / 8], atol=0)
    for N in (2, 5, 9):
        f = realize('poly:1,0,2', N)
        assert f.coeff(0) == 1 and f.coeff(2) == 2 and np.sum(np.abs(f.coeffs)) == 3
    assert np.allclose(realize('rot:4', 3).coeffs, [0, 1j, 0, 0])
    assert np.allclose(realize('scale:-0.5', 1).coeffs, [0, -0.5])


def test_sqrtweight_squares_sqrtmap():
    w = realize('sqrtweight', 40)
    m = realize('sqrtmap', 40)
    z = 0.6 * np.exp(1j * np.linspace(0, 6, 13))
    assert np.allclose(evaluate(w, z), evaluate(m, z) ** 2, atol=1e-9)


@pytest.mark.parametrize('kind', ['logweight', 'sqrtmap', 'sqrtweight', 'halfmob', 'binom:0.5',
                                  'kernel:0.5'])
def test_non_polynomial_kinds_carry_tail_hint(kind):
    f = realize(kind, 16)
    assert not f.is_polynomial
    assert f.tail_hint > 0


def test_finite_tails_bound_the_remainder():
    for kind in ['sqrtmap', 'sqrtweight', 'halfmob']:
        lo, hi = realize(kind, 20), realize(kind, 2000)
        dropped = float(np.sum(np.abs(hi.coeffs[21:])))
        assert dropped <= lo.tail_hint * (1 + 1e-9)


@pytest.mark.parametrize('kind', ['poly:1,2i', 'rot:3', 'scale:0.5i', 'halfmob', 'sqrtmap',
                                  'sqrtweight', 'binom:2', 'binom:0.5', 'kernel:0.3-0.2i'])
def test_closed_forms_match_series(kind):
    f = closed_form(kind)
    s = realize(kind, 400)
    z = 0.5 * np.exp(1j * np.linspace(0, 6, 9))
    assert np.allclose([f(zz) for zz in z], evaluate(s, z), atol=1e-12)
    assert closed_form('logweight') is None


@given(st.lists(st.sampled_from([' ', '\t', '']), min_size=12, max_size=12))
def test_whitespace_independence(gaps):
    pieces = ['poly', ':', '1', ',', '0', ',', '2', '-', 'i']
    text = ''.join(p + g for p, g in zip(pieces, gaps))
    a = realize(parse_symbol(text), 6)
    b = realize('poly:1,0,2-i', 6)
    assert np.array_equal(a.coeffs, b.coeffs)


def test_every_kind_is_documented():
    assert set(KINDS) == {'poly', 'rot', 'scale', 'logweight', 'sqrtmap', 'sqrtweight',
                          'halfmob', 'binom', 'kernel'}


def test_logweight_matches_definition():
    f = realize('logweight', 10)
    assert f.coeff(5) == pytest.approx(1 / (5 * math.log(5)))
