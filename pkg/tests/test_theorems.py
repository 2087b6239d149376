import cmath
import json
import math

import pytest

from wcolab.numrange import RegionKind, RegionSpec, region_mismatch
from wcolab.series import TruncatedSeries
from wcolab.spaces import kernel_norm_sq, kernel_series
from wcolab.theorems import (PreconditionError, Scenario, Theorem, run_direct_sum,
                             run_disk_3x3, run_disk_nilpotent, run_disk_order_r,
                             run_ellipse_irrational, run_rank_one, run_scenario,
                             run_zero_interior, run_zero_membership)

Z = TruncatedSeries([0, 1])
M = 360  # angles; keeps the suite quick


def assert_pass(rep):
    assert rep.passed, (rep.failures(), rep.error, [c.to_dict() for c in rep.checks])


# -- residue classes -------------------------------------------------------------------

def test_direct_sum_trivial():
    rep = run_direct_sum(2, TruncatedSeries([1]), N=32, m=M)
    assert_pass(rep)
    assert rep.check('support_identity').value <= 1e-14


def test_direct_sum_random(rng):
    g = TruncatedSeries(rng.normal(size=6) + 1j * rng.normal(size=6))
    rep = run_direct_sum(3, g, N=128, m=M)
    assert_pass(rep)
    assert rep.check('zero_pattern').value == 0


def test_direct_sum_pattern_failure():
    rep = run_direct_sum(2, psi=Z, N=16, m=M)
    assert not rep.passed
    assert 'zero_pattern' in rep.failures()


def test_direct_sum_requires_r():
    with pytest.raises(PreconditionError):
        run_direct_sum(1, TruncatedSeries([1]))


# -- constant symbol ----------------------------------------------------------------------

def test_rank_one_segment():
    rep = run_rank_one(kernel_series(0.5, 512), 0.5, m=M)
    assert_pass(rep)
    assert rep.predicted.kind is RegionKind.SEGMENT
    assert abs(rep.predicted.b) == pytest.approx(1.1507, abs=1e-4)
    assert abs(rep.predicted.b) == pytest.approx(kernel_norm_sq(0.5), rel=1e-12)


def test_rank_one_disk():
    rep = run_rank_one(TruncatedSeries([-0.5, 1]), 0.5, m=M)
    assert_pass(rep)
    assert rep.predicted.kind is RegionKind.DISK
    assert rep.predicted.radius == pytest.approx(0.8045, abs=1e-4)


def test_rank_one_ellipse():
    rep = run_rank_one(TruncatedSeries([1, 1]), 0.5, m=M)
    assert_pass(rep)
    p = rep.predicted
    assert p.kind is RegionKind.ELLIPSE
    assert {complex(p.a), complex(p.b)} == {0, 1.5}


def test_rank_one_rejects_bad_input():
    with pytest.raises(PreconditionError):
        run_rank_one(TruncatedSeries([1]), 1.0)
    with pytest.raises(PreconditionError):
        run_rank_one(TruncatedSeries([0]), 0.3)


# -- zero in the range ---------------------------------------------------------------------

def test_zero_interior_example():
    rep = run_zero_interior(TruncatedSeries([1]), TruncatedSeries([0, 0.5, 0.5]), m=M)
    assert_pass(rep)
    assert rep.check('interior_margin').value > 1e-6


def test_zero_interior_compression_identity():
    mu, b = 1j, 0.5
    phi = TruncatedSeries([0, mu, mu * b])
    for r in (1, 2, 5):
        rep = run_zero_interior(TruncatedSeries([1, 0.3]), phi, r=r, m=M)
        c = rep.check('E_r_compression')
        assert c.gating and c.value <= 1e-12


def test_zero_interior_general_g_is_informational():
    phi = TruncatedSeries([0, 0.5, 0.2, 0.1])
    rep = run_zero_interior(TruncatedSeries([1]), phi, m=M)
    assert not rep.check('E_r_compression').gating


@pytest.mark.parametrize('psi, phi', [
    (TruncatedSeries([1]), TruncatedSeries([0, 0.5])),
    (TruncatedSeries([1]), TruncatedSeries([0.1, 0.5, 0.2])),
    (TruncatedSeries([0]), TruncatedSeries([0, 0.5, 0.2])),
])
def test_zero_interior_preconditions(psi, phi):
    with pytest.raises(PreconditionError):
        run_zero_interior(psi, phi)


def test_zero_membership_examples():
    rep = run_zero_membership(TruncatedSeries([1, 1]), -0.5, m=M)
    assert_pass(rep)
    assert rep.predicted.kind is RegionKind.SEGMENT
    rep = run_zero_membership(TruncatedSeries([1, 1]), 0.0, m=M)
    assert_pass(rep)


def test_zero_membership_preconditions():
    with pytest.raises(PreconditionError):
        run_zero_membership(TruncatedSeries([2]), -0.5)
    with pytest.raises(PreconditionError):
        run_zero_membership(TruncatedSeries([1, 1]), 0.5)


# -- disks -------------------------------------------------------------------------------

def test_disk_3x3_example():
    rep = run_disk_3x3(2, 1, 2, TruncatedSeries([0, 0, 1]), m=M)
    assert_pass(rep)
    assert rep.predicted.radius == pytest.approx(0.5 * math.sqrt(3 + 5 / 3), rel=1e-15)
    assert rep.predicted.radius == pytest.approx(1.08012, abs=1e-5)


def test_disk_3x3_shifted_center():
    base = run_disk_3x3(2, 1, 2, TruncatedSeries([0, 0, 1]), m=M)
    rep = run_disk_3x3(2, 1, 2, TruncatedSeries([0.5 - 0.25j, 0, 1]), m=M)
    assert_pass(rep)
    assert rep.predicted.center == 0.5 - 0.25j
    assert rep.predicted.radius == base.predicted.radius


def test_disk_3x3_preconditions():
    with pytest.raises(PreconditionError):
        run_disk_3x3(2, 1, 2, TruncatedSeries([1, 1]))
    with pytest.raises(PreconditionError):
        run_disk_3x3(2, 2, 2, TruncatedSeries([0, 0, 1]))
    # all three coefficients present: the product condition fails
    with pytest.raises(PreconditionError):
        run_disk_3x3(1, 1, 2, TruncatedSeries([0, 1, 1]))


def test_disk_order_r_examples():
    rep = run_disk_order_r(1, Z, TruncatedSeries([0, 0.5]), m=M)
    assert_pass(rep)
    assert rep.predicted.radius == pytest.approx(2 / 3, rel=1e-15)
    rep = run_disk_order_r(2, TruncatedSeries([0, 0, 3]), TruncatedSeries([0, 0, 0.5]), m=M)
    assert_pass(rep)
    assert rep.predicted.radius == pytest.approx(9 / 4, rel=1e-15)


def test_disk_order_r_preconditions():
    with pytest.raises(PreconditionError):
        run_disk_order_r(1, TruncatedSeries([1, 1]), TruncatedSeries([0, 0.5]))
    with pytest.raises(PreconditionError):
        run_disk_order_r(2, TruncatedSeries([0, 1, 1]), TruncatedSeries([0, 0.5]))
    with pytest.raises(PreconditionError):
        run_disk_order_r(1, Z, TruncatedSeries([0.2, 0.5]))


def test_disk_nilpotent_examples():
    rep = run_disk_nilpotent(2, Z, 1, m=M)
    assert_pass(rep)
    assert rep.predicted.radius == pytest.approx(math.sqrt(3 / 8), rel=1e-15)
    assert rep.predicted.radius == pytest.approx(0.612372, abs=1e-6)
    rot = run_disk_nilpotent(2, Z, 1j, m=M)
    assert_pass(rot)
    assert rot.predicted.radius == rep.predicted.radius


def test_disk_nilpotent_degenerate_radius():
    rep = run_disk_nilpotent(3, TruncatedSeries([0, 1]), 0.5, m=M)
    assert_pass(rep)
    assert rep.predicted.radius == 0


def test_disk_nilpotent_preconditions():
    with pytest.raises(PreconditionError):
        run_disk_nilpotent(2, TruncatedSeries([1, 1]), 1)
    with pytest.raises(PreconditionError):
        run_disk_nilpotent(2, Z, 0)
    with pytest.raises(PreconditionError):
        run_disk_nilpotent(1, Z, 1)


# -- ellipses ------------------------------------------------------------------------------

def test_ellipse_example():
    theta = 1 / math.sqrt(2)
    rep = run_ellipse_irrational(0, 1, theta, TruncatedSeries([1, 1]), m=M)
    assert_pass(rep)
    p = rep.predicted
    assert p.minor == pytest.approx(math.sqrt(2), rel=1e-15)
    want = RegionSpec.ellipse(1, cmath.exp(2j * math.pi * theta), p.major, math.sqrt(2))
    assert region_mismatch(p, want) <= 1e-15
    assert any('irrational' in n for n in rep.notes)


def test_ellipse_degenerates_to_segment():
    rep = run_ellipse_irrational(1, 2, 0.3, TruncatedSeries([1, 0.5]), m=M)
    assert_pass(rep)
    assert rep.predicted.kind is RegionKind.SEGMENT


def test_ellipse_degenerates_to_nilpotent_disk():
    psi = TruncatedSeries([0, 1])
    rep = run_ellipse_irrational(1, 1, 0.3, psi, m=M)
    assert_pass(rep)
    assert rep.predicted.kind is RegionKind.DISK
    # the compression to {e_1, e_2} is nilpotent with entry sqrt(3/2) mu psi_1
    nil = run_disk_nilpotent(2, psi, cmath.exp(0.6j * math.pi), m=M)
    assert rep.predicted.radius == pytest.approx(nil.predicted.radius, rel=1e-14)


# -- properties ----------------------------------------------------------------------------

def test_containment_monotone_in_truncation():
    psi = TruncatedSeries([0.3, 0, 1, -0.5])
    margins = []
    for N in (8, 16, 32, 64):
        rep = run_disk_3x3(2, 1, 2, psi, N=N, m=M)
        margins.append(-rep.check('contained').value)
    assert all(b >= a - 1e-9 for a, b in zip(margins, margins[1:]))


def test_reports_are_deterministic():
    a = run_ellipse_irrational(2, 1, 0.123, TruncatedSeries([1, 0.5, -1j]), m=M).to_dict()
    b = run_ellipse_irrational(2, 1, 0.123, TruncatedSeries([1, 0.5, -1j]), m=M).to_dict()
    assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)


# -- scenario records ----------------------------------------------------------------------

def test_scenario_round_trip():
    d = {'id': 'x', 'theorem': 'DiskNilpotent', 'psi_spec': 'poly:0,1',
         'parameters': {'r': 2, 'mu': '1i'}, 'truncation': 32, 'tolerances': {'shape_tol': 1e-9}}
    sc = Scenario.from_dict(d)
    assert sc.theorem is Theorem.DISK_NILPOTENT
    assert Scenario.from_dict(sc.to_dict()) == sc
    assert_pass(run_scenario(sc))


@pytest.mark.parametrize('d', [
    {'theorem': 'DiskNilpotent'},
    {'id': 'x', 'theorem': 'Nope'},
    {'id': 'x', 'theorem': 'DiskNilpotent', 'extra': 1},
    {'id': 'x', 'theorem': 'DiskNilpotent', 'truncation': -1},
    {'id': 'x', 'theorem': 'DiskNilpotent', 'truncation': 2.5},
    {'id': 'x', 'theorem': 'DiskNilpotent', 'parameters': [1]},
])
def test_scenario_validation(d):
    with pytest.raises(ValueError):
        Scenario.from_dict(d)


@pytest.mark.parametrize('d, fragment', [
    ({'id': 'a', 'theorem': 'DiskNilpotent', 'psi_spec': 'poly:1,1', 'parameters': {'r': 2, 'mu': 1}},
     'precondition violated'),
    ({'id': 'b', 'theorem': 'DiskNilpotent', 'psi_spec': 'poly:0,1', 'parameters': {'r': 2}},
     'missing mu'),
    ({'id': 'c', 'theorem': 'DiskNilpotent', 'psi_spec': 'poly:0,1',
      'parameters': {'r': 2, 'mu': 1, 'w': 0.5}}, "'w'"),
    ({'id': 'd', 'theorem': 'DiskNilpotent', 'psi_spec': 'poly:0,1', 'phi_spec': 'scale:0.5',
      'parameters': {'r': 2, 'mu': 1}}, 'phi_spec'),
    ({'id': 'e', 'theorem': 'DiskNilpotent', 'psi_spec': 'poly:0,1',
      'parameters': {'r': 2, 'mu': 1}, 'tolerances': {'m': 3}}, 'tolerance'),
    ({'id': 'f', 'theorem': 'DiskNilpotent', 'psi_spec': 'wobble', 'parameters': {'r': 2, 'mu': 1}},
     'SymbolParseError'),
])
def test_run_scenario_turns_errors_into_failures(d, fragment):
    rep = run_scenario(d)
    assert not rep.passed and rep.verdict == 'fail'
    assert fragment in rep.error


def test_report_to_dict_is_json():
    rep = run_disk_nilpotent(2, Z, 1, m=M)
    d = json.loads(json.dumps(rep.to_dict()))
    assert d['verdict'] == 'pass' and d['predicted_region']['kind'] == 'Disk'
    assert rep.margins['compression'] == 0
