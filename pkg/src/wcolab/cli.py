"""``wcolab`` command-line front end.

All numbers are written with 17 significant digits and ``\\n`` line endings,
so identical inputs give byte-identical files.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import json
import os
import re
import sys
import tempfile
from importlib import resources

import numpy as np

from .compactness import (check_bounded_derivatives, check_strict_self_map, geometric_radii,
                          radial_profile)
from .numrange import numerical_range_boundary
from .operators import wco_matrix
from .series import TruncatedSeries
from .spaces import e_coordinates, kernel_norm_sq, kernel_series
from .symbols import SymbolParseError, closed_form, parse_complex, parse_symbol, realize
from .theorems import Scenario, run_scenario

FMT = '%.17g'
BUNDLED_SCENARIOS = 'scenarios.json'


class CLIError(Exception):
    """Reported as a single-line diagnostic with exit status 2."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CLIError(message)


def _g(x) -> str:
    return FMT % x


def atomic_write(path: str, text: str) -> None:
    """Write ``text`` to ``path`` through a temporary file and a rename."""
    directory = os.path.dirname(os.path.abspath(path))
    try:
        fd, tmp = tempfile.mkstemp(dir=directory, prefix='.tmp-', suffix='.part')
    except OSError as exc:
        raise CLIError('cannot write %s: %s' % (path, exc.strerror or exc)) from None
    try:
        with os.fdopen(fd, 'w', newline='\n', encoding='utf-8') as fh:
            fh.write(text)
        os.replace(tmp, path)
    except OSError as exc:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise CLIError('cannot write %s: %s' % (path, exc.strerror or exc)) from None


def _emit(text: str, out: str | None) -> None:
    if out is None or out == '-':
        sys.stdout.write(text)
    else:
        atomic_write(out, text)


# -- formatting --------------------------------------------------------------------

def matrix_csv(A: np.ndarray) -> str:
    n = A.shape[0] - 1
    lines = ['# wco-matrix v1, n=%d' % n]
    for i in range(A.shape[0]):
        for j in range(A.shape[1]):
            z = A[i, j]
            lines.append('%d,%d,%s,%s' % (i, j, _g(z.real), _g(z.imag)))
    return '\n'.join(lines) + '\n'


def boundary_csv(b) -> str:
    lines = ['theta,support,re,im']
    for th, s, p in zip(b.thetas, b.support, b.points):
        lines.append(','.join((_g(th), _g(s), _g(p.real), _g(p.imag))))
    return '\n'.join(lines) + '\n'


def profile_csv(profiles) -> str:
    lines = ['direction_index,r,value']
    for k, prof in enumerate(profiles):
        for r, v in zip(prof.radii, prof.values):
            lines.append('%d,%s,%s' % (k, _g(r), _g(v)))
    return '\n'.join(lines) + '\n'


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False) + '\n'


# -- subcommands ---------------------------------------------------------------------

def _symbol(text, N):
    return realize(parse_symbol(text), N)


def cmd_matrix(args) -> int:
    psi, phi = _symbol(args.psi, args.n), _symbol(args.phi, args.n)
    _emit(matrix_csv(wco_matrix(psi, phi, args.n).entries), args.out)
    return 0


def cmd_numrange(args) -> int:
    psi, phi = _symbol(args.psi, args.n), _symbol(args.phi, args.n)
    b = numerical_range_boundary(wco_matrix(psi, phi, args.n).entries, args.angles)
    _emit(boundary_csv(b), args.out)
    return 0


# fixed probe polynomial for the reproducing check
_PROBE = TruncatedSeries([1.0, -2.0, 0.5j, 0.0, 3.0, -1.0 + 1.0j])


def cmd_kernel(args) -> int:
    w = parse_complex(args.w)
    if abs(w) >= 1:
        raise CLIError('--w must satisfy |w| < 1')
    k = kernel_series(w, args.n)
    closed = kernel_norm_sq(w)
    truncated = float(np.sum(np.abs(e_coordinates(k)) ** 2))
    probe = _PROBE.resized(max(args.n, _PROBE.degree))
    kk = k.resized(probe.order)
    inner = complex(np.vdot(e_coordinates(kk), e_coordinates(probe)))
    residual = abs(inner - complex(probe(w)))
    print('w = %s' % _g(w.real) if w.imag == 0 else 'w = %s%+si' % (_g(w.real), _g(w.imag)))
    print('kernel_norm_sq_closed_form = %s' % _g(closed))
    print('kernel_norm_sq_truncated = %s' % _g(truncated))
    print('reproducing_residual = %s' % _g(residual))
    return 0


def _profile_symbol(text, N):
    spec = parse_symbol(text)
    exact = closed_form(spec)
    return exact if exact is not None else realize(spec, N)


def cmd_compact_probe(args) -> int:
    if args.rmax_exp < 1 or args.dirs < 1:
        raise CLIError('--rmax-exp and --dirs must be positive')
    psi_p, phi_p = _profile_symbol(args.psi, args.n), _profile_symbol(args.phi, args.n)
    radii = geometric_radii(args.rmax_exp)
    dirs = np.exp(2j * np.pi * np.arange(args.dirs) / args.dirs)
    profiles = [radial_profile(psi_p, phi_p, d, radii) for d in dirs]
    psi, phi = _symbol(args.psi, args.n), _symbol(args.phi, args.n)
    reports = {
        'profiles': [{'direction_index': k, 'increasing': p.is_increasing(),
                      'decreasing': p.is_decreasing(), 'conclusive': p.conclusive,
                      'invalid': [list(x) for x in p.invalid]}
                     for k, p in enumerate(profiles)],
        'hypotheses': [check_strict_self_map(psi, phi).to_dict(),
                       check_bounded_derivatives(psi, phi).to_dict()],
    }
    _emit(profile_csv(profiles), args.out)
    text = _dump(reports)
    if args.report:
        atomic_write(args.report, text)
    elif args.out not in (None, '-'):
        sys.stdout.write(text)
    return 0


def load_scenarios(path: str | None) -> list:
    """Parse a JSON list of scenario objects; None loads the bundled file."""
    try:
        if path is None:
            text = resources.files('wcolab').joinpath('data', BUNDLED_SCENARIOS).read_text('utf-8')
        else:
            with open(path, encoding='utf-8') as fh:
                text = fh.read()
    except OSError as exc:
        raise CLIError('cannot read scenario file %s: %s' % (path, exc.strerror or exc)) from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CLIError('malformed scenario file: %s' % exc) from None
    if not isinstance(data, list):
        raise CLIError('scenario file must hold a top-level list')
    out = []
    for k, entry in enumerate(data):
        try:
            out.append(Scenario.from_dict(entry))
        except ValueError as exc:
            raise CLIError('scenario #%d: %s' % (k, exc)) from None
    ids = [s.id for s in out]
    if len(set(ids)) != len(ids):
        raise CLIError('scenario ids must be unique')
    return out


def _thread_cap() -> int:
    raw = os.environ.get('WCOLAB_THREADS')
    if raw is None or raw == '':
        return max(1, min(4, os.cpu_count() or 1))
    try:
        n = int(raw)
    except ValueError:
        n = 0
    if n < 1:
        raise CLIError('WCOLAB_THREADS must be a positive integer, got %r' % raw)
    return n


def _safe_name(sid: str) -> str:
    return re.sub(r'[^A-Za-z0-9_.-]', '_', sid) or 'scenario'


def run_batch(scenarios, out_dir: str, threads: int):
    """Run scenarios concurrently; returns reports sorted by id."""
    def job(sc):
        rep = run_scenario(sc)
        if rep.boundary is not None:
            path = os.path.join(out_dir, _safe_name(sc.id) + '.csv')
            atomic_write(path, boundary_csv(rep.boundary))
            rep.artifacts.append(path)
        return rep

    with concurrent.futures.ThreadPoolExecutor(max_workers=threads) as pool:
        reports = list(pool.map(job, scenarios))
    return sorted(reports, key=lambda r: r.scenario_id)


def cmd_verify(args) -> int:
    scenarios = load_scenarios(args.scenario_file)
    threads = _thread_cap()
    try:
        os.makedirs(args.out_dir, exist_ok=True)
    except OSError as exc:
        raise CLIError('cannot create %s: %s' % (args.out_dir, exc.strerror or exc)) from None
    reports = run_batch(scenarios, args.out_dir, threads)
    ok = all(r.passed for r in reports)
    doc = {'all_passed': ok, 'reports': [r.to_dict() for r in reports]}
    atomic_write(os.path.join(args.out_dir, 'report.json'), _dump(doc))
    for r in reports:
        line = '%s: %s' % (r.scenario_id, r.verdict)
        if not r.passed:
            line += ' (%s)' % (r.error or ', '.join(r.failures()) or 'no gating checks')
        print(line)
    return 0 if ok else 1


def cmd_selftest(args) -> int:
    from .selftest import run_selftest
    results = run_selftest()
    for name, passed, detail in results:
        print('%s %s %s' % ('PASS' if passed else 'FAIL', name, detail))
    return 0 if all(p for _, p, _ in results) else 1


# -- entry point -------------------------------------------------------------------

def _nonneg_int(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError('expected an integer, got %r' % text) from None
    if v < 0:
        raise argparse.ArgumentTypeError('expected a non-negative integer, got %d' % v)
    return v


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog='wcolab', description='Weighted composition operators on the Dirichlet space.')
    sub = p.add_subparsers(dest='command', required=True, parser_class=_Parser)

    m = sub.add_parser('matrix', help='operator matrix as CSV')
    m.add_argument('--psi', required=True)
    m.add_argument('--phi', required=True)
    m.add_argument('--n', type=_nonneg_int, required=True)
    m.add_argument('--out')
    m.set_defaults(func=cmd_matrix)

    nr = sub.add_parser('numrange', help='numerical range boundary as CSV')
    nr.add_argument('--psi', required=True)
    nr.add_argument('--phi', required=True)
    nr.add_argument('--n', type=_nonneg_int, required=True)
    nr.add_argument('--angles', type=_nonneg_int, default=720)
    nr.add_argument('--out')
    nr.set_defaults(func=cmd_numrange)

    k = sub.add_parser('kernel', help='reproducing kernel norms')
    k.add_argument('--w', required=True)
    k.add_argument('--n', type=_nonneg_int, default=512)
    k.set_defaults(func=cmd_kernel)

    c = sub.add_parser('compact-probe', help='radial compactness indicator')
    c.add_argument('--psi', required=True)
    c.add_argument('--phi', required=True)
    c.add_argument('--rmax-exp', type=_nonneg_int, default=8)
    c.add_argument('--dirs', type=_nonneg_int, default=1)
    c.add_argument('--n', type=_nonneg_int, default=256, help='series order for the checkers')
    c.add_argument('--out', help='profile CSV path (default stdout)')
    c.add_argument('--report', help='hypothesis report path (default stdout when --out is a file)')
    c.set_defaults(func=cmd_compact_probe)

    v = sub.add_parser('verify', help='run a scenario file')
    v.add_argument('scenario_file', nargs='?', default=None,
                   help='JSON list of scenarios (default: bundled file)')
    v.add_argument('--out-dir', default='wcolab-verify')
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser('selftest', help='run the built-in invariant checks')
    s.set_defaults(func=cmd_selftest)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except CLIError as exc:
        msg = str(exc)
    except (SymbolParseError, ValueError, ArithmeticError) as exc:
        msg = '%s: %s' % (type(exc).__name__, exc)
    sys.stderr.write('wcolab: error: %s\n' % ' '.join(msg.split()))
    return 2


if __name__ == '__main__':
    sys.exit(main())
