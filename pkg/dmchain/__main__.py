import argparse
import sys

import numpy as np

from .concurrence import wootters_concurrence, xstate_concurrence
from .config import Config, QuadratureConfig
from .error import DmchainError, ConvergenceError
from .linalg import hermitian_eig
from .model import (BASIS_LABELS, hamiltonian, spectrum_closed_form,
    thermal_state, ground_state, channel_concurrence, critical_temperature)
from .output_format import FORMAT_NAMES, get_row_format
from .sweep import QUANTITIES, SweepAxis, SweepPoint, SweepSpec, run_sweep, rows_to_records
from .teleport import (channel_for, teleport_output, fidelity,
    output_concurrence_paper, average_fidelity_closed,
    average_fidelity_quadrature, classical_threshold_temperature,
    input_concurrence_threshold)
from .util import StatusPrinter
from .verify import REPORT_COLUMNS, run_verify


ARG_PARSE_EPILOG = '''
Model parameters: `--J` is the exchange coupling (J > 0 antiferromagnetic),
`--D` the Dzyaloshinskii-Moriya strength along z, `--T` the temperature (k = 1).
The input state of `teleport` is cos(theta/2)|10> + e^{i phi} sin(theta/2)|01>;
`--c-in` sets theta = arcsin(C_in) instead of `--theta`.

A sweep `AXIS` is `name:start:stop:count`, with `name` one of J, D, T, theta,
phi, C_in, e.g. `--axis1 J:-2:2:101 --axis2 D:0:3:61`.  Rows are emitted in
row-major order (axis1 outer).

Exit status: 0 on success, 1 on invalid input, 2 on numerical failure
(eigensolver non-convergence, or a failed `verify` check).
'''

class ArgumentParser(argparse.ArgumentParser):
    """`argparse.ArgumentParser` that reports usage errors with exit status 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f'{self.prog}: error: {message}\n')

def _add_point_args(p, T=True, angles=False):
    p.add_argument('--J', type=float, help='exchange coupling (default: 1)')
    p.add_argument('--D', type=float, help='DM strength (default: 0)')
    if T:
        p.add_argument('--T', type=float, help='temperature (default: 0.5)')
    if angles:
        p.add_argument('--theta', type=float, help='input angle theta (default: pi/2)')
        p.add_argument('--phi', type=float, help='input phase phi (default: 0)')
        p.add_argument('--c-in', type=float, dest='c_in',
            help='input concurrence; overrides --theta')

def _add_quadrature_arg(p):
    p.add_argument('--quadrature-n', type=int, metavar='N',
        help='quadrature nodes per angle (default: from config, 32)')

def parse_args(argv=None):
    common = ArgumentParser(add_help=False)
    common.add_argument('--config', '-c', dest='config_path',
        help='TOML config file with [scan], [quadrature], [verify] and [output] settings')
    common.add_argument('--format', choices=FORMAT_NAMES,
        help='output format (default: csv)')
    common.add_argument('--out', '-o', metavar='PATH',
        help='write output to PATH instead of standard output')
    common.add_argument('--quiet', '-q', action='store_true',
        help='suppress progress messages on stderr')

    ap = ArgumentParser(prog='dmchain', epilog=ARG_PARSE_EPILOG,
        formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = ap.add_subparsers(dest='cmd', required=True)

    spectrum = sub.add_parser('spectrum', parents=[common],
        help='closed-form eigenpairs with residuals and numerical eigenvalues')
    _add_point_args(spectrum, T=False)

    thermal = sub.add_parser('thermal', parents=[common],
        help='partition function and thermal density matrix')
    _add_point_args(thermal)
    thermal.add_argument('--ground-state', action='store_true',
        help='emit the exact T -> 0 limit instead')

    concurrence = sub.add_parser('concurrence', parents=[common],
        help='concurrence of the thermal state')
    _add_point_args(concurrence)

    critical = sub.add_parser('critical-temp', parents=[common],
        help='temperature above which the thermal state is separable')
    _add_point_args(critical, T=False)

    teleport = sub.add_parser('teleport', parents=[common],
        help='teleport one pure input through the thermal channel')
    _add_point_args(teleport, angles=True)

    fid = sub.add_parser('fidelity', parents=[common],
        help='average teleportation fidelity and classical threshold temperature')
    _add_point_args(fid)
    _add_quadrature_arg(fid)

    sweep = sub.add_parser('sweep', parents=[common],
        help='evaluate a quantity over a 1D or 2D parameter grid')
    sweep.add_argument('--quantity', required=True, choices=QUANTITIES)
    sweep.add_argument('--axis1', required=True, metavar='AXIS')
    sweep.add_argument('--axis2', metavar='AXIS')
    _add_point_args(sweep, angles=True)
    _add_quadrature_arg(sweep)
    sweep.add_argument('--workers', type=int,
        help='number of worker processes (default: from config or $DMCHAIN_WORKERS, 1)')

    verify = sub.add_parser('verify', parents=[common],
        help='check every closed form against its numerical oracle')
    verify.add_argument('--grid-density', type=int,
        help='grid points per axis (default: from config, 10)')
    _add_quadrature_arg(verify)

    return ap.parse_args(argv)


def _point(args) -> SweepPoint:
    """The evaluation point given by the flags, with `SweepPoint` defaults."""
    kwargs = {}
    for name in ('J', 'D', 'T', 'theta', 'phi'):
        v = getattr(args, name, None)
        if v is not None:
            kwargs[name] = v
    if getattr(args, 'c_in', None) is not None:
        kwargs['C_in'] = args.c_in
    point = SweepPoint(**kwargs)
    point.validate()
    return point

def _quadrature(args, cfg) -> QuadratureConfig:
    n = getattr(args, 'quadrature_n', None)
    if n is None:
        return cfg.quadrature
    return QuadratureConfig(n, n)

def _emit(args, cfg, columns, records):
    fmt = get_row_format(args.format or cfg.output.format, digits=cfg.output.digits)
    text = fmt.emit(columns, records)
    if args.out is None:
        sys.stdout.write(text)
    else:
        with open(args.out, 'w', encoding='utf-8', newline='') as f:
            f.write(text)


def do_spectrum(args, cfg):
    params = _point(args).params()
    h = hamiltonian(params)
    entries = sorted(spectrum_closed_form(params), key=lambda e: e.energy)
    numeric = hermitian_eig(h).eigenvalues
    records = []
    for e, lam in zip(entries, numeric):
        residual = float(np.max(np.abs(h @ e.state - e.energy * e.state)))
        records.append({'label': e.label, 'energy': e.energy, 'eigensolver': lam,
            'residual': residual})
    _emit(args, cfg, ['label', 'energy', 'eigensolver', 'residual'], records)

def do_thermal(args, cfg):
    point = _point(args)
    if args.ground_state:
        rho = ground_state(point.J, point.D)
        records = []
    else:
        ts = thermal_state(point.params())
        rho = ts.rho
        records = [{'entry': 'Z', 're': ts.z, 'im': 0.0},
            {'entry': 'log_Z', 're': ts.log_z, 'im': 0.0}]
    for i, a in enumerate(BASIS_LABELS):
        for j, b in enumerate(BASIS_LABELS):
            records.append({'entry': f'rho_{a}_{b}', 're': rho[i, j].real, 'im': rho[i, j].imag})
    _emit(args, cfg, ['entry', 're', 'im'], records)

def do_concurrence(args, cfg):
    params = _point(args).params()
    rho = thermal_state(params).rho
    record = {'J': params.J, 'D': params.D, 'T': params.T,
        'channel_concurrence': channel_concurrence(params),
        'xstate': xstate_concurrence(rho),
        'wootters': wootters_concurrence(rho)}
    _emit(args, cfg, list(record), [record])

def do_critical_temp(args, cfg):
    point = _point(args)
    record = {'J': point.J, 'D': point.D, 'Tc': critical_temperature(point.J, point.D, cfg.scan)}
    _emit(args, cfg, list(record), [record])

def do_teleport(args, cfg):
    point = _point(args)
    params = point.params()
    inp = point.pure_input()
    out = teleport_output(inp, channel_for(params))
    record = {'J': params.J, 'D': params.D, 'T': params.T,
        'theta': inp.theta, 'phi': inp.phi, 'C_in': inp.concurrence,
        'C_out_oracle': wootters_concurrence(out),
        'C_out_paper': output_concurrence_paper(params, inp.concurrence),
        'fidelity': fidelity(inp, out, check=True),
        'C_in_min': input_concurrence_threshold(params)}
    _emit(args, cfg, list(record), [record])

def do_fidelity(args, cfg):
    params = _point(args).params()
    q = _quadrature(args, cfg)
    record = {'J': params.J, 'D': params.D, 'T': params.T,
        'F_avg_closed': average_fidelity_closed(params),
        'F_avg_quadrature': average_fidelity_quadrature(params, q.n_theta, q.n_phi),
        'T_threshold': (classical_threshold_temperature(params.J, params.D, cfg.scan)
            if params.J != 0 else None)}
    _emit(args, cfg, list(record), [record])

def do_sweep(args, cfg, printer):
    spec = SweepSpec(
        quantity=args.quantity,
        axis1=SweepAxis.parse(args.axis1),
        axis2=SweepAxis.parse(args.axis2) if args.axis2 is not None else None,
        fixed=_point(args),
        quadrature=_quadrature(args, cfg),
        scan=cfg.scan,
    )
    workers = args.workers if args.workers is not None else cfg.workers
    if workers < 1:
        raise DmchainError(f'--workers must be at least 1, got {workers}')
    rows = run_sweep(spec, workers, printer)
    _emit(args, cfg, spec.columns, rows_to_records(spec, rows))

def do_verify(args, cfg, printer) -> int:
    if args.quadrature_n is not None:
        cfg = Config(cfg.config_path, cfg.workers, cfg.scan, _quadrature(args, cfg),
            cfg.verify, cfg.output)
    report = run_verify(cfg, args.grid_density, printer)
    _emit(args, cfg, REPORT_COLUMNS, report.records())
    failed = [r.name for r in report.results if r.status == 'FAIL']
    if failed:
        printer.print('verify: FAILED: ' + ', '.join(failed))
        return 2
    printer.print('verify: all checks passed')
    return 0


def main(argv=None) -> int:
    args = parse_args(argv)
    printer = StatusPrinter(quiet=args.quiet)

    try:
        cfg = Config.load(args.config_path)

        rc = 0
        if args.cmd == 'spectrum':
            do_spectrum(args, cfg)
        elif args.cmd == 'thermal':
            do_thermal(args, cfg)
        elif args.cmd == 'concurrence':
            do_concurrence(args, cfg)
        elif args.cmd == 'critical-temp':
            do_critical_temp(args, cfg)
        elif args.cmd == 'teleport':
            do_teleport(args, cfg)
        elif args.cmd == 'fidelity':
            do_fidelity(args, cfg)
        elif args.cmd == 'sweep':
            do_sweep(args, cfg, printer)
        elif args.cmd == 'verify':
            rc = do_verify(args, cfg, printer)
        else:
            raise ValueError('unknown command %r' % (args.cmd,))
    except ConvergenceError as e:
        print(f'dmchain: numerical failure: {e}', file=sys.stderr)
        return 2
    except DmchainError as e:
        print(f'dmchain: error: {e}', file=sys.stderr)
        return 1
    return rc

if __name__ == '__main__':
    sys.exit(main())
