#!/usr/bin/env -S uv run
"""
Run the parameter sweeps behind the published thermal-entanglement and
teleportation plots, writing one CSV file per panel into an output directory.
"""

from dataclasses import dataclass
from pathlib import Path
import argparse
import sys

from dmchain.config import Config
from dmchain.error import DmchainError
from dmchain.output_format import get_row_format
from dmchain.sweep import SweepAxis, SweepPoint, SweepSpec, run_sweep, rows_to_records
from dmchain.util import StatusPrinter


@dataclass
class Args:
    out_dir: Path
    points: int
    workers: int
    only: list[str]
    config_path: str | None


@dataclass(frozen = True)
class Panel:
    name: str
    quantity: str
    axis1: str
    axis2: str
    fixed: SweepPoint


def panels(n: int) -> list[Panel]:
    return [
        Panel('channel_concurrence_J_D', 'channel_concurrence',
            f'J:-2:2:{n}', f'D:0:3:{n}', SweepPoint(T=0.5)),
        Panel('output_concurrence_Cin_T', 'C_out_oracle',
            f'C_in:0:1:{n}', f'T:0.05:2:{n}', SweepPoint(J=1.0, D=0.0)),
        Panel('output_concurrence_Cin_T_printed', 'C_out_paper',
            f'C_in:0:1:{n}', f'T:0.05:2:{n}', SweepPoint(J=1.0, D=0.0)),
        Panel('output_concurrence_J_D', 'C_out_oracle',
            f'J:-2:2:{n}', f'D:0:3:{n}', SweepPoint(T=0.1, C_in=1.0)),
        Panel('output_concurrence_Cin_J', 'C_out_oracle',
            f'C_in:0:1:{n}', f'J:-2:2:{n}', SweepPoint(D=1.0, T=0.1)),
        Panel('average_fidelity_J_T', 'F_avg_closed',
            f'J:-2:2:{n}', f'T:0.05:3:{n}', SweepPoint(D=0.0)),
        Panel('average_fidelity_J_D', 'F_avg_closed',
            f'J:-2:2:{n}', f'D:0:3:{n}', SweepPoint(T=0.1)),
    ]


def parse_args() -> Args:
    ap = argparse.ArgumentParser(
        description='write the CSV data behind each plot panel')
    ap.add_argument('out_dir', type=Path)
    ap.add_argument('--points', type=int, default=61,
        help='grid points per axis')
    ap.add_argument('--workers', type=int, default=1)
    ap.add_argument('--only', action='append', default=[],
        help='run only the panel with this name; may be repeated')
    ap.add_argument('--config', '-c', dest='config_path')
    args = ap.parse_args()
    return Args(**vars(args))


def main():
    args = parse_args()
    cfg = Config.load(args.config_path)
    fmt = get_row_format('csv', digits=cfg.output.digits)
    args.out_dir.mkdir(parents=True, exist_ok=True)

    with StatusPrinter() as printer:
        for panel in panels(args.points):
            if args.only and panel.name not in args.only:
                continue
            printer.print(' ** ' + panel.name)
            spec = SweepSpec(panel.quantity, SweepAxis.parse(panel.axis1),
                SweepAxis.parse(panel.axis2), panel.fixed, cfg.quadrature, cfg.scan)
            rows = run_sweep(spec, args.workers, printer)
            path = args.out_dir / (panel.name + '.csv')
            with open(path, 'w', encoding='utf-8', newline='') as f:
                f.write(fmt.emit(spec.columns, rows_to_records(spec, rows)))
            printer.print('wrote %s' % path)


if __name__ == '__main__':
    try:
        main()
    except DmchainError as e:
        print('error: %s' % e, file=sys.stderr)
        sys.exit(1)
