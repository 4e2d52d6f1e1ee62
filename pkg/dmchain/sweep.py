"""
Parameter sweeps: evaluate one quantity over a one- or two-dimensional grid
of model parameters and input angles, in row-major order (`axis1` outer,
`axis2` inner).
"""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
import itertools
import math
from typing import Iterator, Optional

import numpy as np

from .concurrence import pure_input_concurrence
from .config import QuadratureConfig, ScanConfig
from .error import DmchainError
from .model import ModelParams, channel_concurrence, critical_temperature
from .output_format import Record
from .teleport import (PureInput, average_fidelity_closed,
    average_fidelity_quadrature, classical_threshold_temperature,
    input_concurrence_threshold, output_concurrence_oracle,
    output_concurrence_paper, teleport_fidelity)
from .util import SILENT, StatusPrinter

AXIS_NAMES = ('J', 'D', 'T', 'theta', 'phi', 'C_in')

QUANTITIES = (
    'channel_concurrence',
    'C_out_oracle',
    'C_out_paper',
    'F_avg_closed',
    'F_avg_quadrature',
    'Tc',
    'T_threshold',
    'fidelity',
    'C_in_min',
)

# Closed interval each axis must stay inside; `T` is checked separately
# because it must be strictly positive.
_AXIS_BOUNDS = {
    'theta': (0.0, math.pi),
    'phi': (0.0, 2.0 * math.pi),
    'C_in': (0.0, 1.0),
}


@dataclass(frozen = True)
class SweepAxis:
    name: str
    start: float
    stop: float
    count: int

    def __post_init__(self):
        if self.name not in AXIS_NAMES:
            raise DmchainError(f'unknown sweep axis {self.name!r}; '
                f'expected one of {", ".join(AXIS_NAMES)}')
        if self.count < 2:
            raise DmchainError(f'axis {self.name}: count must be at least 2, got {self.count}')
        if not (math.isfinite(self.start) and math.isfinite(self.stop)):
            raise DmchainError(f'axis {self.name}: bounds must be finite')
        if not self.start < self.stop:
            raise DmchainError(f'axis {self.name}: start must be below stop, '
                f'got {self.start} >= {self.stop}')
        if self.name == 'T' and self.start <= 0:
            raise DmchainError(f'axis T: temperatures must be positive, got start={self.start}')
        if self.name in _AXIS_BOUNDS:
            lo, hi = _AXIS_BOUNDS[self.name]
            if self.start < lo or self.stop > hi:
                raise DmchainError(f'axis {self.name}: values must lie in [{lo:g}, {hi:g}]')

    @classmethod
    def parse(cls, s: str) -> 'SweepAxis':
        """Parse `name:start:stop:count`, e.g. `J:-2:2:101`."""
        parts = s.split(':')
        if len(parts) != 4:
            raise DmchainError(f'bad axis {s!r}: expected name:start:stop:count')
        name, start, stop, count = parts
        try:
            return cls(name, float(start), float(stop), int(count))
        except ValueError:
            raise DmchainError(f'bad axis {s!r}: start and stop must be numbers '
                'and count an integer')

    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.count)


@dataclass(frozen = True)
class SweepPoint:
    """
    One evaluation point.  When `C_in` is set it determines the input angle,
    `theta = arcsin(C_in)`, and `theta` is ignored.
    """
    J: float = 1.0
    D: float = 0.0
    T: float = 0.5
    theta: float = math.pi / 2
    phi: float = 0.0
    C_in: float | None = None

    def params(self) -> ModelParams:
        return ModelParams(self.J, self.D, self.T)

    def pure_input(self) -> PureInput:
        if self.C_in is not None:
            return PureInput.from_concurrence(self.C_in, self.phi)
        return PureInput(self.theta, self.phi)

    def c_in(self) -> float:
        if self.C_in is not None:
            return self.C_in
        return pure_input_concurrence(self.theta, self.phi)

    def validate(self):
        # Negative T raises in `ModelParams`; T below `T_MIN` is clamped there.
        self.params()
        self.pure_input()


@dataclass(frozen = True)
class SweepSpec:
    quantity: str
    axis1: SweepAxis
    axis2: SweepAxis | None = None
    fixed: SweepPoint = field(default_factory=SweepPoint)
    quadrature: QuadratureConfig = field(default_factory=QuadratureConfig)
    scan: ScanConfig = field(default_factory=ScanConfig)

    def __post_init__(self):
        if self.quantity not in QUANTITIES:
            raise DmchainError(f'unknown quantity {self.quantity!r}; '
                f'expected one of {", ".join(QUANTITIES)}')
        names = [a.name for a in self.axes]
        if len(set(names)) != len(names):
            raise DmchainError(f'both axes sweep {names[0]}')
        if 'theta' in names and ('C_in' in names or self.fixed.C_in is not None):
            raise DmchainError('theta and C_in both set the input state; sweep only one of them')
        self.fixed.validate()

    @property
    def axes(self) -> list[SweepAxis]:
        return [a for a in (self.axis1, self.axis2) if a is not None]

    @property
    def columns(self) -> list[str]:
        return [a.name for a in self.axes] + [self.quantity]

    def points(self) -> Iterator[tuple[tuple[tuple[str, float], ...], SweepPoint]]:
        """Yield `(axis values, point)` pairs in row-major order."""
        axes = self.axes
        for values in itertools.product(*(a.values() for a in axes)):
            coords = tuple((a.name, float(v)) for a, v in zip(axes, values))
            yield coords, replace(self.fixed, **dict(coords))


@dataclass(frozen = True)
class SweepRow:
    axes: tuple[tuple[str, float], ...]
    # `None` when the quantity has no value at this point, e.g. no critical
    # temperature.
    value: float | None

    def to_record(self, quantity: str) -> Record:
        r = dict(self.axes)
        r[quantity] = self.value
        return r

def rows_to_records(spec: SweepSpec, rows: list[SweepRow]) -> list[Record]:
    return [row.to_record(spec.quantity) for row in rows]

def rows_from_records(columns: list[str], records: list[Record]) -> list[SweepRow]:
    """Rebuild sweep rows from parsed output; the last column is the quantity."""
    *axis_names, quantity = columns
    return [SweepRow(tuple((n, r[n]) for n in axis_names), r[quantity]) for r in records]


def evaluate(
    quantity: str,
    point: SweepPoint,
    quadrature: QuadratureConfig | None = None,
    scan: ScanConfig | None = None,
) -> Optional[float]:
    quadrature = quadrature or QuadratureConfig()
    match quantity:
        case 'channel_concurrence':
            return channel_concurrence(point.params())
        case 'C_out_oracle':
            return output_concurrence_oracle(point.params(), point.pure_input())
        case 'C_out_paper':
            return output_concurrence_paper(point.params(), point.c_in())
        case 'F_avg_closed':
            return average_fidelity_closed(point.params())
        case 'F_avg_quadrature':
            return average_fidelity_quadrature(point.params(),
                quadrature.n_theta, quadrature.n_phi)
        # Both temperatures are undefined on the J = 0 line of a J axis.
        case 'Tc':
            return critical_temperature(point.J, point.D, scan) if point.J != 0 else None
        case 'T_threshold':
            return (classical_threshold_temperature(point.J, point.D, scan)
                if point.J != 0 else None)
        case 'fidelity':
            return teleport_fidelity(point.params(), point.pure_input())
        case 'C_in_min':
            return input_concurrence_threshold(point.params())
        case x:
            raise DmchainError(f'unknown quantity {x!r}')

def _evaluate_cell(task) -> Optional[float]:
    quantity, point, quadrature, scan = task
    value = evaluate(quantity, point, quadrature, scan)
    return None if value is None else float(value)

def run_sweep(spec: SweepSpec, workers: int = 1, printer: StatusPrinter = SILENT) -> list[SweepRow]:
    """
    Evaluate `spec` on every grid cell.  With `workers > 1` cells are spread
    over a process pool; `Executor.map` keeps results in row-major order, so
    the output is identical either way.
    """
    cells = list(spec.points())
    tasks = [(spec.quantity, point, spec.quadrature, spec.scan) for _, point in cells]
    printer.print('sweep: %d cells of %s, %d worker(s)' % (len(cells), spec.quantity, workers))
    if workers > 1:
        chunksize = max(1, len(tasks) // (4 * workers))
        with ProcessPoolExecutor(max_workers=workers) as pool:
            values = list(pool.map(_evaluate_cell, tasks, chunksize=chunksize))
    else:
        values = [_evaluate_cell(t) for t in tasks]
    printer.increment(len(cells))
    printer.print('sweep: done')
    return [SweepRow(coords, v) for (coords, _), v in zip(cells, values)]
