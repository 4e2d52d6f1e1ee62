"""
Cross-checks of every closed form against an independent numerical oracle,
plus regression lines for published values, collected into one report.

Each check is a function decorated with `@check(kind, tolerance)`.  Kinds:

  - `oracle`: closed form vs brute-force computation over the parameter grid.
  - `regression`: a single published value or qualitative statement.
  - `deviation`: a known disagreement that is reported rather than failed.

A check returns a `CheckOutcome`; unless it sets `ok` explicitly, it passes
when `max_error <= tolerance`.
"""

from dataclasses import dataclass, field
import functools
import itertools
import math
from typing import Callable

import numpy as np
import scipy.special

from .concurrence import X_FORBIDDEN, wootters_concurrence, xstate_concurrence
from .config import Config, VerifyConfig
from .error import DmchainError
from .linalg import hermitian_eig, mat_exp_hermitian, dagger
from .model import (ModelParams, hamiltonian, spectrum_closed_form,
    thermal_state, gibbs_state, channel_concurrence, critical_temperature)
from .output_format import Record
from .teleport import (PureInput, CLASSICAL_FIDELITY, channel_probabilities,
    channel_probabilities_direct, average_fidelity_closed,
    average_fidelity_quadrature, classical_threshold_temperature,
    output_concurrence_oracle, output_concurrence_paper, teleport_fidelity,
    output_vanishing_coupling)
from .util import SILENT, StatusPrinter

REPORT_COLUMNS = ['check', 'kind', 'points', 'max_error', 'tolerance', 'status', 'note']

# Input concurrences used when comparing output-concurrence formulas.
OUTPUT_C_IN = (0.5, 1.0)
# Values below this count as zero when comparing zero regions.
ZERO_TOL = 1e-12
# Zero-region mismatches where both values are below this are boundary cells.
BOUNDARY_TOL = 1e-6

T_C_ISOTROPIC = 2.0 / math.log(3.0)
T_THRESHOLD_ISOTROPIC = 2.0 / math.log(11.0)


@dataclass(frozen = True)
class CheckOutcome:
    points: int
    max_error: float
    ok: bool | None = None
    note: str = ''

@dataclass(frozen = True)
class CheckResult:
    name: str
    kind: str
    points: int
    max_error: float
    tolerance: float
    status: str
    note: str = ''

    def to_record(self) -> Record:
        return {
            'check': self.name,
            'kind': self.kind,
            'points': self.points,
            'max_error': self.max_error,
            'tolerance': self.tolerance,
            'status': self.status,
            'note': self.note,
        }

@dataclass(frozen = True)
class VerifyReport:
    results: list[CheckResult]

    @property
    def passed(self) -> bool:
        return all(r.status != 'FAIL' for r in self.results)

    def records(self) -> list[Record]:
        return [r.to_record() for r in self.results]

    def result(self, name: str) -> CheckResult:
        for r in self.results:
            if r.name == name:
                return r
        raise KeyError(name)


@dataclass
class VerifyContext:
    grid: list[ModelParams]
    quadrature_grid: list[ModelParams]
    cfg: Config = field(default_factory=Config)

    @functools.cached_property
    def thermal_concurrences(self) -> list[tuple[float, float, float]]:
        """`(closed form, X-state formula, Wootters)` for each grid point."""
        out = []
        for p in self.grid:
            rho = thermal_state(p).rho
            out.append((channel_concurrence(p), xstate_concurrence(rho), wootters_concurrence(rho)))
        return out

    @functools.cached_property
    def output_concurrences(self) -> list[tuple[float, float]]:
        """`(printed formula, protocol oracle)` for each grid point and input."""
        out = []
        for p in self.grid:
            for c in OUTPUT_C_IN:
                out.append((output_concurrence_paper(p, c),
                    output_concurrence_oracle(p, PureInput.from_concurrence(c))))
        return out

def parameter_grid(vcfg: VerifyConfig, density: int) -> list[ModelParams]:
    """`density` points per axis over the configured ranges, skipping `J = 0`."""
    Js = [J for J in np.linspace(*vcfg.J_range, density) if abs(J) > 1e-12]
    Ds = np.linspace(*vcfg.D_range, density)
    Ts = np.linspace(*vcfg.T_range, density)
    return [ModelParams(J, D, T) for J, D, T in itertools.product(Js, Ds, Ts)]


_CHECKS: list[tuple[str, str, float, Callable[[VerifyContext], CheckOutcome]]] = []

def check(kind: str, tolerance: float):
    assert kind in ('oracle', 'regression', 'deviation'), kind
    def decorator(f):
        _CHECKS.append((f.__name__, kind, tolerance, f))
        return f
    return decorator

def _status(kind: str, tolerance: float, outcome: CheckOutcome) -> str:
    ok = outcome.ok
    if ok is None:
        ok = outcome.max_error <= tolerance
    if not ok:
        return 'FAIL'
    return 'deviation' if kind == 'deviation' else 'pass'


@check('oracle', 1e-12)
def partition_function_spectrum(ctx: VerifyContext) -> CheckOutcome:
    err = 0.0
    for p in ctx.grid:
        energies = np.array([e.energy for e in spectrum_closed_form(p)])
        log_z = scipy.special.logsumexp(-p.beta * energies)
        err = max(err, abs(math.expm1(thermal_state(p).log_z - log_z)))
    return CheckOutcome(len(ctx.grid), err)

@check('oracle', 1e-12)
def partition_function_gibbs(ctx: VerifyContext) -> CheckOutcome:
    err = 0.0
    for p in ctx.grid:
        h = hamiltonian(p)
        e0 = hermitian_eig(h).eigenvalues[0]
        tr = np.trace(mat_exp_hermitian(h - e0 * np.eye(4), -p.beta)).real
        log_z = -p.beta * e0 + math.log(tr)
        err = max(err, abs(math.expm1(thermal_state(p).log_z - log_z)))
    return CheckOutcome(len(ctx.grid), err)

@check('oracle', 1e-10)
def spectrum_eigen_residual(ctx: VerifyContext) -> CheckOutcome:
    err = 0.0
    for p in ctx.grid:
        h = hamiltonian(p)
        for e in spectrum_closed_form(p):
            err = max(err, float(np.max(np.abs(h @ e.state - e.energy * e.state))))
    return CheckOutcome(len(ctx.grid), err)

@check('oracle', 1e-10)
def spectrum_vs_eigensolver(ctx: VerifyContext) -> CheckOutcome:
    err = 0.0
    for p in ctx.grid:
        closed = np.sort([e.energy for e in spectrum_closed_form(p)])
        numeric = hermitian_eig(hamiltonian(p)).eigenvalues
        err = max(err, float(np.max(np.abs(closed - numeric))))
    return CheckOutcome(len(ctx.grid), err)

@check('oracle', 1e-10)
def thermal_state_gibbs(ctx: VerifyContext) -> CheckOutcome:
    err = 0.0
    for p in ctx.grid:
        err = max(err, float(np.max(np.abs(thermal_state(p).rho - gibbs_state(p)))))
    return CheckOutcome(len(ctx.grid), err)

@check('oracle', 1e-12)
def thermal_state_invariants(ctx: VerifyContext) -> CheckOutcome:
    err = 0.0
    for p in ctx.grid:
        rho = thermal_state(p).rho
        err = max(err,
            abs(np.trace(rho) - 1.0),
            float(np.max(np.abs(rho - dagger(rho)))),
            max(abs(rho[i, j]) for i, j in X_FORBIDDEN),
            -hermitian_eig(rho).eigenvalues[0])
    return CheckOutcome(len(ctx.grid), err)

@check('oracle', 1e-10)
def channel_concurrence_wootters(ctx: VerifyContext) -> CheckOutcome:
    err = max(abs(closed - w) for closed, _, w in ctx.thermal_concurrences)
    return CheckOutcome(len(ctx.grid), err)

@check('oracle', 1e-10)
def xstate_concurrence_wootters(ctx: VerifyContext) -> CheckOutcome:
    err = max(abs(x - w) for _, x, w in ctx.thermal_concurrences)
    return CheckOutcome(len(ctx.grid), err)

@check('oracle', 1e-12)
def channel_probabilities_trace(ctx: VerifyContext) -> CheckOutcome:
    err = 0.0
    for p in ctx.grid:
        ts = thermal_state(p)
        closed = channel_probabilities(ts).p
        direct = channel_probabilities_direct(ts).p
        err = max(err, float(np.max(np.abs(closed - direct))), abs(np.sum(closed) - 1.0))
    return CheckOutcome(len(ctx.grid), err)

@check('oracle', 1e-8)
def average_fidelity_quadrature_closed(ctx: VerifyContext) -> CheckOutcome:
    q = ctx.cfg.quadrature
    err = 0.0
    for p in ctx.quadrature_grid:
        quad = average_fidelity_quadrature(p, q.n_theta, q.n_phi)
        err = max(err, abs(quad - average_fidelity_closed(p)))
    return CheckOutcome(len(ctx.quadrature_grid), err,
        note=f'n_theta={q.n_theta} n_phi={q.n_phi}')

@check('oracle', 0)
def output_concurrence_zero_region(ctx: VerifyContext) -> CheckOutcome:
    """
    The printed output-concurrence formula and the protocol oracle must vanish
    on the same parameter region.  Disagreements where both values are tiny sit
    on the boundary itself and are not counted.
    """
    mismatches = 0
    boundary = 0
    for printed, oracle in ctx.output_concurrences:
        if (printed > ZERO_TOL) != (oracle > ZERO_TOL):
            if max(printed, oracle) < BOUNDARY_TOL:
                boundary += 1
            else:
                mismatches += 1
    return CheckOutcome(len(ctx.output_concurrences), mismatches,
        note=f'{boundary} boundary cell(s)')

@check('deviation', math.inf)
def output_concurrence_printed_formula(ctx: VerifyContext) -> CheckOutcome:
    """
    Size of the disagreement between the printed formula and the oracle.  The
    ratio on the positive branch is expected to be exactly 2.
    """
    pairs = ctx.output_concurrences
    err = max(abs(printed - oracle) for printed, oracle in pairs)
    ratios = [oracle / printed for printed, oracle in pairs if printed > BOUNDARY_TOL]
    if ratios:
        note = 'oracle/printed ratio in [%.9g, %.9g] over %d positive cells' % (
            min(ratios), max(ratios), len(ratios))
    else:
        note = 'no positive cells'
    return CheckOutcome(len(pairs), err, note=note)

@check('deviation', math.inf)
def printed_formula_low_temperature(ctx: VerifyContext) -> CheckOutcome:
    p = ModelParams(1.0, 0.0, 0.01)
    printed = output_concurrence_paper(p, 1.0)
    oracle = output_concurrence_oracle(p, PureInput.from_concurrence(1.0))
    ok = abs(printed - 0.5) <= 1e-3 and abs(oracle - 1.0) <= 1e-4
    return CheckOutcome(1, abs(printed - oracle), ok,
        note='J=1 D=0 T=0.01 C_in=1: printed=%.6f oracle=%.6f' % (printed, oracle))

@check('oracle', 1e-8)
def output_affinity(ctx: VerifyContext) -> CheckOutcome:
    p = ModelParams(1.0, 0.5, 0.4)
    c_in = np.linspace(0.05, 1.0, 50)
    c_out = np.array([output_concurrence_oracle(p, PureInput.from_concurrence(c)) for c in c_in])
    slope, intercept = np.polyfit(c_in, c_out, 1)
    err = float(np.max(np.abs(slope * c_in + intercept - c_out)))
    return CheckOutcome(len(c_in), err,
        note='J=1 D=0.5 T=0.4: C_out = %.9g C_in %+.9g' % (slope, intercept))

@check('regression', 1e-6)
def critical_temperature_isotropic(ctx: VerifyContext) -> CheckOutcome:
    tc = critical_temperature(1.0, 0.0, ctx.cfg.scan)
    err = math.inf if tc is None else abs(tc - T_C_ISOTROPIC)
    return CheckOutcome(1, err, note=f'T_c(J=1, D=0) = {tc!r}, 2/ln3 = {T_C_ISOTROPIC!r}')

@check('regression', 0)
def critical_temperature_sign_change(ctx: VerifyContext) -> CheckOutcome:
    """The critical temperature must be where the concurrence actually vanishes."""
    J, D = -1.0, 2.0
    tc = critical_temperature(J, D, ctx.cfg.scan)
    if tc is None:
        return CheckOutcome(1, 1.0, note=f'no critical temperature for J={J} D={D}')
    below = channel_concurrence(ModelParams(J, D, tc * (1 - 1e-4)))
    above = channel_concurrence(ModelParams(J, D, tc * (1 + 1e-4)))
    ok = below > 0 and above == 0
    return CheckOutcome(2, 0.0 if ok else 1.0, ok, note=f'T_c(J={J}, D={D}) = {tc:.9g}')

@check('regression', 0)
def ferromagnetic_null_concurrence(ctx: VerifyContext) -> CheckOutcome:
    Ts = np.linspace(0.05, 5.0, 100)
    err = max(channel_concurrence(ModelParams(-1.0, 0.0, T)) for T in Ts)
    return CheckOutcome(len(Ts), err, note='J=-1 D=0')

@check('regression', 2e-3)
def channel_concurrence_spot_value(ctx: VerifyContext) -> CheckOutcome:
    c = channel_concurrence(ModelParams(-0.5, 1.0, 0.1))
    return CheckOutcome(1, abs(c - 0.597), note=f'C(J=-0.5, D=1, T=0.1) = {c:.6f}')

@check('regression', 1e-9)
def classical_threshold_fidelity(ctx: VerifyContext) -> CheckOutcome:
    f = average_fidelity_closed(ModelParams(1.0, 0.0, T_THRESHOLD_ISOTROPIC))
    return CheckOutcome(1, abs(f - CLASSICAL_FIDELITY), note='J=1 D=0 T=2/ln11')

@check('regression', 1e-6)
def classical_threshold_isotropic(ctx: VerifyContext) -> CheckOutcome:
    t = classical_threshold_temperature(1.0, 0.0, ctx.cfg.scan)
    err = math.inf if t is None else abs(t - T_THRESHOLD_ISOTROPIC)
    return CheckOutcome(1, err, note=f'T_threshold(J=1, D=0) = {t!r}')

@check('regression', 0.01)
def large_dm_saturation(ctx: VerifyContext) -> CheckOutcome:
    err = max(abs(average_fidelity_closed(ModelParams(J, 100.0, 0.5)) - CLASSICAL_FIDELITY)
        for J in (1.0, -1.0))
    return CheckOutcome(2, err, note='J=+-1 D=100 T=0.5')

@check('regression', 0)
def dm_activated_ferromagnet(ctx: VerifyContext) -> CheckOutcome:
    """
    Without the DM term a ferromagnetic channel never beats the classical
    limit; with it, it does at low temperature.
    """
    plain = classical_threshold_temperature(-1.0, 0.0, ctx.cfg.scan)
    witness = None
    for D in np.linspace(1.0, 3.0, 21):
        if average_fidelity_closed(ModelParams(-1.0, D, 0.1)) > CLASSICAL_FIDELITY:
            witness = float(D)
            break
    ok = plain is None and witness is not None
    note = f'threshold(J=-1, D=0) = {plain!r}; witness D = {witness!r} at T=0.1'
    return CheckOutcome(22, 0.0 if ok else 1.0, ok, note=note)

@check('regression', 1e-4)
def low_temperature_teleportation(ctx: VerifyContext) -> CheckOutcome:
    p = ModelParams(1.0, 0.0, 0.01)
    inp = PureInput(math.pi / 2)
    c = output_concurrence_oracle(p, inp)
    f = teleport_fidelity(p, inp)
    return CheckOutcome(2, max(abs(c - 1.0), abs(f - 1.0)),
        note=f'C_out = {c:.9f}, F = {f:.9f}')

@check('regression', 0.01)
def output_vanishing_coupling_ferromagnet(ctx: VerifyContext) -> CheckOutcome:
    """
    At T=0.1, D=1 a maximally entangled input is teleported with nonzero
    concurrence only for couplings J < -0.5.
    """
    J = output_vanishing_coupling(1.0, 0.1, 1.0, -1.0, -0.3)
    if J is None:
        return CheckOutcome(1, math.inf, False, note='no sign change on [-1, -0.3]')
    return CheckOutcome(1, abs(abs(J) - 0.5), abs(J) > 0.5, note=f'J* = {J:.9g}')


def run_verify(
    cfg: Config | None = None,
    grid_density: int | None = None,
    printer: StatusPrinter = SILENT,
) -> VerifyReport:
    cfg = cfg or Config()
    density = grid_density if grid_density is not None else cfg.verify.grid_density
    if density < 5:
        raise DmchainError(f'grid density must be at least 5, got {density}')
    ctx = VerifyContext(
        parameter_grid(cfg.verify, density),
        parameter_grid(cfg.verify, min(density, cfg.verify.quadrature_density)),
        cfg)
    printer.print('verify: %d grid points, %d for quadrature' % (
        len(ctx.grid), len(ctx.quadrature_grid)))

    results = []
    for name, kind, tolerance, f in _CHECKS:
        printer.print(' ** ' + name)
        outcome = f(ctx)
        status = _status(kind, tolerance, outcome)
        results.append(CheckResult(name, kind, outcome.points, float(outcome.max_error),
            tolerance, status, outcome.note))
        printer.increment()
        printer.print('    %s  max_error=%.3g  tolerance=%g' % (status, outcome.max_error, tolerance))
    return VerifyReport(results)
