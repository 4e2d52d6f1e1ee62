"""
The two-qubit Heisenberg chain with a Dzyaloshinskii-Moriya interaction along
`z`:

    H = (J/2) [sx sx + sy sy + sz sz + D (sx sy - sy sx)]

Its closed-form spectrum, the thermal state `exp(-H/T) / Z`, the concurrence of
that state, and the temperature at which the concurrence vanishes.

All closed forms go through three Boltzmann weights,

    w_c = exp(-beta J / 2)          (|00>, |11>, counted twice)
    w_+ = exp(beta (J - delta) / 2) (|+>)
    w_- = exp(beta (J + delta) / 2) (|->)

with `delta = 2 J sqrt(1 + D^2)`, so that the partition function is
`Z = 2 w_c + w_+ + w_-`.  When an exponent exceeds `EXP_LIMIT` the weights are
rescaled by the largest one and only `log Z` is representable.
"""

from dataclasses import dataclass, replace
import math
from typing import Optional

import numpy as np
import scipy.optimize

from .config import ScanConfig
from .error import DmchainError
from .linalg import (SIGMA_X, SIGMA_Y, SIGMA_Z, kron, hermitian_eig,
    mat_exp_hermitian)

T_MIN = 1e-6
EXP_LIMIT = 700.0
# Energies within this distance (times `max(1, |J|)`) count as degenerate in
# `ground_state`.
DEGENERACY_TOL = 1e-12

BASIS_LABELS = ('11', '10', '01', '00')


@dataclass(frozen = True)
class ModelParams:
    J: float
    D: float
    T: float = 1.0

    def __post_init__(self):
        for name in ('J', 'D', 'T'):
            x = float(getattr(self, name))
            if not math.isfinite(x):
                raise DmchainError(f'{name} must be finite, got {x!r}')
            object.__setattr__(self, name, x)
        if self.T < 0:
            raise DmchainError(f'temperature must be positive, got T={self.T!r}')
        if self.T < T_MIN:
            object.__setattr__(self, 'T', T_MIN)

    @property
    def beta(self) -> float:
        return 1.0 / self.T

    @property
    def root(self) -> float:
        """`sqrt(1 + D^2)`"""
        return math.hypot(1.0, self.D)

    @property
    def delta(self) -> float:
        return 2.0 * self.J * self.root

    @property
    def theta_phase(self) -> float:
        return math.atan(self.D)

    def with_T(self, T: float) -> 'ModelParams':
        return replace(self, T=T)


@dataclass(frozen = True, eq = False)
class SpectrumEntry:
    label: str
    energy: float
    state: np.ndarray


@dataclass(frozen = True)
class BoltzmannWeights:
    corner: float
    plus: float
    minus: float
    # The true weights are these times `exp(log_shift)`.
    log_shift: float = 0.0

    @property
    def z_scaled(self) -> float:
        return 2.0 * self.corner + self.plus + self.minus

    @property
    def log_z(self) -> float:
        return math.log(self.z_scaled) + self.log_shift

    def normalized(self) -> 'BoltzmannWeights':
        """
        Rescale so the largest weight is 1.  Ratios of products of weights (as
        in the fidelity formulas) can then be formed without overflow.
        """
        m = max(self.corner, self.plus, self.minus)
        return BoltzmannWeights(self.corner / m, self.plus / m, self.minus / m,
            self.log_shift + math.log(m))


@dataclass(frozen = True, eq = False)
class ThermalState:
    params: ModelParams
    rho: np.ndarray
    log_z: float

    @property
    def z(self) -> float:
        try:
            return math.exp(self.log_z)
        except OverflowError:
            return math.inf


def hamiltonian(params: ModelParams) -> np.ndarray:
    xx = kron(SIGMA_X, SIGMA_X)
    yy = kron(SIGMA_Y, SIGMA_Y)
    zz = kron(SIGMA_Z, SIGMA_Z)
    xy = kron(SIGMA_X, SIGMA_Y)
    yx = kron(SIGMA_Y, SIGMA_X)
    return 0.5 * params.J * (xx + yy + zz + params.D * (xy - yx))

def _basis_state(label: str) -> np.ndarray:
    v = np.zeros(4, dtype=complex)
    v[BASIS_LABELS.index(label)] = 1.0
    return v

def spectrum_closed_form(params: ModelParams) -> list[SpectrumEntry]:
    """
    Eigenpairs of `hamiltonian(params)`:

        |00>, |11>                          energy  J/2
        |+> = (|01> + e^{i theta}|10>)/sqrt2  energy  J sqrt(1+D^2) - J/2
        |-> = (|01> - e^{i theta}|10>)/sqrt2  energy -J sqrt(1+D^2) - J/2

    with `theta = arctan(D)`.
    """
    J = params.J
    half = J / 2.0
    phase = np.exp(1j * params.theta_phase)
    s = 1.0 / math.sqrt(2.0)
    plus = (_basis_state('01') + phase * _basis_state('10')) * s
    minus = (_basis_state('01') - phase * _basis_state('10')) * s
    return [
        SpectrumEntry('E00', half, _basis_state('00')),
        SpectrumEntry('E11', half, _basis_state('11')),
        SpectrumEntry('Plus', J * params.root - half, plus),
        SpectrumEntry('Minus', -J * params.root - half, minus),
    ]

def boltzmann_weights(params: ModelParams) -> BoltzmannWeights:
    beta, J, delta = params.beta, params.J, params.delta
    exps = (-beta * J / 2.0, beta * (J - delta) / 2.0, beta * (J + delta) / 2.0)
    shift = max(exps)
    if shift <= EXP_LIMIT:
        shift = 0.0
    corner, plus, minus = (math.exp(e - shift) for e in exps)
    return BoltzmannWeights(corner, plus, minus, shift)

def thermal_state(params: ModelParams) -> ThermalState:
    """
    Closed-form thermal state in the standard basis.  Only the diagonal and the
    `(|10>, |01>)` coherence are nonzero:

        rho[11,11] = rho[00,00] = w_c / Z
        rho[10,10] = rho[01,01] = (w_+ + w_-) / 2Z
        rho[10,01] = e^{i theta} (w_+ - w_-) / 2Z
    """
    w = boltzmann_weights(params)
    z = w.z_scaled
    rho = np.zeros((4, 4), dtype=complex)
    rho[0, 0] = rho[3, 3] = w.corner / z
    rho[1, 1] = rho[2, 2] = (w.plus + w.minus) / (2.0 * z)
    rho[1, 2] = np.exp(1j * params.theta_phase) * (w.plus - w.minus) / (2.0 * z)
    rho[2, 1] = np.conjugate(rho[1, 2])
    return ThermalState(params, rho, w.log_z)

def gibbs_state(params: ModelParams) -> np.ndarray:
    """
    Thermal state computed directly as `exp(-beta H) / tr exp(-beta H)` from
    the numerical eigendecomposition of `H`.  The Hamiltonian is shifted by its
    lowest eigenvalue first, which keeps every exponent non-positive.
    """
    h = hamiltonian(params)
    e0 = hermitian_eig(h).eigenvalues[0]
    g = mat_exp_hermitian(h - e0 * np.eye(4), -params.beta)
    return g / np.trace(g).real

def ground_state(J: float, D: float) -> np.ndarray:
    """
    The `T -> 0` limit of the thermal state: the uniform mixture over the
    lowest-energy eigenspace.  For `J > 0` this is `|-><-|`; for `J < 0` it is
    `|+><+|` when `D != 0` and a three-fold mixture with `|00>` and `|11>` when
    `D == 0`.
    """
    entries = spectrum_closed_form(ModelParams(J, D))
    e_min = min(e.energy for e in entries)
    tol = DEGENERACY_TOL * max(1.0, abs(J))
    lowest = [e.state for e in entries if e.energy - e_min <= tol]
    rho = sum(np.outer(v, np.conjugate(v)) for v in lowest)
    return rho / len(lowest)

def channel_concurrence(params: ModelParams) -> float:
    """
    Concurrence of the thermal state,
    `C = (2/Z) max(|w_+ - w_-| / 2 - w_c, 0)`.
    """
    w = boltzmann_weights(params)
    return max(abs(w.plus - w.minus) - 2.0 * w.corner, 0.0) / w.z_scaled

def _log_abs_sinh(y: float) -> float:
    ay = abs(y)
    if ay == 0.0:
        return -math.inf
    return ay - math.log(2.0) + math.log(-math.expm1(-2.0 * ay))

def critical_residual(J: float, D: float, T: float) -> float:
    """
    `log(e^{J/T} |sinh(delta / 2T)|)`.  Positive exactly where the thermal
    state is entangled; its zero is the critical temperature.  Taking the
    absolute value covers both signs of `J`, since `delta` has the sign of `J`.
    """
    return J / T + _log_abs_sinh(J * math.hypot(1.0, D) / T)

def critical_temperature(J: float, D: float, scan: ScanConfig | None = None) -> Optional[float]:
    """
    Temperature above which `channel_concurrence` vanishes, or `None` if the
    state is unentangled over the whole scan range (e.g. `J < 0`, `D = 0`).
    """
    if J == 0:
        raise DmchainError('critical temperature is undefined for J = 0')
    scan = scan or ScanConfig()
    t_max = scan.critical_span * max(1.0, abs(J) * math.hypot(1.0, D))
    ts = np.geomspace(scan.t_min, t_max, scan.points)
    f = lambda t: critical_residual(J, D, t)
    r = [f(t) for t in ts]
    for k in range(len(ts) - 1):
        if r[k] > 0 and r[k + 1] <= 0:
            return scipy.optimize.bisect(f, ts[k], ts[k + 1], xtol=scan.xtol)
    return None
