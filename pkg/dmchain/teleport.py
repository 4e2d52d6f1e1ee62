"""
Entanglement teleportation of a two-qubit pure state through two copies of
the thermal state.  Each qubit of the input is teleported over its own copy
of the channel; a Bell measurement with outcome `E^i` is followed by the
Pauli correction `sigma_i`, which turns the protocol into the generalized
depolarizing channel

    rho_out = sum_ij p_ij (sigma_i (x) sigma_j) rho_in (sigma_i (x) sigma_j)

with `p_ij = tr(E^i rho) tr(E^j rho)`.  The outcomes and corrections are
paired as

    E^0 = |Psi-><Psi-|  <->  I
    E^1 = |Phi-><Phi-|  <->  sigma_x
    E^2 = |Phi+><Phi+|  <->  sigma_y
    E^3 = |Psi+><Psi+|  <->  sigma_z

since `(I (x) sigma_k)|Psi->` is exactly the resource state behind outcome
`E^k`.
"""

from dataclasses import dataclass
import math
from typing import Optional

import numpy as np
import scipy.optimize

from .concurrence import (DensityMatrix, check_density_matrix,
    wootters_concurrence, xstate_margin, pure_input_concurrence)
from .config import ScanConfig
from .error import DmchainError, ConvergenceError
from .linalg import PAULI_PAIRS, psd_sqrt, singular_values
from .model import ModelParams, ThermalState, boltzmann_weights, thermal_state

PROB_TOL = 1e-12
FIDELITY_CHECK_TOL = 1e-10
CLASSICAL_FIDELITY = 2.0 / 3.0

_S = 1.0 / math.sqrt(2.0)
# Basis order `{11, 10, 01, 00}`.
PSI_MINUS = np.array([0, -_S, _S, 0], dtype=complex)
PSI_PLUS = np.array([0, _S, _S, 0], dtype=complex)
PHI_MINUS = np.array([-_S, 0, 0, _S], dtype=complex)
PHI_PLUS = np.array([_S, 0, 0, _S], dtype=complex)


@dataclass(frozen = True)
class PureInput:
    """
    The input state `cos(theta/2)|10> + e^{i phi} sin(theta/2)|01>`.
    """
    theta: float
    phi: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.theta <= math.pi:
            raise DmchainError(f'theta must be in [0, pi], got {self.theta!r}')
        if not 0.0 <= self.phi <= 2.0 * math.pi:
            raise DmchainError(f'phi must be in [0, 2 pi], got {self.phi!r}')

    @classmethod
    def from_concurrence(cls, c_in: float, phi: float = 0.0) -> 'PureInput':
        if not 0.0 <= c_in <= 1.0:
            raise DmchainError(f'C_in must be in [0, 1], got {c_in!r}')
        return cls(math.asin(c_in), phi)

    @property
    def state(self) -> np.ndarray:
        return pure_input_states(np.array([self.theta]), np.array([self.phi]))[0]

    @property
    def concurrence(self) -> float:
        return pure_input_concurrence(self.theta, self.phi)

    def density(self) -> np.ndarray:
        v = self.state
        return np.outer(v, np.conjugate(v))


def pure_input_state(inp: PureInput) -> np.ndarray:
    return inp.state


def pure_input_states(theta: np.ndarray, phi: np.ndarray) -> np.ndarray:
    """Input state vectors for arrays of angles, shape `(n, 4)`."""
    theta = np.asarray(theta, dtype=float)
    states = np.zeros((theta.size, 4), dtype=complex)
    states[:, 1] = np.cos(theta / 2)
    states[:, 2] = np.exp(1j * np.asarray(phi, dtype=float)) * np.sin(theta / 2)
    return states


@dataclass(frozen = True, eq = False)
class BellBasis:
    # `projectors[i]` is `E^i`.
    projectors: np.ndarray
    states: tuple[np.ndarray, ...]

def bell_projectors() -> BellBasis:
    states = (PSI_MINUS, PHI_MINUS, PHI_PLUS, PSI_PLUS)
    projectors = np.array([np.outer(v, np.conjugate(v)) for v in states])
    return BellBasis(projectors, states)


@dataclass(frozen = True, eq = False)
class ChannelProbs:
    # `p[i, j]` is the probability of outcomes `E^i` and `E^j` on the two
    # copies of the channel.
    p: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.p, dtype=float)
        if p.shape != (4, 4):
            raise DmchainError(f'channel probabilities must be 4x4, got shape {p.shape}')
        if np.min(p) < -PROB_TOL:
            raise DmchainError('channel probabilities must be nonnegative')
        if abs(np.sum(p) - 1.0) > PROB_TOL:
            raise DmchainError('channel probabilities sum to %r, expected 1' % np.sum(p))
        object.__setattr__(self, 'p', p)

    @classmethod
    def from_single(cls, q) -> 'ChannelProbs':
        q = np.asarray(q, dtype=float)
        return cls(np.outer(q, q))

    @property
    def single(self) -> np.ndarray:
        """Marginal `tr(E^i rho)` of one channel copy."""
        return np.sum(self.p, axis=1)

def channel_probabilities(channel: ThermalState) -> ChannelProbs:
    """
    Closed-form Bell-outcome probabilities of the thermal channel:

        tr(E^0 rho) = e^{beta J/2} [cosh(beta delta/2) + cos(theta) sinh(beta delta/2)] / Z
        tr(E^3 rho) = e^{beta J/2} [cosh(beta delta/2) - cos(theta) sinh(beta delta/2)] / Z
        tr(E^1 rho) = tr(E^2 rho) = e^{-beta J/2} / Z
    """
    params = channel.params
    w = boltzmann_weights(params)
    z = w.z_scaled
    ch = w.plus + w.minus
    sh = (w.minus - w.plus) / params.root
    q = np.array([(ch + sh) / (2.0 * z), w.corner / z, w.corner / z, (ch - sh) / (2.0 * z)])
    return ChannelProbs.from_single(q)

def channel_probabilities_direct(channel: ThermalState) -> ChannelProbs:
    """Bell-outcome probabilities as explicit traces `tr(E^i rho)`."""
    e = bell_projectors().projectors
    q = np.real(np.einsum('iab,ba->i', e, channel.rho))
    return ChannelProbs.from_single(q)


def teleport_outputs(states: np.ndarray, probs: ChannelProbs) -> np.ndarray:
    """
    Output density matrices for a batch of input state vectors, shape
    `(n, 4, 4)`.
    """
    rho_in = np.einsum('na,nb->nab', states, np.conjugate(states))
    pairs = PAULI_PAIRS.reshape(16, 4, 4)
    return np.einsum('k,kab,nbc,kdc->nad', probs.p.reshape(16), pairs, rho_in,
        np.conjugate(pairs), optimize=True)

def teleport_output(inp: PureInput, probs: ChannelProbs) -> DensityMatrix:
    out = teleport_outputs(inp.state[np.newaxis, :], probs)[0]
    return DensityMatrix(0.5 * (out + np.conjugate(out).T))

def channel_for(params: ModelParams) -> ChannelProbs:
    return channel_probabilities(thermal_state(params))

def output_concurrence_oracle(params: ModelParams, inp: PureInput) -> float:
    """Concurrence of the teleported state, computed from the protocol itself."""
    return wootters_concurrence(teleport_output(inp, channel_for(params)))

def output_margin(params: ModelParams, inp: PureInput) -> float:
    """
    Unclipped X-state concurrence of the teleported state; positive exactly
    when the output is entangled.
    """
    return xstate_margin(teleport_output(inp, channel_for(params)))

def output_concurrence_paper(params: ModelParams, c_in: float) -> float:
    """
    The closed-form output concurrence in its published form,

        max(2 [C_in e^{beta J} sinh^2(beta delta/2) - 2 (1+D^2) cosh(beta delta/2)]
            / (Z^2 (1+D^2)), 0)

    evaluated through the Boltzmann weights, where
    `e^{beta J} sinh^2(beta delta/2) = (w_- - w_+)^2 / 4` and
    `2 cosh(beta delta/2) = (w_+ + w_-) w_c`.  On its positive branch this is
    exactly half of `output_concurrence_oracle`; the two vanish together.
    """
    if not 0.0 <= c_in <= 1.0:
        raise DmchainError(f'C_in must be in [0, 1], got {c_in!r}')
    w = boltzmann_weights(params).normalized()
    d2 = params.D * params.D
    z = w.z_scaled
    bracket = c_in * (w.minus - w.plus) ** 2 / 4.0 - (1.0 + d2) * (w.plus + w.minus) * w.corner
    return max(2.0 * bracket / (z * z * (1.0 + d2)), 0.0)


def fidelity_general(rho_in, rho_out) -> float:
    """
    `(tr sqrt(sqrt(rho_in) rho_out sqrt(rho_in)))^2`, evaluated as the squared
    sum of singular values of `sqrt(rho_out) sqrt(rho_in)`.
    """
    a = psd_sqrt(check_density_matrix(rho_in))
    b = psd_sqrt(check_density_matrix(rho_out))
    f = float(np.sum(singular_values(b @ a))) ** 2
    return min(1.0, max(0.0, f))

def fidelity(inp: PureInput, rho_out, check: bool = False) -> float:
    """
    Fidelity of `rho_out` with the pure input, `<psi| rho_out |psi>`.  With
    `check=True`, also evaluate the general mixed-state formula and raise
    `ConvergenceError` if the two disagree by more than `FIDELITY_CHECK_TOL`.
    """
    a = check_density_matrix(rho_out)
    psi = inp.state
    f = min(1.0, max(0.0, float(np.real(np.vdot(psi, a @ psi)))))
    if check:
        g = fidelity_general(inp.density(), a)
        if not abs(f - g) <= FIDELITY_CHECK_TOL:
            raise ConvergenceError(f'fidelity mismatch: shortcut {f!r}, general form {g!r}')
    return f

def teleport_fidelity(params: ModelParams, inp: PureInput) -> float:
    return fidelity(inp, teleport_output(inp, channel_for(params)))

def average_fidelity_closed(params: ModelParams) -> float:
    """
    Fidelity averaged over all pure inputs, in closed form:

        F_A = {2(1+D^2) + e^{2 beta J}[1 + 2D^2 + (3+2D^2) cosh(beta delta)]}
              / {6 (1+D^2) (1 + e^{beta J} cosh(beta delta/2))^2}

    Numerator and denominator are multiplied by `w_c^2` and written in the
    normalized Boltzmann weights, using `e^{beta J} = w_+ w_-` and
    `2 e^{beta J} cosh(beta delta) = w_+^2 + w_-^2`.
    """
    w = boltzmann_weights(params).normalized()
    d2 = params.D * params.D
    num = (2.0 * (1.0 + d2) * w.corner ** 2 + (1.0 + 2.0 * d2) * w.plus * w.minus
        + (3.0 + 2.0 * d2) * (w.plus ** 2 + w.minus ** 2) / 2.0)
    den = 6.0 * (1.0 + d2) * (w.corner + (w.plus + w.minus) / 2.0) ** 2
    return num / den

def average_fidelity_quadrature(params: ModelParams, n_theta: int = 32, n_phi: int = 32) -> float:
    """
    `(1/4 pi) int dphi int sin(theta) dtheta F(theta, phi)` with Gauss-Legendre
    nodes in `cos(theta)` and the trapezoid rule in `phi`.
    """
    if n_theta < 8 or n_phi < 8:
        raise DmchainError('quadrature needs at least 8 nodes per angle, '
            f'got n_theta={n_theta}, n_phi={n_phi}')
    u, wu = np.polynomial.legendre.leggauss(n_theta)
    phis = 2.0 * math.pi * np.arange(n_phi) / n_phi
    theta, phi = np.meshgrid(np.arccos(u), phis, indexing='ij')
    states = pure_input_states(theta.ravel(), phi.ravel())
    out = teleport_outputs(states, channel_for(params))
    f = np.real(np.einsum('na,nab,nb->n', np.conjugate(states), out, states))
    return float(np.sum(wu[:, np.newaxis] * f.reshape(n_theta, n_phi)) / (2.0 * n_phi))


def classical_threshold_temperature(J: float, D: float, scan: ScanConfig | None = None) -> Optional[float]:
    """
    Largest temperature at which the average fidelity still beats the
    classical limit 2/3, or `None` if it never does on the scan grid.
    """
    if J == 0:
        raise DmchainError('classical threshold temperature is undefined for J = 0')
    scan = scan or ScanConfig()
    t_max = scan.threshold_span * max(1.0, abs(J))
    ts = np.geomspace(scan.t_min, t_max, scan.points)
    g = lambda t: average_fidelity_closed(ModelParams(J, D, t)) - CLASSICAL_FIDELITY
    above = [k for k, t in enumerate(ts) if g(t) > 0]
    if not above:
        return None
    k = above[-1]
    if k == len(ts) - 1:
        return float(ts[-1])
    return scipy.optimize.bisect(g, ts[k], ts[k + 1], xtol=scan.xtol)

def input_concurrence_threshold(params: ModelParams) -> Optional[float]:
    """
    Smallest input concurrence whose teleported state is still entangled, or
    `None` if even a maximally entangled input comes out separable.
    """
    probs = channel_for(params)
    margin = lambda c: xstate_margin(teleport_output(PureInput.from_concurrence(c), probs))
    if margin(1.0) <= 0:
        return None
    if margin(0.0) >= 0:
        return 0.0
    return scipy.optimize.bisect(margin, 0.0, 1.0, xtol=1e-12)

def output_vanishing_coupling(
    D: float,
    T: float,
    c_in: float,
    J_lo: float,
    J_hi: float,
    xtol: float = 1e-10,
) -> Optional[float]:
    """
    Coupling in `[J_lo, J_hi]` at which the teleported state of an input with
    concurrence `c_in` switches between separable and entangled, or `None` if
    the output does not change character on that interval.
    """
    inp = PureInput.from_concurrence(c_in)
    margin = lambda J: output_margin(ModelParams(J, D, T), inp)
    if (margin(J_lo) > 0) == (margin(J_hi) > 0):
        return None
    return scipy.optimize.bisect(margin, J_lo, J_hi, xtol=xtol)
