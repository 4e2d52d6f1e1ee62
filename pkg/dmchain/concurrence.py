"""
Two-qubit entanglement: the Wootters concurrence of an arbitrary density
matrix, the closed form for X states, and the concurrence of the pure inputs
used for teleportation.
"""

from dataclasses import dataclass
import math

import numpy as np

from .error import DmchainError
from .linalg import (SIGMA_Y, kron, is_hermitian, hermitian_eig, sqrt_from_eig,
    singular_values)

DENSITY_TOL = 1e-12
EIGENVALUE_TOL = 1e-10
X_STATE_TOL = 1e-12

# Spin flip `sigma_y (x) sigma_y`; real in the standard basis.
SPIN_FLIP = kron(SIGMA_Y, SIGMA_Y)

# Entries that vanish in an X state, in basis order `{11, 10, 01, 00}`.
X_FORBIDDEN = ((0, 1), (0, 2), (1, 3), (2, 3), (1, 0), (2, 0), (3, 1), (3, 2))


def check_density_matrix(rho) -> np.ndarray:
    """
    Return `rho` as a 4x4 complex array after checking it is Hermitian with
    unit trace.  Positivity is checked by the operations that diagonalize it.
    """
    if isinstance(rho, DensityMatrix):
        return rho.rho
    a = np.asarray(rho, dtype=complex)
    if a.shape != (4, 4):
        raise DmchainError(f'two-qubit density matrix must be 4x4, got shape {a.shape}')
    if not np.all(np.isfinite(a)):
        raise DmchainError('density matrix has non-finite entries')
    if not is_hermitian(a, DENSITY_TOL):
        raise DmchainError('density matrix is not Hermitian')
    tr = np.trace(a)
    if abs(tr - 1.0) > DENSITY_TOL:
        raise DmchainError('density matrix has trace %r, expected 1' % (tr,))
    return a

@dataclass(frozen = True, eq = False)
class DensityMatrix:
    rho: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, 'rho', check_density_matrix(self.rho))

def is_x_state(rho, tol: float = X_STATE_TOL) -> bool:
    a = np.asarray(check_density_matrix(rho))
    return all(abs(a[i, j]) <= tol for i, j in X_FORBIDDEN)

def wootters_lambdas(rho) -> np.ndarray:
    """
    The decreasing square roots of the eigenvalues of `rho S rho* S`.

    These are the singular values of `sqrt(rho) S conj(sqrt(rho))`, whose
    product with its adjoint is the Hermitian matrix
    `sqrt(rho) S rho* S sqrt(rho)`.  Taking singular values directly avoids a
    square root of eigenvalues that sit at roundoff level.
    """
    a = check_density_matrix(rho)
    eig = hermitian_eig(a)
    if eig.eigenvalues[0] < -EIGENVALUE_TOL:
        raise DmchainError('density matrix has negative eigenvalue %.3g' % eig.eigenvalues[0])
    r = sqrt_from_eig(eig)
    return singular_values(r @ SPIN_FLIP @ np.conjugate(r))

def wootters_concurrence(rho) -> float:
    lam = wootters_lambdas(rho)
    return min(1.0, max(0.0, lam[0] - lam[1] - lam[2] - lam[3]))

def wootters_concurrence_max_form(rho) -> float:
    """`max(0, 2 max(lambda) - sum(lambda))`, equal to `wootters_concurrence`."""
    lam = wootters_lambdas(rho)
    return min(1.0, max(0.0, 2.0 * np.max(lam) - np.sum(lam)))

def xstate_margin(rho) -> float:
    """
    `2 max(|rho_23| - sqrt(rho_11 rho_44), |rho_14| - sqrt(rho_22 rho_33))`
    without the clip at zero (1-based indices in the standard basis).  The
    state is entangled exactly when this is positive.
    """
    a = check_density_matrix(rho)
    for i, j in X_FORBIDDEN:
        if abs(a[i, j]) > X_STATE_TOL:
            raise DmchainError('not an X state: entry (%d, %d) is %r' % (i + 1, j + 1, a[i, j]))
    d = a.diagonal().real
    inner = abs(a[1, 2]) - math.sqrt(max(d[0] * d[3], 0.0))
    outer = abs(a[0, 3]) - math.sqrt(max(d[1] * d[2], 0.0))
    return 2.0 * max(inner, outer)

def xstate_concurrence(rho) -> float:
    return min(1.0, max(0.0, xstate_margin(rho)))

def pure_input_concurrence(theta: float, phi: float = 0.0) -> float:
    """
    Concurrence `2 |sin(theta/2) cos(theta/2) e^{i phi}| = |sin(theta)|` of
    `cos(theta/2)|10> + e^{i phi} sin(theta/2)|01>`.
    """
    return abs(math.sin(theta))
