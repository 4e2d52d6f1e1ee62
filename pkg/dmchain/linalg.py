"""
Dense complex linear algebra for the two-qubit problem: Pauli matrices,
Kronecker products, a cyclic Jacobi eigensolver for small Hermitian matrices,
and the functions built on it (`mat_exp_hermitian`, `psd_sqrt`,
`singular_values`).

Matrices are `numpy` arrays of `complex128`.  Two-qubit operators use the basis
order `{|11>, |10>, |01>, |00>}`, with qubit 1 as the left Kronecker factor, so
single-qubit operators are written in the order `(|1>, |0>)` and
`sigma_z = diag(1, -1)`.
"""

from dataclasses import dataclass
import math

import numpy as np

from .error import DmchainError, ConvergenceError

SIGMA_0 = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
# sigma_+ = (sigma_x + i sigma_y) / 2 raises |0> to |1>.
SIGMA_PLUS = np.array([[0, 1], [0, 0]], dtype=complex)
SIGMA_MINUS = np.array([[0, 0], [1, 0]], dtype=complex)

# Index order `(I, x, y, z)`; this is also the order of Pauli corrections in
# the teleportation channel.
PAULIS = (SIGMA_0, SIGMA_X, SIGMA_Y, SIGMA_Z)

HERMITIAN_TOL = 1e-12
JACOBI_MAX_SWEEPS = 100
JACOBI_TOL = 1e-14
# An off-diagonal entry at most `JACOBI_SKIP_RTOL * (|a_pp| + |a_qq|)`, or
# below `JACOBI_SKIP_FLOOR` times the stopping threshold, is set to zero
# instead of rotated.
JACOBI_SKIP_RTOL = np.finfo(float).eps
JACOBI_SKIP_FLOOR = 1e-3
# `psd_sqrt` rejects eigenvalues below `-PSD_REJECT_TOL` and clamps anything
# between that and `PSD_RANK_RTOL * max eigenvalue` to zero.
PSD_REJECT_TOL = 1e-8
PSD_RANK_RTOL = 1e-14

SUPPORTED_DIMS = (2, 4, 8)


def _as_cmatrix(m, what='matrix') -> np.ndarray:
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DmchainError(f'{what} must be square, got shape {a.shape}')
    if a.shape[0] not in SUPPORTED_DIMS:
        raise DmchainError(f'{what} must have dimension 2, 4 or 8, got {a.shape[0]}')
    if not np.all(np.isfinite(a)):
        raise DmchainError(f'{what} has non-finite entries')
    return a

def dagger(m: np.ndarray) -> np.ndarray:
    return np.conjugate(m).T

def is_hermitian(m: np.ndarray, tol: float = HERMITIAN_TOL) -> bool:
    """
    Check `m == m^dagger` entrywise within `tol`, scaled by the largest entry
    for matrices with entries above 1.
    """
    m = np.asarray(m)
    scale = max(1.0, float(np.max(np.abs(m)))) if m.size else 1.0
    return bool(np.max(np.abs(m - dagger(m)), initial=0.0) <= tol * scale)

def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """
    Kronecker product of two single-qubit operators:
    `kron(a, b)[2*i + k, 2*j + l] == a[i, j] * b[k, l]`.
    """
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.shape != (2, 2) or b.shape != (2, 2):
        raise DmchainError(f'kron expects two 2x2 matrices, got {a.shape} and {b.shape}')
    return np.kron(a, b)

# sigma_i (x) sigma_j, indexed `[i, j]`.
PAULI_PAIRS = np.array([[kron(a, b) for b in PAULIS] for a in PAULIS])


@dataclass(frozen = True, eq = False)
class EigResult:
    # Ascending.
    eigenvalues: np.ndarray
    # Orthonormal columns; column `k` belongs to `eigenvalues[k]`.
    eigenvectors: np.ndarray
    sweeps: int = 0

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return v @ np.diag(self.eigenvalues) @ dagger(v)


def _off_norm(a: np.ndarray) -> float:
    return float(np.linalg.norm(a - np.diag(np.diag(a))))

def _negligible(a: np.ndarray, p: int, q: int, floor: float) -> bool:
    g = abs(a[p, q])
    return g <= floor or g <= JACOBI_SKIP_RTOL * (abs(a[p, p].real) + abs(a[q, q].real))

def _rotate(a: np.ndarray, v: np.ndarray, p: int, q: int):
    """
    Apply the unitary rotation in the `(p, q)` plane that zeroes `a[p, q]`,
    updating `a` in place to `U^dagger a U` and `v` to `v U`.

    The phase of `a[p, q]` is absorbed first, leaving a real symmetric 2x2
    problem that is solved with the usual small-angle choice of `t = tan`.
    """
    apq = a[p, q]
    g = abs(apq)
    phase = apq / g
    tau = (a[q, q].real - a[p, p].real) / (2.0 * g)
    if tau == 0.0:
        t = 1.0
    else:
        t = math.copysign(1.0, tau) / (abs(tau) + math.hypot(1.0, tau))
    c = 1.0 / math.sqrt(1.0 + t * t)
    s = t * c
    ph = phase.conjugate()
    u = np.array([[c, s], [-s * ph, c * ph]])

    idx = [p, q]
    a[:, idx] = a[:, idx] @ u
    a[idx, :] = dagger(u) @ a[idx, :]
    a[p, q] = 0.0
    a[q, p] = 0.0
    a[p, p] = a[p, p].real
    a[q, q] = a[q, q].real
    v[:, idx] = v[:, idx] @ u

def hermitian_eig(
    h: np.ndarray,
    max_sweeps: int = JACOBI_MAX_SWEEPS,
    tol: float = JACOBI_TOL,
) -> EigResult:
    """
    Diagonalize the Hermitian matrix `h` with cyclic Jacobi sweeps.  Sweeps
    stop once the off-diagonal Frobenius norm is at most `tol` times the
    Frobenius norm of `h`.  Entries that are already exactly zero are skipped,
    so block-structured inputs (X states and their dilations) finish in one or
    two sweeps; entries negligible next to their diagonal pair are zeroed
    without a rotation.

    Raises `DmchainError` if `h` is not Hermitian within `HERMITIAN_TOL` and
    `ConvergenceError` if `max_sweeps` sweeps are not enough or the result is
    not finite.
    """
    a = _as_cmatrix(h)
    if not is_hermitian(a):
        raise DmchainError('hermitian_eig: input is not Hermitian '
            '(max asymmetry %.3g)' % np.max(np.abs(a - dagger(a))))
    a = 0.5 * (a + dagger(a))
    n = a.shape[0]
    v = np.eye(n, dtype=complex)
    threshold = tol * float(np.linalg.norm(a))
    floor = max(JACOBI_SKIP_FLOOR * threshold / n, np.finfo(float).tiny)

    sweeps = 0
    while _off_norm(a) > threshold:
        if sweeps == max_sweeps:
            raise ConvergenceError('hermitian_eig: no convergence after %d sweeps '
                '(off-diagonal norm %.3g, threshold %.3g)' % (
                    max_sweeps, _off_norm(a), threshold))
        for p in range(n - 1):
            for q in range(p + 1, n):
                if a[p, q] == 0:
                    continue
                if _negligible(a, p, q, floor):
                    a[p, q] = 0.0
                    a[q, p] = 0.0
                else:
                    _rotate(a, v, p, q)
        sweeps += 1

    eigenvalues = np.real(np.diag(a)).copy()
    if not (np.all(np.isfinite(eigenvalues)) and np.all(np.isfinite(v))):
        raise ConvergenceError('hermitian_eig: non-finite eigenpairs')
    order = np.argsort(eigenvalues, kind='stable')
    return EigResult(eigenvalues[order], v[:, order], sweeps)

def mat_exp_hermitian(h: np.ndarray, s: float) -> np.ndarray:
    """
    `exp(s * h)` for Hermitian `h` and real `s`, as `V diag(exp(s * lambda)) V^dagger`.
    """
    eig = hermitian_eig(h)
    v = eig.eigenvectors
    r = (v * np.exp(s * eig.eigenvalues)) @ dagger(v)
    return 0.5 * (r + dagger(r))

def sqrt_from_eig(eig: EigResult) -> np.ndarray:
    """
    PSD square root from an existing eigendecomposition.  See `psd_sqrt` for
    how small and negative eigenvalues are handled.
    """
    lam = eig.eigenvalues
    if lam[0] < -PSD_REJECT_TOL:
        raise DmchainError('psd_sqrt: matrix has eigenvalue %.3g < %g' % (
            lam[0], -PSD_REJECT_TOL))
    cutoff = PSD_RANK_RTOL * max(float(lam[-1]), 0.0)
    root = np.sqrt(np.where(lam > cutoff, lam, 0.0))
    v = eig.eigenvectors
    r = (v * root) @ dagger(v)
    return 0.5 * (r + dagger(r))

def psd_sqrt(m: np.ndarray) -> np.ndarray:
    """
    Principal square root of a Hermitian positive semidefinite matrix.
    Eigenvalues below `-PSD_REJECT_TOL` raise `DmchainError`; eigenvalues up to
    `PSD_RANK_RTOL` times the largest one (including small negative ones) are
    treated as exact zeros, so the root of a projector is the projector itself
    rather than the projector plus `sqrt(roundoff)` noise.
    """
    return sqrt_from_eig(hermitian_eig(m))

def singular_values(m: np.ndarray) -> np.ndarray:
    """
    Singular values of the square matrix `m`, in descending order, computed as
    the top half of the spectrum of the Hermitian dilation
    `[[0, m], [m^dagger, 0]]`, whose eigenvalues are `+-sigma_k`.
    """
    m = _as_cmatrix(m)
    n = m.shape[0]
    z = np.zeros((n, n), dtype=complex)
    dil = np.block([[z, m], [dagger(m), z]])
    lam = hermitian_eig(dil).eigenvalues
    return np.clip(lam[::-1][:n], 0.0, None)
