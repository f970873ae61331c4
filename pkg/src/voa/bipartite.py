"""Two-party quantities: spin flip, Wootters concurrence, generalized concurrence."""

import numpy as np

from . import numkit
from .qstate import DensityMatrix, Ket, StateError

PAULI_Y = np.array([[0, -1j], [1j, 0]])
# sigma_y (x) sigma_y is real: anti-diagonal (-1, 1, 1, -1)
YY = np.kron(PAULI_Y, PAULI_Y).real.astype(np.complex128)


class SpinFlipped(DensityMatrix):
    """The tilde companion (sigma_y x sigma_y) rho* (sigma_y x sigma_y) of a two-qubit state."""


def _two_qubit_matrix(rho) -> np.ndarray:
    if isinstance(rho, DensityMatrix):
        if rho.dims != (2, 2):
            raise StateError(f"expected a two-qubit state, got dims {rho.dims}")
        return rho.mat
    m = numkit.as_cmatrix(rho)
    if m.shape != (4, 4):
        raise StateError(f"expected a 4x4 matrix, got {m.shape}")
    return m


def spin_flip_matrix(rho) -> np.ndarray:
    m = _two_qubit_matrix(rho)
    return YY @ m.conj() @ YY


def spin_flip(rho) -> SpinFlipped:
    m = _two_qubit_matrix(rho)
    tr = float(np.real(np.trace(m)))
    return SpinFlipped((2, 2), YY @ m.conj() @ YY, trace=tr)


def _two_qubit_amps(k) -> np.ndarray:
    if isinstance(k, Ket):
        if k.dims != (2, 2):
            raise StateError(f"expected a two-qubit ket, got dims {k.dims}")
        return k.amps
    a = np.asarray(k, dtype=np.complex128).reshape(-1)
    if a.size != 4:
        raise StateError("expected four amplitudes")
    return a


def concurrence_pure(k) -> float:
    """2|a00 a11 - a01 a10|; scales with the squared norm for subnormalized kets."""
    a = _two_qubit_amps(k)
    return float(2 * abs(a[0] * a[3] - a[1] * a[2]))


def wootters_spectrum(rho) -> np.ndarray:
    """Descending square roots of the eigenvalues of sqrt(rho) rho~ sqrt(rho).

    Computed as singular values of sqrt(rho) sqrt(rho~), with sqrt(rho~) = YY sqrt(rho)* YY.
    """
    m = _two_qubit_matrix(rho)
    root = numkit.sqrtm_psd(m)
    return np.linalg.svd(root @ (YY @ root.conj() @ YY), compute_uv=False)


def concurrence_mixed(rho) -> float:
    lam = wootters_spectrum(rho)
    return float(max(0.0, lam[0] - lam[1] - lam[2] - lam[3]))


def gen_concurrence_pure(k) -> float:
    """d (prod of Schmidt numbers)^(1/d) for a ket on C^d x C^d."""
    if not isinstance(k, Ket):
        raise TypeError("gen_concurrence_pure expects a Ket")
    if k.arity != 2 or k.dims[0] != k.dims[1] or k.dims[0] < 2:
        raise StateError(f"expected a square bipartition d x d with d >= 2, got {k.dims}")
    d = k.dims[0]
    a = k.amps.reshape(d, d)
    lam = np.clip(np.linalg.eigvalsh(a.conj().T @ a), 0.0, None)
    return float(d * np.prod(lam) ** (1.0 / d))


def gen_concurrence_batch(rows: np.ndarray, d: int) -> np.ndarray:
    """Generalized concurrence of each row of ``rows`` (shape (m, d*d)), unnormalized rows allowed.

    Returns d |det A|^(2/d), which equals the eigenvalue-product form and is
    homogeneous of degree 2 in the amplitudes.
    """
    a = rows.reshape(-1, d, d)
    sv = np.linalg.svd(a, compute_uv=False)
    return d * np.prod(sv * sv, axis=1) ** (1.0 / d)


def concurrence_batch(rows: np.ndarray) -> np.ndarray:
    """Pure-state concurrence of each row (shape (m, 4)); degree 2 in the amplitudes."""
    return 2 * np.abs(rows[:, 0] * rows[:, 3] - rows[:, 1] * rows[:, 2])
