"""Dense complex linear algebra for the small matrices used in this package.

Matrices are plain ``numpy`` complex arrays. Everything here is a pure
function; nothing is cached.
"""

from dataclasses import dataclass
from typing import Sequence

import numpy as np

HERMITIAN_TOL = 1e-10
PSD_TOL = 1e-10
# eigenvalues below this fraction of the largest one are roundoff and treated as exact zeros;
# otherwise their square roots (~1e-8) leak into fidelities
ROUNDOFF_RTOL = 1e-14


class DimensionError(ValueError):
    """Operand shapes do not fit together."""


class NotPSDError(ValueError):
    """An operator expected to be positive semidefinite has a clearly negative eigenvalue."""


class NotHermitianError(ValueError):
    pass


@dataclass(frozen=True)
class HermEigResult:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def as_cmatrix(m) -> np.ndarray:
    """Validate ``m`` as a finite 2-D complex matrix and return it as complex128."""
    a = np.asarray(m, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] < 1 or a.shape[1] < 1:
        raise DimensionError(f"expected a non-empty 2-D matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    return a


def _square(m) -> np.ndarray:
    a = as_cmatrix(m)
    if a.shape[0] != a.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {a.shape}")
    return a


def kron(a, b) -> np.ndarray:
    return np.kron(as_cmatrix(a), as_cmatrix(b))


def partial_trace(m, dims: Sequence[int], keep: Sequence[int]) -> np.ndarray:
    """Trace out every subsystem not listed in ``keep``.

    Kept subsystems stay in their original relative order regardless of the
    order in which ``keep`` lists them.
    """
    a = _square(m)
    dims = [int(d) for d in dims]
    if any(d < 1 for d in dims) or int(np.prod(dims)) != a.shape[0]:
        raise DimensionError(f"dims {dims} do not match matrix side {a.shape[0]}")
    n = len(dims)
    keep = sorted(set(int(k) for k in keep))
    if not keep or keep[0] < 0 or keep[-1] >= n:
        raise DimensionError(f"invalid subsystem selection {keep} for {n} subsystems")
    if len(keep) == n:
        return a.copy()
    t = a.reshape(dims + dims)
    # row indices get letters 0..n-1, column indices n..2n-1; traced pairs share a letter
    letters = [chr(ord("a") + i) for i in range(2 * n)]
    rows = letters[:n]
    cols = [letters[n + i] if i in keep else letters[i] for i in range(n)]
    out = [rows[i] for i in keep] + [cols[i] for i in keep]
    t = np.einsum("".join(rows) + "".join(cols) + "->" + "".join(out), t)
    side = int(np.prod([dims[i] for i in keep]))
    return t.reshape(side, side)


def hermitian_part(m, tol: float = HERMITIAN_TOL) -> np.ndarray:
    a = _square(m)
    if np.max(np.abs(a - a.conj().T)) > tol:
        raise NotHermitianError("matrix is not Hermitian within tolerance")
    return (a + a.conj().T) / 2


def herm_eig(m) -> HermEigResult:
    """Eigen-decomposition of a Hermitian matrix, eigenvalues ascending.

    The input is symmetrized as (M + M^dagger)/2 before decomposition.
    """
    h = hermitian_part(m)
    w, v = np.linalg.eigh(h)
    return HermEigResult(eigenvalues=w, eigenvectors=v)


def _clamped_spectrum(m) -> HermEigResult:
    res = herm_eig(m)
    w = res.eigenvalues
    if w[0] < -PSD_TOL:
        raise NotPSDError(f"matrix is not PSD (min eigenvalue {w[0]:.3e})")
    w = np.where(w <= ROUNDOFF_RTOL * max(w[-1], 0.0), 0.0, w)
    return HermEigResult(w, res.eigenvectors)


def sqrtm_psd(m) -> np.ndarray:
    res = _clamped_spectrum(m)
    v = res.eigenvectors
    return (v * np.sqrt(res.eigenvalues)) @ v.conj().T


def root_product_singular_values(rho, sigma) -> np.ndarray:
    """Singular values of sqrt(rho) sqrt(sigma), descending.

    Their squares are the eigenvalues of the Hermitian sqrt(rho) sigma sqrt(rho);
    taking singular values directly avoids a second square root of roundoff.
    """
    r = _square(rho)
    s = _square(sigma)
    if r.shape != s.shape:
        raise DimensionError(f"shape mismatch {r.shape} vs {s.shape}")
    return np.linalg.svd(sqrtm_psd(r) @ sqrtm_psd(s), compute_uv=False)


def fidelity(rho, sigma) -> float:
    """Root fidelity Tr sqrt(sqrt(rho) sigma sqrt(rho)).

    Works for subnormalized inputs; it is homogeneous of degree one in the pair.
    """
    return float(np.sum(root_product_singular_values(rho, sigma)))
