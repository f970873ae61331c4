import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, strategies as st

from voa import numkit
from voa.numkit import DimensionError, NotPSDError

from conftest import random_psd

SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]])


def _ptrace_loops(m, dims, keep):
    """Index-by-index partial trace, used as an oracle for the einsum route."""
    n = len(dims)
    kd = [dims[i] for i in keep]
    side = int(np.prod(kd))
    out = np.zeros((side, side), dtype=complex)
    for r in np.ndindex(*dims):
        for c in np.ndindex(*dims):
            if any(r[i] != c[i] for i in range(n) if i not in keep):
                continue
            ri = np.ravel_multi_index([r[i] for i in keep], kd)
            ci = np.ravel_multi_index([c[i] for i in keep], kd)
            out[ri, ci] += m[np.ravel_multi_index(r, dims), np.ravel_multi_index(c, dims)]
    return out


def test_kron_identity_and_yy():
    assert np.array_equal(numkit.kron(np.eye(2), np.eye(2)), np.eye(4))
    yy = numkit.kron(SY, SY)
    assert np.allclose(yy, np.fliplr(np.diag([-1, 1, 1, -1])))


def test_kron_entries(rng):
    a = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    b = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    k = numkit.kron(a, b)
    for i, j, p, q in np.ndindex(2, 2, 2, 2):
        assert k[2 * i + p, 2 * j + q] == pytest.approx(a[i, j] * b[p, q], abs=1e-15)


def test_as_cmatrix_rejects_nonfinite_and_empty():
    with pytest.raises(ValueError):
        numkit.as_cmatrix([[np.nan]])
    with pytest.raises(DimensionError):
        numkit.as_cmatrix(np.zeros((0, 2)))
    with pytest.raises(DimensionError):
        numkit.as_cmatrix([1, 2])


def test_partial_trace_examples():
    ghz = np.zeros(8)
    ghz[[0, 7]] = 2 ** -0.5
    red = numkit.partial_trace(np.outer(ghz, ghz), [2, 2, 2], [0, 1])
    assert np.allclose(red, np.diag([0.5, 0, 0, 0.5]))
    bell = np.array([1, 0, 0, 1]) / np.sqrt(2)
    assert np.allclose(numkit.partial_trace(np.outer(bell, bell), [2, 2], [0]), np.eye(2) / 2)
    m = random_psd(np.random.default_rng(0), 8)
    assert np.array_equal(numkit.partial_trace(m, [2, 2, 2], [0, 1, 2]), m)


def test_partial_trace_matches_loop_oracle(rng):
    m = random_psd(rng, 12)
    for keep in ([0], [1], [2], [0, 2], [1, 2], [2, 0]):
        got = numkit.partial_trace(m, [2, 3, 2], keep)
        assert np.allclose(got, _ptrace_loops(m, [2, 3, 2], sorted(keep)), atol=1e-13)
        assert abs(np.trace(got) - np.trace(m)) <= 1e-12


def test_partial_trace_errors():
    with pytest.raises(DimensionError):
        numkit.partial_trace(np.eye(8), [2, 2], [0])
    with pytest.raises(DimensionError):
        numkit.partial_trace(np.eye(4), [2, 2], [])
    with pytest.raises(DimensionError):
        numkit.partial_trace(np.eye(4), [2, 2], [5])


def test_herm_eig_examples(rng):
    assert np.allclose(numkit.herm_eig(np.diag([3, 1, 2])).eigenvalues, [1, 2, 3])
    assert np.allclose(numkit.herm_eig(SX).eigenvalues, [-1, 1])
    g = rng.normal(size=(8, 8)) + 1j * rng.normal(size=(8, 8))
    h = g + g.conj().T
    res = numkit.herm_eig(h)
    v = res.eigenvectors
    assert np.max(np.abs(v @ np.diag(res.eigenvalues) @ v.conj().T - h)) <= 1e-10
    assert np.max(np.abs(v.conj().T @ v - np.eye(8))) <= 1e-10
    assert abs(res.eigenvalues.sum() - np.trace(h).real) <= 1e-10
    assert np.all(np.diff(res.eigenvalues) >= 0)


def test_herm_eig_rejects_bad_input():
    with pytest.raises(DimensionError):
        numkit.herm_eig(np.zeros((2, 3)))
    with pytest.raises(numkit.NotHermitianError):
        numkit.herm_eig(np.array([[0, 1], [0, 0]]))


def test_sqrtm_psd(rng):
    assert np.allclose(numkit.sqrtm_psd(np.eye(3)), np.eye(3))
    assert np.allclose(numkit.sqrtm_psd(np.diag([4.0, 9.0])), np.diag([2.0, 3.0]))
    for rank in (1, 2, 4):
        rho = random_psd(rng, 4, rank)
        r = numkit.sqrtm_psd(rho)
        assert np.max(np.abs(r @ r - rho)) <= 1e-8
        assert np.allclose(r, scipy.linalg.sqrtm(rho + 0j), atol=1e-6)


def test_sqrtm_psd_clamps_and_rejects():
    assert np.allclose(numkit.sqrtm_psd(np.diag([1.0, -5e-11])), np.diag([1.0, 0.0]))
    with pytest.raises(NotPSDError):
        numkit.sqrtm_psd(np.diag([1.0, -1e-6]))


def test_fidelity_examples():
    p0, p1 = np.diag([1.0, 0.0]), np.diag([0.0, 1.0])
    assert numkit.fidelity(p0, p1) == pytest.approx(0, abs=1e-12)
    p, q = np.array([0.1, 0.2, 0.3, 0.4]), np.array([0.4, 0.3, 0.2, 0.1])
    assert numkit.fidelity(np.diag(p), np.diag(q)) == pytest.approx(np.sum(np.sqrt(p * q)), abs=1e-12)
    with pytest.raises(DimensionError):
        numkit.fidelity(np.eye(2), np.eye(4))


def _fidelity_oracle(a, b):
    # independent route: eigenvalues of the non-Hermitian product a b
    w = np.linalg.eigvals(a @ b)
    return float(np.sum(np.sqrt(np.clip(w.real, 0, None))))


@given(st.integers(0, 2 ** 32 - 1), st.integers(1, 4), st.integers(1, 4), st.floats(0.05, 3.0))
def test_fidelity_properties(seed, ra, rb, c):
    rng = np.random.default_rng(seed)
    a, b = random_psd(rng, 4, ra), random_psd(rng, 4, rb)
    f = numkit.fidelity(a, b)
    assert abs(f - numkit.fidelity(b, a)) <= 1e-9
    assert abs(numkit.fidelity(c * a, c * b) - c * f) <= 1e-9
    assert abs(numkit.fidelity(a, a) - 1.0) <= 1e-9
    assert -1e-12 <= f <= 1 + 1e-9
    if min(ra, rb) == 4:
        assert abs(f - _fidelity_oracle(a, b)) <= 1e-7
