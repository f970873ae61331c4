"""Three-party measures: concurrence of assistance, VoA, three-tangle, MPC, GGM/LGGM.

Closed-form routes use reduced density matrices and fidelities. The ``*_batch``
functions evaluate the same quantities on stacks of (possibly unnormalized)
kets through the 2x2 tangle matrix; the decomposition optimizer relies on them.
"""

import itertools
import math
from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np
from scipy.optimize import minimize

from . import numkit
from .bipartite import YY, concurrence_mixed, spin_flip_matrix
from .qstate import DensityMatrix, Ket, StateError

PARTY_NAMES = "ABCD"
TAU_CLAMP = 1e-9
# the tangle is a difference of O(1) terms; anything smaller is cancellation noise
# whose square root (~1e-8) would otherwise leak into MPC
TAU_ROUNDOFF = 1e-14

Party = Union[int, str]


class ConsistencyError(RuntimeError):
    """A quantity that must be non-negative came out clearly negative."""


def party_index(p: Party, arity: int) -> int:
    if isinstance(p, str):
        if len(p) != 1 or p.upper() not in PARTY_NAMES:
            raise StateError(f"unknown party {p!r}")
        p = PARTY_NAMES.index(p.upper())
    p = int(p)
    if not 0 <= p < arity:
        raise StateError(f"party {p} out of range for {arity} parties")
    return p


def _qubits(k: Ket, n: int) -> Ket:
    if not isinstance(k, Ket):
        raise TypeError("expected a Ket")
    if k.dims != (2,) * n:
        raise StateError(f"expected a {n}-qubit ket, got dims {k.dims}")
    return k


def _clamp_tau(t: float) -> float:
    if t < -TAU_CLAMP:
        raise ConsistencyError(f"three-tangle evaluated to {t:.3e}")
    return 0.0 if t <= TAU_ROUNDOFF else t


# -- closed-form evaluations ---------------------------------------------------

def pair_reduced(k: Ket, pair: Sequence[int]) -> np.ndarray:
    """Unnormalized-safe reduced operator of a 3-qubit ket on two parties."""
    return numkit.partial_trace(k.projector(), k.dims, pair)


def coa(k: Ket, assisting: Party) -> float:
    """Concurrence of assistance with ``assisting`` as the helper: F(rho, rho~) of the other pair."""
    _qubits(k, 3)
    c = party_index(assisting, 3)
    rho = pair_reduced(k, [i for i in range(3) if i != c])
    return numkit.fidelity(rho, spin_flip_matrix(rho))


def coas(k: Ket) -> tuple:
    return tuple(coa(k, p) for p in range(3))


def voa3(k: Ket) -> float:
    """Volume of assistance: geometric mean of the three CoAs."""
    return float(np.cbrt(np.prod(coas(k))))


def pair_concurrence(k: Ket, pair: Sequence[int]) -> float:
    return concurrence_mixed(pair_reduced(k, pair))


def _tangle_about(k: Ket, i: int) -> float:
    j, l = [x for x in range(3) if x != i]
    rho_i = numkit.partial_trace(k.projector(), k.dims, [i])
    det = float(np.real(np.linalg.det(rho_i)))
    c_split_sq = 4 * max(det, 0.0)
    return _clamp_tau(c_split_sq - pair_concurrence(k, [i, j]) ** 2 - pair_concurrence(k, [i, l]) ** 2)


def three_tangle_pure(k: Ket, pivot: Party = 0) -> float:
    """C^2_{i|jk} - C^2_{ij} - C^2_{ik} with i the pivot party."""
    _qubits(k, 3)
    i = party_index(pivot, 3)
    tau = _tangle_about(k, i)
    # debug check: the tangle does not depend on the pivot
    assert abs(tau - _tangle_about(k, (i + 1) % 3)) <= 1e-9 * max(1.0, k.norm ** 4), "pivot dependence"
    return tau


def pairwise_concurrences(k: Ket) -> dict:
    """Wootters concurrences of the three two-party marginals, keyed "AB", "AC", "BC"."""
    return {
        PARTY_NAMES[a] + PARTY_NAMES[b]: pair_concurrence(k, [a, b])
        for a, b in itertools.combinations(range(3), 2)
    }


def mpc(k: Ket) -> float:
    """Minimum pairwise concurrence, min over pairs of sqrt(C_jk^2 + tau)."""
    tau = three_tangle_pure(k)
    return float(min(math.sqrt(c * c + tau) for c in pairwise_concurrences(k).values()))


def bipartitions(n: int):
    """One side of every nontrivial bipartition of n parties, each split yielded once."""
    seen = set()
    for size in range(1, n // 2 + 1):
        for side in itertools.combinations(range(n), size):
            comp = tuple(x for x in range(n) if x not in side)
            key = min(side, comp)
            if key not in seen:
                seen.add(key)
                yield side


def ggm(k: Ket) -> float:
    """Generalized geometric measure, 1 - max squared Schmidt coefficient over all bipartitions."""
    n = k.arity
    if n not in (3, 4):
        raise StateError(f"ggm supports 3 or 4 parties, got {n}")
    _qubits(k, n)
    rho = k.projector()
    top = 0.0
    for side in bipartitions(n):
        red = numkit.partial_trace(rho, k.dims, side)
        top = max(top, numkit.herm_eig(red).eigenvalues[-1])
    return float(1.0 - top)


# -- batch evaluations on stacks of kets --------------------------------------

def _trace_norm_2x2(t: np.ndarray) -> np.ndarray:
    fro = np.sum(np.abs(t) ** 2, axis=(-2, -1))
    det = np.abs(t[..., 0, 0] * t[..., 1, 1] - t[..., 0, 1] * t[..., 1, 0])
    return np.sqrt(np.maximum(fro + 2 * det, 0.0))


def tangle_matrices(rows: np.ndarray) -> np.ndarray:
    """For each 3-qubit row and each helper party c, the 2x2 matrix T[k,l] = phi_k^T YY phi_l.

    phi_k is the two-party vector left after projecting party c onto |k>.
    Returns shape (m, 3, 2, 2).
    """
    t = np.asarray(rows).reshape(-1, 2, 2, 2)
    out = []
    for c in range(3):
        s = np.moveaxis(t, c + 1, 3).reshape(-1, 4, 2)
        out.append(np.einsum("mak,ab,mbl->mkl", s, YY, s))
    return np.stack(out, axis=1)


def coa_batch(rows: np.ndarray) -> np.ndarray:
    """CoAs (m, 3) of stacked 3-qubit kets; degree 2 in the amplitudes.

    F(rho, rho~) equals the trace norm of the tangle matrix, which for a 2x2
    matrix is sqrt(||T||_F^2 + 2|det T|).
    """
    return _trace_norm_2x2(tangle_matrices(rows))


def voa3_batch(rows: np.ndarray) -> np.ndarray:
    return np.cbrt(np.prod(coa_batch(rows), axis=1))


def cayley_tangle_batch(rows: np.ndarray) -> np.ndarray:
    """4|hyperdeterminant| of each 3-qubit row (Cayley form); degree 4 in the amplitudes."""
    a = np.asarray(rows).reshape(-1, 8)
    a0, a1, a2, a3, a4, a5, a6, a7 = (a[:, i] for i in range(8))
    d1 = a0**2 * a7**2 + a1**2 * a6**2 + a2**2 * a5**2 + a4**2 * a3**2
    d2 = (a0 * a7 * a3 * a4 + a0 * a7 * a5 * a2 + a0 * a7 * a6 * a1
          + a3 * a4 * a5 * a2 + a3 * a4 * a6 * a1 + a5 * a2 * a6 * a1)
    d3 = a0 * a6 * a5 * a3 + a7 * a1 * a2 * a4
    return 4 * np.abs(d1 - 2 * d2 + 4 * d3)


def three_tangle_batch(rows: np.ndarray) -> np.ndarray:
    return cayley_tangle_batch(rows)


# -- localizable GGM -----------------------------------------------------------

def _min_side_eig_sum(post: np.ndarray) -> np.ndarray:
    """p * GGM for stacks of unnormalized kets of 2 or 3 qubits (all splits are 1 vs rest).

    For a 2x2 reduced operator the smaller eigenvalue is (tr - sqrt(tr^2 - 4 det))/2,
    and p * (1 - lambda_max / p) is exactly that smaller eigenvalue.
    """
    n = post.ndim - 1
    best = None
    for q in range(n if n > 2 else 1):
        s = np.moveaxis(post, q + 1, 1).reshape(post.shape[0], 2, -1)
        red = np.einsum("mia,mja->mij", s, s.conj())
        tr = np.real(red[:, 0, 0] + red[:, 1, 1])
        det = np.real(red[:, 0, 0] * red[:, 1, 1] - red[:, 0, 1] * red[:, 1, 0])
        lo = (tr - np.sqrt(np.maximum(tr * tr - 4 * det, 0.0))) / 2
        best = lo if best is None else np.minimum(best, lo)
    return best


def _lggm_objective(tensor: np.ndarray, r: int, theta: np.ndarray, phi: np.ndarray) -> np.ndarray:
    c = np.cos(theta / 2)
    s = np.sin(theta / 2) * np.exp(1j * phi)
    # rows of the measurement: <n| and <n_perp|
    bra0 = np.stack([c, s], axis=-1).conj()
    bra1 = np.stack([-s.conj(), c], axis=-1).conj()
    t = np.moveaxis(tensor, r, 0)
    total = 0.0
    for bra in (bra0, bra1):
        post = np.tensordot(bra, t, axes=(1, 0))
        total = total + _min_side_eig_sum(post)
    return total


@dataclass
class LggmResult:
    value: float
    theta: float
    phi: float
    evaluations: int = 0


def lggm_search(k: Ket, r: Party, grid: int = 64, refine_starts: int = 3, refine_iters: int = 30) -> LggmResult:
    """Grid search over the Bloch sphere of qubit r, then Nelder-Mead refinement."""
    n = k.arity
    if n not in (3, 4):
        raise StateError(f"lggm supports 3 or 4 parties, got {n}")
    _qubits(k, n)
    r = party_index(r, n)
    tensor = k.tensor()
    th, ph = np.meshgrid(np.linspace(0, np.pi, grid), np.linspace(0, 2 * np.pi, grid, endpoint=False), indexing="ij")
    vals = _lggm_objective(tensor, r, th.ravel(), ph.ravel())
    order = np.argsort(-vals, kind="stable")[:refine_starts]
    best = LggmResult(float(vals[order[0]]), float(th.ravel()[order[0]]), float(ph.ravel()[order[0]]), vals.size)

    def neg(x):
        return -float(_lggm_objective(tensor, r, np.array([x[0]]), np.array([x[1]]))[0])

    for idx in order:
        x0 = np.array([th.ravel()[idx], ph.ravel()[idx]])
        res = minimize(neg, x0, method="Nelder-Mead", options={"maxiter": refine_iters, "xatol": 1e-10, "fatol": 1e-12})
        best.evaluations += res.nfev
        if -res.fun > best.value:
            best.value, best.theta, best.phi = float(-res.fun), float(res.x[0]), float(res.x[1])
    best.value = min(max(best.value, 0.0), 1.0)
    return best


def lggm(k: Ket, r: Party) -> float:
    """Localizable GGM by measuring qubit r; a lower bound on the supremum."""
    return lggm_search(k, r).value


# -- qudit diagonal family and mixed-state estimator ----------------------------

def gcoa_diagonal(p: Sequence[float]) -> float:
    """GCoA (and VoA with generalized concurrence) of sum_i sqrt(p_i)|iii>: d (prod p_i)^(1/d)."""
    p = np.asarray(p, dtype=float)
    d = p.size
    if not 2 <= d <= 8:
        raise StateError(f"distribution length must be in [2, 8], got {d}")
    if np.any(p < 0) or abs(p.sum() - 1.0) > 1e-9:
        raise StateError("p must be a probability distribution")
    return float(d * np.prod(p) ** (1.0 / d))


def voa3_mixed_estimate(rho, tangle: float) -> float:
    """Sixth root of prod over pairs (C_jk^2 + tau), with C_jk the Wootters concurrences."""
    if tangle < 0:
        raise ValueError("tangle must be non-negative")
    if isinstance(rho, DensityMatrix):
        if rho.dims != (2, 2, 2):
            raise StateError(f"expected a 3-qubit density matrix, got dims {rho.dims}")
        m = rho.mat
    else:
        m = numkit.as_cmatrix(rho)
        if m.shape != (8, 8):
            raise StateError("expected an 8x8 density matrix")
    prod = 1.0
    for pair in itertools.combinations(range(3), 2):
        c = concurrence_mixed(numkit.partial_trace(m, (2, 2, 2), pair))
        prod *= c * c + tangle
    return float(prod ** (1.0 / 6.0))


# -- reports ---------------------------------------------------------------

METHODS = ("closed-form", "optimizer-lower-bound", "piecewise-exact")


@dataclass
class MeasureEntry:
    value: float
    method: str
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown method tag {self.method!r}")
        if not math.isfinite(self.value) or self.value < 0:
            raise ValueError(f"measure value must be finite and non-negative, got {self.value}")


@dataclass
class MeasureReport:
    state: str
    entries: dict = field(default_factory=dict)

    def add(self, name: str, value: float, method: str = "closed-form", **metadata):
        self.entries[name] = MeasureEntry(float(value), method, dict(metadata))

    def value(self, name: str) -> float:
        return self.entries[name].value

    def to_dict(self) -> dict:
        return {
            "state": self.state,
            "entries": {
                k: {"value": e.value, "method": e.method, "metadata": e.metadata} for k, e in self.entries.items()
            },
        }


def measure_report(k: Ket, name: str = "state", with_lggm: bool = False) -> MeasureReport:
    """All closed-form three-qubit measures of a pure state."""
    _qubits(k, 3)
    rep = MeasureReport(name)
    cs = coas(k)
    rep.add("voa3", np.cbrt(np.prod(cs)))
    for p, c in zip(PARTY_NAMES, cs):
        rep.add(f"coa_{p}", c)
    rep.add("three_tangle", three_tangle_pure(k))
    rep.add("mpc", mpc(k))
    rep.add("ggm", ggm(k))
    if with_lggm:
        for p in range(3):
            res = lggm_search(k, p)
            rep.add(f"lggm_{PARTY_NAMES[p]}", res.value, "optimizer-lower-bound",
                    grid=64, refine_iterations=30, theta=res.theta, phi=res.phi)
    return rep
