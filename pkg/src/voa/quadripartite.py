"""Optimization over ensemble decompositions, and the four-qubit assistance measures.

Every decomposition of rho = sum_k |phi_k><phi_k| (phi_k = sqrt(lambda_k) v_k from the
eigen-decomposition, k < n = rank) has the form |chi_l> = sum_k U*_lk |phi_k> for an m x m
unitary U with m >= n. U is parameterized as exp(iH) with H Hermitian built from m^2 reals,
and the ensemble average is searched by multi-start Nelder-Mead.
"""

import math
from dataclasses import dataclass, field, replace
from typing import Callable, Optional

import numpy as np
from scipy.linalg import lapack
from scipy.optimize import minimize

from . import numkit
from .bipartite import concurrence_batch, gen_concurrence_batch, spin_flip_matrix
from .qstate import DensityMatrix, Ket, StateError
from .tripartite import PARTY_NAMES, coa_batch, party_index, three_tangle_batch, voa3_batch

RANK_TOL = 1e-10
MAX_ENSEMBLE = 16


@dataclass(frozen=True)
class OptimizerConfig:
    m: Optional[int] = None  # ensemble size; None means max(rank, min(rank + 4, 16))
    restarts: int = 16
    iterations: int = 400
    tol: float = 1e-7
    seed: int = 42
    step: float = 0.5
    polish: int = 1  # extra Nelder-Mead passes from each restart's end point

    def __post_init__(self):
        if self.restarts < 1 or self.iterations < 1 or self.tol <= 0 or self.polish < 0:
            raise ValueError(f"invalid optimizer config {self}")
        if self.m is not None and not 1 <= self.m <= 64:
            raise ValueError("ensemble size m must lie in [1, 64]")


@dataclass(frozen=True)
class BatchMeasure:
    """A pure-state measure that can be evaluated on a stack of normalized kets.

    ``degree`` = 2 declares f(c psi) = |c|^2 f(psi); the optimizer then scores the
    unnormalized ensemble rows directly instead of normalizing them first.
    """

    name: str
    dims: tuple
    batch: Callable[[np.ndarray], np.ndarray]
    degree: Optional[int] = None

    def __call__(self, k: Ket) -> float:
        return float(self.batch(k.amps[None, :])[0])


CONCURRENCE = BatchMeasure("concurrence", (2, 2), concurrence_batch, degree=2)
VOA3 = BatchMeasure("voa3", (2, 2, 2), voa3_batch, degree=2)
THREE_TANGLE = BatchMeasure("three_tangle", (2, 2, 2), three_tangle_batch)


def coa_measure(party) -> BatchMeasure:
    p = party_index(party, 3)
    return BatchMeasure(f"coa_{PARTY_NAMES[p]}", (2, 2, 2), lambda rows: coa_batch(rows)[:, p],
                        degree=2)


def gen_concurrence_measure(d: int) -> BatchMeasure:
    return BatchMeasure(f"gen_concurrence_{d}", (d, d), lambda rows: gen_concurrence_batch(rows, d),
                        degree=2)


def as_batch(f, dims) -> BatchMeasure:
    """Wrap a plain ``Ket -> float`` function so it can score a stack of rows."""
    if isinstance(f, BatchMeasure):
        return f
    dims = tuple(dims)

    def batch(rows):
        return np.array([f(Ket(dims, r)) for r in rows], dtype=float)

    return BatchMeasure(getattr(f, "__name__", "measure"), dims, batch)


# -- unitary parameterization ----------------------------------------------------

def hermitian_basis(m: int) -> np.ndarray:
    """m^2 Hermitian generators: diagonal units, then symmetric and antisymmetric off-diagonals."""
    basis = np.zeros((m * m, m, m), dtype=np.complex128)
    idx = 0
    for i in range(m):
        basis[idx, i, i] = 1.0
        idx += 1
    for i in range(m):
        for j in range(i + 1, m):
            basis[idx, i, j] = basis[idx, j, i] = 1.0
            idx += 1
    for i in range(m):
        for j in range(i + 1, m):
            basis[idx, i, j] = 1j
            basis[idx, j, i] = -1j
            idx += 1
    return basis


def unitary_from_params(params: np.ndarray, m: int, basis: np.ndarray = None) -> np.ndarray:
    """exp(iH) for H = sum_j params_j G_j."""
    params = np.asarray(params, dtype=float)
    if params.size != m * m:
        raise ValueError(f"need {m * m} parameters for m={m}, got {params.size}")
    if basis is None:
        basis = hermitian_basis(m)
    h = np.tensordot(params, basis, axes=1)
    w, v = np.linalg.eigh(h)
    return (v * np.exp(1j * w)) @ v.conj().T


# -- certificates ---------------------------------------------------------------

@dataclass
class DecompositionCertificate:
    weights: np.ndarray
    kets: np.ndarray  # rows are normalized kets
    dims: tuple
    objective: float
    direction: str
    measure: str
    metadata: dict = field(default_factory=dict)

    @property
    def ensemble(self) -> list:
        return [(float(w), Ket(self.dims, k)) for w, k in zip(self.weights, self.kets)]

    def reconstruct(self) -> np.ndarray:
        return np.einsum("l,la,lb->ab", self.weights, self.kets, self.kets.conj())

    def check(self, rho, f=None, tol_rho: float = 1e-7, tol_obj: float = 1e-9):
        """Raise AssertionError unless the certificate is feasible (and consistent with f if given)."""
        m = rho.mat if isinstance(rho, DensityMatrix) else numkit.as_cmatrix(rho)
        assert np.all(self.weights >= 0), "negative weight"
        assert abs(self.weights.sum() - 1.0) <= 1e-9, f"weights sum to {self.weights.sum()!r}"
        err = np.max(np.abs(self.reconstruct() - m))
        assert err <= tol_rho, f"ensemble reconstructs rho only to {err:.3e}"
        if f is not None:
            val = float(np.dot(self.weights, as_batch(f, self.dims).batch(self.kets)))
            assert abs(val - self.objective) <= tol_obj, f"objective {self.objective!r} vs recomputed {val!r}"

    def to_dict(self) -> dict:
        return {
            "measure": self.measure,
            "direction": self.direction,
            "objective": self.objective,
            "dims": list(self.dims),
            "ensemble": [
                {"weight": float(w), "ket": [[float(z.real), float(z.imag)] for z in k]}
                for w, k in zip(self.weights, self.kets)
            ],
            "metadata": self.metadata,
        }


def default_ensemble_size(rank: int) -> int:
    return max(rank, min(rank + 4, MAX_ENSEMBLE))


def _scaled_eigvectors(m: np.ndarray) -> np.ndarray:
    res = numkit.herm_eig(m)
    if res.eigenvalues[0] < -numkit.PSD_TOL:
        raise numkit.NotPSDError("density matrix is not PSD")
    keep = res.eigenvalues > RANK_TOL
    w = res.eigenvalues[keep][::-1]
    v = res.eigenvectors[:, keep][:, ::-1]
    return (v * np.sqrt(w)).T  # rows phi_k


def _weighted_score(rows: np.ndarray, score: Callable) -> tuple:
    w = np.sum(np.abs(rows) ** 2, axis=1)
    live = w > 1e-300
    normed = np.zeros_like(rows)
    normed[live] = rows[live] / np.sqrt(w[live])[:, None]
    vals = np.where(live, score(normed), 0.0)
    return w, normed, float(np.dot(w, vals))


def optimize_decomposition(rho, f, direction: str = "max", config: OptimizerConfig = None,
                           dims=None) -> DecompositionCertificate:
    """Search ensemble decompositions of rho for the max (or min) average of f.

    For ``max`` the objective is a lower bound on the supremum; for ``min`` an
    upper bound on the infimum. The result is deterministic for a fixed seed, and
    restart r always uses the same stream, so more restarts never give a worse value.
    """
    if direction not in ("max", "min"):
        raise ValueError("direction must be 'max' or 'min'")
    config = config or OptimizerConfig()
    if isinstance(rho, DensityMatrix):
        dims, mat = rho.dims, rho.mat
    else:
        mat = numkit.as_cmatrix(rho)
        if dims is None:
            raise ValueError("dims required for a bare matrix")
        dims = tuple(dims)
    measure = as_batch(f, dims)
    if tuple(measure.dims) != tuple(dims):
        raise StateError(f"measure {measure.name} expects dims {measure.dims}, state has {dims}")
    trace = float(np.real(np.trace(mat)))
    phi = _scaled_eigvectors(mat / trace)
    n = phi.shape[0]
    m = config.m if config.m is not None else default_ensemble_size(n)
    if m < n:
        raise ValueError(f"ensemble size m={m} is below rank {n}")
    sign = -1.0 if direction == "max" else 1.0
    meta = {"restarts": config.restarts, "iterations": config.iterations, "tol": config.tol,
            "seed": config.seed, "m": m, "rank": n, "polish": config.polish}

    if n == 1:
        w, normed, obj = _weighted_score(phi, measure.batch)
        meta.update(evaluations=1, best_restart=0)
        return DecompositionCertificate(w * trace, normed, dims, obj, direction, measure.name, meta)

    dim = m * m
    basis = hermitian_basis(m).reshape(dim, dim)
    phi_c = phi.conj()

    def rows_for(x):
        h = (x @ basis).reshape(m, m)
        ev, v, info = lapack.zheevd(h)
        if info != 0:
            ev, v = np.linalg.eigh(h)
        # conjugate of the first n columns of U = exp(iH), applied to phi
        u_cols = (v * np.exp(1j * ev)) @ v[:n].conj().T
        return (u_cols @ phi_c).conj()

    if measure.degree == 2:
        def objective(x):
            return sign * float(np.sum(measure.batch(rows_for(x))))
    else:
        def objective(x):
            return sign * _weighted_score(rows_for(x), measure.batch)[2]

    def nelder_mead(x0, step):
        simplex = np.vstack([x0, x0 + step * np.eye(dim)])
        return minimize(objective, x0, method="Nelder-Mead",
                        options={"maxiter": config.iterations, "initial_simplex": simplex,
                                 "xatol": np.inf, "fatol": config.tol, "adaptive": True})

    best_x, best_f, best_r, evals = None, np.inf, -1, 0
    for r in range(config.restarts):
        rng = np.random.default_rng(np.random.SeedSequence(config.seed, spawn_key=(r,)))
        # restart 0 starts at the eigen-ensemble itself
        x0 = np.zeros(dim) if r == 0 else rng.normal(scale=math.pi / 2, size=dim)
        res = nelder_mead(x0, config.step)
        evals += res.nfev
        x, fx = res.x, res.fun
        for _ in range(config.polish):
            res = nelder_mead(x, config.step / 5)
            evals += res.nfev
            if res.fun < fx:
                x, fx = res.x, res.fun
        if fx < best_f:
            best_x, best_f, best_r = x, fx, r

    w, normed, obj = _weighted_score(rows_for(best_x), measure.batch)
    meta.update(evaluations=evals, best_restart=best_r)
    return DecompositionCertificate(w * trace, normed, dims, obj * trace, direction, measure.name, meta)


# -- four-qubit assistance -----------------------------------------------------------

@dataclass
class AssistBounds:
    lower: float
    upper: float
    certificate: Optional[DecompositionCertificate] = None

    def __iter__(self):
        yield self.lower
        yield self.upper


def pair_coa_bound(rho_abc: np.ndarray) -> float:
    """Upper bound on max_decomp sum p_i VoA(phi_i) for a 3-qubit rho.

    Hoelder gives sum p_i (c_A c_B c_C)^(1/3) <= prod_j (sum p_i c_j)^(1/3), and each
    averaged CoA is bounded by the two-qubit marginal's F(rho_jk, rho~_jk), the
    maximum average concurrence over decompositions of that marginal.
    """
    vals = []
    for helper in range(3):
        pair = [i for i in range(3) if i != helper]
        red = numkit.partial_trace(rho_abc, (2, 2, 2), pair)
        vals.append(numkit.fidelity(red, spin_flip_matrix(red)))
    return float(min(1.0, np.cbrt(np.prod(vals))))


def coa4_dm(rho_abc, config: OptimizerConfig = None) -> AssistBounds:
    """Assisted VoA of a 3-qubit density matrix: max over decompositions of the average VoA."""
    if isinstance(rho_abc, DensityMatrix):
        rho_abc = rho_abc.mat
    rho_abc = numkit.as_cmatrix(rho_abc)
    if rho_abc.shape != (8, 8):
        raise StateError("expected an 8x8 three-qubit density matrix")
    cert = optimize_decomposition(rho_abc, VOA3, "max", config, dims=(2, 2, 2))
    upper = pair_coa_bound(rho_abc)
    return AssistBounds(cert.objective, upper, cert)


def _four_qubits(k: Ket) -> Ket:
    if not isinstance(k, Ket) or k.dims != (2, 2, 2, 2):
        raise StateError("expected a 4-qubit ket")
    return k


def coa4(k: Ket, assisting, config: OptimizerConfig = None) -> AssistBounds:
    """(lower, upper) bounds on the assistance of party ``assisting`` to the other three."""
    _four_qubits(k)
    d = party_index(assisting, 4)
    rest = [i for i in range(4) if i != d]
    rho = numkit.partial_trace(k.projector(), k.dims, rest)
    rho = rho / np.real(np.trace(rho))
    return coa4_dm(rho, config)


@dataclass
class Voa4Result:
    lower: float
    upper: float
    parties: list

    def __iter__(self):
        yield self.lower
        yield self.upper


def voa4(k: Ket, config: OptimizerConfig = None) -> Voa4Result:
    parties = [coa4(k, p, config) for p in range(4)]
    lower = float(np.prod([max(b.lower, 0.0) for b in parties]) ** 0.25)
    upper = float(np.prod([b.upper for b in parties]) ** 0.25)
    return Voa4Result(lower, upper, parties)


def convex_roof_upper(rho, f, config: OptimizerConfig = None, dims=None) -> DecompositionCertificate:
    """Upper bound on the convex roof min sum p_i f(psi_i) of a pure-state measure."""
    return optimize_decomposition(rho, f, "min", config, dims=dims)


def with_seed(config: Optional[OptimizerConfig], seed: int) -> OptimizerConfig:
    return replace(config or OptimizerConfig(), seed=seed)


# -- soft checks (optimizer-limited, slack 5e-3) ---------------------------------------

SOFT_SLACK = 5e-3


def _random_sl2(rng: np.random.Generator) -> np.ndarray:
    a = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    return a / np.sqrt(np.linalg.det(a))


def check_sl2_invariance(trials: int = 3, config: OptimizerConfig = None, model=None):
    """Compare coa4 (helper D) before and after a random det-1 operator on one of A, B, C.

    The transformed ket is renormalized before the reduced state is taken.
    """
    from .verify import PropertyReport, RandomModel, random_pure_ket

    model = model or RandomModel()
    worst, pairs = 0.0, []
    for t in range(trials):
        rng = model.stream(t)
        k = random_pure_ket((2, 2, 2, 2), rng)
        moved = k.apply_local(_random_sl2(rng), int(rng.integers(3))).normalized()
        before, after = coa4(k, 3, config).lower, coa4(moved, 3, config).lower
        pairs.append([before, after])
        worst = max(worst, abs(after - before))
    return PropertyReport("sl2-invariance (soft)", trials, worst, SOFT_SLACK, model.seed, {"lower_bounds": pairs})


def check_concavity(trials: int = 2, lambdas=(0.25, 0.5, 0.75), config: OptimizerConfig = None, model=None):
    """bound(l s + (1-l) t) >= l bound(s) + (1-l) bound(t) on reduced states of random 4-qubit kets."""
    from .verify import PropertyReport, RandomModel, random_pure_ket

    model = model or RandomModel()
    worst, rows = -math.inf, []

    def reduced(rng):
        k = random_pure_ket((2, 2, 2, 2), rng)
        return numkit.partial_trace(k.projector(), k.dims, [0, 1, 2])

    for t in range(trials):
        rng = model.stream(t)
        s, u = reduced(rng), reduced(rng)
        bs, bu = coa4_dm(s, config).lower, coa4_dm(u, config).lower
        for lam in lambdas:
            mix = coa4_dm(lam * s + (1 - lam) * u, config).lower
            gap = lam * bs + (1 - lam) * bu - mix
            rows.append([lam, bs, bu, mix])
            worst = max(worst, gap)
    return PropertyReport("concavity (soft)", trials, worst, SOFT_SLACK, model.seed, {"rows": rows})
