"""Randomized property checks: monogamy, LOCC monotonicity, homogeneity, estimator identity.

Every check draws trial t from its own stream ``SeedSequence(seed, spawn_key=(t,))``,
so reports are reproducible and independent of evaluation order.
"""

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .qstate import Ket, dm_from_ket
from .tripartite import (coa, coas, ggm, mpc, pairwise_concurrences, three_tangle_pure,
                         voa3, voa3_mixed_estimate)

DEFAULT_SEED = 42


@dataclass
class RandomModel:
    seed: int = DEFAULT_SEED
    counter: int = 0

    def stream(self, *key: int) -> np.random.Generator:
        return np.random.default_rng(np.random.SeedSequence(self.seed, spawn_key=tuple(key)))

    def next_stream(self) -> np.random.Generator:
        rng = self.stream(self.counter)
        self.counter += 1
        return rng


def _rng(source) -> np.random.Generator:
    if isinstance(source, RandomModel):
        return source.next_stream()
    if isinstance(source, np.random.Generator):
        return source
    return np.random.default_rng(source)


def random_pure_ket(dims, model) -> Ket:
    """Haar-random ket: complex normal amplitudes, normalized."""
    dims = tuple(int(d) for d in dims)
    if any(d < 2 for d in dims):
        raise ValueError("every subsystem needs dimension >= 2")
    rng = _rng(model)
    n = int(np.prod(dims))
    z = rng.normal(size=n) + 1j * rng.normal(size=n)
    return Ket(dims, z / np.linalg.norm(z))


@dataclass(frozen=True)
class KrausPair:
    m0: np.ndarray
    m1: np.ndarray
    party: int = 0

    def __post_init__(self):
        resid = self.m0.conj().T @ self.m0 + self.m1.conj().T @ self.m1 - np.eye(2)
        if np.max(np.abs(resid)) > 1e-10:
            raise ValueError("Kraus pair is not complete")

    @property
    def operators(self) -> tuple:
        return self.m0, self.m1

    def outcomes(self, k: Ket) -> list:
        """(probability, unnormalized post-measurement ket) per outcome."""
        out = []
        for m in self.operators:
            post = k.apply_local(m, self.party)
            out.append((post.norm ** 2, post))
        return out


def random_kraus_pair(model, party: int = 0) -> KrausPair:
    """Two-outcome instrument from a random 4x2 isometry split into 2x2 blocks."""
    rng = _rng(model)
    z = rng.normal(size=(4, 2)) + 1j * rng.normal(size=(4, 2))
    q, r = np.linalg.qr(z)
    q = q * (np.diag(r) / np.abs(np.diag(r)))
    return KrausPair(q[:2], q[2:], party)


@dataclass
class PropertyReport:
    property: str
    trials: int
    worst_violation: float
    slack: float
    seed: int
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.worst_violation <= self.slack

    def to_dict(self) -> dict:
        d = {"property": self.property, "trials": self.trials, "worst_violation": self.worst_violation,
             "slack": self.slack, "pass": self.passed, "seed": self.seed}
        if self.details:
            d["details"] = self.details
        return d


# -- monogamy -------------------------------------------------------------

def monogamy_residual(k: Ket) -> float:
    """max over helpers i of |coa_i^2 - (C_jk^2 + tau)|."""
    tau = three_tangle_pure(k)
    pc = pairwise_concurrences(k)
    others = {0: "BC", 1: "AC", 2: "AB"}
    return max(abs(c * c - (pc[others[i]] ** 2 + tau)) for i, c in enumerate(coas(k)))


def check_monogamy(trials: int = 1000, model: Optional[RandomModel] = None) -> PropertyReport:
    model = model or RandomModel()
    worst = max(monogamy_residual(random_pure_ket((2, 2, 2), model.stream(t))) for t in range(trials))
    return PropertyReport("monogamy", trials, float(worst), 1e-8, model.seed)


# -- LOCC monotonicity --------------------------------------------------------

LOCC_MEASURES: dict = {
    "voa3": voa3,
    "coa-a": lambda k: coa(k, 0),
    "coa-b": lambda k: coa(k, 1),
    "coa-c": lambda k: coa(k, 2),
    "mpc": mpc,
    "ggm": ggm,
    # negative control: not a monotone, so the harness must flag it
    "coa-max": lambda k: max(coas(k)),
}
_FIRST_PARTY = {"coa-a": 0, "coa-b": 1, "coa-c": 2}


def protocol_excess(k: Ket, f: Callable[[Ket], float], rounds: int, rng: np.random.Generator,
                    first: int = 0, random_order: bool = False, instrument=None) -> float:
    """sum_leaves p * f(leaf) - f(k) for a random feed-forward protocol of two-outcome instruments.

    Every branch picks its own instrument after seeing the earlier outcomes. Parties
    cycle from ``first`` unless ``random_order``; ``instrument(rng, party)`` overrides the
    random Kraus pair.
    """
    draw = instrument or (lambda g, party: random_kraus_pair(g, party))
    leaves = [(1.0, k)]
    for r in range(rounds):
        nxt = []
        for p, psi in leaves:
            party = int(rng.integers(3)) if random_order else (first + r) % 3
            for q, post in draw(rng, party).outcomes(psi):
                if q > 1e-14:
                    nxt.append((p * q, post.normalized()))
        leaves = nxt
    return float(sum(p * f(psi) for p, psi in leaves) - f(k))


def check_locc_monotonicity(measure: str = "voa3", trials: int = 500, rounds: int = 3,
                            model: Optional[RandomModel] = None) -> PropertyReport:
    if measure not in LOCC_MEASURES:
        raise KeyError(f"unknown measure {measure!r}; known: {', '.join(LOCC_MEASURES)}")
    if trials < 1 or rounds < 1:
        raise ValueError("trials and rounds must be positive")
    model = model or RandomModel()
    f = LOCC_MEASURES[measure]
    first = _FIRST_PARTY.get(measure, 0)
    worst, violations = -math.inf, 0
    for t in range(trials):
        rng = model.stream(t)
        k = random_pure_ket((2, 2, 2), rng)
        ex = protocol_excess(k, f, rounds, rng, first=first, random_order=bool(t % 2))
        worst = max(worst, ex)
        violations += ex > 1e-7
    return PropertyReport(f"locc-monotonicity:{measure}", trials, worst, 1e-7, model.seed,
                          {"rounds": rounds, "violating_trials": violations})


# -- homogeneity and determinant scaling ------------------------------------------

def check_homogeneity_and_det_scaling(trials: int = 200, model: Optional[RandomModel] = None) -> PropertyReport:
    """(a) voa3(c k) = |c|^2 voa3(k), asserted; (b) log-log slope of voa3 against |det A|, reported.

    For (b), A acts on party A of a subnormalized ket; the three-tangle, which scales
    exactly as |det A|^2, is fitted alongside as a control.
    """
    model = model or RandomModel()
    worst = 0.0
    log_det, log_voa, log_tau = [], [], []
    for t in range(trials):
        rng = model.stream(t)
        k = random_pure_ket((2, 2, 2), rng)
        c = complex(rng.normal(), rng.normal())
        worst = max(worst, abs(voa3(k.scaled(c)) - abs(c) ** 2 * voa3(k)))

        sub = k.scaled(rng.uniform(0.3, 1.0))
        a = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        moved = sub.apply_local(a, 0)
        v0, v1 = voa3(sub), voa3(moved)
        t0, t1 = three_tangle_pure(sub), three_tangle_pure(moved)
        if min(v0, v1, t0, t1) > 1e-12:
            log_det.append(math.log(abs(np.linalg.det(a))))
            log_voa.append(math.log(v1 / v0))
            log_tau.append(math.log(t1 / t0))

    def fit(y):
        slope, icept = np.polyfit(log_det, y, 1)
        resid = np.asarray(y) - (slope * np.asarray(log_det) + icept)
        return {"slope": float(slope), "intercept": float(icept), "rms_residual": float(np.sqrt(np.mean(resid ** 2)))}

    details = {"det_scaling_voa3": fit(log_voa), "det_scaling_tangle": fit(log_tau), "fit_samples": len(log_det)}
    return PropertyReport("homogeneity", trials, float(worst), 1e-9, model.seed, details)


# -- mixed-state estimator on pure states ----------------------------------------

def check_estimator_consistency(trials: int = 1000, model: Optional[RandomModel] = None) -> PropertyReport:
    model = model or RandomModel()
    worst = 0.0
    for t in range(trials):
        k = random_pure_ket((2, 2, 2), model.stream(t))
        est = voa3_mixed_estimate(dm_from_ket(k), three_tangle_pure(k))
        worst = max(worst, abs(est - voa3(k)))
    return PropertyReport("estimator-consistency", trials, float(worst), 1e-8, model.seed)


SUITES = {
    "monogamy": check_monogamy,
    "locc": check_locc_monotonicity,
    "homogeneity": check_homogeneity_and_det_scaling,
    "estimator": check_estimator_consistency,
}
