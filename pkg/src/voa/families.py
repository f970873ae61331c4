"""Parametric state families and the sweeps over them.

Two physical families (the tilted-field XY ring and the GHZ/W mixture) plus the
analytic pure-state families used to compare measures.
"""

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import numkit
from .qstate import DensityMatrix, Ket, StateError, dm_from_ket, named_state
from .bipartite import concurrence_mixed
from .tripartite import ggm, lggm, mpc, voa3

TWO_PI = 2 * math.pi
DEGENERACY_GAP = 1e-9
TILT_SCAN_FIELDS = (0.5, 1.0, 1.5, 2.0)
DEFAULT_ALPHA_POINTS = 721

# printed breakpoints of the GHZ/W mixture, kept at their printed precision
TANGLE_ZERO_END = 0.6269
TANGLE_BRANCH_SWITCH = 0.7087
PAIR_CONCURRENCE_END = 0.2918

_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
_Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
_Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)
_I2 = np.eye(2, dtype=np.complex128)


# -- tabular output -------------------------------------------------------

@dataclass
class ScanTable:
    """Rows of parameter values followed by measure values.

    ``params`` names the leading columns; rows must be strictly increasing in
    them (lexicographically for two-parameter grids).
    """

    params: tuple
    columns: tuple
    rows: list
    provenance: dict = field(default_factory=dict)

    def __post_init__(self):
        self.params = tuple(self.params)
        self.columns = tuple(self.columns)
        width = len(self.params) + len(self.columns)
        self.rows = [tuple(float(v) for v in r) for r in self.rows]
        for r in self.rows:
            if len(r) != width:
                raise ValueError(f"row has {len(r)} entries, expected {width}")
            if not all(math.isfinite(v) for v in r):
                raise ValueError(f"non-finite value in row {r}")
        keys = [r[:len(self.params)] for r in self.rows]
        if any(a >= b for a, b in zip(keys, keys[1:])):
            raise ValueError("parameter values must be strictly increasing")

    @property
    def header(self) -> tuple:
        return self.params + self.columns

    def column(self, name: str) -> np.ndarray:
        j = self.header.index(name)
        return np.array([r[j] for r in self.rows])

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.header)
        for r in self.rows:
            w.writerow([f"{v:.12g}" for v in r])
        return buf.getvalue()

    def to_dict(self) -> dict:
        return {
            "params": list(self.params),
            "columns": list(self.columns),
            "rows": [list(r) for r in self.rows],
            "provenance": self.provenance,
        }


def _grid(lo: float, hi: float, points: int) -> np.ndarray:
    if points < 2:
        raise ValueError("a grid needs at least two points")
    return np.linspace(lo, hi, points)


# -- XY ring in a tilted field ----------------------------------------------

@dataclass(frozen=True)
class HeisenbergParams:
    J: float = 1.0
    B1: float = 1.0
    B2: float = 1.0
    alpha: float = 0.0
    ring: bool = True  # False drops the bond between sites 3 and 1

    def __post_init__(self):
        if not all(math.isfinite(v) for v in (self.J, self.B1, self.B2, self.alpha)):
            raise ValueError("Heisenberg parameters must be finite")
        if not -1e-12 <= self.alpha <= TWO_PI + 1e-12:
            raise ValueError(f"alpha must lie in [0, 2pi], got {self.alpha}")


def _site(op: np.ndarray, i: int) -> np.ndarray:
    mats = [_I2, _I2, _I2]
    mats[i] = op
    return np.kron(np.kron(mats[0], mats[1]), mats[2])


def heisenberg_hamiltonian(p: HeisenbergParams) -> np.ndarray:
    bonds = [(0, 1), (1, 2)] + ([(2, 0)] if p.ring else [])
    h = np.zeros((8, 8), dtype=np.complex128)
    for i, j in bonds:
        h += p.J / 2 * (_site(_X, i) @ _site(_X, j) + _site(_Y, i) @ _site(_Y, j))
    h += p.B1 / 2 * (_site(_Z, 0) + _site(_Z, 2))
    h += p.B2 / 2 * (math.cos(p.alpha) * _site(_Z, 1) + math.sin(p.alpha) * _site(_X, 1))
    return h


@dataclass(frozen=True)
class GroundState:
    energy: float
    ket: Ket
    gap: float
    degenerate: bool

    def __iter__(self):
        yield self.energy
        yield self.ket


def ground_state(h, dims: Optional[Sequence[int]] = None) -> GroundState:
    """Lowest eigenpair. On a degenerate ground level the solver's first vector is kept and flagged."""
    res = numkit.herm_eig(h)
    n = res.eigenvalues.size
    if dims is None:
        q = n.bit_length() - 1
        dims = (2,) * q if n == 1 << q and q >= 1 else (n,)
    gap = float(res.eigenvalues[1] - res.eigenvalues[0]) if n > 1 else math.inf
    return GroundState(float(res.eigenvalues[0]), Ket(dims, res.eigenvectors[:, 0]), gap,
                       gap < DEGENERACY_GAP)


def scan_heisenberg(J: float = 1.0, B: float = 1.0, alphas=None, ring: bool = True,
                    B2: Optional[float] = None) -> ScanTable:
    """Ground-state VoA along a sweep of the tilt angle (B1 = B, B2 = B unless given).

    ``mirror_diff`` is |voa3(a) - voa3(2pi - a)| with the mirrored ground state solved
    directly; ``degenerate`` flags a level crossing at either angle.
    """
    alphas = _grid(0.0, TWO_PI, DEFAULT_ALPHA_POINTS) if alphas is None else np.asarray(alphas, dtype=float)
    if alphas.size == 0:
        raise ValueError("empty alpha grid")
    b2 = B if B2 is None else B2

    def solve(a):
        return ground_state(heisenberg_hamiltonian(HeisenbergParams(J, B, b2, float(a), ring)))

    rows = []
    for a in alphas:
        gs, mirror = solve(a), solve(min(TWO_PI, max(0.0, TWO_PI - a)))
        v = voa3(gs.ket)
        rows.append((a, v, abs(v - voa3(mirror.ket)), gs.energy, gs.gap,
                     float(gs.degenerate or mirror.degenerate)))
    prov = {"family": "heisenberg", "J": J, "B1": B, "B2": b2, "ring": ring, "points": int(alphas.size)}
    return ScanTable(("alpha",), ("voa3", "mirror_diff", "energy", "gap", "degenerate"), rows, prov)


def mirror_residual(table: ScanTable) -> float:
    """Largest mirror difference over rows without a degenerate ground level.

    At a level crossing the ground vector is not unique, so those rows are skipped.
    """
    diff = table.column("mirror_diff")
    ok = table.column("degenerate") == 0
    return float(diff[ok].max()) if ok.any() else 0.0


@dataclass(frozen=True)
class FieldClaims:
    """The three qualitative features of a tilt-angle sweep."""

    B: float
    mirror_residual: float
    argmax_alpha: float
    small_alpha_max: float
    value_at_pi: float

    @property
    def peak_near_pi(self) -> bool:
        return abs(self.argmax_alpha - math.pi) <= 0.2

    @property
    def small_alpha_exceeds_pi(self) -> bool:
        return self.small_alpha_max > self.value_at_pi


def field_claims(table: ScanTable) -> FieldClaims:
    alpha, v = table.column("alpha"), table.column("voa3")
    small = v[alpha <= 0.5]
    return FieldClaims(table.provenance.get("B1", math.nan), mirror_residual(table), float(alpha[np.argmax(v)]),
                       float(small.max()) if small.size else math.nan,
                       float(v[np.argmin(np.abs(alpha - math.pi))]))


# -- analytic pure-state families -----------------------------------------

def scan_gghz(points: int = 201, with_lggm: bool = False) -> ScanTable:
    """a|000> + sqrt(1-a^2)|111> for a in [0, 1], with the closed forms alongside."""
    cols = ["voa3", "ggm", "voa3_closed", "ggm_closed"] + (["lggm"] if with_lggm else [])
    rows = []
    for a in _grid(0.0, 1.0, points):
        k = named_state("gghz", [a])
        row = [a, voa3(k), ggm(k), 2 * a * math.sqrt(max(0.0, 1 - a * a)), min(a * a, 1 - a * a)]
        if with_lggm:
            row.append(lggm(k, 2))
        rows.append(row)
    return ScanTable(("alpha",), cols, rows, {"family": "gghz", "points": points})


def gw_point(s: float) -> tuple:
    """Coefficients (s, s, sqrt(1 - 2 s^2)) of the symmetric-slice generalized W state."""
    return s, s, math.sqrt(max(0.0, 1 - 2 * s * s))


def scan_gw(points: int = 201) -> ScanTable:
    rows = []
    for s in _grid(0.0, 1 / math.sqrt(2), points):
        x = gw_point(s)
        k = named_state("gw", x)
        rows.append((s, voa3(k), ggm(k), 2 * (x[0] * x[1] * x[2]) ** (2 / 3), min(v * v for v in x)))
    return ScanTable(("s",), ("voa3", "ggm", "voa3_closed", "ggm_closed"), rows,
                     {"family": "gw", "points": points, "slice": "x1 = x2 = s"})


def phi_pair(l2: float, l4: float) -> tuple:
    """The (phi1, phi2) pair at (lambda2, lambda4) with mu = lambda0, or None outside the disc."""
    r = l2 * l2 + l4 * l4
    if r > 1.0:
        return None
    l0 = math.sqrt((1.0 - r) / 2)
    l1 = math.sqrt(l0 * l0 + l2 * l2)
    return named_state("phi1", [l0, l1, l4]), named_state("phi2", [l0, l0, l2, l4]), l0


def scan_phi_class(points: int = 41) -> ScanTable:
    """Sign of voa3(phi1) - voa3(phi2) over the valid part of a (lambda2, lambda4) grid."""
    rows = []
    axis = _grid(0.0, 1.0, points)
    for l2 in axis:
        for l4 in axis:
            pair = phi_pair(l2, l4)
            if pair is None:
                continue
            k1, k2, l0 = pair
            v1, v2 = voa3(k1), voa3(k2)
            diff = v1 - v2
            sign = 0.0 if abs(diff) <= 1e-12 else math.copysign(1.0, diff)
            rows.append((l2, l4, v1, v2, sign, mpc(k1), mpc(k2), 2 * l0 * l4))
    return ScanTable(("lambda2", "lambda4"),
                     ("voa3_phi1", "voa3_phi2", "sign", "mpc_phi1", "mpc_phi2", "mpc_closed"), rows,
                     {"family": "phi-class", "points": points, "mu": "lambda0"})


# -- GHZ / W mixture ------------------------------------------------------

def _check_p(p: float):
    if not 0.0 <= p <= 1.0:
        raise StateError(f"mixing probability must lie in [0, 1], got {p}")


def ghz_w_state(p: float) -> DensityMatrix:
    _check_p(p)
    g = dm_from_ket(named_state("ghz")).mat
    w = dm_from_ket(named_state("w")).mat
    return DensityMatrix((2, 2, 2), p * g + (1 - p) * w)


def tangle_branch_one(p: float) -> float:
    return p * p - 8 * math.sqrt(6) / 9 * math.sqrt(p * (1 - p) ** 3)


def tangle_branch_two(p: float) -> float:
    return 1 - (1 - p) * (1.5 + math.sqrt(465) / 18)


def ghz_w_tangle(p: float) -> float:
    _check_p(p)
    if p <= TANGLE_ZERO_END:
        return 0.0
    if p <= TANGLE_BRANCH_SWITCH:
        return max(0.0, tangle_branch_one(p))
    return tangle_branch_two(p)


def pair_concurrence_branch(p: float) -> float:
    return 2 / 3 * (1 - p) - math.sqrt(p * (p + 2) / 3)


def ghz_w_pair_concurrence(p: float) -> float:
    _check_p(p)
    if p > PAIR_CONCURRENCE_END:
        return 0.0
    return max(0.0, pair_concurrence_branch(p))


def scan_ghz_w(ps=None, points: int = 101) -> ScanTable:
    """tau(p) and the mixed-state VoA estimate, with the Wootters pair concurrence as a cross-check."""
    ps = _grid(0.0, 1.0, points) if ps is None else np.asarray(ps, dtype=float)
    rows = []
    for p in ps:
        tau = ghz_w_tangle(p)
        c = ghz_w_pair_concurrence(p)
        # all three pairs share the same concurrence, so the sixth root collapses to a square root
        est = math.sqrt(c * c + tau)
        c_num = concurrence_mixed(numkit.partial_trace(ghz_w_state(p).mat, (2, 2, 2), (0, 1)))
        rows.append((p, tau, est, c, c_num))
    return ScanTable(("p",), ("tau", "estimate", "pair_concurrence", "pair_concurrence_wootters"), rows,
                     {"family": "ghz-w", "points": int(ps.size)})
