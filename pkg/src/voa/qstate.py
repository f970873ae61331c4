"""Kets, density matrices, the named-state catalog and the JSON state format.

Basis ordering: the first subsystem is the most significant digit, so for
three qubits the amplitude of |q_A q_B q_C> lives at index 4*q_A + 2*q_B + q_C.
"""

import json
import math
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from . import numkit

NORM_TOL = 1e-12
PARAM_TOL = 1e-9
# hand-written ket files (e.g. 0.7071 for 1/sqrt 2) are renormalized up to this deviation
FILE_NORM_TOL = 1e-3


class StateError(ValueError):
    pass


def _dims(dims) -> tuple:
    dims = tuple(int(d) for d in dims)
    if not dims or any(d < 1 for d in dims):
        raise StateError(f"invalid dims {dims}")
    return dims


@dataclass(frozen=True, eq=False)
class Ket:
    dims: tuple
    amps: np.ndarray

    def __post_init__(self):
        dims = _dims(self.dims)
        amps = np.array(self.amps, dtype=np.complex128).reshape(-1)
        if amps.size != int(np.prod(dims)):
            raise StateError(f"{amps.size} amplitudes do not match dims {dims}")
        if not np.all(np.isfinite(amps)):
            raise StateError("non-finite amplitude")
        amps.setflags(write=False)
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "amps", amps)

    @property
    def arity(self) -> int:
        return len(self.dims)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))

    def is_normalized(self, tol: float = NORM_TOL) -> bool:
        return abs(self.norm - 1.0) <= tol

    def normalized(self) -> "Ket":
        n = self.norm
        if n == 0:
            raise StateError("cannot normalize the zero vector")
        return Ket(self.dims, self.amps / n)

    def scaled(self, c: complex) -> "Ket":
        return Ket(self.dims, c * self.amps)

    def tensor(self) -> np.ndarray:
        """Amplitudes as an array with one axis per subsystem."""
        return self.amps.reshape(self.dims)

    def projector(self) -> np.ndarray:
        return np.outer(self.amps, self.amps.conj())

    def apply_local(self, op, party: int) -> "Ket":
        """Apply a single-subsystem operator (not necessarily unitary)."""
        op = numkit.as_cmatrix(op)
        t = np.moveaxis(self.tensor(), party, 0)
        t = np.tensordot(op, t, axes=(1, 0))
        return Ket(self.dims, np.moveaxis(t, 0, party).reshape(-1))

    def permuted(self, order: Sequence[int]) -> "Ket":
        """Relabel parties: new party i is old party ``order[i]``."""
        t = np.transpose(self.tensor(), order)
        return Ket(tuple(self.dims[i] for i in order), t.reshape(-1))


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    dims: tuple
    mat: np.ndarray
    trace: float = 1.0

    def __post_init__(self):
        dims = _dims(self.dims)
        m = numkit.as_cmatrix(self.mat)
        side = int(np.prod(dims))
        if m.shape != (side, side):
            raise StateError(f"matrix shape {m.shape} does not match dims {dims}")
        try:
            h = numkit.hermitian_part(m)
        except numkit.NotHermitianError as exc:
            raise StateError(str(exc)) from None
        w = np.linalg.eigvalsh(h)
        if w[0] < -numkit.PSD_TOL:
            raise StateError(f"density matrix is not PSD (min eigenvalue {w[0]:.3e})")
        tr = float(np.real(np.trace(h)))
        if abs(tr - self.trace) > 1e-10:
            raise StateError(f"trace {tr:.12g} differs from declared trace {self.trace:.12g}")
        m = m.copy()
        m.setflags(write=False)
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "mat", m)

    @property
    def arity(self) -> int:
        return len(self.dims)

    def reduced(self, keep: Sequence[int]) -> "DensityMatrix":
        kept = sorted(set(keep))
        m = numkit.partial_trace(self.mat, self.dims, kept)
        return DensityMatrix(tuple(self.dims[i] for i in kept), m, trace=self.trace)

    def purity(self) -> float:
        return float(np.real(np.trace(self.mat @ self.mat)))


State = Union[Ket, DensityMatrix]


def dm_from_ket(k: Ket) -> DensityMatrix:
    if not k.is_normalized():
        raise StateError("dm_from_ket needs a normalized ket")
    return DensityMatrix(k.dims, k.projector())


def ket_from_bits(terms: dict, dims: Sequence[int] = None) -> Ket:
    """Build a normalized ket from {"0101": amplitude, ...} (digits per subsystem)."""
    n = len(next(iter(terms)))
    dims = tuple(dims) if dims is not None else (2,) * n
    amps = np.zeros(int(np.prod(dims)), dtype=np.complex128)
    for digits, a in terms.items():
        idx = np.ravel_multi_index(tuple(int(c) for c in digits), dims)
        amps[idx] += a
    return Ket(dims, amps).normalized()


# -- named states -----------------------------------------------------------

_SQ2 = math.sqrt(2.0)
_OMEGA = np.exp(2j * np.pi / 3)


def _check(cond: bool, msg: str):
    if not cond:
        raise StateError(msg)


def _unit(values: Sequence[float], label: str):
    total = sum(v * v for v in values)
    _check(abs(total - 1.0) <= PARAM_TOL, f"{label}: squared parameters sum to {total!r}, expected 1")
    _check(all(v >= 0 for v in values), f"{label}: parameters must be non-negative")


def _gghz(alpha: float) -> Ket:
    _check(0.0 <= alpha <= 1.0, "gghz: alpha must lie in [0, 1]")
    return ket_from_bits({"000": alpha, "111": math.sqrt(max(0.0, 1.0 - alpha * alpha))})


def _gw(x1: float, x2: float, x3: float) -> Ket:
    _unit((x1, x2, x3), "gw")
    return ket_from_bits({"100": x1, "010": x2, "001": x3})


def _phi1(l0: float, l1: float, l4: float) -> Ket:
    _unit((l0, l1, l4), "phi1")
    return ket_from_bits({"000": l0, "100": l1, "111": l4})


def _phi2(l0: float, mu: float, l2: float, l4: float, l1: float = None) -> Ket:
    _unit((l0, mu, l2, l4), "phi2")
    if l1 is not None:
        _check(abs(mu * mu + l2 * l2 - l1 * l1) <= PARAM_TOL, "phi2: mu^2 + lambda2^2 must equal lambda1^2")
    return ket_from_bits({"000": l0, "100": mu, "101": l2, "111": l4})


def _diag(*p: float) -> Ket:
    d = len(p)
    _check(2 <= d, "diag: need at least two probabilities")
    _check(all(x >= 0 for x in p), "diag: probabilities must be non-negative")
    _check(abs(sum(p) - 1.0) <= PARAM_TOL, "diag: probabilities must sum to 1")
    dims = (d, d, d)
    amps = np.zeros(d ** 3, dtype=np.complex128)
    for i, pi in enumerate(p):
        amps[np.ravel_multi_index((i, i, i), dims)] = math.sqrt(pi)
    return Ket(dims, amps).normalized()


_FIXED: dict = {
    "bell": lambda: ket_from_bits({"00": 1, "11": 1}),
    "ghz": lambda: ket_from_bits({"000": 1, "111": 1}),
    "w": lambda: ket_from_bits({"100": 1, "010": 1, "001": 1}),
    "psi_w": lambda: ket_from_bits({"100": 0.5, "010": 0.5, "001": _SQ2 / 2}),
    "psi2": lambda: ket_from_bits({"000": math.cos(math.pi / 8), "111": math.sin(math.pi / 8)}),
    "psi3": lambda: ket_from_bits({"000": 0.5, "100": 0.5, "111": _SQ2 / 2}),
    "psi4": lambda: ket_from_bits({"000": _SQ2, "100": 1, "101": 1, "111": 2}),
    "ghz4": lambda: ket_from_bits({"0000": 1, "1111": 1}),
    "w4": lambda: ket_from_bits({"1000": 1, "0100": 1, "0010": 1, "0001": 1}),
    "c4": lambda: ket_from_bits({"0000": 1, "0011": 1, "1100": 1, "1111": -1}),
    "hs": lambda: ket_from_bits(
        {"0011": 1, "1100": 1, "0101": _OMEGA, "1010": _OMEGA, "0110": _OMEGA ** 2, "1001": _OMEGA ** 2}
    ),
    # biseparable references
    "bell_0": lambda: ket_from_bits({"000": 1, "110": 1}),
    "ghz3_0": lambda: ket_from_bits({"0000": 1, "1110": 1}),
    "bell_bell": lambda: ket_from_bits({"0000": 1, "0011": 1, "1100": 1, "1111": 1}),
    "zero3": lambda: ket_from_bits({"000": 1}),
    "zero4": lambda: ket_from_bits({"0000": 1}),
}

_PARAMETRIC: dict = {
    "gghz": (_gghz, (1,)),
    "gw": (_gw, (3,)),
    "phi1": (_phi1, (3,)),
    "phi2": (_phi2, (4, 5)),
    "diag": (_diag, None),
}

NAMED_STATES = tuple(sorted(list(_FIXED) + list(_PARAMETRIC)))


def named_state(name: str, params: Sequence[float] = ()) -> Ket:
    """Construct one of the catalog states, e.g. ``named_state("gw", [0.5, 0.5, 2**-0.5])``."""
    key = name.lower()
    params = [float(p) for p in params]
    if key in _FIXED:
        _check(not params, f"{name} takes no parameters")
        return _FIXED[key]()
    if key in _PARAMETRIC:
        fn, counts = _PARAMETRIC[key]
        _check(counts is None or len(params) in counts, f"{name} takes {counts} parameters, got {len(params)}")
        return fn(*params)
    raise StateError(f"unknown state {name!r}; known: {', '.join(NAMED_STATES)}")


def parse_state_spec(spec: str) -> Ket:
    """Parse ``name`` or ``name:p1,p2,...`` as used on the command line."""
    name, _, rest = spec.partition(":")
    params = [float(x) for x in rest.split(",")] if rest.strip() else []
    return named_state(name.strip(), params)


# -- file format --------------------------------------------------------------

_KET_KEYS = {"kind", "dims", "data"}


def _complex_pair(x) -> complex:
    if not (isinstance(x, list) and len(x) == 2 and all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in x)):
        raise StateError(f"expected [re, im] pair, got {x!r}")
    return complex(float(x[0]), float(x[1]))


def parse_state(text) -> State:
    """Parse a state document (bytes or str) into a validated Ket or DensityMatrix."""
    if isinstance(text, (bytes, bytearray)):
        text = text.decode("utf-8")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise StateError(f"malformed state document: {exc}") from None
    if not isinstance(doc, dict):
        raise StateError("state document must be an object")
    keys = set(doc)
    if "amps" in keys and "data" not in keys and doc.get("kind") == "ket":
        # accepted alias for ket amplitudes
        doc = dict(doc)
        doc["data"] = doc.pop("amps")
        keys = set(doc)
    unknown = keys - _KET_KEYS
    missing = _KET_KEYS - keys
    if unknown:
        raise StateError(f"unknown keys {sorted(unknown)}")
    if missing:
        raise StateError(f"missing keys {sorted(missing)}")
    kind = doc["kind"]
    dims = doc["dims"]
    if not (isinstance(dims, list) and dims and all(isinstance(d, int) and not isinstance(d, bool) for d in dims)):
        raise StateError("dims must be a non-empty array of integers")
    dims = _dims(dims)
    side = int(np.prod(dims))
    data = doc["data"]
    if not isinstance(data, list):
        raise StateError("data must be an array")
    if kind == "ket":
        if len(data) != side:
            raise StateError(f"ket has {len(data)} amplitudes, dims require {side}")
        k = Ket(dims, [_complex_pair(x) for x in data])
        dev = abs(k.norm - 1.0)
        if dev > FILE_NORM_TOL:
            raise StateError(f"ket norm {k.norm:.6g} is not 1")
        return k.normalized() if dev > NORM_TOL else k
    if kind == "dm":
        if len(data) != side or any(not isinstance(r, list) or len(r) != side for r in data):
            raise StateError(f"dm data must be a {side}x{side} array of [re, im] pairs")
        mat = np.array([[_complex_pair(x) for x in row] for row in data])
        return DensityMatrix(dims, mat)
    raise StateError(f"unknown kind {kind!r}")


def serialize_state(state: State) -> str:
    def pair(z):
        return [float(z.real), float(z.imag)]

    if isinstance(state, Ket):
        doc = {"kind": "ket", "dims": list(state.dims), "data": [pair(z) for z in state.amps]}
    elif isinstance(state, DensityMatrix):
        doc = {"kind": "dm", "dims": list(state.dims), "data": [[pair(z) for z in row] for row in state.mat]}
    else:
        raise TypeError(f"cannot serialize {type(state).__name__}")
    return json.dumps(doc) + "\n"


def load_state(path) -> State:
    with open(path, "rb") as fh:
        return parse_state(fh.read())


def random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unitary via QR with phase fix."""
    z = (rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))

