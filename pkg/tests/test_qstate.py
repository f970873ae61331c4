import json
import math

import numpy as np
import pytest

from voa import qstate
from voa.qstate import DensityMatrix, Ket, StateError, named_state

FIXED = ["bell", "ghz", "w", "psi_w", "psi2", "psi3", "psi4", "ghz4", "w4", "c4", "hs",
         "bell_0", "ghz3_0", "bell_bell", "zero3", "zero4"]
PARAMETRIC = [("gghz", [0.3]), ("gw", [0.5, 0.5, 2 ** -0.5]), ("phi1", [0.6, 0.64, 0.48]),
              ("phi2", [0.6, 0.48, 0.384, 0.512]), ("diag", [0.1, 0.2, 0.3, 0.4])]


@pytest.mark.parametrize("name", FIXED)
def test_named_states_normalized(name):
    assert abs(named_state(name).norm - 1) <= 1e-12


@pytest.mark.parametrize("name,params", PARAMETRIC)
def test_parametric_normalized(name, params):
    assert abs(named_state(name, params).norm - 1) <= 1e-12


def test_ghz_and_hs_amplitudes():
    g = named_state("ghz").amps
    assert np.allclose(g[[0, 7]], 2 ** -0.5) and np.allclose(np.delete(g, [0, 7]), 0)
    w = np.exp(2j * np.pi / 3)
    hs = named_state("hs").amps * math.sqrt(6)
    expect = {0b0011: 1, 0b1100: 1, 0b0101: w, 0b1010: w, 0b0110: w * w, 0b1001: w * w}
    for idx in range(16):
        assert hs[idx] == pytest.approx(expect.get(idx, 0), abs=1e-12)


def test_gw_reproduces_psi_w_up_to_relabeling():
    k = named_state("gw", [0.5, 0.5, math.sqrt(2) / 2])
    assert np.allclose(k.amps, named_state("psi_w").amps)


def test_index_convention():
    k = qstate.ket_from_bits({"110": 1})
    assert k.amps[6] == 1


def test_phi2_checks_lambda1_constraint():
    l1 = math.hypot(0.48, 0.384)
    named_state("phi2", [0.6, 0.48, 0.384, 0.512, l1])
    with pytest.raises(StateError):
        named_state("phi2", [0.6, 0.48, 0.384, 0.512, 0.9])


def test_parameter_errors():
    with pytest.raises(StateError):
        named_state("gw", [0.5, 0.5, 0.5])
    with pytest.raises(StateError):
        named_state("gghz", [1.5])
    with pytest.raises(StateError):
        named_state("nope")
    with pytest.raises(StateError):
        named_state("ghz", [1.0])


def test_parse_state_spec():
    assert np.allclose(qstate.parse_state_spec("gghz:0.6").amps, named_state("gghz", [0.6]).amps)
    assert qstate.parse_state_spec("w").dims == (2, 2, 2)


def test_dm_from_ket():
    assert np.allclose(qstate.dm_from_ket(qstate.ket_from_bits({"0": 1})).mat, np.diag([1, 0]))
    bell = qstate.dm_from_ket(named_state("bell")).mat
    expect = np.zeros((4, 4))
    expect[np.ix_([0, 3], [0, 3])] = 0.5
    assert np.allclose(bell, expect)
    assert qstate.dm_from_ket(named_state("hs")).purity() == pytest.approx(1, abs=1e-12)


def test_parse_amps_alias_normalizes():
    doc = '{"kind":"ket","dims":[2,2],"amps":[[0.7071,0],[0,0],[0,0],[0.7071,0]]}'
    k = qstate.parse_state(doc.encode())
    assert np.allclose(k.amps, named_state("bell").amps) and abs(k.norm - 1) <= 1e-12


@pytest.mark.parametrize("name", FIXED)
def test_round_trip_ket(name):
    k = named_state(name)
    back = qstate.parse_state(qstate.serialize_state(k))
    assert np.array_equal(back.amps, k.amps) and back.dims == k.dims


def test_round_trip_dm():
    rho = qstate.dm_from_ket(named_state("w"))
    back = qstate.parse_state(qstate.serialize_state(rho))
    assert np.array_equal(back.mat, rho.mat)


def test_whitespace_accepted():
    doc = '\n {  "kind" : "ket",\n "dims" : [ 2 ] ,\t"data": [[1, 0], [0, 0]] }\n'
    assert qstate.parse_state(doc).dims == (2,)


@pytest.mark.parametrize("doc", [
    '{"kind":"ket","dims":[2],"data":[[1,0],[0,0]],"extra":1}',
    '{"kind":"ket","dims":[2,2],"data":[[1,0],[0,0]]}',
    '{"kind":"ket","dims":[2],"data":[[0.5,0],[0,0]]}',
    '{"kind":"blob","dims":[2],"data":[[1,0],[0,0]]}',
    '{"kind":"ket","dims":[2],"data":[[1],[0,0]]}',
    'not json',
    '[1, 2]',
])
def test_malformed_documents_rejected(doc):
    with pytest.raises(StateError):
        qstate.parse_state(doc)


def test_dm_trace_error():
    doc = {"kind": "dm", "dims": [2], "data": [[[0.5, 0], [0, 0]], [[0, 0], [0.4, 0]]]}
    with pytest.raises(StateError, match="trace"):
        qstate.parse_state(json.dumps(doc))


def test_density_matrix_validation():
    with pytest.raises(StateError):
        DensityMatrix((2,), np.array([[1, 1], [0, 0]]))
    with pytest.raises(StateError):
        DensityMatrix((2,), np.diag([1.5, -0.5]))
    sub = DensityMatrix((2,), np.diag([0.3, 0.2]), trace=0.5)
    assert sub.trace == 0.5


def test_ket_is_immutable():
    k = named_state("ghz")
    with pytest.raises(ValueError):
        k.amps[0] = 0


def test_permuted_and_apply_local():
    k = qstate.ket_from_bits({"100": 1})
    assert k.permuted([1, 0, 2]).amps[2] == 1  # |010>
    x = np.array([[0, 1], [1, 0]])
    assert k.apply_local(x, 0).amps[0] == 1


def test_random_unitary(rng):
    u = qstate.random_unitary(4, rng)
    assert np.max(np.abs(u.conj().T @ u - np.eye(4))) <= 1e-12
