import math

import numpy as np
import pytest
from scipy.optimize import brentq

from voa import families as fam
from voa.qstate import StateError, named_state
from voa.tripartite import voa3


def test_hamiltonian_basic():
    for p in (fam.HeisenbergParams(), fam.HeisenbergParams(J=-0.7, B1=0.3, B2=1.9, alpha=2.2),
              fam.HeisenbergParams(alpha=1.0, ring=False)):
        h = fam.heisenberg_hamiltonian(p)
        assert np.max(np.abs(h - h.conj().T)) <= 1e-14
        assert abs(np.trace(h)) <= 1e-14


def test_field_only_hamiltonian_is_diagonal():
    h = fam.heisenberg_hamiltonian(fam.HeisenbergParams(J=0, B1=1, B2=0, alpha=1.3))
    assert np.allclose(h, np.diag(np.diag(h)))
    bits = [((i >> 2) & 1, i & 1) for i in range(8)]
    expect = [0.5 * ((1 - 2 * a) + (1 - 2 * c)) for a, c in bits]
    assert np.allclose(np.diag(h).real, expect)


def test_alpha_periodicity_and_validation():
    h0 = fam.heisenberg_hamiltonian(fam.HeisenbergParams(alpha=0))
    h2 = fam.heisenberg_hamiltonian(fam.HeisenbergParams(alpha=2 * math.pi))
    assert np.max(np.abs(h0 - h2)) <= 1e-12
    with pytest.raises(ValueError):
        fam.HeisenbergParams(alpha=7.0)
    with pytest.raises(ValueError):
        fam.HeisenbergParams(J=math.inf)


def test_ground_state_examples():
    e, k = fam.ground_state(np.diag([2.0, -1.0, 0.0]))
    assert e == -1 and np.allclose(np.abs(k.amps), [0, 1, 0])
    e, k = fam.ground_state(np.diag([1.0, -1.0]))
    assert e == -1 and np.allclose(np.abs(k.amps), [0, 1])
    h = fam.heisenberg_hamiltonian(fam.HeisenbergParams(B1=0.5, B2=0.5, alpha=math.pi / 2))
    gs = fam.ground_state(h)
    assert np.linalg.norm(h @ gs.ket.amps - gs.energy * gs.ket.amps) <= 1e-9
    assert gs.ket.dims == (2, 2, 2) and not gs.degenerate


def test_ground_state_flags_degeneracy():
    gs = fam.ground_state(np.diag([0.0, 0.0, 1.0]))
    assert gs.degenerate


def test_heisenberg_scan_claims():
    alphas = np.linspace(0, 2 * math.pi, 181)
    c = fam.field_claims(fam.scan_heisenberg(1.0, 2.0, alphas))
    assert c.mirror_residual <= 1e-8 and c.peak_near_pi
    c = fam.field_claims(fam.scan_heisenberg(1.0, 0.5, alphas))
    assert c.small_alpha_exceeds_pi


def test_open_chain_scan_runs():
    t = fam.scan_heisenberg(1.0, 1.5, np.linspace(0, 2 * math.pi, 37), ring=False)
    assert fam.mirror_residual(t) <= 1e-8


def test_scan_table_validation_and_csv():
    t = fam.ScanTable(("x",), ("y",), [(0.0, 1.0), (0.5, 1 / 3)])
    assert t.to_csv() == "x,y\n0,1\n0.5,0.333333333333\n"
    with pytest.raises(ValueError):
        fam.ScanTable(("x",), ("y",), [(1.0, 0.0), (0.5, 0.0)])
    with pytest.raises(ValueError):
        fam.ScanTable(("x",), ("y",), [(0.0, math.nan)])
    two = fam.ScanTable(("a", "b"), ("v",), [(0, 0, 1), (0, 1, 1), (1, 0, 1)])
    assert two.header == ("a", "b", "v")


def test_ghz_w_state():
    assert np.allclose(fam.ghz_w_state(1).mat, named_state("ghz").projector())
    assert np.allclose(fam.ghz_w_state(0).mat, named_state("w").projector())
    w = np.linalg.eigvalsh(fam.ghz_w_state(0.5).mat)
    assert np.allclose(sorted(w)[-2:], [0.5, 0.5]) and np.allclose(w[:-2], 0, atol=1e-12)
    with pytest.raises(StateError):
        fam.ghz_w_state(1.2)


def test_ghz_w_tangle():
    for p in (0, 0.3, 0.6269):
        assert fam.ghz_w_tangle(p) == 0
    assert fam.ghz_w_tangle(1) == pytest.approx(1, abs=1e-12)
    gap = abs(fam.tangle_branch_one(fam.TANGLE_BRANCH_SWITCH) - fam.tangle_branch_two(fam.TANGLE_BRANCH_SWITCH))
    assert gap <= 1e-3
    grid = np.arange(0.6269, 1.0, 1e-3)
    vals = [fam.ghz_w_tangle(p) for p in grid]
    assert np.all(np.diff(vals) >= -1e-12)


def test_ghz_w_pair_concurrence():
    assert fam.ghz_w_pair_concurrence(0) == pytest.approx(2 / 3)
    assert fam.ghz_w_pair_concurrence(0.5) == 0
    root = brentq(fam.pair_concurrence_branch, 0, 1)
    assert abs(root - 0.2918) <= 5e-4


def test_pair_concurrence_matches_wootters():
    t = fam.scan_ghz_w(points=51)
    assert np.max(np.abs(t.column("pair_concurrence") - t.column("pair_concurrence_wootters"))) <= 1e-3


def test_ghz_w_scan_rows():
    t = fam.scan_ghz_w(points=101)
    assert t.rows[0][:3] == pytest.approx((0, 0, 2 / 3))
    assert t.rows[-1][:3] == pytest.approx((1, 1, 1))
    assert np.all(t.column("estimate") >= t.column("tau") - 1e-12)


def test_family_closed_forms():
    g = fam.scan_gghz(points=21)
    assert np.allclose(g.column("voa3"), g.column("voa3_closed"), atol=1e-9)
    w = fam.scan_gw(points=21)
    assert np.allclose(w.column("ggm"), w.column("ggm_closed"), atol=1e-9)


def test_phi_class_signs_and_ellipse():
    t = fam.scan_phi_class(points=21)
    sign = t.column("sign")
    assert (sign > 0).any() and (sign < 0).any()
    l2, l4 = t.column("lambda2"), t.column("lambda4")
    r = l2 ** 2 + 2 * l4 ** 2
    clear = np.abs(r - 1) > 0.05
    inside = (r < 1) & clear & (l2 > 0) & (l4 > 0)
    outside = (r > 1) & clear & (l2 > 0) & (l4 > 0)
    assert np.all(sign[inside] < 0) and np.all(sign[outside] > 0)


def test_phi_pair_outside_disc():
    assert fam.phi_pair(0.9, 0.9) is None
    k1, k2, l0 = fam.phi_pair(0.3, 0.4)
    assert voa3(k1) > 0 and voa3(k2) > 0
