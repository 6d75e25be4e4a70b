import math
from pathlib import Path

import numpy as np
import pytest

import geoctl

DATA = Path(__file__).resolve().parents[2] / "data"


def test_algebra_dimensions():
    assert geoctl.algebra_dimension(["x0", "y0", "z0"], ["zz"]) == 6
    assert geoctl.algebra_dimension(["x0", "y0", "z0", "0x", "0y", "0z"], ["yy"]) == 15


def test_mu_starts_at_one_and_decays():
    assert geoctl.mu(0.0) == pytest.approx(1.0, abs=1e-14)
    assert 0.0 < geoctl.mu(1.0) < 1.0


def test_replay_published_costate():
    p = geoctl.Problem.single_qubit_dephasing()
    gate = np.array([[0.519159 - 0.100536j, 0.247726 + 0.811787j],
                     [-0.247726 + 0.811787j, 0.519159 + 0.100536j]])
    lam = [2.73839, 2.87388, -1.60211, -22.1932, 8.21078, -4.49642]
    s = p.integrate(lam, gate, 2000)
    assert s["infidelity"] < 1e-8
    assert s["energy"] == pytest.approx(6.63466, rel=0.01)
    assert s["field"].shape == (2001, 3)


def test_bundled_gate_coefficients():
    p = geoctl.Problem.single_qubit_dephasing()
    c = p.c_target(geoctl.read_gate(str(DATA / "gates" / "eq38.json")))
    np.testing.assert_allclose(c, [-0.973495, -0.297073, 0.120563, 0, 0, 0], atol=1e-5)


def test_krotov_h_converges_monotonically():
    p = geoctl.Problem.single_qubit_dephasing()
    p.steps = 400
    r = geoctl.krotov(p, geoctl.named_gate("H"), max_iters=3000)
    hist = r["jt_history"]
    assert r["converged"]
    assert all(b <= a + 1e-12 for a, b in zip(hist, hist[1:]))


def test_no_control_fidelity_is_half_one_plus_mu():
    f = geoctl.no_control_fidelity(steps=500)
    assert f == pytest.approx(0.5 * (1.0 + geoctl.mu(1.0)), abs=1e-6)


def test_errors_are_translated():
    with pytest.raises(geoctl.GeoctlError):
        geoctl.named_gate("nope")


def test_small_bank_and_synthesis():
    p = geoctl.Problem.single_qubit_dephasing()
    p.steps = 200
    bank = geoctl.generate_bank(p, scale=0.01, seed=3)
    assert len(bank) == bank.valid_count() > 0
    r = geoctl.synthesize(bank, geoctl.named_gate("H"), strategy="coarse", exhaustive=False,
                          steps=400, retry_budget=2)
    assert r["infidelity"] < 1e-6
    assert math.isfinite(r["energy"])
