import math
import os

import numpy as np
import pytest

import relaxwave as rw

DATA = os.environ.get("RELAXWAVE_DATA_DIR", os.path.join(os.path.dirname(__file__), "..", "..", "data", "systems"))


def test_damped_wave_conditions():
    rep = rw.check_conditions(rw.damped_wave())
    assert rep["D"]["holds"]
    assert rep["theta_est"] == pytest.approx(0.5000005, rel=1e-9)


def test_reduction_values():
    red = rw.reduce_low(rw.damped_wave())
    np.testing.assert_allclose(np.array(red["P01"], dtype=float), [[0, -1], [-1, 0]], atol=1e-12)


def test_projector_matches_oracle():
    rng = np.random.default_rng(1)
    v = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    a = v @ np.diag([0, 0, 1.5, -2 + 1j]) @ np.linalg.inv(v)
    p, s = rw.proj_semisimple_zero(a, 2)
    po, so, m = rw.proj_oracle(a)
    assert m == 2
    np.testing.assert_allclose(p, po, atol=1e-8)
    np.testing.assert_allclose(s @ a, np.eye(4) - p, atol=1e-8)


def test_semigroup_against_scipy_free_oracle():
    sys = rw.damped_wave()
    g = rw.Ghat(sys, 0.3, 2.0)
    np.testing.assert_allclose(g @ g, rw.Ghat(sys, 0.3, 4.0), atol=1e-12)


def test_load_and_solve():
    sys = rw.load_system(os.path.join(DATA, "asymmetric_relaxation.json"))
    x, u = rw.solve(sys, 5.0, L=200.0, N=1024)
    assert u.shape == (1024, 2)
    dx = x[1] - x[0]
    # The conserved combination 2 u1 + u2 keeps its mass.
    assert np.sum(2 * u[:, 0] + u[:, 1]).real * dx == pytest.approx(2 * math.sqrt(math.pi), rel=1e-10)


def test_errors_carry_codes():
    with pytest.raises(rw.RelaxwaveError) as info:
        rw.load_system(os.path.join(DATA, "missing.json"))
    assert "ParseError" in str(info.value)
    with pytest.raises(rw.RelaxwaveError):
        rw.verify_theorem(rw.damped_wave(), pq=[(1, 2)])


def test_rates_pass():
    rep = rw.verify_theorem(rw.damped_wave(), pq=[(rw.INF, 1)], refined=True)
    assert all(e["pass"] for e in rep["entries"])
    assert rw.theorem_slope(math.inf, 1.0, True) == -1.5
