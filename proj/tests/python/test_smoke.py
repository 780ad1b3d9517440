import math

import numpy as np
import pytest

import voigt2d as v


def grid(m):
    x = 2 * np.pi * np.arange(m) / m
    return np.meshgrid(x, x)  # X1[x2, x1], X2[x2, x1]


def test_version():
    assert v.__version__ == "0.1.0"


def test_eigenfunction_layout():
    w = v.generate("eigenfunction", 32, k1=1, k2=0)
    x1, _ = grid(32)
    np.testing.assert_allclose(w, np.cos(x1), atol=1e-14)


def test_norms_of_cos():
    x1, x2 = grid(32)
    w = np.cos(x1) + np.cos(2 * x2)
    # ||w||_2^2 = 2 pi^2 + 2 pi^2
    assert v.l2_norm(w) == pytest.approx(2 * math.pi, rel=1e-12)
    assert v.enstrophy(w) == pytest.approx(4 * math.pi**2, rel=1e-12)
    # |u_hat|^2 = |w_hat|^2 / |k|^2
    assert v.energy(w) == pytest.approx(2 * math.pi**2 * (1 + 0.25), rel=1e-12)
    assert v.lp_norm(w, math.inf) == pytest.approx(2.0, rel=1e-12)


def test_helmholtz_filter():
    x1, _ = grid(32)
    w = np.cos(3 * x1)
    np.testing.assert_allclose(v.helmholtz_filter(w, 0.1), w / 1.9, atol=1e-14)


def test_simulate_steady_state():
    w = v.generate("eigenfunction", 32, k1=1, k2=1)
    out = v.simulate(w, alpha=0.01, t_end=0.2, record_every=0.1, snapshot_every=0.2)
    np.testing.assert_allclose(out["t"], [0.0, 0.1, 0.2])
    np.testing.assert_allclose(out["enstrophy"], out["enstrophy"][0], rtol=1e-12)
    t, last = out["snapshots"][-1]
    assert t == 0.2
    np.testing.assert_allclose(last, w, atol=1e-12)


def test_fit_rate_recovers_power_law():
    a = [1e-1, 1e-2, 1e-3]
    slope, intercept, _ = v.fit_rate(a, [3 * x**0.5 for x in a])
    assert slope == pytest.approx(0.5, abs=1e-12)
    assert intercept == pytest.approx(math.log(3), abs=1e-12)


def test_theory_and_cutoff():
    t = v.theoretical_slope("smooth_s_ge_3")
    assert t["velocity"] == pytest.approx(0.5)
    assert v.choose_cutoff(1e-4) == 10


def test_snapshot_roundtrip(tmp_path):
    w = v.generate("random_sobolev", 16, seed=5, sigma=2.0, band=4)
    path = tmp_path / "w.vfld"
    v.write_snapshot(path, w, time=0.25, alpha=1e-3)
    t, a, back = v.read_snapshot(path)
    assert (t, a) == (0.25, 1e-3)
    assert np.array_equal(back, w)


def test_errors_map_to_python():
    with pytest.raises(ValueError):
        v.generate("nonsense", 32)
    with pytest.raises(ValueError):
        v.l2_norm(np.zeros((4, 5)))
    with pytest.raises(v.FormatError):
        v.read_snapshot(__file__)
