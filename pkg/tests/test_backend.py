"""Step-loop kernel: the compiled and pure-numpy implementations must agree
bit-for-bit-close, honor the sampling contract, and trip the norm guard."""

import numpy as np
import pytest

from sylflow import DimensionError, kernel_backend
from sylflow.backend import propagate
from sylflow import _steploop_py

try:
    from sylflow import _steploop as _compiled
except ImportError:  # pragma: no cover - fallback environments
    _compiled = None


def _contraction(d: int, seed: int = 0):
    r = np.random.default_rng(seed)
    Q, _ = np.linalg.qr(r.normal(size=(d, d)))
    R = 0.999 * Q
    s = 0.01 * r.normal(size=d)
    x0 = r.normal(size=d)
    return R, s, x0


def test_backend_name_is_known():
    assert kernel_backend() in ("compiled", "numpy")


def test_propagate_matches_direct_iteration():
    R, s, x0 = _contraction(6, seed=1)
    steps = np.array([0, 3, 7, 10], dtype=np.int64)
    out, bad = propagate(R, s, x0, 10, steps)
    assert bad is None
    x = x0.copy()
    expected = [x0.copy()]
    for k in range(1, 11):
        x = R @ x + s
        if k in (3, 7, 10):
            expected.append(x.copy())
    assert np.allclose(out, np.vstack(expected), atol=1e-13, rtol=0.0)


@pytest.mark.skipif(_compiled is None, reason="compiled kernel not built")
def test_compiled_and_python_kernels_agree():
    R, s, x0 = _contraction(24, seed=2)
    steps = np.arange(0, 501, 25, dtype=np.int64)
    out_c, bad_c = _compiled.run(R, s, x0, 500, steps, 1e12)
    out_p, bad_p = _steploop_py.run(R, s, x0, 500, steps, 1e12)
    assert bad_c == bad_p == -1
    assert np.max(np.abs(out_c - out_p)) <= 1e-12


def test_guard_trips_on_divergence():
    R = 2.0 * np.eye(3)
    s = np.zeros(3)
    x0 = np.ones(3)
    steps = np.arange(0, 101, 10, dtype=np.int64)
    out, bad = propagate(R, s, x0, 100, steps, guard=1e6)
    assert bad is not None
    # state doubles every step: first sampled step past the guard is 2^k > 1e6
    assert steps[bad] == 20  # 2^20 > 1e6, 2^10 < 1e6
    assert np.all(np.isfinite(out[:bad]))


def test_guard_trips_on_nonfinite():
    R = np.array([[np.nan]])
    out, bad = propagate(R, np.zeros(1), np.ones(1), 5, np.array([0, 5]), guard=1e12)
    assert bad is not None


def test_propagate_validation():
    R, s, x0 = _contraction(4, seed=3)
    with pytest.raises(DimensionError):
        propagate(R, s, x0, 10, np.array([0, 5, 5, 10]))  # not strictly increasing
    with pytest.raises(DimensionError):
        propagate(R, s, x0, 10, np.array([0, 11]))  # beyond n_steps
    with pytest.raises(DimensionError):
        propagate(R, s[:3], x0, 10, np.array([0, 10]))
    with pytest.raises(DimensionError):
        propagate(np.ones((3, 4)), s, x0, 10, np.array([0, 10]))
    with pytest.raises(DimensionError):
        propagate(R, s, x0, 10, np.array([], dtype=np.int64))
