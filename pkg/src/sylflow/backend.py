"""Selection of the per-step propagation kernel.

The integration hot loop — repeated x <- R x + s with a fixed dense R —
lives in a small compiled extension when the build produced one, and in a
NumPy fallback otherwise. Both expose the same ``run`` contract and agree to
floating-point noise; ``kernel_backend()`` reports which one is active.
"""

from __future__ import annotations

import numpy as np

from .errors import DimensionError

try:  # compiled kernel, produced by the optional extension build
    from . import _steploop as _impl

    _BACKEND = "compiled"
except ImportError:  # pure-Python install
    from . import _steploop_py as _impl

    _BACKEND = "numpy"

__all__ = ["kernel_backend", "propagate"]


def kernel_backend() -> str:
    """Name of the active per-step kernel: 'compiled' or 'numpy'."""
    return _BACKEND


def propagate(
    R: np.ndarray,
    s: np.ndarray,
    x0: np.ndarray,
    n_steps: int,
    sample_steps: np.ndarray,
    guard: float = 1e12,
) -> tuple[np.ndarray, int | None]:
    """Iterate x <- R x + s for ``n_steps`` steps, recording sampled states.

    ``sample_steps`` must be strictly increasing step indices within
    [0, n_steps]. Returns (samples, bad) where samples has one row per
    sample step and bad is the index of the first sample whose state
    exceeded ``guard`` in max-abs (or went non-finite), or None. Rows after
    a tripped guard are left unspecified.
    """
    R = np.ascontiguousarray(R, dtype=float)
    s = np.ascontiguousarray(s, dtype=float)
    x0 = np.ascontiguousarray(x0, dtype=float)
    steps = np.ascontiguousarray(sample_steps, dtype=np.int64)
    d = R.shape[0]
    if R.ndim != 2 or R.shape[1] != d:
        raise DimensionError(f"R must be square, got {R.shape}")
    if s.shape != (d,) or x0.shape != (d,):
        raise DimensionError("s and x0 must match R's dimension")
    if steps.ndim != 1 or steps.size == 0:
        raise DimensionError("sample_steps must be a nonempty 1-D index array")
    if np.any(np.diff(steps) <= 0) or steps[0] < 0 or steps[-1] > n_steps:
        raise DimensionError("sample_steps must strictly increase within [0, n_steps]")
    out, bad = _impl.run(R, s, x0, int(n_steps), steps, float(guard))
    return out, (None if bad < 0 else int(bad))
