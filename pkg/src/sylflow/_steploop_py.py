"""Pure-NumPy per-step propagation loop (fallback kernel).

Same contract as the compiled ``_steploop`` extension: iterate the affine
map x <- R x + s, write the state at the requested step indices, and stop
early (reporting the sample index) if the state exceeds the guard or goes
non-finite.
"""

from __future__ import annotations

import numpy as np


def run(R, s, x0, n_steps, sample_steps, guard):
    d = R.shape[0]
    n_samp = sample_steps.shape[0]
    out = np.empty((n_samp, d))
    x = x0.copy()
    y = np.empty(d)
    si = 0
    if sample_steps[0] == 0:
        out[0] = x
        if _tripped(x, guard):
            return out, 0
        si = 1
    for step in range(1, n_steps + 1):
        np.matmul(R, x, out=y)
        y += s
        x, y = y, x
        if si < n_samp and step == sample_steps[si]:
            out[si] = x
            if _tripped(x, guard):
                return out, si
            si += 1
    return out, -1


def _tripped(x, guard):
    m = float(np.max(np.abs(x)))
    return not np.isfinite(m) or m > guard
