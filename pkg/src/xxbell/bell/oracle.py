"""Closed-form correlation functions of the labelled four-site eigenstates.

Each state's correlation is a trigonometric polynomial in the four angles.
Terms are stored as (coefficient, pattern) where the pattern marks which
sites contribute sin (``x``) and which contribute cos (``z``). These tables
are transcribed by hand and serve as an independent check on the trace
computation in :mod:`xxbell.bell.correlations`.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

_R3 = np.sqrt(3.0)

_ROWS: dict[int, list[tuple[float, str]]] = {
    0: [(1.0, "zzzz")],
    1: [(-1.0, "zzzz"), (-_R3 / 4, "xxzz"), (_R3 / 4, "xzxz"), (-0.75, "zxxz"),
        (-0.25, "xzzx"), (_R3 / 4, "zxzx"), (-_R3 / 4, "zzxx")],
    2: [(-1.0, "zzzz"), (_R3 / 4, "xxzz"), (_R3 / 4, "xzxz"), (0.75, "zxxz"),
        (0.25, "xzzx"), (_R3 / 4, "zxzx"), (_R3 / 4, "zzxx")],
    3: [(-1.0, "zzzz"), (-_R3 / 4, "xxzz"), (-_R3 / 4, "xzxz"), (0.25, "zxxz"),
        (0.75, "xzzx"), (-_R3 / 4, "zxzx"), (-_R3 / 4, "zzxx")],
    4: [(-1.0, "zzzz"), (_R3 / 4, "xxzz"), (-_R3 / 4, "xzxz"), (-0.25, "zxxz"),
        (-0.75, "xzzx"), (-_R3 / 4, "zxzx"), (_R3 / 4, "zzxx")],
    5: [(1.0, "zzzz"), (_R3 / 2, "xxzz"), (-_R3 / 4, "xzxz"), (0.5, "zxxz"),
        (0.5, "xzzx"), (-_R3 / 4, "zxzx"), (_R3 / 2, "zzxx"), (1.0, "xxxx")],
    6: [(1.0, "zzzz"), (1.0, "zxxz"), (-1.0, "xzzx"), (-1.0, "xxxx")],
    # the printed rows for 7 and 8 drop the "+" before their third term
    7: [(1.0, "zzzz"), (2 * _R3 / 5, "xzxz"), (2 * _R3 / 5, "zxzx"), (0.6, "xxxx")],
    8: [(1.0, "zzzz"), (_R3 / 10, "xzxz"), (_R3 / 10, "zxzx"), (-0.6, "xxxx")],
    9: [(1.0, "zzzz"), (-1.0, "zxxz"), (1.0, "xzzx"), (-1.0, "xxxx")],
    10: [(1.0, "zzzz"), (-_R3 / 2, "xxzz"), (-_R3 / 4, "xzxz"), (-0.5, "zxxz"),
         (-0.5, "xzzx"), (-_R3 / 4, "zxzx"), (-_R3 / 2, "zzxx"), (1.0, "xxxx")],
}
# bit-flip partners share a correlation function
for _mu, _partner in ((15, 0), (11, 1), (12, 2), (13, 3), (14, 4)):
    _ROWS[_mu] = _ROWS[_partner]


def eigenstate_correlation_oracle(mu: int, thetas: Sequence[float]) -> float:
    """Closed-form correlation of labelled eigenstate ``mu`` (0..15)."""
    if int(mu) != mu or not 0 <= mu <= 15:
        raise IndexError(f"eigenstate label must be in 0..15, got {mu!r}")
    thetas = np.asarray(thetas, dtype=float)
    if thetas.shape != (4,):
        raise ValueError(f"expected 4 angles, got shape {thetas.shape}")
    s, c = np.sin(thetas), np.cos(thetas)
    total = 0.0
    for coeff, pattern in _ROWS[int(mu)]:
        term = coeff
        for k, p in enumerate(pattern):
            term *= s[k] if p == "x" else c[k]
        total += term
    return float(total)
