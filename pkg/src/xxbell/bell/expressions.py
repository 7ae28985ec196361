"""Two-setting full-correlation Bell expressions for 2, 3 and 4 sites."""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass

import numpy as np

from ..errors import DimensionError


@dataclass(frozen=True)
class BellExpression:
    """Coefficient table over setting tuples plus its local-realistic bound.

    ``signs`` has shape ``(2,) * n_sites``; ``signs[s1-1, ..., sN-1]`` is the
    coefficient of the correlation measured with settings (s1, ..., sN).
    """

    n_sites: int
    signs: np.ndarray
    classical_bound: float
    name: str = ""

    def __post_init__(self):
        signs = np.asarray(self.signs, dtype=float)
        if signs.shape != (2,) * self.n_sites:
            raise DimensionError(f"sign table shape {signs.shape} does not match {self.n_sites} sites")
        if not np.all(np.isin(signs, (-1.0, 1.0))):
            raise ValueError("sign table entries must be +1 or -1")
        signs.setflags(write=False)
        object.__setattr__(self, "signs", signs)

    def terms(self) -> list[tuple[tuple[int, ...], int]]:
        """``[(settings tuple with entries 1/2, sign), ...]`` in lexicographic order."""
        return [
            (tuple(s + 1 for s in idx), int(self.signs[idx]))
            for idx in itertools.product((0, 1), repeat=self.n_sites)
        ]

    def relabeled(self) -> "BellExpression":
        """Same inequality with settings 1 and 2 swapped at every site."""
        flipped = self.signs[(slice(None, None, -1),) * self.n_sites]
        return BellExpression(self.n_sites, flipped.copy(), self.classical_bound, self.name + "-relabeled")

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "n_sites": self.n_sites,
            "classical_bound": self.classical_bound,
            "terms": [
                {"settings": "".join(map(str, s)), "sign": sign} for s, sign in self.terms()
            ],
        }

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)


def _table(n_sites: int, order: list[int]) -> np.ndarray:
    return np.array(order, dtype=float).reshape((2,) * n_sites)


# Q11, Q12, Q21, Q22
CHSH = BellExpression(2, _table(2, [1, 1, 1, -1]), 2.0, "chsh")

# Q111 ... Q222; sign depends only on how many sites use setting 2 (+,-,-,+)
ZB3 = BellExpression(3, _table(3, [1, -1, -1, -1, -1, -1, -1, 1]), 4.0, "zb3")

# Q1111 ... Q2222, term for term
ZB4 = BellExpression(
    4,
    _table(4, [1, -1, -1, -1, -1, -1, -1, 1, -1, -1, -1, 1, -1, 1, 1, 1]),
    4.0,
    "zb4",
)

_BY_SITES = {2: CHSH, 3: ZB3, 4: ZB4}


def expression_for(n_sites: int) -> BellExpression:
    """Default Bell expression for a chain of ``n_sites``."""
    try:
        return _BY_SITES[n_sites]
    except KeyError:
        raise DimensionError(
            f"no Bell expression for {n_sites} sites (supported: {sorted(_BY_SITES)})"
        ) from None
