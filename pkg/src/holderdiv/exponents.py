"""Hölder conjugate exponent pairs.

Two exponents ``alpha`` and ``beta`` are Hölder conjugate when
``1/alpha + 1/beta = 1``.  The forward Hölder inequality requires
``alpha > 1`` (hence ``beta > 1``); the reverse inequality holds when
``alpha * beta < 0``, i.e. ``0 < alpha < 1`` or ``alpha < 0``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = ["ConjugatePair", "conjugate_exponent"]

_CONJUGACY_TOL = 1e-12


def conjugate_exponent(alpha: float) -> float:
    """Return the Hölder conjugate ``alpha / (alpha - 1)`` of ``alpha``."""
    if alpha == 1.0:
        raise ValueError("alpha = 1 has no finite Hölder conjugate")
    return alpha / (alpha - 1.0)


@dataclass(frozen=True)
class ConjugatePair:
    """A pair of Hölder conjugate exponents.

    Attributes
    ----------
    alpha, beta : float
        Exponents satisfying ``1/alpha + 1/beta = 1`` to 1e-12.
    """

    alpha: float
    beta: float

    def __post_init__(self) -> None:
        a, b = self.alpha, self.beta
        if not (math.isfinite(a) and math.isfinite(b)) or a == 0.0 or b == 0.0:
            raise ValueError(f"invalid Hölder exponents ({a}, {b})")
        if abs(1.0 / a + 1.0 / b - 1.0) > _CONJUGACY_TOL:
            raise ValueError(
                f"exponents ({a}, {b}) are not conjugate: 1/alpha + 1/beta != 1"
            )

    @classmethod
    def from_alpha(cls, alpha: float) -> "ConjugatePair":
        """Build the pair ``(alpha, alpha/(alpha-1))``."""
        return cls(alpha, conjugate_exponent(alpha))

    @property
    def is_forward(self) -> bool:
        """True in the forward (ordinary Hölder) regime ``alpha > 1``."""
        return self.alpha > 1.0

    @property
    def regime(self) -> str:
        """``"forward"`` for ``alpha > 1``, else ``"reverse"``."""
        return "forward" if self.is_forward else "reverse"

    def swapped(self) -> "ConjugatePair":
        """The same pair with the roles of alpha and beta exchanged."""
        return ConjugatePair(self.beta, self.alpha)


def as_pair(pair: "ConjugatePair | float") -> ConjugatePair:
    """Coerce a bare ``alpha`` into a :class:`ConjugatePair`."""
    if isinstance(pair, ConjugatePair):
        return pair
    return ConjugatePair.from_alpha(float(pair))
