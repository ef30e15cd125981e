"""Model parameters for the minimal step-reinforced random walk.

The walk moves forward (+1 count) or rests at each step.  A uniformly
chosen past step is consulted: a past forward step is repeated with
probability ``p``, a past rest turns into a forward move with probability
``q``.  The first step is forward with probability ``s``.
"""

from dataclasses import dataclass, field


@dataclass(frozen=True)
class WalkParams:
    """Parameters (p, q, s) with derived alpha = p - q and rho = q / (1 - alpha).

    ``alpha`` is the effective reinforcement strength; ``rho`` is the
    asymptotic forward fraction when q > 0.
    """

    p: float
    q: float = 0.0
    s: float = 1.0
    alpha: float = field(init=False)
    rho: float = field(init=False)

    def __post_init__(self):
        if not 0.0 < self.p < 1.0:
            raise ValueError(f"p must be in (0,1), got {self.p}")
        if not 0.0 <= self.q < 1.0:
            raise ValueError(f"q must be in [0,1), got {self.q}")
        if not 0.0 <= self.s <= 1.0:
            raise ValueError(f"s must be in [0,1], got {self.s}")
        alpha = self.p - self.q
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "rho", self.q / (1.0 - alpha))

    def require_supercritical(self) -> "WalkParams":
        """Check 0 <= q < p < 1 (alpha in (0,1)), needed by the
        percolation-based formulas.  Returns self for chaining."""
        if not self.q < self.p:
            raise ValueError(
                f"need 0 <= q < p < 1 so that alpha in (0,1); "
                f"got p={self.p}, q={self.q}"
            )
        return self

    @property
    def laziest(self) -> bool:
        """True in the q=0, s=1 regime where the closed-form factorial
        moments apply."""
        return self.q == 0.0 and self.s == 1.0
