"""Parameter records.

``MarketParams`` defaults to the thin-fee single-JIT market used throughout the
tests (f = 0.003, π = 1, ζ = 1.05, ζ_U = 1.02, α = 0.1).  When ``psi`` or
``psi_u`` is left as ``None`` the martingale value ζ/(ζ+1) is used.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field, replace

from .errors import DomainError


def martingale_psi(zeta: float) -> float:
    """Probability of the down move that keeps the expected price at p."""
    return zeta / (zeta + 1.0)


def _check_unit(name: str, value: float) -> None:
    if not (0.0 <= value <= 1.0):
        raise DomainError(f"{name} must lie in [0, 1], got {value!r}")


@dataclass(frozen=True)
class MarketParams:
    alpha: float = 0.1
    zeta: float = 1.05
    zeta_u: float = 1.02
    psi: float | None = None
    psi_u: float | None = None
    f: float = 0.003
    pi: float = 1.0
    p: float = 1.0
    e_p: float = 1.0
    n: int = 1
    lam: float = 1.0

    def __post_init__(self) -> None:
        if self.psi is None:
            object.__setattr__(self, "psi", martingale_psi(self.zeta))
        if self.psi_u is None:
            object.__setattr__(self, "psi_u", martingale_psi(self.zeta_u))
        for name in ("alpha", "psi", "psi_u", "pi", "lam"):
            _check_unit(name, getattr(self, name))
        if not (self.f >= 0.0 and math.isfinite(self.f)):
            raise DomainError(f"fee rate must be finite and nonnegative, got {self.f!r}")
        if not self.p > 0.0:
            raise DomainError("price must be positive")
        if not self.e_p > 0.0:
            raise DomainError("passive endowment must be positive")
        if int(self.n) != self.n or self.n < 1:
            raise DomainError("number of passive LPs must be a positive integer")
        if not self.zeta > 1.0 + self.f:
            raise DomainError("informed shock zeta must exceed 1 + f")
        if not self.zeta_u > 1.0 + self.f:
            raise DomainError("uninformed shock zeta_u must exceed 1 + f")

    def with_(self, **changes) -> "MarketParams":
        """Copy with changes; martingale beliefs are re-derived unless given."""
        if "zeta" in changes and "psi" not in changes:
            changes["psi"] = None
        if "zeta_u" in changes and "psi_u" not in changes:
            changes["psi_u"] = None
        return replace(self, **changes)

    def as_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class PoolParams:
    """Price range [a, b] of the pool; defaults give full-range liquidity."""

    p: float = 1.0
    f: float = 0.003
    a: float = 0.0
    b: float = math.inf

    def __post_init__(self) -> None:
        if not self.p > 0.0:
            raise DomainError("price must be positive")
        if not (0.0 <= self.a <= self.p <= self.b):
            raise DomainError("price range must satisfy 0 <= a <= p <= b")
        if self.a == self.b:
            raise DomainError("price range must be nondegenerate")
        if self.f < 0.0:
            raise DomainError("fee rate must be nonnegative")

    @classmethod
    def from_market(cls, market: MarketParams, a: float = 0.0, b: float = math.inf) -> "PoolParams":
        return cls(p=market.p, f=market.f, a=a, b=b)


@dataclass(frozen=True)
class CompetitionParams:
    """Two symmetric JIT LPs, each with endowment ``e_j`` risky coins."""

    market: MarketParams = field(default_factory=MarketParams)
    e_j: float = 3.0
    zeta_band: tuple[float, float] | None = None

    def __post_init__(self) -> None:
        if not self.e_j > 0.0:
            raise DomainError("JIT endowment must be positive")
        if self.zeta_band is not None:
            lo, hi = self.zeta_band
            if not (1.0 < lo < hi):
                raise DomainError("zeta band must satisfy 1 < lo < hi")

    @property
    def nu_bar(self) -> float:
        return self.e_j / self.market.e_p

    @property
    def e_j_adj(self) -> float:
        return math.sqrt(self.market.p) * self.e_j

    def with_market(self, **changes) -> "CompetitionParams":
        return replace(self, market=self.market.with_(**changes))
