"""Exception hierarchy shared by every module."""


class JitLiqError(Exception):
    """Base class for package errors."""


class DomainError(JitLiqError, ValueError):
    """A parameter lies outside the admissible region."""


class ContractViolation(JitLiqError):
    """A simulator input breaks a game rule (negative order, range exhausted, ...)."""


class SolverError(JitLiqError, ArithmeticError):
    """A root-finder failed to bracket or converge."""


class NoNontrivialEquilibrium(JitLiqError):
    """The subgame has no equilibrium with finite, positive JIT liquidity."""


class UnboundedBestResponse(NoNontrivialEquilibrium):
    """The JIT LP's utility increases without bound in its deposit."""


class ConfigError(JitLiqError, ValueError):
    """Malformed run configuration."""
