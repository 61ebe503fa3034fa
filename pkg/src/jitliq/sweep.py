"""Parameter sweeps over one or two axes with deterministic row order."""

from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import config
from .baseline import solve_equilibrium, zeta_lower_lambda
from .cournot import cournot_outcome
from .errors import ConfigError, DomainError, NoNontrivialEquilibrium, SolverError
from .fee_tier import optimal_lambda, welfare, zeta_hat
from .thresholds import ThresholdKind, classify, classify_cournot, zeta_star, zeta_star_cournot

AXIS_KEYS = config.MARKET_KEYS + ("e_j", "d_p")

TARGETS = (
    "U", "R", "C", "W", "mu", "nu", "mu_i", "d_p_star", "exists",
    "zeta_lower", "zeta_star", "zeta_hat", "zeta_star_cournot",
    "lambda_star", "classification", "nu_hat", "mu_c", "nu_c",
)

COLUMNS = ("axis1", "axis2", "target", "value", "status")


@dataclass(frozen=True)
class Axis:
    name: str
    lo: float
    hi: float
    n: int

    @classmethod
    def parse(cls, text: str) -> "Axis":
        parts = text.split(":")
        if len(parts) != 4:
            raise ConfigError(f"axis must look like name:lo:hi:n, got '{text}'")
        name = parts[0].strip()
        if name not in AXIS_KEYS:
            raise ConfigError(f"unknown sweep parameter '{name}'")
        try:
            ax = cls(name, float(parts[1]), float(parts[2]), int(parts[3]))
        except ValueError:
            raise ConfigError(f"bad axis bounds in '{text}'") from None
        if ax.n < 2:
            raise ConfigError("sweep axes need at least 2 points")
        return ax

    def values(self) -> list[float]:
        return [float(x) for x in np.linspace(self.lo, self.hi, self.n)]


@dataclass
class SweepSpec:
    target: str
    axis1: Axis
    axis2: Axis | None = None
    fixed: dict = field(default_factory=config.defaults)
    mode: str = "baseline"

    def __post_init__(self) -> None:
        if self.target not in TARGETS:
            raise ConfigError(f"unknown sweep target '{self.target}'")
        if self.mode not in config.MODES:
            raise ConfigError(f"unknown mode '{self.mode}'")

    @classmethod
    def from_config(cls, cfg: dict) -> "SweepSpec":
        if not cfg.get("axis1"):
            raise ConfigError("sweep needs axis1=name:lo:hi:n")
        ax2 = Axis.parse(cfg["axis2"]) if cfg.get("axis2") else None
        return cls(cfg["target"], Axis.parse(cfg["axis1"]), ax2, dict(cfg), cfg["mode"])

    def points(self) -> list[tuple[float, float | None]]:
        second = self.axis2.values() if self.axis2 else [None]
        return [(x, y) for x in self.axis1.values() for y in second]


@dataclass
class Row:
    axis1: float
    axis2: float | None
    target: str
    value: object
    status: str


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, (float, int, np.floating)):
        return format(float(v), ".17g")
    return str(v)


def evaluate_point(target: str, cfg: dict) -> tuple[object, str]:
    """Value of ``target`` at one configuration, plus a status string."""
    mode = cfg["mode"]
    try:
        m = config.market_from(cfg)
        if mode.startswith("cournot") and target in ("U", "R", "mu", "nu", "nu_hat", "mu_c", "nu_c", "classification"):
            comp = config.competition_from(cfg)
            d = math.sqrt(m.p) * (cfg["d_p"] if cfg.get("d_p") is not None else m.e_p)
            if target == "classification":
                return classify_cournot(comp, d).value, "ok"
            out = cournot_outcome(comp, d, with_k=False)
            key = {"mu": "mu_c", "nu": "nu_c", "R": "R_comp"}.get(target, target)
            return getattr(out, key), "ok"
        if target == "zeta_lower":
            return zeta_lower_lambda(m.f, m.lam, m.pi), "ok"
        if target == "zeta_star":
            res = zeta_star(m.f, m.pi)
            return res.value, "ok" if res.kind is ThresholdKind.THRESHOLD else res.kind.value
        if target == "zeta_star_cournot":
            comp = config.competition_from(cfg)
            d = math.sqrt(m.p) * (cfg["d_p"] if cfg.get("d_p") is not None else m.e_p)
            res = zeta_star_cournot(comp, d)
            return res.value, "ok" if res.kind is ThresholdKind.THRESHOLD else res.kind.value
        if target == "zeta_hat":
            v = zeta_hat(m.f, m.pi)
            return v, "ok" if v is not None else "NotApplicable"
        if target == "lambda_star":
            v = optimal_lambda(m)
            return v, "ok" if v is not None else "Freeze"
        if target == "classification":
            return classify(m).value, "ok"
        eq = solve_equilibrium(m)
        if target == "exists":
            return eq.exists, "ok"
        if not eq.exists:
            return None, "NoEquilibrium"
        if target == "W":
            return welfare(m, unconditional=bool(cfg.get("unconditional"))), "ok"
        return getattr(eq, target), "ok"
    except NoNontrivialEquilibrium:
        return None, "NoEquilibrium"
    except (DomainError, ConfigError):
        return None, "DomainError"
    except SolverError:
        return None, "SolverError"


def _row(job: tuple[SweepSpec, float, float | None]) -> Row:
    spec, x, y = job
    cfg = dict(spec.fixed)
    cfg["mode"] = spec.mode
    cfg[spec.axis1.name] = x
    if spec.axis2 is not None:
        cfg[spec.axis2.name] = y
    if spec.axis1.name == "n" or (spec.axis2 and spec.axis2.name == "n"):
        cfg["n"] = int(round(cfg["n"]))
    value, status = evaluate_point(spec.target, cfg)
    return Row(x, y, spec.target, value, status)


def run_sweep(spec: SweepSpec, jobs: int = 1) -> list[Row]:
    """Rows in row-major order over (axis1, axis2); independent of ``jobs``."""
    work = [(spec, x, y) for x, y in spec.points()]
    if jobs <= 1:
        return [_row(w) for w in work]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_row, work, chunksize=max(1, len(work) // (4 * jobs))))


def to_csv(rows: list[Row]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(COLUMNS)
    for r in rows:
        w.writerow([_fmt(r.axis1), _fmt(r.axis2), r.target, _fmt(r.value), r.status])
    return buf.getvalue()
