"""Flat key-value run configuration shared by config files, ``--set`` and sweeps."""

from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Any

from .errors import ConfigError, DomainError
from .params import CompetitionParams, MarketParams, PoolParams

MODES = ("baseline", "two_tier", "cournot", "cournot_two_tier")


def _float(v: Any) -> float:
    if isinstance(v, str) and v.strip().lower() in ("inf", "infinity"):
        return math.inf
    return float(v)


def _opt_float(v: Any) -> float | None:
    if v is None or (isinstance(v, str) and v.strip().lower() in ("", "none", "null")):
        return None
    return _float(v)


def _str(v: Any) -> str:
    return str(v)


def _int(v: Any) -> int:
    if isinstance(v, float) and not v.is_integer():
        raise ValueError(f"{v} is not an integer")
    return int(v)


def _opt_list(v: Any) -> list[float] | None:
    if v is None or v == "":
        return None
    if isinstance(v, (list, tuple)):
        return [_float(x) for x in v]
    return [_float(x) for x in str(v).split(",") if x.strip()]


# key -> (parser, default, description)
SCHEMA: dict[str, tuple] = {
    "mode": (_str, "baseline", "baseline | two_tier | cournot | cournot_two_tier"),
    "alpha": (_float, 0.1, "informed-arrival probability"),
    "zeta": (_float, 1.05, "informed price-shock size"),
    "zeta_u": (_float, 1.02, "uninformed private-value shock size"),
    "psi": (_opt_float, None, "probability of the down shock (default zeta/(zeta+1))"),
    "psi_u": (_opt_float, None, "probability of the low private value (default zeta_u/(zeta_u+1))"),
    "f": (_float, 0.003, "fee rate"),
    "pi": (_float, 1.0, "JIT arrival probability"),
    "p": (_float, 1.0, "price of the risky coin"),
    "e_p": (_float, 1.0, "total passive endowment (risky coins)"),
    "n": (_int, 1, "number of passive LPs"),
    "lam": (_float, 1.0, "JIT fee transfer rate (two-tier modes)"),
    "e_j": (_float, 3.0, "endowment of each competing JIT LP (risky coins)"),
    "d_p": (_opt_float, None, "passive deposit for competitive reports (default e_p)"),
    "zeta_band_hi": (_opt_float, None, "upper edge of the shock band for the competitive threshold"),
    "a": (_float, 0.0, "lower price bound of the pool range"),
    "b": (_float, math.inf, "upper price bound of the pool range"),
    "scenario": (_str, "US", "IS | IB | US | UB"),
    "arrivals": (_str, "A", "JIT arrivals for simulate, e.g. A, NA, A,A"),
    "q": (_opt_float, None, "swap order size for simulate (coins in; default equilibrium)"),
    "d_j": (_opt_list, None, "JIT deposits for simulate (risky coins, comma-separated)"),
    "seed": (_int, 20240101, "seed for random oracle draws"),
    "draws": (_int, 20, "number of random oracle draws"),
    "grid_n": (_int, 4001, "oracle grid points"),
    "refine_rounds": (_int, 3, "oracle refinement rounds"),
    "n_grid": (_int, 101, "lambda grid size for fee-design"),
    "unconditional": (_int, 0, "1 to weight welfare by (1 - alpha)"),
    "target": (_str, "U", "sweep output name"),
    "axis1": (_str, "", "sweep axis name:lo:hi:n"),
    "axis2": (_str, "", "optional second sweep axis name:lo:hi:n"),
    "samples": (_opt_list, None, "zeta_u points to classify in threshold reports"),
}


def defaults() -> dict:
    return {k: v[1] for k, v in SCHEMA.items()}


def coerce(key: str, value: Any) -> Any:
    if key not in SCHEMA:
        raise ConfigError(f"unknown configuration key '{key}'")
    try:
        return SCHEMA[key][0](value)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad value for '{key}': {value!r} ({exc})") from None


def parse_assignment(text: str) -> tuple[str, Any]:
    if "=" not in text:
        raise ConfigError(f"expected key=value, got '{text}'")
    key, value = text.split("=", 1)
    key = key.strip()
    return key, coerce(key, value.strip())


def load(path: str | Path | None, overrides: list[str] | None = None) -> dict:
    """Defaults, then the JSON config file, then ``key=value`` overrides."""
    cfg = defaults()
    if path:
        try:
            raw = json.loads(Path(path).read_text())
        except OSError as exc:
            raise ConfigError(f"cannot read config file {path}: {exc}") from None
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config file {path} is not valid JSON: {exc}") from None
        if not isinstance(raw, dict):
            raise ConfigError("config file must hold a flat JSON object")
        for k, v in raw.items():
            cfg[k] = coerce(k, v)
    for item in overrides or []:
        k, v = parse_assignment(item)
        cfg[k] = v
    if cfg["mode"] not in MODES:
        raise ConfigError(f"mode must be one of {', '.join(MODES)}")
    return cfg


MARKET_KEYS = ("alpha", "zeta", "zeta_u", "psi", "psi_u", "f", "pi", "p", "e_p", "n", "lam")


def market_from(cfg: dict) -> MarketParams:
    kw = {k: cfg[k] for k in MARKET_KEYS}
    if cfg["mode"] in ("baseline", "cournot"):
        kw["lam"] = 1.0
    try:
        return MarketParams(**kw)
    except DomainError as exc:
        raise ConfigError(str(exc)) from None


def competition_from(cfg: dict) -> CompetitionParams:
    m = market_from(cfg)
    band = None
    if cfg.get("zeta_band_hi") is not None:
        from .baseline import zeta_lower

        band = (zeta_lower(m.f, m.pi), cfg["zeta_band_hi"])
    try:
        return CompetitionParams(m, e_j=cfg["e_j"], zeta_band=band)
    except DomainError as exc:
        raise ConfigError(str(exc)) from None


def pool_from(cfg: dict) -> PoolParams:
    try:
        return PoolParams(p=cfg["p"], f=cfg["f"], a=cfg["a"], b=cfg["b"])
    except DomainError as exc:
        raise ConfigError(str(exc)) from None
