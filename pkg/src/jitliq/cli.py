"""Command-line front end.

Exit codes: 0 success, 1 configuration error, 2 no equilibrium,
3 verification failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

from . import config
from .amm import Scenario, Strategies, SwapOrder, simulate_game
from .baseline import solve_equilibrium, zeta_lower_lambda
from .cournot import cournot_outcome
from .errors import ConfigError, ContractViolation, DomainError, NoNontrivialEquilibrium
from .fee_tier import fee_design_report, zeta_hat
from .oracle import GridSpec, run_oracle_suite
from .sweep import SweepSpec, run_sweep, to_csv
from .thresholds import threshold_report, zeta_star_closed

EXIT_OK, EXIT_CONFIG, EXIT_NOEQ, EXIT_VERIFY = 0, 1, 2, 3


def _json_default(obj):
    if isinstance(obj, float) and not math.isfinite(obj):
        return str(obj)
    if hasattr(obj, "value"):
        return obj.value
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def _clean(obj):
    """Replace non-finite floats so the output stays valid JSON."""
    if isinstance(obj, float) and not math.isfinite(obj):
        return None if math.isnan(obj) else ("inf" if obj > 0 else "-inf")
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    return obj


def _emit(text: str, output: str | None) -> None:
    if output:
        try:
            Path(output).write_text(text, newline="\n")
        except OSError as exc:
            raise ConfigError(f"cannot write {output}: {exc}") from None
    else:
        sys.stdout.write(text)


def _emit_json(doc: dict, output: str | None) -> None:
    _emit(json.dumps(_clean(doc), indent=2, sort_keys=False, default=_json_default) + "\n", output)


def _echo(cfg: dict) -> dict:
    """Input parameters with defaults (martingale beliefs included) resolved."""
    return {**config.market_from(cfg).as_dict(), "mode": cfg["mode"]}


def cmd_equilibrium(cfg: dict, args) -> int:
    m = config.market_from(cfg)
    if cfg["mode"].startswith("cournot"):
        comp = config.competition_from(cfg)
        d = math.sqrt(m.p) * (cfg["d_p"] if cfg["d_p"] is not None else m.e_p)
        try:
            out = cournot_outcome(comp, d)
        except NoNontrivialEquilibrium as exc:
            _emit_json({"exists": False, "reason": str(exc), "input": _echo(cfg)}, args.output)
            return EXIT_NOEQ
        doc = {"exists": True, **out.as_dict(), "input": _echo(cfg)}
        _emit_json(doc, args.output)
        return EXIT_OK
    eq = solve_equilibrium(m)
    _emit_json({**eq.as_dict(), "input": _echo(cfg)}, args.output)
    return EXIT_OK if eq.exists else EXIT_NOEQ


def cmd_thresholds(cfg: dict, args) -> int:
    m = config.market_from(cfg)
    comp = config.competition_from(cfg) if cfg["mode"].startswith("cournot") else None
    d = None
    if comp is not None and cfg["d_p"] is not None:
        d = math.sqrt(m.p) * cfg["d_p"]
    rep = threshold_report(m, comp, d, cfg["samples"] or ())
    doc = rep.as_dict()
    zs = rep.zeta_star.value
    doc["closed_form_match"] = (
        None if rep.zeta_star_closed is None or zs is None else abs(zs - rep.zeta_star_closed) <= 1e-6
    )
    doc["zeta_lower_lambda"] = zeta_lower_lambda(m.f, m.lam, m.pi)
    doc["zeta_hat"] = zeta_hat(m.f, m.pi)
    doc["fbar_ok"] = m.f < m.pi
    doc["fbar_limit"] = m.pi
    doc["zeta_star_closed_value"] = zeta_star_closed(m.f)
    doc["input"] = _echo(cfg)
    _emit_json(doc, args.output)
    return EXIT_OK


def cmd_fee_design(cfg: dict, args) -> int:
    m = config.market_from({**cfg, "mode": "two_tier"})
    rep = fee_design_report(m, cfg["n_grid"], bool(cfg["unconditional"]))
    doc = rep.as_dict()
    doc["input"] = _echo(cfg)
    _emit_json(doc, args.output)
    return EXIT_OK


def cmd_sweep(cfg: dict, args) -> int:
    spec = SweepSpec.from_config(cfg)
    rows = run_sweep(spec, jobs=args.jobs)
    _emit(to_csv(rows), args.output)
    return EXIT_OK


def cmd_simulate(cfg: dict, args) -> int:
    m = config.market_from(cfg)
    pool = config.pool_from(cfg)
    try:
        scenario = Scenario(cfg["scenario"].upper())
    except ValueError:
        raise ConfigError("scenario must be one of IS, IB, US, UB") from None
    flags = [a.strip().upper() for a in cfg["arrivals"].split(",") if a.strip()]
    if any(a not in ("A", "NA") for a in flags):
        raise ConfigError("arrivals are comma-separated A or NA flags")
    arrivals = tuple(a == "A" for a in flags)

    eq = solve_equilibrium(m)
    if cfg["q"] is None or cfg["d_j"] is None:
        if not eq.exists:
            _emit_json({"exists": False, "reason": "no equilibrium to draw default strategies from"}, args.output)
            return EXIT_NOEQ
    d_p = m.e_p
    d_adj = math.sqrt(m.p) * d_p
    if cfg["q"] is not None:
        q = cfg["q"]
    else:
        mult = eq.mu_i if scenario.informed else eq.mu
        q = mult * d_adj * (1.0 if scenario.sell else m.p)
    if cfg["d_j"] is not None:
        deps = tuple(cfg["d_j"])
    elif cfg["mode"].startswith("cournot") and len(arrivals) == 2:
        deps = (cfg["e_j"], cfg["e_j"])
    else:
        per = 0.0 if scenario.informed else eq.nu * d_p
        deps = (per,) * len(arrivals)
    if len(deps) != len(arrivals):
        raise ConfigError("give one JIT deposit per arrival flag")
    order = SwapOrder(q_r=q) if scenario.sell else SwapOrder(q_s=q)
    try:
        res = simulate_game(pool, m, scenario, Strategies(d_p, order, deps), arrivals)
    except ContractViolation as exc:
        raise ConfigError(str(exc)) from None
    lines = [json.dumps(_clean({"kind": "state", **s.as_dict()})) for s in res.trace]
    lines.append(json.dumps(_clean({"kind": "payoffs", "scenario": scenario.value, **res.payoffs()})))
    _emit("\n".join(lines) + "\n", args.output)
    return EXIT_OK


def cmd_verify(cfg: dict, args) -> int:
    grid = GridSpec(n=cfg["grid_n"], refine_rounds=cfg["refine_rounds"])
    rep = run_oracle_suite(seed=args.seed if args.seed is not None else cfg["seed"], draws=cfg["draws"], grid=grid)
    _emit_json(rep.as_dict(), args.output)
    return EXIT_OK if rep.passed else EXIT_VERIFY


COMMANDS = {
    "equilibrium": cmd_equilibrium,
    "thresholds": cmd_thresholds,
    "fee-design": cmd_fee_design,
    "sweep": cmd_sweep,
    "simulate": cmd_simulate,
    "verify": cmd_verify,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="jitliq", description="JIT liquidity equilibrium toolkit")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--config", help="flat JSON object of configuration keys")
        sp.add_argument("--set", action="append", default=[], metavar="KEY=VALUE", help="override a key")
        sp.add_argument("--output", "-o", help="write to this path instead of stdout")
        sp.add_argument("--jobs", type=int, default=1, help="worker processes for sweeps")
        sp.add_argument("--seed", type=int, default=None, help="seed for random draws (default 20240101)")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = config.load(args.config, args.set)
        if args.seed is not None:
            cfg["seed"] = args.seed
        if args.jobs < 1:
            raise ConfigError("--jobs must be at least 1")
        return COMMANDS[args.command](cfg, args)
    except (ConfigError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
