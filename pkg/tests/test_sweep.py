import csv
import io

import pytest

from jitliq import config
from jitliq.errors import ConfigError
from jitliq.sweep import COLUMNS, Axis, SweepSpec, evaluate_point, run_sweep, to_csv


def _spec(target, ax1, ax2=None, mode="baseline", **fixed):
    cfg = config.defaults()
    cfg.update(fixed, mode=mode)
    return SweepSpec(target, Axis.parse(ax1), Axis.parse(ax2) if ax2 else None, cfg, mode)


def test_axis_parse():
    ax = Axis.parse("zeta_u:1.01:1.5:3")
    assert ax.values() == [1.01, 1.255, 1.5]
    for bad in ("zeta_u:1:2", "nope:0:1:3", "f:0:x:3", "f:0:1:1"):
        with pytest.raises(ConfigError):
            Axis.parse(bad)


def test_unknown_target():
    with pytest.raises(ConfigError):
        _spec("bogus", "f:0:0.01:2")


def test_csv_format_and_determinism():
    spec = _spec("mu", "zeta_u:1.01:1.1:4", "pi:0.2:1:3")
    rows = run_sweep(spec)
    text = to_csv(rows)
    assert text == to_csv(run_sweep(spec))
    assert "\r" not in text
    parsed = list(csv.reader(io.StringIO(text)))
    assert tuple(parsed[0]) == COLUMNS
    assert len(parsed) == 1 + 12
    assert [float(r[0]) for r in parsed[1:4]] == [1.01] * 3


def test_parallel_rows_match_serial():
    spec = _spec("U", "zeta_u:1.01:1.2:6", "f:0.001:0.01:3")
    assert to_csv(run_sweep(spec, jobs=2)) == to_csv(run_sweep(spec, jobs=1))


def test_no_equilibrium_rows():
    rows = run_sweep(_spec("U", "zeta_u:1.004:1.02:3"))
    assert rows[0].status == "NoEquilibrium" and rows[0].value is None
    assert rows[-1].status == "ok"
    assert to_csv(rows).splitlines()[1].endswith(",U,,NoEquilibrium")


def test_domain_error_rows():
    rows = run_sweep(_spec("mu", "zeta_u:1.0:1.02:2"))
    assert rows[0].status == "DomainError"


def test_lambda_sweep_without_jit_is_flat():
    rows = run_sweep(_spec("U", "lam:0:1:11", mode="two_tier", pi=0.0))
    vals = {r.value for r in rows}
    assert len(vals) == 1


def test_welfare_lambda_sweep_shape():
    rows = run_sweep(_spec("W", "lam:0:1:101", mode="two_tier"))
    assert len(rows) == 101
    ws = [r.value if r.status == "ok" else 0.0 for r in rows]
    peak = max(range(101), key=lambda i: ws[i])
    assert all(x <= y for x, y in zip(ws[: peak + 1], ws[1 : peak + 1]))
    assert all(w == 0.0 for w in ws[peak + 1 :])


def test_classification_two_blocks():
    rows = run_sweep(_spec("classification", "zeta_u:1.1:1.8:15", f=0.03))
    labels = [r.value for r in rows]
    flip = labels.index("Complement")
    assert set(labels[:flip]) == {"CrowdOut"} and set(labels[flip:]) == {"Complement"}


def test_threshold_targets():
    v, status = evaluate_point("zeta_star", {**config.defaults(), "f": 0.0})
    assert status == "AlwaysComplement" and v is None
    v, status = evaluate_point("zeta_hat", {**config.defaults(), "f": 0.5, "pi": 0.4, "zeta_u": 2.0, "zeta": 2.0})
    assert status == "NotApplicable"


def test_cournot_mode_targets():
    cfg = {**config.defaults(), "mode": "cournot", "f": 0.01, "pi": 0.5, "zeta_u": 1.2}
    v, status = evaluate_point("mu", cfg)
    assert status == "ok" and v == pytest.approx(0.18392, abs=1e-5)
