import json
import math
from pathlib import Path

import pytest

scaledecay = pytest.importorskip("scaledecay")

CONFIGS = Path(__file__).resolve().parents[2] / "configs"


def test_delta_resonance_near_box_level():
    model = scaledecay.DeltaModel(V0bar=100.0, abar=1.0)
    res = scaledecay.delta_resonance(model, 1)
    assert abs(res.kbar_n - math.pi) < 0.05
    assert res.width() > 0.0
    assert res.origin == "analytic"


def test_scan_has_minimum_near_resonance():
    model = scaledecay.DeltaModel(V0bar=100.0)
    scan = scaledecay.scan_C2(model, 2.5, 3.5, 201, threads=2)
    k, c2 = min(scan, key=lambda s: s[1])
    assert abs(k - scaledecay.delta_resonance(model, 1).kbar_n) < 0.02
    assert c2 == pytest.approx(scaledecay.delta_C2(model, k), rel=1e-6)


def test_barrier_roots():
    roots = scaledecay.barrier_roots(scaledecay.BarrierModel(V0bar=20.0, abar=1.0, bbar=2.0))
    assert len(roots) == 2


def test_tau_round_trip():
    law = scaledecay.ScaleLaw(1.0, 0.1)
    assert scaledecay.t_of_tau(law, scaledecay.tau_of_t(law, 7.0)) == pytest.approx(7.0)


def test_run_task_exit_codes(tmp_path):
    code, _ = scaledecay.run_task("resonances", CONFIGS / "default.ini", tmp_path)
    assert code == 0
    record = json.loads((tmp_path / "resonances.json").read_text())
    assert record["task"] == "resonances"
    code, log = scaledecay.run_task("resonances", tmp_path / "missing.ini", tmp_path / "x")
    assert code == 2
    assert log
