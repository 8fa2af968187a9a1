import numpy as np
import pytest

from plasmode.charpoly import fq_dp
from plasmode.drude import sweep
from plasmode.plotting import plot_charpoly, plot_sweep
from plasmode.structure import equidistant
from plasmode.verify import SUITES, SuiteResult, run_all


def test_suite_result_bookkeeping():
    r = SuiteResult("demo")
    r.check(True, "never shown")
    r.check(False, "shown")
    assert r.checks == 2 and r.failures == ["shown"] and not r.passed


def test_all_suites_pass_and_are_deterministic():
    a = run_all(7, nmax=8, trials=10)
    b = run_all(7, nmax=8, trials=10)
    assert [s.name for s in a] == list(SUITES)
    assert all(s.passed for s in a), [f for s in a for f in s.failures]
    assert [(s.checks, s.failures) for s in a] == [(s.checks, s.failures) for s in b]


def test_seed_changes_draws():
    from plasmode.verify import root_bounds
    checks = {root_bounds(np.random.default_rng(seed), nmax=19, trials=20).checks for seed in range(4)}
    assert len(checks) > 1


@pytest.mark.parametrize("suffix", ["svg", "png", "pdf"])
def test_plot_charpoly_formats(tmp_path, suffix):
    cp = fq_dp(equidistant(7))
    path = plot_charpoly(cp, -0.25, 2.0, tmp_path / f"f.{suffix}", roots=[0.5, 9.0], threshold=1e-3)
    assert path.stat().st_size > 1000


def test_plot_sweep(tmp_path):
    sr = sweep(equidistant(3), points=100)
    path = plot_sweep(sr, tmp_path / "s.svg", mode_omegas=[1e15])
    text = path.read_text()
    assert "<svg" in text and "<dc:date>" not in text
