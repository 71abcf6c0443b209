import json

import numpy as np
import pytest

from ffmean.errors import BadConfig, BadFieldForEnsemble, BudgetExceeded, NotPrime
from ffmean.experiments import (
    MEAN_COLUMNS,
    ExperimentConfig,
    run_mean_value,
    run_nonsquare_monitor,
    run_prop2_check,
    run_verify_suite,
)
from ffmean.field import make_field
from ffmean.poly import Poly

F5 = make_field(5)
T = Poly.T(F5)


def test_config_validation():
    with pytest.raises(NotPrime):
        ExperimentConfig(q=9).validate()
    with pytest.raises(BadFieldForEnsemble):
        ExperimentConfig(q=7).validate()
    with pytest.raises(BadConfig):
        ExperimentConfig(q=5, mode="sample").validate()
    with pytest.raises(BadConfig):
        ExperimentConfig(q=5, g_min=2, g_max=1).validate()
    with pytest.raises(BadConfig):
        ExperimentConfig(q=5, mode="other").validate()
    with pytest.raises(BadConfig):
        ExperimentConfig(q=5, workers=0).validate()


def test_budget():
    with pytest.raises(BudgetExceeded):
        run_mean_value(ExperimentConfig(q=5, g_min=3, g_max=3, budget=1000))
    with pytest.raises(BudgetExceeded):
        run_nonsquare_monitor(5, 3, budget=1000)


def test_mean_small():
    rep = run_mean_value(ExperimentConfig(q=5, g_min=1, g_max=2))
    r1, r2 = rep.records
    assert r1.ensemble_size == 100 and r2.ensemble_size == 2500
    assert r1.sum_h == 600 and isinstance(r1.sum_h, int)
    for r in rep.records:
        assert r.sum_L * 5**r.g == r.sum_h
    header = rep.to_csv().splitlines()[0]
    assert header == ",".join(MEAN_COLUMNS)
    data = json.loads(rep.to_json())
    assert data["records"][0]["sum_h"] == "600"
    assert set(data["records"][0]) == set(MEAN_COLUMNS)


def test_mean_genus_zero():
    rep = run_mean_value(ExperimentConfig(q=5, g_min=0, g_max=0))
    assert rep.records[0].ensemble_size == 5 and rep.records[0].sum_h == 5


def test_sample_mode_reproducible():
    cfg = ExperimentConfig(q=5, g_min=1, g_max=2, mode="sample", sample_size=200, seed=11)
    a, b = run_mean_value(cfg).to_json(), run_mean_value(cfg).to_json()
    assert a == b
    c = run_mean_value(ExperimentConfig(q=5, g_min=1, g_max=2, mode="sample", sample_size=200, seed=12)).to_json()
    assert a != c
    data = json.loads(a)
    assert data["seed"] == "11" and data["generator"] == "numpy.random.PCG64"
    for rec in data["records"]:
        assert rec["std_err_sum_L"] > 0


def test_sample_estimate_near_full():
    full = run_mean_value(ExperimentConfig(q=5, g_min=2, g_max=2)).records[0]
    est = run_mean_value(ExperimentConfig(q=5, g_min=2, g_max=2, mode="sample", sample_size=2000, seed=3)).records[0]
    assert abs(float(est.sum_L - full.sum_L)) <= 5 * est.std_err_sum_L


@pytest.mark.parametrize("g", [1, 2, 3])
def test_nonsquare_monitor(g):
    rep = run_nonsquare_monitor(5, g)
    assert rep.ensemble_size == 4 * 25**g
    assert rep.ratio_first <= 10 and rep.ratio_second <= 10
    # the square part alone is strictly positive
    assert rep.square_first > 0
    assert rep.nonsquare_first + rep.square_first + rep.nonsquare_second + rep.square_second > 0


def test_prop2_examples():
    r = run_prop2_check(5, 1, Poly(F5, [1]))
    assert r.count == 100 and r.error == 0
    r = run_prop2_check(5, 1, T)
    assert r.count == 84 and r.ratio <= 10
    r = run_prop2_check(5, 2, T)
    assert r.ratio <= 10
    # modulus of degree above 2g+1 is still well defined
    big = T**4 + T + 1
    r = run_prop2_check(5, 1, big)
    assert 0 < r.count <= 100


def test_verify_suite_q5():
    rep = run_verify_suite(5, 2)
    assert rep.passed and rep.discriminants == 2600
    names = {r.name for r in rep.results}
    assert names == {
        "functional_equation",
        "approx_functional_equation",
        "class_number_positive_integer",
        "point_count_a1",
        "weil_bound",
        "direct_vs_euler_coefficients",
        "char_sum_vanishes_above_2g",
    }


def test_verify_fault_injection():
    def flip(g, coeffs):
        coeffs[7, 2] += 1  # a_1 is its own partner at g = 1
        return coeffs

    rep = run_verify_suite(5, 1, fault=flip)
    assert not rep.passed
    fe = next(r for r in rep.results if r.name == "functional_equation")
    assert not fe.passed and fe.counterexample is not None
    assert fe.counterexample["D"] == ",".join(str(c) for c in rep_row(7))
    assert json.loads(rep.to_json())["passed"] is False


def rep_row(i):
    from ffmean.poly import enumerate_ensemble

    return list(enumerate_ensemble(F5, 1))[i].coeffs
