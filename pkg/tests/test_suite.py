"""The check suite itself: result records, gating and the cheap checks."""
import json

import numpy as np
import pytest

from dyadlab.suite import (
    CHECKS,
    CheckResult,
    SuiteConfig,
    check_m0,
    check_rhi_negative_control,
    gating_passed,
    log_reciprocal,
    negative_control_family,
    run_suite,
)


def test_check_result_line_and_dict():
    r = CheckResult("x", True, False, {"worst": np.float64(1.5), "arr": np.arange(2)}, fitted_constant=0.5)
    assert r.line().startswith("[FAIL] x")
    assert json.loads(json.dumps(r.to_dict()))["details"]["arr"] == [0, 1]


def test_gating():
    ok = CheckResult("a", True, True, {})
    soft_fail = CheckResult("b", False, False, {})
    hard_fail = CheckResult("c", True, False, {})
    assert gating_passed([ok, soft_fail])
    assert not gating_passed([ok, hard_fail])


def test_unknown_check():
    with pytest.raises(ValueError):
        run_suite(SuiteConfig(), ["nope"])


def test_registry_covers_criteria():
    for name in (
        "two_valued_golden",
        "two_valued_wilson",
        "mixed_maximal",
        "rhi",
        "rhi_negative_control",
        "m0_bound",
        "principal_packing",
        "carleson_embedding",
        "shift_a2_sharpness",
        "llogl",
        "bmo_of_log",
        "bmo_embedding",
        "bmo_power_trend",
        "commutator",
    ):
        assert name in CHECKS


def test_m0_passes():
    assert check_m0(SuiteConfig()).passed


def test_negative_control_reacts_to_tiny_tau():
    """At tau = 1/2 the exponent is large enough that the doubling bound breaks."""
    r = check_rhi_negative_control(SuiteConfig(), tau=0.5, count=100)
    assert r.control and r.passed
    assert r.details["violations"] >= 1


def test_negative_control_family_deterministic():
    a = negative_control_family(SuiteConfig(), count=5)
    b = negative_control_family(SuiteConfig(), count=5)
    for x, y in zip(a, b):
        np.testing.assert_array_equal(x.values, y.values)


def test_log_reciprocal_positive():
    from dyadlab.grid import DyadicGrid

    v = log_reciprocal(DyadicGrid(6))
    assert np.all(np.diff(v) < 0)
