"""Acceptance gate: one test per validation criterion.

Each test prints a single pass/fail line (run pytest with -s or look at
captured output on failure) and then asserts the criterion result. The
criteria themselves, including tolerances and time budgets, live in
orbmag.validation so the CLI `orbmag validate` exercises the exact same
checks.
"""

from orbmag import validation


def _report(res):
    status = "PASS" if res.passed else "FAIL"
    line = (f"[{status}] criterion {res.index}: {res.name} "
            f"({res.runtime_s:.2f}s / budget {res.limit_s:g}s) {res.detail}")
    print(line)
    assert res.passed, line


def test_criterion_01_zero_time_null():
    _report(validation.criterion_1())


def test_criterion_02_free_quadrature_matches_closed_forms():
    _report(validation.criterion_2())


def test_criterion_03_confined_quadrature_matches_closed_forms():
    _report(validation.criterion_3())


def test_criterion_04_monte_carlo_agrees_within_3_sigma():
    _report(validation.criterion_4())


def test_criterion_05_saturation_and_settle_ordering():
    _report(validation.criterion_5())


def test_criterion_06_damping_sweep_monotone_suppression():
    _report(validation.criterion_6())


def test_criterion_07_root_identities_and_causality():
    _report(validation.criterion_7())


def test_criterion_08_weak_trap_recovers_free_moment():
    _report(validation.criterion_8())


def test_criterion_09_field_reversal_antisymmetry():
    _report(validation.criterion_9())


def test_criterion_10_byte_identical_repeated_runs():
    _report(validation.criterion_10())
