"""The self-check suites must pass in a healthy build."""

import pytest

from typdeg.verification import SUITES, run_suites


def test_suite_names():
    assert set(SUITES) == {"identities", "sampling", "all"}


def test_unknown_suite_rejected():
    with pytest.raises(ValueError):
        run_suites("everything")


def test_identity_suites_pass():
    results = run_suites("identities")
    assert len(results) >= 20
    failed = [r for r in results if not r.passed]
    assert failed == []


def test_sampling_suite_passes():
    results = run_suites("sampling")
    assert len(results) >= 3
    failed = [r for r in results if not r.passed]
    assert failed == []


def test_all_is_the_union():
    assert len(run_suites("all")) == \
        len(run_suites("identities")) + len(run_suites("sampling"))
