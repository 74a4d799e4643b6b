"""
Tests for the verification suites.
"""

import time

import pytest

from src.services.exceptions import ConsistencyError
from src.services.hall import HallAlgebra
from src.services.report import Report
from src.services.repquiver import Multisegment
from src.services.verification import (
    DETAIL_LIMIT,
    SUITES,
    VerificationService,
    VerifyBounds,
    _summarize,
    complex_grid,
    dimension_vectors,
    divided_power_commutation_sides,
)


def test_entry_bound_prefers_explicit_value():
    """Test that max_entry overrides the per-suite default."""
    assert VerifyBounds().entry_bound(3) == 3
    assert VerifyBounds(max_entry=1).entry_bound(3) == 1


def test_summarize_truncates_long_failure_lists():
    """Test that only the first few failures are quoted."""
    assert _summarize([]) == ""
    assert _summarize(["a", "b"]) == "a; b"
    failures = [str(i) for i in range(DETAIL_LIMIT + 3)]
    detail = _summarize(failures)
    assert detail.endswith("; and 3 more")
    assert str(DETAIL_LIMIT) not in detail.split("; and")[0]


def test_complex_grid_order_and_sparsity():
    """Test the grid size, its lexicographic order and the sparse filter."""
    grid = list(complex_grid(2, 1))
    assert len(grid) == 8
    assert grid[0].r == (0,) and grid[0].h == (0, 0)
    assert grid[-1].r == (1,) and grid[-1].h == (1, 1)

    sparse = list(complex_grid(2, 1, sparse_only=True))
    assert len(sparse) == 6
    assert all(c.h != (1, 1) for c in sparse)


def test_dimension_vectors():
    """Test the enumeration of small nonzero dimension vectors."""
    assert list(dimension_vectors(1, 2)) == [(1,), (2,)]
    vectors = list(dimension_vectors(2, 2, min_rank=2))
    assert vectors == [(0, 1), (0, 2), (1, 0), (1, 1), (2, 0)]
    assert all(0 < sum(d) <= 2 for d in dimension_vectors(3, 2))


def test_laurent_suite_passes():
    """Test the binomial identities suite."""
    report = VerificationService().run(["laurent"], VerifyBounds())
    assert report.passed
    names = report.names("laurent")
    assert "binomial symmetry" in names
    assert "q-Pascal recurrence" in names
    assert "three-parameter binomial identity" in names


def test_dimensions_suite_passes_on_small_bounds():
    """Test the dimension formulas on ranks up to 2."""
    report = VerificationService().run(["dimensions"], VerifyBounds(max_rank=2, max_entry=1))
    assert report.passed, [f"{c.name}: {c.detail}" for c in report.failures]
    assert "[M,M] closed form n=2" in report.names()


def test_formula_suite_passes_on_small_bounds():
    """Test that the stalk formulas agree on a small grid."""
    report = VerificationService().run(["formula"], VerifyBounds(max_rank=2, max_entry=2))
    assert report.passed, [f"{c.name}: {c.detail}" for c in report.failures]


def test_threads_do_not_change_the_report():
    """Test that worker threads leave check names and outcomes unchanged."""
    bounds = VerifyBounds(max_rank=2, max_entry=2)
    single = VerificationService(threads=1).run(["formula"], bounds)
    pooled = VerificationService(threads=3).run(["formula"], bounds)
    assert [(c.name, c.passed) for c in single.checks] == [(c.name, c.passed) for c in pooled.checks]


def test_consistency_error_aborts_only_its_suite(monkeypatch):
    """Test that a suite raising ConsistencyError is recorded as a failure."""
    service = VerificationService()

    def broken(bounds):
        raise ConsistencyError("interpolation disagreed")

    monkeypatch.setattr(service, "golden_suite", broken)
    report = service.run(["golden", "laurent"], VerifyBounds())
    assert not report.passed
    [failure] = report.failures
    assert failure.suite == "golden"
    assert failure.name == "suite aborted"
    assert "interpolation disagreed" in failure.detail
    assert report.names("laurent")


def test_report_collects_failures():
    """Test the pass/fail bookkeeping of a report."""
    report = Report()
    assert report.passed
    assert report.add("s", "good", True)
    assert not report.add("s", "bad", False, "detail")
    assert not report.passed
    assert [c.name for c in report.failures] == ["bad"]


def test_suite_names():
    """Test the list of suites known to the command line."""
    assert SUITES == ("laurent", "dimensions", "formula", "construction", "oracle", "structure", "golden")


@pytest.mark.slow
def test_golden_suite_passes():
    """Test the golden values, including Hall products at rank 2."""
    report = VerificationService().run(["golden"], VerifyBounds(max_total_dim=3))
    assert report.passed, [f"{c.name}: {c.detail}" for c in report.failures]
    assert "stalk d=(1, 2, 1) k=(1, 1)" in report.names()
    assert "orbits of d=(1, 1, 1)" in report.names()
    assert "components of d=(1, 1, 1)" in report.names()


@pytest.mark.slow
def test_hall_suites_pass_on_small_bounds():
    """Test the construction, oracle and structure suites on small weights."""
    bounds = VerifyBounds(max_rank=2, max_total_dim=3)
    report = VerificationService().run(["construction", "oracle", "structure"], bounds)
    assert report.passed, [f"{c.name}: {c.detail}" for c in report.failures]


@pytest.mark.parametrize("i", [1, 2])
def test_divided_power_commutation_in_rank_three(i):
    """Test the commutation of divided powers at both adjacent pairs of vertices."""
    algebra = HallAlgebra(3)
    for top in range(1, 3):
        for m in range(0, top + 1):
            left, right = divided_power_commutation_sides(algebra, i, m, top)
            assert left == right, (m, top)


def test_held_out_recount_at_rank_three():
    """Test that interpolated Hall polynomials match a count at a fresh prime."""
    service = VerificationService()
    X = Multisegment.interval(3, 1, 2) + Multisegment.interval(3, 2, 3)
    assert service.held_out_failures((X, (0, 1, 0))) == []
    assert service.held_out_failures((X, (1, 1, 0))) == []


def test_held_out_targets_include_requested_tallies(monkeypatch):
    """Test that the golden suite recounts every tally requested earlier in the run."""
    service = VerificationService()
    X = Multisegment.interval(3, 1, 3) + Multisegment.simple(3, 2)
    N = Multisegment.simple(3, 2)
    service.counter.hall_polynomial(Multisegment.interval(3, 1, 3), N, X)

    recounted = []

    def record(target):
        recounted.append(target)
        return []

    monkeypatch.setattr(service, "held_out_failures", record)
    report = service.golden_suite(VerifyBounds(max_rank=3, max_total_dim=4))
    assert (X, (0, 1, 0)) in recounted
    assert recounted == sorted(recounted)
    assert "held-out prime counts" in report.names()


@pytest.mark.slow
def test_default_formula_sweep_is_fast():
    """Test that the default formula suite finishes within a minute on one thread."""
    start = time.perf_counter()
    report = VerificationService(threads=1).run(["formula"], VerifyBounds())
    assert report.passed, [f"{c.name}: {c.detail}" for c in report.failures]
    assert time.perf_counter() - start < 60
