"""Tests for the property audit and its command."""

import functools
import re

import pytest

from expectiles import DEFAULT_AUDIT_SEED, DEFAULT_AUDIT_TRIALS, DEFAULT_TAUS, EXIT_AUDIT_FAILURE
from expectiles import audit as audit_module
from expectiles.__main__ import main
from expectiles.audit import CHECKS, discrepancy_lines, run_audit
from expectiles.expectile import first_order_as_printed
from expectiles.typehints import AuditResult

TRIALS = 8


def _field(line: str, key: str) -> float:
    match = re.search(rf"\b{key}=(\S+)", line)
    assert match is not None
    return float(match.group(1))


@pytest.fixture(scope="module")
def results() -> list[AuditResult]:
    return run_audit(7, TRIALS, DEFAULT_TAUS)


def test_every_check_passes(results: list[AuditResult]) -> None:
    assert [result.check_name for result in results] == [name for name, _, _ in CHECKS]
    failed = [result.format_line() for result in results if not result.passed]
    assert not failed
    assert all(result.trials >= 1 for result in results)


def test_core_checks_are_present(results: list[AuditResult]) -> None:
    names = {result.check_name for result in results}
    assert len(names) >= 12
    assert {"four_way_agreement", "sandwich", "lipschitz_beta", "comonotone_additivity", "kusuoka_fubini"} <= names
    assert {"distortion_dominance", "minorant_maximality", "majorant_strict_gap"} <= names


def test_audit_is_deterministic() -> None:
    assert run_audit(11, 3, [0.2]) == run_audit(11, 3, [0.2])


def test_printed_first_order_is_caught() -> None:
    broken = run_audit(7, TRIALS, DEFAULT_TAUS, first_order=first_order_as_printed)
    results = {result.check_name: result for result in broken}
    assert not results["indicator_consistency"].passed
    assert not results["neg_indicator"].passed
    assert results["indicator_consistency"].worst_slack < -1e-3


def test_format_line(results: list[AuditResult]) -> None:
    line = results[0].format_line()
    assert line.startswith(f"{results[0].check_name} trials=")
    assert line.endswith(" ok")


def test_discrepancy_lines() -> None:
    lines = discrepancy_lines([0.2])
    assert len(lines) == 2
    assert all(line.startswith("# ") for line in lines)
    neg_indicator, first_order = lines
    assert "c=0.25" in neg_indicator
    assert _field(neg_indicator, "as_printed") == pytest.approx(-1 / 3.25)
    assert _field(neg_indicator, "proof_consistent") == pytest.approx(-1 / 1.75)
    assert _field(first_order, "as_printed") == pytest.approx(1.5, abs=1e-10)
    assert _field(first_order, "proof_consistent") == pytest.approx(0.5, abs=1e-10)


def test_audit_command(capsys: pytest.CaptureFixture[str]) -> None:
    main(["audit", "--trials", "2", "--seed", "3"])
    lines = capsys.readouterr().out.splitlines()
    assert sum(line.startswith("#") for line in lines) == 2 * len(DEFAULT_TAUS)
    assert sum(line.endswith(" ok") for line in lines) == len(CHECKS)


def test_audit_command_fails_on_a_broken_solver(monkeypatch: pytest.MonkeyPatch) -> None:
    monkeypatch.setattr(audit_module, "run_audit", functools.partial(run_audit, first_order=first_order_as_printed))
    with pytest.raises(SystemExit) as excinfo:
        main(["audit", "--trials", "2"])
    assert excinfo.value.code == EXIT_AUDIT_FAILURE


def test_default_audit_passes() -> None:
    results = run_audit(DEFAULT_AUDIT_SEED, DEFAULT_AUDIT_TRIALS, DEFAULT_TAUS)
    assert [result.format_line() for result in results if not result.passed] == []


@pytest.mark.parametrize(
    ("trials", "names"),
    [
        (1000, {"four_way_agreement", "solver_cross_validation", "sandwich", "lipschitz_beta", "lipschitz_centered"}),
        (500, {"kusuoka_fubini", "kusuoka_attainment", "kusuoka_upper_bound", "comonotone_additivity"}),
    ],
)
def test_acceptance_sweeps(trials: int, names: set[str]) -> None:
    results = run_audit(DEFAULT_AUDIT_SEED, trials, DEFAULT_TAUS, only=names)
    assert {result.check_name for result in results} == names
    assert all(result.trials == trials for result in results)
    assert [result.format_line() for result in results if not result.passed] == []


def test_only_runs_the_named_checks() -> None:
    (result,) = run_audit(5, 4, [0.2], only=["minorant_maximality"])
    assert result.check_name == "minorant_maximality"
    assert result == next(r for r in run_audit(5, 4, [0.2]) if r.check_name == "minorant_maximality")


def test_strict_gap_is_skipped_at_half() -> None:
    (result,) = run_audit(5, 6, [0.5], only=["majorant_strict_gap"])
    assert result.trials == 0
    assert result.passed
