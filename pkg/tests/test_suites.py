"""Module-invariant batteries not tied to a numbered acceptance criterion.

These call the same named suites the CLI `validate` subcommand runs, at
reduced draw counts to keep the unit run quick; the full-scale versions run
in test_acceptance.py and via `coupled-rwm validate`.
"""

from coupled_rwm import suites


def _assert_all(results):
    bad = [r for r in results if not r.passed]
    assert not bad, "; ".join(f"{r.suite}:{r.name} [{r.detail}]" for r in bad)


def test_residual_suite_reduced():
    _assert_all(suites.suite_residuals(n=20000))


def test_acceptance_cells_suite_reduced():
    _assert_all(suites.suite_acceptance_cells(n=20000))


def test_marginal_equivalence_suite_reduced():
    _assert_all(suites.suite_marginal_equivalence(n=20000))


def test_pushforward_suite_reduced():
    _assert_all(suites.suite_pushforward(n=20000))


def test_faithfulness_suite_reduced():
    _assert_all(suites.suite_faithfulness(steps=500))


def test_run_suites_filter():
    results = suites.run_suites(["bounds"])
    assert results and all(r.suite == "bounds" for r in results)
    import pytest

    from coupled_rwm import DomainError

    with pytest.raises(DomainError):
        suites.run_suites(["no-such-suite"])
