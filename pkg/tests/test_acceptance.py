"""Acceptance criteria 1-10 at full size, one pass/fail line each."""

import pytest

from fig8rt import verify


@pytest.fixture(scope="module")
def table():
    return verify._table(quick=False)


@pytest.mark.parametrize("n", range(1, 11))
def test_criterion(n, table, capsys):
    chk = verify.run_criterion(n, quick=False, table=table)
    with capsys.disabled():
        print("\n" + chk.line())
    assert chk.passed, chk.line()


def test_supplementary_properties(capsys):
    checks = verify.supplementary(quick=False)
    with capsys.disabled():
        for chk in checks:
            print("\n" + chk.line())
    assert all(c.passed for c in checks)
