import pytest

from cli.app import EXIT_OK, run
from core import selftest


@pytest.mark.parametrize("number", range(1, len(selftest.CRITERIA) + 1))
def test_criterion(number, settings):
    title, check = selftest.CRITERIA[number - 1]
    passed, detail = check(settings)
    assert passed, f"{number} {title}: {detail}"


def test_selftest_command(capsys):
    assert run(["selftest"]) == EXIT_OK
    assert '"passed": true' in capsys.readouterr().out
