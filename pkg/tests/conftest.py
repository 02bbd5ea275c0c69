import random

import pytest

from ratunify.syntax import parse_term
from ratunify.terms import FreshSource

import acceptance_log


class Terms:
    """Parse several terms against one variable scope."""

    def __init__(self):
        self.scope = {}
        self.fresh = FreshSource()

    def __call__(self, text, allow_mu=True):
        return parse_term(text, self.scope, self.fresh, allow_mu=allow_mu)


@pytest.fixture
def T():
    return Terms()


@pytest.fixture
def rng():
    return random.Random(20251015)


def pytest_terminal_summary(terminalreporter):
    if acceptance_log.LINES:
        terminalreporter.section("acceptance criteria")
        for line in acceptance_log.LINES:
            terminalreporter.write_line(line)
