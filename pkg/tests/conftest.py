from fractions import Fraction

import pytest
from hypothesis import settings, strategies as st

from qqschur.ring import LaurentPoly, RatFunc

settings.register_profile("desk", max_examples=60, deadline=None)
settings.load_profile("desk")

laurent = st.dictionaries(st.integers(-4, 4), st.fractions(min_value=-5, max_value=5, max_denominator=4),
                          max_size=4).map(LaurentPoly)
nonzero_laurent = laurent.filter(lambda p: not p.is_zero())
ratfuncs = st.builds(RatFunc, laurent, nonzero_laurent)
nonzero_ratfuncs = ratfuncs.filter(lambda x: not x.is_zero())


@pytest.fixture(scope="session")
def sym_v():
    sympy = pytest.importorskip("sympy")
    return sympy, sympy.Symbol("v")


def to_sympy(x, sympy, v):
    def lp(p):
        return sum((sympy.Rational(c.numerator, c.denominator) * v ** e for e, c in p.c.items()), sympy.Integer(0))
    if isinstance(x, LaurentPoly):
        return lp(x)
    return lp(x.num) / lp(x.den)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: (int(s.split()[1].rstrip(":ab")), s)):
            terminalreporter.write_line(line)
