"""Shared fixtures: golden polynomial sets with known decompositions."""

from fractions import Fraction

import pytest

from polydecomp import RatMatrix, parse_polynomial

# One line per acceptance criterion, printed after the run so the verdicts
# are visible even with output capture on.
ACCEPTANCE_LINES: list[str] = []


def record_acceptance(line: str) -> None:
    ACCEPTANCE_LINES.append(line)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.write_sep("=", "acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

# Two binary cubics that diagonalize simultaneously; the center, the unique
# nontrivial idempotent pair, the diagonalizing transform, and the exact
# outputs are all known in closed form.
BIN_CUBIC_VARS = ["u1", "u2"]
BIN_CUBIC_1 = (
    "54*u1^3 - 54*u1^2*u2 + 8*u1^2 + 18*u1*u2^2 + 16*u1*u2"
    " - 2*u2^3 + 8*u2^2 + 8*u2 + 1"
)
BIN_CUBIC_2 = (
    "-27*u1^3 + 27*u1^2*u2 - 24*u1^2 - 9*u1*u2^2 - 48*u1*u2 - 15*u1"
    " + u2^3 - 24*u2^2 - 19*u2 - 3"
)
BIN_CUBIC_P = [[Fraction(-1, 8), Fraction(1, 4)], [Fraction(-3, 8), Fraction(-1, 4)]]
BIN_CUBIC_EPS = (
    [[Fraction(1, 4), Fraction(1, 4)], [Fraction(3, 4), Fraction(3, 4)]],
    [[Fraction(3, 4), Fraction(-1, 4)], [Fraction(-3, 4), Fraction(1, 4)]],
)
BIN_CUBIC_G1 = "2*x2^3 + 2*x1^2 - 3*x1 - 2*x2 + 1"
BIN_CUBIC_G2 = "-x2^3 - 6*x1^2 + 9*x1 + x2 - 3"
# center family: [[a, (b-a)/2], [3(b-a)/2, b]]
BIN_CUBIC_CENTER_FAMILY = (
    [[1, Fraction(-1, 2)], [Fraction(-3, 2), 0]],
    [[0, Fraction(1, 2)], [Fraction(3, 2), 1]],
)

# A quartic plus two squares: center is a 1 + 2 block family of dimension 4.
QUARTIC_SQUARES_VARS = ["x", "y", "z"]
QUARTIC_SQUARES = "x^4 + y^2 + z^2"
QUARTIC_SQUARES_CENTER_FAMILY = (
    [[1, 0, 0], [0, 0, 0], [0, 0, 0]],
    [[0, 0, 0], [0, 1, 0], [0, 0, 0]],
    [[0, 0, 0], [0, 0, 1], [0, 1, 0]],
    [[0, 0, 0], [0, 0, 0], [0, 0, 1]],
)

# Two quartic-free cubic-type polynomials in four variables that split into
# blocks {1}, {1}, {2} under a known unimodular transform.
FOURVAR_VARS = ["x1", "x2", "x3", "x4"]
FOURVAR_1 = (
    "x1^3 + 3*x1^2*x2 + 3*x1^2*x3 + 3*x1*x2^2 + 6*x1*x2*x3 + 3*x1*x3^2"
    " + 2*x2^3 + 6*x2*x3^2 + x3^2*x4 + x4^2 + 2*x3 + 1"
)
FOURVAR_2 = (
    "2*x1^3 + 6*x1^2*x2 + 6*x1^2*x3 + 6*x1*x2^2 + 12*x1*x2*x3 + 6*x1*x3^2"
    " + 5*x2^3 - 3*x2^2*x3 + 15*x2*x3^2 - x3^3 + x3*x4^2 + 3*x4"
)
FOURVAR_P = [[1, -1, -2, 0], [0, 1, 1, 0], [0, 0, 1, 0], [0, 0, 0, 1]]
FOURVAR_G1 = "y1^3 + y2^3 + y3^2*y4 + y4^2 + 2*y3 + 1"
FOURVAR_G2 = "2*y1^3 + 3*y2^3 + y3*y4^2 + 3*y4"
# center family: [[a+b+c, a+2c, a, 0], [0, b-c, c, 0], [0, 0, b, 0], [0, 0, 0, b]]
FOURVAR_CENTER_FAMILY = (
    [[1, 1, 1, 0], [0, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0]],  # a
    [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]],  # b
    [[1, 2, 0, 0], [0, -1, 1, 0], [0, 0, 0, 0], [0, 0, 0, 0]],  # c
)
FOURVAR_EPS = (
    [[1, 1, 1, 0], [0, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0]],
    [[0, -1, 1, 0], [0, 1, -1, 0], [0, 0, 0, 0], [0, 0, 0, 0]],
    [[0, 0, -2, 0], [0, 0, 1, 0], [0, 0, 1, 0], [0, 0, 0, 1]],
)

# Three polynomials in three variables, each decomposable on its own but
# jointly indecomposable (scalar joint center).
TRIO_VARS = ["x1", "x2", "x3"]
TRIO_1 = (
    "81*x1^4 + 108*x1^3*x3 + 54*x1^2*x3^2 + 12*x1*x3^3 + x3^4"
    " + x2^3 + x3^3 + x2*x3^2 + 2*x2^2 + 5*x3 + 1"
)
TRIO_2 = "x1^3 - 6*x1^2*x2 + 12*x1*x2^2 - 7*x2^3 + 3*x2*x3 + 7*x1 + 5"
TRIO_3 = (
    "27*x2^3 + 36*x2*x3^2 - 54*x2^2*x3 - 8*x3^3"
    " + 5*x1^3 + 2*x1^2 + 7*x1 + 12*x2 - 8*x3 + 5"
)
TRIO_1_P = [[Fraction(1, 3), 0, Fraction(-1, 3)], [0, 1, 0], [0, 0, 1]]
TRIO_2_P = [[1, 2, 0], [0, 1, 0], [0, 0, 1]]
TRIO_3_P = [[1, 0, 0], [0, Fraction(1, 3), Fraction(2, 3)], [0, 0, 1]]
TRIO_1_OUT = "y1^4 + y2^3 + y2*y3^2 + y3^3 + 2*y2^2 + 5*y3 + 1"
TRIO_2_OUT = "z1^3 + z2^3 + 3*z2*z3 + 7*z1 + 14*z2 + 5"
TRIO_3_OUT = "5*u1^3 + u2^3 + 2*u1^2 + 7*u1 + 4*u2 + 5"
TRIO_3_EPS = (
    [[1, 0, 0], [0, 0, Fraction(2, 3)], [0, 0, 1]],
    [[0, 0, 0], [0, 1, Fraction(-2, 3)], [0, 0, 0]],
)


@pytest.fixture(scope="session")
def bin_cubics():
    return [
        parse_polynomial(BIN_CUBIC_1, BIN_CUBIC_VARS),
        parse_polynomial(BIN_CUBIC_2, BIN_CUBIC_VARS),
    ]


@pytest.fixture(scope="session")
def quartic_squares():
    return parse_polynomial(QUARTIC_SQUARES, QUARTIC_SQUARES_VARS)


@pytest.fixture(scope="session")
def fourvar_pair():
    return [
        parse_polynomial(FOURVAR_1, FOURVAR_VARS),
        parse_polynomial(FOURVAR_2, FOURVAR_VARS),
    ]


@pytest.fixture(scope="session")
def trio():
    return [
        parse_polynomial(TRIO_1, TRIO_VARS),
        parse_polynomial(TRIO_2, TRIO_VARS),
        parse_polynomial(TRIO_3, TRIO_VARS),
    ]


def mat(rows) -> RatMatrix:
    return RatMatrix.from_rows(rows)


def refines(fine, coarse) -> bool:
    """True iff the ``fine`` size multiset can be grouped into ``coarse``."""
    from itertools import combinations

    fine = sorted(fine)
    coarse = sorted(coarse)
    if sum(fine) != sum(coarse):
        return False

    def backtrack(remaining, targets):
        if not targets:
            return not remaining
        target = targets[0]
        for r in range(1, len(remaining) + 1):
            for combo in combinations(range(len(remaining)), r):
                if sum(remaining[i] for i in combo) == target:
                    rest = [x for i, x in enumerate(remaining) if i not in combo]
                    if backtrack(rest, targets[1:]):
                        return True
        return False

    return backtrack(fine, coarse)
