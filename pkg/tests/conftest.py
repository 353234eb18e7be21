import random

import pytest

from conformal_ops.conformal import Signature
from conformal_ops.poly import Rational

PRIMES = (7, 11, 13, 17, 19, 23, 29, 31)

SIGNATURES = {
    1: [Signature(1, 0)],
    2: [Signature(2, 0), Signature(1, 1)],
    3: [Signature(3, 0), Signature(2, 1)],
}


def random_weight(rng: random.Random) -> Rational:
    """Nonzero rational with a prime denominator >= 7; never an integer.

    Resonant values have denominators dividing 2n, so these are generic for n <= 6.
    """
    p = rng.choice(PRIMES)
    num = 0
    while num % p == 0:
        num = rng.randint(-3 * p, 3 * p)
    return Rational(num, p)


def weight_pairs(seed: int, count: int) -> list:
    rng = random.Random(seed)
    return [(random_weight(rng), random_weight(rng)) for _ in range(count)]


@pytest.fixture
def rng():
    return random.Random(20240611)


# acceptance summary ---------------------------------------------------------

ACCEPTANCE: dict = {}


def record(criterion: int, title: str, ok: bool, detail: str = ""):
    ACCEPTANCE[criterion] = (title, ok, detail)
    line = f"criterion {criterion:>2} [{'PASS' if ok else 'FAIL'}] {title}"
    if detail:
        line += f" ({detail})"
    print(line)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        title, ok, detail = ACCEPTANCE[k]
        line = f"criterion {k:>2} [{'PASS' if ok else 'FAIL'}] {title}"
        if detail:
            line += f" ({detail})"
        terminalreporter.write_line(line)
