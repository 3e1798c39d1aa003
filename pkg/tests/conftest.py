import pytest

from tml.syntax import And, Box, Neg, Or, Var


def formula_pool(max_connectives, var_names=("p", "q")):
    """All formulas over the given variables, grouped by connective count."""
    by = {0: [Var(v) for v in var_names]}
    for c in range(1, max_connectives + 1):
        fs = []
        for f in by[c - 1]:
            fs.append(Neg(f))
            fs.append(Box(f))
        for i in range(c):
            for a in by[i]:
                for b in by[c - 1 - i]:
                    fs.append(And(a, b))
                    fs.append(Or(a, b))
        by[c] = fs
    return by


@pytest.fixture(scope="session")
def pool_by_count():
    return formula_pool(4)


@pytest.fixture(scope="session")
def small_pool(pool_by_count):
    """All 134 formulas over {p, q} with at most two connectives."""
    return [f for c in range(3) for f in pool_by_count[c]]
