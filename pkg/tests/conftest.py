import os
import sys

import pytest
from hypothesis import settings
from hypothesis import strategies as st

sys.path.insert(0, os.path.dirname(__file__))

from silverchase.psi import PartialAssignment, PsiTable  # noqa: E402
from silverchase.silver import SilverCondition  # noqa: E402

import hand_oracle  # noqa: E402

settings.register_profile("default", deadline=None, max_examples=200)
settings.load_profile("default")


@pytest.fixture
def psi0():
    return PsiTable.from_mapping(2, 2, hand_oracle.PSI0)


@pytest.fixture
def equalizing_table():
    return PsiTable.from_mapping(2, 2, hand_oracle.EQUALIZING)


@st.composite
def conditions(draw, n=None, max_bound=12):
    n = draw(st.integers(2, 4)) if n is None else n
    bound = draw(st.integers(0, max_bound))
    positions = draw(st.sets(st.integers(0, max(bound - 1, 0)), max_size=bound)) if bound else set()
    vals = {p: draw(st.integers(0, n - 1)) for p in sorted(positions)}
    return SilverCondition(n, bound, vals)


@st.composite
def condition_pairs(draw, related=False):
    n = draw(st.integers(2, 3))
    f = draw(conditions(n=n))
    if not related:
        return f, draw(conditions(n=n))
    extra = draw(conditions(n=n))
    merged = {**extra.as_dict(), **f.as_dict()}
    return f, SilverCondition(n, max(f.bound, extra.bound), merged)


def symbol_strings(n, max_size=6):
    return st.lists(st.integers(0, n - 1), max_size=max_size).map(tuple)


@st.composite
def assignments(draw, arity=2, length=6):
    vals = {}
    for k in range(length):
        choice = draw(st.integers(-1, arity - 1))
        if choice >= 0:
            vals[k] = choice
    return PartialAssignment(arity, length, vals)
