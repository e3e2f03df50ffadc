import random

import pytest
from hypothesis import strategies as st

from boxlogic.formula import BOT, And, Box, Imp, Or, Var


def formulas(max_leaves: int = 12, variables: int = 4, boxes: bool = True):
    atoms = st.one_of(st.just(BOT), st.integers(1, variables).map(Var))

    def extend(children):
        out = [st.builds(And, children, children), st.builds(Or, children, children),
               st.builds(Imp, children, children)]
        if boxes:
            out.append(children.map(Box))
        return st.one_of(*out)

    return st.recursive(atoms, extend, max_leaves=max_leaves)


@pytest.fixture
def rng():
    return random.Random(20261015)
