import pytest

from stspkit import Arc, Instance


@pytest.fixture
def t1():
    """Three-node fixture: depot 0, terminal 1, steiner 2; optimum 55."""
    inst = Instance(
        nodes=(0, 1, 2),
        coords={0: (0.0, 0.0), 1: (10.0, 0.0), 2: (0.0, 10.0)},
        terminals=frozenset({1}),
        arcs=(
            Arc(0, 0, 1, 25),
            Arc(1, 1, 0, 30),
            Arc(2, 0, 2, 20),
            Arc(3, 2, 1, 20),
            Arc(4, 1, 2, 22),
            Arc(5, 2, 0, 21),
        ),
    )
    inst.validate()
    return inst
