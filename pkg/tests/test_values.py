import random

import pytest

from domineering import games as G
from domineering.board import BoardSpec, Position, Topology, rect, rot90
from domineering.facts import UNKNOWN
from domineering.solver import Solver
from domineering.values import (
    ValueEngine,
    ValueLimits,
    outcome_of_value,
    position_value,
    value,
)


def empty(w, l, topo=Topology.RECTANGLE):
    return Position.empty(BoardSpec(topo, w, l))


def test_single_column_values():
    assert position_value(empty(2, 1)) is G.number(1)
    assert position_value(empty(9, 1)) is G.number(4)
    assert position_value(empty(1, 9)) is G.number(-4)


def test_2x2_value():
    assert position_value(empty(2, 2)) is G.parse("1|-1")


def test_sum_of_components():
    pos = Position.from_cells(rect(2, 5), [(0, 2), (1, 2)])
    total = position_value(pos)
    single = position_value(empty(2, 2))
    assert total is G.add(single, single)


def test_value_limits_yield_unknown():
    res = value(empty(4, 7), limits=ValueLimits(max_positions=10))
    assert res is UNKNOWN


def test_outcome_of_value():
    from domineering.facts import OutcomeClass

    assert outcome_of_value(G.number(4)) is OutcomeClass.VERTICAL
    assert outcome_of_value(G.ZERO) is OutcomeClass.SECOND
    assert outcome_of_value(G.STAR) is OutcomeClass.FIRST
    assert outcome_of_value(position_value(empty(2, 2))) is OutcomeClass.FIRST


def _random_rect_positions(count, max_empty, seed):
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        m, n = rng.randint(1, 5), rng.randint(1, 6)
        spec = rect(m, n)
        mask = rng.getrandbits(spec.cells)
        pos = Position(spec, mask & ((1 << spec.cells) - 1))
        if 0 < pos.empty_count <= max_empty:
            out.append(pos)
    return out


def test_rot90_antisymmetry():
    for pos in _random_rect_positions(80, 16, seed=3):
        assert position_value(rot90(pos)) is G.negate(position_value(pos))


def test_value_outcome_matches_search(solver):
    boards = [
        (2, n) for n in range(1, 10)
    ] + [(3, n) for n in range(1, 7)] + [(4, 4), (1, 7), (5, 3)]
    for w, l in boards:
        pos = empty(w, l)
        assert outcome_of_value(position_value(pos)) is solver.outcome(pos)
    for topo in (Topology.CYLINDER_H, Topology.CYLINDER_V, Topology.TORUS):
        for w, l in [(2, 4), (3, 3), (2, 6), (3, 4)]:
            pos = empty(w, l, topo)
            assert outcome_of_value(position_value(pos)) is solver.outcome(pos)


def test_engine_memo_is_reused():
    engine = ValueEngine()
    engine.value(empty(2, 4))
    examined = engine.positions_examined
    engine.value(empty(2, 4))
    assert engine.positions_examined == examined
