"""Who wins Domineering on rectangles, cylinders and tori.

Exhaustive search, canonical game values, a sound derivation engine with
citable proof traces, composable winning strategies, and CLI/HTTP surfaces.
"""

from .board import (
    BoardSpec,
    Move,
    Player,
    Position,
    Topology,
    apply_move,
    canonical_key,
    components,
    concat_h,
    legal_moves,
    rect,
    rot90,
    stack_v,
)
from .dyadic import Dyadic
from .facts import BoardKey, Fact, OutcomeClass, OutcomeSet, UNKNOWN
from .games import Comparison, Game, add, compare, leq, negate, parse, render
from .knowledge import (
    KnowledgeBase,
    TailCertificate,
    atlas_grid,
    atlas_text,
    explain,
    saturate,
    tail_theorem,
)
from .seeds import default_knowledge_base, load_seed_catalog
from .solver import SearchLimits, Solver, oracle_outcome, outcome, solve_board, wins_moving
from .strategy import (
    PlaySession,
    Strategy,
    StrategyBuilder,
    build_base_strategy,
    compose_sum,
    mirror_strategy,
    strategy_for,
    value_play_move,
    verify_vs_exhaustive,
)
from .values import ValueLimits, outcome_of_value, position_value, value

__all__ = [name for name in dir() if not name.startswith("_")]

__version__ = "0.1.0"
