"""Sound fixpoint rule engine over a knowledge base of outcome facts and
game-value bounds.

Facts are refined only by intersection, so saturation terminates; every
refinement is appended to a trace with its rule and premises, and an empty
intersection aborts the batch with a contradiction error naming the premise
chains.  Rules implement: transposition symmetry, horizontal concatenation
(an upper bound for the horizontal player), vertical stacking (the dual
lower bound), the width-2 splitting move, square-board constraints and their
multiples, square subtraction, value-bound propagation, and the
torus/cylinder order chain with the width-2 torus table.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from typing import Callable

from .board import Topology, topology_from_token
from .facts import (
    ALL_OUTCOMES,
    Asserted,
    BoardKey,
    Derived,
    Fact,
    OutcomeClass,
    OutcomeSet,
    Provenance,
    Searched,
    atlas_token,
    provenance_from_dict,
    provenance_to_dict,
)
from . import games
from .games import Game, leq
from .values import outcome_of_value

V = OutcomeClass.VERTICAL
H = OutcomeClass.HORIZONTAL
FIRST = OutcomeClass.FIRST
SECOND = OutcomeClass.SECOND

_FULL = frozenset(OutcomeClass)


class ContradictionError(Exception):
    def __init__(self, key: BoardKey, rule: str, premises: tuple[BoardKey, ...],
                 existing: OutcomeSet, attempted: frozenset):
        tokens = ",".join(sorted(o.value for o in attempted)) or "{}"
        super().__init__(
            f"contradiction at {key}: held {existing} but rule {rule} "
            f"with premises {[str(p) for p in premises]} implies {{{tokens}}}"
        )
        self.key = key
        self.rule = rule
        self.premises = premises


# ---------------------------------------------------------------------------
# Outcome algebra

_SUM: dict[tuple[OutcomeClass, OutcomeClass], frozenset] = {}
for _o in OutcomeClass:
    _SUM[(SECOND, _o)] = frozenset({_o})
    _SUM[(_o, SECOND)] = frozenset({_o})
_SUM[(V, V)] = frozenset({V})
_SUM[(H, H)] = frozenset({H})
_SUM[(V, H)] = _SUM[(H, V)] = _FULL
_SUM[(V, FIRST)] = _SUM[(FIRST, V)] = frozenset({V, FIRST})
_SUM[(H, FIRST)] = _SUM[(FIRST, H)] = frozenset({H, FIRST})
_SUM[(FIRST, FIRST)] = _FULL


def outcome_of_sum(a: OutcomeSet, b: OutcomeSet) -> OutcomeSet:
    members: set[OutcomeClass] = set()
    for x in a.members:
        for y in b.members:
            members |= _SUM[(x, y)]
            if len(members) == 4:
                return ALL_OUTCOMES
    return OutcomeSet(frozenset(members))


_UPPER_TRANSFER = {
    H: frozenset({H}),
    SECOND: frozenset({SECOND, H}),
    FIRST: frozenset({FIRST, H}),
    V: _FULL,
}
_LOWER_TRANSFER = {
    V: frozenset({V}),
    SECOND: frozenset({SECOND, V}),
    FIRST: frozenset({FIRST, V}),
    H: _FULL,
}


def outcome_from_upper_bound(bound: OutcomeSet) -> OutcomeSet:
    """Knowledge about G given G <= B and knowledge about B."""
    members: set[OutcomeClass] = set()
    for o in bound.members:
        members |= _UPPER_TRANSFER[o]
    return OutcomeSet(frozenset(members))


def outcome_from_lower_bound(bound: OutcomeSet) -> OutcomeSet:
    members: set[OutcomeClass] = set()
    for o in bound.members:
        members |= _LOWER_TRANSFER[o]
    return OutcomeSet(frozenset(members))


_SWAP = {V: H, H: V, FIRST: FIRST, SECOND: SECOND}


def swap_players(s: OutcomeSet) -> OutcomeSet:
    return OutcomeSet(frozenset(_SWAP[o] for o in s.members))


# ---------------------------------------------------------------------------
# Knowledge base

BOUND_ANTICHAIN_CAP = 12


@dataclass
class TraceEvent:
    seq: int
    key: BoardKey
    before: OutcomeSet
    after: OutcomeSet
    rule: str
    premises: tuple[BoardKey, ...]
    details: dict = field(default_factory=dict)


@dataclass(frozen=True)
class TailCertificate:
    """Window [start, start+period) of horizontal wins plus a period piece,
    certifying a horizontal win for every length >= start by concatenation."""

    width: int
    start: int
    period: int

    def covers(self, length: int) -> bool:
        return length >= self.start


@dataclass
class SaturationReport:
    passes: int
    refinements: int
    solved: list[BoardKey]
    partial: list[BoardKey]
    unknown: list[BoardKey]
    elapsed: float

    def summary(self) -> str:
        return (
            f"saturation: {self.passes} passes, {self.refinements} refinements, "
            f"{len(self.solved)} solved, {len(self.partial)} partial, "
            f"{len(self.unknown)} untouched ({self.elapsed:.2f}s)"
        )


class KnowledgeBase:
    def __init__(self, width_horizon: int = 13, length_horizon: int = 64):
        self.width_horizon = width_horizon
        self.length_horizon = length_horizon
        self.facts: dict[BoardKey, OutcomeSet] = {}
        self.provenance: dict[BoardKey, list[Provenance]] = {}
        self.values: dict[BoardKey, Game] = {}
        self.upper_bounds: dict[BoardKey, list[Game]] = {}
        self.lower_bounds: dict[BoardKey, list[Game]] = {}
        self.trace: list[TraceEvent] = []

    # -- capacity --
    def within_horizon(self, key: BoardKey) -> bool:
        return key.width <= self.width_horizon and key.length <= self.length_horizon

    def keys_of(self, topology: Topology, width: int) -> list[int]:
        return sorted(
            k.length for k in self.facts
            if k.topology is topology and k.width == width
        )

    # -- reads --
    def outcome(self, key: BoardKey) -> OutcomeSet:
        return self.facts.get(key, ALL_OUTCOMES)

    def known(self, key: BoardKey) -> bool:
        return key in self.facts

    def outcome_row(self, topology: Topology, width: int, max_length: int) -> list[OutcomeSet]:
        return [
            self.outcome(BoardKey(topology, width, n)) for n in range(1, max_length + 1)
        ]

    # -- seeding --
    def seed_fact(self, key: BoardKey, outcomes: OutcomeSet, provenance: Provenance) -> None:
        self._record(key, outcomes, "seed", (), provenance=provenance)

    def seed_value(self, key: BoardKey, value: Game, citation: str) -> None:
        self.values[key] = value
        prov = Asserted(citation)
        self.add_bound(key, "upper", value, record=False)
        self.add_bound(key, "lower", value, record=False)
        self.provenance.setdefault(key, []).append(prov)

    def seed_searched(self, fact: Fact) -> None:
        self.seed_fact(fact.key, fact.outcomes, fact.provenance)

    # -- refinement --
    def refine(self, key: BoardKey, newset: OutcomeSet, rule: str,
               premises: tuple[BoardKey, ...] = (), details: dict | None = None) -> bool:
        if not self.within_horizon(key):
            return False
        return self._record(key, newset, rule, premises, details=details)

    def _record(self, key, newset, rule, premises, details=None, provenance=None) -> bool:
        old = self.outcome(key)
        inter = old.members & newset.members
        if not inter:
            raise ContradictionError(key, rule, premises, old, newset.members)
        if inter == old.members and key in self.facts:
            return False
        after = OutcomeSet(inter)
        self.facts[key] = after
        event = TraceEvent(
            seq=len(self.trace), key=key, before=old, after=after,
            rule=rule, premises=premises, details=dict(details or {}),
        )
        event.details.setdefault(
            "premise_sets", [self.outcome(p).tokens() for p in premises]
        )
        self.trace.append(event)
        if provenance is None:
            provenance = Derived(rule, premises)
        self.provenance.setdefault(key, []).append(provenance)
        return True

    # -- bounds --
    def add_bound(self, key: BoardKey, side: str, value: Game, record: bool = True) -> bool:
        if not self.within_horizon(key):
            return False
        bucket = (self.upper_bounds if side == "upper" else self.lower_bounds).setdefault(key, [])
        minimal = side == "upper"
        for existing in bucket:
            if (leq(existing, value) if minimal else leq(value, existing)):
                return False  # an at-least-as-strong bound is present
        survivors = [
            e for e in bucket if not (leq(value, e) if minimal else leq(e, value))
        ]
        if len(survivors) >= BOUND_ANTICHAIN_CAP:
            return False  # full of incomparable bounds: reject the newcomer
        survivors.append(value)
        survivors.sort(key=games._sort_key)
        bucket[:] = survivors
        return True

    def provenance_summary(self, key: BoardKey) -> str:
        provs = self.provenance.get(key, [])
        if any(isinstance(p, Searched) for p in provs):
            return "searched"
        if any(isinstance(p, Asserted) for p in provs):
            return "asserted"
        return "derived"


# ---------------------------------------------------------------------------
# Rules.  Each takes the knowledge base and returns the number of changes.


_TRANSPOSED_TOPOLOGY = {
    Topology.RECTANGLE: Topology.RECTANGLE,
    Topology.TORUS: Topology.TORUS,
    Topology.CYLINDER_H: Topology.CYLINDER_V,
    Topology.CYLINDER_V: Topology.CYLINDER_H,
}


def rule_transpose(kb: KnowledgeBase) -> int:
    changes = 0
    for key, outcomes in list(kb.facts.items()):
        if key.length < 1:
            continue
        tkey = BoardKey(_TRANSPOSED_TOPOLOGY[key.topology], key.length, key.width)
        if kb.refine(tkey, swap_players(outcomes), "transpose", (key,)):
            changes += 1
    return changes


def rule_exact_values(kb: KnowledgeBase) -> int:
    changes = 0
    for key, value in kb.values.items():
        outcome = outcome_of_value(value)
        if kb.refine(key, OutcomeSet.of(outcome), "exact-value", (),
                     details={"value": games.render(value)}):
            changes += 1
    return changes


def _rect_lengths_by_width(kb: KnowledgeBase) -> dict[int, list[int]]:
    widths: dict[int, list[int]] = {}
    for key in kb.facts:
        if key.topology is Topology.RECTANGLE and key.length >= 1:
            widths.setdefault(key.width, []).append(key.length)
    return {w: sorted(set(ls)) for w, ls in widths.items()}


def rule_h_concat(kb: KnowledgeBase) -> int:
    """The horizontal player may decline to cross a vertical boundary, so a
    board is at most the sum of its left and right parts."""
    changes = 0
    for width, lengths in _rect_lengths_by_width(kb).items():
        for i, a in enumerate(lengths):
            for b in lengths[i:]:
                if a + b > kb.length_horizon:
                    break
                ka = BoardKey(Topology.RECTANGLE, width, a)
                kc = BoardKey(Topology.RECTANGLE, width, b)
                transfer = outcome_from_upper_bound(
                    outcome_of_sum(kb.outcome(ka), kb.outcome(kc))
                )
                if transfer.members == _FULL:
                    continue
                target = BoardKey(Topology.RECTANGLE, width, a + b)
                if kb.refine(target, transfer, "h-concat", (ka, kc)):
                    changes += 1
    return changes


def rule_v_stack(kb: KnowledgeBase) -> int:
    """Dually, the vertical player may decline to cross a horizontal
    boundary, so a board is at least the sum of its top and bottom parts."""
    changes = 0
    by_length: dict[int, list[int]] = {}
    for key in kb.facts:
        if key.topology is Topology.RECTANGLE and key.length >= 1:
            by_length.setdefault(key.length, []).append(key.width)
    for length, widths in by_length.items():
        widths = sorted(set(widths))
        for i, a in enumerate(widths):
            for b in widths[i:]:
                if a + b > kb.width_horizon:
                    break
                ka = BoardKey(Topology.RECTANGLE, a, length)
                kc = BoardKey(Topology.RECTANGLE, b, length)
                transfer = outcome_from_lower_bound(
                    outcome_of_sum(kb.outcome(ka), kb.outcome(kc))
                )
                if transfer.members == _FULL:
                    continue
                target = BoardKey(Topology.RECTANGLE, a + b, length)
                if kb.refine(target, transfer, "v-stack", (ka, kc)):
                    changes += 1
    return changes


_NONNEGATIVE = frozenset({SECOND, V})
_NONPOSITIVE = frozenset({SECOND, H})
_SPLIT_RESULT = OutcomeSet(frozenset({FIRST, V}))


def rule_split_width2(kb: KnowledgeBase) -> int:
    """On width 2 the vertical player's first move splits length m+n+1 into
    independent boards of lengths m and n; if both are at least a draw for
    her, she wins moving first."""
    changes = 0
    lengths = [
        k.length for k, s in kb.facts.items()
        if k.topology is Topology.RECTANGLE and k.width == 2
        and s.members <= _NONNEGATIVE
    ]
    lengths = sorted(set(lengths))
    for i, m in enumerate(lengths):
        for n in lengths[i:]:
            if m + n + 1 > kb.length_horizon:
                break
            km = BoardKey(Topology.RECTANGLE, 2, m)
            kn = BoardKey(Topology.RECTANGLE, 2, n)
            target = BoardKey(Topology.RECTANGLE, 2, m + n + 1)
            if kb.refine(target, _SPLIT_RESULT, "split-width2", (km, kn)):
                changes += 1
    return changes


_SQUARE_SET = OutcomeSet(frozenset({FIRST, SECOND}))
_SQUARE_MULTIPLE = {
    (FIRST, 0): frozenset({SECOND, H}),   # even number of copies
    (FIRST, 1): frozenset({FIRST, H}),    # odd number of copies
    (SECOND, 0): frozenset({SECOND, H}),
    (SECOND, 1): frozenset({SECOND, H}),
}


def rule_square(kb: KnowledgeBase) -> int:
    """Neither player can have an advantage on a square, and a k-fold
    multiple of a square is bounded by k copies of it (paired copies
    cancel, since a square is its own negative under a quarter turn)."""
    changes = 0
    for n in range(1, min(kb.width_horizon, kb.length_horizon) + 1):
        key = BoardKey(Topology.RECTANGLE, n, n)
        if kb.refine(key, _SQUARE_SET, "square", ()):
            changes += 1
        square = kb.outcome(key)
        if not square.members <= _SQUARE_SET.members:
            continue  # refine above would have raised on a true conflict
        k = 2
        while n * k <= kb.length_horizon:
            members: set[OutcomeClass] = set()
            for o in square.members:
                members |= _SQUARE_MULTIPLE[(o, k % 2)]
            target = BoardKey(Topology.RECTANGLE, n, n * k)
            if kb.refine(target, OutcomeSet(frozenset(members)),
                         "square-multiple", (key,), details={"k": k}):
                changes += 1
            k += 1
    return changes


_NOT_V = OutcomeSet(frozenset({H, FIRST, SECOND}))
_NOT_H = OutcomeSet(frozenset({V, FIRST, SECOND}))


def rule_subtraction(kb: KnowledgeBase) -> int:
    """No two boards can stack or concatenate to a square while giving
    either player a strict advantage."""
    changes = 0
    for key, outcomes in list(kb.facts.items()):
        if key.topology is not Topology.RECTANGLE or key.length < 1:
            continue
        m, n = key.width, key.length
        if m < n and outcomes.members <= _NONNEGATIVE:
            target = BoardKey(Topology.RECTANGLE, n - m, n)
            if kb.refine(target, _NOT_V, "subtraction", (key,)):
                changes += 1
        if n < m and outcomes.members <= _NONPOSITIVE:
            target = BoardKey(Topology.RECTANGLE, m, m - n)
            if kb.refine(target, _NOT_H, "subtraction-dual", (key,)):
                changes += 1
    return changes


def rule_bounds(kb: KnowledgeBase) -> int:
    """Propagate value bounds along concatenation and stacking, then refine
    outcomes from each bound's sign."""
    changes = 0
    # upper bounds add along concatenation: same width, lengths add
    by_width: dict[int, list[int]] = {}
    for key in kb.upper_bounds:
        if key.topology is Topology.RECTANGLE and key.length >= 1:
            by_width.setdefault(key.width, []).append(key.length)
    for width, lens in sorted(by_width.items()):
        lengths = sorted(set(lens))
        for i, a in enumerate(lengths):
            for b in lengths[i:]:
                if a + b > kb.length_horizon:
                    break
                ka = BoardKey(Topology.RECTANGLE, width, a)
                kc = BoardKey(Topology.RECTANGLE, width, b)
                target = BoardKey(Topology.RECTANGLE, width, a + b)
                for ga in kb.upper_bounds.get(ka, []):
                    for gb in kb.upper_bounds.get(kc, []):
                        if kb.add_bound(target, "upper", games.add(ga, gb)):
                            changes += 1
    # lower bounds add along stacking: same length, widths add
    by_length: dict[int, list[int]] = {}
    for key in kb.lower_bounds:
        if key.topology is Topology.RECTANGLE and key.length >= 1:
            by_length.setdefault(key.length, []).append(key.width)
    for length, widths_ in sorted(by_length.items()):
        widths = sorted(set(widths_))
        for i, a in enumerate(widths):
            for b in widths[i:]:
                if a + b > kb.width_horizon:
                    break
                ka = BoardKey(Topology.RECTANGLE, a, length)
                kc = BoardKey(Topology.RECTANGLE, b, length)
                target = BoardKey(Topology.RECTANGLE, a + b, length)
                for ga in kb.lower_bounds.get(ka, []):
                    for gb in kb.lower_bounds.get(kc, []):
                        if kb.add_bound(target, "lower", games.add(ga, gb)):
                            changes += 1
    # sign of a bound restricts the outcome
    for side, buckets, transfer in (
        ("upper", kb.upper_bounds, outcome_from_upper_bound),
        ("lower", kb.lower_bounds, outcome_from_lower_bound),
    ):
        for key, bucket in list(buckets.items()):
            for g in bucket:
                implied = transfer(OutcomeSet.of(outcome_of_value(g)))
                if implied.members == _FULL:
                    continue
                if kb.refine(key, implied, f"bound-{side}", (),
                             details={"bound": games.render(g), "side": side}):
                    changes += 1
    return changes


_CHAIN_PAIRS = (
    (Topology.CYLINDER_H, Topology.RECTANGLE),
    (Topology.CYLINDER_H, Topology.TORUS),
    (Topology.RECTANGLE, Topology.CYLINDER_V),
    (Topology.TORUS, Topology.CYLINDER_V),
)


def rule_torus_cylinder(kb: KnowledgeBase) -> int:
    """Gluing edges orders the four topologies: extra horizontal adjacency
    helps only the horizontal player, extra vertical adjacency only the
    vertical player.  Width-2 tori additionally follow the table relating
    them to rectangles of the same and one-smaller length."""
    changes = 0
    dims = {
        (k.width, k.length) for k in kb.facts if k.length >= 1
    }
    for width, length in sorted(dims):
        for lo_t, hi_t in _CHAIN_PAIRS:
            lo = BoardKey(lo_t, width, length)
            hi = BoardKey(hi_t, width, length)
            if kb.known(hi):
                transfer = outcome_from_upper_bound(kb.outcome(hi))
                if transfer.members != _FULL and kb.refine(
                    lo, transfer, "chain-upper", (hi,)
                ):
                    changes += 1
            if kb.known(lo):
                transfer = outcome_from_lower_bound(kb.outcome(lo))
                if transfer.members != _FULL and kb.refine(
                    hi, transfer, "chain-lower", (lo,)
                ):
                    changes += 1
    # width-2 torus table
    for n in range(2, kb.length_horizon + 1):
        rn = BoardKey(Topology.RECTANGLE, 2, n)
        rprev = BoardKey(Topology.RECTANGLE, 2, n - 1)
        if not kb.known(rn):
            continue
        target = BoardKey(Topology.TORUS, 2, n)
        sn = kb.outcome(rn)
        sprev = kb.outcome(rprev)
        rows: list[tuple[frozenset, int, tuple[BoardKey, ...]]] = []
        if sn.members <= {H}:
            rows.append((frozenset({H}), 1, (rn,)))
        if kb.known(rprev):
            if sn.members <= {FIRST} and sprev.members <= {FIRST, H}:
                rows.append((frozenset({H}), 2, (rn, rprev)))
            if sn.members <= {FIRST} and sprev.members <= _NONNEGATIVE:
                rows.append((frozenset({FIRST}), 3, (rn, rprev)))
            if sn.members <= _NONNEGATIVE and sprev.members <= {FIRST, H}:
                rows.append((frozenset({SECOND, H}), 4, (rn, rprev)))
        for members, row, premises in rows:
            if kb.refine(target, OutcomeSet(members), "torus-width2-table",
                         premises, details={"row": row}):
                changes += 1
    return changes


RULES: tuple[tuple[str, Callable[[KnowledgeBase], int]], ...] = (
    ("transpose", rule_transpose),
    ("exact-value", rule_exact_values),
    ("h-concat", rule_h_concat),
    ("v-stack", rule_v_stack),
    ("split-width2", rule_split_width2),
    ("square", rule_square),
    ("subtraction", rule_subtraction),
    ("bounds", rule_bounds),
    ("torus-cylinder", rule_torus_cylinder),
)


def saturate(kb: KnowledgeBase, max_passes: int = 64) -> SaturationReport:
    """Apply every rule to fixpoint.  Deterministic: rules run in a fixed
    order and iterate keys in sorted order."""
    start = time.monotonic()
    total = 0
    passes = 0
    while True:
        passes += 1
        changed = 0
        for _name, rule in RULES:
            changed += rule(kb)
        total += changed
        if changed == 0:
            break
        if passes >= max_passes:
            raise RuntimeError(f"saturation did not settle in {max_passes} passes")
    solved, partial, unknown = [], [], []
    for key in sorted(kb.facts):
        size = len(kb.facts[key].members)
        if size == 1:
            solved.append(key)
        elif size < 4:
            partial.append(key)
        else:
            unknown.append(key)
    return SaturationReport(
        passes=passes, refinements=total, solved=solved, partial=partial,
        unknown=unknown, elapsed=time.monotonic() - start,
    )


# ---------------------------------------------------------------------------
# Tail certificates


def tail_theorem(kb: KnowledgeBase, width: int,
                 topology: Topology = Topology.RECTANGLE) -> TailCertificate | None:
    """Find the smallest start with a full period-length window of
    horizontal wins; concatenation with the period piece then extends the
    win to every longer board."""
    h_only = OutcomeSet.of(H)

    def is_h(length: int) -> bool:
        return kb.outcome(BoardKey(topology, width, length)) == h_only

    periods = [p for p in range(1, kb.length_horizon + 1) if is_h(p)]
    best: TailCertificate | None = None
    for start in range(1, kb.length_horizon + 1):
        for p in periods:
            if start + p - 1 > kb.length_horizon:
                break
            if all(is_h(n) for n in range(start, start + p)):
                best = TailCertificate(width, start, p)
                break
        if best:
            break
    if best is None:
        return None
    # independent check: window readout plus one induction step
    assert all(is_h(n) for n in range(best.start, best.start + best.period))
    assert is_h(best.period)
    step = outcome_from_upper_bound(outcome_of_sum(h_only, h_only))
    assert step == h_only
    return best


def outcome_for_length(kb: KnowledgeBase, width: int, length: int,
                       certificate: TailCertificate | None = None,
                       topology: Topology = Topology.RECTANGLE) -> OutcomeSet:
    """Outcome knowledge for any length, using the tail beyond the horizon."""
    key = BoardKey(topology, width, length)
    if length <= kb.length_horizon:
        return kb.outcome(key)
    cert = certificate or tail_theorem(kb, width, topology)
    if cert is not None and cert.covers(length):
        return OutcomeSet.of(H)
    return ALL_OUTCOMES


# ---------------------------------------------------------------------------
# Explanation trees


@dataclass
class ExplainStep:
    rule: str
    before: list[str]
    after: list[str]
    details: dict
    premises: list["ExplainNode"]


@dataclass
class ExplainNode:
    key: BoardKey
    outcomes: list[str]
    steps: list[ExplainStep]

    def to_dict(self) -> dict:
        return {
            "key": str(self.key),
            "outcomes": self.outcomes,
            "steps": [
                {
                    "rule": s.rule,
                    "before": s.before,
                    "after": s.after,
                    "details": {k: v for k, v in s.details.items() if k != "premise_sets"},
                    "premises": [p.to_dict() for p in s.premises],
                }
                for s in self.steps
            ],
        }


class UnknownKeyError(KeyError):
    pass


def explain(kb: KnowledgeBase, key: BoardKey, up_to: int | None = None,
            _memo: dict | None = None, _depth: int = 0) -> ExplainNode:
    """Acyclic tree of the rule applications that produced a fact."""
    if key not in kb.facts:
        raise UnknownKeyError(str(key))
    if _memo is None:
        _memo = {}
    limit = len(kb.trace) if up_to is None else up_to
    memo_key = (key, limit)
    if memo_key in _memo:
        return _memo[memo_key]
    events = [e for e in kb.trace if e.key == key and e.seq < limit]
    steps = []
    node = ExplainNode(
        key=key,
        outcomes=(events[-1].after.tokens() if events else kb.outcome(key).tokens()),
        steps=steps,
    )
    _memo[memo_key] = node
    if _depth < 64:
        for event in events:
            steps.append(
                ExplainStep(
                    rule=event.rule,
                    before=event.before.tokens(),
                    after=event.after.tokens(),
                    details=event.details,
                    premises=[
                        explain(kb, p, up_to=event.seq, _memo=_memo, _depth=_depth + 1)
                        for p in event.premises
                        if p in kb.facts
                    ],
                )
            )
    return node


def concat_supports(kb: KnowledgeBase, key: BoardKey) -> list[dict]:
    """Every decomposition that independently corroborates the fact: all
    concatenations and width-2 splits whose transfer says anything."""
    supports: list[dict] = []
    if key.topology is not Topology.RECTANGLE:
        return supports
    for a in range(1, key.length // 2 + 1):
        b = key.length - a
        ka = BoardKey(key.topology, key.width, a)
        kc = BoardKey(key.topology, key.width, b)
        if kb.known(ka) and kb.known(kc):
            transfer = outcome_from_upper_bound(
                outcome_of_sum(kb.outcome(ka), kb.outcome(kc))
            )
            if transfer.members != _FULL:
                supports.append({
                    "rule": "h-concat",
                    "parts": [a, b],
                    "outcomes": transfer.tokens(),
                })
    if key.width == 2:
        for m in range(0, (key.length - 1) // 2 + 1):
            n = key.length - 1 - m
            km = BoardKey(key.topology, 2, m)
            kn = BoardKey(key.topology, 2, n)
            if kb.known(km) and kb.known(kn) and \
                    kb.outcome(km).members <= _NONNEGATIVE and \
                    kb.outcome(kn).members <= _NONNEGATIVE:
                supports.append({
                    "rule": "split-width2",
                    "parts": [m, n],
                    "outcomes": _SPLIT_RESULT.tokens(),
                })
    return supports


def explain_dict(kb: KnowledgeBase, key: BoardKey) -> dict:
    tree = explain(kb, key).to_dict()
    tree["supports"] = concat_supports(kb, key)
    return tree


def replay(kb: KnowledgeBase, node: ExplainNode) -> bool:
    """Re-execute the tree's rule applications from recorded premise states
    and confirm each step reproduces its written refinement."""
    current = ALL_OUTCOMES
    for step in node.steps:
        for premise in step.premises:
            if not replay(kb, premise):
                return False
        premise_sets = [
            OutcomeSet.from_tokens(t) for t in step.details.get("premise_sets", [])
        ]
        recomputed = _recompute(step, premise_sets)
        if recomputed is not None:
            expected = OutcomeSet.from_tokens(step.after)
            got = OutcomeSet.from_tokens(step.before).members & recomputed.members
            if expected.members != got:
                return False
        current = OutcomeSet.from_tokens(step.after)
    return current == OutcomeSet.from_tokens(node.outcomes)


def _recompute(step: ExplainStep, premise_sets: list[OutcomeSet]) -> OutcomeSet | None:
    rule = step.rule
    if rule == "seed":
        return OutcomeSet.from_tokens(step.after)
    if rule == "transpose" and len(premise_sets) == 1:
        return swap_players(premise_sets[0])
    if rule == "exact-value":
        return OutcomeSet.of(outcome_of_value(games.parse(step.details["value"])))
    if rule == "h-concat" and len(premise_sets) == 2:
        return outcome_from_upper_bound(outcome_of_sum(*premise_sets))
    if rule == "v-stack" and len(premise_sets) == 2:
        return outcome_from_lower_bound(outcome_of_sum(*premise_sets))
    if rule == "split-width2":
        return _SPLIT_RESULT if all(
            s.members <= _NONNEGATIVE for s in premise_sets
        ) else None
    if rule == "square":
        return _SQUARE_SET
    if rule == "square-multiple" and len(premise_sets) == 1:
        members: set[OutcomeClass] = set()
        for o in premise_sets[0].members:
            members |= _SQUARE_MULTIPLE[(o, step.details["k"] % 2)]
        return OutcomeSet(frozenset(members))
    if rule == "subtraction":
        return _NOT_V
    if rule == "subtraction-dual":
        return _NOT_H
    if rule == "chain-upper" and len(premise_sets) == 1:
        return outcome_from_upper_bound(premise_sets[0])
    if rule == "chain-lower" and len(premise_sets) == 1:
        return outcome_from_lower_bound(premise_sets[0])
    if rule in ("bound-upper", "bound-lower"):
        bound = games.parse(step.details["bound"])
        transfer = (
            outcome_from_upper_bound if rule == "bound-upper" else outcome_from_lower_bound
        )
        return transfer(OutcomeSet.of(outcome_of_value(bound)))
    if rule == "torus-width2-table":
        row = step.details.get("row")
        table = {1: {H}, 2: {H}, 3: {FIRST}, 4: {SECOND, H}}
        return OutcomeSet(frozenset(table[row])) if row in table else None
    return None


# ---------------------------------------------------------------------------
# Atlas export and knowledge-base files


def atlas_cell(kb: KnowledgeBase, key: BoardKey) -> dict:
    outcomes = kb.outcome(key)
    return {
        "topology": key.topology.value,
        "width": key.width,
        "length": key.length,
        "outcomes": outcomes.tokens(),
        "token": atlas_token(outcomes),
        "provenance": kb.provenance_summary(key) if key in kb.facts else "none",
        "known": key in kb.facts,
    }


def atlas_grid(kb: KnowledgeBase, topology: Topology,
               max_width: int, max_length: int) -> list[dict]:
    cells = []
    for w in range(1, max_width + 1):
        for n in range(1, max_length + 1):
            cells.append(atlas_cell(kb, BoardKey(topology, w, n)))
    return cells


def atlas_text(kb: KnowledgeBase, topology: Topology,
               max_width: int, max_length: int) -> str:
    col = 3
    header = "w\\n " + "".join(f"{n:>{col}}" for n in range(1, max_length + 1))
    lines = [header]
    for w in range(1, max_width + 1):
        row = "".join(
            f"{atlas_token(kb.outcome(BoardKey(topology, w, n))):>{col}}"
            for n in range(1, max_length + 1)
        )
        lines.append(f"{w:>3} " + row)
    return "\n".join(lines)


def fact_record(kb: KnowledgeBase, key: BoardKey) -> dict:
    provs = kb.provenance.get(key, [])
    return {
        "type": "fact",
        "topology": key.topology.value,
        "width": key.width,
        "length": key.length,
        "outcomes": kb.outcome(key).tokens(),
        "provenance": provenance_to_dict(provs[-1]) if provs else {"kind": "derived", "rule": "", "premises": []},
    }


def save_kb(kb: KnowledgeBase, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for key in sorted(kb.facts):
            fh.write(json.dumps(fact_record(kb, key)) + "\n")
        for key in sorted(kb.values):
            fh.write(json.dumps({
                "type": "value", "topology": key.topology.value,
                "width": key.width, "length": key.length,
                "value": games.render(kb.values[key]),
            }) + "\n")
        for side, buckets in (("upper", kb.upper_bounds), ("lower", kb.lower_bounds)):
            for key in sorted(buckets):
                for g in buckets[key]:
                    fh.write(json.dumps({
                        "type": "bound", "topology": key.topology.value,
                        "width": key.width, "length": key.length,
                        "side": side, "value": games.render(g),
                    }) + "\n")


def parse_record(line: str) -> dict:
    return json.loads(line)


def load_kb(path: str, width_horizon: int = 13, length_horizon: int = 64) -> KnowledgeBase:
    kb = KnowledgeBase(width_horizon, length_horizon)
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            rec = json.loads(line)
            key = BoardKey(
                topology_from_token(rec["topology"]), rec["width"], rec["length"]
            )
            if rec["type"] == "fact":
                kb.seed_fact(
                    key,
                    OutcomeSet.from_tokens(rec["outcomes"]),
                    provenance_from_dict(rec["provenance"]),
                )
            elif rec["type"] == "value":
                kb.seed_value(key, games.parse(rec["value"]), citation="loaded")
            elif rec["type"] == "bound":
                kb.add_bound(key, rec["side"], games.parse(rec["value"]))
    return kb
