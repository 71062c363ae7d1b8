import json

import pytest

from domineering import games as G
from domineering.board import Topology
from domineering.facts import (
    ALL_OUTCOMES,
    Asserted,
    BoardKey,
    OutcomeClass,
    OutcomeSet,
    atlas_token,
    outcomes_from_atlas_token,
    rect_key,
)
from domineering.knowledge import (
    ContradictionError,
    KnowledgeBase,
    atlas_grid,
    atlas_text,
    concat_supports,
    explain,
    explain_dict,
    fact_record,
    load_kb,
    outcome_from_lower_bound,
    outcome_from_upper_bound,
    outcome_of_sum,
    replay,
    rule_split_width2,
    rule_square,
    rule_subtraction,
    saturate,
    save_kb,
    swap_players,
    tail_theorem,
)
from domineering.seeds import apply_seeds, default_knowledge_base, load_seed_catalog
from domineering.solver import Solver

V = OutcomeClass.VERTICAL
H = OutcomeClass.HORIZONTAL
F1 = OutcomeClass.FIRST
S2 = OutcomeClass.SECOND


def S(*outcomes):
    return OutcomeSet.of(*outcomes)


# -- outcome algebra -----------------------------------------------------------

def test_upper_bound_transfer():
    assert outcome_from_upper_bound(S(H)) == S(H)
    assert outcome_from_upper_bound(S(S2)) == S(S2, H)
    assert outcome_from_upper_bound(S(F1)) == S(F1, H)
    assert outcome_from_upper_bound(S(V)) == ALL_OUTCOMES


def test_lower_bound_transfer_duality():
    for members in [{H}, {S2}, {F1}, {V}, {F1, H}, {S2, V}]:
        up = outcome_from_upper_bound(OutcomeSet(frozenset(members)))
        down = outcome_from_lower_bound(swap_players(OutcomeSet(frozenset(members))))
        assert swap_players(up) == down


def test_outcome_of_sum_table():
    assert outcome_of_sum(S(H), S(S2)) == S(H)
    assert outcome_of_sum(S(S2), S(S2)) == S(S2)
    assert outcome_of_sum(S(F1), S(F1)) == ALL_OUTCOMES
    assert outcome_of_sum(S(V), S(V)) == S(V)
    assert outcome_of_sum(S(V), S(F1)) == S(V, F1)
    assert outcome_of_sum(S(H), S(F1)) == S(H, F1)
    assert outcome_of_sum(S(V), S(H)) == ALL_OUTCOMES


def test_atlas_tokens_round_trip():
    for members in [
        {V}, {H}, {F1}, {S2}, {F1, H}, {F1, V}, {S2, H}, {S2, V}, {F1, S2},
        {V, H}, {H, F1, S2}, {V, F1, S2}, {V, H, S2}, {V, H, F1},
        {V, H, F1, S2},
    ]:
        s = OutcomeSet(frozenset(members))
        assert outcomes_from_atlas_token(atlas_token(s)) == s
    assert atlas_token(S(F1, H)) == "1h"
    assert atlas_token(OutcomeSet(frozenset({H, F1, S2}))) == "-v"
    assert atlas_token(ALL_OUTCOMES) == "?"


# -- knowledge base mechanics ---------------------------------------------------

def test_refine_shrinks_and_traces():
    kb = KnowledgeBase()
    key = rect_key(2, 4)
    kb.seed_fact(key, S(H), Asserted("test"))
    assert kb.outcome(key) == S(H)
    assert not kb.refine(key, S(H, F1), "noop", ())
    assert len(kb.trace) == 1


def test_contradiction_is_fatal():
    kb = KnowledgeBase()
    kb.seed_fact(rect_key(2, 4), S(H), Asserted("test"))
    with pytest.raises(ContradictionError, match="rect:2x4"):
        kb.refine(rect_key(2, 4), S(V), "bad-rule", (rect_key(2, 2),))


def test_wrong_seed_contradicts_on_saturation():
    kb = default_knowledge_base()
    kb.seed_fact(rect_key(2, 8), S(V), Asserted("deliberately wrong"))
    with pytest.raises(ContradictionError):
        saturate(kb)


# -- individual rules ------------------------------------------------------------

def test_split_width2_rule():
    kb = KnowledgeBase()
    kb.seed_fact(rect_key(2, 1), S(V), Asserted("t"))
    rule_split_width2(kb)
    assert kb.outcome(rect_key(2, 3)) == S(F1, V)


def test_square_rule_basics():
    kb = KnowledgeBase()
    rule_square(kb)
    assert kb.outcome(rect_key(6, 6)) == S(F1, S2)
    assert kb.outcome(rect_key(6, 12)) == S(S2, H)


def test_square_rule_with_known_square():
    kb = KnowledgeBase()
    kb.seed_fact(rect_key(5, 5), S(S2), Asserted("t"))
    rule_square(kb)
    assert kb.outcome(rect_key(5, 10)) == S(S2, H)
    assert kb.outcome(rect_key(5, 15)) == S(S2, H)
    kb2 = KnowledgeBase()
    kb2.seed_fact(rect_key(4, 4), S(F1), Asserted("t"))
    rule_square(kb2)
    assert kb2.outcome(rect_key(4, 8)) == S(S2, H)
    assert kb2.outcome(rect_key(4, 12)) == S(F1, H)  # odd multiple


def test_subtraction_rule():
    kb = KnowledgeBase()
    kb.seed_fact(rect_key(2, 13), S(S2), Asserted("t"))
    rule_subtraction(kb)
    assert V not in kb.outcome(rect_key(11, 13))
    # premise not met: nothing inferred
    kb2 = KnowledgeBase()
    kb2.seed_fact(rect_key(1, 3), S(H), Asserted("t"))
    rule_subtraction(kb2)
    assert kb2.outcome(rect_key(2, 3)) == ALL_OUTCOMES


def test_stack_plus_square_resolves_hypothetical_square():
    # with width-13 knowledge of the 4- and 9-row boards, the square follows
    kb = KnowledgeBase()
    kb.seed_fact(rect_key(4, 13), S(V), Asserted("t"))
    kb.seed_fact(rect_key(9, 13), S(F1), Asserted("hypothesis"))
    saturate(kb)
    assert kb.outcome(rect_key(13, 13)) == S(F1)


def test_six_by_twelve_derivation():
    kb = KnowledgeBase()
    kb.seed_fact(rect_key(6, 4), S(F1), Asserted("t"))
    kb.seed_fact(rect_key(6, 8), S(H), Asserted("t"))
    saturate(kb)
    assert kb.outcome(rect_key(6, 12)) == S(H)


def test_torus_width2_table_rows(kb):
    torus = lambda n: BoardKey(Topology.TORUS, 2, n)
    assert kb.outcome(torus(4)) == S(H)      # rectangle already lost
    assert kb.outcome(torus(2)) == S(F1)     # first-player square case
    assert kb.outcome(torus(7)) == S(H)      # both first-player boards
    assert kb.outcome(torus(5)) == S(S2)     # searched seed resolves 2h
    assert kb.outcome(torus(13)) == S(H)     # analysis seed resolves 2h


def test_topology_chain_transfers():
    kb = KnowledgeBase()
    kb.seed_fact(BoardKey(Topology.CYLINDER_V, 3, 4), S(H), Asserted("t"))
    saturate(kb)
    # everything below the top of the chain inherits the upper bound
    assert kb.outcome(BoardKey(Topology.RECTANGLE, 3, 4)) == S(H)
    assert kb.outcome(BoardKey(Topology.TORUS, 3, 4)) == S(H)
    assert kb.outcome(BoardKey(Topology.CYLINDER_H, 3, 4)) == S(H)


# -- saturation of the default catalog -------------------------------------------

def test_width2_row_fully_derived(kb):
    expect = "2 V 1 1 H V 1 1 H V 1 1 H 2 1 1 H H 1 1 H H H 1 H H H 1 H H H H".split()
    got = [atlas_token(kb.outcome(rect_key(2, n))) for n in range(0, 32)]
    assert got == expect
    for n in range(28, 65):
        assert kb.outcome(rect_key(2, n)) == S(H)


def test_tail_certificates(kb):
    assert tail_theorem(kb, 2).start == 28 and tail_theorem(kb, 2).period == 4
    assert (tail_theorem(kb, 3).start, tail_theorem(kb, 3).period) == (4, 4)
    assert (tail_theorem(kb, 5).start, tail_theorem(kb, 5).period) == (6, 2)
    assert (tail_theorem(kb, 7).start, tail_theorem(kb, 7).period) == (8, 4)
    cert9 = tail_theorem(kb, 9)
    assert cert9 is not None and cert9.start <= 22


def test_width4_unsolved_exactly_19_21(kb):
    unsolved = [
        n for n in range(1, 65) if not kb.outcome(rect_key(4, n)).is_singleton
    ]
    assert unsolved == [19, 21]
    assert kb.outcome(rect_key(4, 19)) == S(F1, H)


def test_width7_tail(kb):
    for n in range(8, 65):
        assert kb.outcome(rect_key(7, n)) == S(H)


def test_monotone_termination(kb):
    per_key = {}
    for event in kb.trace:
        per_key[event.key] = per_key.get(event.key, 0) + 1
        assert len(event.after.members) < len(event.before.members)
    assert all(count <= 3 for count in per_key.values())
    assert len(kb.trace) <= 3 * len(kb.facts)


def test_saturate_idempotent(kb):
    before = dict(kb.facts)
    report = saturate(kb)
    assert report.refinements == 0
    assert kb.facts == before


def test_explain_and_replay(kb):
    for key in [rect_key(2, 39), rect_key(2, 27), rect_key(2, 4), rect_key(6, 12),
                BoardKey(Topology.TORUS, 2, 7)]:
        tree = explain(kb, key)
        assert replay(kb, tree), f"replay failed for {key}"
    leaf = explain(kb, rect_key(2, 4))
    assert leaf.steps[0].rule == "seed"


def test_explain_unknown_key():
    from domineering.knowledge import UnknownKeyError

    with pytest.raises(UnknownKeyError):
        explain(KnowledgeBase(), rect_key(2, 4))


def test_supports_show_both_decompositions(kb):
    supports = concat_supports(kb, rect_key(2, 26))
    parts = {tuple(s["parts"]): tuple(s["outcomes"]) for s in supports}
    assert parts[(2, 24)] == ("H", "1")
    assert parts[(13, 13)] == ("H", "2")


def test_width2_torus_row(kb):
    expect = list("V1HH21HH21HHH")
    got = [
        atlas_token(kb.outcome(BoardKey(Topology.TORUS, 2, n)))
        for n in range(1, 14)
    ]
    assert got == expect


def test_soundness_sweep(kb, solver):
    """Every searched truth is a member of the derived set."""
    from domineering.board import BoardSpec, Position

    checked = 0
    for key in sorted(kb.facts):
        if key.length < 1 or key.cells > 18:
            continue
        truth = solver.outcome(Position.empty(BoardSpec(key.topology, key.width, key.length)))
        assert truth in kb.outcome(key), f"{key}: searched {truth} not in {kb.outcome(key)}"
        checked += 1
    assert checked >= 60


def test_removing_the_closed_form_seed_widens_only(kb):
    counterfactual = default_knowledge_base(skip=rect_key(2, 31))
    saturate(counterfactual)
    assert counterfactual.outcome(rect_key(2, 31)) == S(F1, H)
    for key, outcomes in counterfactual.facts.items():
        assert kb.outcome(key).members <= outcomes.members


# -- atlas and file round trips ---------------------------------------------------

def test_atlas_grid_and_text(kb):
    cells = atlas_grid(kb, Topology.RECTANGLE, 4, 8)
    assert len(cells) == 32
    four_by_four = next(c for c in cells if c["width"] == 4 and c["length"] == 4)
    assert four_by_four["outcomes"] == ["1"]
    assert four_by_four["provenance"] == "asserted"
    text = atlas_text(kb, Topology.RECTANGLE, 4, 8)
    assert "w\\n" in text and "1h" not in text.splitlines()[1]


def test_kb_file_round_trip(tmp_path, kb):
    path = tmp_path / "atlas.jsonl"
    save_kb(kb, str(path))
    loaded = load_kb(str(path))
    assert loaded.outcome(rect_key(2, 26)) == S(H)
    assert loaded.outcome(rect_key(4, 19)) == S(F1, H)
    assert set(loaded.facts) == set(kb.facts)
    for key in kb.values:
        assert loaded.values[key] is kb.values[key]


def test_fact_record_round_trip(kb):
    rec = fact_record(kb, rect_key(2, 13))
    parsed = json.loads(json.dumps(rec))
    assert parsed["outcomes"] == ["2"]
    assert parsed["provenance"]["kind"] == "asserted"


def test_seed_catalog_loads():
    seeds = load_seed_catalog()
    assert any(s.kind == "value" and s.key == rect_key(2, 31) for s in seeds)
    assert all(s.citation for s in seeds)
