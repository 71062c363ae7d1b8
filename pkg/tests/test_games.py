import pytest
from hypothesis import given, settings, strategies as st

from domineering import games as G
from domineering.board import Position, rect
from domineering.dyadic import Dyadic
from domineering.values import position_value

ZERO = G.ZERO
STAR = G.STAR


def num(text):
    return G.number(text)


# -- canonicalization ---------------------------------------------------------

def test_star_is_canonical_and_confused():
    assert G.make([ZERO], [ZERO]) is STAR
    assert not STAR.is_number
    assert G.compare(STAR, ZERO) is G.Comparison.CONFUSED


def test_simplicity_rule_detects_numbers():
    assert G.make([ZERO], []) is num(1)
    assert G.make([], [ZERO]) is num(-1)
    assert G.make([ZERO], [num(1)]) is num("1/2")
    assert G.make([ZERO], [num(5)]) is num(1)
    assert G.make([num("1/2")], [num(1)]) is num("3/4")


def test_dominated_option_removed():
    inner = G.make([num(1), num("1/2")], [num(-1)])
    assert inner.left == (num(1),)


def test_reversible_bypass():
    # {1/2 | } reverses through 1/2's right option and lands at 1
    assert G.make([num("1/2")], []) is num(1)


def test_idempotent_canonicalization():
    g = G.parse("3/2|0||-1/2|-5/2")
    again = G.make(list(g.left), list(g.right))
    assert again is g


# -- corpus of generated canonical games --------------------------------------

def _corpus():
    """Canonical values of assorted small positions plus built switches."""
    games = [ZERO, STAR, num(1), num(-1), num("1/2"), num("-3/2"), num(3)]
    for w, l in [(1, 2), (2, 1), (2, 2), (2, 3), (3, 2), (2, 4), (3, 3), (2, 5), (4, 2)]:
        games.append(position_value(Position.empty(rect(w, l))))
    for a, b in [(1, -1), (2, 0), (1, 0), (0, -2), (3, 1)]:
        games.append(G.make([num(a)], [num(b)]))
    extra = []
    for g in games[:8]:
        for h in games[:8]:
            extra.append(G.add(g, h))
    seen = []
    for g in games + extra:
        if g not in seen:
            seen.append(g)
    return seen


CORPUS = _corpus()


def test_corpus_size():
    assert len(CORPUS) >= 30


@pytest.mark.parametrize("g", CORPUS)
def test_leq_reflexive(g):
    assert G.leq(g, g)


def test_leq_transitive_on_corpus():
    # spot-check transitivity across the corpus triples (sampled grid)
    for a in CORPUS[::3]:
        for b in CORPUS[::4]:
            for c in CORPUS[::5]:
                if G.leq(a, b) and G.leq(b, c):
                    assert G.leq(a, c)


def test_leq_antisymmetry_is_identity():
    for a in CORPUS:
        for b in CORPUS:
            if G.leq(a, b) and G.leq(b, a):
                assert a is b


@pytest.mark.parametrize("g", CORPUS)
def test_negate_involution(g):
    assert G.negate(G.negate(g)) is g


@pytest.mark.parametrize("g", CORPUS)
def test_g_minus_g_is_zero(g):
    assert G.sub(g, g) is ZERO


def test_negate_distributes_over_add():
    for a in CORPUS[::4]:
        for b in CORPUS[::5]:
            assert G.negate(G.add(a, b)) is G.add(G.negate(a), G.negate(b))


def test_add_commutative_on_corpus():
    for a in CORPUS[::4]:
        for b in CORPUS[::5]:
            assert G.add(a, b) is G.add(b, a)


# -- published value identities ------------------------------------------------

def test_width9_pair_sum():
    g9 = G.parse("3/2|0||-1/2|-5/2")
    assert G.add(g9, g9) is G.parse("1|-1/2||-1|-5/2")
    assert G.compare(G.add(g9, g9), num("-1/2")) is G.Comparison.LESS


def test_width11_quadruple_sum():
    g11 = G.parse("1|{1/2|-1||-3/2|-7/2}")
    total = ZERO
    for _ in range(4):
        total = G.add(total, g11)
    assert total is G.parse("1|-1/2||-1|-5/2")


def test_closed_form_is_negative():
    v31 = G.parse("{2|0||-1/2|-2}|-5/2")
    assert G.compare(v31, ZERO) is G.Comparison.LESS


# -- notation -------------------------------------------------------------------

ROUND_TRIP = [
    "4",
    "-5/2",
    "0|0",
    "1|-1",
    "3/2|0||-1/2|-5/2",
    "{2|0||-1/2|-2}|-5/2",
    "1|{1/2|-1||-3/2|-7/2}",
    "5|3||11/4|1/4",
]


@pytest.mark.parametrize("text", ROUND_TRIP)
def test_parse_render_round_trip(text):
    g = G.parse(text)
    assert G.parse(G.render(g)) is g
    assert G.render(g) == text


@pytest.mark.parametrize("g", CORPUS)
def test_render_round_trip_on_corpus(g):
    assert G.parse(G.render(g)) is g


def test_parse_unicode_double_bar():
    assert G.parse("3/2|0‖-1/2|-5/2") is G.parse("3/2|0||-1/2|-5/2")


def test_empty_sides_parse():
    assert G.parse("0|") is num(1)
    assert G.parse("|0") is num(-1)


def test_parse_error_positions():
    with pytest.raises(G.ParseError):
        G.parse("{1|2")
    with pytest.raises(G.ParseError):
        G.parse("1 2")
    with pytest.raises(G.ParseError):
        G.parse("")
    with pytest.raises(G.ParseError):
        G.parse("1,|0")
    err = None
    try:
        G.parse("{1|2")
    except G.ParseError as exc:
        err = exc
    assert err is not None and err.pos >= 0


def test_comma_option_lists():
    g = G.parse("0,*|0")
    assert G.parse(G.render(g)) is g


def test_parse_star_brace():
    assert G.parse("{0|0}") is STAR
