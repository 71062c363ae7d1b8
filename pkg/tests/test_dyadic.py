import pytest
from hypothesis import given, strategies as st

from domineering.dyadic import Dyadic, simplest_between

dyadics = st.builds(Dyadic, st.integers(-500, 500), st.integers(0, 8))


def test_lowest_terms():
    assert Dyadic(4, 2) == Dyadic(1, 0)
    assert Dyadic(6, 1) == Dyadic(3, 0)
    assert Dyadic(-2, 3) == Dyadic(-1, 2)


def test_parse_forms():
    assert Dyadic.parse("-5/2") == Dyadic(-5, 1)
    assert Dyadic.parse("3") == Dyadic(3)
    assert Dyadic.parse("0.5") == Dyadic(1, 1)
    assert Dyadic.parse("-1.75") == Dyadic(-7, 2)
    with pytest.raises(ValueError):
        Dyadic.parse("1/3")
    with pytest.raises(ValueError):
        Dyadic.parse("0.2")


def test_str_fraction():
    assert str(Dyadic(-5, 1)) == "-5/2"
    assert str(Dyadic(4)) == "4"


@given(dyadics, dyadics)
def test_add_commutes(a, b):
    assert a + b == b + a


@given(dyadics, dyadics, dyadics)
def test_add_associates(a, b, c):
    assert (a + b) + c == a + (b + c)


@given(dyadics)
def test_negation(a):
    assert a + (-a) == Dyadic(0)
    assert -(-a) == a


@given(dyadics, dyadics)
def test_order_total(a, b):
    assert (a < b) + (b < a) + (a == b) == 1


def test_floor():
    assert Dyadic(-5, 1).floor() == -3
    assert Dyadic(5, 1).floor() == 2
    assert Dyadic(7).floor() == 7


@pytest.mark.parametrize(
    "lo,hi,expect",
    [
        (None, None, Dyadic(0)),
        (Dyadic(0), None, Dyadic(1)),
        (None, Dyadic(0), Dyadic(-1)),
        (Dyadic(3, 1), None, Dyadic(2)),
        (Dyadic(-1), Dyadic(1), Dyadic(0)),
        (Dyadic(0), Dyadic(1), Dyadic(1, 1)),
        (Dyadic(1, 1), Dyadic(1), Dyadic(3, 2)),
        (Dyadic(1), Dyadic(2), Dyadic(3, 1)),
        (Dyadic(0), Dyadic(5), Dyadic(1)),
        (Dyadic(-2), Dyadic(-1), Dyadic(-3, 1)),
        (Dyadic(5, 2), Dyadic(11, 3), Dyadic(21, 4)),
    ],
)
def test_simplest_between_cases(lo, hi, expect):
    assert simplest_between(lo, hi) == expect


@given(dyadics, dyadics)
def test_simplest_between_is_inside(a, b):
    lo, hi = (a, b) if a < b else (b, a)
    if not lo < hi:
        return
    mid = simplest_between(lo, hi)
    assert lo < mid < hi


def _birthday(d: Dyadic) -> int:
    if d.exp == 0:
        return abs(d.num)
    whole = abs(d.num) >> d.exp  # floor of |d|
    return whole + 1 + d.exp


@given(dyadics, dyadics)
def test_simplest_between_minimality(a, b):
    """Nothing with a smaller birthday lies strictly inside the interval."""
    lo, hi = (a, b) if a < b else (b, a)
    if not lo < hi:
        return
    mid = simplest_between(lo, hi)
    candidates = [Dyadic(n) for n in range(-600, 601)] + [
        Dyadic(n, e) for e in range(1, 7) for n in range(-127, 128, 2)
    ]
    for cand in candidates:
        if lo < cand < hi:
            assert _birthday(cand) >= _birthday(mid)
