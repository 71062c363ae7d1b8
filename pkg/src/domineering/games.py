"""Canonical-form partizan game values.

A value is either a dyadic number or a general game ``{L | R}`` whose option
lists are canonical: no dominated options, no reversible options, numbers
recognized eagerly by the simplicity rule.  Nodes are immutable and interned
in a shared store keyed by structure, so equality is identity and hashing is
cheap.  Option lists are sorted by a total structural order, making canonical
forms bit-identical across runs.

The slash notation used for interchange: numbers as integers or dyadic
fractions ("3/2"), games as options separated by ``|`` .. ``|||`` in
precedence order, ``{...}`` for explicit grouping, commas between multiple
options on one side.
"""

from __future__ import annotations

from enum import Enum
from fractions import Fraction
from typing import Iterable, Sequence

from .dyadic import Dyadic, simplest_between


class LimitsExceededError(Exception):
    """A value computation outgrew its configured limits."""


class Game:
    """Interned game value node.  Construct via number() / make()."""

    __slots__ = ("num", "left", "right", "_key", "_neg", "_sort_key")

    def __init__(self, num: Dyadic | None, left: tuple, right: tuple):
        self.num = num
        self.left = left
        self.right = right
        self._neg = None
        self._sort_key = None

    @property
    def is_number(self) -> bool:
        return self.num is not None

    def __repr__(self) -> str:
        return f"<Game {render(self)}>"


_STORE: dict[tuple, Game] = {}


def _intern(key: tuple, build) -> Game:
    g = _STORE.get(key)
    if g is None:
        g = build()
        g._key = key
        # insert-if-absent: the first insertion wins under concurrent use
        g = _STORE.setdefault(key, g)
    return g


def number(value: Dyadic | int | str) -> Game:
    if isinstance(value, int):
        value = Dyadic(value)
    elif isinstance(value, str):
        value = Dyadic.parse(value)
    key = ("n", value.num, value.exp)
    return _intern(key, lambda: Game(value, (), ()))


ZERO = number(0)
STAR: Game  # assigned after make() is defined


def _sort_key(g: Game) -> tuple:
    if g._sort_key is None:
        if g.is_number:
            g._sort_key = (0, Fraction(g.num.num, 1 << g.num.exp))
        else:
            g._sort_key = (
                1,
                tuple(_sort_key(o) for o in g.left),
                tuple(_sort_key(o) for o in g.right),
            )
    return g._sort_key


def _intern_general(left: Sequence[Game], right: Sequence[Game]) -> Game:
    lt = tuple(sorted(set(left), key=_sort_key))
    rt = tuple(sorted(set(right), key=_sort_key))
    key = ("g", tuple(id(o) for o in lt), tuple(id(o) for o in rt))
    return _intern(key, lambda: Game(None, lt, rt))


# ---------------------------------------------------------------------------
# Options of numbers (canonical number forms, expanded lazily)


def left_options(g: Game) -> tuple[Game, ...]:
    if not g.is_number:
        return g.left
    x = g.num
    if x.num == 0:
        return ()
    if x.is_integer:
        return (number(Dyadic(x.num - 1)),) if x.num > 0 else ()
    return (number(x - Dyadic(1, x.exp)),)


def right_options(g: Game) -> tuple[Game, ...]:
    if not g.is_number:
        return g.right
    x = g.num
    if x.num == 0:
        return ()
    if x.is_integer:
        return (number(Dyadic(x.num + 1)),) if x.num < 0 else ()
    return (number(x + Dyadic(1, x.exp)),)


# ---------------------------------------------------------------------------
# Order


_LEQ_MEMO: dict[tuple[int, int], bool] = {}


def leq(a: Game, b: Game) -> bool:
    """a <= b under the standard recursive comparison."""
    if a is b:
        return True
    if a.is_number and b.is_number:
        return a.num <= b.num
    key = (id(a), id(b))
    hit = _LEQ_MEMO.get(key)
    if hit is not None:
        return hit
    result = _leq_options(left_options(a), right_options(b), a, b)
    _LEQ_MEMO[key] = result
    return result


def _leq_options(a_lefts, b_rights, a, b) -> bool:
    for al in a_lefts:
        if leq(b, al):
            return False
    for br in b_rights:
        if leq(br, a):
            return False
    return True


def geq(a: Game, b: Game) -> bool:
    return leq(b, a)


class Comparison(Enum):
    LESS = "<"
    GREATER = ">"
    EQUAL = "="
    CONFUSED = "||"


def compare(a: Game, b: Game) -> Comparison:
    le = leq(a, b)
    ge = leq(b, a)
    if le and ge:
        return Comparison.EQUAL
    if le:
        return Comparison.LESS
    if ge:
        return Comparison.GREATER
    return Comparison.CONFUSED


# ---------------------------------------------------------------------------
# Canonicalization


class _Raw:
    """A not-yet-interned {L|R} used only while simplifying."""

    __slots__ = ("left", "right")

    def __init__(self, left: tuple, right: tuple):
        self.left = left
        self.right = right


def _raw_leq(a, b, memo: dict) -> bool:
    """leq() extended to allow one _Raw operand on either side."""
    if isinstance(a, Game) and isinstance(b, Game):
        return leq(a, b)
    key = (id(a), id(b))
    hit = memo.get(key)
    if hit is not None:
        return hit
    a_lefts = a.left if isinstance(a, _Raw) else left_options(a)
    b_rights = b.right if isinstance(b, _Raw) else right_options(b)
    result = True
    for al in a_lefts:
        if _raw_leq(b, al, memo):
            result = False
            break
    if result:
        for br in b_rights:
            if _raw_leq(br, a, memo):
                result = False
                break
    memo[key] = result
    return result


def _remove_dominated(options: tuple[Game, ...], keep_max: bool) -> tuple[Game, ...]:
    # canonical games are antisymmetric under leq, so mutual domination
    # between distinct interned nodes cannot occur
    kept: list[Game] = []
    for g in options:
        if keep_max:
            dominated = any(o is not g and leq(g, o) for o in options)
        else:
            dominated = any(o is not g and leq(o, g) for o in options)
        if not dominated:
            kept.append(g)
    return tuple(kept)


def make(left: Iterable[Game], right: Iterable[Game], max_options: int | None = None) -> Game:
    """Canonicalize {left | right}: the single construction entry point."""
    lefts = tuple(sorted(set(left), key=_sort_key))
    rights = tuple(sorted(set(right), key=_sort_key))
    while True:
        if max_options is not None and len(lefts) + len(rights) > max_options:
            raise LimitsExceededError(
                f"option lists grew past {max_options} during canonicalization"
            )
        lefts = _remove_dominated(lefts, keep_max=True)
        rights = _remove_dominated(rights, keep_max=False)
        raw = _Raw(lefts, rights)
        memo: dict = {}
        new_lefts: list[Game] = []
        changed = False
        for gl in lefts:
            reversed_through = None
            for glr in right_options(gl):
                if _raw_leq(glr, raw, memo):
                    reversed_through = glr
                    break
            if reversed_through is None:
                new_lefts.append(gl)
            else:
                changed = True
                new_lefts.extend(left_options(reversed_through))
        new_rights: list[Game] = []
        for gr in rights:
            reversed_through = None
            for grl in left_options(gr):
                if _raw_leq(raw, grl, memo):
                    reversed_through = grl
                    break
            if reversed_through is None:
                new_rights.append(gr)
            else:
                changed = True
                new_rights.extend(right_options(reversed_through))
        new_lefts_t = tuple(sorted(set(new_lefts), key=_sort_key))
        new_rights_t = tuple(sorted(set(new_rights), key=_sort_key))
        if not changed and new_lefts_t == lefts and new_rights_t == rights:
            break
        lefts, rights = new_lefts_t, new_rights_t

    # simplicity rule: all-number options with a gap denote a number
    if all(o.is_number for o in lefts) and all(o.is_number for o in rights):
        lo = max((o.num for o in lefts), default=None)
        hi = min((o.num for o in rights), default=None)
        if lo is None or hi is None or lo < hi:
            return number(simplest_between(lo, hi))
    return _intern_general(lefts, rights)


STAR = make([ZERO], [ZERO])


# ---------------------------------------------------------------------------
# Arithmetic


def negate(g: Game) -> Game:
    if g._neg is not None:
        return g._neg
    if g.is_number:
        result = number(-g.num)
    else:
        result = _intern_general(
            tuple(negate(o) for o in g.right),
            tuple(negate(o) for o in g.left),
        )
    g._neg = result
    result._neg = g
    return result


_ADD_MEMO: dict[tuple[int, int], Game] = {}


def add(a: Game, b: Game) -> Game:
    if a.is_number and b.is_number:
        return number(a.num + b.num)
    if a is ZERO:
        return b
    if b is ZERO:
        return a
    key = (id(a), id(b)) if id(a) <= id(b) else (id(b), id(a))
    hit = _ADD_MEMO.get(key)
    if hit is not None:
        return hit
    lefts = [add(al, b) for al in left_options(a)] + [add(a, bl) for bl in left_options(b)]
    rights = [add(ar, b) for ar in right_options(a)] + [add(a, br) for br in right_options(b)]
    result = make(lefts, rights)
    _ADD_MEMO[key] = result
    return result


def sub(a: Game, b: Game) -> Game:
    return add(a, negate(b))


def add_all(games: Iterable[Game]) -> Game:
    total = ZERO
    for g in games:
        total = add(total, g)
    return total


def store_size() -> int:
    return len(_STORE)


# ---------------------------------------------------------------------------
# Slash notation


class ParseError(ValueError):
    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} at position {pos}")
        self.pos = pos


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    text = text.replace("‖", "||").replace("∥", "||")
    tokens = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch == "|":
            j = i
            while j < len(text) and text[j] == "|":
                j += 1
            tokens.append(("bar", text[i:j], i))
            i = j
        elif ch in "{},":
            tokens.append((ch, ch, i))
            i += 1
        elif ch == "*":
            tokens.append(("star", ch, i))
            i += 1
        else:
            j = i
            while j < len(text) and (text[j].isdigit() or text[j] in "+-./"):
                j += 1
            if j == i:
                raise ParseError(f"unexpected character {ch!r}", i)
            tokens.append(("num", text[i:j], i))
            i = j
    return tokens


def parse(text: str) -> Game:
    tokens = _tokenize(text)
    game, rest = _parse_group(tokens, 0, top=True)
    if rest != len(tokens):
        raise ParseError("trailing input", tokens[rest][2])
    return game


def _parse_group(tokens, i, top=False):
    """Parse a bar-separated group until '}' (or end of input at top level)."""
    items: list[tuple[str, object]] = []  # ('game', Game) / ('bar', width) / (',', None)
    start = i
    while i < len(tokens):
        kind, text, pos = tokens[i]
        if kind == "}":
            break
        if kind == "{":
            inner, i = _parse_group(tokens, i + 1)
            if i >= len(tokens) or tokens[i][0] != "}":
                raise ParseError("unclosed '{'", pos)
            i += 1
            items.append(("game", inner))
        elif kind == "num":
            try:
                items.append(("game", number(Dyadic.parse(text))))
            except ValueError:
                raise ParseError(f"bad number {text!r}", pos) from None
            i += 1
        elif kind == "star":
            items.append(("game", STAR))
            i += 1
        elif kind == "bar":
            items.append(("bar", len(text)))
            i += 1
        elif kind == ",":
            items.append((",", None))
            i += 1
        else:
            raise ParseError(f"unexpected {text!r}", pos)
    if not top and i >= len(tokens):
        raise ParseError("unclosed '{'", tokens[start][2] if start < len(tokens) else 0)
    return _build_group(items, tokens, start), i


def _build_group(items, tokens, start) -> Game:
    if not items:
        raise ParseError("empty expression", tokens[start][2] if start < len(tokens) else 0)
    bar_widths = [w for k, w in items if k == "bar"]
    if not bar_widths:
        games = [g for k, g in items if k == "game"]
        if len(games) != 1:
            raise ParseError("expected a single value", tokens[start][2])
        return games[0]
    top_width = max(bar_widths)
    split_at = next(idx for idx, (k, w) in enumerate(items) if k == "bar" and w == top_width)
    left_items = items[:split_at]
    right_items = items[split_at + 1 :]
    return make(
        _build_side(left_items, tokens, start),
        _build_side(right_items, tokens, start),
    )


def _build_side(items, tokens, start) -> list[Game]:
    if not items:
        return []
    if any(k == "bar" for k, _ in items):
        return [_build_group(items, tokens, start)]
    games = []
    expect_game = True
    for k, v in items:
        if k == "game" and expect_game:
            games.append(v)
            expect_game = False
        elif k == "," and not expect_game:
            expect_game = True
        else:
            raise ParseError("malformed option list", tokens[start][2])
    if expect_game:
        raise ParseError("dangling comma", tokens[start][2])
    return games


def render(g: Game) -> str:
    text, _ = _render(g)
    return text


def _render(g: Game) -> tuple[str, int]:
    """Render a game; returns (text, bar level).  Options of level >= 2 are
    braced so at most double bars appear inline; in comma-separated option
    lists every non-number option is braced to keep the grammar unambiguous."""
    if g.is_number:
        return str(g.num), 0
    sides = []
    max_level = 0
    for options in (g.left, g.right):
        parts = []
        for o in options:
            text, level = _render(o)
            if level >= 2 or (level >= 1 and len(options) > 1):
                text, level = "{" + text + "}", 0
            parts.append((text, level))
        max_level = max([max_level] + [lvl for _, lvl in parts])
        sides.append(",".join(t for t, _ in parts))
    my_level = max_level + 1
    bar = "|" * my_level
    return f"{sides[0]}{bar}{sides[1]}", my_level
