"""Exact dyadic rationals: integers divided by powers of two.

These are the only numbers that arise as game values.  Values are kept in
lowest terms (odd numerator, or exponent 0).  Python integers are unbounded,
so arithmetic is exact at any size.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Dyadic:
    num: int
    exp: int = 0

    def __post_init__(self) -> None:
        if self.exp < 0:
            raise ValueError("exponent must be nonnegative")
        num, exp = self.num, self.exp
        while exp > 0 and num % 2 == 0:
            num //= 2
            exp -= 1
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "exp", exp)

    # -- arithmetic --
    def __add__(self, other: "Dyadic") -> "Dyadic":
        e = max(self.exp, other.exp)
        return Dyadic(
            (self.num << (e - self.exp)) + (other.num << (e - other.exp)), e
        )

    def __sub__(self, other: "Dyadic") -> "Dyadic":
        return self + (-other)

    def __neg__(self) -> "Dyadic":
        return Dyadic(-self.num, self.exp)

    def half(self) -> "Dyadic":
        return Dyadic(self.num, self.exp + 1)

    # -- order --
    def _cmp(self, other: "Dyadic") -> int:
        lhs = self.num << other.exp
        rhs = other.num << self.exp
        return (lhs > rhs) - (lhs < rhs)

    def __lt__(self, other: "Dyadic") -> bool:
        return self._cmp(other) < 0

    def __le__(self, other: "Dyadic") -> bool:
        return self._cmp(other) <= 0

    def __gt__(self, other: "Dyadic") -> bool:
        return self._cmp(other) > 0

    def __ge__(self, other: "Dyadic") -> bool:
        return self._cmp(other) >= 0

    @property
    def is_integer(self) -> bool:
        return self.exp == 0

    @property
    def sign(self) -> int:
        return (self.num > 0) - (self.num < 0)

    def floor(self) -> int:
        return self.num >> self.exp if self.exp else self.num

    def __str__(self) -> str:
        if self.exp == 0:
            return str(self.num)
        return f"{self.num}/{1 << self.exp}"

    @classmethod
    def parse(cls, text: str) -> "Dyadic":
        text = text.strip()
        if "/" in text:
            num_s, den_s = text.split("/", 1)
            num, den = int(num_s), int(den_s)
            if den <= 0 or den & (den - 1):
                raise ValueError(f"denominator of {text!r} is not a power of two")
            return cls(num, den.bit_length() - 1)
        if "." in text:
            whole_s, frac_s = text.split(".", 1)
            sign = -1 if whole_s.strip().startswith("-") else 1
            whole = int(whole_s) if whole_s not in ("", "-", "+") else 0
            exp = len(frac_s)
            scaled = abs(whole) * 10**exp + int(frac_s or "0")
            # decimal fractions are dyadic only when 5^exp divides the value
            p5 = 5**exp
            if scaled % p5:
                raise ValueError(f"{text!r} is not a dyadic rational")
            return cls(sign * (scaled // p5), exp)
        return cls(int(text))


ZERO = Dyadic(0)


def simplest_between(lo: Dyadic | None, hi: Dyadic | None) -> Dyadic:
    """The simplest number strictly between lo and hi (None = unbounded)."""
    if lo is not None and hi is not None and not lo < hi:
        raise ValueError(f"empty interval ({lo}, {hi})")
    if lo is None and hi is None:
        return ZERO
    if hi is None:
        return ZERO if lo < ZERO else Dyadic(lo.floor() + 1)
    if lo is None:
        return ZERO if hi > ZERO else Dyadic(-((-hi).floor() + 1))
    if lo < ZERO < hi:
        return ZERO
    if ZERO <= lo:
        n = Dyadic(lo.floor() + 1)
        if n < hi:
            return n
    else:
        n = Dyadic(-((-hi).floor() + 1))
        if lo < n:
            return n
    # no integer inside: scan denominators; at the first exponent with a
    # strictly interior candidate, that candidate is odd and unique
    exp = 1
    while True:
        floor_lo = (lo.num << exp) >> lo.exp  # floor(lo * 2^exp)
        num = floor_lo + 1
        while (num << hi.exp) < (hi.num << exp):  # num / 2^exp < hi
            cand = Dyadic(num, exp)
            if num % 2 == 1 and lo < cand:
                return cand
            num += 1
        exp += 1
