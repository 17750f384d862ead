"""Closed-form counts at a concrete q: partitions, subspace pairs, and |S|, |U|, |N|, |K|."""

from __future__ import annotations

from dataclasses import asdict, dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterator


@dataclass(frozen=True, order=True)
class Partition:
    """A partition of n by multiplicities: ``mult[i-1]`` parts equal to i."""

    mult: tuple[int, ...]

    def __post_init__(self):
        m = list(self.mult)
        if any(a < 0 for a in m):
            raise ValueError("multiplicities must be nonnegative")
        while m and m[-1] == 0:
            m.pop()
        object.__setattr__(self, "mult", tuple(m))

    @property
    def n(self) -> int:
        return sum(i * a for i, a in enumerate(self.mult, start=1))

    def a(self, i: int) -> int:
        return self.mult[i - 1] if 1 <= i <= len(self.mult) else 0

    def parts(self) -> list[int]:
        """Parts in decreasing order."""
        return [i for i in range(len(self.mult), 0, -1) for _ in range(self.mult[i - 1])]

    def __str__(self) -> str:
        return "+".join(map(str, self.parts())) or "0"


def multiplicity_vectors(n: int) -> Iterator[tuple[int, ...]]:
    """All (a_1, ..., a_n) with sum i*a_i = n, in increasing lexicographic order."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n == 0:
        yield ()
        return

    def rec(i: int, rem: int) -> Iterator[tuple[int, ...]]:
        if i == n:
            if rem % n == 0:
                yield (rem // n,)
            return
        for a in range(rem // i + 1):
            for rest in rec(i + 1, rem - i * a):
                yield (a,) + rest

    yield from rec(1, n)


def partitions(n: int) -> Iterator[Partition]:
    for v in multiplicity_vectors(n):
        yield Partition(v)


@lru_cache(maxsize=None)
def gl_order(n: int, q: int) -> int:
    out = 1
    for j in range(n):
        out *= q**n - q**j
    return out


def h_subspace_pairs(s: int, t: int, q: int) -> int:
    """Ordered pairs (K, I) of complementary subspaces of F_q^(s+t), dim K = s."""
    num = gl_order(s + t, q)
    den = gl_order(s, q) * gl_order(t, q)
    quo, rem = divmod(num, den)
    assert rem == 0, f"h({s},{t}) not integral at q={q}"
    return quo


@lru_cache(maxsize=None)
def count_S(n: int, m: int, q: int) -> int:
    """Similarity classes of n x n matrices B over F_q with B ~ zeta*B, ord(zeta) = m.

    Sum over multiplicity vectors (b_i) of q^(sum_i floor(b_i / m)).
    """
    if m < 1:
        raise ValueError("m must be positive")
    return sum(q ** sum(b // m for b in v) for v in multiplicity_vectors(n))


@lru_cache(maxsize=None)
def count_U(n: int, m: int, q: int) -> int:
    """Pairs with A nonsingular: |GL_n| * |S|."""
    return gl_order(n, q) * count_S(n, m, q)


def inv_f(a: int, q: int) -> Fraction:
    """1 / ((1 - q^-1)(1 - q^-2)...(1 - q^-a))."""
    out = Fraction(1)
    for j in range(1, a + 1):
        out /= 1 - Fraction(1, q**j)
    return out


@lru_cache(maxsize=None)
def count_N(n: int, q: int) -> int:
    """Pairs with A nilpotent; independent of zeta."""
    total = Fraction(0)
    for v in multiplicity_vectors(n):
        term = Fraction(1)
        for a in v:
            if a:
                term *= inv_f(a, q)
        total += term
    val = gl_order(n, q) * total
    if val.denominator != 1:
        raise ArithmeticError(f"|N_{n}| at q={q} is not an integer: {val}")
    return val.numerator


@lru_cache(maxsize=None)
def count_K(n: int, m: int, q: int) -> int:
    """All pairs, by splitting along the Fitting decomposition of A."""
    return sum(
        h_subspace_pairs(s, n - s, q) * count_N(s, q) * count_U(n - s, m, q)
        for s in range(n + 1)
    )


def count(which: str, n: int, m: int, q: int) -> int:
    if which == "K":
        return count_K(n, m, q)
    if which == "U":
        return count_U(n, m, q)
    if which == "N":
        return count_N(n, q)
    if which == "S":
        return count_S(n, m, q)
    raise ValueError(f"unknown set {which!r}")


@dataclass(frozen=True)
class CountReport:
    set: str
    n: int
    q: int
    m: int | None
    method: str
    value: int
    zeta: str | None = None

    def __post_init__(self):
        if self.value < 0:
            raise ValueError("counts are nonnegative")

    def as_dict(self) -> dict:
        return asdict(self)
