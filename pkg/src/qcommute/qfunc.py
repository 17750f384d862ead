"""Polynomials and rational functions in a formal q, and power series in x over them.

The generating functions for the three matrix-pair counts live here:

* ``G_m(x) = (1 - x^m) / ((1 - x)(1 - q x^m))`` with ``[x^b] G_m = q^(b // m)``;
* ``H(x) = sum_a x^a / f(a)`` where ``f(a) = (1 - 1/q)(1 - 1/q^2)...(1 - 1/q^a)``;
* ``F_m = G_m * H``.

Taking the product of a factor over ``x -> x^i`` for ``i = 1, 2, ...`` and
multiplying the coefficient of ``x^n`` by ``|GL_n(F_q)|`` gives the count as
a polynomial in q.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Callable, Iterable, Sequence

from sympy.polys.densearith import dup_exquo
from sympy.polys.domains import ZZ
from sympy.polys.euclidtools import dup_gcd

VALIDITY_NOTE = "requires m | q-1 (an element of order m in F_q)"
SETS = ("K", "U", "N")
# truncation used by count_poly for small n, so one cached series serves many n
DEFAULT_ORDER = 12


class IntegralityError(ArithmeticError):
    """A quantity that must be a polynomial in q came out with a nontrivial denominator."""


def _trim(c: list[int]) -> tuple[int, ...]:
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


class PolyQ:
    """Integer polynomial in q; ``coeffs[i]`` is the coefficient of q^i."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[int] = ()):
        object.__setattr__(self, "coeffs", _trim([int(c) for c in coeffs]))

    def __setattr__(self, name, value):
        raise AttributeError("PolyQ is immutable")

    @classmethod
    def const(cls, c: int) -> PolyQ:
        return cls([c])

    @classmethod
    def monomial(cls, e: int, c: int = 1) -> PolyQ:
        return cls([0] * e + [c])

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = PolyQ.const(other)
        return isinstance(other, PolyQ) and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __add__(self, other: PolyQ | int) -> PolyQ:
        if isinstance(other, int):
            other = PolyQ.const(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, y in enumerate(b):
            out[i] += y
        return PolyQ(out)

    def __neg__(self) -> PolyQ:
        return PolyQ([-c for c in self.coeffs])

    __radd__ = __add__

    def __sub__(self, other: PolyQ | int) -> PolyQ:
        return self + (-other)

    def __rsub__(self, other: int) -> PolyQ:
        return (-self) + other

    def __mul__(self, other: PolyQ | int) -> PolyQ:
        if isinstance(other, int):
            return PolyQ([c * other for c in self.coeffs])
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return PolyQ()
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return PolyQ(out)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> PolyQ:
        result = PolyQ.const(1)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __divmod__(self, other: PolyQ) -> tuple[PolyQ, PolyQ]:
        """Division by a divisor with leading coefficient +-1 (exact over Z)."""
        if other.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        lead = other.coeffs[-1]
        if lead not in (1, -1):
            raise ValueError("integer division needs a divisor with unit leading coefficient")
        rem = list(self.coeffs)
        d = other.degree
        quo = [0] * max(len(rem) - d, 0)
        while len(rem) - 1 >= d and rem:
            shift = len(rem) - 1 - d
            c = rem[-1] * lead
            quo[shift] = c
            for i, y in enumerate(other.coeffs):
                rem[shift + i] -= c * y
            while rem and rem[-1] == 0:
                rem.pop()
        return PolyQ(quo), PolyQ(rem)

    def __call__(self, q):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * q + c
        return acc

    def content(self) -> int:
        g = 0
        for c in self.coeffs:
            g = gcd(g, c)
        return g

    def __str__(self) -> str:
        return format_terms(self.coeffs)

    def __repr__(self) -> str:
        return f"PolyQ({self})"


def format_terms(coeffs: Sequence[int], var: str = "q") -> str:
    """Canonical ASCII form: decreasing exponents, explicit signs, ``2*q^4 - q^2``."""
    parts: list[str] = []
    for e in range(len(coeffs) - 1, -1, -1):
        c = coeffs[e]
        if c == 0:
            continue
        mag = abs(c)
        if e == 0:
            body = str(mag)
        else:
            mono = var if e == 1 else f"{var}^{e}"
            body = mono if mag == 1 else f"{mag}*{mono}"
        if not parts:
            parts.append(body if c > 0 else f"-{body}")
        else:
            parts.append(("+ " if c > 0 else "- ") + body)
    return " ".join(parts) if parts else "0"


def _to_dup(p: PolyQ) -> list:
    return [ZZ(c) for c in reversed(p.coeffs)]


def _from_dup(d: list) -> PolyQ:
    return PolyQ([int(c) for c in reversed(d)])


class RatQ:
    """Reduced quotient of integer polynomials in q.

    Canonical form: gcd(num, den) is constant, the integer content of
    (num, den) jointly is 1, and den has a positive leading coefficient.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: PolyQ | int, den: PolyQ | int = 1):
        if isinstance(num, int):
            num = PolyQ.const(num)
        if isinstance(den, int):
            den = PolyQ.const(den)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if num.is_zero():
            num, den = PolyQ(), PolyQ.const(1)
        elif den.degree > 0:
            g = dup_gcd(_to_dup(num), _to_dup(den), ZZ)
            if len(g) > 1:
                num = _from_dup(dup_exquo(_to_dup(num), g, ZZ))
                den = _from_dup(dup_exquo(_to_dup(den), g, ZZ))
        if not num.is_zero():
            c = gcd(num.content(), den.content())
            if den.coeffs[-1] < 0:
                c = -c
            if c != 1:
                num = PolyQ([x // c for x in num.coeffs])
                den = PolyQ([x // c for x in den.coeffs])
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, name, value):
        raise AttributeError("RatQ is immutable")

    @classmethod
    def from_laurent(cls, coeffs: dict[int, int]) -> RatQ:
        """Sum of c * q^e with possibly negative e."""
        if not coeffs:
            return cls(0)
        low = min(coeffs)
        shift = max(0, -low)
        top = max(coeffs) + shift
        num = [0] * (top + 1)
        for e, c in coeffs.items():
            num[e + shift] += c
        return cls(PolyQ(num), PolyQ.monomial(shift))

    @classmethod
    def q_power(cls, e: int) -> RatQ:
        return cls.from_laurent({e: 1})

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_poly(self) -> bool:
        return self.den == PolyQ.const(1)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, PolyQ)):
            other = RatQ(other)
        return isinstance(other, RatQ) and self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    def __add__(self, other: RatQ) -> RatQ:
        if isinstance(other, (int, PolyQ)):
            other = RatQ(other)
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        if self.den == other.den:
            return RatQ(self.num + other.num, self.den)
        return RatQ(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self) -> RatQ:
        return RatQ(-self.num, self.den)

    def __sub__(self, other: RatQ) -> RatQ:
        if isinstance(other, (int, PolyQ)):
            other = RatQ(other)
        return self + (-other)

    def __rsub__(self, other: PolyQ | int) -> RatQ:
        return (-self) + other

    def __mul__(self, other: RatQ | PolyQ | int) -> RatQ:
        if isinstance(other, (int, PolyQ)):
            other = RatQ(other)
        if self.is_zero() or other.is_zero():
            return RatQ(0)
        return RatQ(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def inverse(self) -> RatQ:
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        return RatQ(self.den, self.num)

    def __truediv__(self, other: RatQ | PolyQ | int) -> RatQ:
        if isinstance(other, (int, PolyQ)):
            other = RatQ(other)
        return self * other.inverse()

    def __rtruediv__(self, other: PolyQ | int) -> RatQ:
        return RatQ(other) * self.inverse()

    def __call__(self, q):
        return Fraction(self.num(q), self.den(q))

    def __str__(self) -> str:
        num = str(self.num)
        if self.is_poly():
            return num
        if len([c for c in self.num.coeffs if c]) > 1:
            num = f"({num})"
        den = str(self.den)
        if len([c for c in self.den.coeffs if c]) > 1:
            den = f"({den})"
        return f"{num} / {den}"

    def __repr__(self) -> str:
        return f"RatQ({self})"


ONE = RatQ(1)
ZERO = RatQ(0)


class TruncationError(IndexError):
    """Asked for a series coefficient beyond the truncation order."""


class SeriesX:
    """Power series in x with RatQ coefficients, exact modulo x^(order+1)."""

    __slots__ = ("order", "coeffs")

    def __init__(self, order: int, coeffs: Iterable[RatQ | PolyQ | int] = ()):
        cs = [c if isinstance(c, RatQ) else RatQ(c) for c in coeffs]
        if len(cs) > order + 1:
            cs = cs[: order + 1]
        cs.extend([ZERO] * (order + 1 - len(cs)))
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):
        raise AttributeError("SeriesX is immutable")

    @classmethod
    def one(cls, order: int) -> SeriesX:
        return cls(order, [ONE])

    def __getitem__(self, n: int) -> RatQ:
        if n < 0:
            raise IndexError(n)
        if n > self.order:
            raise TruncationError(f"coefficient x^{n} requested from a series truncated at x^{self.order}")
        return self.coeffs[n]

    def coefficient(self, n: int) -> RatQ:
        return self[n]

    def __eq__(self, other) -> bool:
        return isinstance(other, SeriesX) and self.order == other.order and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((self.order, self.coeffs))

    def _common(self, other: SeriesX) -> int:
        if other.order != self.order:
            raise TruncationError(f"truncation orders differ: {self.order} vs {other.order}")
        return self.order

    def __add__(self, other: SeriesX) -> SeriesX:
        N = self._common(other)
        return SeriesX(N, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other: SeriesX) -> SeriesX:
        N = self._common(other)
        return SeriesX(N, [a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __mul__(self, other: SeriesX) -> SeriesX:
        N = self._common(other)
        a, b = self.coeffs, other.coeffs
        nz_b = [(j, y) for j, y in enumerate(b) if not y.is_zero()]
        out = [ZERO] * (N + 1)
        for i, x in enumerate(a):
            if x.is_zero():
                continue
            for j, y in nz_b:
                if i + j > N:
                    break
                out[i + j] = out[i + j] + x * y
        return SeriesX(N, out)

    def substitute_power(self, i: int, order: int | None = None) -> SeriesX:
        """f(x) -> f(x^i), truncated at ``order`` (default: own order)."""
        N = self.order if order is None else order
        out = [ZERO] * (N + 1)
        for b in range(N // i + 1):
            if b > self.order:
                raise TruncationError(f"need x^{b} of a series truncated at x^{self.order}")
            out[b * i] = self.coeffs[b]
        return SeriesX(N, out)

    def evaluate(self, q) -> list:
        return [c(q) for c in self.coeffs]

    def __repr__(self) -> str:
        return "SeriesX(" + ", ".join(str(c) for c in self.coeffs) + ")"


# -- the factors ---------------------------------------------------------------

def gl_order_poly(n: int) -> PolyQ:
    """|GL_n(F_q)| = prod_{j<n} (q^n - q^j)."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    out = PolyQ.const(1)
    for j in range(n):
        out = out * (PolyQ.monomial(n) - PolyQ.monomial(j))
    return out


def factor_G(m: int, N: int) -> SeriesX:
    """G_m(x) = (1 - x^m) / ((1 - x)(1 - q x^m)); coefficient of x^b is q^(b // m)."""
    if m < 1:
        raise ValueError("m must be positive")
    return SeriesX(N, [PolyQ.monomial(b // m) for b in range(N + 1)])


def f_euler(a: int) -> RatQ:
    """f(a) = (1 - q^-1)(1 - q^-2)...(1 - q^-a)."""
    out = ONE
    for j in range(1, a + 1):
        out = out * RatQ.from_laurent({0: 1, -j: -1})
    return out


def factor_H(N: int) -> SeriesX:
    """H(x) = sum_a x^a / f(a), each coefficient q^(a(a+1)/2) / prod_{j<=a}(q^j - 1)."""
    return SeriesX(N, [f_euler(a).inverse() for a in range(N + 1)])


def factor_F(m: int, N: int) -> SeriesX:
    return factor_G(m, N) * factor_H(N)


def series_product(factor_at: Callable[[int], SeriesX], N: int) -> SeriesX:
    """prod_{i=1}^{N} factor_at(i) modulo x^(N+1).

    ``factor_at(i)`` is the i-th factor itself (already a series in x^i); it
    must have constant term 1 and agree with 1 below x^i for the truncation
    to be exact, which holds for every f(x^i) with f(0) = 1.
    """
    acc = SeriesX.one(N)
    for i in range(1, N + 1):
        fac = factor_at(i)
        if fac.order != N:
            raise TruncationError(f"factor {i} has order {fac.order}, expected {N}")
        if fac[0] != ONE:
            raise ValueError(f"factor {i} has constant term {fac[0]}, expected 1")
        acc = acc * fac
    return acc


def _powered(base: Callable[[int], SeriesX], N: int) -> Callable[[int], SeriesX]:
    return lambda i: base(N // i).substitute_power(i, N)


@lru_cache(maxsize=None)
def series_for(which: str, m: int, N: int) -> SeriesX:
    """Generating series sum_n |X_n| / |GL_n| x^n for X in {K, U, N}, truncated at x^N."""
    if which == "K":
        return series_product(_powered(lambda M: factor_F(m, M), N), N)
    if which == "U":
        return series_product(_powered(lambda M: factor_G(m, M), N), N)
    if which == "N":
        return series_product(_powered(factor_H, N), N)
    raise ValueError(f"unknown set {which!r}; expected one of {SETS}")


def count_poly(which: str, m: int, n: int) -> PolyQ:
    """|X_{zeta,n}(F_q)| as a polynomial in q, for zeta of order m.

    Raises :class:`IntegralityError` if the coefficient times |GL_n| does not
    reduce to a polynomial.
    """
    if which == "N":
        m = 1
    val = series_for(which, m, max(n, DEFAULT_ORDER))[n] * gl_order_poly(n)
    if not val.is_poly():
        raise IntegralityError(f"|{which}_n| for m={m}, n={n} came out as {val}")
    return val.num


def count_eval(which: str, m: int, n: int, q_value: int) -> int:
    if q_value < 2:
        raise ValueError("q must be at least 2")
    return count_poly(which, m, n)(q_value)
