"""Finite fields GF(p^k), their elements, and univariate polynomials over them.

Elements are stored as integer codes ``c_0 + c_1*p + ... + c_{k-1}*p^(k-1)``
where ``c_0 + c_1*t + ...`` is the residue class modulo the field modulus.
The code form is what the linear algebra and enumeration layers use; the
:class:`FieldElement` wrapper is the user-facing value type.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from functools import cached_property
from itertools import product
from typing import Iterable, Iterator, Sequence

import numpy as np

DEFAULT_FIELD_BOUND = 2**20
# q*q lookup tables are materialised only below this size
TABLE_LIMIT = 1024

# Degree of the zero polynomial. Behaves as an absorbing minimum under + and <.
DEG_ZERO = -math.inf


class FieldMismatchError(ValueError):
    """Operands live in different fields (or matrices/polynomials over them)."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    i = 3
    while i * i <= n:
        if n % i == 0:
            return False
        i += 2
    return True


def prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def euler_phi(n: int) -> int:
    result = n
    for r in prime_factors(n):
        result -= result // r
    return result


# -- dense polynomials over GF(p), coefficient lists low -> high -------------

def _trim(c: list[int]) -> list[int]:
    while c and c[-1] == 0:
        c.pop()
    return c


def _prime_poly_mod(f: Sequence[int], g: Sequence[int], p: int) -> list[int]:
    r = list(f)
    _trim(r)
    dg = len(g) - 1
    inv_lead = pow(g[-1], -1, p)
    while len(r) - 1 >= dg:
        c = r[-1] * inv_lead % p
        shift = len(r) - 1 - dg
        for i, gi in enumerate(g):
            r[shift + i] = (r[shift + i] - c * gi) % p
        _trim(r)
    return r


def _is_irreducible_mod_p(f: Sequence[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree <= deg(f)/2."""
    d = len(f) - 1
    if d < 1:
        return False
    if d == 1:
        return True
    for e in range(1, d // 2 + 1):
        for low in product(range(p), repeat=e):
            if not _prime_poly_mod(f, list(low) + [1], p):
                return False
    return True


def _smallest_irreducible(p: int, k: int) -> tuple[int, ...]:
    if k == 1:
        return (0, 1)
    # itertools.product varies the last slot fastest; reverse so c_0 is most significant
    for rev in product(range(p), repeat=k):
        low = tuple(reversed(rev))
        f = low + (1,)
        if _is_irreducible_mod_p(f, p):
            return f
    raise AssertionError(f"no irreducible polynomial of degree {k} over GF({p})")


@dataclass(frozen=True)
class FieldSpec:
    """The field GF(p^k) = GF(p)[t]/(modulus)."""

    p: int
    k: int
    modulus: tuple[int, ...]

    @property
    def q(self) -> int:
        return self.p**self.k

    def __repr__(self) -> str:
        if self.k == 1:
            return f"GF({self.p})"
        return f"GF({self.p}^{self.k}; {_format_poly_mod_p(self.modulus)})"

    # -- code <-> coefficient vector ----------------------------------------

    def coeffs(self, code: int) -> tuple[int, ...]:
        out = []
        for _ in range(self.k):
            code, r = divmod(code, self.p)
            out.append(r)
        return tuple(out)

    def code(self, coeffs: Sequence[int]) -> int:
        if len(coeffs) > self.k:
            raise ValueError(f"expected at most {self.k} coefficients, got {len(coeffs)}")
        c = 0
        for x in reversed(coeffs):
            c = c * self.p + (x % self.p)
        return c

    def element(self, value: int | Sequence[int]) -> FieldElement:
        """Element from a coefficient vector, or from an integer residue of GF(p)."""
        if isinstance(value, int):
            return FieldElement(self, value % self.p)
        return FieldElement(self, self.code(value))

    def elements(self) -> list[FieldElement]:
        return [FieldElement(self, c) for c in range(self.q)]

    def units(self) -> list[FieldElement]:
        return [FieldElement(self, c) for c in range(1, self.q)]

    @property
    def zero(self) -> FieldElement:
        return FieldElement(self, 0)

    @property
    def one(self) -> FieldElement:
        return FieldElement(self, 1)

    def parse(self, text: str) -> FieldElement:
        """Parse a literal such as ``"2"``, ``"t"``, ``"1+2*t"`` or ``"t^2+1"``."""
        s = text.replace(" ", "")
        if not s:
            raise ValueError("empty field literal")
        if s[0] not in "+-":
            s = "+" + s
        terms = re.findall(r"[+-][^+-]+", s)
        if "".join(terms) != s:
            raise ValueError(f"cannot parse field literal {text!r}")
        acc = [0] * max(self.k, 1)
        for term in terms:
            m = re.fullmatch(r"([+-])(?:(\d+)\*?)?(t(?:\^(\d+))?)?", term)
            if m is None or (m.group(2) is None and m.group(3) is None):
                raise ValueError(f"cannot parse term {term!r} in {text!r}")
            sign = -1 if m.group(1) == "-" else 1
            coef = int(m.group(2)) if m.group(2) is not None else 1
            exp = 0
            if m.group(3):
                exp = int(m.group(4)) if m.group(4) is not None else 1
            if exp >= len(acc):
                acc.extend([0] * (exp + 1 - len(acc)))
            acc[exp] += sign * coef
        red = _prime_poly_mod([x % self.p for x in acc], self.modulus, self.p)
        return FieldElement(self, self.code(red))

    # -- arithmetic on codes --------------------------------------------------

    @cached_property
    def _exp_log(self) -> tuple[list[int], list[int]]:
        """Discrete exp/log tables for a primitive element (extension fields only)."""
        q, p, mod = self.q, self.p, self.modulus
        order = q - 1
        factors = prime_factors(order)

        def vec_mul(a: list[int], b: list[int]) -> list[int]:
            prod = [0] * (len(a) + len(b) - 1) if a and b else []
            for i, x in enumerate(a):
                if x:
                    for j, y in enumerate(b):
                        prod[i + j] = (prod[i + j] + x * y) % p
            return _prime_poly_mod(prod, mod, p)

        def vec_pow(a: list[int], e: int) -> list[int]:
            result, base = [1], a
            while e:
                if e & 1:
                    result = vec_mul(result, base)
                base = vec_mul(base, base)
                e >>= 1
            return result

        for cand in range(2, q):
            g = list(self.coeffs(cand))
            _trim(g)
            if all(vec_pow(g, order // r) != [1] for r in factors):
                break
        else:  # pragma: no cover
            raise AssertionError("no primitive element found")
        exp = [0] * order
        log = [0] * q
        cur = [1]
        for i in range(order):
            c = self.code(cur)
            exp[i] = c
            log[c] = i
            cur = vec_mul(cur, g)
        return exp, log

    @cached_property
    def _add_table(self) -> list[list[int]] | None:
        if self.k == 1 or self.q > 256:
            return None
        return [[self._add_digits(a, b) for b in range(self.q)] for a in range(self.q)]

    def _add_digits(self, a: int, b: int) -> int:
        p = self.p
        out, scale = 0, 1
        while a or b:
            a, x = divmod(a, p)
            b, y = divmod(b, p)
            out += ((x + y) % p) * scale
            scale *= p
        return out

    def add(self, a: int, b: int) -> int:
        if self.k == 1:
            return (a + b) % self.p
        if self.p == 2:
            return a ^ b
        t = self._add_table
        if t is not None:
            return t[a][b]
        return self._add_digits(a, b)

    def neg(self, a: int) -> int:
        if self.k == 1:
            return -a % self.p
        if self.p == 2:
            return a
        return self.code([-c for c in self.coeffs(a)])

    def sub(self, a: int, b: int) -> int:
        if self.k == 1:
            return (a - b) % self.p
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.k == 1:
            return a * b % self.p
        if a == 0 or b == 0:
            return 0
        exp, log = self._exp_log
        return exp[(log[a] + log[b]) % (self.q - 1)]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero in a finite field")
        if self.k == 1:
            return pow(a, -1, self.p)
        exp, log = self._exp_log
        return exp[-log[a] % (self.q - 1)]

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            a, e = self.inv(a), -e
        result = 1
        while e:
            if e & 1:
                result = self.mul(result, a)
            a = self.mul(a, a)
            e >>= 1
        return result

    def tables(self) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        """(add, mul, neg, inv) lookup arrays on codes, for compiled kernels."""
        if self.q > TABLE_LIMIT:
            raise ValueError(f"lookup tables limited to q <= {TABLE_LIMIT}")
        return self._np_tables

    @cached_property
    def _np_tables(self) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        q = self.q
        add = np.array([[self.add(a, b) for b in range(q)] for a in range(q)], dtype=np.int64)
        mul = np.array([[self.mul(a, b) for b in range(q)] for a in range(q)], dtype=np.int64)
        neg = np.array([self.neg(a) for a in range(q)], dtype=np.int64)
        inv = np.array([0] + [self.inv(a) for a in range(1, q)], dtype=np.int64)
        for arr in (add, mul, neg, inv):
            arr.setflags(write=False)
        return add, mul, neg, inv


def field_make(p: int, k: int = 1, bound: int = DEFAULT_FIELD_BOUND) -> FieldSpec:
    """Build GF(p^k) with the lexicographically smallest monic irreducible modulus.

    Candidates ``t^k + c_{k-1} t^{k-1} + ... + c_0`` are ordered by
    ``(c_0, c_1, ..., c_{k-1})``. For ``k == 1`` the modulus is ``t``.
    """
    if not is_prime(p):
        raise ValueError(f"characteristic {p} is not prime")
    if k < 1:
        raise ValueError(f"extension degree must be >= 1, got {k}")
    if p**k > bound:
        raise ValueError(f"field size {p}^{k} exceeds bound {bound}")
    return FieldSpec(p, k, _smallest_irreducible(p, k))


def field_for_q(q: int, bound: int = DEFAULT_FIELD_BOUND) -> FieldSpec:
    """GF(q) for a prime power q."""
    if q < 2:
        raise ValueError(f"{q} is not a prime power")
    factors = prime_factors(q)
    if len(factors) != 1:
        raise ValueError(f"{q} is not a prime power")
    p = factors[0]
    k = round(math.log(q, p))
    while p**k < q:
        k += 1
    while p**k > q:
        k -= 1
    return field_make(p, k, bound)


def _format_poly_mod_p(coeffs: Sequence[int], var: str = "t") -> str:
    terms = []
    for e in range(len(coeffs) - 1, -1, -1):
        c = coeffs[e]
        if c == 0:
            continue
        mono = "" if e == 0 else (var if e == 1 else f"{var}^{e}")
        if not mono:
            terms.append(str(c))
        elif c == 1:
            terms.append(mono)
        else:
            terms.append(f"{c}*{mono}")
    return " + ".join(terms) if terms else "0"


@dataclass(frozen=True)
class FieldElement:
    field: FieldSpec
    code: int

    @property
    def coeffs(self) -> tuple[int, ...]:
        return self.field.coeffs(self.code)

    def _check(self, other: FieldElement) -> None:
        if not isinstance(other, FieldElement):
            raise TypeError(f"expected FieldElement, got {type(other).__name__}")
        if other.field != self.field:
            raise FieldMismatchError(f"{self.field!r} vs {other.field!r}")

    def __add__(self, other: FieldElement) -> FieldElement:
        self._check(other)
        return FieldElement(self.field, self.field.add(self.code, other.code))

    def __sub__(self, other: FieldElement) -> FieldElement:
        self._check(other)
        return FieldElement(self.field, self.field.sub(self.code, other.code))

    def __mul__(self, other: FieldElement) -> FieldElement:
        self._check(other)
        return FieldElement(self.field, self.field.mul(self.code, other.code))

    def __truediv__(self, other: FieldElement) -> FieldElement:
        return self * other.inverse()

    def __neg__(self) -> FieldElement:
        return FieldElement(self.field, self.field.neg(self.code))

    def __pow__(self, e: int) -> FieldElement:
        return FieldElement(self.field, self.field.pow(self.code, e))

    def inverse(self) -> FieldElement:
        return FieldElement(self.field, self.field.inv(self.code))

    def is_zero(self) -> bool:
        return self.code == 0

    def __bool__(self) -> bool:
        return self.code != 0

    def __str__(self) -> str:
        return _format_poly_mod_p(self.coeffs)

    def __repr__(self) -> str:
        return f"{self.field!r}({self})"


def field_arith(op: str, a: FieldElement, b: FieldElement | None = None) -> FieldElement:
    """Dispatch ``add | mul | neg | inv`` by name."""
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "neg":
        return -a
    if op == "inv":
        return a.inverse()
    raise ValueError(f"unknown field operation {op!r}")


def mult_order(z: FieldElement) -> int:
    """Multiplicative order of a nonzero element."""
    if z.is_zero():
        raise ZeroDivisionError("zero has no multiplicative order")
    F = z.field
    m = F.q - 1
    for r in prime_factors(F.q - 1):
        while m % r == 0 and F.pow(z.code, m // r) == 1:
            m //= r
    return m


def roots_of_order(F: FieldSpec, m: int) -> list[FieldElement]:
    """All units of exact multiplicative order m, in code order."""
    if m < 1 or (F.q - 1) % m:
        return []
    return [z for z in F.units() if mult_order(z) == m]


# -- polynomials over GF(q) ---------------------------------------------------

class PolyFF:
    """Univariate polynomial over a finite field; coefficients low -> high as codes."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: FieldSpec, coeffs: Iterable[int | FieldElement] = ()):
        cs = [c.code if isinstance(c, FieldElement) else c for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):
        raise AttributeError("PolyFF is immutable")

    @classmethod
    def monomial(cls, field: FieldSpec, degree: int, coef: int = 1) -> PolyFF:
        return cls(field, [0] * degree + [coef])

    @classmethod
    def x(cls, field: FieldSpec) -> PolyFF:
        return cls(field, [0, 1])

    @property
    def degree(self) -> int | float:
        return len(self.coeffs) - 1 if self.coeffs else DEG_ZERO

    @property
    def lead(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_monic(self) -> bool:
        return self.lead == 1

    def __eq__(self, other) -> bool:
        return isinstance(other, PolyFF) and self.field == other.field and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((self.field, self.coeffs))

    def _check(self, other: PolyFF) -> None:
        if other.field != self.field:
            raise FieldMismatchError(f"{self.field!r} vs {other.field!r}")

    def __add__(self, other: PolyFF) -> PolyFF:
        self._check(other)
        return PolyFF(self.field, poly_add(self.field, self.coeffs, other.coeffs))

    def __neg__(self) -> PolyFF:
        return PolyFF(self.field, [self.field.neg(c) for c in self.coeffs])

    def __sub__(self, other: PolyFF) -> PolyFF:
        return self + (-other)

    def __mul__(self, other: PolyFF) -> PolyFF:
        self._check(other)
        return PolyFF(self.field, poly_mul(self.field, self.coeffs, other.coeffs))

    def __divmod__(self, other: PolyFF) -> tuple[PolyFF, PolyFF]:
        self._check(other)
        quo, rem = poly_divmod(self.field, self.coeffs, other.coeffs)
        return PolyFF(self.field, quo), PolyFF(self.field, rem)

    def __floordiv__(self, other: PolyFF) -> PolyFF:
        return divmod(self, other)[0]

    def __mod__(self, other: PolyFF) -> PolyFF:
        return divmod(self, other)[1]

    def monic(self) -> PolyFF:
        if not self.coeffs:
            return self
        inv = self.field.inv(self.lead)
        return PolyFF(self.field, [self.field.mul(inv, c) for c in self.coeffs])

    def scale_variable(self, c: int) -> PolyFF:
        """g(t) -> g(c*t)."""
        F = self.field
        out, power = [], 1
        for a in self.coeffs:
            out.append(F.mul(a, power))
            power = F.mul(power, c)
        return PolyFF(F, out)

    def __call__(self, x: int) -> int:
        F = self.field
        acc = 0
        for a in reversed(self.coeffs):
            acc = F.add(F.mul(acc, x), a)
        return acc

    def __str__(self) -> str:
        F = self.field
        if not self.coeffs:
            return "0"
        if F.k == 1:
            return _format_poly_mod_p(self.coeffs)
        terms = []
        for e in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[e]
            if c == 0:
                continue
            mono = "" if e == 0 else ("x" if e == 1 else f"x^{e}")
            cs = f"({_format_poly_mod_p(F.coeffs(c))})"
            terms.append(mono if (c == 1 and mono) else (cs if not mono else f"{cs}*{mono}"))
        return " + ".join(terms)

    def __repr__(self) -> str:
        return f"PolyFF({self.field!r}, {self})"


# tuple-level kernels shared with the linear algebra module

def poly_add(F: FieldSpec, a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, y in enumerate(b):
        out[i] = F.add(out[i], y)
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


def poly_mul(F: FieldSpec, a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] = F.add(out[i + j], F.mul(x, y))
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


def poly_divmod(F: FieldSpec, a: Sequence[int], b: Sequence[int]) -> tuple[tuple[int, ...], tuple[int, ...]]:
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    rem = list(a)
    db = len(b) - 1
    if len(rem) - 1 < db:
        return (), tuple(rem)
    inv_lead = F.inv(b[-1])
    quo = [0] * (len(rem) - db)
    while len(rem) - 1 >= db:
        shift = len(rem) - 1 - db
        c = F.mul(rem[-1], inv_lead)
        quo[shift] = c
        for i, y in enumerate(b):
            if y:
                rem[shift + i] = F.sub(rem[shift + i], F.mul(c, y))
        while rem and rem[-1] == 0:
            rem.pop()
    while quo and quo[-1] == 0:
        quo.pop()
    return tuple(quo), tuple(rem)


def poly_monic(F: FieldSpec, a: Sequence[int]) -> tuple[int, ...]:
    if not a or a[-1] == 1:
        return tuple(a)
    inv = F.inv(a[-1])
    return tuple(F.mul(inv, c) for c in a)


def poly_gcd(f: PolyFF, g: PolyFF) -> PolyFF:
    """Monic gcd; gcd(0, 0) = 0."""
    f._check(g)
    F = f.field
    a, b = f.coeffs, g.coeffs
    while b:
        a, b = b, poly_divmod(F, a, b)[1]
    return PolyFF(F, poly_monic(F, a))


def poly_arith(op: str, f: PolyFF, g: PolyFF):
    """Dispatch ``add | mul | divmod | gcd`` by name."""
    if op == "add":
        return f + g
    if op == "mul":
        return f * g
    if op == "divmod":
        return divmod(f, g)
    if op == "gcd":
        return poly_gcd(f, g)
    raise ValueError(f"unknown polynomial operation {op!r}")


def monic_polys(F: FieldSpec, degree: int) -> Iterator[PolyFF]:
    """Every monic polynomial of the given degree, lowest coefficient varying slowest."""
    for rev in product(range(F.q), repeat=degree):
        yield PolyFF(F, tuple(reversed(rev)) + (1,))


def pm_member(g: PolyFF, m: int) -> bool:
    """Is the monic g of the form t^b * G(t^m)?

    With ``g = t^d + c_1 t^(d-1) + ... + c_d`` this holds exactly when every
    nonzero ``c_j`` has ``m | j``.
    """
    if not g.is_monic():
        raise ValueError(f"pm_member needs a monic polynomial, got {g}")
    if m < 1:
        raise ValueError(f"m must be positive, got {m}")
    d = len(g.coeffs) - 1
    return all(c == 0 or (d - e) % m == 0 for e, c in enumerate(g.coeffs))
