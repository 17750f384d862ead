"""Exact matrix algebra over GF(q).

Matrices hold integer element codes (see :mod:`qcommute.ff`). Everything here
is row reduction over the field, plus a Smith normal form of ``tI - A`` over
GF(q)[t] for invariant factors.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence

from .ff import (
    FieldElement,
    FieldMismatchError,
    FieldSpec,
    PolyFF,
    mult_order,
    pm_member,
    poly_add,
    poly_divmod,
    poly_monic,
    poly_mul,
)

Vector = tuple[int, ...]


class MatrixFF:
    """Immutable square matrix over a finite field."""

    __slots__ = ("field", "rows")

    def __init__(self, field: FieldSpec, rows: Sequence[Sequence[int | FieldElement]]):
        conv = tuple(
            tuple(x.code if isinstance(x, FieldElement) else x for x in row) for row in rows
        )
        n = len(conv)
        if any(len(r) != n for r in conv):
            raise ValueError("matrix must be square")
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "rows", conv)

    def __setattr__(self, name, value):
        raise AttributeError("MatrixFF is immutable")

    @property
    def n(self) -> int:
        return len(self.rows)

    @classmethod
    def identity(cls, field: FieldSpec, n: int) -> MatrixFF:
        return cls(field, [[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def zero(cls, field: FieldSpec, n: int) -> MatrixFF:
        return cls(field, [[0] * n for _ in range(n)])

    @classmethod
    def diag(cls, field: FieldSpec, entries: Sequence[int]) -> MatrixFF:
        n = len(entries)
        return cls(field, [[entries[i] if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def jordan_nilpotent(cls, field: FieldSpec, n: int) -> MatrixFF:
        """Single nilpotent Jordan block: ones on the superdiagonal."""
        return cls(field, [[1 if j == i + 1 else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def companion(cls, g: PolyFF) -> MatrixFF:
        """Companion matrix of a monic polynomial (subdiagonal ones, last column -coeffs)."""
        if not g.is_monic():
            raise ValueError("companion matrix needs a monic polynomial")
        F = g.field
        d = len(g.coeffs) - 1
        rows = [[0] * d for _ in range(d)]
        for i in range(1, d):
            rows[i][i - 1] = 1
        for i in range(d):
            rows[i][d - 1] = F.neg(g.coeffs[i])
        return cls(F, rows)

    @classmethod
    def from_code(cls, field: FieldSpec, n: int, code: int) -> MatrixFF:
        """Matrix number ``code`` in the row-major base-q odometer order."""
        q = field.q
        flat = [0] * (n * n)
        for idx in range(n * n - 1, -1, -1):
            code, flat[idx] = divmod(code, q)
        return cls(field, [flat[i * n:(i + 1) * n] for i in range(n)])

    def to_code(self) -> int:
        q = self.field.q
        c = 0
        for row in self.rows:
            for x in row:
                c = c * q + x
        return c

    @classmethod
    def all(cls, field: FieldSpec, n: int) -> Iterator[MatrixFF]:
        for c in range(field.q ** (n * n)):
            yield cls.from_code(field, n, c)

    def __eq__(self, other) -> bool:
        return isinstance(other, MatrixFF) and self.field == other.field and self.rows == other.rows

    def __hash__(self) -> int:
        return hash((self.field, self.rows))

    def __repr__(self) -> str:
        return f"MatrixFF({self.field!r}, {[list(r) for r in self.rows]})"

    def _check(self, other: MatrixFF) -> None:
        if other.field != self.field:
            raise FieldMismatchError(f"{self.field!r} vs {other.field!r}")
        if other.n != self.n:
            raise ValueError(f"dimension mismatch: {self.n} vs {other.n}")

    def __add__(self, other: MatrixFF) -> MatrixFF:
        self._check(other)
        F = self.field
        return MatrixFF(F, [[F.add(x, y) for x, y in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __sub__(self, other: MatrixFF) -> MatrixFF:
        self._check(other)
        F = self.field
        return MatrixFF(F, [[F.sub(x, y) for x, y in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __mul__(self, other: MatrixFF) -> MatrixFF:
        self._check(other)
        return MatrixFF(self.field, _matmul(self.field, self.rows, other.rows))

    def __matmul__(self, other: MatrixFF) -> MatrixFF:
        return self * other

    def scale(self, c: int | FieldElement) -> MatrixFF:
        if isinstance(c, FieldElement):
            if c.field != self.field:
                raise FieldMismatchError(f"{self.field!r} vs {c.field!r}")
            c = c.code
        F = self.field
        return MatrixFF(F, [[F.mul(c, x) for x in r] for r in self.rows])

    def __pow__(self, e: int) -> MatrixFF:
        if e < 0:
            raise ValueError("negative matrix power")
        result = MatrixFF.identity(self.field, self.n)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def transpose(self) -> MatrixFF:
        return MatrixFF(self.field, list(zip(*self.rows)))

    def apply(self, v: Sequence[int]) -> Vector:
        F = self.field
        out = []
        for row in self.rows:
            acc = 0
            for x, y in zip(row, v):
                if x and y:
                    acc = F.add(acc, F.mul(x, y))
            out.append(acc)
        return tuple(out)

    def is_zero(self) -> bool:
        return all(x == 0 for r in self.rows for x in r)

    def inverse(self) -> MatrixFF:
        n, F = self.n, self.field
        aug = [list(r) + [1 if i == j else 0 for j in range(n)] for i, r in enumerate(self.rows)]
        _, pivots = _rref_inplace(F, aug, ncols=n)
        if len(pivots) < n:
            raise ZeroDivisionError("matrix is singular")
        return MatrixFF(F, [r[n:] for r in aug])


def mat_arith(op: str, A: MatrixFF, B=None) -> MatrixFF:
    """Dispatch ``mul | add | scale | pow`` by name."""
    if op == "mul":
        return A * B
    if op == "add":
        return A + B
    if op == "scale":
        return A.scale(B)
    if op == "pow":
        return A**B
    raise ValueError(f"unknown matrix operation {op!r}")


def _matmul(F: FieldSpec, X, Y) -> list[list[int]]:
    cols = list(zip(*Y))
    out = []
    for row in X:
        new = []
        for col in cols:
            acc = 0
            for x, y in zip(row, col):
                if x and y:
                    acc = F.add(acc, F.mul(x, y))
            new.append(acc)
        out.append(new)
    return out


# -- row reduction -------------------------------------------------------------

def _rref_inplace(F: FieldSpec, rows: list[list[int]], ncols: int | None = None) -> tuple[list[list[int]], list[int]]:
    """Reduced row echelon form in place; pivots searched in the first ``ncols`` columns."""
    if not rows:
        return rows, []
    width = len(rows[0])
    ncols = width if ncols is None else ncols
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = F.inv(rows[r][c])
        if inv != 1:
            rows[r] = [F.mul(inv, x) for x in rows[r]]
        pr = rows[r]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [F.sub(x, F.mul(f, y)) if y else x for x, y in zip(rows[i], pr)]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows, pivots


def rref(F: FieldSpec, rows: Sequence[Sequence[int]]) -> tuple[tuple[Vector, ...], list[int]]:
    """Nonzero rows of the RREF and the pivot columns."""
    work = [list(r) for r in rows]
    work, pivots = _rref_inplace(F, work)
    return tuple(tuple(r) for r in work[: len(pivots)]), pivots


def rank(F: FieldSpec, rows: Sequence[Sequence[int]]) -> int:
    return len(rref(F, rows)[1])


def rank_nullity(A: MatrixFF) -> tuple[int, int]:
    r = rank(A.field, A.rows)
    return r, A.n - r


def nullspace(F: FieldSpec, rows: Sequence[Sequence[int]], ncols: int) -> tuple[Vector, ...]:
    """Basis of {v : M v = 0}, canonicalised as the RREF of the basis vectors."""
    red, pivots = rref(F, rows) if rows else ((), [])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [0] * ncols
        v[f] = 1
        for r, pc in zip(red, pivots):
            v[pc] = F.neg(r[f])
        basis.append(v)
    return rref(F, basis)[0] if basis else ()


def column_space(F: FieldSpec, rows: Sequence[Sequence[int]]) -> tuple[Vector, ...]:
    """Basis of the column span, canonicalised as RREF rows of the transpose."""
    if not rows:
        return ()
    return rref(F, list(zip(*rows)))[0]


def span_contains(F: FieldSpec, basis: Sequence[Sequence[int]], v: Sequence[int]) -> bool:
    if not any(v):
        return True
    if not basis:
        return False
    return rank(F, list(basis) + [list(v)]) == len(basis)


def classify(A: MatrixFF) -> str:
    """``"nonsingular"``, ``"nilpotent"`` or ``"mixed"``.

    The 0x0 matrix is both nonsingular and nilpotent; it is reported as
    nonsingular.
    """
    if rank(A.field, A.rows) == A.n:
        return "nonsingular"
    if (A ** A.n).is_zero():
        return "nilpotent"
    return "mixed"


def is_nilpotent(A: MatrixFF) -> bool:
    return (A ** A.n).is_zero()


def is_nonsingular(A: MatrixFF) -> bool:
    return rank(A.field, A.rows) == A.n


@dataclass(frozen=True)
class FittingPair:
    """V = K_A (+) I_A; bases are RREF rows (each row is a basis vector)."""

    kernel_basis: tuple[Vector, ...]
    image_basis: tuple[Vector, ...]

    def change_of_basis(self, field: FieldSpec) -> MatrixFF:
        """Matrix whose columns are the kernel basis followed by the image basis."""
        cols = list(self.kernel_basis) + list(self.image_basis)
        n = len(cols)
        return MatrixFF(field, [[cols[j][i] for j in range(n)] for i in range(n)])


def fitting_decompose(A: MatrixFF) -> FittingPair:
    """Fitting decomposition: K_A = ker A^n, I_A = im A^n."""
    An = A ** A.n
    return FittingPair(nullspace(A.field, An.rows, A.n), column_space(A.field, An.rows))


def twisted_operator(A: MatrixFF, z: int) -> list[list[int]]:
    """Matrix of X -> AX - zXA on row-major vec(X)."""
    F, n = A.field, A.n
    a = A.rows
    M = [[0] * (n * n) for _ in range(n * n)]
    for i in range(n):
        for j in range(n):
            row = M[i * n + j]
            # (AX)_{ij} = sum_k a[i][k] X[k][j]
            for k in range(n):
                if a[i][k]:
                    row[k * n + j] = F.add(row[k * n + j], a[i][k])
            # (XA)_{ij} = sum_l X[i][l] a[l][j]
            for l in range(n):
                if a[l][j]:
                    row[i * n + l] = F.sub(row[i * n + l], F.mul(z, a[l][j]))
    return M


def twisted_centralizer_dim(A: MatrixFF, z: FieldElement | int) -> int:
    """dim {B : AB = zBA}; the number of such B is q to this power."""
    zc = z.code if isinstance(z, FieldElement) else z
    if zc == 0:
        raise ZeroDivisionError("twist parameter must be nonzero")
    n = A.n
    return n * n - rank(A.field, twisted_operator(A, zc))


def twisted_commute(A: MatrixFF, B: MatrixFF, z: int) -> bool:
    return A * B == (B * A).scale(z)


# -- Smith normal form over GF(q)[t] -------------------------------------------

@dataclass(frozen=True)
class InvariantFactors:
    chain: tuple[PolyFF, ...]

    def __iter__(self):
        return iter(self.chain)

    def __len__(self) -> int:
        return len(self.chain)

    def degrees(self) -> tuple[int, ...]:
        return tuple(len(g.coeffs) - 1 for g in self.chain)

    def __str__(self) -> str:
        return "(" + ", ".join(str(g) for g in self.chain) + ")"


def _deg(p: tuple) -> int:
    return len(p) - 1


def smith_diagonal(F: FieldSpec, M: list[list[tuple[int, ...]]]) -> list[tuple[int, ...]]:
    """Diagonal of the Smith normal form of a square polynomial matrix (entries as coeff tuples).

    Pivot rule: nonzero entry of least degree in the active submatrix, ties
    broken row-major. Returned entries are monic (zeros stay zero).
    """
    n = len(M)
    M = [list(r) for r in M]
    diag: list[tuple[int, ...]] = []
    neg = F.neg

    def submul(a, c, b):
        # a - c*b
        prod = poly_mul(F, c, b)
        return poly_add(F, a, tuple(neg(x) for x in prod))

    for s in range(n):
        while True:
            best = None
            for i in range(s, n):
                for j in range(s, n):
                    e = M[i][j]
                    if e and (best is None or len(e) < best[0]):
                        best = (len(e), i, j)
                        if len(e) == 1:
                            break
                if best is not None and best[0] == 1:
                    break
            if best is None:
                diag.extend([()] * (n - s))
                return diag
            _, pi, pj = best
            M[s], M[pi] = M[pi], M[s]
            if pj != s:
                for row in M:
                    row[s], row[pj] = row[pj], row[s]
            piv = M[s][s]
            dirty = False
            for i in range(s + 1, n):
                if M[i][s]:
                    quo, rem = poly_divmod(F, M[i][s], piv)
                    rs = M[s]
                    ri = M[i]
                    for j in range(s, n):
                        if rs[j]:
                            ri[j] = submul(ri[j], quo, rs[j])
                    if rem:
                        dirty = True
            for j in range(s + 1, n):
                if M[s][j]:
                    quo, rem = poly_divmod(F, M[s][j], piv)
                    for i in range(s, n):
                        if M[i][s]:
                            M[i][j] = submul(M[i][j], quo, M[i][s])
                    if rem:
                        dirty = True
            if dirty:
                continue
            # row and column cleared; enforce divisibility into the rest
            bad = None
            if len(piv) > 1:
                for i in range(s + 1, n):
                    for j in range(s + 1, n):
                        if M[i][j] and poly_divmod(F, M[i][j], piv)[1]:
                            bad = i
                            break
                    if bad is not None:
                        break
            if bad is None:
                diag.append(poly_monic(F, piv))
                break
            M[s] = [poly_add(F, x, y) for x, y in zip(M[s], M[bad])]
    return diag


def char_matrix(A: MatrixFF) -> list[list[tuple[int, ...]]]:
    """tI - A with entries as coefficient tuples."""
    F = A.field
    out = []
    for i, row in enumerate(A.rows):
        new = []
        for j, a in enumerate(row):
            c0 = F.neg(a)
            if i == j:
                new.append((c0, 1))
            else:
                new.append((c0,) if c0 else ())
        out.append(new)
    return out


def invariant_factors(A: MatrixFF) -> InvariantFactors:
    """Invariant factor chain g_1 | ... | g_r of A (units dropped)."""
    F = A.field
    diag = smith_diagonal(F, char_matrix(A))
    chain = sorted((d for d in diag if len(d) > 1), key=len)
    return InvariantFactors(tuple(PolyFF(F, d) for d in chain))


def char_poly(A: MatrixFF) -> PolyFF:
    """det(tI - A) by Laplace expansion along the first row (small n only)."""
    F = A.field
    M = char_matrix(A)

    def det(rows: list[list[tuple]], cols: list[int]) -> tuple:
        if not rows:
            return (1,)
        first, rest = rows[0], rows[1:]
        acc: tuple = ()
        for idx, c in enumerate(cols):
            if not first[c]:
                continue
            minor = det(rest, cols[:idx] + cols[idx + 1:])
            term = poly_mul(F, first[c], minor)
            if idx % 2:
                term = tuple(F.neg(x) for x in term)
            acc = poly_add(F, acc, term)
        return acc

    return PolyFF(F, det(M, list(range(A.n))))


def is_similar(A: MatrixFF, B: MatrixFF) -> bool:
    A._check(B)
    return invariant_factors(A).chain == invariant_factors(B).chain


def similar_to_zeta_multiple(B: MatrixFF, z: FieldElement, route: str = "both") -> bool:
    """Is B similar to zB?

    ``route="similarity"`` compares invariant factors of B and zB;
    ``route="pm"`` tests every invariant factor of B for membership in P_m
    with m = ord(z). ``"both"`` computes the two and insists they agree.
    """
    if z.is_zero():
        raise ZeroDivisionError("twist parameter must be nonzero")
    if z.field != B.field:
        raise FieldMismatchError(f"{B.field!r} vs {z.field!r}")
    r1 = r2 = None
    if route in ("similarity", "both"):
        r1 = is_similar(B, B.scale(z))
    if route in ("pm", "both"):
        m = mult_order(z)
        r2 = all(pm_member(g, m) for g in invariant_factors(B))
    if route == "both":
        if r1 != r2:
            raise AssertionError(f"similarity routes disagree for {B!r}, z={z!r}")
        return r1
    if r1 is None and r2 is None:
        raise ValueError(f"unknown route {route!r}")
    return r1 if r1 is not None else r2
