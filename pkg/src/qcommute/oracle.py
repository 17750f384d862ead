"""Brute-force ground truth by enumerating matrices over a concrete field.

The number of pairs (A, B) with AB = zeta*BA is the sum over A of
q^dim{B : AB = zeta*BA}, so only A is enumerated and B is counted through a
nullity. Work is split into q^n shards by the first row of A; shard results
are dimension histograms, summed in shard order, so the total is the same for
any worker count.
"""

from __future__ import annotations

import logging
import os
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dc_field
from itertools import product
from typing import Sequence

import numpy as np

from . import counting
from .ff import TABLE_LIMIT, FieldElement, FieldSpec, PolyFF, monic_polys, mult_order, pm_member
from .linalg import (
    MatrixFF,
    classify,
    fitting_decompose,
    invariant_factors,
    is_nilpotent,
    is_nonsingular,
    twisted_centralizer_dim,
)

log = logging.getLogger(__name__)

DEFAULT_BUDGET = 2**34
NAIVE_BUDGET = 2**26
SETS = ("K", "U", "N")
_SET_INDEX = {"K": 0, "U": 1, "N": 2}


class BudgetExceeded(RuntimeError):
    """The requested enumeration is larger than the configured budget."""


def enumeration_budget() -> int:
    env = os.environ.get("QCOMMUTE_BUDGET")
    return int(env) if env else DEFAULT_BUDGET


def _check_budget(steps: int, budget: int | None) -> None:
    limit = enumeration_budget() if budget is None else budget
    if steps > limit:
        raise BudgetExceeded(f"{steps} enumeration steps exceed budget {limit}")


@dataclass(frozen=True)
class OracleJob:
    field: FieldSpec
    n: int
    zeta: FieldElement
    set: str = "K"
    workers: int = 1
    progress_every: int = 0  # log every this many shards; 0 disables
    budget: int | None = None

    def __post_init__(self):
        if self.zeta.is_zero():
            raise ValueError("zeta must be nonzero")
        if self.zeta.field != self.field:
            raise ValueError("zeta is not an element of the job's field")
        if self.set not in SETS:
            raise ValueError(f"set must be one of {SETS}, got {self.set!r}")
        _check_budget(self.field.q ** (self.n * self.n), self.budget)


# -- shard evaluation ------------------------------------------------------------

def _use_jit(F: FieldSpec, backend: str) -> bool:
    if backend == "python":
        return False
    ok = F.q <= TABLE_LIMIT and not os.environ.get("QCOMMUTE_NO_JIT")
    if backend == "jit" and not ok:
        raise ValueError(f"compiled backend unavailable for q={F.q}")
    return ok


def _shard_python(F: FieldSpec, n: int, prefix: int, zetas: Sequence[int]) -> np.ndarray:
    hist = np.zeros((3, len(zetas), n * n + 1), dtype=np.int64)
    q = F.q
    per = q ** (n * n - n)
    for c in range(prefix * per, (prefix + 1) * per):
        A = MatrixFF.from_code(F, n, c)
        kind = classify(A)
        for zi, z in enumerate(zetas):
            d = twisted_centralizer_dim(A, z)
            hist[0, zi, d] += 1
            if kind == "nonsingular":
                hist[1, zi, d] += 1
            elif kind == "nilpotent":
                hist[2, zi, d] += 1
    return hist


def _shard(args) -> np.ndarray:
    F, n, prefix, zetas, jit = args
    if not jit:
        return _shard_python(F, n, prefix, zetas)
    from ._kernels import shard_histogram

    add, mul, neg, inv = F.tables()
    hist = np.zeros((3, len(zetas), n * n + 1), dtype=np.int64)
    shard_histogram(prefix, n, F.q, add, mul, neg, inv, np.asarray(zetas, dtype=np.int64), hist)
    return hist


def dimension_histogram(
    F: FieldSpec,
    n: int,
    zetas: Sequence[FieldElement | int],
    workers: int = 1,
    backend: str = "auto",
    progress_every: int = 0,
    budget: int | None = None,
) -> np.ndarray:
    """``hist[s, z, d]``: number of A in set s with twisted-centralizer dimension d for zetas[z]."""
    codes = [z.code if isinstance(z, FieldElement) else z for z in zetas]
    if any(c == 0 for c in codes):
        raise ValueError("zeta must be nonzero")
    _check_budget(F.q ** (n * n), budget)
    if n == 0:
        hist = np.zeros((3, len(codes), 1), dtype=np.int64)
        hist[:, :, 0] = 1
        return hist
    jit = _use_jit(F, backend)
    shards = [(F, n, prefix, tuple(codes), jit) for prefix in range(F.q**n)]
    total = np.zeros((3, len(codes), n * n + 1), dtype=np.int64)
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = pool.map(_shard, shards, chunksize=max(1, len(shards) // (4 * workers)))
            for i, h in enumerate(results, 1):
                total += h
                if progress_every and i % progress_every == 0:
                    log.info("shard %d/%d done", i, len(shards))
    else:
        for i, s in enumerate(shards, 1):
            total += _shard(s)
            if progress_every and i % progress_every == 0:
                log.info("shard %d/%d done", i, len(shards))
    return total


def histogram_to_count(hist_row: np.ndarray, q: int) -> int:
    return sum(int(c) * q**d for d, c in enumerate(hist_row))


def oracle_tally(
    F: FieldSpec,
    n: int,
    zetas: Sequence[FieldElement] | None = None,
    workers: int = 1,
    backend: str = "auto",
    budget: int | None = None,
) -> dict[tuple[str, int], int]:
    """Counts for every set and every zeta from one enumeration: ``{(set, zeta_code): count}``."""
    zs = list(F.units()) if zetas is None else list(zetas)
    hist = dimension_histogram(F, n, zs, workers=workers, backend=backend, budget=budget)
    return {
        (s, z.code): histogram_to_count(hist[_SET_INDEX[s], zi], F.q)
        for s in SETS
        for zi, z in enumerate(zs)
    }


def oracle_count(job: OracleJob, backend: str = "auto") -> int:
    hist = dimension_histogram(
        job.field, job.n, [job.zeta],
        workers=job.workers, backend=backend,
        progress_every=job.progress_every, budget=job.budget,
    )
    return histogram_to_count(hist[_SET_INDEX[job.set], 0], job.field.q)


def oracle_naive(which: str, n: int, F: FieldSpec, zeta: FieldElement, budget: int = NAIVE_BUDGET) -> int:
    """Enumerate A and B both and test AB = zeta*BA entrywise."""
    if which not in SETS:
        raise ValueError(f"set must be one of {SETS}")
    steps = F.q ** (2 * n * n)
    if steps > budget:
        raise BudgetExceeded(f"{steps} pairs exceed naive budget {budget}")
    mats = list(MatrixFF.all(F, n))
    z = zeta.code
    total = 0
    for A in mats:
        if which == "U" and not is_nonsingular(A):
            continue
        if which == "N" and not is_nilpotent(A):
            continue
        for B in mats:
            if A * B == (B * A).scale(z):
                total += 1
    return total


# -- structural verifications ------------------------------------------------------

@dataclass
class VerifyReport:
    name: str
    checked: int = 0
    counterexamples: list = dc_field(default_factory=list)
    details: dict = dc_field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.counterexamples

    def __str__(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status} {self.name}: {self.checked} checked, {len(self.counterexamples)} counterexamples"


def nilpotent_representative(F: FieldSpec, pi: counting.Partition) -> MatrixFF:
    """Block-diagonal A_pi: for each part size i, an i x i grid of a_i x a_i blocks
    with identity blocks on the block superdiagonal."""
    n = pi.n
    rows = [[0] * n for _ in range(n)]
    off = 0
    for i in range(1, len(pi.mult) + 1):
        a = pi.a(i)
        for blk in range(i - 1):
            for r in range(a):
                rows[off + blk * a + r][off + (blk + 1) * a + r] = 1
        off += i * a
    return MatrixFF(F, rows)


def verify_block_structure(pi: counting.Partition, F: FieldSpec, zeta: FieldElement) -> VerifyReport:
    A = nilpotent_representative(F, pi)
    d_z = twisted_centralizer_dim(A, zeta)
    d_1 = twisted_centralizer_dim(A, 1)
    mult = pi.mult
    expected = sum(
        min(i, j) * mult[i - 1] * mult[j - 1]
        for i in range(1, len(mult) + 1)
        for j in range(1, len(mult) + 1)
    )
    rep = VerifyReport(f"block structure pi={pi} q={F.q} zeta={zeta}", checked=1)
    rep.details = {"dim_zeta": d_z, "dim_one": d_1, "expected": expected, "nilpotent": is_nilpotent(A)}
    if not (d_z == d_1 == expected and is_nilpotent(A)):
        rep.counterexamples.append(rep.details)
    return rep


def _blocks(M: MatrixFF, s: int):
    r = M.rows
    tl = MatrixFF(M.field, [row[:s] for row in r[:s]])
    br = MatrixFF(M.field, [row[s:] for row in r[s:]])
    off = any(x for row in r[:s] for x in row[s:]) or any(x for row in r[s:] for x in row[:s])
    return tl, br, off


def verify_fitting(
    F: FieldSpec,
    n: int,
    zeta: FieldElement,
    samples: int | None = None,
    seed: int = 0,
) -> VerifyReport:
    """AB = zeta*BA  <=>  B preserves K_A and I_A and both restricted equations hold.

    Exhaustive over all (A, B) unless ``samples`` is given, in which case that
    many random pairs are drawn with the seed.
    """
    rep = VerifyReport(f"fitting n={n} q={F.q} zeta={zeta}")
    z = zeta.code
    total = F.q ** (n * n)
    if samples is None:
        pairs = ((a, b) for a in range(total) for b in range(total))
    else:
        rng = random.Random(seed)
        pairs = ((rng.randrange(total), rng.randrange(total)) for _ in range(samples))
    cache: dict[int, tuple] = {}
    for ac, bc in pairs:
        if ac not in cache:
            A = MatrixFF.from_code(F, n, ac)
            fp = fitting_decompose(A)
            s = len(fp.kernel_basis)
            P = fp.change_of_basis(F)
            Pinv = P.inverse()
            Ap = Pinv * A * P
            Nb, Ub, off = _blocks(Ap, s)
            ok = (
                not off
                and len(fp.kernel_basis) + len(fp.image_basis) == n
                and is_nilpotent(Nb)
                and is_nonsingular(Ub)
            )
            if not ok:
                rep.counterexamples.append(("fitting-invariants", ac))
            cache[ac] = (A, s, P, Pinv, Nb, Ub)
        A, s, P, Pinv, Nb, Ub = cache[ac]
        B = MatrixFF.from_code(F, n, bc)
        lhs = A * B == (B * A).scale(z)
        Bp = Pinv * B * P
        B1, B4, off = _blocks(Bp, s)
        rhs = (
            not off
            and Nb * B1 == (B1 * Nb).scale(z)
            and Ub * B4 == (B4 * Ub).scale(z)
        )
        rep.checked += 1
        if lhs != rhs:
            rep.counterexamples.append((ac, bc))
    return rep


def invariant_factor_chains(F: FieldSpec, n: int, m: int | None = None) -> list[tuple[PolyFF, ...]]:
    """Every chain g_1 | g_2 | ... | g_r of monic nonconstant polynomials with total degree n.

    With ``m`` given, only chains whose members all lie in P_m.
    """
    polys_by_deg = {d: list(monic_polys(F, d)) for d in range(1, n + 1)}
    out: list[tuple[PolyFF, ...]] = []

    def extend(chain: tuple[PolyFF, ...], rem: int) -> None:
        if rem == 0:
            out.append(chain)
            return
        prev = chain[-1] if chain else None
        lo = len(prev.coeffs) - 1 if prev is not None else 1
        for d in range(lo, rem + 1):
            for g in polys_by_deg[d]:
                if prev is not None and not (g % prev).is_zero():
                    continue
                if m is not None and not pm_member(g, m):
                    continue
                extend(chain + (g,), rem - d)

    extend((), n)
    return out


def _scaling_orbits(F: FieldSpec, n: int, gens: Sequence[int]) -> list[list[int]]:
    """Partition first-row codes into orbits under multiplication by the group <gens>."""
    group = {1}
    frontier = [1]
    while frontier:
        g = frontier.pop()
        for h in gens:
            x = F.mul(g, h)
            if x not in group:
                group.add(x)
                frontier.append(x)
    q = F.q
    seen: set[int] = set()
    orbits = []
    for code in range(q**n):
        if code in seen:
            continue
        digits = []
        c = code
        for _ in range(n):
            c, d = divmod(c, q)
            digits.append(d)
        digits.reverse()
        orb = set()
        for g in group:
            v = 0
            for d in digits:
                v = v * q + F.mul(g, d)
            orb.add(v)
        seen |= orb
        orbits.append(sorted(orb))
    return orbits


def _encode_chain(chain: Sequence[PolyFF], n: int) -> list[int]:
    width = n + 2
    row = [0] * (n * width)
    for slot, g in enumerate(chain):
        row[slot * width] = len(g.coeffs) - 1
        row[slot * width + 1: slot * width + 1 + len(g.coeffs)] = g.coeffs
    return row


def _chain_table(F: FieldSpec, n: int, prefix: int, jit: bool) -> np.ndarray:
    """Encoded invariant factors of every matrix with the given first row, in odometer order."""
    per = F.q ** (n * n - n)
    table = np.zeros((per, n * (n + 2)), dtype=np.int64)
    if jit:
        from ._kernels import invariant_factor_shard

        add, mul, neg, inv = F.tables()
        invariant_factor_shard(prefix, n, F.q, add, mul, neg, inv, table)
        redo = np.nonzero(table[:, 0] == -1)[0]
    else:
        redo = range(per)
    for r in redo:
        A = MatrixFF.from_code(F, n, prefix * per + int(r))
        table[r] = _encode_chain(invariant_factors(A).chain, n)
    return table


def verify_similarity_criterion(
    F: FieldSpec,
    n: int,
    zetas: FieldElement | Sequence[FieldElement],
    backend: str = "auto",
) -> VerifyReport:
    """B ~ zeta*B (compared invariant factors) agrees with "all invariant factors in P_m".

    Exhaustive over Mat_n(F_q), for each zeta given. Also counts the
    similarity classes with the property and compares that against chain
    enumeration and :func:`counting.count_S`. Invariant factors are computed
    once per matrix; matrices are processed in groups closed under scaling by
    the zetas so the chain of zeta*B is always at hand.
    """
    if isinstance(zetas, FieldElement):
        zetas = [zetas]
    zetas = list(zetas)
    if n < 1:
        raise ValueError("n must be positive")
    zs = ", ".join(str(z) for z in zetas)
    rep = VerifyReport(f"similarity criterion n={n} q={F.q} zeta in {{{zs}}}")
    q = F.q
    jit = _use_jit(F, backend)
    rest_len = n * n - n
    per = q**rest_len
    orders = [mult_order(z) for z in zetas]
    classes: list[set] = [set() for _ in zetas]

    # digits of the trailing n-1 rows for every local index, and their images under each zeta
    rest_digits = np.array(list(product(range(q), repeat=rest_len)), dtype=np.int64).reshape(per, rest_len)
    weights = q ** np.arange(rest_len - 1, -1, -1, dtype=np.int64)
    mul_t = np.array([[F.mul(a, b) for b in range(q)] for a in range(q)], dtype=np.int64)
    scaled_rest = [mul_t[z.code][rest_digits] @ weights for z in zetas]

    def scale_row(code: int, z: int) -> int:
        digits = []
        for _ in range(n):
            code, d = divmod(code, q)
            digits.append(F.mul(z, d))
        out = 0
        for d in reversed(digits):
            out = out * q + d
        return out

    for orbit in _scaling_orbits(F, n, [z.code for z in zetas]):
        pos = {prefix: i for i, prefix in enumerate(orbit)}
        table = np.vstack([_chain_table(F, n, prefix, jit) for prefix in orbit])
        route2 = []
        for m in orders:
            res = np.zeros(len(table), dtype=np.bool_)
            if jit:
                from ._kernels import pm_route

                pm_route(table, n, m, res)
            else:
                for r, row in enumerate(table):
                    res[r] = all(
                        pm_member(PolyFF(F, row[s * (n + 2) + 1: s * (n + 2) + 2 + row[s * (n + 2)]].tolist()), m)
                        for s in range(n)
                        if row[s * (n + 2)] > 0
                    )
            route2.append(res)
        for zi, z in enumerate(zetas):
            target = np.concatenate(
                [pos[scale_row(prefix, z.code)] * per + scaled_rest[zi] for prefix in orbit]
            )
            route1 = np.all(table == table[target], axis=1)
            bad = np.nonzero(route1 != route2[zi])[0]
            rep.checked += len(table)
            for b in bad:
                c = orbit[b // per] * per + int(b % per)
                rep.counterexamples.append((c, z.code))
            for row in np.unique(table[route2[zi]], axis=0):
                classes[zi].add(tuple(row.tolist()))

    for zi, z in enumerate(zetas):
        m = orders[zi]
        found = len(classes[zi])
        enumerated = len(invariant_factor_chains(F, n, m))
        expected = counting.count_S(n, m, q)
        rep.details[str(z)] = {"m": m, "classes_seen": found, "chains": enumerated, "count_S": expected}
        if not found == enumerated == expected:
            rep.counterexamples.append(("class-count", z.code, found, enumerated, expected))
    return rep


def verify_class_count(F: FieldSpec, n: int, m: int) -> VerifyReport:
    """|S| by enumerating invariant-factor chains in P_m, against the closed form."""
    rep = VerifyReport(f"class count n={n} q={F.q} m={m}", checked=1)
    found = len(invariant_factor_chains(F, n, m))
    expected = counting.count_S(n, m, F.q)
    rep.details = {"chains": found, "count_S": expected}
    if found != expected:
        rep.counterexamples.append(rep.details)
    return rep


def verify_fitting_convolution(
    F: FieldSpec,
    zeta: FieldElement,
    n_max: int,
    workers: int = 1,
    backend: str = "auto",
) -> VerifyReport:
    """|K_n| = sum_{s+t=n} h(s, t) |N_s| |U_t| with every term from the oracle."""
    rep = VerifyReport(f"fitting convolution q={F.q} zeta={zeta} n<={n_max}")
    tallies = [oracle_tally(F, n, [zeta], workers=workers, backend=backend) for n in range(n_max + 1)]
    z = zeta.code
    for n in range(n_max + 1):
        lhs = tallies[n][("K", z)]
        rhs = sum(
            counting.h_subspace_pairs(s, n - s, F.q) * tallies[s][("N", z)] * tallies[n - s][("U", z)]
            for s in range(n + 1)
        )
        rep.checked += 1
        rep.details[n] = (lhs, rhs)
        if lhs != rhs:
            rep.counterexamples.append((n, lhs, rhs))
    return rep
