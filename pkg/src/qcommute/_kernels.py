"""Compiled inner loops for the exhaustive enumeration over Mat_n(F_q).

Field arithmetic is by lookup tables on element codes, so one kernel serves
prime and prime-power fields alike.
"""

import numpy as np
from numba import njit

SET_K, SET_U, SET_N = 0, 1, 2


@njit(cache=True)
def _rank(M, rows, cols, add, mul, neg, inv):
    r = 0
    for c in range(cols):
        piv = -1
        for i in range(r, rows):
            if M[i, c] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            for j in range(c, cols):
                tmp = M[r, j]
                M[r, j] = M[piv, j]
                M[piv, j] = tmp
        ip = inv[M[r, c]]
        for i in range(r + 1, rows):
            x = M[i, c]
            if x != 0:
                f = neg[mul[x, ip]]
                for j in range(c, cols):
                    y = M[r, j]
                    if y != 0:
                        M[i, j] = add[M[i, j], mul[f, y]]
        r += 1
        if r == rows:
            break
    return r


@njit(cache=True)
def _is_nilpotent(a, n, add, mul, P, T):
    # P <- a^n by repeated multiplication
    for i in range(n):
        for j in range(n):
            P[i, j] = a[i, j]
    for _ in range(n - 1):
        for i in range(n):
            for j in range(n):
                acc = 0
                for k in range(n):
                    acc = add[acc, mul[P[i, k], a[k, j]]]
                T[i, j] = acc
        for i in range(n):
            for j in range(n):
                P[i, j] = T[i, j]
    for i in range(n):
        for j in range(n):
            if P[i, j] != 0:
                return False
    return True


@njit(cache=True)
def _twisted_dim(a, n, z, add, mul, neg, inv, M):
    nn = n * n
    for r in range(nn):
        for c in range(nn):
            M[r, c] = 0
    for i in range(n):
        for j in range(n):
            row = i * n + j
            for k in range(n):
                x = a[i, k]
                if x != 0:
                    col = k * n + j
                    M[row, col] = add[M[row, col], x]
            for l in range(n):
                x = a[l, j]
                if x != 0:
                    col = i * n + l
                    M[row, col] = add[M[row, col], neg[mul[z, x]]]
    return nn - _rank(M, nn, nn, add, mul, neg, inv)


@njit(cache=True)
def shard_histogram(prefix, n, q, add, mul, neg, inv, zetas, hist):
    """Accumulate dim histograms for every A whose first row has the given code.

    ``hist[s, z, d]`` counts matrices A in set s (K, U, N) whose twisted
    centralizer for ``zetas[z]`` has dimension d.
    """
    nn = n * n
    a = np.zeros((n, n), dtype=np.int64)
    A = np.zeros((n, n), dtype=np.int64)
    P = np.zeros((n, n), dtype=np.int64)
    T = np.zeros((n, n), dtype=np.int64)
    M = np.zeros((nn, nn), dtype=np.int64)
    code = prefix
    for j in range(n - 1, -1, -1):
        a[0, j] = code % q
        code //= q
    rest = nn - n
    total = 1
    for _ in range(rest):
        total *= q
    nz = zetas.shape[0]
    for step in range(total):
        if step > 0:
            # odometer over rows 1..n-1, row-major, last entry fastest
            idx = nn - 1
            while True:
                i = idx // n
                j = idx % n
                a[i, j] += 1
                if a[i, j] < q:
                    break
                a[i, j] = 0
                idx -= 1
        for i in range(n):
            for j in range(n):
                A[i, j] = a[i, j]
        nonsing = _rank(A, n, n, add, mul, neg, inv) == n
        nilp = False
        if not nonsing:
            nilp = _is_nilpotent(a, n, add, mul, P, T)
        for zi in range(nz):
            d = _twisted_dim(a, n, zetas[zi], add, mul, neg, inv, M)
            hist[SET_K, zi, d] += 1
            if nonsing:
                hist[SET_U, zi, d] += 1
            elif nilp:
                hist[SET_N, zi, d] += 1


# -- Smith normal form of tI - A over F_q[t] ----------------------------------
# Polynomials are coefficient rows P[i, j, :] (low -> high) with degree in
# deg[i, j]; -1 marks the zero polynomial. Capacity overflow returns False.


@njit(cache=True)
def _divmod_inplace(r, dr, b, db, add, mul, neg, inv, quo):
    """r <- r mod b, quo <- r div b; returns the remainder degree."""
    for k in range(quo.shape[0]):
        quo[k] = 0
    ib = inv[b[db]]
    while dr >= db:
        c = mul[r[dr], ib]
        s = dr - db
        quo[s] = c
        nc = neg[c]
        for k in range(db + 1):
            if b[k] != 0:
                r[s + k] = add[r[s + k], mul[nc, b[k]]]
        while dr >= 0 and r[dr] == 0:
            dr -= 1
    return dr


@njit(cache=True)
def _submul(t, dt, c, dc, src, ds, add, mul, neg, cap):
    """t <- t - c*src; returns the new degree, or -2 on capacity overflow."""
    if dc < 0 or ds < 0:
        return dt
    top = dc + ds
    if top >= cap:
        return -2
    for i in range(dc + 1):
        x = c[i]
        if x == 0:
            continue
        nx = neg[x]
        for j in range(ds + 1):
            y = src[j]
            if y != 0:
                t[i + j] = add[t[i + j], mul[nx, y]]
    d = max(dt, top)
    while d >= 0 and t[d] == 0:
        d -= 1
    return d


@njit(cache=True)
def _smith_char(a, n, add, mul, neg, inv, P, deg, quo, tmp, out_row):
    cap = P.shape[2]
    for i in range(n):
        for j in range(n):
            for k in range(cap):
                P[i, j, k] = 0
            P[i, j, 0] = neg[a[i, j]]
            deg[i, j] = 0 if P[i, j, 0] != 0 else -1
        P[i, i, 1] = 1
        deg[i, i] = 1
    for s in range(n):
        while True:
            bi = -1
            bj = -1
            bd = cap + 1
            for i in range(s, n):
                for j in range(s, n):
                    d = deg[i, j]
                    if d >= 0 and d < bd:
                        bd = d
                        bi = i
                        bj = j
            if bi < 0:
                # singular polynomial matrix; cannot happen for tI - A
                return False
            if bi != s:
                for j in range(n):
                    for k in range(cap):
                        x = P[s, j, k]
                        P[s, j, k] = P[bi, j, k]
                        P[bi, j, k] = x
                    d = deg[s, j]
                    deg[s, j] = deg[bi, j]
                    deg[bi, j] = d
            if bj != s:
                for i in range(n):
                    for k in range(cap):
                        x = P[i, s, k]
                        P[i, s, k] = P[i, bj, k]
                        P[i, bj, k] = x
                    d = deg[i, s]
                    deg[i, s] = deg[i, bj]
                    deg[i, bj] = d
            pd = deg[s, s]
            dirty = False
            for i in range(s + 1, n):
                if deg[i, s] >= 0:
                    for k in range(cap):
                        tmp[k] = P[i, s, k]
                    _divmod_inplace(tmp, deg[i, s], P[s, s], pd, add, mul, neg, inv, quo)
                    dq = deg[i, s] - pd
                    for j in range(s, n):
                        d = _submul(P[i, j], deg[i, j], quo, dq, P[s, j], deg[s, j], add, mul, neg, cap)
                        if d == -2:
                            return False
                        deg[i, j] = d
                    if deg[i, s] >= 0:
                        dirty = True
            for j in range(s + 1, n):
                if deg[s, j] >= 0:
                    for k in range(cap):
                        tmp[k] = P[s, j, k]
                    _divmod_inplace(tmp, deg[s, j], P[s, s], pd, add, mul, neg, inv, quo)
                    dq = deg[s, j] - pd
                    for i in range(s, n):
                        d = _submul(P[i, j], deg[i, j], quo, dq, P[i, s], deg[i, s], add, mul, neg, cap)
                        if d == -2:
                            return False
                        deg[i, j] = d
                    if deg[s, j] >= 0:
                        dirty = True
            if dirty:
                continue
            bad = -1
            if pd > 0:
                for i in range(s + 1, n):
                    for j in range(s + 1, n):
                        if deg[i, j] >= 0:
                            for k in range(cap):
                                tmp[k] = P[i, j, k]
                            if _divmod_inplace(tmp, deg[i, j], P[s, s], pd, add, mul, neg, inv, quo) >= 0:
                                bad = i
                                break
                    if bad >= 0:
                        break
            if bad < 0:
                break
            for j in range(n):
                for k in range(cap):
                    P[s, j, k] = add[P[s, j, k], P[bad, j, k]]
                d = cap - 1
                while d >= 0 and P[s, j, d] == 0:
                    d -= 1
                deg[s, j] = d
    # diagonal, monic, units dropped, ascending degree (equal degrees are equal polys)
    width = n + 2
    for k in range(out_row.shape[0]):
        out_row[k] = 0
    slot = 0
    for d in range(1, n + 1):
        for s in range(n):
            if deg[s, s] == d:
                il = inv[P[s, s, d]]
                base = slot * width
                out_row[base] = d
                for k in range(d + 1):
                    out_row[base + 1 + k] = mul[il, P[s, s, k]]
                slot += 1
    return True


@njit(cache=True)
def invariant_factor_shard(prefix, n, q, add, mul, neg, inv, out):
    """Invariant factors of every A with the given first-row code.

    Row r of ``out`` encodes the chain of the r-th matrix in odometer order as
    consecutive slots ``[degree, c_0, ..., c_n]``; unused slots are zero. A row
    whose first entry is -1 overflowed the polynomial capacity.
    """
    nn = n * n
    cap = 2 * n + 2
    a = np.zeros((n, n), dtype=np.int64)
    P = np.zeros((n, n, cap), dtype=np.int64)
    deg = np.zeros((n, n), dtype=np.int64)
    quo = np.zeros(cap, dtype=np.int64)
    tmp = np.zeros(cap, dtype=np.int64)
    code = prefix
    for j in range(n - 1, -1, -1):
        a[0, j] = code % q
        code //= q
    total = out.shape[0]
    for step in range(total):
        if step > 0:
            idx = nn - 1
            while True:
                i = idx // n
                j = idx % n
                a[i, j] += 1
                if a[i, j] < q:
                    break
                a[i, j] = 0
                idx -= 1
        if not _smith_char(a, n, add, mul, neg, inv, P, deg, quo, tmp, out[step]):
            out[step, 0] = -1


@njit(cache=True)
def pm_route(table, n, m, result):
    """result[r] <- every invariant factor in row r lies in P_m."""
    width = n + 2
    for r in range(table.shape[0]):
        ok = True
        for slot in range(n):
            base = slot * width
            d = table[r, base]
            if d <= 0:
                continue
            for e in range(d):
                if table[r, base + 1 + e] != 0 and (d - e) % m != 0:
                    ok = False
                    break
            if not ok:
                break
        result[r] = ok
