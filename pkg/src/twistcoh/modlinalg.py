"""Exact linear algebra over Z/m for finite-module cochain systems.

Everything a cohomology computation needs reduces to three primitives over
Z/m: kernels of congruence systems, solving against a fixed generator matrix,
and Smith normal form of relation lattices that contain m*Z^s.  Working mod m
throughout keeps every intermediate entry bounded, so int64 numpy arrays stay
exact.

Conventions: vectors are columns; a subgroup of (Z/m)^N is generated by the
columns of an N x s matrix; Howell forms describe row spans.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np


def exgcd(a: int, b: int) -> tuple[int, int, int]:
    """(g, x, y) with a*x + b*y = g = gcd(a, b) >= 0."""
    old_r, r = int(a), int(b)
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def modinv(a: int, m: int) -> int:
    g, x, _ = exgcd(a % m, m)
    if g != 1:
        raise ValueError(f"{a} is not a unit mod {m}")
    return x % m


def unit_lift(e: int, m: int) -> int:
    """A unit w mod m with (w * e) % m == gcd(e, m)."""
    e %= m
    if e == 0:
        return 1
    g = math.gcd(e, m)
    u = e // g
    step = m // g
    while math.gcd(u, m) != 1:
        u += step
    return modinv(u, m)


@dataclass
class ColumnReduction:
    """Result of column-reducing [[A], [I]] over Z/m.

    kernel: C x t matrix whose columns generate {x : A x == 0 mod m}.
    pivots: list of (row, g); g | m is the pivot entry after normalization.
    solutions / solvable: per-column particular solutions of A x == b for the
    rhs matrix passed to column_reduce.  When pivot columns are kept, further
    systems can be solved with :meth:`solve`.
    """

    m: int
    shape: tuple
    kernel: np.ndarray
    pivots: list
    pivot_tops: Optional[list] = None
    pivot_bottoms: Optional[list] = None
    solutions: Optional[np.ndarray] = None
    solvable: Optional[np.ndarray] = None

    def kernel_size(self) -> int:
        size = self.m ** (self.shape[1] - len(self.pivots))
        for _, g in self.pivots:
            size *= g
        return size

    def image_size(self) -> int:
        size = 1
        for _, g in self.pivots:
            size *= self.m // g
        return size

    def solve(self, b: np.ndarray) -> Optional[np.ndarray]:
        """One solution of A x == b mod m, or None."""
        if self.pivot_tops is None:
            raise ValueError("column_reduce was run without keep_pivots")
        m = self.m
        b = np.asarray(b, dtype=np.int64) % m
        x = np.zeros(self.shape[1], dtype=np.int64)
        for idx, (row, g) in enumerate(self.pivots):
            t = int(b[row]) // g
            if t:
                b = (b - t * self.pivot_tops[idx]) % m
                x = (x + t * self.pivot_bottoms[idx]) % m
            if b[row] % m:
                return None
        if np.any(b % m):
            return None
        return x


def column_reduce(A: np.ndarray, m: int, rhs: Optional[np.ndarray] = None,
                  keep_pivots: bool = False) -> ColumnReduction:
    A = np.ascontiguousarray(np.asarray(A, dtype=np.int64) % m)
    R, C = A.shape
    if m == 1:
        u = rhs.shape[1] if rhs is not None else 0
        return ColumnReduction(
            m, (R, C), np.zeros((C, 0), dtype=np.int64), [],
            [] if keep_pivots else None, [] if keep_pivots else None,
            np.zeros((C, u), dtype=np.int64) if rhs is not None else None,
            np.ones(u, dtype=bool) if rhs is not None else None)
    if m == 2 and R * C > 20_000 and not keep_pivots:
        return _column_reduce_gf2(A, rhs)
    return _column_reduce_general(A, m, rhs, keep_pivots)


def _column_reduce_general(A, m, rhs, keep_pivots):
    R, C = A.shape
    pad = min(R, C) + 1
    top = np.concatenate([A, np.zeros((R, pad), dtype=np.int64)], axis=1)
    bottom = np.concatenate([np.eye(C, dtype=np.int64),
                             np.zeros((C, pad), dtype=np.int64)], axis=1)
    ncols = C
    active = list(range(C))
    if rhs is not None:
        rtop = np.asarray(rhs, dtype=np.int64) % m
        rbot = np.zeros((C, rtop.shape[1]), dtype=np.int64)
    pivots: list = []
    pivot_tops: list = []
    pivot_bottoms: list = []

    for r in range(R):
        if not active:
            if rhs is None:
                break
            continue
        act = np.array(active, dtype=np.int64)
        v = top[r, act] % m
        nz = np.nonzero(v)[0]
        if not len(nz):
            continue
        gcol = math.gcd(int(np.gcd.reduce(v[nz])), m)
        gsel = np.gcd(v[nz], m)
        p = int(act[nz[int(np.argmin(gsel))]])
        cur = math.gcd(int(top[r, p]), m)
        if cur != gcol:
            # unimodular 2-column combines until the pivot generates the ideal
            for j in nz:
                cj = int(act[j])
                if cj == p:
                    continue
                ep, ej = int(top[r, p]), int(top[r, cj])
                g, s, t = exgcd(ep, ej)
                if math.gcd(g, m) >= cur:
                    continue
                newp_t = (s * top[r:, p] + t * top[r:, cj]) % m
                newj_t = ((ep // g) * top[r:, cj] - (ej // g) * top[r:, p]) % m
                top[r:, p], top[r:, cj] = newp_t, newj_t
                newp_b = (s * bottom[:, p] + t * bottom[:, cj]) % m
                newj_b = ((ep // g) * bottom[:, cj] - (ej // g) * bottom[:, p]) % m
                bottom[:, p], bottom[:, cj] = newp_b, newj_b
                cur = math.gcd(g, m)
                if cur == gcol:
                    break
        w = unit_lift(int(top[r, p]), m)
        if w != 1:
            top[r:, p] = (top[r:, p] * w) % m
            bottom[:, p] = (bottom[:, p] * w) % m
        g = int(top[r, p])
        rest = np.array([c for c in active if c != p], dtype=np.int64)
        if len(rest):
            coef = (top[r, rest] % m) // g
            upd = np.nonzero(coef)[0]
            if len(upd):
                cols = rest[upd]
                top[r:, cols] = (top[r:, cols] - np.outer(top[r:, p], coef[upd])) % m
                bottom[:, cols] = (bottom[:, cols] - np.outer(bottom[:, p], coef[upd])) % m
        if rhs is not None:
            coef = (rtop[r] % m) // g
            upd = np.nonzero(coef)[0]
            if len(upd):
                rtop[:, upd] = (rtop[:, upd] - np.outer(top[:R, p], coef[upd])) % m
                rbot[:, upd] = (rbot[:, upd] - np.outer(bottom[:C, p], coef[upd])) % m
        active = [c for c in active if c != p]
        if g > 1:
            # the annihilator (m/g) * pivot column stays in play
            if ncols == top.shape[1]:
                grow = C + 1
                top = np.concatenate([top, np.zeros((R, grow), dtype=np.int64)], axis=1)
                bottom = np.concatenate([bottom, np.zeros((C, grow), dtype=np.int64)], axis=1)
            q = m // g
            top[r:, ncols] = (q * top[r:, p]) % m
            bottom[:, ncols] = (q * bottom[:, p]) % m
            active.append(ncols)
            ncols += 1
        pivots.append((r, g))
        if keep_pivots:
            pivot_tops.append(top[:R, p].copy())
            pivot_bottoms.append(bottom[:C, p].copy())

    act = np.array(active, dtype=np.int64)
    if len(act):
        kernel = bottom[:C, act] % m
        keep = np.any(kernel, axis=0)
        kernel = kernel[:, keep]
    else:
        kernel = np.zeros((C, 0), dtype=np.int64)
    sols = ok = None
    if rhs is not None:
        ok = ~np.any(rtop % m, axis=0)
        sols = (-rbot) % m
    return ColumnReduction(m, (R, C), kernel, pivots,
                           pivot_tops if keep_pivots else None,
                           pivot_bottoms if keep_pivots else None,
                           sols, ok)


def _column_reduce_gf2(A, rhs):
    """Bit-packed GF(2) path; pivots are always units, so no annihilators."""
    R, C = A.shape
    W = (R + 63) // 64
    Wb = (C + 63) // 64
    bits = np.zeros((C, W * 64), dtype=np.uint8)
    bits[:, :R] = (A % 2).astype(np.uint8).T
    tops = np.packbits(bits, axis=1, bitorder="little").view(np.uint64).reshape(C, W).copy()
    bbits = np.zeros((C, Wb * 64), dtype=np.uint8)
    bbits[np.arange(C), np.arange(C)] = 1
    bots = np.packbits(bbits, axis=1, bitorder="little").view(np.uint64).reshape(C, Wb).copy()
    if rhs is not None:
        u = rhs.shape[1]
        rbits = np.zeros((u, W * 64), dtype=np.uint8)
        rbits[:, :R] = (np.asarray(rhs, dtype=np.int64) % 2).astype(np.uint8).T
        rtop = np.packbits(rbits, axis=1, bitorder="little").view(np.uint64).reshape(u, W).copy()
        rbot = np.zeros((u, Wb), dtype=np.uint64)
    alive = np.ones(C, dtype=bool)
    pivots = []
    for r in range(R):
        word, bit = divmod(r, 64)
        mask = np.uint64(1) << np.uint64(bit)
        hit = (tops[:, word] & mask) != 0
        idx = np.nonzero(alive & hit)[0]
        if not len(idx):
            continue
        p = int(idx[0])
        rest = idx[1:]
        if len(rest):
            tops[rest] ^= tops[p]
            bots[rest] ^= bots[p]
        if rhs is not None:
            rsel = np.nonzero((rtop[:, word] & mask) != 0)[0]
            if len(rsel):
                rtop[rsel] ^= tops[p]
                rbot[rsel] ^= bots[p]
        alive[p] = False
        pivots.append((r, 1))
    kern_cols = np.nonzero(alive)[0]
    kernel = np.zeros((C, len(kern_cols)), dtype=np.int64)
    for out, j in enumerate(kern_cols):
        kernel[:, out] = _unpack_bits(bots[j], C)
    if kernel.size:
        kernel = kernel[:, np.any(kernel, axis=0)]
    sols = ok = None
    if rhs is not None:
        ok = ~np.any(rtop, axis=1)
        sols = np.zeros((C, rhs.shape[1]), dtype=np.int64)
        for j in range(rhs.shape[1]):
            sols[:, j] = _unpack_bits(rbot[j], C)
    return ColumnReduction(2, (R, C), kernel, pivots, None, None, sols, ok)


def _unpack_bits(words: np.ndarray, n: int) -> np.ndarray:
    raw = np.unpackbits(words.view(np.uint8), bitorder="little")[:n]
    return raw.astype(np.int64)


def kernel_mod(A: np.ndarray, m: int) -> np.ndarray:
    """Column generators of {x : A x == 0 mod m}."""
    return column_reduce(A, m).kernel


def solve_mod(A: np.ndarray, b: np.ndarray, m: int) -> Optional[np.ndarray]:
    """One solution of A x == b mod m, or None if inconsistent."""
    b = np.asarray(b, dtype=np.int64).reshape(-1, 1)
    red = column_reduce(A, m, rhs=b)
    if not bool(red.solvable[0]):
        return None
    return red.solutions[:, 0]


# -- Howell form of a row span ------------------------------------------------


def howell_form(rows: np.ndarray, m: int) -> tuple[np.ndarray, list]:
    """Canonical Howell basis of the row span of `rows` over Z/m.

    Returns (H, pivots); pivots is a list of (index_in_H, column, entry).
    Reduction against H in pivot order yields canonical coset
    representatives, which is what makes chosen cocycle representatives
    reproducible across runs.
    """
    rows = np.asarray(rows, dtype=np.int64) % m
    ncols = rows.shape[1]
    echelon: dict = {}  # pivot column -> row vector (pivot normalized)
    queue = [rows[i] for i in range(rows.shape[0]) if np.any(rows[i] % m)]
    while queue:
        v = queue.pop() % m
        while True:
            nz = np.nonzero(v)[0]
            if not len(nz):
                break
            col = int(nz[0])
            if col not in echelon:
                w = unit_lift(int(v[col]), m)
                v = (v * w) % m
                g = int(v[col])
                echelon[col] = v
                if g > 1:
                    queue.append(((m // g) * v) % m)
                break
            piv = echelon[col]
            g = int(piv[col])
            e = int(v[col])
            if e % g == 0:
                v = (v - (e // g) * piv) % m
                continue
            gg, s, t = exgcd(g, e)
            new = (s * piv + t * v) % m
            rem = ((g // gg) * v - (e // gg) * piv) % m
            w = unit_lift(int(new[col]), m)
            new = (new * w) % m
            gnew = int(new[col])
            echelon[col] = new
            if gnew > 1:
                queue.append(((m // gnew) * new) % m)
            v = rem
    cols = sorted(echelon)
    # full reduction above pivots for canonicity
    for i, ci in enumerate(cols):
        for cj in cols:
            if cj <= ci:
                continue
            piv = echelon[cj]
            g = int(piv[cj])
            t = int(echelon[ci][cj]) // g
            if t:
                echelon[ci] = (echelon[ci] - t * piv) % m
    if cols:
        H = np.stack([echelon[c] for c in cols])
    else:
        H = np.zeros((0, ncols), dtype=np.int64)
    pivots = [(i, c, int(echelon[c][c])) for i, c in enumerate(cols)]
    return H, pivots


def coset_reduce(H: np.ndarray, pivots: list, x: np.ndarray, m: int) -> np.ndarray:
    """Canonical representative of x modulo the row span of a Howell form."""
    v = np.asarray(x, dtype=np.int64) % m
    for i, col, g in pivots:
        t = int(v[col]) // g
        if t:
            v = (v - t * H[i]) % m
    return v


def span_contains(H: np.ndarray, pivots: list, x: np.ndarray, m: int) -> bool:
    return not np.any(coset_reduce(H, pivots, x, m))


# -- Smith normal form --------------------------------------------------------


def snf_left_mod(rel: np.ndarray, m: int) -> tuple[list, np.ndarray, np.ndarray]:
    """SNF of the lattice L = columnspan(rel) + m*Z^s, with left transform.

    Returns (diag, U, Uinv mod m): diag has s entries, each dividing m, with
    diag[i] | diag[i+1]; Z^s / L is the direct sum of Z/diag[i], and the
    coordinates of w in that decomposition are (U @ w) mod diag.  Columns of
    Uinv are lattice-basis representatives of the summand generators.
    """
    A = np.asarray(rel, dtype=np.int64) % m
    s = A.shape[0]
    # pad with zero columns so the diagonal always has s slots
    A = np.concatenate([A, np.zeros((s, s), dtype=np.int64)], axis=1)
    c = A.shape[1]
    U = np.eye(s, dtype=np.int64)
    Uinv = np.eye(s, dtype=np.int64)

    def row_combine(i, j, a, b, cc, d):
        # (row_i, row_j) <- (a,b; cc,d) @ (row_i, row_j); det must be +-1
        A[i], A[j] = (a * A[i] + b * A[j]) % m, (cc * A[i] + d * A[j]) % m
        U[i], U[j] = (a * U[i] + b * U[j]) % m, (cc * U[i] + d * U[j]) % m
        det = a * d - b * cc
        ci, cj = Uinv[:, i].copy(), Uinv[:, j].copy()
        Uinv[:, i] = (det * (d * ci - cc * cj)) % m
        Uinv[:, j] = (det * (-b * ci + a * cj)) % m

    def row_sub(r, t, q):
        A[r] = (A[r] - q * A[t]) % m
        U[r] = (U[r] - q * U[t]) % m
        Uinv[:, t] = (Uinv[:, t] + q * Uinv[:, r]) % m

    def normalize_pivot(t):
        w = unit_lift(int(A[t, t]), m)
        if w != 1:
            A[:, t] = (A[:, t] * w) % m

    t = 0
    while t < s:
        sub = A[t:, t:] % m
        nzr, nzc = np.nonzero(sub)
        if not len(nzr):
            break
        gvals = np.gcd(sub[nzr, nzc], m)
        k = int(np.argmin(gvals))
        pr, pc = int(nzr[k]) + t, int(nzc[k]) + t
        if pr != t:
            A[[t, pr]] = A[[pr, t]]
            U[[t, pr]] = U[[pr, t]]
            Uinv[:, [t, pr]] = Uinv[:, [pr, t]]
        if pc != t:
            A[:, [t, pc]] = A[:, [pc, t]]
        normalize_pivot(t)
        while True:
            g = int(A[t, t])
            dirty = False
            for r in range(t + 1, s):
                e = int(A[r, t])
                if not e:
                    continue
                if e % g == 0:
                    row_sub(r, t, e // g)
                else:
                    gg, x, y = exgcd(g, e)
                    row_combine(t, r, x, y, -(e // gg), g // gg)
                    normalize_pivot(t)
                    g = int(A[t, t])
                    dirty = True
            for cc in range(t + 1, c):
                e = int(A[t, cc])
                if not e:
                    continue
                if e % g == 0:
                    A[:, cc] = (A[:, cc] - (e // g) * A[:, t]) % m
                else:
                    gg, x, y = exgcd(g, e)
                    newt = (x * A[:, t] + y * A[:, cc]) % m
                    newc = ((g // gg) * A[:, cc] - (e // gg) * A[:, t]) % m
                    A[:, t], A[:, cc] = newt, newc
                    normalize_pivot(t)
                    g = int(A[t, t])
                    dirty = True
            if not dirty and not np.any(A[t + 1:, t] % m) and not np.any(A[t, t + 1:] % m):
                break
        t += 1

    diag = [math.gcd(int(A[i, i]), m) if int(A[i, i]) else m for i in range(s)]
    # enforce the divisibility chain
    changed = True
    while changed:
        changed = False
        for i in range(s - 1):
            if diag[i + 1] % diag[i]:
                g = math.gcd(diag[i], diag[i + 1])
                l = diag[i] // g * diag[i + 1]
                diag[i], diag[i + 1] = g, math.gcd(l, m) if l % m else m
                _chain_fix(A, U, Uinv, i, m)
                di = int(A[i, i])
                dj = int(A[i + 1, i + 1])
                diag[i] = math.gcd(di, m) if di else m
                diag[i + 1] = math.gcd(dj, m) if dj else m
                changed = True
    return diag, U % m, Uinv % m


def _chain_fix(A, U, Uinv, i, m):
    """Local repair of the SNF divisibility chain at position i."""
    s = A.shape[0]
    A[:, i] = (A[:, i] + A[:, i + 1]) % m
    a, b = int(A[i, i]), int(A[i + 1, i])
    a = a if a else m
    g, x, y = exgcd(a, b)
    A[i], A[i + 1] = (x * A[i] + y * A[i + 1]) % m, \
                     ((-(b // g)) * A[i] + (a // g) * A[i + 1]) % m
    U[i], U[i + 1] = (x * U[i] + y * U[i + 1]) % m, \
                     ((-(b // g)) * U[i] + (a // g) * U[i + 1]) % m
    det = x * (a // g) + y * (b // g)
    ci, cj = Uinv[:, i].copy(), Uinv[:, i + 1].copy()
    Uinv[:, i] = (det * ((a // g) * ci + (b // g) * cj)) % m
    Uinv[:, i + 1] = (det * (-y * ci + x * cj)) % m
    w = unit_lift(int(A[i, i]), m)
    if w != 1:
        A[:, i] = (A[:, i] * w) % m
    g = math.gcd(int(A[i, i]), m)
    g = g if g else m
    for cc in range(A.shape[1]):
        if cc == i:
            continue
        e = int(A[i, cc])
        if e:
            A[:, cc] = (A[:, cc] - (e // g) * A[:, i]) % m
    for r in range(s):
        if r == i:
            continue
        e = int(A[r, i])
        if e:
            q = e // g
            A[r] = (A[r] - q * A[i]) % m
            U[r] = (U[r] - q * U[i]) % m
            Uinv[:, i] = (Uinv[:, i] + q * Uinv[:, r]) % m


def snf_int(mat) -> list:
    """Diagonal of the integer Smith normal form; small matrices, exact.

    Python-int arithmetic, no overflow; meant for presentation-sized relation
    matrices, not the mod-m pipeline.
    """
    A = [[int(x) for x in row] for row in mat]
    rows = len(A)
    cols = len(A[0]) if rows else 0
    diag = []
    t = 0
    while t < min(rows, cols):
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                if A[i][j] and (best is None or abs(A[i][j]) < abs(A[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        bi, bj = best
        A[t], A[bi] = A[bi], A[t]
        for row in A:
            row[t], row[bj] = row[bj], row[t]
        while True:
            done = True
            for i in range(t + 1, rows):
                if A[i][t]:
                    q = A[i][t] // A[t][t]
                    for j in range(t, cols):
                        A[i][j] -= q * A[t][j]
                    if A[i][t]:
                        A[t], A[i] = A[i], A[t]
                        done = False
            for j in range(t + 1, cols):
                if A[t][j]:
                    q = A[t][j] // A[t][t]
                    for i in range(t, rows):
                        A[i][j] -= q * A[i][t]
                    if A[t][j]:
                        for row in A:
                            row[t], row[j] = row[j], row[t]
                        done = False
            if done:
                break
        d = abs(A[t][t])
        ok = True
        for i in range(t + 1, rows):
            for j in range(t + 1, cols):
                if A[i][j] % d:
                    for jj in range(t, cols):
                        A[t][jj] += A[i][jj]
                    ok = False
                    break
            if not ok:
                break
        if ok:
            diag.append(d)
            t += 1
    return diag
