"""Integer Smith normal form: dense with transforms, and a sparse invariant-only path.

The sparse path removes unit pivots first (Markowitz-style choice of the
pivot with the least fill-in), which for relator matrices eliminates almost
every column; only the leftover core goes through the dense algorithm.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd


@dataclass(frozen=True)
class AbelianInvariants:
    torsion: tuple[int, ...]
    free_rank: int

    def __str__(self) -> str:
        parts = [f"C{k}" for k in self.torsion] + ["Cinf"] * self.free_rank
        return " x ".join(parts) if parts else "1"


def _identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def smith_normal_form(M: list[list[int]]):
    """Return (U, S, V) with U*M*V = S diagonal, U and V unimodular, and
    S[i][i] dividing S[i+1][i+1] (nonnegative)."""
    m = len(M)
    n = len(M[0]) if m else 0
    A = [list(map(int, row)) for row in M]
    U = _identity(m)
    V = _identity(n)

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, k):  # row dst += k * row src
        if k:
            A[dst] = [a + k * b for a, b in zip(A[dst], A[src])]
            U[dst] = [a + k * b for a, b in zip(U[dst], U[src])]

    def add_col(dst, src, k):
        if k:
            for row in A:
                row[dst] += k * row[src]
            for row in V:
                row[dst] += k * row[src]

    for p in range(min(m, n)):
        while True:
            # smallest nonzero entry of the remaining block to (p, p)
            best = None
            for i in range(p, m):
                for j in range(p, n):
                    if A[i][j] and (best is None or abs(A[i][j]) < abs(A[best[0]][best[1]])):
                        best = (i, j)
            if best is None:
                return U, A, V
            swap_rows(p, best[0])
            swap_cols(p, best[1])
            piv = A[p][p]
            dirty = False
            for i in range(p + 1, m):
                add_row(i, p, -(A[i][p] // piv))
                dirty |= A[i][p] != 0
            for j in range(p + 1, n):
                add_col(j, p, -(A[p][j] // piv))
                dirty |= A[p][j] != 0
            if dirty:
                continue
            # pivot must divide the rest of the block
            bad = next(
                ((i, j) for i in range(p + 1, m) for j in range(p + 1, n) if A[i][j] % piv),
                None,
            )
            if bad is None:
                break
            add_row(p, bad[0], 1)
        if A[p][p] < 0:
            A[p] = [-a for a in A[p]]
            U[p] = [-a for a in U[p]]
    return U, A, V


def invariant_factors(M: list[list[int]]) -> list[int]:
    """Nonzero diagonal of the Smith form."""
    _, S, _ = smith_normal_form(M)
    return [S[i][i] for i in range(min(len(S), len(S[0]) if S else 0)) if S[i][i]]


def _dense_invariants(rows: list[dict[int, int]], cols: list[int]) -> list[int]:
    idx = {c: k for k, c in enumerate(cols)}
    M = [[0] * len(cols) for _ in rows]
    for r, row in enumerate(rows):
        for c, v in row.items():
            M[r][idx[c]] = v
    if not M or not cols:
        return []
    return invariant_factors(M)


def sparse_invariant_factors(rows: list[dict[int, int]], ncols: int) -> tuple[int, list[int]]:
    """(number of unit invariant factors removed sparsely, remaining invariant factors)."""
    rows = [dict(r) for r in rows if r]
    alive = set(range(len(rows)))
    col_rows: dict[int, set[int]] = {c: set() for c in range(ncols)}
    for k, r in enumerate(rows):
        for c in r:
            col_rows[c].add(k)
    units = 0
    while True:
        # sparsest column holding a unit, then its shortest unit row
        best = None
        for c in sorted((c for c, rs in col_rows.items() if rs), key=lambda c: (len(col_rows[c]), c)):
            for k in col_rows[c]:
                if abs(rows[k][c]) == 1 and (best is None or (len(rows[k]), k) < (len(rows[best[0]]), best[0])):
                    best = (k, c)
            if best is not None:
                break
        if best is None:
            break
        k, c = best
        prow = rows[k]
        pv = prow[c]
        for j in list(col_rows[c]):
            if j == k:
                continue
            row = rows[j]
            f = row[c] * pv  # pv = +-1, so row - f*prow clears column c
            for cc_, v in prow.items():
                nv = row.get(cc_, 0) - f * v
                if nv:
                    if cc_ not in row:
                        col_rows[cc_].add(j)
                    row[cc_] = nv
                elif cc_ in row:
                    del row[cc_]
                    col_rows[cc_].discard(j)
            if not row:
                alive.discard(j)
        for cc_ in prow:
            col_rows[cc_].discard(k)
        del col_rows[c]
        alive.discard(k)
        rows[k] = {}
        units += 1
    core_rows = [rows[k] for k in sorted(alive) if rows[k]]
    core_cols = sorted(c for c, rs in col_rows.items() if rs)
    return units, _dense_invariants(core_rows, core_cols)


def abelian_invariants_from_rows(rows: list[dict[int, int]], ncols: int) -> AbelianInvariants:
    units, rest = sparse_invariant_factors(rows, ncols)
    rank = units + len(rest)
    torsion = tuple(k for k in rest if k > 1)
    return AbelianInvariants(torsion, ncols - rank)
