"""Exact integer/rational linear algebra for lattice and congruence problems.

Provides Smith normal form with unimodular transforms and the solvers built
on it: rational solutions of congruence systems M*x = b (mod Z), enumeration
of the finite kernel of a full-rank map (Q/Z)^k -> (Q/Z)^m, and plain
rational Gaussian elimination.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product

from .scalars import frac_mod1


def identity_matrix(n: int) -> list[list[int]]:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def mat_mul(a, b):
    return [[sum(a[i][t] * b[t][j] for t in range(len(b))) for j in range(len(b[0]))] for i in range(len(a))]


def mat_vec(a, v):
    return [sum(row[j] * v[j] for j in range(len(v))) for row in a]


def transpose(a):
    return [list(col) for col in zip(*a)]


def smith_normal_form(mat: list[list[int]]) -> tuple[list[list[int]], list[list[int]], list[list[int]]]:
    """Return (D, U, V) with U*mat*V = D, U and V unimodular.

    D is diagonal with nonnegative entries d_1 | d_2 | ... followed by zeros.
    """
    a = [list(row) for row in mat]
    m = len(a)
    n = len(a[0]) if m else 0
    u = identity_matrix(m)
    v = identity_matrix(n)

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def addmul_row(dst, src, c):
        a[dst] = [x + c * y for x, y in zip(a[dst], a[src])]
        u[dst] = [x + c * y for x, y in zip(u[dst], u[src])]

    def addmul_col(dst, src, c):
        for row in a:
            row[dst] += c * row[src]
        for row in v:
            row[dst] += c * row[src]

    def negate_row(i):
        a[i] = [-x for x in a[i]]
        u[i] = [-x for x in u[i]]

    t = 0
    while t < min(m, n):
        # pick smallest nonzero pivot in the remaining block
        pivot = None
        for i in range(t, m):
            for j in range(t, n):
                if a[i][j] != 0 and (pivot is None or abs(a[i][j]) < abs(a[pivot[0]][pivot[1]])):
                    pivot = (i, j)
        if pivot is None:
            break
        swap_rows(t, pivot[0])
        swap_cols(t, pivot[1])
        while True:
            done = True
            for i in range(t + 1, m):
                if a[i][t] % a[t][t] != 0:
                    addmul_row(i, t, -(a[i][t] // a[t][t]))
                    if a[i][t] != 0:
                        swap_rows(t, i)
                        done = False
                elif a[i][t] != 0:
                    addmul_row(i, t, -(a[i][t] // a[t][t]))
            for j in range(t + 1, n):
                if a[t][j] % a[t][t] != 0:
                    addmul_col(j, t, -(a[t][j] // a[t][t]))
                    if a[t][j] != 0:
                        swap_cols(t, j)
                        done = False
                elif a[t][j] != 0:
                    addmul_col(j, t, -(a[t][j] // a[t][t]))
            if done:
                break
        # enforce divisibility of the remaining block by the pivot
        stumble = None
        for i in range(t + 1, m):
            for j in range(t + 1, n):
                if a[i][j] % a[t][t] != 0:
                    stumble = i
                    break
            if stumble is not None:
                break
        if stumble is not None:
            addmul_row(t, stumble, 1)
            continue
        if a[t][t] < 0:
            negate_row(t)
        t += 1

    return a, u, v


def invariant_factors(mat: list[list[int]]) -> list[int]:
    d, _, _ = smith_normal_form(mat)
    return [d[i][i] for i in range(min(len(d), len(d[0]) if d else 0)) if d[i][i] != 0]


def rational_rank(mat) -> int:
    """Rank over Q (works for Fraction or int entries)."""
    a = [[Fraction(x) for x in row] for row in mat]
    rank = 0
    rows = len(a)
    cols = len(a[0]) if rows else 0
    col = 0
    for col in range(cols):
        piv = next((i for i in range(rank, rows) if a[i][col] != 0), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        inv = a[rank][col]
        a[rank] = [x / inv for x in a[rank]]
        for i in range(rows):
            if i != rank and a[i][col] != 0:
                c = a[i][col]
                a[i] = [x - c * y for x, y in zip(a[i], a[rank])]
        rank += 1
        if rank == rows:
            break
    return rank


def solve_rational_system(mat, rhs) -> list[Fraction] | None:
    """One exact solution of mat*x = rhs over Q, or None if inconsistent."""
    rows = len(mat)
    cols = len(mat[0]) if rows else 0
    a = [[Fraction(x) for x in row] + [Fraction(rhs[i])] for i, row in enumerate(mat)]
    pivots = []
    rank = 0
    for col in range(cols):
        piv = next((i for i in range(rank, rows) if a[i][col] != 0), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        inv = a[rank][col]
        a[rank] = [x / inv for x in a[rank]]
        for i in range(rows):
            if i != rank and a[i][col] != 0:
                c = a[i][col]
                a[i] = [x - c * y for x, y in zip(a[i], a[rank])]
        pivots.append(col)
        rank += 1
        if rank == rows:
            break
    for i in range(rank, rows):
        if a[i][cols] != 0:
            return None
    x = [Fraction(0)] * cols
    for i, col in enumerate(pivots):
        x[col] = a[i][cols]
    return x


def solve_congruences(mat: list[list[int]], rhs: list[Fraction]) -> list[Fraction] | None:
    """Solve mat*x = rhs (mod Z^m) for rational x, entries reduced to [0,1).

    mat is an m x n integer matrix, rhs a rational vector of length m.
    Returns one solution or None when the congruence system is inconsistent.
    """
    d, u, v = smith_normal_form(mat)
    m = len(mat)
    n = len(mat[0]) if m else 0
    beta = [sum(Fraction(u[i][j]) * rhs[j] for j in range(m)) for i in range(m)]
    mu = [Fraction(0)] * n
    for i in range(min(m, n)):
        di = d[i][i]
        if di != 0:
            mu[i] = beta[i] / di
        elif frac_mod1(beta[i]) != 0:
            return None
    for i in range(n, m):
        if frac_mod1(beta[i]) != 0:
            return None
    x = [sum(Fraction(v[i][j]) * mu[j] for j in range(n)) for i in range(n)]
    return [frac_mod1(c) for c in x]


def congruence_kernel(mat: list[list[int]]) -> list[tuple[Fraction, ...]]:
    """All x in (Q/Z)^n with mat*x = 0 (mod Z^m), for mat of full column rank.

    Raises ValueError when the solution set is infinite (rank < n).
    """
    m = len(mat)
    n = len(mat[0]) if m else 0
    d, _, v = smith_normal_form(mat)
    diag = [d[i][i] for i in range(min(m, n))]
    if len(diag) < n or any(di == 0 for di in diag):
        raise ValueError("congruence kernel is infinite (matrix not of full column rank)")
    out = []
    for combo in product(*[range(di) for di in diag]):
        mu = [Fraction(c, di) for c, di in zip(combo, diag)]
        x = tuple(
            frac_mod1(sum(Fraction(v[i][j]) * mu[j] for j in range(n))) for i in range(n)
        )
        out.append(x)
    return sorted(set(out))


def preimage_lattice_basis(mat: list[list[int]]) -> list[list[Fraction]]:
    """Basis of {x in Q^n : mat*x in Z^m} for mat of full column rank n."""
    m = len(mat)
    n = len(mat[0]) if m else 0
    d, _, v = smith_normal_form(mat)
    diag = [d[i][i] for i in range(min(m, n))]
    if len(diag) < n or any(di == 0 for di in diag):
        raise ValueError("preimage is not a lattice (matrix not of full column rank)")
    return [[Fraction(v[i][j], diag[j]) for i in range(n)] for j in range(n)]
