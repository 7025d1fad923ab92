from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from glsmkit.lattice import (
    congruence_kernel,
    invariant_factors,
    mat_mul,
    preimage_lattice_basis,
    rational_rank,
    smith_normal_form,
    solve_congruences,
    solve_rational_system,
)


def det(mat):
    a = [[Fraction(x) for x in row] for row in mat]
    n = len(a)
    sign = 1
    for col in range(n):
        piv = next((i for i in range(col, n) if a[i][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            sign = -sign
        for i in range(col + 1, n):
            if a[i][col] != 0:
                c = a[i][col] / a[col][col]
                a[i] = [x - c * y for x, y in zip(a[i], a[col])]
    out = Fraction(sign)
    for i in range(n):
        out *= a[i][i]
    return out


def check_snf(mat):
    d, u, v = smith_normal_form(mat)
    assert mat_mul(mat_mul(u, mat), v) == d
    assert abs(det(u)) == 1
    assert abs(det(v)) == 1
    diag = [d[i][i] for i in range(min(len(d), len(d[0]) if d else 0))]
    for i in range(len(diag) - 1):
        if diag[i + 1] != 0:
            assert diag[i] != 0 and diag[i + 1] % diag[i] == 0
    assert all(x >= 0 for x in diag)
    for i in range(len(d)):
        for j in range(len(d[0])):
            if i != j:
                assert d[i][j] == 0
    return diag


def test_snf_examples():
    assert check_snf([[1, 0], [0, 1]]) == [1, 1]
    assert check_snf([[2, 0], [0, 3]]) == [1, 6]
    # d1 = gcd of entries = 2, d1*d2 = gcd of 2x2 minors = 4, product = |det| = 624
    assert check_snf([[2, 4, 4], [-6, 6, 12], [10, 4, 16]]) == [2, 2, 156]
    assert check_snf([[1, 1, 1, 1, 1, -5]]) == [1]
    assert check_snf([[0, 0], [0, 0]]) == [0, 0]


@settings(max_examples=80)
@given(
    st.lists(
        st.lists(st.integers(-9, 9), min_size=1, max_size=4),
        min_size=1,
        max_size=4,
    ).filter(lambda rows: len({len(r) for r in rows}) == 1)
)
def test_snf_random(rows):
    check_snf(rows)


def test_invariant_factors():
    assert invariant_factors([[1, 1], [1, -1]]) == [1, 2]
    assert invariant_factors([[2, 2]]) == [2]
    assert invariant_factors([[1, -3]]) == [1]


def test_rational_rank():
    assert rational_rank([[1, 2], [2, 4]]) == 1
    assert rational_rank([[1, 0], [0, 1]]) == 2
    assert rational_rank([[0]]) == 0


def test_solve_rational_system():
    sol = solve_rational_system([[2, 0], [1, 1]], [Fraction(3), Fraction(2)])
    assert sol == [Fraction(3, 2), Fraction(1, 2)]
    assert solve_rational_system([[1, 1], [2, 2]], [Fraction(1), Fraction(3)]) is None


def test_solve_congruences_cubic():
    # <rho_i, lam> = c_i/d_w (mod 1) for the one-variable cubic model
    sol = solve_congruences([[1], [-3]], [Fraction(1, 3), Fraction(0)])
    assert sol == [Fraction(1, 3)]


def test_solve_congruences_inconsistent():
    # 2*lam = 1/2 and 2*lam = 0 (mod 1) have no common solution
    assert solve_congruences([[2], [2]], [Fraction(1, 2), Fraction(0)]) is None


def test_solve_congruences_trivial():
    sol = solve_congruences([[1], [1]], [Fraction(0), Fraction(0)])
    assert sol == [Fraction(0)]


@settings(max_examples=60)
@given(
    st.integers(1, 3),
    st.integers(1, 3),
    st.data(),
)
def test_solve_congruences_verifies(m, n, data):
    mat = [[data.draw(st.integers(-6, 6)) for _ in range(n)] for _ in range(m)]
    rhs = [Fraction(data.draw(st.integers(-6, 6)), data.draw(st.integers(1, 6))) for _ in range(m)]
    sol = solve_congruences(mat, rhs)
    if sol is not None:
        for i in range(m):
            val = sum(Fraction(mat[i][j]) * sol[j] for j in range(n)) - rhs[i]
            assert val.denominator == 1


def test_congruence_kernel_cubic_support():
    # kernel of multiplication by -3 in Q/Z has the three cube-root parameters
    ker = congruence_kernel([[-3]])
    assert ker == [(Fraction(0),), (Fraction(1, 3),), (Fraction(2, 3),)]


def test_congruence_kernel_full_lattice():
    ker = congruence_kernel([[1, 0], [0, 1]])
    assert ker == [(Fraction(0), Fraction(0))]


def test_congruence_kernel_infinite():
    with pytest.raises(ValueError):
        congruence_kernel([[1, 1]])


def test_preimage_lattice_basis():
    basis = preimage_lattice_basis([[-3]])
    assert basis == [[Fraction(1, 3)]] or basis == [[Fraction(-1, 3)]]
    with pytest.raises(ValueError):
        preimage_lattice_basis([[0]])


@settings(max_examples=40)
@given(st.integers(1, 4), st.data())
def test_congruence_kernel_matches_bruteforce(n, data):
    # square full-rank matrices with small entries
    mat = [[data.draw(st.integers(-4, 4)) for _ in range(n)] for _ in range(n)]
    if rational_rank(mat) < n:
        return
    ker = congruence_kernel(mat)
    # every member solves the congruence; group order equals |det|
    for lam in ker:
        for row in mat:
            v = sum(Fraction(row[j]) * lam[j] for j in range(n))
            assert v.denominator == 1
    assert len(ker) == abs(det(mat))
