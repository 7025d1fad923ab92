"""GIT and lattice combinatorics: semistable supports, inertia sectors,
degree/sector correspondence, effective degrees, ages, and the monomial
support data presenting each sector's cohomology.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .lattice import congruence_kernel, rational_rank, solve_rational_system
from .model import GLSMModel, InternalError
from .rationallp import nonneg_combination
from .scalars import frac_mod1


class DegenerateStabilityError(RuntimeError):
    """The effectivity region is unbounded / a sector family is infinite.

    Happens exactly when some semistable support is rank-deficient, i.e. the
    model fails the genericity axiom.
    """


Degree = tuple[Fraction, ...]


def pairing(d: Degree, xi) -> Fraction:
    """<d, xi> = sum_a d_a * xi_a for a character xi in Z^k (or Q^k)."""
    return sum((Fraction(x) * y for x, y in zip(xi, d)), Fraction(0))


@dataclass(frozen=True, order=True)
class SectorLabel:
    """One inertia sector: canonical group parameter and its action vector."""

    lam: tuple[Fraction, ...]
    action: tuple[Fraction, ...]

    @property
    def fixed_support(self) -> frozenset[int]:
        return frozenset(i for i, a in enumerate(self.action) if a == 0)

    def is_identity(self) -> bool:
        return all(x == 0 for x in self.lam)


def sector_from_lambda(m: GLSMModel, lam) -> SectorLabel:
    lam = tuple(frac_mod1(Fraction(x)) for x in lam)
    action = tuple(frac_mod1(pairing_cols(m, i, lam)) for i in range(m.r))
    return SectorLabel(lam, action)


def pairing_cols(m: GLSMModel, i: int, lam) -> Fraction:
    return sum((Fraction(m.weights[a][i]) * lam[a] for a in range(m.k)), Fraction(0))


def cone_contains(v, gens) -> bool:
    """Is v a nonnegative rational combination of gens?  Exact LP feasibility."""
    return nonneg_combination(list(gens), list(v)) is not None


def semistable_supports(m: GLSMModel) -> list[frozenset[int]]:
    """All inclusion-minimal coordinate sets whose cone contains theta.

    Minimal supports are linearly independent (Caratheodory), so subsets of
    size <= k suffice; results are sorted for determinism.
    """
    cols = m.columns()
    theta = list(m.theta)
    found: list[frozenset[int]] = []
    for size in range(1, m.k + 1):
        for subset in combinations(range(m.r), size):
            s = frozenset(subset)
            if any(prev <= s for prev in found):
                continue
            if cone_contains(theta, [cols[i] for i in subset]):
                found.append(s)
    return sorted(found, key=sorted)


def _support_matrix(m: GLSMModel, support) -> list[list[int]]:
    # rows indexed by the support: row i = column rho_i of the weight matrix
    return [[m.weights[a][i] for a in range(m.k)] for i in sorted(support)]


def inertia_sectors(m: GLSMModel) -> list[SectorLabel]:
    """All group elements whose fixed locus meets the semistable set.

    Enumerated per minimal semistable support as the finite kernel of
    (Q/Z)^k -> (Q/Z)^support; the union is deduplicated by the canonical
    group parameter and sorted.
    """
    out: set[tuple[Fraction, ...]] = set()
    for support in semistable_supports(m):
        mat = _support_matrix(m, support)
        try:
            kernel = congruence_kernel(mat)
        except ValueError:
            raise InternalError(
                f"infinite sector family over support {sorted(i + 1 for i in support)}; "
                "the model violates the genericity axiom"
            ) from None
        out.update(kernel)
    return [sector_from_lambda(m, lam) for lam in sorted(out)]


def sector_of_degree(m: GLSMModel, d: Degree) -> SectorLabel:
    """Label of the inverse of the degree-d monodromy element.

    The series coefficient at degree d lives in this sector; its canonical
    parameter is (-d mod 1) componentwise.
    """
    return sector_from_lambda(m, tuple(-x for x in d))


def age(m: GLSMModel, g: SectorLabel, xi) -> Fraction:
    """Fractional rotation number of the sector element on the character xi."""
    return frac_mod1(pairing(tuple(g.lam), xi))


def theta_degree(m: GLSMModel, d: Degree) -> Fraction:
    return pairing(d, m.theta)


def effective_degrees(m: GLSMModel, bound: Fraction) -> list[Degree]:
    """Degree zero plus all criterion-effective d with 0 < <d,theta> <= bound.

    Criterion: some minimal semistable support S has <d, rho_i> a nonnegative
    integer for every i in S.  For a generic model every minimal support is a
    basis, so the candidates for one S are parameterized by the nonnegative
    integer vectors n = (<d, rho_i>)_{i in S}, and the theta-degree is a
    positive combination of n; the enumeration is finite.
    """
    bound = Fraction(bound)
    if bound < 0:
        return []
    cols = m.columns()
    found: set[Degree] = set()
    for support in semistable_supports(m):
        idx = sorted(support)
        mat = _support_matrix(m, support)
        if len(idx) < m.k or rational_rank(mat) < m.k:
            ray = _kernel_ray(mat, m.k)
            raise DegenerateStabilityError(
                f"unbounded effectivity region over support {[i + 1 for i in idx]}: "
                f"ray {ray} pairs to zero with theta"
            )
        lam = nonneg_combination([cols[i] for i in idx], list(m.theta))
        if lam is None or any(x <= 0 for x in lam):
            raise InternalError(f"minimal support {[i + 1 for i in idx]} lost its positive certificate")
        # theta-degree of the candidate with pairing vector n is sum(lam_i n_i)
        degrees_here: list[Degree] = []
        n = [0] * m.k

        def rec(pos: int, remaining: Fraction):
            if pos == m.k:
                if any(n):
                    sol = solve_rational_system(mat, [Fraction(v) for v in n])
                    if sol is None:
                        raise InternalError("support matrix lost invertibility")
                    degrees_here.append(tuple(sol))
                return
            cap = remaining / lam[pos]
            for val in range(int(cap) + 1):
                n[pos] = val
                rec(pos + 1, remaining - lam[pos] * val)
            n[pos] = 0

        rec(0, bound)
        found.update(degrees_here)
    found.add(tuple(Fraction(0) for _ in range(m.k)))
    ordered = sorted(found, key=lambda d: (theta_degree(m, d), d))
    return [d for d in ordered if theta_degree(m, d) <= bound]


def _kernel_ray(mat, k: int) -> list[Fraction]:
    # a nonzero rational vector in the kernel of the support pairing map
    rows = [[Fraction(x) for x in row] for row in mat]
    pivots: dict[int, int] = {}
    rank = 0
    for col in range(k):
        piv = next((i for i in range(rank, len(rows)) if rows[i][col] != 0), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = rows[rank][col]
        rows[rank] = [x / inv for x in rows[rank]]
        for i in range(len(rows)):
            if i != rank and rows[i][col] != 0:
                c = rows[i][col]
                rows[i] = [x - c * y for x, y in zip(rows[i], rows[rank])]
        pivots[col] = rank
        rank += 1
    free = next((c for c in range(k) if c not in pivots), None)
    if free is None:
        raise InternalError("kernel ray requested for a full-rank matrix")
    v = [Fraction(0)] * k
    v[free] = Fraction(1)
    for col, rowi in pivots.items():
        v[col] = -rows[rowi][free]
    return v


def is_effective(m: GLSMModel, d: Degree) -> bool:
    """The constructive effectivity criterion for a single degree."""
    if all(x == 0 for x in d):
        return True
    if theta_degree(m, d) <= 0:
        return False
    for support in semistable_supports(m):
        vals = [pairing(d, m.column(i)) for i in sorted(support)]
        if all(v.denominator == 1 and v >= 0 for v in vals):
            return True
    return False


def sr_generators(m: GLSMModel, g: SectorLabel) -> list[frozenset[int]]:
    """Minimal T inside the fixed support whose deletion kills all supports.

    These index the Stanley-Reisner generators prod_{i in T} rho_i of the
    sector's cohomology presentation: T must meet every minimal semistable
    support contained in the fixed locus of g.
    """
    fixed = g.fixed_support
    family = [s for s in semistable_supports(m) if s <= fixed]
    if not family:
        raise ValueError("sector is empty: no semistable support inside its fixed locus")
    return _minimal_hitting_sets(family)


def _minimal_hitting_sets(family: list[frozenset[int]]) -> list[frozenset[int]]:
    universe = sorted(set().union(*family))
    results: list[frozenset[int]] = []

    def rec(chosen: frozenset[int], remaining: list[frozenset[int]]):
        if any(prev <= chosen for prev in results):
            return
        unhit = [s for s in remaining if not (s & chosen)]
        if not unhit:
            if not any(prev <= chosen for prev in results):
                results.append(chosen)
            return
        pivot = min(unhit, key=sorted)
        for el in sorted(pivot):
            rec(chosen | {el}, unhit)

    rec(frozenset(), family)
    # prune non-minimal results picked up along different branches
    minimal = [s for s in results if not any(t < s for t in results)]
    return sorted(set(minimal), key=lambda s: (len(s), sorted(s)))
