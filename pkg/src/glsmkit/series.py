"""The I-function engine.

Assembles truncated generating series over the effective degrees of a model:
per-degree hypergeometric factors (two range conventions, plain quotient
target vs potential-aware), exponential insertion factors, z-degree shift
operators, Novikov sign twists, compact-type reports, and exact comparison.

Every coefficient is a z-Laurent polynomial whose coefficients live in the
sector ring attached to the term's degree.
"""

from __future__ import annotations

import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from fractions import Fraction
from math import ceil, factorial, floor, lcm

from .model import GLSMModel, InternalError, model_from_dict, model_hash, model_to_dict
from .rings import (
    CohClass,
    SectorRing,
    build_ring,
    class_from_character,
    class_from_json,
    class_to_json,
    divides_ideal,
)
from .scalars import Cyclo, Scalar, format_rational, parse_rational
from .sectors import Degree, effective_degrees, pairing, sector_of_degree, theta_degree
from .validate import invariants_trivial

THREADS_ENV = "GLSMKIT_THREADS"


class HypothesisError(ValueError):
    """The invariant-triviality hypothesis for the potential-aware series fails."""

    def __init__(self, certificate):
        self.certificate = certificate
        super().__init__(
            "nontrivial invariant monomial on the R-charge-zero coordinates: "
            f"exponent vector {list(certificate)}"
        )


# --------------------------------------------------------------------------
# z-Laurent polynomials with sector-ring coefficients
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class LaurentZ:
    ring: SectorRing
    coeffs: tuple  # sorted tuple of (z-exponent, CohClass), no zero classes

    @staticmethod
    def from_dict(ring: SectorRing, data: dict[int, CohClass]) -> "LaurentZ":
        items = tuple(sorted((e, c) for e, c in data.items() if not c.is_zero()))
        return LaurentZ(ring, items)

    @staticmethod
    def one(ring: SectorRing) -> "LaurentZ":
        return LaurentZ.from_dict(ring, {0: ring.one()})

    @staticmethod
    def from_class(ring: SectorRing, c: CohClass, zexp: int = 0) -> "LaurentZ":
        return LaurentZ.from_dict(ring, {zexp: c})

    def as_dict(self) -> dict[int, CohClass]:
        return dict(self.coeffs)

    def is_zero(self) -> bool:
        return not self.coeffs

    def width(self) -> int:
        if not self.coeffs:
            return 0
        return self.coeffs[-1][0] - self.coeffs[0][0] + 1

    def add(self, other: "LaurentZ") -> "LaurentZ":
        out = self.as_dict()
        for e, c in other.coeffs:
            cur = out.get(e)
            out[e] = c if cur is None else cur + c
        return LaurentZ.from_dict(self.ring, out)

    def mul(self, other: "LaurentZ") -> "LaurentZ":
        out: dict[int, CohClass] = {}
        for e1, c1 in self.coeffs:
            for e2, c2 in other.coeffs:
                e = e1 + e2
                prod = c1 * c2
                cur = out.get(e)
                out[e] = prod if cur is None else cur + prod
        return LaurentZ.from_dict(self.ring, out)

    def scale(self, s: Scalar) -> "LaurentZ":
        return LaurentZ.from_dict(self.ring, {e: c.scale(s) for e, c in self.coeffs})

    def scale_class(self, c: CohClass) -> "LaurentZ":
        return LaurentZ.from_dict(self.ring, {e: v * c for e, v in self.coeffs})

    def shift(self, dz: int) -> "LaurentZ":
        return LaurentZ(self.ring, tuple((e + dz, c) for e, c in self.coeffs))

    def __eq__(self, other):
        if not isinstance(other, LaurentZ):
            return NotImplemented
        return self.ring == other.ring and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.ring, self.coeffs))


def linear_z_factor(ring: SectorRing, cls: CohClass, a: Fraction) -> LaurentZ:
    """The factor (cls + a*z)."""
    return LaurentZ.from_dict(ring, {0: cls, 1: ring.one().scale(a)})


def invert_linear_z_factor(ring: SectorRing, cls: CohClass, a: Fraction) -> LaurentZ:
    """(cls + a*z)^(-1) = sum_j (-1)^j cls^j a^(-j-1) z^(-j-1); finite by nilpotency."""
    if a == 0:
        raise InternalError("denominator factor with zero scalar part")
    out: dict[int, CohClass] = {}
    power = ring.one()
    sign = Fraction(1)
    scalar = Fraction(1) / a
    j = 0
    while not power.is_zero():
        out[-j - 1] = power.scale(sign * scalar)
        power = power * cls
        sign = -sign
        scalar = scalar / a
        j += 1
        if j > ring.dimension + 2:
            raise InternalError("nilpotency bound exceeded while inverting a factor")
    return LaurentZ.from_dict(ring, out)


# --------------------------------------------------------------------------
# insertions
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Insertion:
    """A light-insertion variable: name plus a polynomial in the shared characters."""

    name: str
    poly: tuple  # sorted tuple of (exponent tuple over etas, Fraction coeff)

    @staticmethod
    def from_terms(name: str, terms: dict) -> "Insertion":
        items = tuple(sorted((tuple(k), Fraction(v)) for k, v in terms.items() if v))
        return Insertion(name, items)


def single_character_insertion(name: str, position: int, count: int) -> Insertion:
    mono = tuple(1 if i == position else 0 for i in range(count))
    return Insertion.from_terms(name, {mono: Fraction(1)})


# --------------------------------------------------------------------------
# graded series
# --------------------------------------------------------------------------


TermKey = tuple[Degree, tuple[int, ...]]


@dataclass
class GradedSeries:
    model: GLSMModel
    state: str  # "ambient" | "glsm"
    etas: tuple[tuple[int, ...], ...]
    insertions: tuple[Insertion, ...]
    q_bound: Fraction
    t_order: int
    terms: dict[TermKey, LaurentZ]
    vanished: tuple[TermKey, ...] = ()
    rings: dict = field(default_factory=dict, repr=False)

    @property
    def model_key(self) -> str:
        return model_hash(self.model)

    def sorted_keys(self) -> list[TermKey]:
        return sorted(self.terms, key=lambda key: (theta_degree(self.model, key[0]), key[0], key[1]))

    def ring_for(self, d: Degree) -> SectorRing:
        g = sector_of_degree(self.model, d)
        if g.lam not in self.rings:
            self.rings[g.lam] = build_ring(self.model, g)
        return self.rings[g.lam]

    def restrict(self, q_bound, t_order: int) -> "GradedSeries":
        q_bound = Fraction(q_bound)
        if q_bound > self.q_bound or t_order > self.t_order:
            raise ValueError("restriction region must lie inside the computed truncation")

        def keep(key: TermKey) -> bool:
            return theta_degree(self.model, key[0]) <= q_bound and sum(key[1]) <= t_order

        return replace(
            self,
            q_bound=q_bound,
            t_order=t_order,
            terms={k: v for k, v in self.terms.items() if keep(k)},
            vanished=tuple(k for k in self.vanished if keep(k)),
        )


def _ring_cache_for(m: GLSMModel, degrees) -> dict:
    cache: dict = {}
    for d in degrees:
        g = sector_of_degree(m, d)
        if g.lam not in cache:
            cache[g.lam] = build_ring(m, g)
    return cache


def _int_range(lo: Fraction, hi: Fraction, include_lo: bool, include_hi: bool):
    a = ceil(lo) if include_lo or lo.denominator > 1 else floor(lo) + 1
    b = floor(hi) if include_hi or hi.denominator > 1 else ceil(hi) - 1
    return range(a, b + 1)


def hyper_factor(m: GLSMModel, d: Degree, mode: str, ring: SectorRing) -> LaurentZ:
    """Per-degree hypergeometric factor in the sector ring of d.

    mode "ambient": coordinate i with <d,rho_i> < 0 contributes numerator
    factors over integers nu in [<d,rho_i>, 0), and <d,rho_i> > 0 contributes
    inverted factors over nu in [0, <d,rho_i>).  mode "glsm": coordinates with
    nonzero R-charge instead use [<d,rho_i>, 0] when <d,rho_i> <= 0 and
    (0, <d,rho_i>) when positive; R-charge-zero coordinates keep the ambient
    ranges.  Factors are (class(rho_i) + (<d,rho_i>-nu) z).
    """
    if mode not in ("ambient", "glsm"):
        raise ValueError(f"unknown mode {mode!r}")
    out = LaurentZ.one(ring)
    for i in range(m.r):
        x = pairing(d, m.column(i))
        cls = class_from_character(ring, m.column(i))
        glsm_ranges = mode == "glsm" and m.r_charges[i] != 0
        if glsm_ranges:
            if x <= 0:
                nus = _int_range(x, Fraction(0), True, True)
                inverted = False
            else:
                nus = _int_range(Fraction(0), x, False, False)
                inverted = True
        else:
            if x < 0:
                nus = _int_range(x, Fraction(0), True, False)
                inverted = False
            elif x > 0:
                nus = _int_range(Fraction(0), x, True, False)
                inverted = True
            else:
                continue
        for nu in nus:
            a = x - nu
            if inverted:
                out = out.mul(invert_linear_z_factor(ring, cls, a))
            else:
                out = out.mul(linear_z_factor(ring, cls, a))
        if out.is_zero():
            return out
    return out


def exp_factor(
    m: GLSMModel,
    d: Degree,
    etas,
    insertions,
    t_order: int,
    ring: SectorRing,
) -> dict[tuple[int, ...], LaurentZ]:
    """Multi-variable exponential factor, truncated at total insertion order.

    Expands exp(z^{-1} sum_j t^j p_j(eta_s + z <d, eta_s>)), evaluating each
    shared character eta_s as its divisor class plus the scalar z-shift.
    Returns a map from t-multi-exponent to coefficient.
    """
    evals = [
        linear_z_factor(ring, class_from_character(ring, eta), pairing(d, eta)) for eta in etas
    ]
    shifted = []
    for ins in insertions:
        acc = LaurentZ.from_dict(ring, {})
        for mono, coeff in ins.poly:
            term = LaurentZ.one(ring)
            for s, e in enumerate(mono):
                for _ in range(e):
                    term = term.mul(evals[s])
            acc = acc.add(term.scale(coeff))
        shifted.append(acc.shift(-1))

    powers = []
    for a in shifted:
        row = [LaurentZ.one(ring)]
        for _ in range(t_order):
            row.append(row[-1].mul(a))
        powers.append(row)

    out: dict[tuple[int, ...], LaurentZ] = {}

    def rec(pos: int, remaining: int, alpha: list[int], acc: LaurentZ):
        if pos == len(insertions):
            out[tuple(alpha)] = acc
            return
        for e in range(remaining + 1):
            alpha.append(e)
            nxt = acc.mul(powers[pos][e]).scale(Fraction(1, factorial(e)))
            rec(pos + 1, remaining - e, alpha, nxt)
            alpha.pop()

    rec(0, t_order, [], LaurentZ.one(ring))
    return out


def _series_terms_for_degree(m, d, etas, insertions, t_order, mode, ring):
    hyper = hyper_factor(m, d, mode, ring)
    terms = {}
    vanished = []
    if hyper.is_zero():
        for alpha in _alphas(len(insertions), t_order):
            vanished.append((d, alpha))
        return terms, vanished
    exps = exp_factor(m, d, etas, insertions, t_order, ring)
    for alpha, coeff in sorted(exps.items()):
        value = coeff.mul(hyper)
        if value.is_zero():
            vanished.append((d, alpha))
        else:
            terms[(d, alpha)] = value
    return terms, vanished


def _alphas(nvars: int, t_order: int):
    if nvars == 0:
        return [()]
    out = []

    def rec(pos, remaining, cur):
        if pos == nvars:
            out.append(tuple(cur))
            return
        for e in range(remaining + 1):
            cur.append(e)
            rec(pos + 1, remaining - e, cur)
            cur.pop()

    rec(0, t_order, [])
    return out


def _thread_count(threads: int | None) -> int:
    if threads is not None:
        return max(1, threads)
    env = os.environ.get(THREADS_ENV, "1")
    try:
        return max(1, int(env))
    except ValueError:
        return 1


def _assemble(m, etas, insertions, q_bound, t_order, mode, threads) -> GradedSeries:
    q_bound = Fraction(q_bound)
    etas = tuple(tuple(e) for e in etas)
    insertions = tuple(insertions)
    degrees = effective_degrees(m, q_bound)
    rings = _ring_cache_for(m, degrees)
    n = _thread_count(threads)

    def work(d):
        ring = rings[sector_of_degree(m, d).lam]
        return _series_terms_for_degree(m, d, etas, insertions, t_order, mode, ring)

    if n == 1:
        results = [work(d) for d in degrees]
    else:
        with ThreadPoolExecutor(max_workers=n) as pool:
            results = list(pool.map(work, degrees))

    terms: dict[TermKey, LaurentZ] = {}
    vanished: list[TermKey] = []
    for t, v in results:
        terms.update(t)
        vanished.extend(v)
    state = "glsm" if mode == "glsm" else "ambient"
    return GradedSeries(
        model=m,
        state=state,
        etas=etas,
        insertions=insertions,
        q_bound=q_bound,
        t_order=t_order,
        terms=terms,
        vanished=tuple(sorted(vanished)),
        rings=rings,
    )


def big_i_function(m: GLSMModel, etas=(), insertions=(), q_bound=Fraction(0), t_order=0, threads=None) -> GradedSeries:
    """Truncated big I-function of the GIT quotient (ambient state space)."""
    return _assemble(m, etas, insertions, q_bound, t_order, "ambient", threads)


def glsm_i_function(m: GLSMModel, etas=(), insertions=(), q_bound=Fraction(0), t_order=0, threads=None) -> GradedSeries:
    """Truncated I-function of the model with potential (glsm state space).

    Requires the invariant-triviality hypothesis on the R-charge-zero
    coordinates; refuses with the nontrivial-monomial certificate otherwise.
    """
    keep = [i for i in range(m.r) if m.r_charges[i] == 0]
    res = invariants_trivial(m, keep, include_r_charge=False)
    if not res.trivial:
        raise HypothesisError(res.certificate)
    return _assemble(m, etas, insertions, q_bound, t_order, "glsm", threads)


# --------------------------------------------------------------------------
# operators on series
# --------------------------------------------------------------------------


def z_partial(s: GradedSeries, rho_list, method: str = "by_multiplication") -> GradedSeries:
    """z-shifted degree-weighted multiplication operator, two implementations.

    by_multiplication scales each degree-d term by the product of
    (class(rho) + <d,rho> z); by_insertion appends an auxiliary insertion
    whose polynomial is the product of the rho characters, recomputes to one
    higher order, differentiates at zero and multiplies by z.  "verify" runs
    both and insists they agree.
    """
    if s.state != "ambient":
        raise ValueError("z_partial is defined on ambient-state series")
    rho_list = [tuple(r) for r in rho_list]
    if method == "verify":
        a = z_partial(s, rho_list, "by_multiplication")
        b = z_partial(s, rho_list, "by_insertion")
        diff = series_compare(a, b)
        if diff:
            raise InternalError(f"z_partial methods disagree at {len(diff)} positions")
        return a
    if method == "by_multiplication":
        terms: dict[TermKey, LaurentZ] = {}
        vanished = list(s.vanished)
        for (d, alpha), value in s.terms.items():
            ring = value.ring
            mult = LaurentZ.one(ring)
            for rho in rho_list:
                mult = mult.mul(linear_z_factor(ring, class_from_character(ring, rho), pairing(d, rho)))
            out = value.mul(mult)
            if out.is_zero():
                vanished.append((d, alpha))
            else:
                terms[(d, alpha)] = out
        return replace(s, terms=terms, vanished=tuple(sorted(vanished)))
    if method == "by_insertion":
        etas = list(s.etas)
        positions = []
        for rho in rho_list:
            if rho not in etas:
                etas.append(rho)
            positions.append(etas.index(rho))
        mono = [0] * len(etas)
        for p in positions:
            mono[p] += 1
        aux = Insertion.from_terms("_aux", {tuple(mono): Fraction(1)})
        bigger = _assemble(
            s.model, etas, tuple(s.insertions) + (aux,), s.q_bound, s.t_order + 1, "ambient", None
        )
        terms = {}
        for (d, alpha), value in bigger.terms.items():
            if alpha[-1] != 1 or sum(alpha[:-1]) > s.t_order:
                continue
            terms[(d, alpha[:-1])] = value.shift(1)
        vanished = [
            (d, alpha[:-1])
            for (d, alpha) in bigger.vanished
            if alpha[-1] == 1 and sum(alpha[:-1]) <= s.t_order
        ]
        return replace(s, terms=terms, vanished=tuple(sorted(vanished)))
    raise ValueError(f"unknown z_partial method {method!r}")


def twist_novikov(s: GradedSeries, tau_list) -> GradedSeries:
    """Multiply each degree-d term by the half-turn phase of sum_j <d, tau_j>.

    The phase is represented exactly in the cyclotomic field whose order is
    twice the lcm of the exponent denominators over the stored degrees.
    """
    tau_list = [tuple(t) for t in tau_list]
    if not tau_list:
        return s
    exponents: dict[Degree, Fraction] = {}
    for (d, _alpha) in list(s.terms) + list(s.vanished):
        if d not in exponents:
            exponents[d] = sum((pairing(d, tau) for tau in tau_list), Fraction(0))
    order = 2 * lcm(*[e.denominator for e in exponents.values()]) if exponents else 2
    terms = {}
    for (d, alpha), value in s.terms.items():
        power = exponents[d] * order // 2
        scalar = Cyclo.root_of_unity(order, int(power))
        terms[(d, alpha)] = value.scale(scalar)
    return replace(s, terms=terms)


def scale_sectorwise(s: GradedSeries, factor_of_degree) -> GradedSeries:
    """Scale every term by a per-degree scalar (used by the comparison chains)."""
    terms = {}
    for (d, alpha), value in s.terms.items():
        terms[(d, alpha)] = value.scale(factor_of_degree(d))
    return replace(s, terms=terms)


# --------------------------------------------------------------------------
# compact-type report
# --------------------------------------------------------------------------


def compact_type_report(s: GradedSeries, m: GLSMModel) -> dict:
    """Hypothesis test plus literal endpoint-factor divisibility per term.

    Everything beyond these two checks is reported as unverified.
    """
    charged = m.r_charged_indices()
    keep = [i for i in range(m.r) if m.r_charges[i] == 0]
    hyp = invariants_trivial(m, keep, include_r_charge=False)
    violations = []
    checked = 0
    for (d, alpha), value in sorted(s.terms.items()):
        g = sector_of_degree(m, d)
        ring = value.ring
        factors = [
            class_from_character(ring, m.column(i))
            for i in charged
            if g.action[i] == 0 and pairing(d, m.column(i)) <= 0
        ]
        if not factors:
            continue
        for zexp, cls in value.coeffs:
            checked += 1
            if not divides_ideal(cls, factors):
                violations.append(
                    {
                        "degree": [format_rational(x) for x in d],
                        "t_exponent": list(alpha),
                        "z": zexp,
                    }
                )
    return {
        "state": s.state,
        "hypothesis_holds": bool(hyp.trivial),
        "hypothesis_certificate": list(hyp.certificate) if hyp.certificate else None,
        "divisibility_checked": checked,
        "violations": violations,
        "structurally_vanishing": len(s.vanished),
        "note": "membership beyond the hypothesis and endpoint-factor divisibility is unverified",
    }


# --------------------------------------------------------------------------
# comparison and serialization
# --------------------------------------------------------------------------


def series_compare(a: GradedSeries, b: GradedSeries, variable_map: dict | None = None) -> list[dict]:
    """Exact termwise diff on the intersection of the truncation regions.

    variable_map may rename insertion variables of `b` ({"old": "new"} with
    names matched against a's insertion names).  Returns a list of difference
    records; empty means equal on the common region.
    """
    if a.model_key != b.model_key:
        raise ValueError("series belong to different models")
    rename = (variable_map or {}).get("rename_insertions", variable_map or {})
    names_a = [ins.name for ins in a.insertions]
    names_b = [rename.get(ins.name, ins.name) for ins in b.insertions]
    if sorted(names_a) != sorted(names_b):
        raise ValueError("insertion variables do not match")
    perm = [names_b.index(n) for n in names_a]
    qb = min(a.q_bound, b.q_bound)
    to = min(a.t_order, b.t_order)

    def keys(s: GradedSeries, permute: bool):
        out = {}
        for (d, alpha), v in s.terms.items():
            if theta_degree(s.model, d) <= qb and sum(alpha) <= to:
                key = (d, tuple(alpha[perm[i]] for i in range(len(perm))) if permute else alpha)
                out[key] = v
        return out

    left = keys(a, False)
    right = keys(b, True)
    diffs = []
    for key in sorted(set(left) | set(right)):
        lv = left.get(key)
        rv = right.get(key)
        if lv is not None and rv is not None and lv == rv:
            continue
        lmap = lv.as_dict() if lv is not None else {}
        rmap = rv.as_dict() if rv is not None else {}
        for zexp in sorted(set(lmap) | set(rmap)):
            lc = lmap.get(zexp)
            rc = rmap.get(zexp)
            if lc is not None and rc is not None and lc == rc:
                continue
            diffs.append(
                {
                    "degree": [format_rational(x) for x in key[0]],
                    "t_exponent": list(key[1]),
                    "z": zexp,
                    "left": class_to_json(lc) if lc is not None else None,
                    "right": class_to_json(rc) if rc is not None else None,
                }
            )
    return diffs


def series_to_dict(s: GradedSeries) -> dict:
    terms = []
    for (d, alpha) in s.sorted_keys():
        value = s.terms[(d, alpha)]
        g = sector_of_degree(s.model, d)
        terms.append(
            {
                "degree": [format_rational(x) for x in d],
                "theta_degree": format_rational(theta_degree(s.model, d)),
                "sector_lambda": [format_rational(x) for x in g.lam],
                "t_exponent": list(alpha),
                "z": {str(e): class_to_json(c) for e, c in value.coeffs},
            }
        )
    return {
        "schema": "glsmkit/series/v1",
        "state": s.state,
        "model": model_to_dict(s.model),
        "model_hash": s.model_key,
        "effectivity": "criterion",
        "truncation": {"q_bound": format_rational(s.q_bound), "t_order": s.t_order},
        "etas": [list(e) for e in s.etas],
        "insertions": [
            {
                "name": ins.name,
                "poly": [
                    {"powers": list(mono), "coeff": format_rational(c)} for mono, c in ins.poly
                ],
            }
            for ins in s.insertions
        ],
        "terms": terms,
        "vanished": [
            {"degree": [format_rational(x) for x in d], "t_exponent": list(alpha)}
            for d, alpha in s.vanished
        ],
    }


def series_to_json(s: GradedSeries) -> str:
    return json.dumps(series_to_dict(s), sort_keys=True, separators=(",", ":")) + "\n"


def series_from_dict(data: dict) -> GradedSeries:
    m = model_from_dict(data["model"])
    etas = tuple(tuple(int(x) for x in e) for e in data.get("etas", []))
    insertions = tuple(
        Insertion.from_terms(
            ins["name"],
            {tuple(t["powers"]): parse_rational(t["coeff"]) for t in ins["poly"]},
        )
        for ins in data.get("insertions", [])
    )
    q_bound = parse_rational(data["truncation"]["q_bound"])
    t_order = int(data["truncation"]["t_order"])
    series = GradedSeries(
        model=m,
        state=data["state"],
        etas=etas,
        insertions=insertions,
        q_bound=q_bound,
        t_order=t_order,
        terms={},
        vanished=tuple(
            (
                tuple(parse_rational(x) for x in item["degree"]),
                tuple(item["t_exponent"]),
            )
            for item in data.get("vanished", [])
        ),
    )
    for item in data["terms"]:
        d = tuple(parse_rational(x) for x in item["degree"])
        alpha = tuple(item["t_exponent"])
        ring = series.ring_for(d)
        coeffs = {int(e): class_from_json(ring, cmap) for e, cmap in item["z"].items()}
        series.terms[(d, alpha)] = LaurentZ.from_dict(ring, coeffs)
    return series


def series_from_json(text: str) -> GradedSeries:
    return series_from_dict(json.loads(text))
