"""Model builders and independent direct series for the three special families:
affine phases of a quasihomogeneous singularity, hybrid phases over a weighted
projective stack, and the complete-intersection phase with its sign-twisted
comparison against the ambient hypersurface series.

The direct series code the displayed closed formulas with bare Laurent
arithmetic (no reuse of the engine's factor routines), so the cross-checks
exercise two genuinely independent paths.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from math import ceil, factorial, floor, lcm

from .model import GLSMModel, InputError, InternalError, PotentialPolynomial, parse_monomial_expression
from .rings import build_ring, class_from_character, divides_ideal
from .scalars import format_rational, half_turn, parse_rational
from .sectors import Degree, age, pairing, sector_of_degree
from .series import (
    GradedSeries,
    LaurentZ,
    glsm_i_function,
    invert_linear_z_factor,
    linear_z_factor,
    scale_sectorwise,
    series_compare,
    single_character_insertion,
    twist_novikov,
)

F = Fraction


# --------------------------------------------------------------------------
# affine phases
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class FjrwSpec:
    """Finite diagonal symmetry group data for a quasihomogeneous singularity.

    group_data lists (order r_j, action exponents on x_1..x_n); the first
    generator must be the grading element: r_1 = d_w and c_{i1} = c_i mod d_w.
    """

    n: int
    d_w: int
    r_charges: tuple[int, ...]
    group_data: tuple[tuple[int, tuple[int, ...]], ...]
    potential: str | None = None

    def __post_init__(self):
        if len(self.r_charges) != self.n:
            raise InputError("dimension mismatch: r_charges must have length n")
        if not self.group_data:
            raise InputError("group_data must list at least the grading generator")
        for order, action in self.group_data:
            if order < 1 or len(action) != self.n:
                raise InputError("each group generator needs a positive order and n action exponents")
        r1, action1 = self.group_data[0]
        if r1 != self.d_w:
            raise InputError(f"first generator must have order d_w = {self.d_w}, got {r1}")
        for i in range(self.n):
            if (action1[i] - self.r_charges[i]) % self.d_w != 0:
                raise InputError(
                    f"first generator must act like the grading element: exponent {action1[i]} != c_{i + 1} mod d_w"
                )


def fjrw_build(spec: FjrwSpec) -> GLSMModel:
    """Torus presentation of the affine phase: one p-coordinate per generator."""
    s = len(spec.group_data)
    n = spec.n
    weights = []
    for j, (order, action) in enumerate(spec.group_data):
        row = list(action) + [0] * s
        row[n + j] = -order
        weights.append(tuple(row))
    names = tuple(f"x{i + 1}" for i in range(n)) + tuple(f"p{j + 1}" for j in range(s))
    potential = None
    if spec.potential is not None:
        x_terms = parse_monomial_expression(spec.potential, [f"x{i + 1}" for i in range(n)])
        full: dict[tuple[int, ...], Fraction] = {}
        for exps, coeff in x_terms.items():
            p_part = []
            for order, action in spec.group_data:
                total = sum(action[i] * exps[i] for i in range(n))
                if total % order != 0 or total < 0:
                    raise InputError(
                        "potential is not invariant under the symmetry group: "
                        f"monomial with exponents {exps} has generator degree {total} mod {order}"
                    )
                p_part.append(total // order)
            full[tuple(exps) + tuple(p_part)] = coeff
        potential = PotentialPolynomial.from_dict(full)
    return GLSMModel(
        r=n + s,
        k=s,
        weights=tuple(weights),
        r_charges=tuple(spec.r_charges) + (0,) * s,
        d_w=spec.d_w,
        theta=tuple(F(-1) for _ in range(s)),
        potential=potential,
        assert_critical_proper=True,
        variables=names,
    )


def fjrw_insertions(spec: FjrwSpec):
    """The single light insertion t * (character of weight -r_1 on p_1)."""
    s = len(spec.group_data)
    eta = tuple(-spec.group_data[0][0] if j == 0 else 0 for j in range(s))
    return (eta,), (single_character_insertion("t1", 0, 1),)


def _fjrw_degree_tuples(spec: FjrwSpec, q_bound: Fraction):
    orders = [order for order, _ in spec.group_data]
    s = len(orders)
    out = []
    cur = [0] * s

    def rec(pos: int, used: Fraction):
        if pos == s:
            if cur[0] >= 1:
                out.append(tuple(cur))
            return
        limit = floor((q_bound - used) * orders[pos])
        start = 1 if pos == 0 else 0
        for v in range(start, limit + 1):
            cur[pos] = v
            rec(pos + 1, used + F(v, orders[pos]))
        cur[pos] = 0

    rec(0, F(0))
    return out


def fjrw_direct_series(spec: FjrwSpec, q_bound, t_order: int = 0) -> GradedSeries:
    """The displayed affine-phase series, coded literally.

    Sums over generator exponents (d_1 >= 1, d_j >= 0) whose rotation numbers
    a_i = sum_j c_{ij} d_j / r_j are all non-integral, with coefficient
    e^{t d_1} prod_i prod_{0 < nu <= a_i} z(-a_i + nu)
    / (z^{d_1-1} (d_1-1)! prod_{j>=2} z^{d_j} d_j!)
    on the unit class of the matching sector.
    """
    q_bound = F(q_bound)
    model = fjrw_build(spec)
    etas, insertions = fjrw_insertions(spec)
    orders = [order for order, _ in spec.group_data]
    terms = {}
    rings: dict = {}
    for tup in _fjrw_degree_tuples(spec, q_bound):
        d_eng: Degree = tuple(F(-tup[j], orders[j]) for j in range(len(orders)))
        rotations = [
            sum(F(action[i] * tup[j], orders[j]) for j, (_o, action) in enumerate(spec.group_data))
            for i in range(spec.n)
        ]
        if any(a.denominator == 1 for a in rotations):
            continue
        g = sector_of_degree(model, d_eng)
        if g.lam not in rings:
            rings[g.lam] = build_ring(model, g)
        ring = rings[g.lam]
        coeff = F(1)
        zshift = 0
        for a in rotations:
            for nu in range(1, floor(a) + 1):
                coeff *= -a + nu
                zshift += 1
        d1 = tup[0]
        coeff /= F(factorial(d1 - 1))
        zshift -= d1 - 1
        for dj in tup[1:]:
            coeff /= F(factorial(dj))
            zshift -= dj
        base = LaurentZ.from_dict(ring, {zshift: ring.one().scale(coeff)})
        for m_exp in range(t_order + 1):
            value = base.scale(F(d1**m_exp, factorial(m_exp)))
            if not value.is_zero():
                terms[(d_eng, (m_exp,))] = value
    return GradedSeries(
        model=model,
        state="glsm",
        etas=etas,
        insertions=insertions,
        q_bound=q_bound,
        t_order=t_order,
        terms=terms,
        vanished=(),
        rings=rings,
    )


def fjrw_crosscheck(spec: FjrwSpec, q_bound, t_order: int = 0) -> dict:
    """Exact cross-multiplied comparison of the engine series vs the display.

    The two series are derivative I-functions along different characters, so
    each side is multiplied by the other's degree factor:
    engine_term * (<d, eta_p1> z) == direct_term * prod_{c_i != 0}
    (class(rho_i) + <d, rho_i> z).
    """
    q_bound = F(q_bound)
    model = fjrw_build(spec)
    etas, insertions = fjrw_insertions(spec)
    engine = glsm_i_function(model, etas, insertions, q_bound, t_order)
    direct = fjrw_direct_series(spec, q_bound, t_order)
    eta = etas[0]
    charged = model.r_charged_indices()

    diffs = []
    keys = set(engine.terms) | set(direct.terms)
    for key in sorted(keys):
        d = key[0]
        ring = engine.ring_for(d)
        lhs = engine.terms.get(key)
        lhs = (lhs or LaurentZ.from_dict(ring, {})).mul(
            linear_z_factor(ring, class_from_character(ring, eta), pairing(d, eta))
        )
        rhs = direct.terms.get(key)
        rhs = rhs or LaurentZ.from_dict(ring, {})
        for i in charged:
            rhs = rhs.mul(
                linear_z_factor(ring, class_from_character(ring, model.column(i)), pairing(d, model.column(i)))
            )
        if lhs != rhs:
            diffs.append(
                {
                    "degree": [format_rational(x) for x in d],
                    "t_exponent": list(key[1]),
                }
            )
    return {
        "family": "fjrw",
        "degrees_compared": len({k[0] for k in keys}),
        "diff": diffs,
        "equal": not diffs,
    }


# --------------------------------------------------------------------------
# hybrid phases
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class HybridSpec:
    """Rank-one negative phase over a weighted projective stack."""

    x_weights: tuple[int, ...]
    p_weights: tuple[int, ...]
    sections: tuple[str, ...] | None = None

    def __post_init__(self):
        if any(w < 1 for w in self.x_weights) or any(d < 1 for d in self.p_weights):
            raise InputError("all hybrid weights must be positive")
        if self.sections is not None and len(self.sections) != len(self.p_weights):
            raise InputError("dimension mismatch: one section per p-coordinate")


def hybrid_build(spec: HybridSpec) -> GLSMModel:
    m_count = len(spec.x_weights)
    n_count = len(spec.p_weights)
    names = tuple(f"x{i + 1}" for i in range(m_count)) + tuple(f"p{j + 1}" for j in range(n_count))
    potential = None
    if spec.sections is not None:
        full: dict[tuple[int, ...], Fraction] = {}
        for j, section in enumerate(spec.sections):
            terms = parse_monomial_expression(section, [f"x{i + 1}" for i in range(m_count)])
            for exps, coeff in terms.items():
                key = tuple(exps) + tuple(1 if jj == j else 0 for jj in range(n_count))
                full[key] = full.get(key, F(0)) + coeff
        potential = PotentialPolynomial.from_dict(full)
    return GLSMModel(
        r=m_count + n_count,
        k=1,
        weights=(tuple(spec.x_weights) + tuple(-d for d in spec.p_weights),),
        r_charges=(0,) * m_count + (1,) * n_count,
        d_w=1,
        theta=(F(-1),),
        potential=potential,
        assert_critical_proper=True,
        variables=names,
    )


def hybrid_insertions(spec: HybridSpec):
    etas = tuple((-d,) for d in spec.p_weights)
    insertions = tuple(
        single_character_insertion(f"t{j + 1}", j, len(spec.p_weights))
        for j in range(len(spec.p_weights))
    )
    return etas, insertions


def hybrid_direct_series(spec: HybridSpec, q_bound, t_order: int = 0) -> GradedSeries:
    """The displayed hybrid series, coded literally.

    Sums q^{k/d} (d = lcm of the p-weights) over k >= 0 with exponential
    factors prod_j e^{t_j (d_j H / z + d_j k / d)} and the stated nu-ranges;
    H is the hyperplane class of the weighted projective base.
    """
    q_bound = F(q_bound)
    model = hybrid_build(spec)
    etas, insertions = hybrid_insertions(spec)
    d_lcm = lcm(*spec.p_weights)
    terms = {}
    rings: dict = {}
    k = 0
    while F(k, d_lcm) <= q_bound:
        d_eng: Degree = (F(-k, d_lcm),)
        g = sector_of_degree(model, d_eng)
        if g.lam not in rings:
            rings[g.lam] = build_ring(model, g)
        ring = rings[g.lam]
        h = class_from_character(ring, (-1,))
        hyper = LaurentZ.one(ring)
        for w in spec.x_weights:
            x = F(w * k, d_lcm)
            for nu in range(1, floor(x) + 1):
                hyper = hyper.mul(
                    LaurentZ.from_dict(ring, {0: h.scale(F(-w)), 1: ring.one().scale(-x + nu)})
                )
        for dj in spec.p_weights:
            x = F(dj * k, d_lcm)
            top = ceil(x) - 1 if x.denominator == 1 else floor(x)
            for nu in range(1, top + 1):
                hyper = hyper.mul(invert_linear_z_factor(ring, h.scale(F(dj)), x - nu))
        if hyper.is_zero():
            k += 1
            continue
        exp_vals = []
        for dj in spec.p_weights:
            exp_vals.append(
                LaurentZ.from_dict(ring, {-1: h.scale(F(dj)), 0: ring.one().scale(F(dj * k, d_lcm))})
            )
        for alpha in _alphas_total(len(spec.p_weights), t_order):
            factor = LaurentZ.one(ring)
            for j, e in enumerate(alpha):
                for _ in range(e):
                    factor = factor.mul(exp_vals[j])
                factor = factor.scale(F(1, factorial(e)))
            value = factor.mul(hyper)
            if not value.is_zero():
                terms[(d_eng, alpha)] = value
        k += 1
    return GradedSeries(
        model=model,
        state="glsm",
        etas=etas,
        insertions=insertions,
        q_bound=q_bound,
        t_order=t_order,
        terms=terms,
        vanished=(),
        rings=rings,
    )


def hybrid_crosscheck(spec: HybridSpec, q_bound, t_order: int = 0) -> dict:
    """Engine vs display; the degree-zero display omits the endpoint classes.

    At k = 0 the engine carries the extra factor prod_j class(rho_{p_j}), so
    the comparison multiplies the direct side by the endpoint classes of the
    coordinates with <d, rho> = 0 (an empty product for every k >= 1).
    """
    q_bound = F(q_bound)
    model = hybrid_build(spec)
    etas, insertions = hybrid_insertions(spec)
    engine = glsm_i_function(model, etas, insertions, q_bound, t_order)
    direct = hybrid_direct_series(spec, q_bound, t_order)
    charged = model.r_charged_indices()

    diffs = []
    keys = set(engine.terms) | set(direct.terms)
    for key in sorted(keys):
        d = key[0]
        ring = engine.ring_for(d)
        lhs = engine.terms.get(key) or LaurentZ.from_dict(ring, {})
        rhs = direct.terms.get(key) or LaurentZ.from_dict(ring, {})
        for i in charged:
            if pairing(d, model.column(i)) == 0:
                rhs = rhs.scale_class(class_from_character(ring, model.column(i)))
        if lhs != rhs:
            diffs.append({"degree": [format_rational(x) for x in d], "t_exponent": list(key[1])})
    return {
        "family": "hybrid",
        "degrees_compared": len({k[0] for k in keys}),
        "diff": diffs,
        "equal": not diffs,
    }


def _alphas_total(nvars: int, t_order: int):
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


# --------------------------------------------------------------------------
# complete intersections
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class CiSpec:
    """Ambient toric data plus the section characters of the intersection."""

    ambient_r: int
    k: int
    ambient_weights: tuple[tuple[int, ...], ...]
    theta: tuple[Fraction, ...]
    taus: tuple[tuple[int, ...], ...]
    sections: tuple[str, ...] | None = None
    semipositive_asserted: bool = False
    pairing_nondegenerate_asserted: bool = False

    def __post_init__(self):
        if len(self.ambient_weights) != self.k or any(len(row) != self.ambient_r for row in self.ambient_weights):
            raise InputError("dimension mismatch: ambient weights must be k x r")
        for tau in self.taus:
            if len(tau) != self.k:
                raise InputError("dimension mismatch: each tau is a length-k character")
        if self.sections is not None and len(self.sections) != len(self.taus):
            raise InputError("dimension mismatch: one section per tau")


def ci_build(spec: CiSpec) -> GLSMModel:
    n = len(spec.taus)
    weights = tuple(
        tuple(spec.ambient_weights[a]) + tuple(-tau[a] for tau in spec.taus) for a in range(spec.k)
    )
    names = tuple(f"x{i + 1}" for i in range(spec.ambient_r)) + tuple(f"p{j + 1}" for j in range(n))
    potential = None
    if spec.sections is not None:
        full: dict[tuple[int, ...], Fraction] = {}
        for j, section in enumerate(spec.sections):
            terms = parse_monomial_expression(section, [f"x{i + 1}" for i in range(spec.ambient_r)])
            for exps, coeff in terms.items():
                key = tuple(exps) + tuple(1 if jj == j else 0 for jj in range(n))
                full[key] = full.get(key, F(0)) + coeff
        potential = PotentialPolynomial.from_dict(full)
    return GLSMModel(
        r=spec.ambient_r + n,
        k=spec.k,
        weights=weights,
        r_charges=(0,) * spec.ambient_r + (1,) * n,
        d_w=1,
        theta=tuple(spec.theta),
        potential=potential,
        assert_critical_proper=True,
        variables=names,
    )


def ci_ambient_series(spec: CiSpec, q_bound, t_order: int = 0, etas=(), insertions=()) -> GradedSeries:
    """The ambient-times-section-factor series the twisted engine output must match.

    Per degree: the plain ambient factor over the x-coordinates times
    prod_j prod_{0 <= nu < <d,tau_j>} (class(tau_j) + (<d,tau_j> - nu) z),
    assembled in the inertia rings shared with the built model.
    """
    from .sectors import effective_degrees

    q_bound = F(q_bound)
    model = ci_build(spec)
    etas = tuple(tuple(e) for e in etas)
    insertions = tuple(insertions)
    terms = {}
    rings: dict = {}
    for d in effective_degrees(model, q_bound):
        g = sector_of_degree(model, d)
        if g.lam not in rings:
            rings[g.lam] = build_ring(model, g)
        ring = rings[g.lam]
        value = LaurentZ.one(ring)
        for i in range(spec.ambient_r):
            col = model.column(i)
            x = pairing(d, col)
            cls = class_from_character(ring, col)
            if x < 0:
                for nu in range(ceil(x), 0):
                    value = value.mul(linear_z_factor(ring, cls, x - nu))
            elif x > 0:
                top = ceil(x) - 1 if x.denominator == 1 else floor(x)
                for nu in range(0, top + 1):
                    value = value.mul(invert_linear_z_factor(ring, cls, x - nu))
        for tau in spec.taus:
            x = pairing(d, tau)
            cls = class_from_character(ring, tau)
            top = ceil(x) - 1 if x.denominator == 1 else floor(x)
            for nu in range(0, top + 1):
                value = value.mul(linear_z_factor(ring, cls, x - nu))
        if value.is_zero():
            continue
        if insertions:
            from .series import exp_factor

            exps = exp_factor(model, d, etas, insertions, t_order, ring)
            for alpha, coeff in exps.items():
                term = coeff.mul(value)
                if not term.is_zero():
                    terms[(d, alpha)] = term
        else:
            terms[(d, ())] = value
    return GradedSeries(
        model=model,
        state="ambient",
        etas=etas,
        insertions=insertions,
        q_bound=q_bound,
        t_order=t_order,
        terms=terms,
        vanished=(),
        rings=rings,
    )


def ci_compare(spec: CiSpec, q_bound, t_order: int = 0, etas=(), insertions=()) -> dict:
    """Verify the sign-twisted comparison chain at the ambient level.

    Chain: engine series -> Novikov twist by the section characters ->
    per-sector half-turn age phase; compared against ci_ambient_series
    multiplied by the sector Euler classes prod_{age 0} (-class(tau_j)).
    Divisibility of every engine term by those Euler classes is checked and
    raises an engine-bug error on failure.
    """
    q_bound = F(q_bound)
    model = ci_build(spec)
    etas = tuple(tuple(e) for e in etas)
    insertions = tuple(insertions)
    engine = glsm_i_function(model, etas, insertions, q_bound, t_order)

    # Euler-class divisibility of every stored coefficient
    for (d, alpha), value in sorted(engine.terms.items()):
        g = sector_of_degree(model, d)
        ring = value.ring
        factors = [class_from_character(ring, tau) for tau in spec.taus if age(model, g, tau) == 0]
        if not factors:
            continue
        for _z, cls in value.coeffs:
            if not divides_ideal(cls, factors):
                raise InternalError(
                    "engine term not divisible by its sector Euler factor at degree "
                    + str([format_rational(x) for x in d])
                )

    twisted = twist_novikov(engine, list(spec.taus))

    def phase(d: Degree):
        g = sector_of_degree(model, d)
        total = sum((age(model, g, tau) for tau in spec.taus), F(0))
        return half_turn(total)

    normalized = scale_sectorwise(twisted, phase)

    rhs = ci_ambient_series(spec, q_bound, t_order, etas, insertions)
    rhs_terms = {}
    for (d, alpha), value in rhs.terms.items():
        g = sector_of_degree(model, d)
        ring = value.ring
        for tau in spec.taus:
            if age(model, g, tau) == 0:
                value = value.scale_class(class_from_character(ring, tau).scale(F(-1)))
        if not value.is_zero():
            rhs_terms[(d, alpha)] = value
    rhs = GradedSeries(
        model=model,
        state="ambient",
        etas=etas,
        insertions=insertions,
        q_bound=q_bound,
        t_order=t_order,
        terms=rhs_terms,
        vanished=(),
        rings=rhs.rings,
    )
    diff = series_compare(normalized, rhs)
    return {
        "family": "ci",
        "diff": diff,
        "equal": not diff,
        "assumptions": {
            "semipositive_asserted": spec.semipositive_asserted,
            "ambient_pairing_nondegenerate_asserted": spec.pairing_nondegenerate_asserted,
        },
        "euler_divisibility": "checked",
        "level": "ambient (before restriction to the intersection)",
    }


# --------------------------------------------------------------------------
# JSON sub-schemas
# --------------------------------------------------------------------------


def specialization_from_dict(data: dict):
    """Parse the "specialize" sub-object of a model file."""
    if not isinstance(data, dict) or "kind" not in data:
        raise InputError('"specialize" must be an object with a "kind"')
    kind = data["kind"]
    if kind == "fjrw":
        return FjrwSpec(
            n=int(data["n"]),
            d_w=int(data["d_w"]),
            r_charges=tuple(int(c) for c in data["r_charges"]),
            group_data=tuple((int(g["order"]), tuple(int(a) for a in g["action"])) for g in data["group"]),
            potential=data.get("potential"),
        )
    if kind == "hybrid":
        return HybridSpec(
            x_weights=tuple(int(w) for w in data["x_weights"]),
            p_weights=tuple(int(d) for d in data["p_weights"]),
            sections=tuple(data["sections"]) if data.get("sections") else None,
        )
    if kind == "ci":
        amb = data["ambient"]
        return CiSpec(
            ambient_r=int(amb["r"]),
            k=int(amb["k"]),
            ambient_weights=tuple(tuple(int(x) for x in row) for row in amb["weights"]),
            theta=tuple(parse_rational(t) if isinstance(t, str) else F(t) for t in amb["theta"]),
            taus=tuple(tuple(int(x) for x in tau) for tau in data["taus"]),
            sections=tuple(data["sections"]) if data.get("sections") else None,
            semipositive_asserted=bool(data.get("semipositive_asserted", False)),
            pairing_nondegenerate_asserted=bool(data.get("pairing_nondegenerate_asserted", False)),
        )
    raise InputError(f"unknown specialization kind {kind!r}")


def specialization_from_model_file(text: str):
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError(f"model JSON syntax error at line {e.lineno} column {e.colno}: {e.msg}") from None
    if "specialize" not in data:
        raise InputError('model file has no "specialize" section')
    return specialization_from_dict(data["specialize"])
