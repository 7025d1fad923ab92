"""Exact scalar coefficients: rationals and cyclotomic numbers.

Every coefficient in the toolkit is either a ``fractions.Fraction`` or a
:class:`Cyclo`, an element of the cyclotomic field Q(zeta_N) stored on the
power basis 1, zeta, ..., zeta^(phi(N)-1) and kept reduced modulo the N-th
cyclotomic polynomial.  Cyclo values that reduce to a rational collapse back
to ``Fraction`` automatically, so purely rational computations never see the
extension field.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import lcm
from typing import Union

Scalar = Union[Fraction, "Cyclo"]


def parse_rational(text: str) -> Fraction:
    """Parse "p/q" or "p" into a reduced Fraction; reject junk and q == 0."""
    s = text.strip()
    try:
        if "/" in s:
            num_s, den_s = s.split("/")
            num, den = int(num_s), int(den_s)
            if den == 0:
                raise ValueError
            return Fraction(num, den)
        return Fraction(int(s))
    except (ValueError, ZeroDivisionError):
        raise ValueError(f"invalid rational literal {text!r}") from None


def format_rational(q: Fraction) -> str:
    """Canonical string: "p" when integral, "p/q" otherwise (sign on p)."""
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def frac_mod1(q: Fraction) -> Fraction:
    """Representative of q mod Z in [0, 1)."""
    return q - Fraction(q.numerator // q.denominator)


def _poly_divide_exact(num: list[int], den: list[int]) -> list[int]:
    # Exact division of integer polynomials (coefficient lists, low degree
    # first); den is monic here so the quotient stays integral.
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    for i in range(len(out) - 1, -1, -1):
        c = num[i + len(den) - 1]
        out[i] = c
        if c:
            for j, d in enumerate(den):
                num[i + j] -= c * d
    if any(num[: len(den) - 1]):
        raise ArithmeticError("non-exact polynomial division")
    return out


@lru_cache(maxsize=None)
def cyclotomic_polynomial(order: int) -> tuple[int, ...]:
    """Coefficients (low degree first) of the order-th cyclotomic polynomial."""
    if order < 1:
        raise ValueError("order must be positive")
    if order == 1:
        return (-1, 1)
    poly = [0] * order + [1]
    poly[0] = -1  # x^order - 1
    for d in range(1, order):
        if order % d == 0:
            poly = _poly_divide_exact(poly, list(cyclotomic_polynomial(d)))
    return tuple(poly)


@lru_cache(maxsize=None)
def _euler_phi(order: int) -> int:
    return len(cyclotomic_polynomial(order)) - 1


def _reduce_vector(order: int, coeffs) -> tuple[Fraction, ...]:
    # Remainder of the coefficient vector modulo Phi_order (monic), i.e.
    # canonical power-basis coordinates.
    phi = _euler_phi(order)
    poly = cyclotomic_polynomial(order)
    work = [Fraction(c) for c in coeffs]
    work += [Fraction(0)] * max(0, phi - len(work))
    for j in range(len(work) - 1, phi - 1, -1):
        c = work[j]
        if c:
            work[j] = Fraction(0)
            for i in range(phi):
                work[j - phi + i] -= c * poly[i]
    return tuple(work[:phi])


class Cyclo:
    """Element of Q(zeta_order), reduced on the power basis.

    Construction goes through :func:`make_cyclo`, which collapses rational
    values to Fraction; arithmetic promotes mixed orders to the lcm order.
    """

    __slots__ = ("order", "coeffs")

    def __init__(self, order: int, coeffs: tuple[Fraction, ...]):
        self.order = order
        self.coeffs = coeffs

    # -- construction -------------------------------------------------

    @staticmethod
    def root_of_unity(order: int, power: int) -> Scalar:
        """zeta_order^power as a scalar (collapses to Fraction when rational)."""
        coeffs = [Fraction(0)] * (power % order) + [Fraction(1)]
        return make_cyclo(order, _reduce_vector(order, coeffs))

    def promote(self, order: int) -> "Cyclo":
        if order == self.order:
            return self
        if order % self.order != 0:
            raise ValueError("can only promote to a multiple order")
        step = order // self.order
        vec = [Fraction(0)] * (_euler_phi(self.order) * step - step + 1)
        out = [Fraction(0)] * len(vec)
        for i, c in enumerate(self.coeffs):
            out[i * step] += c
        return Cyclo(order, _reduce_vector(order, out))

    # -- queries -------------------------------------------------------

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def as_rational(self) -> Fraction | None:
        if all(c == 0 for c in self.coeffs[1:]):
            return self.coeffs[0]
        return None

    # -- arithmetic ----------------------------------------------------

    def _coerce(self, other) -> tuple["Cyclo", "Cyclo"] | None:
        if isinstance(other, Cyclo):
            n = lcm(self.order, other.order)
            return self.promote(n), other.promote(n)
        if isinstance(other, (int, Fraction)):
            phi = _euler_phi(self.order)
            vec = (Fraction(other),) + (Fraction(0),) * (phi - 1)
            return self, Cyclo(self.order, vec)
        return None

    def __add__(self, other):
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return make_cyclo(a.order, tuple(x + y for x, y in zip(a.coeffs, b.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return Cyclo(self.order, tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return make_cyclo(a.order, tuple(x - y for x, y in zip(a.coeffs, b.coeffs)))

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            q = Fraction(other)
            if q == 0:
                return Fraction(0)
            return make_cyclo(self.order, tuple(c * q for c in self.coeffs))
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        prod = [Fraction(0)] * (2 * len(a.coeffs) - 1)
        for i, x in enumerate(a.coeffs):
            if x:
                for j, y in enumerate(b.coeffs):
                    if y:
                        prod[i + j] += x * y
        return make_cyclo(a.order, _reduce_vector(a.order, prod))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            q = Fraction(other)
            return make_cyclo(self.order, tuple(c / q for c in self.coeffs))
        return NotImplemented

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            r = self.as_rational()
            return r is not None and r == other
        if isinstance(other, Cyclo):
            a, b = self._coerce(other)
            return a.coeffs == b.coeffs
        return NotImplemented

    def __hash__(self):
        r = self.as_rational()
        if r is not None:
            return hash(r)
        return hash((self.order, self.coeffs))

    def __repr__(self):
        terms = " + ".join(
            f"{format_rational(c)}*z{self.order}^{i}" for i, c in enumerate(self.coeffs) if c
        )
        return f"Cyclo({terms or '0'})"


def make_cyclo(order: int, coeffs: tuple[Fraction, ...]) -> Scalar:
    """Canonical scalar from reduced power-basis coordinates."""
    if all(c == 0 for c in coeffs[1:]):
        return coeffs[0] if coeffs else Fraction(0)
    return Cyclo(order, tuple(coeffs))


def half_turn(exponent: Fraction) -> Scalar:
    """e^(i*pi*exponent) for rational exponent, exactly.

    Represented in Q(zeta_N) with N = 2*denominator(exponent); integer
    exponents give plain Fractions +-1.
    """
    exponent = Fraction(exponent)
    return Cyclo.root_of_unity(2 * exponent.denominator, exponent.numerator)


def scalar_is_zero(v: Scalar) -> bool:
    if isinstance(v, Cyclo):
        return v.is_zero()
    return v == 0


def scalar_to_json(v: Scalar):
    if isinstance(v, Cyclo):
        return {"zeta_order": v.order, "coeffs": [format_rational(c) for c in v.coeffs]}
    return format_rational(v)


def scalar_from_json(obj) -> Scalar:
    if isinstance(obj, str):
        return parse_rational(obj)
    if isinstance(obj, dict) and "zeta_order" in obj:
        order = int(obj["zeta_order"])
        coeffs = tuple(parse_rational(c) for c in obj["coeffs"])
        if len(coeffs) != _euler_phi(order):
            raise ValueError("cyclotomic coefficient vector has wrong length")
        return make_cyclo(order, coeffs)
    raise ValueError(f"invalid scalar payload {obj!r}")
