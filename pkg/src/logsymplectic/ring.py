"""Sparse Laurent polynomials over the rationals.

The coefficient ring for the whole toolkit: the local polynomial ring in
variables x1..x{2n}, localized at the first `m` "divisor" variables.  A
polynomial is a map from exponent vectors to nonzero Fractions; exponents
may be negative only in the first `m` positions.  All arithmetic is exact
and equality is structural, so two computations of the same object compare
equal term by term.

Variables are numbered 1..2n in the public interface; exponent vectors are
0-indexed tuples of length 2n.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

Rational = Fraction

Exponents = tuple[int, ...]


@dataclass(frozen=True)
class VarSpec:
    """Variable layout: `total_vars` = 2n, the first `divisor_vars` = m of
    which are local equations of divisor components (and may appear with
    negative exponents)."""

    total_vars: int
    divisor_vars: int

    def __post_init__(self):
        if self.total_vars < 2 or self.total_vars % 2 != 0:
            raise ValueError("total_vars must be even and >= 2")
        if not 0 <= self.divisor_vars <= self.total_vars:
            raise ValueError("divisor_vars must lie in [0, total_vars]")

    @property
    def n(self) -> int:
        return self.total_vars // 2

    def is_divisor_index(self, i: int) -> bool:
        """1-based variable index i <= m?"""
        return 1 <= i <= self.divisor_vars


class LaurentPoly:
    """Immutable sparse Laurent polynomial attached to a VarSpec."""

    __slots__ = ("var_spec", "terms")

    def __init__(self, var_spec: VarSpec, terms: dict[Exponents, Fraction] | None = None):
        clean: dict[Exponents, Fraction] = {}
        nv, m = var_spec.total_vars, var_spec.divisor_vars
        for exps, coeff in (terms or {}).items():
            coeff = Fraction(coeff)
            if coeff == 0:
                continue
            if len(exps) != nv:
                raise ValueError(f"exponent vector {exps} has wrong length (want {nv})")
            for pos, e in enumerate(exps):
                if e < 0 and pos >= m:
                    raise ValueError(
                        f"negative exponent in non-divisor variable x{pos + 1}: {exps}"
                    )
            clean[tuple(exps)] = Fraction(coeff)
        object.__setattr__(self, "var_spec", var_spec)
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("LaurentPoly is immutable")

    def __reduce__(self):
        return (LaurentPoly, (self.var_spec, self.terms))

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, vs: VarSpec) -> "LaurentPoly":
        return cls(vs, {})

    @classmethod
    def const(cls, vs: VarSpec, c) -> "LaurentPoly":
        return cls(vs, {(0,) * vs.total_vars: Fraction(c)})

    @classmethod
    def variable(cls, vs: VarSpec, i: int, power: int = 1) -> "LaurentPoly":
        """x_i**power, i being 1-based."""
        if not 1 <= i <= vs.total_vars:
            raise IndexError(f"variable index {i} out of range")
        exps = [0] * vs.total_vars
        exps[i - 1] = power
        return cls(vs, {tuple(exps): Fraction(1)})

    @classmethod
    def monomial(cls, vs: VarSpec, exps, coeff=1) -> "LaurentPoly":
        return cls(vs, {tuple(exps): Fraction(coeff)})

    # -- queries -----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        zero = (0,) * self.var_spec.total_vars
        return all(e == zero for e in self.terms)

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * self.var_spec.total_vars, Fraction(0))

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def has_negative_exponents(self) -> bool:
        return any(e < 0 for exps in self.terms for e in exps)

    def min_exponents(self) -> Exponents:
        """Componentwise minimum exponent (the monomial content); 0 for the
        zero polynomial."""
        if not self.terms:
            return (0,) * self.var_spec.total_vars
        cols = zip(*self.terms.keys())
        return tuple(min(col) for col in cols)

    def evaluate(self, values) -> Fraction:
        vals = [Fraction(v) for v in values]
        if len(vals) != self.var_spec.total_vars:
            raise ValueError("wrong number of values")
        total = Fraction(0)
        for exps, coeff in self.terms.items():
            term = coeff
            for v, e in zip(vals, exps):
                if e:
                    term *= v**e
            total += term
        return total

    # -- arithmetic --------------------------------------------------------

    def _coerce(self, other) -> "LaurentPoly":
        if isinstance(other, LaurentPoly):
            if other.var_spec != self.var_spec:
                raise ValueError("var_spec mismatch")
            return other
        return LaurentPoly.const(self.var_spec, other)

    def __add__(self, other) -> "LaurentPoly":
        other = self._coerce(other)
        out = dict(self.terms)
        for exps, coeff in other.terms.items():
            out[exps] = out.get(exps, Fraction(0)) + coeff
        return LaurentPoly(self.var_spec, out)

    __radd__ = __add__

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly(self.var_spec, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other) -> "LaurentPoly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "LaurentPoly":
        return self._coerce(other) - self

    def __mul__(self, other) -> "LaurentPoly":
        other = self._coerce(other)
        out: dict[Exponents, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                key = tuple(a + b for a, b in zip(e1, e2))
                out[key] = out.get(key, Fraction(0)) + c1 * c2
        return LaurentPoly(self.var_spec, out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "LaurentPoly":
        if not isinstance(k, int) or k < 0:
            raise ValueError("only non-negative integer powers")
        result = LaurentPoly.const(self.var_spec, 1)
        for _ in range(k):
            result = result * self
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = LaurentPoly.const(self.var_spec, other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.var_spec == other.var_spec and self.terms == other.terms

    __hash__ = None  # mutable-dict content; structural equality only

    def partial(self, i: int) -> "LaurentPoly":
        """Exact partial derivative with respect to x_i (1-based), including
        negative-exponent terms."""
        if not 1 <= i <= self.var_spec.total_vars:
            raise IndexError(f"variable index {i} out of range")
        pos = i - 1
        out: dict[Exponents, Fraction] = {}
        for exps, coeff in self.terms.items():
            e = exps[pos]
            if e == 0:
                continue
            key = exps[:pos] + (e - 1,) + exps[pos + 1 :]
            out[key] = out.get(key, Fraction(0)) + coeff * e
        return LaurentPoly(self.var_spec, out)

    def shift(self, exps: Exponents) -> "LaurentPoly":
        """Multiply by the monomial x**exps (exps may be negative in divisor
        positions only, enforced by the constructor)."""
        return LaurentPoly(
            self.var_spec,
            {tuple(a + b for a, b in zip(e, exps)): c for e, c in self.terms.items()},
        )

    def divide_monomial(self, exps: Exponents) -> "LaurentPoly":
        """Exact division by the monomial x**exps.  Raises if the quotient
        would need a pole in a non-divisor variable."""
        return self.shift(tuple(-e for e in exps))

    def divide_exact(self, other: "LaurentPoly") -> "LaurentPoly":
        """Exact division p/q; raises ValueError when q does not divide p."""
        other = self._coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        if self.is_zero():
            return self
        # Clear monomial content so intermediate steps stay polynomial.
        alpha = self.min_exponents()
        beta = other.min_exponents()
        p = self.divide_monomial(alpha) if any(alpha) else self
        q = other.divide_monomial(beta) if any(beta) else other

        def order_key(e: Exponents):
            return (sum(e), e)

        q_lead = max(q.terms, key=order_key)
        q_lc = q.terms[q_lead]
        quotient: dict[Exponents, Fraction] = {}
        r = p
        while not r.is_zero():
            r_lead = max(r.terms, key=order_key)
            t = tuple(a - b for a, b in zip(r_lead, q_lead))
            if any(e < 0 for e in t):
                raise ValueError("not exactly divisible")
            c = r.terms[r_lead] / q_lc
            quotient[t] = c
            r = r - q.shift(t) * LaurentPoly.const(self.var_spec, c)
        shift = tuple(a - b for a, b in zip(alpha, beta))
        return LaurentPoly(self.var_spec, quotient).shift(shift)

    def __str__(self) -> str:
        return poly_to_string(self)

    def __repr__(self) -> str:
        return f"LaurentPoly({poly_to_string(self)!r})"


# -- spec-level operation names --------------------------------------------


def poly_mul(p: LaurentPoly, q: LaurentPoly) -> LaurentPoly:
    """Exact sparse product (var_spec mismatch raises)."""
    return p * q


def partial_derivative(p: LaurentPoly, i: int) -> LaurentPoly:
    return p.partial(i)


def is_unit_local(p: LaurentPoly) -> bool:
    """Unit of the local ring at the origin: nonzero constant term.

    Only meaningful (and only allowed) for elements without poles.
    """
    if p.has_negative_exponents():
        raise ValueError("element has poles; not in the local ring")
    return p.constant_term() != 0


# -- serialization ----------------------------------------------------------

_MONO_VAR = re.compile(r"^x(\d+)(?:\^(-?\d+))?$")
_RATIONAL = re.compile(r"^[+-]?\d+(?:/\d+)?$")


def poly_to_string(p: LaurentPoly) -> str:
    """Canonical sum-of-monomials string, e.g. ``3/2*x1^-1*x3^2``."""
    if p.is_zero():
        return "0"
    parts = []
    for exps in sorted(p.terms):
        coeff = p.terms[exps]
        factors = [
            f"x{pos + 1}" + (f"^{e}" if e != 1 else "")
            for pos, e in enumerate(exps)
            if e != 0
        ]
        if not factors:
            body = str(abs(coeff))
        elif abs(coeff) == 1:
            body = "*".join(factors)
        else:
            body = "*".join([str(abs(coeff))] + factors)
        parts.append((coeff < 0, body))
    first_neg, first_body = parts[0]
    out = ("-" if first_neg else "") + first_body
    for neg, body in parts[1:]:
        out += (" - " if neg else " + ") + body
    return out


def poly_from_string(s: str, vs: VarSpec) -> LaurentPoly:
    """Parse the serialization format of :func:`poly_to_string`.

    Accepts "+"/"-" separated monomials, each a "*"-separated list of an
    optional rational coefficient and powers ``xK^E``.
    """
    text = s.strip()
    if not text:
        raise ValueError("empty polynomial string")
    text = text.replace(" - ", " + -").replace("- ", "-")
    terms: dict[Exponents, Fraction] = {}
    for chunk in text.split("+"):
        chunk = chunk.strip()
        if not chunk:
            continue
        negate = False
        while chunk.startswith("-"):
            negate = not negate
            chunk = chunk[1:].strip()
        coeff = Fraction(1)
        exps = [0] * vs.total_vars
        for factor in chunk.split("*"):
            factor = factor.strip()
            if not factor:
                raise ValueError(f"malformed monomial in {s!r}")
            if _RATIONAL.match(factor):
                coeff *= Fraction(factor)
                continue
            mv = _MONO_VAR.match(factor)
            if not mv:
                raise ValueError(f"malformed factor {factor!r} in {s!r}")
            idx = int(mv.group(1))
            if not 1 <= idx <= vs.total_vars:
                raise ValueError(f"variable x{idx} out of range in {s!r}")
            exps[idx - 1] += int(mv.group(2)) if mv.group(2) else 1
        if negate:
            coeff = -coeff
        key = tuple(exps)
        terms[key] = terms.get(key, Fraction(0)) + coeff
    return LaurentPoly(vs, terms)
