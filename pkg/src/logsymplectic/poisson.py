"""Poisson bivectors, the Schouten bracket, Pfaffians and degeneracy
divisors, and the musical maps between forms and multivectors.

Schouten bracket convention
---------------------------

On monomials P = f * d_I (a p-vector) and Q = g * d_J (a q-vector):

    [P, Q] = (-1)^((p-1)(q-1)) * sum_{a in I} (P <-d_a) * (dQ/dx_a)
             - sum_{b in J} (Q <-d_b) * (dP/dx_b)

where ``<-d_a`` strips the factor d/dx_a from the right with the sign of the
moves, and products are wedge products.  This is the unique graded Lie
bracket extending the Lie bracket of vector fields and the directional
derivative on (vector, function) for which interior multiplication by the
inverse bivector intertwines [. , Pi] with the exterior derivative with no
degree-dependent sign; that chain-map identity is what the test suite pins
the convention against.  It satisfies

    [P, Q] = -(-1)^((p-1)(q-1)) [Q, P]
    [P, Q ^ R] = (-1)^((p-1) r) [P, Q] ^ R + Q ^ [P, R]
    [P, [Q, R]] = [[P, Q], R] + (-1)^((p-1)(q-1)) [Q, [P, R]]
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import linalg
from .exterior import (
    COORDINATE,
    LOG,
    DiffForm,
    MultiVector,
    change_frame,
    contract,
    coordinate_frame,
    merge_indices,
    phi_frame,
)
from .ring import LaurentPoly, VarSpec, poly_from_string, poly_to_string


class SkewMatrix:
    """Skew-symmetric square matrix of LaurentPoly entries."""

    __slots__ = ("var_spec", "rows")

    def __init__(self, var_spec: VarSpec, rows):
        rows = tuple(tuple(p for p in row) for row in rows)
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise ValueError("matrix is not square")
        for i in range(n):
            if not rows[i][i].is_zero():
                raise ValueError("diagonal entries must vanish")
            for j in range(i + 1, n):
                if rows[i][j] != -rows[j][i]:
                    raise ValueError("matrix is not skew-symmetric")
        object.__setattr__(self, "var_spec", var_spec)
        object.__setattr__(self, "rows", rows)

    def __setattr__(self, name, value):
        raise AttributeError("SkewMatrix is immutable")

    @property
    def size(self) -> int:
        return len(self.rows)

    @classmethod
    def from_rationals(cls, var_spec: VarSpec, grid) -> "SkewMatrix":
        return cls(
            var_spec,
            [[LaurentPoly.const(var_spec, Fraction(x)) for x in row] for row in grid],
        )

    def is_constant(self) -> bool:
        return all(p.is_constant() for row in self.rows for p in row)

    def constant_grid(self) -> list[list[Fraction]]:
        if not self.is_constant():
            raise ValueError("matrix has non-constant entries")
        return [[p.constant_term() for p in row] for row in self.rows]

    def __eq__(self, other):
        return (
            isinstance(other, SkewMatrix)
            and self.var_spec == other.var_spec
            and self.rows == other.rows
        )

    __hash__ = None

    def serialize(self) -> dict:
        return {
            "size": self.size,
            "entries": [[poly_to_string(p) for p in row] for row in self.rows],
        }


@dataclass(frozen=True)
class PoissonStructure:
    """A bivector field with polynomial coefficients in the coordinate frame.

    The integrability condition (vanishing Schouten self-bracket) is checked
    by :func:`jacobi_holds`, never assumed.
    """

    var_spec: VarSpec
    bivector: MultiVector

    def __post_init__(self):
        if self.bivector.frame.kind != COORDINATE:
            raise ValueError("bivector must be given in the coordinate frame")
        if self.bivector.frame.var_spec != self.var_spec:
            raise ValueError("var_spec mismatch")
        if self.bivector.degree != 2:
            raise ValueError("bivector must have degree 2")
        for coeff in self.bivector.terms.values():
            if coeff.has_negative_exponents():
                raise ValueError("bivector coefficients must be polynomial")

    @classmethod
    def from_json(cls, doc: dict) -> "PoissonStructure":
        vs = VarSpec(int(doc["dimension"]), int(doc["divisor_vars"]))
        terms: dict[tuple[int, ...], LaurentPoly] = {}
        for item in doc["terms"]:
            i, j = int(item["i"]), int(item["j"])
            coeff = poly_from_string(item["coeff"], vs)
            if i == j:
                raise ValueError("bivector term with i == j")
            if i > j:
                i, j = j, i
                coeff = -coeff
            key = (i, j)
            terms[key] = terms[key] + coeff if key in terms else coeff
        biv = MultiVector(coordinate_frame(vs), 2, terms)
        return cls(vs, biv)

    def to_json(self) -> dict:
        return {
            "dimension": self.var_spec.total_vars,
            "divisor_vars": self.var_spec.divisor_vars,
            "terms": [
                {"i": k[0], "j": k[1], "coeff": poly_to_string(v)}
                for k, v in sorted(self.bivector.terms.items())
            ],
        }


# -- Schouten bracket ---------------------------------------------------------


def _strip_right(indices: tuple[int, ...], a: int) -> tuple[int, tuple[int, ...]]:
    """Remove index a, with the sign of moving its factor to the right end."""
    pos = indices.index(a)  # 0-based
    sign = 1 if (len(indices) - 1 - pos) % 2 == 0 else -1
    return sign, indices[:pos] + indices[pos + 1 :]


def schouten(p: MultiVector, q: MultiVector) -> MultiVector:
    """Schouten bracket of homogeneous multivectors (coordinate frame)."""
    if p.frame.kind != COORDINATE or q.frame.kind != COORDINATE:
        raise ValueError("schouten expects coordinate-frame multivectors")
    vs = p.frame.var_spec
    if vs != q.frame.var_spec:
        raise ValueError("var_spec mismatch")
    dp, dq = p.degree, q.degree
    out_degree = max(dp + dq - 1, 0)
    twist = -1 if ((dp - 1) * (dq - 1)) % 2 == 1 else 1
    out: dict[tuple[int, ...], LaurentPoly] = {}

    def accumulate(sign: int, left: tuple[int, ...], right: tuple[int, ...], coeff: LaurentPoly):
        merged = merge_indices(left, right)
        if merged is None or coeff.is_zero():
            return
        msign, key = merged
        contrib = coeff if sign * msign > 0 else -coeff
        out[key] = out[key] + contrib if key in out else contrib

    for pi, pc in p.terms.items():
        for qi, qc in q.terms.items():
            for a in pi:
                dg = qc.partial(a)
                if dg.is_zero():
                    continue
                sgn, rest = _strip_right(pi, a)
                accumulate(twist * sgn, rest, qi, pc * dg)
            for b in qi:
                df = pc.partial(b)
                if df.is_zero():
                    continue
                sgn, rest = _strip_right(qi, b)
                accumulate(-sgn, rest, pi, qc * df)
    return MultiVector(p.frame, out_degree, out)


def jacobi_holds(p: PoissonStructure) -> bool:
    """True iff the Schouten self-bracket vanishes exactly."""
    return schouten(p.bivector, p.bivector).is_zero()


# -- Pfaffian and the degeneracy divisor --------------------------------------


def pfaffian(a) -> Fraction:
    """Pfaffian of a constant skew matrix, as the signed sum over perfect
    matchings.  Satisfies pfaffian(A)**2 == det(A)."""
    if isinstance(a, SkewMatrix):
        grid = a.constant_grid()
    else:
        grid = [[Fraction(x) for x in row] for row in a]
    n = len(grid)
    if any(len(row) != n for row in grid):
        raise ValueError("matrix is not square")
    if n % 2 != 0:
        raise ValueError("Pfaffian needs even size")
    for i in range(n):
        for j in range(n):
            if grid[i][j] != -grid[j][i]:
                raise ValueError("matrix is not skew-symmetric")

    def rec(indices: tuple[int, ...]) -> Fraction:
        if not indices:
            return Fraction(1)
        first = indices[0]
        total = Fraction(0)
        for t in range(1, len(indices)):
            partner = indices[t]
            coeff = grid[first][partner]
            if coeff == 0:
                continue
            rest = indices[1:t] + indices[t + 1 :]
            sign = 1 if t % 2 == 1 else -1
            total += sign * coeff * rec(rest)
        return total

    return rec(tuple(range(n)))


def top_power(p: PoissonStructure) -> tuple[LaurentPoly, MultiVector]:
    """The n-fold wedge of the bivector: a top multivector f * d_1 ^...^ d_2n.
    Returns (f, the top multivector)."""
    n = p.var_spec.n
    result = p.bivector
    for _ in range(n - 1):
        result = result.wedge(p.bivector)
    top_index = tuple(range(1, p.var_spec.total_vars + 1))
    return result.coefficient(top_index), result


@dataclass(frozen=True)
class DivisorReport:
    multiplicities: dict[int, int]
    unit_part: LaurentPoly
    simple_normal_crossings: bool


class DegenerateStructureError(ValueError):
    """The top power vanishes identically: not generically symplectic."""


class NotMonomialTimesUnitError(ValueError):
    """The Pfaffian coefficient is not monomial*unit in these coordinates,
    so normal crossings cannot be certified here."""


def degeneracy_divisor(p: PoissonStructure) -> DivisorReport:
    """Vanishing orders of the top-power coefficient along each coordinate
    hyperplane, for coefficients of the shape monomial * local unit."""
    f, _ = top_power(p)
    if f.is_zero():
        raise DegenerateStructureError("top power vanishes identically")
    content = f.min_exponents()
    unit = f.divide_monomial(content)
    if unit.constant_term() == 0:
        raise NotMonomialTimesUnitError(
            "top-power coefficient is not monomial times a unit; "
            "normal crossings cannot be certified in these coordinates"
        )
    mults = {i + 1: e for i, e in enumerate(content) if e != 0}
    return DivisorReport(
        multiplicities=mults,
        unit_part=unit,
        simple_normal_crossings=all(e <= 1 for e in content),
    )


# -- log-basis matrix and the musical maps ------------------------------------


def log_matrix(p: PoissonStructure) -> SkewMatrix:
    """Matrix A of the bivector in the log basis: the coefficient of
    d_i ^ d_j must be divisible by x_i (i on the divisor) and x_j (j on the
    divisor); failure means the bivector is not tangent to the divisor."""
    vs = p.var_spec
    nv = vs.total_vars
    zero = LaurentPoly.zero(vs)
    entries = [[zero for _ in range(nv)] for _ in range(nv)]
    for i in range(1, nv + 1):
        for j in range(i + 1, nv + 1):
            coeff = p.bivector.coefficient((i, j))
            if coeff.is_zero():
                continue
            shift = [0] * nv
            if vs.is_divisor_index(i):
                shift[i - 1] = -1
            if vs.is_divisor_index(j):
                shift[j - 1] = -1
            a = coeff.shift(tuple(shift))
            if a.has_negative_exponents():
                raise ValueError(
                    f"coefficient of d_{i}^d_{j} is not divisible by its divisor "
                    "variables; the bivector does not lie in the log tangent sheaf"
                )
            entries[i - 1][j - 1] = a
            entries[j - 1][i - 1] = -a
    return SkewMatrix(vs, entries)


def pi_sharp(p: PoissonStructure, w: DiffForm) -> MultiVector:
    """Interior multiplication of a 1-form into the bivector."""
    if w.degree != 1:
        raise ValueError("pi_sharp expects a 1-form")
    if w.frame.kind != COORDINATE:
        w = change_frame(w, coordinate_frame(p.var_spec))
    if w.is_zero():
        return MultiVector(coordinate_frame(p.var_spec), 1, {})
    return contract(w, p.bivector)


def inverse_log_matrix(p: PoissonStructure) -> SkewMatrix:
    """B = A^{-1} over the fraction field; entries are verified to lie in the
    localized ring (exact division), which is automatic for constant A."""
    a = log_matrix(p)
    vs = p.var_spec
    if a.is_constant():
        grid = a.constant_grid()
        try:
            inv = linalg.inverse(grid)
        except ValueError:
            raise ValueError("log matrix is singular; no inverse bivector") from None
        return SkewMatrix(
            vs, [[LaurentPoly.const(vs, c) for c in row] for row in inv]
        )
    from .exterior import _inverse_poly_matrix

    rows = _inverse_poly_matrix(a.rows, vs)
    return SkewMatrix(vs, rows)


def pi_flat(p: PoissonStructure, v: MultiVector) -> DiffForm:
    """Inverse of pi_sharp on 1-vectors, through B = A^{-1}.

    Returns the coordinate-frame expansion of the unique meromorphic 1-form
    mapping to `v`.
    """
    if v.degree != 1:
        raise ValueError("pi_flat expects a 1-vector")
    vs = p.var_spec
    if v.frame.kind == LOG:
        v = change_frame(v, coordinate_frame(vs))
    b = inverse_log_matrix(p)
    out = DiffForm(coordinate_frame(vs), 1, {})
    for (i,), coeff in v.terms.items():
        # v_i-coordinate of the input: divide by x_i on divisor indices.
        g = coeff.shift(_unit_shift(vs, i, -1)) if vs.is_divisor_index(i) else coeff
        for j in range(1, vs.total_vars + 1):
            bij = b.rows[i - 1][j - 1]
            if bij.is_zero():
                continue
            c = g * bij
            if vs.is_divisor_index(j):
                c = c.shift(_unit_shift(vs, j, -1))
            out = out + DiffForm(coordinate_frame(vs), 1, {(j,): c})
    return out


def _unit_shift(vs: VarSpec, i: int, amount: int) -> tuple[int, ...]:
    exps = [0] * vs.total_vars
    exps[i - 1] = amount
    return tuple(exps)


def phi_forms(p: PoissonStructure) -> list[DiffForm]:
    """The 1-forms phi_i = pi_flat(d/dx_i), i = 1..2n, in coordinates."""
    vs = p.var_spec
    out = []
    for i in range(1, vs.total_vars + 1):
        vec = MultiVector(coordinate_frame(vs), 1, {(i,): LaurentPoly.const(vs, 1)})
        out.append(pi_flat(p, vec))
    return out


def phi_frame_of(p: PoissonStructure):
    """Frame object for the phi basis of this structure."""
    return phi_frame(p.var_spec, inverse_log_matrix(p).rows)
