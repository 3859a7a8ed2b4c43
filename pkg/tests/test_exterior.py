import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from logsymplectic.exterior import (
    DiffForm,
    MultiVector,
    change_frame,
    contract,
    coordinate_frame,
    coordinate_one_form,
    coordinate_vector,
    exterior_derivative,
    form_monomial,
    frame_element_weight,
    log_frame,
    log_one_form,
    log_vector,
    merge_indices,
    phi_frame,
    term_weight,
    vector_monomial,
    wedge,
    weight_decomposition,
)
from logsymplectic.ring import LaurentPoly, VarSpec, poly_from_string

VS = VarSpec(4, 2)
COORD = coordinate_frame(VS)
LOGF = log_frame(VS)


def poly(s, vs=VS):
    return poly_from_string(s, vs)


def rand_form(rng, vs=VS, degree=None, max_terms=2):
    if degree is None:
        degree = rng.randint(0, vs.total_vars)
    terms = {}
    for _ in range(rng.randint(1, max_terms)):
        idx = tuple(sorted(rng.sample(range(1, vs.total_vars + 1), degree)))
        exps = tuple(
            rng.randint(-1 if pos < vs.divisor_vars else 0, 2)
            for pos in range(vs.total_vars)
        )
        terms[idx] = LaurentPoly.monomial(vs, exps, Fraction(rng.randint(-4, 4)))
    return DiffForm(COORD, degree, terms)


class TestMergeIndices:
    def test_disjoint(self):
        assert merge_indices((1, 3), (2, 4)) == (-1, (1, 2, 3, 4))
        assert merge_indices((1, 2), (3, 4)) == (1, (1, 2, 3, 4))

    def test_overlap(self):
        assert merge_indices((1, 2), (2,)) is None


class TestWedge:
    def test_basis_product(self):
        dx1, dx2 = coordinate_one_form(VS, 1), coordinate_one_form(VS, 2)
        w = wedge(dx1, dx2)
        assert w.terms == {(1, 2): LaurentPoly.const(VS, 1)}

    def test_antisymmetry(self):
        dx1, dx2 = coordinate_one_form(VS, 1), coordinate_one_form(VS, 2)
        assert wedge(dx2, dx1) == -wedge(dx1, dx2)

    def test_square_of_one_form(self):
        dx1, dx2 = coordinate_one_form(VS, 1), coordinate_one_form(VS, 2)
        s = dx1 + dx2
        assert wedge(s, s).is_zero()

    def test_frame_mismatch(self):
        with pytest.raises(ValueError):
            wedge(coordinate_one_form(VS, 1), log_one_form(VS, 1))

    def test_kind_mismatch(self):
        with pytest.raises(TypeError):
            wedge(coordinate_one_form(VS, 1), coordinate_vector(VS, 2))

    def test_graded_commutativity_random(self):
        rng = random.Random(3)
        for _ in range(40):
            p, q = rng.randint(0, 3), rng.randint(0, 3)
            a, b = rand_form(rng, degree=p), rand_form(rng, degree=q)
            sign = 1 if (p * q) % 2 == 0 else -1
            assert wedge(a, b) == wedge(b, a).scale(sign)

    def test_associativity_random(self):
        rng = random.Random(4)
        for _ in range(30):
            a = rand_form(rng, degree=rng.randint(0, 2))
            b = rand_form(rng, degree=rng.randint(0, 2))
            c = rand_form(rng, degree=rng.randint(0, 2))
            assert wedge(wedge(a, b), c) == wedge(a, wedge(b, c))


class TestExteriorDerivative:
    def test_basic(self):
        w = form_monomial(COORD, (2,), poly("x1"))
        assert exterior_derivative(w) == form_monomial(COORD, (1, 2), poly("1"))

    def test_closed_log_form(self):
        w = form_monomial(COORD, (1,), poly("x1^-1"))
        assert exterior_derivative(w).is_zero()

    def test_log_frame_generators_closed(self):
        for i in range(1, 5):
            assert exterior_derivative(log_one_form(VS, i)).is_zero()

    def test_d_squared_zero_random(self):
        rng = random.Random(7)
        for _ in range(40):
            w = rand_form(rng, degree=rng.randint(0, 3))
            assert exterior_derivative(exterior_derivative(w)).is_zero()

    def test_leibniz_random(self):
        rng = random.Random(8)
        for _ in range(30):
            p = rng.randint(0, 2)
            a = rand_form(rng, degree=p)
            b = rand_form(rng, degree=rng.randint(0, 2))
            lhs = exterior_derivative(wedge(a, b))
            rhs = wedge(exterior_derivative(a), b) + wedge(a, exterior_derivative(b)).scale(
                1 if p % 2 == 0 else -1
            )
            assert lhs == rhs

    def test_log_frame_matches_coordinate_route(self):
        rng = random.Random(9)
        for _ in range(20):
            w = rand_form(rng, degree=rng.randint(0, 3))
            w_log = change_frame(w, LOGF)
            via_log = change_frame(exterior_derivative(w_log), COORD)
            assert via_log == exterior_derivative(w)


class TestContract:
    def test_dual_pairing(self):
        dx1 = coordinate_one_form(VS, 1)
        v12 = vector_monomial(COORD, (1, 2), poly("1"))
        assert contract(dx1, v12) == coordinate_vector(VS, 2)

    def test_missing_index(self):
        dx3 = coordinate_one_form(VS, 3)
        v12 = vector_monomial(COORD, (1, 2), poly("1"))
        assert contract(dx3, v12).is_zero()

    def test_sign(self):
        dx2 = coordinate_one_form(VS, 2)
        v12 = vector_monomial(COORD, (1, 2), poly("1"))
        assert contract(dx2, v12) == -coordinate_vector(VS, 1)

    def test_degree_zero_rejected(self):
        f = MultiVector(COORD, 0, {(): poly("x1")})
        with pytest.raises(ValueError):
            contract(coordinate_one_form(VS, 1), f)


class TestChangeFrame:
    def test_eta_to_coordinate(self):
        eta1 = log_one_form(VS, 1)
        assert change_frame(eta1, COORD) == form_monomial(COORD, (1,), poly("x1^-1"))

    def test_v_to_coordinate(self):
        v1 = log_vector(VS, 1)
        assert change_frame(v1, COORD) == vector_monomial(COORD, (1,), poly("x1"))

    def test_nondivisor_unscaled(self):
        eta3 = log_one_form(VS, 3)
        assert change_frame(eta3, COORD) == coordinate_one_form(VS, 3)

    def test_round_trips(self):
        rng = random.Random(11)
        for _ in range(25):
            w = rand_form(rng, degree=rng.randint(0, 4))
            assert change_frame(change_frame(w, LOGF), COORD) == w

    def test_phi_expansion_block_case(self):
        # one symplectic block in dimension 2, both variables divisorial:
        # the first phi form expands through B as b/(x1 x2) dx2.
        vs2 = VarSpec(2, 2)
        b = Fraction(3)
        zero = LaurentPoly.zero(vs2)
        bmat = (
            (zero, LaurentPoly.const(vs2, b)),
            (LaurentPoly.const(vs2, -b), zero),
        )
        frame = phi_frame(vs2, bmat)
        phi1 = form_monomial(frame, (1,), LaurentPoly.const(vs2, 1))
        coord = change_frame(phi1, coordinate_frame(vs2))
        expected = form_monomial(
            coordinate_frame(vs2), (2,), poly_from_string("3*x1^-1*x2^-1", vs2)
        )
        assert coord == expected

    def test_phi_round_trip(self):
        vs2 = VarSpec(2, 2)
        bmat = (
            (LaurentPoly.zero(vs2), LaurentPoly.const(vs2, Fraction(5, 7))),
            (LaurentPoly.const(vs2, Fraction(-5, 7)), LaurentPoly.zero(vs2)),
        )
        frame = phi_frame(vs2, bmat)
        rng = random.Random(13)
        for _ in range(10):
            terms = {}
            for idx in [(1,), (2,)]:
                exps = (rng.randint(-1, 2), rng.randint(-1, 2))
                terms[idx] = LaurentPoly.monomial(vs2, exps, Fraction(rng.randint(-3, 3)))
            w = DiffForm(coordinate_frame(vs2), 1, terms)
            back = change_frame(change_frame(w, frame), coordinate_frame(vs2))
            assert back == w

    def test_multivector_has_no_phi_frame(self):
        vs2 = VarSpec(2, 2)
        bmat = (
            (LaurentPoly.zero(vs2), LaurentPoly.const(vs2, 1)),
            (LaurentPoly.const(vs2, -1), LaurentPoly.zero(vs2)),
        )
        with pytest.raises(ValueError):
            MultiVector(phi_frame(vs2, bmat), 1, {})

    def test_exterior_derivative_in_phi_frame(self):
        # d computed on a phi-frame element agrees with the coordinate route
        vs2 = VarSpec(2, 2)
        bmat = (
            (LaurentPoly.zero(vs2), LaurentPoly.const(vs2, Fraction(2))),
            (LaurentPoly.const(vs2, Fraction(-2)), LaurentPoly.zero(vs2)),
        )
        frame = phi_frame(vs2, bmat)
        phi1 = form_monomial(frame, (1,), LaurentPoly.const(vs2, 1))
        d_phi = exterior_derivative(phi1)
        assert d_phi.frame == frame
        coord = coordinate_frame(vs2)
        assert change_frame(d_phi, coord) == exterior_derivative(change_frame(phi1, coord))


class TestWeights:
    def test_spec_values(self):
        assert term_weight(COORD, (3,), (2, 0, 0, 0)) == 3
        assert term_weight(LOGF, (1,), (1, 0, 0, 0)) == 1
        assert term_weight(LOGF, (1, 2), (0, 0, 0, 0)) == 0

    def test_vector_weights(self):
        assert term_weight(COORD, (1,), (0, 0, 0, 0), is_form=False) == -1
        assert term_weight(LOGF, (1,), (0, 0, 0, 0), is_form=False) == 0
        assert term_weight(LOGF, (3,), (0, 0, 0, 0), is_form=False) == -1

    def test_additive_under_wedge(self):
        rng = random.Random(17)
        for _ in range(30):
            i, j = rng.sample(range(1, 5), 2)
            e1 = tuple(rng.randint(0, 2) for _ in range(4))
            e2 = tuple(rng.randint(0, 2) for _ in range(4))
            a = form_monomial(COORD, (i,), LaurentPoly.monomial(VS, e1, 1))
            b = form_monomial(COORD, (j,), LaurentPoly.monomial(VS, e2, 1))
            w = wedge(a, b)
            (idx, coeff), = w.terms.items()
            (exps, _), = coeff.terms.items()
            assert term_weight(COORD, idx, exps) == term_weight(
                COORD, (i,), e1
            ) + term_weight(COORD, (j,), e2)

    def test_derivative_preserves_weight(self):
        rng = random.Random(19)
        for _ in range(25):
            w = rand_form(rng, degree=rng.randint(0, 3))
            for wt, piece in weight_decomposition(w).items():
                dw = exterior_derivative(piece)
                if dw.is_zero():
                    continue
                assert set(weight_decomposition(dw)) == {wt}


class TestSerialization:
    def test_frame_tagged_term_list(self):
        w = form_monomial(COORD, (1, 3), poly("x2")) + form_monomial(
            COORD, (2, 3), poly("-1/2*x1^-1")
        )
        doc = w.serialize()
        assert doc == {
            "frame": "coordinate",
            "degree": 2,
            "terms": [
                {"indices": [1, 3], "coeff": "x2"},
                {"indices": [2, 3], "coeff": "-1/2*x1^-1"},
            ],
        }
