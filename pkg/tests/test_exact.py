import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from partiality.errors import DimensionError, FormatError
from partiality.exact import (
    ExactMatrix,
    GaussianRational,
    I,
    ONE,
    Subspace,
    ZERO,
    frac_str,
    gr,
    hermitian_signature,
    is_positive_definite,
    matrix_rank,
    nullspace,
    parse_frac,
    solve,
)

small = st.integers(min_value=-3, max_value=3)
gauss = st.builds(lambda a, b, c: GaussianRational(Fraction(a, c), b), small, small, st.integers(1, 4))


def to_sympy(m: ExactMatrix):
    return sympy.Matrix(m.rows, m.cols, [sympy.Rational(x.re.numerator, x.re.denominator)
                                         + sympy.I * sympy.Rational(x.im.numerator, x.im.denominator)
                                         for x in m.flat()])


def random_matrix(rng, r, c, density=0.6):
    vals = [gr(0), gr(1), gr(-1), I, gr(2), GaussianRational(Fraction(1, 2), 1)]
    return ExactMatrix(r, c, [rng.choice(vals) if rng.random() < density else ZERO for _ in range(r * c)])


def test_fraction_strings_round_trip():
    assert frac_str(Fraction(-3, 4)) == "-3/4"
    assert frac_str(Fraction(2)) == "2/1"
    assert parse_frac("-3/4") == Fraction(-3, 4)
    with pytest.raises(FormatError):
        parse_frac("0.5")


@given(gauss, gauss, gauss)
def test_gaussian_field_axioms(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert (a * b).conjugate() == a.conjugate() * b.conjugate()
    if b:
        assert (a / b) * b == a


def test_float_complex_rejected():
    with pytest.raises(TypeError):
        GaussianRational.coerce(1j)


def test_rank_matches_sympy():
    rng = random.Random(3)
    for _ in range(40):
        m = random_matrix(rng, rng.randint(1, 5), rng.randint(1, 5))
        assert matrix_rank(m) == to_sympy(m).rank()


def test_nullspace_vectors_are_killed_and_span_the_kernel():
    rng = random.Random(5)
    for _ in range(30):
        m = random_matrix(rng, rng.randint(1, 4), 5)
        rows = [m.row(i) for i in range(m.rows)]
        ker = nullspace(rows, 5)
        for x in ker:
            assert all(sum((a * b for a, b in zip(r, x)), ZERO) == ZERO for r in rows)
        assert len(ker) == 5 - to_sympy(m).rank()


def test_solve_finds_combination_or_none():
    vs = [(ONE, ZERO, ONE), (ZERO, ONE, ONE)]
    c = solve(vs, (gr(2), gr(3), gr(5)), 3)
    assert c == (gr(2), gr(3))
    assert solve(vs, (ONE, ZERO, ZERO), 3) is None


def test_subspace_coordinates_and_membership():
    s = Subspace(3, [(ONE, ONE, ZERO), (ZERO, ONE, ONE)])
    v = (ONE, gr(3), gr(2))
    assert s.contains(v)
    assert s.from_coordinates(s.coordinates(v)) == v
    assert not s.contains((ONE, ZERO, ZERO))


def test_matmul_associative_and_adjoint_reverses():
    rng = random.Random(11)
    for _ in range(20):
        a, b, c = (random_matrix(rng, 3, 3) for _ in range(3))
        assert (a @ b) @ c == a @ (b @ c)
        assert (a @ b).adjoint() == b.adjoint() @ a.adjoint()


def test_matrix_json_round_trip():
    m = ExactMatrix.from_rows([[1, I], [GaussianRational(Fraction(1, 3)), 0]])
    data = m.to_json()
    assert data["rows"] == 2 and data["entries"][1] == ["0/1", "1/1"]
    assert ExactMatrix.from_json(data) == m


def test_hermitian_signature_agrees_with_sympy_eigenvalues():
    rng = random.Random(2)
    for _ in range(30):
        a = random_matrix(rng, 3, 3)
        h = a.adjoint() @ a
        psd, r = hermitian_signature(h)
        assert psd and r == to_sympy(h).rank()
        shifted = h - ExactMatrix.identity(3).scale(gr(100))
        assert hermitian_signature(shifted) == (False, None)


def test_positive_definite_and_non_hermitian_rejected():
    assert is_positive_definite(ExactMatrix.identity(2))
    assert not is_positive_definite(ExactMatrix.diagonal([ONE, ZERO]))
    with pytest.raises(DimensionError):
        hermitian_signature(ExactMatrix.unit(2, 0, 1))
