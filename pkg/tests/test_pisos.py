from fractions import Fraction

import pytest

from partiality.errors import PreconditionError
from partiality.exact import ExactMatrix, GaussianRational
from partiality.pisos import (
    compatible,
    generate_star_semigroup,
    initial_projection,
    is_partial_isometry,
    is_projection,
    is_tame,
    join_all,
    piso_join,
    piso_leq,
    product_is_partial_isometry,
    projection_join,
)

E = ExactMatrix.unit
F = Fraction
# projection onto the line through (3/5, 4/5)
TILTED = ExactMatrix.from_rows([[F(9, 25), F(12, 25)], [F(12, 25), F(16, 25)]])


def test_projection_and_piso_basics():
    assert is_projection(E(2, 0, 0))
    assert not is_projection(E(2, 0, 1))
    assert is_partial_isometry(E(2, 0, 1))
    assert is_projection(TILTED)
    assert not is_partial_isometry(ExactMatrix.from_rows([[1, 1], [0, 0]]))


def test_phase_partial_isometry():
    i = GaussianRational(0, 1)
    s = ExactMatrix.from_rows([[0, i, 0], [0, 0, 0], [-1, 0, 0]])
    assert is_partial_isometry(s)
    assert initial_projection(s) == ExactMatrix.diagonal([1, 1, 0])


def test_order_on_matrix_units():
    big = E(3, 0, 1) + E(3, 2, 0)
    assert piso_leq(E(3, 0, 1), big)
    assert not piso_leq(big, E(3, 0, 1))
    assert not piso_leq(E(3, 1, 1), big)
    with pytest.raises(PreconditionError):
        piso_leq(ExactMatrix.from_rows([[1, 1], [0, 0]]), E(2, 0, 0))


def test_compatibility_and_join():
    s, t = E(3, 0, 0), E(3, 1, 2)
    assert compatible(s, t)
    assert piso_join(s, t) == s + t
    # same source, different range: not compatible
    assert not compatible(E(3, 0, 0), E(3, 1, 0))
    with pytest.raises(PreconditionError):
        piso_join(E(3, 0, 0), E(3, 1, 0))


def test_join_all_of_a_permutation():
    parts = [E(3, 1, 0), E(3, 2, 1), E(3, 0, 2)]
    u = join_all(parts)
    assert u @ u.adjoint() == ExactMatrix.identity(3)
    with pytest.raises(PreconditionError):
        join_all([])


def test_projection_join_requires_commuting():
    p = E(2, 0, 0)
    assert projection_join(p, E(2, 1, 1)) == ExactMatrix.identity(2)
    with pytest.raises(PreconditionError):
        projection_join(p, TILTED)


def test_product_of_partial_isometries():
    assert product_is_partial_isometry(E(2, 0, 1), E(2, 1, 0))
    assert not product_is_partial_isometry(E(2, 0, 0), TILTED)
    assert not is_partial_isometry(E(2, 0, 0) @ TILTED)


def test_star_semigroup_of_shift():
    shift = E(3, 1, 0) + E(3, 2, 1)
    elems = generate_star_semigroup([shift], 6)
    assert ExactMatrix.zero(3) in elems
    assert all(is_partial_isometry(m) for m in elems)
    # s, s*, and words reduce to s^a s*^b forms: finitely many in 3 dimensions
    assert len(elems) == len(generate_star_semigroup([shift], 8))


def test_tameness():
    shift = E(3, 1, 0) + E(3, 2, 1)
    verdict = is_tame([shift], 4)
    assert verdict.tame_up_to_bound
    bad = is_tame([E(2, 0, 0), TILTED], 3)
    assert not bad.tame_up_to_bound
    assert not is_partial_isometry(bad.witness_matrix)
    assert "witness_word" in bad.to_json()
