import pytest

from partiality.actions import bernoulli_partial, truncated_shift_action
from partiality.algebras import (
    FinDimStarAlgebra,
    RelationSet,
    a_par,
    algebra_invariants,
    birget_rhodes_partial_rep,
    check_crossed_product_formulas,
    crossed_product,
    cstar_par_rel,
    function_algebra,
    function_algebra_action,
    isometry_relations,
    k_par,
    k_par_dimension_formula,
    kpar_dimension_by_span_closure,
    kpar_homomorphism,
    matrix_algebra,
    matrix_span_closure,
    spectrum,
    vanishing_relations,
)
from partiality.errors import FormatError
from partiality.exact import ExactMatrix
from partiality.groups import builtin_group, cyclic_group, klein_group


def test_matrix_algebra_invariants():
    M = matrix_algebra(2)
    M.validate()
    M.validate_star()
    assert algebra_invariants(M) == {"dim": 4, "center_dim": 1, "commutative": False}


def test_function_algebra_is_commutative():
    C = function_algebra(["p", "q", "r"])
    C.validate()
    assert algebra_invariants(C) == {"dim": 3, "center_dim": 3, "commutative": True}


def test_algebra_json_round_trip():
    M = matrix_algebra(2)
    again = FinDimStarAlgebra.from_json(M.to_json())
    assert again.products == M.products
    assert again.star_images == M.star_images
    with pytest.raises(FormatError):
        FinDimStarAlgebra.from_json({"dim": 2})


@pytest.mark.parametrize("action", [
    bernoulli_partial(cyclic_group(3)),
    bernoulli_partial(klein_group()),
    truncated_shift_action(3),
])
def test_crossed_product_formulas(action):
    cp = crossed_product(function_algebra_action(action))
    counts = check_crossed_product_formulas(cp)
    assert counts and all(v > 0 for v in counts.values())
    cp.algebra.validate_star()


@pytest.mark.parametrize("order", [2, 3, 4])
def test_kpar_dimension_formula(order):
    G = cyclic_group(order)
    assert k_par(G).dim == k_par_dimension_formula(order)
    assert len(a_par(G).points) == 2 ** (order - 1)


def test_kpar_span_closure_on_s3():
    # 2^5 + 5 * 2^4 = 112
    G = builtin_group("S3")
    assert kpar_dimension_by_span_closure(G) == k_par_dimension_formula(6) == 112


def test_universal_property_images():
    G = cyclic_group(3)
    kp = k_par(G)
    _, mats = birget_rhodes_partial_rep(G)
    images = kpar_homomorphism(kp, mats)
    span = matrix_span_closure(images, include_identity=False)
    assert len(span) == kp.dim
    ident = {g: ExactMatrix.identity(1) for g in G.elements()}
    # the trivial representation factors through, with a rank-one image
    assert len(matrix_span_closure(kpar_homomorphism(kp, ident), include_identity=False)) == 1


def test_relative_crossed_products():
    G = cyclic_group(3)
    trivial = cstar_par_rel(G, vanishing_relations(G))
    assert trivial.cp.dim == 1
    group_algebra = cstar_par_rel(G, isometry_relations(G, G.elements()))
    assert group_algebra.spectrum == [frozenset(G.elements())]
    assert group_algebra.cp.dim == 3
    assert algebra_invariants(group_algebra.cp.algebra)["commutative"]


def test_relation_json_round_trip():
    G = klein_group()
    rels = isometry_relations(G, [1])
    again = RelationSet.from_json(G, rels.to_json())
    assert spectrum(G, again) == spectrum(G, rels)
    with pytest.raises(FormatError):
        RelationSet.from_json(G, [{"nothing": []}])
