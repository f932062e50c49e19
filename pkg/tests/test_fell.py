import random

import pytest

from partiality.actions import bernoulli_partial, global_action, truncated_shift_action
from partiality.algebras import function_algebra_action
from partiality.errors import PreconditionError
from partiality.fell import (
    FiniteFellBundle,
    RegularRepresentation,
    bessel_complement,
    bundle_grading_check,
    check_matrix_coefficients,
    convolution_algebra,
    convolve,
    fourier_all,
    group_bundle,
    j_section,
    positivity_check,
    random_section,
    saturation_predicates,
    section_star,
    semidirect_bundle,
)
from partiality.groups import cyclic_group, klein_group, word_length


def bernoulli_bundle(G):
    return semidirect_bundle(function_algebra_action(bernoulli_partial(G)))


def test_fiber_dimensions():
    b = bernoulli_bundle(cyclic_group(3))
    b.validate()
    assert [b.fiber_dim(g) for g in b.group.elements()] == [4, 2, 2]
    assert group_bundle(klein_group()).dim == 4


def test_bundle_json_round_trip():
    b = bernoulli_bundle(cyclic_group(2))
    again = FiniteFellBundle.from_json(b.to_json())
    assert again.to_json() == b.to_json()


def test_convolution_is_associative_and_starred():
    rng = random.Random(3)
    b = bernoulli_bundle(klein_group())
    for _ in range(10):
        x, y, z = (random_section(b, rng) for _ in range(3))
        assert convolve(b, convolve(b, x, y), z) == convolve(b, x, convolve(b, y, z))
        assert section_star(b, convolve(b, x, y)) == convolve(b, section_star(b, y), section_star(b, x))
    convolution_algebra(b).validate()


def test_regular_representation_and_coefficients():
    rng = random.Random(5)
    b = bernoulli_bundle(cyclic_group(3))
    reg = RegularRepresentation(b)
    reg.validate()
    y = random_section(b, rng)
    z = reg.of_section(y)
    assert fourier_all(reg, z) == y
    check_matrix_coefficients(reg, z)
    assert bessel_complement(reg, y, {1})


def test_lambda_rejects_wrong_fiber():
    b = bernoulli_bundle(cyclic_group(2))
    reg = RegularRepresentation(b)
    outside = b.fiber_basis(b.group.unit)[0]
    with pytest.raises(PreconditionError):
        reg.lam(1, outside)


def test_section_embedding():
    b = group_bundle(cyclic_group(3))
    s = j_section(b, 1, b.fiber_basis(1)[0])
    assert convolve(b, s, s) == j_section(b, 2, b.fiber_basis(2)[0])


def test_saturation():
    G = cyclic_group(3)
    assert saturation_predicates(group_bundle(G)) == {"saturated": True}
    glob = global_action(G, list(G.elements()), lambda g, x: G.mul(g, x))
    assert saturation_predicates(semidirect_bundle(function_algebra_action(glob)))["saturated"]
    partial = saturation_predicates(bernoulli_bundle(G), word_length(G, [1]))
    assert partial["saturated"] is False
    assert partial["semi_saturated"] is True


def test_grading_and_positivity():
    b = bernoulli_bundle(cyclic_group(3))
    verdict = bundle_grading_check(b)
    assert verdict.ok and verdict.faithful
    assert positivity_check(b) == {"checked": True, "positive": True}


def test_shift_bundle_has_thin_fibers():
    b = semidirect_bundle(function_algebra_action(truncated_shift_action(3)))
    assert sum(b.fiber_dim(g) for g in b.group.elements()) == b.dim == 9
