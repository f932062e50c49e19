import pytest

from partiality.actions import bernoulli_partial, enumerate_partial_actions, validate_action
from partiality.algebras import crossed_product
from partiality.errors import PreconditionError
from partiality.exact import ExactMatrix
from partiality.groups import cyclic_group, klein_group
from partiality.reps import (
    FreePartialRep,
    PartialRep,
    compress,
    covariant_validate,
    induced_system,
    integrated_form,
    prep_from_json,
    prep_from_tame,
    validate_prep,
)


def action_rep(a):
    """u_g e_x = e_(theta_g(x)) on the span of the carrier."""
    idx = {x: i for i, x in enumerate(a.carrier)}
    n = len(idx)
    values = {}
    for g in a.group.elements():
        items = {(idx[a.theta(g, x)], idx[x]): 1 for x in a.domain(a.group.inverse(g))}
        values[g] = ExactMatrix.from_sparse(n, n, items)
    return PartialRep(a.group, values)


def regular_rep(G):
    n = G.order
    return PartialRep(G, {g: ExactMatrix.from_sparse(n, n, {(G.mul(g, h), h): 1 for h in G.elements()})
                          for g in G.elements()})


def test_reps_from_partial_actions_are_valid():
    for G in (cyclic_group(2), cyclic_group(3)):
        for a in enumerate_partial_actions(G, [0, 1, 2]):
            v = validate_prep(action_rep(a))
            assert v.ok, v.to_json()
            assert v.derived


def test_violations_are_named():
    G = cyclic_group(2)
    e12 = ExactMatrix.unit(2, 0, 1)
    bad = PartialRep(G, {0: ExactMatrix.identity(2), 1: e12})
    v = validate_prep(bad)
    assert not v.ok and v.axiom == "u_(g^-1) = u_g*"
    # a non-unital value at the identity
    v = validate_prep(PartialRep(G, {0: ExactMatrix.unit(2, 0, 0), 1: ExactMatrix.unit(2, 0, 0)}))
    assert not v.ok and v.axiom == "u_1 = 1"


def test_composition_axiom_failure():
    # u_1 = s on Z3 with u_2 = s*, but s^2 is not dominated by u_2 = s*
    G = cyclic_group(3)
    s = ExactMatrix.unit(3, 1, 0) + ExactMatrix.unit(3, 2, 1)
    v = validate_prep(PartialRep(G, {0: ExactMatrix.identity(3), 1: s, 2: s.adjoint()}))
    assert not v.ok
    assert v.witness


def test_json_round_trip():
    r = action_rep(bernoulli_partial(cyclic_group(3)))
    again = prep_from_json(r.to_json())
    assert all(again.u(g) == r.u(g) for g in r.elements())


def test_compression_of_regular_representation():
    G = cyclic_group(3)
    p = ExactMatrix.diagonal([1, 1, 0])
    c = compress(regular_rep(G), p)
    assert validate_prep(c).ok
    assert c.u(0) == p
    with pytest.raises(PreconditionError):
        compress(regular_rep(G), ExactMatrix.from_rows([[1, 1, 0], [0, 0, 0], [0, 0, 0]]))


def test_induced_system_recovers_bernoulli():
    G = klein_group()
    r = action_rep(bernoulli_partial(G))
    system = induced_system(r)
    spectral = system.spectral_action()
    assert validate_action(spectral).ok
    assert len(spectral.carrier) == 2 ** (G.order - 1)
    # the minimal projections are labelled by the subsets themselves
    assert set(spectral.carrier) == set(bernoulli_partial(G).carrier)


def test_covariant_pair_and_integrated_form():
    r = action_rep(bernoulli_partial(cyclic_group(3)))
    system = induced_system(r)
    pi = system.subalgebra.matrices
    assert covariant_validate(pi, r, system.action).ok
    cp = crossed_product(system.action)
    images, verdict = integrated_form(pi, r, cp)
    assert len(images) == cp.dim
    assert verdict.pi_injective


def test_free_group_rep_from_tame_generator():
    shift = ExactMatrix.unit(3, 1, 0) + ExactMatrix.unit(3, 2, 1)
    rep = prep_from_tame([shift])
    assert isinstance(rep, FreePartialRep)
    a = rep.word("a")
    assert rep.u(a * a) == shift @ shift
    assert rep.u(a.inverse()) == shift.adjoint()
    assert validate_prep(rep, 3).ok
