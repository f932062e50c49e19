import json

import pytest

from partiality.actions import (
    FinitePartialAction,
    bernoulli_partial,
    enumerate_partial_actions,
    equivalent,
    fixed_points,
    free_action_from_symmetries,
    globalize,
    globalize_by_orbit_functions,
    is_free,
    is_invariant,
    require_valid,
    restrict_global,
    saturate,
    truncated_shift_action,
    validate_action,
)
from partiality.errors import FormatError, PreconditionError, UnsupportedError
from partiality.groups import cyclic_group, klein_group, parse_word


def flip_on_two_of_three():
    G = cyclic_group(2)
    return FinitePartialAction(
        G, ["x", "y", "z"],
        {0: {"x", "y", "z"}, 1: {"x", "y"}},
        {0: {"x": "x", "y": "y", "z": "z"}, 1: {"x": "y", "y": "x"}},
    )


def test_valid_action_and_json_round_trip():
    a = flip_on_two_of_three()
    assert validate_action(a).ok
    data = json.loads(json.dumps(a.to_json()))
    b = FinitePartialAction.from_json(data)
    assert b.to_json() == a.to_json()


def test_composition_failure_reports_axiom():
    # theta_1 maps 0 -> 1 on Z3, theta_2 its inverse; theta_1 theta_1 (0) = 2 would be needed
    G = cyclic_group(3)
    a = FinitePartialAction(
        G, [0, 1, 2],
        {0: {0, 1, 2}, 1: {1, 2}, 2: {0, 1}},
        {0: {0: 0, 1: 1, 2: 2}, 1: {0: 1, 1: 2}, 2: {1: 0, 2: 1}},
    )
    v = validate_action(a)
    assert not v.ok
    assert "D_gh" in v.axiom or "theta_gh" in v.axiom
    with pytest.raises(PreconditionError):
        require_valid(a)


def test_structural_errors():
    G = cyclic_group(2)
    with pytest.raises(FormatError):
        FinitePartialAction(G, ["x"], {0: {"x"}, 1: {"x"}}, {0: {"x": "x"}, 1: {}})
    with pytest.raises(FormatError):
        FinitePartialAction.from_json({"group": "Z2", "carrier": ["x"]})


def test_bernoulli_domains():
    V = klein_group()
    b = bernoulli_partial(V)
    assert len(b.carrier) == 8
    assert all(len(b.domain(g)) == 4 for g in V.elements() if g != V.unit)
    assert validate_action(b).ok


def test_truncated_shift():
    a = truncated_shift_action(3)
    assert validate_action(a).ok
    assert a.theta(1, 0) == 1
    assert a.theta(1, 2) is None
    assert a.domain(2) == frozenset({2})


def test_globalization_of_flip():
    a = flip_on_two_of_three()
    glob = globalize(a)
    # orbit {x, y} stays, z gets a second copy
    assert len(glob.action.carrier) == 4
    assert glob.action.is_global()
    back = restrict_global(glob.action, glob.embedding.values())
    assert equivalent(a, back, fixed=glob.embedding) is not None
    other = globalize_by_orbit_functions(a)
    fixed = {glob.embedding[x]: other.embedding[x] for x in a.carrier}
    assert equivalent(glob.action, other.action, fixed=fixed) is not None


def test_equivalence_detects_difference():
    G = cyclic_group(2)
    acts = enumerate_partial_actions(G, [0, 1])
    assert len(acts) == 5
    pairs = [(p, q) for p in acts for q in acts if equivalent(p, q) is not None]
    # classes: empty domain, one fixed point (two actions), both fixed, swap
    assert len(pairs) == 1 + 4 + 1 + 1


def test_invariant_sets_and_saturation():
    b = bernoulli_partial(cyclic_group(3))
    full = frozenset({0, 1, 2})
    assert saturate(b, [full]) == {full}
    assert is_invariant(b, [full])
    assert saturate(b, [frozenset({0, 1})]) == {frozenset({0, 1}), frozenset({0, 2})}


def test_freeness():
    a = flip_on_two_of_three()
    assert is_free(a)
    G = cyclic_group(2)
    fixed = FinitePartialAction(G, ["x"], {0: {"x"}, 1: {"x"}}, {0: {"x": "x"}, 1: {"x": "x"}})
    assert fixed_points(fixed, 1) == {"x"}
    assert not is_free(fixed)


def test_free_group_action_from_symmetries():
    act = free_action_from_symmetries({"a": {0: 1, 1: 2}, "b": {2: 0}})
    w = parse_word(act.alphabet, "b a a")
    assert act.apply(w, 0) == 0
    assert act.apply(w, 1) is None
    assert act.domain(w) == frozenset({0})


def test_globalize_rejects_infinite_group():
    with pytest.raises(UnsupportedError):
        globalize(truncated_shift_action(3))
