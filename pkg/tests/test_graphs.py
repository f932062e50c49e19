import pytest

from partiality.errors import FormatError, PreconditionError
from partiality.exact import ExactMatrix
from partiality.graphs import (
    DirectedGraph,
    Edge,
    EvPeriodicPath,
    FinPath,
    bouquet,
    configuration_bijection_check,
    cycle_analysis,
    cycle_analysis_bruteforce,
    enumerate_sink_free_graphs,
    family_from_json,
    fixed_points,
    fixed_points_bruteforce,
    graph_semigroup_mult,
    graph_semigroup_oracle_check,
    is_isolated_in_boundary,
    omega_bruteforce,
    omega_of_path,
    parse_path,
    sg_element,
    single_loop,
    standard_form,
    tau_apply,
    toeplitz_relations_check,
    verdicts,
    weakly_transitive,
    weakly_transitive_bruteforce,
)

E = ExactMatrix.unit


def entry_but_transitory():
    """A 2-cycle x <-> y fed by a source t: every cycle has an entry, none recurs."""
    return DirectedGraph(["x", "y", "t"], [Edge("p", "y", "x"), Edge("q", "x", "y"), Edge("o", "x", "t")])


def test_graph_json_and_errors():
    g = entry_but_transitory()
    assert DirectedGraph.from_json(g.to_json()).to_json() == g.to_json()
    with pytest.raises(FormatError):
        DirectedGraph(["v"], [Edge("a", "v", "w")])
    with pytest.raises(FormatError):
        DirectedGraph.from_json({"vertices": ["v"]})


def test_path_parsing():
    g = bouquet(2)
    assert parse_path(g, "EMPTY") is None
    assert parse_path(g, "v:v") == FinPath("v", ())
    p = parse_path(g, "b;a")
    assert isinstance(p, EvPeriodicPath)
    assert p.label() == "b (a)^inf"
    # a periodic tail is stored with a primitive cycle and a minimal prefix
    assert parse_path(g, "a;aa") == parse_path(g, ";a")


def test_standard_form_and_tau():
    g = bouquet(2)
    sf = standard_form(g, "a b^-1")
    assert sf.mu.edges == ("a",) and sf.nu.edges == ("b",)
    assert standard_form(g, "a^-1 b") is None
    with pytest.raises(PreconditionError):
        standard_form(g, "1")
    assert tau_apply(g, "a b^-1", parse_path(g, "b;a")) == parse_path(g, ";a")
    assert tau_apply(g, "a b^-1", parse_path(g, "a;b")) is None
    assert tau_apply(g, "b a b^-1", parse_path(g, "b;a")) == parse_path(g, "b;a")


def test_fixed_points_against_bruteforce():
    g = bouquet(2)
    w = g.word("b a b^-1")
    point = fixed_points(g, w)
    assert point.label() == "b (a)^inf"
    assert point in fixed_points_bruteforce(g, w, 4)
    assert fixed_points(g, g.word("a b^-1")) is None


def test_omega_of_loop():
    g = single_loop()
    p = parse_path(g, ";a")
    got = omega_of_path(g, p, 2)
    assert {str(x) for x in got} == {"1", "a", "a a", "a^-1", "a^-1 a^-1"}
    assert got == omega_bruteforce(g, p, 2)


def test_configuration_bijection():
    for g in (single_loop(), bouquet(2), entry_but_transitory()):
        assert configuration_bijection_check(g, path_len=2, radius=2)["ok"]


def test_cycle_analysis_examples():
    loop = cycle_analysis(single_loop())
    assert loop["every_cycle_has_entry"] is False
    assert loop["witnesses"]["cycle_without_entry"] == ["a"]
    g = entry_but_transitory()
    out = cycle_analysis(g)
    assert out["every_cycle_has_entry"] and not out["every_cycle_recurrent"]
    assert {k: out[k] for k in ("every_cycle_has_entry", "every_cycle_recurrent")} == cycle_analysis_bruteforce(g)
    assert weakly_transitive(g) == weakly_transitive_bruteforce(g)


def test_weak_transitivity_small_graphs():
    for g in list(enumerate_sink_free_graphs(2, 3)):
        assert weakly_transitive(g) == weakly_transitive_bruteforce(g)


def test_graph_enumeration_is_sink_free():
    graphs = list(enumerate_sink_free_graphs(2, 3))
    assert graphs
    assert all(g.out_of[v] for g in graphs for v in g.vertices)


def test_verdicts():
    assert verdicts(bouquet(2))["simple"] is True
    loop = verdicts(single_loop())
    assert loop["simple"] is None
    assert loop["topologically_free_boundary"] is False
    assert loop["topologically_free_full_path_space"] is True


def test_isolated_points():
    assert is_isolated_in_boundary(single_loop(), parse_path(single_loop(), ";a"))
    assert not is_isolated_in_boundary(bouquet(2), parse_path(bouquet(2), ";a"))


def test_semigroup_product_and_oracle():
    g = bouquet(2)
    a = parse_path(g, ["a"])
    v = parse_path(g, "v:v")
    x = sg_element(g, a, v)
    assert graph_semigroup_mult(g, sg_element(g, v, a), x) == sg_element(g, v, v)
    assert graph_semigroup_mult(g, sg_element(g, v, parse_path(g, ["b"])), x) is None
    assert graph_semigroup_oracle_check(g)["ok"]
    assert graph_semigroup_oracle_check(entry_but_transitory())["ok"]


def test_toeplitz_family():
    g = DirectedGraph(["v", "w"], [Edge("e", "w", "v")])
    ps = {"v": E(2, 0, 0), "w": E(2, 1, 1)}
    ss = {"e": E(2, 1, 0)}
    out = toeplitz_relations_check(g, ps, ss, include_ck=True)
    assert out["ok"] and out["sum_relation"]
    # a strict Toeplitz family: the range of s[e] is smaller than p[w]
    ps3 = {"v": E(3, 0, 0), "w": E(3, 1, 1) + E(3, 2, 2)}
    ss3 = {"e": E(3, 1, 0)}
    strict = toeplitz_relations_check(g, ps3, ss3, include_ck=True)
    assert strict["orthogonality"] and strict["range_domination"]
    assert strict["sum_relation"] is False


def test_family_json():
    g = DirectedGraph(["v", "w"], [Edge("e", "w", "v")])
    data = {"P": {"v": E(2, 0, 0).to_json(), "w": E(2, 1, 1).to_json()}, "S": {"e": E(2, 1, 0).to_json()}}
    ps, ss = family_from_json(g, data)
    assert ss["e"] == E(2, 1, 0)
    with pytest.raises(FormatError):
        family_from_json(g, {"P": {}})
