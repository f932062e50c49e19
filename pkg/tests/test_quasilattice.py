import pytest

from partiality.errors import FormatError, PreconditionError
from partiality.quasilattice import (
    FreeQL,
    GridQL,
    ScarparoQL,
    WHPair,
    compatibility_check,
    convergence_check,
    faithfulness_projection,
    hereditary_directed,
    hereditary_directed_bruteforce,
    inverse_semigroup_check,
    join,
    ncc_check,
    ore_well_defined_check,
    prep_axioms_check,
    prep_extend,
    scarparo_check,
    sigma_tau,
    structure_from_name,
    wh_apply,
    wh_label,
    wh_mult,
    wh_oracle_check,
)


def test_structure_names():
    assert isinstance(structure_from_name("ZN"), GridQL)
    assert structure_from_name("GridQL(2)").k == 2
    assert structure_from_name("FreeQL{x,y}").alphabet == ("x", "y")
    assert isinstance(structure_from_name("ScarparoQL"), ScarparoQL)
    with pytest.raises(FormatError):
        structure_from_name("Heisenberg")


def test_joins():
    grid = GridQL(2)
    assert join(grid, (2, 0), (1, 3)) == (2, 3)
    free = FreeQL()
    assert join(free, free.parse("ab"), free.parse("a")) == free.parse("ab")
    assert join(free, free.parse("a"), free.parse("b")) is None
    with pytest.raises(PreconditionError):
        join(free, free.parse("a^-1"), free.parse("a"))


def test_sigma_tau():
    free = FreeQL()
    g = free.parse("a b a^-1")
    s, t = sigma_tau(free, g)
    assert (free.label(s), free.label(t)) == ("ab", "a")
    assert sigma_tau(free, free.parse("a^-1 b")) is None
    assert sigma_tau(GridQL(2), (3, -1)) == ((3, 0), (0, 1))


def test_wiener_hopf_products():
    zn = GridQL(1)
    x = wh_mult(zn, WHPair((2,), (1,)), WHPair((3,), (4,)))
    assert wh_label(zn, x) == "v[4]v[4]*"
    assert wh_label(zn, prep_extend(zn, (-2,))) == "v[0]v[2]*"
    free = FreeQL()
    a, b = free.parse("a"), free.parse("b")
    assert wh_mult(free, WHPair(free.one, a), WHPair(b, free.one)) is None
    assert wh_label(free, None) == "0"


def test_symbolic_action_on_basis():
    free = FreeQL()
    x = WHPair(free.parse("b"), free.parse("a"))
    assert wh_apply(free, x, free.parse("aab")) == free.parse("bab")
    assert wh_apply(free, x, free.parse("ba")) is None


@pytest.mark.parametrize("name", ["ZN", "GridQL(2)", "FreeQL{a,b}"])
def test_semigroup_laws(name):
    ql = structure_from_name(name)
    assert inverse_semigroup_check(ql, 2, samples=200)["ok"]
    assert ncc_check(ql, 2)
    assert compatibility_check(ql, 2)
    assert prep_axioms_check(ql, 2)["ok"]


def test_ore_extension_on_grid():
    assert ore_well_defined_check(GridQL(2), 3)


def test_oracle_on_small_window():
    assert wh_oracle_check(GridQL(2), max_len=2, window=6)["ok"]
    assert wh_oracle_check(FreeQL(), max_len=2, window=6)["ok"]


def test_hereditary_sets_against_bruteforce():
    free = FreeQL()
    found = hereditary_directed(free, 2)
    assert found == hereditary_directed_bruteforce(free, 2)
    assert len(found) == 7
    line = GridQL(1)
    assert len(hereditary_directed(line, 3)) == 4
    assert hereditary_directed(line, 3) == hereditary_directed_bruteforce(line, 3)


def test_convergence_of_principal_sets():
    line = GridQL(1)
    assert convergence_check(line, [(1,), (3,), (5,), (7,)], 4)
    assert not convergence_check(line, [(3,), (1,)], 4)


def test_faithfulness_projection():
    free = FreeQL()
    out = faithfulness_projection(free, [free.parse("a")], 2)
    assert out["nonzero_witness"] == "1"
    assert "b" in out["witnesses"] and "a" not in out["witnesses"]
    with pytest.raises(PreconditionError):
        faithfulness_projection(free, [free.one], 2)


def test_scarparo_small_bound():
    out = scarparo_check(4)
    assert out["quasi_lattice_fails"]
    assert out["weak_quasi_lattice_consistent"]
    with pytest.raises(PreconditionError):
        scarparo_check(3)


def test_faithfulness_witness_sets():
    free = FreeQL()
    both = faithfulness_projection(free, [free.parse("a"), free.parse("b")], 2)
    assert both["witnesses"] == ["1"]
    square = faithfulness_projection(free, [free.parse("aa")], 2)
    assert square["witnesses"] == ["1", "a", "b", "ab", "ba", "bb"]
    assert faithfulness_projection(GridQL(1), [(1,)], 3)["witnesses"] == ["0"]
