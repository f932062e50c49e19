import pytest
from hypothesis import given, strategies as st

from partiality.errors import FormatError, PreconditionError
from partiality.groups import (
    FiniteGroup,
    FreeWord,
    TruncatedIntegers,
    builtin_group,
    cancellation_count,
    cyclic_group,
    generated_subgroup,
    group_from_json,
    klein_group,
    parse_word,
    positive_words,
    reduced_words,
    subgroups,
    symmetric_group_3,
    word_length,
)

AB = ("a", "b")


@pytest.mark.parametrize("name,order", [("Z2", 2), ("Z_n(5)", 5), ("Z2xZ2", 4), ("S3", 6)])
def test_builtin_groups_are_groups(name, order):
    G = builtin_group(name)
    assert G.order == order
    G.validate()
    for g in G.elements():
        assert G.mul(g, G.inverse(g)) == G.unit
        assert G.parse(G.label(g)) == g


def test_klein_labels_and_abelian():
    V = klein_group()
    assert V.labels == ("e", "a", "b", "ab")
    assert V.is_abelian()
    assert not symmetric_group_3().is_abelian()


def test_group_json_round_trip():
    G = cyclic_group(4)
    again = group_from_json(G.to_json())
    assert again.mult == G.mult
    table = {"mult": [[0, 1], [1, 0]], "labels": ["1", "t"]}
    assert group_from_json(table).order == 2


def test_bad_tables_rejected():
    with pytest.raises(FormatError):
        FiniteGroup([[0, 1], [0, 1]])
    with pytest.raises(FormatError):
        group_from_json({"nothing": 1})
    with pytest.raises(FormatError):
        builtin_group("Q8")


def test_subgroup_counts():
    # Z4 has 3 subgroups, the Klein group 5, S3 has 6
    assert len(subgroups(cyclic_group(4))) == 3
    assert len(subgroups(klein_group())) == 5
    assert len(subgroups(symmetric_group_3())) == 6
    assert generated_subgroup(cyclic_group(6), [2]) == frozenset({0, 2, 4})


def test_word_length_cyclic():
    G = cyclic_group(5)
    L = word_length(G, [1])
    assert [L(g) for g in G.elements()] == [0, 1, 2, 2, 1]
    L.validate()
    assert L.is_additive_pair(1, 1)
    assert not L.is_additive_pair(2, 2)


def test_word_length_needs_generation():
    with pytest.raises(PreconditionError):
        word_length(cyclic_group(4), [2])


def test_truncated_integers():
    Z = TruncatedIntegers(2)
    assert list(Z.elements()) == [-2, -1, 0, 1, 2]
    assert Z.mul(5, -7) == -2
    assert Z.contains(2) and not Z.contains(3)
    assert builtin_group("Z_trunc(2)").window == 2


def test_free_word_reduction_and_printing():
    w = FreeWord(AB, [("a", 1), ("b", 1), ("b", -1), ("a", -1), ("a", -1)])
    assert str(w) == "a^-1"
    assert parse_word(AB, "ab^-1a") == parse_word(AB, "a b^-1 a")
    assert parse_word(AB, "a^3").letters == (("a", 1),) * 3
    assert parse_word(AB, "1").is_identity()
    with pytest.raises(FormatError):
        parse_word(AB, "c")


def test_positive_negative_split():
    w = parse_word(AB, "a b b^-1")
    assert w.positive_negative_split() == (("a",), ())
    w = parse_word(AB, "a b a^-1")
    assert w.positive_negative_split() == (("a", "b"), ("a",))
    assert parse_word(AB, "a^-1 b").positive_negative_split() is None


def test_word_counts():
    # 1 + 4 + 12 + 36 reduced words in F2 up to length 3
    assert len(reduced_words(AB, 3)) == 53
    assert len(positive_words(AB, 3)) == 15
    assert all(w.is_positive() for w in positive_words(AB, 3))


words = st.lists(st.tuples(st.sampled_from(AB), st.sampled_from([1, -1])), max_size=8).map(
    lambda ls: FreeWord(AB, ls))


@given(words, words, words)
def test_free_group_axioms(u, v, w):
    assert (u * v) * w == u * (v * w)
    assert (u * u.inverse()).is_identity()
    assert len(u * v) == len(u) + len(v) - 2 * cancellation_count(u, v)


@given(words)
def test_word_json_round_trip(w):
    assert FreeWord.from_json(w.to_json()) == w
    assert parse_word(AB, str(w)) == w


def test_power_and_prefix():
    a = FreeWord.generator(AB, "a")
    assert a.power(3).names() == ("a", "a", "a")
    assert a.power(-2) == a.inverse() * a.inverse()
    assert a.is_prefix_of(parse_word(AB, "a b"))
    assert not FreeWord.generator(AB, "b").is_prefix_of(parse_word(AB, "a b"))
