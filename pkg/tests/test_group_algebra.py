import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nzalex.errors import NoKernel, RankDeficient
from nzalex.group_algebra import (AlphaMap, GroupRingElem, abelianization, cyclic_reduce,
                                  eliminate, exponent_sum, fox_derivative, integer_kernel,
                                  inv, mul, reduce_word, word, word_str)

GENS = ["a", "b", "c"]
LETTERS = st.tuples(st.sampled_from(GENS), st.sampled_from([1, -1]))
WORDS = st.lists(LETTERS, max_size=40).map(reduce_word)


def elem(w):
    return GroupRingElem.from_word(w)


def test_word_parsing_and_printing():
    w = word("g3 g4^-1 g4 g2")
    assert w == (("g3", 1), ("g2", 1))
    assert word_str(w) == "g3 g2"
    assert word_str(()) == "1"


def test_fox_basic():
    w = word("a b a^-1")
    assert fox_derivative(w, "a") == 1 - elem(word("a b a^-1"))
    assert fox_derivative(w, "b") == elem(word("a"))


@settings(max_examples=300, deadline=None)
@given(WORDS)
def test_fox_fundamental_identity(w):
    rhs = GroupRingElem()
    for g in GENS:
        rhs = rhs + fox_derivative(w, g) * (elem(((g, 1),)) - 1)
    assert rhs == elem(w) - 1


@settings(max_examples=200, deadline=None)
@given(WORDS, WORDS, st.sampled_from(GENS))
def test_fox_product_rule(u, v, g):
    assert fox_derivative(mul(u, v), g) == fox_derivative(u, g) + elem(u) * fox_derivative(v, g)


@settings(max_examples=200, deadline=None)
@given(WORDS, WORDS)
def test_involution_is_anti_homomorphism(u, v):
    x, y = elem(u) + 2 * elem(v), elem(v) - 1
    assert (x * y).involution() == y.involution() * x.involution()


@settings(max_examples=200, deadline=None)
@given(WORDS, WORDS, WORDS)
def test_ring_axioms(u, v, w):
    x, y, z = elem(u) - 1, elem(v) + elem(w), 3 * elem(w)
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert (x * y).augment() == x.augment() * y.augment()


@settings(max_examples=200, deadline=None)
@given(WORDS)
def test_reduction_and_inverse(w):
    assert reduce_word(w) == w
    assert mul(w, inv(w)) == ()
    c = cyclic_reduce(w)
    assert all(exponent_sum(c, g) == exponent_sum(w, g) for g in GENS)


def test_eliminate():
    assert eliminate(word("g1 g2 z1 g1^-1 g3"), {"g1", "z1"}) == word("g2 g3")


def test_integer_kernel():
    rows = [[1, 2, 3], [2, 4, 6]]
    ker = integer_kernel(rows, 3)
    assert len(ker) == 2
    for v in ker:
        assert all(sum(r[i] * v[i] for i in range(3)) == 0 for r in rows)


def test_abelianization_fig8_presentation():
    rels = [word("g2 g3^-1 g4^-1 g3 g4"), word("g3 g2 g4 g2^-1")]
    alpha = abelianization(rels, ["g3", "g4", "g2"], meridian="g4")
    assert (alpha["g3"], alpha["g4"], alpha["g2"]) == (-1, 1, 0)
    assert alpha.kills(rels)
    assert abelianization(rels, ["g3", "g4", "g2"]) == -alpha


def test_abelianization_errors():
    with pytest.raises(RankDeficient):
        abelianization([word("a b a^-1 b^-1")], ["a", "b"])
    with pytest.raises(NoKernel):
        abelianization([word("a"), word("b")], ["a", "b"])


def test_alpha_parse():
    a = AlphaMap.parse("g2=0, g3=-1,g4=1")
    assert a(word("g3 g4 g4")) == 1
