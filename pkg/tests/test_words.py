import random

import pytest

from constel.words import (EMPTY, Alphabet, Word, concat, format_word, invert,
                           parse_word, power, reduce, word)

A2 = Alphabet.of_size(2)
A3 = Alphabet.of_size(3)


def rand_word(rng, n_letters, length):
    return Word(tuple((rng.randrange(n_letters), rng.choice((1, -1)))
                      for _ in range(length)))


def test_parse_format_round_trip():
    for text in ("", "a", "A", "abA", "aaBBc"):
        w = parse_word(text, A3)
        assert format_word(w) == text


def test_parse_rejects_unknown_letter():
    with pytest.raises(ValueError):
        parse_word("abc", A2)
    with pytest.raises(ValueError):
        parse_word("a!", A2)


def test_parse_verbose_syntax():
    assert parse_word("a b^-1 a", A2) == parse_word("aBa", A2)
    assert parse_word("a^3", A2) == parse_word("aaa", A2)


def test_reduce_examples():
    assert format_word(reduce(parse_word("aA", A2))) == ""
    assert format_word(reduce(parse_word("abBA", A2))) == ""
    assert format_word(reduce(parse_word("abAB", A2))) == "abAB"
    assert format_word(reduce(parse_word("aabBa", A2))) == "aaa"


def test_reduce_idempotent_random():
    rng = random.Random(7)
    for _ in range(200):
        w = rand_word(rng, 3, rng.randrange(12))
        r = reduce(w)
        assert reduce(r) == r
        assert r.reduced


def test_invert_involutive_and_anti():
    rng = random.Random(8)
    for _ in range(100):
        u = rand_word(rng, 2, rng.randrange(8))
        v = rand_word(rng, 2, rng.randrange(8))
        assert invert(invert(u)) == u
        # (uv)^-1 = v^-1 u^-1 as raw letter strings
        assert invert(concat(u, v)) == concat(invert(v), invert(u))


def test_concat_variadic_and_operators():
    u, v, w = parse_word("a", A2), parse_word("b", A2), parse_word("A", A2)
    assert concat(u, v, w) == parse_word("abA", A2)
    assert concat() == EMPTY
    assert u * v == parse_word("ab", A2)
    assert ~u == parse_word("A", A2)


def test_power():
    a = parse_word("ab", A2)
    assert power(a, 0) == EMPTY
    assert power(a, 3) == parse_word("ababab", A2)
    assert power(a, -2) == parse_word("BABA", A2)


def test_word_constructor_validates():
    assert word([(0, 1), (1, -1)]) == parse_word("aB", A2)
    with pytest.raises(ValueError):
        word([(0, 2)])
    with pytest.raises(ValueError):
        word([(-1, 1)])


def test_alphabet():
    assert A2.size == 2
    assert A2.index("b") == 1
    with pytest.raises(ValueError):
        Alphabet.of_size(27)
    with pytest.raises(ValueError):
        A2.index("c")


def test_max_letter():
    assert EMPTY.max_letter() == -1
    assert parse_word("abc", A3).max_letter() == 2
