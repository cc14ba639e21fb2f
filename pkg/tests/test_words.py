import random

import pytest

from app.services.words import (
    GroupElement,
    NormOracle,
    PositiveElement,
    PositiveWord,
    equals,
    format_element,
    inverse,
    left_gcd,
    letter_inverse,
    mult,
    norm,
    normalize,
    one_delta_check,
    parse_element,
    parse_positive,
    parse_word,
    positive,
    power,
    right_normalize,
    sample_element,
    sample_positive,
    word_length,
)
from app.utils import BudgetExceeded, GermMismatch, ParseError, UnknownSimple


def element(germ, text):
    return parse_element(germ, text)


def test_sts_is_delta(a2):
    word, deltas = normalize(a2, parse_word(a2, "s.t.s"))

    assert word.letters == ()
    assert deltas == 1
    assert format_element(element(a2, "s.t.s")) == "@1"


def test_empty_word_is_identity(a2):
    g = element(a2, "")

    assert g.is_identity()
    assert format_element(g) == ""


def test_greedy_normal_form_merges_letters(a2):
    assert format_element(element(a2, "s.t")) == "st"
    assert format_element(element(a2, "s.s")) == "s.s"
    assert format_element(element(a2, "s.t.t.s")) == "st.ts"


def test_braid_relation(a2):
    assert equals(element(a2, "s.t.s"), element(a2, "t.s.t"))
    assert not equals(element(a2, "s.t"), element(a2, "t.s"))


def test_delta_moves_past_letters_by_sigma(a2):
    # Δ·s = t·Δ
    assert format_element(element(a2, "sts.s")) == "t@1"


def test_parse_and_format_exponents(a2):
    g = element(a2, "s.t@-2")

    assert g.exp == -2
    assert format_element(g) == "st@-2"
    assert format_element(element(a2, "@3")) == "@3"


def test_letter_inverse(a2):
    s = a2.id_of("s")
    inv = letter_inverse(a2, s)

    assert format_element(inv) == "ts@-1"
    assert mult(GroupElement.from_letters(a2, [s]), inv).is_identity()


def test_inverse_and_product_round_trip(a2, dual_a3):
    rand = random.Random(7)
    for germ in (a2, dual_a3):
        for _ in range(25):
            g = sample_element(germ, 5, rand)
            assert mult(g, inverse(g)).is_identity()
            assert mult(inverse(g), g).is_identity()


def test_inverse_of_specific_elements(a2):
    assert format_element(inverse(element(a2, "s.t"))) == "s@-1"
    assert format_element(inverse(element(a2, "s.s"))) == "ts.st@-2"


def test_multiplication_is_associative(dual_a3):
    rand = random.Random(11)
    for _ in range(25):
        f, g, h = (sample_element(dual_a3, 4, rand) for _ in range(3))
        assert equals(mult(mult(f, g), h), mult(f, mult(g, h)))


def test_power(a2):
    s = element(a2, "s")

    assert format_element(power(s, 0)) == ""
    assert format_element(power(s, 3)) == "s.s.s"
    assert equals(power(s, -2), inverse(mult(s, s)))
    assert format_element(power(element(a2, "@1"), 5)) == "@5"


def test_as_positive_shifts_by_sigma(a2):
    u = element(a2, "s@1").as_positive()

    assert u.deltas == 1
    assert u.word.names() == ["t"]
    with pytest.raises(ValueError):
        element(a2, "s@-1").as_positive()


def test_right_normal_form(a2):
    letters = right_normalize(a2, parse_word(a2, "s.t"))

    assert [a2.names[x] for x in letters] == ["st"]
    delta_last = right_normalize(a2, parse_word(a2, "t.s.t.s"))
    assert delta_last[-1] == a2.delta


def test_left_gcd(a2):
    u = parse_positive(a2, "s.t")
    v = parse_positive(a2, "s.s")

    assert left_gcd(u, v).word.names() == ["s"]
    assert left_gcd(u, parse_positive(a2, "t.s")).letters == ()
    d = left_gcd(parse_positive(a2, "@2"), parse_positive(a2, "s.t.s.t"))
    assert format_element(d.to_group()) == "s@1"


def test_norm(a2):
    assert norm(parse_positive(a2, "")) == 0
    assert norm(parse_positive(a2, "st")) == 2
    assert norm(parse_positive(a2, "@1")) == 3
    assert norm(parse_positive(a2, "@2")) == 6
    assert norm(parse_positive(a2, "s.s.t")) == 3


def test_norm_budget(a2):
    oracle = NormOracle(a2, node_limit=1)

    with pytest.raises(BudgetExceeded):
        oracle.norm(parse_positive(a2, "@4"))


def test_word_length(a2):
    assert word_length(element(a2, "s.t@-2")) == 3
    assert word_length(element(a2, "@1")) == 1


def test_one_delta_check(a2):
    w = PositiveWord(a2, (a2.id_of("st"),))

    assert one_delta_check(w, a2.id_of("s"))
    assert one_delta_check(w, a2.id_of("t"))


def test_sampled_words_are_greedy(dual_a3):
    rand = random.Random(3)
    for _ in range(20):
        w = sample_positive(dual_a3, 6, rand)
        word, deltas = normalize(dual_a3, w.letters)
        assert deltas == 0
        assert word.letters == w.letters


def test_parse_errors(a2):
    with pytest.raises(UnknownSimple):
        element(a2, "s.q")
    with pytest.raises(ParseError):
        element(a2, "s..t")
    with pytest.raises(ParseError):
        element(a2, "s@x")
    with pytest.raises(ParseError):
        parse_positive(a2, "s@-1")


def test_mixing_germs_is_rejected(a2, dual_a2):
    with pytest.raises(GermMismatch):
        mult(element(a2, "s"), GroupElement(PositiveWord(dual_a2, (1,)), 0))


def test_positive_element_letters(a2):
    u = positive(a2, parse_word(a2, "s.t.s.s"))

    assert u.deltas == 1
    assert u.word.names() == ["s"]
    assert u.letters == (a2.delta, a2.id_of("s"))
    assert isinstance(u, PositiveElement)
