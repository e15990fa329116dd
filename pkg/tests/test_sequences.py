import pytest
from hypothesis import given, strategies as st

from schottkylab import DSLSyntaxError, InvalidArgumentError, parse_family, shift
from schottkylab.sequences import AffineRule, FamilySpec, SymbolicSequence

from conftest import random_reduced_word


def expand(text, n):
    return parse_family(text).sequence().prefix(n)


def test_periodic_expansion():
    assert expand("periodic(ab)", 7) == "abababa"


def test_thm43_expansion():
    # b a b a^2 b a^3 ... with run lengths 1, 2, 3, ...
    assert expand("thm43(k)", 10) == "babaabaaab"


def test_thm42_expansion_displayed_pattern():
    # b a^2 b A^3 b a^4 b A^5 ... for rules 2k, 2k+1
    assert expand("thm42(2k,2k+1)", 14) == "baabAAAbaaaabA"
    assert expand("thm42(k,k+1)", 12) == "babAAbaabAAA"


def test_literal_and_exponents():
    assert expand("a^3b^2", 5) == "aaabb"
    assert expand("a b a", 3) == "aba"
    spec = parse_family("aaab")
    assert spec.kind == "literal"
    assert spec.sequence().length == 4


def test_render_roundtrip():
    for text in ("periodic(ab)", "thm43(k)", "thm42(2k,2k+1)", "thm43(3k+2)",
                 "a^3b^2A", "ab", "periodic(a)"):
        spec = parse_family(text)
        again = parse_family(spec.render())
        assert again == spec
        assert again.render() == spec.render()


def test_render_canonicalizes():
    assert parse_family("a a a b").render() == "a^3b"
    assert parse_family("a^2a").render() == "a^3"


def test_parse_errors_carry_position():
    with pytest.raises(DSLSyntaxError) as exc:
        parse_family("ax")
    assert exc.value.position == 1
    with pytest.raises(DSLSyntaxError):
        parse_family("")
    with pytest.raises(DSLSyntaxError) as exc:
        parse_family("thm43(q)")
    assert "rule" in str(exc.value)
    with pytest.raises(DSLSyntaxError):
        parse_family("thm42(k)")  # missing second rule
    with pytest.raises(DSLSyntaxError):
        parse_family("periodic(ab) junk")
    with pytest.raises(DSLSyntaxError):
        parse_family("a^0")


def test_nonreduced_literal_rejected_with_index():
    with pytest.raises(DSLSyntaxError) as exc:
        parse_family("a A")
    assert "index 0" in str(exc.value)
    with pytest.raises(DSLSyntaxError) as exc:
        parse_family("abBa")
    assert "index 1" in str(exc.value)


def test_periodic_wrap_rejected():
    with pytest.raises(DSLSyntaxError) as exc:
        parse_family("periodic(abA)")
    assert "wrap" in str(exc.value)
    # wrap with the same letter is fine
    assert expand("periodic(a)", 3) == "aaa"


def test_rule_must_increase():
    with pytest.raises(DSLSyntaxError) as exc:
        parse_family("thm43(0k)")
    assert "increasing" in str(exc.value)


def test_rule_forms():
    assert parse_family("thm43(k)").rule1 == AffineRule(1, 0)
    assert parse_family("thm43(2k)").rule1 == AffineRule(2, 0)
    assert parse_family("thm43(2k+1)").rule1 == AffineRule(2, 1)
    assert parse_family("thm43( 3k + 4 )").rule1 == AffineRule(3, 4)


@pytest.mark.parametrize("text", ["thm43(k)", "thm42(k,k+1)", "thm42(2k,2k+1)", "periodic(abAB)"])
def test_family_expansion_reduced_to_depth_10k(text):
    seq = parse_family(text).sequence()
    prefix = seq.prefix(10_000)  # symbol_at validates adjacent pairs as it fills
    assert len(prefix) == 10_000


def test_shift_basics():
    seq = parse_family("periodic(ba)").sequence()
    assert shift(seq).prefix(5) == "ababa"
    s2 = parse_family("ab").sequence()
    assert shift(s2).prefix(1) == "b"
    with pytest.raises(InvalidArgumentError):
        shift(shift(s2)).prefix(1)


def test_shift_of_periodic_same_period():
    seq = parse_family("periodic(abb)").sequence()
    out = shift(seq)
    assert out.prefix(9) == "bbabbabba"[:9]


def test_sequence_guards():
    with pytest.raises(InvalidArgumentError):
        SymbolicSequence.from_word("aA")
    bad = SymbolicSequence(lambda i: "aA"[i % 2], None)
    with pytest.raises(InvalidArgumentError):
        bad.prefix(2)
    with pytest.raises(InvalidArgumentError):
        parse_family("ab").sequence().prefix(3)


def test_run_lengths():
    assert parse_family("thm43(k)").run_lengths(6) == [1, 1, 1, 2, 1, 3]
    assert parse_family("thm42(k,k+1)").run_lengths(6) == [1, 1, 1, 2, 1, 2]
    assert parse_family("a^3b^2A").run_lengths(3) == [3, 2, 1]


@given(st.integers(1, 200), st.randoms(use_true_random=False))
def test_from_word_prefix_roundtrip(n, pyrandom):
    word = random_reduced_word(pyrandom, n)
    seq = SymbolicSequence.from_word(word)
    assert seq.prefix(n) == word
    assert seq.length == n


def test_thm42_run_symbols_alternate():
    spec = parse_family("thm42(k,k)")
    seq = spec.sequence()
    assert seq.prefix(10) == "babAbaabAA"
