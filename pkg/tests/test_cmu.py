"""CMU dictionary parsing and round-trip serialization."""

import pytest

from transferlex.cmu import (
    format_cmu_entry,
    index_by_word,
    parse_cmu_dict,
    parse_cmu_line,
)
from transferlex.errors import DuplicateEntryError, ToolkitError, UnknownSymbolError


def test_parse_hello_line(inv):
    entry = parse_cmu_line("HELLO  HH AH0 L OW1", inv)
    assert (entry.word, entry.variant, list(entry.phones)) == ("hello", 1, ["HH", "AH", "L", "OW"])


def test_hello_matches_public_dictionary(cmudict_entries):
    by_word = index_by_word(cmudict_entries)
    hello = by_word["hello"]
    assert hello[0].variant == 1
    assert list(hello[0].phones) == ["HH", "AH", "L", "OW"]


def test_comment_and_blank_lines_yield_nothing(inv):
    assert parse_cmu_line(";;; a comment", inv) is None
    assert parse_cmu_line("   ", inv) is None


def test_unknown_phoneme_named_in_error(inv):
    with pytest.raises(UnknownSymbolError) as err:
        parse_cmu_line("ZZZ  Q1 X", inv)
    assert "Q1" in str(err.value)


def test_headword_without_phones(inv):
    with pytest.raises(ToolkitError):
        parse_cmu_line("LONELY", inv)


def test_variant_suffix(inv):
    entry = parse_cmu_line("A(2)  EY1", inv)
    assert (entry.word, entry.variant) == ("a", 2)
    assert entry.orthography == "A"


def test_bad_variant_index(inv):
    with pytest.raises(ToolkitError):
        parse_cmu_line("A(0)  EY1", inv)


def test_parse_dict_counts_and_order(tmp_path, inv):
    path = tmp_path / "mini.dict"
    path.write_text("CAT  K AE1 T\nDOG  D AO1 G\nEMU  IY1 M Y UW0\n", encoding="utf-8")
    entries = parse_cmu_dict(path, inv)
    assert [e.word for e in entries] == ["cat", "dog", "emu"]


def test_variants_coexist_in_public_dictionary(cmudict_entries):
    by_word = index_by_word(cmudict_entries)
    variants = by_word["a"]
    assert [v.variant for v in variants] == [1, 2]
    assert variants[0].phones != variants[1].phones


def test_duplicate_entry_rejected(tmp_path, inv):
    path = tmp_path / "dup.dict"
    path.write_text("A  AH0\nA(2)  EY1\nA(2)  EY1\n", encoding="utf-8")
    with pytest.raises(DuplicateEntryError) as err:
        parse_cmu_dict(path, inv)
    assert ":3:" in str(err.value)


def test_line_errors_carry_line_numbers(tmp_path, inv):
    path = tmp_path / "bad.dict"
    path.write_text("CAT  K AE1 T\nZZZ  Q1\n", encoding="utf-8")
    with pytest.raises(UnknownSymbolError) as err:
        parse_cmu_dict(path, inv)
    assert ":2:" in str(err.value)


def test_word_filter(tmp_path, inv):
    path = tmp_path / "mini.dict"
    path.write_text("CAT  K AE1 T\nDOG  D AO1 G\n", encoding="utf-8")
    entries = parse_cmu_dict(path, inv, words=["Dog"])
    assert [e.word for e in entries] == ["dog"]


def test_parse_is_deterministic(tmp_path, inv):
    path = tmp_path / "mini.dict"
    path.write_text("CAT  K AE1 T\nDOG  D AO1 G\n", encoding="utf-8")
    assert parse_cmu_dict(path, inv) == parse_cmu_dict(path, inv)


def test_all_phones_in_alphabet(cmudict_entries, inv):
    symbols = set(inv.english)
    for entry in cmudict_entries[:5000]:
        assert symbols.issuperset(entry.phones)


def test_round_trip_serialization(tmp_path, inv, cmudict_entries):
    subset = cmudict_entries[:2000]
    path = tmp_path / "roundtrip.dict"
    path.write_text(
        "\n".join(format_cmu_entry(e) for e in subset) + "\n", encoding="utf-8"
    )
    assert parse_cmu_dict(path, inv) == subset


def test_display_casing():
    from transferlex.cmu import EnglishPron

    allcaps = EnglishPron("ipad", 1, ("AY", "P", "AE", "D"), "IPAD")
    mixed = EnglishPron("ipad", 1, ("AY", "P", "AE", "D"), "iPad")
    assert allcaps.display == "ipad"
    assert mixed.display == "iPad"
