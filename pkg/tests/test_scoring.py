"""Mixed tokenization, alignment, per-language breakdown, corpus scoring."""

import math
import random
from functools import lru_cache

import pytest
from hypothesis import given
from hypothesis import strategies as st

from transferlex.errors import DuplicateEntryError, FileFormatError, ScoringError
from transferlex.scoring import (
    ENGLISH,
    MANDARIN,
    MixedToken,
    align,
    breakdown,
    corpus_score,
    counts_tsv,
    language_rates,
    mixed_tokenize,
)


def toks(*texts):
    return [MixedToken(t, MANDARIN if len(t) == 1 and ord(t[0]) > 0x3400 else ENGLISH) for t in texts]


def brute_distance(a, b):
    """Classic recursive Levenshtein, independent of the DP backtrace."""

    @lru_cache(maxsize=None)
    def go(i, j):
        if i == len(a):
            return len(b) - j
        if j == len(b):
            return len(a) - i
        return min(
            go(i + 1, j + 1) + (a[i] != b[j]),
            go(i + 1, j) + 1,
            go(i, j + 1) + 1,
        )

    return go(0, 0)


def test_tokenize_mixed_line():
    tokens = mixed_tokenize("打开 iPad")
    assert [(t.text, t.language) for t in tokens] == [
        ("打", MANDARIN),
        ("开", MANDARIN),
        ("iPad", ENGLISH),
    ]


def test_tokenize_empty():
    assert mixed_tokenize("") == []


def test_tokenize_english_and_cjk_runs():
    tokens = mixed_tokenize("hello world 你好")
    assert [t.text for t in tokens] == ["hello", "world", "你", "好"]


def test_tokenize_without_spaces_between_scripts():
    tokens = mixed_tokenize("打开iPad2台")
    assert [t.text for t in tokens] == ["打", "开", "iPad2", "台"]


def test_tokenize_strip_punct():
    tokens = mixed_tokenize("well, ok!! 你。", strip_punct=True)
    assert [t.text for t in tokens] == ["well", "ok", "你"]
    kept = mixed_tokenize("well, ok!!", strip_punct=False)
    assert [t.text for t in kept] == ["well,", "ok!!"]


english_texts = st.text(
    alphabet="abcXYZ019'-_", min_size=1, max_size=5
).filter(lambda s: s.strip() == s)
mixed_tokens = st.one_of(
    st.sampled_from("你好天气北京").map(lambda c: MixedToken(c, MANDARIN)),
    english_texts.map(lambda s: MixedToken(s, ENGLISH)),
)
token_lists = st.lists(mixed_tokens, max_size=8)


@given(token_lists)
def test_retokenization_round_trip(tokens):
    pieces = []
    previous = None
    for tok in tokens:
        if previous is ENGLISH and tok.language is ENGLISH:
            pieces.append(" ")
        pieces.append(tok.text)
        previous = tok.language
    assert mixed_tokenize("".join(pieces)) == tokens


def test_align_identity():
    report = align(toks("打", "开", "iPad"), toks("打", "开", "iPad"))
    assert (report.subs, report.dels, report.ins) == (0, 0, 0)
    assert report.cer == 0.0


def test_align_single_substitution():
    report = align(toks("打", "开", "iPad"), toks("打", "关", "iPad"))
    assert (report.subs, report.dels, report.ins) == (1, 0, 0)
    assert report.cer == pytest.approx(1 / 3)


def test_align_single_deletion():
    ref, hyp = toks("a", "b", "c"), toks("a", "c")
    report = align(ref, hyp)
    assert (report.subs, report.dels, report.ins) == (0, 1, 0)
    assert report.cer == pytest.approx(1 / 3)
    assert report.subs + report.dels + report.ins == brute_distance(
        tuple(t.text for t in ref), tuple(t.text for t in hyp)
    )


def test_align_counts_partition_reference():
    ref, hyp = toks("a", "b", "c", "d"), toks("a", "x", "d", "e")
    report = align(ref, hyp)
    assert report.subs + report.dels + report.matches == report.n_ref


def test_cer_edge_cases():
    x = toks("a", "b")
    assert align(x, []).cer == 1.0
    assert math.isinf(align([], x).cer)
    assert align([], []).cer == 0.0


def test_case_insensitive_by_default():
    assert align(toks("iPad"), toks("ipad")).cer == 0.0
    assert align(toks("iPad"), toks("ipad"), case_sensitive=True).cer == 1.0


def test_exhaustive_small_oracle():
    from itertools import product

    alphabet = "abc"
    seqs = [seq for n in range(4) for seq in product(alphabet, repeat=n)]
    for ref in seqs:
        for hyp in seqs:
            report = align(toks(*ref), toks(*hyp))
            assert report.subs + report.dels + report.ins == brute_distance(ref, hyp)


def test_breakdown_all_mandarin_perfect():
    ref = toks("你", "好")
    report = align(ref, ref)
    mandarin_cer, english_wer = breakdown(report)
    assert mandarin_cer == 0.0
    assert english_wer is None


def test_breakdown_english_substitution():
    report = align(toks("打", "iPad"), toks("打", "iPod"))
    mandarin_cer, english_wer = breakdown(report)
    assert mandarin_cer == 0.0
    assert english_wer == 1.0


def test_insertion_attribution_preceding_and_following():
    # ref:  打  iPad      hyp: 打 X iPad  -- the insertion sits between a
    # Mandarin and an English reference token
    ref = toks("打", "iPad")
    hyp = toks("打", "X", "iPad")
    report = align(ref, hyp)
    mand_prec, eng_prec = language_rates(report.pairs, "preceding")
    assert (mand_prec.ins, eng_prec.ins) == (1, 0)
    mand_foll, eng_foll = language_rates(report.pairs, "following")
    assert (mand_foll.ins, eng_foll.ins) == (0, 1)


def test_insertion_before_any_reference_token():
    report = align(toks("iPad"), toks("了", "iPad"))
    mand, eng = language_rates(report.pairs, "preceding")
    assert (mand.ins, eng.ins) == (0, 1)  # first reference token is English


def test_five_token_attribution_by_hand():
    # ref: 你 好 iPad 天 气   hyp: 你 X 好 iPad extra 气
    ref = toks("你", "好", "iPad", "天", "气")
    hyp = toks("你", "X", "好", "iPad", "extra", "气")
    report = align(ref, hyp)
    # by hand: X inserts after 你 (mandarin); extra substitutes 天? no --
    # minimum alignment keeps 气 matched and aligns extra against 天 as a
    # substitution on a Mandarin reference token
    mand, eng = language_rates(report.pairs, "preceding")
    assert report.subs + report.dels + report.ins == 2
    assert mand.n_ref == 4 and eng.n_ref == 1
    assert (mand.subs + mand.dels + mand.ins, eng.subs + eng.dels + eng.ins) == (2, 0)


@given(token_lists, token_lists)
def test_error_conservation(ref, hyp):
    report = align(ref, hyp)
    for attribution in ("preceding", "following"):
        mand, eng = language_rates(report.pairs, attribution)
        assert mand.subs + eng.subs == report.subs
        assert mand.dels + eng.dels == report.dels
        assert mand.ins + eng.ins == report.ins
        assert mand.n_ref + eng.n_ref == report.n_ref


@given(token_lists, token_lists)
def test_align_distance_matches_oracle(ref, hyp):
    report = align(ref, hyp, case_sensitive=True)
    ref_keys = tuple(t.text for t in ref)
    hyp_keys = tuple(t.text for t in hyp)
    assert report.subs + report.dels + report.ins == brute_distance(ref_keys, hyp_keys)


def test_corpus_score_identical_files(tmp_path):
    text = "打开 iPad\nhello 世界\n"
    ref = tmp_path / "ref.txt"
    hyp = tmp_path / "hyp.txt"
    ref.write_text(text, encoding="utf-8")
    hyp.write_text(text, encoding="utf-8")
    report = corpus_score(ref, hyp)
    assert report.cer == 0.0
    assert counts_tsv(report) == "6\t0\t0\t0\t0.0000\t0.0000\t0.0000"


def test_corpus_concatenation_invariance(tmp_path):
    rng = random.Random(7)
    vocab = ["你", "好", "天", "hello", "world"]
    ref_lines = [" ".join(rng.choices(vocab, k=rng.randint(0, 5))) for _ in range(20)]
    hyp_lines = [" ".join(rng.choices(vocab, k=rng.randint(0, 5))) for _ in range(20)]
    ref = tmp_path / "ref.txt"
    hyp = tmp_path / "hyp.txt"
    ref.write_text("\n".join(ref_lines) + "\n", encoding="utf-8")
    hyp.write_text("\n".join(hyp_lines) + "\n", encoding="utf-8")
    whole = corpus_score(ref, hyp)

    totals = {"sub": 0, "del": 0, "ins": 0, "n": 0}
    for r, h in zip(ref_lines, hyp_lines):
        one_ref = tmp_path / "one_ref.txt"
        one_hyp = tmp_path / "one_hyp.txt"
        one_ref.write_text(r + "\n", encoding="utf-8")
        one_hyp.write_text(h + "\n", encoding="utf-8")
        single = corpus_score(one_ref, one_hyp)
        totals["sub"] += single.subs
        totals["del"] += single.dels
        totals["ins"] += single.ins
        totals["n"] += single.n_ref
    assert (whole.subs, whole.dels, whole.ins, whole.n_ref) == (
        totals["sub"], totals["del"], totals["ins"], totals["n"]
    )


def test_corpus_score_by_ids_order_independent(tmp_path):
    ref = tmp_path / "ref.txt"
    hyp = tmp_path / "hyp.txt"
    ref.write_text("u1\t你好\nu2\thello there\n", encoding="utf-8")
    hyp.write_text("u2\thello here\nu1\t你好\n", encoding="utf-8")
    shuffled = corpus_score(ref, hyp, ids=True)
    hyp.write_text("u1\t你好\nu2\thello here\n", encoding="utf-8")
    ordered = corpus_score(ref, hyp, ids=True)
    assert counts_tsv(shuffled) == counts_tsv(ordered)
    assert shuffled.subs == 1


def test_line_count_mismatch(tmp_path):
    ref = tmp_path / "ref.txt"
    hyp = tmp_path / "hyp.txt"
    ref.write_text("a\nb\n", encoding="utf-8")
    hyp.write_text("a\n", encoding="utf-8")
    with pytest.raises(ScoringError):
        corpus_score(ref, hyp)


def test_duplicate_id_rejected(tmp_path):
    ref = tmp_path / "ref.txt"
    hyp = tmp_path / "hyp.txt"
    ref.write_text("u1\ta\nu1\tb\n", encoding="utf-8")
    hyp.write_text("u1\ta\nu2\tb\n", encoding="utf-8")
    with pytest.raises(DuplicateEntryError):
        corpus_score(ref, hyp, ids=True)


def test_mismatched_ids_rejected(tmp_path):
    ref = tmp_path / "ref.txt"
    hyp = tmp_path / "hyp.txt"
    ref.write_text("u1\ta\n", encoding="utf-8")
    hyp.write_text("u9\ta\n", encoding="utf-8")
    with pytest.raises(ScoringError):
        corpus_score(ref, hyp, ids=True)


def test_id_line_without_tab(tmp_path):
    ref = tmp_path / "ref.txt"
    hyp = tmp_path / "hyp.txt"
    ref.write_text("u1 a\n", encoding="utf-8")
    hyp.write_text("u1\ta\n", encoding="utf-8")
    with pytest.raises(FileFormatError):
        corpus_score(ref, hyp, ids=True)
