"""Mixed Mandarin/English recognition scoring.

Reference and hypothesis lines are tokenized into single Han characters plus
whole English words, aligned by minimum edit distance, and scored as an
overall character error rate with a per-language breakdown: CER over the
Mandarin reference tokens, WER over the English reference tokens.
"""

from __future__ import annotations

import math
import unicodedata
from dataclasses import dataclass

from .errors import DuplicateEntryError, FileFormatError, ScoringError

MANDARIN = "mandarin-char"
ENGLISH = "english-word"

# CJK Unified Ideographs plus Extension A
_CJK_RANGES = ((0x4E00, 0x9FFF), (0x3400, 0x4DBF))


def is_cjk_char(ch: str) -> bool:
    code = ord(ch)
    return any(lo <= code <= hi for lo, hi in _CJK_RANGES)


@dataclass(frozen=True)
class MixedToken:
    text: str
    language: str  # MANDARIN | ENGLISH


def mixed_tokenize(line: str, strip_punct: bool = False) -> list[MixedToken]:
    """Han characters become one token each; everything else splits on
    whitespace into english-word tokens. Total: any string tokenizes."""
    tokens: list[MixedToken] = []
    buf: list[str] = []

    def flush():
        if buf:
            tokens.append(MixedToken("".join(buf), ENGLISH))
            buf.clear()

    for ch in line:
        if ch.isspace():
            flush()
        elif is_cjk_char(ch):
            flush()
            tokens.append(MixedToken(ch, MANDARIN))
        else:
            buf.append(ch)
    flush()
    if strip_punct:
        cleaned = []
        for tok in tokens:
            if tok.language == ENGLISH:
                text = "".join(
                    c for c in tok.text if not unicodedata.category(c).startswith("P")
                )
                if not text:
                    continue
                tok = MixedToken(text, ENGLISH)
            cleaned.append(tok)
        tokens = cleaned
    return tokens


@dataclass(frozen=True)
class LanguageRates:
    n_ref: int
    subs: int
    dels: int
    ins: int

    @property
    def errors(self) -> int:
        return self.subs + self.dels + self.ins

    @property
    def rate(self) -> float | None:
        """None when the language has no reference tokens (undefined rate)."""
        if self.n_ref == 0:
            return None
        return self.errors / self.n_ref


@dataclass(frozen=True)
class AlignmentReport:
    pairs: tuple[tuple[MixedToken | None, MixedToken | None, str], ...]
    subs: int
    dels: int
    ins: int
    matches: int
    n_ref: int
    mandarin: LanguageRates
    english: LanguageRates

    @property
    def cer(self) -> float:
        errors = self.subs + self.dels + self.ins
        if self.n_ref == 0:
            return 0.0 if errors == 0 else math.inf
        return errors / self.n_ref

    @property
    def mandarin_cer(self) -> float | None:
        return self.mandarin.rate

    @property
    def english_wer(self) -> float | None:
        return self.english.rate


def _token_key(tok: MixedToken, case_sensitive: bool) -> str:
    if tok.language == ENGLISH and not case_sensitive:
        return tok.text.casefold()
    return tok.text


def align(ref, hyp, case_sensitive: bool = False, attribution: str = "preceding") -> AlignmentReport:
    """Minimum-edit alignment with unit costs and a deterministic backtrace
    (match > substitute > delete > insert). English token comparison is
    case-insensitive unless case_sensitive is set."""
    ref = list(ref)
    hyp = list(hyp)
    rkeys = [_token_key(t, case_sensitive) for t in ref]
    hkeys = [_token_key(t, case_sensitive) for t in hyp]
    n, m = len(ref), len(hyp)
    dist = [[0] * (m + 1) for _ in range(n + 1)]
    for i in range(1, n + 1):
        dist[i][0] = i
    for j in range(1, m + 1):
        dist[0][j] = j
    for i in range(1, n + 1):
        row = dist[i]
        prev = dist[i - 1]
        rk = rkeys[i - 1]
        for j in range(1, m + 1):
            same = rk == hkeys[j - 1]
            row[j] = min(prev[j - 1] + (0 if same else 1), prev[j] + 1, row[j - 1] + 1)

    pairs = []
    i, j = n, m
    while i > 0 or j > 0:
        here = dist[i][j]
        if i > 0 and j > 0 and rkeys[i - 1] == hkeys[j - 1] and here == dist[i - 1][j - 1]:
            pairs.append((ref[i - 1], hyp[j - 1], "match"))
            i, j = i - 1, j - 1
        elif i > 0 and j > 0 and here == dist[i - 1][j - 1] + 1:
            pairs.append((ref[i - 1], hyp[j - 1], "substitute"))
            i, j = i - 1, j - 1
        elif i > 0 and here == dist[i - 1][j] + 1:
            pairs.append((ref[i - 1], None, "delete"))
            i -= 1
        else:
            pairs.append((None, hyp[j - 1], "insert"))
            j -= 1
    pairs.reverse()

    subs = sum(1 for _, _, op in pairs if op == "substitute")
    dels = sum(1 for _, _, op in pairs if op == "delete")
    ins = sum(1 for _, _, op in pairs if op == "insert")
    matches = sum(1 for _, _, op in pairs if op == "match")
    mandarin, english = language_rates(pairs, attribution)
    return AlignmentReport(
        pairs=tuple(pairs),
        subs=subs,
        dels=dels,
        ins=ins,
        matches=matches,
        n_ref=n,
        mandarin=mandarin,
        english=english,
    )


def language_rates(pairs, attribution: str = "preceding") -> tuple[LanguageRates, LanguageRates]:
    """Split error counts by the language of the reference token. Insertions
    carry no reference token; they follow the nearest reference token in the
    chosen direction (the file-edge token when none exists on that side, and
    the English bucket when the reference is empty altogether)."""
    if attribution not in ("preceding", "following"):
        raise ValueError(f"attribution must be 'preceding' or 'following', got {attribution!r}")
    counts = {MANDARIN: {"n": 0, "sub": 0, "del": 0, "ins": 0},
              ENGLISH: {"n": 0, "sub": 0, "del": 0, "ins": 0}}
    ref_langs = [r.language for r, _, _ in pairs if r is not None]

    insertion_langs: list[str] = []
    if attribution == "preceding":
        current = ref_langs[0] if ref_langs else ENGLISH
        for r, _, op in pairs:
            if r is not None:
                current = r.language
            elif op == "insert":
                insertion_langs.append(current)
    else:
        current = ref_langs[-1] if ref_langs else ENGLISH
        for r, _, op in reversed(pairs):
            if r is not None:
                current = r.language
            elif op == "insert":
                insertion_langs.append(current)
        insertion_langs.reverse()

    for r, _, op in pairs:
        if r is not None:
            bucket = counts[r.language]
            bucket["n"] += 1
            if op == "substitute":
                bucket["sub"] += 1
            elif op == "delete":
                bucket["del"] += 1
    for lang in insertion_langs:
        counts[lang]["ins"] += 1

    def rates(lang):
        c = counts[lang]
        return LanguageRates(c["n"], c["sub"], c["del"], c["ins"])

    return rates(MANDARIN), rates(ENGLISH)


def breakdown(report: AlignmentReport, attribution: str = "preceding") -> tuple[float | None, float | None]:
    mandarin, english = language_rates(report.pairs, attribution)
    return mandarin.rate, english.rate


@dataclass(frozen=True)
class CorpusReport:
    lines: tuple[tuple[str, AlignmentReport], ...]
    subs: int
    dels: int
    ins: int
    matches: int
    n_ref: int
    mandarin: LanguageRates
    english: LanguageRates

    @property
    def cer(self) -> float:
        errors = self.subs + self.dels + self.ins
        if self.n_ref == 0:
            return 0.0 if errors == 0 else math.inf
        return errors / self.n_ref

    @property
    def mandarin_cer(self) -> float | None:
        return self.mandarin.rate

    @property
    def english_wer(self) -> float | None:
        return self.english.rate


def _read_utterances(path, ids: bool):
    with open(path, encoding="utf-8") as handle:
        lines = handle.read().splitlines()
    if not ids:
        return [(str(i + 1), text) for i, text in enumerate(lines)]
    utterances = []
    seen = set()
    for line_no, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        if "\t" not in line:
            raise FileFormatError(path, line_no, "expected ID<TAB>text")
        utt_id, text = line.split("\t", 1)
        if utt_id in seen:
            raise DuplicateEntryError(f"{path}:{line_no}: duplicate utterance ID {utt_id!r}")
        seen.add(utt_id)
        utterances.append((utt_id, text))
    return utterances


def corpus_score(
    ref_path,
    hyp_path,
    ids: bool = False,
    case_sensitive: bool = False,
    strip_punct: bool = False,
    attribution: str = "preceding",
) -> CorpusReport:
    """Micro-averaged scores over line-paired (or ID-paired) files."""
    refs = _read_utterances(ref_path, ids)
    hyps = _read_utterances(hyp_path, ids)
    if ids:
        hyp_map = dict(hyps)
        missing = [utt_id for utt_id, _ in refs if utt_id not in hyp_map]
        extra = [utt_id for utt_id in hyp_map if utt_id not in {r[0] for r in refs}]
        if missing or extra:
            raise ScoringError(
                f"utterance IDs differ between files "
                f"(missing from hyp: {missing[:5]}, extra in hyp: {extra[:5]})"
            )
        paired = [(utt_id, text, hyp_map[utt_id]) for utt_id, text in refs]
    else:
        if len(refs) != len(hyps):
            raise ScoringError(
                f"line count mismatch: {ref_path} has {len(refs)} lines, "
                f"{hyp_path} has {len(hyps)}"
            )
        paired = [(refs[k][0], refs[k][1], hyps[k][1]) for k in range(len(refs))]

    line_reports = []
    totals = {"sub": 0, "del": 0, "ins": 0, "match": 0, "n": 0}
    lang_totals = {
        MANDARIN: {"n": 0, "sub": 0, "del": 0, "ins": 0},
        ENGLISH: {"n": 0, "sub": 0, "del": 0, "ins": 0},
    }
    for utt_id, ref_text, hyp_text in paired:
        report = align(
            mixed_tokenize(ref_text, strip_punct),
            mixed_tokenize(hyp_text, strip_punct),
            case_sensitive=case_sensitive,
            attribution=attribution,
        )
        line_reports.append((utt_id, report))
        totals["sub"] += report.subs
        totals["del"] += report.dels
        totals["ins"] += report.ins
        totals["match"] += report.matches
        totals["n"] += report.n_ref
        for lang, rates in ((MANDARIN, report.mandarin), (ENGLISH, report.english)):
            lang_totals[lang]["n"] += rates.n_ref
            lang_totals[lang]["sub"] += rates.subs
            lang_totals[lang]["del"] += rates.dels
            lang_totals[lang]["ins"] += rates.ins

    def lang_rates(lang):
        c = lang_totals[lang]
        return LanguageRates(c["n"], c["sub"], c["del"], c["ins"])

    return CorpusReport(
        lines=tuple(line_reports),
        subs=totals["sub"],
        dels=totals["del"],
        ins=totals["ins"],
        matches=totals["match"],
        n_ref=totals["n"],
        mandarin=lang_rates(MANDARIN),
        english=lang_rates(ENGLISH),
    )


def format_rate(rate: float | None) -> str:
    if rate is None:
        return "NA"
    if math.isinf(rate):
        return "inf"
    return f"{rate:.4f}"


def counts_tsv(report) -> str:
    """Machine-readable N S D I CER MAND_CER ENG_WER row for any report."""
    cer = report.cer
    cer_text = "inf" if math.isinf(cer) else f"{cer:.4f}"
    return "\t".join(
        [
            str(report.n_ref),
            str(report.subs),
            str(report.dels),
            str(report.ins),
            cer_text,
            format_rate(report.mandarin.rate),
            format_rate(report.english.rate),
        ]
    )
