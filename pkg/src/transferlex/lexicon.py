"""Building and serializing augmented pronunciation lexicons.

An augmented lexicon appends mapped English entries to an untouched Mandarin
base. Text format is one pronunciation per line, ``word<TAB>phone phone ...``,
with an optional third column carrying the variant tag when emitted tagged.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DuplicateEntryError, FileFormatError, ToolkitError, UnknownSymbolError
from .fileio import atomic_write_text
from .inventory import Inventory
from .rules import RuleSet, map_direct, map_transfer
from .scoring import is_cjk_char

AUGMENT_MODES = ("direct", "transfer", "both")
VARIANT_TAGS = ("base", "direct", "transfer")

_PROVENANCE = {"direct": "L_d", "both": "L_t", "transfer": "custom"}


@dataclass(frozen=True)
class PronEntry:
    word: str
    language: str  # "mandarin" | "english"
    phones: tuple[str, ...]
    variant_tag: str = "base"


@dataclass(frozen=True)
class Lexicon:
    entries: tuple[PronEntry, ...] = ()
    provenance: str = "custom"  # L_o | L_d | L_t | custom

    def entry_set(self) -> set[tuple[str, tuple[str, ...]]]:
        return {(e.word, e.phones) for e in self.entries}


def augment(base: Lexicon, english, rules: RuleSet, mode: str = "both") -> Lexicon:
    """Append mapped pronunciations for the given English entries.

    Base entries are never modified or reordered; duplicate (word, phones)
    pairs collapse onto their first occurrence, so rerunning over an already
    augmented lexicon adds nothing.
    """
    if mode not in AUGMENT_MODES:
        raise ValueError(f"mode must be one of {AUGMENT_MODES}, got {mode!r}")
    seen = base.entry_set()
    added: list[PronEntry] = []

    def push(word, phones, tag):
        key = (word, tuple(phones))
        if key not in seen:
            seen.add(key)
            added.append(PronEntry(word, "english", key[1], tag))

    for pron in english:
        word = pron.display
        try:
            if mode in ("direct", "both"):
                push(word, map_direct(pron.phones, rules), "direct")
            if mode in ("transfer", "both"):
                push(word, map_transfer(pron.phones, rules), "transfer")
        except ToolkitError as exc:
            raise type(exc)(f"word {word!r}: {exc}") from None
    return Lexicon(base.entries + tuple(added), _PROVENANCE[mode])


def format_lexicon(lex: Lexicon, tagged: bool = False) -> str:
    lines = []
    for entry in lex.entries:
        line = f"{entry.word}\t{' '.join(entry.phones)}"
        if tagged:
            line += f"\t{entry.variant_tag}"
        lines.append(line)
    return "\n".join(lines) + ("\n" if lines else "")


def emit_lexicon(lex: Lexicon, path, tagged: bool = False) -> None:
    """Write the lexicon text format; byte-deterministic for a given lexicon."""
    atomic_write_text(path, format_lexicon(lex, tagged=tagged))


def parse_lexicon(path, inv: Inventory, validate: bool = True, provenance: str = "custom") -> Lexicon:
    """Inverse of emit_lexicon on its image.

    ``validate=False`` skips Mandarin-inventory checks, for foreign base
    lexica whose phone set differs. Language is inferred from the headword
    script (any CJK character marks the entry as Mandarin).
    """
    entries: list[PronEntry] = []
    seen: set[tuple[str, tuple[str, ...]]] = set()
    with open(path, encoding="utf-8") as handle:
        for line_no, raw in enumerate(handle, start=1):
            line = raw.rstrip("\n")
            if not line.strip():
                continue
            fields = line.split("\t")
            if len(fields) not in (2, 3):
                raise FileFormatError(path, line_no, "expected word<TAB>phones[<TAB>tag]")
            word = fields[0]
            phones = tuple(fields[1].split())
            if not word or not phones:
                raise FileFormatError(path, line_no, "empty word or phone list")
            if validate:
                for token in phones:
                    if token not in inv.mandarin:
                        raise UnknownSymbolError(
                            f"{path}:{line_no}: unknown Mandarin phone {token!r}"
                        )
            tag = fields[2] if len(fields) == 3 else "base"
            if tag not in VARIANT_TAGS:
                raise FileFormatError(path, line_no, f"unknown variant tag {tag!r}")
            key = (word, phones)
            if key in seen:
                raise DuplicateEntryError(
                    f"{path}:{line_no}: duplicate pronunciation for {word!r}"
                )
            seen.add(key)
            language = "mandarin" if any(is_cjk_char(c) for c in word) else "english"
            entries.append(PronEntry(word, language, phones, tag))
    return Lexicon(tuple(entries), provenance)
