"""Reader for pronunciation dictionaries in CMU text format.

Lines look like ``HEADWORD[(n)]  PH1 PH2 ...`` with ``;;;`` comment lines;
the ``(n)`` suffix numbers alternative pronunciations starting at 2. Stress
digits are stripped at ingestion so everything downstream is stress-free.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import DuplicateEntryError, ToolkitError, UnknownSymbolError
from .inventory import Inventory, strip_stress

_VARIANT = re.compile(r"^(?P<head>.+)\((?P<n>[0-9]+)\)$")


@dataclass(frozen=True)
class EnglishPron:
    word: str                # lowercase lookup key
    variant: int             # 1 for the bare headword, n for HEADWORD(n)
    phones: tuple[str, ...]  # stress-stripped symbols
    orthography: str         # headword exactly as written in the file

    @property
    def display(self) -> str:
        """Headword form for lexicon emission. All-caps dictionary files
        carry no real casing, so those fall back to the lowercase key."""
        if self.orthography != self.orthography.upper():
            return self.orthography
        return self.word


def parse_cmu_line(line: str, inv: Inventory) -> EnglishPron | None:
    """Parse one dictionary line; comment and blank lines yield None."""
    stripped = line.strip()
    if not stripped or stripped.startswith(";;;"):
        return None
    fields = stripped.split()
    head = fields[0]
    raw_phones = fields[1:]
    variant = 1
    match = _VARIANT.match(head)
    if match:
        head = match.group("head")
        variant = int(match.group("n"))
        if variant < 1:
            raise ToolkitError(f"bad variant index in headword {fields[0]!r}")
    if not head:
        raise ToolkitError(f"malformed headword {fields[0]!r}")
    if not raw_phones:
        raise ToolkitError(f"entry {fields[0]!r} has no phonemes")
    phones = []
    for token in raw_phones:
        symbol = strip_stress(token)
        if symbol not in inv.english:
            raise UnknownSymbolError(f"unknown English phoneme {token!r} in entry {fields[0]!r}")
        phones.append(symbol)
    return EnglishPron(head.lower(), variant, tuple(phones), head)


def parse_cmu_dict(path, inv: Inventory, words=None) -> list[EnglishPron]:
    """Parse a whole dictionary file, in file order.

    ``words`` optionally restricts output to the given headwords
    (case-insensitive), mirroring fixed word lists used for augmentation.
    """
    wanted = {w.lower() for w in words} if words is not None else None
    entries: list[EnglishPron] = []
    seen: set[tuple[str, int]] = set()
    with open(path, encoding="utf-8") as handle:
        for line_no, raw in enumerate(handle, start=1):
            try:
                entry = parse_cmu_line(raw, inv)
            except ToolkitError as exc:
                raise type(exc)(f"{path}:{line_no}: {exc}") from None
            if entry is None:
                continue
            key = (entry.word, entry.variant)
            if key in seen:
                raise DuplicateEntryError(
                    f"{path}:{line_no}: duplicate entry {entry.orthography!r} "
                    f"variant {entry.variant}"
                )
            seen.add(key)
            if wanted is not None and entry.word not in wanted:
                continue
            entries.append(entry)
    return entries


def format_cmu_entry(entry: EnglishPron) -> str:
    head = entry.orthography
    if entry.variant > 1:
        head = f"{head}({entry.variant})"
    return f"{head}  {' '.join(entry.phones)}"


def index_by_word(entries) -> dict[str, list[EnglishPron]]:
    """Group entries by lowercase headword, preserving variant order."""
    index: dict[str, list[EnglishPron]] = {}
    for entry in entries:
        index.setdefault(entry.word, []).append(entry)
    return index


def load_word_list(path) -> list[str]:
    """One headword per line, original case kept, blank lines skipped."""
    words = []
    with open(path, encoding="utf-8") as handle:
        for raw in handle:
            word = raw.strip()
            if word:
                words.append(word)
    return words
