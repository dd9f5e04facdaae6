"""Mandarin syllable-structure validation.

Phone sequences are segmented against the (initial)(glide)nucleus(nasal-coda)
template using the role annotations from the inventory: greedy longest-match,
left to right, no backtracking. Sequences produced by the transfer mapping
always parse; hand-written sequences that do not parse get the index of the
first token the grammar could not place.
"""

from __future__ import annotations

from dataclasses import dataclass

from .inventory import Inventory


@dataclass(frozen=True)
class Syllable:
    initial: str | None
    glide: str | None
    nucleus: str
    coda: str | None

    def tokens(self) -> list[str]:
        return [t for t in (self.initial, self.glide, self.nucleus, self.coda) if t is not None]

    def __str__(self):
        return "".join(self.tokens())


@dataclass(frozen=True)
class SyllabifyResult:
    syllables: tuple[Syllable, ...] | None
    failure_index: int | None

    @property
    def ok(self) -> bool:
        return self.syllables is not None


def syllabify(phones, inv: Inventory) -> SyllabifyResult:
    """Greedy parse; on success the syllables concatenate back to the input.

    failure_index is the position of the first token that cannot start or
    continue a syllable (== len(phones) when the input ends mid-syllable).
    """
    phones = list(phones)
    for token in phones:
        inv.require_mandarin(token)
    n = len(phones)
    syllables: list[Syllable] = []
    i = 0
    while i < n:
        initial = glide = coda = None
        if inv.has_role(phones[i], "initial"):
            initial = phones[i]
            i += 1
        # glide slot only fills when a nucleus follows; i/u otherwise serve
        # as the nucleus themselves
        if (
            i < n
            and inv.has_role(phones[i], "glide")
            and i + 1 < n
            and inv.has_role(phones[i + 1], "nucleus")
        ):
            glide = phones[i]
            i += 1
        if i < n and inv.has_role(phones[i], "nucleus"):
            nucleus = phones[i]
            i += 1
        else:
            return SyllabifyResult(None, i)
        if i < n and inv.has_role(phones[i], "nasal-coda"):
            coda = phones[i]
            i += 1
        syllables.append(Syllable(initial, glide, nucleus, coda))
    return SyllabifyResult(tuple(syllables), None)


def is_legal(phones, inv: Inventory) -> bool:
    return syllabify(phones, inv).ok


@dataclass(frozen=True)
class LegalityReport:
    rows: tuple[tuple[str, tuple[str, ...], bool], ...]

    @property
    def count(self) -> int:
        return len(self.rows)

    @property
    def legal_count(self) -> int:
        return sum(1 for _, _, legal in self.rows if legal)

    @property
    def rate(self) -> float:
        if not self.rows:
            return 1.0
        return self.legal_count / self.count

    def to_tsv(self) -> str:
        lines = [
            f"{word}\t{' '.join(phones)}\t{'legal' if legal else 'illegal'}"
            for word, phones, legal in self.rows
        ]
        return "\n".join(lines) + ("\n" if lines else "")


def legality_report(entries, inv: Inventory) -> LegalityReport:
    """Per-entry legality for (word, phones) pairs, in input order."""
    rows = tuple(
        (word, tuple(phones), is_legal(phones, inv)) for word, phones in entries
    )
    return LegalityReport(rows)
