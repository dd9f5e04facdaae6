"""Phone alphabets for the two languages.

The English side is the 39-symbol, stress-free CMU phoneme set, each symbol
annotated with an articulatory category. The Mandarin side is a set of
toneless Pinyin units, each annotated with the syllable slots it may fill
(initial, glide, nucleus, nasal-coda). Both sides load from a line-oriented
text file so the alphabets can be edited without touching code:

    # comment
    E AA open-mouth-vowel
    M i  nucleus,glide
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from importlib.resources import files

from .errors import DuplicateEntryError, FileFormatError, UnknownSymbolError

ENGLISH_CATEGORIES = frozenset({
    "open-mouth-vowel",
    "even-teeth-vowel",
    "close-mouth-vowel",
    "plosive",
    "fricative",
    "affricate",
    "nasal",
    "lateral",
    "approximant",
})

VOWEL_CATEGORIES = frozenset({
    "open-mouth-vowel",
    "even-teeth-vowel",
    "close-mouth-vowel",
})

MANDARIN_ROLES = frozenset({"initial", "glide", "nucleus", "nasal-coda"})

_TRAILING_DIGITS = re.compile(r"[0-9]+$")


def strip_stress(raw: str) -> str:
    """Drop trailing stress digits from a CMU-style token ("AH0" -> "AH")."""
    return _TRAILING_DIGITS.sub("", raw)


@dataclass(frozen=True)
class EnglishPhoneme:
    symbol: str
    category: str


@dataclass(frozen=True)
class MandarinPhone:
    symbol: str
    roles: frozenset[str]


@dataclass(frozen=True)
class Inventory:
    """Immutable after load; safe to share across threads."""

    english: dict[str, EnglishPhoneme]
    mandarin: dict[str, MandarinPhone]

    def category_of(self, symbol: str) -> str:
        try:
            return self.english[symbol].category
        except KeyError:
            raise UnknownSymbolError(
                f"unknown English phoneme {symbol!r}"
            ) from None

    def is_vowel(self, symbol: str) -> bool:
        return self.category_of(symbol) in VOWEL_CATEGORIES

    def is_consonant(self, symbol: str) -> bool:
        return self.category_of(symbol) not in VOWEL_CATEGORIES

    def has_role(self, token: str, role: str) -> bool:
        phone = self.mandarin.get(token)
        return phone is not None and role in phone.roles

    def require_mandarin(self, token: str) -> None:
        if token not in self.mandarin:
            raise UnknownSymbolError(f"unknown Mandarin phone {token!r}")


def category_of(inv: Inventory, symbol: str) -> str:
    return inv.category_of(symbol)


def load_inventory(path) -> Inventory:
    """Parse an inventory file. Raises FileFormatError (with line number),
    DuplicateEntryError, or UnknownSymbolError on bad category/role names."""
    english: dict[str, EnglishPhoneme] = {}
    mandarin: dict[str, MandarinPhone] = {}
    with open(path, encoding="utf-8") as handle:
        for line_no, raw in enumerate(handle, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            fields = line.split()
            if len(fields) != 3:
                raise FileFormatError(
                    path, line_no, f"expected 3 fields, got {len(fields)}"
                )
            kind, symbol, annotation = fields
            if kind == "E":
                if strip_stress(symbol) != symbol:
                    raise FileFormatError(
                        path, line_no,
                        f"English symbol {symbol!r} carries a stress digit",
                    )
                if annotation not in ENGLISH_CATEGORIES:
                    raise UnknownSymbolError(
                        f"{path}:{line_no}: unknown category {annotation!r}"
                    )
                if symbol in english:
                    raise DuplicateEntryError(
                        f"{path}:{line_no}: duplicate English symbol {symbol!r}"
                    )
                english[symbol] = EnglishPhoneme(symbol, annotation)
            elif kind == "M":
                roles = annotation.split(",")
                for role in roles:
                    if role not in MANDARIN_ROLES:
                        raise UnknownSymbolError(
                            f"{path}:{line_no}: unknown role {role!r}"
                        )
                existing = mandarin.get(symbol)
                if existing is not None:
                    overlap = existing.roles.intersection(roles)
                    if overlap:
                        raise DuplicateEntryError(
                            f"{path}:{line_no}: Mandarin phone {symbol!r} "
                            f"already carries role(s) {sorted(overlap)}"
                        )
                    roles = list(existing.roles) + roles
                mandarin[symbol] = MandarinPhone(symbol, frozenset(roles))
            else:
                raise FileFormatError(
                    path, line_no, f"unknown record kind {kind!r} (expected E or M)"
                )
    return Inventory(english=english, mandarin=mandarin)


def bundled_data_path(name: str) -> str:
    return str(files("transferlex") / "data" / name)


def default_inventory() -> Inventory:
    return load_inventory(bundled_data_path("inventory.txt"))
