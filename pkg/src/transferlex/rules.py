"""Context-sensitive rewrite rules from English phonemes to Mandarin phones.

Two rule flavors ship with the package: ``direct.rules`` substitutes every
English phoneme with its closest Pinyin unit, and ``transfer.rules`` adds
conditioned rules that append an epenthetic vowel wherever a Mandarin
speaker cannot leave a consonant bare. Contexts are evaluated on the
English side before any rewriting, so a single left-to-right pass is
order-independent and deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from difflib import SequenceMatcher

from .errors import DuplicateEntryError, FileFormatError, RuleSetError, UnknownSymbolError
from .inventory import ENGLISH_CATEGORIES, Inventory, bundled_data_path, load_inventory

CONDITIONS = ("always", "final", "precons", "final-or-precons")


@dataclass(frozen=True)
class MappingRule:
    source: str
    condition: str
    target: tuple[str, ...]
    priority: int  # lower wins among conditioned rules


@dataclass
class RuleSet:
    """Immutable after load; mapping functions are pure."""

    rules: tuple[MappingRule, ...]
    inventory: Inventory
    fallback: dict[str, str] | None = None  # category -> epenthetic vowel
    _always: dict[str, MappingRule] = field(init=False, repr=False)
    _conditioned: dict[str, list[MappingRule]] = field(init=False, repr=False)

    def __post_init__(self):
        self._always = {}
        self._conditioned = {}
        for rule in self.rules:
            if rule.condition == "always":
                best = self._always.get(rule.source)
                if best is None or rule.priority < best.priority:
                    self._always[rule.source] = rule
            else:
                self._conditioned.setdefault(rule.source, []).append(rule)
        for group in self._conditioned.values():
            group.sort(key=lambda r: r.priority)

    def always_rule(self, source: str) -> MappingRule:
        rule = self._always.get(source)
        if rule is None:
            raise UnknownSymbolError(f"no rule for English phoneme {source!r}")
        return rule

    def select(self, phones, i) -> MappingRule:
        """The rule that fires for phones[i]: the lowest-priority conditioned
        rule whose context holds, else the unconditional rule."""
        source = phones[i]
        for rule in self._conditioned.get(source, ()):
            if _condition_holds(rule.condition, phones, i, self.inventory):
                return rule
        return self.always_rule(source)


def _condition_holds(condition, phones, i, inv) -> bool:
    if condition == "always":
        return True
    at_end = i == len(phones) - 1
    before_consonant = not at_end and inv.is_consonant(phones[i + 1])
    if condition == "final":
        return at_end
    if condition == "precons":
        return before_consonant
    return at_end or before_consonant  # final-or-precons


def _conditions_overlap(a: str, b: str) -> bool:
    if a == b:
        return True
    return "final-or-precons" in (a, b)  # final vs precons are disjoint


def load_fallback(path, inv: Inventory) -> dict[str, str]:
    """Parse a CATEGORY | vowel fallback table."""
    table: dict[str, str] = {}
    with open(path, encoding="utf-8") as handle:
        for line_no, raw in enumerate(handle, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            fields = [f.strip() for f in line.split("|")]
            if len(fields) != 2:
                raise FileFormatError(path, line_no, "expected CATEGORY | vowel")
            category, vowel = fields
            if category not in ENGLISH_CATEGORIES:
                raise UnknownSymbolError(f"{path}:{line_no}: unknown category {category!r}")
            if not inv.has_role(vowel, "nucleus"):
                raise UnknownSymbolError(
                    f"{path}:{line_no}: fallback token {vowel!r} is not a nucleus"
                )
            if category in table:
                raise DuplicateEntryError(f"{path}:{line_no}: duplicate category {category!r}")
            table[category] = vowel
    return table


def load_rules(path, inv: Inventory, fallback_path=None) -> RuleSet:
    """Parse a rules file and check totality over the English inventory.

    Raises UnknownSymbolError for unresolvable symbols, DuplicateEntryError
    for repeated (source, condition, priority) triples, and RuleSetError for
    same-priority rules with overlapping contexts or for a rule set that
    leaves some English phoneme without an unconditional rule.
    """
    rules: list[MappingRule] = []
    seen: set[tuple[str, str, int]] = set()
    with open(path, encoding="utf-8") as handle:
        for line_no, raw in enumerate(handle, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            fields = [f.strip() for f in line.split("|")]
            if len(fields) != 4:
                raise FileFormatError(
                    path, line_no, "expected SOURCE | CONDITION | targets | priority"
                )
            source, condition, target_text, priority_text = fields
            if source not in inv.english:
                raise UnknownSymbolError(f"{path}:{line_no}: unknown English phoneme {source!r}")
            if condition not in CONDITIONS:
                raise FileFormatError(path, line_no, f"unknown condition {condition!r}")
            target = tuple(target_text.split())
            if not target:
                raise FileFormatError(path, line_no, "empty target")
            for token in target:
                if token not in inv.mandarin:
                    raise UnknownSymbolError(
                        f"{path}:{line_no}: unknown Mandarin phone {token!r}"
                    )
            try:
                priority = int(priority_text)
            except ValueError:
                raise FileFormatError(path, line_no, f"bad priority {priority_text!r}") from None
            key = (source, condition, priority)
            if key in seen:
                raise DuplicateEntryError(
                    f"{path}:{line_no}: duplicate rule {source} | {condition} | {priority}"
                )
            seen.add(key)
            rules.append(MappingRule(source, condition, target, priority))

    for source, condition, priority in seen:
        if condition == "always":
            continue
        for other_source, other_condition, other_priority in seen:
            if (
                other_source == source
                and other_priority == priority
                and other_condition != condition
                and other_condition != "always"
                and _conditions_overlap(condition, other_condition)
            ):
                raise RuleSetError(
                    f"{path}: rules for {source!r} at priority {priority} have "
                    f"overlapping conditions {condition!r} and {other_condition!r}"
                )

    covered = {rule.source for rule in rules if rule.condition == "always"}
    missing = sorted(set(inv.english) - covered)
    if missing:
        raise RuleSetError(
            f"{path}: rule set is not total, no unconditional rule for: {' '.join(missing)}"
        )

    fallback = load_fallback(fallback_path, inv) if fallback_path is not None else None
    return RuleSet(tuple(rules), inv, fallback)


def map_direct(phones, rules: RuleSet) -> list[str]:
    """Concatenation of the unconditional rule targets, in order."""
    out: list[str] = []
    for symbol in phones:
        out.extend(rules.always_rule(symbol).target)
    return out


def map_transfer(phones, rules: RuleSet) -> list[str]:
    """Mapping with conditioned rules and fallback epenthesis applied."""
    return [token for token, _ in _transfer_emit(phones, rules)]


def epenthesis_positions(phones, rules: RuleSet) -> list[tuple[int, str]]:
    """(index, token) pairs, over transfer-output indices, of the inserted
    tokens; deleting them from the transfer output yields the direct output."""
    emitted = _transfer_emit(phones, rules)
    return [(i, token) for i, (token, inserted) in enumerate(emitted) if inserted]


def _transfer_emit(phones, rules: RuleSet) -> list[tuple[str, bool]]:
    inv = rules.inventory
    out: list[tuple[str, bool]] = []
    phones = list(phones)
    for i, symbol in enumerate(phones):
        always = rules.always_rule(symbol)
        rule = rules.select(phones, i)
        previous = out[-1][0] if out else None
        if rule is not always:
            out.extend(_mark_insertions(always.target, rule.target))
            continue
        out.extend((token, False) for token in always.target)
        if rules.fallback is None:
            continue
        if inv.is_vowel(symbol) or not _condition_holds("final-or-precons", phones, i, inv):
            continue
        # A mapped nasal passes through bare when it can ride as the coda of
        # the syllable just built; otherwise it needs a vowel like any other
        # consonant (e.g. a word-initial nasal directly before a consonant).
        tail = always.target[-1]
        if (
            inv.has_role(tail, "nasal-coda")
            and previous is not None
            and inv.has_role(previous, "nucleus")
        ):
            continue
        vowel = rules.fallback.get(inv.category_of(symbol))
        if vowel is not None:
            out.append((vowel, True))
    return out


def _mark_insertions(base: tuple[str, ...], target: tuple[str, ...]):
    """Mark target tokens not present in base as inserted. Conditioned rules
    conventionally extend their unconditional target, so the prefix path is
    the common case; anything else falls back to a minimal diff."""
    if target[: len(base)] == base:
        for k, token in enumerate(target):
            yield token, k >= len(base)
        return
    matcher = SequenceMatcher(a=base, b=target, autojunk=False)
    for op, _, _, j1, j2 in matcher.get_opcodes():
        for j in range(j1, j2):
            yield target[j], op in ("insert", "replace")


def default_direct_rules(inv: Inventory | None = None) -> RuleSet:
    inv = inv if inv is not None else load_inventory(bundled_data_path("inventory.txt"))
    return load_rules(bundled_data_path("direct.rules"), inv)


def default_transfer_rules(inv: Inventory | None = None, fallback: bool = True) -> RuleSet:
    inv = inv if inv is not None else load_inventory(bundled_data_path("inventory.txt"))
    fallback_path = bundled_data_path("fallback.rules") if fallback else None
    return load_rules(bundled_data_path("transfer.rules"), inv, fallback_path)
