"""ARPA backoff n-gram models: parsing, unigram patching, perplexity.

Patching inserts new words as unigrams at one shared probability and rescales
the existing non-sentinel unigram mass by (1 - N*p), so the new words sit at
exactly p and the unigram section still sums to one. Higher-order sections
and their backoff weights are left untouched; conditional_mass_sums() reports
how far each context's conditional distribution drifts as a result.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

from .errors import FileFormatError, OovTokenError, PatchError
from .fileio import atomic_write_text

SENTINEL_LOG10 = -99.0  # at or below: carries no probability mass (<s> convention)
UNK_TOKENS = ("<unk>", "<UNK>")


@dataclass(frozen=True)
class NgramEntry:
    logprob: float
    tokens: tuple[str, ...]
    backoff: float | None = None


class ArpaModel:
    """Parsed model; treat as immutable (patching returns a new model)."""

    def __init__(self, orders: dict[int, list[NgramEntry]]):
        self.orders = {k: tuple(v) for k, v in sorted(orders.items())}
        self._probs: dict[tuple[str, ...], float] | None = None
        self._backoffs: dict[tuple[str, ...], float] | None = None

    @property
    def order(self) -> int:
        return max(self.orders) if self.orders else 0

    @property
    def vocab(self) -> frozenset[str]:
        return frozenset(e.tokens[0] for e in self.orders.get(1, ()))

    @property
    def unk_token(self) -> str | None:
        vocab = self.vocab
        for candidate in UNK_TOKENS:
            if candidate in vocab:
                return candidate
        return None

    def unigram_logprob(self, token: str) -> float:
        probs, _ = self._index()
        return probs[(token,)]

    def nonsentinel_unigram_sum(self) -> float:
        return sum(
            10.0 ** e.logprob
            for e in self.orders.get(1, ())
            if e.logprob > SENTINEL_LOG10
        )

    def _index(self):
        if self._probs is None:
            probs: dict[tuple[str, ...], float] = {}
            backoffs: dict[tuple[str, ...], float] = {}
            for entries in self.orders.values():
                for e in entries:
                    probs[e.tokens] = e.logprob
                    if e.backoff is not None:
                        backoffs[e.tokens] = e.backoff
            self._probs = probs
            self._backoffs = backoffs
        return self._probs, self._backoffs


def parse_arpa(path) -> ArpaModel:
    """Parse ARPA text. Raises FileFormatError with line numbers for header,
    count, and entry problems; warns when the non-sentinel unigram mass
    deviates from 1 by more than 1e-6."""
    declared: dict[int, int] = {}
    orders: dict[int, list[NgramEntry]] = {}
    state = "preamble"
    current: int | None = None
    with open(path, encoding="utf-8") as handle:
        for line_no, raw in enumerate(handle, start=1):
            line = raw.strip()
            if not line:
                continue
            if line == "\\data\\":
                if state != "preamble":
                    raise FileFormatError(path, line_no, "unexpected \\data\\")
                state = "header"
                continue
            if line == "\\end\\":
                state = "end"
                continue
            if state == "preamble":
                continue  # arbitrary text may precede \data\
            if state == "end":
                raise FileFormatError(path, line_no, "content after \\end\\")
            if state == "header":
                if line.startswith("ngram "):
                    try:
                        n_text, count_text = line[len("ngram "):].split("=")
                        declared[int(n_text)] = int(count_text)
                    except ValueError:
                        raise FileFormatError(path, line_no, f"bad count line {line!r}") from None
                    continue
                state = "sections"
            if line.endswith("-grams:") and line.startswith("\\"):
                try:
                    current = int(line[1:].split("-")[0])
                except ValueError:
                    raise FileFormatError(path, line_no, f"bad section header {line!r}") from None
                if current not in declared:
                    raise FileFormatError(
                        path, line_no, f"section for undeclared order {current}"
                    )
                orders.setdefault(current, [])
                continue
            if current is None:
                raise FileFormatError(path, line_no, f"entry outside any section: {line!r}")
            parts = line.split()
            if len(parts) not in (current + 1, current + 2):
                raise FileFormatError(
                    path, line_no,
                    f"expected {current}-gram entry, got {len(parts)} fields",
                )
            try:
                logprob = float(parts[0])
                backoff = float(parts[-1]) if len(parts) == current + 2 else None
            except ValueError:
                raise FileFormatError(path, line_no, f"bad number in entry {line!r}") from None
            tokens = tuple(parts[1 : current + 1])
            orders[current].append(NgramEntry(logprob, tokens, backoff))

    if state not in ("sections", "end") or not declared:
        raise FileFormatError(path, 0, "missing \\data\\ header")
    for n, count in declared.items():
        actual = len(orders.get(n, ()))
        if actual != count:
            raise FileFormatError(
                path, 0, f"header declares ngram {n}={count} but section has {actual} entries"
            )

    model = ArpaModel(orders)
    vocab = model.vocab
    for n, entries in model.orders.items():
        if n == 1:
            continue
        for e in entries:
            for token in e.tokens:
                if token not in vocab:
                    raise FileFormatError(
                        path, 0, f"{n}-gram token {token!r} is not a unigram"
                    )
    total = model.nonsentinel_unigram_sum()
    if model.orders.get(1) and abs(total - 1.0) > 1e-6:
        warnings.warn(
            f"{path}: non-sentinel unigram probabilities sum to {total:.8f}, not 1",
            stacklevel=2,
        )
    return model


def format_arpa(model: ArpaModel) -> str:
    lines = ["\\data\\"]
    for n in sorted(model.orders):
        lines.append(f"ngram {n}={len(model.orders[n])}")
    for n in sorted(model.orders):
        lines.append("")
        lines.append(f"\\{n}-grams:")
        for e in model.orders[n]:
            line = f"{e.logprob:.6f}\t{' '.join(e.tokens)}"
            if e.backoff is not None:
                line += f"\t{e.backoff:.6f}"
            lines.append(line)
    lines.append("")
    lines.append("\\end\\")
    return "\n".join(lines) + "\n"


def emit_arpa(model: ArpaModel, path) -> None:
    atomic_write_text(path, format_arpa(model))


@dataclass(frozen=True)
class PatchSpec:
    new_words: tuple[str, ...]
    unified_probability: float

    def __post_init__(self):
        p = self.unified_probability
        if not 0.0 < p < 1.0:
            raise PatchError(f"unified probability must lie in (0, 1), got {p}")
        if len(set(self.new_words)) != len(self.new_words):
            raise PatchError("new word list contains duplicates")
        if len(self.new_words) * p >= 1.0:
            raise PatchError(
                f"{len(self.new_words)} words at probability {p} exceed the available mass"
            )


def patch_unigrams(model: ArpaModel, spec: PatchSpec) -> ArpaModel:
    """New unigrams at the unified probability (backoff weight 1); existing
    non-sentinel unigrams scaled by (1 - N*p); higher orders untouched."""
    vocab = model.vocab
    for word in spec.new_words:
        if word in vocab:
            raise PatchError(f"word {word!r} is already in the model vocabulary")
    if not spec.new_words:
        return ArpaModel({n: list(entries) for n, entries in model.orders.items()})
    scale = math.log10(1.0 - len(spec.new_words) * spec.unified_probability)
    new_logprob = math.log10(spec.unified_probability)
    unigrams = []
    for e in model.orders.get(1, ()):
        if e.logprob > SENTINEL_LOG10:
            unigrams.append(NgramEntry(e.logprob + scale, e.tokens, e.backoff))
        else:
            unigrams.append(e)
    for word in spec.new_words:
        unigrams.append(NgramEntry(new_logprob, (word,), 0.0))
    orders = {n: list(entries) for n, entries in model.orders.items()}
    orders[1] = unigrams
    return ArpaModel(orders)


def _resolve_token(model: ArpaModel, token: str, oov_policy: str) -> str:
    if token in model.vocab:
        return token
    if oov_policy == "error":
        raise OovTokenError(f"token {token!r} is out of vocabulary")
    unk = model.unk_token
    if unk is None:
        raise OovTokenError(
            f"token {token!r} is out of vocabulary and the model has no unknown-word token"
        )
    return unk


def _backoff_logprob(model: ArpaModel, context: tuple[str, ...], token: str) -> float:
    probs, backoffs = model._index()
    acc = 0.0
    while True:
        hit = probs.get(context + (token,))
        if hit is not None:
            return acc + hit
        if not context:
            raise OovTokenError(f"token {token!r} has no unigram entry")
        acc += backoffs.get(context, 0.0)
        context = context[1:]


def sentence_logprob(model: ArpaModel, tokens, oov_policy: str = "unk") -> float:
    """Standard Katz-style backoff score of the token sequence, log10.

    When the model defines "<s>" it seeds the history (it is not scored);
    every given token is scored. OOV tokens map to the model's unknown-word
    token under the "unk" policy, or raise under "error"."""
    tokens = list(tokens)
    if not tokens:
        raise ValueError("cannot score an empty token sequence")
    if oov_policy not in ("unk", "error"):
        raise ValueError(f"oov_policy must be 'unk' or 'error', got {oov_policy!r}")
    resolved = [_resolve_token(model, t, oov_policy) for t in tokens]
    history: tuple[str, ...] = ("<s>",) if "<s>" in model.vocab else ()
    span = max(model.order - 1, 0)
    total = 0.0
    for token in resolved:
        context = history[-span:] if span else ()
        total += _backoff_logprob(model, context, token)
        history = history + (token,)
    return total


def perplexity(model: ArpaModel, text, oov_policy: str = "unk") -> float:
    """10^(-logprob/count) over the whole text; sentences may be strings
    (whitespace-tokenized) or token sequences. A sentence-end token is scored
    for every sentence when the model defines "</s>"."""
    eos = "</s>" if "</s>" in model.vocab else None
    total = 0.0
    count = 0
    for sentence in text:
        tokens = sentence.split() if isinstance(sentence, str) else list(sentence)
        if eos is not None:
            tokens = tokens + [eos]
        if not tokens:
            continue
        total += sentence_logprob(model, tokens, oov_policy)
        count += len(tokens)
    if count == 0:
        raise ValueError("no tokens to evaluate")
    return 10.0 ** (-total / count)


def evaluate_grid(model: ArpaModel, new_words, dev_text, grid, oov_policy: str = "unk"):
    """(probability, perplexity) for every grid point, ascending by
    probability; evaluation never mutates the input model."""
    if not grid:
        raise ValueError("probability grid is empty")
    words = tuple(new_words)
    results = []
    for p in sorted(grid):
        patched = patch_unigrams(model, PatchSpec(words, p))
        results.append((p, perplexity(patched, dev_text, oov_policy)))
    return results


def tune_uniform_probability(
    model: ArpaModel, new_words, dev_text, grid, oov_policy: str = "unk", maximize: bool = False
) -> tuple[float, float]:
    """The grid point minimizing dev perplexity (ties break toward the
    smaller probability). ``maximize`` flips the objective."""
    results = evaluate_grid(model, new_words, dev_text, grid, oov_policy)
    best = results[0]
    for candidate in results[1:]:
        if (candidate[1] > best[1]) if maximize else (candidate[1] < best[1]):
            best = candidate
    return best


def conditional_mass_sums(model: ArpaModel) -> dict[tuple[str, ...], float]:
    """Sum of p(w|h) over the predictable vocabulary for every context h that
    appears as an entry of order < max. Equals 1 per context for a consistent
    model; quantifies the drift left by unigram-only patching. Intended for
    small diagnostic models (cost is |contexts| x |vocab|)."""
    predictable = [
        e.tokens[0] for e in model.orders.get(1, ()) if e.logprob > SENTINEL_LOG10
    ]
    sums: dict[tuple[str, ...], float] = {}
    for n, entries in model.orders.items():
        if n >= model.order:
            continue
        for e in entries:
            context = e.tokens
            sums[context] = sum(
                10.0 ** _backoff_logprob(model, context, w) for w in predictable
            )
    return sums
