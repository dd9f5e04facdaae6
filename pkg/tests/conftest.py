"""Shared fixtures: the bundled inventory/rules, the full CMU dictionary
(shipped gzipped under tests/data), and a consistent backoff bigram model
whose probabilities are derived from exact arithmetic."""

import gzip
import math
from pathlib import Path

import pytest

from transferlex.cmu import parse_cmu_dict
from transferlex.inventory import default_inventory
from transferlex.rules import default_direct_rules, default_transfer_rules

DATA_DIR = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def inv():
    return default_inventory()


@pytest.fixture(scope="session")
def direct_rules(inv):
    return default_direct_rules(inv)


@pytest.fixture(scope="session")
def transfer_rules(inv):
    return default_transfer_rules(inv)


@pytest.fixture(scope="session")
def transfer_rules_strict(inv):
    return default_transfer_rules(inv, fallback=False)


@pytest.fixture(scope="session")
def cmudict_path(tmp_path_factory):
    out = tmp_path_factory.mktemp("cmudict") / "cmudict.dict"
    with gzip.open(DATA_DIR / "cmudict.dict.gz", "rt", encoding="utf-8") as handle:
        out.write_text(handle.read(), encoding="utf-8")
    return out


@pytest.fixture(scope="session")
def cmudict_entries(cmudict_path, inv):
    return parse_cmu_dict(cmudict_path, inv)


# A properly normalized backoff bigram over a mixed-script vocabulary: for
# every context the explicit conditional probabilities plus the backoff-
# weighted remainder sum to 1, the way an n-gram toolkit would emit it.
UNIGRAMS = {"<unk>": 0.05, "</s>": 0.25, "北": 0.25, "京": 0.25, "hello": 0.20}
BIGRAMS = {
    ("<s>", "北"): 0.6,
    ("北", "京"): 0.7,
    ("京", "</s>"): 0.5,
    ("京", "hello"): 0.3,
    ("hello", "</s>"): 0.8,
}


def consistent_bigram_text() -> str:
    contexts = ["<s>"] + [w for w in UNIGRAMS if w != "</s>"]
    backoffs = {}
    for h in contexts:
        explicit = {w: p for (c, w), p in BIGRAMS.items() if c == h}
        if explicit:
            left = 1.0 - sum(explicit.values())
            uncovered = 1.0 - sum(UNIGRAMS[w] for w in explicit)
            backoffs[h] = left / uncovered
        else:
            backoffs[h] = 1.0
    lines = ["\\data\\", f"ngram 1={len(UNIGRAMS) + 1}", f"ngram 2={len(BIGRAMS)}", ""]
    lines.append("\\1-grams:")
    lines.append(f"-99\t<s>\t{math.log10(backoffs['<s>'])!r}")
    for w, p in UNIGRAMS.items():
        bow = math.log10(backoffs[w]) if w in backoffs else 0.0
        lines.append(f"{math.log10(p)!r}\t{w}\t{bow!r}")
    lines.append("")
    lines.append("\\2-grams:")
    for (h, w), p in BIGRAMS.items():
        lines.append(f"{math.log10(p)!r}\t{h} {w}")
    lines += ["", "\\end\\", ""]
    return "\n".join(lines)


@pytest.fixture()
def bigram_arpa(tmp_path):
    path = tmp_path / "bigram.arpa"
    path.write_text(consistent_bigram_text(), encoding="utf-8")
    return path


def uniform_unigram_text(words) -> str:
    logprob = math.log10(1.0 / len(words))
    lines = ["\\data\\", f"ngram 1={len(words)}", "", "\\1-grams:"]
    lines += [f"{logprob!r}\t{w}" for w in words]
    lines += ["", "\\end\\", ""]
    return "\n".join(lines)


@pytest.fixture()
def uniform8_arpa(tmp_path):
    path = tmp_path / "uniform8.arpa"
    path.write_text(uniform_unigram_text([f"w{i}" for i in range(8)]), encoding="utf-8")
    return path
