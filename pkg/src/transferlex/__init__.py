"""Mandarin pronunciation lexicons for English words.

Converts English pronunciations into Mandarin phone sequences with
configurable context-sensitive rewrite rules, validates the results against
Mandarin syllable structure, merges them into ASR lexicons, patches ARPA
language models with the new words, and scores mixed-script recognition
output.
"""

__version__ = "0.1.0"

from .arpa import (
    ArpaModel,
    NgramEntry,
    PatchSpec,
    conditional_mass_sums,
    emit_arpa,
    evaluate_grid,
    parse_arpa,
    patch_unigrams,
    perplexity,
    sentence_logprob,
    tune_uniform_probability,
)
from .cmu import EnglishPron, format_cmu_entry, index_by_word, parse_cmu_dict, parse_cmu_line
from .errors import (
    DuplicateEntryError,
    FileFormatError,
    OovTokenError,
    PatchError,
    RuleSetError,
    ScoringError,
    ToolkitError,
    UnknownSymbolError,
    WordNotFoundError,
)
from .inventory import (
    EnglishPhoneme,
    Inventory,
    MandarinPhone,
    category_of,
    default_inventory,
    load_inventory,
    strip_stress,
)
from .lexicon import Lexicon, PronEntry, augment, emit_lexicon, parse_lexicon
from .phonotactics import (
    LegalityReport,
    Syllable,
    SyllabifyResult,
    is_legal,
    legality_report,
    syllabify,
)
from .rules import (
    MappingRule,
    RuleSet,
    default_direct_rules,
    default_transfer_rules,
    epenthesis_positions,
    load_rules,
    map_direct,
    map_transfer,
)
from .scoring import (
    AlignmentReport,
    CorpusReport,
    MixedToken,
    align,
    breakdown,
    corpus_score,
    mixed_tokenize,
)
