"""Command-line entry point.

Subcommands cover the full pipeline: ``map`` words or phone strings, ``augment``
a base lexicon, ``validate`` a lexicon against Mandarin phonotactics,
``patch-lm`` an ARPA model with new words, and ``score`` recognition output.
Exit codes: 0 success, 1 usage error, 2 lookup failure, 3 data/validation
error, 4 I/O error.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

from . import __version__
from .arpa import (
    PatchSpec,
    emit_arpa,
    evaluate_grid,
    parse_arpa,
    patch_unigrams,
    perplexity,
)
from .cmu import index_by_word, load_word_list, parse_cmu_dict
from .errors import ToolkitError, WordNotFoundError
from .fileio import atomic_write_text
from .inventory import bundled_data_path, load_inventory, strip_stress
from .lexicon import augment, emit_lexicon, parse_lexicon
from .phonotactics import legality_report
from .rules import load_rules, map_direct, map_transfer
from .scoring import corpus_score, counts_tsv

_CONFIG_KEYS = ("inventory", "direct_rules", "transfer_rules", "fallback_rules", "dict")


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage errors exit 1, not argparse's default 2
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _load_config(path):
    if path is None:
        return {}
    with open(path, encoding="utf-8") as handle:
        config = json.load(handle)
    unknown = set(config) - set(_CONFIG_KEYS)
    if unknown:
        raise ToolkitError(f"unknown config keys: {sorted(unknown)}")
    return config


def _resolve(args, key, default=None):
    """Command line beats config file beats bundled default."""
    value = getattr(args, key, None)
    if value is not None:
        return value
    value = args._config.get(key)
    if value is not None:
        return value
    return default


def _require_files(*paths):
    for path in paths:
        if path is not None and not os.path.exists(path):
            raise FileNotFoundError(f"required file does not exist: {path}")


def _load_inventory(args):
    path = _resolve(args, "inventory", bundled_data_path("inventory.txt"))
    _require_files(path)
    return load_inventory(path)


def _load_ruleset(args, inv, transfer):
    if transfer:
        rules_path = _resolve(args, "transfer_rules", bundled_data_path("transfer.rules"))
        fallback_path = None
        if not args.no_fallback:
            fallback_path = _resolve(args, "fallback_rules", bundled_data_path("fallback.rules"))
        _require_files(rules_path, fallback_path)
        return load_rules(rules_path, inv, fallback_path)
    rules_path = _resolve(args, "direct_rules", bundled_data_path("direct.rules"))
    _require_files(rules_path)
    return load_rules(rules_path, inv)


def _usage_exit(message):
    print(f"error: {message}", file=sys.stderr)
    return 1


def cmd_map(args):
    inv = _load_inventory(args)
    need_transfer = args.mode in ("transfer", "both")
    need_direct = args.mode in ("direct", "both")
    ruleset = _load_ruleset(args, inv, transfer=need_transfer)

    if args.phones:
        label = args.word if args.word else args.phones
        pron_list = [(label, tuple(strip_stress(t) for t in args.phones.split()))]
    elif args.word:
        dict_path = _resolve(args, "dict")
        if dict_path is None:
            return _usage_exit("no dictionary configured; pass --dict or use --phones")
        _require_files(dict_path)
        entries = parse_cmu_dict(dict_path, inv, words=[args.word])
        if not entries:
            raise WordNotFoundError(f"word {args.word!r} not found in {dict_path}")
        pron_list = []
        for e in entries:
            label = args.word if e.variant == 1 else f"{args.word}({e.variant})"
            pron_list.append((label, e.phones))
    else:
        return _usage_exit("give a word or --phones")

    for label, phones in pron_list:
        if need_direct:
            print(f"{label}\tdirect\t{' '.join(map_direct(phones, ruleset))}")
        if need_transfer:
            print(f"{label}\ttransfer\t{' '.join(map_transfer(phones, ruleset))}")
    return 0


def cmd_augment(args):
    inv = _load_inventory(args)
    ruleset = _load_ruleset(args, inv, transfer=args.mode in ("transfer", "both"))
    dict_path = _resolve(args, "dict")
    if dict_path is None:
        return _usage_exit("augment needs a pronunciation dictionary (--dict)")
    _require_files(args.base, args.words, dict_path)

    base = parse_lexicon(args.base, inv, validate=not args.no_validate_base, provenance="L_o")
    words = load_word_list(args.words)
    dictionary = index_by_word(parse_cmu_dict(dict_path, inv, words=words))
    prons = []
    for word in words:
        variants = dictionary.get(word.lower())
        if not variants:
            raise WordNotFoundError(f"word {word!r} not found in {dict_path}")
        chosen = variants if args.all_variants else variants[:1]
        for pron in chosen:
            # the word list supplies the orthography the lexicon should carry
            prons.append(type(pron)(pron.word, pron.variant, pron.phones, word))

    augmented = augment(base, prons, ruleset, mode=args.mode)
    emit_lexicon(augmented, args.out, tagged=args.tagged)
    print(f"added {len(augmented.entries) - len(base.entries)} entries")
    return 0


def cmd_validate(args):
    inv = _load_inventory(args)
    _require_files(args.lexicon)
    lexicon = parse_lexicon(args.lexicon, inv)
    report = legality_report(
        [(e.word, e.phones) for e in lexicon.entries], inv
    )
    if args.out:
        atomic_write_text(args.out, report.to_tsv())
    if args.figure:
        from .figures import save_legality_figure

        save_legality_figure(report, args.figure)
    print(f"entries\t{report.count}")
    print(f"legal\t{report.legal_count}")
    print(f"rate\t{report.rate:.4f}")
    return 0


def cmd_patch_lm(args):
    _require_files(args.arpa, args.words, args.dev_text)
    model = parse_arpa(args.arpa)
    words = load_word_list(args.words)

    if args.grid:
        if args.dev_text is None:
            return _usage_exit("--grid needs --dev-text to tune against")
        grid = [float(p) for p in args.grid.split(",") if p.strip()]
        with open(args.dev_text, encoding="utf-8") as handle:
            dev_text = [line for line in handle.read().splitlines() if line.strip()]
        results = evaluate_grid(model, words, dev_text, grid, oov_policy=args.oov)
        best = results[0]
        for candidate in results[1:]:
            better = candidate[1] > best[1] if args.maximize else candidate[1] < best[1]
            if better:
                best = candidate
        prob, ppl = best
        if args.figure:
            from .figures import save_tuning_figure

            save_tuning_figure(results, best, args.figure)
        print(f"probability\t{prob:g}")
        print(f"perplexity\t{ppl:.6f}")
    else:
        if args.prob is None:
            return _usage_exit("give --prob or --grid")
        prob = args.prob

    patched = patch_unigrams(model, PatchSpec(tuple(words), prob))
    if not args.grid:
        print(f"probability\t{prob:g}")
        if args.dev_text is not None:
            with open(args.dev_text, encoding="utf-8") as handle:
                dev_text = [line for line in handle.read().splitlines() if line.strip()]
            print(f"perplexity\t{perplexity(patched, dev_text, args.oov):.6f}")
    emit_arpa(patched, args.out)
    return 0


def cmd_score(args):
    _require_files(args.ref, args.hyp)
    report = corpus_score(
        args.ref,
        args.hyp,
        ids=args.ids,
        case_sensitive=args.case_sensitive,
        strip_punct=args.strip_punct,
        attribution=args.attr,
    )
    cer = report.cer
    cer_text = "inf" if math.isinf(cer) else f"{cer * 100:.2f}%"
    print(f"utterances: {len(report.lines)}")
    print(f"reference tokens: {report.n_ref}")
    print(f"errors: S={report.subs} D={report.dels} I={report.ins}")
    print(f"CER: {cer_text}")
    if args.breakdown:
        for label, rates in (("mandarin CER", report.mandarin), ("english WER", report.english)):
            rate = rates.rate
            rate_text = "NA (no reference tokens)" if rate is None else f"{rate * 100:.2f}%"
            print(f"{label}: {rate_text}  ({rates.n_ref} ref tokens)")
    if args.verbose:
        for utt_id, line_report in report.lines:
            print(f"  {utt_id}\t{counts_tsv(line_report)}")
    header = "N\tS\tD\tI\tCER\tMAND_CER\tENG_WER"
    print(header)
    print(counts_tsv(report))
    if args.out:
        rows = [header, counts_tsv(report)]
        if args.verbose:
            rows = ["ID\t" + header] + [
                f"{utt_id}\t{counts_tsv(line_report)}" for utt_id, line_report in report.lines
            ] + ["TOTAL\t" + counts_tsv(report)]
        atomic_write_text(args.out, "\n".join(rows) + "\n")
    if args.figure:
        from .figures import save_score_figure

        save_score_figure(report, args.figure)
    return 0


def build_parser():
    shared = _Parser(add_help=False)
    shared.add_argument("--config", help="JSON config file; command line takes precedence")
    shared.add_argument("--inventory", help="phone inventory file")
    shared.add_argument("--version", action="version", version=f"%(prog)s {__version__}")

    rules_opts = _Parser(add_help=False)
    rules_opts.add_argument("--direct-rules", dest="direct_rules", help="direct rules file")
    rules_opts.add_argument("--transfer-rules", dest="transfer_rules", help="transfer rules file")
    rules_opts.add_argument("--fallback-rules", dest="fallback_rules", help="fallback epenthesis table")
    rules_opts.add_argument(
        "--no-fallback", action="store_true", help="disable fallback epenthesis"
    )
    rules_opts.add_argument("--dict", help="CMU-format pronunciation dictionary")

    parser = _Parser(prog="transferlex", description=__doc__)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_map = sub.add_parser("map", parents=[shared, rules_opts], help="map a word or phone string")
    p_map.add_argument("word", nargs="?", help="headword to look up")
    p_map.add_argument("--phones", help="explicit English phoneme string, e.g. 'K R AA M'")
    p_map.add_argument("--mode", choices=["direct", "transfer", "both"], default="both")
    p_map.set_defaults(func=cmd_map)

    p_aug = sub.add_parser("augment", parents=[shared, rules_opts], help="augment a base lexicon")
    p_aug.add_argument("base", help="base lexicon file")
    p_aug.add_argument("words", help="word list, one headword per line")
    p_aug.add_argument("--mode", choices=["direct", "transfer", "both"], default="both")
    p_aug.add_argument("--out", required=True, help="output lexicon path")
    p_aug.add_argument("--tagged", action="store_true", help="emit the variant tag column")
    p_aug.add_argument(
        "--all-variants", action="store_true",
        help="map every dictionary variant, not just the first",
    )
    p_aug.add_argument(
        "--no-validate-base", action="store_true",
        help="skip Mandarin-inventory validation of the base lexicon",
    )
    p_aug.set_defaults(func=cmd_augment)

    p_val = sub.add_parser("validate", parents=[shared], help="phonotactic legality report")
    p_val.add_argument("lexicon", help="lexicon file to validate")
    p_val.add_argument("--out", help="write the per-entry TSV report here")
    p_val.add_argument("--figure", help="write a summary figure (PNG) here")
    p_val.set_defaults(func=cmd_validate)

    p_lm = sub.add_parser("patch-lm", parents=[shared], help="insert words into an ARPA model")
    p_lm.add_argument("arpa", help="ARPA model file")
    p_lm.add_argument("words", help="new-words file, one token per line")
    p_lm.add_argument("--prob", type=float, help="unified unigram probability")
    p_lm.add_argument("--grid", help="comma-separated probabilities to tune over")
    p_lm.add_argument("--dev-text", dest="dev_text", help="development text for tuning")
    p_lm.add_argument("--out", required=True, help="output ARPA path")
    p_lm.add_argument(
        "--maximize", action="store_true",
        help="pick the grid point maximizing dev perplexity instead of minimizing",
    )
    p_lm.add_argument("--oov", choices=["unk", "error"], default="unk")
    p_lm.add_argument("--figure", help="write the tuning curve (PNG) here")
    p_lm.set_defaults(func=cmd_patch_lm)

    p_score = sub.add_parser("score", parents=[shared], help="score recognition output")
    p_score.add_argument("ref", help="reference transcript file")
    p_score.add_argument("hyp", help="hypothesis transcript file")
    p_score.add_argument("--breakdown", action="store_true", help="print per-language rates")
    p_score.add_argument("--ids", action="store_true", help="pair lines by leading ID<TAB> column")
    p_score.add_argument("--case-sensitive", action="store_true")
    p_score.add_argument("--strip-punct", action="store_true")
    p_score.add_argument("--attr", choices=["preceding", "following"], default="preceding",
                         help="insertion attribution direction")
    p_score.add_argument("--out", help="write the machine-readable TSV here")
    p_score.add_argument("--figure", help="write a summary figure (PNG) here")
    p_score.add_argument("--verbose", action="store_true", help="per-utterance rows")
    p_score.set_defaults(func=cmd_score)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args._config = _load_config(getattr(args, "config", None))
        return args.func(args)
    except WordNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ToolkitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4


def entry_point():
    raise SystemExit(main())
