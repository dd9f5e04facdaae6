"""Figure renderings for the report-producing commands.

Each helper writes one PNG next to the delimited report it illustrates.
"""

import math

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt


def save_legality_figure(report, path):
    """Legal/illegal entry counts for a lexicon legality report."""
    legal = report.legal_count
    illegal = report.count - legal
    fig, ax = plt.subplots(figsize=(4.5, 3.2))
    bars = ax.bar(["legal", "illegal"], [legal, illegal], color=["#2a9d8f", "#e76f51"])
    ax.bar_label(bars)
    ax.set_ylabel("entries")
    ax.set_title(f"Phonotactic legality: {report.rate:.1%} of {report.count} entries")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_score_figure(report, path):
    """Overall and per-language error rates for a scored corpus."""
    labels, values = [], []
    for label, rate in (
        ("CER", report.cer),
        ("Mandarin CER", report.mandarin.rate),
        ("English WER", report.english.rate),
    ):
        if rate is None or math.isinf(rate):
            continue
        labels.append(label)
        values.append(rate * 100.0)
    fig, ax = plt.subplots(figsize=(5.0, 3.2))
    bars = ax.bar(labels, values, color="#457b9d")
    ax.bar_label(bars, fmt="%.2f")
    ax.set_ylabel("error rate (%)")
    ax.set_title(f"S={report.subs} D={report.dels} I={report.ins} over N={report.n_ref}")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_tuning_figure(grid_results, chosen, path):
    """Dev perplexity across the probability grid, chosen point marked."""
    probs = [p for p, _ in grid_results]
    ppls = [ppl for _, ppl in grid_results]
    fig, ax = plt.subplots(figsize=(5.0, 3.2))
    ax.semilogx(probs, ppls, marker="o", color="#264653")
    ax.axvline(chosen[0], color="#e76f51", linestyle="--", linewidth=1)
    ax.annotate(
        f"p={chosen[0]:g}\nppl={chosen[1]:.2f}",
        xy=(chosen[0], chosen[1]),
        xytext=(5, 5),
        textcoords="offset points",
        fontsize=8,
    )
    ax.set_xlabel("unified unigram probability")
    ax.set_ylabel("dev perplexity")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
