"""Planted-signal synthetic bug reports: label 1 iff the report mentions one
of the designated design keywords, with optional label noise. Stands in for
the unpublished real-project corpora in acceptance runs."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .labeler import LabeledSample


@dataclass
class SyntheticConfig:
    n_samples: int = 2000
    vocab_size: int = 500
    n_design_keywords: int = 10
    positive_rate: float = 0.5
    label_noise: float = 0.1
    min_len: int = 20
    max_len: int = 40
    min_keywords: int = 3
    max_keywords: int = 6


def _word(i: int) -> str:
    return f"term{i:03d}"


def design_keywords(cfg: SyntheticConfig) -> list[str]:
    return [f"designcue{i}" for i in range(cfg.n_design_keywords)]


def generate_reports(cfg: SyntheticConfig, seed: int) -> list[LabeledSample]:
    """Background words drawn uniformly from the non-keyword vocabulary;
    positives get min_keywords-max_keywords distinct design keywords inserted
    at random positions."""
    rng = np.random.default_rng(seed)
    background = [_word(i) for i in range(cfg.vocab_size - cfg.n_design_keywords)]
    keywords = design_keywords(cfg)
    samples = []
    for i in range(cfg.n_samples):
        length = int(rng.integers(cfg.min_len, cfg.max_len + 1))
        words = [background[j] for j in rng.integers(len(background), size=length)]
        positive = rng.random() < cfg.positive_rate
        if positive:
            count = min(int(rng.integers(cfg.min_keywords, cfg.max_keywords + 1)),
                        len(keywords))
            for kw in rng.choice(len(keywords), size=count, replace=False):
                pos = int(rng.integers(len(words) + 1))
                words.insert(pos, keywords[int(kw)])
        label = int(positive)
        if rng.random() < cfg.label_noise:
            label = 1 - label
        samples.append(LabeledSample(
            issue_id=f"SYN-{i:05d}",
            commit_hash="",
            text=" ".join(words),
            label=label,
            total_added_smells=label,
        ))
    return samples
