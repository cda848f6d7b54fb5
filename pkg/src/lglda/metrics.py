"""Evaluation metrics: perplexity, the two entropies, pairwise symmetric
KL-divergence of topics, and ranked top-word extraction.

All functions are pure; entropies and divergences use natural log.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from lglda.baselines import BaselineEstimate
from lglda.corpus import Corpus
from lglda.model import ModelEstimate


@dataclass
class MetricsReport:
    perplexity: float
    topic_entropy: float
    location_entropy: float
    mean_pairwise_kl: float
    per_topic_top_words: list = field(default_factory=list)
    oov_skipped: int = 0

    def key_values(self) -> str:
        return (
            f"perplexity={self.perplexity!r}\n"
            f"topic_entropy={self.topic_entropy!r}\n"
            f"location_entropy={self.location_entropy!r}\n"
            f"mean_pairwise_kl={self.mean_pairwise_kl!r}\n"
            f"oov_skipped={self.oov_skipped}\n"
        )


def entropy(p: np.ndarray) -> float:
    """Shannon entropy in nats with the 0 ln 0 = 0 convention."""
    p = np.asarray(p, dtype=np.float64)
    nz = p > 0
    return float(-(p[nz] * np.log(p[nz])).sum())


def _word_probability_rows(estimate) -> np.ndarray:
    """(L, W) matrix of p(w | document at location l) under the estimate."""
    if isinstance(estimate, ModelEstimate):
        lam_local = estimate.lam / (estimate.lam + 1.0)
        lam_global = 1.0 / (estimate.lam + 1.0)
        phi_l = estimate.phi_local if estimate.phi_local is not None else estimate.phi
        phi_g = estimate.phi_global if estimate.phi_global is not None else estimate.phi
        local_part = estimate.theta_local @ phi_l
        global_part = estimate.theta_global @ phi_g
        return lam_local * local_part + lam_global * global_part[None, :]
    if estimate.kind == "tfidf_kmeans":
        raise ValueError("perplexity is undefined for tfidf_kmeans estimates")
    return estimate.location_topics @ estimate.topic_words


def perplexity(estimate, eval_corpus: Corpus) -> tuple[float, int]:
    """Eq.-style perplexity exp(-sum log p / token count) and an OOV tally.

    Tokens outside the estimate's vocabulary are skipped and counted; the
    evaluation corpus must share the training vocabulary for the tally to
    stay zero.
    """
    if eval_corpus.num_documents == 0:
        raise ValueError("empty evaluation corpus")
    rows = _word_probability_rows(estimate)
    num_words = rows.shape[1]
    log_total = 0.0
    n_tokens = 0
    n_oov = 0
    for doc in eval_corpus.documents:
        tokens = doc.tokens
        in_vocab = tokens < num_words
        n_oov += int((~in_vocab).sum())
        kept = tokens[in_vocab]
        if kept.size == 0:
            continue
        p = rows[doc.location_id, kept]
        with np.errstate(divide="ignore"):
            log_total += float(np.log(p).sum())
        n_tokens += kept.size
    if n_tokens == 0:
        raise ValueError("no in-vocabulary tokens in evaluation corpus")
    return float(np.exp(-log_total / n_tokens)), n_oov


def topic_entropy(location_topics: np.ndarray) -> float:
    """Mean entropy of the per-location topic distributions."""
    rows = np.asarray(location_topics, dtype=np.float64)
    return float(np.mean([entropy(row) for row in rows]))


def location_entropy(location_topics: np.ndarray) -> float:
    """Mean entropy over topics of the column-normalized location shares."""
    rows = np.asarray(location_topics, dtype=np.float64)
    totals = rows.sum(axis=0)
    if np.any(totals <= 0):
        raise ValueError("a topic has zero total mass across locations")
    cols = rows / totals
    return float(np.mean([entropy(cols[:, k]) for k in range(cols.shape[1])]))


def symmetric_kl(p: np.ndarray, q: np.ndarray) -> float:
    """(KL(p||q) + KL(q||p)) / 2, skipping zero-probability terms."""
    p = np.asarray(p, dtype=np.float64)
    q = np.asarray(q, dtype=np.float64)

    def kl(a, b):
        nz = a > 0
        with np.errstate(divide="ignore"):
            ratio = np.log(a[nz] / b[nz])
        return float((a[nz] * ratio).sum())

    return 0.5 * (kl(p, q) + kl(q, p))


def mean_pairwise_kl(topic_words: np.ndarray) -> float:
    """Mean symmetric KL over all unordered topic pairs."""
    phi = np.asarray(topic_words, dtype=np.float64)
    k = phi.shape[0]
    if k < 2:
        raise ValueError("need at least two topics")
    total = 0.0
    n_pairs = 0
    for i in range(k):
        for j in range(i + 1, k):
            total += symmetric_kl(phi[i], phi[j])
            n_pairs += 1
    return total / n_pairs


def top_words(topic_words: np.ndarray, vocabulary_words, n: int) -> list:
    """Per topic, the n highest-weight words; ties break toward lower ids."""
    if n < 1:
        raise ValueError("n must be >= 1")
    phi = np.asarray(topic_words, dtype=np.float64)
    n = min(n, phi.shape[1])
    result = []
    for row in phi:
        order = np.lexsort((np.arange(row.shape[0]), -row))[:n]
        result.append([(vocabulary_words[i], float(row[i])) for i in order])
    return result


def make_report(estimate, eval_corpus: Corpus, vocabulary_words=None, top_n: int = 5) -> MetricsReport:
    """Compute every metric for one trained estimate.

    Perplexity is skipped (NaN) for estimates without generative semantics
    (tfidf_kmeans).
    """
    if isinstance(estimate, BaselineEstimate):
        loc_topics, phi = estimate.location_topics, estimate.topic_words
    else:
        loc_topics, phi = estimate.theta_local, estimate.phi
    if getattr(estimate, "kind", None) == "tfidf_kmeans":
        ppl, oov = float("nan"), 0
    else:
        ppl, oov = perplexity(estimate, eval_corpus)
    words = vocabulary_words if vocabulary_words is not None else eval_corpus.vocabulary.words
    return MetricsReport(
        perplexity=ppl,
        topic_entropy=topic_entropy(loc_topics),
        location_entropy=location_entropy(loc_topics),
        mean_pairwise_kl=mean_pairwise_kl(phi),
        per_topic_top_words=top_words(phi, words, top_n),
        oov_skipped=oov,
    )
