"""Comparison methods: plain LDA with location aggregation, location-level
LDA, and tf-idf vectors clustered with K-means.

All three produce a BaselineEstimate exposing the same
(location_topics, topic_words) shapes so the metrics module can treat every
model uniformly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from lglda import backend
from lglda.corpus import Corpus
from lglda.model import Hyperparameters

BASELINE_KINDS = ("lda", "local_lda", "tfidf_kmeans")


@dataclass
class BaselineEstimate:
    kind: str
    location_topics: np.ndarray  # (L, K), rows sum to 1
    topic_words: np.ndarray  # (K, W), rows sum to 1
    location_names: list
    vocab_sha256: str
    hp: Hyperparameters | None = None
    params: dict | None = None  # tfidf_kmeans settings

    def __post_init__(self):
        if self.kind not in BASELINE_KINDS:
            raise ValueError(f"kind must be one of {BASELINE_KINDS}")

    @property
    def num_topics(self) -> int:
        return self.topic_words.shape[0]

    @property
    def num_words(self) -> int:
        return self.topic_words.shape[1]

    @property
    def num_locations(self) -> int:
        return self.location_topics.shape[0]


def _gibbs_lda(corpus: Corpus, hp: Hyperparameters, by_location: bool):
    """Shared training loop for the two Gibbs baselines.

    ``by_location`` switches the topic-mixing level: False samples topics
    against per-document counts (plain LDA), True against per-location
    counts.  Returns the final count matrices plus the averaged smoothed
    estimates when hp.average_last > 1.
    """
    k = hp.num_topics
    alpha = hp.alpha_local
    beta = hp.beta
    token_word, token_doc, token_loc = corpus.flatten()
    t = token_word.shape[0]
    num_words = corpus.num_words
    rng = np.random.default_rng(hp.seed)
    z = rng.integers(0, k, size=t, dtype=np.int32)

    n_word_topic = np.zeros((num_words, k), dtype=np.int32)
    n_topic = np.zeros(k, dtype=np.int32)
    np.add.at(n_word_topic, (token_word, z), 1)
    np.add.at(n_topic, z, 1)

    if by_location:
        n_group = np.zeros((corpus.num_locations, k), dtype=np.int32)
        n_group_total = np.zeros(corpus.num_locations, dtype=np.int32)
        np.add.at(n_group, (token_loc, z), 1)
        np.add.at(n_group_total, token_loc, 1)
    else:
        n_group = np.zeros((corpus.num_documents, k), dtype=np.int32)
        np.add.at(n_group, (token_doc, z), 1)

    kern = backend.kernels()
    n_avg = min(hp.average_last, hp.iterations)
    first_kept = hp.iterations - n_avg
    acc_group = acc_phi = None
    doc_lengths = np.array([len(d) for d in corpus.documents], dtype=np.float64)

    def smoothed():
        phi = ((n_word_topic + beta) / (n_topic + num_words * beta)).T
        if by_location:
            loc = (n_group + alpha) / (n_group_total[:, None] + k * alpha)
        else:
            doc_theta = (n_group + alpha) / (doc_lengths[:, None] + k * alpha)
            loc = np.zeros((corpus.num_locations, k))
            counts = np.zeros(corpus.num_locations)
            for d, doc in enumerate(corpus.documents):
                loc[doc.location_id] += doc_theta[d]
                counts[doc.location_id] += 1
            counts[counts == 0] = 1.0
            loc = loc / counts[:, None]
        return loc, phi

    for it in range(hp.iterations):
        uniforms = rng.random(t)
        if by_location:
            kern.locallda_sweep(
                token_word, token_loc, z,
                n_group, n_group_total, n_word_topic, n_topic,
                alpha, beta, uniforms,
            )
        else:
            kern.lda_sweep(
                token_word, token_doc, z,
                n_group, n_word_topic, n_topic,
                alpha, beta, uniforms,
            )
        if n_avg > 1 and it >= first_kept:
            loc, phi = smoothed()
            if acc_group is None:
                acc_group, acc_phi = loc, phi
            else:
                acc_group += loc
                acc_phi += phi

    if n_avg > 1:
        return acc_group / n_avg, acc_phi / n_avg
    return smoothed()


def train_lda(corpus: Corpus, hp: Hyperparameters) -> BaselineEstimate:
    """Standard collapsed-Gibbs LDA; per-location topics are the mean of the
    smoothed per-document distributions over that location's documents."""
    location_topics, topic_words = _gibbs_lda(corpus, hp, by_location=False)
    return BaselineEstimate(
        kind="lda",
        location_topics=location_topics,
        topic_words=topic_words,
        location_names=list(corpus.location_names),
        vocab_sha256=corpus.vocabulary.sha256(),
        hp=hp,
    )


def train_local_lda(corpus: Corpus, hp: Hyperparameters) -> BaselineEstimate:
    """Gibbs sampler with one topic distribution per location and no
    document-level or locality structure."""
    location_topics, topic_words = _gibbs_lda(corpus, hp, by_location=True)
    return BaselineEstimate(
        kind="local_lda",
        location_topics=location_topics,
        topic_words=topic_words,
        location_names=list(corpus.location_names),
        vocab_sha256=corpus.vocabulary.sha256(),
        hp=hp,
    )


def locallda_conditional(n_loc_l, n_loc_total_l, n_word_w, n_topic, num_words, alpha, beta) -> np.ndarray:
    """Unnormalized LocalLDA sampling weights for one (already removed) token.

    ``n_loc_l`` is the token's location row, ``n_word_w`` the token's word
    row of the word-topic matrix with ``num_words`` rows overall.
    """
    k = n_loc_l.shape[0]
    return ((n_loc_l + alpha) / (n_loc_total_l + k * alpha)) * (
        (n_word_w + beta) / (n_topic + num_words * beta)
    )


def tfidf_location_vectors(corpus: Corpus) -> np.ndarray:
    """Per-location sums of document tf-idf vectors (tf raw, idf ln(D/df))."""
    num_docs = corpus.num_documents
    num_words = corpus.num_words
    df = np.zeros(num_words)
    for doc in corpus.documents:
        df[np.unique(doc.tokens)] += 1
    with np.errstate(divide="ignore"):
        idf = np.where(df > 0, np.log(num_docs / np.where(df > 0, df, 1.0)), 0.0)
    vectors = np.zeros((corpus.num_locations, num_words))
    for doc in corpus.documents:
        tf = np.bincount(doc.tokens, minlength=num_words)
        vectors[doc.location_id] += tf * idf
    return vectors


def _kmeans_pp_init(points: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    n = points.shape[0]
    centers = np.empty((k, points.shape[1]))
    first = int(rng.integers(n))
    centers[0] = points[first]
    d2 = ((points - centers[0]) ** 2).sum(axis=1)
    for j in range(1, k):
        total = d2.sum()
        if total <= 0:
            idx = int(rng.integers(n))
        else:
            idx = int(rng.choice(n, p=d2 / total))
        centers[j] = points[idx]
        d2 = np.minimum(d2, ((points - centers[j]) ** 2).sum(axis=1))
    return centers


def kmeans(points: np.ndarray, k: int, seed: int, max_iter: int = 300):
    """Lloyd's algorithm with k-means++ seeding.

    Empty clusters are reseeded from the point farthest from its assigned
    center.  Returns (assignments, centers, objective_per_iteration).
    """
    if np.unique(points, axis=0).shape[0] < k:
        raise ValueError("fewer distinct points than requested clusters")
    rng = np.random.default_rng(seed)
    centers = _kmeans_pp_init(points, k, rng)
    assign = np.full(points.shape[0], -1)
    objectives = []
    for _ in range(max_iter):
        d2 = ((points[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2)
        new_assign = d2.argmin(axis=1)
        objectives.append(float(d2[np.arange(points.shape[0]), new_assign].sum()))
        if np.array_equal(new_assign, assign):
            break
        assign = new_assign
        for j in range(k):
            members = points[assign == j]
            if members.shape[0] == 0:
                farthest = int(d2[np.arange(points.shape[0]), assign].argmax())
                centers[j] = points[farthest]
                assign[farthest] = j
            else:
                centers[j] = members.mean(axis=0)
    return assign, centers, objectives


def train_tfidf_kmeans(corpus: Corpus, k_clusters: int, seed: int) -> BaselineEstimate:
    """Cluster per-location tf-idf vectors; cluster centers act as topics."""
    if k_clusters > corpus.num_locations:
        raise ValueError("k_clusters exceeds the number of locations")
    vectors = tfidf_location_vectors(corpus)
    assign, centers, _ = kmeans(vectors, k_clusters, seed)

    centers = np.clip(centers, 0.0, None)
    sums = centers.sum(axis=1, keepdims=True)
    flat = sums[:, 0] <= 0
    centers[flat] = 1.0 / centers.shape[1]
    centers[~flat] = centers[~flat] / sums[~flat]

    location_topics = np.zeros((corpus.num_locations, k_clusters))
    location_topics[np.arange(corpus.num_locations), assign] = 1.0
    return BaselineEstimate(
        kind="tfidf_kmeans",
        location_topics=location_topics,
        topic_words=centers,
        location_names=list(corpus.location_names),
        vocab_sha256=corpus.vocabulary.sha256(),
        params={"k_clusters": k_clusters, "seed": seed},
    )
