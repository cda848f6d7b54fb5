"""Distribution-level checks of the samplers against exhaustive enumeration.

These are reduced-size versions of the acceptance checks: shorter chains,
looser (but still tight) bounds, so the regular suite stays fast.
"""

from collections import Counter

import numpy as np

import enumeration_oracle as oracle
from lglda.corpus import Corpus, Document, Vocabulary
from lglda.model import Hyperparameters, init_state, sweep


def corpus_of(doc_specs, num_words, num_locs):
    docs = [
        Document(f"d{i}", loc, np.array(tokens, dtype=np.int32))
        for i, (loc, tokens) in enumerate(doc_specs)
    ]
    vocab = Vocabulary([chr(97 + i) for i in range(num_words)])
    return Corpus(vocab, docs, num_locs, [f"L{j}" for j in range(num_locs)])


def sample_lglda_configs(corpus, hp, burn, n_samples):
    state = init_state(corpus, hp)
    for _ in range(burn):
        sweep(state)
    powers = (2 * hp.num_topics) ** np.arange(state.num_tokens - 1, -1, -1, dtype=np.int64)
    counts = Counter()
    for _ in range(n_samples):
        sweep(state)
        key = int(((state.e.astype(np.int64) * hp.num_topics + state.z) * powers).sum())
        counts[key] += 1
    return {k: v / n_samples for k, v in counts.items()}


def test_lglda_sampler_matches_enumeration():
    corpus = corpus_of([(0, [0, 0, 1]), (1, [2, 1])], num_words=3, num_locs=2)
    hp = Hyperparameters(num_topics=2, lam=0.6, iterations=1, seed=31)
    exact = oracle.enumerate_lglda_posterior(corpus, hp)
    empirical = sample_lglda_configs(corpus, hp, burn=500, n_samples=40_000)
    assert oracle.total_variation(exact, empirical) < 0.08


def test_lglda_sampler_matches_enumeration_per_location_mode():
    corpus = corpus_of([(0, [0, 1]), (1, [1, 1])], num_words=2, num_locs=2)
    hp = Hyperparameters(
        num_topics=2, lam=1.5, iterations=1, seed=13, global_counts_mode="per-location"
    )
    exact = oracle.enumerate_lglda_posterior(corpus, hp)
    empirical = sample_lglda_configs(corpus, hp, burn=500, n_samples=40_000)
    assert oracle.total_variation(exact, empirical) < 0.08


def test_locallda_sampler_matches_enumeration():
    corpus = corpus_of([(0, [0, 0, 1]), (1, [2, 2])], num_words=3, num_locs=2)
    hp = Hyperparameters(num_topics=2, iterations=1, seed=7)

    token_word, token_doc, token_loc = corpus.flatten()
    t = token_word.shape[0]
    rng = np.random.default_rng(hp.seed)
    z = rng.integers(0, hp.num_topics, size=t, dtype=np.int32)
    n_loc = np.zeros((corpus.num_locations, hp.num_topics), dtype=np.int32)
    n_loc_total = np.zeros(corpus.num_locations, dtype=np.int32)
    n_word = np.zeros((corpus.num_words, hp.num_topics), dtype=np.int32)
    n_topic = np.zeros(hp.num_topics, dtype=np.int32)
    np.add.at(n_loc, (token_loc, z), 1)
    np.add.at(n_loc_total, token_loc, 1)
    np.add.at(n_word, (token_word, z), 1)
    np.add.at(n_topic, z, 1)

    from lglda import backend

    kern = backend.kernels()
    for _ in range(500):
        kern.locallda_sweep(
            token_word, token_loc, z, n_loc, n_loc_total, n_word, n_topic,
            hp.alpha_local, hp.beta, rng.random(t),
        )
    counts = Counter()
    n_samples = 40_000
    for _ in range(n_samples):
        kern.locallda_sweep(
            token_word, token_loc, z, n_loc, n_loc_total, n_word, n_topic,
            hp.alpha_local, hp.beta, rng.random(t),
        )
        counts[tuple(int(x) for x in z)] += 1
    empirical = {k: v / n_samples for k, v in counts.items()}
    exact = oracle.enumerate_locallda_posterior(corpus, hp.num_topics, hp.alpha_local, hp.beta)
    tv = oracle.total_variation(exact, empirical)
    assert tv < 0.08
