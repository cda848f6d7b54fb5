"""Exhaustive-enumeration posteriors for tiny corpora.

Deliberately independent of the sampler implementation: joints are computed
with lgamma products over explicit full assignment configurations, never
with the incremental count updates the sampler uses.  Only feasible for a
handful of tokens (the state space has (2K)^T configurations).
"""

import itertools
import math

import numpy as np


def _dirichlet_multinomial_term(counts, prior, dim_prior_total):
    """log of prod Gamma(prior + c) / Gamma(dim_prior_total + sum c), up to
    assignment-independent constants (kept anyway for clarity)."""
    total = 0
    out = 0.0
    for c in counts:
        out += math.lgamma(prior + c)
        total += c
    out -= math.lgamma(dim_prior_total + total)
    return out


def lglda_log_joint(token_word, token_doc, token_loc, z, e, num_docs, num_locs, num_words, hp):
    """Collapsed log joint of one full (z, e) configuration (unnormalized)."""
    k = hp.num_topics
    lam_local = hp.lam / (hp.lam + 1.0)
    lam_global = 1.0 / (hp.lam + 1.0)
    per_location_global = hp.global_counts_mode == "per-location"
    split_phi = hp.phi_mode == "split"

    t = len(z)
    log_p = 0.0
    for i in range(t):
        log_p += math.log(lam_local if e[i] == 0 else lam_global)

    # Per-(document, topic) beta-binomial over locality flags.
    for d in range(num_docs):
        for topic in range(k):
            a = sum(1 for i in range(t) if token_doc[i] == d and z[i] == topic and e[i] == 0)
            b = sum(1 for i in range(t) if token_doc[i] == d and z[i] == topic and e[i] == 1)
            log_p += math.lgamma(hp.gamma_local + a) + math.lgamma(hp.gamma_global + b)
            log_p -= math.lgamma(hp.gamma_local + hp.gamma_global + a + b)

    # Local topic draws: one Dirichlet-multinomial per location.
    for l in range(num_locs):
        counts = [
            sum(1 for i in range(t) if token_loc[i] == l and e[i] == 0 and z[i] == topic)
            for topic in range(k)
        ]
        log_p += _dirichlet_multinomial_term(counts, hp.alpha_local, k * hp.alpha_local)

    # Global topic draws: shared, or one Dirichlet-multinomial per location.
    if per_location_global:
        groups = [
            [i for i in range(t) if e[i] == 1 and token_loc[i] == l] for l in range(num_locs)
        ]
    else:
        groups = [[i for i in range(t) if e[i] == 1]]
    for group in groups:
        counts = [sum(1 for i in group if z[i] == topic) for topic in range(k)]
        log_p += _dirichlet_multinomial_term(counts, hp.alpha_global, k * hp.alpha_global)

    # Word emissions: one Dirichlet-multinomial per topic (or per locality
    # and topic when phi is split).
    if split_phi:
        for slab in ((0,), (1,)):
            for topic in range(k):
                counts = [
                    sum(
                        1
                        for i in range(t)
                        if z[i] == topic and e[i] in slab and token_word[i] == w
                    )
                    for w in range(num_words)
                ]
                log_p += _dirichlet_multinomial_term(counts, hp.beta, num_words * hp.beta)
    else:
        for topic in range(k):
            counts = [
                sum(1 for i in range(t) if z[i] == topic and token_word[i] == w)
                for w in range(num_words)
            ]
            log_p += _dirichlet_multinomial_term(counts, hp.beta, num_words * hp.beta)

    return log_p


def locallda_log_joint(token_word, token_loc, z, num_locs, num_words, num_topics, alpha, beta):
    t = len(z)
    log_p = 0.0
    for l in range(num_locs):
        counts = [
            sum(1 for i in range(t) if token_loc[i] == l and z[i] == topic)
            for topic in range(num_topics)
        ]
        log_p += _dirichlet_multinomial_term(counts, alpha, num_topics * alpha)
    for topic in range(num_topics):
        counts = [
            sum(1 for i in range(t) if z[i] == topic and token_word[i] == w)
            for w in range(num_words)
        ]
        log_p += _dirichlet_multinomial_term(counts, beta, num_words * beta)
    return log_p


def lda_log_joint(token_word, token_doc, z, num_docs, num_words, num_topics, alpha, beta):
    t = len(z)
    log_p = 0.0
    for d in range(num_docs):
        counts = [
            sum(1 for i in range(t) if token_doc[i] == d and z[i] == topic)
            for topic in range(num_topics)
        ]
        log_p += _dirichlet_multinomial_term(counts, alpha, num_topics * alpha)
    for topic in range(num_topics):
        counts = [
            sum(1 for i in range(t) if z[i] == topic and token_word[i] == w)
            for w in range(num_words)
        ]
        log_p += _dirichlet_multinomial_term(counts, beta, num_words * beta)
    return log_p


def config_key(z, e, num_topics):
    """Encode a full (z, e) configuration as one integer."""
    key = 0
    base = 2 * num_topics
    for zi, ei in zip(z, e):
        key = key * base + (int(ei) * num_topics + int(zi))
    return key


def enumerate_lglda_posterior(corpus, hp):
    """Exact posterior over all (z, e) configurations: {config_key: prob}."""
    token_word, token_doc, token_loc = corpus.flatten()
    t = token_word.shape[0]
    k = hp.num_topics
    options = list(itertools.product(range(k), (0, 1)))
    keys = []
    logs = []
    for assignment in itertools.product(options, repeat=t):
        z = [a[0] for a in assignment]
        e = [a[1] for a in assignment]
        logs.append(
            lglda_log_joint(
                token_word,
                token_doc,
                token_loc,
                z,
                e,
                corpus.num_documents,
                corpus.num_locations,
                corpus.num_words,
                hp,
            )
        )
        keys.append(config_key(z, e, k))
    logs = np.array(logs)
    probs = np.exp(logs - logs.max())
    probs /= probs.sum()
    return dict(zip(keys, probs))


def enumerate_locallda_posterior(corpus, num_topics, alpha, beta):
    """Exact posterior over all z configurations: {tuple(z): prob}."""
    token_word, _, token_loc = corpus.flatten()
    t = token_word.shape[0]
    keys = []
    logs = []
    for z in itertools.product(range(num_topics), repeat=t):
        logs.append(
            locallda_log_joint(
                token_word,
                token_loc,
                z,
                corpus.num_locations,
                corpus.num_words,
                num_topics,
                alpha,
                beta,
            )
        )
        keys.append(z)
    logs = np.array(logs)
    probs = np.exp(logs - logs.max())
    probs /= probs.sum()
    return dict(zip(keys, probs))


def total_variation(exact: dict, empirical: dict) -> float:
    keys = set(exact) | set(empirical)
    return 0.5 * sum(abs(exact.get(key, 0.0) - empirical.get(key, 0.0)) for key in keys)
