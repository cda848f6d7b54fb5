"""Pure-Python Gibbs sweep kernels.

These mirror lglda._sampler_cy exactly: for the same count arrays and the
same per-token uniform draws both backends produce bit-identical
assignments, because every floating-point expression is evaluated in the
same order.  Keep the two files in sync.

Weight vector layout for the local-global sampler: entries [0, K) are the
local block (locality 0), entries [K, 2K) the global block (locality 1).
"""

from __future__ import annotations

import numpy as np


def lglda_token_weights(
    n_doc_d,
    n_loc_l,
    n_loc_total_l,
    n_glob_g,
    n_glob_total_g,
    word_factor_local,
    word_factor_global,
    alpha_local,
    alpha_global,
    gamma_local,
    gamma_global,
    lam_local,
    lam_global,
):
    """Unnormalized sampling weights over (locality, topic) for one token.

    All count arguments must already exclude the token being resampled.
    ``n_doc_d`` is the (2, K) per-document slice; the word factors are the
    K-vectors (n_word + beta) / (n_word_total + W beta) under each locality.
    """
    k = n_loc_l.shape[0]
    doc_denom = n_doc_d[0] + n_doc_d[1] + (gamma_local + gamma_global)
    docf_local = (n_doc_d[0] + gamma_local) / doc_denom
    docf_global = (n_doc_d[1] + gamma_global) / doc_denom
    topf_local = (n_loc_l + alpha_local) / (n_loc_total_l + k * alpha_local)
    topf_global = (n_glob_g + alpha_global) / (n_glob_total_g + k * alpha_global)
    out = np.empty(2 * k)
    out[:k] = lam_local * docf_local * topf_local * word_factor_local
    out[k:] = lam_global * docf_global * topf_global * word_factor_global
    return out


def lglda_sweep(
    token_word,
    token_doc,
    token_loc,
    token_glob,
    z,
    e,
    n_doc,
    n_loc,
    n_loc_total,
    n_glob,
    n_glob_total,
    n_word,
    n_word_total,
    split_phi,
    alpha_local,
    alpha_global,
    beta,
    gamma_local,
    gamma_global,
    lam_local,
    lam_global,
    uniforms,
):
    """Resample (z, e) for every token once, updating counts in place."""
    num_topics = n_loc.shape[1]
    num_words = n_word.shape[1]
    w_beta = num_words * beta
    t = token_word.shape[0]
    for i in range(t):
        w = token_word[i]
        d = token_doc[i]
        l = token_loc[i]
        g = token_glob[i]
        k_old = z[i]
        e_old = e[i]
        s_old = e_old if split_phi else 0

        n_doc[d, e_old, k_old] -= 1
        if e_old == 0:
            n_loc[l, k_old] -= 1
            n_loc_total[l] -= 1
        else:
            n_glob[g, k_old] -= 1
            n_glob_total[g] -= 1
        n_word[s_old, w, k_old] -= 1
        n_word_total[s_old, k_old] -= 1

        wf_local = (n_word[0, w] + beta) / (n_word_total[0] + w_beta)
        if split_phi:
            wf_global = (n_word[1, w] + beta) / (n_word_total[1] + w_beta)
        else:
            wf_global = wf_local
        weights = lglda_token_weights(
            n_doc[d],
            n_loc[l],
            n_loc_total[l],
            n_glob[g],
            n_glob_total[g],
            wf_local,
            wf_global,
            alpha_local,
            alpha_global,
            gamma_local,
            gamma_global,
            lam_local,
            lam_global,
        )
        cum = np.cumsum(weights)
        u = uniforms[i] * cum[-1]
        j = int(np.searchsorted(cum, u, side="right"))
        if j >= 2 * num_topics:
            j = 2 * num_topics - 1
        k_new = j % num_topics
        e_new = j // num_topics

        s_new = e_new if split_phi else 0
        n_doc[d, e_new, k_new] += 1
        if e_new == 0:
            n_loc[l, k_new] += 1
            n_loc_total[l] += 1
        else:
            n_glob[g, k_new] += 1
            n_glob_total[g] += 1
        n_word[s_new, w, k_new] += 1
        n_word_total[s_new, k_new] += 1
        z[i] = k_new
        e[i] = e_new


def lda_sweep(
    token_word,
    token_doc,
    z,
    n_doc_topic,
    n_word_topic,
    n_topic,
    alpha,
    beta,
    uniforms,
):
    """One collapsed-Gibbs sweep of plain LDA (document-topic conditional)."""
    num_topics = n_doc_topic.shape[1]
    w_beta = n_word_topic.shape[0] * beta
    t = token_word.shape[0]
    for i in range(t):
        w = token_word[i]
        d = token_doc[i]
        k_old = z[i]
        n_doc_topic[d, k_old] -= 1
        n_word_topic[w, k_old] -= 1
        n_topic[k_old] -= 1

        weights = (n_doc_topic[d] + alpha) * ((n_word_topic[w] + beta) / (n_topic + w_beta))
        cum = np.cumsum(weights)
        u = uniforms[i] * cum[-1]
        k_new = int(np.searchsorted(cum, u, side="right"))
        if k_new >= num_topics:
            k_new = num_topics - 1

        n_doc_topic[d, k_new] += 1
        n_word_topic[w, k_new] += 1
        n_topic[k_new] += 1
        z[i] = k_new


def locallda_sweep(
    token_word,
    token_loc,
    z,
    n_loc_topic,
    n_loc_total,
    n_word_topic,
    n_topic,
    alpha,
    beta,
    uniforms,
):
    """One collapsed-Gibbs sweep where topics are drawn per location."""
    num_topics = n_loc_topic.shape[1]
    k_alpha = num_topics * alpha
    w_beta = n_word_topic.shape[0] * beta
    t = token_word.shape[0]
    for i in range(t):
        w = token_word[i]
        l = token_loc[i]
        k_old = z[i]
        n_loc_topic[l, k_old] -= 1
        n_loc_total[l] -= 1
        n_word_topic[w, k_old] -= 1
        n_topic[k_old] -= 1

        weights = ((n_loc_topic[l] + alpha) / (n_loc_total[l] + k_alpha)) * (
            (n_word_topic[w] + beta) / (n_topic + w_beta)
        )
        cum = np.cumsum(weights)
        u = uniforms[i] * cum[-1]
        k_new = int(np.searchsorted(cum, u, side="right"))
        if k_new >= num_topics:
            k_new = num_topics - 1

        n_loc_topic[l, k_new] += 1
        n_loc_total[l] += 1
        n_word_topic[w, k_new] += 1
        n_topic[k_new] += 1
        z[i] = k_new
