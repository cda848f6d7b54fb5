# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled Gibbs sweep kernels.

Bit-for-bit twin of lglda._sampler_py: every floating-point expression is
evaluated in the same order, so with identical inputs (including the
per-token uniform draws) both backends yield identical assignments.  Keep
the two files in sync.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()


def lglda_sweep(
    int[::1] token_word,
    int[::1] token_doc,
    int[::1] token_loc,
    int[::1] token_glob,
    int[::1] z,
    signed char[::1] e,
    int[:, :, ::1] n_doc,
    int[:, ::1] n_loc,
    int[::1] n_loc_total,
    int[:, ::1] n_glob,
    int[::1] n_glob_total,
    int[:, :, ::1] n_word,
    int[:, ::1] n_word_total,
    int split_phi,
    double alpha_local,
    double alpha_global,
    double beta,
    double gamma_local,
    double gamma_global,
    double lam_local,
    double lam_global,
    double[::1] uniforms,
):
    cdef Py_ssize_t num_topics = n_loc.shape[1]
    cdef Py_ssize_t num_words = n_word.shape[1]
    cdef Py_ssize_t t = token_word.shape[0]
    cdef double w_beta = num_words * beta
    cdef double g_sum = gamma_local + gamma_global
    cdef double k_alpha_local = n_loc.shape[1] * alpha_local
    cdef double k_alpha_global = n_loc.shape[1] * alpha_global
    cdef cnp.ndarray cumbuf_arr = np.empty(2 * num_topics, dtype=np.float64)
    cdef double[::1] cumbuf = cumbuf_arr

    cdef Py_ssize_t i, j, k, w, d, l, g, k_old, k_new
    cdef int e_old, e_new, s_old, s_new, s_g
    cdef double cum, u, doc_denom, docf, topf, wf
    cdef double denom_loc, denom_glob, denom_word_l, denom_word_g

    s_g = 1 if split_phi else 0

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

        denom_loc = n_loc_total[l] + k_alpha_local
        denom_glob = n_glob_total[g] + k_alpha_global

        cum = 0.0
        for k in range(num_topics):
            doc_denom = (n_doc[d, 0, k] + n_doc[d, 1, k]) + g_sum
            docf = (n_doc[d, 0, k] + gamma_local) / doc_denom
            topf = (n_loc[l, k] + alpha_local) / denom_loc
            wf = (n_word[0, w, k] + beta) / (n_word_total[0, k] + w_beta)
            cum = cum + lam_local * docf * topf * wf
            cumbuf[k] = cum
        for k in range(num_topics):
            doc_denom = (n_doc[d, 0, k] + n_doc[d, 1, k]) + g_sum
            docf = (n_doc[d, 1, k] + gamma_global) / doc_denom
            topf = (n_glob[g, k] + alpha_global) / denom_glob
            wf = (n_word[s_g, w, k] + beta) / (n_word_total[s_g, k] + w_beta)
            cum = cum + lam_global * docf * topf * wf
            cumbuf[num_topics + k] = cum

        u = uniforms[i] * cum
        j = 0
        while j < 2 * num_topics - 1 and cumbuf[j] <= u:
            j += 1
        k_new = j % num_topics
        e_new = <int>(j // num_topics)

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
        z[i] = <int>k_new
        e[i] = <signed char>e_new


def lda_sweep(
    int[::1] token_word,
    int[::1] token_doc,
    int[::1] z,
    int[:, ::1] n_doc_topic,
    int[:, ::1] n_word_topic,
    int[::1] n_topic,
    double alpha,
    double beta,
    double[::1] uniforms,
):
    cdef Py_ssize_t num_topics = n_doc_topic.shape[1]
    cdef Py_ssize_t t = token_word.shape[0]
    cdef double w_beta = n_word_topic.shape[0] * beta
    cdef cnp.ndarray cumbuf_arr = np.empty(num_topics, dtype=np.float64)
    cdef double[::1] cumbuf = cumbuf_arr

    cdef Py_ssize_t i, k, w, d, k_old, k_new
    cdef double cum, u

    for i in range(t):
        w = token_word[i]
        d = token_doc[i]
        k_old = z[i]
        n_doc_topic[d, k_old] -= 1
        n_word_topic[w, k_old] -= 1
        n_topic[k_old] -= 1

        cum = 0.0
        for k in range(num_topics):
            cum = cum + (n_doc_topic[d, k] + alpha) * ((n_word_topic[w, k] + beta) / (n_topic[k] + w_beta))
            cumbuf[k] = cum

        u = uniforms[i] * cum
        k_new = 0
        while k_new < num_topics - 1 and cumbuf[k_new] <= u:
            k_new += 1

        n_doc_topic[d, k_new] += 1
        n_word_topic[w, k_new] += 1
        n_topic[k_new] += 1
        z[i] = <int>k_new


def locallda_sweep(
    int[::1] token_word,
    int[::1] token_loc,
    int[::1] z,
    int[:, ::1] n_loc_topic,
    int[::1] n_loc_total,
    int[:, ::1] n_word_topic,
    int[::1] n_topic,
    double alpha,
    double beta,
    double[::1] uniforms,
):
    cdef Py_ssize_t num_topics = n_loc_topic.shape[1]
    cdef Py_ssize_t t = token_word.shape[0]
    cdef double k_alpha = n_loc_topic.shape[1] * alpha
    cdef double w_beta = n_word_topic.shape[0] * beta
    cdef cnp.ndarray cumbuf_arr = np.empty(num_topics, dtype=np.float64)
    cdef double[::1] cumbuf = cumbuf_arr

    cdef Py_ssize_t i, k, w, l, k_old, k_new
    cdef double cum, u, denom_loc

    for i in range(t):
        w = token_word[i]
        l = token_loc[i]
        k_old = z[i]
        n_loc_topic[l, k_old] -= 1
        n_loc_total[l] -= 1
        n_word_topic[w, k_old] -= 1
        n_topic[k_old] -= 1

        denom_loc = n_loc_total[l] + k_alpha
        cum = 0.0
        for k in range(num_topics):
            cum = cum + ((n_loc_topic[l, k] + alpha) / denom_loc) * ((n_word_topic[w, k] + beta) / (n_topic[k] + w_beta))
            cumbuf[k] = cum

        u = uniforms[i] * cum
        k_new = 0
        while k_new < num_topics - 1 and cumbuf[k_new] <= u:
            k_new += 1

        n_loc_topic[l, k_new] += 1
        n_loc_total[l] += 1
        n_word_topic[w, k_new] += 1
        n_topic[k_new] += 1
        z[i] = <int>k_new
