"""The local-global topic model: state, collapsed Gibbs sampler, estimators.

Every token carries two latent assignments: a topic z in [0, K) and a
locality flag e (0 = local, 1 = global).  Local tokens draw their topic
from the per-location distribution, global tokens from a distribution
shared across locations; a fixed weight ratio lambda mixes the two blocks.
The per-document relevance variable is collapsed into the gamma-smoothed
document factor of the conditional, so it is never stored explicitly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from lglda import _sampler_py, backend
from lglda.corpus import Corpus, Document

LOCAL, GLOBAL = 0, 1

GLOBAL_COUNTS_MODES = ("corpus-wide", "per-location")
PHI_MODES = ("shared", "split")


@dataclass(frozen=True)
class Hyperparameters:
    """Priors and run settings for the local-global sampler.

    ``lam`` is the local/global weight ratio: the local block of the
    sampling distribution carries weight lam/(lam+1), the global block
    1/(lam+1).
    """

    num_topics: int = 20
    alpha_local: float = 0.1
    alpha_global: float = 0.1
    beta: float = 0.1
    gamma_local: float = 0.5
    gamma_global: float = 0.5
    lam: float = 0.6
    iterations: int = 500
    seed: int = 1
    global_counts_mode: str = "corpus-wide"
    phi_mode: str = "shared"
    average_last: int = 1

    def __post_init__(self):
        if self.num_topics < 2:
            raise ValueError("num_topics must be >= 2")
        for name in ("alpha_local", "alpha_global", "beta", "gamma_local", "gamma_global"):
            if getattr(self, name) <= 0.0:
                raise ValueError(f"{name} must be strictly positive")
        if self.lam <= 0.0:
            raise ValueError("lam must be > 0")
        if self.iterations < 1:
            raise ValueError("iterations must be >= 1")
        if self.global_counts_mode not in GLOBAL_COUNTS_MODES:
            raise ValueError(f"global_counts_mode must be one of {GLOBAL_COUNTS_MODES}")
        if self.phi_mode not in PHI_MODES:
            raise ValueError(f"phi_mode must be one of {PHI_MODES}")
        if self.average_last < 1:
            raise ValueError("average_last must be >= 1")

    @property
    def lambda_local(self) -> float:
        return self.lam / (self.lam + 1.0)

    @property
    def lambda_global(self) -> float:
        return 1.0 / (self.lam + 1.0)


@dataclass
class ModelEstimate:
    """Point estimates of the per-location, global, and topic-word distributions."""

    theta_local: np.ndarray  # (L, K)
    theta_global: np.ndarray  # (K,)
    phi: np.ndarray  # (K, W)
    lam: float
    location_names: list
    vocab_sha256: str
    hp: Hyperparameters | None = None
    kind: str = "lglda"
    # Populated in split-phi mode only; per-locality word distributions.
    phi_local: np.ndarray | None = None
    phi_global: np.ndarray | None = None

    @property
    def num_topics(self) -> int:
        return self.phi.shape[0]

    @property
    def num_words(self) -> int:
        return self.phi.shape[1]

    @property
    def num_locations(self) -> int:
        return self.theta_local.shape[0]


class LgldaState:
    """All count matrices plus per-token assignments for one training run.

    Count families (T = corpus token count):
      n_doc[d, e, k]        tokens in document d with locality e, topic k
      n_loc[l, k]           local tokens at location l with topic k
      n_glob[g, k]          global tokens with topic k; one row (corpus-wide
                            mode) or one row per location (per-location mode)
      n_word[s, w, k]       word-topic counts; one slab (shared phi) or one
                            per locality (split phi)
    The *_total arrays hold the matching denominators.
    """

    def __init__(self, corpus: Corpus, hp: Hyperparameters, rng: np.random.Generator):
        self.corpus = corpus
        self.hp = hp
        self.rng = rng

        k = hp.num_topics
        num_docs = corpus.num_documents
        num_locs = corpus.num_locations
        num_words = corpus.num_words

        self.token_word, self.token_doc, self.token_loc = corpus.flatten()
        t = self.token_word.shape[0]

        if hp.global_counts_mode == "per-location":
            self.token_glob = self.token_loc
            num_glob = num_locs
        else:
            self.token_glob = np.zeros(t, dtype=np.int32)
            num_glob = 1
        self.split_phi = 1 if hp.phi_mode == "split" else 0
        num_slabs = 2 if self.split_phi else 1

        self.z = rng.integers(0, k, size=t, dtype=np.int32)
        self.e = rng.integers(0, 2, size=t).astype(np.int8)

        self.n_doc = np.zeros((num_docs, 2, k), dtype=np.int32)
        self.n_loc = np.zeros((num_locs, k), dtype=np.int32)
        self.n_loc_total = np.zeros(num_locs, dtype=np.int32)
        self.n_glob = np.zeros((num_glob, k), dtype=np.int32)
        self.n_glob_total = np.zeros(num_glob, dtype=np.int32)
        self.n_word = np.zeros((num_slabs, num_words, k), dtype=np.int32)
        self.n_word_total = np.zeros((num_slabs, k), dtype=np.int32)
        self._count_from_assignments()

    def _count_from_assignments(self):
        self.n_doc[:] = 0
        self.n_loc[:] = 0
        self.n_loc_total[:] = 0
        self.n_glob[:] = 0
        self.n_glob_total[:] = 0
        self.n_word[:] = 0
        self.n_word_total[:] = 0
        for i in range(self.token_word.shape[0]):
            k, loc_flag = self.z[i], self.e[i]
            self.n_doc[self.token_doc[i], loc_flag, k] += 1
            if loc_flag == LOCAL:
                self.n_loc[self.token_loc[i], k] += 1
                self.n_loc_total[self.token_loc[i]] += 1
            else:
                self.n_glob[self.token_glob[i], k] += 1
                self.n_glob_total[self.token_glob[i]] += 1
            s = loc_flag if self.split_phi else 0
            self.n_word[s, self.token_word[i], k] += 1
            self.n_word_total[s, k] += 1

    @property
    def num_tokens(self) -> int:
        return int(self.token_word.shape[0])

    def decrement(self, i: int):
        """Remove token i's current assignment from all count matrices."""
        k, loc_flag = int(self.z[i]), int(self.e[i])
        self.n_doc[self.token_doc[i], loc_flag, k] -= 1
        if loc_flag == LOCAL:
            self.n_loc[self.token_loc[i], k] -= 1
            self.n_loc_total[self.token_loc[i]] -= 1
        else:
            self.n_glob[self.token_glob[i], k] -= 1
            self.n_glob_total[self.token_glob[i]] -= 1
        s = loc_flag if self.split_phi else 0
        self.n_word[s, self.token_word[i], k] -= 1
        self.n_word_total[s, k] -= 1

    def increment(self, i: int, topic: int, locality: int):
        """Assign token i to (topic, locality) and add it back to all counts."""
        self.z[i] = topic
        self.e[i] = locality
        self.n_doc[self.token_doc[i], locality, topic] += 1
        if locality == LOCAL:
            self.n_loc[self.token_loc[i], topic] += 1
            self.n_loc_total[self.token_loc[i]] += 1
        else:
            self.n_glob[self.token_glob[i], topic] += 1
            self.n_glob_total[self.token_glob[i]] += 1
        s = locality if self.split_phi else 0
        self.n_word[s, self.token_word[i], topic] += 1
        self.n_word_total[s, topic] += 1

    def check_consistency(self):
        """Raise AssertionError if any count family disagrees with (z, e)."""
        saved = (
            self.n_doc.copy(),
            self.n_loc.copy(),
            self.n_loc_total.copy(),
            self.n_glob.copy(),
            self.n_glob_total.copy(),
            self.n_word.copy(),
            self.n_word_total.copy(),
        )
        self._count_from_assignments()
        rebuilt = (
            self.n_doc,
            self.n_loc,
            self.n_loc_total,
            self.n_glob,
            self.n_glob_total,
            self.n_word,
            self.n_word_total,
        )
        for a, b in zip(saved, rebuilt):
            assert np.array_equal(a, b), "count matrices inconsistent with assignments"
        (
            self.n_doc,
            self.n_loc,
            self.n_loc_total,
            self.n_glob,
            self.n_glob_total,
            self.n_word,
            self.n_word_total,
        ) = saved


def init_state(corpus: Corpus, hp: Hyperparameters) -> LgldaState:
    """Assign (z, e) uniformly at random per token and build all counts."""
    if corpus.num_documents == 0:
        raise ValueError("cannot initialize on an empty corpus")
    rng = np.random.default_rng(hp.seed)
    return LgldaState(corpus, hp, rng)


def gibbs_conditional(state: LgldaState, i: int) -> np.ndarray:
    """Unnormalized weights over (locality, topic) for token i, length 2K.

    Entries [0, K) are the local block, [K, 2K) the global block.  The
    token's own assignment must already have been removed from the counts
    (call ``state.decrement(i)`` first).  Always computed on the reference
    Python kernel path, whatever backend the sweeps use.
    """
    hp = state.hp
    w = state.token_word[i]
    num_words = state.n_word.shape[1]
    w_beta = num_words * hp.beta
    wf_local = (state.n_word[0, w] + hp.beta) / (state.n_word_total[0] + w_beta)
    if state.split_phi:
        wf_global = (state.n_word[1, w] + hp.beta) / (state.n_word_total[1] + w_beta)
    else:
        wf_global = wf_local
    return _sampler_py.lglda_token_weights(
        state.n_doc[state.token_doc[i]],
        state.n_loc[state.token_loc[i]],
        state.n_loc_total[state.token_loc[i]],
        state.n_glob[state.token_glob[i]],
        state.n_glob_total[state.token_glob[i]],
        wf_local,
        wf_global,
        hp.alpha_local,
        hp.alpha_global,
        hp.gamma_local,
        hp.gamma_global,
        hp.lambda_local,
        hp.lambda_global,
    )


def sweep(state: LgldaState) -> LgldaState:
    """Resample every token once, in document order; mutates ``state``."""
    uniforms = state.rng.random(state.num_tokens)
    hp = state.hp
    backend.kernels().lglda_sweep(
        state.token_word,
        state.token_doc,
        state.token_loc,
        state.token_glob,
        state.z,
        state.e,
        state.n_doc,
        state.n_loc,
        state.n_loc_total,
        state.n_glob,
        state.n_glob_total,
        state.n_word,
        state.n_word_total,
        state.split_phi,
        hp.alpha_local,
        hp.alpha_global,
        hp.beta,
        hp.gamma_local,
        hp.gamma_global,
        hp.lambda_local,
        hp.lambda_global,
        uniforms,
    )
    return state


def _estimate_arrays(state: LgldaState):
    hp = state.hp
    k = hp.num_topics
    theta_local = (state.n_loc + hp.alpha_local) / (
        state.n_loc_total[:, None] + k * hp.alpha_local
    )
    glob_counts = state.n_glob.sum(axis=0).astype(np.float64)
    theta_global = (glob_counts + hp.alpha_global) / (
        glob_counts.sum() + k * hp.alpha_global
    )
    word_counts = state.n_word.sum(axis=0)  # (W, K)
    totals = state.n_word_total.sum(axis=0)  # (K,)
    num_words = word_counts.shape[0]
    phi = ((word_counts + hp.beta) / (totals + num_words * hp.beta)).T
    if state.split_phi:
        phi_local = ((state.n_word[0] + hp.beta) / (state.n_word_total[0] + num_words * hp.beta)).T
        phi_global = ((state.n_word[1] + hp.beta) / (state.n_word_total[1] + num_words * hp.beta)).T
    else:
        phi_local = phi_global = None
    return theta_local, theta_global, phi, phi_local, phi_global


def estimate_from_state(state: LgldaState) -> ModelEstimate:
    """Smoothed point estimates from the current counts."""
    theta_local, theta_global, phi, phi_local, phi_global = _estimate_arrays(state)
    return ModelEstimate(
        theta_local=theta_local,
        theta_global=theta_global,
        phi=phi,
        lam=state.hp.lam,
        location_names=list(state.corpus.location_names),
        vocab_sha256=state.corpus.vocabulary.sha256(),
        hp=state.hp,
        phi_local=phi_local,
        phi_global=phi_global,
    )


def train(corpus: Corpus, hp: Hyperparameters):
    """Run the full sampler and return (final state, point estimate).

    With ``hp.average_last`` > 1 the returned estimate is the running mean
    of the estimates after each of the last that-many sweeps; the default
    uses the final sweep's counts only.
    """
    state = init_state(corpus, hp)
    n_avg = min(hp.average_last, hp.iterations)
    first_kept = hp.iterations - n_avg
    acc = None
    for it in range(hp.iterations):
        sweep(state)
        if n_avg > 1 and it >= first_kept:
            arrays = _estimate_arrays(state)
            if acc is None:
                acc = [a.copy() if a is not None else None for a in arrays]
            else:
                for slot, a in zip(acc, arrays):
                    if slot is not None:
                        slot += a
    if n_avg > 1:
        averaged = [(a / n_avg if a is not None else None) for a in acc]
        theta_local, theta_global, phi, phi_local, phi_global = averaged
        estimate = ModelEstimate(
            theta_local=theta_local,
            theta_global=theta_global,
            phi=phi,
            lam=hp.lam,
            location_names=list(corpus.location_names),
            vocab_sha256=corpus.vocabulary.sha256(),
            hp=hp,
            phi_local=phi_local,
            phi_global=phi_global,
        )
    else:
        estimate = estimate_from_state(state)
    return state, estimate


def location_topics(estimate: ModelEstimate, location: int) -> np.ndarray:
    """Per-location topic distribution (the smoothed local-count estimate)."""
    if not 0 <= location < estimate.num_locations:
        raise ValueError(f"unknown location id {location}")
    return estimate.theta_local[location]


def _locality_masses(estimate: ModelEstimate, location: int, word_ids) -> tuple:
    lam_local = estimate.lam / (estimate.lam + 1.0)
    lam_global = 1.0 / (estimate.lam + 1.0)
    phi_l = estimate.phi_local if estimate.phi_local is not None else estimate.phi
    phi_g = estimate.phi_global if estimate.phi_global is not None else estimate.phi
    local_mass = lam_local * (estimate.theta_local[location] @ phi_l[:, word_ids])
    global_mass = lam_global * (estimate.theta_global @ phi_g[:, word_ids])
    return local_mass, global_mass


def locality_score(estimate: ModelEstimate, document: Document) -> float:
    """Ratio of a document's local to global generation probability mass.

    Per word the posterior locality marginal is computed from the mixture
    weights lambda_kappa * theta_kappa[k] * phi[k][w]; the score is the sum
    of local marginals over the sum of global marginals, so values above 1
    mean the document leans local.
    """
    local_mass, global_mass = _locality_masses(
        estimate, document.location_id, document.tokens
    )
    total = local_mass + global_mass
    p_local = local_mass / total
    p_global = global_mass / total
    denom = float(p_global.sum())
    if denom == 0.0:
        raise ZeroDivisionError("document has zero global generation probability")
    return float(p_local.sum()) / denom


def rank_documents_by_locality(estimate: ModelEstimate, corpus) -> list:
    """(doc_id, location_name, score) for every document, best-scoring first.

    Ties break on location name then doc id so the ranking is reproducible.
    An empty corpus yields an empty list.
    """
    rows = []
    for doc in corpus.documents:
        rows.append(
            (
                doc.doc_id,
                corpus.location_names[doc.location_id],
                locality_score(estimate, doc),
            )
        )
    rows.sort(key=lambda r: (-r[2], r[1], r[0]))
    return rows


def concat_distribution(theta_local_row, theta_global, evidence_local, evidence_global, lam: float) -> np.ndarray:
    """Concatenated local+global topic distribution for one word, length 2K.

    ``evidence_local``/``evidence_global`` are the per-word locality
    evidence terms p(e=local|w) and p(e=global|w); the result is
    renormalized to sum to one.
    """
    if lam <= 0:
        raise ValueError("lam must be > 0")
    theta_local_row = np.asarray(theta_local_row, dtype=np.float64)
    theta_global = np.asarray(theta_global, dtype=np.float64)
    out = np.concatenate(
        [
            (lam / (lam + 1.0)) * theta_local_row * evidence_local,
            (1.0 / (lam + 1.0)) * theta_global * evidence_global,
        ]
    )
    total = out.sum()
    if total <= 0:
        raise ValueError("concatenated distribution has zero mass")
    return out / total
