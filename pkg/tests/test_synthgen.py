import numpy as np
import pytest

from lglda.corpus import ingest, write_canonical
from lglda.synthgen import (
    GroundTruth,
    SyntheticSpec,
    default_spec,
    generate,
    make_spec,
    read_ground_truth,
    write_ground_truth,
)


def small_spec(seed=0, **overrides):
    kwargs = dict(
        seed=seed,
        num_topics=3,
        vocab_size=30,
        num_locations=3,
        docs_per_location=6,
        tokens_per_doc=5,
    )
    kwargs.update(overrides)
    return make_spec(**kwargs)


class TestSpecValidation:
    def test_default_spec_satisfies_invariants(self):
        spec = default_spec(11)
        assert spec.num_topics == 6
        assert spec.vocab_size == 600
        assert spec.num_locations == 12
        assert spec.docs_per_location == 80
        assert spec.tokens_per_doc == 12
        assert np.allclose(spec.theta_local.sum(axis=1), 1.0, atol=1e-9)
        assert spec.theta_global.sum() == pytest.approx(1.0, abs=1e-9)
        assert np.allclose(spec.phi.sum(axis=1), 1.0, atol=1e-9)
        assert spec.doc_locality.shape == (960,)

    def test_same_seed_same_spec(self):
        a, b = default_spec(5), default_spec(5)
        assert np.array_equal(a.theta_local, b.theta_local)
        assert np.array_equal(a.phi, b.phi)
        assert np.array_equal(a.doc_locality, b.doc_locality)

    def test_bad_shapes_rejected(self):
        spec = small_spec()
        with pytest.raises(ValueError):
            SyntheticSpec(
                num_topics=spec.num_topics,
                vocab_size=spec.vocab_size,
                num_locations=spec.num_locations,
                docs_per_location=spec.docs_per_location,
                tokens_per_doc=spec.tokens_per_doc,
                lam=spec.lam,
                seed=spec.seed,
                theta_local=spec.theta_local[:-1],
                theta_global=spec.theta_global,
                phi=spec.phi,
                doc_locality=spec.doc_locality,
            )

    def test_unnormalized_rows_rejected(self):
        spec = small_spec()
        broken = spec.theta_local.copy()
        broken[0, 0] += 0.25
        with pytest.raises(ValueError, match="sum to 1"):
            SyntheticSpec(
                num_topics=spec.num_topics,
                vocab_size=spec.vocab_size,
                num_locations=spec.num_locations,
                docs_per_location=spec.docs_per_location,
                tokens_per_doc=spec.tokens_per_doc,
                lam=spec.lam,
                seed=spec.seed,
                theta_local=broken,
                theta_global=spec.theta_global,
                phi=spec.phi,
                doc_locality=spec.doc_locality,
            )


class TestGenerate:
    def test_all_local_when_rate_is_one(self):
        spec = small_spec(doc_locality_rate=1.0)
        _, truth = generate(spec)
        assert truth.is_local.all()

    def test_all_global_when_rate_is_zero(self):
        spec = small_spec(doc_locality_rate=0.0)
        _, truth = generate(spec)
        assert not truth.is_local.any()

    def test_one_hot_phi_is_invertible(self):
        spec = small_spec()
        phi = np.zeros((spec.num_topics, spec.vocab_size))
        for k in range(spec.num_topics):
            phi[k, k] = 1.0
        spec.phi = phi
        corpus, truth = generate(spec)
        for d, doc in enumerate(corpus.documents):
            assert np.array_equal(doc.tokens, truth.z[d])

    def test_reproducible_and_file_stable(self, tmp_path):
        spec = small_spec(seed=9)
        c1, t1 = generate(spec)
        c2, t2 = generate(spec)
        assert c1 == c2
        assert np.array_equal(t1.z, t2.z)
        p1, p2 = tmp_path / "a.txt", tmp_path / "b.txt"
        write_canonical(c1, p1)
        write_canonical(c2, p2)
        assert p1.read_bytes() == p2.read_bytes()

    def test_corpus_structure(self):
        spec = small_spec()
        corpus, truth = generate(spec)
        assert corpus.num_documents == spec.num_documents
        assert corpus.num_tokens == spec.num_documents * spec.tokens_per_doc
        assert corpus.num_locations == spec.num_locations
        assert truth.z.shape == (spec.num_documents, spec.tokens_per_doc)

    def test_empirical_word_frequencies_match_phi(self):
        # one topic, one big pile of draws: multinomial 3-sigma bound per word
        spec = small_spec(
            seed=3,
            num_topics=2,
            vocab_size=12,
            num_locations=2,
            docs_per_location=100,
            tokens_per_doc=20,
            doc_locality_rate=1.0,
        )
        spec.theta_local = np.tile([1.0, 0.0], (2, 1))
        corpus, truth = generate(spec)
        n = corpus.num_tokens
        counts = np.zeros(spec.vocab_size)
        for doc in corpus.documents:
            counts += np.bincount(doc.tokens, minlength=spec.vocab_size)
        freq = counts / n
        p = spec.phi[0]
        sigma = np.sqrt(p * (1 - p) / n)
        assert np.all(np.abs(freq - p) <= 3.5 * sigma + 1e-12)


class TestGroundTruthFile:
    def test_round_trip(self, tmp_path):
        spec = small_spec(seed=2)
        _, truth = generate(spec)
        path = tmp_path / "truth.tsv"
        write_ground_truth(truth, path)
        again = read_ground_truth(path)
        assert np.array_equal(truth.z, again.z)
        assert np.array_equal(truth.is_local, again.is_local)

    def test_line_format(self, tmp_path):
        truth = GroundTruth(
            z=np.array([[1, 0]]), is_local=np.array([[True, False]])
        )
        path = tmp_path / "truth.tsv"
        write_ground_truth(truth, path)
        assert path.read_text() == "0\t0\t1\tl\n0\t1\t0\tg\n"


def test_generated_corpus_survives_ingest_losslessly(tmp_path):
    spec = small_spec(seed=6)  # tokens_per_doc=5 >= 3
    corpus, _ = generate(spec)
    path = tmp_path / "corpus.txt"
    write_canonical(corpus, path)
    ing = ingest(path, min_tokens=3)
    assert ing.num_documents == corpus.num_documents
    assert ing.num_tokens == corpus.num_tokens
    assert ing.num_locations == corpus.num_locations
