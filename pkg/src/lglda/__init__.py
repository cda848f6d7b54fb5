"""Local-global geographical topic modeling with collapsed Gibbs sampling."""

from lglda.corpus import (
    Corpus,
    CorpusFormatError,
    Document,
    Vocabulary,
    ingest,
    split,
    write_canonical,
)
from lglda.model import (
    GLOBAL,
    LOCAL,
    Hyperparameters,
    LgldaState,
    ModelEstimate,
    concat_distribution,
    estimate_from_state,
    gibbs_conditional,
    init_state,
    locality_score,
    location_topics,
    rank_documents_by_locality,
    sweep,
    train,
)
from lglda.baselines import (
    BaselineEstimate,
    train_lda,
    train_local_lda,
    train_tfidf_kmeans,
)
from lglda.serialize import load_model, save_model

__version__ = "0.1.0"

__all__ = [
    "Corpus",
    "CorpusFormatError",
    "Document",
    "Vocabulary",
    "ingest",
    "split",
    "write_canonical",
    "GLOBAL",
    "LOCAL",
    "Hyperparameters",
    "LgldaState",
    "ModelEstimate",
    "concat_distribution",
    "estimate_from_state",
    "gibbs_conditional",
    "init_state",
    "locality_score",
    "location_topics",
    "rank_documents_by_locality",
    "sweep",
    "train",
    "BaselineEstimate",
    "train_lda",
    "train_local_lda",
    "train_tfidf_kmeans",
    "load_model",
    "save_model",
    "__version__",
]
