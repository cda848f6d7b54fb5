"""Versioned JSON container for trained model estimates.

One format serves the local-global model and every baseline, tagged by
``kind``.  Floats survive a save/load/save cycle bit-exactly because json
emits shortest round-tripping decimal representations.
"""

from __future__ import annotations

import dataclasses
import json

import numpy as np

from lglda.baselines import BaselineEstimate
from lglda.model import Hyperparameters, ModelEstimate

FORMAT_NAME = "lglda-model-artifact"
FORMAT_VERSION = 1


def _hp_to_dict(hp: Hyperparameters | None):
    return dataclasses.asdict(hp) if hp is not None else None


def _hp_from_dict(d) -> Hyperparameters | None:
    return Hyperparameters(**d) if d is not None else None


def save_model(path, estimate) -> None:
    if isinstance(estimate, ModelEstimate):
        payload = {
            "format": FORMAT_NAME,
            "version": FORMAT_VERSION,
            "kind": estimate.kind,
            "vocab_sha256": estimate.vocab_sha256,
            "location_names": list(estimate.location_names),
            "hyperparameters": _hp_to_dict(estimate.hp),
            "lambda": estimate.lam,
            "location_topics": estimate.theta_local.tolist(),
            "theta_global": estimate.theta_global.tolist(),
            "topic_words": estimate.phi.tolist(),
            "phi_local": estimate.phi_local.tolist() if estimate.phi_local is not None else None,
            "phi_global": estimate.phi_global.tolist() if estimate.phi_global is not None else None,
        }
    elif isinstance(estimate, BaselineEstimate):
        payload = {
            "format": FORMAT_NAME,
            "version": FORMAT_VERSION,
            "kind": estimate.kind,
            "vocab_sha256": estimate.vocab_sha256,
            "location_names": list(estimate.location_names),
            "hyperparameters": _hp_to_dict(estimate.hp),
            "params": estimate.params,
            "location_topics": estimate.location_topics.tolist(),
            "topic_words": estimate.topic_words.tolist(),
        }
    else:
        raise TypeError(f"cannot serialize {type(estimate).__name__}")
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, sort_keys=True, indent=1)
        fh.write("\n")


def load_model(path):
    with open(path, encoding="utf-8") as fh:
        payload = json.load(fh)
    if payload.get("format") != FORMAT_NAME:
        raise ValueError(f"{path}: not a {FORMAT_NAME} file")
    if payload.get("version") != FORMAT_VERSION:
        raise ValueError(f"{path}: unsupported version {payload.get('version')!r}")
    kind = payload["kind"]
    if kind == "lglda":
        opt = lambda key: (
            np.array(payload[key], dtype=np.float64) if payload.get(key) is not None else None
        )
        return ModelEstimate(
            theta_local=np.array(payload["location_topics"], dtype=np.float64),
            theta_global=np.array(payload["theta_global"], dtype=np.float64),
            phi=np.array(payload["topic_words"], dtype=np.float64),
            lam=float(payload["lambda"]),
            location_names=list(payload["location_names"]),
            vocab_sha256=payload["vocab_sha256"],
            hp=_hp_from_dict(payload.get("hyperparameters")),
            phi_local=opt("phi_local"),
            phi_global=opt("phi_global"),
        )
    return BaselineEstimate(
        kind=kind,
        location_topics=np.array(payload["location_topics"], dtype=np.float64),
        topic_words=np.array(payload["topic_words"], dtype=np.float64),
        location_names=list(payload["location_names"]),
        vocab_sha256=payload["vocab_sha256"],
        hp=_hp_from_dict(payload.get("hyperparameters")),
        params=payload.get("params"),
    )
