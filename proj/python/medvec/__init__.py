"""Word2vec-style embeddings for medical text and relation evaluation.

Thin bindings over the C++ library::

    import medvec
    medvec.preprocess("raw.txt", "corpus.txt", dict="terms.txt")
    medvec.train("corpus.txt", "model.bin", dim=100, window=5)
    model = medvec.Model.load("model.bin")
    model.distance("aspirin", top=10)
"""

from ._medvec import (
    DEFAULT_TOP,
    ConfigError,
    MedvecError,
    Model,
    NotFoundError,
    evaluate,
    normalize_text,
    preprocess,
    train,
)

__all__ = [
    "DEFAULT_TOP",
    "ConfigError",
    "MedvecError",
    "Model",
    "NotFoundError",
    "evaluate",
    "normalize_text",
    "preprocess",
    "train",
]
