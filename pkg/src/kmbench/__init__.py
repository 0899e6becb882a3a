"""Exact computable measures on binary strings, interval codes, and randomness experiments."""
from .coder import CodingError, decode, decode_cond, decode_pair, encode, encode_cond, encode_pair
from .measures import (
    ModelFamily,
    RateFunction,
    bernoulli,
    bernoulli_bayes,
    independent_product,
    interleave,
    markov1,
    mixture,
    noisy_copy,
)

__version__ = "0.1.0"

__all__ = [
    "CodingError",
    "ModelFamily",
    "RateFunction",
    "bernoulli",
    "bernoulli_bayes",
    "decode",
    "decode_cond",
    "decode_pair",
    "encode",
    "encode_cond",
    "encode_pair",
    "independent_product",
    "interleave",
    "markov1",
    "mixture",
    "noisy_copy",
]
