"""Arithmetization-oriented hashes over the BN254 scalar field."""
from .field import BN254, BN254_SCALAR_MODULUS, FieldElement, PrimeField
from .params import HashParams, load, load_default, toy_params, validate

__all__ = [
    "BN254",
    "BN254_SCALAR_MODULUS",
    "FieldElement",
    "HashParams",
    "PrimeField",
    "load",
    "load_default",
    "toy_params",
    "validate",
]

__version__ = "0.1.0"
