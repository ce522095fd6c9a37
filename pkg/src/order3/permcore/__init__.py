"""Permutation arithmetic and stabilizer-chain machinery."""

from .perm import (
    DEGREE_CAP,
    DegreeMismatch,
    Permutation,
    commutes,
    compose,
    conjugate,
    inverse,
    perm_order,
    power,
)
from .chain import StabilizerChain, build_chain, verify_chain

__all__ = [
    "DEGREE_CAP",
    "DegreeMismatch",
    "Permutation",
    "StabilizerChain",
    "build_chain",
    "commutes",
    "compose",
    "conjugate",
    "inverse",
    "perm_order",
    "power",
    "verify_chain",
]
