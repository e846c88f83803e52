"""Operational transformation workbench for replicated strings."""
from .core import Operation, OutOfRange, apply, apply_sequence, delete, ins, nop, sequences_equivalent
from .transform import (
    CATALOG,
    ITFunction,
    MissingExtension,
    TransformCase,
    case_of,
    ellis_it,
    identity_it,
    imine_it,
    ressel_it,
    suleiman_it,
    sun_it,
    transform_along,
)

__all__ = [
    "CATALOG",
    "ITFunction",
    "MissingExtension",
    "Operation",
    "OutOfRange",
    "TransformCase",
    "apply",
    "apply_sequence",
    "case_of",
    "delete",
    "ellis_it",
    "identity_it",
    "imine_it",
    "ins",
    "nop",
    "ressel_it",
    "sequences_equivalent",
    "suleiman_it",
    "sun_it",
    "transform_along",
]
