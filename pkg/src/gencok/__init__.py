"""Exact algebra of generalized almost contact, contact metric and coKähler structures on invariant frames."""

from ._backend import NAME as BACKEND
from .catalog import catalog_get, catalog_list
from .exactalg import I, ONE, ZERO, Matrix, Scalar, Subspace
from .frame import FrameContext, GenSection, InvariantForm, courant_bracket, exterior_derivative, pairing
from .structures import (
    BigOperator,
    GenAlmostContact,
    GenContactMetric,
    check_gac,
    classify_contact,
    is_cokahler,
    is_generalized_kahler,
    is_normal,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "I",
    "ONE",
    "ZERO",
    "Matrix",
    "Scalar",
    "Subspace",
    "FrameContext",
    "GenSection",
    "InvariantForm",
    "courant_bracket",
    "exterior_derivative",
    "pairing",
    "BigOperator",
    "GenAlmostContact",
    "GenContactMetric",
    "check_gac",
    "classify_contact",
    "is_cokahler",
    "is_generalized_kahler",
    "is_normal",
    "catalog_get",
    "catalog_list",
]
