"""Jacobians of genus-2 curves over F_p in Mumford form, reduction of rational classes, embeddings."""

from .embedding import BadEmbeddingReduction, BasePoint, Divisor3, EmbeddingData, Embedder, check_embedding, pair_class
from .mumford import ZERO, JacobianFp, MumfordElement, NotOnJacobian
from .orders import TableMismatch, counted_order, good_order, group_order, j0_order, table_order
from .rational import (
    KERNEL_OF_REDUCTION,
    ReductionFailed,
    canonicalize_q,
    parse_rational,
    point_pair,
    reduce_rational,
)
from .structure import JacobianGroup, NotInGroup, group_structure

__all__ = [
    "BadEmbeddingReduction",
    "BasePoint",
    "Divisor3",
    "EmbeddingData",
    "Embedder",
    "JacobianFp",
    "JacobianGroup",
    "KERNEL_OF_REDUCTION",
    "MumfordElement",
    "NotInGroup",
    "NotOnJacobian",
    "ReductionFailed",
    "TableMismatch",
    "ZERO",
    "canonicalize_q",
    "check_embedding",
    "counted_order",
    "good_order",
    "group_order",
    "group_structure",
    "j0_order",
    "pair_class",
    "parse_rational",
    "point_pair",
    "reduce_rational",
    "table_order",
]
