"""Interpoint distance optimization: selection, Frechet distance with shortcuts
and reverse shortest paths in unit-disk graphs."""

from ._core import (
    ConstructionFailure,
    EmptyCollection,
    InvalidInput,
    NoFeasibleValue,
    RankOutOfRange,
    complete_brs,
    count_pairs_at_most,
    dfd1,
    dfd2,
    dfd_decide,
    oracle,
    partial_brs,
    rsp,
    select_distance,
    select_distance_bipartite,
)

__all__ = [
    "ConstructionFailure",
    "EmptyCollection",
    "InvalidInput",
    "NoFeasibleValue",
    "RankOutOfRange",
    "complete_brs",
    "count_pairs_at_most",
    "dfd1",
    "dfd2",
    "dfd_decide",
    "oracle",
    "partial_brs",
    "rsp",
    "select_distance",
    "select_distance_bipartite",
]
