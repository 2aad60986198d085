"""Size guards for the exhaustive oracles and searches.

All guards are plain configuration values; every function that uses one
accepts an override.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Guards:
    oracle_elements: int = 12        # brute-force dimension / se(P)
    treedec_elements: int = 20       # exact elimination-order search
    semigroup_table: int = 4096      # max |Lambda| for an explicit product table
    split_inner_nodes: int = 64      # colcombet_split search
    split_families: int = 20000      # absorbing-set families tried per order
    pad_semigroup: int = 16          # pad split order up to |Lambda| when |Lambda| <= this


DEFAULT_GUARDS = Guards()
