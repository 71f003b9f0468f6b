"""Exact search for B*_h[g] sets: R_h(g,n), C_h(g,n) and shortest Sidon sets."""

from sidonlab.search.engine import (
    EXACT,
    LOWER_BOUND,
    ORACLE_CAP,
    DiameterTable,
    SearchConfig,
    SearchResult,
    SearchStats,
    brute_force_oracle,
    clear_cache,
    diameter_table,
    max_bstar_subset,
    max_feasible_size,
    max_modular,
    min_n_for_size,
    min_n_witness,
    modular_size_refuted,
    shortest_sidon,
    sidon_size_refuted,
)

__all__ = [
    "EXACT",
    "LOWER_BOUND",
    "ORACLE_CAP",
    "DiameterTable",
    "SearchConfig",
    "SearchResult",
    "SearchStats",
    "brute_force_oracle",
    "clear_cache",
    "diameter_table",
    "max_bstar_subset",
    "max_feasible_size",
    "max_modular",
    "min_n_for_size",
    "min_n_witness",
    "modular_size_refuted",
    "shortest_sidon",
    "sidon_size_refuted",
]
