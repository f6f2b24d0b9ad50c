"""Central configuration: every constant left symbolic by the guarantees lives here.

All randomized procedures are reproducible from (inputs, seed) under a fixed
config; the CLI can load overrides from a JSON file via ``--config``.
"""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, fields


@dataclass(frozen=True)
class Config:
    # Exact Cheeger computation refuses above this vertex count (2^n subsets).
    exact_cheeger_max_n: int = 24
    # Below this order the expander construction uses the explicit circulant
    # family; at or above it, the double-cover / surgery route.
    small_case_cutoff: int = 12
    # Spectral certificate for the random 3-regular base: every nontrivial
    # adjacency eigenvalue must satisfy |lambda| <= lambda_target - cert_margin.
    lambda_target: float = 2.85
    cert_margin: float = 1e-4
    base_retry_budget: int = 200
    # Eigensolver: dense decomposition up to this order, power iteration above.
    dense_eig_max_n: int = 512
    eig_tol: float = 1e-6

    # Routing: penalty exponent, rerouting sweeps, and target constants in
    # max_edge_congestion <= c_cong / alpha * log2(k) (path length likewise).
    beta: float = 1.0
    reroute_sweeps: int = 20
    c_cong: float = 8.0
    c_len: float = 8.0

    # Embedding depth constant in depth <= z * (1 + (n + m)/k) * log2(k).
    z: float = 64.0
    # Later matchings see congestion accumulated by earlier ones (the
    # alternative routes every matching against an empty profile).
    accumulate_congestion: bool = True

    # Brute-force solver: refuse when the assignment-space product exceeds
    # this (None disables the guard and relies on backtracking pruning).
    solver_budget: int | None = 10**8
    # Explicit materialization of a compiled relation is refused above this
    # many candidate pairs.
    materialize_budget: int = 10**6


DEFAULT_CONFIG = Config()


def load_config(path: str) -> Config:
    """Read a JSON object of overrides; unknown keys are rejected."""
    with open(path) as fh:
        raw = json.load(fh)
    known = {f.name for f in fields(Config)}
    bad = set(raw) - known
    if bad:
        raise ValueError(f"unknown config keys: {sorted(bad)}")
    return Config(**raw)


def config_to_dict(cfg: Config) -> dict:
    return asdict(cfg)
