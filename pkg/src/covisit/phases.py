"""Paired hypergraphs over two day ranges (e.g. regular vs. emergency days)."""

from dataclasses import dataclass

from .analysis import NoQualifyingEdgesError, hyperedge_size_histogram, max_chebyshev
from .hypergraph import CoDegreeGraph, from_patterns
from .mining import MiningParams, fp_growth, maximal_filter
from .transactions import build_transactions


@dataclass(frozen=True)
class PhaseSpec:
    label: str
    day_range: tuple

    def __post_init__(self):
        lo, hi = self.day_range
        if lo < 0 or lo >= hi:
            raise ValueError(f"phase {self.label!r}: empty or negative day range [{lo}, {hi})")

    @property
    def n_days(self) -> int:
        return self.day_range[1] - self.day_range[0]


def check_phases(phases, delta_ts=()):
    labels = [p.label for p in phases]
    if len(set(labels)) != len(labels):
        raise ValueError(f"phase labels must be distinct, got {labels}")
    ordered = sorted(phases, key=lambda p: p.day_range)
    for a, b in zip(ordered, ordered[1:]):
        if b.day_range[0] < a.day_range[1]:
            raise ValueError(f"phases {a.label!r} and {b.label!r} overlap")
    longest = max(delta_ts, default=1)
    for p in phases:
        if p.n_days < longest:
            raise ValueError(f"phase {p.label!r} spans {p.n_days} days, shorter than delta_t={longest}")


def build_phase(log, phase, delta_t, params, maximal=False, n_jobs=1):
    """Full pipeline on the phase's day slice; supports use that phase's own M."""
    if phase.n_days < delta_t:
        raise ValueError(f"phase {phase.label!r} spans {phase.n_days} days, shorter than delta_t={delta_t}")
    sliced = log.slice(*phase.day_range)
    dataset = build_transactions(sliced, delta_t)
    patterns = fp_growth(dataset, params, n_jobs=n_jobs)
    if maximal:
        patterns = maximal_filter(patterns)
    return from_patterns(patterns, log.grid)


def diff_co_degree(a, b):
    """Pairs present in only one graph, each with its own graph's weight."""
    only_a = {pair: w for pair, w in a.weights.items() if pair not in b.weights}
    only_b = {pair: w for pair, w in b.weights.items() if pair not in a.weights}
    return CoDegreeGraph(only_a), CoDegreeGraph(only_b)


def _phase_summary(hg, min_edge_size):
    try:
        span = max_chebyshev(hg, min_edge_size)
    except NoQualifyingEdgesError:
        span = None
    return {
        "n_transactions": hg.n_transactions,
        "n_edges": hg.n_edges,
        "size_histogram": {str(k): v for k, v in hyperedge_size_histogram(hg).items()},
        "max_chebyshev": span,
    }


def compare_phases(log, phases, delta_ts, min_sups, min_size=2, min_edge_size=3, maximal=False, n_jobs=1):
    """Evaluate every (delta_t, min_sup) cell for both phases and diff their co-degree graphs.

    A phase without qualifying hyperedges reports ``max_chebyshev`` as None.
    """
    first, second = phases
    check_phases(phases, delta_ts)
    cells = []
    for dt in sorted(delta_ts):
        for sup in sorted(min_sups):
            params = MiningParams(sup, min_size)
            graphs = {p.label: build_phase(log, p, dt, params, maximal=maximal, n_jobs=n_jobs) for p in phases}
            co_a = graphs[first.label].co_degree_graph(min_edge_size)
            co_b = graphs[second.label].co_degree_graph(min_edge_size)
            only_a, only_b = diff_co_degree(co_a, co_b)
            cells.append(
                {
                    "delta_t": dt,
                    "min_sup": sup,
                    "phases": {label: _phase_summary(hg, min_edge_size) for label, hg in graphs.items()},
                    "unique_co_degree": {first.label: only_a.to_records(), second.label: only_b.to_records()},
                }
            )
    return {
        "phases": [{"label": p.label, "days": list(p.day_range)} for p in phases],
        "min_size": min_size,
        "min_edge_size": min_edge_size,
        "maximal": maximal,
        "cells": cells,
    }
