"""Co-visitation hypergraphs from individual-level mobility trajectories.

Pipeline: raw pings -> per-day visit sets -> sliding-window transactions
-> frequent itemsets (FP-Growth) -> weighted hypergraph -> metrics.
"""

__version__ = "0.1.0"

from .analysis import (
    CcdfCurve,
    DegreeFit,
    DegreeGrid,
    NoQualifyingEdgesError,
    PowerLawFit,
    chebyshev,
    degree_ccdf,
    degree_heatmap,
    fit_degree_distribution,
    hyperedge_size_histogram,
    max_chebyshev,
    poi_degree_fit,
    power_law_fit,
)
from .estimators import CoVisitationHypergraph, FPGrowth, VisitLogBuilder, WindowTransactions
from .hypergraph import CoDegreeGraph, Hyperedge, Hypergraph, from_patterns, load_hypergraph, save_hypergraph
from .ingest import GridSpec, Location, TrajectoryRecord, VisitLog, aggregate_cell, build_visit_log, parse_records
from .mining import FrequentPattern, MiningParams, PatternSet, brute_force_mine, fp_growth, maximal_filter
from .phases import PhaseSpec, build_phase, compare_phases, diff_co_degree
from .synthetic import PlantedGroup, SynthSpec, generate
from .transactions import TransactionDataset, WindowSpec, build_transactions, dataset_stats, enumerate_windows
