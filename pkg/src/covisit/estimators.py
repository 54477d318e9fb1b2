"""scikit-learn style wrappers so the pipeline composes with ``Pipeline``,
``clone`` and ``get_params``/``set_params``.

    >>> from sklearn.pipeline import make_pipeline
    >>> pipe = make_pipeline(VisitLogBuilder(30, 30, scale=10),
    ...                      WindowTransactions(delta_t=3),
    ...                      FPGrowth(min_sup=0.01))
"""

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from ._validation import check_day_range, check_min_sup, check_positive_int, check_records
from .hypergraph import from_patterns
from .ingest import GridSpec, VisitLog, build_visit_log
from .mining import MiningParams, fp_growth, maximal_filter
from .transactions import build_transactions, dataset_stats


class VisitLogBuilder(TransformerMixin, BaseEstimator):
    """Raw ``uid,d,t,x,y`` rows -> :class:`VisitLog` on the aggregated grid.

    ``days=None`` infers ``[0, max day + 1)`` from the data seen in ``fit``.
    """

    def __init__(self, grid_width=200, grid_height=200, scale=10, days=None):
        self.grid_width = grid_width
        self.grid_height = grid_height
        self.scale = scale
        self.days = days

    def fit(self, X, y=None):
        self.grid_ = GridSpec(self.grid_width, self.grid_height, self.scale)
        X = check_records(X, self.grid_)
        if self.days is not None:
            self.days_ = check_day_range(self.days)
        elif X.shape[0]:
            self.days_ = (0, int(X[:, 1].max()) + 1)
        else:
            raise ValueError("cannot infer the day range from empty records; pass days=")
        return self

    def transform(self, X):
        check_is_fitted(self, "grid_")
        return build_visit_log(X, self.grid_, self.days_)


class WindowTransactions(TransformerMixin, BaseEstimator):
    """:class:`VisitLog` -> :class:`TransactionDataset` with windows of ``delta_t`` days."""

    def __init__(self, delta_t=1):
        self.delta_t = delta_t

    def fit(self, X, y=None):
        check_positive_int(self.delta_t, "delta_t")
        if not isinstance(X, VisitLog):
            raise TypeError(f"expected a VisitLog, got {type(X).__name__}")
        if self.delta_t > X.horizon:
            raise ValueError(f"delta_t={self.delta_t} exceeds the {X.horizon}-day horizon")
        self.horizon_ = X.horizon
        return self

    def transform(self, X):
        check_is_fitted(self, "horizon_")
        return build_transactions(X, self.delta_t)


class FPGrowth(BaseEstimator):
    """Frequent itemsets of a transaction bag; results in ``patterns_``."""

    def __init__(self, min_sup=0.005, min_size=2, maximal=False, n_jobs=1):
        self.min_sup = min_sup
        self.min_size = min_size
        self.maximal = maximal
        self.n_jobs = n_jobs

    def fit(self, X, y=None):
        check_min_sup(self.min_sup)
        params = MiningParams(self.min_sup, self.min_size)
        patterns = fp_growth(X, params, n_jobs=self.n_jobs)
        if self.maximal:
            patterns = maximal_filter(patterns)
        self.patterns_ = patterns
        self.n_transactions_ = patterns.n_transactions
        self.threshold_ = params.threshold(patterns.n_transactions)
        return self


class CoVisitationHypergraph(BaseEstimator):
    """End-to-end estimator: trajectories -> co-visitation hypergraph.

    ``fit`` accepts raw records (anything :func:`check_records` takes) or
    a prepared :class:`VisitLog`. Fitted attributes: ``hypergraph_``,
    ``patterns_``, ``transaction_stats_``, ``degrees_``.
    """

    def __init__(
        self,
        grid_width=200,
        grid_height=200,
        scale=10,
        delta_t=1,
        min_sup=0.005,
        min_size=2,
        maximal=False,
        days=None,
        n_jobs=1,
    ):
        self.grid_width = grid_width
        self.grid_height = grid_height
        self.scale = scale
        self.delta_t = delta_t
        self.min_sup = min_sup
        self.min_size = min_size
        self.maximal = maximal
        self.days = days
        self.n_jobs = n_jobs

    def fit(self, X, y=None):
        if isinstance(X, VisitLog):
            log = X if self.days is None else X.slice(*self.days)
        else:
            log = VisitLogBuilder(self.grid_width, self.grid_height, self.scale, self.days).fit_transform(X)
        dataset = WindowTransactions(self.delta_t).fit_transform(log)
        miner = FPGrowth(self.min_sup, self.min_size, self.maximal, self.n_jobs).fit(dataset)
        self.grid_ = log.grid
        self.transaction_stats_ = dataset_stats(dataset)
        self.patterns_ = miner.patterns_
        self.hypergraph_ = from_patterns(miner.patterns_, log.grid)
        self.degrees_ = self.hypergraph_.degrees()
        return self

    def transform(self, X):
        """Hyperedge containment matrix: ``out[j, k]`` is True when transaction
        ``j`` of ``X`` (a :class:`TransactionDataset` or iterable of sets)
        holds every location of hyperedge ``k``."""
        check_is_fitted(self, "hypergraph_")
        rows = list(X)
        edges = [frozenset(e.items) for e in self.hypergraph_.edges]
        out = np.zeros((len(rows), len(edges)), dtype=bool)
        for j, t in enumerate(rows):
            t = frozenset(t)
            for k, e in enumerate(edges):
                out[j, k] = e <= t
        return out
