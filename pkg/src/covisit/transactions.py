"""Sliding observation windows and the per-(individual, window) transaction bag."""

from dataclasses import dataclass

import numpy as np

from ._validation import check_positive_int


@dataclass(frozen=True)
class WindowSpec:
    """Observation window of ``delta_t`` days; windows always slide by one day."""

    delta_t: int

    def __post_init__(self):
        check_positive_int(self.delta_t, "delta_t")

    @property
    def stride(self) -> int:
        return 1


def enumerate_windows(n_days, delta_t, start=0):
    """The ``n_days - delta_t + 1`` half-open windows ``[t, t + delta_t)``."""
    check_positive_int(delta_t, "delta_t")
    if delta_t > n_days:
        raise ValueError(f"window length {delta_t} exceeds the {n_days}-day horizon")
    return [(t, t + delta_t) for t in range(start, start + n_days - delta_t + 1)]


class TransactionDataset:
    """The bag of transactions in CSR form.

    Transaction ``j`` is ``items[indptr[j]:indptr[j + 1]]`` (strictly
    ascending location ids), produced by individual ``uids[j]`` in the
    window starting on day ``window_starts[j]``. Ordering is by window
    start, then uid. Duplicate transactions are kept.
    """

    def __init__(self, indptr, items, uids=None, window_starts=None, delta_t=None, days=None, n_individuals=None):
        self.indptr = np.asarray(indptr, dtype=np.int64)
        self.items = np.asarray(items, dtype=np.int64)
        m = self.indptr.size - 1
        self.uids = None if uids is None else np.asarray(uids, dtype=np.int64)
        self.window_starts = None if window_starts is None else np.asarray(window_starts, dtype=np.int64)
        self.delta_t = delta_t
        self.days = days
        self.n_individuals = n_individuals
        if m < 0 or self.indptr[0] != 0 or self.indptr[-1] != self.items.size:
            raise ValueError("inconsistent indptr")
        if m and np.any(np.diff(self.indptr) <= 0):
            raise ValueError("transactions must be non-empty")

    @classmethod
    def from_iterable(cls, transactions):
        """Build from any iterable of integer collections (duplicates within a transaction are merged)."""
        rows = [sorted(set(int(i) for i in t)) for t in transactions]
        rows = [r for r in rows if r]
        indptr = np.zeros(len(rows) + 1, dtype=np.int64)
        indptr[1:] = np.cumsum([len(r) for r in rows])
        items = np.fromiter((i for r in rows for i in r), dtype=np.int64, count=int(indptr[-1]))
        return cls(indptr, items)

    @property
    def n_transactions(self) -> int:
        return self.indptr.size - 1

    def sizes(self):
        return np.diff(self.indptr)

    def __len__(self):
        return self.n_transactions

    def __getitem__(self, j):
        return tuple(self.items[self.indptr[j] : self.indptr[j + 1]].tolist())

    def __iter__(self):
        items = self.items.tolist()
        bounds = self.indptr.tolist()
        for a, b in zip(bounds[:-1], bounds[1:]):
            yield tuple(items[a:b])

    def __repr__(self):
        return f"TransactionDataset(M={self.n_transactions}, delta_t={self.delta_t}, days={self.days})"


def build_transactions(log, spec):
    """One transaction per (window, individual): the union of that
    individual's daily visit sets across the window; empty unions are dropped.
    """
    if isinstance(spec, int):
        spec = WindowSpec(spec)
    lo, hi = log.days
    windows = enumerate_windows(hi - lo, spec.delta_t, start=lo)
    n_cells = log.grid.n_cells

    items_parts, sizes_parts, uid_parts, start_parts = [], [], [], []
    for t, t_end in windows:
        a, b = np.searchsorted(log.day, [t, t_end])
        if a == b:
            continue
        keys = np.unique(log.uid[a:b] * n_cells + log.loc[a:b])
        uid = keys // n_cells
        loc = keys % n_cells
        first = np.flatnonzero(np.r_[True, uid[1:] != uid[:-1]])
        sizes = np.diff(np.r_[first, uid.size])
        items_parts.append(loc)
        sizes_parts.append(sizes)
        uid_parts.append(uid[first])
        start_parts.append(np.full(first.size, t, dtype=np.int64))

    if items_parts:
        items = np.concatenate(items_parts)
        sizes = np.concatenate(sizes_parts)
        uids = np.concatenate(uid_parts)
        starts = np.concatenate(start_parts)
    else:
        items = sizes = uids = starts = np.empty(0, dtype=np.int64)
    indptr = np.zeros(sizes.size + 1, dtype=np.int64)
    np.cumsum(sizes, out=indptr[1:])
    return TransactionDataset(
        indptr,
        items,
        uids=uids,
        window_starts=starts,
        delta_t=spec.delta_t,
        days=log.days,
        n_individuals=log.n_individuals,
    )


def dataset_stats(dataset):
    sizes = dataset.sizes()
    m = dataset.n_transactions
    return {
        "M": m,
        "mean_size": float(sizes.mean()) if m else 0.0,
        "max_size": int(sizes.max()) if m else 0,
        "n_items": int(np.unique(dataset.items).size),
    }


def dump_transactions(dataset, stream):
    """Write one transaction per line as space-separated ascending ids."""
    for t in dataset:
        stream.write(" ".join(map(str, t)))
        stream.write("\n")


def load_transactions(stream):
    return TransactionDataset.from_iterable(
        [int(v) for v in line.split()] for line in stream if line.strip()
    )
