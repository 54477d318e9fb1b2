"""Frequent-itemset mining over transaction bags.

:func:`fp_growth` is the production miner; :func:`brute_force_mine` is a
deliberately naive level-wise enumerator kept as its test oracle.
"""

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

import numpy as np

from . import _fptree
from ._validation import check_min_sup, check_positive_int, support_threshold
from .transactions import TransactionDataset


@dataclass(frozen=True)
class MiningParams:
    min_sup: float
    min_size: int = 2

    def __post_init__(self):
        check_min_sup(self.min_sup)
        check_positive_int(self.min_size, "min_size")

    def threshold(self, n_transactions):
        return support_threshold(self.min_sup, n_transactions)


@dataclass(frozen=True, order=True)
class FrequentPattern:
    items: tuple
    count: int
    n_transactions: int

    @property
    def size(self) -> int:
        return len(self.items)

    @property
    def support(self) -> float:
        return self.count / self.n_transactions

    @property
    def support_fraction(self) -> Fraction:
        return Fraction(self.count, self.n_transactions)


def _canonical_key(items):
    return (len(items), items)


class PatternSet:
    """Frequent patterns in canonical order (size, then lexicographic)."""

    def __init__(self, patterns, params, n_transactions):
        patterns = sorted(patterns, key=lambda p: _canonical_key(p.items))
        for a, b in zip(patterns, patterns[1:]):
            if a.items == b.items:
                raise ValueError(f"duplicate itemset {a.items}")
        self.patterns = tuple(patterns)
        self.params = params
        self.n_transactions = n_transactions

    def __len__(self):
        return len(self.patterns)

    def __iter__(self):
        return iter(self.patterns)

    def __getitem__(self, i):
        return self.patterns[i]

    def __contains__(self, items):
        return tuple(sorted(items)) in self.as_dict()

    def __eq__(self, other):
        if not isinstance(other, PatternSet):
            return NotImplemented
        return self.n_transactions == other.n_transactions and self.patterns == other.patterns

    def as_dict(self):
        """``{itemset: count}``."""
        return {p.items: p.count for p in self.patterns}

    def itemsets(self):
        return [p.items for p in self.patterns]

    def __repr__(self):
        return f"PatternSet({len(self)} patterns, M={self.n_transactions}, params={self.params})"


def _as_dataset(transactions):
    if isinstance(transactions, TransactionDataset):
        return transactions, None
    rows = [sorted(set(t)) for t in transactions]
    rows = [r for r in rows if r]
    vocab = sorted({i for r in rows for i in r})
    code = {item: k for k, item in enumerate(vocab)}
    ds = TransactionDataset.from_iterable([code[i] for i in r] for r in rows)
    return ds, vocab


def _check_params(params, min_sup, min_size):
    if params is None:
        params = MiningParams(min_sup, min_size)
    return params


def fp_growth(transactions, params=None, *, min_sup=None, min_size=2, n_jobs=1):
    """Mine every itemset of size >= ``min_size`` with count >= ceil(min_sup * M).

    ``transactions`` is a :class:`TransactionDataset` or any iterable of
    item collections (items must be hashable and mutually comparable).
    Output does not depend on transaction order or ``n_jobs``.
    """
    params = _check_params(params, min_sup, min_size)
    ds, vocab = _as_dataset(transactions)
    m = ds.n_transactions
    if m == 0:
        raise ValueError("cannot mine an empty transaction dataset: support is undefined")
    threshold = params.threshold(m)

    codes, counts = np.unique(ds.items, return_counts=True)
    frequent = counts >= threshold
    f_codes, f_counts = codes[frequent], counts[frequent]
    # descending support, ties by ascending id
    by_rank = np.lexsort((f_codes, -f_counts))
    rank_codes = f_codes[by_rank]
    n_ranks = rank_codes.size
    if n_ranks == 0:
        return PatternSet([], params, m)

    rank_of = np.full(codes.size, -1, dtype=np.int64)
    rank_of[np.flatnonzero(frequent)[by_rank]] = np.arange(n_ranks)
    occ_rank = rank_of[np.searchsorted(codes, ds.items)]
    occ_row = np.repeat(np.arange(m), ds.sizes())
    keep = occ_rank >= 0
    occ_rank, occ_row = occ_rank[keep], occ_row[keep]
    order = np.lexsort((occ_rank, occ_row))
    occ_rank, occ_row = occ_rank[order], occ_row[order]

    rows, row_start, row_len = np.unique(occ_row, return_index=True, return_counts=True)
    paths = np.full((rows.size, int(row_len.max())), _fptree.PAD, dtype=np.int32)
    col = np.arange(occ_row.size) - np.repeat(row_start, row_len)
    paths[np.repeat(np.arange(rows.size), row_len), col] = occ_rank
    del occ_rank, occ_row, col, order, keep

    found = _fptree.mine(paths, threshold, n_ranks, n_jobs=n_jobs)

    patterns = []
    rank_codes = rank_codes.tolist()
    for ranks, count in found:
        if len(ranks) < params.min_size:
            continue
        items = sorted(rank_codes[r] for r in ranks)
        if vocab is not None:
            items = [vocab[i] for i in items]
        patterns.append(FrequentPattern(tuple(items), int(count), m))
    return PatternSet(patterns, params, m)


def brute_force_mine(transactions, params=None, *, min_sup=None, min_size=2, max_items=20):
    """Level-wise enumeration with direct subset counting; the FP-Growth oracle."""
    params = _check_params(params, min_sup, min_size)
    rows = [frozenset(t) for t in transactions]
    rows = [r for r in rows if r]
    m = len(rows)
    if m == 0:
        raise ValueError("cannot mine an empty transaction dataset: support is undefined")
    universe = sorted(set().union(*rows))
    if len(universe) > max_items:
        raise ValueError(f"{len(universe)} distinct items exceeds the enumeration guard of {max_items}")
    threshold = params.threshold(m)

    def count(itemset):
        return sum(1 for r in rows if itemset <= r)

    found = {}
    level = []
    for item in universe:
        c = count(frozenset([item]))
        if c >= threshold:
            found[(item,)] = c
            level.append((item,))
    k = 2
    while level:
        frequent_prev = set(level)
        candidates = set()
        for a, b in combinations(level, 2):
            if a[:-1] == b[:-1]:
                cand = tuple(sorted(set(a) | set(b)))
                if all(sub in frequent_prev for sub in combinations(cand, k - 1)):
                    candidates.add(cand)
        level = []
        for cand in sorted(candidates):
            c = count(frozenset(cand))
            if c >= threshold:
                found[cand] = c
                level.append(cand)
        k += 1

    patterns = [
        FrequentPattern(items, c, m) for items, c in found.items() if len(items) >= params.min_size
    ]
    return PatternSet(patterns, params, m)


def maximal_filter(pattern_set):
    """Keep only patterns with no proper superset in ``pattern_set``."""
    by_item = {}
    sets = [frozenset(p.items) for p in pattern_set]
    for idx, s in enumerate(sets):
        for item in s:
            by_item.setdefault(item, []).append(idx)
    kept = []
    for idx, (p, s) in enumerate(zip(pattern_set, sets)):
        pool = min((by_item[i] for i in s), key=len) if s else []
        if not any(len(sets[j]) > len(s) and s < sets[j] for j in pool):
            kept.append(p)
    return PatternSet(kept, pattern_set.params, pattern_set.n_transactions)


def format_pattern(p):
    return f"{p.size}\t{p.support!r}\t{p.count}\t{' '.join(map(str, p.items))}"


def parse_pattern_line(line):
    size, support, count, items = line.rstrip("\n").split("\t")
    items = tuple(int(v) for v in items.split())
    if len(items) != int(size):
        raise ValueError(f"size field {size} disagrees with {len(items)} items")
    return items, float(support), int(count)


def dump_patterns(pattern_set, stream):
    """``size<TAB>support<TAB>count<TAB>ids`` per pattern, canonical order."""
    for p in pattern_set:
        stream.write(format_pattern(p))
        stream.write("\n")
