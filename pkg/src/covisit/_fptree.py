"""Array-backed FP-tree and the recursive FP-Growth miner.

Items are dense ranks ``0..n-1`` (0 = most frequent). Every path from the
root lists ranks in strictly ascending order, so a conditional pattern
base can be re-inserted without reordering. A tree is three parallel
arrays (``item``, ``count``, ``parent``) plus ``depth``; it is built from
a padded path matrix by sorting the rows and taking longest common
prefixes, which keeps construction vectorized.
"""

from concurrent.futures import ProcessPoolExecutor
from itertools import combinations

import numpy as np

PAD = -1


def _row_keys(paths):
    # Big-endian unsigned encoding so that memcmp order == lexicographic
    # order of the rank sequences, with padding sorting first.
    width = ">u2" if paths.max(initial=0) < 0xFFFE else ">u4"
    enc = np.ascontiguousarray((paths + 1).astype(width))
    return enc.view(np.dtype((np.void, enc.dtype.itemsize * enc.shape[1]))).ravel()


class FPTree:
    __slots__ = ("item", "count", "parent", "depth")

    def __init__(self, item, count, parent, depth):
        self.item = item
        self.count = count
        self.parent = parent
        self.depth = depth

    @classmethod
    def from_paths(cls, paths, weights=None):
        """Build from a 2-D rank matrix (rows ascending, right-padded with -1)."""
        paths = np.asarray(paths)
        if paths.ndim != 2 or paths.shape[0] == 0 or paths.shape[1] == 0:
            empty = np.empty(0, dtype=np.int64)
            return cls(empty, empty, empty, empty)
        keys = _row_keys(paths)
        if weights is None:
            _, first, w = np.unique(keys, return_index=True, return_counts=True)
        else:
            _, first, inverse = np.unique(keys, return_index=True, return_inverse=True)
            w = np.bincount(inverse.ravel(), weights=np.asarray(weights, dtype=np.float64)).astype(np.int64)
        rows = paths[first].astype(np.int32)
        del keys, first
        valid = rows != PAD

        lcp = np.zeros(rows.shape[0], dtype=np.int64)
        if rows.shape[0] > 1:
            same = rows[1:] == rows[:-1]
            same &= valid[1:]
            # unique sorted rows never match on every column, so argmin finds the first mismatch
            lcp[1:] = np.argmin(same, axis=1)
            del same
        cols = np.arange(rows.shape[1])
        new = valid & (cols[None, :] >= lcp[:, None])

        n_nodes = int(new.sum())
        id_type = np.int32 if n_nodes < np.iinfo(np.int32).max else np.int64
        node_of = np.full(rows.shape, -1, dtype=id_type)
        node_of[new] = np.arange(n_nodes, dtype=id_type)
        np.maximum.accumulate(node_of, axis=0, out=node_of)

        r, c = np.nonzero(new)
        del new
        item = rows[r, c].astype(np.int64)
        parent = np.where(c > 0, node_of[r, np.maximum(c - 1, 0)], -1).astype(np.int64)
        depth = c.astype(np.int64) + 1
        del r, c

        count = np.bincount(
            node_of[valid], weights=np.broadcast_to(w[:, None], rows.shape)[valid].astype(np.float64), minlength=n_nodes
        ).astype(np.int64)
        return cls(item, count, parent, depth)

    @property
    def n_nodes(self) -> int:
        return int(self.item.size)

    def is_chain(self) -> bool:
        return self.n_nodes > 0 and self.n_nodes == int(self.depth.max())

    def conditional_base(self, nodes):
        """Prefix paths above ``nodes`` as a padded rank matrix plus weights."""
        weights = self.count[nodes]
        width = int(self.depth[nodes].max()) - 1
        paths = np.full((nodes.size, max(width, 0)), PAD, dtype=np.int64)
        cur = self.parent[nodes]
        live = np.flatnonzero(cur >= 0)
        while live.size:
            at = cur[live]
            paths[live, self.depth[at] - 1] = self.item[at]
            cur[live] = self.parent[at]
            live = live[cur[live] >= 0]
        return paths, weights


def restrict_paths(paths, weights, keep):
    """Drop ranks not in ``keep`` (boolean per rank), compact rows, drop empty rows."""
    if paths.size == 0:
        return paths[:0], weights[:0]
    big = np.iinfo(np.int64).max
    mask = paths != PAD
    mask[mask] = keep[paths[mask]]
    out = np.where(mask, paths, big)
    out.sort(axis=1)
    width = int(mask.sum(axis=1).max(initial=0))
    out = out[:, :width]
    out[out == big] = PAD
    nonempty = out[:, 0] != PAD if width else np.zeros(out.shape[0], dtype=bool)
    return out[nonempty], weights[nonempty]


def _mine_tree(tree, suffix, threshold, n_ranks, out):
    if tree.n_nodes == 0:
        return
    if tree.is_chain():
        order = np.argsort(tree.depth)
        chain = list(zip(tree.item[order].tolist(), tree.count[order].tolist()))
        for k in range(1, len(chain) + 1):
            for combo in combinations(chain, k):
                # deepest chosen node carries the count of the whole subset
                out.append((suffix + tuple(i for i, _ in combo), combo[-1][1]))
        return

    order = np.argsort(tree.item, kind="stable")
    items_sorted = tree.item[order]
    starts = np.flatnonzero(np.r_[True, items_sorted[1:] != items_sorted[:-1]])
    ends = np.r_[starts[1:], items_sorted.size]
    for a, b in zip(starts.tolist(), ends.tolist()):
        rank = int(items_sorted[a])
        nodes = order[a:b]
        support = int(tree.count[nodes].sum())
        itemset = suffix + (rank,)
        out.append((itemset, support))
        task = conditional_task(tree, nodes, threshold, n_ranks)
        if task is not None:
            paths, weights = task
            _mine_tree(FPTree.from_paths(paths, weights), itemset, threshold, n_ranks, out)


def conditional_task(tree, nodes, threshold, n_ranks):
    """Frequent part of the conditional pattern base of ``nodes``, or None."""
    paths, weights = tree.conditional_base(nodes)
    if paths.shape[1] == 0:
        return None
    mask = paths != PAD
    counts = np.bincount(
        paths[mask], weights=np.broadcast_to(weights[:, None], paths.shape)[mask], minlength=n_ranks
    )
    keep = counts >= threshold
    if not keep.any():
        return None
    return restrict_paths(paths, weights, keep)


def _mine_task(args):
    paths, weights, suffix, threshold, n_ranks = args
    out = []
    _mine_tree(FPTree.from_paths(paths, weights), suffix, threshold, n_ranks, out)
    return out


def mine(paths, threshold, n_ranks, n_jobs=1):
    """All frequent rank-itemsets of the path matrix as ``(ranks, count)`` pairs.

    The top level is split per header item; with ``n_jobs > 1`` the
    conditional trees are mined in worker processes. Output order is
    unspecified; callers sort.
    """
    tree = FPTree.from_paths(paths)
    if tree.n_nodes == 0:
        return []
    out = []
    tasks = []
    order = np.argsort(tree.item, kind="stable")
    items_sorted = tree.item[order]
    starts = np.flatnonzero(np.r_[True, items_sorted[1:] != items_sorted[:-1]])
    ends = np.r_[starts[1:], items_sorted.size]
    for a, b in zip(starts.tolist(), ends.tolist()):
        rank = int(items_sorted[a])
        nodes = order[a:b]
        out.append(((rank,), int(tree.count[nodes].sum())))
        task = conditional_task(tree, nodes, threshold, n_ranks)
        if task is not None:
            tasks.append((task[0], task[1], (rank,), threshold, n_ranks))

    if n_jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=n_jobs) as pool:
            for part in pool.map(_mine_task, tasks, chunksize=max(1, len(tasks) // (4 * n_jobs))):
                out.extend(part)
    else:
        for task in tasks:
            out.extend(_mine_task(task))
    return out
