"""Weighted co-visitation hypergraph and its structural primitives."""

from dataclasses import dataclass
from itertools import combinations

import numpy as np
from scipy import sparse

from .mining import _canonical_key, format_pattern, parse_pattern_line

FORMAT_TAG = "covis-hg"
FORMAT_VERSION = "v1"


@dataclass(frozen=True)
class Hyperedge:
    items: tuple
    weight: float
    count: int = 0

    @property
    def size(self) -> int:
        return len(self.items)

    # lets Hyperedge reuse the pattern dump line format
    @property
    def support(self) -> float:
        return self.weight


class Hypergraph:
    """Nodes are aggregated grid cells; hyperedges are weighted location sets.

    ``nodes`` defaults to every cell of the ``width x height`` grid, so
    isolated locations count towards node totals. Edges are kept in
    canonical order (size, then lexicographic). Immutable.
    """

    def __init__(self, edges, width, height, nodes=None, n_transactions=None):
        self.width = int(width)
        self.height = int(height)
        n_cells = self.width * self.height
        if nodes is None:
            self.nodes = np.arange(n_cells, dtype=np.int64)
        else:
            self.nodes = np.unique(np.asarray(list(nodes), dtype=np.int64))
        if self.nodes.size and (self.nodes[0] < 0 or self.nodes[-1] >= n_cells):
            raise ValueError("node id outside the grid")
        node_set = set(self.nodes.tolist())

        canon = []
        for e in edges:
            items = tuple(sorted(int(i) for i in e.items))
            if len(set(items)) != len(items):
                raise ValueError(f"hyperedge {items} repeats a node")
            missing = [i for i in items if i not in node_set]
            if missing:
                raise ValueError(f"hyperedge {items} uses nodes {missing} outside the node set")
            canon.append(Hyperedge(items, float(e.weight), int(e.count)))
        canon.sort(key=lambda e: _canonical_key(e.items))
        for a, b in zip(canon, canon[1:]):
            if a.items == b.items:
                raise ValueError(f"duplicate hyperedge {a.items}")
        self.edges = tuple(canon)
        self.n_transactions = n_transactions
        self._row = {v: k for k, v in enumerate(self.nodes.tolist())}

    @classmethod
    def from_edges(cls, edge_sets, width, height, weights=None, **kwargs):
        weights = [1.0] * len(edge_sets) if weights is None else weights
        return cls([Hyperedge(tuple(e), w) for e, w in zip(edge_sets, weights)], width, height, **kwargs)

    @property
    def n_nodes(self) -> int:
        return int(self.nodes.size)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def __eq__(self, other):
        if not isinstance(other, Hypergraph):
            return NotImplemented
        return (
            (self.width, self.height) == (other.width, other.height)
            and np.array_equal(self.nodes, other.nodes)
            and self.edges == other.edges
        )

    def __repr__(self):
        return f"Hypergraph({self.n_nodes} nodes, {self.n_edges} edges, grid={self.width}x{self.height})"

    def xy(self, node):
        return node % self.width, node // self.width

    def incidence_matrix(self):
        """Sparse boolean ``|V| x |E|`` matrix with ``I[i, j] = 1`` iff node i is in edge j."""
        rows = [self._row[v] for e in self.edges for v in e.items]
        cols = [j for j, e in enumerate(self.edges) for _ in e.items]
        data = np.ones(len(rows), dtype=bool)
        return sparse.csr_matrix((data, (rows, cols)), shape=(self.n_nodes, self.n_edges), dtype=bool)

    def degrees(self):
        """Degree of every node, aligned with ``self.nodes``."""
        deg = np.zeros(self.n_nodes, dtype=np.int64)
        for e in self.edges:
            for v in e.items:
                deg[self._row[v]] += 1
        return deg

    def degree(self, node):
        if node not in self._row:
            raise KeyError(f"unknown node {node}")
        return sum(1 for e in self.edges if node in e.items)

    def rank(self) -> int:
        """Largest hyperedge size; 0 when there are no edges."""
        return max((e.size for e in self.edges), default=0)

    def k_uniform(self, k):
        """Sub-hypergraph of the edges of size exactly ``k``, cropped to their nodes."""
        if k < 1:
            raise ValueError("k must be >= 1")
        kept = [e for e in self.edges if e.size == k]
        nodes = sorted({v for e in kept for v in e.items})
        return Hypergraph(kept, self.width, self.height, nodes=nodes, n_transactions=self.n_transactions)

    def restrict(self, min_edge_size):
        """Sub-hypergraph of edges with size >= ``min_edge_size``, on the same node set."""
        kept = [e for e in self.edges if e.size >= min_edge_size]
        return Hypergraph(kept, self.width, self.height, nodes=self.nodes, n_transactions=self.n_transactions)

    def bipartite_edges(self):
        """``(node, edge_index)`` pairs of the node/hyperedge bipartite graph."""
        return [(v, j) for j, e in enumerate(self.edges) for v in e.items]

    def co_degree_graph(self, min_edge_size=3):
        """Pair weights counting the hyperedges (of size >= ``min_edge_size``) that hold both nodes."""
        if min_edge_size < 2:
            raise ValueError("min_edge_size must be >= 2")
        weights = {}
        for e in self.edges:
            if e.size < min_edge_size:
                continue
            for pair in combinations(e.items, 2):
                weights[pair] = weights.get(pair, 0) + 1
        return CoDegreeGraph(weights)


class CoDegreeGraph:
    """Undirected weighted pair graph keyed by ``(u, v)`` with ``u < v``."""

    def __init__(self, weights):
        canon = {}
        for (u, v), w in weights.items():
            if u == v:
                raise ValueError("co-degree graphs have no self-loops")
            if w:
                canon[(min(u, v), max(u, v))] = int(w)
        self.weights = dict(sorted(canon.items()))

    def __len__(self):
        return len(self.weights)

    def __getitem__(self, pair):
        u, v = pair
        return self.weights.get((min(u, v), max(u, v)), 0)

    def __eq__(self, other):
        if not isinstance(other, CoDegreeGraph):
            return NotImplemented
        return self.weights == other.weights

    @property
    def vertices(self):
        return sorted({v for pair in self.weights for v in pair})

    def to_records(self):
        return [{"u": u, "v": v, "weight": w} for (u, v), w in self.weights.items()]

    def __repr__(self):
        return f"CoDegreeGraph({len(self)} edges)"


def from_patterns(pattern_set, grid):
    """One hyperedge per frequent pattern, weighted by its support; V is the whole grid."""
    width, height = grid.width, grid.height
    n_cells = width * height
    edges = []
    for p in pattern_set:
        bad = [i for i in p.items if not 0 <= i < n_cells]
        if bad:
            raise ValueError(f"pattern {p.items} has items {bad} outside the {width}x{height} grid")
        edges.append(Hyperedge(p.items, p.support, p.count))
    return Hypergraph(edges, width, height, n_transactions=pattern_set.n_transactions)


def write_hypergraph(hg, stream):
    stream.write(f"{FORMAT_TAG} {FORMAT_VERSION} {hg.width} {hg.height} {hg.n_edges}\n")
    for e in hg.edges:
        stream.write(format_pattern(e))
        stream.write("\n")


def read_hypergraph(stream):
    header = stream.readline().split()
    if len(header) != 5 or header[0] != FORMAT_TAG or header[1] != FORMAT_VERSION:
        raise ValueError(f"not a {FORMAT_TAG} {FORMAT_VERSION} file")
    width, height, n_edges = (int(v) for v in header[2:])
    edges = []
    n_transactions = None
    for line in stream:
        if not line.strip():
            continue
        items, support, count = parse_pattern_line(line)
        edges.append(Hyperedge(items, support, count))
        if count:
            # support was written as count / M; recover M
            n_transactions = round(count / support)
    if len(edges) != n_edges:
        raise ValueError(f"header declares {n_edges} edges, found {len(edges)}")
    return Hypergraph(edges, width, height, n_transactions=n_transactions)


def save_hypergraph(hg, path):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        write_hypergraph(hg, fh)


def load_hypergraph(path):
    with open(path, encoding="utf-8") as fh:
        return read_hypergraph(fh)
