"""Structural and spatial metrics of a co-visitation hypergraph."""

import csv
from dataclasses import dataclass
from itertools import combinations

import numpy as np
from scipy import optimize, special


class NoQualifyingEdgesError(ValueError):
    """Raised when a metric needs hyperedges and none meet the size cut."""


@dataclass(frozen=True)
class CcdfCurve:
    k: np.ndarray
    p: np.ndarray

    def points(self):
        return list(zip(self.k.tolist(), self.p.tolist()))


def degree_ccdf(hg):
    """``P(Degree >= k)`` over every node (isolated ones included), k = 0..max degree."""
    if hg.n_nodes == 0:
        raise ValueError("hypergraph has no nodes")
    deg = hg.degrees()
    hist = np.bincount(deg)
    at_least = np.cumsum(hist[::-1])[::-1]
    k = np.arange(hist.size)
    return CcdfCurve(k, at_least / hg.n_nodes)


@dataclass(frozen=True)
class DegreeFit:
    """Discrete exponential vs. discrete power-law fit on degrees >= xmin.

    ``llr`` is ``loglik_exponential - loglik_power_law``; positive values
    favour the exponential.
    """

    decay_rate: float
    alpha: float
    xmin: int
    n: int
    loglik_exponential: float
    loglik_power_law: float

    @property
    def llr(self) -> float:
        return self.loglik_exponential - self.loglik_power_law

    @property
    def family(self) -> str:
        return "exponential" if self.llr > 0 else "power_law"

    def to_dict(self):
        return {
            "family": self.family,
            "exponential": {"lambda": self.decay_rate, "loglik": self.loglik_exponential},
            "power_law": {"alpha": self.alpha, "xmin": self.xmin, "loglik": self.loglik_power_law},
            "llr": self.llr,
            "n": self.n,
        }


def _zeta_loglik(alpha, log_sum, n, xmin):
    return -alpha * log_sum - n * np.log(special.zeta(alpha, xmin))


def fit_degree_distribution(degrees, xmin=1):
    """Maximum-likelihood fits of both families to the degrees >= ``xmin``.

    Exponential: ``P(k) = (1 - e^-lam) e^(-lam (k - xmin))``, closed-form MLE.
    Power law: ``P(k) = k^-alpha / zeta(alpha, xmin)``, MLE by bounded search.
    """
    x = np.asarray(degrees, dtype=np.int64)
    x = x[x >= xmin]
    n = x.size
    if n < 10:
        raise ValueError(f"need at least 10 degrees >= {xmin}, got {n}")
    if np.all(x == x[0]):
        raise ValueError("all degrees are equal; both fits are degenerate")

    excess = float((x - xmin).mean())
    decay = float(np.log1p(1.0 / excess))
    ll_exp = n * np.log(-np.expm1(-decay)) - decay * float((x - xmin).sum())

    log_sum = float(np.log(x).sum())
    res = optimize.minimize_scalar(
        lambda a: -_zeta_loglik(a, log_sum, n, xmin),
        bounds=(1.0 + 1e-6, 50.0),
        method="bounded",
        options={"xatol": 1e-10},
    )
    alpha = float(res.x)
    return DegreeFit(decay, alpha, xmin, n, float(ll_exp), float(_zeta_loglik(alpha, log_sum, n, xmin)))


def hyperedge_size_histogram(hg):
    sizes = {}
    for e in hg.edges:
        sizes[e.size] = sizes.get(e.size, 0) + 1
    return dict(sorted(sizes.items()))


def chebyshev(u, v):
    """Chebyshev distance between two ``(x, y)`` cells."""
    return max(abs(u[0] - v[0]), abs(u[1] - v[1]))


def edge_span(hg, edge):
    """Largest pairwise Chebyshev distance inside one hyperedge."""
    cells = [hg.xy(v) for v in edge.items]
    return max((chebyshev(a, b) for a, b in combinations(cells, 2)), default=0)


def max_chebyshev(hg, min_edge_size=3):
    """Largest per-edge span over the hyperedges of size >= ``min_edge_size``."""
    spans = [edge_span(hg, e) for e in hg.edges if e.size >= min_edge_size]
    if not spans:
        raise NoQualifyingEdgesError(f"no hyperedges of size >= {min_edge_size}")
    return max(spans)


@dataclass(frozen=True)
class DegreeGrid:
    grid: np.ndarray  # indexed [y, x]

    @property
    def max_degree(self) -> int:
        return int(self.grid.max(initial=0))


def degree_heatmap(hg):
    grid = np.zeros((hg.height, hg.width), dtype=np.int64)
    x, y = hg.xy(hg.nodes)
    grid[y, x] = hg.degrees()
    return DegreeGrid(grid)


@dataclass(frozen=True)
class PowerLawFit:
    a: float
    b: float
    r2: float
    n: int

    def to_dict(self):
        return {"model": "y = a * x^b", "a": self.a, "b": self.b, "r2": self.r2, "n": self.n}


def power_law_fit(x, y):
    """Least-squares line through ``(log x, log y)``; non-positive pairs are skipped."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    keep = (x > 0) & (y > 0)
    x, y = x[keep], y[keep]
    if x.size < 3:
        raise ValueError(f"need at least 3 strictly positive pairs, got {x.size}")
    lx, ly = np.log(x), np.log(y)
    slope, intercept = np.polyfit(lx, ly, 1)
    resid = ly - (intercept + slope * lx)
    total = ((ly - ly.mean()) ** 2).sum()
    r2 = 1.0 - (resid**2).sum() / total if total > 0 else 1.0
    return PowerLawFit(float(np.exp(intercept)), float(slope), float(r2), int(x.size))


def poi_degree_fit(poi, hg):
    """Fit ``degree = a * poi_count^b`` over locations where both are positive."""
    counts = np.array([poi.get(v, 0) for v in hg.nodes.tolist()], dtype=np.float64)
    return power_law_fit(counts, hg.degrees())


def write_ccdf_csv(curve, stream):
    w = csv.writer(stream, lineterminator="\n")
    w.writerow(["k", "p"])
    for k, p in curve.points():
        w.writerow([k, repr(p)])


def write_sizes_csv(histogram, stream):
    w = csv.writer(stream, lineterminator="\n")
    w.writerow(["size", "count"])
    for size, count in histogram.items():
        w.writerow([size, count])


def write_heatmap_csv(heatmap, stream):
    w = csv.writer(stream, lineterminator="\n")
    for row in heatmap.grid.tolist():
        w.writerow(row)
