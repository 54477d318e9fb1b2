"""Seeded synthetic trajectories with planted co-visitation groups.

Randomness comes from ``numpy.random.Generator(PCG64(seed))``. The draw
order below is part of the output contract: changing it changes every
golden file.
"""

import csv
from dataclasses import dataclass, field

import numpy as np

from .ingest import GridSpec, VisitLog


@dataclass(frozen=True)
class PlantedGroup:
    """Adopters visit every location of the group on Bernoulli(visit_prob) days."""

    locations: tuple  # aggregated (cell_x, cell_y) pairs
    adoption: float
    visit_prob: float

    def expected_support(self, delta_t):
        """Expected share of (individual, window) slots holding the whole group.

        A lower bound on support in expectation, since M never exceeds the
        slot count.
        """
        return self.adoption * (1.0 - (1.0 - self.visit_prob) ** delta_t)


@dataclass(frozen=True)
class SynthSpec:
    seed: int
    grid: GridSpec
    n_individuals: int
    n_days: int
    background_rate: float = 1.0
    planted_groups: tuple = field(default_factory=tuple)

    def __post_init__(self):
        if self.n_individuals < 1 or self.n_days < 1:
            raise ValueError("n_individuals and n_days must be positive")
        if self.background_rate < 0:
            raise ValueError("background_rate must be >= 0")
        for g in self.planted_groups:
            for name in ("adoption", "visit_prob"):
                if not 0 <= getattr(g, name) <= 1:
                    raise ValueError(f"{name} must lie in [0, 1]")
            for cx, cy in g.locations:
                if not (0 <= cx < self.grid.width and 0 <= cy < self.grid.height):
                    raise ValueError(f"planted location {(cx, cy)} outside the aggregated grid")


class SpecError(ValueError):
    def __init__(self, path, message):
        self.path = path
        super().__init__(f"{path}: {message}")


def _require(obj, key, kind, path):
    if key not in obj:
        raise SpecError(f"{path}.{key}" if path else key, "missing")
    value = obj[key]
    ok = isinstance(value, kind) and not isinstance(value, bool)
    if not ok:
        raise SpecError(f"{path}.{key}" if path else key, f"expected {getattr(kind, '__name__', kind)}, got {value!r}")
    return value


def spec_from_dict(data):
    """Validate a JSON-like dict into a :class:`SynthSpec`; errors name the field path."""
    if not isinstance(data, dict):
        raise SpecError("$", "spec must be a JSON object")
    grid_d = _require(data, "grid", dict, "")
    grid = GridSpec(
        _require(grid_d, "raw_width", int, "grid"),
        _require(grid_d, "raw_height", int, "grid"),
        grid_d.get("scale", 1),
    )
    groups = []
    for k, g in enumerate(data.get("planted_groups", [])):
        path = f"planted_groups[{k}]"
        if not isinstance(g, dict):
            raise SpecError(path, "expected an object")
        locs = _require(g, "locations", list, path)
        cells = []
        for j, cell in enumerate(locs):
            if not (isinstance(cell, list) and len(cell) == 2 and all(isinstance(c, int) for c in cell)):
                raise SpecError(f"{path}.locations[{j}]", "expected [x, y] integers")
            cells.append(tuple(cell))
        group = PlantedGroup(
            tuple(cells),
            float(_require(g, "adoption", (int, float), path)),
            float(_require(g, "visit_prob", (int, float), path)),
        )
        for name in ("adoption", "visit_prob"):
            if not 0 <= getattr(group, name) <= 1:
                raise SpecError(f"{path}.{name}", "must lie in [0, 1]")
        for j, (cx, cy) in enumerate(group.locations):
            if not (0 <= cx < grid.width and 0 <= cy < grid.height):
                raise SpecError(f"{path}.locations[{j}]", "outside the aggregated grid")
        groups.append(group)
    return SynthSpec(
        seed=_require(data, "seed", int, ""),
        grid=grid,
        n_individuals=_require(data, "n_individuals", int, ""),
        n_days=_require(data, "n_days", int, ""),
        background_rate=float(data.get("background_rate", 1.0)),
        planted_groups=tuple(groups),
    )


@dataclass
class SyntheticData:
    visit_log: VisitLog
    records: np.ndarray  # (n, 5) uid,d,t,x,y rows on the raw grid
    manifest: dict


def generate(spec, delta_ts=(1, 3, 7)):
    rng = np.random.Generator(np.random.PCG64(spec.seed))
    grid = spec.grid
    r, n_days = spec.n_individuals, spec.n_days

    per_day = rng.poisson(spec.background_rate, size=(r, n_days))
    n_bg = int(per_day.sum())
    flat = np.repeat(np.arange(r * n_days), per_day.ravel())
    uid_parts = [flat // n_days]
    day_parts = [flat % n_days]
    loc_parts = [rng.integers(0, grid.n_cells, size=n_bg)]

    groups_out = []
    for g in spec.planted_groups:
        adopters = rng.random(r) < g.adoption
        visits = (rng.random((r, n_days)) < g.visit_prob) & adopters[:, None]
        u, d = np.nonzero(visits)
        ids = np.array([grid.location_id(cx, cy) for cx, cy in g.locations], dtype=np.int64)
        uid_parts.append(np.repeat(u, ids.size))
        day_parts.append(np.repeat(d, ids.size))
        loc_parts.append(np.tile(ids, u.size))
        groups_out.append(
            {
                "locations": [list(c) for c in g.locations],
                "location_ids": ids.tolist(),
                "adoption": g.adoption,
                "visit_prob": g.visit_prob,
                "n_adopters": int(adopters.sum()),
                "expected_support": {str(dt): g.expected_support(dt) for dt in delta_ts},
            }
        )

    uid = np.concatenate(uid_parts).astype(np.int64)
    day = np.concatenate(day_parts).astype(np.int64)
    loc = np.concatenate(loc_parts).astype(np.int64)

    # raw pings: a uniform raw cell inside the aggregated cell, a uniform timeslot
    cx, cy = grid.location_xy(loc)
    span_x = np.minimum(grid.scale, grid.raw_width - cx * grid.scale)
    span_y = np.minimum(grid.scale, grid.raw_height - cy * grid.scale)
    x = cx * grid.scale + (rng.random(loc.size) * span_x).astype(np.int64)
    y = cy * grid.scale + (rng.random(loc.size) * span_y).astype(np.int64)
    t = rng.integers(0, 48, size=loc.size)
    order = np.lexsort((t, day, uid))
    records = np.column_stack([uid, day, t, x, y])[order]

    log = VisitLog(day, uid, loc, grid, (0, n_days))
    manifest = {
        "seed": spec.seed,
        "rng": f"numpy.random.PCG64 (numpy {np.__version__})",
        "grid": {"raw_width": grid.raw_width, "raw_height": grid.raw_height, "scale": grid.scale},
        "n_individuals": r,
        "n_days": n_days,
        "background_rate": spec.background_rate,
        "n_records": int(records.shape[0]),
        "planted_groups": groups_out,
    }
    return SyntheticData(log, records, manifest)


def write_records_csv(records, stream):
    w = csv.writer(stream, lineterminator="\n")
    w.writerow(["uid", "d", "t", "x", "y"])
    w.writerows(records.tolist())
