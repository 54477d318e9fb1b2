"""Trajectory ingest: CSV parsing, grid aggregation and per-day visit sets."""

import csv
import warnings
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from ._validation import (
    N_TIMESLOTS,
    RECORD_FIELDS,
    RecordError,
    check_day_range,
    check_records,
)


@dataclass(frozen=True)
class GridSpec:
    """Raw grid dimensions and the spatial scaling factor.

    Aggregated cells are ``scale x scale`` blocks of raw cells; the
    aggregated grid is ``ceil(raw / scale)`` cells along each axis.
    """

    raw_width: int
    raw_height: int
    scale: int = 1

    def __post_init__(self):
        if self.raw_width < 1 or self.raw_height < 1:
            raise ValueError("grid dimensions must be positive")
        if self.scale < 1:
            raise ValueError(f"scale must be >= 1, got {self.scale}")

    @property
    def width(self) -> int:
        return -(-self.raw_width // self.scale)

    @property
    def height(self) -> int:
        return -(-self.raw_height // self.scale)

    @property
    def n_cells(self) -> int:
        return self.width * self.height

    def location_id(self, cell_x, cell_y):
        """Row-major scalar id of an aggregated cell."""
        return cell_y * self.width + cell_x

    def location_xy(self, loc):
        """Inverse of :meth:`location_id`; works on scalars and arrays."""
        return loc % self.width, loc // self.width

    def contains(self, loc) -> bool:
        return 0 <= loc < self.n_cells


class TrajectoryRecord(NamedTuple):
    uid: int
    day: int
    timeslot: int
    x: int
    y: int


class Location(NamedTuple):
    cell_x: int
    cell_y: int


def aggregate_cell(x, y, s):
    """Map a raw cell to its aggregated cell by floor division."""
    return Location(x // s, y // s)


def parse_records(stream, grid, n_days=None):
    """Parse ``uid,d,t,x,y`` CSV rows from a text stream.

    Raises :class:`RecordError` carrying the 1-based line number for a
    malformed row, and the offending field name for an out-of-range value.
    """
    reader = csv.reader(stream)
    try:
        header = next(reader)
    except StopIteration:
        raise RecordError("missing header", line=1) from None
    if tuple(h.strip() for h in header) != RECORD_FIELDS:
        raise RecordError(f"expected header {','.join(RECORD_FIELDS)}, got {','.join(header)}", line=1)

    limits = {
        "d": n_days,
        "t": N_TIMESLOTS,
        "x": grid.raw_width,
        "y": grid.raw_height,
    }
    records = []
    for row in reader:
        line = reader.line_num
        if not row or (len(row) == 1 and not row[0].strip()):
            continue
        if len(row) != 5:
            raise RecordError(f"expected 5 fields, got {len(row)}", line=line)
        values = []
        for name, raw in zip(RECORD_FIELDS, row):
            try:
                value = int(raw.strip(), 10)
            except ValueError:
                raise RecordError(f"{name} is not an integer: {raw!r}", line=line, field=name) from None
            hi = limits.get(name)
            if value < 0 or (hi is not None and value >= hi):
                raise RecordError(f"{name}={value} out of range", line=line, field=name)
            values.append(value)
        records.append(TrajectoryRecord(*values))
    return records


def read_records(path, grid, n_days=None):
    """Load a trajectory CSV file into an ``(n, 5)`` int64 array.

    Uses a vectorized reader and falls back to :func:`parse_records` to
    locate the failing line when the fast path rejects the file.
    """
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", UserWarning)  # header-only file
            data = np.loadtxt(path, delimiter=",", skiprows=1, dtype=np.int64, ndmin=2)
        with open(path, encoding="utf-8", newline="") as fh:
            header = fh.readline().strip()
        if tuple(h.strip() for h in header.split(",")) != RECORD_FIELDS:
            raise ValueError("bad header")
        if data.size == 0:
            data = np.empty((0, 5), dtype=np.int64)
        return check_records(data, grid, n_days=n_days)
    except (ValueError, RecordError):
        with open(path, encoding="utf-8", newline="") as fh:
            records = parse_records(fh, grid, n_days=n_days)
        return check_records(records, grid, n_days=n_days)


class VisitLog:
    """Per-individual, per-day sets of visited locations.

    Stored as the unique ``(day, uid, location)`` triples sorted in that
    order. Pairs without any record are implicitly empty. Instances are
    immutable and safe to share.
    """

    def __init__(self, day, uid, loc, grid, days):
        self.grid = grid
        self.days = check_day_range(days)
        day = np.asarray(day, dtype=np.int64)
        uid = np.asarray(uid, dtype=np.int64)
        loc = np.asarray(loc, dtype=np.int64)
        if loc.size and (loc.min() < 0 or loc.max() >= grid.n_cells):
            raise ValueError("location id outside the aggregated grid")
        keep = (day >= self.days[0]) & (day < self.days[1])
        day, uid, loc = day[keep], uid[keep], loc[keep]
        order = np.lexsort((loc, uid, day))
        day, uid, loc = day[order], uid[order], loc[order]
        if day.size:
            fresh = np.ones(day.size, dtype=bool)
            fresh[1:] = (day[1:] != day[:-1]) | (uid[1:] != uid[:-1]) | (loc[1:] != loc[:-1])
            day, uid, loc = day[fresh], uid[fresh], loc[fresh]
        self.day, self.uid, self.loc = day, uid, loc
        for arr in (self.day, self.uid, self.loc):
            arr.flags.writeable = False

    @property
    def horizon(self) -> int:
        return self.days[1] - self.days[0]

    @property
    def individuals(self):
        return np.unique(self.uid)

    @property
    def n_individuals(self) -> int:
        return int(self.individuals.size)

    def __len__(self):
        return int(self.day.size)

    def visits(self, uid, day):
        """The set of location ids visited by ``uid`` on ``day``."""
        lo, hi = np.searchsorted(self.day, [day, day + 1])
        block = self.uid[lo:hi]
        a, b = np.searchsorted(block, [uid, uid + 1])
        return frozenset(int(v) for v in self.loc[lo + a : lo + b])

    def as_dict(self):
        """``{(uid, day): frozenset(locations)}`` for every non-empty pair."""
        out = {}
        for d, u, l in zip(self.day.tolist(), self.uid.tolist(), self.loc.tolist()):
            out.setdefault((u, d), set()).add(l)
        return {k: frozenset(v) for k, v in out.items()}

    def slice(self, lo, hi):
        """Restrict to days ``[lo, hi)``, which must lie inside this log's range."""
        lo, hi = check_day_range((lo, hi))
        if lo < self.days[0] or hi > self.days[1]:
            raise ValueError(f"[{lo}, {hi}) is outside the log's day range {list(self.days)}")
        return VisitLog(self.day, self.uid, self.loc, self.grid, (lo, hi))

    def __eq__(self, other):
        if not isinstance(other, VisitLog):
            return NotImplemented
        return (
            self.grid == other.grid
            and self.days == other.days
            and np.array_equal(self.day, other.day)
            and np.array_equal(self.uid, other.uid)
            and np.array_equal(self.loc, other.loc)
        )

    def __repr__(self):
        return (
            f"VisitLog(days={list(self.days)}, individuals={self.n_individuals}, "
            f"visits={len(self)}, grid={self.grid.width}x{self.grid.height})"
        )


def build_visit_log(records, grid, day_range):
    """Aggregate raw records into a :class:`VisitLog` over ``[d_lo, d_hi)``.

    Timeslots are discarded; repeated visits to a cell on one day collapse
    into a single set member.
    """
    X = check_records(records, grid)
    cx, cy = aggregate_cell(X[:, 3], X[:, 4], grid.scale)
    loc = grid.location_id(cx, cy)
    return VisitLog(X[:, 1], X[:, 0], loc, grid, day_range)


def read_poi(path, grid):
    """Sum ``x,y,category,count`` POI rows into per-location totals."""
    totals = {}
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = [h.strip() for h in next(reader, [])]
        if header != ["x", "y", "category", "count"]:
            raise RecordError("expected header x,y,category,count", line=1)
        for row in reader:
            if not row:
                continue
            line = reader.line_num
            try:
                x, y, _, count = (int(v) for v in row)
            except ValueError:
                raise RecordError(f"malformed POI row {row!r}", line=line) from None
            if not (0 <= x < grid.raw_width and 0 <= y < grid.raw_height):
                raise RecordError("POI coordinate outside grid", line=line, field="x" if not 0 <= x < grid.raw_width else "y")
            if count < 0:
                raise RecordError("negative POI count", line=line, field="count")
            cell = aggregate_cell(x, y, grid.scale)
            loc = grid.location_id(*cell)
            totals[loc] = totals.get(loc, 0) + count
    return dict(sorted(totals.items()))
