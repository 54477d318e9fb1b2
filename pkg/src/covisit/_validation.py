"""Input validation helpers shared by the functional API and the estimators."""

from fractions import Fraction
import math
import numbers

import numpy as np
from sklearn.utils import check_array

RECORD_FIELDS = ("uid", "d", "t", "x", "y")
N_TIMESLOTS = 48


class RecordError(ValueError):
    """A trajectory row that is malformed or outside the declared bounds."""

    def __init__(self, message, line=None, field=None):
        self.line = line
        self.field = field
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


def check_records(X, grid, n_days=None):
    """Coerce ``X`` to an ``(n, 5)`` int64 array of ``uid,d,t,x,y`` rows.

    Accepts a sequence of :class:`~covisit.ingest.TrajectoryRecord` or
    anything :func:`sklearn.utils.check_array` understands. Bounds are
    checked against ``grid`` (raw coordinates) and the optional horizon.
    """
    if isinstance(X, np.ndarray) and X.ndim == 2 and X.shape[0] == 0:
        return np.empty((0, 5), dtype=np.int64)
    if not isinstance(X, np.ndarray) and len(X) == 0:
        return np.empty((0, 5), dtype=np.int64)
    X = check_array(X, dtype=np.int64, ensure_min_samples=0)
    if X.shape[1] != 5:
        raise ValueError(f"records must have 5 columns {RECORD_FIELDS}, got {X.shape[1]}")
    bounds = {
        "uid": (0, None),
        "d": (0, n_days),
        "t": (0, N_TIMESLOTS),
        "x": (0, grid.raw_width),
        "y": (0, grid.raw_height),
    }
    for col, name in enumerate(RECORD_FIELDS):
        lo, hi = bounds[name]
        values = X[:, col]
        bad = values < lo
        if hi is not None:
            bad |= values >= hi
        if bad.any():
            row = int(np.flatnonzero(bad)[0])
            limit = f"[{lo}, {hi})" if hi is not None else f">= {lo}"
            raise RecordError(
                f"{name}={values[row]} out of range {limit} (row {row})", field=name
            )
    return X


def check_day_range(days):
    lo, hi = (int(v) for v in days)
    if lo < 0 or lo >= hi:
        raise ValueError(f"day range must satisfy 0 <= lo < hi, got [{lo}, {hi})")
    return lo, hi


def check_min_sup(min_sup):
    if isinstance(min_sup, bool) or not isinstance(min_sup, (numbers.Real, Fraction)):
        raise TypeError(f"min_sup must be a real number, got {min_sup!r}")
    if not 0 < min_sup <= 1:
        raise ValueError(f"min_sup must lie in (0, 1], got {min_sup}")
    return min_sup


def check_positive_int(value, name, minimum=1):
    if isinstance(value, bool) or not isinstance(value, numbers.Integral):
        raise TypeError(f"{name} must be an integer, got {value!r}")
    if value < minimum:
        raise ValueError(f"{name} must be >= {minimum}, got {value}")
    return int(value)


def support_threshold(min_sup, n_transactions):
    """Absolute count threshold ``ceil(min_sup * M)``.

    Floats are read through their shortest decimal repr so that e.g.
    ``0.05 * 100`` gives 5 and not 6.
    """
    if isinstance(min_sup, float):
        frac = Fraction(repr(min_sup))
    else:
        frac = Fraction(min_sup)
    return max(1, math.ceil(frac * n_transactions))
