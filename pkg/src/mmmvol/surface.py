"""Implied volatility surfaces over a strike x expiry grid.

Cells are independent; a failing cell is recorded with an error code and
its volatility left as NaN.  Exports use a long format, one row per cell:
``expiry,strike,iv,small_limit,large_limit,status``.
"""

import csv
import io
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .asymptotics import large_time_limit, small_time_limit
from .errors import DomainError, MmmError
from .implied import implied_vol_mmm

CSV_HEADER = ("expiry", "strike", "iv", "small_limit", "large_limit", "status")


@dataclass
class SurfaceGrid:
    """iv[i][j] is the implied vol at expiries[i], strikes[j]."""

    strikes: list
    expiries: list
    iv: list
    small_limits: list
    large_limit: float
    failures: list = field(default_factory=list)

    def status(self, i, j):
        for row, col, code in self.failures:
            if row == i and col == j:
                return code
        return "ok"

    def skew_range(self, i):
        """max - min of the row at expiries[i] over successful cells."""
        vals = [v for v in self.iv[i] if not math.isnan(v)]
        return max(vals) - min(vals) if vals else math.nan


def _check_grid(name, values):
    if not values:
        raise DomainError(f"{name} must be nonempty")
    if any(not (v > 0.0 and math.isfinite(v)) for v in values):
        raise DomainError(f"{name} must be positive and finite")
    if any(b < a for a, b in zip(values, values[1:])):
        raise DomainError(f"{name} must be sorted")


def _cell(params, K, T):
    try:
        return implied_vol_mmm(params, K, T).vol, None
    except MmmError as exc:
        return math.nan, exc.code


def generate(params, strikes, expiries, workers=1):
    """Implied volatility for every (expiry, strike) cell."""
    strikes = [float(k) for k in strikes]
    expiries = [float(t) for t in expiries]
    _check_grid("strikes", strikes)
    _check_grid("expiries", expiries)
    jobs = [(i, j) for i in range(len(expiries)) for j in range(len(strikes))]

    def run(job):
        return _cell(params, strikes[job[1]], expiries[job[0]])

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run, jobs))
    else:
        results = [run(j) for j in jobs]
    iv = [[math.nan] * len(strikes) for _ in expiries]
    failures = []
    for (i, j), (vol, code) in zip(jobs, results):
        iv[i][j] = vol
        if code is not None:
            failures.append((i, j, code))
    return SurfaceGrid(
        strikes=strikes,
        expiries=expiries,
        iv=iv,
        small_limits=[small_time_limit(params, k) for k in strikes],
        large_limit=large_time_limit(params),
        failures=failures,
    )


def _num(v):
    return "nan" if math.isnan(v) else format(v, ".17g")


def _rows(grid):
    for i, t in enumerate(grid.expiries):
        for j, k in enumerate(grid.strikes):
            yield t, k, grid.iv[i][j], grid.small_limits[j], grid.large_limit, grid.status(i, j)


def to_csv(grid):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for t, k, v, s, l, st in _rows(grid):
        w.writerow([_num(t), _num(k), _num(v), _num(s), _num(l), st])
    return buf.getvalue()


def to_json(grid):
    cols = {name: [] for name in CSV_HEADER}
    for row in _rows(grid):
        for name, val in zip(CSV_HEADER, row):
            cols[name].append(val if name == "status" or not math.isnan(val) else None)
    return json.dumps(cols, indent=1) + "\n"


def export(grid, fmt, destination):
    """Write ``grid`` as csv or json to a path or a text stream."""
    if fmt == "csv":
        text = to_csv(grid)
    elif fmt == "json":
        text = to_json(grid)
    else:
        raise DomainError(f"format must be 'csv' or 'json', got {fmt!r}")
    if hasattr(destination, "write"):
        destination.write(text)
    else:
        with open(destination, "w", encoding="utf-8") as fh:
            fh.write(text)


def _from_columns(cols):
    expiries = sorted(set(cols["expiry"]))
    strikes = sorted(set(cols["strike"]))
    ti = {t: i for i, t in enumerate(expiries)}
    kj = {k: j for j, k in enumerate(strikes)}
    iv = [[math.nan] * len(strikes) for _ in expiries]
    small = [math.nan] * len(strikes)
    failures = []
    large = math.nan
    for t, k, v, s, l, st in zip(*(cols[n] for n in CSV_HEADER)):
        i, j = ti[t], kj[k]
        iv[i][j] = math.nan if v is None else v
        small[j] = s
        large = l
        if st != "ok":
            failures.append((i, j, st))
    return SurfaceGrid(strikes, expiries, iv, small, large, failures)


def load(source, fmt):
    """Read a grid written by ``export`` from a path or a text stream."""
    if hasattr(source, "read"):
        text = source.read()
    else:
        with open(source, encoding="utf-8") as fh:
            text = fh.read()
    if fmt == "json":
        return _from_columns(json.loads(text))
    if fmt != "csv":
        raise DomainError(f"format must be 'csv' or 'json', got {fmt!r}")
    reader = csv.reader(io.StringIO(text))
    header = tuple(next(reader))
    if header != CSV_HEADER:
        raise DomainError(f"unexpected header {header}")
    cols = {n: [] for n in CSV_HEADER}
    for row in reader:
        for name, val in zip(CSV_HEADER, row):
            cols[name].append(val if name == "status" else float(val))
    return _from_columns(cols)
