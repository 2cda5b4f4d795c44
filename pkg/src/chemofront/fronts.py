"""Front contours, radius statistics and numeric-versus-analytic comparison."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import analytic
from .analytic import AnalyticSteadyState, FrontEquilibrium
from .errors import NoContourError, NoPlateauError, ReportError
from .grid import Field, cross_section, load_snapshot
from .params import Parameters


@dataclass(frozen=True, eq=False)
class FrontContour:
    points: np.ndarray  # (m, 2) array of (x, y); first == last when closed
    level: float
    center: tuple
    closed: bool = True

    @property
    def area(self) -> float:
        return polygon_area(self.points)

    def contains(self, p) -> bool:
        return point_in_polygon(self.points, p)


@dataclass(frozen=True)
class RadiusEstimate:
    mean_radius: float
    std_radius: float
    n_points: int


def polygon_area(points: np.ndarray) -> float:
    x, y = points[:, 0], points[:, 1]
    return 0.5 * abs(float(np.dot(x[:-1], y[1:]) - np.dot(x[1:], y[:-1])))


def point_in_polygon(points: np.ndarray, p) -> bool:
    """Even-odd ray casting test."""
    px, py = p
    x0, y0 = points[:-1, 0], points[:-1, 1]
    x1, y1 = points[1:, 0], points[1:, 1]
    straddle = (y0 > py) != (y1 > py)
    with np.errstate(divide="ignore", invalid="ignore"):
        xcross = x0 + (py - y0) * (x1 - x0) / (y1 - y0)
    return bool(np.count_nonzero(straddle & (px < xcross)) % 2)


# Segments for each marching-squares case.  Corners are numbered
# 0:(j,i) 1:(j,i+1) 2:(j+1,i+1) 3:(j+1,i) and bit k is set when corner k
# lies above the level.  Edges: 0 bottom (0-1), 1 right (1-2), 2 top (3-2),
# 3 left (0-3).
_SEGMENTS = {
    0: (), 15: (),
    1: ((3, 0),), 14: ((3, 0),),
    2: ((0, 1),), 13: ((0, 1),),
    4: ((1, 2),), 11: ((1, 2),),
    8: ((2, 3),), 7: ((2, 3),),
    3: ((3, 1),), 12: ((3, 1),),
    6: ((0, 2),), 9: ((0, 2),),
}
# Saddles: (segments when centre is below, segments when centre is above).
# Case 5 has corners 0 and 2 above; an above centre joins them.
_SADDLE = {
    5: (((3, 0), (1, 2)), ((0, 1), (2, 3))),
    10: (((0, 1), (2, 3)), ((3, 0), (1, 2))),
}


def _trace(f: np.ndarray, level: float):
    """Marching squares on ``f``; returns a list of polylines in index space (i, j)."""
    d = f - level
    above = d > 0
    n_rows, n_cols = f.shape

    def edge_key(j, i, e):
        # Canonical id for the edge shared between neighbouring cells.
        if e == 0:
            return ("h", j, i)
        if e == 2:
            return ("h", j + 1, i)
        if e == 3:
            return ("v", j, i)
        return ("v", j, i + 1)

    points = {}

    def edge_point(key):
        if key in points:
            return points[key]
        kind, j, i = key
        if kind == "h":
            a, b = d[j, i], d[j, i + 1]
            t = a / (a - b)
            pt = (i + t, float(j))
        else:
            a, b = d[j, i], d[j + 1, i]
            t = a / (a - b)
            pt = (float(i), j + t)
        points[key] = pt
        return pt

    links: dict = {}
    idx = (above[:-1, :-1].astype(np.uint8) | (above[:-1, 1:] << 1)
           | (above[1:, 1:] << 2) | (above[1:, :-1] << 3))
    for j, i in zip(*np.nonzero((idx != 0) & (idx != 15))):
        case = int(idx[j, i])
        if case in _SADDLE:
            centre = 0.25 * (d[j, i] + d[j, i + 1] + d[j + 1, i + 1] + d[j + 1, i])
            segs = _SADDLE[case][1 if centre > 0 else 0]
        else:
            segs = _SEGMENTS[case]
        for e0, e1 in segs:
            k0, k1 = edge_key(j, i, e0), edge_key(j, i, e1)
            links.setdefault(k0, []).append(k1)
            links.setdefault(k1, []).append(k0)

    visited = set()
    lines = []

    def walk(start):
        path = [start]
        visited.add(start)
        prev, cur = None, start
        while True:
            nxt = [k for k in links[cur] if k != prev]
            if not nxt:
                return path, False
            k = nxt[0]
            if k == start:
                path.append(start)
                return path, True
            if k in visited:
                return path, False
            path.append(k)
            visited.add(k)
            prev, cur = cur, k

    # Open lines start at endpoints (degree one), then the remaining loops.
    for key in [k for k, v in links.items() if len(v) == 1]:
        if key not in visited:
            path, _ = walk(key)
            lines.append(([edge_point(k) for k in path], False))
    for key in links:
        if key not in visited:
            path, closed = walk(key)
            lines.append(([edge_point(k) for k in path], closed))
    return lines


def extract_contour(f: Field, level: float, center=(0.5, 0.5), include_open=False):
    """Level-set polylines of ``f`` at ``level``, largest enclosed area first.

    Only closed contours are returned unless ``include_open`` is set;
    open ones end on the domain boundary.
    """
    data = f.data
    lo, hi = float(data.min()), float(data.max())
    if not lo < level < hi:
        raise NoContourError(f"level {level:.6g} outside field range ({lo:.6g}, {hi:.6g})")
    contours = []
    for pts, closed in _trace(data, level):
        if not closed and not include_open:
            continue
        arr = np.asarray(pts, dtype=float) * f.dx
        if closed:
            arr[-1] = arr[0]
        contours.append(FrontContour(points=arr, level=level, center=tuple(center), closed=closed))
    contours.sort(key=lambda c: c.area if c.closed else 0.0, reverse=True)
    if not contours:
        raise NoContourError(f"no closed contour at level {level:.6g}")
    return contours


def front_radius(contour: FrontContour) -> RadiusEstimate:
    """Arc-length weighted mean and spread of distances to the contour centre."""
    pts = contour.points
    cx, cy = contour.center
    r = np.hypot(pts[:, 0] - cx, pts[:, 1] - cy)
    seg = np.hypot(np.diff(pts[:, 0]), np.diff(pts[:, 1]))
    r_mid = 0.5 * (r[:-1] + r[1:])
    total = seg.sum()
    mean = float(np.dot(seg, r_mid) / total)
    var = float(np.dot(seg, (r_mid - mean) ** 2) / total)
    n_points = len(pts) - 1 if contour.closed else len(pts)
    return RadiusEstimate(mean_radius=mean, std_radius=math.sqrt(var), n_points=n_points)


def contour_around(f: Field, level: float, center) -> FrontContour:
    """The smallest closed contour at ``level`` that encloses ``center``."""
    enclosing = [c for c in extract_contour(f, level, center) if c.contains(center)]
    if not enclosing:
        raise NoContourError(f"no contour at level {level:.6g} encloses {center}")
    return enclosing[-1]


def plateau_radius_numeric(v: Field, center=(0.5, 0.5)) -> RadiusEstimate:
    lo, hi = float(v.data.min()), float(v.data.max())
    if hi - lo < 0.5:
        raise NoPlateauError(f"v spans only [{lo:.3g}, {hi:.3g}]; no plateau")
    return front_radius(contour_around(v, 0.5, center))


def front_threshold(R, s: AnalyticSteadyState, params: Parameters) -> float:
    """Unstable shifted equilibrium u2 at radius ``R`` (first-order shift)."""
    dc = analytic.delta_c_at(R, s)
    return analytic.shifted_equilibria(dc, params.lam, params.chi0, params.u_star,
                                       first_order=True)[1]


def measure_front(u: Field, s: AnalyticSteadyState, params: Parameters, center,
                  R_guess, passes=1):
    """Front contour at ``u = u2`` with u2 refined by ``passes`` fixed-point passes.

    Returns ``(contour, radius_estimate, level)``.
    """
    level = front_threshold(R_guess, s, params)
    contour = contour_around(u, level, center)
    est = front_radius(contour)
    for _ in range(passes):
        level = front_threshold(est.mean_radius, s, params)
        contour = contour_around(u, level, center)
        est = front_radius(contour)
    return contour, est, level


@dataclass
class ComparisonReport:
    rows: list = field(default_factory=list)  # (metric, numeric, analytic, rel_error)
    threshold_u2: float = float("nan")
    contours: dict = field(default_factory=dict)
    c_profile: np.ndarray | None = None

    def add(self, metric, numeric, analytic_value):
        rel = abs(numeric - analytic_value) / abs(analytic_value) if analytic_value else float("nan")
        self.rows.append((metric, float(numeric), float(analytic_value), float(rel)))

    def get(self, metric):
        for row in self.rows:
            if row[0] == metric:
                return row
        raise KeyError(metric)

    def rel_error(self, metric) -> float:
        return self.get(metric)[3]

    def to_csv(self, path) -> None:
        with open(path, "w") as fh:
            fh.write("metric,numeric,analytic,rel_error\n")
            for m, a, b, e in self.rows:
                fh.write(f"{m},{a!r},{b!r},{e!r}\n")


def write_contour_csv(contour: FrontContour, path) -> None:
    np.savetxt(path, contour.points, delimiter=",", header="x,y", comments="", fmt="%.17g")


def c_profile_deviation(c: Field, s: AnalyticSteadyState, center=(0.5, 0.5), margin=5):
    """Max relative deviation of the horizontal c cross-section through
    ``center`` from the analytic stationary profile, ignoring ``margin``
    nodes at each end.  Returns ``(deviation, table)`` where the table
    columns are x, r, numeric, analytic."""
    prof = cross_section(c, "x", center[1])
    y_line = round(center[1] * (c.n - 1)) * c.dx
    r = np.hypot(prof[:, 0] - center[0], y_line - center[1])
    r = np.minimum(r, analytic.R_DISH)
    ana = analytic.stationary_c(r, s)
    table = np.column_stack([prof[:, 0], r, prof[:, 1], ana])
    inner = slice(margin, c.n - margin)
    dev = np.abs(prof[inner, 1] - ana[inner]) / np.abs(ana[inner])
    return float(dev.max()), table


def compare_snapshot(snap, s: AnalyticSteadyState, eq: FrontEquilibrium, params: Parameters,
                     center=(0.5, 0.5)) -> ComparisonReport:
    report = ComparisonReport()
    plateau = plateau_radius_numeric(snap.v, center)
    report.add("R1", plateau.mean_radius, s.R1)
    contour, est, level = measure_front(snap.u, s, params, center, R_guess=eq.R0)
    report.threshold_u2 = level
    report.add("R0", est.mean_radius, eq.R0)
    report.contours["u2"] = contour
    try:
        half = front_radius(contour_around(snap.u, 0.5, center))
        report.add("R0_level_0.5", half.mean_radius, eq.R0)
    except NoContourError:
        pass
    dev, table = c_profile_deviation(snap.c, s, center)
    report.rows.append(("c_profile_max_rel", dev, 0.0, dev))
    report.rows.append(("threshold_u2", level, level, 0.0))
    report.c_profile = table
    return report


def compare_to_analytic(run_dir, s: AnalyticSteadyState, eq: FrontEquilibrium,
                        params: Parameters, center=(0.5, 0.5)) -> ComparisonReport:
    """Compare the final snapshot of a finished run against the analytic state."""
    from .solver import read_manifest

    run_dir = Path(run_dir)
    try:
        manifest = read_manifest(run_dir / "manifest.txt")
        final = manifest["final_snapshot"]
    except (OSError, KeyError) as exc:
        raise ReportError(f"{run_dir}: no finished run ({exc})") from None
    if not final or not (run_dir / final).exists():
        raise ReportError(f"{run_dir}: final snapshot missing")
    return compare_snapshot(load_snapshot(run_dir / final), s, eq, params, center)
