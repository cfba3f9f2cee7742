"""Certified zero finding for the Jost function in a rectangular region.

The winding number of f around the rectangle counts the enclosed zeros
(argument principle).  Recursive subdivision isolates single zeros which are
then Newton-polished with the analytic derivative; a minimal cell that still
has winding two is reported as a double-zero certificate, which is exactly
the exceptional-point situation.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

from .errors import BoundaryZeroError, RefinementError, WindingError
from .jost import evaluate
from .potential import ParamPoint, PotentialSpec

_DILATION = 1.01  # one retry with the rectangle grown by 1%
_MIN_CELL_SIDE = 1e-6  # winding-2 cells smaller than this certify a double zero
_WINDING_TOL = 1e-3
_NEWTON_MAX_ITER = 50
_MAX_BOUNDARY_POINTS = 40000


@dataclass(frozen=True)
class SearchRegion:
    """Axis-aligned rectangle in the complex k-plane.

    By default the region must lie strictly inside the fourth quadrant
    (resonance territory).  Pass ``fourth_quadrant=False`` for generic
    self-test rectangles (e.g. bound-state counting in the upper half plane).
    """

    re_min: float
    re_max: float
    im_min: float
    im_max: float
    fourth_quadrant: bool = True

    def __post_init__(self):
        if not (self.re_min < self.re_max and self.im_min < self.im_max):
            raise ValueError(f"empty region {self}")
        if self.fourth_quadrant and not (self.re_min > 0.0 and self.im_max < 0.0):
            raise ValueError(f"region {self} is not strictly inside the fourth quadrant")

    @property
    def center(self) -> complex:
        return complex(0.5 * (self.re_min + self.re_max), 0.5 * (self.im_min + self.im_max))

    @property
    def width(self) -> float:
        return self.re_max - self.re_min

    @property
    def height(self) -> float:
        return self.im_max - self.im_min

    def contains(self, k: complex, margin: float = 0.0) -> bool:
        return (
            self.re_min - margin <= k.real <= self.re_max + margin
            and self.im_min - margin <= k.imag <= self.im_max + margin
        )

    def dilated(self, factor: float) -> "SearchRegion":
        c = self.center
        hw = 0.5 * self.width * factor
        hh = 0.5 * self.height * factor
        return SearchRegion(
            c.real - hw, c.real + hw, c.imag - hh, c.imag + hh, fourth_quadrant=False
        )

    def split(self, fx: float = 0.5, fy: float = 0.5) -> list["SearchRegion"]:
        xm = self.re_min + fx * self.width
        ym = self.im_min + fy * self.height
        return [
            SearchRegion(self.re_min, xm, self.im_min, ym, fourth_quadrant=False),
            SearchRegion(xm, self.re_max, self.im_min, ym, fourth_quadrant=False),
            SearchRegion(self.re_min, xm, ym, self.im_max, fourth_quadrant=False),
            SearchRegion(xm, self.re_max, ym, self.im_max, fourth_quadrant=False),
        ]


@dataclass
class PoleSet:
    """Refined zeros plus the argument-principle certificate for a region."""

    zeros: list[complex]
    winding: int
    refine_tol: float
    double_zeros: list[complex] = field(default_factory=list)

    @property
    def count(self) -> int:
        return len(self.zeros) + 2 * len(self.double_zeros)


def _boundary_points(region: SearchRegion, t: float) -> complex:
    """Map t in [0, 4) to the rectangle boundary, counterclockwise."""
    t = t % 4.0
    if t < 1.0:
        return complex(region.re_min + t * region.width, region.im_min)
    if t < 2.0:
        return complex(region.re_max, region.im_min + (t - 1.0) * region.height)
    if t < 3.0:
        return complex(region.re_max - (t - 2.0) * region.width, region.im_max)
    return complex(region.re_min, region.im_max - (t - 3.0) * region.height)


def _winding_once(spec, p, region, n_init=64) -> int:
    ts = [4.0 * i / n_init for i in range(n_init)]
    ts.append(4.0)
    fs = [evaluate(spec, p, _boundary_points(region, t)).f for t in ts]

    scale = max(abs(f) for f in fs)
    if scale == 0.0 or min(abs(f) for f in fs) < 1e-13 * scale:
        raise BoundaryZeroError(f"|f| vanishes on the boundary of {region}")

    # refine intervals until every phase increment is well under pi
    i = 0
    while i < len(ts) - 1:
        ratio = fs[i + 1] / fs[i] if fs[i] != 0 else 0j
        df = cmath.phase(ratio) if ratio != 0 else math.pi
        if abs(df) > 0.8 or abs(ratio) > 4.0 or abs(ratio) < 0.25:
            if len(ts) > _MAX_BOUNDARY_POINTS or ts[i + 1] - ts[i] < 1e-12:
                # persistent phase jumps at vanishing scale: a zero is (nearly)
                # on the contour; let the caller dilate or re-split
                raise BoundaryZeroError(f"boundary refinement exhausted on {region}")
            tm = 0.5 * (ts[i] + ts[i + 1])
            fm = evaluate(spec, p, _boundary_points(region, tm)).f
            if abs(fm) < 1e-13 * scale:
                raise BoundaryZeroError(f"|f| vanishes on the boundary of {region}")
            ts.insert(i + 1, tm)
            fs.insert(i + 1, fm)
        else:
            i += 1

    total = 0.0
    for i in range(len(ts) - 1):
        total += cmath.phase(fs[i + 1] / fs[i])
    w = total / (2.0 * math.pi)
    if abs(w - round(w)) > _WINDING_TOL:
        raise WindingError(f"non-integer winding {w:.6f} on {region}")
    return int(round(w))


def count_zeros(spec: PotentialSpec, p: ParamPoint, region: SearchRegion) -> int:
    """Number of zeros of f inside the region, by the argument principle.

    If a zero sits on the boundary the rectangle is dilated by 1% once and
    the count retried; a second failure propagates.
    """
    try:
        return _winding_once(spec, p, region)
    except BoundaryZeroError:
        return _winding_once(spec, p, region.dilated(_DILATION))


def _count_cell(spec, p, region) -> tuple[int, bool]:
    """Like count_zeros, but reports whether the dilated retry was used."""
    try:
        return _winding_once(spec, p, region), False
    except BoundaryZeroError:
        return _winding_once(spec, p, region.dilated(_DILATION)), True


def _newton_refine(spec, p, k0: complex, refine_tol: float) -> complex:
    k = k0
    for _ in range(_NEWTON_MAX_ITER):
        v = evaluate(spec, p, k)
        tol = refine_tol * max(1.0, abs(v.df_dk) * abs(k))
        if abs(v.f) < tol:
            return k
        if v.df_dk == 0:
            raise RefinementError(f"vanishing derivative at {k} (double zero?)")
        step = v.f / v.df_dk
        # damping: halve on residual increase
        for _ in range(8):
            v_new = evaluate(spec, p, k - step)
            if abs(v_new.f) < abs(v.f):
                break
            step *= 0.5
        k = k - step
    v = evaluate(spec, p, k)
    if abs(v.f) < refine_tol * max(1.0, abs(v.df_dk) * abs(k)):
        return k
    raise RefinementError(f"Newton did not converge from {k0} (last iterate {k})")


def _refine_double(spec, p, k0: complex) -> complex | None:
    """Polish a double zero by Newton on f' (f'' is available analytically)."""
    k = k0
    for _ in range(_NEWTON_MAX_ITER):
        v = evaluate(spec, p, k)
        if abs(v.df_dk) < 1e-12 * max(1.0, abs(v.d2f_dk2) * abs(k)):
            return k
        if v.d2f_dk2 == 0:
            return None
        k = k - v.df_dk / v.d2f_dk2
    return None


def _try_double_certificate(spec, p, region, refine_tol, out_double) -> bool:
    """Certify a double zero: f' vanishes and a minimal box has winding two."""
    kc = _refine_double(spec, p, region.center)
    if kc is None or not region.contains(kc, margin=0.5 * max(region.width, region.height)):
        return False
    half = 0.4 * _MIN_CELL_SIDE
    box = SearchRegion(
        kc.real - half, kc.real + half, kc.imag - half, kc.imag + half, fourth_quadrant=False
    )
    try:
        w_box = count_zeros(spec, p, box)
    except (BoundaryZeroError, WindingError):
        return False
    if w_box != 2:
        return False
    v = evaluate(spec, p, kc)
    if abs(v.f) > max(refine_tol, 0.5 * abs(v.d2f_dk2) * half * half + refine_tol):
        return False
    out_double.append(kc)
    return True


def _find_in_cell(spec, p, region, refine_tol, depth, out_zeros, out_double):
    w, dilated = _count_cell(spec, p, region)
    if w == 0:
        return
    if w == 1:
        try:
            k = _newton_refine(spec, p, region.center, refine_tol)
        except RefinementError:
            k = None
        # accept only zeros the winding actually counted: strictly inside the
        # cell, or just past the edge when the count came from the 1% dilation
        margin = 0.6 * (_DILATION - 1.0) * max(region.width, region.height) if dilated else 0.0
        if k is not None and region.contains(k, margin=margin):
            out_zeros.append(k)
            return
        # Newton wandered off; localize further
    if w == 2 and max(region.width, region.height) < 1e-3:
        # near-degenerate pair: test the double-zero hypothesis before
        # grinding the subdivision through the quadratically flat region
        if _try_double_certificate(spec, p, region, refine_tol, out_double):
            return
        if max(region.width, region.height) < _MIN_CELL_SIDE:
            raise RefinementError(f"winding-2 minimal cell {region} failed certification")
    elif w > 2 and max(region.width, region.height) < _MIN_CELL_SIDE:
        raise RefinementError(f"winding {w} in a minimal cell {region}: multiplicity > 2")
    if depth > 60:
        raise RefinementError(f"subdivision depth exhausted at {region}")
    for fx, fy in ((0.5, 0.5), (0.53, 0.47), (0.47, 0.53), (0.41, 0.59), (0.59, 0.41)):
        nz, nd = len(out_zeros), len(out_double)
        try:
            for sub in region.split(fx, fy):
                _find_in_cell(spec, p, sub, refine_tol, depth + 1, out_zeros, out_double)
            return
        except BoundaryZeroError:
            # zero on the chosen split line; jitter the split fractions
            del out_zeros[nz:]
            del out_double[nd:]
            continue
    raise RefinementError(f"could not subdivide {region} without hitting a zero")


def find_zeros(
    spec: PotentialSpec,
    p: ParamPoint,
    region: SearchRegion,
    refine_tol: float = 1e-12,
) -> PoleSet:
    """All zeros of f in the region, refined to |f| < refine_tol * local scale.

    Near-coincident pairs inside a minimal winding-2 cell are returned as a
    double-zero certificate instead of two separate zeros.
    """
    total = count_zeros(spec, p, region)
    zeros: list[complex] = []
    doubles: list[complex] = []
    if total > 0:
        _find_in_cell(spec, p, region, refine_tol, 0, zeros, doubles)
    zeros, doubles = _resolve_clusters(spec, p, zeros, doubles, refine_tol)

    ps = PoleSet(sorted(zeros, key=lambda z: (z.real, z.imag)), total, refine_tol, doubles)
    if ps.count != total:
        raise RefinementError(
            f"refined {ps.count} zeros but winding is {total} on {region}"
        )
    return ps


def _resolve_clusters(spec, p, zeros, doubles, refine_tol):
    """Collapse duplicate refinements; near-coincident pairs become doubles.

    Newton basins overlap across sibling cells near a double zero, so the
    raw list can contain several loose copies of the same point.  Points are
    clustered within the minimal cell side; a multi-point cluster is kept as
    one simple zero unless the double-zero certificate succeeds.
    """
    clusters: list[list[complex]] = []
    for k in zeros:
        for cl in clusters:
            if abs(k - cl[0]) < _MIN_CELL_SIDE:
                cl.append(k)
                break
        else:
            clusters.append([k])

    # boundary dilation can hand the same double zero to several sibling cells
    out_doubles: list[complex] = []
    for d in doubles:
        if all(abs(d - other) >= _MIN_CELL_SIDE for other in out_doubles):
            out_doubles.append(d)

    kept: list[complex] = []
    for cl in clusters:
        if len(cl) == 1:
            kept.append(cl[0])
            continue
        center = sum(cl) / len(cl)
        hw = max(abs(k - center) for k in cl) + 2.0 * _MIN_CELL_SIDE
        probe = SearchRegion(
            center.real - hw, center.real + hw, center.imag - hw, center.imag + hw,
            fourth_quadrant=False,
        )
        if not _try_double_certificate(spec, p, probe, refine_tol, out_doubles):
            kept.append(_newton_refine(spec, p, center, refine_tol))
    kept = [k for k in kept if all(abs(k - d) >= _MIN_CELL_SIDE for d in out_doubles)]
    return kept, out_doubles
