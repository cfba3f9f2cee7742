"""Locating exceptional points: joint zeros of f and df/dk over (k, x1, x2).

The degeneracy conditions f = 0, df/dk = 0 form a square 4-real-dimensional
system in (Re k, Im k, x1, x2); it is regular exactly when d2f/dk2 != 0
(rank-one degeneracy), which is certified on the returned point.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import HigherOrderDegeneracyError, NoConvergenceError
from .jost import evaluate
from .potential import ParamPoint, PotentialSpec
from .zeros import SearchRegion, find_zeros

RESIDUAL_TOL = 1e-10
FKK_FLOOR = 1e-6
_MAX_ITER = 100
_MAX_HALVINGS = 8


@dataclass(frozen=True)
class ExceptionalPoint:
    """A certified rank-one degeneracy of the resonance doublet."""

    k_d: complex
    x_star: ParamPoint
    f_kk: complex
    residual: float

    @property
    def energy(self) -> complex:
        return self.k_d * self.k_d


@dataclass(frozen=True)
class ParamGrid:
    """Rectangular scan grid in the (x1, x2) control plane."""

    n1: int
    n2: int
    x1_lo: float
    x1_hi: float
    x2_lo: float
    x2_hi: float

    def __post_init__(self):
        if self.n1 < 1 or self.n2 < 1:
            raise ValueError("grid needs at least one point per axis")

    def points(self) -> list[tuple[int, int, ParamPoint]]:
        x1s = np.linspace(self.x1_lo, self.x1_hi, self.n1)
        x2s = np.linspace(self.x2_lo, self.x2_hi, self.n2)
        return [
            (i, j, ParamPoint(float(x1s[i]), float(x2s[j])))
            for i in range(self.n1)
            for j in range(self.n2)
        ]


def _scale(k: complex) -> float:
    return 1.0 + abs(k)


def _residual(v) -> float:
    return max(abs(v.f), abs(v.df_dk))


def locate(
    spec: PotentialSpec,
    seed_k: complex,
    seed_p: ParamPoint,
    tol: float = RESIDUAL_TOL,
    max_iter: int = _MAX_ITER,
) -> ExceptionalPoint:
    """Damped Newton for the degeneracy conditions from a (k, p) seed.

    Raises NoConvergenceError (with the iterate trace) on divergence and
    HigherOrderDegeneracyError when |d2f/dk2| falls below the rank-one floor.
    """
    k = complex(seed_k)
    x = np.array([seed_p.x1, seed_p.x2], dtype=float)
    trace = []
    v = evaluate(spec, ParamPoint(*x), k)
    res = _residual(v)
    for _ in range(max_iter):
        trace.append((k, tuple(x), res))
        if res < tol * _scale(k):
            break
        rhs = -np.array([v.f.real, v.f.imag, v.df_dk.real, v.df_dk.imag])
        jac = np.array(
            [
                [v.df_dk.real, -v.df_dk.imag, v.df_dx[0].real, v.df_dx[1].real],
                [v.df_dk.imag, v.df_dk.real, v.df_dx[0].imag, v.df_dx[1].imag],
                [v.d2f_dk2.real, -v.d2f_dk2.imag, v.d2f_dxdk[0].real, v.d2f_dxdk[1].real],
                [v.d2f_dk2.imag, v.d2f_dk2.real, v.d2f_dxdk[0].imag, v.d2f_dxdk[1].imag],
            ]
        )
        try:
            step = np.linalg.solve(jac, rhs)
        except np.linalg.LinAlgError as exc:
            raise NoConvergenceError(f"singular Jacobian at k={k}, x={x}", trace) from exc

        # step halving: the square-root geometry makes full steps overshoot
        lam = 1.0
        for _ in range(_MAX_HALVINGS + 1):
            k_new = k + complex(lam * step[0], lam * step[1])
            x_new = x + lam * step[2:]
            try:
                v_new = evaluate(spec, ParamPoint(*x_new), k_new)
                res_new = _residual(v_new)
            except Exception:
                res_new = math.inf
            if res_new < res:
                break
            lam *= 0.5
        else:
            raise NoConvergenceError(
                f"damping failed at k={k}, x={x} (residual {res:.3e})", trace
            )
        k, x, v, res = k_new, x_new, v_new, res_new
    else:
        raise NoConvergenceError(f"no convergence in {max_iter} iterations", trace)

    if abs(v.d2f_dk2) < FKK_FLOOR * _scale(k):
        raise HigherOrderDegeneracyError(
            f"|d2f/dk2| = {abs(v.d2f_dk2):.3e} below rank-one floor at k={k}"
        )
    if not (k.real > 0.0 and k.imag < 0.0):
        raise NoConvergenceError(f"converged to k={k} outside the fourth quadrant", trace)
    return ExceptionalPoint(k, ParamPoint(float(x[0]), float(x[1])), v.d2f_dk2, res)


def scan_seeds(
    spec: PotentialSpec,
    grid: ParamGrid,
    region: SearchRegion,
    gap_threshold: float | None = None,
    workers: int = 1,
) -> list[tuple[complex, ParamPoint]]:
    """Seed candidates for locate: local minima of the doublet gap on the grid.

    Grid cells where the region does not contain a clean doublet are skipped
    (counted as warnings).  Returns (seed_k, seed_p) pairs ordered by gap
    size; ``gap_threshold`` defaults to 15% of the region diagonal.
    """
    if gap_threshold is None:
        gap_threshold = 0.15 * math.hypot(region.width, region.height)

    pts = grid.points()

    def gap_at(entry):
        _, _, p = entry
        try:
            ps = find_zeros(spec, p, region)
        except Exception:
            return None
        if ps.double_zeros and not ps.zeros:
            return (0.0, ps.double_zeros[0])
        if len(ps.zeros) != 2 or ps.double_zeros:
            return None
        a, b = ps.zeros
        return (abs(a - b), 0.5 * (a + b))

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(gap_at, pts))
    else:
        results = [gap_at(entry) for entry in pts]

    gaps = np.full((grid.n1, grid.n2), np.nan)
    mids = {}
    skipped = 0
    for (i, j, p), r in zip(pts, results):
        if r is None:
            skipped += 1
            continue
        gaps[i, j] = r[0]
        mids[(i, j)] = (r[1], p)
    if skipped:
        import warnings

        warnings.warn(f"scan_seeds: {skipped} grid cells without an isolated doublet")

    seeds = []
    for (i, j), (mid, p) in mids.items():
        g = gaps[i, j]
        if g >= gap_threshold:
            continue
        neighbors = [
            gaps[i + di, j + dj]
            for di, dj in ((-1, 0), (1, 0), (0, -1), (0, 1))
            if 0 <= i + di < grid.n1 and 0 <= j + dj < grid.n2
        ]
        if all(not np.isfinite(n) or g <= n for n in neighbors):
            seeds.append((g, mid, p))
    seeds.sort(key=lambda t: t[0])
    return [(mid, p) for _, mid, p in seeds]
