"""Continuation of the doublet poles along parameter paths and closed loops.

Poles are followed by certified re-isolation at every step: a tracking box
around the previous pair must contain winding count exactly 2, and the new
pair is matched to the old one by nearest neighbour with a jump guard.  A
loop around the exceptional point must swap the two branches (square-root
monodromy); a loop that excludes it must return them unchanged.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ContinuationError, EpdoubletError, IsolationLostError
from .potential import PotentialSpec
from .unfolding import (
    OffsetVector,
    UnfoldingModel,
    exact_doublet,
    model_energy,
    model_k,
)
from .zeros import SearchRegion, find_zeros

# a step whose pole movement exceeds this multiple of the running median is
# treated as lost continuity
_JUMP_FACTOR = 5.0
# tracking box half-width as a multiple of the previous doublet gap
_TRACK_GAP_FACTOR = 10.0


@dataclass(frozen=True)
class PathSpec:
    """Straight path at fixed xi2_bar with xi1 sampled uniformly."""

    xi2_bar: float
    xi1_start: float
    xi1_end: float
    n_steps: int = 64

    def __post_init__(self):
        if self.n_steps < 2:
            raise ValueError("a path needs at least two steps")

    def sample(self) -> list[OffsetVector]:
        return [
            OffsetVector(float(x1), self.xi2_bar)
            for x1 in np.linspace(self.xi1_start, self.xi1_end, self.n_steps)
        ]

    def reversed(self) -> "PathSpec":
        return PathSpec(self.xi2_bar, self.xi1_end, self.xi1_start, self.n_steps)


@dataclass(frozen=True)
class TrajectoryRecord:
    """One continuation step: exact pole pair plus the model pair when valid."""

    xi: OffsetVector
    k_n: complex
    k_m: complex
    model_e_n: complex
    model_e_m: complex
    model_valid: bool

    @property
    def xi1(self) -> float:
        return self.xi.xi1

    @property
    def energy_n(self) -> complex:
        return self.k_n * self.k_n

    @property
    def energy_m(self) -> complex:
        return self.k_m * self.k_m


@dataclass(frozen=True)
class Trajectory:
    """Two continued pole branches along a sampled path."""

    records: tuple[TrajectoryRecord, ...]

    @property
    def swapped(self) -> bool:
        """True when the endpoint pair is the start pair with branches exchanged.

        Only meaningful for closed paths.
        """
        first, last = self.records[0], self.records[-1]
        direct = abs(last.k_n - first.k_n) + abs(last.k_m - first.k_m)
        crossed = abs(last.k_n - first.k_m) + abs(last.k_m - first.k_n)
        return crossed < direct


def _isolate_near(
    spec: PotentialSpec,
    m: UnfoldingModel,
    xi: OffsetVector,
    prev: tuple[complex, complex],
    refine_tol: float,
) -> tuple[complex, complex]:
    """Re-isolate the doublet in a box around the previous pole pair."""
    center = 0.5 * (prev[0] + prev[1])
    # floor by the model prediction: after passing the EP the previous gap is
    # zero but the new poles are already sqrt-far from it
    ma, mb = model_k(m, xi)
    predicted = max(abs(ma - center), abs(mb - center))
    hw = max(_TRACK_GAP_FACTOR * 0.5 * abs(prev[0] - prev[1]), 3.0 * predicted, 1e-7)
    p = m.param_at(xi)
    last_err: Exception | None = None
    for _ in range(5):
        region = SearchRegion(
            center.real - hw, center.real + hw, center.imag - hw, center.imag + hw,
            fourth_quadrant=False,
        )
        try:
            ps = find_zeros(spec, p, region, refine_tol)
        except EpdoubletError as exc:
            last_err = exc
            hw *= 1.6
            continue
        if ps.count == 2:
            if ps.double_zeros:
                return ps.double_zeros[0], ps.double_zeros[0]
            return ps.zeros[0], ps.zeros[1]
        last_err = IsolationLostError(
            f"tracking box holds {ps.count} zeros instead of 2", -1
        )
        if ps.count < 2:
            hw *= 1.6
        else:
            hw /= 1.5
    raise last_err if last_err else IsolationLostError("isolation failed", -1)


def _model_record(m: UnfoldingModel, xi: OffsetVector) -> tuple[complex, complex, bool]:
    valid = m.validity_radius is None or xi.norm <= m.validity_radius
    if not valid:
        return complex(math.nan, math.nan), complex(math.nan, math.nan), False
    ea, eb = model_energy(m, xi)
    if ea.real < eb.real or (ea.real == eb.real and ea.imag < eb.imag):
        ea, eb = eb, ea
    return ea, eb, True


def _trace_offsets(
    spec: PotentialSpec,
    m: UnfoldingModel,
    offsets: list[OffsetVector],
    refine_tol: float,
) -> Trajectory:
    records: list[TrajectoryRecord] = []
    prev: tuple[complex, complex] | None = None
    moves: list[float] = []
    param_moves: list[float] = []

    for step, xi in enumerate(offsets):
        try:
            if prev is None:
                pair = exact_doublet(spec, m, xi, refine_tol)
                # anchor the labelling to the model branches at the start point
                ma, mb = model_k(m, xi)
                if abs(pair[0] - ma) + abs(pair[1] - mb) > abs(pair[0] - mb) + abs(pair[1] - ma):
                    pair = (pair[1], pair[0])
            else:
                pair = _isolate_near(spec, m, xi, prev, refine_tol)
        except EpdoubletError as exc:
            raise IsolationLostError(
                f"could not isolate the doublet at step {step} (xi = {xi}): {exc}", step
            ) from exc

        if prev is not None:
            direct = max(abs(pair[0] - prev[0]), abs(pair[1] - prev[1]))
            crossed = max(abs(pair[0] - prev[1]), abs(pair[1] - prev[0]))
            if crossed < direct:
                pair = (pair[1], pair[0])
                direct = crossed
            prev_xi = offsets[step - 1]
            param_step = math.hypot(xi.xi1 - prev_xi.xi1, xi.xi2 - prev_xi.xi2)
            if moves:
                med = float(np.median(moves))
                allowed = _JUMP_FACTOR * max(med, refine_tol)
                if param_step <= 3.0 * float(np.median(param_moves)):
                    # uniform parameter stepping: near the EP the square-root
                    # geometry makes single steps much faster than the median,
                    # and the model predicts exactly that speed
                    ma0, mb0 = model_k(m, prev_xi)
                    ma1, mb1 = model_k(m, xi)
                    predicted = min(
                        max(abs(ma1 - ma0), abs(mb1 - mb0)),
                        max(abs(ma1 - mb0), abs(mb1 - ma0)),
                    )
                    allowed = max(allowed, _JUMP_FACTOR * predicted)
                if direct > allowed:
                    raise ContinuationError(
                        f"pole moved {direct:.3e} at step {step}, over "
                        f"{_JUMP_FACTOR}x the running median {med:.3e}; "
                        "use smaller steps"
                    )
            moves.append(direct)
            param_moves.append(param_step)

        me_n, me_m, valid = _model_record(m, xi)
        records.append(TrajectoryRecord(xi, pair[0], pair[1], me_n, me_m, valid))
        prev = pair

    return Trajectory(tuple(records))


def trace(
    spec: PotentialSpec,
    m: UnfoldingModel,
    path: PathSpec,
    refine_tol: float = 1e-12,
) -> Trajectory:
    """Continue the doublet along a straight fixed-xi2 path."""
    return _trace_offsets(spec, m, path.sample(), refine_tol)


def loop(
    spec: PotentialSpec,
    m: UnfoldingModel,
    radius: float,
    steps: int = 128,
    center: OffsetVector | None = None,
    turns: int = 1,
    refine_tol: float = 1e-12,
) -> Trajectory:
    """Trace ``turns`` circuits of a parameter-space circle (default: around the EP).

    A single turn enclosing the EP swaps the branches; excluding it, or
    making two turns, restores them.
    """
    if radius <= 0.0:
        raise ValueError("loop radius must be positive")
    if steps < 8:
        raise ValueError("a loop needs at least 8 steps")
    if turns < 1:
        raise ValueError("turns must be >= 1")
    c = center or OffsetVector(0.0, 0.0)
    offsets = [
        OffsetVector(
            c.xi1 + radius * math.cos(2.0 * math.pi * j / steps),
            c.xi2 + radius * math.sin(2.0 * math.pi * j / steps),
        )
        for j in range(turns * steps + 1)
    ]
    return _trace_offsets(spec, m, offsets, refine_tol)
