"""Section observables and crossing/anticrossing classification.

A section is a straight parameter path at fixed xi2 with xi1 varying.  Along
it the doublet shows one of three behaviours at the point where I . xi
vanishes, decided by the sign of R . xi there: the real energies cross while
the widths anticross, both degenerate at once (the path hits the EP), or the
real energies anticross while the widths cross.  If I . xi has no zero in
range, nothing crosses.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import ValidityRangeError
from .potential import PotentialSpec
from .unfolding import OffsetVector, UnfoldingModel, exact_doublet, model_energy

# below this fraction of ||R|| |xi_c| the R-projection is treated as exactly
# zero (knife-edge joint degeneracy)
_KNIFE_EDGE_REL = 1e-8


class CrossingClass(enum.Enum):
    ENERGY_CROSS_WIDTH_ANTICROSS = "EnergyCross_WidthAnticross"
    JOINT_DEGENERACY = "JointDegeneracy"
    ENERGY_ANTICROSS_WIDTH_CROSS = "EnergyAnticross_WidthCross"
    NO_CROSSING = "NoCrossing"


@dataclass(frozen=True)
class SectionSample:
    """Doublet observables at one point of a section."""

    xi1: float
    xi: OffsetVector
    energy_n: complex
    energy_m: complex
    model_energy_n: complex
    model_energy_m: complex
    dot_r: float
    dot_i: float

    @property
    def delta_e(self) -> float:
        """Real-energy difference, branch n minus branch n+1."""
        return self.energy_n.real - self.energy_m.real

    @property
    def delta_gamma(self) -> float:
        """Width difference Gamma_{n+1} - Gamma_n (widths are -2 Im E)."""
        return 2.0 * (self.energy_n.imag - self.energy_m.imag)


@dataclass(frozen=True)
class SectionResult:
    """Observables along one fixed-xi2 path plus its classification."""

    xi2_bar: float
    samples: tuple[SectionSample, ...]
    crossing_class: CrossingClass
    xi1_c: float | None
    dot_r_c: float | None


def _branch_sorted(pair: tuple[complex, complex]) -> tuple[complex, complex]:
    """Order the model energy pair so branch n has the larger real part."""
    a, b = pair
    if a.real < b.real or (a.real == b.real and a.imag < b.imag):
        a, b = b, a
    return a, b


def _match_exact(exact: tuple[complex, complex], model: tuple[complex, complex]):
    """Assign exact energies to branches by proximity to the model pair."""
    a, b = exact
    if abs(a - model[0]) + abs(b - model[1]) <= abs(a - model[1]) + abs(b - model[0]):
        return a, b
    return b, a


def section(
    spec: PotentialSpec,
    m: UnfoldingModel,
    xi2_bar: float,
    xi1_lo: float,
    xi1_hi: float,
    steps: int = 41,
    refine_tol: float = 1e-12,
) -> SectionResult:
    """Sample the doublet observables along xi1 in [xi1_lo, xi1_hi] at fixed xi2.

    Endpoints must lie inside the validity radius when one is set (the
    offending endpoint indices are attached to the error).  Exact poles come
    from certified winding-2 isolation at each sample; branch n is the one
    with the larger model real energy.
    """
    if steps < 2:
        raise ValueError("a section needs at least 2 steps")
    if xi1_hi <= xi1_lo:
        raise ValueError("xi1 range must have xi1_hi > xi1_lo")
    if m.validity_radius is not None:
        bad = [
            i
            for i, x1 in enumerate((xi1_lo, xi1_hi))
            if math.hypot(x1, xi2_bar) > m.validity_radius
        ]
        if bad:
            raise ValidityRangeError(
                f"section endpoints outside validity radius {m.validity_radius}", bad
            )

    samples = []
    for x1 in np.linspace(xi1_lo, xi1_hi, steps):
        xi = OffsetVector(float(x1), xi2_bar)
        x = xi.as_array()
        mod = _branch_sorted(model_energy(m, xi))
        if xi.norm == 0.0:
            en = em = m.ep.energy
        else:
            ka, kb = exact_doublet(spec, m, xi, refine_tol)
            en, em = _match_exact((ka * ka, kb * kb), mod)
        samples.append(
            SectionSample(
                xi1=float(x1),
                xi=xi,
                energy_n=en,
                energy_m=em,
                model_energy_n=mod[0],
                model_energy_m=mod[1],
                dot_r=float(m.R @ x),
                dot_i=float(m.I @ x),
            )
        )

    cls, xi1_c, dot_r_c = classify(m, xi2_bar, xi1_lo, xi1_hi)
    return SectionResult(xi2_bar, tuple(samples), cls, xi1_c, dot_r_c)


def classify(
    m: UnfoldingModel, xi2_bar: float, xi1_lo: float, xi1_hi: float
) -> tuple[CrossingClass, float | None, float | None]:
    """Three-way crossing rule at the zero of I . xi on the section.

    The model projection dot_I(xi1) = I1 xi1 + I2 xi2_bar is linear, so its
    zero is explicit; a zero outside the range means NoCrossing.  Returns
    (class, xi1 of the zero or None, dot_R there or None).
    """
    i1, i2 = float(m.I[0]), float(m.I[1])
    scale_i = abs(i1) * max(abs(xi1_lo), abs(xi1_hi)) + abs(i2) * abs(xi2_bar)
    if abs(i1) * max(abs(xi1_lo), abs(xi1_hi), 1.0) <= 1e-15 * max(scale_i, 1e-300):
        # dot_I does not depend on xi1: either never zero or zero everywhere
        if abs(i2 * xi2_bar) > 1e-15 * max(scale_i, 1e-300):
            return CrossingClass.NO_CROSSING, None, None
        xi1_c = min(max(0.0, xi1_lo), xi1_hi)
        warnings.warn("dot_I vanishes along the whole section; using the point nearest the EP")
    else:
        xi1_c = -i2 * xi2_bar / i1
    if not (xi1_lo <= xi1_c <= xi1_hi):
        return CrossingClass.NO_CROSSING, None, None

    xi_c = OffsetVector(xi1_c, xi2_bar)
    dot_r = float(m.R @ xi_c.as_array())
    scale = float(np.linalg.norm(m.R)) * xi_c.norm
    if abs(dot_r) <= _KNIFE_EDGE_REL * scale or scale == 0.0:
        return CrossingClass.JOINT_DEGENERACY, xi1_c, dot_r
    if dot_r < 0.0:
        return CrossingClass.ENERGY_CROSS_WIDTH_ANTICROSS, xi1_c, dot_r
    return CrossingClass.ENERGY_ANTICROSS_WIDTH_CROSS, xi1_c, dot_r
