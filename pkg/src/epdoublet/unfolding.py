"""Local two-parameter model of the doublet poles around an exceptional point.

The implicit-function-theorem formulas turn one Jost evaluation at the EP
into the gradients of the squared pole gap and of the pole centroid; the
energy-plane versions define the real vectors R and I whose dot products
with the parameter offset control every crossing/anticrossing observable.
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateUnfoldingError, EpdoubletError, RefinementError
from .exceptional import ExceptionalPoint
from .jost import evaluate
from .potential import ParamPoint, PotentialSpec
from .zeros import SearchRegion, find_zeros

_INV2SQRT2 = 1.0 / (2.0 * math.sqrt(2.0))


@dataclass(frozen=True)
class OffsetVector:
    """Parameter offset (xi1, xi2) relative to the exceptional point."""

    xi1: float
    xi2: float

    def __post_init__(self):
        if not (math.isfinite(self.xi1) and math.isfinite(self.xi2)):
            raise ValueError(f"offset must be finite, got {self}")

    @property
    def norm(self) -> float:
        return math.hypot(self.xi1, self.xi2)

    def as_array(self) -> np.ndarray:
        return np.array([self.xi1, self.xi2])


@dataclass
class UnfoldingModel:
    """Extracted unfolding coefficients and branch-cut geometry at one EP.

    c1: gradient of (k_n - k_{n+1})^2; d1: gradient of the pole centroid
    (1/2)(k_n + k_{n+1}); R, I: real/imaginary parts of the energy version
    4 k_d^2 c1; e_shift: gradient of the smooth energy centroid shift;
    cut_dir: unit vector along which the real-part branch cut extends
    (imaginary-part cut along -cut_dir).  validity_radius is filled in by
    ``validity_radius`` and is None until then.
    """

    ep: ExceptionalPoint
    c1: np.ndarray  # complex (2,)
    d1: np.ndarray  # complex (2,)
    R: np.ndarray  # float (2,)
    I: np.ndarray  # float (2,)
    e_shift: np.ndarray  # complex (2,)
    cut_dir: np.ndarray  # float (2,)
    validity_radius: float | None = None

    def offset_of(self, p: ParamPoint) -> OffsetVector:
        return OffsetVector(p.x1 - self.ep.x_star.x1, p.x2 - self.ep.x_star.x2)

    def param_at(self, xi: OffsetVector) -> ParamPoint:
        return ParamPoint(self.ep.x_star.x1 + xi.xi1, self.ep.x_star.x2 + xi.xi2)

    def to_dict(self) -> dict:
        c = lambda z: [z.real, z.imag]
        return {
            "exceptional_point": {
                "k_d": c(self.ep.k_d),
                "x_star": [self.ep.x_star.x1, self.ep.x_star.x2],
                "f_kk": c(self.ep.f_kk),
                "residual": self.ep.residual,
            },
            "unfolding": {
                "c1": [c(v) for v in self.c1],
                "d1": [c(v) for v in self.d1],
                "R": list(self.R),
                "I": list(self.I),
                "e_shift": [c(v) for v in self.e_shift],
                "cut_dir": list(self.cut_dir),
                "validity_radius": self.validity_radius,
            },
        }

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_dict(cls, d: dict) -> "UnfoldingModel":
        z = lambda pair: complex(pair[0], pair[1])
        epd = d["exceptional_point"]
        u = d["unfolding"]
        ep = ExceptionalPoint(
            z(epd["k_d"]),
            ParamPoint(epd["x_star"][0], epd["x_star"][1]),
            z(epd["f_kk"]),
            epd["residual"],
        )
        return cls(
            ep=ep,
            c1=np.array([z(v) for v in u["c1"]]),
            d1=np.array([z(v) for v in u["d1"]]),
            R=np.array(u["R"], dtype=float),
            I=np.array(u["I"], dtype=float),
            e_shift=np.array([z(v) for v in u["e_shift"]]),
            cut_dir=np.array(u["cut_dir"], dtype=float),
            validity_radius=u.get("validity_radius"),
        )

    @classmethod
    def from_json(cls, text: str) -> "UnfoldingModel":
        return cls.from_dict(json.loads(text))


def branch_sqrt(F: complex) -> complex:
    """Square root with arg F taken in [0, 2pi): the cut lies on the positive real axis."""
    F = complex(F)
    if F == 0:
        return 0j
    a = cmath.phase(F)
    if a < 0.0:
        a += 2.0 * math.pi
    return math.sqrt(abs(F)) * cmath.exp(0.5j * a)


def extract(spec: PotentialSpec, ep: ExceptionalPoint) -> UnfoldingModel:
    """Unfolding coefficients from one Jost evaluation at the EP."""
    v = evaluate(spec, ep.x_star, ep.k_d)
    f_kk = v.d2f_dk2
    if abs(f_kk) < 1e-12:
        raise DegenerateUnfoldingError("second k-derivative vanishes at the EP")

    c1 = -8.0 * v.df_dx / f_kk
    d1 = -(v.d2f_dxdk - (v.d3f_dk3 / (3.0 * f_kk)) * v.df_dx) / f_kk

    big_c1 = 4.0 * ep.k_d * ep.k_d * c1  # chain rule E = k^2 applied to the gap-squared gradient
    r_vec = big_c1.real.copy()
    i_vec = big_c1.imag.copy()
    e_shift = 2.0 * ep.k_d * d1

    nr, ni = np.linalg.norm(r_vec), np.linalg.norm(i_vec)
    scale = max(nr, ni)
    if scale < 1e-12:
        raise DegenerateUnfoldingError("R and I both vanish: degenerate unfolding")
    det = r_vec[0] * i_vec[1] - r_vec[1] * i_vec[0]
    if abs(det) < 1e-10 * nr * ni:
        raise DegenerateUnfoldingError("R and I are parallel: non-generic exceptional point")

    cut = np.array([i_vec[1], -i_vec[0]]) / ni
    if float(r_vec @ cut) > 0.0:
        cut = -cut

    return UnfoldingModel(ep=ep, c1=c1, d1=d1, R=r_vec, I=i_vec, e_shift=e_shift, cut_dir=cut)


def model_k(m: UnfoldingModel, xi: OffsetVector) -> tuple[complex, complex]:
    """Approximate wave-number pole pair at offset xi (branch n carries +sqrt)."""
    x = xi.as_array()
    shift = m.ep.k_d + complex(m.d1 @ x)
    s = branch_sqrt(0.25 * complex(m.c1 @ x))
    return shift + s, shift - s


def model_energy(m: UnfoldingModel, xi: OffsetVector) -> tuple[complex, complex]:
    """Approximate complex-energy pole pair at offset xi.

    Branch n is the one with the larger real part; the sign of the imaginary
    split follows sign(Re eps) * sign(Im eps) = sign(I . xi).
    """
    x = xi.as_array()
    rx = float(m.R @ x)
    ix = float(m.I @ x)
    hyp = math.hypot(rx, ix)
    re_eps = _INV2SQRT2 * math.sqrt(max(hyp + rx, 0.0))
    im_eps = _INV2SQRT2 * math.sqrt(max(hyp - rx, 0.0))
    sigma_i = 1.0 if ix >= 0.0 else -1.0
    base = m.ep.energy + complex(m.e_shift @ x)
    eps = complex(re_eps, sigma_i * im_eps)
    return base + eps, base - eps


def exact_doublet(
    spec: PotentialSpec,
    m: UnfoldingModel,
    xi: OffsetVector,
    refine_tol: float = 1e-12,
) -> tuple[complex, complex]:
    """Exact doublet poles at offset xi, certified by winding = 2.

    The search rectangle is predicted by the model and grown until it
    isolates exactly two zeros (a double zero is returned twice).
    """
    ka, kb = model_k(m, xi)
    center = 0.5 * (ka + kb)
    hw = max(3.0 * abs(ka - kb), 12.0 * abs(center - m.ep.k_d), 1e-5)
    last_err: Exception | None = None
    for _ in range(6):
        region = SearchRegion(
            center.real - hw, center.real + hw, center.imag - hw, center.imag + hw,
            fourth_quadrant=False,
        )
        try:
            ps = find_zeros(spec, m.param_at(xi), region, refine_tol)
        except EpdoubletError as exc:
            last_err = exc
            hw *= 1.7
            continue
        if ps.count == 2:
            if ps.double_zeros:
                return ps.double_zeros[0], ps.double_zeros[0]
            return ps.zeros[0], ps.zeros[1]
        if ps.count < 2:
            hw *= 1.7
        else:
            hw /= 1.5
        last_err = RefinementError(f"found {ps.count} zeros while isolating the doublet")
    raise RefinementError(f"could not isolate the doublet at xi = {xi}: {last_err}")


def validity_radius(
    spec: PotentialSpec,
    m: UnfoldingModel,
    n_rays: int = 16,
    rho_start: float = 0.1,
    rel_gap_err: float = 1e-2,
    rho_floor: float = 1e-8,
) -> float:
    """Largest dyadic radius where the model poles sit within 1% of the exact gap.

    The criterion is evaluated on a fan of rays (offset from the axes so no
    ray is aligned with the branch cut by accident); the result is stored on
    the model.
    """
    rho = rho_start
    while rho >= rho_floor:
        if _rays_ok(spec, m, rho, n_rays, rel_gap_err):
            m.validity_radius = rho
            return rho
        rho *= 0.5
    raise DegenerateUnfoldingError(
        f"validity radius collapsed below {rho_floor}: extraction suspect"
    )


def _rays_ok(spec, m, rho, n_rays, rel_gap_err) -> bool:
    for j in range(n_rays):
        theta = 2.0 * math.pi * (j + 0.37) / n_rays
        xi = OffsetVector(rho * math.cos(theta), rho * math.sin(theta))
        try:
            exact = exact_doublet(spec, m, xi)
        except EpdoubletError:
            return False
        model = model_k(m, xi)
        gap = abs(exact[0] - exact[1])
        if gap == 0.0:
            return False
        if _pair_error(model, exact) > rel_gap_err * gap:
            return False
    return True


def _pair_error(pair_a, pair_b) -> float:
    direct = max(abs(pair_a[0] - pair_b[0]), abs(pair_a[1] - pair_b[1]))
    crossed = max(abs(pair_a[0] - pair_b[1]), abs(pair_a[1] - pair_b[0]))
    return min(direct, crossed)
