"""Jost function of a piecewise-constant radial potential, with exact derivatives.

The s-wave regular solution phi (phi(0) = 0, phi'(0) = 1) is propagated
through the layers by 2x2 transfer matrices whose entries are entire
functions of z_j = k^2 - V_j, so no square-root branch choice can affect the
result.  The returned value is

    f(k) = exp(i k R) * (phi'(k, R) - i k phi(k, R)),    R = total radius,

normalized so that f = 1 for the free potential.  Its zeros on the positive
imaginary axis are bound states and its zeros in the fourth quadrant are the
resonance poles.  All derivative slots (d/dk up to third order, d/dx_i,
d^2/dx_i dk) are propagated analytically through the recursion, never by
finite differences.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import EvaluationDomainError, EvaluationRangeError
from .potential import ParamPoint, PotentialSpec, binding_sensitivities, instantiate

# exp overflow guard: |Im k| * R beyond this would overflow double precision
_MAX_EXPONENT = 650.0

# below this |z| * w^2 the closed forms lose digits; switch to Taylor series
_SERIES_THRESHOLD = 4.0
_SERIES_TERMS = 30


@dataclass(frozen=True)
class JostValue:
    """f and the partial derivatives needed by the unfolding extraction."""

    f: complex
    df_dk: complex
    d2f_dk2: complex
    d3f_dk3: complex
    df_dx: np.ndarray  # complex, shape (2,)
    d2f_dxdk: np.ndarray  # complex, shape (2,)


class _Jet:
    """Truncated jet (value, d/dk..d3/dk3, d/dx1, d/dx2, d2/dx1dk, d2/dx2dk)."""

    __slots__ = ("v", "k1", "k2", "k3", "x1", "x2", "x1k", "x2k")

    def __init__(self, v=0j, k1=0j, k2=0j, k3=0j, x1=0j, x2=0j, x1k=0j, x2k=0j):
        self.v = v
        self.k1 = k1
        self.k2 = k2
        self.k3 = k3
        self.x1 = x1
        self.x2 = x2
        self.x1k = x1k
        self.x2k = x2k

    def __add__(self, other):
        return _Jet(
            self.v + other.v,
            self.k1 + other.k1,
            self.k2 + other.k2,
            self.k3 + other.k3,
            self.x1 + other.x1,
            self.x2 + other.x2,
            self.x1k + other.x1k,
            self.x2k + other.x2k,
        )

    def __sub__(self, other):
        return _Jet(
            self.v - other.v,
            self.k1 - other.k1,
            self.k2 - other.k2,
            self.k3 - other.k3,
            self.x1 - other.x1,
            self.x2 - other.x2,
            self.x1k - other.x1k,
            self.x2k - other.x2k,
        )

    def __mul__(self, other):
        a, b = self, other
        return _Jet(
            a.v * b.v,
            a.k1 * b.v + a.v * b.k1,
            a.k2 * b.v + 2.0 * a.k1 * b.k1 + a.v * b.k2,
            a.k3 * b.v + 3.0 * a.k2 * b.k1 + 3.0 * a.k1 * b.k2 + a.v * b.k3,
            a.x1 * b.v + a.v * b.x1,
            a.x2 * b.v + a.v * b.x2,
            a.x1k * b.v + a.x1 * b.k1 + a.k1 * b.x1 + a.v * b.x1k,
            a.x2k * b.v + a.x2 * b.k1 + a.k1 * b.x2 + a.v * b.x2k,
        )

    def neg(self):
        return _Jet(-self.v, -self.k1, -self.k2, -self.k3, -self.x1, -self.x2, -self.x1k, -self.x2k)


def _jet_exp(a: _Jet) -> _Jet:
    e = cmath.exp(a.v)
    return _Jet(
        e,
        a.k1 * e,
        (a.k2 + a.k1 * a.k1) * e,
        (a.k3 + 3.0 * a.k1 * a.k2 + a.k1 ** 3) * e,
        a.x1 * e,
        a.x2 * e,
        (a.x1k + a.x1 * a.k1) * e,
        (a.x2k + a.x2 * a.k1) * e,
    )


def _cs_partials(z: complex, w: float, flip_branch: bool = False):
    """Partials of c = cos(w sqrt(z)) and s = sin(w sqrt(z))/sqrt(z).

    Returns (c0..c3, s0..s3, cw, sw, cwz, swz) where the numeric suffix is
    the order of the z-derivative and the w suffix denotes d/dw.  Both c and
    s are entire in z; ``flip_branch`` negates sqrt(z) and must not change
    anything (used as a self-test hook).
    """
    if abs(z) * w * w < _SERIES_THRESHOLD:
        # c_n = sum_m (-1)^m w^(2m) z^(m-n) m!/((m-n)! (2m)!), s_n likewise
        w2 = w * w
        c = [0j, 0j, 0j, 0j]
        s = [0j, 0j, 0j, 0j]
        coef_c = 1.0  # w^(2m) / (2m)!
        coef_s = w  # w^(2m+1) / (2m+1)!
        sign = 1.0
        zpows = [1.0 + 0j]
        for m in range(1, _SERIES_TERMS):
            zpows.append(zpows[-1] * z)
        for m in range(_SERIES_TERMS):
            fall = 1.0
            for n in range(4):
                if m >= n:
                    c[n] += sign * coef_c * fall * zpows[m - n]
                    s[n] += sign * coef_s * fall * zpows[m - n]
                fall *= m - n
            sign = -sign
            coef_c *= w2 / ((2 * m + 1) * (2 * m + 2))
            coef_s *= w2 / ((2 * m + 2) * (2 * m + 3))
        c0, c1, c2, c3 = c
        s0, s1, s2, s3 = s
    else:
        u = cmath.sqrt(z)
        if flip_branch:
            u = -u
        c0 = cmath.cos(u * w)
        s0 = cmath.sin(u * w) / u
        c1 = -0.5 * w * s0
        s1 = (w * c0 - s0) / (2.0 * z)
        c2 = -0.5 * w * s1
        s2 = (w * c1 - 3.0 * s1) / (2.0 * z)
        c3 = -0.5 * w * s2
        s3 = (w * c2 - 5.0 * s2) / (2.0 * z)

    cw = -z * s0
    sw = c0
    cwz = -(s0 + z * s1)
    swz = c1
    return c0, c1, c2, c3, s0, s1, s2, s3, cw, sw, cwz, swz


def _entry_jet(k, gz, g_z, g_zz, g_zzz, g_w, g_wz, zx1, wx1, zx2, wx2) -> _Jet:
    """Chain rule from (z, w) partials to (k, x1, x2) jet; z = k^2 - V."""
    return _Jet(
        gz,
        2.0 * k * g_z,
        4.0 * k * k * g_zz + 2.0 * g_z,
        8.0 * k ** 3 * g_zzz + 12.0 * k * g_zz,
        zx1 * g_z + wx1 * g_w,
        zx2 * g_z + wx2 * g_w,
        2.0 * k * (zx1 * g_zz + wx1 * g_wz),
        2.0 * k * (zx2 * g_zz + wx2 * g_wz),
    )


def evaluate(
    spec: PotentialSpec,
    p: ParamPoint,
    k: complex,
    _flip_branch_layer: int | None = None,
) -> JostValue:
    """Evaluate f(k) and all derivative slots at one point.

    Raises EvaluationDomainError for k = 0 and EvaluationRangeError when
    exp(|Im k| R) would overflow.
    """
    k = complex(k)
    if k == 0:
        raise EvaluationDomainError("the Jost function is not evaluated at k = 0")
    layers = instantiate(spec, p)
    radius = sum(layer.width for layer in layers)
    if abs(k.imag) * radius > _MAX_EXPONENT:
        raise EvaluationRangeError(
            f"|Im k| * R = {abs(k.imag) * radius:.3g} would overflow the exponential"
        )

    sens = binding_sensitivities(spec)
    phi = _Jet(0j)
    dphi = _Jet(1.0 + 0j)
    for j, layer in enumerate(layers):
        w = layer.width
        z = k * k - layer.height
        wx1, hx1, wx2, hx2 = sens[j]
        zx1, zx2 = -hx1, -hx2  # z = k^2 - V, dV/dx = height sensitivity
        c0, c1, c2, c3, s0, s1, s2, s3, cw, sw, cwz, swz = _cs_partials(
            z, w, flip_branch=(j == _flip_branch_layer)
        )
        c_jet = _entry_jet(k, c0, c1, c2, c3, cw, cwz, zx1, wx1, zx2, wx2)
        s_jet = _entry_jet(k, s0, s1, s2, s3, sw, swz, zx1, wx1, zx2, wx2)
        z_jet = _Jet(z, 2.0 * k, 2.0 + 0j, 0j, zx1, zx2, 0j, 0j)
        m21 = (z_jet * s_jet).neg()
        phi, dphi = c_jet * phi + s_jet * dphi, m21 * phi + c_jet * dphi

    # d(radius)/dx_i is 1 when x_i binds a width
    rx1 = sum(s[0] for s in sens)
    rx2 = sum(s[2] for s in sens)
    ikr = _Jet(1j * k * radius, 1j * radius, 0j, 0j, 1j * k * rx1, 1j * k * rx2, 1j * rx1, 1j * rx2)
    ik = _Jet(1j * k, 1j)
    f_jet = _jet_exp(ikr) * (dphi - ik * phi)

    value = JostValue(
        f=f_jet.v,
        df_dk=f_jet.k1,
        d2f_dk2=f_jet.k2,
        d3f_dk3=f_jet.k3,
        df_dx=np.array([f_jet.x1, f_jet.x2], dtype=complex),
        d2f_dxdk=np.array([f_jet.x1k, f_jet.x2k], dtype=complex),
    )
    if not _all_finite(value):
        raise EvaluationRangeError(f"non-finite Jost value at k = {k}")
    return value


def _all_finite(value: JostValue) -> bool:
    scalars = [value.f, value.df_dk, value.d2f_dk2, value.d3f_dk3]
    if not all(cmath.isfinite(v) for v in scalars):
        return False
    return bool(np.all(np.isfinite(value.df_dx)) and np.all(np.isfinite(value.d2f_dxdk)))


def symmetry_check(spec: PotentialSpec, p: ParamPoint, k: complex) -> float:
    """Residual |f(k) - conj(f(-conj(k)))| of the reality symmetry.

    Zero for real potentials: fourth-quadrant zeros pair with third-quadrant
    ones.
    """
    a = evaluate(spec, p, k).f
    b = evaluate(spec, p, -complex(k).conjugate()).f
    return abs(a - b.conjugate())
