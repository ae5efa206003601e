"""Expectation values, squeeze-parameter conversions and uncertainties.

Three equivalent ways to get ``<x>(tau)`` and ``<p>(tau)``:

* from the initial phase point ``(x0, p0)`` through the transfer matrix,
* from ``(|alpha|, delta)`` in the (alpha, z) representation, where the
  squeeze ``z`` does not enter,
* from ``(|alpha|, delta, r, theta)`` in the (z, alpha) representation.

Squeezing convention: the packet-width function is
``xi_r = xi cosh r - conj(xi) exp(i theta) sinh r``, so ``var_x = |xi_r|^2``,
``var_p = |xi_r'|^2`` and ``cov_xp = Re(xi_r conj(xi_r'))``.  With this
convention a free particle at ``tau = 0`` has ``var_x = (cosh 2r - cos(theta) sinh 2r)/2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .aux_solutions import AuxiliaryBasis, evaluate
from .driving import DrivingIntegrals
from .errors import ValidationError
from .systems import SystemKind, SystemSpec

SQRT2 = math.sqrt(2.0)
DEGENERATE_ALPHA = 1e-14


class InitialPhasePoint(NamedTuple):
    x0: float
    p0: float


def wrap_phase(angle):
    """Reduce an angle to the interval (-pi, pi]."""
    out = math.pi - np.mod(math.pi - np.asarray(angle, dtype=float), 2 * math.pi)
    return float(out) if np.ndim(out) == 0 else out


def _rz(z):
    if isinstance(z, complex):
        return abs(z), math.atan2(z.imag, z.real)
    r, theta = z
    r = float(r)
    if r < 0:
        raise ValidationError(f"squeeze magnitude r must be non-negative, got {r!r}")
    return r, float(theta)


@dataclass(frozen=True)
class SqueezeParameters:
    """Coherent amplitude ``alpha = |alpha| e^{i delta}`` and squeeze ``z = r e^{i theta}``."""

    alpha_abs: float
    delta: float
    r: float = 0.0
    theta: float = 0.0
    rep: str = "alpha-z"
    degenerate: bool = False

    def __post_init__(self):
        if self.rep not in ("alpha-z", "z-alpha"):
            raise ValidationError(f"rep must be 'alpha-z' or 'z-alpha', got {self.rep!r}")
        if not self.alpha_abs >= 0:
            raise ValidationError(f"|alpha| must be non-negative, got {self.alpha_abs!r}")
        if not self.r >= 0:
            raise ValidationError(f"r must be non-negative, got {self.r!r}")
        object.__setattr__(self, "delta", wrap_phase(self.delta))
        object.__setattr__(self, "theta", wrap_phase(self.theta))

    @property
    def s(self) -> float:
        """Width scale factor ``e^r``."""
        return math.exp(self.r)

    @property
    def alpha(self) -> complex:
        return self.alpha_abs * complex(math.cos(self.delta), math.sin(self.delta))

    @property
    def z(self) -> complex:
        return self.r * complex(math.cos(self.theta), math.sin(self.theta))


@dataclass(frozen=True)
class Symplectic2:
    m11: float
    m12: float
    m21: float
    m22: float

    @property
    def det(self):
        return self.m11 * self.m22 - self.m12 * self.m21

    def as_array(self) -> np.ndarray:
        return np.array([[self.m11, self.m12], [self.m21, self.m22]])

    def apply(self, x, p):
        return self.m11 * x + self.m12 * p, self.m21 * x + self.m22 * p


@dataclass(frozen=True)
class Covariance:
    var_x: float
    var_p: float
    cov_xp: float

    @property
    def determinant(self):
        """``var_x var_p - cov_xp^2``; exactly 1/4 for a pure Gaussian."""
        return self.var_x * self.var_p - self.cov_xp**2

    def as_array(self) -> np.ndarray:
        return np.array([[self.var_x, self.cov_xp], [self.cov_xp, self.var_p]])


def transfer_matrix(basis: AuxiliaryBasis, tau) -> Symplectic2:
    """Linear map taking ``(x0, p0)`` to the homogeneous part of ``(<x>, <p>)``."""
    b = evaluate(basis, tau)
    o = basis.ics
    return Symplectic2(
        b.chi1 * o.chi2dot_0 - b.chi2 * o.chi1dot_0,
        b.chi2 * o.chi1_0 - b.chi1 * o.chi2_0,
        b.chi1dot * o.chi2dot_0 - b.chi2dot * o.chi1dot_0,
        b.chi2dot * o.chi1_0 - b.chi1dot * o.chi2_0,
    )


def _drift(b, driving: DrivingIntegrals, tau):
    c1, c2 = driving.c1(tau), driving.c2(tau)
    return b.chi1 * c2 - b.chi2 * c1, b.chi1dot * c2 - b.chi2dot * c1


def expect_xp_from_initial(basis: AuxiliaryBasis, driving: DrivingIntegrals, point, tau):
    """``<x>``, ``<p>`` at ``tau`` for a packet starting at ``(x0, p0)``."""
    x0, p0 = float(point[0]), float(point[1])
    m = transfer_matrix(basis, tau)
    b = evaluate(basis, tau)
    dx, dp = _drift(b, driving, tau)
    x, p = m.apply(x0, p0)
    return x + dx, p + dp


def _beta(point, basis: AuxiliaryBasis, driving: DrivingIntegrals):
    """Real and imaginary parts of ``i(p0 xi0 - x0 xi0') + i C0``, times sqrt 2."""
    x0, p0 = float(point[0]), float(point[1])
    o = basis.ics
    u = o.chi2dot_0 * x0 - o.chi2_0 * p0 - driving.C2_0
    v = o.chi1_0 * p0 - o.chi1dot_0 * x0 + driving.C1_0
    return u, v


def params_alpha_z(point, basis: AuxiliaryBasis, driving: DrivingIntegrals, r: float = 0.0,
                   theta: float = 0.0) -> SqueezeParameters:
    """``(|alpha|, delta)`` of the (alpha, z) representation from ``(x0, p0)``.

    The squeeze ``(r, theta)`` is free in this representation and is passed
    through unchanged.
    """
    u, v = _beta(point, basis, driving)
    alpha_abs = math.sqrt(0.5 * (u * u + v * v))
    if alpha_abs <= DEGENERATE_ALPHA:
        return SqueezeParameters(0.0, 0.0, r, theta, "alpha-z", degenerate=True)
    return SqueezeParameters(alpha_abs, math.atan2(v, u), r, theta, "alpha-z")


def solve_alpha_given_z(point, z, basis: AuxiliaryBasis, driving: DrivingIntegrals) -> SqueezeParameters:
    """``(|alpha|, delta)`` of the (z, alpha) representation for a given squeeze.

    Solves the unimodular 2x2 system for ``(|alpha| cos delta, |alpha| sin delta)``.
    """
    r, theta = _rz(z)
    u, v = _beta(point, basis, driving)
    bu, bv = u / SQRT2, v / SQRT2
    ch, sh = math.cosh(r), math.sinh(r)
    ct, st = math.cos(theta), math.sin(theta)
    a11, a12 = ch - ct * sh, -st * sh
    a21, a22 = -st * sh, ch + ct * sh
    # the determinant is cosh^2 - sinh^2 = 1
    a = a22 * bu - a12 * bv
    b = -a21 * bu + a11 * bv
    alpha_abs = math.hypot(a, b)
    if alpha_abs <= DEGENERATE_ALPHA:
        return SqueezeParameters(0.0, 0.0, r, theta, "z-alpha", degenerate=True)
    return SqueezeParameters(alpha_abs, math.atan2(b, a), r, theta, "z-alpha")


def _with_alpha(ca, sa, basis, driving, tau):
    b = evaluate(basis, tau)
    C1, C2 = driving.C1(tau), driving.C2(tau)
    x = SQRT2 * (b.chi1 * ca + b.chi2 * sa) + b.chi1 * C2 - b.chi2 * C1
    p = SQRT2 * (b.chi1dot * ca + b.chi2dot * sa) + b.chi1dot * C2 - b.chi2dot * C1
    return x, p


def expect_xp_alpha_z(params: SqueezeParameters, basis: AuxiliaryBasis, driving: DrivingIntegrals, tau):
    """``<x>``, ``<p>`` in the (alpha, z) representation; independent of ``z``."""
    if params.rep != "alpha-z":
        raise ValidationError("expect_xp_alpha_z needs parameters in the alpha-z representation")
    a = params.alpha_abs
    return _with_alpha(a * math.cos(params.delta), a * math.sin(params.delta), basis, driving, tau)


def expect_xp_z_alpha(params: SqueezeParameters, basis: AuxiliaryBasis, driving: DrivingIntegrals, tau):
    """``<x>``, ``<p>`` in the (z, alpha) representation, mixing alpha and z hyperbolically."""
    if params.rep != "z-alpha":
        raise ValidationError("expect_xp_z_alpha needs parameters in the z-alpha representation")
    a, d, r, th = params.alpha_abs, params.delta, params.r, params.theta
    ch, sh = math.cosh(r), math.sinh(r)
    ca = a * (math.cos(d) * ch - math.cos(th - d) * sh)
    sa = a * (math.sin(d) * ch - math.sin(th - d) * sh)
    return _with_alpha(ca, sa, basis, driving, tau)


def point_from_params(params: SqueezeParameters, basis: AuxiliaryBasis, driving: DrivingIntegrals):
    """Initial phase point ``(x0, p0)`` described by a parameter set."""
    if params.rep == "alpha-z":
        x, p = expect_xp_alpha_z(params, basis, driving, 0.0)
    else:
        x, p = expect_xp_z_alpha(params, basis, driving, 0.0)
    return InitialPhasePoint(float(x), float(p))


def squeezed_width_function(basis: AuxiliaryBasis, z, tau):
    """``(xi_r, xi_r')`` at ``tau``."""
    r, theta = _rz(z)
    b = evaluate(basis, tau)
    rot = complex(math.cos(theta), math.sin(theta)) * math.sinh(r)
    ch = math.cosh(r)
    xi_r = b.xi * ch - np.conj(b.xi) * rot
    xidot_r = b.xidot * ch - np.conj(b.xidot) * rot
    return xi_r, xidot_r


def covariance(basis: AuxiliaryBasis, z, tau) -> Covariance:
    """Second moments of the squeezed packet; they do not depend on alpha."""
    xi_r, xidot_r = squeezed_width_function(basis, z, tau)
    var_x = np.abs(xi_r) ** 2
    var_p = np.abs(xidot_r) ** 2
    cov = np.real(xi_r * np.conj(xidot_r))
    if np.ndim(var_x) == 0:
        return Covariance(float(var_x), float(var_p), float(cov))
    return Covariance(var_x, var_p, cov)


def covariance_propagated(basis: AuxiliaryBasis, z, tau) -> Covariance:
    """Same moments computed as ``M(tau) Sigma(0) M(tau)^T``."""
    s0 = covariance(basis, z, 0.0)
    m = transfer_matrix(basis, tau)
    a, b, c, d = m.m11, m.m12, m.m21, m.m22
    vx, vp, cv = s0.var_x, s0.var_p, s0.cov_xp
    var_x = a * a * vx + 2 * a * b * cv + b * b * vp
    var_p = c * c * vx + 2 * c * d * cv + d * d * vp
    cov = a * c * vx + (a * d + b * c) * cv + b * d * vp
    return Covariance(var_x, var_p, cov)


def uncertainty_product(cov: Covariance):
    """``var_x * var_p``; never below 1/4."""
    return cov.var_x * cov.var_p


# -- closed forms quoted per system, kept as regression targets -------------------------


def reference_variances(system: SystemSpec, z, tau, uncorrected: bool = False):
    """Per-system closed forms of ``(var_x, var_p)``.

    HO/DHO: ``(cosh 2r -/+ cos(2 w tau - theta) sinh 2r)`` with the harmonic
    prefactors.  The commonly quoted oscillator pair is written for a squeeze
    phase shifted by pi relative to the convention used here and carries the
    wrong sign in the momentum variance; ``uncorrected=True`` returns that
    pair as quoted (in its own phase) for regression.
    FP/LP: the free-particle forms, which need no correction.
    """
    r, theta = _rz(z)
    tau = np.asarray(tau, dtype=float)
    C, S = math.cosh(2 * r), math.sinh(2 * r)
    kind = system.kind
    if kind in (SystemKind.HO, SystemKind.DHO):
        w = system.omega
        theta_quoted = theta + math.pi
        c = np.cos(2 * w * tau - theta_quoted)
        var_x = (C + c * S) / (2 * w)
        var_p = w / 2 * (C + c * S) if uncorrected else w / 2 * (C - c * S)
    elif kind in (SystemKind.FP, SystemKind.LP):
        var_x = 0.5 * (1 + tau**2) * C - 0.5 * ((1 - tau**2) * math.cos(theta) + 2 * tau * math.sin(theta)) * S
        var_p = 0.5 * (C + math.cos(theta) * S) + 0.0 * tau
    else:
        raise NotImplementedError(f"no closed-form variances for {kind.value}")
    if var_x.ndim == 0:
        return float(var_x), float(var_p)
    return var_x, var_p


def reference_uncertainty(system: SystemSpec, z, tau, uncorrected: bool = False):
    """Closed-form uncertainty products quoted for each catalog system.

    * HO, DHO: ``(1 + sin^2(2 w tau - theta) sinh^2 2r)/4``
    * FP, LP: the free-particle product.  The usual statement drops the
      overall 1/4 on the ``sinh^2 2r`` bracket; it is restored unless
      ``uncorrected``.
    * RO: returned as quoted.  It disagrees with the propagated covariance
      for ``r > 0`` and can fall below 1/4, so no corrected form is offered.
    """
    r, theta = _rz(z)
    t = np.asarray(tau, dtype=float)
    kind = system.kind
    S2 = math.sinh(2 * r)
    if kind in (SystemKind.HO, SystemKind.DHO):
        w = system.omega
        out = 0.25 * (1 + np.sin(2 * w * t - theta) ** 2 * S2**2)
    elif kind in (SystemKind.FP, SystemKind.LP):
        head = 0.25 * (1 + t**2 + (t**2 * math.cos(theta) - t * math.sin(theta)) * math.sinh(4 * r))
        bracket = (0.5 + 1.5 * t**2 - 0.5 * (1 - t**2) * math.cos(2 * theta) - t * math.sin(2 * theta)) * S2**2
        out = head + (bracket if uncorrected else 0.25 * bracket)
    elif kind is SystemKind.RO:
        W = system.Omega
        sh, ch = np.sinh(2 * W * t), np.cosh(2 * W * t)
        out = (0.25 * (1 + sh**2) - 0.25 * sh**2 * math.sin(theta) * math.sinh(4 * r)
               + 0.125 * (1 + 3 * sh**2 + ch**2 * math.cos(2 * theta)) * S2**2)
    else:
        raise NotImplementedError("no closed-form uncertainty product for custom systems")
    return float(out) if np.ndim(out) == 0 else out
