"""Real solution pair of the auxiliary equation ``a'' + 2 g2(tau) a = 0``.

The pair ``(chi1, chi2)`` has unit Wronskian ``chi1 chi2' - chi2 chi1' = 1``.
Everything downstream (transfer matrices, packet widths, ladder operators) is
assembled from it and from the complex combination ``xi = (chi1 + i chi2)/sqrt(2)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy.integrate import DOP853, OdeSolution

from .errors import DomainError, IntegrationError, RangeError, ValidationError
from .systems import SystemKind, SystemSpec

WRONSKIAN_TOL = 1e-12
# steps shorter than this fraction of the span signal a singular coefficient
MIN_STEP_FRACTION = 1e-9
SQRT_HALF = math.sqrt(0.5)


@dataclass(frozen=True)
class BasisInitialConditions:
    chi1_0: float = 1.0
    chi1dot_0: float = 0.0
    chi2_0: float = 0.0
    chi2dot_0: float = 1.0

    def __post_init__(self):
        w = self.chi1_0 * self.chi2dot_0 - self.chi2_0 * self.chi1dot_0
        if not abs(w - 1.0) <= WRONSKIAN_TOL:
            raise ValidationError(f"basis initial conditions must have unit Wronskian, got {w!r}")

    @property
    def xi0(self) -> complex:
        return SQRT_HALF * complex(self.chi1_0, self.chi2_0)

    @property
    def xidot0(self) -> complex:
        return SQRT_HALF * complex(self.chi1dot_0, self.chi2dot_0)

    def as_tuple(self):
        return (self.chi1_0, self.chi1dot_0, self.chi2_0, self.chi2dot_0)


@dataclass(frozen=True)
class BasisSample:
    """All auxiliary functions at one time (or an array of times)."""

    tau: float
    chi1: float
    chi2: float
    chi1dot: float
    chi2dot: float

    @property
    def xi(self):
        return SQRT_HALF * (self.chi1 + 1j * self.chi2)

    @property
    def xidot(self):
        return SQRT_HALF * (self.chi1dot + 1j * self.chi2dot)

    @property
    def phi1(self):
        return self.xi**2

    @property
    def phi2(self):
        return np.conj(self.xi) ** 2

    @property
    def phi3(self):
        return self.chi1**2 + self.chi2**2


class AuxiliaryBasis:
    """Immutable evaluator for a unit-Wronskian solution pair on ``[0, tau_max]``.

    Build one with :func:`analytic_basis` or :func:`numeric_basis`.
    """

    def __init__(self, source: str, ics: BasisInitialConditions, time_domain, evaluator: Callable,
                 g2: Optional[Callable] = None, system: Optional[SystemSpec] = None):
        self.source = source
        self.ics = ics
        self.time_domain = (float(time_domain[0]), float(time_domain[1]))
        self._evaluator = evaluator
        self.g2 = g2
        self.system = system
        self.max_wronskian_drift = 0.0

    def contains(self, tau) -> bool:
        t = np.asarray(tau, dtype=float)
        lo, hi = self.time_domain
        return bool(np.all((t >= lo) & (t <= hi)))

    def __call__(self, tau) -> BasisSample:
        return evaluate(self, tau)

    def __repr__(self):
        return f"AuxiliaryBasis(source={self.source!r}, domain={self.time_domain})"


def _ho_like(omega):
    rw = math.sqrt(omega)

    def ev(t):
        c, s = np.cos(omega * t), np.sin(omega * t)
        return c / rw, -rw * s, s / rw, rw * c

    return ev


def _fp_like(t):
    one = np.ones_like(t)
    return one, 0.0 * one, t + 0.0, one


def _ro_like(Omega):
    rw = math.sqrt(Omega)

    def ev(t):
        c, s = np.cosh(Omega * t), np.sinh(Omega * t)
        return c / rw, rw * s, s / rw, rw * c

    return ev


def analytic_basis(system: SystemSpec) -> AuxiliaryBasis:
    """Closed-form basis of a catalog system.

    HO and DHO share ``cos(w t)/sqrt(w), sin(w t)/sqrt(w)``; FP and LP share
    ``1, t``; RO uses ``cosh(W t)/sqrt(W), sinh(W t)/sqrt(W)``.
    """
    kind = system.kind
    if kind in (SystemKind.HO, SystemKind.DHO):
        if not (system.omega and system.omega > 0):
            raise DomainError(f"omega must be positive, got {system.omega!r}")
        ev = _ho_like(system.omega)
    elif kind in (SystemKind.FP, SystemKind.LP):
        ev = _fp_like
    elif kind is SystemKind.RO:
        if not (system.Omega and system.Omega > 0):
            raise DomainError(f"Omega must be positive, got {system.Omega!r}")
        ev = _ro_like(system.Omega)
    else:
        raise ValidationError("no closed-form basis for a custom system; use numeric_basis")
    ics = BasisInitialConditions(*(float(v) for v in ev(np.float64(0.0))))
    return AuxiliaryBasis("analytic", ics, (0.0, math.inf), ev, g2=system.g2, system=system)


def catalog_ics(system: SystemSpec) -> BasisInitialConditions:
    """Initial values of the closed-form basis (e.g. ``(1/sqrt(w), 0, 0, sqrt(w))`` for HO)."""
    return analytic_basis(system).ics


def numeric_basis(g2, ics: Optional[BasisInitialConditions] = None, tau_max: float = 10.0,
                  tol: float = 1e-10) -> AuxiliaryBasis:
    """Integrate ``a'' = -2 g2(tau) a`` for both basis members.

    Uses the embedded 8(5,3) Dormand-Prince pair with its dense output so the
    basis can be evaluated anywhere in ``[0, tau_max]``.  The local tolerance
    is ``tol / 100`` so that the global error and the Wronskian drift stay
    within ``tol``-scale bounds on moderate domains.
    """
    if ics is None:
        ics = BasisInitialConditions()
    elif not isinstance(ics, BasisInitialConditions):
        ics = BasisInitialConditions(*ics)
    if not tol > 0:
        raise ValidationError(f"tol must be positive, got {tol!r}")
    if not tau_max > 0:
        raise ValidationError(f"tau_max must be positive, got {tau_max!r}")

    def rhs(t, y):
        k = -2.0 * g2(t)
        return [y[1], k * y[0], y[3], k * y[2]]

    y0 = [ics.chi1_0, ics.chi1dot_0, ics.chi2_0, ics.chi2dot_0]
    step_tol = tol * 1e-2
    h_min = MIN_STEP_FRACTION * float(tau_max)
    try:
        solver = DOP853(rhs, 0.0, y0, float(tau_max), rtol=step_tol, atol=step_tol)
        ts, ys, pieces = [0.0], [np.array(y0, dtype=float)], []
        while solver.status == "running":
            message = solver.step()
            if solver.status == "failed":
                raise IntegrationError(float(solver.t), message or "step rejected")
            if not np.all(np.isfinite(solver.y)):
                raise IntegrationError(float(solver.t), "solution is no longer finite")
            pieces.append(solver.dense_output())
            ts.append(solver.t)
            ys.append(solver.y.copy())
            if solver.status == "running" and solver.step_size < h_min:
                raise IntegrationError(float(solver.t), f"step size {solver.step_size:.3g} underflow")
    except (ValueError, ArithmeticError) as exc:
        raise IntegrationError(float("nan"), str(exc)) from exc
    dense = OdeSolution(ts, pieces)
    Y = np.array(ys).T

    def ev(t):
        y = dense(t)
        return y[0], y[1], y[2], y[3]

    basis = AuxiliaryBasis("numeric", ics, (0.0, float(tau_max)), ev, g2=g2)
    w = Y[0] * Y[3] - Y[2] * Y[1]
    basis.max_wronskian_drift = float(np.max(np.abs(w - 1.0)))
    return basis


def basis_for(system: SystemSpec, tau_max: Optional[float] = None, tol: float = 1e-10) -> AuxiliaryBasis:
    """Closed form for catalog systems, numerical integration for custom ones."""
    if system.is_catalog:
        return analytic_basis(system)
    if tau_max is None:
        raise ValidationError("a custom system needs tau_max to build its numeric basis")
    ics = BasisInitialConditions(*system.ics) if system.ics else None
    basis = numeric_basis(system.g2, ics, tau_max, tol)
    basis.system = system
    return basis


def evaluate(basis: AuxiliaryBasis, tau) -> BasisSample:
    """Sample the basis at ``tau`` (scalar or array)."""
    if not basis.contains(tau):
        bad = np.asarray(tau, dtype=float)
        lo, hi = basis.time_domain
        offender = bad if bad.ndim == 0 else bad[(bad < lo) | (bad > hi) | np.isnan(bad)][0]
        raise RangeError(float(offender), basis.time_domain)
    scalar = np.ndim(tau) == 0
    t = np.asarray(tau, dtype=float)
    c1, c1d, c2, c2d = basis._evaluator(t)
    if scalar:
        return BasisSample(float(t), float(c1), float(c2), float(c1d), float(c2d))
    return BasisSample(t, np.asarray(c1), np.asarray(c2), np.asarray(c1d), np.asarray(c2d))


def wronskian(sample: BasisSample):
    """``chi1 chi2' - chi2 chi1'``; equal to 1 for a valid basis."""
    return sample.chi1 * sample.chi2dot - sample.chi2 * sample.chi1dot


def wronskian_scale(sample: BasisSample):
    """Magnitude of the two Wronskian terms, the scale of its rounding error."""
    return np.abs(sample.chi1 * sample.chi2dot) + np.abs(sample.chi2 * sample.chi1dot)
