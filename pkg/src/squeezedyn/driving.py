"""Driving integrals ``c_nu(tau) = int_0^tau chi_nu(rho) g1(rho) d rho`` and constants.

The full driving functions are ``C_nu(tau) = c_nu(tau) + C_nu^0``; the complex
combination is ``C = (C_1 + i C_2) / sqrt(2)``.
"""

from __future__ import annotations

import math
import threading
import warnings
from typing import Callable, Optional

import numpy as np
from scipy.integrate import IntegrationWarning, quad

from .aux_solutions import SQRT_HALF, AuxiliaryBasis
from .errors import ConstantsNotDefinedError, QuadratureError, RangeError
from .expr import as_coefficient
from .systems import SystemKind, SystemSpec

PANEL = 1.0


class DrivingIntegrals:
    """``c1``, ``c2`` as functions of time plus the integration constants.

    ``C1_0``/``C2_0`` are ``None`` for a custom system whose constants were not
    supplied; anything that needs them then raises
    :class:`ConstantsNotDefinedError`.
    """

    def __init__(self, c1: Callable, c2: Callable, C1_0: Optional[float], C2_0: Optional[float],
                 method: str = "closed-form"):
        self.c1 = c1
        self.c2 = c2
        self._C1_0 = C1_0
        self._C2_0 = C2_0
        self.method = method

    @property
    def constants_defined(self) -> bool:
        return self._C1_0 is not None and self._C2_0 is not None

    def _need_constants(self):
        if not self.constants_defined:
            raise ConstantsNotDefinedError(
                "integration constants are not prescribed for custom systems; "
                "supply them explicitly (constants=(C1_0, C2_0))")

    @property
    def C1_0(self) -> float:
        self._need_constants()
        return self._C1_0

    @property
    def C2_0(self) -> float:
        self._need_constants()
        return self._C2_0

    def C1(self, tau):
        return self.c1(tau) + self.C1_0

    def C2(self, tau):
        return self.c2(tau) + self.C2_0

    def C(self, tau):
        """Complex driving function ``(C1 + i C2)/sqrt(2)``."""
        return SQRT_HALF * (self.C1(tau) + 1j * self.C2(tau))

    def __repr__(self):
        return f"DrivingIntegrals(method={self.method!r}, C1_0={self._C1_0!r}, C2_0={self._C2_0!r})"


def integration_constants(system: SystemSpec):
    """``(C1_0, C2_0)`` for a catalog system.

    HO, FP and RO carry no drive and get ``(0, 0)``.  LP gets ``(0, g_o)`` and
    DHO ``(0, -g_o / omega^1.5)``, with ``g_o = g1(0)``.
    """
    kind = system.kind
    if kind in (SystemKind.HO, SystemKind.FP, SystemKind.RO):
        return (0.0, 0.0)
    if kind is SystemKind.LP:
        return (0.0, float(system.drive0))
    if kind is SystemKind.DHO:
        return (0.0, -float(system.drive0) / system.omega**1.5)
    if system.constants is not None:
        return tuple(system.constants)
    raise ConstantsNotDefinedError(
        "integration constants are only prescribed for the catalog systems; "
        "give a custom system explicit constants")


def _scalar_or_array(fn):
    def wrapped(tau):
        if np.ndim(tau) == 0:
            return fn(float(tau))
        t = np.asarray(tau, dtype=float)
        return np.array([fn(float(v)) for v in t.ravel()]).reshape(t.shape)

    return wrapped


def _out(v):
    return float(v) if np.ndim(v) == 0 else v


def _closed_form(basis: AuxiliaryBasis, g: float):
    kind = basis.system.kind
    if kind in (SystemKind.FP, SystemKind.LP):
        return (lambda t: _out(g * np.asarray(t, dtype=float)),
                lambda t: _out(0.5 * g * np.asarray(t, dtype=float) ** 2))
    if kind in (SystemKind.HO, SystemKind.DHO):
        w = basis.system.omega
        a = g / w**1.5
        return (lambda t: _out(a * np.sin(w * t)), lambda t: _out(a * (1.0 - np.cos(w * t))))
    W = basis.system.Omega
    a = g / W**1.5
    return (lambda t: _out(a * np.sinh(W * t)), lambda t: _out(a * (np.cosh(W * t) - 1.0)))


class _PanelQuadrature:
    """Cumulative quadrature of ``f`` from 0, caching whole panels of width PANEL."""

    def __init__(self, f, tol):
        self.f = f
        self.tol = tol
        self._cum = [0.0]
        self._lock = threading.Lock()

    def _quad(self, a, b):
        if a == b:
            return 0.0
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", IntegrationWarning)
            out = quad(self.f, a, b, epsabs=self.tol, epsrel=self.tol, limit=200, full_output=1)
        value, abserr = out[0], out[1]
        if len(out) > 3:
            target = max(self.tol, self.tol * abs(value))
            if not abserr <= 10 * target:
                raise QuadratureError((a, b), out[3].splitlines()[0] if out[3] else "")
        return value

    def __call__(self, tau: float) -> float:
        k = int(math.floor(tau / PANEL))
        if len(self._cum) <= k:
            with self._lock:
                while len(self._cum) <= k:
                    n = len(self._cum)
                    self._cum.append(self._cum[-1] + self._quad((n - 1) * PANEL, n * PANEL))
        return self._cum[k] + self._quad(k * PANEL, tau)


def driving_integrals(basis: AuxiliaryBasis, g1, system: Optional[SystemSpec] = None, tol: float = 1e-10,
                      constants=None) -> DrivingIntegrals:
    """Driving integrals of ``g1`` against ``basis``.

    A constant ``g1`` on a closed-form basis is integrated exactly; anything
    else goes through adaptive Gauss-Kronrod quadrature on the basis.
    ``constants`` overrides the catalog integration constants.
    """
    g1 = as_coefficient(g1)
    if constants is not None:
        C1_0, C2_0 = (float(c) for c in constants)
    elif system is not None and (system.is_catalog or system.constants is not None):
        C1_0, C2_0 = integration_constants(system)
    elif g1.is_constant and g1.constant_value == 0.0:
        C1_0, C2_0 = 0.0, 0.0
    else:
        C1_0 = C2_0 = None

    if g1.is_constant and g1.constant_value == 0.0:
        zero = lambda t: _out(np.zeros_like(np.asarray(t, dtype=float)))
        return DrivingIntegrals(zero, zero, C1_0, C2_0, "zero")
    if g1.is_constant and basis.source == "analytic" and basis.system is not None:
        c1, c2 = _closed_form(basis, g1.constant_value)
        return DrivingIntegrals(c1, c2, C1_0, C2_0, "closed-form")

    evaluator = basis._evaluator
    lo, hi = basis.time_domain

    def check(t):
        if not lo <= t <= hi:
            raise RangeError(t, basis.time_domain)
        return t

    q1 = _PanelQuadrature(lambda r: float(evaluator(np.float64(r))[0]) * g1(r), tol)
    q2 = _PanelQuadrature(lambda r: float(evaluator(np.float64(r))[2]) * g1(r), tol)
    c1 = _scalar_or_array(lambda t: q1(check(t)))
    c2 = _scalar_or_array(lambda t: q2(check(t)))
    return DrivingIntegrals(c1, c2, C1_0, C2_0, "quadrature")


def driving_for(system: SystemSpec, basis: AuxiliaryBasis, tol: float = 1e-10) -> DrivingIntegrals:
    """Driving integrals of the system's own ``g1``."""
    return driving_integrals(basis, system.g1, system, tol)
