"""Catalog of quadratic-potential systems.

Every system is described by its coefficient triple ``(g2, g1, g0)`` in the
potential ``V(x, tau) = g2(tau) x^2 + g1(tau) x + g0(tau)`` (units hbar = m = 1):

====  ===================  =======================
kind  (g2, g1, g0)         parameters
====  ===================  =======================
HO    (omega^2/2, 0, 0)    omega > 0
FP    (0, 0, 0)            none
LP    (0, g(tau), 0)       kappa (g = kappa/2) or drive
DHO   (omega^2/2, g, 0)    omega > 0, kappa or drive
RO    (-Omega^2/2, 0, 0)   Omega > 0
====  ===================  =======================

A ``custom`` system takes arbitrary coefficient expressions.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from .errors import DomainError, ValidationError
from .expr import CoefficientFn, as_coefficient


class SystemKind(str, enum.Enum):
    HO = "HO"
    FP = "FP"
    LP = "LP"
    DHO = "DHO"
    RO = "RO"
    CUSTOM = "custom"

    @classmethod
    def coerce(cls, kind) -> "SystemKind":
        if isinstance(kind, cls):
            return kind
        key = str(kind).strip()
        for member in cls:
            if member.value.lower() == key.lower():
                return member
        raise ValidationError(f"unknown system kind {kind!r}; expected one of {[m.value for m in cls]}")


CATALOG = (SystemKind.HO, SystemKind.FP, SystemKind.LP, SystemKind.DHO, SystemKind.RO)

_ALLOWED = {
    SystemKind.HO: {"omega"},
    SystemKind.FP: set(),
    SystemKind.LP: {"kappa", "drive"},
    SystemKind.DHO: {"omega", "kappa", "drive"},
    SystemKind.RO: {"Omega"},
    SystemKind.CUSTOM: {"g2", "g1", "g0", "constants", "ics"},
}


@dataclass(frozen=True)
class SystemSpec:
    """One system of the catalog, or a custom one.

    ``drive0`` caches ``g1(0)``, the value the integration constants of the
    driven systems are built from.  ``constants`` and ``ics`` are only used by
    custom systems: user-supplied ``(C1_0, C2_0)`` and basis initial values
    ``(chi1, chi1dot, chi2, chi2dot)``.
    """

    kind: SystemKind
    g2: CoefficientFn
    g1: CoefficientFn
    g0: CoefficientFn
    omega: Optional[float] = None
    Omega: Optional[float] = None
    kappa: Optional[float] = None
    drive0: float = 0.0
    constants: Optional[tuple] = None
    ics: Optional[tuple] = None
    label: str = field(default="", compare=False)

    @property
    def is_catalog(self) -> bool:
        return self.kind is not SystemKind.CUSTOM

    @property
    def has_constant_drive(self) -> bool:
        return self.g1.is_constant

    def potential(self, x, tau):
        """V(x, tau) evaluated on an array of positions."""
        return self.g2(tau) * x**2 + self.g1(tau) * x + self.g0(tau)

    def force(self, x, tau):
        """-dV/dx, the classical force."""
        return -2.0 * self.g2(tau) * x - self.g1(tau)

    def __str__(self):
        return self.label or self.kind.value


def _positive(name, value):
    if value is None:
        raise ValidationError(f"missing parameter {name!r}")
    value = float(value)
    if not math.isfinite(value) or value <= 0:
        raise DomainError(f"{name} must be positive and finite, got {value!r}")
    return value


def _drive(params):
    kappa, drive = params.get("kappa"), params.get("drive")
    if kappa is not None and drive is not None:
        raise ValidationError("give either 'kappa' or 'drive', not both")
    if kappa is None and drive is None:
        raise ValidationError("missing parameter 'kappa' (or an explicit 'drive' expression)")
    if kappa is not None:
        kappa = float(kappa)
        if not math.isfinite(kappa):
            raise DomainError(f"kappa must be finite, got {kappa!r}")
        return kappa, CoefficientFn.constant(kappa / 2.0)
    g = as_coefficient(drive)
    kappa = 2.0 * g.constant_value if g.is_constant else None
    return kappa, g


def make_system(kind, **params) -> SystemSpec:
    """Build a :class:`SystemSpec`.

    >>> make_system("HO", omega=2.0).g2(0.0)
    2.0
    """
    kind = SystemKind.coerce(kind)
    given = {k for k, v in params.items() if v is not None}
    extra = given - _ALLOWED[kind]
    if extra:
        raise ValidationError(f"parameters {sorted(extra)} are not meaningful for {kind.value}")

    zero = CoefficientFn.constant(0.0)
    if kind is SystemKind.HO:
        omega = _positive("omega", params.get("omega"))
        return SystemSpec(kind, CoefficientFn.constant(0.5 * omega**2), zero, zero, omega=omega)
    if kind is SystemKind.FP:
        return SystemSpec(kind, zero, zero, zero)
    if kind is SystemKind.LP:
        kappa, g = _drive(params)
        return SystemSpec(kind, zero, g, zero, kappa=kappa, drive0=g(0.0))
    if kind is SystemKind.DHO:
        omega = _positive("omega", params.get("omega"))
        kappa, g = _drive(params)
        return SystemSpec(kind, CoefficientFn.constant(0.5 * omega**2), g, zero,
                          omega=omega, kappa=kappa, drive0=g(0.0))
    if kind is SystemKind.RO:
        Omega = _positive("Omega", params.get("Omega"))
        return SystemSpec(kind, CoefficientFn.constant(-0.5 * Omega**2), zero, zero, Omega=Omega)

    if params.get("g2") is None:
        raise ValidationError("custom system needs at least a 'g2' expression")
    g2 = as_coefficient(params["g2"])
    g1 = as_coefficient(params.get("g1") if params.get("g1") is not None else 0.0)
    g0 = as_coefficient(params.get("g0") if params.get("g0") is not None else 0.0)
    constants = params.get("constants")
    if constants is not None:
        constants = tuple(float(c) for c in constants)
        if len(constants) != 2:
            raise ValidationError("'constants' must be a pair (C1_0, C2_0)")
    ics = params.get("ics")
    if ics is not None:
        ics = tuple(float(c) for c in ics)
        if len(ics) != 4:
            raise ValidationError("'ics' must be (chi1_0, chi1dot_0, chi2_0, chi2dot_0)")
    return SystemSpec(kind, g2, g1, g0, drive0=g1(0.0), constants=constants, ics=ics)


def as_custom(system: SystemSpec) -> SystemSpec:
    """Re-express a catalog system as a custom one built from expression strings.

    The coefficients become parsed numeric literals, and the catalog basis
    initial values and integration constants are carried over explicitly, so
    the generic numeric path sees the same squeezed-state convention.
    """
    from .aux_solutions import catalog_ics
    from .driving import integration_constants

    if not system.is_catalog:
        return system
    ics = catalog_ics(system)
    return make_system(
        "custom",
        g2=system.g2.source if system.g2.is_constant else system.g2,
        g1=system.g1.source if system.g1.is_constant else system.g1,
        g0=system.g0.source,
        constants=integration_constants(system),
        ics=(ics.chi1_0, ics.chi1dot_0, ics.chi2_0, ics.chi2dot_0),
    )


def with_parameter(system: SystemSpec, name: str, value: float) -> SystemSpec:
    """Copy of a catalog system with one of omega, Omega, kappa replaced."""
    params = {}
    if system.omega is not None:
        params["omega"] = system.omega
    if system.Omega is not None:
        params["Omega"] = system.Omega
    if system.kind in (SystemKind.LP, SystemKind.DHO):
        if system.kappa is None:
            raise ValidationError("only constant-drive systems can sweep kappa")
        params["kappa"] = system.kappa
    if name not in params:
        raise ValidationError(f"{system.kind.value} has no parameter {name!r}")
    params[name] = value
    return replace(make_system(system.kind, **params), label=system.label)


def reference_expectations(system: SystemSpec, point, tau):
    """Closed-form <x>, <p> for the catalog systems, written out per system.

    Used as an independent regression target for the generic propagation.
    LP and DHO are only covered for a constant drive ``kappa/2``.
    """
    x0, p0 = float(point[0]), float(point[1])
    tau = np.asarray(tau, dtype=float)
    kind = system.kind
    if kind is SystemKind.CUSTOM:
        raise NotImplementedError("reference expectations exist only for catalog systems")
    if kind in (SystemKind.LP, SystemKind.DHO) and system.kappa is None:
        raise NotImplementedError("reference expectations need a constant drive kappa/2")

    if kind is SystemKind.HO or kind is SystemKind.DHO:
        w = system.omega
        c, s = np.cos(w * tau), np.sin(w * tau)
        x = (p0 * s + w * x0 * c) / w
        p = p0 * c - w * x0 * s
        if kind is SystemKind.DHO:
            k = system.kappa
            x = x + k / (2 * w**2) * (c - 1.0)
            p = p - k / (2 * w) * s
    elif kind is SystemKind.FP:
        x = x0 + p0 * tau
        p = p0 + 0.0 * tau
    elif kind is SystemKind.LP:
        k = system.kappa
        x = x0 + p0 * tau - k / 4 * tau**2
        p = p0 - k / 2 * tau
    else:
        W = system.Omega
        ch, sh = np.cosh(W * tau), np.sinh(W * tau)
        x = (p0 * sh + W * x0 * ch) / W
        p = p0 * ch + W * x0 * sh
    if x.ndim == 0:
        return float(x), float(p)
    return x, p
