"""Brute-force check: Gaussian packets on a grid, split-step propagation, moments.

Nothing here uses the transfer matrices or covariance formulas of
:mod:`squeezedyn.phase_space`; the packet is built from its ``tau = 0``
moments and then evolved directly under ``i psi_t = -psi_xx / 2 + V psi``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .aux_solutions import AuxiliaryBasis, evaluate
from .driving import DrivingIntegrals
from .errors import DomainEscapeError, ResolutionError, ValidationError
from .systems import SystemSpec

BOUNDARY_DENSITY = 1e-12
EDGE_POINTS = 4


@dataclass(frozen=True)
class SpatialGrid:
    x_min: float
    x_max: float
    n: int

    def __post_init__(self):
        if not self.x_max > self.x_min:
            raise ValidationError(f"grid needs x_max > x_min, got [{self.x_min}, {self.x_max}]")
        if self.n < 64 or self.n & (self.n - 1):
            raise ValidationError(f"grid size must be a power of two >= 64, got {self.n}")

    @classmethod
    def symmetric(cls, half_width: float, n: int) -> "SpatialGrid":
        return cls(-float(half_width), float(half_width), int(n))

    @property
    def dx(self) -> float:
        return (self.x_max - self.x_min) / self.n

    @property
    def x(self) -> np.ndarray:
        return self.x_min + self.dx * np.arange(self.n)

    @property
    def k(self) -> np.ndarray:
        return 2 * np.pi * np.fft.fftfreq(self.n, self.dx)

    @property
    def k_max(self) -> float:
        return math.pi / self.dx


@dataclass(frozen=True)
class GridWavefunction:
    grid: SpatialGrid
    psi: np.ndarray
    tau: float = 0.0

    def norm(self) -> float:
        return float(np.sum(np.abs(self.psi) ** 2) * self.grid.dx)

    def normalized(self) -> "GridWavefunction":
        return GridWavefunction(self.grid, self.psi / math.sqrt(self.norm()), self.tau)

    def derivative(self, order: int = 1) -> np.ndarray:
        """Spectral derivative of psi."""
        return np.fft.ifft((1j * self.grid.k) ** order * np.fft.fft(self.psi))

    def inner(self, other: "GridWavefunction") -> complex:
        return complex(np.sum(np.conj(self.psi) * other.psi) * self.grid.dx)


class Moments(NamedTuple):
    x: float
    p: float
    var_x: float
    var_p: float
    cov_xp: float

    @property
    def product(self) -> float:
        return self.var_x * self.var_p


def init_squeezed_wavefunction(point, z, xi0: complex, xidot0: complex, grid: SpatialGrid) -> GridWavefunction:
    """Normalized Gaussian with mean ``(x0, p0)`` and the squeezed second moments.

    ``psi = exp[-A (x - x0)^2 / 2 + i p0 (x - x0)]`` with
    ``A = 1/(2 var_x) - i cov_xp / var_x``; ``var_x`` and ``cov_xp`` follow from
    the initial width function ``xi0 cosh r - conj(xi0) e^{i theta} sinh r``.
    """
    x0, p0 = float(point[0]), float(point[1])
    r, theta = (abs(z), math.atan2(z.imag, z.real)) if isinstance(z, complex) else (float(z[0]), float(z[1]))
    rot = complex(math.cos(theta), math.sin(theta)) * math.sinh(r)
    w = xi0 * math.cosh(r) - np.conj(xi0) * rot
    wdot = xidot0 * math.cosh(r) - np.conj(xidot0) * rot
    var_x = abs(w) ** 2
    var_p = abs(wdot) ** 2
    cov = (w * np.conj(wdot)).real

    sx, sp = math.sqrt(var_x), math.sqrt(var_p)
    if grid.dx > sx / 8:
        raise ResolutionError(f"grid spacing {grid.dx:.3g} exceeds sqrt(var_x)/8 = {sx / 8:.3g}")
    if x0 - 12 * sx < grid.x_min or x0 + 12 * sx > grid.x_max:
        raise ResolutionError(f"domain [{grid.x_min}, {grid.x_max}] does not cover x0 +/- 12 sigma_x")
    if abs(p0) + 12 * sp > grid.k_max:
        raise ResolutionError(f"momentum cutoff {grid.k_max:.3g} does not cover p0 +/- 12 sigma_p")

    A = 1.0 / (2.0 * var_x) - 1j * cov / var_x
    x = grid.x
    psi = np.exp(-0.5 * A * (x - x0) ** 2 + 1j * p0 * (x - x0))
    return GridWavefunction(grid, psi).normalized()


def _check_boundaries(psi: np.ndarray, grid: SpatialGrid, tau: float):
    density = np.abs(psi) ** 2
    edge = max(density[:EDGE_POINTS].max(), density[-EDGE_POINTS:].max())
    if edge > BOUNDARY_DENSITY:
        raise DomainEscapeError(tau, "position")
    phi = np.fft.fftshift(np.fft.fft(psi)) * grid.dx / math.sqrt(2 * math.pi)
    pdens = np.abs(phi) ** 2
    edge = max(pdens[:EDGE_POINTS].max(), pdens[-EDGE_POINTS:].max())
    if edge > BOUNDARY_DENSITY:
        raise DomainEscapeError(tau, "momentum")


def _is_static(system: SystemSpec) -> bool:
    return system.g2.is_constant and system.g1.is_constant and system.g0.is_constant


def propagate(psi: GridWavefunction, system: SystemSpec, dt: float, n_steps: int,
              check_every: int = 100) -> GridWavefunction:
    """Second-order Strang splitting: half potential, full kinetic, half potential.

    The potential is evaluated at the midpoint time of each step.  The
    boundary monitor raises :class:`DomainEscapeError` once the packet's
    density at the edge of the position or momentum grid exceeds 1e-12.
    """
    if n_steps < 0 or not dt > 0:
        raise ValidationError("propagate needs dt > 0 and n_steps >= 0")
    grid = psi.grid
    x = grid.x
    kinetic = np.exp(-0.5j * dt * grid.k**2)
    out = psi.psi.copy()
    tau0 = psi.tau
    _check_boundaries(out, grid, tau0)

    if _is_static(system):
        half = np.exp(-0.5j * dt * system.potential(x, tau0))
        full = half * half
        out *= half
        for step in range(n_steps):
            out = np.fft.ifft(kinetic * np.fft.fft(out))
            out *= full if step < n_steps - 1 else half
            if (step + 1) % check_every == 0:
                _check_boundaries(out, grid, tau0 + (step + 1) * dt)
        if n_steps == 0:
            out /= half
    else:
        for step in range(n_steps):
            half = np.exp(-0.5j * dt * system.potential(x, tau0 + (step + 0.5) * dt))
            out = half * np.fft.ifft(kinetic * np.fft.fft(half * out))
            if (step + 1) % check_every == 0:
                _check_boundaries(out, grid, tau0 + (step + 1) * dt)
    tau = tau0 + n_steps * dt
    _check_boundaries(out, grid, tau)
    return GridWavefunction(grid, out, tau)


def moments(psi: GridWavefunction) -> Moments:
    """First and second moments by direct quadrature on the grid."""
    grid = psi.grid
    x, dx = grid.x, grid.dx
    f = psi.psi
    norm = np.sum(np.abs(f) ** 2) * dx
    dens = np.abs(f) ** 2 * dx / norm
    mx = float(np.sum(x * dens))
    var_x = float(np.sum((x - mx) ** 2 * dens))
    pf = -1j * psi.derivative()
    mp = float(np.real(np.sum(np.conj(f) * pf)) * dx / norm)
    var_p = float(np.sum(np.abs(pf) ** 2) * dx / norm - mp**2)
    sym = float(np.real(np.sum(np.conj(f) * (x - mx) * pf)) * dx / norm)
    return Moments(mx, mp, var_x, var_p, sym)


def ladder_apply(psi: GridWavefunction, basis: AuxiliaryBasis, driving: DrivingIntegrals, tau: float,
                 which: str) -> GridWavefunction:
    """Apply ``J-`` (``which='lower'``) or ``J+`` (``'raise'``) to a grid function.

    ``J- = xi d/dx - i xi' x + i C`` and ``J+ = -conj(xi) d/dx + i conj(xi') x - i conj(C)``,
    so that ``[J-, J+] = 1`` for any unit-Wronskian basis.  The result is not
    normalized.
    """
    b = evaluate(basis, tau)
    xi, xidot = complex(b.xi), complex(b.xidot)
    C = complex(driving.C(tau))
    x = psi.grid.x
    d = psi.derivative()
    if which == "lower":
        out = xi * d - 1j * xidot * x * psi.psi + 1j * C * psi.psi
    elif which == "raise":
        out = -np.conj(xi) * d + 1j * np.conj(xidot) * x * psi.psi - 1j * np.conj(C) * psi.psi
    else:
        raise ValidationError(f"which must be 'lower' or 'raise', got {which!r}")
    return GridWavefunction(psi.grid, out, psi.tau)


def extremal_wavefunction(basis: AuxiliaryBasis, driving: DrivingIntegrals, tau: float,
                          grid: SpatialGrid) -> GridWavefunction:
    """The Gaussian annihilated by ``J-`` at ``tau``: ``exp(i xi' x^2 / 2 xi - i C x / xi)``."""
    b = evaluate(basis, tau)
    xi, xidot = complex(b.xi), complex(b.xidot)
    C = complex(driving.C(tau))
    x = grid.x
    expo = 0.5j * xidot / xi * x**2 - 1j * C / xi * x
    expo -= expo.real.max()
    return GridWavefunction(grid, np.exp(expo), tau).normalized()


def run_oracle(system: SystemSpec, basis: AuxiliaryBasis, point, z, grid: SpatialGrid, dt: float,
               taus: Sequence[float]) -> list[Moments]:
    """Moments of the grid-propagated squeezed packet at each requested time.

    Steps are shrunk slightly where needed so every output time is hit exactly.
    """
    o = basis.ics
    psi = init_squeezed_wavefunction(point, z, o.xi0, o.xidot0, grid)
    out = []
    for tau in taus:
        span = float(tau) - psi.tau
        if span < -1e-12:
            raise ValidationError("output times must be non-decreasing")
        if span > 1e-15:
            n = max(1, math.ceil(span / dt - 1e-9))
            psi = propagate(psi, system, span / n, n)
            psi = GridWavefunction(grid, psi.psi, float(tau))
        out.append(moments(psi))
    return out
