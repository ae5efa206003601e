"""Trajectories, grid comparisons and parameter sweeps built from a :class:`RunConfig`."""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import Optional, Sequence

import numpy as np
from scipy.optimize import minimize_scalar

from . import phase_space
from .aux_solutions import AuxiliaryBasis, basis_for
from .config import RunConfig
from .driving import DrivingIntegrals, driving_for
from .errors import ValidationError
from .oracle import SpatialGrid, run_oracle
from .output import TRAJECTORY_COLUMNS
from .phase_space import InitialPhasePoint, SqueezeParameters
from .systems import SystemSpec, with_parameter

SWEEPABLE = ("r", "theta", "omega", "Omega", "kappa")


@dataclass
class Setup:
    system: SystemSpec
    basis: AuxiliaryBasis
    driving: DrivingIntegrals
    point: InitialPhasePoint
    z: tuple
    taus: np.ndarray


def output_times(tau_max: float, dt: float) -> np.ndarray:
    """``0, dt, 2 dt, ...`` up to and including ``tau_max``."""
    n = int(math.floor(tau_max / dt + 1e-9))
    taus = dt * np.arange(n + 1)
    if tau_max - taus[-1] > 1e-12 * max(1.0, tau_max):
        taus = np.append(taus, tau_max)
    else:
        taus[-1] = tau_max
    return taus


def resolve_initial(cfg: RunConfig, basis: AuxiliaryBasis, driving: DrivingIntegrals):
    """Initial phase point and squeeze ``(r, theta)`` for any initial-condition style."""
    init = cfg.initial
    z = (init.r, init.theta)
    if init.alpha is not None or init.delta is not None:
        rep = "alpha-z" if init.rep == "alpha-z" else "z-alpha"
        params = SqueezeParameters(init.alpha or 0.0, init.delta or 0.0, init.r, init.theta, rep)
        return phase_space.point_from_params(params, basis, driving), z
    return InitialPhasePoint(init.x0 or 0.0, init.p0 or 0.0), z


def prepare(cfg: RunConfig, system: Optional[SystemSpec] = None) -> Setup:
    cfg.validated()
    system = system or cfg.build_system()
    basis = basis_for(system, tau_max=cfg.time.tau_max)
    driving = driving_for(system, basis)
    point, z = resolve_initial(cfg, basis, driving)
    return Setup(system, basis, driving, point, z, output_times(cfg.time.tau_max, cfg.time.dt_output))


def trajectory(setup: Setup) -> dict[str, np.ndarray]:
    t = setup.taus
    x, p = phase_space.expect_xp_from_initial(setup.basis, setup.driving, setup.point, t)
    c = phase_space.covariance(setup.basis, setup.z, t)
    cols = (t, x, p, c.var_x, c.var_p, c.cov_xp, c.var_x * c.var_p)
    return {name: np.asarray(v, dtype=float) for name, v in zip(TRAJECTORY_COLUMNS, cols)}


def oracle_trajectory(setup: Setup, cfg: RunConfig) -> dict[str, np.ndarray]:
    """The same columns measured on a split-step grid simulation."""
    grid = SpatialGrid.symmetric(cfg.oracle.domain, cfg.oracle.grid_n)
    ms = run_oracle(setup.system, setup.basis, setup.point, setup.z, grid, cfg.oracle.dt, setup.taus)
    cols = (setup.taus, [m.x for m in ms], [m.p for m in ms], [m.var_x for m in ms],
            [m.var_p for m in ms], [m.cov_xp for m in ms], [m.product for m in ms])
    return {name: np.asarray(v, dtype=float) for name, v in zip(TRAJECTORY_COLUMNS, cols)}


def product_extremes(basis: AuxiliaryBasis, z, taus: np.ndarray) -> tuple[float, float]:
    """Largest uncertainty product on ``[0, tau_max]`` and its value at ``tau_max``.

    The maximum is located on the sample times and then refined by a bounded
    scalar search between the neighbouring samples.
    """
    prod = phase_space.uncertainty_product(phase_space.covariance(basis, z, taus))
    i = int(np.argmax(prod))
    best = float(prod[i])
    lo, hi = taus[max(i - 1, 0)], taus[min(i + 1, len(taus) - 1)]
    if hi > lo:
        f = lambda t: -phase_space.uncertainty_product(phase_space.covariance(basis, z, float(t)))
        res = minimize_scalar(f, bounds=(lo, hi), method="bounded", options={"xatol": 1e-12})
        best = max(best, -float(res.fun))
    return best, float(prod[-1])


def parse_vary(spec: str) -> tuple[str, np.ndarray]:
    """``name=start:stop:num`` (inclusive linspace) or ``name=v1,v2,...``."""
    if "=" not in spec:
        raise ValidationError(f"--vary expects name=values, got {spec!r}")
    name, values = (s.strip() for s in spec.split("=", 1))
    if name not in SWEEPABLE:
        raise ValidationError(f"cannot sweep {name!r}; choose from {', '.join(SWEEPABLE)}")
    try:
        if ":" in values:
            start, stop, num = values.split(":")
            grid = np.linspace(float(start), float(stop), int(num))
        else:
            grid = np.array([float(v) for v in values.split(",")])
    except ValueError:
        raise ValidationError(f"cannot read sweep values {values!r}") from None
    if grid.size == 0:
        raise ValidationError(f"sweep over {name!r} has no values")
    return name, grid


def _sweep_point(cfg: RunConfig, base: SystemSpec, assignment: dict) -> tuple[float, float]:
    system = base
    init = cfg.initial
    for name, value in assignment.items():
        if name in ("r", "theta"):
            init = replace(init, **{name: float(value)})
        else:
            system = with_parameter(system, name, float(value))
    init.validated()
    basis = basis_for(system, tau_max=cfg.time.tau_max)
    return product_extremes(basis, (init.r, init.theta), output_times(cfg.time.tau_max, cfg.time.dt_output))


def sweep(cfg: RunConfig, variables: Sequence[tuple[str, np.ndarray]], jobs: int = 1) -> dict[str, np.ndarray]:
    """Products over the Cartesian grid of up to two swept parameters.

    Returns columns named after the swept parameters followed by
    ``product_max`` and ``product_final``; row order is the grid order
    regardless of ``jobs``.
    """
    if len(variables) > 2:
        raise ValidationError("a sweep varies at most two parameters")
    names = [n for n, _ in variables]
    if len(set(names)) != len(names):
        raise ValidationError("each parameter may be swept only once")
    cfg.validated()
    base = cfg.build_system()
    combos = list(itertools.product(*(v for _, v in variables)))
    tasks = [dict(zip(names, c)) for c in combos]
    if jobs > 1 and len(tasks) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(lambda a: _sweep_point(cfg, base, a), tasks))
    else:
        results = [_sweep_point(cfg, base, a) for a in tasks]
    cols = {n: np.array([c[i] for c in combos], dtype=float) for i, n in enumerate(names)}
    cols["product_max"] = np.array([r[0] for r in results])
    cols["product_final"] = np.array([r[1] for r in results])
    return cols
