"""Invariant suite run by ``squeezedyn verify``.

Each check returns a :class:`CheckResult`.  Comparisons are mixed
absolute/relative: ``|a - b| <= tol * max(1, |a|, |b|)``, so the growing
repulsive-oscillator solutions are judged on relative accuracy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import phase_space
from .aux_solutions import analytic_basis, evaluate, numeric_basis, wronskian, wronskian_scale
from .driving import driving_for, driving_integrals
from .errors import DomainEscapeError
from .expr import parse
from .oracle import SpatialGrid, extremal_wavefunction, ladder_apply, run_oracle
from .systems import CATALOG, SystemKind, make_system, reference_expectations

DEFAULT_TOLERANCES = {
    "wronskian": 1e-8,
    "symplectic": 1e-10,
    "representations": 1e-9,
    "ehrenfest": 1e-6,
    "uncertainty-floor": 1e-12,
    "purity": 1e-9,
    "catalog": 1e-9,
    "reference-products": 1e-9,
    "oracle-mean": 1e-5,
    "oracle-variance": 1e-4,
    "ladder": 1e-6,
}


@dataclass
class CheckResult:
    name: str
    passed: bool
    max_error: float = 0.0
    tolerance: float = 0.0
    detail: str = ""
    rows: list = field(default_factory=list)

    def line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        return f"{mark:4}  {self.name:<20} max_err={self.max_error:.3e}  tol={self.tolerance:.1e}  {self.detail}"


def rel_err(a, b):
    a, b = np.asarray(a, dtype=float), np.asarray(b, dtype=float)
    return np.abs(a - b) / np.maximum(1.0, np.maximum(np.abs(a), np.abs(b)))


def random_system(kind: SystemKind, rng: np.random.Generator, low=0.5, high=3.0):
    """Catalog system with its parameters drawn uniformly from ``[low, high]``."""
    u = lambda: float(rng.uniform(low, high))
    if kind is SystemKind.HO:
        return make_system(kind, omega=u())
    if kind is SystemKind.FP:
        return make_system(kind)
    if kind is SystemKind.LP:
        return make_system(kind, kappa=u())
    if kind is SystemKind.DHO:
        return make_system(kind, omega=u(), kappa=u())
    return make_system(kind, Omega=u())


def _catalog(rng, low=0.5, high=3.0):
    for kind in CATALOG:
        s = random_system(kind, rng, low, high)
        b = analytic_basis(s)
        yield s, b, driving_for(s, b)


def check_wronskian(rng, tol) -> CheckResult:
    worst = 0.0
    taus = np.linspace(0.0, 10.0, 401)
    for kind in CATALOG:
        s = random_system(kind, rng, 0.5, 1.0)
        smp = evaluate(analytic_basis(s), taus)
        worst = max(worst, float(np.max(np.abs(wronskian(smp) - 1) / np.maximum(1, wronskian_scale(smp)))))
    for g2, T in (("0.5", 10.0), ("0", 10.0), ("-0.5", 5.0), ("0.5 + 0.25*cos(t)", 10.0)):
        smp = evaluate(numeric_basis(parse(g2), tau_max=T), np.linspace(0, T, 401))
        worst = max(worst, float(np.max(np.abs(wronskian(smp) - 1) / np.maximum(1, wronskian_scale(smp)))))
    return CheckResult("wronskian", worst <= tol, worst, tol, "analytic and numeric bases")


def check_symplectic(rng, tol) -> CheckResult:
    worst = 0.0
    for s, b, _ in _catalog(rng):
        taus = rng.uniform(0, 10, 1000)
        m = phase_space.transfer_matrix(b, taus)
        scale = np.maximum(1.0, np.abs(m.m11 * m.m22) + np.abs(m.m12 * m.m21))
        worst = max(worst, float(np.max(np.abs(m.det - 1) / scale)))
    return CheckResult("symplectic", worst <= tol, worst, tol, "det M = 1, 1000 tau per system")


def check_representations(rng, tol, draws=200) -> CheckResult:
    worst = 0.0
    for s, b, d in _catalog(rng):
        for _ in range(draws):
            pt = rng.uniform(-3, 3, 2)
            z = (float(rng.uniform(0, 2)), float(rng.uniform(0, 2 * math.pi)))
            tau = float(rng.uniform(0, 10))
            x0, p0 = phase_space.expect_xp_from_initial(b, d, pt, tau)
            az = phase_space.params_alpha_z(pt, b, d, *z)
            x1, p1 = phase_space.expect_xp_alpha_z(az, b, d, tau)
            za = phase_space.solve_alpha_given_z(pt, z, b, d)
            x2, p2 = phase_space.expect_xp_z_alpha(za, b, d, tau)
            worst = max(worst, *rel_err([x0, p0, x0, p0, x1, p1], [x1, p1, x2, p2, x2, p2]))
    return CheckResult("representations", worst <= tol, float(worst), tol, "(x0,p0) / (alpha,z) / (z,alpha)")


def check_ehrenfest(rng, tol, h=1e-4, draws=100) -> CheckResult:
    worst = 0.0
    for s, b, d in _catalog(rng):
        for _ in range(draws):
            pt = rng.uniform(-3, 3, 2)
            tau = float(rng.uniform(2 * h, 5))
            xm, pm = phase_space.expect_xp_from_initial(b, d, pt, tau - h)
            x, p = phase_space.expect_xp_from_initial(b, d, pt, tau)
            xp_, pp = phase_space.expect_xp_from_initial(b, d, pt, tau + h)
            dx = (xp_ - xm) / (2 * h)
            dp = (pp - pm) / (2 * h)
            worst = max(worst, *rel_err([dx, dp], [p, s.force(x, tau)]))
    return CheckResult("ehrenfest", worst <= tol, float(worst), tol, f"central differences, h={h:g}")


def check_floor(rng, tol, samples=10_000) -> CheckResult:
    lowest = math.inf
    per = samples // len(CATALOG)
    for s, b, _ in _catalog(rng):
        taus = rng.uniform(0, 5, per)
        rs = rng.uniform(0, 2, per)
        ths = rng.uniform(0, 2 * math.pi, per)
        for tau, r, th in zip(taus, rs, ths):
            lowest = min(lowest, phase_space.uncertainty_product(phase_space.covariance(b, (r, th), tau)))
    deficit = max(0.0, 0.25 - lowest)
    return CheckResult("uncertainty-floor", deficit <= tol, deficit, tol, f"min product {lowest:.15f}")


def check_purity(rng, tol, draws=300) -> CheckResult:
    worst = 0.0
    for s, b, _ in _catalog(rng, 0.5, 1.5):
        for _ in range(draws):
            z = (float(rng.uniform(0, 2)), float(rng.uniform(0, 2 * math.pi)))
            tau = float(rng.uniform(0, 5))
            c = phase_space.covariance(b, z, tau)
            c2 = phase_space.covariance_propagated(b, z, tau)
            scale = max(1.0, c.var_x * c.var_p)
            worst = max(worst, abs(c.determinant - 0.25) / scale,
                        *rel_err([c.var_x, c.var_p, c.cov_xp], [c2.var_x, c2.var_p, c2.cov_xp]))
    return CheckResult("purity", worst <= tol, float(worst), tol, "det Sigma = 1/4, two covariance routes")


def check_catalog(rng, tol, draws=200) -> CheckResult:
    worst = 0.0
    for s, b, d in _catalog(rng):
        pts = rng.uniform(-3, 3, (draws, 2))
        taus = rng.uniform(0, 10, draws)
        for pt, tau in zip(pts, taus):
            worst = max(worst, *rel_err(phase_space.expect_xp_from_initial(b, d, pt, tau),
                                        reference_expectations(s, pt, tau)))
    return CheckResult("catalog", worst <= tol, float(worst), tol, "generic vs per-system closed forms")


def check_reference_products(rng, tol, draws=300) -> CheckResult:
    worst = 0.0
    for s, b, _ in _catalog(rng):
        if s.kind is SystemKind.RO:
            continue
        for _ in range(draws):
            z = (float(rng.uniform(0, 2)), float(rng.uniform(0, 2 * math.pi)))
            tau = float(rng.uniform(0, 5))
            got = phase_space.uncertainty_product(phase_space.covariance(b, z, tau))
            worst = max(worst, float(rel_err(got, phase_space.reference_uncertainty(s, z, tau))))
    return CheckResult("reference-products", worst <= tol, worst, tol, "HO, DHO, FP, LP closed forms")


def oracle_cases():
    """Parameter sets for the grid comparison, chosen to stay inside a +/-30 grid."""
    return [
        (make_system("HO", omega=1.0), (1.0, -0.5), (1.5, 0.7), 5.0),
        (make_system("FP"), (0.5, 0.2), (0.6, 2.0), 5.0),
        (make_system("LP", kappa=1.0), (0.5, 0.8), (0.5, math.pi), 5.0),
        (make_system("DHO", omega=1.2, kappa=1.5), (0.5, 0.3), (1.0, 2.0), 5.0),
        (make_system("RO", Omega=0.7), (0.3, 0.1), (0.5, 1.0), 2.0),
    ]


def oracle_errors(system, point, z, tau_end, n=4096, half_width=30.0, dt=1e-3, n_out=5):
    """Largest mean and relative-variance deviations between grid and analytic moments."""
    b = analytic_basis(system)
    d = driving_for(system, b)
    taus = np.linspace(0, tau_end, n_out + 1)[1:]
    got = run_oracle(system, b, point, z, SpatialGrid.symmetric(half_width, n), dt, taus)
    mean_err = var_err = 0.0
    for tau, m in zip(taus, got):
        x, p = phase_space.expect_xp_from_initial(b, d, point, tau)
        c = phase_space.covariance(b, z, tau)
        mean_err = max(mean_err, abs(m.x - x), abs(m.p - p))
        var_err = max(var_err, abs(m.var_x / c.var_x - 1), abs(m.var_p / c.var_p - 1))
    return mean_err, var_err


def check_oracle(tol_mean, tol_var) -> CheckResult:
    worst_mean = worst_var = 0.0
    rows = []
    try:
        for system, point, z, T in oracle_cases():
            em, ev = oracle_errors(system, point, z, T)
            rows.append((system.kind.value, em, ev))
            worst_mean, worst_var = max(worst_mean, em), max(worst_var, ev)
    except DomainEscapeError as exc:
        return CheckResult("oracle", False, math.inf, tol_mean, str(exc))
    ok = worst_mean <= tol_mean and worst_var <= tol_var
    return CheckResult("oracle", ok, worst_mean, tol_mean,
                       f"split-step grid; worst relative variance error {worst_var:.2e} (tol {tol_var:.0e})", rows)


def check_ladder(tol) -> CheckResult:
    worst = 0.0
    grid = SpatialGrid.symmetric(20.0, 1024)
    for s in (make_system("HO", omega=1.3), make_system("FP"), make_system("LP", kappa=1.2),
              make_system("DHO", omega=0.9, kappa=0.8)):
        b = analytic_basis(s)
        d = driving_for(s, b)
        for tau in (0.0, 0.7, 2.0):
            psi = extremal_wavefunction(b, d, tau, grid)
            worst = max(worst, math.sqrt(ladder_apply(psi, b, d, tau, "lower").norm()))
            f = extremal_wavefunction(analytic_basis(make_system("HO", omega=0.8)),
                                      driving_for(make_system("FP"), analytic_basis(make_system("FP"))), 0.3, grid)
            a = ladder_apply(ladder_apply(f, b, d, tau, "raise"), b, d, tau, "lower").psi
            c = ladder_apply(ladder_apply(f, b, d, tau, "lower"), b, d, tau, "raise").psi
            worst = max(worst, math.sqrt(np.sum(np.abs(a - c - f.psi) ** 2) * grid.dx))
    return CheckResult("ladder", worst <= tol, worst, tol, "J- annihilates extremal state, [J-, J+] = 1")


def misprint_table(rng) -> CheckResult:
    """Known misprints in commonly quoted closed forms, checked against this implementation."""
    rows = []
    agree = 1e-9

    ho = make_system("HO", omega=1.3)
    b = analytic_basis(ho)
    quoted = corrected = 0.0
    for _ in range(200):
        z = (float(rng.uniform(0.2, 2)), float(rng.uniform(0, 2 * math.pi)))
        tau = float(rng.uniform(0, 5))
        c = phase_space.covariance(b, z, tau)
        quoted = max(quoted, *rel_err(phase_space.reference_variances(ho, z, tau, uncorrected=True), (c.var_x, c.var_p)))
        corrected = max(corrected, *rel_err(phase_space.reference_variances(ho, z, tau), (c.var_x, c.var_p)))
    rows.append(("oscillator momentum-variance sign", quoted, corrected))

    fp = make_system("FP")
    b = analytic_basis(fp)
    quoted = corrected = 0.0
    for _ in range(200):
        z = (float(rng.uniform(0.2, 2)), float(rng.uniform(0, 2 * math.pi)))
        tau = float(rng.uniform(0, 5))
        got = phase_space.uncertainty_product(phase_space.covariance(b, z, tau))
        quoted = max(quoted, float(rel_err(phase_space.reference_uncertainty(fp, z, tau, uncorrected=True), got)))
        corrected = max(corrected, float(rel_err(phase_space.reference_uncertainty(fp, z, tau), got)))
    rows.append(("free-particle product 1/4 factor", quoted, corrected))

    dho = make_system("DHO", omega=1.4, kappa=1.6)
    b = analytic_basis(dho)
    quad = driving_integrals(b, parse(f"{dho.kappa / 2!r} + 0*t"), dho)
    taus = np.linspace(0.1, 8, 40)
    a = dho.kappa / (2 * dho.omega**1.5)
    quoted = float(np.max(rel_err(-a * (1 - np.cos(dho.omega * taus)), quad.c2(taus))))
    corrected = float(np.max(rel_err(a * (1 - np.cos(dho.omega * taus)), quad.c2(taus))))
    rows.append(("driven-oscillator c2 sign", quoted, corrected))

    ro = make_system("RO", Omega=1.0)
    b = analytic_basis(ro)
    quoted = 0.0
    below = math.inf
    for _ in range(200):
        z = (float(rng.uniform(0.2, 2)), float(rng.uniform(0, 2 * math.pi)))
        tau = float(rng.uniform(0, 2))
        got = phase_space.uncertainty_product(phase_space.covariance(b, z, tau))
        q = phase_space.reference_uncertainty(ro, z, tau)
        quoted = max(quoted, float(rel_err(q, got)))
        below = min(below, q)
    rows.append(("repulsive-oscillator product", quoted, math.nan))

    ok = all(q > 1e-3 and (math.isnan(c) or c <= agree) for _, q, c in rows)
    return CheckResult("misprints", ok, max(r[2] for r in rows if not math.isnan(r[2])), agree,
                       f"quoted forms disagree, corrections agree; quoted RO product reaches {below:.3g}", rows)



def run_suite(skip_oracle: bool = False, seed: int = 2024, tolerances: Optional[dict] = None) -> list[CheckResult]:
    tol = dict(DEFAULT_TOLERANCES)
    tol.update(tolerances or {})
    rng = np.random.default_rng(seed)
    results = [
        check_wronskian(rng, tol["wronskian"]),
        check_symplectic(rng, tol["symplectic"]),
        check_representations(rng, tol["representations"]),
        check_ehrenfest(rng, tol["ehrenfest"]),
        check_floor(rng, tol["uncertainty-floor"]),
        check_purity(rng, tol["purity"]),
        check_catalog(rng, tol["catalog"]),
        check_reference_products(rng, tol["reference-products"]),
        check_ladder(tol["ladder"]),
        misprint_table(rng),
    ]
    if not skip_oracle:
        results.append(check_oracle(tol["oracle-mean"], tol["oracle-variance"]))
    return results


def format_report(results: list[CheckResult]) -> str:
    lines = [r.line() for r in results]
    for r in results:
        if r.name == "misprints":
            lines.append("      misprint                              quoted_err  corrected_err")
            for name, q, c in r.rows:
                lines.append(f"      {name:<36}  {q:10.3e}  {c:13.3e}")
        if r.name == "oracle":
            for name, em, ev in r.rows:
                lines.append(f"      {name:<4} mean_err={em:.2e}  var_rel_err={ev:.2e}")
    n_fail = sum(not r.passed for r in results)
    lines.append(f"{len(results) - n_fail}/{len(results)} checks passed")
    return "\n".join(lines)
