"""Acceptance criteria 1-8, each checked at its stated tolerance.

Every test records a one-line verdict that is printed in the terminal
summary.  The repulsive-oscillator uncertainty-product regression (part of
criteria 3 and 6) cannot pass: the quoted closed form for that system
disagrees with the propagated covariance and even falls below 1/4.  Those
parts are marked as expected failures and still run in full.
"""

import math
import time

import numpy as np
import pytest

from squeezedyn import phase_space as ps
from squeezedyn.aux_solutions import analytic_basis, basis_for
from squeezedyn.driving import driving_for
from squeezedyn.oracle import SpatialGrid, extremal_wavefunction, ladder_apply, run_oracle
from squeezedyn.systems import CATALOG, SystemKind, as_custom, make_system, reference_expectations

from conftest import close

TOL = 1e-9
KIND_NAMES = [k.value for k in CATALOG]


def rel(a, b):
    a, b = np.asarray(a, dtype=float), np.asarray(b, dtype=float)
    return float(np.max(np.abs(a - b) / np.maximum(1.0, np.maximum(np.abs(a), np.abs(b)))))


def draw_system(kind, rng, low=0.5, high=3.0):
    u = lambda: float(rng.uniform(low, high))
    return {
        "HO": lambda: make_system("HO", omega=u()),
        "FP": lambda: make_system("FP"),
        "LP": lambda: make_system("LP", kappa=u()),
        "DHO": lambda: make_system("DHO", omega=u(), kappa=u()),
        "RO": lambda: make_system("RO", Omega=u()),
    }[kind]()


def analytic(system):
    b = analytic_basis(system)
    return b, driving_for(system, b)


def generic(system, tau_max=10.0):
    """The same system re-entered as parsed expressions on the numeric path."""
    c = as_custom(system)
    b = basis_for(c, tau_max=tau_max, tol=1e-10)
    return b, driving_for(c, b)


# -- 1: catalog reproduction ----------------------------------------------------------

def catalog_error(kind, rng, n, build):
    worst = 0.0
    for _ in range(n):
        s = draw_system(kind, rng)
        b, d = build(s)
        pt, tau = rng.uniform(-3, 3, 2), float(rng.uniform(0, 10))
        worst = max(worst, rel(ps.expect_xp_from_initial(b, d, pt, tau), reference_expectations(s, pt, tau)))
    return worst


def test_criterion_1_catalog(acceptance):
    rng = np.random.default_rng(1)
    start = time.perf_counter()
    errs = {k: catalog_error(k, rng, 1000, analytic) for k in KIND_NAMES}
    elapsed = time.perf_counter() - start
    worst = max(errs.values())
    ok = worst <= TOL and elapsed < 5.0
    acceptance("1", ok, f"catalog <x>,<p>: max err {worst:.2e} (tol 1e-9), 5x1000 draws in {elapsed:.2f}s (<5s)")
    assert worst <= TOL, errs
    assert elapsed < 5.0


# -- 2: representation equivalence ---------------------------------------------------

def representation_error(kind, rng, n, build):
    worst = 0.0
    for _ in range(n):
        s = draw_system(kind, rng)
        b, d = build(s)
        pt = rng.uniform(-3, 3, 2)
        z = (float(rng.uniform(0, 2)), float(rng.uniform(0, 2 * math.pi)))
        tau = float(rng.uniform(0, 10))
        x0 = ps.expect_xp_from_initial(b, d, pt, tau)
        x1 = ps.expect_xp_alpha_z(ps.params_alpha_z(pt, b, d, *z), b, d, tau)
        x2 = ps.expect_xp_z_alpha(ps.solve_alpha_given_z(pt, z, b, d), b, d, tau)
        worst = max(worst, rel(x0, x1), rel(x0, x2), rel(x1, x2))
    return worst


def test_criterion_2_representations(acceptance):
    rng = np.random.default_rng(2)
    start = time.perf_counter()
    errs = {k: representation_error(k, rng, 500, analytic) for k in KIND_NAMES}
    elapsed = time.perf_counter() - start
    worst = max(errs.values())
    ok = worst <= TOL and elapsed < 5.0
    acceptance("2", ok, f"three routes pairwise: max err {worst:.2e} (tol 1e-9), 5x500 draws in {elapsed:.2f}s (<5s)")
    assert worst <= TOL, errs
    assert elapsed < 5.0


# -- 3: uncertainty regression ---------------------------------------------------------

def product_regression_error(kind, rng, n, build):
    worst = 0.0
    for _ in range(n):
        s = draw_system(kind, rng)
        b, _ = build(s)
        z = (float(rng.uniform(0, 2)), float(rng.uniform(0, 2 * math.pi)))
        tau = float(rng.uniform(0, 5))
        got = ps.uncertainty_product(ps.covariance(b, z, tau))
        worst = max(worst, rel(got, ps.reference_uncertainty(s, z, tau)))
    return worst


@pytest.mark.parametrize("kind", ["HO", "DHO", "FP", "LP"])
def test_criterion_3_products(kind, acceptance):
    err = product_regression_error(kind, np.random.default_rng(3), 1000, analytic)
    acceptance(f"3.{kind}", err <= TOL, f"{kind} product vs closed form: max rel err {err:.2e} (tol 1e-9)")
    assert err <= TOL


@pytest.mark.xfail(strict=True, reason="quoted repulsive-oscillator product disagrees with the covariance "
                                       "(it can fall below 1/4); no phase convention reconciles it")
def test_criterion_3_products_repulsive(acceptance):
    rng = np.random.default_rng(3)
    err = product_regression_error("RO", rng, 1000, analytic)
    s = make_system("RO", Omega=1.0)
    lowest = min(ps.reference_uncertainty(s, (float(r), float(t)), float(tau))
                 for r, t, tau in rng.uniform([0, 0, 0], [2, 2 * math.pi, 5], (2000, 3)))
    acceptance("3.RO", err <= TOL, f"RO product vs quoted form: max rel err {err:.2e} (tol 1e-9); "
                                   f"quoted form reaches {lowest:.3g} < 1/4 [known defect]")
    assert err <= TOL


GRID = SpatialGrid.symmetric(30.0, 4096)


def test_criterion_3_misprints_against_oracle(acceptance):
    """Each corrected closed form agrees with the grid; the form as usually quoted does not."""
    rows = []
    # oscillator: the momentum variance sign
    ho = make_system("HO", omega=1.2)
    b, _ = analytic(ho)
    z, tau = (0.7, 2.0), 1.1
    m = run_oracle(ho, b, (0.5, 0.2), z, GRID, 1e-3, [tau])[0]
    quoted = ps.reference_variances(ho, z, tau, uncorrected=True)[1]
    fixed = ps.reference_variances(ho, z, tau)[1]
    rows.append(("oscillator var_p sign", abs(quoted / m.var_p - 1), abs(fixed / m.var_p - 1)))
    # free particle: the 1/4 factor on the sinh^2 2r bracket
    fp = make_system("FP")
    b, _ = analytic(fp)
    z, tau = (0.6, 2.0), 1.5
    m = run_oracle(fp, b, (0.0, 0.3), z, GRID, 1e-3, [tau])[0]
    quoted = ps.reference_uncertainty(fp, z, tau, uncorrected=True)
    fixed = ps.reference_uncertainty(fp, z, tau)
    rows.append(("free-particle product 1/4", abs(quoted / m.product - 1), abs(fixed / m.product - 1)))
    ok = all(q > 1e-2 and f <= 1e-4 for _, q, f in rows)
    detail = "; ".join(f"{n}: quoted off by {q:.1e}, corrected {f:.1e}" for n, q, f in rows)
    acceptance("3.typos", ok, detail)
    assert ok


# -- 4: floor and coherent limits ----------------------------------------------------

def floor_and_limits(rng, build, n):
    lowest, limit_err = math.inf, 0.0
    for kind in KIND_NAMES:
        for _ in range(n):
            s = draw_system(kind, rng)
            b, _ = build(s)
            tau = float(rng.uniform(0, 5))
            z = (float(rng.uniform(0, 2)), float(rng.uniform(0, 2 * math.pi)))
            lowest = min(lowest, ps.uncertainty_product(ps.covariance(b, z, tau)))
            coherent = ps.uncertainty_product(ps.covariance(b, (0.0, float(rng.uniform(0, 6))), tau))
            if kind in ("HO", "DHO"):
                expected = 0.25
            elif kind in ("FP", "LP"):
                expected = 0.25 * (1 + tau**2)
            else:
                expected = 0.25 * (1 + math.sinh(2 * s.Omega * tau) ** 2)
            limit_err = max(limit_err, rel(coherent, expected))
    return lowest, limit_err


def test_criterion_4_floor_and_limits(acceptance):
    lowest, limit_err = floor_and_limits(np.random.default_rng(4), analytic, 2000)
    ok = lowest >= 0.25 - 1e-12 and limit_err <= 1e-10
    acceptance("4", ok, f"min product {lowest:.15f} (>= 1/4 - 1e-12); r=0 limits max err {limit_err:.2e} (tol 1e-10)")
    assert lowest >= 0.25 - 1e-12
    assert limit_err <= 1e-10


# -- 5: grid oracle ---------------------------------------------------------------

def fits_on_grid(system, b, d, point, z, tau, grid, margin=8.0):
    """Whether the predicted packet stays clear of both grid edges up to ``tau``."""
    t = np.linspace(0, tau, 201)
    x, p = ps.expect_xp_from_initial(b, d, point, t)
    c = ps.covariance(b, z, t)
    sx, sp = np.sqrt(c.var_x), np.sqrt(c.var_p)
    inside_x = np.all((x - margin * sx > grid.x_min) & (x + margin * sx < grid.x_max))
    inside_p = np.all(np.abs(p) + margin * sp < grid.k_max)
    return bool(inside_x and inside_p)


def oracle_draw(kind, rng):
    """Random parameters, with the horizon cut back until the packet fits the grid."""
    s = {
        "HO": lambda: make_system("HO", omega=float(rng.uniform(1.0, 1.5))),
        "FP": lambda: make_system("FP"),
        "LP": lambda: make_system("LP", kappa=float(rng.uniform(0.5, 1.0))),
        "DHO": lambda: make_system("DHO", omega=float(rng.uniform(1.0, 1.5)), kappa=float(rng.uniform(0.5, 2.0))),
        "RO": lambda: make_system("RO", Omega=float(rng.uniform(0.5, 1.0))),
    }[kind]()
    b, d = analytic(s)
    point = tuple(rng.uniform(-1, 1, 2))
    z = (float(rng.uniform(0, 1.5)), float(rng.uniform(0, 2 * math.pi)))
    tau = 2.0 if kind == "RO" else 5.0
    while tau > 0.5 and not fits_on_grid(s, b, d, point, z, tau, GRID):
        tau -= 0.25
    return s, b, d, point, z, tau


def oracle_errors(s, b, d, point, z, tau, dt=1e-3, n_out=5):
    taus = np.linspace(0, tau, n_out + 1)[1:]
    got = run_oracle(s, b, point, z, GRID, dt, taus)
    mean_err = var_err = 0.0
    for t, m in zip(taus, got):
        x, p = ps.expect_xp_from_initial(b, d, point, t)
        c = ps.covariance(b, z, t)
        mean_err = max(mean_err, abs(m.x - x), abs(m.p - p))
        var_err = max(var_err, abs(m.var_x / c.var_x - 1), abs(m.var_p / c.var_p - 1))
    return mean_err, var_err


def test_criterion_5_oracle(acceptance):
    rng = np.random.default_rng(5)
    start = time.perf_counter()
    rows = []
    for kind in KIND_NAMES:
        for _ in range(2):
            s, b, d, point, z, tau = oracle_draw(kind, rng)
            rows.append((kind, z[0], tau, *oracle_errors(s, b, d, point, z, tau)))
    elapsed = time.perf_counter() - start
    mean_err = max(r[3] for r in rows)
    var_err = max(r[4] for r in rows)
    horizon = ", ".join(f"{k}:{t:g}" for k, _, t, _, _ in rows[::2])
    ok = mean_err <= 1e-5 and var_err <= 1e-4 and elapsed < 60
    acceptance("5", ok, f"grid n=4096 +/-30 dt=1e-3: mean err {mean_err:.2e} (1e-5), var rel err {var_err:.2e} "
                        f"(1e-4); horizons {horizon}; {elapsed:.1f}s (<60s)")
    assert mean_err <= 1e-5 and var_err <= 1e-4, rows
    assert elapsed < 60


def test_criterion_5_full_horizons():
    """At least one draw per system reaches the full horizon (5, or 2 for RO)."""
    rng = np.random.default_rng(55)
    for kind in KIND_NAMES:
        full = 2.0 if kind == "RO" else 5.0
        assert any(oracle_draw(kind, rng)[-1] == full for _ in range(20)), kind


# -- 6: generic coefficient path -----------------------------------------------------

def test_criterion_6_generic_path(acceptance):
    rng = np.random.default_rng(6)
    start = time.perf_counter()
    c1 = max(catalog_error(k, rng, 100, generic) for k in KIND_NAMES)
    c2 = max(representation_error(k, rng, 60, generic) for k in KIND_NAMES)
    c3 = max(product_regression_error(k, rng, 100, lambda s: generic(s, 5.0)) for k in ("HO", "DHO", "FP", "LP"))
    lowest, c4 = floor_and_limits(rng, lambda s: generic(s, 5.0), 40)
    elapsed = time.perf_counter() - start
    ok = max(c1, c2, c3, c4) <= 1e-7 and lowest >= 0.25 - 1e-12
    acceptance("6", ok, f"parsed-expression path: catalog {c1:.1e}, routes {c2:.1e}, products {c3:.1e}, "
                        f"limits {c4:.1e} (tol 1e-7), min product {lowest:.12f}; {elapsed:.1f}s")
    assert max(c1, c2, c3, c4) <= 1e-7
    assert lowest >= 0.25 - 1e-12


@pytest.mark.xfail(strict=True, reason="same defect as the analytic repulsive-oscillator product regression")
def test_criterion_6_generic_products_repulsive(acceptance):
    err = product_regression_error("RO", np.random.default_rng(6), 100, lambda s: generic(s, 5.0))
    acceptance("6.RO", err <= 1e-7, f"RO product on the parsed-expression path vs quoted form: max rel err "
                                    f"{err:.2e} (tol 1e-7) [known defect]")
    assert err <= 1e-7


def test_criterion_6_generic_matches_analytic_repulsive_covariance():
    """The numeric path itself reproduces the repulsive covariance; only the quoted product is off."""
    rng = np.random.default_rng(66)
    worst = 0.0
    for _ in range(100):
        s = draw_system("RO", rng)
        z = (float(rng.uniform(0, 2)), float(rng.uniform(0, 2 * math.pi)))
        tau = float(rng.uniform(0, 5))
        a = ps.uncertainty_product(ps.covariance(analytic(s)[0], z, tau))
        g = ps.uncertainty_product(ps.covariance(generic(s, 5.0)[0], z, tau))
        worst = max(worst, rel(a, g))
    assert worst <= 1e-7


# -- 7: algebraic structure -----------------------------------------------------------

def test_criterion_7_ladder(acceptance):
    grid = SpatialGrid.symmetric(20.0, 1024)
    rng = np.random.default_rng(7)
    ann = comm = 0.0
    for kind in ("HO", "FP", "LP", "DHO"):
        s = draw_system(kind, rng, 0.5, 1.5)
        b, d = analytic(s)
        for tau in (0.0, float(rng.uniform(0, 3))):
            e = extremal_wavefunction(b, d, tau, grid)
            ann = max(ann, math.sqrt(ladder_apply(e, b, d, tau, "lower").norm()))
            x = grid.x
            f = type(e)(grid, np.exp(-0.5 * (x - 0.3) ** 2 + 0.4j * x), tau).normalized()
            lr = ladder_apply(ladder_apply(f, b, d, tau, "raise"), b, d, tau, "lower").psi
            rl = ladder_apply(ladder_apply(f, b, d, tau, "lower"), b, d, tau, "raise").psi
            comm = max(comm, math.sqrt(np.sum(np.abs(lr - rl - f.psi) ** 2) * grid.dx))
    ok = ann <= 1e-6 and comm <= 1e-6
    acceptance("7", ok, f"||J- psi_ext|| = {ann:.1e}, ||[J-,J+]f - f|| = {comm:.1e} (tol 1e-6)")
    assert ok


# -- 8: Ehrenfest --------------------------------------------------------------------

def test_criterion_8_ehrenfest(acceptance):
    rng = np.random.default_rng(8)
    h = 1e-4
    worst = 0.0
    for kind in KIND_NAMES:
        for _ in range(200):
            s = draw_system(kind, rng)
            b, d = analytic(s)
            pt, tau = rng.uniform(-3, 3, 2), float(rng.uniform(2 * h, 5))
            (xm, pm), (x, p), (xp, pp) = (ps.expect_xp_from_initial(b, d, pt, t) for t in (tau - h, tau, tau + h))
            worst = max(worst, rel((xp - xm) / (2 * h), p), rel((pp - pm) / (2 * h), s.force(x, tau)))
    acceptance("8", worst <= 1e-6, f"central differences h=1e-4: max rel residual {worst:.2e} (tol 1e-6)")
    assert worst <= 1e-6
