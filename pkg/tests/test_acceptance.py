"""The twelve acceptance criteria at their stated tolerances.

Each test prints one PASS/FAIL line (visible with or without -s).  Items that
do not hold for the computed surfaces are checked literally and fail.
"""

import math
import subprocess
import sys
import time
from pathlib import Path

import numpy as np
import pytest
from scipy.linalg import expm

from isowillmore import catalog, report
from isowillmore.diffgeo import (
    boundary_angle,
    conformal_factor,
    find_branch_points,
    gauss_curvature,
    hopf_data,
    locate_umbilic_circles,
    mean_curvature_residual,
)
from isowillmore.dressing import DressingElement, circle_element, dress
from isowillmore.energy import (
    appendix_R,
    appendix_bound_report,
    closed_form_roots_k2,
    component_energies,
    find_component_roots,
    find_energy_bracket,
    radial_energy,
    scan_energy_target,
    solve_energy_target,
    surface_energy,
)
from isowillmore.lorentz import I13
from isowillmore.potential import SpaceFormClass, classify_space_form
from isowillmore.weierstrass import antipodal_defect, boundary_radii, evaluate_lift, lightcone_ratio, make_surface

S3, S5 = math.sqrt(3), math.sqrt(5)
R1 = (math.sqrt(6) - math.sqrt(2)) / 2
R2 = (math.sqrt(6) + math.sqrt(2)) / 2
ROOT = Path(__file__).resolve().parents[1]


@pytest.fixture
def verdict(capsys):
    """Collect (label, ok, detail) checks, print one line, then assert."""

    def finish(n, title, checks, t0):
        ok = all(c[1] for c in checks)
        bad = "; ".join(f"{c[0]}: {c[2]}" for c in checks if not c[1])
        with capsys.disabled():
            line = f"\nACCEPTANCE {n:2d} {'PASS' if ok else 'FAIL'}  {title}  ({time.perf_counter() - t0:.1f} s)"
            print(line + (f"\n    failing: {bad}" if bad else ""))
        assert ok, bad

    return finish


def rel(a, b):
    return abs(a - b) / abs(b)


def polar(r, nth=8, th0=0.1):
    th = th0 + 2 * math.pi * np.arange(nth) / nth
    return (np.asarray(r)[:, None] * np.exp(1j * th)[None, :]).ravel()


def component_radii(k, t, n=20, margin=0.15, rmax_factor=2.5):
    """n radii spread over M1, M2, M3, staying clear of the boundary circles."""
    r1, r2 = find_component_roots(k, t)
    return np.concatenate([
        np.linspace(0.05, r1 * (1 - margin), 7),
        np.linspace(r1 * (1 + margin), r2 * (1 - margin), 7),
        np.linspace(r2 * (1 + margin), r2 * rmax_factor, n - 14),
    ])


# ---------------------------------------------------------------------------


def test_01_roots(verdict):
    t0 = time.perf_counter()
    r1, r2 = find_component_roots(2, 0.0)
    ts = np.linspace(-12, 4, 50)
    worst = max(max(rel(a, b) for a, b in zip(find_component_roots(2, t), closed_form_roots_k2(t))) for t in ts)
    checks = [
        ("r1", abs(r1 - R1) < 1e-10, f"{r1!r}"),
        ("r2", abs(r2 - R2) < 1e-10, f"{r2!r}"),
        ("closed form vs root finder", worst < 1e-9, f"{worst:.2e}"),
        ("runtime", time.perf_counter() - t0 < 1.0, f"{time.perf_counter() - t0:.2f} s"),
    ]
    verdict(1, "roots of the boundary polynomial", checks, t0)


def test_02_component_energies(verdict):
    t0 = time.perf_counter()
    rep = component_energies(2, 0.0)
    checks = [
        ("W1", rel(rep.W1, 4 - 2 * S3) < 1e-6, f"{rep.W1!r}"),
        ("W2", rel(rep.W2, 4 * S3) < 1e-6, f"{rep.W2!r}"),
        ("W1+W2+W3", rel(rep.W1 + rep.W2 + rep.W3, 8.0) < 1e-6, f"{rep.total!r}"),
    ]
    verdict(2, "component energies at t=0, k=2", checks, t0)


def test_03_decimal_reproduction(verdict):
    # taken literally: t = ln 0.000039
    t0 = time.perf_counter()
    rep = component_energies(2, math.log(0.000039))
    checks = [
        ("W1", rel(rep.W1, 1.999910062) < 1e-5, f"computed {rep.W1:.10f}, expected 1.999910062"),
        ("W2", rel(rep.W2, 6.000089931) < 1e-5, f"computed {rep.W2:.10f}, expected 6.000089931"),
    ]
    verdict(3, "decimal energies at t = ln 0.000039", checks, t0)


def test_04_totals(verdict):
    t0 = time.perf_counter()
    checks = []
    for t in (0.0, 0.3, 1.0, math.pi / 2):
        W = surface_energy(report.member("sphere_family", 2, t, "circle"))
        checks.append((f"Veronese t={t:.3g}", rel(W, 8.0) < 1e-3, f"{W!r}"))
    for k in (3, 4, 5):
        W = surface_energy(catalog.make("sphere_family", k))
        checks.append((f"k={k}", rel(W, 4.0 * k) < 1e-3, f"{W!r}"))
    verdict(4, "total energies 8 pi and 4 pi k", checks, t0)


def _formula_errors(fam, k, t, group, z, form, curvature=True):
    s = make_surface(report.member(fam, k, t, group), form)
    r = np.abs(z)
    m = catalog.closed_form(fam, k, "metric", t, r, group)
    em = float(np.max(np.abs(conformal_factor(s, z) / m - 1)))
    if not curvature:
        return em, 0.0
    K = catalog.closed_form(fam, k, "curvature", t, r, group)
    eK = float(np.max(np.abs(gauss_curvature(s, z) - K)))
    return em, eK


def test_05_curvature(verdict, rng):
    t0 = time.perf_counter()
    checks = []
    z = rng.uniform(0.05, 3, 160) * np.exp(1j * rng.uniform(0, 2 * math.pi, 160))
    K = gauss_curvature(make_surface(catalog.make("sphere_family", 2)), z)
    checks.append(("Veronese K = 1/3", np.max(np.abs(K - 1 / 3)) < 1e-5, f"{np.max(np.abs(K - 1 / 3)):.2e}"))
    hs = make_surface(catalog.make("hyperbolic_family", 2), SpaceFormClass.Hyperbolic)
    k0, k1 = gauss_curvature(hs, 0.0), gauss_curvature(hs, 1.0)
    checks.append(("K(0) = -5/3", abs(k0 + 5 / 3) < 1e-5, f"{k0!r}"))
    checks.append(("K(1) = -11/3", abs(k1 + 11 / 3) < 1e-5, f"{k1!r}"))
    # the five printed metric/curvature formulas, 20 x 8 polar grids
    grid_sphere = polar(np.linspace(0.05, 3.0, 20))
    cases = [
        ("Veronese circle metric", "sphere_family", 2, 0.4, "circle", grid_sphere, SpaceFormClass.Sphere, False),
        ("hyperbolic k=2 at t=0", "hyperbolic_family", 2, 0.0, "boost", polar(component_radii(2, 0.0)),
         SpaceFormClass.Hyperbolic, True),
        ("Veronese boost", "sphere_family", 2, 0.6, "boost", grid_sphere, SpaceFormClass.Sphere, True),
        ("hyperbolic k=2 boost", "hyperbolic_family", 2, -0.8, "boost", polar(component_radii(2, -0.8)),
         SpaceFormClass.Hyperbolic, True),
        ("hyperbolic k=3 boost", "hyperbolic_family", 3, 0.5, "boost", polar(component_radii(3, 0.5)),
         SpaceFormClass.Hyperbolic, True),
    ]
    for label, fam, k, t, group, zz, form, curv in cases:
        em, eK = _formula_errors(fam, k, t, group, zz, form, curvature=curv)
        checks.append((label, em < 1e-5 and eK < 1e-5, f"metric rel {em:.2e}, K abs {eK:.2e}"))
    verdict(5, "Gauss curvature and printed metric/curvature formulas", checks, t0)


def test_06_minimality_schedule(verdict):
    t0 = time.perf_counter()
    ts = np.linspace(0, 2 * math.pi, 64, endpoint=False)
    special = {0: SpaceFormClass.Sphere, 16: SpaceFormClass.Hyperbolic, 32: SpaceFormClass.Sphere,
               48: SpaceFormClass.Hyperbolic}
    v = catalog.make("sphere_family", 2)
    wrong = []
    for i, t in enumerate(ts):
        got = classify_space_form(dress(v, circle_element(t)))
        want = special.get(i, SpaceFormClass.NonMinimal)
        if got is not want:
            wrong.append(f"t={t:.4f}:{got}")
    checks = [("classification", not wrong, ", ".join(wrong))]
    z = np.array([0.3, 0.4 + 0.1j, 1.2j, 2.5 - 0.5j])
    for i, form in special.items():
        s = make_surface(dress(v, circle_element(ts[i])), form)
        res = float(np.max(mean_curvature_residual(s, z)))
        checks.append((f"residual t={ts[i]:.4f}", res < 1e-5, f"{res:.2e}"))
    for t in (0.3, 1.0, 2.0):
        res = float(np.min(mean_curvature_residual(make_surface(dress(v, circle_element(t))), z)))
        checks.append((f"non-minimal t={t}", res > 1e-2, f"{res:.2e}"))
    verdict(6, "minimality schedule over the circle family", checks, t0)


def test_07_isotropy_and_light_cone(verdict):
    t0 = time.perf_counter()
    rng = np.random.default_rng(20240611)
    members = [(name, k) for name, k in catalog.REPRO_MEMBERS if k is None or k <= 5]
    worst_iso = worst_lc = 0.0
    for n in range(100):
        name, k = members[n % len(members)]
        A = 0.4 * (rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4)))
        A = A - A.T  # I13 @ A lies in so(1,3,C)
        p = dress(catalog.make(name, k), DressingElement(expm(I13 @ A)))
        z = rng.uniform(0.1, 3.0, 10) * np.exp(1j * rng.uniform(0, 2 * math.pi, 10))
        k2, iso = hopf_data(p, z)
        worst_iso = max(worst_iso, float(np.max(iso / (1 + k2))))
        worst_lc = max(worst_lc, float(np.max(lightcone_ratio(evaluate_lift(p, z)))))
    checks = [
        ("isotropy ratio", worst_iso < 1e-6, f"{worst_iso:.2e}"),
        ("light-cone ratio", worst_lc < 1e-10, f"{worst_lc:.2e}"),
    ]
    verdict(7, "isotropy and light cone over 100 random dressings x 10 points", checks, t0)


def test_08_umbilics_and_boundary_angle(verdict):
    t0 = time.perf_counter()
    p = dress(catalog.make("sphere_family", 2), circle_element(3 * math.pi / 2))
    found = [r for r, _ in locate_umbilic_circles(p, 0.2, 2.5)]
    checks = [("umbilic circles", len(found) == 2 and abs(found[0] - R1) < 1e-6 and abs(found[1] - R2) < 1e-6,
               f"{found}")]
    angles = []
    for r in boundary_radii(p, 0.05, 5.0):
        a = [boundary_angle(p, r, th) for th in np.linspace(0, 2 * math.pi, 16, endpoint=False)]
        angles += a
        checks.append((f"constant on r={r:.6f}", max(a) - min(a) < 1e-6, f"spread {max(a) - min(a):.2e}"))
    checks.append(("angle < pi/2", max(angles) < math.pi / 2, f"max angle {max(angles)!r}"))
    verdict(8, "umbilic circles and boundary angle", checks, t0)


def test_09_appendix(verdict):
    t0 = time.perf_counter()
    checks = []
    for k in (10, 20, 50):
        rep = appendix_bound_report(k)
        for name, (lhs, rhs, ok) in rep.findings.items():
            checks.append((f"k={k} {name}", bool(ok), f"{lhs:.9g} vs {rhs:.9g}"))
    for k in (20, 40, 80):
        a = float(k) ** (-(k - 1))
        v = appendix_R(a, k) * k * k * (k - 1) / 2
        checks.append((f"k={k} R k^2 (k-1)/2 in [0.9, 1.1]", 0.9 <= v <= 1.1, f"{v:.6f}"))
    verdict(9, "large-k energy estimate", checks, t0)


def test_10_moebius(verdict):
    t0 = time.perf_counter()
    e = report.moebius_energies()
    W1 = e["W1"]
    q = e["W2"] / 2
    cands = {"6 sqrt5/5": 6 * S5 / 5, "24 sqrt5/5": 24 * S5 / 5}
    matched = [name for name, c in cands.items() if rel(q, c) < 1e-3]
    p = catalog.make("moebius")
    rng = np.random.default_rng(12345)
    z = rng.normal(size=200) + 1j * rng.normal(size=200)
    defect = antipodal_defect(p, z)
    bps = find_branch_points(p)
    checks = [
        ("W(M1)", rel(W1, 12 * (1 - 2 * S5 / 5)) < 1e-4, f"computed {report.fmt(W1)}, expected "
         f"{report.fmt(12 * (1 - 2 * S5 / 5))}"),
        ("quotient matches a candidate", bool(matched), f"W(M2)/2 = {report.fmt(q)}"),
        ("antipodal symmetry", defect < 1e-9, f"{defect:.2e}"),
        ("branch points {0, inf}", bps == [0j, complex("inf")], f"{bps}"),
    ]
    verdict(10, "Moebius strip example", checks, t0)


def test_11_energy_target(verdict):
    t0 = time.perf_counter()
    checks = []
    for W0 in (0.25, 1.0, 1.9):
        t = solve_energy_target(2, W0, find_energy_bracket(2, W0))
        r1, _ = find_component_roots(2, t)
        W = radial_energy(2, t, (0.0, r1), 1e-12)
        checks.append((f"W0={W0}", rel(W, W0) < 1e-5, f"t={t:.9g} W={W:.9g}"))
    k, t = scan_energy_target(5.0)
    r1, _ = find_component_roots(k, t)
    W = radial_energy(k, t, (0.0, r1), 1e-12)
    checks.append(("W0=5 by scanning k", 2 <= k <= 20 and rel(W, 5.0) < 1e-5, f"k={k} t={t:.9g} W={W:.9g}"))
    verdict(11, "energy-target solving", checks, t0)


def test_12_property_suites(verdict):
    t0 = time.perf_counter()
    targets = [
        "tests/test_dressing.py",
        "tests/test_lorentz.py",
        "tests/test_weierstrass.py::test_rotation_equivariance",
        "tests/test_diffgeo.py::test_step_halving_order",
    ]
    res = subprocess.run([sys.executable, "-m", "pytest", "-q", "-p", "no:cacheprovider", *targets],
                         cwd=ROOT, capture_output=True, text=True)
    tail = res.stdout.strip().splitlines()[-1] if res.stdout.strip() else res.stderr[-200:]
    checks = [("group laws, functoriality, equivariance, step halving", res.returncode == 0, tail)]
    verdict(12, "headless property suites", checks, t0)
