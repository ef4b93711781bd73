import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate as sint

from isowillmore import catalog
from isowillmore.energy import (
    appendix_bound_report,
    boundary_poly,
    closed_form_roots_k2,
    component_energies,
    energy_sweep,
    find_component_roots,
    radial_density,
    radial_energy,
    root_residual,
    scan_energy_target,
    solve_energy_target,
    surface_energy,
)
from isowillmore.errors import BadK, BoundViolated, NoBracket

S3 = math.sqrt(3)


def test_roots_at_zero():
    r1, r2 = find_component_roots(2, 0.0)
    assert r1 == pytest.approx((math.sqrt(6) - math.sqrt(2)) / 2, abs=1e-12)
    assert r2 == pytest.approx((math.sqrt(6) + math.sqrt(2)) / 2, abs=1e-12)
    assert abs(boundary_poly(2, 0.0, r1 * r1)) < 1e-12


@given(st.floats(-40, 40))
def test_closed_form_roots_agree(t):
    a = find_component_roots(2, t)
    b = closed_form_roots_k2(t)
    assert a == pytest.approx(b, rel=1e-9)


@given(st.integers(2, 30), st.floats(-60, 30))
def test_roots_ordered_and_small_residual(k, t):
    r1, r2 = find_component_roots(k, t)
    assert 0 < r1 < r2
    assert root_residual(k, t, r1) < 1e-12 and root_residual(k, t, r2) < 1e-12


def test_bad_k():
    with pytest.raises(BadK):
        find_component_roots(1, 0.0)


def test_component_energies_at_zero():
    rep = component_energies(2, 0.0)
    assert rep.W1 == pytest.approx(4 - 2 * S3, rel=1e-9)
    assert rep.W2 == pytest.approx(4 * S3, rel=1e-9)
    assert rep.W3 == pytest.approx(rep.W1, rel=1e-9)
    assert rep.total == pytest.approx(8.0, rel=1e-9)


@pytest.mark.parametrize("k", [2, 3, 4, 7])
@pytest.mark.parametrize("t", [-3.0, 0.0, 1.3])
def test_total_is_4k(k, t):
    assert component_energies(k, t).total == pytest.approx(4 * k, rel=1e-8)


def test_density_matches_scipy():
    r1, r2 = find_component_roots(3, 0.4)
    for lo, hi in ((0.0, r1), (r1, r2)):
        ref, _ = sint.quad(lambda r: float(radial_density(3, 0.4, r)), lo, hi, epsabs=0, epsrel=1e-11, limit=200)
        assert radial_energy(3, 0.4, (lo, hi)) == pytest.approx(ref, rel=1e-9)


def test_density_matches_catalog():
    r = np.linspace(0.05, 3, 40)
    assert np.allclose(radial_density(2, 0.7, r), catalog.closed_form("hyperbolic_family", 2, "radial_density", 0.7, r),
                       rtol=1e-13)


def test_small_e2t_reading():
    # W1 -> 2, W2 -> 6 as t -> -inf; the decimals match e^{2t} = 0.000039
    rep = component_energies(2, catalog.LN39 / 2)
    assert rep.W1 == pytest.approx(1.999910062, rel=1e-5)
    assert rep.W2 == pytest.approx(6.000089931, rel=1e-5)


def test_limits():
    lo, hi = component_energies(2, -30.0), component_energies(2, 30.0)
    assert lo.W1 == pytest.approx(2.0, abs=1e-6) and lo.W2 == pytest.approx(6.0, abs=1e-6)
    # t -> -t swaps M1 and M3
    assert hi.W3 == pytest.approx(lo.W1, rel=1e-9) and hi.W1 == pytest.approx(lo.W3, abs=1e-12)


def test_surface_energy_matches_radial(veronese, hyp2):
    assert surface_energy(veronese) == pytest.approx(8.0, rel=1e-5)
    r1, r2 = find_component_roots(2, 0.0)
    assert surface_energy(hyp2, ("disk", r1)) == pytest.approx(4 - 2 * S3, rel=1e-5)


def test_sweep_rows():
    rows = energy_sweep(2, [0.0, 0.5])
    assert len(rows) == 2 and rows[0].error is None
    assert rows[0].W1 == pytest.approx(4 - 2 * S3, rel=1e-9)
    assert rows[1].W1 + rows[1].W2 + rows[1].W3 == pytest.approx(rows[1].total)


@settings(max_examples=10)
@given(st.floats(0.1, 1.9))
def test_solve_energy_target(W0):
    t = solve_energy_target(2, W0, (-30.0, 15.0), tol=1e-9)
    r1, _ = find_component_roots(2, t)
    assert radial_energy(2, t, (0.0, r1)) == pytest.approx(W0, rel=1e-7)


def test_energy_target_outside_range():
    with pytest.raises(NoBracket):
        solve_energy_target(2, 2.5, (-30.0, 15.0))
    k, t = scan_energy_target(5.0)
    r1, _ = find_component_roots(k, t)
    assert radial_energy(k, t, (0.0, r1)) == pytest.approx(5.0, rel=1e-5)


@pytest.mark.parametrize("k", [10, 20, 50])
def test_appendix(k):
    rep = appendix_bound_report(k)
    assert rep.rho1 > rep.rho1_bound
    assert rep.W1 >= rep.lower_bound
    assert rep.W1 == pytest.approx(2 * (k - 1), rel=1e-8)
    assert rep.I2 > rep.R_minorant / 9
    assert rep.violations() == ["I2 > R/9"]
    with pytest.raises(BoundViolated):
        appendix_bound_report(k, strict=True)


def test_appendix_needs_k4():
    with pytest.raises(BadK):
        appendix_bound_report(3)
