import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from isowillmore import catalog
from isowillmore.dressing import circle_element, dress
from isowillmore.errors import InvalidPotential, PoleAt
from isowillmore.lorentz import complex_bilinear4
from isowillmore.potential import (
    PATTERN,
    PATTERN_INV,
    IsotropicPotential,
    RationalFunction,
    SpaceFormClass,
    bilinear_self,
    classify_space_form,
    isotropy_residual,
    minimality_vectors,
    pattern_vector,
    poly_divmod,
    poly_eval,
    poly_gcd,
    poly_mul,
    poly_trim,
)

coef = st.floats(-3, 3, allow_nan=False).filter(lambda x: abs(x) > 1e-3)


# ------------------------------------------------------------ polynomials

def test_poly_trim_strips_and_thresholds():
    assert np.array_equal(poly_trim([1, 2, 0, 0]), np.array([1, 2], dtype=complex))
    assert np.array_equal(poly_trim([1, 1e-14]), np.array([1], dtype=complex))
    assert np.array_equal(poly_trim([0, 0]), np.zeros(1))


@given(st.lists(coef, min_size=1, max_size=5), st.lists(coef, min_size=1, max_size=4))
def test_divmod_roundtrip(a, b):
    q, r = poly_divmod(a, b)
    back = np.zeros(max(len(a), q.size + len(b) - 1, r.size), dtype=complex)
    qb = poly_mul(q, b)
    back[: qb.size] += qb
    back[: r.size] += r
    ref = np.zeros_like(back)
    ref[: len(a)] = a
    assert np.allclose(back, ref, atol=1e-9 * max(1, np.max(np.abs(a))))


@given(coef, coef, coef)
def test_gcd_recovers_common_factor(r1, r2, r3):
    if min(abs(r1 - r2), abs(r1 - r3), abs(r2 - r3)) < 0.1:
        return
    a = poly_mul([-r1, 1], [-r2, 1])
    b = poly_mul([-r1, 1], [-r3, 1])
    g = poly_gcd(a, b)
    assert g.size == 2
    assert abs(g[0] + r1) < 1e-8


def test_gcd_splits_powers_of_z_exactly():
    g = poly_gcd([0, 0, 1, 2], [0, 0, 0, 5])
    assert np.array_equal(g, np.array([0, 0, 1], dtype=complex))


def test_poly_eval_horner():
    assert poly_eval(np.array([1, 2, 3], dtype=complex), 2.0) == 17


# ------------------------------------------------------- rational functions

def test_rational_arithmetic_and_reduction():
    f = RationalFunction([0, 1], [1, 1])  # z/(1+z)
    g = RationalFunction([1], [1, 1])
    s = f + g
    assert s.is_polynomial() and s.allclose(1)
    assert (f * RationalFunction([1, 1])).allclose(RationalFunction([0, 1]))
    assert (f - f).is_zero()


@given(st.floats(-2, 2), st.floats(-2, 2))
def test_derivative_matches_finite_difference(x, y):
    f = RationalFunction([1, 2, 0, 1], [2, 0, 1])  # (1+2z+z^3)/(2+z^2)
    z = complex(x, y)
    if abs(2 + z * z) < 0.3:
        return
    h = 1e-6
    fd = (f(z + h) - f(z - h)) / (2 * h)
    assert abs(f.derivative()(z) - fd) < 1e-6 * max(1, abs(fd))


def test_pole_raises():
    f = RationalFunction([1], [-1, 1])
    with pytest.raises(PoleAt):
        f(1.0)
    with pytest.raises(ZeroDivisionError):
        RationalFunction([1], [0])


# ---------------------------------------------------------------- potentials

def test_pattern_inverse_exact():
    assert np.allclose(PATTERN_INV @ PATTERN, np.eye(4), atol=1e-15)


def test_invalid_potential_rejected():
    with pytest.raises(InvalidPotential):
        IsotropicPotential.from_coeffs([0, 1], [0, 1], [0, 1], [0, 1])
    with pytest.raises(InvalidPotential):
        IsotropicPotential.from_coeffs([1], [0, 1], [0, 1], [0, 0, -1])  # h1' = 0


@pytest.mark.parametrize("name,k", [("sphere_family", 2), ("sphere_family", 5), ("hyperbolic_family", 3), ("moebius", None)])
def test_catalog_isotropy_exact(name, k):
    assert isotropy_residual(catalog.make(name, k)).is_zero()


def test_pattern_vector_example(veronese):
    # h1' = -6z^2, h2' = h3' = 2 sqrt3 i z, h4' = -2 at z = 0
    assert np.allclose(pattern_vector(veronese, 0.0), 0.5 * np.array([0, 0, -2, -2j]))


@given(st.floats(-2, 2), st.floats(-2, 2))
def test_bilinear_identity(x, y):
    p = dress(catalog.make("sphere_family", 3), circle_element(0.37))
    z = complex(x, y)
    d = p.derivative_values(z)
    lhs = bilinear_self(p, z)
    assert abs(lhs + (d[0] * d[3] + d[1] * d[2])) <= 1e-12 * max(1.0, np.max(np.abs(d)) ** 2)
    h = pattern_vector(p, z)
    assert lhs == pytest.approx(complex_bilinear4(h, h), abs=1e-12 * max(1.0, np.max(np.abs(d)) ** 2))


def test_zero_potential_pattern_vector():
    p = IsotropicPotential.from_coeffs([0, 1], [0, 1], [0, -1], [0, 1], validate=False)
    assert np.allclose(pattern_vector(p, 0.3) @ np.zeros(4), 0)


# ---------------------------------------------------------- classification

def test_minimality_examples(veronese, hyp2):
    c = minimality_vectors(veronese)
    assert c.dim == 1 and np.allclose(c.basis[0], [1, 0, 0, 0]) and c.norms[0] == pytest.approx(-1)
    assert c.cls is SpaceFormClass.Sphere
    c = minimality_vectors(hyp2)
    assert np.allclose(c.basis[0], [0, 1, 0, 0]) and c.norms[0] == pytest.approx(1)
    assert c.cls is SpaceFormClass.Hyperbolic


def test_moebius_is_hyperbolic(moebius):
    c = minimality_vectors(moebius)
    assert c.cls is SpaceFormClass.Hyperbolic and np.allclose(c.basis[0], [0, 1, 0, 0])


def test_circle_dressed_nonminimal(veronese):
    assert classify_space_form(dress(veronese, circle_element(0.3))) is SpaceFormClass.NonMinimal


def test_schedule_exact_points(veronese):
    for t, cls in [(0, "Sphere"), (math.pi / 2, "Hyperbolic"), (math.pi, "Sphere"), (3 * math.pi / 2, "Hyperbolic")]:
        assert str(classify_space_form(dress(veronese, circle_element(t)))) == cls
    for t in np.linspace(0.05, 2 * math.pi - 0.05, 32):
        if min(abs(t - s) for s in (math.pi / 2, math.pi, 3 * math.pi / 2)) > 0.04:
            assert classify_space_form(dress(veronese, circle_element(t))) is SpaceFormClass.NonMinimal


def test_euclidean_class():
    # v = (1, 1, 0, 0) is lightlike: needs h3' = 0 identically -> use h2, h3 with h3 constant
    p = IsotropicPotential.from_coeffs([0, 1], [0, 1], [1], [0, 0], validate=False)
    c = minimality_vectors(p)
    assert c.cls in (SpaceFormClass.Euclidean, SpaceFormClass.Degenerate)
