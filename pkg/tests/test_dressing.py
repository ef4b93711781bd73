import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from isowillmore import catalog
from isowillmore.dressing import (
    DressingElement,
    boost_element,
    circle_element,
    compose,
    dress,
    element,
    family,
    identity_element,
)
from isowillmore.errors import InvalidElement
from isowillmore.potential import isotropy_residual

ts = st.floats(-3, 3, allow_nan=False)


def same_potential(p, q, tol=1e-10):
    return all(a.allclose(b, tol) for a, b in zip(p.hs, q.hs))


@given(ts, ts)
def test_circle_is_one_parameter_group(a, b):
    lhs = compose(circle_element(a), circle_element(b)).T1
    assert np.allclose(lhs, circle_element(a + b).T1, atol=1e-12)


@given(ts, ts)
def test_boost_is_one_parameter_group(a, b):
    lhs = compose(boost_element(a), boost_element(b)).T1
    assert np.allclose(lhs, boost_element(a + b).T1, rtol=1e-12, atol=1e-10)


@given(ts)
def test_inverse_and_identity(t):
    for g in (circle_element, boost_element):
        assert np.allclose((g(t) @ g(-t)).T1, np.eye(4), atol=1e-12)
        assert np.allclose((g(t) @ identity_element()).T1, g(t).T1)


@given(ts, ts, ts)
def test_associativity(a, b, c):
    A, B, C = circle_element(a), boost_element(b), circle_element(c)
    assert np.allclose(((A @ B) @ C).T1, (A @ (B @ C)).T1, rtol=1e-12, atol=1e-10)


@given(ts, ts)
def test_dress_functorial(a, b):
    p = catalog.make("sphere_family", 2)
    A, B = circle_element(a), boost_element(b / 2)
    assert same_potential(dress(dress(p, A), B), dress(p, compose(B, A)), 1e-9)


def test_identity_dressing_is_noop(veronese):
    assert same_potential(dress(veronese, identity_element()), veronese)


@given(ts)
def test_circle_action_on_h(t):
    p = catalog.make("sphere_family", 3)
    q = dress(p, circle_element(t))
    assert q.h1.allclose(p.h1) and q.h4.allclose(p.h4)
    assert q.h2.allclose(p.h2 * complex(np.exp(-1j * t)))
    assert q.h3.allclose(p.h3 * complex(np.exp(1j * t)))


@given(ts)
def test_boost_action_on_h(t):
    p = catalog.make("hyperbolic_family", 2)
    q = dress(p, boost_element(t))
    assert q.h1.allclose(p.h1 * math.exp(t)) and q.h4.allclose(p.h4 * math.exp(-t))
    assert q.h2.allclose(p.h2) and q.h3.allclose(p.h3)


def test_circle_pi_half_gives_hyperbolic_family():
    for k in (2, 3, 4):
        assert same_potential(dress(catalog.make("sphere_family", k), circle_element(math.pi / 2)),
                              catalog.make("hyperbolic_family", k))


@given(ts, ts)
def test_dressing_preserves_isotropy(a, b):
    p = dress(catalog.make("moebius"), compose(circle_element(a), boost_element(b)))
    assert isotropy_residual(p).is_zero()


def test_invalid_elements():
    with pytest.raises(InvalidElement):
        dress(catalog.make("sphere_family", 2), DressingElement(2 * np.eye(4)))
    rot = np.array([[math.cos(0.3), -math.sin(0.3)], [math.sin(0.3), math.cos(0.3)]])
    with pytest.raises(InvalidElement):
        DressingElement(np.eye(4), rot).validate()
    with pytest.raises(InvalidElement):
        DressingElement(np.eye(3))


def test_element_lookup_and_family(veronese):
    assert np.allclose(element("boost", 0.2).T1, boost_element(0.2).T1)
    with pytest.raises(ValueError):
        element("twist", 0.1)
    fam = family(veronese, "circle", [0.0, 0.5])
    assert len(fam) == 2 and same_potential(fam[0], veronese)
