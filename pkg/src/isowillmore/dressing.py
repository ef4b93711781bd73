"""Constant K^C dressing of isotropic potentials: B_1 -> T_1 B_1 T_2^t.

In h-coordinates the action is linear: (h1..h4) -> P^{-1} T_1 P (h1..h4).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidElement
from .lorentz import is_complex_lorentz
from .potential import PATTERN, PATTERN_INV, IsotropicPotential, RationalFunction

_I2 = np.eye(2, dtype=complex)


@dataclass(frozen=True)
class DressingElement:
    T1: np.ndarray
    T2: np.ndarray = field(default_factory=lambda: _I2.copy())

    def __post_init__(self):
        T1 = np.asarray(self.T1, dtype=complex)
        T2 = np.asarray(self.T2, dtype=complex)
        if T1.shape != (4, 4) or T2.shape != (2, 2):
            raise InvalidElement("T1 must be 4x4 and T2 2x2")
        object.__setattr__(self, "T1", T1)
        object.__setattr__(self, "T2", T2)

    def validate(self, tol=1e-10):
        if not is_complex_lorentz(self.T1, tol):
            raise InvalidElement("T1 is not in SO(1,3,C)")
        if np.max(np.abs(self.T2.T @ self.T2 - _I2)) >= tol or abs(np.linalg.det(self.T2) - 1) >= tol:
            raise InvalidElement("T2 is not in SO(2,C)")
        if np.max(np.abs(self.T2 - _I2)) >= tol:
            # only the identity is known to preserve the (h, ih) column pattern
            raise InvalidElement("T2 other than the identity is not supported")
        return self

    def h_matrix(self):
        """The 4x4 matrix acting on (h1, h2, h3, h4)."""
        return PATTERN_INV @ self.T1 @ PATTERN

    def __matmul__(self, other):
        return compose(self, other)


def identity_element():
    return DressingElement(np.eye(4, dtype=complex))


def circle_element(t):
    """T_{1,t}: cos t, i sin t in the (0,1) block."""
    c, s = np.cos(t), np.sin(t)
    T = np.eye(4, dtype=complex)
    T[0, 0] = c
    T[0, 1] = 1j * s
    T[1, 0] = 1j * s
    T[1, 1] = c
    return DressingElement(T)


def boost_element(t):
    """T_{2,t}: cosh t, +-i sinh t in the (2,3) block."""
    c, s = np.cosh(t), np.sinh(t)
    T = np.eye(4, dtype=complex)
    T[2, 2] = c
    T[2, 3] = 1j * s
    T[3, 2] = -1j * s
    T[3, 3] = c
    return DressingElement(T)


GROUPS = {"circle": circle_element, "boost": boost_element}


def element(group, t):
    try:
        return GROUPS[group](t)
    except KeyError:
        raise ValueError(f"unknown group {group!r}; expected one of {sorted(GROUPS)}") from None


def compose(a, b):
    return DressingElement(a.T1 @ b.T1, a.T2 @ b.T2)


def _clean(c):
    # entries of P^-1 T P are exactly 0 for structural zeros; drop round-off
    c = complex(c)
    re = 0.0 if abs(c.real) < 1e-15 else c.real
    im = 0.0 if abs(c.imag) < 1e-15 else c.imag
    return complex(re, im)


def dress(p, T, tol=1e-10):
    """Apply a dressing element to a potential."""
    T.validate(tol)
    A = T.h_matrix()
    hs = p.hs
    out = []
    for i in range(4):
        acc = RationalFunction([0.0])
        for j in range(4):
            c = _clean(A[i, j])
            if c != 0:
                acc = acc + hs[j] * c
        out.append(acc)
    return IsotropicPotential(*out)


def family(p, group, ts):
    return [dress(p, element(group, t)) for t in ts]
