"""Lorentzian linear algebra on R^6_1 and C^4 (signature (1,3)).

The real form on R^6_1 is diag(-1, 1, 1, 1, 1, 1).  The complex 4x4 form
I_{1,3} = diag(-1, 1, 1, 1) is used bilinearly (never conjugated).
"""

import numpy as np

ETA6 = np.diag([-1.0, 1.0, 1.0, 1.0, 1.0, 1.0])
I13 = np.diag([-1.0, 1.0, 1.0, 1.0]).astype(complex)
SIGNATURE6 = np.array([-1.0, 1.0, 1.0, 1.0, 1.0, 1.0])
SIGNATURE5 = np.array([-1.0, 1.0, 1.0, 1.0, 1.0])


def minkowski_dot(a, b, signature=SIGNATURE6):
    """Diagonal-signature bilinear form over the last axis (broadcasting, no conjugation)."""
    a = np.asarray(a)
    b = np.asarray(b)
    return np.sum(signature * a * b, axis=-1)


def lorentz_inner(a, b):
    """-a0*b0 + sum_{j>=1} a_j*b_j on R^6_1 (works on stacked vectors)."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape[-1] != 6 or b.shape[-1] != 6:
        raise ValueError("lorentz_inner expects 6-vectors")
    return minkowski_dot(a, b, SIGNATURE6)


def complex_bilinear4(a, b):
    """-a0*b0 + a1*b1 + a2*b2 + a3*b3, bilinear over C."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.shape[-1] != 4 or b.shape[-1] != 4:
        raise ValueError("complex_bilinear4 expects 4-vectors")
    return -a[..., 0] * b[..., 0] + a[..., 1] * b[..., 1] + a[..., 2] * b[..., 2] + a[..., 3] * b[..., 3]


def lorentz_deviation(T):
    """(max |T^t I T - I|, |det T - 1|) for a 4x4 complex matrix."""
    T = np.asarray(T, dtype=complex)
    if T.shape != (4, 4):
        raise ValueError("expected a 4x4 matrix")
    form_err = np.max(np.abs(T.T @ I13 @ T - I13))
    det_err = abs(np.linalg.det(T) - 1.0)
    return float(form_err), float(det_err)


def is_complex_lorentz(T, tol=1e-10):
    """Membership test for SO(1,3,C): T^t I_{1,3} T = I_{1,3} and det T = 1."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    form_err, det_err = lorentz_deviation(T)
    return form_err < tol and det_err < tol
