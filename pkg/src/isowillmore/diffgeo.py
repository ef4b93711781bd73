"""Finite-difference geometry of projected surfaces.

All routines take a weierstrass.Surface (vectorised z -> R^n with a diagonal
signature).  Derivatives use second-order central stencils combined by one
Richardson step over {h, h/2}; the default step is DEFAULT_STEP*max(1, |z|).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BranchPoint, DegenerateFrame, NotOnBoundary
from .lorentz import SIGNATURE6
from .potential import IsotropicPotential, SpaceFormClass
from .weierstrass import Surface, evaluate_lift, make_surface, sphere_coords

DEFAULT_STEP = 1e-3
# Gauss curvature nests a Laplacian around first derivatives; rounding noise of
# the inner stage is amplified by 1/H^2, so the outer step is larger.
CURVATURE_STEP = 1e-2
CURVATURE_INNER_STEP = 2e-3
# with an exact conformal factor only the Laplacian is differenced
CURVATURE_STEP_EXACT = 5e-3
# Hopf data needs second derivatives of the lift (1/h^2 rounding); 4e-3 with
# Richardson balances truncation and rounding for randomly dressed members.
HOPF_STEP = 4e-3
BRANCH_TOL = 1e-12


@dataclass(frozen=True)
class GeometrySample:
    z: complex
    conf: float
    K: float
    mean_res: float
    conf_res: float
    kappa2: float
    iso_res: float


def _steps(z, step):
    z = np.asarray(z, dtype=complex)
    h = (DEFAULT_STEP if step is None else step) * np.maximum(1.0, np.abs(z))
    return z, h


def _as_surface(s, form=SpaceFormClass.Sphere):
    if isinstance(s, Surface):
        return s
    if isinstance(s, IsotropicPotential):
        return make_surface(s, form)
    raise TypeError("expected a Surface or an IsotropicPotential")


# ---------------------------------------------------------------- derivatives

def _first(f, z, h):
    e = h[..., None]
    zz = z[..., None] + e * np.array([1, -1, 1j, -1j])
    F = f(zz)
    hh = h[..., None]
    fx = (F[..., 0, :] - F[..., 1, :]) / (2 * hh)
    fy = (F[..., 2, :] - F[..., 3, :]) / (2 * hh)
    return fx, fy


def first_derivatives(f, z, h, richardson=True):
    fx, fy = _first(f, z, h)
    if not richardson:
        return fx, fy
    gx, gy = _first(f, z, h / 2)
    return (4 * gx - fx) / 3, (4 * gy - fy) / 3


_OFF9 = np.array([0, 1, -1, 1j, -1j, 1 + 1j, 1 - 1j, -1 + 1j, -1 - 1j])


def _second(f, z, h):
    zz = z[..., None] + h[..., None] * _OFF9
    F = f(zz)
    hh = h[..., None]
    f0 = F[..., 0, :]
    fx = (F[..., 1, :] - F[..., 2, :]) / (2 * hh)
    fy = (F[..., 3, :] - F[..., 4, :]) / (2 * hh)
    fxx = (F[..., 1, :] - 2 * f0 + F[..., 2, :]) / hh**2
    fyy = (F[..., 3, :] - 2 * f0 + F[..., 4, :]) / hh**2
    fxy = (F[..., 5, :] - F[..., 6, :] - F[..., 7, :] + F[..., 8, :]) / (4 * hh**2)
    return f0, fx, fy, fxx, fyy, fxy


def second_derivatives(f, z, h, richardson=True):
    """(f, f_x, f_y, f_xx, f_yy, f_xy) from the 9-point stencil."""
    a = _second(f, z, h)
    if not richardson:
        return a
    b = _second(f, z, h / 2)
    return (a[0],) + tuple((4 * bb - aa) / 3 for aa, bb in zip(a[1:], b[1:]))


# ------------------------------------------------------------------- metric

def _conf(surface, z, h):
    fx, fy = first_derivatives(surface, z, h)
    return 0.5 * (surface.dot(fx, fx) + surface.dot(fy, fy))


def _check_branch(conf, z):
    bad = conf < BRANCH_TOL
    if np.any(bad):
        zb = np.asarray(z)[bad].flat[0] if np.ndim(z) else complex(z)
        cb = np.asarray(conf)[bad].flat[0] if np.ndim(conf) else float(conf)
        raise BranchPoint(zb, cb)


def conformal_factor(surface, z, step=None, check=True):
    """e^{2u} = 2<f_z, f_zbar> (ambient form of the surface)."""
    surface = _as_surface(surface)
    z, h = _steps(z, step)
    c = _conf(surface, z, h)
    if check:
        _check_branch(c, z)
    return c[()] if c.ndim == 0 else c


def _log_conf(surface, z, h_in, exact):
    c = surface.conf(z) if exact else _conf(surface, z, h_in)
    _check_branch(c, z)
    return 0.5 * np.log(c)


def _laplace_u(surface, z, H, h_in, exact):
    zz = z[..., None] + H[..., None] * np.array([0, 1, -1, 1j, -1j])
    u = _log_conf(surface, zz, h_in[..., None], exact)
    lap = (u[..., 1] + u[..., 2] + u[..., 3] + u[..., 4] - 4 * u[..., 0]) / H**2
    return lap, u[..., 0]


def gauss_curvature(surface, z, step=None, richardson=True, inner_step=None, exact=None):
    """K = -e^{-2u} Lap_0 u with u = log(conf)/2.

    exact=None uses the surface's lift-derivative conformal factor when it has
    one (surfaces built by make_surface), so only the Laplacian is differenced;
    exact=False forces nested differences with inner_step.
    """
    surface = _as_surface(surface)
    has = getattr(surface, "conf", None) is not None
    if exact and not has:
        raise ValueError("surface carries no exact conformal factor")
    exact = has if exact is None else bool(exact)
    default = CURVATURE_STEP_EXACT if exact else CURVATURE_STEP
    z, H = _steps(z, default if step is None else step)
    _, h_in = _steps(z, CURVATURE_INNER_STEP if inner_step is None else inner_step)
    h_in = np.minimum(h_in, H / 4)
    lap, u = _laplace_u(surface, z, H, h_in, exact)
    if richardson:
        lap2, _ = _laplace_u(surface, z, H / 2, h_in, exact)
        lap = (4 * lap2 - lap) / 3
    K = -np.exp(-2 * u) * lap
    return K[()] if K.ndim == 0 else K


def _form_sign(surface, form):
    if form is None:
        kind = surface.kind
    else:
        kind = "sphere" if SpaceFormClass(form) is SpaceFormClass.Sphere else "hyperbolic"
    if kind == "sphere":
        return 2.0
    if kind == "hyperbolic":
        return -2.0
    raise ValueError("mean curvature residual needs a sphere or hyperbolic projection")


def mean_curvature_residual(surface, z, form=None, step=None):
    """|e^{-2u} Lap_0 y + 2y| (S^4) or |e^{-2u} Lap_0 y - 2y| (H^4); zero iff minimal."""
    surface = _as_surface(surface)
    sgn = _form_sign(surface, form)
    z, h = _steps(z, step)
    f0, fx, fy, fxx, fyy, _ = second_derivatives(surface, z, h)
    conf = 0.5 * (surface.dot(fx, fx) + surface.dot(fy, fy))
    _check_branch(conf, z)
    res = (fxx + fyy) / conf[..., None] + sgn * f0
    out = np.linalg.norm(res, axis=-1)
    return out[()] if out.ndim == 0 else out


def conformality_residual(surface, z, step=None):
    """|<f_z, f_z>| / <f_z, f_zbar> (zero for conformal maps)."""
    surface = _as_surface(surface)
    z, h = _steps(z, step)
    fx, fy = first_derivatives(surface, z, h)
    fz = 0.5 * (fx - 1j * fy)
    num = np.abs(surface.dot(fz, fz))
    den = np.real(surface.dot(fz, np.conj(fz)))
    out = num / den
    return out[()] if out.ndim == 0 else out


# ----------------------------------------------------------------- Hopf data

def _sphere_surface(obj):
    if isinstance(obj, IsotropicPotential):
        return make_surface(obj, SpaceFormClass.Sphere)
    if isinstance(obj, Surface):
        if obj.kind != "sphere":
            raise ValueError("Hopf data is computed through the S^4 projection only")
        return obj
    raise TypeError("expected a potential or an S^4 surface")


def _lorentz(a, b):
    return np.sum(SIGNATURE6 * a * b, axis=-1)


def hopf_data(p, z, step=None, check=True):
    """(|kappa|^2, |<kappa, kappa>|) at z for the S^4 projection of p.

    X = (1, y) is a light-cone lift of the S^4 projection; the normal part of
    X_zz (complement of span{X, X_x, X_y, X_zzbar}) is e^{omega} kappa.  Both
    returned quantities are densities w.r.t. |dz|^2 divided by e^{2omega},
    i.e. the conformally invariant |kappa|^2 and |<kappa,kappa>|.
    """
    surf = _sphere_surface(p)
    z, h = _steps(z, HOPF_STEP if step is None else step)

    def X(w):
        y = surf(w)
        return np.concatenate([np.ones(y.shape[:-1] + (1,)), y], axis=-1)

    f0, fx, fy, fxx, fyy, fxy = second_derivatives(X, z, h)
    Xzz = 0.25 * (fxx - fyy - 2j * fxy)
    Xzzb = 0.25 * (fxx + fyy)
    conf = 0.5 * (_lorentz(fx, fx) + _lorentz(fy, fy))
    if check:
        _check_branch(conf, z)
    B = np.stack([f0, fx, fy, Xzzb], axis=-2)  # (..., 4, 6)
    G = np.einsum("...ik,k,...jk->...ij", B, SIGNATURE6, B)
    ev = np.linalg.eigvalsh(G)
    cond = np.min(np.abs(ev), axis=-1) / np.max(np.abs(ev), axis=-1)
    if check and np.any(cond < 1e-10):
        raise DegenerateFrame("V-basis Gram matrix is singular")
    rhs = np.einsum("...ik,k,...k->...i", B, SIGNATURE6, Xzz)
    coef = np.linalg.solve(G.astype(complex), rhs[..., None])[..., 0]
    kap = Xzz - np.einsum("...i,...ik->...k", coef, B)
    k2 = np.real(_lorentz(kap, np.conj(kap))) / conf
    iso = np.abs(_lorentz(kap, kap)) / conf
    if k2.ndim == 0:
        return float(k2), float(iso)
    return k2, iso


def kappa2(p, z, step=None):
    return hopf_data(p, z, step, check=False)[0]


def sample(p, z, form=SpaceFormClass.Sphere, axis=1, step=None):
    """All pointwise quantities at a single z."""
    surf = make_surface(p, form, axis)
    k2, iso = hopf_data(p, z, step)
    return GeometrySample(
        z=complex(z),
        conf=float(conformal_factor(surf, z, step)),
        K=float(gauss_curvature(surf, z, step)),
        mean_res=float(mean_curvature_residual(surf, z, step=step)),
        conf_res=float(conformality_residual(surf, z, step)),
        kappa2=k2,
        iso_res=iso,
    )


# ----------------------------------------------------------------- umbilics

def umbilic_scan(p, radii, ntheta=16, step=None):
    """[(r, min_theta |kappa|^2)] over a ntheta-point theta grid per radius."""
    theta = 2 * np.pi * np.arange(ntheta) / ntheta
    out = []
    for r in radii:
        k2 = kappa2(p, r * np.exp(1j * theta), step)
        out.append((float(r), float(np.min(k2))))
    return out


def _golden_min(f, a, b, xtol):
    g = (np.sqrt(5) - 1) / 2
    c, d = b - g * (b - a), a + g * (b - a)
    fc, fd = f(c), f(d)
    while b - a > xtol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - g * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + g * (b - a)
            fd = f(d)
    return 0.5 * (a + b)


def locate_umbilic_circles(p, r_lo, r_hi, n=400, ntheta=16, rel_threshold=1e-8, xtol=1e-11):
    """Radii in [r_lo, r_hi] of circles on which kappa vanishes.

    Candidate minima of the scan are refined by golden-section search on
    |kappa|^2 along theta = 0 and accepted when the refined value is below
    rel_threshold times the largest scanned value.
    """
    rs = np.linspace(r_lo, r_hi, n)
    scan = np.array([k for _, k in umbilic_scan(p, rs, ntheta)])
    scale = np.max(scan)
    found = []
    for i in range(1, n - 1):
        if scan[i] <= scan[i - 1] and scan[i] <= scan[i + 1]:
            r = _golden_min(lambda x: kappa2(p, complex(x)), rs[i - 1], rs[i + 1], xtol)
            theta = 2 * np.pi * np.arange(ntheta) / ntheta
            kmin = float(np.max(kappa2(p, r * np.exp(1j * theta))))
            if kmin < rel_threshold * scale:
                found.append((r, kmin))
    return found


def branch_markers(surface, zs, step=None):
    """Subset of zs where the conformal factor falls below the branch threshold."""
    surface = _as_surface(surface)
    zs = np.asarray(zs, dtype=complex)
    c = conformal_factor(surface, zs, step, check=False)
    return zs[c < BRANCH_TOL]


def inverted_sphere_surface(p):
    """S^4 projection in the chart w = 1/z.  Stencils never sample w = 0 itself,
    so first-order quantities are available at z = infinity."""
    return Surface(lambda w: sphere_coords(evaluate_lift(p, 1.0 / w, reduce=True)), np.ones(5), "sphere", p)


def find_branch_points(p, nr=40, ntheta=16, step=None):
    """Branch points of the S^4 surface, scanning |z| <= 1 and |1/z| <= 1.

    Returns the sorted list of z values (complex('inf') for the point at
    infinity) whose conformal factor is below BRANCH_TOL.
    """
    rs = np.linspace(0.0, 1.0, nr)
    theta = 2 * np.pi * np.arange(ntheta) / ntheta
    zs = np.concatenate([[0.0], (rs[1:, None] * np.exp(1j * theta)[None, :]).ravel()])
    out = []
    for surf, inv in ((make_surface(p, SpaceFormClass.Sphere), False), (inverted_sphere_surface(p), True)):
        c = conformal_factor(surf, zs, step, check=False)
        for w in zs[c < BRANCH_TOL]:
            if inv:
                if abs(w) == 1.0:
                    continue  # already seen in the z chart
                out.append(complex("inf") if w == 0 else 1 / w)
            else:
                out.append(complex(w))
    return sorted(set(out), key=abs)


# ----------------------------------------------------------- boundary angle

def crossing_angle(sphere_surface, z, index, step=None):
    """Angle between the surface and the great hypersphere {x_index = 0} at z.

    The transverse tangent vector is the radial derivative (orthogonal to the
    crossing circle by conformality); the angle is arcsin of its normalized
    component along e_index.
    """
    z = complex(z)
    h = (DEFAULT_STEP if step is None else step) * max(1.0, abs(z))
    e = z / abs(z) if z != 0 else 1.0
    zs = np.array([z + h * e, z - h * e, z + 0.5 * h * e, z - 0.5 * h * e])
    F = sphere_surface(zs)
    d1 = (F[0] - F[1]) / (2 * h)
    d2 = (F[2] - F[3]) / h
    yr = (4 * d2 - d1) / 3
    s = abs(yr[index]) / np.linalg.norm(yr)
    return float(np.arcsin(min(1.0, s)))


def boundary_angle(p, r_circle, theta, axis=1, tol=1e-8, step=None):
    """Intersection angle with the ideal boundary, seen in S^4.

    The ideal boundary of the H^4 picture (dividing by Y[axis]) is the equator
    {x_axis = 0} of the S^4 picture.
    """
    z = r_circle * np.exp(1j * theta)
    if isinstance(p, Surface):
        surf = p
        y = surf(np.array([z]))[0]
        div = abs(y[axis - 1]) / np.linalg.norm(y)
    else:
        Y = evaluate_lift(p, z, reduce=True)
        div = abs(Y[axis]) / np.linalg.norm(Y)
        surf = make_surface(p, SpaceFormClass.Sphere)
    if div > tol:
        raise NotOnBoundary(f"divisor {div:.3g} does not vanish at r={r_circle}, theta={theta}")
    return crossing_angle(surf, z, axis - 1, step)
