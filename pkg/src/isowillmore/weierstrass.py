"""Explicit light-cone lift of isotropic Willmore surfaces, its dual, R_lambda, projections."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BoundaryPoint, EmptyGrid, NonUnitLambda, PoleAt
from .lorentz import SIGNATURE5, lorentz_inner
from .potential import SpaceFormClass, poly_der, poly_divmod, poly_eval, poly_gcd, poly_mul

# The hyperbolic sheet containing the central disk |z| < r1 of the k-families
# (called the upper component there) has y0/y1 < 0.
UPPER_SHEET = -1


# ------------------------------------------------------------------ lift data

def _reduced_pair(p, i, j):
    """Polynomials (A, B) proportional to (h_i', h_j') with common factors removed.

    (h_i', h_j') = (N_i/D_i, N_j/D_j) ~ (N_i D_j, N_j D_i) / g, g = gcd.  Using
    (A, B) instead of the derivatives rescales the lift by a positive function,
    which leaves the projective class unchanged and removes spurious zeros.
    """
    key = f"_pair{i}{j}"
    cached = p.__dict__.get(key)
    if cached is not None:
        return cached
    d = p.derivatives()
    a = poly_mul(d[i].num, d[j].den)
    b = poly_mul(d[j].num, d[i].den)
    g = poly_gcd(a, b)
    if g.size > 1:
        a, _ = poly_divmod(a, g)
        b, _ = poly_divmod(b, g)
    out = (a, b)
    object.__setattr__(p, key, out)
    return out


def _weights(p, i, j, z, reduce):
    if reduce:
        A, B = _reduced_pair(p, i, j)
        wa = poly_eval(A, z)
        wb = poly_eval(B, z)
    else:
        d = p.derivatives()
        wa = np.asarray(d[i](z))
        wb = np.asarray(d[j](z))
    return wa, wb


def _assemble(wa, wb, va, vb, vc):
    Y = (np.abs(wa) ** 2)[..., None] * va + (np.abs(wb) ** 2)[..., None] * vb
    cross = (wa * np.conj(wb))[..., None] * vc
    return np.real(Y + 2 * np.real(cross))


def _lift_blocks(H, C=None):
    # C holds the conjugates; passing it separately gives the polarised lift
    C = np.conj(H) if C is None else C
    h1, h2, h3, h4 = (H[..., k] for k in range(4))
    c1, c2, c3, c4 = (C[..., k] for k in range(4))
    n1, n2, n3, n4 = (H[..., k] * C[..., k] for k in range(4))
    va = np.stack(
        [1 + n2 + n4, 1 - n2 + n4, -1j * (-c2 * h4 + h2 * c4), -(c2 * h4 + h2 * c4), 1j * (c2 - h2), c2 + h2],
        axis=-1,
    )
    vb = np.stack(
        [1 + n1 + n3, -(1 + n1 - n3), 1j * (-c1 * h3 + h1 * c3), c1 * h3 + h1 * c3, 1j * (h3 - c3), -(h3 + c3)],
        axis=-1,
    )
    vc = np.stack(
        [
            -c1 * h2 + c3 * h4,
            c1 * h2 + c3 * h4,
            -1j * (1 + c1 * h4 + h2 * c3),
            -(1 - c1 * h4 + h2 * c3),
            1j * (-c1 + h4),
            -(c1 + h4),
        ],
        axis=-1,
    )
    return va, vb, vc


def _dual_blocks(H, C=None):
    C = np.conj(H) if C is None else C
    h1, h2, h3, h4 = (H[..., k] for k in range(4))
    c1, c2, c3, c4 = (C[..., k] for k in range(4))
    n1, n2, n3, n4 = (H[..., k] * C[..., k] for k in range(4))
    va = np.stack(
        [1 + n3 + n4, -(1 - n3 + n4), -1j * (c3 * h4 - h3 * c4), c3 * h4 + h3 * c4, 1j * (-c3 + h3), -(c3 + h3)],
        axis=-1,
    )
    vb = np.stack(
        [1 + n1 + n2, 1 + n1 - n2, -1j * (-c1 * h2 + h1 * c2), -c1 * h2 - h1 * c2, -1j * (h2 - c2), h2 + c2],
        axis=-1,
    )
    vc = np.stack(
        [
            -c1 * h3 + c2 * h4,
            -c1 * h3 - c2 * h4,
            1j * (1 + c1 * h4 + c2 * h3),
            1 - c1 * h4 + c2 * h3,
            1j * (c1 - h4),
            c1 + h4,
        ],
        axis=-1,
    )
    return va, vb, vc


def evaluate_lift(p, z, reduce=False):
    """Y_1(z) of the explicit Weierstrass formula, shape (..., 6).

    reduce=False evaluates the formula verbatim (weights |h1'|^2, |h2'|^2,
    h1' conj(h2')).  reduce=True replaces (h1', h2') by the coprime polynomial
    pair proportional to it; same projective class, no spurious zeros.
    """
    z = np.asarray(z, dtype=complex)
    H = p.values(z)
    wa, wb = _weights(p, 0, 1, z, reduce)
    return _assemble(wa, wb, *_lift_blocks(H))


def evaluate_dual(p, z, reduce=False):
    """Lift of the dual surface, weights |h1'|^2, |h3'|^2, h1' conj(h3')."""
    z = np.asarray(z, dtype=complex)
    H = p.values(z)
    wa, wb = _weights(p, 0, 2, z, reduce)
    return _assemble(wa, wb, *_dual_blocks(H))


def _weight_derivs(p, i, j, z, reduce):
    if reduce:
        A, B = _reduced_pair(p, i, j)
        return poly_eval(poly_der(A), z), poly_eval(poly_der(B), z)
    key = "_second_der"
    dd = p.__dict__.get(key)
    if dd is None:
        dd = tuple(d.derivative() for d in p.derivatives())
        object.__setattr__(p, key, dd)
    return np.asarray(dd[i](z)), np.asarray(dd[j](z))


def _polarised(blocks, H, C, wa, wb, qa, qb):
    """The lift with holomorphic data (H, wa, wb) and antiholomorphic data
    (C, qa, qb) treated as independent; equals the lift when C = conj(H) etc."""
    va, vb, vc = blocks(H, C)
    vc_bar = np.conj(blocks(np.conj(C), np.conj(H))[2])
    return (
        (wa * qa)[..., None] * va
        + (wb * qb)[..., None] * vb
        + (wa * qb)[..., None] * vc
        + (qa * wb)[..., None] * vc_bar
    )


def lift_with_derivative(p, z, reduce=False, dual=False):
    """(Y, Y_z) at z; Y_z is exact up to rounding.

    With the conjugates frozen the lift is a quadratic polynomial in the
    holomorphic data, so a symmetric difference along their derivative
    recovers Y_z without truncation error.
    """
    z = np.asarray(z, dtype=complex)
    j = 2 if dual else 1
    blocks = _dual_blocks if dual else _lift_blocks
    H = p.values(z)
    dH = p.derivative_values(z)
    wa, wb = _weights(p, 0, j, z, reduce)
    da, db = _weight_derivs(p, 0, j, z, reduce)
    C, qa, qb = np.conj(H), np.conj(wa), np.conj(wb)
    size = np.maximum(np.max(np.abs(H), axis=-1), np.maximum(np.abs(wa), np.abs(wb)))
    dsize = np.maximum(np.max(np.abs(dH), axis=-1), np.maximum(np.abs(da), np.abs(db)))
    eps = np.where(dsize > 0, np.maximum(size, 1.0) / np.where(dsize > 0, dsize, 1.0), 1.0)
    e = eps[..., None]
    plus = _polarised(blocks, H + e * dH, C, wa + eps * da, wb + eps * db, qa, qb)
    minus = _polarised(blocks, H - e * dH, C, wa - eps * da, wb - eps * db, qa, qb)
    Yz = (plus - minus) / (2 * e)
    Y = np.real(_polarised(blocks, H, C, wa, wb, qa, qb))
    return Y, Yz


def exact_conformal_factor(p, z, form=SpaceFormClass.Sphere, axis=1, dual=False, reduce=True):
    """Conformal factor of the S^4 or H^4 projection from the lift derivative.

    For a null lift Y and y = Y / Y[l] (l = 0 on S^4, l = axis on H^4) one has
    |dy|^2 = |dY|^2 / Y[l]^2, so e^{2u} = 2 <Y_z, conj Y_z> / Y[l]^2.
    """
    Y, Yz = lift_with_derivative(p, z, reduce, dual)
    l = 0 if _form(form) is SpaceFormClass.Sphere else axis
    g = np.real(lorentz_inner(Yz, np.conj(Yz)))
    return 2 * g / Y[..., l] ** 2


def r_lambda(lam):
    lam = complex(lam)
    if abs(abs(lam) - 1) > 1e-12:
        raise NonUnitLambda(f"|lambda| = {abs(lam)!r} != 1")
    R = np.eye(6)
    R[4, 4] = ((lam + 1 / lam) / 2).real
    R[4, 5] = ((lam - 1 / lam) / (-2j)).real
    R[5, 4] = ((lam - 1 / lam) / (2j)).real
    R[5, 5] = ((lam + 1 / lam) / 2).real
    return R


def associated_family(Y, lam):
    return np.asarray(Y) @ r_lambda(lam).T


def lightcone_ratio(Y):
    Y = np.asarray(Y, dtype=float)
    return np.abs(lorentz_inner(Y, Y)) / np.sum(Y * Y, axis=-1)


# ---------------------------------------------------------------- projections

@dataclass(frozen=True)
class SurfacePoint:
    x: np.ndarray
    form: SpaceFormClass
    sheet: int = 0

    def quadric_residual(self):
        if self.form is SpaceFormClass.Sphere:
            return abs(float(np.sum(self.x**2)) - 1.0)
        return abs(float(np.sum(SIGNATURE5 * self.x**2)) + 1.0)


def _form(form):
    if isinstance(form, SpaceFormClass):
        return form
    key = str(form).lower()
    if key in ("sphere", "s4", "s"):
        return SpaceFormClass.Sphere
    if key in ("hyperbolic", "h4", "h"):
        return SpaceFormClass.Hyperbolic
    raise ValueError(f"unsupported projection form {form!r}")


def sphere_coords(Y):
    Y = np.asarray(Y)
    return Y[..., 1:] / Y[..., :1]


def hyperbolic_coords(Y, axis=1):
    Y = np.asarray(Y)
    rest = [i for i in range(6) if i != axis]
    return Y[..., rest] / Y[..., axis : axis + 1]


def project(Y, form=SpaceFormClass.Sphere, axis=1, rtol=1e-12):
    """Project a single lift to S^4 ((y1..y5)/y0) or H^4 (others / Y[axis])."""
    Y = np.asarray(Y, dtype=float)
    form = _form(form)
    scale = np.linalg.norm(Y)
    if form is SpaceFormClass.Sphere:
        if abs(Y[0]) < rtol * scale:
            raise BoundaryPoint(msg="y0 vanishes")
        return SurfacePoint(sphere_coords(Y), form)
    if axis == 0:
        raise ValueError("hyperbolic projection axis must be spacelike (1..5)")
    if abs(Y[axis]) < rtol * scale:
        raise BoundaryPoint()
    x = hyperbolic_coords(Y, axis)
    return SurfacePoint(x, form, int(np.sign(Y[0] / Y[axis])))


def poincare(x):
    """Ball-model coordinates x_vec/(1+|x0|) of points on either sheet."""
    x = np.asarray(x)
    return x[..., 1:] / (1 + np.abs(x[..., :1]))


# ------------------------------------------------------------------- surfaces

class Surface:
    """A vectorised map z -> R^n with a diagonal ambient signature.

    kind is 'sphere', 'hyperbolic' or 'lift'.  Used by diffgeo.
    """

    def __init__(self, func, signature, kind, potential=None, axis=None, conf=None):
        self.func = func
        self.signature = np.asarray(signature, dtype=float)
        self.kind = kind
        self.potential = potential
        self.axis = axis
        self.conf = conf  # optional z -> conformal factor without differencing

    def __call__(self, z):
        return self.func(np.asarray(z, dtype=complex))

    def dot(self, a, b):
        return np.sum(self.signature * a * b, axis=-1)


def make_surface(p, form=SpaceFormClass.Sphere, axis=1, dual=False, reduce=True):
    """Surface built from a potential: S^4 or H^4 projection, or the raw lift ('lift')."""
    lift = evaluate_dual if dual else evaluate_lift
    if form == "lift":
        return Surface(lambda z: lift(p, z, reduce=reduce), np.r_[-1.0, np.ones(5)], "lift", p)
    form = _form(form)

    def conf(z):
        return exact_conformal_factor(p, z, form, axis, dual, reduce)

    if form is SpaceFormClass.Sphere:
        return Surface(lambda z: sphere_coords(lift(p, z, reduce=reduce)), np.ones(5), "sphere", p, conf=conf)
    return Surface(
        lambda z: hyperbolic_coords(lift(p, z, reduce=reduce), axis), SIGNATURE5, "hyperbolic", p, axis, conf=conf
    )


# ------------------------------------------------------------------------ grid

STATUS_OK, STATUS_BOUNDARY, STATUS_POLE = 0, 1, 2


@dataclass
class Grid:
    r: np.ndarray
    theta: np.ndarray
    points: np.ndarray  # (nr, ntheta, 5), NaN where invalid
    status: np.ndarray  # (nr, ntheta) int codes
    sheet: np.ndarray  # (nr, ntheta) int, 0 for sphere points
    form: SpaceFormClass

    @property
    def shape(self):
        return self.status.shape

    def valid(self):
        return self.status == STATUS_OK


def _cosine_nodes(a, b, n):
    s = np.linspace(0.0, np.pi, n)
    return a + (b - a) * (1 - np.cos(s)) / 2


def boundary_radii(p, a, b, axis=1, n=2001):
    """Radii in (a, b) where the hyperbolic divisor Y[axis] changes sign along theta = 0."""
    lo = max(a, 1e-12)
    rs = np.linspace(lo, b, n)
    vals = evaluate_lift(p, rs.astype(complex), reduce=True)[:, axis]
    out = []
    for i in np.nonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) < 0)[0]:
        x0, x1 = rs[i], rs[i + 1]
        f0 = vals[i]
        for _ in range(200):
            m = 0.5 * (x0 + x1)
            fm = evaluate_lift(p, complex(m), reduce=True)[axis]
            if np.sign(fm) == np.sign(f0):
                x0, f0 = m, fm
            else:
                x1 = m
            if x1 - x0 <= 4e-16 * x1:
                break
        out.append(0.5 * (x0 + x1))
    return out


def radial_nodes(a, b, nr, breaks=()):
    """nr cosine-clustered nodes on [a, b], clustering at a, b and every break point."""
    if nr < 2:
        raise EmptyGrid("need at least two radial nodes")
    edges = [a] + sorted(x for x in breaks if a < x < b) + [b]
    pieces = len(edges) - 1
    if nr < pieces + 1:
        return _cosine_nodes(a, b, nr)
    lengths = np.diff(edges)
    extra = nr - (pieces + 1)
    alloc = np.floor(extra * lengths / lengths.sum()).astype(int)
    alloc[np.argmax(lengths)] += extra - alloc.sum()
    nodes = [np.array([a])]
    for (lo, hi), m in zip(zip(edges[:-1], edges[1:]), alloc):
        nodes.append(_cosine_nodes(lo, hi, m + 2)[1:])
    return np.concatenate(nodes)


def grid_evaluate(p, domain, nr, ntheta, form=SpaceFormClass.Sphere, axis=1):
    """Evaluate the projected surface on a polar grid (r outer, theta inner).

    domain is ('disk', b) or ('annulus', a, b).  Per-point failures are stored
    as status codes instead of being raised.
    """
    if nr < 2 or ntheta < 2:
        raise EmptyGrid("nr and ntheta must be >= 2")
    form = _form(form)
    kind = domain[0]
    if kind == "disk":
        a, b = 0.0, float(domain[1])
    elif kind == "annulus":
        a, b = float(domain[1]), float(domain[2])
    else:
        raise ValueError(f"unknown domain {domain!r}")
    if not 0 <= a < b:
        raise EmptyGrid(f"empty radial range [{a}, {b}]")
    breaks = boundary_radii(p, a, b, axis) if form is SpaceFormClass.Hyperbolic else []
    r = radial_nodes(a, b, nr, breaks)
    theta = np.linspace(0.0, 2 * np.pi, ntheta)
    pts = np.full((nr, ntheta, 5), np.nan)
    status = np.zeros((nr, ntheta), dtype=int)
    sheet = np.zeros((nr, ntheta), dtype=int)
    for i, ri in enumerate(r):
        z = ri * np.exp(1j * theta)
        try:
            Y = evaluate_lift(p, z, reduce=True)
        except PoleAt:
            for j, zj in enumerate(z):
                try:
                    Yj = evaluate_lift(p, zj, reduce=True)
                except PoleAt:
                    status[i, j] = STATUS_POLE
                    continue
                _store(Yj, form, axis, pts, status, sheet, i, j)
            continue
        for j in range(ntheta):
            _store(Y[j], form, axis, pts, status, sheet, i, j)
    return Grid(r, theta, pts, status, sheet, form)


def _store(Y, form, axis, pts, status, sheet, i, j):
    try:
        sp = project(Y, form, axis)
    except BoundaryPoint:
        status[i, j] = STATUS_BOUNDARY
        return
    pts[i, j] = sp.x
    sheet[i, j] = sp.sheet


def antipodal_defect(p, zs, R=None):
    """max |y(-1/zbar) - y_R(z)| over zs, where y_R is the S^4 point of R Y(z).

    R is a 6x6 matrix acting on the lift (identity by default).  Zero means
    [Y(mu(z))] = [R Y(z)] with mu(z) = -1/zbar.
    """
    zs = np.asarray(zs, dtype=complex).ravel()
    if np.any(zs == 0):
        raise ValueError("antipodal_defect needs z != 0")
    Ya = evaluate_lift(p, -1.0 / np.conj(zs), reduce=True)
    Yb = evaluate_lift(p, zs, reduce=True)
    if R is not None:
        Yb = Yb @ np.asarray(R, dtype=float).T
    return float(np.max(np.linalg.norm(sphere_coords(Ya) - sphere_coords(Yb), axis=-1)))
