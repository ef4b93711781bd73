"""Willmore energies, boundary roots, appendix bounds and energy-target solving.

All energies are in units of pi.  The normalisation is W = 4 * integral of
|kappa|^2 dx dy, i.e. W = integral (H^2 - K + 1) dM for a surface in S^4;
with it the round Veronese sphere has W = 8 pi.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .diffgeo import kappa2
from .errors import BadK, BoundViolated, NoBracket, RootCountMismatch, ToleranceNotMet
from .potential import IsotropicPotential
from .quadrature import integrate

# ---------------------------------------------------------------- boundary roots


def _ab(k, t):
    return math.exp(2 * t), (k + 1) / (k - 1)


def boundary_poly(k, t, rho):
    """L(rho) = a rho^{k+1} + 1 - b rho^k - a b rho with a = e^{2t}, b = (k+1)/(k-1)."""
    a, b = _ab(k, t)
    rho = np.asarray(rho, dtype=float)
    return a * rho ** (k + 1) + 1 - b * rho**k - a * b * rho


def _scaled_poly(k, a, b, log_rho):
    """(L / max(1, rho)^{k+1}, matching term scale) without overflow."""
    lr = np.asarray(log_rho, dtype=float)
    big = lr > 0
    rho = np.exp(np.where(big, -lr, lr))  # rho or 1/rho, always <= 1
    # rho <= 1 branch
    t1 = a * rho ** (k + 1)
    t2 = np.ones_like(rho)
    t3 = b * rho**k
    t4 = a * b * rho
    # rho > 1 branch, all terms divided by rho^{k+1}; here rho holds 1/rho
    s1 = np.full_like(rho, a)
    s2 = rho ** (k + 1)
    s3 = b * rho
    s4 = a * b * rho**k
    v = np.where(big, s1 + s2 - s3 - s4, t1 + t2 - t3 - t4)
    scale = np.where(big, s1 + s2 + s3 + s4, t1 + t2 + t3 + t4)
    return v, scale


def _log_range(k, t):
    b = (k + 1) / (k - 1)
    span = 2 * abs(t) + abs(math.log(b)) + 2 * math.log(k) + 10.0
    return -span, span


def find_component_roots(k, t, n_scan=20001):
    """The two positive roots r1 < r2 of the boundary polynomial in r (rho = r^2)."""
    if k < 2:
        raise BadK(f"k must be >= 2, got {k}")
    a, b = _ab(k, t)
    lo, hi = _log_range(k, t)
    grid = np.linspace(lo, hi, n_scan)
    v, _ = _scaled_poly(k, a, b, grid)
    s = np.sign(v)
    idx = np.nonzero(s[:-1] * s[1:] < 0)[0]
    exact = np.nonzero(s == 0)[0]
    if exact.size or idx.size != 2:
        raise RootCountMismatch(int(idx.size + exact.size))
    roots = []
    for i in idx:
        x0, x1 = grid[i], grid[i + 1]
        f0 = s[i]
        for _ in range(200):
            m = 0.5 * (x0 + x1)
            if not x0 < m < x1:
                break
            fm = np.sign(_scaled_poly(k, a, b, m)[0])
            if fm == 0:
                x0 = x1 = m
                break
            if fm == f0:
                x0 = m
            else:
                x1 = m
        roots.append(0.5 * (x0 + x1))
    r1, r2 = (math.exp(0.5 * lr) for lr in roots)
    return r1, r2


def root_residual(k, t, r):
    """|L(r^2)| relative to the magnitude of its terms."""
    a, b = _ab(k, t)
    v, scale = _scaled_poly(k, a, b, 2 * math.log(r))
    return float(abs(v) / scale)


def closed_form_roots_k2(t):
    """r1, r2 for k = 2 from the trigonometric solution of the cubic.

    r1^2 = sqrt(1+e^{-4t}) (cos 3th - 2 cos(th + pi/3)),
    r2^2 = sqrt(1+e^{-4t}) (cos 3th + 2 cos th),  th = arccos(1/sqrt(1+e^{4t}))/3.
    Evaluated as th = atan(e^{2t})/3 and, with phi = pi/6 - th,
    cos 3th - 2 cos(th + pi/3) = sin(phi) (sqrt(3) sin 2th - 2 sin^2 th),
    which is free of cancellation for all t.
    """
    th = theta0_k2(t)
    phi = math.atan(math.exp(-2 * t)) / 3 if t > -300 else math.pi / 6
    amp = math.sqrt(1.0 + math.exp(-4 * t)) if t > -150 else math.exp(-2 * t)
    r1sq = amp * math.sin(phi) * (math.sqrt(3) * math.sin(2 * th) - 2 * math.sin(th) ** 2)
    r2sq = amp * (math.cos(3 * th) + 2 * math.cos(th))
    return math.sqrt(r1sq), math.sqrt(r2sq)


def theta0_k2(t):
    """arccos(1/sqrt(1+e^{4t}))/3 = atan(e^{2t})/3, in (0, pi/6)."""
    return math.atan(math.exp(2 * t)) / 3 if t < 300 else math.pi / 6


# --------------------------------------------------------------- radial energy


def radial_density(k, t, r):
    """Energy density in units of pi per dr for the boost-dressed hyperbolic k-family.

    4 k^2 (k-1)^2 e r^{2k-3} L^2 / D^2 with e = e^{2t},
    L = e r^{2k+2} + 1 - b (r^{2k} + e r^2), D = e (1 + r^{2k})^2 + k^2 r^{2k-2} (1 - e r^2)^2.
    """
    e, b = _ab(k, t)
    r = np.asarray(r, dtype=float)
    r2k = r ** (2 * k)
    L = e * r2k * r * r + 1 - b * (r2k + e * r * r)
    D = e * (1 + r2k) ** 2 + k * k * r ** (2 * k - 2) * (1 - e * r * r) ** 2
    return 4 * k * k * (k - 1) ** 2 * e * r ** (2 * k - 3) * L * L / (D * D)


def radial_density_inverted(k, t, s):
    """Density after r = 1/s (including the Jacobian); same shape with L, D reflected."""
    e, b = _ab(k, t)
    s = np.asarray(s, dtype=float)
    s2k = s ** (2 * k)
    L = e + s2k * s * s - b * s * s - b * e * s2k
    D = e * (1 + s2k) ** 2 + k * k * s ** (2 * k - 2) * (s * s - e) ** 2
    return 4 * k * k * (k - 1) ** 2 * e * s ** (2 * k - 3) * L * L / (D * D)


@dataclass
class _Acc:
    value: float = 0.0
    error: float = 0.0
    evals: int = 0

    def add(self, res):
        self.value += res.value
        self.error += res.error
        self.evals += res.evaluations


def _radial(k, t, lo, hi, tol):
    acc = _Acc()
    if lo < 1.0:
        acc.add(integrate(lambda r: radial_density(k, t, r), lo, min(hi, 1.0), rtol=tol, atol=1e-300))
    if hi > 1.0:
        s_lo = 0.0 if math.isinf(hi) else 1.0 / hi
        s_hi = 1.0 / max(lo, 1.0)
        acc.add(integrate(lambda s: radial_density_inverted(k, t, s), s_lo, s_hi, rtol=tol, atol=1e-300))
    return acc


def radial_energy(k, t, interval, tol=1e-10):
    """W/pi over {rlo < |z| < rhi}; rhi may be inf (handled by r -> 1/r)."""
    if k < 2:
        raise BadK(f"k must be >= 2, got {k}")
    lo, hi = interval
    if not 0 <= lo < hi:
        raise ValueError(f"bad interval {interval!r}")
    return _radial(k, t, lo, hi, tol).value


@dataclass
class EnergyReport:
    k: int
    t: float
    r1: float
    r2: float
    W1: float
    W2: float
    W3: float
    total: float
    errors: tuple
    evaluations: int

    def as_row(self):
        return (self.t, self.W1, self.W2, self.W3, self.total)


def component_energies(k, t, tol=1e-10):
    r1, r2 = find_component_roots(k, t)
    parts = [_radial(k, t, lo, hi, tol) for lo, hi in ((0.0, r1), (r1, r2), (r2, math.inf))]
    W = [p.value for p in parts]
    return EnergyReport(
        k=k,
        t=t,
        r1=r1,
        r2=r2,
        W1=W[0],
        W2=W[1],
        W3=W[2],
        total=math.fsum(W),
        errors=tuple(p.error for p in parts),
        evaluations=sum(p.evals for p in parts),
    )


@dataclass
class SweepRow:
    t: float
    W1: float = float("nan")
    W2: float = float("nan")
    W3: float = float("nan")
    total: float = float("nan")
    error: str | None = None


def energy_sweep(k, ts, tol=1e-10):
    rows = []
    for t in ts:
        try:
            rep = component_energies(k, float(t), tol)
            rows.append(SweepRow(float(t), rep.W1, rep.W2, rep.W3, rep.total))
        except (RootCountMismatch, ToleranceNotMet, ValueError) as exc:
            rows.append(SweepRow(float(t), error=f"{type(exc).__name__}: {exc}"))
    return rows


# -------------------------------------------------------- generic 2-D energy


def _polar_energy(p, r_lo, r_hi, ntheta, tol, inverted, step):
    theta = 2 * np.pi * np.arange(ntheta) / ntheta
    e = np.exp(1j * theta)

    def ring(rs):
        rs = np.asarray(rs, dtype=float)
        if inverted:
            z = (1.0 / rs)[:, None] * e[None, :]
            jac = rs ** (-3)
        else:
            z = rs[:, None] * e[None, :]
            jac = rs
        k2 = kappa2(p, z, step)
        return 4 * jac * np.mean(k2, axis=1) * 2  # 4 |kappa|^2 r dtheta / pi

    return integrate(ring, r_lo, r_hi, rtol=tol, atol=1e-14)


def surface_energy(p, domain=("sphere",), tol=1e-6, ntheta=16, max_ntheta=256, step=None):
    """W/pi = (4/pi) * integral |kappa|^2 dx dy over a polar domain.

    domain: ('sphere',) for the whole Riemann sphere (|z| <= 1 plus the chart
    w = 1/z), ('disk', R), ('annulus', a, b) with b possibly inf, or
    ('exterior', R).  The theta rule is a periodic trapezoid doubled until two
    successive results agree to tol; the radial rule is adaptive G7/K15.
    """
    if not isinstance(p, IsotropicPotential):
        raise TypeError("surface_energy expects an IsotropicPotential")
    kind = domain[0]
    if kind == "sphere":
        pieces = [(0.0, 1.0, False), (0.0, 1.0, True)]
    elif kind == "disk":
        R = float(domain[1])
        pieces = [(0.0, R, False)] if R <= 1 else [(0.0, 1.0, False), (1.0 / R, 1.0, True)]
    elif kind in ("annulus", "exterior"):
        a = float(domain[1])
        b = math.inf if kind == "exterior" else float(domain[2])
        pieces = []
        if a < 1:
            pieces.append((a, min(b, 1.0), False))
        if b > 1:
            pieces.append((0.0 if math.isinf(b) else 1.0 / b, 1.0 / max(a, 1.0), True))
    else:
        raise ValueError(f"unknown domain {domain!r}")

    def total(nth):
        return math.fsum(_polar_energy(p, lo, hi, nth, tol * 0.1, inv, step).value for lo, hi, inv in pieces)

    prev = total(ntheta)
    nth = ntheta
    while True:
        nth *= 2
        cur = total(nth)
        if abs(cur - prev) <= tol * max(abs(cur), 1e-12):
            return cur
        if nth >= max_ntheta:
            raise ToleranceNotMet(cur, abs(cur - prev), tol)
        prev = cur


# ------------------------------------------------------------ target solving


def solve_energy_target(k, W0, t_bracket, tol=1e-6, quad_tol=1e-12, max_iter=200):
    """t' with W(M_{t',1})/pi = W0 by bisection inside t_bracket."""
    tlo, thi = t_bracket
    target = float(W0)

    def g(t):
        r1, _ = find_component_roots(k, t)
        return radial_energy(k, t, (0.0, r1), quad_tol) - target

    glo, ghi = g(tlo), g(thi)
    if glo == 0:
        return tlo
    if ghi == 0:
        return thi
    if np.sign(glo) == np.sign(ghi):
        raise NoBracket(f"W1 - W0 has the same sign at t={tlo} ({glo:+.3g}) and t={thi} ({ghi:+.3g})")
    for _ in range(max_iter):
        tm = 0.5 * (tlo + thi)
        gm = g(tm)
        if abs(gm) < tol * target:
            return tm
        if np.sign(gm) == np.sign(glo):
            tlo, glo = tm, gm
        else:
            thi = tm
        if thi - tlo < 1e-15 * max(1.0, abs(tm)):
            return tm
    return 0.5 * (tlo + thi)


def find_energy_bracket(k, W0, ts=None):
    """Adjacent sweep points (t_i, t_{i+1}) whose M1 energies straddle W0."""
    if ts is None:
        ts = np.linspace(-20.0, 10.0, 61)
    ts = list(ts)
    vals = []
    for t in ts:
        r1, _ = find_component_roots(k, t)
        vals.append(radial_energy(k, t, (0.0, r1), 1e-9) - W0)
    for i in range(len(ts) - 1):
        if vals[i] == 0:
            return ts[i], ts[i]
        if np.sign(vals[i]) != np.sign(vals[i + 1]):
            return ts[i], ts[i + 1]
    raise NoBracket(f"W(M1) never reaches {W0} pi for k={k} on the sweep grid")


def scan_energy_target(W0, ks=range(2, 21), ts=None, tol=1e-6):
    """First k (in order) for which a t' with W(M_{t',1}) = W0 pi exists; returns (k, t')."""
    for k in ks:
        try:
            br = find_energy_bracket(k, W0, ts)
        except NoBracket:
            continue
        return k, solve_energy_target(k, W0, br, tol)
    raise NoBracket(f"no k in {list(ks)} reaches W0 = {W0} pi")


# ------------------------------------------------------------------ appendix


@dataclass
class AppendixReport:
    k: int
    t0: float
    a: float
    rho1: float
    rho1_bound: float
    I1: float
    I2: float
    R: float
    W1: float
    lower_bound: float
    delta: float
    R_minorant: float
    findings: dict = field(default_factory=dict)

    def violations(self):
        return [name for name, (_, _, ok) in self.findings.items() if not ok]


def appendix_R(a, k):
    """R(a, k), the closed form of the minorant bound, evaluated verbatim."""
    d = (a / k**2) ** (1.0 / (k - 1))
    return (
        (2 / (k - 1) - 2 * d / k + d * d / (k + 1)) / k**2
        + (-2 * d / (k - 2) + d * d / (k - 3)) / k**2
        - a / k**4 * (1 / (k - 1) - 2 / (k - 2) + 1 / (k - 3))
    )


def appendix_bound_report(k, tol=1e-11, strict=False):
    """Quantities of the large-k energy estimate at t0 = (1-k)/2 ln k.

    findings maps each inequality to (lhs, rhs, holds).  With strict=True a
    failing inequality raises BoundViolated.  R_minorant is 9 times the exact
    integral of the piecewise minorant used to bound I2 (so I2 > R_minorant/9
    always); R is the closed form evaluated verbatim.
    """
    if k < 4:
        raise BadK("the appendix bounds need k >= 4")
    t0 = (1 - k) / 2 * math.log(k)
    a = float(k) ** (-(k - 1))
    r1, _ = find_component_roots(k, t0)
    rho1 = r1 * r1
    rho1_bound = math.exp(-3 / k**2)

    def f1(rho):
        return a * rho ** (k - 1) * (rho1 - rho) ** 2 / (2 * a + k * k * rho ** (k - 1)) ** 2

    def f2(phi):
        return a * phi ** (k - 1) * (1 - phi) ** 2 / (2 * a + k * k * phi ** (k - 1)) ** 2

    delta = (a / k**2) ** (1.0 / (k - 1))
    I1 = _split_int(f1, 0.0, rho1, delta * rho1, tol)
    I2 = _split_int(f2, 0.0, 1.0, delta, tol)
    R = appendix_R(a, k)

    # minorant: 9a^2 on (0, delta), 9 k^4 phi^{2(k-1)} on (delta, 1)
    m1 = integrate(lambda x: a * x ** (k - 1) * (1 - x) ** 2 / (9 * a * a), 0.0, delta, rtol=tol, atol=1e-300).value
    m2 = integrate(
        lambda x: a * x ** (1 - k) * (1 - x) ** 2 / (9 * k**4), delta, 1.0, rtol=tol, atol=1e-300
    ).value
    R_minorant = 9 * (m1 + m2)

    W1 = radial_energy(k, t0, (0.0, r1), tol=1e-10)
    lower = (k - 1) / 3
    findings = {
        "rho1 > exp(-3/k^2)": (rho1, rho1_bound, rho1 > rho1_bound),
        "I2 > R/9": (I2, R / 9, I2 > R / 9),
        "W(M1) >= (k-1)/3": (W1, lower, W1 >= lower),
    }
    rep = AppendixReport(k, t0, a, rho1, rho1_bound, I1, I2, R, W1, lower, delta, R_minorant, findings)
    if strict and rep.violations():
        name = rep.violations()[0]
        lhs, rhs, _ = findings[name]
        raise BoundViolated(f"{name} fails at k={k}: {lhs!r} vs {rhs!r}")
    return rep


def _split_int(f, lo, hi, mid, tol):
    pts = [lo] + ([mid] if lo < mid < hi else []) + [hi]
    return math.fsum(integrate(f, x0, x1, rtol=tol, atol=1e-300).value for x0, x1 in zip(pts[:-1], pts[1:]))
