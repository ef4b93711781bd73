"""Rational functions, isotropic normalized potentials and the space-form classifier."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidPotential, PoleAt
from .lorentz import complex_bilinear4

# relative coefficient threshold used when deciding that a coefficient is zero
COEFF_RTOL = 1e-12


# ---------------------------------------------------------------- polynomials
# Polynomials are complex numpy arrays of coefficients in ascending degree.

def _as_poly(c):
    c = np.atleast_1d(np.asarray(c, dtype=complex)).copy()
    if c.ndim != 1:
        raise ValueError("polynomial coefficients must be one-dimensional")
    return c


def poly_trim(c, scale=None, rtol=COEFF_RTOL):
    """Zero coefficients below rtol*scale and strip trailing zeros (zero poly -> [0])."""
    c = _as_poly(c)
    if scale is None:
        scale = np.max(np.abs(c)) if c.size else 0.0
    if scale == 0:
        return np.zeros(1, dtype=complex)
    c[np.abs(c) < rtol * scale] = 0
    nz = np.nonzero(c)[0]
    if nz.size == 0:
        return np.zeros(1, dtype=complex)
    return c[: nz[-1] + 1]


def poly_is_zero(c):
    return not np.any(c)


def poly_add(a, b):
    a, b = _as_poly(a), _as_poly(b)
    n = max(a.size, b.size)
    out = np.zeros(n, dtype=complex)
    out[: a.size] += a
    out[: b.size] += b
    scale = max(np.max(np.abs(a)), np.max(np.abs(b)))
    return poly_trim(out, scale)


def poly_mul(a, b):
    a, b = _as_poly(a), _as_poly(b)
    if poly_is_zero(a) or poly_is_zero(b):
        return np.zeros(1, dtype=complex)
    return poly_trim(np.convolve(a, b))


def poly_der(a):
    a = _as_poly(a)
    if a.size <= 1:
        return np.zeros(1, dtype=complex)
    return poly_trim(a[1:] * np.arange(1, a.size))


def poly_divmod(a, b):
    """Long division a = q*b + r with deg r < deg b."""
    a = poly_trim(a)
    b = poly_trim(b)
    if poly_is_zero(b):
        raise ZeroDivisionError("division by the zero polynomial")
    scale = np.max(np.abs(a))
    r = a.copy()
    db = b.size - 1
    if r.size - 1 < db:
        return np.zeros(1, dtype=complex), r
    q = np.zeros(r.size - db, dtype=complex)
    for k in range(r.size - 1 - db, -1, -1):
        coef = r[k + db] / b[-1]
        q[k] = coef
        r[k : k + db + 1] -= coef * b
        r[k + db] = 0
    return poly_trim(q), poly_trim(r[: max(db, 1)], scale)


def poly_gcd(a, b, rtol=1e-10):
    """Monic gcd over floating complex coefficients.

    Powers of z shared by both arguments are split off exactly; the rest goes
    through a thresholded Euclid and is accepted only if it divides both
    inputs to round-off.
    """
    a = poly_trim(a)
    b = poly_trim(b)
    if poly_is_zero(a):
        return b / b[-1] if not poly_is_zero(b) else np.ones(1, dtype=complex)
    if poly_is_zero(b):
        return a / a[-1]
    m = min(np.nonzero(a)[0][0], np.nonzero(b)[0][0])
    a, b = a[m:], b[m:]
    g = np.ones(1, dtype=complex)
    if a.size > 1 and b.size > 1:
        x, y = a / np.max(np.abs(a)), b / np.max(np.abs(b))
        if x.size < y.size:
            x, y = y, x
        while y.size > 1 or y[0] != 0:
            _, rem = poly_divmod(x, y)
            rem = poly_trim(rem, max(np.max(np.abs(x)), 1.0), rtol)
            x, y = y, rem
            if poly_is_zero(y):
                break
            y = y / np.max(np.abs(y))
        if x.size > 1:
            cand = x / x[-1]
            _, ra = poly_divmod(a, cand)
            _, rb = poly_divmod(b, cand)
            tol = 1e-8
            if np.max(np.abs(ra)) <= tol * np.max(np.abs(a)) and np.max(np.abs(rb)) <= tol * np.max(np.abs(b)):
                g = cand
    if m:
        g = np.concatenate([np.zeros(m, dtype=complex), g])
    return g


def poly_eval(c, z):
    """Horner evaluation, vectorised over z."""
    z = np.asarray(z, dtype=complex)
    out = np.zeros_like(z)
    for coef in c[::-1]:
        out = out * z + coef
    return out


def poly_abs_eval(c, z):
    """sum |c_j| |z|^j, the natural magnitude scale of poly_eval(c, z)."""
    return np.real(poly_eval(np.abs(c), np.abs(np.asarray(z, dtype=complex))))


# ------------------------------------------------------------ rational function

class RationalFunction:
    """numerator/denominator with complex coefficients in ascending degree."""

    __slots__ = ("num", "den")

    def __init__(self, numerator, denominator=(1.0,), normalize=True):
        num = poly_trim(numerator)
        den = poly_trim(denominator)
        if poly_is_zero(den):
            raise ZeroDivisionError("denominator is identically zero")
        if normalize:
            num, den = _reduce(num, den)
        self.num = num
        self.den = den

    # constructors
    @classmethod
    def const(cls, c):
        return cls([c])

    @classmethod
    def monomial(cls, c, k):
        coeffs = np.zeros(k + 1, dtype=complex)
        coeffs[k] = c
        return cls(coeffs)

    @classmethod
    def coerce(cls, other):
        if isinstance(other, RationalFunction):
            return other
        if np.isscalar(other):
            return cls([other])
        raise TypeError(f"cannot coerce {type(other).__name__} to RationalFunction")

    # predicates
    def is_zero(self):
        return poly_is_zero(self.num)

    def is_polynomial(self):
        return self.den.size == 1

    @property
    def degree(self):
        return (self.num.size - 1, self.den.size - 1)

    # arithmetic
    def __add__(self, other):
        other = RationalFunction.coerce(other)
        if self.is_polynomial() and other.is_polynomial():
            return RationalFunction(poly_add(self.num * other.den[0], other.num * self.den[0]), self.den * other.den[0])
        num = poly_add(poly_mul(self.num, other.den), poly_mul(other.num, self.den))
        return RationalFunction(num, poly_mul(self.den, other.den))

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den, normalize=False)

    def __sub__(self, other):
        return self + (-RationalFunction.coerce(other))

    def __rsub__(self, other):
        return RationalFunction.coerce(other) - self

    def __mul__(self, other):
        if np.isscalar(other):
            return RationalFunction(self.num * other, self.den, normalize=False)
        other = RationalFunction.coerce(other)
        return RationalFunction(poly_mul(self.num, other.num), poly_mul(self.den, other.den))

    __rmul__ = __mul__

    def derivative(self):
        if self.is_polynomial():
            return RationalFunction(poly_der(self.num) / self.den[0], [1.0], normalize=False)
        num = poly_add(poly_mul(poly_der(self.num), self.den), -poly_mul(self.num, poly_der(self.den)))
        return RationalFunction(num, poly_mul(self.den, self.den))

    def __call__(self, z):
        return rf_eval(self, z)

    def allclose(self, other, tol=1e-12):
        """Coefficient comparison of self - other against tol (relative to the operands)."""
        other = RationalFunction.coerce(other)
        lhs = poly_mul(self.num, other.den)
        rhs = poly_mul(other.num, self.den)
        n = max(lhs.size, rhs.size)
        a = np.zeros(n, dtype=complex)
        b = np.zeros(n, dtype=complex)
        a[: lhs.size] = lhs
        b[: rhs.size] = rhs
        scale = max(np.max(np.abs(a)), np.max(np.abs(b)), 1e-300)
        return bool(np.max(np.abs(a - b)) <= tol * scale)

    def __repr__(self):
        def fmt(c):
            return "[" + ", ".join(f"{x:.6g}" for x in c) + "]"

        if self.is_polynomial() and self.den[0] == 1:
            return f"RationalFunction({fmt(self.num)})"
        return f"RationalFunction({fmt(self.num)} / {fmt(self.den)})"


def _reduce(num, den):
    if poly_is_zero(num):
        return np.zeros(1, dtype=complex), np.ones(1, dtype=complex)
    if den.size > 1:
        g = poly_gcd(num, den)
        if g.size > 1:
            num, _ = poly_divmod(num, g)
            den, _ = poly_divmod(den, g)
    lead = den[-1]
    return num / lead, den / lead


def rf_eval(f, z):
    """Evaluate f at z (scalar or array); raises PoleAt near a zero of the denominator."""
    z = np.asarray(z, dtype=complex)
    d = poly_eval(f.den, z)
    if f.den.size > 1:
        scale = poly_abs_eval(f.den, z)
        bad = np.abs(d) < 1e-14 * scale
        if np.any(bad):
            zb = z[bad].flat[0] if z.ndim else complex(z)
            raise PoleAt(zb)
    out = poly_eval(f.num, z) / d
    return out[()] if out.ndim == 0 else out


def rf_derivative(f):
    return f.derivative()


# ------------------------------------------------------------------ potential

# Pattern matrix: h-vector = P @ (h1', h2', h3', h4'), with the 1/2 absorbed.
PATTERN = 0.5 * np.array(
    [
        [0, -1j, 1j, 0],
        [0, 1j, 1j, 0],
        [-1, 0, 0, 1],
        [1j, 0, 0, 1j],
    ],
    dtype=complex,
)
# exact inverse (entries are 0, +-1, +-i)
PATTERN_INV = np.array(
    [
        [0, 0, -1, -1j],
        [1j, -1j, 0, 0],
        [-1j, -1j, 0, 0],
        [0, 0, 1, -1j],
    ],
    dtype=complex,
)

# Coefficient of h_j' in v^t I_{1,3} h, as a linear form in v (times 2):
#   (-v3 + i v4) h1' + i(v1 + v2) h2' + i(v2 - v1) h3' + (v3 + i v4) h4'
_MINIMALITY_FORMS = np.array(
    [
        [0, 0, -1, 1j],
        [1j, 1j, 0, 0],
        [-1j, 1j, 0, 0],
        [0, 0, 1, 1j],
    ],
    dtype=complex,
)


class SpaceFormClass(enum.Enum):
    Sphere = "Sphere"
    Hyperbolic = "Hyperbolic"
    Euclidean = "Euclidean"
    NonMinimal = "NonMinimal"
    Degenerate = "Degenerate"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class IsotropicPotential:
    """Quadruple (h1, h2, h3, h4) with h1'h4' + h2'h3' = 0 and h1'h2' not identically 0."""

    h1: RationalFunction
    h2: RationalFunction
    h3: RationalFunction
    h4: RationalFunction
    validate: bool = field(default=True, repr=False, compare=False)

    def __post_init__(self):
        for name in ("h1", "h2", "h3", "h4"):
            val = getattr(self, name)
            if not isinstance(val, RationalFunction):
                object.__setattr__(self, name, RationalFunction(val))
        if self.validate:
            res = isotropy_residual(self)
            if not res.is_zero():
                raise InvalidPotential(f"isotropy identity fails: h1'h4'+h2'h3' = {res!r}")
            d1, d2 = self.derivatives()[:2]
            if d1.is_zero() or d2.is_zero():
                raise InvalidPotential("h1'h2' vanishes identically")

    @classmethod
    def from_coeffs(cls, *polys, validate=True):
        """Build from four ascending coefficient lists (polynomial h_j)."""
        if len(polys) != 4:
            raise ValueError("need four coefficient lists")
        return cls(*(RationalFunction(c) for c in polys), validate=validate)

    @property
    def hs(self):
        return (self.h1, self.h2, self.h3, self.h4)

    def derivatives(self):
        cache = self.__dict__.get("_der")
        if cache is None:
            cache = tuple(h.derivative() for h in self.hs)
            object.__setattr__(self, "_der", cache)
        return cache

    def values(self, z):
        """(h1..h4)(z) stacked on the last axis."""
        return np.stack([np.asarray(rf_eval(h, z)) for h in self.hs], axis=-1)

    def derivative_values(self, z):
        return np.stack([np.asarray(rf_eval(h, z)) for h in self.derivatives()], axis=-1)


def isotropy_residual(p):
    d1, d2, d3, d4 = (h.derivative() for h in p.hs)
    return d1 * d4 + d2 * d3


def pattern_vector(p, z):
    """The column h(z) of the potential matrix B_1 = (h, ih); shape (..., 4)."""
    return p.derivative_values(z) @ PATTERN.T


@dataclass(frozen=True)
class MinimalityCertificate:
    basis: tuple
    norms: tuple
    cls: SpaceFormClass
    residual: float = 0.0

    @property
    def dim(self):
        return len(self.basis)


def _minimality_matrix(p):
    """Complex matrix M with M @ v = 0 <=> v^t I_{1,3} h(z) == 0 identically."""
    ders = p.derivatives()
    common = np.ones(1, dtype=complex)
    for d in ders:
        common = poly_mul(common, d.den)
    nums = []
    for d in ders:
        other, rem = poly_divmod(common, d.den)
        nums.append(poly_mul(d.num, other))
    n = max(c.size for c in nums)
    N = np.zeros((n, 4), dtype=complex)
    for j, c in enumerate(nums):
        N[: c.size, j] = c
    return N @ _MINIMALITY_FORMS


def minimality_vectors(p, tol=1e-10, zero_norm_tol=1e-9):
    """Real null space of the minimality condition and its space-form class."""
    M = _minimality_matrix(p)
    A = np.vstack([M.real, M.imag])
    scale = np.max(np.abs(A))
    if scale == 0:
        raise InvalidPotential("potential has vanishing pattern vector")
    A = A / scale
    _, s, vh = np.linalg.svd(A)
    rank = int(np.sum(s > tol * s[0]))
    basis = []
    for v in vh[rank:]:
        v = v / np.linalg.norm(v)
        lead = np.nonzero(np.abs(v) > 1e-12)[0][0]
        if v[lead] < 0:
            v = -v
        v[np.abs(v) < 1e-15] = 0.0
        basis.append(v)
    norms = tuple(float(-v[0] ** 2 + v[1] ** 2 + v[2] ** 2 + v[3] ** 2) for v in basis)
    residual = max((float(np.max(np.abs(A @ v))) for v in basis), default=0.0)
    if not basis:
        cls = SpaceFormClass.NonMinimal
    elif len(basis) >= 2:
        cls = SpaceFormClass.Degenerate
    elif norms[0] < -zero_norm_tol:
        cls = SpaceFormClass.Sphere
    elif norms[0] > zero_norm_tol:
        cls = SpaceFormClass.Hyperbolic
    else:
        cls = SpaceFormClass.Euclidean
    return MinimalityCertificate(tuple(basis), norms, cls, residual)


def classify_space_form(p, tol=1e-10):
    return minimality_vectors(p, tol).cls


def bilinear_self(p, z):
    """complex_bilinear4(h(z), h(z)); equals -(h1'h4' + h2'h3')(z)."""
    h = pattern_vector(p, z)
    return complex_bilinear4(h, h)
