"""Spectral-parameter side: the kappa weight and its sublevel regions.

For an admissible exponent pair the sharp operator bound behaves, up to
constants, like

    kappa(z) = |z|^(gamma - omega) * dist(z, [0, inf))^(-gamma),

with gamma and omega supplied exactly by :mod:`resolventlab.exponents`.  The
set Z(ell) of spectral parameters where kappa(z) <= ell is where an
ell-uniform bound can hold; its closed-form geometry (a disk complement, a
shrinking / uniform / widening neighbourhood of the positive ray, a cone or
half-plane complement) is decided purely by the sign pattern of gamma, omega,
gamma - omega and the position of ell relative to 1.  Boundary points
(kappa = ell) are members: the defining inequalities are non-strict.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Union

from resolventlab.exponents import (
    ExponentPair,
    RationalLike,
    _as_fraction,
    gamma as _gamma,
    omega as _omega,
)

__all__ = [
    "SpectralParameter",
    "RegionQuery",
    "ShapeClass",
    "BoundaryPolyline",
    "EnclosureReport",
    "kappa",
    "kappa_from_definition",
    "membership",
    "shape_classify",
    "boundary_sample",
    "eigenvalue_enclosure",
    "distance_to_ray",
]


def distance_to_ray(z: complex) -> float:
    """dist(z, [0, inf)): |Im z| right of the origin, |z| otherwise."""
    if z.real >= 0:
        return abs(z.imag)
    return abs(z)


@dataclass(frozen=True)
class SpectralParameter:
    """A spectral parameter z off the closed positive ray [0, inf)."""

    value: complex
    dist: float = field(init=False)

    def __init__(self, value: complex):
        z = complex(value)
        if z.imag == 0 and z.real >= 0:
            raise ValueError(f"spectral parameter {z} lies on the ray [0, inf)")
        object.__setattr__(self, "value", z)
        object.__setattr__(self, "dist", distance_to_ray(z))

    @property
    def re(self) -> float:
        return self.value.real

    @property
    def im(self) -> float:
        return self.value.imag

    def __abs__(self) -> float:
        return abs(self.value)

    def conjugate(self) -> "SpectralParameter":
        return SpectralParameter(self.value.conjugate())


SpectralLike = Union[SpectralParameter, complex, float]


def _as_spectral(z: SpectralLike) -> SpectralParameter:
    if isinstance(z, SpectralParameter):
        return z
    return SpectralParameter(complex(z))


@dataclass(frozen=True)
class RegionQuery:
    """Parameters of one sublevel-region question: (d, s, pair) and level ell.

    Construction requires the pair to lie in the admissible strip
    0 <= x - y <= s/d (equivalently 0 <= omega <= 1); the sublevel region is
    only defined for exponent pairs that carry an estimate-style weight.
    gamma and omega are cached as exact rationals.
    """

    d: int
    s: Fraction
    pair: ExponentPair
    ell: float
    gamma: Fraction = field(init=False)
    omega: Fraction = field(init=False)

    def __init__(self, d: int, s: RationalLike, pair: ExponentPair, ell: float = 1.0):
        sf = _as_fraction(s)
        g = _gamma(d, pair)
        w = _omega(d, sf, pair)
        if w < 0:
            raise ValueError(
                f"pair {pair} has x - y > s/d (omega = {w} < 0); "
                "the sublevel region is not defined there"
            )
        if w > 1:
            raise ValueError(
                f"pair {pair} has x < y (omega = {w} > 1); "
                "the sublevel region is not defined there"
            )
        if not ell > 0:
            raise ValueError(f"level ell must be positive, got {ell}")
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "s", sf)
        object.__setattr__(self, "pair", pair)
        object.__setattr__(self, "ell", float(ell))
        object.__setattr__(self, "gamma", g)
        object.__setattr__(self, "omega", w)

    def with_ell(self, ell: float) -> "RegionQuery":
        return RegionQuery(self.d, self.s, self.pair, ell)

    @staticmethod
    def line(pair: ExponentPair, ell: float = 1.0) -> "RegionQuery":
        """The one-dimensional analogue (d = 1, s = 2).

        The exponent geography proper starts at d = 2; on the line the
        closed-form convolution kernel gives the weight exponents directly:
        gamma = 1 - (x - y) on the distance to the ray and homogeneity
        omega = 1 - (x - y)/2, for 0 <= x - y <= 1 (with gamma > 0 away from
        the Young endpoint).  kappa, membership and the shape taxonomy all
        read only gamma, omega and ell, so they apply unchanged.
        """
        x, y = pair.x, pair.y
        diff = x - y
        if diff < 0 or diff > 1:
            raise ValueError("the 1-d strip requires 0 <= x - y <= 1")
        if not ell > 0:
            raise ValueError(f"level ell must be positive, got {ell}")
        query = object.__new__(RegionQuery)
        object.__setattr__(query, "d", 1)
        object.__setattr__(query, "s", Fraction(2))
        object.__setattr__(query, "pair", pair)
        object.__setattr__(query, "ell", float(ell))
        object.__setattr__(query, "gamma", 1 - diff)
        object.__setattr__(query, "omega", 1 - Fraction(1, 2) * diff)
        return query


def kappa(query: RegionQuery, z: SpectralLike) -> float:
    """kappa(z) = |z|^(gamma - omega) * dist(z, [0, inf))^(-gamma).

    This product form avoids the cancellation-prone exponent
    -1 + (d/s)(x - y) + gamma of the defining expression; the two agree (see
    ``kappa_from_definition``, kept for cross-checking).
    """
    zp = _as_spectral(z)
    g = float(query.gamma)
    w = float(query.omega)
    return abs(zp.value) ** (g - w) * zp.dist ** (-g)


def kappa_from_definition(query: RegionQuery, z: SpectralLike) -> float:
    """kappa via |z|^(-1 + (d/s)(x-y) + gamma) * dist^(-gamma)."""
    zp = _as_spectral(z)
    x, y = query.pair.x, query.pair.y
    expo = float(-1 + Fraction(query.d, 1) / query.s * (x - y) + query.gamma)
    return abs(zp.value) ** expo * zp.dist ** (-float(query.gamma))


def membership(query: RegionQuery, z: SpectralLike) -> bool:
    """Whether z belongs to the sublevel region Z(ell) = {kappa <= ell}.

    Evaluated through the two-sided closed form: on Re z <= 0 membership is
    ell |z|^omega >= 1, on Re z > 0 it is ell |Im z|^gamma >= |z|^(gamma-omega).
    Boundary points are members.
    """
    zp = _as_spectral(z)
    ell = query.ell
    g = float(query.gamma)
    w = float(query.omega)
    if zp.re <= 0:
        return ell * abs(zp.value) ** w >= 1.0
    return ell * abs(zp.im) ** g >= abs(zp.value) ** (g - w)


# ---------------------------------------------------------------------------
# shape taxonomy
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ShapeClass:
    """Closed-form description of the sublevel region's geometry.

    kind is one of FullComplement, Empty, DiskComplement, UniformNeighborhood,
    ShrinkingNeighborhood, WideningNeighborhood, PuncturedHalfPlane,
    ConeComplement.  ``parameters`` carries the quantitative data: the disk
    radius ell^(-1/omega), the uniform width ell^(-1/gamma), the cone half
    angle arcsin(ell^(-1/gamma)), or the asymptotic boundary exponent
    1 - omega/gamma of |Im z| against Re z.
    """

    kind: str
    parameters: dict

    def to_dict(self, query: Optional[RegionQuery] = None) -> dict:
        out = {"shape": self.kind, "parameters": dict(self.parameters)}
        if query is not None:
            out["gamma"] = str(query.gamma)
            out["omega"] = str(query.omega)
            out["ell"] = query.ell
        return out


def shape_classify(query: RegionQuery) -> ShapeClass:
    """Decide the region's shape from the signs of gamma, omega, gamma-omega.

    The branching on omega = 0 and gamma = 0 uses the exact rational values,
    so Sobolev-line pairs are recognised without tolerance.
    """
    g, w, ell = query.gamma, query.omega, query.ell
    if w == 0:
        if ell < 1.0:
            return ShapeClass("Empty", {})
        if g == 0:
            return ShapeClass("FullComplement", {})
        if ell == 1.0:
            return ShapeClass("PuncturedHalfPlane", {})
        half_angle = math.asin(ell ** (-1.0 / float(g)))
        return ShapeClass("ConeComplement", {"half_angle": half_angle, "apex_angle": 2 * half_angle})
    if g == 0:
        return ShapeClass("DiskComplement", {"radius": ell ** (-1.0 / float(w))})
    if g == w:
        return ShapeClass("UniformNeighborhood", {"width": ell ** (-1.0 / float(g))})
    tail = float(1 - w / g)
    if g < w:
        return ShapeClass("ShrinkingNeighborhood", {"tail_exponent": tail})
    return ShapeClass("WideningNeighborhood", {"tail_exponent": tail})


# ---------------------------------------------------------------------------
# boundary sampling
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BoundaryPolyline:
    """Ordered (re, im) samples tracing the region boundary in a window."""

    points: tuple[tuple[float, float], ...]

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(self.points)


def _solve_boundary_height(g: float, w: float, ell: float, a: float) -> float:
    """Positive b with ell * b^g = (a^2 + b^2)^((g-w)/2), for a > 0, g > 0.

    The log residual is strictly increasing in b (derivative
    (g a^2 + w b^2) / (b (a^2+b^2)) > 0), so plain bisection in log b is
    reliable; 200 halvings from a generous bracket reach full precision.
    """
    log_ell = math.log(ell)

    def res(t: float) -> float:
        b = math.exp(t)
        return log_ell + g * t - 0.5 * (g - w) * math.log(a * a + b * b)

    scale = max(a, ell ** (-1.0 / w) if w > 0 else 1.0)
    lo, hi = math.log(scale) - 80.0, math.log(scale) + 80.0
    if res(lo) > 0 or res(hi) < 0:
        raise ArithmeticError(f"boundary bracket failed at abscissa {a}")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if res(mid) < 0:
            lo = mid
        else:
            hi = mid
    return math.exp(0.5 * (lo + hi))


def boundary_sample(
    query: RegionQuery,
    window: tuple[float, float, float, float],
    n: int = 200,
) -> BoundaryPolyline:
    """Trace the boundary kappa = ell inside ``window``.

    ``window`` is (re_min, re_max, im_min, im_max).  ``n`` is the sample
    count per smooth component (right-half curve, left-half circular arc);
    the assembled polyline is monotone in its parameter, running from the
    upper right-hand curve through the left arc to the lower right-hand
    curve.  For Re z > 0 each abscissa is solved by bisection; for Re z <= 0
    the boundary is the arc |z| = ell^(-1/omega).  Shapes without a finite
    boundary (Empty, FullComplement) give an empty polyline.
    """
    if n < 2:
        raise ValueError("need at least 2 samples")
    re_min, re_max, im_min, im_max = map(float, window)
    if not (re_min < re_max and im_min < im_max):
        raise ValueError("window is degenerate")
    shape = shape_classify(query)
    g, w, ell = float(query.gamma), float(query.omega), query.ell
    pts: list[tuple[float, float]] = []

    def keep(re: float, im: float) -> None:
        if re_min <= re <= re_max and im_min <= im <= im_max:
            pts.append((re, im))

    if shape.kind in ("Empty", "FullComplement"):
        return BoundaryPolyline(())

    if shape.kind == "DiskComplement":
        # only the circle; excludes the puncture on the positive real axis
        r = shape.parameters["radius"]
        for j in range(1, n + 1):
            th = 2 * math.pi * j / (n + 1)
            keep(r * math.cos(th), r * math.sin(th))
        return BoundaryPolyline(tuple(pts))

    if shape.kind == "PuncturedHalfPlane":
        # boundary is the imaginary axis; skip the origin itself
        for im in _linspace(im_max, im_min, n):
            if im != 0.0:
                keep(0.0, im)
        return BoundaryPolyline(tuple(pts))

    if shape.kind == "ConeComplement":
        th = shape.parameters["half_angle"]
        r_hi = math.hypot(max(abs(re_min), abs(re_max)), max(abs(im_min), abs(im_max)))
        radii = _linspace(r_hi, r_hi / n, n)
        for r in radii:
            keep(r * math.cos(th), r * math.sin(th))
        for r in reversed(radii):
            keep(r * math.cos(th), -r * math.sin(th))
        return BoundaryPolyline(tuple(pts))

    # shrinking / uniform / widening: curve on Re z > 0, arc on Re z <= 0
    radius = ell ** (-1.0 / w)
    a_hi = max(re_max, 0.0)
    abscissae = [a for a in _linspace(a_hi, 0.0, n) if a > 0.0]
    upper = []
    for a in abscissae:
        b = radius if g == w else _solve_boundary_height(g, w, ell, a)
        upper.append((a, b))
    for a, b in upper:
        keep(a, b)
    for j in range(n):
        th = 0.5 * math.pi + math.pi * j / (n - 1)
        keep(radius * math.cos(th), radius * math.sin(th))
    for a, b in reversed(upper):
        keep(a, -b)
    return BoundaryPolyline(tuple(pts))


def _linspace(a: float, b: float, n: int) -> list[float]:
    if n == 1:
        return [a]
    step = (b - a) / (n - 1)
    return [a + step * j for j in range(n)]


# ---------------------------------------------------------------------------
# eigenvalue enclosure
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EnclosureReport:
    """Outcome of the small-potential eigenvalue localisation test.

    When the potential norm passes the smallness threshold t/(C*ell), any
    eigenvalue off the ray must avoid the sublevel region: possible eigenvalue
    locations are exactly the complement, exposed via
    ``may_contain_eigenvalue``.  The bound constant C is user-supplied (it is
    not computable here), so the enclosure is rigorous only relative to it.
    """

    query: RegionQuery
    potential_norm: float
    bound_constant: float
    smallness: float
    threshold: float
    admissible: bool

    def may_contain_eigenvalue(self, z: SpectralLike) -> bool:
        """True unless the admissible smallness condition excludes z.

        Points on [0, inf) are never excluded (the localisation statement
        only concerns eigenvalues off the ray).
        """
        zc = z.value if isinstance(z, SpectralParameter) else complex(z)
        if zc.imag == 0 and zc.real >= 0:
            return True
        if not self.admissible:
            return True
        return not membership(self.query, zc)

    def to_dict(self) -> dict:
        return {
            "admissible": self.admissible,
            "potential_norm": self.potential_norm,
            "threshold": self.threshold,
            "bound_constant": self.bound_constant,
            "smallness": self.smallness,
            "ell": self.query.ell,
        }


def eigenvalue_enclosure(
    query: RegionQuery,
    potential_norm: float,
    bound_constant: float = 1.0,
    smallness: float = 0.5,
) -> EnclosureReport:
    """Check the smallness hypothesis ||V|| <= t / (C * ell) and wrap Z(ell).

    ``smallness`` is the number t in (0, 1); ``bound_constant`` is C > 0.
    When the pair sits on the scale-invariant line x - y = s/d the level must
    satisfy ell >= 1.  Equality in the norm comparison is admissible.
    """
    if not (0.0 < smallness < 1.0):
        raise ValueError(f"smallness t must lie in (0, 1), got {smallness}")
    if not bound_constant > 0:
        raise ValueError(f"bound constant C must be positive, got {bound_constant}")
    if potential_norm < 0:
        raise ValueError("potential norm cannot be negative")
    if query.omega == 0 and query.ell < 1.0:
        raise ValueError("on the scale-invariant line x - y = s/d the level must satisfy ell >= 1")
    threshold = smallness / (bound_constant * query.ell)
    return EnclosureReport(
        query=query,
        potential_norm=float(potential_norm),
        bound_constant=float(bound_constant),
        smallness=float(smallness),
        threshold=threshold,
        admissible=potential_norm <= threshold,
    )
