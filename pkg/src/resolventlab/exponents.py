"""Exact geography of the exponent square for resolvent bounds.

Everything here lives on the closed unit square of points (x, y) = (1/p, 1/q)
that encode a Lebesgue source space L^p and target space L^q.  The sharp
L^p-L^q bound for the resolvent of the (fractional) Laplacian of order s in
dimension d blows up like dist(z, [0, inf))^(-gamma) with a piecewise-linear
exponent gamma(x, y), and scales in |z| with the homogeneity degree
omega = 1 - (d/s)(x - y).  Which linear branch of gamma is active, and whether
an estimate holds at all, is decided by a partition of the square into
polygonal regions whose boundaries mix strict, non-strict and half-open
conventions.  Those distinctions are meaningful on measure-zero sets, so all
coordinates are fractions.Fraction and every membership test is exact; there
is no tolerance parameter anywhere in this module.

The hot path (lattice scans touch ~10^6 points) avoids Fraction arithmetic:
a point a/b, c/e is handled as the integer 4-tuple (a, b, c, e) and each
geometric predicate is a sign of an integer expression.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from math import lcm
from typing import Optional, Sequence, Union

RationalLike = Union[int, str, Fraction]

__all__ = [
    "ExponentPair",
    "RegionLabel",
    "GammaBranch",
    "BranchReport",
    "Classification",
    "CriticalPoints",
    "dual",
    "gamma",
    "gamma_branch",
    "omega",
    "critical_points",
    "classify",
    "classify_fractional",
    "exponents",
    "ExponentReport",
]


def _as_fraction(value: RationalLike) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"expected an exact rational, got {type(value).__name__}")


@dataclass(frozen=True)
class ExponentPair:
    """A point (x, y) = (1/p, 1/q) of the closed unit square, stored exactly."""

    x: Fraction
    y: Fraction

    def __init__(self, x: RationalLike, y: RationalLike):
        xf, yf = _as_fraction(x), _as_fraction(y)
        if not (0 <= xf <= 1 and 0 <= yf <= 1):
            raise ValueError(f"exponent pair ({xf}, {yf}) is outside the unit square")
        object.__setattr__(self, "x", xf)
        object.__setattr__(self, "y", yf)

    def dual(self) -> "ExponentPair":
        """The conjugate-exponent reflection (x, y) -> (1 - y, 1 - x)."""
        return ExponentPair(1 - self.y, 1 - self.x)

    def as_floats(self) -> tuple[float, float]:
        return float(self.x), float(self.y)

    def _ints(self) -> tuple[int, int, int, int]:
        return (self.x.numerator, self.x.denominator, self.y.numerator, self.y.denominator)

    def __iter__(self):
        return iter((self.x, self.y))

    def __str__(self) -> str:
        return f"({self.x}, {self.y})"


def dual(pair: ExponentPair) -> ExponentPair:
    """Reflection across the line of duality; an involution of the square."""
    return pair.dual()


class RegionLabel(str, Enum):
    R1 = "R1"
    R2 = "R2"
    R3 = "R3"
    R3dual = "R3dual"
    TildeR2 = "TildeR2"
    TildeR3 = "TildeR3"
    TildeR3dual = "TildeR3dual"
    SegmentBE = "SegmentBE"
    SegmentBprimeEprime = "SegmentBprimeEprime"
    SegmentDH = "SegmentDH"
    SegmentDprimeH = "SegmentDprimeH"
    OutsideR0 = "OutsideR0"
    ExcludedCorner = "ExcludedCorner"

    def __str__(self) -> str:  # plain value in reports
        return self.value


class GammaBranch(str, Enum):
    Zero = "Zero"
    Trapezoid = "Trapezoid"
    QuadLeft = "QuadLeft"
    QuadRight = "QuadRight"

    def __str__(self) -> str:
        return self.value


_BRANCH_ORDER = (GammaBranch.Zero, GammaBranch.Trapezoid, GammaBranch.QuadLeft, GammaBranch.QuadRight)

_COARSE_TO_BRANCH = {
    RegionLabel.R1: GammaBranch.Zero,
    RegionLabel.R2: GammaBranch.Trapezoid,
    RegionLabel.R3: GammaBranch.QuadLeft,
    RegionLabel.R3dual: GammaBranch.QuadRight,
}


# ---------------------------------------------------------------------------
# exponents
# ---------------------------------------------------------------------------

def _check_dimension(d: int) -> None:
    if not isinstance(d, int) or d < 2:
        raise ValueError(f"dimension must be an integer >= 2, got {d!r}")


def gamma(d: int, pair: ExponentPair) -> Fraction:
    """Blow-up exponent of the operator norm in 1/dist(z, [0, inf)).

    gamma = max{0, 1 - (d+1)/2 (x-y), (d+1)/2 - d x, d y - (d-1)/2}, exact.
    The formula is total on the square; it carries estimate content only on
    the admissible strip (see ``classify``).
    """
    _check_dimension(d)
    x, y = pair.x, pair.y
    return max(
        Fraction(0),
        1 - Fraction(d + 1, 2) * (x - y),
        Fraction(d + 1, 2) - d * x,
        d * y - Fraction(d - 1, 2),
    )


def _branch_values(d: int, pair: ExponentPair) -> dict[GammaBranch, Fraction]:
    x, y = pair.x, pair.y
    return {
        GammaBranch.Zero: Fraction(0),
        GammaBranch.Trapezoid: 1 - Fraction(d + 1, 2) * (x - y),
        GammaBranch.QuadLeft: Fraction(d + 1, 2) - d * x,
        GammaBranch.QuadRight: d * y - Fraction(d - 1, 2),
    }


@dataclass(frozen=True)
class BranchReport:
    """Which linear branch of gamma attains the maximum.

    ``tied`` lists every branch attaining the max; when there is more than
    one, ``branch`` is the one dictated by the region label (falling back to
    a fixed Zero > Trapezoid > QuadLeft > QuadRight preference on boundary
    sets that carry no region label).
    """

    branch: GammaBranch
    tied: tuple[GammaBranch, ...]
    value: Fraction

    @property
    def is_tie(self) -> bool:
        return len(self.tied) > 1


def gamma_branch(d: int, pair: ExponentPair) -> BranchReport:
    """Active branch of gamma at ``pair``, with region-driven tie-breaking."""
    values = _branch_values(d, pair)
    top = max(values.values())
    tied = tuple(b for b in _BRANCH_ORDER if values[b] == top)
    if len(tied) == 1:
        return BranchReport(tied[0], tied, top)
    coarse = classify(d, pair).coarse
    preferred = _COARSE_TO_BRANCH.get(coarse)
    if preferred is not None and preferred in tied:
        return BranchReport(preferred, tied, top)
    return BranchReport(tied[0], tied, top)


def omega(d: int, s: RationalLike, pair: ExponentPair) -> Fraction:
    """Homogeneity degree 1 - (d/s)(x - y) governing the |z|-scaling.

    Total formula; it lies in [0, 1] exactly when the pair is in the
    admissible strip 0 <= x - y <= s/d.
    """
    _check_dimension(d)
    sf = _as_fraction(s)
    if sf <= 0:
        raise ValueError(f"order s must be positive, got {sf}")
    return 1 - Fraction(d, 1) / sf * (pair.x - pair.y)


# ---------------------------------------------------------------------------
# named points
# ---------------------------------------------------------------------------

class CriticalPoints:
    """The named vertices of the region geography for a given dimension.

    All coordinates are exact rationals.  Primed points are the duals of the
    unprimed ones.  ``A``/``A_prime`` (the endpoints of the uniform-bound
    segment on the line x - y = 2/d) exist only for d >= 3.
    """

    def __init__(self, d: int):
        _check_dimension(d)
        self.d = d
        self.B = ExponentPair(Fraction(d + 1, 2 * d), Fraction((d - 1) ** 2, 2 * d * (d + 1)))
        self.B_prime = self.B.dual()
        self.D = ExponentPair(Fraction(d - 1, 2 * d), Fraction(d - 1, 2 * d))
        self.D_prime = self.D.dual()
        self.E = ExponentPair(Fraction(d + 1, 2 * d), Fraction(0))
        self.E_prime = self.E.dual()
        self.H = ExponentPair(Fraction(1, 2), Fraction(1, 2))
        if d % 2 == 1:
            inv_p_star = Fraction(3 * (d - 1), 2 * (3 * d + 1))
            p_circ = Fraction((d + 5) * (d - 1), 2 * (d * d + 4 * d - 1))
            q_circ = Fraction((d - 1) * (d + 3), 2 * (d * d + 4 * d - 1))
        else:
            inv_p_star = Fraction(3 * d - 2, 2 * (3 * d + 2))
            p_circ = Fraction(d * d + 3 * d - 6, 2 * (d * d + 3 * d - 2))
            q_circ = Fraction((d - 1) * (d + 2), 2 * (d * d + 3 * d - 2))
        self.P_star = ExponentPair(inv_p_star, inv_p_star)
        self.P_circ = ExponentPair(p_circ, q_circ)
        self.P_circ_prime = self.P_circ.dual()
        self._A = None
        self._A_prime = None
        if d >= 3:
            self._A = ExponentPair(Fraction(d + 1, 2 * d), Fraction(d - 3, 2 * d))
            self._A_prime = self._A.dual()

    @property
    def A(self) -> ExponentPair:
        if self._A is None:
            raise ValueError("point A is defined only for d >= 3")
        return self._A

    @property
    def A_prime(self) -> ExponentPair:
        if self._A_prime is None:
            raise ValueError("point A' is defined only for d >= 3")
        return self._A_prime


@lru_cache(maxsize=None)
def critical_points(d: int) -> CriticalPoints:
    return CriticalPoints(d)


# ---------------------------------------------------------------------------
# integer predicate engine
# ---------------------------------------------------------------------------
# A point a/b, c/e is the tuple (a, b, c, e) with b, e > 0.  A line is an
# integer triple (A, B, C) standing for the form A x + B y + C; its sign at
# the point is the sign of A*a*e + B*c*b + C*b*e, whose denominator b*e > 0
# is dropped.

IntPoint = tuple[int, int, int, int]


def _lin(coef: tuple[int, int, int], pt: IntPoint) -> int:
    a, b, c, e = pt
    return coef[0] * a * e + coef[1] * c * b + coef[2] * b * e


def _dual_int(pt: IntPoint) -> IntPoint:
    a, b, c, e = pt
    return (e - c, e, b - a, b)


def _line_through(p: ExponentPair, q: ExponentPair) -> tuple[int, int, int]:
    """Integer form positive on the left of the directed line p -> q."""
    u = q.x - p.x
    v = q.y - p.y
    a, b, c = -v, u, v * p.x - u * p.y
    m = lcm(a.denominator, b.denominator, c.denominator)
    return (int(a * m), int(b * m), int(c * m))


def _cmp_x(pt: IntPoint, value: Fraction) -> int:
    a, b, _, _ = pt
    t = a * value.denominator - value.numerator * b
    return (t > 0) - (t < 0)


def _cmp_y(pt: IntPoint, value: Fraction) -> int:
    _, _, c, e = pt
    t = c * value.denominator - value.numerator * e
    return (t > 0) - (t < 0)


def _equals(pt: IntPoint, point: ExponentPair) -> bool:
    return _cmp_x(pt, point.x) == 0 and _cmp_y(pt, point.y) == 0


@dataclass(frozen=True)
class _Segment:
    start: ExponentPair
    end: ExponentPair
    line: tuple[int, int, int]
    include_start: bool = True
    include_end: bool = True

    def contains(self, pt: IntPoint) -> bool:
        if _lin(self.line, pt) != 0:
            return False
        if self.start.x != self.end.x:
            lo, hi = sorted((self.start.x, self.end.x))
            if _cmp_x(pt, lo) < 0 or _cmp_x(pt, hi) > 0:
                return False
        else:
            lo, hi = sorted((self.start.y, self.end.y))
            if _cmp_y(pt, lo) < 0 or _cmp_y(pt, hi) > 0:
                return False
        if not self.include_start and _equals(pt, self.start):
            return False
        if not self.include_end and _equals(pt, self.end):
            return False
        return True


def _segment(p: ExponentPair, q: ExponentPair, *, include_start=True, include_end=True) -> _Segment:
    return _Segment(p, q, _line_through(p, q), include_start, include_end)


def _convex_hull(points: Sequence[ExponentPair]) -> list[ExponentPair]:
    """Monotone-chain hull, counter-clockwise, collinear points dropped."""
    pts = sorted(set((p.x, p.y) for p in points))
    if len(pts) <= 2:
        return [ExponentPair(x, y) for x, y in pts]

    def half(seq):
        chain: list[tuple[Fraction, Fraction]] = []
        for p in seq:
            while len(chain) >= 2:
                ox, oy = chain[-2]
                ax, ay = chain[-1]
                cross = (ax - ox) * (p[1] - oy) - (ay - oy) * (p[0] - ox)
                if cross <= 0:
                    chain.pop()
                else:
                    break
            chain.append(p)
        return chain

    lower = half(pts)
    upper = half(reversed(pts))
    hull = lower[:-1] + upper[:-1]
    return [ExponentPair(x, y) for x, y in hull]


@dataclass(frozen=True)
class _ConvexRegion:
    """Closed convex hull with exact boundary-inclusive membership.

    Degenerate hulls (all vertices collinear, or a single point) fall back
    to segment or point membership, so the d = 2 collapse of the refinement
    geometry needs no special casing at call sites.
    """

    vertices: tuple[ExponentPair, ...]
    edges: tuple[tuple[int, int, int], ...]
    segment: Optional[_Segment]

    @staticmethod
    def of(points: Sequence[ExponentPair]) -> "_ConvexRegion":
        hull = _convex_hull(points)
        if len(hull) >= 3:
            edges = tuple(
                _line_through(hull[i], hull[(i + 1) % len(hull)]) for i in range(len(hull))
            )
            return _ConvexRegion(tuple(hull), edges, None)
        if len(hull) == 2:
            return _ConvexRegion(tuple(hull), (), _segment(hull[0], hull[1]))
        return _ConvexRegion(tuple(hull), (), None)

    def contains(self, pt: IntPoint) -> bool:
        if self.edges:
            return all(_lin(edge, pt) >= 0 for edge in self.edges)
        if self.segment is not None:
            return self.segment.contains(pt)
        return _equals(pt, self.vertices[0])


class _Geography:
    """All predicates for one (d, s): the strip, segments, regions, tildes."""

    def __init__(self, d: int, s: Fraction):
        self.d = d
        self.s = s
        pts = critical_points(d)
        self.points = pts
        sn, sd = s.numerator, s.denominator
        # 0 <= x - y and x - y <= s/d, excluded corners (s/d, 0), (1, (d-s)/d)
        self.diff_nonneg = (1, -1, 0)
        self.diff_max = (d * sd, -d * sd, -sn)  # <= 0 inside the strip
        self.corner_right = ExponentPair(Fraction(sn, sd * d), Fraction(0))
        self.corner_top = ExponentPair(Fraction(1), 1 - Fraction(sn, sd * d))
        # pentagon of uniform bounds: x - y >= 2/(d+1), x > (d+1)/(2d), y < (d-1)/(2d)
        self.pent_diff = (d + 1, -(d + 1), -2)  # >= 0
        self.pent_x = (2 * d, 0, -(d + 1))      # > 0
        self.pent_y = (0, 2 * d, -(d - 1))      # < 0
        # trapezoid band: 0 <= x - y < 2/(d+1) between the two slanted lines
        self.trap_low = (-(d - 1), -(d + 1), d - 1)   # <= 0: (d-1)(1-x) <= (d+1)y
        self.trap_high = (d + 1, d - 1, -(d + 1))     # <= 0: (d-1)y <= (d+1)(1-x)
        # lower quadrangle: y < (d-1)/(d+1)(1-x), y <= x, x < (d+1)/(2d)
        self.quad_line = (-(d - 1), -(d + 1), d - 1)  # > 0
        self.seg_BE = _segment(pts.B, pts.E)
        self.seg_DH = _segment(pts.D, pts.H, include_end=False)
        self.tilde2_hull = _ConvexRegion.of([pts.B, pts.B_prime, pts.P_circ_prime, pts.H, pts.P_circ])
        self.tilde2_cut_BBp = _segment(pts.B, pts.B_prime)
        self.tilde2_cut_PH = _segment(pts.P_circ, pts.H, include_end=False)
        self.tilde2_cut_PpH = _segment(pts.P_circ_prime, pts.H, include_end=False)
        self.tilde3_hull = _ConvexRegion.of([pts.D, pts.P_circ, pts.P_star])

    # -- strip ------------------------------------------------------------
    def in_strip(self, pt: IntPoint) -> bool:
        return _lin(self.diff_nonneg, pt) >= 0 and _lin(self.diff_max, pt) <= 0

    def is_excluded_corner(self, pt: IntPoint) -> bool:
        return _equals(pt, self.corner_right) or _equals(pt, self.corner_top)

    # -- open/closed polygon pieces ---------------------------------------
    def in_pentagon(self, pt: IntPoint) -> bool:
        return (
            _lin(self.pent_diff, pt) >= 0
            and _lin(self.pent_x, pt) > 0
            and _lin(self.pent_y, pt) < 0
        )

    def in_trapezoid(self, pt: IntPoint) -> bool:
        return (
            _lin(self.diff_nonneg, pt) >= 0
            and _lin(self.pent_diff, pt) < 0
            and _lin(self.trap_low, pt) <= 0
            and _lin(self.trap_high, pt) <= 0
        )

    def in_quadrangle(self, pt: IntPoint) -> bool:
        return (
            _lin(self.quad_line, pt) > 0
            and _lin(self.diff_nonneg, pt) >= 0
            and _lin(self.pent_x, pt) < 0
        )

    # -- tilde refinements -------------------------------------------------
    def in_tilde2(self, pt: IntPoint) -> bool:
        return (
            self.tilde2_hull.contains(pt)
            and not self.tilde2_cut_BBp.contains(pt)
            and not self.tilde2_cut_PH.contains(pt)
            and not self.tilde2_cut_PpH.contains(pt)
        )

    def in_tilde3(self, pt: IntPoint) -> bool:
        # called only for points already known to lie in R3
        return not self.tilde3_hull.contains(pt)


@lru_cache(maxsize=None)
def _geography(d: int, s: Fraction) -> _Geography:
    return _Geography(d, s)


# ---------------------------------------------------------------------------
# classification
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Classification:
    """Region membership of one pair: coarse label plus tilde refinement.

    ``label`` is the finest applicable name (the tilde label when the pair
    lies in a tilde refinement, the coarse label otherwise).
    """

    coarse: RegionLabel
    tilde: Optional[RegionLabel]

    @property
    def label(self) -> RegionLabel:
        return self.tilde if self.tilde is not None else self.coarse

    @property
    def estimate_bearing(self) -> bool:
        """Whether a sharp two-sided bound statement attaches to this pair."""
        return self.coarse in (
            RegionLabel.R1,
            RegionLabel.R2,
            RegionLabel.R3,
            RegionLabel.R3dual,
        )

    def __str__(self) -> str:
        if self.tilde is not None:
            return f"{self.tilde.value} ({self.coarse.value})"
        return self.coarse.value


def _classify_int(geo: _Geography, pt: IntPoint) -> Classification:
    if not geo.in_strip(pt):
        return Classification(RegionLabel.OutsideR0, None)
    if geo.is_excluded_corner(pt):
        return Classification(RegionLabel.ExcludedCorner, None)
    dpt = _dual_int(pt)
    if geo.seg_BE.contains(pt):
        return Classification(RegionLabel.SegmentBE, None)
    if geo.seg_BE.contains(dpt):
        return Classification(RegionLabel.SegmentBprimeEprime, None)
    if geo.seg_DH.contains(pt):
        return Classification(RegionLabel.SegmentDH, None)
    if geo.seg_DH.contains(dpt):
        return Classification(RegionLabel.SegmentDprimeH, None)
    if geo.in_pentagon(pt):
        return Classification(RegionLabel.R1, None)
    if geo.in_trapezoid(pt):
        tilde = RegionLabel.TildeR2 if geo.in_tilde2(pt) else None
        return Classification(RegionLabel.R2, tilde)
    if geo.in_quadrangle(pt):
        tilde = RegionLabel.TildeR3 if geo.in_tilde3(pt) else None
        return Classification(RegionLabel.R3, tilde)
    if geo.in_quadrangle(dpt):
        tilde = RegionLabel.TildeR3dual if geo.in_tilde3(dpt) else None
        return Classification(RegionLabel.R3dual, tilde)
    raise AssertionError(f"unclassified point {pt}; the pieces should cover the strip")


def classify(d: int, pair: ExponentPair) -> Classification:
    """Exact region label of ``pair`` for the classical (order 2) operator.

    The admissible strip is 0 <= x - y < 1 for d = 2 and 0 <= x - y <= 2/d
    minus the two strip corners for d >= 3; every pair of the unit square
    receives exactly one label.  Boundary conventions: the half-open diagonal
    segments reaching towards the centre point keep that centre point out of
    the segment label (it classifies as the trapezoid region, where its
    blow-up exponent equals 1), and the refinement regions remove their
    closing edge and half-open diagonal cuts.
    """
    _check_dimension(d)
    geo = _geography(d, Fraction(2))
    return _classify_int(geo, pair._ints())


def classify_fractional(d: int, s: RationalLike, pair: ExponentPair) -> Classification:
    """Region label for the operator of fractional order s in (0, d).

    Same taxonomy intersected with the strip 0 <= x - y <= s/d (corners
    (s/d, 0) and (1, (d-s)/d) excluded).  For s = 2 this agrees with
    ``classify`` on every pair.
    """
    _check_dimension(d)
    sf = _as_fraction(s)
    if not (0 < sf < d):
        raise ValueError(f"fractional order must satisfy 0 < s < d, got s={sf}, d={d}")
    geo = _geography(d, sf)
    return _classify_int(geo, pair._ints())


# ---------------------------------------------------------------------------
# aggregate report
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ExponentReport:
    """Everything the classifier knows about one (d, s, pair) query."""

    d: int
    s: Fraction
    pair: ExponentPair
    classification: Classification
    gamma: Fraction
    omega: Fraction
    branch: BranchReport

    @property
    def omega_in_range(self) -> bool:
        return 0 <= self.omega <= 1

    def to_dict(self) -> dict:
        return {
            "d": self.d,
            "s": str(self.s),
            "x": str(self.pair.x),
            "y": str(self.pair.y),
            "region": str(self.classification),
            "coarse": self.classification.coarse.value,
            "tilde": self.classification.tilde.value if self.classification.tilde else None,
            "gamma": str(self.gamma),
            "omega": str(self.omega),
            "branch": self.branch.branch.value,
            "branch_tied": [b.value for b in self.branch.tied] if self.branch.is_tie else [],
            "estimate_bearing": self.classification.estimate_bearing,
            "omega_in_range": self.omega_in_range,
        }


def exponents(d: int, s: RationalLike, pair: ExponentPair) -> ExponentReport:
    """Bundle classification, gamma, omega and the active branch."""
    sf = _as_fraction(s)
    if sf == 2:
        cls = classify(d, pair)
    else:
        cls = classify_fractional(d, sf, pair)
    return ExponentReport(
        d=d,
        s=sf,
        pair=pair,
        classification=cls,
        gamma=gamma(d, pair),
        omega=omega(d, sf, pair),
        branch=gamma_branch(d, pair),
    )
