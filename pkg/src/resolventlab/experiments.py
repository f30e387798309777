"""Scaling experiments, slope fitting and the 1-d eigenvalue demo.

A sweep runs one extremizer pipeline over a dyadic ladder of concentration
scales delta, records the measured quantity per delta, and fits the log-log
slope against the exponent predicted by the exponent geography:

* slab sweep: the operator ratio ||m_delta f_delta||_q / ||f_delta||_p on a
  periodic grid; expected slope -1 + (d+1)/2 (1/p - 1/q);
* shell sweep: the L^q norm of the radial synthesis over the measurement
  annuli; expected slope (d-1)/2 - d/q;
* 1-d kernel sweep: the closed-form convolution bound at z = 1 + i delta;
  expected slope -(1 - 1/p + 1/q).

Grid sizing for the slab sweep is baked into the plan: per-axis box lengths
proportional to the inverse frequency-slab widths (2 pi times an integer, so
the unit carrier sits exactly on the frequency lattice) and a fixed point
count per axis.  With that rule the sampled slab profile is identical across
delta up to rounding of the box integers, so measured slopes carry no
discretisation drift.

The shell sweep evaluates all radii of one delta through a single composite
Gauss rule whose panels follow the two structures of the integrand (the
concentration spike at scale delta around rho = 1, dyadically refined, and
the oscillation at scale pi/r), with a lower-order companion rule as the
error estimate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence

import numpy as np

from resolventlab.exponents import ExponentPair, RationalLike, _as_fraction
from resolventlab.extremizers import (
    KnappSpec,
    SphericalSpec,
    knapp_field,
    measurement_annuli,
    spherical_constants,
)
from resolventlab.grid import (
    GridField,
    GridSpec,
    ImagPartSymbol,
    lp_norm,
    operator_ratio,
)
from resolventlab.kernels import (
    asymptotic_remainder,
    bessel_j,
    spectral_bump,
    young_upper_bound_1d,
)

__all__ = [
    "SlopeFit",
    "slope_fit",
    "SweepPlan",
    "SweepResult",
    "knapp_grid",
    "run_sweep",
    "DiscreteSchrodinger",
    "potential_preset",
    "eigenbox_report",
]


# ---------------------------------------------------------------------------
# slope fitting
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SlopeFit:
    """Least-squares power-law fit of value against delta on log-log axes."""

    slope: float
    intercept: float
    residual_max: float
    expected: Optional[float]
    tolerance: float
    passed: Optional[bool]

    def to_dict(self) -> dict:
        return {
            "slope": self.slope,
            "intercept": self.intercept,
            "residual_max": self.residual_max,
            "expected": self.expected,
            "tolerance": self.tolerance,
            "passed": self.passed,
        }


def slope_fit(
    points: Sequence[tuple[float, float]],
    expected: Optional[float] = None,
    tolerance: float = 0.1,
) -> SlopeFit:
    """Ordinary least squares of log(value) on log(delta).

    Needs at least 4 points with positive values; ``passed`` compares the
    fitted slope against ``expected`` at ``tolerance`` when one is given.
    """
    pts = list(points)
    if len(pts) < 4:
        raise ValueError(f"need at least 4 points for a slope fit, got {len(pts)}")
    deltas = np.array([p[0] for p in pts], dtype=float)
    values = np.array([p[1] for p in pts], dtype=float)
    if np.any(values <= 0) or np.any(deltas <= 0):
        raise ValueError("slope fit needs positive deltas and values")
    lx, ly = np.log(deltas), np.log(values)
    slope, intercept = np.polyfit(lx, ly, 1)
    resid = np.max(np.abs(ly - (slope * lx + intercept)))
    passed = None if expected is None else bool(abs(slope - expected) <= tolerance)
    return SlopeFit(
        slope=float(slope),
        intercept=float(intercept),
        residual_max=float(resid),
        expected=expected,
        tolerance=tolerance,
        passed=passed,
    )


# ---------------------------------------------------------------------------
# sweep plans
# ---------------------------------------------------------------------------

DEFAULT_LADDERS = {
    "knapp": tuple(2.0 ** -j for j in range(3, 8)),
    # the measurement shell mu/(4 delta) <= |x| <= mu/(2 delta) holds its
    # first annulus only once mu/delta >~ 8 pi, which for the resolved shell
    # constants means delta <~ 1.2e-5; hence the much finer default ladder
    "spherical": tuple(2.0 ** -j for j in range(17, 22)),
    "kernel1d": tuple(2.0 ** -j for j in range(3, 11)),
}


@dataclass(frozen=True)
class SweepPlan:
    """A validated scaling experiment: kind, exponents, ladder, grid rule."""

    kind: str
    d: int
    s: float
    pair: ExponentPair
    deltas: tuple[float, ...]
    grid_points: int = 256
    annulus_samples: int = 5
    expected: Optional[float] = None  # None: derive from the exponent geography

    def __post_init__(self):
        if self.kind not in ("knapp", "spherical", "kernel1d"):
            raise ValueError(f"unknown experiment kind {self.kind!r}")
        if len(self.deltas) < 4:
            raise ValueError("a sweep needs at least 4 ladder points")
        if any(b >= a for a, b in zip(self.deltas, self.deltas[1:])):
            raise ValueError("the delta ladder must be strictly decreasing")
        if self.kind == "knapp":
            for dl in self.deltas:
                KnappSpec.create(self.d, self.s, dl)  # validates the collar property
        elif self.kind == "spherical":
            spec = spherical_constants(self.d, self.s)
            for dl in self.deltas:
                measurement_annuli(spec, dl)  # validates ceiling and non-emptiness

    @property
    def expected_slope(self) -> float:
        if self.expected is not None:
            return self.expected
        x, y = float(self.pair.x), float(self.pair.y)
        if self.kind == "knapp":
            return -1.0 + 0.5 * (self.d + 1) * (x - y)
        if self.kind == "spherical":
            return 0.5 * (self.d - 1) - self.d * y
        return -(1.0 - x + y)


def knapp_grid(spec: KnappSpec, points: int = 256) -> GridSpec:
    """Grid rule for the slab sweep: boxes 2 pi ceil(8 / width) per axis.

    The normal axis carries the unit carrier (exactly on the lattice since
    the box is 2 pi times an integer); frequency spacings then satisfy the
    one-eighth-of-the-slab resolution rule by construction.
    """
    m_normal = math.ceil(8.0 / spec.normal_width)
    m_trans = math.ceil(8.0 / spec.transverse_width)
    box = [2.0 * math.pi * m_trans] * (spec.d - 1) + [2.0 * math.pi * m_normal]
    carrier = [0.0] * (spec.d - 1) + [1.0]
    return GridSpec(spec.d, points, box, carrier)


@dataclass(frozen=True)
class SweepResult:
    plan: SweepPlan
    rows: tuple[dict, ...]
    fit: SlopeFit
    extra_fits: dict

    def to_dict(self) -> dict:
        return {
            "kind": self.plan.kind,
            "d": self.plan.d,
            "s": self.plan.s,
            "x": str(self.plan.pair.x),
            "y": str(self.plan.pair.y),
            "expected_slope": self.plan.expected_slope,
            "fit": self.fit.to_dict(),
            "extra_fits": {k: v.to_dict() for k, v in self.extra_fits.items()},
            "rows": list(self.rows),
        }


def _inv(frac: Fraction) -> float:
    return math.inf if frac == 0 else float(1 / frac)


def _run_knapp(plan: SweepPlan, tolerance: float) -> SweepResult:
    p = _inv(plan.pair.x)
    q = _inv(plan.pair.y)
    rows = []
    for dl in plan.deltas:
        spec = KnappSpec.create(plan.d, plan.s, dl)
        grid = knapp_grid(spec, plan.grid_points)
        f = knapp_field(spec, grid)
        symbol = ImagPartSymbol(plan.s, dl)
        rows.append(
            {
                "delta": dl,
                "ratio": operator_ratio(f, symbol, p, q),
                "norm_p": lp_norm(f, p),
                "norm_q": lp_norm(f, q),
            }
        )
    fit = slope_fit([(r["delta"], r["ratio"]) for r in rows], plan.expected_slope, tolerance)
    x, y = float(plan.pair.x), float(plan.pair.y)
    extra = {
        "norm_p": slope_fit(
            [(r["delta"], r["norm_p"]) for r in rows], 0.5 * (plan.d + 1) * (1 - x), 0.05
        ),
        "norm_q": slope_fit(
            [(r["delta"], r["norm_q"]) for r in rows], 0.5 * (plan.d + 1) * (1 - y), 0.05
        ),
    }
    return SweepResult(plan, tuple(rows), fit, extra)


# -- batched composite rule for the shell sweep ------------------------------

def _shell_panels(spec: SphericalSpec, delta: float, r_max: float) -> np.ndarray:
    """Panel edges on the profile support: dyadic spike + oscillation scale."""
    prof = spec.profile_hat()
    lo, hi = prof.interval
    s = spec.s
    edges = {lo, hi}
    # dyadic shells in |rho^s - 1| from delta/8 outwards; the tangency-zone
    # boundaries +- s lam delta land exactly on edges
    t = delta / 8.0
    cap = max(abs(hi ** s - 1.0), abs(1.0 - lo ** s))
    while t < cap:
        if t < 1.0:
            edges.add((1.0 - t) ** (1.0 / s))
        edges.add((1.0 + t) ** (1.0 / s))
        t *= 2.0
    for tz in (s * spec.lam * delta,):
        if tz < 1.0:
            edges.add((1.0 - tz) ** (1.0 / s))
        edges.add((1.0 + tz) ** (1.0 / s))
    # oscillation splitting at the fastest radius
    step = math.pi / r_max
    k = 1
    while lo + k * step < hi:
        edges.add(lo + k * step)
        k += 1
    return np.array(sorted(e for e in edges if lo <= e <= hi))


@dataclass(frozen=True)
class _ShellBatch:
    radii: np.ndarray
    q1: np.ndarray
    q2: np.ndarray
    q3: np.ndarray
    i1: np.ndarray
    i2: np.ndarray

    @property
    def total(self) -> np.ndarray:
        return self.q1 - self.q2 + self.q3


def _shell_batch(
    spec: SphericalSpec, delta: float, radii: np.ndarray, rel_tol: float = 1e-6
) -> _ShellBatch:
    """Main/remainder split of the shell synthesis at many radii at once.

    One composite Gauss rule (15-point, with a 7-point companion as the
    error estimate) over structure-following panels; all radii share the
    node set, so the integrand factors are evaluated as outer products.
    """
    radii = np.asarray(radii, dtype=float)
    prof = spec.profile_hat()
    s, d, lam = spec.s, spec.d, spec.lam
    edges = _shell_panels(spec, delta, float(np.max(radii)))
    nodes_hi, weights_hi = np.polynomial.legendre.leggauss(15)
    nodes_lo, weights_lo = np.polynomial.legendre.leggauss(7)
    a, b = edges[:-1], edges[1:]
    mid, half = 0.5 * (a + b), 0.5 * (b - a)

    def assemble(nodes, weights):
        rho = (mid[:, None] + half[:, None] * nodes[None, :]).ravel()
        w = (half[:, None] * weights[None, :]).ravel()
        base = spectral_bump(rho, s, delta) * prof(rho)
        cosw = base * rho ** (0.5 * (d - 1)) * w
        phase = np.exp(1j * np.outer(radii, rho - 1.0))
        cos_int = phase.real @ cosw
        sin_int = phase.imag @ cosw
        u = np.outer(radii, rho)
        rem = asymptotic_remainder(0.5 * (d - 2), u.ravel()).reshape(u.shape)
        rem_int = (rem * u ** (0.5 * (2 - d))) @ (base * rho ** (d - 1) * w)
        zone = np.abs(rho ** s - 1.0) <= s * lam * delta
        i1 = (phase.real * zone[None, :]) @ cosw
        return cos_int, sin_int, rem_int, i1

    cos_hi, sin_hi, rem_hi, i1_hi = assemble(nodes_hi, weights_hi)
    cos_lo, sin_lo, rem_lo, i1_lo = assemble(nodes_lo, weights_lo)
    scale = np.maximum(np.abs(cos_hi), 1e-30)
    err = max(
        np.max(np.abs(cos_hi - cos_lo) / scale),
        np.max(np.abs(rem_hi - rem_lo) / scale),
        np.max(np.abs(sin_hi - sin_lo) / scale),
    )
    if err > rel_tol:
        raise ArithmeticError(f"shell batch rule error {err:.2e} above {rel_tol:.0e}")
    pre = (2.0 * math.pi) ** (0.5 * (d - 1))
    amp = 2.0 * pre * radii ** (0.5 * (1 - d))
    angle = radii - 0.25 * math.pi * (d - 1)
    return _ShellBatch(
        radii=radii,
        q1=amp * np.cos(angle) * cos_hi,
        q2=amp * np.sin(angle) * sin_hi,
        q3=(2.0 * math.pi) ** (0.5 * d) * rem_hi,
        i1=i1_hi,
        i2=cos_hi - i1_hi,
    )


def _run_spherical(plan: SweepPlan, tolerance: float) -> SweepResult:
    spec = spherical_constants(plan.d, plan.s)
    q = _inv(plan.pair.y)
    if math.isinf(q):
        raise ValueError("the shell sweep needs a finite target exponent")
    if plan.d != 2:
        raise ValueError("the shell sweep is wired for d = 2 measure factors")
    gl_nodes, gl_weights = np.polynomial.legendre.leggauss(plan.annulus_samples)
    k_tangency = 2.0 * math.atan(plan.s * spec.lam)
    i1_floor = 99.0 / (100.0 * plan.s) * k_tangency
    i2_ceiling = (2.0 / plan.s) * (math.pi - k_tangency)
    rows = []
    for dl in plan.deltas:
        annuli = measurement_annuli(spec, dl)
        mids, halves = [], []
        for lo, hi in annuli:
            mids.append(0.5 * (lo + hi))
            halves.append(0.5 * (hi - lo))
        mids, halves = np.array(mids), np.array(halves)
        radii = (mids[:, None] + halves[:, None] * gl_nodes[None, :]).ravel()
        batch = _shell_batch(spec, dl, radii)
        qvals = np.abs(batch.total).reshape(len(annuli), -1)
        # L^q over the union of annuli, d = 2 radial measure 2 pi r dr
        rr = radii.reshape(len(annuli), -1)
        integrand = qvals ** q * 2.0 * math.pi * rr
        per_annulus = (integrand * gl_weights[None, :]) @ np.ones(plan.annulus_samples)
        norm_q = float(np.sum(per_annulus * halves) ** (1.0 / q))
        rows.append(
            {
                "delta": dl,
                "qnorm": norm_q,
                "annuli": len(annuli),
                "i1_min": float(np.min(batch.i1)),
                "i2_max_abs": float(np.max(np.abs(batch.i2))),
                "i1_floor": i1_floor,
                "i2_ceiling": i2_ceiling,
                "main_term_min": float(np.min((batch.q1 - batch.q2) * radii ** (0.5 * (plan.d - 1)))),
                "remainder_max": float(np.max(np.abs(batch.q3))),
            }
        )
    fit = slope_fit([(r["delta"], r["qnorm"]) for r in rows], plan.expected_slope, tolerance)
    return SweepResult(plan, tuple(rows), fit, {})


def _run_kernel1d(plan: SweepPlan, tolerance: float) -> SweepResult:
    p = _inv(plan.pair.x)
    q = _inv(plan.pair.y)
    rows = [
        {"delta": dl, "bound": young_upper_bound_1d(1.0 + 1j * dl, p, q)}
        for dl in plan.deltas
    ]
    fit = slope_fit([(r["delta"], r["bound"]) for r in rows], plan.expected_slope, tolerance)
    return SweepResult(plan, tuple(rows), fit, {})


def run_sweep(plan: SweepPlan, tolerance: float = 0.1) -> SweepResult:
    """Execute a sweep plan and fit the measured quantity's slope."""
    if plan.kind == "knapp":
        return _run_knapp(plan, tolerance)
    if plan.kind == "spherical":
        return _run_spherical(plan, tolerance)
    return _run_kernel1d(plan, tolerance)


# ---------------------------------------------------------------------------
# 1-d non-self-adjoint eigenvalue demo
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DiscreteSchrodinger:
    """Periodic 1-d second-difference operator plus a (complex) potential.

    The free spectrum is {4 sin^2(pi k / n) / h^2}, a subset of [0, 4/h^2];
    dense diagonalisation caps n at 512.
    """

    n: int
    length: float
    potential: np.ndarray = field(repr=False)

    def __init__(self, n: int, length: float, potential: np.ndarray):
        if not (8 <= n <= 512):
            raise ValueError("n must lie in [8, 512] for dense spectra")
        v = np.asarray(potential, dtype=complex)
        if v.shape != (n,):
            raise ValueError(f"potential must have shape ({n},)")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "length", float(length))
        object.__setattr__(self, "potential", v)

    @property
    def h(self) -> float:
        return self.length / self.n

    def coordinates(self) -> np.ndarray:
        return -0.5 * self.length + self.h * np.arange(self.n)

    def matrix(self) -> np.ndarray:
        n, h = self.n, self.h
        lap = (
            2.0 * np.eye(n) - np.roll(np.eye(n), 1, axis=1) - np.roll(np.eye(n), -1, axis=1)
        ) / (h * h)
        return lap.astype(complex) + np.diag(self.potential)

    def spectrum(self) -> np.ndarray:
        eig = np.linalg.eigvals(self.matrix())
        order = np.lexsort((eig.imag, eig.real))
        return eig[order]


def potential_preset(name: str, amplitude: complex, x: np.ndarray) -> np.ndarray:
    """Built-in potentials: gaussian, box, complex-bump (unit-scale shapes)."""
    if name == "gaussian":
        return amplitude * np.exp(-(x ** 2))
    if name == "box":
        return amplitude * (np.abs(x) <= 1.0).astype(complex)
    if name == "complex-bump":
        return amplitude * (1.0 + 1.0j) / math.sqrt(2.0) * np.exp(-(x ** 2))
    raise ValueError(f"unknown potential preset {name!r}")


def eigenbox_report(
    pair: ExponentPair,
    ell: float,
    potential_name: str,
    amplitude: complex,
    n: int = 256,
    length: float = 20.0,
    bound_constant: float = 1.0,
    smallness: float = 0.5,
    off_ray_tol: float = 1e-8,
) -> dict:
    """Full report of the discrete eigenvalue-localisation demo (d = 1).

    Builds the periodic operator, measures ||V|| in the exponent pq/(q-p)
    dictated by the pair, checks the smallness hypothesis, and lists every
    eigenvalue at distance more than ``off_ray_tol`` from the ray together
    with its region membership.  For admissible runs, off-ray eigenvalues
    inside the sublevel region are flagged as violations (subject to
    discretisation error, as the caveat in the report states).
    """
    from resolventlab.spectral import RegionQuery, eigenvalue_enclosure, membership

    x, y = pair.x, pair.y
    if x == y:
        raise ValueError("the potential exponent pq/(q-p) is undefined at p = q")
    r_expo = float(1 / (x - y))  # 1/r = 1/p - 1/q
    h = length / n
    coords = -0.5 * length + h * np.arange(n)
    op = DiscreteSchrodinger(n, length, potential_preset(potential_name, amplitude, coords))
    # plain Riemann-sum norm of the potential on the operator's own grid
    vnorm = float((op.h * np.sum(np.abs(op.potential) ** r_expo)) ** (1.0 / r_expo))
    query = RegionQuery.line(pair, ell)
    enclosure = eigenvalue_enclosure(query, vnorm, bound_constant, smallness)
    eig = op.spectrum()
    dists = np.where(eig.real >= 0, np.abs(eig.imag), np.abs(eig))
    off_ray = dists > off_ray_tol
    entries = []
    violations = []
    for val, dist, off in zip(eig, dists, off_ray):
        if not off:
            continue
        inside = membership(query, complex(val))
        entry = {
            "re": float(val.real),
            "im": float(val.imag),
            "dist_to_ray": float(dist),
            "in_sublevel_region": bool(inside),
            "allowed": bool(enclosure.may_contain_eigenvalue(complex(val))),
        }
        entries.append(entry)
        if enclosure.admissible and inside:
            violations.append(entry)
    return {
        "operator": {"d": 1, "n": op.n, "L": op.length, "h": op.h},
        "pair": {"x": str(pair.x), "y": str(pair.y)},
        "potential": {"preset": potential_name, "amplitude_re": float(np.real(amplitude)),
                      "amplitude_im": float(np.imag(amplitude)),
                      "exponent": r_expo, "norm": vnorm},
        "hypothesis": enclosure.to_dict(),
        "spectrum": {
            "count": int(eig.size),
            "off_ray_count": int(np.sum(off_ray)),
            "max_imag_abs": float(np.max(np.abs(eig.imag))),
            "off_ray": entries,
        },
        "violations": violations,
        "caveat": (
            "the enclosure is relative to the user-supplied bound constant; "
            "no value of it is certified here, and eigenvalues of the discrete "
            "operator track the continuum ones only up to discretisation error"
        ),
    }


