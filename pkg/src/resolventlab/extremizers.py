"""Test functions that extremise the curvature-sensitive lower bounds.

Two constructions, both concentrating near the unit sphere in frequency as
delta -> 0:

* the slab (Knapp-type) function, whose transform is a smooth bump on the
  anisotropic box |xi_j| <= c sqrt(delta) (transverse), k delta/4 <= xi_d - 1
  <= k delta (normal), with c, k chosen so that 0 < |xi|^s - 1 <= delta holds
  on the whole box; the concentrating multiplier is then >= 1/(2 delta)
  there, and the output stays coherent on a dual box of volume
  ~ delta^{-(d+1)/2};

* the spherical-shell profile, radial in frequency, measured on annuli of
  radius ~ 1/delta chosen where the oscillatory kernel factor peaks.

Every constant of the constructions (c, k, the admissible delta ceiling, the
shell plateau half-width, the tangency parameter lam, the shell scale mu) is
resolved here in closed form and validated by its defining equation, so the
scaling experiments are reproducible from the serialised spec alone.

The concrete smooth bumps are built from the step S(t) = b(t)/(b(t)+b(1-t)),
b(t) = e^{-1/t} (t > 0); any smooth plateau with the same support and
plateau sets would do, and downstream checks depend only on those sets plus
measured slopes.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from resolventlab.grid import GridField, GridSpec, inverse_transform
from resolventlab.kernels import RadialProfile

__all__ = [
    "smooth_step",
    "plateau_bump",
    "window_bump",
    "KnappSpec",
    "knapp_constants",
    "knapp_field",
    "knapp_box",
    "KnappBox",
    "SphericalSpec",
    "spherical_constants",
    "spherical_profile_hat",
    "measurement_annuli",
]

ArrayLike = Union[float, np.ndarray]


# ---------------------------------------------------------------------------
# smooth bumps
# ---------------------------------------------------------------------------

def _b(t: np.ndarray) -> np.ndarray:
    out = np.zeros_like(t)
    pos = t > 0
    out[pos] = np.exp(-1.0 / t[pos])
    return out


def smooth_step(t: ArrayLike) -> ArrayLike:
    """Smooth step S with S = 0 for t <= 0, S = 1 for t >= 1, S(t)+S(1-t) = 1."""
    ts = np.atleast_1d(np.asarray(t, dtype=float))
    num = _b(ts)
    den = num + _b(1.0 - ts)
    out = np.where(den > 0, num / np.where(den > 0, den, 1.0), 0.0)
    out = np.where(ts >= 1.0, 1.0, out)
    return float(out[0]) if np.ndim(t) == 0 else out.reshape(np.shape(t))


def plateau_bump(t: ArrayLike) -> ArrayLike:
    """Even bump: 1 on [-1/2, 1/2], supported in [-1, 1]."""
    ts = np.asarray(t, dtype=float)
    return smooth_step(2.0 * (1.0 - np.abs(ts)))


def window_bump(t: ArrayLike) -> ArrayLike:
    """One-sided window: 1 on [1/2, 3/4], supported in [1/4, 1]."""
    ts = np.asarray(t, dtype=float)
    return smooth_step(4.0 * ts - 1.0) * smooth_step(4.0 - 4.0 * ts)


def _plateau_on(center: float, inner: float, outer: float):
    """Bump equal to 1 on |r - center| <= inner, supported in |r - center| < outer."""
    if not 0 < inner < outer:
        raise ValueError("need 0 < inner < outer")
    width = outer - inner

    def f(r: np.ndarray) -> np.ndarray:
        u = np.abs(np.asarray(r, dtype=float) - center)
        return smooth_step((outer - u) / width)

    return f


# ---------------------------------------------------------------------------
# slab construction
# ---------------------------------------------------------------------------

def _curvature_ceiling(s: float) -> float:
    """max |mu''| on [0, 1] for mu(t) = (1+t)^{s/2}; 0 when s = 2."""
    a = 0.5 * s * abs(0.5 * s - 1.0)
    return a * max(1.0, 2.0 ** (0.5 * s - 2.0))


def knapp_constants(d: int, s: float) -> dict:
    """Slab constants: transverse width factor c, normal width factor k,
    admissible ceiling c_s for delta.

    c = 1/sqrt(2(d-1)s); k is the positive root of 2k + k^2/100 = 1/(2s),
    so that the box |xi_j| <= c sqrt(delta), k delta/4 <= xi_d - 1 <= k delta
    satisfies 0 < |xi|^s - 1 <= delta for all delta below
    c_s = min(1/100, s, s^2 / max|mu''|); a vanishing second derivative
    (s = 2) makes the curvature ceiling vacuous.
    """
    if d < 2:
        raise ValueError("slab construction needs d >= 2")
    if s <= 0:
        raise ValueError("order s must be positive")
    c = 1.0 / math.sqrt(2.0 * (d - 1) * s)
    k = (-2.0 + math.sqrt(4.0 + 0.04 / (2.0 * s))) / 0.02
    m = _curvature_ceiling(s)
    ceiling = min(1e-2, s) if m == 0.0 else min(1e-2, s, s * s / m)
    return {"c": c, "k": k, "c_s": ceiling}


@dataclass(frozen=True)
class KnappSpec:
    """A fully resolved slab construction at one concentration scale delta."""

    d: int
    s: float
    delta: float
    c: float
    k: float
    c_s: float

    @staticmethod
    def create(d: int, s: float, delta: float) -> "KnappSpec":
        consts = knapp_constants(d, s)
        spec = KnappSpec(d=d, s=s, delta=delta, **consts)
        if delta <= 0:
            raise ValueError("delta must be positive")
        # c_s is a sufficient ceiling; what the construction actually needs is
        # 0 < |xi|^s - 1 <= delta on the closed slab, whose maximum sits at
        # the far corner.  Checking the property itself admits every delta
        # below c_s and, where the exponent allows (s = 2 has no curvature
        # loss), also the coarser scales.
        rho_sq = (d - 1) * spec.transverse_width ** 2 + (1.0 + spec.normal_width) ** 2
        excess = rho_sq ** (0.5 * s) - 1.0
        if excess > delta:
            raise ValueError(
                f"delta={delta} too coarse: max |xi|^s - 1 = {excess:.4g} on the "
                f"slab exceeds delta (guaranteed ceiling c_s = {consts['c_s']})"
            )
        return spec

    @property
    def transverse_width(self) -> float:
        return self.c * math.sqrt(self.delta)

    @property
    def normal_width(self) -> float:
        return self.k * self.delta

    def to_json(self) -> str:
        return json.dumps(
            {
                "kind": "knapp",
                "d": self.d,
                "s": self.s,
                "delta": self.delta,
                "c": self.c,
                "k": self.k,
                "c_s": self.c_s,
            },
            sort_keys=True,
        )


def knapp_field(spec: KnappSpec, grid: GridSpec) -> GridField:
    """Synthesise the slab function on ``grid`` (space domain).

    Its transform is window((xi_d - 1)/(k delta)) prod_j bump(xi_j /
    (c sqrt(delta))).  The grid must resolve the frequency box: spacing at
    most k delta / 8 along the normal axis and c sqrt(delta) / 8
    transversally, and the lattice window must contain the closed box with
    at least one spacing to spare (a carrier at xi_d = 1 keeps that cheap).
    """
    if grid.d != spec.d:
        raise ValueError(f"grid dimension {grid.d} != construction dimension {spec.d}")
    wt = spec.transverse_width
    wn = spec.normal_width
    for axis in range(spec.d):
        dxi = grid.freq_spacing[axis]
        need = wn / 8.0 if axis == spec.d - 1 else wt / 8.0
        if dxi > need:
            raise ValueError(
                f"axis {axis}: frequency spacing {dxi:.3e} exceeds the "
                f"required {need:.3e}; enlarge the box"
            )
        freqs = grid.axis_frequencies(axis)
        lo, hi = (1.0 + wn / 4.0, 1.0 + wn) if axis == spec.d - 1 else (-wt, wt)
        if freqs[0] > lo - dxi or freqs[-1] < hi + dxi:
            raise ValueError(
                f"axis {axis}: lattice window [{freqs[0]:.4f}, {freqs[-1]:.4f}] "
                f"does not cover the frequency box [{lo:.4f}, {hi:.4f}]"
            )
    mesh = grid.frequency_mesh()
    hat = window_bump((mesh[-1] - 1.0) / wn).astype(complex)
    for j in range(spec.d - 1):
        hat = hat * plateau_bump(mesh[j] / wt)
    hat = np.broadcast_to(hat, grid.shape)
    return inverse_transform(GridField(grid, hat))


@dataclass(frozen=True)
class KnappBox:
    """Axis-aligned coherence box: the output stays large throughout it."""

    half_widths: tuple[float, ...]

    @property
    def volume(self) -> float:
        return math.prod(2.0 * w for w in self.half_widths)

    def sample_points(self, per_axis: int = 5) -> np.ndarray:
        axes = [np.linspace(-w, w, per_axis) for w in self.half_widths]
        mesh = np.meshgrid(*axes, indexing="ij")
        return np.stack([m.ravel() for m in mesh], axis=1)

    def corners(self) -> np.ndarray:
        axes = [np.array([-w, w]) for w in self.half_widths]
        mesh = np.meshgrid(*axes, indexing="ij")
        return np.stack([m.ravel() for m in mesh], axis=1)


def knapp_box(spec: KnappSpec) -> KnappBox:
    """Half-widths 1/(200 (d-1) c sqrt(delta)) transverse, 1/(200 k delta) normal.

    On this box every frequency of the slab satisfies |x . xi - x_d| <= 1/100,
    which is the phase-coherence margin behind the pointwise lower bound.
    """
    wt = 1.0 / (200.0 * (spec.d - 1) * spec.c * math.sqrt(spec.delta))
    wn = 1.0 / (200.0 * spec.k * spec.delta)
    return KnappBox(tuple([wt] * (spec.d - 1) + [wn]))


# ---------------------------------------------------------------------------
# spherical-shell construction
# ---------------------------------------------------------------------------

def _shell_curvature_ceiling(s: float, samples: int = 20001) -> float:
    """max |psi''| on [1/2, 3/2] for psi(r) = r^s - 1, by dense sampling.

    |psi''| = |s(s-1)| r^{s-2} is monotone in r, so the sampled maximum is
    exact at an endpoint; the dense mesh only guards the formula.
    """
    r = np.linspace(0.5, 1.5, samples)
    return float(np.max(np.abs(s * (s - 1.0) * r ** (s - 2.0))))


@dataclass(frozen=True)
class SphericalSpec:
    """Resolved constants of the spherical-shell construction.

    eps0: plateau half-width of the radial profile around r = 1;
    lam: tangency half-width parameter, the smallest value with
         2 arctan(s lam) >= 100 (pi - 2 arctan(s lam));
    mu: shell scale with lam mu <= 1/100; the measurement shell at
         concentration delta is mu/(4 delta) <= |x| <= mu/(2 delta).
    """

    d: int
    s: float
    eps0: float
    curvature: float
    lam: float
    mu: float

    @property
    def delta_max(self) -> float:
        """Ceiling for admissible measurement scales: delta <= eps0/(2 lam)."""
        return self.eps0 / (2.0 * self.lam)

    def shell(self, delta: float) -> tuple[float, float]:
        return self.mu / (4.0 * delta), self.mu / (2.0 * delta)

    def profile_hat(self) -> RadialProfile:
        return spherical_profile_hat(self)

    def to_json(self) -> str:
        return json.dumps(
            {
                "kind": "spherical",
                "d": self.d,
                "s": self.s,
                "eps0": self.eps0,
                "curvature": self.curvature,
                "lam": self.lam,
                "mu": self.mu,
            },
            sort_keys=True,
        )


def spherical_constants(d: int, s: float) -> SphericalSpec:
    """Resolve eps0, lam, mu for the shell construction in dimension d.

    lam is taken at the defining threshold (the smallest admissible value),
    which keeps the measurement shell as large as possible for a given
    delta; mu is then pinned by lam mu = 1/100.
    """
    if d < 2:
        raise ValueError("shell construction needs d >= 2")
    if s <= 0:
        raise ValueError("order s must be positive")
    m = _shell_curvature_ceiling(s)
    eps0 = 0.25 if m == 0.0 else min(s / (2.0 * m), 0.25)
    lam = math.tan(50.0 * math.pi / 101.0) / s
    mu = 1e-2 / lam
    return SphericalSpec(d=d, s=s, eps0=eps0, curvature=m, lam=lam, mu=mu)


def spherical_profile_hat(spec: SphericalSpec) -> RadialProfile:
    """Radial frequency profile phi(r) = r^{s - 1 - (d-1)/2} P(r).

    P is a smooth plateau equal to 1 on |r - 1| <= eps0 and supported in
    |r - 1| < 2 eps0, so phi(r) r^{(d-1)/2 - s + 1} is exactly 1 on the
    plateau and stays within [0, 2] everywhere the support allows.
    """
    e = spec.eps0
    plateau = _plateau_on(1.0, e, 2.0 * e)
    expo = spec.s - 1.0 - 0.5 * (spec.d - 1)

    def f(r: np.ndarray) -> np.ndarray:
        rr = np.asarray(r, dtype=float)
        return np.where(np.abs(rr - 1.0) < 2.0 * e, rr ** expo * plateau(rr), 0.0)

    return RadialProfile((1.0 - 2.0 * e, 1.0 + 2.0 * e), f)


def measurement_annuli(spec: SphericalSpec, delta: float) -> list[tuple[float, float]]:
    """Radial intervals around |x| = pi (2n + (d-1)/4), width 1/50, inside the shell.

    Returns every nonempty intersection with mu/(4 delta) <= |x| <= mu/(2 delta);
    raises when the shell contains no interval at all (delta too large for mu,
    i.e. the shell sits below the first admissible radius).
    """
    if delta > spec.delta_max:
        raise ValueError(
            f"delta={delta} exceeds the admissible ceiling {spec.delta_max:.3e}"
        )
    lo, hi = spec.shell(delta)
    out: list[tuple[float, float]] = []
    offset = 0.25 * math.pi * (spec.d - 1)
    n_min = max(1, math.floor((lo - 0.01 - offset) / (2.0 * math.pi)))
    n = n_min
    while True:
        center = 2.0 * math.pi * n + offset
        if center - 0.01 > hi:
            break
        a, b = max(center - 0.01, lo), min(center + 0.01, hi)
        if a < b:
            out.append((a, b))
        n += 1
    if not out:
        raise ValueError(
            f"measurement shell [{lo:.3f}, {hi:.3f}] contains no annulus; "
            "decrease delta"
        )
    return out
