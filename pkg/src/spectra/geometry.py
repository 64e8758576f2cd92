"""Analytic geometry of dihedral-symmetric star domains and rotating obstacles.

Every boundary is a positive polar radius given by a truncated cosine series
in multiples of n*theta, so evenness and 2*pi/n periodicity hold by
construction and derivatives are exact. Nothing here depends on a mesh; this
module is the exact reference the discrete layers are checked against.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

TWO_PI = 2.0 * math.pi

# Series length cap keeps the fixed validation grids alias-free.
MAX_COSINE_TERMS = 32
POSITIVITY_SAMPLES_PER_ORDER = 1024
MONOTONICITY_SAMPLES = 512
SIGN_TOLERANCE = 1e-12


def _as_float_tuple(values) -> tuple[float, ...]:
    out = tuple(float(v) for v in values)
    if not all(math.isfinite(v) for v in out):
        raise ValueError("profile series coefficients must be finite")
    return out


@dataclass(frozen=True)
class RadialProfile:
    """Polar radius r(theta) = c0 + sum_{k>=1} c_k * cos(k*n*theta)."""

    order: int
    series: tuple[float, ...]

    def __post_init__(self):
        if not isinstance(self.order, int) or isinstance(self.order, bool) or self.order < 2:
            raise ValueError(f"dihedral order must be an integer >= 2, got {self.order!r}")
        series = _as_float_tuple(self.series)
        if not 1 <= len(series) <= MAX_COSINE_TERMS + 1:
            raise ValueError(f"series must have 1..{MAX_COSINE_TERMS + 1} coefficients")
        object.__setattr__(self, "series", series)

    def _harmonics(self) -> np.ndarray:
        return self.order * np.arange(1, len(self.series))

    def radius(self, theta):
        th = np.asarray(theta, dtype=float)
        coeffs = np.asarray(self.series[1:])
        val = self.series[0] + np.cos(th[..., None] * self._harmonics()) @ coeffs
        return float(val) if th.ndim == 0 else val

    def radius_deriv(self, theta):
        th = np.asarray(theta, dtype=float)
        k = self._harmonics()
        coeffs = np.asarray(self.series[1:])
        val = -np.sin(th[..., None] * k) @ (k * coeffs)
        return float(val) if th.ndim == 0 else val

    @property
    def is_disk(self) -> bool:
        return all(c == 0.0 for c in self.series[1:])

    def rotated(self, angle: float) -> "RotatedProfile":
        return RotatedProfile(self, float(angle))

    def to_dict(self) -> dict:
        return {"n": self.order, "series": list(self.series)}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: dict) -> "RadialProfile":
        return cls(int(data["n"]), tuple(data["series"]))

    @classmethod
    def from_json(cls, text: str) -> "RadialProfile":
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True)
class RotatedProfile:
    """Evaluator for h(theta) = f(theta - shift); same surface as RadialProfile."""

    base: RadialProfile
    shift: float

    @property
    def order(self) -> int:
        return self.base.order

    @property
    def is_disk(self) -> bool:
        return self.base.is_disk

    def radius(self, theta):
        return self.base.radius(np.asarray(theta, dtype=float) - self.shift) if np.ndim(theta) \
            else self.base.radius(float(theta) - self.shift)

    def radius_deriv(self, theta):
        return self.base.radius_deriv(np.asarray(theta, dtype=float) - self.shift) if np.ndim(theta) \
            else self.base.radius_deriv(float(theta) - self.shift)


@dataclass(frozen=True)
class DomainPair:
    """Outer domain profile g and obstacle profile f, same dihedral order."""

    outer: RadialProfile
    inner: RadialProfile

    def __post_init__(self):
        if self.outer.order != self.inner.order:
            raise ValueError("outer and inner profiles must share the dihedral order")

    @property
    def order(self) -> int:
        return self.outer.order


@dataclass(frozen=True)
class Configuration:
    """A domain pair with the obstacle rotated by `angle` radians."""

    pair: DomainPair
    angle: float

    @property
    def obstacle(self) -> RotatedProfile:
        return self.pair.inner.rotated(self.angle)

    def canonical_angle(self) -> float:
        """Fold the raw angle into [0, pi/n] using evenness and periodicity."""
        period = TWO_PI / self.pair.order
        s = self.angle % period
        return period - s if s > period / 2.0 else s


@dataclass(frozen=True)
class Sector:
    """Open angular sector between the half-axes at alpha and beta."""

    alpha: float
    beta: float

    def __post_init__(self):
        if not self.alpha < self.beta:
            raise ValueError("sector needs alpha < beta")

    @property
    def width(self) -> float:
        return self.beta - self.alpha

    def contains(self, theta) -> np.ndarray | bool:
        rel = (np.asarray(theta, dtype=float) - self.alpha) % TWO_PI
        out = (rel > 0.0) & (rel < self.width)
        return bool(out) if np.ndim(theta) == 0 else out


@dataclass(frozen=True)
class BoundaryPoint:
    """Boundary sample with outward normal and rotation deformation velocity."""

    theta: float
    position: np.ndarray
    normal: np.ndarray
    velocity: np.ndarray
    normal_dot_velocity: float


@dataclass(frozen=True)
class ProfileValidation:
    positive: bool
    nondecreasing: bool
    bad_positivity: tuple[float, ...]
    bad_monotonicity: tuple[float, ...]
    # set when the profile fails monotonicity as given but passes after a
    # phase shift of pi/n (i.e. it was sampled nonincreasing instead)
    phase_shift: float | None

    @property
    def passed(self) -> bool:
        return self.positive and self.nondecreasing


@dataclass(frozen=True)
class FreeRotationCheck:
    ok: bool
    margin: float


@dataclass(frozen=True)
class DomainVertices:
    outer: tuple[float, ...]
    inner: tuple[float, ...]
    is_disk: bool


def eval_radius(profile, theta):
    """Series evaluation of the polar radius at theta."""
    return profile.radius(theta)


def validate_profile(profile: RadialProfile) -> ProfileValidation:
    """Check positivity on a dense grid and monotonicity on (0, pi/n).

    Never raises; failures come back with offending sample angles. A profile
    that is nonincreasing on the sector is reported failed but with the pi/n
    phase shift that would fix it.
    """
    n = profile.order
    grid_pos = np.linspace(0.0, TWO_PI, POSITIVITY_SAMPLES_PER_ORDER * n, endpoint=False)
    r = profile.radius(grid_pos)
    bad_pos = grid_pos[r <= 0.0]

    grid_mono = np.linspace(0.0, math.pi / n, MONOTONICITY_SAMPLES + 2)[1:-1]
    dr = profile.radius_deriv(grid_mono)
    bad_mono = grid_mono[dr < -SIGN_TOLERANCE]

    phase_shift = None
    if len(bad_mono) and not len(bad_pos):
        shifted = RadialProfile(
            n, tuple(c * (-1.0) ** k for k, c in enumerate(profile.series))
        )
        if np.all(shifted.radius_deriv(grid_mono) >= -SIGN_TOLERANCE):
            phase_shift = math.pi / n

    return ProfileValidation(
        positive=not len(bad_pos),
        nondecreasing=not len(bad_mono),
        bad_positivity=tuple(float(x) for x in bad_pos[:8]),
        bad_monotonicity=tuple(float(x) for x in bad_mono[:8]),
        phase_shift=phase_shift,
    )


def check_free_rotation(pair: DomainPair) -> FreeRotationCheck:
    """The obstacle clears the outer boundary at every rotation angle iff
    its largest radius f(pi/n) stays strictly below the outer minimum g(0)."""
    n = pair.order
    margin = pair.outer.radius(0.0) - pair.inner.radius(math.pi / n)
    return FreeRotationCheck(ok=margin > 0.0, margin=float(margin))


def rotated_profile(profile: RadialProfile, angle: float) -> RotatedProfile:
    return profile.rotated(angle)


def boundary_point(profile, theta: float) -> BoundaryPoint:
    """Position, outward unit normal, rotation velocity i*zeta, and their
    inner product -h*h'/sqrt(h^2+h'^2) at one boundary angle."""
    h = profile.radius(theta)
    hp = profile.radius_deriv(theta)
    c, s = math.cos(theta), math.sin(theta)
    norm = math.hypot(h, hp)
    position = np.array([h * c, h * s])
    normal = np.array([h * c + hp * s, h * s - hp * c]) / norm
    velocity = np.array([-h * s, h * c])
    return BoundaryPoint(
        theta=float(theta),
        position=position,
        normal=normal,
        velocity=velocity,
        normal_dot_velocity=-h * hp / norm,
    )


def boundary_positions(profile, thetas: np.ndarray) -> np.ndarray:
    r = profile.radius(thetas)
    return np.column_stack([r * np.cos(thetas), r * np.sin(thetas)])


def boundary_normals(profile, thetas: np.ndarray) -> np.ndarray:
    h = profile.radius(thetas)
    hp = profile.radius_deriv(thetas)
    c, s = np.cos(thetas), np.sin(thetas)
    norm = np.hypot(h, hp)
    return np.column_stack([(h * c + hp * s) / norm, (h * s - hp * c) / norm])


def normal_velocity_product(profile, thetas):
    """Vectorized eta.v = -h*h'/sqrt(h^2 + h'^2)."""
    h = profile.radius(thetas)
    hp = profile.radius_deriv(thetas)
    return -h * hp / np.hypot(h, hp)


def arc_measure(profile, thetas):
    """d(sigma)/d(theta) = sqrt(h^2 + h'^2) for the polar boundary."""
    return np.hypot(profile.radius(thetas), profile.radius_deriv(thetas))


def reflect(point, alpha: float) -> np.ndarray:
    """Mirror across the axis through the origin at angle alpha."""
    p = np.asarray(point, dtype=float)
    c2, s2 = math.cos(2.0 * alpha), math.sin(2.0 * alpha)
    x, y = p[..., 0], p[..., 1]
    return np.stack([c2 * x + s2 * y, s2 * x - c2 * y], axis=-1)


def inclusion_deficit(g: RadialProfile, t: float, theta):
    """F(theta) = g(theta) - g(theta - 2t) on the sector (t, pi/n + t).

    Nonnegative for every valid nondecreasing profile; strictly positive
    somewhere unless g is constant. Raises for angles outside the sector.
    """
    n = g.order
    if not -1e-12 <= t <= math.pi / n + 1e-12:
        raise ValueError(f"rotation angle t={t} outside [0, pi/{n}]")
    th = np.asarray(theta, dtype=float)
    if np.any(th < t - 1e-9) or np.any(th > math.pi / n + t + 1e-9):
        raise ValueError("theta outside the comparison sector (t, pi/n + t)")
    val = g.radius(th) - g.radius(th - 2.0 * t)
    return float(val) if th.ndim == 0 else val


def vertices(profile: RadialProfile) -> DomainVertices:
    """Angles of boundary points at maximal (outer) and minimal (inner)
    distance from the origin, for a valid nondecreasing profile."""
    if profile.is_disk:
        return DomainVertices((), (), True)
    n = profile.order
    outer = tuple(math.pi / n + 2.0 * k * math.pi / n for k in range(n))
    inner = tuple(2.0 * k * math.pi / n for k in range(n))
    return DomainVertices(outer, inner, False)
