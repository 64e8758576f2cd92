"""Reference eigenvalues for circular membranes, independent of the FEM stack.

Bessel J0/Y0 are evaluated from scratch: ascending power series below the
split point, Hankel large-argument asymptotics above it. Roots come from
bracketing plus bisection. None of this touches the mesh or solver code, so
it can serve as an oracle for them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

EULER_GAMMA = 0.5772156649015328606065121
_SERIES_SPLIT = 14.0
_TERM_FLOOR = 1e-18


def _j0_y0_small(x: float) -> tuple[float, float]:
    # J0 = sum (-t)^k/(k!)^2 with t = x^2/4; Y0 pairs each term with the
    # harmonic number H_k (ascending series, log term pulled out front).
    t = 0.25 * x * x
    term = 1.0
    j0 = 1.0
    ysum = 0.0
    harmonic = 0.0
    for k in range(1, 200):
        term *= -t / (k * k)
        harmonic += 1.0 / k
        j0 += term
        ysum -= term * harmonic
        if abs(term) < _TERM_FLOOR * (abs(j0) + 1.0):
            break
    y0 = (2.0 / math.pi) * ((math.log(0.5 * x) + EULER_GAMMA) * j0 + ysum)
    return j0, y0


def _j0_y0_large(x: float) -> tuple[float, float]:
    # Hankel expansion: P + iQ = sum_m a_m (i/x)^m with a_0 = 1 and
    # a_m = a_{m-1} * (-(2m-1)^2) / (8m), truncated at the smallest term.
    a = 1.0
    pr, pi = 1.0, 0.0  # (i/x)^m, starting at m = 0
    sum_p, sum_q = 1.0, 0.0
    prev_mag = 1.0
    for m in range(1, 80):
        a *= -((2.0 * m - 1.0) ** 2) / (8.0 * m)
        pr, pi = -pi / x, pr / x
        term_r, term_i = a * pr, a * pi
        mag = math.hypot(term_r, term_i)
        if mag >= prev_mag or mag < _TERM_FLOOR:
            if mag < _TERM_FLOOR:
                sum_p += term_r
                sum_q += term_i
            break
        sum_p += term_r
        sum_q += term_i
        prev_mag = mag
    omega = x - 0.25 * math.pi
    pref = math.sqrt(2.0 / (math.pi * x))
    c, s = math.cos(omega), math.sin(omega)
    j0 = pref * (sum_p * c - sum_q * s)
    y0 = pref * (sum_p * s + sum_q * c)
    return j0, y0


def bessel_j0(x: float) -> float:
    x = abs(float(x))
    return _j0_y0_small(x)[0] if x <= _SERIES_SPLIT else _j0_y0_large(x)[0]


def bessel_y0(x: float) -> float:
    x = float(x)
    if x <= 0.0:
        raise ValueError("Y0 requires a positive argument")
    return _j0_y0_small(x)[1] if x <= _SERIES_SPLIT else _j0_y0_large(x)[1]


def _bisect(fn, lo: float, hi: float, rel: float = 1e-14) -> float:
    flo = fn(lo)
    if flo == 0.0:
        return lo
    for _ in range(400):
        mid = 0.5 * (lo + hi)
        if hi - lo <= rel * mid:
            return mid
        fmid = fn(mid)
        if fmid == 0.0:
            return mid
        if (flo > 0.0) != (fmid > 0.0):
            hi = mid
        else:
            lo, flo = mid, fmid
    return 0.5 * (lo + hi)


@lru_cache(maxsize=1)
def first_j0_zero() -> float:
    """Smallest positive root of J0 (about 2.4048)."""
    return _bisect(bessel_j0, 2.0, 3.0)


def disk_lambda1(radius: float) -> float:
    """Fundamental Dirichlet eigenvalue of a disk: (j01 / R)^2."""
    if radius <= 0.0:
        raise ValueError("disk radius must be positive")
    return (first_j0_zero() / radius) ** 2


@dataclass(frozen=True)
class AnnulusReference:
    inner_radius: float
    outer_radius: float
    k1: float
    lambda1: float


def oracle_annulus(inner_radius: float, outer_radius: float) -> AnnulusReference:
    """Fundamental Dirichlet eigenvalue of the concentric annulus r < |x| < R.

    lambda_1 = k1^2 where k1 is the smallest positive root of the cross
    product J0(k r) Y0(k R) - J0(k R) Y0(k r). The root is bracketed by a
    scan on a scale below the root spacing pi/(R - r), then bisected to
    ~1e-12 relative width.
    """
    r, big_r = float(inner_radius), float(outer_radius)
    if not 0.0 < r < big_r:
        raise ValueError("need 0 < inner_radius < outer_radius")

    def cross(k: float) -> float:
        return bessel_j0(k * r) * bessel_y0(k * big_r) - bessel_j0(k * big_r) * bessel_y0(k * r)

    step = math.pi / (big_r - r) / 16.0
    k_prev = step * 1e-6  # cross > 0 near k = 0 (log-divergent Y0 term)
    f_prev = cross(k_prev)
    k1 = None
    for j in range(1, 100000):
        k = j * step
        f = cross(k)
        if f == 0.0:
            k1 = k
            break
        if (f_prev > 0.0) != (f > 0.0):
            k1 = _bisect(cross, k_prev, k, rel=1e-13)
            break
        k_prev, f_prev = k, f
    if k1 is None:
        raise RuntimeError("failed to bracket the first annulus eigenvalue")
    return AnnulusReference(r, big_r, k1, k1 * k1)
