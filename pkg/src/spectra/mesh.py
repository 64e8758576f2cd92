"""Deterministic triangulation of star-shaped domains with an internal obstacle.

One Delaunay triangulation is built over a fully deterministic point set: the
two boundary polylines first, then graded offset rings where the boundary
sampling is finer than the interior pitch, then hex-lattice seeds. A blanking
band around each polyline keeps every boundary chord a Gabriel edge, which
guarantees the chord appears in the Delaunay triangulation, so the boundary
never needs edge recovery. Triangles are then classified by the polygonal
radius of each cycle and kept per mode: `annular` drops the obstacle interior,
`full` keeps it with region markers.

Refinement is nested uniform 4-splitting; midpoints of boundary edges are
snapped back onto the analytic curve at the bisected parameter angle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.spatial import Delaunay

from .geometry import (
    TWO_PI,
    Configuration,
    boundary_normals,
    boundary_positions,
)

INTERIOR = 0
OUTER_BOUNDARY = 1
OBSTACLE_BOUNDARY = 2

ANNULUS = 0
OBSTACLE = 1

ANNULAR = "annular"
FULL = "full"


class MeshError(RuntimeError):
    """Triangulation failed an internal consistency requirement."""


@dataclass(frozen=True)
class MeshParams:
    """Resolution knobs for the triangulator.

    target_h is the interior lattice pitch (max element diameter before
    refinement). Boundary sample counts default to the same count for both
    cycles, max(256, ceil(2*pi*r_max/target_h)) rounded up to a multiple of 8
    so decimated offset rings stay mirror symmetric. refinement_levels nested
    uniform subdivisions follow, with boundary midpoints snapped to the curve.
    """

    target_h: float
    boundary_samples_outer: int | None = None
    boundary_samples_inner: int | None = None
    refinement_levels: int = 0
    smoothing_passes: int = 3

    def __post_init__(self):
        if not self.target_h > 0.0:
            raise ValueError("target_h must be positive")
        if self.refinement_levels < 0 or self.smoothing_passes < 0:
            raise ValueError("refinement_levels and smoothing_passes must be >= 0")

    @property
    def effective_h(self) -> float:
        return self.target_h / 2.0 ** self.refinement_levels

    def coarsened(self) -> "MeshParams":
        if self.refinement_levels == 0:
            raise ValueError("already at refinement level 0")
        return replace(self, refinement_levels=self.refinement_levels - 1)

    def refined(self) -> "MeshParams":
        return replace(self, refinement_levels=self.refinement_levels + 1)


@dataclass
class PlanarMesh:
    """Triangulation with boundary markers and exact boundary parameter angles.

    Vertices 0..len(outer_cycle)-1 are the outer polyline, the next block is
    the obstacle polyline (base mesh); refinement appends vertices. Cycle
    arrays are ordered by increasing theta; `*_thetas` hold the exact analytic
    parameter angle of each cycle vertex. The analytic profile evaluators ride
    along for snapping and for exact boundary integrands.
    """

    mode: str
    vertices: np.ndarray
    triangles: np.ndarray
    tri_regions: np.ndarray
    edges: np.ndarray
    edge_markers: np.ndarray
    outer_cycle: np.ndarray
    outer_thetas: np.ndarray
    obstacle_cycle: np.ndarray
    obstacle_thetas: np.ndarray
    outer_profile: object
    obstacle_profile: object
    params: MeshParams

    def triangle_areas(self) -> np.ndarray:
        v, t = self.vertices, self.triangles
        d1 = v[t[:, 1]] - v[t[:, 0]]
        d2 = v[t[:, 2]] - v[t[:, 0]]
        return 0.5 * (d1[:, 0] * d2[:, 1] - d1[:, 1] * d2[:, 0])

    def area(self) -> float:
        return float(self.triangle_areas().sum())

    def region_area(self, region: int) -> float:
        return float(self.triangle_areas()[self.tri_regions == region].sum())

    def min_angle_degrees(self) -> float:
        v, t = self.vertices, self.triangles
        worst = 180.0
        for i in range(3):
            a = v[t[:, (i + 1) % 3]] - v[t[:, i]]
            b = v[t[:, (i + 2) % 3]] - v[t[:, i]]
            cosang = (a * b).sum(axis=1) / (
                np.linalg.norm(a, axis=1) * np.linalg.norm(b, axis=1)
            )
            ang = np.degrees(np.arccos(np.clip(cosang, -1.0, 1.0)))
            worst = min(worst, float(ang.min()))
        return worst

    def euler_characteristic(self) -> int:
        return len(self.vertices) - len(self.edges) + len(self.triangles)

    @property
    def effective_h(self) -> float:
        return self.params.effective_h

    def export_text(self) -> str:
        lines = ["$Vertices"]
        lines += [f"{i} {x:.17g} {y:.17g}" for i, (x, y) in enumerate(self.vertices)]
        lines.append("$Triangles")
        lines += [
            f"{i} {a} {b} {c} {r}"
            for i, ((a, b, c), r) in enumerate(zip(self.triangles, self.tri_regions))
        ]
        lines.append("$Edges")
        lines += [
            f"{i} {a} {b} {m}"
            for i, ((a, b), m) in enumerate(zip(self.edges, self.edge_markers))
        ]
        return "\n".join(lines) + "\n"


def default_boundary_samples(profile, target_h: float) -> int:
    r_max = float(np.max(profile.radius(np.linspace(0.0, TWO_PI, 4096, endpoint=False))))
    m = max(256, math.ceil(TWO_PI * r_max / target_h))
    return 8 * math.ceil(m / 8)


def discretize_boundary(profile, m: int) -> tuple[np.ndarray, np.ndarray]:
    """Closed polyline at theta_j = 2*pi*j/m with vertices exactly on the curve.

    Star-shapedness makes the polyline simple for any m >= 3; the 16-per-sector
    minimum is enforced where meshes are built, not here.
    """
    if m < 3:
        raise ValueError(f"a closed polyline needs at least 3 samples, got {m}")
    thetas = TWO_PI * np.arange(m) / m
    return boundary_positions(profile, thetas), thetas


def _ring_levels(spacing: np.ndarray, pitch: float) -> np.ndarray:
    """Graded ring levels needed at each boundary sample: double the local
    spacing per level until it reaches the interior pitch."""
    levels = np.zeros(len(spacing), dtype=np.int64)
    s = np.asarray(spacing, dtype=float).copy()
    while True:
        need = 2.0 * s < 1.3 * pitch
        if not need.any():
            return levels
        levels[need] += 1
        s[need] *= 2.0


def _ring_offset(levels, spacing):
    # cumulative offset of the outermost ring: 1.125 * (s + 2s + ... )
    return 1.125 * (2.0 ** levels - 1.0) * spacing


class _GradedBand:
    """Per-angle blanking/smoothing distances around one boundary cycle, all
    proportional to the local boundary segment length."""

    def __init__(self, profile, m: int, pitch: float):
        self.profile = profile
        self.m = m
        self.pitch = pitch

    def spacing(self, thetas):
        h = self.profile.radius(thetas)
        hp = self.profile.radius_deriv(thetas)
        return np.hypot(h, hp) * (TWO_PI / self.m)

    def exclusion(self, thetas):
        s = self.spacing(thetas)
        lv = _ring_levels(s, self.pitch)
        return _ring_offset(lv, s) + 0.425 * (2.0 ** lv * s + self.pitch)

    def smooth_band(self, thetas):
        s = self.spacing(thetas)
        lv = _ring_levels(s, self.pitch)
        band = _ring_offset(lv, s) + 0.55 * np.minimum(2.0 ** lv * s, self.pitch)
        return np.where(lv > 0, band, 0.75 * s)


def _hex_lattice(bound: float, pitch: float) -> np.ndarray:
    dy = pitch * math.sqrt(3.0) / 2.0
    ny = int(math.ceil(bound / dy))
    nx = int(math.ceil(bound / pitch)) + 1
    rows = []
    for j in range(-ny, ny + 1):
        xs = (np.arange(-nx, nx + 1) + (0.5 if j % 2 else 0.0)) * pitch
        ys = np.full_like(xs, j * dy)
        rows.append(np.column_stack([xs, ys]))
    return np.vstack(rows)


def _signed_clearances(points, outer, obstacle):
    """Approximate distances to the two curves along the radial direction,
    positive inside the outer curve / outside the obstacle."""
    th = np.arctan2(points[:, 1], points[:, 0])
    r = np.hypot(points[:, 0], points[:, 1])
    g = outer.radius(th)
    gp = outer.radius_deriv(th)
    h = obstacle.radius(th)
    hp = obstacle.radius_deriv(th)
    d_out = (g - r) * g / np.hypot(g, gp)
    d_in = (r - h) * h / np.hypot(h, hp)
    return d_out, d_in


def _radial_gap(points, outer, obstacle):
    th = np.arctan2(points[:, 1], points[:, 0])
    return outer.radius(th) - obstacle.radius(th)


def _emit_rings(profile, thetas, band: "_GradedBand", side: int, clip_fn):
    """Ring level k keeps every 2^k-th boundary angle, offset along the normal
    by the cumulated local grading distance, only where that level is needed.
    Yields (points, level) blocks."""
    m = len(thetas)
    spacing_all = band.spacing(thetas)
    levels_all = _ring_levels(spacing_all, band.pitch)
    blocks = []
    k = 1
    while np.any(levels_all >= k):
        idx = np.arange(0, m, 2 ** k)
        sel = idx[levels_all[idx] >= k]
        if len(sel):
            th = thetas[sel]
            s = spacing_all[sel]
            dist = 1.125 * (2.0 ** k - 1.0) * s
            p = boundary_positions(profile, th) + side * dist[:, None] * boundary_normals(profile, th)
            keep = clip_fn(p, dist)
            if keep.any():
                blocks.append((p[keep], k))
        k += 1
    return blocks


def _build_seeds(outer, obstacle, m_out, m_in, pitch, mode):
    """Graded rings plus blanked hex lattice.

    Returns (ring points, ring metadata (cycle, side, level) per point,
    hex points, band calculators). Ring metadata drives the per-point
    smoothing corridors.
    """
    out_th = TWO_PI * np.arange(m_out) / m_out
    in_th = TWO_PI * np.arange(m_in) / m_in
    band_out = _GradedBand(outer, m_out, pitch)
    band_in = _GradedBand(obstacle, m_in, pitch)

    def clip_annulus(p, dist):
        return dist <= 0.35 * _radial_gap(p, outer, obstacle)

    def clip_obstacle_interior(p, dist):
        return dist <= 0.35 * obstacle.radius(np.arctan2(p[:, 1], p[:, 0]))

    tagged = [(blk, 0, -1) for blk in _emit_rings(outer, out_th, band_out, -1, clip_annulus)]
    tagged += [(blk, 1, +1) for blk in _emit_rings(obstacle, in_th, band_in, +1, clip_annulus)]
    if mode == FULL:
        tagged += [
            (blk, 1, -1)
            for blk in _emit_rings(obstacle, in_th, band_in, -1, clip_obstacle_interior)
        ]
    if tagged:
        rings = np.vstack([pts for (pts, _), _, _ in tagged])
        meta = np.vstack(
            [
                np.column_stack(
                    [
                        np.full(len(pts), cyc, dtype=np.int64),
                        np.full(len(pts), side, dtype=np.int64),
                        np.full(len(pts), lv, dtype=np.int64),
                    ]
                )
                for (pts, lv), cyc, side in tagged
            ]
        )
    else:
        rings = np.empty((0, 2))
        meta = np.empty((0, 3), dtype=np.int64)

    r_bound = float(np.max(outer.radius(np.linspace(0.0, TWO_PI, 4096, endpoint=False))))
    hexa = _hex_lattice(r_bound + pitch, pitch)
    th = np.arctan2(hexa[:, 1], hexa[:, 0])
    d_out, d_in = _signed_clearances(hexa, outer, obstacle)
    keep = (d_out >= band_out.exclusion(th)) & (d_in >= band_in.exclusion(th))
    if mode == FULL:
        keep |= (-d_in >= band_in.exclusion(th)) & (d_out >= band_out.exclusion(th))
    return rings, meta, hexa[keep], band_out, band_in


def _smooth_seeds(points, n_fixed, passes, project_fn):
    """Fixed number of neighbor-averaging passes on the seed points; moves
    that land inside a blanking band are projected back onto the band wall so
    the tangential part of the motion survives."""
    pts = points.copy()
    for _ in range(passes):
        tri = Delaunay(pts)
        s = tri.simplices
        pairs = np.vstack([s[:, [0, 1]], s[:, [1, 2]], s[:, [2, 0]]])
        pairs = np.vstack([pairs, pairs[:, ::-1]])
        sums = np.zeros_like(pts)
        np.add.at(sums, pairs[:, 0], pts[pairs[:, 1]])
        counts = np.bincount(pairs[:, 0], minlength=len(pts)).astype(float)
        centroids = sums[n_fixed:] / counts[n_fixed:, None]
        pts[n_fixed:] = project_fn(centroids)
    return pts


def _polyline_radius(radii: np.ndarray, theta_query: np.ndarray) -> np.ndarray:
    """Radius of the chord polygon through (r_j, 2*pi*j/m) at the query angles."""
    m = len(radii)
    th = np.mod(theta_query, TWO_PI)
    j = np.minimum((th * m / TWO_PI).astype(int), m - 1)
    th_a = TWO_PI * j / m
    th_b = TWO_PI * (j + 1) / m
    ra, rb = radii[j], radii[(j + 1) % m]
    ax, ay = ra * np.cos(th_a), ra * np.sin(th_a)
    bx, by = rb * np.cos(th_b), rb * np.sin(th_b)
    dx, dy = np.cos(th), np.sin(th)
    denom = dx * (by - ay) - dy * (bx - ax)
    return (ax * by - ay * bx) / denom


def _canonical_triangles(vertices, triangles):
    """CCW orientation, smallest vertex first, rows lexicographically sorted."""
    t = triangles.copy()
    d1 = vertices[t[:, 1]] - vertices[t[:, 0]]
    d2 = vertices[t[:, 2]] - vertices[t[:, 0]]
    flip = d1[:, 0] * d2[:, 1] - d1[:, 1] * d2[:, 0] < 0.0
    t[flip] = t[flip][:, [0, 2, 1]]
    shift = np.argmin(t, axis=1)
    rolled = np.empty_like(t)
    for s in range(3):
        sel = shift == s
        rolled[sel] = np.roll(t[sel], -s, axis=1)
    order = np.lexsort((rolled[:, 2], rolled[:, 1], rolled[:, 0]))
    return rolled[order], order


def _edge_keys(pairs: np.ndarray, n_vertices: int) -> np.ndarray:
    lo = np.minimum(pairs[:, 0], pairs[:, 1]).astype(np.int64)
    hi = np.maximum(pairs[:, 0], pairs[:, 1]).astype(np.int64)
    return lo * n_vertices + hi


def _cycle_edge_keys(cycle: np.ndarray, n_vertices: int) -> np.ndarray:
    pairs = np.column_stack([cycle, np.roll(cycle, -1)])
    return _edge_keys(pairs, n_vertices)


def _extract_edges(triangles, n_vertices, outer_cycle, obstacle_cycle):
    pairs = np.vstack([triangles[:, [0, 1]], triangles[:, [1, 2]], triangles[:, [2, 0]]])
    keys = np.unique(_edge_keys(pairs, n_vertices))
    edges = np.column_stack([keys // n_vertices, keys % n_vertices]).astype(np.int32)
    markers = np.zeros(len(edges), dtype=np.uint8)
    for cyc, mark in ((outer_cycle, OUTER_BOUNDARY), (obstacle_cycle, OBSTACLE_BOUNDARY)):
        ck = np.sort(_cycle_edge_keys(cyc, n_vertices))
        pos = np.searchsorted(keys, ck)
        missing = (pos >= len(keys)) | (keys[np.minimum(pos, len(keys) - 1)] != ck)
        if np.any(missing):
            raise MeshError(
                f"{int(missing.sum())} boundary segments missing from the triangulation"
            )
        markers[pos] = mark
    return edges, markers


def triangulate(config: Configuration, params: MeshParams, mode: str = ANNULAR) -> PlanarMesh:
    """Constrained-by-construction Delaunay mesh of the rotated configuration.

    `annular` keeps only triangles between the obstacle and the outer
    boundary; `full` keeps the obstacle interior too, marked OBSTACLE. The
    requested refinement levels are applied before returning.
    """
    if mode not in (ANNULAR, FULL):
        raise ValueError(f"unknown mesh mode {mode!r}")
    outer = config.pair.outer
    obstacle = config.obstacle

    m_default = default_boundary_samples(outer, params.target_h)
    m_out = params.boundary_samples_outer or m_default
    m_in = params.boundary_samples_inner or m_default
    n = config.pair.order
    if min(m_out, m_in) < 16 * n:
        raise ValueError(f"boundary sampling below 16 per symmetry sector (16n = {16 * n})")

    out_pts, out_th = discretize_boundary(outer, m_out)
    in_pts, in_th = discretize_boundary(obstacle, m_in)
    rings, ring_meta, hexes, band_out, band_in = _build_seeds(
        outer, obstacle, m_out, m_in, params.target_h, mode
    )

    # level-1 rings pair one-to-one with boundary samples and stay fixed;
    # deeper rings may relax tangentially inside their grading corridor
    first_level = ring_meta[:, 2] == 1
    fixed_rings, free_rings = rings[first_level], rings[~first_level]
    ring_meta = ring_meta[~first_level]

    points = np.vstack([out_pts, in_pts, fixed_rings, free_rings, hexes])
    n_fixed = m_out + m_in + len(fixed_rings)
    n_ring = len(free_rings)

    def project_seeds(p):
        """Clamp smoothing proposals: hex seeds stay outside the boundary
        bands, ring seeds stay in a radial corridor around their nominal
        grading offset (they may slide tangentially)."""
        th = np.arctan2(p[:, 1], p[:, 0])
        r = np.hypot(p[:, 0], p[:, 1])
        gv, gp = outer.radius(th), outer.radius_deriv(th)
        hv, hp = obstacle.radius(th), obstacle.radius_deriv(th)
        cos_g = gv / np.hypot(gv, gp)
        cos_h = hv / np.hypot(hv, hp)

        r_new = r.copy()
        rt, rr = th[:n_ring], r[:n_ring]
        cyc, side, lv = ring_meta[:, 0], ring_meta[:, 1], ring_meta[:, 2]
        nominal = np.where(
            cyc == 0, band_out.spacing(rt), band_in.spacing(rt)
        ) * (1.125 * (2.0 ** lv - 1.0))
        # clearance measured into the domain from the ring's own cycle
        clear = np.where(
            cyc == 0,
            (gv[:n_ring] - rr) * cos_g[:n_ring],
            side * (rr - hv[:n_ring]) * cos_h[:n_ring],
        )
        clamped = np.clip(clear, 0.75 * nominal, 1.35 * nominal)
        delta = (clamped - clear) / np.where(cyc == 0, cos_g[:n_ring], cos_h[:n_ring])
        r_new[:n_ring] = rr + np.where(cyc == 0, -delta, side * delta)

        hx = slice(n_ring, None)
        r_out_max = gv[hx] - band_out.smooth_band(th[hx]) / cos_g[hx]
        r_in_min = hv[hx] + band_in.smooth_band(th[hx]) / cos_h[hx]
        rh = np.minimum(r[hx], r_out_max)
        if mode == FULL:
            # hex seeds keep their side of the obstacle interface
            r_in_max = hv[hx] - band_in.smooth_band(th[hx]) / cos_h[hx]
            inside = r[hx] < hv[hx]
            rh = np.where(inside, np.minimum(rh, r_in_max), np.maximum(rh, r_in_min))
        else:
            rh = np.maximum(rh, r_in_min)
        r_new[hx] = rh
        return np.column_stack([r_new * np.cos(th), r_new * np.sin(th)])

    if params.smoothing_passes and (len(hexes) or n_ring):
        points = _smooth_seeds(points, n_fixed, params.smoothing_passes, project_seeds)

    tri = Delaunay(points)
    triangles, _ = _canonical_triangles(points, tri.simplices.astype(np.int32))

    centroids = points[triangles].mean(axis=1)
    th_c = np.mod(np.arctan2(centroids[:, 1], centroids[:, 0]), TWO_PI)
    r_c = np.hypot(centroids[:, 0], centroids[:, 1])
    r_outer_poly = _polyline_radius(outer.radius(out_th), th_c)
    r_inner_poly = _polyline_radius(obstacle.radius(in_th), th_c)
    inside_outer = r_c < r_outer_poly
    inside_inner = r_c < r_inner_poly

    if mode == ANNULAR:
        keep = inside_outer & ~inside_inner
        regions = np.full(int(keep.sum()), ANNULUS, dtype=np.uint8)
    else:
        keep = inside_outer
        regions = np.where(inside_inner[keep], OBSTACLE, ANNULUS).astype(np.uint8)
    triangles = triangles[keep]

    used = np.zeros(len(points), dtype=bool)
    used[triangles.ravel()] = True
    if not used.all():
        raise MeshError(f"{int((~used).sum())} seed points ended up outside the domain")

    outer_cycle = np.arange(m_out, dtype=np.int32)
    obstacle_cycle = np.arange(m_out, m_out + m_in, dtype=np.int32)
    edges, markers = _extract_edges(triangles, len(points), outer_cycle, obstacle_cycle)

    mesh = PlanarMesh(
        mode=mode,
        vertices=points,
        triangles=triangles,
        tri_regions=regions,
        edges=edges,
        edge_markers=markers,
        outer_cycle=outer_cycle,
        outer_thetas=out_th,
        obstacle_cycle=obstacle_cycle,
        obstacle_thetas=in_th,
        outer_profile=outer,
        obstacle_profile=obstacle,
        params=params,
    )
    _check_positive_areas(mesh)
    for _ in range(params.refinement_levels):
        mesh = refine(mesh)
    return mesh


def _check_positive_areas(mesh: PlanarMesh) -> None:
    areas = mesh.triangle_areas()
    if len(areas) == 0:
        raise MeshError("empty triangulation")
    worst = float(areas.min())
    if worst <= 0.0 or worst < 1e-14 * float(areas.max()):
        raise MeshError(f"degenerate triangle, smallest signed area {worst:g}")


def refine(mesh: PlanarMesh) -> PlanarMesh:
    """One nested uniform 4-split; new boundary vertices are placed on the
    analytic curve at the bisected parameter angle."""
    v0 = len(mesh.vertices)
    t = mesh.triangles
    pairs = np.vstack([t[:, [0, 1]], t[:, [1, 2]], t[:, [2, 0]]])
    keys = _edge_keys(pairs, v0)
    uniq, inverse = np.unique(keys, return_inverse=True)
    ea = (uniq // v0).astype(np.int64)
    eb = (uniq % v0).astype(np.int64)
    mid = 0.5 * (mesh.vertices[ea] + mesh.vertices[eb])

    # boundary-edge midpoints: look up the marker, bisect theta modulo wrap,
    # snap onto the analytic curve
    mesh_edge_keys = _edge_keys(mesh.edges, v0)
    order = np.argsort(mesh_edge_keys)
    pos = np.searchsorted(mesh_edge_keys[order], uniq)
    marker_of = mesh.edge_markers[order][pos]

    theta_of = np.full(v0, np.nan)
    theta_of[mesh.outer_cycle] = mesh.outer_thetas
    theta_of[mesh.obstacle_cycle] = mesh.obstacle_thetas

    mid_theta = np.full(len(uniq), np.nan)
    for mark, profile in (
        (OUTER_BOUNDARY, mesh.outer_profile),
        (OBSTACLE_BOUNDARY, mesh.obstacle_profile),
    ):
        sel = marker_of == mark
        if not np.any(sel):
            continue
        ta, tb = theta_of[ea[sel]], theta_of[eb[sel]]
        delta = np.mod(tb - ta + math.pi, TWO_PI) - math.pi
        tm = np.mod(ta + 0.5 * delta, TWO_PI)
        mid_theta[sel] = tm
        mid[sel] = boundary_positions(profile, tm)

    vertices = np.vstack([mesh.vertices, mid])
    mid_idx = v0 + np.arange(len(uniq), dtype=np.int64)
    e01 = mid_idx[inverse[: len(t)]]
    e12 = mid_idx[inverse[len(t): 2 * len(t)]]
    e20 = mid_idx[inverse[2 * len(t):]]
    children = np.vstack(
        [
            np.column_stack([t[:, 0], e01, e20]),
            np.column_stack([e01, t[:, 1], e12]),
            np.column_stack([e20, e12, t[:, 2]]),
            np.column_stack([e01, e12, e20]),
        ]
    ).astype(np.int32)
    regions = np.concatenate([mesh.tri_regions] * 4)

    triangles, order = _canonical_triangles(vertices, children)
    regions = regions[order]

    def extended_cycle(cycle, thetas, mark):
        sel = marker_of == mark
        idx = np.concatenate([cycle, mid_idx[sel]])
        th = np.concatenate([thetas, mid_theta[sel]])
        srt = np.argsort(th)
        return idx[srt].astype(np.int32), th[srt]

    outer_cycle, outer_thetas = extended_cycle(
        mesh.outer_cycle, mesh.outer_thetas, OUTER_BOUNDARY
    )
    obstacle_cycle, obstacle_thetas = extended_cycle(
        mesh.obstacle_cycle, mesh.obstacle_thetas, OBSTACLE_BOUNDARY
    )

    edges, markers = _extract_edges(triangles, len(vertices), outer_cycle, obstacle_cycle)
    out = PlanarMesh(
        mode=mesh.mode,
        vertices=vertices,
        triangles=triangles,
        tri_regions=regions,
        edges=edges,
        edge_markers=markers,
        outer_cycle=outer_cycle,
        outer_thetas=outer_thetas,
        obstacle_cycle=obstacle_cycle,
        obstacle_thetas=obstacle_thetas,
        outer_profile=mesh.outer_profile,
        obstacle_profile=mesh.obstacle_profile,
        params=mesh.params,
    )
    _check_positive_areas(out)
    return out
