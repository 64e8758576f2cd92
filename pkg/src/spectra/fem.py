"""P1 finite element assembly on the triangulations.

Exact closed-form element integrals (linear elements need no quadrature),
symmetric sparse operators, Dirichlet conditions by degree-of-freedom
elimination. In annular mode both boundary cycles carry Dirichlet data; in
full mode only the outer one does and the obstacle cycle is an internal
interface.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import sparse
from scipy.spatial import cKDTree

from .mesh import ANNULAR, FULL, OBSTACLE, MeshError, PlanarMesh


class PointLocationError(RuntimeError):
    """A query point could not be located in any triangle."""


@dataclass
class DirichletSystem:
    """Stiffness K and mass M over all vertices plus the free-dof bookkeeping."""

    K: sparse.csr_matrix
    M: sparse.csr_matrix
    free: np.ndarray
    dirichlet: np.ndarray
    mode: str

    @property
    def n_vertices(self) -> int:
        return self.K.shape[0]


@dataclass
class PotentialTerm:
    """Coupling alpha and the mass matrix restricted to the obstacle region."""

    alpha: float
    mass: sparse.csr_matrix
    region_area: float


def _element_geometry(mesh: PlanarMesh):
    v, t = mesh.vertices, mesh.triangles
    p0, p1, p2 = v[t[:, 0]], v[t[:, 1]], v[t[:, 2]]
    det = (p1[:, 0] - p0[:, 0]) * (p2[:, 1] - p0[:, 1]) - (p1[:, 1] - p0[:, 1]) * (
        p2[:, 0] - p0[:, 0]
    )
    if len(det) == 0:
        raise MeshError("empty triangulation")
    if det.min() <= 0.0 or det.min() < 1e-14 * det.max():
        bad = int(np.argmin(det))
        raise MeshError(
            f"degenerate triangle {bad} (vertices {t[bad].tolist()}, signed area {det.min() / 2:g})"
        )
    area = 0.5 * det
    b = np.stack([p1[:, 1] - p2[:, 1], p2[:, 1] - p0[:, 1], p0[:, 1] - p1[:, 1]], axis=1)
    c = np.stack([p2[:, 0] - p1[:, 0], p0[:, 0] - p2[:, 0], p1[:, 0] - p0[:, 0]], axis=1)
    return area, b, c


_MASS_REF = (np.ones((3, 3)) + np.eye(3)) / 12.0


def _scatter(triangles: np.ndarray, n: int, element_matrices: np.ndarray) -> sparse.csr_matrix:
    rows = np.repeat(triangles, 3, axis=1).ravel()
    cols = np.tile(triangles, (1, 3)).ravel()
    mat = sparse.coo_matrix(
        (element_matrices.reshape(-1), (rows, cols)), shape=(n, n)
    ).tocsr()
    mat.sum_duplicates()
    return mat


def assemble(mesh: PlanarMesh, mode: str | None = None) -> DirichletSystem:
    """Stiffness/mass pair with the Dirichlet set implied by the mesh mode."""
    mode = mesh.mode if mode is None else mode
    if mode != mesh.mode:
        raise ValueError(f"mesh was built in {mesh.mode!r} mode, cannot assemble as {mode!r}")

    area, b, c = _element_geometry(mesh)
    stiff = (b[:, :, None] * b[:, None, :] + c[:, :, None] * c[:, None, :]) / (
        4.0 * area[:, None, None]
    )
    mass = area[:, None, None] * _MASS_REF

    n = len(mesh.vertices)
    K = _scatter(mesh.triangles, n, stiff)
    M = _scatter(mesh.triangles, n, mass)

    if mode == ANNULAR:
        dirichlet = np.union1d(mesh.outer_cycle, mesh.obstacle_cycle)
    else:
        dirichlet = np.sort(mesh.outer_cycle)
    free = np.setdiff1d(np.arange(len(mesh.vertices)), dirichlet)
    return DirichletSystem(K=K, M=M, free=free, dirichlet=dirichlet, mode=mode)


def assemble_potential(mesh: PlanarMesh, alpha: float) -> PotentialTerm:
    """Mass matrix of the obstacle indicator, for the operator K + alpha*M_B."""
    if mesh.mode != FULL:
        raise ValueError("the obstacle indicator needs a full-domain mesh")
    area, _, _ = _element_geometry(mesh)
    inside = mesh.tri_regions == OBSTACLE
    mass = _scatter(
        mesh.triangles[inside], len(mesh.vertices), area[inside, None, None] * _MASS_REF
    )
    return PotentialTerm(alpha=float(alpha), mass=mass, region_area=float(area[inside].sum()))


def assemble_torsion_load(mesh: PlanarMesh) -> np.ndarray:
    """Right-hand side for the unit-load problem: b_i = integral of phi_i."""
    area, _, _ = _element_geometry(mesh)
    b = np.zeros(len(mesh.vertices))
    np.add.at(b, mesh.triangles.ravel(), np.repeat(area / 3.0, 3))
    return b


class P1Interpolant:
    """Point evaluation of a nodal field via barycentric interpolation.

    Candidate triangles come from a centroid k-d tree; points that miss all
    candidates fall back to a brute-force scan so the answer is exact.
    """

    def __init__(self, mesh: PlanarMesh, values: np.ndarray):
        if len(values) != len(mesh.vertices):
            raise ValueError("one value per mesh vertex required")
        self._mesh = mesh
        self._values = np.asarray(values, dtype=float)
        self._tree = cKDTree(mesh.vertices[mesh.triangles].mean(axis=1))
        self._scale = float(np.sqrt(mesh.triangle_areas().max()))

    def _barycentric(self, tri_idx, pts):
        t = self._mesh.triangles[tri_idx]
        v = self._mesh.vertices
        p0, p1, p2 = v[t[:, 0]], v[t[:, 1]], v[t[:, 2]]
        d1, d2 = p1 - p0, p2 - p0
        det = d1[:, 0] * d2[:, 1] - d1[:, 1] * d2[:, 0]
        rel = pts - p0
        l1 = (rel[:, 0] * d2[:, 1] - rel[:, 1] * d2[:, 0]) / det
        l2 = (d1[:, 0] * rel[:, 1] - d1[:, 1] * rel[:, 0]) / det
        return np.stack([1.0 - l1 - l2, l1, l2], axis=1)

    def locate(self, points: np.ndarray, k: int = 32) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        found = np.full(len(pts), -1, dtype=np.int64)
        tol = -1e-12
        k = min(k, len(self._mesh.triangles))
        _, cand = self._tree.query(pts, k=k)
        cand = np.atleast_2d(cand)
        for j in range(cand.shape[1]):
            open_idx = np.flatnonzero(found < 0)
            if not len(open_idx):
                break
            tri_idx = cand[open_idx, j]
            lam = self._barycentric(tri_idx, pts[open_idx])
            ok = lam.min(axis=1) >= tol
            found[open_idx[ok]] = tri_idx[ok]
        for i in np.flatnonzero(found < 0):
            # rare: slim triangle not among the nearest centroids
            lam = self._barycentric(np.arange(len(self._mesh.triangles)), pts[i][None, :].repeat(len(self._mesh.triangles), axis=0))
            ok = np.flatnonzero(lam.min(axis=1) >= tol)
            if len(ok):
                found[i] = ok[0]
        return found

    def __call__(self, points: np.ndarray) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        tri_idx = self.locate(pts)
        if np.any(tri_idx < 0):
            missing = pts[tri_idx < 0][0]
            raise PointLocationError(f"point {missing.tolist()} is outside the mesh")
        lam = self._barycentric(tri_idx, pts)
        vals = (self._values[self._mesh.triangles[tri_idx]] * lam).sum(axis=1)
        return vals if np.asarray(points).ndim > 1 else float(vals[0])
