import logging
import math
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.linalg import cho_factor, cho_solve

from .connectivity import is_connected
from .errors import CapacityError, DomainError, NumericError
from .graph_core import Graph, components, max_degree
from .robust_types import ResistanceResult, RobustnessConfig, Spectrum, build_config

logger = logging.getLogger(__name__)


def _check_dense_size(g: Graph, config: RobustnessConfig) -> None:
    if g.n > config.max_dense_n:
        raise CapacityError(f"n={g.n} exceeds max_dense_n={config.max_dense_n} for dense spectral pipelines")


def laplacian(g: Graph) -> np.ndarray:
    adjacency = g.adjacency_matrix()
    return np.diag(adjacency.sum(axis=1)) - adjacency


def jacobi_eigenvalues(matrix: np.ndarray, tolerance: float = 1e-12, max_sweeps: int = 100) -> Tuple[np.ndarray, int]:
    """Cyclic Jacobi rotations on a dense symmetric matrix.

    Returns the (unsorted) diagonal after convergence and the number of sweeps
    used. Convergence means the off-diagonal Frobenius norm dropped below
    `tolerance * ||matrix||_F`.
    """
    a = np.array(matrix, dtype=np.float64)
    size = a.shape[0]
    norm = float(np.linalg.norm(a))
    if size < 2 or norm == 0.0:
        return np.diag(a).copy(), 0

    threshold = tolerance * norm
    for sweep in range(max_sweeps + 1):
        off = float(np.linalg.norm(a - np.diag(np.diag(a))))
        if off < threshold:
            return np.diag(a).copy(), sweep
        if sweep == max_sweeps:
            break
        for p in range(size - 1):
            for q in range(p + 1, size):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = (1.0 if theta >= 0 else -1.0) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c

                row_p = a[p, :].copy()
                row_q = a[q, :].copy()
                a[p, :] = c * row_p - s * row_q
                a[q, :] = s * row_p + c * row_q
                col_p = a[:, p].copy()
                col_q = a[:, q].copy()
                a[:, p] = c * col_p - s * col_q
                a[:, q] = s * col_p + c * col_q
                a[p, q] = 0.0
                a[q, p] = 0.0

    raise NumericError(f"Jacobi eigensolver did not converge within {max_sweeps} sweeps")


def _pick_solver(g: Graph, config: RobustnessConfig) -> str:
    solver = str(config.eigensolver or "auto").lower()
    if solver == "auto":
        return "jacobi" if g.n <= config.jacobi_max_n else "lapack"
    if solver not in ("jacobi", "lapack"):
        raise DomainError(f"unknown eigensolver '{config.eigensolver}' (expected auto, jacobi or lapack)")
    return solver


def spectrum(g: Graph, config: Optional[RobustnessConfig] = None) -> Spectrum:
    config = build_config(config)
    _check_dense_size(g, config)
    matrix = laplacian(g).astype(np.float64)

    solver = _pick_solver(g, config)
    if solver == "jacobi":
        values, sweeps = jacobi_eigenvalues(matrix, config.jacobi_tolerance, config.jacobi_max_sweeps)
    else:
        try:
            values = np.linalg.eigvalsh(matrix)
        except np.linalg.LinAlgError as exc:
            raise NumericError(f"LAPACK eigensolver failed: {exc}") from exc
        sweeps = 0
    logger.debug("spectrum n=%d solver=%s sweeps=%d", g.n, solver, sweeps)

    values = np.sort(values)
    tol = 1e-10 * g.n * max(1, max_degree(g))
    if values[0] < -tol:
        raise NumericError(f"Laplacian eigenvalue {values[0]!r} below -{tol!r}; matrix is not positive semidefinite")
    values[np.abs(values) <= tol] = 0.0
    if values[0] != 0.0:
        raise NumericError(f"smallest Laplacian eigenvalue {values[0]!r} is not zero")

    return Spectrum(
        eigenvalues=values,
        zero_multiplicity=int(np.count_nonzero(values == 0.0)),
        solver=solver,
        sweeps=sweeps,
    )


def algebraic_connectivity(g: Graph, config: Optional[RobustnessConfig] = None) -> float:
    if g.n < 2:
        raise DomainError("algebraic connectivity needs at least 2 vertices")
    return spectrum(g, config).algebraic_connectivity


def _bareiss_determinant(matrix: List[List[int]], max_bits: int) -> int:
    size = len(matrix)
    if size == 0:
        return 1
    sign = 1
    previous = 1
    for i in range(size - 1):
        if matrix[i][i] == 0:
            swap = next((r for r in range(i + 1, size) if matrix[r][i] != 0), None)
            if swap is None:
                return 0
            matrix[i], matrix[swap] = matrix[swap], matrix[i]
            sign = -sign
        pivot = matrix[i][i]
        if abs(pivot).bit_length() > max_bits:
            raise CapacityError(f"spanning-tree determinant exceeds spanning_tree_max_bits={max_bits}")
        for r in range(i + 1, size):
            factor = matrix[r][i]
            row = matrix[r]
            pivot_row = matrix[i]
            for c in range(i + 1, size):
                # exact by Sylvester's identity
                row[c] = (row[c] * pivot - factor * pivot_row[c]) // previous
            row[i] = 0
        previous = pivot
    return sign * matrix[size - 1][size - 1]


def spanning_tree_count(g: Graph, config: Optional[RobustnessConfig] = None) -> int:
    config = build_config(config)
    _check_dense_size(g, config)
    if g.n == 1:
        return 1
    if not is_connected(g):
        return 0
    reduced = laplacian(g)[:-1, :-1]
    minor = [[int(value) for value in row] for row in reduced]
    count = _bareiss_determinant(minor, config.spanning_tree_max_bits)
    if abs(count).bit_length() > config.spanning_tree_max_bits:
        raise CapacityError(f"spanning-tree count exceeds spanning_tree_max_bits={config.spanning_tree_max_bits}")
    return count


def spanning_tree_count_spectral(g: Graph, config: Optional[RobustnessConfig] = None) -> float:
    if g.n < 2:
        raise DomainError("spectral spanning-tree count needs at least 2 vertices")
    values = spectrum(g, config).eigenvalues
    return float(np.prod(values[1:]) / g.n)


class ResistanceSolver:
    """Grounded Laplacian of one connected component, factorised once.

    The highest-index vertex of the component is held at potential 0; every
    pair solve reuses the same Cholesky factor.
    """

    def __init__(self, g: Graph, vertices: Sequence[int]):
        self.vertices = sorted(vertices)
        self.index = {v: i for i, v in enumerate(self.vertices)}
        self.ground = self.vertices[-1]

        full = laplacian(g).astype(np.float64)
        local = full[np.ix_(self.vertices, self.vertices)]
        reduced = local[:-1, :-1]
        self._factor = None
        if len(reduced):
            try:
                self._factor = cho_factor(reduced, lower=True, check_finite=False)
            except np.linalg.LinAlgError as exc:
                raise NumericError(f"reduced Laplacian is singular on component containing {self.ground}") from exc

    def _solve(self, rhs: np.ndarray) -> np.ndarray:
        if self._factor is None:
            return np.zeros_like(rhs)
        return cho_solve(self._factor, rhs, check_finite=False)

    def potentials(self, a: int, b: int) -> np.ndarray:
        """Vertex potentials for unit current injected at `a` and drawn at `b`."""
        size = len(self.vertices)
        injection = np.zeros(size)
        injection[self.index[a]] += 1.0
        injection[self.index[b]] -= 1.0
        v = np.zeros(size)
        v[:-1] = self._solve(injection[:-1])
        return v

    def resistance(self, a: int, b: int) -> float:
        v = self.potentials(a, b)
        return float(v[self.index[a]] - v[self.index[b]])

    def pairwise(self) -> np.ndarray:
        size = len(self.vertices)
        green = np.zeros((size, size))
        green[:-1, :-1] = self._solve(np.eye(size - 1))
        diag = np.diag(green)
        resistance = diag[:, None] + diag[None, :] - 2.0 * green
        np.fill_diagonal(resistance, 0.0)
        return resistance


def effective_resistance(g: Graph, a: int, b: int, config: Optional[RobustnessConfig] = None) -> float:
    config = build_config(config)
    _check_dense_size(g, config)
    if a == b:
        raise DomainError("effective resistance needs two distinct vertices")
    for vertex in (a, b):
        if not 0 <= vertex < g.n:
            raise DomainError(f"vertex {vertex} out of range [0, {g.n})")

    component = next(members for members in components(g) if a in members)
    if b not in component:
        return math.inf
    return ResistanceSolver(g, component).resistance(a, b)


def _relative_gap(x: float, y: float) -> float:
    scale = max(abs(x), abs(y))
    return 0.0 if scale == 0.0 else abs(x - y) / scale


def effective_graph_resistance(g: Graph, config: Optional[RobustnessConfig] = None) -> ResistanceResult:
    config = build_config(config)
    _check_dense_size(g, config)
    if g.n == 1:
        return ResistanceResult(pairwise=np.zeros((1, 1)), total=0.0, spectral_total=0.0)
    if not is_connected(g):
        return ResistanceResult(pairwise=None, total=math.inf, spectral_total=math.inf)

    pairwise = ResistanceSolver(g, range(g.n)).pairwise()
    total = float(pairwise[np.triu_indices(g.n, k=1)].sum())

    values = spectrum(g, config).eigenvalues
    spectral_total = float(g.n * np.sum(1.0 / values[1:]))

    gap = _relative_gap(total, spectral_total)
    if gap > config.resistance_rel_tolerance:
        raise NumericError(
            f"pairwise resistance sum {total!r} disagrees with spectral total {spectral_total!r} (relative gap {gap:.3e})"
        )
    return ResistanceResult(pairwise=pairwise, total=total, spectral_total=spectral_total)
