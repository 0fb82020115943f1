"""Polish vertex coordinates until every edge has unit length.

Figure data is rounded to 4 decimals and composed graphs start with small
gaps at their glue points; this module drives both to near machine precision
with a damped Gauss-Newton iteration on the stacked residual vector
(edge lengths minus one, plus optional coincidence and distance constraints).
The edge-length Jacobian built here doubles as the rigidity matrix.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .model import EmbeddedGraph, normalize

_TINY = 1e-12  # lengths below this count as degenerate
_DAMPING_FLOOR = 1e-12
_DAMPING_CEIL = 1e14

Pin = tuple[int, int]  # (vertex index, coordinate 0=x / 1=y)


class ZeroLengthEdgeError(ValueError):
    """An edge's endpoints (nearly) coincide; direction is undefined."""


@dataclass(frozen=True)
class RefineOptions:
    """Solver knobs.

    ``pinned`` holds (vertex, coordinate) pairs fixed during solving to remove
    the three rigid-body degrees of freedom; None selects a default gauge
    (vertex 0 fully, plus one coordinate of the vertex farthest from it).
    """

    max_iterations: int = 200
    target_residual: float = 1e-12
    damping: float = 1e-6
    pinned: tuple[Pin, ...] | None = None

    def __post_init__(self) -> None:
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if not self.target_residual > 0:
            raise ValueError("target_residual must be positive")
        if not self.damping > 0:
            raise ValueError("damping must be positive")


@dataclass(frozen=True)
class RefineResult:
    """Best iterate found, with convergence bookkeeping.

    Residuals are max |edge length - 1| in matchstick units; the output graph
    always has unit = 1.  ``final_coincidence`` is the largest remaining
    distance over coincidence pairs (0 when none were requested).
    """

    graph: EmbeddedGraph
    iterations: int
    initial_residual: float
    final_residual: float
    converged: bool
    final_coincidence: float = 0.0


def residuals(g: EmbeddedGraph) -> np.ndarray:
    """Edge length minus one, per edge, in matchstick units."""
    coords = normalize(g).vertices
    return _edge_residuals(coords, g.edge_array())


def residual_jacobian(g: EmbeddedGraph) -> np.ndarray:
    """Jacobian of the edge-length residuals, e rows by 2v columns.

    Derivatives are taken with respect to coordinates measured in matchstick
    units.  The row for edge (u, w) carries the unit direction vector from w
    to u in u's two columns and its negation in w's columns, so each row has
    Euclidean norm sqrt(2) regardless of edge length.
    """
    coords = normalize(g).vertices
    return _edge_jacobian(coords, g.edge_array(), 2 * g.vertex_count)


def default_pins(g: EmbeddedGraph) -> tuple[Pin, ...]:
    """Gauge fixing: vertex 0 fully, plus one coordinate of the farthest vertex.

    Pinning y of the far vertex blocks rotation about vertex 0 unless the two
    are vertically aligned, in which case x is pinned instead.
    """
    if g.vertex_count < 2:
        return ((0, 0), (0, 1))
    coords = g.vertices
    rel = coords - coords[0]
    far = int(np.argmax(np.hypot(rel[:, 0], rel[:, 1])))
    coord = 1 if abs(rel[far, 0]) >= abs(rel[far, 1]) else 0
    return ((0, 0), (0, 1), (far, coord))


def refine(
    g: EmbeddedGraph,
    opts: RefineOptions = RefineOptions(),
    coincidences: Sequence[tuple[int, int]] = (),
    distance_constraints: Sequence[tuple[int, int, float]] = (),
) -> RefineResult:
    """Damped Gauss-Newton on edge lengths plus optional extra constraints.

    ``coincidences`` are vertex-index pairs required to coincide (two
    coordinate-difference residuals each); they are solved, not merged --
    index merging is the construct module's job.  ``distance_constraints``
    are (i, j, target) triples holding two vertices at a prescribed distance,
    used by construction initializers to pre-flex parts.

    Accepted steps never increase the residual norm; a rejected step raises
    the damping tenfold and retries.  Non-convergence is reported, not raised:
    the best iterate comes back with ``converged=False``.
    """
    coords = normalize(g).vertices.copy()
    n2 = 2 * g.vertex_count
    eidx = g.edge_array()
    pairs = np.array([(int(i), int(j)) for i, j in coincidences], dtype=int).reshape(-1, 2)
    dcons = [(int(i), int(j), float(t)) for i, j, t in distance_constraints]
    for i, j in pairs:
        if not (0 <= i < g.vertex_count and 0 <= j < g.vertex_count) or i == j:
            raise ValueError(f"bad coincidence pair ({i}, {j})")

    pins = opts.pinned if opts.pinned is not None else default_pins(g)
    free = np.ones(n2, dtype=bool)
    for vi, ci in pins:
        if not (0 <= vi < g.vertex_count and ci in (0, 1)):
            raise ValueError(f"bad pin ({vi}, {ci})")
        free[2 * vi + ci] = False

    def full_residual(c: np.ndarray) -> np.ndarray:
        parts = [_edge_residuals(c, eidx)]
        if len(pairs):
            parts.append((c[pairs[:, 0]] - c[pairs[:, 1]]).ravel())
        if dcons:
            parts.append(_distance_residuals(c, dcons))
        return np.concatenate(parts)

    def blocks(c: np.ndarray) -> tuple[float, float]:
        """(max |edge residual|, max constraint violation)."""
        edge_max = float(np.max(np.abs(_edge_residuals(c, eidx)))) if len(eidx) else 0.0
        extra = 0.0
        if len(pairs):
            gap = c[pairs[:, 0]] - c[pairs[:, 1]]
            extra = float(np.max(np.hypot(gap[:, 0], gap[:, 1])))
        if dcons:
            extra = max(extra, float(np.max(np.abs(_distance_residuals(c, dcons)))))
        return edge_max, extra

    initial_residual, extra0 = blocks(coords)
    best = coords.copy()
    best_norm = float(np.linalg.norm(full_residual(coords)))
    lam = opts.damping
    iterations = 0
    converged = max(initial_residual, extra0) <= opts.target_residual

    while not converged and iterations < opts.max_iterations:
        r = full_residual(coords)
        J = _full_jacobian(coords, eidx, pairs, dcons, n2)[:, free]
        grad = J.T @ r
        hess = J.T @ J
        norm = float(np.linalg.norm(r))
        stepped = False
        while lam <= _DAMPING_CEIL:
            try:
                dx = np.linalg.solve(hess + lam * np.eye(hess.shape[0]), -grad)
            except np.linalg.LinAlgError:
                lam *= 10
                continue
            candidate = coords.copy()
            flat = candidate.reshape(-1)
            flat[free] += dx
            try:
                new_norm = float(np.linalg.norm(full_residual(candidate)))
            except ZeroLengthEdgeError:
                lam *= 10
                continue
            if new_norm < norm:
                coords = candidate
                lam = max(lam / 3, _DAMPING_FLOOR)
                stepped = True
                break
            lam *= 10
        if not stepped:
            break  # no acceptable step at any damping: give up
        iterations += 1
        if new_norm < best_norm:
            best_norm = new_norm
            best = coords.copy()
        edge_max, extra = blocks(coords)
        converged = max(edge_max, extra) <= opts.target_residual

    out_coords = coords if converged else best
    final_edge, _ = blocks(out_coords)
    result_graph = EmbeddedGraph(out_coords, g.edges, 1.0, g.name)
    coin = 0.0
    if len(pairs):
        gap = out_coords[pairs[:, 0]] - out_coords[pairs[:, 1]]
        coin = float(np.max(np.hypot(gap[:, 0], gap[:, 1])))
    return RefineResult(
        graph=result_graph,
        iterations=iterations,
        initial_residual=initial_residual,
        final_residual=final_edge,
        converged=converged,
        final_coincidence=coin,
    )


# -- residual / Jacobian assembly ---------------------------------------------


def _edge_vectors(coords: np.ndarray, eidx: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    diff = coords[eidx[:, 0]] - coords[eidx[:, 1]]
    lengths = np.hypot(diff[:, 0], diff[:, 1])
    if len(lengths) and float(lengths.min()) < _TINY:
        raise ZeroLengthEdgeError(
            f"edge {int(np.argmin(lengths))} has length {float(lengths.min()):.3e}"
        )
    return diff, lengths


def _edge_residuals(coords: np.ndarray, eidx: np.ndarray) -> np.ndarray:
    if len(eidx) == 0:
        return np.zeros(0)
    _, lengths = _edge_vectors(coords, eidx)
    return lengths - 1.0


def _distance_residuals(coords: np.ndarray, dcons: list[tuple[int, int, float]]) -> np.ndarray:
    out = np.zeros(len(dcons))
    for k, (i, j, target) in enumerate(dcons):
        out[k] = np.hypot(*(coords[i] - coords[j])) - target
    return out


def _edge_jacobian(coords: np.ndarray, eidx: np.ndarray, n2: int) -> np.ndarray:
    J = np.zeros((len(eidx), n2))
    if len(eidx) == 0:
        return J
    diff, lengths = _edge_vectors(coords, eidx)
    unit = diff / lengths[:, None]
    rows = np.arange(len(eidx))
    for c in (0, 1):
        J[rows, 2 * eidx[:, 0] + c] = unit[:, c]
        J[rows, 2 * eidx[:, 1] + c] = -unit[:, c]
    return J


def _full_jacobian(
    coords: np.ndarray,
    eidx: np.ndarray,
    pairs: np.ndarray,
    dcons: list[tuple[int, int, float]],
    n2: int,
) -> np.ndarray:
    parts = [_edge_jacobian(coords, eidx, n2)]
    if len(pairs):
        C = np.zeros((2 * len(pairs), n2))
        for k, (i, j) in enumerate(pairs):
            for c in (0, 1):
                C[2 * k + c, 2 * i + c] = 1.0
                C[2 * k + c, 2 * j + c] = -1.0
        parts.append(C)
    if dcons:
        D = np.zeros((len(dcons), n2))
        for k, (i, j, _target) in enumerate(dcons):
            diff = coords[i] - coords[j]
            length = np.hypot(*diff)
            if length < _TINY:
                raise ZeroLengthEdgeError(f"distance constraint {k} endpoints coincide")
            u = diff / length
            for c in (0, 1):
                D[k, 2 * i + c] = u[c]
                D[k, 2 * j + c] = -u[c]
        parts.append(D)
    return np.vstack(parts)
