"""Segment-list files: parse, emit, and turn into embedded graphs.

The file format is line-oriented text: ``#`` comments, ``! key value``
metadata, and data lines of four reals ``x1 y1 x2 y2`` (one drawn segment
each).  Figure drawings repeat each vertex once per incident segment with
coordinates rounded to 4 decimals, so building a graph means clustering
endpoints that agree to within a merge radius and estimating which drawing
length counts as one matchstick.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

import numpy as np

from .model import EmbeddedGraph, edge_lengths

METADATA_KEYS = ("name", "claimed_vertices", "claimed_profile", "claimed_rigidity")
_PROFILES = ("4-regular", "(2,4)-regular")
_RIGIDITIES = ("rigid", "flexible", "unknown")


class SegmentFileError(ValueError):
    """Malformed segment file; carries the offending line number when known."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(message if line is None else f"line {line}: {message}")


class AmbiguousMergeError(ValueError):
    """Endpoint clusters too close together for the merge radius to be trusted."""


class DegenerateSegmentError(ValueError):
    """A segment's endpoints merged into the same vertex."""


@dataclass(frozen=True)
class SegmentFile:
    """Parsed segment file: metadata map plus an (s, 4) array of segments."""

    metadata: Mapping[str, object]
    segments: np.ndarray

    def __post_init__(self) -> None:
        segs = np.array(self.segments, dtype=float).reshape(-1, 4)
        if len(segs) == 0:
            raise SegmentFileError("no segments")
        if not np.all(np.isfinite(segs)):
            raise SegmentFileError("non-finite coordinate")
        segs.setflags(write=False)
        object.__setattr__(self, "segments", segs)
        object.__setattr__(self, "metadata", dict(self.metadata))

    @property
    def name(self) -> str:
        return str(self.metadata["name"])


@dataclass(frozen=True)
class MergePolicy:
    """Endpoints closer than epsilon_merge (drawing units) are one vertex."""

    epsilon_merge: float = 1e-2

    def __post_init__(self) -> None:
        if not self.epsilon_merge > 0:
            raise ValueError("epsilon_merge must be positive")


def parse_segment_file(text: str) -> SegmentFile:
    """Parse the segment-file format; raises SegmentFileError with a line number."""
    metadata: dict[str, object] = {}
    segments: list[tuple[float, float, float, float]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("!"):
            parts = line[1:].split(None, 1)
            if len(parts) != 2:
                raise SegmentFileError("metadata line needs a key and a value", lineno)
            key, value = parts[0], parts[1].strip()
            if key not in METADATA_KEYS:
                raise SegmentFileError(f"unknown metadata key {key!r}", lineno)
            if key == "claimed_vertices":
                try:
                    metadata[key] = int(value)
                except ValueError:
                    raise SegmentFileError(f"claimed_vertices must be an integer, got {value!r}", lineno)
            elif key == "claimed_profile":
                if value not in _PROFILES:
                    raise SegmentFileError(f"claimed_profile must be one of {_PROFILES}", lineno)
                metadata[key] = value
            elif key == "claimed_rigidity":
                if value not in _RIGIDITIES:
                    raise SegmentFileError(f"claimed_rigidity must be one of {_RIGIDITIES}", lineno)
                metadata[key] = value
            else:
                metadata[key] = value
            continue
        fields = line.split()
        if len(fields) != 4:
            raise SegmentFileError(f"expected 4 coordinates, got {len(fields)}", lineno)
        try:
            x1, y1, x2, y2 = (float(f) for f in fields)
        except ValueError:
            raise SegmentFileError(f"could not parse coordinates: {line!r}", lineno)
        segments.append((x1, y1, x2, y2))
    if "name" not in metadata:
        raise SegmentFileError("missing required metadata key 'name'")
    if not segments:
        raise SegmentFileError("no data lines")
    return SegmentFile(metadata, np.array(segments))


def emit_segments(g: EmbeddedGraph) -> str:
    """Write a graph's edges back out in the segment-file format (9 significant digits)."""
    lines = [f"! name {g.name if g.name is not None else 'unnamed'}"]
    for u, v in g.edges:
        x1, y1 = g.vertices[u]
        x2, y2 = g.vertices[v]
        lines.append(f"{x1:.9g} {y1:.9g} {x2:.9g} {y2:.9g}")
    return "\n".join(lines) + "\n"


def estimate_unit(segments: np.ndarray) -> float:
    """Median segment length (mean of the middle pair for even counts)."""
    segs = np.asarray(segments, dtype=float).reshape(-1, 4)
    if len(segs) == 0:
        raise ValueError("need at least one segment")
    lengths = np.hypot(segs[:, 2] - segs[:, 0], segs[:, 3] - segs[:, 1])
    return float(np.median(lengths))


def max_unit_deviation(segments: np.ndarray, unit: float) -> float:
    """Largest relative deviation of any segment length from the given unit."""
    segs = np.asarray(segments, dtype=float).reshape(-1, 4)
    lengths = np.hypot(segs[:, 2] - segs[:, 0], segs[:, 3] - segs[:, 1])
    return float(np.max(np.abs(lengths / unit - 1.0)))


def _cluster_endpoints(points: np.ndarray, eps: float) -> np.ndarray:
    """Union points within eps of each other; returns a cluster label per point.

    Uses a grid hash with cell size eps so only the 3x3 neighborhood needs
    pairwise checks.  Transitive chains are possible in principle; the caller
    rejects any clustering whose centroids end up suspiciously close.
    """
    n = len(points)
    parent = np.arange(n)

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    def union(i: int, j: int) -> None:
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[max(ri, rj)] = min(ri, rj)

    cells: dict[tuple[int, int], list[int]] = {}
    keys = np.floor(points / eps).astype(np.int64)
    for i, (cx, cy) in enumerate(keys):
        cells.setdefault((int(cx), int(cy)), []).append(i)
    for (cx, cy), members in cells.items():
        neighborhood = list(members)
        for dx in (-1, 0, 1):
            for dy in (-1, 0, 1):
                if (dx, dy) != (0, 0):
                    neighborhood.extend(cells.get((cx + dx, cy + dy), ()))
        for i in members:
            for j in neighborhood:
                if j > i and np.hypot(*(points[i] - points[j])) <= eps:
                    union(i, j)
    return np.array([find(i) for i in range(n)])


def build_graph(sf: SegmentFile, policy: MergePolicy = MergePolicy()) -> EmbeddedGraph:
    """Cluster segment endpoints into vertices and assemble the embedded graph.

    Each endpoint cluster becomes one vertex at the cluster centroid (first
    appearance order); duplicate segments collapse to one edge.  The unit is
    the median segment length.  Raises AmbiguousMergeError when two distinct
    cluster centers come within 2 x epsilon_merge (the clustering cannot be
    trusted), and DegenerateSegmentError when a segment's endpoints coincide.
    """
    segs = sf.segments
    unit = estimate_unit(segs)
    if not policy.epsilon_merge < 0.1 * unit:
        raise AmbiguousMergeError(
            f"epsilon_merge {policy.epsilon_merge} is not small against the unit {unit:.6g}"
        )
    endpoints = np.concatenate([segs[:, 0:2], segs[:, 2:4]])  # (2s, 2): starts then ends
    labels = _cluster_endpoints(endpoints, policy.epsilon_merge)

    # vertex ids in order of first appearance along the segment list
    order: dict[int, int] = {}
    for s in range(len(segs)):
        for label in (labels[s], labels[s + len(segs)]):
            if label not in order:
                order[label] = len(order)
    centroids = np.zeros((len(order), 2))
    counts = np.zeros(len(order))
    for point, label in zip(endpoints, labels):
        i = order[label]
        centroids[i] += point
        counts[i] += 1
    centroids /= counts[:, None]

    mind = _min_pairwise_distance(centroids)
    if mind < 2 * policy.epsilon_merge:
        raise AmbiguousMergeError(
            f"two merged vertices are only {mind:.6g} apart "
            f"(< 2 x epsilon_merge = {2 * policy.epsilon_merge:.6g})"
        )

    edges: list[tuple[int, int]] = []
    seen: set[tuple[int, int]] = set()
    for s in range(len(segs)):
        u = order[labels[s]]
        v = order[labels[s + len(segs)]]
        if u == v:
            raise DegenerateSegmentError(f"segment {s} endpoints merged into vertex {u}")
        key = (u, v) if u < v else (v, u)
        if key not in seen:
            seen.add(key)
            edges.append(key)

    name = sf.metadata.get("name")
    return EmbeddedGraph(centroids, tuple(edges), unit, str(name) if name is not None else None)


def _min_pairwise_distance(points: np.ndarray) -> float:
    if len(points) < 2:
        return np.inf
    # a few hundred points at most; the quadratic broadcast is fine
    diff = points[:, None, :] - points[None, :, :]
    dist = np.hypot(diff[..., 0], diff[..., 1])
    np.fill_diagonal(dist, np.inf)
    return float(dist.min())


def graph_from_text(text: str, policy: MergePolicy = MergePolicy()) -> EmbeddedGraph:
    """Convenience: parse + build in one step."""
    return build_graph(parse_segment_file(text), policy)
