"""Build larger matchstick graphs by gluing parts at degree-2 vertices.

Merging two degree-2 vertices produces one degree-4 vertex, so parts whose
only sub-4 degrees are a few degree-2 "ports" can be composed into 4-regular
graphs: mirror doubling (a part plus its reflected or half-turned copy),
rings of k parts joined in a cycle, and chains with 5-vertex spacers slotted
between two end parts.  A composition is described by a declarative plan,
realized by placing each part with a rigid motion and solving the glue gaps
closed (coincidence constraints), and only then merging vertex indices.
Certification is deliberately separate: callers run verify on the result.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .model import EmbeddedGraph, normalize
from .refine import RefineOptions, refine

_PREFLEX_TOL = 1e-9  # port-gap mismatches below this need no pre-flexing


class ConstructError(RuntimeError):
    """Construction could not be carried out."""


class WrongDegreeError(ConstructError):
    """A designated join vertex does not have degree 2."""


class VertexOnAxisError(ConstructError):
    """Line-mode mirror would place a non-join vertex onto the mirror axis."""


class PlanError(ValueError):
    """Composition plan violates its invariants."""


class RealizationFailedError(ConstructError):
    """Layout or glue solving failed; the plan may be geometrically infeasible."""


# -- plans --------------------------------------------------------------------


@dataclass(frozen=True)
class PartSpec:
    """One part of a composition: a graph plus an optional mirror flag."""

    graph: EmbeddedGraph
    reflect: bool = False
    label: str | None = None

    @property
    def display_label(self) -> str:
        base = self.label or self.graph.name or "part"
        return f"mirror:{base}" if self.reflect else base


@dataclass(frozen=True)
class CompositionPlan:
    """Parts plus pairwise identifications of their degree-2 ports.

    Each identification is (part a, slot a, part b, slot b), where a slot
    indexes the part's degree-2 vertices in vertex-index order.  Every listed
    port may appear in exactly one identification and the identification
    graph over parts must be connected.
    """

    parts: tuple[PartSpec, ...]
    identifications: tuple[tuple[int, int, int, int], ...]
    name: str | None = None

    @property
    def subgraph_count(self) -> int:
        return len(self.parts)

    def __post_init__(self) -> None:
        object.__setattr__(self, "parts", tuple(self.parts))
        object.__setattr__(
            self,
            "identifications",
            tuple(tuple(int(x) for x in ident) for ident in self.identifications),
        )
        validate_plan(self)


def degree2_vertices(g: EmbeddedGraph) -> tuple[int, ...]:
    """Indices of the degree-2 vertices, ascending; these are the glue ports."""
    deg = g.degrees()
    return tuple(int(i) for i in np.nonzero(deg == 2)[0])


def validate_plan(plan: CompositionPlan) -> None:
    k = len(plan.parts)
    if k == 0:
        raise PlanError("plan has no parts")
    ports = [degree2_vertices(spec.graph) for spec in plan.parts]
    used: set[tuple[int, int]] = set()
    links: list[list[int]] = [[] for _ in range(k)]
    for a, sa, b, sb in plan.identifications:
        for part, slot in ((a, sa), (b, sb)):
            if not 0 <= part < k:
                raise PlanError(f"part index {part} out of range")
            if not 0 <= slot < len(ports[part]):
                raise PlanError(
                    f"part {part} has {len(ports[part])} degree-2 vertices, no slot {slot}"
                )
            if (part, slot) in used:
                raise PlanError(f"port (part {part}, slot {slot}) used twice")
            used.add((part, slot))
        if a == b:
            raise PlanError(f"identification joins part {a} to itself")
        links[a].append(b)
        links[b].append(a)
    if k > 1:
        seen = {0}
        stack = [0]
        while stack:
            for other in links[stack.pop()]:
                if other not in seen:
                    seen.add(other)
                    stack.append(other)
        if len(seen) != k:
            raise PlanError("identification graph over parts is not connected")


def predicted_vertex_count(plan: CompositionPlan) -> int:
    """Sum of part vertex counts minus one per identification.

    For a cycle of k parts with two ports each this is (sum of sizes) - k.
    """
    return sum(spec.graph.vertex_count for spec in plan.parts) - len(plan.identifications)


def ring_plan(parts: Sequence[PartSpec | EmbeddedGraph], name: str | None = None) -> CompositionPlan:
    """Cycle composition: part i's slot 1 glued to part i+1's slot 0 (mod k)."""
    specs = tuple(p if isinstance(p, PartSpec) else PartSpec(p) for p in parts)
    k = len(specs)
    if k < 2:
        raise PlanError("a ring needs at least 2 parts")
    idents = tuple((i, 1, (i + 1) % k, 0) for i in range(k))
    if name is None:
        name = "ring(" + ",".join(s.display_label for s in specs) + ")"
    return CompositionPlan(specs, idents, name)


@dataclass(frozen=True)
class ChainSpec:
    """Two end parts joined through n flexible 5-vertex spacers.

    Each spacer contributes 5 vertices and consumes 2 identifications per
    neighbor, so the predicted vertex count is
    v_left + v_right + 5n - 2(n+1); every spacer adds 3 net vertices.
    ``spacer=None`` selects the bundled 5-vertex corpus part.
    """

    left: PartSpec
    right: PartSpec
    spacer_count: int
    spacer: EmbeddedGraph | None = None

    def __post_init__(self) -> None:
        if self.spacer_count < 0:
            raise PlanError("spacer_count must be >= 0")

    def predicted_vertex_count(self) -> int:
        n = self.spacer_count
        return (
            self.left.graph.vertex_count
            + self.right.graph.vertex_count
            + 5 * n
            - 2 * (n + 1)
        )


def chain_plan(spec: ChainSpec) -> CompositionPlan:
    """Expand a ChainSpec into an explicit plan (left + spacers + right)."""
    spacer = spec.spacer
    if spacer is None:
        from .corpus import refined_graph  # deferred: corpus is optional here

        spacer = refined_graph("fig5b")
    _spacer_port_pairs(spacer)  # raises PlanError if the shape is not a spacer
    parts: list[PartSpec] = [spec.left]
    parts += [PartSpec(spacer, label=spacer.name) for _ in range(spec.spacer_count)]
    parts.append(spec.right)
    idents: list[tuple[int, int, int, int]] = []
    for t in range(len(parts) - 1):
        left_slots = _facing_slots(parts[t].graph, exit_side=True)
        right_slots = _facing_slots(parts[t + 1].graph, exit_side=False)
        idents.append((t, left_slots[0], t + 1, right_slots[0]))
        idents.append((t, left_slots[1], t + 1, right_slots[1]))
    name = (
        f"chain({spec.left.display_label},"
        f"{spec.spacer_count} spacers,{spec.right.display_label})"
    )
    return CompositionPlan(tuple(parts), tuple(idents), name)


def _facing_slots(g: EmbeddedGraph, exit_side: bool) -> tuple[int, int]:
    """Which two slots of a chain part face a given neighbor.

    End parts have exactly two ports (both face their only neighbor); spacers
    offer one port pair per side, in pair order (entry = pair 0, exit = 1).
    """
    ports = degree2_vertices(g)
    if len(ports) == 2:
        return 0, 1
    pairs = _spacer_port_pairs(g)
    pair = pairs[1] if exit_side else pairs[0]
    return ports.index(pair[0]), ports.index(pair[1])


def chain_extend(spec: ChainSpec, opts: RefineOptions = RefineOptions()) -> EmbeddedGraph:
    """Realize a chain composition; vertex count comes out as predicted."""
    return realize(chain_plan(spec), opts)


# -- plan (de)serialization ---------------------------------------------------


def default_part_resolver(name: str) -> EmbeddedGraph:
    """Resolve a part reference: corpus name, else a path to a segment file."""
    from . import corpus
    from .ingest import graph_from_text

    try:
        return corpus.refined_graph(name)
    except KeyError:
        pass
    from pathlib import Path

    path = Path(name)
    if path.exists():
        result = refine(graph_from_text(path.read_text()))
        if not result.converged:
            raise RealizationFailedError(f"part file {name} did not refine")
        return result.graph
    raise PlanError(f"unknown part {name!r} (not a corpus name or readable file)")


def plan_to_json_dict(plan: CompositionPlan) -> dict:
    return {
        "name": plan.name,
        "parts": [
            {"part": spec.label or spec.graph.name or "?", "reflect": spec.reflect}
            for spec in plan.parts
        ],
        "identifications": [list(ident) for ident in plan.identifications],
    }


def plan_from_json_dict(
    data: dict, resolver: Callable[[str], EmbeddedGraph] = default_part_resolver
) -> CompositionPlan:
    try:
        raw_parts = data["parts"]
        raw_idents = data["identifications"]
    except (KeyError, TypeError) as exc:
        raise PlanError(f"plan document missing field: {exc}")
    parts = []
    for entry in raw_parts:
        if isinstance(entry, str):
            entry = {"part": entry}
        label = entry["part"]
        parts.append(PartSpec(resolver(label), bool(entry.get("reflect", False)), label))
    idents = tuple(tuple(int(x) for x in ident) for ident in raw_idents)
    return CompositionPlan(tuple(parts), idents, data.get("name"))


def plan_from_json(
    text: str, resolver: Callable[[str], EmbeddedGraph] = default_part_resolver
) -> CompositionPlan:
    return plan_from_json_dict(json.loads(text), resolver)


# -- mirror doubling ----------------------------------------------------------


def mirror_double(
    g: EmbeddedGraph,
    axis_vertex_a: int,
    axis_vertex_b: int,
    mode: str = "line",
    eps: float = 1e-4,
) -> EmbeddedGraph:
    """Glue g to a transformed copy of itself at its two degree-2 vertices.

    ``line`` mode reflects across the line through the two vertices (their
    images are themselves); ``point`` mode rotates the copy half a turn about
    their midpoint (the images swap).  Either way the copy's join vertices
    land on the originals and are identified, giving 2v - 2 vertices; when g
    is (2,4)-regular with exactly these two degree-2 vertices the result is
    4-regular.  The output is not verified here -- run verify separately.
    """
    a, b = int(axis_vertex_a), int(axis_vertex_b)
    deg = g.degrees()
    for vtx in (a, b):
        if deg[vtx] != 2:
            raise WrongDegreeError(f"vertex {vtx} has degree {deg[vtx]}, need 2")
    if a == b:
        raise WrongDegreeError("join vertices must be distinct")
    coords = g.vertices
    A, B = coords[a], coords[b]
    if mode == "line":
        axis = B - A
        norm = np.hypot(*axis)
        if norm == 0:
            raise VertexOnAxisError("join vertices coincide")
        u = axis / norm
        rel = coords - A
        offsets = np.abs(rel[:, 0] * u[1] - rel[:, 1] * u[0])  # distance to the axis line
        for vtx in np.nonzero(offsets <= eps * g.unit)[0]:
            if vtx not in (a, b):
                raise VertexOnAxisError(
                    f"vertex {int(vtx)} lies on the mirror axis "
                    f"(offset {offsets[vtx] / g.unit:.3e} units)"
                )
        along = (rel @ u)[:, None] * u
        copy = A + 2 * along - rel
        image_of = {a: a, b: b}
    elif mode == "point":
        mid = (A + B) / 2
        copy = 2 * mid - coords
        image_of = {a: b, b: a}  # the half turn swaps the join vertices
    else:
        raise ValueError(f"mode must be 'line' or 'point', got {mode!r}")

    v = g.vertex_count
    new_index: dict[int, int] = {}
    new_coords = list(coords)
    for i in range(v):
        if i in image_of:
            new_index[i] = image_of[i]
        else:
            new_index[i] = len(new_coords)
            new_coords.append(copy[i])
    edges = list(g.edges) + [
        tuple(sorted((new_index[p], new_index[q]))) for p, q in g.edges
    ]
    name = f"mirror({g.name or 'graph'},{mode})"
    return EmbeddedGraph(np.array(new_coords), tuple(edges), g.unit, name)


# -- realization --------------------------------------------------------------


def realize(plan: CompositionPlan, opts: RefineOptions = RefineOptions()) -> EmbeddedGraph:
    """Place the parts, solve all glue gaps closed, and merge the joints.

    Supported layouts are cycles of two-port parts (rings; two parts give the
    facing-pair case) and chains whose interior parts are 5-vertex spacers.
    Raises RealizationFailedError when the layout is unsupported or the glue
    constraints cannot be closed; the result is otherwise exact to the
    refinement target but deliberately unverified.
    """
    validate_plan(plan)
    prepared = [_prepare_part(spec) for spec in plan.parts]
    ports = [degree2_vertices(g) for g in prepared]
    idents = [
        (a, ports[a][sa], b, ports[b][sb]) for a, sa, b, sb in plan.identifications
    ]

    port_counts = [0] * len(prepared)
    for a, _va, b, _vb in idents:
        port_counts[a] += 1
        port_counts[b] += 1

    if all(c == 2 for c in port_counts):
        placed = _layout_cycle(prepared, idents, opts)
    else:
        placed = _layout_chain(prepared, idents, opts)

    return _solve_and_merge(plan, placed, idents, opts)


def _prepare_part(spec: PartSpec) -> EmbeddedGraph:
    """Normalize, refine, and optionally mirror one part."""
    result = refine(normalize(spec.graph))
    if not result.converged:
        raise RealizationFailedError(
            f"part {spec.display_label} did not refine "
            f"(residual {result.final_residual:.3e})"
        )
    g = result.graph
    if spec.reflect:
        flipped = g.vertices.copy()
        flipped[:, 1] = -flipped[:, 1]
        g = g.with_vertices(flipped)
    return g


def _preflex(
    g: EmbeddedGraph,
    constraints: Sequence[tuple[int, int, float]],
    opts: RefineOptions,
) -> EmbeddedGraph:
    """Best-effort flex of a part toward prescribed port gaps (initialization only)."""
    needed = [
        (i, j, t)
        for i, j, t in constraints
        if abs(np.hypot(*(g.vertices[i] - g.vertices[j])) - t) > _PREFLEX_TOL
    ]
    if not needed:
        return g
    result = refine(g, RefineOptions(max_iterations=opts.max_iterations,
                                     target_residual=opts.target_residual,
                                     damping=opts.damping),
                    distance_constraints=needed)
    return result.graph  # non-convergence is fine here; the joint solve decides


# -- cycle layout -------------------------------------------------------------


def _layout_cycle(
    parts: list[EmbeddedGraph],
    idents: list[tuple[int, int, int, int]],
    opts: RefineOptions,
) -> list[np.ndarray]:
    """Place a cycle of two-port parts around a closed joint polygon."""
    k = len(parts)
    by_part: list[list[tuple[int, int, int]]] = [[] for _ in range(k)]  # (joint, own v, other part)
    for joint, (a, va, b, vb) in enumerate(idents):
        by_part[a].append((joint, va, b))
        by_part[b].append((joint, vb, a))
    if any(len(entry) != 2 for entry in by_part) or len(idents) != k:
        raise RealizationFailedError("unsupported plan topology (not a single cycle)")

    # walk the cycle: order[i] = part index, entry/exit vertex per visited part
    order = [0]
    exit_joint, exit_vertex, nxt = by_part[0][0]
    entry_vertex_of = {}
    exit_vertex_of = {0: exit_vertex}
    used_joints = {exit_joint}
    while nxt != 0:
        order.append(nxt)
        options = by_part[nxt]
        incoming = next(o for o in options if o[0] == exit_joint)
        entry_vertex_of[nxt] = incoming[1]
        outgoing = next(o for o in options if o[0] != exit_joint)
        exit_joint, exit_vertex_of[nxt], nxt = outgoing
        if exit_joint in used_joints:
            raise RealizationFailedError("unsupported plan topology (not a single cycle)")
        used_joints.add(exit_joint)
        if len(order) > k:
            raise RealizationFailedError("unsupported plan topology (not a single cycle)")
    entry_vertex_of[0] = next(o for o in by_part[0] if o[0] == exit_joint)[1]
    if len(order) != k:
        raise RealizationFailedError("unsupported plan topology (cycle misses parts)")

    gaps = []
    for i in order:
        p = parts[i].vertices
        gaps.append(float(np.hypot(*(p[exit_vertex_of[i]] - p[entry_vertex_of[i]]))))

    if k == 2:
        height = (gaps[0] + gaps[1]) / 2
        joints = np.array([[0.0, 0.0], [0.0, height]])
        targets = {order[0]: (joints[1], joints[0]), order[1]: (joints[0], joints[1])}
        # facing pair: each body on its own side (left of its entry->exit direction)
        sides = {order[0]: +1.0, order[1]: +1.0}
    else:
        polygon = _closed_polygon(gaps)  # counterclockwise, one vertex per joint
        targets = {}
        for pos, i in enumerate(order):
            targets[i] = (polygon[pos], polygon[(pos + 1) % k])
        sides = {i: -1.0 for i in order}  # bodies outward = right of ccw edges

    placed: list[np.ndarray] = [None] * k  # type: ignore[list-item]
    for i in order:
        g = parts[i]
        entry, exit_ = entry_vertex_of[i], exit_vertex_of[i]
        target_gap = float(np.hypot(*(targets[i][1] - targets[i][0])))
        g = _preflex(g, [(entry, exit_, target_gap)], opts)
        placed[i] = _place_two_ports(
            g.vertices, entry, exit_, targets[i][0], targets[i][1], sides[i]
        )
    return placed


def _closed_polygon(sides: list[float]) -> np.ndarray:
    """Vertices of a counterclockwise closed polygon with the given side lengths.

    Three sides use the direct triangle; more sides use the polygon inscribed
    in a circle (side i subtends central angle 2 asin(d_i / 2R); the radius
    solving "angles sum to a full turn" is found by bisection).  Raises on
    infeasible side lists, e.g. one side longer than the rest combined.
    """
    d = [float(x) for x in sides]
    if min(d) <= 0:
        raise RealizationFailedError("degenerate port gap in cycle layout")
    if 2 * max(d) >= sum(d):
        raise RealizationFailedError(
            f"cycle cannot close: side {max(d):.6g} is at least the sum of the others"
        )
    if len(d) == 3:
        x = (d[0] ** 2 + d[2] ** 2 - d[1] ** 2) / (2 * d[0])
        y_sq = d[2] ** 2 - x**2
        if y_sq <= 0:
            raise RealizationFailedError("triangle layout degenerate")
        return np.array([[0.0, 0.0], [d[0], 0.0], [x, math.sqrt(y_sq)]])

    def half_angle_sum(radius: float) -> float:
        return sum(math.asin(min(1.0, s / (2 * radius))) for s in d) - math.pi

    lo = max(d) / 2
    if half_angle_sum(lo * (1 + 1e-15)) < 0:
        # circumcenter would fall outside the polygon; not needed for the
        # compositions this library builds
        raise RealizationFailedError("cycle layout unsupported for these proportions")
    hi = sum(d)
    while half_angle_sum(hi) > 0:
        hi *= 2
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if half_angle_sum(mid) > 0:
            lo = mid
        else:
            hi = mid
    radius = 0.5 * (lo + hi)
    angles = np.cumsum([0.0] + [2 * math.asin(min(1.0, s / (2 * radius))) for s in d[:-1]])
    return radius * np.column_stack([np.cos(angles), np.sin(angles)])


def _place_two_ports(
    coords: np.ndarray,
    entry: int,
    exit_: int,
    target_entry: np.ndarray,
    target_exit: np.ndarray,
    body_side: float,
) -> np.ndarray:
    """Rigidly map a part so its ports land on (or straddle) their targets.

    The direction entry->exit is aligned with the target direction and the
    midpoints are matched, which is the exact two-point map when the gaps
    agree.  ``body_side`` (+1 left / -1 right of the directed target segment)
    says where the part's body belongs; the part is pre-reflected across its
    own port line when needed.
    """
    p_entry, p_exit = coords[entry], coords[exit_]
    side = _body_side(coords, p_entry, p_exit)
    if side * body_side < 0:
        coords = _reflect_across(coords, p_entry, p_exit)
        p_entry, p_exit = coords[entry], coords[exit_]
    source_mid = (p_entry + p_exit) / 2
    target_mid = (target_entry + target_exit) / 2
    angle = math.atan2(*(target_exit - target_entry)[::-1]) - math.atan2(
        *(p_exit - p_entry)[::-1]
    )
    rot = np.array(
        [[math.cos(angle), -math.sin(angle)], [math.sin(angle), math.cos(angle)]]
    )
    return (coords - source_mid) @ rot.T + target_mid


def _body_side(coords: np.ndarray, p: np.ndarray, q: np.ndarray) -> float:
    """Which side of the directed line p->q the body mass sits on (+1 left)."""
    d = q - p
    rel = coords - p
    return float(np.sign(np.sum(d[0] * rel[:, 1] - d[1] * rel[:, 0])))


def _reflect_across(coords: np.ndarray, p: np.ndarray, q: np.ndarray) -> np.ndarray:
    u = (q - p) / np.hypot(*(q - p))
    rel = coords - p
    along = (rel @ u)[:, None] * u
    return p + 2 * along - rel


# -- chain layout -------------------------------------------------------------


def _spacer_port_pairs(g: EmbeddedGraph) -> tuple[tuple[int, int], tuple[int, int]]:
    """Group a 5-vertex spacer's four ports into its two facing pairs.

    The spacer is two triangles sharing a hub vertex; deleting the hub leaves
    one two-port component per triangle, and each facing pair takes one port
    from each triangle (the pairing minimizing the within-pair distances).
    """
    deg = g.degrees()
    ports = degree2_vertices(g)
    hubs = [int(i) for i in np.nonzero(deg == 4)[0]]
    if g.vertex_count != 5 or g.edge_count != 6 or len(ports) != 4 or len(hubs) != 1:
        raise PlanError("interior chain parts must be the 5-vertex two-triangle spacer")
    hub = hubs[0]
    components: list[set[int]] = []
    remaining = set(range(g.vertex_count)) - {hub}
    adjacency = {i: set() for i in remaining}
    for u, v in g.edges:
        if u != hub and v != hub:
            adjacency[u].add(v)
            adjacency[v].add(u)
    while remaining:
        stack = [remaining.pop()]
        comp = {stack[0]}
        while stack:
            for nb in adjacency[stack.pop()]:
                if nb in remaining:
                    remaining.remove(nb)
                    comp.add(nb)
                    stack.append(nb)
        components.append(comp)
    if len(components) != 2 or any(len(c) != 2 for c in components):
        raise PlanError("spacer does not split into two port pairs around its hub")
    (p1, p2), (q1, q2) = (sorted(c) for c in components)

    def dist(i: int, j: int) -> float:
        return float(np.hypot(*(g.vertices[i] - g.vertices[j])))

    if dist(p1, q1) + dist(p2, q2) <= dist(p1, q2) + dist(p2, q1):
        pairs = ((p1, q1), (p2, q2))
    else:
        pairs = ((p1, q2), (p2, q1))
    # deterministic pair order: by midpoint along the axis between pair midpoints
    mid0 = (g.vertices[pairs[0][0]] + g.vertices[pairs[0][1]]) / 2
    mid1 = (g.vertices[pairs[1][0]] + g.vertices[pairs[1][1]]) / 2
    if tuple(mid0) > tuple(mid1):
        pairs = (pairs[1], pairs[0])
    return pairs


def _layout_chain(
    parts: list[EmbeddedGraph],
    idents: list[tuple[int, int, int, int]],
    opts: RefineOptions,
) -> list[np.ndarray]:
    """Place end parts and spacers along a horizontal spine."""
    k = len(parts)
    port_counts = [0] * k
    neighbor_idents: dict[tuple[int, int], list[tuple[int, int]]] = {}
    for a, va, b, vb in idents:
        port_counts[a] += 1
        port_counts[b] += 1
        neighbor_idents.setdefault((a, b), []).append((va, vb))
        neighbor_idents.setdefault((b, a), []).append((vb, va))
    ends = [i for i, c in enumerate(port_counts) if c == 2]
    mids = [i for i, c in enumerate(port_counts) if c == 4]
    if len(ends) != 2 or len(ends) + len(mids) != k:
        raise RealizationFailedError("unsupported plan topology (not a two-ended chain)")

    # order the parts end-to-end following double identifications
    order = [ends[0]]
    while True:
        current = order[-1]
        nexts = {
            b
            for (a, b), pairs in neighbor_idents.items()
            if a == current and len(pairs) == 2 and b not in order
        }
        if not nexts:
            break
        if len(nexts) != 1:
            raise RealizationFailedError("unsupported plan topology (branched chain)")
        order.append(nexts.pop())
    if len(order) != k or order[-1] != ends[1]:
        raise RealizationFailedError("unsupported plan topology (chain does not span parts)")
    for t in range(k - 1):
        if len(neighbor_idents.get((order[t], order[t + 1]), [])) != 2:
            raise RealizationFailedError("chain neighbors must share exactly two joints")
    for i in mids:
        _spacer_port_pairs(parts[i])  # raises PlanError on unsupported interior parts

    def pair_gap(i: int, facing_next: bool) -> float:
        g = parts[i]
        if port_counts[i] == 2:
            a, b = degree2_vertices(g)
            return float(np.hypot(*(g.vertices[a] - g.vertices[b])))
        pairs = _spacer_port_pairs(g)
        pair = pairs[1] if facing_next else pairs[0]
        return float(np.hypot(*(g.vertices[pair[0]] - g.vertices[pair[1]])))

    # joint t sits between order[t] and order[t+1]
    heights = [
        (pair_gap(order[t], True) + pair_gap(order[t + 1], False)) / 2
        for t in range(k - 1)
    ]

    placed: list[np.ndarray] = [None] * k  # type: ignore[list-item]
    # top/bottom assignment per joint, as vertex ids of the *next* part
    x = 0.0
    assignment: dict[int, tuple[int, int]] = {}

    # left end: ports at (0, +-h/2), body toward -x
    left = order[0]
    (v_top, w_top), (v_bot, w_bot) = neighbor_idents[(left, order[1])]
    g = _preflex(parts[left], [(v_top, v_bot, heights[0])], opts)
    top = np.array([0.0, heights[0] / 2])
    bot = np.array([0.0, -heights[0] / 2])
    placed[left] = _place_two_ports(g.vertices, v_top, v_bot, top, bot, body_side=-1.0)
    assignment[0] = (w_top, w_bot)

    for t in range(1, k - 1):  # spacers
        i = order[t]
        g = parts[i]
        pairs = _spacer_port_pairs(g)
        entry_pair, exit_pair = pairs
        width = float(
            np.hypot(
                *(
                    (g.vertices[exit_pair[0]] + g.vertices[exit_pair[1]]) / 2
                    - (g.vertices[entry_pair[0]] + g.vertices[entry_pair[1]]) / 2
                )
            )
        )
        g = _preflex(
            g,
            [
                (entry_pair[0], entry_pair[1], heights[t - 1]),
                (exit_pair[0], exit_pair[1], heights[t]),
            ],
            opts,
        )
        entry_top, entry_bot = assignment[t - 1]
        if {entry_top, entry_bot} != set(entry_pair):
            entry_pair, exit_pair = exit_pair, entry_pair  # arrived facing the other way
        if {entry_top, entry_bot} != set(entry_pair):
            raise RealizationFailedError("chain joints do not respect spacer port pairs")
        src = np.array(
            [
                g.vertices[entry_top],
                g.vertices[entry_bot],
                (g.vertices[exit_pair[0]] + g.vertices[exit_pair[1]]) / 2,
            ]
        )
        dst = np.array(
            [
                [x, heights[t - 1] / 2],
                [x, -heights[t - 1] / 2],
                [x + width, 0.0],
            ]
        )
        placed[i] = _kabsch_place(g.vertices, src, dst)
        x += width
        # which exit port ended on top decides the next joint's assignment
        e0, e1 = exit_pair
        if placed[i][e0][1] < placed[i][e1][1]:
            e0, e1 = e1, e0
        partners = dict(neighbor_idents[(i, order[t + 1])])
        if e0 not in partners or e1 not in partners:
            raise RealizationFailedError("chain joints do not respect spacer port pairs")
        assignment[t] = (partners[e0], partners[e1])

    # right end: ports at (x, +-h/2), body toward +x
    right = order[-1]
    r_top, r_bot = assignment[k - 2]
    g = _preflex(parts[right], [(r_top, r_bot, heights[-1])], opts)
    top = np.array([x, heights[-1] / 2])
    bot = np.array([x, -heights[-1] / 2])
    placed[right] = _place_two_ports(g.vertices, r_top, r_bot, top, bot, body_side=+1.0)
    return placed


def _kabsch_place(coords: np.ndarray, src: np.ndarray, dst: np.ndarray) -> np.ndarray:
    """Best-fit rotation+translation mapping src points onto dst, applied to coords."""
    src_c = src - src.mean(axis=0)
    dst_c = dst - dst.mean(axis=0)
    dots = float(np.sum(src_c * dst_c))
    crosses = float(np.sum(src_c[:, 0] * dst_c[:, 1] - src_c[:, 1] * dst_c[:, 0]))
    angle = math.atan2(crosses, dots)
    rot = np.array(
        [[math.cos(angle), -math.sin(angle)], [math.sin(angle), math.cos(angle)]]
    )
    return (coords - src.mean(axis=0)) @ rot.T + dst.mean(axis=0)


# -- glue solving and merging -------------------------------------------------


def _solve_and_merge(
    plan: CompositionPlan,
    placed: list[np.ndarray],
    idents: list[tuple[int, int, int, int]],
    opts: RefineOptions,
) -> EmbeddedGraph:
    offsets = np.cumsum([0] + [len(c) for c in placed[:-1]])
    union_coords = np.concatenate(placed)
    union_edges: list[tuple[int, int]] = []
    for part_index, spec in enumerate(plan.parts):
        off = offsets[part_index]
        union_edges += [(u + off, v + off) for u, v in spec.graph.edges]
    pairs = [(offsets[a] + va, offsets[b] + vb) for a, va, b, vb in idents]

    union = EmbeddedGraph(union_coords, tuple(union_edges), 1.0, plan.name)
    result = refine(union, opts, coincidences=pairs)
    if not result.converged:
        raise RealizationFailedError(
            f"glue constraints did not close (edge residual "
            f"{result.final_residual:.3e}, joint gap {result.final_coincidence:.3e})"
        )

    merged = _merge_pairs(result.graph, pairs)
    expected = predicted_vertex_count(plan)
    if merged.vertex_count != expected:
        raise RealizationFailedError(
            f"merged graph has {merged.vertex_count} vertices, predicted {expected}"
        )
    return merged


def _merge_pairs(g: EmbeddedGraph, pairs: Sequence[tuple[int, int]]) -> EmbeddedGraph:
    v = g.vertex_count
    target = list(range(v))
    for i, j in pairs:  # each vertex is in at most one pair, so one hop suffices
        keep, drop = (i, j) if i < j else (j, i)
        target[drop] = keep
    new_index: dict[int, int] = {}
    coords: list[np.ndarray] = []
    for i in range(v):
        if target[i] == i:
            new_index[i] = len(coords)
            coords.append(g.vertices[i])
    # merged position: average the (already coincident) pair members
    position = np.array(coords)
    counts = np.ones(len(coords))
    for i, j in pairs:
        keep, drop = (i, j) if i < j else (j, i)
        position[new_index[keep]] += g.vertices[drop]
        counts[new_index[keep]] += 1
    position /= counts[:, None]
    edges = tuple(
        tuple(sorted((new_index[target[u]], new_index[target[v_]]))) for u, v_ in g.edges
    )
    return EmbeddedGraph(position, edges, 1.0, g.name)
