"""Chord diagrams, antipodal gluing, embedded forests, and realization search.

Chord diagrams model nonsingular planar harmonic zero sets: non-crossing
perfect matchings of 2n boundary points placed at the roots of unity.
Gluing a diagram to its centrally symmetric copy along the boundary yields
a curve system on the sphere; embedded forests generalize diagrams to zero
sets with even-degree vertices and carry the exact-rational edge labeling
and the alternating orientation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import nodal
from .nodal import canonical_tree_code


class SingularZeroSetError(RuntimeError):
    """The sampled polynomial zero set is singular or unstable on this window."""


class WindowError(RuntimeError):
    """No sampling window reproduced the expected boundary crossing count."""


# ---------------------------------------------------------------------------
# chord diagrams

@dataclass(frozen=True)
class ChordDiagram:
    """Non-crossing perfect matching of 2n boundary points (an involution)."""

    pairing: tuple[int, ...]

    def __post_init__(self):
        p = self.pairing
        m = len(p)
        if m == 0 or m % 2:
            raise ValueError("pairing must have even positive length")
        for i, j in enumerate(p):
            if not (0 <= j < m) or j == i or p[j] != i:
                raise ValueError("pairing must be a fixed-point-free involution")
        for a in range(m):
            b = p[a]
            if b < a:
                continue
            for c in range(a + 1, b):
                d = p[c]
                if not (a < d <= b):
                    raise ValueError("pairing has crossing chords")

    @property
    def n(self) -> int:
        return len(self.pairing) // 2

    def chords(self) -> list[tuple[int, int]]:
        return [(i, j) for i, j in enumerate(self.pairing) if i < j]

    def rotated(self, r: int) -> tuple[int, ...]:
        m = len(self.pairing)
        return tuple((self.pairing[(i + r) % m] - r) % m for i in range(m))

    def canonical(self) -> tuple[int, ...]:
        """Minimal rotation of the matching encoding (diagram equivalence)."""
        return min(self.rotated(r) for r in range(len(self.pairing)))

    def text(self) -> str:
        return ",".join(f"{i}-{j}" for i, j in self.chords())


def diagram_from_text(line: str) -> ChordDiagram:
    pairs = [tuple(int(v) for v in part.split("-")) for part in line.strip().split(",")]
    size = 2 * len(pairs)
    pairing = [-1] * size
    for i, j in pairs:
        pairing[i], pairing[j] = j, i
    return ChordDiagram(tuple(pairing))


def enumerate_diagrams(n: int) -> list[ChordDiagram]:
    """All non-crossing perfect matchings of 2n points (Catalan many)."""
    if not (1 <= n <= 8):
        raise ValueError("enumeration supported for 1 <= n <= 8")

    def rec(points: list[int]) -> list[list[tuple[int, int]]]:
        if not points:
            return [[]]
        out = []
        first = points[0]
        for idx in range(1, len(points), 2):
            inside = points[1:idx]
            outside = points[idx + 1 :]
            for left in rec(inside):
                for right in rec(outside):
                    out.append([(first, points[idx])] + left + right)
        return out

    diagrams = []
    for chords in rec(list(range(2 * n))):
        pairing = [-1] * (2 * n)
        for i, j in chords:
            pairing[i], pairing[j] = j, i
        diagrams.append(ChordDiagram(tuple(pairing)))
    return diagrams


def random_noncrossing_matching(n: int, rng: np.random.Generator) -> ChordDiagram:
    def rec(points: list[int], out: list[tuple[int, int]]):
        if not points:
            return
        idx = 1 + 2 * int(rng.integers(0, len(points) // 2))
        out.append((points[0], points[idx]))
        rec(points[1:idx], out)
        rec(points[idx + 1 :], out)

    chords: list[tuple[int, int]] = []
    rec(list(range(2 * n)), chords)
    pairing = [-1] * (2 * n)
    for i, j in chords:
        pairing[i], pairing[j] = j, i
    return ChordDiagram(tuple(pairing))


# ---------------------------------------------------------------------------
# antipodal gluing

@dataclass(frozen=True)
class GluedCurveSystem:
    components: int
    chord_counts: tuple[int, ...]  # chords traversed per closed curve
    regions: int
    region_tree_code: str


def _matching_faces(pairing: tuple[int, ...]):
    """Innermost enclosing chord per boundary gap, and each chord's parent.

    Faces of the chord arrangement in the disc are identified by their
    innermost enclosing chord (None for the outer face).
    """
    m = len(pairing)
    stack: list[int] = []
    face_of_gap: list[int | None] = [None] * m
    parent: dict[int, int | None] = {}
    for i in range(m):
        j = pairing[i]
        if j > i:
            parent[i] = stack[-1] if stack else None
            stack.append(i)
        else:
            stack.pop()
        face_of_gap[i] = stack[-1] if stack else None
    return face_of_gap, parent


def glue_antipodal(diagram: ChordDiagram) -> GluedCurveSystem:
    """Close the diagram with its centrally symmetric copy along the boundary.

    Boundary point i of the disc is identified with boundary point i of the
    antipodal copy, whose chords are the originals shifted by n.  Traversal
    alternates chords of the two copies; the faces of both copies merge
    across the boundary gaps into the sphere regions.
    """
    p1 = diagram.pairing
    m = len(p1)
    n = diagram.n
    p2 = tuple((p1[(i - n) % m] + n) % m for i in range(m))

    # closed curves: orbits of the step (disc, point) -> (other disc, mate);
    # every curve produces two orbits (the two traversal directions)
    visited = [[False, False] for _ in range(m)]
    orbits: list[list[tuple[int, int]]] = []
    for start in range(m):
        for disc in (0, 1):
            if visited[start][disc]:
                continue
            walk = []
            d, pt = disc, start
            while not visited[pt][d]:
                visited[pt][d] = True
                walk.append((d, pt))
                pt = (p1 if d == 0 else p2)[pt]
                d = 1 - d
            orbits.append(walk)
    unique: list[list[tuple[int, int]]] = []
    seen: set[frozenset] = set()
    for walk in orbits:
        mirror = frozenset((1 - d, pt) for d, pt in walk)
        if frozenset(walk) in seen or mirror in seen:
            continue
        seen.add(frozenset(walk))
        unique.append(walk)

    f1, parent1 = _matching_faces(p1)
    f2, parent2 = _matching_faces(p2)

    # union upper and lower faces across every boundary gap
    faces: dict[tuple[int, object], int] = {}
    for disc, fog in ((0, f1), (1, f2)):
        for fc in set(fog) | {None}:
            faces.setdefault((disc, fc), len(faces))
    parent_uf = list(range(len(faces)))

    def find(a: int) -> int:
        while parent_uf[a] != a:
            parent_uf[a] = parent_uf[parent_uf[a]]
            a = parent_uf[a]
        return a

    def union(a: int, b: int) -> None:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent_uf[max(ra, rb)] = min(ra, rb)

    for g in range(m):
        union(faces[(0, f1[g])], faces[(1, f2[g])])

    def chord_regions(disc: int, i: int) -> tuple[int, int]:
        par = (parent1 if disc == 0 else parent2)[i]
        inner = find(faces[(disc, i)])
        outer = find(faces[(disc, par)])
        return inner, outer

    curve_pairs = []
    chord_counts = []
    for walk in unique:
        pairs = set()
        for d, pt in walk:  # one state per chord traversed
            mate = (p1 if d == 0 else p2)[pt]
            pairs.add(frozenset(chord_regions(d, min(pt, mate))))
        if len(pairs) != 1:
            raise RuntimeError("glued curve does not separate a single region pair")
        curve_pairs.append(tuple(sorted(next(iter(pairs)))))
        chord_counts.append(len(walk))

    region_roots = sorted({find(i) for i in faces.values()})
    if len(region_roots) != len(unique) + 1:
        raise RuntimeError("glued region count does not match curve count")
    adj: dict[int, list[int]] = {r: [] for r in region_roots}
    for a, b in curve_pairs:
        adj[a].append(b)
        adj[b].append(a)
    return GluedCurveSystem(
        components=len(unique),
        chord_counts=tuple(sorted(chord_counts)),
        regions=len(region_roots),
        region_tree_code=canonical_tree_code(adj),
    )


# ---------------------------------------------------------------------------
# embedded forests

@dataclass
class EmbeddedForest:
    """Properly embedded plane forest, leaves at infinity, even internal degrees.

    Edges are dart pairs (darts 2e and 2e+1); each dart is attached to an
    internal vertex or to infinity.  `rotation[v]` lists darts CCW around v;
    `boundary` lists the infinity darts in CCW order at infinity.
    """

    rotation: list[list[int]] = field(default_factory=list)
    boundary: list[int] = field(default_factory=list)
    dart_vertex: dict[int, int] = field(default_factory=dict)  # dart -> vertex; absent = infinity
    edge_count: int = 0

    @classmethod
    def from_matching(cls, diagram: ChordDiagram) -> "EmbeddedForest":
        forest = cls()
        m = len(diagram.pairing)
        slot_dart = [-1] * m
        for i, j in diagram.chords():
            e = forest.edge_count
            forest.edge_count += 1
            slot_dart[i] = 2 * e
            slot_dart[j] = 2 * e + 1
        forest.boundary = list(slot_dart)
        return forest

    # -- basic structure ----------------------------------------------------

    def edges(self) -> list[int]:
        return list(range(self.edge_count))

    def dart_attachment(self, dart: int):
        return self.dart_vertex.get(dart)  # None = infinity

    def n_leaves(self) -> int:
        return len(self.boundary)

    def tree_of_edge(self) -> list[int]:
        """Connected component index per edge."""
        parent = list(range(self.edge_count))

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for darts in self.rotation:
            anchor = darts[0] >> 1
            for d in darts[1:]:
                ra, rb = find(anchor), find(d >> 1)
                if ra != rb:
                    parent[max(ra, rb)] = min(ra, rb)
        return [find(e) for e in range(self.edge_count)]

    def validate(self) -> None:
        for v, darts in enumerate(self.rotation):
            if len(darts) % 2:
                raise ValueError(f"internal vertex {v} has odd degree {len(darts)}")
            if len(darts) < 2:
                raise ValueError(f"internal vertex {v} has degree < 2")
        attached = set(self.boundary) | set(self.dart_vertex)
        if attached != set(range(2 * self.edge_count)):
            raise ValueError("every dart must attach to a vertex or to infinity")
        # genus check: rotation system + infinity word must embed in the plane
        v_count = len(self.rotation) + 1
        f_count = len(self._faces())
        if v_count - self.edge_count + f_count != 2:
            raise ValueError("rotation system and boundary word are not planar")

    # -- construction -------------------------------------------------------

    def split_ray(self, slot: int, k: int) -> int:
        """Replace the infinity tail of the ray at `slot` by 2k+1 new rays.

        Creates one new internal vertex of degree 2k+2; returns its id.
        """
        if not (0 <= slot < len(self.boundary)):
            raise ValueError("slot outside boundary word")
        if k < 0:
            raise ValueError("k must be >= 0")
        d = self.boundary[slot]
        vid = len(self.rotation)
        new_near, new_far = [], []
        for _ in range(2 * k + 1):
            e = self.edge_count
            self.edge_count += 1
            new_near.append(2 * e)
            new_far.append(2 * e + 1)
        self.dart_vertex[d] = vid
        for nd in new_near:
            self.dart_vertex[nd] = vid
        self.rotation.append([d] + new_near)
        self.boundary[slot : slot + 1] = new_far
        return vid

    # -- faces ---------------------------------------------------------------

    def _sigma(self) -> dict[int, int]:
        """Next dart CCW around the shared attachment point."""
        nxt: dict[int, int] = {}
        for darts in self.rotation:
            for i, d in enumerate(darts):
                nxt[d] = darts[(i + 1) % len(darts)]
        rev = list(reversed(self.boundary))
        for i, d in enumerate(rev):
            nxt[d] = rev[(i + 1) % len(rev)]
        return nxt

    def _faces(self) -> list[list[int]]:
        """Face walks as dart orbits of (rotation-next after crossing the edge)."""
        nxt = self._sigma()
        seen: set[int] = set()
        faces = []
        for d0 in range(2 * self.edge_count):
            if d0 in seen:
                continue
            walk = []
            d = d0
            while d not in seen:
                seen.add(d)
                walk.append(d)
                d = nxt[d ^ 1]
            faces.append(walk)
        return faces

    def faces(self) -> list[dict]:
        """Face descriptors: traversed edge sides and boundary-component count.

        The degree of a face is the number of connected components of its
        boundary, which equals the number of times its walk passes through
        infinity.
        """
        out = []
        for walk in self._faces():
            visits = sum(1 for d in walk if (d ^ 1) not in self.dart_vertex)
            out.append({"darts": walk, "edges": [d >> 1 for d in walk], "degree": visits})
        return out


def forest_to_text(forest: EmbeddedForest) -> str:
    """Parenthesis encoding per tree plus the cyclic leaf word at infinity."""

    def encode(dart: int) -> str:
        v = forest.dart_vertex.get(dart)
        if v is None:
            return "*"
        darts = forest.rotation[v]
        idx = darts.index(dart)
        rest = darts[idx + 1 :] + darts[:idx]
        return "(" + " ".join(encode(d ^ 1) for d in rest) + ")"

    trees = forest.tree_of_edge()
    roots: dict[int, int] = {}
    order: list[int] = []
    for d in forest.boundary:
        t = trees[d >> 1]
        if t not in roots:
            roots[t] = d
            order.append(t)
    lines = [f"tree {i}: {encode((roots[t]) ^ 1)}" for i, t in enumerate(order)]
    tree_index = {t: i for i, t in enumerate(order)}
    # leaf slots: for each boundary dart, its tree and leaf rank within the tree
    rank: dict[int, int] = {}
    counters: dict[int, int] = {}
    word = []
    for d in forest.boundary:
        t = trees[d >> 1]
        counters[t] = counters.get(t, 0)
        rank[d] = counters[t]
        counters[t] += 1
        word.append(f"{tree_index[t]}.{rank[d]}")
    lines.append("word: " + " ".join(word))
    return "\n".join(lines) + "\n"


def forest_from_text(text: str) -> EmbeddedForest:
    """Parse the encoding written by forest_to_text and validate planarity."""
    tree_lines = []
    word_line = None
    for raw in text.strip().splitlines():
        line = raw.strip()
        if not line:
            continue
        if line.startswith("word:"):
            word_line = line[len("word:") :].split()
        elif line.startswith("tree"):
            tree_lines.append(line.split(":", 1)[1].strip())
        else:
            raise ValueError(f"unrecognized forest line: {line!r}")
    if word_line is None:
        raise ValueError("forest text needs a 'word:' line")

    forest = EmbeddedForest()
    leaf_darts: list[list[int]] = []

    def parse(expr: str, pos: int, entry_dart: int, leaves: list[int]) -> int:
        # entry_dart is the far end of the edge arriving here
        if expr[pos] == "*":
            leaves.append(entry_dart)
            return pos + 1
        if expr[pos] != "(":
            raise ValueError(f"bad forest expression near {expr[pos:]!r}")
        vid = len(forest.rotation)
        forest.rotation.append([entry_dart])
        forest.dart_vertex[entry_dart] = vid
        pos += 1
        while expr[pos] != ")":
            if expr[pos] == " ":
                pos += 1
                continue
            e = forest.edge_count
            forest.edge_count += 1
            near, far = 2 * e, 2 * e + 1
            forest.dart_vertex[near] = vid
            forest.rotation[vid].append(near)
            pos = parse(expr, pos, far, leaves)
        return pos + 1

    for expr in tree_lines:
        e = forest.edge_count
        forest.edge_count += 1
        leaves: list[int] = [2 * e]  # leaf 0 of the tree: the root ray itself
        parse(expr, 0, 2 * e + 1, leaves)
        leaf_darts.append(leaves)

    boundary = []
    for token in word_line:
        t_str, r_str = token.split(".")
        boundary.append(leaf_darts[int(t_str)][int(r_str)])
    if sorted(boundary) != sorted(d for tree in leaf_darts for d in tree):
        raise ValueError("boundary word does not list every leaf exactly once")
    forest.boundary = boundary
    forest.validate()
    return forest


def random_forest(rng: np.random.Generator, max_edges: int = 20) -> EmbeddedForest:
    """Random embedded forest grown by splitting random rays."""
    m0 = int(rng.integers(1, 4))
    forest = EmbeddedForest.from_matching(random_noncrossing_matching(m0, rng))
    while forest.edge_count < max_edges:
        k = int(rng.integers(0, 3))
        if forest.edge_count + 2 * k + 1 > max_edges or rng.random() < 0.15:
            break
        forest.split_ray(int(rng.integers(0, len(forest.boundary))), k)
    return forest


# ---------------------------------------------------------------------------
# labeling

def label_forest(forest: EmbeddedForest) -> dict[int, Fraction]:
    """Positive edge labels (rational multiples of pi) with exact face sums.

    Derives, per tree, a contraction sequence down to a single free edge and
    replays it: the free edge carries 2*pi; splitting an edge labeled x into
    a stub plus 2k+1 new rays labels the stub x/2 and the rays x/2 and
    2*pi - x/2 alternately.
    """
    forest.validate()
    degree = {v: len(darts) for v, darts in enumerate(forest.rotation)}
    attach = dict(forest.dart_vertex)
    rotation = {v: list(darts) for v, darts in enumerate(forest.rotation)}
    alive = set(degree)
    events = []  # (edge split, [ray edges removed in cyclic order])

    def internal_neighbors(v: int) -> list[int]:
        out = []
        for d in rotation[v]:
            u = attach.get(d ^ 1)
            if u is not None and u in alive:
                out.append(u)
        return out

    while alive:
        v = next(u for u in sorted(alive) if len(internal_neighbors(u)) <= 1)
        darts = rotation[v]
        anchors = [d for d in darts if attach.get(d ^ 1) is not None and attach[d ^ 1] in alive]
        anchor = anchors[0] if anchors else darts[0]
        idx = darts.index(anchor)
        rays = darts[idx + 1 :] + darts[:idx]
        events.append((anchor >> 1, [d >> 1 for d in rays]))
        for d in rays:
            attach.pop(d, None)
        attach.pop(anchor, None)
        alive.discard(v)

    labels: dict[int, Fraction] = {}
    removed = {e for _, rays in events for e in rays}
    for e in forest.edges():
        if e not in removed:
            labels[e] = Fraction(2)  # in units of pi
    for e0, rays in reversed(events):
        x = labels[e0]
        labels[e0] = x / 2
        for i, e in enumerate(rays):
            labels[e] = x / 2 if i % 2 == 0 else 2 - x / 2
    return labels


def face_label_sums(forest: EmbeddedForest, labels: dict[int, Fraction]) -> list[tuple[Fraction, int]]:
    """(sum of labels over traversed edge sides, face degree) per face."""
    out = []
    for f in forest.faces():
        total = sum((labels[e] for e in f["edges"]), Fraction(0))
        out.append((total, f["degree"]))
    return out


# ---------------------------------------------------------------------------
# orientation

def _vertex_rule_ok(forest: EmbeddedForest, heads: dict[int, int]) -> bool:
    for v, darts in enumerate(forest.rotation):
        flags = [heads[d >> 1] == d for d in darts]  # incoming at v
        if any(flags[i] == flags[(i + 1) % len(flags)] for i in range(len(flags))):
            return False
    return True


def orient_forest(forest: EmbeddedForest) -> tuple[dict[int, int], dict[int, int]]:
    """The two alternating orientations (edge -> head dart), face-propagated.

    One tree is oriented by alternation around vertices; face walks force
    the handedness of every other tree they touch, and the result must still
    alternate around every vertex.  The second orientation is the global flip.
    """
    forest.validate()
    trees = forest.tree_of_edge()
    heads: dict[int, int] = {}

    def orient_tree_from(edge: int, head_dart: int) -> None:
        stack = [(edge, head_dart)]
        while stack:
            e, hd = stack.pop()
            if e in heads:
                if heads[e] != hd:
                    raise RuntimeError("conflicting orientation inside a tree")
                continue
            heads[e] = hd
            for d in (2 * e, 2 * e + 1):
                v = forest.dart_vertex.get(d)
                if v is None:
                    continue
                darts = forest.rotation[v]
                idx = darts.index(d)
                incoming = hd == d
                for step, d2 in enumerate(darts[idx + 1 :] + darts[:idx], start=1):
                    inc2 = incoming if step % 2 == 0 else not incoming
                    stack.append((d2 >> 1, d2 if inc2 else d2 ^ 1))

    first_tree = trees[0]
    seed_edge = trees.index(first_tree)
    orient_tree_from(seed_edge, 2 * seed_edge)

    # propagate handedness across faces: along a face walk the traversal
    # direction must agree with the orientation for all sides, or for none
    faces = forest._faces()
    pending = True
    while pending:
        pending = False
        for walk in faces:
            aligned = None
            for d in walk:
                e = d >> 1
                if e in heads:
                    aligned = heads[e] == (d ^ 1)
                    break
            if aligned is None:
                continue
            for d in walk:
                e = d >> 1
                want = (d ^ 1) if aligned else d
                if e not in heads:
                    orient_tree_from(e, want)
                    pending = True
                elif heads[e] != want:
                    raise RuntimeError("face walk is not coherently oriented")
    if len(heads) != forest.edge_count:
        raise RuntimeError("orientation propagation did not reach every tree")
    if not _vertex_rule_ok(forest, heads):
        raise RuntimeError("propagated orientation violates the vertex rule")
    flipped = {e: hd ^ 1 for e, hd in heads.items()}
    return heads, flipped


# ---------------------------------------------------------------------------
# planar zero-set topology

class _RePoly:
    """Re p(x + iy) for a monic polynomial, as a disc-samplable field."""

    def __init__(self, coeffs: tuple[complex, ...], radius: float):
        self.coeffs = tuple(complex(c) for c in coeffs)
        self.radius = radius

    def poly(self, z):
        acc = np.ones_like(z)
        for a in reversed(self.coeffs):
            acc = acc * z + a
        return acc

    def __call__(self, x, y):
        return self.poly(np.asarray(x) + 1j * np.asarray(y)).real


@dataclass(frozen=True)
class PlanarDiagram:
    diagram: ChordDiagram
    window_radius: float
    azimuths: tuple[float, ...]
    resolution: int


def _boundary_crossings(fld: _RePoly, radius: float) -> list[float]:
    psi = np.linspace(0.0, 2.0 * math.pi, 4096, endpoint=False)
    vals = fld.poly(radius * np.exp(1j * psi)).real
    nxt = np.roll(vals, -1)
    idx = np.nonzero(vals * nxt < 0.0)[0]
    out = []
    step = psi[1] - psi[0]
    for i in idx:
        a, b = psi[i], psi[i] + step
        fa = vals[i]
        for _ in range(60):
            mid = 0.5 * (a + b)
            fm = float(fld.poly(radius * np.exp(1j * mid)).real)
            if fa * fm <= 0.0:
                b = mid
            else:
                a, fa = mid, fm
        out.append(0.5 * (a + b))
    if np.any(vals == 0.0):
        raise SingularZeroSetError("boundary scan hit an exact zero")
    return out


def _chain_pairing(fld: _RePoly, radius: float, azimuths: list[float], resolution: int) -> tuple[int, ...]:
    grid = nodal.sample(fld, "disc", resolution, radius=radius)
    gmax = float(np.max(np.abs(grid.values)))
    if grid.indeterminate_fraction > 0.0 and gmax > 0.0:
        raise SingularZeroSetError("window contains a cell of near-zero values")
    curves = nodal._link_curves(nodal._segments(grid), allow_open=True)
    chains = [c for c in curves if not c.closed]
    if any(c.closed for c in curves):
        raise SingularZeroSetError("closed nodal curve extracted (zero set of Re p cannot have cycles)")
    if len(chains) != len(azimuths) // 2:
        raise SingularZeroSetError("chain count does not match boundary crossings")
    az = np.asarray(azimuths)
    gaps = np.diff(np.concatenate([az, [az[0] + 2 * math.pi]]))
    tol = float(np.min(gaps)) / 2.0
    pairing = [-1] * len(azimuths)
    used = [False] * len(azimuths)
    for chain in chains:
        pts = nodal.curve_points(grid, chain)
        ends = []
        for pt in (pts[0], pts[-1]):
            a = math.atan2(pt[1], pt[0]) % (2.0 * math.pi)
            dist = np.abs((az - a + math.pi) % (2.0 * math.pi) - math.pi)
            j = int(np.argmin(dist))
            if dist[j] > tol or used[j]:
                raise SingularZeroSetError("chain endpoint does not sit at a unique boundary crossing")
            used[j] = True
            ends.append(j)
        pairing[ends[0]], pairing[ends[1]] = ends[1], ends[0]
    return tuple(pairing)


def planar_zero_topology(coeffs, resolution: int = 512, window: float | None = None) -> PlanarDiagram:
    """Chord diagram of the zero set of Re p for a monic polynomial p.

    Samples Re p on a disc big enough that the boundary behaves like Re z^n
    (2n sign changes), traces the open nodal chains, and pairs the boundary
    crossings they connect.  The window grows up to x8 if the crossing count
    is wrong; the pairing must agree across one grid refinement.
    """
    coeffs = tuple(complex(c) for c in coeffs)
    n = len(coeffs)
    if not (1 <= n <= 8):
        raise ValueError("polynomial degree must be in [1, 8]")
    base = window if window is not None else max(2.0, 2.0 * (1.0 + max(abs(c) for c in coeffs)))
    for factor in (1.0, 2.0, 4.0, 8.0):
        radius = base * factor
        fld = _RePoly(coeffs, radius)
        azimuths = _boundary_crossings(fld, radius)
        if len(azimuths) == 2 * n:
            break
    else:
        raise WindowError(f"boundary crossing count never reached {2 * n}")
    pairing = _chain_pairing(fld, radius, azimuths, resolution)
    res = 2 * resolution
    while res <= nodal.MAX_RESOLUTION:
        pairing2 = _chain_pairing(fld, radius, azimuths, res)
        if pairing == pairing2:
            return PlanarDiagram(ChordDiagram(pairing), radius, tuple(azimuths), res)
        pairing = pairing2
        res *= 2
    raise SingularZeroSetError("chain pairing never stabilized under refinement")


# ---------------------------------------------------------------------------
# randomized realization of a target diagram

@dataclass(frozen=True)
class RealizationResult:
    found: bool
    target: tuple[int, ...]
    diagram: ChordDiagram | None
    coefficients: tuple[complex, ...] | None
    roots: tuple[complex, ...] | None
    lift_scale: float | None
    seed: int
    trials: int
    verified: bool
    best_distance: int


def diagram_distance(a: ChordDiagram, b: ChordDiagram) -> int:
    """Minimal Hamming distance between the matchings over boundary rotations."""
    m = len(a.pairing)
    pa = a.pairing
    return min(sum(pa[i] != rb[i] for i in range(m)) for rb in (b.rotated(r) for r in range(m)))


def _roots_to_coeffs(roots: np.ndarray) -> tuple[complex, ...]:
    poly = np.poly(roots)  # descending, leading 1
    return tuple(complex(c) for c in poly[:0:-1])


def realize_diagram_search(
    target: ChordDiagram,
    budget: int = 10_000,
    seed: int = 0,
    search_resolution: int = 128,
) -> RealizationResult:
    """Randomized search for a monic polynomial whose zero-set diagram is target.

    Simulated-annealing-style walk over root positions (jitter, conjugation,
    coefficient steps) accepting strict improvements, with random restarts.
    A hit is re-verified with the full refinement-checked extraction.
    """
    n = target.n
    if n > 5:
        raise ValueError("realization search supports degree <= 5")
    rng = np.random.default_rng(seed)
    target_key = target.canonical()

    def fast_diagram(coeffs) -> ChordDiagram | None:
        base = max(2.0, 2.0 * (1.0 + max(abs(c) for c in coeffs)))
        fld = _RePoly(coeffs, base)
        try:
            az = _boundary_crossings(fld, base)
            if len(az) != 2 * n:
                return None
            return ChordDiagram(_chain_pairing(fld, base, az, search_resolution))
        except (SingularZeroSetError, ValueError):
            return None

    def random_roots() -> np.ndarray:
        r = np.sqrt(rng.uniform(0.05, 1.0, n))
        a = rng.uniform(0.0, 2.0 * math.pi, n)
        return r * np.exp(1j * a)

    roots = random_roots()
    cur_obj = 10 * n
    best_obj = cur_obj
    trials = 0
    stale = 0
    while trials < budget:
        trials += 1
        move = rng.random()
        if move < 0.7:
            spread = max(float(np.std(roots)), 0.1)
            cand = roots + 0.1 * spread * (rng.normal(size=n) + 1j * rng.normal(size=n))
        elif move < 0.85 and n >= 2:
            cand = roots.copy()
            i = int(rng.integers(0, n))
            cand[i] = np.conj(cand[i])
        else:
            coeffs = np.array(_roots_to_coeffs(roots))
            coeffs += 0.05 * (rng.normal(size=n) + 1j * rng.normal(size=n))
            cand = np.roots(np.concatenate([[1.0], coeffs[::-1]]))
        coeffs = _roots_to_coeffs(cand)
        diag = fast_diagram(coeffs)
        obj = diagram_distance(diag, target) if diag is not None else 10 * n
        if obj == 0:
            try:
                full = planar_zero_topology(coeffs)
            except (SingularZeroSetError, WindowError):
                full = None
            if full is not None and full.diagram.canonical() == target_key:
                return RealizationResult(
                    True,
                    target.pairing,
                    full.diagram,
                    coeffs,
                    tuple(complex(r) for r in cand),
                    0.5 / full.window_radius,
                    seed,
                    trials,
                    True,
                    0,
                )
        if obj < cur_obj:
            roots, cur_obj, stale = cand, obj, 0
        else:
            stale += 1
        best_obj = min(best_obj, obj)
        if stale > 200:
            roots, cur_obj, stale = random_roots(), 10 * n, 0
    return RealizationResult(False, target.pairing, None, None, None, None, seed, trials, False, best_obj)
