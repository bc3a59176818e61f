"""Nodal-set extraction: grids, domain counting, curve tracing, stability.

The sphere grid is equirectangular with explicit pole rows and a half-pixel
longitude offset (so basis-aligned nodal meridians never hit grid nodes
exactly).  The antipodal map is an exact index map, and fields of known
parity are sampled on the upper half only and mirrored, which makes the
antipodal audit bit-exact.

Domains (sign components) are counted by connected-component labeling with
longitude wrap and pole handling; nodal-set components are traced
independently by marching squares.  Saddle cells are resolved by evaluating
the field at the cell center, which removes the classic marching-squares
ambiguity and keeps the two counts consistent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import ndimage

TAU_INDETERMINATE = 1e-12
MIN_RESOLUTION = 64
MAX_RESOLUTION = 8192
INDETERMINATE_LIMIT = 0.01

_CROSS = np.array([[0, 1, 0], [1, 1, 1], [0, 1, 0]], dtype=int)


class ExtractionError(RuntimeError):
    """Inconsistent curve extraction (open chain on sphere, unmatched curve...)."""


class NonsingularityError(RuntimeError):
    """Too many indeterminate cells: the nodal set is likely singular."""


# ---------------------------------------------------------------------------
# sampling

@dataclass(eq=False)
class SampledGrid:
    surface: str            # "sphere" | "disc"
    resolution: int
    values: np.ndarray
    field: object
    theta: np.ndarray | None = None
    phi: np.ndarray | None = None
    xs: np.ndarray | None = None
    ys: np.ndarray | None = None
    mask: np.ndarray | None = None
    radius: float | None = None
    parity: int | None = None
    indeterminate_fraction: float = 0.0


def _sphere_axes(resolution: int) -> tuple[np.ndarray, np.ndarray]:
    ntheta = resolution // 2 + 1
    theta = np.linspace(0.0, math.pi, ntheta)
    phi = (np.arange(resolution) + 0.5) * (2.0 * math.pi / resolution)
    return theta, phi


def sample(field, surface: str, resolution: int, radius: float | None = None) -> SampledGrid:
    """Dense signed samples of a pure scalar field on sphere or disc."""
    if not (MIN_RESOLUTION <= resolution <= MAX_RESOLUTION):
        raise ValueError(f"resolution outside [{MIN_RESOLUTION}, {MAX_RESOLUTION}]")
    if surface == "sphere":
        if resolution % 4:
            raise ValueError("sphere resolution must be a multiple of 4")
        theta, phi = _sphere_axes(resolution)
        ntheta, nphi = len(theta), len(phi)
        half = nphi // 2
        parity = getattr(field, "parity", None)
        values = np.empty((ntheta, nphi))
        eq = (ntheta - 1) // 2
        if parity in (1, -1):
            tt, pp = np.meshgrid(theta[: eq + 1], phi, indexing="ij")
            upper = np.asarray(field(tt, pp), dtype=float)
            values[: eq + 1] = upper
            # equator row maps to itself under the antipodal index map
            values[eq, half:] = parity * values[eq, :half]
            for i in range(eq + 1, ntheta):
                values[i] = parity * np.roll(values[ntheta - 1 - i], half)
        else:
            tt, pp = np.meshgrid(theta, phi, indexing="ij")
            values = np.asarray(field(tt, pp), dtype=float)
        grid = SampledGrid("sphere", resolution, values, field, theta=theta, phi=phi, parity=parity)
    elif surface == "disc":
        if resolution % 2:
            raise ValueError("disc resolution must be even")
        r = radius if radius is not None else getattr(field, "radius", None)
        if r is None:
            raise ValueError("disc sampling needs a radius")
        xs = np.linspace(-r, r, resolution)
        ys = np.linspace(-r, r, resolution)
        xx, yy = np.meshgrid(xs, ys, indexing="ij")
        mask = xx * xx + yy * yy <= r * r
        values = np.zeros((resolution, resolution))
        values[mask] = np.asarray(field(xx[mask], yy[mask]), dtype=float)
        grid = SampledGrid("disc", resolution, values, field, xs=xs, ys=ys, mask=mask, radius=r)
    else:
        raise ValueError("surface must be 'sphere' or 'disc'")
    if np.any(np.isnan(grid.values)):
        raise ValueError("field produced NaN samples")
    grid.indeterminate_fraction = _indeterminate_fraction(grid)
    return grid


def _indeterminate_fraction(grid: SampledGrid) -> float:
    v = grid.values
    gmax = float(np.max(np.abs(v)))
    if gmax == 0.0:
        return 1.0
    tiny = np.abs(v) < TAU_INDETERMINATE * gmax
    if grid.surface == "disc":
        tiny = tiny & grid.mask
        a, b = tiny[:-1, :-1], tiny[:-1, 1:]
        c, d = tiny[1:, :-1], tiny[1:, 1:]
        valid = grid.mask[:-1, :-1] & grid.mask[:-1, 1:] & grid.mask[1:, :-1] & grid.mask[1:, 1:]
        cells = a & b & c & d & valid
        total = max(int(np.sum(valid)), 1)
    else:
        a = tiny[:-1, :]
        b = np.roll(tiny[:-1, :], -1, axis=1)
        c = np.roll(tiny[1:, :], -1, axis=1)
        d = tiny[1:, :]
        cells = a & b & c & d
        total = cells.size
    return float(np.sum(cells)) / total


# ---------------------------------------------------------------------------
# saddle resolution

def _corner_signs(grid: SampledGrid) -> np.ndarray:
    return np.where(grid.values > 0.0, 1, -1).astype(np.int8)


def _cell_corners(s: np.ndarray, wrap: bool):
    if wrap:
        tl = s[:-1, :]
        tr = np.roll(s[:-1, :], -1, axis=1)
        br = np.roll(s[1:, :], -1, axis=1)
        bl = s[1:, :]
    else:
        tl, tr = s[:-1, :-1], s[:-1, 1:]
        br, bl = s[1:, 1:], s[1:, :-1]
    return tl, tr, br, bl


def _saddle_center_values(grid: SampledGrid, cells_i: np.ndarray, cells_j: np.ndarray) -> np.ndarray:
    """Field values at saddle-cell centers; antipodally mirrored pairs share
    one evaluation so the resolution is exactly symmetric."""
    if grid.surface == "disc":
        cx = 0.5 * (grid.xs[cells_i] + grid.xs[cells_i + 1])
        cy = 0.5 * (grid.ys[cells_j] + grid.ys[cells_j + 1])
        return np.asarray(grid.field(cx, cy), dtype=float)
    theta, phi = grid.theta, grid.phi
    nphi = len(phi)
    half = nphi // 2
    ncell_rows = len(theta) - 1
    dphi = 2.0 * math.pi / nphi
    if grid.parity in (1, -1):
        lower = cells_i >= ncell_rows // 2
        src_i = np.where(lower, ncell_rows - 1 - cells_i, cells_i)
        src_j = np.where(lower, (cells_j + half) % nphi, cells_j)
        mult = np.where(lower, float(grid.parity), 1.0)
    else:
        src_i, src_j, mult = cells_i, cells_j, np.ones(len(cells_i))
    ct = 0.5 * (theta[src_i] + theta[src_i + 1])
    cp = phi[src_j] + 0.5 * dphi
    return mult * np.asarray(grid.field(ct, cp), dtype=float)


# ---------------------------------------------------------------------------
# domains

def _domain_labels(grid: SampledGrid, saddle_mode: str = "center"):
    """Connected sign components; returns (labels, count, signs_by_label).

    Label 0 marks excluded samples (exact zeros or masked points); positive
    labels are final domain ids after wrap/saddle merging.

    saddle_mode "center" joins the diagonal whose sign matches the field at
    the cell center (right for nonsingular fields, where the center sign is
    the sign of the region between the two passing curves).  saddle_mode
    "split" treats every saddle as a point contact and joins nothing, which
    is the correct reading for singular nodal sets whose curves genuinely
    cross (the checkerboard of an unperturbed basis harmonic).
    """
    if saddle_mode not in ("center", "split"):
        raise ValueError("saddle_mode must be 'center' or 'split'")
    v = grid.values
    pos = v > 0.0
    neg = v < 0.0
    if grid.surface == "disc":
        pos &= grid.mask
        neg &= grid.mask
    lab_pos, n_pos = ndimage.label(pos, structure=_CROSS)
    lab_neg, n_neg = ndimage.label(neg, structure=_CROSS)
    labels = lab_pos + np.where(neg, lab_neg + n_pos, 0)
    total = n_pos + n_neg

    parent = list(range(total + 1))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)

    wrap = grid.surface == "sphere"
    if wrap:
        left = labels[:, 0]
        right = labels[:, -1]
        same = (left > 0) & (right > 0) & (pos[:, 0] == pos[:, -1])
        for a, b in zip(left[same], right[same]):
            union(int(a), int(b))

    s = _corner_signs(grid)
    tl, tr, br, bl = _cell_corners(s, wrap)
    saddle = (tl == br) & (tr == bl) & (tl == -tr)
    if grid.surface == "disc":
        m = grid.mask
        saddle &= m[:-1, :-1] & m[:-1, 1:] & m[1:, 1:] & m[1:, :-1]
    si, sj = np.nonzero(saddle)
    if len(si) and saddle_mode == "center":
        vals = _saddle_center_values(grid, si, sj)
        gmax = float(np.max(np.abs(grid.values)))
        nphi = labels.shape[1]
        for i, j, cval in zip(si, sj, vals):
            if abs(cval) < TAU_INDETERMINATE * gmax:
                continue  # below noise: treat as a point contact
            jp = (j + 1) % nphi if wrap else j + 1
            if (1 if cval > 0.0 else -1) == s[i, j]:
                a, b = labels[i, j], labels[i + 1, jp]
            else:
                a, b = labels[i, jp], labels[i + 1, j]
            if a > 0 and b > 0:
                union(int(a), int(b))

    roots = sorted({find(l) for l in range(1, total + 1)})
    remap = {r: idx + 1 for idx, r in enumerate(roots)}
    flat = np.zeros(total + 1, dtype=int)
    for l in range(1, total + 1):
        flat[l] = remap[find(l)]
    final = flat[labels]
    signs = {}
    for l in range(1, total + 1):
        signs[flat[l]] = 1 if l <= n_pos else -1
    return final, len(roots), signs


def count_domains(grid: SampledGrid, saddle_mode: str = "center") -> tuple[int, list[int]]:
    """Number of nodal domains and the sign of each."""
    _, count, signs = _domain_labels(grid, saddle_mode)
    return count, [signs[i] for i in sorted(signs)]


# ---------------------------------------------------------------------------
# marching squares

@dataclass(eq=False)
class Curve:
    edges: list[int]
    closed: bool


def _edge_ids(grid: SampledGrid):
    if grid.surface == "sphere":
        nrow, ncol = grid.values.shape
    else:
        nrow, ncol = grid.values.shape
    n_h = nrow * ncol
    return nrow, ncol, n_h


def _segments(grid: SampledGrid):
    """Marching-squares segments as (edge_id, edge_id) pairs."""
    s = _corner_signs(grid)
    wrap = grid.surface == "sphere"
    nrow, ncol, n_h = _edge_ids(grid)
    tl, tr, br, bl = _cell_corners(s, wrap)
    if wrap:
        ci, cj = np.meshgrid(np.arange(nrow - 1), np.arange(ncol), indexing="ij")
        jp = (cj + 1) % ncol
    else:
        ci, cj = np.meshgrid(np.arange(nrow - 1), np.arange(ncol - 1), indexing="ij")
        jp = cj + 1

    e_top = ci * ncol + cj
    e_bot = (ci + 1) * ncol + cj
    e_left = n_h + ci * ncol + cj
    e_right = n_h + ci * ncol + jp

    c_t = tl != tr
    c_r = tr != br
    c_b = bl != br
    c_l = tl != bl
    if not wrap:
        m = grid.mask
        valid = m[:-1, :-1] & m[:-1, 1:] & m[1:, 1:] & m[1:, :-1]
        c_t, c_r, c_b, c_l = (c & valid for c in (c_t, c_r, c_b, c_l))

    ncross = c_t.astype(np.int8) + c_r + c_b + c_l
    seg_a, seg_b = [], []
    two = ncross == 2
    for ca, cb, ea, eb in (
        (c_t, c_r, e_top, e_right),
        (c_t, c_b, e_top, e_bot),
        (c_t, c_l, e_top, e_left),
        (c_r, c_b, e_right, e_bot),
        (c_r, c_l, e_right, e_left),
        (c_b, c_l, e_bot, e_left),
    ):
        m2 = two & ca & cb
        seg_a.append(ea[m2])
        seg_b.append(eb[m2])

    sad = ncross == 4
    si, sj = np.nonzero(sad)
    if len(si):
        vals = _saddle_center_values(grid, si, sj)
        cs = np.where(vals > 0.0, 1, -1).astype(np.int8)
        same_tl = cs == tl[si, sj]
        # center matches TL: TL-BR joined through the cell, curves pass
        # around the TR and BL corners; otherwise the other diagonal joins
        seg_a.append(e_top[si, sj])
        seg_b.append(np.where(same_tl, e_right[si, sj], e_left[si, sj]))
        seg_a.append(np.where(same_tl, e_bot[si, sj], e_right[si, sj]))
        seg_b.append(np.where(same_tl, e_left[si, sj], e_bot[si, sj]))

    a = np.concatenate(seg_a) if seg_a else np.empty(0, dtype=int)
    b = np.concatenate(seg_b) if seg_b else np.empty(0, dtype=int)
    return np.stack([a, b], axis=1).astype(np.int64)


def _link_curves(segments: np.ndarray, allow_open: bool) -> list[Curve]:
    seg_of_edge: dict[int, list[int]] = {}
    for sid, (a, b) in enumerate(segments):
        seg_of_edge.setdefault(int(a), []).append(sid)
        seg_of_edge.setdefault(int(b), []).append(sid)
    for e, sids in seg_of_edge.items():
        if len(sids) > 2:
            raise ExtractionError(f"edge {e} used by {len(sids)} segments")
        if len(sids) == 1 and not allow_open:
            raise ExtractionError("open chain on sphere")

    visited = np.zeros(len(segments), dtype=bool)
    curves: list[Curve] = []

    def walk(edge: int, sid: int) -> list[int]:
        path = [edge]
        while True:
            visited[sid] = True
            a, b = segments[sid]
            edge = int(b) if int(a) == edge else int(a)
            path.append(edge)
            nxt = [t for t in seg_of_edge[edge] if not visited[t]]
            if not nxt:
                return path
            sid = nxt[0]

    # open chains start at degree-1 edges
    for e in sorted(k for k, v in seg_of_edge.items() if len(v) == 1):
        sid = seg_of_edge[e][0]
        if visited[sid]:
            continue
        curves.append(Curve(walk(e, sid), closed=False))
    # remaining segments form cycles
    for sid in range(len(segments)):
        if visited[sid]:
            continue
        e = int(segments[sid][0])
        path = walk(e, sid)
        if path[0] != path[-1]:
            raise ExtractionError("cycle tracing did not close")
        curves.append(Curve(path[:-1], closed=True))
    return curves


def count_components(grid: SampledGrid) -> int:
    """Number of nodal-set components (closed curves; plus boundary chains on disc)."""
    return len(_link_curves(_segments(grid), allow_open=grid.surface == "disc"))


def _edge_endpoints(grid: SampledGrid, edge: int) -> tuple[tuple[int, int], tuple[int, int]]:
    nrow, ncol, n_h = _edge_ids(grid)
    if edge < n_h:
        i, j = divmod(edge, ncol)
        jp = (j + 1) % ncol if grid.surface == "sphere" else j + 1
        return (i, j), (i, jp)
    i, j = divmod(edge - n_h, ncol)
    return (i, j), (i + 1, j)


def curve_points(grid: SampledGrid, curve: Curve) -> np.ndarray:
    """Interpolated zero crossings along a curve, as (theta, phi) or (x, y) rows."""
    pts = np.empty((len(curve.edges), 2))
    v = grid.values
    for idx, e in enumerate(curve.edges):
        (i1, j1), (i2, j2) = _edge_endpoints(grid, e)
        va, vb = v[i1, j1], v[i2, j2]
        t = 0.5 if va == vb else va / (va - vb)
        t = min(max(t, 0.0), 1.0)
        if grid.surface == "sphere":
            a1, b1 = grid.theta[i1], grid.phi[j1]
            a2, b2 = grid.theta[i2], grid.phi[j2]
            if j2 < j1:  # wrapped horizontal edge
                b2 = b1 + (grid.phi[1] - grid.phi[0])
        else:
            a1, b1 = grid.xs[i1], grid.ys[j1]
            a2, b2 = grid.xs[i2], grid.ys[j2]
        pts[idx] = (a1 + t * (a2 - a1), b1 + t * (b2 - b1))
    return pts


# ---------------------------------------------------------------------------
# canonical tree codes

def canonical_tree_code(adj: dict) -> str:
    """Canonical form of an unrooted tree given as an adjacency dict."""
    nodes = list(adj)
    if not nodes:
        return ""
    if len(nodes) == 1:
        return "()"
    deg = {v: len(adj[v]) for v in nodes}
    alive = set(nodes)
    layer = [v for v in nodes if deg[v] <= 1]
    while len(alive) > 2:
        nxt = []
        for v in layer:
            alive.discard(v)
            for u in adj[v]:
                if u in alive:
                    deg[u] -= 1
                    if deg[u] == 1:
                        nxt.append(u)
        layer = nxt

    def rooted(v, parent) -> str:
        subs = sorted(rooted(u, v) for u in adj[v] if u != parent and u != _BLOCK)
        return "(" + "".join(subs) + ")"

    _BLOCK = object()
    centers = sorted(alive, key=str)
    if len(centers) == 1:
        return rooted(centers[0], None)
    a, b = centers
    return "(" + "".join(sorted([rooted(a, b), rooted(b, a)])) + ")"


def _point_in_polygon(pt: np.ndarray, poly: np.ndarray) -> bool:
    x, y = pt
    xs, ys = poly[:, 0], poly[:, 1]
    x2, y2 = np.roll(xs, -1), np.roll(ys, -1)
    with np.errstate(divide="ignore", invalid="ignore"):
        crosses = ((ys > y) != (y2 > y)) & (x < xs + (y - ys) * (x2 - xs) / (y2 - ys))
    return bool(np.sum(crosses) % 2)


# ---------------------------------------------------------------------------
# topology object

@dataclass(eq=False)
class NodalTopology:
    surface: str
    resolution: int
    components: int
    domains: int
    domain_signs: list[int]
    nesting_code: str
    odd_count: int | None
    pair_count: int | None
    stable: bool
    indeterminate_fraction: float
    euler_ok: bool
    grid: SampledGrid = field(repr=False, default=None)
    curves: list[Curve] = field(repr=False, default=None)
    domain_labels: np.ndarray = field(repr=False, default=None)
    curve_domain_pairs: list[tuple[int, int]] = field(repr=False, default=None)

    def report(self) -> dict:
        return {
            "schema": 1,
            "surface": self.surface,
            "resolution": self.resolution,
            "components": self.components,
            "domains": self.domains,
            "domain_signs": list(self.domain_signs),
            "nesting": self.nesting_code,
            "odd_count": self.odd_count,
            "pairs": self.pair_count,
            "stable": self.stable,
            "euler_ok": self.euler_ok,
            "indeterminate_fraction": self.indeterminate_fraction,
        }


def _sphere_region_tree(grid, curves, labels):
    """Region adjacency tree: one node per domain, one edge per curve."""
    pairs = []
    adj: dict[int, set[int]] = {}
    for curve in curves:
        pair = None
        for e in curve.edges:
            (i1, j1), (i2, j2) = _edge_endpoints(grid, e)
            a, b = int(labels[i1, j1]), int(labels[i2, j2])
            if a > 0 and b > 0 and a != b:
                pair = (a, b)
                break
        if pair is None:
            return None, None
        pairs.append(pair)
        adj.setdefault(pair[0], set()).add(pair[1])
        adj.setdefault(pair[1], set()).add(pair[0])
    n_edges = len(pairs)
    n_nodes = len(adj)
    if n_nodes != n_edges + 1 or len({frozenset(p) for p in pairs}) != n_edges:
        return None, pairs
    return {k: sorted(v) for k, v in adj.items()}, pairs


def _disc_nesting_code(grid, curves) -> str:
    closed = [c for c in curves if c.closed]
    polys = [curve_points(grid, c) for c in closed]
    n = len(closed)
    parent = [None] * n
    for i in range(n):
        best = None
        for j in range(n):
            if i != j and _point_in_polygon(polys[i][0], polys[j]):
                if best is None or _point_in_polygon(polys[j][0], polys[best]):
                    best = j
        parent[i] = best
    children: dict[int | None, list[int]] = {}
    for i, p in enumerate(parent):
        children.setdefault(p, []).append(i)

    def code(i) -> str:
        return "(" + "".join(sorted(code(c) for c in children.get(i, []))) + ")"

    return "".join(sorted(code(r) for r in children.get(None, [])))


def _antipodal_edge(edge: int, grid: SampledGrid) -> int:
    nrow, ncol, n_h = _edge_ids(grid)
    half = ncol // 2
    if edge < n_h:
        i, j = divmod(edge, ncol)
        return (nrow - 1 - i) * ncol + (j + half) % ncol
    i, j = divmod(edge - n_h, ncol)
    return n_h + (nrow - 2 - i) * ncol + (j + half) % ncol


def antipodal_classify(topology: NodalTopology, grid: SampledGrid | None = None) -> tuple[int, int]:
    """Match each curve with its antipodal image: (odd_count, oval_pair_count).

    The antipodal map permutes nodal domains exactly (domain labels exclude
    zero samples, and mirrored sampling makes the index map bit-exact), and
    on a nonsingular extraction each curve is the unique border of one domain
    pair; curves are therefore matched through the induced domain permutation.
    """
    grid = grid or topology.grid
    if grid.surface != "sphere":
        raise ValueError("antipodal classification needs a sphere grid")
    if topology.curve_domain_pairs is None:
        raise ExtractionError("antipodal classification needs a nonsingular region tree")
    labels = topology.domain_labels
    nrow, ncol = labels.shape
    half = ncol // 2
    flat = labels.ravel()
    uniq, first = np.unique(flat, return_index=True)
    perm: dict[int, int] = {}
    for lab, pos in zip(uniq, first):
        if lab == 0:
            continue
        i, j = divmod(int(pos), ncol)
        img = labels[nrow - 1 - i, (j + half) % ncol]
        if img == 0:
            raise ExtractionError("antipodal image of a domain sample is unlabeled")
        perm[int(lab)] = int(img)
    if sorted(perm.values()) != sorted(perm):
        raise ExtractionError("antipodal map does not permute the domains")
    pair_of = {frozenset(p): idx for idx, p in enumerate(topology.curve_domain_pairs)}
    odd = 0
    seen = set()
    pairs = 0
    for idx, (a, b) in enumerate(topology.curve_domain_pairs):
        image = frozenset((perm[a], perm[b]))
        j = pair_of.get(image)
        if j is None:
            raise ExtractionError("curve has no antipodal partner")
        if j == idx:
            odd += 1
        elif idx < j:
            if j in seen:
                raise ExtractionError("antipodal pairing is not an involution")
            seen.add(j)
            pairs += 1
    return odd, pairs


def extract_topology(grid: SampledGrid) -> NodalTopology:
    """Full single-resolution extraction (stability flag left False)."""
    labels, n_domains, signs = _domain_labels(grid)
    curves = _link_curves(_segments(grid), allow_open=grid.surface == "disc")
    n_components = len(curves)
    euler_ok = False
    odd = pair = None
    curve_pairs = None
    if grid.surface == "sphere":
        euler_ok = n_domains == n_components + 1
        adj, curve_pairs = _sphere_region_tree(grid, curves, labels)
        if adj is None:
            curve_pairs = None
            nesting = f"!{n_components}:{n_domains}"
        else:
            nesting = canonical_tree_code(adj)
    else:
        nesting = _disc_nesting_code(grid, curves)
        euler_ok = True
    topo = NodalTopology(
        surface=grid.surface,
        resolution=grid.resolution,
        components=n_components,
        domains=n_domains,
        domain_signs=[signs[i] for i in sorted(signs)],
        nesting_code=nesting,
        odd_count=odd,
        pair_count=pair,
        stable=False,
        indeterminate_fraction=grid.indeterminate_fraction,
        euler_ok=euler_ok,
        grid=grid,
        curves=curves,
        domain_labels=labels,
        curve_domain_pairs=curve_pairs,
    )
    if grid.surface == "sphere" and grid.parity in (1, -1) and curve_pairs is not None and euler_ok:
        topo.odd_count, topo.pair_count = antipodal_classify(topo, grid)
    return topo


def nesting_forest(topology: NodalTopology) -> str:
    """Canonical containment structure (region tree on sphere, forest on disc)."""
    return topology.nesting_code


def refine_until_stable(
    field,
    surface: str,
    start_resolution: int = 128,
    max_resolution: int = MAX_RESOLUTION,
    radius: float | None = None,
) -> NodalTopology:
    """Double resolution until two consecutive extractions agree.

    Agreement means equal (components, domains, nesting code) with an
    indeterminate fraction within tolerance; the returned topology carries
    stable=False if the cap is reached first.
    """
    prev = extract_topology(sample(field, surface, start_resolution, radius))
    res = start_resolution * 2
    while res <= max_resolution:
        cur = extract_topology(sample(field, surface, res, radius))
        agree = (
            (prev.components, prev.domains, prev.nesting_code)
            == (cur.components, cur.domains, cur.nesting_code)
            and cur.indeterminate_fraction <= INDETERMINATE_LIMIT
        )
        if agree:
            cur.stable = True
            return cur
        prev = cur
        res *= 2
    return prev


def topologies_equal(a: NodalTopology, b: NodalTopology, antipodal_aware: bool = False) -> bool:
    """Equivalence of extracted curve systems (region trees up to isomorphism).

    With antipodal_aware=True the odd/pair classification must match too; the
    plain comparison ignores it.
    """
    base = (a.components, a.domains, a.nesting_code) == (b.components, b.domains, b.nesting_code)
    if not antipodal_aware:
        return base
    return base and (a.odd_count, a.pair_count) == (b.odd_count, b.pair_count)
