"""The specific objects under certification: Grassmann graphs over GF(q), the
vertex split A / B / D induced by a fixed hyperplane, the polarity-paired
switching partition, the twisted Grassmann graph, the geometric and
pseudo-geometric designs, their block graphs, and the explicit vertex maps
whose isomorphism claims the certifier checks edge by edge.

Conventions (fixed for reproducibility):
  - V = GF(q)^(2e+1); the hyperplane H is the span of the first 2e coordinates.
  - Vertex order of every constructed graph is the canonical subspace order.
  - Design blocks are identified by their sorted point-index tuples; the
    geometric design lists blocks in the canonical order of their generating
    subspaces, the distorted design lists blocks sorted by point set.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .errors import DomainError, ParameterError
from .gf import FieldContext, make_field
from .graph import (
    Graph,
    SwitchingPartition,
    check_equitable,
    mask_of,
)
from .subspace import (
    DEFAULT_ENUM_BUDGET,
    Polarity,
    Subspace,
    apply_polarity,
    decode_vector,
    enumerate_subspaces,
    gaussian_binomial,
    make_polarity,
    mask_contains,
    normalize_point,
    span,
    vector_mask,
)


@dataclass(frozen=True)
class Parameters:
    """Certified parameter pair (q, e); ambient dimension n = 2e+1."""

    q: int
    e: int

    def __post_init__(self):
        make_field(self.q)  # raises on bad q
        if self.e < 1:
            raise ParameterError(f"need e >= 1, got e={self.e}")

    @property
    def n(self) -> int:
        return 2 * self.e + 1

    @property
    def ctx(self) -> FieldContext:
        return make_field(self.q)

    @property
    def vertex_count(self) -> int:
        return gaussian_binomial(self.n, self.e + 1, self.q)


def grassmann(n: int, k: int, q: int, budget: int = DEFAULT_ENUM_BUDGET) -> Graph:
    """Grassmann graph J_q(n,k): k-subspaces of GF(q)^n, adjacent when the
    intersection has dimension k-1."""
    if not 1 <= k <= n - 1:
        raise ParameterError(f"need 1 <= k <= n-1, got k={k}, n={n}")
    ctx = make_field(q)
    verts = enumerate_subspaces(ctx, n, k, budget)
    return _graph_by_intersection_count(verts, q ** (k - 1))


def _graph_by_intersection_count(verts: list[Subspace], target_vectors: int) -> Graph:
    """Graph on subspaces, adjacent when |W1 cap W2| (as vector sets) hits target."""
    masks = [vector_mask(w) for w in verts]
    nv = len(verts)
    adj = [0] * nv
    for i in range(nv):
        mi = masks[i]
        for j in range(i + 1, nv):
            if (mi & masks[j]).bit_count() == target_vectors:
                adj[i] |= 1 << j
                adj[j] |= 1 << i
    return Graph(verts, adj)


def _in_hyperplane(W: Subspace) -> bool:
    last = W.ambient - 1
    return all(row[last] == 0 for row in W.basis)


@lru_cache(maxsize=None)
def _all_vertices(params: Parameters) -> tuple[Subspace, ...]:
    return tuple(enumerate_subspaces(params.ctx, params.n, params.e + 1))


@lru_cache(maxsize=None)
def canonical_grassmann(params: Parameters) -> Graph:
    """J_q(2e+1, e+1) with the canonical vertex order."""
    return _graph_by_intersection_count(list(_all_vertices(params)), params.q**params.e)


@lru_cache(maxsize=None)
def _h_subspaces(params: Parameters, k: int) -> tuple[Subspace, ...]:
    """k-subspaces of the hyperplane H, embedded in ambient 2e+1 (last coord 0)."""
    ctx = params.ctx
    small = enumerate_subspaces(ctx, 2 * params.e, k)
    return tuple(
        sorted(
            Subspace(ctx, params.n, tuple(tuple(r) + (0,) for r in s.basis)) for s in small
        )
    )


def split_A_B(params: Parameters) -> tuple[list[Subspace], list[Subspace], list[Subspace]]:
    """(A, B, D): A = (e+1)-subspaces not inside H, D = those inside H,
    B = (e-1)-subspaces of H.  All in canonical order, ambient 2e+1."""
    A = []
    D = []
    for W in _all_vertices(params):
        (D if _in_hyperplane(W) else A).append(W)
    B = list(_h_subspaces(params, params.e - 1))
    return A, B, D


def intersect_hyperplane(W: Subspace) -> Subspace:
    """W cap H for the coordinate hyperplane H (last coordinate zero)."""
    ctx = W.ctx
    last = W.ambient - 1
    rows = [list(r) for r in W.basis]
    pivot_row = next((r for r in rows if r[last] != 0), None)
    if pivot_row is None:
        return W
    inv = ctx.inv(pivot_row[last])
    reduced = []
    for r in rows:
        if r is pivot_row:
            continue
        if r[last] != 0:
            f = ctx.mul(r[last], inv)
            r = [ctx.sub(x, ctx.mul(f, y)) for x, y in zip(r, pivot_row)]
        reduced.append(r)
    return span(ctx, reduced, W.ambient)


@dataclass
class PartitionInfo:
    """Switching partition: cells C_U u C_sigma(U), exempt class D.

    Cell and exempt entries are vertex indices into the canonical order of
    canonical_grassmann(params).
    """

    partition: SwitchingPartition
    cells_by_U: dict  # U -> tuple of C_U vertex indices
    pairs: list  # (U, sigma(U)) with U <= sigma(U); U == sigma(U) for isotropic cells
    d_indices: tuple

    def cell_size_histogram(self) -> dict:
        hist: dict[int, int] = {}
        for c in self.partition.cells:
            hist[len(c)] = hist.get(len(c), 0) + 1
        return hist


def switching_partition(params: Parameters, sigma: Polarity) -> PartitionInfo:
    """The polarity-paired partition: one cell per unordered pair {U, sigma(U)} over the
    e-subspaces U of H, plus the exempt class D = (e+1)-subspaces inside H."""
    verts = _all_vertices(params)
    cells_by_U: dict[Subspace, list[int]] = {}
    d_indices = []
    for i, W in enumerate(verts):
        if _in_hyperplane(W):
            d_indices.append(i)
        else:
            U = intersect_hyperplane(W)
            cells_by_U.setdefault(U, []).append(i)
    pairs = []
    cells = []
    for U in sorted(cells_by_U):
        sU = apply_polarity(sigma, U)
        if sU < U:
            continue  # handled when sU was visited
        pairs.append((U, sU))
        members = list(cells_by_U[U])
        if sU != U:
            members += cells_by_U[sU]
        cells.append(tuple(sorted(members)))
    partition = SwitchingPartition(tuple(cells), tuple(d_indices))
    return PartitionInfo(
        partition,
        {U: tuple(v) for U, v in cells_by_U.items()},
        pairs,
        tuple(d_indices),
    )


@lru_cache(maxsize=None)
def twisted_grassmann(params: Parameters) -> Graph:
    """Twisted Grassmann graph on A u B: A-A adjacency at intersection dim e,
    A-B by containment, B-B at intersection dim e-2.  Vertex order: A then B,
    each canonically sorted."""
    if params.e < 2:
        raise DomainError("twisted Grassmann graph needs e >= 2 (B degenerates at e=1)")
    q = params.q
    A, B, _ = split_A_B(params)
    labels = A + B
    na, nb = len(A), len(B)
    masks = [vector_mask(w) for w in labels]
    adj = [0] * (na + nb)
    for i in range(na + nb):
        mi = masks[i]
        for j in range(i + 1, na + nb):
            if j < na:  # A-A
                hit = (mi & masks[j]).bit_count() == q**params.e
            elif i < na:  # A-B: W_i contains W_j
                hit = mask_contains(mi, masks[j])
            else:  # B-B
                hit = (mi & masks[j]).bit_count() == q ** (params.e - 2)
            if hit:
                adj[i] |= 1 << j
                adj[j] |= 1 << i
    return Graph(labels, adj)


@dataclass
class Lemma1Report:
    """Comparison of the lifted quotient on A against q*m_ij + delta_ij (q^e - 1)."""

    ok: bool
    small_quotient: list[list[int]]
    lifted_quotient: list[list[int]]
    expected: list[list[int]]
    mismatches: list


def verify_lemma1_counts(
    params: Parameters, cells: list[list[Subspace]]
) -> Lemma1Report:
    """Lift an equitable partition of J_q(2e,e) on the e-subspaces of H to the
    subgraph on A and verify the lifted quotient entrywise."""
    q, e = params.q, params.e
    h_verts = list(_h_subspaces(params, e))
    h_index = {U: i for i, U in enumerate(h_verts)}
    small = _graph_by_intersection_count(h_verts, q ** (e - 1))
    idx_cells = [[h_index[U] for U in cell] for cell in cells]
    eq_small = check_equitable(small, idx_cells)
    if not eq_small.equitable:
        raise ParameterError(f"input partition is not equitable on J_q(2e,e): {eq_small.violation}")
    m = eq_small.quotient
    G = canonical_grassmann(params)
    groups: dict[Subspace, list[int]] = {}
    for i, W in enumerate(G.labels):
        if not _in_hyperplane(W):
            groups.setdefault(intersect_hyperplane(W), []).append(i)
    lifted = [[v for U in cell for v in groups[U]] for cell in cells]
    domain = [v for cell in lifted for v in cell]
    eq_lift = check_equitable(G, lifted, domain)
    if not eq_lift.equitable:
        return Lemma1Report(False, m, [], [], [("not equitable", eq_lift.violation)])
    t = len(cells)
    expected = [
        [q * m[i][j] + (q**e - 1 if i == j else 0) for j in range(t)] for i in range(t)
    ]
    mismatches = [
        (i, j, eq_lift.quotient[i][j], expected[i][j])
        for i in range(t)
        for j in range(t)
        if eq_lift.quotient[i][j] != expected[i][j]
    ]
    return Lemma1Report(not mismatches, m, eq_lift.quotient, expected, mismatches)


@dataclass
class TaReport:
    """Exhaustive check of the switched-adjacency rule on all A x D pairs."""

    ok: bool
    pairs_checked: int
    violations: list  # (W1 index, W2 index)


def verify_ta_rule(switched: Graph, params: Parameters, sigma: Polarity) -> TaReport:
    """After switching, W1 in C_U is adjacent to W2 in D exactly when W2
    contains sigma(U)."""
    info = switching_partition(params, sigma)
    d_masks = {i: vector_mask(switched.labels[i]) for i in info.d_indices}
    checked = 0
    violations = []
    for U, members in info.cells_by_U.items():
        sU_mask = vector_mask(apply_polarity(sigma, U))
        for w1 in members:
            row = switched.adj[w1]
            for w2, m2 in d_masks.items():
                expected = mask_contains(m2, sU_mask)
                actual = bool(row >> w2 & 1)
                checked += 1
                if expected != actual:
                    violations.append((w1, w2))
    return TaReport(not violations, checked, violations)


# ---------------------------------------------------------------------------
# Designs


@dataclass(frozen=True)
class Design:
    """Incidence structure on the projective points of V.

    points: canonical list of 1-subspaces of V; blocks: sorted point-index
    tuples.  Block identity is by point set.
    """

    params: Parameters
    points: tuple[Subspace, ...]
    blocks: tuple[tuple[int, ...], ...]
    provenance: str

    @property
    def v(self) -> int:
        return len(self.points)

    def block_masks(self) -> list[int]:
        return [mask_of(b) for b in self.blocks]

    def to_json(self) -> dict:
        return {
            "params": {"q": self.params.q, "e": self.params.e},
            "provenance": self.provenance,
            "points": [p.to_json() for p in self.points],
            "blocks": [list(b) for b in self.blocks],
        }


@lru_cache(maxsize=None)
def _point_index(params: Parameters) -> dict:
    """Map from the canonical representative vector of a projective point to its index."""
    pts = enumerate_subspaces(params.ctx, params.n, 1)
    return {p.basis[0]: i for i, p in enumerate(pts)}


@lru_cache(maxsize=None)
def _points_of(params: Parameters) -> tuple[Subspace, ...]:
    return tuple(enumerate_subspaces(params.ctx, params.n, 1))


def _block_of_subspace(params: Parameters, W: Subspace) -> tuple[int, ...]:
    """Sorted point indices of [W]."""
    ctx, q, n = params.ctx, params.q, params.n
    index = _point_index(params)
    reps = set()
    m = vector_mask(W) >> 1
    idx = 1
    while m:
        if m & 1:
            reps.add(normalize_point(ctx, decode_vector(idx, q, n)))
        m >>= 1
        idx += 1
    return tuple(sorted(index[r] for r in reps))


@lru_cache(maxsize=None)
def pg_design(params: Parameters) -> Design:
    """Geometric design: points [V], one block [W] per (e+1)-subspace W of V,
    blocks in the canonical order of their generating subspaces."""
    blocks = tuple(_block_of_subspace(params, W) for W in _all_vertices(params))
    if len(set(blocks)) != len(blocks):
        raise AssertionError("geometric design produced duplicate blocks")
    return Design(params, _points_of(params), blocks, "geometric")


def distorted_block(params: Parameters, sigma: Polarity, W: Subspace) -> tuple[int, ...]:
    """[sigma(W cap H)] u [W \\ H] for W in A, as sorted point indices."""
    ctx, q, n = params.ctx, params.q, params.n
    index = _point_index(params)
    U = intersect_hyperplane(W)
    pts = set(_block_of_subspace(params, apply_polarity(sigma, U)))
    m = vector_mask(W) >> 1
    idx = 1
    while m:
        if m & 1:
            vec = decode_vector(idx, q, n)
            if vec[n - 1] != 0:
                pts.add(index[normalize_point(ctx, vec)])
        m >>= 1
        idx += 1
    return tuple(sorted(pts))


@lru_cache(maxsize=None)
def jt_design(params: Parameters, sigma: Polarity) -> Design:
    """Distorted pseudo-geometric design: blocks A' u B', sorted by
    point set."""
    blocks = set()
    A, _, D = split_A_B(params)
    for W in A:
        blocks.add(distorted_block(params, sigma, W))
    for W in D:
        blocks.add(_block_of_subspace(params, W))
    if len(blocks) != len(A) + len(D):
        raise AssertionError("distorted design produced colliding blocks")
    return Design(params, _points_of(params), tuple(sorted(blocks)), "pseudo-geometric")


@dataclass
class DesignCheck:
    ok: bool
    v: int
    k: int | None
    lam: int | None
    violation: tuple | None = None


def verify_2_design(D: Design) -> DesignCheck:
    """Exhaustive 2-design check: every unordered point pair lies in the same
    number of blocks; returns (v, k, lambda) on success."""
    if not D.blocks:
        return DesignCheck(False, D.v, None, None, ("no blocks",))
    k = len(D.blocks[0])
    for b in D.blocks:
        if len(b) != k:
            return DesignCheck(False, D.v, None, None, ("non-uniform block size", len(b), k))
    pair_counts: dict[tuple[int, int], int] = {}
    for b in D.blocks:
        for x in range(len(b)):
            for y in range(x + 1, len(b)):
                pair_counts[(b[x], b[y])] = pair_counts.get((b[x], b[y]), 0) + 1
    total_pairs = D.v * (D.v - 1) // 2
    if len(pair_counts) != total_pairs:
        return DesignCheck(False, D.v, k, None, ("some point pair in no block",))
    values = set(pair_counts.values())
    if len(values) != 1:
        lo, hi = min(values), max(values)
        bad = next(p for p, c in pair_counts.items() if c == hi)
        return DesignCheck(False, D.v, k, None, ("pair count not constant", bad, lo, hi))
    return DesignCheck(True, D.v, k, values.pop(), None)


def design_lambda(params: Parameters) -> int:
    """Closed formula for lambda: (q^(2e-1)-1)...(q^(e+1)-1) / ((q^(e-1)-1)...(q-1)),
    which is the Gaussian binomial [2e-1 choose e-1]_q."""
    return gaussian_binomial(2 * params.e - 1, params.e - 1, params.q)


def block_intersection_sizes(D: Design) -> dict[int, int]:
    """Multiset of |B1 cap B2| over all unordered block pairs."""
    masks = D.block_masks()
    hist: dict[int, int] = {}
    for i in range(len(masks)):
        mi = masks[i]
        for j in range(i + 1, len(masks)):
            s = (mi & masks[j]).bit_count()
            hist[s] = hist.get(s, 0) + 1
    return hist


def block_graph(D: Design, s: int) -> Graph:
    """Graph on blocks, adjacent when the point-set intersection has size s."""
    masks = D.block_masks()
    nb = len(masks)
    adj = [0] * nb
    for i in range(nb):
        mi = masks[i]
        for j in range(i + 1, nb):
            if (mi & masks[j]).bit_count() == s:
                adj[i] |= 1 << j
                adj[j] |= 1 << i
    return Graph(D.blocks, adj)


# ---------------------------------------------------------------------------
# The isomorphism maps


@dataclass
class VertexMap:
    """A verified-by-construction bijection onto the blocks of the distorted design."""

    mapping: tuple[int, ...]  # source vertex index -> block index in jt_design
    injective: bool


def phi_map(params: Parameters, sigma: Polarity) -> VertexMap:
    """phi(W) = [sigma(W cap H)] u [W \\ H] for W in A, [W] otherwise, as a map
    from the canonical (e+1)-subspace order to jt_design block indices."""
    D = jt_design(params, sigma)
    block_index = {b: i for i, b in enumerate(D.blocks)}
    mapping = []
    for W in _all_vertices(params):
        if _in_hyperplane(W):
            b = _block_of_subspace(params, W)
        else:
            b = distorted_block(params, sigma, W)
        mapping.append(block_index[b])
    injective = len(set(mapping)) == len(mapping)
    return VertexMap(tuple(mapping), injective)


def psi_map(params: Parameters, sigma: Polarity) -> VertexMap:
    """Candidate isomorphism twisted_grassmann -> block graph of jt_design:
    W in A goes to its distorted block, B in B goes to [sigma(B)].

    The map is a conjectured realization; callers must confirm it with
    check_isomorphism."""
    D = jt_design(params, sigma)
    block_index = {b: i for i, b in enumerate(D.blocks)}
    A, B, _ = split_A_B(params)
    mapping = []
    for W in A:
        mapping.append(block_index[distorted_block(params, sigma, W)])
    for Bsub in B:
        img = apply_polarity(sigma, Bsub)
        mapping.append(block_index[_block_of_subspace(params, img)])
    injective = len(set(mapping)) == len(mapping)
    return VertexMap(tuple(mapping), injective)


def standard_polarity(params: Parameters) -> Polarity:
    return make_polarity(params.ctx, params.e)
