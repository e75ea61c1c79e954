"""Canonical subspaces of GF(q)^n and the symplectic polarity of a hyperplane.

A subspace is identified with its reduced-row-echelon basis, so equality,
hashing and ordering are purely structural.  Vector sets are cached as bitmask
integers over the q^n ambient vectors, which makes intersection dimensions,
containment tests and projective point sets cheap enough for exhaustive
verification at the certified parameters.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache, total_ordering
from itertools import combinations, product
from math import prod

from .errors import BudgetExceededError, DomainError, ParameterError
from .gf import FieldContext, Matrix, rank_of_rows, rref_rows

DEFAULT_ENUM_BUDGET = 10**7


@total_ordering
@dataclass(frozen=True)
class Subspace:
    """A dim-k subspace of GF(q)^ambient, held as its canonical RREF basis (no zero rows)."""

    ctx: FieldContext
    ambient: int
    basis: tuple[tuple[int, ...], ...]

    @property
    def dim(self) -> int:
        return len(self.basis)

    def sort_key(self) -> tuple:
        return tuple(x for row in self.basis for x in row)

    def __lt__(self, other: "Subspace") -> bool:
        return (self.dim, self.sort_key()) < (other.dim, other.sort_key())

    def __repr__(self):
        return f"Subspace(q={self.ctx.q}, n={self.ambient}, basis={self.basis})"

    def to_json(self) -> list[list[int]]:
        return [list(r) for r in self.basis]


@dataclass(frozen=True)
class PointSet:
    """Sorted, duplicate-free set of projective points (1-dim subspaces) of GF(q)^ambient."""

    ambient: int
    points: tuple[Subspace, ...]

    def __len__(self):
        return len(self.points)


def canonicalize(vectors: Matrix) -> Subspace:
    """Subspace spanned by the rows of `vectors`, in canonical RREF form."""
    rows, rank, _ = rref_rows(vectors.ctx, [list(r) for r in vectors.entries], vectors.ncols)
    return Subspace(vectors.ctx, vectors.ncols, tuple(tuple(r) for r in rows[:rank]))


def span(ctx: FieldContext, rows: list[list[int]], ambient: int) -> Subspace:
    """Same as canonicalize but from raw rows."""
    rr, rank, _ = rref_rows(ctx, rows, ambient)
    return Subspace(ctx, ambient, tuple(tuple(r) for r in rr[:rank]))


def _check_compatible(U: Subspace, W: Subspace) -> None:
    if U.ctx != W.ctx or U.ambient != W.ambient:
        raise ParameterError(
            f"subspace mismatch: GF({U.ctx.q})^{U.ambient} vs GF({W.ctx.q})^{W.ambient}"
        )


def dim_intersection(U: Subspace, W: Subspace) -> int:
    """dim(U cap W) = dim U + dim W - rank(stacked bases)."""
    _check_compatible(U, W)
    stacked = [list(r) for r in U.basis] + [list(r) for r in W.basis]
    return U.dim + W.dim - rank_of_rows(U.ctx, stacked, U.ambient)


def subspace_sum(U: Subspace, W: Subspace) -> Subspace:
    _check_compatible(U, W)
    return span(U.ctx, [list(r) for r in U.basis] + [list(r) for r in W.basis], U.ambient)


def contains(U: Subspace, W: Subspace) -> bool:
    """Whether W is contained in U."""
    _check_compatible(U, W)
    if W.dim > U.dim:
        return False
    stacked = [list(r) for r in U.basis] + [list(r) for r in W.basis]
    return rank_of_rows(U.ctx, stacked, U.ambient) == U.dim


def gaussian_binomial(n: int, k: int, q: int) -> int:
    """Number of k-dim subspaces of an n-dim space over GF(q); exact integers."""
    if not 0 <= k <= n:
        return 0
    num = prod(q ** (n - i) - 1 for i in range(k))
    den = prod(q ** (i + 1) - 1 for i in range(k))
    assert num % den == 0
    return num // den


def enumerate_subspaces(
    ctx: FieldContext, n: int, k: int, budget: int = DEFAULT_ENUM_BUDGET
) -> list[Subspace]:
    """All k-dim subspaces of GF(q)^n in canonical order.

    Generation runs per pivot-column pattern (each pattern emits exactly the
    RREF matrices with those pivots, so no deduplication is needed), then the
    result is sorted by the canonical basis key.
    """
    if not 0 <= k <= n:
        raise ParameterError(f"need 0 <= k <= n, got k={k}, n={n}")
    count = gaussian_binomial(n, k, ctx.q)
    if count > budget:
        raise BudgetExceededError(
            f"enumerating {count} subspaces (n={n}, k={k}, q={ctx.q}) exceeds budget {budget}"
        )
    if k == 0:
        return [Subspace(ctx, n, ())]
    q = ctx.q
    out: list[Subspace] = []
    for pivots in combinations(range(n), k):
        pivot_set = set(pivots)
        free_pos = [
            (i, j) for i in range(k) for j in range(pivots[i] + 1, n) if j not in pivot_set
        ]
        for values in product(range(q), repeat=len(free_pos)):
            rows = [[0] * n for _ in range(k)]
            for i, p in enumerate(pivots):
                rows[i][p] = 1
            for (i, j), v in zip(free_pos, values):
                rows[i][j] = v
            out.append(Subspace(ctx, n, tuple(tuple(r) for r in rows)))
    assert len(out) == count
    out.sort()
    return out


def encode_vector(vec: tuple[int, ...] | list[int], q: int) -> int:
    idx = 0
    for c in reversed(vec):
        idx = idx * q + c
    return idx


def decode_vector(idx: int, q: int, n: int) -> tuple[int, ...]:
    out = []
    for _ in range(n):
        out.append(idx % q)
        idx //= q
    return tuple(out)


@lru_cache(maxsize=None)
def vector_mask(S: Subspace) -> int:
    """Bitmask over the q^ambient vector indices marking every vector of S (zero included)."""
    ctx, q, n = S.ctx, S.ctx.q, S.ambient
    mask = 0
    for coeffs in product(range(q), repeat=S.dim):
        vec = [0] * n
        for c, row in zip(coeffs, S.basis):
            if c:
                for j in range(n):
                    if row[j]:
                        vec[j] = ctx.add(vec[j], ctx.mul(c, row[j]))
        mask |= 1 << encode_vector(vec, q)
    return mask


def dim_from_vector_count(count: int, q: int) -> int:
    """Inverse of count = q^d; count must be an exact power of q."""
    d = 0
    while count > 1:
        assert count % q == 0
        count //= q
        d += 1
    return d


def mask_contains(U_mask: int, W_mask: int) -> bool:
    """Whether the vector set W is contained in the vector set U."""
    return W_mask & ~U_mask == 0


def normalize_point(ctx: FieldContext, vec: tuple[int, ...]) -> tuple[int, ...]:
    """Canonical representative of the projective point through vec: leading coefficient 1."""
    lead = next((x for x in vec if x != 0), None)
    if lead is None:
        raise ParameterError("zero vector spans no projective point")
    if lead == 1:
        return tuple(vec)
    inv = ctx.inv(lead)
    return tuple(ctx.mul(inv, x) for x in vec)


def projective_points(W: Subspace) -> PointSet:
    """All 1-dim subspaces of W, sorted canonically."""
    ctx, q, n = W.ctx, W.ctx.q, W.ambient
    reps = set()
    mask = vector_mask(W)
    m = mask >> 1  # skip zero vector
    idx = 1
    while m:
        if m & 1:
            reps.add(normalize_point(ctx, decode_vector(idx, q, n)))
        m >>= 1
        idx += 1
    pts = sorted(Subspace(ctx, n, (rep,)) for rep in reps)
    return PointSet(n, tuple(pts))


@dataclass(frozen=True)
class Polarity:
    """Symplectic polarity of the hyperplane H = span(e_1..e_2e) of GF(q)^(2e+1).

    Maps a subspace U of H to its orthogonal complement within H under the
    alternating nondegenerate Gram matrix `gram` (2e x 2e).  Accepts subspaces
    given in ambient 2e (bare H coordinates) or ambient 2e+1 (embedded, last
    coordinate zero).
    """

    ctx: FieldContext
    e: int
    gram: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        n = 2 * self.e
        if len(self.gram) != n or any(len(r) != n for r in self.gram):
            raise ParameterError(f"Gram matrix must be {n}x{n}")
        for i in range(n):
            if self.gram[i][i] != 0:
                raise ParameterError("alternating form requires zero diagonal")
            for j in range(n):
                if self.gram[j][i] != self.ctx.neg(self.gram[i][j]):
                    raise ParameterError("Gram matrix must be skew-symmetric")
        if rank_of_rows(self.ctx, [list(r) for r in self.gram], n) != n:
            raise ParameterError("Gram matrix must be nondegenerate")


def make_polarity(ctx: FieldContext, e: int) -> Polarity:
    """Standard symplectic polarity with block Gram matrix [[0, I_e], [-I_e, 0]]."""
    if e < 1:
        raise ParameterError(f"need e >= 1, got {e}")
    n = 2 * e
    neg1 = ctx.neg(1)
    gram = [[0] * n for _ in range(n)]
    for i in range(e):
        gram[i][e + i] = 1
        gram[e + i][i] = neg1
    return Polarity(ctx, e, tuple(tuple(r) for r in gram))


def make_polarity_from_gram(ctx: FieldContext, e: int, gram) -> Polarity:
    """Polarity from an explicit alternating nondegenerate Gram matrix (validated)."""
    return Polarity(ctx, e, tuple(tuple(r) for r in gram))


def nullspace(ctx: FieldContext, rows: list[list[int]], ncols: int) -> Subspace:
    """Canonical right nullspace {x : rows . x = 0} as a subspace of GF(q)^ncols."""
    rr, rank, pivots = rref_rows(ctx, rows, ncols)
    free = [j for j in range(ncols) if j not in pivots]
    basis = []
    for f in free:
        vec = [0] * ncols
        vec[f] = 1
        for i, p in enumerate(pivots):
            vec[p] = ctx.neg(rr[i][f])
        basis.append(vec)
    return span(ctx, basis, ncols)


def apply_polarity(sigma: Polarity, U: Subspace) -> Subspace:
    """Orthogonal complement of U within H; dim = 2e - dim U; same ambient as U."""
    ctx, e = sigma.ctx, sigma.e
    n = 2 * e
    if U.ctx != ctx:
        raise ParameterError("field mismatch between polarity and subspace")
    if U.ambient == n:
        embedded = False
        rows = [list(r) for r in U.basis]
    elif U.ambient == n + 1:
        if any(r[n] != 0 for r in U.basis):
            raise DomainError("subspace is not contained in the hyperplane H")
        embedded = True
        rows = [list(r[:n]) for r in U.basis]
    else:
        raise ParameterError(f"ambient {U.ambient} incompatible with e={e}")
    # constraint matrix: (basis . gram) x^T = 0
    constraints = []
    for row in rows:
        c = [0] * n
        for j in range(n):
            acc = 0
            for i in range(n):
                if row[i] and sigma.gram[i][j]:
                    acc = ctx.add(acc, ctx.mul(row[i], sigma.gram[i][j]))
            c[j] = acc
        constraints.append(c)
    perp = nullspace(ctx, constraints, n)
    if not embedded:
        return perp
    return Subspace(ctx, n + 1, tuple(tuple(r) + (0,) for r in perp.basis))


def is_totally_isotropic(sigma: Polarity, U: Subspace) -> bool:
    """Whether U is contained in its polar image (fixed points of sigma at dim e)."""
    return contains(apply_polarity(sigma, U), U)
