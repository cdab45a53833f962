"""Right fusion modules over a fusion ring.

A module of rank r over a ring of rank n is a list of n nonnegative
integer r x r matrices, M[i][a][b] = multiplicity of m_b in m_a * x_i,
with the unit acting as the identity, transpose symmetry under duality,
associativity against the ring tensor, and connected support.

Dimension bookkeeping is exact throughout: for a valid module the matrix
T = sum_i dim(x_i) * M[i] equals the rank-one matrix (d_a * d_b) of module
dimension products, with every entry in Q(sqrt5).  The dimensions d_a
themselves may live in a quadratic extension (e.g. sqrt(1+d)); they are
represented by their exact squares T[a][a].
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import permutations

import numpy as np

from .arith import QuadNumber, QuadRoot
from .rings import FusionRing, ObjectVector, Grading, is_subring

Matrix = tuple[tuple[int, ...], ...]


class DimRecognitionError(ValueError):
    """Exact module dimension data could not be extracted."""


class FusionModule:
    """Immutable right fusion module; validate with `validate_module`."""

    def __init__(self, ring: FusionRing, mats) -> None:
        self.ring = ring
        self.mats: tuple[Matrix, ...] = tuple(
            tuple(tuple(int(v) for v in row) for row in m) for m in mats
        )
        if len(self.mats) != ring.rank:
            raise ValueError("need one action matrix per ring basis element")
        r = len(self.mats[0]) if self.mats else 0
        for m in self.mats:
            if len(m) != r or any(len(row) != r for row in m):
                raise ValueError("action matrices must be square of equal size")
        self.rank = r

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FusionModule):
            return NotImplemented
        return self.ring == other.ring and self.mats == other.mats

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"<FusionModule rank {self.rank} over {self.ring.name!r}>"

    @cached_property
    def mats_np(self) -> np.ndarray:
        return np.array(self.mats, dtype=np.int64)

    @cached_property
    def weighted_action(self) -> tuple[np.ndarray, np.ndarray]:
        """Integer pair (P, Q) with T = sum_i dim_i M[i] = (P + Q*sqrt5)/2."""
        u, v = _half_pairs(self.ring)
        M = self.mats_np
        P = np.tensordot(u, M, axes=1)
        Q = np.tensordot(v, M, axes=1)
        return P, Q

    @cached_property
    def dim_squares(self) -> tuple[QuadNumber, ...]:
        """Exact d_a**2 = T[a][a] for each module index."""
        P, Q = self.weighted_action
        return tuple(
            QuadNumber(Fraction(int(P[a, a]), 2), Fraction(int(Q[a, a]), 2))
            for a in range(self.rank)
        )

    @cached_property
    def canonical_key(self) -> tuple:
        return (self.rank, canonical_form(self))


def _half_pairs(ring: FusionRing) -> tuple[np.ndarray, np.ndarray]:
    """Dims as integer half-pairs 2*dim_i = u_i + v_i*sqrt5."""
    us, vs = [], []
    for x in ring.dims:
        ua, vb = 2 * x.a, 2 * x.b
        if ua.denominator != 1 or vb.denominator != 1:
            raise DimRecognitionError(
                f"ring {ring.name!r} has dimensions off the half-integer lattice"
            )
        us.append(int(ua))
        vs.append(int(vb))
    return np.array(us, dtype=np.int64), np.array(vs, dtype=np.int64)


def regular_module(ring: FusionRing) -> FusionModule:
    """Right multiplication of the ring on itself."""
    n = ring.rank
    mats = tuple(
        tuple(tuple(ring.N[a][i][b] for b in range(n)) for a in range(n))
        for i in range(n)
    )
    return FusionModule(ring, mats)


# ---------------------------------------------------------------------------
# validation


def validate_module(mod: FusionModule) -> str | None:
    """Check the four module axioms; None if ok, else the first violation."""
    ring = mod.ring
    n, r = ring.rank, mod.rank
    if r == 0:
        return "module has rank 0"
    M = mod.mats_np
    if (M < 0).any():
        i, a, b = map(int, np.argwhere(M < 0)[0])
        return f"negative entry M[{i}][{a}][{b}]"
    if not (M[ring.unit] == np.eye(r, dtype=np.int64)).all():
        return "unit does not act as the identity"
    for i in range(n):
        if not (M[ring.dual[i]] == M[i].T).all():
            return f"Frobenius reciprocity fails: M[dual({i})] != transpose(M[{i}])"
    N = ring.N_np
    lhs = np.einsum("iab,jbc->ijac", M, M)
    rhs = np.einsum("ijk,kac->ijac", N, M)
    if not (lhs == rhs).all():
        i, j, a, c = map(int, np.argwhere(lhs != rhs)[0])
        return (
            f"associativity fails for ring pair ({i},{j}) at matrix entry "
            f"({a},{c}): {int(lhs[i,j,a,c])} != {int(rhs[i,j,a,c])}"
        )
    if len(_components(M.sum(axis=0))) != 1:
        return "module is decomposable (support graph not connected)"
    return None


def _components(adj: np.ndarray) -> list[list[int]]:
    r = adj.shape[0]
    seen = [False] * r
    comps = []
    for s in range(r):
        if seen[s]:
            continue
        stack, comp = [s], []
        seen[s] = True
        while stack:
            a = stack.pop()
            comp.append(a)
            for b in range(r):
                if not seen[b] and (adj[a, b] or adj[b, a]):
                    seen[b] = True
                    stack.append(b)
        comps.append(sorted(comp))
    return comps


# ---------------------------------------------------------------------------
# dimension vectors


@dataclass(frozen=True)
class DimVector:
    """Exact module dimensions; entries are square roots of Q(sqrt5) values.

    Satisfies M[i] . values = dim_i . values for every ring index and
    sum_a values[a]**2 = global dimension of the ring, both verified
    exactly through the rank-one identity T = values . values^T.
    """

    values: tuple[QuadRoot, ...]

    def squares(self) -> tuple[QuadNumber, ...]:
        return tuple(v.square for v in self.values)

    def total_square(self) -> QuadNumber:
        out = QuadNumber(0)
        for v in self.values:
            out = out + v.square
        return out


def dim_vector(mod: FusionModule) -> DimVector:
    """The common Perron eigenvector of the action, exactly.

    T = sum_i dim_i M[i] is computed in Q(sqrt5) and verified to be the
    positive rank-one matrix (d_a d_b) with M[i] T = dim_i T for every i;
    the entries d_a are returned as exact square roots of the diagonal.
    Raises DimRecognitionError when the exact extraction fails (impossible
    for a module that passes validate_module).
    """
    ring = mod.ring
    r = mod.rank
    P, Q = mod.weighted_action
    # positivity of every entry of T = (P + Q*sqrt5)/2
    pos = _positive_mask(P, Q)
    if not pos.all():
        a, b = map(int, np.argwhere(~pos)[0])
        raise DimRecognitionError(f"T[{a}][{b}] is not positive")
    # rank one: T[a][b]^2 == T[a][a] T[b][b], coordinatewise over (1, sqrt5)
    Paa, Qaa = np.diag(P), np.diag(Q)
    lhs_rat = P * P + 5 * Q * Q
    lhs_irr = 2 * P * Q
    rhs_rat = np.outer(Paa, Paa) + 5 * np.outer(Qaa, Qaa)
    rhs_irr = np.outer(Paa, Qaa) + np.outer(Qaa, Paa)
    if not ((lhs_rat == rhs_rat).all() and (lhs_irr == rhs_irr).all()):
        raise DimRecognitionError("weighted action matrix is not rank one")
    # eigen identity M[i] T = dim_i T, exactly in integer half-pairs
    u, v = _half_pairs(ring)
    M = mod.mats_np
    for i in range(ring.rank):
        MP, MQ = M[i] @ P, M[i] @ Q
        if not (2 * MP == u[i] * P + 5 * v[i] * Q).all():
            raise DimRecognitionError(f"M[{i}] does not scale T by dim_{i}")
        if not (2 * MQ == u[i] * Q + v[i] * P).all():
            raise DimRecognitionError(f"M[{i}] does not scale T by dim_{i}")
    values = tuple(QuadRoot(q) for q in mod.dim_squares)
    vec = DimVector(values=values)
    if vec.total_square() != ring.global_dim:
        raise DimRecognitionError("dimension squares do not sum to the global dimension")
    return vec


def _positive_mask(P: np.ndarray, Q: np.ndarray) -> np.ndarray:
    """Exact sign > 0 of (P + Q*sqrt5)/2, vectorized."""
    both_nonneg = (P >= 0) & (Q >= 0) & ((P > 0) | (Q > 0))
    p_pos = (P > 0) & (Q < 0) & (P * P > 5 * Q * Q)
    q_pos = (P < 0) & (Q > 0) & (5 * Q * Q > P * P)
    return both_nonneg | p_pos | q_pos


# ---------------------------------------------------------------------------
# internal ends and algebra tables


def internal_end(mod: FusionModule, a: int) -> ObjectVector:
    """The diagonal of the action at one module index: end coefficients
    M[i][a][a]; unit coefficient 1, self-dual, dimension d_a**2."""
    coeffs = tuple(mod.mats[i][a][a] for i in range(mod.ring.rank))
    return ObjectVector(mod.ring, coeffs)


def algebra_table(mod: FusionModule) -> tuple[tuple[ObjectVector, int], ...]:
    """Internal ends grouped with multiplicities (the figure-style table)."""
    counts: dict[tuple[int, ...], int] = {}
    for a in range(mod.rank):
        c = internal_end(mod, a).coeffs
        counts[c] = counts.get(c, 0) + 1
    def sort_key(item):
        coeffs, _ = item
        d = ObjectVector(mod.ring, coeffs).dim()
        return (d.a, d.b, coeffs)
    items = sorted(counts.items(), key=sort_key)
    return tuple((ObjectVector(mod.ring, c), k) for c, k in items)


def table_signature(mod: FusionModule) -> tuple[tuple[tuple[int, ...], int], ...]:
    """Hashable form of the algebra table (coefficient tuples with counts)."""
    return tuple((ov.coeffs, k) for ov, k in algebra_table(mod))


# ---------------------------------------------------------------------------
# equivalence and canonical forms


def _index_classes(mod: FusionModule) -> tuple[int, ...]:
    """Permutation-invariant class id per module index (WL refinement)."""
    r = mod.rank
    n = mod.ring.rank
    mats = mod.mats
    sq = mod.dim_squares
    keys: list = [
        (
            (sq[a].a.numerator, sq[a].a.denominator, sq[a].b.numerator, sq[a].b.denominator),
            tuple(mats[i][a][a] for i in range(n)),
        )
        for a in range(r)
    ]
    ids = _relabel(keys)
    while True:
        sig = []
        for a in range(r):
            prof = sorted(
                (ids[b],)
                + tuple(mats[i][a][b] for i in range(n))
                + tuple(mats[i][b][a] for i in range(n))
                for b in range(r)
            )
            sig.append((ids[a], tuple(prof)))
        new = _relabel(sig)
        if new == ids:
            return ids
        ids = new


def _relabel(keys: list) -> tuple[int, ...]:
    order = {k: c for c, k in enumerate(sorted(set(keys)))}
    return tuple(order[k] for k in keys)


def canonical_form(mod: FusionModule) -> tuple:
    """Lexicographically minimal flattened matrices over index relabelings.

    Only permutations preserving the refined index classes can realize the
    minimum, so the search is restricted to those.
    """
    ids = _index_classes(mod)
    classes: dict[int, list[int]] = {}
    for a, c in enumerate(ids):
        classes.setdefault(c, []).append(a)
    blocks = [classes[c] for c in sorted(classes)]
    mats = mod.mats
    n, r = mod.ring.rank, mod.rank
    best: tuple | None = None
    for parts in _block_permutations(blocks):
        # new index t corresponds to original index order[t]
        order = [a for part in parts for a in part]
        flat = tuple(
            mats[i][order[a]][order[b]]
            for i in range(n)
            for a in range(r)
            for b in range(r)
        )
        if best is None or flat < best:
            best = flat
    assert best is not None
    return best


def _block_permutations(blocks: list[list[int]]):
    """All reorderings permuting each class block internally."""
    def rec(i: int, acc: list[list[int]]):
        if i == len(blocks):
            yield acc
            return
        for p in permutations(blocks[i]):
            yield from rec(i + 1, acc + [list(p)])
    yield from rec(0, [])


def modules_equivalent(
    K: FusionModule, L: FusionModule
) -> tuple[int, ...] | None:
    """A module-basis permutation carrying every M[i] of K to L, or None.

    perm[a] is the L-index of K-index a.  Pruned by dimension squares and
    index-class refinement; exhaustive within those classes.
    """
    if K.ring != L.ring or K.rank != L.rank:
        return None
    r = K.rank
    n = K.ring.rank
    ck, cl = _index_classes(K), _index_classes(L)
    if sorted(ck) != sorted(cl):
        return None
    cand = [[b for b in range(r) if cl[b] == ck[a]] for a in range(r)]
    order = sorted(range(r), key=lambda a: len(cand[a]))
    perm = [-1] * r
    used = [False] * r
    MK, ML = K.mats, L.mats

    def ok(a: int) -> bool:
        for b in range(r):
            if perm[b] < 0:
                continue
            for i in range(n):
                if MK[i][a][b] != ML[i][perm[a]][perm[b]]:
                    return False
                if MK[i][b][a] != ML[i][perm[b]][perm[a]]:
                    return False
        return True

    def place(pos: int) -> bool:
        if pos == r:
            return True
        a = order[pos]
        for b in cand[a]:
            if used[b]:
                continue
            perm[a] = b
            used[b] = True
            if ok(a) and place(pos + 1):
                return True
            used[b] = False
            perm[a] = -1
        return False

    if place(0):
        return tuple(perm)
    return None


# ---------------------------------------------------------------------------
# restriction and grading


def restrict_and_decompose(
    mod: FusionModule, sub: set[int] | frozenset[int]
) -> list[FusionModule]:
    """Restrict to a subring and split into connected components.

    Components are returned as validated modules over the subring, ordered
    by (rank, canonical form).
    """
    ring = mod.ring
    if not is_subring(ring, sub):
        raise ValueError("given indices do not form a subring")
    sub_sorted = sorted(sub)
    subring = _subring(ring, sub_sorted)
    adj = sum(mod.mats_np[i] for i in sub_sorted)
    out = []
    for comp in _components(adj):
        pos = {a: t for t, a in enumerate(comp)}
        mats = tuple(
            tuple(tuple(mod.mats[i][a][b] for b in comp) for a in comp)
            for i in sub_sorted
        )
        piece = FusionModule(subring, mats)
        report = validate_module(piece)
        if report is not None:
            raise AssertionError(f"restriction produced an invalid module: {report}")
        out.append(piece)
    out.sort(key=lambda m: m.canonical_key)
    return out


def _subring(ring: FusionRing, idx: list[int]) -> FusionRing:
    pos = {a: t for t, a in enumerate(idx)}
    labels = tuple(ring.labels[a] for a in idx)
    N = tuple(
        tuple(tuple(ring.N[i][j][k] for k in idx) for j in idx) for i in idx
    )
    return FusionRing(
        f"{ring.name}|{','.join(labels)}",
        labels,
        pos[ring.unit],
        tuple(pos[ring.dual[a]] for a in idx),
        N,
    )


def grade_module(
    mod: FusionModule, grading: Grading
) -> tuple[tuple[int, ...], ...] | None:
    """Labels of module indices by group elements, or None.

    M[i][a][b] > 0 forces label(b) = label(a) + degree(i); the labeling is
    unique up to a global shift, resolved by taking the lexicographically
    minimal label tuple.
    """
    r = mod.rank
    labels: list[tuple[int, ...] | None] = [None] * r
    labels[0] = grading.identity
    stack = [0]
    while stack:
        a = stack.pop()
        for i in range(mod.ring.rank):
            deg = grading.degree[i]
            for b in range(r):
                if mod.mats[i][a][b]:
                    want = grading.add(labels[a], deg)
                    if labels[b] is None:
                        labels[b] = want
                        stack.append(b)
                    elif labels[b] != want:
                        return None
                if mod.mats[i][b][a]:
                    want = grading.add(labels[a], grading.neg(deg))
                    if labels[b] is None:
                        labels[b] = want
                        stack.append(b)
                    elif labels[b] != want:
                        return None
    if any(x is None for x in labels):
        return None  # disconnected; no canonical shift
    best = None
    for g in _all_elements(grading):
        shifted = tuple(grading.add(x, g) for x in labels)  # type: ignore[arg-type]
        if best is None or shifted < best:
            best = shifted
    return best


def _all_elements(grading: Grading):
    from itertools import product

    return [tuple(t) for t in product(*(range(f) for f in grading.factors))]
