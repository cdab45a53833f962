"""Exhaustive enumeration of fusion modules over a fusion ring.

Two-phase search.  Phase one enumerates the possible multisets of squared
module dimensions: each d_a**2 is the dimension of an internal-end shaped
vector (unit coefficient 1, self-dual, nonnegative), the squares sum to
the global dimension, and all pairwise ratios d_a**2 / d_b**2 are squares
in Q(sqrt5).  The ratio condition is forced for every valid module: the
weighted action sum T = sum_i dim_i M[i] is symmetric, satisfies
T @ T = D * T by associativity and Frobenius reciprocity, and is
irreducible by indecomposability, so T is the positive rank-one matrix
(d_a d_b) with entries in Q(sqrt5).

Phase two, per multiset: invertible basis elements act by permutation
matrices (dimension 1 forces it), enumerated as right actions of the
invertible group; the remaining matrices are generated by a small set of
searched generator matrices, filled row by row against the exact linear
equations sum_b M[t][a][b] d_b = dim_t d_a (two rational equations via
the in-field ratios d_b / d_ref), with transpose symmetry, row-orbit
propagation through relations x_g' x_t = x_t x_g, and incremental bounds
from the product x_t x_dual(t).  Leaves derive all remaining action
matrices by associativity and keep exactly the candidates that pass full
module validation with the prescribed dimension squares.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from itertools import permutations, product

import numpy as np

from .arith import QuadNumber, QuadRoot, sqrt_in_field
from .modules import FusionModule, canonical_form, validate_module
from .rings import FusionRing

log = logging.getLogger(__name__)


@dataclass
class EnumerationConfig:
    """Search options.

    max_rank caps the module rank (None = floor of the global dimension,
    valid because every d_a >= 1; a cap below the rank of a real module is
    a documented truncation, not an error).  workers > 1 spreads the
    per-multiset searches over processes; output is identical for any
    worker count.  dim_prefilter switches between the two independent
    generators of admissible dimension squares (internal-end shaped
    vectors vs the raw coefficient lattice); both must agree.
    """

    max_rank: int | None = None
    workers: int = 1
    dim_prefilter: bool = True


# ---------------------------------------------------------------------------
# phase one: dimension squares


def _dual_orbits(ring: FusionRing) -> list[tuple[tuple[int, ...], QuadNumber]]:
    """Non-unit basis indices grouped {i, dual i}, with summed dimensions.

    Internal-end vectors are self-dual with unit coefficient 1, so their
    dimensions are 1 + nonnegative integer combinations of these weights.
    """
    seen = set()
    orbits = []
    for i in range(ring.rank):
        if i == ring.unit or i in seen:
            continue
        d = ring.dual[i]
        if d == i:
            seen.add(i)
            orbits.append(((i,), ring.dims[i]))
        else:
            seen.update((i, d))
            orbits.append(((i, d), ring.dims[i] + ring.dims[d]))
    return orbits


def _admissible_squares(ring: FusionRing, via_candidates: bool) -> list[QuadNumber]:
    """All possible internal-end dimensions (= squared module dims) <= D.

    With via_candidates (the prefilter), the values are dimensions of
    end-shaped vectors: self-dual, so dual pairs {i, dual i} contribute
    with a common coefficient.  Without it, the filter is relaxed to the
    coefficient lattice of all non-unit dimensions taken independently,
    a strictly weaker sound bound used to cross-validate the prefilter.
    """
    D = ring.global_dim
    if via_candidates:
        weights = [w for _idxs, w in _dual_orbits(ring)]
    else:
        weights = [ring.dims[i] for i in range(ring.rank) if i != ring.unit]
    # integer half-pair accumulation: value x is stored as (2x.a, 2x.b)
    wp = []
    for w in weights:
        ua, vb = 2 * w.a, 2 * w.b
        if ua.denominator != 1 or vb.denominator != 1:
            raise ValueError("ring dimensions are off the half-integer lattice")
        wp.append((int(ua), int(vb)))
    Du, Dv = int(2 * D.a), int(2 * D.b)
    values: set[tuple[int, int]] = {(2, 0)}
    for (wu, wv) in wp:
        new = set()
        for (u, v) in values:
            cu, cv = u + wu, v + wv
            while _int_sign(Du - cu, Dv - cv) >= 0:
                new.add((cu, cv))
                cu, cv = cu + wu, cv + wv
        values |= new
    out = [QuadNumber.from_half_pair(u, v) for (u, v) in values]
    return sorted(out, key=_quad_key)


def _quad_key(x: QuadNumber) -> tuple:
    return (float(x), x.a.numerator, x.a.denominator, x.b.numerator, x.b.denominator)


def _sqfree_part(x) -> int:
    """Signed squarefree part of a rational (invariant modulo squares)."""
    n = x.numerator * x.denominator
    if n == 0:
        return 0
    sign = 1 if n > 0 else -1
    n = abs(n)
    out = 1
    d = 2
    while d * d <= n:
        while n % (d * d) == 0:
            n //= d * d
        if n % d == 0:
            out *= d
            n //= d
        d += 1
    return sign * out * n


def _square_classes(values: list[QuadNumber]) -> list[list[QuadNumber]]:
    """Group by the square class of Q(sqrt5)*: same class iff the ratio is
    a square in the field (module dims of one module share a class).

    The squarefree part of the field norm is a class invariant, so values
    are bucketed by it before the exact ratio tests.
    """
    buckets: dict[int, list[QuadNumber]] = {}
    for v in values:
        buckets.setdefault(_sqfree_part(v.norm()), []).append(v)
    classes: list[list[QuadNumber]] = []
    for key in sorted(buckets):
        local: list[list[QuadNumber]] = []
        for v in buckets[key]:
            for cls in local:
                if sqrt_in_field(v / cls[0]) is not None:
                    cls.append(v)
                    break
            else:
                local.append([v])
        classes.extend(local)
    return classes


def _int_sign(a: int, b: int) -> int:
    """Exact sign of a + b*sqrt5 for integers."""
    if b == 0:
        return (a > 0) - (a < 0)
    if a == 0:
        return (b > 0) - (b < 0)
    if a > 0 and b > 0:
        return 1
    if a < 0 and b < 0:
        return -1
    cmp = a * a - 5 * b * b
    s = 1 if a > 0 else -1
    return s if cmp > 0 else (-s if cmp < 0 else 0)


def _class_multisets(
    cls: list[QuadNumber], D: QuadNumber, max_rank: int
) -> list[tuple[QuadNumber, ...]]:
    """Multisets from one square class with exact sum D, at most max_rank
    parts.  Runs on integer coordinates x = (A + B*sqrt5)/L."""
    vals = sorted(cls, key=_quad_key, reverse=True)
    L = 1
    for x in vals + [D]:
        for den in (x.a.denominator, x.b.denominator):
            L = L * den // math.gcd(L, den)
    pairs = [(int(v.a * L), int(v.b * L)) for v in vals]
    m = len(vals)
    # per-coordinate suffix ranges achievable with one part from position >= k
    sufA = [(min(p[0] for p in pairs[k:]), max(p[0] for p in pairs[k:])) for k in range(m)]
    sufB = [(min(p[1] for p in pairs[k:]), max(p[1] for p in pairs[k:])) for k in range(m)]
    out: list[tuple[QuadNumber, ...]] = []
    acc: list[int] = []  # counts per value index

    def rec(k: int, ra: int, rb: int, room: int) -> None:
        if ra == 0 and rb == 0:
            ms: list[QuadNumber] = []
            for idx in range(len(acc) - 1, -1, -1):
                ms.extend([vals[idx]] * acc[idx])
            out.append(tuple(ms))
            return
        if k == m or room == 0:
            return
        # remaining sum must fit in the box reachable with <= room parts
        loA, hiA = sufA[k]
        loB, hiB = sufB[k]
        if not (min(0, room * loA) <= ra <= max(0, room * hiA)):
            return
        if not (min(0, room * loB) <= rb <= max(0, room * hiB)):
            return
        # even `room` copies of the largest remaining value cannot reach
        if (ra + rb * 2.2360679775) / L > float(vals[k]) * room + 1e-6:
            return
        A, B = pairs[k]
        # max copies of vals[k] fitting under the exact remaining sum
        count, na, nb = 0, ra, rb
        while count < room and _int_sign(na - A, nb - B) >= 0:
            na, nb = na - A, nb - B
            count += 1
        for c in range(count, -1, -1):
            acc.append(c)
            rec(k + 1, ra - c * A, rb - c * B, room - c)
            acc.pop()

    rec(0, int(D.a * L), int(D.b * L), max_rank)
    return out


def dimension_square_multisets(
    ring: FusionRing, cfg: EnumerationConfig | None = None
) -> list[tuple[QuadNumber, ...]]:
    """Sorted candidate multisets of squared module dimensions."""
    cfg = cfg or EnumerationConfig()
    max_rank = cfg.max_rank
    if max_rank is None:
        max_rank = int(float(ring.global_dim) + 1e-9)
    values = _admissible_squares(ring, via_candidates=cfg.dim_prefilter)
    out: list[tuple[QuadNumber, ...]] = []
    for cls in _square_classes(values):
        out.extend(_class_multisets(cls, ring.global_dim, max_rank))
    out.sort(key=lambda qs: (len(qs), [_quad_key(q) for q in qs]))
    return out


def candidate_dimension_vectors(ring: FusionRing) -> list[tuple[QuadRoot, ...]]:
    """Admissible module dimension multisets (as exact square roots)."""
    return [
        tuple(QuadRoot(q) for q in qs) for qs in dimension_square_multisets(ring)
    ]


# ---------------------------------------------------------------------------
# invertible group actions


def _group_generators(ring: FusionRing) -> list[int]:
    """Greedy minimal generating set of the invertible group."""
    table = ring.group_table
    span = {ring.unit}
    gens: list[int] = []
    for g in ring.invertibles:
        if g in span:
            continue
        gens.append(g)
        frontier = set(span)
        while True:
            new = {table[(x, h)] for x in frontier for h in gens} | {
                table[(h, x)] for x in frontier for h in gens
            } | frontier
            if new == frontier:
                break
            frontier = new
        span = frontier
        if len(span) == len(ring.invertibles):
            break
    return gens


def _element_words(ring: FusionRing, gens: list[int]) -> dict[int, tuple[int, ...]]:
    """Each invertible as a word (sequence of generator indices)."""
    table = ring.group_table
    words = {ring.unit: ()}
    frontier = [ring.unit]
    while frontier:
        nxt = []
        for x in frontier:
            for gi, g in enumerate(gens):
                y = table[(x, g)]
                if y not in words:
                    words[y] = words[x] + (gi,)
                    nxt.append(y)
        frontier = nxt
    return words


def _perm_order(p: tuple[int, ...]) -> int:
    order = 1
    for start in range(len(p)):
        length, x = 1, p[start]
        while x != start:
            x = p[x]
            length += 1
        order = order * length // math.gcd(order, length)
    return order


def _block_perms(blocks: list[list[int]], r: int, divides: int) -> list[tuple[int, ...]]:
    """Permutations of 0..r-1 preserving each block, order dividing `divides`."""
    per_block = []
    for block in blocks:
        opts = []
        for p in permutations(block):
            if divides % _perm_order(_perm_of_block(block, p)) == 0:
                opts.append({a: b for a, b in zip(block, p)})
        per_block.append(opts)
    out = []
    for combo in product(*per_block):
        perm = list(range(r))
        for part in combo:
            for a, b in part.items():
                perm[a] = b
        out.append(tuple(perm))
    return out


def _perm_of_block(block: list[int], image) -> tuple[int, ...]:
    pos = {a: t for t, a in enumerate(block)}
    return tuple(pos[b] for b in image)


def _enumerate_actions(
    ring: FusionRing, blocks: list[list[int]], r: int
) -> list[dict[int, tuple[int, ...]]]:
    """All right actions of the invertible group by block-preserving
    permutations: sigma[g] with sigma[xy] = sigma[y] o sigma[x]."""
    gens = _group_generators(ring)
    if not gens:
        return [{ring.unit: tuple(range(r))}]
    est = 1
    for block in blocks:
        est *= math.factorial(len(block))
    if est > 2_000_000:
        raise RuntimeError(
            "invertible-action enumeration too large for this dimension "
            f"multiset (blocks {[len(b) for b in blocks]}); "
            "this ring is outside the supported search range"
        )
    words = _element_words(ring, gens)
    table = ring.group_table
    orders = []
    for g in gens:
        k, x = 1, g
        while x != ring.unit:
            x = table[(x, g)]
            k += 1
        orders.append(k)
    candidates = [_block_perms(blocks, r, o) for o in orders]
    actions = []
    for choice in product(*candidates):
        sigma: dict[int, tuple[int, ...]] = {}
        ok = True
        for x, word in words.items():
            perm = tuple(range(r))
            for gi in word:
                g_perm = choice[gi]
                perm = tuple(g_perm[perm[a]] for a in range(r))
            sigma[x] = perm
        # verify the action respects the whole group table
        for (x, y), z in table.items():
            composed = tuple(sigma[y][sigma[x][a]] for a in range(r))
            if composed != sigma[z]:
                ok = False
                break
        if ok:
            actions.append(sigma)
    return _action_orbit_reps(ring, blocks, r, actions)


def _action_orbit_reps(
    ring: FusionRing,
    blocks: list[list[int]],
    r: int,
    actions: list[dict[int, tuple[int, ...]]],
) -> list[dict[int, tuple[int, ...]]]:
    """One action per conjugacy orbit under module-basis relabelings.

    Relabeling by a block-preserving permutation pi carries solutions of
    one action to solutions of its conjugate, and the output of the search
    is deduplicated by canonical form, so keeping a single representative
    per orbit loses no modules.
    """
    if len(actions) <= 1:
        return actions
    keys = sorted(actions[0])
    # generators of the block-preserving symmetric group: adjacent swaps
    gens = []
    for block in blocks:
        for u, v in zip(block, block[1:]):
            g = list(range(r))
            g[u], g[v] = v, u
            gens.append(tuple(g))

    def encode(sigma) -> tuple:
        return tuple(sigma[x] for x in keys)

    def conj(enc: tuple, pi: tuple[int, ...]) -> tuple:
        inv = [0] * r
        for a, b in enumerate(pi):
            inv[b] = a
        return tuple(tuple(pi[p[inv[a]]] for a in range(r)) for p in enc)

    by_enc = {encode(s): s for s in actions}
    seen: set[tuple] = set()
    reps = []
    for enc in sorted(by_enc):
        if enc in seen:
            continue
        orbit = {enc}
        frontier = [enc]
        while frontier:
            cur = frontier.pop()
            for pi in gens:
                nxt = conj(cur, pi)
                if nxt not in orbit:
                    orbit.add(nxt)
                    frontier.append(nxt)
        seen |= orbit
        reps.append(by_enc[enc])
    return reps


# ---------------------------------------------------------------------------
# derivation plan: which matrices are searched, which are derived


@dataclass
class _Step:
    kind: str  # "mul" or "transpose"
    i: int = 0
    j: int = 0
    target: int = 0
    coeff: int = 1
    known: tuple[tuple[int, int], ...] = ()


@dataclass
class _Plan:
    searched: list[int]
    steps: list[_Step]


def _derivation_plan(ring: FusionRing) -> _Plan:
    cached = getattr(ring, "_fusionkit_plan", None)
    if cached is not None:
        return cached
    n = ring.rank
    known = set(ring.invertibles) | {ring.unit}
    searched: list[int] = []
    steps: list[_Step] = []
    nonins = sorted(
        (i for i in range(n) if i not in known),
        key=lambda i: (ring.dims_float[i], i),
    )

    def close() -> None:
        progress = True
        while progress:
            progress = False
            for i in sorted(known):
                for j in sorted(known):
                    unknowns = [k for k in range(n) if ring.N[i][j][k] and k not in known]
                    if len(unknowns) != 1:
                        continue
                    k = unknowns[0]
                    steps.append(
                        _Step(
                            "mul",
                            i=i,
                            j=j,
                            target=k,
                            coeff=ring.N[i][j][k],
                            known=tuple(
                                (kk, ring.N[i][j][kk])
                                for kk in range(n)
                                if ring.N[i][j][kk] and kk != k
                            ),
                        )
                    )
                    known.add(k)
                    if ring.dual[k] not in known:
                        steps.append(_Step("transpose", i=k, target=ring.dual[k]))
                        known.add(ring.dual[k])
                    progress = True

    close()
    for t in nonins:
        if t in known:
            continue
        searched.append(t)
        known.add(t)
        if ring.dual[t] not in known:
            steps.append(_Step("transpose", i=t, target=ring.dual[t]))
            known.add(ring.dual[t])
        close()
    plan = _Plan(searched=searched, steps=steps)
    ring._fusionkit_plan = plan  # type: ignore[attr-defined]
    return plan


# ---------------------------------------------------------------------------
# phase two: matrix search for one dimension-square multiset


@dataclass
class _MultisetContext:
    ring: FusionRing
    qs: tuple[QuadNumber, ...]
    r: int
    rats: list[QuadNumber]
    fd: list[float]
    blocks: list[list[int]]
    class_of: list[int]


def _build_context(ring: FusionRing, qs: tuple[QuadNumber, ...]) -> _MultisetContext | None:
    r = len(qs)
    rats = []
    for q in qs:
        rat = sqrt_in_field(q / qs[0])
        if rat is None:
            return None  # mixed square classes: provably no module
        rats.append(rat)
    fd = [math.sqrt(float(q)) for q in qs]
    blocks: list[list[int]] = []
    class_of = [0] * r
    for a in range(r):
        if blocks and qs[a] == qs[blocks[-1][0]]:
            blocks[-1].append(a)
        else:
            blocks.append([a])
        class_of[a] = len(blocks) - 1
    return _MultisetContext(ring, qs, r, rats, fd, blocks, class_of)


def _row_solutions(
    ctx: _MultisetContext, t: int, a_class: int, caps: list[int], limit: int = 0
) -> list[tuple[int, ...]]:
    """Nonnegative integer rows with sum_b m_b rat_b = dim_t * rat_a,
    entries capped; two exact linear equations over the coordinates.
    With limit > 0, stop after that many solutions (feasibility probing)."""
    ring = ctx.ring
    a0 = ctx.blocks[a_class][0]
    target = ring.dims[t] * ctx.rats[a0]
    dens = [target.a.denominator, target.b.denominator]
    for rat in ctx.rats:
        dens.append(rat.a.denominator)
        dens.append(rat.b.denominator)
    L = 1
    for d in dens:
        L = L * d // math.gcd(L, d)
    A = [int(rat.a * L) for rat in ctx.rats]
    B = [int(rat.b * L) for rat in ctx.rats]
    TA, TB = int(target.a * L), int(target.b * L)
    r = ctx.r
    order = sorted(range(r), key=lambda b: -ctx.fd[b])
    # suffix bounds for feasibility pruning (coefficients may be negative)
    minA = [0] * (r + 1)
    maxA = [0] * (r + 1)
    minB = [0] * (r + 1)
    maxB = [0] * (r + 1)
    for pos in range(r - 1, -1, -1):
        b = order[pos]
        loA, hiA = sorted((0, A[b] * caps[b]))
        loB, hiB = sorted((0, B[b] * caps[b]))
        minA[pos] = minA[pos + 1] + loA
        maxA[pos] = maxA[pos + 1] + hiA
        minB[pos] = minB[pos + 1] + loB
        maxB[pos] = maxB[pos + 1] + hiB
    rows: list[tuple[int, ...]] = []
    row = [0] * r

    def rec(pos: int, ra: int, rb: int) -> bool:
        if limit and len(rows) >= limit:
            return True
        if pos == r:
            if ra == 0 and rb == 0:
                rows.append(tuple(row))
                return bool(limit) and len(rows) >= limit
            return False
        if not (minA[pos] <= ra <= maxA[pos] and minB[pos] <= rb <= maxB[pos]):
            return False
        b = order[pos]
        for m in range(caps[b] + 1):
            na, nb = ra - m * A[b], rb - m * B[b]
            row[b] = m
            if rec(pos + 1, na, nb):
                row[b] = 0
                return True
        row[b] = 0
        return False

    rec(0, TA, TB)
    rows.sort()
    return rows


def _gen_static(ctx: _MultisetContext, t: int) -> tuple[list[list[int]], dict[int, list[tuple[int, ...]]]]:
    """Action-independent data for one generator: entry caps and the cached
    per-class row solutions."""
    dim_t = ctx.ring.dims_float[t]
    caps = [
        [
            int(dim_t * min(ctx.fd[a] / ctx.fd[b], ctx.fd[b] / ctx.fd[a]) + 1e-9)
            for b in range(ctx.r)
        ]
        for a in range(ctx.r)
    ]
    row_cache = {
        c: _row_solutions(ctx, t, c, caps[ctx.blocks[c][0]])
        for c in range(len(ctx.blocks))
    }
    return caps, row_cache


class _GenSearch:
    """Row-by-row backtracking for one generator matrix under one action."""

    def __init__(
        self,
        ctx: _MultisetContext,
        t: int,
        sigma: dict[int, tuple[int, ...]],
        prev: dict[int, list[list[int]]],
        static: tuple[list[list[int]], dict[int, list[tuple[int, ...]]]],
    ) -> None:
        self.ctx = ctx
        self.t = t
        self.r = ctx.r
        ring = ctx.ring
        self.symmetric = ring.dual[t] == t
        self.sigma = sigma
        self.prev = prev
        dim_t = ring.dims_float[t]
        self.caps, self.row_cache = static
        # row-orbit links: every pair x_g' x_t = x_t x_g of single products
        # forces row sigma[gp](a) of M[t] = row a re-read through columns
        # sigma[g]^{-1}; the trivial pair (unit, unit) is dropped
        links: set[tuple[tuple[int, ...], tuple[int, ...]]] = set()
        single = ring.single_products
        for g in ring.invertibles:
            right = single.get((t, g))
            if right is None:
                continue
            for gp in ring.invertibles:
                if single.get((gp, t)) == right:
                    sg = sigma[g]
                    inv_sg = [0] * self.r
                    for x, y in enumerate(sg):
                        inv_sg[y] = x
                    link = (sigma[gp], tuple(inv_sg))
                    if link != (tuple(range(self.r)), tuple(range(self.r))):
                        links.add(link)
        self.links = sorted(links)
        # data for incremental product checks: x_t * x_dual(t)
        self.relation = self._relation_data()
        # column sum targets (floats; exact check happens at the leaf)
        self.col_target = [dim_t * ctx.fd[b] for b in range(self.r)]
        # diagonal budget: sum_i dim_i M[i][a][a] = q_a; float bounds with
        # the exact version enforced at the leaf
        fixed_diag = [1.0] * self.r  # the unit matrix
        free_diag = [0.0] * self.r
        for i in range(ring.rank):
            if i == ring.unit or i == t or i == ring.dual[t]:
                continue
            df = ring.dims_float[i]
            if i in sigma:
                for a in range(self.r):
                    if sigma[i][a] == a:
                        fixed_diag[a] += df
            elif i in prev:
                for a in range(self.r):
                    fixed_diag[a] += df * prev[i][a][a]
            elif ring.dual[i] in prev:
                # transpose of an earlier generator: same diagonal
                for a in range(self.r):
                    fixed_diag[a] += df * prev[ring.dual[i]][a][a]
            else:
                # unfixed matrix: diagonal entry at most floor(dim_i)
                for a in range(self.r):
                    free_diag[a] += df * int(df + 1e-9)
        self.diag_fixed = fixed_diag
        self.diag_free = free_diag
        self.diag_t_weight = dim_t * (2.0 if ring.dual[t] != t else 1.0)
        self.diag_target = [float(ctx.qs[a]) for a in range(self.r)]
        # known matrices that must commute with M[t]: earlier generators j
        # with x_t x_j = x_j x_t as objects
        self.commuting: list[list[tuple[int, ...]]] = []
        for j, mat_j in prev.items():
            if ring.N[t][j] == ring.N[j][t]:
                self.commuting.append([tuple(row) for row in mat_j])

    def _relation_data(self):
        """Classify the terms of x_t * x_dual(t) = sum_k c_k x_k for the
        incremental check dot(row_a, row_b) = sum_k c_k M[k][a][b].

        Terms whose matrix is a row or column permutation of M[t] itself
        (products with an invertible on one side) are evaluated exactly as
        soon as the needed row is filled; anything else falls back to the
        Perron entry cap.
        """
        ring = self.ctx.ring
        t = self.t
        coeffs = ring.N[t][ring.dual[t]]
        single = ring.single_products
        terms = []  # (kind, data, coeff)
        for k in range(ring.rank):
            c = coeffs[k]
            if not c:
                continue
            if k == ring.unit:
                terms.append(("unit", None, c))
                continue
            if k in self.sigma:
                terms.append(("perm", self.sigma[k], c))
                continue
            if k == t:
                terms.append(("self", None, c))
                continue
            if k == ring.dual[t]:
                terms.append(("selfT", None, c))
                continue
            if k in self.prev:
                terms.append(("mat", self.prev[k], c))
                continue
            placed = False
            for g in ring.invertibles:
                if single.get((g, t)) == k:
                    # M[k][a][b] = M[t][sigma_g(a)][b]
                    terms.append(("rowg", self.sigma[g], c))
                    placed = True
                    break
                if single.get((t, g)) == k:
                    # M[k][a][b] = M[t][a][sigma_g^{-1}(b)]
                    sg = self.sigma[g]
                    inv = [0] * self.r
                    for x, y in enumerate(sg):
                        inv[y] = x
                    terms.append(("colg", tuple(inv), c))
                    placed = True
                    break
            if placed:
                continue
            dim_k = ring.dims_float[k]
            cap = [
                [
                    int(dim_k * self.ctx.fd[a] / self.ctx.fd[b] + 1e-9)
                    for b in range(self.r)
                ]
                for a in range(self.r)
            ]
            terms.append(("cap", cap, c))
        return terms

    def _pair_bounds(self, mat, a: int, b: int) -> tuple[int, int]:
        lo = hi = 0
        for kind, data, c in self.relation:
            if kind == "unit":
                v = c * (1 if a == b else 0)
            elif kind == "perm":
                v = c * (1 if data[a] == b else 0)
            elif kind == "self":
                v = c * mat[a][b]
            elif kind == "selfT":
                v = c * mat[b][a]
            elif kind == "mat":
                v = c * data[a][b]
            elif kind == "rowg":
                row = mat[data[a]]
                if row is None:
                    lo += 0
                    hi += c * self.caps[data[a]][b]
                    continue
                v = c * row[b]
            elif kind == "colg":
                v = c * mat[a][data[b]]
            else:  # cap
                lo += 0
                hi += c * data[a][b]
                continue
            lo += v
            hi += v
        return lo, hi

    def solutions(self):
        """Yield completed matrices (list of row tuples)."""
        r = self.r
        mat: list[tuple[int, ...] | None] = [None] * r
        colsum = [0.0] * r

        # search order: orbit representatives, most constrained class first
        reps_order = sorted(
            range(r), key=lambda a: (len(self.row_cache[self.ctx.class_of[a]]), a)
        )

        def propagate(a: int, row: tuple[int, ...], acc: list[int]) -> bool:
            """Assign row a, derive its orbit; False on conflict."""
            queue = [(a, row)]
            while queue:
                x, rx = queue.pop()
                if mat[x] is not None:
                    if mat[x] != rx:
                        return False
                    continue
                if self.symmetric:
                    for y in range(r):
                        if mat[y] is not None and mat[y][x] != rx[y]:
                            return False
                mat[x] = rx
                acc.append(x)
                for b in range(r):
                    colsum[b] += rx[b] * self.ctx.fd[x]
                    if colsum[b] > self.col_target[b] * 1.0000001 + 1e-9:
                        return False
                for row_perm, col_read in self.links:
                    y = row_perm[x]
                    ry = tuple(rx[col_read[b]] for b in range(r))
                    queue.append((y, ry))
            return True

        def undo(acc: list[int]) -> None:
            for x in acc:
                rx = mat[x]
                for b in range(r):
                    colsum[b] -= rx[b] * self.ctx.fd[x]
                mat[x] = None

        def pair_checks(newly: list[int]) -> bool:
            for x in newly:
                # diagonal budget at index x
                lo = self.diag_fixed[x] + self.diag_t_weight * mat[x][x]
                if lo > self.diag_target[x] + 1e-6:
                    return False
                if lo + self.diag_free[x] < self.diag_target[x] - 1e-6:
                    return False
                for y in range(r):
                    if mat[y] is None:
                        continue
                    dot = sum(mat[x][c] * mat[y][c] for c in range(r))
                    lo_p, hi_p = self._pair_bounds(mat, x, y)
                    if not (lo_p <= dot <= hi_p):
                        return False
            return not self.commuting or commute_checks()

        def commute_checks() -> bool:
            # M[t] must commute with every known matrix C it commutes with
            # in the ring: row a of M[t] C is known once row a is filled;
            # the matching row of C M[t] fills as the rows it needs arrive
            for C in self.commuting:
                for a in range(r):
                    if mat[a] is None:
                        continue
                    target = [
                        sum(mat[a][c] * C[c][b] for c in range(r)) for b in range(r)
                    ]
                    partial = [0] * r
                    complete = True
                    for c in range(r):
                        w = C[a][c]
                        if not w:
                            continue
                        if mat[c] is None:
                            complete = False
                            continue
                        for b in range(r):
                            partial[b] += w * mat[c][b]
                    for b in range(r):
                        if partial[b] > target[b]:
                            return False
                        if complete and partial[b] != target[b]:
                            return False
            return True

        def rec(pos: int):
            while pos < r and mat[reps_order[pos]] is not None:
                pos += 1
            if pos == r:
                yield [row for row in mat]  # copy
                return
            a = reps_order[pos]
            cls = self.ctx.class_of[a]
            for row in self.row_cache[cls]:
                if self.symmetric:
                    bad = False
                    for y in range(r):
                        if mat[y] is not None and row[y] != mat[y][a]:
                            bad = True
                            break
                    if bad:
                        continue
                ok_caps = all(row[b] <= self.caps[a][b] for b in range(r))
                if not ok_caps:
                    continue
                acc: list[int] = []
                if propagate(a, row, acc) and pair_checks(acc):
                    yield from rec(pos + 1)
                undo(acc)

        yield from rec(0)


def _leaf_module(
    ctx: _MultisetContext,
    sigma: dict[int, tuple[int, ...]],
    gen_mats: dict[int, list[tuple[int, ...]]],
) -> FusionModule | None:
    ring = ctx.ring
    n, r = ring.rank, ctx.r
    M: list[np.ndarray | None] = [None] * n
    M[ring.unit] = np.eye(r, dtype=np.int64)
    for g, perm in sigma.items():
        P = np.zeros((r, r), dtype=np.int64)
        for a in range(r):
            P[a, perm[a]] = 1
        M[g] = P
    for t, mat in gen_mats.items():
        M[t] = np.array(mat, dtype=np.int64)
    plan = _derivation_plan(ring)
    for step in plan.steps:
        if step.kind == "transpose":
            if M[step.target] is None:
                M[step.target] = M[step.i].T.copy()
            continue
        if M[step.target] is not None:
            continue
        X = M[step.i] @ M[step.j]
        for kk, c in step.known:
            X = X - c * M[kk]
        if step.coeff != 1:
            if (X % step.coeff != 0).any():
                return None
            X = X // step.coeff
        if (X < 0).any():
            return None
        M[step.target] = X
    if any(m is None for m in M):
        raise AssertionError("derivation plan did not cover the ring basis")
    mod = FusionModule(ring, tuple(tuple(tuple(int(v) for v in row) for row in m) for m in M))
    if validate_module(mod) is not None:
        return None
    if mod.dim_squares != ctx.qs:
        return None
    return mod


def _row_class_feasible(ctx: _MultisetContext, i: int) -> bool:
    """Does every dimension class admit at least one row for element i?"""
    dim_i = ctx.ring.dims_float[i]
    for c in range(len(ctx.blocks)):
        a = ctx.blocks[c][0]
        caps = [
            int(dim_i * min(ctx.fd[a] / ctx.fd[b], ctx.fd[b] / ctx.fd[a]) + 1e-9)
            for b in range(ctx.r)
        ]
        if not _row_solutions(ctx, i, c, caps, limit=1):
            return False
    return True


def _search_multiset(ring: FusionRing, qs: tuple[QuadNumber, ...]) -> list[FusionModule]:
    ctx = _build_context(ring, qs)
    if ctx is None:
        return []
    plan = _derivation_plan(ring)
    # cheap gate before any action enumeration: every noninvertible element
    # needs a feasible action row in every dimension class
    statics: dict[int, tuple] = {}
    for t in plan.searched:
        caps, cache = _gen_static(ctx, t)
        if any(not cache[c] for c in cache):
            return []
        statics[t] = (caps, cache)
    invs = set(ring.invertibles)
    for i in range(ring.rank):
        if i in invs or i in statics:
            continue
        if not _row_class_feasible(ctx, i):
            return []
    actions = _enumerate_actions(ring, ctx.blocks, ctx.r)
    found: dict[tuple, FusionModule] = {}

    def fill(gen_idx: int, sigma, prev: dict[int, list[list[int]]]):
        if gen_idx == len(plan.searched):
            mod = _leaf_module(ctx, sigma, prev)
            if mod is not None:
                key = canonical_form(mod)
                found.setdefault(key, mod)
            return
        t = plan.searched[gen_idx]
        search = _GenSearch(ctx, t, sigma, prev, statics[t])  # type: ignore[arg-type]
        for mat in search.solutions():
            nxt = dict(prev)
            nxt[t] = mat
            fill(gen_idx + 1, sigma, nxt)

    for sigma in actions:
        fill(0, sigma, {})
    mods = sorted(found.values(), key=lambda m: m.canonical_key)
    return mods


# ---------------------------------------------------------------------------
# top level


_WORKER_RING: FusionRing | None = None


def _init_worker(ring: FusionRing) -> None:
    global _WORKER_RING
    _WORKER_RING = ring


def _worker_task(qs: tuple[QuadNumber, ...]) -> list[tuple]:
    assert _WORKER_RING is not None
    return [m.mats for m in _search_multiset(_WORKER_RING, qs)]


def enumerate_modules(
    ring: FusionRing, cfg: EnumerationConfig | None = None
) -> list[FusionModule]:
    """All fusion modules over the ring, up to equivalence, canonically
    sorted by (rank, lexicographic canonical form).  Exhaustive within
    cfg.max_rank; deterministic for any worker count."""
    cfg = cfg or EnumerationConfig()
    multisets = dimension_square_multisets(ring, cfg)
    log.info(
        "enumerating over %s: %d dimension-square multisets", ring.name, len(multisets)
    )
    out: list[FusionModule] = []
    if cfg.workers > 1 and len(multisets) > 1:
        import multiprocessing as mp

        with mp.Pool(cfg.workers, initializer=_init_worker, initargs=(ring,)) as pool:
            for mats_list in pool.imap(_worker_task, multisets):
                out.extend(FusionModule(ring, mats) for mats in mats_list)
    else:
        for qs in multisets:
            mods = _search_multiset(ring, qs)
            if mods:
                log.info("  multiset %s: %d modules", [str(QuadRoot(q)) for q in qs], len(mods))
            out.extend(mods)
    out.sort(key=lambda m: m.canonical_key)
    return out
