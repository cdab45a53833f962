"""Fusion rings: based rings with duality, their validation and invariants.

A fusion ring is given by labels, a unit index, an involutive duality
permutation, and a rank^3 tensor N of nonnegative integers with
N[i][j][k] = multiplicity of x_k in x_i * x_j.  The catalog at the bottom
holds every ring this package needs: the Haagerup-Izumi rings for the two
order-4 groups, the 4442 ring, the 2D2 ring, their crossed product C2,
group rings, RepA4, and the Fibonacci ring.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .arith import QuadNumber, recognize_float


class FPRecognitionError(ValueError):
    """A Perron eigenvector entry could not be recognized in Q(sqrt5)."""


class FusionRing:
    """Immutable based ring with duality.

    Instances are only lightly checked on construction; `validate_ring`
    performs the full axiom check and every catalog ring passes it.
    """

    def __init__(
        self,
        name: str,
        labels: tuple[str, ...],
        unit: int,
        dual: tuple[int, ...],
        N: tuple[tuple[tuple[int, ...], ...], ...],
        shorthands: dict[str, tuple[int, ...]] | None = None,
        grading: Grading | None = None,
    ) -> None:
        n = len(labels)
        self.name = name
        self.labels = tuple(labels)
        self.unit = int(unit)
        self.dual = tuple(int(x) for x in dual)
        self.N = tuple(tuple(tuple(int(v) for v in row) for row in plane) for plane in N)
        if len(self.dual) != n or len(self.N) != n:
            raise ValueError("inconsistent tensor dimensions")
        for plane in self.N:
            if len(plane) != n or any(len(row) != n for row in plane):
                raise ValueError("inconsistent tensor dimensions")
        if len(set(self.labels)) != n:
            raise ValueError("labels must be distinct")
        self.shorthands: dict[str, tuple[int, ...]] = dict(shorthands or {})
        self.grading = grading

    # -- identity ---------------------------------------------------------

    @property
    def rank(self) -> int:
        return len(self.labels)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FusionRing):
            return NotImplemented
        return (
            self.labels == other.labels
            and self.unit == other.unit
            and self.dual == other.dual
            and self.N == other.N
        )

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"<FusionRing {self.name!r} rank {self.rank}>"

    # -- cached structure ---------------------------------------------------

    @cached_property
    def N_np(self) -> np.ndarray:
        return np.array(self.N, dtype=np.int64)

    @cached_property
    def dims(self) -> tuple[QuadNumber, ...]:
        return _perron_dims(self)

    @cached_property
    def global_dim(self) -> QuadNumber:
        total = QuadNumber(0)
        for x in self.dims:
            total = total + x * x
        return total

    @cached_property
    def dims_float(self) -> tuple[float, ...]:
        return tuple(float(x) for x in self.dims)

    @cached_property
    def invertibles(self) -> tuple[int, ...]:
        return tuple(i for i, x in enumerate(self.dims) if x == 1)

    @cached_property
    def group_table(self) -> dict[tuple[int, int], int]:
        """Multiplication table of the invertible elements."""
        table: dict[tuple[int, int], int] = {}
        inv = set(self.invertibles)
        for g in self.invertibles:
            for h in self.invertibles:
                prods = [k for k in range(self.rank) if self.N[g][h][k]]
                if len(prods) != 1 or prods[0] not in inv or self.N[g][h][prods[0]] != 1:
                    raise ValueError("invertible elements do not close into a group")
                table[(g, h)] = prods[0]
        return table

    @cached_property
    def single_products(self) -> dict[tuple[int, int], int]:
        """(i, j) -> k whenever x_i * x_j equals the single basis element x_k."""
        out: dict[tuple[int, int], int] = {}
        for i in range(self.rank):
            for j in range(self.rank):
                supp = [k for k in range(self.rank) if self.N[i][j][k]]
                if len(supp) == 1 and self.N[i][j][supp[0]] == 1:
                    out[(i, j)] = supp[0]
        return out

    # -- multiplication ------------------------------------------------------

    def mult_coeffs(self, x: tuple[int, ...], y: tuple[int, ...]) -> tuple[int, ...]:
        n = self.rank
        out = [0] * n
        for i, xi in enumerate(x):
            if not xi:
                continue
            Ni = self.N[i]
            for j, yj in enumerate(y):
                if not yj:
                    continue
                row = Ni[j]
                c = xi * yj
                for k in range(n):
                    if row[k]:
                        out[k] += c * row[k]
        return tuple(out)

    def basis_vector(self, i: int) -> ObjectVector:
        c = [0] * self.rank
        c[i] = 1
        return ObjectVector(self, tuple(c))

    def unit_vector(self) -> ObjectVector:
        return self.basis_vector(self.unit)

    def vector(self, coeffs) -> ObjectVector:
        return ObjectVector(self, tuple(int(c) for c in coeffs))


@dataclass(frozen=True)
class ObjectVector:
    """Nonnegative integer coefficient vector over a ring's basis."""

    ring: FusionRing
    coeffs: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.coeffs) != self.ring.rank:
            raise ValueError("coefficient length does not match ring rank")
        if any(c < 0 for c in self.coeffs):
            raise ValueError("coefficients must be nonnegative")

    def __add__(self, other: ObjectVector) -> ObjectVector:
        self._same_ring(other)
        return ObjectVector(self.ring, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __mul__(self, other: object) -> ObjectVector:
        if isinstance(other, int):
            return ObjectVector(self.ring, tuple(other * c for c in self.coeffs))
        if isinstance(other, ObjectVector):
            self._same_ring(other)
            return ObjectVector(self.ring, self.ring.mult_coeffs(self.coeffs, other.coeffs))
        return NotImplemented

    def __rmul__(self, other: object) -> ObjectVector:
        if isinstance(other, int):
            return self * other
        return NotImplemented

    def _same_ring(self, other: ObjectVector) -> None:
        if self.ring is not other.ring and self.ring != other.ring:
            raise ValueError("ObjectVectors over different rings")

    def dual(self) -> ObjectVector:
        d = self.ring.dual
        out = [0] * self.ring.rank
        for i, c in enumerate(self.coeffs):
            out[d[i]] = c
        return ObjectVector(self.ring, tuple(out))

    def dim(self) -> QuadNumber:
        total = QuadNumber(0)
        for c, x in zip(self.coeffs, self.ring.dims):
            if c:
                total = total + c * x
        return total

    def is_algebra_candidate(self) -> bool:
        """Unit coefficient exactly 1 and self-dual."""
        return self.coeffs[self.ring.unit] == 1 and self.dual() == self

    def __str__(self) -> str:
        from .expr import format_object

        return format_object(self)


@dataclass(frozen=True)
class Grading:
    """Grading of a ring basis by a finite abelian group.

    The group is a product of cyclic factors; elements are coordinate
    tuples.  degree[i] is the group element of basis index i.
    """

    factors: tuple[int, ...]
    degree: tuple[tuple[int, ...], ...]

    @property
    def identity(self) -> tuple[int, ...]:
        return (0,) * len(self.factors)

    def add(self, g: tuple[int, ...], h: tuple[int, ...]) -> tuple[int, ...]:
        return tuple((a + b) % m for a, b, m in zip(g, h, self.factors))

    def neg(self, g: tuple[int, ...]) -> tuple[int, ...]:
        return tuple((-a) % m for a, m in zip(g, self.factors))

    @property
    def order(self) -> int:
        out = 1
        for m in self.factors:
            out *= m
        return out

    def components(self) -> dict[tuple[int, ...], tuple[int, ...]]:
        """Group element -> indices of that degree (only nonempty ones)."""
        comp: dict[tuple[int, ...], list[int]] = {}
        for i, g in enumerate(self.degree):
            comp.setdefault(g, []).append(i)
        return {g: tuple(v) for g, v in comp.items()}

    def check(self, ring: FusionRing) -> str | None:
        if len(self.degree) != ring.rank:
            return "degree map length does not match ring rank"
        if self.degree[ring.unit] != self.identity:
            return "unit is not in the trivial component"
        for i in range(ring.rank):
            if self.degree[ring.dual[i]] != self.neg(self.degree[i]):
                return f"degree(dual({i})) != -degree({i})"
            for j in range(ring.rank):
                target = self.add(self.degree[i], self.degree[j])
                for k in range(ring.rank):
                    if ring.N[i][j][k] and self.degree[k] != target:
                        return f"product {i}*{j} hits index {k} outside its degree"
        return None


# ---------------------------------------------------------------------------
# validation


def validate_ring(ring: FusionRing) -> str | None:
    """Check every fusion-ring axiom; None if ok, else the first violation."""
    n = ring.rank
    N = ring.N_np
    u, dual = ring.unit, ring.dual
    if sorted(dual) != list(range(n)):
        return "dual is not a permutation"
    for i in range(n):
        if dual[dual[i]] != i:
            return f"dual is not involutive at index {i}"
    if dual[u] != u:
        return "dual(unit) != unit"
    if (N < 0).any():
        i, j, k = map(int, np.argwhere(N < 0)[0])
        return f"negative structure constant N[{i}][{j}][{k}]"
    eye = np.eye(n, dtype=np.int64)
    if not (N[u] == eye).all():
        j, k = map(int, np.argwhere(N[u] != eye)[0])
        return f"unit law fails: N[unit][{j}][{k}] = {int(N[u, j, k])}"
    if not (N[:, u, :] == eye).all():
        i, k = map(int, np.argwhere(N[:, u, :] != eye)[0])
        return f"unit law fails: N[{i}][unit][{k}] = {int(N[i, u, k])}"
    # duality: N[i][j][unit] = 1 iff j = dual(i) else 0
    want = np.zeros((n, n), dtype=np.int64)
    for i in range(n):
        want[i, dual[i]] = 1
    if not (N[:, :, u] == want).all():
        i, j = map(int, np.argwhere(N[:, :, u] != want)[0])
        return f"duality fails at N[{i}][{j}][unit] = {int(N[i, j, u])}"
    # Frobenius reciprocity: N[i][j][k] = N[dual(i)][k][j] = N[k][dual(j)][i]
    perm_d = np.array(dual)
    A = N[perm_d][:, :, :].transpose(0, 2, 1)  # A[i][j][k] = N[dual i][k][j]
    if not (N == A).all():
        i, j, k = map(int, np.argwhere(N != A)[0])
        return f"Frobenius reciprocity fails at ({i},{j},{k}): N={int(N[i,j,k])} vs N[dual({i})][{k}][{j}]={int(A[i,j,k])}"
    B = N[:, perm_d, :].transpose(2, 1, 0)  # B[i][j][k] = N[k][dual j][i]
    if not (N == B).all():
        i, j, k = map(int, np.argwhere(N != B)[0])
        return f"Frobenius reciprocity fails at ({i},{j},{k}): N={int(N[i,j,k])} vs N[{k}][dual({j})][{i}]={int(B[i,j,k])}"
    # associativity: sum_m N[i][j][m] N[m][k][l] = sum_m N[j][k][m] N[i][m][l]
    lhs = np.einsum("ijm,mkl->ijkl", N, N)
    rhs = np.einsum("jkm,iml->ijkl", N, N)
    if not (lhs == rhs).all():
        i, j, k, l = map(int, np.argwhere(lhs != rhs)[0])
        return (
            f"associativity fails at (x{i}*x{j})*x{k} vs x{i}*(x{j}*x{k}) "
            f"in coefficient of x{l}: {int(lhs[i,j,k,l])} != {int(rhs[i,j,k,l])}"
        )
    return None


def _perron_dims(ring: FusionRing) -> tuple[QuadNumber, ...]:
    """Frobenius-Perron dimensions: numeric Perron eigenvector, recognized
    into Q(sqrt5), then re-verified exactly against the structure tensor."""
    n = ring.rank
    A = ring.N_np.sum(axis=0).astype(np.float64)  # A[j][k] = sum_i N[i][j][k]
    v = np.ones(n)
    for _ in range(10000):
        w = A @ v
        w /= np.linalg.norm(w)
        if np.linalg.norm(w - v) < 1e-15:
            v = w
            break
        v = w
    v = v / v[ring.unit]
    dims = []
    for i in range(n):
        x = recognize_float(float(v[i]), 1e-9)
        if x is None:
            raise FPRecognitionError(
                f"dimension of basis index {i} ({ring.labels[i]}) of {ring.name!r} "
                f"is not on the Q(sqrt5) half-integer lattice (approx {v[i]!r})"
            )
        dims.append(x)
    # exact verification of the homomorphism identity
    for i in range(n):
        for j in range(n):
            lhs = dims[i] * dims[j]
            rhs = QuadNumber(0)
            for k in range(n):
                c = ring.N[i][j][k]
                if c:
                    rhs = rhs + c * dims[k]
            if lhs != rhs:
                raise FPRecognitionError(
                    f"recognized dimensions fail the homomorphism identity at ({i},{j})"
                )
    for x in dims:
        if x.sign() <= 0:
            raise FPRecognitionError("nonpositive recognized dimension")
    return tuple(dims)


def fp_dims(ring: FusionRing) -> tuple[tuple[QuadNumber, ...], QuadNumber]:
    """Exact Frobenius-Perron dimensions and the global dimension."""
    return ring.dims, ring.global_dim


# ---------------------------------------------------------------------------
# crossed products


def crossed_product(ring: FusionRing, theta: tuple[int, ...], n: int) -> FusionRing:
    """Crossed product by the order-n ring automorphism theta.

    Basis {x_i g^k}, product (x_i g^k)(x_j g^l) = (x_i theta^k(x_j)) g^(k+l);
    carries the natural Z/n grading.
    """
    r = ring.rank
    theta = tuple(int(t) for t in theta)
    if sorted(theta) != list(range(r)):
        raise ValueError("theta is not a permutation of the basis")
    if theta[ring.unit] != ring.unit:
        raise ValueError("theta does not fix the unit")
    for i in range(r):
        if theta[ring.dual[i]] != ring.dual[theta[i]]:
            raise ValueError("theta does not commute with duality")
        for j in range(r):
            for k in range(r):
                if ring.N[theta[i]][theta[j]][theta[k]] != ring.N[i][j][k]:
                    raise ValueError("theta does not preserve the structure tensor")
    powers = [list(range(r))]
    for _ in range(n - 1):
        powers.append([theta[i] for i in powers[-1]])
    check = [theta[i] for i in powers[-1]]
    if check != list(range(r)):
        raise ValueError(f"theta^{n} is not the identity")

    def idx(i: int, k: int) -> int:
        return k * r + i

    rank = r * n

    def make_labels(unit_stub: str) -> list[str]:
        out = []
        for k in range(n):
            for i, base in enumerate(ring.labels):
                if k == 0:
                    out.append(base)
                elif i == ring.unit:
                    out.append(f"{unit_stub}{k}")
                else:
                    out.append(f"{base}_g{k}")
        return out

    labels = make_labels("g")
    if len(set(labels)) != rank:  # base ring already uses g1, g2, ...
        labels = make_labels("e_g")
    N = [[[0] * rank for _ in range(rank)] for _ in range(rank)]
    for k in range(n):
        thk = powers[k]
        for l in range(n):
            kl = (k + l) % n
            for i in range(r):
                for j in range(r):
                    row = ring.N[i][thk[j]]
                    for m in range(r):
                        if row[m]:
                            N[idx(i, k)][idx(j, l)][idx(m, kl)] = row[m]
    dual = [0] * rank
    for k in range(n):
        inv_k = (-k) % n
        th_inv_k = powers[inv_k]
        for i in range(r):
            dual[idx(i, k)] = idx(th_inv_k[ring.dual[i]], inv_k)
    grading = Grading(
        factors=(n,), degree=tuple((k,) for k in range(n) for _ in range(r))
    )
    name = ring.name if n == 1 else f"{ring.name}x{n}"
    # the degree-0 copy of the base ring keeps its shorthands
    padded = {
        key: tuple(v) + (0,) * (rank - r) for key, v in ring.shorthands.items()
    }
    out = FusionRing(
        name,
        tuple(labels),
        ring.unit,
        tuple(dual),
        tuple(tuple(tuple(row) for row in plane) for plane in N),
        shorthands=padded,
        grading=grading if n > 1 else None,
    )
    return out


# ---------------------------------------------------------------------------
# isomorphism


def _refine_classes(ring: FusionRing) -> tuple[int, ...]:
    """Weisfeiler-Leman style class refinement of the basis; isomorphism
    invariants used to prune the bijection search."""
    n = ring.rank
    classes = [
        (ring.dims[i], ring.dual[i] == i, i == ring.unit) for i in range(n)
    ]
    ids = _relabel(classes)
    while True:
        sig = []
        for i in range(n):
            prof = sorted(
                (ids[j], ids[k], ring.N[i][j][k])
                for j in range(n)
                for k in range(n)
                if ring.N[i][j][k]
            )
            sig.append((ids[i], ids[ring.dual[i]], tuple(prof)))
        new = _relabel(sig)
        if new == ids:
            return ids
        ids = new


def _relabel(keys: list) -> tuple[int, ...]:
    order = {k: c for c, k in enumerate(sorted(set(keys), key=repr))}
    return tuple(order[k] for k in keys)


def find_isomorphism(R: FusionRing, S: FusionRing) -> tuple[int, ...] | None:
    """A basis bijection phi with unit, dual and N preserved, or None.

    Backtracking over basis images, pruned by FP dimensions and iterated
    class refinement; exhaustive, so None means no isomorphism exists.
    """
    n = R.rank
    if n != S.rank:
        return None
    if sorted(R.dims) != sorted(S.dims):
        return None
    cr, cs = _refine_classes(R), _refine_classes(S)
    if sorted(cr) != sorted(cs):
        return None
    candidates = [[t for t in range(n) if cs[t] == cr[i]] for i in range(n)]
    order = sorted(range(n), key=lambda i: len(candidates[i]))
    phi = [-1] * n
    used = [False] * n

    def consistent(i: int) -> bool:
        if i == R.unit and phi[i] != S.unit:
            return False
        di = R.dual[i]
        if phi[di] >= 0 and phi[di] != S.dual[phi[i]]:
            return False
        for j in range(n):
            if phi[j] < 0:
                continue
            for k in range(n):
                if phi[k] < 0:
                    continue
                if R.N[i][j][k] != S.N[phi[i]][phi[j]][phi[k]]:
                    return False
                if R.N[j][i][k] != S.N[phi[j]][phi[i]][phi[k]]:
                    return False
                if R.N[j][k][i] != S.N[phi[j]][phi[k]][phi[i]]:
                    return False
        return True

    def place(pos: int) -> bool:
        if pos == n:
            return True
        i = order[pos]
        for t in candidates[i]:
            if used[t]:
                continue
            phi[i] = t
            used[t] = True
            if consistent(i) and place(pos + 1):
                return True
            used[t] = False
            phi[i] = -1
        return False

    if place(0):
        return tuple(phi)
    return None


def opposite_ring(ring: FusionRing) -> FusionRing:
    """Same basis with reversed multiplication order."""
    n = ring.rank
    N = tuple(
        tuple(tuple(ring.N[j][i][k] for k in range(n)) for j in range(n))
        for i in range(n)
    )
    return FusionRing(
        f"{ring.name}^op", ring.labels, ring.unit, ring.dual, N,
        shorthands=ring.shorthands,
    )


# ---------------------------------------------------------------------------
# gradings from subrings


def is_subring(ring: FusionRing, indices: frozenset[int] | set[int]) -> bool:
    idx = set(indices)
    if ring.unit not in idx:
        return False
    if any(ring.dual[i] not in idx for i in idx):
        return False
    for i in idx:
        for j in idx:
            if any(ring.N[i][j][k] and k not in idx for k in range(ring.rank)):
                return False
    return True


def grading_from_subring(ring: FusionRing, trivial: set[int]) -> Grading | None:
    """Grading whose trivial component is the given subring, if one exists.

    Components come from the reachability relation
    i ~ j iff supp(x_i * x_dual(j)) meets the trivial set; returns None when
    the induced partition violates the grading axiom.
    """
    if not is_subring(ring, trivial):
        raise ValueError("trivial component is not a subring")
    n = ring.rank
    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x: int, y: int) -> None:
        parent[find(x)] = find(y)

    for i in range(n):
        for j in range(n):
            dj = ring.dual[j]
            if any(ring.N[i][dj][k] and k in trivial for k in range(n)):
                union(i, j)
    comp_of = [find(i) for i in range(n)]
    reps = sorted(set(comp_of), key=lambda r: min(i for i in range(n) if comp_of[i] == r))
    comp_index = {r: c for c, r in enumerate(reps)}
    labels = [comp_index[comp_of[i]] for i in range(n)]
    m = len(reps)
    if set(i for i in range(n) if labels[i] == labels[ring.unit]) != set(trivial):
        return None
    # induced product must send each pair of components to one component
    table = [[-1] * m for _ in range(m)]
    for i in range(n):
        for j in range(n):
            targets = {labels[k] for k in range(n) if ring.N[i][j][k]}
            if len(targets) != 1:
                return None
            t = targets.pop()
            cell = table[labels[i]][labels[j]]
            if cell == -1:
                table[labels[i]][labels[j]] = t
            elif cell != t:
                return None
    unit_comp = labels[ring.unit]
    decomp = _abelian_decompose(table, unit_comp)
    if decomp is None:
        return None
    factors, elem = decomp
    grading = Grading(factors=factors, degree=tuple(elem[labels[i]] for i in range(n)))
    if grading.check(ring) is not None:
        return None
    return grading


def _abelian_decompose(
    table: list[list[int]], unit: int
) -> tuple[tuple[int, ...], list[tuple[int, ...]]] | None:
    """Cyclic factor list and explicit coordinates for a finite group table;
    None if the table is not an abelian group."""
    m = len(table)
    for a in range(m):
        for b in range(m):
            if table[a][b] != table[b][a]:
                return None
            if table[unit][a] != a or table[a][unit] != a:
                return None
    # associativity + inverses
    for a in range(m):
        if all(table[a][b] != unit for b in range(m)):
            return None
        for b in range(m):
            for c in range(m):
                if table[table[a][b]][c] != table[a][table[b][c]]:
                    return None
    if m == 1:
        return (1,), [(0,)]

    def orders() -> list[int]:
        out = []
        for a in range(m):
            k, x = 1, a
            while x != unit:
                x = table[x][a]
                k += 1
            out.append(k)
        return out

    ords = sorted(orders())
    for factors in _invariant_factorizations(m):
        target = sorted(_cyclic_product_orders(factors))
        if target != ords:
            continue
        iso = _find_group_coords(table, unit, factors)
        if iso is not None:
            return factors, iso
    return None


def _invariant_factorizations(m: int) -> list[tuple[int, ...]]:
    """All tuples (d1, ..., dk) with d_i | d_{i+1} and product m."""
    if m == 1:
        return [(1,)]
    out: list[tuple[int, ...]] = []

    def rec(rest: int, min_d: int, acc: tuple[int, ...]) -> None:
        if rest == 1:
            if acc:
                out.append(acc)
            return
        d = min_d
        while d <= rest:
            if rest % d == 0 and (not acc or d % acc[-1] == 0):
                rec(rest // d, d, acc + (d,))
            d += 1

    rec(m, 2, ())
    return out


def _cyclic_product_orders(factors: tuple[int, ...]) -> list[int]:
    import math

    out = []
    for coords in itertools.product(*(range(f) for f in factors)):
        o = 1
        for c, f in zip(coords, factors):
            if c:
                o = o * (f // math.gcd(c, f)) // math.gcd(o, f // math.gcd(c, f))
        out.append(o)
    return out


def _find_group_coords(
    table: list[list[int]], unit: int, factors: tuple[int, ...]
) -> list[tuple[int, ...]] | None:
    """Explicit isomorphism to prod Z/factors by choosing generator images."""
    m = len(table)

    def power(a: int, k: int) -> int:
        x = unit
        for _ in range(k):
            x = table[x][a]
        return x

    for gens in itertools.permutations(range(m), len(factors)):
        coords: dict[int, tuple[int, ...]] = {}
        ok = True
        for tup in itertools.product(*(range(f) for f in factors)):
            x = unit
            for g, k in zip(gens, tup):
                x = table[x][power(g, k)]
            if x in coords:
                ok = False
                break
            coords[x] = tup
        if ok and len(coords) == m:
            return [coords[a] for a in range(m)]
    return None


# ---------------------------------------------------------------------------
# catalog


def _build_ring(name, labels, unit, dual, entries, shorthands=None) -> FusionRing:
    """entries: dict (i, j) -> dict k -> coeff; omitted pairs are zero."""
    n = len(labels)
    N = [[[0] * n for _ in range(n)] for _ in range(n)]
    for (i, j), prods in entries.items():
        for k, c in prods.items():
            N[i][j][k] = c
    ring = FusionRing(
        name, tuple(labels), unit, tuple(dual),
        tuple(tuple(tuple(row) for row in plane) for plane in N),
        shorthands=shorthands,
    )
    report = validate_ring(ring)
    if report is not None:
        raise AssertionError(f"catalog ring {name!r} is invalid: {report}")
    return ring


def _group_ring(name: str, elements, table, labels=None) -> FusionRing:
    n = len(elements)
    index = {e: i for i, e in enumerate(elements)}
    unit = 0
    entries = {}
    for a in elements:
        for b in elements:
            entries[(index[a], index[b])] = {index[table(a, b)]: 1}
    dual = [0] * n
    for a in elements:
        for b in elements:
            if table(a, b) == elements[unit]:
                dual[index[a]] = index[b]
    labels = labels or [f"g{i}" for i in range(n)]
    labels = ["1"] + list(labels[1:])
    return _build_ring(name, labels, unit, dual, entries)


def _haagerup_izumi(name: str, elements, add, neg) -> FusionRing:
    """HI ring for an abelian group: basis {a_g} + {a_g r}, with
    r*r = 1 + sum_g a_g r and a_g r = r a_(-g)."""
    k = len(elements)
    index = {e: i for i, e in enumerate(elements)}
    n = 2 * k
    entries: dict[tuple[int, int], dict[int, int]] = {}
    for g in elements:
        for h in elements:
            gi, hi = index[g], index[h]
            entries[(gi, hi)] = {index[add(g, h)]: 1}
            entries[(gi, k + hi)] = {k + index[add(g, h)]: 1}
            entries[(k + gi, hi)] = {k + index[add(g, neg(h))]: 1}
            prods = {index[add(g, neg(h))]: 1}
            for f in elements:
                prods[k + index[f]] = 1
            entries[(k + gi, k + hi)] = prods
    dual = [index[neg(g)] for g in elements] + [k + index[g] for g in elements]
    labels = ["1"] + [f"a{i}" for i in range(1, k)] + ["r"] + [
        f"a{i}r" for i in range(1, k)
    ]
    gamma = tuple([1] * k + [0] * k)
    shorthands = {("Gamma" if "Z2xZ2" in name else "Pi"): gamma}
    if name == "HI-Z4":
        phi = [0] * n
        phi[0] = 1
        phi[index[(2,)] if (2,) in index else 2] = 1
        shorthands["Phi"] = tuple(phi)
    return _build_ring(name, labels, 0, dual, entries, shorthands)


def _ring_4442() -> FusionRing:
    # basis 1, al, al2, b, x, alx, al2x, bx;  al^3 = 1,
    # b*b = 1 + al + al2 + 2b, al*b = b*al = b, x*al = al*x, x*b = b*x,
    # x*x = 1 + x + bx; remaining products follow by associativity.
    I, AL, AL2, B, X, ALX, AL2X, BX = range(8)
    xs = [X, ALX, AL2X]  # al^i x

    def al_pow(i):
        return [I, AL, AL2][i % 3]

    entries: dict[tuple[int, int], dict[int, int]] = {}
    for i in range(3):
        for j in range(3):
            entries[(al_pow(i), al_pow(j))] = {al_pow(i + j): 1}
            entries[(al_pow(i), xs[j])] = {xs[(i + j) % 3]: 1}
            entries[(xs[j], al_pow(i))] = {xs[(i + j) % 3]: 1}
        entries[(al_pow(i), B)] = {B: 1}
        entries[(B, al_pow(i))] = {B: 1}
        entries[(al_pow(i), BX)] = {BX: 1}
        entries[(BX, al_pow(i))] = {BX: 1}
        entries[(B, xs[i])] = {BX: 1}
        entries[(xs[i], B)] = {BX: 1}
    entries[(B, B)] = {I: 1, AL: 1, AL2: 1, B: 2}
    entries[(B, BX)] = {X: 1, ALX: 1, AL2X: 1, BX: 2}
    entries[(BX, B)] = {X: 1, ALX: 1, AL2X: 1, BX: 2}
    for i in range(3):
        for j in range(3):
            entries[(xs[i], xs[j])] = {al_pow(i + j): 1, xs[(i + j) % 3]: 1, BX: 1}
        entries[(xs[i], BX)] = {B: 1, X: 1, ALX: 1, AL2X: 1, BX: 3}
        entries[(BX, xs[i])] = {B: 1, X: 1, ALX: 1, AL2X: 1, BX: 3}
    entries[(BX, BX)] = {I: 1, AL: 1, AL2: 1, B: 2, X: 3, ALX: 3, AL2X: 3, BX: 9}
    labels = ["1", "al", "al2", "b", "x", "alx", "al2x", "bx"]
    dual = [I, AL2, AL, B, X, AL2X, ALX, BX]
    shorthands = {"Lambda": (1, 1, 1, 0, 0, 0, 0, 0)}
    return _build_ring("4442", labels, I, dual, entries, shorthands)


def _ring_2d2() -> FusionRing:
    # basis 1, a, r, ar; a^2 = 1, ar = ra, r*r = 1 + 2r + 2ar
    I, A, R, AR = range(4)
    entries = {
        (I, I): {I: 1}, (I, A): {A: 1}, (I, R): {R: 1}, (I, AR): {AR: 1},
        (A, I): {A: 1}, (A, A): {I: 1}, (A, R): {AR: 1}, (A, AR): {R: 1},
        (R, I): {R: 1}, (R, A): {AR: 1},
        (R, R): {I: 1, R: 2, AR: 2},
        (R, AR): {A: 1, R: 2, AR: 2},
        (AR, I): {AR: 1}, (AR, A): {R: 1},
        (AR, R): {A: 1, R: 2, AR: 2},
        (AR, AR): {I: 1, R: 2, AR: 2},
    }
    return _build_ring("2D2", ["1", "a", "r", "ar"], I, [I, A, R, AR], entries)


def _ring_rep_a4() -> FusionRing:
    # basis 1, w, w2, t with w^3 = 1, wt = tw = t, t*t = 1 + w + w2 + 2t
    I, W, W2, T = range(4)
    entries = {
        (I, I): {I: 1}, (I, W): {W: 1}, (I, W2): {W2: 1}, (I, T): {T: 1},
        (W, I): {W: 1}, (W, W): {W2: 1}, (W, W2): {I: 1}, (W, T): {T: 1},
        (W2, I): {W2: 1}, (W2, W): {I: 1}, (W2, W2): {W: 1}, (W2, T): {T: 1},
        (T, I): {T: 1}, (T, W): {T: 1}, (T, W2): {T: 1},
        (T, T): {I: 1, W: 1, W2: 1, T: 2},
    }
    return _build_ring("RepA4", ["1", "w", "w2", "t"], I, [I, W2, W, T], entries)


def _ring_fib() -> FusionRing:
    entries = {
        (0, 0): {0: 1}, (0, 1): {1: 1}, (1, 0): {1: 1},
        (1, 1): {0: 1, 1: 1},
    }
    return _build_ring("Fib", ["1", "t"], 0, [0, 1], entries)


def _z2xz2():
    els = [(0, 0), (1, 0), (0, 1), (1, 1)]
    add = lambda g, h: ((g[0] + h[0]) % 2, (g[1] + h[1]) % 2)
    neg = lambda g: g
    return els, add, neg


def _z4():
    els = [(0,), (1,), (2,), (3,)]
    add = lambda g, h: ((g[0] + h[0]) % 4,)
    neg = lambda g: ((-g[0]) % 4,)
    return els, add, neg


def _a4_elements():
    """Even permutations of 4 points as tuples."""
    els = [p for p in itertools.permutations(range(4)) if _parity(p) == 0]
    els.sort()
    els.remove((0, 1, 2, 3))
    return [(0, 1, 2, 3)] + els


def _parity(p) -> int:
    inv = sum(1 for i in range(len(p)) for j in range(i + 1, len(p)) if p[i] > p[j])
    return inv % 2


def _theta_c2() -> tuple[int, ...]:
    """3-cycle on the nontrivial elements of Z2xZ2, fixing r, acting the
    same way on the a_g r part."""
    els, add, _neg = _z2xz2()
    cyc = {(0, 0): (0, 0), (1, 0): (0, 1), (0, 1): (1, 1), (1, 1): (1, 0)}
    index = {e: i for i, e in enumerate(els)}
    perm = [index[cyc[e]] for e in els]
    return tuple(perm + [4 + p for p in perm])


def _catalog() -> dict:
    def hi_z2xz2():
        els, add, neg = _z2xz2()
        return _haagerup_izumi("HI-Z2xZ2", els, add, neg)

    def hi_z4():
        els, add, neg = _z4()
        return _haagerup_izumi("HI-Z4", els, add, neg)

    def c2():
        base = hi_z2xz2()
        ring = crossed_product(base, _theta_c2(), 3)
        ring.name = "C2"
        return ring

    def vec(name, els, add):
        return _group_ring(name, els, add)

    return {
        "HI-Z2xZ2": hi_z2xz2,
        "HI-Z4": hi_z4,
        "4442": _ring_4442,
        "2D2": _ring_2d2,
        "C2": c2,
        "RepA4": _ring_rep_a4,
        "Fib": _ring_fib,
        "trivial": lambda: _group_ring("trivial", [0], lambda a, b: 0),
        "VecZ2": lambda: _group_ring("VecZ2", [0, 1], lambda a, b: (a + b) % 2),
        "VecZ3": lambda: _group_ring("VecZ3", [0, 1, 2], lambda a, b: (a + b) % 3),
        "VecZ4": lambda: _group_ring("VecZ4", list(range(4)), lambda a, b: (a + b) % 4),
        "VecZ2xZ2": lambda: _group_ring(
            "VecZ2xZ2", _z2xz2()[0], _z2xz2()[1]
        ),
        "VecA4": lambda: _group_ring(
            "VecA4", _a4_elements(), lambda a, b: tuple(a[b[i]] for i in range(4))
        ),
    }


_CATALOG_CACHE: dict[str, FusionRing] = {}


def catalog_names() -> tuple[str, ...]:
    return tuple(_catalog().keys())


def catalog_ring(name: str) -> FusionRing:
    """Validated ring from the built-in catalog; raises on unknown names."""
    if name not in _catalog():
        raise KeyError(
            f"unknown ring {name!r}; catalog: {', '.join(catalog_names())}"
        )
    if name not in _CATALOG_CACHE:
        _CATALOG_CACHE[name] = _catalog()[name]()
    return _CATALOG_CACHE[name]
