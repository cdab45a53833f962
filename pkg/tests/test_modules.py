from __future__ import annotations

import pytest

from fusionkit.arith import D, QuadNumber, QuadRoot
from fusionkit.modules import (
    FusionModule,
    algebra_table,
    canonical_form,
    dim_vector,
    grade_module,
    internal_end,
    modules_equivalent,
    regular_module,
    restrict_and_decompose,
    validate_module,
)
from fusionkit.rings import catalog_ring, find_isomorphism


@pytest.fixture(scope="module")
def hi22():
    return catalog_ring("HI-Z2xZ2")


def test_regular_modules_validate():
    for name in ("trivial", "Fib", "HI-Z4", "HI-Z2xZ2", "4442", "2D2", "C2"):
        ring = catalog_ring(name)
        assert validate_module(regular_module(ring)) is None, name


def test_frobenius_violation_detected(hi22):
    reg = regular_module(hi22)
    mats = [list(map(list, m)) for m in reg.mats]
    mats[4][0][1] += 1  # breaks transpose symmetry of the self-dual rho action
    bad = FusionModule(hi22, mats)
    report = validate_module(bad)
    assert report is not None
    assert "Frobenius" in report or "associativity" in report


def test_direct_sum_is_decomposable(hi22):
    reg = regular_module(hi22)
    r = reg.rank
    mats = []
    for m in reg.mats:
        big = [[0] * (2 * r) for _ in range(2 * r)]
        for a in range(r):
            for b in range(r):
                big[a][b] = m[a][b]
                big[r + a][r + b] = m[a][b]
        mats.append(big)
    bad = FusionModule(hi22, mats)
    report = validate_module(bad)
    assert report is not None and "decomposable" in report


def test_dim_vector_regular(hi22):
    vec = dim_vector(regular_module(hi22))
    assert [v.exact for v in vec.values] == [QuadNumber(1)] * 4 + [D] * 4
    assert vec.total_square() == hi22.global_dim


def test_dim_vector_trivial():
    triv = catalog_ring("trivial")
    vec = dim_vector(regular_module(triv))
    assert vec.values == (QuadRoot.of(QuadNumber(1)),)


def test_internal_end_regular(hi22):
    reg = regular_module(hi22)
    # at rho: 1 + Gamma*rho, by the rho^2 fusion rule
    assert internal_end(reg, 4).coeffs == (1, 0, 0, 0, 1, 1, 1, 1)
    assert internal_end(reg, hi22.unit).coeffs == (1, 0, 0, 0, 0, 0, 0, 0)
    vec = dim_vector(reg)
    for a in range(reg.rank):
        assert internal_end(reg, a).dim() == vec.values[a].square
        assert internal_end(reg, a).is_algebra_candidate()


def test_algebra_table_regular(hi22):
    table = algebra_table(regular_module(hi22))
    sig = [(ov.coeffs, k) for ov, k in table]
    assert sig == [
        ((1, 0, 0, 0, 0, 0, 0, 0), 4),
        ((1, 0, 0, 0, 1, 1, 1, 1), 4),
    ]


def test_algebra_table_trivial_ring():
    triv = catalog_ring("trivial")
    table = algebra_table(regular_module(triv))
    assert [(ov.coeffs, k) for ov, k in table] == [((1,), 1)]


def test_modules_equivalent_permuted_copy(hi22):
    reg = regular_module(hi22)
    perm = [3, 1, 0, 2, 7, 5, 6, 4]
    mats = [
        [[m[perm[a]][perm[b]] for b in range(8)] for a in range(8)]
        for m in reg.mats
    ]
    other = FusionModule(hi22, mats)
    assert validate_module(other) is None
    w = modules_equivalent(other, reg)
    assert w is not None
    for i in range(8):
        for a in range(8):
            for b in range(8):
                assert other.mats[i][a][b] == reg.mats[i][w[a]][w[b]]
    assert modules_equivalent(reg, reg) is not None
    assert canonical_form(other) == canonical_form(reg)


def test_restrict_full_ring_is_identity(hi22):
    reg = regular_module(hi22)
    [back] = restrict_and_decompose(reg, set(range(hi22.rank)))
    assert modules_equivalent(back, reg) is not None


def test_restrict_c2_to_base():
    c2 = catalog_ring("C2")
    reg = regular_module(c2)
    parts = restrict_and_decompose(reg, set(range(8)))
    assert len(parts) == 3
    base = catalog_ring("HI-Z2xZ2")
    base_reg = regular_module(base)
    for piece in parts:
        assert piece.rank == 8
        assert find_isomorphism(piece.ring, base) is not None
        # compare over the same ring object: rebuild on base labels
        rebuilt = FusionModule(base, piece.mats)
        assert validate_module(rebuilt) is None
        assert modules_equivalent(rebuilt, base_reg) is not None
        vec = dim_vector(rebuilt)
        assert vec.total_square() == base.global_dim


def test_restrict_4442_to_beta_subring():
    c1 = catalog_ring("4442")
    reg = regular_module(c1)
    parts = restrict_and_decompose(reg, {0, 1, 2, 3})
    rep = catalog_ring("RepA4")
    assert len(parts) == 2
    for piece in parts:
        assert piece.rank == 4
        assert find_isomorphism(piece.ring, rep) is not None


def test_restrict_rejects_non_subring(hi22):
    with pytest.raises(ValueError):
        restrict_and_decompose(regular_module(hi22), {0, 4})


def test_grade_c2_regular():
    c2 = catalog_ring("C2")
    labels = grade_module(regular_module(c2), c2.grading)
    assert labels is not None
    blocks: dict[tuple[int, ...], int] = {}
    for x in labels:
        blocks[x] = blocks.get(x, 0) + 1
    assert sorted(blocks.values()) == [8, 8, 8]


def test_grade_trivially_graded(hi22):
    from fusionkit.rings import Grading

    triv = Grading(factors=(1,), degree=tuple((0,) for _ in range(8)))
    labels = grade_module(regular_module(hi22), triv)
    assert labels is not None and len(set(labels)) == 1


def test_grade_inconsistent_module_returns_none():
    # Z/2-graded ring VecZ2; a rank-1 module where the degree-1 element
    # acts by identity cannot be graded
    from fusionkit.rings import Grading

    z2 = catalog_ring("VecZ2")
    grading = Grading(factors=(2,), degree=((0,), (1,)))
    assert grading.check(z2) is None
    mod = FusionModule(z2, (((1,),), ((1,),)))
    assert validate_module(mod) is None
    assert grade_module(mod, grading) is None
