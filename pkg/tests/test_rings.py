from __future__ import annotations

import pytest

from fusionkit.arith import D, QuadNumber
from fusionkit.rings import (
    Grading,
    catalog_names,
    catalog_ring,
    crossed_product,
    find_isomorphism,
    fp_dims,
    grading_from_subring,
    opposite_ring,
    validate_ring,
)


def _tamper(ring, i, j, k, value):
    N = [[list(row) for row in plane] for plane in ring.N]
    N[i][j][k] = value
    from fusionkit.rings import FusionRing

    return FusionRing(
        ring.name + "-tampered",
        ring.labels,
        ring.unit,
        ring.dual,
        tuple(tuple(tuple(r) for r in p) for p in N),
    )


def test_every_catalog_ring_validates():
    for name in catalog_names():
        ring = catalog_ring(name)
        assert validate_ring(ring) is None, name


def test_catalog_unknown_name():
    with pytest.raises(KeyError, match="HI-Z2xZ2"):
        catalog_ring("nosuch")


def test_hi_z4_validates_and_perturbation_breaks_associativity():
    ring = catalog_ring("HI-Z4")
    assert validate_ring(ring) is None
    rho = ring.labels.index("r")
    bad = _tamper(ring, rho, rho, rho, 2)
    report = validate_ring(bad)
    assert report is not None and "associativity" in report


def test_duality_violation_detected():
    ring = catalog_ring("HI-Z4")
    # N[i][j][unit] = 1 for j != dual(i) is a duality violation
    bad = _tamper(ring, 1, 1, ring.unit, 1)
    report = validate_ring(bad)
    assert report is not None
    assert "duality" in report or "Frobenius" in report


def test_fp_dims_hi_rings():
    for name in ("HI-Z4", "HI-Z2xZ2"):
        ring = catalog_ring(name)
        dims, total = fp_dims(ring)
        assert dims == (QuadNumber(1),) * 4 + (D,) * 4
        assert total == 4 + 4 * D * D


def test_fp_dims_4442():
    ring = catalog_ring("4442")
    dims, total = fp_dims(ring)
    expect = [1, 1, 1, 3, D, D, D, 3 * D]
    assert list(dims) == [QuadNumber(x) if isinstance(x, int) else x for x in expect]
    assert total == 12 + 12 * D * D


def test_fp_dims_2d2_and_trivial():
    ring = catalog_ring("2D2")
    dims, total = fp_dims(ring)
    assert list(dims) == [QuadNumber(1), QuadNumber(1), D, D]
    assert total == 2 + 2 * D * D
    triv = catalog_ring("trivial")
    assert fp_dims(triv) == ((QuadNumber(1),), QuadNumber(1))


def test_fp_homomorphism_identity_everywhere():
    for name in catalog_names():
        ring = catalog_ring(name)
        dims = ring.dims
        for i in range(ring.rank):
            for j in range(ring.rank):
                rhs = QuadNumber(0)
                for k in range(ring.rank):
                    rhs = rhs + ring.N[i][j][k] * dims[k]
                assert dims[i] * dims[j] == rhs, (name, i, j)


def test_crossed_product_identity():
    ring = catalog_ring("HI-Z4")
    same = crossed_product(ring, tuple(range(ring.rank)), 1)
    assert same == ring


def test_crossed_product_z2_to_z2xz2():
    z2 = catalog_ring("VecZ2")
    prod = crossed_product(z2, (0, 1), 2)
    # 4-element table of Z/2 x Z/2, written out explicitly
    expect = catalog_ring("VecZ2xZ2")
    assert find_isomorphism(prod, expect) is not None


def test_c2_structure():
    c2 = catalog_ring("C2")
    assert validate_ring(c2) is None
    assert c2.rank == 24
    assert len(c2.invertibles) == 12
    assert c2.global_dim == 12 + 12 * D * D
    base = catalog_ring("HI-Z2xZ2")
    assert c2.global_dim == 3 * base.global_dim


def test_crossed_product_rejects_non_automorphism():
    ring = catalog_ring("HI-Z2xZ2")
    # swapping unit with a1 is not an automorphism
    theta = list(range(ring.rank))
    theta[0], theta[1] = theta[1], theta[0]
    with pytest.raises(ValueError):
        crossed_product(ring, tuple(theta), 2)


def test_find_isomorphism_reflexive_and_symmetric():
    for name in ("HI-Z4", "4442", "2D2"):
        ring = catalog_ring(name)
        phi = find_isomorphism(ring, ring)
        assert phi is not None
        # witness is invertible: inverse permutation also works
        inv = [0] * ring.rank
        for i, t in enumerate(phi):
            inv[t] = i
        for i in range(ring.rank):
            for j in range(ring.rank):
                for k in range(ring.rank):
                    assert ring.N[i][j][k] == ring.N[phi[i]][phi[j]][phi[k]]


def test_hi_z4_not_isomorphic_to_hi_z2xz2():
    a, b = catalog_ring("HI-Z4"), catalog_ring("HI-Z2xZ2")
    # invertible groups Z/4 vs Z/2 x Z/2 differ (element orders), so the
    # exhaustive search must come back empty
    orders_a = sorted(_order(a, g) for g in a.invertibles)
    orders_b = sorted(_order(b, g) for g in b.invertibles)
    assert orders_a != orders_b
    assert find_isomorphism(a, b) is None


def _order(ring, g):
    k, x = 1, g
    while x != ring.unit:
        x = ring.group_table[(x, g)]
        k += 1
    return k


def test_regular_ring_vs_opposite():
    ring = catalog_ring("HI-Z4")
    op = opposite_ring(ring)
    assert validate_ring(op) is None
    assert find_isomorphism(ring, op) is not None


def test_grading_full_ring_is_trivial_group():
    ring = catalog_ring("HI-Z2xZ2")
    grading = grading_from_subring(ring, set(range(ring.rank)))
    assert grading is not None
    assert grading.order == 1


def test_grading_invertibles_of_hi_fails():
    # a_g r * a_h r meets both the group part and the rho part, so the
    # invertibles cannot be the trivial component of any grading
    ring = catalog_ring("HI-Z2xZ2")
    assert grading_from_subring(ring, set(ring.invertibles)) is None


def test_grading_not_a_subring_errors():
    ring = catalog_ring("HI-Z2xZ2")
    with pytest.raises(ValueError):
        grading_from_subring(ring, {ring.unit, 4})  # r*r leaves {1, r}


def test_c2_grading_by_embedded_base():
    c2 = catalog_ring("C2")
    grading = grading_from_subring(c2, set(range(8)))
    assert grading is not None
    assert grading.factors == (3,)
    comps = grading.components()
    assert sorted(len(v) for v in comps.values()) == [8, 8, 8]
    # components are dual-closed
    for idxs in comps.values():
        pass
    for g, idxs in comps.items():
        duals = {c2.dual[i] for i in idxs}
        assert duals == set(comps[grading.neg(g)])
    assert c2.grading is not None and c2.grading.degree == grading.degree


def test_grading_check_axioms():
    c2 = catalog_ring("C2")
    assert c2.grading.check(c2) is None
    bad = Grading(factors=(3,), degree=tuple((0,) for _ in range(24)))
    assert bad.check(c2) is None  # constant-zero degree is a (non-faithful) grading
    worse = Grading(factors=(3,), degree=((1,),) + tuple((0,) for _ in range(23)))
    assert worse.check(c2) is not None


def test_shorthands():
    ring = catalog_ring("HI-Z2xZ2")
    assert ring.shorthands["Gamma"] == (1, 1, 1, 1, 0, 0, 0, 0)
    z4 = catalog_ring("HI-Z4")
    assert z4.shorthands["Pi"] == (1, 1, 1, 1, 0, 0, 0, 0)
    assert z4.shorthands["Phi"] == (1, 0, 1, 0, 0, 0, 0, 0)
    c1 = catalog_ring("4442")
    assert c1.shorthands["Lambda"] == (1, 1, 1, 0, 0, 0, 0, 0)
    c2 = catalog_ring("C2")
    assert c2.shorthands["Gamma"] == (1, 1, 1, 1) + (0,) * 20


def test_object_vector_ops():
    ring = catalog_ring("HI-Z2xZ2")
    gamma = ring.vector(ring.shorthands["Gamma"])
    rho = ring.basis_vector(4)
    assert (gamma * rho).coeffs == (0, 0, 0, 0, 1, 1, 1, 1)
    assert (rho * rho).coeffs == (1, 0, 0, 0, 1, 1, 1, 1)
    assert gamma.dim() == QuadNumber(4)
    assert (rho * rho).dim() == 1 + 4 * D
    assert gamma.is_algebra_candidate()
    assert (ring.unit_vector() + rho).is_algebra_candidate()
    assert not (2 * ring.unit_vector()).is_algebra_candidate()
    z4 = catalog_ring("HI-Z4")
    one_a1 = z4.unit_vector() + z4.basis_vector(1)
    assert not one_a1.is_algebra_candidate()  # dual(a1) = a3
