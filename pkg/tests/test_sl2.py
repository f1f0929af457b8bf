import itertools

import pytest

from refscissors.sl2 import (CapExceeded, GroupTable, conjugate_by_w, det, elem_D, elem_E, enumerate_group, group,
                             is_ge2_ring, mat_inv, mat_mul, sl2_order, unimodular_columns, verify_ge2_relations)

from conftest import ring

CORPUS = ["gf:2", "gf:3", "gf:4", "gf:5", "gf:7", "zmod:4", "zmod:6", "zmod:8", "zmod:9"]


def brute_sl2(R):
    els = list(R.elements())
    return {X for X in itertools.product(els, repeat=4) if det(R, X) == R.one}


@pytest.mark.parametrize("spec", CORPUS + ["gf:9"])
def test_sl2_matches_determinant_filter(spec):
    R = ring(spec)
    G = group(R, "SL2")
    assert set(G.elements) == brute_sl2(R)
    assert len(G) == sl2_order(R)


@pytest.mark.parametrize("spec,order", [("gf:2", 6), ("gf:3", 24), ("gf:4", 60), ("gf:5", 120), ("gf:7", 336),
                                        ("zmod:4", 48), ("zmod:6", 144), ("zmod:8", 384), ("zmod:9", 648)])
def test_sl2_orders(spec, order):
    assert sl2_order(ring(spec)) == order


@pytest.mark.parametrize("spec", CORPUS)
def test_subgroup_orders_brute_force(spec):
    R = ring(spec)
    full = brute_sl2(R) if R.size <= 7 else set(group(R, "SL2").elements)
    z = R.zero
    mono = {X for X in full if (X[1] == z and X[2] == z) or (X[0] == z and X[3] == z)}
    borel = {X for X in full if X[2] == z}
    torus = {X for X in borel if X[1] == z}
    assert set(group(R, "SM2").elements) == mono
    assert set(group(R, "B").elements) == borel
    assert set(group(R, "T").elements) == torus
    assert len(borel) == len(R.units) * R.size


@pytest.mark.parametrize("spec", CORPUS)
def test_every_corpus_ring_is_ge2(spec):
    R = ring(spec)
    assert is_ge2_ring(R)
    assert len(group(R, "E2")) == sl2_order(R)


@pytest.mark.parametrize("spec", ["zmod:5", "zmod:8", "gf:4", "gf:9", "zmod:6", "prod:gf:3,gf:2"])
def test_relations_exhaustive(spec):
    rep = verify_ge2_relations(ring(spec))
    assert rep.exhaustive and rep.ok, rep.failures


def test_relations_sampled_on_larger_ring():
    rep = verify_ge2_relations(ring("gf:81"), samples=200)
    assert not rep.exhaustive and rep.ok


def test_matrix_helpers():
    R = ring("zmod:9")
    for x in range(9):
        E = elem_E(R, x)
        assert det(R, E) == 1
        assert mat_mul(R, E, mat_inv(R, E)) == (1, 0, 0, 1)
    with pytest.raises(ValueError):
        elem_D(R, 3)


@pytest.mark.parametrize("spec", ["gf:3", "gf:5", "zmod:4"])
def test_w_normalizes_torus(spec):
    R = ring(spec)
    T = set(group(R, "T").elements)
    assert {conjugate_by_w(R, X) for X in T} == T


@pytest.mark.parametrize("spec", ["gf:2", "gf:3", "gf:4", "zmod:4"])
def test_unimodular_columns(spec):
    R = ring(spec)
    cols = unimodular_columns(R)
    for (a, c), (b, d) in cols.items():
        assert det(R, (a, b, c, d)) == R.one
    brute = {(X[0], X[2]) for X in brute_sl2(R)}
    assert set(cols) == brute


def test_group_table_basics():
    Z6 = GroupTable.cyclic(6)
    Z6.verify()
    assert Z6.element_order(2) == 3 and Z6.abelianization_order() == 6
    S = group(ring("gf:2"), "SL2")
    assert S.abelianization_order() == 2      # SL2(F2) = S3
    assert group(ring("gf:3"), "SL2").abelianization_order() == 3
    assert group(ring("gf:5"), "SL2").abelianization_order() == 1


def test_caps():
    with pytest.raises(CapExceeded):
        enumerate_group(ring("gf:7"), "SL2", cap=100)
    with pytest.raises(ValueError):
        enumerate_group(ring("gf:3"), "GL2")
