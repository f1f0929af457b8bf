import itertools

import pytest
from hypothesis import given, settings, strategies as st

from refscissors.ring import (RingSpecError, h0_units_on_A, least_irreducible, mu2, parse_ring_spec,
                              unit_group, w_set)

from conftest import ring

CORPUS = ["gf:2", "gf:3", "gf:4", "gf:5", "gf:7", "gf:8", "gf:9", "zmod:4", "zmod:6", "zmod:8", "zmod:9",
          "prod:gf:3,zmod:4"]


def test_parse_round_trip():
    for s in CORPUS:
        assert str(parse_ring_spec(s)) == s


@pytest.mark.parametrize("bad", ["gf:6", "zmod:1", "foo:3", "gf", "gf:x", "prod:gf:3", "prod:gf:3,prod:gf:2,gf:2"])
def test_parse_rejects(bad):
    with pytest.raises(RingSpecError):
        parse_ring_spec(bad)


@pytest.mark.parametrize("spec", CORPUS)
def test_ring_axioms_exhaustive(spec):
    R = ring(spec)
    els = list(R.elements())
    one, zero = R.one, R.zero
    for a in els:
        assert R.add(a, zero) == a and R.mul(a, one) == a
        assert R.add(a, R.neg(a)) == zero
    for a, b in itertools.product(els, repeat=2):
        assert R.add(a, b) == R.add(b, a)
        assert R.mul(a, b) == R.mul(b, a)
    sample = els if len(els) <= 12 else els[:12]
    for a, b, c in itertools.product(sample, repeat=3):
        assert R.mul(a, R.add(b, c)) == R.add(R.mul(a, b), R.mul(a, c))
        assert R.mul(R.mul(a, b), c) == R.mul(a, R.mul(b, c))


@pytest.mark.parametrize("spec", CORPUS)
def test_units_brute_force(spec):
    R = ring(spec)
    brute = [a for a in R.elements() if any(R.mul(a, b) == R.one for b in R.elements())]
    assert sorted(R.units) == brute
    for a in brute:
        assert R.mul(a, R.inv(a)) == R.one


def test_field_and_local_flags():
    assert ring("gf:9").is_field() and ring("gf:9").is_local()
    assert not ring("zmod:9").is_field() and ring("zmod:9").is_local()
    assert not ring("zmod:6").is_local()
    assert not ring("prod:gf:3,gf:2").is_local()


def test_least_irreducible():
    # x^2 + 1 over F_3, x^2 + x + 1 over F_2, x^3 + x + 1 over F_2 (coefficients low to high)
    assert least_irreducible(3, 2) == [1, 0, 1]
    assert least_irreducible(2, 2) == [1, 1, 1]
    assert least_irreducible(2, 3) == [1, 1, 0, 1]


@pytest.mark.parametrize("spec,inv", [("gf:5", [4]), ("gf:4", [3]), ("zmod:8", [2, 2]), ("gf:9", [8]),
                                      ("zmod:9", [6]), ("prod:gf:5,gf:4", [12])])
def test_unit_group_structure(spec, inv):
    U = unit_group(ring(spec))
    assert U.structure.torsion == inv
    assert U.structure.order() == len(ring(spec).units)


@pytest.mark.parametrize("spec", CORPUS)
def test_unit_vectors_are_homomorphic(spec):
    R = ring(spec)
    U = unit_group(R)
    S = U.structure
    for a in R.units:
        for b in R.units[:6]:
            lhs = S.coords(dict(enumerate(U.vector(R.mul(a, b)))))
            rhs = S.add_coords(S.coords(dict(enumerate(U.vector(a)))), S.coords(dict(enumerate(U.vector(b)))))
            assert lhs == rhs


def test_mu2_and_w():
    assert sorted(mu2(ring("zmod:8"))) == [1, 3, 5, 7]
    assert mu2(ring("gf:4")) == [ring("gf:4").one]
    assert len(w_set(ring("gf:5"))) == 3
    assert w_set(ring("zmod:4")) == []


@pytest.mark.parametrize("spec,expect", [("gf:3", [3]), ("gf:7", []), ("gf:5", []), ("zmod:9", [3]),
                                         ("gf:2", [2]), ("zmod:4", [4])])
def test_h0_units_on_A(spec, expect):
    # brute force: A modulo the additive span of (a^2 - 1) b
    R = ring(spec)
    span = {R.zero}
    gens = {R.mul(R.sub(R.mul(a, a), R.one), b) for a in R.units for b in R.elements()}
    frontier = list(span)
    while frontier:
        x = frontier.pop()
        for g in gens:
            y = R.add(x, g)
            if y not in span:
                span.add(y)
                frontier.append(y)
    H = h0_units_on_A(R)
    assert H.order() == R.size // len(span)
    assert H.torsion == expect


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(["gf:7", "gf:8", "gf:9", "gf:16", "zmod:12"]), st.data())
def test_pow_matches_repeated_mul(spec, data):
    R = ring(spec)
    a = data.draw(st.integers(0, R.size - 1))
    e = data.draw(st.integers(0, 20))
    x = R.one
    for _ in range(e):
        x = R.mul(x, a)
    assert R.pow(a, e) == x
