import random
from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from toricroots.cones import Cone
from toricroots.demazure import make_root, roots_within
from toricroots.lattice import LatticeMap, pairing
from toricroots.lnd import (
    ZERO,
    AlgebraElement,
    OutsideWeightMonoid,
    PreconditionError,
    apply,
    convex_hull_vertices,
    decompose,
    derivation_sum,
    euler_derivation,
    from_descriptor,
    nhrv_derivation,
    nhrv_nilpotency_bound,
    nilpotency_oracle,
    power,
    root_lnd,
    shift_degrees,
    table_derivation,
)
from toricroots.schemas import validate
from toricroots.surface import SurfaceData, case33_family, lambda_members

chi = AlgebraElement.chi
Q2 = Cone(((1, 0), (0, 1)))
Q3 = Cone(((1, 0, 0), (0, 1, 0), (0, 0, 1)))
GENS3 = [(1, 0, 0), (0, 1, 0), (0, 0, 1)]


def leibniz_holds(d, chars, pairs, seed=0):
    rng = random.Random(seed)
    for _ in range(pairs):
        a, b = rng.choice(chars), rng.choice(chars)
        xa, xb = chi(a), chi(b)
        if apply(d, xa * xb) != apply(d, xa) * xb + xa * apply(d, xb):
            return False
    return True


def box(c, size):
    return [m for m in product(range(-size, size + 1), repeat=c.rank) if c.in_dual(m)]


def test_algebra_element_basics():
    f = chi((1, 0), 2) + chi((0, 1), Fraction(1, 2)) - chi((1, 0), 2)
    assert f == chi((0, 1), Fraction(1, 2))
    assert (chi((1, 0)) * chi((0, 2))).terms == {(1, 2): 1}
    assert not (f - f)
    assert AlgebraElement.from_dict(f.to_dict()) == f
    validate(f.to_dict(), "element")


def test_root_lnd_examples():
    d = root_lnd(Q2, make_root(Q2, (-1, 2)))
    assert d(chi((1, 0))) == chi((0, 2))
    assert d(chi((0, 3))) == ZERO
    assert d(chi((2, 1))) == chi((1, 3), 2)


def test_apply_examples():
    d = root_lnd(Q2, make_root(Q2, (-1, 0)))
    assert apply(d, chi((2, 0)) + chi((0, 1))) == chi((1, 0), 2)
    assert apply(d, chi((0, 0), 5)) == ZERO


def test_nhrv_apply_example():
    a, b = Fraction(2, 3), Fraction(-5, 7)
    d = nhrv_derivation(Q2, make_root(Q2, (-1, 1)), make_root(Q2, (1, -1)), (-1, 1), a, b)
    assert d(chi((1, 0))) == chi((0, 1), a * a) - chi((1, 0), a * b)
    assert d(chi((0, 1))) == chi((0, 1), a * b) - chi((1, 0), b * b)
    # columns are the images of x1, x2 in the basis (x1, x2): trace 0, determinant 0
    m = [[-a * b, -b * b], [a * a, a * b]]
    assert m[0][0] + m[1][1] == 0 and m[0][0] * m[1][1] - m[0][1] * m[1][0] == 0


def test_nhrv_exponent_zero_is_sum_of_roots():
    a, b = Fraction(3), Fraction(-1, 2)
    e1, e2 = make_root(Q2, (-1, 0)), make_root(Q2, (0, -1))
    d = nhrv_derivation(Q2, e1, e2, (-1, 1), a, b)
    ref = derivation_sum([root_lnd(Q2, e1, a), root_lnd(Q2, e2, b)])
    assert all(d(chi(m)) == ref(chi(m)) for m in box(Q2, 4))


def test_nhrv_degenerate_parameters():
    e1, e2 = make_root(Q2, (-1, 1)), make_root(Q2, (1, -1))
    k1 = pairing(e1.ray, e2.e)
    c2 = pairing(e2.ray, (-1, 1))
    a, b = Fraction(5, 3), Fraction(-2)
    d_b0 = nhrv_derivation(Q2, e1, e2, (-1, 1), a, 0)
    d_a0 = nhrv_derivation(Q2, e1, e2, (-1, 1), 0, b)
    r1, r2 = root_lnd(Q2, e1, a ** (k1 + 1)), root_lnd(Q2, e2, b * (-b * c2) ** k1)
    for m in box(Q2, 4):
        assert d_b0(chi(m)) == r1(chi(m))
        assert d_a0(chi(m)) == r2(chi(m))


def test_nhrv_preconditions():
    r = make_root
    with pytest.raises(PreconditionError) as err:
        nhrv_derivation(Q2, r(Q2, (-1, 1)), r(Q2, (-1, 0)), (-1, 1), 1, 1)
    assert err.value.code == "same_ray"
    with pytest.raises(PreconditionError) as err:
        nhrv_derivation(Q2, r(Q2, (-1, 1)), r(Q2, (1, -1)), (1, -1), 1, 1)
    assert err.value.code == "bad_m_T"
    with pytest.raises(PreconditionError) as err:
        nhrv_derivation(Q2, r(Q2, (-1, 2)), r(Q2, (1, -1)), (-1, 1), 1, 1)
    assert err.value.code == "restriction_mismatch"
    fake = r(Q2, (-1, 1)).__class__((1, 0), (0, 0))
    with pytest.raises(PreconditionError) as err:
        nhrv_derivation(Q2, fake, r(Q2, (1, -1)), (-1, 1), 1, 1)
    assert err.value.code == "not_a_root"


def test_outside_weight_monoid():
    d = root_lnd(Q2, make_root(Q2, (-1, 0)))
    with pytest.raises(OutsideWeightMonoid):
        d(chi((-1, 0)))


def test_nilpotency_oracle_examples():
    d = root_lnd(Q2, make_root(Q2, (-1, 0)))
    v = nilpotency_oracle(d, [chi((3, 0))], 20)
    assert v.nilpotent and v.steps == 4 and str(v) == "NilpotentWithin(4)"
    e = euler_derivation(Q2, (1, 1))
    v = nilpotency_oracle(e, [chi((1, 0))], 20)
    assert not v.nilpotent and not v.conclusive and str(v) == "NotWithin(20)"


SURFACES = [Cone(((1, 0), (0, 1))), Cone(((1, 0), (1, 2))), Cone(((1, 0), (2, 5)))]


@settings(max_examples=25, deadline=None)
@given(st.fractions(-3, 3, max_denominator=4).filter(bool),
       st.fractions(-3, 3, max_denominator=4).filter(bool),
       st.sampled_from([(0, 1, 1, 1), (1, 2, 1, 1), (2, 3, 1, 1), (2, 5, 1, 2)]))
def test_nhrv_properties(alpha, beta, tup):
    sd = SurfaceData(*tup)
    e = lambda_members(sd, 10).first
    d = case33_family(sd, e, alpha, beta)
    c = sd.cone
    chars = box(c, 3)
    assert leibniz_holds(d, chars, 200)
    e1, e2, m_T = (tuple(d.descriptor[k]) for k in ("e1", "e2", "m_T"))
    assert shift_degrees(d, chars, LatticeMap((sd.line,))) == {(sd.restrict(e1),)}
    # not homogeneous for the big torus
    assert len(shift_degrees(d, chars)) > 1
    r1, r2 = make_root(c, e1), make_root(c, e2)
    for m in chars:
        k = nhrv_nilpotency_bound(r1, r2, m_T, m)
        assert not power(d, chi(m), k + 1)


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(SURFACES + [Q3]), st.data())
def test_root_lnd_leibniz_and_degree(c, data):
    root = data.draw(st.sampled_from(roots_within(c, 2)))
    scalar = data.draw(st.fractions(-5, 5, max_denominator=5))
    d = root_lnd(c, root, scalar)
    chars = box(c, 2)
    assert leibniz_holds(d, chars, 200)
    if scalar:
        assert shift_degrees(d, chars) == {root.e}


def triangular(seed):
    rng = random.Random(seed)
    f = AlgebraElement([((0, rng.randint(0, 2), rng.randint(0, 2)), rng.randint(1, 3))])
    g = AlgebraElement([((0, 0, rng.randint(0, 2)), rng.randint(1, 3))])
    return [f, g, chi((0, 0, 0))]


@pytest.mark.parametrize("seed", range(5))
def test_table_derivation_leibniz(seed):
    d = table_derivation(Q3, GENS3, triangular(seed), known_lnd=True)
    assert leibniz_holds(d, box(Q3, 2), 200, seed)
    assert nilpotency_oracle(d, [chi(g) for g in GENS3], 50).nilpotent


def test_table_needs_free_monoid():
    c = Cone(((1, 0), (1, 2)))
    with pytest.raises(PreconditionError):
        table_derivation(c, [(0, 1), (2, -1)], [ZERO, ZERO])


def test_decompose_corank_two_derivation():
    d = table_derivation(Q3, GENS3, [chi((0, 1, 1)), chi((0, 0, 0)), ZERO])
    dec = decompose(d, GENS3)
    assert set(dec.pieces) == {(-1, 1, 1), (0, -1, 0)}
    assert set(dec.vertices) == set(dec.pieces)
    assert all(v.nilpotent for v in dec.vertex_verdicts.values())
    assert all(dec.total_on(g) == d(chi(g)) for g in GENS3)


def test_decompose_triangular_example():
    d = table_derivation(Q3, GENS3, [chi((0, 2, 0)), chi((0, 0, 1)), chi((0, 0, 0))])
    dec = decompose(d, GENS3)
    assert set(dec.pieces) == {(-1, 2, 0), (0, -1, 1), (0, 0, -1)}
    assert set(dec.vertices) == set(dec.pieces)
    assert all(v.nilpotent for v in dec.vertex_verdicts.values())


def test_decompose_homogeneous():
    d = root_lnd(Q3, make_root(Q3, (-1, 2, 1)), 3)
    dec = decompose(d, GENS3)
    assert list(dec.pieces) == [(-1, 2, 1)] and dec.vertices == [(-1, 2, 1)]
    for m in box(Q3, 2):
        assert dec.total_on(m) == d(chi(m))


def vertices_by_directions(points, reach=8):
    pts = sorted(set(points))
    found = set()
    for w in product(range(-reach, reach + 1), repeat=len(pts[0])):
        vals = [pairing(w, p) for p in pts]
        top = max(vals)
        if vals.count(top) == 1:
            found.add(pts[vals.index(top)])
    return sorted(found)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(*[st.integers(-2, 2)] * 3), min_size=1, max_size=7))
def test_convex_hull_vertices_oracle(points):
    assert convex_hull_vertices(points) == vertices_by_directions(points)


def test_descriptor_roundtrip():
    e1, e2 = make_root(Q2, (-1, 1)), make_root(Q2, (1, -1))
    ds = [
        root_lnd(Q2, e1, Fraction(3, 2)),
        nhrv_derivation(Q2, e1, e2, (-1, 1), Fraction(1, 2), 3),
        derivation_sum([root_lnd(Q2, e1), root_lnd(Q2, e2, -1)]),
        table_derivation(Q2, [(1, 0), (0, 1)], [chi((0, 1)), ZERO]),
    ]
    for d in ds:
        validate(d.descriptor, "derivation")
        d2 = from_descriptor(Q2, d.descriptor)
        assert all(d(chi(m)) == d2(chi(m)) for m in box(Q2, 3))


@pytest.mark.parametrize("i, j, k", [(0, 0, 3), (1, 0, 0), (2, 1, 1), (5, 0, 0), (3, 2, 0)])
def test_corank_two_derivation_exact_index(i, j, k):
    # weights x1 -> 2, x2 -> 1, x3 -> 0; each application drops the weight by one
    d = table_derivation(Q3, GENS3, [chi((0, 1, 1)), chi((0, 0, 0)), ZERO])
    n = 2 * i + j + 1
    assert power(d, chi((i, j, k)), n - 1)
    assert not power(d, chi((i, j, k)), n)
