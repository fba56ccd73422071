import random
from itertools import product

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from toricroots.cones import (
    FACE,
    INTERIOR_NO_RAYS,
    INTERIOR_WITH_RAYS,
    ZERO_ONLY,
    Cone,
    ConeError,
    Hyperplane,
    relative_position,
)
from toricroots.demazure import is_root, roots_within
from toricroots.lattice import content, dual_unit, orthogonal_basis, pairing, primitive
from toricroots.restriction import (
    INFINITE,
    ONE,
    RV_INFINITE,
    RestrictionError,
    SubtorusRestriction,
    classify,
    cremona_roots,
    cremona_setup,
    fiber,
    restrict_root,
)
from toricroots.schemas import validate

Q3 = Cone(((1, 0, 0), (0, 1, 0), (0, 0, 1)))
EX45 = SubtorusRestriction(((1, 1, 0), (0, 0, 1)))
FACE_T = SubtorusRestriction.from_hyperplane(Hyperplane.from_normal((0, 0, 1)))


def scan_fiber(s, c, t, reach=200):
    """Roots on the line lift(t) + k*m_T for |k| <= reach, straight from the definition."""
    base = s.lift(t)
    return [k for k in range(-reach, reach + 1)
            if is_root(c, tuple(b + k * m for b, m in zip(base, s.m_T))) is not None]


def test_restrict_root_examples():
    assert restrict_root(EX45, (-1, 4, -1)) == (3, -1)
    assert restrict_root(EX45, EX45.m_T) == (0, 0)
    _, s = cremona_setup(4)
    e = (-1, 0, 0, 0)
    assert restrict_root(s, e) == restrict_root(s, tuple(x + 1 for x in e))


def test_subtorus_validation():
    assert EX45.m_T == (1, -1, 0)
    with pytest.raises(RestrictionError):
        SubtorusRestriction(((2, 0, 0), (0, 1, 0)))
    with pytest.raises(RestrictionError):
        SubtorusRestriction(((1, 0), (0, 1)))
    with pytest.raises(RestrictionError):
        SubtorusRestriction(((1, 0, 0), (0, 1, 0), (1, 1, 0)))


@given(st.integers(-10, 10), st.integers(-10, 10))
def test_lift_is_section(a, b):
    assert EX45.restrict(EX45.lift((a, b))) == (a, b)


def test_example_45_fibers():
    f = fiber(EX45, Q3, (3, -1))
    assert f.cardinality_class == "Exactly" and f.count == 4
    assert sorted(p.e for p in f.preimages) == [(e1, 3 - e1, -1) for e1 in range(4)]
    for a in range(-1, 5):
        for b in range(0, 4):
            assert fiber(EX45, Q3, (a, b)).count == 2
    assert fiber(EX45, Q3, (2, -1)).preimages == tuple(
        sorted(fiber(EX45, Q3, (2, -1)).preimages))


def test_face_case_fiber():
    f = fiber(FACE_T, Q3, restrict_root(FACE_T, (-1, 0, 0)), bound=4)
    assert f.cardinality_class == INFINITE and f.count is None
    assert f.root_vector_class == RV_INFINITE
    prog = f.progression()
    start, step = prog["start"], prog["step"]
    # the progression is (-1, 0, k), k >= 0
    assert {tuple(start[i] + k * step[i] for i in range(3)) for k in range(5)} == \
        {(-1, 0, k) for k in range(5)}


def test_classify_examples():
    c, s = cremona_setup(3)
    rep = classify(s, c, 3)
    assert rep.position.tag == ZERO_ONLY and rep.bijective
    assert all(f.cardinality_class == ONE for f in rep.fibers.values())
    assert all(f.all_homogeneous for f in rep.fibers.values())

    rep = classify(EX45, Q3, 4)
    assert rep.position.tag == INTERIOR_WITH_RAYS
    assert rep.fibers[(3, -1)].count == 4 and rep.fibers[(1, 1)].count == 2

    rep = classify(FACE_T, Q3, 3)
    assert rep.position.tag == FACE
    assert all(rep.disjoint_images.values())
    assert rep.injective_on_ray[(0, 0, 1)]
    assert not rep.injective_on_ray[(1, 0, 0)] and not rep.injective_on_ray[(0, 1, 0)]
    validate({"command": "classify", "status": "ok", "bound": 3, "seed": None,
              "result": rep.to_dict()}, "report")


def test_corank_two_is_rejected():
    s = SubtorusRestriction(((1, 1, -1),))
    assert s.m_T is None
    assert restrict_root(s, (-1, 1, 1)) == (-1,)
    with pytest.raises(RestrictionError):
        fiber(s, Q3, (0,))
    with pytest.raises(RestrictionError):
        classify(s, Q3, 2)


def test_cremona_examples():
    got = {r.derivation() for r in cremona_roots(2, 2)}
    want = {"d/dx1", "x2*d/dx1", "x2^2*d/dx1", "d/dx2", "x1*d/dx2", "x1^2*d/dx2"}
    assert got == want
    assert len(cremona_roots(3, 1)) == 9
    assert [r.derivation() for r in cremona_roots(2, 0)] == ["d/dx1", "d/dx2"]
    with pytest.raises(RestrictionError):
        cremona_roots(1, 2)


@st.composite
def instances(draw):
    d = draw(st.sampled_from((2, 3)))
    gens = draw(st.lists(st.tuples(*[st.integers(-2, 2)] * d), min_size=d, max_size=d + 1))
    m = draw(st.tuples(*[st.integers(-3, 3)] * d))
    assume(any(m) and content(m) == 1)
    try:
        c = Cone(tuple(gens))
    except ConeError:
        assume(False)
    return c, SubtorusRestriction.from_hyperplane(Hyperplane.from_normal(m))


@settings(max_examples=40, deadline=None)
@given(instances())
def test_fibers_match_brute_force(inst):
    c, s = inst
    bound = 3
    rep = classify(s, c, bound)
    roots = roots_within(c, bound)
    # surjectivity witness: the T-roots are exactly the images of in-box roots
    assert set(rep.t_roots) == {s.restrict(r.e) for r in roots}
    tag = rep.position.tag
    for t, f in rep.fibers.items():
        got = {p.e for p in f.preimages}
        hits = scan_fiber(s, c, t)
        if f.count is not None:
            assert len(got) == f.count == len(hits)
            assert max(abs(k) for k in hits) < 150
        else:
            assert max(abs(k) for k in hits) == 200
        if tag == ZERO_ONLY:
            assert f.cardinality_class == ONE
        if tag == INTERIOR_NO_RAYS:
            assert f.count is not None and f.count <= 2
        for e in got:
            assert s.restrict(e) == t and is_root(c, e) is not None


def interior_with_rays_instances(count, seed=0):
    """Rank-3 cones with a hyperplane through one ray and across the interior."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        gens = [tuple(rng.randint(-2, 2) for _ in range(3)) for _ in range(rng.randint(3, 4))]
        try:
            c = Cone(tuple(gens))
        except ConeError:
            continue
        r = rng.choice(c.rays)
        v = tuple(rng.randint(-3, 3) for _ in range(3))
        m = (r[1] * v[2] - r[2] * v[1], r[2] * v[0] - r[0] * v[2], r[0] * v[1] - r[1] * v[0])
        if not any(m):
            continue
        h = Hyperplane.from_normal(primitive(m))
        if relative_position(c, h).tag == INTERIOR_WITH_RAYS:
            out.append((c, SubtorusRestriction.from_hyperplane(h)))
    return out


@pytest.mark.parametrize("c, s", interior_with_rays_instances(15))
def test_interior_with_rays_has_big_fiber(c, s):
    pos = relative_position(c, s.hyperplane())
    for ray in pos.rays:
        # a root far enough from the walls where m_T is negative survives a shift by m_T
        u, w = orthogonal_basis(ray)
        e0 = tuple(-x for x in dual_unit(ray))
        plane = (tuple(a + i * b + j * d for a, b, d in zip(e0, u, w))
                 for i in range(-40, 41) for j in range(-40, 41))
        witness = next(
            (e for e in plane
             if is_root(c, e) == ray and all(
                 pairing(n, e) >= -pairing(n, s.m_T)
                 for n in c.rays if n != ray and pairing(n, s.m_T) < 0)),
            None)
        assert witness is not None
        f = fiber(s, c, s.restrict(witness))
        assert f.count is not None and f.count >= 2
        assert f.count == len(scan_fiber(s, c, s.restrict(witness)))


def test_fiber_json_schema():
    f = fiber(EX45, Q3, (3, -1))
    d = f.to_dict()
    assert d["count"] == 4 and d["cardinality"] == "Exactly"
    assert pairing((1, 1, 0), EX45.m_T) == 0
