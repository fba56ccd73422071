"""Property suites behind ``toricroots verify``.

Each suite returns a ``CheckResult``. Suites are deterministic given their
bound and seed; randomized ones draw from ``random.Random(seed)``.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import gcd, lcm

from .cones import (
    FACE,
    INTERIOR_NO_RAYS,
    ZERO_ONLY,
    Cone,
    ConeError,
    Hyperplane,
    relative_position,
)
from .demazure import make_root
from .lattice import LatticeMap, content, pairing
from .lnd import (
    AlgebraElement,
    apply,
    decompose,
    nhrv_nilpotency_bound,
    nilpotency_oracle,
    power,
    shift_degrees,
    table_derivation,
)
from .restriction import (
    INFINITE,
    ONE,
    RV_DIM,
    RV_INFINITE,
    RV_ONE,
    RV_UNKNOWN,
    RestrictionError,
    SubtorusRestriction,
    classify,
    cremona_roots,
    fiber,
)
from .surface import (
    CASE31,
    CASE32,
    CASE33,
    SurfaceData,
    ah_invariants,
    case33_family,
    classify_surface,
    lambda_members,
)


@dataclass
class CheckResult:
    name: str
    passed: bool
    details: dict = field(default_factory=dict)

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.name}"

    def to_dict(self) -> dict:
        return {"suite": self.name, "passed": self.passed, "details": self.details}


def _fail(details: dict, key: str, item) -> None:
    details.setdefault(key, [])
    if len(details[key]) < 10:
        details[key].append(item)


def _orthant(n: int) -> Cone:
    return Cone(tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))


def example_45(bound: int = 8) -> CheckResult:
    """Affine 3-space, subtorus {(s1, s1, s2)}: fibers of size 2 and c+1."""
    c = _orthant(3)
    s = SubtorusRestriction(((1, 1, 0), (0, 0, 1)))
    details: dict = {"sizes_two": 0, "sizes_c_plus_one": 0, "c_counts": []}
    ab_counts: set = set()
    ok = True
    for a in range(-1, bound + 1):
        for b in range(0, bound + 1):
            f = fiber(s, c, (a, b))
            if f.count != 2:
                ok = False
                _fail(details, "bad_ab", [a, b, f.count])
            details["sizes_two"] += 1
            ab_counts.add(f.count)
    for cc in range(0, bound + 1):
        f = fiber(s, c, (cc, -1))
        if f.count != cc + 1:
            ok = False
            _fail(details, "bad_c", [cc, f.count])
        details["sizes_c_plus_one"] += 1
        details["c_counts"].append([cc, f.count])
    details["ab_counts"] = sorted(ab_counts)
    # no other T-roots appear in the box
    report = classify(s, c, bound)
    expected = {(a, b) for a in range(-1, 2 * bound + 1) for b in range(0, bound + 1)}
    expected |= {(cc, -1) for cc in range(0, 2 * bound + 1)}
    stray = [list(t) for t in report.t_roots if t not in expected]
    if stray:
        ok = False
        details["unexpected_t_roots"] = stray[:10]
    return CheckResult("example-4.5", ok, details)


def cremona(bound: int = 3, ns=(2, 3, 4)) -> CheckResult:
    ok = True
    details: dict = {}
    for n in ns:
        got = {(r.i, r.alpha, r.character()) for r in cremona_roots(n, bound)}
        want = set()
        for i in range(n):
            for alpha in product(range(bound + 1), repeat=n):
                if alpha[i] == 0 and sum(alpha) <= bound:
                    parts = [f"t{i + 1}^-1"] + [f"t{j + 1}" + (f"^{x}" if x > 1 else "")
                                                for j, x in enumerate(alpha) if x]
                    want.add((i + 1, alpha, "*".join(parts)))
        details[f"n={n}"] = len(got)
        if got != want:
            ok = False
            details[f"n={n}_missing"] = sorted(map(str, want - got))[:10]
            details[f"n={n}_extra"] = sorted(map(str, got - want))[:10]
    return CheckResult("cremona", ok, details)


def random_instance(rng: random.Random, tag: str, ranks=(2, 3), box: int = 3):
    """Rejection-sample a (cone, subtorus) pair whose position has ``tag``."""
    while True:
        d = rng.choice(ranks)
        k = rng.randint(d, d + 2)
        gens = [tuple(rng.randint(-box, box) for _ in range(d)) for _ in range(k)]
        try:
            c = Cone(tuple(gens))
        except ConeError:
            continue
        m = tuple(rng.randint(-box, box) for _ in range(d))
        if content(m) != 1:
            continue
        h = Hyperplane.from_normal(m)
        if relative_position(c, h).tag == tag:
            return c, SubtorusRestriction.from_hyperplane(h)


def zero_only(bound: int = 8, seed: int = 0, count: int = 20) -> CheckResult:
    rng = random.Random(seed)
    ok = True
    details: dict = {"instances": []}
    for _ in range(count):
        c, s = random_instance(rng, ZERO_ONLY)
        report = classify(s, c, bound)
        bad = [list(t) for t, f in report.fibers.items() if f.cardinality_class != ONE]
        homog = all(f.all_homogeneous is True for f in report.fibers.values())
        # m_T has constant strict sign on the nonzero cone points
        signs = {pairing(r, s.m_T) > 0 for r in c.rays}
        good = not bad and report.bijective and homog and len(signs) == 1
        ok &= good
        details["instances"].append({"rays": [list(r) for r in c.rays], "m_T": list(s.m_T),
                                     "t_roots": len(report.t_roots), "ok": good,
                                     "bad_fibers": bad[:5]})
    return CheckResult("zero-only", ok, details)


def interior_no_rays(bound: int = 8, seed: int = 1, count: int = 20) -> CheckResult:
    rng = random.Random(seed)
    ok = True
    details: dict = {"instances": []}
    for _ in range(count):
        c, s = random_instance(rng, INTERIOR_NO_RAYS)
        report = classify(s, c, bound)
        worst = 0
        good = True
        for f in report.fibers.values():
            if f.cardinality_class == INFINITE or any(not iv.finite for iv in f.intervals):
                good = False
                continue
            worst = max(worst, f.count)
            # certificate: interval sizes add up and every preimage is a root
            if sum(iv.size() for iv in f.intervals) != f.count or len(f.preimages) != f.count:
                good = False
        good &= worst <= 2
        ok &= good
        details["instances"].append({"rays": [list(r) for r in c.rays], "m_T": list(s.m_T),
                                     "max_fiber": worst, "ok": good})
    return CheckResult("interior-no-rays", ok, details)


def face_case(bound: int = 6) -> CheckResult:
    c = _orthant(3)
    s = SubtorusRestriction.from_hyperplane(Hyperplane.from_normal((0, 0, 1)))
    report = classify(s, c, bound)
    in_face = {(1, 0, 0), (0, 1, 0)}
    details = {"position": report.position.to_dict(),
               "disjoint": all(report.disjoint_images.values())}
    ok = report.position.tag == FACE and report.position.dim == 2
    ok &= details["disjoint"]
    for ray, inj in report.injective_on_ray.items():
        ok &= inj == (ray not in in_face)
    for f in report.fibers.values():
        (ray,) = f.rays
        if ray in in_face:
            prog = f.progression()
            good = (f.cardinality_class == INFINITE and f.root_vector_class == RV_INFINITE
                    and prog is not None and prog["step"] in ([0, 0, 1], [0, 0, -1]))
        else:
            good = f.cardinality_class == ONE
        if not good:
            ok = False
            _fail(details, "bad_fibers", f.to_dict())
    ex = fiber(s, c, s.restrict((-1, 0, 0)), bound)
    details["example_progression"] = ex.progression()
    ok &= ex.progression() == {"ray": [1, 0, 0], "start": [-1, 0, 0], "step": [0, 0, 1]}
    return CheckResult("face", ok, details)


NHRV_SURFACES = ((0, 1, 1, 1), (1, 2, 1, 1), (1, 3, 1, 1), (2, 3, 1, 1), (2, 5, 1, 2))


def _monomials_in_box(c: Cone, size: int) -> list[tuple[int, ...]]:
    return [m for m in product(range(-size, size + 1), repeat=c.rank) if c.in_dual(m)]


def nhrv_family(seed: int = 2, box: int = 6, pairs: int = 100, params: int = 10) -> CheckResult:
    rng = random.Random(seed)
    ok = True
    details: dict = {"instances": []}
    for tup in NHRV_SURFACES:
        sd = SurfaceData(*tup)
        lam = lambda_members(sd, 50)
        e = lam.first
        c = sd.cone
        chars = _monomials_in_box(c, box)
        pi = LatticeMap((sd.line,))
        inst = {"surface": list(tup), "e": e, "leibniz": True, "homogeneous": True,
                "nilpotent": True}
        for _ in range(params):
            alpha = Fraction(rng.choice([-3, -2, -1, 1, 2, 3]), rng.randint(1, 3))
            beta = Fraction(rng.choice([-3, -2, -1, 1, 2, 3]), rng.randint(1, 3))
            d = case33_family(sd, e, alpha, beta)
            e1 = tuple(d.descriptor["e1"])
            e2 = tuple(d.descriptor["e2"])
            m_T = tuple(d.descriptor["m_T"])
            for _ in range(pairs):
                a, b = rng.choice(chars), rng.choice(chars)
                xa, xb = AlgebraElement.chi(a), AlgebraElement.chi(b)
                if apply(d, xa * xb) != apply(d, xa) * xb + xa * apply(d, xb):
                    inst["leibniz"] = False
            if shift_degrees(d, chars, pi) != {pi(e1)}:
                inst["homogeneous"] = False
            r1 = make_root(c, e1)
            r2 = make_root(c, e2)
            # (lam*alpha, lam*beta) gives lam^(<n1,e2>+1) * d: same kernel of
            # every power, and integer coefficients keep the iteration cheap
            lam_ = lcm(alpha.denominator, beta.denominator)
            d_int = case33_family(sd, e, alpha * lam_, beta * lam_)
            scale_ = Fraction(lam_) ** (pairing(r1.ray, e2) + 1)
            if any(apply(d_int, AlgebraElement.chi(m)) != apply(d, AlgebraElement.chi(m)) * scale_
                   for m in chars[:5]):
                inst["nilpotent"] = False
            for m in chars:
                k = nhrv_nilpotency_bound(r1, r2, m_T, m)
                if power(d_int, AlgebraElement.chi(m), k + 1):
                    inst["nilpotent"] = False
        good = inst["leibniz"] and inst["homogeneous"] and inst["nilpotent"]
        ok &= good
        details["instances"].append(inst)
    return CheckResult("nhrv", ok, details)


def surface_grid(max_b: int = 10, max_q: int = 10, max_r: int = 10):
    for b in range(1, max_b + 1):
        for a in range(0, b):
            if gcd(a, b) != 1:
                continue
            for q in range(1, max_q + 1):
                for r in range(-max_r, max_r + 1):
                    if gcd(r, q) == 1:
                        yield a, b, r, q


def _brute_lambda_nonempty(sd: SurfaceData, lam) -> bool:
    """Merge the two progressions far enough to decide emptiness."""
    s1, d1, s2, d2 = lam.rho1_start, lam.rho1_step, lam.rho2_start, lam.rho2_step
    limit = max(s1, s2) + d1 * d2
    a = set(range(s1, limit + 1, d1))
    return any(x in a for x in range(s2, limit + 1, d2))


def lambda_criterion() -> CheckResult:
    ok = True
    details: dict = {"case3_tuples": 0}
    for tup in surface_grid():
        sd = SurfaceData(*tup)
        if sd.case not in (CASE31, CASE32, CASE33):
            continue
        details["case3_tuples"] += 1
        lam = lambda_members(sd, 0)
        brute = _brute_lambda_nonempty(sd, lam)
        if not (lam.criterion_nonempty == lam.nonempty == brute):
            ok = False
            _fail(details, "lambda_mismatch", list(tup))
        if lam.nonempty:
            m0, k0 = lam.witness
            # r + r*m1 + q*m2 = m0*q - k0*D, read through the two images
            if -sd.r + m0 * sd.q != lam.rho2_start + k0 * sd.D or k0 < 0:
                ok = False
                _fail(details, "bad_witness", list(tup))
        inv = ah_invariants(sd)
        if inv["p2_integral"] != (sd.D == 1) or inv["p1_integral"] != (sd.q == 1):
            ok = False
            _fail(details, "integrality_mismatch", list(tup))
    return CheckResult("lambda-criterion", ok, details)


_RV_MAP = {RV_ONE: "1", RV_INFINITE: "infinite"}


def table_agreement(sd: SurfaceData, bound: int = 12) -> list:
    """Disagreements between the surface table and certified fibers."""
    case = classify_surface(sd, bound)
    report = classify(sd.restriction, sd.cone, bound)
    bad = []
    for t in report.t_roots:
        f = report.fibers[t]
        row = case.row(t[0])
        count_ok = row.fiber_count == f.count
        if f.root_vector_class == RV_UNKNOWN:
            rv_ok = row.root_vectors in ("2", "P1") and (row.root_vectors == "P1") == bool(
                f.nhrv_pairs)
        elif f.root_vector_class == RV_DIM:
            rv_ok = row.root_vectors == str(f.root_vector_dimension)
        else:
            rv_ok = row.root_vectors == _RV_MAP[f.root_vector_class]
        if f.all_homogeneous is None:
            # toric data alone leaves this open; only the two-root, no-family row may say yes
            hom_ok = row.all_homogeneous and row.root_vectors == "2"
        else:
            hom_ok = row.all_homogeneous == f.all_homogeneous
        if not (count_ok and rv_ok and hom_ok):
            bad.append({"t_root": t[0], "row": row.to_dict(), "fiber": f.to_dict()})
    return bad


def surface_table(bound: int = 12) -> CheckResult:
    ok = True
    details: dict = {"tuples": 0, "cases": {}}
    for tup in surface_grid():
        sd = SurfaceData(*tup)
        details["tuples"] += 1
        details["cases"][sd.case] = details["cases"].get(sd.case, 0) + 1
        bad = table_agreement(sd, bound)
        if bad:
            ok = False
            _fail(details, "disagreements", {"surface": list(tup), "first": bad[0]})
    return CheckResult("surface-table", ok, details)


def random_triangular(rng: random.Random) -> list[AlgebraElement]:
    """Images of x1, x2, x3 for d x1 = f(x2, x3), d x2 = g(x3), d x3 = const."""
    def coef():
        return Fraction(rng.choice([-3, -2, -1, 1, 2, 3]), rng.randint(1, 2))
    f = AlgebraElement([((0, rng.randint(0, 3), rng.randint(0, 3)), coef())
                        for _ in range(rng.randint(1, 3))])
    g = AlgebraElement([((0, 0, rng.randint(0, 3)), coef()) for _ in range(rng.randint(1, 2))])
    h = AlgebraElement([((0, 0, 0), coef())]) if rng.random() < 0.8 else AlgebraElement()
    return [f, g, h]


def _vertices_by_directions(points, reach: int = 10):
    pts = sorted(set(points))
    found = set()
    for w in product(range(-reach, reach + 1), repeat=len(pts[0])):
        vals = [pairing(w, p) for p in pts]
        top = max(vals)
        if vals.count(top) == 1:
            found.add(pts[vals.index(top)])
    return sorted(found)


def decomposition(seed: int = 3, count: int = 20, max_iter: int = 50) -> CheckResult:
    rng = random.Random(seed)
    c = _orthant(3)
    gens = [(1, 0, 0), (0, 1, 0), (0, 0, 1)]
    ok = True
    details: dict = {"instances": []}
    for _ in range(count):
        images = random_triangular(rng)
        d = table_derivation(c, gens, images, known_lnd=True)
        dec = decompose(d, gens, max_iter)
        sums = all(dec.total_on(g) == d.on_char(g) for g in gens)
        verts = dec.vertices == _vertices_by_directions(list(dec.pieces))
        nil = all(v.nilpotent for v in dec.vertex_verdicts.values())
        good = sums and verts and nil
        ok &= good
        details["instances"].append({"images": [im.to_dict() for im in images],
                                     "degrees": [list(e) for e in dec.pieces],
                                     "vertices": [list(v) for v in dec.vertices],
                                     "ok": good})
    return CheckResult("decomposition", ok, details)


def corank_two_counterexample(max_iter: int = 10, max_degree: int = 5) -> CheckResult:
    c = _orthant(3)
    gens = [(1, 0, 0), (0, 1, 0), (0, 0, 1)]
    images = [AlgebraElement.chi((0, 1, 1)), AlgebraElement.chi((0, 0, 0)), AlgebraElement()]
    d = table_derivation(c, gens, images)
    s = SubtorusRestriction(((1, 1, -1),))
    details: dict = {}
    try:
        fiber(s, c, (0,))
        details["corank_guard"] = False
    except RestrictionError:
        details["corank_guard"] = True
    probes = [m for m in product(range(max_degree + 1), repeat=3) if sum(m) <= max_degree]
    t_degrees = shift_degrees(d, probes, s.pi)
    details["t_degrees"] = sorted(list(t) for t in t_degrees)
    verdict = nilpotency_oracle(d, [AlgebraElement.chi(m) for m in probes], max_iter)
    details["oracle"] = verdict.to_dict()
    if not verdict.nilpotent:
        worst = []
        for m in probes:
            v = nilpotency_oracle(d, [AlgebraElement.chi(m)], max_iter)
            if not v.nilpotent:
                worst.append(list(m))
        details["probes_not_within"] = worst
    dec = decompose(d, gens)
    details["m_degrees"] = [list(e) for e in dec.pieces]
    ok = (details["corank_guard"] and t_degrees == {(-1,)} and verdict.nilpotent
          and len(dec.pieces) == 2)
    return CheckResult("corank-two", ok, details)


SUITES = {
    "example-4.5": lambda bound, seed: example_45(bound),
    "cremona": lambda bound, seed: cremona(bound),
    "zero-only": lambda bound, seed: zero_only(bound, seed),
    "interior-no-rays": lambda bound, seed: interior_no_rays(bound, seed + 1),
    "face": lambda bound, seed: face_case(bound),
    "nhrv": lambda bound, seed: nhrv_family(seed + 2),
    "lambda-criterion": lambda bound, seed: lambda_criterion(),
    "surface-table": lambda bound, seed: surface_table(bound),
    "decomposition": lambda bound, seed: decomposition(seed + 3),
    "corank-two": lambda bound, seed: corank_two_counterexample(),
}

DEFAULT_BOUNDS = {"example-4.5": 8, "cremona": 3, "zero-only": 8, "interior-no-rays": 8,
                  "face": 6, "surface-table": 12}


def run_suite(name: str, bound: int | None = None, seed: int = 0) -> CheckResult:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
    if bound is None:
        bound = DEFAULT_BOUNDS.get(name, 8)
    return SUITES[name](bound, seed)
