"""Restriction of Demazure roots along a subtorus T of the big torus.

Characters restrict through pi: M -> M_T, the dual of the inclusion N_T -> N.
We identify M_T with Z^k through the dual basis of the chosen N_T basis, so
pi(e) is the vector of pairings of e with the basis vectors.

In corank one every fiber of pi is a line e0 + Z*m_T, and the roots on that
line are cut out by one equality and a few linear inequalities in the line
parameter. Solving those exactly gives fiber sizes that do not depend on any
enumeration box.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .cones import Cone, Hyperplane, RelativePosition, relative_position
from .demazure import DemazureRoot, roots_within
from .lattice import (
    LatticeError,
    LatticeMap,
    Vector,
    add,
    dual_unit,
    inverse,
    is_saturated,
    kernel_generator,
    pairing,
    scale,
    sub,
    vector,
)


class RestrictionError(ValueError):
    pass


def _floor_div(a: int, b: int) -> int:
    return a // b


def _ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


@dataclass(frozen=True)
class SubtorusRestriction:
    basis: tuple[Vector, ...]
    pi: LatticeMap = field(init=False, repr=False)
    m_T: Vector | None = field(init=False)
    _lift: tuple | None = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        try:
            basis = tuple(vector(b) for b in self.basis)
        except LatticeError as exc:
            raise RestrictionError(str(exc)) from None
        if not basis or len({len(b) for b in basis}) != 1:
            raise RestrictionError("basis must be nonempty with equal ranks")
        n = len(basis[0])
        if len(basis) >= n:
            raise RestrictionError("subtorus must be proper (basis shorter than the rank)")
        if not is_saturated(basis):
            raise RestrictionError("N_T basis must be independent and span a saturated sublattice")
        object.__setattr__(self, "basis", basis)
        object.__setattr__(self, "pi", LatticeMap(basis))
        if len(basis) == n - 1:
            m_T = kernel_generator(basis)
            w = dual_unit(m_T)
            # rows b_1..b_{n-1}, w form a lattice basis of N; its inverse lifts T-characters
            lift = inverse([list(b) for b in basis] + [list(w)])
            object.__setattr__(self, "m_T", m_T)
            object.__setattr__(self, "_lift", tuple(tuple(r) for r in lift))
        else:
            object.__setattr__(self, "m_T", None)
            object.__setattr__(self, "_lift", None)

    @classmethod
    def from_hyperplane(cls, h: Hyperplane) -> "SubtorusRestriction":
        return cls(h.basis)

    @classmethod
    def from_dict(cls, data: dict) -> "SubtorusRestriction":
        if "basis" in data:
            return cls(tuple(tuple(b) for b in data["basis"]))
        return cls.from_hyperplane(Hyperplane.from_normal(data["normal"]))

    @property
    def rank(self) -> int:
        return len(self.basis[0])

    @property
    def corank(self) -> int:
        return self.rank - len(self.basis)

    def hyperplane(self) -> Hyperplane:
        self._need_corank_one()
        return Hyperplane(self.m_T, self.basis)

    def to_dict(self) -> dict:
        out = {"basis": [list(b) for b in self.basis]}
        if self.m_T is not None:
            out["m_T"] = list(self.m_T)
        return out

    def _need_corank_one(self):
        if self.m_T is None:
            raise RestrictionError(
                f"operation needs a codimension-one subtorus, this one has corank {self.corank}")

    def restrict(self, e: Sequence[int]) -> Vector:
        return self.pi(e)

    def lift(self, t: Sequence[int]) -> Vector:
        """Some character ``x`` of the big torus with ``pi(x) == t``."""
        self._need_corank_one()
        t = list(vector(t)) + [0]
        if len(t) != self.rank:
            raise RestrictionError(f"T-character must have rank {self.rank - 1}")
        x = [sum(row[j] * t[j] for j in range(len(t))) for row in self._lift]
        assert all(c.denominator == 1 for c in x)
        return tuple(int(c) for c in x)


def restrict_root(s: SubtorusRestriction, e: Sequence[int]) -> Vector:
    return s.restrict(e)


@dataclass(frozen=True)
class RayInterval:
    """Parameters ``lam`` in ``[lo, hi]`` (None = unbounded) with
    ``base + lam*m_T`` a root at ``ray``."""

    ray: Vector
    lo: int | None
    hi: int | None

    @property
    def finite(self) -> bool:
        return self.lo is not None and self.hi is not None

    def size(self) -> int | None:
        return self.hi - self.lo + 1 if self.finite else None

    def to_dict(self) -> dict:
        return {"ray": list(self.ray), "lo": self.lo, "hi": self.hi}


ONE = "ExactlyOne"
EXACTLY = "Exactly"
INFINITE = "InfiniteCertified"

RV_ONE = "One"
RV_DIM = "Dim"
RV_INFINITE = "InfiniteDim"
RV_UNKNOWN = "Unknown"


@dataclass(frozen=True)
class FiberReport:
    t_root: Vector
    base: Vector  # a lift of t_root; the fiber is base + Z*m_T
    m_T: Vector
    intervals: tuple[RayInterval, ...]
    preimages: tuple[DemazureRoot, ...]  # all of them if finite, the in-box ones otherwise
    cardinality_class: str
    count: int | None
    root_vector_class: str
    root_vector_dimension: int | None
    all_homogeneous: bool | None  # None: not decided by toric data alone
    nhrv_pairs: tuple[tuple[Vector, Vector], ...]  # ordered (e1, e2) admitting the 2-parameter family

    @property
    def rays(self) -> tuple[Vector, ...]:
        return tuple(iv.ray for iv in self.intervals)

    def progression(self) -> dict | None:
        """Arithmetic-progression witness of an infinite fiber."""
        for iv in self.intervals:
            if not iv.finite:
                start = iv.lo if iv.lo is not None else iv.hi
                step = self.m_T if iv.lo is not None else scale(-1, self.m_T)
                return {"ray": list(iv.ray),
                        "start": list(add(self.base, scale(start, self.m_T))),
                        "step": list(step)}
        return None

    def to_dict(self) -> dict:
        out = {
            "t_root": list(self.t_root),
            "cardinality": self.cardinality_class,
            "count": self.count,
            "preimages": [p.to_dict() for p in self.preimages],
            "intervals": [iv.to_dict() for iv in self.intervals],
            "root_vectors": self.root_vector_class,
            "root_vector_dimension": self.root_vector_dimension,
            "all_T_homogeneous_are_big_torus_homogeneous": self.all_homogeneous,
            "two_parameter_family": [[list(a), list(b)] for a, b in self.nhrv_pairs],
        }
        prog = self.progression()
        if prog is not None:
            out["progression"] = prog
        return out


def _ray_interval(c: Cone, ray: Vector, base: Vector, m_T: Vector) -> RayInterval | None:
    a, s = pairing(ray, base), pairing(ray, m_T)
    lo: int | None
    hi: int | None
    if s == 0:
        if a != -1:
            return None
        lo = hi = None
    else:
        lam, rem = divmod(-1 - a, s)
        if rem:
            return None
        lo = hi = lam
    for other in c.rays:
        if other == ray:
            continue
        a2, s2 = pairing(other, base), pairing(other, m_T)
        # need a2 + lam*s2 >= 0
        if s2 > 0:
            bound = _ceil_div(-a2, s2)
            lo = bound if lo is None else max(lo, bound)
        elif s2 < 0:
            bound = _floor_div(a2, -s2)
            hi = bound if hi is None else min(hi, bound)
        elif a2 < 0:
            return None
        if lo is not None and hi is not None and lo > hi:
            return None
    return RayInterval(ray, lo, hi)


def nhrv_admissible(e1: DemazureRoot, e2: DemazureRoot, m_T: Vector) -> Vector | None:
    """The sign of m_T making (e1, e2) admissible for the two-parameter family."""
    if e1.ray == e2.ray:
        return None
    for m in (m_T, scale(-1, m_T)):
        if pairing(e1.ray, m) == -1 and sub(e1.e, e2.e) == scale(pairing(e1.ray, e2.e) + 1, m):
            return m
    return None


def fiber(s: SubtorusRestriction, c: Cone, t_root: Sequence[int],
          bound: int | None = None) -> FiberReport:
    """All big-torus roots restricting to ``t_root``, with a certified count."""
    s._need_corank_one()
    if c.rank != s.rank:
        raise RestrictionError("cone and subtorus ranks differ")
    t_root = vector(t_root)
    m_T = s.m_T
    base = s.lift(t_root)
    intervals = tuple(iv for iv in (_ray_interval(c, r, base, m_T) for r in c.rays)
                      if iv is not None)
    infinite = any(not iv.finite for iv in intervals)
    preimages = []
    for iv in intervals:
        if iv.finite:
            lams = range(iv.lo, iv.hi + 1)
        else:
            # only the in-box part of an infinite progression is listed
            reach = (bound or 0) + sum(abs(x) for x in base) + 1
            lo = iv.lo if iv.lo is not None else -reach
            hi = iv.hi if iv.hi is not None else reach
            lams = range(lo, hi + 1)
        for lam in lams:
            e = add(base, scale(lam, m_T))
            if iv.finite or bound is None or max(abs(x) for x in e) <= bound:
                preimages.append(DemazureRoot(iv.ray, e))
    preimages.sort(key=lambda r: r.e)

    if infinite:
        card, count = INFINITE, None
    else:
        count = sum(iv.size() for iv in intervals)
        card = ONE if count == 1 else EXACTLY

    pairs = []
    if not infinite:
        for r1 in preimages:
            for r2 in preimages:
                if nhrv_admissible(r1, r2, m_T) is not None:
                    pairs.append((r1.e, r2.e))

    ray_set = {iv.ray for iv in intervals}
    if infinite:
        rv, dim, homog = RV_INFINITE, None, False
    elif count == 1:
        rv, dim, homog = RV_ONE, 1, True
    elif count == 0:
        rv, dim, homog = RV_DIM, 0, None
    elif len(ray_set) == 1:
        # all preimages on one ray inside Gamma_T: their root LNDs commute
        rv, dim, homog = RV_DIM, count, False
    else:
        rv, dim, homog = RV_UNKNOWN, None, (False if pairs else None)
    return FiberReport(t_root, base, m_T, intervals, tuple(preimages), card, count,
                       rv, dim, homog, tuple(pairs))


@dataclass(frozen=True)
class ClassificationReport:
    position: RelativePosition
    m_T: Vector
    bound: int
    t_roots: tuple[Vector, ...]
    fibers: dict[Vector, FiberReport]
    injective_on_ray: dict[Vector, bool]
    disjoint_images: dict[tuple[Vector, Vector], bool]
    bijective: bool

    def to_dict(self) -> dict:
        return {
            "position": self.position.to_dict(),
            "m_T": list(self.m_T),
            "bound": self.bound,
            "bijective_within_bound": self.bijective,
            "injective_on_ray": [{"ray": list(r), "injective": v}
                                 for r, v in self.injective_on_ray.items()],
            "disjoint_images": [{"rays": [list(a), list(b)], "disjoint": v}
                                for (a, b), v in self.disjoint_images.items()],
            "t_roots": [list(t) for t in self.t_roots],
            "fibers": [self.fibers[t].to_dict() for t in self.t_roots],
        }


def classify(s: SubtorusRestriction, c: Cone, bound: int) -> ClassificationReport:
    """Restriction report for all T-roots that are images of in-box roots.

    Surjectivity of restriction makes these images the complete list of
    T-roots reachable from the box; each fiber is certified exactly.
    """
    s._need_corank_one()
    position = relative_position(c, s.hyperplane())
    roots = roots_within(c, bound)
    t_roots = tuple(sorted({s.restrict(r.e) for r in roots}))
    fibers = {t: fiber(s, c, t, bound) for t in t_roots}

    injective = {}
    for ray in c.rays:
        injective[ray] = not any(
            (not iv.finite or iv.size() > 1)
            for f in fibers.values() for iv in f.intervals if iv.ray == ray)
    disjoint = {}
    for i, r1 in enumerate(c.rays):
        for r2 in c.rays[i + 1:]:
            disjoint[(r1, r2)] = not any(r1 in f.rays and r2 in f.rays for f in fibers.values())
    bijective = all(f.cardinality_class == ONE for f in fibers.values())
    return ClassificationReport(position, s.m_T, bound, t_roots, fibers, injective, disjoint,
                                bijective)


@dataclass(frozen=True, order=True)
class CremonaRoot:
    i: int  # 1-based index of the differentiated variable
    alpha: tuple[int, ...]
    t_root: Vector

    def derivation(self) -> str:
        mono = "*".join(f"x{j + 1}" + (f"^{a}" if a > 1 else "")
                        for j, a in enumerate(self.alpha) if a)
        return (mono + "*" if mono else "") + f"d/dx{self.i}"

    def character(self) -> str:
        parts = [f"t{self.i}^-1"] + [f"t{j + 1}" + (f"^{a}" if a > 1 else "")
                                     for j, a in enumerate(self.alpha) if a]
        return "*".join(parts)

    def to_dict(self) -> dict:
        return {"i": self.i, "alpha": list(self.alpha), "derivation": self.derivation(),
                "character": self.character(), "t_root": list(self.t_root)}


def cremona_setup(n: int) -> tuple[Cone, SubtorusRestriction]:
    """Affine n-space with the subtorus prod(t_i) = 1."""
    if n < 2:
        raise RestrictionError("n must be >= 2")
    unit = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    basis = [sub(unit[i], unit[i + 1]) for i in range(n - 1)]
    return Cone(tuple(unit)), SubtorusRestriction(tuple(basis))


def cremona_roots(n: int, bound: int) -> list[CremonaRoot]:
    """Root vectors ``x^alpha d/dx_i`` with ``|alpha| <= bound`` for the maximal
    torus of volume-preserving automorphisms of K[x_1..x_n].

    Obtained by restricting the roots of affine n-space and checking that
    every fiber is a single root.
    """
    if bound < 0:
        raise RestrictionError("bound must be >= 0")
    c, s = cremona_setup(n)
    report = classify(s, c, max(bound, 1))
    if not report.bijective:
        raise AssertionError("restriction of roots is expected to be bijective here")
    out = []
    for t in report.t_roots:
        (root,) = report.fibers[t].preimages
        i = next(j for j, x in enumerate(root.e) if x == -1)
        alpha = tuple(0 if j == i else x for j, x in enumerate(root.e))
        if sum(alpha) <= bound:
            out.append(CremonaRoot(i + 1, alpha, t))
    return sorted(out)
