"""Affine toric surfaces with a one-dimensional subtorus.

Normal form: the cone is spanned by n1 = (1, 0) and n2 = (a, b) with
0 <= a < b and gcd(a, b) = 1; the subtorus is the primitive line (r, q) of N.
A character e restricts to <(r, q), e>.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil, gcd
from typing import Sequence

from .cones import Cone, ConeError
from .lattice import bezout, ext_gcd, primitive, vector
from .lnd import Derivation, nhrv_derivation
from .restriction import SubtorusRestriction, fiber, nhrv_admissible

CASE1 = "Case1"
CASE2 = "Case2"
CASE31 = "Case31"
CASE32 = "Case32"
CASE33 = "Case33"


class SurfaceError(ValueError):
    pass


def normalize_cone(c: Cone) -> tuple[int, int, tuple[tuple[int, int], tuple[int, int]]]:
    """GL2(Z) matrix ``A`` with ``A*rays = {(1,0), (a,b)}``, 0 <= a < b.

    Returns ``(a, b, A)``; ``A`` acts on N, characters move by ``A^-T``.
    """
    if c.rank != 2 or len(c.rays) != 2:
        raise ConeError("need a pointed full-dimensional rank-2 cone")
    (x, y), v2 = c.rays
    _, s, t = ext_gcd(x, y)
    A = [[s, t], [-y, x]]
    cx, d = (A[0][0] * v2[0] + A[0][1] * v2[1], A[1][0] * v2[0] + A[1][1] * v2[1])
    if d < 0:
        A[1] = [-A[1][0], -A[1][1]]
        d = -d
    k = -(cx // d)
    A[0] = [A[0][0] + k * A[1][0], A[0][1] + k * A[1][1]]
    a, b = cx + k * d, d
    return a, b, ((A[0][0], A[0][1]), (A[1][0], A[1][1]))


def surface_cone(a: int, b: int) -> Cone:
    return Cone(((1, 0), (a, b)))


@dataclass(frozen=True)
class SurfaceData:
    """Normal-form surface plus subtorus line, orientation normalized.

    In the interior case (r, q) is oriented so that D = rb - qa > 0 (hence
    q > 0). When the line is a ray of the cone, (r, q) is the ray generator
    itself, so the distinguished ray's roots restrict to -1.
    """

    a: int
    b: int
    r: int
    q: int
    D: int = field(init=False)
    case: str = field(init=False)
    ray_index: int | None = field(init=False)
    u: int = field(init=False)
    v: int = field(init=False)

    def __post_init__(self):
        a, b, r, q = self.a, self.b, self.r, self.q
        if not (0 <= a < b) or gcd(a, b) != 1:
            raise SurfaceError(f"need 0 <= a < b with gcd(a, b) = 1, got a={a}, b={b}")
        if gcd(r, q) != 1:
            raise SurfaceError(f"line generator ({r}, {q}) is not primitive")
        D = r * b - q * a
        ray_index = None
        if q == 0:
            case, ray_index, (r, q) = CASE2, 1, (1, 0)
        elif D == 0:
            case, ray_index, (r, q) = CASE2, 2, (a, b)
        elif q * D < 0:
            case = CASE1
        else:
            if D < 0:
                r, q = -r, -q
            D = r * b - q * a
            g = gcd(q, D)
            if (a - 1) % g:
                case = CASE31
            elif q == 1 or D == 1:
                case = CASE33
            else:
                case = CASE32
        D = r * b - q * a
        u, v = bezout(r, q)
        for name, val in (("r", r), ("q", q), ("D", D), ("case", case),
                          ("ray_index", ray_index), ("u", u), ("v", v)):
            object.__setattr__(self, name, val)

    @property
    def cone(self) -> Cone:
        return surface_cone(self.a, self.b)

    @property
    def line(self) -> tuple[int, int]:
        return (self.r, self.q)

    @property
    def restriction(self) -> SubtorusRestriction:
        return SubtorusRestriction(((self.r, self.q),))

    def restrict(self, e: Sequence[int]) -> int:
        return self.r * e[0] + self.q * e[1]

    def to_dict(self) -> dict:
        return {"a": self.a, "b": self.b, "r": self.r, "q": self.q, "D": self.D,
                "u": self.u, "v": self.v}


def surface_from_cone(c: Cone, line: Sequence[int]) -> tuple[SurfaceData, tuple]:
    """Bring an arbitrary rank-2 cone and line into normal form."""
    a, b, A = normalize_cone(c)
    line = primitive(vector(line))
    r = A[0][0] * line[0] + A[0][1] * line[1]
    q = A[1][0] * line[0] + A[1][1] * line[1]
    return SurfaceData(a, b, r, q), A


def _rho2_base(a: int, b: int) -> tuple[int, int]:
    """The root (m1, m2) of S_rho2 with smallest m1 >= 0."""
    m1 = 0 if b == 1 else (-pow(a, -1, b)) % b
    m2, rem = divmod(-1 - a * m1, b)
    assert rem == 0
    return m1, m2


def _rho1_min(a: int, b: int) -> int:
    return ceil(Fraction(a, b))


@dataclass(frozen=True)
class LambdaInfo:
    """pi(S_rho1) and pi(S_rho2) as progressions and their intersection."""

    rho1_start: int  # pi(S_rho1) = {rho1_start + j*q : j >= 0}
    rho1_step: int
    rho2_start: int  # pi(S_rho2) = {rho2_start + k*D : k >= 0}
    rho2_step: int
    criterion_nonempty: bool  # gcd(q, D) | a - 1
    witness: tuple[int, int] | None  # (m0, k0) solving r + r m1 + q m2 = m0 q - k0 D
    first: int | None  # least element of the intersection
    period: int | None
    members: tuple[int, ...]  # within the requested bound

    @property
    def nonempty(self) -> bool:
        return self.witness is not None

    def __contains__(self, e: int) -> bool:
        return self.first is not None and e >= self.first and (e - self.first) % self.period == 0

    def to_dict(self) -> dict:
        return {
            "rho1_image": {"start": self.rho1_start, "step": self.rho1_step},
            "rho2_image": {"start": self.rho2_start, "step": self.rho2_step},
            "gcd_criterion_nonempty": self.criterion_nonempty,
            "nonempty": self.nonempty,
            "witness": None if self.witness is None else
            {"m0": self.witness[0], "k0": self.witness[1]},
            "first": self.first,
            "period": self.period,
            "members": list(self.members),
        }


def lambda_members(s: SurfaceData, bound: int) -> LambdaInfo:
    """Intersection of the two restricted root sets, for interior lines."""
    if s.case not in (CASE31, CASE32, CASE33):
        raise SurfaceError(f"Lambda is defined for interior lines only, got {s.case}")
    a, b, r, q, D = s.a, s.b, s.r, s.q, s.D
    m1, m2 = _rho2_base(a, b)
    mmin = _rho1_min(a, b)
    g, x, y = ext_gcd(q, D)
    criterion = (a - 1) % g == 0
    R = r + r * m1 + q * m2
    witness = first = period = None
    members: tuple[int, ...] = ()
    if R % g == 0:
        m0, k0 = x * (R // g), -y * (R // g)
        dm, dk = D // g, q // g
        t = max(-((m0 - mmin) // dm), -(k0 // dk))
        m0, k0 = m0 + t * dm, k0 + t * dk
        witness = (m0, k0)
        first = -r + m0 * q
        period = q * D // g
        members = tuple(range(first, bound + 1, period))
    return LambdaInfo(-r + mmin * q, q, r * m1 + q * m2, D, criterion, witness, first,
                      period, members)


def ah_invariants(s: SurfaceData) -> dict:
    """Vertices p1 = u/q and p2 = (au + bv)/D of the polyhedral divisor."""
    if s.case not in (CASE31, CASE32, CASE33):
        raise SurfaceError(f"p1, p2 are computed for interior lines only, got {s.case}")
    p1 = Fraction(s.u, s.q)
    p2 = Fraction(s.a * s.u + s.b * s.v, s.D)
    return {"p1": p1, "p2": p2, "p1_integral": p1.denominator == 1,
            "p2_integral": p2.denominator == 1}


@dataclass(frozen=True)
class SurfaceRow:
    root_vectors: str  # "1", "2", "infinite" or "P1"
    fiber_count: int | None  # None = infinitely many
    all_homogeneous: bool

    def to_dict(self) -> dict:
        return {"root_vectors": self.root_vectors,
                "fiber_count": "infinite" if self.fiber_count is None else self.fiber_count,
                "all_T_homogeneous_are_big_torus_homogeneous": self.all_homogeneous}


SIMPLE = SurfaceRow("1", 1, True)


@dataclass(frozen=True)
class SurfaceCase:
    tag: str
    ray_index: int | None
    lam: LambdaInfo | None

    def row(self, e: int) -> SurfaceRow:
        """Table row for the T-root ``e``."""
        if self.tag == CASE2 and e == -1:
            return SurfaceRow("infinite", None, False)
        if self.tag == CASE32 and e in self.lam:
            return SurfaceRow("2", 2, True)
        if self.tag == CASE33 and e in self.lam:
            return SurfaceRow("P1", 2, False)
        return SIMPLE

    def rows(self) -> dict[str, SurfaceRow]:
        if self.tag == CASE2:
            return {"e=-1": self.row(-1), "e!=-1": SIMPLE}
        if self.tag == CASE32:
            return {"e not in Lambda": SIMPLE, "e in Lambda": SurfaceRow("2", 2, True)}
        if self.tag == CASE33:
            return {"e not in Lambda": SIMPLE, "e in Lambda": SurfaceRow("P1", 2, False)}
        return {"all e": SIMPLE}

    def to_dict(self) -> dict:
        out = {"case": self.tag, "rows": {k: v.to_dict() for k, v in self.rows().items()}}
        if self.ray_index is not None:
            out["ray_in_line"] = self.ray_index
        if self.lam is not None:
            out["lambda"] = self.lam.to_dict()
        return out


def classify_surface(s: SurfaceData, bound: int = 12) -> SurfaceCase:
    lam = lambda_members(s, bound) if s.case in (CASE31, CASE32, CASE33) else None
    return SurfaceCase(s.case, s.ray_index, lam)


def case33_family(s: SurfaceData, e: int, alpha, beta) -> Derivation:
    """Member (alpha : beta) of the P1-family of root vectors of T-degree ``e``."""
    if s.case != CASE33:
        raise SurfaceError("the P1-family exists in Case33 only")
    res = s.restriction
    f = fiber(res, s.cone, (e,))
    if f.count != 2:
        raise SurfaceError(f"{e} is not in Lambda")
    r1, r2 = f.preimages
    for e1, e2 in ((r1, r2), (r2, r1)):
        m = nhrv_admissible(e1, e2, res.m_T)
        if m is not None:
            return nhrv_derivation(s.cone, e1, e2, m, alpha, beta)
    raise SurfaceError("no admissible ordering of the two preimages")

