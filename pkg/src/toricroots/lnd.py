"""Derivations of the semigroup algebra K[omega_M].

A derivation is stored as its action on characters chi^m. Leibniz is then a
property to test rather than a construction constraint. Coefficients are
exact ``Fraction``s.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Callable, Iterable, Mapping, Sequence

from .cones import Cone, dual_cone
from .demazure import DemazureRoot, is_root
from .lattice import LatticeMap, Vector, add, det, inverse, pairing, scale, solve, sub, vector


class OutsideWeightMonoid(ValueError):
    pass


class PreconditionError(ValueError):
    """A named precondition of a derivation constructor failed."""

    def __init__(self, code: str, message: str):
        super().__init__(f"{code}: {message}")
        self.code = code


def _norm(c):
    # integral coefficients stay plain ints; Fraction arithmetic is far slower
    if isinstance(c, Fraction) and c.denominator == 1:
        return c.numerator
    return c


class AlgebraElement:
    """Finite K-linear combination of characters; zero coefficients are dropped."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[Sequence[int], object] | Iterable = ()):
        acc: dict[Vector, Fraction] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for m, c in items:
            m = vector(m)
            acc[m] = acc.get(m, 0) + Fraction(c)
        self._terms = {m: _norm(c) for m, c in acc.items() if c != 0}

    @classmethod
    def _trusted(cls, terms: dict) -> "AlgebraElement":
        """Wrap an already-validated dict of exponent tuples to coefficients."""
        out = cls.__new__(cls)
        out._terms = {m: _norm(c) for m, c in terms.items() if c != 0}
        return out

    @classmethod
    def chi(cls, m: Sequence[int], coef=1) -> "AlgebraElement":
        return cls({tuple(m): coef})

    @property
    def terms(self) -> dict[Vector, Fraction]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def degrees(self) -> list[Vector]:
        return sorted(self._terms)

    def coefficient(self, m: Sequence[int]) -> Fraction:
        return Fraction(self._terms.get(tuple(m), 0))

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def __eq__(self, other):
        if isinstance(other, AlgebraElement):
            return self._terms == other._terms
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        acc = dict(self._terms)
        for m, c in other._terms.items():
            acc[m] = acc.get(m, 0) + c
        return AlgebraElement._trusted(acc)

    def __neg__(self):
        return AlgebraElement._trusted({m: -c for m, c in self._terms.items()})

    def __sub__(self, other: "AlgebraElement") -> "AlgebraElement":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, AlgebraElement):
            acc: dict = {}
            for m1, c1 in self._terms.items():
                for m2, c2 in other._terms.items():
                    m = add(m1, m2)
                    acc[m] = acc.get(m, 0) + c1 * c2
            return AlgebraElement._trusted(acc)
        other = Fraction(other)
        return AlgebraElement._trusted({m: c * other for m, c in self._terms.items()})

    __rmul__ = __mul__

    def __repr__(self):
        if not self._terms:
            return "0"
        return " + ".join(f"{c}*chi^{list(m)}" for m, c in sorted(self._terms.items()))

    def to_dict(self) -> dict:
        return {"terms": [[list(m), str(c)] for m, c in sorted(self._terms.items())]}

    @classmethod
    def from_dict(cls, data: dict) -> "AlgebraElement":
        return cls([(m, Fraction(c)) for m, c in data["terms"]])


ZERO = AlgebraElement()


@dataclass(frozen=True, eq=False)
class Derivation:
    """Derivation given by ``action(m) = d(chi^m)`` on characters of the cone's
    weight monoid.

    ``descriptor`` records provenance. ``known_lnd`` is set only when local
    nilpotency is guaranteed by theory (root LNDs, the two-parameter family,
    triangular tables); the nilpotency oracle uses it to tell a bug from an
    inconclusive run.
    """

    cone: Cone
    action: Callable[[Vector], AlgebraElement] = field(repr=False)
    descriptor: dict = field(default_factory=dict)
    known_lnd: bool = False

    def on_char(self, m: Sequence[int]) -> AlgebraElement:
        m = tuple(m)
        if not self.cone.in_dual(m):
            raise OutsideWeightMonoid(f"character {m} is outside the weight monoid")
        img = self.action(m)
        for k in img.degrees():
            if not self.cone.in_dual(k):
                raise OutsideWeightMonoid(
                    f"image of chi^{list(m)} has term chi^{list(k)} outside the weight monoid")
        return img

    def __call__(self, f: AlgebraElement) -> AlgebraElement:
        return apply(self, f)

    def __add__(self, other: "Derivation") -> "Derivation":
        return derivation_sum([self, other])

    def scaled(self, c) -> "Derivation":
        c = Fraction(c)
        return Derivation(self.cone, lambda m: self.action(m) * c,
                          {"kind": "scaled", "scalar": str(c), "of": self.descriptor},
                          self.known_lnd or c == 0)


def apply(d: Derivation, f: AlgebraElement) -> AlgebraElement:
    acc: dict = {}
    for m, c in f.items():
        for k, v in d.on_char(m).items():
            acc[k] = acc.get(k, 0) + c * v
    return AlgebraElement._trusted(acc)


def power(d: Derivation, f: AlgebraElement, k: int) -> AlgebraElement:
    for _ in range(k):
        if not f:
            break
        f = apply(d, f)
    return f


def derivation_sum(ds: Sequence[Derivation]) -> Derivation:
    ds = list(ds)
    if not ds:
        raise ValueError("empty sum")
    cone = ds[0].cone
    if any(d.cone != cone for d in ds):
        raise ValueError("summands live on different cones")

    def action(m):
        out = ZERO
        for d in ds:
            out = out + d.action(m)
        return out
    return Derivation(cone, action, {"kind": "sum", "terms": [d.descriptor for d in ds]})


def root_lnd(c: Cone, root: DemazureRoot, scalar=1) -> Derivation:
    """``d(chi^m) = scalar * <n_rho, m> chi^(m + e)``."""
    ray = is_root(c, root.e)
    if ray is None or ray != root.ray:
        raise PreconditionError("not_a_root", f"{root.e} is not a root of {c!r} at ray {root.ray}")
    scalar = Fraction(scalar)
    n, e = root.ray, root.e

    def action(m):
        s = pairing(n, m)
        return AlgebraElement({add(m, e): scalar * s}) if s else ZERO
    return Derivation(c, action, {"kind": "root", "e": list(e), "ray": list(n),
                                  "scalar": str(scalar)}, known_lnd=True)


def euler_derivation(c: Cone, weights: Sequence) -> Derivation:
    """Degree-zero derivation ``chi^m -> <w, m> chi^m``; semisimple, never an LND
    unless ``w`` is zero."""
    w = tuple(Fraction(x) for x in weights)

    def action(m):
        return AlgebraElement({m: pairing(w, m)})
    return Derivation(c, action, {"kind": "euler", "weights": [str(x) for x in w]})


def _free_basis_check(c: Cone, generators: Sequence[Vector]) -> list[list[Fraction]]:
    gens = [vector(g) for g in generators]
    if sorted(gens) != sorted(dual_cone(c).rays) or abs(det(gens)) != 1:
        raise PreconditionError(
            "not_free",
            "generator tables need the weight monoid to be freely generated by the "
            "given characters (smooth cone, generators = rays of the weight cone)")
    # coordinates of m in the generator basis: solve G^T x = m
    return inverse([list(col) for col in zip(*gens)])


def table_derivation(c: Cone, generators: Sequence[Sequence[int]],
                     images: Sequence[AlgebraElement], known_lnd: bool = False) -> Derivation:
    """Derivation fixed by its values on free generators, extended by Leibniz."""
    gens = [vector(g) for g in generators]
    if len(gens) != len(images):
        raise ValueError("one image per generator required")
    inv = _free_basis_check(c, gens)
    imgs = list(images)

    def action(m):
        coords = [sum(row[j] * m[j] for j in range(len(m))) for row in inv]
        out = []
        for g, x, img in zip(gens, coords, imgs):
            if x == 0:
                continue
            base = sub(m, g)
            out.extend((add(base, k), x * v) for k, v in img.items())
        return AlgebraElement(out)
    desc = {"kind": "table", "generators": [list(g) for g in gens],
            "images": [img.to_dict() for img in imgs]}
    return Derivation(c, action, desc, known_lnd)


def nhrv_derivation(c: Cone, e1: DemazureRoot, e2: DemazureRoot, m_T: Sequence[int],
                    alpha, beta) -> Derivation:
    """Two-parameter T-homogeneous LND of T-degree pi(e1).

    d(chi^m) = chi^(m+e2) (alpha <n1,m> chi^mT + beta <n2,m>)
                          (alpha chi^mT - beta <n2,mT>)^<n1,e2>
    where n1, n2 are the distinguished rays of e1, e2. The binomial power is
    expanded once at construction.
    """
    m_T = vector(m_T)
    for r in (e1, e2):
        if is_root(c, r.e) != r.ray:
            raise PreconditionError("not_a_root", f"{r.e} is not a root at ray {r.ray}")
    n1, n2 = e1.ray, e2.ray
    if n1 == n2:
        raise PreconditionError("same_ray", "e1 and e2 must have distinct distinguished rays")
    if pairing(n1, m_T) != -1:
        raise PreconditionError("bad_m_T", f"<n_rho1, m_T> = {pairing(n1, m_T)}, expected -1")
    k1 = pairing(n1, e2.e)
    if sub(e1.e, e2.e) != scale(k1 + 1, m_T):
        raise PreconditionError(
            "restriction_mismatch", f"e1 - e2 != (<n_rho1, e2> + 1) m_T = {k1 + 1} * {m_T}")
    alpha, beta = _norm(Fraction(alpha)), _norm(Fraction(beta))
    c2 = pairing(n2, m_T)
    binom = [comb(k1, j) * alpha ** j * (-beta * c2) ** (k1 - j) for j in range(k1 + 1)]
    base = e2.e

    def action(m):
        a1, a2 = pairing(n1, m), pairing(n2, m)
        coefs = [0] * (k1 + 2)
        for j, b in enumerate(binom):
            coefs[j + 1] += alpha * a1 * b
            coefs[j] += beta * a2 * b
        shift = add(m, base)
        return AlgebraElement._trusted({add(shift, scale(j, m_T)): x for j, x in enumerate(coefs)})
    desc = {"kind": "nhrv", "e1": list(e1.e), "e2": list(e2.e), "m_T": list(m_T),
            "alpha": str(alpha), "beta": str(beta)}
    return Derivation(c, action, desc, known_lnd=True)


def nhrv_nilpotency_bound(e1: DemazureRoot, e2: DemazureRoot, m_T: Sequence[int],
                          m: Sequence[int]) -> int:
    """``k`` with ``d^(k+1) chi^m == 0`` for the two-parameter family."""
    return pairing(e2.ray, m) + pairing(e2.ray, m_T) * pairing(e1.ray, m)


@dataclass(frozen=True)
class Verdict:
    """``nilpotent`` with ``steps`` = smallest n, or not within ``steps`` iterations.

    A negative verdict is evidence, never proof.
    """

    nilpotent: bool
    steps: int
    conclusive: bool

    def __str__(self):
        return f"NilpotentWithin({self.steps})" if self.nilpotent else f"NotWithin({self.steps})"

    def to_dict(self) -> dict:
        return {"verdict": "NilpotentWithin" if self.nilpotent else "NotWithin",
                "n": self.steps, "conclusive": self.conclusive}


def nilpotency_oracle(d: Derivation, probes: Sequence[AlgebraElement], max_iter: int) -> Verdict:
    if not probes:
        raise ValueError("need at least one probe")
    worst = 0
    for f in probes:
        n = 0
        while f:
            if n == max_iter:
                return Verdict(False, max_iter, False)
            f = apply(d, f)
            n += 1
        worst = max(worst, n)
    return Verdict(True, worst, True)


def shift_degrees(d: Derivation, probes: Iterable[Sequence[int]],
                  projection: LatticeMap | None = None) -> set[Vector]:
    """All degree shifts ``k - m`` seen on the probe characters, optionally
    pushed through a grading map."""
    out = set()
    for m in probes:
        for k in d.on_char(m).degrees():
            s = sub(k, m)
            out.add(projection(s) if projection is not None else s)
    return out


def in_convex_hull(p: Sequence[int], points: Sequence[Sequence[int]]) -> bool:
    """Exact membership of ``p`` in conv(points) via Caratheodory subsets."""
    p = tuple(p)
    pts = [tuple(q) for q in points]
    if not pts:
        return False
    d = len(p)
    for k in range(1, min(len(pts), d + 1) + 1):
        for sub_ in combinations(pts, k):
            q0 = sub_[0]
            if k == 1:
                if q0 == p:
                    return True
                continue
            cols = [sub(q, q0) for q in sub_[1:]]
            rows = [[col[i] for col in cols] for i in range(d)]
            lam = solve(rows, sub(p, q0))
            if lam is not None and all(x >= 0 for x in lam) and sum(lam) <= 1:
                return True
    return False


def convex_hull_vertices(points: Iterable[Sequence[int]]) -> list[Vector]:
    pts = sorted({tuple(p) for p in points})
    return [p for p in pts if not in_convex_hull(p, [q for q in pts if q != p])]


@dataclass(frozen=True)
class HomogeneousDecomposition:
    pieces: dict[Vector, Derivation]
    vertices: list[Vector]
    vertex_verdicts: dict[Vector, Verdict]

    def total_on(self, m: Sequence[int]) -> AlgebraElement:
        out = ZERO
        for piece in self.pieces.values():
            out = out + piece.on_char(m)
        return out

    def to_dict(self) -> dict:
        return {
            "pieces": [{"degree": list(e), "derivation": p.descriptor}
                       for e, p in self.pieces.items()],
            "vertices": [list(v) for v in self.vertices],
            "vertex_verdicts": [{"degree": list(v), **self.vertex_verdicts[v].to_dict()}
                                for v in self.vertices],
        }


def decompose(d: Derivation, generating_chars: Sequence[Sequence[int]],
              max_iter: int = 50) -> HomogeneousDecomposition:
    """Split ``d`` into homogeneous pieces by degree shift on the generators.

    Nilpotency on free generators implies local nilpotency on the whole
    algebra, so a positive vertex verdict here is a proof.
    """
    gens = [vector(g) for g in generating_chars]
    _free_basis_check(d.cone, gens)
    table: dict[Vector, list[list]] = {}
    for i, g in enumerate(gens):
        for k, v in d.on_char(g).items():
            table.setdefault(sub(k, g), [[] for _ in gens])[i].append((k, v))
    pieces = {e: table_derivation(d.cone, gens, [AlgebraElement(t) for t in imgs])
              for e, imgs in sorted(table.items())}
    for e, piece in pieces.items():
        piece.descriptor["degree"] = list(e)
    vertices = convex_hull_vertices(pieces)
    probes = [AlgebraElement.chi(g) for g in gens]
    verdicts = {v: nilpotency_oracle(pieces[v], probes, max_iter) for v in vertices}
    return HomogeneousDecomposition(pieces, vertices, verdicts)


def from_descriptor(c: Cone, desc: Mapping) -> Derivation:
    """Rebuild a derivation from a JSON descriptor of kind root, nhrv, sum or table."""
    kind = desc.get("kind")
    if kind == "root":
        e = vector(desc["e"])
        ray = is_root(c, e)
        if ray is None:
            raise PreconditionError("not_a_root", f"{list(e)} is not a Demazure root of {c!r}")
        return root_lnd(c, DemazureRoot(ray, e), Fraction(desc.get("scalar", 1)))
    if kind == "nhrv":
        roots = []
        for key in ("e1", "e2"):
            e = vector(desc[key])
            ray = is_root(c, e)
            if ray is None:
                raise PreconditionError("not_a_root", f"{key} = {list(e)} is not a root")
            roots.append(DemazureRoot(ray, e))
        return nhrv_derivation(c, roots[0], roots[1], desc["m_T"],
                               Fraction(desc["alpha"]), Fraction(desc["beta"]))
    if kind == "sum":
        return derivation_sum([from_descriptor(c, t) for t in desc["terms"]])
    if kind == "table":
        images = [AlgebraElement.from_dict(img) for img in desc["images"]]
        return table_derivation(c, desc["generators"], images)
    raise PreconditionError("unknown_kind", f"unsupported derivation kind {kind!r}")
