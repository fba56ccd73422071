"""Pointed full-dimensional rational polyhedral cones and hyperplane position."""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Sequence

from .lattice import (
    LatticeError,
    Vector,
    kernel_generator,
    nullspace,
    orthogonal_basis,
    pairing,
    primitive,
    rank,
    vector,
)


class ConeError(ValueError):
    pass


def _facet_normals(gens: Sequence[Vector], d: int) -> list[Vector]:
    """Inward primitive facet normals of cone(gens), by (d-1)-subset enumeration."""
    normals = set()
    for subset in combinations(gens, d - 1):
        if rank(subset, d) != d - 1:
            continue
        (h,) = nullspace(list(subset), d)
        signs = {(pairing(h, g) > 0) - (pairing(h, g) < 0) for g in gens}
        if -1 not in signs:
            normals.add(h)
        elif 1 not in signs:
            normals.add(tuple(-c for c in h))
    return sorted(normals)


@dataclass(frozen=True)
class Cone:
    """A pointed full-dimensional cone in a lattice of rank ``rank``.

    ``generators`` may be redundant; ``rays`` keeps only the extreme ones.
    Facet normals live in the dual lattice and point inward.
    """

    generators: tuple[Vector, ...]
    rank: int = field(init=False)
    rays: tuple[Vector, ...] = field(init=False)
    facet_normals: tuple[Vector, ...] = field(init=False)

    def __post_init__(self):
        try:
            gens = sorted({primitive(vector(g)) for g in self.generators if any(g)})
        except LatticeError as exc:
            raise ConeError(str(exc)) from None
        if not gens:
            raise ConeError("cone needs at least one nonzero generator")
        d = len(gens[0])
        if any(len(g) != d for g in gens):
            raise ConeError("generators of different ranks")
        if rank(gens, d) != d:
            raise ConeError(f"cone is not full-dimensional in rank {d}")
        facets = _facet_normals(gens, d)
        if rank(facets, d) != d:
            raise ConeError("cone contains a line (not pointed)")
        rays = [g for g in gens
                if rank([h for h in facets if pairing(h, g) == 0], d) == d - 1]
        object.__setattr__(self, "generators", tuple(gens))
        object.__setattr__(self, "rank", d)
        object.__setattr__(self, "rays", tuple(rays))
        object.__setattr__(self, "facet_normals", tuple(facets))

    def __eq__(self, other):
        return isinstance(other, Cone) and self.rays == other.rays

    def __hash__(self):
        return hash(self.rays)

    def __repr__(self):
        return f"Cone(rays={list(self.rays)})"

    def contains(self, v: Sequence) -> bool:
        return all(pairing(h, v) >= 0 for h in self.facet_normals)

    def in_interior(self, v: Sequence) -> bool:
        return all(pairing(h, v) > 0 for h in self.facet_normals)

    def in_dual(self, m: Sequence) -> bool:
        """Whether ``m`` lies in the dual cone (the weight cone)."""
        if len(m) != self.rank:
            raise ConeError(f"rank mismatch: cone has rank {self.rank}, got {len(m)}")
        return all(sum(a * b for a, b in zip(n, m)) >= 0 for n in self.rays)

    def to_dict(self) -> dict:
        return {"rank": self.rank, "rays": [list(r) for r in self.rays]}

    @classmethod
    def from_dict(cls, data: dict) -> "Cone":
        c = cls(tuple(tuple(r) for r in data["rays"]))
        if "rank" in data and data["rank"] != c.rank:
            raise ConeError(f"declared rank {data['rank']} but rays have rank {c.rank}")
        return c


def rays(c: Cone) -> tuple[Vector, ...]:
    return c.rays


def dual_cone(c: Cone) -> Cone:
    return Cone(c.facet_normals)


@dataclass(frozen=True)
class Hyperplane:
    """A rational hyperplane ``<., normal> = 0`` together with a lattice basis."""

    normal: Vector
    basis: tuple[Vector, ...]

    @classmethod
    def from_normal(cls, normal: Sequence[int]) -> "Hyperplane":
        normal = vector(normal)
        p = primitive(normal)
        if p != normal:
            raise LatticeError(f"hyperplane normal {normal} is not primitive")
        if next(c for c in p if c) < 0:
            p = tuple(-c for c in p)
        return cls(p, tuple(orthogonal_basis(p)))

    @classmethod
    def from_basis(cls, basis: Sequence[Sequence[int]]) -> "Hyperplane":
        basis = tuple(vector(b) for b in basis)
        return cls(kernel_generator(basis), basis)

    @classmethod
    def from_dict(cls, data: dict) -> "Hyperplane":
        if "basis" in data:
            h = cls.from_basis(data["basis"])
            if "normal" in data and primitive(vector(data["normal"])) not in (
                    h.normal, tuple(-c for c in h.normal)):
                raise LatticeError("normal and basis disagree")
            return h
        return cls.from_normal(data["normal"])

    def to_dict(self) -> dict:
        return {"normal": list(self.normal), "basis": [list(b) for b in self.basis]}


ZERO_ONLY = "ZeroOnly"
FACE = "Face"
INTERIOR_NO_RAYS = "InteriorNoRays"
INTERIOR_WITH_RAYS = "InteriorWithRays"


@dataclass(frozen=True)
class RelativePosition:
    tag: str
    rays: tuple[Vector, ...] = ()  # extreme rays of the cone lying in the hyperplane
    dim: int | None = None  # dimension of the face, Face tag only

    def to_dict(self) -> dict:
        out = {"tag": self.tag, "rays_in_hyperplane": [list(r) for r in self.rays]}
        if self.dim is not None:
            out["dim"] = self.dim
        return out


def relative_position(c: Cone, h: Hyperplane) -> RelativePosition:
    if len(h.normal) != c.rank:
        raise ConeError("cone and hyperplane ranks differ")
    values = [pairing(r, h.normal) for r in c.rays]
    on = tuple(r for r, s in zip(c.rays, values) if s == 0)
    has_pos = any(s > 0 for s in values)
    has_neg = any(s < 0 for s in values)
    if has_pos and has_neg:
        # a positive combination of all rays can be balanced to zero
        return RelativePosition(INTERIOR_WITH_RAYS if on else INTERIOR_NO_RAYS, on)
    if not on:
        return RelativePosition(ZERO_ONLY)
    return RelativePosition(FACE, on, rank(on, c.rank))
