"""Demazure roots of a pointed cone.

Every root set S_rho is infinite, so enumeration always takes a sup-norm box
bound and is complete only inside that box.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Sequence

from .cones import Cone
from .lattice import Vector, pairing, vector


@dataclass(frozen=True, order=True)
class DemazureRoot:
    ray: Vector  # primitive generator of the distinguished ray
    e: Vector

    def to_dict(self) -> dict:
        return {"e": list(self.e), "ray": list(self.ray)}


def is_root(c: Cone, e: Sequence[int]) -> Vector | None:
    """Distinguished ray of ``e`` if ``e`` is a Demazure root of ``c``, else None."""
    if len(e) != c.rank:
        raise ValueError(f"rank mismatch: cone has rank {c.rank}, vector {len(e)}")
    found = None
    for n in c.rays:
        s = pairing(n, e)
        if s == -1 and found is None:
            found = n
        elif s < 0:
            return None
    return found


def make_root(c: Cone, e: Sequence[int]) -> DemazureRoot:
    e = vector(e)
    ray = is_root(c, e)
    if ray is None:
        raise ValueError(f"{e} is not a Demazure root of {c!r}")
    return DemazureRoot(ray, e)


def roots_within(c: Cone, bound: int) -> list[DemazureRoot]:
    """All roots with max |coordinate| <= bound, grouped by ray in lex order."""
    if bound < 1:
        raise ValueError("bound must be >= 1")
    by_ray: dict[Vector, list[Vector]] = {n: [] for n in c.rays}
    rng = range(-bound, bound + 1)
    for e in product(rng, repeat=c.rank):
        ray = is_root(c, e)
        if ray is not None:
            by_ray[ray].append(e)
    return [DemazureRoot(n, e) for n in c.rays for e in by_ray[n]]


def roots_by_ray(c: Cone, bound: int) -> dict[Vector, list[Vector]]:
    out: dict[Vector, list[Vector]] = {n: [] for n in c.rays}
    for r in roots_within(c, bound):
        out[r.ray].append(r.e)
    return out
