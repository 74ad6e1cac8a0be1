"""Synthetic dataset generators for benchmarks and scalability tests."""
from __future__ import annotations

import math
import random
from typing import List, Optional, Sequence

from .datasets import Dataset
from .geometry import Piece, SelfIntersecting, validate_and_normalize


def _star_polygon(rng: random.Random, diameter: float):
    """A random mostly non-convex star-shaped polygon of given diameter."""
    while True:
        n = rng.randint(6, 10)
        radii = []
        for k in range(n):
            r = diameter / 2 * rng.uniform(0.55, 1.0)
            if k % 2 == 1 and rng.random() < 0.8:
                r *= rng.uniform(0.35, 0.6)  # dent: makes the shape non-convex
            radii.append(r)
        angles = sorted(rng.uniform(0, 2 * math.pi) for _ in range(n))
        # Reject angle sets with nearly coincident rays.
        ok = all(
            angles[(k + 1) % n] - angles[k] > 0.05 or k == n - 1 for k in range(n)
        )
        if not ok:
            continue
        pts = [
            (radii[k] * math.cos(angles[k]), radii[k] * math.sin(angles[k]))
            for k in range(n)
        ]
        try:
            return validate_and_normalize(pts)
        except (SelfIntersecting, ValueError):
            continue


def random_dataset(
    seed: int,
    n_pieces: int = 550,
    strip_width: float = 80.0,
    diameters: Sequence[float] = (4.0, 9.0, 16.0, 27.0),
    smallest_share: float = 0.8,
    name: Optional[str] = None,
) -> Dataset:
    """Random float-coordinate instance: four piece diameters with the
    given share of the smallest, free rotation, distinct shapes."""
    rng = random.Random(seed)
    n_small = int(round(n_pieces * smallest_share))
    rest = n_pieces - n_small
    per_big = [rest // 3] * 3
    for i in range(rest - sum(per_big)):
        per_big[i] += 1
    counts = [n_small] + per_big

    pieces: List[Piece] = []
    idx = 0
    for d, count in zip(diameters, counts):
        for _ in range(count):
            poly = _star_polygon(rng, d)
            pieces.append(
                Piece(id=f"rnd{idx:04d}", polygon=poly, quantity=1, rotations="free")
            )
            idx += 1
    return Dataset(
        name=name or f"random-{n_pieces}-seed{seed}",
        strip_width=strip_width,
        rotations="free",
        pieces=pieces,
    )


# An L-shaped octagon used for the warm-start scalability runs: simple,
# non-convex, integer coordinates.
_SCALE_SHAPE = [
    [0, 0], [7, 0], [7, 5], [5, 5], [5, 2], [2, 2], [2, 5], [0, 5],
]


def identical_dataset(n_copies: int, strip_width: float = 40.0) -> Dataset:
    poly = validate_and_normalize(_SCALE_SHAPE)
    return Dataset(
        name=f"identical-{n_copies}",
        strip_width=strip_width,
        rotations=(0.0,),
        pieces=[Piece(id="unit", polygon=poly, quantity=n_copies, rotations=(0.0,))],
    )
