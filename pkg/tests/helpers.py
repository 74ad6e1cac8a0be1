"""Shared helpers for the test suite: random polygon generators."""
from __future__ import annotations

import math
import random

from stripnest.geometry import Polygon, validate_and_normalize


def random_polygon(rng: random.Random, n_min: int = 3, n_max: int = 8,
                   scale: float = 10.0) -> Polygon:
    """A random simple polygon: angular sort of random points, retried
    until validation passes."""
    while True:
        n = rng.randint(n_min, n_max)
        pts = [(rng.uniform(0, scale), rng.uniform(0, scale)) for _ in range(n)]
        cx = sum(p[0] for p in pts) / n
        cy = sum(p[1] for p in pts) / n
        pts.sort(key=lambda p: math.atan2(p[1] - cy, p[0] - cx))
        try:
            return validate_and_normalize(pts)
        except ValueError:
            continue


def random_star_polygon(rng: random.Random, diameter: float = 8.0,
                        n_min: int = 6, n_max: int = 10) -> Polygon:
    """A random star-shaped polygon, usually non-convex."""
    while True:
        n = rng.randint(n_min, n_max)
        angles = sorted(rng.uniform(0, 2 * math.pi) for _ in range(n))
        if any(angles[k + 1] - angles[k] < 0.05 for k in range(n - 1)):
            continue
        pts = []
        for k in range(n):
            r = diameter / 2 * rng.uniform(0.3, 1.0)
            pts.append((r * math.cos(angles[k]), r * math.sin(angles[k])))
        try:
            return validate_and_normalize(pts)
        except ValueError:
            continue


SQUARE = [(0, 0), (2, 0), (2, 2), (0, 2)]

L_SHAPE = [(0, 0), (4, 0), (4, 2), (2, 2), (2, 4), (0, 4)]
