"""Hill-climbing local search over placement order and rotations."""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from .placement import (
    PackResult,
    SolverConfig,
    _DiscretizationCache,
    base_resolution,
    pack,
    resolve_angles,
)


@dataclass
class SearchConfig:
    iterations: int = 100
    seed: int = 0
    # Relative weights for swap_pair / relocate_one / flip_rotation.
    weights: Tuple[int, int, int] = (2, 1, 1)


@dataclass
class HillClimbResult:
    initial: PackResult
    best: PackResult
    best_order: List[int]
    best_rotations: Dict[int, float]
    accepted: int
    log: List[str] = field(default_factory=list)


def _default_order(dataset) -> List[int]:
    copies = []
    for pi, piece in enumerate(dataset.pieces):
        copies.extend([pi] * piece.quantity)
    areas = [
        dataset.pieces[pi].polygon.width * dataset.pieces[pi].polygon.height
        for pi in copies
    ]
    return sorted(range(len(copies)), key=lambda i: (-areas[i], i))


def hill_climb(
    dataset,
    solver_config: Optional[SolverConfig] = None,
    search_config: Optional[SearchConfig] = None,
) -> HillClimbResult:
    """Strictly-improving local search starting from the greedy layout.

    Mutations: swap two copies in the order, relocate one copy, or flip
    one copy's rotation.  A candidate is accepted only when its strip
    length is strictly shorter, so the result never exceeds the greedy
    baseline.  Deterministic for a fixed seed.
    """
    solver_config = solver_config or SolverConfig()
    search_config = search_config or SearchConfig()
    rng = random.Random(search_config.seed)
    angles = resolve_angles(dataset, solver_config)

    resolution = solver_config.resolution or base_resolution(
        [p.polygon for p in dataset.pieces], angles
    )
    cache = _DiscretizationCache(resolution, solver_config.gap_scope)

    order = _default_order(dataset)
    rotations: Dict[int, float] = {}
    initial = pack(
        dataset, solver_config, order=order, rotation_overrides=rotations,
        disc_cache=cache,
    )
    best = initial
    best_order = list(order)
    best_rot = dict(rotations)
    eps = 1e-9 * max(1.0, dataset.strip_width)
    accepted = 0
    log: List[str] = [f"0,{best.used_length:.6g},start"]

    n = len(order)
    mutations = ("swap_pair", "relocate_one", "flip_rotation")

    for it in range(1, search_config.iterations + 1):
        cand_order = list(best_order)
        cand_rot = dict(best_rot)
        kind = rng.choices(mutations, weights=search_config.weights, k=1)[0]
        if kind == "swap_pair" and n >= 2:
            i, j = rng.sample(range(n), 2)
            cand_order[i], cand_order[j] = cand_order[j], cand_order[i]
        elif kind == "relocate_one" and n >= 2:
            i = rng.randrange(n)
            item = cand_order.pop(i)
            j = rng.randrange(n)
            cand_order.insert(j, item)
        elif kind == "flip_rotation":
            copy_idx = rng.randrange(n)
            current = cand_rot.get(copy_idx)
            options = [a for a in angles if a != current]
            if options:
                cand_rot[copy_idx] = rng.choice(options)
        result = pack(
            dataset, solver_config, order=cand_order, rotation_overrides=cand_rot,
            disc_cache=cache,
        )
        improved = result.used_length < best.used_length - eps
        log.append(f"{it},{result.used_length:.6g},{1 if improved else 0}")
        if improved:
            best = result
            best_order = cand_order
            best_rot = cand_rot
            accepted += 1

    return HillClimbResult(
        initial=initial,
        best=best,
        best_order=best_order,
        best_rotations=best_rot,
        accepted=accepted,
        log=log,
    )
