"""Benchmark runs and CSV reporting."""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import List, Optional, Sequence

from .metrics import layout_extension_area, layout_pieces_area, wasted_fraction
from .placement import SolverConfig, pack

CSV_HEADER = [
    "dataset",
    "R",
    "rotations",
    "length",
    "wf_pct",
    "ext_area",
    "disc_ms",
    "place_ms",
    "checks",
]


@dataclass
class BenchRow:
    dataset: str
    R: float
    rotations: str
    length: float
    wf_pct: float
    ext_area: float
    disc_ms: float
    place_ms: float
    checks: int

    def as_list(self) -> list:
        return [
            self.dataset,
            f"{self.R:g}",
            self.rotations,
            f"{self.length:g}",
            f"{self.wf_pct:.4f}",
            f"{self.ext_area:g}",
            f"{self.disc_ms:.3f}",
            f"{self.place_ms:.3f}",
            str(self.checks),
        ]


def _rotations_label(result) -> str:
    return ",".join(f"{a:g}" for a in result.angles_used)


def run_bench(
    dataset,
    resolutions: Sequence[Optional[float]],
    config: Optional[SolverConfig] = None,
    reps: int = 1,
) -> List[BenchRow]:
    """Pack the dataset at each resolution; timings are the best of reps."""
    config = config or SolverConfig()
    rows = []
    for r in resolutions:
        best = None
        for _ in range(max(1, reps)):
            cfg = SolverConfig(
                resolution=r,
                rotations=config.rotations,
                dtheta=config.dtheta,
                warm_start=config.warm_start,
                gap_scope=config.gap_scope,
            )
            result = pack(dataset, cfg)
            if best is None or (result.disc_ms + result.place_ms) < (
                best.disc_ms + best.place_ms
            ):
                best = result
        assert best is not None
        wf = wasted_fraction(
            best.used_length, best.strip_width, layout_pieces_area(dataset, best)
        )
        rows.append(
            BenchRow(
                dataset=dataset.name,
                R=best.resolution,
                rotations=_rotations_label(best),
                length=best.used_length,
                wf_pct=wf,
                ext_area=layout_extension_area(dataset, best),
                disc_ms=best.disc_ms,
                place_ms=best.place_ms,
                checks=best.total_checks,
            )
        )
    return rows


def rows_to_csv(rows: Sequence[BenchRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(CSV_HEADER)
    for row in rows:
        writer.writerow(row.as_list())
    return buf.getvalue()


def write_csv(path: str, rows: Sequence[BenchRow]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(rows_to_csv(rows))
