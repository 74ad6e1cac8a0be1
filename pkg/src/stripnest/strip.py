"""Mutable strip state built on the flattened kernel arrays."""
from __future__ import annotations

from dataclasses import dataclass
from typing import List, Tuple

import numpy as np

from . import _kernels
from .semidiscrete import LABEL_CHARS, IntervalTuple, SemiDiscretePiece

FITS = _kernels.FITS
SHIFTED = _kernels.SHIFTED
IMPOSSIBLE = _kernels.IMPOSSIBLE


class InfeasibleCommit(RuntimeError):
    """A commit found a forbidden overlap; placement and commit disagree."""


@dataclass(frozen=True)
class FitResult:
    code: int  # FITS / SHIFTED / IMPOSSIBLE
    y: float
    checks: int
    index_checks: int

    @property
    def fits(self) -> bool:
        return self.code == FITS


@dataclass(frozen=True)
class PieceArrays:
    """A semi-discrete piece flattened for the kernels."""

    b: np.ndarray
    t: np.ndarray
    label: np.ndarray
    colptr: np.ndarray
    num_columns: int
    width: float
    height: float


def flatten_piece(sd: SemiDiscretePiece) -> PieceArrays:
    bs: List[float] = []
    ts: List[float] = []
    labels: List[int] = []
    colptr = [0]
    for col in sd.columns:
        for tup in col:
            bs.append(tup.b)
            ts.append(tup.t)
            labels.append(tup.label)
        colptr.append(len(bs))
    return PieceArrays(
        b=np.asarray(bs, dtype=np.float64),
        t=np.asarray(ts, dtype=np.float64),
        label=np.asarray(labels, dtype=np.int8),
        colptr=np.asarray(colptr, dtype=np.int64),
        num_columns=len(sd.columns),
        width=sd.width,
        height=sd.height,
    )


class StripState:
    """Filled intervals of the strip, one sorted row per resolution line.

    Rows use fixed capacities that grow geometrically; the kernels signal
    overflow and :meth:`commit` retries after growing.
    """

    def __init__(self, y_max: float, resolution: float, cap_cols: int = 256, cap_tuples: int = 8):
        if y_max <= 0 or resolution <= 0:
            raise ValueError("y_max and resolution must be positive")
        self.y_max = float(y_max)
        self.resolution = float(resolution)
        self.eps_y = 1e-9 * max(1.0, y_max)
        # Tuple slots are read only below count[k]; they need no zeroing.
        self.b = np.empty((cap_cols, cap_tuples), dtype=np.float64)
        self.t = np.empty((cap_cols, cap_tuples), dtype=np.float64)
        self.label = np.empty((cap_cols, cap_tuples), dtype=np.int8)
        self.count = np.zeros(cap_cols, dtype=np.int64)
        self.num_columns_used = 0

    def _grow(self, min_cols: int, min_tuples: int) -> None:
        cap_c, cap_t = self.b.shape
        new_c = cap_c
        new_t = cap_t
        while new_c < min_cols:
            new_c *= 2
        while new_t < min_tuples:
            new_t *= 2
        if (new_c, new_t) == (cap_c, cap_t):
            return
        for name in ("b", "t", "label"):
            old = getattr(self, name)
            fresh = np.empty((new_c, new_t), dtype=old.dtype)
            fresh[:cap_c, :cap_t] = old
            setattr(self, name, fresh)
        fresh_cnt = np.zeros(new_c, dtype=np.int64)
        fresh_cnt[:cap_c] = self.count
        self.count = fresh_cnt

    def ensure_capacity(self, cols: int, tuples_per_col: int | None = None) -> None:
        self._grow(cols, tuples_per_col or self.b.shape[1])

    def columns(self) -> List[List[Tuple[float, float, int]]]:
        out = []
        for k in range(self.num_columns_used):
            out.append(
                [
                    (self.b[k, j], self.t[k, j], int(self.label[k, j]))
                    for j in range(self.count[k])
                ]
            )
        return out

    def try_fit(self, col: int, tup: IntervalTuple | Tuple[float, float, int], y_t: float) -> FitResult:
        if isinstance(tup, IntervalTuple):
            b, t, lab = tup.b, tup.t, tup.label
        else:
            b, t, lab = tup
        cnt = self.count[col] if col < self.count.shape[0] else 0
        code, y, checks, idx = _kernels.fit_column(
            self.b, self.t, self.label, col, cnt, b, t, lab, y_t, self.y_max, self.eps_y
        )
        return FitResult(int(code), float(y), int(checks), int(idx))

    def commit(self, piece: PieceArrays, m: int, y_t: float) -> None:
        """Insert a placed piece at translation (m * R, y_t)."""
        while True:
            self.ensure_capacity(m + piece.num_columns + 1)
            status = _kernels.commit_one(
                self.b,
                self.t,
                self.label,
                self.count,
                piece.b,
                piece.t,
                piece.label,
                piece.colptr,
                m,
                y_t,
                self.eps_y,
            )
            if status == _kernels.COMMIT_OK:
                break
            if status == _kernels.COMMIT_OVERFLOW:
                cap_c, cap_t = self.b.shape
                self._grow(max(cap_c * 2, m + piece.num_columns + 1), cap_t * 2)
                continue
            raise InfeasibleCommit(
                f"forbidden overlap while committing at m={m}, y_t={y_t}"
            )
        self.num_columns_used = max(self.num_columns_used, m + piece.num_columns)

    def dump(self) -> str:
        lines = []
        for k, col in enumerate(self.columns()):
            parts = " ".join(f"({b:g},{t:g},{LABEL_CHARS[lab]})" for b, t, lab in col)
            lines.append(f"{k}: {parts}")
        return "\n".join(lines)
