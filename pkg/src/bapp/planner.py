"""Fixed-horizon trajectory search over a 9-connected grid.

Motion primitives are the 8 surrounding cells plus stay-in-place. Candidate
paths are scored by survival-discounted behavioral mutual information and
searched with a width-limited beam; beam width None means exhaustive.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .belief import BeliefMap, GridDims, cell_failure_prob
from .errors import ParameterError
from .info_measures import BinaryChannel, MiForm, mi_behavioral

__all__ = [
    "Trajectory",
    "PlanConfig",
    "neighbors",
    "score_path",
    "plan_path",
    "random_walk",
    "per_cell_gain",
]

_NEIGHBOR_CACHE: dict[tuple[int, int], tuple[tuple[int, ...], ...]] = {}


def _neighbor_table(dims: GridDims) -> tuple[tuple[int, ...], ...]:
    """All 9-connected successors per cell (self included), ascending order."""
    key = (dims.rows, dims.cols)
    table = _NEIGHBOR_CACHE.get(key)
    if table is None:
        rows, cols = key
        out = []
        for r in range(rows):
            for c in range(cols):
                cells = []
                for dr in (-1, 0, 1):
                    for dc in (-1, 0, 1):
                        rr, cc = r + dr, c + dc
                        if 0 <= rr < rows and 0 <= cc < cols:
                            cells.append(rr * cols + cc)
                out.append(tuple(sorted(cells)))
        table = tuple(out)
        _NEIGHBOR_CACHE[key] = table
    return table


@dataclass(frozen=True)
class Trajectory:
    """Ordered cells visited after leaving `start`; length is the horizon."""

    start: int
    cells: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "cells", tuple(int(c) for c in self.cells))

    def validate(self, dims: GridDims, mask: Optional[frozenset] = None) -> None:
        if not dims.contains(self.start):
            raise ParameterError(f"start {self.start} outside grid")
        prev = self.start
        table = _neighbor_table(dims)
        for c in self.cells:
            if not dims.contains(c):
                raise ParameterError(f"cell {c} outside grid")
            if c not in table[prev]:
                raise ParameterError(f"move {prev} -> {c} is not 9-connected")
            if mask is not None and c != self.start and c not in mask:
                raise ParameterError(f"cell {c} outside the allowed mask")
            prev = c


@dataclass(frozen=True)
class PlanConfig:
    horizon: int = 15
    beam_width: Optional[int] = 64  # None = exhaustive
    alpha: float = 1.0
    mi_form: MiForm = MiForm.POSTERIOR
    mask: Optional[frozenset] = None

    def __post_init__(self):
        if self.horizon < 1:
            raise ParameterError(f"horizon must be >= 1, got {self.horizon}")
        if self.beam_width is not None and self.beam_width < 1:
            raise ParameterError(f"beam width must be >= 1, got {self.beam_width}")
        if self.mask is not None:
            object.__setattr__(self, "mask", frozenset(int(c) for c in self.mask))


def neighbors(cell: int, dims: GridDims, mask: Optional[frozenset] = None) -> tuple[int, ...]:
    """9-connected successors of a cell in ascending (row-major) order.

    Staying put is always allowed, so the cell itself is returned even when
    the mask excludes every adjacent cell.
    """
    if not dims.contains(cell):
        raise ParameterError(f"cell {cell} outside grid")
    cand = _neighbor_table(dims)[cell]
    if mask is None:
        return cand
    return tuple(c for c in cand if c == cell or c in mask)


def per_cell_gain(belief: BeliefMap, channel: BinaryChannel, alpha: float,
                  form: MiForm = MiForm.POSTERIOR) -> np.ndarray:
    """First-visit information value of each cell at the given behavior alpha.

    Cells already resolved to 0 or 1 carry no remaining uncertainty and are
    forced to zero gain regardless of the MI form.
    """
    p = belief.probs
    gain = np.asarray(mi_behavioral(p, channel, alpha, form), dtype=float)
    gain = np.where((p <= 0.0) | (p >= 1.0), 0.0, gain)
    return gain


def score_path(belief: BeliefMap, path: Trajectory, channel: BinaryChannel,
               alpha: float, form: MiForm = MiForm.POSTERIOR) -> float:
    """Survival-discounted sum of first-visit per-cell information.

    The k-th visited cell contributes s_{k-1} * gain(cell), with s_0 = 1 and
    s_k = s_{k-1} * (1 - q(cell)). Revisited cells add no information but
    still discount survival, matching the per-step failure exposure.
    """
    gain = per_cell_gain(belief, channel, alpha, form)
    keep = 1.0 - cell_failure_prob(belief.probs, channel)
    total = 0.0
    surv = 1.0
    seen = set()
    for c in path.cells:
        if c not in seen:
            total += surv * gain[c]
            seen.add(c)
        surv *= keep[c]
    return float(total)


def _rank_key(state):
    return (-state[0], state[1])


def plan_path(belief: BeliefMap, start: int, config: PlanConfig, channel: BinaryChannel) -> Trajectory:
    """Beam search for the best fixed-horizon trajectory from `start`.

    At each depth every retained partial path is expanded through all its
    9-connected successors, partial paths are ranked by score with ties
    broken toward the lexicographically smallest cell sequence, and the top
    beam_width survive. Deterministic for fixed inputs.
    """
    dims = belief.dims
    if not dims.contains(start):
        raise ParameterError(f"start {start} outside grid")
    mask = config.mask
    if mask is not None and start not in mask:
        raise ParameterError(f"start {start} outside the plan mask")
    gain = per_cell_gain(belief, channel, config.alpha, config.mi_form)
    keep = 1.0 - cell_failure_prob(belief.probs, channel)
    table = _neighbor_table(dims)
    gain_l = gain.tolist()
    keep_l = keep.tolist()
    if mask is not None:
        # pre-filter successor lists; staying put is exempt from the mask
        table = tuple(
            tuple(c for c in row if c == cell or c in mask)
            for cell, row in enumerate(table)
        )

    # state: (score, cells, survival, visited bitmask)
    beam = [(0.0, (), 1.0, 0)]
    width = config.beam_width
    for _ in range(config.horizon):
        nxt = []
        append = nxt.append
        for score, cells, surv, visited in beam:
            prev = cells[-1] if cells else start
            for c in table[prev]:
                bit = 1 << c
                if visited & bit:
                    append((score, cells + (c,), surv * keep_l[c], visited))
                else:
                    append((score + surv * gain_l[c], cells + (c,), surv * keep_l[c], visited | bit))
        nxt.sort(key=_rank_key)
        beam = nxt if width is None else nxt[:width]
    best = beam[0]
    return Trajectory(start=start, cells=best[1])


def random_walk(start: int, horizon: int, dims: GridDims, mask: Optional[frozenset],
                rng: np.random.Generator) -> Trajectory:
    """Uniform 9-connected walk of fixed length; reproducible per rng state."""
    if not dims.contains(start):
        raise ParameterError(f"start {start} outside grid")
    cells = []
    cur = start
    for _ in range(horizon):
        options = neighbors(cur, dims, mask)
        cur = options[int(rng.integers(len(options)))]
        cells.append(cur)
    return Trajectory(start=start, cells=tuple(cells))
