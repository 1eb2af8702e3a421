"""Brute-force reference implementations for correctness checks.

These recompute the belief updates and the trajectory search by exhaustive
enumeration, sharing no logic with the closed-form code paths they verify.
"""

from __future__ import annotations

import itertools
from typing import Optional, Sequence

import numpy as np

from .belief import BeliefMap, cell_failure_prob
from .info_measures import BinaryChannel, MiForm
from .planner import Trajectory, neighbors, per_cell_gain

__all__ = [
    "posterior_by_enumeration",
    "outcome_probability",
    "martingale_gap",
    "exhaustive_plan",
]


def outcome_probability(priors: Sequence[float], channel: BinaryChannel, theta: int) -> float:
    """P(theta) for one deployment over independent cells, by enumeration."""
    priors = list(priors)
    k = len(priors)
    total = 0.0
    for config in itertools.product((0, 1), repeat=k):
        weight = 1.0
        survive = 1.0
        for p, x in zip(priors, config):
            weight *= p if x else (1.0 - p)
            survive *= (1.0 - channel.tpr) if x else (1.0 - channel.fpr)
        total += weight * (survive if theta == 0 else 1.0 - survive)
    return total


def posterior_by_enumeration(priors: Sequence[float], channel: BinaryChannel,
                             theta: int) -> np.ndarray:
    """Exact posterior marginals P(X_i = 1 | theta) over the visited cells.

    Enumerates every hazard configuration of the distinct visited cells and
    weighs it by the probability of the observed outcome.
    """
    priors = list(priors)
    k = len(priors)
    evidence = 0.0
    mass = np.zeros(k)
    for config in itertools.product((0, 1), repeat=k):
        weight = 1.0
        survive = 1.0
        for p, x in zip(priors, config):
            weight *= p if x else (1.0 - p)
            survive *= (1.0 - channel.tpr) if x else (1.0 - channel.fpr)
        like = survive if theta == 0 else 1.0 - survive
        evidence += weight * like
        for i, x in enumerate(config):
            if x:
                mass[i] += weight * like
    if evidence <= 0.0:
        raise ZeroDivisionError("observation impossible under this belief")
    return mass / evidence


def martingale_gap(priors: Sequence[float], channel: BinaryChannel) -> float:
    """max_i |E_theta[posterior_i] - prior_i| over both outcomes."""
    p0 = outcome_probability(priors, channel, 0)
    p1 = 1.0 - p0
    post = np.zeros(len(priors))
    if p0 > 0.0:
        post += p0 * posterior_by_enumeration(priors, channel, 0)
    if p1 > 0.0:
        post += p1 * posterior_by_enumeration(priors, channel, 1)
    return float(np.max(np.abs(post - np.asarray(priors, dtype=float))))


def _path_score(cells: Sequence[int], gain: np.ndarray, keep: np.ndarray) -> float:
    total = 0.0
    surv = 1.0
    seen = set()
    for c in cells:
        if c not in seen:
            total += surv * gain[c]
            seen.add(c)
        surv *= keep[c]
    return total


def exhaustive_plan(belief: BeliefMap, start: int, horizon: int, channel: BinaryChannel,
                    alpha: float, form: MiForm = MiForm.POSTERIOR,
                    mask: Optional[frozenset] = None) -> Trajectory:
    """Best trajectory by enumerating every 9-connected move sequence.

    Ties resolve to the lexicographically smallest cell sequence. Feasible
    only for tiny grids and horizons.
    """
    dims = belief.dims
    gain = per_cell_gain(belief, channel, alpha, form)
    keep = 1.0 - cell_failure_prob(belief.probs, channel)
    best: tuple = None

    def recurse(prefix: tuple):
        nonlocal best
        if len(prefix) == horizon:
            s = _path_score(prefix, gain, keep)
            key = (-s, prefix)
            if best is None or key < best:
                best = key
            return
        cur = prefix[-1] if prefix else start
        for c in neighbors(cur, dims, mask):
            recurse(prefix + (c,))

    recurse(())
    return Trajectory(start=start, cells=best[1])
