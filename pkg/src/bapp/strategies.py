"""Mission-level deployment policies.

Four strategies are dispatched per deployment:

  std-itp   Shannon planner (alpha = 1) with a disposable agent.
  random    uniform random walk baseline.
  bapp-sig  loss-adaptive alpha: interpolates alpha from the fleet's loss
            fraction, sweeps a small neighborhood, deploys the path with
            the highest expected information at its own alpha.
  bapp-tid  two-phase triggered deployment of scarce high-fidelity agents
            when the windowed entropy drop stagnates.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from .belief import BeliefMap
from .errors import FleetExhaustedError, ParameterError
from .info_measures import BinaryChannel
from .planner import PlanConfig, Trajectory, plan_path, random_walk, score_path

__all__ = [
    "AgentClass",
    "StrategyKind",
    "SigPolicy",
    "TriggerPolicy",
    "FleetState",
    "sig_alpha",
    "sig_sweep_grid",
    "sig_select_path",
    "tid_should_trigger",
    "select_deployment",
]


class AgentClass(enum.Enum):
    DISPOSABLE = "disposable"
    HIGH_FIDELITY = "high-fidelity"


class StrategyKind(enum.Enum):
    STD_ITP = "std-itp"
    RANDOM = "random"
    BAPP_SIG = "bapp-sig"
    BAPP_TID = "bapp-tid"


@dataclass(frozen=True)
class SigPolicy:
    """Bounds and sweep shape for the loss-adaptive alpha strategy."""

    alpha_min: float = 0.5
    alpha_max: float = 1.5
    sweep_halfwidth: float = 0.2
    sweep_step: float = 0.1

    def __post_init__(self):
        if self.alpha_min <= 0 or self.alpha_max < self.alpha_min:
            raise ParameterError("need 0 < alpha_min <= alpha_max")
        if self.sweep_halfwidth < 0 or self.sweep_step <= 0:
            raise ParameterError("need sweep_halfwidth >= 0 and sweep_step > 0")


@dataclass(frozen=True)
class TriggerPolicy:
    """Two-phase entropy-stagnation trigger for high-fidelity deployments.

    Phase I (d <= phase_switch) triggers when the windowed entropy drop
    falls below theta_early; phase II tightens the threshold over time to
    max(eps_min, eps_max - decay_rate * d). Thresholds are in bits of
    normalized mean map entropy.
    """

    window: int = 3
    theta_early: float = 0.02
    phase_switch: int = 12
    eps_min: float = 0.01
    eps_max: float = 0.05
    decay_rate: float = 0.001
    alpha_explore: float = 1.2
    alpha_hf: float = 1.0

    def __post_init__(self):
        if self.window < 1:
            raise ParameterError("window must be >= 1")
        if self.theta_early <= 0:
            raise ParameterError("theta_early must be > 0")
        if self.phase_switch < 0 or self.decay_rate < 0:
            raise ParameterError("phase_switch and decay_rate must be >= 0")
        if not (0 < self.eps_min <= self.eps_max):
            raise ParameterError("need 0 < eps_min <= eps_max")


@dataclass
class FleetState:
    """Mutable per-mission bookkeeping shared by the strategies."""

    r_total: int
    disposable_remaining: int
    high_fidelity_remaining: int
    r_lost: int = 0
    deployment_index: int = 0
    entropy_history: list = field(default_factory=list)

    def __post_init__(self):
        if self.r_total < 1:
            raise ParameterError("fleet needs at least one robot")

    def remaining(self, cls: AgentClass) -> int:
        if cls is AgentClass.DISPOSABLE:
            return self.disposable_remaining
        return self.high_fidelity_remaining


def sig_alpha(fleet: FleetState, policy: SigPolicy) -> float:
    """Linear interpolation of alpha between the policy bounds by loss fraction."""
    if fleet.r_total < 1:
        raise ParameterError("fleet total must be >= 1")
    frac = fleet.r_lost / fleet.r_total
    a = policy.alpha_min + (policy.alpha_max - policy.alpha_min) * frac
    return min(max(a, policy.alpha_min), policy.alpha_max)


def sig_sweep_grid(alpha_hat: float, policy: SigPolicy) -> list[float]:
    """Sweep values alpha_hat - eps ... alpha_hat + eps, clipped to > 0."""
    eps, step = policy.sweep_halfwidth, policy.sweep_step
    if eps == 0.0:
        grid = [alpha_hat]
    else:
        n = int(math.floor(2.0 * eps / step + 1e-9))
        grid = [alpha_hat - eps + k * step for k in range(n + 1)]
    grid = [a for a in grid if a > 0.0]
    if not grid:
        raise ParameterError("alpha sweep is empty after clipping to positive values")
    return grid


def sig_select_path(fleet: FleetState, policy: SigPolicy, belief: BeliefMap, start: int,
                    plan: PlanConfig, channel: BinaryChannel) -> tuple[Trajectory, float]:
    """Plan one path per sweep alpha and keep the highest-scoring one.

    Each candidate is scored by its expected information at its own alpha;
    ties go to the smaller alpha.
    """
    alpha_hat = sig_alpha(fleet, policy)
    best = None
    for a in sig_sweep_grid(alpha_hat, policy):
        cfg = replace(plan, alpha=a)
        traj = plan_path(belief, start, cfg, channel)
        s = score_path(belief, traj, channel, a, plan.mi_form)
        if best is None or s > best[0]:
            best = (s, a, traj)
    return best[2], best[1]


def tid_should_trigger(fleet: FleetState, policy: TriggerPolicy) -> bool:
    """True when the windowed entropy drop is below the phase threshold.

    The drop is H_{d-window} - H_d, referenced to H_0 while d < window.
    Never triggers once the high-fidelity stock is gone.
    """
    if fleet.high_fidelity_remaining <= 0:
        return False
    hist = fleet.entropy_history
    if not hist:
        raise ParameterError("entropy history is empty")
    d = fleet.deployment_index
    ref = hist[max(0, d - policy.window)]
    drop = ref - hist[d]
    if d <= policy.phase_switch:
        threshold = policy.theta_early
    else:
        threshold = max(policy.eps_min, policy.eps_max - policy.decay_rate * d)
    return drop < threshold


def _pick_class(fleet: FleetState, preferred: AgentClass) -> AgentClass:
    """Preferred class if stocked, otherwise the other; error when both empty."""
    if fleet.remaining(preferred) > 0:
        return preferred
    other = AgentClass.HIGH_FIDELITY if preferred is AgentClass.DISPOSABLE else AgentClass.DISPOSABLE
    if fleet.remaining(other) > 0:
        return other
    raise FleetExhaustedError("no agents left to deploy")


def select_deployment(strategy: StrategyKind, fleet: FleetState, belief: BeliefMap, start: int,
                      plan: PlanConfig, channels: dict, sig: Optional[SigPolicy] = None,
                      trigger: Optional[TriggerPolicy] = None,
                      rng: Optional[np.random.Generator] = None) -> tuple[AgentClass, Trajectory, float]:
    """Dispatch one deployment decision: (agent class, trajectory, alpha used)."""
    if strategy is StrategyKind.STD_ITP:
        cls = _pick_class(fleet, AgentClass.DISPOSABLE)
        cfg = replace(plan, alpha=1.0)
        return cls, plan_path(belief, start, cfg, channels[cls]), 1.0
    if strategy is StrategyKind.RANDOM:
        cls = _pick_class(fleet, AgentClass.DISPOSABLE)
        if rng is None:
            raise ParameterError("random strategy needs an rng")
        return cls, random_walk(start, plan.horizon, belief.dims, plan.mask, rng), math.nan
    if strategy is StrategyKind.BAPP_SIG:
        if sig is None:
            raise ParameterError("bapp-sig needs a SigPolicy")
        cls = _pick_class(fleet, AgentClass.DISPOSABLE)
        traj, a = sig_select_path(fleet, sig, belief, start, plan, channels[cls])
        return cls, traj, a
    if strategy is StrategyKind.BAPP_TID:
        if trigger is None:
            raise ParameterError("bapp-tid needs a TriggerPolicy")
        if tid_should_trigger(fleet, trigger):
            cls = _pick_class(fleet, AgentClass.HIGH_FIDELITY)
            alpha = trigger.alpha_hf if cls is AgentClass.HIGH_FIDELITY else trigger.alpha_explore
        else:
            cls = _pick_class(fleet, AgentClass.DISPOSABLE)
            alpha = trigger.alpha_explore if cls is AgentClass.DISPOSABLE else trigger.alpha_hf
        cfg = replace(plan, alpha=alpha)
        return cls, plan_path(belief, start, cfg, channels[cls]), alpha
    raise ParameterError(f"unknown strategy {strategy!r}")
