"""Minimum-annealing-time search and adiabatic-condition diagnostics.

The success probability of an anneal is the hole-site population at the
final time.  :func:`tau_min` finds the smallest annealing time reaching a
target probability the way one would tune an experiment: double the time
until the target is first exceeded, then bisect.  The adiabatic factor
compares the pace of the drive against the squared level splitting; both a
numeric grid-and-polish version and the large-n closed forms are provided.
"""

from __future__ import annotations

import logging
import warnings
from dataclasses import dataclass, replace

import numpy as np

from . import analysis, model
from .analysis import _polish_min
from .dynamics import evolve_reduced
from .errors import (
    BracketFailureError,
    InvalidParameterError,
    RegimeError,
    UnreachableTargetError,
)
from .model import (
    ModelParams,
    Schedule,
    ScheduleKind,
    schedule_derivatives,
    schedule_eval,
)

__all__ = [
    "AdiabaticFactor",
    "BisectionConfig",
    "BisectionResult",
    "adiabatic_ceiling",
    "adiabatic_factor_closed_form",
    "adiabatic_factor_numeric",
    "bisect_tau_min",
    "peak_location",
    "success_probability",
    "tau_min",
]

logger = logging.getLogger(__name__)

_MAX_DOUBLINGS = 60


def success_probability(schedule: Schedule, tau: float | None = None,
                        n_steps: int | None = None) -> float:
    """Final hole-site population of one anneal; ``tau`` overrides the schedule's."""
    if tau is not None:
        schedule = replace(schedule, tau=float(tau))
    return evolve_reduced(schedule, n_steps=n_steps, n_samples=2).final_p_w


def adiabatic_ceiling(params: ModelParams, kind: ScheduleKind) -> float:
    """Best success probability attainable in the slow-anneal limit.

    The depth ramp is capped at the end: an arbitrarily slow anneal tracks
    the ground state, so the ceiling is the squared hole amplitude of the
    final ground state, which is of order one only for r > 1.  The hopping
    ramp is capped at the start instead: the uniform start state must
    overlap the initial ground state, which happens only for r < 1.  A
    depth ramp with r exactly 1 is accepted but flagged: the final ground
    state then splits its weight evenly and the ceiling sits near 1/2,
    outside both clean regimes.
    """
    if kind is ScheduleKind.CONSTANT_GAMMA:
        if params.r == 1.0:
            warnings.warn(
                "r = 1 sits on the boundary between a localised and a "
                "delocalised final ground state; the slow-anneal ceiling is "
                "near 1/2 and both closed-form regimes fail",
                stacklevel=2,
            )
        amp = model.ground_hole_amplitude(params, params.gamma0, params.chi0)
        return float(amp * amp)
    return analysis.uniform_ground_overlap(params, params.gamma0, params.chi0)


@dataclass(frozen=True)
class BisectionConfig:
    """Knobs for the minimum-annealing-time search.

    ``accuracy`` bounds both the final bracket width and how far the
    probabilities at the bracket ends may sit from the target before the
    search stops.  ``tau_lo`` defaults to 0 (where the success probability
    is 1/n without any integration) and ``tau_hi`` to auto-doubling from 1.
    ``n_steps`` of None defers to the dynamics step policy for every trial.
    """

    p_target: float
    accuracy: float = 1e-4
    tau_lo: float | None = None
    tau_hi: float | None = None
    max_iters: int = 200
    n_steps: int | None = None

    def __post_init__(self) -> None:
        if not (np.isfinite(self.p_target) and 0.0 < self.p_target < 1.0):
            raise InvalidParameterError(
                f"p_target must lie strictly between 0 and 1, got {self.p_target!r}"
            )
        if not (np.isfinite(self.accuracy) and self.accuracy > 0.0):
            raise InvalidParameterError(
                f"accuracy must be finite and > 0, got {self.accuracy!r}"
            )
        if self.max_iters < 1:
            raise InvalidParameterError(f"max_iters must be >= 1, got {self.max_iters}")
        if self.tau_lo is not None and not (
            np.isfinite(self.tau_lo) and self.tau_lo >= 0.0
        ):
            raise InvalidParameterError(f"tau_lo must be >= 0, got {self.tau_lo!r}")
        if self.tau_hi is not None:
            if not (np.isfinite(self.tau_hi) and self.tau_hi > 0.0):
                raise InvalidParameterError(f"tau_hi must be > 0, got {self.tau_hi!r}")
            lo = 0.0 if self.tau_lo is None else self.tau_lo
            if self.tau_hi <= lo:
                raise InvalidParameterError(
                    f"tau_hi={self.tau_hi} must exceed tau_lo={lo}"
                )


@dataclass(frozen=True)
class BisectionResult:
    """Certified bracket around the minimum annealing time.

    ``tau`` is the returned answer: the smallest trial time observed to
    meet the target, i.e. the upper bracket end.
    """

    tau: float
    tau_lo: float
    tau_hi: float
    p_lo: float
    p_hi: float
    iterations: int
    evaluations: int


def bisect_tau_min(params: ModelParams, kind: ScheduleKind,
                   config: BisectionConfig) -> BisectionResult:
    """Bracket and bisect the smallest annealing time reaching ``p_target``.

    Raises :class:`~holeanneal.errors.UnreachableTargetError` before any
    integration when the slow-anneal ceiling cannot exceed the target.  The
    bisection stops once either (a) both bracket ends sit within
    ``accuracy`` of the target probability and the bracket is no wider than
    ``accuracy``, or (b) the width drops below ``accuracy * tau_hi``, which
    also covers plateaus where the lower end never approaches the target.
    """
    ceiling = adiabatic_ceiling(params, kind)
    if ceiling <= config.p_target:
        raise UnreachableTargetError(
            f"target probability {config.p_target} is unreachable: the "
            f"slow-anneal ceiling for r={params.r} is {ceiling:.6g}"
        )

    evaluations = 0

    def prob(tau: float) -> float:
        nonlocal evaluations
        if tau == 0.0:
            return 1.0 / params.n  # frozen dynamics leave the uniform start
        evaluations += 1
        sched = Schedule(kind, params, float(tau))
        return evolve_reduced(sched, n_steps=config.n_steps, n_samples=2).final_p_w

    lo = 0.0 if config.tau_lo is None else float(config.tau_lo)
    p_lo = prob(lo)
    if p_lo > config.p_target:
        raise BracketFailureError(
            f"lower bracket tau={lo} already exceeds the target probability"
        )
    if config.tau_hi is not None:
        hi = float(config.tau_hi)
        p_hi = prob(hi)
        if p_hi <= config.p_target:
            raise BracketFailureError(
                f"tau_hi={hi} reaches only p={p_hi:.6g} < target {config.p_target}"
            )
    else:
        hi = 1.0
        p_hi = prob(hi)
        doublings = 0
        while p_hi <= config.p_target:
            doublings += 1
            if doublings > _MAX_DOUBLINGS:
                raise BracketFailureError(
                    f"no annealing time up to {hi:.6g} reached the target "
                    f"probability {config.p_target}"
                )
            hi *= 2.0
            p_hi = prob(hi)
    iterations = 0
    while iterations < config.max_iters:
        width = hi - lo
        if (
            abs(p_hi - config.p_target) <= config.accuracy
            and abs(p_lo - config.p_target) <= config.accuracy
            and width <= config.accuracy
        ):
            break
        if width < config.accuracy * hi:
            break
        mid = 0.5 * (lo + hi)
        p_mid = prob(mid)
        iterations += 1
        if p_mid > config.p_target:
            hi, p_hi = mid, p_mid
        else:
            lo, p_lo = mid, p_mid
    else:
        logger.warning(
            "bisection hit max_iters=%d with bracket width %.3e",
            config.max_iters, hi - lo,
        )
    logger.debug(
        "tau_min bracket [%.9g, %.9g] after %d bisections, %d integrations",
        lo, hi, iterations, evaluations,
    )
    return BisectionResult(tau=hi, tau_lo=lo, tau_hi=hi, p_lo=p_lo, p_hi=p_hi,
                           iterations=iterations, evaluations=evaluations)


def tau_min(params: ModelParams, kind: ScheduleKind,
            config: BisectionConfig) -> float:
    """Smallest annealing time reaching ``config.p_target``, to ``config.accuracy``."""
    return bisect_tau_min(params, kind, config).tau


@dataclass(frozen=True)
class AdiabaticFactor:
    """Peak drive matrix element against the squared minimum splitting.

    ``alpha = numerator / min_gap_sq`` is the quantity that multiplies
    ``1 / tau`` in the adiabatic criterion, using d/ds derivatives, so the
    criterion reads ``tau >> alpha``.
    """

    numerator: float
    min_gap_sq: float
    alpha: float
    s_at_max: float
    s_at_min_gap: float


def _drive_element(schedule: Schedule, s):
    """|<lower(s)| dH/ds |upper(s)>| on the reduced block, in closed form.

    For a real symmetric 2x2 family ``c*I + b*sigma_z + v*sigma_x`` the
    cross matrix element of the s-derivative is ``(b*v' - v*b') / omega``
    with ``omega = hypot(b, v)`` half the splitting — no eigenvectors
    needed, and the expression stays regular wherever the splitting does
    not close.
    """
    p = schedule.params
    g, c = schedule_eval(schedule, s)
    dg, dc = schedule_derivatives(schedule)
    root = np.sqrt(p.n - 1.0)
    b = 0.5 * ((p.n - 2.0) * g - c)
    v = -g * root
    db = 0.5 * ((p.n - 2.0) * dg - dc)
    dv = -dg * root
    omega = np.hypot(b, v)
    return np.abs(b * dv - v * db) / omega


def adiabatic_factor_numeric(schedule: Schedule, n_grid: int = 4096) -> AdiabaticFactor:
    """Grid-then-polish evaluation of the adiabatic factor over s in [0, 1].

    The drive element and the splitting are scanned on a uniform grid and
    each extremum is refined with a bounded scalar minimiser inside its
    bracketing pair of cells.  ``schedule.tau`` plays no role: the factor
    is defined with d/ds derivatives.
    """
    if n_grid < 64:
        raise InvalidParameterError(f"n_grid must be >= 64, got {n_grid}")
    p = schedule.params
    s = np.linspace(0.0, 1.0, n_grid + 1)
    elem = _drive_element(schedule, s)
    g, c = schedule_eval(schedule, s)
    gaps = model.gap(p, g, c)

    i = int(np.argmax(elem))
    s_max, neg = _polish_min(
        lambda x: -_drive_element(schedule, float(x)),
        s[max(i - 1, 0)], s[min(i + 1, n_grid)], s[i],
    )
    numerator = -neg

    j = int(np.argmin(gaps))
    s_min, gap_min = _polish_min(
        lambda x: model.gap(p, *schedule_eval(schedule, float(x))),
        s[max(j - 1, 0)], s[min(j + 1, n_grid)], s[j],
    )
    return AdiabaticFactor(
        numerator=float(numerator),
        min_gap_sq=float(gap_min * gap_min),
        alpha=float(numerator / (gap_min * gap_min)),
        s_at_max=float(s_max),
        s_at_min_gap=float(s_min),
    )


def adiabatic_factor_closed_form(params: ModelParams, kind: ScheduleKind) -> float:
    """Large-n closed form of the adiabatic factor at the crossing.

    ``r / (8 * gamma0)`` for the depth ramp, which needs r > 1 so the ramp
    crosses; ``1 / (8 * gamma0 * r^2)`` for the hopping ramp, which needs
    r < 1.  Outside those regimes the crossing is never swept and
    :class:`~holeanneal.errors.RegimeError` is raised.
    """
    if kind is ScheduleKind.CONSTANT_GAMMA:
        if params.r <= 1.0:
            raise RegimeError(
                f"depth-ramp closed form assumes r > 1, got r={params.r}"
            )
        return params.r / (8.0 * params.gamma0)
    if params.r >= 1.0:
        raise RegimeError(f"hopping-ramp closed form assumes r < 1, got r={params.r}")
    return 1.0 / (8.0 * params.gamma0 * params.r ** 2)


def peak_location(params: ModelParams, kind: ScheduleKind) -> float:
    """Reduced time where the drive peaks and the splitting is smallest.

    Exact for the depth ramp, ``(n - 2) / (r * n)``; the hopping ramp uses
    the large-n location ``1 - r``.  Same regime requirements as
    :func:`adiabatic_factor_closed_form`.
    """
    if kind is ScheduleKind.CONSTANT_GAMMA:
        if params.r <= 1.0:
            raise RegimeError(
                f"depth-ramp peak location assumes r > 1, got r={params.r}"
            )
        return (params.n - 2.0) / (params.r * params.n)
    if params.r >= 1.0:
        raise RegimeError(f"hopping-ramp peak location assumes r < 1, got r={params.r}")
    return 1.0 - params.r
