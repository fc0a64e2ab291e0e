"""Minimum-time search, reachability guards, and the adiabatic factor."""

import numpy as np
import pytest

import holeanneal as ha
from holeanneal import BisectionConfig, ModelParams, Schedule, ScheduleKind
from holeanneal.annealing import _drive_element
from holeanneal.errors import (
    BracketFailureError,
    InvalidParameterError,
    RegimeError,
    UnreachableTargetError,
)

CG = ScheduleKind.CONSTANT_GAMMA
CC = ScheduleKind.CONSTANT_CHI


# ---------------------------------------------------------------- probability


def test_success_probability_tau_override():
    p = ModelParams(n=64, gamma0=0.5, r=2.0)
    sched = Schedule(CG, p, 1.0)
    direct = ha.evolve_reduced(Schedule(CG, p, 2.0), n_samples=2).final_p_w
    assert ha.success_probability(sched, tau=2.0) == direct


def test_success_probability_rises_through_first_crossing():
    # The probability climbs monotonically with tau until well past the
    # 0.33 target, and the later interference ripple never dips back below
    # it -- together these make the bisected crossing unique.
    p = ModelParams(n=64, gamma0=0.5, r=2.0)
    sched = Schedule(CG, p, 1.0)
    taus = np.arange(0.02, 0.36, 0.02)
    probs = [ha.success_probability(sched, tau=t) for t in taus]
    assert all(b > a for a, b in zip(probs, probs[1:]))
    ripple = [ha.success_probability(sched, tau=t) for t in np.arange(0.4, 1.65, 0.1)]
    assert min(ripple) > 0.33


def test_slow_anneal_approaches_ceiling():
    p = ModelParams(n=64, gamma0=0.5, r=2.0)
    ceiling = ha.adiabatic_ceiling(p, CG)
    slow = ha.success_probability(Schedule(CG, p, 200.0))
    assert ceiling == pytest.approx(0.9861359120657515, rel=1e-12)
    assert abs(slow - ceiling) <= 1e-4


def test_adiabatic_ceiling_hopping_ramp_is_initial_overlap():
    p = ModelParams(n=10_000, gamma0=0.5, r=0.5)
    assert ha.adiabatic_ceiling(p, CC) == ha.initial_ground_overlap(p, CC)


def test_r_equal_one_is_flagged():
    p = ModelParams(n=100, gamma0=0.5, r=1.0)
    with pytest.warns(UserWarning):
        ceiling = ha.adiabatic_ceiling(p, CG)
    assert 0.3 < ceiling < 0.7  # near 1/2 on the boundary


# ------------------------------------------------------------------ bisection


def test_bisection_config_validation():
    with pytest.raises(InvalidParameterError):
        BisectionConfig(p_target=0.0)
    with pytest.raises(InvalidParameterError):
        BisectionConfig(p_target=1.0)
    with pytest.raises(InvalidParameterError):
        BisectionConfig(p_target=0.5, accuracy=0.0)
    with pytest.raises(InvalidParameterError):
        BisectionConfig(p_target=0.5, tau_lo=2.0, tau_hi=1.0)
    with pytest.raises(InvalidParameterError):
        BisectionConfig(p_target=0.5, max_iters=0)


def test_bisect_bracket_certification():
    p = ModelParams(n=64, gamma0=0.5, r=2.0)
    config = BisectionConfig(p_target=0.33, accuracy=1e-4)
    res = ha.bisect_tau_min(p, CG, config)
    assert res.tau == res.tau_hi
    assert res.tau_hi - res.tau_lo <= 1e-4
    assert res.p_hi > 0.33 >= res.p_lo
    assert res.evaluations >= res.iterations


def test_tau_min_against_fine_grid():
    # Independent oracle: scan tau upward in accuracy-sized increments and
    # take the first trial that meets the target.
    p = ModelParams(n=16, gamma0=0.5, r=2.0)
    accuracy = 1e-3
    config = BisectionConfig(p_target=0.33, accuracy=accuracy)
    got = ha.tau_min(p, CG, config)
    sched = Schedule(CG, p, 1.0)
    tau = accuracy
    while ha.success_probability(sched, tau=tau) <= 0.33:
        tau += accuracy
        assert tau < 5.0, "grid scan ran away"
    assert abs(got - tau) <= accuracy + 1e-12


def test_tau_min_step_count_invariance():
    # Doubling the per-trial integration effort must not move the answer
    # by more than the bracket tolerance.
    p = ModelParams(n=64, gamma0=0.5, r=2.0)
    sched = Schedule(CG, p, 1.0)
    base = ha.default_n_steps(sched)
    t1 = ha.tau_min(p, CG, BisectionConfig(p_target=0.33, accuracy=1e-4, n_steps=base))
    t2 = ha.tau_min(p, CG, BisectionConfig(p_target=0.33, accuracy=1e-4, n_steps=2 * base))
    assert abs(t1 - t2) <= 1e-4


def test_tau_min_explicit_bracket():
    p = ModelParams(n=64, gamma0=0.5, r=2.0)
    free = ha.tau_min(p, CG, BisectionConfig(p_target=0.33, accuracy=1e-4))
    pinned = ha.tau_min(
        p, CG, BisectionConfig(p_target=0.33, accuracy=1e-4, tau_lo=0.05, tau_hi=1.0)
    )
    assert abs(free - pinned) <= 2e-4


def test_unreachable_target_pre_empts_integration():
    p = ModelParams(n=1_000_000, gamma0=0.5, r=0.5)
    config = BisectionConfig(p_target=0.33)
    with pytest.raises(UnreachableTargetError):
        ha.bisect_tau_min(p, CG, config)
    # hopping ramp with a deep well: the start state misses the ground state
    q = ModelParams(n=10_000, gamma0=0.5, r=2.0)
    with pytest.raises(UnreachableTargetError):
        ha.bisect_tau_min(q, CC, BisectionConfig(p_target=0.9))


def test_bracket_failures():
    p = ModelParams(n=64, gamma0=0.5, r=2.0)
    with pytest.raises(BracketFailureError):
        # upper end pinned below the crossing time
        ha.bisect_tau_min(p, CG, BisectionConfig(p_target=0.33, tau_hi=0.01))
    with pytest.raises(BracketFailureError):
        # lower end already past the target
        ha.bisect_tau_min(p, CG, BisectionConfig(p_target=0.33, tau_lo=1.0, tau_hi=50.0))


# ----------------------------------------------------------- adiabatic factor


def test_drive_element_against_eigenvector_oracle():
    # Finite-difference oracle: build both eigenvectors of the block and
    # contract them with dH/ds obtained by differencing (the block is linear
    # in s, so the difference is exact up to rounding).
    for kind, r in ((CG, 2.0), (CC, 0.5)):
        p = ModelParams(n=1000, gamma0=0.5, r=r)
        sched = Schedule(kind, p, 1.0)
        h_step = 1e-5
        for s in (0.1, 0.45, 0.5, 0.62, 0.9):
            gm, cm = ha.schedule_eval(sched, s - h_step)
            gp, cp = ha.schedule_eval(sched, s + h_step)
            dh = (ha.reduced_hamiltonian(p, gp, cp)
                  - ha.reduced_hamiltonian(p, gm, cm)) / (2.0 * h_step)
            g, c = ha.schedule_eval(sched, s)
            _, vecs = np.linalg.eigh(ha.reduced_hamiltonian(p, g, c))
            oracle = abs(vecs[:, 0] @ dh @ vecs[:, 1])
            assert _drive_element(sched, s) == pytest.approx(oracle, rel=1e-6)


@pytest.mark.parametrize(
    "kind,r,expected",
    [(CG, 2.0, 0.5), (CC, 0.5, 1.0)],
)
def test_adiabatic_factor_closed_form_values(kind, r, expected):
    p = ModelParams(n=1_000_000, gamma0=0.5, r=r)
    assert ha.adiabatic_factor_closed_form(p, kind) == pytest.approx(expected, rel=1e-12)


def test_adiabatic_factor_regimes():
    p = ModelParams(n=100, gamma0=0.5, r=0.5)
    with pytest.raises(RegimeError):
        ha.adiabatic_factor_closed_form(p, CG)
    with pytest.raises(RegimeError):
        ha.peak_location(p, CG)
    q = ModelParams(n=100, gamma0=0.5, r=2.0)
    with pytest.raises(RegimeError):
        ha.adiabatic_factor_closed_form(q, CC)
    with pytest.raises(RegimeError):
        ha.peak_location(q, CC)


def test_adiabatic_factor_numeric_matches_closed_form():
    for kind, r, expected in ((CG, 2.0, 0.5), (CC, 0.5, 1.0)):
        p = ModelParams(n=1_000_000, gamma0=0.5, r=r)
        af = ha.adiabatic_factor_numeric(Schedule(kind, p, 1.0))
        assert af.alpha == pytest.approx(expected, rel=1e-3)
        assert af.alpha == pytest.approx(af.numerator / af.min_gap_sq, rel=1e-12)
        peak = ha.peak_location(p, kind)
        assert af.s_at_max == pytest.approx(peak, abs=1e-3)
        assert af.s_at_min_gap == pytest.approx(peak, abs=1e-3)
        # drive peak and minimum splitting coincide for these ramps
        assert abs(af.s_at_max - af.s_at_min_gap) <= 1e-5


def test_adiabatic_factor_min_gap_value():
    p = ModelParams(n=1_000_000, gamma0=0.5, r=2.0)
    af = ha.adiabatic_factor_numeric(Schedule(CG, p, 1.0))
    exact = (2.0 * p.gamma0) ** 2 * (p.n - 1.0)  # (2 gamma0 sqrt(n-1))^2
    assert af.min_gap_sq == pytest.approx(exact, rel=1e-10)


def test_adiabatic_factor_grid_validation():
    p = ModelParams(n=100, gamma0=0.5, r=2.0)
    with pytest.raises(InvalidParameterError):
        ha.adiabatic_factor_numeric(Schedule(CG, p, 1.0), n_grid=32)


def test_peak_location_depth_ramp_exact():
    p = ModelParams(n=1000, gamma0=0.5, r=2.0)
    assert ha.peak_location(p, CG) == pytest.approx((1000.0 - 2.0) / 2000.0, rel=1e-15)
    q = ModelParams(n=1000, gamma0=0.5, r=0.25)
    assert ha.peak_location(q, CC) == pytest.approx(0.75, rel=1e-15)
