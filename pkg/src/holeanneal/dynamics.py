"""Time evolution of the annealed search.

Two independent integrators are provided on purpose.  :func:`evolve_reduced`
works in the two-dimensional invariant plane and advances with the exact
matrix exponential of the piecewise-frozen 2x2 block, which is cheap enough
to take millions of steps even for a million sites.  :func:`evolve_full`
integrates the raw n-dimensional Schroedinger equation with a fixed-step
fourth-order Runge-Kutta scheme and never renormalises, so it can certify
the reduced path (and its own accuracy, through the reported norm drift)
without sharing any machinery with it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numba import njit

from . import model
from .errors import InvalidParameterError, SizeExceededError
from .model import ModelParams, Schedule, ScheduleKind, schedule_eval

__all__ = [
    "FULL_SIZE_LIMIT",
    "MAX_DEFAULT_STEPS",
    "FullState",
    "ReducedState",
    "RunRecord",
    "convergence_check",
    "default_n_steps",
    "dense_hamiltonian",
    "evolve_full",
    "evolve_reduced",
    "full_state_trajectory",
    "initial_state_uniform",
    "step_propagator",
    "uniform_full_state",
]

MAX_DEFAULT_STEPS = 10_000_000
FULL_SIZE_LIMIT = 4096

# Steps handed to the batched propagator builder in slices this long, so the
# temporary (m, 2, 2) arrays stay modest even for ten-million-step runs.
_CHUNK = 1 << 19


@dataclass(frozen=True)
class ReducedState:
    """Amplitudes on the hole state and on the uniform state of the rest."""

    a_w: complex
    a_u: complex

    @property
    def p_w(self) -> float:
        return abs(self.a_w) ** 2


@dataclass(frozen=True)
class FullState:
    """Raw site amplitudes plus the index of the marked site."""

    amps: np.ndarray
    w: int


@dataclass(frozen=True)
class RunRecord:
    """Sampled history of one anneal.

    ``samples`` holds ``(s, p_w, gap)`` triples on an equally spaced grid
    that always includes s = 0 and s = 1.  ``n_steps`` is the effective
    step count after rounding up so every sample lands exactly on a step
    boundary.  ``norm_drift`` is the largest deviation of the state norm
    from one seen at any sample.
    """

    schedule: Schedule
    n_steps: int
    samples: tuple[tuple[float, float, float], ...]
    final_p_w: float
    norm_drift: float


def initial_state_uniform(params: ModelParams) -> ReducedState:
    """Uniform superposition over all n sites, written in the reduced basis."""
    n = params.n
    return ReducedState(complex(1.0 / math.sqrt(n)), complex(math.sqrt((n - 1.0) / n)))


def uniform_full_state(params: ModelParams, w: int = 0) -> FullState:
    """Uniform superposition over all n sites as raw amplitudes."""
    _check_site(params, w)
    amps = np.full(params.n, 1.0 / math.sqrt(params.n), dtype=np.complex128)
    return FullState(amps=amps, w=int(w))


def default_n_steps(schedule: Schedule) -> int:
    """Step-count policy: 50 steps per unit of time-times-energy-span, capped.

    The span ``max_s (|e_minus| + |e_plus|)`` equals
    ``max((n - 2) * gamma + chi, splitting)``; both arguments are convex
    along the linear ramps, so the maximum over the whole anneal sits at
    one of the endpoints.
    """
    p = schedule.params
    span = 0.0
    for s in (0.0, 1.0):
        g, c = schedule_eval(schedule, s)
        span = max(span, (p.n - 2) * g + c, model.gap(p, g, c))
    return min(math.ceil(50.0 * schedule.tau * span), MAX_DEFAULT_STEPS)


def step_propagator(params: ModelParams, gamma: float, chi: float, dt: float) -> np.ndarray:
    """Exact one-step propagator ``exp(-i * H_block * dt)`` of the frozen block.

    The common phase from the trace is kept (populations never see it); the
    traceless part enters through cosine and sinc factors, with a series
    fallback for the sinc once the splitting times ``dt`` drops below the
    rounding floor.
    """
    if not (np.isfinite(dt) and dt > 0.0):
        raise InvalidParameterError(f"dt must be finite and > 0, got {dt!r}")
    g = np.asarray([float(gamma)])
    c = np.asarray([float(chi)])
    if not np.isfinite(g[0]) or g[0] < 0.0 or not np.isfinite(c[0]) or c[0] < 0.0:
        raise InvalidParameterError(
            f"gamma and chi must be finite and >= 0, got {gamma!r}, {chi!r}"
        )
    return _step_unitaries(params, g, c, float(dt))[0]


def _step_unitaries(params: ModelParams, gamma, chi, dt: float) -> np.ndarray:
    """Batch of exact per-step propagators, shape ``(m, 2, 2)`` complex."""
    n = float(params.n)
    v = gamma * math.sqrt(n - 1.0)  # off-diagonal magnitude of the block
    d = 0.5 * ((n - 2.0) * gamma - chi)  # half of (hole minus rest) diagonal
    h = -0.5 * (chi + (n - 2.0) * gamma)  # common (trace) part
    omega = np.hypot(d, v)
    x = omega * dt
    small = np.abs(x) < 1e-8
    sinc = np.where(small, 1.0 - x * x / 6.0, np.sin(x) / np.where(small, 1.0, x))
    sdt = dt * sinc  # sin(omega * dt) / omega, stable as omega -> 0
    phase = np.exp(-1j * h * dt)
    u = np.empty(np.shape(gamma) + (2, 2), dtype=np.complex128)
    u[..., 0, 0] = phase * (np.cos(x) - 1j * sdt * d)
    u[..., 0, 1] = phase * (1j * sdt * v)
    u[..., 1, 0] = u[..., 0, 1]
    u[..., 1, 1] = phase * (np.cos(x) + 1j * sdt * d)
    return u


def _ordered_product(u: np.ndarray) -> np.ndarray:
    """Chronological product ``u[m-1] @ ... @ u[0]`` by pairwise halving."""
    while u.shape[0] > 1:
        if u.shape[0] % 2:
            u = np.concatenate([u, np.eye(2, dtype=u.dtype)[None]])
        u = np.matmul(u[1::2], u[0::2])
    return u[0]


def _effective_steps(schedule: Schedule, n_steps, n_samples: int) -> tuple[int, int]:
    if n_samples < 2:
        raise InvalidParameterError(f"n_samples must be >= 2, got {n_samples}")
    base = default_n_steps(schedule) if n_steps is None else int(n_steps)
    if base < 1:
        raise InvalidParameterError(f"n_steps must be >= 1, got {n_steps!r}")
    segments = n_samples - 1
    per = -(-base // segments)
    return per * segments, per


def evolve_reduced(schedule: Schedule, n_steps: int | None = None,
                   n_samples: int = 512) -> RunRecord:
    """Anneal the uniform start state through the reduced 2x2 block.

    Each step applies the exact propagator of the block frozen at the step
    midpoint, so the only error is the time dependence within a step and
    the norm is conserved to rounding.  ``n_steps`` defaults to
    :func:`default_n_steps` and is rounded up so the ``n_samples`` sample
    points land exactly on step boundaries.
    """
    n_eff, per = _effective_steps(schedule, n_steps, n_samples)
    p = schedule.params
    dt = schedule.tau / n_eff
    init = initial_state_uniform(p)
    state = np.array([init.a_w, init.a_u], dtype=np.complex128)
    p_w = np.empty(n_samples)
    norms = np.empty(n_samples)
    p_w[0] = abs(state[0]) ** 2
    norms[0] = abs(state[0]) ** 2 + abs(state[1]) ** 2
    for j in range(n_samples - 1):
        k0 = j * per
        for c0 in range(k0, k0 + per, _CHUNK):
            c1 = min(c0 + _CHUNK, k0 + per)
            mids = (np.arange(c0, c1, dtype=float) + 0.5) / n_eff
            g, c = schedule_eval(schedule, mids)
            state = _ordered_product(_step_unitaries(p, g, c, dt)) @ state
        p_w[j + 1] = abs(state[0]) ** 2
        norms[j + 1] = abs(state[0]) ** 2 + abs(state[1]) ** 2
    return _make_record(schedule, n_eff, n_samples, p_w, norms)


def _make_record(schedule: Schedule, n_eff: int, n_samples: int,
                 p_w, norms) -> RunRecord:
    s_grid = np.linspace(0.0, 1.0, n_samples)
    g, c = schedule_eval(schedule, s_grid)
    gaps = model.gap(schedule.params, g, c)
    samples = tuple(
        (float(s), float(pw), float(gp)) for s, pw, gp in zip(s_grid, p_w, gaps)
    )
    return RunRecord(
        schedule=schedule,
        n_steps=n_eff,
        samples=samples,
        final_p_w=float(p_w[-1]),
        norm_drift=float(np.max(np.abs(np.asarray(norms) - 1.0))),
    )


def convergence_check(schedule: Schedule, n_steps: int | None = None) -> float:
    """Step-doubling error probe: ``|final_p_w(n) - final_p_w(2n)|``."""
    base = default_n_steps(schedule) if n_steps is None else int(n_steps)
    p1 = evolve_reduced(schedule, n_steps=base, n_samples=2).final_p_w
    p2 = evolve_reduced(schedule, n_steps=2 * base, n_samples=2).final_p_w
    return abs(p1 - p2)


def _check_site(params: ModelParams, w) -> None:
    if isinstance(w, bool) or not isinstance(w, (int, np.integer)):
        raise InvalidParameterError(f"hole site w must be an integer, got {w!r}")
    if not 0 <= w < params.n:
        raise InvalidParameterError(f"hole site w={w} outside 0..{params.n - 1}")


def _check_size(params: ModelParams) -> None:
    if params.n > FULL_SIZE_LIMIT:
        raise SizeExceededError(
            f"full-space operations are limited to n <= {FULL_SIZE_LIMIT}, got {params.n}"
        )


def dense_hamiltonian(params: ModelParams, gamma: float, chi: float,
                      w: int = 0) -> np.ndarray:
    """Explicit n-by-n matrix: all-to-all hopping plus the well at site ``w``."""
    _check_size(params)
    _check_site(params, w)
    g = float(gamma)
    c = float(chi)
    if not (np.isfinite(g) and g >= 0.0 and np.isfinite(c) and c >= 0.0):
        raise InvalidParameterError(
            f"gamma and chi must be finite and >= 0, got {gamma!r}, {chi!r}"
        )
    h = np.full((params.n, params.n), -g)
    np.fill_diagonal(h, 0.0)
    h[w, w] = -c
    return h


@njit(cache=True)
def _rk4_kernel(psi, w, kind, gamma0, chi0, n, tau, n_steps, record_every, out):
    # Classic RK4 on i * dpsi/dt = (H(t) - shift(t)) * psi with the energy
    # zero moved to the mean of the two in-plane levels at each instant; a
    # scalar shift only rotates the global phase, so populations are
    # untouched while the stiffest rotation rate the integrator sees drops
    # from ~(n * gamma) to ~(gap / 2).  The all-to-all hop is applied in
    # O(n) through the running total of the amplitudes.
    nn = psi.shape[0]
    k1 = np.empty(nn, np.complex128)
    k2 = np.empty(nn, np.complex128)
    k3 = np.empty(nn, np.complex128)
    k4 = np.empty(nn, np.complex128)
    tmp = np.empty(nn, np.complex128)
    dt = tau / n_steps
    for i in range(nn):
        out[0, i] = psi[i]
    slot = 1
    for step in range(n_steps):
        for stage in range(4):
            if stage == 0:
                s = step / n_steps
                src = psi
            elif stage == 1:
                s = (step + 0.5) / n_steps
                for i in range(nn):
                    tmp[i] = psi[i] + 0.5 * dt * k1[i]
                src = tmp
            elif stage == 2:
                s = (step + 0.5) / n_steps
                for i in range(nn):
                    tmp[i] = psi[i] + 0.5 * dt * k2[i]
                src = tmp
            else:
                s = (step + 1.0) / n_steps
                for i in range(nn):
                    tmp[i] = psi[i] + dt * k3[i]
                src = tmp
            if kind == 0:
                g = gamma0
                c = chi0 * s
            else:
                g = gamma0 * (1.0 - s)
                c = chi0
            shift = -0.5 * (c + (n - 2.0) * g)
            tot = 0.0 + 0.0j
            for i in range(nn):
                tot += src[i]
            if stage == 0:
                dst = k1
            elif stage == 1:
                dst = k2
            elif stage == 2:
                dst = k3
            else:
                dst = k4
            gm = g - shift
            for i in range(nn):
                dst[i] = -1j * (gm * src[i] - g * tot)
            dst[w] += -1j * (-c * src[w])
        sixth = dt / 6.0
        for i in range(nn):
            psi[i] = psi[i] + sixth * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])
        if (step + 1) % record_every == 0:
            for i in range(nn):
                out[slot, i] = psi[i]
            slot += 1


def full_state_trajectory(params: ModelParams, w: int, schedule: Schedule,
                          n_steps: int | None = None, n_samples: int = 512,
                          initial_state=None) -> tuple[np.ndarray, np.ndarray]:
    """Integrate the raw n-site Schroedinger equation with fixed-step RK4.

    Returns ``(s_grid, states)`` where ``states[j]`` is the (deliberately
    never renormalised) state at reduced time ``s_grid[j]``.
    ``initial_state`` may be a :class:`FullState`, a length-n complex
    array, or None for the uniform start.  Limited to
    ``n <= FULL_SIZE_LIMIT`` sites.
    """
    _check_size(params)
    _check_site(params, w)
    n_eff, per = _effective_steps(schedule, n_steps, n_samples)
    if initial_state is None:
        psi = uniform_full_state(params, w).amps.copy()
    else:
        amps = initial_state.amps if isinstance(initial_state, FullState) else initial_state
        psi = np.asarray(amps, dtype=np.complex128).copy()
        if psi.shape != (params.n,):
            raise InvalidParameterError(
                f"initial state must have shape ({params.n},), got {psi.shape}"
            )
        if not np.all(np.isfinite(psi)):
            raise InvalidParameterError("initial state contains non-finite amplitudes")
    out = np.empty((n_samples, params.n), dtype=np.complex128)
    kind = 0 if schedule.kind is ScheduleKind.CONSTANT_GAMMA else 1
    _rk4_kernel(psi, int(w), kind, params.gamma0, params.chi0, float(params.n),
                float(schedule.tau), n_eff, per, out)
    return np.linspace(0.0, 1.0, n_samples), out


def evolve_full(params: ModelParams, w: int, schedule: Schedule,
                n_steps: int | None = None, n_samples: int = 512,
                initial_state=None) -> RunRecord:
    """Full-space counterpart of :func:`evolve_reduced`; independent oracle.

    Same sampled-record contract, but ``p_w`` comes from the raw site
    amplitude at ``w`` and ``norm_drift`` reports the RK4 norm error.
    """
    _, states = full_state_trajectory(params, w, schedule, n_steps=n_steps,
                                      n_samples=n_samples,
                                      initial_state=initial_state)
    n_eff, _ = _effective_steps(schedule, n_steps, n_samples)
    p_w = np.abs(states[:, w]) ** 2
    norms = np.sum(np.abs(states) ** 2, axis=1)
    return _make_record(schedule, n_eff, n_samples, p_w, norms)
