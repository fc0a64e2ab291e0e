"""Model definition: parameters, annealing schedules, and the closed-form spectrum.

An ``n``-site system couples every pair of sites with hopping strength
``gamma`` while one marked site (the hole) sits ``chi`` below the rest.
Because the Hamiltonian treats all unmarked sites identically, the two
lowest levels live entirely in the plane spanned by the hole state and the
uniform superposition of the remaining ``n - 1`` sites, and every spectral
quantity used elsewhere in the package has a closed form in that 2x2
block.  The remaining ``n - 2`` antisymmetric combinations of unmarked
sites are frozen spectators at energy ``+gamma``: they carry no amplitude
on the hole and never mix with the search plane.

Two linear annealing schedules are supported over the dimensionless time
``s = t / tau``: constant hopping with the hole depth ramped up from zero,
and constant hole depth with the hopping ramped down to zero.  Both are
parameterised by the depth ratio ``r`` through ``chi0 = r * n * gamma0``.

All spectral helpers accept scalars or numpy arrays for ``gamma`` and
``chi`` and broadcast elementwise; scalar inputs give scalar outputs.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameterError, OutOfRangeError, SingularParameterError

__all__ = [
    "ModelParams",
    "Schedule",
    "ScheduleKind",
    "SpectralPoint",
    "coefficients",
    "degenerate_eigenvalue",
    "eigenvalues",
    "gap",
    "ground_hole_amplitude",
    "reduced_hamiltonian",
    "schedule_derivatives",
    "schedule_eval",
    "spectral_point",
]


@dataclass(frozen=True)
class ModelParams:
    """Static problem parameters.

    ``n``      number of sites, at least 3.
    ``gamma0`` hopping scale, strictly positive.
    ``r``      hole depth measured against the hopping bandwidth through
               ``chi0 = r * n * gamma0``.  The ratio is what decides
               whether a schedule sweeps through the avoided crossing, so
               it is stored directly and ``chi0`` is always derived.
    """

    n: int
    gamma0: float
    r: float

    def __post_init__(self) -> None:
        if isinstance(self.n, bool) or not isinstance(self.n, (int, np.integer)):
            raise InvalidParameterError(f"n must be an integer, got {self.n!r}")
        if self.n < 3:
            raise InvalidParameterError(f"n must be >= 3, got {self.n}")
        if not (np.isfinite(self.gamma0) and self.gamma0 > 0.0):
            raise InvalidParameterError(
                f"gamma0 must be finite and > 0, got {self.gamma0!r}"
            )
        if not (np.isfinite(self.r) and self.r > 0.0):
            raise InvalidParameterError(f"r must be finite and > 0, got {self.r!r}")

    @property
    def chi0(self) -> float:
        """Full hole depth reached by the schedules."""
        return self.r * self.n * self.gamma0

    @classmethod
    def from_chi0(cls, n: int, gamma0: float, chi0: float) -> "ModelParams":
        """Build parameters from a raw hole depth instead of the ratio ``r``."""
        if isinstance(n, bool) or not isinstance(n, (int, np.integer)) or n < 3:
            raise InvalidParameterError(f"n must be an integer >= 3, got {n!r}")
        if not (np.isfinite(gamma0) and gamma0 > 0.0):
            raise InvalidParameterError(f"gamma0 must be finite and > 0, got {gamma0!r}")
        return cls(n=int(n), gamma0=float(gamma0), r=float(chi0) / (n * float(gamma0)))


class ScheduleKind(str, enum.Enum):
    """Which coupling stays fixed while the other one is ramped linearly."""

    CONSTANT_GAMMA = "const-gamma"
    CONSTANT_CHI = "const-chi"


@dataclass(frozen=True)
class Schedule:
    """Annealing path ``s -> (gamma(s), chi(s))`` over ``s = t / tau`` in [0, 1].

    ``const-gamma`` keeps ``gamma = gamma0`` and ramps ``chi`` from 0 up to
    ``chi0``; ``const-chi`` keeps ``chi = chi0`` and ramps ``gamma`` from
    ``gamma0`` down to 0.
    """

    kind: ScheduleKind
    params: ModelParams
    tau: float

    def __post_init__(self) -> None:
        if not isinstance(self.kind, ScheduleKind):
            raise InvalidParameterError(f"kind must be a ScheduleKind, got {self.kind!r}")
        if not isinstance(self.params, ModelParams):
            raise InvalidParameterError(
                f"params must be a ModelParams, got {self.params!r}"
            )
        if not (np.isfinite(self.tau) and self.tau > 0.0):
            raise InvalidParameterError(f"tau must be finite and > 0, got {self.tau!r}")


def schedule_eval(schedule: Schedule, s):
    """Instantaneous couplings ``(gamma, chi)`` at reduced time ``s``.

    ``s`` may be a scalar or an array; any value outside [0, 1] raises
    :class:`~holeanneal.errors.OutOfRangeError`.
    """
    arr = np.asarray(s, dtype=float)
    if not np.all(np.isfinite(arr)) or np.any(arr < 0.0) or np.any(arr > 1.0):
        raise OutOfRangeError(f"s must lie in [0, 1], got {s!r}")
    p = schedule.params
    if schedule.kind is ScheduleKind.CONSTANT_GAMMA:
        gamma = np.full_like(arr, p.gamma0)
        chi = p.chi0 * arr
    else:
        gamma = p.gamma0 * (1.0 - arr)
        chi = np.full_like(arr, p.chi0)
    if arr.ndim == 0:
        return float(gamma), float(chi)
    return gamma, chi


def schedule_derivatives(schedule: Schedule) -> tuple[float, float]:
    """Constant derivatives ``(dgamma/ds, dchi/ds)`` of the linear ramps."""
    p = schedule.params
    if schedule.kind is ScheduleKind.CONSTANT_GAMMA:
        return 0.0, p.chi0
    return -p.gamma0, 0.0


def _checked(name: str, value):
    arr = np.asarray(value, dtype=float)
    if not np.all(np.isfinite(arr)) or np.any(arr < 0.0):
        raise InvalidParameterError(f"{name} must be finite and >= 0, got {value!r}")
    return arr


def _splitting(n: int, gamma, chi):
    # Distance between the two in-plane levels: sqrt((n*gamma - chi)^2 + 4*chi*gamma).
    return np.hypot(n * gamma - chi, 2.0 * np.sqrt(chi * gamma))


def _ret(scalar: bool, *values):
    if scalar:
        values = tuple(float(v) for v in values)
    return values if len(values) > 1 else values[0]


def eigenvalues(params: ModelParams, gamma, chi):
    """Energies ``(e_minus, e_plus)`` of the two levels in the search plane.

    ``e_minus <= e_plus`` always.  The remaining ``n - 2`` levels sit at
    ``+gamma``; see :func:`degenerate_eigenvalue`.  Valid for ``gamma >= 0``
    and ``chi >= 0`` (no division is involved here).
    """
    g = _checked("gamma", gamma)
    c = _checked("chi", chi)
    half_sum = 0.5 * ((params.n - 2) * g + c)
    half_split = 0.5 * _splitting(params.n, g, c)
    scalar = np.ndim(gamma) == 0 and np.ndim(chi) == 0
    return _ret(scalar, -(half_sum + half_split), -(half_sum - half_split))


def gap(params: ModelParams, gamma, chi):
    """Splitting ``e_plus - e_minus`` between the two in-plane levels.

    Computed from the closed form rather than by subtracting the two
    energies, so it keeps full relative accuracy even when the splitting is
    tiny compared with the mean energy.
    """
    g = _checked("gamma", gamma)
    c = _checked("chi", chi)
    scalar = np.ndim(gamma) == 0 and np.ndim(chi) == 0
    return _ret(scalar, _splitting(params.n, g, c))


def degenerate_eigenvalue(gamma):
    """Energy of the ``n - 2`` antisymmetric spectator levels, equal to ``+gamma``.

    A difference of two unmarked sites is annihilated by the all-to-all sum,
    so only the diagonal left behind by removing self-hopping acts on it.
    The sign is fixed by the trace: the Hamiltonian's diagonal sums to
    ``-chi``, which the two in-plane levels plus ``(n - 2) * (+gamma)``
    reproduce exactly.
    """
    g = _checked("gamma", gamma)
    return _ret(np.ndim(gamma) == 0, g)


def coefficients(params: ModelParams, gamma, chi):
    """Hole-to-rest mixing ratios ``(c_minus, c_plus)`` of the in-plane states.

    The eigenstate at ``e_minus`` is proportional to ``c_minus * |hole> +
    (sum of the other sites)``, and likewise for ``c_plus``, so
    ``c_minus = 1`` is the uniform state and large ``c_minus`` means the
    ground state has collapsed onto the hole.  The two ratios always
    satisfy ``c_minus * c_plus = -(n - 1)``.

    Undefined at ``gamma = 0`` (the formulas divide by ``gamma``), which
    raises :class:`~holeanneal.errors.SingularParameterError`.  Each ratio
    is evaluated through whichever algebraic branch avoids subtractive
    cancellation, so both stay accurate when the diagonal asymmetry of the
    block dominates the coupling.
    """
    g = _checked("gamma", gamma)
    c = _checked("chi", chi)
    if np.any(g == 0.0):
        raise SingularParameterError("coefficients are undefined at gamma = 0")
    n = float(params.n)
    a = c - (n - 2.0) * g  # diagonal asymmetry of the 2x2 block
    delta = _splitting(params.n, g, c)
    # delta > |a| strictly (delta^2 - a^2 = 4 * gamma^2 * (n - 1)), so each
    # denominator below is bounded away from zero.
    c_minus = np.where(
        a >= 0.0, (a + delta) / (2.0 * g), 2.0 * g * (n - 1.0) / (delta - a)
    )
    c_plus = np.where(
        a >= 0.0, -2.0 * g * (n - 1.0) / (a + delta), (a - delta) / (2.0 * g)
    )
    scalar = np.ndim(gamma) == 0 and np.ndim(chi) == 0
    return _ret(scalar, c_minus, c_plus)


def ground_hole_amplitude(params: ModelParams, gamma, chi):
    """Amplitude of the instantaneous ground state on the hole site.

    Its square is the localisation measure used by the profile and overlap
    helpers.  Requires ``gamma > 0``; see :func:`coefficients`.
    """
    c_minus, _ = coefficients(params, gamma, chi)
    cm = np.asarray(c_minus, dtype=float)
    amp = cm / np.sqrt(cm * cm + (params.n - 1.0))
    return _ret(np.ndim(gamma) == 0 and np.ndim(chi) == 0, amp)


def reduced_hamiltonian(params: ModelParams, gamma: float, chi: float) -> np.ndarray:
    """Symmetric 2x2 block of the Hamiltonian in the (hole, uniform-rest) basis."""
    g = float(_checked("gamma", float(gamma)))
    c = float(_checked("chi", float(chi)))
    off = -g * np.sqrt(params.n - 1.0)
    return np.array([[-c, off], [off, -(params.n - 2.0) * g]])


@dataclass(frozen=True)
class SpectralPoint:
    """Closed-form spectrum summary at one instantaneous coupling pair."""

    gamma: float
    chi: float
    e_minus: float
    e_plus: float
    gap: float
    c_minus: float
    c_plus: float
    ground_hole_amp: float


def spectral_point(params: ModelParams, gamma: float, chi: float) -> SpectralPoint:
    """Bundle every closed-form quantity at ``(gamma, chi)``; needs ``gamma > 0``."""
    e_minus, e_plus = eigenvalues(params, gamma, chi)
    c_minus, c_plus = coefficients(params, gamma, chi)
    return SpectralPoint(
        gamma=float(gamma),
        chi=float(chi),
        e_minus=e_minus,
        e_plus=e_plus,
        gap=gap(params, gamma, chi),
        c_minus=c_minus,
        c_plus=c_plus,
        ground_hole_amp=c_minus / np.sqrt(c_minus * c_minus + (params.n - 1.0)),
    )
