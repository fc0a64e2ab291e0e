"""Deterministic command-line front end.

Every subcommand writes CSV: one ``#`` manifest line carrying the tool
version and every effective parameter, a header row, then data rows.
Floats are printed with 17 significant digits and lines always end with a
bare newline, so repeated runs are byte-identical.  Exit codes: 0 on
success, 1 for invalid usage or parameters, 2 when a computation fails
(unreachable target, failed bracket, out-of-regime request).
"""

from __future__ import annotations

import argparse
import logging
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import __version__, analysis, annealing, dynamics, model
from .analysis import GapVariant
from .annealing import BisectionConfig
from .errors import (
    HoleAnnealError,
    InvalidParameterError,
    OutOfRangeError,
    RegimeError,
    SingularParameterError,
    SizeExceededError,
)
from .model import ModelParams, Schedule, ScheduleKind

logger = logging.getLogger(__name__)

_SCHEDULES = {
    "const-gamma": ScheduleKind.CONSTANT_GAMMA,
    "const-chi": ScheduleKind.CONSTANT_CHI,
}
_DEFAULT_R = {"const-gamma": 2.0, "const-chi": 0.5}
_DEFAULT_P_TARGET = {"const-gamma": 0.33, "const-chi": 0.9}
_DEFAULT_GAMMA0 = 0.5


def _fmt(value) -> str:
    if isinstance(value, (int, np.integer)) and not isinstance(value, bool):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        val = float(value)
        if val == 0.0:
            val = 0.0  # canonical zero: never print the -0 sign bit
        return format(val, ".17g")
    return str(value)


def _write_csv(out_path, manifest, header, rows, footer=None) -> None:
    lines = ["# " + " ".join(f"{key}={_fmt(val)}" for key, val in manifest)]
    lines.append(",".join(header))
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    if footer is not None:
        lines.append(footer)
    text = "\n".join(lines) + "\n"
    if out_path is None:
        sys.stdout.write(text)
    else:
        with open(out_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _manifest(command: str, **params) -> list[tuple[str, object]]:
    items: list[tuple[str, object]] = [
        ("tool", "holeanneal"),
        ("version", __version__),
        ("command", command),
    ]
    items.extend(sorted(params.items()))
    return items


class _Parser(argparse.ArgumentParser):
    """argparse exits with 2 on bad usage; this package reserves 2 for
    computational failures, so usage problems exit 1 instead."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _add_schedule_args(sp, with_n=True) -> None:
    sp.add_argument("--schedule", choices=sorted(_SCHEDULES), default="const-gamma",
                    help="which coupling is ramped (default: %(default)s)")
    if with_n:
        sp.add_argument("--n", type=int, required=True, help="number of sites")
    sp.add_argument("--r", type=float, default=None,
                    help="depth ratio chi0 / (n * gamma0); defaults to 2.0 for "
                         "const-gamma and 0.5 for const-chi")
    sp.add_argument("--gamma0", type=float, default=_DEFAULT_GAMMA0,
                    help="hopping scale (default: %(default)s)")
    sp.add_argument("--out", default=None, help="output CSV path (default: stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="holeanneal",
                     description="Annealed search of a single hole on a flat "
                                 "landscape: spectra, dynamics, and minimum "
                                 "annealing times.")
    parser.add_argument("--version", action="version",
                        version=f"holeanneal {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("spectrum", help="closed-form spectrum at one coupling pair")
    sp.add_argument("--n", type=int, required=True, help="number of sites")
    sp.add_argument("--gamma", type=float, required=True, help="hopping strength")
    sp.add_argument("--chi", type=float, required=True, help="hole depth")
    sp.add_argument("--out", default=None, help="output CSV path (default: stdout)")

    sp = sub.add_parser("evolve", help="anneal once and dump the sampled history")
    _add_schedule_args(sp)
    sp.add_argument("--tau", type=float, required=True, help="annealing time")
    sp.add_argument("--steps", type=int, default=None,
                    help="integration steps (default: resolution policy)")
    sp.add_argument("--samples", type=int, default=512,
                    help="sample points including both ends (default: %(default)s)")

    sp = sub.add_parser("tau-min", help="smallest annealing time reaching a target "
                                        "success probability")
    _add_schedule_args(sp)
    sp.add_argument("--p-target", type=float, default=None,
                    help="target success probability; defaults to 0.33 for "
                         "const-gamma and 0.9 for const-chi")
    sp.add_argument("--accuracy", type=float, default=1e-4,
                    help="bracket tolerance (default: %(default)s)")
    sp.add_argument("--steps", type=int, default=None,
                    help="integration steps per trial (default: resolution policy)")

    sp = sub.add_parser("sweep-n", help="tau-min across several system sizes")
    _add_schedule_args(sp, with_n=False)
    sp.add_argument("--n-list", required=True,
                    help="comma-separated system sizes, e.g. 100,10000,1000000")
    sp.add_argument("--p-target", type=float, default=None,
                    help="target success probability; defaults to 0.33 for "
                         "const-gamma and 0.9 for const-chi")
    sp.add_argument("--accuracy", type=float, default=1e-4,
                    help="bracket tolerance (default: %(default)s)")
    sp.add_argument("--steps", type=int, default=None,
                    help="integration steps per trial (default: resolution policy)")
    sp.add_argument("--jobs", type=int, default=1,
                    help="parallel worker processes (default: %(default)s)")

    sp = sub.add_parser("gap-scan", help="minimum splitting versus system size")
    _add_schedule_args(sp, with_n=False)
    sp.add_argument("--n-list", required=True, help="comma-separated system sizes")
    sp.add_argument("--variant", choices=[v.value for v in GapVariant],
                    default=GapVariant.STANDARD.value,
                    help="coupling normalisation (default: %(default)s)")
    sp.add_argument("--at-s", type=float, default=None,
                    help="evaluate at this fixed reduced time instead of minimising")

    sp = sub.add_parser("adiabatic-factor", help="peak drive element over squared "
                                                 "minimum splitting")
    _add_schedule_args(sp)
    sp.add_argument("--grid", type=int, default=4096,
                    help="scan resolution in s (default: %(default)s)")

    sp = sub.add_parser("oracle-compare", help="reduced evolution against the "
                                               "full-space integrator")
    _add_schedule_args(sp)
    sp.add_argument("--tau", type=float, required=True, help="annealing time")
    sp.add_argument("--steps", type=int, default=None,
                    help="integration steps (default: resolution policy)")
    sp.add_argument("--samples", type=int, default=2,
                    help="sample points (default: %(default)s)")
    sp.add_argument("--hole-site", type=int, default=0,
                    help="marked site index for the full run (default: %(default)s)")
    return parser


def _resolve(args) -> tuple[ScheduleKind, float, float | None]:
    kind = _SCHEDULES[args.schedule]
    r = _DEFAULT_R[args.schedule] if args.r is None else args.r
    p_target = getattr(args, "p_target", None)
    if p_target is None and hasattr(args, "p_target"):
        p_target = _DEFAULT_P_TARGET[args.schedule]
    return kind, r, p_target


def _parse_n_list(text: str) -> list[int]:
    try:
        values = [int(tok) for tok in text.split(",") if tok.strip()]
    except ValueError as exc:
        raise InvalidParameterError(f"bad --n-list {text!r}: {exc}") from None
    if not values:
        raise InvalidParameterError(f"--n-list {text!r} contains no sizes")
    return values


def cmd_spectrum(args) -> int:
    carrier = ModelParams(n=args.n, gamma0=1.0, r=1.0)  # spectral ops only read n
    e_minus, e_plus = model.eigenvalues(carrier, args.gamma, args.chi)
    gp = model.gap(carrier, args.gamma, args.chi)
    try:
        c_minus, c_plus = model.coefficients(carrier, args.gamma, args.chi)
        amp = c_minus / np.sqrt(c_minus * c_minus + (args.n - 1.0))
    except SingularParameterError:
        c_minus = c_plus = amp = float("nan")
    _write_csv(
        args.out,
        _manifest("spectrum", n=args.n, gamma=args.gamma, chi=args.chi),
        ["n", "gamma", "chi", "e_minus", "e_plus", "gap",
         "c_minus", "c_plus", "ground_hole_amp"],
        [(args.n, args.gamma, args.chi, e_minus, e_plus, gp, c_minus, c_plus, amp)],
    )
    return 0


def cmd_evolve(args) -> int:
    kind, r, _ = _resolve(args)
    params = ModelParams(n=args.n, gamma0=args.gamma0, r=r)
    sched = Schedule(kind, params, args.tau)
    rec = dynamics.evolve_reduced(sched, n_steps=args.steps, n_samples=args.samples)
    s = np.array([t[0] for t in rec.samples])
    g, c = model.schedule_eval(sched, s)
    rows = [
        (sj, gj, cj, pj, dj)
        for sj, gj, cj, (_, pj, dj) in zip(s, g, c, rec.samples)
    ]
    _write_csv(
        args.out,
        _manifest("evolve", schedule=args.schedule, n=args.n, r=r,
                  gamma0=args.gamma0, chi0=params.chi0, tau=args.tau,
                  n_steps=rec.n_steps, n_samples=args.samples,
                  norm_drift=rec.norm_drift),
        ["s", "gamma", "chi", "p_w", "gap"],
        rows,
    )
    return 0


def cmd_tau_min(args) -> int:
    kind, r, p_target = _resolve(args)
    params = ModelParams(n=args.n, gamma0=args.gamma0, r=r)
    config = BisectionConfig(p_target=p_target, accuracy=args.accuracy,
                             n_steps=args.steps)
    res = annealing.bisect_tau_min(params, kind, config)
    _write_csv(
        args.out,
        _manifest("tau-min", schedule=args.schedule, n=args.n, r=r,
                  gamma0=args.gamma0, p_target=p_target, accuracy=args.accuracy,
                  steps="policy" if args.steps is None else args.steps),
        ["n", "tau_min", "p_at_tau_min", "bracket_lo", "bracket_width",
         "iterations", "evaluations"],
        [(args.n, res.tau, res.p_hi, res.tau_lo, res.tau_hi - res.tau_lo,
          res.iterations, res.evaluations)],
    )
    return 0


def _sweep_worker(task) -> tuple[int, float, float, int, int]:
    n, schedule, r, gamma0, p_target, accuracy, steps = task
    params = ModelParams(n=n, gamma0=gamma0, r=r)
    config = BisectionConfig(p_target=p_target, accuracy=accuracy, n_steps=steps)
    res = annealing.bisect_tau_min(params, _SCHEDULES[schedule], config)
    return n, res.tau, res.p_hi, res.iterations, res.evaluations


def cmd_sweep_n(args) -> int:
    kind, r, p_target = _resolve(args)
    sizes = _parse_n_list(args.n_list)
    jobs = max(1, args.jobs)
    tasks = [(n, args.schedule, r, args.gamma0, p_target, args.accuracy, args.steps)
             for n in sizes]
    if jobs == 1:
        results = [_sweep_worker(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_sweep_worker, tasks))
    results.sort(key=lambda row: row[0])
    _write_csv(
        args.out,
        _manifest("sweep-n", schedule=args.schedule,
                  n_list=",".join(str(n) for n in sizes), r=r,
                  gamma0=args.gamma0, p_target=p_target, accuracy=args.accuracy,
                  steps="policy" if args.steps is None else args.steps,
                  jobs=jobs),
        ["n", "tau_min", "p_at_tau_min", "iterations", "evaluations"],
        results,
    )
    return 0


def cmd_gap_scan(args) -> int:
    kind, r, _ = _resolve(args)
    sizes = _parse_n_list(args.n_list)
    report = analysis.gap_scaling(args.gamma0, r, kind, sizes,
                                  variant=GapVariant(args.variant), at_s=args.at_s)
    _write_csv(
        args.out,
        _manifest("gap-scan", schedule=args.schedule,
                  n_list=",".join(str(n) for n in report.n_values), r=r,
                  gamma0=args.gamma0, variant=report.variant.value,
                  at_s="min" if args.at_s is None else args.at_s),
        ["n", "min_gap"],
        list(zip(report.n_values, report.min_gaps)),
        footer=f"# fitted_exponent={_fmt(report.fitted_exponent)}",
    )
    return 0


def cmd_adiabatic_factor(args) -> int:
    kind, r, _ = _resolve(args)
    params = ModelParams(n=args.n, gamma0=args.gamma0, r=r)
    sched = Schedule(kind, params, 1.0)  # tau does not enter the factor
    af = annealing.adiabatic_factor_numeric(sched, n_grid=args.grid)
    try:
        closed = annealing.adiabatic_factor_closed_form(params, kind)
    except RegimeError:
        closed = float("nan")
    _write_csv(
        args.out,
        _manifest("adiabatic-factor", schedule=args.schedule, n=args.n, r=r,
                  gamma0=args.gamma0, grid=args.grid),
        ["n", "numerator", "min_gap_sq", "alpha", "s_at_max", "s_at_min_gap",
         "alpha_closed_form"],
        [(args.n, af.numerator, af.min_gap_sq, af.alpha, af.s_at_max,
          af.s_at_min_gap, closed)],
    )
    return 0


def cmd_oracle_compare(args) -> int:
    kind, r, _ = _resolve(args)
    params = ModelParams(n=args.n, gamma0=args.gamma0, r=r)
    sched = Schedule(kind, params, args.tau)
    rec_red = dynamics.evolve_reduced(sched, n_steps=args.steps,
                                      n_samples=args.samples)
    rec_full = dynamics.evolve_full(params, args.hole_site, sched,
                                    n_steps=args.steps, n_samples=args.samples)
    _write_csv(
        args.out,
        _manifest("oracle-compare", schedule=args.schedule, n=args.n, r=r,
                  gamma0=args.gamma0, tau=args.tau, n_steps=rec_full.n_steps,
                  n_samples=args.samples, hole_site=args.hole_site),
        ["n", "tau", "p_reduced", "p_full", "abs_diff",
         "norm_drift_reduced", "norm_drift_full"],
        [(args.n, args.tau, rec_red.final_p_w, rec_full.final_p_w,
          abs(rec_red.final_p_w - rec_full.final_p_w),
          rec_red.norm_drift, rec_full.norm_drift)],
    )
    return 0


_COMMANDS = {
    "spectrum": cmd_spectrum,
    "evolve": cmd_evolve,
    "tau-min": cmd_tau_min,
    "sweep-n": cmd_sweep_n,
    "gap-scan": cmd_gap_scan,
    "adiabatic-factor": cmd_adiabatic_factor,
    "oracle-compare": cmd_oracle_compare,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (InvalidParameterError, OutOfRangeError, SingularParameterError,
            SizeExceededError) as exc:
        print(f"holeanneal: invalid request: {exc}", file=sys.stderr)
        return 1
    except HoleAnnealError as exc:
        print(f"holeanneal: computation failed: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
