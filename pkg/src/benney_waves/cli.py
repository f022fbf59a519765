"""Command-line front end: ``benney-waves <command> [flags]``.

Exit codes: 0 success, 2 configuration or domain error, 3 non-convergence,
4 numerical failure.
"""

from __future__ import annotations

import argparse
import logging
import math
import sys

import numpy as np

from . import io
from .core import Grid
from .errors import ConfigurationError, DomainError, NumericalFailure, WavesError
from .evolution import SimConfig, embed, linstab_run, simulate_full
from .functionals import ConstraintSpec, ModelParams, el_residual
from .profiles import StandingWaveSpec, check_profile, standing_wave
from .variational import MinimizeConfig, WaveProfile, minimize, sweep, wave_from_minimizer

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NOT_CONVERGED = 3
EXIT_NUMERICAL = 4

log = logging.getLogger("benney_waves")


def _model_flags(ap: argparse.ArgumentParser, need_p: bool = True, with_w: bool = True) -> None:
    ap.add_argument("--p", type=float, required=need_p, help="nonlinearity exponent (required)")
    ap.add_argument("--a", type=float, default=1.0, help="short-wave self interaction (default 1)")
    ap.add_argument("--gamma", type=float, default=1.0, help="cubic flux coefficient (default 1)")
    if with_w:
        ap.add_argument("--w", type=float, default=1.0, help="frequency (default 1)")


def _grid_flags(ap, length: float, n: int) -> None:
    ap.add_argument("--grid-l", type=float, default=length, help=f"domain length (default {length:g})")
    ap.add_argument("--grid-n", type=int, default=n, help=f"grid points, power of two (default {n})")


def _minimize_flags(ap) -> None:
    ap.add_argument("--max-iters", type=int, default=20000)
    ap.add_argument("--tol", type=float, default=None,
                    help="gradient tolerance (default 1e-8*max(1,|tau|))")
    ap.add_argument("--seed", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="benney-waves",
                                 description="Solitary and standing waves of the cubic-flux Benney system")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("standing", help="standing wave by quadrature")
    _model_flags(s)
    _grid_flags(s, 80.0, 4096)
    s.add_argument("--tail-floor", type=float, default=None)
    s.add_argument("--out", required=True, help="profile document (JSON)")

    m = sub.add_parser("minimize", help="constrained minimiser rescaled to a travelling wave")
    m.add_argument("--mu", type=float, required=True)
    m.add_argument("--alpha", type=float, required=True)
    _model_flags(m, with_w=False)
    _grid_flags(m, 40.0, 1024)
    _minimize_flags(m)
    m.add_argument("--out", required=True)

    w = sub.add_parser("sweep", help="minimise over log-spaced mu and fit scaling slopes")
    w.add_argument("--mu-from", type=float, required=True)
    w.add_argument("--mu-to", type=float, required=True)
    w.add_argument("--mu-points", type=int, required=True)
    w.add_argument("--alpha", type=float, required=True)
    _model_flags(w, with_w=False)
    _grid_flags(w, 40.0, 1024)
    _minimize_flags(w)
    w.add_argument("--out", required=True, help="CSV file")

    r = sub.add_parser("simulate", help="propagate a profile with the full system")
    r.add_argument("--profile", required=True)
    r.add_argument("--t-end", type=float, required=True)
    r.add_argument("--dt", type=float, default=1e-2, help="upper bound; CFL may reduce it")
    r.add_argument("--cfl", type=float, default=0.5)
    r.add_argument("--order", type=int, choices=(1, 2), default=2)
    r.add_argument("--epsilon", type=float, default=1e-6)
    r.add_argument("--record-every", type=int, default=10)
    r.add_argument("--out-trace", required=True)
    r.add_argument("--out-final", default=None)

    k = sub.add_parser("linstab", help="integrate the linearised system about a profile")
    k.add_argument("--profile", required=True)
    k.add_argument("--t-end", type=float, required=True)
    k.add_argument("--dt", type=float, default=1e-2, help="upper bound; stability may reduce it")
    k.add_argument("--cfl", type=float, default=0.5)
    k.add_argument("--epsilon", type=float, default=1e-6)
    k.add_argument("--delta", type=float, default=1e-2)
    k.add_argument("--seed", type=int, default=0)
    k.add_argument("--record-every", type=int, default=10)
    k.add_argument("--out-trace", required=True)
    return ap


def _kv(**items) -> None:
    for key, val in items.items():
        if isinstance(val, (bool, np.bool_)):
            val = "true" if val else "false"
        elif isinstance(val, (float, np.floating)):
            val = repr(float(val))
        print(f"{key}={val}")


def _grid(args) -> Grid:
    return Grid.centered(args.grid_l, args.grid_n)


def cmd_standing(args) -> int:
    params = ModelParams(p=args.p, a=args.a, gamma=args.gamma, w=args.w)
    spec = StandingWaveSpec(params, _grid(args), args.tail_floor)
    profile, rep = standing_wave(spec)
    io.write_profile(io.ensure_parent(args.out), io.ProfileDocument.from_profile(profile))
    r1, r2, r3 = check_profile(profile)
    x0 = "inf" if math.isinf(rep.x0) else repr(rep.x0)
    print(f"phi0={rep.phi0!r} x0={x0} first_integral_residual={rep.first_integral_residual:.3e} "
          f"residuals={r1:.3e},{r2:.3e},{r3:.3e}")
    return EXIT_OK


def _min_config(args) -> MinimizeConfig:
    return MinimizeConfig(max_iters=args.max_iters, grad_tol=args.tol, seed=args.seed)


def cmd_minimize(args) -> int:
    params = ModelParams(p=args.p, a=args.a, gamma=args.gamma)
    spec = ConstraintSpec(args.mu, args.alpha)
    res = minimize(params, spec, _grid(args), _min_config(args))
    r1, r2 = el_residual(res.pair, res.lam, params, spec)
    meta = dict(converged=res.converged, tau=res.tau_value, iterations=res.iterations)
    try:
        wave = wave_from_minimizer(res, params, spec)
    except DomainError:
        if res.converged:
            raise
        # No dilation exists for lambda >= 0; keep the raw pair so the run is inspectable.
        wave = WaveProfile(res.pair.grid, res.pair.u, res.pair.v, c=0.0, cstar=0.0, w=0.0,
                           params=params, lam=res.lam, mu=spec.mu, d=float(spec.d),
                           provenance="minimize")
        meta["undilated"] = True
    io.write_profile(io.ensure_parent(args.out), io.ProfileDocument.from_profile(wave, **meta))
    _kv(mu=spec.mu, alpha=spec.alpha, d=float(spec.d), **{"lambda": res.lam},
        lambda_rayleigh=res.lam_rayleigh, c=wave.c, cstar=wave.cstar, w=wave.w,
        tau=res.tau_value, el_residual_1=r1, el_residual_2=r2,
        iterations=res.iterations, grad_norm=res.grad_norm, converged=res.converged)
    return EXIT_OK if res.converged else EXIT_NOT_CONVERGED


def cmd_sweep(args) -> int:
    if args.mu_points < 2 or not (0 < args.mu_from < args.mu_to):
        raise ConfigurationError("need 0 < mu-from < mu-to and mu-points >= 2")
    params = ModelParams(p=args.p, a=args.a, gamma=args.gamma)
    mus = np.geomspace(args.mu_from, args.mu_to, args.mu_points)
    report = sweep(params, args.alpha, mus, _grid(args), _min_config(args))
    io.write_sweep(io.ensure_parent(args.out), report.records)
    for name, fit in (("slope_log_c_vs_log_mu", report.speed_fit),
                      ("slope_log_neg_lambda_vs_log_mu_over_d", report.multiplier_fit)):
        if fit is None:
            print(f"{name}=nan (fewer than two converged rows)")
        else:
            print(f"{name}={fit.slope!r} ci95=[{fit.ci95[0]!r},{fit.ci95[1]!r}]")
    failed = sum(not r.converged for r in report.records)
    print(f"rows={len(report.records)} failed={failed}")
    return EXIT_OK


def cmd_simulate(args) -> int:
    doc = io.read_profile(args.profile)
    profile = doc.to_profile()
    grid = profile.grid
    cfg = SimConfig(dt=args.dt, t_end=args.t_end, cfl=args.cfl, scheme_order=args.order,
                    epsilon=args.epsilon, record_every=args.record_every)
    state = embed(profile, grid)
    final, trace = simulate_full(state, profile.params, cfg, reference=profile)
    io.write_sim_trace(io.ensure_parent(args.out_trace), trace)
    if args.out_final:
        io.write_state(io.ensure_parent(args.out_final), final)
    m0 = trace.mass[0] if trace.mass[0] != 0 else 1.0
    _kv(t_end=final.t, mass_drift=abs(trace.mass[-1] - trace.mass[0]) / m0,
        v_total_drift=abs(trace.v_total[-1] - trace.v_total[0]),
        shape_error=float(trace.shape_error[-1]), lag_estimate=float(trace.lag_estimate[-1]))
    return EXIT_OK


def cmd_linstab(args) -> int:
    doc = io.read_profile(args.profile)
    profile = doc.to_profile()
    cfg = SimConfig(dt=args.dt, t_end=args.t_end, cfl=args.cfl, epsilon=args.epsilon,
                    record_every=args.record_every)
    trace = linstab_run(profile, profile.params, cfg, args.seed, args.delta)
    io.write_lin_trace(io.ensure_parent(args.out_trace), trace)
    _kv(growth_factor=trace.growth_factor, rate_K=trace.rate, dt=float(trace.meta["dt"]),
        steps=int(trace.meta["steps"]))
    return EXIT_OK


COMMANDS = {
    "standing": cmd_standing,
    "minimize": cmd_minimize,
    "sweep": cmd_sweep,
    "simulate": cmd_simulate,
    "linstab": cmd_linstab,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except (ConfigurationError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalFailure as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except WavesError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
