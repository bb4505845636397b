"""Command-line front end.

Subcommands write CSV (header row, LF endings, 12 significant digits) or a JSON
object with ``config``, ``results`` and ``checks`` keys.  Exit status is 0 on
success, 1 when a check fails and 2 for usage or configuration errors.

Oscillator positions and momenta are given in the scaled units
``Q = q/sigma0`` and ``P = 2 sigma0 p / hbar``; internally ``hbar = sigma0 = 1``
and times are in ``1/lam``.
"""
import argparse
import csv
import io
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import ck, grid, numerics, pointer, realism, states
from .errors import ConvergenceError, DomainError, LeakageError

__all__ = ["RunConfig", "main", "build_parser", "load_config"]

FIG1_SPECIAL = 1.0 / np.sqrt(2.0)
DEFAULT_ZETAS = "0.2,0.5773502691896258,0.9"


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    """Resolved settings of one invocation."""

    command: str
    values: dict = field(default_factory=dict)

    def __getattr__(self, name):
        try:
            return self.__dict__["values"][name]
        except KeyError:
            raise AttributeError(name) from None


# ---------------------------------------------------------------- output


def _fmt(v):
    if isinstance(v, (bool, np.bool_)):
        return "1" if v else "0"
    if isinstance(v, str):
        return v
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return "%.12g" % float(v)


def _jsonable(v):
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        v = float(v)
        return None if not np.isfinite(v) else float(_fmt(v))
    return v


# execution settings that never change results; kept out of the echoed config
# so outputs stay byte-identical across worker counts and destinations
_UNECHOED = ("out", "workers")


def echoed_config(cfg):
    return {"command": cfg.command,
            **{k: v for k, v in cfg.values.items() if k not in _UNECHOED}}


def render(cfg, header, rows, checks=()):
    if cfg.format == "json":
        doc = {
            "config": echoed_config(cfg),
            "results": [dict(zip(header, r)) for r in rows],
            "checks": list(checks),
        }
        return json.dumps(_jsonable(doc), indent=2, sort_keys=True) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([_fmt(v) for v in r])
    return buf.getvalue()


def emit(cfg, text):
    if cfg.out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(cfg.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


# ---------------------------------------------------------------- parameters


def ck_params(cfg):
    """Oscillator parameters from ``epsilon`` or ``zeta`` plus ``tau_E``."""
    if not cfg.lam > 0:
        raise UsageError(f"--lam must be positive (no factorized solution at lam={cfg.lam})")
    if not cfg.tau_e > 0:
        raise UsageError("--tau-e must be positive")
    eps, zeta = cfg.epsilon, cfg.zeta
    if zeta is not None:
        if not 0 <= zeta < 1:
            raise UsageError("--zeta must lie in [0, 1); use --epsilon for underdamped motion")
        from_zeta = cfg.tau_e * (1.0 - zeta**2) / 2.0
        if eps is not None and abs(eps - from_zeta) > 1e-9 * max(1.0, abs(eps)):
            raise UsageError(f"--epsilon {eps} conflicts with --zeta {zeta} (implies {from_zeta})")
        eps = from_zeta
    if eps is None:
        eps = 1.0
    if eps < 0:
        raise UsageError("--epsilon must be non-negative")
    return ck.CKParams.from_dimensionless(eps, cfg.tau_e, lam=cfg.lam)


def _phys_initial(cfg):
    # scaled Q0, P0 -> q0, p0 with sigma0 = hbar = 1
    return cfg.q0, 0.5 * cfg.p0


def _tau_grid(tau_max, steps):
    if not tau_max > 0 or steps < 1:
        raise UsageError("need --tau-max > 0 and --steps >= 1")
    return np.linspace(0.0, tau_max, steps + 1)


def _slope(x, y):
    return float(np.polyfit(x, y, 1)[0])


# ---------------------------------------------------------------- commands


def cmd_fig1(cfg):
    lo, hi, step = cfg.dq_min, cfg.dq_max, cfg.dq_step
    if not (0 <= lo <= hi and step > 0):
        raise UsageError("need 0 <= --dq-min <= --dq-max and --dq-step > 0")
    n = int(np.floor((hi - lo) / step + 1e-9))
    values = [round(lo + i * step, 12) for i in range(n + 1)]
    if lo <= FIG1_SPECIAL <= hi and FIG1_SPECIAL not in values:
        values.append(FIG1_SPECIAL)
    rows = [(d, states.eta(d), states.eta_approx(d)) for d in sorted(values)]
    return render(cfg, ["Delta_q", "eta_exact", "eta_approx"], rows), 0


def cmd_fig2(cfg):
    params = ck_params(cfg)
    if cfg.panel not in ("a", "b"):
        raise UsageError(f"unknown panel {cfg.panel!r}")
    panel_a = cfg.panel == "a"
    tau_max = cfg.tau_max if cfg.tau_max is not None else (
        1.5 * params.tau_E if panel_a else params.tau_E / 3.0)
    q0 = cfg.q0 if cfg.q0 is not None else (-2.0 if panel_a else 0.0)
    p0 = cfg.p0 if cfg.p0 is not None else (20.0 if panel_a else 0.0)
    half = cfg.extent if cfg.extent is not None else (5.0 if panel_a else 13.0)
    if cfg.points < 2:
        raise UsageError("--points must be at least 2")
    coord = np.linspace(-half, half, cfg.points)
    rows = []
    for tau in _tau_grid(tau_max, cfg.steps):
        t = tau / params.lam
        if panel_a:
            dens = params.sigma0 * ck.density_q(params, coord * params.sigma0, t, q0, 0.5 * p0)
        else:
            # density per unit of P = 2 sigma0 p / hbar
            scale = params.hbar / (2.0 * params.sigma0)
            dens = scale * ck.density_p(params, coord * scale, t, q0, 0.5 * p0)
        rows.extend((c, tau, d) for c, d in zip(coord, dens))
    name = "Q" if panel_a else "P"
    return render(cfg, [name, "tau", "density"], rows), 0


def cmd_irreality(cfg):
    g = grid.make_grid(1.0, cfg.xi)
    width = cfg.width
    if cfg.state == "uniform":
        psi = states.uniform_state(g, width)
    elif cfg.state == "gaussian":
        psi = states.gaussian_state(g, states.GaussianSpec(width))
    else:
        raise UsageError(f"unknown state class {cfg.state!r}")
    if cfg.basis == "position":
        basis, w = realism.position_basis(g), width
    elif cfg.basis == "momentum":
        basis, w = realism.momentum_basis(g), cfg.xi / (4.0 * np.pi * width)
    else:
        raise UsageError(f"unknown basis {cfg.basis!r}")
    value = realism.irreality(psi, basis)
    if cfg.state == "uniform":
        closed = float(np.log(width)) if cfg.basis == "position" else None
        valid = closed is not None
    else:
        closed = float(np.log(np.sqrt(2.0 * np.pi * np.e) * w))
        valid = bool(w >= 1.0)
    diff = None if closed is None else value - closed
    result = {"state": cfg.state, "basis": cfg.basis, "irreality": value,
              "closed_form": closed, "difference": diff, "validity": valid}
    header = list(result)
    if cfg.format == "csv":
        row = [("" if v is None else v) for v in result.values()]
        return render(cfg, header, [row]), 0
    checks = [{"name": "closed_form_validity", "passed": valid}]
    return render(cfg, header, [list(result.values())], checks), 0


CK_HEADER = [
    "tau", "c_plus", "c_zero", "c_minus", "T", "alpha", "beta", "f", "chi",
    "delta_q", "delta_p", "delta_v", "mean_q", "mean_v",
    "irreality_q", "irreality_p", "irreality_v",
    "irreality_q_discrete", "irreality_v_discrete",
    "valid_q", "valid_p", "valid_v",
    "d_irreality_q", "d_irreality_p", "d_irreality_sum", "uncertainty",
]


def _oracle_widths(params, t, q0, p0, dt):
    g = ck.suggest_grid(params, t[-1], q0, p0)
    c = np.exp(-((g.q - q0) ** 2) / (4.0 * params.sigma0**2) + 1j * p0 * g.q / params.hbar)
    psi = states.PureState.from_unnormalized(g, c)
    out, prev = [], 0.0
    for ti in t:
        psi = ck.tdse_propagate(g, params, psi, ti, dt, t0=prev)
        prev = ti
        m = states.moments(psi)
        out.append((m.sd_q, m.sd_p))
    return out


def cmd_ck(cfg):
    params = ck_params(cfg)
    q0, p0 = _phys_initial(cfg)
    taus = _tau_grid(cfg.tau_max, cfg.steps)
    t = taus / params.lam
    snaps = ck.irreality_series(params, cfg.delta_q, cfg.delta_p, t, q0, p0)
    dq, dp = ck.irreality_variation(params, t)
    header = list(CK_HEADER)
    rows = []
    for s, a, b in zip(snaps, dq, dp):
        rows.append([
            s.tau, s.c_plus, s.c_zero, s.c_minus, s.T, s.alpha, s.beta, s.f, s.chi,
            s.delta_q, s.delta_p, s.delta_v, s.mean_q, s.mean_v,
            s.irreality_q, s.irreality_p, s.irreality_v,
            s.irreality_q_discrete, s.irreality_v_discrete,
            s.valid_q, s.valid_p, s.valid_v,
            a, b, a + b, s.delta_q * s.delta_p / (params.hbar / 2.0),
        ])
    if cfg.with_oracle:
        try:
            oracle = _oracle_widths(params, t, q0, p0, cfg.dt / params.lam)
        except (DomainError, LeakageError) as exc:
            raise UsageError(f"oracle cannot follow the packet: {exc}; shorten --tau-max")
        header += ["tdse_delta_q", "tdse_delta_p"]
        for r, o in zip(rows, oracle):
            r.extend(o)
    return render(cfg, header, rows), 0


def cmd_pointer(cfg):
    rel = ck_params(cfg)
    if not cfg.mass_ratio > 0:
        raise UsageError("--mass-ratio must be positive")
    sigma_cm = cfg.sigma_cm
    if sigma_cm is None:
        sigma_cm = pointer.product_state_sigma_cm(rel, cfg.mass_ratio)
    pp = pointer.PointerParams.from_relative(rel, cfg.mass_ratio, sigma_cm)
    taus = _tau_grid(cfg.tau_max, cfg.steps)
    t = taus / rel.lam
    g = pointer.gamma(pp, t)
    pur = pointer.reduced_purity(pp, t)
    header = ["t", "tau", "gamma", "purity", "entanglement"]
    rows = [[a, b, c, d, 1.0 - d] for a, b, c, d in zip(t, taus, g, pur)]
    if cfg.with_oracle:
        header.append("oracle_purity")
        for r, ti in zip(rows, t):
            try:
                r.append(pointer.purity_oracle(pp, ti))
            except ConvergenceError:
                r.append(np.nan)
    return render(cfg, header, rows), 0


def _sweep_point(args):
    zeta, tau_E = args
    p = ck.CKParams.from_zeta(zeta, tau_E)
    late = np.linspace(10.0, 20.0, 101)
    early = np.linspace(tau_E, 2.0 * tau_E, 51)
    dq, dp = ck.irreality_variation(p, late)
    slope = _slope(late, dq + dp)
    eq, ep = ck.irreality_variation(p, early)
    rate = _slope(early, ep)
    w = ck.widths(p, np.linspace(0.0, 20.0, 401))
    unc = float(np.min(w.delta_q * w.delta_p) / (p.hbar / 2.0))
    return [zeta, tau_E, p.epsilon, p.regime, slope, slope / (2.0 * zeta) if zeta else np.nan,
            rate, unc]


def _floats(text, flag):
    try:
        vals = [float(x) for x in str(text).split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"{flag} expects comma-separated numbers") from None
    if not vals:
        raise UsageError(f"{flag} is empty")
    return vals


def cmd_sweep(cfg):
    if cfg.epsilon is not None or cfg.zeta is not None:
        raise UsageError("--epsilon/--zeta conflict with the swept axes; use --zeta-values")
    if cfg.workers < 1:
        raise UsageError("--workers must be at least 1")
    zetas = _floats(cfg.zeta_values, "--zeta-values")
    tes = _floats(cfg.tau_e_values, "--tau-e-values")
    if any(not 0 <= z < 1 for z in zetas) or any(not te > 0 for te in tes):
        raise UsageError("zeta values must lie in [0, 1) and tau_E values be positive")
    points = [(z, te) for z in zetas for te in tes]
    if cfg.workers == 1:
        rows = [_sweep_point(pt) for pt in points]
    else:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            rows = list(pool.map(_sweep_point, points))
    header = ["zeta", "tau_E", "epsilon", "regime", "irreality_sum_slope", "slope_over_2zeta",
              "production_rate_tauE", "min_uncertainty"]
    return render(cfg, header, rows), 0


# ---------------------------------------------------------------- invariant suite


def _checks(seed):
    """Named invariant checks as ``(name, measured, tolerance)``; pass iff measured <= tol."""
    rng = np.random.default_rng(seed)
    out = []

    g = grid.make_grid(1.0, 11)
    eye = np.eye(g.xi)
    err = 0.0
    for proj in (grid.projector_q, grid.projector_p):
        ps = [proj(g, k) for k in g.indices]
        err = max(err, np.max(np.abs(sum(ps) - eye)))
        for a in (0, 3):
            for b in (0, 5):
                want = ps[a] if a == b else 0.0
                err = max(err, np.max(np.abs(ps[a] @ ps[b] - want)))
    out.append(("projector_algebra", float(err), 1e-12))

    err = 0.0
    for _ in range(10):
        rho = realism.random_density_matrix(5, rng)
        basis = realism.ObservableBasis(realism.random_unitary(5, rng))
        once = realism.dephase(rho, basis)
        err = max(err, np.max(np.abs(realism.dephase(once, basis) - once)))
    out.append(("dephase_idempotent", float(err), 1e-12))

    slacks = []
    for da, db in ((2, 2), (2, 3), (3, 3)):
        for _ in range(20):
            rho = realism.random_bipartite_state(da, db, rng)
            b1 = realism.ObservableBasis(realism.random_unitary(da, rng))
            slacks.append(realism.uncertainty_slack(rho, b1, realism.unbiased_partner(b1)))
    out.append(("uncertainty_slack_unbiased", float(-min(slacks)), 1e-9))

    theta = max(abs(numerics.n_approx(d) / numerics.theta3_gaussian_norm(d) - 1.0)
                for d in np.arange(1, 101) * 0.05)
    out.append(("theta_approximation", float(theta), 2.71e-4))
    out.append(("eta_at_inverse_sqrt2", abs(states.eta(FIG1_SPECIAL) - 0.9989), 5e-4))

    p = ck.CKParams.from_dimensionless(1.0, 3.0)
    h = 1e-3
    tau = np.arange(0.0, 10.0 + h / 2, h)
    u = ck.ck_coefficients(p, tau).u
    res = (u[2:] - 2 * u[1:-1] + u[:-2]) / h**2 + 2 * (u[2:] - u[:-2]) / (2 * h) \
        + p.omega**2 * u[1:-1]
    out.append(("u_ode_residual", float(np.max(np.abs(res))), 1e-6))

    q0, p0 = -2.0, 10.0
    cl = ck.classical_trajectory(p, q0, p0, tau)
    cen = ck.centroid(p, q0, p0, tau)
    out.append(("ehrenfest_identity", float(np.max(np.abs(cen.mean_q - cl.q)) / abs(q0)), 1e-6))

    co = ck.ck_coefficients(p, tau[1:])
    mu_t = p.m * np.exp(2.0 * tau[1:])
    rel = np.abs(co.c_plus - mu_t * ck.u_derivative(p, tau[1:]) / co.u) / np.abs(co.c_plus)
    out.append(("c_plus_relation", float(np.max(rel)), 1e-8))

    w = ck.widths(p, np.linspace(0.0, 20.0, 401))
    out.append(("heisenberg", float(max(0.0, 1.0 - np.min(w.delta_q * w.delta_p) / 0.5)), 1e-9))

    tf = 0.5
    g = ck.suggest_grid(p, tf)
    psi = states.PureState.from_unnormalized(g, np.exp(-(g.q**2) / 4.0))
    end = ck.tdse_propagate(g, p, psi, tf, 2e-3)
    m = states.moments(end)
    wa = ck.widths(p, tf)
    err = max(abs(m.sd_q / wa.delta_q - 1.0), abs(m.sd_p / wa.delta_p - 1.0))
    out.append(("split_step_oracle", float(err), 5e-3))
    out.append(("split_step_norm", float(abs(np.vdot(end.coeffs, end.coeffs).real - 1.0)), 1e-10))

    err = 0.0
    for ratio in (0.5, 3.0):
        pp = pointer.PointerParams.from_relative(p, ratio, 1.5)
        for tt in (0.0, 1.0):
            err = max(err, abs(pointer.purity_oracle(pp, tt) - float(pointer.reduced_purity(pp, tt))))
    out.append(("purity_oracle", float(err), 1e-6))
    return out, slacks


def cmd_check(cfg):
    if not cfg.tolerance_scale >= 0:
        raise UsageError("--tolerance-scale must be non-negative")
    results, slacks = _checks(cfg.seed)
    checks = []
    for name, measured, tol in results:
        limit = tol * cfg.tolerance_scale
        checks.append({"name": name, "measured": measured, "tolerance": limit,
                       "passed": bool(measured <= limit)})
    failed = [c["name"] for c in checks if not c["passed"]]
    doc = {
        "config": echoed_config(cfg),
        "results": {"passed": not failed, "failed": failed, "slacks": slacks},
        "checks": checks,
    }
    text = json.dumps(_jsonable(doc), indent=2, sort_keys=True) + "\n"
    return text, 1 if failed else 0


COMMANDS = {
    "fig1": cmd_fig1,
    "fig2": cmd_fig2,
    "irreality": cmd_irreality,
    "ck": cmd_ck,
    "pointer": cmd_pointer,
    "check": cmd_check,
    "sweep": cmd_sweep,
}


# ---------------------------------------------------------------- parsing


def _common(p, fmt="csv"):
    p.add_argument("--format", choices=["csv", "json"], default=fmt)
    p.add_argument("--out", default=None, help="output path (default: stdout)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)


def _oscillator(p, tau_max=20.0, steps=200):
    p.add_argument("--epsilon", type=float, default=None, help="k sigma0^2 / (hbar lam)")
    p.add_argument("--zeta", type=float, default=None, help="damping discriminant in [0, 1)")
    p.add_argument("--tau-e", type=float, default=3.0, help="lam t_E")
    p.add_argument("--lam", type=float, default=1.0)
    p.add_argument("--q0", type=float, default=0.0, help="initial q / sigma0")
    p.add_argument("--p0", type=float, default=0.0, help="initial 2 sigma0 p / hbar")
    p.add_argument("--tau-max", type=float, default=tau_max)
    p.add_argument("--steps", type=int, default=steps)
    p.add_argument("--with-oracle", action="store_true")


def build_parser():
    parser = argparse.ArgumentParser(prog="cvrealism", description=__doc__.splitlines()[0])
    parser.add_argument("--config", help="flat key = value file; flags override it")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fig1", help="discrete uncertainty product eta vs width")
    _common(p)
    p.add_argument("--dq-min", type=float, default=0.05)
    p.add_argument("--dq-max", type=float, default=2.0)
    p.add_argument("--dq-step", type=float, default=0.01)

    p = sub.add_parser("fig2", help="density grid of the damped packet")
    _common(p)
    _oscillator(p, tau_max=None, steps=45)
    p.set_defaults(q0=None, p0=None)
    p.add_argument("--panel", default="a", help="a: position, b: momentum")
    p.add_argument("--points", type=int, default=201)
    p.add_argument("--extent", type=float, default=None, help="half-width of the coordinate axis")

    p = sub.add_parser("irreality", help="irreality of a uniform or Gaussian grid state")
    _common(p, fmt="json")
    p.add_argument("--state", default="gaussian")
    p.add_argument("--basis", default="position")
    p.add_argument("--xi", type=int, default=201)
    p.add_argument("--width", type=float, default=4.0, help="Delta_q in grid cells")

    p = sub.add_parser("ck", help="time series of the damped packet")
    _common(p)
    _oscillator(p)
    p.add_argument("--delta-q", type=float, default=0.01, help="position resolution")
    p.add_argument("--delta-p", type=float, default=0.01, help="momentum resolution")
    p.add_argument("--dt", type=float, default=1e-3, help="oracle step in units of 1/lam")

    p = sub.add_parser("pointer", help="purity and entanglement of particle plus pointer")
    _common(p)
    _oscillator(p, tau_max=40.0, steps=80)
    p.add_argument("--mass-ratio", type=float, default=1.0, help="m_pointer / m")
    p.add_argument("--sigma-cm", type=float, default=None,
                   help="centre-of-mass width (default: product-state width)")

    p = sub.add_parser("check", help="run the invariant suite")
    _common(p, fmt="json")
    p.add_argument("--tolerance-scale", type=float, default=1.0)

    p = sub.add_parser("sweep", help="irreality production over a zeta x tau_E grid")
    _common(p)
    p.add_argument("--epsilon", type=float, default=None)
    p.add_argument("--zeta", type=float, default=None)
    p.add_argument("--zeta-values", default=DEFAULT_ZETAS)
    p.add_argument("--tau-e-values", default="1,3")
    return parser


def load_config(path):
    """Read ``key = value`` lines (``#`` comments) into a dict of strings."""
    out = {}
    with open(path, encoding="utf-8") as fh:
        for n, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{n}: expected key = value")
            key, value = (s.strip() for s in line.split("=", 1))
            out[key.replace("_", "-")] = value
    return out


def _config_argv(values):
    argv = []
    for key, value in values.items():
        if key == "with-oracle":
            if value.lower() in ("1", "true", "yes", "on"):
                argv.append("--with-oracle")
        else:
            argv += [f"--{key}", value]
    return argv


def parse(argv):
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, rest = pre.parse_known_args(argv)
    parser = build_parser()
    if known.config:
        values = load_config(known.config)
        cmd = next((i for i, a in enumerate(rest) if not a.startswith("-")), None)
        if cmd is not None:
            # file values go first so explicit flags win
            rest = rest[: cmd + 1] + _config_argv(values) + rest[cmd + 1:]
    ns = parser.parse_args(rest)
    values = {k: v for k, v in sorted(vars(ns).items()) if k not in ("command", "config")}
    return RunConfig(ns.command, values)


def main(argv=None):
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        cfg = parse(argv)
        text, code = COMMANDS[cfg.command](cfg)
    except UsageError as exc:
        print(f"cvrealism: error: {exc}", file=sys.stderr)
        return 2
    except (DomainError, LeakageError, ValueError, OSError) as exc:
        print(f"cvrealism: error: {exc}", file=sys.stderr)
        return 2
    emit(cfg, text)
    return code


if __name__ == "__main__":
    sys.exit(main())
