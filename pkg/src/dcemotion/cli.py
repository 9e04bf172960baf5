"""Command-line interface.

Usage::

    dcemotion COMMAND [--config FILE] [--out DIR] [flags] [--section.key VALUE ...]

Commands: scatter, spectrum, forces, trajectory, validate, sweep, plot.

Configuration is a flat ``section.key = value`` text file (``#`` starts a
comment).  Any key can be overridden on the command line as
``--section.key VALUE`` or ``--section.key=VALUE``; the named flags below are
shorthands for common keys.

Exit codes: 0 success, 1 validation checks failed, 2 configuration error,
3 quadrature nonconvergence, 4 cutoff sensitivity, 5 dynamics runaway.
"""

from __future__ import annotations

import argparse
import sys
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import dynamics, forces, scattering, spectrum
from .core import FrequencyGrid, ObjectParams, ParameterError, Pulse, PulseKind, require_valid
from .output import read_csv, svg_line_chart, write_csv, write_json
from .quadrature import CutoffSensitivityError, QuadratureConfig, QuadratureError

EXIT_OK = 0
EXIT_CHECKS_FAILED = 1
EXIT_CONFIG = 2
EXIT_QUADRATURE = 3
EXIT_CUTOFF = 4
EXIT_RUNAWAY = 5

DEFAULTS = {
    "object.lambda0": "0.5",
    "object.mu0": "1.0",
    "object.epsilon": "0.01",
    "object.mass0": "1.0",
    "pulse.kind": "gaussian-cosine",
    "pulse.width": "5.0",
    "pulse.omega0": "2.0",
    "pulse.n_sigma": "6.0",
    "pulse.samples_file": "",
    "pulse.dt": "0.1",
    "quad.abs_tol": "1e-10",
    "quad.rel_tol": "1e-8",
    "quad.max_subdivisions": "2000",
    "quad.omega_max": "",
    "quad.doubling_check": "true",
    "grid.n_points": "200",
    "grid.omega_max": "",
    "grid.spacing": "uniform",
    "forces.n_t": "1201",
    "forces.t_window": "",
    "scenario.label": "A",
    "scenario.p_exponent": "",
    "scenario.t_end": "",
    "sweep.axis": "lambda0",
    "sweep.values": "-0.75,-0.5,-0.25,0.25,0.5,0.75",
    "sweep.forces": "true",
    "output.dir": "out",
    "output.formats": "csv,json,svg",
    "run.seed": "0",
    "run.normalize_mu0": "false",
    "run.jobs": "1",
    "plot.input": "",
    "plot.x": "",
    "plot.y": "",
}

_FLAG_KEYS = {
    "tol_abs": "quad.abs_tol",
    "tol_rel": "quad.rel_tol",
    "omega_max": "quad.omega_max",
    "scenario": "scenario.label",
    "p_exponent": "scenario.p_exponent",
    "jobs": "run.jobs",
    "out": "output.dir",
}


class ConfigError(ValueError):
    pass


def parse_config_text(text):
    values = {}
    for n, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {n}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in DEFAULTS:
            raise ConfigError(f"line {n}: unknown key {key!r}")
        values[key] = value
    return values


def _bool(s, key):
    v = s.strip().lower()
    if v in ("1", "true", "yes", "on"):
        return True
    if v in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"{key}: expected a boolean, got {s!r}")


def _float(s, key, optional=False):
    if optional and s.strip() == "":
        return None
    try:
        return float(s)
    except ValueError:
        raise ConfigError(f"{key}: expected a number, got {s!r}") from None


def _int(s, key):
    try:
        return int(s)
    except ValueError:
        raise ConfigError(f"{key}: expected an integer, got {s!r}") from None


@dataclass
class RunConfig:
    params: ObjectParams
    pulse: Pulse
    quad: QuadratureConfig
    scenario: dynamics.Scenario
    out_dir: Path
    formats: tuple
    seed: int = 0
    normalize_mu0: bool = False
    jobs: int = 1
    raw: dict = field(default_factory=dict)

    def get(self, key):
        return self.raw[key]


def build_config(values):
    """Turn a flat ``{key: string}`` mapping (defaults filled in) into a
    :class:`RunConfig`; raises :class:`ConfigError` or ``ParameterError``."""
    raw = dict(DEFAULTS)
    raw.update(values)
    f = lambda k, opt=False: _float(raw[k], k, opt)  # noqa: E731
    params = ObjectParams(f("object.lambda0"), f("object.mu0"), f("object.epsilon"),
                          f("object.mass0"))
    try:
        kind = PulseKind(raw["pulse.kind"])
    except ValueError:
        raise ConfigError(f"pulse.kind: unknown kind {raw['pulse.kind']!r}") from None
    if kind is PulseKind.USER_SAMPLED:
        path = raw["pulse.samples_file"]
        if not path:
            raise ConfigError("pulse.samples_file is required for user-sampled pulses")
        try:
            samples = np.loadtxt(path, delimiter=",", ndmin=1)
        except OSError as exc:
            raise ConfigError(f"pulse.samples_file: {exc}") from None
        pulse = Pulse.sampled(samples, f("pulse.dt"))
    else:
        pulse = Pulse(kind, f("pulse.width"), f("pulse.omega0"), f("pulse.n_sigma"))
    try:
        quad = QuadratureConfig(f("quad.abs_tol"), f("quad.rel_tol"),
                                _int(raw["quad.max_subdivisions"], "quad.max_subdivisions"),
                                f("quad.omega_max", True),
                                _bool(raw["quad.doubling_check"], "quad.doubling_check"))
        scenario = dynamics.Scenario(raw["scenario.label"].upper(),
                                     f("scenario.p_exponent", True))
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    formats = tuple(s.strip() for s in raw["output.formats"].split(",") if s.strip())
    bad = set(formats) - {"csv", "json", "svg"}
    if bad:
        raise ConfigError(f"output.formats: unknown formats {sorted(bad)}")
    require_valid(params, pulse)
    jobs = _int(raw["run.jobs"], "run.jobs")
    if jobs < 1:
        raise ConfigError("run.jobs must be >= 1")
    return RunConfig(params, pulse, quad, scenario, Path(raw["output.dir"]), formats,
                     _int(raw["run.seed"], "run.seed"),
                     _bool(raw["run.normalize_mu0"], "run.normalize_mu0"), jobs, raw)


def _freq_unit(cfg):
    return cfg.params.mu0 if cfg.normalize_mu0 and cfg.params.mu0 > 0 else 1.0


def _grid(cfg):
    wmax = _float(cfg.get("grid.omega_max"), "grid.omega_max", True)
    wmax = wmax or cfg.quad.omega_max or cfg.pulse.cutoff()
    try:
        return FrequencyGrid(wmax, _int(cfg.get("grid.n_points"), "grid.n_points"),
                             cfg.get("grid.spacing"), scale=max(cfg.params.mu0, 1e-12))
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def cmd_scatter(cfg):
    p = cfg.params
    w = _grid(cfg).points()
    try:
        s = scattering.s_coeff("+", w, p)
        rp = scattering.r_coeff("+", w, p)
        rm = scattering.r_coeff("-", w, p)
    except scattering.DegenerateInputError as exc:
        raise ConfigError(str(exc)) from None
    resid = np.maximum(np.abs(np.abs(s) ** 2 + np.abs(rp) ** 2 - 1),
                       np.abs(np.abs(s) ** 2 + np.abs(rm) ** 2 - 1))
    u = _freq_unit(cfg)
    header = ["omega", "re_s", "im_s", "re_r_plus", "im_r_plus", "re_r_minus", "im_r_minus",
              "unitarity_residual"]
    cols = [w / u, s.real, s.imag, rp.real, rp.imag, rm.real, rm.imag, resid]
    out = []
    if "csv" in cfg.formats:
        out.append(write_csv(cfg.out_dir / "scatter.csv", header, cols))
    if "json" in cfg.formats:
        out.append(write_json(cfg.out_dir / "scatter.json",
                              {"max_unitarity_residual": float(resid.max()),
                               "normalized_mu0": cfg.normalize_mu0}))
    if "svg" in cfg.formats:
        out.append(svg_line_chart(cfg.out_dir / "scatter.svg", w / u,
                                  {"|s|": np.abs(s), "|r+|": np.abs(rp), "|r-|": np.abs(rm)},
                                  title="Scattering coefficients", xlabel="omega",
                                  ylabel="magnitude"))
    return out


def cmd_spectrum(cfg):
    res = spectrum.integrate_spectrum(cfg.params, cfg.pulse, cfg.quad, _grid(cfg))
    u = _freq_unit(cfg)
    out = []
    if "csv" in cfg.formats:
        out.append(write_csv(cfg.out_dir / "spectrum.csv", ["omega", "n_plus", "n_minus"],
                             [res.omega / u, res.n_plus, res.n_minus]))
    if "json" in cfg.formats:
        totals = res.totals()
        totals["N_total"] = {"value": res.N_total,
                             "error": res.quadrature_error["N_plus"]
                             + res.quadrature_error["N_minus"]}
        totals["E_total"] = {"value": res.E_total,
                             "error": res.quadrature_error["E_plus"]
                             + res.quadrature_error["E_minus"]}
        out.append(write_json(cfg.out_dir / "totals.json",
                              {"totals": totals, "normalized_mu0": cfg.normalize_mu0}))
    if "svg" in cfg.formats:
        out.append(svg_line_chart(cfg.out_dir / "spectrum.svg", res.omega / u,
                                  {"n+": res.n_plus, "n-": res.n_minus},
                                  title="Created-particle spectrum", xlabel="omega",
                                  ylabel="n(omega)"))
    return out


def _force_window(cfg):
    tw = _float(cfg.get("forces.t_window"), "forces.t_window", True)
    return tw or cfg.pulse.tau


def _compute_forces(cfg, second_order=True):
    tw = _force_window(cfg)
    fs = forces.force_spectrum(cfg.params, cfg.pulse, cfg.quad, t_max=tw,
                               second_order=second_order)
    ser = forces.force_time_series(cfg.params, cfg.pulse, cfg.quad, t_window=tw,
                                   n_t=_int(cfg.get("forces.n_t"), "forces.n_t"), spectrum=fs,
                                   second_order=second_order)
    return fs, ser


def cmd_forces(cfg):
    if not cfg.params.mu0 > 0:
        raise ConfigError("forces need object.mu0 > 0")
    fs, ser = _compute_forces(cfg)
    f20 = forces.f2_tilde(0.0, cfg.params, cfg.pulse, cfg.quad)
    u = _freq_unit(cfg)
    out = []
    if "csv" in cfg.formats:
        out.append(write_csv(cfg.out_dir / "forces_freq.csv",
                             ["omega", "re_F1_tilde", "im_F1_tilde", "re_F2_tilde", "im_F2_tilde",
                              "f2_error"],
                             [fs.omega / u, fs.F1_tilde.real, fs.F1_tilde.imag,
                              fs.F2_tilde.real, fs.F2_tilde.imag, fs.f2_error]))
        out.append(write_csv(cfg.out_dir / "forces_time.csv", ["t", "F1", "F2"],
                             [ser.t * u, ser.F1, ser.F2]))
    if "json" in cfg.formats:
        e2 = cfg.params.epsilon ** 2
        i2 = float(np.trapezoid(ser.F2, ser.t))
        out.append(write_json(cfg.out_dir / "forces.json", {
            "F1_tilde_zero": {"value": float(abs(forces.f1_tilde(0.0, cfg.params, cfg.pulse))),
                              "error": 0.0},
            "F2_tilde_zero": {"value": float(f20.value.real), "error": float(f20.error)},
            "eps2_F2_tilde_zero": {"value": e2 * float(f20.value.real),
                                   "error": e2 * float(f20.error)},
            "time_integral_F1": float(np.trapezoid(ser.F1, ser.t)),
            "time_integral_F2": i2,
            "eps2_time_integral_F2": e2 * i2,
            "max_imag_residue": ser.max_imag_residue,
            "normalized_mu0": cfg.normalize_mu0,
        }))
    if "svg" in cfg.formats:
        out.append(svg_line_chart(cfg.out_dir / "forces.svg", ser.t * u,
                                  {"F1": ser.F1, "F2": ser.F2}, title="Mean force (epsilon-free)",
                                  xlabel="t", ylabel="force"))
    return out


def cmd_trajectory(cfg):
    if not cfg.params.mu0 > 0:
        raise ConfigError("trajectories need object.mu0 > 0")
    sc = cfg.scenario
    t_end = _float(cfg.get("scenario.t_end"), "scenario.t_end", True)
    p_net, _ = spectrum.momentum_direct(cfg.params, cfg.pulse, cfg.quad)
    _, ser = _compute_forces(cfg, second_order=sc.uses_f2)
    traj = dynamics.integrate_motion(sc, cfg.params, cfg.pulse, ser, cfg.quad, p_net=p_net,
                                     t_end=t_end)
    summary = {"scenario": sc.label, "p_exponent": sc.p_exponent, "v_f": traj.v_f,
               "v_f_predicted": traj.v_f_predicted, "max_abs_qdot": traj.max_speed,
               "valid": traj.valid, "energy_dissipated_by_Fq": traj.energy_dissipated_by_Fq,
               "quiet_window_start": traj.quiet_start}
    notes = [f"scenario {sc.label}, p = {sc.p_exponent:g}",
             f"v_f = {traj.v_f:.6g}", f"v_f_predicted = -P/M0 = {traj.v_f_predicted:.6g}"]
    if sc.label == "D":
        ref = dynamics.integrate_motion(dynamics.Scenario("C", sc.p_exponent), cfg.params,
                                        cfg.pulse, ser, cfg.quad, p_net=p_net, t_end=t_end)
        less = abs(traj.v_f) < abs(ref.v_f)
        summary.update({"v_f_without_Fq": ref.v_f, "abs_v_f_prime_less_than_abs_v_f": less})
        notes.append(f"v_f' = {traj.v_f:.6g} vs v_f (no F_q) = {ref.v_f:.6g}: "
                     f"|v_f'| < |v_f| is {str(less).lower()}")
        notes.append(f"dissipated energy = {traj.energy_dissipated_by_Fq:.6g}")
    u = _freq_unit(cfg)
    out = []
    if "csv" in cfg.formats:
        out.append(write_csv(cfg.out_dir / "trajectory.csv", ["t", "q", "qdot"],
                             [traj.t * u, traj.q, traj.qdot]))
    if "json" in cfg.formats:
        out.append(write_json(cfg.out_dir / "trajectory.json", summary))
    if "svg" in cfg.formats:
        out.append(svg_line_chart(cfg.out_dir / "trajectory.svg", traj.t * u, {"q(t)": traj.q},
                                  title="Mean trajectory", xlabel="t", ylabel="q",
                                  annotations=notes))
        out.append(svg_line_chart(cfg.out_dir / "velocity.svg", traj.t * u,
                                  {"qdot(t)": traj.qdot}, title="Mean velocity", xlabel="t",
                                  ylabel="qdot", markers=[("-P/M0", traj.v_f_predicted)]
                                  if np.isfinite(traj.v_f_predicted) else []))
    return out


def cmd_validate(cfg):
    from .validation import run_invariants

    checks = run_invariants(cfg.params, cfg.pulse, cfg.quad)
    ok = all(c.passed for c in checks)
    report = {"all_passed": ok, "checks": [c.to_dict() for c in checks]}
    path = write_json(cfg.out_dir / "validate.json", report)
    return [path], ok


SWEEP_AXES = ("lambda0", "mu0", "omega0T")
SWEEP_QUANTITIES = ("N_plus", "N_minus", "N_total", "E_plus", "E_minus", "P_net",
                    "P_net_from_energies", "eps2_F2_tilde_zero")


def _sweep_point(args):
    axis, value, params, pulse, quad, with_forces = args
    if axis == "lambda0":
        params = params.replace(lambda0=value)
    elif axis == "mu0":
        params = params.replace(mu0=value)
    else:
        pulse = Pulse(pulse.kind, pulse.width, value / pulse.width, pulse.n_sigma)
    rows = []
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            res = spectrum.integrate_spectrum(params, pulse, quad)
        err = res.quadrature_error
        vals = {
            "N_plus": (res.N_plus, err["N_plus"]),
            "N_minus": (res.N_minus, err["N_minus"]),
            "N_total": (res.N_total, err["N_plus"] + err["N_minus"]),
            "E_plus": (res.E_plus, err["E_plus"]),
            "E_minus": (res.E_minus, err["E_minus"]),
            "P_net": (res.P_net, err["P_net"]),
            "P_net_from_energies": (res.P_net_from_energies, err["P_net_from_energies"]),
        }
        if with_forces and params.mu0 > 0:
            r = forces.f2_tilde(0.0, params, pulse, quad)
            e2 = params.epsilon ** 2
            vals["eps2_F2_tilde_zero"] = (e2 * r.value.real, e2 * r.error)
        for q in SWEEP_QUANTITIES:
            if q in vals:
                rows.append((value, q, float(vals[q][0]), float(vals[q][1]), "ok"))
    except Exception as exc:  # recorded per point; the sweep continues
        msg = f"{type(exc).__name__}: {exc}".replace(",", ";").replace("\n", " ")
        rows.append((value, "error", float("nan"), float("nan"), msg))
    return rows


def cmd_sweep(cfg):
    axis = cfg.get("sweep.axis")
    if axis not in SWEEP_AXES:
        raise ConfigError(f"sweep.axis must be one of {SWEEP_AXES}")
    try:
        values = [float(v) for v in cfg.get("sweep.values").split(",") if v.strip()]
    except ValueError:
        raise ConfigError("sweep.values must be a comma-separated list of numbers") from None
    if not values:
        raise ConfigError("sweep.values is empty")
    with_forces = _bool(cfg.get("sweep.forces"), "sweep.forces")
    tasks = [(axis, v, cfg.params, cfg.pulse, cfg.quad, with_forces) for v in values]
    if cfg.jobs > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as ex:
            results = list(ex.map(_sweep_point, tasks))
    else:
        results = [_sweep_point(t) for t in tasks]
    rows = [r for point in results for r in point]
    cols = list(zip(*rows))
    path = write_csv(cfg.out_dir / "sweep.csv", [axis, "quantity", "value", "error", "status"],
                     [np.array(cols[0], dtype=float), np.array(cols[1], dtype=object),
                      np.array(cols[2], dtype=float), np.array(cols[3], dtype=float),
                      np.array(cols[4], dtype=object)])
    return [path]


def cmd_plot(cfg):
    src = cfg.get("plot.input")
    if not src:
        raise ConfigError("plot.input (a CSV file) is required")
    try:
        data = read_csv(src)
    except OSError as exc:
        raise ConfigError(str(exc)) from None
    names = list(data)
    x = cfg.get("plot.x") or names[0]
    ys = [s for s in cfg.get("plot.y").split(",") if s] or names[1:]
    missing = [c for c in [x, *ys] if c not in data]
    if missing:
        raise ConfigError(f"columns not found: {missing}")
    name = Path(src).stem
    return [svg_line_chart(cfg.out_dir / f"{name}.svg", data[x], {y: data[y] for y in ys},
                           title=name, xlabel=x, ylabel=", ".join(ys))]


COMMANDS = {
    "scatter": cmd_scatter,
    "spectrum": cmd_spectrum,
    "forces": cmd_forces,
    "trajectory": cmd_trajectory,
    "validate": cmd_validate,
    "sweep": cmd_sweep,
    "plot": cmd_plot,
}


def make_parser():
    p = argparse.ArgumentParser(prog="dcemotion", description=__doc__.split("\n\n")[0],
                                formatter_class=argparse.RawDescriptionHelpFormatter,
                                epilog="Any config key can be set as --section.key VALUE.")
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("--config", help="flat key = value configuration file")
    p.add_argument("--out", help="output directory")
    p.add_argument("--format", action="append", choices=["csv", "json", "svg"],
                   help="output format (repeatable); default all")
    p.add_argument("--jobs", type=int, help="parallel sweep workers")
    p.add_argument("--tol-abs", type=float)
    p.add_argument("--tol-rel", type=float)
    p.add_argument("--omega-max", type=float)
    p.add_argument("--scenario", choices=["A", "B", "C", "D"])
    p.add_argument("--p-exponent", type=float)
    p.add_argument("--normalize-mu0", action="store_true",
                   help="emit frequencies in units of mu0 (and times in units of 1/mu0)")
    return p


def _dotted_overrides(extra):
    values = {}
    i = 0
    while i < len(extra):
        tok = extra[i]
        if not tok.startswith("--"):
            raise ConfigError(f"unexpected argument {tok!r}")
        key = tok[2:]
        if "=" in key:
            key, val = key.split("=", 1)
        else:
            if i + 1 >= len(extra):
                raise ConfigError(f"{tok} needs a value")
            val = extra[i + 1]
            i += 1
        if key not in DEFAULTS:
            raise ConfigError(f"unknown option --{key}")
        values[key] = val
        i += 1
    return values


def resolve_config(argv):
    parser = make_parser()
    args, extra = parser.parse_known_args(argv)
    values = {}
    if args.config:
        try:
            values.update(parse_config_text(Path(args.config).read_text(encoding="utf-8")))
        except OSError as exc:
            raise ConfigError(f"--config: {exc}") from None
    values.update(_dotted_overrides(extra))
    for attr, key in _FLAG_KEYS.items():
        v = getattr(args, attr)
        if v is not None:
            values[key] = str(v)
    if args.format:
        values["output.formats"] = ",".join(args.format)
    if args.normalize_mu0:
        values["run.normalize_mu0"] = "true"
    return args.command, build_config(values)


def main(argv=None):
    argv = sys.argv[1:] if argv is None else argv
    try:
        command, cfg = resolve_config(argv)
    except SystemExit as exc:  # argparse usage errors
        return EXIT_CONFIG if exc.code not in (0, None) else EXIT_OK
    except (ConfigError, ParameterError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        result = COMMANDS[command](cfg)
    except (ConfigError, ParameterError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except CutoffSensitivityError as exc:
        print(f"cutoff sensitivity: {exc}", file=sys.stderr)
        return EXIT_CUTOFF
    except QuadratureError as exc:
        print(f"quadrature did not converge: {exc}", file=sys.stderr)
        return EXIT_QUADRATURE
    except dynamics.RunawayError as exc:
        print(f"runaway: {exc}", file=sys.stderr)
        return EXIT_RUNAWAY
    if command == "validate":
        paths, ok = result
        for path in paths:
            print(path)
        return EXIT_OK if ok else EXIT_CHECKS_FAILED
    for path in result:
        print(path)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
