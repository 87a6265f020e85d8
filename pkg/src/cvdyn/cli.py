"""Scenario configuration, figure presets and tabular data emission.

Configs are flat INI-style files (key = value under a section per topic);
the bundled presets reproduce the parameter sets of the published
entanglement-evolution figures.  Each run writes a CSV data product plus a
JSON manifest echoing every input and the derived constants.
"""

from __future__ import annotations

import argparse
import configparser
import json
import math
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import oscillators, ringcavity
from .bath import SpectralDensity, ThermalSpec
from .errors import ConfigError, CVDynError, NumericalError

ENV_OUT = "CVDYN_OUT"

_RUN_KEYS = {"scenario", "out", "jobs"}
_OSC_KEYS = {"m", "omega", "lambda", "r", "t_end", "dt_out", "markov", "bath"}
_BATH_KEYS = {"gamma0", "lambda", "n", "t", "coupling_factor"}
_THRESHOLD_KEYS = {"t", "omega_2"}
_RING_KEYS = {
    "n_atoms", "g_u", "g_s", "delta_u", "delta_s", "omega_u", "omega_s",
    "phi_u", "phi_s", "kappa", "gamma_u", "gamma_s", "delta_c",
    "tau1", "tau2", "dt_out",
}

SCENARIOS = ("oscillators", "ring-cavity", "threshold")


@dataclass
class RunSpec:
    """One fully resolved simulation job."""

    label: str
    scenario: str
    params: dict


@dataclass
class ScenarioConfig:
    scenario: str
    out: str
    jobs: int
    runs: list = field(default_factory=list)


# parameter bundles of the published figures; all share T = 10
PRESETS = {
    "fig2": {
        "scenario": "oscillators",
        "oscillators": {"lambda": 0.0, "r": [1.0, 1.498, 2.0]},
        "bath": {"gamma0": 0.1, "lambda": 100.0},
    },
    "fig3": {
        "scenario": "oscillators",
        "oscillators": {"lambda": 0.0, "r": 1.6},
        "bath": {"gamma0": 1.0, "lambda": [200.0, 500.0, 800.0]},
    },
    "fig4": {
        "scenario": "oscillators",
        "oscillators": {"lambda": 0.0, "r": 1.6},
        "bath": {"gamma0": [0.05, 1.0, 5.0], "lambda": 100.0},
    },
    "fig5": {
        "scenario": "oscillators",
        "oscillators": {"lambda": 0.8, "r": [1.0, 1.498, 2.0]},
        "bath": {"gamma0": 0.1, "lambda": 100.0},
    },
}

_OSC_DEFAULTS = {
    "m": 1.0, "omega": 1.0, "lambda": 0.0, "r": 1.0,
    "t_end": 50.0, "dt_out": 0.01, "markov": False, "bath": True,
}
_BATH_DEFAULTS = {"gamma0": 0.1, "lambda": 100.0, "n": 1, "t": 10.0, "coupling_factor": 1.0}
_RING_DEFAULTS = {
    "n_atoms": 10000, "g_u": 1.0, "g_s": 1.0,
    "delta_u": 100.0, "delta_s": 100.0,
    "omega_u": 2.0 * math.sqrt(2.0), "omega_s": 2.0,
    "phi_u": 0.0, "phi_s": 0.0, "gamma_u": 0.0, "gamma_s": 0.0,
    "delta_c": -100.0, "tau1": None, "tau2": None, "dt_out": 0.05,
}


def _parse_value(raw: str):
    raw = raw.strip()
    if "," in raw:
        return [_parse_value(part) for part in raw.split(",")]
    low = raw.lower()
    if low in ("true", "on", "yes"):
        return True
    if low in ("false", "off", "no"):
        return False
    try:
        return int(raw)
    except ValueError:
        pass
    try:
        return float(raw)
    except ValueError:
        return raw


def _check_keys(section: str, given: dict, allowed: set):
    unknown = set(given) - allowed
    if unknown:
        raise ConfigError(
            f"unknown key(s) in [{section}]: {', '.join(sorted(unknown))}"
        )


def _sweep_product(*param_dicts):
    """Expand list-valued entries into a sweep; at most one axis per dict."""
    swept = []
    for d in param_dicts:
        for key, val in d.items():
            if isinstance(val, list):
                swept.append((d, key, val))
    if not swept:
        return [tuple(dict(d) for d in param_dicts)]
    if len(swept) > 1:
        raise ConfigError("only one parameter may be swept per config")
    d_swept, key, values = swept[0]
    out = []
    for v in values:
        copies = []
        for d in param_dicts:
            c = dict(d)
            if d is d_swept:
                c[key] = v
            copies.append(c)
        out.append(tuple(copies))
    return out


def _build_oscillator_runs(osc: dict, bath: dict) -> list:
    osc = {**_OSC_DEFAULTS, **osc}
    bath = {**_BATH_DEFAULTS, **bath}
    runs = []
    for osc_i, bath_i in _sweep_product(osc, bath):
        try:
            pair = oscillators.OscillatorPair(
                M=float(osc_i["m"]), Omega=float(osc_i["omega"]), lam=float(osc_i["lambda"])
            )
            oscillators.transformed_frequencies(pair)
            sd = SpectralDensity(
                gamma0=float(bath_i["gamma0"]), Lambda=float(bath_i["lambda"]),
                n=int(bath_i["n"]), M=float(osc_i["m"]),
                coupling_factor=float(bath_i["coupling_factor"]),
            )
            th = ThermalSpec(T=float(bath_i["t"]))
        except (ValueError, CVDynError) as exc:
            raise ConfigError(f"invalid oscillator/bath parameters: {exc}") from exc
        if float(osc_i["t_end"]) <= 0 or float(osc_i["dt_out"]) <= 0:
            raise ConfigError("t_end and dt_out must be > 0")
        label = (
            f"osc_r{osc_i['r']:g}_g{bath_i['gamma0']:g}"
            f"_L{bath_i['lambda']:g}_lam{osc_i['lambda']:g}"
        )
        runs.append(
            RunSpec(
                label=label,
                scenario="oscillators",
                params={
                    "pair": pair, "sd": sd, "th": th,
                    "r": float(osc_i["r"]), "t_end": float(osc_i["t_end"]),
                    "dt_out": float(osc_i["dt_out"]),
                    "markov": bool(osc_i["markov"]), "bath_on": bool(osc_i["bath"]),
                },
            )
        )
    return runs


def _build_threshold_runs(thr: dict) -> list:
    thr = {**{"t": 10.0, "omega_2": 1.0}, **thr}
    T = float(thr["t"])
    if T <= 0:
        raise ConfigError("threshold scenario requires T > 0")
    return [
        RunSpec(
            label=f"threshold_T{T:g}",
            scenario="threshold",
            params={"T": T, "Omega_2": float(thr["omega_2"])},
        )
    ]


def _build_ring_runs(ring: dict) -> list:
    missing = {"kappa"} - set(ring)
    if missing:
        raise ConfigError(f"ring-cavity scenario missing key(s): {', '.join(missing)}")
    ring = {**_RING_DEFAULTS, **ring}
    try:
        ens = ringcavity.EnsembleParams(
            N_atoms=int(ring["n_atoms"]),
            g_u=float(ring["g_u"]), g_s=float(ring["g_s"]),
            Delta_u=float(ring["delta_u"]), Delta_s=float(ring["delta_s"]),
            Omega_u=float(ring["omega_u"]), Omega_s=float(ring["omega_s"]),
            kappa=float(ring["kappa"]),
            phi_u=float(ring["phi_u"]), phi_s=float(ring["phi_s"]),
            gamma_u=float(ring["gamma_u"]), gamma_s=float(ring["gamma_s"]),
            delta_c=float(ring["delta_c"]),
        )
    except (ValueError, CVDynError) as exc:
        raise ConfigError(f"invalid ring-cavity parameters: {exc}") from exc
    tau1 = None if ring["tau1"] is None else float(ring["tau1"])
    tau2 = None if ring["tau2"] is None else float(ring["tau2"])
    return [
        RunSpec(
            label="ring_cavity",
            scenario="ring-cavity",
            params={"ensemble": ens, "tau1": tau1, "tau2": tau2,
                    "dt_out": float(ring["dt_out"])},
        )
    ]


def _assemble_config(scenario, out, jobs, osc, bath, thr, ring) -> ScenarioConfig:
    if scenario not in SCENARIOS:
        raise ConfigError(
            f"unknown scenario {scenario!r}; expected one of {', '.join(SCENARIOS)}"
        )
    if scenario == "oscillators":
        runs = _build_oscillator_runs(osc, bath)
    elif scenario == "threshold":
        runs = _build_threshold_runs(thr)
    else:
        runs = _build_ring_runs(ring)
    return ScenarioConfig(scenario=scenario, out=out, jobs=jobs, runs=runs)


def load_config(path_or_preset: str) -> ScenarioConfig:
    """Load a config file, or expand a named preset, into resolved run specs."""
    if path_or_preset in PRESETS:
        preset = PRESETS[path_or_preset]
        return _assemble_config(
            preset["scenario"], ".", 1,
            preset.get("oscillators", {}), preset.get("bath", {}),
            {}, {},
        )

    path = Path(path_or_preset)
    if not path.is_file():
        raise ConfigError(f"config file not found: {path}")
    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    try:
        parser.read(path)
    except configparser.Error as exc:
        raise ConfigError(f"config parse error: {exc}") from exc

    known_sections = {"run", "oscillators", "bath", "threshold", "ring_cavity"}
    unknown = set(parser.sections()) - known_sections
    if unknown:
        raise ConfigError(f"unknown section(s): {', '.join(sorted(unknown))}")

    def section(name):
        if not parser.has_section(name):
            return {}
        return {k: _parse_value(v) for k, v in parser.items(name)}

    run = section("run")
    _check_keys("run", run, _RUN_KEYS)
    osc = section("oscillators")
    _check_keys("oscillators", osc, _OSC_KEYS)
    bath = section("bath")
    _check_keys("bath", bath, _BATH_KEYS)
    thr = section("threshold")
    _check_keys("threshold", thr, _THRESHOLD_KEYS)
    ring = section("ring_cavity")
    _check_keys("ring_cavity", ring, _RING_KEYS)

    scenario = run.get("scenario")
    if scenario is None:
        raise ConfigError("config must set scenario under [run]")
    return _assemble_config(
        str(scenario), str(run.get("out", ".")), int(run.get("jobs", 1)),
        osc, bath, thr, ring,
    )


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def _write_manifest(path: Path, inputs: dict, derived: dict, wall_time: float):
    payload = {"inputs": inputs, "derived": derived, "wall_time_s": wall_time}
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")


def _run_oscillators(spec: RunSpec, out_dir: Path) -> list:
    p = spec.params
    t0 = time.perf_counter()
    pair, sd, th = p["pair"], p["sd"], p["th"]
    freqs = oscillators.transformed_frequencies(pair)
    v0 = oscillators.initial_squeezed_vector(p["r"])
    if p["bath_on"]:
        table = oscillators.make_bath_table(pair, sd, th)
        traj = oscillators.integrate(
            pair, table, v0, p["t_end"], p["dt_out"], markov=p["markov"]
        )
    else:
        traj = oscillators.integrate(pair, None, v0, p["t_end"], p["dt_out"])
    series = oscillators.entanglement_series(traj)

    csv_path = out_dir / f"{spec.label}.csv"
    cols = ["t", "V11", "V12", "V22", "V13", "V14", "V23", "V24", "V33", "V34", "V44",
            "nu_tilde_minus", "log_negativity"]
    with csv_path.open("w", newline="\n") as fh:
        fh.write(",".join(cols) + "\n")
        for i in range(len(traj.t)):
            row = [traj.t[i], *traj.v[i], series.nu_tilde_minus[i], series.log_negativity[i]]
            fh.write(",".join(_fmt(x) for x in row) + "\n")

    nbar = None
    if th.T > 0:
        from .bath import mean_occupation

        nbar = mean_occupation(th, freqs.Omega_2)
    derived = {
        "Omega_F": freqs.Omega_F,
        "Omega_2": freqs.Omega_2,
        "nbar": nbar,
        "r_th": oscillators.threshold_r(th.T, freqs.Omega_2),
    }
    inputs = {
        "scenario": spec.scenario, "r": p["r"], "t_end": p["t_end"],
        "dt_out": p["dt_out"], "markov": p["markov"], "bath_on": p["bath_on"],
        "M": pair.M, "Omega": pair.Omega, "lambda": pair.lam,
        "gamma0": sd.gamma0, "Lambda": sd.Lambda, "n": sd.n,
        "coupling_factor": sd.coupling_factor, "T": th.T,
    }
    _write_manifest(out_dir / f"{spec.label}.manifest.json", inputs, derived,
                    time.perf_counter() - t0)
    return [csv_path.name, f"{spec.label}.manifest.json"]


def _run_threshold(spec: RunSpec, out_dir: Path) -> list:
    t0 = time.perf_counter()
    T, Omega_2 = spec.params["T"], spec.params["Omega_2"]
    from .bath import mean_occupation

    nbar = mean_occupation(ThermalSpec(T), Omega_2)
    derived = {"nbar": nbar, "r_th": oscillators.threshold_r(T, Omega_2)}
    _write_manifest(out_dir / f"{spec.label}.manifest.json",
                    {"scenario": "threshold", "T": T, "Omega_2": Omega_2},
                    derived, time.perf_counter() - t0)
    return [f"{spec.label}.manifest.json"]


def _run_ring(spec: RunSpec, out_dir: Path) -> list:
    p = spec.params
    t0 = time.perf_counter()
    ens = p["ensemble"]
    warnings = ringcavity.validity_check(ens)
    ec = ringcavity.effective_couplings(ens)
    xi0, xi1 = ringcavity.squeeze_parameters(ec)
    traj = ringcavity.run_protocol(ens, p["tau1"], p["tau2"], p["dt_out"])
    target = ringcavity.squeezed_target(ec)
    iu = np.triu_indices(10)

    csv_path = out_dir / f"{spec.label}.csv"
    cols = ["t"] + [f"s{i}{j}" for i, j in zip(*iu)] + ["purity", "distance_to_target"]
    with csv_path.open("w", newline="\n") as fh:
        fh.write(",".join(cols) + "\n")
        for i in range(len(traj.t)):
            sigma = traj.sigma[i]
            purity = 1.0 / (2.0**5 * math.sqrt(max(np.linalg.det(sigma), 0.0)))
            dist = float(np.abs(sigma - target).max())
            row = [traj.t[i], *sigma[iu], purity, dist]
            fh.write(",".join(_fmt(x) for x in row) + "\n")

    cw = ringcavity.build_system(ec, ens.kappa, "clockwise")
    eigs = ringcavity.eigenvalue_report(cw)
    final = traj.sigma[-1]
    derived = {
        "beta_u": [ec.beta_u.real, ec.beta_u.imag],
        "beta_s": [ec.beta_s.real, ec.beta_s.imag],
        "beta_effective": ringcavity.beta_effective(ec),
        "xi0": xi0,
        "xi1": xi1,
        "drift_eigenvalues": [[ev.real, ev.imag] for ev in eigs],
        "final_distance_to_target": float(np.abs(final - target).max()),
        "final_purity": 1.0 / (2.0**5 * math.sqrt(max(np.linalg.det(final), 0.0))),
        "validity_warnings": warnings,
    }
    inputs = {
        "scenario": spec.scenario,
        "N_atoms": ens.N_atoms, "g_u": ens.g_u, "g_s": ens.g_s,
        "Delta_u": ens.Delta_u, "Delta_s": ens.Delta_s,
        "Omega_u": ens.Omega_u, "Omega_s": ens.Omega_s,
        "phi_u": ens.phi_u, "phi_s": ens.phi_s,
        "kappa": ens.kappa, "delta_c": ens.delta_c,
        "tau1": p["tau1"], "tau2": p["tau2"], "dt_out": p["dt_out"],
    }
    _write_manifest(out_dir / f"{spec.label}.manifest.json", inputs, derived,
                    time.perf_counter() - t0)
    return [csv_path.name, f"{spec.label}.manifest.json"]


_RUNNERS = {
    "oscillators": _run_oscillators,
    "threshold": _run_threshold,
    "ring-cavity": _run_ring,
}


def _execute(spec: RunSpec, out_dir: str) -> list:
    return _RUNNERS[spec.scenario](spec, Path(out_dir))


def run(config: ScenarioConfig) -> list:
    """Execute every run in the config; returns the list of files written."""
    out_dir = Path(config.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    if config.jobs > 1 and len(config.runs) > 1:
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            futures = [pool.submit(_execute, spec, str(out_dir)) for spec in config.runs]
            for fut in futures:
                written.extend(fut.result())
    else:
        for spec in config.runs:
            written.extend(_execute(spec, str(out_dir)))
    return written


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="cvdyn",
        description="Gaussian continuous-variable dynamics simulations",
    )
    parser.add_argument("--config", help="path to an INI-style scenario config")
    parser.add_argument("--preset", choices=sorted(PRESETS), help="named figure preset")
    parser.add_argument("--scenario", choices=SCENARIOS,
                        help="run a scenario with default parameters")
    parser.add_argument("--out", help="output directory (overrides config)")
    parser.add_argument("--jobs", type=int, default=None, help="parallel workers")
    args = parser.parse_args(argv)

    try:
        if args.config:
            config = load_config(args.config)
        elif args.preset:
            config = load_config(args.preset)
        elif args.scenario:
            config = _assemble_config(args.scenario, ".", 1, {}, {}, {}, {})
        else:
            parser.print_usage(sys.stderr)
            print("error: one of --config/--preset/--scenario is required", file=sys.stderr)
            return 2

        if args.out:
            config.out = args.out
        env_out = os.environ.get(ENV_OUT)
        if env_out:
            config.out = env_out
        if args.jobs is not None:
            config.jobs = max(1, args.jobs)

        written = run(config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (NumericalError, CVDynError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3

    for name in written:
        print(name)
    return 0


if __name__ == "__main__":
    sys.exit(main())
