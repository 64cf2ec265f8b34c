"""Command-line front end.

Subcommands: ``synth``, ``figure``, ``sweep``, ``selftest``.  Every run is
described by one JSON document (``--config-file``); command-line flags
override its fields.  Angles in the JSON document and on the command line
are given in units of pi (``"c": 0.5`` means pi/2).

Exit codes: 0 success, 1 usage or configuration error, 2 numerical failure.
"""

from __future__ import annotations

import argparse
import copy
import csv
import hashlib
import io
import json
import math
import sys
from typing import Any, Iterable, Sequence

import numpy as np

from . import __version__
from .circuits import ConfigKind, Configuration, check_unitary, full_unitary, reduce_to_qubit
from .components import PSProfile, RFDrive, TwoScatterPS
from .errors import SpecgateError, UnitarityError
from .metrics import PRESETS, GateTarget, Thresholds, phase_gate, score, target_matrix
from .modespace import EncodingKind, ModeSpace, time_qubit
from .parallel import (
    brute_force_count_hadamard,
    brute_force_count_phase,
    count_parallel_hadamard,
    count_parallel_phase,
    evaluate_parallel,
    first_spacing_below,
    guard_band_scan,
    square_drive_config,
    tone_sweep,
)
from .synthesis import SynthesisSolution, solve, solve_pep_frequency, trivial_gate_settings

FIGURES = ("fig2", "fig3", "fig4", "fig5", "table1", "table2", "guardband")
SWEEPS = ("mu", "theta", "f_th", "nu", "n_tones", "guard_spacing")

DEFAULTS: dict[str, Any] = {
    "M": 128,
    "gate": None,
    "nu": 0.5,
    "config": "epe",
    "encoding": "time",
    "qubit": 0,
    "mu": None,
    "thresholds": {"fidelity": 0.99, "success_prob": 0.9999},
    "budget": 2000,
    "max_tones": 6,
    "sweep": {"parameter": None, "start": None, "stop": None, "steps": None},
    "output": None,
}

SWEEP_DEFAULTS = {
    "mu": (0.0, 3.0, 31),
    "theta": (0.0, 2.0 / 128, 9),
    "f_th": (0.9, 0.9999, 12),
    "nu": (0.05, 1.0, 20),
    "n_tones": (1, 4, 4),
    "guard_spacing": (0, 8, 9),
}


class ConfigError(ValueError):
    """Malformed experiment configuration."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


# --- configuration -----------------------------------------------------------------


def _merge(base: dict, over: dict) -> dict:
    out = copy.deepcopy(base)
    for k, v in over.items():
        if isinstance(v, dict) and isinstance(out.get(k), dict):
            out[k] = _merge(out[k], v)
        else:
            out[k] = v
    return out


def load_config(path: str | None, overrides: dict) -> dict:
    cfg = copy.deepcopy(DEFAULTS)
    if path:
        try:
            with open(path, encoding="utf-8") as fh:
                doc = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        if not isinstance(doc, dict):
            raise ConfigError("config must be a JSON object")
        unknown = set(doc) - set(DEFAULTS)
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        cfg = _merge(cfg, doc)
    return _merge(cfg, {k: v for k, v in overrides.items() if v is not None})


def config_hash(cfg: dict) -> str:
    """SHA-256 of the effective configuration; the output path does not count."""
    body = {k: v for k, v in cfg.items() if k != "output"}
    return hashlib.sha256(json.dumps(body, sort_keys=True).encode("utf-8")).hexdigest()


def parse_gate(cfg: dict, fallback: str = "hadamard") -> tuple[str, GateTarget]:
    """Resolve the target; ``fallback`` names the preset used when none is configured."""
    g = cfg["gate"] if cfg.get("gate") is not None else fallback
    if isinstance(g, dict):
        try:
            vals = [float(g[k]) * math.pi for k in "abcd"]
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError("raw gate needs numeric a, b, c, d (units of pi)") from exc
        return "custom", GateTarget(*vals)
    if not isinstance(g, str):
        raise ConfigError("gate must be a preset name or an {a, b, c, d} object")
    name = g.strip().lower()
    if name == "phase":
        return f"phase({cfg['nu']}pi)", phase_gate(float(cfg["nu"]) * math.pi)
    if name not in PRESETS:
        raise ConfigError(f"unknown gate {g!r}; presets: {sorted([*PRESETS, 'phase'])}")
    return name, PRESETS[name]


def parse_encoding(s: str) -> EncodingKind:
    s = str(s).lower()
    if s in ("freq", "frequency"):
        return EncodingKind.FREQUENCY
    if s == "time":
        return EncodingKind.TIME
    raise ConfigError(f"unknown encoding {s!r}")


def parse_kind(s: str) -> ConfigKind:
    try:
        return ConfigKind(str(s).upper())
    except ValueError as exc:
        raise ConfigError(f"unknown configuration {s!r}; use epe or pep") from exc


def parse_space(cfg: dict) -> ModeSpace:
    try:
        return ModeSpace(int(cfg["M"]))
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc


def parse_thresholds(cfg: dict) -> Thresholds:
    th = cfg["thresholds"]
    f, p = float(th["fidelity"]), float(th["success_prob"])
    if not (0 < f < 1 and 0 < p <= 1):
        raise ConfigError("thresholds must lie in (0, 1)")
    return Thresholds(f, p)


# --- output --------------------------------------------------------------------------


def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return "" if v is None else str(v)


def render_csv(columns: Sequence[str], rows: Iterable[Sequence], cfg: dict, space: ModeSpace, th: Thresholds) -> str:
    buf = io.StringIO()
    buf.write(f"# specgate {__version__}\n")
    buf.write(f"# config_sha256 {config_hash(cfg)}\n")
    buf.write(f"# M {space.M}\n")
    buf.write(f"# thresholds fidelity={_fmt(th.fidelity)} success_prob={_fmt(th.success_prob)}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([_fmt(v) for v in r])
    return buf.getvalue()


def render_json(obj: dict) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def emit(text: str, path: str | None) -> None:
    if path:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def describe_stage(stage) -> dict:
    if isinstance(stage, RFDrive):
        return {
            "type": "eom",
            "phi_c": stage.phi_c,
            "tones": [{"harmonic": t.harmonic, "mu": t.mu, "theta": t.theta} for t in stage.tones],
        }
    if isinstance(stage, TwoScatterPS):
        return {
            "type": "ps-two-scatter",
            "alpha_mag": stage.alpha_mag,
            "beta_mag": stage.beta_mag,
            "gamma": stage.gamma,
            "sign": stage.sign,
        }
    assert isinstance(stage, PSProfile)
    return {"type": "ps-profile", "phases": [float(p) for p in stage.phases]}


def _matrix_json(W: np.ndarray) -> list:
    return [[[float(z.real), float(z.imag)] for z in row] for row in W]


# --- synth ---------------------------------------------------------------------------


def run_synth(cfg: dict) -> tuple[str, str]:
    space = parse_space(cfg)
    name, target = parse_gate(cfg)
    kind, enc = parse_kind(cfg["config"]), parse_encoding(cfg["encoding"])
    q = int(cfg["qubit"])
    t = target.canonical()
    base = {
        "version": __version__,
        "M": space.M,
        "configuration": kind.value,
        "encoding": enc.value,
        "qubit": q,
        "gate": {"name": name, "a": t.a, "b": t.b, "c": t.c, "d": t.d},
        "target_matrix": _matrix_json(target_matrix(t)),
    }
    if kind is ConfigKind.EPE and enc is EncodingKind.FREQUENCY:
        base.update(
            status="unsupported",
            explanation="no closed-form [EPE] settings exist for frequency-bin qubits; only [PEP] is solved analytically there",
        )
        return render_json(base), f"{name}: [EPE] frequency synthesis not available\n"
    if not 0 <= q < space.n_qubits:
        raise ConfigError(f"qubit {q} outside [0, {space.n_qubits - 1}]")
    if enc is EncodingKind.FREQUENCY:
        mu = cfg.get("mu")
        sol = solve_pep_frequency(t, q, space, None if mu is None else float(mu))
    else:
        sol = solve(t, kind.value, enc.value, q, space)
    V = full_unitary(sol.config, space, enc)
    check_unitary(V)
    red = reduce_to_qubit(V, sol.qubit, space)
    sc = score(red, t)
    base.update(
        status="ok",
        method=sol.method,
        fidelity=sc.fidelity,
        success_prob=sc.success_prob,
        predicted={"fidelity": sol.predicted.fidelity, "success_prob": sol.predicted.success_prob},
        reduced_matrix=_matrix_json(red.w),
        stages=[describe_stage(s) for s in sol.config.stages],
        parameters={k: float(v) for k, v in sol.params.items()},
    )
    if enc is EncodingKind.TIME:
        triv = trivial_gate_settings(t, space, q)
        base["trivial"] = None if triv is None else triv.method
    if sc.success_prob < 1 - 1e-9:
        base["explanation"] = (
            "unit success probability is out of reach for this encoding: the EOM leaks "
            "amplitude to sidebands outside the qubit, leaving J0(mu)^2 + J1(mu)^2"
        )
    summary = f"{name} [{kind.value}] {enc.value} qubit {q}: F={sc.fidelity:.12f} P={sc.success_prob:.12f} ({sol.method})\n"
    return render_json(base), summary


# --- figures -------------------------------------------------------------------------


def _fig2(cfg, space, th):
    gates = {"phase": phase_gate(math.pi / 2), "hadamard": PRESETS["hadamard"], "x": PRESETS["pauli-x"]}
    rows = []
    for mu in np.round(np.linspace(0.0, 3.0, 61), 10):
        vals = {}
        for key, g in gates.items():
            sol = solve_pep_frequency(g, 0, space, float(mu))
            vals[key] = sol.simulate(space, g)
        rows.append([float(mu), vals["hadamard"].success_prob, vals["phase"].fidelity, vals["hadamard"].fidelity, vals["x"].fidelity])
    return ["mu", "success_prob", "fid_phase", "fid_hadamard", "fid_x"], rows


def _fig3(cfg, space, th):
    H = PRESETS["hadamard"]
    rows = []
    for kind in (ConfigKind.EPE, ConfigKind.PEP):
        reps = tone_sweep(kind, H, int(cfg["max_tones"]), th, space, int(cfg["budget"]))
        for n, rep in enumerate(reps, start=1):
            exact = evaluate_parallel(square_drive_config(H, kind, n - 1, space), H, "time", space, th)
            rows.append([n, kind.value, exact.count_above, rep.count_above, rep.evaluations, rep.exhausted])
    return ["tones", "config", "exact_truncation_count", "optimized_count", "evaluations", "exhausted"], rows


def _fig4(cfg, space, th):
    rows = []
    for f in (0.9, 0.99, 0.999, 0.9999):
        for i in range(1, 21):
            nu = i * math.pi / 20
            rows.append([i / 20, f, count_parallel_phase(nu, f, space), brute_force_count_phase(nu, f, space)])
    return ["nu_over_pi", "f_th", "count_formula", "count_bruteforce"], rows


def _fig5(cfg, space, th):
    rows = []
    for f in np.linspace(0.9, 0.9999, 100):
        f = float(f)
        rows.append(
            [
                f,
                count_parallel_hadamard("EPE", f, space),
                brute_force_count_hadamard("EPE", f, space),
                count_parallel_hadamard("PEP", f, space),
                brute_force_count_hadamard("PEP", f, space),
            ]
        )
    return ["f_th", "epe_formula", "epe_bruteforce", "pep_formula", "pep_bruteforce"], rows


def _table1(cfg, space, th):
    gates = {**PRESETS, "phase(pi/2)": phase_gate(math.pi / 2)}
    rows = []
    for gname, g in gates.items():
        for kind, enc in (("EPE", "time"), ("PEP", "time"), ("PEP", "frequency"), ("EPE", "frequency")):
            if kind == "EPE" and enc == "frequency":
                rows.append([kind, enc, gname, "none", None, None])
                continue
            sol = solve(g, kind, enc, 0, space)
            sc = sol.simulate(space, g)
            rows.append([kind, enc, gname, sol.method, sc.fidelity, sc.success_prob])
    return ["config", "encoding", "gate", "method", "fidelity", "success_prob"], rows


def _table2(cfg, space, th):
    H = PRESETS["hadamard"]
    rows = []
    for kind in ("EPE", "PEP"):
        rows.append([kind, "time", "hadamard", "single tone, closed form", count_parallel_hadamard(kind, th.fidelity, space)])
        reps = tone_sweep(kind, H, 3, th, space, int(cfg["budget"]))
        for n, rep in enumerate(reps, start=1):
            rows.append([kind, "time", "hadamard", f"{n} optimized tone(s)", rep.count_above])
    rows.append(["EPE/PEP", "time", "phase(pi/2)", "single tone, closed form", count_parallel_phase(math.pi / 2, th.fidelity, space)])
    scan = guard_band_scan(PRESETS["pauli-x"], "PEP", 8, space)
    for norm in ("amplitude", "probability"):
        g = first_spacing_below(scan, 1e-3, norm)
        cap = None if g is None else space.M // (2 + g)
        rows.append(["PEP", "frequency", "pauli-x", f"guard spacing {g} ({norm} crosstalk < 0.001)", cap])
    return ["config", "encoding", "gate", "setting", "n_parallel"], rows


def _guard_rows(scan, space):
    return [
        [r.spacing, r.n_qubits, r.crosstalk_probability, r.crosstalk_amplitude, r.worst_fidelity, r.worst_success_prob]
        for r in scan
    ]


GUARD_COLUMNS = ["spacing", "n_qubits", "crosstalk_probability", "crosstalk_amplitude", "worst_fidelity", "worst_success_prob"]


def _guardband(cfg, space, th):
    _, t = parse_gate(cfg, "pauli-x")
    return GUARD_COLUMNS, _guard_rows(guard_band_scan(t, "PEP", 8, space), space)


FIGURE_BUILDERS = {
    "fig2": _fig2,
    "fig3": _fig3,
    "fig4": _fig4,
    "fig5": _fig5,
    "table1": _table1,
    "table2": _table2,
    "guardband": _guardband,
}


def run_figure(name: str, cfg: dict) -> str:
    if name not in FIGURE_BUILDERS:
        raise ConfigError(f"unknown figure {name!r}; choose from {list(FIGURES)}")
    space, th = parse_space(cfg), parse_thresholds(cfg)
    cols, rows = FIGURE_BUILDERS[name](cfg, space, th)
    return render_csv(cols, rows, {**cfg, "figure": name}, space, th)


# --- sweeps --------------------------------------------------------------------------


def _points(param: str, start, stop, steps) -> list:
    if param in ("n_tones", "guard_spacing"):
        return list(range(int(start), int(stop) + 1))
    steps = int(steps)
    if steps < 1:
        raise ConfigError("steps must be >= 1")
    return [float(v) for v in np.linspace(float(start), float(stop), steps)]


def run_sweep(cfg: dict) -> str:
    sw = cfg["sweep"]
    param = sw.get("parameter")
    if param not in SWEEPS:
        raise ConfigError(f"unknown sweep parameter {param!r}; choose from {list(SWEEPS)}")
    d0, d1, dn = SWEEP_DEFAULTS[param]
    start = d0 if sw.get("start") is None else sw["start"]
    stop = d1 if sw.get("stop") is None else sw["stop"]
    steps = dn if sw.get("steps") is None else sw["steps"]
    pts = _points(param, start, stop, steps)
    space, th = parse_space(cfg), parse_thresholds(cfg)
    name, t = parse_gate(cfg, "pauli-x" if param == "guard_spacing" else "hadamard")
    kind = parse_kind(cfg["config"])
    rows: list[list] = []

    if param == "mu":
        cols = ["mu", "fidelity", "success_prob", "predicted_fidelity", "predicted_success_prob"]
        for mu in pts:
            sol = solve_pep_frequency(t, int(cfg["qubit"]) % space.n_qubits, space, mu)
            sc = sol.simulate(space, t)
            rows.append([mu, sc.fidelity, sc.success_prob, sol.predicted.fidelity, sol.predicted.success_prob])
    elif param == "theta":
        cols = ["theta_over_pi", "count_above", "min_fidelity", "max_fidelity", "min_success_prob"]
        for th_pi in pts:
            rep = evaluate_parallel(square_drive_config(t, kind, 0, space, th_pi * math.pi), t, "time", space, th)
            rows.append([th_pi, rep.count_above, rep.fidelities.min(), rep.fidelities.max(), rep.success_probs.min()])
    elif param == "f_th":
        cols = ["f_th", "epe_count", "pep_count", "epe_formula", "pep_formula"]
        for f in pts:
            rows.append(
                [
                    f,
                    brute_force_count_hadamard("EPE", f, space),
                    brute_force_count_hadamard("PEP", f, space),
                    count_parallel_hadamard("EPE", f, space),
                    count_parallel_hadamard("PEP", f, space),
                ]
            )
    elif param == "nu":
        cols = ["nu_over_pi", "count_formula", "count_bruteforce"]
        for nu_pi in pts:
            nu = nu_pi * math.pi
            rows.append([nu_pi, count_parallel_phase(nu, th.fidelity, space), brute_force_count_phase(nu, th.fidelity, space)])
    elif param == "n_tones":
        cols = ["n_tones", "config", "count_above", "min_fidelity", "min_success_prob", "evaluations", "exhausted"]
        reps = tone_sweep(kind, t, max(pts), th, space, int(cfg["budget"]))
        for n in pts:
            r = reps[n - 1]
            rows.append([n, kind.value, r.count_above, r.fidelities.min(), r.success_probs.min(), r.evaluations, r.exhausted])
    else:
        cols = GUARD_COLUMNS
        scan = guard_band_scan(t, "PEP", max(pts), space)
        rows = [r for r in _guard_rows(scan, space) if r[0] in pts]
    return render_csv(cols, rows, cfg, space, th)


# --- selftest ------------------------------------------------------------------------


def run_selftest() -> tuple[str, bool]:
    from .selftest import run_all

    lines, ok = [], True
    for r in run_all():
        ok &= r.passed
        lines.append(f"{'PASS' if r.passed else 'FAIL'}  {r.name}: {r.detail}")
    return "\n".join(lines) + "\n", ok


# --- argument parsing ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config-file", help="JSON experiment document; flags override its fields")
    common.add_argument("--M", type=int, help="number of modes (even, >= 4)")
    common.add_argument("--f-th", type=float, help="fidelity threshold")
    common.add_argument("--p-th", type=float, help="success-probability threshold")
    common.add_argument("--gate", help="preset: identity, pauli-x, pauli-y, pauli-z, hadamard, phase")
    common.add_argument("--nu", type=float, help="phase-gate angle in units of pi")
    common.add_argument("--abcd", type=float, nargs=4, metavar=("A", "B", "C", "D"), help="raw target angles in units of pi")
    common.add_argument("--config", help="component configuration: epe or pep")
    common.add_argument("--encoding", help="time or freq")
    common.add_argument("--qubit", type=int, help="qubit index")
    common.add_argument("--budget", type=int, help="optimizer evaluations per tone count")
    common.add_argument("--max-tones", type=int, help="largest tone count for fig3")
    common.add_argument("--out", help="write output here instead of stdout")

    p = _Parser(prog="specgate", description="Photonic single-qubit gate synthesis with EOMs and pulse shapers.")
    p.add_argument("--version", action="version", version=f"specgate {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    s = sub.add_parser("synth", parents=[common], help="closed-form single-qubit synthesis report (JSON)")
    s.add_argument("--mu", type=float, help="override the modulation index ([PEP] frequency only)")
    f = sub.add_parser("figure", parents=[common], help="emit figure or table data (CSV)")
    f.add_argument("name", choices=FIGURES)
    w = sub.add_parser("sweep", parents=[common], help="parameter sweep (CSV)")
    w.add_argument("parameter", nargs="?", choices=SWEEPS)
    w.add_argument("--start", type=float)
    w.add_argument("--stop", type=float)
    w.add_argument("--steps", type=int)
    sub.add_parser("selftest", help="run the structural invariant suite")
    return p


def _overrides(ns: argparse.Namespace) -> dict:
    o: dict[str, Any] = {}
    for key in ("M", "nu", "config", "encoding", "qubit", "budget", "max_tones", "mu"):
        v = getattr(ns, key, None)
        if v is not None:
            o[key] = v
    if getattr(ns, "out", None):
        o["output"] = ns.out
    if getattr(ns, "abcd", None):
        o["gate"] = dict(zip("abcd", ns.abcd))
    elif getattr(ns, "gate", None):
        o["gate"] = ns.gate
    th = {}
    if getattr(ns, "f_th", None) is not None:
        th["fidelity"] = ns.f_th
    if getattr(ns, "p_th", None) is not None:
        th["success_prob"] = ns.p_th
    if th:
        o["thresholds"] = th
    sw = {k: getattr(ns, k, None) for k in ("start", "stop", "steps")}
    if getattr(ns, "parameter", None):
        sw["parameter"] = ns.parameter
    sw = {k: v for k, v in sw.items() if v is not None}
    if sw:
        o["sweep"] = sw
    return o


def main(argv: Sequence[str] | None = None) -> int:
    ns = build_parser().parse_args(argv)
    try:
        if ns.command == "selftest":
            text, ok = run_selftest()
            sys.stdout.write(text)
            return 0 if ok else 2
        cfg = load_config(ns.config_file, _overrides(ns))
        if ns.command == "synth":
            text, summary = run_synth(cfg)
            emit(text, cfg["output"])
            sys.stderr.write(summary)
        elif ns.command == "figure":
            emit(run_figure(ns.name, cfg), cfg["output"])
        else:
            emit(run_sweep(cfg), cfg["output"])
        return 0
    except UnitarityError as exc:
        sys.stderr.write(f"specgate: numerical failure: {exc}\n")
        return 2
    except (ConfigError, KeyError, TypeError, ValueError) as exc:
        sys.stderr.write(f"specgate: configuration error: {exc}\n")
        return 1
    except SpecgateError as exc:
        sys.stderr.write(f"specgate: numerical failure: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
