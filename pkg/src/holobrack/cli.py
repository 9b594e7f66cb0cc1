"""``holobrack`` command line: classical, brackets, spectra, wavefunctions, quantisation."""
from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, fields

import numpy as np

from . import export
from .ball import (
    BallParams,
    ball_system,
    dirac_table_closed,
    multipliers_closed,
    rest_state,
    theta_A_closed,
)
from .dynamics import eom_vector_field, integrate, intrinsic_acceleration
from .errors import HolobrackError, InconsistentDynamicsError
from .mechanics import dirac_bracket
from .operator_quantize import (
    SYMBOLS,
    build_commutator_table,
    intrinsic_equivalence_check,
    momentum_representation_matrix,
    physical_reduction,
)
from .quantum_spectrum import (
    IntrinsicParams,
    intrinsic_params,
    sample_wavefunction,
    wall_spectrum,
    wedge_spectrum,
)

SCENARIOS = ("classical", "brackets", "spectrum-wall", "spectrum-wedge", "wavefunction", "quantize")

EXIT_OK, EXIT_CHECKS, EXIT_CONFIG, EXIT_DYNAMICS = 0, 1, 2, 3

DEFAULTS = {
    "a": 2.0,
    "m": 1.0,
    "g": 9.8,
    "R": 1.0,
    "phi": math.pi / 4,
    "hbar": 1.0,
    "unit_scale": False,
    "n_max": 6,
    "t_end": 2.0,
    "dt": 1e-3,
    "out": None,
    "format": None,
    "potential": "wall",
}


@dataclass(frozen=True)
class RunConfig:
    scenario: str
    ball: BallParams
    hbar: float
    unit_scale: bool
    n_max: int
    t_end: float
    dt: float
    out: str | None
    format: str
    potential: str

    @classmethod
    def from_mapping(cls, scenario: str, values: dict) -> "RunConfig":
        if scenario not in SCENARIOS:
            raise ValueError(f"unknown scenario {scenario!r}")
        v = {**DEFAULTS, **values}
        unknown = set(values) - set(DEFAULTS)
        if unknown:
            raise ValueError(f"unknown config keys {sorted(unknown)}")
        ball = BallParams(m=v["m"], g=v["g"], R=v["R"], phi=v["phi"], a=v["a"])
        fmt = v["format"] or ("csv" if scenario == "wavefunction" else "json")
        if fmt not in ("json", "csv"):
            raise ValueError("format must be json or csv")
        if fmt == "csv" and scenario not in ("classical", "wavefunction"):
            raise ValueError(f"scenario {scenario} only writes json")
        if int(v["n_max"]) != v["n_max"] or v["n_max"] < 1:
            raise ValueError("n_max must be a positive integer")
        if v["hbar"] <= 0:
            raise ValueError("hbar must be positive")
        if v["t_end"] < 0 or v["dt"] <= 0:
            raise ValueError("need t_end >= 0 and dt > 0")
        if v["potential"] not in ("wall", "wedge"):
            raise ValueError("potential must be wall or wedge")
        return cls(scenario, ball, float(v["hbar"]), bool(v["unit_scale"]), int(v["n_max"]),
                   float(v["t_end"]), float(v["dt"]), v["out"], fmt, v["potential"])


def _ball_obj(b: BallParams) -> dict:
    return {"m": b.m, "g": b.g, "R": b.R, "phi": b.phi, "a": b.a}


def _close(x, y, tol) -> bool:
    return abs(x - y) <= tol * max(abs(y), 1.0)


# -- scenarios --------------------------------------------------------------------

def _constraints_obj(system) -> list:
    return [{"label": c.label, "stage": c.stage_name, "class": c.cls, "expr": c.expr}
            for c in system.constraints]


def _multipliers_obj(system) -> list:
    out = []
    for lab in sorted(system.multipliers):
        m = system.multipliers[lab]
        out.append({
            "label": lab,
            "symbol": m.symbol,
            "kind": m.kind,
            "value": m.expr if m.expr is not None else m.gauge_value,
            "zero_on_surface": m.on_surface_zero,
        })
    return out


def run_classical(cfg: RunConfig):
    system = ball_system(cfg.ball)
    pt0 = rest_state(system)
    traj = integrate(system, pt0, cfg.t_end, cfg.dt)
    acc = eom_vector_field(system).second_derivatives()[system.space.index("x")]
    acc_x = acc(pt0)
    expected = intrinsic_acceleration(cfg.ball)
    checks = {
        "six_constraints": len(system.constraints) == 6,
        "constraint_drift": max(traj.drift.values()) < 1e-6,
        "energy_conserved": traj.energy_drift < 1e-6,
        "acceleration_matches_intrinsic": _close(acc_x, expected, 1e-9),
    }
    report = {
        "scenario": "classical",
        "params": _ball_obj(cfg.ball),
        "iterations": system.iterations,
        "constraints": _constraints_obj(system),
        "multipliers": _multipliers_obj(system),
        "acceleration_x": {"dirac": acc_x, "intrinsic": expected},
        "trajectory": {
            "steps": len(traj.times) - 1,
            "t_end": float(traj.times[-1]),
            "drift": {str(k): v for k, v in traj.drift.items()},
            "energy_drift": traj.energy_drift,
            "final_state": dict(zip(traj.names, traj.states[-1])),
        },
        "checks": checks,
    }
    if cfg.format == "csv":
        return traj.to_csv(), checks, report
    report["trajectory"]["columns"] = traj.csv_header()
    report["trajectory"]["rows"] = [list(r) for r in traj.rows()]
    return export.dumps(report), checks, None


def run_brackets(cfg: RunConfig):
    system = ball_system(cfg.ball)
    theta = system.theta
    space = system.space
    table = {}
    for i, a in enumerate(SYMBOLS):
        for b in SYMBOLS[i + 1:]:
            table[f"{{{a},{b}}}"] = dirac_bracket(space.var(a), space.var(b), system).constant()
    closed = dirac_table_closed(cfg.ball)
    chi = multipliers_closed(cfg.ball)
    checks = {
        "theta_antisymmetric": bool(np.array_equal(theta.entries, -theta.entries.T)),
        "theta_rank_4": theta.rank == 4,
        "theta_A": bool(np.allclose(theta.submatrix((5, 6), (1, 2)), theta_A_closed(cfg.ball),
                                    rtol=0, atol=1e-12)),
        "multipliers": all(_close(system.multipliers[l].constant_value, v, 1e-10)
                           for l, v in zip((1, 2), chi)),
        "dirac_table": all(_close(table[f"{{{a},{b}}}"] if f"{{{a},{b}}}" in table
                                  else -table[f"{{{b},{a}}}"], v, 1e-10)
                           for (a, b), v in closed.items()),
    }
    report = {
        "scenario": "brackets",
        "params": _ball_obj(cfg.ball),
        "theta": {
            "labels": list(theta.labels),
            "entries": theta.entries,
            "rank": theta.rank,
            "blocks": [{"labels": list(b.labels), "inverse": b.inverse} for b in theta.blocks],
            "theta_A": theta.submatrix((5, 6), (1, 2)),
        },
        "constraints": _constraints_obj(system),
        "multipliers": _multipliers_obj(system),
        "dirac_brackets": table,
        "checks": checks,
    }
    return export.dumps(report), checks, None


def _intrinsic(cfg: RunConfig) -> IntrinsicParams:
    return IntrinsicParams.unit_scale() if cfg.unit_scale else intrinsic_params(cfg.ball, cfg.hbar)


def _params_obj(p: IntrinsicParams) -> dict:
    return {"M": p.M, "f": p.f, "hbar": p.hbar, "eps": p.eps, "ell": p.ell}


def run_spectrum(cfg: RunConfig):
    params = _intrinsic(cfg)
    wedge = cfg.scenario == "spectrum-wedge"
    levels = (wedge_spectrum if wedge else wall_spectrum)(params, cfg.n_max)
    energies = [e.energy for e in levels]
    checks = {
        "ascending": all(b > a for a, b in zip(energies, energies[1:])),
        "energy_is_eps_times_root": all(_close(e.energy, params.eps * abs(e.root), 1e-12)
                                        for e in levels),
        "norm_positive": all(e.norm_sq > 0 for e in levels),
    }
    if wedge:
        checks["ground_state_even"] = levels[0].parity == "even"
    report = {
        "scenario": cfg.scenario,
        "unit_scale": cfg.unit_scale,
        "params": _params_obj(params),
        "levels": [e.as_dict() for e in levels],
        "checks": checks,
    }
    if wedge:
        report["metadata"] = {
            "order": "ascending energy",
            "literature_labels": {str(e.rank): e.literature_label for e in levels},
        }
    return export.dumps(report), checks, None


def run_wavefunction(cfg: RunConfig):
    params = _intrinsic(cfg)
    levels = (wedge_spectrum if cfg.potential == "wedge" else wall_spectrum)(params, cfg.n_max)
    pair = levels[-1]
    xs, psi = sample_wavefunction(pair, params)
    dens = psi * psi
    area = float(np.sum((dens[1:] + dens[:-1]) * np.diff(xs)) / 2)
    checks = {"normalized_trapezoid": abs(area - 1.0) < 1e-3, "density_nonnegative": bool((dens >= 0).all())}
    if cfg.format == "csv":
        return export.csv_text(["x", "psi", "density"], zip(xs, psi, dens)), checks, None
    report = {
        "scenario": "wavefunction",
        "potential": cfg.potential,
        "params": _params_obj(params),
        "level": pair.as_dict(),
        "x": xs,
        "psi": psi,
        "density": dens,
        "checks": checks,
    }
    return export.dumps(report), checks, None


def run_quantize(cfg: RunConfig):
    system = ball_system(cfg.ball)
    table = build_commutator_table(system, cfg.hbar)
    M, rank = momentum_representation_matrix(system)
    red = physical_reduction(cfg.ball, cfg.hbar)
    eq = intrinsic_equivalence_check(cfg.ball, cfg.hbar)
    report = {
        "scenario": "quantize",
        "params": _ball_obj(cfg.ball),
        "hbar": cfg.hbar,
        "commutator_table": {f"[{a},{b}]": v * cfg.hbar for (a, b), v in table.entries.items()},
        "representation_matrix": M,
        "rank": rank,
        "reduced_coefficients": {"kinetic": red.kinetic, "potential": red.potential,
                                 "ratios": red.ratios},
        "equivalence": {k: ("pass" if v else "fail") for k, v in eq["checks"].items()},
    }
    return export.dumps(report), eq["checks"], None


RUNNERS = {
    "classical": run_classical,
    "brackets": run_brackets,
    "spectrum-wall": run_spectrum,
    "spectrum-wedge": run_spectrum,
    "wavefunction": run_wavefunction,
    "quantize": run_quantize,
}


def run(cfg: RunConfig, stdout=None, stderr=None) -> int:
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    try:
        text, checks, side = RUNNERS[cfg.scenario](cfg)
    except InconsistentDynamicsError as exc:
        print(f"holobrack: inconsistent dynamics: {exc}", file=stderr)
        return EXIT_DYNAMICS
    except HolobrackError as exc:
        print(f"holobrack: {type(exc).__name__}: {exc}", file=stderr)
        return EXIT_CHECKS
    if cfg.out:
        with open(cfg.out, "w", newline="\n", encoding="utf-8") as fh:
            fh.write(text)
    else:
        stdout.write(text)
    if side is not None:
        stderr.write(export.dumps(side))
    failed = [k for k, ok in checks.items() if not ok]
    if failed:
        print(f"holobrack: failed checks: {', '.join(failed)}", file=stderr)
        return EXIT_CHECKS
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="holobrack", description=__doc__)
    ap.add_argument("scenario", choices=SCENARIOS)
    ap.add_argument("--a", type=float, help="shape selector: 0 hollow, 2 solid")
    ap.add_argument("--m", type=float, help="mass")
    ap.add_argument("--g", type=float, help="gravitational acceleration")
    ap.add_argument("--R", type=float, help="radius")
    ap.add_argument("--phi", type=float, help="incline angle in radians")
    ap.add_argument("--hbar", type=float)
    ap.add_argument("--unit-scale", dest="unit_scale", action="store_const", const=True,
                    help="spectra in units where the energy and length scales are 1")
    ap.add_argument("-n", "--n-max", dest="n_max", type=int, help="number of levels (level index for wavefunction)")
    ap.add_argument("--t-end", dest="t_end", type=float)
    ap.add_argument("--dt", type=float)
    ap.add_argument("--potential", choices=("wall", "wedge"), help="wavefunction potential")
    ap.add_argument("--out", help="output file (default stdout)")
    ap.add_argument("--format", choices=("json", "csv"))
    ap.add_argument("--config", help="JSON file with any of the options above; flags win")
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    values = {}
    try:
        if args.config:
            with open(args.config, encoding="utf-8") as fh:
                values.update(json.load(fh))
        values.pop("scenario", None)
        values.update({f.name: getattr(args, f.name) for f in fields(RunConfig)
                       if f.name in DEFAULTS and getattr(args, f.name, None) is not None})
        for k in ("a", "m", "g", "R", "phi"):
            if getattr(args, k) is not None:
                values[k] = getattr(args, k)
        cfg = RunConfig.from_mapping(args.scenario, values)
    except (OSError, ValueError, TypeError) as exc:
        print(f"holobrack: invalid configuration: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
