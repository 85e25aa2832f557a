"""Command-line front end.

Commands: equilibria, stability, simulate, portrait, sweep, verify.
Parameters come from flags, from a JSON config file (flags win), or
from the built-in benchmark defaults.  Exit codes: 0 success, 1
verification failure, 2 configuration error, 3 runtime/domain error.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from .convergence import ConvergenceSettings, Trajectory, Verdict, VerdictStatus
from .equilibria import Equilibrium, EquilibriumKind, all_equilibria, reproduction_numbers
from .harness import INITIAL_POINT_PRESETS, step_size_sweep
from .integrators import ContinuousRun, simulate_continuous
from .model import (
    BlowUpError,
    DomainError,
    HostParams,
    ModelVariant,
    State,
    VariantParameterError,
    validate_params,
)
from .nsfd import iterate
from .stability import Regime, stability_report
from .verification import Scenario, acceptance_check_names, run_acceptance

__all__ = ["RunConfig", "main"]

SEED_DIR_ENV = "NSFD_EPI_SEED_DIR"

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_CONFIG = 2
EXIT_RUNTIME = 3


class ConfigError(Exception):
    pass


@dataclass
class RunConfig:
    """Everything a command needs; round-trips through JSON losslessly."""

    model: str = "general"
    scheme: str = "nsfd"
    bx: float = 0.6
    by: float = 0.4
    ux: float = 0.1
    uy: float = 0.2
    K: float = 1.0
    e: float = 0.02
    beta: float = 0.1
    h: float = 0.1
    h_list: list[float] = field(default_factory=list)
    dt: float = 0.01
    initial_points: list[list[float]] = field(default_factory=list)
    preset: str | None = None
    steps: int = 100_000
    tol_eq: float = 1e-3
    tol_step: float = 1e-10
    window: int = 50
    format: str = "text"
    out: str | None = None
    permissive: bool = False

    _FLOAT_FIELDS = frozenset({"bx", "by", "ux", "uy", "K", "e", "beta", "h", "dt", "tol_eq", "tol_step"})
    _INT_FIELDS = frozenset({"steps", "window"})
    _STR_FIELDS = frozenset({"model", "scheme", "format"})

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "RunConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        coerced = {}
        for key, value in data.items():
            try:
                if key in cls._FLOAT_FIELDS:
                    coerced[key] = float(value)
                elif key in cls._INT_FIELDS:
                    coerced[key] = int(value)
                elif key in cls._STR_FIELDS:
                    coerced[key] = str(value)
                elif key == "permissive":
                    coerced[key] = bool(value)
                elif key == "h_list":
                    coerced[key] = [float(v) for v in value]
                elif key == "initial_points":
                    coerced[key] = [[float(x), float(y)] for x, y in value]
                else:  # preset, out: optional strings
                    coerced[key] = None if value is None else str(value)
            except (TypeError, ValueError) as exc:
                raise ConfigError(f"bad config value for {key!r}: {value!r} ({exc})") from None
        return cls(**coerced)

    def params(self) -> HostParams:
        return HostParams(b_x=self.bx, b_y=self.by, u_x=self.ux, u_y=self.uy, K=self.K, e=self.e, beta=self.beta)

    def variant(self) -> ModelVariant:
        try:
            return ModelVariant(self.model)
        except ValueError:
            raise ConfigError(f"unknown model {self.model!r} (general, horizontal, vertical)") from None

    def settings(self) -> ConvergenceSettings:
        try:
            return ConvergenceSettings(tol_step=self.tol_step, window=self.window, tol_eq=self.tol_eq)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None

    def points(self) -> list[State]:
        if self.preset is not None:
            try:
                return list(INITIAL_POINT_PRESETS[self.preset])
            except KeyError:
                raise ConfigError(
                    f"unknown preset {self.preset!r} (available: {sorted(INITIAL_POINT_PRESETS)})"
                ) from None
        if self.initial_points:
            return [State(float(x), float(y)) for x, y in self.initial_points]
        return [State(0.1, 0.1)]


def _fmt(x: float) -> str:
    return repr(float(x))


def _build_config(args: argparse.Namespace) -> RunConfig:
    config = RunConfig()
    if getattr(args, "config", None):
        path = Path(args.config)
        if not path.exists():
            raise ConfigError(f"config file {path} does not exist")
        try:
            data = json.loads(path.read_text())
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config file {path} is not valid JSON: {exc}") from None
        if not isinstance(data, dict):
            raise ConfigError(f"config file {path} must hold a JSON object")
        config = RunConfig.from_dict({**config.to_dict(), **data})
    flag_to_field = {
        "model": "model",
        "scheme": "scheme",
        "bx": "bx",
        "by": "by",
        "ux": "ux",
        "uy": "uy",
        "K": "K",
        "e": "e",
        "beta": "beta",
        "dt": "dt",
        "preset": "preset",
        "steps": "steps",
        "tol_eq": "tol_eq",
        "tol_step": "tol_step",
        "window": "window",
        "format": "format",
        "out": "out",
    }
    for flag, name in flag_to_field.items():
        value = getattr(args, flag, None)
        if value is not None:
            setattr(config, name, value)
    if getattr(args, "permissive", False):
        config.permissive = True
    h_values = getattr(args, "h", None)
    if h_values:
        config.h = h_values[-1]
        config.h_list = list(h_values)
    x0 = getattr(args, "x0", None) or []
    y0 = getattr(args, "y0", None) or []
    if len(x0) != len(y0):
        raise ConfigError(f"--x0 given {len(x0)} times but --y0 {len(y0)} times")
    if x0:
        config.initial_points = [[x, y] for x, y in zip(x0, y0)]
    return config


def _check_params(config: RunConfig) -> None:
    mode = "permissive" if config.permissive else "strict"
    violations = validate_params(config.params(), mode)
    if violations:
        for v in violations:
            print(f"error: parameter violation: {v}", file=sys.stderr)
        raise ConfigError("invalid parameters")
    if config.permissive:
        downgraded = [v for v in validate_params(config.params(), "strict")]
        for v in downgraded:
            print(f"warning: {v}", file=sys.stderr)


def _emit(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
    else:
        Path(out).write_text(text if text.endswith("\n") else text + "\n")


def _verdict_dict(verdict: Verdict) -> dict[str, Any]:
    data: dict[str, Any] = {"status": verdict.status.value, "at_step": verdict.at_step}
    if verdict.kind is not None:
        data["equilibrium"] = verdict.kind.value
        data["point"] = [verdict.point.X, verdict.point.Y]
    return data


def _verdict_comment(verdict: Verdict) -> str:
    parts = [f"# verdict={verdict.status.value}", f"n={verdict.at_step}"]
    if verdict.kind is not None:
        parts.append(f"equilibrium={verdict.kind.value}")
        parts.append(f"X={_fmt(verdict.point.X)}")
        parts.append(f"Y={_fmt(verdict.point.Y)}")
    return " ".join(parts)


def _num(x: float) -> float | None:
    return None if math.isnan(x) else float(x)


def _eq_dict(eq: Equilibrium) -> dict[str, Any]:
    return {
        "kind": eq.kind.value,
        "point": [_num(eq.point.X), _num(eq.point.Y)],
        "exists": eq.exists,
        "conditions": [
            {"name": c.name, "holds": c.holds, "margin": _num(c.margin)} for c in eq.conditions
        ],
    }


# ---------------------------------------------------------------------------
# commands


def _cmd_equilibria(config: RunConfig) -> int:
    _check_params(config)
    params, variant = config.params(), config.variant()
    equilibria = all_equilibria(params, variant)
    r = reproduction_numbers(params)
    if config.format == "json":
        doc = {
            "model": variant.value,
            "params": _params_dict(config),
            "reproduction": {"V0": r.V0, "H0": r.H0, "R0": r.R0, "xbar_negative": r.xbar_negative},
            "equilibria": [_eq_dict(eq) for eq in equilibria],
        }
        _emit(json.dumps(doc, indent=2), config.out)
        return EXIT_OK
    if config.format == "csv":
        lines = [f"# model={variant.value} " + " ".join(f"{k}={_fmt(v)}" for k, v in _params_dict(config).items())]
        lines.append(f"# V0={_fmt(r.V0)} H0={_fmt(r.H0)} R0={_fmt(r.R0)}")
        lines.append("kind,X,Y,exists,failed_conditions")
        for eq in equilibria:
            failed = ";".join(c.name for c in eq.failed_conditions())
            lines.append(f"{eq.kind.value},{_fmt(eq.point.X)},{_fmt(eq.point.Y)},{int(eq.exists)},{failed}")
        _emit("\n".join(lines), config.out)
        return EXIT_OK
    # plain text table
    lines = [f"model: {variant.value}", f"R0 = {r.R0:.6g} (V0 = {r.V0:.6g}, H0 = {r.H0:.6g})"]
    for eq in equilibria:
        status = "exists" if eq.exists else "does not exist"
        lines.append(f"  {eq.kind.value:17s} ({eq.point.X:.6g}, {eq.point.Y:.6g})  {status}")
        for c in eq.conditions:
            mark = "ok" if c.holds else "FAILS"
            lines.append(f"      {c.name:45s} {mark:5s} margin {c.margin:+.4g}")
    _emit("\n".join(lines), config.out)
    return EXIT_OK


def _params_dict(config: RunConfig) -> dict[str, float]:
    return {
        "bx": config.bx,
        "by": config.by,
        "ux": config.ux,
        "uy": config.uy,
        "K": config.K,
        "e": config.e,
        "beta": config.beta,
    }


def _report_dict(report) -> dict[str, Any]:
    return {
        "regime": report.regime.value,
        "h": report.h,
        "eigenvalues": [[z.real, z.imag] for z in report.eigenvalues],
        "classification": report.classification.value,
        "theorem_prediction": report.prediction.value,
        "agree": report.agree,
        "notes": list(report.notes),
    }


def _cmd_stability(config: RunConfig) -> int:
    _check_params(config)
    params, variant = config.params(), config.variant()
    h_list = config.h_list or [config.h]
    entries = []
    for eq in all_equilibria(params, variant):
        reports = []
        if eq.exists:
            reports.append(stability_report(params, variant, eq, Regime.CONTINUOUS))
            reports.extend(stability_report(params, variant, eq, Regime.DISCRETE, h=h) for h in h_list)
        entries.append((eq, reports))
    if config.format == "json":
        doc = {
            "model": variant.value,
            "params": _params_dict(config),
            "h_list": h_list,
            "equilibria": [
                {"equilibrium": _eq_dict(eq), "reports": [_report_dict(r) for r in reports]}
                for eq, reports in entries
            ],
        }
        _emit(json.dumps(doc, indent=2), config.out)
        return EXIT_OK
    if config.format == "csv":
        lines = ["kind,regime,h,lambda1_re,lambda1_im,lambda2_re,lambda2_im,classification,theorem,agree"]
        for eq, reports in entries:
            for rep in reports:
                l1, l2 = rep.eigenvalues
                lines.append(
                    f"{eq.kind.value},{rep.regime.value},{'' if rep.h is None else _fmt(rep.h)},"
                    f"{_fmt(l1.real)},{_fmt(l1.imag)},{_fmt(l2.real)},{_fmt(l2.imag)},"
                    f"{rep.classification.value},{rep.prediction.value},{int(rep.agree)}"
                )
        _emit("\n".join(lines), config.out)
        return EXIT_OK
    lines = [f"model: {variant.value}  (h tested: {', '.join(_fmt(h) for h in h_list)})"]
    for eq, reports in entries:
        lines.append(
            f"  {eq.kind.value:17s} ({eq.point.X:.6g}, {eq.point.Y:.6g})"
            + ("" if eq.exists else "  [does not exist]")
        )
        for rep in reports:
            eig_txt = ", ".join(
                f"{z.real:+.5g}" + (f"{z.imag:+.5g}i" if z.imag else "") for z in rep.eigenvalues
            )
            h_txt = "continuous" if rep.h is None else f"discrete h={rep.h:g}"
            agree = "agrees" if rep.agree else ("n/a" if rep.prediction.value == "not_covered" else "DISAGREES")
            lines.append(
                f"      {h_txt:18s} eig [{eig_txt}]  {rep.classification.value:13s} "
                f"theorem: {rep.prediction.value:11s} {agree}"
            )
        for rep in reports[:1]:
            for note in rep.notes:
                lines.append(f"      note: {note}")
    _emit("\n".join(lines), config.out)
    return EXIT_OK


def _simulate_one(config: RunConfig, s0: State):
    params, variant = config.params(), config.variant()
    settings = config.settings()
    if config.scheme == "nsfd":
        if config.steps == 0:
            return Trajectory(
                h=config.h,
                steps=np.asarray([0]),
                times=np.asarray([0.0]),
                states=np.asarray([[s0.X, s0.Y]], dtype=float),
                verdict=Verdict(VerdictStatus.MAX_STEPS, at_step=0),
            )
        return iterate(params, variant, config.h, s0, config.steps, settings=settings)
    if config.scheme in ("rk4", "euler"):
        if config.steps == 0:
            return ContinuousRun(
                dt=config.dt,
                t_max=0.0,
                steps=np.asarray([0]),
                times=np.asarray([0.0]),
                states=np.asarray([[s0.X, s0.Y]], dtype=float),
                verdict=Verdict(VerdictStatus.MAX_STEPS, at_step=0),
            )
        return simulate_continuous(
            params,
            variant,
            s0,
            dt=config.dt,
            t_max=config.steps * config.dt,
            settings=settings,
            scheme=config.scheme,
        )
    raise ConfigError(f"unknown scheme {config.scheme!r} (nsfd, rk4, euler)")


def _trajectory_csv(config: RunConfig, s0: State, run) -> str:
    meta = _params_dict(config)
    step_txt = f"h={_fmt(config.h)}" if config.scheme == "nsfd" else f"dt={_fmt(config.dt)}"
    lines = [
        "# nsfd-epi simulate",
        f"# model={config.model} scheme={config.scheme} {step_txt} steps={config.steps} "
        + " ".join(f"{k}={_fmt(v)}" for k, v in meta.items())
        + f" x0={_fmt(s0.X)} y0={_fmt(s0.Y)}",
        "n,t,X,Y",
    ]
    for n, t, (x, y) in zip(run.steps, run.times, run.states):
        lines.append(f"{int(n)},{_fmt(t)},{_fmt(x)},{_fmt(y)}")
    lines.append(_verdict_comment(run.verdict))
    return "\n".join(lines)


def _trajectory_json(config: RunConfig, s0: State, run) -> dict[str, Any]:
    return {
        "config": config.to_dict(),
        "initial": [s0.X, s0.Y],
        "n": [int(n) for n in run.steps],
        "t": [float(t) for t in run.times],
        "X": [float(x) for x in run.states[:, 0]],
        "Y": [float(y) for y in run.states[:, 1]],
        "verdict": _verdict_dict(run.verdict),
    }


def _cmd_simulate(config: RunConfig) -> int:
    _check_params(config)
    points = config.points()
    if len(points) != 1:
        raise ConfigError("simulate takes exactly one initial point; use portrait for several")
    run = _simulate_one(config, points[0])
    if config.format == "json":
        _emit(json.dumps(_trajectory_json(config, points[0], run), indent=2), config.out)
    else:
        _emit(_trajectory_csv(config, points[0], run), config.out)
    return EXIT_OK


def _cmd_portrait(config: RunConfig) -> int:
    _check_params(config)
    points = config.points()
    runs = [(s0, _simulate_one(config, s0)) for s0 in points]
    if config.format == "json":
        doc = {
            "config": config.to_dict(),
            "trajectories": [_trajectory_json(config, s0, run) for s0, run in runs],
        }
        _emit(json.dumps(doc, indent=2), config.out)
        return EXIT_OK
    if config.out is None:
        raise ConfigError("portrait with csv output needs --out DIRECTORY")
    out_dir = Path(config.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    index_lines = ["point,x0,y0,file,verdict,final_X,final_Y"]
    for i, (s0, run) in enumerate(runs, start=1):
        fname = f"trajectory_{i:02d}.csv"
        (out_dir / fname).write_text(_trajectory_csv(config, s0, run) + "\n")
        final = run.final_state
        index_lines.append(
            f"{i},{_fmt(s0.X)},{_fmt(s0.Y)},{fname},{run.verdict.status.value},{_fmt(final.X)},{_fmt(final.Y)}"
        )
    (out_dir / "index.csv").write_text("\n".join(index_lines) + "\n")
    print(f"wrote {len(runs)} trajectories and index.csv to {out_dir}")
    return EXIT_OK


def _cmd_sweep(config: RunConfig) -> int:
    _check_params(config)
    params, variant = config.params(), config.variant()
    h_list = config.h_list or [0.01, 0.1, 1.0, 10.0, 50.0]
    results = []
    for eq in all_equilibria(params, variant):
        if not eq.exists:
            continue
        results.append(step_size_sweep(params, variant, eq, h_list))
    if config.format == "json":
        doc = {
            "model": variant.value,
            "params": _params_dict(config),
            "h_list": h_list,
            "equilibria": [
                {
                    "kind": res.equilibrium.kind.value,
                    "point": [res.equilibrium.point.X, res.equilibrium.point.Y],
                    "continuous": res.continuous.value,
                    "per_h": [{"h": en.h, "classification": en.classification.value} for en in res.entries],
                    "uniform": res.uniform,
                    "matches_continuous": res.matches_continuous,
                }
                for res in results
            ],
            "all_uniform": all(res.uniform for res in results),
        }
        _emit(json.dumps(doc, indent=2), config.out)
        return EXIT_OK
    if config.format == "csv":
        lines = ["kind,h,classification,continuous,uniform"]
        for res in results:
            for en in res.entries:
                lines.append(
                    f"{res.equilibrium.kind.value},{_fmt(en.h)},{en.classification.value},"
                    f"{res.continuous.value},{int(res.uniform)}"
                )
        _emit("\n".join(lines), config.out)
        return EXIT_OK
    lines = [f"model: {variant.value}  (h: {', '.join(_fmt(h) for h in h_list)})"]
    for res in results:
        flag = "h-independent" if res.uniform else "VARIES WITH h"
        match = "matches continuous" if res.matches_continuous else f"continuous is {res.continuous.value}"
        lines.append(f"  {res.equilibrium.kind.value:17s} {res.entries[0].classification.value:13s} {flag}; {match}")
    _emit("\n".join(lines), config.out)
    return EXIT_OK


def _load_fixture_scenarios() -> list[Scenario]:
    seed_dir = os.environ.get(SEED_DIR_ENV)
    if not seed_dir:
        return []
    path = Path(seed_dir)
    if not path.is_dir():
        raise ConfigError(f"{SEED_DIR_ENV}={seed_dir} is not a directory")
    scenarios = []
    for file in sorted(path.glob("*.json")):
        try:
            data = json.loads(file.read_text())
            params = data["params"]
            scenarios.append(
                Scenario(
                    name=data["name"],
                    params=HostParams(
                        b_x=params["bx"],
                        b_y=params["by"],
                        u_x=params["ux"],
                        u_y=params["uy"],
                        K=params["K"],
                        e=params.get("e", 0.0),
                        beta=params.get("beta", 0.0),
                    ),
                    variant=ModelVariant(data["model"]),
                    expected_kind=EquilibriumKind(data["expected_kind"]),
                    expected_point=tuple(data["expected_point"]),
                    h=data.get("h", 0.1),
                    dt=data.get("dt", 0.01),
                    t_max=data.get("t_max", 2000.0),
                    max_steps=data.get("max_steps", 100_000),
                )
            )
        except (KeyError, ValueError, TypeError) as exc:
            raise ConfigError(f"bad scenario fixture {file}: {exc}") from None
    return scenarios


def _cmd_verify(args: argparse.Namespace) -> int:
    extra = _load_fixture_scenarios()
    only = args.only
    if args.list:
        for name in acceptance_check_names(extra):
            if only is None or only in name:
                print(name)
        return EXIT_OK
    match_tol = args.tol_eq if args.tol_eq is not None else 1e-3
    results = run_acceptance(match_tol=match_tol, only=only, extra_scenarios=extra)
    if not results:
        print(f"no checks match --only {only!r}", file=sys.stderr)
        return EXIT_CONFIG
    width = max(len(r.name) for r in results)
    for r in results:
        print(f"{'PASS' if r.passed else 'FAIL'}  {r.name:{width}s}  {r.details}")
    failed = sum(not r.passed for r in results)
    print(f"{len(results) - failed}/{len(results)} checks passed")
    return EXIT_OK if failed == 0 else EXIT_VERIFY_FAILED


# ---------------------------------------------------------------------------
# argument parsing


def _add_param_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--model", choices=["general", "horizontal", "vertical"], default=None)
    parser.add_argument("--bx", type=float, default=None, help="birth rate of uninfected hosts")
    parser.add_argument("--by", type=float, default=None, help="birth rate of infected hosts")
    parser.add_argument("--ux", type=float, default=None, help="death rate of uninfected hosts")
    parser.add_argument("--uy", type=float, default=None, help="death rate of infected hosts")
    parser.add_argument("--K", type=float, default=None, help="carrying capacity")
    parser.add_argument("--e", type=float, default=None, help="uninfected-offspring rate of infected hosts")
    parser.add_argument("--beta", type=float, default=None, help="horizontal transmission coefficient")
    parser.add_argument("--permissive", action="store_true", help="downgrade biological-plausibility checks to warnings")
    parser.add_argument("--config", default=None, help="JSON config file; explicit flags override it")
    parser.add_argument("--format", choices=["csv", "json", "text"], default=None)
    parser.add_argument("--out", default=None, help="output file (or directory for portrait); default stdout")


def _add_run_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--scheme", choices=["nsfd", "rk4", "euler"], default=None)
    parser.add_argument("--h", type=float, action="append", default=None, help="discrete step size")
    parser.add_argument("--dt", type=float, default=None, help="continuous step size")
    parser.add_argument("--x0", type=float, action="append", default=None, help="initial X (repeatable)")
    parser.add_argument("--y0", type=float, action="append", default=None, help="initial Y (repeatable)")
    parser.add_argument("--preset", default=None, help="named initial-point set (e.g. paper-initials)")
    parser.add_argument("--steps", type=int, default=None, help="maximum number of steps")
    parser.add_argument("--tol-eq", dest="tol_eq", type=float, default=None, help="equilibrium match radius")
    parser.add_argument("--tol-step", dest="tol_step", type=float, default=None, help="quiescence threshold")
    parser.add_argument("--window", type=int, default=None, help="quiet steps required before declaring convergence")


def _make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nsfd-epi",
        description="Host-parasite epidemic models: equilibria, stability, and positivity-preserving simulation.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_eq = sub.add_parser("equilibria", help="list equilibria with existence conditions and R0")
    _add_param_flags(p_eq)

    p_st = sub.add_parser("stability", help="eigenvalue classification and theorem cross-check per equilibrium")
    _add_param_flags(p_st)
    p_st.add_argument("--h", type=float, action="append", default=None, help="discrete step size (repeatable)")

    p_sim = sub.add_parser("simulate", help="run one trajectory and write n,t,X,Y output")
    _add_param_flags(p_sim)
    _add_run_flags(p_sim)

    p_por = sub.add_parser("portrait", help="run several trajectories (phase portrait data)")
    _add_param_flags(p_por)
    _add_run_flags(p_por)

    p_sw = sub.add_parser("sweep", help="discrete classification across step sizes")
    _add_param_flags(p_sw)
    p_sw.add_argument("--h", type=float, action="append", default=None, help="step size (repeatable)")

    p_ver = sub.add_parser("verify", help="run the acceptance scenarios; exit 0 iff all pass")
    p_ver.add_argument("--list", action="store_true", help="list scenario checks without running")
    p_ver.add_argument("--only", default=None, help="run only checks whose name contains this substring")
    p_ver.add_argument(
        "--tol-eq",
        dest="tol_eq",
        type=float,
        default=None,
        help="equilibrium match tolerance for convergence scenarios (default 1e-3)",
    )
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = _make_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "verify":
            return _cmd_verify(args)
        config = _build_config(args)
        if args.command == "equilibria":
            return _cmd_equilibria(config)
        if args.command == "stability":
            return _cmd_stability(config)
        if args.command == "simulate":
            return _cmd_simulate(config)
        if args.command == "portrait":
            return _cmd_portrait(config)
        if args.command == "sweep":
            return _cmd_sweep(config)
        raise ConfigError(f"unknown command {args.command!r}")
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (DomainError, VariantParameterError, BlowUpError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
