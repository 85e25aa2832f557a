"""Acceptance scenarios and the checks behind the ``verify`` command.

Each check is deterministic (randomized ones use fixed seeds) and
desk-scale.  The benchmark parameter set is b_x=0.6, b_y=0.4, u_x=0.1,
u_y=0.2 with K=1, e=0.02 for the general model and K=1.2, e=0 for the
sub-models; expected limits are quoted to the four decimals used in
the benchmark phase portraits, hence the default match tolerance of
1e-3.  Tightening the match tolerance below the quoting precision
(e.g. ``verify --tol-eq 1e-9``) is the documented forced-failure demo.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .equilibria import (
    EquilibriumKind,
    all_equilibria,
    interior_coefficients,
    interior_equilibrium,
    reproduction_numbers,
)
from .harness import PRESET_INITIAL_POINTS, first_negative_step, step_size_sweep
from .integrators import _rk4_kernel, simulate_continuous
from .model import HostParams, ModelVariant, State, validate_params, vector_field
from .nsfd import denominators, iterate, step
from .stability import (
    Classification,
    Matrix2,
    Regime,
    TheoremPrediction,
    jury_conditions,
    prediction_matches,
    stability_conditions,
    stability_report,
)

__all__ = [
    "CheckResult",
    "Scenario",
    "SCENARIOS",
    "acceptance_check_names",
    "benchmark_params",
    "run_acceptance",
]

SEED = 987134834

SWEEP_H_LIST = (0.01, 0.1, 1.0, 10.0, 50.0)


def benchmark_params(variant: ModelVariant, beta: float) -> HostParams:
    """The benchmark parameter set for a variant, at a given beta."""
    if variant is ModelVariant.GENERAL:
        return HostParams(b_x=0.6, b_y=0.4, u_x=0.1, u_y=0.2, K=1.0, e=0.02, beta=beta)
    return HostParams(b_x=0.6, b_y=0.4, u_x=0.1, u_y=0.2, K=1.2, e=0.0, beta=beta)


@dataclass(frozen=True)
class Scenario:
    """A convergence benchmark: all preset starts reach one equilibrium."""

    name: str
    params: HostParams
    variant: ModelVariant
    expected_kind: EquilibriumKind
    expected_point: tuple[float, float]
    h: float = 0.1
    dt: float = 0.01
    t_max: float = 2000.0
    max_steps: int = 100_000
    initial_points: tuple[State, ...] = PRESET_INITIAL_POINTS


SCENARIOS: tuple[Scenario, ...] = (
    Scenario(
        "general-disease-free",
        benchmark_params(ModelVariant.GENERAL, 0.1),
        ModelVariant.GENERAL,
        EquilibriumKind.DISEASE_FREE,
        (0.8333, 0.0),
    ),
    Scenario(
        "general-endemic",
        benchmark_params(ModelVariant.GENERAL, 0.3),
        ModelVariant.GENERAL,
        EquilibriumKind.INTERIOR,
        (0.1818, 0.4545),
    ),
    Scenario(
        "horizontal-disease-free",
        benchmark_params(ModelVariant.HORIZONTAL, 0.1),
        ModelVariant.HORIZONTAL,
        EquilibriumKind.DISEASE_FREE,
        (1.0, 0.0),
    ),
    Scenario(
        "horizontal-endemic",
        benchmark_params(ModelVariant.HORIZONTAL, 0.3),
        ModelVariant.HORIZONTAL,
        EquilibriumKind.INTERIOR,
        (0.0476, 0.5952),
    ),
    Scenario(
        "horizontal-susceptible-free",
        benchmark_params(ModelVariant.HORIZONTAL, 0.42),
        ModelVariant.HORIZONTAL,
        EquilibriumKind.SUSCEPTIBLE_FREE,
        (0.0, 0.6),
    ),
    Scenario(
        "vertical-disease-free",
        benchmark_params(ModelVariant.VERTICAL, 0.0),
        ModelVariant.VERTICAL,
        EquilibriumKind.DISEASE_FREE,
        (1.0, 0.0),
    ),
)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    details: str


def _fail(name: str, details: str) -> CheckResult:
    return CheckResult(name, False, details)


def _ok(name: str, details: str) -> CheckResult:
    return CheckResult(name, True, details)


def convergence_check(scenario: Scenario, match_tol: float = 1e-3) -> CheckResult:
    """Both schemes reach the scenario's equilibrium from every start."""
    name = f"converges:{scenario.name}"
    worst = 0.0
    ex, ey = scenario.expected_point
    for s0 in scenario.initial_points:
        run = simulate_continuous(scenario.params, scenario.variant, s0, dt=scenario.dt, t_max=scenario.t_max)
        if not run.verdict.converged:
            return _fail(name, f"continuous run from {tuple(s0)} ended {run.verdict.status.value}")
        d = max(abs(run.final_state.X - ex), abs(run.final_state.Y - ey))
        worst = max(worst, d)
        if d > match_tol:
            return _fail(name, f"continuous run from {tuple(s0)} ended at {tuple(run.final_state)}, off by {d:.3g}")
        traj = iterate(scenario.params, scenario.variant, scenario.h, s0, scenario.max_steps)
        if not traj.verdict.converged:
            return _fail(name, f"discrete run from {tuple(s0)} ended {traj.verdict.status.value}")
        d = max(abs(traj.final_state.X - ex), abs(traj.final_state.Y - ey))
        worst = max(worst, d)
        if d > match_tol:
            return _fail(name, f"discrete run from {tuple(s0)} ended at {tuple(traj.final_state)}, off by {d:.3g}")
    return _ok(
        name,
        f"{2 * len(scenario.initial_points)} runs reached "
        f"({ex}, {ey}) within {match_tol:g} (worst {worst:.2e})",
    )


def interior_algebra_check() -> CheckResult:
    """Quadratic and vector-field residuals; closed form to 6 decimals."""
    name = "interior-equilibrium-algebra"
    params = benchmark_params(ModelVariant.GENERAL, 0.3)
    eq = interior_equilibrium(params, ModelVariant.GENERAL)
    a, b, c = interior_coefficients(params)
    x, y = eq.point
    quad_res = abs(a * x * x + b * x + c)
    quad_tol = 1e-10 * max(abs(a), abs(b), abs(c))
    dx, dy = vector_field(params, ModelVariant.GENERAL, eq.point)
    vf_res = max(abs(dx), abs(dy))
    vf_tol = 1e-9 * (1.0 + max(abs(x), abs(y)))
    if not eq.exists:
        return _fail(name, "endemic equilibrium unexpectedly missing")
    if quad_res > quad_tol:
        return _fail(name, f"quadratic residual {quad_res:.3e} exceeds {quad_tol:.3e}")
    if vf_res > vf_tol:
        return _fail(name, f"vector-field residual {vf_res:.3e} exceeds {vf_tol:.3e}")
    eq_h = interior_equilibrium(benchmark_params(ModelVariant.HORIZONTAL, 0.3), ModelVariant.HORIZONTAL)
    if abs(eq_h.point.X - 0.047619) > 1e-6 or abs(eq_h.point.Y - 0.595238) > 1e-6:
        return _fail(name, f"closed form {tuple(eq_h.point)} differs from (0.047619, 0.595238)")
    return _ok(
        name,
        f"quadratic residual {quad_res:.1e}, field residual {vf_res:.1e}, closed form matches to 6 decimals",
    )


def reproduction_threshold_check() -> CheckResult:
    """R0 values and the stability switch of the disease-free point."""
    name = "reproduction-number-threshold"
    low = benchmark_params(ModelVariant.GENERAL, 0.1)
    high = benchmark_params(ModelVariant.GENERAL, 0.3)
    r_low = reproduction_numbers(low)
    r_high = reproduction_numbers(high)
    if abs(r_low.R0 - 0.75) > 1e-12:
        return _fail(name, f"R0 at beta=0.1 is {r_low.R0!r}, expected 0.75")
    if abs(r_high.R0 - 19.0 / 12.0) > 1e-12 or abs(r_high.R0 - 1.58333) > 1e-5:
        return _fail(name, f"R0 at beta=0.3 is {r_high.R0!r}, expected 19/12 = 1.58333...")
    for params, wanted in ((low, Classification.STABLE), (high, Classification.SADDLE)):
        eq = [e for e in all_equilibria(params, ModelVariant.GENERAL) if e.kind is EquilibriumKind.DISEASE_FREE][0]
        for regime, h in ((Regime.CONTINUOUS, None), (Regime.DISCRETE, 0.1)):
            rep = stability_report(params, ModelVariant.GENERAL, eq, regime, h=h)
            if rep.classification is not wanted:
                return _fail(
                    name,
                    f"disease-free point at beta={params.beta} classified "
                    f"{rep.classification.value} ({regime.value}), expected {wanted.value}",
                )
    if not interior_equilibrium(high, ModelVariant.GENERAL).exists:
        return _fail(name, "endemic equilibrium should exist at beta=0.3")
    return _ok(name, "R0 = 0.75 keeps the disease-free point stable; R0 = 1.58333 destabilizes it (both regimes)")


def _draw_strict_params(rng: np.random.Generator, variant: ModelVariant) -> HostParams:
    while True:
        b_x = rng.uniform(0.05, 2.0)
        b_y = rng.uniform(0.02, b_x) if b_x > 0.02 else b_x
        e = rng.uniform(0.0, b_x - b_y) if variant is ModelVariant.GENERAL else 0.0
        u_x = rng.uniform(0.01, 1.0)
        u_y = u_x + rng.uniform(0.01, 1.0)
        big_k = rng.uniform(0.2, 5.0)
        beta = 0.0 if variant is ModelVariant.VERTICAL else rng.uniform(0.01, 1.5)
        params = HostParams(b_x=b_x, b_y=b_y, u_x=u_x, u_y=u_y, K=big_k, e=e, beta=beta)
        if not validate_params(params, "strict"):
            return params


def positivity_check(n_samples: int = 10_000, n_steps: int = 50) -> CheckResult:
    """Random nonstandard runs stay in the quadrant; Euler does not."""
    name = "positivity"
    rng = np.random.default_rng(SEED)
    variants = (ModelVariant.GENERAL, ModelVariant.HORIZONTAL, ModelVariant.VERTICAL)
    for i in range(n_samples):
        variant = variants[int(rng.integers(len(variants)))]
        params = _draw_strict_params(rng, variant)
        h = rng.uniform(1e-3, 100.0)
        x0 = rng.uniform(1e-6, 2.0 * params.K)
        y0 = 0.0 if rng.uniform() < 0.1 else rng.uniform(0.0, 2.0 * params.K)
        s = (x0, y0)
        for n in range(n_steps):
            s = step(params, variant, h, s)
            if not (math.isfinite(s[0]) and math.isfinite(s[1])):
                return _fail(name, f"sample {i}: state became non-finite at step {n + 1}")
            if s[1] < 0 or s[0] < 0 or (variant is ModelVariant.GENERAL and s[0] <= 0):
                return _fail(
                    name,
                    f"sample {i} ({variant.value}, h={h:.3g}): state {s} left the quadrant at step {n + 1}",
                )
    demo = benchmark_params(ModelVariant.GENERAL, 0.3)
    euler_idx = first_negative_step(demo, ModelVariant.GENERAL, (0.1, 0.9), 10.0, scheme="euler")
    nsfd_idx = first_negative_step(demo, ModelVariant.GENERAL, (0.1, 0.9), 10.0, scheme="nsfd", max_steps=1000)
    if euler_idx != 1:
        return _fail(name, f"forward Euler at h=10 should go negative at step 1, got {euler_idx!r}")
    if nsfd_idx is not None:
        return _fail(name, f"nonstandard map went negative at step {nsfd_idx}")
    return _ok(name, f"{n_samples} random runs ({n_steps} steps each) stayed positive; Euler h=10 fails at step 1")


def step_size_independence_check() -> CheckResult:
    """Discrete classification is the same at every h and matches the flow."""
    name = "step-size-independence"
    checked = 0
    for scenario in SCENARIOS:
        for eq in all_equilibria(scenario.params, scenario.variant):
            if not eq.exists:
                continue
            sweep = step_size_sweep(scenario.params, scenario.variant, eq, SWEEP_H_LIST)
            if not sweep.uniform:
                got = {entry.h: entry.classification.value for entry in sweep.entries}
                return _fail(name, f"{scenario.name}/{eq.kind.value}: classifications differ across h: {got}")
            if not sweep.matches_continuous:
                return _fail(
                    name,
                    f"{scenario.name}/{eq.kind.value}: discrete {sweep.entries[0].classification.value} "
                    f"vs continuous {sweep.continuous.value}",
                )
            checked += 1
    return _ok(name, f"{checked} equilibria × {len(SWEEP_H_LIST)} step sizes, all classifications h-independent")


def jury_oracle_check(n_samples: int = 100_000) -> CheckResult:
    """Inside-the-unit-circle test against direct eigenvalue moduli."""
    name = "jury-eigenvalue-oracle"
    rng = np.random.default_rng(SEED + 1)
    a11 = rng.uniform(0.0, 1.0, n_samples)
    a22 = rng.uniform(0.0, 1.0, n_samples)
    a12 = rng.uniform(-2.0, 2.0, n_samples)
    a21 = rng.uniform(-2.0, 2.0, n_samples)
    tr = a11 + a22
    det = a11 * a22 - a12 * a21
    disc = tr * tr - 4.0 * det
    # Independent modulus oracle, vectorized: real pair or conjugate pair.
    sqrt_disc = np.sqrt(np.maximum(disc, 0.0))
    mod_big = np.where(
        disc >= 0,
        np.maximum(np.abs(0.5 * (tr + sqrt_disc)), np.abs(0.5 * (tr - sqrt_disc))),
        np.sqrt(np.maximum(det, 0.0)),
    )
    mod_small = np.where(
        disc >= 0,
        np.minimum(np.abs(0.5 * (tr + sqrt_disc)), np.abs(0.5 * (tr - sqrt_disc))),
        np.sqrt(np.maximum(det, 0.0)),
    )
    inside = mod_big < 1.0
    near_circle = (np.abs(mod_big - 1.0) <= 1e-9) | (np.abs(mod_small - 1.0) <= 1e-9)
    mismatches = 0
    for i in range(n_samples):
        if near_circle[i]:
            continue
        verdict = jury_conditions(Matrix2(a11[i], a12[i], a21[i], a22[i])).verdict
        if verdict != bool(inside[i]):
            mismatches += 1
    if mismatches:
        return _fail(name, f"{mismatches} of {n_samples} matrices disagree with the modulus test")
    return _ok(name, f"{n_samples} random matrices agree with the modulus test ({int(near_circle.sum())} skipped near the circle)")


def theorem_crosscheck(n_draws: int = 1000, margin: float = 1e-6) -> CheckResult:
    """Closed-form predictions match eigenvalues for random strict draws."""
    name = "theorem-crosscheck"
    rng = np.random.default_rng(SEED + 2)
    variants = (ModelVariant.GENERAL, ModelVariant.HORIZONTAL, ModelVariant.VERTICAL)
    accepted = 0
    covered = 0
    attempts = 0
    while accepted < n_draws:
        attempts += 1
        if attempts > 50 * n_draws:
            return _fail(name, f"sampler stalled after {attempts} attempts ({accepted} accepted)")
        variant = variants[int(rng.integers(len(variants)))]
        params = _draw_strict_params(rng, variant)
        equilibria = all_equilibria(params, variant)
        # Keep draws that sit safely away from every decision boundary.
        margins: list[float] = []
        for eq in equilibria:
            margins.extend(c.margin for c in eq.conditions)
            if eq.exists:
                margins.extend(stability_conditions(params, variant, eq).margins())
        if any(math.isnan(m) for m in margins) or min(abs(m) for m in margins) <= margin:
            continue
        accepted += 1
        for eq in equilibria:
            if not eq.exists:
                continue
            for regime, h_values in ((Regime.CONTINUOUS, (None,)), (Regime.DISCRETE, (0.1, 10.0))):
                for h in h_values:
                    rep = stability_report(params, variant, eq, regime, h=h)
                    if rep.prediction is TheoremPrediction.NOT_COVERED:
                        continue
                    covered += 1
                    if not prediction_matches(rep.prediction, rep.classification):
                        return _fail(
                            name,
                            f"{variant.value}/{eq.kind.value} ({regime.value}, h={h}): predicted "
                            f"{rep.prediction.value} but classified {rep.classification.value} "
                            f"for params {params}",
                        )
    return _ok(name, f"{covered} covered equilibrium reports across {n_draws} draws all match")


def consistency_order_check() -> CheckResult:
    """One-step defect decays like h; RK4 error shrinks ~16x per halving."""
    name = "consistency-order"
    h_values = (1e-2, 1e-3, 1e-4)
    lo, hi = 1.0 / 30.0, 1.0 / 3.0
    for variant, beta in (
        (ModelVariant.GENERAL, 0.3),
        (ModelVariant.HORIZONTAL, 0.3),
        (ModelVariant.VERTICAL, 0.0),
    ):
        params = benchmark_params(variant, beta)
        grid = [(x, y) for x in (0.1, 0.5, 1.1) for y in (0.1, 0.4, 0.9)]
        defects = []
        for h in h_values:
            phi1, phi2 = denominators(params, variant, h)
            worst = 0.0
            for s in grid:
                s1 = step(params, variant, h, s)
                fx, fy = vector_field(params, variant, s)
                worst = max(worst, abs((s1.X - s[0]) / phi1 - fx), abs((s1.Y - s[1]) / phi2 - fy))
            defects.append(worst)
        ratios = [defects[i + 1] / defects[i] for i in range(len(defects) - 1)]
        if not all(lo <= r <= hi for r in ratios):
            return _fail(name, f"{variant.value}: defect ratios {ratios} outside [{lo:.3f}, {hi:.3f}]")

    params = benchmark_params(ModelVariant.GENERAL, 0.3)
    horizon = 5.0
    finals = {}
    for dt in (1e-4, 0.1, 0.05):
        x, y = 0.1, 0.1
        for _ in range(round(horizon / dt)):
            x, y = _rk4_kernel(params.b_x, params.b_y, params.u_x, params.u_y, params.K, params.e, params.beta, x, y, dt)
        finals[dt] = (x, y)
    ref = finals[1e-4]
    err_coarse = max(abs(finals[0.1][0] - ref[0]), abs(finals[0.1][1] - ref[1]))
    err_fine = max(abs(finals[0.05][0] - ref[0]), abs(finals[0.05][1] - ref[1]))
    richardson = err_coarse / err_fine
    if not 12.0 <= richardson <= 20.0:
        return _fail(name, f"RK4 halving ratio {richardson:.2f} outside [12, 20]")
    return _ok(name, f"defect ratios near 0.1 for all variants; RK4 halving ratio {richardson:.1f}")


def run_acceptance(
    match_tol: float = 1e-3,
    only: str | None = None,
    extra_scenarios: Sequence[Scenario] = (),
) -> list[CheckResult]:
    """Run every acceptance check (optionally filtered by substring)."""
    checks: list[tuple[str, Callable[[], CheckResult]]] = []
    for scenario in tuple(SCENARIOS) + tuple(extra_scenarios):
        checks.append(
            (f"converges:{scenario.name}", lambda s=scenario: convergence_check(s, match_tol))
        )
    checks.extend(
        [
            ("interior-equilibrium-algebra", interior_algebra_check),
            ("reproduction-number-threshold", reproduction_threshold_check),
            ("positivity", positivity_check),
            ("step-size-independence", step_size_independence_check),
            ("jury-eigenvalue-oracle", jury_oracle_check),
            ("theorem-crosscheck", theorem_crosscheck),
            ("consistency-order", consistency_order_check),
        ]
    )
    results = []
    for check_name, fn in checks:
        if only is not None and only not in check_name:
            continue
        results.append(fn())
    return results


def acceptance_check_names(extra_scenarios: Sequence[Scenario] = ()) -> list[str]:
    names = [f"converges:{s.name}" for s in tuple(SCENARIOS) + tuple(extra_scenarios)]
    names.extend(
        [
            "interior-equilibrium-algebra",
            "reproduction-number-threshold",
            "positivity",
            "step-size-independence",
            "jury-eigenvalue-oracle",
            "theorem-crosscheck",
            "consistency-order",
        ]
    )
    return names
