"""Positivity-preserving nonstandard finite difference maps.

The discretization replaces dX/dt by (X_{n+1} - X_n)/phi1(h) and
dY/dt by (Y_{n+1} - Y_n)/phi2(h) and approximates each product term
nonlocally (loss terms at the new time level, gains at the old) so the
update solves explicitly with a positive numerator over a positive
denominator.  The denominator functions are

    phi1(h) = b_y (1 - exp(-beta K u_y h / b_y)) / (beta K u_y)
    phi2(h) = h

with phi1 -> h as beta -> 0.  The general map is

    X_{n+1} = [X_n (1 + phi1 b_x) + phi1 e Y_n]
              / [1 + phi1 (b_x X_n/K + b_x Y_n/K + u_x + beta Y_n
                           + e Y_n/K + e Y_n^2 / (K X_n))]
    Y_{n+1} = Y_n [1 + phi2 (b_y + beta X_n)]
              / [1 + phi2 (b_y X_n/K + b_y Y_n/K + u_y)]

and the sub-variant maps drop the e terms (horizontal) and additionally
set beta = 0, phi1 = h (vertical).  Every term on each side is
nonnegative for states in the positive quadrant, so positivity holds
for every step size h > 0, and the fixed points coincide with the
continuous equilibria.

The e Y^2/X term makes the general map undefined on the Y axis; along
the X axis (Y = 0) all the X-ratio terms vanish identically and the
map extends continuously, which the implementation uses.  States with
X <= 0 and Y > 0 are refused.
"""

from __future__ import annotations

import math
from typing import Callable, NamedTuple

import numpy as np

from .convergence import ConvergenceMonitor, ConvergenceSettings, Trajectory, Verdict, VerdictStatus
from .equilibria import all_equilibria
from .model import DomainError, HostParams, ModelVariant, State, effective_rates

__all__ = [
    "DenominatorPair",
    "denominators",
    "iterate",
    "step",
    "step_general",
    "step_horizontal",
    "step_vertical",
]

# Below this value of (beta K u_y / b_y) * h the closed form for phi1 is
# evaluated by its second-order series to avoid 0/0 cancellation.
PHI1_SERIES_CUTOFF = 1e-8


class DenominatorPair(NamedTuple):
    phi1: float
    phi2: float


def _check_step_size(h: float) -> None:
    if not (math.isfinite(h) and h > 0):
        raise DomainError(f"step size must be finite and positive, got {h!r}")


def denominators(params: HostParams, variant: ModelVariant, h: float) -> DenominatorPair:
    """Denominator functions (phi1, phi2) for a variant at step size h.

    phi1 is strictly increasing in h, equals h + O(h^2) for small h,
    and saturates at b_y / (beta K u_y); the vertical variant (and any
    parameter set with beta K u_y = 0) uses phi1 = h exactly.
    """
    _check_step_size(h)
    _, beta = effective_rates(params, variant)
    decay = beta * params.K * params.u_y
    if decay == 0.0:
        return DenominatorPair(h, h)
    if params.b_y <= 0:
        raise DomainError(f"phi1 needs b_y > 0 when beta*K*u_y > 0, got b_y = {params.b_y!r}")
    rate = decay / params.b_y
    z = rate * h
    if z < PHI1_SERIES_CUTOFF:
        phi1 = h * (1.0 - 0.5 * z)
    else:
        phi1 = -math.expm1(-z) / rate
    return DenominatorPair(phi1, h)


def _check_state(x: float, y: float) -> None:
    if not (math.isfinite(x) and math.isfinite(y)):
        raise DomainError(f"state ({x!r}, {y!r}) is not finite")
    if x < 0 or y < 0:
        raise DomainError(f"state ({x!r}, {y!r}) leaves the nonnegative quadrant")


def step_general(params: HostParams, h: float, s: tuple[float, float]) -> State:
    """One update of the general map (imperfect vertical transmission).

    Requires X > 0 unless Y = 0: the e Y^2/X term has no limit as the
    Y axis is approached with Y > 0.
    """
    x, y = s
    _check_state(x, y)
    if x == 0 and y > 0:
        raise DomainError("general map is undefined at X = 0 with Y > 0 (contains Y^2/X)")
    phi1, phi2 = denominators(params, ModelVariant.GENERAL, h)
    b_x, b_y, u_x, u_y, big_k, e, beta = (
        params.b_x,
        params.b_y,
        params.u_x,
        params.u_y,
        params.K,
        params.e,
        params.beta,
    )
    ratio = y * y / x if y != 0 else 0.0
    num_x = x * (1.0 + phi1 * b_x) + phi1 * e * y
    den_x = 1.0 + phi1 * (b_x / big_k * x + b_x / big_k * y + u_x + beta * y + e / big_k * y + e / big_k * ratio)
    num_y = y * (1.0 + phi2 * (b_y + beta * x))
    den_y = 1.0 + phi2 * (b_y / big_k * x + b_y / big_k * y + u_y)
    return State(num_x / den_x, num_y / den_y)


def step_horizontal(params: HostParams, h: float, s: tuple[float, float]) -> State:
    """One update of the perfect-vertical-transmission map (e = 0).

    Defined on the whole nonnegative quadrant; both axes are invariant.
    """
    x, y = s
    _check_state(x, y)
    phi1, phi2 = denominators(params, ModelVariant.HORIZONTAL, h)
    b_x, b_y, u_x, u_y, big_k, beta = params.b_x, params.b_y, params.u_x, params.u_y, params.K, params.beta
    num_x = x * (1.0 + phi1 * b_x)
    den_x = 1.0 + phi1 * (b_x / big_k * x + b_x / big_k * y + u_x + beta * y)
    num_y = y * (1.0 + phi2 * (b_y + beta * x))
    den_y = 1.0 + phi2 * (b_y / big_k * x + b_y / big_k * y + u_y)
    return State(num_x / den_x, num_y / den_y)


def step_vertical(params: HostParams, h: float, s: tuple[float, float]) -> State:
    """One update of the no-contact map (e = 0, beta = 0, phi1 = phi2 = h)."""
    x, y = s
    _check_state(x, y)
    effective_rates(params, ModelVariant.VERTICAL)
    _check_step_size(h)
    b_x, b_y, u_x, u_y, big_k = params.b_x, params.b_y, params.u_x, params.u_y, params.K
    num_x = x * (1.0 + h * b_x)
    den_x = 1.0 + h * (b_x / big_k * x + b_x / big_k * y + u_x)
    num_y = y * (1.0 + h * b_y)
    den_y = 1.0 + h * (b_y / big_k * x + b_y / big_k * y + u_y)
    return State(num_x / den_x, num_y / den_y)


_STEPPERS: dict[ModelVariant, Callable[[HostParams, float, tuple[float, float]], State]] = {
    ModelVariant.GENERAL: step_general,
    ModelVariant.HORIZONTAL: step_horizontal,
    ModelVariant.VERTICAL: step_vertical,
}


def step(params: HostParams, variant: ModelVariant, h: float, s: tuple[float, float]) -> State:
    """Variant-dispatched single update."""
    return _STEPPERS[variant](params, h, s)


def iterate(
    params: HostParams,
    variant: ModelVariant,
    h: float,
    s0: tuple[float, float],
    n_max: int,
    settings: ConvergenceSettings | None = None,
    record_every: int = 1,
) -> Trajectory:
    """Run the variant's map from s0 for up to n_max steps.

    Stops early once the convergence monitor matches a known
    equilibrium of the variant (or flags divergence).  Every state is
    recorded unless ``record_every`` thins the output; the initial and
    final states are always present.
    """
    if n_max <= 0:
        raise DomainError(f"n_max must be positive, got {n_max!r}")
    if record_every < 1:
        raise DomainError(f"record_every must be >= 1, got {record_every!r}")
    if settings is None:
        settings = ConvergenceSettings()
    stepper = _STEPPERS[variant]
    effective_rates(params, variant)  # fail fast on variant/parameter mismatch

    try:
        known = all_equilibria(params, variant)
    except DomainError:
        known = ()  # implausible parameters: no limit matching, divergence only
    monitor = ConvergenceMonitor(settings, known, params.K)
    s = (float(s0[0]), float(s0[1]))
    recorded_steps = [0]
    recorded_states = [s]
    verdict = monitor.start(s)
    n = 0
    n_limit = min(n_max, settings.max_steps)
    while verdict is None and n < n_limit:
        n += 1
        prev = s
        s = stepper(params, h, prev)
        verdict = monitor.update(prev, s, n)
        if n % record_every == 0 or verdict is not None or n == n_limit:
            recorded_steps.append(n)
            recorded_states.append(s)
    if verdict is None:
        verdict = Verdict(VerdictStatus.MAX_STEPS, at_step=n)
    steps = np.asarray(recorded_steps, dtype=np.int64)
    states = np.asarray(recorded_states, dtype=np.float64)
    return Trajectory(h=h, steps=steps, times=steps * h, states=states, verdict=verdict)
