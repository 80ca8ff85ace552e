"""Ground-truth signal generators: chaotic maps/flows and stochastic
baselines. Every stochastic generator draws from a seeded numpy PCG64
stream, so outputs are reproducible from (parameters, seed).
"""

from __future__ import annotations

import numpy as np

from .series import TimeSeries

__all__ = [
    "gen_logistic",
    "gen_lorenz",
    "gen_gaussian_noise",
    "gen_random_walk",
    "gen_ar1",
    "shuffle_surrogate",
    "GeneratorError",
]


class GeneratorError(ValueError):
    pass


def _rng(seed):
    return np.random.Generator(np.random.PCG64(seed))


def gen_logistic(r: float = 4.0, x0: float = 0.2, n: int = 1000, transient: int = 0) -> TimeSeries:
    """Iterate x_{k+1} = r x_k (1 - x_k); r > 4 escapes [0,1] and is rejected."""
    if not (0 < r <= 4):
        raise GeneratorError(f"r must be in (0, 4], got {r} (orbits escape [0,1] for r > 4)")
    if not (0 < x0 < 1):
        raise GeneratorError(f"x0 must be in (0, 1), got {x0}")
    if n < 2 or transient < 0:
        raise GeneratorError(f"need n >= 2 and transient >= 0, got n={n}, transient={transient}")
    out = np.empty(transient + n)
    x = x0
    for k in range(transient + n):
        out[k] = x
        x = r * x * (1.0 - x)
    return TimeSeries(out[transient:], label=f"logistic(r={r}, x0={x0})",
                      transform_history=("synthetic",))


def _lorenz_rhs(state, sigma, rho, beta):
    x, y, z = state
    return np.array([sigma * (y - x), x * (rho - z) - y, x * y - beta * z])


def _rk4_step(state, dt, sigma, rho, beta):
    k1 = _lorenz_rhs(state, sigma, rho, beta)
    k2 = _lorenz_rhs(state + 0.5 * dt * k1, sigma, rho, beta)
    k3 = _lorenz_rhs(state + 0.5 * dt * k2, sigma, rho, beta)
    k4 = _lorenz_rhs(state + dt * k3, sigma, rho, beta)
    return state + (dt / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)


def gen_lorenz(
    sigma: float = 10.0,
    rho: float = 28.0,
    beta: float = 8.0 / 3.0,
    initial=(1.0, 1.0, 1.0),
    dt: float = 0.01,
    n: int = 1000,
    transient: int = 1000,
) -> TimeSeries:
    """x-component of a fixed-step RK4 integration of the Lorenz system."""
    if not (0 < dt <= 0.05):
        raise GeneratorError(f"dt must be in (0, 0.05], got {dt}")
    if n < 2 or transient < 0:
        raise GeneratorError(f"need n >= 2 and transient >= 0, got n={n}, transient={transient}")
    state = np.asarray(initial, dtype=np.float64)
    if state.shape != (3,):
        raise GeneratorError(f"initial state must be a 3-vector, got shape {state.shape}")
    out = np.empty(transient + n)
    # divergence shows up as overflow before the finite check catches it;
    # the check is the error path, so keep the warnings quiet
    with np.errstate(over="ignore", invalid="ignore"):
        for k in range(transient + n):
            out[k] = state[0]
            state = _rk4_step(state, dt, sigma, rho, beta)
            if not np.all(np.isfinite(state)):
                raise GeneratorError(f"Lorenz integration diverged at step {k + 1}")
    return TimeSeries(out[transient:], sample_interval=dt,
                      label=f"lorenz(sigma={sigma}, rho={rho}, beta={beta}, dt={dt})",
                      transform_history=("synthetic",))


def gen_gaussian_noise(n: int = 1000, seed: int = 0, mean: float = 0.0, std: float = 1.0) -> TimeSeries:
    if n < 2:
        raise GeneratorError(f"need n >= 2, got {n}")
    x = _rng(seed).normal(mean, std, size=n)
    return TimeSeries(x, label=f"gaussian_noise(seed={seed})", transform_history=("synthetic",))


def gen_random_walk(n: int = 1000, seed: int = 0, step_std: float = 1.0) -> TimeSeries:
    """Cumulative sum of seeded Gaussian steps."""
    if n < 2:
        raise GeneratorError(f"need n >= 2, got {n}")
    steps = _rng(seed).normal(0.0, step_std, size=n)
    return TimeSeries(np.cumsum(steps), label=f"random_walk(seed={seed})",
                      transform_history=("synthetic",))


def gen_ar1(phi: float = 0.5, n: int = 1000, seed: int = 0, noise_std: float = 1.0) -> TimeSeries:
    """x_t = phi * x_{t-1} + eps_t with |phi| < 1."""
    if not abs(phi) < 1:
        raise GeneratorError(f"|phi| must be < 1, got {phi}")
    if n < 2:
        raise GeneratorError(f"need n >= 2, got {n}")
    eps = _rng(seed).normal(0.0, noise_std, size=n)
    x = np.empty(n)
    x[0] = eps[0]
    for t in range(1, n):
        x[t] = phi * x[t - 1] + eps[t]
    return TimeSeries(x, label=f"ar1(phi={phi}, seed={seed})", transform_history=("synthetic",))


def shuffle_surrogate(s: TimeSeries, seed: int = 0) -> TimeSeries:
    """Random permutation of the values: same distribution, no temporal structure."""
    perm = _rng(seed).permutation(len(s))
    return s.with_values(s.values[perm], f"shuffle_surrogate(seed={seed})")
