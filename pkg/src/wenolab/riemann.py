"""Exact solver for the 1D Euler Riemann problem.

The star-region pressure solves f_l(p) + f_r(p) + (u_r - u_l) = 0, where
each side contributes the shock branch for p above its pressure and the
rarefaction branch below. The pressure function is monotonically increasing,
so a bracketed Newton iteration converges unconditionally. Solutions are
self-similar in xi = x/t and can be sampled anywhere, including inside
rarefaction fans.

All the internal root-finding and sampling routines vectorize over arrays of
states, which is what makes the first-order Godunov reference solver viable.
"""

import enum
from dataclasses import dataclass

import numpy as np

__all__ = [
    "WaveKind",
    "RiemannSolution",
    "VacuumError",
    "NonConvergenceError",
    "solve_star",
    "sample",
    "interface_states",
]

_PRESSURE_FLOOR = 1e-14
_RESIDUAL_TOL = 1e-12
_MAX_ITER = 100


class WaveKind(enum.Enum):
    SHOCK = "shock"
    RAREFACTION = "rarefaction"


class VacuumError(ValueError):
    """The two states separate fast enough to generate vacuum."""


class NonConvergenceError(RuntimeError):
    """Pressure iteration failed to meet tolerance within the iteration cap."""

    def __init__(self, message: str, last_pressure: float, last_residual: float):
        super().__init__(message)
        self.last_pressure = last_pressure
        self.last_residual = last_residual


@dataclass(frozen=True)
class RiemannSolution:
    """Star-region states and wave structure for one left/right pair."""

    left: tuple[float, float, float]
    right: tuple[float, float, float]
    p_star: float
    u_star: float
    rho_star_l: float
    rho_star_r: float
    left_wave: WaveKind
    right_wave: WaveKind
    gamma_gas: float = 1.4


def _sound_speed(rho, p, gamma):
    return np.sqrt(gamma * p / rho)


def _pressure_function(p, rho_s, p_s, c_s, gamma):
    """One side's contribution f(p) and its derivative f'(p)."""
    A = 2.0 / ((gamma + 1) * rho_s)
    B = (gamma - 1) / (gamma + 1) * p_s
    sq = np.sqrt(A / (p + B))
    f_shock = (p - p_s) * sq
    df_shock = sq * (1.0 - 0.5 * (p - p_s) / (p + B))
    pr = p / p_s
    f_rare = 2 * c_s / (gamma - 1) * (pr ** ((gamma - 1) / (2 * gamma)) - 1.0)
    df_rare = pr ** (-(gamma + 1) / (2 * gamma)) / (rho_s * c_s)
    shock = p > p_s
    return np.where(shock, f_shock, f_rare), np.where(shock, df_shock, df_rare)


def _two_rarefaction_guess(u_l, c_l, p_l, u_r, c_r, p_r, gamma):
    z = (gamma - 1) / (2 * gamma)
    num = c_l + c_r - 0.5 * (gamma - 1) * (u_r - u_l)
    den = c_l / p_l**z + c_r / p_r**z
    with np.errstate(invalid="ignore"):
        guess = np.where(num > 0, (np.abs(num) / den) ** (1 / z), np.nan)
    # fall back to the pressure mean when the guess degenerates
    return np.where(np.isfinite(guess) & (guess > 0), guess, 0.5 * (p_l + p_r))


def _star_pressure_velocity(rho_l, u_l, p_l, rho_r, u_r, p_r, gamma):
    """Vectorized bracketed Newton solve for (p*, u*). Raises on vacuum."""
    rho_l, u_l, p_l, rho_r, u_r, p_r = np.broadcast_arrays(
        *(np.asarray(a, dtype=float) for a in (rho_l, u_l, p_l, rho_r, u_r, p_r)))
    c_l = _sound_speed(rho_l, p_l, gamma)
    c_r = _sound_speed(rho_r, p_r, gamma)
    du = u_r - u_l
    if np.any(2 * (c_l + c_r) / (gamma - 1) <= du):
        raise VacuumError("initial states generate vacuum; no positive-pressure solution")

    p = np.maximum(_two_rarefaction_guess(u_l, c_l, p_l, u_r, c_r, p_r, gamma),
                   _PRESSURE_FLOOR)
    # bracket: f < 0 at lo, f -> +inf as p grows
    lo = np.full_like(p, _PRESSURE_FLOOR)
    hi = np.maximum(np.maximum(p_l, p_r), p) * 2.0
    fl, _ = _pressure_function(hi, rho_l, p_l, c_l, gamma)
    fr, _ = _pressure_function(hi, rho_r, p_r, c_r, gamma)
    for _ in range(60):
        need = fl + fr + du < 0
        if not np.any(need):
            break
        hi = np.where(need, hi * 4.0, hi)
        fl, _ = _pressure_function(hi, rho_l, p_l, c_l, gamma)
        fr, _ = _pressure_function(hi, rho_r, p_r, c_r, gamma)

    f = np.full_like(p, np.inf)
    for _ in range(_MAX_ITER):
        fl, dfl = _pressure_function(p, rho_l, p_l, c_l, gamma)
        fr, dfr = _pressure_function(p, rho_r, p_r, c_r, gamma)
        f = fl + fr + du
        if np.all(np.abs(f) < _RESIDUAL_TOL):
            break
        lo = np.where(f < 0, np.maximum(lo, p), lo)
        hi = np.where(f > 0, np.minimum(hi, p), hi)
        step = np.where(dfl + dfr > 0, f / (dfl + dfr), 0.0)
        cand = p - step
        # bisect wherever Newton leaves the bracket
        p = np.where((cand > lo) & (cand < hi), cand, 0.5 * (lo + hi))
    else:
        worst = int(np.argmax(np.abs(f).reshape(-1)))
        raise NonConvergenceError(
            f"pressure iteration did not reach |f| < {_RESIDUAL_TOL:g} "
            f"in {_MAX_ITER} iterations",
            last_pressure=float(p.reshape(-1)[worst]),
            last_residual=float(f.reshape(-1)[worst]),
        )

    fl, _ = _pressure_function(p, rho_l, p_l, c_l, gamma)
    fr, _ = _pressure_function(p, rho_r, p_r, c_r, gamma)
    u = 0.5 * (u_l + u_r) + 0.5 * (fr - fl)
    return p, u


def _star_density(rho_s, p_s, p_star, gamma):
    """Density adjacent to the contact, shock or rarefaction branch."""
    g1 = (gamma - 1) / (gamma + 1)
    pr = p_star / p_s
    shock = rho_s * (pr + g1) / (g1 * pr + 1.0)
    rare = rho_s * pr ** (1.0 / gamma)
    return np.where(p_star > p_s, shock, rare)


def solve_star(left, right, gamma: float = 1.4) -> RiemannSolution:
    """Solve one Riemann problem; ``left``/``right`` are (rho, u, p) triples."""
    rho_l, u_l, p_l = (float(v) for v in left)
    rho_r, u_r, p_r = (float(v) for v in right)
    if min(rho_l, rho_r) <= 0 or min(p_l, p_r) <= 0:
        raise ValueError("densities and pressures must be positive")
    p_star, u_star = _star_pressure_velocity(rho_l, u_l, p_l, rho_r, u_r, p_r, gamma)
    p_star, u_star = float(p_star), float(u_star)
    return RiemannSolution(
        left=(rho_l, u_l, p_l),
        right=(rho_r, u_r, p_r),
        p_star=p_star,
        u_star=u_star,
        rho_star_l=float(_star_density(rho_l, p_l, p_star, gamma)),
        rho_star_r=float(_star_density(rho_r, p_r, p_star, gamma)),
        left_wave=WaveKind.SHOCK if p_star > p_l else WaveKind.RAREFACTION,
        right_wave=WaveKind.SHOCK if p_star > p_r else WaveKind.RAREFACTION,
        gamma_gas=gamma,
    )


def _sample_arrays(xi, rho_l, u_l, p_l, rho_r, u_r, p_r, p_star, u_star, gamma):
    """Self-similar sampling, vectorized over broadcastable state/xi arrays."""
    xi, rho_l, u_l, p_l, rho_r, u_r, p_r, p_star, u_star = np.broadcast_arrays(
        *(np.asarray(a, dtype=float)
          for a in (xi, rho_l, u_l, p_l, rho_r, u_r, p_r, p_star, u_star)))
    c_l = _sound_speed(rho_l, p_l, gamma)
    c_r = _sound_speed(rho_r, p_r, gamma)
    g1 = (gamma - 1) / (gamma + 1)
    gp = (gamma + 1) / (2 * gamma)
    gm = (gamma - 1) / (2 * gamma)

    rho = np.empty_like(xi)
    u = np.empty_like(xi)
    p = np.empty_like(xi)

    on_left = xi <= u_star
    with np.errstate(invalid="ignore", divide="ignore"):
        # left wave
        pr = p_star / p_l
        shock_speed = u_l - c_l * np.sqrt(gp * pr + gm)
        head = u_l - c_l
        tail = u_star - c_l * pr**gm
        fan = 2 / (gamma + 1) + g1 / c_l * (u_l - xi)
        in_left_state = np.where(p_star > p_l, xi < shock_speed, xi < head)
        in_fan = (p_star <= p_l) & (xi >= head) & (xi <= tail)
        rho_star = _star_density(rho_l, p_l, p_star, gamma)
        rho = np.where(on_left,
                       np.where(in_left_state, rho_l,
                                np.where(in_fan, rho_l * fan ** (2 / (gamma - 1)), rho_star)),
                       rho)
        u = np.where(on_left,
                     np.where(in_left_state, u_l,
                              np.where(in_fan,
                                       2 / (gamma + 1) * (c_l + 0.5 * (gamma - 1) * u_l + xi),
                                       u_star)),
                     u)
        p = np.where(on_left,
                     np.where(in_left_state, p_l,
                              np.where(in_fan, p_l * fan ** (2 * gamma / (gamma - 1)), p_star)),
                     p)

        # right wave
        pr = p_star / p_r
        shock_speed = u_r + c_r * np.sqrt(gp * pr + gm)
        head = u_r + c_r
        tail = u_star + c_r * pr**gm
        fan = 2 / (gamma + 1) - g1 / c_r * (u_r - xi)
        in_right_state = np.where(p_star > p_r, xi > shock_speed, xi > head)
        in_fan = (p_star <= p_r) & (xi <= head) & (xi >= tail)
        rho_star = _star_density(rho_r, p_r, p_star, gamma)
        rho = np.where(~on_left,
                       np.where(in_right_state, rho_r,
                                np.where(in_fan, rho_r * fan ** (2 / (gamma - 1)), rho_star)),
                       rho)
        u = np.where(~on_left,
                     np.where(in_right_state, u_r,
                              np.where(in_fan,
                                       2 / (gamma + 1) * (-c_r + 0.5 * (gamma - 1) * u_r + xi),
                                       u_star)),
                     u)
        p = np.where(~on_left,
                     np.where(in_right_state, p_r,
                              np.where(in_fan, p_r * fan ** (2 * gamma / (gamma - 1)), p_star)),
                     p)
    return rho, u, p


def sample(sol: RiemannSolution, xi):
    """Primitive state (rho, u, p) at similarity coordinate xi = x/t.

    ``xi`` may be a scalar or an array; arrays return arrays.
    """
    scalar = np.isscalar(xi) or np.asarray(xi).ndim == 0
    rho, u, p = _sample_arrays(
        np.atleast_1d(np.asarray(xi, dtype=float)),
        *sol.left, *sol.right, sol.p_star, sol.u_star, sol.gamma_gas)
    if scalar:
        return float(rho[0]), float(u[0]), float(p[0])
    return rho, u, p


def interface_states(rho_l, u_l, p_l, rho_r, u_r, p_r, gamma: float = 1.4):
    """States on x/t = 0 for arrays of Riemann problems (Godunov flux input)."""
    p_star, u_star = _star_pressure_velocity(rho_l, u_l, p_l, rho_r, u_r, p_r, gamma)
    return _sample_arrays(0.0, rho_l, u_l, p_l, rho_r, u_r, p_r, p_star, u_star, gamma)
