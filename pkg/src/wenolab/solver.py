"""Method-of-lines finite-volume solver.

Spatial discretization: global Lax-Friedrichs flux splitting, five-point
WENO reconstruction of the split fluxes (optionally characteristic-wise),
conservative flux difference. Time discretization: SSPRK(3,3) with the
wave-speed bound refreshed every step. A first-order Godunov scheme driven
by the exact Riemann solver serves as the reference integrator.
"""

import enum
import time
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import riemann
from .core import nonlinear_weights, smoothness_indicators
from .laws import ConservationLaw, EulerEquations
from .tableau import ReconstructionTableau

__all__ = [
    "Grid1D",
    "FieldSnapshot",
    "BCKind",
    "BoundaryCondition",
    "RunStats",
    "GHOST_WIDTH",
    "periodic",
    "outflow",
    "reflective",
    "exact_ghost",
    "extend_with_ghosts",
    "lax_friedrichs_split",
    "spatial_operator",
    "ssprk3_step",
    "run_simulation",
    "godunov_reference",
]

#: Ghost-cell width on each side; three cells serve both WENO biases.
GHOST_WIDTH = 3


@dataclass(frozen=True)
class Grid1D:
    """Uniform cell-centered grid: x_j = x_lo + (j + 1/2) dx."""

    x_lo: float
    x_hi: float
    n: int

    def __post_init__(self):
        if self.n < 7:
            raise ValueError(f"need at least 7 cells (stencil plus ghosts), got {self.n}")
        if self.x_hi <= self.x_lo:
            raise ValueError("x_hi must exceed x_lo")

    @property
    def dx(self) -> float:
        return (self.x_hi - self.x_lo) / self.n

    def centers(self) -> np.ndarray:
        return self.x_lo + (np.arange(self.n) + 0.5) * self.dx

    def edges(self) -> np.ndarray:
        return self.x_lo + np.arange(self.n + 1) * self.dx


@dataclass(frozen=True)
class FieldSnapshot:
    """Cell averages of all components at one instant."""

    t: float
    grid: Grid1D
    cells: np.ndarray  # (n, m)

    def __post_init__(self):
        cells = np.asarray(self.cells, dtype=float)
        if cells.ndim == 1:
            cells = cells[:, None]
        if cells.shape[0] != self.grid.n:
            raise ValueError(f"cell count {cells.shape[0]} does not match grid n={self.grid.n}")
        object.__setattr__(self, "cells", cells)


class BCKind(enum.Enum):
    PERIODIC = "periodic"
    OUTFLOW = "outflow"
    REFLECTIVE = "reflective"
    EXACT_GHOST = "exact-ghost"


@dataclass(frozen=True)
class BoundaryCondition:
    """Ghost-cell recipe; EXACT_GHOST calls ``ghost_fn(x, t) -> (len(x), m)``."""

    kind: BCKind
    ghost_fn: Callable[[np.ndarray, float], np.ndarray] | None = None

    def __post_init__(self):
        if self.kind is BCKind.EXACT_GHOST and self.ghost_fn is None:
            raise ValueError("exact-ghost boundaries need a ghost_fn callback")


def periodic() -> BoundaryCondition:
    return BoundaryCondition(BCKind.PERIODIC)


def outflow() -> BoundaryCondition:
    return BoundaryCondition(BCKind.OUTFLOW)


def reflective() -> BoundaryCondition:
    return BoundaryCondition(BCKind.REFLECTIVE)


def exact_ghost(fn) -> BoundaryCondition:
    return BoundaryCondition(BCKind.EXACT_GHOST, ghost_fn=fn)


def extend_with_ghosts(snapshot: FieldSnapshot, bc: BoundaryCondition) -> np.ndarray:
    """State array padded with GHOST_WIDTH cells on each side."""
    q = snapshot.cells
    g = GHOST_WIDTH
    if bc.kind is BCKind.PERIODIC:
        return np.concatenate([q[-g:], q, q[:g]], axis=0)
    if bc.kind is BCKind.OUTFLOW:
        return np.concatenate([np.repeat(q[:1], g, axis=0), q,
                               np.repeat(q[-1:], g, axis=0)], axis=0)
    if bc.kind is BCKind.REFLECTIVE:
        # mirror rho and E, negate momentum
        left = q[g - 1::-1].copy()
        right = q[:-g - 1:-1].copy()
        if q.shape[1] >= 2:
            left[:, 1] *= -1.0
            right[:, 1] *= -1.0
        return np.concatenate([left, q, right], axis=0)
    grid, t = snapshot.grid, snapshot.t
    dx = grid.dx
    x_left = grid.x_lo + (np.arange(-g, 0) + 0.5) * dx
    x_right = grid.x_hi + (np.arange(g) + 0.5) * dx
    left = np.atleast_2d(np.asarray(bc.ghost_fn(x_left, t), dtype=float))
    right = np.atleast_2d(np.asarray(bc.ghost_fn(x_right, t), dtype=float))
    if left.shape != (g, q.shape[1]) or right.shape != (g, q.shape[1]):
        left = left.reshape(g, q.shape[1])
        right = right.reshape(g, q.shape[1])
    return np.concatenate([left, q, right], axis=0)


def lax_friedrichs_split(law: ConservationLaw, q, alpha: float):
    """Global splitting f_pm = (f(q) +- alpha q) / 2; their sum is f(q) exactly."""
    q = np.asarray(q, dtype=float)
    f = law.flux(q)
    return 0.5 * (f + alpha * q), 0.5 * (f - alpha * q)


def _mean_face_state(qe, n, law, interface_mean):
    """Interface state for the frozen eigensystem: mean of adjacent cells."""
    ql = qe[GHOST_WIDTH - 1:GHOST_WIDTH + n]
    qr = qe[GHOST_WIDTH:GHOST_WIDTH + n + 1]
    if interface_mean == "conserved":
        return 0.5 * (ql + qr)
    if interface_mean == "primitive":
        rho_l, u_l, p_l = law.primitive(ql)
        rho_r, u_r, p_r = law.primitive(qr)
        return law.conserved(0.5 * (rho_l + rho_r), 0.5 * (u_l + u_r), 0.5 * (p_l + p_r))
    raise ValueError(f"interface_mean must be 'conserved' or 'primitive', got {interface_mean!r}")


def _interface_reconstruction(qe, fe, law, t, alpha, characteristic, interface_mean):
    """Numerical fluxes at the n+1 interfaces from ghost-extended data."""
    n = qe.shape[0] - 2 * GHOST_WIDTH
    fp = 0.5 * (fe + alpha * qe)
    fm = 0.5 * (fe - alpha * qe)
    # interface i (between cells i-1 and i) with ghost offset 3:
    #   left-biased window of f+ : ext cells i-3 .. i+1  -> fp[i : i+5]
    #   right-biased (mirrored) window of f- : ext cells i+2 .. i-2 -> fm[i+5-s]
    win_p = np.stack([fp[s:s + n + 1] for s in range(5)], axis=1)      # (n+1, 5, m)
    win_m = np.stack([fm[5 - s:5 - s + n + 1] for s in range(5)], axis=1)
    if characteristic:
        q_face = _mean_face_state(qe, n, law, interface_mean)
        R, L, _ = law.eigensystem(q_face)
        win_p = np.einsum("nab,nsb->nsa", L, win_p)
        win_m = np.einsum("nab,nsb->nsa", L, win_m)
    # reconstruct per field: windows (n+1, 5, m) -> (n+1, m, 5)
    win_p = np.moveaxis(win_p, 1, -1)
    win_m = np.moveaxis(win_m, 1, -1)
    what = (_reconstruct_windows(win_p, t) + _reconstruct_windows(win_m, t))
    if characteristic:
        what = np.einsum("nab,nb->na", R, what)
    return what


def _reconstruct_windows(win, t: ReconstructionTableau):
    om = nonlinear_weights(smoothness_indicators(win), t)
    return np.einsum("...k,...k->...", om, win @ t.C.T)


def spatial_operator(
    snapshot: FieldSnapshot,
    law: ConservationLaw,
    t: ReconstructionTableau,
    bc: BoundaryCondition,
    characteristic: bool = False,
    alpha: float | None = None,
    interface_mean: str = "conserved",
) -> np.ndarray:
    """Semi-discrete tendency L(u)_j = -(F_{j+1/2} - F_{j-1/2}) / dx.

    ``alpha`` is the global wave-speed bound of the splitting; when omitted
    it is taken as the maximum of ``law.max_wave_speed`` over the snapshot.
    ``interface_mean`` selects how the frozen eigensystem state at each
    interface is averaged ("conserved" or "primitive" variables).
    Raises :class:`wenolab.laws.PositivityError` for inadmissible input states and
    ``FloatingPointError`` if the tendency comes out non-finite.
    """
    law.validate_state(snapshot.cells, time=snapshot.t)
    if alpha is None:
        alpha = float(np.max(law.max_wave_speed(snapshot.cells)))
    qe = extend_with_ghosts(snapshot, bc)
    fe = law.flux(qe)
    flux_hat = _interface_reconstruction(qe, fe, law, t, alpha, characteristic, interface_mean)
    out = -(flux_hat[1:] - flux_hat[:-1]) / snapshot.grid.dx
    if not np.all(np.isfinite(out)):
        raise FloatingPointError(f"non-finite tendency at t={snapshot.t:.6g}")
    return out


def ssprk3_step(snapshot: FieldSnapshot, dt: float,
                L: Callable[[FieldSnapshot], np.ndarray]) -> FieldSnapshot:
    """One three-stage strong-stability-preserving step.

    u1 = u + dt L(u)
    u2 = 3/4 u + 1/4 u1 + 1/4 dt L(u1)
    u' = 1/3 u + 2/3 u2 + 2/3 dt L(u2)
    """
    if dt <= 0:
        raise ValueError(f"dt must be positive, got {dt}")
    grid, t0, u = snapshot.grid, snapshot.t, snapshot.cells
    u1 = u + dt * L(snapshot)
    s1 = FieldSnapshot(t0 + dt, grid, u1)
    u2 = 0.75 * u + 0.25 * u1 + 0.25 * dt * L(s1)
    s2 = FieldSnapshot(t0 + 0.5 * dt, grid, u2)
    u_new = u / 3.0 + 2.0 / 3.0 * u2 + 2.0 / 3.0 * dt * L(s2)
    return FieldSnapshot(t0 + dt, grid, u_new)


@dataclass
class RunStats:
    """Bookkeeping of one simulation run."""

    steps: int = 0
    wall_time: float = 0.0


def run_simulation(
    case,
    t: ReconstructionTableau,
    n: int,
    cfl: float,
    t_final: float | None = None,
    characteristic: bool = True,
    n_steps: int | None = None,
    interface_mean: str = "conserved",
    stats: RunStats | None = None,
) -> FieldSnapshot:
    """Integrate a registered problem case to its final time.

    ``case`` must provide ``law``, ``x_lo``, ``x_hi``, ``bc`` and
    ``initial_cells(grid)``. Every step recomputes the global wave-speed
    bound, sets dt = cfl dx / alpha and truncates the final step so the run
    ends exactly at ``t_final``. When ``n_steps`` is given, exactly that
    many untruncated steps are taken instead (fixed-step protocol).
    """
    if not 0 < cfl <= 1.0:
        raise ValueError(f"cfl must lie in (0, 1], got {cfl}")
    grid = Grid1D(case.x_lo, case.x_hi, n)
    law = case.law
    snapshot = FieldSnapshot(0.0, grid, case.initial_cells(grid))
    if t_final is None and n_steps is None:
        # fall back to the case defaults only when the caller pinned neither
        t_final = case.t_final
        n_steps = getattr(case, "n_steps", None)
        if t_final is None and n_steps is None:
            raise ValueError(f"case {case.name!r} fixes neither t_final nor n_steps")

    wall_start = time.perf_counter()
    steps = 0

    def take_step(dt, alpha):
        def L(s):
            return spatial_operator(s, law, t, case.bc, characteristic,
                                    alpha=alpha, interface_mean=interface_mean)
        return ssprk3_step(snapshot, dt, L)

    if n_steps is not None:
        for _ in range(n_steps):
            alpha = float(np.max(law.max_wave_speed(snapshot.cells)))
            snapshot = take_step(cfl * grid.dx / alpha, alpha)
            steps += 1
    else:
        tiny = 1e-12 * max(1.0, abs(t_final))
        while snapshot.t < t_final - tiny:
            alpha = float(np.max(law.max_wave_speed(snapshot.cells)))
            dt = min(cfl * grid.dx / alpha, t_final - snapshot.t)
            snapshot = take_step(dt, alpha)
            steps += 1
        snapshot = FieldSnapshot(t_final, grid, snapshot.cells)
    law.validate_state(snapshot.cells, time=snapshot.t)

    if stats is not None:
        stats.steps = steps
        stats.wall_time = time.perf_counter() - wall_start
    return snapshot


def godunov_reference(
    case,
    n: int,
    cfl: float = 0.4,
    t_final: float | None = None,
    stats: RunStats | None = None,
) -> FieldSnapshot:
    """First-order Godunov solver with exact Riemann interface fluxes."""
    law = case.law
    if not isinstance(law, EulerEquations):
        raise ValueError("the Godunov reference solver handles Euler problems only")
    grid = Grid1D(case.x_lo, case.x_hi, n)
    dx = grid.dx
    snapshot = FieldSnapshot(0.0, grid, case.initial_cells(grid))
    if t_final is None:
        t_final = case.t_final

    wall_start = time.perf_counter()
    steps = 0
    tiny = 1e-12 * max(1.0, abs(t_final))
    while snapshot.t < t_final - tiny:
        law.validate_state(snapshot.cells, time=snapshot.t)
        alpha = float(np.max(law.max_wave_speed(snapshot.cells)))
        dt = min(cfl * dx / alpha, t_final - snapshot.t)
        qe = extend_with_ghosts(snapshot, case.bc)
        ql = qe[GHOST_WIDTH - 1:GHOST_WIDTH + grid.n]      # cell left of each interface
        qr = qe[GHOST_WIDTH:GHOST_WIDTH + grid.n + 1]
        rho_l, u_l, p_l = law.primitive(ql)
        rho_r, u_r, p_r = law.primitive(qr)
        rho, u, p = riemann.interface_states(rho_l, u_l, p_l, rho_r, u_r, p_r, law.gamma)
        flux = law.flux(law.conserved(rho, u, p))
        cells = snapshot.cells - dt / dx * (flux[1:] - flux[:-1])
        snapshot = FieldSnapshot(snapshot.t + dt, grid, cells)
        steps += 1
    snapshot = FieldSnapshot(t_final, grid, snapshot.cells)
    law.validate_state(snapshot.cells, time=snapshot.t)

    if stats is not None:
        stats.steps = steps
        stats.wall_time = time.perf_counter() - wall_start
    return snapshot
