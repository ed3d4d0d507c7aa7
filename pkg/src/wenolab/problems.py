"""Registry of benchmark problems.

PDE cases carry a conservation law, domain, boundary condition and an
initial-cell-average builder; derivative cases carry the test function and
its exact derivative for the WENO differentiation studies. Reference
solutions are classified by how they are obtained (closed form, exact
Riemann solution, fine-grid Godunov or fine-grid self reference).
"""

import enum
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import riemann, solver
from .laws import ConservationLaw, EulerEquations, LinearAdvection
from .solver import BoundaryCondition, Grid1D

__all__ = [
    "Reference",
    "ProblemCase",
    "PROBLEMS",
    "get_case",
    "case_names",
    "cell_averages",
    "shu_profile",
    "reference_profile",
]


class Reference(enum.Enum):
    EXACT = "exact"
    RIEMANN_ORACLE = "riemann-oracle"
    GODUNOV_FINE = "godunov-fine"
    SELF_FINE = "self-fine"
    NONE = "none"


@dataclass(frozen=True)
class ProblemCase:
    """One registered benchmark configuration."""

    name: str
    kind: str                       # "pde" or "derivative"
    x_lo: float
    x_hi: float
    reference: Reference
    law: ConservationLaw | None = None
    bc: BoundaryCondition | None = None
    t_final: float | None = None
    n_steps: int | None = None      # fixed-step protocol (plane waves)
    default_n: int = 201
    default_cfl: float = 0.5
    initial: Callable | None = None           # x -> primitive/state rows
    exact: Callable | None = None              # (x, t) -> state rows, when closed form
    func: Callable | None = None                # derivative cases: u(x)
    dfunc: Callable | None = None               # derivative cases: u'(x)
    breakpoints: tuple[float, ...] = ()

    def initial_cells(self, grid: Grid1D) -> np.ndarray:
        return cell_averages(self.initial, grid, self.breakpoints)


def cell_averages(fn, grid: Grid1D, breakpoints=()) -> np.ndarray:
    """Cell averages of ``fn(x) -> (..., m)`` by Gauss-Legendre quadrature.

    Cells containing a breakpoint are split there so kinks and jumps are
    integrated exactly on each smooth piece.
    """
    nodes, wts = np.polynomial.legendre.leggauss(9)
    edges = grid.edges()
    out = None
    for j in range(grid.n):
        a, b = edges[j], edges[j + 1]
        cuts = [a] + [c for c in breakpoints if a < c < b] + [b]
        acc = 0.0
        for lo, hi in zip(cuts[:-1], cuts[1:]):
            xq = 0.5 * (hi - lo) * nodes + 0.5 * (hi + lo)
            acc = acc + 0.5 * (hi - lo) * np.einsum("q,q...->...", wts, np.asarray(fn(xq), dtype=float))
        val = np.asarray(acc, dtype=float) / (b - a)
        if out is None:
            out = np.empty((grid.n,) + val.shape)
        out[j] = val
    return out if out.ndim > 1 else out[:, None]


# --- initial conditions -------------------------------------------------------

def shu_profile(x) -> np.ndarray:
    """Composite advection profile: smoothed Gaussians, square, triangle, ellipse."""
    z, a, alpha, ep = -0.7, 0.5, 10.0, 1.0 / 200.0
    beta = np.log(2.0) / (36.0 * ep**2)

    def G(xx, center):
        return np.exp(-beta * (xx - center) ** 2)

    def F(xx, center):
        return np.sqrt(np.maximum(1.0 - alpha**2 * (xx - center) ** 2, 0.0))

    x = np.asarray(x, dtype=float)
    u = np.zeros_like(x)
    m = (x >= -0.8) & (x <= -0.6)
    u[m] = (G(x[m], z - ep) + G(x[m], z + ep) + G(x[m], z)) / 6.0
    m = (x >= -0.4) & (x <= -0.2)
    u[m] = 1.0
    m = (x >= 0.0) & (x <= 0.2)
    u[m] = 1.0 - np.abs(10.0 * (x[m] - 0.1))
    m = (x >= 0.4) & (x <= 0.6)
    u[m] = (F(x[m], a - ep) + F(x[m], a + ep) + 4.0 * F(x[m], a)) / 6.0
    return u


# region edges, the triangle peak, and the interior support edges of the
# two shifted ellipse terms (sqrt kinks at a-eps+1/alpha and a+eps-1/alpha)
_SHU_BREAKS = (-0.8, -0.6, -0.4, -0.2, 0.0, 0.1, 0.2, 0.4, 0.405, 0.595, 0.6)


def _plane_wave(kappa):
    def fn(x):
        x = np.asarray(x, dtype=float)
        return np.stack([np.cos(kappa * x), np.sin(kappa * x)], axis=-1)
    return fn


def _plane_wave_exact(kappa):
    def fn(x, t):
        x = np.asarray(x, dtype=float)
        return np.stack([np.cos(kappa * (x - t)), np.sin(kappa * (x - t))], axis=-1)
    return fn


def _two_state(law: EulerEquations, left, right, x_jump=0.0):
    ql = law.conserved(*left)
    qr = law.conserved(*right)

    def fn(x):
        x = np.asarray(x, dtype=float)
        return np.where(x[..., None] < x_jump, ql, qr)
    return fn


_euler = EulerEquations()


def _shu_osher_initial(x):
    x = np.asarray(x, dtype=float)
    rho = np.where(x < 0.0, 3.857143, 1.0 + 0.2 * np.sin(5.0 * x))
    u = np.where(x < 0.0, 2.629369, 0.0)
    p = np.where(x < 0.0, 10.33333, 1.0)
    return _euler.conserved(rho, u, p)


def _blast_initial(x):
    x = np.asarray(x, dtype=float)
    p = np.where(x <= 0.1, 1000.0, np.where(x >= 0.9, 100.0, 0.01))
    return _euler.conserved(np.ones_like(x), np.zeros_like(x), p)


_SOD = ((1.0, 0.0, 1.0), (0.125, 0.0, 0.1))
_LAX = ((0.445, 0.689, 3.528), (0.5, 0.0, 0.571))
_R123 = ((1.0, -2.0, 0.4), (1.0, 2.0, 0.4))


def _riemann_case(name, states, t_final):
    return ProblemCase(
        name=name,
        kind="pde",
        x_lo=-1.0,
        x_hi=1.0,
        law=_euler,
        bc=solver.outflow(),
        t_final=t_final,
        default_cfl=0.4,
        initial=_two_state(_euler, *states),
        breakpoints=(0.0,),
        reference=Reference.RIEMANN_ORACLE,
    )


PROBLEMS: dict[str, ProblemCase] = {}


def _register(case: ProblemCase):
    PROBLEMS[case.name] = case


_register(ProblemCase(
    name="shu-linear",
    kind="pde",
    x_lo=-1.0, x_hi=1.0,
    law=LinearAdvection(1.0),
    bc=solver.periodic(),
    t_final=2.0,
    initial=shu_profile,
    exact=lambda x, t: shu_profile(np.mod(x - t + 1.0, 2.0) - 1.0),
    breakpoints=_SHU_BREAKS,
    reference=Reference.EXACT,
))

for _k in (10, 20):
    _register(ProblemCase(
        name=f"plane-wave-{_k}pi",
        kind="pde",
        x_lo=-1.0, x_hi=1.0,
        law=LinearAdvection(1.0, components=2, component_names=("re", "im")),
        bc=solver.periodic(),
        n_steps=800,
        initial=_plane_wave(_k * np.pi),
        exact=_plane_wave_exact(_k * np.pi),
        reference=Reference.EXACT,
    ))

_register(_riemann_case("sod", _SOD, 0.4))
_register(_riemann_case("lax", _LAX, 0.25))
_register(_riemann_case("r123", _R123, 0.25))

_register(ProblemCase(
    name="blast",
    kind="pde",
    x_lo=0.0, x_hi=1.0,
    law=_euler,
    bc=solver.reflective(),
    t_final=0.038,
    default_n=400,
    default_cfl=0.4,
    initial=_blast_initial,
    breakpoints=(0.1, 0.9),
    reference=Reference.GODUNOV_FINE,
))

_register(ProblemCase(
    name="shu-osher",
    kind="pde",
    x_lo=-1.0, x_hi=9.0,
    law=_euler,
    bc=solver.outflow(),
    t_final=1.8,
    default_cfl=0.4,
    initial=_shu_osher_initial,
    breakpoints=(0.0,),
    reference=Reference.SELF_FINE,
))

_register(ProblemCase(
    name="tanh-deriv",
    kind="derivative",
    x_lo=-1.0, x_hi=1.0,
    func=lambda x: np.tanh(10.0 * x),
    dfunc=lambda x: 10.0 / np.cosh(10.0 * x) ** 2,
    reference=Reference.EXACT,
))


def _sin_crit(x):
    return np.sin(np.pi * x - np.sin(np.pi * x) / np.pi)


def _sin_crit_prime(x):
    return np.cos(np.pi * x - np.sin(np.pi * x) / np.pi) * (np.pi - np.cos(np.pi * x))


_register(ProblemCase(
    name="sin-crit-deriv",
    kind="derivative",
    x_lo=-1.0, x_hi=1.0,
    func=_sin_crit,
    dfunc=_sin_crit_prime,
    reference=Reference.EXACT,
))


def case_names() -> list[str]:
    return sorted(PROBLEMS)


def get_case(name: str) -> ProblemCase:
    try:
        return PROBLEMS[name]
    except KeyError:
        raise KeyError(
            f"unknown problem {name!r}; registered: {', '.join(case_names())}"
        ) from None


def reference_profile(case: ProblemCase, grid: Grid1D, t: float,
                      expensive: bool = False, cfl: float = 0.4) -> np.ndarray | None:
    """Reference state at the cell centers of ``grid`` at time ``t``.

    Closed-form and Riemann references are always computed; Godunov and
    fine-grid self references only when ``expensive`` is set (they take
    far longer than the run itself). Riemann references are evaluated as
    cell-center point values of the self-similar solution.
    """
    x = grid.centers()
    if case.reference is Reference.EXACT:
        if case.kind == "derivative":
            return case.dfunc(x)[:, None]
        # cell averages of the exact solution, with any profile kinks
        # advected to their position at time t
        bps = case.breakpoints
        if bps and isinstance(case.law, LinearAdvection):
            period = case.x_hi - case.x_lo
            shift = case.law.speed * t
            bps = tuple(sorted(
                (b + shift - case.x_lo) % period + case.x_lo for b in bps))
        vals = cell_averages(lambda xx: case.exact(xx, t), grid, bps)
        return vals.reshape(grid.n, -1)
    if case.reference is Reference.RIEMANN_ORACLE:
        law = case.law
        rho_l, u_l, p_l = law.primitive(case.initial(np.array([case.x_lo])))
        rho_r, u_r, p_r = law.primitive(case.initial(np.array([case.x_hi])))
        sol = riemann.solve_star((rho_l[0], u_l[0], p_l[0]),
                                 (rho_r[0], u_r[0], p_r[0]), law.gamma)
        if t <= 0:
            return case.initial_cells(grid)
        rho, u, p = riemann.sample(sol, x / t)
        return law.conserved(rho, u, p)
    if not expensive:
        return None
    if case.reference is Reference.GODUNOV_FINE:
        snap = solver.godunov_reference(case, n=20000, cfl=cfl, t_final=t)
        return _restrict(snap, grid)
    if case.reference is Reference.SELF_FINE:
        from .tableau import js_tableau
        snap = solver.run_simulation(case, js_tableau(eps=1e-12),
                                     n=2000, cfl=cfl, t_final=t)
        return _restrict(snap, grid)
    return None


def _restrict(snap: solver.FieldSnapshot, grid: Grid1D) -> np.ndarray:
    """Transfer a fine solution onto a coarse grid.

    Block-averages when the cell counts divide evenly, otherwise linearly
    interpolates the fine cell averages at the coarse cell centers.
    """
    fine = snap.cells
    if fine.shape[0] % grid.n == 0:
        r = fine.shape[0] // grid.n
        return fine.reshape(grid.n, r, -1).mean(axis=1)
    xc = grid.centers()
    xf = snap.grid.centers()
    return np.stack([np.interp(xc, xf, fine[:, k]) for k in range(fine.shape[1])], axis=1)
