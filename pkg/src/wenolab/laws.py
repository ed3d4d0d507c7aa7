"""Conservation laws for the 1D finite-volume solver.

A law exposes its flux, a local wave-speed bound and, for characteristic-wise
reconstruction, the eigensystem of the flux Jacobian. States are arrays with
the component axis last, so every method vectorizes over a grid.
"""

import abc

import numpy as np

__all__ = ["ConservationLaw", "LinearAdvection", "EulerEquations", "PositivityError"]


class PositivityError(RuntimeError):
    """Density or pressure dropped to zero or below."""

    def __init__(self, message: str, cell: int | None = None, time: float | None = None):
        super().__init__(message)
        self.cell = cell
        self.time = time


class ConservationLaw(abc.ABC):
    """Flux, wave speeds and eigenstructure of a hyperbolic system."""

    m: int
    component_names: tuple[str, ...]

    @abc.abstractmethod
    def flux(self, q: np.ndarray) -> np.ndarray:
        """Physical flux f(q), shape like q."""

    @abc.abstractmethod
    def max_wave_speed(self, q: np.ndarray) -> np.ndarray:
        """Largest |eigenvalue| of the flux Jacobian per state."""

    @abc.abstractmethod
    def eigensystem(self, q: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Right eigenvectors R, left eigenvectors R^-1 and eigenvalues.

        Shapes (..., m, m), (..., m, m) and (..., m) for states (..., m).
        """

    def validate_state(self, q: np.ndarray, time: float | None = None) -> None:
        """Raise when a state is physically inadmissible (default: accept)."""


class LinearAdvection(ConservationLaw):
    """Constant-speed transport of one or more independent components."""

    def __init__(self, speed: float = 1.0, components: int = 1,
                 component_names: tuple[str, ...] | None = None):
        self.speed = float(speed)
        self.m = int(components)
        if component_names is None:
            component_names = ("u",) if self.m == 1 else tuple(
                f"u{i}" for i in range(self.m))
        if len(component_names) != self.m:
            raise ValueError("one name per component required")
        self.component_names = tuple(component_names)

    def flux(self, q):
        return self.speed * np.asarray(q, dtype=float)

    def max_wave_speed(self, q):
        q = np.asarray(q)
        return np.full(q.shape[:-1], abs(self.speed))

    def eigensystem(self, q):
        q = np.asarray(q)
        eye = np.broadcast_to(np.eye(self.m), q.shape[:-1] + (self.m, self.m))
        lam = np.full(q.shape[:-1] + (self.m,), self.speed)
        return eye, eye, lam


class EulerEquations(ConservationLaw):
    """1D compressible Euler equations for an ideal gas.

    Conserved state (rho, rho u, E) with E = p/(gamma - 1) + rho u^2 / 2.
    The eigensystem uses the total-enthalpy parameterization in conserved
    variables, eigenvalues ordered (u - c, u, u + c).
    """

    m = 3
    component_names = ("rho", "mom", "E")

    def __init__(self, gamma: float = 1.4):
        self.gamma = float(gamma)

    def conserved(self, rho, u, p) -> np.ndarray:
        rho, u, p = np.broadcast_arrays(*(np.asarray(a, dtype=float) for a in (rho, u, p)))
        return np.stack([rho, rho * u, p / (self.gamma - 1) + 0.5 * rho * u**2], axis=-1)

    def primitive(self, q) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        q = np.asarray(q, dtype=float)
        rho = q[..., 0]
        u = q[..., 1] / rho
        p = (self.gamma - 1) * (q[..., 2] - 0.5 * rho * u**2)
        return rho, u, p

    def pressure(self, q) -> np.ndarray:
        return self.primitive(q)[2]

    def sound_speed(self, q) -> np.ndarray:
        rho, _, p = self.primitive(q)
        return np.sqrt(self.gamma * p / rho)

    def flux(self, q):
        rho, u, p = self.primitive(q)
        q = np.asarray(q, dtype=float)
        return np.stack([q[..., 1], q[..., 1] * u + p, u * (q[..., 2] + p)], axis=-1)

    def max_wave_speed(self, q):
        rho, u, p = self.primitive(q)
        return np.abs(u) + np.sqrt(self.gamma * p / rho)

    def eigensystem(self, q):
        q = np.asarray(q, dtype=float)
        rho, u, p = self.primitive(q)
        c = np.sqrt(self.gamma * p / rho)
        H = (q[..., 2] + p) / rho
        b1 = (self.gamma - 1) / c**2
        b2 = 0.5 * b1 * u**2
        one = np.ones_like(u)

        R = np.stack([
            np.stack([one, one, one], axis=-1),
            np.stack([u - c, u, u + c], axis=-1),
            np.stack([H - u * c, 0.5 * u**2, H + u * c], axis=-1),
        ], axis=-2)
        L = 0.5 * np.stack([
            np.stack([b2 + u / c, -b1 * u - 1 / c, b1 * one], axis=-1),
            np.stack([2 * (1 - b2), 2 * b1 * u, -2 * b1 * one], axis=-1),
            np.stack([b2 - u / c, -b1 * u + 1 / c, b1 * one], axis=-1),
        ], axis=-2)
        lam = np.stack([u - c, u, u + c], axis=-1)
        return R, L, lam

    def validate_state(self, q, time=None):
        rho, _, p = self.primitive(q)
        bad = (rho <= 0) | (p <= 0) | ~np.isfinite(rho) | ~np.isfinite(p)
        if np.any(bad):
            cell = int(np.argmax(bad.reshape(-1)))
            raise PositivityError(
                f"non-positive density or pressure at cell {cell}"
                + (f", t={time:.6g}" if time is not None else ""),
                cell=cell,
                time=time,
            )
