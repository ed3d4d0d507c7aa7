"""Modified-wavenumber analysis of the linear sub-schemes.

A WENO scheme with frozen convex weights lambda is a linear scheme whose
semi-discrete update for plane waves on u_t + u_x = 0 reads
du_j/dt = -(i kappa*/dx) u_j. Im(kappa*) < 0 is dissipation, Re(kappa*)
is the dispersion (phase) behaviour. Curves after time discretization use
the three-stage SSP Runge-Kutta amplification polynomial.
"""

from dataclasses import dataclass

import numpy as np

from .tableau import LINEAR_WEIGHTS, InnerWeights, ReconstructionTableau, linear_tableau

__all__ = [
    "LinearScheme",
    "SpectralCurve",
    "uw5_scheme",
    "uw3_scheme",
    "inner_scheme_weights",
    "linear_symbol",
    "rk3_transfer",
    "spectral_curves",
]


@dataclass(frozen=True)
class LinearScheme:
    """Fixed convex interface weights lambda replacing the nonlinear weights."""

    interface_weights: np.ndarray
    name: str = ""

    def __post_init__(self):
        lam = np.array(self.interface_weights, dtype=float)
        lam.setflags(write=False)
        object.__setattr__(self, "interface_weights", lam)
        if lam.shape != (3,):
            raise ValueError(f"interface weights must have 3 entries, got {lam.shape}")
        if np.any(lam < 0) or abs(lam.sum() - 1.0) > 1e-12:
            raise ValueError(f"interface weights must be convex, got {lam}")


def uw5_scheme() -> LinearScheme:
    """Fifth-order upwind scheme (lambda = linear weights)."""
    return LinearScheme(LINEAR_WEIGHTS, name="uw5")


def uw3_scheme(k: int) -> LinearScheme:
    """Third-order upwind scheme working on substencil S_k alone."""
    if k not in (0, 1, 2):
        raise ValueError(f"substencil index must be 0, 1 or 2, got {k}")
    lam = np.zeros(3)
    lam[k] = 1.0
    return LinearScheme(lam, name=f"uw3({k})")


def inner_scheme_weights(inner: InnerWeights, side: str) -> LinearScheme:
    """Four-point inner scheme as a linear scheme.

    ``side='left'`` is the scheme on S0 u S1 (active when S2 is rough),
    ``side='right'`` the one on S1 u S2.
    """
    if side == "left":
        lam = [inner.alpha0_2, inner.alpha1_2, 0.0]
    elif side == "right":
        lam = [0.0, inner.alpha1_0, inner.alpha2_0]
    else:
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")
    return LinearScheme(lam, name=f"inner-{side}")


@dataclass(frozen=True)
class SpectralCurve:
    """Tabulated symbol and per-step SSPRK(3,3) response on a phi grid."""

    phi: np.ndarray
    kstar_re: np.ndarray
    kstar_im: np.ndarray
    amp: np.ndarray
    phase: np.ndarray


def linear_symbol(s: LinearScheme, t: ReconstructionTableau, phi) -> np.ndarray:
    """Scaled modified wavenumber kappa* dx at scaled wavenumber phi.

    With h(phi) = lambda^T C e(phi), e(phi) = (e^{-2i phi}, ..., e^{2i phi}),
    the conservative flux difference of plane-wave data gives
    kappa* dx = -i (1 - e^{-i phi}) h(phi). Vectorized over phi.
    """
    phi = np.asarray(phi, dtype=float)
    coef = s.interface_weights @ t.C
    offsets = np.arange(-2, 3)
    h = np.exp(1j * phi[..., None] * offsets) @ coef
    return -1j * (1.0 - np.exp(-1j * phi)) * h


def rk3_transfer(z) -> np.ndarray:
    """Amplification polynomial G(z) = 1 + z + z^2/2 + z^3/6 of SSPRK(3,3)."""
    z = np.asarray(z, dtype=complex)
    return 1.0 + z + z**2 / 2.0 + z**3 / 6.0


def spectral_curves(
    s: LinearScheme,
    t: ReconstructionTableau | None = None,
    sigma: float = 0.5,
    n: int = 256,
) -> SpectralCurve:
    """Dissipation/dispersion curves on a uniform phi grid over [0, pi].

    Per sample, z = -i sigma kappa* dx feeds the SSPRK(3,3) polynomial;
    amp is the per-step amplitude |G(z)| and phase the per-unit-CFL phase
    -arg(G(z)) / sigma (phi for an exact scheme).
    """
    if sigma <= 0:
        raise ValueError(f"CFL number must be positive, got {sigma}")
    if n < 2:
        raise ValueError(f"need at least 2 phi samples, got {n}")
    if t is None:
        t = linear_tableau()
    phi = np.linspace(0.0, np.pi, n)
    kstar = linear_symbol(s, t, phi)
    g = rk3_transfer(-1j * sigma * kstar)
    return SpectralCurve(
        phi=phi,
        kstar_re=kstar.real,
        kstar_im=kstar.imag,
        amp=np.abs(g),
        phase=-np.angle(g) / sigma + 0.0,  # +0.0 normalizes the -0.0 at phi=0
    )
