"""Coefficient tableaux for five-point WENO schemes.

A scheme is fully described by the substencil reconstruction matrix C, the
linear (optimal) weights gamma, the weighting form, its parameters
(p, eps, c2, c0, mu) and, for embedded forms, the 3x3 correction matrix A.
"""

import enum
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "WenoForm",
    "ReconstructionTableau",
    "InnerWeights",
    "RECONSTRUCTION_MATRIX",
    "LINEAR_WEIGHTS",
    "INNER_FOURTH_ORDER",
    "INNER_THIRD_ORDER",
    "linear_tableau",
    "js_tableau",
    "z_tableau",
]


def _frozen(a) -> np.ndarray:
    out = np.array(a, dtype=float)
    out.setflags(write=False)
    return out


#: Substencil reconstruction coefficients for the right interface x_{j+1/2}.
#: Row k holds the 3-point stencil S_k embedded in the 5-point window
#: (u_{j-2}, ..., u_{j+2}); each row sums to 1.
RECONSTRUCTION_MATRIX = _frozen([
    [2 / 6, -7 / 6, 11 / 6, 0, 0],
    [0, -1 / 6, 5 / 6, 2 / 6, 0],
    [0, 0, 2 / 6, 5 / 6, -1 / 6],
])

#: Linear weights making the substencil combination fifth-order accurate.
LINEAR_WEIGHTS = _frozen([1 / 10, 6 / 10, 3 / 10])


class WenoForm(enum.Enum):
    """Weighting rule used to combine the three substencil values."""

    LINEAR = "linear"
    JS = "js"
    Z = "z"
    EMBEDDED_FORM1 = "embedded-form1"
    EMBEDDED_FORM2 = "embedded-form2"


@dataclass(frozen=True)
class InnerWeights:
    """Convex weights of a four-point inner scheme.

    ``alpha0_2``/``alpha1_2`` act on S0/S1 when S2 is non-smooth;
    ``alpha1_0``/``alpha2_0`` act on S1/S2 when S0 is non-smooth.
    """

    alpha0_2: float
    alpha1_2: float
    alpha1_0: float
    alpha2_0: float

    def __post_init__(self):
        pairs = ((self.alpha0_2, self.alpha1_2), (self.alpha1_0, self.alpha2_0))
        for a, b in pairs:
            if not (0.0 < a < 1.0 and 0.0 < b < 1.0):
                raise ValueError(f"inner weights must lie in (0, 1), got {a}, {b}")
            if abs(a + b - 1.0) > 1e-12:
                raise ValueError(f"inner weight pair must sum to 1, got {a} + {b}")


#: Fourth-order inner scheme: the unique 4th-order combination on each
#: four-point stencil.
INNER_FOURTH_ORDER = InnerWeights(1 / 4, 3 / 4, 1 / 2, 1 / 2)

#: Third-order inner scheme: the superfluous weight is moved onto the
#: middle substencil.
INNER_THIRD_ORDER = InnerWeights(1 / 10, 9 / 10, 7 / 10, 3 / 10)


@dataclass(frozen=True)
class ReconstructionTableau:
    """Complete specification of a (possibly embedded) five-point scheme.

    For embedded forms, ``outer`` names the scheme whose unnormalized
    weights the correction multiplies: LINEAR gives the concrete printed
    schemes (the ones behind the published convergence tables), JS and Z
    the doubly nonlinear variants used for shock computations.

    ``eps`` may be zero: with nontrivial data no division by zero occurs,
    and tests exercise that limit explicitly.
    """

    form: WenoForm = WenoForm.JS
    p: float = 2.0
    eps: float = 1e-6
    c2: float = 1.0
    c0: float = 1.0
    mu: float = 0.25
    A: np.ndarray | None = None
    outer: WenoForm = WenoForm.LINEAR
    C: np.ndarray = field(default=RECONSTRUCTION_MATRIX)
    gamma: np.ndarray = field(default=LINEAR_WEIGHTS)

    def __post_init__(self):
        object.__setattr__(self, "C", _frozen(self.C))
        object.__setattr__(self, "gamma", _frozen(self.gamma))
        if self.C.shape != (3, 5):
            raise ValueError(f"C must be 3x5, got {self.C.shape}")
        if self.gamma.shape != (3,):
            raise ValueError(f"gamma must have 3 entries, got {self.gamma.shape}")
        if np.any(np.abs(self.C.sum(axis=1) - 1.0) > 1e-12):
            raise ValueError("each row of C must sum to 1")
        if abs(self.gamma.sum() - 1.0) > 1e-12:
            raise ValueError("linear weights must sum to 1")
        if self.p <= 0:
            raise ValueError(f"power parameter must be positive, got {self.p}")
        if self.eps < 0:
            raise ValueError(f"eps must be non-negative, got {self.eps}")
        if self.outer not in (WenoForm.LINEAR, WenoForm.JS, WenoForm.Z):
            raise ValueError(f"outer scheme must be linear, js or z, got {self.outer}")
        if self.A is not None:
            object.__setattr__(self, "A", _frozen(self.A))
            self._check_embedding_matrix()
        elif self.form in (WenoForm.EMBEDDED_FORM1, WenoForm.EMBEDDED_FORM2):
            raise ValueError(f"{self.form.value} tableau requires a matrix A")

    def _check_embedding_matrix(self):
        A = self.A
        if A.shape != (3, 3):
            raise ValueError(f"A must be 3x3, got {A.shape}")
        rows = A.sum(axis=1)
        if self.form is WenoForm.EMBEDDED_FORM1:
            if np.any(np.abs(rows - 1.0) > 1e-12):
                raise ValueError("form-1 correction matrix rows must sum to 1")
        elif self.form is WenoForm.EMBEDDED_FORM2:
            if np.any(np.abs(rows) > 1e-12):
                raise ValueError("form-2 correction matrix rows must sum to 0")
            moment = A[:, 0] - 0.5 * A[:, 1] + A[:, 2]
            if np.any(np.abs(moment) > 1e-12):
                raise ValueError(
                    "form-2 rows must cancel the fourth-order smoothness term "
                    "(a_k0 - a_k1/2 + a_k2 = 0)"
                )

    @property
    def is_embedded(self) -> bool:
        return self.form in (WenoForm.EMBEDDED_FORM1, WenoForm.EMBEDDED_FORM2)


def linear_tableau(eps: float = 1e-6) -> ReconstructionTableau:
    """Fifth-order upwind scheme: the nonlinear weights are frozen at gamma."""
    return ReconstructionTableau(form=WenoForm.LINEAR, eps=eps)


def js_tableau(p: float = 2.0, eps: float = 1e-6) -> ReconstructionTableau:
    """Classic smoothness-weighted scheme (Jiang-Shu weights)."""
    return ReconstructionTableau(form=WenoForm.JS, p=p, eps=eps)


def z_tableau(p: float = 2.0, eps: float = 1e-6) -> ReconstructionTableau:
    """Scheme driven by the global smoothness indicator tau (WENO-Z weights)."""
    return ReconstructionTableau(form=WenoForm.Z, p=p, eps=eps)
