"""Designing embedded-scheme correction matrices.

The embedding problem: choose the 3x3 matrix A so the corrected weights
reproduce the outer scheme on smooth data (consistency) and converge to
prescribed inner weights when exactly one outer substencil is non-smooth
(embedding). Both conditions are linear in A; the solutions below are the
closed-form families for the five-point scheme.
"""

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .core import SmoothnessTriple, weights_embedded
from .tableau import (
    LINEAR_WEIGHTS,
    InnerWeights,
    ReconstructionTableau,
    WenoForm,
)

__all__ = [
    "EmbeddingSpec",
    "VerificationReport",
    "design_form1",
    "design_form2",
    "proportions_from_inner",
    "inner_weights_from_proportions",
    "verify_embedding",
    "emit_tableau",
    "embedded_js_tableau",
    "embedded_z_tableau",
]


@dataclass(frozen=True)
class EmbeddingSpec:
    """Target of an embedding design.

    ``c2`` and ``c0`` are the relative proportions tying the inner weights
    to the linear weights; ``free`` holds the form-1 free parameters
    (a01, a02, a20, a21), defaulting to the all-round choice
    (0, c2/3, c0/3, 0). Custom free parameters may leave the convex family
    (negative matrix entries); weight convexity is only guaranteed for the
    defaults with c2, c0 in (0, 3).
    """

    c2: float
    c0: float
    form: WenoForm = WenoForm.EMBEDDED_FORM1
    p: float = 2.0
    mu: float = 0.25
    free: tuple[float, float, float, float] | None = None

    def __post_init__(self):
        if self.form not in (WenoForm.EMBEDDED_FORM1, WenoForm.EMBEDDED_FORM2):
            raise ValueError(f"embedding spec requires an embedded form, got {self.form}")
        if self.c2 <= 0 or self.c0 <= 0:
            raise ValueError(f"relative proportions must be positive, got {self.c2}, {self.c0}")
        if self.form is WenoForm.EMBEDDED_FORM1 and not (self.c2 < 3 and self.c0 < 3):
            raise ValueError(
                f"form 1 is convex only for c2, c0 in (0, 3), got {self.c2}, {self.c0}"
            )
        if self.form is WenoForm.EMBEDDED_FORM2:
            if self.mu <= 0:
                raise ValueError(f"mu must be positive, got {self.mu}")
            if self.p < 1:
                raise ValueError(f"form 2 requires p >= 1, got {self.p}")

    def free_parameters(self) -> tuple[float, float, float, float]:
        if self.free is not None:
            return self.free
        return (0.0, self.c2 / 3.0, self.c0 / 3.0, 0.0)


@dataclass
class VerificationReport:
    """Outcome of checking a candidate correction matrix against a spec."""

    consistency_ok: bool
    embedding_ok: bool
    limit_errors: tuple[float, float]
    messages: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.consistency_ok and self.embedding_ok


def design_form1(spec: EmbeddingSpec) -> np.ndarray:
    """Correction matrix of the four-parameter form-1 family.

    With free parameters (a01, a02, a20, a21), the remaining entries are
    fixed by consistency (rows sum to 1) and the embedding ratios
    a02/a12 = c2, a20/a10 = c0.
    """
    if spec.form is not WenoForm.EMBEDDED_FORM1:
        raise ValueError("design_form1 requires a form-1 spec")
    a01, a02, a20, a21 = spec.free_parameters()
    a12 = a02 / spec.c2
    a10 = a20 / spec.c0
    return np.array([
        [1.0 - a01 - a02, a01, a02],
        [a10, 1.0 - a10 - a12, a12],
        [a20, a21, 1.0 - a20 - a21],
    ])


def design_form2(spec: EmbeddingSpec) -> np.ndarray:
    """Correction matrix of the one-parameter form-2 family.

    Rows take the shape (s_k, 0, -s_k) with s1 = mu^(1/p),
    s0 = c2^(1/p) s1 and s2 = c0^(1/p) s1: the unique shape whose rows sum
    to zero, cancel the fourth-order smoothness term, and satisfy the
    embedding ratios. Signs are fixed positive (any row may be negated
    without changing the weights).
    """
    if spec.form is not WenoForm.EMBEDDED_FORM2:
        raise ValueError("design_form2 requires a form-2 spec")
    s1 = spec.mu ** (1.0 / spec.p)
    s0 = spec.c2 ** (1.0 / spec.p) * s1
    s2 = spec.c0 ** (1.0 / spec.p) * s1
    return np.array([
        [s0, 0.0, -s0],
        [s1, 0.0, -s1],
        [s2, 0.0, -s2],
    ])


def proportions_from_inner(inner: InnerWeights) -> tuple[float, float]:
    """Relative proportions (c2, c0) implied by four-point inner weights."""
    g0, g1, g2 = LINEAR_WEIGHTS
    c2 = (inner.alpha0_2 / inner.alpha1_2) * (g1 / g0)
    c0 = (inner.alpha2_0 / inner.alpha1_0) * (g1 / g2)
    return c2, c0


def inner_weights_from_proportions(c2: float, c0: float) -> InnerWeights:
    """Inverse of :func:`proportions_from_inner` (normalized pairs)."""
    g0, g1, g2 = LINEAR_WEIGHTS
    a0 = c2 * g0 / (c2 * g0 + g1)
    a2 = c0 * g2 / (g1 + c0 * g2)
    return InnerWeights(a0, 1.0 - a0, 1.0 - a2, a2)


#: beta contrast used for the numerical embedding-limit check: large enough
#: that O(1/M) residuals are invisible, small enough that (tau/beta)^p
#: cannot overflow.
_LIMIT_CONTRAST = 1e12
_LIMIT_TOL = 1e-6


def _limit_weights(A: np.ndarray, spec: EmbeddingSpec, beta) -> np.ndarray:
    t = ReconstructionTableau(form=spec.form, p=spec.p, eps=1e-12, c2=spec.c2,
                              c0=spec.c0, mu=spec.mu, A=A)
    beta = np.asarray(beta, dtype=float)
    triple = SmoothnessTriple(beta=beta, tau=np.abs(beta[..., 2] - beta[..., 0]))
    return weights_embedded(triple, t)


def verify_embedding(A, spec: EmbeddingSpec) -> VerificationReport:
    """Check a candidate matrix against consistency and embedding conditions.

    Failures are reported, never raised. The numerical limit check evaluates
    the weights at beta = (1, 1, M) and (M, 1, 1) with M = 1e12 and compares
    them to the inner weights implied by (c2, c0).
    """
    A = np.asarray(A, dtype=float)
    messages: list[str] = []
    rows = A.sum(axis=1)

    if spec.form is WenoForm.EMBEDDED_FORM1:
        consistency_ok = bool(np.all(np.abs(rows - 1.0) <= 1e-12))
        if not consistency_ok:
            messages.append(f"form-1 row sums differ from 1: {rows}")
        # embedding ratios a02 = c2 a12, a20 = c0 a10 (cross-product form)
        ratio_res = (abs(A[0, 2] - spec.c2 * A[1, 2]), abs(A[2, 0] - spec.c0 * A[1, 0]))
    else:
        sums_ok = bool(np.all(np.abs(rows) <= 1e-12))
        moment = A[:, 0] - 0.5 * A[:, 1] + A[:, 2]
        moment_ok = bool(np.all(np.abs(moment) <= 1e-12))
        consistency_ok = sums_ok and moment_ok
        if not sums_ok:
            messages.append(f"form-2 row sums differ from 0: {rows}")
        if not moment_ok:
            messages.append(f"form-2 fourth-order term does not cancel: {moment}")
        # sign freedom per row: compare magnitudes
        r2, r0 = spec.c2 ** (1.0 / spec.p), spec.c0 ** (1.0 / spec.p)
        ratio_res = (abs(abs(A[0, 2]) - r2 * abs(A[1, 2])),
                     abs(abs(A[2, 0]) - r0 * abs(A[1, 0])))

    ratios_ok = all(r <= 1e-12 for r in ratio_res)
    if not ratios_ok:
        messages.append(f"embedding ratio residuals: {ratio_res}")

    inner = inner_weights_from_proportions(spec.c2, spec.c0)
    targets = (
        ([1.0, 1.0, _LIMIT_CONTRAST], [inner.alpha0_2, inner.alpha1_2, 0.0]),
        ([_LIMIT_CONTRAST, 1.0, 1.0], [0.0, inner.alpha1_0, inner.alpha2_0]),
    )
    limit_errors = []
    for beta, target in targets:
        try:
            om = _limit_weights(A, spec, beta)
            limit_errors.append(float(np.abs(om - target).sum()))
        except ValueError as exc:
            limit_errors.append(float("inf"))
            messages.append(f"limit evaluation rejected the matrix: {exc}")
    limits_ok = all(e < _LIMIT_TOL for e in limit_errors)
    if not limits_ok:
        messages.append(
            f"weights at beta contrast {_LIMIT_CONTRAST:g} miss the inner weights: "
            f"errors {limit_errors}"
        )

    return VerificationReport(
        consistency_ok=consistency_ok,
        embedding_ok=ratios_ok and limits_ok,
        limit_errors=(limit_errors[0], limit_errors[1]),
        messages=messages,
    )


def embedded_js_tableau(
    c2: float,
    c0: float,
    p: float = 2.0,
    eps: float = 1e-6,
    free: tuple[float, float, float, float] | None = None,
    outer: WenoForm = WenoForm.LINEAR,
) -> ReconstructionTableau:
    """Form-1 embedded scheme.

    The default linear outer weights give the concrete printed scheme (the
    one behind the published derivative-convergence table); ``outer=JS``
    gives the doubly nonlinear shock-capturing variant.
    """
    spec = EmbeddingSpec(c2=c2, c0=c0, form=WenoForm.EMBEDDED_FORM1, p=p, free=free)
    return ReconstructionTableau(form=WenoForm.EMBEDDED_FORM1, p=p, eps=eps,
                                 c2=c2, c0=c0, A=design_form1(spec), outer=outer)


def embedded_z_tableau(
    c2: float,
    c0: float,
    p: float = 2.0,
    mu: float = 0.25,
    eps: float = 1e-6,
    outer: WenoForm = WenoForm.LINEAR,
) -> ReconstructionTableau:
    """Form-2 embedded scheme generalizing the tau-weighted weights.

    The default linear outer weights give the closed-form corrections
    ``1 + mu c_k (tau/(beta_k+eps))^p``; ``outer=Z`` multiplies them onto
    the tau-weighted scheme for shock computations.
    """
    spec = EmbeddingSpec(c2=c2, c0=c0, form=WenoForm.EMBEDDED_FORM2, p=p, mu=mu)
    return ReconstructionTableau(form=WenoForm.EMBEDDED_FORM2, p=p, eps=eps,
                                 c2=c2, c0=c0, mu=mu, A=design_form2(spec), outer=outer)


# --- tableau rendering ------------------------------------------------------

#: Structural zero pattern of C: entry (k, i) is part of substencil S_k.
_C_SUPPORT = [(0, 1, 2), (1, 2, 3), (2, 3, 4)]


def _exact_fraction(x: float) -> Fraction | None:
    """Small-denominator rational matching x to a few ulps, else None.

    The tolerance admits rationals whose float arithmetic drifted by a few
    ulps (1 - 2/3 - ...) while rejecting surds: any irrational's best
    approximation with denominator <= 1e6 sits orders of magnitude further
    away than machine precision.
    """
    frac = Fraction(x).limit_denominator(10**6)
    return frac if abs(float(frac) - x) <= 8e-16 * max(1.0, abs(x)) else None


def _render_block(values, common_denominator: bool) -> list[list[str]]:
    """Render a list of rows of floats; None marks a structural blank.

    Fractions within a block share one denominator when requested (the C
    and gamma blocks mirror the printed 2/6 ... 6/10 layout); irrational
    entries fall back to decimals.
    """
    fracs = [[None if v is None else _exact_fraction(v) for v in row] for row in values]
    lcd = 1
    if common_denominator:
        for row in fracs:
            for f in row:
                if f is not None and f.denominator > 1:
                    lcd = lcd * f.denominator // np.gcd(lcd, f.denominator)
    out = []
    for vrow, frow in zip(values, fracs):
        line = []
        for v, f in zip(vrow, frow):
            if v is None:
                line.append("")
            elif f is None:
                line.append(f"{v:.10g}")
            elif f.denominator == 1:
                line.append(str(f.numerator))
            elif common_denominator:
                line.append(f"{f.numerator * (lcd // f.denominator)}/{lcd}")
            else:
                line.append(f"{f.numerator}/{f.denominator}")
        out.append(line)
    return out


def emit_tableau(t: ReconstructionTableau) -> str:
    """Render the C | gamma | A blocks as fixed-width text.

    C keeps the staircase layout (blanks outside each substencil); the A
    block is omitted for non-embedded tableaux.
    """
    c_vals = [[t.C[k, i] if i in _C_SUPPORT[k] else None for i in range(5)]
              for k in range(3)]
    blocks = [
        _render_block(c_vals, common_denominator=True),
        _render_block([[g] for g in t.gamma], common_denominator=True),
    ]
    if t.A is not None:
        blocks.append(_render_block(t.A.tolist(), common_denominator=False))

    col_widths = [
        [max(len(row[i]) for row in block) for i in range(len(block[0]))]
        for block in blocks
    ]
    lines = []
    for k in range(3):
        parts = [
            "  ".join(c.rjust(w) for c, w in zip(block[k], widths))
            for block, widths in zip(blocks, col_widths)
        ]
        lines.append(" | ".join(parts))
    return "\n".join(lines)
