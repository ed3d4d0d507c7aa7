"""Error norms, convergence studies and scheme naming.

Scheme names follow the CLI contract: ``linear``, ``js``, ``z``,
``ejs:<c2>,<c0>`` (form-1 embedded), ``ez:<c2>,<c0>`` (form-2 embedded)
and ``weno45`` as an alias for ``ejs:2,2``. Proportions accept plain
decimals or fractions like ``2/3``. An optional third token picks the
outer scheme whose weights the correction multiplies (default ``linear``):
``ejs:2/3,6/7,js`` and ``ez:2/3,6/7,z`` are the doubly nonlinear variants
that withstand interacting strong shocks at the cost of extra dissipation.
"""

from dataclasses import dataclass

import numpy as np

from .core import weno_derivative
from .design import embedded_js_tableau, embedded_z_tableau
from .problems import ProblemCase
from .solver import FieldSnapshot
from .tableau import (
    ReconstructionTableau,
    WenoForm,
    js_tableau,
    linear_tableau,
    z_tableau,
)

__all__ = [
    "l1_error",
    "scaled_abs_sum",
    "ConvergenceRow",
    "ConvergenceTable",
    "convergence_study",
    "scheme_from_name",
    "scheme_label",
]


def l1_error(numeric: FieldSnapshot, reference, component: int = 0) -> float:
    """Cell-width weighted L1 distance sum_j |num_j - ref_j| dx of one component."""
    ref = np.asarray(reference, dtype=float)
    if ref.ndim == 1:
        ref = ref[:, None]
    if ref.shape[0] != numeric.grid.n:
        raise ValueError(
            f"reference has {ref.shape[0]} rows for a grid of {numeric.grid.n} cells")
    diff = numeric.cells[:, component] - ref[:, min(component, ref.shape[1] - 1)]
    return float(np.sum(np.abs(diff)) * numeric.grid.dx)


def scaled_abs_sum(approx, exact, dx: float, length: float) -> float:
    """Length-normalized absolute error sum: sum_j |a_j - e_j| dx / L.

    On a unit-length domain this is exactly the dx-weighted absolute sum;
    the normalization makes the value independent of the domain extent.
    """
    approx = np.asarray(approx, dtype=float)
    exact = np.asarray(exact, dtype=float)
    if approx.shape != exact.shape:
        raise ValueError(f"shape mismatch: {approx.shape} vs {exact.shape}")
    return float(np.sum(np.abs(approx - exact)) * dx / length)


@dataclass(frozen=True)
class ConvergenceRow:
    n: int
    error: float
    order: float | None  # None on the first row


@dataclass(frozen=True)
class ConvergenceTable:
    case: str
    scheme: str
    rows: tuple[ConvergenceRow, ...]

    def __str__(self) -> str:
        lines = [f"{self.case} / {self.scheme}", f"{'N':>6}  {'error':>12}  {'order':>6}"]
        for r in self.rows:
            order = f"{r.order:6.2f}" if r.order is not None else "     -"
            lines.append(f"{r.n:>6}  {r.error:12.4e}  {order}")
        return "\n".join(lines)

    @property
    def errors(self) -> np.ndarray:
        return np.array([r.error for r in self.rows])

    @property
    def orders(self) -> np.ndarray:
        return np.array([r.order for r in self.rows[1:]])


def convergence_study(case: ProblemCase, t: ReconstructionTableau,
                      ns=(101, 201, 401, 801, 1601)) -> ConvergenceTable:
    """WENO differentiation errors and observed orders over a grid sequence.

    The sample grid includes both domain endpoints (dx = L/(N-1)), halving
    dx from row to row for the default N sequence; ghost values are supplied
    exactly from the case's test function.
    """
    if case.kind != "derivative":
        raise ValueError(f"case {case.name!r} is not a derivative test")
    length = case.x_hi - case.x_lo
    rows = []
    prev = None
    for n in ns:
        x = np.linspace(case.x_lo, case.x_hi, int(n))
        dx = x[1] - x[0]
        ghost = (case.func(case.x_lo + dx * np.arange(-3, 0)),
                 case.func(case.x_hi + dx * np.arange(1, 4)))
        deriv = weno_derivative(case.func(x), t, dx, ghost)
        err = scaled_abs_sum(deriv, case.dfunc(x), dx, length)
        order = None if prev is None else float(np.log2(prev / err))
        rows.append(ConvergenceRow(n=int(n), error=err, order=order))
        prev = err
    return ConvergenceTable(case=case.name, scheme=scheme_label(t), rows=tuple(rows))


def _parse_proportion(token: str) -> float:
    token = token.strip()
    if "/" in token:
        num, den = token.split("/", 1)
        return float(num) / float(den)
    return float(token)


_OUTER_NAMES = {"linear": WenoForm.LINEAR, "js": WenoForm.JS, "z": WenoForm.Z}


def scheme_from_name(name: str, eps: float | None = None, p: float | None = None,
                     mu: float | None = None) -> ReconstructionTableau:
    """Build the tableau named by the CLI scheme syntax."""
    kw = {}
    if eps is not None:
        kw["eps"] = eps
    if p is not None:
        kw["p"] = p
    name = name.strip().lower()
    if name == "linear":
        return linear_tableau(**{k: v for k, v in kw.items() if k == "eps"})
    if name == "js":
        return js_tableau(**kw)
    if name == "z":
        return z_tableau(**kw)
    if name == "weno45":
        return embedded_js_tableau(2.0, 2.0, **kw)
    if ":" in name:
        head, _, tail = name.partition(":")
        parts = tail.split(",")
        outer = WenoForm.LINEAR
        if len(parts) == 3:
            try:
                outer = _OUTER_NAMES[parts.pop()]
            except KeyError:
                raise ValueError(
                    f"unknown outer scheme in {name!r}; use linear, js or z") from None
        if len(parts) == 2:
            try:
                c2, c0 = (_parse_proportion(s) for s in parts)
            except ValueError:
                raise ValueError(f"cannot parse proportions in scheme {name!r}") from None
            if head == "ejs":
                return embedded_js_tableau(c2, c0, outer=outer, **kw)
            if head == "ez":
                if mu is not None:
                    kw["mu"] = mu
                return embedded_z_tableau(c2, c0, outer=outer, **kw)
    raise ValueError(
        f"unknown scheme {name!r}; use linear, js, z, weno45, "
        f"ejs:<c2>,<c0>[,<outer>] or ez:<c2>,<c0>[,<outer>]")


def scheme_label(t: ReconstructionTableau) -> str:
    """Human-readable scheme name in CLI syntax."""
    if t.form is WenoForm.LINEAR:
        return "linear"
    if t.form is WenoForm.JS:
        return "js"
    if t.form is WenoForm.Z:
        return "z"
    head = "ejs" if t.form is WenoForm.EMBEDDED_FORM1 else "ez"
    suffix = "" if t.outer is WenoForm.LINEAR else f",{t.outer.value}"
    return f"{head}:{t.c2:g},{t.c0:g}{suffix}"
