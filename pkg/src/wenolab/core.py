"""Stencil-level WENO reconstruction.

All operations act on five-point windows ``(u_{j-2}, ..., u_{j+2})`` and are
vectorized: a window argument may have any leading shape as long as the last
axis has length 5. Reconstructions target the right interface x_{j+1/2};
the right-biased value at x_{j-1/2} of the mirrored problem is obtained by
applying the same operation to the reversed window.
"""

from dataclasses import dataclass

import numpy as np

from .tableau import ReconstructionTableau, WenoForm

__all__ = [
    "SmoothnessTriple",
    "substencil_reconstruct",
    "smoothness_indicators",
    "weights_js",
    "weights_z",
    "weights_embedded",
    "nonlinear_weights",
    "reconstruct_left_interface",
    "weno_derivative",
]


@dataclass(frozen=True)
class SmoothnessTriple:
    """Jiang-Shu indicators beta_k (last axis, length 3) and tau = |beta2 - beta0|."""

    beta: np.ndarray
    tau: np.ndarray


def _window(w) -> np.ndarray:
    w = np.asarray(w, dtype=float)
    if w.shape[-1] != 5:
        raise ValueError(f"stencil window must have 5 values on the last axis, got {w.shape}")
    return w


def substencil_reconstruct(w, t: ReconstructionTableau) -> np.ndarray:
    """Third-order substencil estimates (u0, u1, u2) at x_{j+1/2}, i.e. C @ v."""
    w = _window(w)
    return w @ t.C.T


def smoothness_indicators(w) -> SmoothnessTriple:
    """Smoothness indicators in undivided-difference form.

    beta_k combines the squared second difference (weight 13/12) and the
    squared one-sided first difference (weight 1/4) of substencil S_k.
    """
    w = _window(w)
    v0, v1, v2, v3, v4 = (w[..., i] for i in range(5))
    b0 = 13 / 12 * (v0 - 2 * v1 + v2) ** 2 + 0.25 * (v0 - 4 * v1 + 3 * v2) ** 2
    b1 = 13 / 12 * (v1 - 2 * v2 + v3) ** 2 + 0.25 * (v1 - v3) ** 2
    b2 = 13 / 12 * (v2 - 2 * v3 + v4) ** 2 + 0.25 * (3 * v2 - 4 * v3 + v4) ** 2
    beta = np.stack([b0, b1, b2], axis=-1)
    return SmoothnessTriple(beta=beta, tau=np.abs(b2 - b0))


def _normalize(om: np.ndarray) -> np.ndarray:
    # eps = 0 on degenerate data yields inf/nan weights by design; callers
    # downstream check finiteness, so suppress the arithmetic warnings here
    with np.errstate(divide="ignore", invalid="ignore"):
        return om / om.sum(axis=-1, keepdims=True)


def weights_js(b: SmoothnessTriple, t: ReconstructionTableau) -> np.ndarray:
    """Normalized weights gamma_k / (beta_k + eps)^p."""
    beta = np.asarray(b.beta, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        om = t.gamma / (beta + t.eps) ** t.p
    return _normalize(om)


def weights_z(b: SmoothnessTriple, t: ReconstructionTableau) -> np.ndarray:
    """Normalized weights gamma_k (1 + (tau / (beta_k + eps))^p)."""
    beta = np.asarray(b.beta, dtype=float)
    tau = np.asarray(b.tau, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = tau[..., None] / (beta + t.eps)
        om = t.gamma * (1.0 + ratio**t.p)
    return _normalize(om)


def weights_embedded(b: SmoothnessTriple, t: ReconstructionTableau) -> np.ndarray:
    """Weights of an embedded scheme with correction matrix A.

    Form 1 corrections are ``a_kk + sum_{l!=k} a_kl beta_l / (beta_k + eps)``;
    form 2 uses ``1 + (|sum_l a_kl beta_l| / (beta_k + eps))^p``, the absolute
    value taken after the full dot product. The correction multiplies the
    unnormalized weights of ``t.outer`` (linear weights by default).
    """
    if t.A is None or not t.is_embedded:
        raise ValueError("embedded weights require a form-1 or form-2 tableau with A")
    beta = np.asarray(b.beta, dtype=float)
    corr = beta @ t.A.T
    with np.errstate(divide="ignore", invalid="ignore"):
        if t.form is WenoForm.EMBEDDED_FORM1:
            # a_kk + sum_{l!=k} a_kl b_l/(b_k+eps) == (A@b + a_kk eps) / (b_k + eps)
            g = (corr + np.diagonal(t.A) * t.eps) / (beta + t.eps)
        else:
            g = 1.0 + (np.abs(corr) / (beta + t.eps)) ** t.p
        if t.outer is WenoForm.JS:
            base = t.gamma / (beta + t.eps) ** t.p
        elif t.outer is WenoForm.Z:
            tau = np.asarray(b.tau, dtype=float)
            base = t.gamma * (1.0 + (tau[..., None] / (beta + t.eps)) ** t.p)
        else:
            base = t.gamma
    return _normalize(base * g)


def nonlinear_weights(b: SmoothnessTriple, t: ReconstructionTableau) -> np.ndarray:
    """Weights for any tableau form (linear weights are returned as-is)."""
    if t.form is WenoForm.LINEAR:
        return np.broadcast_to(t.gamma, b.beta.shape).copy()
    if t.form is WenoForm.JS:
        return weights_js(b, t)
    if t.form is WenoForm.Z:
        return weights_z(b, t)
    return weights_embedded(b, t)


def reconstruct_left_interface(w, t: ReconstructionTableau) -> np.ndarray:
    """WENO value at x_{j+1/2} from the left-biased window: omega^T C v."""
    w = _window(w)
    om = nonlinear_weights(smoothness_indicators(w), t)
    return np.einsum("...k,...k->...", om, w @ t.C.T)


def weno_derivative(samples, t: ReconstructionTableau, dx: float, ghost) -> np.ndarray:
    """Conservative WENO differentiation of point values.

    ``ghost`` is a pair ``(left, right)`` of arrays, each holding the three
    fictitious point values just outside the sample range (in increasing x).
    Returns D u_j = (uhat_{j+1/2} - uhat_{j-1/2}) / dx at every sample point;
    fifth-order accurate on smooth data.
    """
    u = np.asarray(samples, dtype=float)
    if u.ndim != 1 or u.size < 5:
        raise ValueError(f"need at least 5 interior samples, got shape {u.shape}")
    left, right = (np.asarray(g, dtype=float) for g in ghost)
    if left.shape != (3,) or right.shape != (3,):
        raise ValueError("ghost provider must supply exactly 3 values per side")
    ue = np.concatenate([left, u, right])
    n = u.size
    # interface j+1/2 for j=-1..n-1 uses window ue[i:i+5], i = j+1
    win = np.lib.stride_tricks.sliding_window_view(ue, 5)[: n + 1]
    uhat = reconstruct_left_interface(win, t)
    return (uhat[1:] - uhat[:-1]) / dx
