"""Riemann curvature tensor and sectional curvature.

Sign convention: ``R(u, v)w = nabla_[u,v] w + nabla_v nabla_u w -
nabla_u nabla_v w`` and ``K(u, v) = <R(u, v)u, v> / (|u|^2 |v|^2 - <u, v>^2)``.
With this pair the univariate normal family has ``K = -1/2`` and a round
sphere of radius ``r`` has ``K = 1/r^2``. Flipping the sign of only one of
the two formulas flips every curvature.
"""

from __future__ import annotations

import numpy as np

from fisher_rao._types import FloatArray, as_point
from fisher_rao.exceptions import DegeneratePlaneError, UndefinedCurvatureError
from fisher_rao.geometry.connection import christoffel_batch
from fisher_rao.geometry.manifold import ManifoldSpec
from fisher_rao.numerics.differentiation import fd_derivative

__all__ = ["riemann_curvature", "riemann_tensor", "sectional_curvature"]

# nested differences (Christoffels from a differenced metric) need a wider step
_NESTED_STEP = 1e-4
_DEGENERACY = 1e-12


def riemann_tensor(spec: ManifoldSpec, x: FloatArray) -> FloatArray:
    """Components ``R[l, i, j, k]`` of ``R(d_i, d_j) d_k`` along ``d_l`` at ``x``.

    Christoffel partials come from central differences. The result is
    projected onto the algebraic symmetries of a Levi-Civita curvature
    tensor (antisymmetry in each index pair, pair exchange) to remove
    differencing noise.
    """
    x = spec.check_point(x)
    nested = spec.christoffels is None and spec.metric_derivative is None
    step = _NESTED_STEP if nested else None
    gamma = christoffel_batch(spec, x)
    # dgamma[l, j, k, i] = d_i Gamma^l_jk
    dgamma = fd_derivative(lambda p: christoffel_batch(spec, p), x, 1, step=step)
    r = (
        np.transpose(dgamma, (0, 1, 3, 2))
        - np.transpose(dgamma, (0, 3, 1, 2))
        + np.einsum("ljm,mik->lijk", gamma, gamma)
        - np.einsum("lim,mjk->lijk", gamma, gamma)
    )
    g = spec.metric_matrix(x)
    lowered = np.einsum("ml,lijk->ijkm", g, r)
    lowered = 0.5 * (lowered - np.transpose(lowered, (1, 0, 2, 3)))
    lowered = 0.5 * (lowered - np.transpose(lowered, (0, 1, 3, 2)))
    lowered = 0.5 * (lowered + np.transpose(lowered, (2, 3, 0, 1)))
    return np.einsum("lm,ijkm->lijk", np.linalg.inv(g), lowered)


def riemann_curvature(
    spec: ManifoldSpec,
    x: FloatArray,
    u: FloatArray,
    v: FloatArray,
    w: FloatArray,
) -> FloatArray:
    """The tangent vector ``R(u, v)w`` at ``x``."""
    d = spec.dim
    u = as_point(u, d, name="u")
    v = as_point(v, d, name="v")
    w = as_point(w, d, name="w")
    return np.einsum("lijk,i,j,k->l", riemann_tensor(spec, x), u, v, w)


def sectional_curvature(
    u: FloatArray, v: FloatArray, x: FloatArray, spec: ManifoldSpec
) -> float:
    """Sectional curvature of the plane spanned by ``u`` and ``v`` at ``x``.

    Raises:
        UndefinedCurvatureError: the chart is one-dimensional.
        DegeneratePlaneError: ``u`` and ``v`` are (numerically) parallel.
    """
    if spec.dim < 2:
        raise UndefinedCurvatureError(
            f"sectional curvature needs a 2-plane; {spec.name} is one-dimensional"
        )
    x = spec.check_point(x)
    u = as_point(u, spec.dim, name="u")
    v = as_point(v, spec.dim, name="v")
    g = spec.metric_matrix(x)
    uu, vv, uv = u @ g @ u, v @ g @ v, u @ g @ v
    den = uu * vv - uv * uv
    if den <= _DEGENERACY * uu * vv or uu <= 0 or vv <= 0:
        raise DegeneratePlaneError(
            f"u={u.tolist()} and v={v.tolist()} do not span a plane at {x.tolist()}"
        )
    r_uvu = np.einsum("lijk,i,j,k->l", riemann_tensor(spec, x), u, v, u)
    return float(r_uvu @ g @ v / den)
