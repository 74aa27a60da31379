"""Fixed-size linear algebra for the 6-dimensional space with signature (4,2).

Conventions
-----------
Vectors are numpy arrays of shape (..., 6), real or complex.  The metric is
fixed once and for all as G = diag(+1,+1,+1,+1,-1,-1); every file format and
every function in this package serializes and computes in this basis.

Complex vectors use the *bilinear* extension of the inner product (no
conjugation): the product of a complex-conjugate pair of vectors is real,
and identities proved for real data carry over verbatim.
"""
from __future__ import annotations

import numpy as np

#: Diagonal of the metric, as a weight vector.
METRIC_DIAG = np.array([1.0, 1.0, 1.0, 1.0, -1.0, -1.0])

#: The metric as a 6x6 matrix.
METRIC = np.diag(METRIC_DIAG)


def basis(k: int) -> np.ndarray:
    """Standard basis vector e_k, 0-indexed."""
    e = np.zeros(6)
    e[k] = 1.0
    return e


def inner(u: np.ndarray, v: np.ndarray) -> np.ndarray | float:
    """Bilinear inner product u^T G v, batched over leading axes."""
    return (u * METRIC_DIAG * v).sum(axis=-1)


def norm2(u: np.ndarray) -> np.ndarray | float:
    """Squared length (u, u); indefinite, may be negative or zero."""
    return inner(u, u)


def wedge_action(u: np.ndarray, v: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Skew action (u ∧ v) x = (u,x) v - (v,x) u."""
    return inner(u, x)[..., None] * v - inner(v, x)[..., None] * u


def wedge_matrix(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    """6x6 matrix of x -> (u,x)v - (v,x)u."""
    return np.outer(v, METRIC_DIAG * u) - np.outer(u, METRIC_DIAG * v)


def sym_outer(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Symmetric dyadic u ⊙ v as a 6x6 matrix.

    Evaluation contracts both slots with the metric:
    ``eval_sym(sym_outer(u, v), x, y) == ((u,x)(v,y) + (v,x)(u,y)) / 2``.
    """
    return 0.5 * (np.outer(u, v) + np.outer(v, u))


def eval_sym(w: np.ndarray, x: np.ndarray, y: np.ndarray) -> np.ndarray | float:
    """Evaluate a symmetric dyadic as a bilinear form, metric on both slots."""
    return (METRIC_DIAG * x) @ w @ (METRIC_DIAG * y)


def gram(vectors: list[np.ndarray]) -> np.ndarray:
    """Mutual inner products of a list of vectors."""
    k = len(vectors)
    g = np.empty((k, k), dtype=np.result_type(*vectors))
    for i in range(k):
        for j in range(i, k):
            g[i, j] = g[j, i] = inner(vectors[i], vectors[j])
    return g


def is_orthogonal(m: np.ndarray, tol: float = 1e-10) -> bool:
    """True iff M^T G M = G in max norm, i.e. M preserves the product."""
    return bool(np.max(np.abs(m.T @ METRIC @ m - METRIC)) <= tol)


def orthogonality_defect(m: np.ndarray) -> float:
    """Max-norm of M^T G M - G."""
    return float(np.max(np.abs(m.T @ METRIC @ m - METRIC)))


def orth_inverse(m: np.ndarray) -> np.ndarray:
    """Inverse of a metric-orthogonal map, G^-1 M^T G (G is its own inverse)."""
    return METRIC @ m.T @ METRIC


def scale_on_null_lines(u: np.ndarray, v: np.ndarray, lam: float | complex) -> np.ndarray:
    """Orthogonal map with u -> lam*u, v -> v/lam, identity on {u,v}^perp.

    u and v must be null with (u,v) != 0; the two reciprocal eigenvalues on a
    pair of null lines make the map metric-orthogonal for any lam != 0.
    """
    uv = inner(u, v)
    if abs(uv) == 0.0:
        raise ValueError("null lines are mutually orthogonal; map is undefined")
    out = np.eye(6, dtype=np.result_type(u, v, type(lam)))
    out += (lam - 1.0) / uv * np.outer(u, METRIC_DIAG * v)
    out += (1.0 / lam - 1.0) / uv * np.outer(v, METRIC_DIAG * u)
    return out


def reflection(v: np.ndarray) -> np.ndarray:
    """Reflection in the hyperplane orthogonal to a non-null vector v."""
    vv = inner(v, v)
    if abs(vv) < 1e-300:
        raise ValueError("cannot reflect in a null vector")
    return np.eye(6) - 2.0 / vv * np.outer(v, METRIC_DIAG * v)


def map_fixing_to(source: np.ndarray, target: np.ndarray, tol: float = 1e-9) -> np.ndarray:
    """A metric-orthogonal map C with C @ source = target.

    Requires (source,source) = (target,target).  Built from one or two
    reflections; used to fix integration constants of trivializations.
    """
    if abs(inner(source, source) - inner(target, target)) > tol * (1.0 + abs(inner(target, target))):
        raise ValueError("source and target have different squared lengths")
    d = source - target
    dd = inner(d, d)
    scale = max(1.0, abs(norm2(source)))
    if abs(dd) > tol * scale:
        c = reflection(d)
        # compose with a reflection orthogonal to both to restore det +1
        for k in range(6):
            w = basis(k)
            w = w - inner(w, target) / norm2(target) * target if abs(norm2(target)) > tol else w
            wd = inner(w, d)
            ww = norm2(w)
            if abs(ww) > tol and abs(wd) < tol * np.sqrt(abs(ww) * max(abs(dd), tol)):
                return reflection(w) @ c
        return c
    s = source + target
    if abs(inner(s, s)) > tol * scale:
        # source ~ -target: reflect in (source+target) then in target
        return reflection(target) @ reflection(s)
    return np.eye(6)


def projective_distance(u: np.ndarray, v: np.ndarray) -> float:
    """Distance between the lines <u>, <v>: sin of the Euclidean angle.

    Uses the Hermitian (Euclidean) product; this is pure numerics for
    comparing projective representatives, not a geometric quantity.
    """
    nu = np.linalg.norm(u)
    nv = np.linalg.norm(v)
    if nu == 0.0 or nv == 0.0:
        return 1.0
    c = abs(np.vdot(u, v)) / (nu * nv)
    return float(np.sqrt(max(0.0, 1.0 - min(1.0, c) ** 2)))


def plane_distance(span_a: tuple[np.ndarray, np.ndarray], span_b: tuple[np.ndarray, np.ndarray]) -> float:
    """Distance between two 2-dim subspaces given by spanning pairs.

    Largest principal-angle sine, via orthonormalized (Euclidean) bases.
    """
    qa, _ = np.linalg.qr(np.stack(span_a, axis=1))
    qb, _ = np.linalg.qr(np.stack(span_b, axis=1))
    s = np.linalg.svd(qa.conj().T @ qb, compute_uv=False)
    s = np.clip(s, 0.0, 1.0)
    return float(np.sqrt(max(0.0, 1.0 - float(s.min()) ** 2)))
