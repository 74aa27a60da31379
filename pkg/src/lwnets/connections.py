"""Flat lattice connections of a Koenigs-dual pair and their trivialization.

For each spectral value t, every edge (ij) carries a metric-orthogonal
transport with reciprocal eigenvalues (1 - t a_ij)^{+-1} on two null lines
inside the contact planes and identity on their orthogonal complement.  The
eigenlines are gauged by a function g on vertices,

    x_ij = < sigma-_i + g_j kappa_ij >,   x_ji = < sigma-_j + g_i kappa_ij >,

with kappa_ij = r_i r_j sigma+_i - sigma-_i the edge curvature sphere;
g = 0 and g = 1 give the loops of the two congruences themselves.  For a
complex conjugate pair and g = 1/2 the eigenlines carry real
representatives, so the whole loop stays real.

All connections in the family are flat; the trivializing frames T (propagated
from T = id at a base vertex) conjugate the pair into its spectral deformation:
sigma+-(t) = T sigma+-, same r, labelling a(t) = a / (1 - t a).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import r42
from .grid import GridDomain
from .omega import OmegaPair, edge_labelling, require_valid_pair
from .r42 import inner
from .spaceform import GeometryError

Vertex = tuple[int, int]
POLE_TOL = 1e-9


def _gauge_value(g, v: Vertex) -> float:
    if np.isscalar(g):
        return float(g)
    return float(np.asarray(g)[v])


def _check_pole(a_ij: float, t: float):
    if abs(1.0 - t * a_ij) < POLE_TOL:
        raise GeometryError(f"spectral parameter t={t} at the pole 1/a={1.0 / a_ij}")


def gamma(sigma_i: np.ndarray, sigma_j: np.ndarray, a_ij: float, t: float) -> np.ndarray:
    """Edge transport of a single congruence: closed form of the loop.

    x -> x + t a/(sigma_i, sigma_j) { (x,sigma_i) sigma_j/(1-ta) - (x,sigma_j) sigma_i }.
    Fixes (sigma_i + sigma_j)^perp, scales the null line of sigma_i by 1-ta.
    """
    _check_pole(a_ij, t)
    sij = inner(sigma_i, sigma_j)
    if abs(sij) < 1e-14:
        raise GeometryError("degenerate edge span: (sigma_i, sigma_j) = 0")
    return r42.scale_on_null_lines(sigma_i, sigma_j, 1.0 - t * a_ij)


def gamma_g(pair: OmegaPair, g, t: float, edge: tuple[Vertex, Vertex]) -> np.ndarray:
    """Gauged edge transport Gamma^g_ij(t), mapping the fiber at j to i.

    Real for real pairs and any real g, and for conjugate pairs with g = 1/2
    (the eigenline representatives are phase-rotated to real form).
    """
    (i, j) = edge
    sp, sm, r = pair.sigma_plus, pair.sigma_minus, pair.r
    a_ij = float(pair.a.get(i, j))
    _check_pole(a_ij, t)
    rr = r[i] * r[j]
    kap_i = rr * sp[i] - sm[i]
    kap_j = rr * sp[j] - sm[j]
    x_ij = sm[i] + _gauge_value(g, j) * kap_i
    x_ji = sm[j] + _gauge_value(g, i) * kap_j
    if np.iscomplexobj(x_ij):
        phase = np.exp(-0.5j * np.angle(complex(rr))) if pair.conjugate else 1.0
        u, v = phase * x_ij, phase * x_ji
        if max(np.max(np.abs(u.imag)), np.max(np.abs(v.imag))) < 1e-9 * max(np.max(np.abs(u)), 1e-300):
            x_ij, x_ji = u.real, v.real
    if abs(inner(x_ij, x_ji)) < 1e-14 * max(1.0, float(np.max(np.abs(x_ij)) * np.max(np.abs(x_ji)))):
        raise GeometryError(f"degenerate eigenlines on edge {edge}")
    return r42.scale_on_null_lines(x_ij, x_ji, 1.0 - t * a_ij)


def face_holonomy(pair: OmegaPair, g, t: float, face: Vertex) -> np.ndarray:
    """Gamma_ij Gamma_jk Gamma_kl Gamma_li around the oriented face."""
    i, j, k, l = pair.domain.face_quad(face)
    out = gamma_g(pair, g, t, (i, j))
    for e in ((j, k), (k, l), (l, i)):
        out = out @ gamma_g(pair, g, t, e)
    return out


def holonomy_deviation(pair: OmegaPair, g, t: float) -> float:
    """Max over faces of ||holonomy - id||_max."""
    worst = 0.0
    eye = np.eye(6)
    for face in pair.domain.faces():
        worst = max(worst, float(np.max(np.abs(face_holonomy(pair, g, t, face) - eye))))
    return worst


@dataclass
class Trivialization:
    domain: GridDomain
    t: float
    g: object
    maps: np.ndarray           # (m_max+1, n_max+1, 6, 6)
    base: Vertex
    path_independence: float = 0.0

    def apply(self, fld: np.ndarray) -> np.ndarray:
        return np.einsum("mnab,mnb->mna", self.maps, fld)


def trivialize(pair: OmegaPair, g, t: float, base: Vertex = (0, 0),
               fix_vector: tuple[np.ndarray, np.ndarray] | None = None,
               check_tol: float = 1e-8) -> Trivialization:
    """Trivializing vertex frames: T_base = id and T_i Gamma_ij = T_j.

    Propagates row-first from the base, then verifies path independence by
    comparing every remaining vertical edge (equivalent to checking the
    column-first staircase for every vertex).  ``fix_vector=(src, dst)``
    post-composes with a constant orthogonal map sending the common image
    T(src) to dst, fixing integration constants such as T p = p.
    """
    dom = pair.domain
    mmax, nmax = dom.m_max, dom.n_max
    trial = gamma_g(pair, g, t, ((0, 0), (1, 0)))
    maps = np.zeros((mmax + 1, nmax + 1, 6, 6), dtype=trial.dtype)
    bm, bn = base
    maps[bm, bn] = np.eye(6)
    for m in range(bm + 1, mmax + 1):
        maps[m, bn] = maps[m - 1, bn] @ gamma_g(pair, g, t, ((m - 1, bn), (m, bn)))
    for m in range(bm - 1, -1, -1):
        maps[m, bn] = maps[m + 1, bn] @ gamma_g(pair, g, t, ((m + 1, bn), (m, bn)))
    for n in list(range(bn + 1, nmax + 1)) + list(range(bn - 1, -1, -1)):
        step = 1 if n > bn else -1
        for m in range(mmax + 1):
            maps[m, n] = maps[m, n - step] @ gamma_g(pair, g, t, ((m, n - step), (m, n)))
    # flatness check: remaining (horizontal) edges away from the base row
    worst = 0.0
    for n in range(nmax + 1):
        if n == bn:
            continue
        for m in range(mmax):
            gam = gamma_g(pair, g, t, ((m, n), (m + 1, n)))
            dev = np.max(np.abs(maps[m, n] @ gam - maps[m + 1, n]))
            worst = max(worst, float(dev / max(1.0, np.max(np.abs(maps[m + 1, n])))))
    if worst > check_tol:
        raise GeometryError(f"connection is not flat (path dependence {worst:.2e})")
    if fix_vector is not None:
        src, dst = fix_vector
        common = maps[bm, bn] @ src
        cmap = r42.map_fixing_to(common, dst)
        maps = np.einsum("ab,mnbc->mnac", cmap, maps)
    triv = Trivialization(dom, t, g, maps, base, worst)
    return triv


def calapso_transform(pair: OmegaPair, t: float, g=0.5,
                      net=None, base: Vertex = (0, 0),
                      tol: float = 1e-8, validate: bool = True,
                      triv: Trivialization | None = None):
    """Spectral deformation of the pair (and optionally its Legendre lines).

    Returns (new_pair, lines, trivialization); lines is None unless a net is
    supplied, in which case it is the pair of transported vertex fields
    (T f, T t) spanning the deformed contact planes (no space-form frame; a
    frame choice is the job of the Lawson modes).  The transformed pair keeps
    r unchanged and has labelling a(t) = a/(1 - t a); the transported sphere
    complexes (when present) ride along as conserved constants.
    """
    if triv is None:
        triv = trivialize(pair, g, t, base=base, check_tol=tol)
    sp = np.einsum("mnab,mnb->mna", triv.maps, pair.sigma_plus)
    sm = np.einsum("mnab,mnb->mna", triv.maps, pair.sigma_minus)
    a_new = pair.a.map(lambda arr: arr / (1.0 - t * arr))
    kp_new = km_new = None
    if pair.k_plus is not None:
        kp, km = transported_complex_fields(pair, triv)
        kp_new, km_new = kp[base], km[base]
    out = OmegaPair(pair.domain, sp, sm, pair.r, a_new, kp_new, km_new,
                    conjugate=pair.conjugate,
                    provenance=pair.provenance + [{"op": "calapso", "t": t,
                                                   "g": g if np.isscalar(g) else "vertex-function"}])
    if validate:
        require_valid_pair(out, tol=max(tol, 1e-9))
        fresh = edge_labelling(out, tol=max(tol, 1e-9))
        dev = max(float(np.max(np.abs(fresh.horizontal - a_new.horizontal))),
                  float(np.max(np.abs(fresh.vertical - a_new.vertical))))
        if dev > max(tol, 1e-9) * max(1.0, a_new.max_abs()):
            raise GeometryError(f"labelling law a/(1-ta) violated by {dev:.2e}")
    lines = None
    if net is not None:
        lines = (triv.apply(net.f), triv.apply(net.t))
    return out, lines, triv


def _gauge_coefficients(g, t: float):
    """k-(t) = T^g {k- + t g sigma-}, k+(t) = T^g {k+ + t (1-g) sigma+}."""
    if not np.isscalar(g):
        raise GeometryError("complex transport needs a constant gauge function")
    return t * (1.0 - float(g)), t * float(g)


def transported_complex_fields(pair: OmegaPair, triv: Trivialization):
    """Per-vertex images T^g_i {k+- + c+- sigma+-_i}; constant for valid pairs."""
    if pair.k_plus is None:
        raise GeometryError("pair carries no sphere complexes")
    cp, cm = _gauge_coefficients(triv.g, triv.t)
    kp_field = pair.k_plus + cp * pair.sigma_plus
    km_field = pair.k_minus + cm * pair.sigma_minus
    tp = np.einsum("mnab,mnb->mna", triv.maps.astype(kp_field.dtype), kp_field)
    tm = np.einsum("mnab,mnb->mna", triv.maps.astype(km_field.dtype), km_field)
    return tp, tm
