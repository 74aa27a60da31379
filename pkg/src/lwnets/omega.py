"""Pairs of Koenigs-dual sphere congruence lifts spanning a Legendre map.

A non-tubular linear Weingarten net factors through two isothermic sphere
congruences with lifts sigma+ and sigma- that are pointwise null and
orthogonal, edge-parallel with Christoffel ratio r,

    d sigma-_ij = r_i r_j d sigma+_ij,

Koenigs dual (vanishing mixed area A(sigma+, sigma-) = 0), and normalized
against two constant linear sphere complexes k+-:

    (sigma+-, k+-) = 0,   (sigma+-, k-+) = -1.

When the Weingarten discriminant beta^2 - alpha*gamma is negative the pair
is complex conjugate; all products are bilinear and every identity below
holds verbatim for complex data.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from . import r42
from .grid import GridDomain, EdgeField, diagonals
from .r42 import inner
from .spaceform import (GeometryError, LegendreNet, WeingartenCoefficients,
                        curvature_spheres, mixed_areas)


@dataclass
class OmegaPair:
    domain: GridDomain
    sigma_plus: np.ndarray
    sigma_minus: np.ndarray
    r: np.ndarray
    a: EdgeField
    k_plus: np.ndarray | None = None
    k_minus: np.ndarray | None = None
    conjugate: bool = False
    provenance: list = field(default_factory=list)

    def copy(self) -> "OmegaPair":
        return replace(self, sigma_plus=self.sigma_plus.copy(),
                       sigma_minus=self.sigma_minus.copy(), r=self.r.copy(),
                       a=self.a.map(np.copy), provenance=list(self.provenance))

    def contact_planes(self):
        """Spanning pair of real vectors of each contact line."""
        if not self.conjugate:
            return self.sigma_plus.real, self.sigma_minus.real
        return self.sigma_plus.real, self.sigma_plus.imag


# --------------------------------------------------------------------------
# Christoffel ratio
# --------------------------------------------------------------------------

def edge_ratios(sigma_plus: np.ndarray, sigma_minus: np.ndarray, axis: int,
                tol: float = 1e-9):
    """Per-edge least-squares ratio rho with d sigma- = rho d sigma+."""
    dp = np.diff(sigma_plus, axis=axis)
    dm = np.diff(sigma_minus, axis=axis)
    den = (np.abs(dp) ** 2).sum(-1)
    if np.min(den) <= 0.0:
        raise GeometryError("zero edge vector in sigma+")
    rho = (dm * dp.conj()).sum(-1) / den
    res = np.abs(dm - rho[..., None] * dp).max(-1)
    scale = np.sqrt(np.maximum(den, (np.abs(dm) ** 2).sum(-1)))
    rel = res / scale
    if np.max(rel) > tol:
        idx = np.unravel_index(int(np.argmax(rel)), rel.shape)
        raise GeometryError(f"lifts are not edge-parallel at edge {(axis,) + idx} "
                            f"(residual {rel[idx]:.2e})", kind="edge", index=(axis,) + idx)
    return rho


def recover_christoffel_ratio(sigma_plus: np.ndarray, sigma_minus: np.ndarray,
                              r0: complex = 1.0, tol: float = 1e-8) -> np.ndarray:
    """Recover the vertex function r from d sigma- = r_i r_j d sigma+.

    r is propagated from r0 at (0,0) along the first row and then up the
    columns, and verified against every edge ratio; inconsistency means the
    input is not a Christoffel pair.  r may change sign across the lattice.
    """
    if r0 == 0:
        raise GeometryError("r0 must be nonzero")
    rho_h = edge_ratios(sigma_plus, sigma_minus, 0, tol)
    rho_v = edge_ratios(sigma_plus, sigma_minus, 1, tol)
    shape = sigma_plus.shape[:-1]
    r = np.zeros(shape, dtype=complex)
    r[0, 0] = r0
    for i in range(1, shape[0]):
        r[i, 0] = rho_h[i - 1, 0] / r[i - 1, 0]
    for j in range(1, shape[1]):
        r[:, j] = rho_v[:, j - 1] / r[:, j - 1]
    err_h = np.abs(r[:-1, :] * r[1:, :] - rho_h) / np.maximum(np.abs(rho_h), 1e-300)
    err_v = np.abs(r[:, :-1] * r[:, 1:] - rho_v) / np.maximum(np.abs(rho_v), 1e-300)
    worst = max(float(err_h.max()), float(err_v.max()))
    if worst > tol:
        raise GeometryError(f"edge ratios are not of Christoffel form r_i r_j "
                            f"(inconsistency {worst:.2e})")
    if np.max(np.abs(r.imag)) <= 1e-10 * np.max(np.abs(r)):
        return r.real
    return r


# --------------------------------------------------------------------------
# labelling, Moutard lifts, curvature sphere lifts
# --------------------------------------------------------------------------

def edge_labelling(pair_or_sp, sigma_minus: np.ndarray | None = None,
                   tol: float = 1e-9) -> EdgeField:
    """The labelling a_ij = (sigma-_i, sigma+_j), a real edge function.

    Verified: equality with the flipped product (sigma+_i, sigma-_j),
    vanishing imaginary part, and constancy across opposite face edges.
    """
    if sigma_minus is None:
        sp, sm = pair_or_sp.sigma_plus, pair_or_sp.sigma_minus
    else:
        sp, sm = pair_or_sp, sigma_minus
    out_arrays = []
    scale = 0.0
    for axis in (0, 1):
        sl0 = (slice(None, -1), slice(None)) if axis == 0 else (slice(None), slice(None, -1))
        sl1 = (slice(1, None), slice(None)) if axis == 0 else (slice(None), slice(1, None))
        a1 = inner(sm[sl0], sp[sl1])
        a2 = inner(sp[sl0], sm[sl1])
        scale = max(scale, float(np.max(np.abs(a1))))
        if np.max(np.abs(a1 - a2)) > tol * max(scale, 1e-300):
            raise GeometryError("labelling is not an edge function")
        out_arrays.append(a1)
    a_h, a_v = out_arrays
    if max(np.max(np.abs(np.imag(a_h))), np.max(np.abs(np.imag(a_v)))) > tol * max(scale, 1e-300):
        raise GeometryError("labelling has a nonzero imaginary part")
    a_h, a_v = a_h.real.copy(), a_v.real.copy()
    opp_h = np.max(np.abs(np.diff(a_h, axis=1))) if a_h.shape[1] > 1 else 0.0
    opp_v = np.max(np.abs(np.diff(a_v, axis=0))) if a_v.shape[0] > 1 else 0.0
    if max(opp_h, opp_v) > 10 * tol * max(scale, 1e-300):
        raise GeometryError("labelling is not constant across opposite face edges")
    return EdgeField(a_h, a_v)


def curvature_sphere_lifts(pair: OmegaPair, axis: int) -> np.ndarray:
    """kappa_ij = r_i r_j sigma+_i - sigma-_i on all edges along an axis."""
    sp, sm, r = pair.sigma_plus, pair.sigma_minus, pair.r
    sl0 = (slice(None, -1), slice(None)) if axis == 0 else (slice(None), slice(None, -1))
    sl1 = (slice(1, None), slice(None)) if axis == 0 else (slice(None), slice(1, None))
    rr = (r[sl0] * r[sl1])[..., None]
    return rr * sp[sl0] - sm[sl0]


@dataclass
class MoutardLifts:
    mu_plus: np.ndarray
    mu_minus: np.ndarray
    residual: float


def moutard_lifts(pair: OmegaPair, tol: float = 1e-9) -> MoutardLifts:
    """mu+- = r^{+-1} sigma+-, verified against the Moutard face equation

    d mu_ik / (r_k - r_i) = d mu_jl / (r_l - r_j)   (r^{-1} for mu-).
    """
    worst = 0.0
    out = []
    for sgn, sigma in ((1, pair.sigma_plus), (-1, pair.sigma_minus)):
        rp = pair.r ** sgn
        mu = rp[..., None] * sigma
        dik, djl = diagonals(mu)
        ri, rj, rk, rl = rp[:-1, :-1], rp[1:, :-1], rp[1:, 1:], rp[:-1, 1:]
        lhs = dik / (rk - ri)[..., None]
        rhs = djl / (rl - rj)[..., None]
        rel = np.abs(lhs - rhs).max(-1) / np.maximum(np.abs(lhs).max(-1), 1e-300)
        worst = max(worst, float(rel.max()))
        out.append(mu)
    if worst > tol:
        raise GeometryError(f"Moutard equation fails (residual {worst:.2e})")
    return MoutardLifts(out[0], out[1], worst)


def koenigs_residual(pair: OmegaPair) -> float:
    """Max relative norm of A(sigma+, sigma-) over faces."""
    apm = mixed_areas(pair.sigma_plus, pair.sigma_minus)
    app = mixed_areas(pair.sigma_plus, pair.sigma_plus)
    amm = mixed_areas(pair.sigma_minus, pair.sigma_minus)
    na = np.sqrt((np.abs(apm) ** 2).sum((-1, -2)))
    nb = np.sqrt(np.sqrt((np.abs(app) ** 2).sum((-1, -2)) * (np.abs(amm) ** 2).sum((-1, -2))))
    return float(np.max(na / np.maximum(nb, 1e-300)))


def validate_pair(pair: OmegaPair, tol: float = 1e-9):
    """All structural identities of a Koenigs-dual pair; list of violations."""
    bad = []
    sp, sm = pair.sigma_plus, pair.sigma_minus
    scale_p = np.maximum(1.0, (np.abs(sp) ** 2).sum(-1))
    scale_m = np.maximum(1.0, (np.abs(sm) ** 2).sum(-1))

    def chk(vals, scale, name):
        rel = np.abs(vals) / scale
        idx = np.unravel_index(int(np.argmax(rel)), rel.shape)
        if rel[idx] > tol:
            bad.append(("vertex", idx, name, float(np.abs(vals[idx]))))

    chk(inner(sp, sp), scale_p, "(s+,s+)=0")
    chk(inner(sm, sm), scale_m, "(s-,s-)=0")
    chk(inner(sp, sm), np.sqrt(scale_p * scale_m), "(s+,s-)=0")
    if pair.k_plus is not None:
        for name, sigma, k, expect, sc in (
                ("(s+,k+)=0", sp, pair.k_plus, 0.0, scale_p),
                ("(s-,k-)=0", sm, pair.k_minus, 0.0, scale_m),
                ("(s+,k-)=-1", sp, pair.k_minus, -1.0, scale_p),
                ("(s-,k+)=-1", sm, pair.k_plus, -1.0, scale_m)):
            chk(inner(sigma, k) - expect, np.sqrt(sc) * max(1.0, float(np.linalg.norm(k))), name)
    if pair.conjugate:
        dev = max(float(np.max(np.abs(sm - sp.conj()))), 0.0)
        if pair.k_plus is not None:
            dev = max(dev, float(np.max(np.abs(pair.k_minus - pair.k_plus.conj()))))
        if dev > tol * float(np.max(np.abs(sp))):
            bad.append(("vertex", (0, 0), "conjugacy sigma- = conj(sigma+)", dev))
    try:
        for axis in (0, 1):
            rho = edge_ratios(sp, sm, axis, tol)
            r = pair.r
            sl0 = (slice(None, -1), slice(None)) if axis == 0 else (slice(None), slice(None, -1))
            sl1 = (slice(1, None), slice(None)) if axis == 0 else (slice(None), slice(1, None))
            rel = np.abs(r[sl0] * r[sl1] - rho) / np.maximum(np.abs(rho), 1e-300)
            if np.max(rel) > tol:
                idx = np.unravel_index(int(np.argmax(rel)), rel.shape)
                bad.append(("edge", (axis,) + idx, "christoffel r_i r_j", float(rel[idx])))
        moutard_lifts(pair, tol)
        fresh = edge_labelling(pair, tol=tol)
        dev = max(float(np.max(np.abs(fresh.horizontal - pair.a.horizontal))),
                  float(np.max(np.abs(fresh.vertical - pair.a.vertical))))
        if dev > tol * max(1.0, pair.a.max_abs()):
            bad.append(("edge", (0, 0, 0), "stored labelling stale", float(dev)))
    except GeometryError as exc:
        bad.append((exc.kind or "edge", exc.index or (0, 0), str(exc), np.nan))
    kres = koenigs_residual(pair)
    if kres > tol:
        bad.append(("face", (0, 0), "Koenigs duality A(s+,s-)=0", kres))
    return bad


def require_valid_pair(pair: OmegaPair, tol: float = 1e-9) -> OmegaPair:
    bad = validate_pair(pair, tol)
    if bad:
        kind, idx, name, val = bad[0]
        raise GeometryError(f"invalid pair: {name} at {kind} {idx} (value {val:.3e})",
                            kind=kind, index=idx)
    return pair


# --------------------------------------------------------------------------
# Weingarten factorization
# --------------------------------------------------------------------------

def split_weingarten(net: LegendreNet, coeffs: WeingartenCoefficients,
                     r0: complex = 1.0, tol: float = 1e-8,
                     validate: bool = True) -> OmegaPair:
    """Factor a linear Weingarten net into a Koenigs-dual pair with complexes.

    Branches:
      alpha = 0 (constant mean curvature): sigma- = f, sigma+ = t + H f,
        k- = p, k+ = q + gamma/(2 beta) p;
      beta = 0 (constant Gauss curvature K = -gamma/alpha):
        sigma+- = t +- sqrt(K) f, k+- = (p -+ q/sqrt(K))/2;
      otherwise: delta = sqrt(beta^2 - alpha gamma), sigma+- = f +-
        (beta f - alpha t)/delta, k+- = ((alpha q + beta p) +- delta p)/(2 alpha).

    The pair is complex conjugate exactly when the discriminant is negative;
    delta takes the principal root.  Swapping sigma+ <-> sigma- under
    delta -> -delta is an equivalent choice.
    """
    trip = coeffs.normalized()
    a0, b0, g0 = trip.alpha, trip.beta, trip.gamma
    if trip.is_tubular():
        raise GeometryError("tubular net (beta^2 = alpha*gamma); no Koenigs splitting")
    spheres = curvature_spheres(net)
    if spheres.umbilic_faces:
        raise GeometryError(f"umbilic face {spheres.umbilic_faces[0]}; splitting excluded",
                            kind="face", index=spheres.umbilic_faces[0])
    f, t = net.f, net.t
    p, q = net.frame.p, net.frame.q
    conj = trip.delta_sq < 0
    if abs(a0) <= 1e-12:
        h = -g0 / (2.0 * b0)
        sm = f.astype(float)
        sp = t + h * f
        km = p.copy()
        kp = q + (g0 / (2.0 * b0)) * p
    elif abs(b0) <= 1e-12:
        big_k = -g0 / a0
        sqrt_k = np.sqrt(complex(big_k)) if conj else float(np.sqrt(big_k))
        sp = t + sqrt_k * f
        sm = t - sqrt_k * f
        kp = (p - q / sqrt_k) / 2.0
        km = (p + q / sqrt_k) / 2.0
    else:
        delta = np.sqrt(complex(trip.delta_sq)) if conj else float(np.sqrt(trip.delta_sq))
        sp = f + (b0 * f - a0 * t) / delta
        sm = f - (b0 * f - a0 * t) / delta
        kp = ((a0 * q + b0 * p) + delta * p) / (2.0 * a0)
        km = ((a0 * q + b0 * p) - delta * p) / (2.0 * a0)
    if not conj:
        sp, sm = np.real_if_close(sp), np.real_if_close(sm)
    if conj and abs(r0) != 0:
        r0 = r0 / abs(r0)  # conjugate pairs carry unit-modulus ratios
    r = recover_christoffel_ratio(sp, sm, r0=r0, tol=tol)
    a = edge_labelling(sp, sm, tol=tol)
    pair = OmegaPair(net.domain, sp, sm, r, a, np.asarray(kp), np.asarray(km),
                     conjugate=conj,
                     provenance=net.provenance + [{"op": "split", "coeffs": [a0, b0, g0]}])
    if validate:
        require_valid_pair(pair, tol=max(tol, 1e-9))
    return pair


# --------------------------------------------------------------------------
# cross ratios
# --------------------------------------------------------------------------

def cross_ratio(s_i: np.ndarray, s_j: np.ndarray, s_k: np.ndarray, s_l: np.ndarray,
                tol: float = 1e-9) -> float | complex:
    """Cross ratio of four concircular sphere lifts, lift-independent.

    Expands s_k in the basis {s_i, s_j, s_l} and matches the conic
    parametrization; the two coefficient equations must produce the same
    value, and q^2 = (s_i s_j)(s_k s_l) / ((s_j s_k)(s_l s_i)).
    """
    basis_m = np.stack([s_i, s_j, s_l], axis=1)
    coef, res, rank, _ = np.linalg.lstsq(basis_m, s_k, rcond=None)
    recon = basis_m @ coef
    if np.max(np.abs(recon - s_k)) > tol * max(1.0, float(np.max(np.abs(s_k)))):
        raise GeometryError("face corners are not concircular (rank > 3)")
    c_i, c_j, c_l = coef
    if abs(c_i) < 1e-14:
        raise GeometryError("degenerate conic parametrization (c_i = 0)")
    c_j, c_l = c_j / c_i, c_l / c_i
    q1 = 1.0 + c_j * inner(s_j, s_l) / inner(s_i, s_l)
    q2_inv = 1.0 + c_l * inner(s_j, s_l) / inner(s_i, s_j)
    if abs(q1 * q2_inv - 1.0) > tol * max(1.0, abs(q1)):
        raise GeometryError(f"inconsistent cross ratio equations ({q1} vs 1/{q2_inv})")
    q = q1
    if abs(np.imag(q)) <= tol * max(1.0, abs(q)):
        return float(np.real(q))
    return complex(q)


def face_cross_ratios(sigma: np.ndarray, tol: float = 1e-9) -> np.ndarray:
    """Cross ratio per face of a congruence lift field."""
    shape = (sigma.shape[0] - 1, sigma.shape[1] - 1)
    out = np.empty(shape, dtype=complex)
    for m in range(shape[0]):
        for n in range(shape[1]):
            out[m, n] = cross_ratio(sigma[m, n], sigma[m + 1, n],
                                    sigma[m + 1, n + 1], sigma[m, n + 1], tol)
    if np.max(np.abs(out.imag)) <= tol * max(1.0, float(np.max(np.abs(out)))):
        return out.real
    return out


# --------------------------------------------------------------------------
# re-spanning and real/complex conversion
# --------------------------------------------------------------------------

def respan(pair: OmegaPair, c_plus: complex, c_minus: complex,
           tol: float = 1e-9, validate: bool = True) -> OmegaPair:
    """New Koenigs-dual lifts through other spanning spheres,

        sigma~+- = (sigma- + c+- r sigma+) / (r + c-+),

    with ratio r~ = (r + c-)/(r + c+).  The constants must differ and the
    denominators must not vanish anywhere.  The output carries no sphere
    complexes (re-spanned congruences need not lie in linear complexes).
    """
    if c_plus == c_minus:
        raise GeometryError("re-spanning constants must differ")
    r = pair.r.astype(complex)
    for c in (c_plus, c_minus):
        if np.min(np.abs(r + c)) < 1e-12 * max(1.0, float(np.max(np.abs(r)))):
            raise GeometryError(f"re-spanning pole: r + {c} vanishes at a vertex")
    sp = (pair.sigma_minus + c_plus * r[..., None] * pair.sigma_plus) / (r + c_minus)[..., None]
    sm = (pair.sigma_minus + c_minus * r[..., None] * pair.sigma_plus) / (r + c_plus)[..., None]
    r_new = (r + c_minus) / (r + c_plus)
    conj = bool(np.max(np.abs(np.imag(sp))) > 1e-10 * np.max(np.abs(sp)))
    if not conj:
        sp, sm = sp.real, sm.real
        if np.max(np.abs(r_new.imag)) < 1e-10 * np.max(np.abs(r_new)):
            r_new = r_new.real
    a = edge_labelling(sp, sm, tol=tol)
    out = OmegaPair(pair.domain, sp, sm, r_new, a, None, None, conjugate=conj,
                    provenance=pair.provenance + [{"op": "respan", "c": [complex(c_plus).real,
                                                                         complex(c_plus).imag,
                                                                         complex(c_minus).real,
                                                                         complex(c_minus).imag]}])
    if validate:
        require_valid_pair(out, tol=tol)
    return out


def _plane_coordinates(target: np.ndarray, u: np.ndarray, v: np.ndarray):
    """Least-squares coordinates of target in span{u, v}."""
    basis_m = np.stack([u, v], axis=1)
    coef, *_ = np.linalg.lstsq(basis_m, target, rcond=None)
    res = np.max(np.abs(basis_m @ coef - target))
    return coef, float(res)


def respan_through(pair: OmegaPair, s_plus0: np.ndarray, s_minus0: np.ndarray,
                   tol: float = 1e-9) -> OmegaPair:
    """Re-span so the new congruences pass through prescribed initial spheres.

    The targets must lie in the initial contact plane and not on the sigma+
    direction (that limit needs c = infinity, which the Moebius form of the
    re-spanning cannot reach; raised as an error).
    """
    consts = []
    for target in (s_plus0, s_minus0):
        coef, res = _plane_coordinates(np.asarray(target, dtype=complex),
                                       pair.sigma_minus[0, 0].astype(complex),
                                       pair.sigma_plus[0, 0].astype(complex))
        if res > tol * max(1.0, float(np.max(np.abs(target)))):
            raise GeometryError("target sphere not in the initial contact plane")
        if abs(coef[0]) < 1e-12 * abs(coef[1]):
            raise GeometryError("target equals the sigma+ direction; re-spanning pole")
        consts.append(coef[1] / (coef[0] * pair.r.flat[0]))
    return respan(pair, consts[0], consts[1], tol=tol)


def complexify(pair: OmegaPair, tol: float = 1e-9) -> OmegaPair:
    """Conjugate pair spanning the same lines: c+- = +-i re-spanning."""
    if pair.conjugate:
        raise GeometryError("pair is already complex conjugate")
    out = respan(pair, 1j, -1j, tol=tol, validate=False)
    # enforce exact conjugacy: the +-i re-spanning gives sm = conj(sp)
    out.sigma_minus = out.sigma_plus.conj()
    out.conjugate = True
    require_valid_pair(out, tol=tol)
    return out


def realify(pair: OmegaPair, tol: float = 1e-9) -> OmegaPair:
    """Real Koenigs-dual pair spanning the lines of a conjugate pair.

    Normalizes |r| = 1, re-spans with c+- = +-i (purely imaginary lifts),
    and rescales by -+i; the purely imaginary ratio r~ becomes the real
    function i r~.
    """
    if not pair.conjugate:
        raise GeometryError("realify expects a complex conjugate pair")
    mods = np.abs(pair.r)
    if np.max(np.abs(mods - 1.0)) > tol:
        raise GeometryError("|r| != 1; not a conjugate-pair ratio (rescale r0)")
    mid = respan(pair, 1j, -1j, tol=tol, validate=False)
    sp = -1j * mid.sigma_plus
    sm = 1j * mid.sigma_minus
    r_new = 1j * mid.r
    im_scale = max(float(np.max(np.abs(sp.imag))), float(np.max(np.abs(sm.imag))))
    if im_scale > tol * float(np.max(np.abs(sp))):
        raise GeometryError("realified lifts are not real; input was not conjugate")
    sp, sm = sp.real, sm.real
    if np.max(np.abs(r_new.imag)) > tol * np.max(np.abs(r_new)):
        raise GeometryError("realified ratio is not real")
    a = edge_labelling(sp, sm, tol=tol)
    out = OmegaPair(pair.domain, sp, sm, r_new.real, a, None, None, conjugate=False,
                    provenance=pair.provenance + [{"op": "realify"}])
    require_valid_pair(out, tol=tol)
    return out
