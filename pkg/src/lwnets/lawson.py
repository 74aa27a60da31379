"""Lawson transformation: spectral deformation plus space-form re-projection.

The deformation transports the two linear sphere complexes of a Weingarten
net into new constants k+-(t) with

    (k+-(t), k+-(t)) = (k+-, k+-),      (k+(t), k-(t)) = (k+, k-) - t,

so the plane <k+(t), k-(t)> generically admits new frames (q(t), p(t)) and
the deformed pair re-projects to a linear Weingarten net in a new space
form.  Four special frame choices reproduce closed-form curvature laws:

  cmc       H(t) = H + t/(p,p)                (point complex held fixed)
  flatfront (p(t),p(t)) = -(1-2t), flat in hyperbolic space for t < 1/2
  cgc       K(t) = K |eps+2t|, kappa(t) = kappa - 2 t K, K_int constant
  chmc      constant harmonic mean curvature via the point/plane duality

All products with complex conjugate data stay bilinear; the g = 1/2 gauge
keeps every transport real in that case.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import r42
from .connections import Trivialization, calapso_transform, transported_complex_fields, trivialize
from .omega import OmegaPair, split_weingarten
from .r42 import inner
from .spaceform import (GeometryError, LegendreNet, SpaceFormFrame,
                        WeingartenCoefficients, face_curvatures, fit_weingarten,
                        require_valid, swap_roles)

POLE_TOL = 1e-9


@dataclass
class TransformedComplexes:
    k_plus_t: np.ndarray
    k_minus_t: np.ndarray
    t: float
    drift: float                 # max vertex deviation from constancy
    gram: np.ndarray             # bilinear 2x2 Gram of (k+(t), k-(t))
    generic: bool

    def conservation_deviation(self, k_plus0: np.ndarray, k_minus0: np.ndarray) -> float:
        dev = max(abs(inner(self.k_plus_t, self.k_plus_t) - inner(k_plus0, k_plus0)),
                  abs(inner(self.k_minus_t, self.k_minus_t) - inner(k_minus0, k_minus0)),
                  abs(inner(self.k_plus_t, self.k_minus_t) - (inner(k_plus0, k_minus0) - self.t)))
        return float(abs(dev))


def transport_complexes(pair: OmegaPair, t: float, g=0.5,
                        triv: Trivialization | None = None,
                        drift_tol: float = 1e-8) -> TransformedComplexes:
    """Transport k+- along the trivialization; constants for valid pairs."""
    if pair.k_plus is None:
        raise GeometryError("pair carries no sphere complexes to transport")
    if triv is None:
        triv = trivialize(pair, g, t)
    tp, tm = transported_complex_fields(pair, triv)
    kp = tp[triv.base]
    km = tm[triv.base]
    scale = max(1.0, float(np.max(np.abs(tp))), float(np.max(np.abs(tm))))
    drift = max(float(np.max(np.abs(tp - kp))), float(np.max(np.abs(tm - km)))) / scale
    if drift > drift_tol:
        raise GeometryError(f"transported complexes are not constant (drift {drift:.2e})")
    gram = np.array([[inner(kp, kp), inner(kp, km)],
                     [inner(km, kp), inner(km, km)]])
    det = gram[0, 0] * gram[1, 1] - gram[0, 1] ** 2
    generic = bool(abs(det) > 1e-9 * max(1.0, float(np.max(np.abs(gram))) ** 2))
    return TransformedComplexes(kp, km, t, drift, gram, generic)


def lawson_invariants(pair: OmegaPair, t_samples, g=0.5) -> list[dict]:
    """Conservation table of the transported complexes over a t-grid."""
    if pair.k_plus is None:
        raise GeometryError("pair carries no sphere complexes")
    kp0, km0 = pair.k_plus, pair.k_minus
    rows = []
    for t in t_samples:
        tc = transport_complexes(pair, float(t), g=g)
        rows.append({
            "t": float(t),
            "kp_kp": complex(inner(tc.k_plus_t, tc.k_plus_t)),
            "km_km": complex(inner(tc.k_minus_t, tc.k_minus_t)),
            "kp_km": complex(inner(tc.k_plus_t, tc.k_minus_t)),
            "deviation": tc.conservation_deviation(kp0, km0),
            "generic": tc.generic,
        })
    return rows


# --------------------------------------------------------------------------
# projection of a deformed pair into a frame inside the complex plane
# --------------------------------------------------------------------------

def project_pair(pair_t: OmegaPair, kp_t: np.ndarray, km_t: np.ndarray,
                 b: np.ndarray, provenance_entry: dict,
                 tol: float = 1e-8, validate: bool = True) -> LegendreNet:
    """Space-form projection from basis data (q, p) = (k+(t), k-(t)) B.

    The lifts follow by the normalization-preserving rule
    (f, t) = (sigma-, sigma+) B^{-T}; B may be complex for conjugate pairs,
    the result must be real.
    """
    b = np.asarray(b)
    q_new = b[0, 0] * kp_t + b[1, 0] * km_t
    p_new = b[0, 1] * kp_t + b[1, 1] * km_t
    binvt = np.linalg.inv(b).T
    f_new = binvt[0, 0] * pair_t.sigma_minus + binvt[1, 0] * pair_t.sigma_plus
    t_new = binvt[0, 1] * pair_t.sigma_minus + binvt[1, 1] * pair_t.sigma_plus
    parts = [q_new, p_new, f_new, t_new]
    if any(np.iscomplexobj(x) for x in parts):
        scale = max(float(np.max(np.abs(np.asarray(x)))) for x in parts)
        imag = max(float(np.max(np.abs(np.imag(np.asarray(x))))) for x in parts)
        if imag > tol * scale:
            raise GeometryError(f"projection is not real (imag {imag:.2e}); wrong frame for a conjugate pair")
        q_new, p_new, f_new, t_new = (np.real(np.asarray(x)) for x in parts)
    net = LegendreNet(pair_t.domain, f_new, t_new, SpaceFormFrame(p_new, q_new),
                      provenance=pair_t.provenance + [provenance_entry])
    if validate:
        require_valid(net, tol=max(tol, 1e-8))
    return net


def _canonical_pair(net: LegendreNet, pattern: str, coeffs: WeingartenCoefficients | None,
                    pattern_tol: float = 1e-6) -> tuple[OmegaPair, WeingartenCoefficients]:
    """Fit, snap the triple onto the mode's pattern, split in mode convention."""
    fit = coeffs if coeffs is not None else fit_weingarten(net)
    a0, b0, g0 = fit.normalized().as_array()
    if pattern == "cmc":
        if abs(a0) > pattern_tol:
            raise GeometryError(f"net is not CMC (alpha = {a0:.2e} after normalization)")
        snapped = np.array([0.0, b0, g0])
    elif pattern == "cgc":
        if abs(b0) > pattern_tol:
            raise GeometryError(f"net is not constant-Gauss (beta = {b0:.2e})")
        snapped = np.array([a0, 0.0, g0])
    elif pattern == "chmc":
        if abs(g0) > pattern_tol:
            raise GeometryError(f"net is not constant harmonic mean curvature (gamma = {g0:.2e})")
        snapped = np.array([a0, b0, 0.0])
    elif pattern == "flatfront":
        ref = np.array([1.0, 0.0, -1.0]) / np.sqrt(2.0)
        if np.linalg.norm(np.array([a0, b0, g0]) - ref) > pattern_tol:
            raise GeometryError("net does not satisfy the flat-front condition (1,0,-1)")
        snapped = np.array([1.0, 0.0, -1.0])
    else:
        raise GeometryError(f"unknown mode pattern {pattern!r}")
    coeffs2 = WeingartenCoefficients(*(snapped / np.linalg.norm(snapped)), fit.fit_residual)
    return split_weingarten(net, coeffs2), coeffs2


def lawson_generic(net: LegendreNet, pair: OmegaPair | None, t: float,
                   tol: float = 1e-8) -> tuple[LegendreNet, OmegaPair]:
    """Deform and re-project with a deterministic in-plane frame.

    q(t) and p(t) come from Gram-Schmidt on the sum/difference combinations
    of the transported complexes (times i in the conjugate case); the
    non-null leg is assigned to p(t).  Requires genericity: the transported
    plane must be non-degenerate.
    """
    if pair is None:
        pair = split_weingarten(net, fit_weingarten(net))
    pair_t, _, triv = calapso_transform(pair, t, g=0.5, tol=tol)
    tc = transport_complexes(pair, t, g=0.5, triv=triv)
    if not tc.generic:
        raise GeometryError("transported complexes span a contact element; no space-form projection")
    # coordinates of candidate basis vectors in the (k+(t), k-(t)) basis
    if pair.conjugate:
        u1 = np.array([1.0, 1.0], dtype=complex)          # k+ + k-  (= 2 Re k+)
        u2 = np.array([-1.0j, 1.0j], dtype=complex)       # i(k- - k+) (= 2 Im k+)
    else:
        u1 = np.array([1.0, 1.0])
        u2 = np.array([-1.0, 1.0])
    g2 = tc.gram

    def sq(c):
        return complex(c @ g2 @ c)

    def ip2(c, d):
        return complex(c @ g2 @ d)

    if abs(sq(u1)) < tol:
        u1, u2 = u2, u1
    if abs(sq(u1)) < tol:
        raise GeometryError("isotropic complex plane; genericity failure")
    w1 = u1
    w2 = u2 - (ip2(u2, w1) / sq(w1)) * w1
    if abs(sq(w2)) > tol:
        cq, cp = w1, w2
    else:
        cq, cp = w2, w1
    cp = cp / np.sqrt(abs(sq(cp)))
    if abs(sq(cq)) > tol:
        cq = cq / np.sqrt(abs(sq(cq)))
    b = np.stack([cq, cp], axis=1)
    out = project_pair(pair_t, tc.k_plus_t, tc.k_minus_t, b,
                       {"op": "lawson", "mode": "generic", "t": t}, tol=tol)
    out_pair = split_weingarten(out, fit_weingarten(out))
    return out, out_pair


def lawson_cmc(net: LegendreNet, pair: OmegaPair | None, t: float,
               coeffs: WeingartenCoefficients | None = None,
               tol: float = 1e-8) -> LegendreNet:
    """Constant mean curvature mode: H(t) = H + t/(p,p).

    Uses the g = 0 loop of the point congruence with the integration
    constant fixed so the point sphere complex stays put, then restores the
    orthogonal space-form vector from the transported second complex.
    """
    pair, _ = _canonical_pair(net, "cmc", coeffs)
    p = net.frame.p
    pp = float(inner(p, p))
    triv = trivialize(pair, 0.0, t, fix_vector=(p, p), check_tol=tol)
    pair_t, _, _ = calapso_transform(pair, t, g=0.0, tol=tol, triv=triv)
    tc = transport_complexes(pair, t, g=0.0, triv=triv)
    lam = -float(inner(tc.k_plus_t, p) / pp)
    b = np.array([[1.0, 0.0], [lam, 1.0]])
    return project_pair(pair_t, tc.k_plus_t, tc.k_minus_t, b,
                        {"op": "lawson", "mode": "cmc", "t": t}, tol=tol)


def lawson_flat_front(net: LegendreNet, pair: OmegaPair | None, t: float,
                      tol: float = 1e-8) -> LegendreNet:
    """Flat-front mode: horosphere congruences sigma+- = f +- t.

    p(t) = k-(t) - k+(t) and q(t) = k-(t) + k+(t); the frame degenerates at
    t = 1/2 where the transported complexes touch, and flips the ambient
    signature beyond (constant Gauss curvature 1 in de Sitter space).
    """
    if abs(1.0 - 2.0 * t) < POLE_TOL:
        raise GeometryError("t = 1/2: the transported complexes span an isotropic plane")
    pair, _ = _canonical_pair(net, "flatfront", None)
    pair_t, _, triv = calapso_transform(pair, t, g=0.5, tol=tol)
    tc = transport_complexes(pair, t, g=0.5, triv=triv)
    b = np.array([[1.0, -1.0], [1.0, 1.0]])
    return project_pair(pair_t, tc.k_plus_t, tc.k_minus_t, b,
                        {"op": "lawson", "mode": "flatfront", "t": t}, tol=tol)


def lawson_constant_gauss(net: LegendreNet, pair: OmegaPair | None, t: float,
                          coeffs: WeingartenCoefficients | None = None,
                          tol: float = 1e-8) -> LegendreNet:
    """Constant-Gauss mode: K(t) = K|eps+2t|, kappa(t) = kappa - 2tK.

    The complexes k+- = (p -+ q/sqrt(K))/2 are complex conjugate for K < 0;
    the g = 1/2 transport stays real.  At t = -eps/2 the direct frame is
    unavailable: if the intrinsic curvature K_int vanishes this is a true
    singularity (error); otherwise the point/plane roles are swapped.
    """
    pair, cf = _canonical_pair(net, "cgc", coeffs)
    eps = net.frame.epsilon
    kappa = net.frame.kappa
    big_k = -cf.gamma / cf.alpha
    k_int = eps * big_k + kappa
    sqrt_k = np.sqrt(complex(big_k)) if big_k < 0 else float(np.sqrt(big_k))
    pair_t, _, triv = calapso_transform(pair, t, g=0.5, tol=tol)
    tc = transport_complexes(pair, t, g=0.5, triv=triv)
    if abs(eps + 2.0 * t) < POLE_TOL:
        if abs(k_int) < 1e-8:
            raise GeometryError("t = -eps/2 with vanishing intrinsic curvature: "
                                "p(t) and q(t) are simultaneously isotropic")
        kappa_t = kappa - 2.0 * t * big_k   # equals K_int here
        s = 1.0 / np.sqrt(abs(kappa_t))
        b = np.column_stack([s * np.array([1.0, 1.0]),
                             s * np.array([-sqrt_k, sqrt_k])])
        return project_pair(pair_t, tc.k_plus_t, tc.k_minus_t, b,
                            {"op": "lawson", "mode": "cgc-swapped", "t": t}, tol=tol)
    b = np.column_stack([np.array([-sqrt_k, sqrt_k]),
                         np.array([1.0, 1.0]) / np.sqrt(abs(eps + 2.0 * t))])
    return project_pair(pair_t, tc.k_plus_t, tc.k_minus_t, b,
                        {"op": "lawson", "mode": "cgc", "t": t}, tol=tol)


def lawson_constant_harmonic(net: LegendreNet, pair: OmegaPair | None, t: float,
                             coeffs: WeingartenCoefficients | None = None,
                             tol: float = 1e-8) -> LegendreNet:
    """Constant harmonic mean curvature mode.

    For kappa != 0: swap point/plane roles (yielding a CMC net), apply the
    cmc mode with the spectral parameter rescaled by the labelling change
    t -> t/|kappa|, and swap back.  For kappa = 0: project onto the frame
    built from the transported complexes directly; t = 0 yields a minimal
    net, t != 0 a net with H/K = -eps in ambient curvature eps.
    """
    kappa = net.frame.kappa
    eps = net.frame.epsilon
    if abs(kappa) > 1e-10:
        cmc_net = swap_roles(net)
        out_cmc = lawson_cmc(cmc_net, None, t / abs(kappa), tol=tol)
        out = swap_roles(out_cmc)
        out.provenance = net.provenance + [{"op": "lawson", "mode": "chmc", "t": t}]
        return out
    pair, _ = _canonical_pair(net, "chmc", coeffs)
    pair_t, _, triv = calapso_transform(pair, t, g=0.5, tol=tol)
    tc = transport_complexes(pair, t, g=0.5, triv=triv)
    if abs(t) < 1e-12:
        b = np.array([[0.0, 1.0], [1.0, 0.0]])
        return project_pair(pair_t, tc.k_plus_t, tc.k_minus_t, b,
                            {"op": "lawson", "mode": "chmc-minimal", "t": t}, tol=tol)
    b = np.array([[1.0, -eps], [0.0, 1.0 / t]])
    return project_pair(pair_t, tc.k_plus_t, tc.k_minus_t, b,
                        {"op": "lawson", "mode": "chmc-flat", "t": t}, tol=tol)
