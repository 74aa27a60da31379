"""Space-form projections of Legendre maps and their curvature theory.

A space form is encoded by a frame (p, q): p is the point sphere complex
((p,p) != 0), q the space form vector, (p,q) = 0.  The point quadric is
{(y,y)=0, (y,q)=-1, (y,p)=0}, the plane quadric {(y,y)=0, (y,q)=0,
(y,p)=-1}; the ambient sectional curvature is kappa = -(q,q) and the
signature indicator is epsilon = -(p,p) (+1 Riemannian, -1 Lorentzian).

A net is a pair of vertex fields (f, t) in those quadrics with pointwise
contact (f,t) = 0 and the edge-parallelity (Rodrigues) property
dt + k df = 0 for a scalar edge function k.  Mean and Gauss curvature live
on faces via the bivector-valued mixed areas of the diagonals:

    A(u,v) = 1/4 ( du_ik ∧ dv_jl + dv_ik ∧ du_jl ),

with 0 = A(f,t) + H A(f,f) = A(t,t) - K A(f,f).
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import r42
from .grid import GridDomain, EdgeField, diagonals
from .r42 import inner


class GeometryError(ValueError):
    """Violated precondition or invariant, with an optional location."""

    def __init__(self, message: str, kind: str | None = None, index=None):
        super().__init__(message)
        self.kind = kind
        self.index = index


# --------------------------------------------------------------------------
# frames and canonical charts
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class SpaceFormFrame:
    p: np.ndarray
    q: np.ndarray

    def __post_init__(self):
        scale = max(1.0, float(np.dot(self.p, self.p)), float(np.dot(self.q, self.q)))
        if abs(inner(self.p, self.q)) > 1e-9 * scale:
            raise GeometryError("frame vectors p, q must be orthogonal")
        if abs(inner(self.p, self.p)) < 1e-12 * scale:
            raise GeometryError("point sphere complex p must be non-null")

    @property
    def epsilon(self) -> float:
        return -float(inner(self.p, self.p))

    @property
    def kappa(self) -> float:
        return -float(inner(self.q, self.q))


def euclidean_chart(signature: str = "riemannian"):
    """Canonical flat chart: frame (p, q), origin o and the three R^3 slots.

    Riemannian: p = e5, q = e4+e6, o = (e6-e4)/2, slots (e1,e2,e3) with
    3-metric diag(+,+,+).  Lorentzian: the timelike third component is
    carried by e6 (slots (e1,e2,e6), 3-metric diag(+,+,-)), p = e3 with
    (p,p) = +1, q = e4+e5, o = (e5-e4)/2.
    """
    e = r42.basis
    if signature == "riemannian":
        return SpaceFormFrame(e(4), e(3) + e(5)), (e(5) - e(3)) / 2, [0, 1, 2], np.array([1.0, 1.0, 1.0])
    if signature == "lorentzian":
        return SpaceFormFrame(e(2), e(3) + e(4)), (e(4) - e(3)) / 2, [0, 1, 5], np.array([1.0, 1.0, -1.0])
    raise GeometryError(f"unknown signature {signature!r}")


# --------------------------------------------------------------------------
# nets
# --------------------------------------------------------------------------

@dataclass
class LegendreNet:
    domain: GridDomain
    f: np.ndarray  # (m_max+1, n_max+1, 6)
    t: np.ndarray
    frame: SpaceFormFrame | None  # None: bare Legendre lines, no projection
    provenance: list = field(default_factory=list)

    def copy(self) -> "LegendreNet":
        return LegendreNet(self.domain, self.f.copy(), self.t.copy(), self.frame,
                           list(self.provenance))


def _vertex_scales(net: LegendreNet):
    sf = np.maximum(1.0, (net.f ** 2).sum(-1))
    st = np.maximum(1.0, (net.t ** 2).sum(-1))
    return sf, st


def validate_legendre(net: LegendreNet, tol: float = 1e-10, reg_tol: float = 1e-10):
    """Return a list of violations (kind, index, check, value); empty when valid.

    Identity checks are scaled by the magnitudes of the entering vectors, so
    nets with large homogeneous coordinates are judged relatively.
    """
    f, t = net.f, net.t
    sf, st = _vertex_scales(net)
    bad = []

    def check_vertex(vals, scale, name):
        err = np.abs(vals) / scale
        idx = np.unravel_index(int(np.argmax(err)), err.shape)
        if err[idx] > tol:
            bad.append(("vertex", idx, name, float(vals[idx])))

    check_vertex(inner(f, f), sf, "(f,f)=0")
    check_vertex(inner(t, t), st, "(t,t)=0")
    check_vertex(inner(f, t), np.sqrt(sf * st), "(f,t)=0")
    if net.frame is not None:
        p, q = net.frame.p, net.frame.q
        sq = max(1.0, float(np.dot(q, q)) ** 0.5)
        sp = max(1.0, float(np.dot(p, p)) ** 0.5)
        check_vertex(inner(f, q) + 1.0, np.sqrt(sf) * sq, "(f,q)=-1")
        check_vertex(inner(f, p), np.sqrt(sf) * sp, "(f,p)=0")
        check_vertex(inner(t, q), np.sqrt(st) * sq, "(t,q)=0")
        check_vertex(inner(t, p) + 1.0, np.sqrt(st) * sp, "(t,p)=-1")

    # Rodrigues + edge regularity, both directions
    for axis in (0, 1):
        df = np.diff(f, axis=axis)
        dt = np.diff(t, axis=axis)
        den = (df * df).sum(-1)
        kfit = -(dt * df).sum(-1) / np.where(den == 0, 1.0, den)
        res = np.abs(dt + kfit[..., None] * df).max(-1)
        scale = np.sqrt(np.maximum(den, (dt * dt).sum(-1))) + 1e-300
        rel = res / scale
        idx = np.unravel_index(int(np.argmax(rel)), rel.shape)
        if rel[idx] > max(tol, 1e-9):
            bad.append(("edge", (axis,) + idx, "rodrigues dt || df", float(rel[idx])))
        iso = np.abs(inner(df, df)) / np.maximum(den, 1e-300)
        idx = np.unravel_index(int(np.argmin(iso)), iso.shape)
        if iso[idx] < reg_tol:
            bad.append(("edge", (axis,) + idx, "edge isotropic", float(iso[idx])))

    dfik, dfjl = diagonals(f)
    for name, d in (("diag ik", dfik), ("diag jl", dfjl)):
        den = (d * d).sum(-1)
        iso = np.abs(inner(d, d)) / np.maximum(den, 1e-300)
        idx = np.unravel_index(int(np.argmin(iso)), iso.shape)
        if iso[idx] < reg_tol:
            bad.append(("face", idx, f"{name} isotropic", float(iso[idx])))

    aff = mixed_areas(f, f)
    anorm = np.sqrt((aff ** 2).sum((-1, -2)))
    dscale = np.sqrt((dfik ** 2).sum(-1) * (dfjl ** 2).sum(-1)) + 1e-300
    rel = anorm / dscale
    idx = np.unravel_index(int(np.argmin(rel)), rel.shape)
    if rel[idx] < reg_tol:
        bad.append(("face", idx, "A(f,f) vanishes (parallel diagonals)", float(rel[idx])))
    return bad


def require_valid(net: LegendreNet, tol: float = 1e-9, reg_tol: float = 1e-10) -> LegendreNet:
    bad = validate_legendre(net, tol=tol, reg_tol=reg_tol)
    if bad:
        kind, idx, name, val = bad[0]
        raise GeometryError(f"invalid net: {name} at {kind} {idx} (value {val:.3e})",
                            kind=kind, index=idx)
    return net


# --------------------------------------------------------------------------
# flat-chart lift and projection
# --------------------------------------------------------------------------

def lift_euclidean(x: np.ndarray, n: np.ndarray, signature: str = "riemannian",
                   validate: bool = True) -> LegendreNet:
    """Lift a principal net x with unit normals n from a flat 3-space.

    f = o + x + (x,x)/2 q and t = -p/(p,p) + n + (x,n) q, with the 3-products
    taken in the chart's 3-metric.  Raises when (x, n) is not edge-parallel
    (no Rodrigues coefficients) or violates regularity.
    """
    frame, origin, slots, g3 = euclidean_chart(signature)
    nn = (n * g3 * n).sum(-1)
    expected = 1.0 if signature == "riemannian" else -1.0
    if np.max(np.abs(nn - expected)) > 1e-9 * max(1.0, float(np.max(np.abs(nn)))):
        raise GeometryError("normals are not unit for the chart 3-metric")
    xx = (x * g3 * x).sum(-1)
    xn = (x * g3 * n).sum(-1)
    shape = x.shape[:-1]
    f = np.zeros(shape + (6,))
    t = np.zeros(shape + (6,))
    f += origin
    f[..., slots] += x
    f += xx[..., None] / 2.0 * frame.q
    t += -frame.p / inner(frame.p, frame.p)
    t[..., slots] += n
    t += xn[..., None] * frame.q
    net = LegendreNet(GridDomain(shape[0] - 1, shape[1] - 1), f, t, frame,
                      provenance=[{"op": "lift_euclidean", "signature": signature}])
    if validate:
        require_valid(net)
    return net


def _null_origin(frame: SpaceFormFrame, tol: float = 1e-9) -> np.ndarray:
    """A null vector o with (o,q) = -1, (o,p) = 0, for a flat frame."""
    p, q = frame.p, frame.q
    for k in range(6):
        w = r42.basis(k)
        w = w - inner(w, p) / inner(p, p) * p
        wq = inner(w, q)
        if abs(wq) > tol:
            w = w / (-wq)
            return w + 0.5 * inner(w, w) * q
    raise GeometryError("could not construct a chart origin for the frame")


def _frame_alignment(frame: SpaceFormFrame, signature: str) -> np.ndarray:
    """Orthogonal map taking a flat frame onto the canonical chart frame."""
    target, o0, slots, _ = euclidean_chart(signature)
    kappa = frame.kappa
    if abs(kappa) > 1e-8 * max(1.0, float(np.dot(frame.q, frame.q))):
        raise GeometryError("frame is not flat; euclidean chart undefined")
    eps_req = 1.0 if signature == "riemannian" else -1.0
    if frame.epsilon * eps_req <= 0:
        raise GeometryError("frame signature does not match requested chart")
    p = frame.p / np.sqrt(abs(inner(frame.p, frame.p)))
    q = frame.q
    o = _null_origin(SpaceFormFrame(p, q))

    def complete(pv, qv, ov):
        out = []
        for k in range(6):
            w = r42.basis(k).astype(float)
            w = w + inner(w, ov) * qv + inner(w, qv) * ov - inner(w, pv) / inner(pv, pv) * pv
            for u in out:
                w = w - inner(w, u) / inner(u, u) * u
            if abs(inner(w, w)) > 1e-8:
                out.append(w / np.sqrt(abs(inner(w, w))))
            if len(out) == 3:
                return out
        raise GeometryError("basis completion failed")

    src = [q, o, p] + complete(p, q, o)
    p0 = target.p
    q0 = target.q
    dst = [q0, o0, p0] + [r42.basis(k) for k in slots]
    s_mat = np.stack(src, axis=1)
    d_mat = np.stack(dst, axis=1)
    omap = d_mat @ np.linalg.inv(s_mat)
    if not r42.is_orthogonal(omap, 1e-8):
        raise GeometryError("frame alignment is not orthogonal")
    return omap


def project_euclidean(net: LegendreNet, signature: str = "riemannian"):
    """Invert lift_euclidean: recover (x, n) in the chart's 3-slots.

    Works for any flat frame by first aligning it orthogonally onto the
    canonical chart.  Round-trips lift_euclidean exactly on canonical frames.
    """
    frame, origin, slots, g3 = euclidean_chart(signature)
    omap = _frame_alignment(net.frame, signature)
    # choose the alignment branch whose origin matches o; the residual gauge
    # (translations/rotations of the chart) is irrelevant for round trips on
    # canonical frames, where omap = id.
    f = net.f @ omap.T
    t = net.t @ omap.T
    x = f[..., slots]
    n = t[..., slots]
    return x, n


# --------------------------------------------------------------------------
# curvature spheres
# --------------------------------------------------------------------------

@dataclass
class CurvatureSphereData:
    k: EdgeField                 # principal curvature edge function
    lift_h: np.ndarray           # kappa lifts on horizontal edges
    lift_v: np.ndarray
    residual: float
    umbilic_faces: list


def curvature_spheres(net: LegendreNet, tol: float = 1e-8) -> CurvatureSphereData:
    """Edge curvature spheres kappa = t_i + k f_i = t_j + k f_j.

    The coefficient is fitted per edge by least squares on dt + k df = 0;
    the residual measures failure of adjacent contact lines to intersect.
    Faces whose four sphere lifts coincide projectively are reported umbilic.
    """
    f, t, dom = net.f, net.t, net.domain
    kf = EdgeField.zeros(dom)
    lifts = []
    worst = 0.0
    for axis in (0, 1):
        df = np.diff(f, axis=axis)
        dt = np.diff(t, axis=axis)
        den = (df * df).sum(-1)
        k = -(dt * df).sum(-1) / den
        res = np.abs(dt + k[..., None] * df).max(-1)
        scale = np.sqrt(np.maximum(den, (dt * dt).sum(-1))) + 1e-300
        worst = max(worst, float(np.max(res / scale)))
        lift = (t[:-1, :] if axis == 0 else t[:, :-1]) + k[..., None] * (f[:-1, :] if axis == 0 else f[:, :-1])
        lifts.append(lift)
        if axis == 0:
            kf.horizontal = k
        else:
            kf.vertical = k
    if worst > tol:
        raise GeometryError(f"contact lines do not intersect (residual {worst:.2e})")
    lift_h, lift_v = lifts
    umbilic = []
    for face in dom.faces():
        m, n = face
        four = [lift_h[m, n], lift_h[m, n + 1], lift_v[m, n], lift_v[m + 1, n]]
        if max(r42.projective_distance(four[0], w) for w in four[1:]) < 1e-8:
            umbilic.append(face)
    return CurvatureSphereData(kf, lift_h, lift_v, worst, umbilic)


# --------------------------------------------------------------------------
# mixed areas and face curvatures
# --------------------------------------------------------------------------

def _wedge(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a[..., :, None] * b[..., None, :] - b[..., :, None] * a[..., None, :]


def mixed_areas(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Batched mixed areas over all faces; shape (m_max, n_max, 6, 6).

    A(u,v) = 1/4 (du_ik ∧ dv_jl + dv_ik ∧ du_jl); antisymmetric, symmetric
    in (u, v), and sign-flipping under orientation reversal of the face.
    """
    du_ik, du_jl = diagonals(u)
    dv_ik, dv_jl = diagonals(v)
    return 0.25 * (_wedge(du_ik, dv_jl) + _wedge(dv_ik, du_jl))


def mixed_area(u: np.ndarray, v: np.ndarray, face, reverse: bool = False) -> np.ndarray:
    """Mixed area tensor of a single face (lower-left vertex index)."""
    m, n = face
    sl = (slice(m, m + 2), slice(n, n + 2))
    uu, vv = u[sl], v[sl]
    if reverse:
        uu = uu.transpose(1, 0, 2)
        vv = vv.transpose(1, 0, 2)
    return mixed_areas(uu, vv)[0, 0]


def _fro_dot(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.einsum("...ij,...ij->...", a, b)


@dataclass
class FaceCurvatures:
    H: np.ndarray
    K: np.ndarray
    K_int: np.ndarray
    residual_H: np.ndarray
    residual_K: np.ndarray


def face_curvatures(net: LegendreNet) -> FaceCurvatures:
    """Mean and Gauss curvature per face from the three mixed areas.

    H and K are the least-squares factors of A(f,t) = -H A(f,f) and
    A(t,t) = K A(f,f) over all 15 bivector components; the reported
    residuals are relative and vanish for exact space-form projections.
    """
    if net.frame is None:
        raise GeometryError("curvatures need a space-form frame (lines-only net)")
    aff = mixed_areas(net.f, net.f)
    aft = mixed_areas(net.f, net.t)
    att = mixed_areas(net.t, net.t)
    den = _fro_dot(aff, aff)
    if np.min(den) <= 0.0:
        idx = np.unravel_index(int(np.argmin(den)), den.shape)
        raise GeometryError(f"A(f,f) vanishes on face {idx}", kind="face", index=idx)
    h = -_fro_dot(aft, aff) / den
    k = _fro_dot(att, aff) / den
    nf = np.sqrt(den)
    res_h = np.sqrt(_fro_dot(aft + h[..., None, None] * aff,
                             aft + h[..., None, None] * aff)) / (nf * (1.0 + np.abs(h)))
    res_k = np.sqrt(_fro_dot(att - k[..., None, None] * aff,
                             att - k[..., None, None] * aff)) / (nf * (1.0 + np.abs(k)))
    k_int = net.frame.epsilon * k + net.frame.kappa
    return FaceCurvatures(h, k, k_int, res_h, res_k)


def is_minimal(net: LegendreNet, tol: float = 1e-9) -> bool:
    """True iff max_face ||A(f,t)|| <= tol * ||A(f,f)||."""
    aff = mixed_areas(net.f, net.f)
    aft = mixed_areas(net.f, net.t)
    na = np.sqrt((aft ** 2).sum((-1, -2)))
    nb = np.sqrt((aff ** 2).sum((-1, -2)))
    return bool(np.max(na) <= tol * np.max(nb))


# --------------------------------------------------------------------------
# linear Weingarten fit
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class WeingartenCoefficients:
    alpha: float
    beta: float
    gamma: float
    fit_residual: float = 0.0

    @property
    def delta_sq(self) -> float:
        return self.beta ** 2 - self.alpha * self.gamma

    def as_array(self) -> np.ndarray:
        return np.array([self.alpha, self.beta, self.gamma])

    def normalized(self) -> "WeingartenCoefficients":
        return WeingartenCoefficients(*_normalize_triple(self.as_array()), self.fit_residual)

    def is_tubular(self, tol: float = 1e-9) -> bool:
        return abs(self.delta_sq) <= tol * float(np.max(self.as_array() ** 2))


def _normalize_triple(v: np.ndarray) -> np.ndarray:
    v = v / np.linalg.norm(v)
    for c in v:
        if abs(c) > 1e-12:
            return v if c > 0 else -v
    return v


def fit_weingarten(net: LegendreNet, curvatures: FaceCurvatures | None = None) -> WeingartenCoefficients:
    """Fit 0 = alpha K + 2 beta H + gamma over all faces.

    The triple is the right singular vector of the smallest singular value
    of the row matrix [K_f, 2 H_f, 1], unit norm, first nonzero entry
    positive; fit_residual = s_min / s_max flags non-Weingarten input.
    """
    cur = curvatures if curvatures is not None else face_curvatures(net)
    rows = np.stack([cur.K.ravel(), 2.0 * cur.H.ravel(), np.ones(cur.K.size)], axis=1)
    _, s, vt = np.linalg.svd(rows, full_matrices=False)
    triple = _normalize_triple(vt[-1])
    residual = float(s[-1] / s[0]) if s[0] > 0 else 0.0
    return WeingartenCoefficients(triple[0], triple[1], triple[2], residual)


# --------------------------------------------------------------------------
# parallel transformations of the frame
# --------------------------------------------------------------------------

def _frame_gram(frame: SpaceFormFrame) -> np.ndarray:
    return np.array([[inner(frame.q, frame.q), inner(frame.q, frame.p)],
                     [inner(frame.p, frame.q), inner(frame.p, frame.p)]])


def parallel_transform(net: LegendreNet, b: np.ndarray, tol: float = 1e-10,
                       validate: bool = True) -> LegendreNet:
    """Re-project the same Legendre lift to the frame (q~, p~) = (q, p) B.

    B must preserve the frame Gram matrix (rotation, shear or boost per the
    plane's signature); the lifts transform by (f~, t~) = (f, t) B^{-T},
    which keeps all quadric normalizations.
    """
    b = np.asarray(b, dtype=float)
    g = _frame_gram(net.frame)
    if np.max(np.abs(b.T @ g @ b - g)) > tol * max(1.0, float(np.max(np.abs(g)))):
        raise GeometryError("B does not preserve the frame inner products")
    q_new = b[0, 0] * net.frame.q + b[1, 0] * net.frame.p
    p_new = b[0, 1] * net.frame.q + b[1, 1] * net.frame.p
    binvt = np.linalg.inv(b).T
    f_new = binvt[0, 0] * net.f + binvt[1, 0] * net.t
    t_new = binvt[0, 1] * net.f + binvt[1, 1] * net.t
    out = LegendreNet(net.domain, f_new, t_new, SpaceFormFrame(p_new, q_new),
                      net.provenance + [{"op": "parallel", "B": b.tolist()}])
    if validate:
        require_valid(out)
    return out


def family_matrix(frame: SpaceFormFrame, theta: float) -> np.ndarray:
    """The one-parameter family of frame changes matching the plane signature.

    Definite plane: rotation; degenerate ((q,q)=0): shear [[1,theta],[0,1]];
    indefinite: boost.  Frames are expected normalized (|(p,p)| = 1 and
    (q,q) in {0, +-1}).
    """
    qq, pp = frame.kappa * -1.0, frame.epsilon * -1.0
    if abs(qq) < 1e-12:
        return np.array([[1.0, theta], [0.0, 1.0]])
    if qq * pp > 0:
        c, s = np.cos(theta), np.sin(theta)
        return np.array([[c, -s], [s, c]])
    c, s = np.cosh(theta), np.sinh(theta)
    return np.array([[c, s], [s, c]])


def parallel_theta(net: LegendreNet, theta: float, validate: bool = True) -> LegendreNet:
    return parallel_transform(net, family_matrix(net.frame, theta), validate=validate)


def coefficient_transform(coeffs: WeingartenCoefficients, b: np.ndarray) -> WeingartenCoefficients:
    """Congruence action [[a,b],[b,g]] -> B [[a,b],[b,g]] B^T on the triple."""
    m = np.array([[coeffs.alpha, coeffs.beta], [coeffs.beta, coeffs.gamma]])
    mm = np.asarray(b) @ m @ np.asarray(b).T
    return WeingartenCoefficients(mm[0, 0], mm[0, 1], mm[1, 1], coeffs.fit_residual)


# --------------------------------------------------------------------------
# classification of parallel families
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class FamilyMember:
    theta: float | None   # None for whole-family markers, +-inf asymptotic
    label: str


def _check_normalized(frame: SpaceFormFrame):
    pp = -frame.epsilon
    qq = -frame.kappa
    if abs(abs(pp) - 1.0) > 1e-9:
        raise GeometryError("classification expects |(p,p)| = 1; renormalize the frame")
    if abs(qq) > 1e-9 and abs(abs(qq) - 1.0) > 1e-9:
        raise GeometryError("classification expects (q,q) in {0,+-1}; renormalize the frame")


def classify_parallel_family(coeffs: WeingartenCoefficients, frame: SpaceFormFrame,
                             tol: float = 1e-9) -> list[FamilyMember]:
    """Distinguished members of the parallel family of a Weingarten net.

    Returns (theta, label) pairs: zeros of beta(theta) are constant-Gauss
    members, zeros of alpha(theta) constant mean curvature, zeros of
    gamma(theta) constant harmonic mean curvature; coinciding alpha and
    gamma zeros are minimal.  Family-wide properties come back with
    theta=None (or +-inf for the asymptotic flat-front limit of
    Bryant-type families).
    """
    _check_normalized(frame)
    a, b, g = coeffs.normalized().as_array()
    if coeffs.is_tubular():
        raise GeometryError("tubular family (beta^2 = alpha*gamma); no splitting")
    qq = -frame.kappa
    pp = -frame.epsilon
    out: list[FamilyMember] = []

    def add(theta, label):
        out.append(FamilyMember(float(theta), label))

    def merge_minimal():
        # collapse coinciding cmc / chmc points into minimal markers
        merged: list[FamilyMember] = []
        used = [False] * len(out)
        for i, fm in enumerate(out):
            if used[i] or fm.label not in ("cmc", "constant-harmonic-mean"):
                if not used[i]:
                    merged.append(fm)
                continue
            partner = None
            for j in range(i + 1, len(out)):
                if used[j]:
                    continue
                other = out[j]
                if (other.label in ("cmc", "constant-harmonic-mean") and other.label != fm.label
                        and other.theta is not None and fm.theta is not None
                        and abs(other.theta - fm.theta) < 1e-7):
                    partner = j
                    break
            if partner is not None:
                used[partner] = True
                merged.append(FamilyMember(fm.theta, "minimal"))
            else:
                merged.append(fm)
        return merged

    if abs(qq) < tol:
        # degenerate: alpha(t) = a + 2 b t + g t^2, beta(t) = b + g t, gamma(t) = g
        if abs(g) > tol:
            add(-b / g, "constant-gauss")
            disc = b * b - a * g
            if disc > tol:
                rt = np.sqrt(disc)
                add((-b - rt) / g, "cmc")
                add((-b + rt) / g, "cmc")
        else:
            out.append(FamilyMember(None, "constant-harmonic-mean"))
            add(-a / (2.0 * b), "minimal")
        return merge_minimal()

    if qq * pp > 0:
        # definite: trigonometric family, report theta in [0, 2*pi)
        mu = (a + g) / 2.0
        rho = float(np.hypot((a - g) / 2.0, b))
        if rho < tol:
            return [FamilyMember(None, "intrinsically-flat-family")]
        two_omega = float(np.arctan2(b, (a - g) / 2.0))

        def thetas_for(cos_val):
            if abs(cos_val) > 1.0:
                return []
            c = float(np.arccos(np.clip(cos_val, -1.0, 1.0)))
            base = [(c - two_omega) / 2.0, (-c - two_omega) / 2.0]
            return sorted({(th + k * np.pi) % (2 * np.pi) for th in base for k in range(4)})

        zeros_b = sorted({((k * np.pi - two_omega) / 2.0) % (2 * np.pi) for k in range(8)})
        for th in zeros_b:
            add(th, "constant-gauss")
        if mu * mu < rho * rho:
            for th in thetas_for(-mu / rho):
                add(th, "cmc")
            for th in thetas_for(mu / rho):
                add(th, "constant-harmonic-mean")
        return merge_minimal()

    # indefinite: hyperbolic family
    s1 = (a + g) / 2.0
    mu = (a - g) / 2.0
    if abs(abs(s1) - abs(b)) <= tol:
        if abs(b) < tol:
            return [FamilyMember(None, "flat-front-family")]
        out.append(FamilyMember(None, "bryant-type"))
        sign = 1.0 if s1 * b > 0 else -1.0
        # alpha(t) = mu + s*b e^{s 2t}, gamma(t) = -mu + s*b e^{s 2t}
        val_a = -mu / (sign * b)
        if val_a > tol:
            add(sign * 0.5 * np.log(val_a), "cmc")
        val_g = mu / (sign * b)
        if val_g > tol:
            add(sign * 0.5 * np.log(val_g), "constant-harmonic-mean")
        out.append(FamilyMember(float(-sign * np.inf), "flat-front-family"))
        return out
    if abs(s1) > abs(b):
        rho = float(np.sign(s1) * np.sqrt(s1 * s1 - b * b))
        two_omega = float(np.arctanh(b / s1))
        add(-two_omega / 2.0, "constant-gauss")
        for target, label in ((-mu / rho, "cmc"), (mu / rho, "constant-harmonic-mean")):
            if target >= 1.0 + tol:
                c = float(np.arccosh(target))
                add((c - two_omega) / 2.0, label)
                add((-c - two_omega) / 2.0, label)
        return merge_minimal()
    rho = float(np.sign(b) * np.sqrt(b * b - s1 * s1))
    two_omega = float(np.arctanh(s1 / b))
    for target, label in ((-mu / rho, "cmc"), (mu / rho, "constant-harmonic-mean")):
        s = float(np.arcsinh(target))
        add((s - two_omega) / 2.0, label)
    return merge_minimal()


# --------------------------------------------------------------------------
# frame renormalization and role swap
# --------------------------------------------------------------------------

def renormalize_frame(net: LegendreNet, lambda_q: float = 1.0, lambda_p: float = 1.0,
                      validate: bool = True) -> LegendreNet:
    """Rescale q -> lambda_q q (f -> f/lambda_q) and p -> lambda_p p (t -> t/lambda_p).

    Curvatures transform as H -> H lambda_q/lambda_p, K -> K (lambda_q/lambda_p)^2.
    """
    if lambda_q == 0.0 or lambda_p == 0.0:
        raise GeometryError("frame scales must be nonzero")
    out = LegendreNet(net.domain, net.f / lambda_q, net.t / lambda_p,
                      SpaceFormFrame(lambda_p * net.frame.p, lambda_q * net.frame.q),
                      net.provenance + [{"op": "renormalize", "lambda_q": lambda_q, "lambda_p": lambda_p}])
    if validate:
        require_valid(out)
    return out


def swap_roles(net: LegendreNet, validate: bool = True) -> LegendreNet:
    """Exchange the roles of points and planes: (f,t) -> sqrt|kappa| (t,f).

    Requires (q,q) != 0 and K != 0 on every face; the new curvatures are
    H' = H/K and K' = 1/K.
    """
    kappa = net.frame.kappa
    if abs(kappa) < 1e-12:
        raise GeometryError("swap undefined for a flat frame ((q,q)=0)")
    cur = face_curvatures(net)
    if np.min(np.abs(cur.K)) < 1e-12:
        raise GeometryError("swap undefined where K = 0")
    s = np.sqrt(abs(kappa))
    frame = SpaceFormFrame(net.frame.q / s, net.frame.p / s)
    out = LegendreNet(net.domain, s * net.t, s * net.f, frame,
                      net.provenance + [{"op": "swap_roles"}])
    if validate:
        require_valid(out)
    return out
