"""Exact construction of test nets.

Three independent seed families, all in closed form or by exactly
consistent propagation:

* minimal nets in flat 3-space: discrete holomorphic lattice -> inverse
  stereographic sphere net -> Christoffel dual (the dual one-form closes
  exactly when the lattice labels factor the face cross ratios);
* a Clifford-torus patch, exactly minimal (H=0) and isoparametric (K=-1)
  in the round 3-sphere, the seed for every definite-signature family and
  for the complex conjugate constant-Gauss splitting;
* flat fronts in hyperbolic space from 2x2 transfer matrices in the
  Hermitian-matrix model of the Minkowski reduction; unimodular edge
  matrices  mu [[1, dz],[a/dz, 1]]  with cross-ratio factorizing labels
  close exactly, and the two column congruences are the horosphere lifts.

Composite pipelines reach constant mean curvature nets in flat and
hyperbolic space, constant-Gauss nets in several signatures, and constant
harmonic mean curvature nets, with every stage checked.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import r42
from .connections import calapso_transform, trivialize
from .grid import GridDomain
from .lawson import lawson_cmc, project_pair, transport_complexes
from .omega import OmegaPair, split_weingarten
from .r42 import inner
from .spaceform import (GeometryError, LegendreNet, SpaceFormFrame,
                        WeingartenCoefficients, classify_parallel_family,
                        face_curvatures, fit_weingarten, lift_euclidean,
                        parallel_theta, renormalize_frame, require_valid)


# --------------------------------------------------------------------------
# discrete holomorphic lattices
# --------------------------------------------------------------------------

@dataclass
class HolomorphicLattice:
    z: np.ndarray           # (m_max+1, n_max+1) complex
    a: np.ndarray           # horizontal labels per column, (m_max,)
    b: np.ndarray           # vertical labels per row, (n_max,)

    def cross_ratio_residual(self) -> float:
        z = self.z
        cr = ((z[:-1, :-1] - z[1:, :-1]) * (z[1:, 1:] - z[:-1, 1:])
              / ((z[1:, :-1] - z[1:, 1:]) * (z[:-1, 1:] - z[:-1, :-1])))
        target = self.a[:, None] / self.b[None, :]
        return float(np.max(np.abs(cr - target)))


def gen_holomorphic(kind: str, m_max: int, n_max: int, labels=None,
                    boundary=None, step: float = 0.3, turn: float = 0.25,
                    center: bool = False) -> HolomorphicLattice:
    """Discrete holomorphic lattice with cross-ratio factorizing labels.

    ``identity``: z = m + i n, labels (1, -1).  ``exponential``:
    z = q1^m q2^n with q1 = e^step, q2 = e^{i turn}; labels
    ((1-q1)^2/q1, (1-q2)^2/q2), both real.  ``custom_boundary`` propagates
    given first-row/first-column values through the cross-ratio equation
    with the given labels.
    """
    m = np.arange(m_max + 1, dtype=float)
    n = np.arange(n_max + 1, dtype=float)
    if center:
        m = m - m_max / 2.0
        n = n - n_max / 2.0
    if kind == "identity":
        z = m[:, None] + 1j * n[None, :]
        return HolomorphicLattice(z, np.ones(m_max), -np.ones(n_max))
    if kind == "exponential":
        q1 = np.exp(step)
        q2 = np.exp(1j * turn)
        z = (q1 ** m[:, None]) * (q2 ** n[None, :])
        la = (1 - q1) ** 2 / q1
        lb = ((1 - q2) ** 2 / q2)
        if abs(lb.imag) > 1e-14 * max(1.0, abs(lb)):
            raise GeometryError("exponential vertical label is not real")
        return HolomorphicLattice(z, np.full(m_max, float(la)), np.full(n_max, float(lb.real)))
    if kind == "custom_boundary":
        if labels is None or boundary is None:
            raise GeometryError("custom_boundary needs labels=(a, b) and boundary=(row0, col0)")
        a, b = (np.asarray(labels[0], dtype=float), np.asarray(labels[1], dtype=float))
        if np.any(a == 0) or np.any(b == 0):
            raise GeometryError("labels must be nonzero")
        row0, col0 = boundary
        z = np.zeros((m_max + 1, n_max + 1), dtype=complex)
        z[:, 0] = row0
        z[0, :] = col0
        for nn in range(n_max):
            for mm in range(m_max):
                zi, zj, zl = z[mm, nn], z[mm + 1, nn], z[mm, nn + 1]
                c = a[mm] / b[nn]
                den = (zi - zj) + c * (zl - zi)
                if abs(den) < 1e-14 * max(abs(zi - zj), abs(zl - zi), 1e-300):
                    raise GeometryError(f"cross-ratio propagation degenerate at face {(mm, nn)}",
                                        kind="face", index=(mm, nn))
                z[mm + 1, nn + 1] = ((zi - zj) * zl + c * zj * (zl - zi)) / den
        lat = HolomorphicLattice(z, a, b)
        if lat.cross_ratio_residual() > 1e-9 * float(np.max(np.abs(a[:, None] / b[None, :]))):
            raise GeometryError("propagated lattice fails the cross-ratio check")
        return lat
    raise GeometryError(f"unknown lattice kind {kind!r}")


def sphere_net(z: np.ndarray) -> np.ndarray:
    """Inverse stereographic projection onto the unit 2-sphere, z=0 -> south pole."""
    d = 1.0 + np.abs(z) ** 2
    return np.stack([2 * z.real / d, 2 * z.imag / d, (np.abs(z) ** 2 - 1) / d], axis=-1)


def christoffel_dual_r3(n: np.ndarray, labels: tuple[np.ndarray, np.ndarray],
                        closure_tol: float = 1e-9) -> np.ndarray:
    """Integrate dx_ij = a_ij dn_ij / |dn_ij|^2 from the (0,0) corner.

    The one-form closes around faces exactly when the labels factor the
    cross ratios of n; the closure residual is verified.  Degenerate edges
    of n (dn = 0) are rejected.
    """
    a, b = labels
    dn_h = np.diff(n, axis=0)
    dn_v = np.diff(n, axis=1)
    den_h = (dn_h ** 2).sum(-1, keepdims=True)
    den_v = (dn_v ** 2).sum(-1, keepdims=True)
    if min(float(den_h.min()), float(den_v.min())) < 1e-24:
        raise GeometryError("degenerate edge of the sphere net (dn = 0)")
    dx_h = np.asarray(a)[:, None, None] * dn_h / den_h
    dx_v = np.asarray(b)[None, :, None] * dn_v / den_v
    closure = dx_h[:, :-1] + dx_v[1:, :] - dx_h[:, 1:] - dx_v[:-1, :]
    scale = max(float(np.max(np.abs(dx_h))), float(np.max(np.abs(dx_v))))
    if np.max(np.abs(closure)) > closure_tol * max(scale, 1e-300):
        raise GeometryError("dual one-form does not close; labels do not factor the cross ratios")
    x = np.zeros_like(n)
    x[1:, 0] = np.cumsum(dx_h[:, 0], axis=0)
    x[:, 1:] = x[:, :1] + np.cumsum(dx_v, axis=1)
    return x


def trim_ring(field: np.ndarray, ring: int = 1) -> np.ndarray:
    return field[ring:-ring, ring:-ring]


# --------------------------------------------------------------------------
# seed nets
# --------------------------------------------------------------------------

def minimal_net(m_max: int = 12, n_max: int = 12, kind: str = "exponential",
                step: float = 0.3, turn: float = 0.25,
                with_pair: bool = True):
    """Exactly minimal net in flat 3-space; boundary ring trimmed.

    Returns (net, pair); the pair is the Koenigs-dual splitting (0, 1, 0)
    with sigma- = f, sigma+ = t.
    """
    lat = gen_holomorphic(kind, m_max + 2, n_max + 2, step=step, turn=turn, center=True)
    nvec = sphere_net(lat.z)
    x = christoffel_dual_r3(nvec, (lat.a, lat.b))
    net = lift_euclidean(trim_ring(x), trim_ring(nvec))
    net.provenance = [{"op": "generate", "target": "minimal", "kind": kind}]
    if not with_pair:
        return net, None
    pair = split_weingarten(net, WeingartenCoefficients(0.0, 1.0, 0.0))
    return net, pair


def clifford_net(m_max: int = 12, n_max: int = 12, h1: float = 0.35, h2: float = 0.27) -> LegendreNet:
    """Clifford-torus patch in the round 3-sphere: H = 0 and K = -1 exactly.

    f carries the torus point (cos u, sin u, cos v, sin v)/sqrt2, t the unit
    normal (-cos u, -sin u, cos v, sin v)/sqrt2; both families of coordinate
    circles are curvature lines with principal curvatures +-1.
    """
    if abs(h1 % (2 * np.pi)) < 1e-9 or abs(h2 % (2 * np.pi)) < 1e-9:
        raise GeometryError("degenerate torus steps")
    u = h1 * np.arange(m_max + 1)
    v = h2 * np.arange(n_max + 1)
    uu, vv = np.meshgrid(u, v, indexing="ij")
    rt = 1.0 / np.sqrt(2.0)
    f = np.zeros((m_max + 1, n_max + 1, 6))
    t = np.zeros((m_max + 1, n_max + 1, 6))
    f[..., 0], f[..., 1] = rt * np.cos(uu), rt * np.sin(uu)
    f[..., 2], f[..., 3] = rt * np.cos(vv), rt * np.sin(vv)
    f[..., 5] = 1.0
    t[..., 0], t[..., 1] = -rt * np.cos(uu), -rt * np.sin(uu)
    t[..., 2], t[..., 3] = rt * np.cos(vv), rt * np.sin(vv)
    t[..., 4] = 1.0
    frame = SpaceFormFrame(r42.basis(4), r42.basis(5))
    net = LegendreNet(GridDomain(m_max, n_max), f, t, frame,
                      provenance=[{"op": "generate", "target": "clifford", "h": [h1, h2]}])
    return require_valid(net)


def flat_front_net(m_max: int = 12, n_max: int = 12, step: float = 0.3,
                   turn: float = 0.25, label_scale: float = 0.2,
                   with_pair: bool = True):
    """Exact flat front in hyperbolic space (fit proportional to (1,0,-1)).

    Transfer matrices mu [[1, dz],[a/dz, 1]], mu = 1/sqrt(1-a), driven by a
    centered exponential lattice with labels scaled by ``label_scale``
    (any scale < 1/max|a| works; the scale is the hidden spectral parameter
    of the Lax system).  The two matrix columns give the two horosphere
    congruence lifts; f = (sigma+ + sigma-)/2, t = (sigma+ - sigma-)/2.
    """
    lat = gen_holomorphic("exponential", m_max, n_max, step=step, turn=turn, center=True)
    a_h = label_scale * lat.a
    b_v = label_scale * lat.b
    if max(float(np.max(a_h)), float(np.max(b_v))) >= 1.0:
        raise GeometryError("label scale too large: needs max(a) < 1")
    z = lat.z

    def edge_matrix(dz: complex, a: float) -> np.ndarray:
        return (1.0 / np.sqrt(1.0 - a)) * np.array([[1.0, dz], [a / dz, 1.0]], dtype=complex)

    psi = np.zeros((m_max + 1, n_max + 1, 2, 2), dtype=complex)
    psi[0, 0] = np.eye(2)
    for i in range(1, m_max + 1):
        psi[i, 0] = psi[i - 1, 0] @ edge_matrix(z[i, 0] - z[i - 1, 0], a_h[i - 1])
    for j in range(1, n_max + 1):
        for i in range(m_max + 1):
            psi[i, j] = psi[i, j - 1] @ edge_matrix(z[i, j] - z[i, j - 1], b_v[j - 1])
    # Lax consistency on the remaining horizontal edges
    worst = 0.0
    for j in range(1, n_max + 1):
        for i in range(1, m_max + 1):
            lm = edge_matrix(z[i, j] - z[i - 1, j], a_h[i - 1])
            worst = max(worst, float(np.max(np.abs(psi[i - 1, j] @ lm - psi[i, j]))))
    if worst > 1e-9 * float(np.max(np.abs(psi))):
        raise GeometryError(f"transfer matrices are not consistent ({worst:.2e})")

    v1 = psi[..., :, 0]
    v2 = psi[..., :, 1]

    def column_lift(v: np.ndarray, scale: float) -> np.ndarray:
        herm = scale * v[..., :, None] * v[..., None, :].conj()
        out = np.zeros(v.shape[:-1] + (6,))
        out[..., 0] = herm[..., 0, 1].real
        out[..., 1] = herm[..., 0, 1].imag
        out[..., 2] = (herm[..., 0, 0].real - herm[..., 1, 1].real) / 2
        out[..., 5] = (herm[..., 0, 0].real + herm[..., 1, 1].real) / 2
        return out

    p = r42.basis(4)          # (p,p) = -1
    q = r42.basis(3)          # (q,q) = +1: hyperbolic frame
    kp = (q - p) / 2.0
    km = (q + p) / 2.0
    sp = column_lift(v1, 1.0) - 2.0 * kp
    sm = column_lift(v2, 4.0) - 2.0 * km
    f = (sp + sm) / 2.0
    t = (sp - sm) / 2.0
    net = LegendreNet(GridDomain(m_max, n_max), f, t, SpaceFormFrame(p, q),
                      provenance=[{"op": "generate", "target": "flat_front",
                                   "label_scale": label_scale}])
    require_valid(net)
    if not with_pair:
        return net, None
    pair = split_weingarten(net, WeingartenCoefficients(1.0, 0.0, -1.0))
    return net, pair


# --------------------------------------------------------------------------
# composite pipelines
# --------------------------------------------------------------------------

def _stage(name: str, fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except GeometryError as exc:
        raise GeometryError(f"pipeline stage '{name}' failed: {exc}",
                            kind=exc.kind, index=exc.index) from exc


def cgc_r3_net(m_max: int = 12, n_max: int = 12, scale: float = 0.5,
               h1: float = 0.35, h2: float = 0.27) -> LegendreNet:
    """Constant positive Gauss curvature net in flat 3-space, K = 4*scale^2.

    Deform the minimal Clifford pair to the parameter where the transported
    complex plane degenerates (t = 1 for the unit-sphere norms): the
    radical of the plane is a null space-form vector q and the plane's
    non-null direction a point sphere complex p, which projects the
    deformed pair into a flat chart with constant K.
    """
    base = clifford_net(m_max, n_max, h1, h2)
    pair = _stage("clifford-split", split_weingarten, base, WeingartenCoefficients(0.0, 1.0, 0.0))
    t = 1.0
    triv = _stage("transport", trivialize, pair, 0.5, t)
    pair_t, _, _ = _stage("deform", calapso_transform, pair, t, 0.5, triv=triv)
    tc = _stage("complexes", transport_complexes, pair, t, 0.5, triv)
    pp_sum = inner(tc.k_plus_t + tc.k_minus_t, tc.k_plus_t + tc.k_minus_t)
    nu = np.sqrt(abs(pp_sum))
    b = np.column_stack([scale * np.array([1.0, -1.0]),
                         np.array([1.0, 1.0]) / nu])
    net = _stage("project", project_pair, pair_t, tc.k_plus_t, tc.k_minus_t, b,
                 {"op": "generate", "target": "cgc_r3", "scale": scale})
    return net


def pipeline(target: str, m_max: int = 12, n_max: int = 12, params: dict | None = None):
    """Named seed constructions; returns (net, pair).

    Targets: minimal, chmc, cmc_r3_parallel, cmc_hyperbolic_unit,
    constant_gauss (params["frame"] in {r3, h3, s3_conjugate}), flat_front,
    clifford, cgc_r3.
    """
    params = dict(params or {})
    if target == "minimal":
        return minimal_net(m_max, n_max, kind=params.get("kind", "exponential"))
    if target == "chmc":
        net, _ = minimal_net(m_max, n_max)
        theta = float(params.get("theta", 0.3))
        out = _stage("shear", parallel_theta, net, theta)
        out.provenance += [{"op": "generate", "target": "chmc", "theta": theta}]
        pair = _stage("split", split_weingarten, out, fit_weingarten(out))
        return out, pair
    if target == "clifford":
        net = clifford_net(m_max, n_max, params.get("h1", 0.35), params.get("h2", 0.27))
        pair = _stage("split", split_weingarten, net, WeingartenCoefficients(0.0, 1.0, 0.0))
        return net, pair
    if target == "cgc_r3":
        net = cgc_r3_net(m_max, n_max, scale=params.get("scale", 0.5))
        pair = _stage("split", split_weingarten, net, fit_weingarten(net))
        return net, pair
    if target == "cmc_r3_parallel":
        scale = params.get("scale", 0.5)
        net = cgc_r3_net(m_max, n_max, scale=scale)
        big_k = 4.0 * scale ** 2
        out = _stage("bonnet-shear", parallel_theta, net, 1.0 / np.sqrt(big_k))
        out.provenance += [{"op": "generate", "target": "cmc_r3_parallel"}]
        pair = _stage("split", split_weingarten, out, fit_weingarten(out))
        return out, pair
    if target == "cmc_hyperbolic_unit":
        t0 = float(params.get("t", 0.5))
        net, pair = minimal_net(m_max, n_max)
        cmc = _stage("lawson-cmc", lawson_cmc, net, pair, t0)
        out = _stage("renormalize", renormalize_frame, cmc, 1.0 / t0, 1.0)
        out.provenance += [{"op": "generate", "target": "cmc_hyperbolic_unit", "t": t0}]
        pair2 = _stage("split", split_weingarten, out, fit_weingarten(out))
        return out, pair2
    if target == "constant_gauss":
        frame = params.get("frame", "r3")
        if frame == "r3":
            return pipeline("cgc_r3", m_max, n_max, params)
        if frame == "s3_conjugate":
            net = clifford_net(m_max, n_max, params.get("h1", 0.35), params.get("h2", 0.27))
            pair = _stage("conjugate-split", split_weingarten, net,
                          WeingartenCoefficients(1.0, 0.0, 1.0))
            return net, pair
        if frame == "h3":
            cmc, _ = pipeline("cmc_r3_parallel", m_max, n_max, params)
            t1 = float(params.get("t", -1.0))
            moved = _stage("lawson-cmc", lawson_cmc, cmc, None, t1)
            kappa1 = moved.frame.kappa
            if kappa1 >= -1e-9:
                raise GeometryError("h3 route needs negative ambient curvature; adjust t")
            moved = _stage("renormalize", renormalize_frame, moved,
                           1.0 / np.sqrt(-kappa1), 1.0)
            fit = fit_weingarten(moved)
            members = classify_parallel_family(fit, moved.frame)
            cgc_thetas = [m.theta for m in members if m.label == "constant-gauss"]
            if not cgc_thetas:
                raise GeometryError("no constant-Gauss member in the family")
            out = _stage("rotate-to-cgc", parallel_theta, moved, cgc_thetas[0])
            out.provenance += [{"op": "generate", "target": "constant_gauss_h3"}]
            pair = _stage("split", split_weingarten, out, fit_weingarten(out))
            return out, pair
        raise GeometryError(f"unknown constant_gauss frame {frame!r}")
    if target == "flat_front":
        return flat_front_net(m_max, n_max,
                              label_scale=float(params.get("label_scale", 0.2)))
    raise GeometryError(f"unknown pipeline target {target!r}")
