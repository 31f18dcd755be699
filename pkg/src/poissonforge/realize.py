"""Numerical symplectic realization of polynomial Poisson structures.

Given a Poisson bivector pi on R^n, the flow phi_t of the spray
V(x,y) = (sum_i pi_ij(x) y_i d/dx_j ; 0) on T*R^n = R^n x R^n averages the
canonical symplectic form into omega = int_0^1 phi_t^* omega_can dt, which is
symplectic near the zero section and makes the bundle projection a Poisson
map onto (R^n, pi).  This module integrates the flow together with its
variational equations and the quadrature in one RK4 pass, and verifies the
realization properties at seeded random samples.  It also contains the
midpoint quadrature used to reproduce sphere-leaf symplectic areas and their
radial variations.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .multivector import PolyMVF

__all__ = [
    "SprayField",
    "RealizationReport",
    "FlowBlowupError",
    "flow_with_jacobian",
    "realization_form",
    "verify_realization",
    "symplectic_area",
    "sphere_leaf_form",
    "dh_variation",
]


class FlowBlowupError(RuntimeError):
    def __init__(self, t):
        super().__init__(f"spray flow left numeric range near t = {t:.4g}")
        self.t = t


class SprayField:
    """The simplest contravariant spray of a polynomial bivector."""

    def __init__(self, pi: PolyMVF):
        if pi.grade != 2:
            raise ValueError("expected a bivector")
        self.pi = pi
        self.n = pi.nvars
        # derivative coefficient tables: dpi[k] is the matrix d(pi_ij)/dx_k
        self._dpi = []
        for k in range(1, self.n + 1):
            terms = {idx: p.diff(k) for idx, p in pi.terms.items()}
            terms = {i: p for i, p in terms.items() if not p.is_zero()}
            self._dpi.append(PolyMVF(self.n, 2, terms, pi.weights))

    def pi_matrix(self, x: np.ndarray) -> np.ndarray:
        return self.pi.bivector_matrix(x)

    def dpi_matrices(self, x: np.ndarray) -> np.ndarray:
        """Shape (..., n, n, n): entry [k,i,j] = d(pi_ij)/dx_k at x."""
        x = np.asarray(x, dtype=float)
        return np.stack([d.bivector_matrix(x) for d in self._dpi], axis=-3)

    def __call__(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        """Horizontal part of V: (dx/dt)_j = sum_i pi_ij(x) y_i."""
        P = self.pi_matrix(x)
        return np.einsum("...ij,...i->...j", P, y)


def _rhs(spray: SprayField, x, y, J, Om, Omega_can):
    n = spray.n
    B = x.shape[0]
    P = spray.pi_matrix(x)                       # (B, n, n)
    dP = spray.dpi_matrices(x)                   # (B, n, n, n)
    xdot = np.einsum("bij,bi->bj", P, y)
    ydot = np.zeros_like(y)
    A = np.zeros((B, 2 * n, 2 * n))
    A[:, :n, :n] = np.einsum("bkij,bi->bjk", dP, y)
    A[:, :n, n:] = P.transpose(0, 2, 1)
    Jdot = A @ J
    Omdot = J.transpose(0, 2, 1) @ (Omega_can @ J)
    return xdot, ydot, Jdot, Omdot


def _flow_batch(pi: PolyMVF, xi: np.ndarray, t_final: float, steps: int):
    """Batched RK4 for (state, jacobian, folded quadrature of phi_t^* omega_can).

    Returns (x, y, J, Om, blowup_time); Om is int_0^{t_final} J^T Omega_can J dt.
    """
    spray = SprayField(pi)
    n = spray.n
    xi = np.atleast_2d(np.asarray(xi, dtype=float))
    B = xi.shape[0]
    x = xi[:, :n].copy()
    y = xi[:, n:].copy()
    J = np.broadcast_to(np.eye(2 * n), (B, 2 * n, 2 * n)).copy()
    Om = np.zeros((B, 2 * n, 2 * n))
    Omega_can = np.block([[np.zeros((n, n)), np.eye(n)],
                          [-np.eye(n), np.zeros((n, n))]])
    h = t_final / steps
    check_every = max(1, steps // 32)
    blowup = None
    for s in range(steps):
        k1 = _rhs(spray, x, y, J, Om, Omega_can)
        k2 = _rhs(spray, x + 0.5 * h * k1[0], y + 0.5 * h * k1[1],
                  J + 0.5 * h * k1[2], Om, Omega_can)
        k3 = _rhs(spray, x + 0.5 * h * k2[0], y + 0.5 * h * k2[1],
                  J + 0.5 * h * k2[2], Om, Omega_can)
        k4 = _rhs(spray, x + h * k3[0], y + h * k3[1], J + h * k3[2],
                  Om, Omega_can)
        x += (h / 6) * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0])
        y += (h / 6) * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1])
        J += (h / 6) * (k1[2] + 2 * k2[2] + 2 * k3[2] + k4[2])
        Om += (h / 6) * (k1[3] + 2 * k2[3] + 2 * k3[3] + k4[3])
        if (s + 1) % check_every == 0 or s == steps - 1:
            if not np.isfinite(x).all() or not np.isfinite(J).all():
                blowup = (s + 1) * h
                break
    return x, y, J, Om, blowup


def flow_with_jacobian(V: SprayField, xi, t_final: float, steps: int):
    """RK4 flow of the spray from xi, with the variational equations."""
    if steps < 1:
        raise ValueError("steps must be >= 1")
    x, y, J, _, blowup = _flow_batch(V.pi, np.asarray(xi, dtype=float)[None, :],
                                     t_final, steps)
    if blowup is not None:
        raise FlowBlowupError(blowup)
    return np.concatenate([x[0], y[0]]), J[0]


def realization_form(pi: PolyMVF, xi, steps: int) -> np.ndarray:
    """omega_xi = int_0^1 (phi_t^* omega_can)_xi dt, as a 2n x 2n matrix."""
    _, _, _, Om, blowup = _flow_batch(pi, np.asarray(xi, dtype=float)[None, :],
                                      1.0, steps)
    if blowup is not None:
        raise FlowBlowupError(blowup)
    return Om[0]


@dataclass(frozen=True)
class RealizationReport:
    n_samples: int
    seed: int
    steps: int
    radius: float
    fd_step: float
    skew_defect_max: float
    domega_max: float
    det_min: float
    poisson_residual_max: float
    zero_section_residual: float
    skipped: int

    def to_json_obj(self) -> dict:
        return {
            "n_samples": self.n_samples, "seed": self.seed, "steps": self.steps,
            "radius": self.radius, "fd_step": self.fd_step,
            "skew_defect_max": self.skew_defect_max,
            "domega_max": self.domega_max, "det_min": self.det_min,
            "poisson_residual_max": self.poisson_residual_max,
            "zero_section_residual": self.zero_section_residual,
            "skipped": self.skipped,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), sort_keys=True)


def verify_realization(pi: PolyMVF, n_samples: int, radius: float, seed: int,
                       steps: int) -> RealizationReport:
    """Check Theorem-0 properties of omega at seeded random points |xi| <= radius."""
    n = pi.nvars
    rng = np.random.default_rng(seed)
    dirs = rng.normal(size=(n_samples, 2 * n))
    dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
    mags = radius * rng.uniform(0.1, 1.0, size=(n_samples, 1))
    base = dirs * mags
    h = 1e-4 * radius

    # one batch: base points, 2*(2n) finite-difference shifts, zero-section points
    shifts = []
    for a in range(2 * n):
        e = np.zeros(2 * n)
        e[a] = h
        shifts.extend([base + e, base - e])
    zero_sec = np.concatenate([base[:, :n], np.zeros((n_samples, n))], axis=1)
    batch = np.concatenate([base] + shifts + [zero_sec], axis=0)

    x, y, J, Om, blowup = _flow_batch(pi, batch, 1.0, steps)
    finite = np.isfinite(Om).all(axis=(1, 2))
    groups = 2 + 4 * n  # base + shifts + zero-section
    ok = finite.reshape(groups, n_samples).all(axis=0)
    skipped = int(n_samples - ok.sum())
    if not ok.any():
        raise FlowBlowupError(blowup if blowup is not None else 1.0)
    Om = Om.reshape(groups, n_samples, 2 * n, 2 * n)[:, ok]
    kept = int(ok.sum())

    omega = Om[0]
    skew_defect = np.abs(omega + omega.transpose(0, 2, 1)).max()
    dets = np.linalg.det(omega)
    det_min = float(np.abs(dets).min())

    omega_inv = np.linalg.inv(omega)
    Pi_base = pi.bivector_matrix(base[ok, :n])
    poisson_res = np.abs(omega_inv[:, :n, :n] - Pi_base).max()

    # d(omega) via central differences of the matrix entries
    grad = np.empty((2 * n, kept, 2 * n, 2 * n))
    for a in range(2 * n):
        grad[a] = (Om[1 + 2 * a] - Om[2 + 2 * a]) / (2 * h)
    domega_max = 0.0
    for a in range(2 * n):
        for b in range(a + 1, 2 * n):
            for c in range(b + 1, 2 * n):
                d3 = grad[a, :, b, c] + grad[b, :, c, a] + grad[c, :, a, b]
                domega_max = max(domega_max, float(np.abs(d3).max()))

    omega0 = Om[-1]
    closed = np.zeros_like(omega0)
    closed[:, :n, n:] = np.eye(n)
    closed[:, n:, :n] = -np.eye(n)
    closed[:, n:, n:] = pi.bivector_matrix(base[ok, :n])
    zero_res = float(np.abs(omega0 - closed).max())

    return RealizationReport(
        n_samples=n_samples, seed=seed, steps=steps, radius=radius, fd_step=h,
        skew_defect_max=float(skew_defect), domega_max=domega_max,
        det_min=det_min, poisson_residual_max=float(poisson_res),
        zero_section_residual=zero_res, skipped=skipped)


# ---------------------------------------------------------------------------
# Sphere-leaf areas and their radial variation
# ---------------------------------------------------------------------------

def symplectic_area(form, grid) -> float:
    """Composite-midpoint integral of f dphi^dtheta over [0,2pi]x[-pi/2,pi/2].

    `form(phi, theta)` must accept broadcast arrays; `grid` is an int N
    (N x N nodes) or a pair (n_phi, n_theta), each at least 32.
    """
    if isinstance(grid, int):
        n_phi = n_theta = grid
    else:
        n_phi, n_theta = grid
    if n_phi < 32 or n_theta < 32:
        raise ValueError("grid must be at least 32 x 32")
    dphi = 2 * math.pi / n_phi
    dtheta = math.pi / n_theta
    phi = (np.arange(n_phi) + 0.5) * dphi
    theta = -math.pi / 2 + (np.arange(n_theta) + 0.5) * dtheta
    vals = form(phi[:, None], theta[None, :])
    return float(np.sum(vals) * dphi * dtheta)


def _skew3_pinv_quadratic(P, u, v):
    """u^T (-pinv(P)) v for batched 3x3 skew P (axial-vector closed form)."""
    w = np.stack([P[..., 2, 1], P[..., 0, 2], P[..., 1, 0]], axis=-1)
    norm2 = np.sum(w * w, axis=-1)
    Pv = np.cross(w, v)
    return np.einsum("...i,...i->...", u, Pv) / norm2


def sphere_leaf_form(pi: PolyMVF, r: float, scale: float = 1.0):
    """Leaf symplectic form of `scale * pi` on the radius-r sphere, as a
    chart function f with omega = f dphi^dtheta.

    The form is the fiberwise inverse of the bivector on the leaf tangent
    planes: f = t_phi^T (-pinv(Pi)) t_theta at p(phi,theta).
    """
    if pi.nvars != 3:
        raise ValueError("sphere leaves require a bivector on R^3")

    def form(phi, theta):
        phi, theta = np.broadcast_arrays(phi, theta)
        cp, sp = np.cos(phi), np.sin(phi)
        ct, st = np.cos(theta), np.sin(theta)
        p = r * np.stack([cp * ct, sp * ct, st], axis=-1)
        t_phi = r * np.stack([-sp * ct, cp * ct, np.zeros_like(ct)], axis=-1)
        t_theta = r * np.stack([-cp * st, -sp * st, ct], axis=-1)
        P = scale * pi.bivector_matrix(p)
        return _skew3_pinv_quadratic(P, t_phi, t_theta)

    return form


def dh_variation(r: float, h: float, grid=(64, 2048)) -> tuple[float, float]:
    """Radial derivatives of the two sphere-generator areas on S^2 x S^2_r.

    The leaf carries (1+r^2)^{-1} omega_{S^2} + omega_r; the generator areas
    are 4pi/(1+r^2) and 4pi*r, recomputed here by quadrature of the leaf
    forms and differentiated centrally in r.
    """
    if r <= 0:
        raise ValueError("r must be positive")
    from .liealg import linear_poisson, preset
    pi = linear_poisson(preset("so3"))

    def sigma1(rv):
        # unit sphere factor, bivector scaled by (1 + r^2)
        return symplectic_area(sphere_leaf_form(pi, 1.0, scale=1.0 + rv * rv), grid)

    def sigma2(rv):
        return symplectic_area(sphere_leaf_form(pi, rv), grid)

    d1 = (sigma1(r + h) - sigma1(r - h)) / (2 * h)
    d2 = (sigma2(r + h) - sigma2(r - h)) / (2 * h)
    return d1, d2
