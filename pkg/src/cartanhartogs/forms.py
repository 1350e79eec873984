"""Numerical realization of Kaehler forms: complex Hessians, two-forms, pullbacks.

All derivatives are central differences with step h = step * (1 + ||point||).
A potential f on C^m yields the Hermitian matrix G_jk = d^2 f / dz_j dzbar_k,
assembled from the real Hessian in interleaved coordinates (x1, y1, ..., xm, ym);
the associated real two-form (i/2) sum G_jk dz_j ^ dzbar_k is represented by an
antisymmetric 2m x 2m matrix in the same coordinate order.  Comparisons use the
entrywise max norm of the difference.
"""

from __future__ import annotations

import numpy as np

from .errors import ShapeError
from .hartogs import HartogsPoint, HartogsSpec, dual_potential_field
from .jtsys import norm_self
from .realcoords import to_complex, to_real

DEFAULT_STEP = 1e-5


class HermitianForm:
    """A conjugate-symmetric matrix; symmetrized on construction."""

    def __init__(self, matrix: np.ndarray, tol: float = 1e-9):
        matrix = np.asarray(matrix, dtype=complex)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise ShapeError("HermitianForm needs a square matrix")
        scale = max(1.0, float(np.max(np.abs(matrix))))
        dev = float(np.max(np.abs(matrix - np.conj(matrix.T))))
        if dev > tol * scale:
            raise ValueError(f"matrix is not conjugate-symmetric (deviation {dev:.2e})")
        self.matrix = 0.5 * (matrix + np.conj(matrix.T))

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.matrix)


class TwoForm:
    """An antisymmetric real matrix of coefficients; antisymmetrized on construction."""

    def __init__(self, matrix: np.ndarray, tol: float = 1e-9):
        matrix = np.asarray(matrix, dtype=float)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1] or matrix.shape[0] % 2:
            raise ShapeError("TwoForm needs a square even-dimensional matrix")
        scale = max(1.0, float(np.max(np.abs(matrix))))
        dev = float(np.max(np.abs(matrix + matrix.T)))
        if dev > tol * scale:
            raise ValueError(f"matrix is not antisymmetric (deviation {dev:.2e})")
        self.matrix = 0.5 * (matrix - matrix.T)


def form_distance(a: TwoForm, b: TwoForm) -> float:
    """Entrywise max-norm distance between two-forms."""
    return float(np.max(np.abs(a.matrix - b.matrix)))


def standard_symplectic(m: int) -> TwoForm:
    """omega_0 = sum_j dx_j ^ dy_j in interleaved coordinates."""
    w = np.zeros((2 * m, 2 * m))
    idx = np.arange(m)
    w[2 * idx, 2 * idx + 1] = 1.0
    w[2 * idx + 1, 2 * idx] = -1.0
    return TwoForm(w)


def _eval_field(f, pts: np.ndarray) -> np.ndarray:
    vals = np.asarray(f(pts))
    if vals.shape != pts.shape[:-1]:
        vals = np.array([float(f(p)) for p in pts])
    return vals


def complex_hessian_batch(f, pts: np.ndarray, step: float = DEFAULT_STEP) -> np.ndarray:
    """Complex Hessians d^2 f / dz dzbar at a batch of points, shape (B, m, m)."""
    pts = np.asarray(pts, dtype=complex)
    squeeze = pts.ndim == 1
    if squeeze:
        pts = pts[None]
    x = to_real(pts)
    batch, k = x.shape
    h = step * (1.0 + np.linalg.norm(x, axis=-1))

    pairs = [(a, b) for a in range(k) for b in range(a + 1, k)]
    pattern = np.zeros((1 + 2 * k + 4 * len(pairs), k))
    for a in range(k):
        pattern[1 + 2 * a, a] = 1.0
        pattern[2 + 2 * a, a] = -1.0
    base = 1 + 2 * k
    for i, (a, b) in enumerate(pairs):
        for j, (sa, sb) in enumerate(((1, 1), (1, -1), (-1, 1), (-1, -1))):
            pattern[base + 4 * i + j, a] = sa
            pattern[base + 4 * i + j, b] = sb

    stencil = x[:, None, :] + h[:, None, None] * pattern[None]
    vals = _eval_field(f, to_complex(stencil.reshape(-1, k))).reshape(batch, -1)

    hess = np.empty((batch, k, k))
    h2 = h * h
    f0 = vals[:, 0]
    for a in range(k):
        hess[:, a, a] = (vals[:, 1 + 2 * a] + vals[:, 2 + 2 * a] - 2.0 * f0) / h2
    for i, (a, b) in enumerate(pairs):
        off = base + 4 * i
        mixed = (vals[:, off] - vals[:, off + 1] - vals[:, off + 2] + vals[:, off + 3]) / (4.0 * h2)
        hess[:, a, b] = mixed
        hess[:, b, a] = mixed

    g = 0.25 * ((hess[:, 0::2, 0::2] + hess[:, 1::2, 1::2])
                + 1j * (hess[:, 0::2, 1::2] - hess[:, 1::2, 0::2]))
    return g[0] if squeeze else g


def complex_hessian(f, point: np.ndarray, step: float = DEFAULT_STEP) -> HermitianForm:
    """Complex Hessian of a scalar field at one point of C^m."""
    return HermitianForm(complex_hessian_batch(f, np.asarray(point, dtype=complex), step))


def hermitian_to_twoform_matrix(g: np.ndarray) -> np.ndarray:
    """Coefficient matrix of (i/2) sum g_jk dz_j ^ dzbar_k, batched over leading axes."""
    g = np.asarray(g, dtype=complex)
    m = g.shape[-1]
    sym = g.real
    asym = g.imag
    w = np.zeros(g.shape[:-2] + (2 * m, 2 * m))
    w[..., 0::2, 0::2] = -asym
    w[..., 1::2, 1::2] = -asym
    w[..., 0::2, 1::2] = sym
    w[..., 1::2, 0::2] = -np.swapaxes(sym, -1, -2)
    return w


def kahler_form_at(f, point: np.ndarray, step: float = DEFAULT_STEP) -> TwoForm:
    """The Kaehler form of a potential, as a real two-form matrix."""
    g = complex_hessian_batch(f, np.asarray(point, dtype=complex), step)
    return TwoForm(hermitian_to_twoform_matrix(g))


def jacobian_batch(map_r, x: np.ndarray, step: float = DEFAULT_STEP) -> np.ndarray:
    """Real Jacobians of a batched map R^k -> R^k', shape (B, k', k)."""
    x = np.asarray(x, dtype=float)
    batch, k = x.shape
    h = step * (1.0 + np.linalg.norm(x, axis=-1))
    eye = np.eye(k)
    plus = x[:, None, :] + h[:, None, None] * eye[None]
    minus = x[:, None, :] - h[:, None, None] * eye[None]
    vp = np.asarray(map_r(plus.reshape(-1, k)))
    vm = np.asarray(map_r(minus.reshape(-1, k)))
    kout = vp.shape[-1]
    vp = vp.reshape(batch, k, kout)
    vm = vm.reshape(batch, k, kout)
    return np.swapaxes(vp - vm, -1, -2) / (2.0 * h[:, None, None])


def pullback(map_r, point: np.ndarray, target_form: TwoForm,
             step: float = DEFAULT_STEP) -> TwoForm:
    """Pull a constant-coefficient two-form back through a real map at a point.

    The map takes batched real vectors (interleaved coordinates); the result is
    J^T W J with J the central-difference Jacobian at the point.
    """
    x = np.asarray(point, dtype=float)
    jac = jacobian_batch(map_r, x[None], step)[0]
    return TwoForm(jac.T @ target_form.matrix @ jac)


def pullback_batch(map_r, x: np.ndarray, target: np.ndarray,
                   step: float = DEFAULT_STEP) -> np.ndarray:
    jac = jacobian_batch(map_r, x, step)
    return np.einsum("bji,jk,bkl->bil", jac, target, jac)


def is_positive_definite(g: HermitianForm) -> tuple[bool, float]:
    """Positive-definiteness together with the smallest eigenvalue."""
    smallest = float(g.eigenvalues()[0])
    return smallest > 0.0, smallest


def det_dual_hessian(H: HartogsSpec, p: HartogsPoint) -> float:
    """Closed-form determinant of the dual potential's complex Hessian,

    mu^n N*^(mu(n+1) - gamma) / (N*^mu + |w|^2)^(n+2),  N* = N(z, -zbar).
    """
    d = H.domain
    z = np.asarray(p.z, dtype=complex)
    nd = float(norm_self(d, z, sign=-1))
    return (H.mu ** d.n * nd ** (H.mu * (d.n + 1) - d.genus)
            / (nd ** H.mu + abs(p.w) ** 2) ** (d.n + 2))


def det_dual_hessian_fd(H: HartogsSpec, p: HartogsPoint,
                        step: float = DEFAULT_STEP) -> float:
    """Finite-difference route for the same determinant."""
    g = complex_hessian_batch(dual_potential_field(H), p.as_vector(), step)
    return float(np.linalg.det(g).real)


def dual_hessian_min_eigs(H: HartogsSpec, pts: np.ndarray, step: float = 1e-3) -> np.ndarray:
    """Smallest Hessian eigenvalue of phi* at each point, batched.

    The coarser default step keeps rounding noise (eps/h^2) far below the
    smallest true eigenvalues at far points, where truncation is still
    relatively small; sign certification is what matters here.
    """
    g = complex_hessian_batch(dual_potential_field(H), pts, step)
    return np.linalg.eigvalsh(g)[..., 0]


def base_restriction_matches(H: HartogsSpec, z: np.ndarray, step: float = DEFAULT_STEP) -> float:
    """Max deviation between the dual form restricted to w = 0 and mu times the
    dual base form; returns the entrywise residual."""
    z = np.asarray(z, dtype=complex)
    pt = np.append(z, 0.0 + 0.0j)
    big = complex_hessian_batch(dual_potential_field(H), pt, step)

    def base_field(zz: np.ndarray) -> np.ndarray:
        return H.mu * np.log(norm_self(H.domain, zz, sign=-1))

    small = complex_hessian_batch(base_field, z, step)
    n = H.domain.n
    return float(np.max(np.abs(big[:n, :n] - small)))
