"""Cartan-Hartogs domains, their symplectic duals, and the two global Darboux maps.

The domain M is {(z, w) in Omega x C : |w|^2 < N(z, zbar)^mu} with Kaehler
potential phi = -log(N^mu - |w|^2).  Its dual carries the everywhere-defined
potential phi* = log(N(z, -zbar)^mu + |w|^2) on C^(n+1).  The map

    Psi(z, w) = (N^mu - |w|^2)^(-1/2) (sqrt(mu N^mu) B(z, zbar)^(-1/4) z, w)

pulls the flat form back to the domain form, and

    Phi(z, w) = (N*^mu + |w|^2)^(-1/2) (sqrt(mu N*^mu) B(z, -zbar)^(-1/4) z, w)

with N* = N(z, -zbar) does the same for the dual form.  Points are handled
either as HartogsPoint pairs (public operations) or as packed complex vectors
of length n+1 with w last (batched kernels, suffix ``_vec``).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import jtsys
from .errors import ConvergenceError, DomainError, ShapeError
from .jtsys import DomainSpec, b_quarter_power_on_z, membership, norm_self, singular_values
from .realcoords import to_complex, to_real


@dataclass(frozen=True)
class HartogsSpec:
    """A base domain together with the fiber exponent mu > 0."""

    domain: DomainSpec
    mu: float


def make_hartogs(domain: DomainSpec, mu: float) -> HartogsSpec:
    if not mu > 0:
        raise DomainError("mu must be positive")
    return HartogsSpec(domain, float(mu))


@dataclass(frozen=True)
class HartogsPoint:
    """A pair (z, w) with z a flat base coordinate vector and w the fiber coordinate."""

    z: np.ndarray
    w: complex

    def as_vector(self) -> np.ndarray:
        return np.append(np.asarray(self.z, dtype=complex), complex(self.w))


def point_from_vector(vec: np.ndarray) -> HartogsPoint:
    vec = np.asarray(vec, dtype=complex)
    return HartogsPoint(vec[:-1].copy(), complex(vec[-1]))


def as_point(H: HartogsSpec, p) -> HartogsPoint:
    """Coerce a HartogsPoint or a length-(n+1) complex vector to HartogsPoint."""
    if isinstance(p, HartogsPoint):
        return p
    vec = np.asarray(p, dtype=complex)
    if vec.shape != (H.domain.n + 1,):
        raise ShapeError(f"point must have {H.domain.n + 1} complex coordinates")
    return point_from_vector(vec)


def split_vec(H: HartogsSpec, pts: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    pts = np.asarray(pts, dtype=complex)
    if pts.shape[-1] != H.domain.n + 1:
        raise ShapeError(f"expected last axis {H.domain.n + 1}, got {pts.shape}")
    return pts[..., :-1], pts[..., -1]


def _join(zeta: np.ndarray, omega: np.ndarray) -> np.ndarray:
    return np.concatenate([zeta, omega[..., None]], axis=-1)


def fiber_gap_vec(H: HartogsSpec, pts: np.ndarray) -> np.ndarray:
    """g = N(z, zbar)^mu - |w|^2, positive exactly on the open domain.

    Where N <= 0 the fractional power is undefined and the gap is -inf.
    """
    z, w = split_vec(H, pts)
    nbase = norm_self(H.domain, z)
    good = nbase > 0
    nmu = np.where(good, np.where(good, nbase, 1.0) ** H.mu, -np.inf)
    return nmu - np.abs(w) ** 2


def ch_member_vec(H: HartogsSpec, pts: np.ndarray) -> np.ndarray:
    z, _ = split_vec(H, pts)
    return membership(H.domain, z) & (fiber_gap_vec(H, pts) > 0)


def ch_member(H: HartogsSpec, p) -> bool:
    """Membership test for the Hartogs domain (strict inequalities)."""
    return bool(ch_member_vec(H, as_point(H, p).as_vector()[None])[0])


def potential_field(H: HartogsSpec):
    """phi = -log(N^mu - |w|^2) as a batched field on the open domain."""

    def phi(pts: np.ndarray) -> np.ndarray:
        return -np.log(fiber_gap_vec(H, pts))

    return phi


def dual_potential_field(H: HartogsSpec):
    """phi* = log(N(z, -zbar)^mu + |w|^2), smooth on all of C^(n+1)."""

    def phistar(pts: np.ndarray) -> np.ndarray:
        z, w = split_vec(H, pts)
        return np.log(norm_self(H.domain, z, sign=-1) ** H.mu + np.abs(w) ** 2)

    return phistar


def potential(H: HartogsSpec, p) -> float:
    p = as_point(H, p)
    if not ch_member(H, p):
        raise DomainError("point is not in the Hartogs domain")
    return float(potential_field(H)(p.as_vector()[None])[0])


def dual_potential(H: HartogsSpec, p) -> float:
    return float(dual_potential_field(H)(as_point(H, p).as_vector()[None])[0])


def psi_map_vec(H: HartogsSpec, pts: np.ndarray) -> np.ndarray:
    """Darboux map for the domain form, batched over member points."""
    z, w = split_vec(H, pts)
    nmu = norm_self(H.domain, z) ** H.mu
    g = nmu - np.abs(w) ** 2
    zeta = np.sqrt(H.mu * nmu / g)[..., None] * b_quarter_power_on_z(H.domain, z, 1)
    return _join(zeta, w / np.sqrt(g))


def phi_map_vec(H: HartogsSpec, pts: np.ndarray) -> np.ndarray:
    """Darboux map for the dual form, batched; defined on all of C^(n+1)."""
    z, w = split_vec(H, pts)
    nmu = norm_self(H.domain, z, sign=-1) ** H.mu
    denom = nmu + np.abs(w) ** 2
    zeta = np.sqrt(H.mu * nmu / denom)[..., None] * b_quarter_power_on_z(H.domain, z, -1)
    return _join(zeta, w / np.sqrt(denom))


def psi_map(H: HartogsSpec, p) -> HartogsPoint:
    p = as_point(H, p)
    if not ch_member(H, p):
        raise DomainError("point is not in the Hartogs domain")
    return point_from_vector(psi_map_vec(H, p.as_vector()[None])[0])


def phi_map(H: HartogsSpec, p) -> HartogsPoint:
    return point_from_vector(phi_map_vec(H, as_point(H, p).as_vector()[None])[0])


def _as_target_vector(H: HartogsSpec, target) -> np.ndarray:
    vec = target.as_vector() if isinstance(target, HartogsPoint) else np.asarray(target, dtype=complex)
    if vec.shape != (H.domain.n + 1,):
        raise ShapeError(f"target must have {H.domain.n + 1} complex coordinates")
    return vec


def _damped_newton(H: HartogsSpec, forward_vec, target: np.ndarray, inside,
                   tol: float, max_iter: int = 100) -> np.ndarray:
    """Solve forward(x) = target on the real 2(n+1)-dimensional system.

    Starts from the origin scaled toward the target; steps are halved while the
    base iterate leaves the admissible region or the residual fails to shrink.
    """
    target_r = to_real(target[None])[0]

    def residual(xr: np.ndarray) -> np.ndarray:
        return to_real(forward_vec(H, to_complex(xr))) - target_r

    x = target_r / np.sqrt(1.0 + float(target_r @ target_r))
    while not inside(x):
        x = 0.5 * x
    fx = residual(x[None])[0]
    k = x.size
    for _ in range(max_iter):
        norm_fx = np.max(np.abs(fx))
        if norm_fx <= tol:
            return x
        h = 1e-7 * (1.0 + np.linalg.norm(x))
        stencil = np.concatenate([x + h * np.eye(k), x - h * np.eye(k)])
        vals = residual(stencil)
        jac = (vals[:k] - vals[k:]).T / (2.0 * h)
        try:
            step = np.linalg.solve(jac, -fx)
        except np.linalg.LinAlgError:
            step = np.linalg.lstsq(jac, -fx, rcond=None)[0]
        t = 1.0
        while True:
            x_new = x + t * step
            if inside(x_new):
                f_new = residual(x_new[None])[0]
                if np.max(np.abs(f_new)) < norm_fx:
                    break
            t *= 0.5
            if t < 1e-10:
                raise ConvergenceError("Newton step damped to zero")
        x, fx = x_new, f_new
    raise ConvergenceError("Newton did not converge; target may lie outside the image")


def psi_inverse(H: HartogsSpec, target) -> HartogsPoint:
    """Preimage under Psi of any point of C^(n+1) (Psi is onto)."""
    vec = _as_target_vector(H, target)

    def inside(xr: np.ndarray) -> bool:
        return bool(ch_member_vec(H, to_complex(xr)[None])[0])

    tol = 1e-12 * (1.0 + np.linalg.norm(vec))
    sol = _damped_newton(H, psi_map_vec, vec, inside, tol)
    return point_from_vector(to_complex(sol))


def phi_inverse(H: HartogsSpec, target) -> HartogsPoint:
    """Preimage under Phi; rejects targets outside the exact image
    {|omega| < 1 and xi_j^2 < mu (1 - |omega|^2)}."""
    vec = _as_target_vector(H, target)
    if abs(vec[-1]) >= 1.0:
        raise DomainError("target fiber coordinate must have modulus < 1")
    xi = singular_values(H.domain, vec[:-1])
    if np.any(xi**2 >= H.mu * (1.0 - abs(vec[-1]) ** 2)):
        raise DomainError("target violates the bound xi^2 < mu (1 - |omega|^2)")
    tol = 1e-12 * (1.0 + np.linalg.norm(vec))
    sol = _damped_newton(H, phi_map_vec, vec, lambda xr: True, tol)
    return point_from_vector(to_complex(sol))


@dataclass(frozen=True)
class BaseEmbedding:
    """A generic-norm-preserving triple embedding between supported domains."""

    source: DomainSpec
    target: DomainSpec
    kind: str  # "rect-diagonal" | "zero-pad"


def polydisc_to_type1(p: int, q: int) -> BaseEmbedding:
    """Polydisc Delta^p into type-I(p, q) along the rectangular diagonal."""
    return BaseEmbedding(jtsys.make_domain(jtsys.KIND_POLYDISC, n=p),
                         jtsys.make_domain(jtsys.KIND_TYPE_I, p=p, q=q),
                         "rect-diagonal")


def polydisc_inclusion(m: int, n: int) -> BaseEmbedding:
    """Polydisc Delta^m into Delta^n by zero padding."""
    if m > n:
        raise ValueError("inclusion needs m <= n")
    return BaseEmbedding(jtsys.make_domain(jtsys.KIND_POLYDISC, n=m),
                         jtsys.make_domain(jtsys.KIND_POLYDISC, n=n),
                         "zero-pad")


def embed_base(E: BaseEmbedding, z: np.ndarray) -> np.ndarray:
    z = np.asarray(z, dtype=complex)
    if z.shape[-1] != E.source.n:
        raise ShapeError(f"expected last axis {E.source.n}, got {z.shape}")
    if E.kind == "rect-diagonal":
        p, q = E.target.shape
        out = np.zeros(z.shape[:-1] + (p, q), dtype=complex)
        idx = np.arange(p)
        out[..., idx, idx] = z
        return out.reshape(z.shape[:-1] + (E.target.n,))
    out = np.zeros(z.shape[:-1] + (E.target.n,), dtype=complex)
    out[..., : E.source.n] = z
    return out


def lift_embedding(E: BaseEmbedding, p) -> HartogsPoint:
    """Lift a base embedding to the Hartogs level, (z, w) -> (f(z), w)."""
    if not isinstance(p, HartogsPoint):
        p = point_from_vector(np.asarray(p, dtype=complex))
    return HartogsPoint(embed_base(E, np.asarray(p.z, dtype=complex)), p.w)


def hartogs_isotropy_apply(H: HartogsSpec, tau, p) -> HartogsPoint:
    """Lifted isotropy action (z, w) -> (tau z, w); fixes the generic norm."""
    p = as_point(H, p)
    return HartogsPoint(jtsys.isotropy_apply(H.domain, tau, np.asarray(p.z, dtype=complex)), p.w)


def unit_ball_darboux(pts: np.ndarray) -> np.ndarray:
    """The classical ball map zeta -> zeta / sqrt(1 - |zeta|^2), batched."""
    pts = np.asarray(pts, dtype=complex)
    return pts / np.sqrt(1.0 - np.sum(np.abs(pts) ** 2, axis=-1))[..., None]


# ---------------------------------------------------------------------------
# verification samplers


def sample_base_points(D: DomainSpec, count: int, rng: np.random.Generator,
                       lam_max: float = 0.55) -> np.ndarray:
    """Interior points of Omega with all spectral eigenvalues < lam_max."""
    if D.kind == jtsys.KIND_POLYDISC:
        radius = lam_max * np.sqrt(rng.uniform(size=(count, D.n)))
        return radius * np.exp(1j * rng.uniform(0, 2 * np.pi, size=(count, D.n)))
    g = rng.normal(size=(count, D.n)) + 1j * rng.normal(size=(count, D.n))
    top = singular_values(D, g)[:, 0]
    scale = lam_max * rng.uniform(size=count) ** (1.0 / (2 * D.n)) / top
    return g * scale[:, None]


def sample_member_points(H: HartogsSpec, count: int, rng: np.random.Generator,
                         lam_max: float = 0.55, w_frac: float = 0.40,
                         g_floor: float = 1e-3) -> np.ndarray:
    """Member points packed as (count, n+1), kept interior for stable stencils.

    |w|^2 is at most w_frac * N^mu and points with N^mu - |w|^2 < g_floor are
    rejected; the defaults keep finite differences at step 1e-5 well inside
    their accuracy budget.
    """
    out = np.empty((count, H.domain.n + 1), dtype=complex)
    filled = 0
    while filled < count:
        todo = count - filled
        z = sample_base_points(H.domain, todo, rng, lam_max)
        nmu = norm_self(H.domain, z) ** H.mu
        w = np.sqrt(w_frac * rng.uniform(size=todo) * nmu) \
            * np.exp(1j * rng.uniform(0, 2 * np.pi, size=todo))
        keep = nmu - np.abs(w) ** 2 >= g_floor
        got = int(np.sum(keep))
        out[filled:filled + got, :-1] = z[keep]
        out[filled:filled + got, -1] = w[keep]
        filled += got
    return out


def sample_member_points_full(H: HartogsSpec, count: int, rng: np.random.Generator,
                              max_rounds: int = 2000) -> np.ndarray:
    """Member points from bounding-box rejection, covering the whole domain."""
    out = np.empty((count, H.domain.n + 1), dtype=complex)
    filled = 0
    for _ in range(max_rounds):
        if filled >= count:
            break
        todo = max(count - filled, 64)
        radius = np.sqrt(rng.uniform(size=(todo, H.domain.n)))
        z = radius * np.exp(1j * rng.uniform(0, 2 * np.pi, size=(todo, H.domain.n)))
        keep = membership(H.domain, z)
        z = z[keep]
        nmu = norm_self(H.domain, z) ** H.mu
        w = np.sqrt(rng.uniform(size=z.shape[0]) * nmu) \
            * np.exp(1j * rng.uniform(0, 2 * np.pi, size=z.shape[0]))
        got = min(z.shape[0], count - filled)
        out[filled:filled + got, :-1] = z[:got]
        out[filled:filled + got, -1] = w[:got]
        filled += got
    if filled < count:
        raise ConvergenceError("rejection sampler failed to fill the batch")
    return out


def sample_heavy_points(m: int, count: int, rng: np.random.Generator,
                        norm_cap: float = 10.0) -> np.ndarray:
    """Heavy-tailed points of C^m: per-coordinate Cauchy-like radii, norm-capped."""
    radius = np.abs(np.tan(0.5 * np.pi * rng.uniform(size=(count, m))))
    pts = radius * np.exp(1j * rng.uniform(0, 2 * np.pi, size=(count, m)))
    norms = np.linalg.norm(pts, axis=-1)
    big = norms > norm_cap
    if np.any(big):
        shrink = norm_cap * rng.uniform(size=int(np.sum(big))) ** (1.0 / (2 * m))
        pts[big] *= (shrink / norms[big])[:, None]
    return pts


def sample_ball_points(m: int, count: int, rng: np.random.Generator,
                       radius: float) -> np.ndarray:
    """Uniform points of the real 2m-ball of the given radius, as C^m vectors."""
    g = rng.normal(size=(count, 2 * m))
    g /= np.linalg.norm(g, axis=-1)[:, None]
    g *= radius * rng.uniform(size=count)[:, None] ** (1.0 / (2 * m))
    return to_complex(g)
