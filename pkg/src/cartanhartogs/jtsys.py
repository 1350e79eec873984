"""Hermitian positive Jordan triple systems for the supported bounded symmetric domains.

Two circled realizations are supported:

* ``polydisc``: the unit polydisc in C^n with the componentwise triple product,
  rank n and invariants (a, b) = (0, 0);
* ``type-I``: p-by-q complex matrices of spectral norm < 1 (1 <= p <= q) with
  the matrix triple product, rank p and invariants (a, b) = (2, q - p).

Every algebraic operator used downstream (Bergman operator, generic norm,
spectral decomposition, fractional powers of B(z, +/-zbar)) is expressed through
the matrix realization j(z): a diagonal matrix for the polydisc, the matrix
itself for type-I.  Points are flat complex vectors of length n; type-I points
are reshaped to (p, q) row-major when matrix algebra is needed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, ShapeError

KIND_POLYDISC = "polydisc"
KIND_TYPE_I = "type-I"

# eigenvalues below this are treated as zero when building spectral frames
_EIG_TOL = 1e-13


@dataclass(frozen=True)
class DomainSpec:
    """Numerical invariants of a circled bounded symmetric domain.

    Fields
    ------
    kind : "polydisc" or "type-I"
    shape : (n,) for the polydisc, (p, q) for type-I
    r, a, b : rank and root multiplicities
    n : complex dimension, n = r(b + 1 + (a/2)(r - 1))
    genus : gamma = 2 + a(r - 1) + b
    boundary_volume : optional Furstenberg-Satake boundary constant; never
        required by any ratio computed here, absent by default
    """

    kind: str
    shape: tuple[int, ...]
    r: int
    a: int
    b: int
    n: int
    genus: int
    boundary_volume: float | None = None


def make_domain(kind: str, *, n: int | None = None, p: int | None = None,
                q: int | None = None) -> DomainSpec:
    """Build a DomainSpec for the polydisc (n) or a type-I domain (p, q)."""
    if kind == KIND_POLYDISC:
        if n is None or n < 1:
            raise ValueError("polydisc needs n >= 1")
        spec = DomainSpec(kind, (n,), r=n, a=0, b=0, n=n, genus=2)
    elif kind == KIND_TYPE_I:
        if p is None or q is None or not 1 <= p <= q:
            raise ValueError("type-I needs 1 <= p <= q")
        spec = DomainSpec(kind, (p, q), r=p, a=2, b=q - p, n=p * q,
                          genus=2 + 2 * (p - 1) + (q - p))
    else:
        raise ValueError(f"unknown domain kind: {kind!r}")
    assert spec.n == spec.r * (spec.b + 1 + (spec.a / 2) * (spec.r - 1))
    return spec


def hyperbolic_space(n: int) -> DomainSpec:
    """Complex hyperbolic space CH^n, i.e. the rank-one domain type-I(1, n)."""
    return make_domain(KIND_TYPE_I, p=1, q=n)


def _check_point(D: DomainSpec, z: np.ndarray) -> np.ndarray:
    z = np.asarray(z, dtype=complex)
    if z.shape[-1] != D.n:
        raise ShapeError(f"expected last axis {D.n}, got {z.shape}")
    return z


def as_matrix(D: DomainSpec, z: np.ndarray) -> np.ndarray:
    """View points as stacks of j(z) matrices: diag(z) or the (p, q) reshape."""
    z = _check_point(D, z)
    if D.kind == KIND_POLYDISC:
        m = np.zeros(z.shape + (D.n,), dtype=complex)
        idx = np.arange(D.n)
        m[..., idx, idx] = z
        return m
    p, q = D.shape
    return z.reshape(z.shape[:-1] + (p, q))


def as_vector(D: DomainSpec, m: np.ndarray) -> np.ndarray:
    """Inverse of :func:`as_matrix`."""
    m = np.asarray(m, dtype=complex)
    if D.kind == KIND_POLYDISC:
        idx = np.arange(D.n)
        return m[..., idx, idx]
    return m.reshape(m.shape[:-2] + (D.n,))


def triple_product(D: DomainSpec, x, y, z) -> np.ndarray:
    """Jordan triple product {x, y, z} (C-linear in x and z, conjugate-linear in y)."""
    x, y, z = (_check_point(D, v) for v in (x, y, z))
    if D.kind == KIND_POLYDISC:
        return 2.0 * x * np.conj(y) * z
    xm, ym, zm = (as_matrix(D, v) for v in (x, y, z))
    ystar = np.conj(np.swapaxes(ym, -1, -2))
    return as_vector(D, xm @ ystar @ zm + zm @ ystar @ xm)


def bergman_apply(D: DomainSpec, x, y, w) -> np.ndarray:
    """Apply the Bergman operator B(x, y) to w.

    In the matrix realization, B(x, y) w = (I - j(x) j(y)*) j(w) (I - j(y)* j(x)).
    """
    x, y, w = (_check_point(D, v) for v in (x, y, w))
    if D.kind == KIND_POLYDISC:
        return (1.0 - x * np.conj(y)) ** 2 * w
    p, q = D.shape
    xm, ym, wm = (as_matrix(D, v) for v in (x, y, w))
    ystar = np.conj(np.swapaxes(ym, -1, -2))
    left = np.eye(p) - xm @ ystar
    right = np.eye(q) - ystar @ xm
    return as_vector(D, left @ wm @ right)


def generic_norm(D: DomainSpec, z, y=None, sign: int = 1):
    """Generic norm N(z, sign * ybar); y defaults to z.

    For the polydisc this is prod_j (1 - sign * z_j * conj(y_j)); for type-I it
    is det(I_p - sign * j(z) j(y)*).  N(z, zbar) is real and positive on the
    domain, and N(z, -zbar) >= 1 everywhere.
    """
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    z = _check_point(D, z)
    y = z if y is None else _check_point(D, y)
    if D.kind == KIND_POLYDISC:
        return np.prod(1.0 - sign * z * np.conj(y), axis=-1)
    zm = as_matrix(D, z)
    ystar = np.conj(np.swapaxes(as_matrix(D, y), -1, -2))
    p = D.shape[0]
    return np.linalg.det(np.eye(p) - sign * zm @ ystar)


def norm_self(D: DomainSpec, z, sign: int = 1) -> np.ndarray:
    """Real-valued N(z, sign * zbar), batched."""
    return np.real(generic_norm(D, z, None, sign))


@dataclass(frozen=True)
class SpectralDecomposition:
    """z = sum_j eigenvalues[j] * tripotents[j] over an orthogonal frame.

    Eigenvalues are strictly positive and sorted descending; zero eigenvalues
    are dropped, so the frame length is the rank of z.  Tripotents are stored
    as rows in flat coordinates and are orthonormal for the Hermitian trace
    form.
    """

    eigenvalues: np.ndarray
    tripotents: np.ndarray

    def reconstruct(self) -> np.ndarray:
        if len(self.eigenvalues) == 0:
            return np.zeros(self.tripotents.shape[-1], dtype=complex)
        return self.eigenvalues @ self.tripotents


def spectral_decompose(D: DomainSpec, z) -> SpectralDecomposition:
    """Spectral decomposition of a single point over orthogonal tripotents."""
    z = _check_point(D, z)
    if z.ndim != 1:
        raise ShapeError("spectral_decompose takes a single point")
    cutoff = _EIG_TOL * max(1.0, float(np.linalg.norm(z)))
    if D.kind == KIND_POLYDISC:
        mags = np.abs(z)
        order = np.argsort(-mags)
        lams, frame = [], []
        for idx in order:
            if mags[idx] <= cutoff:
                break
            c = np.zeros(D.n, dtype=complex)
            c[idx] = z[idx] / mags[idx]
            lams.append(mags[idx])
            frame.append(c)
        return SpectralDecomposition(np.array(lams), np.array(frame).reshape(len(lams), D.n))
    p, q = D.shape
    u, s, vh = np.linalg.svd(z.reshape(p, q))
    keep = s > cutoff
    frame = [np.outer(u[:, j], vh[j, :]).reshape(D.n) for j in range(p) if keep[j]]
    k = int(np.sum(keep))
    return SpectralDecomposition(s[keep], np.array(frame).reshape(k, D.n))


def singular_values(D: DomainSpec, z) -> np.ndarray:
    """All r spectral eigenvalues (descending, zeros kept), batched."""
    z = _check_point(D, z)
    if D.kind == KIND_POLYDISC:
        return np.sort(np.abs(z), axis=-1)[..., ::-1]
    p, q = D.shape
    return np.linalg.svd(z.reshape(z.shape[:-1] + (p, q)), compute_uv=False)


def membership(D: DomainSpec, z) -> np.ndarray:
    """True when the largest spectral eigenvalue is < 1, batched."""
    return singular_values(D, z)[..., 0] < 1.0


def flat_distance(D: DomainSpec, z) -> np.ndarray:
    """Euclidean distance to the origin, sqrt(sum_j lambda_j^2), batched."""
    z = _check_point(D, z)
    return np.linalg.norm(z, axis=-1)


def b_quarter_power_on_z(D: DomainSpec, z, sign: int = 1) -> np.ndarray:
    """B(z, sign * zbar)^(-1/4) applied to z, batched.

    Spectrally this is sum_j lambda_j (1 - sign * lambda_j^2)^(-1/2) c_j; for
    sign=+1 it requires all lambda_j < 1.
    """
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    z = _check_point(D, z)
    if D.kind == KIND_POLYDISC:
        fac = 1.0 - sign * np.abs(z) ** 2
        if np.any(fac <= 0):
            raise DomainError("eigenvalue >= 1 with sign=+1")
        return z / np.sqrt(fac)
    p, q = D.shape
    u, s, vh = np.linalg.svd(z.reshape(z.shape[:-1] + (p, q)), full_matrices=False)
    fac = 1.0 - sign * s**2
    if np.any(fac <= 0):
        raise DomainError("eigenvalue >= 1 with sign=+1")
    scaled = u * (s / np.sqrt(fac))[..., None, :]
    return as_vector(D, scaled @ vh)


def _herm_inv_quarter(m: np.ndarray) -> np.ndarray:
    """M^(-1/4) of a Hermitian positive definite matrix via eigendecomposition."""
    vals, vecs = np.linalg.eigh(m)
    if np.any(vals <= 0):
        raise DomainError("operator is not positive definite")
    return (vecs * vals**-0.25) @ np.conj(vecs.T)


def b_quarter_power_operator(D: DomainSpec, z, sign: int = 1) -> np.ndarray:
    """Independent route for :func:`b_quarter_power_on_z` on a single point.

    Applies the honest operator fractional power: with J = j(z), A = I - sign J J*
    and C = I - sign J* J, the result is j^(-1)(A^(-1/4) J C^(-1/4)).
    """
    z = _check_point(D, z)
    if z.ndim != 1:
        raise ShapeError("operator route takes a single point")
    jz = as_matrix(D, z)
    a = np.eye(jz.shape[0]) - sign * jz @ np.conj(jz.T)
    c = np.eye(jz.shape[1]) - sign * np.conj(jz.T) @ jz
    return as_vector(D, _herm_inv_quarter(a) @ jz @ _herm_inv_quarter(c))


@dataclass(frozen=True)
class PolydiscIsotropy:
    """Coordinate permutation composed with unimodular phases: z -> (phases*z)[perm]."""

    perm: tuple[int, ...]
    phases: tuple[complex, ...]

    def __post_init__(self):
        if sorted(self.perm) != list(range(len(self.perm))):
            raise ValueError("perm is not a permutation")
        phases = np.asarray(self.phases, dtype=complex)
        if np.max(np.abs(np.abs(phases) - 1.0)) > 1e-10:
            raise ValueError("phases must be unimodular")


@dataclass(frozen=True)
class TypeIIsotropy:
    """Unitary pair acting by z -> U z V*."""

    u: np.ndarray
    v: np.ndarray

    def __post_init__(self):
        _check_unitary(self.u)
        _check_unitary(self.v)


def _check_unitary(m: np.ndarray, tol: float = 1e-10) -> np.ndarray:
    m = np.asarray(m, dtype=complex)
    dev = np.max(np.abs(np.conj(m.T) @ m - np.eye(m.shape[0])))
    if dev > tol:
        raise ValueError(f"matrix is not unitary (deviation {dev:.2e})")
    return m


def isotropy_apply(D: DomainSpec, tau, z) -> np.ndarray:
    """Apply an origin-fixing triple automorphism, batched over points."""
    z = _check_point(D, z)
    if D.kind == KIND_POLYDISC:
        if not isinstance(tau, PolydiscIsotropy):
            raise TypeError("polydisc expects PolydiscIsotropy")
        if len(tau.perm) != D.n:
            raise ShapeError("perm length does not match the domain dimension")
        phases = np.asarray(tau.phases, dtype=complex)
        return (phases * z)[..., list(tau.perm)]
    if not isinstance(tau, TypeIIsotropy):
        raise TypeError("type-I expects TypeIIsotropy")
    u = np.asarray(tau.u, dtype=complex)
    v = np.asarray(tau.v, dtype=complex)
    return as_vector(D, u @ as_matrix(D, z) @ np.conj(v.T))


def random_isotropy(D: DomainSpec, rng: np.random.Generator):
    """Draw a Haar-ish random isotropy element (QR-based unitaries for type-I)."""
    if D.kind == KIND_POLYDISC:
        perm = tuple(int(i) for i in rng.permutation(D.n))
        phases = tuple(np.exp(1j * rng.uniform(0, 2 * np.pi, D.n)))
        return PolydiscIsotropy(perm, phases)

    def haar(k: int) -> np.ndarray:
        g = rng.normal(size=(k, k)) + 1j * rng.normal(size=(k, k))
        qm, rm = np.linalg.qr(g)
        return qm * (np.diag(rm) / np.abs(np.diag(rm)))

    p, q = D.shape
    return TypeIIsotropy(haar(p), haar(q))
