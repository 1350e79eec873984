"""Volumes, the Gamma-product constant F(s), the Selberg-type integral, and the
duality equation F(mu)/F(0) = mu^n/(n+1).

F(s) is the ordered-simplex integral

    F(s) = int_{1 > l_1 > ... > l_r > 0} prod_j (1 - l_j^2)^s l_j^(2b+1)
           prod_{j<k} (l_j^2 - l_k^2)^a  dl,

evaluated in closed form through log-Gamma,

    F(s) = 1/(2^r r!) prod_{j=1}^r  G(b+1+(j-1)a/2) G(s+1+(j-1)a/2) G(ja/2+1)
                                    / (G(s+b+2+(r+j-2)a/2) G(a/2+1)).

Flat and dual volumes are Monte Carlo estimates of Lebesgue measure and of the
integral of the closed-form dual Hessian determinant.  Absolute volume
formulas carry the boundary constant int_F Theta, which is never computed;
every tested quantity is either a polydisc/rank-one case with an analytic
value or a dual/flat ratio in which the constant cancels.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.special import gammaln

from .errors import ConvergenceError, DomainError
from .hartogs import HartogsSpec
from .jtsys import KIND_POLYDISC, DomainSpec, membership, norm_self, singular_values

_CHUNK = 1 << 16


def _chunk_rng(seed: int, index: int) -> np.random.Generator:
    # keyed by (seed, chunk-index): results do not depend on worker count
    return np.random.default_rng(np.random.SeedSequence([int(seed), int(index)]))


def _chunk_sizes(samples: int):
    index = 0
    left = int(samples)
    while left > 0:
        size = min(_CHUNK, left)
        yield index, size
        index += 1
        left -= size


@dataclass(frozen=True)
class MCEstimate:
    """A Monte Carlo value with its standard error and provenance."""

    value: float
    standard_error: float
    samples: int
    seed: int


def log_capital_f(r: int, a: float, b: float, s: float) -> float:
    if s < 0:
        raise DomainError("s must be nonnegative")
    total = -r * math.log(2.0) - gammaln(r + 1)
    for j in range(1, r + 1):
        total += gammaln(b + 1 + (j - 1) * a / 2)
        total += gammaln(s + 1 + (j - 1) * a / 2)
        total += gammaln(j * a / 2 + 1)
        total -= gammaln(s + b + 2 + (r + j - 2) * a / 2)
        total -= gammaln(a / 2 + 1)
    return float(total)


def capital_f(D: DomainSpec, s: float) -> float:
    """The domain constant F(s) via log-Gamma (no raw Gamma overflow)."""
    return math.exp(log_capital_f(D.r, D.a, D.b, s))


def capital_f_ratio(D: DomainSpec, mu: float) -> float:
    """F(mu)/F(0), evaluated as a difference of log-Gamma sums."""
    return math.exp(log_capital_f(D.r, D.a, D.b, mu) - log_capital_f(D.r, D.a, D.b, 0.0))


def _gauss01(resolution: int) -> tuple[np.ndarray, np.ndarray]:
    nodes, weights = np.polynomial.legendre.leggauss(resolution)
    return 0.5 * (nodes + 1.0), 0.5 * weights


def selberg_quadrature(r: int, a: float, b: float, s: float, resolution: int = 64) -> float:
    """Tensor Gauss-Legendre value of the ordered-simplex integral F(s).

    The ordering map l_j = u_1 ... u_j (u in (0,1)^r) carries the simplex to the
    cube with Jacobian prod_i u_i^(r-i).
    """
    if r < 1 or r > 3:
        raise DomainError("supported ranks are 1..3")
    nodes, weights = _gauss01(resolution)
    grids = np.meshgrid(*([nodes] * r), indexing="ij", sparse=True)
    wgrids = np.meshgrid(*([weights] * r), indexing="ij", sparse=True)
    lam = []
    running = 1.0
    for j in range(r):
        running = running * grids[j]
        lam.append(running)
    integrand = 1.0
    for j in range(r):
        integrand = integrand * (1.0 - lam[j] ** 2) ** s * lam[j] ** (2 * b + 1)
        integrand = integrand * grids[j] ** (r - 1 - j)  # ordering-map Jacobian
        integrand = integrand * wgrids[j]
    for j in range(r):
        for k in range(j + 1, r):
            integrand = integrand * (lam[j] ** 2 - lam[k] ** 2) ** a
    return float(np.sum(integrand))


def selberg_quadrature_symmetrized(r: int, a: float, b: float, s: float,
                                   resolution: int = 64) -> float:
    """Independent scheme: integrate over the full cube and divide by r!.

    Valid for even a, where the squared-difference product is symmetric.
    """
    if a % 2 != 0:
        raise DomainError("symmetrized scheme needs even a")
    nodes, weights = _gauss01(resolution)
    grids = np.meshgrid(*([nodes] * r), indexing="ij", sparse=True)
    wgrids = np.meshgrid(*([weights] * r), indexing="ij", sparse=True)
    integrand = 1.0
    for j in range(r):
        integrand = integrand * (1.0 - grids[j] ** 2) ** s * grids[j] ** (2 * b + 1)
        integrand = integrand * wgrids[j]
    for j in range(r):
        for k in range(j + 1, r):
            integrand = integrand * (grids[j] ** 2 - grids[k] ** 2) ** a
    return float(np.sum(integrand)) / math.factorial(r)


def selberg_quadrature_auto(r: int, a: float, b: float, s: float,
                            rtol: float = 1e-8, start: int = 40,
                            max_resolution: int = 1500) -> float:
    """Double the resolution until two successive estimates agree to rtol."""
    res = start
    prev = selberg_quadrature(r, a, b, s, res)
    while 2 * res <= max_resolution:
        res *= 2
        cur = selberg_quadrature(r, a, b, s, res)
        if abs(cur - prev) <= rtol * abs(cur):
            return cur
        prev = cur
    raise ConvergenceError("quadrature resolution budget exhausted before agreement")


def flat_volume_exact(H: HartogsSpec) -> float | None:
    """Analytic Lebesgue volume of the Hartogs domain where one exists.

    Polydisc base: pi^(n+1)/(mu+1)^n.  Rank-one base (the complex hyperbolic
    ball): pi^(n+1) Gamma(mu+1)/Gamma(mu+n+1).  Other bases would need the
    boundary constant and return None.
    """
    d, mu = H.domain, H.mu
    if d.kind == KIND_POLYDISC:
        return math.pi ** (d.n + 1) / (mu + 1.0) ** d.n
    if d.r == 1:
        return math.pi ** (d.n + 1) * math.exp(gammaln(mu + 1) - gammaln(mu + d.n + 1))
    return None


def dual_flat_ratio_formula(H: HartogsSpec) -> float:
    """mu^n F(0) / ((n+1) F(mu)): the dual/flat volume ratio, boundary constant
    cancelled."""
    d = H.domain
    return H.mu ** d.n / ((d.n + 1) * capital_f_ratio(d, H.mu))


def mc_volume_flat(H: HartogsSpec, samples: int, seed: int) -> MCEstimate:
    """Lebesgue volume of M by rejection from the box [-1,1]^(2n) x {|w| <= 1},
    chunk-deterministic in (seed, chunk-index)."""
    d = H.domain
    box = 4.0 ** d.n * math.pi
    hits = []
    total = 0
    for index, size in _chunk_sizes(samples):
        rng = _chunk_rng(seed, index)
        z = rng.uniform(-1.0, 1.0, size=(size, d.n)) + 1j * rng.uniform(-1.0, 1.0, size=(size, d.n))
        w = np.sqrt(rng.uniform(size=size)) * np.exp(1j * rng.uniform(0, 2 * np.pi, size=size))
        ok = membership(d, z)
        inside = np.zeros(size, dtype=bool)
        if np.any(ok):
            inside[ok] = np.abs(w[ok]) ** 2 < norm_self(d, z[ok]) ** H.mu
        hits.append(int(np.sum(inside)))
        total += size
    p = sum(hits) / total
    return MCEstimate(box * p, box * math.sqrt(max(p * (1.0 - p), 0.0) / total),
                      total, seed)


def _dual_density(H: HartogsSpec, z: np.ndarray, w: np.ndarray) -> np.ndarray:
    # closed-form det of the dual Hessian, batched
    d = H.domain
    nd = norm_self(d, z, sign=-1)
    return (H.mu ** d.n * nd ** (H.mu * (d.n + 1) - d.genus)
            / (nd ** H.mu + np.abs(w) ** 2) ** (d.n + 2))


def mc_volume_dual(H: HartogsSpec, samples: int, seed: int) -> MCEstimate:
    """Dual volume int_{C^(n+1)} det(Hess phi*) dLeb by importance sampling.

    Each complex coordinate is drawn through rho = t/(1-t), t uniform on [0,1),
    which bounds the weighted integrand for all supported mu; aggregation is
    compensated summation over fixed chunks.
    """
    d = H.domain
    m = d.n + 1
    sums, sqsums = [], []
    total = 0
    for index, size in _chunk_sizes(samples):
        rng = _chunk_rng(seed, index)
        t = rng.uniform(size=(size, m))
        theta = rng.uniform(0, 2 * np.pi, size=(size, m))
        rho = t / (1.0 - t)
        pts = rho * np.exp(1j * theta)
        weight = np.prod(2.0 * np.pi * t / (1.0 - t) ** 3, axis=-1)
        vals = _dual_density(H, pts[:, :-1], pts[:, -1]) * weight
        sums.append(float(np.sum(vals)))
        sqsums.append(float(np.sum(vals**2)))
        total += size
    mean = math.fsum(sums) / total
    var = max(math.fsum(sqsums) / total - mean * mean, 0.0)
    return MCEstimate(mean, math.sqrt(var / total), total, seed)


def duality_gap(D: DomainSpec, mu: float) -> float:
    """g(mu) = F(mu)/F(0) - mu^n/(n+1); strictly decreasing in mu."""
    if not mu > 0:
        raise DomainError("mu must be positive")
    return capital_f_ratio(D, mu) - mu ** D.n / (D.n + 1)


def duality_root(D: DomainSpec, mu_max: float | None = None,
                 tol: float = 1e-11) -> float | None:
    """The unique positive solution of F(mu)/F(0) = mu^n/(n+1), by bisection.

    Returns None when the bracket shows no sign change.
    """
    lo = 1e-12
    hi = mu_max if mu_max is not None else (D.n + 1.0) ** (1.0 / D.n) + 1.0
    glo, ghi = duality_gap(D, lo), duality_gap(D, hi)
    if not (glo > 0 > ghi):
        return None
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if duality_gap(D, mid) > 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


class GennaioResult(NamedTuple):
    value: float
    bound: float
    passed: bool
    equality: bool
    gamma_route: float


def gennaio_check(D: DomainSpec) -> GennaioResult:
    """F(1)/F(0) = prod_j (1+(j-1)a/2)/(b+2+(r+j-2)a/2) <= 1/(n+1), equality
    exactly in rank one."""
    value = 1.0
    for j in range(1, D.r + 1):
        value *= (1 + (j - 1) * D.a / 2) / (D.b + 2 + (D.r + j - 2) * D.a / 2)
    gamma_route = capital_f_ratio(D, 1.0)
    bound = 1.0 / (D.n + 1)
    consistent = abs(value - gamma_route) <= 1e-12 * value
    passed = consistent and value <= bound * (1.0 + 1e-12)
    equality = abs(value - bound) <= 1e-12 * bound
    return GennaioResult(value, bound, passed, equality, gamma_route)


def fit_genus(D: DomainSpec, points: int = 12, seed: int = 20,
              step: float = 1e-5) -> float:
    """Fit gamma from det(Hess_z log N(z, -zbar)) = N(z, -zbar)^(-gamma).

    Averages the log-ratio over moderate random points (log N* kept away from
    zero); adjudicates the genus value numerically.
    """
    from .forms import complex_hessian_batch

    rng = np.random.default_rng(seed)
    g = rng.normal(size=(points, D.n)) + 1j * rng.normal(size=(points, D.n))
    top = singular_values(D, g)[:, 0]
    z = g * (rng.uniform(0.8, 2.0, size=points) / top)[:, None]

    def field(zz: np.ndarray) -> np.ndarray:
        return np.log(norm_self(D, zz, sign=-1))

    dets = np.linalg.det(complex_hessian_batch(field, z, step)).real
    lognd = np.log(norm_self(D, z, sign=-1))
    return float(np.mean(-np.log(dets) / lognd))
