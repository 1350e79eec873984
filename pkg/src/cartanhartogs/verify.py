"""Verification battery behind the CLI.

Each check samples points, measures a worst residual against a tolerance, and
returns dictionaries ready for the JSON report.  Residual-style checks
(darboux, dual-darboux, det-formula) honor the configured fd step and
tolerance; structural checks carry their own tolerances (documented per
function).
"""

from __future__ import annotations

import time

import numpy as np

from . import capacity, forms, hartogs, jtsys, measures
from .realcoords import realify_map, to_complex, to_real

DEFAULT_GRID_MU = (0.5, 1.0, 2.0)


def _result(name: str, params: dict, worst: float, tol: float,
            witnesses: list | None = None, started: float | None = None) -> dict:
    return {
        "name": name,
        "parameters": params,
        "status": "pass" if worst <= tol else "fail",
        "worst_residual": float(worst),
        "tolerance": float(tol),
        "witnesses": witnesses or [],
        "wall_time_s": 0.0 if started is None else round(time.perf_counter() - started, 3),
    }


def darboux_residuals(H: hartogs.HartogsSpec, pts: np.ndarray, step: float,
                      dual: bool = False) -> np.ndarray:
    """Entrywise gap between the pulled-back flat form and the domain (or dual)
    form at each packed point."""
    m = H.domain.n + 1
    mapping = hartogs.phi_map_vec if dual else hartogs.psi_map_vec
    field = hartogs.dual_potential_field(H) if dual else hartogs.potential_field(H)
    map_r = realify_map(lambda c: mapping(H, c))
    flat = forms.standard_symplectic(m).matrix
    pulled = forms.pullback_batch(map_r, to_real(pts), flat, step)
    target = forms.hermitian_to_twoform_matrix(forms.complex_hessian_batch(field, pts, step))
    return np.max(np.abs(pulled - target), axis=(-2, -1))


def _witness(pts: np.ndarray, residuals: np.ndarray, tol: float) -> list:
    bad = np.argsort(-residuals)[:4]
    return [{"point": _pack(pts[i]), "residual": float(residuals[i])}
            for i in bad if residuals[i] > tol]


def _pack(vec: np.ndarray) -> list:
    return [[float(c.real), float(c.imag)] for c in np.asarray(vec, dtype=complex)]


def check_darboux(cfg) -> list[dict]:
    out = []
    for mu in cfg.mu:
        started = time.perf_counter()
        H = hartogs.make_hartogs(cfg.domain_spec, mu)
        rng = np.random.default_rng(cfg.seed)
        pts = hartogs.sample_member_points(H, cfg.points, rng)
        res = darboux_residuals(H, pts, cfg.fd_step)
        out.append(_result("darboux", {"mu": mu, "points": cfg.points,
                                       "fd_step": cfg.fd_step, "operation": "pullback"},
                           float(np.max(res)), cfg.tol,
                           _witness(pts, res, cfg.tol), started))
    return out


def check_dual_darboux(cfg) -> list[dict]:
    out = []
    for mu in cfg.mu:
        started = time.perf_counter()
        H = hartogs.make_hartogs(cfg.domain_spec, mu)
        rng = np.random.default_rng(cfg.seed + 1)
        pts = hartogs.sample_heavy_points(H.domain.n + 1, cfg.points, rng)
        res = darboux_residuals(H, pts, cfg.fd_step, dual=True)
        out.append(_result("dual-darboux", {"mu": mu, "points": cfg.points,
                                            "fd_step": cfg.fd_step, "operation": "pullback"},
                           float(np.max(res)), cfg.tol,
                           _witness(pts, res, cfg.tol), started))
    return out


def check_psh(cfg) -> list[dict]:
    """Strict plurisubharmonicity: smallest dual Hessian eigenvalue must stay
    positive (tolerance 0 on its negative part)."""
    out = []
    for mu in cfg.mu:
        started = time.perf_counter()
        H = hartogs.make_hartogs(cfg.domain_spec, mu)
        rng = np.random.default_rng(cfg.seed + 2)
        pts = hartogs.sample_ball_points(H.domain.n + 1, cfg.points, rng, 10.0)
        eigs = forms.dual_hessian_min_eigs(H, pts)
        worst = float(np.max(-eigs))
        out.append(_result("psh", {"mu": mu, "points": cfg.points,
                                   "operation": "is_positive_definite"},
                           worst, 0.0, _witness(pts, -eigs, 0.0), started))
    return out


def check_det_formula(cfg) -> list[dict]:
    """Closed-form dual Hessian determinant vs the finite-difference value,
    relative; plus the genus fit against the domain invariant."""
    out = []
    det_step = 1e-4  # balances rounding against truncation for determinants
    for mu in cfg.mu:
        started = time.perf_counter()
        H = hartogs.make_hartogs(cfg.domain_spec, mu)
        rng = np.random.default_rng(cfg.seed + 3)
        npts = max(10, cfg.points // 4)
        pts = 0.7 * (rng.normal(size=(npts, H.domain.n + 1))
                     + 1j * rng.normal(size=(npts, H.domain.n + 1)))
        closed = np.array([forms.det_dual_hessian(H, hartogs.point_from_vector(row))
                           for row in pts])
        fd = np.array([forms.det_dual_hessian_fd(H, hartogs.point_from_vector(row), det_step)
                       for row in pts])
        rel = np.abs(fd - closed) / np.abs(closed)
        out.append(_result("det-formula", {"mu": mu, "points": npts,
                                           "fd_step": det_step,
                                           "operation": "det_dual_hessian"},
                           float(np.max(rel)), cfg.tol,
                           _witness(pts, rel, cfg.tol), started))
    started = time.perf_counter()
    fitted = measures.fit_genus(cfg.domain_spec)
    out.append(_result("det-formula", {"operation": "fit_genus", "fitted": fitted},
                       abs(fitted - cfg.domain_spec.genus), 1e-3, None, started))
    return out


def check_volume(cfg) -> list[dict]:
    """Flat volume against the analytic value (when one exists) and the
    dual/flat ratio against the Gamma-product formula, both as z-scores."""
    out = []
    for mu in cfg.mu:
        H = hartogs.make_hartogs(cfg.domain_spec, mu)
        started = time.perf_counter()
        flat = measures.mc_volume_flat(H, cfg.samples, cfg.seed)
        exact = measures.flat_volume_exact(H)
        if exact is not None:
            z = abs(flat.value - exact) / flat.standard_error
            out.append(_result("volume", {"mu": mu, "samples": cfg.samples,
                                          "estimate": flat.value, "exact": exact,
                                          "operation": "mc_volume_flat"},
                               z, 3.0, None, started))
        started = time.perf_counter()
        dual = measures.mc_volume_dual(H, cfg.samples, cfg.seed + 1)
        ratio = dual.value / flat.value
        se = ratio * np.hypot(dual.standard_error / dual.value,
                              flat.standard_error / flat.value)
        want = measures.dual_flat_ratio_formula(H)
        out.append(_result("volume", {"mu": mu, "samples": cfg.samples,
                                      "ratio": ratio, "formula": want,
                                      "operation": "mc_volume_dual"},
                           abs(ratio - want) / se, 3.0, None, started))
    return out


def check_selberg(cfg) -> list[dict]:
    """Quadrature vs the Gamma product, relative error; tolerance 1e-6 in rank
    one and 1e-3 otherwise."""
    d = cfg.domain_spec
    tol = 1e-6 if d.r == 1 else 1e-3
    out = []
    for s in (0.0, 1.0, 2.5):
        started = time.perf_counter()
        quad = measures.selberg_quadrature_auto(d.r, d.a, d.b, s, rtol=tol / 10)
        closed = measures.capital_f(d, s)
        rel = abs(quad - closed) / closed
        out.append(_result("selberg", {"s": s, "r": d.r, "a": d.a, "b": d.b,
                                       "operation": "selberg_quadrature"},
                           rel, tol, None, started))
    return out


def check_duality(cfg) -> list[dict]:
    """Root of the duality equation: exactly 1 in rank one, inside (0,1)
    otherwise; plus the rank-one equality case of the product bound."""
    d = cfg.domain_spec
    started = time.perf_counter()
    root = measures.duality_root(d)
    if root is None:
        res = _result("duality", {"operation": "duality_root", "root": None},
                      np.inf, 1e-9, None, started)
    elif d.r == 1:
        res = _result("duality", {"operation": "duality_root", "root": root},
                      abs(root - 1.0), 1e-9, None, started)
    else:
        ok = 0.0 < root < 1.0
        res = _result("duality", {"operation": "duality_root", "root": root},
                      0.0 if ok else 1.0, 0.5, None, started)
    started = time.perf_counter()
    gen = measures.gennaio_check(d)
    want_equality = d.r == 1
    ok = gen.passed and gen.equality == want_equality
    return [res, _result("duality", {"operation": "gennaio_check",
                                     "value": gen.value, "bound": gen.bound,
                                     "equality": gen.equality},
                         0.0 if ok else 1.0, 0.5, None, started)]


def check_capacity(cfg) -> list[dict]:
    out = []
    for mu in cfg.mu:
        H = hartogs.make_hartogs(cfg.domain_spec, mu)
        if mu <= 1.0:
            started = time.perf_counter()
            cert = capacity.capacity_certificate(H, "flat-hartogs", cfg.samples // 4,
                                                 cfg.seed + 5)
            out.append(_result("capacity", {"mu": mu, "side": "flat-hartogs",
                                            "interval": [cert.lower, cert.upper],
                                            "operation": "capacity_certificate"},
                               float(len(cert.failures)), 0.0,
                               cert.failures[:4], started))
        started = time.perf_counter()
        cert = capacity.capacity_certificate(H, "dual", cfg.samples // 4, cfg.seed + 6)
        out.append(_result("capacity", {"mu": mu, "side": "dual",
                                        "interval": [cert.lower, cert.upper],
                                        "notes": list(cert.notes),
                                        "operation": "capacity_certificate"},
                           float(len(cert.failures)), 0.0,
                           cert.failures[:4], started))
    return out


def check_equivariance(cfg) -> list[dict]:
    """Isotropy equivariance of both maps, hereditary behavior under norm
    preserving embeddings, inverse round trips, and the rank-one ball
    specialization."""
    d = cfg.domain_spec
    out = []
    for mu in cfg.mu:
        H = hartogs.make_hartogs(d, mu)
        rng = np.random.default_rng(cfg.seed + 7)
        started = time.perf_counter()
        pts = hartogs.sample_member_points(H, max(8, cfg.points // 4), rng, lam_max=0.8)
        worst = 0.0
        for row in pts:
            tau = jtsys.random_isotropy(d, rng)
            p = hartogs.point_from_vector(row)
            moved = hartogs.hartogs_isotropy_apply(H, tau, p)
            lhs = hartogs.psi_map(H, moved).as_vector()
            rhs = hartogs.hartogs_isotropy_apply(H, tau, hartogs.psi_map(H, p)).as_vector()
            worst = max(worst, float(np.max(np.abs(lhs - rhs))))
            lhs = hartogs.phi_map(H, moved).as_vector()
            rhs = hartogs.hartogs_isotropy_apply(H, tau, hartogs.phi_map(H, p)).as_vector()
            worst = max(worst, float(np.max(np.abs(lhs - rhs))))
        out.append(_result("equivariance", {"mu": mu, "pairs": len(pts),
                                            "operation": "hartogs_isotropy_apply"},
                           worst, 1e-10, None, started))

        started = time.perf_counter()
        emb = (hartogs.polydisc_to_type1(*d.shape) if d.kind == jtsys.KIND_TYPE_I
               else hartogs.polydisc_inclusion(max(1, d.n - 1), d.n))
        Hs = hartogs.make_hartogs(emb.source, mu)
        small = hartogs.sample_member_points(Hs, 16, rng, lam_max=0.7)
        worst = 0.0
        for row in small:
            p = hartogs.point_from_vector(row)
            lifted = hartogs.lift_embedding(emb, p)
            big = hartogs.psi_map(H, lifted)
            little = hartogs.psi_map(Hs, p)
            expect = hartogs.lift_embedding(emb, little)
            worst = max(worst, float(np.max(np.abs(big.as_vector() - expect.as_vector()))))
        out.append(_result("equivariance", {"mu": mu, "operation": "lift_embedding"},
                           worst, 1e-10, None, started))

        started = time.perf_counter()
        some = hartogs.sample_member_points(H, 6, rng, lam_max=0.75)
        worst = 0.0
        for row in some:
            p = hartogs.point_from_vector(row)
            back = hartogs.psi_inverse(H, hartogs.psi_map(H, p))
            worst = max(worst, float(np.max(np.abs(back.as_vector() - row))))
            back = hartogs.phi_inverse(H, hartogs.phi_map(H, p))
            worst = max(worst, float(np.max(np.abs(back.as_vector() - row))))
        out.append(_result("equivariance", {"mu": mu, "operation": "psi_inverse"},
                           worst, 1e-8, None, started))

    if d.r == 1:
        started = time.perf_counter()
        Hb = hartogs.make_hartogs(d, 1.0)
        rng = np.random.default_rng(cfg.seed + 8)
        pts = hartogs.sample_ball_points(d.n + 1, 64, rng, 0.9)
        gap = np.max(np.abs(hartogs.psi_map_vec(Hb, pts) - hartogs.unit_ball_darboux(pts)))
        out.append(_result("equivariance", {"operation": "psi_map",
                                            "case": "rank-one ball specialization"},
                           float(gap), 1e-12, None, started))
    return out


CHECKS = {
    "darboux": check_darboux,
    "dual-darboux": check_dual_darboux,
    "psh": check_psh,
    "det-formula": check_det_formula,
    "volume": check_volume,
    "selberg": check_selberg,
    "duality": check_duality,
    "capacity": check_capacity,
    "equivariance": check_equivariance,
}
