import numpy as np
import numpy.testing as npt
import pytest
from hypothesis import given, strategies as st

from cartanhartogs import hartogs, jtsys
from cartanhartogs.errors import ConvergenceError, DomainError, ShapeError


def _hartogs(domain, mu):
    return hartogs.make_hartogs(domain, mu)


def _spectral_inverse_psi(H, target):
    """Closed-form inverse of Psi, independent of the Newton solver.

    With xi the spectral values of the z-part and omega the fiber part,
    t_j = xi_j^2 / (mu (1 + |omega|^2)) gives lambda_j^2 = t_j / (1 + t_j) and
    w = omega N^(mu/2) / sqrt(1 + |omega|^2).
    """
    d = H.domain
    vec = np.asarray(target, dtype=complex)
    zeta, omega = vec[:-1], vec[-1]
    dec = jtsys.spectral_decompose(d, zeta)
    t = dec.eigenvalues**2 / (H.mu * (1.0 + abs(omega) ** 2))
    lam = np.sqrt(t / (1.0 + t))
    z = np.tensordot(lam, dec.tripotents, axes=(0, 0))
    nmu = jtsys.norm_self(d, z) ** H.mu
    w = omega * np.sqrt(nmu) / np.sqrt(1.0 + abs(omega) ** 2)
    return np.concatenate([z, [w]])


def _spectral_inverse_phi(H, target):
    """Closed-form inverse of Phi: s_j = xi_j^2 / (mu (1 - |omega|^2)),
    lambda_j^2 = s_j / (1 - s_j), w = omega Nd^(mu/2) / sqrt(1 - |omega|^2)."""
    d = H.domain
    vec = np.asarray(target, dtype=complex)
    zeta, omega = vec[:-1], vec[-1]
    dec = jtsys.spectral_decompose(d, zeta)
    s = dec.eigenvalues**2 / (H.mu * (1.0 - abs(omega) ** 2))
    lam = np.sqrt(s / (1.0 - s))
    z = np.tensordot(lam, dec.tripotents, axes=(0, 0))
    nd = jtsys.norm_self(d, z, sign=-1) ** H.mu
    w = omega * np.sqrt(nd) / np.sqrt(1.0 - abs(omega) ** 2)
    return np.concatenate([z, [w]])


def test_make_hartogs_validates_mu():
    d = jtsys.make_domain(jtsys.KIND_POLYDISC, n=1)
    with pytest.raises(DomainError):
        hartogs.make_hartogs(d, 0.0)
    with pytest.raises(DomainError):
        hartogs.make_hartogs(d, -1.0)


def test_potential_oracle():
    H = _hartogs(jtsys.make_domain(jtsys.KIND_POLYDISC, n=1), 1.0)
    p = hartogs.HartogsPoint(np.array([0.6]), 0.3)
    assert hartogs.potential(H, p) == pytest.approx(-np.log(1 - 0.36 - 0.09))
    assert hartogs.dual_potential(H, p) == pytest.approx(np.log(1 + 0.36 + 0.09))

    H2 = _hartogs(jtsys.make_domain(jtsys.KIND_POLYDISC, n=1), 2.0)
    assert hartogs.potential(H2, p) == pytest.approx(-np.log(0.64**2 - 0.09))


def test_potential_rejects_non_member():
    H = _hartogs(jtsys.make_domain(jtsys.KIND_POLYDISC, n=1), 1.0)
    with pytest.raises(DomainError):
        hartogs.potential(H, hartogs.HartogsPoint(np.array([0.8]), 0.7))


def test_membership_boundary():
    H = _hartogs(jtsys.make_domain(jtsys.KIND_POLYDISC, n=2), 0.5)
    assert hartogs.ch_member(H, hartogs.HartogsPoint(np.array([0.5, 0.5]), 0.5))
    # |w|^2 = N^mu exactly (here 1 = 1) is outside: the inequality is strict
    assert not hartogs.ch_member(H, hartogs.HartogsPoint(np.zeros(2), 1.0))
    assert not hartogs.ch_member(H, hartogs.HartogsPoint(np.array([1.0, 0.0]), 0.0))


def test_scalar_api_accepts_raw_vectors():
    H = _hartogs(jtsys.make_domain(jtsys.KIND_POLYDISC, n=1), 1.0)
    p = hartogs.HartogsPoint(np.array([0.6]), 0.3)
    vec = p.as_vector()
    assert hartogs.ch_member(H, vec)
    assert hartogs.potential(H, vec) == hartogs.potential(H, p)
    assert hartogs.dual_potential(H, vec) == hartogs.dual_potential(H, p)
    np.testing.assert_allclose(hartogs.psi_map(H, vec).as_vector(),
                               hartogs.psi_map(H, p).as_vector())
    np.testing.assert_allclose(hartogs.phi_map(H, vec).as_vector(),
                               hartogs.phi_map(H, p).as_vector())
    with pytest.raises(ShapeError):
        hartogs.as_point(H, np.array([0.1, 0.2, 0.3]))


def test_psi_rank_one_oracle():
    # mu = 1, z = 0.6, w = 0: Psi = (0.6 / (1 - 0.36), 0) = (0.75, 0)
    H = _hartogs(jtsys.make_domain(jtsys.KIND_POLYDISC, n=1), 1.0)
    out = hartogs.psi_map(H, hartogs.HartogsPoint(np.array([0.6]), 0.0))
    npt.assert_allclose(out.as_vector(), [0.75, 0.0], atol=1e-14)


def test_psi_scalar_formula_oracle():
    # mu = 2, z = 0.6, w = 0.3: direct evaluation of the defining formula
    H = _hartogs(jtsys.make_domain(jtsys.KIND_POLYDISC, n=1), 2.0)
    nmu = 0.64**2
    g = nmu - 0.09
    zeta = np.sqrt(2 * nmu) * 0.6 / np.sqrt(1 - 0.36) / np.sqrt(g)
    omega = 0.3 / np.sqrt(g)
    out = hartogs.psi_map(H, hartogs.HartogsPoint(np.array([0.6]), 0.3))
    npt.assert_allclose(out.as_vector(), [zeta, omega], rtol=1e-14)


def test_phi_rank_one_oracle():
    # mu = 1, z = 1 (outside Omega is fine for Phi), w = 0:
    # Nd = 1 + 1 = 2, Phi_z = sqrt(2) * 1 / sqrt(2) / sqrt(2) = 1/sqrt(2)
    H = _hartogs(jtsys.make_domain(jtsys.KIND_POLYDISC, n=1), 1.0)
    out = hartogs.phi_map(H, hartogs.HartogsPoint(np.array([1.0]), 0.0))
    npt.assert_allclose(out.as_vector(), [1 / np.sqrt(2), 0.0], rtol=1e-14)


def test_psi_matches_spectral_inverse(domain, rng):
    for mu in (0.5, 2.0):
        H = _hartogs(domain, mu)
        pts = hartogs.sample_member_points(H, 20, rng, lam_max=0.8, w_frac=0.8)
        images = hartogs.psi_map_vec(H, pts)
        for row, image in zip(pts, images):
            back = _spectral_inverse_psi(H, image)
            npt.assert_allclose(back, row, atol=1e-10)


def test_phi_matches_spectral_inverse(domain, rng):
    for mu in (0.5, 2.0):
        H = _hartogs(domain, mu)
        pts = hartogs.sample_member_points(H, 20, rng, lam_max=0.8, w_frac=0.8)
        images = hartogs.phi_map_vec(H, pts)
        for row, image in zip(pts, images):
            back = _spectral_inverse_phi(H, image)
            npt.assert_allclose(back, row, atol=1e-10)


def test_newton_inverses_round_trip(domain, rng):
    H = _hartogs(domain, 1.5)
    pts = hartogs.sample_member_points(H, 8, rng, lam_max=0.75, w_frac=0.7)
    for row in pts:
        p = hartogs.point_from_vector(row)
        back = hartogs.psi_inverse(H, hartogs.psi_map(H, p))
        npt.assert_allclose(back.as_vector(), row, atol=1e-9)
        back = hartogs.phi_inverse(H, hartogs.phi_map(H, p))
        npt.assert_allclose(back.as_vector(), row, atol=1e-9)


def test_psi_is_onto_far_targets(rng):
    # targets far outside the domain still have preimages
    H = _hartogs(jtsys.make_domain(jtsys.KIND_TYPE_I, p=2, q=2), 1.0)
    targets = hartogs.sample_heavy_points(5, 6, rng, norm_cap=10.0)
    for t in targets:
        p = hartogs.psi_inverse(H, t)
        assert hartogs.ch_member(H, p)
        npt.assert_allclose(hartogs.psi_map(H, p).as_vector(), t, atol=1e-8)


def test_phi_inverse_rejects_outside_image():
    H = _hartogs(jtsys.make_domain(jtsys.KIND_POLYDISC, n=1), 1.0)
    with pytest.raises(DomainError):
        hartogs.phi_inverse(H, np.array([1.1, 0.0]))  # xi^2 >= mu
    with pytest.raises(DomainError):
        hartogs.phi_inverse(H, np.array([0.5, 1.0]))  # |omega| >= 1
    with pytest.raises(DomainError):
        # inside the naive box but outside the image: xi^2 >= mu (1 - |omega|^2)
        hartogs.phi_inverse(H, np.array([0.97, 0.3]))


def test_phi_inverse_reaches_unbounded_preimages():
    # Phi is defined on all of C^(n+1); near-extreme targets pull back to
    # z far outside the bounded domain
    H = _hartogs(jtsys.make_domain(jtsys.KIND_POLYDISC, n=1), 1.0)
    target = np.array([0.9, 0.3])  # s = 0.81/0.91, lambda^2 = s/(1-s) = 8.1
    pre = hartogs.phi_inverse(H, target)
    npt.assert_allclose(np.abs(pre.z[0]) ** 2, 8.1, rtol=1e-8)
    npt.assert_allclose(hartogs.phi_map(H, pre).as_vector(), target, atol=1e-9)


def test_phi_image_spectral_bound(domain, rng):
    H = _hartogs(domain, 0.5)
    pts = hartogs.sample_member_points(H, 40, rng, lam_max=0.9, w_frac=0.9)
    images = hartogs.phi_map_vec(H, pts)
    xi = jtsys.singular_values(domain, images[:, :-1])
    assert np.all(xi**2 < H.mu)
    assert np.all(np.abs(images[:, -1]) < 1.0)


def test_embeddings_preserve_norm(rng):
    emb = hartogs.polydisc_to_type1(2, 3)
    z = 0.7 * (rng.normal(size=(6, 2)) + 1j * rng.normal(size=(6, 2)))
    fz = hartogs.embed_base(emb, z)
    for sign in (1, -1):
        npt.assert_allclose(jtsys.norm_self(emb.target, fz, sign=sign),
                            jtsys.norm_self(emb.source, z, sign=sign))

    inc = hartogs.polydisc_inclusion(1, 3)
    z = np.array([[0.5 + 0.1j]])
    npt.assert_allclose(jtsys.norm_self(inc.target, hartogs.embed_base(inc, z)),
                        jtsys.norm_self(inc.source, z))


def test_hereditary_lift(rng):
    emb = hartogs.polydisc_to_type1(2, 2)
    Hs = _hartogs(emb.source, 1.5)
    Ht = _hartogs(emb.target, 1.5)
    pts = hartogs.sample_member_points(Hs, 10, rng, lam_max=0.7)
    for row in pts:
        p = hartogs.point_from_vector(row)
        big = hartogs.psi_map(Ht, hartogs.lift_embedding(emb, p))
        small = hartogs.lift_embedding(emb, hartogs.psi_map(Hs, p))
        npt.assert_allclose(big.as_vector(), small.as_vector(), atol=1e-12)


def test_rank_one_specializes_to_ball_map(rng):
    for n in (1, 2):
        H = _hartogs(jtsys.hyperbolic_space(n), 1.0)
        pts = hartogs.sample_ball_points(n + 1, 50, rng, 0.95)
        npt.assert_allclose(hartogs.psi_map_vec(H, pts),
                            hartogs.unit_ball_darboux(pts), atol=1e-12)


def test_isotropy_equivariance(domain, rng):
    H = _hartogs(domain, 2.0)
    pts = hartogs.sample_member_points(H, 10, rng, lam_max=0.8)
    for row in pts:
        tau = jtsys.random_isotropy(domain, rng)
        p = hartogs.point_from_vector(row)
        moved = hartogs.hartogs_isotropy_apply(H, tau, p)
        for mapping in (hartogs.psi_map, hartogs.phi_map):
            lhs = mapping(H, moved).as_vector()
            rhs = hartogs.hartogs_isotropy_apply(H, tau, mapping(H, p)).as_vector()
            npt.assert_allclose(lhs, rhs, atol=1e-12)


def test_sample_member_points_respects_floor(domain, rng):
    H = _hartogs(domain, 0.5)
    pts = hartogs.sample_member_points(H, 200, rng)
    gap = hartogs.fiber_gap_vec(H, pts)
    assert np.all(gap >= 1e-3)
    lam = jtsys.singular_values(domain, pts[:, :-1])
    assert np.all(lam <= 0.55 + 1e-12)


def test_sample_member_points_full_covers(rng):
    H = _hartogs(jtsys.make_domain(jtsys.KIND_POLYDISC, n=1), 1.0)
    pts = hartogs.sample_member_points_full(H, 4000, rng)
    assert np.all(hartogs.ch_member_vec(H, pts))
    # near-boundary points do occur
    assert np.min(hartogs.fiber_gap_vec(H, pts)) < 5e-3
    assert np.max(np.abs(pts[:, 0])) > 0.95


def test_sample_heavy_points_cap(rng):
    pts = hartogs.sample_heavy_points(3, 500, rng, norm_cap=10.0)
    norms = np.linalg.norm(pts, axis=-1)
    assert np.all(norms <= 10.0 + 1e-12)
    assert np.max(norms) > 5.0


def test_sample_ball_points_radius(rng):
    pts = hartogs.sample_ball_points(2, 300, rng, 0.9)
    assert np.all(np.linalg.norm(pts, axis=-1) <= 0.9 + 1e-12)


@given(st.floats(min_value=0.05, max_value=0.9),
       st.floats(min_value=0.25, max_value=4.0))
def test_rank_one_spectral_round_trip(lam, mu):
    # scalar route: Psi followed by the closed-form inverse recovers lambda
    nmu = (1 - lam**2) ** mu
    g = nmu  # w = 0
    xi = np.sqrt(mu * nmu) * lam / (1 - lam**2) ** 0.5 / np.sqrt(g)
    t = xi**2 / mu
    lam_back = np.sqrt(t / (1 + t))
    npt.assert_allclose(lam_back, lam, rtol=1e-9)
