import numpy as np
import numpy.testing as npt
import pytest
from hypothesis import given, strategies as st

from cartanhartogs import capacity, hartogs, jtsys
from cartanhartogs.errors import DomainError

POLY1 = jtsys.make_domain(jtsys.KIND_POLYDISC, n=1)
POLY2 = jtsys.make_domain(jtsys.KIND_POLYDISC, n=2)
T22 = jtsys.make_domain(jtsys.KIND_TYPE_I, p=2, q=2)


def test_unit_ball_inequality_oracles():
    assert capacity.unit_ball_inequality(np.zeros(2)) == pytest.approx(1.0)
    assert capacity.unit_ball_inequality(np.array([1.0])) == pytest.approx(1.0)
    # interior values exceed 1 strictly
    assert capacity.unit_ball_inequality(np.array([0.5, 0.5])) > 1.0


@given(st.lists(st.floats(min_value=0.0, max_value=1.0), min_size=1, max_size=4))
def test_unit_ball_inequality_holds(lams):
    assert capacity.unit_ball_inequality(np.array(lams)) >= 1.0 - 1e-12


def test_ball_in_hartogs():
    H = hartogs.make_hartogs(POLY1, 1.0)
    ok = capacity.ball_in_hartogs(H, 0.999, 20_000, seed=5)
    assert ok.passed and not ok.failures
    # radius beyond 1 must produce witnesses outside the domain
    bad = capacity.ball_in_hartogs(H, 1.3, 20_000, seed=5)
    assert not bad.passed and bad.failures


def test_ball_in_hartogs_rank_two():
    # for r > 1 the inclusion still holds at radius 1 - eps when mu <= 1
    H = hartogs.make_hartogs(T22, 0.5)
    ok = capacity.ball_in_hartogs(H, 0.999, 20_000, seed=5)
    assert ok.passed


def test_hartogs_in_cylinder():
    H = hartogs.make_hartogs(POLY1, 1.0)
    ok = capacity.hartogs_in_cylinder(H, 1.0, 20_000, seed=6)
    assert ok.passed
    bad = capacity.hartogs_in_cylinder(H, 0.5, 20_000, seed=6)
    assert not bad.passed


def test_dual_image_bounds():
    for mu in (4.0, 0.25):
        H = hartogs.make_hartogs(POLY1, mu)
        ok = capacity.dual_image_bounds(H, 50_000, seed=8)
        assert ok.passed, ok.failures[:2]


def test_solve_target_system_oracle():
    # mu = 1, delta = 0, x^2 = 1/4: lambda^2 = (1/4) / (1 - 1/4) = 1/3
    H = hartogs.make_hartogs(POLY1, 1.0)
    sol = capacity.solve_target_system(H, 0.5, 0.0, np.array([0.5]))
    npt.assert_allclose(np.abs(sol.z[0]) ** 2, 1.0 / 3.0, rtol=1e-12)
    assert sol.w == 0.0
    # forward map hits the requested spectral targets
    img = hartogs.phi_map(H, sol).as_vector()
    xi, delta = capacity.spectral_coords(H, img)
    npt.assert_allclose(xi, [0.5], atol=1e-12)
    npt.assert_allclose(delta, 0.0, atol=1e-12)


def test_solve_target_system_with_fiber():
    H = hartogs.make_hartogs(T22, 4.0)
    c, delta = 0.9, 0.4
    x = np.sqrt((c**2 - delta**2) * np.array([0.7, 0.3]))
    sol = capacity.solve_target_system(H, c, delta, x)
    img = hartogs.phi_map(H, sol).as_vector()
    xi, dv = capacity.spectral_coords(H, img)
    npt.assert_allclose(np.sort(xi)[::-1], np.sort(x)[::-1], atol=1e-10)
    npt.assert_allclose(dv, delta, atol=1e-10)


def test_solve_target_system_validation():
    H = hartogs.make_hartogs(POLY1, 1.0)
    with pytest.raises(DomainError):
        # c^2 must stay below min(1, mu)
        capacity.solve_target_system(H, 1.01, 0.0, np.array([1.01]))
    with pytest.raises(DomainError):
        # budget mismatch: sum x^2 + delta^2 != c^2
        capacity.solve_target_system(H, 0.5, 0.0, np.array([0.4]))
    with pytest.raises(DomainError):
        # more slots than the rank allows
        capacity.solve_target_system(H, 0.5, 0.0,
                                     np.array([0.3, 0.4]))
    H4 = hartogs.make_hartogs(POLY1, 4.0)
    with pytest.raises(DomainError):
        # x exceeds the feasibility bound x^2 < mu (1 - delta^2)
        capacity.solve_target_system(H4, 1.9, 0.3,
                                     np.array([np.sqrt(1.9**2 - 0.09)]))


def test_capacity_certificate_flat():
    H = hartogs.make_hartogs(POLY1, 0.5)
    cert = capacity.capacity_certificate(H, "flat-hartogs", samples=20_000)
    npt.assert_allclose(cert.lower, np.pi * (1 - 1e-3) ** 2)
    npt.assert_allclose(cert.upper, np.pi)
    assert not cert.failures
    with pytest.raises(DomainError):
        capacity.capacity_certificate(hartogs.make_hartogs(POLY1, 2.0),
                                      "flat-hartogs")


def test_capacity_certificate_dual_large_mu():
    H = hartogs.make_hartogs(POLY1, 4.0)
    cert = capacity.capacity_certificate(H, "dual", samples=20_000)
    assert cert.r_in >= 1.0 - 1e-3
    npt.assert_allclose(cert.upper, np.pi)
    assert not cert.failures
    assert cert.notes == ()


def test_capacity_certificate_dual_small_mu():
    H = hartogs.make_hartogs(POLY1, 0.25)
    cert = capacity.capacity_certificate(H, "dual", samples=20_000)
    assert cert.r_in >= 0.5 - 1e-3
    npt.assert_allclose(cert.upper, np.pi * 0.25)
    assert not cert.failures
    # the headline constant mismatch is reported, never asserted
    assert cert.notes and "reported" in cert.notes[0]


def test_capacity_certificate_unknown_side():
    with pytest.raises(DomainError):
        capacity.capacity_certificate(hartogs.make_hartogs(POLY1, 1.0), "nosuch")


def test_dual_certificate_higher_rank():
    H = hartogs.make_hartogs(T22, 2.0)
    cert = capacity.capacity_certificate(H, "dual", samples=10_000)
    assert cert.r_in >= 1.0 - 1e-3
    assert not cert.failures
