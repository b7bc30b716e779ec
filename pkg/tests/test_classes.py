import numpy as np
import pytest

from salagean.classes import (
    AtomMeasure,
    ClassParams,
    Constant,
    Monomial,
    NormalizedPolynomial,
    bernardi_transform,
    caratheodory_from_atoms,
    check_membership,
    koebe,
    member_from_caratheodory,
    member_from_schwarz,
    member_from_spec,
    rotated_koebe,
    schwarz_to_s,
    spec_from_dict,
)
from salagean.errors import BadMeasure, DomainError, InversionDivergence
from salagean.series import NormalizedFunction, TruncatedSeries, eval_series, salagean_normalized
from salagean.bounds import bound_a2


@pytest.mark.parametrize("kwargs", [dict(alpha=0, beta=0, n=0), dict(alpha=1, beta=1, n=0), dict(alpha=1, beta=-0.1, n=0), dict(alpha=1, beta=0, n=-1), dict(alpha=1, beta=0, n=1.5)])
def test_class_params_validation(kwargs):
    with pytest.raises(DomainError):
        ClassParams(**kwargs)


def test_zero_schwarz_gives_identity():
    f = member_from_schwarz(Constant(0), ClassParams(1.3, 0.4, 2), 12)
    np.testing.assert_array_equal(f.coeffs, np.r_[0, 1, np.zeros(11)])


@pytest.mark.parametrize("beta", [0.0, 0.3, 0.75])
def test_minus_one_schwarz_n0_alpha1(beta):
    # S = (2b - 1) + 2(1 - b)/(1 - z) so f/z = 1 + 2(1 - b)(z + z^2 + ...)
    p = ClassParams(1, beta, 0)
    f = member_from_schwarz(Constant(-1), p, 16)
    np.testing.assert_allclose(f.coeffs[2:], 2 * (1 - beta), atol=1e-14)
    assert abs(f.a(2)) == pytest.approx(bound_a2(p), abs=1e-14)


def test_extremal_beta0_is_not_koebe():
    # z(1 + z)/(1 - z) shares a2 = 2 with Koebe but not the later coefficients
    f = member_from_schwarz(Constant(-1), ClassParams(1, 0, 0), 10)
    k = koebe(10)
    assert f.a(2) == pytest.approx(k.a(2))
    np.testing.assert_allclose(f.coeffs[2:], 2.0)
    # Re 1/(1 - z)^2 goes negative near z = 1, so Koebe itself is not a member
    assert check_membership(koebe(400), ClassParams(1, 0, 0)).verdict == "violation"


def test_caratheodory_half_plane_atom():
    p = caratheodory_from_atoms([1.0], [0.0], 10)
    np.testing.assert_allclose(p.coeffs, np.r_[1, 2 * np.ones(10)])


def test_caratheodory_two_atoms():
    p = caratheodory_from_atoms([0.5, 0.5], [0.0, np.pi], 3)
    np.testing.assert_allclose(p.coeffs, [1, 0, 2, 0], atol=1e-15)


def test_caratheodory_coefficients_bounded(rng):
    for _ in range(50):
        m = rng.integers(1, 8)
        w = rng.dirichlet(np.ones(m))
        w[-1] = 1 - np.sum(w[:-1])
        p = caratheodory_from_atoms(w, rng.uniform(0, 2 * np.pi, m), 400)
        assert np.abs(p.coeffs[1:]).max() <= 2 + 1e-12
        z = np.outer([0.3, 0.6, 0.9], np.exp(2j * np.pi * np.arange(256) / 256))
        assert eval_series(p, z).real.min() > -1e-9


@pytest.mark.parametrize("weights", [[0.5, 0.4], [1.2, -0.2], []])
def test_bad_measure(weights):
    with pytest.raises(BadMeasure):
        caratheodory_from_atoms(weights, [0.0] * len(weights), 4)


def test_caratheodory_identity_and_half_plane():
    p = ClassParams(1, 0, 0)
    f = member_from_caratheodory(TruncatedSeries.one(12), p, 12)
    np.testing.assert_allclose(f.coeffs, np.r_[0, 1, np.zeros(11)], atol=0)
    f = member_from_caratheodory(caratheodory_from_atoms([1.0], [0.0], 12), p, 12)
    np.testing.assert_allclose(f.coeffs[2:], 2.0, atol=1e-14)


def test_caratheodory_coefficient_identities(rng):
    params = ClassParams(0.7, 0.35, 3)
    a, b, n = params.alpha, params.beta, params.n
    w = np.array([0.2, 0.5, 0.3])
    t = rng.uniform(0, 2 * np.pi, 3)
    c = caratheodory_from_atoms(w, t, 10).coeffs
    f = member_from_caratheodory(TruncatedSeries(c), params, 10)
    a2, a3, a4 = f.a(2), f.a(3), f.a(4)
    c1 = (a + 1) ** n / (a ** (n - 1) * (1 - b)) * a2
    c2 = (a + 2) ** n / (a ** (n - 1) * (1 - b)) * (a3 + (a - 1) / 2 * a2**2)
    c3 = (a + 3) ** n / (a ** (n - 1) * (1 - b)) * (a4 + (a - 1) * a2 * a3 + (a - 1) * (a - 2) / 6 * a2**3)
    np.testing.assert_allclose([c1, c2, c3], c[1:4], atol=1e-10)


@pytest.mark.parametrize(
    "phi",
    [Constant(-1), Constant(np.exp(0.4j)), Monomial(0.8j, 3), NormalizedPolynomial.from_raw([0.3, -1, 0.5j, 0.2])],
)
@pytest.mark.parametrize("params", [ClassParams(2, 0.5, 1), ClassParams(0.5, 0, 3), ClassParams(1, 0.9, 0)])
def test_schwarz_round_trip_and_membership(phi, params):
    f = member_from_schwarz(phi, params, 64)
    s = salagean_normalized(f, params)
    expected = schwarz_to_s(phi.coefficients(), params.beta, s.order + 1)[0]
    assert np.abs(s.coeffs - expected).max() <= 1e-10
    assert check_membership(f, params).verdict == "member"


def test_normalized_polynomial_sup_norm(rng):
    for _ in range(20):
        raw = rng.standard_normal(7) + 1j * rng.standard_normal(7)
        p = NormalizedPolynomial.from_raw(raw)
        z = np.exp(2j * np.pi * np.arange(20000) / 20000)
        assert np.abs(np.polyval(p.coefficients()[::-1], z)).max() <= 1.0


def test_schwarz_specs_validate():
    with pytest.raises(DomainError):
        Constant(1.01)
    with pytest.raises(DomainError):
        NormalizedPolynomial((1.0, 1.0), 1.0)


def test_inversion_divergence_for_oversized_phi():
    with pytest.raises(InversionDivergence):
        schwarz_to_s(np.array([1.5]), 0.0, 20)


def test_spec_dict_round_trip():
    specs = [Constant(0.3 - 0.2j), Monomial(-1j, 2), NormalizedPolynomial.from_raw([1, 2j]), AtomMeasure((0.25, 0.75), (1.0, 2.0))]
    for spec in specs:
        assert spec_from_dict(spec.to_dict()) == spec


def test_membership_identity():
    for beta in (0.0, 0.5, 0.99):
        rep = check_membership(NormalizedFunction.identity(), ClassParams(1.5, beta, 2))
        assert rep.verdict == "member"
        assert rep.min_real_part == pytest.approx(1.0)
        assert rep.margin == pytest.approx(1 - beta)


def test_membership_extremal_member():
    params = ClassParams(2, 0.5, 1)
    f = member_from_schwarz(Constant(-1), params, 64)
    assert check_membership(f, params).verdict == "member"


def test_membership_violation_by_hand():
    f = NormalizedFunction.from_coeffs([-3.0])
    rep = check_membership(f, ClassParams(1, 0, 0))
    assert rep.verdict == "violation"
    assert rep.min_real_part == pytest.approx(1 - 3 * 0.9)


def test_membership_radii_domain():
    with pytest.raises(DomainError):
        check_membership(NormalizedFunction.identity(), ClassParams(1, 0, 0), radii=(0.5, 0.99))


def test_koebe_and_rotations():
    k = koebe(10)
    assert [k.a(j) for j in (2, 3, 4)] == [2, 3, 4]
    np.testing.assert_allclose(rotated_koebe(0.0, 10).coeffs, k.coeffs)
    for xi in (0.3, 2.0, -1.1):
        rk = rotated_koebe(xi, 10)
        np.testing.assert_allclose(np.abs(rk.coeffs), np.arange(11))
        z = 0.3 + 0.2j
        assert rk(z) == pytest.approx(np.exp(-1j * xi) * k(np.exp(1j * xi) * z), abs=1e-12)


def test_bernardi_fixes_identity():
    params = ClassParams(1.5, 0.2, 1)
    f = bernardi_transform(NormalizedFunction.identity(20), 1.0, params)
    np.testing.assert_allclose(f.coeffs, np.r_[0, 1, np.zeros(19)], atol=1e-15)


def test_bernardi_domain():
    with pytest.raises(DomainError):
        bernardi_transform(NormalizedFunction.identity(3), -2.0, ClassParams(1, 0, 0))


def test_bernardi_coefficient_multiplier():
    params = ClassParams(1, 0, 0)
    f = NormalizedFunction.from_coeffs([0.5, 0.25])
    g = bernardi_transform(f, 1.0, params)
    # alpha = 1: F/z = sum h_k (1 + c)/(1 + c + k) z^k
    np.testing.assert_allclose(g.coeffs[:4], [0, 1, 0.5 * 2 / 3, 0.25 * 2 / 4])


def test_member_from_spec_dispatch():
    params = ClassParams(1, 0, 0)
    a = member_from_spec(AtomMeasure((1.0,), (0.0,)), params, 8)
    b = member_from_spec(Constant(-1), params, 8)
    np.testing.assert_allclose(a.coeffs, b.coeffs, atol=1e-14)
