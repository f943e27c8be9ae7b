"""
Group membership, composition and contraction of the Poincaré and Kaluza-Klein groups.
"""
import numpy as np
import pytest
from scipy.spatial.transform import Rotation

from kkorbits.groups import (AlgebraElement, GroupElement, GroupFlavor, adjoint_action, algebra_basis, compose,
                             identity, inverse, lorentz_from_boost_rotation, lorentz_residual, make_element,
                             membership_residual, random_element, restrict_to_spacetime)
from kkorbits.hyperlin import matrix_rank

FLAVORS = [GroupFlavor.poincare(), GroupFlavor.g1(), GroupFlavor.gomega(0.5), GroupFlavor.gomega(0.1),
           GroupFlavor.g0()]
IDS = [f.name + ("" if f.omega is None else f"-{f.omega}") for f in FLAVORS]


class TestFlavor:
    def test_dimensions(self):
        assert GroupFlavor.poincare().dim == 10
        assert GroupFlavor.g0().dim == 15
        assert GroupFlavor.g1().space_dim == 5

    def test_g1_is_gomega_at_one(self):
        assert GroupFlavor.g1().same_group(GroupFlavor.gomega(1.0))
        assert not GroupFlavor.g1().same_group(GroupFlavor.gomega(0.5))

    def test_gomega_needs_positive_omega(self):
        with pytest.raises(ValueError, match="omega > 0"):
            GroupFlavor("gomega")
        with pytest.raises(ValueError, match="omega > 0"):
            GroupFlavor.gomega(-1.0)

    def test_unknown_flavor(self):
        with pytest.raises(ValueError, match="unknown group flavor"):
            GroupFlavor("sl2")

    def test_metric_is_shared(self):
        metric = GroupFlavor.gomega(0.5).metric
        assert GroupFlavor.gomega(0.5).metric is metric
        assert GroupFlavor.g1().metric is GroupFlavor.gomega(1.0).metric
        assert GroupFlavor.g0().metric is GroupFlavor.g0().metric
        assert GroupFlavor.gomega(0.5).metric is not GroupFlavor.gomega(0.25).metric
        assert not metric.gram.flags.writeable

    @pytest.mark.parametrize("flavor", FLAVORS, ids=IDS)
    def test_json_round_trip(self, flavor):
        assert GroupFlavor.from_json(flavor.to_json()) == flavor


class TestLorentz:
    def test_boost_column(self):
        v = np.array([0.6, 0.0, 0.0])
        P = lorentz_from_boost_rotation(v)
        assert P[0, 0] == pytest.approx(1.25)
        assert np.allclose(P @ [1.0, 0.0, 0.0, 0.0], [1.25, 0.75, 0.0, 0.0])

    def test_boost_and_rotation_are_lorentz(self, rng):
        for _ in range(20):
            v = rng.uniform(-0.5, 0.5, size=3)
            R = Rotation.from_quat(rng.normal(size=4)).as_matrix()
            assert lorentz_residual(lorentz_from_boost_rotation(v, R)) < 1e-13

    def test_superluminal_boost(self):
        with pytest.raises(ValueError, match="superluminal boost"):
            lorentz_from_boost_rotation([1.0, 0.0, 0.0])

    def test_improper_rotation(self):
        with pytest.raises(ValueError, match="not a proper rotation"):
            lorentz_from_boost_rotation([0.1, 0.0, 0.0], np.diag([1.0, 1.0, -1.0]))


class TestMembership:
    @pytest.mark.parametrize("flavor", FLAVORS, ids=IDS)
    def test_random_elements_conserve_the_metric(self, flavor, rng):
        for _ in range(1000):
            a = random_element(flavor, rng)
            residual = membership_residual(flavor, a.P)
            assert residual < 1e-12, f"{flavor.name}: residual {residual:.3g}"

    def test_g0_block_form(self, rng):
        a = random_element(GroupFlavor.g0(), rng)
        assert np.all(a.P[:4, 4] == 0.0)
        assert a.P[4, 4] == 1.0
        assert np.allclose(a.P[4, :4], np.diag([1.0, -1.0, -1.0, -1.0]) @ a.b)

    def test_beta(self):
        b = np.array([1.0, 0.0, 0.0, 0.0])
        a = make_element(GroupFlavor.g1(), b=b)
        assert a.beta == pytest.approx(np.sqrt(2.0))
        assert np.allclose(a.b, b)

    def test_invalid_boost_parameter(self):
        with pytest.raises(ValueError, match="invalid boost parameter"):
            make_element(GroupFlavor.g1(), b=[0.0, 2.0, 0.0, 0.0])

    def test_poincare_takes_no_b(self):
        with pytest.raises(ValueError, match="take no b or xi"):
            make_element(GroupFlavor.poincare(), b=[0.1, 0.0, 0.0, 0.0])

    def test_rejects_non_member(self):
        P = np.eye(5)
        P[0, 1] = 0.3
        with pytest.raises(ValueError, match="does not conserve the metric"):
            GroupElement(GroupFlavor.g1(), np.zeros(5), P)

    def test_rejects_wrong_g0_block(self):
        P = np.eye(5)
        P[0, 4] = 0.1
        with pytest.raises(ValueError, match="block form"):
            GroupElement(GroupFlavor.g0(), np.zeros(5), P)

    def test_xi_given_twice(self):
        with pytest.raises(ValueError, match="xi given twice"):
            make_element(GroupFlavor.g0(), C=np.zeros(5), xi=1.0)


class TestComposition:
    @pytest.mark.parametrize("flavor", FLAVORS, ids=IDS)
    def test_inverse(self, flavor, rng):
        for _ in range(20):
            a = random_element(flavor, rng)
            e = compose(a, inverse(a))
            assert np.allclose(e.P, np.eye(flavor.space_dim), atol=1e-12)
            assert np.allclose(e.C, 0.0, atol=1e-12)

    @pytest.mark.parametrize("flavor", FLAVORS, ids=IDS)
    def test_associative(self, flavor, rng):
        a1, a2, a3 = (random_element(flavor, rng) for _ in range(3))
        left = compose(compose(a1, a2), a3)
        right = compose(a1, compose(a2, a3))
        assert np.allclose(left.P, right.P, atol=1e-12)
        assert np.allclose(left.C, right.C, atol=1e-12)

    def test_identity_is_neutral(self, rng):
        a = random_element(GroupFlavor.g1(), rng)
        assert np.allclose(compose(identity(a.flavor), a).P, a.P)

    def test_g0_boost_parameter_law(self, rng):
        a1, a2 = random_element(GroupFlavor.g0(), rng), random_element(GroupFlavor.g0(), rng)
        product = compose(a1, a2)
        expected = a1.P[4, :4] @ a2.P[:4, :4] + a2.P[4, :4]
        assert np.allclose(product.P[4, :4], expected, atol=1e-12)

    def test_flavor_mismatch(self, rng):
        a = random_element(GroupFlavor.poincare(), rng)
        b = random_element(GroupFlavor.g1(), rng)
        with pytest.raises(ValueError, match="flavor mismatch"):
            compose(a, b)

    def test_json_round_trip(self, rng):
        a = random_element(GroupFlavor.gomega(0.5), rng)
        back = GroupElement.from_json(a.to_json())
        assert np.array_equal(back.P, a.P)
        assert np.array_equal(back.C, a.C)


class TestContraction:
    def test_gomega_tends_to_g0(self, rng):
        P_L = lorentz_from_boost_rotation([0.3, -0.2, 0.1])
        b = np.array([0.4, 0.2, -0.3, 0.1])

        def gap(omega):
            hyperbolic = make_element(GroupFlavor.gomega(omega), P_L=P_L, b=b)
            contracted = make_element(GroupFlavor.g0(), P_L=P_L, b=b)
            return np.max(np.abs(hyperbolic.P - contracted.P))

        coarse, fine = gap(0.1), gap(0.01)
        assert fine < 1e-3
        assert fine < 0.02 * coarse, f"gap does not shrink like omega^2: {coarse:.3g} -> {fine:.3g}"

    def test_restrict_to_spacetime(self, rng):
        P_L = lorentz_from_boost_rotation([0.2, 0.1, 0.0])
        a = make_element(GroupFlavor.g1(), C=[0.1, 0.2, 0.3, 0.4], P_L=P_L, xi=0.5)
        restricted = restrict_to_spacetime(a)
        assert restricted.flavor == GroupFlavor.poincare()
        assert np.allclose(restricted.P, P_L)
        assert np.allclose(restricted.C, [0.1, 0.2, 0.3, 0.4])

    def test_restrict_needs_zero_b(self):
        a = make_element(GroupFlavor.g1(), b=[0.1, 0.0, 0.0, 0.0])
        with pytest.raises(ValueError, match="needs b = 0"):
            restrict_to_spacetime(a)


class TestAlgebra:
    @pytest.mark.parametrize("flavor", FLAVORS, ids=IDS)
    def test_basis_is_independent(self, flavor):
        basis = algebra_basis(flavor)
        assert len(basis) == flavor.dim
        assert matrix_rank([Z.vector() for Z in basis]) == flavor.dim

    @pytest.mark.parametrize("flavor", FLAVORS, ids=IDS)
    def test_adjoint_action_is_conjugation(self, flavor, rng):
        a = random_element(flavor, rng)
        H = a.to_homogeneous()
        H_inv = inverse(a).to_homogeneous()
        for Z in algebra_basis(flavor):
            expected = H @ Z.to_homogeneous() @ H_inv
            assert np.allclose(adjoint_action(a, Z).to_homogeneous(), expected, atol=1e-11)

    def test_rejects_non_skew(self):
        with pytest.raises(ValueError, match="not skew-adjoint"):
            AlgebraElement(GroupFlavor.poincare(), np.zeros(4), np.eye(4))
