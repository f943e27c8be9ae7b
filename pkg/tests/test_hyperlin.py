"""
Vector products, volume forms and the Hodge operator on pseudo-Euclidean spaces.
"""
import itertools

import numpy as np
import pytest

from kkorbits.hyperlin import (KForm, Metric, SemiMetric, adjoint, adjoint_map, bivector_map, cross_matrix,
                               double_hodge_sign, form_inner, hodge, hodge_skew, levi_civita, matrix_rank,
                               minkowski_vector_product_blocks, minkowski_vector_product_map_blocks,
                               vector_product, vector_product_map, vector_product_recursive, volume_form,
                               wedge)

METRICS = {
    "euclidean3": Metric.euclidean(3),
    "minkowski": Metric.minkowski(),
    "omega_half": Metric.omega(0.5),
    "euclidean_time4": Metric(np.diag([1.0, 1.0, 1.0, -1.0])),
}


def random_form(rng, n, q):
    if q == 0:
        return KForm(0, np.array(rng.normal()))
    return wedge(*rng.normal(size=(q, n))) + wedge(*rng.normal(size=(q, n)))


class TestMetric:
    def test_signatures(self):
        assert Metric.minkowski().signature == (1, 3)
        assert Metric.omega(2.0).signature == (1, 4)
        assert Metric.euclidean(3).signature == (3, 0)
        assert Metric.minkowski().sign == -1
        assert Metric.omega(2.0).sign == 1

    def test_rejects_non_symmetric(self):
        gram = np.diag([1.0, -1.0, -1.0, -1.0])
        gram[0, 1] = 0.5
        with pytest.raises(ValueError, match="not symmetric"):
            Metric(gram)

    def test_rejects_degenerate(self):
        with pytest.raises(ValueError, match="degenerate"):
            Metric(np.diag([1.0, -1.0, -1.0, -1.0, 0.0]))

    def test_rejects_unsupported_dimension(self):
        with pytest.raises(ValueError, match="dimension 3, 4 or 5"):
            Metric(np.eye(2))

    def test_declared_signature_is_checked(self):
        with pytest.raises(ValueError, match="declared signature"):
            Metric(np.eye(4), declared_signature=(1, 3))

    def test_json_round_trip(self):
        G = Metric.omega(0.7)
        back = Metric.from_json(G.to_json())
        assert np.array_equal(back.gram, G.gram)
        assert back.orientation == G.orientation

    def test_adjoint_inverts_lorentz_boost(self):
        gamma, v = 1.25, 0.6
        P = np.eye(4)
        P[0, 0] = P[1, 1] = gamma
        P[0, 1] = P[1, 0] = gamma * v
        G = Metric.minkowski()
        assert np.allclose(adjoint(P, G) @ P, np.eye(4), atol=1e-14)

    def test_adjoint_of_column_vector_lowers_it(self):
        G = Metric.minkowski()
        U = np.array([2.0, 1.0, 0.5, -1.0])
        assert np.allclose(adjoint_map(U, None, G), G.lower(U))

    def test_semi_metric_has_no_adjoint(self):
        semi = SemiMetric(np.diag([1.0, -1.0, -1.0, -1.0, 0.0]))
        with pytest.raises(ValueError, match="adjoint undefined for semi-metric"):
            adjoint(np.eye(5), semi)
        with pytest.raises(ValueError, match="Hodge undefined for degenerate metric"):
            hodge(KForm(1, np.ones(5)), semi)


class TestForms:
    def test_levi_civita_signs(self):
        eps = levi_civita(4)
        assert eps[0, 1, 2, 3] == 1
        assert eps[1, 0, 2, 3] == -1
        assert eps[0, 0, 2, 3] == 0

    def test_cross_matrix(self, rng):
        u, v = rng.normal(size=(2, 3))
        assert np.allclose(cross_matrix(u) @ v, np.cross(u, v))

    def test_wedge_is_determinant(self, rng):
        a, b, u, v = rng.normal(size=(4, 4))
        expected = (a @ u) * (b @ v) - (a @ v) * (b @ u)
        assert wedge(a, b).evaluate(u, v) == pytest.approx(expected, abs=1e-12)

    def test_rejects_non_antisymmetric_components(self):
        with pytest.raises(ValueError, match="not antisymmetric"):
            KForm(2, np.ones((4, 4)))

    def test_partial_evaluation_returns_form(self, rng):
        a, b, u = rng.normal(size=(3, 4))
        partial = wedge(a, b).evaluate(u)
        assert isinstance(partial, KForm)
        assert partial.degree == 1

    def test_hodge_of_unit_is_volume(self):
        for G in METRICS.values():
            assert np.allclose(hodge(KForm(0, np.array(1.0)), G).comps, volume_form(G).comps)

    def test_hodge_of_volume_is_metric_sign(self):
        for G in METRICS.values():
            assert float(hodge(volume_form(G), G).comps) == pytest.approx(G.sign, abs=1e-12)

    @pytest.mark.parametrize("name", sorted(METRICS))
    def test_double_hodge_sign(self, name, rng):
        G = METRICS[name]
        for q in range(G.dim + 1):
            A = random_form(rng, G.dim, q)
            twice = hodge(hodge(A, G), G)
            err = np.max(np.abs(twice.comps - double_hodge_sign(G, q) * A.comps))
            assert err < 1e-10 * max(1.0, np.max(np.abs(A.comps))), f"{name}, degree {q}: error {err:.3g}"

    def test_hodge_is_isometry_up_to_sign(self, rng):
        G = Metric.minkowski()
        A, B = random_form(rng, 4, 2), random_form(rng, 4, 2)
        lhs = form_inner(hodge(A, G), hodge(B, G), G)
        assert abs(lhs) == pytest.approx(abs(form_inner(A, B, G)), rel=1e-10)


class TestVectorProduct:
    @pytest.mark.parametrize("name", sorted(METRICS))
    def test_defining_identity(self, name, rng):
        G = METRICS[name]
        vectors = list(rng.normal(size=(G.dim - 1, G.dim)))
        U = rng.normal(size=G.dim)
        J = vector_product(vectors, G)
        assert G.dot(J, U) == pytest.approx(volume_form(G).evaluate(*vectors, U), abs=1e-10)
        for V in vectors:
            assert abs(G.dot(J, V)) < 1e-10

    def test_antisymmetric_in_arguments(self, rng):
        G = Metric.minkowski()
        v1, v2, v3 = rng.normal(size=(3, 4))
        assert np.allclose(vector_product([v1, v2, v3], G), -vector_product([v2, v1, v3], G), atol=1e-12)

    def test_map_is_skew_adjoint(self, rng):
        G = Metric.omega(0.5)
        vectors = list(rng.normal(size=(3, 5)))
        lowered = G.gram @ vector_product_map(vectors, G)
        assert np.allclose(lowered, -lowered.T, atol=1e-12)

    def test_map_matches_product(self, rng):
        G = Metric.minkowski()
        v1, v2, v3 = rng.normal(size=(3, 4))
        assert np.allclose(vector_product_map([v1, v2], G) @ v3, vector_product([v1, v2, v3], G), atol=1e-12)

    @pytest.mark.parametrize("lower, last", [
        (Metric.minkowski(), -1.0),
        (Metric.minkowski(), -0.25),
        (Metric.euclidean(3), -1.0),
        (Metric.euclidean(3), 2.0),
    ])
    def test_recursive_construction(self, lower, last, rng):
        G = Metric(np.diag(np.append(np.diag(lower.gram), last)))
        for _ in range(20):
            vectors = list(rng.normal(size=(lower.dim, lower.dim + 1)))
            direct = vector_product(vectors, G)
            recursive = vector_product_recursive(vectors, lower, last)
            err = np.max(np.abs(direct - recursive))
            assert err < 1e-11 * max(1.0, np.max(np.abs(direct))), f"recursive differs by {err:.3g}"

    def test_block_formula_reads_argument_first(self, rng):
        reversed_orientation = Metric.minkowski(orientation=-1)
        for _ in range(20):
            pis = list(rng.normal(size=(3, 4)))
            assert np.allclose(minkowski_vector_product_blocks(pis), vector_product(pis, reversed_orientation),
                               atol=1e-12)
            p1, p2 = pis[:2]
            assert np.allclose(minkowski_vector_product_map_blocks(p1, p2),
                               vector_product_map([p1, p2], reversed_orientation), atol=1e-12)

    def test_block_formula_on_spatial_frame(self):
        frame = [np.eye(4)[k] for k in (1, 2, 3)]
        assert np.allclose(minkowski_vector_product_blocks(frame), [1.0, 0.0, 0.0, 0.0])
        assert np.allclose(vector_product(frame, Metric.minkowski()), [-1.0, 0.0, 0.0, 0.0])

    def test_wrong_number_of_vectors(self):
        with pytest.raises(ValueError, match="takes 3 vectors"):
            vector_product([np.ones(4)], Metric.minkowski())


class TestHodgeSkew:
    def test_bivector_maps_to_vector_product(self, rng):
        G = Metric.minkowski()
        for _ in range(10):
            V1, V2 = rng.normal(size=(2, 4))
            lhs = hodge_skew(bivector_map(V1, V2, G), G)
            assert np.allclose(lhs, vector_product_map([V1, V2], G), atol=1e-12)

    def test_squares_to_minus_one(self, rng):
        G = Metric.minkowski()
        V1, V2, V3, V4 = rng.normal(size=(4, 4))
        M = bivector_map(V1, V2, G) + bivector_map(V3, V4, G)
        assert np.allclose(hodge_skew(hodge_skew(M, G), G), -M, atol=1e-12)

    def test_needs_four_dimensions(self):
        with pytest.raises(ValueError, match="needs dimension 4"):
            hodge_skew(np.zeros((5, 5)), Metric.omega(1.0))


def test_matrix_rank():
    assert matrix_rank([[1.0, 0.0], [2.0, 0.0]]) == 1
    assert matrix_rank(np.eye(3)) == 3
    assert matrix_rank(np.zeros((2, 2))) == 0


def test_permutation_table_is_antisymmetric():
    eps = levi_civita(3)
    for i, j, k in itertools.permutations(range(3)):
        assert eps[i, j, k] == -eps[j, i, k]
