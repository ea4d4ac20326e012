import itertools

import numpy as np
import pytest

from htfoliation import geometry as geo
from htfoliation.errors import DegenerateFrameError, DimensionMismatchError
from htfoliation.geometry import (AmbientChart, EUCLIDEAN, MonomialCache,
                                  Polynomial, PolyField, UNIT_SPHERE, bracket,
                                  directional_derivative, gram_schmidt_at,
                                  levi_civita, sample_points, sphere_moment)


def rand_field(n, degree, rng, density=0.4):
    """Random polynomial field with small integer coefficients (arithmetic
    on them is exact, so algebraic identities must cancel to literal zero)."""
    comps = []
    for _ in range(n):
        terms = {}
        for exps in itertools.product(range(degree + 1), repeat=n):
            if sum(exps) <= degree and rng.random() < density:
                terms[exps] = float(rng.integers(-3, 4))
        comps.append(Polynomial.from_dict(n, terms))
    return PolyField(comps)


class TestPolynomial:
    def test_arithmetic_and_canonical_form(self):
        x = Polynomial.variable(3, 0)
        y = Polynomial.variable(3, 1)
        f = x * x + 2 * y
        assert f.n_terms == 2
        assert (f - f).is_zero          # exact cancellation, no stored zeros
        assert f.degree() == 2
        assert (f * f).degree() == 4

    def test_partial(self):
        x = Polynomial.variable(2, 0)
        f = x * x * x
        assert f.partial(0).terms_dict() == {(2, 0): 3.0}
        assert f.partial(1).is_zero

    def test_evaluate_matches_direct(self):
        rng = np.random.default_rng(0)
        f = rand_field(3, 3, rng).components[0]
        pts = rng.uniform(-1, 1, size=(5, 3))
        expected = np.array([
            sum(c * np.prod(p ** np.array(e)) for e, c in f.terms_dict().items())
            for p in pts])
        np.testing.assert_allclose(f.evaluate(pts), expected, atol=1e-12)

    def test_shared_cache(self):
        rng = np.random.default_rng(1)
        f = rand_field(4, 2, rng).components[0]
        pts = rng.uniform(-1, 1, size=(6, 4))
        cache = MonomialCache(pts)
        np.testing.assert_array_equal(f.evaluate(pts, cache), f.evaluate(pts))

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            Polynomial.variable(2, 0) * Polynomial.variable(3, 0)

    def test_packing_overflow_guard(self):
        x = Polynomial.variable(16, 0)
        f = x
        with pytest.raises(OverflowError):
            for _ in range(20):
                f = f * x


class TestDerivatives:
    def test_directional_derivative_examples(self):
        x1 = Polynomial.variable(2, 0)
        x2 = Polynomial.variable(2, 1)
        d1 = PolyField.basis(2, 0)
        assert directional_derivative(d1, x1 * x1).terms_dict() == {(1, 0): 2.0}
        X = PolyField([Polynomial.zero(2), x1])   # x1 d/dx2
        assert directional_derivative(X, x2).terms_dict() == {(1, 0): 1.0}

    def test_bracket_examples(self):
        d1 = PolyField.basis(3, 0)
        d2 = PolyField.basis(3, 1)
        assert bracket(d1, d2).is_zero()
        x, y = Polynomial.variable(3, 0), Polynomial.variable(3, 1)
        X = PolyField([Polynomial.constant(3, 1), Polynomial.zero(3), -0.5 * y])
        Y = PolyField([Polynomial.zero(3), Polynomial.constant(3, 1), 0.5 * x])
        br = bracket(X, Y)
        assert br.components[0].is_zero and br.components[1].is_zero
        assert br.components[2].terms_dict() == {(0, 0, 0): 1.0}
        assert bracket(X, X).is_zero()

    def test_jacobi_identity_exact(self):
        rng = np.random.default_rng(7)
        for _ in range(50):
            X, Y, Z = (rand_field(4, 2, rng) for _ in range(3))
            jac = (bracket(bracket(X, Y), Z) + bracket(bracket(Y, Z), X)
                   + bracket(bracket(Z, X), Y))
            assert jac.is_zero()


class TestLeviCivita:
    def test_euclidean_flat(self):
        chart = AmbientChart(EUCLIDEAN, 3)
        assert levi_civita(chart, PolyField.basis(3, 0),
                           PolyField.basis(3, 1)).is_zero()

    def test_great_circle_is_geodesic(self):
        chart = AmbientChart(UNIT_SPHERE, 3)
        A = np.array([[0, -1, 0], [1, 0, 0], [0, 0, 0]], float)
        R = PolyField.linear(A)
        val = levi_civita(chart, R, R).evaluate(np.array([1.0, 0.0, 0.0]))
        np.testing.assert_allclose(val, 0.0, atol=1e-15)

    def test_position_field_identity(self):
        # second fundamental form: nabla_X p = X for tangent X at on-sphere p
        chart = AmbientChart(UNIT_SPHERE, 3)
        pos = PolyField.position(3)
        X = geo.tangential_projection(PolyField.constant([0.0, 1.0, 0.0]))
        p = np.array([1.0, 0.0, 0.0])
        np.testing.assert_allclose(levi_civita(chart, X, pos).evaluate(p),
                                   X.evaluate(p), atol=1e-15)

    def test_metric_compatibility_and_torsion_free(self):
        chart = AmbientChart(UNIT_SPHERE, 4)
        pts = sample_points(chart, 32, 11)
        rng = np.random.default_rng(3)
        fields = [geo.tangential_projection(rand_field(4, 1, rng, density=0.8))
                  for _ in range(3)]
        X, Y, W = fields
        lhs = directional_derivative(X, Y.dot(W))
        rhs = levi_civita(chart, X, Y).dot(W) + Y.dot(levi_civita(chart, X, W))
        assert np.abs((lhs - rhs).evaluate(pts)).max() < 1e-10
        tf = levi_civita(chart, X, Y) - levi_civita(chart, Y, X) - bracket(X, Y)
        tf = geo.tangential_projection(tf)
        assert np.abs(tf.evaluate(pts)).max() < 1e-10


class TestGramSchmidt:
    def test_textbook_examples(self):
        basis = gram_schmidt_at([np.array([1.0, 0.0]), np.array([0.0, 2.0])])
        np.testing.assert_allclose(basis, [[1, 0], [0, 1]], atol=1e-15)
        basis = gram_schmidt_at([np.array([1.0, 1.0]), np.array([1.0, 0.0])])
        r = 1 / np.sqrt(2)
        np.testing.assert_allclose(basis, [[r, r], [r, -r]], atol=1e-15)

    def test_degenerate_raises(self):
        with pytest.raises(DegenerateFrameError):
            gram_schmidt_at([np.array([1.0, 1.0]), np.array([1.0, 1.0 + 1e-14])])

    def test_custom_metric_and_coefficients(self):
        G = np.diag([4.0, 1.0])
        basis, W, kept = gram_schmidt_at(
            [np.array([1.0, 0.0]), np.array([1.0, 1.0])], metric=G,
            return_coefficients=True)
        assert kept == [0, 1]
        for i, b in enumerate(basis):
            np.testing.assert_allclose(b @ G @ b, 1.0, atol=1e-14)
            np.testing.assert_allclose(
                b, W[i, 0] * np.array([1.0, 0.0]) + W[i, 1] * np.array([1.0, 1.0]),
                atol=1e-14)


class TestSphereMoments:
    def test_examples(self):
        assert sphere_moment(4, (1, 0, 0, 0)) == 0.0
        assert sphere_moment(4, (2, 0, 0, 0)) == 0.25
        assert sphere_moment(2, (2, 2)) == 0.125
        assert sphere_moment(2, (4, 0)) == 0.375

    def test_circle_quadrature_oracle(self):
        # the N = 2 moments against a plain trapezoid integration of
        # cos^a sin^b over the circle
        theta = np.linspace(0.0, 2 * np.pi, 20001)
        for alpha in ((2, 2), (4, 0), (2, 0), (4, 2)):
            vals = np.cos(theta) ** alpha[0] * np.sin(theta) ** alpha[1]
            numeric = np.trapezoid(vals, theta) / (2 * np.pi)
            np.testing.assert_allclose(sphere_moment(2, alpha), numeric,
                                       atol=1e-7)

    def test_norm_recursion(self):
        # multiplying by ||x||^2 = 1 on the sphere: sum_i m(alpha + 2 e_i) = m(alpha)
        for n_vars, alpha in [(3, (0, 0, 0)), (4, (2, 0, 1, 0)), (5, (2, 2, 0, 0, 0))]:
            total = sum(sphere_moment(n_vars, tuple(
                a + (2 if i == j else 0) for j, a in enumerate(alpha)))
                for i in range(n_vars))
            np.testing.assert_allclose(total, sphere_moment(n_vars, alpha),
                                       atol=1e-15)

    def test_integrate_polynomial(self):
        x = Polynomial.variable(2, 0)
        y = Polynomial.variable(2, 1)
        val = geo.integrate_sphere(x * x * y * y)
        np.testing.assert_allclose(val, 0.125, atol=1e-15)


class TestSampling:
    def test_sphere_points_unit_norm(self):
        pts = sample_points(AmbientChart(UNIT_SPHERE, 8), 4, 1)
        assert np.abs(np.linalg.norm(pts, axis=1) - 1.0).max() <= 1e-15

    def test_deterministic(self):
        chart = AmbientChart(UNIT_SPHERE, 5)
        np.testing.assert_array_equal(sample_points(chart, 6, 9),
                                      sample_points(chart, 6, 9))

    def test_euclidean_box(self):
        pts = sample_points(AmbientChart(EUCLIDEAN, 4), 4, 1)
        assert pts.shape == (4, 4)
        assert np.abs(pts).max() <= 1.0
