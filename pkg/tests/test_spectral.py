import math
import random

import numpy as np
import pytest

import fusionkit as fk
from conftest import pool_for, random_symmetric_measure

from oracles import lattice_ball_top_eigenvalue


class TestBuildWindow:
    def test_su2_interval(self, su2):
        window = fk.build_window(su2, {1}, 4)
        assert window.labels == (0, 1, 2, 3, 4)

    def test_f2_ball_counts(self, f2):
        assert len(fk.build_window(f2, {"a", "b"}, 2)) == 17
        assert len(fk.build_window(f2, {"a", "b"}, 3)) == 53

    def test_radius_zero(self, su2):
        assert fk.build_window(su2, {1}, 0).labels == (0,)

    def test_nesting_is_prefix(self, z2):
        small = fk.build_window(z2, z2.generators, 2)
        large = fk.build_window(z2, z2.generators, 4)
        assert large.labels[:len(small)] == small.labels

    def test_conjugation_closed(self, f2):
        window = fk.build_window(f2, {"a", "b"}, 3)
        labels = set(window.labels)
        assert all(f2.conj(w) in labels for w in labels)

    def test_budget(self, su2):
        with pytest.raises(fk.BudgetExceeded) as info:
            fk.build_window(su2, {1}, 10, cap=5)
        assert info.value.cap == 5
        assert info.value.achieved_radius == 4

    def test_finite_ring_saturates(self, z6):
        window = fk.build_window(z6, z6.generators, 50)
        assert sorted(window.labels) == list(range(6))

    def test_empty_support(self, su2):
        with pytest.raises(fk.EmptySet):
            fk.build_window(su2, set(), 3)


class TestLOperator:
    def test_su2_tridiagonal(self, su2):
        window = fk.build_window(su2, {1}, 9)
        op = fk.l_operator(su2, 1, window)
        dense = op.matrix.toarray()
        m = len(window)
        expected = np.zeros((m, m))
        for k in range(m - 1):
            expected[k + 1, k] = expected[k, k + 1] = 0.5
        assert np.array_equal(dense, expected)
        assert dense[1, 0] == 0.5
        assert op.selfadjoint

    def test_deformed_scaling(self, dsu2):
        window = fk.build_window(dsu2, {1}, 9)
        dense = fk.l_operator(dsu2, 1, window).matrix.toarray()
        off = [dense[k, k + 1] for k in range(9)]
        assert off == [pytest.approx(1 / 3)] * 9

    def test_unit_gives_identity(self, su2):
        window = fk.build_window(su2, {1}, 5)
        dense = fk.l_operator(su2, 0, window).matrix.toarray()
        assert np.array_equal(dense, np.eye(len(window)))

    def test_invalid_label(self, su2):
        window = fk.build_window(su2, {1}, 3)
        with pytest.raises(fk.InvalidLabel):
            fk.l_operator(su2, -2, window)

    def test_transpose_duality_exact(self, f2, z2):
        for ring in (f2, z2):
            window = fk.build_window(ring, ring.generators, 3)
            for xi in ring.generators:
                m1 = fk.l_operator(ring, xi, window).matrix
                m2 = fk.l_operator(ring, ring.conj(xi), window).matrix
                assert (m1.T != m2).nnz == 0  # bitwise equality


class TestLMeasureOperator:
    def test_lattice_path(self, z1):
        window = fk.build_window(z1, {1, -1}, 5)
        mu = fk.ProbMeasure.uniform(z1, [1, -1])
        dense = fk.l_measure_operator(z1, mu, window).matrix.toarray()
        order = list(window.labels)
        for i, x in enumerate(order):
            for j, y in enumerate(order):
                expected = 0.5 if abs(x - y) == 1 else 0.0
                assert dense[i, j] == expected

    def test_delta_e_identity(self, su2):
        window = fk.build_window(su2, {1}, 4)
        mu = fk.ProbMeasure.delta(su2, 0)
        dense = fk.l_measure_operator(su2, mu, window).matrix.toarray()
        assert np.array_equal(dense, np.eye(len(window)))

    def test_delta_reduces_to_l_operator(self, su2):
        window = fk.build_window(su2, {1}, 6)
        mu = fk.ProbMeasure.delta(su2, 1)
        a = fk.l_measure_operator(su2, mu, window).matrix
        b = fk.l_operator(su2, 1, window).matrix
        assert (a != b).nnz == 0

    def test_symmetric_measure_gives_bitwise_symmetric_matrix(self, f2):
        window = fk.build_window(f2, f2.generators, 3)
        rng = random.Random(3)
        for _ in range(5):
            mu = random_symmetric_measure(f2, rng, pool_for(f2, 2))
            op = fk.l_measure_operator(f2, mu, window)
            assert op.selfadjoint
            assert (op.matrix != op.matrix.T).nnz == 0

    def test_selfadjoint_flag_follows_symmetry(self, z1):
        window = fk.build_window(z1, {1, -1}, 3)
        op = fk.l_measure_operator(z1, fk.ProbMeasure.delta(z1, 1), window)
        assert not op.selfadjoint


class TestRhoApply:
    def test_su2_worked_values(self, su2):
        f = fk.indicator(su2, range(4))
        out = fk.rho1_operator_apply(su2, 1, f)
        assert out[4] == pytest.approx(0.4)
        assert out[3] == pytest.approx(0.375)

    def test_unit_is_identity(self, su2):
        f = fk.Element(su2, {2: 1.5, 5: -2.0})
        assert fk.rho1_operator_apply(su2, 0, f) == f

    def test_zero_function(self, su2):
        out = fk.rho1_operator_apply(su2, 1, fk.Element(su2, {}))
        assert not out.coeffs


class TestTopEigenvalue:
    def test_identity_operator(self, su2):
        window = fk.build_window(su2, {1}, 4)
        op = fk.l_measure_operator(su2, fk.ProbMeasure.delta(su2, 0), window)
        assert fk.top_eigenvalue(op).value == pytest.approx(1.0, abs=1e-12)

    def test_su2_path_closed_form(self, su2):
        for m in (10, 100, 512):
            window = fk.build_window(su2, {1}, m - 1)
            assert len(window) == m
            op = fk.l_measure_operator(su2, fk.ProbMeasure.delta(su2, 1), window)
            est = fk.top_eigenvalue(op)
            assert est.method == "dense"
            assert est.value == pytest.approx(math.cos(math.pi / (m + 1)), abs=1e-9)

    def test_deformed_closed_form(self, dsu2):
        window = fk.build_window(dsu2, {1}, 99)
        op = fk.l_measure_operator(dsu2, fk.ProbMeasure.delta(dsu2, 1), window)
        expected = (2 / 3) * math.cos(math.pi / 101)
        assert fk.top_eigenvalue(op).value == pytest.approx(expected, abs=1e-9)

    def test_power_iteration_matches_dense(self, f2):
        window = fk.build_window(f2, f2.generators, 6)  # 1457 > dense limit
        mu = fk.ProbMeasure.uniform(f2, f2.generators)
        op = fk.l_measure_operator(f2, mu, window)
        est = fk.top_eigenvalue(op, tol=1e-10)
        assert est.method == "power"
        dense_top = float(np.linalg.eigvalsh(op.matrix.toarray())[-1])
        assert est.value == pytest.approx(dense_top, abs=1e-9)

    def test_not_selfadjoint_rejected(self, z1):
        window = fk.build_window(z1, {1, -1}, 3)
        op = fk.l_measure_operator(z1, fk.ProbMeasure.delta(z1, 1), window)
        with pytest.raises(fk.NotSelfAdjoint):
            fk.top_eigenvalue(op)

    def test_no_convergence_carries_estimate(self, f2):
        window = fk.build_window(f2, f2.generators, 6)
        mu = fk.ProbMeasure.uniform(f2, f2.generators)
        op = fk.l_measure_operator(f2, mu, window)
        with pytest.raises(fk.NoConvergence) as info:
            fk.top_eigenvalue(op, tol=1e-12, max_iter=3)
        assert info.value.iterations == 3
        assert 0.0 < info.value.estimate < 1.0
        assert info.value.residual > 0.0


class TestGnsOperator:
    def test_scaling(self, su2):
        window = fk.build_window(su2, {1}, 6)
        x = fk.Element(su2, {1: 1})
        a = fk.gns_operator(su2, x, window).matrix.toarray()
        b = fk.l_operator(su2, 1, window).matrix.toarray()
        assert np.array_equal(a, 2.0 * b)

    def test_unit_is_identity(self, su2):
        window = fk.build_window(su2, {1}, 4)
        one = fk.Element(su2, {0: 1})
        dense = fk.gns_operator(su2, one, window).matrix.toarray()
        assert np.array_equal(dense, np.eye(len(window)))

    def test_trace_identity(self, su2, f2):
        rng = random.Random(5)
        for ring in (su2, f2):
            pool = pool_for(ring, 2)
            for _ in range(10):
                labels = rng.sample(pool, min(3, len(pool)))
                x = fk.Element(ring, {l: rng.randint(-2, 2) for l in labels})
                y = fk.multiply(x, fk.conjugate_element(x))
                support = set(y.support) | set(x.support) | {ring.unit}
                window = fk.build_window(ring, support, 1)
                matrix = fk.gns_operator(ring, y, window).matrix.toarray()
                e_index = window.index(ring.unit)
                assert matrix[e_index, e_index] == fk.natural_trace(y)

    def test_integer_elements_only(self, su2):
        window = fk.build_window(su2, {1}, 3)
        with pytest.raises(fk.InvalidParam):
            fk.gns_operator(su2, fk.Element(su2, {1: 0.5}), window)


class TestPictureConsistency:
    def test_weighted_picture_intertwines(self, su2, dsu2, z2):
        # matrix action on plain-l2 coordinates vs exact lambda action on the
        # rescaled function, compared on the window rows
        rng = random.Random(23)
        for ring in (su2, dsu2, z2):
            pool = pool_for(ring, 2)
            window = fk.build_window(ring, ring.generators, 4)
            mu = random_symmetric_measure(ring, rng, pool)
            op = fk.l_measure_operator(ring, mu, window)
            for _ in range(5):
                vec = np.zeros(len(window))
                support = rng.sample(list(window.labels), 4)
                for label in support:
                    vec[window.index(label)] = rng.uniform(-1, 1)
                g = fk.Element(ring, {
                    label: vec[window.index(label)] / ring.dim(label)
                    for label in support})
                exact = fk.lambda_measure_apply(ring, mu, g)
                image = op.matrix @ vec
                for label in window.labels:
                    lhs = image[window.index(label)]
                    rhs = ring.dim(label) * exact[label]
                    assert math.isclose(lhs, rhs, rel_tol=1e-10, abs_tol=1e-10)


class TestGroupRingReduction:
    def test_lattice_matches_adjacency_oracle(self, z1, z2):
        for ring, d, radius in ((z1, 1, 10), (z2, 2, 4)):
            window = fk.build_window(ring, ring.generators, radius)
            mu = fk.ProbMeasure.uniform(ring, ring.generators)
            op = fk.l_measure_operator(ring, mu, window)
            ours = fk.top_eigenvalue(op).value
            oracle = lattice_ball_top_eigenvalue(d, radius)
            assert ours == pytest.approx(oracle, abs=1e-10)


class TestAmenabilityEstimate:
    def test_su2_amenable(self, su2):
        mu = fk.ProbMeasure.delta(su2, 1)
        report = fk.amenability_estimate(su2, mu, [50, 100, 200])
        assert report.verdict is fk.Verdict.EVIDENCE_AMENABLE
        assert report.gap < 1e-3

    def test_deformed_nonamenable(self, dsu2):
        mu = fk.ProbMeasure.delta(dsu2, 1)
        report = fk.amenability_estimate(dsu2, mu, [100, 300, 505, 506, 507, 508])
        assert report.verdict is fk.Verdict.EVIDENCE_NONAMENABLE
        assert report.gap == pytest.approx(1 / 3, abs=1e-3)

    def test_short_run_is_inconclusive(self, su2):
        mu = fk.ProbMeasure.delta(su2, 1)
        report = fk.amenability_estimate(su2, mu, [3, 4, 5])
        assert report.verdict is fk.Verdict.INCONCLUSIVE

    def test_nonsymmetric_rejected(self, z1):
        with pytest.raises(fk.NonSymmetricMeasure):
            fk.amenability_estimate(z1, fk.ProbMeasure.delta(z1, 1), [2, 3])

    def test_monotone_entries(self, f2):
        mu = fk.ProbMeasure.uniform(f2, f2.generators)
        report = fk.amenability_estimate(f2, mu, [1, 2, 3, 4])
        values = [e.lambda_max for e in report.entries]
        assert all(b >= a - 1e-9 for a, b in zip(values, values[1:]))
        assert report.note  # heuristic disclaimer present
