import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dualcheeger.exact import hbar_exact
from dualcheeger.exceptions import DomainError, PipelineError
from dualcheeger.graph import disjoint_union, generate
from dualcheeger.projective import (
    DIM_CONSTANT,
    PipelineParams,
    ProjectiveSpace,
    best_coordinate,
    cutoff_localize,
    extract_sub_bipartition,
    mass_condition,
    merge_heavy_clusters,
    padded_cores,
    padded_random_partition,
    rough_distance,
    spreading_bound_check,
)
from dualcheeger.spectral import EmbeddingMap, dual_rayleigh, eigensystem, top_embedding


def embedding(g, k):
    return top_embedding(eigensystem(g), k)


class TestRoughMetric:
    def test_examples(self):
        assert rough_distance([1, 0], [-1, 0]) == 0.0
        assert rough_distance([1, 0], [0, 3]) == pytest.approx(math.sqrt(2))
        assert rough_distance([2, 0], [1, 1]) == pytest.approx(math.sqrt(2 - math.sqrt(2)))
        with pytest.raises(DomainError):
            rough_distance([0, 0], [1, 0])

    @given(st.integers(1, 5), st.integers(0, 2 ** 32 - 1))
    def test_metric_axioms(self, k, seed):
        x, y, z = np.random.default_rng(seed).normal(size=(3, k))
        dxy, dyz, dxz = rough_distance(x, y), rough_distance(y, z), rough_distance(x, z)
        assert dxy == pytest.approx(rough_distance(y, x), abs=1e-15)
        assert 0.0 <= dxy <= math.sqrt(2) + 1e-12
        assert rough_distance(x, -3 * x) <= 1e-12
        assert dxz <= dxy + dyz + 1e-12

    def test_space(self):
        g = generate("random_connected_weighted", (8,), 4)
        F = embedding(g, 3)
        sp = ProjectiveSpace(F, g.degrees)
        assert sp.total_mass == pytest.approx(3.0, abs=1e-9)
        D = sp.matrix
        assert np.allclose(D, D.T) and np.all(np.diag(D) <= 1e-12)
        assert sp.distance(sp.points[0], sp.points[1]) == pytest.approx(D[0, 1])
        assert np.allclose(sp.distance_to_set([sp.points[2]]), D[2])
        assert sp.diameter(sp.points) <= math.sqrt(2) + 1e-12

    def test_support_excludes_zero_rows(self):
        F = EmbeddingMap(np.array([[1.0, 0.0], [0.0, 0.0], [0.0, 2.0]]))
        sp = ProjectiveSpace(F, np.ones(3))
        assert sp.points.tolist() == [0, 2]
        with pytest.raises(DomainError):
            sp.distance(0, 1)


class TestParams:
    def test_values(self):
        p = PipelineParams.for_k(2)
        assert p.r == pytest.approx(1 / (3 * math.sqrt(2)))
        assert p.alpha == pytest.approx(256 * DIM_CONSTANT)
        assert p.eps == pytest.approx(p.r / p.alpha) and p.pad_radius == p.eps
        assert p.bound_factor == pytest.approx(2 * (768 * DIM_CONSTANT) ** 2 * 64)
        assert DIM_CONSTANT == pytest.approx(4 * (math.log2(math.pi) - 0.5))
        assert PipelineParams.for_k(1).bound_factor == 1.0
        with pytest.raises(DomainError):
            PipelineParams.for_k(0)


class TestPartition:
    @pytest.mark.parametrize("seed", range(10))
    def test_ball_carving(self, seed):
        g = generate("random_connected_weighted", (8,), seed)
        sp = ProjectiveSpace(embedding(g, 2), g.degrees)
        r = 0.3
        parts = padded_random_partition(sp, r, 0.1, np.random.default_rng(seed))
        assert sorted(v for S in parts for v in S) == sp.points.tolist()
        for S in parts:
            assert sp.diameter(S) <= r + 1e-12
        cores = padded_cores(sp, parts, 0.05)
        for S, c in zip(parts, cores):
            assert c <= S
            for v in c:
                near = sp.points[sp.rows(sp.index[v])[0] <= 0.05]
                assert set(near.tolist()) <= S

    def test_deterministic(self):
        g = generate("random_connected_weighted", (8,), 1)
        sp = ProjectiveSpace(embedding(g, 2), g.degrees)
        a = padded_random_partition(sp, 0.2, 0.1, np.random.default_rng(5))
        b = padded_random_partition(sp, 0.2, 0.1, np.random.default_rng(5))
        assert a == b

    def test_validation(self):
        g = generate("cycle", (6,))
        sp = ProjectiveSpace(embedding(g, 2), g.degrees)
        with pytest.raises(DomainError):
            padded_random_partition(sp, 0.0, 0.1, np.random.default_rng())
        with pytest.raises(DomainError):
            padded_random_partition(sp, 0.1, 1.0, np.random.default_rng())
        with pytest.raises(DomainError):
            padded_cores(sp, [frozenset({0})], 0.1)

    def test_mass_condition(self):
        g = generate("cycle", (6,))
        sp = ProjectiveSpace(embedding(g, 2), g.degrees)
        whole = [frozenset(sp.points.tolist())]
        assert mass_condition(sp, whole, 2)
        assert not mass_condition(sp, [frozenset()], 2)


class TestSpreading:
    def test_single_points(self):
        for name in ("C7", "rand"):
            g = generate("cycle", (7,)) if name == "C7" else generate("random_connected_weighted", (8,), 9)
            F = embedding(g, 3)
            for v in range(g.n):
                rep = spreading_bound_check(g, F, {v}, 0.2)
                assert rep.applies and rep.passed

    def test_large_diameter_does_not_apply(self):
        g = generate("cycle", (8,))
        rep = spreading_bound_check(g, embedding(g, 2), range(8), 0.3)
        assert not rep.applies and rep.passed

    def test_validation(self):
        g = generate("cycle", (5,))
        with pytest.raises(DomainError):
            spreading_bound_check(g, embedding(g, 1), {0}, 1.0)


class TestMerge:
    def test_merging_rules(self):
        g = generate("cycle", (8,))
        sp = ProjectiveSpace(embedding(g, 2), g.degrees)
        pts = sp.points.tolist()
        singles = [frozenset({v}) for v in pts]
        T = merge_heavy_clusters(sp, singles, 2)
        assert len(T) == 2
        assert all(sp.mass(t) >= sp.total_mass / 4 - 1e-12 for t in T)
        assert not (T[0] & T[1])

    def test_too_few_cores(self):
        g = generate("cycle", (8,))
        sp = ProjectiveSpace(embedding(g, 3), g.degrees)
        with pytest.raises(DomainError):
            merge_heavy_clusters(sp, [frozenset(sp.points.tolist())], 3)


class TestLocalization:
    def test_cutoff_shape(self):
        g = generate("random_connected_weighted", (8,), 3)
        F = embedding(g, 2)
        sp = ProjectiveSpace(F, g.degrees)
        T = {int(sp.points[0])}
        eps = 0.5
        psi = cutoff_localize(F, T, eps, sp)
        d = sp.distance_to_set(T)
        cols = np.asarray(F.columns)
        for i, v in enumerate(sp.points):
            if d[i] == 0:
                assert np.allclose(psi[v], cols[v])
            if d[i] >= eps:
                assert not psi[v].any()
        for u, v, _ in g.edges:
            assert np.linalg.norm(psi[u] + psi[v]) <= (1 + 2 / eps) * np.linalg.norm(cols[u] + cols[v]) + 1e-12
        with pytest.raises(DomainError):
            cutoff_localize(F, T, 2.5, sp)
        with pytest.raises(DomainError):
            cutoff_localize(F, [], 0.5, sp)

    def test_best_coordinate(self):
        g = generate("cycle", (4,))
        psi = np.array([[1.0, 1.0, 0.0], [-1.0, 1.0, 0.0], [1.0, 1.0, 0.0], [-1.0, 1.0, 0.0]])
        j, col = best_coordinate(g, psi)
        assert j == 0 and np.array_equal(col, psi[:, 0])
        with pytest.raises(DomainError):
            best_coordinate(g, np.zeros((4, 2)))
        assert best_coordinate(g, psi[:, 1])[0] == 0


class TestPipeline:
    def test_c4_k1(self):
        sb, cert = extract_sub_bipartition(generate("cycle", (4,)), 1)
        assert cert.pairs[0].phibar == 1.0 and cert.bound == pytest.approx(0.0, abs=1e-12)
        assert cert.passed

    def test_two_k2(self):
        k2 = generate("complete", (2,))
        g = disjoint_union(k2, k2)
        sb, cert = extract_sub_bipartition(g, 2, seed=3)
        assert [p.phibar for p in cert.pairs] == [1.0, 1.0]
        assert sb.k == 2 and cert.passed

    def test_c5_k1(self):
        sb, cert = extract_sub_bipartition(generate("cycle", (5,)), 1)
        assert cert.pairs[0].phibar >= 0.412

    @pytest.mark.parametrize("seed", range(6))
    def test_random_graphs(self, seed):
        g = generate("random_connected_weighted", (8,), seed)
        es = eigensystem(g)
        for k in (2, 3, 4):
            sb, cert = extract_sub_bipartition(g, k, seed=seed, eigen=es)
            assert cert.passed and sb.k == k
            sb.labels()  # validates disjointness
            assert min(p.phibar for p in cert.pairs) <= hbar_exact(g, k)[0] + 1e-12
            sup = cert.supports
            for i in range(k):
                for j in range(i + 1, k):
                    assert not (sup[i] & sup[j])
            sp = ProjectiveSpace(top_embedding(es, k), g.degrees)
            for T in cert.clusters:
                assert sp.mass(T) >= sp.total_mass / (2 * k) - 1e-12
            for (a, b), S in zip(sb.pairs, sup):
                assert (a | b) <= S

    def test_determinism(self):
        g = generate("random_connected_weighted", (8,), 7)
        assert extract_sub_bipartition(g, 3, seed=4)[0] == extract_sub_bipartition(g, 3, seed=4)[0]

    def test_attempt_exhaustion(self):
        g = generate("random_connected_weighted", (8,), 0)
        with pytest.raises(PipelineError) as info:
            extract_sub_bipartition(g, 4, max_partition_attempts=0)
        assert info.value.stats["attempts"] == 0

    def test_k_range(self):
        with pytest.raises(DomainError):
            extract_sub_bipartition(generate("cycle", (4,)), 5)
