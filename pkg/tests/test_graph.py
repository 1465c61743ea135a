import math

import numpy as np
import pytest
import scipy.sparse as sp

from Core.graph import (GraphParams, KernelKind, NeighborhoodPolicy, SimilarityKernel,
                        build_laplacians, cosine_similarity, eigenvalue_range, export_triplets,
                        import_triplets, mirror_index, neighbor_counts, neighbor_pairs,
                        normalized_laplacian, spatial_adjacency, summarize, temporal_adjacency)
from Core.video import DataMatrix
from Utils.Exceptions import (GraphException, IsolatedVertexException, KernelParameterException,
                              MatrixFormatException, NeighborhoodException, ZeroNormException)

from conftest import random_matrix

EXPONENTIAL = SimilarityKernel(KernelKind.EXPONENTIAL, 1.0)


def _constant_matrix(height, width, frames, level=0.5):
    return DataMatrix(np.full((height * width, frames), level), (height, width, frames))


def _is_exactly_symmetric(matrix):
    coo = sp.coo_matrix(matrix)
    forward = sorted(zip(coo.row.tolist(), coo.col.tolist(), coo.data.tolist()))
    backward = sorted(zip(coo.col.tolist(), coo.row.tolist(), coo.data.tolist()))
    return forward == backward


def test_mirror_index_reflects_with_edge_repeat():
    np.testing.assert_array_equal(mirror_index(np.array([-2, -1, 0, 4, 5, 6]), 5), [1, 0, 0, 4, 4, 3])


def test_neighbor_pairs_drop_self_and_duplicates():
    pairs = neighbor_pairs(5, 2)
    assert {tuple(p) for p in pairs.tolist()} == {(0, 1), (0, 2), (1, 2), (1, 3), (2, 3), (2, 4), (3, 4)}
    assert neighbor_pairs(1, 2).shape == (0, 2)


def test_temporal_row_has_four_neighbors():
    adjacency = temporal_adjacency(_constant_matrix(2, 2, 5), EXPONENTIAL)
    counts = neighbor_counts(adjacency)
    assert counts[2] == 4
    assert counts.max() <= 4
    assert adjacency.diagonal().sum() == 0


def test_identical_frames_have_unit_similarity():
    adjacency = temporal_adjacency(_constant_matrix(3, 3, 4), EXPONENTIAL)
    np.testing.assert_array_equal(adjacency.data, np.ones(adjacency.nnz))


def test_temporal_similarity_at_distance_h():
    matrix = DataMatrix(np.array([[0.0, 1.0]]), (1, 1, 2))
    adjacency = temporal_adjacency(matrix, EXPONENTIAL)
    assert adjacency[0, 1] == pytest.approx(math.exp(-1))
    assert adjacency[1, 0] == adjacency[0, 1]


def test_temporal_graph_needs_two_frames():
    with pytest.raises(GraphException):
        temporal_adjacency(_constant_matrix(2, 2, 1), EXPONENTIAL)


def test_constant_video_spatial_similarities_are_one():
    adjacency = spatial_adjacency(_constant_matrix(5, 6, 3), EXPONENTIAL)
    np.testing.assert_array_equal(adjacency.data, np.ones(adjacency.nnz))
    assert neighbor_counts(adjacency).max() <= 4


def test_spatial_similarity_at_patch_distance_h():
    frame = np.array([[0.0, 1.0], [0.0, 1.0]])
    matrix = DataMatrix(frame.reshape(-1, 1, order="F"), (2, 2, 1))
    adjacency = spatial_adjacency(matrix, EXPONENTIAL, NeighborhoodPolicy(half_width=2, patch_size=1))
    # 像素 (0,0) 与 (0,1) 的下标为 0 与 2
    assert adjacency[0, 2] == pytest.approx(math.exp(-1))
    assert adjacency[0, 1] == pytest.approx(1.0)


def test_corner_pixel_of_three_by_three_image():
    adjacency = spatial_adjacency(_constant_matrix(3, 3, 2), EXPONENTIAL)
    counts = neighbor_counts(adjacency)
    assert counts[0] == 2
    assert counts[4] == 4
    assert counts.max() <= 4


def test_spatial_weights_match_mirrored_patches(rng):
    n1, n2, m, patch, h = 5, 4, 3, 3, 2.0
    matrix = random_matrix(rng, n1, n2, m)
    volume = matrix.values.reshape(n1, n2, m, order="F").transpose(2, 0, 1)
    padded = np.pad(volume, ((0, 0), (1, 1), (1, 1)), mode="symmetric")
    adjacency = spatial_adjacency(matrix, SimilarityKernel(KernelKind.EXPONENTIAL, h),
                                  NeighborhoodPolicy(2, patch)).toarray()

    def patch_at(r, c):
        return padded[:, r:r + patch, c:c + patch]

    for r in range(n1):
        for c in range(n2):
            for dr, dc in ((1, 0), (0, 1)):
                r2, c2 = r + dr, c + dc
                if r2 >= n1 or c2 >= n2:
                    continue
                expected = math.exp(-np.sum((patch_at(r, c) - patch_at(r2, c2)) ** 2) / h ** 2)
                assert adjacency[r + c * n1, r2 + c2 * n1] == pytest.approx(expected, rel=1e-12)


def test_larger_half_width_widens_the_spatial_cross():
    adjacency = spatial_adjacency(_constant_matrix(9, 9, 2), EXPONENTIAL, NeighborhoodPolicy(4, 3))
    assert neighbor_counts(adjacency)[4 + 4 * 9] == 8


def test_patch_larger_than_frame_is_rejected():
    with pytest.raises(NeighborhoodException):
        spatial_adjacency(_constant_matrix(2, 5, 2), EXPONENTIAL, NeighborhoodPolicy(2, 3))


def test_policy_validation():
    with pytest.raises(NeighborhoodException):
        NeighborhoodPolicy(2, 4)
    with pytest.raises(NeighborhoodException):
        NeighborhoodPolicy(0, 3)


def test_nonpositive_h_is_rejected():
    with pytest.raises(KernelParameterException):
        SimilarityKernel(KernelKind.EXPONENTIAL, 0.0)
    assert SimilarityKernel(KernelKind.COSINE, 0.0).kind is KernelKind.COSINE


def test_exponential_kernel_is_monotone(rng):
    distances = np.sort(rng.uniform(0, 5, size=100))
    values = EXPONENTIAL.from_squared_distance(distances)
    assert np.all(np.diff(values) <= 0)
    assert np.all((values > 0) & (values <= 1))


def test_cosine_similarity_examples():
    u = np.array([1.0, 2.0, 3.0])
    assert cosine_similarity(u, u) == pytest.approx(1.0)
    assert cosine_similarity([1.0, 0.0], [0.0, 1.0]) == 0.0
    assert cosine_similarity(u, -u) == 0.0
    assert cosine_similarity(np.ones((2, 2)), np.ones(4)) == pytest.approx(1.0)
    with pytest.raises(ZeroNormException):
        cosine_similarity([0.0, 0.0], [1.0, 1.0])


def test_cosine_adjacency_rejects_blank_frames():
    values = np.zeros((4, 3))
    values[:, 0] = 1.0
    with pytest.raises(ZeroNormException):
        temporal_adjacency(DataMatrix(values, (2, 2, 3)), SimilarityKernel(KernelKind.COSINE))


def test_cosine_adjacency_stays_in_unit_interval(rng):
    matrix = random_matrix(rng, 4, 5, 4)
    kernel = SimilarityKernel(KernelKind.COSINE)
    for adjacency in (temporal_adjacency(matrix, kernel), spatial_adjacency(matrix, kernel)):
        assert np.all((adjacency.data >= 0) & (adjacency.data <= 1))
        assert _is_exactly_symmetric(adjacency)


def test_two_node_laplacian_is_independent_of_weight():
    for weight in (0.1, 1.0, 7.5):
        laplacian = normalized_laplacian(sp.csr_matrix([[0.0, weight], [weight, 0.0]]))
        np.testing.assert_allclose(laplacian.to_dense(), [[1.0, -1.0], [-1.0, 1.0]])


def test_star_graph_spectrum():
    adjacency = sp.csr_matrix([[0.0, 1.0, 1.0], [1.0, 0.0, 0.0], [1.0, 0.0, 0.0]])
    laplacian = normalized_laplacian(adjacency)
    np.testing.assert_allclose(np.linalg.eigvalsh(laplacian.to_dense()), [0.0, 1.0, 2.0], atol=1e-8)
    eig_min, eig_max = eigenvalue_range(laplacian)
    assert eig_min == pytest.approx(0.0, abs=1e-6)
    assert eig_max == pytest.approx(2.0, abs=1e-6)


def test_isolated_vertex_is_named():
    adjacency = sp.csr_matrix([[0.0, 1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 0.0]])
    with pytest.raises(IsolatedVertexException) as info:
        normalized_laplacian(adjacency)
    assert info.value.details["vertex"] == 2
    assert "顶点 2" in str(info.value)


def test_invalid_adjacency_is_rejected():
    with pytest.raises(GraphException):
        normalized_laplacian(sp.csr_matrix([[0.0, 1.0], [2.0, 0.0]]))
    with pytest.raises(GraphException):
        normalized_laplacian(sp.csr_matrix([[0.0, -1.0], [-1.0, 0.0]]))
    with pytest.raises(GraphException):
        normalized_laplacian(sp.csr_matrix(np.ones((2, 3))))


def test_laplacian_spectral_properties_on_random_videos(rng):
    for _ in range(100):
        n1, n2, m = rng.integers(3, 9), rng.integers(3, 9), rng.integers(2, 9)
        matrix = random_matrix(rng, int(n1), int(n2), int(m))
        phi_s, phi_t = build_laplacians(matrix, GraphParams(h_spatial=3.0, h_temporal=3.0))
        for laplacian in (phi_s, phi_t):
            assert laplacian.is_symmetric()
            assert _is_exactly_symmetric(laplacian.matrix)
            np.testing.assert_allclose(laplacian.matrix.diagonal(), 1.0)
            assert np.max(np.abs(laplacian.matrix @ laplacian.null_vector())) < 1e-10
            for x in rng.standard_normal((200, laplacian.dimension)):
                assert laplacian.quadratic_form(x) >= -1e-10
            dense = laplacian.to_dense()
            if laplacian.dimension <= 64:
                eigenvalues = np.linalg.eigvalsh(dense)
                assert eigenvalues.min() >= -1e-8
                assert eigenvalues.max() <= 2 + 1e-8


def test_quadratic_form_matches_dense(rng):
    matrix = random_matrix(rng, 6, 7, 4)
    phi_s, _ = build_laplacians(matrix)
    x = rng.standard_normal(phi_s.dimension)
    assert phi_s.quadratic_form(x) == pytest.approx(float(x @ phi_s.to_dense() @ x), abs=1e-10)


def test_triplet_round_trip(tmp_path, rng):
    phi_s, phi_t = build_laplacians(random_matrix(rng, 4, 4, 5))
    for name, laplacian in (("s", phi_s), ("t", phi_t)):
        path = tmp_path / f"phi_{name}.dgl"
        export_triplets(str(path), laplacian.matrix)
        header = path.read_text(encoding="utf-8").splitlines()[0]
        assert header == f"DGL1 {laplacian.dimension} {laplacian.nnz}"
        restored = import_triplets(str(path))
        assert (restored != laplacian.matrix).nnz == 0


def test_triplet_import_rejects_bad_files(tmp_path):
    bad = tmp_path / "bad.dgl"
    bad.write_text("XYZ 2 1\n0 0 1.0\n", encoding="utf-8")
    with pytest.raises(MatrixFormatException):
        import_triplets(str(bad))
    short = tmp_path / "short.dgl"
    short.write_text("DGL1 2 3\n0 0 1.0\n", encoding="utf-8")
    with pytest.raises(MatrixFormatException):
        import_triplets(str(short))


def test_malformed_triplet_keeps_parse_error_as_cause(tmp_path):
    path = tmp_path / "garbled.dgl"
    path.write_text("DGL1 2 1\n0 zero 1.0\n", encoding="utf-8")
    with pytest.raises(MatrixFormatException) as info:
        import_triplets(str(path))
    assert isinstance(info.value.__cause__, ValueError)
    assert info.value.details["path"] == str(path)


def test_build_laplacians_dimensions():
    phi_s, phi_t = build_laplacians(_constant_matrix(4, 6, 5))
    assert phi_s.dimension == 24
    assert phi_t.dimension == 5


def test_summary_of_constant_video():
    _, phi_t = build_laplacians(_constant_matrix(4, 4, 5))
    summary = summarize("phi_t", phi_t)
    assert summary["dimension"] == 5
    assert summary["min_similarity"] == 1.0
    assert summary["max_similarity"] == 1.0
    assert summary["min_degree"] == 2.0
    assert summary["max_degree"] == 4.0
    assert summary["neighbors_per_row"] == [2, 3, 4, 3, 2]
