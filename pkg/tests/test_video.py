import numpy as np
import pytest

from Core.video import (DataMatrix, VideoFrames, add_gaussian_noise, from_matrix,
                        mean_background_image, remove_motionless_frames, to_matrix,
                        unvectorize, vectorize)
from Core.video.frames import default_motionless_threshold, matrix_to_volume
from Utils.Exceptions import FrameShapeException, InsufficientMotionException, VideoException


def _column_video(columns):
    """每帧只有一个像素的视频，便于手算 ℓ1 差。"""
    values = np.asarray(columns, dtype=np.float64)[np.newaxis, :]
    return DataMatrix(values, (1, 1, values.shape[1]))


def test_to_matrix_is_column_major():
    video = VideoFrames(np.array([[[1.0, 2.0], [3.0, 4.0]]]))
    matrix = to_matrix(video)
    assert matrix.shape == (2, 2, 1)
    np.testing.assert_array_equal(matrix.values[:, 0], [1.0, 3.0, 2.0, 4.0])


def test_to_matrix_one_column_per_frame(rng):
    video = VideoFrames(rng.uniform(size=(7, 3, 5)))
    matrix = to_matrix(video)
    assert (matrix.rows, matrix.cols) == (15, 7)
    np.testing.assert_array_equal(matrix.values[:, 4], vectorize(video.frames[4]))


@pytest.mark.parametrize("shape", [(1, 1, 1), (2, 3, 4), (5, 1, 3), (4, 7, 2), (9, 6, 11)])
def test_matrix_round_trip_is_exact(rng, shape):
    n1, n2, m = shape
    video = VideoFrames(rng.uniform(size=(m, n1, n2)))
    assert from_matrix(to_matrix(video)) == video
    np.testing.assert_array_equal(matrix_to_volume(to_matrix(video)), video.frames)


def test_unvectorize_inverts_vectorize(rng):
    frame = rng.uniform(size=(4, 6))
    np.testing.assert_array_equal(unvectorize(vectorize(frame), frame.shape), frame)


def test_video_frames_reject_bad_shapes():
    with pytest.raises(FrameShapeException):
        VideoFrames(np.zeros((3, 4)))
    with pytest.raises(FrameShapeException):
        DataMatrix(np.zeros((5, 2)), (2, 2, 2))


def test_data_matrix_is_read_only():
    matrix = DataMatrix(np.zeros((4, 2)), (2, 2, 2))
    with pytest.raises(ValueError):
        matrix.values[0, 0] = 1.0


def test_identical_frames_leave_only_one_frame():
    matrix = _column_video([0.3, 0.3])
    with pytest.raises(InsufficientMotionException):
        remove_motionless_frames(matrix, 0.01)


def test_identical_frame_is_dropped():
    reduced, kept = remove_motionless_frames(_column_video([0.3, 0.3, 0.9]), 0.01)
    assert kept == [0, 2]
    np.testing.assert_array_equal(reduced.values, [[0.3, 0.9]])


def test_zero_threshold_keeps_everything():
    reduced, kept = remove_motionless_frames(_column_video([0.3, 0.3, 0.3]), 0.0)
    assert kept == [0, 1, 2]
    assert reduced.cols == 3


def test_motionless_gap_against_last_kept_frame():
    # 相邻差为 0.5、0.001、0.5
    matrix = _column_video([0.0, 0.5, 0.501, 1.001])
    reduced, kept = remove_motionless_frames(matrix, 0.01)
    assert kept == [0, 1, 3]
    assert reduced.shape == (1, 1, 3)


def test_motionless_removal_is_idempotent(rng):
    values = np.repeat(rng.uniform(size=(12, 1)), 6, axis=1)
    values[:, 2] += 0.5
    values[:, 4] += 0.001
    matrix = DataMatrix(values, (3, 4, 6))
    once, _ = remove_motionless_frames(matrix)
    twice, kept = remove_motionless_frames(once)
    assert twice == once
    assert kept == list(range(once.cols))


def test_motionless_removal_validates_input():
    with pytest.raises(VideoException):
        remove_motionless_frames(_column_video([0.1, 0.2]), -1.0)
    with pytest.raises(VideoException):
        remove_motionless_frames(_column_video([0.1]), 0.0)


def test_default_motionless_threshold_scales_with_pixels():
    assert default_motionless_threshold(DataMatrix(np.zeros((200, 2)), (10, 20, 2))) == pytest.approx(2.0)


def test_zero_noise_leaves_matrix_unchanged(rng):
    matrix = DataMatrix(rng.uniform(size=(6, 3)), (2, 3, 3))
    assert add_gaussian_noise(matrix, 0.0) == matrix


def test_noise_is_deterministic_under_seed(rng):
    matrix = DataMatrix(rng.uniform(size=(6, 3)), (2, 3, 3))
    first = add_gaussian_noise(matrix, 0.01, seed=7)
    assert first == add_gaussian_noise(matrix, 0.01, seed=7)
    assert first != add_gaussian_noise(matrix, 0.01, seed=8)


def test_noise_is_not_clipped():
    matrix = DataMatrix(np.ones((100, 10)), (10, 10, 10))
    noisy = add_gaussian_noise(matrix, 0.1, seed=0)
    assert noisy.values.max() > 1.0


def test_noise_has_zero_mean():
    sigma = 0.01
    matrix = DataMatrix(np.full((1000, 1000), 0.5), (1000, 1, 1000))
    noisy = add_gaussian_noise(matrix, sigma, seed=3)
    assert abs(float(np.mean(noisy.values - matrix.values))) < 4 * sigma / 1e3


def test_negative_noise_is_rejected():
    with pytest.raises(VideoException):
        add_gaussian_noise(DataMatrix(np.zeros((1, 2)), (1, 1, 2)), -0.1)


def test_mean_background_of_identical_columns(rng):
    column = rng.uniform(size=12)
    matrix = DataMatrix(np.tile(column[:, np.newaxis], (1, 5)), (3, 4, 5))
    np.testing.assert_allclose(mean_background_image(matrix), unvectorize(column, (3, 4)), atol=1e-15)


def test_mean_background_of_two_columns(rng):
    a, b = rng.uniform(size=6), rng.uniform(size=6)
    matrix = DataMatrix(np.stack([a, b], axis=1), (2, 3, 2))
    np.testing.assert_allclose(mean_background_image(matrix), unvectorize((a + b) / 2, (2, 3)))


def test_mean_background_commutes_with_column_permutation(rng):
    matrix = DataMatrix(rng.uniform(size=(20, 9)), (4, 5, 9))
    shuffled = matrix.select_columns(list(rng.permutation(9)))
    np.testing.assert_allclose(mean_background_image(shuffled), mean_background_image(matrix), atol=1e-14)
