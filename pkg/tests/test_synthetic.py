import numpy as np
import pytest

from Core.video import (BackgroundKind, ObjectKind, SyntheticSpec, default_benchmark_spec,
                        load_synthetic_spec, parse_synthetic_spec, synthesize, write_frame)
from Core.video.synthetic import linear_trajectory, object_mask
from Utils.Exceptions import FileNotFoundException, SyntheticSpecException


def test_constant_background_without_object():
    spec = SyntheticSpec(height=6, width=7, trajectory=((3, 3),) * 4,
                         background=BackgroundKind.CONSTANT, background_level=0.5, object_size=0)
    video, background, masks = synthesize(spec)
    np.testing.assert_array_equal(video.frames, np.full((4, 6, 7), 0.5))
    np.testing.assert_array_equal(background, np.full((6, 7), 0.5))
    assert not masks.any()


def test_single_pixel_object():
    spec = SyntheticSpec(height=5, width=5, trajectory=((1, 3), (2, 2)), object_size=1,
                         object_intensity=0.9)
    video, _, masks = synthesize(spec)
    assert masks[0].sum() == 1 and masks[0][1, 3]
    assert masks[1].sum() == 1 and masks[1][2, 2]
    assert video.frames[0, 1, 3] == 0.9


def test_moving_square_covers_sixty_four_pixels():
    spec = SyntheticSpec(height=30, width=60, trajectory=linear_trajectory(20, (15, 6), (0, 2)),
                         background=BackgroundKind.LINEAR_GRADIENT, object_size=8)
    video, background, masks = synthesize(spec)
    assert video.count == 20
    for index in range(1, 19):
        assert masks[index].sum() == 64
    np.testing.assert_array_equal(video.frames[5][masks[5]], np.full(64, 0.8))
    np.testing.assert_array_equal(video.frames[5][~masks[5]], background[~masks[5]])


def test_square_is_clipped_at_the_border():
    spec = SyntheticSpec(height=10, width=10, trajectory=((0, 0),), object_size=4)
    mask = object_mask(spec, (0, 0))
    assert mask.sum() == 4
    assert mask[:2, :2].all()


def test_disk_mask():
    spec = SyntheticSpec(height=11, width=11, trajectory=((5, 5),), object_kind=ObjectKind.DISK,
                         object_size=4)
    mask = object_mask(spec, (5, 5))
    # 到中心距离不超过 2 的格点
    assert mask.sum() == 13
    assert mask[5, 7] and not mask[6, 7]


def test_noisy_synthesis_is_reproducible():
    spec = default_benchmark_spec(noise_sigma=0.01)
    first, _, masks_first = synthesize(spec, seed=4)
    second, _, masks_second = synthesize(spec, seed=4)
    assert first == second
    np.testing.assert_array_equal(masks_first, masks_second)
    assert first != synthesize(spec, seed=5)[0]


def test_default_benchmark_layout():
    spec = default_benchmark_spec()
    video, background, masks = synthesize(spec)
    assert (video.count, video.height, video.width) == (30, 40, 50)
    assert background[0, 0] == pytest.approx(0.2)
    assert background[0, -1] == pytest.approx(0.4)
    assert masks.sum(axis=(1, 2)).min() == 64


def test_empty_trajectory_is_rejected():
    with pytest.raises(SyntheticSpecException):
        synthesize(SyntheticSpec(height=4, width=4, trajectory=()))


def test_object_outside_frame_is_rejected():
    with pytest.raises(SyntheticSpecException):
        synthesize(SyntheticSpec(height=10, width=10, trajectory=((3, 3), (3, 40))))


def test_intensity_out_of_range_is_rejected():
    with pytest.raises(SyntheticSpecException):
        SyntheticSpec(height=4, width=4, trajectory=((2, 2),), object_intensity=1.5).validate()


def test_parse_spec_text():
    spec = parse_synthetic_spec(
        "height = 12\nwidth = 16  # narrow\nframes = 5\nobject = disk\nobject_size = 3\n"
        "start_row = 6\nstart_col = 3\nstep_col = 2\nbackground = constant\nbackground_level = 0.25\n"
    )
    assert (spec.height, spec.width, spec.frames) == (12, 16, 5)
    assert spec.object_kind is ObjectKind.DISK
    assert spec.background is BackgroundKind.CONSTANT
    assert spec.trajectory[-1] == (6.0, 11.0)


def test_parse_explicit_trajectory():
    spec = parse_synthetic_spec("height = 10\nwidth = 10\nobject_size = 2\ntrajectory = 2,2; 3,4; 5,5")
    assert spec.trajectory == ((2.0, 2.0), (3.0, 4.0), (5.0, 5.0))


def test_parse_rejects_unknown_keys_with_line_number():
    with pytest.raises(SyntheticSpecException, match="spec:2"):
        parse_synthetic_spec("height = 10\ncolour = red\n", source="spec")


def test_image_background_resolved_relative_to_spec(tmp_path):
    write_frame(str(tmp_path / "bg.pgm"), np.full((10, 12), 0.4))
    path = tmp_path / "scene.spec"
    path.write_text("height = 10\nwidth = 12\nframes = 3\nobject_size = 2\nstart_row = 5\nstart_col = 2\n"
                    "background = image-file\nbackground_image = bg.pgm\n", encoding="utf-8")
    spec = load_synthetic_spec(str(path))
    _, background, _ = synthesize(spec)
    np.testing.assert_allclose(background, np.full((10, 12), 102 / 255))


def test_missing_spec_file(tmp_path):
    with pytest.raises(FileNotFoundException):
        load_synthetic_spec(str(tmp_path / "none.spec"))
