import numpy as np
import pytest

from odic.dataset import (
    CropMode,
    CropShape,
    augment_pair,
    derive_seed,
    hflip,
    random_crop,
    resize,
    resize_saliency,
    rotate_longitude,
    vmirror,
)
from odic.exceptions import ArgumentError
from odic.metrics import ws_psnr
from odic.rasters import ErpImage, SaliencyMap
from tests.conftest import band_limited_erp


def _indexed_pair(width: int, height: int) -> tuple[ErpImage, SaliencyMap]:
    """
    Rasters whose value encodes the pixel position, so crops can be checked cell by cell
    """
    index = np.arange(width * height, dtype=np.float64).reshape(height, width)

    return ErpImage(samples=index[np.newaxis], max_value=float(width * height)), SaliencyMap(values=index)


@pytest.mark.parametrize("operation", [hflip, vmirror])
def test__augment__flips_are_involutions(erp_image: ErpImage, operation) -> None:
    flipped = operation(erp_image)

    assert not np.array_equal(flipped.samples, erp_image.samples)
    np.testing.assert_array_equal(operation(flipped).samples, erp_image.samples)


@pytest.mark.parametrize("operation", [hflip, vmirror, lambda img: rotate_longitude(img, 11)])
def test__augment__geometry_keeps_ws_psnr(rng: np.random.Generator, operation) -> None:
    ref = band_limited_erp(64, 32)
    dist = ref.with_samples(np.clip(ref.samples + rng.normal(0.0, 6.0, size=ref.samples.shape), 0.0, 255.0))

    before = ws_psnr(ref, dist).value
    after = ws_psnr(operation(ref), operation(dist)).value

    assert after == pytest.approx(before, rel=1e-12)


def test__augment__rotation_wraps_around() -> None:
    img, _ = _indexed_pair(8, 4)

    rotated = rotate_longitude(img, 3)

    np.testing.assert_array_equal(rotated.samples[0, :, 3], img.samples[0, :, 0])
    np.testing.assert_array_equal(rotate_longitude(rotated, 5).samples, img.samples)


def test__augment__crop_is_deterministic_per_seed() -> None:
    img, saliency = _indexed_pair(64, 32)

    first = random_crop(img, saliency, (16, 8), 1234)
    second = random_crop(img, saliency, (16, 8), 1234)

    assert (first.x0, first.y0) == (second.x0, second.y0)
    np.testing.assert_array_equal(first.image.samples, second.image.samples)


def test__augment__crop_keeps_image_and_saliency_aligned() -> None:
    img, saliency = _indexed_pair(64, 32)

    for seed in range(20):
        crop = random_crop(img, saliency, (24, 10), seed)

        assert crop.image.samples.shape == (1, 10, 24)
        np.testing.assert_array_equal(crop.image.samples[0], crop.saliency.values)
        assert crop.saliency.values[0, 0] == crop.y0 * 64 + crop.x0
        assert 0 <= crop.y0 <= 32 - 10


def test__augment__crop_wraps_across_the_seam() -> None:
    img, saliency = _indexed_pair(64, 32)
    crops = [random_crop(img, saliency, (24, 10), seed) for seed in range(200)]
    crop = max(crops, key=lambda c: c.x0)

    assert crop.x0 > 64 - 24

    columns = (crop.x0 + np.arange(24)) % 64

    np.testing.assert_array_equal(crop.saliency.values[0], crop.y0 * 64 + columns)


def test__augment__full_size_crop_is_identity() -> None:
    img, saliency = _indexed_pair(64, 32)

    crop = random_crop(img, saliency, (64, 32), 7)

    assert (crop.x0, crop.y0) == (0, 0)
    np.testing.assert_array_equal(crop.image.samples, img.samples)


def test__augment__crop_shapes() -> None:
    assert (CropShape.LANDSCAPE.width, CropShape.LANDSCAPE.height) == (1024, 512)
    assert (CropShape.PORTRAIT.width, CropShape.PORTRAIT.height) == (512, 1024)


@pytest.mark.parametrize("shape", [(65, 8), (8, 33), (0, 4)])
def test__augment__invalid_crops(shape: tuple[int, int]) -> None:
    img, saliency = _indexed_pair(64, 32)

    with pytest.raises(ArgumentError):
        random_crop(img, saliency, shape, 0)


def test__augment__crop_needs_saliency() -> None:
    img, _ = _indexed_pair(64, 32)

    with pytest.raises(ArgumentError):
        random_crop(img, None, (8, 8), 0)


def test__augment__derived_seeds_are_independent_of_order() -> None:
    first = [np.random.default_rng(derive_seed(42, index)).integers(0, 10**9) for index in range(5)]
    second = [np.random.default_rng(derive_seed(42, index)).integers(0, 10**9) for index in reversed(range(5))]

    assert first == second[::-1]
    assert len(set(first)) == 5


def test__augment__resize_to_same_size_is_identity(erp_image: ErpImage) -> None:
    np.testing.assert_array_equal(resize(erp_image, 64, 32).samples, erp_image.samples)


@pytest.mark.parametrize("size", [(32, 16), (128, 64), (50, 20)])
def test__augment__resize_keeps_constants(size: tuple[int, int]) -> None:
    img = ErpImage(samples=np.full((3, 32, 64), 42.0))

    resized = resize(img, *size)

    assert resized.samples.shape == (3, size[1], size[0])
    np.testing.assert_allclose(resized.samples, 42.0, rtol=1e-12)


def test__augment__downscaled_checkerboard_averages() -> None:
    board = (np.indices((16, 32)).sum(axis=0) % 2).astype(np.float64)

    resized = resize_saliency(SaliencyMap(values=board), 8, 4)

    np.testing.assert_allclose(resized.values, 0.5, rtol=1e-12)


def test__augment__upscaling_wraps_in_longitude() -> None:
    values = np.zeros((2, 4))
    values[:, 0] = 1.0

    resized = resize_saliency(SaliencyMap(values=values), 8, 2).values

    # the first output column sits between the last and the first source column
    assert resized[0, 0] == pytest.approx(0.75)
    assert resized[0, -1] == pytest.approx(0.25)


def test__augment__pair_is_reproducible() -> None:
    img = band_limited_erp(1024, 1024)
    saliency = SaliencyMap(values=np.abs(img.samples[0]))

    first = augment_pair(img, saliency, 5, crop=CropMode.MIXED)
    second = augment_pair(img, saliency, 5, crop=CropMode.MIXED)

    assert (first.crop_offset, first.flipped, first.mirrored) == (second.crop_offset, second.flipped, second.mirrored)
    np.testing.assert_array_equal(first.image.samples, second.image.samples)
    assert first.image.width in (512, 1024)


def test__augment__pair_flips_both_rasters() -> None:
    img, saliency = _indexed_pair(16, 8)

    pair = augment_pair(img, saliency, 0, flip_prob=1.0)

    assert pair.flipped and pair.mirrored
    assert pair.crop_offset is None
    np.testing.assert_array_equal(pair.image.samples[0], pair.saliency.values)
    assert pair.saliency.values[0, 0] == 16 * 8 - 1


def test__augment__flip_draws_do_not_depend_on_crop_mode() -> None:
    img = band_limited_erp(1024, 1024)
    saliency = SaliencyMap(values=np.ones((1024, 1024)))

    for seed in range(5):
        plain = augment_pair(img, saliency, seed)
        cropped = augment_pair(img, saliency, seed, crop=CropMode.PORTRAIT)

        assert (plain.flipped, plain.mirrored) == (cropped.flipped, cropped.mirrored)


def test__augment__invalid_flip_probability() -> None:
    img, saliency = _indexed_pair(16, 8)

    with pytest.raises(ArgumentError):
        augment_pair(img, saliency, 0, flip_prob=1.5)
