import math

import numpy as np
import pytest
from pydantic import ValidationError

from odic.exceptions import ArgumentError, DegenerateInputError
from odic.losses import LossReport, bits_per_pixel, fusion_loss, loss_report, rd_loss, sal_mse
from odic.rasters import ErpImage, FixationMap, SaliencyMap
from odic.saliency import ground_truth_weights


def _pair(rng: np.random.Generator, height: int = 8, width: int = 8) -> tuple[ErpImage, ErpImage]:
    x = ErpImage(samples=rng.uniform(0.0, 255.0, size=(3, height, width)))
    x_hat = ErpImage(samples=rng.uniform(0.0, 255.0, size=(3, height, width)))

    return x, x_hat


def test__losses__constant_saliency_gives_plain_mse(rng: np.random.Generator) -> None:
    x, x_hat = _pair(rng)

    value = sal_mse(x, x_hat, SaliencyMap(values=np.full((8, 8), 0.25)))

    assert value == pytest.approx(np.mean((x.samples - x_hat.samples) ** 2), rel=1e-12)


@pytest.mark.parametrize("seed", range(100))
def test__losses__constant_saliency_gives_plain_mse_on_random_pairs(seed: int) -> None:
    rng = np.random.default_rng(seed)
    x, x_hat = _pair(rng, height=16, width=32)
    constant = rng.uniform(0.01, 10.0)

    value = sal_mse(x, x_hat, SaliencyMap(values=np.full((16, 32), constant)))

    assert value == pytest.approx(np.mean((x.samples - x_hat.samples) ** 2), rel=1e-12)


@pytest.mark.parametrize("seed", range(10))
@pytest.mark.parametrize("scale", [1e-3, 1.0, 1e3])
def test__losses__sal_mse_ignores_saliency_scale(seed: int, scale: float) -> None:
    rng = np.random.default_rng(seed)
    x, x_hat = _pair(rng, height=16, width=32)
    s = rng.uniform(size=(16, 32))

    scaled = sal_mse(x, x_hat, SaliencyMap(values=scale * s))

    assert scaled == pytest.approx(sal_mse(x, x_hat, SaliencyMap(values=s)), rel=1e-12)


def test__losses__sal_mse_of_identical_images(rng: np.random.Generator) -> None:
    x, _ = _pair(rng, height=16, width=32)

    assert sal_mse(x, x, SaliencyMap(values=rng.uniform(size=(16, 32)))) == 0.0


def test__losses__single_pixel_saliency(rng: np.random.Generator) -> None:
    x, x_hat = _pair(rng)
    weights = np.zeros((8, 8))
    weights[3, 5] = 2.0

    value = sal_mse(x, x_hat, SaliencyMap(values=weights))

    assert value == pytest.approx(np.mean((x.samples[:, 3, 5] - x_hat.samples[:, 3, 5]) ** 2), rel=1e-12)


def test__losses__sal_mse_matches_direct_sum(rng: np.random.Generator) -> None:
    x, x_hat = _pair(rng)
    s = rng.uniform(size=(8, 8))

    expected = 0.0
    for i in range(8):
        for j in range(8):
            error = sum((x.samples[c, i, j] - x_hat.samples[c, i, j]) ** 2 for c in range(3)) / 3
            expected += s[i, j] * error

    assert sal_mse(x, x_hat, SaliencyMap(values=s)) == pytest.approx(expected / s.sum(), rel=1e-12)


def test__losses__sal_mse_errors(rng: np.random.Generator) -> None:
    x, x_hat = _pair(rng)

    with pytest.raises(DegenerateInputError):
        sal_mse(x, x_hat, SaliencyMap(values=np.zeros((8, 8))))

    with pytest.raises(ArgumentError):
        sal_mse(x, x_hat, SaliencyMap(values=np.ones((8, 4))))


@pytest.mark.parametrize(
    "distortion,rate,lambda_,expected",
    [
        (0.0, 0.3, 0.18, 0.3),
        (100.0, 0.1, 0.0018, 0.28),
    ],
)
def test__losses__rd_loss(distortion: float, rate: float, lambda_: float, expected: float) -> None:
    assert rd_loss(distortion, rate, lambda_) == pytest.approx(expected, rel=1e-12)


@pytest.mark.parametrize(
    "args",
    [
        (math.nan, 0.1, 0.1),
        (1.0, math.inf, 0.1),
        (1.0, 0.1, 0.0),
    ],
)
def test__losses__rd_loss_rejects_bad_terms(args: tuple) -> None:
    with pytest.raises(ArgumentError):
        rd_loss(*args)


@pytest.mark.parametrize(
    "length,width,height,expected",
    [
        (1, 4, 2, 1.0),
        (38011, 2048, 1024, 38011 * 8 / (2048 * 1024)),
        (0, 16, 8, 0.0),
    ],
)
def test__losses__bits_per_pixel(length: int, width: int, height: int, expected: float) -> None:
    assert bits_per_pixel(length, width, height) == expected


def test__losses__bits_per_pixel_of_published_point() -> None:
    assert bits_per_pixel(38011, 2048, 1024) == pytest.approx(0.145, abs=5e-4)


def test__losses__bits_per_pixel_zero_area() -> None:
    with pytest.raises(ArgumentError):
        bits_per_pixel(10, 0, 8)


def test__losses__fusion_of_identical_maps(rng: np.random.Generator) -> None:
    s = SaliencyMap(values=rng.uniform(size=(8, 16)))

    kld_value, cc_value, fusion = fusion_loss(s, s)

    assert kld_value == pytest.approx(0.0, abs=1e-12)
    assert cc_value == pytest.approx(1.0, abs=1e-12)
    assert fusion == pytest.approx(-1.0, abs=1e-12)


def test__losses__fusion_from_fixations(rng: np.random.Generator) -> None:
    mask = np.zeros((16, 32), dtype=bool)
    mask[8, 10] = mask[7, 20] = True
    pred = SaliencyMap(values=rng.uniform(size=(16, 32)))

    kld_value, cc_value, fusion = fusion_loss(pred, fixations=FixationMap(mask=mask))

    assert fusion == kld_value - cc_value

    with pytest.raises(ArgumentError):
        fusion_loss(pred)


def test__losses__uniform_maps_have_undefined_cc() -> None:
    s = SaliencyMap(values=np.ones((4, 8)))

    with pytest.raises(DegenerateInputError):
        fusion_loss(s, s)


def test__losses__report_is_consistent(rng: np.random.Generator) -> None:
    x, x_hat = _pair(rng)
    pred = SaliencyMap(values=rng.uniform(size=(8, 8)))
    gt = SaliencyMap(values=rng.uniform(size=(8, 8)))

    report = loss_report(x, x_hat, ground_truth_weights(gt), 40, 0.0932, pred=pred, gt=gt)

    assert report.bpp == 5.0
    assert report.total == pytest.approx(0.0932 * report.sal_mse + 5.0, rel=1e-12)
    assert report.fusion == pytest.approx(report.kld - report.cc)
    assert report.model_dump(by_alias=True)["lambda"] == 0.0932


def test__losses__report_needs_both_saliency_maps(rng: np.random.Generator) -> None:
    x, x_hat = _pair(rng)

    with pytest.raises(ArgumentError):
        loss_report(x, x_hat, SaliencyMap(values=np.ones((8, 8))), 10, 0.1, pred=SaliencyMap(values=np.ones((8, 8))))


def test__losses__report_rejects_inconsistent_total() -> None:
    with pytest.raises(ValidationError):
        LossReport(sal_mse=1.0, bpp=0.5, lambda_=0.1, total=2.0)
