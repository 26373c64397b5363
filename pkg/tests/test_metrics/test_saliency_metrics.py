import math

import numpy as np
import pytest

from odic.config import KldDirection, SaliencyMetricsConfig
from odic.exceptions import DegenerateInputError
from odic.metrics import auc_judd, cc, kld, kld_configured, nss, roc_judd
from odic.rasters import FixationMap, SaliencyMap
from odic.saliency import Hotspot, equator_prior_saliency


def _random_fixations(rng: np.random.Generator, shape: tuple[int, int], count: int) -> FixationMap:
    mask = np.zeros(shape, dtype=bool)
    mask.flat[rng.choice(mask.size, size=count, replace=False)] = True

    return FixationMap(mask=mask)


def _brute_force_auc(pred: np.ndarray, mask: np.ndarray) -> float:
    fixated = pred[mask]
    others = pred[~mask]
    points = [(0.0, 0.0)]

    for threshold in sorted(set(fixated.tolist()), reverse=True):
        tpr = sum(1 for v in fixated if v >= threshold) / fixated.size
        fpr = sum(1 for v in others if v >= threshold) / others.size
        points.append((fpr, tpr))

    points.append((1.0, 1.0))

    return sum((x1 - x0) * (y0 + y1) / 2 for (x0, y0), (x1, y1) in zip(points, points[1:]))


def test__saliency_metrics__cc_of_itself(rng: np.random.Generator) -> None:
    s = SaliencyMap(values=rng.uniform(size=(8, 16)))

    assert cc(s, s) == pytest.approx(1.0, abs=1e-12)
    assert cc(s, s.with_values(3.0 - s.values)) == pytest.approx(-1.0, abs=1e-12)


def test__saliency_metrics__cc_matches_pearson(rng: np.random.Generator) -> None:
    a = rng.uniform(size=(8, 16))
    b = rng.uniform(size=(8, 16))

    expected = np.corrcoef(a.ravel(), b.ravel())[0, 1]

    assert cc(SaliencyMap(values=a), SaliencyMap(values=b)) == pytest.approx(expected, rel=1e-12)


def test__saliency_metrics__cc_is_affine_invariant(rng: np.random.Generator) -> None:
    a = SaliencyMap(values=rng.uniform(size=(8, 16)))
    b = SaliencyMap(values=rng.uniform(size=(8, 16)))

    assert cc(a.with_values(4.0 * a.values + 2.0), b) == pytest.approx(cc(a, b), rel=1e-12)


def test__saliency_metrics__cc_of_constant_map(rng: np.random.Generator) -> None:
    with pytest.raises(DegenerateInputError):
        cc(SaliencyMap(values=np.ones((4, 4))), SaliencyMap(values=rng.uniform(size=(4, 4))))


def test__saliency_metrics__kld_of_itself(rng: np.random.Generator) -> None:
    s = SaliencyMap(values=rng.uniform(size=(8, 16)))

    assert kld(s, s) <= 1e-9
    assert kld(SaliencyMap(values=np.ones((4, 4))), SaliencyMap(values=np.ones((4, 4)))) == 0.0


def test__saliency_metrics__kld_of_delta_against_uniform() -> None:
    n = 64
    gt = np.zeros((8, 8))
    gt[2, 3] = 1.0
    eps = 1e-7

    value = kld(SaliencyMap(values=gt), SaliencyMap(values=np.ones((8, 8))), eps)

    assert value == pytest.approx(math.log((1 + eps) / (1 / n + eps)), rel=1e-12)
    assert value == pytest.approx(math.log(n), rel=1e-4)


def test__saliency_metrics__kld_is_scale_invariant(rng: np.random.Generator) -> None:
    gt = SaliencyMap(values=rng.uniform(size=(8, 16)))
    pred = SaliencyMap(values=rng.uniform(size=(8, 16)))

    scaled = kld(gt.with_values(7.0 * gt.values), pred.with_values(0.1 * pred.values))

    assert scaled == pytest.approx(kld(gt, pred), rel=1e-10)
    assert kld(gt, pred) > 0


def test__saliency_metrics__kld_direction(rng: np.random.Generator) -> None:
    gt = SaliencyMap(values=rng.uniform(size=(8, 16)))
    pred = SaliencyMap(values=rng.uniform(size=(8, 16)) ** 3)

    forward = kld_configured(pred, gt, SaliencyMetricsConfig())
    backward = kld_configured(pred, gt, SaliencyMetricsConfig(kld_direction=KldDirection.PRED_GT))

    assert forward == kld(gt, pred)
    assert backward == kld(pred, gt)


def test__saliency_metrics__kld_of_empty_map(rng: np.random.Generator) -> None:
    with pytest.raises(DegenerateInputError):
        kld(SaliencyMap(values=np.zeros((4, 4))), SaliencyMap(values=rng.uniform(size=(4, 4))))


def test__saliency_metrics__nss_at_the_peak() -> None:
    pred = equator_prior_saliency(32, 16, 0.2, [Hotspot(0.3, 1.0, 4.0, 0.2)])
    mask = np.zeros((16, 32), dtype=bool)
    mask[np.unravel_index(np.argmax(pred.values), pred.values.shape)] = True

    z = (pred.values - pred.values.mean()) / pred.values.std()

    assert nss(pred, FixationMap(mask=mask)) == pytest.approx(z.max(), rel=1e-12)
    assert z.max() > 0


def test__saliency_metrics__nss_everywhere_is_zero(rng: np.random.Generator) -> None:
    pred = SaliencyMap(values=rng.uniform(size=(8, 16)))

    assert nss(pred, FixationMap(mask=np.ones((8, 16)))) == pytest.approx(0.0, abs=1e-12)


def test__saliency_metrics__nss_is_affine_invariant(rng: np.random.Generator) -> None:
    pred = SaliencyMap(values=rng.uniform(size=(8, 16)))
    fix = _random_fixations(rng, (8, 16), 10)

    assert nss(pred.with_values(2.5 * pred.values + 1.0), fix) == pytest.approx(nss(pred, fix), rel=1e-12)


def test__saliency_metrics__nss_without_fixations(rng: np.random.Generator) -> None:
    with pytest.raises(DegenerateInputError):
        nss(SaliencyMap(values=rng.uniform(size=(4, 4))), FixationMap(mask=np.zeros((4, 4))))


def test__saliency_metrics__auc_of_perfect_separation(rng: np.random.Generator) -> None:
    fix = _random_fixations(rng, (8, 16), 12)
    values = rng.uniform(0.0, 1.0, size=(8, 16))
    values[fix.mask] += 2.0

    assert auc_judd(SaliencyMap(values=values), fix) == 1.0


def test__saliency_metrics__auc_of_constant_prediction(rng: np.random.Generator) -> None:
    fix = _random_fixations(rng, (8, 16), 5)

    assert auc_judd(SaliencyMap(values=np.full((8, 16), 0.3)), fix) == pytest.approx(0.5, abs=1e-15)


def test__saliency_metrics__auc_matches_threshold_enumeration(rng: np.random.Generator) -> None:
    fix = _random_fixations(rng, (8, 16), 20)
    # coarse values force ties between fixated and other pixels
    values = np.round(rng.uniform(size=(8, 16)), 1)

    expected = _brute_force_auc(values, fix.mask)

    assert auc_judd(SaliencyMap(values=values), fix) == pytest.approx(expected, abs=1e-12)


def test__saliency_metrics__auc_is_invariant_to_monotone_transforms(rng: np.random.Generator) -> None:
    fix = _random_fixations(rng, (8, 16), 15)
    pred = SaliencyMap(values=rng.uniform(size=(8, 16)))

    assert auc_judd(pred.with_values(np.exp(3.0 * pred.values)), fix) == pytest.approx(auc_judd(pred, fix), abs=1e-12)


def test__saliency_metrics__roc_is_anchored(rng: np.random.Generator) -> None:
    fpr, tpr = roc_judd(SaliencyMap(values=rng.uniform(size=(8, 16))), _random_fixations(rng, (8, 16), 6))

    assert (fpr[0], tpr[0]) == (0.0, 0.0)
    assert (fpr[-1], tpr[-1]) == (1.0, 1.0)
    assert np.all(np.diff(fpr) >= 0)
    assert np.all(np.diff(tpr) >= 0)
