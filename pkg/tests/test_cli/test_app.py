import json
from pathlib import Path
from typing import Tuple

import numpy as np
import pytest

from odic import __version__
from odic.cli import EXIT_DATA, EXIT_OK, EXIT_USAGE, main
from odic.codec import Bitstream
from odic.dataset import load_float_raster, load_image, save_image, save_saliency
from odic.dataset.io import encode_raster
from tests.conftest import hotspot_scene


@pytest.fixture
def scene_files(tmp_path: Path) -> Tuple[Path, Path]:
    img, saliency = hotspot_scene()
    image_path = tmp_path / "scene.png"
    saliency_path = tmp_path / "scene_saliency.png"

    save_image(img.with_samples(np.rint(img.samples)), image_path)
    save_saliency(saliency, saliency_path)

    return image_path, saliency_path


def _read_json(path: Path) -> dict:
    return json.loads(path.read_text(encoding="utf-8"))


def test__cli__help() -> None:
    assert main(["--help"]) == EXIT_OK
    assert main(["encode", "--help"]) == EXIT_OK


def test__cli__version(capsys: pytest.CaptureFixture) -> None:
    assert main(["--version"]) == EXIT_OK
    assert __version__ in capsys.readouterr().out


@pytest.mark.parametrize(
    "args",
    [
        ["no-such-command"],
        ["encode"],
        ["bdrate", "--anchor", "a.csv"],
        ["quality", "--ref", "a.png"],
        ["rd-sweep", "--csv", "out.csv"],
    ],
)
def test__cli__usage_errors(args: list) -> None:
    assert main(args) == EXIT_USAGE


def test__cli__mutually_exclusive_masking_flags(scene_files: Tuple[Path, Path], tmp_path: Path) -> None:
    image, saliency = scene_files

    code = main(["encode", str(image), "-o", str(tmp_path / "x.odic"), "--lambda-index", "0",
                 "--saliency", str(saliency), "--no-masking"])  # fmt: skip

    assert code == EXIT_USAGE
    assert not (tmp_path / "x.odic").exists()


def test__cli__masking_needs_saliency(scene_files: Tuple[Path, Path], tmp_path: Path) -> None:
    image, _ = scene_files

    assert main(["encode", str(image), "-o", str(tmp_path / "x.odic"), "--lambda-index", "0"]) == EXIT_USAGE


def test__cli__encode_decode_quality(scene_files: Tuple[Path, Path], tmp_path: Path) -> None:
    image, saliency = scene_files
    stream = tmp_path / "scene.odic"
    restored = tmp_path / "restored.png"
    report = tmp_path / "quality.json"
    loss_path = tmp_path / "loss.json"

    assert main(["encode", str(image), "-o", str(stream), "--lambda-index", "6", "--saliency", str(saliency)]) == 0
    assert main(["decode", str(stream), "-o", str(restored)]) == EXIT_OK
    assert main(["quality", "--ref", str(image), "--dist", str(restored), "--saliency", str(saliency),
                 "--bitstream", str(stream), "--loss-report", str(loss_path), "--pred", str(saliency),
                 "--gt", str(saliency), "--json", str(report)]) == EXIT_OK  # fmt: skip

    result = _read_json(report)
    loss = _read_json(loss_path)

    assert result["version"] == loss["version"] == __version__
    assert loss["bitstream"] == str(stream)
    assert result["ws_psnr"] > 25.0
    assert 0.0 < result["ws_ssim"] <= 1.0
    assert loss["bpp"] == pytest.approx(8 * stream.stat().st_size / (128 * 64))
    assert loss["lambda"] == 0.0932
    assert loss["total"] == pytest.approx(loss["lambda"] * loss["sal_mse"] + loss["bpp"], rel=1e-12)
    assert loss["cc"] == pytest.approx(1.0)
    assert load_image(restored).samples.shape == (3, 64, 128)


def test__cli__encode_without_masking(scene_files: Tuple[Path, Path], tmp_path: Path) -> None:
    image, _ = scene_files
    stream = tmp_path / "plain.odic"

    assert main(["encode", str(image), "-o", str(stream), "--lambda-index", "7", "--no-masking"]) == EXIT_OK
    assert not Bitstream.from_bytes(stream.read_bytes()).saliency_mode


@pytest.mark.parametrize("data", [b"not a bitstream", b"ODIC\x09" + bytes(40)])
def test__cli__decode_garbage(tmp_path: Path, data: bytes) -> None:
    stream = tmp_path / "bad.odic"
    stream.write_bytes(data)

    assert main(["decode", str(stream), "-o", str(tmp_path / "out.png")]) == EXIT_DATA


def test__cli__missing_input(tmp_path: Path) -> None:
    assert main(["quality", "--ref", str(tmp_path / "a.png"), "--dist", str(tmp_path / "b.png")]) == EXIT_DATA


def test__cli__invalid_config(scene_files: Tuple[Path, Path], tmp_path: Path) -> None:
    image, _ = scene_files
    config = tmp_path / "odic.yaml"
    config.write_text("codec:\n  block_size: 1\n")

    code = main(["encode", str(image), "-o", str(tmp_path / "x.odic"), "--lambda-index", "0", "--no-masking",
                 "--config", str(config)])  # fmt: skip

    assert code == EXIT_DATA


def test__cli__lambda_index_outside_the_ladder(scene_files: Tuple[Path, Path], tmp_path: Path) -> None:
    image, _ = scene_files

    assert main(["encode", str(image), "-o", str(tmp_path / "x.odic"), "--lambda-index", "9", "--no-masking"]) == 2


def test__cli__sweep_and_self_comparison(scene_files: Tuple[Path, Path], tmp_path: Path) -> None:
    image, saliency = scene_files
    sweep = tmp_path / "sweep.csv"
    plot = tmp_path / "sweep.svg"
    report = tmp_path / "bd.json"

    assert main(["rd-sweep", str(image), "--saliency", str(saliency), "--csv", str(sweep), "--plot", str(plot)]) == 0

    lines = sweep.read_text().splitlines()

    assert lines[0] == "image,lambda_index,lambda,bpp,ws_psnr,sal_psnr,ws_ssim"
    assert len(lines) == 9
    assert all(line.startswith("scene,") for line in lines[1:])
    assert plot.read_text().count("<polyline") == 1

    assert main(["bdrate", "--anchor", str(sweep), "--test", str(sweep), "--metric", "sal_psnr",
                 "--json", str(report)]) == EXIT_OK  # fmt: skip

    result = _read_json(report)

    assert result["bd_psnr"] == pytest.approx(0.0, abs=1e-9)
    assert result["bd_rate"] == pytest.approx(0.0, abs=1e-7)
    assert result["metric"] == "sal_psnr"


def test__cli__bdrate_table(tmp_path: Path, capsys: pytest.CaptureFixture) -> None:
    anchor = tmp_path / "anchor.csv"
    test = tmp_path / "test.csv"
    anchor.write_text("bpp,quality\n0.1,30\n0.2,32\n0.4,34\n0.8,36\n")
    test.write_text("bpp,quality\n0.05,30\n0.1,32\n0.2,34\n0.4,36\n")

    assert main(["bdrate", "--anchor", str(anchor), "--test", str(test)]) == EXIT_OK
    assert "-50.000" in capsys.readouterr().out


def test__cli__bdrate_plot(tmp_path: Path) -> None:
    anchor = tmp_path / "anchor.csv"
    test = tmp_path / "test.csv"
    anchor.write_text("bpp,quality\n0.1,30\n0.2,32\n0.4,34\n0.8,36\n")
    test.write_text("bpp,quality\n0.05,30\n0.1,32\n0.2,34\n0.4,36\n")
    svg = tmp_path / "bd.svg"
    report = tmp_path / "bd.json"

    assert main(["bdrate", "--anchor", str(anchor), "--test", str(test), "--plot", str(svg),
                 "--json", str(report)]) == EXIT_OK  # fmt: skip

    text = svg.read_text()

    assert text.count("<polyline") == 2
    assert "anchor" in text and "test" in text
    assert _read_json(report)["bd_rate"] == pytest.approx(-50.0, abs=1e-6)


def test__cli__bdrate_without_overlap(tmp_path: Path) -> None:
    anchor = tmp_path / "anchor.csv"
    test = tmp_path / "test.csv"
    anchor.write_text("bpp,quality\n0.1,30\n0.2,32\n0.4,34\n0.8,36\n")
    test.write_text("bpp,quality\n1.1,40\n1.2,42\n1.4,44\n1.8,46\n")

    assert main(["bdrate", "--anchor", str(anchor), "--test", str(test)]) == EXIT_DATA


def test__cli__plot(tmp_path: Path) -> None:
    first = tmp_path / "first.csv"
    second = tmp_path / "second.csv"
    first.write_text("bpp,quality\n0.1,30\n0.2,32\n0.4,34\n0.8,36\n")
    second.write_text("bpp,quality\n0.05,30\n0.1,32\n0.2,34\n0.4,36\n")
    svg = tmp_path / "rd.svg"

    assert main(["plot", str(first), str(second), "-o", str(svg)]) == EXIT_OK

    text = svg.read_text()

    assert text.count("<polyline") == 2
    assert "first" in text and "second" in text


def test__cli__mask(scene_files: Tuple[Path, Path], tmp_path: Path) -> None:
    _, saliency = scene_files
    residual = tmp_path / "residual.odrf"
    pooled = tmp_path / "pooled.png"
    report = tmp_path / "mask.json"

    assert main(["mask", str(saliency), "-o", str(residual), "--alpha", "2", "--mask-out", str(pooled),
                 "--json", str(report)]) == EXIT_OK  # fmt: skip

    values = load_float_raster(residual)
    result = _read_json(report)

    assert values.shape == (4, 8)
    assert result["grid"] == {"h": 4, "w": 8}
    assert result["masked_channels"] == 192 - 48
    assert 1.25 <= result["residual"]["min"] <= result["residual"]["max"] <= 1.5
    assert pooled.is_file()


def test__cli__mask_split_larger_than_channels(scene_files: Tuple[Path, Path], tmp_path: Path) -> None:
    _, saliency = scene_files

    assert main(["mask", str(saliency), "-o", str(tmp_path / "r.odrf"), "--split", "200"]) == EXIT_USAGE


def test__cli__project_round_trip(scene_files: Tuple[Path, Path], tmp_path: Path) -> None:
    image, _ = scene_files
    faces = tmp_path / "faces"
    back = tmp_path / "back.png"

    assert main(["project", str(image), "--to", "cubemap", "--face-size", "32", "-o", str(faces)]) == EXIT_OK
    assert sorted(path.name for path in faces.iterdir()) == sorted(
        f"{name}.png" for name in ("front", "right", "back", "left", "top", "bottom")
    )
    assert main(["project", str(faces), "--to", "erp", "-o", str(back)]) == EXIT_OK
    assert load_image(back).samples.shape == (3, 64, 128)


def test__cli__project_needs_face_size(scene_files: Tuple[Path, Path], tmp_path: Path) -> None:
    image, _ = scene_files

    assert main(["project", str(image), "--to", "cubemap", "-o", str(tmp_path / "faces")]) == EXIT_USAGE


def test__cli__saliency_metrics(scene_files: Tuple[Path, Path], tmp_path: Path) -> None:
    _, saliency = scene_files
    fixations = tmp_path / "fix.pgm"
    mask = np.zeros((1, 64, 128), dtype=np.int64)
    mask[0, 32, 64] = 255
    fixations.write_bytes(encode_raster(mask, 255, fixations))
    report = tmp_path / "sal.json"

    code = main(["saliency-metrics", "--pred", str(saliency), "--gt", str(saliency), "--fix", str(fixations),
                 "--json", str(report)])  # fmt: skip

    result = _read_json(report)

    assert code == EXIT_OK
    assert result["cc"] == pytest.approx(1.0)
    assert result["kld"] == pytest.approx(0.0, abs=1e-9)
    assert result["nss"] > 0
    assert result["auc_judd"] > 0.9


def test__cli__saliency_metrics_needs_a_reference(scene_files: Tuple[Path, Path]) -> None:
    _, saliency = scene_files

    assert main(["saliency-metrics", "--pred", str(saliency)]) == EXIT_USAGE
    assert main(["saliency-metrics", str(saliency), "--gt", str(saliency)]) == EXIT_USAGE


def test__cli__augment(scene_files: Tuple[Path, Path], tmp_path: Path) -> None:
    image, saliency = scene_files
    manifest = tmp_path / "corpus.tsv"
    manifest.write_text(f"{image.name}\t{saliency.name}\t-\ttrain\n{image.name}\t{saliency.name}\n")
    out = tmp_path / "augmented"

    assert main(["augment", "--manifest", str(manifest), "-o", str(out), "--seed", "3", "--flip-prob", "1",
                 "--rotate", "8", "--resize", "32x16"]) == EXIT_OK  # fmt: skip

    lines = (out / "manifest.tsv").read_text().splitlines()

    assert len(lines) == 2
    assert lines[0].endswith("\ttrain")
    assert lines[1].endswith("\ttest")
    assert load_image(out / lines[0].split("\t")[0]).samples.shape == (3, 16, 32)


def test__cli__augment_bad_resize(scene_files: Tuple[Path, Path], tmp_path: Path) -> None:
    image, saliency = scene_files
    manifest = tmp_path / "corpus.tsv"
    manifest.write_text(f"{image.name}\t{saliency.name}\n")

    assert main(["augment", "--manifest", str(manifest), "-o", str(tmp_path / "o"), "--resize", "big"]) == EXIT_USAGE


def test__cli__ablation(scene_files: Tuple[Path, Path], tmp_path: Path) -> None:
    image, saliency = scene_files
    config = tmp_path / "odic.yaml"
    config.write_text("codec:\n  lambda_ladder: [0.0018, 0.0067, 0.025, 0.0932, 0.18]\n")
    report = tmp_path / "ablation.json"
    sweeps = tmp_path / "ablation.csv"

    assert main(["ablation", str(image), "--saliency", str(saliency), "--config", str(config),
                 "--csv", str(sweeps), "--json", str(report)]) == EXIT_OK  # fmt: skip

    result = _read_json(report)

    assert len(result["anchor"]) == len(result["test"]) == 5
    assert set(result["bd"]) == {"ws_psnr", "sal_psnr"}
    assert len(sweeps.read_text().splitlines()) == 11
