"""
The `odic` command line

Exit codes: 0 success, 1 usage error, 2 data error (unreadable or invalid input), 3 internal error.
"""

import json
import logging
import sys
from concurrent.futures import ThreadPoolExecutor
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

import click
import numpy as np
import typer
from pydantic import ValidationError
from rich.console import Console
from rich.logging import RichHandler
from rich.progress import BarColumn, MofNCompleteColumn, Progress, TextColumn
from rich.table import Table

from odic import __version__
from odic.bjontegaard import RdCurve, bd_analysis, load_rd_csv, write_sweep_csv
from odic.cli.plot import emit_rd_plot
from odic.cli.progress import SweepProgress
from odic.codec import Bitstream, RdPoint, decode, encode, masking_ablation, rd_sweep
from odic.codec.ablation import curve_of
from odic.config import CodecConfig, OdicConfig, load_config, load_settings
from odic.dataset import (
    CropMode,
    augment_pair,
    derive_seed,
    load_fixations,
    load_image,
    load_manifest,
    load_record,
    load_saliency,
    resize,
    resize_saliency,
    rotate_longitude,
    save_float_raster,
    save_image,
    save_saliency,
)
from odic.dataset.exceptions import ImageDecodeError
from odic.exceptions import ConfigError, OdicError
from odic.losses import loss_report
from odic.metrics import MetricId, auc_judd, cc, evaluate, kld_configured, nss
from odic.rasters import ErpImage, SaliencyMap
from odic.saliency import downsample_mask, ground_truth_weights, mask_residual, rescale_and_sigmoid
from odic.sphere import FACE_ORDER, CubeFaceSet, cubemap_to_erp, erp_to_cubemap

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_INTERNAL = 3

FACE_SUFFIXES = (".png", ".ppm", ".pgm")

app = typer.Typer(help="odic: saliency-aware omnidirectional image compression lab", add_completion=False)
console = Console()
err_console = Console(stderr=True)

logger = logging.getLogger("odic.cli")


class Projection(str, Enum):
    CUBEMAP = "cubemap"
    ERP = "erp"


class ImageFormat(str, Enum):
    PNG = "png"
    PNM = "pnm"


def _version_callback(value: bool) -> None:
    if value:
        console.print(f"odic {__version__}")
        raise typer.Exit()


@app.callback()
def root(
    verbose: bool = typer.Option(False, "--verbose", "-v", help="Log debug messages"),
    version: bool = typer.Option(False, "--version", callback=_version_callback, is_eager=True),
) -> None:
    """
    Saliency-aware omnidirectional image compression lab
    """
    _setup_logging(logging.DEBUG if verbose else logging.WARNING)


def _setup_logging(level: int) -> None:
    package_logger = logging.getLogger("odic")

    for handler in list(package_logger.handlers):
        if isinstance(handler, RichHandler):
            package_logger.removeHandler(handler)

    package_logger.addHandler(RichHandler(console=err_console, show_path=False))
    package_logger.setLevel(level)


def _image_path(stem: Path, img: ErpImage, fmt: ImageFormat = ImageFormat.PNG) -> Path:
    if fmt is ImageFormat.PNG and img.max_value <= 255:
        return stem.with_suffix(".png")

    return stem.with_suffix(".ppm" if img.channels == 3 else ".pgm")


def _codec_config(config: OdicConfig, **overrides: Any) -> CodecConfig:
    updates = {key: value for key, value in overrides.items() if value is not None}

    if not updates:
        return config.codec

    try:
        return CodecConfig.model_validate({**config.codec.model_dump(), **updates})
    except ValidationError as e:
        raise ConfigError(f"Invalid codec override: {e}") from e


def _emit_report(report: Dict[str, Any], json_path: Optional[Path]) -> None:
    stamped = {"version": __version__, **report}

    if json_path is None:
        console.print_json(data=stamped)
        return

    json_path.write_text(json.dumps(stamped, indent=2) + "\n", encoding="utf-8")
    console.print(f"Report written to [bold]{json_path}[/bold]")


def _exclusive(first: Tuple[str, object], second: Tuple[str, object]) -> None:
    if first[1] and second[1]:
        raise typer.BadParameter(f"{first[0]} and {second[0]} are mutually exclusive")


@app.command("project")
def project(
    source: Path = typer.Argument(..., help="ERP image, or a directory with the six faces for --to erp"),
    to: Projection = typer.Option(..., "--to", help="Target projection"),
    out: Path = typer.Option(..., "--out", "-o", help="Face directory (cubemap) or image file (erp)"),
    face_size: Optional[int] = typer.Option(None, "--face-size", min=2, help="Face size for --to cubemap"),
    width: Optional[int] = typer.Option(None, "--width", min=2, help="ERP width for --to erp"),
    fmt: ImageFormat = typer.Option(ImageFormat.PNG, "--format", help="Face file format"),
) -> None:
    """
    Convert between ERP and six-face cubemaps
    """
    if to is Projection.CUBEMAP:
        _exclusive(("--to cubemap", True), ("--width", width))

        if face_size is None:
            raise typer.BadParameter("--to cubemap needs --face-size")

        faces = erp_to_cubemap(load_image(source), face_size)
        out.mkdir(parents=True, exist_ok=True)

        for face in FACE_ORDER:
            face_img = ErpImage(samples=faces.faces[face], max_value=faces.max_value)
            save_image(face_img, _image_path(out / face.value, face_img, fmt))

        console.print(f"Wrote 6 faces of {face_size}px to [bold]{out}[/bold]")
        return

    _exclusive(("--to erp", True), ("--face-size", face_size))

    face_images: Dict[Any, ErpImage] = {}

    for face in FACE_ORDER:
        candidates = [source / f"{face.value}{suffix}" for suffix in FACE_SUFFIXES]
        found = next((candidate for candidate in candidates if candidate.is_file()), None)

        if found is None:
            raise ImageDecodeError(f"No {face.value} face found in {source}")

        face_images[face] = load_image(found)

    peak = face_images[FACE_ORDER[0]].max_value
    face_set = CubeFaceSet(faces={face: img.samples for face, img in face_images.items()}, max_value=peak)
    erp_width = width or 4 * face_set.face_size

    save_image(cubemap_to_erp(face_set, erp_width, erp_width // 2), out)
    console.print(f"Wrote {erp_width}x{erp_width // 2} ERP image to [bold]{out}[/bold]")


@app.command("mask")
def mask(
    saliency: Path = typer.Argument(..., help="Raw saliency map"),
    out: Path = typer.Option(..., "--out", "-o", help="Residual as ODRF float raster"),
    alpha: float = typer.Option(1.0, "--alpha", help="Residual offset, residual = (mask + alpha) / alpha"),
    factor: int = typer.Option(16, "--factor", min=1, help="Average pooling factor"),
    split: int = typer.Option(48, "--split", min=0, help="Channels kept out of the masking"),
    channels: int = typer.Option(192, "--channels", min=1, help="Latent channel count"),
    mask_out: Optional[Path] = typer.Option(None, "--mask-out", help="Also write the pooled mask as an image"),
    json_path: Optional[Path] = typer.Option(None, "--json", help="Write the report to a file"),
) -> None:
    """
    Saliency map to latent-resolution mask residual
    """
    if split > channels:
        raise typer.BadParameter(f"--split {split} exceeds --channels {channels}")

    pooled = downsample_mask(rescale_and_sigmoid(load_saliency(saliency)), factor)
    residual = mask_residual(pooled, alpha)

    save_float_raster(residual.values, out)

    if mask_out is not None:
        save_saliency(SaliencyMap(values=pooled.values), mask_out)

    _emit_report(
        {
            "saliency": str(saliency),
            "grid": {"h": residual.h, "w": residual.w},
            "alpha": alpha,
            "split": split,
            "channels": channels,
            "masked_channels": channels - split,
            "residual": {
                "min": float(residual.values.min()),
                "max": float(residual.values.max()),
                "mean": float(residual.values.mean()),
            },
        },
        json_path,
    )


@app.command("encode")
def encode_command(
    image: Path = typer.Argument(..., help="ERP image"),
    out: Path = typer.Option(..., "--out", "-o", help="Bitstream file"),
    lambda_index: int = typer.Option(..., "--lambda-index", min=0, help="Position in the lambda ladder"),
    saliency: Optional[Path] = typer.Option(None, "--saliency", help="Raw saliency map for latent masking"),
    no_masking: bool = typer.Option(False, "--no-masking", help="Encode without latent masking"),
    config: Optional[Path] = typer.Option(None, "--config", help="YAML config file"),
) -> None:
    """
    Compress an ERP image
    """
    _exclusive(("--saliency", saliency), ("--no-masking", no_masking))

    cfg = _codec_config(load_config(config), saliency_mode=False if no_masking else None)

    if cfg.saliency_mode and saliency is None:
        raise typer.BadParameter("latent masking needs --saliency (or pass --no-masking)")

    saliency_map = load_saliency(saliency) if saliency is not None else None
    bitstream = encode(load_image(image), saliency_map, lambda_index, cfg)
    out.write_bytes(bitstream.to_bytes())

    console.print(f"{image} -> [bold]{out}[/bold]: {len(bitstream)} bytes, {bitstream.bpp:.4f} bpp")


@app.command("decode")
def decode_command(
    bitstream: Path = typer.Argument(..., help="Bitstream file"),
    out: Path = typer.Option(..., "--out", "-o", help="Reconstructed image (.png, .ppm or .pgm)"),
    config: Optional[Path] = typer.Option(None, "--config", help="YAML config file used at encode time"),
) -> None:
    """
    Reconstruct an image from a bitstream
    """
    cfg = load_config(config).codec
    image = decode(Bitstream.from_bytes(bitstream.read_bytes()), cfg)
    save_image(image, out)

    console.print(f"{bitstream} -> [bold]{out}[/bold]: {image.width}x{image.height}")


@app.command("quality")
def quality(
    reference: Path = typer.Option(..., "--ref", help="Reference ERP image"),
    distorted: Path = typer.Option(..., "--dist", help="Distorted ERP image"),
    saliency: Optional[Path] = typer.Option(None, "--saliency", help="Saliency map for SAL-PSNR and Sal-MSE"),
    bitstream: Optional[Path] = typer.Option(None, "--bitstream", help="Bitstream of the distorted image"),
    loss_path: Optional[Path] = typer.Option(
        None, "--loss-report", help="Write the rate-distortion loss report to a file (needs --bitstream)"
    ),
    pred: Optional[Path] = typer.Option(None, "--pred", help="Predicted saliency for the fusion terms"),
    gt: Optional[Path] = typer.Option(None, "--gt", help="Ground-truth saliency for the fusion terms"),
    config: Optional[Path] = typer.Option(None, "--config", help="YAML config file"),
    json_path: Optional[Path] = typer.Option(None, "--json", help="Write the report to a file"),
) -> None:
    """
    WS-PSNR, SAL-PSNR and WS-SSIM of a reconstruction, optionally with its loss report
    """
    if loss_path is not None and bitstream is None:
        raise typer.BadParameter("--loss-report needs --bitstream")

    if (pred is None) != (gt is None):
        raise typer.BadParameter("--pred and --gt go together")

    settings = load_config(config)
    ref_img = load_image(reference)
    dist_img = load_image(distorted)
    saliency_map = load_saliency(saliency) if saliency is not None else None

    scores = evaluate(ref_img, dist_img, saliency_map, settings.quality)
    report: Dict[str, Any] = {
        "reference": str(reference),
        "distorted": str(distorted),
        **{metric.value: score.value for metric, score in scores.items()},
    }

    if loss_path is not None and bitstream is not None:
        stream = Bitstream.from_bytes(bitstream.read_bytes())
        weights = (
            ground_truth_weights(saliency_map)
            if saliency_map is not None
            else SaliencyMap(values=np.ones((ref_img.height, ref_img.width)))
        )
        ladder = settings.codec.lambda_ladder

        if stream.lambda_index >= len(ladder):
            raise ConfigError(f"Bitstream lambda index {stream.lambda_index} is outside the configured ladder")

        loss = loss_report(
            ref_img,
            dist_img,
            weights,
            len(stream),
            ladder[stream.lambda_index],
            pred=load_saliency(pred) if pred is not None else None,
            gt=load_saliency(gt) if gt is not None else None,
        )
        _emit_report({"bitstream": str(bitstream), **loss.model_dump(by_alias=True, exclude_none=True)}, loss_path)

    _emit_report(report, json_path)


@app.command("saliency-metrics")
def saliency_metrics(
    pred: Path = typer.Option(..., "--pred", help="Predicted saliency map"),
    gt: Optional[Path] = typer.Option(None, "--gt", help="Ground-truth saliency map (CC, KLD)"),
    fixations: Optional[Path] = typer.Option(None, "--fix", "--fixations", help="Fixation map (NSS, AUC-Judd)"),
    config: Optional[Path] = typer.Option(None, "--config", help="YAML config file"),
    json_path: Optional[Path] = typer.Option(None, "--json", help="Write the report to a file"),
) -> None:
    """
    CC, KLD, NSS and AUC-Judd of a predicted saliency map
    """
    if gt is None and fixations is None:
        raise typer.BadParameter("pass --gt, --fix or both")

    settings = load_config(config)
    pred_map = load_saliency(pred)
    report: Dict[str, Any] = {"pred": str(pred)}

    if gt is not None:
        gt_map = load_saliency(gt)
        report["cc"] = cc(pred_map, gt_map)
        report["kld"] = kld_configured(pred_map, gt_map, settings.saliency_metrics)

    if fixations is not None:
        fixation_map = load_fixations(fixations)
        report["nss"] = nss(pred_map, fixation_map)
        report["auc_judd"] = auc_judd(pred_map, fixation_map)

    _emit_report(report, json_path)


def _sweep_progress() -> Progress:
    return Progress(
        TextColumn("{task.description}"),
        BarColumn(),
        MofNCompleteColumn(),
        console=err_console,
        transient=True,
    )


def _sweep_inputs(
    images: Sequence[Path], manifest: Optional[Path], saliency: Optional[Path]
) -> List[Tuple[str, ErpImage, Optional[SaliencyMap]]]:
    if manifest is not None:
        return [
            (loaded.record.name, loaded.image, loaded.saliency)
            for loaded in map(load_record, load_manifest(manifest).records)
        ]

    saliency_map = load_saliency(saliency) if saliency is not None else None

    return [(path.stem, load_image(path), saliency_map) for path in images]


@app.command("rd-sweep")
def rd_sweep_command(
    images: Optional[List[Path]] = typer.Argument(None, help="ERP images"),
    manifest: Optional[Path] = typer.Option(None, "--manifest", help="Corpus manifest instead of images"),
    saliency: Optional[Path] = typer.Option(None, "--saliency", help="Saliency map for a single image"),
    csv_path: Path = typer.Option(..., "--csv", help="Output CSV"),
    plot: Optional[Path] = typer.Option(None, "--plot", help="Also write an SVG RD plot"),
    metric: MetricId = typer.Option(MetricId.WS_PSNR, "--metric", help="Quality metric of the plot"),
    no_masking: bool = typer.Option(False, "--no-masking", help="Sweep without latent masking"),
    config: Optional[Path] = typer.Option(None, "--config", help="YAML config file"),
) -> None:
    """
    Encode and decode every image at every ladder entry
    """
    images = images or []
    _exclusive(("image arguments", images), ("--manifest", manifest))
    _exclusive(("--manifest", manifest), ("--saliency", saliency))

    if not images and manifest is None:
        raise typer.BadParameter("pass images or --manifest")

    if saliency is not None and len(images) != 1:
        raise typer.BadParameter("--saliency applies to a single image")

    settings = load_config(config)
    cfg = _codec_config(settings, saliency_mode=False if no_masking else None)

    if cfg.saliency_mode and manifest is None and saliency is None:
        raise typer.BadParameter("latent masking needs --saliency (or pass --no-masking)")

    inputs = _sweep_inputs(images, manifest, saliency)
    runtime = load_settings()
    rows: List[RdPoint] = []
    curves: List[RdCurve] = []

    with _sweep_progress() as progress:
        task = progress.add_task("rd-sweep", total=len(inputs) * len(cfg.lambda_ladder))
        listener = SweepProgress(progress, task)

        for name, image, saliency_map in inputs:
            points = rd_sweep(image, saliency_map, cfg, settings.quality, name, runtime, [listener])
            rows.extend(points)
            curves.append(curve_of(points, metric, name))

    write_sweep_csv(csv_path, [point.as_row() for point in rows])
    console.print(f"{len(rows)} operating points written to [bold]{csv_path}[/bold]")

    if plot is not None:
        emit_rd_plot(curves, plot, metric=metric.value)
        console.print(f"RD plot written to [bold]{plot}[/bold]")


@app.command("bdrate")
def bdrate(
    anchor: Path = typer.Option(..., "--anchor", help="Anchor RD CSV"),
    test: Path = typer.Option(..., "--test", help="Test RD CSV"),
    metric: MetricId = typer.Option(MetricId.WS_PSNR, "--metric", help="Quality column"),
    image: Optional[str] = typer.Option(None, "--image", help="Image to select in multi-image sweep files"),
    degree: int = typer.Option(3, "--degree", min=1, max=3, help="Fit polynomial degree"),
    plot: Optional[Path] = typer.Option(None, "--plot", help="Also write an SVG plot of both curves"),
    json_path: Optional[Path] = typer.Option(None, "--json", help="Write the report to a file"),
) -> None:
    """
    Bjontegaard deltas of a test curve against an anchor
    """
    anchor_curve = load_rd_csv(anchor, metric.value, image)
    test_curve = load_rd_csv(test, metric.value, image)
    result = bd_analysis(anchor_curve, test_curve, degree=degree, metric=metric.value)

    if plot is not None:
        emit_rd_plot([anchor_curve, test_curve], plot, metric=metric.value)

    if json_path is None:
        table = Table(title=f"BD analysis on {metric.value}")
        table.add_column("BD-PSNR (dB)", justify="right")
        table.add_column("BD-rate (%)", justify="right")
        table.add_row(f"{result.bd_psnr:.4f}", f"{result.bd_rate:.3f}")
        console.print(table)
        return

    _emit_report({"anchor": str(anchor), "test": str(test), **result.model_dump(mode="json")}, json_path)


@app.command("augment")
def augment(
    manifest: Path = typer.Option(..., "--manifest", help="Corpus manifest"),
    out: Path = typer.Option(..., "--out", "-o", help="Output directory"),
    seed: int = typer.Option(0, "--seed", min=0, help="Base seed, each record derives its own"),
    crop: CropMode = typer.Option(CropMode.NONE, "--crop", help="Random crop shape"),
    flip_prob: float = typer.Option(0.5, "--flip-prob", min=0.0, max=1.0, help="Flip and mirror probability"),
    rotate: int = typer.Option(0, "--rotate", help="Longitude rotation in pixels, applied before cropping"),
    size: Optional[str] = typer.Option(None, "--resize", help="Resize to WxH before everything else"),
) -> None:
    """
    Write augmented copies of every manifest record together with a new manifest
    """
    target_size: Optional[Tuple[int, int]] = None

    if size is not None:
        try:
            target_w, target_h = (int(part) for part in size.lower().split("x"))
        except ValueError as e:
            raise typer.BadParameter(f"--resize expects WxH, got {size!r}") from e

        target_size = (target_w, target_h)

    records = load_manifest(manifest).records
    out.mkdir(parents=True, exist_ok=True)

    def augment_record(index: int) -> Tuple[Path, Path]:
        loaded = load_record(records[index])
        image, saliency_map = loaded.image, loaded.saliency

        if target_size is not None:
            image = resize(image, *target_size)
            saliency_map = resize_saliency(saliency_map, *target_size)

        if rotate:
            image = rotate_longitude(image, rotate)
            saliency_map = saliency_map.with_values(np.roll(saliency_map.values, rotate, axis=1))

        pair = augment_pair(image, saliency_map, derive_seed(seed, index), crop, flip_prob)
        stem = out / f"{index:05d}_{loaded.record.name}"
        image_path = _image_path(stem, pair.image)
        saliency_path = stem.with_name(f"{stem.name}_saliency.png")

        save_image(pair.image, image_path)
        save_saliency(pair.saliency, saliency_path)
        logger.debug(
            "Augmented %s: crop %s, flip %s, mirror %s", stem.name, pair.crop_offset, pair.flipped, pair.mirrored
        )

        return image_path, saliency_path

    with ThreadPoolExecutor(max_workers=load_settings().threads) as executor:
        written = list(executor.map(augment_record, range(len(records))))

    lines = [
        f"{image_path.name}\t{saliency_path.name}\t-\t{record.split}"
        for (image_path, saliency_path), record in zip(written, records)
    ]
    (out / "manifest.tsv").write_text("\n".join(lines) + "\n", encoding="utf-8")

    console.print(f"{len(written)} augmented records written to [bold]{out}[/bold]")


@app.command("ablation")
def ablation(
    image: Path = typer.Argument(..., help="ERP image"),
    saliency: Path = typer.Option(..., "--saliency", help="Raw saliency map"),
    csv_path: Optional[Path] = typer.Option(None, "--csv", help="Write both sweeps to a CSV"),
    config: Optional[Path] = typer.Option(None, "--config", help="YAML config file"),
    json_path: Optional[Path] = typer.Option(None, "--json", help="Write the report to a file"),
) -> None:
    """
    Latent masking on versus off: BD-PSNR and BD-rate on WS-PSNR and SAL-PSNR
    """
    settings = load_config(config)
    report = masking_ablation(
        load_image(image),
        load_saliency(saliency),
        settings.codec,
        settings.quality,
        image.stem,
        load_settings(),
    )

    if csv_path is not None:
        rows = [point.model_copy(update={"image": f"{image.stem}:off"}).as_row() for point in report.anchor]
        rows += [point.model_copy(update={"image": f"{image.stem}:on"}).as_row() for point in report.test]
        write_sweep_csv(csv_path, rows)

    _emit_report({"image": str(image), **report.model_dump(mode="json", by_alias=True)}, json_path)


@app.command("plot")
def plot_command(
    csv_paths: List[Path] = typer.Argument(..., help="RD CSV files, one curve each"),
    out: Path = typer.Option(..., "--out", "-o", help="SVG file"),
    metric: MetricId = typer.Option(MetricId.WS_PSNR, "--metric", help="Quality column"),
    image: Optional[str] = typer.Option(None, "--image", help="Image to select in multi-image sweep files"),
) -> None:
    """
    Plot RD curves from CSV files
    """
    curves = [load_rd_csv(path, metric.value, image) for path in csv_paths]
    emit_rd_plot(curves, out, metric=metric.value)

    console.print(f"RD plot written to [bold]{out}[/bold]")


def main(argv: Optional[Sequence[str]] = None) -> int:
    """
    Run the CLI and map failures to exit codes instead of raising
    """
    command = typer.main.get_command(app)
    args = list(argv) if argv is not None else sys.argv[1:]

    try:
        result = command.main(args=args, prog_name="odic", standalone_mode=False)
    except click.UsageError as e:
        e.show()
        return EXIT_USAGE
    except click.Abort:
        err_console.print("Aborted")
        return EXIT_USAGE
    except click.ClickException as e:
        e.show()
        return EXIT_DATA
    except (OdicError, OSError) as e:
        logger.debug("Command failed", exc_info=True)
        err_console.print(f"[bold red]Error:[/bold red] {e}")
        return EXIT_DATA
    except Exception:
        err_console.print_exception()
        return EXIT_INTERNAL

    return result if isinstance(result, int) else EXIT_OK
