"""
RD CSV files

Sweep files carry the columns `image,lambda_index,lambda,bpp,ws_psnr,sal_psnr,ws_ssim`; minimal curve
files carry `bpp,quality`. `load_rd_csv` reads either, picking the quality column by metric name.
"""

import csv
from pathlib import Path
from typing import Iterable, Optional, Sequence

from odic.bjontegaard.exceptions import CurveError
from odic.bjontegaard.typing import MIN_POINTS, RdCurve
from odic.typing import PathLikeT

SWEEP_COLUMNS: tuple[str, ...] = ("image", "lambda_index", "lambda", "bpp", "ws_psnr", "sal_psnr", "ws_ssim")
CURVE_COLUMNS: tuple[str, ...] = ("bpp", "quality")


def _parse_float(raw: Optional[str], column: str, line: int) -> float:
    if raw is None or raw.strip() == "":
        raise CurveError(f"Line {line}: missing value in column {column!r}")

    try:
        return float(raw)
    except ValueError as e:
        raise CurveError(f"Line {line}: {raw!r} in column {column!r} is not a number") from e


def load_rd_csv(path: PathLikeT, metric: str = "ws_psnr", image: Optional[str] = None) -> RdCurve:
    csv_path = Path(path)

    try:
        with csv_path.open("r", newline="", encoding="utf-8") as f:
            reader = csv.DictReader(f)
            columns = reader.fieldnames or []
            rows = list(reader)
    except (OSError, UnicodeDecodeError, csv.Error) as e:
        raise CurveError(f"Cannot read RD CSV {csv_path}: {e}") from e

    if "bpp" not in columns:
        raise CurveError(f"{csv_path} has no 'bpp' column")

    quality_column = metric if metric in columns else "quality"

    if quality_column not in columns:
        raise CurveError(f"{csv_path} has neither a {metric!r} nor a 'quality' column")

    if "image" in columns:
        images = {row["image"] for row in rows}

        if image is not None:
            rows = [row for row in rows if row["image"] == image]
        elif len(images) > 1:
            raise CurveError(f"{csv_path} holds several images {sorted(images)}, select one")

    points = sorted(
        (
            (_parse_float(row.get("bpp"), "bpp", line), _parse_float(row.get(quality_column), quality_column, line))
            for line, row in enumerate(rows, start=2)
        ),
        key=lambda point: point[0],
    )

    rates = [rate for rate, _ in points]

    if len(set(rates)) != len(rates):
        raise CurveError(f"{csv_path} has duplicate bpp values")

    if len(points) < MIN_POINTS:
        raise CurveError(f"{csv_path} has {len(points)} points, at least {MIN_POINTS} are needed")

    return RdCurve.from_arrays(rates, [quality for _, quality in points], label=csv_path.stem)


def write_rd_csv(path: PathLikeT, curve: RdCurve) -> None:
    with Path(path).open("w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f)
        writer.writerow(CURVE_COLUMNS)

        for point in curve.points:
            writer.writerow([repr(point.bpp), repr(point.quality)])


def write_sweep_csv(path: PathLikeT, rows: Iterable[Sequence[object]]) -> None:
    """
    Write rows already ordered as `SWEEP_COLUMNS`
    """
    with Path(path).open("w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f)
        writer.writerow(SWEEP_COLUMNS)
        writer.writerows(rows)
