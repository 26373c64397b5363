from odic.bjontegaard.api import bd_analysis, bd_psnr, bd_rate
from odic.bjontegaard.csvio import load_rd_csv, write_rd_csv, write_sweep_csv
from odic.bjontegaard.exceptions import CurveError, NoOverlapError
from odic.bjontegaard.typing import BdResult, RdCurve, RdPair

__all__ = (
    "bd_analysis",
    "bd_psnr",
    "bd_rate",
    "load_rd_csv",
    "write_rd_csv",
    "write_sweep_csv",
    "CurveError",
    "NoOverlapError",
    "BdResult",
    "RdCurve",
    "RdPair",
)
