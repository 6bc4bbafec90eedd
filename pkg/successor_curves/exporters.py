"""
Exporters Module
CSV and OBJ serialization of sampled curves
"""

import csv
import logging
from pathlib import Path
from typing import List, Optional, Tuple, Union

import numpy as np

from config.default_config import CSV_COLUMNS, CSV_SIGNIFICANT_DIGITS
from .errors import ValidationError
from .natural import CurveSamples
from .profiles import SampledProfile

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

OBJ_CHAIN_LENGTH = 32


def format_float(value: float) -> str:
    """17 significant digits, reads back to the same double; NaN becomes an empty cell"""
    if np.isnan(value):
        return ""
    return f"{value:.{CSV_SIGNIFICANT_DIGITS}g}"


def _rows(samples: CurveSamples) -> np.ndarray:
    table = np.full((len(samples), len(CSV_COLUMNS)), np.nan)
    table[:, 0] = samples.s_grid
    table[:, 1:4] = samples.points
    if samples.frames is not None:
        table[:, 4:13] = samples.frames.reshape(-1, 9)
    if samples.kappa is not None:
        table[:, 13] = samples.kappa
    if samples.tau is not None:
        table[:, 14] = samples.tau
    return table


def write_curve_csv(samples: CurveSamples, path: PathLike) -> Path:
    """
    Write samples with the fixed header; missing quantities stay empty

    Args:
        samples: Curve samples to write
        path: Destination file

    Returns:
        The written path
    """
    path = Path(path)
    with open(path, 'w', newline='') as f:
        writer = csv.writer(f, lineterminator='\n')
        writer.writerow(CSV_COLUMNS)
        for row in _rows(samples):
            writer.writerow([format_float(v) for v in row])
    logger.info(f"Wrote {len(samples)} samples to {path}")
    return path


def read_curve_csv(path: PathLike) -> CurveSamples:
    """Read a CSV written by write_curve_csv; columns that are empty everywhere become None"""
    path = Path(path)
    with open(path, 'r', newline='') as f:
        reader = csv.reader(f)
        header = next(reader, None)
        if header != CSV_COLUMNS:
            raise ValidationError(f"{path}: unexpected CSV header {header}")
        records: List[List[float]] = []
        for line_no, row in enumerate(reader, start=2):
            if len(row) != len(CSV_COLUMNS):
                raise ValidationError(f"{path}:{line_no}: expected {len(CSV_COLUMNS)} fields")
            try:
                records.append([float(v) if v.strip() else np.nan for v in row])
            except ValueError as e:
                raise ValidationError(f"{path}:{line_no}: {e}") from e

    if not records:
        raise ValidationError(f"{path}: no data rows")
    table = np.array(records)
    if np.any(np.isnan(table[:, :4])):
        raise ValidationError(f"{path}: s, x, y and z are required in every row")

    def column(block: np.ndarray) -> Optional[np.ndarray]:
        if np.all(np.isnan(block)):
            return None
        if np.any(np.isnan(block)):
            raise ValidationError(f"{path}: column group is only partially filled")
        return block

    frames = column(table[:, 4:13])
    logger.info(f"Read {table.shape[0]} samples from {path}")
    return CurveSamples(
        s_grid=table[:, 0],
        points=table[:, 1:4],
        frames=None if frames is None else frames.reshape(-1, 3, 3),
        kappa=column(table[:, 13]),
        tau=column(table[:, 14]),
    )


def write_curve_obj(samples: CurveSamples, path: PathLike, name: str = "curve") -> Path:
    """Polyline as v records plus overlapping l chains"""
    path = Path(path)
    count = len(samples)
    with open(path, 'w') as f:
        f.write(f"# {name}: {count} vertices\n")
        f.write(f"o {name}\n")
        for x, y, z in samples.points:
            f.write(f"v {format_float(x)} {format_float(y)} {format_float(z)}\n")
        for start in range(1, count, OBJ_CHAIN_LENGTH - 1):
            stop = min(start + OBJ_CHAIN_LENGTH - 1, count)
            f.write("l " + " ".join(str(i) for i in range(start, stop + 1)) + "\n")
    logger.info(f"Wrote {count}-vertex polyline to {path}")
    return path


def profiles_from_samples(samples: CurveSamples) -> Tuple[SampledProfile, SampledProfile]:
    """Curvature and torsion columns as sampled profiles (node values kept exactly)"""
    if samples.kappa is None or samples.tau is None:
        raise ValidationError("samples carry no curvature/torsion columns")
    return (SampledProfile(samples.s_grid, samples.kappa, label="kappa"),
            SampledProfile(samples.s_grid, samples.tau, label="tau"))
