"""CSV reading and writing.

Input tables are rectangular and numeric. The first row is taken as a header
when any of its cells is not a number. A final header column named ``label``
holds 0 (inlier) / 1 (outlier). Numbers are written locale-independently.
"""

from __future__ import annotations

import csv
import math
from pathlib import Path
from typing import Iterable, Optional, TextIO

import numpy as np

from .core import DataError, Dataset


def _is_number(cell: str) -> bool:
    try:
        float(cell)
    except ValueError:
        return False
    return True


def read_csv(stream: TextIO, source: str = "<input>") -> Dataset:
    rows = [(i, r) for i, r in enumerate(csv.reader(stream), start=1) if any(c.strip() for c in r)]
    if not rows:
        raise DataError(f"{source}: empty file")

    header: Optional[list] = None
    if not all(_is_number(c) for c in rows[0][1]):
        header = [c.strip() for c in rows[0][1]]
        rows = rows[1:]
        if not rows:
            raise DataError(f"{source}: header but no data rows")
    width = len(header) if header is not None else len(rows[0][1])
    has_label = header is not None and header[-1].lower() == "label"

    values = np.empty((len(rows), width))
    for r, (lineno, cells) in enumerate(rows):
        if len(cells) != width:
            raise DataError(f"{source}: row {lineno} has {len(cells)} columns, expected {width}")
        for c, cell in enumerate(cells):
            try:
                v = float(cell)
            except ValueError:
                raise DataError(
                    f"{source}: row {lineno}, column {c + 1}: cannot parse {cell.strip()!r} as a number"
                ) from None
            if not math.isfinite(v):
                raise DataError(f"{source}: row {lineno}, column {c + 1}: non-finite value {cell.strip()!r}")
            values[r, c] = v

    labels = None
    names = header
    if has_label:
        lab = values[:, -1]
        bad = np.flatnonzero((lab != 0) & (lab != 1))
        if bad.size:
            lineno = rows[bad[0]][0]
            raise DataError(f"{source}: row {lineno}, column {width}: label must be 0 or 1")
        labels = lab.astype(bool)
        values = values[:, :-1]
        names = header[:-1]
        if values.shape[1] == 0:
            raise DataError(f"{source}: no feature columns besides the label")
    return Dataset(values, labels, names)


def load_csv(path) -> Dataset:
    path = Path(path)
    try:
        with path.open(newline="") as fh:
            return read_csv(fh, str(path))
    except FileNotFoundError:
        raise DataError(f"{path}: no such file") from None
    except UnicodeDecodeError as exc:
        raise DataError(f"{path}: not a text file ({exc.reason})") from None


def write_dataset(data: Dataset, stream: TextIO) -> None:
    """Write ``data`` so that :func:`read_csv` reproduces it exactly."""
    names = list(data.names) if data.names else [f"x{j + 1}" for j in range(data.dim)]
    w = csv.writer(stream, lineterminator="\n")
    w.writerow(names + (["label"] if data.labels is not None else []))
    for i, row in enumerate(data.points.tolist()):
        cells = [repr(v) for v in row]
        if data.labels is not None:
            cells.append("1" if data.labels[i] else "0")
        w.writerow(cells)


def fmt(x: float) -> str:
    return f"{x:.9g}"


def write_rows(stream: TextIO, header: list[str], rows: Iterable[Iterable]) -> None:
    w = csv.writer(stream, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(v) if isinstance(v, float) else v for v in row])
