"""CSV output helpers.

All real values are written with 17 significant digits so that files
round-trip float64 exactly and reruns are byte-identical.
"""

from __future__ import annotations

import numpy as np


def g17(x) -> str:
    """Format a real with 17 significant digits."""
    return format(float(x), ".17g")


def format_cell(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return g17(value)
    return str(value)


def write_csv(path, header, rows) -> None:
    """Write rows (iterables of cells) under a comma-separated header."""
    lines = [",".join(header)]
    lines.extend(",".join(format_cell(c) for c in row) for row in rows)
    with open(path, "w", newline="") as fh:
        fh.write("\n".join(lines) + "\n")
