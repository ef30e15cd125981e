"""CSV / JSON output with exact-reproduction formatting.

All floating-point values are written with 17 significant digits so that
files round-trip to the same doubles.
"""

import csv
import json
from pathlib import Path


def fmt(x) -> str:
    if isinstance(x, float):
        return format(x, ".17g")
    return str(x)


def write_csv(path, header, rows) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(header)
        for row in rows:
            writer.writerow([fmt(x) for x in row])


def write_json(path, payload) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w") as f:
        json.dump(payload, f, indent=2, default=_jsonable)
        f.write("\n")


def _jsonable(x):
    try:
        import numpy as np

        if isinstance(x, np.integer):
            return int(x)
        if isinstance(x, np.floating):
            return float(x)
        if isinstance(x, np.ndarray):
            return x.tolist()
    except ImportError:
        pass
    raise TypeError(f"not JSON serializable: {type(x)}")


def pmf_rows(pmf):
    return [(h, float(m)) for h, m in enumerate(pmf.mass)]


def moment_rows(table):
    return [
        (k + 1, float(table.factorial[k]), float(table.raw[k]))
        for k in range(len(table.factorial))
    ]
