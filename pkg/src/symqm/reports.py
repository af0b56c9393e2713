"""Deterministic report and trajectory serialization.

Floating-point values are written with 17 significant decimal digits and
object keys are sorted, so identical inputs produce byte-identical files.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .dynamics import Trajectory

__all__ = ["canonical_json", "write_report", "write_trajectory_csv"]


def _format_float(x: float) -> str:
    return "%.17g" % x


def _render(obj, indent: int) -> str:
    pad = "  " * indent
    if obj is None:
        return "null"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _format_float(float(obj))
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, (list, tuple, np.ndarray)):
        items = list(obj)
        if not items:
            return "[]"
        body = ",\n".join(f"{pad}  {_render(v, indent + 1)}" for v in items)
        return f"[\n{body}\n{pad}]"
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        body = ",\n".join(
            f"{pad}  {json.dumps(str(k))}: {_render(obj[k], indent + 1)}"
            for k in sorted(obj, key=str)
        )
        return f"{{\n{body}\n{pad}}}"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def canonical_json(obj) -> str:
    """Render ``obj`` as deterministic JSON text."""
    return _render(obj, 0) + "\n"


def write_report(obj, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="\n") as fh:
        fh.write(canonical_json(obj))
    return path


def write_trajectory_csv(traj: Trajectory, path) -> Path:
    """Write a trajectory as CSV: t, Re/Im of each amplitude, norm, energy."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    n = traj.dim
    header = ["t"]
    for k in range(n):
        header += [f"re_{k}", f"im_{k}"]
    header += ["norm", "energy"]
    with open(path, "w", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in range(len(traj)):
            values = [traj.times[row]]
            for k in range(n):
                z = traj.states[row, k]
                values += [z.real, z.imag]
            values += [traj.norms[row], traj.energies[row]]
            fh.write(",".join(_format_float(float(v)) for v in values) + "\n")
    return path
