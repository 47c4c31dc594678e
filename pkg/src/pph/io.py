"""File formats: distribution functions, spaces, sample CSVs, set sequences.

All structured files are JSON.  A space file holds the carrier labels, the
triangle-function kind, and the distance matrix; matrix entries are either
inline distribution-function objects or string references to standalone
distribution-function files resolved relative to the space file.  Readers
validate every invariant (and re-run the space axioms) and reject otherwise.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

from .distfn import DistributionFn, make_step
from .errors import PPHError
from .pmspace import PMSpace, build
from .triangle import TriangleFn


class FormatError(PPHError):
    """A file does not conform to its documented schema."""


def distribution_to_obj(f: DistributionFn) -> dict:
    return {
        "breakpoints": list(f.breakpoints),
        "values": list(f.values),
        "base_value": f.base_value,
    }


def distribution_from_obj(obj) -> DistributionFn:
    if not isinstance(obj, dict):
        raise FormatError(f"expected an object, got {type(obj).__name__}")
    missing = {"breakpoints", "values", "base_value"} - set(obj)
    if missing:
        raise FormatError(f"missing fields {sorted(missing)}")
    try:
        return make_step(obj["breakpoints"], obj["values"], obj["base_value"])
    except (TypeError, ValueError) as exc:
        raise FormatError(f"bad distribution function: {exc}") from exc


def save_distribution(f: DistributionFn, path) -> None:
    Path(path).write_text(json.dumps(distribution_to_obj(f), indent=1) + "\n")


def load_distribution(path) -> DistributionFn:
    return distribution_from_obj(json.loads(Path(path).read_text()))


def space_to_obj(space: PMSpace) -> dict:
    return {
        "points": [str(p) for p in space.points],
        "tau": space.tau.kind,
        "dist": [
            [distribution_to_obj(f) for f in row] for row in space.dist
        ],
    }


def save_space(space: PMSpace, path) -> None:
    Path(path).write_text(json.dumps(space_to_obj(space), indent=1) + "\n")


def load_space(path, max_triples=None) -> PMSpace:
    """Load and fully re-validate a space file (axioms included)."""
    path = Path(path)
    try:
        obj = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: not valid JSON: {exc}") from exc
    for key in ("points", "tau", "dist"):
        if key not in obj:
            raise FormatError(f"{path}: missing field {key!r}")
    points = obj["points"]
    if not isinstance(points, list) or not all(isinstance(p, str) for p in points):
        raise FormatError(f"{path}: points must be a list of strings")
    tau = TriangleFn(obj["tau"])
    rows = obj["dist"]
    if not isinstance(rows, list):
        raise FormatError(f"{path}: dist must be a matrix")
    matrix = []
    for row in rows:
        if not isinstance(row, list):
            raise FormatError(f"{path}: dist must be a matrix")
        entries = []
        for cell in row:
            if isinstance(cell, str):
                entries.append(load_distribution(path.parent / cell))
            else:
                entries.append(distribution_from_obj(cell))
        matrix.append(entries)
    return build(points, matrix, tau, max_triples=max_triples)


def load_samples_csv(path):
    """Parse a sample CSV with header label,sample_index,coord_0..coord_{d-1}.

    Returns (labels, samples) where samples[i] is the list of coordinate
    vectors for labels[i], ordered by sample index.  Rejects duplicate
    (label, sample_index) pairs and ragged data.
    """
    path = Path(path)
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise FormatError(f"{path}: empty file") from None
        if (
            len(header) < 3
            or header[0] != "label"
            or header[1] != "sample_index"
            or any(h != f"coord_{i}" for i, h in enumerate(header[2:]))
        ):
            raise FormatError(f"{path}: bad header {header!r}")
        dim = len(header) - 2
        per_label: dict[str, dict[int, list[float]]] = {}
        order: list[str] = []
        for lineno, row in enumerate(reader, start=2):
            if len(row) != dim + 2:
                raise FormatError(f"{path}:{lineno}: expected {dim + 2} columns")
            label = row[0]
            try:
                idx = int(row[1])
                coords = [float(v) for v in row[2:]]
            except ValueError as exc:
                raise FormatError(f"{path}:{lineno}: {exc}") from exc
            if label not in per_label:
                per_label[label] = {}
                order.append(label)
            if idx in per_label[label]:
                raise FormatError(
                    f"{path}:{lineno}: duplicate sample {idx} for {label!r}"
                )
            per_label[label][idx] = coords
    if not order:
        raise FormatError(f"{path}: no data rows")
    counts = {len(v) for v in per_label.values()}
    if len(counts) != 1:
        raise FormatError(
            f"{path}: sample counts differ across labels: {sorted(counts)}"
        )
    samples = [
        [per_label[label][i] for i in sorted(per_label[label])] for label in order
    ]
    return order, samples


def load_set_sequence(path):
    """Load a JSON array of arrays of point labels."""
    path = Path(path)
    try:
        obj = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: not valid JSON: {exc}") from exc
    if not isinstance(obj, list) or not all(isinstance(s, list) for s in obj):
        raise FormatError(f"{path}: expected an array of label arrays")
    for s in obj:
        if not all(isinstance(p, str) for p in s):
            raise FormatError(f"{path}: labels must be strings")
    return [tuple(s) for s in obj]


def curve_text(name: str, f: DistributionFn) -> str:
    """Plot-ready staircase columns (x, value) with a comment header."""
    lines = [f"# {name}", "# x value"]
    if not f.breakpoints:
        lines.append(f"0 {f.base_value!r}")
        lines.append(f"1 {f.base_value!r}")
    else:
        lines.append(f"{f.breakpoints[0] - 1.0!r} {f.base_value!r}")
        prev = f.base_value
        for b, v in zip(f.breakpoints, f.values):
            lines.append(f"{b!r} {prev!r}")
            lines.append(f"{b!r} {v!r}")
            prev = v
        lines.append(f"{f.breakpoints[-1] + 1.0!r} {f.values[-1]!r}")
    return "\n".join(lines) + "\n"
