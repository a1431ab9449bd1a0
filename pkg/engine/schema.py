import json
from collections import namedtuple
from pathlib import Path

import numpy as np

from .exceptions import WarplabError
from .geometry import FieldKind, RadialField, Topology, WarpedMetric
from .profile import ProfileCurve

Column = namedtuple("Column", ["name", "type"])

FLOAT_FORMAT = "%.17g"

METRIC = [Column("r", float), Column("w", float)]
CURVATURE = [
    Column("r", float),
    Column("ric_radial", float),
    Column("ric_tangential", float),
    Column("biric_min", float),
]
EIGENFUNCTION = [Column("r", float), Column("phi", float)]
WEIGHT = [Column("r", float), Column("u", float)]
PROFILE = [Column("v", float), Column("I", float)]
RESIDUAL = [Column("v", float), Column("residual", float)]
VERDICT = [
    Column("kind", str),
    Column("lhs", float),
    Column("rhs", float),
    Column("slack", float),
    Column("rigid", bool),
]


def header(schema):
    return ",".join(column.name for column in schema)


def _format(value, column_type):
    if column_type is float:
        return FLOAT_FORMAT % value
    if column_type is bool:
        return "true" if value else "false"
    return str(value)


def _parse(text, column_type):
    if column_type is float:
        return float(text)
    if column_type is bool:
        return text == "true"
    return text


def write_csv(path, schema, columns):
    """columns: one sequence per schema column, all of equal length"""
    path = Path(path)
    rows = zip(*columns)
    with path.open("w") as fh:
        fh.write(header(schema) + "\n")
        for row in rows:
            fh.write(",".join(_format(value, column.type) for value, column in zip(row, schema)) + "\n")
    return path


def read_csv(path, schema):
    path = Path(path)
    with path.open() as fh:
        first = fh.readline().strip()
        if first != header(schema):
            raise WarplabError(f"{path.name}: expected header '{header(schema)}', found '{first}'")
        rows = [line.strip().split(",") for line in fh if line.strip()]
    columns = []
    for idx, column in enumerate(schema):
        values = [_parse(row[idx], column.type) for row in rows]
        columns.append(np.array(values, dtype=float) if column.type is float else values)
    return columns


def write_json(path, payload):
    path = Path(path)
    with path.open("w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return path


def read_json(path):
    with Path(path).open() as fh:
        return json.load(fh)


def sidecar(path):
    path = Path(path)
    return path.with_suffix(".json")


def write_metric(path, metric):
    path = write_csv(path, METRIC, [metric.grid, metric.warp])
    write_json(sidecar(path), {"n": metric.n, "topology": metric.topology.value, "label": metric.label})
    return path


def read_metric(path):
    grid, warp = read_csv(path, METRIC)
    meta = read_json(sidecar(path))
    return WarpedMetric(meta["n"], grid, warp, Topology(meta["topology"]), label=meta.get("label", ""))


def write_curvature(path, profile):
    return write_csv(path, CURVATURE, [profile.grid, profile.ric_radial, profile.ric_tangential, profile.biric_min])


def write_field(path, field, schema=WEIGHT):
    return write_csv(path, schema, [field.grid, field.values])


def read_field(path, schema=WEIGHT, kind=FieldKind.WEIGHT):
    grid, values = read_csv(path, schema)
    return RadialField(grid, values, kind)


def write_profile(path, curve):
    path = write_csv(path, PROFILE, [curve.v, curve.I])
    write_json(sidecar(path), curve.metadata())
    return path


def read_profile(path):
    v, I = read_csv(path, PROFILE)
    meta = read_json(sidecar(path))
    total = meta.get("V_total")
    return ProfileCurve(
        v,
        I,
        meta["n"],
        meta["lambda"],
        meta.get("gamma", 0.0),
        float("inf") if total is None else total,
        tuple(meta.get("flags", ())),
    )


def write_residual(path, sample):
    return write_csv(path, RESIDUAL, [sample.v, sample.residual])


def write_verdicts(path, verdicts):
    rows = [verdict.as_row() for verdict in verdicts]
    return write_csv(path, VERDICT, [[row[column.name] for row in rows] for column in VERDICT])
