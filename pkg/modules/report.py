from collections import namedtuple
from dataclasses import dataclass, field
from pathlib import Path

import jinja2
import numpy as np
from engine import schema
from engine.geometry import DiameterEstimate, RadialField, WarpedMetric
from engine.spectral import SpectralResult

TEMPLATE_PATH = Path(__file__).parent

Check = namedtuple("Check", ["name", "value", "threshold", "passed"])


def check_at_most(name, value, threshold):
    return Check(name, float(value), float(threshold), bool(value <= threshold))


def check_at_least(name, value, threshold):
    return Check(name, float(value), float(threshold), bool(value >= threshold))


@dataclass(frozen=True, eq=False)
class ConstructionReport:
    construction: str
    n: int
    gamma: float
    metric: WarpedMetric
    u: RadialField
    parameters: dict
    residual_identity: float
    lambda1: SpectralResult
    diameter: DiameterEstimate
    checks: list = field(default_factory=list)
    arrays: dict = field(default_factory=dict)

    @property
    def passed(self):
        return all(check.passed for check in self.checks)

    @property
    def failed_checks(self):
        return [check for check in self.checks if not check.passed]

    def to_dict(self):
        return {
            "construction": self.construction,
            "n": self.n,
            "gamma": self.gamma,
            "parameters": self.parameters,
            "residual_identity": self.residual_identity,
            "lambda1": self.lambda1.to_dict(),
            "diameter": {"value": self.diameter.value, "exact": self.diameter.exact},
            "topology": self.metric.topology.value,
            "points": self.metric.points,
            "checks": [check._asdict() for check in self.checks],
            "passed": self.passed,
        }

    def render_markdown(self):
        tpl_loader = jinja2.FileSystemLoader(searchpath=TEMPLATE_PATH.absolute())
        tpl_env = jinja2.Environment(loader=tpl_loader, keep_trailing_newline=True)
        tpl = tpl_env.get_template("report.md.tpl")
        return tpl.render(report=self, summary=self.to_dict())

    def write(self, directory):
        """metric.csv (+ metric.json), u.csv, eigenfunction.csv, report.json and report.md"""
        directory = Path(directory)
        directory.mkdir(parents=True, exist_ok=True)
        schema.write_metric(directory / "metric.csv", self.metric)
        schema.write_field(directory / "u.csv", self.u)
        schema.write_field(directory / "eigenfunction.csv", self.lambda1.eigenfunction, schema.EIGENFUNCTION)
        if self.arrays:
            names = sorted(self.arrays)
            columns = [schema.Column("r", float)] + [schema.Column(name, float) for name in names]
            schema.write_csv(directory / "profiles.csv", columns, [self.metric.grid] + [self.arrays[k] for k in names])
        schema.write_json(directory / "report.json", _plain(self.to_dict()))
        with (directory / "report.md").open("w") as fh:
            fh.write(self.render_markdown())
        return directory


def _plain(value):
    # numpy scalars are not json serializable
    if isinstance(value, dict):
        return {key: _plain(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(item) for item in value]
    if isinstance(value, np.generic):
        return value.item()
    return value
