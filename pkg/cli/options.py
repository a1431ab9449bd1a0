from collections import namedtuple

import click
import numpy as np

GRID_ENVVAR = "WARPLAB_GRID"


class Sweep(namedtuple("Sweep", ["start", "stop", "count", "cast"], defaults=[float])):
    """inclusive start:stop:count range of a scalar option"""

    def values(self):
        points = np.linspace(self.start, self.stop, self.count)
        if self.cast is int:
            return [int(round(p)) for p in points]
        return [float(p) for p in points]

    def __str__(self):
        return f"{self.start:g}:{self.stop:g}:{self.count}"


class ScalarOrSweep(click.ParamType):
    name = "scalar"

    def __init__(self, base=float):
        self.base = base
        self.name = f"{base.__name__}|start:stop:count"

    def convert(self, value, param, ctx):
        if isinstance(value, Sweep):
            return value
        if isinstance(value, (int, float)) and not isinstance(value, bool):
            return self.base(value)
        text = str(value).strip()
        if ":" in text:
            parts = text.split(":")
            if len(parts) != 3:
                self.fail(f"expected start:stop:count, got '{text}'", param, ctx)
            try:
                sweep = Sweep(float(parts[0]), float(parts[1]), int(parts[2]), self.base)
            except ValueError:
                self.fail(f"'{text}' is not a valid start:stop:count range", param, ctx)
            if sweep.count < 1:
                self.fail(f"sweep count must be >= 1, got {sweep.count}", param, ctx)
            return sweep
        try:
            return self.base(text)
        except ValueError:
            self.fail(f"'{text}' is not a valid {self.base.__name__}", param, ctx)


def _values(value):
    return value.values() if isinstance(value, Sweep) else [value]


def bounded(low, strict=False):
    """option callback rejecting values (or sweep points) below `low`"""

    def callback(ctx, param, value):
        if value is None:
            return value
        for v in _values(value):
            if v < low or (strict and v == low):
                relation = ">" if strict else ">="
                raise click.BadParameter(f"must be {relation} {low:g}, got {v:g}", ctx=ctx, param=param)
        return value

    return callback


positive = bounded(0, strict=True)
nonnegative = bounded(0)


def sweepable(*decls, base=float, callback=None, **kwargs):
    """option that takes a scalar or a start:stop:count sweep"""
    return click.option(*decls, type=ScalarOrSweep(base), callback=callback, show_default=True, **kwargs)


def grid_option(default):
    return sweepable(
        "--grid",
        base=int,
        default=default,
        envvar=GRID_ENVVAR,
        callback=bounded(16),
        help=f"grid points (env {GRID_ENVVAR})",
    )


def extract_sweep(params):
    """(name, Sweep) of the single swept option, or None"""
    swept = [(name, value) for name, value in params.items() if isinstance(value, Sweep)]
    if len(swept) > 1:
        names = ", ".join(f"--{name.replace('_', '-')}" for name, _ in swept)
        raise click.UsageError(f"at most one option can be swept per run, got {names}")
    return swept[0] if swept else None
