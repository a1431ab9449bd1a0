from dataclasses import MISSING, fields

import click
from engine.utils import underscored_to_dashed
from modules import Modules

from .options import GRID_ENVVAR, bounded, sweepable
from .run import dispatch

_TYPES = {"int": int, "float": float, "str": str}


def _field_type(f):
    return _TYPES.get(f.type, f.type) if isinstance(f.type, str) else f.type


def _field_option(f):
    base = _field_type(f)
    kwargs = {"default": f.default if f.default is not MISSING else None, "help": f.metadata.get("help")}
    decls = [f"--{underscored_to_dashed(f.name)}", f.name]
    if base is str:
        return click.option(*decls, type=str, show_default=True, **kwargs)
    if f.name == "points":
        kwargs.update(envvar=GRID_ENVVAR, callback=bounded(16))
    return sweepable(*decls, base=base, **kwargs)


def _command(manifest_id, manifest):
    command_id = f"counterexample.{manifest_id}"

    @click.pass_context
    def callback(ctx, **params):
        return dispatch(ctx, command_id, params, extra={"manifest": manifest_id})

    for f in reversed(fields(manifest.params_type)):
        callback = _field_option(f)(callback)
    return click.command(name=manifest_id, help=manifest.description)(callback)


class CounterexampleGroup(click.Group):
    """one subcommand per registered construction"""

    def list_commands(self, ctx):
        return sorted(Modules().keys())

    def get_command(self, ctx, name):
        modules = Modules()
        if name not in modules:
            return None
        return _command(name, modules[name]())


@click.group(name="counterexample", cls=CounterexampleGroup)
def counterexample():
    """constructions showing where the bounds stop holding"""


def run_construction(command, params, out_dir):
    manifest = Modules()[command.split(".", 1)[1]]()
    report = manifest.build(manifest.params(**params))
    report.write(out_dir)
    manifest.print_summary(report)
    summary = (
        f"n={report.n} gamma={report.gamma:g} lambda1={report.lambda1.value:.9g} "
        f"diameter={report.diameter.value:.9g}"
    )
    if report.failed_checks:
        summary += " failed: " + ", ".join(check.name for check in report.failed_checks)
    return report.passed, summary
