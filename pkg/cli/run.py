import logging
from collections import namedtuple
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from importlib import import_module
from pathlib import Path

import click
from engine.exceptions import WarplabError
from engine.utils import params_digest

from . import echo
from .options import extract_sweep

logger = logging.getLogger(__name__)

# command id => "module:function"; resolved lazily so worker processes can import them
RUNNERS = {
    "spectrum": "cli.spectrum:run_spectrum",
    "bounds.diameter": "cli.bounds:run_diameter",
    "bounds.volume": "cli.bounds:run_volume",
    "bounds.gamma-range": "cli.bounds:run_gamma_range",
    "counterexample.large-diameter": "cli.counterexample:run_construction",
    "counterexample.supercritical": "cli.counterexample:run_construction",
    "profile.model": "cli.profile:run_model",
    "profile.radial": "cli.profile:run_radial",
    "profile.check": "cli.profile:run_check",
    "identity.grouping": "cli.identity:run_grouping",
}

RunResult = namedtuple("RunResult", ["passed", "summary", "out_dir", "exit_code"])


@dataclass(frozen=True, eq=False)
class RunConfig:
    command: str
    params: dict
    out: Path
    sweep: tuple = None  # (option name, values)
    workers: int = 1
    extra: dict = field(default_factory=dict)

    def points(self):
        if self.sweep is None:
            return [dict(self.params)]
        name, values = self.sweep
        return [dict(self.params, **{name: value}) for value in values]

    def run_dir(self, params):
        return Path(self.out) / f"{self.command.replace('.', '-')}-{params_digest(self.command, params)}"


def _runner(command):
    module, function = RUNNERS[command].split(":")
    return getattr(import_module(module), function)


def _run_point(command, params, out_dir):
    try:
        passed, summary = _runner(command)(command, params, Path(out_dir))
    except WarplabError as e:
        return RunResult(False, str(e), str(out_dir), e.exit_code)
    return RunResult(passed, summary, str(out_dir), 0 if passed else 1)


def build_run_config(ctx, command, params, extra=None):
    root = ctx.find_root().obj or {}
    sweep = extract_sweep(params)
    fixed = {name: value for name, value in params.items() if sweep is None or name != sweep[0]}
    return RunConfig(
        command,
        fixed,
        Path(root.get("out", "runs")),
        None if sweep is None else (sweep[0], sweep[1].values()),
        root.get("workers", 1),
        extra or {},
    )


def dispatch(ctx, command, params, extra=None):
    """leaf command body: return the RunConfig when only parsing, otherwise run it and exit with its status"""
    config = build_run_config(ctx, command, params, extra)
    root = ctx.find_root()
    if root.obj is not None and root.obj.get("dry_run"):
        root.obj["config"] = config
        return config
    ctx.exit(execute(config))


def execute(config):
    """
    Run every point of `config`, one artifact directory per point, and print one verdict line each.
    Returns 0 when all verdicts pass, 1 when some verdict failed and the exit code of the first engine error
    otherwise.
    """
    points = config.points()
    jobs = [(config.command, params, str(config.run_dir(params))) for params in points]
    for _, _, out_dir in jobs:
        try:
            Path(out_dir).mkdir(parents=True, exist_ok=True)
        except OSError as e:
            raise click.UsageError(f"output directory {out_dir} is not writable: {e}") from e

    if len(jobs) > 1 and config.workers != 1:
        logger.info("running %d points on %s workers", len(jobs), config.workers or "all")
        with ProcessPoolExecutor(max_workers=config.workers or None) as pool:
            results = list(pool.map(_run_point, *zip(*jobs)))
    else:
        results = [_run_point(*job) for job in jobs]

    status = 0
    for (_, params, _), result in zip(jobs, results):
        if result.exit_code > 1:
            echo.error(result.summary)
            echo.verdict(False, config.command, f"{result.summary} ({result.out_dir})")
            status = status if status > 1 else result.exit_code
            continue
        echo.verdict(result.passed, config.command, f"{result.summary} ({result.out_dir})")
        if not result.passed and status == 0:
            status = 1
    return status
