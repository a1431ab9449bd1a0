from contextlib import contextmanager


class WarplabError(Exception):
    exit_code = 5


class RangeError(WarplabError):
    """parameter outside the range where a bound or construction is claimed"""

    exit_code = 3


class NoSolution(WarplabError):
    exit_code = 3


class ConeSingularity(WarplabError):
    pass


class ConvergenceError(WarplabError):
    pass


class GridMismatch(WarplabError):
    pass


class ProfileDomainError(WarplabError):
    pass


class StageError(WarplabError):
    exit_code = 4

    def __init__(self, stage, message):
        self.stage = stage
        super().__init__(f"[{stage}] {message}")


@contextmanager
def stage(name):
    """re-raise engine and solver failures inside the block as a StageError tagged with `name`"""
    try:
        yield
    except StageError:
        raise
    except (WarplabError, ValueError, FloatingPointError, ZeroDivisionError) as e:
        raise StageError(name, str(e)) from e
