from click import echo, secho

from .colors import ERROR, FAIL, PASS, SUCCESS, WARNING


def h2(text):
    secho(f"\n### {text}", fg=SUCCESS)


def enum_elm(text, nl=True, dash_color=SUCCESS):
    prefix_char = "-"
    if dash_color == ERROR:
        prefix_char = "x"
    elif dash_color == WARNING:
        prefix_char = "~"
    secho(f"{prefix_char} ", fg=dash_color, nl=False)
    echo(f"{text}", nl=nl)


def error(text, nl=True):
    secho("\n## Error", fg=ERROR, err=True)
    secho("x ", fg=ERROR, err=True, nl=False)
    echo(f"{text}\n", err=True, nl=nl)


def verdict(passed, command, summary):
    """one line per run: PASS|FAIL <command> <summary>"""
    secho("PASS" if passed else "FAIL", fg=PASS if passed else FAIL, bold=True, nl=False)
    echo(f" {command} {summary}")
