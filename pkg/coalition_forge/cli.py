# cli.py
"""
coalition-forge command line.

Documents go to stdout, diagnostics to stderr. Exit codes: 0 success,
1 structural failure (no full span, not representable, mismatch),
2 unreadable or malformed input and usage errors.
"""
import argparse
import contextlib
import json
import logging
import sys
from typing import Callable, Optional, Sequence, TextIO

from coalition_forge.config import Limits, debug_enabled, get_name_and_version_from_toml_path
from coalition_forge.core import (
    CoalitionFamily,
    DocumentError,
    GameError,
    InvalidConfig,
    InvalidPartition,
    NoFullSpan,
    NotRepresentable,
)
from coalition_forge.documents import (
    parse_assignment,
    parse_game,
    parse_scenario,
    serialize_allocation,
    serialize_assignment,
    serialize_game,
    serialize_report,
    serialize_violations,
)
from coalition_forge.representation import minimal_representation, trivial_expansion, validate_representation
from coalition_forge.solution import (
    chi,
    dual_game,
    equivalent_game,
    harsanyi_allocation,
    is_cost_game,
    is_dummy,
    is_superadditive,
    is_symmetric,
    partition_game,
    shapley,
)
from coalition_forge.structure import classify, has_full_span

logger = logging.getLogger(__name__)

PACKAGE_LOGGER = "coalition_forge"


class Context:
    def __init__(self, args: argparse.Namespace, stdout: TextIO, stderr: TextIO, limits: Limits):
        self.args = args
        self.stdout = stdout
        self.stderr = stderr
        self.limits = limits

    def emit(self, document: str) -> None:
        self.stdout.write(document)

    def note(self, message: str) -> None:
        self.stderr.write(message + "\n")


def _read(path: str) -> str:
    try:
        with open(path, "r", encoding="utf-8") as f:
            return f.read()
    except OSError as e:
        raise DocumentError(f"cannot read {path}: {e.strerror or e}") from None
    except UnicodeDecodeError as e:
        raise DocumentError(f"{path} is not valid UTF-8 (byte offset {e.start})") from None


def _game(ctx: Context, attr: str = "game"):
    return parse_game(_read(getattr(ctx.args, attr)))


def cmd_check(ctx: Context) -> int:
    game = _game(ctx)
    report = classify(game.family, ctx.limits)
    ctx.emit(serialize_report(report, game.family))
    if report.hierarchy is not None:
        h = "found"
    elif report.hierarchy_searched:
        h = "none"
    else:
        h = "not searched"
    ctx.note(f"full span: {'yes' if report.full_span else 'no'}; hierarchy: {h}")
    return 0 if report.full_span else 1


def _require_full_span(ctx: Context, game) -> None:
    if not has_full_span(game.family, ctx.limits):
        raise NoFullSpan("family does not have full span")


def cmd_represent(ctx: Context) -> int:
    game = _game(ctx)
    _require_full_span(ctx, game)
    ctx.emit(serialize_assignment(minimal_representation(game, ctx.limits)))
    return 0


def cmd_solve(ctx: Context) -> int:
    ctx.emit(serialize_allocation(chi(_game(ctx), ctx.limits)))
    return 0


def cmd_shapley(ctx: Context) -> int:
    ctx.emit(serialize_allocation(shapley(_game(ctx), ctx.limits)))
    return 0


def cmd_extend(ctx: Context) -> int:
    ctx.emit(serialize_game(equivalent_game(_game(ctx), ctx.limits)))
    return 0


def cmd_validate(ctx: Context) -> int:
    game = _game(ctx)
    assignment = parse_assignment(_read(ctx.args.assignment))
    report = validate_representation(assignment, game)
    ctx.emit(serialize_violations(report))
    for message in report.messages():
        ctx.note(message)
    return 0 if report.ok else 1


def cmd_analyze(ctx: Context) -> int:
    game = _game(ctx)
    names = game.family.players.names
    pairs = [[a, b] for k, a in enumerate(names) for b in names[k + 1:] if is_symmetric(game, a, b)]
    dummies = [name for name in names if is_dummy(game, name)]
    ctx.emit(json.dumps({
        "symmetric_pairs": pairs,
        "dummies": dummies,
        "superadditive": is_superadditive(game, ctx.limits),
        "cost_game": is_cost_game(game, ctx.limits),
    }, indent=2, ensure_ascii=False) + "\n")
    return 0


def cmd_gen_partition(ctx: Context) -> int:
    scenario = parse_scenario(_read(ctx.args.scenario))
    ctx.emit(serialize_game(partition_game(scenario, ctx.limits)))
    return 0


def cmd_expand(ctx: Context) -> int:
    assignment = parse_assignment(_read(ctx.args.assignment))
    if ctx.args.game:
        family = _game(ctx).family
        if family.players != assignment.players:
            raise DocumentError("game and assignment list different players")
    else:
        family = CoalitionFamily(assignment.players, tuple({f.users for f in assignment.facilities}))
    expanded = trivial_expansion(assignment, ctx.args.seed, ctx.args.zero_facilities, ctx.args.max_replicas, family)
    ctx.emit(serialize_assignment(expanded))
    return 0


def cmd_harsanyi(ctx: Context) -> int:
    allocation = harsanyi_allocation(_game(ctx), ctx.limits)
    if allocation is None:
        raise NotRepresentable("game is not in the span of the restricted unanimity games")
    ctx.note("note: unanimity equal-split allocation; an alternative to the equitable solution, not chi")
    ctx.emit(serialize_allocation(allocation))
    return 0


def cmd_dual(ctx: Context) -> int:
    ctx.emit(serialize_game(dual_game(_game(ctx))))
    return 0


def _count(minimum: int) -> Callable[[str], int]:
    def parse(text: str) -> int:
        try:
            n = int(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
        if n < minimum:
            raise argparse.ArgumentTypeError(f"must be at least {minimum}")
        return n
    return parse


def build_parser() -> argparse.ArgumentParser:
    name, version = get_name_and_version_from_toml_path()
    parser = argparse.ArgumentParser(
        prog="coalition-forge",
        description="Game representations and the equitable solution on curtailed coalition families.",
    )
    parser.add_argument("--version", action="version", version=f"{name or 'coalition-forge'} {version or 'unknown'}")
    parser.add_argument("--debug", action="store_true", help="debug logging on stderr")
    sub = parser.add_subparsers(dest="command", metavar="command", required=True)

    def add(name: str, fn: Callable[[Context], int], help_text: str, game: bool = True) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_text, description=help_text)
        if game:
            p.add_argument("game", help="game document (JSON)")
        p.set_defaults(handler=fn)
        return p

    add("check", cmd_check, "classify the coalition family")
    add("represent", cmd_represent, "print the minimal representation")
    add("solve", cmd_solve, "print the equitable solution")
    add("shapley", cmd_shapley, "print the Shapley value (family of all coalitions only)")
    add("extend", cmd_extend, "print the equivalent game on all coalitions")
    p = add("validate", cmd_validate, "check that an assignment represents the game")
    p.add_argument("assignment", help="assignment document (JSON)")
    add("analyze", cmd_analyze, "symmetric pairs, dummies and superadditivity")
    p = add("gen-partition", cmd_gen_partition, "build the game of a partition scenario", game=False)
    p.add_argument("scenario", help="partition scenario document (JSON)")
    p = add("expand", cmd_expand, "print a seeded trivial expansion of an assignment", game=False)
    p.add_argument("assignment", help="assignment document (JSON)")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--zero-facilities", type=_count(0), default=0)
    p.add_argument("--max-replicas", type=_count(1), default=2)
    p.add_argument("--game", default=None, help="draw zero-cost user-sets from this game's family")
    add("harsanyi", cmd_harsanyi, "print the unanimity equal-split allocation")
    add("dual", cmd_dual, "print the dual game (semi-algebras only)")
    return parser


def _exit_code(e: GameError) -> int:
    if isinstance(e, (DocumentError, InvalidPartition, InvalidConfig)):
        return 2
    return 1


def run_cli(argv: Optional[Sequence[str]] = None, stdout: Optional[TextIO] = None,
            stderr: Optional[TextIO] = None) -> int:
    stdout = stdout if stdout is not None else sys.stdout
    stderr = stderr if stderr is not None else sys.stderr
    argv = list(sys.argv[1:] if argv is None else argv)

    parser = build_parser()
    with contextlib.redirect_stdout(stdout), contextlib.redirect_stderr(stderr):
        try:
            args = parser.parse_args(argv)
        except SystemExit as e:
            return e.code if isinstance(e.code, int) else 2

    package_logger = logging.getLogger(PACKAGE_LOGGER)
    handler = logging.StreamHandler(stderr)
    handler.setFormatter(logging.Formatter("%(levelname)s %(message)s"))
    previous_level = package_logger.level
    package_logger.addHandler(handler)
    package_logger.setLevel(logging.DEBUG if args.debug or debug_enabled() else logging.WARNING)
    try:
        ctx = Context(args, stdout, stderr, Limits.from_env())
        logger.debug("[cli] %s %s", args.command, argv)
        return args.handler(ctx)
    except GameError as e:
        stderr.write(f"error: {e}\n")
        return _exit_code(e)
    finally:
        package_logger.removeHandler(handler)
        package_logger.setLevel(previous_level)


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
